//! The orbital half of the exchange: the midpoint frame spanned by two
//! representative points, rigid rotations about its `z` axis, and a check
//! that `exp(iφ₀ L_z)` with `L_z = i ∂/∂φ` (ħ = 1) acts on angular Fourier
//! modes as the shift `f(φ) ↦ f(φ − φ₀)`.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64, COINCIDENCE_TOLERANCE};

/// Number of angles sampled by [`orbital_shift_check`].
pub const SHIFT_GRID_POINTS: usize = 256;
/// Truncation order of the operator-exponential series.
pub const SHIFT_SERIES_ORDER: usize = 40;
/// Largest angular mode accepted by [`orbital_shift_check`].
pub const MAX_SHIFT_MODE: i32 = 64;

/// Reference directions tried, in order, when choosing the frame `z` axis.
const Z_REFERENCES: [Vector3<f64>; 2] = [Vector3::new(0.0, 0.0, 1.0), Vector3::new(0.0, 1.0, 0.0)];
const PARALLEL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Point3::new(v.x, v.y, v.z)
    }

    pub fn to_vector(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).to_vector().norm()
    }

    /// Largest coordinate difference; the metric used for term matching.
    pub fn max_coord_diff(self, other: Point3) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    pub fn coords(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add<Vector3<f64>> for Point3 {
    type Output = Point3;
    fn add(self, v: Vector3<f64>) -> Point3 {
        Point3::new(self.x + v.x, self.y + v.y, self.z + v.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Orthonormal right-handed frame with origin halfway between two points and
/// `x_hat` pointing from the first to the second.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MidpointFrame {
    pub origin: Point3,
    pub x_hat: Vector3<f64>,
    pub y_hat: Vector3<f64>,
    pub z_hat: Vector3<f64>,
}

/// Builds the exchange frame for the points `a` and `b`.
///
/// `z_hat` is `x_hat × r` normalized, with `r` the first of `(0,0,1)`,
/// `(0,1,0)` not parallel to `x_hat`; `y_hat = z_hat × x_hat`.
pub fn build_midpoint_frame(a: Point3, b: Point3) -> Result<MidpointFrame> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(
            "frame points must have finite coordinates".into(),
        ));
    }
    let separation = b.to_vector() - a.to_vector();
    let distance = separation.norm();
    if distance <= COINCIDENCE_TOLERANCE {
        return Err(Error::DegenerateGeometry {
            distance,
            tolerance: COINCIDENCE_TOLERANCE,
        });
    }
    let x_hat = separation / distance;
    let z_raw = Z_REFERENCES
        .iter()
        .map(|r| x_hat.cross(r))
        .find(|c| c.norm() >= PARALLEL_TOLERANCE)
        .expect("x_hat cannot be parallel to two orthogonal references");
    let z_hat = z_raw.normalize();
    let y_hat = z_hat.cross(&x_hat);
    let origin = Point3::from_vector(&((a.to_vector() + b.to_vector()) * 0.5));
    Ok(MidpointFrame {
        origin,
        x_hat,
        y_hat,
        z_hat,
    })
}

impl MidpointFrame {
    /// Coordinates of `p` relative to the frame (origin-shifted and projected).
    pub fn local(&self, p: Point3) -> Vector3<f64> {
        let d = (p - self.origin).to_vector();
        Vector3::new(d.dot(&self.x_hat), d.dot(&self.y_hat), d.dot(&self.z_hat))
    }

    pub fn global(&self, local: &Vector3<f64>) -> Point3 {
        self.origin + (self.x_hat * local.x + self.y_hat * local.y + self.z_hat * local.z)
    }

    /// Largest violation of orthonormality or right-handedness.
    pub fn orthonormality_residual(&self) -> f64 {
        let (x, y, z) = (&self.x_hat, &self.y_hat, &self.z_hat);
        [
            (x.norm() - 1.0).abs(),
            (y.norm() - 1.0).abs(),
            (z.norm() - 1.0).abs(),
            x.dot(y).abs(),
            y.dot(z).abs(),
            z.dot(x).abs(),
            (x.cross(y) - z).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Rigid rotation of `p` through `angle` about the frame's `z` axis.
    pub fn rotate(&self, p: Point3, angle: f64) -> Point3 {
        let l = self.local(p);
        let (sin, cos) = angle.sin_cos();
        self.global(&Vector3::new(
            cos * l.x - sin * l.y,
            sin * l.x + cos * l.y,
            l.z,
        ))
    }
}

pub fn rotate_about_frame_z(frame: &MidpointFrame, p: Point3, angle: f64) -> Point3 {
    frame.rotate(p, angle)
}

/// Residuals of the two realizations of `exp(iφ₀ L_z)` against the sampled shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftResidual {
    /// Multiplication of mode `m` by `e^{-imφ₀}`.
    pub spectral: f64,
    /// Order-40 series in `L_z`, with `L_z e^{imφ} = -m e^{imφ}` applied exactly.
    pub series: f64,
}

impl ShiftResidual {
    pub fn max(&self) -> f64 {
        self.spectral.max(self.series)
    }
}

/// Compares `exp(iφ₀ L_z)` with the shift `f(φ) ↦ f(φ − φ₀)` on each mode
/// `f_m = e^{imφ}`, over a uniform grid of [`SHIFT_GRID_POINTS`] angles.
///
/// The truncated series is applied over `k` equal substeps `φ₀/k` with `k`
/// chosen so that `|m·φ₀/k| ≤ 1` for every mode; a single order-40 series
/// cannot resolve `|mφ₀|` of order 50.
pub fn orbital_shift_check(modes: &[i32], phi0: f64) -> Result<ShiftResidual> {
    if modes.is_empty() {
        return Err(Error::Domain("mode list must not be empty".into()));
    }
    if let Some(m) = modes.iter().find(|m| m.abs() > MAX_SHIFT_MODE) {
        return Err(Error::Domain(format!(
            "|m| = {} exceeds {MAX_SHIFT_MODE}",
            m.abs()
        )));
    }
    if !phi0.is_finite() {
        return Err(Error::Domain("shift angle must be finite".into()));
    }
    let max_mode = modes.iter().map(|m| m.unsigned_abs()).max().unwrap_or(0);
    let steps = (f64::from(max_mode) * phi0.abs()).ceil().max(1.0) as usize;
    let step = phi0 / steps as f64;

    let mut residual = ShiftResidual {
        spectral: 0.0,
        series: 0.0,
    };
    for &m in modes {
        let m = f64::from(m);
        let spectral_factor = C64::from_polar(1.0, -m * phi0);
        let step_factor = truncated_exp(C64::new(0.0, step) * -m, SHIFT_SERIES_ORDER);
        let series_factor = (0..steps).fold(C64::new(1.0, 0.0), |acc, _| acc * step_factor);
        for k in 0..SHIFT_GRID_POINTS {
            let phi = TAU * k as f64 / SHIFT_GRID_POINTS as f64;
            let shifted = C64::from_polar(1.0, m * (phi - phi0));
            let mode = C64::from_polar(1.0, m * phi);
            residual.spectral = residual
                .spectral
                .max((spectral_factor * mode - shifted).norm());
            residual.series = residual.series.max((series_factor * mode - shifted).norm());
        }
    }
    Ok(residual)
}

/// `Σ_{k=0}^{order} x^k / k!`.
fn truncated_exp(x: C64, order: usize) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..=order {
        term = term * x / k as f64;
        sum += term;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn symmetric_frame() {
        let f =
            build_midpoint_frame(Point3::new(-1.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(f.origin, Point3::ORIGIN);
        assert_eq!(f.x_hat, Vector3::x());
        assert!(f.orthonormality_residual() < 1e-12);
    }

    #[test]
    fn shifted_frame() {
        let f = build_midpoint_frame(Point3::ORIGIN, Point3::new(2.0, 0.0, 0.0)).unwrap();
        assert_eq!(f.origin, Point3::new(1.0, 0.0, 0.0));
        assert_eq!(f.x_hat, Vector3::x());
    }

    #[test]
    fn coincident_points_rejected() {
        let err = build_midpoint_frame(Point3::new(1.0, 1.0, 0.0), Point3::new(1.0, 1.0, 1e-12))
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateGeometry { .. }));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(build_midpoint_frame(Point3::new(f64::NAN, 0.0, 0.0), Point3::ORIGIN).is_err());
    }

    #[test]
    fn frame_along_z_falls_back_to_y_reference() {
        let f = build_midpoint_frame(Point3::ORIGIN, Point3::new(0.0, 0.0, 3.0)).unwrap();
        assert_eq!(f.x_hat, Vector3::z());
        assert!((f.z_hat - Vector3::new(-1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!(f.orthonormality_residual() < 1e-12);
    }

    #[test]
    fn pi_rotation_swaps_endpoints() {
        let a = Point3::ORIGIN;
        let b = Point3::new(2.0, 0.0, 0.0);
        let f = build_midpoint_frame(a, b).unwrap();
        assert!(f.rotate(a, PI).distance(b) < 1e-15);
        assert!(f.rotate(b, PI).distance(a) < 1e-15);
    }

    #[test]
    fn zero_rotation_is_identity() {
        let f =
            build_midpoint_frame(Point3::new(0.3, -1.0, 2.0), Point3::new(1.0, 4.0, -2.0)).unwrap();
        let p = Point3::new(5.0, -7.0, 1.5);
        assert!(f.rotate(p, 0.0).distance(p) < 1e-14);
    }

    #[test]
    fn quarter_turn_from_y_axis_frame() {
        // a=(0,0,0), b=(0,2,0): origin (0,1,0), x_hat = y, z_hat = y × z = x, y_hat = z.
        let a = Point3::ORIGIN;
        let f = build_midpoint_frame(a, Point3::new(0.0, 2.0, 0.0)).unwrap();
        let p = f.rotate(a, FRAC_PI_2);
        // a sits at local (-1, 0, 0); a quarter turn takes it to local (0, -1, 0),
        // i.e. origin - y_hat = (0, 1, -1).
        assert!(p.distance(Point3::new(0.0, 1.0, -1.0)) < 1e-15);
        assert!((p.distance(f.origin) - 1.0).abs() < 1e-15);
        assert!(f.local(p).z.abs() < 1e-15);
    }

    #[test]
    fn shift_check_examples() {
        assert_eq!(orbital_shift_check(&[0], 1.234).unwrap().max(), 0.0);
        assert!(orbital_shift_check(&[1], PI).unwrap().max() < 1e-12);
        assert!(orbital_shift_check(&[2], FRAC_PI_2).unwrap().max() < 1e-12);
    }

    #[test]
    fn shift_check_high_modes() {
        let modes: Vec<i32> = (-16..=16).collect();
        for phi0 in [FRAC_PI_4, FRAC_PI_2, PI] {
            let r = orbital_shift_check(&modes, phi0).unwrap();
            assert!(r.spectral < 1e-12, "{r:?}");
            assert!(r.series < 1e-8, "{r:?}");
        }
    }

    #[test]
    fn shift_check_errors() {
        assert!(orbital_shift_check(&[], 1.0).is_err());
        assert!(orbital_shift_check(&[65], 1.0).is_err());
        assert!(orbital_shift_check(&[1], f64::INFINITY).is_err());
    }

    #[test]
    fn truncated_series_converges() {
        let x = C64::new(0.0, 0.7);
        assert!((truncated_exp(x, 40) - x.exp()).norm() < 1e-15);
    }
}
