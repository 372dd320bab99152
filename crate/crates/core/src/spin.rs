//! Spin-`s` generators and rotation operators.
//!
//! Basis ordering is highest weight first: index `k` carries `m = s - k`.
//! Rotations follow the `exp(+i·φ·n·S)` sign convention with `ħ = 1`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, exp_i_hermitian};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Axis norms may deviate from one by at most this much.
const AXIS_TOLERANCE: f64 = 1e-9;

/// A spin quantum number stored exactly as the integer `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinValue {
    twice_spin: u32,
}

impl SpinValue {
    pub const ZERO: SpinValue = SpinValue { twice_spin: 0 };
    pub const HALF: SpinValue = SpinValue { twice_spin: 1 };
    pub const ONE: SpinValue = SpinValue { twice_spin: 2 };

    pub const fn from_twice(twice_spin: u32) -> Self {
        SpinValue { twice_spin }
    }

    pub const fn twice_spin(self) -> u32 {
        self.twice_spin
    }

    /// `s` as a float; only for display and physics formulas, never for parity.
    pub fn value(self) -> f64 {
        f64::from(self.twice_spin) / 2.0
    }

    pub const fn dimension(self) -> usize {
        self.twice_spin as usize + 1
    }

    pub const fn is_fermion(self) -> bool {
        self.twice_spin % 2 == 1
    }

    /// `(-1)^{2s}`.
    pub const fn exchange_sign(self) -> i32 {
        if self.is_fermion() {
            -1
        } else {
            1
        }
    }

    /// Twice the magnetic quantum number at basis index `k`, i.e. `2s - 2k`.
    pub fn twice_m(self, k: usize) -> i64 {
        i64::from(self.twice_spin) - 2 * k as i64
    }
}

impl fmt::Display for SpinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_fermion() {
            write!(f, "{}/2", self.twice_spin)
        } else {
            write!(f, "{}", self.twice_spin / 2)
        }
    }
}

/// Validates a raw `2s`.
pub fn make_spin(twice_spin: i64) -> Result<SpinValue> {
    u32::try_from(twice_spin)
        .map(SpinValue::from_twice)
        .map_err(|_| {
            Error::Domain(format!(
                "twice_spin must be a non-negative 32-bit integer, got {twice_spin}"
            ))
        })
}

/// The Hermitian generators `S_x, S_y, S_z` for one spin.
///
/// Usually produced by [`generators`]; [`SpinOperatorSet::conjugated`] gives
/// a unitarily equivalent realization in another basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperatorSet {
    pub spin: SpinValue,
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
}

/// Ladder-operator construction of the spin-`s` generators.
pub fn generators(s: SpinValue) -> SpinOperatorSet {
    let dim = s.dimension();
    let two_s = i64::from(s.twice_spin());
    // <m+1|S+|m> = sqrt(s(s+1) - m(m+1)) sits at (k-1, k).
    let mut s_plus = CMatrix::zeros(dim, dim);
    for k in 1..dim {
        let two_m = s.twice_m(k);
        let four_c = two_s * (two_s + 2) - two_m * (two_m + 2);
        s_plus[(k - 1, k)] = C64::new((four_c as f64).sqrt() / 2.0, 0.0);
    }
    let s_minus = s_plus.adjoint();
    let sx = (&s_plus + &s_minus).map(|z| z * 0.5);
    let sy = (&s_plus - &s_minus).map(|z| z * C64::new(0.0, -0.5));
    let sz = CMatrix::from_diagonal(&CVector::from_fn(dim, |k, _| {
        C64::new(s.twice_m(k) as f64 / 2.0, 0.0)
    }));
    SpinOperatorSet {
        spin: s,
        sx,
        sy,
        sz,
    }
}

impl SpinOperatorSet {
    pub fn dimension(&self) -> usize {
        self.spin.dimension()
    }

    /// `n·S` for an arbitrary (not necessarily unit) vector `n`.
    pub fn along(&self, n: &Vector3<f64>) -> CMatrix {
        self.sx.map(|z| z * n.x) + self.sy.map(|z| z * n.y) + self.sz.map(|z| z * n.z)
    }

    /// `exp(i·angle·(axis·S))`.
    pub fn rotation(&self, axis: &Vector3<f64>, angle: f64) -> Result<UnitaryMatrix> {
        check_axis(axis)?;
        Ok(UnitaryMatrix {
            entries: exp_i_hermitian(&self.along(axis), angle),
            generator_axis: *axis,
            angle,
        })
    }

    /// State with `axis·S = s`, the stretch state along `axis`.
    pub fn stretch_state(&self, axis: &Vector3<f64>) -> Result<CVector> {
        check_axis(axis)?;
        Ok(linalg::top_eigenvector(&self.along(axis)))
    }

    /// The same algebra in a rotated basis: every generator becomes `U S U†`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<SpinOperatorSet> {
        if u.shape() != (self.dimension(), self.dimension()) {
            return Err(Error::Domain(format!(
                "conjugating unitary has shape {:?}, expected {}x{}",
                u.shape(),
                self.dimension(),
                self.dimension()
            )));
        }
        let ud = u.adjoint();
        Ok(SpinOperatorSet {
            spin: self.spin,
            sx: u * &self.sx * &ud,
            sy: u * &self.sy * &ud,
            sz: u * &self.sz * &ud,
        })
    }

    pub fn casimir(&self) -> CMatrix {
        &self.sx * &self.sx + &self.sy * &self.sy + &self.sz * &self.sz
    }

    /// Largest deviation over the three cyclic relations `[S_i, S_j] = i S_k`.
    pub fn commutator_residual(&self) -> f64 {
        let comm = |a: &CMatrix, b: &CMatrix| a * b - b * a;
        let i = C64::i();
        [
            linalg::max_abs_diff(&comm(&self.sx, &self.sy), &self.sz.map(|z| z * i)),
            linalg::max_abs_diff(&comm(&self.sy, &self.sz), &self.sx.map(|z| z * i)),
            linalg::max_abs_diff(&comm(&self.sz, &self.sx), &self.sy.map(|z| z * i)),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Deviation of `S²` from `s(s+1)·I`.
    pub fn casimir_residual(&self) -> f64 {
        let n = self.dimension();
        let s = self.spin.value();
        let expected = CMatrix::identity(n, n).map(|z| z * (s * (s + 1.0)));
        linalg::max_abs_diff(&self.casimir(), &expected)
    }

    /// Largest anti-Hermitian part over the three generators.
    pub fn hermiticity_residual(&self) -> f64 {
        [&self.sx, &self.sy, &self.sz]
            .into_iter()
            .map(|m| linalg::max_abs_diff(m, &m.adjoint()))
            .fold(0.0, f64::max)
    }
}

fn check_axis(axis: &Vector3<f64>) -> Result<()> {
    let norm = axis.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > AXIS_TOLERANCE {
        return Err(Error::Domain(format!(
            "rotation axis must be a unit vector, |n| = {norm}"
        )));
    }
    Ok(())
}

/// A unitary operator together with the rotation that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    pub entries: CMatrix,
    pub generator_axis: Vector3<f64>,
    pub angle: f64,
}

impl UnitaryMatrix {
    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn unitarity_residual(&self) -> f64 {
        linalg::unitarity_residual(&self.entries)
    }

    pub fn determinant(&self) -> C64 {
        self.entries.determinant()
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.entries * v
    }
}

/// `exp(i·angle·(axis·S))` with the standard generators of `s`.
pub fn rotation(axis: &Vector3<f64>, angle: f64, s: SpinValue) -> Result<UnitaryMatrix> {
    generators(s).rotation(axis, angle)
}

/// `exp(iπ S_z)` with entries taken from the residue of `2m mod 4`, so every
/// entry is exactly one of `1, i, -1, -i`.
pub fn exact_pi_z_rotation(s: SpinValue) -> UnitaryMatrix {
    let dim = s.dimension();
    let diag = CVector::from_fn(dim, |k, _| pi_phase(s.twice_m(k)));
    UnitaryMatrix {
        entries: CMatrix::from_diagonal(&diag),
        generator_axis: Vector3::z(),
        angle: PI,
    }
}

/// `e^{iπm}` for `2m = twice_m`.
pub fn pi_phase(twice_m: i64) -> C64 {
    match twice_m.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}
