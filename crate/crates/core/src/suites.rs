//! Invariant suites driven by `verify-all`, plus the seeded samplers they use.
//!
//! Every suite is a deterministic function of `(seed, twice_spin_max, trials,
//! tolerance)` and reports the largest residual it saw.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exchange::{
    apply_exchange, exchange_phase_with, permanent_amplitude, slater_amplitude, state_distance,
    symmetrize, verify_eq1, MultiParticleState, ParticleSet, Tags, Term,
};
use crate::linalg::max_abs_diff;
use crate::orbital::{build_midpoint_frame, orbital_shift_check, Point3};
use crate::region::{canonicalize, generic_equal, radial_order};
use crate::spin::{exact_pi_z_rotation, generators, SpinValue};
use crate::tilted::{chi, theta_l, tilted_gram, verify_tilt_transfer};
use crate::{CMatrix, CVector, Result, C64};

/// Completeness threshold for the smallest singular value of a tilted family.
pub const COMPLETENESS_THRESHOLD: f64 = 1e-8;
/// Tilt-transfer checks run up to this `2s` regardless of the configured maximum.
pub const TILT_TRANSFER_MAX_TWICE_SPIN: u32 = 4;

/// Seeded sampling helpers shared by the suites, the CLI and the benches.
pub mod sample {
    use super::*;

    /// Independent stream for `(seed, label, index)`.
    pub fn rng(seed: u64, label: u64, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(label.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index);
        rng
    }

    pub fn unit_vector<R: Rng>(rng: &mut R) -> Vector3<f64> {
        loop {
            let v = Vector3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let n = v.norm();
            if n > 1e-3 && n <= 1.0 {
                return v / n;
            }
        }
    }

    pub fn point<R: Rng>(rng: &mut R, half_width: f64) -> Point3 {
        Point3::new(
            rng.random_range(-half_width..half_width),
            rng.random_range(-half_width..half_width),
            rng.random_range(-half_width..half_width),
        )
    }

    /// Two points in `[-5, 5]³` at least 0.1 apart.
    pub fn point_pair<R: Rng>(rng: &mut R) -> (Point3, Point3) {
        loop {
            let a = point(rng, 5.0);
            let b = point(rng, 5.0);
            if a.distance(b) > 0.1 {
                return (a, b);
            }
        }
    }

    pub fn complex<R: Rng>(rng: &mut R) -> C64 {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }

    pub fn spinor<R: Rng>(rng: &mut R, dim: usize) -> CVector {
        loop {
            let v = CVector::from_fn(dim, |_, _| complex(rng));
            let n = v.norm();
            if n > 1e-3 {
                return v / C64::new(n, 0.0);
            }
        }
    }

    pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| complex(rng))
    }

    /// Unitary `Q` factor of a random complex matrix.
    pub fn unitary<R: Rng>(rng: &mut R, dim: usize) -> CMatrix {
        matrix(rng, dim, dim).qr().q()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub checks: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteParams {
    pub twice_spin_max: u32,
    pub trials: usize,
    pub tolerance: f64,
    pub seed: u64,
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    checks: usize,
    failures: usize,
    max_residual: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            tolerance,
            checks: 0,
            failures: 0,
            max_residual: 0.0,
        }
    }

    fn residual(&mut self, r: f64) {
        self.checks += 1;
        self.max_residual = self.max_residual.max(r);
        if r.is_nan() || r >= self.tolerance {
            self.failures += 1;
        }
    }

    fn flag(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            suite: self.name.to_string(),
            checks: self.checks,
            failures: self.failures,
            max_residual: self.max_residual,
            passed: self.failures == 0,
        }
    }
}

fn spins(max: u32) -> impl Iterator<Item = SpinValue> {
    (0..=max).map(SpinValue::from_twice)
}

pub fn spin_algebra_suite(p: &SuiteParams) -> Result<SuiteResult> {
    let mut t = Tally::new("spin_algebra", p.tolerance);
    for s in spins(p.twice_spin_max) {
        let ops = generators(s);
        let n = s.dimension();
        t.residual(ops.hermiticity_residual());
        t.residual(ops.commutator_residual());
        t.residual(ops.casimir_residual());

        let full = ops.rotation(&Vector3::z(), TAU)?;
        let sign = f64::from(s.exchange_sign());
        t.residual(max_abs_diff(
            &full.entries,
            &CMatrix::identity(n, n).map(|z| z * sign),
        ));

        let half = ops.rotation(&Vector3::z(), PI)?;
        t.residual(max_abs_diff(&half.entries, &exact_pi_z_rotation(s).entries));

        let mut rng = sample::rng(p.seed, 1, u64::from(s.twice_spin()));
        for _ in 0..p.trials {
            let axis = sample::unit_vector(&mut rng);
            let (alpha, beta) = (rng.random_range(-TAU..TAU), rng.random_range(-TAU..TAU));
            let ra = ops.rotation(&axis, alpha)?;
            let rb = ops.rotation(&axis, beta)?;
            let rab = ops.rotation(&axis, alpha + beta)?;
            t.residual(ra.unitarity_residual());
            t.residual((ra.determinant().norm() - 1.0).abs());
            t.residual(max_abs_diff(&(&ra.entries * &rb.entries), &rab.entries));
        }
    }
    Ok(t.finish())
}

pub fn orbital_suite(p: &SuiteParams) -> Result<SuiteResult> {
    let mut t = Tally::new("orbital", p.tolerance);
    let mut rng = sample::rng(p.seed, 2, 0);
    for _ in 0..p.trials {
        let (a, b) = sample::point_pair(&mut rng);
        let f = build_midpoint_frame(a, b)?;
        let g = build_midpoint_frame(b, a)?;
        t.residual(f.orthonormality_residual());
        t.residual(f.rotate(a, PI).distance(b));
        t.residual(f.rotate(b, PI).distance(a));
        t.residual(g.rotate(a, PI).distance(b));
        t.residual(f.origin.distance(g.origin));
        t.residual((f.x_hat + g.x_hat).norm());
        let q = sample::point(&mut rng, 5.0);
        t.residual(f.rotate(f.rotate(q, PI), PI).distance(q));
        let axis_dist = |x: Point3| {
            let l = f.local(x);
            l.x.hypot(l.y)
        };
        let angle = rng.random_range(-TAU..TAU);
        t.residual((axis_dist(f.rotate(q, angle)) - axis_dist(q)).abs());
    }
    let modes: Vec<i32> = (-16..=16).collect();
    for phi0 in [FRAC_PI_4, FRAC_PI_2, PI] {
        let r = orbital_shift_check(&modes, phi0)?;
        t.residual(r.spectral);
        t.residual(r.series);
    }
    Ok(t.finish())
}

pub fn exchange_suite(p: &SuiteParams) -> Result<SuiteResult> {
    let mut t = Tally::new("exchange_engine", p.tolerance);
    for s in spins(p.twice_spin_max) {
        let ops = generators(s);
        let mut rng = sample::rng(p.seed, 3, u64::from(s.twice_spin()));
        for _ in 0..p.trials {
            let (a, b) = sample::point_pair(&mut rng);
            let report = exchange_phase_with(&ops, a, b, p.tolerance)?;
            t.residual(report.residual);

            // double exchange on a generic spinor pair
            let particles = [
                ParticleSet::new(
                    a,
                    s,
                    sample::spinor(&mut rng, s.dimension()),
                    Tags::default(),
                )?,
                ParticleSet::new(
                    b,
                    s,
                    sample::spinor(&mut rng, s.dimension()),
                    Tags::default(),
                )?,
            ];
            let state = MultiParticleState::product(sample::complex(&mut rng), &particles)?;
            let twice = apply_exchange(&apply_exchange(&state, 0, 1)?, 0, 1)?;
            t.residual(state_distance(&twice, &state)?);
        }
    }

    // symmetrizer algebra for small particle counts
    let mut rng = sample::rng(p.seed, 3, 1000);
    for s in spins(p.twice_spin_max.min(2)) {
        for n in 2..=4usize {
            let terms: Vec<Term> = (0..2)
                .map(|_| Term {
                    coeff: sample::complex(&mut rng),
                    positions: (0..n).map(|_| sample::point(&mut rng, 3.0)).collect(),
                    spinors: (0..n)
                        .map(|_| sample::spinor(&mut rng, s.dimension()))
                        .collect(),
                })
                .collect();
            let state = MultiParticleState::new(vec![s; n], terms)?;
            let sym = symmetrize(&state, s.exchange_sign())?;
            t.residual(state_distance(&symmetrize(&sym, s.exchange_sign())?, &sym)?);
            for a in 0..n {
                for b in a + 1..n {
                    t.residual(verify_eq1(&sym, a, b, p.tolerance)?.residual);
                }
            }
        }
    }

    for n in 1..=8usize {
        let m = sample::matrix(&mut rng, n, n);
        let mut swapped = m.clone();
        if n > 1 {
            swapped.swap_columns(0, n - 1);
        }
        let sign = if n > 1 { -1.0 } else { 1.0 };
        let det = slater_amplitude(&m)?;
        let per = permanent_amplitude(&m)?;
        let scale = det.norm().max(per.norm()).max(1.0);
        t.residual((slater_amplitude(&swapped)? - det * sign).norm() / scale);
        t.residual((permanent_amplitude(&swapped)? - per).norm() / scale);
    }
    Ok(t.finish())
}

pub fn tilted_suite(p: &SuiteParams) -> Result<SuiteResult> {
    let mut t = Tally::new("tilted_basis", p.tolerance);
    for s in spins(p.twice_spin_max) {
        let two_s = i64::from(s.twice_spin());
        t.flag(theta_l(s, 0)? == 0.0);
        if two_s > 0 {
            t.flag(theta_l(s, two_s)? == PI);
        }
        for l in 0..=two_s {
            t.residual((chi(s, l)?.vector.norm() - 1.0).abs());
        }
        t.flag(tilted_gram(s).is_complete(COMPLETENESS_THRESHOLD));
        if s.twice_spin() <= TILT_TRANSFER_MAX_TWICE_SPIN {
            for la in 0..=two_s {
                for lb in 0..=two_s {
                    t.residual(verify_tilt_transfer(s, la, lb, p.tolerance)?.residual);
                }
            }
        }
    }
    Ok(t.finish())
}

pub fn region_suite(p: &SuiteParams) -> Result<SuiteResult> {
    let mut t = Tally::new("region", p.tolerance);
    let mut rng = sample::rng(p.seed, 5, 0);
    for _ in 0..p.trials {
        let n = rng.random_range(2..=6usize);
        let config: Vec<ParticleSet> = (0..n)
            .map(|_| ParticleSet::basis(sample::point(&mut rng, 5.0), SpinValue::HALF, 0))
            .collect::<Result<_>>()?;
        let center = sample::point(&mut rng, 1.0);
        let (canon, parity) = canonicalize(&config, center);
        let (again, parity2) = canonicalize(&canon, center);
        t.flag(again == canon && parity2 == 1);
        t.flag(radial_order(&canon, center).in_region_a);

        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if i != j {
            let mut swapped = config.clone();
            swapped.swap(i, j);
            let (canon_swapped, parity_swapped) = canonicalize(&swapped, center);
            t.flag(canon_swapped == canon && parity_swapped == -parity);
            t.flag(generic_equal(&config, &swapped, p.tolerance));
            t.flag(swapped != config);
        }
    }
    Ok(t.finish())
}

pub fn all_suites(p: &SuiteParams) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        spin_algebra_suite(p)?,
        orbital_suite(p)?,
        exchange_suite(p)?,
        tilted_suite(p)?,
        region_suite(p)?,
    ])
}
