//! Tilted spin states `χ(s, θ_l) = exp(iθ_l S_x) χ(s, 0)` with `θ_l = lπ/(2s)`,
//! and their multi-particle counterpart acting slot by slot.
//!
//! `χ(s, 0)` is the highest-weight state `(1, 0, …, 0)`. For `s = 0` the
//! family is the single state with `θ = 0`.

use std::f64::consts::PI;

use crate::exchange::{
    best_ratio, state_distance, symmetrize, transpose_slots, ExchangeReport, MultiParticleState,
    ParticleSet, Tags,
};
use crate::linalg::{exp_i_hermitian, min_singular_value};
use crate::orbital::{build_midpoint_frame, Point3};
use crate::spin::{generators, SpinValue};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Positions of the reference pair used by [`verify_tilt_transfer`].
const TRANSFER_POINTS: [Point3; 2] = [Point3::new(-0.7, 0.2, 0.1), Point3::new(0.9, -0.4, 0.3)];

#[derive(Debug, Clone, PartialEq)]
pub struct TiltedState {
    pub spin: SpinValue,
    pub l: u32,
    pub theta: f64,
    pub vector: CVector,
}

fn check_tilt(s: SpinValue, l: i64) -> Result<u32> {
    let two_s = i64::from(s.twice_spin());
    if two_s == 0 && l != 0 {
        return Err(Error::Domain(format!(
            "spin 0 has only the tilt l = 0, got {l}"
        )));
    }
    if !(0..=two_s).contains(&l) {
        return Err(Error::Domain(format!("tilt index {l} outside 0..={two_s}")));
    }
    Ok(l as u32)
}

/// `θ_l = lπ/(2s)`, or 0 for the spin-0 singleton.
pub fn theta_l(s: SpinValue, l: i64) -> Result<f64> {
    let l = check_tilt(s, l)?;
    if s.twice_spin() == 0 {
        return Ok(0.0);
    }
    Ok(f64::from(l) * PI / f64::from(s.twice_spin()))
}

fn tilt_operator(s: SpinValue, theta: f64) -> CMatrix {
    if theta == 0.0 {
        return CMatrix::identity(s.dimension(), s.dimension());
    }
    exp_i_hermitian(&generators(s).sx, theta)
}

pub fn chi(s: SpinValue, l: i64) -> Result<TiltedState> {
    let theta = theta_l(s, l)?;
    let mut base = CVector::zeros(s.dimension());
    base[0] = C64::new(1.0, 0.0);
    let vector = tilt_operator(s, theta) * base;
    Ok(TiltedState {
        spin: s,
        l: l as u32,
        theta,
        vector,
    })
}

/// Gram matrix of the tilted family and the smallest singular value of the
/// matrix whose columns are its members.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedGram {
    pub spin: SpinValue,
    pub thetas: Vec<f64>,
    pub gram: CMatrix,
    pub min_singular_value: f64,
}

impl TiltedGram {
    /// The family spans the spin space iff this holds.
    pub fn is_complete(&self, threshold: f64) -> bool {
        self.min_singular_value > threshold
    }
}

pub fn tilted_gram(s: SpinValue) -> TiltedGram {
    let dim = s.dimension();
    let family: Vec<TiltedState> = (0..dim as i64)
        .map(|l| chi(s, l).expect("l in range"))
        .collect();
    let columns = CMatrix::from_fn(dim, dim, |i, j| family[j].vector[i]);
    TiltedGram {
        spin: s,
        thetas: family.iter().map(|c| c.theta).collect(),
        gram: columns.adjoint() * &columns,
        min_singular_value: min_singular_value(&columns),
    }
}

/// Applies `exp(iθ_{l_j} S_x)` to the spinor in slot `j` of every term.
pub fn tilt_multi(state: &MultiParticleState, l_list: &[i64]) -> Result<MultiParticleState> {
    if l_list.len() != state.n() {
        return Err(Error::Domain(format!(
            "{} tilt indices for {} particles",
            l_list.len(),
            state.n()
        )));
    }
    let ops = state
        .spins()
        .iter()
        .zip(l_list)
        .map(|(&s, &l)| Ok(tilt_operator(s, theta_l(s, l)?)))
        .collect::<Result<Vec<_>>>()?;
    tilt_with(state, &ops)
}

fn tilt_with(state: &MultiParticleState, ops: &[CMatrix]) -> Result<MultiParticleState> {
    let terms = state
        .terms()
        .iter()
        .map(|t| {
            let mut t = t.clone();
            for (v, op) in t.spinors.iter_mut().zip(ops) {
                *v = op * &*v;
            }
            t
        })
        .collect();
    MultiParticleState::with_tags(state.spins().to_vec(), state.tags().to_vec(), terms)
}

/// Checks that tilting an exchange-symmetric base state keeps the exchange
/// relation once the tilt labels travel with their argument slots:
/// `T(la, lb) Ψ₀ = (−1)^{2s} · [T(lb, la) Ψ₀]` with slots transposed.
pub fn verify_tilt_transfer(s: SpinValue, la: i64, lb: i64, tol: f64) -> Result<ExchangeReport> {
    check_tilt(s, la)?;
    check_tilt(s, lb)?;
    let base = chi(s, 0)?.vector;
    let particles: Vec<ParticleSet> = TRANSFER_POINTS
        .iter()
        .map(|&p| ParticleSet::new(p, s, base.clone(), Tags::default()))
        .collect::<Result<_>>()?;
    let sign = s.exchange_sign();
    let psi0 = symmetrize(
        &MultiParticleState::product(C64::new(1.0, 0.0), &particles)?,
        sign,
    )?;

    let tilted = tilt_multi(&psi0, &[la, lb])?;
    let swapped_labels = transpose_slots(&tilt_multi(&psi0, &[lb, la])?, 0, 1)?;
    let k = C64::new(f64::from(sign), 0.0);
    let residual = state_distance(&tilted, &swapped_labels.scaled(k))?;
    let frame = build_midpoint_frame(TRANSFER_POINTS[0], TRANSFER_POINTS[1]).ok();
    let measured = best_ratio(&tilted, &swapped_labels)?.map_or(k, |(ratio, _)| ratio);
    Ok(ExchangeReport::new(s, measured, residual, frame, tol))
}
