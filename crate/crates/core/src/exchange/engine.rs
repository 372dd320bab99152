//! The exchange operator `R_a R_b`: two π rotations about the `z` axis of the
//! midpoint frame, acting on positions and spinors of the exchanged pair.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::state::{best_ratio, state_distance, transpose_slots, MultiParticleState, Term};
use crate::orbital::{build_midpoint_frame, MidpointFrame, Point3};
use crate::spin::{generators, SpinOperatorSet, SpinValue};
use crate::{Error, Result, C64, DEFAULT_TOLERANCE};

/// Fit residual above which a measured phase is not considered a unique ratio.
const RATIO_CONSISTENCY: f64 = 1e-8;

/// Outcome of one exchange-phase or exchange-relation check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExchangeReport {
    pub spin: SpinValue,
    pub measured_phase: C64,
    pub expected_phase: C64,
    pub residual: f64,
    /// Frame of the exchanged pair; absent when the pair coincides in the
    /// first term (verify-style checks only).
    pub geometry: Option<MidpointFrame>,
    pub tolerance: f64,
    pub passed: bool,
}

impl ExchangeReport {
    pub(crate) fn new(
        spin: SpinValue,
        measured_phase: C64,
        residual: f64,
        geometry: Option<MidpointFrame>,
        tolerance: f64,
    ) -> Self {
        ExchangeReport {
            spin,
            measured_phase,
            expected_phase: C64::new(f64::from(spin.exchange_sign()), 0.0),
            residual,
            geometry,
            tolerance,
            passed: residual < tolerance,
        }
    }
}

/// Applies `R_a R_b` to every term with the standard generators of the pair's spin.
pub fn apply_exchange(
    state: &MultiParticleState,
    a: usize,
    b: usize,
) -> Result<MultiParticleState> {
    state.check_identical_pair(a, b)?;
    apply_exchange_with(state, a, b, &generators(state.spins()[a]))
}

/// [`apply_exchange`] with a caller-supplied realization of the spin generators.
///
/// Per term: build the midpoint frame of the two positions, rotate each
/// position through π about the frame `z` axis, and multiply each of the two
/// spinors by `exp(iπ ẑ·S)`. Coefficients are left alone.
pub fn apply_exchange_with(
    state: &MultiParticleState,
    a: usize,
    b: usize,
    ops: &SpinOperatorSet,
) -> Result<MultiParticleState> {
    state.check_identical_pair(a, b)?;
    if ops.spin != state.spins()[a] {
        return Err(Error::IdenticalSetViolation(format!(
            "generators are for spin {}, particles carry spin {}",
            ops.spin,
            state.spins()[a]
        )));
    }
    state.map_terms(|term| {
        let frame = build_midpoint_frame(term.positions[a], term.positions[b])?;
        let r = ops.rotation(&frame.z_hat, PI)?;
        let mut out: Term = term.clone();
        out.positions[a] = frame.rotate(term.positions[a], PI);
        out.positions[b] = frame.rotate(term.positions[b], PI);
        out.spinors[a] = r.apply(&term.spinors[a]);
        out.spinors[b] = r.apply(&term.spinors[b]);
        Ok(out)
    })
}

/// Exchange phase of two particles of spin `s` at `a` and `b`, both in the
/// stretch state along the exchange axis.
pub fn exchange_phase(s: SpinValue, a: Point3, b: Point3) -> Result<ExchangeReport> {
    exchange_phase_with(&generators(s), a, b, DEFAULT_TOLERANCE)
}

/// [`exchange_phase`] with caller-supplied generators and tolerance.
///
/// The exchanged state is compared with the original term after swapping
/// only its positions; the measured phase is the unique ratio between the two.
pub fn exchange_phase_with(
    ops: &SpinOperatorSet,
    a: Point3,
    b: Point3,
    tolerance: f64,
) -> Result<ExchangeReport> {
    let frame = build_midpoint_frame(a, b)?;
    let chi = ops.stretch_state(&frame.z_hat)?;
    let spins = vec![ops.spin; 2];
    let original = MultiParticleState::new(
        spins.clone(),
        vec![Term {
            coeff: C64::new(1.0, 0.0),
            positions: vec![a, b],
            spinors: vec![chi.clone(), chi.clone()],
        }],
    )?;
    let exchanged = apply_exchange_with(&original, 0, 1, ops)?;
    let swapped = MultiParticleState::new(
        spins,
        vec![Term {
            coeff: C64::new(1.0, 0.0),
            positions: vec![b, a],
            spinors: vec![chi.clone(), chi],
        }],
    )?;
    let (measured, fit) = best_ratio(&exchanged, &swapped)?
        .ok_or_else(|| Error::Consistency("reference state vanished".into()))?;
    if fit > RATIO_CONSISTENCY {
        return Err(Error::Consistency(format!(
            "exchanged state is not a multiple of the swapped state (fit residual {fit:e})"
        )));
    }
    let report = ExchangeReport::new(ops.spin, measured, 0.0, Some(frame), tolerance);
    let residual = (measured - report.expected_phase).norm();
    Ok(ExchangeReport {
        residual,
        passed: residual < tolerance,
        ..report
    })
}

/// Checks `Ψ = (−1)^{2s} · Ψ|_{a↔b}` for the identical slots `a` and `b`.
///
/// The residual is the largest deviation between the expanded forms; the
/// measured phase is the best-fit ratio of `Ψ` to its transpose.
pub fn verify_eq1(
    state: &MultiParticleState,
    a: usize,
    b: usize,
    tol: f64,
) -> Result<ExchangeReport> {
    state.check_identical_pair(a, b)?;
    let spin = state.spins()[a];
    let sign = C64::new(f64::from(spin.exchange_sign()), 0.0);
    let transposed = transpose_slots(state, a, b)?;
    let residual = state_distance(state, &transposed.scaled(sign))?;
    let measured = best_ratio(state, &transposed)?.map_or(sign, |(ratio, _)| ratio);
    let geometry = state
        .terms()
        .first()
        .and_then(|t| build_midpoint_frame(t.positions[a], t.positions[b]).ok());
    Ok(ExchangeReport::new(spin, measured, residual, geometry, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchange::state::ParticleSet;
    use crate::exchange::symmetrize;
    use crate::CVector;

    fn pair(s: SpinValue, spinor: CVector) -> Vec<ParticleSet> {
        let tags = crate::Tags::default();
        vec![
            ParticleSet::new(Point3::new(-1.0, 0.0, 0.0), s, spinor.clone(), tags.clone()).unwrap(),
            ParticleSet::new(Point3::new(1.0, 0.0, 0.0), s, spinor, tags).unwrap(),
        ]
    }

    #[test]
    fn spinless_exchange_swaps_positions_only() {
        let p = pair(
            SpinValue::ZERO,
            CVector::from_element(1, C64::new(1.0, 0.0)),
        );
        let state = MultiParticleState::product(C64::new(0.3, -0.7), &p).unwrap();
        let out = apply_exchange(&state, 0, 1).unwrap();
        let t = &out.terms()[0];
        assert!(t.positions[0].distance(Point3::new(1.0, 0.0, 0.0)) < 1e-15);
        assert!(t.positions[1].distance(Point3::new(-1.0, 0.0, 0.0)) < 1e-15);
        assert_eq!(t.coeff, C64::new(0.3, -0.7));
        assert!((t.spinors[0][0] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn spin_half_stretch_states_pick_up_i_each() {
        // x_hat = x and x × z = -y, so the frame z axis is -y here.
        let frame =
            build_midpoint_frame(Point3::new(-1.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0)).unwrap();
        let ops = generators(SpinValue::HALF);
        let chi = ops.stretch_state(&frame.z_hat).unwrap();
        let state =
            MultiParticleState::product(C64::new(1.0, 0.0), &pair(SpinValue::HALF, chi.clone()))
                .unwrap();
        let out = apply_exchange(&state, 0, 1).unwrap();
        let t = &out.terms()[0];
        for j in 0..2 {
            let factor = chi.dotc(&t.spinors[j]);
            assert!((factor - C64::i()).norm() < 1e-12, "{factor}");
        }
    }

    #[test]
    fn exchange_phase_examples() {
        let a = Point3::new(0.2, -1.0, 0.5);
        let b = Point3::new(1.5, 0.3, -0.4);
        let r = exchange_phase(SpinValue::HALF, a, b).unwrap();
        assert!((r.measured_phase - C64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(r.passed);
        let r = exchange_phase(SpinValue::ONE, a, b).unwrap();
        assert!((r.measured_phase - C64::new(1.0, 0.0)).norm() < 1e-12);
        let r = exchange_phase(SpinValue::ZERO, a, b).unwrap();
        assert!((r.measured_phase - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(r.expected_phase, C64::new(1.0, 0.0));
    }

    #[test]
    fn exchange_rejects_bad_pairs() {
        let p = Point3::new(1.0, 2.0, 3.0);
        assert!(matches!(
            exchange_phase(SpinValue::HALF, p, p),
            Err(Error::DegenerateGeometry { .. })
        ));

        let mixed = vec![
            ParticleSet::basis(Point3::new(-1.0, 0.0, 0.0), SpinValue::HALF, 0).unwrap(),
            ParticleSet::basis(Point3::new(1.0, 0.0, 0.0), SpinValue::ONE, 0).unwrap(),
        ];
        let state = MultiParticleState::product(C64::new(1.0, 0.0), &mixed).unwrap();
        assert!(matches!(
            apply_exchange(&state, 0, 1),
            Err(Error::IdenticalSetViolation(_))
        ));
        assert!(matches!(
            verify_eq1(&state, 0, 1, 1e-10),
            Err(Error::IdenticalSetViolation(_))
        ));
        assert!(apply_exchange(&state, 0, 0).is_err());
        assert!(apply_exchange(&state, 0, 5).is_err());

        let charged = vec![
            mixed[0]
                .clone()
                .with_tags(crate::Tags::new([("charge", "-1")])),
            ParticleSet::basis(Point3::new(1.0, 0.0, 0.0), SpinValue::HALF, 0)
                .unwrap()
                .with_tags(crate::Tags::new([("charge", "+1")])),
        ];
        let state = MultiParticleState::product(C64::new(1.0, 0.0), &charged).unwrap();
        assert!(matches!(
            apply_exchange(&state, 0, 1),
            Err(Error::IdenticalSetViolation(_))
        ));

        let same_spot = vec![
            ParticleSet::basis(Point3::ORIGIN, SpinValue::HALF, 0).unwrap(),
            ParticleSet::basis(Point3::ORIGIN, SpinValue::HALF, 1).unwrap(),
        ];
        let state = MultiParticleState::product(C64::new(1.0, 0.0), &same_spot).unwrap();
        assert!(matches!(
            apply_exchange(&state, 0, 1),
            Err(Error::DegenerateGeometry { .. })
        ));
    }

    #[test]
    fn generators_must_match_spin() {
        let p = pair(
            SpinValue::HALF,
            CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
        );
        let state = MultiParticleState::product(C64::new(1.0, 0.0), &p).unwrap();
        assert!(apply_exchange_with(&state, 0, 1, &generators(SpinValue::ONE)).is_err());
    }

    #[test]
    fn verify_eq1_examples() {
        let x1 = Point3::new(-1.0, 0.5, 0.0);
        let x2 = Point3::new(1.0, 0.0, 0.25);
        let half = |k| ParticleSet::basis(x1, SpinValue::HALF, k).unwrap();
        let prod = MultiParticleState::product(
            C64::new(1.0, 0.0),
            &[half(0), ParticleSet::basis(x2, SpinValue::HALF, 1).unwrap()],
        )
        .unwrap();

        let anti = symmetrize(&prod, -1).unwrap();
        let r = verify_eq1(&anti, 0, 1, 1e-10).unwrap();
        assert!(r.passed && r.residual < 1e-12);
        assert!((r.measured_phase + 1.0).norm() < 1e-12);

        let sym = symmetrize(&prod, 1).unwrap();
        let r = verify_eq1(&sym, 0, 1, 1e-10).unwrap();
        assert!(!r.passed);
        // Ψ symmetric, so Ψ - (-1)Ψᵀ = 2Ψ and the largest entry of Ψ is 1/2.
        assert!((r.residual - 2.0 * sym.max_coeff()).abs() < 1e-12);

        let one = |p, k| ParticleSet::basis(p, SpinValue::ONE, k).unwrap();
        let prod1 =
            MultiParticleState::product(C64::new(1.0, 0.0), &[one(x1, 0), one(x2, 2)]).unwrap();
        let r = verify_eq1(&symmetrize(&prod1, 1).unwrap(), 0, 1, 1e-10).unwrap();
        assert!(r.passed);
    }
}
