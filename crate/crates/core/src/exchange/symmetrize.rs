use itertools::Itertools;

use super::state::{MultiParticleState, Term};
use crate::linalg::permutation_sign;
use crate::{Error, Result, C64};

/// Largest particle count accepted by [`symmetrize`] (`8! = 40320` permutations per term).
pub const MAX_SYMMETRIZE_PARTICLES: usize = 8;

/// `(1/n!) Σ_P sign^{parity(P)} P Ψ`, where `P` permutes the argument slots.
///
/// `sign = +1` symmetrizes, `sign = -1` antisymmetrizes. The result is merged
/// and pruned, so an antisymmetrized state with two identical slots comes
/// back as the zero state.
pub fn symmetrize(state: &MultiParticleState, sign: i32) -> Result<MultiParticleState> {
    if sign != 1 && sign != -1 {
        return Err(Error::Domain(format!(
            "symmetrization sign must be +1 or -1, got {sign}"
        )));
    }
    let n = state.n();
    if n > MAX_SYMMETRIZE_PARTICLES {
        return Err(Error::TooLarge {
            n,
            max: MAX_SYMMETRIZE_PARTICLES,
        });
    }
    for j in 1..n {
        if state.spins()[j] != state.spins()[0] || state.tags()[j] != state.tags()[0] {
            return Err(Error::IdenticalSetViolation(format!(
                "particle {j} differs from particle 0 in spin or tags"
            )));
        }
    }
    let perms: Vec<(Vec<usize>, f64)> = (0..n)
        .permutations(n)
        .map(|p| {
            let parity = if sign == -1 {
                f64::from(permutation_sign(&p))
            } else {
                1.0
            };
            (p, parity)
        })
        .collect();
    let norm = 1.0 / perms.len() as f64;
    let mut terms = Vec::with_capacity(state.terms().len() * perms.len());
    for term in state.terms() {
        for (p, parity) in &perms {
            terms.push(Term {
                coeff: term.coeff * C64::new(parity * norm, 0.0),
                positions: p.iter().map(|&k| term.positions[k]).collect(),
                spinors: p.iter().map(|&k| term.spinors[k].clone()).collect(),
            });
        }
    }
    Ok(MultiParticleState::from_parts_unchecked(
        state.spins().to_vec(),
        state.tags().to_vec(),
        terms,
    )
    .simplified())
}
