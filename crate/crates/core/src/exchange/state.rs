use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::orbital::Point3;
use crate::spin::SpinValue;
use crate::{CVector, Error, Result, C64, POSITION_TOLERANCE, PRUNE_THRESHOLD};

/// Spinors must have unit norm to within this.
const NORM_TOLERANCE: f64 = 1e-10;

/// Discrete quantum numbers (charge, flavor, ...) kept sorted by name.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tags(Vec<(String, String)>);

impl Tags {
    pub fn new<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let mut v: Vec<(String, String)> = pairs
            .into_iter()
            .map(|(k, v)| (k.into(), v.into()))
            .collect();
        v.sort();
        Tags(v)
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn set(&mut self, name: impl Into<String>, value: impl Into<String>) {
        let name = name.into();
        match self.0.binary_search_by(|(k, _)| k.as_str().cmp(&name)) {
            Ok(i) => self.0[i].1 = value.into(),
            Err(i) => self.0.insert(i, (name, value.into())),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, String)> {
        self.0.iter()
    }
}

/// One set of quantum numbers: a position, a spin with its spin state, and tags.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSet {
    pub position: Point3,
    pub spin: SpinValue,
    pub spin_state: CVector,
    pub tags: Tags,
}

impl ParticleSet {
    pub fn new(position: Point3, spin: SpinValue, spin_state: CVector, tags: Tags) -> Result<Self> {
        if !position.is_finite() {
            return Err(Error::Domain("particle position must be finite".into()));
        }
        check_spinor(spin, &spin_state)?;
        Ok(ParticleSet {
            position,
            spin,
            spin_state,
            tags,
        })
    }

    /// Particle in the basis state with index `k` (`m = s - k`).
    pub fn basis(position: Point3, spin: SpinValue, k: usize) -> Result<Self> {
        if k >= spin.dimension() {
            return Err(Error::Domain(format!(
                "basis index {k} out of range for spin {spin}"
            )));
        }
        let mut v = CVector::zeros(spin.dimension());
        v[k] = C64::new(1.0, 0.0);
        Self::new(position, spin, v, Tags::default())
    }

    pub fn with_tags(mut self, tags: Tags) -> Self {
        self.tags = tags;
        self
    }
}

fn check_spinor(spin: SpinValue, v: &CVector) -> Result<()> {
    if v.len() != spin.dimension() {
        return Err(Error::Domain(format!(
            "spinor has dimension {}, spin {spin} needs {}",
            v.len(),
            spin.dimension()
        )));
    }
    let norm = v.norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::Domain(format!("spinor norm is {norm}, expected 1")));
    }
    Ok(())
}

/// One product term `coeff · Π_j |x_j⟩ ⊗ |χ_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: C64,
    pub positions: Vec<Point3>,
    pub spinors: Vec<CVector>,
}

/// A finite sum of product terms over `n` particle slots.
///
/// The spin and tags of each slot are fixed for the whole state; only
/// positions, spinors and coefficients vary from term to term.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiParticleState {
    spins: Vec<SpinValue>,
    tags: Vec<Tags>,
    terms: Vec<Term>,
}

impl MultiParticleState {
    pub fn new(spins: Vec<SpinValue>, terms: Vec<Term>) -> Result<Self> {
        let tags = vec![Tags::default(); spins.len()];
        Self::with_tags(spins, tags, terms)
    }

    pub fn with_tags(spins: Vec<SpinValue>, tags: Vec<Tags>, terms: Vec<Term>) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::Domain("a state needs at least one particle".into()));
        }
        if tags.len() != spins.len() {
            return Err(Error::Domain(format!(
                "{} tag lists for {} particles",
                tags.len(),
                spins.len()
            )));
        }
        for (t, term) in terms.iter().enumerate() {
            if term.positions.len() != spins.len() || term.spinors.len() != spins.len() {
                return Err(Error::Domain(format!(
                    "term {t} has {} positions and {} spinors for {} particles",
                    term.positions.len(),
                    term.spinors.len(),
                    spins.len()
                )));
            }
            if !term.coeff.re.is_finite() || !term.coeff.im.is_finite() {
                return Err(Error::Domain(format!(
                    "term {t} has a non-finite coefficient"
                )));
            }
            if let Some(p) = term.positions.iter().find(|p| !p.is_finite()) {
                return Err(Error::Domain(format!(
                    "term {t} has a non-finite position {p:?}"
                )));
            }
            for (spin, v) in spins.iter().zip(&term.spinors) {
                check_spinor(*spin, v)?;
            }
        }
        Ok(MultiParticleState { spins, tags, terms })
    }

    /// The declared zero state.
    pub fn zero(spins: Vec<SpinValue>) -> Self {
        let tags = vec![Tags::default(); spins.len()];
        MultiParticleState {
            spins,
            tags,
            terms: Vec::new(),
        }
    }

    /// The single product term `coeff · Π_j |particle_j⟩`.
    pub fn product(coeff: C64, particles: &[ParticleSet]) -> Result<Self> {
        let spins = particles.iter().map(|p| p.spin).collect();
        let tags = particles.iter().map(|p| p.tags.clone()).collect();
        let term = Term {
            coeff,
            positions: particles.iter().map(|p| p.position).collect(),
            spinors: particles.iter().map(|p| p.spin_state.clone()).collect(),
        };
        Self::with_tags(spins, tags, vec![term])
    }

    pub fn n(&self) -> usize {
        self.spins.len()
    }

    pub fn spins(&self) -> &[SpinValue] {
        &self.spins
    }

    pub fn tags(&self) -> &[Tags] {
        &self.tags
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.norm() == 0.0)
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, k: C64) -> Self {
        let mut out = self.clone();
        out.terms.iter_mut().for_each(|t| t.coeff *= k);
        out
    }

    /// Concatenates the terms of two states over the same slots.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_same_slots(other)?;
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub(crate) fn map_terms(&self, f: impl FnMut(&Term) -> Result<Term>) -> Result<Self> {
        let terms = self.terms.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(MultiParticleState {
            spins: self.spins.clone(),
            tags: self.tags.clone(),
            terms,
        })
    }

    pub(crate) fn from_parts_unchecked(
        spins: Vec<SpinValue>,
        tags: Vec<Tags>,
        terms: Vec<Term>,
    ) -> Self {
        MultiParticleState { spins, tags, terms }
    }

    fn check_same_slots(&self, other: &Self) -> Result<()> {
        if self.spins != other.spins {
            return Err(Error::Domain("states have different particle spins".into()));
        }
        Ok(())
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::Domain(format!(
                "particle index {i} out of range for {} particles",
                self.n()
            )));
        }
        Ok(())
    }

    /// Checks that slots `a` and `b` hold identical quantum-number sets.
    pub(crate) fn check_identical_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_index(a)?;
        self.check_index(b)?;
        if a == b {
            return Err(Error::Domain(format!(
                "cannot exchange particle {a} with itself"
            )));
        }
        if self.spins[a] != self.spins[b] {
            return Err(Error::IdenticalSetViolation(format!(
                "particles {a} and {b} have spins {} and {}",
                self.spins[a], self.spins[b]
            )));
        }
        if self.tags[a] != self.tags[b] {
            return Err(Error::IdenticalSetViolation(format!(
                "particles {a} and {b} carry different tags"
            )));
        }
        Ok(())
    }

    /// Merges terms with matching positions and spinors, prunes coefficients
    /// below [`PRUNE_THRESHOLD`] and sorts the rest into canonical order.
    pub fn simplified(&self) -> Self {
        let mut merged: BTreeMap<Vec<i64>, Term> = BTreeMap::new();
        for term in &self.terms {
            merged
                .entry(term_key(term))
                .and_modify(|t| t.coeff += term.coeff)
                .or_insert_with(|| term.clone());
        }
        let terms = merged
            .into_values()
            .filter(|t| t.coeff.norm() >= PRUNE_THRESHOLD)
            .collect();
        MultiParticleState {
            spins: self.spins.clone(),
            tags: self.tags.clone(),
            terms,
        }
    }

    /// The state as a map from position tuples to dense spin tensors
    /// (row-major over slots, basis index `k` ↔ `m = s - k`).
    pub fn expand(&self) -> Vec<(Vec<Point3>, Vec<C64>)> {
        let dims: Vec<usize> = self.spins.iter().map(|s| s.dimension()).collect();
        let size: usize = dims.iter().product();
        let mut groups: Vec<(Vec<Point3>, Vec<C64>)> = Vec::new();
        for term in &self.terms {
            let tensor = product_tensor(term);
            let slot = groups
                .iter_mut()
                .find(|(pos, _)| positions_match(pos, &term.positions));
            match slot {
                Some((_, acc)) => acc.iter_mut().zip(&tensor).for_each(|(a, t)| *a += t),
                None => {
                    let mut acc = vec![C64::new(0.0, 0.0); size];
                    acc.iter_mut().zip(&tensor).for_each(|(a, t)| *a += t);
                    groups.push((term.positions.clone(), acc));
                }
            }
        }
        groups
    }
}

const POSITION_KEY_SCALE: f64 = 1e9;
const SPINOR_KEY_SCALE: f64 = 1e12;

fn term_key(term: &Term) -> Vec<i64> {
    let mut key = Vec::new();
    for p in &term.positions {
        key.extend(
            p.coords()
                .iter()
                .map(|c| (c * POSITION_KEY_SCALE).round() as i64),
        );
    }
    for v in &term.spinors {
        for z in v.iter() {
            key.push((z.re * SPINOR_KEY_SCALE).round() as i64);
            key.push((z.im * SPINOR_KEY_SCALE).round() as i64);
        }
    }
    key
}

pub(crate) fn positions_match(a: &[Point3], b: &[Point3]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(p, q)| p.max_coord_diff(*q) <= POSITION_TOLERANCE)
}

fn product_tensor(term: &Term) -> Vec<C64> {
    let mut out = vec![term.coeff];
    for v in &term.spinors {
        let mut next = Vec::with_capacity(out.len() * v.len());
        for &a in &out {
            next.extend(v.iter().map(|&b| a * b));
        }
        out = next;
    }
    out
}

/// Largest deviation between the expanded forms of two states over the same slots.
pub fn state_distance(lhs: &MultiParticleState, rhs: &MultiParticleState) -> Result<f64> {
    lhs.check_same_slots(rhs)?;
    let left = lhs.expand();
    let mut right = rhs.expand();
    let mut worst = 0.0f64;
    for (pos, tensor) in &left {
        let found = right.iter().position(|(p, _)| positions_match(p, pos));
        let dev = match found {
            Some(i) => {
                let (_, other) = right.swap_remove(i);
                max_dev(tensor, &other)
            }
            None => tensor.iter().map(|z| z.norm()).fold(0.0, f64::max),
        };
        worst = worst.max(dev);
    }
    for (_, tensor) in &right {
        worst = worst.max(tensor.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Least-squares ratio `λ` minimizing `‖lhs − λ·rhs‖` over the expanded forms,
/// with the residual of that fit. `None` when `rhs` vanishes.
pub(crate) fn best_ratio(
    lhs: &MultiParticleState,
    rhs: &MultiParticleState,
) -> Result<Option<(C64, f64)>> {
    lhs.check_same_slots(rhs)?;
    let left = lhs.expand();
    let right = rhs.expand();
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    for (pos, r) in &right {
        if let Some((_, l)) = left.iter().find(|(p, _)| positions_match(p, pos)) {
            num += r.iter().zip(l).map(|(r, l)| r.conj() * l).sum::<C64>();
        }
        den += r.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    if den == 0.0 {
        return Ok(None);
    }
    let ratio = num / den;
    let fit = state_distance(lhs, &rhs.scaled(ratio))?;
    Ok(Some((ratio, fit)))
}

/// The same state with argument slots `a` and `b` transposed.
pub fn transpose_slots(
    state: &MultiParticleState,
    a: usize,
    b: usize,
) -> Result<MultiParticleState> {
    state.check_index(a)?;
    state.check_index(b)?;
    let mut spins = state.spins.clone();
    let mut tags = state.tags.clone();
    spins.swap(a, b);
    tags.swap(a, b);
    let terms = state
        .terms
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.positions.swap(a, b);
            t.spinors.swap(a, b);
            t
        })
        .collect();
    Ok(MultiParticleState { spins, tags, terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(pos: Point3) -> ParticleSet {
        ParticleSet::basis(pos, SpinValue::HALF, 0).unwrap()
    }

    fn down(pos: Point3) -> ParticleSet {
        ParticleSet::basis(pos, SpinValue::HALF, 1).unwrap()
    }

    #[test]
    fn tags_are_sorted() {
        let t = Tags::new([("flavor", "u"), ("charge", "-1")]);
        let names: Vec<&str> = t.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(names, ["charge", "flavor"]);
        let mut t = t;
        t.set("mass", "1");
        t.set("charge", "+1");
        assert_eq!(t.get("charge"), Some("+1"));
        let names: Vec<&str> = t.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(names, ["charge", "flavor", "mass"]);
    }

    #[test]
    fn particle_validation() {
        let bad = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        assert!(ParticleSet::new(Point3::ORIGIN, SpinValue::HALF, bad, Tags::default()).is_err());
        let wrong_dim = CVector::from_vec(vec![C64::new(1.0, 0.0)]);
        assert!(
            ParticleSet::new(Point3::ORIGIN, SpinValue::HALF, wrong_dim, Tags::default()).is_err()
        );
        assert!(ParticleSet::basis(Point3::ORIGIN, SpinValue::HALF, 2).is_err());
    }

    #[test]
    fn state_validation() {
        let t = Term {
            coeff: C64::new(1.0, 0.0),
            positions: vec![Point3::ORIGIN],
            spinors: vec![CVector::from_vec(vec![
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ])],
        };
        assert!(
            MultiParticleState::new(vec![SpinValue::HALF, SpinValue::HALF], vec![t.clone()])
                .is_err()
        );
        assert!(MultiParticleState::new(vec![SpinValue::HALF], vec![t]).is_ok());
        assert!(MultiParticleState::new(vec![], vec![]).is_err());
    }

    #[test]
    fn simplify_cancels_and_merges() {
        let p = [
            up(Point3::new(-1.0, 0.0, 0.0)),
            down(Point3::new(1.0, 0.0, 0.0)),
        ];
        let a = MultiParticleState::product(C64::new(0.5, 0.0), &p).unwrap();
        let b = a.scaled(C64::new(-1.0, 0.0));
        let sum = a.plus(&b).unwrap().simplified();
        assert!(sum.terms().is_empty());
        assert!(sum.is_zero());
        let doubled = a.plus(&a).unwrap().simplified();
        assert_eq!(doubled.terms().len(), 1);
        assert_eq!(doubled.terms()[0].coeff, C64::new(1.0, 0.0));
    }

    #[test]
    fn distance_and_transpose() {
        let x1 = Point3::new(-1.0, 0.0, 0.0);
        let x2 = Point3::new(1.0, 0.0, 0.0);
        let s = MultiParticleState::product(C64::new(1.0, 0.0), &[up(x1), down(x2)]).unwrap();
        assert_eq!(state_distance(&s, &s).unwrap(), 0.0);
        let t = transpose_slots(&s, 0, 1).unwrap();
        assert_eq!(t.terms()[0].positions, vec![x2, x1]);
        assert_eq!(state_distance(&s, &t).unwrap(), 1.0);
        assert_eq!(
            state_distance(&transpose_slots(&t, 0, 1).unwrap(), &s).unwrap(),
            0.0
        );
    }

    #[test]
    fn expanded_form_sums_matching_positions() {
        let x1 = Point3::new(0.0, 0.0, 0.0);
        let x2 = Point3::new(0.0, 1.0, 0.0);
        let a = MultiParticleState::product(C64::new(1.0, 0.0), &[up(x1), down(x2)]).unwrap();
        let b = MultiParticleState::product(C64::new(2.0, 0.0), &[down(x1), up(x2)]).unwrap();
        let e = a.plus(&b).unwrap().expand();
        assert_eq!(e.len(), 1);
        // index = 2·k0 + k1
        assert_eq!(
            e[0].1,
            vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(0.0, 0.0)
            ]
        );
    }

    #[test]
    fn best_ratio_recovers_scale() {
        let x1 = Point3::new(0.0, 0.0, 0.0);
        let x2 = Point3::new(0.0, 1.0, 0.0);
        let a = MultiParticleState::product(C64::new(1.0, 1.0), &[up(x1), down(x2)]).unwrap();
        let k = C64::new(0.0, -1.0);
        let (ratio, fit) = best_ratio(&a.scaled(k), &a).unwrap().unwrap();
        assert!((ratio - k).norm() < 1e-15);
        assert!(fit < 1e-15);
        assert!(
            best_ratio(&a, &MultiParticleState::zero(a.spins().to_vec()))
                .unwrap()
                .is_none()
        );
    }
}
