//! Minimal sets, traces and type labels of prime congruence quotients.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{Elem, FiniteAlgebra};
use crate::clone::{realize, unary_poly_clone, IdempotentPoly, PolyClone};
use crate::commutator::commutator;
use crate::congruence::{congruence_lattice, principal_congruence, CongruenceLattice};
use crate::error::{Error, Result};
use crate::malcev::induced_on_pair_set;
use crate::partition::Partition;

/// An `(α, β)`-minimal set with its idempotent witness and trace structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalSet {
    pub u: Vec<Elem>,
    pub e: IdempotentPoly,
    /// The sets `U ∩ B` for β-classes `B` meeting at least two α-classes.
    pub traces: Vec<Vec<Elem>>,
    pub body: Vec<Elem>,
    pub tail: Vec<Elem>,
}

/// Checks `α ≺ β`: every pair of β outside α regenerates β over α.
pub fn check_cover(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition) -> Result<()> {
    if !alg.is_compatible(alpha) || !alg.is_compatible(beta) {
        return Err(Error::NotACongruence);
    }
    if !alpha.refines(beta) || alpha == beta {
        return Err(Error::NotACover(format!("{alpha} is not strictly below {beta}")));
    }
    for (a, b) in beta.pairs() {
        if !alpha.related(a, b) {
            let g = alpha.join(&principal_congruence(alg, a, b)?);
            if &g != beta {
                return Err(Error::NotACover(format!(
                    "{g} lies strictly between {alpha} and {beta}"
                )));
            }
        }
    }
    Ok(())
}

fn separates(f: &[Elem], alpha: &Partition, beta: &Partition) -> bool {
    beta.pairs().any(|(a, b)| !alpha.related(f[a], f[b]))
}

fn minimal_sets_from(pol: &PolyClone<'_>, alpha: &Partition, beta: &Partition) -> Vec<MinimalSet> {
    let mut ranges: HashMap<Vec<Elem>, Vec<usize>> = HashMap::new();
    for i in 0..pol.len() {
        let f = pol.table(i);
        if separates(&f, alpha, beta) {
            let mut r = f.clone();
            r.sort_unstable();
            r.dedup();
            ranges.entry(r).or_default().push(i);
        }
    }
    let keys: Vec<&Vec<Elem>> = ranges.keys().collect();
    let is_subset = |a: &[Elem], b: &[Elem]| a.iter().all(|x| b.binary_search(x).is_ok());
    let mut minimal: Vec<Vec<Elem>> = keys
        .iter()
        .filter(|u| !keys.iter().any(|v| v.len() < u.len() && is_subset(v, u)))
        .map(|u| (*u).clone())
        .collect();
    minimal.sort();
    minimal
        .into_iter()
        .map(|u| {
            let e = ranges[&u]
                .iter()
                .map(|&i| IdempotentPoly {
                    map: pol.table(i),
                    witness: pol.witness(i),
                })
                .find(IdempotentPoly::is_idempotent)
                .expect("some power of a map onto a minimal set is idempotent");
            let mut traces = Vec::new();
            for class in beta.classes() {
                let t: Vec<Elem> = u.iter().copied().filter(|x| class.contains(x)).collect();
                if t.iter().any(|&x| !alpha.related(x, t[0])) {
                    traces.push(t);
                }
            }
            let mut body: Vec<Elem> = traces.iter().flatten().copied().collect();
            body.sort_unstable();
            let tail = u.iter().copied().filter(|x| body.binary_search(x).is_err()).collect();
            MinimalSet {
                u,
                e,
                traces,
                body,
                tail,
            }
        })
        .collect()
}

/// All `(α, β)`-minimal sets: the inclusion-minimal ranges `f(A)` of unary
/// polynomials with `f(β) ⊄ α`.
pub fn minimal_sets(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition, cap: usize) -> Result<Vec<MinimalSet>> {
    check_cover(alg, alpha, beta)?;
    let pol = unary_poly_clone(alg, cap)?;
    Ok(minimal_sets_from(&pol, alpha, beta))
}

/// True when unary polynomials `f, g` restrict to mutually inverse
/// bijections between `u` and `v`.
pub fn polynomially_isomorphic(alg: &FiniteAlgebra, u: &[Elem], v: &[Elem], cap: usize) -> Result<bool> {
    if u.len() != v.len() {
        return Ok(false);
    }
    let pol = unary_poly_clone(alg, cap)?;
    let maps: Vec<Vec<Elem>> = pol.tables().collect();
    let bijects = |f: &Vec<Elem>, from: &[Elem], to: &[Elem]| {
        let mut img: Vec<Elem> = from.iter().map(|&x| f[x]).collect();
        img.sort_unstable();
        img.dedup();
        img == to
    };
    for f in maps.iter().filter(|f| bijects(f, u, v)) {
        if maps.iter().any(|g| u.iter().all(|&x| g[f[x]] == x)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A type label; `Unknown` when a search hit its cap or the local tests
/// were inconclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeLabel {
    One,
    Two,
    Three,
    Four,
    Five,
    Unknown,
}

impl TypeLabel {
    pub fn number(self) -> Option<u8> {
        match self {
            TypeLabel::One => Some(1),
            TypeLabel::Two => Some(2),
            TypeLabel::Three => Some(3),
            TypeLabel::Four => Some(4),
            TypeLabel::Five => Some(5),
            TypeLabel::Unknown => None,
        }
    }

    pub fn from_number(i: u8) -> Option<TypeLabel> {
        [
            TypeLabel::One,
            TypeLabel::Two,
            TypeLabel::Three,
            TypeLabel::Four,
            TypeLabel::Five,
        ]
        .get(usize::from(i).checked_sub(1)?)
        .copied()
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number() {
            Some(i) => write!(f, "{i}"),
            None => f.write_str("?"),
        }
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn unify(acc: Option<TypeLabel>, next: TypeLabel) -> Option<TypeLabel> {
    match acc {
        None => Some(next),
        Some(a) if a == next => Some(a),
        Some(_) => Some(TypeLabel::Unknown),
    }
}

fn label_of_set(q: &FiniteAlgebra, ms: &MinimalSet, abelian: bool, cap: usize) -> Result<TypeLabel> {
    if abelian {
        // a polynomial that is Malcev on every trace
        let mut dom = Vec::new();
        let mut target = Vec::new();
        for t in &ms.traces {
            for &x in t {
                for &y in t {
                    dom.push(vec![x, x, y]);
                    target.push(y);
                    if x != y {
                        dom.push(vec![y, x, x]);
                        target.push(y);
                    }
                }
            }
        }
        return Ok(match realize(q, &dom, 3, &target, true, cap)? {
            Some(_) => TypeLabel::Two,
            None => TypeLabel::One,
        });
    }
    let mut label = None;
    for t in &ms.traces {
        if t.len() != 2 {
            return Ok(TypeLabel::Unknown);
        }
        let s = induced_on_pair_set(q, [t[0], t[1]], cap)?;
        let l = match (s.meet.is_some(), s.join.is_some(), s.negation.is_some()) {
            (true, true, true) => TypeLabel::Three,
            (true, true, false) => TypeLabel::Four,
            (true, false, _) | (false, true, _) => TypeLabel::Five,
            (false, false, _) => TypeLabel::Unknown,
        };
        label = unify(label, l);
    }
    Ok(label.unwrap_or(TypeLabel::Unknown))
}

/// `typ(α, β)`, computed in `A/α` over every minimal set and trace; any
/// disagreement or cap overrun yields `Unknown`.
pub fn type_of(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition, cap: usize) -> Result<TypeLabel> {
    check_cover(alg, alpha, beta)?;
    let q = alg.quotient(alpha)?;
    let bq = beta.over(alpha);
    let zero = Partition::zero(q.size());
    let run = || -> Result<TypeLabel> {
        let abelian = commutator(&q, &bq, &bq)?.is_zero();
        let pol = unary_poly_clone(&q, cap)?;
        let sets = minimal_sets_from(&pol, &zero, &bq);
        let mut label = None;
        for ms in &sets {
            label = unify(label, label_of_set(&q, ms, abelian, cap)?);
        }
        Ok(label.unwrap_or(TypeLabel::Unknown))
    };
    match run() {
        Err(Error::CapExceeded(_)) => Ok(TypeLabel::Unknown),
        r => r,
    }
}

/// A congruence lattice with a label on every cover.
#[derive(Debug, Clone)]
pub struct TypedLattice {
    pub lattice: CongruenceLattice,
    pub labels: HashMap<(usize, usize), TypeLabel>,
}

impl TypedLattice {
    pub fn compute(alg: &FiniteAlgebra, cap: usize) -> Result<Self> {
        let lattice = congruence_lattice(alg, cap)?;
        let mut labels = HashMap::new();
        for (i, j) in lattice.covers() {
            labels.insert((i, j), type_of(alg, lattice.get(i), lattice.get(j), cap)?);
        }
        Ok(TypedLattice { lattice, labels })
    }

    /// A hand-labeled lattice; every cover must receive a label.
    pub fn synthetic(lattice: CongruenceLattice, labels: HashMap<(usize, usize), TypeLabel>) -> Result<Self> {
        for c in lattice.covers() {
            if !labels.contains_key(&c) {
                return Err(Error::UntypedLattice(format!("cover {c:?} has no label")));
            }
        }
        Ok(TypedLattice { lattice, labels })
    }

    pub fn label(&self, i: usize, j: usize) -> Option<TypeLabel> {
        self.labels.get(&(i, j)).copied()
    }

    pub fn typeset(&self) -> BTreeSet<TypeLabel> {
        self.labels.values().copied().collect()
    }

    /// True when every cover inside `[lo, hi]` carries `label`.
    pub fn interval_all(&self, lo: usize, hi: usize, label: TypeLabel) -> bool {
        let inside = self.lattice.interval(lo, hi);
        self.lattice
            .covers()
            .into_iter()
            .filter(|(i, j)| inside.contains(i) && inside.contains(j))
            .all(|c| self.labels[&c] == label)
    }

    /// The Hasse diagram with labels, one cover per line.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, p) in self.lattice.elements().iter().enumerate() {
            s.push_str(&format!("c{k} {p}\n"));
        }
        let mut covers = self.lattice.covers();
        covers.sort();
        for (i, j) in covers {
            s.push_str(&format!("c{i} -< c{j} type {}\n", self.labels[&(i, j)]));
        }
        s
    }
}

pub fn typeset(alg: &FiniteAlgebra, cap: usize) -> Result<BTreeSet<TypeLabel>> {
    Ok(TypedLattice::compute(alg, cap)?.typeset())
}

/// Outcome of a transfer-principle check; the counterexample is a chain
/// `α ≺ β ≺ γ` of lattice indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferCheck {
    pub holds: bool,
    pub counterexample: Option<[usize; 3]>,
}

/// For every `α ≺_i β ≺_j γ` there must be `β'` with `α ≺_j β' ≤ γ`.
pub fn transfer_principle_holds(tl: &TypedLattice, i: TypeLabel, j: TypeLabel) -> TransferCheck {
    let lat = &tl.lattice;
    let mut covers = lat.covers();
    covers.sort();
    for &(a, b) in &covers {
        if tl.labels[&(a, b)] != i {
            continue;
        }
        for &c in lat.upper_covers(b) {
            if tl.labels[&(b, c)] != j {
                continue;
            }
            let ok = lat
                .upper_covers(a)
                .iter()
                .any(|&b2| tl.labels[&(a, b2)] == j && lat.leq(b2, c));
            if !ok {
                return TransferCheck {
                    holds: false,
                    counterexample: Some([a, b, c]),
                };
            }
        }
    }
    TransferCheck {
        holds: true,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clone::DEFAULT_CAP;
    use crate::malcev::find_directed_gumm_terms;
    use crate::zoo;

    fn labels(alg: &FiniteAlgebra) -> Vec<u8> {
        typeset(alg, DEFAULT_CAP)
            .unwrap()
            .into_iter()
            .map(|l| l.number().unwrap_or(0))
            .collect()
    }

    #[test]
    fn five_type_table() {
        assert_eq!(labels(&zoo::two_boolean()), vec![3]);
        assert_eq!(labels(&zoo::two_lattice()), vec![4]);
        assert_eq!(labels(&zoo::two_semilattice()), vec![5]);
        assert_eq!(labels(&zoo::cyclic(2)), vec![2]);
        assert_eq!(labels(&zoo::cyclic(3)), vec![2]);
        assert_eq!(labels(&zoo::cyclic(6)), vec![2]);
        assert_eq!(labels(&zoo::z2_x_lattice()), vec![2, 4]);
        assert_eq!(labels(&zoo::s3()), vec![2]);
        assert_eq!(labels(&zoo::z4_unital()), vec![2, 3]);
    }

    #[test]
    fn boolean_minimal_set_is_everything() {
        let b = zoo::two_boolean();
        let ms = minimal_sets(&b, &Partition::zero(2), &Partition::one(2), DEFAULT_CAP).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].u, vec![0, 1]);
        assert!(ms[0].tail.is_empty());
    }

    #[test]
    fn z4_bottom_cover_has_one_minimal_set_with_two_traces() {
        let z4 = zoo::cyclic(4);
        let mod2 = Partition::from_labels(&[0, 1, 0, 1]);
        let ms = minimal_sets(&z4, &Partition::zero(4), &mod2, DEFAULT_CAP).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].u, vec![0, 1, 2, 3]);
        assert_eq!(ms[0].traces, vec![vec![0, 2], vec![1, 3]]);
        assert!(ms[0].e.is_idempotent());
    }

    #[test]
    fn s3_top_cover_minimal_sets_mix_cosets() {
        let s3 = zoo::s3();
        let a3 = Partition::from_classes(6, &[zoo::S3_ROTATIONS.to_vec(), vec![1, 2, 5]]);
        let ms = minimal_sets(&s3, &a3, &Partition::one(6), DEFAULT_CAP).unwrap();
        assert!(!ms.is_empty());
        for m in &ms {
            assert_eq!(m.u.len(), 2);
            assert!(!a3.related(m.u[0], m.u[1]));
            let mut range = m.e.range();
            range.sort_unstable();
            assert_eq!(range, m.u);
            assert!(m.e.is_idempotent());
        }
        for w in ms.windows(2) {
            assert!(polynomially_isomorphic(&s3, &w[0].u, &w[1].u, DEFAULT_CAP).unwrap());
        }
    }

    #[test]
    fn type_is_invariant_under_quotients() {
        let z4 = zoo::cyclic(4);
        let mod2 = Partition::from_labels(&[0, 1, 0, 1]);
        let t = type_of(&z4, &mod2, &Partition::one(4), DEFAULT_CAP).unwrap();
        let q = z4.quotient(&mod2).unwrap();
        assert_eq!(
            t,
            type_of(&q, &Partition::zero(2), &Partition::one(2), DEFAULT_CAP).unwrap()
        );
        assert_eq!(t, TypeLabel::Two);
    }

    #[test]
    fn non_covers_are_rejected() {
        let z4 = zoo::cyclic(4);
        assert!(matches!(
            type_of(&z4, &Partition::zero(4), &Partition::one(4), DEFAULT_CAP),
            Err(Error::NotACover(_))
        ));
    }

    #[test]
    fn cm_algebras_have_cm_types_and_empty_tails() {
        for e in zoo::zoo() {
            let a = &e.algebra;
            if find_directed_gumm_terms(a, 16, DEFAULT_CAP).ok().flatten().is_none() {
                continue;
            }
            let tl = TypedLattice::compute(a, DEFAULT_CAP).unwrap();
            for (&(i, j), &l) in &tl.labels {
                assert!(
                    matches!(l, TypeLabel::Two | TypeLabel::Three | TypeLabel::Four),
                    "{}",
                    a.name()
                );
                let al = tl.lattice.get(i);
                let be = tl.lattice.get(j);
                let ms = minimal_sets(a, al, be, DEFAULT_CAP).unwrap();
                for m in &ms {
                    assert!(m.tail.is_empty(), "{}", a.name());
                }
                for w in ms.windows(2) {
                    assert!(polynomially_isomorphic(a, &w[0].u, &w[1].u, DEFAULT_CAP).unwrap());
                }
            }
        }
    }

    #[test]
    fn transfer_principles() {
        let tl = TypedLattice::compute(&zoo::z2_x_lattice(), DEFAULT_CAP).unwrap();
        assert!(transfer_principle_holds(&tl, TypeLabel::Two, TypeLabel::Four).holds);
        assert!(transfer_principle_holds(&tl, TypeLabel::Four, TypeLabel::Two).holds);
        let z2 = TypedLattice::compute(&zoo::cyclic(2), DEFAULT_CAP).unwrap();
        assert!(transfer_principle_holds(&z2, TypeLabel::Two, TypeLabel::Two).holds);

        // hand-labeled chain 0 ≺ β ≺ 1 with types 2 then 4
        let chain = CongruenceLattice::from_family(vec![
            Partition::zero(3),
            Partition::from_classes(3, &[vec![0, 1]]),
            Partition::one(3),
        ])
        .unwrap();
        let labels = HashMap::from([((0, 1), TypeLabel::Two), ((1, 2), TypeLabel::Four)]);
        let tl = TypedLattice::synthetic(chain.clone(), labels).unwrap();
        let r = transfer_principle_holds(&tl, TypeLabel::Two, TypeLabel::Four);
        assert_eq!(
            r,
            TransferCheck {
                holds: false,
                counterexample: Some([0, 1, 2])
            }
        );
        assert!(transfer_principle_holds(&tl, TypeLabel::Four, TypeLabel::Two).holds);
        assert!(TypedLattice::synthetic(chain, HashMap::new()).is_err());
    }
}
