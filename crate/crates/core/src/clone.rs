//! Bounded generation of polynomial and term clones.
//!
//! Every clone computation here is an instance of one primitive: generate the
//! subuniverse of `A^S` spanned by a set of generator vectors, where `S` is a
//! list of argument tuples. Projections of `S` give term operations;
//! adding constant vectors gives polynomial operations. Restricting `S` to the
//! tuples an identity talks about turns "does a term with these values exist"
//! into membership in the generated subuniverse.

use std::collections::HashMap;

use crate::algebra::{increment, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::term::Term;

/// Default bound on the number of stored functions.
pub const DEFAULT_CAP: usize = 200_000;

#[derive(Debug, Clone)]
enum Origin {
    Generator(Term),
    Apply(usize, Vec<u32>),
}

/// Outcome of a bounded closure run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// The closure is complete.
    Complete,
    /// The stop predicate accepted the element with this index.
    Found(usize),
}

/// A subuniverse of `A^width`, stored with first-found witnesses.
#[derive(Debug, Clone)]
pub struct Subpower<'a> {
    alg: &'a FiniteAlgebra,
    width: usize,
    data: Vec<u8>,
    index: HashMap<Box<[u8]>, u32>,
    origin: Vec<Origin>,
    processed: usize,
}

impl<'a> Subpower<'a> {
    pub fn new(alg: &'a FiniteAlgebra, width: usize) -> Result<Self> {
        if alg.size() > 256 {
            return Err(Error::Precondition(
                "clone generation supports universes of at most 256 elements".into(),
            ));
        }
        Ok(Subpower {
            alg,
            width,
            data: Vec::new(),
            index: HashMap::new(),
            origin: Vec::new(),
            processed: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.origin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> &[u8] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    pub fn position(&self, v: &[u8]) -> Option<usize> {
        self.index.get(v).map(|&i| i as usize)
    }

    fn insert(&mut self, v: &[u8], origin: Origin) -> Option<usize> {
        if self.index.contains_key(v) {
            return None;
        }
        let i = self.origin.len();
        self.data.extend_from_slice(v);
        self.index.insert(v.into(), i as u32);
        self.origin.push(origin);
        Some(i)
    }

    /// Adds a generator with the term that names it. Returns its index when new.
    pub fn add_generator(&mut self, v: &[Elem], witness: Term) -> Option<usize> {
        debug_assert_eq!(v.len(), self.width);
        let bytes: Vec<u8> = v.iter().map(|&x| x as u8).collect();
        self.insert(&bytes, Origin::Generator(witness))
    }

    /// Closes under the basic operations, processing elements in insertion
    /// order. Each new element is offered to `stop`; a `true` answer halts.
    pub fn close(&mut self, cap: usize, mut stop: impl FnMut(&[u8]) -> bool) -> Result<Closure> {
        for i in 0..self.len() {
            if i >= self.processed && stop(self.get(i)) {
                return Ok(Closure::Found(i));
            }
        }
        let alg = self.alg;
        let n = alg.size();
        let w = self.width;
        let mut out = vec![0u8; w];
        // Nullary operations contribute constant vectors.
        for (k, op) in alg.ops().iter().enumerate() {
            if op.arity() == 0 {
                out.fill(alg.apply(k, &[]) as u8);
                if let Some(j) = self.insert(&out, Origin::Apply(k, Vec::new())) {
                    if stop(self.get(j)) {
                        return Ok(Closure::Found(j));
                    }
                }
            }
        }
        while self.processed < self.len() {
            let i = self.processed;
            self.processed += 1;
            for (k, op) in alg.ops().iter().enumerate() {
                let r = op.arity();
                if r == 0 {
                    continue;
                }
                let table = op.table();
                // Enumerate tuples over 0..=i whose first occurrence of i is at `first`.
                for first in 0..r {
                    let mut idx = vec![0usize; r];
                    idx[first] = i;
                    let free: Vec<usize> = (0..r).filter(|&p| p != first).collect();
                    let bounds: Vec<usize> = free.iter().map(|&p| if p < first { i } else { i + 1 }).collect();
                    if bounds.contains(&0) {
                        continue;
                    }
                    let mut counter = vec![0usize; free.len()];
                    'tuples: loop {
                        for (slot, &p) in free.iter().enumerate() {
                            idx[p] = counter[slot];
                        }
                        for (s, o) in out.iter_mut().enumerate() {
                            let mut t = 0usize;
                            for &e in &idx {
                                t = t * n + self.data[e * w + s] as usize;
                            }
                            *o = table[t] as u8;
                        }
                        if !self.index.contains_key(out.as_slice()) {
                            if self.len() >= cap {
                                return Err(Error::CapExceeded(self.len()));
                            }
                            let args = idx.iter().map(|&e| e as u32).collect();
                            let j = self.insert(&out, Origin::Apply(k, args)).expect("fresh");
                            if stop(self.get(j)) {
                                // element i is only partially combined
                                self.processed = i;
                                return Ok(Closure::Found(j));
                            }
                        }
                        let mut pos = counter.len();
                        loop {
                            if pos == 0 {
                                break 'tuples;
                            }
                            pos -= 1;
                            counter[pos] += 1;
                            if counter[pos] < bounds[pos] {
                                break;
                            }
                            counter[pos] = 0;
                        }
                    }
                }
            }
        }
        Ok(Closure::Complete)
    }

    /// Reconstructs the witness term of element `i`.
    pub fn witness(&self, i: usize) -> Term {
        match &self.origin[i] {
            Origin::Generator(t) => t.clone(),
            Origin::Apply(k, args) => Term::Apply(
                self.alg.ops()[*k].name().to_string(),
                args.iter().map(|&a| self.witness(a as usize)).collect(),
            ),
        }
    }
}

/// All `k`-tuples over `0..n`, last coordinate fastest.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::with_capacity(n.pow(k as u32));
    let mut t = vec![0; k];
    loop {
        out.push(t.clone());
        if !increment(&mut t, n) {
            break;
        }
    }
    out
}

/// Seeds a subpower over `domain` with projections and, if requested, constants.
pub fn seeded<'a>(
    alg: &'a FiniteAlgebra,
    domain: &[Vec<Elem>],
    arity: usize,
    with_constants: bool,
) -> Result<Subpower<'a>> {
    let mut sp = Subpower::new(alg, domain.len())?;
    for v in 0..arity {
        let col: Vec<Elem> = domain.iter().map(|t| t[v]).collect();
        sp.add_generator(&col, Term::var(v));
    }
    if with_constants {
        for c in 0..alg.size() {
            sp.add_generator(&vec![c; domain.len()], Term::constant(c));
        }
    }
    Ok(sp)
}

/// Searches for a polynomial (or term, without constants) of the given arity
/// whose values on `domain` equal `target`. `Ok(None)` means the closure
/// completed without it.
pub fn realize(
    alg: &FiniteAlgebra,
    domain: &[Vec<Elem>],
    arity: usize,
    target: &[Elem],
    with_constants: bool,
    cap: usize,
) -> Result<Option<Term>> {
    let mut sp = seeded(alg, domain, arity, with_constants)?;
    let want: Vec<u8> = target.iter().map(|&x| x as u8).collect();
    match sp.close(cap, |v| v == want.as_slice())? {
        Closure::Found(i) => Ok(Some(sp.witness(i))),
        Closure::Complete => Ok(None),
    }
}

/// A fully generated clone of `arity`-ary polynomial operations.
#[derive(Debug, Clone)]
pub struct PolyClone<'a> {
    pub arity: usize,
    inner: Subpower<'a>,
}

impl<'a> PolyClone<'a> {
    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    /// Table of member `i` over all argument tuples (last argument fastest).
    pub fn table(&self, i: usize) -> Vec<Elem> {
        self.inner.get(i).iter().map(|&b| b as Elem).collect()
    }

    pub fn tables(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.len()).map(move |i| self.table(i))
    }

    pub fn contains(&self, table: &[Elem]) -> bool {
        let v: Vec<u8> = table.iter().map(|&x| x as u8).collect();
        self.inner.position(&v).is_some()
    }

    pub fn position(&self, table: &[Elem]) -> Option<usize> {
        let v: Vec<u8> = table.iter().map(|&x| x as u8).collect();
        self.inner.position(&v)
    }

    pub fn witness(&self, i: usize) -> Term {
        self.inner.witness(i)
    }
}

/// Pol_k(A): closure of projections and constants, fully generated.
pub fn kary_poly_clone(alg: &FiniteAlgebra, k: usize, cap: usize) -> Result<PolyClone<'_>> {
    if cap == 0 {
        return Err(Error::Precondition("cap must be positive".into()));
    }
    let domain = all_tuples(alg.size(), k);
    let mut inner = seeded(alg, &domain, k, true)?;
    if inner.len() > cap {
        return Err(Error::CapExceeded(inner.len()));
    }
    inner.close(cap, |_| false)?;
    Ok(PolyClone { arity: k, inner })
}

/// Pol_1(A) as maps `0..n → 0..n`.
pub type UnaryPolyClone<'a> = PolyClone<'a>;

pub fn unary_poly_clone(alg: &FiniteAlgebra, cap: usize) -> Result<UnaryPolyClone<'_>> {
    kary_poly_clone(alg, 1, cap)
}

/// Unary idempotent polynomial with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentPoly {
    pub map: Vec<Elem>,
    pub witness: Term,
}

impl IdempotentPoly {
    pub fn range(&self) -> Vec<Elem> {
        let mut r: Vec<Elem> = self.map.clone();
        r.sort_unstable();
        r.dedup();
        r
    }

    pub fn is_idempotent(&self) -> bool {
        self.map.iter().all(|&y| self.map[y] == y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::term_table;
    use crate::zoo;

    fn monotone_binary_boolean() -> Vec<Vec<Elem>> {
        // enumerate all 16 binary functions and keep the monotone ones
        (0..16u32)
            .map(|bits| (0..4).map(|i| ((bits >> i) & 1) as Elem).collect::<Vec<_>>())
            .filter(|t| {
                let f = |x: usize, y: usize| t[x * 2 + y];
                (0..2).all(|x| {
                    (0..2).all(|y| (0..2).all(|x2| (0..2).all(|y2| !(x <= x2 && y <= y2) || f(x, y) <= f(x2, y2))))
                })
            })
            .collect()
    }

    #[test]
    fn unary_clone_of_lattice_has_three_maps() {
        let l = zoo::two_lattice();
        let c = unary_poly_clone(&l, DEFAULT_CAP).unwrap();
        let mut tables: Vec<Vec<Elem>> = c.tables().collect();
        tables.sort();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn unary_clone_of_z2_has_four_maps() {
        let z2 = zoo::cyclic(2);
        let c = unary_poly_clone(&z2, DEFAULT_CAP).unwrap();
        let mut tables: Vec<Vec<Elem>> = c.tables().collect();
        tables.sort();
        assert_eq!(tables, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn unary_clone_of_trivial_algebra() {
        let t = zoo::trivial();
        assert_eq!(unary_poly_clone(&t, DEFAULT_CAP).unwrap().len(), 1);
        assert_eq!(kary_poly_clone(&t, 2, DEFAULT_CAP).unwrap().len(), 1);
    }

    #[test]
    fn binary_clone_of_lattice_is_the_monotone_functions() {
        let l = zoo::two_lattice();
        let c = kary_poly_clone(&l, 2, DEFAULT_CAP).unwrap();
        let mut got: Vec<Vec<Elem>> = c.tables().collect();
        got.sort();
        let mut want = monotone_binary_boolean();
        want.sort();
        assert_eq!(want.len(), 6);
        assert_eq!(got, want);
    }

    #[test]
    fn binary_clone_of_boolean_algebra_is_full() {
        let b = zoo::two_boolean();
        assert_eq!(kary_poly_clone(&b, 2, DEFAULT_CAP).unwrap().len(), 16);
    }

    #[test]
    fn witnesses_evaluate_to_their_tables() {
        let s3 = zoo::s3();
        let c = unary_poly_clone(&s3, DEFAULT_CAP).unwrap();
        for i in 0..c.len() {
            assert_eq!(term_table(&s3, &c.witness(i), 1).unwrap(), c.table(i));
        }
    }

    #[test]
    fn reclosing_adds_nothing() {
        let z4 = zoo::cyclic(4);
        let c = unary_poly_clone(&z4, DEFAULT_CAP).unwrap();
        let before = c.len();
        let mut inner = c.inner.clone();
        for i in 0..before {
            let t: Vec<Elem> = c.table(i);
            assert!(inner.add_generator(&t, c.witness(i)).is_none());
        }
        inner.close(DEFAULT_CAP, |_| false).unwrap();
        assert_eq!(inner.len(), before);
    }

    #[test]
    fn cap_is_reported() {
        let s3 = zoo::s3();
        assert!(matches!(kary_poly_clone(&s3, 2, 50), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn realize_finds_lattice_join_as_polynomial() {
        let l = zoo::two_lattice();
        let dom = all_tuples(2, 2);
        let t = realize(&l, &dom, 2, &[0, 1, 1, 1], true, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(term_table(&l, &t, 2).unwrap(), vec![0, 1, 1, 1]);
        // negation is not a lattice polynomial
        let dom1 = all_tuples(2, 1);
        assert_eq!(realize(&l, &dom1, 1, &[1, 0], true, DEFAULT_CAP).unwrap(), None);
    }
}
