//! Equivalence relations on `0..n` in canonical class-id form.

use std::fmt;

use crate::algebra::Elem;
use crate::error::{Error, Result};

/// Class ids appear in first-occurrence order, so equal relations have equal vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    ids: Vec<usize>,
}

impl Partition {
    /// The diagonal 0_A.
    pub fn zero(n: usize) -> Self {
        Partition { ids: (0..n).collect() }
    }

    /// The total relation 1_A.
    pub fn one(n: usize) -> Self {
        Partition { ids: vec![0; n] }
    }

    /// Canonicalizes an arbitrary labeling.
    pub fn from_labels<T: PartialEq + Copy>(labels: &[T]) -> Self {
        let mut seen: Vec<T> = Vec::new();
        let ids = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(p) => p,
                None => {
                    seen.push(*l);
                    seen.len() - 1
                }
            })
            .collect();
        Partition { ids }
    }

    /// Elements missing from `classes` become singletons.
    pub fn from_classes(n: usize, classes: &[Vec<Elem>]) -> Self {
        let mut uf = UnionFind::new(n);
        for c in classes {
            for w in c.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        uf.to_partition()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    #[inline]
    pub fn class_of(&self, a: Elem) -> usize {
        self.ids[a]
    }

    #[inline]
    pub fn related(&self, a: Elem, b: Elem) -> bool {
        self.ids[a] == self.ids[b]
    }

    pub fn num_classes(&self) -> usize {
        self.ids.iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.num_classes() == self.ids.len()
    }

    pub fn is_one(&self) -> bool {
        self.num_classes() <= 1
    }

    /// Least element of each class, in class-id order.
    pub fn representatives(&self) -> Vec<Elem> {
        let mut reps = vec![usize::MAX; self.num_classes()];
        for (a, &c) in self.ids.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = a;
            }
        }
        reps
    }

    pub fn classes(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (a, &c) in self.ids.iter().enumerate() {
            out[c].push(a);
        }
        out
    }

    /// Pairs `(a, b)` with `a < b` in the relation.
    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        let n = self.ids.len();
        (0..n).flat_map(move |a| ((a + 1)..n).filter(move |&b| self.related(a, b)).map(move |b| (a, b)))
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        debug_assert_eq!(self.len(), other.len());
        let mut map = vec![usize::MAX; self.num_classes()];
        for (a, &c) in self.ids.iter().enumerate() {
            let o = other.ids[a];
            if map[c] == usize::MAX {
                map[c] = o;
            } else if map[c] != o {
                return false;
            }
        }
        true
    }

    pub fn meet(&self, other: &Partition) -> Partition {
        let pairs: Vec<(usize, usize)> = self.ids.iter().copied().zip(other.ids.iter().copied()).collect();
        Partition::from_labels(&pairs)
    }

    pub fn join(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::new(self.len());
        for p in [self, other] {
            let reps = p.representatives();
            for (a, &c) in p.ids.iter().enumerate() {
                uf.union(a, reps[c]);
            }
        }
        uf.to_partition()
    }

    /// Relational composition `self ∘ other` as a boolean matrix:
    /// `(a, c)` holds iff some `b` has `a self b` and `b other c`.
    pub fn compose(&self, other: &Partition) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut m = vec![vec![false; n]; n];
        for (a, row) in m.iter_mut().enumerate() {
            for b in 0..n {
                if self.related(a, b) {
                    for (c, cell) in row.iter_mut().enumerate() {
                        if other.related(b, c) {
                            *cell = true;
                        }
                    }
                }
            }
        }
        m
    }

    pub fn permutes_with(&self, other: &Partition) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Restriction of the relation to `subset`, as a partition of the subset's positions.
    pub fn restrict(&self, subset: &[Elem]) -> Partition {
        let labels: Vec<usize> = subset.iter().map(|&a| self.ids[a]).collect();
        Partition::from_labels(&labels)
    }

    /// Image partition on the quotient by `theta`, which must refine `self`.
    pub fn over(&self, theta: &Partition) -> Partition {
        let reps = theta.representatives();
        let labels: Vec<usize> = reps.iter().map(|&r| self.ids[r]).collect();
        Partition::from_labels(&labels)
    }

    /// Parses `{0 2|1 3}`; elements not listed become singletons.
    /// The shorthands `0` and `1` denote the diagonal and the total relation.
    pub fn parse(n: usize, text: &str) -> Result<Partition> {
        let t = text.trim();
        match t {
            "0" => return Ok(Partition::zero(n)),
            "1" => return Ok(Partition::one(n)),
            _ => {}
        }
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::parse(1, 1, "partition must be written as {a b|c d}"))?;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for block in inner.split('|') {
            let mut class = Vec::new();
            for tok in block.split_whitespace() {
                let v: usize = tok
                    .parse()
                    .map_err(|_| Error::parse(1, 1, format!("bad element `{tok}`")))?;
                if v >= n {
                    return Err(Error::ElementOutOfRange { elem: v, size: n });
                }
                if seen[v] {
                    return Err(Error::parse(1, 1, format!("element {v} listed twice")));
                }
                seen[v] = true;
                class.push(v);
            }
            classes.push(class);
        }
        Ok(Partition::from_classes(n, &classes))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .classes()
            .iter()
            .map(|c| c.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{{{}}}", blocks.join("|"))
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    /// Returns true when two distinct classes were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    pub fn to_partition(&mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|a| self.find(a)).collect();
        Partition::from_labels(&roots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_and_parse() {
        let p = Partition::from_classes(4, &[vec![0, 2], vec![1, 3]]);
        assert_eq!(p.to_string(), "{0 2|1 3}");
        assert_eq!(Partition::parse(4, "{0 2|1 3}").unwrap(), p);
        assert_eq!(Partition::parse(4, "{3 1|2 0}").unwrap(), p);
        assert_eq!(Partition::parse(3, "0").unwrap(), Partition::zero(3));
        assert!(Partition::parse(3, "{0 5}").is_err());
    }

    #[test]
    fn meet_join_small() {
        let a = Partition::from_classes(6, &[vec![0, 2, 4], vec![1, 3, 5]]);
        let b = Partition::from_classes(6, &[vec![0, 3], vec![1, 4], vec![2, 5]]);
        assert!(a.meet(&b).is_zero());
        assert!(a.join(&b).is_one());
        assert!(a.permutes_with(&b));
    }

    fn labels() -> impl Strategy<Value = Vec<u8>> {
        prop::collection::vec(0u8..4, 1..8)
    }

    proptest! {
        #[test]
        fn canonical_form_is_unique(l in labels(), shift in 1u8..10) {
            let shifted: Vec<u8> = l.iter().map(|x| x.wrapping_mul(7).wrapping_add(shift)).collect();
            prop_assert_eq!(Partition::from_labels(&l), Partition::from_labels(&shifted));
        }

        #[test]
        fn lattice_laws(a in labels(), b in labels()) {
            let n = a.len().min(b.len());
            let p = Partition::from_labels(&a[..n]);
            let q = Partition::from_labels(&b[..n]);
            let m = p.meet(&q);
            let j = p.join(&q);
            prop_assert!(m.refines(&p) && m.refines(&q));
            prop_assert!(p.refines(&j) && q.refines(&j));
            prop_assert_eq!(p.join(&m), p.clone());
            prop_assert_eq!(p.meet(&j), p.clone());
            prop_assert_eq!(Partition::parse(n, &p.to_string()).unwrap(), p);
        }
    }
}
