//! Principal congruences, congruence lattices and factor congruences.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::algebra::{increment, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::partition::{Partition, UnionFind};

/// Least congruence containing every pair in `pairs`.
///
/// Only pairs that merge two classes are propagated: they span the
/// equivalence, so closing them under basic translations closes everything.
pub fn congruence_generated(alg: &FiniteAlgebra, pairs: &[(Elem, Elem)]) -> Result<Partition> {
    let n = alg.size();
    let mut uf = UnionFind::new(n);
    let mut work = Vec::new();
    for &(a, b) in pairs {
        alg.check_elem(a)?;
        alg.check_elem(b)?;
        if uf.union(a, b) {
            work.push((a, b));
        }
    }
    while let Some((a, b)) = work.pop() {
        for (k, op) in alg.ops().iter().enumerate() {
            let r = op.arity();
            if r == 0 {
                continue;
            }
            let mut rest = vec![0; r - 1];
            let mut args = vec![0; r];
            loop {
                for pos in 0..r {
                    args[..pos].copy_from_slice(&rest[..pos]);
                    args[pos + 1..].copy_from_slice(&rest[pos..]);
                    args[pos] = a;
                    let u = alg.apply(k, &args);
                    args[pos] = b;
                    let v = alg.apply(k, &args);
                    if uf.union(u, v) {
                        work.push((u, v));
                    }
                }
                if !increment(&mut rest, n) {
                    break;
                }
            }
        }
    }
    Ok(uf.to_partition())
}

/// `Cg(a, b)`.
pub fn principal_congruence(alg: &FiniteAlgebra, a: Elem, b: Elem) -> Result<Partition> {
    congruence_generated(alg, &[(a, b)])
}

/// A finite lattice of partitions with cached operation tables and covers.
///
/// Elements are ordered by decreasing class count, so the least element
/// comes first and the greatest last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceLattice {
    elems: Vec<Partition>,
    index: HashMap<Partition, usize>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
}

impl CongruenceLattice {
    /// Builds the lattice structure on a family of partitions closed under
    /// partition meet and join.
    pub fn from_family(family: Vec<Partition>) -> Result<Self> {
        let mut elems = family;
        elems.sort_by(|a, b| b.num_classes().cmp(&a.num_classes()).then(a.cmp(b)));
        elems.dedup();
        if elems.is_empty() {
            return Err(Error::LatticeMismatch);
        }
        let n = elems[0].len();
        if elems.iter().any(|p| p.len() != n) {
            return Err(Error::LatticeMismatch);
        }
        let index: HashMap<Partition, usize> = elems.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let m = elems.len();
        let mut join = vec![vec![0; m]; m];
        let mut meet = vec![vec![0; m]; m];
        for i in 0..m {
            for j in i..m {
                let jn = *index.get(&elems[i].join(&elems[j])).ok_or(Error::LatticeMismatch)?;
                let mt = *index.get(&elems[i].meet(&elems[j])).ok_or(Error::LatticeMismatch)?;
                join[i][j] = jn;
                join[j][i] = jn;
                meet[i][j] = mt;
                meet[j][i] = mt;
            }
        }
        let mut upper = vec![Vec::new(); m];
        let mut lower = vec![Vec::new(); m];
        for i in 0..m {
            for j in 0..m {
                if i == j || !elems[i].refines(&elems[j]) {
                    continue;
                }
                let between =
                    (0..m).any(|k| k != i && k != j && elems[i].refines(&elems[k]) && elems[k].refines(&elems[j]));
                if !between {
                    upper[i].push(j);
                    lower[j].push(i);
                }
            }
        }
        Ok(CongruenceLattice {
            elems,
            index,
            join,
            meet,
            upper,
            lower,
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Partition] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.elems[i]
    }

    pub fn index_of(&self, p: &Partition) -> Result<usize> {
        self.index.get(p).copied().ok_or(Error::LatticeMismatch)
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elems.len() - 1
    }

    pub fn join_idx(&self, i: usize, j: usize) -> usize {
        self.join[i][j]
    }

    pub fn meet_idx(&self, i: usize, j: usize) -> usize {
        self.meet[i][j]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.meet[i][j] == i
    }

    pub fn join(&self, a: &Partition, b: &Partition) -> Result<Partition> {
        Ok(self.elems[self.join[self.index_of(a)?][self.index_of(b)?]].clone())
    }

    pub fn meet(&self, a: &Partition, b: &Partition) -> Result<Partition> {
        Ok(self.elems[self.meet[self.index_of(a)?][self.index_of(b)?]].clone())
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    /// All cover pairs `(i, j)` with `i ≺ j`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| self.upper[i].iter().map(move |&j| (i, j)))
            .collect()
    }

    pub fn is_cover(&self, i: usize, j: usize) -> bool {
        self.upper[i].contains(&j)
    }

    /// The unique lower cover of a join-irreducible element.
    pub fn is_join_irreducible(&self, theta: &Partition) -> Result<Option<Partition>> {
        let i = self.index_of(theta)?;
        Ok(match self.lower[i].as_slice() {
            [only] => Some(self.elems[*only].clone()),
            _ => None,
        })
    }

    /// The least nonzero element, when the bottom is strictly meet irreducible.
    pub fn monolith(&self) -> Option<Partition> {
        match self.upper[0].as_slice() {
            [atom] if (1..self.len()).all(|k| self.leq(*atom, k)) => Some(self.elems[*atom].clone()),
            _ => None,
        }
    }

    /// Indices of the interval `[lo, hi]`.
    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.leq(lo, k) && self.leq(k, hi))
            .collect()
    }

    /// `a/b` transposes up to `c/d` (indices, `a ≤ b`, `c ≤ d`) when
    /// `b ∨ c = d` and `b ∧ c = a`.
    pub fn transposes_up(&self, (a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
        self.leq(a, b) && self.leq(c, d) && self.join[b][c] == d && self.meet[b][c] == a
    }

    /// Transposition in either direction.
    pub fn transposes(&self, x: (usize, usize), y: (usize, usize)) -> bool {
        self.transposes_up(x, y) || self.transposes_up(y, x)
    }

    /// Two covers are projective when a chain of transpositions through
    /// covers links them.
    pub fn projective_covers(&self, x: (usize, usize), y: (usize, usize)) -> bool {
        let covers = self.covers();
        let mut seen = vec![x];
        let mut stack = vec![x];
        while let Some(q) = stack.pop() {
            if q == y {
                return true;
            }
            for &r in &covers {
                if !seen.contains(&r) && self.transposes(q, r) {
                    seen.push(r);
                    stack.push(r);
                }
            }
        }
        false
    }

    /// True when no pentagon `a < b`, `a∨c = b∨c`, `a∧c = b∧c` exists.
    pub fn is_modular(&self) -> bool {
        let m = self.len();
        for a in 0..m {
            for b in 0..m {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                for c in 0..m {
                    if self.join[a][c] == self.join[b][c] && self.meet[a][c] == self.meet[b][c] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_distributive(&self) -> bool {
        let m = self.len();
        (0..m).all(|x| {
            (0..m).all(|y| (0..m).all(|z| self.meet[x][self.join[y][z]] == self.join[self.meet[x][y]][self.meet[x][z]]))
        })
    }

    /// Hasse diagram in Graphviz syntax.
    pub fn to_dot(&self, labels: Option<&HashMap<(usize, usize), String>>) -> String {
        let mut s = String::from("digraph Con {\n  rankdir=BT;\n");
        for (i, p) in self.elems.iter().enumerate() {
            let _ = writeln!(s, "  c{i} [label=\"{p}\"];");
        }
        for (i, j) in self.covers() {
            match labels.and_then(|l| l.get(&(i, j))) {
                Some(l) => {
                    let _ = writeln!(s, "  c{i} -> c{j} [label=\"{l}\"];");
                }
                None => {
                    let _ = writeln!(s, "  c{i} -> c{j};");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Con(A) by join-closure of the principal congruences.
pub fn congruence_lattice(alg: &FiniteAlgebra, cap: usize) -> Result<CongruenceLattice> {
    let n = alg.size();
    let mut principals: Vec<Partition> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let p = principal_congruence(alg, a, b)?;
            if !principals.contains(&p) {
                principals.push(p);
            }
        }
    }
    let mut seen: HashMap<Partition, ()> = HashMap::new();
    let mut all = vec![Partition::zero(n)];
    seen.insert(Partition::zero(n), ());
    let mut i = 0;
    while i < all.len() {
        for p in &principals {
            let j = all[i].join(p);
            if !seen.contains_key(&j) {
                if all.len() >= cap {
                    return Err(Error::CapExceeded(all.len()));
                }
                seen.insert(j.clone(), ());
                all.push(j);
            }
        }
        i += 1;
    }
    CongruenceLattice::from_family(all)
}

/// A pair of complementary permuting congruences together with the
/// isomorphism `a ↦ (a/α, a/β)` onto `A/α × A/β`, encoded as
/// `class_α · |A/β| + class_β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorPair {
    pub alpha: Partition,
    pub beta: Partition,
    pub iso: Vec<Elem>,
}

pub fn factor_pairs(lat: &CongruenceLattice) -> Vec<FactorPair> {
    let (bot, top) = (lat.bottom(), lat.top());
    let mut out = Vec::new();
    for i in 0..lat.len() {
        for j in 0..lat.len() {
            if lat.meet_idx(i, j) != bot || lat.join_idx(i, j) != top {
                continue;
            }
            let (a, b) = (lat.get(i), lat.get(j));
            if !a.permutes_with(b) {
                continue;
            }
            let nb = b.num_classes();
            let iso = (0..a.len()).map(|x| a.class_of(x) * nb + b.class_of(x)).collect();
            out.push(FactorPair {
                alpha: a.clone(),
                beta: b.clone(),
                iso,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clone::DEFAULT_CAP;
    use crate::zoo;

    /// All partitions of `0..n` via restricted growth strings.
    fn all_partitions(n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut rg = vec![0usize; n];
        loop {
            out.push(Partition::from_labels(&rg));
            let mut i = n;
            loop {
                if i <= 1 {
                    return out;
                }
                i -= 1;
                let max_prev = rg[..i].iter().copied().max().unwrap_or(0);
                if rg[i] <= max_prev {
                    rg[i] += 1;
                    for r in rg.iter_mut().skip(i + 1) {
                        *r = 0;
                    }
                    break;
                }
            }
        }
    }

    fn brute_force_con(alg: &FiniteAlgebra) -> Vec<Partition> {
        all_partitions(alg.size())
            .into_iter()
            .filter(|p| alg.is_compatible(p))
            .collect()
    }

    #[test]
    fn transposes_in_small_lattices() {
        // Con(Z2 x Z2) is M3: all atom covers are projective through the top
        let lat = congruence_lattice(&zoo::z2_x_z2(), DEFAULT_CAP).unwrap();
        let (bot, top) = (lat.bottom(), lat.top());
        let atoms = lat.upper_covers(bot).to_vec();
        assert_eq!(atoms.len(), 3);
        assert!(lat.transposes_up((bot, atoms[0]), (atoms[1], top)));
        assert!(lat.projective_covers((bot, atoms[0]), (bot, atoms[2])));
        // in the 3-chain Con(Z4) the two covers are not projective
        let lat = congruence_lattice(&zoo::cyclic(4), DEFAULT_CAP).unwrap();
        let mid = lat.upper_covers(lat.bottom())[0];
        assert!(!lat.projective_covers((lat.bottom(), mid), (mid, lat.top())));
    }

    #[test]
    fn partition_enumeration_counts_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for n in 1..=6 {
            assert_eq!(all_partitions(n).len(), bell[n]);
        }
    }

    #[test]
    fn principal_congruences() {
        let z4 = zoo::cyclic(4);
        assert_eq!(principal_congruence(&z4, 0, 2).unwrap().to_string(), "{0 2|1 3}");
        assert!(principal_congruence(&z4, 3, 3).unwrap().is_zero());
        let s3 = zoo::s3();
        let a3 = principal_congruence(&s3, zoo::S3_IDENTITY, zoo::S3_ROTATIONS[1]).unwrap();
        assert_eq!(a3.to_string(), "{0 3 4|1 2 5}");
        assert!(matches!(
            principal_congruence(&z4, 0, 9),
            Err(Error::ElementOutOfRange { elem: 9, size: 4 })
        ));
    }

    #[test]
    fn lattice_sizes_match_brute_force_and_normal_subgroups() {
        let cases = [
            (zoo::cyclic(4), 3),
            (zoo::cyclic(6), 4),
            (zoo::s3(), 3),
            (zoo::z2_x_z2(), 5),
            (zoo::two_lattice(), 2),
            (zoo::two_boolean(), 2),
            (zoo::two_semilattice(), 2),
            (zoo::cyclic(2), 2),
        ];
        for (alg, count) in cases {
            let lat = congruence_lattice(&alg, DEFAULT_CAP).unwrap();
            assert_eq!(lat.len(), count, "{}", alg.name());
            let mut bf = brute_force_con(&alg);
            bf.sort();
            let mut got = lat.elements().to_vec();
            got.sort();
            assert_eq!(got, bf, "{}", alg.name());
        }
    }

    #[test]
    fn z4_chain_and_monolith() {
        let lat = congruence_lattice(&zoo::cyclic(4), DEFAULT_CAP).unwrap();
        assert_eq!(lat.covers(), vec![(0, 1), (1, 2)]);
        assert_eq!(lat.monolith().unwrap().to_string(), "{0 2|1 3}");
        assert!(lat.is_distributive());
        let pairs = factor_pairs(&lat);
        assert_eq!(pairs.len(), 2);
        assert!(pairs.iter().all(|p| p.alpha.is_zero() || p.alpha.is_one()));
    }

    #[test]
    fn z6_diamond() {
        let z6 = zoo::cyclic(6);
        let lat = congruence_lattice(&z6, DEFAULT_CAP).unwrap();
        let mod2 = Partition::from_labels(&[0, 1, 0, 1, 0, 1]);
        let mod3 = Partition::from_labels(&[0, 1, 2, 0, 1, 2]);
        assert!(lat.join(&mod2, &mod3).unwrap().is_one());
        assert!(lat.meet(&mod2, &mod3).unwrap().is_zero());
        assert_eq!(lat.join(&mod2, &Partition::zero(6)).unwrap(), mod2);
        assert!(lat.is_modular() && lat.is_distributive());
        assert_eq!(lat.monolith(), None);
        let nontrivial: Vec<_> = factor_pairs(&lat)
            .into_iter()
            .filter(|p| !p.alpha.is_zero() && !p.alpha.is_one())
            .collect();
        assert_eq!(nontrivial.len(), 2);
        for fp in &nontrivial {
            let q = z6
                .quotient(&fp.alpha)
                .unwrap()
                .direct_product(&z6.quotient(&fp.beta).unwrap())
                .unwrap();
            assert!(z6.is_isomorphism(&q, &fp.iso));
        }
        assert!(lat.is_join_irreducible(&mod2).unwrap().unwrap().is_zero());
        assert_eq!(lat.is_join_irreducible(&Partition::one(6)).unwrap(), None);
        assert_eq!(
            lat.join(&Partition::from_labels(&[0, 0, 1, 1, 2, 2]), &mod2),
            Err(Error::LatticeMismatch)
        );
    }

    #[test]
    fn pentagon_is_not_modular() {
        let n5 = vec![
            Partition::zero(4),
            Partition::from_classes(4, &[vec![0, 1]]),
            Partition::from_classes(4, &[vec![0, 1], vec![2, 3]]),
            Partition::from_classes(4, &[vec![0, 2], vec![1, 3]]),
            Partition::one(4),
        ];
        let lat = CongruenceLattice::from_family(n5).unwrap();
        assert!(!lat.is_modular());
        assert!(!lat.is_distributive());
        let two = congruence_lattice(&zoo::two_lattice(), DEFAULT_CAP).unwrap();
        assert!(two.is_distributive());
    }

    #[test]
    fn dot_output_lists_every_edge() {
        let lat = congruence_lattice(&zoo::cyclic(6), DEFAULT_CAP).unwrap();
        let dot = lat.to_dot(None);
        assert_eq!(dot.matches("->").count(), 4);
    }

    #[test]
    fn lattice_invariants_on_zoo() {
        for e in zoo::zoo() {
            let alg = &e.algebra;
            if alg.size() > 6 {
                continue;
            }
            let lat = congruence_lattice(alg, DEFAULT_CAP).unwrap();
            for p in lat.elements() {
                assert!(alg.is_compatible(p));
            }
            // (a,b) ∈ θ iff Cg(a,b) ⊆ θ
            for a in 0..alg.size() {
                for b in 0..alg.size() {
                    let cg = principal_congruence(alg, a, b).unwrap();
                    for p in lat.elements() {
                        assert_eq!(p.related(a, b), cg.refines(p));
                    }
                }
            }
            // transitive closure of covers is strict containment
            let m = lat.len();
            let mut reach = vec![vec![false; m]; m];
            for (i, j) in lat.covers() {
                reach[i][j] = true;
            }
            for k in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        if reach[i][k] && reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
            for i in 0..m {
                assert!(!reach[i][i]);
                for j in 0..m {
                    assert_eq!(reach[i][j], i != j && lat.leq(i, j));
                }
            }
        }
    }
}
