//! Searches for terms and polynomials satisfying identities: Malcev terms,
//! directed Gumm chains, and lattice operations realized by polynomials.

use std::collections::{HashMap, VecDeque};

use crate::algebra::{Elem, FiniteAlgebra, Operation};
use crate::clone::{all_tuples, kary_poly_clone, realize, seeded, Closure};
use crate::error::{Error, Result};
use crate::term::{eval_term, Term};

fn malcev_domain(n: usize) -> (Vec<Vec<Elem>>, Vec<Elem>) {
    let mut dom = Vec::new();
    let mut target = Vec::new();
    for x in 0..n {
        for y in 0..n {
            dom.push(vec![x, x, y]);
            target.push(y);
            if x != y {
                dom.push(vec![y, x, x]);
                target.push(y);
            }
        }
    }
    (dom, target)
}

/// Searches the ternary term clone for `d` with `d(x,x,y) = y = d(y,x,x)`.
///
/// `Ok(None)` means the closure finished without one; a cap overrun is
/// reported as `Err(CapExceeded)` and must be read as "unknown".
pub fn find_malcev_term(alg: &FiniteAlgebra, cap: usize) -> Result<Option<Term>> {
    let (dom, target) = malcev_domain(alg.size());
    realize(alg, &dom, 3, &target, false, cap)
}

/// Same search with constants allowed.
pub fn find_malcev_polynomial(alg: &FiniteAlgebra, cap: usize) -> Result<Option<Term>> {
    let (dom, target) = malcev_domain(alg.size());
    realize(alg, &dom, 3, &target, true, cap)
}

/// Pointwise check of the Malcev identities over the whole universe.
pub fn is_malcev(alg: &FiniteAlgebra, d: &Term) -> Result<bool> {
    let n = alg.size();
    for x in 0..n {
        for y in 0..n {
            if eval_term(alg, d, &[x, x, y])? != y || eval_term(alg, d, &[y, x, x])? != y {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A Malcev term if the term search settles, otherwise a Malcev polynomial.
pub fn find_malcev_operation(alg: &FiniteAlgebra, cap: usize) -> Result<Option<Term>> {
    match find_malcev_term(alg, cap) {
        Ok(Some(t)) => Ok(Some(t)),
        Ok(None) | Err(Error::CapExceeded(_)) => find_malcev_polynomial(alg, cap),
        Err(e) => Err(e),
    }
}

/// Some `(b, c)` for which `x ↦ d(x, b, c)` is not a permutation, given the
/// ternary table of `d`.
pub fn non_permutation(n: usize, d: &[Elem]) -> Option<(Elem, Elem)> {
    for b in 0..n {
        for c in 0..n {
            let mut seen = vec![false; n];
            for x in 0..n {
                if std::mem::replace(&mut seen[d[(x * n + b) * n + c]], true) {
                    return Some((b, c));
                }
            }
        }
    }
    None
}

/// A chain `d_1..d_n, Q` of directed Gumm terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GummTerms {
    pub ds: Vec<Term>,
    pub q: Term,
}

impl GummTerms {
    /// Checks every defining identity pointwise on the full universe.
    pub fn verify(&self, alg: &FiniteAlgebra) -> Result<bool> {
        let n = alg.size();
        if self.ds.is_empty() {
            return Ok(false);
        }
        let ev = |t: &Term, a: Elem, b: Elem, c: Elem| eval_term(alg, t, &[a, b, c]);
        for x in 0..n {
            for y in 0..n {
                for d in &self.ds {
                    if ev(d, x, y, x)? != x {
                        return Ok(false);
                    }
                }
                if ev(&self.ds[0], x, x, y)? != x {
                    return Ok(false);
                }
                for w in self.ds.windows(2) {
                    if ev(&w[0], x, y, y)? != ev(&w[1], x, x, y)? {
                        return Ok(false);
                    }
                }
                if ev(self.ds.last().unwrap(), x, y, y)? != ev(&self.q, x, y, y)? {
                    return Ok(false);
                }
                if ev(&self.q, x, x, y)? != y {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Searches for directed Gumm terms with chain length at most `max_n`.
///
/// A Malcev term `d` yields the chain `d_1 = x, Q = d` immediately. Otherwise
/// the ternary term clone is generated on the tuples the identities mention
/// and a shortest chain is found by breadth-first search over the binary
/// profiles `d(x,x,y)` and `d(x,y,y)`.
pub fn find_directed_gumm_terms(alg: &FiniteAlgebra, max_n: usize, cap: usize) -> Result<Option<GummTerms>> {
    if max_n == 0 {
        return Ok(None);
    }
    if let Some(d) = find_malcev_term(alg, cap)? {
        return Ok(Some(GummTerms {
            ds: vec![Term::var(0)],
            q: d,
        }));
    }
    let n = alg.size();
    let mut dom: Vec<Vec<Elem>> = Vec::new();
    let mut pos: HashMap<Vec<Elem>, usize> = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            for t in [vec![x, y, x], vec![x, x, y], vec![x, y, y]] {
                if !pos.contains_key(&t) {
                    pos.insert(t.clone(), dom.len());
                    dom.push(t);
                }
            }
        }
    }
    let mut sp = seeded(alg, &dom, 3, false)?;
    sp.close(cap, |_| false)?;

    let profile = |v: &[u8], shape: fn(Elem, Elem) -> [Elem; 3]| -> Vec<u8> {
        let mut out = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                out.push(v[pos[&shape(x, y).to_vec()]]);
            }
        }
        out
    };
    let xxy = |x, y| [x, x, y];
    let xyy = |x, y| [x, y, y];
    let pi1: Vec<u8> = (0..n).flat_map(|x| (0..n).map(move |_| x as u8)).collect();
    let pi2: Vec<u8> = (0..n).flat_map(|_| (0..n).map(|y| y as u8)).collect();

    // edges from d-terms, and goals from Q-candidates
    let mut edges: HashMap<Vec<u8>, Vec<(Vec<u8>, usize)>> = HashMap::new();
    let mut goals: HashMap<Vec<u8>, usize> = HashMap::new();
    for i in 0..sp.len() {
        let v = sp.get(i);
        let is_d = (0..n).all(|x| (0..n).all(|y| v[pos[&vec![x, y, x]]] as usize == x));
        if is_d {
            edges.entry(profile(v, xxy)).or_default().push((profile(v, xyy), i));
        }
        if profile(v, xxy) == pi2 {
            goals.entry(profile(v, xyy)).or_insert(i);
        }
    }

    // BFS over profiles; a path of k edges is a chain d_1..d_k.
    let mut prev: HashMap<Vec<u8>, (Vec<u8>, usize)> = HashMap::new();
    let mut depth: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    depth.insert(pi1.clone(), 0);
    queue.push_back(pi1.clone());
    while let Some(p) = queue.pop_front() {
        let dp = depth[&p];
        if dp >= max_n {
            continue;
        }
        for (next, term_idx) in edges.get(&p).into_iter().flatten() {
            if depth.contains_key(next) {
                continue;
            }
            depth.insert(next.clone(), dp + 1);
            prev.insert(next.clone(), (p.clone(), *term_idx));
            if let Some(&qi) = goals.get(next) {
                let mut chain = Vec::new();
                let mut cur = next.clone();
                while let Some((from, ti)) = prev.get(&cur) {
                    chain.push(sp.witness(*ti));
                    cur = from.clone();
                }
                chain.reverse();
                return Ok(Some(GummTerms {
                    ds: chain,
                    q: sp.witness(qi),
                }));
            }
            queue.push_back(next.clone());
        }
    }
    Ok(None)
}

/// Which lattice operations polynomials realize on a 2-element subset `{a, b}`,
/// read with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSummary {
    pub pair: [Elem; 2],
    pub meet: Option<Term>,
    pub join: Option<Term>,
    pub negation: Option<Term>,
    /// Every unary polynomial mapping the pair into itself is monotone.
    pub monotone: bool,
}

pub fn induced_on_pair_set(alg: &FiniteAlgebra, pair: [Elem; 2], cap: usize) -> Result<PairSummary> {
    let [a, b] = pair;
    alg.check_elem(a)?;
    alg.check_elem(b)?;
    if a == b {
        return Err(Error::Precondition("pair set needs two distinct elements".into()));
    }
    let dom2 = vec![vec![a, a], vec![a, b], vec![b, a], vec![b, b]];
    let meet = realize(alg, &dom2, 2, &[a, a, a, b], true, cap)?;
    let join = realize(alg, &dom2, 2, &[a, b, b, b], true, cap)?;
    let negation = realize(alg, &[vec![a], vec![b]], 1, &[b, a], true, cap)?;
    let monotone = negation.is_none();
    Ok(PairSummary {
        pair,
        meet,
        join,
        negation,
        monotone,
    })
}

/// True iff the 2-element algebra has polynomial meet and join and no
/// polynomial negation, i.e. it is polynomially equivalent to the 2-element lattice.
pub fn is_poly_equiv_to_2lattice(alg2: &FiniteAlgebra) -> Result<bool> {
    if alg2.size() != 2 {
        return Err(Error::SizeNot2(alg2.size()));
    }
    let s = induced_on_pair_set(alg2, [0, 1], crate::clone::DEFAULT_CAP)?;
    Ok(s.meet.is_some() && s.join.is_some() && s.monotone)
}

fn is_semilattice_op(t: &[Elem], n: usize) -> bool {
    let f = |x: Elem, y: Elem| t[x * n + y];
    (0..n).all(|x| f(x, x) == x)
        && (0..n).all(|x| (0..n).all(|y| f(x, y) == f(y, x)))
        && (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| f(f(x, y), z) == f(x, f(y, z)))))
}

/// Decides whether the algebra is polynomially equivalent to some
/// distributive lattice on its universe: binary polynomials `∧, ∨` forming a
/// distributive lattice such that every basic operation is a polynomial of
/// that lattice.
pub fn is_poly_equiv_to_dlattice(alg: &FiniteAlgebra, cap: usize) -> Result<bool> {
    let n = alg.size();
    if n == 1 {
        return Ok(true);
    }
    let pol2 = kary_poly_clone(alg, 2, cap)?;
    let semis: Vec<Vec<Elem>> = pol2.tables().filter(|t| is_semilattice_op(t, n)).collect();
    for meet in &semis {
        // the order induced by meet: x ≤ y iff x ∧ y = x
        let leq = |x: Elem, y: Elem| meet[x * n + y] == x;
        for join in &semis {
            let absorbs = (0..n).all(|x| {
                (0..n).all(|y| join[x * n + y] == y || !leq(x, y)) && (0..n).all(|y| !leq(x, y) || join[x * n + y] == y)
            });
            let consistent = (0..n).all(|x| (0..n).all(|y| leq(x, y) == (join[x * n + y] == y)));
            if !absorbs || !consistent {
                continue;
            }
            let distributive = (0..n).all(|x| {
                (0..n).all(|y| {
                    (0..n).all(|z| meet[x * n + join[y * n + z]] == join[meet[x * n + y] * n + meet[x * n + z]])
                })
            });
            if !distributive {
                continue;
            }
            let lattice = FiniteAlgebra::new(
                "L",
                n,
                vec![
                    Operation::new("meet", 2, meet.clone()),
                    Operation::new("join", 2, join.clone()),
                ],
            )?;
            let mut all_in = true;
            for op in alg.ops() {
                let dom = all_tuples(n, op.arity());
                if realize(&lattice, &dom, op.arity(), op.table(), true, cap)?.is_none() {
                    all_in = false;
                    break;
                }
            }
            if all_in {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Convenience: the ternary term clone, fully generated (used by tests and
/// diagnostics; usually much larger than the restricted searches above).
pub fn ternary_term_clone_size(alg: &FiniteAlgebra, cap: usize) -> Result<usize> {
    let dom = all_tuples(alg.size(), 3);
    let mut sp = seeded(alg, &dom, 3, false)?;
    match sp.close(cap, |_| false)? {
        Closure::Complete | Closure::Found(_) => Ok(sp.len()),
    }
}
