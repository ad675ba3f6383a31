//! The binary modular commutator and the predicates built on it.

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::congruence::{congruence_generated, congruence_lattice, factor_pairs, principal_congruence};
use crate::error::{Error, Result};
use crate::malcev::find_malcev_term;
use crate::partition::Partition;
use crate::Tri;

/// `[α, β]` via the pair algebra `A(α) ≤ A²`: with `Δ` the congruence of
/// `A(α)` generated by the pairs `((u,u),(v,v))` for `u β v`, the
/// commutator is generated by the `(x, y) ∈ α` with `(x,y) Δ (y,y)`.
pub fn commutator(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition) -> Result<Partition> {
    let n = alg.size();
    for p in [alpha, beta] {
        if p.len() != n || !alg.is_compatible(p) {
            return Err(Error::NotACongruence);
        }
    }
    if alpha.is_zero() || beta.is_zero() {
        return Ok(Partition::zero(n));
    }
    let mut elems: Vec<Vec<Elem>> = Vec::new();
    let mut pos = vec![usize::MAX; n * n];
    for a in 0..n {
        for b in 0..n {
            if alpha.related(a, b) {
                pos[a * n + b] = elems.len();
                elems.push(vec![a, b]);
            }
        }
    }
    let (pair_alg, _) = alg.subpower_from(elems)?;
    let gens: Vec<(Elem, Elem)> = beta.pairs().map(|(u, v)| (pos[u * n + u], pos[v * n + v])).collect();
    let delta = congruence_generated(&pair_alg, &gens)?;
    let mut pairs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && alpha.related(x, y) && delta.related(pos[x * n + y], pos[y * n + y]) {
                pairs.push((x, y));
            }
        }
    }
    congruence_generated(alg, &pairs)
}

/// `C(α, β; γ)`, read as `[α, β] ≤ γ`.
pub fn centralizes(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition, gamma: &Partition) -> Result<bool> {
    Ok(commutator(alg, alpha, beta)?.refines(gamma))
}

/// `(β : α)`, the largest `δ` with `[δ, β] ≤ α`, as the join of the
/// principal congruences that qualify.
pub fn centralizer(alg: &FiniteAlgebra, beta: &Partition, alpha: &Partition) -> Result<Partition> {
    let n = alg.size();
    if !alg.is_compatible(alpha) || !alg.is_compatible(beta) {
        return Err(Error::NotACongruence);
    }
    let mut acc = Partition::zero(n);
    for a in 0..n {
        for b in (a + 1)..n {
            if acc.related(a, b) {
                continue;
            }
            let cg = principal_congruence(alg, a, b)?;
            if commutator(alg, &cg, beta)?.refines(alpha) {
                acc = acc.join(&cg);
            }
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesKind {
    /// `θ(1) = 1`, `θ(i+1) = [1, θ(i)]`.
    LowerCentral,
    /// `θ[0] = 1`, `θ[i+1] = [θ[i], θ[i]]`.
    Derived,
}

/// A descending series, listed until the first repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub terms: Vec<Partition>,
}

impl SeriesReport {
    /// Index of the term at which the series becomes constant.
    pub fn stabilization_index(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn reaches_zero(&self) -> bool {
        self.terms.last().is_some_and(Partition::is_zero)
    }
}

fn series(alg: &FiniteAlgebra, kind: SeriesKind) -> Result<SeriesReport> {
    let one = Partition::one(alg.size());
    let mut terms = vec![one.clone()];
    loop {
        let last = terms.last().unwrap();
        if last.is_zero() {
            break;
        }
        let next = match kind {
            SeriesKind::LowerCentral => commutator(alg, &one, last)?,
            SeriesKind::Derived => commutator(alg, last, last)?,
        };
        if &next == last {
            break;
        }
        terms.push(next);
    }
    Ok(SeriesReport { kind, terms })
}

pub fn lower_central_series(alg: &FiniteAlgebra) -> Result<SeriesReport> {
    series(alg, SeriesKind::LowerCentral)
}

pub fn derived_series(alg: &FiniteAlgebra) -> Result<SeriesReport> {
    series(alg, SeriesKind::Derived)
}

pub fn is_abelian(alg: &FiniteAlgebra) -> Result<bool> {
    let one = Partition::one(alg.size());
    Ok(commutator(alg, &one, &one)?.is_zero())
}

pub fn is_nilpotent(alg: &FiniteAlgebra) -> Result<bool> {
    Ok(lower_central_series(alg)?.reaches_zero())
}

pub fn is_solvable(alg: &FiniteAlgebra) -> Result<bool> {
    Ok(derived_series(alg)?.reaches_zero())
}

/// Least `k` with `θ(k+1) = 0`; `0` for the trivial algebra, `None` when
/// the algebra is not nilpotent.
pub fn nilpotency_class(alg: &FiniteAlgebra) -> Result<Option<usize>> {
    let s = lower_central_series(alg)?;
    Ok(s.reaches_zero().then(|| s.terms.len() - 1))
}

/// Abelian with a Malcev term.
pub fn is_affine(alg: &FiniteAlgebra, cap: usize) -> Result<Tri> {
    if !is_abelian(alg)? {
        return Ok(Tri::No);
    }
    match find_malcev_term(alg, cap) {
        Ok(d) => Ok(Tri::from_bool(d.is_some())),
        Err(Error::CapExceeded(_)) => Ok(Tri::Unknown),
        Err(e) => Err(e),
    }
}

/// Outcome of the supernilpotency test with the direct factorization found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupernilReport {
    pub verdict: Tri,
    /// Orders of the directly indecomposable factors found.
    pub factor_sizes: Vec<usize>,
}

fn prime_power(n: usize) -> bool {
    if n < 2 {
        return n == 1;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

fn indecomposable_factors(alg: &FiniteAlgebra, cap: usize, out: &mut Vec<usize>) -> Result<()> {
    if alg.size() == 1 {
        return Ok(());
    }
    let lat = congruence_lattice(alg, cap)?;
    let split = factor_pairs(&lat)
        .into_iter()
        .find(|fp| !fp.alpha.is_zero() && !fp.beta.is_zero());
    match split {
        Some(fp) => {
            indecomposable_factors(&alg.quotient(&fp.alpha)?, cap, out)?;
            indecomposable_factors(&alg.quotient(&fp.beta)?, cap, out)
        }
        None => {
            out.push(alg.size());
            Ok(())
        }
    }
}

/// Nilpotent and a direct product of algebras of prime power order.
pub fn is_supernilpotent(alg: &FiniteAlgebra, cap: usize) -> Result<SupernilReport> {
    let mut factor_sizes = Vec::new();
    match indecomposable_factors(alg, cap, &mut factor_sizes) {
        Ok(()) => {}
        Err(Error::CapExceeded(_)) => {
            return Ok(SupernilReport {
                verdict: Tri::Unknown,
                factor_sizes,
            })
        }
        Err(e) => return Err(e),
    }
    factor_sizes.sort_unstable();
    let verdict = is_nilpotent(alg)? && factor_sizes.iter().all(|&s| prime_power(s));
    Ok(SupernilReport {
        verdict: Tri::from_bool(verdict),
        factor_sizes,
    })
}
