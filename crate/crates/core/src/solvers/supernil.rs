//! Bounded-support search for supernilpotent algebras.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{verified, Answer, SolveResult, Solver, Stats};
use crate::algebra::{increment, Elem, FiniteAlgebra};
use crate::circuit::{append_term, Assignment, Circuit, CompiledCircuit, Gate, Instance};
use crate::clone::DEFAULT_CAP;
use crate::commutator::{is_supernilpotent, nilpotency_class};
use crate::error::{Error, Result};
use crate::malcev::{find_malcev_operation, is_malcev, non_permutation};
use crate::structure::Problem;
use crate::term::{term_table, Term};

/// Bounds above `2^RAMSEY_CEILING_BITS` are reported as saturated.
pub const RAMSEY_CEILING_BITS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseyBound {
    /// The bound, or the ceiling when saturated.
    pub value: BigUint,
    pub saturated: bool,
}

impl RamseyBound {
    /// The bound as a support limit for `n` variables.
    pub fn cap_at(&self, n: usize) -> usize {
        self.value.to_usize().map_or(n, |v| v.min(n))
    }
}

/// `R_j(c; s)`: every `c`-colouring of the `j`-subsets of a set this large
/// has a homogeneous `s`-subset. Pigeonhole for `j = 1`, then the
/// Erdős–Rado step `c^(R_{j-1}^(j-1)) + j`, which overestimates the usual
/// binomial exponent. `None` once past the ceiling.
fn hyper_ramsey(j: usize, c: &BigUint, s: &BigUint, ceil: &BigUint) -> Option<BigUint> {
    let v = if j == 1 {
        if s.bits() == 0 {
            BigUint::one()
        } else {
            c * (s - 1u32) + 1u32
        }
    } else {
        let r = hyper_ramsey(j - 1, c, s, ceil)?;
        let e = r.pow((j - 1) as u32);
        if c.is_one() {
            BigUint::from(j)
        } else {
            let e = e.to_u64().filter(|&e| e <= RAMSEY_CEILING_BITS)?;
            c.pow(e as u32) + j
        }
    };
    let v = v.max(s.clone());
    (v <= *ceil).then_some(v)
}

/// A support size `D` such that colouring the `≤(k−1)`-subsets of a
/// `D`-set with `C = |A|^(k·|A|)` colours forces an `m`-subset,
/// `m = (k−1)!·|A|`, homogeneous on each subset size. Composes the
/// single-size bounds from size `1` up to `k−1`.
pub fn ramsey_support_bound(k: usize, card: usize) -> RamseyBound {
    assert!(k >= 1 && card >= 1, "k and |A| must be positive");
    let (c, m) = (colors(k, card), homogeneous_size(k, card));
    let ceil = BigUint::one() << RAMSEY_CEILING_BITS;
    let mut s = Some(m);
    for j in 1..k {
        s = s.and_then(|s| hyper_ramsey(j, &c, &s, &ceil));
    }
    match s {
        Some(value) => RamseyBound {
            value,
            saturated: false,
        },
        None => RamseyBound {
            value: ceil,
            saturated: true,
        },
    }
}

fn colors(k: usize, card: usize) -> BigUint {
    BigUint::from(card).pow((k * card) as u32)
}

fn homogeneous_size(k: usize, card: usize) -> BigUint {
    (1..k).fold(BigUint::from(card), |acc, i| acc * i)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupernilpotentSolverParams {
    pub zero_element: Elem,
    /// Supernilpotency degree used for the bound.
    pub k: usize,
    /// `|A|^(k·|A|)`.
    pub c: BigUint,
    /// `(k−1)!·|A|`.
    pub m: BigUint,
    pub d: RamseyBound,
    /// Skip the supernilpotency check.
    pub assume_supernilpotent: bool,
}

impl SupernilpotentSolverParams {
    pub fn new(card: usize, k: usize, zero_element: Elem) -> Result<Self> {
        if k == 0 || card == 0 {
            return Err(Error::Precondition("k and |A| must be positive".into()));
        }
        if zero_element >= card {
            return Err(Error::ElementOutOfRange {
                elem: zero_element,
                size: card,
            });
        }
        Ok(SupernilpotentSolverParams {
            zero_element,
            k,
            c: colors(k, card),
            m: homogeneous_size(k, card),
            d: ramsey_support_bound(k, card),
            assume_supernilpotent: false,
        })
    }

    /// `k` defaults to the nilpotency class (at least 1).
    pub fn for_algebra(alg: &FiniteAlgebra, zero_element: Elem) -> Result<Self> {
        let k = nilpotency_class(alg)?.ok_or(Error::NotSupernilpotent)?.max(1);
        Self::new(alg.size(), k, zero_element)
    }
}

fn malcev_for(alg: &FiniteAlgebra) -> Result<Term> {
    find_malcev_operation(alg, DEFAULT_CAP)?
        .ok_or_else(|| Error::NotMalcev("the algebra has no Malcev polynomial".into()))
}

/// `w(x̄) = d(t(x̄), s(x̄), 0)` for the two outputs `t, s`: `w = 0` exactly
/// where `t = s`, provided every `x ↦ d(x,b,c)` is a permutation.
pub fn normalize_to_zero(alg: &FiniteAlgebra, inst: &Instance, d: &Term, zero: Elem) -> Result<Circuit> {
    if inst.circuit().outputs().len() != 2 {
        return Err(Error::InstanceShape("normalization needs exactly two outputs".into()));
    }
    alg.check_elem(zero)?;
    if !is_malcev(alg, d)? {
        return Err(Error::NotMalcev(format!("{d} fails d(x,x,y) = y = d(y,x,x)")));
    }
    if let Some((b, c)) = non_permutation(alg.size(), &term_table(alg, d, 3)?) {
        return Err(Error::NotMalcev(format!("x -> d(x,{b},{c}) is not a permutation")));
    }
    let c = inst.circuit();
    let mut gates = c.gates().to_vec();
    gates.push(Gate::Const(zero));
    let z = gates.len() - 1;
    let w = append_term(&mut gates, d, &[c.outputs()[0], c.outputs()[1], z])?;
    Circuit::new(alg, gates, vec![w])
}

/// Assignments with at most `limit` entries different from `zero`, by
/// support size, then support set, then values (all lexicographic). Returns
/// the first one accepted by `hit`.
fn sweep(
    cc: &CompiledCircuit<'_>,
    zero: Elem,
    limit: usize,
    budget: u64,
    mut hit: impl FnMut(&[Elem]) -> bool,
) -> Result<(Option<Vec<Elem>>, Stats)> {
    let n = cc.input_names().len();
    let nonzero: Vec<Elem> = (0..cc.algebra().size()).filter(|&e| e != zero).collect();
    let mut stats = Stats::default();
    let mut buf = Vec::new();
    let mut vals = vec![zero; n];
    let top = if nonzero.is_empty() { 0 } else { limit.min(n) };
    for s in 0..=top {
        let mut support: Vec<usize> = (0..s).collect();
        loop {
            let mut pick = vec![0; s];
            loop {
                for (&i, &p) in support.iter().zip(&pick) {
                    vals[i] = nonzero[p];
                }
                stats.assignments += 1;
                if stats.assignments > budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                cc.eval_gates(&vals, &mut buf);
                if hit(&buf) {
                    stats.gate_evaluations = cc.gate_evaluations();
                    return Ok((Some(vals), stats));
                }
                if nonzero.is_empty() || !increment(&mut pick, nonzero.len()) {
                    break;
                }
            }
            for &i in &support {
                vals[i] = zero;
            }
            if !next_combination(&mut support, n) {
                break;
            }
        }
    }
    stats.gate_evaluations = cc.gate_evaluations();
    Ok((None, stats))
}

/// Advances a sorted `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn prepare(alg: &FiniteAlgebra, inst: &Instance, params: &SupernilpotentSolverParams) -> Result<Circuit> {
    if !params.assume_supernilpotent && !is_supernilpotent(alg, DEFAULT_CAP)?.verdict.is_yes() {
        return Err(Error::NotSupernilpotent);
    }
    normalize_to_zero(alg, inst, &malcev_for(alg)?, params.zero_element)
}

/// Decides CSAT by looking for a zero of the normalized `w` among
/// assignments of support at most `min(D, n)`.
pub fn solve_supernilpotent(
    alg: &FiniteAlgebra,
    inst: &Instance,
    params: &SupernilpotentSolverParams,
    budget: u64,
) -> Result<SolveResult> {
    if inst.problem() != Problem::Csat {
        return Err(Error::InstanceShape("the support sweep decides CSAT only".into()));
    }
    let w = prepare(alg, inst, params)?;
    let cc = w.compile(alg)?;
    let zero = params.zero_element;
    let limit = params.d.cap_at(cc.input_names().len());
    let (found, stats) = sweep(&cc, zero, limit, budget, |buf| cc.output_of(buf, 0) == zero)?;
    let answer = match found {
        Some(v) => Answer::Sat(cc.assignment(&v)),
        None => Answer::Unsat,
    };
    let mut r = SolveResult::new(answer, Solver::Supernilpotent, stats);
    if limit < cc.input_names().len() {
        r.diagnostics.push(format!("support sweep bounded at {limit}"));
    }
    verified(alg, inst, r)
}

/// Looks for a point where the normalized `w` is not zero among supports of
/// size at most `min(D, n)`; Equiv only after the full sweep. The bound for
/// this dual search is not established, so results are marked experimental.
pub fn ceqv_supernilpotent_experimental(
    alg: &FiniteAlgebra,
    inst: &Instance,
    params: &SupernilpotentSolverParams,
    budget: u64,
) -> Result<SolveResult> {
    if inst.problem() != Problem::Ceqv {
        return Err(Error::InstanceShape("expected a CEQV instance".into()));
    }
    let w = prepare(alg, inst, params)?;
    let cc = w.compile(alg)?;
    let zero = params.zero_element;
    let limit = params.d.cap_at(cc.input_names().len());
    let (found, stats) = sweep(&cc, zero, limit, budget, |buf| cc.output_of(buf, 0) != zero)?;
    let answer = match found {
        Some(v) => Answer::NotEquiv(cc.assignment(&v)),
        None => Answer::Equiv,
    };
    let mut r = SolveResult::new(answer, Solver::Supernilpotent, stats);
    r.experimental = true;
    if limit < cc.input_names().len() {
        r.diagnostics.push(format!("support sweep bounded at {limit}"));
    }
    verified(alg, inst, r)
}

/// The least number of non-`zero` inputs over all solutions, by exhaustive
/// search; `None` when unsatisfiable.
pub fn minimal_support(alg: &FiniteAlgebra, inst: &Instance, zero: Elem) -> Result<Option<usize>> {
    let cc = inst.circuit().compile(alg)?;
    let n = cc.input_names().len();
    let (found, _) = sweep(&cc, zero, n, u64::MAX, |buf| inst.holds(&cc, buf))?;
    Ok(found.map(|v| Assignment::new(cc.input_names().to_vec(), v).support(zero)))
}

/// Histogram of [`minimal_support`] over the satisfiable instances.
pub fn minimal_support_profile(
    alg: &FiniteAlgebra,
    instances: &[Instance],
    zero: Elem,
) -> Result<BTreeMap<usize, usize>> {
    let mut h = BTreeMap::new();
    for inst in instances {
        if let Some(s) = minimal_support(alg, inst, zero)? {
            *h.entry(s).or_insert(0) += 1;
        }
    }
    Ok(h)
}
