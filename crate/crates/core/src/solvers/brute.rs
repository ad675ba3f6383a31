//! Exhaustive search in lexicographic order, last input fastest.

use std::sync::atomic::{AtomicU64, Ordering};

use super::{verified, Answer, SolveOptions, SolveResult, Solver, Stats};
use crate::algebra::{increment, Elem, FiniteAlgebra};
use crate::circuit::Instance;
use crate::error::{Error, Result};
use crate::structure::Problem;

pub fn solve_bruteforce(alg: &FiniteAlgebra, inst: &Instance) -> Result<SolveResult> {
    solve_bruteforce_with(alg, inst, SolveOptions::default())
}

/// The first assignment, in lexicographic order, that satisfies the instance
/// (CEQV: that separates the two outputs). With several threads the space is
/// cut into contiguous ranges and the earliest hit wins, so the witness is
/// the same as with one thread.
pub fn solve_bruteforce_with(alg: &FiniteAlgebra, inst: &Instance, opts: SolveOptions) -> Result<SolveResult> {
    let n = inst.circuit().num_inputs();
    let total = (alg.size() as u64)
        .checked_pow(n as u32)
        .filter(|&t| t <= opts.budget)
        .ok_or(Error::BudgetExceeded(opts.budget))?;
    let ceqv = inst.problem() == Problem::Ceqv;
    let threads = opts.threads.clamp(1, total.max(1) as usize);
    let chunk = total.div_ceil(threads as u64);
    let best = AtomicU64::new(u64::MAX);

    let scan = |lo: u64, hi: u64| -> Result<(Option<Vec<Elem>>, Stats)> {
        let cc = inst.circuit().compile(alg)?;
        let mut vals = decode(lo, n, alg.size());
        let mut buf = Vec::new();
        let mut stats = Stats::default();
        for idx in lo..hi {
            if idx & 0xfff == 0 && best.load(Ordering::Relaxed) < lo {
                break;
            }
            cc.eval_gates(&vals, &mut buf);
            stats.assignments += 1;
            if inst.holds(&cc, &buf) != ceqv {
                best.fetch_min(lo, Ordering::Relaxed);
                stats.gate_evaluations = cc.gate_evaluations();
                return Ok((Some(vals), stats));
            }
            increment(&mut vals, alg.size());
        }
        stats.gate_evaluations = cc.gate_evaluations();
        Ok((None, stats))
    };

    let results: Vec<Result<(Option<Vec<Elem>>, Stats)>> = if threads == 1 {
        vec![scan(0, total)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..threads as u64)
                .map(|t| {
                    let (lo, hi) = (t * chunk, ((t + 1) * chunk).min(total));
                    let scan = &scan;
                    s.spawn(move || scan(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };

    let mut stats = Stats::default();
    let mut found = None;
    for r in results {
        let (hit, st) = r?;
        stats.add(st);
        if found.is_none() {
            found = hit;
        }
    }
    let names = inst.circuit().input_names();
    let answer = match (found, ceqv) {
        (Some(v), false) => Answer::Sat(crate::circuit::Assignment::new(names, v)),
        (Some(v), true) => Answer::NotEquiv(crate::circuit::Assignment::new(names, v)),
        (None, false) => Answer::Unsat,
        (None, true) => Answer::Equiv,
    };
    verified(alg, inst, SolveResult::new(answer, Solver::Brute, stats))
}

/// The `idx`-th tuple of `0..base` of length `n` in lexicographic order.
fn decode(mut idx: u64, n: usize, base: usize) -> Vec<Elem> {
    let mut v = vec![0; n];
    for slot in v.iter_mut().rev() {
        *slot = (idx % base as u64) as Elem;
        idx /= base as u64;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::super::tests::inst;
    use super::*;
    use crate::zoo;

    #[test]
    fn small_cases() {
        let l = zoo::two_lattice();
        let i = inst(
            &l,
            Problem::Csat,
            "g0 = input x\ng1 = input y\ng2 = meet g0 g1\ng3 = const 1\noutputs: g2 g3",
        );
        assert_eq!(solve_bruteforce(&l, &i).unwrap().answer.to_string(), "SAT x=1 y=1");

        let i = inst(
            &l,
            Problem::Ceqv,
            "g0 = input x\ng1 = input y\ng2 = meet g0 g1\ng3 = meet g1 g0\noutputs: g2 g3",
        );
        assert_eq!(solve_bruteforce(&l, &i).unwrap().answer, Answer::Equiv);

        let z2 = zoo::cyclic(2);
        let i = inst(
            &z2,
            Problem::Csat,
            "g0 = input x\ng1 = add g0 g0\ng2 = const 1\noutputs: g1 g2",
        );
        assert_eq!(solve_bruteforce(&z2, &i).unwrap().answer, Answer::Unsat);
    }

    #[test]
    fn threads_do_not_change_the_witness() {
        let z4 = zoo::cyclic(4);
        let text =
            "g0 = input a\ng1 = input b\ng2 = input c\ng3 = add g0 g1\ng4 = add g3 g2\ng5 = const 3\noutputs: g4 g5";
        let i = inst(&z4, Problem::Csat, text);
        let one = solve_bruteforce(&z4, &i).unwrap();
        for threads in [2, 3, 7, 64] {
            let many = solve_bruteforce_with(
                &z4,
                &i,
                SolveOptions {
                    threads,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(many.answer, one.answer);
        }
        assert_eq!(one.answer.to_string(), "SAT a=0 b=0 c=3");
    }

    #[test]
    fn budget() {
        let z4 = zoo::cyclic(4);
        let i = inst(
            &z4,
            Problem::Csat,
            "g0 = input a\ng1 = input b\ng2 = add g0 g1\noutputs: g2 g0",
        );
        let tight = SolveOptions { budget: 15, threads: 1 };
        assert_eq!(solve_bruteforce_with(&z4, &i, tight), Err(Error::BudgetExceeded(15)));
    }

    #[test]
    fn decode_matches_increment() {
        let mut v = vec![0; 3];
        for idx in 0..27 {
            assert_eq!(decode(idx, 3, 3), v);
            increment(&mut v, 3);
        }
    }
}
