//! Diagonal search for algebras with the uniform solution property.

use super::{verified, Answer, SolveResult, Solver, Stats};
use crate::algebra::FiniteAlgebra;
use crate::circuit::{Assignment, Instance};
use crate::clone::DEFAULT_CAP;
use crate::error::{Error, Result};
use crate::structure::{is_dl_like, Problem};

/// Tries only the constant assignments `x̄ = (a,…,a)`. For a DL-like
/// algebra a polynomial attaining `a` attains it on that diagonal, so this
/// is complete.
pub fn solve_usp(alg: &FiniteAlgebra, inst: &Instance) -> Result<SolveResult> {
    if !matches!(inst.problem(), Problem::Csat | Problem::Mcsat) {
        return Err(Error::InstanceShape(
            "the diagonal check decides CSAT and MCSAT only".into(),
        ));
    }
    if !is_dl_like(alg, DEFAULT_CAP)?.verdict.is_yes() {
        return Err(Error::NotDlLike);
    }
    let cc = inst.circuit().compile(alg)?;
    let n = cc.input_names().len();
    let mut buf = Vec::new();
    let mut stats = Stats::default();
    let mut answer = Answer::Unsat;
    for a in 0..alg.size() {
        let vals = vec![a; n];
        cc.eval_gates(&vals, &mut buf);
        stats.assignments += 1;
        if inst.holds(&cc, &buf) {
            answer = Answer::Sat(Assignment::new(cc.input_names().to_vec(), vals));
            break;
        }
    }
    stats.gate_evaluations = cc.gate_evaluations();
    verified(alg, inst, SolveResult::new(answer, Solver::Usp, stats))
}

#[cfg(test)]
mod tests {
    use super::super::tests::inst;
    use super::*;
    use crate::zoo;

    #[test]
    fn lattice_distributivity() {
        let l = zoo::two_lattice();
        let text = "g0 = input x\ng1 = input y\ng2 = input z\ng3 = meet g0 g1\ng4 = join g3 g2\n\
                    g5 = meet g1 g2\ng6 = join g0 g5\noutputs: g4 g6";
        let r = solve_usp(&l, &inst(&l, Problem::Csat, text)).unwrap();
        assert_eq!(r.answer.to_string(), "SAT x=0 y=0 z=0");
    }

    #[test]
    fn majority_constant() {
        let m = zoo::majority();
        let text = "g0 = input x\ng1 = input y\ng2 = input z\ng3 = m g0 g1 g2\ng4 = const 111\noutputs: g3 g4";
        let r = solve_usp(&m, &inst(&m, Problem::Csat, text)).unwrap();
        assert_eq!(r.answer.to_string(), "SAT x=0 y=0 z=0");
        assert_eq!(m.element_names().unwrap()[0], "111");
    }

    #[test]
    fn preconditions() {
        let z2 = zoo::cyclic(2);
        let i = inst(&z2, Problem::Csat, "g0 = input x\ng1 = const 1\noutputs: g0 g1");
        assert_eq!(solve_usp(&z2, &i), Err(Error::NotDlLike));
        let l = zoo::two_lattice();
        let i = inst(&l, Problem::Ceqv, "g0 = input x\ng1 = const 1\noutputs: g0 g1");
        assert!(matches!(solve_usp(&l, &i), Err(Error::InstanceShape(_))));
    }
}
