//! Deciders for CSAT, MCSAT, SCSAT and CEQV: exhaustive search plus the fast
//! paths for lattice-like, supernilpotent and affine algebras.

mod affine;
mod brute;
pub mod intlin;
mod supernil;
mod usp;

use std::fmt;

use serde::Serialize;

pub use affine::solve_affine;
pub use brute::{solve_bruteforce, solve_bruteforce_with};
pub use supernil::{
    ceqv_supernilpotent_experimental, minimal_support, minimal_support_profile, normalize_to_zero,
    ramsey_support_bound, solve_supernilpotent, RamseyBound, SupernilpotentSolverParams,
};
pub use usp::solve_usp;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::circuit::{Assignment, Circuit, Gate, Instance};
use crate::error::{Error, Result};
use crate::structure::{classify, decompose_nd, ClassificationReport, Problem};
use crate::tct::TypedLattice;

/// Default cap on circuit evaluations per search.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Answer {
    Sat(Assignment),
    Unsat,
    Equiv,
    NotEquiv(Assignment),
}

impl Answer {
    /// `true` for Sat and NotEquiv.
    pub fn is_positive(&self) -> bool {
        matches!(self, Answer::Sat(_) | Answer::NotEquiv(_))
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            Answer::Sat(a) | Answer::NotEquiv(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Sat(a) if a.names.is_empty() => f.write_str("SAT"),
            Answer::Sat(a) => write!(f, "SAT {a}"),
            Answer::Unsat => f.write_str("UNSAT"),
            Answer::Equiv => f.write_str("EQUIV"),
            Answer::NotEquiv(a) if a.names.is_empty() => f.write_str("NEQUIV"),
            Answer::NotEquiv(a) => write!(f, "NEQUIV {a}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Brute,
    Usp,
    Supernilpotent,
    Affine,
    Product,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Brute => "brute",
            Solver::Usp => "usp",
            Solver::Supernilpotent => "supernilpotent",
            Solver::Affine => "affine",
            Solver::Product => "product",
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Assignments evaluated.
    pub assignments: u64,
    pub gate_evaluations: u64,
}

impl Stats {
    fn add(&mut self, o: Stats) {
        self.assignments += o.assignments;
        self.gate_evaluations += o.gate_evaluations;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub answer: Answer,
    pub solver_used: Solver,
    pub stats: Stats,
    pub experimental: bool,
    pub diagnostics: Vec<String>,
}

impl SolveResult {
    fn new(answer: Answer, solver_used: Solver, stats: Stats) -> Self {
        SolveResult {
            answer,
            solver_used,
            stats,
            experimental: false,
            diagnostics: Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (answer, asg) = match &self.answer {
            Answer::Sat(a) => ("SAT", Some(a)),
            Answer::Unsat => ("UNSAT", None),
            Answer::Equiv => ("EQUIV", None),
            Answer::NotEquiv(a) => ("NEQUIV", Some(a)),
        };
        let asg = asg.map(|a| {
            serde_json::Value::Array(
                a.names
                    .iter()
                    .zip(&a.values)
                    .map(|(n, v)| serde_json::json!([n, v]))
                    .collect(),
            )
        });
        serde_json::json!({
            "schema": 1,
            "answer": answer,
            "assignment": asg,
            "solver_used": self.solver_used,
            "stats": self.stats,
            "experimental": self.experimental,
            "diagnostics": self.diagnostics,
        })
    }
}

/// Search limits shared by the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub budget: u64,
    /// Worker threads for exhaustive search; the reported witness does not
    /// depend on this.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_BUDGET,
            threads: 1,
        }
    }
}

/// Whether every equation of `inst` holds under `asg`.
pub fn equations_hold(alg: &FiniteAlgebra, inst: &Instance, asg: &Assignment) -> Result<bool> {
    let cc = inst.circuit().compile(alg)?;
    let out = cc.eval_assignment(asg)?;
    Ok(inst.equations().iter().all(|&(i, j)| out[i] == out[j]))
}

/// Re-evaluates any witness in `r` and panics if it does not certify the answer.
fn verified(alg: &FiniteAlgebra, inst: &Instance, r: SolveResult) -> Result<SolveResult> {
    let ceqv = inst.problem() == Problem::Ceqv;
    match &r.answer {
        Answer::Sat(a) => {
            assert!(!ceqv, "SAT answer to an equivalence instance");
            assert!(
                equations_hold(alg, inst, a)?,
                "{} returned a non-solution {a}",
                r.solver_used
            );
        }
        Answer::NotEquiv(a) => {
            assert!(ceqv, "NEQUIV answer to a satisfiability instance");
            assert!(
                !equations_hold(alg, inst, a)?,
                "{} returned a non-witness {a}",
                r.solver_used
            );
        }
        Answer::Unsat => assert!(!ceqv),
        Answer::Equiv => assert!(ceqv),
    }
    Ok(r)
}

/// Which fast path a classification report allows for an instance.
pub fn route(report: &ClassificationReport, problem: Problem) -> Solver {
    let f = &report.flags;
    let dec = report
        .decomposition
        .as_ref()
        .is_some_and(|d| d.n_size > 1 && d.d_size > 1);
    match problem {
        Problem::Csat | Problem::Mcsat if f.dl_like.is_yes() => Solver::Usp,
        Problem::Csat | Problem::Ceqv if f.supernilpotent.is_yes() => Solver::Supernilpotent,
        Problem::Scsat | Problem::Mcsat if f.affine.is_yes() => Solver::Affine,
        _ if dec => Solver::Product,
        _ => Solver::Brute,
    }
}

/// Classifies `alg` once and runs the solver its flags allow.
pub fn dispatch(alg: &FiniteAlgebra, inst: &Instance) -> Result<SolveResult> {
    dispatch_with(alg, inst, SolveOptions::default())
}

pub fn dispatch_with(alg: &FiniteAlgebra, inst: &Instance, opts: SolveOptions) -> Result<SolveResult> {
    let report = classify(alg)?;
    run_solver(alg, inst, route(&report, inst.problem()), opts)
}

/// Runs a specific solver. `Product` splits the algebra along its
/// nilpotent × lattice-like decomposition.
pub fn run_solver(alg: &FiniteAlgebra, inst: &Instance, solver: Solver, opts: SolveOptions) -> Result<SolveResult> {
    match solver {
        Solver::Brute => solve_bruteforce_with(alg, inst, opts),
        Solver::Usp => solve_usp(alg, inst),
        Solver::Supernilpotent => {
            let params = SupernilpotentSolverParams::for_algebra(alg, 0)?;
            if inst.problem() == Problem::Ceqv {
                ceqv_supernilpotent_experimental(alg, inst, &params, opts.budget)
            } else {
                solve_supernilpotent(alg, inst, &params, opts.budget)
            }
        }
        Solver::Affine => solve_affine(alg, inst, opts.budget),
        Solver::Product => solve_product(alg, inst, opts),
    }
}

/// Rewrites constants through `map` onto the quotient `q`.
fn project(q: &FiniteAlgebra, c: &Circuit, map: impl Fn(Elem) -> Elem) -> Result<Circuit> {
    let gates = c
        .gates()
        .iter()
        .map(|g| match g {
            Gate::Const(e) => Gate::Const(map(*e)),
            g => g.clone(),
        })
        .collect();
    Circuit::new(q, gates, c.outputs().to_vec())
}

fn solve_product(alg: &FiniteAlgebra, inst: &Instance, opts: SolveOptions) -> Result<SolveResult> {
    let tl = TypedLattice::compute(alg, crate::clone::DEFAULT_CAP)?;
    let dec = decompose_nd(alg, &tl)?
        .ok_or_else(|| Error::Precondition("algebra has no nilpotent × lattice-like decomposition".into()))?;
    let names = inst.circuit().input_names();
    let mut stats = Stats::default();
    let mut diagnostics = Vec::new();
    let mut experimental = false;
    let mut parts = Vec::new();
    for (q, theta) in [(&dec.n, &dec.rho4), (&dec.d, &dec.rho2)] {
        let c = project(q, inst.circuit(), |e| theta.class_of(e))?;
        let sub = Instance::new(inst.problem(), c)?;
        let r = dispatch_with(q, &sub, opts)?;
        stats.add(r.stats);
        experimental |= r.experimental;
        diagnostics.push(format!("factor {} (size {}): {}", q.name(), q.size(), r.solver_used));
        diagnostics.extend(r.diagnostics);
        parts.push(r.answer);
    }
    let value = |a: &Answer, i: usize| a.assignment().map_or(0, |a| a.values[i]);
    let combine = |an: &Answer, ad: &Answer| {
        let values = (0..names.len())
            .map(|i| {
                let code = value(an, i) * dec.d.size() + value(ad, i);
                dec.iso.iter().position(|&c| c == code).expect("iso is a bijection")
            })
            .collect();
        Assignment::new(names.clone(), values)
    };
    let answer = match (&parts[0], &parts[1]) {
        (Answer::Sat(_), Answer::Sat(_)) => Answer::Sat(combine(&parts[0], &parts[1])),
        (Answer::Equiv, Answer::Equiv) => Answer::Equiv,
        (a @ Answer::NotEquiv(_), b) | (b, a @ Answer::NotEquiv(_)) => {
            // the other factor contributes arbitrary values
            let (an, ad) = if matches!(parts[0], Answer::NotEquiv(_)) {
                (a, b)
            } else {
                (b, a)
            };
            Answer::NotEquiv(combine(an, ad))
        }
        _ => Answer::Unsat,
    };
    let r = SolveResult {
        answer,
        solver_used: Solver::Product,
        stats,
        experimental,
        diagnostics,
    };
    verified(alg, inst, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::zoo;

    pub(crate) fn inst(alg: &FiniteAlgebra, p: Problem, text: &str) -> Instance {
        Instance::new(p, parse_circuit(alg, text).unwrap()).unwrap()
    }

    #[test]
    fn dispatch_routes() {
        let z6 = zoo::cyclic(6);
        let i = inst(
            &z6,
            Problem::Csat,
            "g0 = input x\ng1 = add g0 g0\ng2 = const 4\noutputs: g1 g2",
        );
        let r = dispatch(&z6, &i).unwrap();
        assert_eq!(r.solver_used, Solver::Supernilpotent);
        assert!(matches!(r.answer, Answer::Sat(_)));

        let m = zoo::majority();
        let i = inst(
            &m,
            Problem::Csat,
            "g0 = input x\ng1 = input y\ng2 = m g0 g1 g1\ng3 = const 0\noutputs: g2 g3",
        );
        assert_eq!(dispatch(&m, &i).unwrap().solver_used, Solver::Usp);

        let s3 = zoo::s3();
        let i = inst(
            &s3,
            Problem::Csat,
            "g0 = input x\ng1 = mul g0 g0\ng2 = const 3\noutputs: g1 g2",
        );
        let r = dispatch(&s3, &i).unwrap();
        assert_eq!(r.solver_used, Solver::Brute);
        assert_eq!(r.answer.to_string(), "SAT x=4");
    }

    #[test]
    fn product_route_agrees_with_brute_force() {
        let a = zoo::z2_x_lattice();
        let text = "g0 = input x\ng1 = input y\ng2 = meet g0 g1\ng3 = join g2 g0\ng4 = const 3\noutputs: g3 g4";
        for p in [Problem::Csat, Problem::Ceqv] {
            let i = inst(&a, p, text);
            let r = dispatch(&a, &i).unwrap();
            assert_eq!(r.solver_used, Solver::Product);
            let b = solve_bruteforce(&a, &i).unwrap();
            assert_eq!(r.answer.is_positive(), b.answer.is_positive());
        }
    }

    #[test]
    fn answer_lines() {
        let a = Assignment::new(vec!["x".into()], vec![2]);
        assert_eq!(Answer::Sat(a.clone()).to_string(), "SAT x=2");
        assert_eq!(Answer::NotEquiv(a).to_string(), "NEQUIV x=2");
        assert_eq!(Answer::Unsat.to_string(), "UNSAT");
    }
}
