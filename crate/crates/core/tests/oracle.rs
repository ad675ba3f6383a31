//! Every solver that accepts an instance agrees with exhaustive search.

use proptest::prelude::*;

use mvcirc::gen::{random_instance, rng, Shape};
use mvcirc::solvers::{dispatch, equations_hold, run_solver, solve_bruteforce, Answer, SolveOptions, Solver};
use mvcirc::structure::Problem;
use mvcirc::zoo;

fn agree(name: &str, problem: Problem, seed: u64) {
    let alg = zoo::lookup(name).unwrap().algebra;
    let inst = random_instance(&alg, problem, &mut rng(seed), Shape::default());
    let brute = solve_bruteforce(&alg, &inst).unwrap();
    let auto = dispatch(&alg, &inst).unwrap();
    assert_eq!(
        auto.answer.is_positive(),
        brute.answer.is_positive(),
        "{name} {problem:?} via {}:\n{}",
        auto.solver_used,
        inst.circuit()
    );
    match &auto.answer {
        Answer::Sat(a) => assert!(equations_hold(&alg, &inst, a).unwrap()),
        Answer::NotEquiv(a) => assert!(!equations_hold(&alg, &inst, a).unwrap()),
        _ => {}
    }
}

const NAMES: [&str; 13] = [
    "trivial",
    "2lattice",
    "2semilattice",
    "2boolean",
    "Z2",
    "Z3",
    "Z4",
    "Z2xZ2",
    "Z6",
    "S3",
    "Z4ring",
    "majority",
    "Z2x2lattice",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dispatch_matches_brute_force(i in 0usize..NAMES.len(), p in 0usize..4, seed in any::<u64>()) {
        agree(NAMES[i], Problem::ALL[p], seed);
    }
}

#[test]
fn threaded_brute_force_is_deterministic() {
    let alg = zoo::s3();
    for seed in 0..30 {
        let inst = random_instance(&alg, Problem::Csat, &mut rng(seed), Shape::default());
        let one = solve_bruteforce(&alg, &inst).unwrap();
        let four = run_solver(
            &alg,
            &inst,
            Solver::Brute,
            SolveOptions {
                threads: 4,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(one.answer, four.answer);
    }
}

#[test]
fn product_route_on_the_mixed_algebra() {
    let alg = zoo::z2_x_lattice();
    let mut compared = 0;
    for seed in 0..100 {
        for p in Problem::ALL {
            let inst = random_instance(&alg, p, &mut rng(seed), Shape::default());
            let prod = run_solver(&alg, &inst, Solver::Product, SolveOptions::default());
            let brute = solve_bruteforce(&alg, &inst).unwrap();
            if let Ok(prod) = prod {
                assert_eq!(
                    prod.answer.is_positive(),
                    brute.answer.is_positive(),
                    "{p:?}\n{}",
                    inst.circuit()
                );
                compared += 1;
            }
        }
    }
    assert!(compared >= 200, "{compared}");
}
