//! Linear algebra over the abelian group `(A, +)`, `x + y = d(x, 0, y)`,
//! for affine algebras.

use super::intlin::solve_integer_system;
use super::{brute, verified, Answer, SolveOptions, SolveResult, Solver, Stats};
use crate::algebra::{increment, Elem, FiniteAlgebra};
use crate::circuit::{Assignment, CompiledCircuit, Instance};
use crate::clone::DEFAULT_CAP;
use crate::commutator::is_affine;
use crate::error::{Error, Result};
use crate::malcev::find_malcev_term;
use crate::structure::Problem;
use crate::term::term_table;

/// Exhaustive linearity checks stop at this many assignments; larger
/// instances are checked on supports of size at most 2.
const FULL_CHECK: u64 = 1 << 16;

/// `A` as `Z^r / L`: generators `g_j`, a coordinate vector for every
/// element, and generators of the relation lattice `L`.
struct Group {
    add: Vec<Elem>,
    n: usize,
    gens: Vec<Elem>,
    coord: Vec<Vec<i128>>,
    relations: Vec<Vec<i128>>,
    exponent: usize,
}

impl Group {
    fn from_malcev(alg: &FiniteAlgebra, d: &[Elem]) -> Result<Group> {
        let n = alg.size();
        let dd = |x: Elem, y: Elem, z: Elem| d[(x * n + y) * n + z];
        let add: Vec<Elem> = (0..n * n).map(|i| dd(i / n, 0, i % n)).collect();
        let sum = |x: Elem, y: Elem| add[x * n + y];
        let neg = |x: Elem| dd(0, x, 0);
        for x in 0..n {
            for y in 0..n {
                if sum(x, y) != sum(y, x) || sum(x, neg(x)) != 0 {
                    return Err(Error::LinearityCheckFailed("d(x,0,y) is not an abelian group".into()));
                }
                for z in 0..n {
                    if sum(sum(x, y), z) != sum(x, sum(y, z)) || dd(x, y, z) != sum(sum(x, neg(y)), z) {
                        return Err(Error::LinearityCheckFailed("d is not x - y + z".into()));
                    }
                }
            }
        }
        let mut gens = Vec::new();
        let mut coord: Vec<Option<Vec<i128>>> = vec![None; n];
        coord[0] = Some(Vec::new());
        let mut reached = vec![0];
        for e in 0..n {
            if coord[e].is_some() {
                continue;
            }
            gens.push(e);
            let r = gens.len();
            for c in coord.iter_mut().flatten() {
                c.push(0);
            }
            // breadth-first over the new generator
            let mut frontier = reached.clone();
            while let Some(a) = frontier.pop() {
                let b = sum(a, e);
                if coord[b].is_none() {
                    let mut c = coord[a].clone().expect("reached");
                    c[r - 1] += 1;
                    coord[b] = Some(c);
                    reached.push(b);
                    frontier.push(b);
                }
            }
        }
        let coord: Vec<Vec<i128>> = coord.into_iter().map(|c| c.expect("generated")).collect();
        let mut relations = Vec::new();
        for a in 0..n {
            for (j, &g) in gens.iter().enumerate() {
                let b = sum(a, g);
                let mut rel: Vec<i128> = coord[a].iter().zip(&coord[b]).map(|(x, y)| x - y).collect();
                rel[j] += 1;
                if rel.iter().any(|&x| x != 0) && !relations.contains(&rel) {
                    relations.push(rel);
                }
            }
        }
        let order = |g: Elem| {
            let (mut x, mut k) = (g, 1);
            while x != 0 {
                x = sum(x, g);
                k += 1;
            }
            k
        };
        let exponent = (0..n).map(order).fold(1, lcm);
        Ok(Group {
            add,
            n,
            gens,
            coord,
            relations,
            exponent,
        })
    }

    fn sum(&self, x: Elem, y: Elem) -> Elem {
        self.add[x * self.n + y]
    }

    fn neg(&self, x: Elem) -> Elem {
        (0..self.n).find(|&y| self.sum(x, y) == 0).expect("group")
    }

    fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.sum(x, self.neg(y))
    }

    fn times(&self, k: i128, x: Elem) -> Elem {
        let k = k.rem_euclid(self.exponent as i128) as usize;
        (0..k).fold(0, |acc, _| self.sum(acc, x))
    }

    fn elem_at(&self, y: &[i128]) -> Elem {
        y.iter()
            .zip(&self.gens)
            .fold(0, |acc, (&k, &g)| self.sum(acc, self.times(k, g)))
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Per output: value at the origin and the unary parts `ε_i(x)` for every
/// input and element.
struct LinearModel {
    base: Vec<Elem>,
    /// `eps[k][i][x]`.
    eps: Vec<Vec<Vec<Elem>>>,
}

fn linear_model(g: &Group, cc: &CompiledCircuit<'_>, stats: &mut Stats) -> LinearModel {
    let n = cc.input_names().len();
    let mut vals = vec![0; n];
    let base = cc.eval(&vals);
    stats.assignments += 1;
    let k = base.len();
    let mut eps = vec![vec![vec![0; g.n]; n]; k];
    for i in 0..n {
        for x in 1..g.n {
            vals[i] = x;
            let out = cc.eval(&vals);
            stats.assignments += 1;
            for o in 0..k {
                eps[o][i][x] = g.sub(out[o], base[o]);
            }
        }
        vals[i] = 0;
    }
    LinearModel { base, eps }
}

/// Checks that every `ε_i` is an endomorphism and that the outputs are the
/// sums the model predicts. Returns a description of the first mismatch.
fn check_model(g: &Group, m: &LinearModel, cc: &CompiledCircuit<'_>, stats: &mut Stats) -> Option<String> {
    for (o, per_out) in m.eps.iter().enumerate() {
        for (i, e) in per_out.iter().enumerate() {
            for x in 0..g.n {
                for y in 0..g.n {
                    if e[g.sum(x, y)] != g.sum(e[x], e[y]) {
                        return Some(format!("output {o} is not additive in input {i}"));
                    }
                }
            }
        }
    }
    let n = cc.input_names().len();
    let full = (g.n as u64).checked_pow(n as u32).is_some_and(|t| t <= FULL_CHECK);
    let mut vals = vec![0; n];
    loop {
        if full || vals.iter().filter(|&&v| v != 0).count() <= 2 {
            let out = cc.eval(&vals);
            stats.assignments += 1;
            for (o, &got) in out.iter().enumerate() {
                let want = vals
                    .iter()
                    .enumerate()
                    .fold(m.base[o], |acc, (i, &x)| g.sum(acc, m.eps[o][i][x]));
                if want != got {
                    return Some(format!("output {o} is not affine at {vals:?}"));
                }
            }
        }
        if !increment(&mut vals, g.n) {
            return None;
        }
    }
}

/// Solves the instance as a linear system over `(A, +)`: each output is
/// `Σ ε_i(x_i) + c`, which is verified before it is used. Falls back to
/// exhaustive search when the verification fails.
pub fn solve_affine(alg: &FiniteAlgebra, inst: &Instance, budget: u64) -> Result<SolveResult> {
    if inst.problem() == Problem::Ceqv {
        return Err(Error::InstanceShape(
            "the affine solver decides CSAT, MCSAT and SCSAT".into(),
        ));
    }
    if !is_affine(alg, DEFAULT_CAP)?.is_yes() {
        return Err(Error::NotAffine);
    }
    let d = find_malcev_term(alg, DEFAULT_CAP)?.ok_or(Error::NotAffine)?;
    let g = Group::from_malcev(alg, &term_table(alg, &d, 3)?)?;
    let cc = inst.circuit().compile(alg)?;
    let mut stats = Stats::default();
    let model = linear_model(&g, &cc, &mut stats);
    if let Some(why) = check_model(&g, &model, &cc, &mut stats) {
        let opts = SolveOptions { budget, threads: 1 };
        let mut r = brute::solve_bruteforce_with(alg, inst, opts)?;
        r.diagnostics
            .push(format!("linearity check failed ({why}); solved by exhaustive search"));
        return Ok(r);
    }
    stats.gate_evaluations = cc.gate_evaluations();

    let n = cc.input_names().len();
    let r = g.gens.len();
    let eqs = inst.equations();
    let nl = g.relations.len();
    let cols = n * r + eqs.len() * nl;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (e, &(p, q)) in eqs.iter().enumerate() {
        for row in 0..r {
            let mut line = vec![0i128; cols];
            for i in 0..n {
                for (j, &gen) in g.gens.iter().enumerate() {
                    line[i * r + j] = g.coord[model.eps[p][i][gen]][row] - g.coord[model.eps[q][i][gen]][row];
                }
            }
            for (l, rel) in g.relations.iter().enumerate() {
                line[n * r + e * nl + l] = -rel[row];
            }
            a.push(line);
            b.push(g.coord[model.base[q]][row] - g.coord[model.base[p]][row]);
        }
    }
    let answer = match solve_integer_system(&a, &b)? {
        None => Answer::Unsat,
        Some(y) => {
            let vals: Vec<Elem> = (0..n).map(|i| g.elem_at(&y[i * r..(i + 1) * r])).collect();
            Answer::Sat(Assignment::new(cc.input_names().to_vec(), vals))
        }
    };
    verified(alg, inst, SolveResult::new(answer, Solver::Affine, stats))
}

#[cfg(test)]
mod tests {
    use super::super::solve_bruteforce;
    use super::super::tests::inst;
    use super::*;
    use crate::zoo;

    fn group(alg: &FiniteAlgebra) -> Group {
        let d = find_malcev_term(alg, DEFAULT_CAP).unwrap().unwrap();
        Group::from_malcev(alg, &term_table(alg, &d, 3).unwrap()).unwrap()
    }

    #[test]
    fn presentations() {
        for alg in [zoo::cyclic(4), zoo::cyclic(6), zoo::z2_x_z2(), zoo::trivial()] {
            let g = group(&alg);
            for a in 0..alg.size() {
                assert_eq!(g.elem_at(&g.coord[a]), a);
            }
            for rel in &g.relations {
                assert_eq!(g.elem_at(rel), 0);
            }
        }
        assert_eq!(group(&zoo::z2_x_z2()).gens.len(), 2);
        assert_eq!(group(&zoo::cyclic(6)).exponent, 6);
    }

    #[test]
    fn z4_system() {
        let z4 = zoo::cyclic(4);
        // x + y = 1, x - y = 1
        let text = "g0 = input x\ng1 = input y\ng2 = add g0 g1\ng3 = const 1\ng4 = neg g1\ng5 = add g0 g4\n\
                    outputs: g2 g3 g5 g3";
        let i = inst(&z4, Problem::Scsat, text);
        let r = solve_affine(&z4, &i, u64::MAX).unwrap();
        assert_eq!(r.solver_used, Solver::Affine);
        let asg = r.answer.assignment().unwrap();
        assert_eq!((asg.values[0] + asg.values[1]) % 4, 1);
        assert_eq!(asg.values[1] % 2, 0);
    }

    #[test]
    fn doubling_and_tripling() {
        let v = zoo::z2_x_z2();
        let i = inst(
            &v,
            Problem::Scsat,
            "g0 = input x\ng1 = add g0 g0\ng2 = const 0\noutputs: g1 g2",
        );
        assert!(matches!(solve_affine(&v, &i, u64::MAX).unwrap().answer, Answer::Sat(_)));

        let z6 = zoo::cyclic(6);
        let text = "g0 = input x\ng1 = add g0 g0\ng2 = add g1 g0\ng3 = const 3\noutputs: g2 g3";
        let i = inst(&z6, Problem::Scsat, text);
        let r = solve_affine(&z6, &i, u64::MAX).unwrap();
        assert_eq!(r.answer.assignment().unwrap().values[0] % 2, 1);
        assert!(solve_bruteforce(&z6, &i).unwrap().answer.is_positive());

        let i = inst(
            &z6,
            Problem::Scsat,
            "g0 = input x\ng1 = add g0 g0\ng2 = const 3\noutputs: g1 g2",
        );
        assert_eq!(solve_affine(&z6, &i, u64::MAX).unwrap().answer, Answer::Unsat);
    }

    #[test]
    fn rejects_non_affine() {
        let l = zoo::two_lattice();
        let i = inst(&l, Problem::Scsat, "g0 = input x\ng1 = const 1\noutputs: g0 g1");
        assert_eq!(solve_affine(&l, &i, u64::MAX), Err(Error::NotAffine));
    }
}
