//! Seeded random circuits and instances.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::FiniteAlgebra;
use crate::circuit::{Circuit, Gate, Instance};
use crate::structure::Problem;

/// The generator used everywhere a seed is accepted.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub max_inputs: usize,
    /// Total gate count including inputs and constants.
    pub max_gates: usize,
    /// Percent chance that a non-input gate is a constant.
    pub const_percent: u32,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_inputs: 4,
            max_gates: 12,
            const_percent: 15,
        }
    }
}

/// A random circuit with between 1 and `max_inputs` inputs named `x1, x2, …`
/// and `outputs` outputs, the last gate always among them.
pub fn random_circuit(alg: &FiniteAlgebra, rng: &mut impl Rng, shape: Shape, outputs: usize) -> Circuit {
    let k = rng.gen_range(1..=shape.max_inputs.max(1));
    let total = rng.gen_range(k.max(1)..=shape.max_gates.max(k + 1));
    let mut gates: Vec<Gate> = (1..=k).map(|i| Gate::Input(format!("x{i}"))).collect();
    while gates.len() < total {
        if alg.ops().is_empty() || rng.gen_range(0..100) < shape.const_percent {
            gates.push(Gate::Const(rng.gen_range(0..alg.size())));
            continue;
        }
        let op = &alg.ops()[rng.gen_range(0..alg.ops().len())];
        let args = (0..op.arity()).map(|_| rng.gen_range(0..gates.len())).collect();
        gates.push(Gate::Op {
            op: op.name().to_string(),
            args,
        });
    }
    let last = gates.len() - 1;
    let mut outs: Vec<usize> = (1..outputs).map(|_| rng.gen_range(0..gates.len())).collect();
    outs.insert(rng.gen_range(0..outputs.max(1)).min(outs.len()), last);
    outs.truncate(outputs.max(1));
    Circuit::new(alg, gates, outs).expect("generated circuits are well formed")
}

/// A random instance: 2 outputs for CSAT and CEQV, 2–4 for MCSAT, 1–3
/// equations for SCSAT.
pub fn random_instance(alg: &FiniteAlgebra, problem: Problem, rng: &mut impl Rng, shape: Shape) -> Instance {
    let outputs = match problem {
        Problem::Csat | Problem::Ceqv => 2,
        Problem::Mcsat => rng.gen_range(2..=4),
        Problem::Scsat => 2 * rng.gen_range(1..=3),
    };
    Instance::new(problem, random_circuit(alg, rng, shape, outputs)).expect("output count matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn deterministic_and_within_shape() {
        let m = zoo::majority();
        let shape = Shape::default();
        for seed in 0..200 {
            let a = random_instance(&m, Problem::Mcsat, &mut rng(seed), shape);
            let b = random_instance(&m, Problem::Mcsat, &mut rng(seed), shape);
            assert_eq!(a, b);
            let c = a.circuit();
            assert!(c.size() <= 12 && c.num_inputs() <= 4 && c.num_inputs() >= 1);
            assert!(c.outputs().contains(&(c.size() - 1)));
        }
    }
}
