//! Circuits over a finite algebra: gates in topological order, named inputs,
//! ordered outputs.
//!
//! Text format, one gate per line, operands referring to earlier labels:
//!
//! ```text
//! g0 = input x
//! g1 = const 1
//! g2 = meet g0 g1
//! outputs: g2 g1
//! ```

use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::lexer::line_tokens;
use crate::structure::Problem;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(String),
    Const(Elem),
    Op { op: String, args: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    algebra: String,
    gates: Vec<Gate>,
    outputs: Vec<usize>,
}

impl Circuit {
    /// Checks operands precede their gate, arities, constants and outputs.
    pub fn new(alg: &FiniteAlgebra, gates: Vec<Gate>, outputs: Vec<usize>) -> Result<Circuit> {
        for (i, g) in gates.iter().enumerate() {
            match g {
                Gate::Input(name) => {
                    if name.is_empty() || name.chars().any(char::is_whitespace) || name.contains('=') {
                        return Err(Error::InstanceShape(format!("bad input name `{name}`")));
                    }
                }
                Gate::Const(c) => alg.check_elem(*c)?,
                Gate::Op { op, args } => {
                    let o = alg.op(op)?;
                    if o.arity() != args.len() {
                        return Err(Error::ArityMismatch {
                            op: op.clone(),
                            expected: o.arity(),
                            found: args.len(),
                        });
                    }
                    if let Some(&a) = args.iter().find(|&&a| a >= i) {
                        return Err(Error::ForwardReference {
                            line: i + 1,
                            gate: format!("g{a}"),
                        });
                    }
                }
            }
        }
        if outputs.is_empty() {
            return Err(Error::InstanceShape("circuit has no outputs".into()));
        }
        if let Some(&o) = outputs.iter().find(|&&o| o >= gates.len()) {
            return Err(Error::InstanceShape(format!("output g{o} does not exist")));
        }
        Ok(Circuit {
            algebra: alg.name().to_string(),
            gates,
            outputs,
        })
    }

    pub fn algebra_name(&self) -> &str {
        &self.algebra
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Gate count.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    /// Distinct input names in order of first appearance. Several input
    /// gates may carry the same name; they read the same value.
    pub fn input_names(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for g in &self.gates {
            if let Gate::Input(n) = g {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
        }
        out
    }

    pub fn num_inputs(&self) -> usize {
        self.input_names().len()
    }

    /// Same gates, different outputs.
    pub fn with_outputs(&self, alg: &FiniteAlgebra, outputs: Vec<usize>) -> Result<Circuit> {
        Circuit::new(alg, self.gates.clone(), outputs)
    }

    pub fn compile<'a>(&self, alg: &'a FiniteAlgebra) -> Result<CompiledCircuit<'a>> {
        CompiledCircuit::new(alg, self)
    }

    /// Canonical text: gates renamed `g0, g1, …` in order.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        for (i, g) in self.gates.iter().enumerate() {
            match g {
                Gate::Input(n) => s.push_str(&format!("g{i} = input {n}\n")),
                Gate::Const(c) => s.push_str(&format!("g{i} = const {c}\n")),
                Gate::Op { op, args } => {
                    s.push_str(&format!("g{i} = {op}"));
                    for a in args {
                        s.push_str(&format!(" g{a}"));
                    }
                    s.push('\n');
                }
            }
        }
        s.push_str("outputs:");
        for o in &self.outputs {
            s.push_str(&format!(" g{o}"));
        }
        s.push('\n');
        s
    }

    /// The term computed at `output` (an index into the output list), with
    /// inputs numbered by [`Circuit::input_names`]. Shared gates are copied,
    /// so the term can be exponentially larger than the circuit.
    pub fn to_term(&self, output: usize) -> Result<Term> {
        let &root = self
            .outputs
            .get(output)
            .ok_or_else(|| Error::InstanceShape(format!("no output number {output}")))?;
        let names = self.input_names();
        let mut memo: Vec<Option<Term>> = vec![None; self.gates.len()];
        for i in 0..=root {
            let t = match &self.gates[i] {
                Gate::Input(n) => Term::Var(names.iter().position(|m| m == n).expect("listed")),
                Gate::Const(c) => Term::Const(*c),
                Gate::Op { op, args } => Term::Apply(
                    op.clone(),
                    args.iter().map(|&a| memo[a].clone().expect("topological")).collect(),
                ),
            };
            memo[i] = Some(t);
        }
        Ok(memo[root].take().expect("computed"))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Parses the gate-per-line format. Labels are arbitrary tokens defined once;
/// `#` starts a comment.
pub fn parse_circuit(alg: &FiniteAlgebra, text: &str) -> Result<Circuit> {
    let lines: Vec<_> = text
        .lines()
        .enumerate()
        .map(|(i, l)| line_tokens(i + 1, l))
        .filter(|t| !t.is_empty())
        .collect();
    let mut defined_at: HashMap<&str, usize> = HashMap::new();
    for toks in &lines {
        if toks[0].text != "outputs:" {
            defined_at.entry(toks[0].text).or_insert(toks[0].line);
        }
    }
    let mut labels: HashMap<&str, usize> = HashMap::new();
    let mut gates = Vec::new();
    let mut outputs = None;
    let resolve = |labels: &HashMap<&str, usize>, t: &crate::lexer::Tok<'_>| -> Result<usize> {
        if let Some(&g) = labels.get(t.text) {
            return Ok(g);
        }
        if defined_at.contains_key(t.text) {
            Err(Error::ForwardReference {
                line: t.line,
                gate: t.text.to_string(),
            })
        } else {
            Err(Error::parse(t.line, t.col, format!("undefined gate `{}`", t.text)))
        }
    };
    for toks in &lines {
        let head = toks[0];
        if outputs.is_some() {
            return Err(Error::parse(head.line, head.col, "nothing may follow the outputs line"));
        }
        if head.text == "outputs:" {
            let outs = toks[1..]
                .iter()
                .map(|t| resolve(&labels, t))
                .collect::<Result<Vec<_>>>()?;
            if outs.is_empty() {
                return Err(Error::parse(head.line, head.col, "outputs line lists no gates"));
            }
            outputs = Some(outs);
            continue;
        }
        if labels.contains_key(head.text) {
            return Err(Error::parse(
                head.line,
                head.col,
                format!("gate `{}` defined twice", head.text),
            ));
        }
        let eq = toks.get(1).filter(|t| t.text == "=").ok_or_else(|| {
            let (l, c) = toks
                .get(1)
                .map_or((head.line, head.col + head.text.len()), |t| (t.line, t.col));
            Error::parse(l, c, "expected `=`")
        })?;
        let kind = toks
            .get(2)
            .ok_or_else(|| Error::parse(eq.line, eq.col + 1, "expected a gate kind after `=`"))?;
        let gate = match kind.text {
            "input" | "const" => {
                if toks.len() != 4 {
                    let c = toks.get(4).map_or(kind.col + kind.text.len(), |t| t.col);
                    return Err(Error::parse(
                        kind.line,
                        c,
                        format!("`{}` takes exactly one argument", kind.text),
                    ));
                }
                let arg = toks[3];
                if kind.text == "input" {
                    Gate::Input(arg.text.to_string())
                } else {
                    // element names shadow numerals
                    let e = alg
                        .element_names()
                        .and_then(|n| n.iter().position(|m| m == arg.text))
                        .or_else(|| arg.text.parse::<usize>().ok())
                        .ok_or_else(|| Error::parse(arg.line, arg.col, format!("unknown element `{}`", arg.text)))?;
                    if e >= alg.size() {
                        return Err(Error::parse(
                            arg.line,
                            arg.col,
                            format!("element {e} out of range for universe of size {}", alg.size()),
                        ));
                    }
                    Gate::Const(e)
                }
            }
            op => {
                let o = alg
                    .op(op)
                    .map_err(|_| Error::parse(kind.line, kind.col, format!("unknown operation `{op}`")))?;
                let args = toks[3..]
                    .iter()
                    .map(|t| resolve(&labels, t))
                    .collect::<Result<Vec<_>>>()?;
                if args.len() != o.arity() {
                    return Err(Error::ArityMismatch {
                        op: op.to_string(),
                        expected: o.arity(),
                        found: args.len(),
                    });
                }
                Gate::Op {
                    op: op.to_string(),
                    args,
                }
            }
        };
        labels.insert(head.text, gates.len());
        gates.push(gate);
    }
    let outputs = outputs.ok_or_else(|| {
        let line = lines.last().map_or(1, |t| t[0].line + 1);
        Error::parse(line, 1, "missing `outputs:` line")
    })?;
    Circuit::new(alg, gates, outputs)
}

/// A tree-shaped circuit for `t`: one gate per term node, input `x<i>` for
/// `Var(i)`. Input gates come first, ordered by variable index.
pub fn from_term(alg: &FiniteAlgebra, t: &Term) -> Result<Circuit> {
    fn vars(t: &Term, out: &mut Vec<usize>) {
        match t {
            Term::Var(i) => out.push(*i),
            Term::Const(_) => {}
            Term::Apply(_, args) => args.iter().for_each(|a| vars(a, out)),
        }
    }
    fn emit(t: &Term, gates: &mut Vec<Gate>, next_var: &mut HashMap<usize, Vec<usize>>) -> usize {
        match t {
            Term::Var(i) => next_var.get_mut(i).and_then(Vec::pop).expect("one gate per occurrence"),
            Term::Const(c) => {
                gates.push(Gate::Const(*c));
                gates.len() - 1
            }
            Term::Apply(op, args) => {
                let args = args.iter().map(|a| emit(a, gates, next_var)).collect();
                gates.push(Gate::Op { op: op.clone(), args });
                gates.len() - 1
            }
        }
    }
    let mut occ = Vec::new();
    vars(t, &mut occ);
    let mut sorted = occ.clone();
    sorted.sort_unstable();
    let mut gates: Vec<Gate> = sorted.iter().map(|i| Gate::Input(format!("x{i}"))).collect();
    let mut next_var: HashMap<usize, Vec<usize>> = HashMap::new();
    for (g, &i) in sorted.iter().enumerate().rev() {
        next_var.entry(i).or_default().push(g);
    }
    let root = emit(t, &mut gates, &mut next_var);
    Circuit::new(alg, gates, vec![root])
}

/// Appends gates computing `t` with `Var(i)` read from gate `vars[i]`;
/// returns the root gate.
pub fn append_term(gates: &mut Vec<Gate>, t: &Term, vars: &[usize]) -> Result<usize> {
    match t {
        Term::Var(i) => vars.get(*i).copied().ok_or(Error::UnboundVariable(*i)),
        Term::Const(c) => {
            gates.push(Gate::Const(*c));
            Ok(gates.len() - 1)
        }
        Term::Apply(op, args) => {
            let args = args
                .iter()
                .map(|a| append_term(gates, a, vars))
                .collect::<Result<Vec<_>>>()?;
            gates.push(Gate::Op { op: op.clone(), args });
            Ok(gates.len() - 1)
        }
    }
}

/// `t_n = [...[[x1,x2],x3]...,xn]` with `[u,x] = u⁻¹x⁻¹ux` associated to the
/// left, every subterm built once. Needs `mul` and `inv`; has `6n−5` gates.
pub fn commutator_circuit(alg: &FiniteAlgebra, n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InstanceShape("commutator needs at least one variable".into()));
    }
    let mut gates = vec![Gate::Input("x1".into())];
    let mut t = 0;
    let op = |name: &str, args: Vec<usize>| Gate::Op { op: name.into(), args };
    for i in 2..=n {
        let base = gates.len();
        gates.push(Gate::Input(format!("x{i}")));
        gates.push(op("inv", vec![t]));
        gates.push(op("inv", vec![base]));
        gates.push(op("mul", vec![base + 1, base + 2]));
        gates.push(op("mul", vec![base + 3, t]));
        gates.push(op("mul", vec![base + 4, base]));
        t = base + 5;
    }
    Circuit::new(alg, gates, vec![t])
}

/// Values for a circuit's inputs, in [`Circuit::input_names`] order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Assignment {
    pub names: Vec<String>,
    pub values: Vec<Elem>,
}

impl Assignment {
    pub fn new(names: Vec<String>, values: Vec<Elem>) -> Assignment {
        assert_eq!(names.len(), values.len());
        Assignment { names, values }
    }

    pub fn get(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    /// Number of inputs not set to `zero`.
    pub fn support(&self, zero: Elem) -> usize {
        self.values.iter().filter(|&&v| v != zero).count()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, v)) in self.names.iter().zip(&self.values).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{n}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
enum Step {
    Input(usize),
    Const(Elem),
    Op { table: usize, args: Vec<usize> },
}

/// A circuit resolved against an algebra for repeated evaluation.
#[derive(Debug)]
pub struct CompiledCircuit<'a> {
    alg: &'a FiniteAlgebra,
    inputs: Vec<String>,
    steps: Vec<Step>,
    outputs: Vec<usize>,
    gate_evals: Cell<u64>,
}

impl<'a> CompiledCircuit<'a> {
    fn new(alg: &'a FiniteAlgebra, c: &Circuit) -> Result<Self> {
        let inputs = c.input_names();
        let mut steps = Vec::with_capacity(c.gates.len());
        for g in &c.gates {
            steps.push(match g {
                Gate::Input(n) => Step::Input(inputs.iter().position(|m| m == n).expect("listed")),
                Gate::Const(e) => {
                    alg.check_elem(*e)?;
                    Step::Const(*e)
                }
                Gate::Op { op, args } => {
                    let k = alg.op_index(op).ok_or_else(|| Error::UnknownOp(op.clone()))?;
                    let arity = alg.ops()[k].arity();
                    if arity != args.len() {
                        return Err(Error::ArityMismatch {
                            op: op.clone(),
                            expected: arity,
                            found: args.len(),
                        });
                    }
                    Step::Op {
                        table: k,
                        args: args.clone(),
                    }
                }
            });
        }
        Ok(CompiledCircuit {
            alg,
            inputs,
            steps,
            outputs: c.outputs.clone(),
            gate_evals: Cell::new(0),
        })
    }

    pub fn algebra(&self) -> &'a FiniteAlgebra {
        self.alg
    }

    pub fn input_names(&self) -> &[String] {
        &self.inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Gate evaluations performed so far.
    pub fn gate_evaluations(&self) -> u64 {
        self.gate_evals.get()
    }

    /// Evaluates every gate once into `buf`; `values` follows `input_names`.
    pub fn eval_gates(&self, values: &[Elem], buf: &mut Vec<Elem>) {
        let n = self.alg.size();
        buf.clear();
        for s in &self.steps {
            let v = match s {
                Step::Input(i) => values[*i],
                Step::Const(e) => *e,
                Step::Op { table, args } => {
                    let idx = args.iter().fold(0, |acc, &a| acc * n + buf[a]);
                    self.alg.ops()[*table].table()[idx]
                }
            };
            buf.push(v);
        }
        self.gate_evals.set(self.gate_evals.get() + self.steps.len() as u64);
    }

    pub fn output_of(&self, buf: &[Elem], k: usize) -> Elem {
        buf[self.outputs[k]]
    }

    pub fn eval(&self, values: &[Elem]) -> Vec<Elem> {
        let mut buf = Vec::with_capacity(self.steps.len());
        self.eval_gates(values, &mut buf);
        self.outputs.iter().map(|&o| buf[o]).collect()
    }

    /// Output values under a named assignment.
    pub fn eval_assignment(&self, asg: &Assignment) -> Result<Vec<Elem>> {
        let values = self
            .inputs
            .iter()
            .map(|n| {
                let v = asg.get(n).ok_or_else(|| Error::UnboundInput(n.clone()))?;
                self.alg.check_elem(v)?;
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.eval(&values))
    }

    pub fn assignment(&self, values: &[Elem]) -> Assignment {
        Assignment::new(self.inputs.clone(), values.to_vec())
    }
}

/// Output values of `c` under `asg`, in output order.
pub fn eval_circuit(alg: &FiniteAlgebra, c: &Circuit, asg: &Assignment) -> Result<Vec<Elem>> {
    c.compile(alg)?.eval_assignment(asg)
}

/// A circuit read as one of the four problems. SCSAT pairs consecutive
/// outputs: `(o0 = o1), (o2 = o3), …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    problem: Problem,
    circuit: Circuit,
}

impl Instance {
    /// CSAT and CEQV need exactly 2 outputs, MCSAT at least 1 and SCSAT an
    /// even number.
    pub fn new(problem: Problem, circuit: Circuit) -> Result<Instance> {
        let k = circuit.outputs.len();
        let ok = match problem {
            Problem::Csat | Problem::Ceqv => k == 2,
            Problem::Mcsat => k >= 1,
            Problem::Scsat => k % 2 == 0,
        };
        if !ok {
            return Err(Error::InstanceShape(format!(
                "{} instance cannot have {k} outputs",
                problem.name()
            )));
        }
        Ok(Instance { problem, circuit })
    }

    pub fn csat(c: Circuit) -> Result<Instance> {
        Instance::new(Problem::Csat, c)
    }

    pub fn mcsat(c: Circuit) -> Result<Instance> {
        Instance::new(Problem::Mcsat, c)
    }

    pub fn scsat(c: Circuit) -> Result<Instance> {
        Instance::new(Problem::Scsat, c)
    }

    pub fn ceqv(c: Circuit) -> Result<Instance> {
        Instance::new(Problem::Ceqv, c)
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Output index pairs that must agree (CEQV: the pair to compare).
    pub fn equations(&self) -> Vec<(usize, usize)> {
        let k = self.circuit.outputs.len();
        match self.problem {
            Problem::Scsat => (0..k / 2).map(|i| (2 * i, 2 * i + 1)).collect(),
            _ => (1..k).map(|i| (0, i)).collect(),
        }
    }

    /// Whether the outputs in `buf` satisfy every equation.
    pub fn holds(&self, cc: &CompiledCircuit<'_>, buf: &[Elem]) -> bool {
        self.equations()
            .iter()
            .all(|&(i, j)| cc.output_of(buf, i) == cc.output_of(buf, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::eval_term;
    use crate::zoo;

    const MEET: &str = "g0 = input x\ng1 = input y\ng2 = meet g0 g1\noutputs: g2\n";

    #[test]
    fn lattice_pair() {
        let l = zoo::two_lattice();
        let text = "g0 = input x\ng1 = input y\ng2 = meet g0 g1\ng3 = join g0 g1\noutputs: g2 g3\n";
        let c = parse_circuit(&l, text).unwrap();
        let asg = Assignment::new(vec!["x".into(), "y".into()], vec![0, 1]);
        assert_eq!(eval_circuit(&l, &c, &asg).unwrap(), vec![0, 1]);
        let partial = Assignment::new(vec!["x".into()], vec![0]);
        assert_eq!(eval_circuit(&l, &c, &partial), Err(Error::UnboundInput("y".into())));
    }

    #[test]
    fn s3_commutator_of_commuting_elements() {
        let s3 = zoo::s3();
        let c = commutator_circuit(&s3, 2).unwrap();
        let mul = s3.op_index("mul").unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let v = c.compile(&s3).unwrap().eval(&[a, b])[0];
                if s3.apply(mul, &[a, b]) == s3.apply(mul, &[b, a]) {
                    assert_eq!(v, zoo::S3_IDENTITY);
                } else {
                    assert_ne!(v, zoo::S3_IDENTITY);
                }
            }
        }
    }

    #[test]
    fn shared_gate_evaluates_once() {
        let l = zoo::two_lattice();
        let text = "g0 = input x\ng1 = input y\ng2 = meet g0 g1\ng3 = join g2 g0\ng4 = join g2 g1\noutputs: g3 g4\n";
        let cc = parse_circuit(&l, text).unwrap().compile(&l).unwrap();
        cc.eval(&[1, 0]);
        assert_eq!(cc.gate_evaluations(), 5);
    }

    #[test]
    fn commutator_circuit_sizes() {
        let s3 = zoo::s3();
        for n in 1..=6 {
            assert_eq!(commutator_circuit(&s3, n).unwrap().size(), 6 * n - 5);
        }
        let c3 = commutator_circuit(&s3, 3).unwrap();
        let t = c3.to_term(0).unwrap();
        assert!(t.node_count() > c3.size());
        // the unshared tree evaluates identically
        let tree = from_term(&s3, &t).unwrap();
        assert_eq!(tree.size(), t.node_count());
        let (a, b) = (c3.compile(&s3).unwrap(), tree.compile(&s3).unwrap());
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..6 {
                    assert_eq!(a.eval(&[x, y, z]), b.eval(&[x, y, z]));
                }
            }
        }
    }

    #[test]
    fn term_round_trip() {
        let z4 = zoo::cyclic(4);
        let t = Term::app(
            "add",
            vec![
                Term::app("neg", vec![Term::var(0)]),
                Term::app(
                    "add",
                    vec![Term::var(1), Term::app("add", vec![Term::var(0), Term::constant(3)])],
                ),
            ],
        );
        let c = from_term(&z4, &t).unwrap();
        assert_eq!(c.size(), t.node_count());
        assert_eq!(c.to_term(0).unwrap(), t);
    }

    #[test]
    fn text_round_trip_and_errors() {
        let l = zoo::two_lattice();
        let c = parse_circuit(&l, MEET).unwrap();
        assert_eq!(c.serialize(), MEET);

        let fwd = "g0 = input x\ng1 = meet g0 g2\ng2 = input y\noutputs: g1\n";
        assert_eq!(
            parse_circuit(&l, fwd),
            Err(Error::ForwardReference {
                line: 2,
                gate: "g2".into()
            })
        );
        match parse_circuit(&l, "g0 = input x\ng1 = frob g0 g0\noutputs: g1\n") {
            Err(Error::Parse { line: 2, col: 6, msg }) => assert!(msg.contains("frob")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_circuit(&l, "g0 = input x\ng1 = meet g0\noutputs: g1\n"),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(parse_circuit(&l, "g0 = input x\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_circuit(&l, "g0 = const 2\noutputs: g0\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn named_constants_and_custom_labels() {
        let m = zoo::majority();
        let text = "a = input x\nb = const 011\nc = const 2\nd = m a b c\noutputs: d";
        let c = parse_circuit(&m, text).unwrap();
        assert_eq!(c.gates()[1], Gate::Const(1));
        assert!(c.serialize().starts_with("g0 = input x\ng1 = const 1\n"));
    }

    #[test]
    fn instance_shapes() {
        let l = zoo::two_lattice();
        let one = parse_circuit(&l, MEET).unwrap();
        assert!(Instance::csat(one.clone()).is_err());
        assert!(Instance::mcsat(one.clone()).is_ok());
        assert!(Instance::scsat(one.clone()).is_err());
        let four = one.with_outputs(&l, vec![0, 1, 2, 2]).unwrap();
        let s = Instance::scsat(four.clone()).unwrap();
        assert_eq!(s.equations(), vec![(0, 1), (2, 3)]);
        assert_eq!(Instance::mcsat(four).unwrap().equations(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn assignment_display() {
        let a = Assignment::new(vec!["x".into(), "y".into()], vec![1, 0]);
        assert_eq!(a.to_string(), "x=1 y=0");
        assert_eq!(a.support(0), 1);
    }

    fn terms_to_depth(alg: &FiniteAlgebra, vars: usize, depth: usize) -> Vec<Term> {
        let mut level: Vec<Term> = (0..vars).map(Term::var).collect();
        let mut all = level.clone();
        for _ in 0..depth {
            let mut next = Vec::new();
            for op in alg.ops() {
                let mut idx = vec![0; op.arity()];
                loop {
                    let args: Vec<Term> = idx.iter().map(|&i| all[i].clone()).collect();
                    next.push(Term::app(op.name(), args));
                    if !crate::algebra::increment(&mut idx, all.len()) || next.len() > 400 {
                        break;
                    }
                }
            }
            level = next;
            all.extend(level.iter().cloned());
        }
        all
    }

    #[test]
    fn circuit_agrees_with_term_evaluation() {
        for alg in [zoo::two_lattice(), zoo::cyclic(3), zoo::majority(), zoo::cyclic(4)] {
            for t in terms_to_depth(&alg, 3, 3) {
                let c = from_term(&alg, &t).unwrap();
                assert_eq!(c.size(), t.node_count());
                let cc = c.compile(&alg).unwrap();
                let names = c.input_names();
                let mut vals = vec![0; 3];
                loop {
                    let asg = Assignment::new(
                        names.clone(),
                        names.iter().map(|n| vals[n[1..].parse::<usize>().unwrap()]).collect(),
                    );
                    let got = cc.eval_assignment(&asg).unwrap()[0];
                    assert_eq!(got, eval_term(&alg, &t, &vals).unwrap());
                    if !crate::algebra::increment(&mut vals, alg.size()) {
                        break;
                    }
                }
            }
        }
    }
}
