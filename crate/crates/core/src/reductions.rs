//! Reductions into circuit problems, with generators and verifiers.

use rand::Rng;

use crate::algebra::{increment, Elem, FiniteAlgebra, Operation};
use crate::circuit::{append_term, Circuit, Gate, Instance};
use crate::clone::{unary_poly_clone, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::lexer::{line_tokens, Tok};
use crate::malcev::{find_malcev_operation, induced_on_pair_set, non_permutation};
use crate::structure::Problem;
use crate::term::{term_table, Term};

/// A named relation of fixed arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: Vec<Vec<Elem>>,
}

/// A finite relational structure on `0..domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelStructure {
    pub domain: usize,
    pub relations: Vec<Relation>,
}

impl RelStructure {
    pub fn new(domain: usize, rels: Vec<(String, usize, Vec<Vec<Elem>>)>) -> Result<Self> {
        if domain == 0 {
            return Err(Error::InstanceShape("domain must be nonempty".into()));
        }
        let mut relations: Vec<Relation> = Vec::new();
        for (name, arity, mut tuples) in rels {
            if relations.iter().any(|r| r.name == name) || name == "and" {
                return Err(Error::InstanceShape(format!("duplicate relation `{name}`")));
            }
            for t in &tuples {
                if t.len() != arity {
                    return Err(Error::InstanceShape(format!("tuple of wrong arity in `{name}`")));
                }
                if let Some(&e) = t.iter().find(|&&e| e >= domain) {
                    return Err(Error::ElementOutOfRange { elem: e, size: domain });
                }
            }
            tuples.sort();
            tuples.dedup();
            relations.push(Relation { name, arity, tuples });
        }
        Ok(RelStructure { domain, relations })
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name == name)
    }
}

/// The algebra on `D ∪ {0, 1}` whose fresh elements are `|D|` (false) and
/// `|D|+1` (true), with `and` true only on (true, true) and one
/// characteristic function `f_R` per relation.
pub fn build_csp_algebra(d: &RelStructure) -> FiniteAlgebra {
    let n = d.domain + 2;
    let (f, t) = (d.domain, d.domain + 1);
    let mut ops = vec![Operation::from_fn("and", 2, n, |a| {
        if a[0] == t && a[1] == t {
            t
        } else {
            f
        }
    })];
    for r in &d.relations {
        ops.push(Operation::from_fn(format!("f_{}", r.name), r.arity, n, |a| {
            if r.tuples.iter().any(|tu| tu.as_slice() == a) {
                t
            } else {
                f
            }
        }));
    }
    FiniteAlgebra::new(format!("A[D{}]", d.domain), n, ops).expect("well-formed tables")
}

impl RelStructure {
    /// Reads `domain <n>`, then `rel <name> arity <k>` blocks, each followed
    /// by its tuples, one per line.
    pub fn parse(text: &str) -> Result<RelStructure> {
        let mut domain = None;
        let mut rels: Vec<(String, usize, Vec<Vec<Elem>>)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let toks = line_tokens(i + 1, line);
            let Some(head) = toks.first() else { continue };
            match head.text {
                "domain" if domain.is_none() && toks.len() == 2 => {
                    domain = Some(number(&toks[1])?);
                }
                "rel" => {
                    if toks.len() != 4 || toks[2].text != "arity" {
                        return Err(Error::parse(head.line, head.col, "expected `rel <name> arity <k>`"));
                    }
                    rels.push((toks[1].text.to_string(), number(&toks[3])?, Vec::new()));
                }
                _ => {
                    let Some(rel) = rels.last_mut() else {
                        return Err(Error::parse(head.line, head.col, "expected `domain <n>` or `rel`"));
                    };
                    if toks.len() != rel.1 {
                        return Err(Error::parse(
                            head.line,
                            head.col,
                            format!("tuple of `{}` needs {} entries", rel.0, rel.1),
                        ));
                    }
                    rel.2.push(toks.iter().map(number).collect::<Result<_>>()?);
                }
            }
        }
        let domain = domain.ok_or_else(|| Error::parse(1, 1, "missing `domain <n>`"))?;
        RelStructure::new(domain, rels)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("domain {}\n", self.domain);
        for r in &self.relations {
            s.push_str(&format!("rel {} arity {}\n", r.name, r.arity));
            for t in &r.tuples {
                let t: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                s.push_str(&t.join(" "));
                s.push('\n');
            }
        }
        s
    }
}

fn number(t: &Tok<'_>) -> Result<usize> {
    t.text
        .parse()
        .map_err(|_| Error::parse(t.line, t.col, format!("expected a number, found `{}`", t.text)))
}

/// A constraint `R(v_1, …, v_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub relation: String,
    pub vars: Vec<String>,
}

/// A CSP instance: a conjunction of atoms over named variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CspInstance {
    pub atoms: Vec<Atom>,
}

impl CspInstance {
    /// One atom per line: `<relation> <var> …`.
    pub fn parse(d: &RelStructure, text: &str) -> Result<CspInstance> {
        let mut atoms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let toks = line_tokens(i + 1, line);
            let Some(head) = toks.first() else { continue };
            let rel = d
                .relation(head.text)
                .ok_or_else(|| Error::parse(head.line, head.col, format!("unknown relation `{}`", head.text)))?;
            if toks.len() - 1 != rel.arity {
                return Err(Error::ArityMismatch {
                    op: rel.name.clone(),
                    expected: rel.arity,
                    found: toks.len() - 1,
                });
            }
            atoms.push(Atom {
                relation: rel.name.clone(),
                vars: toks[1..].iter().map(|t| t.text.to_string()).collect(),
            });
        }
        Ok(CspInstance { atoms })
    }

    pub fn to_text(&self) -> String {
        self.atoms
            .iter()
            .map(|a| format!("{} {}\n", a.relation, a.vars.join(" ")))
            .collect()
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for v in self.atoms.iter().flat_map(|a| &a.vars) {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    /// Renames variables to `v1, v2, …` by first appearance.
    pub fn canonical(&self) -> CspInstance {
        let vars = self.variables();
        let rename = |v: &String| format!("v{}", vars.iter().position(|w| w == v).expect("listed") + 1);
        CspInstance {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    relation: a.relation.clone(),
                    vars: a.vars.iter().map(rename).collect(),
                })
                .collect(),
        }
    }
}

/// Exhaustive CSP search; a satisfying map in variable order.
pub fn solve_csp(d: &RelStructure, inst: &CspInstance) -> Result<Option<Vec<Elem>>> {
    let vars = inst.variables();
    let mut rels = Vec::new();
    for a in &inst.atoms {
        let r = d
            .relation(&a.relation)
            .ok_or_else(|| Error::UnknownOp(a.relation.clone()))?;
        let idx: Vec<usize> = a
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("listed"))
            .collect();
        rels.push((r, idx));
    }
    let mut vals = vec![0; vars.len()];
    loop {
        if rels
            .iter()
            .all(|(r, idx)| r.tuples.iter().any(|t| t.iter().zip(idx).all(|(&e, &i)| vals[i] == e)))
        {
            return Ok(Some(vals));
        }
        if !increment(&mut vals, d.domain) {
            return Ok(None);
        }
    }
}

/// `⋀ f_R(x̄) = 1` over `A[D]`, the conjunction associated to the left.
pub fn csp_to_csat(d: &RelStructure, inst: &CspInstance) -> Result<(FiniteAlgebra, Instance)> {
    let alg = build_csp_algebra(d);
    let vars = inst.variables();
    let mut gates: Vec<Gate> = vars.iter().map(|v| Gate::Input(v.clone())).collect();
    gates.push(Gate::Const(d.domain + 1));
    let one = gates.len() - 1;
    let mut acc = None;
    for a in &inst.atoms {
        let r = d
            .relation(&a.relation)
            .ok_or_else(|| Error::UnknownOp(a.relation.clone()))?;
        if r.arity != a.vars.len() {
            return Err(Error::ArityMismatch {
                op: r.name.clone(),
                expected: r.arity,
                found: a.vars.len(),
            });
        }
        let args = a
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("listed"))
            .collect();
        gates.push(Gate::Op {
            op: format!("f_{}", r.name),
            args,
        });
        let f = gates.len() - 1;
        acc = Some(match acc {
            None => f,
            Some(prev) => {
                gates.push(Gate::Op {
                    op: "and".into(),
                    args: vec![prev, f],
                });
                gates.len() - 1
            }
        });
    }
    let root = acc.unwrap_or(one);
    let c = Circuit::new(&alg, gates, vec![root, one])?;
    Ok((alg, Instance::csat(c)?))
}

/// Reads a CSAT instance over `A[D]` back as a CSP instance when one output
/// is the constant true and the other an `and`-tree of `f_R` gates applied
/// to inputs.
pub fn csat_to_csp(d: &RelStructure, inst: &Instance) -> Result<CspInstance> {
    let c = inst.circuit();
    let gates = c.gates();
    if inst.problem() != Problem::Csat {
        return Err(Error::UnrecognizedShape("not a CSAT instance".into()));
    }
    let one = d.domain + 1;
    let (o0, o1) = (c.outputs()[0], c.outputs()[1]);
    let root = match (&gates[o0], &gates[o1]) {
        (_, Gate::Const(e)) if *e == one => o0,
        (Gate::Const(e), _) if *e == one => o1,
        _ => return Err(Error::UnrecognizedShape("neither output is the constant true".into())),
    };
    fn leaves(d: &RelStructure, gates: &[Gate], g: usize, out: &mut Vec<Atom>) -> Result<()> {
        match &gates[g] {
            Gate::Const(e) if *e == d.domain + 1 => Ok(()),
            Gate::Op { op, args } if op == "and" => {
                leaves(d, gates, args[0], out)?;
                leaves(d, gates, args[1], out)
            }
            Gate::Op { op, args } => {
                let name = op
                    .strip_prefix("f_")
                    .filter(|n| d.relation(n).is_some())
                    .ok_or_else(|| Error::UnrecognizedShape(format!("gate g{g} applies `{op}`")))?;
                let vars = args
                    .iter()
                    .map(|&a| match &gates[a] {
                        Gate::Input(v) => Ok(v.clone()),
                        _ => Err(Error::UnrecognizedShape(format!(
                            "`{op}` at g{g} has a non-input argument"
                        ))),
                    })
                    .collect::<Result<_>>()?;
                out.push(Atom {
                    relation: name.to_string(),
                    vars,
                });
                Ok(())
            }
            _ => Err(Error::UnrecognizedShape(format!("gate g{g} is not a constraint"))),
        }
    }
    let mut atoms = Vec::new();
    leaves(d, gates, root, &mut atoms)?;
    Ok(CspInstance { atoms })
}

/// A 3-CNF over variables `1..=num_vars`; literal `-v` is the negation of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf3 {
    pub num_vars: usize,
    pub clauses: Vec<[i64; 3]>,
}

impl Cnf3 {
    pub fn new(num_vars: usize, clauses: Vec<[i64; 3]>) -> Result<Cnf3> {
        for c in &clauses {
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > num_vars) {
                return Err(Error::InstanceShape(format!("literal {l} out of range")));
            }
        }
        Ok(Cnf3 { num_vars, clauses })
    }

    /// DIMACS CNF. Shorter clauses are padded by repeating their last
    /// literal; longer ones are rejected.
    pub fn parse_dimacs(text: &str) -> Result<Cnf3> {
        let mut num_vars = None;
        let mut clauses = Vec::new();
        let mut cur: Vec<i64> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim_start();
            if t.starts_with('c') || t.starts_with('%') || t.is_empty() {
                continue;
            }
            let toks: Vec<&str> = t.split_whitespace().collect();
            if toks[0] == "p" {
                if toks.len() != 4 || toks[1] != "cnf" {
                    return Err(Error::parse(i + 1, 1, "expected `p cnf <vars> <clauses>`"));
                }
                num_vars = Some(
                    toks[2]
                        .parse::<usize>()
                        .map_err(|_| Error::parse(i + 1, 1, "bad variable count"))?,
                );
                continue;
            }
            for tok in toks {
                let l: i64 = tok
                    .parse()
                    .map_err(|_| Error::parse(i + 1, 1, format!("bad literal `{tok}`")))?;
                if l != 0 {
                    cur.push(l);
                    continue;
                }
                match cur.len() {
                    1..=3 => {
                        let last = *cur.last().expect("nonempty");
                        cur.resize(3, last);
                        clauses.push([cur[0], cur[1], cur[2]]);
                    }
                    0 => return Err(Error::parse(i + 1, 1, "empty clause")),
                    k => return Err(Error::parse(i + 1, 1, format!("clause with {k} literals"))),
                }
                cur.clear();
            }
        }
        if !cur.is_empty() {
            return Err(Error::parse(text.lines().count(), 1, "clause not terminated by 0"));
        }
        let num_vars = num_vars.ok_or_else(|| Error::parse(1, 1, "missing `p cnf` header"))?;
        Cnf3::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        s
    }

    pub fn random(num_vars: usize, num_clauses: usize, rng: &mut impl Rng) -> Cnf3 {
        assert!(num_vars >= 1);
        let clauses = (0..num_clauses)
            .map(|_| {
                [(); 3].map(|_| {
                    let v = rng.gen_range(1..=num_vars as i64);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
            })
            .collect();
        Cnf3 { num_vars, clauses }
    }

    /// A satisfying assignment by enumeration (variable 1 first, `false < true`).
    pub fn solve(&self) -> Option<Vec<bool>> {
        let mut vals = vec![0; self.num_vars];
        loop {
            let v: Vec<bool> = vals.iter().map(|&x| x == 1).collect();
            let lit = |l: i64| v[l.unsigned_abs() as usize - 1] == (l > 0);
            if self.clauses.iter().all(|c| c.iter().any(|&l| lit(l))) {
                return Some(v);
            }
            if !increment(&mut vals, 2) {
                return None;
            }
        }
    }
}

/// Boolean structure on a 2-element set `{zero, one}` carried by
/// polynomials: binary `meet`, `join`, unary `neg`, and an idempotent unary
/// `e` with range `{zero, one}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type3Witness {
    pub zero: Elem,
    pub one: Elem,
    pub meet: Term,
    pub join: Term,
    pub neg: Term,
    pub e: Term,
}

impl Type3Witness {
    /// Checks every defining property pointwise.
    pub fn validate(&self, alg: &FiniteAlgebra) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidWitness(m.to_string()));
        let (z, o) = (self.zero, self.one);
        alg.check_elem(z)?;
        alg.check_elem(o)?;
        if z == o {
            return bad("the set must have two elements");
        }
        for (t, k) in [(&self.meet, 2), (&self.join, 2), (&self.neg, 1), (&self.e, 1)] {
            if t.num_vars() > k {
                return Err(Error::InvalidWitness(format!("{t} has more than {k} variables")));
            }
        }
        let u = [z, o];
        let e = term_table(alg, &self.e, 1)?;
        if e.iter().any(|x| !u.contains(x)) || e[z] != z || e[o] != o {
            return bad("e is not an idempotent onto the set");
        }
        let neg = term_table(alg, &self.neg, 1)?;
        if neg[z] != o || neg[o] != z {
            return bad("neg is not negation on the set");
        }
        let n = alg.size();
        let meet = term_table(alg, &self.meet, 2)?;
        let join = term_table(alg, &self.join, 2)?;
        for (i, &x) in u.iter().enumerate() {
            for (j, &y) in u.iter().enumerate() {
                if meet[x * n + y] != u[i & j] || join[x * n + y] != u[i | j] {
                    return bad("meet or join is wrong on the set");
                }
            }
        }
        Ok(())
    }

    /// Looks for a 2-element range of an idempotent unary polynomial on
    /// which polynomials induce meet, join and negation.
    pub fn derive(alg: &FiniteAlgebra, cap: usize) -> Result<Type3Witness> {
        let pol1 = unary_poly_clone(alg, cap)?;
        let n = alg.size();
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let Some(ei) = (0..pol1.len()).find(|&i| {
                    let m = pol1.table(i);
                    m[a] == a && m[b] == b && m.iter().all(|&x| x == a || x == b)
                }) else {
                    continue;
                };
                let s = induced_on_pair_set(alg, [a, b], cap)?;
                if let (Some(meet), Some(join), Some(neg)) = (s.meet, s.join, s.negation) {
                    let w = Type3Witness {
                        zero: a,
                        one: b,
                        meet,
                        join,
                        neg,
                        e: pol1.witness(ei),
                    };
                    w.validate(alg)?;
                    return Ok(w);
                }
            }
        }
        Err(Error::InvalidWitness(
            "no 2-element polynomial Boolean retract found".into(),
        ))
    }
}

/// `⋀_i (δ e(z¹) ∨ δ e(z²) ∨ δ e(z³)) = 1` with `δ = neg` on negative
/// literals; conjunctions and disjunctions associate to the left.
pub fn threesat_to_csat(alg: &FiniteAlgebra, w: &Type3Witness, phi: &Cnf3) -> Result<Instance> {
    w.validate(alg)?;
    let mut gates: Vec<Gate> = (1..=phi.num_vars).map(|v| Gate::Input(format!("x{v}"))).collect();
    gates.push(Gate::Const(w.one));
    let one = gates.len() - 1;
    let mut projected = vec![None; phi.num_vars];
    let mut negated = vec![None; phi.num_vars];
    let mut acc: Option<usize> = None;
    for clause in &phi.clauses {
        let mut disj: Option<usize> = None;
        for &l in clause {
            let v = l.unsigned_abs() as usize - 1;
            let ev = match projected[v] {
                Some(g) => g,
                None => {
                    let g = append_term(&mut gates, &w.e, &[v])?;
                    projected[v] = Some(g);
                    g
                }
            };
            let lit = if l > 0 {
                ev
            } else if let Some(g) = negated[v] {
                g
            } else {
                let g = append_term(&mut gates, &w.neg, &[ev])?;
                negated[v] = Some(g);
                g
            };
            disj = Some(match disj {
                None => lit,
                Some(p) => append_term(&mut gates, &w.join, &[p, lit])?,
            });
        }
        let d = disj.expect("three literals");
        acc = Some(match acc {
            None => d,
            Some(p) => append_term(&mut gates, &w.meet, &[p, d])?,
        });
    }
    let c = Circuit::new(alg, gates, vec![acc.unwrap_or(one), one])?;
    Instance::csat(c)
}

/// Positive clauses `⋀ (x∨x∨x) = 1` and negative clauses
/// `⋁ (y∧y∧y) = 0` over the 2-element lattice; together they state
/// monotone 3-SAT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dl01System {
    pub num_vars: usize,
    pub positive: Vec<[usize; 3]>,
    pub negative: Vec<[usize; 3]>,
}

/// `m` positive and `n` negative clauses over `num_vars` variables.
pub fn dl01_system(m: usize, n: usize, num_vars: usize, seed: u64) -> Dl01System {
    assert!(num_vars >= 1);
    let mut rng = crate::gen::rng(seed);
    let mut clause = |_| [(); 3].map(|_| rng.gen_range(0..num_vars));
    let positive = (0..m).map(&mut clause).collect();
    let negative = (0..n).map(&mut clause).collect();
    Dl01System {
        num_vars,
        positive,
        negative,
    }
}

impl Dl01System {
    /// Two equations over the 2-element lattice (`meet`, `join`).
    pub fn to_instance(&self, lattice: &FiniteAlgebra) -> Result<Instance> {
        let mut gates: Vec<Gate> = (1..=self.num_vars).map(|v| Gate::Input(format!("x{v}"))).collect();
        gates.push(Gate::Const(0));
        gates.push(Gate::Const(1));
        let (zero, one) = (gates.len() - 2, gates.len() - 1);
        let chain = |gates: &mut Vec<Gate>, clauses: &[[usize; 3]], inner: &str, outer: &str, empty: usize| {
            let mut acc: Option<usize> = None;
            for c in clauses {
                let mut g = c[0];
                for &v in &c[1..] {
                    gates.push(Gate::Op {
                        op: inner.into(),
                        args: vec![g, v],
                    });
                    g = gates.len() - 1;
                }
                acc = Some(match acc {
                    None => g,
                    Some(p) => {
                        gates.push(Gate::Op {
                            op: outer.into(),
                            args: vec![p, g],
                        });
                        gates.len() - 1
                    }
                });
            }
            acc.unwrap_or(empty)
        };
        let pos = chain(&mut gates, &self.positive, "join", "meet", one);
        let neg = chain(&mut gates, &self.negative, "meet", "join", zero);
        Instance::scsat(Circuit::new(lattice, gates, vec![pos, one, neg, zero])?)
    }

    /// Direct enumeration.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let mut vals = vec![0; self.num_vars];
        loop {
            let pos = self.positive.iter().all(|c| c.iter().any(|&v| vals[v] == 1));
            let neg = self.negative.iter().all(|c| c.iter().any(|&v| vals[v] == 0));
            if pos && neg {
                return Some(vals.iter().map(|&x| x == 1).collect());
            }
            if !increment(&mut vals, 2) {
                return None;
            }
        }
    }
}

/// Rewrites a system `g_i = h_i` as the MCSAT instance
/// `d(g_1,h_1,a) = … = d(g_m,h_m,a) = a`. Equivalent when every
/// `x ↦ d(x,b,c)` is a permutation; otherwise a warning is returned
/// alongside.
pub fn scsat_to_mcsat(alg: &FiniteAlgebra, system: &Instance, a: Elem) -> Result<(Instance, Vec<String>)> {
    if system.problem() != Problem::Scsat {
        return Err(Error::InstanceShape("expected an SCSAT system".into()));
    }
    alg.check_elem(a)?;
    let d = find_malcev_operation(alg, DEFAULT_CAP)?
        .ok_or_else(|| Error::NotMalcev("the algebra has no Malcev polynomial".into()))?;
    let mut warnings = Vec::new();
    if let Some((b, c)) = non_permutation(alg.size(), &term_table(alg, &d, 3)?) {
        warnings.push(format!(
            "x -> d(x,{b},{c}) is not a permutation; satisfiability may not be preserved"
        ));
    }
    let c = system.circuit();
    let mut gates = c.gates().to_vec();
    // an empty system is stored as one trivial equation on a shared gate
    let eqs: Vec<(usize, usize)> = system
        .equations()
        .into_iter()
        .map(|(i, j)| (c.outputs()[i], c.outputs()[j]))
        .collect();
    gates.push(Gate::Const(a));
    let ga = gates.len() - 1;
    let mut outs = Vec::new();
    for (g, h) in eqs {
        outs.push(append_term(&mut gates, &d, &[g, h, ga])?);
    }
    outs.push(ga);
    Ok((Instance::mcsat(Circuit::new(alg, gates, outs)?)?, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::solvers::solve_bruteforce;
    use crate::zoo;

    fn sat(alg: &FiniteAlgebra, i: &Instance) -> bool {
        solve_bruteforce(alg, i).unwrap().answer.is_positive()
    }

    #[test]
    fn csp_algebra_shape() {
        let eq = RelStructure::new(2, vec![("eq".into(), 2, vec![vec![0, 0], vec![1, 1]])]).unwrap();
        let a = build_csp_algebra(&eq);
        assert_eq!(a.size(), 4);
        let ones = a.op("f_eq").unwrap().table().iter().filter(|&&x| x == 3).count();
        assert_eq!(ones, 2);
        let empty = RelStructure::new(3, vec![("r".into(), 1, vec![])]).unwrap();
        let a = build_csp_algebra(&empty);
        assert_eq!(a.size(), 5);
        assert!(a.op("f_r").unwrap().table().iter().all(|&x| x == 3));
        // `and` is a semilattice on {false, true} and absorbing outside
        let and = a.op("and").unwrap().table();
        for x in 0..5 {
            for y in 0..5 {
                let v = and[x * 5 + y];
                assert_eq!(v, and[y * 5 + x]);
                assert_eq!(v == 4, x == 4 && y == 4);
                for z in 0..5 {
                    assert_eq!(and[v * 5 + z], and[x * 5 + and[y * 5 + z]]);
                }
            }
        }
    }

    #[test]
    fn structure_text() {
        let text = "domain 2\nrel lt arity 2\n0 1\nrel one arity 1\n1\n";
        let d = RelStructure::parse(text).unwrap();
        assert_eq!(d.to_text(), text);
        assert!(matches!(
            RelStructure::parse("domain 2\nrel r arity 2\n0\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        let i = CspInstance::parse(&d, "lt x y\none y\n").unwrap();
        assert_eq!(i.to_text(), "lt x y\none y\n");
        assert!(CspInstance::parse(&d, "gt x y\n").is_err());
    }

    #[test]
    fn csp_round_trips() {
        let d = RelStructure::new(
            2,
            vec![
                ("r".into(), 2, vec![vec![0, 1]]),
                ("z".into(), 1, vec![vec![0]]),
                ("o".into(), 1, vec![vec![1]]),
            ],
        )
        .unwrap();
        let i = CspInstance::parse(&d, "r x y").unwrap();
        let (alg, c) = csp_to_csat(&d, &i).unwrap();
        assert!(solve_csp(&d, &i).unwrap().is_some());
        assert!(sat(&alg, &c));
        assert_eq!(csat_to_csp(&d, &c).unwrap(), i);

        let i = CspInstance::parse(&d, "z x\no x").unwrap();
        let (alg, c) = csp_to_csat(&d, &i).unwrap();
        assert!(solve_csp(&d, &i).unwrap().is_none());
        assert!(!sat(&alg, &c));

        let other = parse_circuit(
            &alg,
            "g0 = input x\ng1 = f_z g0\ng2 = f_o g1\ng3 = const 3\noutputs: g2 g3",
        )
        .unwrap();
        assert!(matches!(
            csat_to_csp(&d, &Instance::csat(other).unwrap()),
            Err(Error::UnrecognizedShape(_))
        ));
    }

    #[test]
    fn dimacs() {
        let text = "c example\np cnf 3 2\n1 -2 3 0\n-1 0\n";
        let f = Cnf3::parse_dimacs(text).unwrap();
        assert_eq!(f.clauses, vec![[1, -2, 3], [-1, -1, -1]]);
        assert_eq!(Cnf3::parse_dimacs(&f.to_dimacs()).unwrap(), f);
        assert!(Cnf3::parse_dimacs("p cnf 2 1\n1 2 -1 2 0\n").is_err());
        assert!(Cnf3::parse_dimacs("p cnf 2 1\n1 3 0\n").is_err());
    }

    #[test]
    fn boolean_witness() {
        let b = zoo::two_boolean();
        let w = Type3Witness::derive(&b, DEFAULT_CAP).unwrap();
        assert_eq!((w.zero, w.one), (0, 1));
        assert!(Type3Witness::derive(&zoo::two_lattice(), DEFAULT_CAP).is_err());
        let mut broken = w.clone();
        broken.neg = Term::var(0);
        assert!(matches!(broken.validate(&b), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn threesat_gadget() {
        let b = zoo::two_boolean();
        let w = Type3Witness::derive(&b, DEFAULT_CAP).unwrap();
        let one = Cnf3::new(3, vec![[1, 2, 3]]).unwrap();
        assert!(sat(&b, &threesat_to_csat(&b, &w, &one).unwrap()));
        let contra = Cnf3::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap();
        assert!(!sat(&b, &threesat_to_csat(&b, &w, &contra).unwrap()));
        let mut rng = crate::gen::rng(7);
        for _ in 0..20 {
            let clauses = rng.gen_range(1..=8);
            let phi = Cnf3::random(4, clauses, &mut rng);
            let inst = threesat_to_csat(&b, &w, &phi).unwrap();
            assert!(inst.circuit().size() <= 5 + 4 * 2 + clauses * 6);
            assert_eq!(phi.solve().is_some(), sat(&b, &inst));
        }
    }

    #[test]
    fn dl01() {
        let l = zoo::two_lattice();
        let disjoint = Dl01System {
            num_vars: 2,
            positive: vec![[0, 0, 0]],
            negative: vec![[1, 1, 1]],
        };
        assert!(disjoint.solve().is_some());
        assert!(sat(&l, &disjoint.to_instance(&l).unwrap()));
        let forced = Dl01System {
            num_vars: 1,
            positive: vec![[0, 0, 0]],
            negative: vec![[0, 0, 0]],
        };
        assert!(forced.solve().is_none());
        assert!(!sat(&l, &forced.to_instance(&l).unwrap()));
        for seed in 0..100 {
            let s = dl01_system(3, 3, 4, seed);
            assert_eq!(s.solve().is_some(), sat(&l, &s.to_instance(&l).unwrap()));
        }
    }

    #[test]
    fn scsat_to_mcsat_examples() {
        let z4 = zoo::cyclic(4);
        let text = "g0 = input x\ng1 = input y\ng2 = add g0 g1\ng3 = const 1\noutputs: g2 g3 g0 g1";
        let sys = Instance::scsat(parse_circuit(&z4, text).unwrap()).unwrap();
        let (m, warnings) = scsat_to_mcsat(&z4, &sys, 0).unwrap();
        assert!(warnings.is_empty());
        assert_eq!(m.circuit().outputs().len(), 3);
        let (cs, cm) = (sys.circuit().compile(&z4).unwrap(), m.circuit().compile(&z4).unwrap());
        let mut buf = Vec::new();
        for x in 0..4 {
            for y in 0..4 {
                cs.eval_gates(&[x, y], &mut buf);
                let a = sys.holds(&cs, &buf);
                cm.eval_gates(&[x, y], &mut buf);
                assert_eq!(a, m.holds(&cm, &buf));
            }
        }

        // the empty system, stored as a trivial equation
        let empty = Instance::scsat(parse_circuit(&z4, "g0 = const 2\noutputs: g0 g0").unwrap()).unwrap();
        let (m, _) = scsat_to_mcsat(&z4, &empty, 3).unwrap();
        assert!(sat(&z4, &m));
        assert!(matches!(
            scsat_to_mcsat(&zoo::two_lattice(), &empty_for(&zoo::two_lattice()), 0),
            Err(Error::NotMalcev(_))
        ));
    }

    fn empty_for(alg: &FiniteAlgebra) -> Instance {
        Instance::scsat(parse_circuit(alg, "g0 = const 0\noutputs: g0 g0").unwrap()).unwrap()
    }
}
