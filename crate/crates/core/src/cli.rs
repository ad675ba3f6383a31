//! The `mvcirc` command line.
//!
//! Algebra arguments accept a file path, `-` for standard input, or
//! `zoo:<name>` for a built-in fixture.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::circuit::{parse_circuit, Instance};
use crate::clone::DEFAULT_CAP;
use crate::commutator::commutator;
use crate::congruence::congruence_lattice;
use crate::reductions::{csp_to_csat, scsat_to_mcsat, threesat_to_csat, Cnf3, CspInstance, RelStructure, Type3Witness};
use crate::solvers::{dispatch_with, run_solver, SolveOptions, Solver, DEFAULT_BUDGET};
use crate::structure::{classify, Problem};
use crate::tct::TypedLattice;
use crate::{zoo, Elem, Error, FiniteAlgebra, Partition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NOINPUT: i32 = 66;
pub const EXIT_CANTCREAT: i32 = 73;

#[derive(Parser, Debug)]
#[command(name = "mvcirc", version, about = "Circuit problems over finite algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Structural flags, typeset and complexity verdicts.
    Classify {
        algebra: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide an instance read from a circuit file.
    Solve {
        problem: ProblemArg,
        algebra: String,
        circuit: String,
        #[arg(long, value_enum, default_value = "auto")]
        solver: SolverArg,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// The congruence lattice.
    Conlat {
        algebra: String,
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// `[alpha, beta]`; partitions are written `{0 1|2 3}`, or `0` / `1`.
    Commutator {
        algebra: String,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long)]
        json: bool,
    },
    /// Type labels of all covers.
    Typeset {
        algebra: String,
        /// Print every labeled cover too.
        #[arg(long)]
        lattice: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build reduction instances.
    Reduce {
        #[command(subcommand)]
        cmd: ReduceCmd,
    },
    /// Built-in fixture algebras.
    Zoo {
        #[command(subcommand)]
        cmd: ZooCmd,
    },
}

#[derive(Subcommand, Debug)]
enum ReduceCmd {
    /// DIMACS 3-CNF to a CSAT circuit over an algebra with a Boolean retract.
    #[command(name = "3sat")]
    ThreeSat {
        algebra: String,
        dimacs: String,
        #[arg(long)]
        json: bool,
    },
    /// CSP instance to CSAT over the algebra built from the structure.
    Csp {
        structure: String,
        instance: String,
        /// Write the algebra here instead of before the circuit.
        #[arg(long)]
        algebra_out: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Equation system to a single MCSAT circuit.
    #[command(name = "scsat-mcsat")]
    ScsatMcsat {
        algebra: String,
        circuit: String,
        /// Target element, by index or name.
        #[arg(long, default_value = "0")]
        target: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ZooCmd {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ProblemArg {
    Csat,
    Mcsat,
    Scsat,
    Ceqv,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Problem {
        match p {
            ProblemArg::Csat => Problem::Csat,
            ProblemArg::Mcsat => Problem::Mcsat,
            ProblemArg::Scsat => Problem::Scsat,
            ProblemArg::Ceqv => Problem::Ceqv,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SolverArg {
    Auto,
    Brute,
    Usp,
    Supernil,
    Affine,
    Product,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() {
            EXIT_BUDGET
        } else {
            match e {
                Error::Parse { .. }
                | Error::ForwardReference { .. }
                | Error::ArityMismatch { .. }
                | Error::UnknownOp(_)
                | Error::InvalidAlgebra(_)
                | Error::ElementOutOfRange { .. }
                | Error::UnboundInput(_)
                | Error::UnboundVariable(_)
                | Error::InstanceShape(_) => EXIT_DATA,
                _ => EXIT_PRECONDITION,
            }
        };
        CliError::new(code, e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the command line and returns the exit code. Errors go to `err`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx { stdin, err };
    match execute(cli.cmd, &mut ctx) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_CANTCREAT;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(ctx.err, "mvcirc: {}", e.message);
            e.code
        }
    }
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn read(&mut self, source: &str) -> CliResult<String> {
        if source == "-" {
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::new(EXIT_NOINPUT, format!("stdin: {e}")))?;
            return Ok(s);
        }
        std::fs::read_to_string(source).map_err(|e| CliError::new(EXIT_NOINPUT, format!("{source}: {e}")))
    }

    fn algebra(&mut self, source: &str) -> CliResult<FiniteAlgebra> {
        if let Some(name) = source.strip_prefix("zoo:") {
            return zoo::lookup(name)
                .map(|e| e.algebra)
                .ok_or_else(|| CliError::new(EXIT_USAGE, format!("no zoo entry `{name}` (see `mvcirc zoo list`)")));
        }
        let text = self.read(source)?;
        Ok(FiniteAlgebra::parse(&text)?)
    }

    fn warn(&mut self, msg: &str) {
        let _ = writeln!(self.err, "mvcirc: note: {msg}");
    }
}

fn json_text(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn partition_arg(alg: &FiniteAlgebra, flag: &str, text: &str) -> CliResult<Partition> {
    let p = Partition::parse(alg.size(), text).map_err(|e| CliError::new(EXIT_USAGE, format!("--{flag}: {e}")))?;
    if !alg.is_compatible(&p) {
        return Err(CliError::new(
            EXIT_PRECONDITION,
            format!("--{flag} {p} is not a congruence"),
        ));
    }
    Ok(p)
}

fn element_arg(alg: &FiniteAlgebra, text: &str) -> CliResult<Elem> {
    if let Some(i) = alg.element_names().and_then(|n| n.iter().position(|x| x == text)) {
        return Ok(i);
    }
    match text.parse::<Elem>() {
        Ok(e) if e < alg.size() => Ok(e),
        _ => Err(CliError::new(
            EXIT_USAGE,
            format!("`{text}` is not an element of {}", alg.name()),
        )),
    }
}

fn execute(cmd: Cmd, ctx: &mut Ctx<'_>) -> CliResult<String> {
    match cmd {
        Cmd::Classify { algebra, json } => {
            let alg = ctx.algebra(&algebra)?;
            let r = classify(&alg)?;
            Ok(if json { r.to_json() + "\n" } else { r.to_text() })
        }
        Cmd::Solve {
            problem,
            algebra,
            circuit,
            solver,
            threads,
            budget,
            json,
        } => {
            let alg = ctx.algebra(&algebra)?;
            let text = ctx.read(&circuit)?;
            let inst = Instance::new(problem.into(), parse_circuit(&alg, &text)?)?;
            let opts = SolveOptions {
                budget,
                threads: threads.max(1),
            };
            let res = match solver {
                SolverArg::Auto => dispatch_with(&alg, &inst, opts)?,
                SolverArg::Brute => run_solver(&alg, &inst, Solver::Brute, opts)?,
                SolverArg::Usp => run_solver(&alg, &inst, Solver::Usp, opts)?,
                SolverArg::Supernil => run_solver(&alg, &inst, Solver::Supernilpotent, opts)?,
                SolverArg::Affine => run_solver(&alg, &inst, Solver::Affine, opts)?,
                SolverArg::Product => run_solver(&alg, &inst, Solver::Product, opts)?,
            };
            if json {
                return Ok(json_text(res.to_json()));
            }
            if res.experimental {
                ctx.warn(&format!("{} path is experimental for CEQV", res.solver_used.name()));
            }
            for d in &res.diagnostics {
                ctx.warn(d);
            }
            Ok(format!("{}\n", res.answer))
        }
        Cmd::Conlat { algebra, dot, json } => {
            let alg = ctx.algebra(&algebra)?;
            let lat = congruence_lattice(&alg, DEFAULT_CAP)?;
            let mut covers = lat.covers();
            covers.sort();
            if dot {
                return Ok(lat.to_dot(None));
            }
            if json {
                return Ok(json_text(json!({
                    "schema": 1,
                    "algebra": alg.name(),
                    "size": lat.len(),
                    "elements": lat.elements().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "covers": covers,
                })));
            }
            let mut s = format!("Con {} has {} elements\n", alg.name(), lat.len());
            for (i, p) in lat.elements().iter().enumerate() {
                let _ = writeln!(s, "c{i} {p}");
            }
            for (i, j) in covers {
                let _ = writeln!(s, "c{i} -< c{j}");
            }
            Ok(s)
        }
        Cmd::Commutator {
            algebra,
            alpha,
            beta,
            json,
        } => {
            let alg = ctx.algebra(&algebra)?;
            let a = partition_arg(&alg, "alpha", &alpha)?;
            let b = partition_arg(&alg, "beta", &beta)?;
            let c = commutator(&alg, &a, &b)?;
            if json {
                return Ok(json_text(json!({
                    "schema": 1,
                    "alpha": a.to_string(),
                    "beta": b.to_string(),
                    "commutator": c.to_string(),
                })));
            }
            Ok(format!("[{a}, {b}] = {c}\n"))
        }
        Cmd::Typeset { algebra, lattice, json } => {
            let alg = ctx.algebra(&algebra)?;
            let tl = TypedLattice::compute(&alg, DEFAULT_CAP)?;
            let types: Vec<String> = tl.typeset().iter().map(|t| t.to_string()).collect();
            if json {
                let mut covers = tl.lattice.covers();
                covers.sort();
                let covers: Vec<_> = covers
                    .into_iter()
                    .map(|(i, j)| {
                        json!({
                            "lower": tl.lattice.get(i).to_string(),
                            "upper": tl.lattice.get(j).to_string(),
                            "type": tl.labels[&(i, j)].to_string(),
                        })
                    })
                    .collect();
                return Ok(json_text(json!({"schema": 1, "typeset": types, "covers": covers})));
            }
            let mut s = format!("typeset {{{}}}\n", types.join(","));
            if lattice {
                s.push_str(&tl.render());
            }
            Ok(s)
        }
        Cmd::Reduce { cmd } => reduce(cmd, ctx),
        Cmd::Zoo { cmd } => Ok(zoo_cmd(cmd)?),
    }
}

fn reduce(cmd: ReduceCmd, ctx: &mut Ctx<'_>) -> CliResult<String> {
    match cmd {
        ReduceCmd::ThreeSat { algebra, dimacs, json } => {
            let alg = ctx.algebra(&algebra)?;
            let phi = Cnf3::parse_dimacs(&ctx.read(&dimacs)?)?;
            let w = Type3Witness::derive(&alg, DEFAULT_CAP)?;
            let inst = threesat_to_csat(&alg, &w, &phi)?;
            let circuit = inst.circuit().serialize();
            if json {
                return Ok(json_text(json!({
                    "schema": 1,
                    "problem": "csat",
                    "circuit": circuit,
                    "witness": {
                        "zero": w.zero,
                        "one": w.one,
                        "meet": w.meet.to_string(),
                        "join": w.join.to_string(),
                        "neg": w.neg.to_string(),
                        "e": w.e.to_string(),
                    },
                })));
            }
            Ok(circuit)
        }
        ReduceCmd::Csp {
            structure,
            instance,
            algebra_out,
            json,
        } => {
            let d = RelStructure::parse(&ctx.read(&structure)?)?;
            let inst = CspInstance::parse(&d, &ctx.read(&instance)?)?;
            let (alg, csat) = csp_to_csat(&d, &inst)?;
            let (alg_text, circuit) = (alg.to_text(), csat.circuit().serialize());
            if json {
                return Ok(json_text(json!({
                    "schema": 1,
                    "problem": "csat",
                    "algebra": alg_text,
                    "circuit": circuit,
                })));
            }
            match algebra_out {
                Some(path) => {
                    std::fs::write(&path, alg_text)
                        .map_err(|e| CliError::new(EXIT_CANTCREAT, format!("{path}: {e}")))?;
                    Ok(circuit)
                }
                None => Ok(format!("{alg_text}---\n{circuit}")),
            }
        }
        ReduceCmd::ScsatMcsat {
            algebra,
            circuit,
            target,
            json,
        } => {
            let alg = ctx.algebra(&algebra)?;
            let a = element_arg(&alg, &target)?;
            let sys = Instance::scsat(parse_circuit(&alg, &ctx.read(&circuit)?)?)?;
            let (m, warnings) = scsat_to_mcsat(&alg, &sys, a)?;
            let circuit = m.circuit().serialize();
            if json {
                return Ok(json_text(json!({
                    "schema": 1,
                    "problem": "mcsat",
                    "circuit": circuit,
                    "warnings": warnings,
                })));
            }
            for w in &warnings {
                ctx.warn(w);
            }
            Ok(circuit)
        }
    }
}

fn zoo_cmd(cmd: ZooCmd) -> CliResult<String> {
    match cmd {
        ZooCmd::List { json } => {
            let entries = zoo::zoo();
            if json {
                let list: Vec<_> = entries
                    .iter()
                    .map(|e| {
                        json!({
                            "name": e.name,
                            "size": e.algebra.size(),
                            "ops": e.algebra.ops().iter().map(|o| o.name()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                return Ok(json_text(json!({"schema": 1, "entries": list})));
            }
            let mut s = format!("{:<14}{:>5}  ops\n", "name", "size");
            for e in entries {
                let ops: Vec<String> = e
                    .algebra
                    .ops()
                    .iter()
                    .map(|o| format!("{}/{}", o.name(), o.arity()))
                    .collect();
                let _ = writeln!(s, "{:<14}{:>5}  {}", e.name, e.algebra.size(), ops.join(" "));
            }
            Ok(s)
        }
        ZooCmd::Show { name, json } => {
            let e = zoo::lookup(&name)
                .ok_or_else(|| CliError::new(EXIT_USAGE, format!("no zoo entry `{name}` (see `mvcirc zoo list`)")))?;
            if json {
                let golden: serde_json::Map<String, serde_json::Value> =
                    e.golden.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
                return Ok(json_text(json!({
                    "schema": 1,
                    "name": e.name,
                    "algebra": e.algebra.to_text(),
                    "golden": golden,
                })));
            }
            let mut s = e.algebra.to_text();
            for (k, v) in e.golden {
                let _ = writeln!(s, "# expect {k} {v}");
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> (i32, String, String) {
        let mut input = stdin.as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("mvcirc").chain(args.iter().copied());
        let code = run(argv, &mut input, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_and_missing_files() {
        assert_eq!(call(&[], "").0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"], "").0, EXIT_USAGE);
        assert_eq!(call(&["--help"], "").0, EXIT_OK);
        assert_eq!(call(&["classify", "zoo:nope"], "").0, EXIT_USAGE);
        let (code, _, err) = call(&["classify", "/nonexistent/alg.txt"], "");
        assert_eq!(code, EXIT_NOINPUT);
        assert!(err.contains("/nonexistent/alg.txt"));
    }

    #[test]
    fn solve_from_stdin() {
        let c = "g0 = input x\ng1 = input y\ng2 = join g0 g1\ng3 = const 1\noutputs: g2 g3\n";
        let (code, out, _) = call(&["solve", "csat", "zoo:2lattice", "-"], c);
        assert_eq!((code, out.as_str()), (0, "SAT x=1 y=1\n"));
        let bad = "g0 = input x\ng1 = frob g0\noutputs: g1 g0\n";
        assert_eq!(call(&["solve", "csat", "zoo:2lattice", "-"], bad).0, EXIT_DATA);
        let (code, _, err) = call(
            &["solve", "csat", "zoo:S3", "-", "--solver", "usp"],
            "g0 = input x\noutputs: g0 g0\n",
        );
        assert_eq!(code, EXIT_PRECONDITION, "{err}");
    }

    #[test]
    fn budget_exit_code() {
        let c =
            "g0 = input a\ng1 = input b\ng2 = input c\ng3 = mul g0 g1\ng4 = mul g3 g2\ng5 = const 1\noutputs: g4 g5\n";
        let (code, _, _) = call(
            &["solve", "csat", "zoo:S3", "-", "--solver", "brute", "--budget", "10"],
            c,
        );
        assert_eq!(code, EXIT_BUDGET);
    }

    #[test]
    fn commutator_and_conlat() {
        let (code, out, _) = call(&["commutator", "zoo:S3"], "");
        assert_eq!(code, 0);
        assert_eq!(out, "[{0 1 2 3 4 5}, {0 1 2 3 4 5}] = {0 3 4|1 2 5}\n");
        assert_eq!(
            call(&["commutator", "zoo:Z4", "--alpha", "{0 1}"], "").0,
            EXIT_PRECONDITION
        );
        assert_eq!(call(&["commutator", "zoo:Z4", "--alpha", "0 1"], "").0, EXIT_USAGE);
        let (_, out, _) = call(&["conlat", "zoo:Z2xZ2", "--json"], "");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["size"], 5);
        let (_, dot, _) = call(&["conlat", "zoo:Z4", "--dot"], "");
        assert!(dot.starts_with("digraph"));
    }

    #[test]
    fn zoo_listing_is_stable() {
        let (code, a, _) = call(&["zoo", "list"], "");
        assert_eq!(code, 0);
        assert_eq!(a, call(&["zoo", "list"], "").1);
        assert!(a.lines().any(|l| l.starts_with("majority") && l.contains(" 4 ")));
        let (_, shown, _) = call(&["zoo", "show", "Z6"], "");
        assert_eq!(FiniteAlgebra::parse(&shown).unwrap().size(), 6);
    }

    #[test]
    fn classify_json_and_typeset() {
        let (code, out, _) = call(&["classify", "zoo:Z6", "--json"], "");
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["verdicts"]["SCSAT"]["verdict"], "PolyTime");
        let (_, out, _) = call(&["typeset", "zoo:Z2x2lattice"], "");
        assert_eq!(out, "typeset {2,4}\n");
    }
}
