//! Terms and polynomials (terms that may mention universe constants).

use std::fmt;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Const(Elem),
    Apply(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn constant(c: Elem) -> Term {
        Term::Const(c)
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Apply(op.into(), args)
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Apply(_, args) => 1 + args.iter().map(Term::node_count).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Apply(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// One past the largest variable index, or 0 for ground terms.
    pub fn num_vars(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Const(_) => 0,
            Term::Apply(_, args) => args.iter().map(Term::num_vars).max().unwrap_or(0),
        }
    }

    pub fn has_constants(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Apply(_, args) => args.iter().any(Term::has_constants),
        }
    }

    /// Replaces `Var(i)` by `subst[i]`.
    pub fn substitute(&self, subst: &[Term]) -> Term {
        match self {
            Term::Var(i) => subst.get(*i).cloned().unwrap_or(Term::Var(*i)),
            Term::Const(c) => Term::Const(*c),
            Term::Apply(op, args) => Term::Apply(op.clone(), args.iter().map(|a| a.substitute(subst)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Apply(op, args) => {
                write!(f, "{op}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Evaluates `t` bottom-up with `Var(i)` bound to `asg[i]`.
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, asg: &[Elem]) -> Result<Elem> {
    match t {
        Term::Var(i) => {
            let v = *asg.get(*i).ok_or(Error::UnboundVariable(*i))?;
            alg.check_elem(v)?;
            Ok(v)
        }
        Term::Const(c) => {
            alg.check_elem(*c)?;
            Ok(*c)
        }
        Term::Apply(op, args) => {
            let k = alg.op_index(op).ok_or_else(|| Error::UnknownOp(op.clone()))?;
            let arity = alg.ops()[k].arity();
            if arity != args.len() {
                return Err(Error::ArityMismatch {
                    op: op.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let vals = args
                .iter()
                .map(|a| eval_term(alg, a, asg))
                .collect::<Result<Vec<_>>>()?;
            Ok(alg.apply(k, &vals))
        }
    }
}

/// Tabulates a term as a function of `arity` variables (last variable fastest).
pub fn term_table(alg: &FiniteAlgebra, t: &Term, arity: usize) -> Result<Vec<Elem>> {
    let n = alg.size();
    let mut args = vec![0; arity];
    let mut out = Vec::with_capacity(n.pow(arity as u32));
    loop {
        out.push(eval_term(alg, t, &args)?);
        if !crate::algebra::increment(&mut args, n) {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn commutator_word() -> Term {
        // x⁻¹ y⁻¹ x y
        let x = Term::var(0);
        let y = Term::var(1);
        Term::app(
            "mul",
            vec![
                Term::app(
                    "mul",
                    vec![
                        Term::app(
                            "mul",
                            vec![Term::app("inv", vec![x.clone()]), Term::app("inv", vec![y.clone()])],
                        ),
                        x,
                    ],
                ),
                y,
            ],
        )
    }

    #[test]
    fn lattice_meet() {
        let l = zoo::two_lattice();
        let t = Term::app("meet", vec![Term::var(0), Term::var(1)]);
        assert_eq!(eval_term(&l, &t, &[1, 1]).unwrap(), 1);
        assert_eq!(eval_term(&l, &t, &[1, 0]).unwrap(), 0);
    }

    #[test]
    fn z4_addition() {
        let z4 = zoo::cyclic(4);
        let t = Term::app("add", vec![Term::var(0), Term::var(1)]);
        assert_eq!(eval_term(&z4, &t, &[3, 2]).unwrap(), 1);
    }

    #[test]
    fn s3_commutator_of_noncommuting_pair() {
        let s3 = zoo::s3();
        let mul = s3.op_index("mul").unwrap();
        // pick the first non-commuting pair by scanning the table
        let (a, b) = (0..6)
            .flat_map(|a| (0..6).map(move |b| (a, b)))
            .find(|&(a, b)| s3.apply(mul, &[a, b]) != s3.apply(mul, &[b, a]))
            .unwrap();
        let v = eval_term(&s3, &commutator_word(), &[a, b]).unwrap();
        assert_ne!(v, zoo::S3_IDENTITY);
        // commutators land in A3
        assert!(zoo::S3_ROTATIONS.contains(&v));
    }

    #[test]
    fn eval_errors() {
        let l = zoo::two_lattice();
        let bad = Term::app("nope", vec![Term::var(0)]);
        assert_eq!(eval_term(&l, &bad, &[0]), Err(Error::UnknownOp("nope".into())));
        let t = Term::app("meet", vec![Term::var(0), Term::var(3)]);
        assert_eq!(eval_term(&l, &t, &[0, 1]), Err(Error::UnboundVariable(3)));
        assert!(matches!(
            eval_term(&l, &Term::constant(5), &[]),
            Err(Error::ElementOutOfRange { elem: 5, size: 2 })
        ));
    }
}
