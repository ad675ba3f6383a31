//! Finite algebras given by operation tables, plus the algebra text format.
//!
//! The universe of an algebra of size `n` is always `0..n`. Tables are flat
//! row-major arrays indexed by the mixed-radix value of the argument tuple,
//! with the last argument varying fastest.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lexer::Cursor;
use crate::partition::Partition;

/// A universe element.
pub type Elem = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operation {
    name: String,
    arity: usize,
    table: Vec<Elem>,
}

impl Operation {
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<Elem>) -> Self {
        Operation {
            name: name.into(),
            arity,
            table,
        }
    }

    /// Builds a table by evaluating `f` on every argument tuple.
    pub fn from_fn(name: impl Into<String>, arity: usize, size: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> Self {
        let len = size.pow(arity as u32);
        let mut args = vec![0; arity];
        let mut table = Vec::with_capacity(len);
        for _ in 0..len {
            table.push(f(&args));
            increment(&mut args, size);
        }
        Operation::new(name, arity, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }
}

/// Advances a mixed-radix counter (last position fastest). Returns false on wrap.
pub(crate) fn increment(digits: &mut [Elem], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    ops: Vec<Operation>,
    element_names: Option<Vec<String>>,
}

impl FiniteAlgebra {
    /// Validates table shapes, entry ranges and name uniqueness.
    pub fn new(name: impl Into<String>, size: usize, ops: Vec<Operation>) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::InvalidAlgebra("size must be at least 1".into()));
        }
        let mut seen = HashMap::new();
        for op in &ops {
            if seen.insert(op.name.clone(), ()).is_some() {
                return Err(Error::InvalidAlgebra(format!("duplicate operation name `{}`", op.name)));
            }
            let expected = size
                .checked_pow(op.arity as u32)
                .ok_or_else(|| Error::InvalidAlgebra(format!("table of `{}` too large", op.name)))?;
            if op.table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "operation `{}` of arity {} needs {} entries, found {}",
                    op.name,
                    op.arity,
                    expected,
                    op.table.len()
                )));
            }
            if let Some(&bad) = op.table.iter().find(|&&v| v >= size) {
                return Err(Error::ElementOutOfRange { elem: bad, size });
            }
        }
        Ok(FiniteAlgebra {
            name,
            size,
            ops,
            element_names: None,
        })
    }

    pub fn with_element_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.size {
            return Err(Error::InvalidAlgebra(format!(
                "{} element names for universe of size {}",
                names.len(),
                self.size
            )));
        }
        self.element_names = Some(names);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn element_names(&self) -> Option<&[String]> {
        self.element_names.as_deref()
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn op(&self, name: &str) -> Result<&Operation> {
        self.ops
            .iter()
            .find(|o| o.name == name)
            .ok_or_else(|| Error::UnknownOp(name.to_string()))
    }

    #[inline]
    pub fn apply(&self, op: usize, args: &[Elem]) -> Elem {
        let o = &self.ops[op];
        debug_assert_eq!(args.len(), o.arity);
        let mut idx = 0;
        for &a in args {
            idx = idx * self.size + a;
        }
        o.table[idx]
    }

    pub fn check_elem(&self, elem: Elem) -> Result<()> {
        if elem < self.size {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { elem, size: self.size })
        }
    }

    /// True when every basic operation preserves the partition.
    pub fn is_compatible(&self, p: &Partition) -> bool {
        if p.len() != self.size {
            return false;
        }
        for (k, op) in self.ops.iter().enumerate() {
            if op.arity == 0 {
                continue;
            }
            // Single-position substitutions suffice: compatibility with every
            // translation implies compatibility with the operation.
            let mut args = vec![0; op.arity];
            loop {
                for pos in 0..op.arity {
                    let orig = args[pos];
                    let base = self.apply(k, &args);
                    for b in 0..self.size {
                        if b != orig && p.related(orig, b) {
                            args[pos] = b;
                            let other = self.apply(k, &args);
                            args[pos] = orig;
                            if !p.related(base, other) {
                                return false;
                            }
                        }
                    }
                }
                if !increment(&mut args, self.size) {
                    break;
                }
            }
        }
        true
    }

    /// Quotient by a congruence; class indices follow the canonical order of `theta`.
    pub fn quotient(&self, theta: &Partition) -> Result<FiniteAlgebra> {
        if !self.is_compatible(theta) {
            return Err(Error::NotACongruence);
        }
        let reps = theta.representatives();
        let m = reps.len();
        let ops = self
            .ops
            .iter()
            .enumerate()
            .map(|(k, op)| {
                let mut full = vec![0; op.arity];
                Operation::from_fn(op.name.clone(), op.arity, m, |cls| {
                    for (slot, &c) in full.iter_mut().zip(cls) {
                        *slot = reps[c];
                    }
                    theta.class_of(self.apply(k, &full))
                })
            })
            .collect();
        FiniteAlgebra::new(format!("{}/~", self.name), m, ops)
    }

    /// Direct product; `(a, b)` is encoded as `a * other.size + b`.
    pub fn direct_product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if self.ops.len() != other.ops.len()
            || self
                .ops
                .iter()
                .zip(&other.ops)
                .any(|(a, b)| a.name != b.name || a.arity != b.arity)
        {
            return Err(Error::InvalidAlgebra(
                "direct product needs identical signatures".into(),
            ));
        }
        let nb = other.size;
        let size = self.size * nb;
        let ops = self
            .ops
            .iter()
            .enumerate()
            .map(|(k, op)| {
                let mut left = vec![0; op.arity];
                let mut right = vec![0; op.arity];
                Operation::from_fn(op.name.clone(), op.arity, size, |args| {
                    for (i, &a) in args.iter().enumerate() {
                        left[i] = a / nb;
                        right[i] = a % nb;
                    }
                    self.apply(k, &left) * nb + other.apply(k, &right)
                })
            })
            .collect();
        FiniteAlgebra::new(format!("{}x{}", self.name, other.name), size, ops)
    }

    /// Subuniverse of `self^width` closed under the operations, built from
    /// explicit elements. Returns the algebra and the tuple behind each index.
    pub fn subpower_from(&self, elements: Vec<Vec<Elem>>) -> Result<(FiniteAlgebra, Vec<Vec<Elem>>)> {
        let index: HashMap<Vec<Elem>, usize> = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let m = elements.len();
        let width = elements.first().map_or(0, Vec::len);
        let mut ops = Vec::with_capacity(self.ops.len());
        for (k, op) in self.ops.iter().enumerate() {
            let mut coord_args = vec![0; op.arity];
            let mut out = vec![0; width];
            let mut closed = true;
            let o = Operation::from_fn(op.name.clone(), op.arity, m, |args| {
                for (c, slot) in out.iter_mut().enumerate() {
                    for (i, &a) in args.iter().enumerate() {
                        coord_args[i] = elements[a][c];
                    }
                    *slot = self.apply(k, &coord_args);
                }
                match index.get(&out) {
                    Some(&i) => i,
                    None => {
                        closed = false;
                        0
                    }
                }
            });
            if !closed {
                return Err(Error::InvalidAlgebra(format!("subset not closed under `{}`", op.name)));
            }
            ops.push(o);
        }
        let alg = FiniteAlgebra::new(format!("{}^{}", self.name, width), m, ops)?;
        Ok((alg, elements))
    }

    /// Checks that `map` is an isomorphism onto `other` (same signature order).
    pub fn is_isomorphism(&self, other: &FiniteAlgebra, map: &[Elem]) -> bool {
        if self.size != other.size || map.len() != self.size || self.ops.len() != other.ops.len() {
            return false;
        }
        let mut seen = vec![false; other.size];
        for &m in map {
            if m >= other.size || seen[m] {
                return false;
            }
            seen[m] = true;
        }
        for (k, op) in self.ops.iter().enumerate() {
            let Some(ko) = other.op_index(&op.name) else {
                return false;
            };
            if other.ops[ko].arity != op.arity {
                return false;
            }
            let mut args = vec![0; op.arity];
            let mut mapped = vec![0; op.arity];
            loop {
                for (m, &a) in mapped.iter_mut().zip(&args) {
                    *m = map[a];
                }
                if map[self.apply(k, &args)] != other.apply(ko, &mapped) {
                    return false;
                }
                if !increment(&mut args, self.size) {
                    break;
                }
            }
        }
        true
    }

    /// Searches for an isomorphism by brute force over permutations (small sizes only).
    pub fn find_isomorphism(&self, other: &FiniteAlgebra) -> Option<Vec<Elem>> {
        if self.size != other.size || self.size > 9 {
            return None;
        }
        let mut perm: Vec<Elem> = (0..self.size).collect();
        loop {
            if self.is_isomorphism(other, &perm) {
                return Some(perm);
            }
            if !next_permutation(&mut perm) {
                return None;
            }
        }
    }

    /// Canonical text form; `parse` of the output reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algebra {} size {}", self.name, self.size);
        if let Some(names) = &self.element_names {
            let _ = writeln!(s, "elements {}", names.join(" "));
        }
        for op in &self.ops {
            let _ = writeln!(s, "op {} arity {}", op.name, op.arity);
            let row = if op.arity == 0 { 1 } else { self.size };
            for chunk in op.table.chunks(row) {
                let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "{}", line.join(" "));
            }
        }
        s
    }

    /// Parses the algebra text format. Entries may be indices or element names.
    pub fn parse(text: &str) -> Result<FiniteAlgebra> {
        let mut cur = Cursor::new(text);
        cur.expect("algebra")?;
        let name = cur.word()?.text.to_string();
        cur.expect("size")?;
        let size = cur.number()?;
        if size == 0 {
            return Err(Error::InvalidAlgebra("size must be at least 1".into()));
        }
        let mut names: Option<Vec<String>> = None;
        if cur.peek() == Some("elements") {
            cur.word()?;
            let mut v = Vec::with_capacity(size);
            for _ in 0..size {
                v.push(cur.word()?.text.to_string());
            }
            names = Some(v);
        }
        let lookup: HashMap<&str, usize> = names
            .iter()
            .flatten()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut ops = Vec::new();
        while cur.peek().is_some() {
            cur.expect("op")?;
            let oname = cur.word()?.text.to_string();
            cur.expect("arity")?;
            let arity = cur.number()?;
            let len = size
                .checked_pow(arity as u32)
                .filter(|&l| l <= 1 << 24)
                .ok_or_else(|| Error::InvalidAlgebra(format!("table of `{oname}` too large")))?;
            let mut table = Vec::with_capacity(len);
            for _ in 0..len {
                let t = cur.word()?;
                let v = match t.text.parse::<usize>() {
                    Ok(v) => v,
                    Err(_) => *lookup
                        .get(t.text)
                        .ok_or_else(|| Error::parse(t.line, t.col, format!("unknown element `{}`", t.text)))?,
                };
                if v >= size {
                    return Err(Error::parse(t.line, t.col, format!("element {v} out of range")));
                }
                table.push(v);
            }
            ops.push(Operation::new(oname, arity, table));
        }
        let alg = FiniteAlgebra::new(name, size, ops)?;
        match names {
            Some(n) => alg.with_element_names(n),
            None => Ok(alg),
        }
    }
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
