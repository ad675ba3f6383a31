//! Built-in fixture algebras with expected classification fragments.

use crate::algebra::{Elem, FiniteAlgebra, Operation};

/// Identity of `S3`; elements are the permutations of `{0,1,2}` in
/// lexicographic order: 012, 021, 102, 120, 201, 210.
pub const S3_IDENTITY: Elem = 0;
/// The rotation subgroup A3 = {012, 120, 201}.
pub const S3_ROTATIONS: [Elem; 3] = [0, 3, 4];

/// A fixture with golden `(field, value)` pairs that its classification
/// report must reproduce. Field names follow the report's JSON keys.
#[derive(Debug, Clone)]
pub struct ZooEntry {
    pub name: &'static str,
    pub algebra: FiniteAlgebra,
    pub golden: &'static [(&'static str, &'static str)],
}

fn build(name: &str, size: usize, ops: Vec<Operation>) -> FiniteAlgebra {
    FiniteAlgebra::new(name, size, ops).expect("zoo tables are valid")
}

pub fn trivial() -> FiniteAlgebra {
    build("trivial", 1, vec![Operation::new("f", 2, vec![0])])
}

pub fn two_lattice() -> FiniteAlgebra {
    build(
        "2lattice",
        2,
        vec![
            Operation::from_fn("meet", 2, 2, |a| a[0].min(a[1])),
            Operation::from_fn("join", 2, 2, |a| a[0].max(a[1])),
        ],
    )
}

pub fn two_semilattice() -> FiniteAlgebra {
    build(
        "2semilattice",
        2,
        vec![Operation::from_fn("meet", 2, 2, |a| a[0].min(a[1]))],
    )
}

pub fn two_boolean() -> FiniteAlgebra {
    build(
        "2boolean",
        2,
        vec![
            Operation::from_fn("meet", 2, 2, |a| a[0].min(a[1])),
            Operation::from_fn("join", 2, 2, |a| a[0].max(a[1])),
            Operation::from_fn("neg", 1, 2, |a| 1 - a[0]),
        ],
    )
}

/// The cyclic group `Z_n` with `add` and `neg`.
pub fn cyclic(n: usize) -> FiniteAlgebra {
    build(
        &format!("Z{n}"),
        n,
        vec![
            Operation::from_fn("add", 2, n, |a| (a[0] + a[1]) % n),
            Operation::from_fn("neg", 1, n, |a| (n - a[0]) % n),
        ],
    )
}

pub fn z2_x_z2() -> FiniteAlgebra {
    let z2 = cyclic(2);
    z2.direct_product(&z2).expect("same signature").renamed("Z2xZ2")
}

fn perms3() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

/// The symmetric group on three letters, `(a·b)(i) = a(b(i))`.
pub fn s3() -> FiniteAlgebra {
    let p = perms3();
    let idx = |q: [usize; 3]| p.iter().position(|&r| r == q).unwrap();
    let mul = Operation::from_fn("mul", 2, 6, |a| {
        let (x, y) = (p[a[0]], p[a[1]]);
        idx([x[y[0]], x[y[1]], x[y[2]]])
    });
    let inv = Operation::from_fn("inv", 1, 6, |a| {
        let x = p[a[0]];
        let mut r = [0; 3];
        for i in 0..3 {
            r[x[i]] = i;
        }
        idx(r)
    });
    build("S3", 6, vec![mul, inv])
}

/// `Z4` with the nilpotent multiplication `x*y = 2xy`; isomorphic to the
/// ring `2Z8`.
pub fn z4_ring() -> FiniteAlgebra {
    build(
        "Z4ring",
        4,
        vec![
            Operation::from_fn("add", 2, 4, |a| (a[0] + a[1]) % 4),
            Operation::from_fn("neg", 1, 4, |a| (4 - a[0]) % 4),
            Operation::from_fn("mul", 2, 4, |a| (2 * a[0] * a[1]) % 4),
        ],
    )
}

/// The unital ring `Z4`.
pub fn z4_unital() -> FiniteAlgebra {
    build(
        "Z4unital",
        4,
        vec![
            Operation::from_fn("add", 2, 4, |a| (a[0] + a[1]) % 4),
            Operation::from_fn("neg", 1, 4, |a| (4 - a[0]) % 4),
            Operation::from_fn("mul", 2, 4, |a| (a[0] * a[1]) % 4),
        ],
    )
}

/// The triples `111, 011, 101, 110` of the cube `{0,1}^3` under the
/// coordinatewise majority operation.
pub fn majority() -> FiniteAlgebra {
    let elems: [[usize; 3]; 4] = [[1, 1, 1], [0, 1, 1], [1, 0, 1], [1, 1, 0]];
    let m = Operation::from_fn("m", 3, 4, |a| {
        let mut out = [0; 3];
        for (c, o) in out.iter_mut().enumerate() {
            let ones = a.iter().filter(|&&e| elems[e][c] == 1).count();
            *o = usize::from(ones >= 2);
        }
        elems.iter().position(|&e| e == out).expect("closed")
    });
    build("majority", 4, vec![m])
        .with_element_names(vec!["111".into(), "011".into(), "101".into(), "110".into()])
        .expect("four names")
}

/// `Z2` presented in the lattice signature with both operations equal to `+`,
/// times the 2-element lattice. Element `(a, b)` is `2a + b`.
pub fn z2_x_lattice() -> FiniteAlgebra {
    let z2 = build(
        "Z2",
        2,
        vec![
            Operation::from_fn("meet", 2, 2, |a| a[0] ^ a[1]),
            Operation::from_fn("join", 2, 2, |a| a[0] ^ a[1]),
        ],
    );
    z2.direct_product(&two_lattice())
        .expect("same signature")
        .renamed("Z2x2lattice")
}

/// The CSP-encoding algebra of the 2-element structure with the disequality relation.
pub fn csp_sample() -> FiniteAlgebra {
    let d = crate::reductions::RelStructure::new(2, vec![("neq".into(), 2, vec![vec![0, 1], vec![1, 0]])])
        .expect("valid structure");
    crate::reductions::build_csp_algebra(&d).renamed("AD2")
}

const POLY_ALL: &[(&str, &str)] = &[
    ("CSAT", "PolyTime"),
    ("MCSAT", "PolyTime"),
    ("SCSAT", "PolyTime"),
    ("CEQV", "PolyTime"),
];

pub fn zoo() -> Vec<ZooEntry> {
    vec![
        ZooEntry {
            name: "trivial",
            algebra: trivial(),
            golden: POLY_ALL,
        },
        ZooEntry {
            name: "2lattice",
            algebra: two_lattice(),
            golden: &[
                ("dl_like", "Yes"),
                ("affine", "No"),
                ("CSAT", "PolyTime"),
                ("MCSAT", "PolyTime"),
                ("SCSAT", "NPComplete"),
                ("CEQV", "CoNPComplete"),
            ],
        },
        ZooEntry {
            name: "2semilattice",
            algebra: two_semilattice(),
            golden: &[("CSAT", "Unknown"), ("CEQV", "Unknown")],
        },
        ZooEntry {
            name: "2boolean",
            algebra: two_boolean(),
            golden: &[
                ("dl_like", "No"),
                ("CSAT", "NPComplete"),
                ("SCSAT", "NPComplete"),
                ("CEQV", "CoNPComplete"),
            ],
        },
        ZooEntry {
            name: "Z2",
            algebra: cyclic(2),
            golden: POLY_ALL,
        },
        ZooEntry {
            name: "Z3",
            algebra: cyclic(3),
            golden: POLY_ALL,
        },
        ZooEntry {
            name: "Z4",
            algebra: cyclic(4),
            golden: POLY_ALL,
        },
        ZooEntry {
            name: "Z2xZ2",
            algebra: z2_x_z2(),
            golden: POLY_ALL,
        },
        ZooEntry {
            name: "Z6",
            algebra: cyclic(6),
            golden: &[
                ("affine", "Yes"),
                ("supernilpotent", "Yes"),
                ("CSAT", "PolyTime"),
                ("MCSAT", "PolyTime"),
                ("SCSAT", "PolyTime"),
                ("CEQV", "PolyTime"),
            ],
        },
        ZooEntry {
            name: "S3",
            algebra: s3(),
            golden: &[
                ("solvable", "Yes"),
                ("nilpotent", "No"),
                ("CSAT", "NPComplete"),
                ("MCSAT", "NPComplete"),
                ("SCSAT", "NPComplete"),
                ("CEQV", "CoNPComplete"),
            ],
        },
        ZooEntry {
            name: "Z4ring",
            algebra: z4_ring(),
            golden: &[
                ("nilpotent", "Yes"),
                ("abelian", "No"),
                ("CSAT", "PolyTime"),
                ("MCSAT", "NPComplete"),
                ("SCSAT", "NPComplete"),
                ("CEQV", "PolyTime"),
            ],
        },
        ZooEntry {
            name: "Z4unital",
            algebra: z4_unital(),
            golden: &[
                ("nilpotent", "No"),
                ("CSAT", "NPComplete"),
                ("SCSAT", "NPComplete"),
                ("CEQV", "CoNPComplete"),
            ],
        },
        ZooEntry {
            name: "majority",
            algebra: majority(),
            golden: &[
                ("dl_like", "Yes"),
                ("poly_equiv_dlattice", "No"),
                ("CSAT", "PolyTime"),
                ("MCSAT", "PolyTime"),
            ],
        },
        ZooEntry {
            name: "AD2",
            algebra: csp_sample(),
            golden: &[("CSAT", "Unknown")],
        },
        ZooEntry {
            name: "Z2x2lattice",
            algebra: z2_x_lattice(),
            golden: &[
                ("dl_like", "No"),
                ("typeset", "2,4"),
                ("CSAT", "PolyTime"),
                ("MCSAT", "PolyTime"),
                ("SCSAT", "NPComplete"),
                ("CEQV", "CoNPComplete"),
            ],
        },
    ]
}

pub fn lookup(name: &str) -> Option<ZooEntry> {
    zoo().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_is_well_formed() {
        let z = zoo();
        assert!(z.len() >= 13);
        for e in &z {
            assert_eq!(e.name, e.algebra.name());
            let back = FiniteAlgebra::parse(&e.algebra.to_text()).unwrap();
            assert_eq!(back, e.algebra);
        }
    }

    #[test]
    fn s3_is_a_group_with_the_documented_numbering() {
        let g = s3();
        let mul = g.op_index("mul").unwrap();
        let inv = g.op_index("inv").unwrap();
        for a in 0..6 {
            assert_eq!(g.apply(mul, &[a, S3_IDENTITY]), a);
            assert_eq!(g.apply(mul, &[a, g.apply(inv, &[a])]), S3_IDENTITY);
        }
        for &a in &S3_ROTATIONS {
            for &b in &S3_ROTATIONS {
                assert!(S3_ROTATIONS.contains(&g.apply(mul, &[a, b])));
            }
        }
        // (021·102)(i) = 021(102(i)) gives 201
        assert_eq!(g.apply(mul, &[1, 2]), 4);
    }

    #[test]
    fn z4_ring_products_vanish_in_depth_three() {
        let r = z4_ring();
        let mul = r.op_index("mul").unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    assert_eq!(r.apply(mul, &[r.apply(mul, &[a, b]), c]), 0);
                }
            }
        }
    }
}
