//! Radicals, the nilpotent × lattice-like decomposition, and the
//! tractability classification of the four circuit problems.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::clone::DEFAULT_CAP;
use crate::commutator::{is_abelian, is_affine, is_solvable, is_supernilpotent, nilpotency_class};
use crate::congruence::{congruence_lattice, factor_pairs};
use crate::error::{Error, Result};
use crate::malcev::{find_directed_gumm_terms, find_malcev_term, is_poly_equiv_to_2lattice, is_poly_equiv_to_dlattice};
use crate::partition::Partition;
use crate::tct::{TypeLabel, TypedLattice};
use crate::Tri;

/// `ρ_i`: the largest congruence all of whose covers below it are of type `i`.
pub fn radical(tl: &TypedLattice, i: TypeLabel) -> Result<Partition> {
    if tl.labels.values().any(|&l| l == TypeLabel::Unknown) {
        return Err(Error::UntypedLattice("some cover has an unknown type".into()));
    }
    let lat = &tl.lattice;
    let bot = lat.bottom();
    let mut rho = bot;
    for k in 0..lat.len() {
        if tl.interval_all(bot, k, i) {
            rho = lat.join_idx(rho, k);
        }
    }
    if !tl.interval_all(bot, rho, i) {
        return Err(Error::UntypedLattice(format!("no largest congruence of type {i}")));
    }
    Ok(lat.get(rho).clone())
}

/// `A ≅ N × D` with `N = A/ρ4` and `D = A/ρ2`; `iso[a] = (a/ρ4)·|D| + a/ρ2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub n: FiniteAlgebra,
    pub d: FiniteAlgebra,
    pub rho2: Partition,
    pub rho4: Partition,
    pub iso: Vec<Elem>,
}

/// Splits an algebra with typeset within {2, 4} along its radicals.
/// `None` when the typeset has other labels or the radicals are not
/// complementary permuting congruences.
pub fn decompose_nd(alg: &FiniteAlgebra, tl: &TypedLattice) -> Result<Option<Decomposition>> {
    let ts = tl.typeset();
    if ts.contains(&TypeLabel::Unknown) {
        return Err(Error::UntypedLattice("some cover has an unknown type".into()));
    }
    if ts.iter().any(|l| !matches!(l, TypeLabel::Two | TypeLabel::Four)) {
        return Ok(None);
    }
    let rho2 = radical(tl, TypeLabel::Two)?;
    let rho4 = radical(tl, TypeLabel::Four)?;
    if !rho2.meet(&rho4).is_zero() || !rho2.join(&rho4).is_one() || !rho2.permutes_with(&rho4) {
        return Ok(None);
    }
    let n = alg.quotient(&rho4)?.renamed(format!("{}/rho4", alg.name()));
    let d = alg.quotient(&rho2)?.renamed(format!("{}/rho2", alg.name()));
    let iso: Vec<Elem> = (0..alg.size())
        .map(|a| rho4.class_of(a) * d.size() + rho2.class_of(a))
        .collect();
    let prod = n.direct_product(&d)?;
    if !alg.is_isomorphism(&prod, &iso) {
        return Ok(None);
    }
    Ok(Some(Decomposition { n, d, rho2, rho4, iso }))
}

/// Lattice-likeness with the witnessing 2-element lattice quotients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlLike {
    pub verdict: Tri,
    pub witness: Vec<Partition>,
}

/// Yes iff the kernels of the 2-element quotients polynomially equivalent
/// to the 2-element lattice meet to `0_A`.
pub fn is_dl_like(alg: &FiniteAlgebra, cap: usize) -> Result<DlLike> {
    let n = alg.size();
    let lat = match congruence_lattice(alg, cap) {
        Ok(l) => l,
        Err(Error::CapExceeded(_)) => {
            return Ok(DlLike {
                verdict: Tri::Unknown,
                witness: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let mut witness = Vec::new();
    let mut meet = Partition::one(n);
    for theta in lat.elements().iter().filter(|t| t.num_classes() == 2) {
        if is_poly_equiv_to_2lattice(&alg.quotient(theta)?)? {
            meet = meet.meet(theta);
            witness.push(theta.clone());
        }
    }
    Ok(DlLike {
        verdict: Tri::from_bool(meet.is_zero()),
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Problem {
    #[serde(rename = "CSAT")]
    Csat,
    #[serde(rename = "MCSAT")]
    Mcsat,
    #[serde(rename = "SCSAT")]
    Scsat,
    #[serde(rename = "CEQV")]
    Ceqv,
}

impl Problem {
    pub const ALL: [Problem; 4] = [Problem::Csat, Problem::Mcsat, Problem::Scsat, Problem::Ceqv];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Csat => "CSAT",
            Problem::Mcsat => "MCSAT",
            Problem::Scsat => "SCSAT",
            Problem::Ceqv => "CEQV",
        }
    }
}

/// Complexity regime of one problem. The hardness variants say that the
/// algebra falls in the hard regime; no certificate is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    PolyTime,
    NPComplete,
    CoNPComplete,
    OpenGap,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    pub reason: String,
}

fn verdict(kind: VerdictKind, reason: &str) -> Verdict {
    Verdict {
        verdict: kind,
        reason: reason.to_string(),
    }
}

/// Flags of one direct decomposition `A ≅ N × D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorFlags {
    pub n_size: usize,
    pub d_size: usize,
    pub n_nilpotent: Tri,
    pub n_supernilpotent: Tri,
    pub n_affine: Tri,
    pub d_dl_like: Tri,
}

/// Structural flags of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub abelian: Tri,
    pub solvable: Tri,
    pub nilpotent: Tri,
    pub supernilpotent: Tri,
    pub affine: Tri,
    pub dl_like: Tri,
    pub poly_equiv_dlattice: Tri,
    pub congruence_modular: Tri,
}

/// The verdict table. `factors` lists every direct decomposition,
/// the trivial ones included.
pub fn verdicts_from(flags: &Flags, factors: &[FactorFlags]) -> BTreeMap<&'static str, Verdict> {
    use VerdictKind::*;
    let mut out = BTreeMap::new();
    if flags.congruence_modular == Tri::No {
        for p in Problem::ALL {
            out.insert(p.name(), verdict(Unknown, "outside congruence modular varieties"));
        }
        return out;
    }
    out.insert(
        "SCSAT",
        match flags.affine {
            Tri::Yes => verdict(PolyTime, "affine"),
            Tri::No => verdict(NPComplete, "not affine"),
            Tri::Unknown => verdict(Unknown, "affineness undecided"),
        },
    );

    let any = |f: &dyn Fn(&FactorFlags) -> Tri, want: Tri| factors.iter().any(|x| f(x) == want);
    let all_no = |f: &dyn Fn(&FactorFlags) -> Tri| factors.iter().all(|x| f(x) == Tri::No);

    let mc = |x: &FactorFlags| x.n_affine.and(x.d_dl_like);
    out.insert(
        "MCSAT",
        if any(&mc, Tri::Yes) {
            verdict(PolyTime, "affine x DL-like decomposition")
        } else if all_no(&mc) {
            verdict(NPComplete, "no affine x DL-like decomposition")
        } else {
            verdict(Unknown, "decomposition flags undecided")
        },
    );

    let poly = |x: &FactorFlags| x.n_supernilpotent.and(x.d_dl_like);
    let nil = |x: &FactorFlags| x.n_nilpotent.and(x.d_dl_like);
    out.insert(
        "CSAT",
        if any(&poly, Tri::Yes) {
            verdict(PolyTime, "supernilpotent x DL-like decomposition")
        } else if all_no(&nil) {
            verdict(NPComplete, "no nilpotent x DL-like decomposition")
        } else if any(&poly, Tri::Unknown) || any(&nil, Tri::Unknown) {
            verdict(Unknown, "decomposition flags undecided")
        } else {
            verdict(OpenGap, "nilpotent x DL-like but not supernilpotent x DL-like")
        },
    );

    out.insert(
        "CEQV",
        match (flags.supernilpotent, flags.nilpotent) {
            (Tri::Yes, _) => verdict(PolyTime, "supernilpotent"),
            (_, Tri::No) => verdict(CoNPComplete, "not nilpotent"),
            (Tri::Unknown, _) | (_, Tri::Unknown) => verdict(Unknown, "nilpotency flags undecided"),
            _ => verdict(OpenGap, "nilpotent but not supernilpotent"),
        },
    );
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionSummary {
    pub rho2: String,
    pub rho4: String,
    pub n_size: usize,
    pub d_size: usize,
    pub iso: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    pub malcev_term: Option<String>,
    pub gumm_chain_length: Option<usize>,
    pub nilpotency_class: Option<usize>,
    pub supernilpotent_factor_sizes: Vec<usize>,
    pub dl_like_kernels: Vec<String>,
    pub factorizations: Vec<FactorFlags>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub schema: u32,
    pub algebra: String,
    pub size: usize,
    pub flags: Flags,
    pub typeset: Vec<TypeLabel>,
    pub decomposition: Option<DecompositionSummary>,
    pub verdicts: BTreeMap<&'static str, Verdict>,
    pub witnesses: Witnesses,
    pub caveats: Vec<String>,
}

impl ClassificationReport {
    /// Looks up a flag, a verdict, or the comma-joined typeset by its JSON key.
    pub fn field(&self, key: &str) -> Option<String> {
        if let Some(v) = self.verdicts.get(key) {
            return Some(format!("{:?}", v.verdict));
        }
        if key == "typeset" {
            return Some(self.typeset.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","));
        }
        let flags = serde_json::to_value(&self.flags).ok()?;
        flags.get(key)?.as_str().map(str::to_string)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("algebra {} (size {})\n", self.algebra, self.size);
        let flags = serde_json::to_value(&self.flags).expect("flags serialize");
        if let Some(obj) = flags.as_object() {
            for (k, v) in obj {
                s.push_str(&format!("  {k}: {}\n", v.as_str().unwrap_or("?")));
            }
        }
        let ts: Vec<String> = self.typeset.iter().map(|t| t.to_string()).collect();
        s.push_str(&format!("  typeset: {{{}}}\n", ts.join(",")));
        for p in Problem::ALL {
            let v = &self.verdicts[p.name()];
            s.push_str(&format!("{} {:?} ({})\n", p.name(), v.verdict, v.reason));
        }
        for c in &self.caveats {
            s.push_str(&format!("caveat: {c}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub cap: usize,
    pub gumm_max_n: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            cap: DEFAULT_CAP,
            gumm_max_n: 16,
        }
    }
}

fn tri<T>(r: Result<T>, f: impl FnOnce(T) -> Tri) -> Result<Tri> {
    match r {
        Ok(v) => Ok(f(v)),
        Err(Error::CapExceeded(_)) => Ok(Tri::Unknown),
        Err(e) => Err(e),
    }
}

fn factor_flags(n: &FiniteAlgebra, d: &FiniteAlgebra, cap: usize) -> Result<FactorFlags> {
    Ok(FactorFlags {
        n_size: n.size(),
        d_size: d.size(),
        n_nilpotent: Tri::from_bool(nilpotency_class(n)?.is_some()),
        n_supernilpotent: is_supernilpotent(n, cap)?.verdict,
        n_affine: is_affine(n, cap)?,
        d_dl_like: is_dl_like(d, cap)?.verdict,
    })
}

/// Computes flags, typeset, decomposition and verdicts.
pub fn classify(alg: &FiniteAlgebra) -> Result<ClassificationReport> {
    classify_with(alg, ClassifyOptions::default())
}

pub fn classify_with(alg: &FiniteAlgebra, opts: ClassifyOptions) -> Result<ClassificationReport> {
    let cap = opts.cap;
    let mut caveats = Vec::new();

    let gumm = find_directed_gumm_terms(alg, opts.gumm_max_n, cap);
    let congruence_modular = tri(gumm.clone(), |g| Tri::from_bool(g.is_some()))?;
    if congruence_modular == Tri::Unknown {
        caveats.push("cm_assumed".to_string());
    }
    let malcev = find_malcev_term(alg, cap);
    let nil_class = nilpotency_class(alg)?;
    let supernil = is_supernilpotent(alg, cap)?;
    let dl = is_dl_like(alg, cap)?;
    // a distributive lattice is a subdirect product of 2-element lattices
    let poly_equiv_dlattice = match dl.verdict {
        Tri::No => Tri::No,
        _ if alg.size() <= 8 => tri(is_poly_equiv_to_dlattice(alg, cap.min(20_000)), Tri::from_bool)?,
        _ => Tri::Unknown,
    };
    let flags = Flags {
        abelian: Tri::from_bool(is_abelian(alg)?),
        solvable: Tri::from_bool(is_solvable(alg)?),
        nilpotent: Tri::from_bool(nil_class.is_some()),
        supernilpotent: supernil.verdict,
        affine: is_affine(alg, cap)?,
        dl_like: dl.verdict,
        poly_equiv_dlattice,
        congruence_modular,
    };

    let (typeset, decomposition) = match TypedLattice::compute(alg, cap) {
        Ok(tl) => {
            let ts: Vec<TypeLabel> = tl.typeset().into_iter().collect();
            let dec = match decompose_nd(alg, &tl) {
                Ok(d) => d.map(|d| DecompositionSummary {
                    rho2: d.rho2.to_string(),
                    rho4: d.rho4.to_string(),
                    n_size: d.n.size(),
                    d_size: d.d.size(),
                    iso: d.iso,
                }),
                Err(Error::UntypedLattice(_)) => None,
                Err(e) => return Err(e),
            };
            (ts, dec)
        }
        Err(Error::CapExceeded(_)) => {
            caveats.push("typeset_incomplete".to_string());
            (vec![TypeLabel::Unknown], None)
        }
        Err(e) => return Err(e),
    };

    let mut factorizations = Vec::new();
    match congruence_lattice(alg, cap) {
        Ok(lat) => {
            for fp in factor_pairs(&lat) {
                let n = alg.quotient(&fp.alpha)?;
                let d = alg.quotient(&fp.beta)?;
                factorizations.push(factor_flags(&n, &d, cap)?);
            }
        }
        Err(Error::CapExceeded(_)) => {
            factorizations.push(FactorFlags {
                n_size: alg.size(),
                d_size: 1,
                n_nilpotent: flags.nilpotent,
                n_supernilpotent: flags.supernilpotent,
                n_affine: flags.affine,
                d_dl_like: Tri::Yes,
            });
            caveats.push("factorizations_incomplete".to_string());
        }
        Err(e) => return Err(e),
    }

    let verdicts = verdicts_from(&flags, &factorizations);
    let witnesses = Witnesses {
        malcev_term: malcev.ok().flatten().map(|t| t.to_string()),
        gumm_chain_length: gumm.ok().flatten().map(|g| g.ds.len()),
        nilpotency_class: nil_class,
        supernilpotent_factor_sizes: supernil.factor_sizes,
        dl_like_kernels: dl.witness.iter().map(|p| p.to_string()).collect(),
        factorizations,
    };
    Ok(ClassificationReport {
        schema: 1,
        algebra: alg.name().to_string(),
        size: alg.size(),
        flags,
        typeset,
        decomposition,
        verdicts,
        witnesses,
        caveats,
    })
}
