//! Double branched covers of the links and tangles the families produce.
//!
//! The dictionary is a fixed rule table. Every translation records the
//! rules it used so a result can be traced back to its entries.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::manifolds::Manifold;
use crate::slopes::Slope;
use crate::tangles::{
    fill_family, BoundaryLabel, DslItem, FilledShape, Fraction, LinkDesc, Section, TangleError,
    TangleExpr,
};

pub const STANDARD: &str = "standard dictionary";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverRule {
    pub name: &'static str,
    pub pattern: &'static str,
    pub image: &'static str,
    pub provenance: &'static str,
}

pub const RULES: &[CoverRule] = &[
    CoverRule { name: "unknot", pattern: "Unknot", image: "S3", provenance: STANDARD },
    CoverRule { name: "hopf", pattern: "b(2,1)", image: "RP3", provenance: "L2.2(1)" },
    CoverRule { name: "two-bridge", pattern: "b(p,q), p ≠ 2", image: "L(p,q)", provenance: "L3.2" },
    CoverRule { name: "link-sum", pattern: "A # B", image: "dbc(A) # dbc(B)", provenance: "L2.2(1)" },
    CoverRule {
        name: "split",
        pattern: "A ⊔ B",
        image: "dbc(A) # dbc(B) # S1xS2",
        provenance: "T3.6",
    },
    CoverRule {
        name: "montesinos-link",
        pattern: "M(f_1, …, f_k), k ≥ 3",
        image: "Unknown(small seifert)",
        provenance: "L4.1(3)",
    },
    CoverRule { name: "rational", pattern: "T[f]", image: "SolidTorus", provenance: "L2.2(1)" },
    CoverRule {
        name: "montesinos-tangle",
        pattern: "T[b_1/a_1] + … + T[b_k/a_k]",
        image: "Q(a_1, …, a_k)",
        provenance: "L2.2(2)",
    },
    CoverRule { name: "tangle-sum", pattern: "connsum(T, L)", image: "dbc(T) # dbc(L)", provenance: "L2.2(1)" },
    CoverRule { name: "product", pattern: "S2xI product", image: "T2xI", provenance: "L3.5" },
    CoverRule {
        name: "algebraic",
        pattern: "(T[1/2p] + T[-1/2p]) + T[1/2]",
        image: "Union[C(2,1) ~ Q(2p,-2p)]",
        provenance: "L2.2(4)",
    },
    CoverRule {
        name: "tangle-union",
        pattern: "union(T[f_1] + T[f_2], T[g_1] + T[g_2])",
        image: "Union[Q ~ Q]",
        provenance: "L4.1(1)",
    },
];

pub fn rule(name: &str) -> Option<&'static CoverRule> {
    RULES.iter().find(|r| r.name == name)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("cover of {what} has {got:?} boundary tori, expected {expected}")]
    Boundary { what: String, expected: usize, got: Option<usize> },
}

/// A manifold together with the rules used to reach it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub manifold: Manifold,
    pub chain: Vec<&'static str>,
}

impl Cover {
    fn leaf(manifold: Manifold, rule: &'static str) -> Cover {
        Cover { manifold: manifold.normalize(), chain: vec![rule] }
    }

    fn sum(rule: &'static str, parts: Vec<Cover>, extra: Vec<Manifold>) -> Cover {
        let mut chain = vec![rule];
        let mut factors = extra;
        for c in parts {
            chain.extend(c.chain);
            factors.push(c.manifold);
        }
        Cover { manifold: Manifold::conn_sum(factors), chain }
    }
}

/// What a double branched cover is taken of.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchSet {
    Link(LinkDesc),
    Tangle(TangleExpr),
    Shape(FilledShape),
    /// Four parallel strands in `S²×I`.
    Product,
}

impl From<DslItem> for BranchSet {
    fn from(item: DslItem) -> Self {
        match item {
            DslItem::Link(l) => BranchSet::Link(l),
            DslItem::Tangle(t) => BranchSet::Tangle(t),
        }
    }
}

pub fn dbc(x: &BranchSet) -> Cover {
    match x {
        BranchSet::Link(l) => dbc_link(l),
        BranchSet::Tangle(t) => dbc_tangle(t),
        BranchSet::Shape(s) => dbc_shape(s),
        BranchSet::Product => Cover::leaf(Manifold::TorusI, "product"),
    }
}

pub fn dbc_link(l: &LinkDesc) -> Cover {
    match l {
        LinkDesc::Unknot => Cover::leaf(Manifold::S3, "unknot"),
        LinkDesc::TwoBridge { p: 2, q } => Cover::leaf(Manifold::lens(2, *q), "hopf"),
        LinkDesc::TwoBridge { p, q } => Cover::leaf(Manifold::lens(*p, *q), "two-bridge"),
        LinkDesc::ConnSum(fs) => Cover::sum("link-sum", fs.iter().map(dbc_link).collect(), vec![]),
        LinkDesc::SplitUnion(fs) => {
            let handles = vec![Manifold::S1XS2; fs.len().saturating_sub(1)];
            Cover::sum("split", fs.iter().map(dbc_link).collect(), handles)
        }
        LinkDesc::Montesinos(fs) => {
            let text: Vec<String> = fs.iter().map(|f| f.to_string()).collect();
            Cover::leaf(Manifold::unknown(format!("SFS[S2: {}]", text.join(", "))), "montesinos-link")
        }
    }
}

/// Seifert fibered piece over the disk covering `T[b_1/a_1] + …`.
fn montesinos_piece(fs: &[Fraction]) -> Manifold {
    Manifold::SfsDisk(fs.iter().map(|f| (f.den(), f.num())).collect()).normalize()
}

pub fn dbc_tangle(t: &TangleExpr) -> Cover {
    match t {
        TangleExpr::Rational(_) => Cover::leaf(Manifold::SolidTorus, "rational"),
        TangleExpr::ConwaySum(_) => match t.montesinos_fractions() {
            Some(fs) => Cover::leaf(montesinos_piece(&fs), "montesinos-tangle"),
            None => Cover::leaf(Manifold::unknown(t.to_string()), "montesinos-tangle"),
        },
        TangleExpr::ConnSum(inner, link) => Cover::sum("tangle-sum", vec![dbc_tangle(inner), dbc_link(link)], vec![]),
        TangleExpr::Family(fam) => match family_cover(fam.section(), fam.p(), fam.fills()) {
            Ok(c) => c,
            Err(_) => Cover { manifold: Manifold::unknown(fam.to_string()), chain: vec![] },
        },
    }
}

pub fn dbc_shape(s: &FilledShape) -> Cover {
    match s {
        FilledShape::Tangle(t) => dbc_tangle(t),
        FilledShape::Link(l) => dbc_link(l),
        FilledShape::AlgebraicSum { part, summand } => {
            let half = Fraction::unit(2);
            match part.as_slice() {
                [a, b] if *summand == half && a.num() == 1 && *b == -*a && a.den() % 2 == 0 => Cover::leaf(
                    Manifold::union(Manifold::cable(2, 1), Manifold::q(a.den(), -a.den())),
                    "algebraic",
                ),
                _ => Cover::leaf(Manifold::unknown(s.to_string()), "algebraic"),
            }
        }
        FilledShape::TangleUnion(a, b) => {
            Cover::leaf(Manifold::union(montesinos_piece(a), montesinos_piece(b)), "tangle-union")
        }
        FilledShape::MontesinosLink { tangles } => Cover::leaf(
            Manifold::unknown(format!("small seifert, {tangles} fibers")),
            "montesinos-link",
        ),
    }
}

/// Rational tangle slope on the branch sphere to Dehn filling slope on the
/// covering torus. The lifted basis is chosen so this is the identity.
pub fn filling_slope(f: Fraction) -> Slope {
    Slope::new(f.num(), f.den()).expect("fractions are reduced")
}

/// The cover of a filled family instance, with its rule chain.
pub fn family_cover(section: Section, p: i64, fills: &BTreeMap<BoundaryLabel, Fraction>) -> Result<Cover, CoverError> {
    let id = fill_family(section, p, fills)?;
    let cover = dbc_shape(&id.shape);
    let expected = section.labels().len() - fills.len();
    let got = cover.manifold.boundary_count();
    if !matches!(cover.manifold, Manifold::Unknown(_)) && got != Some(expected) {
        return Err(CoverError::Boundary { what: id.shape.to_string(), expected, got });
    }
    Ok(cover)
}

pub fn family_manifold(
    section: Section,
    p: i64,
    fills: &BTreeMap<BoundaryLabel, Fraction>,
) -> Result<Manifold, CoverError> {
    Ok(family_cover(section, p, fills)?.manifold)
}
