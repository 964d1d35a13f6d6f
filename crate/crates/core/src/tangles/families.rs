//! Identification tables for filled family tangles.
//!
//! Each entry records what a filled instance of one of the three families
//! is, as read off hand-drawn isotopies. These are data, not derivations:
//! every entry is marked [`FIGURE_CLAIM`] and the harness checks it against
//! diagram invariants of the instantiated templates.

use std::collections::BTreeMap;
use std::fmt;

use super::{BoundaryLabel, Fraction, LinkDesc, Section, TangleError, TangleExpr};

pub const FIGURE_CLAIM: &str = "figure-claim";

/// The shape a filled family tangle is identified with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilledShape {
    /// A tangle in a ball.
    Tangle(TangleExpr),
    /// A closed link.
    Link(LinkDesc),
    /// A two-term Montesinos tangle summed with a rational tangle; not itself
    /// a Montesinos tangle.
    AlgebraicSum { part: Vec<Fraction>, summand: Fraction },
    /// Two Montesinos tangles glued along their boundary spheres; a closed
    /// link that is not a Montesinos link.
    TangleUnion(Vec<Fraction>, Vec<Fraction>),
    /// A Montesinos link with the given number of rational tangles whose
    /// fractions are not tabulated.
    MontesinosLink { tangles: usize },
}

impl FilledShape {
    pub fn is_closed(&self) -> bool {
        matches!(
            self,
            FilledShape::Link(_) | FilledShape::TangleUnion(..) | FilledShape::MontesinosLink { .. }
        )
    }
}

fn sum_text(fs: &[Fraction]) -> String {
    fs.iter().map(|f| format!("T[{f}]")).collect::<Vec<_>>().join(" + ")
}

impl fmt::Display for FilledShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilledShape::Tangle(t) => write!(f, "{t}"),
            FilledShape::Link(l) => write!(f, "{l}"),
            FilledShape::AlgebraicSum { part, summand } => {
                write!(f, "algebraic(({}) + T[{summand}])", sum_text(part))
            }
            FilledShape::TangleUnion(a, b) => write!(f, "union({}, {})", sum_text(a), sum_text(b)),
            FilledShape::MontesinosLink { tangles } => write!(f, "montesinos-link({tangles} tangles)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identification {
    pub section: Section,
    pub p: i64,
    pub fills: BTreeMap<BoundaryLabel, Fraction>,
    pub shape: FilledShape,
    pub provenance: &'static str,
    /// Short id of the claim this entry encodes.
    pub anchor: &'static str,
    /// Set when `p < 2`, outside the hyperbolic range.
    pub flagged: bool,
}

fn f(n: i64, d: i64) -> Result<Fraction, TangleError> {
    Fraction::reduced(n, d)
}

fn montesinos(fs: &[Fraction]) -> Result<FilledShape, TangleError> {
    Ok(FilledShape::Tangle(TangleExpr::montesinos(fs)?))
}

fn key(fills: &BTreeMap<BoundaryLabel, Fraction>) -> String {
    fills
        .iter()
        .map(|(l, f)| format!("{l}={f}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Looks up the tabulated identification of a filled family tangle.
pub fn fill_family(
    section: Section,
    p: i64,
    fills: &BTreeMap<BoundaryLabel, Fraction>,
) -> Result<Identification, TangleError> {
    for &label in fills.keys() {
        if !section.labels().contains(&label) {
            return Err(TangleError::BadLabel {
                section: section.number(),
                label,
            });
        }
    }
    let unknown = || TangleError::UnknownFill {
        section: section.number(),
        fills: key(fills),
    };
    let s0 = fills.get(&BoundaryLabel::S0).copied().ok_or_else(unknown)?;
    let s1 = fills.get(&BoundaryLabel::S1).copied();
    let (shape, anchor) = match (section, s1) {
        (Section::Two, None) => section_two(p, s0)?.ok_or_else(unknown)?,
        (Section::Three, s1) => section_three(p, s0, s1)?.ok_or_else(unknown)?,
        (Section::Four, None) => section_four(p, s0)?.ok_or_else(unknown)?,
        _ => return Err(unknown()),
    };
    Ok(Identification {
        section,
        p,
        fills: fills.clone(),
        shape,
        provenance: FIGURE_CLAIM,
        anchor,
        flagged: p < 2,
    })
}

type Entry = Option<(FilledShape, &'static str)>;

fn section_two(p: i64, s0: Fraction) -> Result<Entry, TangleError> {
    let entry = match (s0.num(), s0.den()) {
        (1, 0) => (
            FilledShape::Tangle(TangleExpr::conn_sum(
                TangleExpr::Rational(Fraction::ZERO),
                LinkDesc::HOPF,
            )),
            "L2.1(1)",
        ),
        (0, 1) => (montesinos(&[f(1, 2 * p - 1)?, f(-1, 2 * p + 1)?])?, "L2.1(2)"),
        (-1, 1) => (montesinos(&[f(1, 2 * p + 1)?, f(-1, 2 * p - 1)?])?, "L2.1(3)"),
        (-1, 2) => (
            FilledShape::AlgebraicSum {
                part: vec![f(1, 2 * p)?, f(-1, 2 * p)?],
                summand: f(1, 2)?,
            },
            "L2.1(4)",
        ),
        _ => return Ok(None),
    };
    Ok(Some(entry))
}

fn section_three(p: i64, s0: Fraction, s1: Option<Fraction>) -> Result<Entry, TangleError> {
    let entry = match ((s0.num(), s0.den()), s1.map(|s| (s.num(), s.den()))) {
        ((1, 0), None) => (
            FilledShape::Tangle(TangleExpr::conn_sum(
                TangleExpr::montesinos(&[f(1, 2)?, f(-1, 2)?])?,
                LinkDesc::HOPF,
            )),
            "L3.1(1)",
        ),
        ((0, 1), None) => (
            FilledShape::Tangle(TangleExpr::conn_sum(
                TangleExpr::montesinos(&[f(1, 2 * p)?, f(-1, 2 * p)?])?,
                LinkDesc::HOPF,
            )),
            "L3.1(2)",
        ),
        ((0, 1), Some((1, 0))) => (
            FilledShape::Link(LinkDesc::split_union([LinkDesc::HOPF, LinkDesc::Unknot])),
            "T3.6(0,inf)",
        ),
        ((e @ (1 | -1), 1), Some((1, 0))) => (
            FilledShape::Link(LinkDesc::conn_sum([LinkDesc::HOPF, LinkDesc::two_bridge(4, e)?])),
            "T3.6(1,inf)",
        ),
        _ => return Ok(None),
    };
    Ok(Some(entry))
}

fn section_four(p: i64, s0: Fraction) -> Result<Entry, TangleError> {
    let entry = match (s0.num(), s0.den()) {
        (1, 0) => (
            FilledShape::TangleUnion(vec![f(1, 2)?, f(-1, p + 2)?], vec![f(1, 2)?, f(1, p)?]),
            "L4.1(1)",
        ),
        (0, 1) => {
            // 1/((p−1) + 1/(p+3))
            let q = super::cf_eval(&[p - 1, p + 3])?.reciprocal();
            (FilledShape::Link(LinkDesc::two_bridge(q.den(), q.num())?), "L4.1(2)")
        }
        (1, 1) | (1, 2) => (FilledShape::MontesinosLink { tangles: 3 }, "L4.1(3)"),
        (1, 3) => (
            FilledShape::Link(LinkDesc::conn_sum([LinkDesc::TREFOIL, LinkDesc::HOPF])),
            "L4.1(4)",
        ),
        _ => return Ok(None),
    };
    Ok(Some(entry))
}

/// Every tabulated fill of a family, in table order.
pub fn tabulated_fills(section: Section) -> Vec<BTreeMap<BoundaryLabel, Fraction>> {
    let one = |n: i64, d: i64| {
        BTreeMap::from([(BoundaryLabel::S0, Fraction::reduced(n, d).expect("table fraction"))])
    };
    let two = |a: (i64, i64), b: (i64, i64)| {
        BTreeMap::from([
            (BoundaryLabel::S0, Fraction::reduced(a.0, a.1).expect("table fraction")),
            (BoundaryLabel::S1, Fraction::reduced(b.0, b.1).expect("table fraction")),
        ])
    };
    match section {
        Section::Two => vec![one(1, 0), one(0, 1), one(-1, 1), one(-1, 2)],
        Section::Three => vec![
            one(1, 0),
            one(0, 1),
            two((0, 1), (1, 0)),
            two((1, 1), (1, 0)),
            two((-1, 1), (1, 0)),
        ],
        Section::Four => vec![one(1, 0), one(0, 1), one(1, 1), one(1, 2), one(1, 3)],
    }
}
