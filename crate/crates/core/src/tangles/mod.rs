//! Rational tangles, Conway sums, the tangle expression language, and
//! closures to link descriptions.

mod expr;
mod families;
mod fraction;
mod link;
mod parser;

pub use expr::{BoundaryLabel, FamilyTangle, Section, TangleExpr};
pub use families::{fill_family, tabulated_fills, FilledShape, Identification, FIGURE_CLAIM};
pub use fraction::{cf_eval, fraction_to_cf, Fraction};
pub use link::LinkDesc;
pub use parser::{parse_fraction, parse_input, parse_link, parse_tangle, DslItem};

pub(crate) use link::residue_match;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("{0}/{1} is not a reduced fraction with nonnegative denominator")]
    NotReduced(i64, i64),
    #[error("integer overflow")]
    Overflow,
    #[error("empty continued fraction")]
    EmptyContinuedFraction,
    #[error("continued fraction tail starting at coefficient {0} evaluates to zero")]
    DegenerateContinuedFraction(usize),
    #[error("infinity has no continued fraction expansion")]
    InfiniteFraction,
    #[error("b({0},{1}) needs coprime arguments")]
    BadTwoBridge(i64, i64),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Invariant(String),
    #[error("a Conway sum needs at least two terms")]
    ShortSum,
    #[error("family {section} has no boundary sphere {label}")]
    BadLabel { section: u8, label: BoundaryLabel },
    #[error("unknown family {0}; expected 2, 3 or 4")]
    BadSection(i64),
    #[error("tangle still has an unfilled boundary sphere: {0}")]
    Unfilled(String),
    #[error("no closure rule for {0}")]
    NotClosable(String),
    #[error("family {section} has no tabulated identification for fills {fills}")]
    UnknownFill { section: u8, fills: String },
}

/// `Σ β_i Π_{j≠i} α_i` and `Π α_i` for fractions `β_i/α_i`, unreduced.
///
/// The first entry is the determinant of the Montesinos link built from
/// the fractions, up to sign.
pub(crate) fn pair_sum(fs: &[Fraction]) -> Result<(i128, i128), TangleError> {
    let (mut num, mut den) = (0i128, 1i128);
    for f in fs {
        let (b, a) = (f.num() as i128, f.den() as i128);
        num = num
            .checked_mul(a)
            .and_then(|x| x.checked_add(b.checked_mul(den)?))
            .ok_or(TangleError::Overflow)?;
        den = den.checked_mul(a).ok_or(TangleError::Overflow)?;
    }
    Ok((num, den))
}

/// Closes a tangle expression into a link.
///
/// A rational tangle `q/p` closes to the 2-bridge link `b(p, q)`; a Conway
/// sum of rational tangles closes to the Montesinos link on its fractions;
/// a connected sum with a closed link closes to the link connected sum.
/// A fully filled family instance closes to its tabulated link.
pub fn numerator_closure(t: &TangleExpr) -> Result<LinkDesc, TangleError> {
    match t {
        TangleExpr::Rational(f) => LinkDesc::two_bridge(f.den(), f.num()),
        TangleExpr::ConwaySum(terms) => {
            let mut fractions = Vec::new();
            let mut closed = Vec::new();
            for term in terms {
                collect_sum_term(term, &mut fractions, &mut closed)?;
            }
            let body = match fractions.len() {
                0 => LinkDesc::Unknot,
                1 => LinkDesc::two_bridge(fractions[0].den(), fractions[0].num())?,
                _ => LinkDesc::Montesinos(fractions),
            };
            Ok(LinkDesc::conn_sum(std::iter::once(body).chain(closed)))
        }
        TangleExpr::ConnSum(inner, link) => {
            Ok(LinkDesc::conn_sum([numerator_closure(inner)?, link.clone()]))
        }
        TangleExpr::Family(fam) => {
            if !fam.is_closed() {
                return Err(TangleError::Unfilled(fam.to_string()));
            }
            match fill_family(fam.section(), fam.p(), fam.fills())?.shape {
                FilledShape::Link(l) => Ok(l),
                other => Err(TangleError::NotClosable(other.to_string())),
            }
        }
    }
}

fn collect_sum_term(
    term: &TangleExpr,
    fractions: &mut Vec<Fraction>,
    closed: &mut Vec<LinkDesc>,
) -> Result<(), TangleError> {
    match term {
        TangleExpr::Rational(f) => fractions.push(*f),
        TangleExpr::ConnSum(inner, link) => {
            collect_sum_term(inner, fractions, closed)?;
            closed.push(link.clone());
        }
        TangleExpr::ConwaySum(inner) => {
            for t in inner {
                collect_sum_term(t, fractions, closed)?;
            }
        }
        TangleExpr::Family(_) => return Err(TangleError::NotClosable(term.to_string())),
    }
    Ok(())
}
