use std::collections::BTreeMap;
use std::fmt;

use super::{Fraction, LinkDesc, TangleError};

/// Which of the three parametric families a tangle instance belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Section {
    Two,
    Three,
    Four,
}

impl Section {
    pub fn from_number(n: i64) -> Result<Section, TangleError> {
        match n {
            2 => Ok(Section::Two),
            3 => Ok(Section::Three),
            4 => Ok(Section::Four),
            other => Err(TangleError::BadSection(other)),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Section::Two => 2,
            Section::Three => 3,
            Section::Four => 4,
        }
    }

    /// Boundary spheres of the unfilled tangle.
    pub fn labels(self) -> &'static [BoundaryLabel] {
        match self {
            Section::Two | Section::Three => &[BoundaryLabel::S0, BoundaryLabel::S1],
            Section::Four => &[BoundaryLabel::S0],
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryLabel {
    S0,
    S1,
}

impl fmt::Display for BoundaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryLabel::S0 => "S0",
            BoundaryLabel::S1 => "S1",
        })
    }
}

/// A family instance with some of its boundary spheres filled.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FamilyTangle {
    section: Section,
    p: i64,
    fills: BTreeMap<BoundaryLabel, Fraction>,
}

impl FamilyTangle {
    pub fn new(
        section: Section,
        p: i64,
        fills: BTreeMap<BoundaryLabel, Fraction>,
    ) -> Result<FamilyTangle, TangleError> {
        for &label in fills.keys() {
            if !section.labels().contains(&label) {
                return Err(TangleError::BadLabel {
                    section: section.number(),
                    label,
                });
            }
        }
        Ok(FamilyTangle { section, p, fills })
    }

    pub fn section(&self) -> Section {
        self.section
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn fills(&self) -> &BTreeMap<BoundaryLabel, Fraction> {
        &self.fills
    }

    /// `p < 2` lies outside the range where the family is hyperbolic.
    pub fn is_flagged(&self) -> bool {
        self.p < 2
    }

    pub fn unfilled(&self) -> usize {
        self.section.labels().len() - self.fills.len()
    }

    pub fn is_closed(&self) -> bool {
        self.unfilled() == 0
    }
}

impl fmt::Display for FamilyTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family({}, p={}", self.section, self.p)?;
        for (label, frac) in &self.fills {
            write!(f, ", {label}={frac}")?;
        }
        write!(f, ")")
    }
}

/// A tangle built from rational tangles by Conway sums and connected sums
/// with closed links, or a family instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TangleExpr {
    Rational(Fraction),
    /// At least two terms, none of them a sum.
    ConwaySum(Vec<TangleExpr>),
    ConnSum(Box<TangleExpr>, LinkDesc),
    Family(FamilyTangle),
}

impl TangleExpr {
    pub fn rational(f: Fraction) -> TangleExpr {
        TangleExpr::Rational(f)
    }

    /// Flattening constructor for Conway sums.
    pub fn sum(terms: impl IntoIterator<Item = TangleExpr>) -> Result<TangleExpr, TangleError> {
        let mut flat = Vec::new();
        for t in terms {
            match t {
                TangleExpr::ConwaySum(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() < 2 {
            return Err(TangleError::ShortSum);
        }
        Ok(TangleExpr::ConwaySum(flat))
    }

    /// `T[f_1] + T[f_2] + …`.
    pub fn montesinos(fs: &[Fraction]) -> Result<TangleExpr, TangleError> {
        Self::sum(fs.iter().map(|&f| TangleExpr::Rational(f)))
    }

    pub fn conn_sum(t: TangleExpr, link: LinkDesc) -> TangleExpr {
        TangleExpr::ConnSum(Box::new(t), link)
    }

    /// The fractions of a sum of rational tangles, if that is what this is.
    pub fn montesinos_fractions(&self) -> Option<Vec<Fraction>> {
        match self {
            TangleExpr::ConwaySum(terms) => terms
                .iter()
                .map(|t| match t {
                    TangleExpr::Rational(f) => Some(*f),
                    _ => None,
                })
                .collect(),
            _ => None,
        }
    }
}

impl fmt::Display for TangleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TangleExpr::Rational(frac) => write!(f, "T[{frac}]"),
            TangleExpr::ConwaySum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            TangleExpr::ConnSum(t, link) => write!(f, "connsum({t}, {link})"),
            TangleExpr::Family(fam) => write!(f, "{fam}"),
        }
    }
}
