//! Slopes on a torus and the arithmetic used to compare Dehn fillings.
//!
//! A slope is the class `a·m + b·l` of an essential simple closed curve,
//! stored as a coprime pair in canonical sign form: `b > 0`, except for the
//! meridian `∞ = 1/0`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("(0, 0) is not a slope")]
    Zero,
    #[error("slope {0}/{1} is not reduced")]
    NotReduced(i64, i64),
    #[error("cannot parse slope {0:?}")]
    Parse(String),
    #[error("basis change has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("distance system needs exactly two anchors, got {0}")]
    AnchorCount(usize),
    #[error("anchors coincide at {0}; the system is underdetermined")]
    EqualAnchors(Slope),
    #[error("anchor {0} has distance 0; compare slopes for equality instead")]
    ZeroDistance(Slope),
    #[error("arithmetic overflow")]
    Overflow,
}

/// A primitive curve class on a torus, always kept in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    a: i64,
    b: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { a: 1, b: 0 };
    pub const ZERO: Slope = Slope { a: 0, b: 1 };

    /// Builds the slope `a/b`, rejecting pairs that are not coprime.
    pub fn new(a: i64, b: i64) -> Result<Self, SlopeError> {
        if a == 0 && b == 0 {
            return Err(SlopeError::Zero);
        }
        if a.gcd(&b) != 1 {
            return Err(SlopeError::NotReduced(a, b));
        }
        Ok(Self::canonical(a, b))
    }

    /// Builds a slope from any nonzero pair, dividing out the common factor.
    pub fn reduced(a: i64, b: i64) -> Result<Self, SlopeError> {
        if a == 0 && b == 0 {
            return Err(SlopeError::Zero);
        }
        let g = a.gcd(&b);
        Ok(Self::canonical(a / g, b / g))
    }

    pub fn integer(n: i64) -> Self {
        Slope { a: n, b: 1 }
    }

    fn canonical(a: i64, b: i64) -> Self {
        if b < 0 || (b == 0 && a < 0) {
            Slope { a: -a, b: -b }
        } else {
            Slope { a, b }
        }
    }

    /// Meridian coefficient.
    pub fn a(&self) -> i64 {
        self.a
    }

    /// Longitude coefficient.
    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn is_infinite(&self) -> bool {
        self.b == 0
    }

    /// Minimal geometric intersection number `|a·d − b·c|`.
    pub fn distance(&self, other: &Slope) -> u64 {
        distance(*self, *other)
    }
}

pub fn distance(r: Slope, s: Slope) -> u64 {
    let det = r.a as i128 * s.b as i128 - r.b as i128 * s.a as i128;
    det.unsigned_abs() as u64
}

impl Ord for Slope {
    /// Orders by rational value, with `∞` last.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.b, other.b) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            _ => {
                let lhs = self.a as i128 * other.b as i128;
                let rhs = other.a as i128 * self.b as i128;
                lhs.cmp(&rhs)
            }
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.b {
            0 => write!(f, "inf"),
            1 => write!(f, "{}", self.a),
            b => write!(f, "{}/{}", self.a, b),
        }
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    /// Grammar: `inf` | `<int>` | `<int>/<positive-int>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SlopeError::Parse(s.to_string());
        if s == "inf" {
            return Ok(Slope::INFINITY);
        }
        match s.split_once('/') {
            None => parse_int(s).map(Slope::integer).ok_or_else(bad),
            Some((num, den)) => {
                let a = parse_int(num).ok_or_else(bad)?;
                if den.starts_with(['-', '+']) {
                    return Err(bad());
                }
                let b = parse_int(den).ok_or_else(bad)?;
                if b <= 0 {
                    return Err(bad());
                }
                Slope::new(a, b)
            }
        }
    }
}

fn parse_int(s: &str) -> Option<i64> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// An orientation-compatible change of torus basis.
///
/// Column `j` holds the image of the `j`-th old basis vector (`m`, then
/// `l`) written in the new basis `(m′, l′)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisChange {
    rows: [[i64; 2]; 2],
}

impl BasisChange {
    pub const IDENTITY: BasisChange = BasisChange {
        rows: [[1, 0], [0, 1]],
    };

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Result<Self, SlopeError> {
        let det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
        if det.abs() != 1 {
            return Err(SlopeError::NotUnimodular(det));
        }
        Ok(BasisChange { rows })
    }

    /// Builds the matrix from the images of `m` and `l`.
    pub fn from_images(fm: (i64, i64), fl: (i64, i64)) -> Result<Self, SlopeError> {
        Self::from_rows([[fm.0, fl.0], [fm.1, fl.1]])
    }

    /// `f(m) = m′`, `f(l) = l′ + k·m′`.
    pub fn shear(k: i64) -> Self {
        BasisChange {
            rows: [[1, k], [0, 1]],
        }
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        self.rows
    }

    pub fn determinant(&self) -> i64 {
        self.rows[0][0] * self.rows[1][1] - self.rows[0][1] * self.rows[1][0]
    }

    pub fn image_of_meridian(&self) -> (i64, i64) {
        (self.rows[0][0], self.rows[1][0])
    }

    pub fn image_of_longitude(&self) -> (i64, i64) {
        (self.rows[0][1], self.rows[1][1])
    }

    pub fn apply(&self, r: Slope) -> Slope {
        apply_basis_change(self, r)
    }
}

impl fmt::Display for BasisChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.rows;
        write!(f, "[[{a},{b}],[{c},{d}]]")
    }
}

/// Canonical form of `M·(a, b)`.
pub fn apply_basis_change(m: &BasisChange, r: Slope) -> Slope {
    let [[p, q], [s, t]] = m.rows;
    let a = p * r.a + q * r.b;
    let b = s * r.a + t * r.b;
    // A unimodular image of a primitive vector is primitive.
    Slope::canonical(a, b)
}

/// Every slope at the prescribed distances from two distinct anchors.
///
/// Each of the four sign systems `x·b_i − y·a_i = ±d_i` is a 2×2 integer
/// system whose determinant is `±Δ(r_1, r_2)`; only integral, primitive
/// solutions are slopes.
pub fn solve_distance_system(anchors: &[(Slope, u64)]) -> Result<Vec<Slope>, SlopeError> {
    let [(r1, d1), (r2, d2)] = anchors else {
        return Err(SlopeError::AnchorCount(anchors.len()));
    };
    if r1 == r2 {
        return Err(SlopeError::EqualAnchors(*r1));
    }
    for (r, d) in [(r1, d1), (r2, d2)] {
        if *d == 0 {
            return Err(SlopeError::ZeroDistance(*r));
        }
    }
    let (a1, b1) = (r1.a as i128, r1.b as i128);
    let (a2, b2) = (r2.a as i128, r2.b as i128);
    let det = a1 * b2 - b1 * a2;
    let mut found = BTreeSet::new();
    for e1 in [1i128, -1] {
        for e2 in [1i128, -1] {
            let rhs1 = e1 * *d1 as i128;
            let rhs2 = e2 * *d2 as i128;
            // [b1 -a1; b2 -a2] (x, y)^T = (rhs1, rhs2)^T
            let x_num = a1 * rhs2 - a2 * rhs1;
            let y_num = b1 * rhs2 - b2 * rhs1;
            if x_num % det != 0 || y_num % det != 0 {
                continue;
            }
            let x = i64::try_from(x_num / det).map_err(|_| SlopeError::Overflow)?;
            let y = i64::try_from(y_num / det).map_err(|_| SlopeError::Overflow)?;
            if let Ok(s) = Slope::new(x, y) {
                found.insert(s);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// A source slope and its image, the image known only up to sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlopeImage {
    pub source: Slope,
    pub image: Slope,
    pub sign_ambiguous: bool,
}

impl SlopeImage {
    pub fn ambiguous(source: Slope, image: Slope) -> Self {
        SlopeImage {
            source,
            image,
            sign_ambiguous: true,
        }
    }
}

/// All unimodular matrices sending each source slope to its image.
///
/// With two constraints `M·v_i = ε_i·w_i`, each sign choice determines `M`
/// uniquely; candidates that are not integral or not unimodular are
/// discarded. An empty result means the slope data is inconsistent.
pub fn pushforward_constraints(images: &[SlopeImage]) -> Result<Vec<BasisChange>, SlopeError> {
    let [c1, c2] = images else {
        return Err(SlopeError::AnchorCount(images.len()));
    };
    if c1.source == c2.source {
        return Err(SlopeError::EqualAnchors(c1.source));
    }
    let (v1, v2) = (c1.source, c2.source);
    let det = v1.a as i128 * v2.b as i128 - v2.a as i128 * v1.b as i128;
    let signs = |c: &SlopeImage| if c.sign_ambiguous { vec![1i128, -1] } else { vec![1i128] };
    let mut out = BTreeSet::new();
    for e1 in signs(c1) {
        for e2 in signs(c2) {
            let w1 = (e1 * c1.image.a as i128, e1 * c1.image.b as i128);
            let w2 = (e2 * c2.image.a as i128, e2 * c2.image.b as i128);
            // M = W · V^{-1}, V = [v1 v2], V^{-1} = adj(V)/det.
            let adj = [
                [v2.b as i128, -(v2.a as i128)],
                [-(v1.b as i128), v1.a as i128],
            ];
            let w = [[w1.0, w2.0], [w1.1, w2.1]];
            let mut rows = [[0i64; 2]; 2];
            let mut integral = true;
            for i in 0..2 {
                for j in 0..2 {
                    let num = w[i][0] * adj[0][j] + w[i][1] * adj[1][j];
                    if num % det != 0 {
                        integral = false;
                    } else {
                        rows[i][j] = i64::try_from(num / det).map_err(|_| SlopeError::Overflow)?;
                    }
                }
            }
            if !integral {
                continue;
            }
            if let Ok(m) = BasisChange::from_rows(rows) {
                out.insert(m);
            }
        }
    }
    Ok(out.into_iter().collect())
}
