//! Symbolic 3-manifolds: the handful of classes that show up as double
//! branched covers of the filled families, with normal forms and a
//! conservative homeomorphism test.

use std::fmt;

use num_integer::Integer;

use crate::slopes::Slope;
use crate::tangles::residue_match;

/// An exceptional fiber `(alpha, beta)`, `alpha ≥ 2`, `gcd(alpha, beta) = 1`.
pub type Fiber = (i64, i64);

/// Two pieces glued along a boundary torus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gluing {
    pub left: usize,
    pub right: usize,
    /// Whether the gluing torus is essential in the union.
    pub essential: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Manifold {
    Lens { p: i64, q: i64 },
    /// Seifert fibered over the disk with the given exceptional fibers.
    SfsDisk(Vec<Fiber>),
    SolidTorus,
    TorusI,
    Cable { r: i64, s: i64 },
    ConnSum(Vec<Manifold>),
    GraphUnion { pieces: Vec<Manifold>, gluings: Vec<Gluing> },
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum H1Order {
    Finite(u64),
    Infinite,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Flags {
    pub reducible: bool,
    pub boundary_reducible: bool,
    pub toroidal: bool,
    pub annular: bool,
    pub seifert_fibered: bool,
    pub lens: bool,
}

impl Manifold {
    pub const S3: Manifold = Manifold::Lens { p: 1, q: 0 };
    pub const RP3: Manifold = Manifold::Lens { p: 2, q: 1 };
    pub const S1XS2: Manifold = Manifold::Lens { p: 0, q: 1 };

    pub fn lens(p: i64, q: i64) -> Manifold {
        Manifold::Lens { p, q }.normalize()
    }

    /// The double branched cover of the Montesinos tangle `T[1/r, 1/s]`.
    pub fn q(r: i64, s: i64) -> Manifold {
        Manifold::SfsDisk(vec![(r.abs(), r.signum()), (s.abs(), s.signum())]).normalize()
    }

    pub fn cable(r: i64, s: i64) -> Manifold {
        Manifold::Cable { r, s }
    }

    pub fn conn_sum(factors: impl IntoIterator<Item = Manifold>) -> Manifold {
        Manifold::ConnSum(factors.into_iter().collect()).normalize()
    }

    /// Two pieces glued along an essential torus.
    pub fn union(a: Manifold, b: Manifold) -> Manifold {
        Manifold::GraphUnion {
            pieces: vec![a, b],
            gluings: vec![Gluing { left: 0, right: 1, essential: true }],
        }
        .normalize()
    }

    pub fn unknown(tag: impl Into<String>) -> Manifold {
        Manifold::Unknown(tag.into())
    }

    pub fn normalize(&self) -> Manifold {
        match self {
            Manifold::Lens { p, q } => normal_lens(*p, *q),
            Manifold::SfsDisk(fibers) => {
                let mut fs: Vec<Fiber> = Vec::new();
                for &(a, b) in fibers {
                    let (a, b) = if a < 0 { (-a, -b) } else { (a, b) };
                    if a == 0 || a.gcd(&b) != 1 {
                        return Manifold::Unknown(format!("fibers {fibers:?}"));
                    }
                    if a >= 2 {
                        fs.push((a, b));
                    }
                }
                if fs.len() <= 1 {
                    return Manifold::SolidTorus;
                }
                fs.sort_by_key(|&(a, b)| (a, -b));
                Manifold::SfsDisk(fs)
            }
            Manifold::Cable { r, s } => Manifold::Cable { r: *r, s: *s },
            Manifold::ConnSum(fs) => {
                let mut out = Vec::new();
                for f in fs {
                    match f.normalize() {
                        Manifold::ConnSum(inner) => out.extend(inner),
                        m if m == Manifold::S3 => {}
                        m => out.push(m),
                    }
                }
                out.sort();
                match out.len() {
                    0 => Manifold::S3,
                    1 => out.pop().expect("one factor"),
                    _ => Manifold::ConnSum(out),
                }
            }
            Manifold::GraphUnion { pieces, gluings } => {
                let pieces: Vec<Manifold> = pieces.iter().map(Manifold::normalize).collect();
                if gluings.is_empty() && pieces.len() == 1 {
                    return pieces[0].clone();
                }
                Manifold::GraphUnion { pieces, gluings: gluings.clone() }
            }
            m => m.clone(),
        }
    }

    /// Number of boundary tori, when it follows from the constructors.
    pub fn boundary_count(&self) -> Option<usize> {
        match self {
            Manifold::Lens { .. } => Some(0),
            Manifold::SfsDisk(_) | Manifold::SolidTorus => Some(1),
            Manifold::TorusI | Manifold::Cable { .. } => Some(2),
            Manifold::ConnSum(fs) => fs.iter().map(Manifold::boundary_count).sum(),
            Manifold::GraphUnion { pieces, gluings } => {
                let total: usize = pieces.iter().map(Manifold::boundary_count).sum::<Option<usize>>()?;
                total.checked_sub(2 * gluings.len())
            }
            Manifold::Unknown(_) => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_count() == Some(0)
    }

    pub fn h1_order(&self) -> H1Order {
        let m = self.normalize();
        if !m.is_closed() {
            return H1Order::NotApplicable;
        }
        let factors = match &m {
            Manifold::ConnSum(fs) => fs.clone(),
            other => vec![other.clone()],
        };
        let mut order: u64 = 1;
        for f in factors {
            match f {
                Manifold::Lens { p: 0, .. } => return H1Order::Infinite,
                Manifold::Lens { p, .. } => order *= p as u64,
                _ => return H1Order::NotApplicable,
            }
        }
        H1Order::Finite(order)
    }

    pub fn classify_flags(&self) -> Flags {
        let m = self.normalize();
        let mut f = Flags::default();
        match &m {
            Manifold::Lens { p, .. } => {
                f.seifert_fibered = true;
                f.lens = true;
                f.reducible = *p == 0;
            }
            Manifold::SfsDisk(_) | Manifold::TorusI => f.seifert_fibered = true,
            Manifold::SolidTorus => {
                f.seifert_fibered = true;
                f.boundary_reducible = true;
            }
            Manifold::Cable { .. } => {
                f.seifert_fibered = true;
                f.annular = true;
            }
            Manifold::ConnSum(fs) => {
                f.reducible = fs.len() >= 2 || fs.contains(&Manifold::S1XS2);
                f.boundary_reducible = fs.contains(&Manifold::SolidTorus);
            }
            Manifold::GraphUnion { pieces, gluings } => {
                f.toroidal = gluings.iter().any(|g| g.essential);
                f.seifert_fibered = !f.toroidal && pieces.iter().all(|p| p.classify_flags().seifert_fibered);
                f.annular = pieces.iter().any(|p| p.classify_flags().annular);
            }
            Manifold::Unknown(_) => {}
        }
        f
    }

    fn prime_factors(&self) -> Vec<Manifold> {
        match self {
            Manifold::ConnSum(fs) => fs.clone(),
            m => vec![m.clone()],
        }
    }
}

fn normal_lens(p: i64, q: i64) -> Manifold {
    let (p, q) = if p < 0 { (-p, -q) } else { (p, q) };
    match p {
        0 => Manifold::S1XS2,
        1 => Manifold::S3,
        _ if q.gcd(&p) != 1 => Manifold::Unknown(format!("L({p},{q})")),
        _ => Manifold::Lens { p, q: q.rem_euclid(p) },
    }
}

/// Unoriented lens space equivalence, `q′ ≡ ±q^{±1} (mod p)`.
pub fn lens_equivalent(p: i64, q: i64, p2: i64, q2: i64) -> bool {
    p == p2 && (p <= 1 || residue_match(q, q2, p, true))
}

/// Orientation-preserving lens space equivalence, `q′ ≡ q^{±1} (mod p)`.
pub fn lens_equivalent_oriented(p: i64, q: i64, p2: i64, q2: i64) -> bool {
    p == p2 && (p <= 1 || residue_match(q, q2, p, false))
}

fn fiber_orders(fs: &[Fiber]) -> Vec<i64> {
    let mut v: Vec<i64> = fs.iter().map(|f| f.0).collect();
    v.sort();
    v
}

/// Betas reduced mod alpha, sorted; the second form is the mirror image.
fn fiber_classes(fs: &[Fiber]) -> [Vec<Fiber>; 2] {
    [1, -1].map(|sign| {
        let mut v: Vec<Fiber> = fs.iter().map(|&(a, b)| (a, (sign * b).rem_euclid(a))).collect();
        v.sort();
        v
    })
}

pub fn homeomorphic(m1: &Manifold, m2: &Manifold) -> Decision {
    let (a, b) = (m1.normalize(), m2.normalize());
    if let (Some(x), Some(y)) = (a.boundary_count(), b.boundary_count()) {
        if x != y {
            return Decision::No;
        }
    }
    if let (H1Order::Finite(_) | H1Order::Infinite, H1Order::Finite(_) | H1Order::Infinite) = (a.h1_order(), b.h1_order())
    {
        if a.h1_order() != b.h1_order() {
            return Decision::No;
        }
    }
    let (fa, fb) = (a.prime_factors(), b.prime_factors());
    if fa.len() > 1 || fb.len() > 1 {
        if fa.iter().chain(&fb).any(|m| matches!(m, Manifold::Unknown(_))) {
            return Decision::Unknown;
        }
        if fa.len() != fb.len() {
            return Decision::No;
        }
        return match_factors(&fa, &fb);
    }
    prime_homeomorphic(&a, &b)
}

/// Best decision over all pairings of the two factor lists.
fn match_factors(fa: &[Manifold], fb: &[Manifold]) -> Decision {
    let Some((first, rest)) = fa.split_first() else {
        return Decision::Yes;
    };
    let mut best = Decision::No;
    for (i, g) in fb.iter().enumerate() {
        let here = homeomorphic(first, g);
        if here == Decision::No {
            continue;
        }
        let mut others = fb.to_vec();
        others.remove(i);
        let d = match (here, match_factors(rest, &others)) {
            (_, Decision::No) => Decision::No,
            (Decision::Yes, Decision::Yes) => Decision::Yes,
            _ => Decision::Unknown,
        };
        if d == Decision::Yes {
            return d;
        }
        if d == Decision::Unknown {
            best = Decision::Unknown;
        }
    }
    best
}

fn prime_homeomorphic(a: &Manifold, b: &Manifold) -> Decision {
    use Manifold::*;
    match (a, b) {
        (Unknown(_), _) | (_, Unknown(_)) => Decision::Unknown,
        (Lens { p, q }, Lens { p: p2, q: q2 }) => decide(lens_equivalent(*p, *q, *p2, *q2)),
        (SolidTorus, SolidTorus) | (TorusI, TorusI) => Decision::Yes,
        (SfsDisk(x), SfsDisk(y)) => {
            if fiber_orders(x) != fiber_orders(y) {
                Decision::No
            } else if fiber_classes(y).contains(&fiber_classes(x)[0]) {
                Decision::Yes
            } else {
                Decision::Unknown
            }
        }
        (SolidTorus, SfsDisk(_)) | (SfsDisk(_), SolidTorus) => Decision::No,
        (Cable { r, s }, Cable { r: r2, s: s2 }) => {
            if r.abs() != r2.abs() {
                Decision::No
            } else if s.rem_euclid(*r) == s2.rem_euclid(*r) || (-s).rem_euclid(*r) == s2.rem_euclid(*r) {
                Decision::Yes
            } else {
                Decision::Unknown
            }
        }
        (GraphUnion { .. }, GraphUnion { .. }) if a == b => Decision::Yes,
        _ => {
            let (x, y) = (a.classify_flags(), b.classify_flags());
            if (x.toroidal && !x.seifert_fibered && y.seifert_fibered)
                || (y.toroidal && !y.seifert_fibered && x.seifert_fibered)
            {
                Decision::No
            } else {
                Decision::Unknown
            }
        }
    }
}

fn decide(b: bool) -> Decision {
    if b {
        Decision::Yes
    } else {
        Decision::No
    }
}

/// Fills a cable space along a slope. Only the cabling slope is understood:
/// it yields `L(r, s) # S¹×D²`.
pub fn cable_fill(c: &Manifold, r: Slope, cabling_slope: Slope) -> Manifold {
    match c {
        Manifold::Cable { r: rc, s: sc } if r == cabling_slope => {
            Manifold::conn_sum([Manifold::lens(*rc, *sc), Manifold::SolidTorus])
        }
        _ => Manifold::unknown(format!("{c}({r})")),
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::Lens { p: 1, .. } => write!(f, "S3"),
            Manifold::Lens { p: 0, .. } => write!(f, "S1xS2"),
            Manifold::Lens { p: 2, q: 1 } => write!(f, "RP3"),
            Manifold::Lens { p, q } => write!(f, "L({p},{q})"),
            Manifold::SfsDisk(fs) => {
                let parts: Vec<String> = fs
                    .iter()
                    .map(|&(a, b)| match b {
                        1 => a.to_string(),
                        -1 => (-a).to_string(),
                        _ => format!("{a}/{b}"),
                    })
                    .collect();
                write!(f, "Q({})", parts.join(","))
            }
            Manifold::SolidTorus => write!(f, "SolidTorus"),
            Manifold::TorusI => write!(f, "T2xI"),
            Manifold::Cable { r, s } => write!(f, "C({r},{s})"),
            Manifold::ConnSum(fs) => {
                let parts: Vec<String> = fs.iter().map(|m| m.to_string()).collect();
                write!(f, "{}", parts.join(" # "))
            }
            Manifold::GraphUnion { pieces, .. } => {
                let parts: Vec<String> = pieces.iter().map(|m| m.to_string()).collect();
                write!(f, "Union[{}]", parts.join(" ~ "))
            }
            Manifold::Unknown(tag) => write!(f, "Unknown({tag})"),
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Unknown => "unknown",
        })
    }
}

impl fmt::Display for H1Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            H1Order::Finite(n) => write!(f, "{n}"),
            H1Order::Infinite => write!(f, "infinite"),
            H1Order::NotApplicable => write!(f, "n/a"),
        }
    }
}
