use std::fmt;

use num_integer::Integer;

use super::{Fraction, TangleError};

/// A closed link described by its construction.
///
/// Constructors normalize: 2-bridge links keep `0 < q < p` with `q` the
/// smaller of `q` and `q⁻¹ mod p`, connected sums drop unknot factors, and
/// sums and split unions are flattened.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkDesc {
    Unknot,
    TwoBridge { p: i64, q: i64 },
    Montesinos(Vec<Fraction>),
    ConnSum(Vec<LinkDesc>),
    SplitUnion(Vec<LinkDesc>),
}

impl LinkDesc {
    pub const HOPF: LinkDesc = LinkDesc::TwoBridge { p: 2, q: 1 };
    pub const TREFOIL: LinkDesc = LinkDesc::TwoBridge { p: 3, q: 1 };

    /// The 2-bridge link `b(p, q)`; `b(1, ·)` is the unknot and `b(0, ·)`
    /// the two-component unlink.
    pub fn two_bridge(p: i64, q: i64) -> Result<LinkDesc, TangleError> {
        let p = p.abs();
        if p.gcd(&q) != 1 {
            return Err(TangleError::BadTwoBridge(p, q));
        }
        Ok(match p {
            0 => LinkDesc::SplitUnion(vec![LinkDesc::Unknot, LinkDesc::Unknot]),
            1 => LinkDesc::Unknot,
            _ => {
                let q = q.rem_euclid(p);
                let inv = mod_inverse(q, p).ok_or(TangleError::BadTwoBridge(p, q))?;
                LinkDesc::TwoBridge { p, q: q.min(inv) }
            }
        })
    }

    pub fn conn_sum(factors: impl IntoIterator<Item = LinkDesc>) -> LinkDesc {
        let mut flat = Vec::new();
        for f in factors {
            match f {
                LinkDesc::ConnSum(inner) => flat.extend(inner),
                LinkDesc::Unknot => {}
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => LinkDesc::Unknot,
            1 => flat.pop().unwrap_or(LinkDesc::Unknot),
            _ => LinkDesc::ConnSum(flat),
        }
    }

    pub fn split_union(parts: impl IntoIterator<Item = LinkDesc>) -> LinkDesc {
        let mut flat = Vec::new();
        for part in parts {
            match part {
                LinkDesc::SplitUnion(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => LinkDesc::Unknot,
            1 => flat.pop().unwrap_or(LinkDesc::Unknot),
            _ => LinkDesc::SplitUnion(flat),
        }
    }

    /// Number of link components.
    pub fn component_count(&self) -> usize {
        match self {
            LinkDesc::Unknot => 1,
            LinkDesc::TwoBridge { p, .. } => 2 - (*p as usize % 2),
            LinkDesc::Montesinos(fs) => montesinos_components(fs),
            LinkDesc::ConnSum(fs) => fs.iter().map(|f| f.component_count()).sum::<usize>() + 1 - fs.len(),
            LinkDesc::SplitUnion(fs) => fs.iter().map(|f| f.component_count()).sum(),
        }
    }

    /// The link determinant computed from the description alone.
    pub fn determinant(&self) -> Result<u64, TangleError> {
        Ok(match self {
            LinkDesc::Unknot => 1,
            LinkDesc::TwoBridge { p, .. } => *p as u64,
            LinkDesc::Montesinos(fs) => {
                let (num, _) = super::pair_sum(fs)?;
                num.unsigned_abs() as u64
            }
            LinkDesc::ConnSum(fs) => {
                let mut acc = 1u64;
                for f in fs {
                    acc = acc.checked_mul(f.determinant()?).ok_or(TangleError::Overflow)?;
                }
                acc
            }
            LinkDesc::SplitUnion(_) => 0,
        })
    }

    /// Oriented 2-bridge equivalence: same `p` and `q′ ≡ q^{±1} (mod p)`.
    pub fn two_bridge_equivalent(p: i64, q: i64, p2: i64, q2: i64) -> bool {
        p == p2 && (p <= 1 || residue_match(q, q2, p, false))
    }

    /// Unoriented 2-bridge equivalence: `q′ ≡ ±q^{±1} (mod p)`.
    pub fn two_bridge_equivalent_unoriented(p: i64, q: i64, p2: i64, q2: i64) -> bool {
        p == p2 && (p <= 1 || residue_match(q, q2, p, true))
    }
}

pub(crate) fn residue_match(q: i64, q2: i64, p: i64, allow_mirror: bool) -> bool {
    let q = q.rem_euclid(p);
    let q2 = q2.rem_euclid(p);
    let Some(inv) = mod_inverse(q, p) else {
        return false;
    };
    let mut targets = vec![q, inv];
    if allow_mirror {
        targets.extend([(p - q) % p, (p - inv) % p]);
    }
    targets.contains(&q2)
}

pub(crate) fn mod_inverse(q: i64, p: i64) -> Option<i64> {
    let e = q.rem_euclid(p).extended_gcd(&p);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(p))
}

fn montesinos_components(fs: &[Fraction]) -> usize {
    // Trace the two strands of each rational tangle through the sum: a
    // tangle with odd numerator joins the top and bottom boundary rows.
    // Represent each tangle's connectivity by the partner of NW.
    #[derive(Clone, Copy, PartialEq)]
    enum Conn {
        Horizontal, // NW–NE, SW–SE
        Vertical,   // NW–SW, NE–SE
        Cross,      // NW–SE, NE–SW
    }
    let conn = |f: &Fraction| match (f.num().rem_euclid(2), f.den().rem_euclid(2)) {
        (0, _) => Conn::Horizontal,
        (_, 0) => Conn::Vertical,
        _ => Conn::Cross,
    };
    // Ports: tangle i has NW=4i, NE=4i+1, SW=4i+2, SE=4i+3.
    let n = fs.len();
    let mut adj = vec![Vec::new(); 4 * n];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for (i, f) in fs.iter().enumerate() {
        let (nw, ne, sw, se) = (4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3);
        match conn(f) {
            Conn::Horizontal => {
                link(nw, ne, &mut adj);
                link(sw, se, &mut adj);
            }
            Conn::Vertical => {
                link(nw, sw, &mut adj);
                link(ne, se, &mut adj);
            }
            Conn::Cross => {
                link(nw, se, &mut adj);
                link(ne, sw, &mut adj);
            }
        }
        let j = (i + 1) % n;
        if i + 1 < n {
            link(ne, 4 * j, &mut adj);
            link(se, 4 * j + 2, &mut adj);
        }
    }
    // numerator closure of the whole sum
    if n > 0 {
        link(0, 4 * (n - 1) + 1, &mut adj);
        link(2, 4 * (n - 1) + 3, &mut adj);
    }
    let mut seen = vec![false; 4 * n];
    let mut count = 0;
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            stack.extend(adj[v].iter().copied().filter(|&w| !seen[w]));
        }
    }
    count
}

impl fmt::Display for LinkDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinkDesc::Unknot => write!(f, "unknot"),
            l if *l == LinkDesc::HOPF => write!(f, "hopf"),
            l if *l == LinkDesc::TREFOIL => write!(f, "trefoil"),
            LinkDesc::TwoBridge { p, q } => write!(f, "b({p},{q})"),
            LinkDesc::Montesinos(fs) => write!(f, "montesinos({})", join(fs, ", ")),
            LinkDesc::ConnSum(fs) => write!(f, "{}", join(fs, " # ")),
            LinkDesc::SplitUnion(fs) => write!(f, "split({})", join(fs, ", ")),
        }
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
}
