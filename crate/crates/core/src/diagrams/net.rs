//! Tangle networks: crossings joined by wires, with four labelled outer
//! ports and any number of named unfilled spheres.
//!
//! Ports sit at the corners of a tangle picture:
//!
//! ```text
//!   NW      NE
//!     \    /
//!      ....
//!     /    \
//!   SW      SE
//! ```
//!
//! A crossing is stored as the four port ids read counterclockwise starting
//! from the incoming under-strand; the under-strand runs between positions
//! 0 and 2, the over-strand between 1 and 3.

use std::collections::BTreeMap;

use crate::tangles::{cf_eval, fraction_to_cf, Fraction};

use super::{Diagram, DiagramError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    NW,
    NE,
    SW,
    SE,
}

impl Port {
    pub const ALL: [Port; 4] = [Port::NW, Port::NE, Port::SW, Port::SE];

    fn index(self) -> usize {
        self as usize
    }

    pub fn parse(s: &str) -> Option<Port> {
        match s {
            "NW" => Some(Port::NW),
            "NE" => Some(Port::NE),
            "SW" => Some(Port::SW),
            "SE" => Some(Port::SE),
            _ => None,
        }
    }
}

impl std::fmt::Display for Port {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

type Corners = [u32; 4];

#[derive(Debug, Clone, Default)]
pub struct Net {
    pub(crate) next: u32,
    pub(crate) crossings: Vec<Corners>,
    pub(crate) wires: Vec<(u32, u32)>,
    pub(crate) ports: Option<Corners>,
    pub(crate) spheres: BTreeMap<String, Corners>,
}

/// A flattened network: its diagram and which endpoint is which port.
#[derive(Debug, Clone)]
pub struct Flat {
    pub diagram: Diagram,
    /// For each entry of `diagram.endpoints()`, the sphere and port it sits
    /// on. The outer boundary of an open tangle is named `""`.
    pub ends: Vec<(String, Port)>,
}

impl Net {
    fn corners(&mut self) -> Corners {
        let c = [self.next, self.next + 1, self.next + 2, self.next + 3];
        self.next += 4;
        c
    }

    fn outer(&self) -> Corners {
        self.ports.expect("network has outer ports")
    }

    pub fn port(&self, q: Port) -> Option<u32> {
        self.ports.map(|p| p[q.index()])
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// One crossing with strands NW–SE and SW–NE. `positive` puts the
    /// NW–SE strand on top.
    pub fn crossing(positive: bool) -> Net {
        let mut t = Net::default();
        let c = t.corners();
        let [nw, ne, sw, se] = c;
        t.crossings.push(if positive { [sw, se, ne, nw] } else { [nw, sw, se, ne] });
        t.ports = Some(c);
        t
    }

    /// The `0` tangle: two horizontal strands.
    pub fn zero() -> Net {
        let mut t = Net::default();
        let c = t.corners();
        let [nw, ne, sw, se] = c;
        t.wires.extend([(nw, ne), (sw, se)]);
        t.ports = Some(c);
        t
    }

    /// An empty 4-ended hole to be filled later.
    pub fn sphere(name: &str) -> Net {
        let mut t = Net::default();
        let c = t.corners();
        t.ports = Some(c);
        t.spheres.insert(name.to_string(), c);
        t
    }

    /// `n` horizontal half twists, the integer tangle `n`.
    pub fn integer(n: i64) -> Net {
        if n == 0 {
            return Net::zero();
        }
        let mut t = Net::crossing(n > 0);
        for _ in 1..n.unsigned_abs() {
            t = t.sum(&Net::crossing(n > 0));
        }
        t
    }

    /// The standard twist diagram of the rational tangle `f`, built from the
    /// continued fraction `a_1 + 1/(a_2 + …)`.
    pub fn rational(f: Fraction) -> Net {
        if f.is_infinite() {
            return Net::zero().rot();
        }
        let cf = fraction_to_cf(f).expect("finite fraction");
        debug_assert_eq!(cf_eval(&cf).ok(), Some(f));
        let (last, rest) = cf.split_last().expect("nonempty expansion");
        let mut t = Net::integer(*last);
        for &a in rest.iter().rev() {
            t = if a == 0 { t.invert() } else { Net::integer(a).sum(&t.invert()) };
        }
        t
    }

    pub(crate) fn merge(&self, other: &Net) -> (Net, u32) {
        let off = self.next;
        let shift = |c: &Corners| c.map(|x| x + off);
        let mut t = self.clone();
        t.next += other.next;
        t.crossings.extend(other.crossings.iter().map(shift));
        t.wires.extend(other.wires.iter().map(|&(a, b)| (a + off, b + off)));
        for (k, v) in &other.spheres {
            t.spheres.insert(k.clone(), shift(v));
        }
        (t, off)
    }

    /// Conway sum: `other` placed to the right.
    pub fn sum(&self, other: &Net) -> Net {
        let (a, b) = (self.outer(), other.outer());
        let (mut t, off) = self.merge(other);
        let [anw, ane, asw, ase] = a;
        let [bnw, bne, bsw, bse] = b.map(|x| x + off);
        t.wires.extend([(ane, bnw), (ase, bsw)]);
        t.ports = Some([anw, bne, asw, bse]);
        t
    }

    /// Quarter turn; the fraction `f` becomes `-1/f`.
    pub fn rot(&self) -> Net {
        let [nw, ne, sw, se] = self.outer();
        let mut t = self.clone();
        t.ports = Some([ne, se, nw, sw]);
        t
    }

    /// Switches every crossing; the fraction `f` becomes `-f`.
    pub fn mirror(&self) -> Net {
        let mut t = self.clone();
        for c in &mut t.crossings {
            c.rotate_left(1);
        }
        t
    }

    /// `f` becomes `1/f`.
    pub fn invert(&self) -> Net {
        self.rot().mirror()
    }

    /// Plugs `filler` into the sphere `name`, port to port.
    pub fn fill(&self, name: &str, filler: &Net) -> Result<Net, DiagramError> {
        let hole = *self
            .spheres
            .get(name)
            .ok_or_else(|| DiagramError::UnknownSphere(name.to_string()))?;
        let outer = filler.outer();
        let (mut t, off) = self.merge(filler);
        t.spheres.remove(name);
        for q in Port::ALL {
            t.wires.push((hole[q.index()], outer[q.index()] + off));
        }
        t.ports = self.ports;
        Ok(t)
    }

    /// Joins NW–NE and SW–SE.
    pub fn numerator_closure(&self) -> Net {
        let [nw, ne, sw, se] = self.outer();
        let mut t = self.clone();
        t.wires.extend([(nw, ne), (sw, se)]);
        t.ports = None;
        t
    }

    /// Joins NW–SW and NE–SE.
    pub fn denominator_closure(&self) -> Net {
        let [nw, ne, sw, se] = self.outer();
        let mut t = self.clone();
        t.wires.extend([(nw, sw), (ne, se)]);
        t.ports = None;
        t
    }

    /// `N(self + other)`: `other` fills the outside of `self`.
    pub fn close_with(&self, other: &Net) -> Net {
        self.sum(other).numerator_closure()
    }

    /// Flattens wires into arc labels.
    pub fn flatten(&self) -> Result<Flat, DiagramError> {
        let n = self.next as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.wires {
            let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
            parent[ra] = rb;
        }
        let mut ends: Vec<(String, Port, u32)> = Vec::new();
        if let Some(p) = self.ports {
            for q in Port::ALL {
                ends.push((String::new(), q, p[q.index()]));
            }
        }
        for (name, c) in &self.spheres {
            for q in Port::ALL {
                ends.push((name.clone(), q, c[q.index()]));
            }
        }
        let mut uses = vec![0u8; n];
        let mut size = vec![0u32; n];
        for x in 0..n {
            size[find(&mut parent, x)] += 1;
        }
        for c in &self.crossings {
            for &x in c {
                uses[find(&mut parent, x as usize)] += 1;
            }
        }
        for e in &ends {
            uses[find(&mut parent, e.2 as usize)] += 1;
        }
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut loops = 0u32;
        for x in 0..n {
            if find(&mut parent, x) != x {
                continue;
            }
            match uses[x] {
                0 if size[x] > 1 => loops += 1,
                0 => {}
                2 => {
                    label[x] = next;
                    next += 1;
                }
                k => return Err(DiagramError::Malformed(format!("strand with {k} ends"))),
            }
        }
        let mut lab = |x: u32| label[find(&mut parent, x as usize)];
        let crossings = self.crossings.iter().map(|c| c.map(&mut lab)).collect();
        let endpoints = ends.iter().map(|e| lab(e.2)).collect();
        let diagram = Diagram::new(crossings, endpoints, loops)?;
        Ok(Flat {
            diagram,
            ends: ends.into_iter().map(|(s, q, _)| (s, q)).collect(),
        })
    }
}
