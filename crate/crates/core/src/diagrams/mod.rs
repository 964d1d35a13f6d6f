//! Planar diagrams in PD form, component tracing, linking numbers and the
//! link determinant.
//!
//! Crossings are written counterclockwise from the incoming under-strand,
//! which runs from position 0 to position 2. The sign is `+1` when the
//! over-strand runs from position 3 to position 1:
//!
//! ```text
//!          2                    2
//!          ^                    ^
//!          |                    |
//!   3 ----------> 1      3 <---------- 1
//!          |                    |
//!          0                    0
//!         +1                   -1
//! ```

mod bracket;
mod net;
mod template;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bracket::{determinant, determinant_with_budget, CROSSING_BUDGET};
pub use net::{Flat, Net, Port};
pub use template::{builtin_template, instantiate, Instance, PExpr, TemplateCheck, TwistTemplate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("arc label {0} appears {1} times; every label must appear exactly twice")]
    LabelCount(u32, usize),
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("the diagram has {0} endpoints; the operation needs a closed diagram")]
    Open(usize),
    #[error("{0} crossings exceed the state-sum budget of {1}")]
    OverBudget(usize, usize),
    #[error("state sum produced a non-square norm {0}")]
    NotSquare(i128),
    #[error("no sphere named {0}")]
    UnknownSphere(String),
    #[error("component index {0} out of range")]
    NoComponent(usize),
    #[error("linking number needs two distinct components")]
    SameComponent,
    #[error("template: {0}")]
    Template(String),
    #[error("p = {p} is below the template minimum {min}")]
    PRange { p: i64, min: i64 },
    #[error("cannot parse diagram: {0}")]
    Parse(String),
}

/// Where an arc end sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Site {
    Crossing(usize, usize),
    End(usize),
}

/// Traversal steps of one component and the endpoint indices it meets.
type Traced = (Vec<(u32, Site)>, Vec<usize>);

/// A link or tangle diagram.
///
/// `loops` counts crossingless circles, which carry no arc label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    crossings: Vec<[u32; 4]>,
    #[serde(default)]
    endpoints: Vec<u32>,
    #[serde(default)]
    loops: u32,
}

/// One traced component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Arc labels in traversal order.
    pub arcs: Vec<u32>,
    /// Indices into the diagram's endpoint list; two for an arc, none for a
    /// circle.
    pub ends: Vec<usize>,
}

impl Component {
    pub fn is_closed(&self) -> bool {
        self.ends.is_empty()
    }
}

impl Diagram {
    pub fn new(
        crossings: Vec<[u32; 4]>,
        endpoints: Vec<u32>,
        loops: u32,
    ) -> Result<Diagram, DiagramError> {
        let d = Diagram { crossings, endpoints, loops };
        d.validate()?;
        Ok(d)
    }

    pub fn closed(crossings: Vec<[u32; 4]>) -> Result<Diagram, DiagramError> {
        Diagram::new(crossings, Vec::new(), 0)
    }

    pub fn unknot() -> Diagram {
        Diagram { crossings: Vec::new(), endpoints: Vec::new(), loops: 1 }
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let mut count: BTreeMap<u32, usize> = BTreeMap::new();
        for &a in self.crossings.iter().flatten().chain(&self.endpoints) {
            *count.entry(a).or_default() += 1;
        }
        if let Some((&a, &k)) = count.iter().find(|(_, &k)| k != 2) {
            return Err(DiagramError::LabelCount(a, k));
        }
        if !matches!(self.endpoints.len(), 0 | 4 | 8) {
            return Err(DiagramError::Malformed(format!(
                "{} endpoints; expected 0, 4 or 8",
                self.endpoints.len()
            )));
        }
        Ok(())
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn endpoints(&self) -> &[u32] {
        &self.endpoints
    }

    pub fn loops(&self) -> u32 {
        self.loops
    }

    pub fn is_closed(&self) -> bool {
        self.endpoints.is_empty()
    }

    fn sites(&self) -> BTreeMap<u32, [Site; 2]> {
        let mut occ: BTreeMap<u32, Vec<Site>> = BTreeMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            for (j, &a) in c.iter().enumerate() {
                occ.entry(a).or_default().push(Site::Crossing(i, j));
            }
        }
        for (k, &a) in self.endpoints.iter().enumerate() {
            occ.entry(a).or_default().push(Site::End(k));
        }
        occ.into_iter().map(|(a, v)| (a, [v[0], v[1]])).collect()
    }

    /// Walks every component. Each traversal step is `(arc, site)`: the arc
    /// enters the diagram element at `site`.
    fn trace(&self) -> Vec<Traced> {
        let sites = self.sites();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        let other = |a: u32, s: Site| {
            let [x, y] = sites[&a];
            if x == s {
                y
            } else {
                x
            }
        };
        let pass = |s: Site| match s {
            Site::Crossing(i, j) => Some((self.crossings[i][(j + 2) % 4], Site::Crossing(i, (j + 2) % 4))),
            Site::End(_) => None,
        };
        // arcs first, starting from their lowest endpoint index
        for (k, &a) in self.endpoints.iter().enumerate() {
            if seen.contains(&a) {
                continue;
            }
            let mut steps = Vec::new();
            let mut ends = vec![k];
            let (mut arc, mut from) = (a, Site::End(k));
            loop {
                seen.insert(arc);
                let to = other(arc, from);
                steps.push((arc, to));
                match pass(to) {
                    Some((next, exit)) => {
                        arc = next;
                        from = exit;
                    }
                    None => {
                        if let Site::End(e) = to {
                            ends.push(e);
                        }
                        break;
                    }
                }
            }
            out.push((steps, ends));
        }
        for &a in sites.keys() {
            if seen.contains(&a) {
                continue;
            }
            let mut steps = Vec::new();
            let mut arc = a;
            let mut to = sites[&a][0];
            while !seen.contains(&arc) {
                seen.insert(arc);
                steps.push((arc, to));
                let (next, exit) = pass(to).expect("closed component");
                arc = next;
                to = other(arc, exit);
            }
            out.push((steps, Vec::new()));
        }
        out
    }

    /// Components ordered by smallest arc label, crossingless circles last.
    pub fn components(&self) -> Vec<Component> {
        let mut comps: Vec<Component> = self
            .trace()
            .into_iter()
            .map(|(steps, mut ends)| {
                ends.sort_unstable();
                Component { arcs: steps.into_iter().map(|(a, _)| a).collect(), ends }
            })
            .collect();
        comps.sort_by_key(|c| c.arcs.iter().min().copied());
        for _ in 0..self.loops {
            comps.push(Component { arcs: Vec::new(), ends: Vec::new() });
        }
        comps
    }

    pub fn component_count(&self) -> usize {
        self.trace().len() + self.loops as usize
    }

    /// Orientation data: for each crossing, whether the under and over
    /// strands enter at positions 0 and 1 respectively, and the component of
    /// each strand (indices into [`Diagram::components`]).
    fn orientation(&self) -> Vec<Oriented> {
        let comps = self.components();
        let index: BTreeMap<u32, usize> = comps
            .iter()
            .enumerate()
            .flat_map(|(k, c)| c.arcs.iter().map(move |&a| (a, k)))
            .collect();
        let mut entering = vec![[false; 4]; self.crossings.len()];
        for (steps, _) in self.trace() {
            for (_, site) in steps {
                if let Site::Crossing(i, j) = site {
                    entering[i][j] = true;
                }
            }
        }
        self.crossings
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let under_in = if entering[i][0] { 0 } else { 2 };
                let over_in = if entering[i][1] { 1 } else { 3 };
                let sign = if (over_in + 4 - under_in) % 4 == 3 { 1 } else { -1 };
                Oriented { sign, under: index[&c[0]], over: index[&c[1]] }
            })
            .collect()
    }

    /// Crossing signs under the traced orientation.
    pub fn crossing_signs(&self) -> Vec<i8> {
        self.orientation().into_iter().map(|o| o.sign).collect()
    }

    pub fn writhe(&self) -> i64 {
        self.crossing_signs().into_iter().map(i64::from).sum()
    }

    /// Linking number of the closed components `c1` and `c2` (indices into
    /// [`Diagram::components`]) under the traced orientation.
    pub fn linking_number(&self, c1: usize, c2: usize) -> Result<i64, DiagramError> {
        let comps = self.components();
        for c in [c1, c2] {
            match comps.get(c) {
                None => return Err(DiagramError::NoComponent(c)),
                Some(k) if !k.is_closed() => return Err(DiagramError::Open(self.endpoints.len())),
                Some(_) => {}
            }
        }
        if c1 == c2 {
            return Err(DiagramError::SameComponent);
        }
        let twice: i64 = self
            .orientation()
            .into_iter()
            .filter(|o| (o.under, o.over) == (c1, c2) || (o.under, o.over) == (c2, c1))
            .map(|o| i64::from(o.sign))
            .sum();
        Ok(twice / 2)
    }

    /// Linking numbers of every pair of closed components, keyed by
    /// component pair `(i, j)`, `i < j`.
    pub fn linking_matrix(&self) -> Result<BTreeMap<(usize, usize), i64>, DiagramError> {
        let closed: Vec<usize> =
            self.components().iter().enumerate().filter(|(_, c)| c.is_closed()).map(|(i, _)| i).collect();
        let mut out = BTreeMap::new();
        for (k, &i) in closed.iter().enumerate() {
            for &j in &closed[k + 1..] {
                out.insert((i, j), self.linking_number(i, j)?);
            }
        }
        Ok(out)
    }

    /// Reverses the cyclic order of every crossing and swaps over and under,
    /// giving the diagram of the mirror image.
    pub fn mirror(&self) -> Diagram {
        let mut d = self.clone();
        for c in &mut d.crossings {
            c.rotate_left(1);
        }
        d
    }

    /// Parses the text form written by [`fmt::Display`].
    pub fn parse(text: &str) -> Result<Diagram, DiagramError> {
        let fields = parse_fields(text)?;
        let get = |k: &str| fields.get(k).cloned();
        let crossings = match get("crossings") {
            Some(v) => serde_json::from_value(v).map_err(|e| DiagramError::Parse(e.to_string()))?,
            None => return Err(DiagramError::Parse("missing `crossings` field".into())),
        };
        let endpoints = match get("endpoints") {
            Some(v) => serde_json::from_value(v).map_err(|e| DiagramError::Parse(e.to_string()))?,
            None => Vec::new(),
        };
        let loops = match get("loops") {
            Some(v) => serde_json::from_value(v).map_err(|e| DiagramError::Parse(e.to_string()))?,
            None => 0,
        };
        Diagram::new(crossings, endpoints, loops)
    }
}

#[derive(Debug, Clone, Copy)]
struct Oriented {
    sign: i8,
    under: usize,
    over: usize,
}

/// Splits `key: <json>` lines into a map. Values may span lines as long as
/// the next key starts a fresh line; `#` starts a comment line.
pub(crate) fn parse_fields(text: &str) -> Result<BTreeMap<String, serde_json::Value>, DiagramError> {
    let mut raw: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let starts_key = !line.starts_with(char::is_whitespace)
            && trimmed
                .split_once(':')
                .is_some_and(|(k, _)| !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
        if starts_key {
            let (k, v) = trimmed.split_once(':').expect("checked");
            raw.push((k.to_string(), v.to_string()));
        } else if let Some(last) = raw.last_mut() {
            last.1.push('\n');
            last.1.push_str(line);
        } else {
            return Err(DiagramError::Parse(format!("expected `key: value`, got {trimmed:?}")));
        }
    }
    raw.into_iter()
        .map(|(k, v)| {
            let value = serde_json::from_str(v.trim())
                .map_err(|e| DiagramError::Parse(format!("field `{k}`: {e}")))?;
            Ok((k, value))
        })
        .collect()
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "crossings: {}", serde_json::to_string(&self.crossings).expect("integers serialize"))?;
        writeln!(f, "endpoints: {}", serde_json::to_string(&self.endpoints).expect("integers serialize"))?;
        if self.loops > 0 {
            writeln!(f, "loops: {}", self.loops)?;
        }
        Ok(())
    }
}

/// The standard diagram of the 2-bridge link `b(p, q)`: the denominator
/// closure of the rational tangle `q/p`.
pub fn two_bridge_diagram(p: i64, q: i64) -> Result<Diagram, DiagramError> {
    let f = crate::tangles::Fraction::reduced(q, p)
        .map_err(|e| DiagramError::Malformed(e.to_string()))?;
    Ok(Net::rational(f).denominator_closure().flatten()?.diagram)
}

/// The diagram of a rational tangle alone, four endpoints.
pub fn rational_tangle(f: crate::tangles::Fraction) -> Diagram {
    Net::rational(f).flatten().expect("rational tangles flatten").diagram
}

/// A tangle whose denominator closure is the link `l`.
///
/// Sums of tangles close to connected sums, an `∞` tangle between two
/// summands splits them apart, and a quarter turn trades the numerator
/// closure of a Montesinos tangle for a denominator closure.
pub fn link_net(l: &crate::tangles::LinkDesc) -> Result<Net, DiagramError> {
    use crate::tangles::{Fraction, LinkDesc};
    let sum = |nets: Vec<Net>| nets.into_iter().reduce(|a, b| a.sum(&b)).unwrap_or_else(Net::zero);
    Ok(match l {
        LinkDesc::Unknot => Net::zero(),
        LinkDesc::TwoBridge { p, q } => Net::rational(
            Fraction::reduced(*q, *p).map_err(|e| DiagramError::Malformed(e.to_string()))?,
        ),
        LinkDesc::ConnSum(fs) => sum(fs.iter().map(link_net).collect::<Result<_, _>>()?),
        LinkDesc::SplitUnion(fs) => {
            let parts = fs.iter().map(link_net).collect::<Result<Vec<_>, _>>()?;
            parts
                .into_iter()
                .reduce(|a, b| a.sum(&Net::zero().rot()).sum(&b))
                .unwrap_or_else(Net::zero)
        }
        LinkDesc::Montesinos(fs) => sum(fs.iter().map(|&f| Net::rational(f)).collect()).rot(),
    })
}

/// A closed diagram of a described link.
pub fn link_diagram(l: &crate::tangles::LinkDesc) -> Result<Diagram, DiagramError> {
    Ok(link_net(l)?.denominator_closure().flatten()?.diagram)
}
