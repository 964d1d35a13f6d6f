//! Twist-region templates for the three families.
//!
//! A template file is a list of `key: <json>` fields:
//!
//! - `name`, `figure`: identification strings;
//! - `min_p`: smallest admissible parameter;
//! - `boundary`: the family's boundary spheres, e.g. `["S0", "S1"]`;
//! - `slots`: twist regions, each an integer tangle whose half-twist count
//!   is a polynomial in `p`;
//! - `frames`: optional per-sphere 2×2 matrices (row major, entries in
//!   `p`) taking a filling slope to the fraction actually inserted;
//! - `wiring`: pairs of terminals `region.PORT` or `S0.PORT` to be joined;
//! - `checks`: invariants every instance must satisfy.
//!
//! Filling a sphere plugs the rational tangle's `NW, NE, SW, SE` ports
//! into the sphere's terminals of the same names.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::tangles::{BoundaryLabel, Fraction, Section};

use super::{parse_fields, Diagram, DiagramError, Net, Port};

/// An integer polynomial in `p`, kept with its source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PExpr {
    text: String,
    ast: Ast,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ast {
    Int(i64),
    P,
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
}

impl PExpr {
    pub fn parse(text: &str) -> Result<PExpr, DiagramError> {
        let toks: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let ast = expr(&toks, &mut pos)?;
        if pos != toks.len() {
            return Err(DiagramError::Template(format!("trailing input in {text:?}")));
        }
        Ok(PExpr { text: text.to_string(), ast })
    }

    pub fn eval(&self, p: i64) -> Result<i64, DiagramError> {
        eval(&self.ast, p).ok_or_else(|| DiagramError::Template(format!("overflow in {}", self.text)))
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

fn expr(t: &[char], pos: &mut usize) -> Result<Ast, DiagramError> {
    let mut lhs = term(t, pos)?;
    while let Some(&c) = t.get(*pos) {
        if c != '+' && c != '-' {
            break;
        }
        *pos += 1;
        let rhs = term(t, pos)?;
        lhs = if c == '+' { Ast::Add(lhs.into(), rhs.into()) } else { Ast::Sub(lhs.into(), rhs.into()) };
    }
    Ok(lhs)
}

fn term(t: &[char], pos: &mut usize) -> Result<Ast, DiagramError> {
    let mut lhs = factor(t, pos)?;
    while t.get(*pos) == Some(&'*') {
        *pos += 1;
        lhs = Ast::Mul(lhs.into(), factor(t, pos)?.into());
    }
    Ok(lhs)
}

fn factor(t: &[char], pos: &mut usize) -> Result<Ast, DiagramError> {
    let bad = |pos: usize| DiagramError::Template(format!("bad expression at character {pos}"));
    match t.get(*pos) {
        Some('-') => {
            *pos += 1;
            Ok(Ast::Neg(factor(t, pos)?.into()))
        }
        Some('p') => {
            *pos += 1;
            Ok(Ast::P)
        }
        Some('(') => {
            *pos += 1;
            let e = expr(t, pos)?;
            if t.get(*pos) != Some(&')') {
                return Err(bad(*pos));
            }
            *pos += 1;
            Ok(e)
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while t.get(*pos).is_some_and(char::is_ascii_digit) {
                *pos += 1;
            }
            let s: String = t[start..*pos].iter().collect();
            s.parse().map(Ast::Int).map_err(|_| bad(start))
        }
        _ => Err(bad(*pos)),
    }
}

fn eval(a: &Ast, p: i64) -> Option<i64> {
    match a {
        Ast::Int(n) => Some(*n),
        Ast::P => Some(p),
        Ast::Neg(x) => eval(x, p)?.checked_neg(),
        Ast::Add(x, y) => eval(x, p)?.checked_add(eval(y, p)?),
        Ast::Sub(x, y) => eval(x, p)?.checked_sub(eval(y, p)?),
        Ast::Mul(x, y) => eval(x, p)?.checked_mul(eval(y, p)?),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Terminal {
    pub owner: String,
    pub port: Port,
}

impl Terminal {
    fn parse(s: &str) -> Result<Terminal, DiagramError> {
        let (owner, port) = s
            .rsplit_once('.')
            .ok_or_else(|| DiagramError::Template(format!("terminal {s:?} is not `name.PORT`")))?;
        let port = Port::parse(port).ok_or_else(|| DiagramError::Template(format!("bad port in {s:?}")))?;
        Ok(Terminal { owner: owner.to_string(), port })
    }
}

/// An invariant recorded alongside a template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateCheck {
    pub fills: BTreeMap<BoundaryLabel, Fraction>,
    /// Total number of components.
    pub components: Option<usize>,
    /// Number of closed components.
    pub circles: Option<usize>,
    /// Endpoint spheres of each arc component, as sorted label pairs.
    pub arcs: Option<Vec<(BoundaryLabel, BoundaryLabel)>>,
    pub det: Option<PExpr>,
    /// Values that must each occur as `|lk|` of some pair of components.
    pub linking: Vec<PExpr>,
}

#[derive(Debug, Clone)]
pub struct TwistTemplate {
    pub name: String,
    pub figure: String,
    pub min_p: i64,
    pub boundary: Vec<BoundaryLabel>,
    pub slots: BTreeMap<String, PExpr>,
    pub frames: BTreeMap<BoundaryLabel, [PExpr; 4]>,
    pub wiring: Vec<(Terminal, Terminal)>,
    pub checks: Vec<TemplateCheck>,
}

#[derive(Deserialize)]
struct RawCheck {
    fills: BTreeMap<String, String>,
    components: Option<usize>,
    circles: Option<usize>,
    arcs: Option<Vec<[String; 2]>>,
    det: Option<String>,
    #[serde(default)]
    linking: Vec<String>,
}

fn label(s: &str) -> Result<BoundaryLabel, DiagramError> {
    match s {
        "S0" => Ok(BoundaryLabel::S0),
        "S1" => Ok(BoundaryLabel::S1),
        _ => Err(DiagramError::Template(format!("unknown sphere {s:?}"))),
    }
}

fn field<T: serde::de::DeserializeOwned>(
    fields: &BTreeMap<String, serde_json::Value>,
    key: &str,
) -> Result<T, DiagramError> {
    let v = fields
        .get(key)
        .cloned()
        .ok_or_else(|| DiagramError::Template(format!("missing field `{key}`")))?;
    serde_json::from_value(v).map_err(|e| DiagramError::Template(format!("field `{key}`: {e}")))
}

impl TwistTemplate {
    pub fn parse(text: &str) -> Result<TwistTemplate, DiagramError> {
        let f = parse_fields(text)?;
        let boundary = field::<Vec<String>>(&f, "boundary")?
            .iter()
            .map(|s| label(s))
            .collect::<Result<Vec<_>, _>>()?;
        let slots = field::<BTreeMap<String, String>>(&f, "slots")?
            .into_iter()
            .map(|(k, v)| Ok((k, PExpr::parse(&v)?)))
            .collect::<Result<BTreeMap<_, _>, DiagramError>>()?;
        let frames = match f.get("frames") {
            None => BTreeMap::new(),
            Some(_) => field::<BTreeMap<String, [String; 4]>>(&f, "frames")?
                .into_iter()
                .map(|(k, m)| {
                    let m = [&m[0], &m[1], &m[2], &m[3]].map(|e| PExpr::parse(e));
                    let [a, b, c, d] = m;
                    Ok((label(&k)?, [a?, b?, c?, d?]))
                })
                .collect::<Result<BTreeMap<_, _>, DiagramError>>()?,
        };
        let wiring = field::<Vec<[String; 2]>>(&f, "wiring")?
            .iter()
            .map(|[a, b]| Ok((Terminal::parse(a)?, Terminal::parse(b)?)))
            .collect::<Result<Vec<_>, DiagramError>>()?;
        let checks = match f.get("checks") {
            None => Vec::new(),
            Some(_) => field::<Vec<RawCheck>>(&f, "checks")?
                .into_iter()
                .map(|c| c.resolve())
                .collect::<Result<Vec<_>, _>>()?,
        };
        let t = TwistTemplate {
            name: field(&f, "name")?,
            figure: field(&f, "figure")?,
            min_p: field(&f, "min_p")?,
            boundary,
            slots,
            frames,
            wiring,
            checks,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn load(path: &std::path::Path) -> Result<TwistTemplate, DiagramError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DiagramError::Template(format!("{}: {e}", path.display())))?;
        TwistTemplate::parse(&text)
    }

    /// Every terminal of every region and sphere is wired exactly once.
    fn validate(&self) -> Result<(), DiagramError> {
        let mut uses: BTreeMap<Terminal, usize> = BTreeMap::new();
        let owners = self
            .slots
            .keys()
            .cloned()
            .chain(self.boundary.iter().map(|b| b.to_string()));
        for owner in owners {
            for port in Port::ALL {
                uses.insert(Terminal { owner: owner.clone(), port }, 0);
            }
        }
        for (a, b) in &self.wiring {
            for t in [a, b] {
                match uses.get_mut(t) {
                    Some(k) => *k += 1,
                    None => {
                        return Err(DiagramError::Template(format!(
                            "unknown terminal {}.{}",
                            t.owner, t.port
                        )))
                    }
                }
            }
        }
        if let Some((t, k)) = uses.iter().find(|(_, &k)| k != 1) {
            return Err(DiagramError::Template(format!(
                "terminal {}.{} is wired {k} times",
                t.owner, t.port
            )));
        }
        Ok(())
    }

    /// The fraction inserted into `sphere` for the filling slope `f`.
    pub fn framed(&self, sphere: BoundaryLabel, f: Fraction, p: i64) -> Result<Fraction, DiagramError> {
        let Some(m) = self.frames.get(&sphere) else {
            return Ok(f);
        };
        let [a, b, c, d] = [&m[0], &m[1], &m[2], &m[3]].map(|e| e.eval(p));
        let (a, b, c, d) = (a?, b?, c?, d?);
        let (x, y) = (f.num(), f.den());
        let ovf = || DiagramError::Template("overflow applying frame".into());
        let num = a.checked_mul(x).and_then(|u| u.checked_add(b.checked_mul(y)?)).ok_or_else(ovf)?;
        let den = c.checked_mul(x).and_then(|u| u.checked_add(d.checked_mul(y)?)).ok_or_else(ovf)?;
        Fraction::reduced(num, den).map_err(|e| DiagramError::Template(e.to_string()))
    }

    /// Half-twist count of every region at `p`.
    pub fn twists(&self, p: i64) -> Result<BTreeMap<String, i64>, DiagramError> {
        self.slots.iter().map(|(k, e)| Ok((k.clone(), e.eval(p)?))).collect()
    }
}

impl RawCheck {
    fn resolve(self) -> Result<TemplateCheck, DiagramError> {
        let fills = self
            .fills
            .iter()
            .map(|(k, v)| {
                let f = v
                    .parse::<Fraction>()
                    .map_err(|e| DiagramError::Template(format!("fill {v:?}: {e}")))?;
                Ok((label(k)?, f))
            })
            .collect::<Result<BTreeMap<_, _>, DiagramError>>()?;
        let arcs = self
            .arcs
            .map(|v| {
                v.iter()
                    .map(|[a, b]| {
                        let (a, b) = (label(a)?, label(b)?);
                        Ok((a.min(b), a.max(b)))
                    })
                    .collect::<Result<Vec<_>, DiagramError>>()
            })
            .transpose()?;
        Ok(TemplateCheck {
            fills,
            components: self.components,
            circles: self.circles,
            arcs,
            det: self.det.as_deref().map(PExpr::parse).transpose()?,
            linking: self.linking.iter().map(|s| PExpr::parse(s)).collect::<Result<_, _>>()?,
        })
    }
}

/// A template instantiated at one `p` with some spheres filled.
#[derive(Debug, Clone)]
pub struct Instance {
    pub diagram: Diagram,
    /// Sphere and port of each endpoint of `diagram`.
    pub ends: Vec<(BoundaryLabel, Port)>,
}

impl Instance {
    /// Sorted endpoint-sphere pairs of the arc components.
    pub fn arc_types(&self) -> Vec<(BoundaryLabel, BoundaryLabel)> {
        let mut out: Vec<_> = self
            .diagram
            .components()
            .iter()
            .filter(|c| !c.is_closed())
            .map(|c| {
                let (a, b) = (self.ends[c.ends[0]].0, self.ends[c.ends[1]].0);
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort();
        out
    }

    pub fn circle_count(&self) -> usize {
        self.diagram.components().iter().filter(|c| c.is_closed()).count()
    }
}

pub fn instantiate(
    t: &TwistTemplate,
    p: i64,
    fills: &BTreeMap<BoundaryLabel, Fraction>,
) -> Result<Instance, DiagramError> {
    if p < t.min_p {
        return Err(DiagramError::PRange { p, min: t.min_p });
    }
    for l in fills.keys() {
        if !t.boundary.contains(l) {
            return Err(DiagramError::UnknownSphere(l.to_string()));
        }
    }
    let mut net = Net::default();
    let mut corners: BTreeMap<String, [u32; 4]> = BTreeMap::new();
    let mut place = |net: &mut Net, name: String, part: Net| {
        let (merged, off) = net.merge(&part);
        *net = merged;
        corners.insert(name, part.ports.expect("parts have ports").map(|x| x + off));
    };
    for (name, n) in t.twists(p)? {
        place(&mut net, name, Net::integer(n));
    }
    for &sphere in &t.boundary {
        let part = match fills.get(&sphere) {
            Some(&f) => Net::rational(t.framed(sphere, f, p)?),
            None => Net::sphere(&sphere.to_string()),
        };
        place(&mut net, sphere.to_string(), part);
    }
    let index = |x: &Terminal| corners[&x.owner][x.port as usize];
    for (a, b) in &t.wiring {
        net.wires.push((index(a), index(b)));
    }
    let flat = net.flatten()?;
    let ends = flat
        .ends
        .iter()
        .map(|(s, q)| Ok((label(s)?, *q)))
        .collect::<Result<Vec<_>, DiagramError>>()?;
    Ok(Instance { diagram: flat.diagram, ends })
}

static TEMPLATES: OnceLock<[TwistTemplate; 3]> = OnceLock::new();

/// The bundled template of a family.
pub fn builtin_template(section: Section) -> &'static TwistTemplate {
    let all = TEMPLATES.get_or_init(|| {
        [
            include_str!("../../data/templates/section2.tmpl"),
            include_str!("../../data/templates/section3.tmpl"),
            include_str!("../../data/templates/section4.tmpl"),
        ]
        .map(|text| TwistTemplate::parse(text).expect("bundled template parses"))
    });
    &all[match section {
        Section::Two => 0,
        Section::Three => 1,
        Section::Four => 2,
    }]
}

impl TemplateCheck {
    /// Every way the instance of `t` at `p` violates this check. A
    /// determinant over the crossing budget is an error, not a violation.
    pub fn violations(&self, t: &TwistTemplate, p: i64) -> Result<Vec<String>, DiagramError> {
        let inst = instantiate(t, p, &self.fills)?;
        let d = &inst.diagram;
        let mut out = Vec::new();
        if let Some(k) = self.components {
            let got = d.component_count();
            if got != k {
                out.push(format!("{got} components, expected {k}"));
            }
        }
        if let Some(k) = self.circles {
            let got = inst.circle_count();
            if got != k {
                out.push(format!("{got} closed components, expected {k}"));
            }
        }
        if let Some(arcs) = &self.arcs {
            let mut want = arcs.clone();
            want.sort();
            let got = inst.arc_types();
            if got != want {
                out.push(format!("arc types {got:?}, expected {want:?}"));
            }
        }
        if let Some(e) = &self.det {
            let want = e.eval(p)?.unsigned_abs();
            let got = super::determinant(d)?;
            if got != want {
                out.push(format!("determinant {got}, expected {want}"));
            }
        }
        if !self.linking.is_empty() {
            let lk: Vec<u64> = d.linking_matrix()?.values().map(|v| v.unsigned_abs()).collect();
            for e in &self.linking {
                let want = e.eval(p)?.unsigned_abs();
                if !lk.contains(&want) {
                    out.push(format!("no pair with |lk| = {want}; found {lk:?}"));
                }
            }
        }
        Ok(out)
    }
}
