use std::collections::BTreeSet;

use num_integer::Integer;

use super::{AssertionKind as K, CheckSpec, Ctx, Fills, OraclePolicy, ParamRange};
use crate::covers::{dbc_link, family_manifold};
use crate::diagrams::instantiate;
use crate::manifolds::{cable_fill, homeomorphic, Decision, H1Order, Manifold};
use crate::slopes::{distance, pushforward_constraints, solve_distance_system, BasisChange, Slope, SlopeImage};
use crate::tangles::{
    fill_family, tabulated_fills, BoundaryLabel, FilledShape, Fraction, LinkDesc, Section, TangleExpr,
};

pub static REGISTRY: &[CheckSpec] = &[
    CheckSpec {
        id: "distance",
        anchor: "Δ",
        summary: "slope distances quoted in the arguments",
        range: ParamRange::None,
        oracle: OraclePolicy::Required,
        kinds: &[K::Distance],
        run: distances,
    },
    CheckSpec {
        id: "F2.1",
        anchor: "F2.1",
        summary: "section-2 template reproduces its recorded invariants",
        range: ParamRange::P(2..=8),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Transcription],
        run: |c| transcription(c, Section::Two),
    },
    CheckSpec {
        id: "F3.1",
        anchor: "F3.1",
        summary: "section-3 template reproduces its recorded invariants",
        range: ParamRange::P(2..=8),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Transcription],
        run: |c| transcription(c, Section::Three),
    },
    CheckSpec {
        id: "F4.1",
        anchor: "F4.1",
        summary: "section-4 template reproduces its recorded invariants",
        range: ParamRange::P(2..=8),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Transcription],
        run: |c| transcription(c, Section::Four),
    },
    CheckSpec {
        id: "L2.1",
        anchor: "L2.1",
        summary: "section-2 fill identifications against closure determinants",
        range: ParamRange::P(2..=8),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Oracle],
        run: |c| tangle_oracles(c, Section::Two),
    },
    CheckSpec {
        id: "L2.2",
        anchor: "L2.2",
        summary: "covers of the section-2 fills",
        range: ParamRange::P(2..=20),
        oracle: OraclePolicy::Required,
        kinds: &[K::Symbolic],
        run: section_two_covers,
    },
    CheckSpec {
        id: "L2.5-cabling",
        anchor: "L2.5",
        summary: "cabling slope candidates and the cable filling",
        range: ParamRange::None,
        oracle: OraclePolicy::Required,
        kinds: &[K::Solver, K::Symbolic],
        run: cabling,
    },
    CheckSpec {
        id: "T2.6",
        anchor: "T2.6",
        summary: "reducible and toroidal fills at distance 2, distinct across p",
        range: ParamRange::P(2..=20),
        oracle: OraclePolicy::Required,
        kinds: &[K::Symbolic, K::Distance, K::NonHomeomorphism],
        run: section_two_exceptional,
    },
    CheckSpec {
        id: "T2.6-k",
        anchor: "T2.6",
        summary: "shear images of -1/2 and their distance",
        range: ParamRange::K(-10..=10),
        oracle: OraclePolicy::Required,
        kinds: &[K::Distance],
        run: shear,
    },
    CheckSpec {
        id: "L3.1",
        anchor: "L3.1",
        summary: "covers of the section-3 fills and their closure determinants",
        range: ParamRange::P(2..=20),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Symbolic, K::Oracle],
        run: section_three_covers,
    },
    CheckSpec {
        id: "L3.2",
        anchor: "L3.2",
        summary: "circle linking numbers after filling",
        range: ParamRange::P(2..=8),
        oracle: OraclePolicy::Required,
        kinds: &[K::Oracle],
        run: section_three_linking,
    },
    CheckSpec {
        id: "T3.6",
        anchor: "T3.6",
        summary: "the two distance-1 closed fills are not homeomorphic",
        range: ParamRange::P(2..=8),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Distance, K::NonHomeomorphism, K::Oracle],
        run: section_three_distinct,
    },
    CheckSpec {
        id: "L4.1(1)",
        anchor: "L4.1(1)",
        summary: "the infinity fill is a toroidal graph manifold",
        range: ParamRange::P(2..=20),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Symbolic, K::Oracle],
        run: section_four_toroidal,
    },
    CheckSpec {
        id: "L4.1(2)",
        anchor: "L4.1(2)",
        summary: "the zero fill is L((p-1)(p+3)+1, p+3)",
        range: ParamRange::P(2..=20),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Symbolic, K::Oracle],
        run: section_four_lens,
    },
    CheckSpec {
        id: "L4.1(3)",
        anchor: "L4.1(3)",
        summary: "the 1 and 1/2 fills close to three-tangle Montesinos links",
        range: ParamRange::P(2..=20),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Symbolic, K::Oracle],
        run: section_four_small_seifert,
    },
    CheckSpec {
        id: "L4.1(4)",
        anchor: "L4.1(4)",
        summary: "the 1/3 fill is L(3,1) # L(2,1)",
        range: ParamRange::P(2..=20),
        oracle: OraclePolicy::SkipIfOverBudget,
        kinds: &[K::Symbolic, K::Oracle],
        run: section_four_reducible,
    },
    CheckSpec {
        id: "T4.2",
        anchor: "T4.2",
        summary: "reducible and toroidal fills at distance 3, distinct across p",
        range: ParamRange::P(2..=20),
        oracle: OraclePolicy::Required,
        kinds: &[K::Distance, K::Solver, K::Symbolic, K::NonHomeomorphism],
        run: section_four_exceptional,
    },
];

fn sl(text: &str) -> Slope {
    text.parse().expect("literal slope")
}

fn fr(text: &str) -> Fraction {
    text.parse().expect("literal fraction")
}

fn s0(text: &str) -> Fills {
    Fills::from([(BoundaryLabel::S0, fr(text))])
}

fn s0s1(a: &str, b: &str) -> Fills {
    Fills::from([(BoundaryLabel::S0, fr(a)), (BoundaryLabel::S1, fr(b))])
}

fn set_text(v: &[Slope]) -> String {
    v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

fn manifold(section: Section, p: i64, fills: &Fills) -> Manifold {
    family_manifold(section, p, fills).unwrap_or_else(|e| Manifold::unknown(e.to_string()))
}

fn distances(c: &mut Ctx) {
    c.equal(K::Distance, "Δ(inf, -1/2) = 2", distance(Slope::INFINITY, sl("-1/2")), 2);
    c.equal(K::Distance, "Δ(0, inf) = 1", distance(Slope::ZERO, Slope::INFINITY), 1);
    c.equal(K::Distance, "Δ(1/3, inf) = 3", distance(sl("1/3"), Slope::INFINITY), 3);
    c.equal(K::Distance, "Δ(1, 1/3) = 2", distance(sl("1"), sl("1/3")), 2);
}

fn transcription(c: &mut Ctx, section: Section) {
    let p = c.p();
    let t = c.template(section).clone();
    for check in &t.checks {
        let subject = super::fills_text(&check.fills);
        let result = check.violations(&t, p).map(|v| if v.is_empty() { Ok(()) } else { Err(v.join("; ")) });
        c.diagram(K::Transcription, format!("{} invariants", t.name), subject, result);
    }
}

/// `(β, α)` of an algebraic tangle: the determinants of its two closures
/// by the `0` and `∞` tangles, up to sign.
fn tangle_pair(t: &TangleExpr) -> Option<(i128, i128)> {
    match t {
        TangleExpr::Rational(f) => Some((f.num() as i128, f.den() as i128)),
        TangleExpr::ConwaySum(terms) => {
            let mut acc = (0i128, 1i128);
            for term in terms {
                let (b, a) = tangle_pair(term)?;
                acc = (acc.0 * a + b * acc.1, acc.1 * a);
            }
            Some(acc)
        }
        TangleExpr::ConnSum(inner, link) => {
            let (b, a) = tangle_pair(inner)?;
            let d = link.determinant().ok()? as i128;
            Some((b * d, a * d))
        }
        TangleExpr::Family(_) => None,
    }
}

fn shape_pair(shape: &FilledShape) -> Option<(i128, i128)> {
    match shape {
        FilledShape::Tangle(t) => tangle_pair(t),
        FilledShape::AlgebraicSum { part, summand } => {
            let terms = part.iter().chain([summand]).map(|&f| TangleExpr::Rational(f));
            tangle_pair(&TangleExpr::sum(terms).ok()?)
        }
        _ => None,
    }
}

/// For a fill leaving `S1` open, the gcd of the closure determinants over
/// all `S1` fills does not depend on how `S1` is framed; it must match the
/// gcd of the identified tangle's pair.
fn tangle_oracles(c: &mut Ctx, section: Section) {
    let p = c.p();
    for fills in tabulated_fills(section) {
        if fills.len() != 1 {
            continue;
        }
        let subject = super::fills_text(&fills);
        let Ok(id) = fill_family(section, p, &fills) else {
            c.check(K::Oracle, format!("{subject} is tabulated"), false, || "no entry".into());
            continue;
        };
        let Some((b, a)) = shape_pair(&id.shape) else {
            continue;
        };
        let want = b.unsigned_abs().gcd(&a.unsigned_abs()) as u64;
        let close = |z: &str| {
            let mut f = fills.clone();
            f.insert(BoundaryLabel::S1, fr(z));
            c.family_det(section, p, &f)
        };
        let result = close("0").and_then(|d0| close("inf").map(|d1| (d0, d1))).map(|(d0, d1)| {
            let got = d0.gcd(&d1);
            if got == want {
                Ok(())
            } else {
                Err(format!("closures give {d0} and {d1}, gcd {got}; {} predicts {want}", id.shape))
            }
        });
        c.diagram(K::Oracle, format!("closure gcd matches {}", id.anchor), subject, result);
    }
}

fn section_two_covers(c: &mut Ctx) {
    let p = c.p();
    let m = |f: &str| manifold(Section::Two, p, &s0(f));
    c.equal(K::Symbolic, "M(inf) = SolidTorus # RP3", m("inf"), Manifold::conn_sum([Manifold::SolidTorus, Manifold::RP3]));
    c.equal(K::Symbolic, "M(0) = Q(2p-1,-2p-1)", m("0"), Manifold::q(2 * p - 1, -2 * p - 1));
    c.equal(K::Symbolic, "M(-1) = Q(2p+1,-2p+1)", m("-1"), Manifold::q(2 * p + 1, -2 * p + 1));
    c.equal(
        K::Symbolic,
        "M(-1/2) = C(2,1) ∪ Q(2p,-2p)",
        m("-1/2"),
        Manifold::union(Manifold::cable(2, 1), Manifold::q(2 * p, -2 * p)),
    );
    for f in ["inf", "0", "-1", "-1/2"] {
        let got = m(f).boundary_count().map_or("?".into(), |n| n.to_string());
        c.equal(K::Symbolic, format!("M({f}) has one boundary torus"), got, "1".into());
    }
    let flags = m("-1/2").classify_flags();
    c.check(K::Symbolic, "M(-1/2) is toroidal and not Seifert fibered", flags.toroidal && !flags.seifert_fibered, || {
        format!("{flags:?}")
    });
}

fn cabling(c: &mut Ctx) {
    let got = solve_distance_system(&[(Slope::INFINITY, 1), (sl("-1/2"), 1)]);
    let got = got.map(|v| set_text(&v)).unwrap_or_else(|e| e.to_string());
    c.equal(K::Solver, "Δ(r, inf) = Δ(r, -1/2) = 1 gives r = 0 or -1", got, set_text(&[sl("-1"), sl("0")]));
    let filled = cable_fill(&Manifold::cable(2, 1), Slope::ZERO, Slope::ZERO);
    c.equal(
        K::Symbolic,
        "C(2,1) at its cabling slope is L(2,1) # SolidTorus",
        filled,
        Manifold::conn_sum([Manifold::lens(2, 1), Manifold::SolidTorus]),
    );
    for p in 2..=20 {
        for f in ["0", "-1"] {
            let m = manifold(Section::Two, p, &s0(f));
            let prime = !matches!(m, Manifold::ConnSum(_)) && m.boundary_count() == Some(1);
            c.check(K::Symbolic, format!("M_{p}({f}) is prime with torus boundary"), prime, || m.to_string());
        }
    }
}

fn section_two_exceptional(c: &mut Ctx) {
    let p = c.p();
    let inf = manifold(Section::Two, p, &s0("inf")).classify_flags();
    c.check(K::Symbolic, "M(inf) is reducible and boundary reducible", inf.reducible && inf.boundary_reducible, || {
        format!("{inf:?}")
    });
    let half = manifold(Section::Two, p, &s0("-1/2")).classify_flags();
    c.check(K::Symbolic, "M(-1/2) is toroidal and annular", half.toroidal && half.annular, || format!("{half:?}"));
    c.equal(K::Distance, "Δ(inf, -1/2) = 2", distance(Slope::INFINITY, sl("-1/2")), 2);
    for q in c.range() {
        if q == p {
            continue;
        }
        for a in ["0", "-1"] {
            for b in ["0", "-1"] {
                let x = manifold(Section::Two, p, &s0(a));
                let y = manifold(Section::Two, q, &s0(b));
                c.equal(K::NonHomeomorphism, format!("M_p({a}) vs M_{q}({b})"), homeomorphic(&x, &y), Decision::No);
            }
        }
    }
}

fn shear(c: &mut Ctx) {
    let k = c.p();
    let img = BasisChange::shear(k).apply(sl("-1/2"));
    let want = Slope::new(2 * k - 1, 2).expect("odd numerator");
    c.equal(K::Distance, "shear(k) sends -1/2 to (2k-1)/2", img, want);
    c.equal(K::Distance, "Δ(-1/2, (2k-1)/2) = 4|k|", distance(sl("-1/2"), img), 4 * k.unsigned_abs());
    if k.abs() >= 2 {
        let d = distance(sl("-1/2"), img);
        c.check(K::Distance, "Δ(-1/2, (2k-1)/2) ≥ 8", d >= 8, || d.to_string());
    }
}

fn section_three_covers(c: &mut Ctx) {
    let p = c.p();
    let m = |f: &Fills| manifold(Section::Three, p, f);
    c.equal(K::Symbolic, "M(inf) = Q(2,-2) # RP3", m(&s0("inf")), Manifold::conn_sum([Manifold::q(2, -2), Manifold::RP3]));
    c.equal(
        K::Symbolic,
        "M(0) = Q(2p,-2p) # RP3",
        m(&s0("0")),
        Manifold::conn_sum([Manifold::q(2 * p, -2 * p), Manifold::RP3]),
    );
    c.equal(K::Symbolic, "unfilled M has two boundary tori", Section::Three.labels().len(), 2);
    for f in ["inf", "0"] {
        let got = m(&s0(f)).boundary_count().map_or("?".into(), |n| n.to_string());
        c.equal(K::Symbolic, format!("M({f}) has one boundary torus"), got, "1".into());
    }
    tangle_oracles(c, Section::Three);
}

fn section_three_linking(c: &mut Ctx) {
    let p = c.p();
    let t = c.template(Section::Three).clone();
    for (fills, want) in [(s0s1("0", "0"), p), (s0s1("1", "inf"), 2), (s0s1("-1", "inf"), 2)] {
        let subject = super::fills_text(&fills);
        let result = instantiate(&t, p, &fills).and_then(|inst| inst.diagram.linking_matrix()).map(|lk| {
            let values: BTreeSet<u64> = lk.values().map(|v| v.unsigned_abs()).collect();
            if values.contains(&(want as u64)) {
                Ok(())
            } else {
                Err(format!("|lk| values {values:?}"))
            }
        });
        c.diagram(K::Oracle, format!("a circle has |lk| = {want} with another component"), subject, result);
    }
}

/// Compares a closed family instance's determinant with the order of
/// `H_1` of the predicted cover.
fn det_vs_h1(c: &mut Ctx, section: Section, fills: &Fills) {
    let p = c.p();
    let m = manifold(section, p, fills);
    let want = match m.h1_order() {
        H1Order::Finite(n) => n,
        H1Order::Infinite => 0,
        H1Order::NotApplicable => return,
    };
    let result = c.family_det(section, p, fills).map(|d| {
        if d == want {
            Ok(())
        } else {
            Err(format!("determinant {d}, |H1({m})| = {want}"))
        }
    });
    c.diagram(K::Oracle, format!("det = |H1({m})|"), super::fills_text(fills), result);
}

fn section_three_distinct(c: &mut Ctx) {
    c.equal(K::Distance, "Δ(0, inf) = 1", distance(Slope::ZERO, Slope::INFINITY), 1);
    let split = dbc_link(&LinkDesc::split_union([LinkDesc::HOPF, LinkDesc::Unknot])).manifold;
    let lens = dbc_link(&LinkDesc::conn_sum([
        LinkDesc::HOPF,
        LinkDesc::two_bridge(4, 1).expect("coprime"),
    ]))
    .manifold;
    c.equal(K::Symbolic, "H1(S1xS2 # RP3) is infinite", split.h1_order(), H1Order::Infinite);
    c.equal(K::Symbolic, "|H1(L(4,1) # RP3)| = 8", lens.h1_order(), H1Order::Finite(8));
    c.equal(K::NonHomeomorphism, "S1xS2 # RP3 vs L(4,1) # RP3", homeomorphic(&split, &lens), Decision::No);
    for fills in [s0s1("0", "inf"), s0s1("1", "inf"), s0s1("-1", "inf")] {
        det_vs_h1(c, Section::Three, &fills);
    }
}

fn section_four_toroidal(c: &mut Ctx) {
    let p = c.p();
    let fills = s0("inf");
    let m = manifold(Section::Four, p, &fills);
    let f = m.classify_flags();
    c.check(K::Symbolic, "M(inf) is closed", m.is_closed(), || m.to_string());
    c.check(K::Symbolic, "M(inf) is toroidal, irreducible, not Seifert fibered", f.toroidal && !f.reducible && !f.seifert_fibered, || {
        format!("{f:?}")
    });
    let Ok(FilledShape::TangleUnion(x, y)) = fill_family(Section::Four, p, &fills).map(|id| id.shape) else {
        c.check(K::Symbolic, "T(inf) is a union of two Montesinos tangles", false, || "other shape".into());
        return;
    };
    let pair = |fs: &[Fraction]| tangle_pair(&TangleExpr::montesinos(fs).expect("two terms"));
    let (Some((b1, a1)), Some((b2, a2))) = (pair(&x), pair(&y)) else {
        return;
    };
    let allowed: BTreeSet<u64> = [b1 * a2 + a1 * b2, b1 * a2 - a1 * b2, b1 * b2 + a1 * a2, b1 * b2 - a1 * a2]
        .into_iter()
        .map(|v| v.unsigned_abs() as u64)
        .collect();
    let result = c.family_det(Section::Four, p, &fills).map(|d| {
        if allowed.contains(&d) {
            Ok(())
        } else {
            Err(format!("determinant {d} not among gluings {allowed:?}"))
        }
    });
    c.diagram(K::Oracle, "det is a gluing determinant of the two tangles", super::fills_text(&fills), result);
}

fn section_four_lens(c: &mut Ctx) {
    let p = c.p();
    let fills = s0("0");
    let want = Manifold::lens((p - 1) * (p + 3) + 1, p + 3);
    c.equal(K::Symbolic, "M(0) = L((p-1)(p+3)+1, p+3)", manifold(Section::Four, p, &fills), want);
    det_vs_h1(c, Section::Four, &fills);
}

fn section_four_small_seifert(c: &mut Ctx) {
    let p = c.p();
    for f in ["1", "1/2"] {
        let fills = s0(f);
        let shape = fill_family(Section::Four, p, &fills).map(|id| id.shape);
        c.check(
            K::Symbolic,
            format!("T({f}) is a Montesinos link of three rational tangles"),
            matches!(shape, Ok(FilledShape::MontesinosLink { tangles: 3 })),
            || format!("{shape:?}"),
        );
        let result = c.family_det(Section::Four, p, &fills).map(|d| {
            if d > 0 {
                Ok(())
            } else {
                Err("determinant 0".into())
            }
        });
        c.diagram(K::Oracle, "det is nonzero, so H1 is finite", super::fills_text(&fills), result);
    }
}

fn section_four_reducible(c: &mut Ctx) {
    let p = c.p();
    let fills = s0("1/3");
    let m = manifold(Section::Four, p, &fills);
    c.equal(K::Symbolic, "M(1/3) = L(3,1) # L(2,1)", m.clone(), Manifold::conn_sum([Manifold::lens(3, 1), Manifold::RP3]));
    c.check(K::Symbolic, "M(1/3) is reducible", m.classify_flags().reducible, || m.to_string());
    det_vs_h1(c, Section::Four, &fills);
}

fn section_four_exceptional(c: &mut Ctx) {
    let p = c.p();
    c.equal(K::Distance, "Δ(1/3, inf) = 3", distance(sl("1/3"), Slope::INFINITY), 3);
    let third = manifold(Section::Four, p, &s0("1/3"));
    c.check(K::Symbolic, "M(1/3) is reducible", third.classify_flags().reducible, || third.to_string());
    c.equal(K::Symbolic, "|H1(M(1/3))| = 6", third.h1_order(), H1Order::Finite(6));
    let inf = manifold(Section::Four, p, &s0("inf"));
    c.check(K::Symbolic, "M(inf) is toroidal", inf.classify_flags().toroidal, || inf.to_string());
    let got = solve_distance_system(&[(sl("1"), 1), (sl("1/3"), 1)]);
    let got = got.map(|v| set_text(&v)).unwrap_or_else(|e| e.to_string());
    c.equal(K::Solver, "Δ(r, 1) = Δ(r, 1/3) = 1 gives r = 0 or 1/2", got, set_text(&[sl("0"), sl("1/2")]));
    let images = [SlopeImage::ambiguous(sl("1/3"), sl("1/3")), SlopeImage::ambiguous(sl("0"), sl("1/4"))];
    let ds: BTreeSet<u64> = pushforward_constraints(&images)
        .map(|ms| ms.iter().map(|m| distance(Slope::INFINITY, m.apply(Slope::INFINITY))).collect())
        .unwrap_or_default();
    let text = format!("{ds:?}");
    c.equal(K::Solver, "Δ(m', f(m)) over the admissible f", text, "{9, 15}".to_string());
    c.check(K::Solver, "Δ(m', f(m)) ≥ 9", ds.first().is_some_and(|&d| d >= 9), || format!("{ds:?}"));
    for q in c.range() {
        if q >= p {
            continue;
        }
        let x = manifold(Section::Four, p, &s0("0"));
        for f in ["0", "1/3"] {
            let y = manifold(Section::Four, q, &s0(f));
            c.equal(K::NonHomeomorphism, format!("M_p(0) vs M_{q}({f})"), homeomorphic(&x, &y), Decision::No);
        }
    }
}

