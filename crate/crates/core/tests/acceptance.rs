use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;

use dehnfill::covers::{dbc_link, family_manifold};
use dehnfill::diagrams::{
    builtin_template, determinant, determinant_with_budget, instantiate, two_bridge_diagram, Net, CROSSING_BUDGET,
};
use dehnfill::manifolds::{homeomorphic, lens_equivalent, Decision, H1Order, Manifold};
use dehnfill::slopes::{distance, pushforward_constraints, solve_distance_system, BasisChange, Slope, SlopeImage};
use dehnfill::tangles::{
    cf_eval, fraction_to_cf, tabulated_fills, BoundaryLabel, Fraction, LinkDesc, Section,
};
use num_integer::Integer;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

type Fills = BTreeMap<BoundaryLabel, Fraction>;
type Verdict = Result<(), String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Verdict {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sl(s: &str) -> Slope {
    s.parse().unwrap()
}

fn fills(pairs: &[(BoundaryLabel, &str)]) -> Fills {
    pairs.iter().map(|(l, f)| (*l, f.parse().unwrap())).collect()
}

fn s0(f: &str) -> Fills {
    fills(&[(BoundaryLabel::S0, f)])
}

fn sample<S: Strategy>(s: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n).map(|_| s.new_tree(&mut runner).unwrap().current()).collect()
}

fn slope_in(bound: i64) -> impl Strategy<Value = Slope> {
    (-bound..=bound, 0..=bound)
        .prop_filter("primitive", |&(a, b)| a.gcd(&b) == 1)
        .prop_map(|(a, b)| Slope::new(a, b).unwrap())
}

fn slope_suite() -> Verdict {
    for (r, s, d) in [("inf", "-1/2", 2), ("0", "inf", 1), ("1/3", "inf", 3)] {
        let got = distance(sl(r), sl(s));
        ensure(got == d, || format!("Δ({r}, {s}) = {got}"))?;
    }
    let got = solve_distance_system(&[(sl("inf"), 1), (sl("-1/2"), 1)]).unwrap();
    ensure(got == [sl("-1"), sl("0")], || format!("cabling system gave {got:?}"))?;
    let got = solve_distance_system(&[(sl("1"), 1), (sl("1/3"), 1)]).unwrap();
    ensure(got == [sl("0"), sl("1/2")], || format!("reducible system gave {got:?}"))?;
    let systems = (slope_in(6), slope_in(6), 1u64..=4, 1u64..=4).prop_filter("distinct", |(r, s, _, _)| r != s);
    for (r1, r2, d1, d2) in sample(systems, 100) {
        let anchors = [(r1, d1), (r2, d2)];
        let mut brute = BTreeSet::new();
        for a in -50i64..=50 {
            for b in 0i64..=50 {
                if let Ok(r) = Slope::new(a, b) {
                    if anchors.iter().all(|&(s, d)| distance(r, s) == d) {
                        brute.insert(r);
                    }
                }
            }
        }
        let brute: Vec<Slope> = brute.into_iter().collect();
        let got = solve_distance_system(&anchors).unwrap();
        ensure(got == brute, || format!("{anchors:?}: solver {got:?}, brute force {brute:?}"))?;
    }
    Ok(())
}

fn lens_family() -> Verdict {
    for p in 2..=50 {
        let got = family_manifold(Section::Four, p, &s0("0")).map_err(|e| e.to_string())?;
        let want = Manifold::lens((p - 1) * (p + 3) + 1, p + 3);
        ensure(got == want, || format!("p = {p}: {got} vs {want}"))?;
    }
    let mut dets = Vec::new();
    for p in 2..=8 {
        let inst = instantiate(builtin_template(Section::Four), p, &s0("0")).map_err(|e| e.to_string())?;
        dets.push(determinant(&inst.diagram).map_err(|e| e.to_string())?);
    }
    ensure(dets == [6, 13, 22, 33, 46, 61, 78], || format!("determinants {dets:?}"))
}

fn tables() -> Verdict {
    use BoundaryLabel::{S0, S1};
    for p in 2..=50 {
        let m = |section, f: &Fills| family_manifold(section, p, f).map_err(|e| format!("p = {p}: {e}"));
        let rows = [
            (Section::Two, s0("inf"), Manifold::conn_sum([Manifold::SolidTorus, Manifold::RP3])),
            (Section::Two, s0("0"), Manifold::q(2 * p - 1, -2 * p - 1)),
            (Section::Two, s0("-1"), Manifold::q(2 * p + 1, -2 * p + 1)),
            (Section::Two, s0("-1/2"), Manifold::union(Manifold::cable(2, 1), Manifold::q(2 * p, -2 * p))),
            (Section::Three, s0("inf"), Manifold::conn_sum([Manifold::q(2, -2), Manifold::RP3])),
            (Section::Three, s0("0"), Manifold::conn_sum([Manifold::q(2 * p, -2 * p), Manifold::RP3])),
            (Section::Three, fills(&[(S0, "0"), (S1, "inf")]), Manifold::conn_sum([Manifold::S1XS2, Manifold::RP3])),
        ];
        for (section, f, want) in rows {
            let got = m(section, &f)?;
            ensure(got == want, || format!("section {section}, p = {p}, {f:?}: {got} vs {want}"))?;
            let n = got.boundary_count();
            let expected = section.labels().len() - f.len();
            ensure(n == Some(expected), || format!("{got} has {n:?} boundary tori, expected {expected}"))?;
        }
    }
    ensure(Section::Three.labels().len() == 2, || "section 3 should leave two tori unfilled".into())
}

fn distinguishing() -> Verdict {
    let split = dbc_link(&LinkDesc::split_union([LinkDesc::HOPF, LinkDesc::Unknot])).manifold;
    let lens = dbc_link(&LinkDesc::conn_sum([LinkDesc::HOPF, LinkDesc::two_bridge(4, 1).unwrap()])).manifold;
    ensure(split.h1_order() == H1Order::Infinite, || format!("H1({split}) = {}", split.h1_order()))?;
    ensure(lens.h1_order() == H1Order::Finite(8), || format!("H1({lens}) = {}", lens.h1_order()))?;
    let d = homeomorphic(&split, &lens);
    ensure(d == Decision::No, || format!("homeomorphic gave {d}"))
}

fn linking() -> Verdict {
    use BoundaryLabel::{S0, S1};
    for p in 2..=8 {
        for (f, want) in [(fills(&[(S0, "0"), (S1, "0")]), p), (fills(&[(S0, "1"), (S1, "inf")]), 2)] {
            let inst = instantiate(builtin_template(Section::Three), p, &f).map_err(|e| e.to_string())?;
            let lk = inst.diagram.linking_matrix().map_err(|e| e.to_string())?;
            let values: BTreeSet<i64> = lk.values().map(|v| v.abs()).collect();
            ensure(values.contains(&want), || format!("p = {p}, {f:?}: |lk| values {values:?}"))?;
        }
    }
    Ok(())
}

fn basis_changes() -> Verdict {
    for k in -10i64..=10 {
        let img = BasisChange::shear(k).apply(sl("-1/2"));
        let d = distance(sl("-1/2"), img);
        ensure(img == Slope::new(2 * k - 1, 2).unwrap() && d == 4 * k.unsigned_abs(), || {
            format!("k = {k}: image {img}, distance {d}")
        })?;
    }
    let ms = pushforward_constraints(&[
        SlopeImage::ambiguous(sl("1/3"), sl("1/3")),
        SlopeImage::ambiguous(sl("0"), sl("1/4")),
    ])
    .map_err(|e| e.to_string())?;
    let ds: BTreeSet<u64> = ms.iter().map(|m| distance(Slope::INFINITY, m.apply(Slope::INFINITY))).collect();
    ensure(ds == BTreeSet::from([9, 15]), || format!("pushforward distances {ds:?}"))
}

fn manifold_term() -> impl Strategy<Value = Manifold> {
    let prime = prop_oneof![
        (0i64..12, -20i64..20).prop_map(|(p, q)| Manifold::Lens { p, q }),
        prop::collection::vec((1i64..8, -7i64..8), 1..4).prop_map(Manifold::SfsDisk),
        Just(Manifold::SolidTorus),
        Just(Manifold::TorusI),
        (2i64..5, 1i64..4).prop_map(|(r, s)| Manifold::Cable { r, s }),
    ];
    prime.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Manifold::ConnSum),
            (inner.clone(), inner).prop_map(|(a, b)| Manifold::union(a, b)),
        ]
    })
}

fn property_suites() -> Verdict {
    for num in -200i64..=200 {
        for den in 1i64..=200 {
            if num.gcd(&den) != 1 {
                continue;
            }
            let f = Fraction::new(num, den).unwrap();
            let back = fraction_to_cf(f).and_then(|cf| cf_eval(&cf)).map_err(|e| e.to_string())?;
            ensure(back == f, || format!("{f} came back as {back}"))?;
        }
    }
    for m in sample(manifold_term(), 1000) {
        let n = m.normalize();
        ensure(n.normalize() == n, || format!("normalize is not idempotent on {m:?}"))?;
    }
    for p in 2i64..=30 {
        for q in (1..p).filter(|q| q.gcd(&p) == 1) {
            let inv = (1..p).find(|x| (q * x) % p == 1).unwrap();
            for q2 in (1..p).filter(|q2| q2.gcd(&p) == 1) {
                let brute = [q, p - q, inv, p - inv].contains(&q2);
                ensure(lens_equivalent(p, q, p, q2) == brute, || format!("L({p},{q}) vs L({p},{q2})"))?;
            }
        }
    }
    for (name, f) in [("hopf", "1/2"), ("trefoil", "1/3"), ("mirror trefoil", "-1/3"), ("b(4,1)", "1/4")] {
        let t = Net::rational(f.parse().unwrap());
        let base = determinant(&t.denominator_closure().flatten().unwrap().diagram).unwrap();
        for variant in [
            t.sum(&Net::crossing(true)),
            t.sum(&Net::crossing(false)),
            t.sum(&Net::integer(2)).sum(&Net::integer(-2)),
        ] {
            let d = determinant(&variant.denominator_closure().flatten().unwrap().diagram).unwrap();
            ensure(d == base, || format!("{name}: Reidemeister variant has determinant {d}, expected {base}"))?;
        }
    }
    for p in 2i64..=40 {
        for q in (1..p).filter(|q| q.gcd(&p) == 1) {
            let d = determinant_with_budget(&two_bridge_diagram(p, q).unwrap(), 64).map_err(|e| e.to_string())?;
            ensure(d == p as u64, || format!("b({p},{q}) has determinant {d}"))?;
        }
    }
    let mut compared = 0;
    for section in [Section::Two, Section::Three, Section::Four] {
        for f in tabulated_fills(section) {
            for p in 2..=8 {
                let want = match family_manifold(section, p, &f).map_err(|e| e.to_string())?.h1_order() {
                    H1Order::Finite(n) => n,
                    H1Order::Infinite => 0,
                    H1Order::NotApplicable => continue,
                };
                let inst = instantiate(builtin_template(section), p, &f).map_err(|e| e.to_string())?;
                if inst.diagram.crossings().len() > CROSSING_BUDGET {
                    continue;
                }
                let d = determinant(&inst.diagram).map_err(|e| e.to_string())?;
                ensure(d == want, || format!("section {section}, p = {p}, {f:?}: det {d}, |H1| {want}"))?;
                compared += 1;
            }
        }
    }
    ensure(compared > 0, || "no closed family instance fit the budget".into())
}

fn run_cli(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dehnfill")).args(args).output().expect("binary runs");
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn cli_contract() -> Verdict {
    let got = run_cli(&["distance", "inf", "-1/2"]);
    ensure(got == (Some(0), "2\n".into()), || format!("distance: {got:?}"))?;
    let got = run_cli(&["solve", "--anchor", "1:1", "--anchor", "1/3:1"]);
    ensure(got == (Some(0), "0, 1/2\n".into()), || format!("solve: {got:?}"))?;
    let (code, out) = run_cli(&["verify", "--check", "L4.1", "--p", "2..8"]);
    let summary = out.lines().last().unwrap_or_default().to_string();
    ensure(code == Some(0) && summary.contains(" 0 failed"), || format!("verify: exit {code:?}, {summary}"))?;
    let (code, _) = run_cli(&["distance", "inf"]);
    ensure(code == Some(2), || format!("usage error exit {code:?}"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("slope distances and distance systems", slope_suite),
        ("lens space family and its determinants", lens_family),
        ("section 2 and 3 cover tables with boundary counts", tables),
        ("split sum against lens sum", distinguishing),
        ("circle linking numbers after filling", linking),
        ("shears and the pushforward distance set", basis_changes),
        ("property suites", property_suites),
        ("command line contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(()) => println!("criterion {}: pass  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
