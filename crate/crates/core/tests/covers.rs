use std::collections::BTreeMap;

use dehnfill::covers::{dbc, dbc_link, family_cover, family_manifold, filling_slope, BranchSet, RULES, STANDARD};
use dehnfill::diagrams::{builtin_template, determinant, instantiate, link_diagram, CROSSING_BUDGET};
use dehnfill::manifolds::{H1Order, Manifold};
use dehnfill::slopes::Slope;
use dehnfill::tangles::{parse_input, BoundaryLabel, Fraction, LinkDesc, Section};
use proptest::prelude::*;

fn fills(pairs: &[(BoundaryLabel, &str)]) -> BTreeMap<BoundaryLabel, Fraction> {
    pairs.iter().map(|(l, s)| (*l, s.parse().unwrap())).collect()
}

fn s0(s: &str) -> BTreeMap<BoundaryLabel, Fraction> {
    fills(&[(BoundaryLabel::S0, s)])
}

fn cover_of(text: &str) -> Manifold {
    dbc(&BranchSet::from(parse_input(text).unwrap())).manifold
}

#[test]
fn dictionary_examples() {
    assert_eq!(cover_of("hopf"), Manifold::RP3);
    assert_eq!(
        dbc_link(&LinkDesc::conn_sum([LinkDesc::TREFOIL, LinkDesc::HOPF])).manifold,
        Manifold::conn_sum([Manifold::lens(3, 1), Manifold::lens(2, 1)])
    );
    assert_eq!(
        dbc_link(&LinkDesc::split_union([LinkDesc::HOPF, LinkDesc::Unknot])).manifold,
        Manifold::conn_sum([Manifold::S1XS2, Manifold::RP3])
    );
    assert_eq!(cover_of("b(6,5)"), Manifold::lens(6, 5));
    assert_eq!(cover_of("T[1/3] + T[-1/5]"), Manifold::q(3, -5));
    assert_eq!(cover_of("T[2/7]"), Manifold::SolidTorus);
    assert_eq!(dbc(&BranchSet::Product).manifold, Manifold::TorusI);
}

#[test]
fn rules_carry_provenance() {
    for r in RULES {
        assert!(r.provenance == STANDARD || r.provenance.starts_with('L') || r.provenance.starts_with('T'));
    }
    let names: std::collections::BTreeSet<_> = RULES.iter().map(|r| r.name).collect();
    assert_eq!(names.len(), RULES.len());
    let c = dbc_link(&LinkDesc::conn_sum([LinkDesc::TREFOIL, LinkDesc::HOPF]));
    assert_eq!(c.chain, vec!["link-sum", "two-bridge", "hopf"]);
}

#[test]
fn filling_slope_is_identity() {
    assert_eq!(filling_slope(Fraction::INFINITY), Slope::INFINITY);
    assert_eq!(filling_slope(Fraction::ZERO), Slope::ZERO);
    assert_eq!(filling_slope("-1/2".parse().unwrap()), Slope::new(-1, 2).unwrap());
}

#[test]
fn section_two_table() {
    for p in 2..=50 {
        let m = |s: &str| family_manifold(Section::Two, p, &s0(s)).unwrap();
        assert_eq!(m("inf"), Manifold::conn_sum([Manifold::SolidTorus, Manifold::RP3]));
        assert_eq!(m("0"), Manifold::q(2 * p - 1, -2 * p - 1));
        assert_eq!(m("-1"), Manifold::q(2 * p + 1, -2 * p + 1));
        assert_eq!(m("-1/2"), Manifold::union(Manifold::cable(2, 1), Manifold::q(2 * p, -2 * p)));
        assert!(m("-1/2").classify_flags().toroidal);
        assert!(m("inf").classify_flags().reducible && m("inf").classify_flags().boundary_reducible);
    }
    assert_eq!(
        family_manifold(Section::Two, 3, &s0("0")).unwrap().to_string(),
        "Q(5,-7)"
    );
}

#[test]
fn section_three_table() {
    use BoundaryLabel::{S0, S1};
    for p in 2..=50 {
        let m = |f: &[(BoundaryLabel, &str)]| family_manifold(Section::Three, p, &fills(f)).unwrap();
        assert_eq!(m(&[(S0, "inf")]), Manifold::conn_sum([Manifold::q(2, -2), Manifold::RP3]));
        assert_eq!(m(&[(S0, "0")]), Manifold::conn_sum([Manifold::q(2 * p, -2 * p), Manifold::RP3]));
        assert_eq!(m(&[(S0, "0"), (S1, "inf")]), Manifold::conn_sum([Manifold::S1XS2, Manifold::RP3]));
        for e in ["1", "-1"] {
            let got = m(&[(S0, e), (S1, "inf")]);
            assert_eq!(got.h1_order(), H1Order::Finite(8));
        }
    }
}

#[test]
fn section_four_table() {
    for p in 2..=50 {
        let m = |s: &str| family_manifold(Section::Four, p, &s0(s)).unwrap();
        assert_eq!(m("0"), Manifold::lens((p - 1) * (p + 3) + 1, p + 3));
        assert_eq!(m("1/3"), Manifold::conn_sum([Manifold::lens(3, 1), Manifold::lens(2, 1)]));
        let inf = m("inf");
        assert!(inf.is_closed());
        let f = inf.classify_flags();
        assert!(f.toroidal && !f.seifert_fibered && !f.reducible);
        assert!(matches!(m("1"), Manifold::Unknown(_)));
    }
}

#[test]
fn boundary_counts_follow_unfilled_spheres() {
    for section in [Section::Two, Section::Three, Section::Four] {
        for fl in dehnfill::tangles::tabulated_fills(section) {
            let c = family_cover(section, 4, &fl).unwrap();
            if let Some(n) = c.manifold.boundary_count() {
                assert_eq!(n, section.labels().len() - fl.len(), "{section} {fl:?}");
            }
        }
    }
}

#[test]
fn lens_family_against_diagrams() {
    let t = builtin_template(Section::Four);
    for p in 2..=8 {
        let inst = instantiate(t, p, &s0("0")).unwrap();
        let det = determinant(&inst.diagram).unwrap();
        let m = family_manifold(Section::Four, p, &s0("0")).unwrap();
        assert_eq!(m.h1_order(), H1Order::Finite(det), "p = {p}");
    }
}

#[test]
fn closed_family_fills_against_diagrams() {
    for (section, fl) in [
        (Section::Four, s0("1/3")),
        (Section::Four, s0("inf")),
        (Section::Three, fills(&[(BoundaryLabel::S0, "0"), (BoundaryLabel::S1, "inf")])),
        (Section::Three, fills(&[(BoundaryLabel::S0, "1"), (BoundaryLabel::S1, "inf")])),
    ] {
        for p in 2..=5 {
            let m = family_manifold(section, p, &fl).unwrap();
            let inst = instantiate(builtin_template(section), p, &fl).unwrap();
            if inst.diagram.crossings().len() > CROSSING_BUDGET {
                continue;
            }
            let det = determinant(&inst.diagram).unwrap();
            match m.h1_order() {
                H1Order::Finite(n) => assert_eq!(n, det, "{section} p={p} {fl:?}"),
                H1Order::Infinite => assert_eq!(det, 0, "{section} p={p} {fl:?}"),
                H1Order::NotApplicable => {}
            }
        }
    }
}

fn prime_link() -> impl Strategy<Value = LinkDesc> {
    prop_oneof![
        Just(LinkDesc::Unknot),
        (2i64..14, 1i64..14)
            .prop_filter("coprime", |(p, q)| num_gcd(*p, *q) == 1)
            .prop_map(|(p, q)| LinkDesc::two_bridge(p, q).unwrap()),
    ]
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

fn link() -> impl Strategy<Value = LinkDesc> {
    prime_link().prop_recursive(2, 6, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(LinkDesc::conn_sum),
            prop::collection::vec(inner, 2..3).prop_map(LinkDesc::split_union),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cover_respects_connected_sum(a in link(), b in link()) {
        let joint = dbc_link(&LinkDesc::conn_sum([a.clone(), b.clone()])).manifold;
        let parts = Manifold::conn_sum([dbc_link(&a).manifold, dbc_link(&b).manifold]);
        prop_assert_eq!(joint, parts);
    }

    #[test]
    fn cover_homology_matches_determinant(l in link()) {
        let d = link_diagram(&l).unwrap();
        prop_assume!(d.crossings().len() <= 18);
        let det = determinant(&d).unwrap();
        match dbc_link(&l).manifold.h1_order() {
            H1Order::Finite(n) => prop_assert_eq!(n, det),
            H1Order::Infinite => prop_assert_eq!(det, 0),
            H1Order::NotApplicable => prop_assert!(false, "closed link gave a bounded cover"),
        }
    }
}
