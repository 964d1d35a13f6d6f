use std::collections::BTreeMap;

use dehnfill::diagrams::{
    builtin_template, determinant, determinant_with_budget, instantiate, rational_tangle, two_bridge_diagram, Diagram,
    DiagramError, Net, PExpr,
};
use dehnfill::tangles::{BoundaryLabel, Fraction, Section};
use proptest::prelude::*;

fn frac(s: &str) -> Fraction {
    s.parse().unwrap()
}

#[test]
fn small_links() {
    assert_eq!(determinant(&Diagram::unknot()).unwrap(), 1);
    let hopf = Diagram::closed(vec![[0, 2, 1, 3], [2, 0, 3, 1]]).unwrap();
    assert_eq!(hopf.component_count(), 2);
    assert_eq!(determinant(&hopf).unwrap(), 2);
    let trefoil = Diagram::closed(vec![[0, 3, 1, 4], [4, 1, 5, 2], [2, 5, 3, 0]]).unwrap();
    assert_eq!(trefoil.component_count(), 1);
    assert_eq!(determinant(&trefoil).unwrap(), 3);
    assert_eq!(determinant(&trefoil.mirror()).unwrap(), 3);
}

#[test]
fn split_and_open_diagrams() {
    let split = Net::zero().numerator_closure().flatten().unwrap().diagram;
    assert_eq!(split.loops(), 2);
    assert_eq!(determinant(&split).unwrap(), 0);
    let t = rational_tangle(frac("1/2"));
    assert_eq!(t.crossings().len(), 2);
    assert_eq!(t.endpoints().len(), 4);
    assert!(matches!(determinant(&t), Err(DiagramError::Open(4))));
}

#[test]
fn two_bridge_determinants() {
    for (p, q) in [(2, 1), (3, 1), (5, 2), (7, 3), (8, 3), (13, 5)] {
        let d = two_bridge_diagram(p, q).unwrap();
        assert_eq!(determinant(&d).unwrap(), p as u64, "{p}/{q}");
    }
}

#[test]
fn hopf_linking_number() {
    let d = two_bridge_diagram(2, 1).unwrap();
    let lk = d.linking_matrix().unwrap();
    assert_eq!(lk.values().map(|v| v.abs()).collect::<Vec<_>>(), vec![1]);
    let d = two_bridge_diagram(4, 1).unwrap();
    assert_eq!(d.linking_matrix().unwrap().values().map(|v| v.abs()).collect::<Vec<_>>(), vec![2]);
}

#[test]
fn pexpr_evaluates() {
    let e = PExpr::parse("(p-1)*(p+3) + 1").unwrap();
    assert_eq!(e.eval(2).unwrap(), 6);
    assert_eq!(PExpr::parse("-p*-2").unwrap().eval(5).unwrap(), 10);
    assert!(PExpr::parse("p +").is_err());
    assert!(PExpr::parse("2q").is_err());
}

#[test]
fn section_four_zero_fill() {
    let t = builtin_template(Section::Four);
    let fills = BTreeMap::from([(BoundaryLabel::S0, frac("0"))]);
    for (p, det) in [(2, 6), (3, 13), (4, 22)] {
        let inst = instantiate(t, p, &fills).unwrap();
        assert!(inst.diagram.is_closed());
        assert_eq!(determinant(&inst.diagram).unwrap(), det);
    }
}

#[test]
fn section_three_double_zero_fill() {
    let t = builtin_template(Section::Three);
    let fills = BTreeMap::from([(BoundaryLabel::S0, frac("0")), (BoundaryLabel::S1, frac("0"))]);
    let inst = instantiate(t, 2, &fills).unwrap();
    assert_eq!(inst.diagram.component_count(), 4);
}

#[test]
fn bundled_template_checks() {
    for s in [Section::Two, Section::Three, Section::Four] {
        let t = builtin_template(s);
        for p in 2..=5 {
            for c in &t.checks {
                let v = c.violations(t, p).unwrap();
                assert!(v.is_empty(), "{} p={p} {:?}: {v:?}", t.name, c.fills);
            }
        }
    }
}

#[test]
fn unknown_sphere_rejected() {
    let t = builtin_template(Section::Four);
    let fills = BTreeMap::from([(BoundaryLabel::S1, frac("0"))]);
    assert!(matches!(instantiate(t, 2, &fills), Err(DiagramError::UnknownSphere(_))));
}

#[test]
fn two_bridge_determinants_up_to_forty() {
    for p in 2i64..=40 {
        for q in 1..p {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let d = two_bridge_diagram(p, q).unwrap();
            assert_eq!(determinant_with_budget(&d, 64).unwrap(), p as u64, "b({p},{q})");
        }
    }
}

fn small_fraction() -> impl Strategy<Value = Fraction> {
    prop_oneof![
        Just(frac("1/2")),
        Just(frac("-1/2")),
        Just(frac("1/3")),
        Just(frac("-1/3")),
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Fraction::reduced(n, d).unwrap()),
    ]
}

fn closed(net: &Net) -> Diagram {
    net.denominator_closure().flatten().unwrap().diagram
}

proptest! {
    #[test]
    fn determinant_survives_a_kink(f in small_fraction(), positive in any::<bool>()) {
        let t = Net::rational(f);
        let kinked = t.sum(&Net::crossing(positive));
        prop_assert_eq!(determinant(&closed(&kinked)).unwrap(), determinant(&closed(&t)).unwrap());
    }

    #[test]
    fn determinant_survives_cancelling_twists(f in small_fraction(), n in 1i64..=4) {
        let t = Net::rational(f);
        let twisted = t.sum(&Net::integer(n)).sum(&Net::integer(-n));
        let (a, b) = (twisted.numerator_closure(), t.numerator_closure());
        let (a, b) = (a.flatten().unwrap().diagram, b.flatten().unwrap().diagram);
        prop_assert_eq!(determinant(&a).unwrap(), determinant(&b).unwrap());
        prop_assert_eq!(determinant(&closed(&twisted)).unwrap(), determinant(&closed(&t)).unwrap());
    }

    #[test]
    fn determinant_ignores_labels_and_mirrors(f in small_fraction(), shift in 1u32..1000) {
        let d = closed(&Net::rational(f));
        let relabeled: Vec<[u32; 4]> = d.crossings().iter().map(|c| c.map(|a| a + shift)).collect();
        let relabeled = if relabeled.is_empty() { d.clone() } else { Diagram::closed(relabeled).unwrap() };
        let det = determinant(&d).unwrap();
        prop_assert_eq!(determinant(&relabeled).unwrap(), det);
        prop_assert_eq!(determinant(&d.mirror()).unwrap(), det);
    }
}
