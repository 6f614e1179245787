use hform_core::bracket::BracketPoly;
use hform_core::localization::LocElement;
use hform_core::PBWPoly;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = String> {
    prop_oneof![
        (-5i64..6).prop_map(|n| n.to_string()),
        (-3i64..4, 1i64..4).prop_map(|(a, b)| format!("({a}/{b})")),
        Just("h".to_string()),
        Just("(eps - 1)".to_string()),
        Just("(2*h^2 + eps*h)".to_string()),
    ]
}

fn letter() -> impl Strategy<Value = String> {
    (prop::bool::ANY, 0u32..4, 1u32..3, prop::bool::ANY).prop_map(|(x, i, e, d)| format!("{}{}{i}^{e}", if d { "d" } else { "" }, if x { "x" } else { "y" }))
}

fn pbw_source() -> impl Strategy<Value = String> {
    prop::collection::vec((coeff(), prop::collection::vec(letter(), 0..4)), 1..4)
        .prop_map(|terms| terms.into_iter().map(|(c, w)| std::iter::once(c).chain(w).collect::<Vec<_>>().join("*")).collect::<Vec<_>>().join(" + "))
}

fn bracket_source() -> impl Strategy<Value = String> {
    let br = (1u32..5, 1u32..5, 1u32..3).prop_filter("distinct", |(i, j, _)| i != j).prop_map(|(i, j, e)| format!("({i}{j})^{e}"));
    prop::collection::vec((coeff(), prop::collection::vec(br, 0..3)), 1..4)
        .prop_map(|terms| terms.into_iter().map(|(c, w)| std::iter::once(c).chain(w).collect::<Vec<_>>().join("*")).collect::<Vec<_>>().join(" - "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pbw_print_parse(src in pbw_source()) {
        let p = PBWPoly::parse(&src).unwrap();
        prop_assert_eq!(PBWPoly::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn bracket_print_parse(src in bracket_source()) {
        let e = BracketPoly::parse(&src).unwrap();
        prop_assert_eq!(BracketPoly::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn localized_print_parse(src in pbw_source(), i in 0u32..3, e in 1u32..3) {
        let a = LocElement::parse(&format!("({src})*inv(y{i}^{e})")).unwrap();
        prop_assert_eq!(LocElement::parse(&a.to_string()).unwrap(), a);
    }
}
