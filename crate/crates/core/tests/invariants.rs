use hform_core::action::is_invariant;
use hform_core::bracket::bracket;
use hform_core::constants::*;
use hform_core::forms::{bracket_product_form, Form, Side};

fn cubic() -> Form {
    Form::extract(&bracket_product_form(&[1, 2, 3]), Side::Right).unwrap()
}

#[test]
fn j_matches_printed_rows() {
    let j = named_invariant("j").unwrap();
    for (a, b) in [(3, 0), (2, 1), (1, 2), (0, 3)] {
        let mine = j.prefix_part(a, b);
        let theirs = printed_row(3, J_PRINTED, a, b).unwrap();
        assert!(mine.equivalent(&theirs).unwrap(), "row x^{a} y^{b}");
    }
}

#[test]
fn d3_matches_printed() {
    let d3 = named_invariant("d3").unwrap();
    assert!(d3.equivalent(&printed(3, D3_PRINTED).unwrap()).unwrap());
}

#[test]
fn cubic_syzygy_vanishes() {
    assert!(syzygy_residual(&cubic()).unwrap().is_zero());
}

#[test]
fn discriminant_of_the_hessian() {
    assert!(discriminant_of_hessian_residual(&cubic()).unwrap().is_zero());
}

#[test]
fn covariants_are_invariant_elements() {
    let f = Form::extract(&bracket_product_form(&[2, 4, 5]), Side::Right).unwrap();
    for name in ["hessian", "j", "d3"] {
        let v = named_invariant(name).unwrap().instantiate(&f).unwrap();
        assert!(is_invariant(&v), "{name}");
    }
    let d2 = named_invariant("d2").unwrap();
    let q = Form::extract(&bracket_product_form(&[1, 2]), Side::Right).unwrap();
    assert_eq!(d2.instantiate(&q).unwrap(), (&bracket(1, 2) * &bracket(1, 2)).scale_int(-1).scale(&hform_core::Scalar::from_frac(1, 2)));
}
