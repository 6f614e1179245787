//! Named invariants, their normalizations, and the printed reference tables.
//!
//! Each named invariant is `factor · cascade(symbol)`. The factors were fixed
//! by comparison with the printed tables below; the comparisons are tests.

use crate::bracket::BracketPoly;
use crate::error::{Error, Result};
use crate::forms::{Form, Side};
use crate::pbw::PBWPoly;
use crate::scalar::Scalar;
use crate::symbolic::{symbolic_invariant, AbstractInvariant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NamedInvariant {
    pub name: &'static str,
    pub symbol: &'static str,
    pub degree: u32,
    pub factor: (i64, i64),
}

pub const NAMED: [NamedInvariant; 4] = [
    NamedInvariant { name: "d2", symbol: "(12)^2", degree: 2, factor: (1, 1) },
    NamedInvariant { name: "hessian", symbol: "(01)*(02)*(12)^2", degree: 3, factor: (1, 1) },
    NamedInvariant { name: "j", symbol: "(01)^2*(02)*(13)*(23)^2", degree: 3, factor: (1, 1) },
    NamedInvariant { name: "d3", symbol: "(12)^2*(34)^2*(13)*(24)", degree: 3, factor: (1, 2) },
];

/// The quadratic covariant entering `4Δ³ + j² + d₃f² = 0` is this multiple of `hessian`.
pub const SYZYGY_DELTA_FACTOR: (i64, i64) = (1, 2);

/// `d2(hessian) = DISCRIMINANT_OF_HESSIAN · d3`, with the hessian read as a binomial quadratic form.
pub const DISCRIMINANT_OF_HESSIAN: (i64, i64) = (2, 1);

pub fn lookup(name: &str) -> Option<&'static NamedInvariant> {
    NAMED.iter().find(|n| n.name == name)
}

fn frac(f: (i64, i64)) -> Scalar {
    Scalar::from_frac(f.0, f.1)
}

impl NamedInvariant {
    pub fn invariant(&self) -> Result<AbstractInvariant> {
        let sym = BracketPoly::parse(self.symbol)?;
        Ok(symbolic_invariant(&sym, self.degree)?.scale(&frac(self.factor)))
    }
}

pub fn named_invariant(name: &str) -> Result<AbstractInvariant> {
    lookup(name).ok_or_else(|| Error::Invalid(format!("unknown invariant `{name}`")))?.invariant()
}

/// `4Δ³ + j² + d₃f²` for a cubic form, with `Δ = SYZYGY_DELTA_FACTOR · hessian`.
pub fn syzygy_residual(f: &Form) -> Result<PBWPoly> {
    if f.n != 3 {
        return Err(Error::Invalid("the syzygy concerns cubic forms".into()));
    }
    let delta = named_invariant("hessian")?.instantiate(f)?.scale(&frac(SYZYGY_DELTA_FACTOR));
    let j = named_invariant("j")?.instantiate(f)?;
    let d3 = named_invariant("d3")?.instantiate(f)?;
    let fp = f.reconstruct();
    let d2 = &delta * &delta;
    Ok(&(&(&d2 * &delta).scale_int(4) + &(&j * &j)) + &(&(&d3 * &fp) * &fp))
}

/// `d2(hessian) − DISCRIMINANT_OF_HESSIAN · d3` on a cubic form.
pub fn discriminant_of_hessian_residual(f: &Form) -> Result<PBWPoly> {
    let hess = named_invariant("hessian")?.instantiate(f)?;
    let q = Form::extract_unchecked(&hess, Side::Right)?;
    let lhs = named_invariant("d2")?.instantiate(&q)?;
    let d3 = named_invariant("d3")?.instantiate(f)?;
    Ok(&lhs - &d3.scale(&frac(DISCRIMINANT_OF_HESSIAN)))
}

pub type WordTable = &'static [(&'static str, &'static str)];

/// Printed rewritings of `d2`, each in its own letter order.
pub const D2_PRINTED: [WordTable; 4] = [
    &[("AC", "2"), ("BB", "-2"), ("AB", "-2*h"), ("AA", "3/2*h^2")],
    &[("AC", "1"), ("CA", "1"), ("BB", "-2"), ("AB", "h"), ("BA", "h"), ("AA", "-5/2*h^2")],
    &[("AC", "3/2"), ("CA", "1/2"), ("BB", "-2"), ("AA", "-3/2*h^2")],
    &[("AC", "1"), ("CA", "1"), ("BB", "-2"), ("AB", "-h/4"), ("BA", "9*h/4")],
];

/// `x²K + xyL + y²M`.
pub const HESSIAN_PRINTED: WordTable = &[
    ("xxAC", "2"),
    ("xxBB", "-2"),
    ("xxAB", "-4*h"),
    ("xxAA", "2*h^2"),
    ("xyAD", "2"),
    ("xyBC", "-2"),
    ("xyAC", "-2*h"),
    ("xyAB", "4*h^2"),
    ("xyAA", "-2*h^3"),
    ("yyBD", "2"),
    ("yyCC", "-2"),
    ("yyAD", "-4*h"),
    ("yyBB", "6*h^2"),
    ("yyAB", "-6*h^3"),
    ("yyAA", "8*h^4"),
];

pub const D3_PRINTED: WordTable = &[
    ("AADD", "-1"),
    ("ABCD", "6"),
    ("ACCC", "-4"),
    ("BBBD", "-4"),
    ("BBCC", "3"),
    ("ABBD", "-18*h"),
    ("ABCC", "9*h"),
    ("AACD", "-9*h"),
    ("BBBB", "-9*h^2"),
    ("AABD", "40*h^2"),
    ("AACC", "-7*h^2"),
    ("ABBC", "12*h^2"),
    ("AAAD", "-72*h^3"),
    ("AABC", "-36*h^3"),
    ("ABBB", "-66*h^3"),
    ("AABB", "150*h^4"),
    ("AAAC", "76*h^4"),
    ("AAAB", "-384*h^5"),
    ("AAAA", "652*h^6"),
];

pub const J_PRINTED: WordTable = &[
    ("xxxAAD", "1"),
    ("xxxABC", "-3"),
    ("xxxBBB", "2"),
    ("xxxABB", "9*h"),
    ("xxxAAB", "-2*h^2"),
    ("xxxAAA", "6*h^3"),
    ("xxyABD", "3"),
    ("xxyACC", "-6"),
    ("xxyBBC", "3"),
    ("xxyAAD", "-9*h"),
    ("xxyABC", "12*h"),
    ("xxyBBB", "-3*h"),
    ("xxyABB", "-6*h^2"),
    ("xxyAAB", "-12*h^3"),
    ("xxyAAA", "6*h^4"),
    ("xyyACD", "-3"),
    ("xyyBBD", "6"),
    ("xyyBCC", "-3"),
    ("xyyABD", "-6*h"),
    ("xyyACC", "9*h"),
    ("xyyBBC", "-3*h"),
    ("xyyAAD", "30*h^2"),
    ("xyyABC", "-12*h^2"),
    ("xyyBBB", "12*h^2"),
    ("xyyABB", "-12*h^3"),
    ("xyyAAB", "60*h^4"),
    ("xyyAAA", "-90*h^5"),
    ("yyyADD", "-1"),
    ("yyyBCD", "3"),
    ("yyyCCC", "-2"),
    ("yyyBBD", "-15*h"),
    ("yyyBCC", "6*h"),
    ("yyyABD", "36*h^2"),
    ("yyyACC", "-8*h^2"),
    ("yyyBBC", "6*h^2"),
    ("yyyAAD", "-102*h^3"),
    ("yyyABC", "-18*h^3"),
    ("yyyBBB", "-42*h^3"),
    ("yyyAAC", "38*h^4"),
    ("yyyABB", "126*h^4"),
    ("yyyAAB", "-378*h^5"),
    ("yyyAAA", "704*h^6"),
];

pub fn printed(n: u32, table: WordTable) -> Result<AbstractInvariant> {
    AbstractInvariant::from_words(n, table)
}

/// The part of `inv` carrying `x^a y^b`.
pub fn printed_row(n: u32, table: WordTable, a: u16, b: u16) -> Result<AbstractInvariant> {
    Ok(printed(n, table)?.prefix_part(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::special_form;

    #[test]
    fn printed_d2_rewritings() {
        let d2 = named_invariant("d2").unwrap();
        for t in D2_PRINTED {
            assert!(d2.equivalent(&printed(2, t).unwrap()).unwrap());
        }
    }

    #[test]
    fn hessian_matches_printed() {
        let hess = named_invariant("hessian").unwrap();
        assert!(hess.equivalent(&printed(3, HESSIAN_PRINTED).unwrap()).unwrap());
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(lookup("d3").unwrap().factor, (1, 2));
        assert!(lookup("t").is_none());
        assert!(named_invariant("q").is_err());
    }

    #[test]
    fn syzygy_rejects_quadratics() {
        assert!(syzygy_residual(&special_form(2)).is_err());
    }
}
