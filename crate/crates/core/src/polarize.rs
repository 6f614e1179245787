//! Polarization operators and the substitution homomorphism.
//!
//! `Δ` replaces one letter of the source index by the matching letter of the
//! target (an index, or the coordinates `X, Y` of a point), summed over all
//! positions by the Leibniz rule. `P = Δ / deg`. `G` replaces every source
//! letter at once and is an algebra homomorphism.

use crate::bracket::BracketPoly;
use crate::error::{Error, Result};
use crate::forms::Point;
use crate::oracle::CommPoly;
use crate::pbw::{Block, Index, Monomial, PBWPoly, Slot};
use crate::ring::Ring;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum PolarTarget {
    Index(Index),
    Point(Point<PBWPoly>),
}

impl PolarTarget {
    fn point(&self) -> Point<PBWPoly> {
        match self {
            PolarTarget::Index(l) => crate::forms::coordinate_point(*l),
            PolarTarget::Point(p) => p.clone(),
        }
    }
}

fn block_poly(slot: Slot, x: u16, y: u16) -> PBWPoly {
    PBWPoly::monomial(Monomial::from_blocks([Block { slot, x, y }]))
}

/// `Σ` over letter positions of the block `x^a y^b`, one letter replaced by the point.
fn delta_block<R: Ring>(slot: Slot, a: u16, b: u16, p: &Point<R>) -> R {
    let mut out = R::zero();
    let lift = |x, y| R::from_pbw(&block_poly(slot, x, y));
    for k in 0..a {
        out = out.plus(&lift(k, 0).times(&p.x).times(&lift(a - k - 1, b)));
    }
    for k in 0..b {
        out = out.plus(&lift(a, k).times(&p.y).times(&lift(0, b - k - 1)));
    }
    out
}

fn split(m: &Monomial, slot: Slot) -> (PBWPoly, Option<Block>, PBWPoly) {
    let (pre, blk, post) = m.split_at_slot(slot);
    (PBWPoly::monomial(pre), blk, PBWPoly::monomial(post))
}

/// Unnormalized `Δ_{(x_src, y_src), (X, Y)}` into an arbitrary ring.
pub fn delta_to<R: Ring>(a: &PBWPoly, src: Index, p: &Point<R>) -> R {
    let slot = Slot::base(src);
    let mut out = R::zero();
    for (m, c) in a.terms() {
        let (pre, blk, post) = split(m, slot);
        let Some(blk) = blk else { continue };
        let mid = delta_block(slot, blk.x, blk.y, p);
        let t = R::from_pbw(&pre).times(&mid).times(&R::from_pbw(&post));
        out = out.plus(&t.scaled(c));
    }
    out
}

/// `Δ` toward an index or a point with normal-form coordinates.
pub fn delta(a: &PBWPoly, src: Index, dst: &PolarTarget) -> PBWPoly {
    delta_to(a, src, &dst.point())
}

/// `Δ` or, when `normalized`, `P = Δ / deg_src`.
pub fn polarize(a: &PBWPoly, src: Index, dst: &PolarTarget, normalized: bool) -> Result<PBWPoly> {
    let d = delta(a, src, dst);
    if !normalized {
        return Ok(d);
    }
    let n = a.degree_in(Slot::base(src)).ok_or(Error::Inhomogeneous(src))?;
    if n == 0 {
        return Ok(PBWPoly::zero());
    }
    Ok(d.scale(&Scalar::from_frac(1, n as i64)))
}

/// `P^k`.
pub fn polarize_pow(a: &PBWPoly, src: Index, dst: &PolarTarget, k: u32) -> Result<PBWPoly> {
    let mut cur = a.clone();
    for _ in 0..k {
        cur = polarize(&cur, src, dst, true)?;
    }
    Ok(cur)
}

/// `P_{ij}` on bracket indices.
pub fn p_index(a: &PBWPoly, i: Index, j: Index) -> Result<PBWPoly> {
    polarize(a, i, &PolarTarget::Index(j), true)
}

/// The homomorphism `G`: `x_src ↦ X`, `y_src ↦ Y`, other generators fixed.
pub fn substitute<R: Ring>(a: &PBWPoly, src: Index, p: &Point<R>) -> R {
    let slot = Slot::base(src);
    let mut out = R::zero();
    for (m, c) in a.terms() {
        let (pre, blk, post) = split(m, slot);
        let mid = match blk {
            Some(b) => p.x.power(b.x as u32).times(&p.y.power(b.y as u32)),
            None => R::one(),
        };
        let t = R::from_pbw(&pre).times(&mid).times(&R::from_pbw(&post));
        out = out.plus(&t.scaled(c));
    }
    out
}

/// `(Xk) = X y_k − Y x_k − h Y y_k`.
pub fn point_bracket<R: Ring>(p: &Point<R>, k: Index) -> R {
    let xk = R::from_pbw(&PBWPoly::x(k));
    let yk = R::from_pbw(&PBWPoly::y(k));
    p.x.times(&yk).minus(&p.y.times(&xk)).minus(&p.y.times(&yk).scaled(&Scalar::h()))
}

/// A formula in brackets, normalized polarizations between indices, and scalars.
#[derive(Clone, Debug, PartialEq)]
pub enum PolarExpr {
    Br(BracketPoly),
    P(Index, Index, Box<PolarExpr>),
    Add(Box<PolarExpr>, Box<PolarExpr>),
    Sub(Box<PolarExpr>, Box<PolarExpr>),
    Mul(Box<PolarExpr>, Box<PolarExpr>),
    Scale(Scalar, Box<PolarExpr>),
}

impl PolarExpr {
    pub fn br(e: BracketPoly) -> Self {
        PolarExpr::Br(e)
    }

    pub fn p(i: Index, j: Index, e: PolarExpr) -> Self {
        PolarExpr::P(i, j, Box::new(e))
    }

    pub fn sub(a: PolarExpr, b: PolarExpr) -> Self {
        PolarExpr::Sub(Box::new(a), Box::new(b))
    }

    pub fn deformed(&self) -> Result<PBWPoly> {
        Ok(match self {
            PolarExpr::Br(e) => crate::bracket::expand_brackets(e),
            PolarExpr::P(i, j, e) => p_index(&e.deformed()?, *i, *j)?,
            PolarExpr::Add(a, b) => &a.deformed()? + &b.deformed()?,
            PolarExpr::Sub(a, b) => &a.deformed()? - &b.deformed()?,
            PolarExpr::Mul(a, b) => &a.deformed()? * &b.deformed()?,
            PolarExpr::Scale(s, a) => a.deformed()?.scale(s),
        })
    }

    pub fn classical(&self) -> Result<CommPoly> {
        Ok(match self {
            PolarExpr::Br(e) => crate::bracket::classical_eval(e),
            PolarExpr::P(i, j, e) => e.classical()?.polarize(*i, *j).ok_or(Error::Inhomogeneous(*i))?,
            PolarExpr::Add(a, b) => a.classical()?.add(&b.classical()?),
            PolarExpr::Sub(a, b) => a.classical()?.sub(&b.classical()?),
            PolarExpr::Mul(a, b) => a.classical()?.mul(&b.classical()?),
            PolarExpr::Scale(s, a) => a.classical()?.scale(&s.eval_h_scalar(&Default::default())),
        })
    }
}

/// Evaluates `e = 0` in both backends.
pub fn verify_polar_formula(e: &PolarExpr) -> Result<crate::bracket::Verdict> {
    use crate::bracket::Verdict;
    let d = e.deformed()?;
    let c = e.classical()?;
    Ok(match (d.is_zero(), c.is_zero()) {
        (true, true) => Verdict::Holds,
        (false, false) => Verdict::Fails(d.leading().map(|(m, c)| PBWPoly::term(m.clone(), c.clone()).to_string()).unwrap_or_default()),
        (dz, cz) => Verdict::Disagreement { deformed_zero: dz, classical_zero: cz },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::is_invariant;
    use crate::bracket::{bracket, Verdict};
    use crate::forms::{bracket_product_form, coordinate_point, make_point, Form, Side};

    fn b(i: Index, j: Index) -> PBWPoly {
        bracket(i, j)
    }

    #[test]
    fn index_polarization_on_brackets() {
        assert_eq!(p_index(&b(1, 3), 1, 2).unwrap(), b(2, 3));
        assert!(p_index(&b(3, 4), 1, 2).unwrap().is_zero());
        let w = PBWPoly::parse("y2*x1").unwrap();
        assert_eq!(delta(&w, 1, &PolarTarget::Index(5)), PBWPoly::parse("y2*x5").unwrap());
    }

    #[test]
    fn leibniz_rule() {
        let (a, c) = (b(0, 1), b(0, 2));
        let lhs = p_index(&(&a * &c), 0, 3).unwrap();
        let rhs = &(&p_index(&a, 0, 3).unwrap() * &c) + &(&a * &p_index(&c, 0, 3).unwrap());
        assert_eq!(lhs.scale(&Scalar::from_int(2)), rhs);
    }

    #[test]
    fn substitution_matches_power_of_polarization() {
        let fh = &(&b(0, 2) * &b(1, 3)) + &(&b(0, 3) * &b(1, 2));
        let q = make_point(&Form::extract(&fh, Side::Right).unwrap()).unwrap();
        let f = bracket_product_form(&[4, 5]);
        let target = PolarTarget::Point(q.clone());
        let pk = polarize_pow(&f, 0, &target, 2).unwrap();
        assert_eq!(pk, substitute(&f, 0, &q));
        assert!(is_invariant(&pk));
        assert_eq!(substitute(&b(0, 4), 0, &q), point_bracket(&q, 4));
        assert_eq!(substitute(&b(0, 4), 0, &coordinate_point(1)), b(1, 4));
    }

    #[test]
    fn example_polar_identity() {
        let f = PolarExpr::br(BracketPoly::parse("(02)*(03)").unwrap());
        let lhs = PolarExpr::p(0, 1, f.clone());
        let rhs = PolarExpr::p(1, 0, PolarExpr::p(0, 1, PolarExpr::p(0, 1, f)));
        assert_eq!(verify_polar_formula(&PolarExpr::sub(lhs, rhs)).unwrap(), Verdict::Holds);
    }
}
