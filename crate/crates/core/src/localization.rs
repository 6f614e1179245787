//! Localization at the `y` generators and at central elements.
//!
//! For every pair of slots `y_j x_i = (x_i − h y_i) y_j`, so
//! `y_j^{-1} a = τ(a) y_j^{-1}` with the automorphism `τ(x_i) = x_i + h y_i`,
//! `τ(y_i) = y_i`. A localized element is stored as
//! `numerator · (∏ y_s^{m_s})^{-1} · c^{-1}` with `c` central.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::bracket::bracket;
use crate::error::{Error, Result};
use crate::parse::{const_divisor, eval_pbw, parse_expr, Expr};
use crate::pbw::{Block, Generator, Index, Monomial, PBWPoly, Slot};
use crate::ring::{commutator, Ring};
use crate::scalar::{CycRat, Scalar};

/// Right `y`-denominator: slot ↦ exponent.
pub type YDen = BTreeMap<Slot, u32>;

/// Generators against which centrality is tested: every slot present plus one fresh slot in each gap.
fn probe_slots(p: &PBWPoly) -> Vec<Slot> {
    let present: BTreeSet<Slot> = p.slots();
    let mut base: BTreeSet<Index> = present.iter().filter(|s| !s.is_clone()).map(|s| s.index()).collect();
    let clones: BTreeSet<Index> = present.iter().filter(|s| s.is_clone()).map(|s| s.index()).collect();
    let mut probes: BTreeSet<Slot> = present.clone();
    let mut extra = BTreeSet::new();
    let top = base.iter().chain(clones.iter()).max().map_or(0, |m| m + 1);
    extra.insert(top);
    let list: Vec<Index> = base.iter().copied().collect();
    if let Some(&lo) = list.first() {
        if lo > 0 {
            extra.insert(lo - 1);
        }
    }
    for w in list.windows(2) {
        if w[1] > w[0] + 1 {
            extra.insert(w[0] + 1);
        }
    }
    base.extend(extra.iter().copied());
    probes.extend(extra.iter().map(|&i| Slot::base(i)));
    probes.insert(Slot::clone_of(top));
    probes.into_iter().collect()
}

/// Commutes with `x` and `y` of every slot (tested on all relative positions).
pub fn is_central(p: &PBWPoly) -> bool {
    probe_slots(p).into_iter().all(|s| {
        let (x, y) = slot_gens(s);
        commutator(p, &x).is_zero() && commutator(p, &y).is_zero()
    })
}

fn slot_gens(s: Slot) -> (PBWPoly, PBWPoly) {
    let one = |x, y| PBWPoly::monomial(Monomial::from_blocks([Block { slot: s, x, y }]));
    (one(1, 0), one(0, 1))
}

/// `τ^k`: `x_s ↦ x_s + k h y_s` on every slot.
pub fn twist(p: &PBWPoly, k: i64) -> PBWPoly {
    if k == 0 {
        return p.clone();
    }
    let shift = Scalar::h().scale(&CycRat::from_int(k));
    let mut out = PBWPoly::zero();
    for (m, c) in p.terms() {
        let mut t = PBWPoly::constant(c.clone());
        for b in m.blocks() {
            let (x, y) = slot_gens(b.slot);
            let img = &x + &y.scale(&shift);
            t = &t * &(&img.pow(b.x as u32) * &y.pow(b.y as u32));
        }
        out = &out + &t;
    }
    out
}

/// `∏ y_s^{m_s}` in normal form.
pub fn y_monomial(d: &YDen) -> PBWPoly {
    PBWPoly::monomial(Monomial::from_blocks(d.iter().filter(|(_, &e)| e > 0).map(|(&slot, &e)| Block { slot, x: 0, y: e as u16 })))
}

fn total(d: &YDen) -> i64 {
    d.values().map(|&e| e as i64).sum()
}

/// `p · y_s^{-1}` when it is a polynomial.
fn right_divide_y(p: &PBWPoly, s: Slot) -> Option<PBWPoly> {
    let mut out = PBWPoly::zero();
    for (m, c) in p.terms() {
        let (pre, blk, post) = m.split_at_slot(s);
        let blk = blk.filter(|b| b.y > 0)?;
        let head = Monomial::from_blocks(pre.blocks().iter().copied().chain([Block { y: blk.y - 1, ..blk }].into_iter().filter(|b| b.x + b.y > 0)));
        let tail = twist(&PBWPoly::monomial(post), -1);
        out = &out + &(&PBWPoly::term(head, c.clone()) * &tail);
    }
    Some(out)
}

#[derive(Clone, Debug)]
pub struct LocElement {
    num: PBWPoly,
    yden: YDen,
    cden: PBWPoly,
}

impl LocElement {
    pub fn from_poly(p: PBWPoly) -> Self {
        LocElement { num: p, yden: YDen::new(), cden: PBWPoly::one() }
    }

    /// `num · (∏ y^m)^{-1} · c^{-1}`; `c` must be nonzero and central.
    pub fn new(num: PBWPoly, yden: YDen, cden: PBWPoly) -> Result<Self> {
        if cden.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if cden.as_scalar().is_none() && !is_central(&cden) {
            return Err(Error::NotInvertible(format!("{cden} is not central")));
        }
        Ok(LocElement { num, yden, cden }.normalized())
    }

    pub fn y_inv(s: Slot) -> Self {
        LocElement { num: PBWPoly::one(), yden: YDen::from([(s, 1)]), cden: PBWPoly::one() }
    }

    pub fn central_inv(c: &PBWPoly) -> Result<Self> {
        LocElement::new(PBWPoly::one(), YDen::new(), c.clone())
    }

    pub fn numerator(&self) -> &PBWPoly {
        &self.num
    }

    pub fn y_denominator(&self) -> &YDen {
        &self.yden
    }

    pub fn central_denominator(&self) -> &PBWPoly {
        &self.cden
    }

    /// The polynomial value when there is no denominator left.
    pub fn as_poly(&self) -> Option<PBWPoly> {
        if !self.yden.is_empty() {
            return None;
        }
        let c = self.cden.as_scalar()?;
        Some(self.num.scale(&inverse_const(&c)?))
    }

    fn normalized(mut self) -> Self {
        if let Some(c) = self.cden.as_scalar() {
            if let Some(inv) = inverse_const(&c) {
                self.num = self.num.scale(&inv);
                self.cden = PBWPoly::one();
            }
        }
        if self.num.is_zero() {
            return LocElement::from_poly(PBWPoly::zero());
        }
        let slots: Vec<Slot> = self.yden.keys().copied().collect();
        for s in slots {
            while self.yden.get(&s).copied().unwrap_or(0) > 0 {
                match right_divide_y(&self.num, s) {
                    Some(q) => {
                        self.num = q;
                        *self.yden.get_mut(&s).unwrap() -= 1;
                    }
                    None => break,
                }
            }
        }
        self.yden.retain(|_, e| *e > 0);
        self
    }

    fn common(a: &YDen, b: &YDen) -> YDen {
        let mut l = a.clone();
        for (s, &e) in b {
            let v = l.entry(*s).or_insert(0);
            *v = (*v).max(e);
        }
        l
    }

    fn gap(l: &YDen, a: &YDen) -> YDen {
        l.iter().map(|(s, &e)| (*s, e - a.get(s).copied().unwrap_or(0))).collect()
    }

    /// Numerators of `self` and `o` over the common denominator `y^L · c_self · c_o`.
    fn cross(&self, o: &Self) -> (PBWPoly, PBWPoly, YDen, PBWPoly) {
        let l = LocElement::common(&self.yden, &o.yden);
        let ya = y_monomial(&LocElement::gap(&l, &self.yden));
        let yb = y_monomial(&LocElement::gap(&l, &o.yden));
        if self.cden == o.cden {
            (&self.num * &ya, &o.num * &yb, l, self.cden.clone())
        } else {
            (&(&self.num * &ya) * &o.cden, &(&o.num * &yb) * &self.cden, l, &self.cden * &o.cden)
        }
    }

    /// `τ^k(self)`; central denominators are fixed by `τ`.
    pub fn twisted(&self, k: i64) -> Self {
        LocElement { num: twist(&self.num, k), yden: self.yden.clone(), cden: self.cden.clone() }
    }

    /// Applies a linear map to the numerator; valid when the map commutes with right `y`-division and central scaling.
    pub fn map_numerator<F: Fn(&PBWPoly) -> PBWPoly>(&self, f: F) -> Self {
        LocElement { num: f(&self.num), yden: self.yden.clone(), cden: self.cden.clone() }.normalized()
    }

    pub fn eval_h(&self, v: &CycRat) -> Result<Self> {
        LocElement::new(self.num.eval_h(v), self.yden.clone(), self.cden.eval_h(v))
    }

    pub fn parse(src: &str) -> Result<Self> {
        eval_loc(&parse_expr(src, false)?)
    }
}

fn inverse_const(c: &Scalar) -> Option<Scalar> {
    let k = c.as_const()?;
    Some(Scalar::from_cyc(k.inv().ok()?))
}

impl PartialEq for LocElement {
    fn eq(&self, o: &Self) -> bool {
        let (a, b, _, _) = self.cross(o);
        a == b
    }
}

impl Ring for LocElement {
    fn zero() -> Self {
        LocElement::from_poly(PBWPoly::zero())
    }
    fn one() -> Self {
        LocElement::from_poly(PBWPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        let (a, b, l, c) = self.cross(o);
        LocElement { num: &a + &b, yden: l, cden: c }.normalized()
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        let mut yden = self.yden.clone();
        for (s, e) in &o.yden {
            *yden.entry(*s).or_insert(0) += e;
        }
        let cden = if o.cden.is_one_poly() {
            self.cden.clone()
        } else if self.cden.is_one_poly() {
            o.cden.clone()
        } else {
            &self.cden * &o.cden
        };
        let num = &self.num * &twist(&o.num, total(&self.yden));
        LocElement { num, yden, cden }.normalized()
    }
    fn negate(&self) -> Self {
        LocElement { num: -&self.num, ..self.clone() }
    }
    fn scaled(&self, s: &Scalar) -> Self {
        LocElement { num: self.num.scale(s), ..self.clone() }.normalized()
    }
    fn from_pbw(p: &PBWPoly) -> Self {
        LocElement::from_poly(p.clone())
    }
}

trait OnePoly {
    fn is_one_poly(&self) -> bool;
}

impl OnePoly for PBWPoly {
    fn is_one_poly(&self) -> bool {
        self.as_scalar().is_some_and(|s| s.is_one())
    }
}

impl fmt::Display for LocElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.yden.is_empty() && self.cden.is_one_poly() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})", self.num)?;
        if !self.yden.is_empty() {
            write!(f, "*inv({})", y_monomial(&self.yden))?;
        }
        if !self.cden.is_one_poly() {
            write!(f, "*inv({})", self.cden)?;
        }
        Ok(())
    }
}

/// `y_i`-monomial exponents of a single-term polynomial made only of `y` letters.
fn as_y_monomial(p: &PBWPoly) -> Option<(Scalar, YDen)> {
    if p.len() != 1 {
        return None;
    }
    let (m, c) = p.terms().next()?;
    let mut d = YDen::new();
    for b in m.blocks() {
        if b.x > 0 {
            return None;
        }
        d.insert(b.slot, b.y as u32);
    }
    Some((c.clone(), d))
}

/// Inverse of a `y`-monomial or of a central polynomial.
pub fn invert(p: &PBWPoly) -> Result<LocElement> {
    if let Some((c, d)) = as_y_monomial(p) {
        let inv = inverse_const(&c).ok_or_else(|| Error::NotInvertible(p.to_string()))?;
        return Ok(LocElement { num: PBWPoly::constant(inv), yden: d, cden: PBWPoly::one() });
    }
    LocElement::central_inv(p)
}

pub fn eval_loc(e: &Expr) -> Result<LocElement> {
    Ok(match e {
        Expr::Z(i) => z(*i),
        Expr::Sb(i, j) => slash_bracket(*i, *j),
        Expr::Inv(a) => match eval_loc(a)?.as_poly() {
            Some(p) => invert(&p)?,
            None => return Err(Error::NotInvertible(format!("{a:?}"))),
        },
        Expr::Add(a, b) => eval_loc(a)?.plus(&eval_loc(b)?),
        Expr::Sub(a, b) => eval_loc(a)?.minus(&eval_loc(b)?),
        Expr::Neg(a) => eval_loc(a)?.negate(),
        Expr::Mul(a, b) => eval_loc(a)?.times(&eval_loc(b)?),
        Expr::Div(a, b) => eval_loc(a)?.scaled(&Scalar::from_cyc(const_divisor(b)?.inv()?)),
        Expr::Pow(a, n) => eval_loc(a)?.power(*n),
        other => LocElement::from_poly(eval_pbw(other)?),
    })
}

fn poly(p: PBWPoly) -> LocElement {
    LocElement::from_poly(p)
}

/// `z_i = x_i y_i^{-1} + h/2`.
pub fn z(i: Index) -> LocElement {
    poly(PBWPoly::x(i)).times(&LocElement::y_inv(Slot::base(i))).plus(&poly(PBWPoly::constant(Scalar::h().scale(&CycRat::from_frac(1, 2)))))
}

/// `[ij) = y_i^{-1} (ij)`.
pub fn slash_bracket(i: Index, j: Index) -> LocElement {
    LocElement::y_inv(Slot::base(i)).times(&poly(bracket(i, j)))
}

/// `f_z = y^{-n} (0 i_1)⋯(0 i_n)`.
pub fn form_polynomial(indices: &[Index]) -> LocElement {
    let f = crate::forms::bracket_product_form(indices);
    let yden = YDen::from([(Slot::base(0), indices.len() as u32)]);
    LocElement { num: PBWPoly::one(), yden, cden: PBWPoly::one() }.times(&poly(f))
}

/// `y_s^{-1}` written as a polynomial-free generator element, for tests and printing.
pub fn y_gen(i: Index) -> LocElement {
    poly(PBWPoly::gen(Generator::y(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LocElement {
        LocElement::parse(s).unwrap()
    }

    fn hc(num: i64, den: i64) -> LocElement {
        poly(PBWPoly::constant(Scalar::h().scale(&CycRat::from_frac(num, den))))
    }

    #[test]
    fn inverse_moves_right_through_twist() {
        let lhs = LocElement::y_inv(Slot::base(1)).times(&poly(PBWPoly::x(1)));
        let rhs = poly(PBWPoly::parse("x1 + h*y1").unwrap()).times(&LocElement::y_inv(Slot::base(1)));
        assert_eq!(lhs, rhs);
        assert_eq!(LocElement::y_inv(Slot::base(2)).times(&y_gen(2)), LocElement::one());
        assert_eq!(y_gen(2).times(&LocElement::y_inv(Slot::base(2))), LocElement::one());
    }

    #[test]
    fn projective_coordinates() {
        let (zi, zj) = (z(1), z(2));
        let lhs = zj.times(&zi).minus(&zi.times(&zj));
        let rhs = zj.minus(&zi).scaled(&Scalar::h().scale(&CycRat::from_int(2)));
        assert_eq!(lhs, rhs);
        let h = hc(1, 1);
        assert_eq!(zj.plus(&h).times(&zi.minus(&h)), zi.plus(&h).times(&zj.minus(&h)));
    }

    #[test]
    fn slashed_bracket_expressions() {
        let a = slash_bracket(1, 2);
        let b = poly(bracket(1, 2)).times(&LocElement::y_inv(Slot::base(1)));
        let c = z(1).minus(&hc(1, 2)).times(&y_gen(2)).minus(&poly(PBWPoly::x(2)));
        assert_eq!(a, b);
        assert_eq!(a, c);
        let d = slash_bracket(3, 4);
        assert_eq!(a.times(&d), d.times(&a));
        assert_eq!(a.times(&y_gen(5)), y_gen(5).times(&a));
    }

    #[test]
    fn form_polynomials() {
        assert_eq!(form_polynomial(&[1]), slash_bracket(0, 1));
        assert_eq!(form_polynomial(&[1, 2]), slash_bracket(0, 1).times(&slash_bracket(0, 2)));
        let f = form_polynomial(&[1, 2, 3]);
        assert_eq!(f, slash_bracket(0, 1).times(&slash_bracket(0, 2)).times(&slash_bracket(0, 3)));
    }

    #[test]
    fn twist_is_an_automorphism() {
        let a = PBWPoly::parse("x2*y1 + x1^2").unwrap();
        let b = PBWPoly::parse("x3*x1 - h*y2").unwrap();
        for k in [-2, 1, 3] {
            assert_eq!(twist(&(&a * &b), k), &twist(&a, k) * &twist(&b, k));
        }
        assert_eq!(twist(&twist(&a, 2), -2), a);
    }

    #[test]
    fn central_denominators() {
        let c = bracket(1, 2);
        let inv = LocElement::central_inv(&c).unwrap();
        assert_eq!(inv.times(&poly(c.clone())), LocElement::one());
        assert!(LocElement::central_inv(&PBWPoly::x(1)).is_err());
        assert!(is_central(&(&bracket(0, 3) * &bracket(1, 2))));
        assert!(!is_central(&PBWPoly::y(1)));
    }

    #[test]
    fn print_parse_round_trip() {
        for s in ["z1", "sb(1,2)*z3", "x1*inv(y1^2*y3) - 1/2", "inv(br(1,2))*x3"] {
            let e = lp(s);
            assert_eq!(lp(&e.to_string()), e, "{s} -> {e}");
        }
    }

    fn commuting_family(a: Index, b: Index, c: Index) -> Vec<LocElement> {
        vec![
            y_gen(a),
            poly(bracket(a, b)),
            z(a).minus(&z(b)),
            slash_bracket(b, c),
            z(c).minus(&z(a)),
        ]
    }

    #[test]
    fn commutative_subfield() {
        let fam: Vec<LocElement> = [(1, 2, 3), (3, 1, 4), (2, 4, 1)].iter().flat_map(|&(a, b, c)| commuting_family(a, b, c)).collect();
        for p in &fam {
            for q in &fam {
                assert_eq!(p.times(q), q.times(p), "{p} vs {q}");
            }
        }
    }

    #[test]
    fn substituted_form_polynomial() {
        let f = crate::forms::bracket_product_form(&[6, 7]);
        let pt = crate::forms::coordinate_point(5);
        let g = crate::polarize::substitute(&f, 0, &pt);
        let lhs = LocElement::y_inv(Slot::base(5)).times(&LocElement::y_inv(Slot::base(5))).times(&poly(g));
        let sb = |k| LocElement::y_inv(Slot::base(5)).times(&poly(crate::polarize::point_bracket(&pt, k)));
        assert!(pt.self_residual().is_zero() && [6, 7].iter().all(|&k| pt.relations_hold(&crate::forms::coordinate_point(k))));
        assert_eq!(lhs, sb(6).times(&sb(7)));
    }

    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = PBWPoly> {
        let gen = (1u32..4, 0u8..2, -2i64..3).prop_map(|(i, k, c)| {
            let g = if k == 0 { PBWPoly::x(i) } else { PBWPoly::y(i) };
            g.scale_int(c)
        });
        prop::collection::vec(prop::collection::vec(gen, 1..3), 1..3).prop_map(|ts| {
            ts.iter().fold(PBWPoly::zero(), |acc, fs| &acc + &fs.iter().skip(1).fold(fs[0].clone(), |p, q| &p * q))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn twist_multiplicative(a in small_poly(), b in small_poly(), k in -2i64..3) {
            prop_assert_eq!(twist(&(&a * &b), k), &twist(&a, k) * &twist(&b, k));
        }

        #[test]
        fn loc_round_trip(a in small_poly(), i in 1u32..4, e in 1u32..3) {
            let el = poly(a).times(&LocElement::y_inv(Slot::base(i)).power(e)).plus(&z(i));
            prop_assert_eq!(LocElement::parse(&el.to_string()).unwrap(), el);
        }
    }
}
