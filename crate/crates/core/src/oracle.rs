//! Commutative polynomial backend used as the classical (`h = 0`) reference.
//!
//! This module has its own multiplication and never calls into the PBW
//! product. The only bridge is [`CommPoly::from_pbw_h0`], which reads a normal
//! form as a commutative polynomial after substituting `h = 0`.

use std::collections::BTreeMap;
use std::fmt;

use crate::pbw::{Index, Kind, PBWPoly, Slot};
use crate::scalar::{CycRat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub slot: Slot,
    pub kind: Kind,
}

impl Var {
    pub fn x(i: Index) -> Var {
        Var { slot: Slot::base(i), kind: Kind::X }
    }
    pub fn y(i: Index) -> Var {
        Var { slot: Slot::base(i), kind: Kind::Y }
    }
    pub fn dx(i: Index) -> Var {
        Var { slot: Slot::clone_of(i), kind: Kind::X }
    }
    pub fn dy(i: Index) -> Var {
        Var { slot: Slot::clone_of(i), kind: Kind::Y }
    }
}

pub type CommMonomial = Vec<(Var, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CommPoly {
    terms: BTreeMap<CommMonomial, Scalar>,
}

fn mono_mul(a: &CommMonomial, b: &CommMonomial) -> CommMonomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1 + b[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

impl CommPoly {
    pub fn zero() -> Self {
        CommPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = CommPoly::zero();
        p.add_term(Vec::new(), &c);
        p
    }

    pub fn one() -> Self {
        CommPoly::constant(Scalar::one())
    }

    pub fn var(v: Var) -> Self {
        let mut p = CommPoly::zero();
        p.add_term(vec![(v, 1)], &Scalar::one());
        p
    }

    pub fn x(i: Index) -> Self {
        CommPoly::var(Var::x(i))
    }

    pub fn y(i: Index) -> Self {
        CommPoly::var(Var::y(i))
    }

    /// `[ij] = x_i y_j − y_i x_j`.
    pub fn bracket(i: Index, j: Index) -> Self {
        CommPoly::x(i).mul(&CommPoly::y(j)).sub(&CommPoly::y(i).mul(&CommPoly::x(j)))
    }

    /// `x_i dy_j − y_i dx_j`.
    pub fn diff_bracket(i: Index, j: Index) -> Self {
        CommPoly::x(i).mul(&CommPoly::var(Var::dy(j))).sub(&CommPoly::y(i).mul(&CommPoly::var(Var::dx(j))))
    }

    pub fn add_term(&mut self, m: CommMonomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CommMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &CommPoly) -> CommPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CommPoly {
        CommPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * s));
        }
        out
    }

    pub fn mul(&self, o: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(mono_mul(m1, m2), &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> CommPoly {
        (0..n).fold(CommPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn product<'a, I: IntoIterator<Item = &'a CommPoly>>(it: I) -> CommPoly {
        it.into_iter().fold(CommPoly::one(), |acc, p| acc.mul(p))
    }

    pub fn derivative(&self, v: Var) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in &self.terms {
            if let Some(pos) = m.iter().position(|(w, _)| *w == v) {
                let e = m[pos].1;
                let mut m2 = m.clone();
                if e == 1 {
                    m2.remove(pos);
                } else {
                    m2[pos].1 -= 1;
                }
                out.add_term(m2, &c.scale(&CycRat::from_int(e as i64)));
            }
        }
        out
    }

    /// Simultaneous substitution of variables.
    pub fn substitute(&self, map: &BTreeMap<Var, CommPoly>) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in &self.terms {
            let mut term = CommPoly::constant(c.clone());
            for (v, e) in m {
                let f = match map.get(v) {
                    Some(p) => p.pow(*e),
                    None => CommPoly { terms: BTreeMap::from([(vec![(*v, *e)], Scalar::one())]) },
                };
                term = term.mul(&f);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn degree_in(&self, slot: Slot) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.iter().filter(|(v, _)| v.slot == slot).map(|(_, e)| e).sum::<u32>());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Classical polarization `(x_dst ∂/∂x_src + y_dst ∂/∂y_src) / deg_src`.
    pub fn polarize(&self, src: Index, dst: Index) -> Option<CommPoly> {
        let n = self.degree_in(Slot::base(src))?;
        if n == 0 {
            return Some(CommPoly::zero());
        }
        let d = self
            .derivative(Var::x(src))
            .mul(&CommPoly::x(dst))
            .add(&self.derivative(Var::y(src)).mul(&CommPoly::y(dst)));
        Some(d.scale(&Scalar::from_frac(1, n as i64)))
    }

    /// Total differential with respect to the slots in `k`, realized with clone variables.
    pub fn differential(&self, k: &[Index]) -> CommPoly {
        let mut out = CommPoly::zero();
        for i in k {
            out = out.add(&self.derivative(Var::x(*i)).mul(&CommPoly::var(Var::dx(*i))));
            out = out.add(&self.derivative(Var::y(*i)).mul(&CommPoly::var(Var::dy(*i))));
        }
        out
    }

    pub fn eval_h(&self, v: &CycRat) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.eval_h_scalar(v));
        }
        out
    }

    /// Evaluates every variable at a rational point.
    pub fn eval_at(&self, point: &BTreeMap<Var, CycRat>) -> Option<Scalar> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m {
                let val = point.get(v)?;
                for _ in 0..*e {
                    t = t.scale(val);
                }
            }
            acc += &t;
        }
        Some(acc)
    }

    /// Reads a normal form commutatively after setting `h = 0`.
    pub fn from_pbw_h0(p: &PBWPoly) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in p.terms() {
            let c0 = c.eval_h_scalar(&CycRat::default());
            if c0.is_zero() {
                continue;
            }
            let mut mono: CommMonomial = Vec::new();
            for b in m.blocks() {
                if b.x > 0 {
                    mono.push((Var { slot: b.slot, kind: Kind::X }, b.x as u32));
                }
                if b.y > 0 {
                    mono.push((Var { slot: b.slot, kind: Kind::Y }, b.y as u32));
                }
            }
            out.add_term(mono, &c0);
        }
        out
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = |m: &CommMonomial| {
            if m.is_empty() {
                return "1".to_string();
            }
            m.iter()
                .map(|(v, e)| {
                    let d = if v.slot.is_clone() { "d" } else { "" };
                    let k = if v.kind == Kind::X { "x" } else { "y" };
                    if *e == 1 {
                        format!("{d}{k}{}", v.slot.index())
                    } else {
                        format!("{d}{k}{}^{e}", v.slot.index())
                    }
                })
                .collect::<Vec<_>>()
                .join("*")
        };
        crate::pbw::write_sum(f, self.terms.iter().rev().map(|(m, c)| (body(m), c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::{bracket, classical_eval, BracketPoly};
    use proptest::prelude::*;

    #[test]
    fn plucker_classically() {
        let e = BracketPoly::parse("(12)*(34) + (13)*(42) + (14)*(23)").unwrap();
        assert!(classical_eval(&e).is_zero());
    }

    #[test]
    fn classical_polarization() {
        // P_{01} of [01][02] is ([11][02] + [01][12]) / 2 = [01][12] / 2
        let f = CommPoly::bracket(0, 1).mul(&CommPoly::bracket(0, 2));
        let want = CommPoly::bracket(0, 1).mul(&CommPoly::bracket(1, 2)).scale(&Scalar::from_frac(1, 2));
        assert_eq!(f.polarize(0, 1).unwrap(), want);
    }

    fn arb_pbw() -> impl Strategy<Value = PBWPoly> {
        proptest::collection::vec((0u32..3, 0u16..3, 0u16..3, -3i64..4), 1..4).prop_map(|v| {
            let mut p = PBWPoly::zero();
            for (i, a, b, c) in v {
                let m = crate::pbw::Monomial::from_blocks([crate::pbw::Block { slot: Slot::base(i), x: a, y: b }]);
                p.add_term(m, &Scalar::from_int(c));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn h_zero_is_commutative_product(a in arb_pbw(), b in arb_pbw()) {
            let lhs = CommPoly::from_pbw_h0(&(&a * &b));
            let rhs = CommPoly::from_pbw_h0(&a).mul(&CommPoly::from_pbw_h0(&b));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bracket_at_h_zero() {
        assert_eq!(CommPoly::from_pbw_h0(&bracket(1, 2)), CommPoly::bracket(1, 2));
    }
}
