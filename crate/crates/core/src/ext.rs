//! Central extensions: adjoined roots `s^m = c` and the Cardano pair `u₁, u₂`.
//!
//! Adjoined letters commute with everything. Elements are sums of
//! coefficient · letter-monomial, kept reduced by a terminating rewrite system.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::localization::{is_central, LocElement};
use crate::pbw::PBWPoly;
use crate::ring::Ring;
use crate::scalar::Scalar;

/// A ring whose elements can be tested for centrality.
pub trait Coefficient: Ring {
    fn is_central_element(&self) -> bool;
}

impl Coefficient for PBWPoly {
    fn is_central_element(&self) -> bool {
        is_central(self)
    }
}

impl Coefficient for LocElement {
    fn is_central_element(&self) -> bool {
        self.y_denominator().is_empty() && is_central(self.numerator())
    }
}

/// Exponents of the adjoined letters.
pub type Exps = Vec<u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Rule<C> {
    pub lhs: Exps,
    pub rhs: Vec<(Exps, C)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Adjunction<C> {
    pub letters: Vec<String>,
    pub weights: Vec<u32>,
    pub rules: Vec<Rule<C>>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn add(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[u32], b: &[u32]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl<C: fmt::Display> Adjunction<C> {
    fn monomial(&self, e: &[u32]) -> String {
        let parts: Vec<String> = self
            .letters
            .iter()
            .zip(e)
            .filter(|(_, k)| **k > 0)
            .map(|(l, k)| if *k == 1 { l.clone() } else { format!("{l}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// The rewrite rules as text, `lhs = c1*m1 + …`.
    pub fn describe(&self) -> Vec<String> {
        self.rules
            .iter()
            .map(|r| {
                let rhs: Vec<String> = r.rhs.iter().map(|(e, c)| format!("({c})*{}", self.monomial(e))).collect();
                format!("{} = {}", self.monomial(&r.lhs), if rhs.is_empty() { "0".into() } else { rhs.join(" + ") })
            })
            .collect()
    }
}

impl<C: Coefficient> Adjunction<C> {
    /// `s^m = c` with `c` central.
    pub fn central_root(name: &str, m: u32, c: C) -> Result<Self> {
        if m < 2 {
            return Err(Error::Invalid("root degree must be at least 2".into()));
        }
        if !c.is_central_element() {
            return Err(Error::NotInvertible(format!("{c} is not central")));
        }
        Ok(Adjunction { letters: vec![name.into()], weights: vec![1], rules: vec![Rule { lhs: vec![m], rhs: vec![(vec![0], c)] }] })
    }

    /// `u₁u₂ = −Δ₁`, `u₁³ + u₂³ = j₁`, completed by `u₁⁴ = j₁u₁ + Δ₁u₂²`.
    pub fn cardano(delta: C, j: C) -> Result<Self> {
        for c in [&delta, &j] {
            if !c.is_central_element() {
                return Err(Error::NotInvertible(format!("{c} is not central")));
            }
        }
        let rules = vec![
            Rule { lhs: vec![1, 1], rhs: vec![(vec![0, 0], delta.negate())] },
            Rule { lhs: vec![0, 3], rhs: vec![(vec![0, 0], j.clone()), (vec![3, 0], C::one().negate())] },
            Rule { lhs: vec![4, 0], rhs: vec![(vec![1, 0], j), (vec![0, 2], delta)] },
        ];
        Ok(Adjunction { letters: vec!["u1".into(), "u2".into()], weights: vec![2, 3], rules })
    }

    fn weight(&self, e: &[u32]) -> u32 {
        e.iter().zip(&self.weights).map(|(x, w)| x * w).sum()
    }

    fn apply(&self, rule: &Rule<C>, e: &[u32], c: &C) -> Vec<(Exps, C)> {
        let rest = sub(e, &rule.lhs);
        rule.rhs.iter().map(|(r, k)| (add(&rest, r), c.times(k))).collect()
    }

    /// Full reduction; each rule strictly lowers the weight, so this terminates.
    fn reduce_terms(&self, terms: Vec<(Exps, C)>, first: Option<usize>) -> BTreeMap<Exps, C> {
        let mut out: BTreeMap<Exps, C> = BTreeMap::new();
        let mut stack: Vec<(Exps, C, Option<usize>)> = terms.into_iter().map(|(e, c)| (e, c, first)).collect();
        while let Some((e, c, pref)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            let pick = pref.filter(|&i| divides(&self.rules[i].lhs, &e)).or_else(|| self.rules.iter().position(|r| divides(&r.lhs, &e)));
            match pick {
                Some(i) => stack.extend(self.apply(&self.rules[i], &e, &c).into_iter().map(|(e, c)| (e, c, None))),
                None => {
                    let v = match out.remove(&e) {
                        Some(old) => old.plus(&c),
                        None => c,
                    };
                    if !v.is_zero() {
                        out.insert(e, v);
                    }
                }
            }
        }
        out
    }

    /// Monomials not divisible by any left side.
    pub fn standard_monomials(&self, max_exp: u32) -> Vec<Exps> {
        self.all_monomials(max_exp).into_iter().filter(|e| !self.rules.iter().any(|r| divides(&r.lhs, e))).collect()
    }

    fn all_monomials(&self, max_exp: u32) -> Vec<Exps> {
        let mut out = vec![vec![]];
        for _ in 0..self.letters.len() {
            out = out.into_iter().flat_map(|e: Exps| (0..=max_exp).map(move |k| [e.clone(), vec![k]].concat())).collect();
        }
        out
    }

    /// Every monomial with exponents up to `max_exp` reduces to the same normal form whichever applicable rule fires first.
    pub fn is_confluent_up_to(&self, max_exp: u32) -> bool {
        self.all_monomials(max_exp).into_iter().all(|e| {
            let starts: Vec<usize> = (0..self.rules.len()).filter(|&i| divides(&self.rules[i].lhs, &e)).collect();
            let forms: Vec<BTreeMap<Exps, C>> = starts.iter().map(|&i| self.reduce_terms(vec![(e.clone(), C::one())], Some(i))).collect();
            forms.windows(2).all(|w| maps_equal(&w[0], &w[1]))
        })
    }

    /// The same relations with coefficients mapped.
    pub fn map<D: Coefficient, F: Fn(&C) -> D>(&self, f: F) -> Adjunction<D> {
        let rules = self.rules.iter().map(|r| Rule { lhs: r.lhs.clone(), rhs: r.rhs.iter().map(|(e, c)| (e.clone(), f(c))).collect() }).collect();
        Adjunction { letters: self.letters.clone(), weights: self.weights.clone(), rules }
    }

    fn eval_mono(e: &[u32], values: &[C]) -> C {
        e.iter().zip(values).fold(C::one(), |acc, (k, v)| acc.times(&v.power(*k)))
    }

    /// True when the values satisfy every relation.
    pub fn admits(&self, values: &[C]) -> bool {
        values.len() == self.letters.len()
            && self.rules.iter().all(|r| {
                let rhs = r.rhs.iter().fold(C::zero(), |acc, (e, c)| acc.plus(&c.times(&Self::eval_mono(e, values))));
                Self::eval_mono(&r.lhs, values).minus(&rhs).is_zero()
            })
    }

    pub fn is_terminating(&self) -> bool {
        self.rules.iter().all(|r| r.rhs.iter().all(|(e, _)| self.weight(e) < self.weight(&r.lhs)))
    }
}

fn maps_equal<C: Ring>(a: &BTreeMap<Exps, C>, b: &BTreeMap<Exps, C>) -> bool {
    a.len() == b.len() && a.iter().all(|(k, v)| b.get(k).is_some_and(|w| w.minus(v).is_zero()))
}

#[derive(Clone, Debug)]
pub struct Ext<C> {
    adj: Option<Arc<Adjunction<C>>>,
    terms: BTreeMap<Exps, C>,
}

impl<C: Coefficient> Ext<C> {
    pub fn base(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![], c);
        }
        Ext { adj: None, terms }
    }

    pub fn letter(adj: &Arc<Adjunction<C>>, k: usize) -> Self {
        let mut e = vec![0; adj.letters.len()];
        e[k] = 1;
        Ext { adj: Some(adj.clone()), terms: BTreeMap::from([(e, C::one())]) }.reduced()
    }

    pub fn adj(&self) -> Option<&Arc<Adjunction<C>>> {
        self.adj.as_ref()
    }

    /// Coefficient of a reduced letter monomial.
    pub fn coeff(&self, e: &[u32]) -> C {
        let key = self.pad(e);
        self.terms.get(&key).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &C)> {
        self.terms.iter()
    }

    fn width(&self) -> usize {
        self.adj.as_ref().map_or(0, |s| s.letters.len())
    }

    fn pad(&self, e: &[u32]) -> Exps {
        let mut v = e.to_vec();
        v.resize(self.width(), 0);
        v
    }

    fn with_adjunction(&self, adj: &Option<Arc<Adjunction<C>>>) -> Self {
        let mut out = Ext { adj: adj.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.terms.insert(out.pad(e), c.clone());
        }
        out
    }

    fn unify(&self, o: &Self) -> (Self, Self) {
        match (&self.adj, &o.adj) {
            (Some(a), Some(b)) => {
                assert!(Arc::ptr_eq(a, b) || a.letters == b.letters, "mixing different extensions");
                (self.clone(), o.clone())
            }
            (Some(_), None) => (self.clone(), o.with_adjunction(&self.adj)),
            (None, Some(_)) => (self.with_adjunction(&o.adj), o.clone()),
            (None, None) => (self.clone(), o.clone()),
        }
    }

    fn reduced(self) -> Self {
        match &self.adj {
            Some(s) => {
                let terms = s.reduce_terms(self.terms.into_iter().collect(), None);
                Ext { adj: self.adj, terms }
            }
            None => self,
        }
    }

    /// The image under letters ↦ values, which must satisfy the relations and be central.
    pub fn specialize(&self, values: &[C]) -> Result<C> {
        let Some(adj) = &self.adj else {
            return Ok(self.coeff(&[]));
        };
        if !adj.admits(values) || !values.iter().all(|v| v.is_central_element()) {
            return Err(Error::Invalid("values violate the adjoined relations".into()));
        }
        Ok(self.terms.iter().fold(C::zero(), |acc, (e, c)| acc.plus(&c.times(&Adjunction::eval_mono(e, values)))))
    }

    pub fn map_coeffs<D: Coefficient, F: Fn(&C) -> D>(&self, adj: Option<Arc<Adjunction<D>>>, f: F) -> Ext<D> {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect();
        Ext { adj, terms }.reduced()
    }
}

impl<C: Coefficient> PartialEq for Ext<C> {
    fn eq(&self, o: &Self) -> bool {
        self.minus(o).is_zero()
    }
}

impl<C: Coefficient> Ring for Ext<C> {
    fn zero() -> Self {
        Ext { adj: None, terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Ext::base(C::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }
    fn plus(&self, o: &Self) -> Self {
        let (mut a, b) = self.unify(o);
        for (e, c) in b.terms {
            let v = match a.terms.remove(&e) {
                Some(old) => old.plus(&c),
                None => c,
            };
            if !v.is_zero() {
                a.terms.insert(e, v);
            }
        }
        a
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        let (a, b) = self.unify(o);
        let mut raw = Vec::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                raw.push((add(ea, eb), ca.times(cb)));
            }
        }
        let terms = match &a.adj {
            Some(s) => s.reduce_terms(raw, None),
            None => {
                let mut t = BTreeMap::new();
                for (e, c) in raw {
                    let v = match t.remove(&e) {
                        Some(old) => C::plus(&old, &c),
                        None => c,
                    };
                    if !v.is_zero() {
                        t.insert(e, v);
                    }
                }
                t
            }
        };
        Ext { adj: a.adj, terms }
    }
    fn negate(&self) -> Self {
        Ext { adj: self.adj.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negate())).collect() }
    }
    fn scaled(&self, s: &Scalar) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.scaled(s))).filter(|(_, c)| !c.is_zero()).collect();
        Ext { adj: self.adj.clone(), terms }
    }
    fn from_pbw(p: &PBWPoly) -> Self {
        Ext::base(C::from_pbw(p))
    }
}

impl<C: Coefficient> fmt::Display for Ext<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<String> = self.adj.as_ref().map(|s| s.letters.clone()).unwrap_or_default();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(&names)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::bracket;

    fn p(s: &str) -> PBWPoly {
        PBWPoly::parse(s).unwrap()
    }

    #[test]
    fn central_root_squares_back() {
        let c = &bracket(1, 2) * &bracket(3, 4);
        let adj = Arc::new(Adjunction::central_root("s", 2, c.clone()).unwrap());
        let s = Ext::letter(&adj, 0);
        assert_eq!(s.times(&s), Ext::base(c.clone()));
        assert!(Adjunction::central_root("s", 2, p("x1")).is_err());
        let e = s.plus(&Ext::from_pbw(&p("y1")));
        assert_eq!(e.specialize(&[c.scale_int(-1)]), Err(Error::Invalid("values violate the adjoined relations".into())));
        let sq = Arc::new(Adjunction::central_root("s", 2, c.pow(2)).unwrap());
        let e = Ext::letter(&sq, 0).power(3).plus(&Ext::from_pbw(&p("y1")));
        assert_eq!(e.specialize(&[c.clone()]).unwrap(), &c.pow(3) + &p("y1"));
    }

    #[test]
    fn cardano_rules_are_confluent() {
        let adj = Adjunction::cardano(p("(12)^2"), p("(12)*(34)")).unwrap();
        assert!(adj.is_terminating());
        assert!(adj.is_confluent_up_to(5));
        let std = adj.standard_monomials(4);
        assert_eq!(std, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![2, 0], vec![3, 0]]);
    }

    #[test]
    fn cardano_cube_sum() {
        let (d, j) = (p("h + (12)"), p("(34)^2"));
        let adj = Arc::new(Adjunction::cardano(d.clone(), j.clone()).unwrap());
        let (u1, u2) = (Ext::letter(&adj, 0), Ext::letter(&adj, 1));
        assert_eq!(u1.times(&u2), Ext::base(d.negate()));
        assert_eq!(u1.power(3).plus(&u2.power(3)), Ext::base(j));
        assert_eq!(u2.times(&u1).times(&u1), u1.times(&u1).times(&u2));
    }

    #[test]
    fn ring_laws_in_extension() {
        let adj = Arc::new(Adjunction::cardano(p("(12)"), p("3")).unwrap());
        let (u1, u2) = (Ext::letter(&adj, 0), Ext::letter(&adj, 1));
        let a = u1.plus(&Ext::from_pbw(&p("x1")));
        let b = u2.power(2).minus(&Ext::from_pbw(&p("y2")));
        let c = u1.power(3).times(&u2).plus(&Ext::from_pbw(&p("x3")));
        assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
    }
}
