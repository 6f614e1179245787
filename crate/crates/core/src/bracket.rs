//! Bracket invariants `(ij) = x_i y_j − y_i x_j − h y_i y_j` and polynomials in them.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::CommPoly;
use crate::parse::{const_divisor, eval_scalar, parse_expr, Expr};
use crate::pbw::{Index, Monomial, PBWPoly};
use crate::scalar::Scalar;

thread_local! {
    static BRACKETS: RefCell<HashMap<(Index, Index), PBWPoly>> = RefCell::new(HashMap::new());
}

/// `(ij)` as a normal-form polynomial; `(ii) = 0`.
pub fn bracket(i: Index, j: Index) -> PBWPoly {
    if let Some(b) = BRACKETS.with(|c| c.borrow().get(&(i, j)).cloned()) {
        return b;
    }
    let xy = &PBWPoly::x(i) * &PBWPoly::y(j);
    let yx = &PBWPoly::y(i) * &PBWPoly::x(j);
    let yy = (&PBWPoly::y(i) * &PBWPoly::y(j)).scale(&Scalar::h());
    let b = &(&xy - &yx) - &yy;
    BRACKETS.with(|c| c.borrow_mut().insert((i, j), b.clone()));
    b
}

/// A multiset of brackets, each stored as `(i, j)` with `i < j`, sorted.
pub type BracketMonomial = Vec<(Index, Index)>;

/// Polynomial in brackets with scalar coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BracketPoly {
    terms: BTreeMap<BracketMonomial, Scalar>,
}

impl BracketPoly {
    pub fn zero() -> Self {
        BracketPoly::default()
    }

    pub fn constant(s: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(Vec::new(), s);
        }
        BracketPoly { terms }
    }

    pub fn one() -> Self {
        BracketPoly::constant(Scalar::one())
    }

    /// `(ij)`, normalized by antisymmetry.
    pub fn br(i: Index, j: Index) -> Self {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => BracketPoly::zero(),
            std::cmp::Ordering::Less => BracketPoly { terms: BTreeMap::from([(vec![(i, j)], Scalar::one())]) },
            std::cmp::Ordering::Greater => BracketPoly { terms: BTreeMap::from([(vec![(j, i)], -Scalar::one())]) },
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BracketMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: BracketMonomial, c: &Scalar) {
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = BracketPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &(c * s));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(BracketPoly::one(), |acc, _| &acc * self)
    }

    pub fn indices(&self) -> std::collections::BTreeSet<Index> {
        self.terms.keys().flatten().flat_map(|(i, j)| [*i, *j]).collect()
    }

    pub fn parse(src: &str) -> Result<Self> {
        eval_bracket(&parse_expr(src, true)?)
    }
}

impl Add for &BracketPoly {
    type Output = BracketPoly;
    fn add(self, o: &BracketPoly) -> BracketPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &BracketPoly {
    type Output = BracketPoly;
    fn sub(self, o: &BracketPoly) -> BracketPoly {
        self + &-o
    }
}

impl Neg for &BracketPoly {
    type Output = BracketPoly;
    fn neg(self) -> BracketPoly {
        BracketPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &BracketPoly {
    type Output = BracketPoly;
    fn mul(self, o: &BracketPoly) -> BracketPoly {
        let mut out = BracketPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m: BracketMonomial = m1.iter().chain(m2.iter()).copied().collect();
                m.sort_unstable();
                out.add_term(m, &(c1 * c2));
            }
        }
        out
    }
}

crate::forward_owned!(BracketPoly, Add, add);
crate::forward_owned!(BracketPoly, Sub, sub);
crate::forward_owned!(BracketPoly, Mul, mul);

impl fmt::Display for BracketPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = |m: &BracketMonomial| {
            if m.is_empty() {
                return "1".to_string();
            }
            let mut parts: Vec<String> = Vec::new();
            let mut k = 0;
            while k < m.len() {
                let mut e = 1;
                while k + e < m.len() && m[k + e] == m[k] {
                    e += 1;
                }
                let (i, j) = m[k];
                parts.push(if e == 1 { format!("br({i},{j})") } else { format!("br({i},{j})^{e}") });
                k += e;
            }
            parts.join("*")
        };
        crate::pbw::write_sum(f, self.terms.iter().rev().map(|(m, c)| (body(m), c)))
    }
}

pub fn eval_bracket(e: &Expr) -> Result<BracketPoly> {
    Ok(match e {
        Expr::Num(_) | Expr::Eps | Expr::H => BracketPoly::constant(eval_scalar(e)?),
        Expr::Br(i, j) => BracketPoly::br(*i, *j),
        Expr::Add(a, b) => &eval_bracket(a)? + &eval_bracket(b)?,
        Expr::Sub(a, b) => &eval_bracket(a)? - &eval_bracket(b)?,
        Expr::Neg(a) => -&eval_bracket(a)?,
        Expr::Mul(a, b) => &eval_bracket(a)? * &eval_bracket(b)?,
        Expr::Div(a, b) => eval_bracket(a)?.scale(&Scalar::from_cyc(const_divisor(b)?.inv()?)),
        Expr::Pow(a, n) => eval_bracket(a)?.pow(*n),
        _ => return Err(Error::Invalid("only brackets and scalars are allowed in a bracket polynomial".into())),
    })
}

/// Expands into the normal-form algebra.
pub fn expand_brackets(e: &BracketPoly) -> PBWPoly {
    let mut out = PBWPoly::zero();
    for (m, c) in e.terms() {
        let prod = PBWPoly::product(m.iter().map(|(i, j)| bracket(*i, *j)).collect::<Vec<_>>().iter());
        out = &out + &prod.scale(c);
    }
    out
}

/// Independent commutative evaluation `[ij] = x_i y_j − y_i x_j`.
pub fn classical_eval(e: &BracketPoly) -> CommPoly {
    let mut out = CommPoly::zero();
    for (m, c) in e.terms() {
        let mut prod = CommPoly::constant(c.clone());
        for (i, j) in m {
            prod = prod.mul(&CommPoly::bracket(*i, *j));
        }
        out = out.add(&prod);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Verdict {
    Holds,
    /// A monomial with nonzero coefficient in the expansion.
    Fails(String),
    /// The deformed and classical backends disagree.
    Disagreement { deformed_zero: bool, classical_zero: bool },
}

/// Checks `e = 0` in both the deformed engine and the commutative oracle.
pub fn verify_bracket_identity(e: &BracketPoly) -> Verdict {
    let deformed = expand_brackets(e);
    let classical = classical_eval(e);
    match (deformed.is_zero(), classical.is_zero()) {
        (true, true) => Verdict::Holds,
        (false, false) => {
            let (m, c) = deformed.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap_or((Monomial::one(), Scalar::zero()));
            Verdict::Fails(PBWPoly::term(m, c).to_string())
        }
        (d, c) => Verdict::Disagreement { deformed_zero: d, classical_zero: c },
    }
}

/// `(ij)(kl) + (ik)(lj) + (il)(jk)`.
pub fn grassmann_pluecker(i: Index, j: Index, k: Index, l: Index) -> BracketPoly {
    let b = BracketPoly::br;
    &(&(&b(i, j) * &b(k, l)) + &(&b(i, k) * &b(l, j))) + &(&b(i, l) * &b(j, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::is_invariant;

    #[test]
    fn bracket_shape() {
        assert_eq!(bracket(1, 2), PBWPoly::parse("x1*y2 - y1*x2 - h*y1*y2").unwrap());
        assert!(bracket(3, 3).is_zero());
        assert_eq!(bracket(2, 1), -bracket(1, 2));
        assert!(is_invariant(&bracket(2, 5)));
    }

    #[test]
    fn plucker_holds() {
        assert_eq!(verify_bracket_identity(&grassmann_pluecker(1, 2, 3, 4)), Verdict::Holds);
        assert_eq!(verify_bracket_identity(&grassmann_pluecker(4, 1, 3, 2)), Verdict::Holds);
    }

    #[test]
    fn non_identity_fails_in_both() {
        let e = BracketPoly::parse("(12)*(34)").unwrap();
        assert!(matches!(verify_bracket_identity(&e), Verdict::Fails(_)));
    }

    #[test]
    fn square_of_bracket_expansion() {
        // (12)² = x1²y2² − 2x1y1x2y2 + y1²x2² − h x1y1y2² + 3h y1²x2y2
        let want = PBWPoly::parse("x1^2*y2^2 - 2*x1*y1*x2*y2 + y1^2*x2^2 - h*x1*y1*y2^2 + 3*h*y1^2*x2*y2").unwrap();
        assert_eq!(&bracket(1, 2) * &bracket(1, 2), want);
    }

    #[test]
    fn round_trip() {
        let e = BracketPoly::parse("2*(12)^2*(34) - h/3*(13) + eps").unwrap();
        assert_eq!(BracketPoly::parse(&e.to_string()).unwrap(), e);
    }
}
