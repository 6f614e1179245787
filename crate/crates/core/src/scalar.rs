//! Coefficient ring: polynomials in `h` over the cyclotomic field ℚ(ε), ε² + ε + 1 = 0.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// `re + im·ε` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CycRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CycRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CycRat { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        CycRat::rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        CycRat::rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn rat(re: BigRational) -> Self {
        CycRat { re, im: BigRational::zero() }
    }

    pub fn eps() -> Self {
        CycRat { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    /// Field norm `re² − re·im + im²`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.im + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<CycRat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        // conj(a + bε) = a + bε² = (a − b) − bε
        Ok(CycRat { re: (&self.re - &self.im) / &n, im: -&self.im / &n })
    }

    pub fn mul_ref(&self, o: &CycRat) -> CycRat {
        if self.im.is_zero() && o.im.is_zero() {
            return CycRat::rat(&self.re * &o.re);
        }
        // (a + bε)(c + dε) = ac − bd + (ad + bc − bd)ε
        let bd = &self.im * &o.im;
        CycRat {
            re: &self.re * &o.re - &bd,
            im: &self.re * &o.im + &self.im * &o.re - bd,
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> CycRat {
        CycRat { re: &self.re * k, im: &self.im * k }
    }
}

impl Add for &CycRat {
    type Output = CycRat;
    fn add(self, o: &CycRat) -> CycRat {
        CycRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &CycRat {
    type Output = CycRat;
    fn sub(self, o: &CycRat) -> CycRat {
        CycRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &CycRat {
    type Output = CycRat;
    fn mul(self, o: &CycRat) -> CycRat {
        self.mul_ref(o)
    }
}

impl Neg for &CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        CycRat { re: -&self.re, im: -&self.im }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Element of ℚ(ε)[h]: sparse map from h-exponent to coefficient, ascending, no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: SmallVec<[(u32, CycRat); 2]>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: SmallVec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_cyc(CycRat::from_int(1))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_cyc(CycRat::from_int(n))
    }

    pub fn from_frac(p: i64, q: i64) -> Self {
        Scalar::from_cyc(CycRat::from_frac(p, q))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from_cyc(CycRat::rat(BigRational::from_integer(n)))
    }

    pub fn from_cyc(c: CycRat) -> Self {
        Scalar::monomial(c, 0)
    }

    pub fn eps() -> Self {
        Scalar::from_cyc(CycRat::eps())
    }

    pub fn h() -> Self {
        Scalar::h_pow(1)
    }

    pub fn h_pow(e: u32) -> Self {
        Scalar::monomial(CycRat::from_int(1), e)
    }

    pub fn monomial(c: CycRat, e: u32) -> Self {
        let mut terms = SmallVec::new();
        if !c.is_zero() {
            terms.push((e, c));
        }
        Scalar { terms }
    }

    pub fn from_terms(map: BTreeMap<u32, CycRat>) -> Self {
        Scalar { terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &CycRat)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// The coefficient as a constant, when no positive power of `h` occurs.
    pub fn as_const(&self) -> Option<CycRat> {
        match self.terms.as_slice() {
            [] => Some(CycRat::default()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coeff(&self, e: u32) -> CycRat {
        self.terms.iter().find(|(k, _)| *k == e).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    pub fn h_degree(&self) -> Option<u32> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn low_degree(&self) -> Option<u32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_rational())
    }

    /// Substitute a constant for `h`.
    pub fn eval_h(&self, v: &CycRat) -> CycRat {
        let mut acc = CycRat::default();
        for (e, c) in self.terms.iter().rev() {
            // Horner would need gaps; powers stay tiny here.
            let mut p = c.clone();
            for _ in 0..*e {
                p = p.mul_ref(v);
            }
            acc = &acc + &p;
        }
        acc
    }

    pub fn eval_h_scalar(&self, v: &CycRat) -> Scalar {
        Scalar::from_cyc(self.eval_h(v))
    }

    pub fn scale(&self, c: &CycRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(e, x)| (*e, x.mul_ref(c))).collect() }
    }

    /// `self · k · h^e` for an integer `k`.
    pub fn mul_int_hpow(&self, k: &BigInt, e: u32) -> Scalar {
        if k.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(d, x)| (d + e, x.scale_int(k))).collect() }
    }

    pub fn shift_h(&self, e: u32) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(d, x)| (d + e, x.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Division by a nonzero constant.
    pub fn div_const(&self, c: &CycRat) -> Result<Scalar> {
        Ok(self.scale(&c.inv()?))
    }

    /// Exact division by another scalar when it is a constant.
    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar> {
        match o.as_const() {
            Some(c) => self.div_const(&c),
            None => Err(Error::NotInvertible(o.to_string())),
        }
    }

    fn merge(a: &Scalar, b: &Scalar, negate_b: bool) -> Scalar {
        let mut out: SmallVec<[(u32, CycRat); 2]> = SmallVec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            let take_a = j >= b.terms.len() || (i < a.terms.len() && a.terms[i].0 < b.terms[j].0);
            let take_b = i >= a.terms.len() || (j < b.terms.len() && b.terms[j].0 < a.terms[i].0);
            if take_a {
                out.push(a.terms[i].clone());
                i += 1;
            } else if take_b {
                let (e, c) = &b.terms[j];
                out.push((*e, if negate_b { -c } else { c.clone() }));
                j += 1;
            } else {
                let c = if negate_b { &a.terms[i].1 - &b.terms[j].1 } else { &a.terms[i].1 + &b.terms[j].1 };
                if !c.is_zero() {
                    out.push((a.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Scalar { terms: out }
    }

    pub fn parse(s: &str) -> Result<Scalar> {
        crate::parse::parse_scalar(s)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::merge(self, o, false)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::merge(self, o, true)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        if o.is_zero() {
            return;
        }
        if self.terms.len() == 1 && o.terms.len() == 1 && self.terms[0].0 == o.terms[0].0 {
            let c = &self.terms[0].1 + &o.terms[0].1;
            if c.is_zero() {
                self.terms.clear();
            } else {
                self.terms[0].1 = c;
            }
            return;
        }
        *self = Scalar::merge(self, o, false);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = Scalar::merge(self, o, true);
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.terms.len() == 1 && o.terms.len() == 1 {
            let (e1, c1) = &self.terms[0];
            let (e2, c2) = &o.terms[0];
            return Scalar::monomial(c1.mul_ref(c2), e1 + e2);
        }
        let mut map: BTreeMap<u32, CycRat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let slot = map.entry(e1 + e2).or_default();
                *slot = &*slot + &c1.mul_ref(c2);
            }
        }
        Scalar::from_terms(map)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// Writes one `CycRat` as a list of signed summands, each without its leading sign.
fn cyc_summands(c: &CycRat) -> Vec<(bool, String, bool)> {
    // (negative, magnitude text, is the bare number 1)
    let mut out = Vec::new();
    if !c.re.is_zero() {
        let a = c.re.abs();
        out.push((c.re.is_negative(), fmt_rat(&a), a.is_one()));
    }
    if !c.im.is_zero() {
        let b = c.im.abs();
        let txt = if b.is_one() { "eps".to_string() } else { format!("{}*eps", fmt_rat(&b)) };
        out.push((c.im.is_negative(), txt, false));
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            for (neg, mag, unit) in cyc_summands(c) {
                let body = match (*e, unit) {
                    (0, _) => mag,
                    (1, true) => "h".to_string(),
                    (k, true) => format!("h^{k}"),
                    (1, false) => format!("{mag}*h"),
                    (k, false) => format!("{mag}*h^{k}"),
                };
                match (first, neg) {
                    (true, false) => write!(f, "{body}")?,
                    (true, true) => write!(f, "-{body}")?,
                    (false, false) => write!(f, " + {body}")?,
                    (false, true) => write!(f, " - {body}")?,
                }
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Display for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Scalar::from_cyc(self.clone()).fmt(f)
    }
}

impl Scalar {
    /// Number of additive summands in the printed form.
    pub fn summand_count(&self) -> usize {
        self.terms.iter().map(|(_, c)| cyc_summands(c).len()).sum()
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        Scalar::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_cyc() -> impl Strategy<Value = CycRat> {
        (-9i64..10, 1i64..5, -9i64..10, 1i64..5)
            .prop_map(|(a, b, c, d)| CycRat::new(CycRat::from_frac(a, b).re, CycRat::from_frac(c, d).re))
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        proptest::collection::btree_map(0u32..4, arb_cyc(), 0..4).prop_map(Scalar::from_terms)
    }

    #[test]
    fn eps_is_primitive_cube_root() {
        let e = Scalar::eps();
        let lhs = &(&(&e * &e) + &e) + &Scalar::one();
        assert!(lhs.is_zero());
        assert!((&(&e * &e) * &e).is_one());
    }

    #[test]
    fn parse_print_sample() {
        let s = Scalar::parse("3/2*h^2 + eps*h").unwrap();
        assert_eq!(s.to_string(), "3/2*h^2 + eps*h");
        assert_eq!(Scalar::parse("-h + 1").unwrap().to_string(), "-h + 1");
    }

    #[test]
    fn eval_at_zero() {
        let s = Scalar::parse("3/2*h^2 + eps*h").unwrap();
        assert!(s.eval_h(&CycRat::default()).is_zero());
        let s = Scalar::parse("2 + h").unwrap();
        assert_eq!(s.eval_h(&CycRat::from_int(3)), CycRat::from_int(5));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(CycRat::default().inv().is_err());
    }

    proptest! {
        #[test]
        fn field_inverse(a in arb_cyc()) {
            prop_assume!(!a.is_zero());
            prop_assert!(a.mul_ref(&a.inv().unwrap()).is_one());
        }

        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&(&(&a + &b) - &b) - &a).is_zero());
        }

        #[test]
        fn eval_h_is_homomorphism(a in arb_scalar(), b in arb_scalar(), v in arb_cyc()) {
            prop_assert_eq!((&a * &b).eval_h(&v), a.eval_h(&v).mul_ref(&b.eval_h(&v)));
        }

        #[test]
        fn round_trip(a in arb_scalar()) {
            prop_assert_eq!(Scalar::parse(&a.to_string()).unwrap(), a);
        }
    }
}
