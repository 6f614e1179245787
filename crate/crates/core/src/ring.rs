//! A minimal ring interface shared by normal forms, localized elements and extensions.

use std::fmt;

use crate::pbw::PBWPoly;
use crate::scalar::Scalar;

pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scaled(&self, s: &Scalar) -> Self;
    fn from_pbw(p: &PBWPoly) -> Self;

    fn power(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.times(self))
    }

    fn product<'a, I: IntoIterator<Item = &'a Self>>(it: I) -> Self
    where
        Self: 'a,
    {
        it.into_iter().fold(Self::one(), |acc, p| acc.times(p))
    }
}

impl Ring for PBWPoly {
    fn zero() -> Self {
        PBWPoly::zero()
    }
    fn one() -> Self {
        PBWPoly::one()
    }
    fn is_zero(&self) -> bool {
        PBWPoly::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn scaled(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
    fn from_pbw(p: &PBWPoly) -> Self {
        p.clone()
    }
}

/// `[a, b] = ab − ba`.
pub fn commutator<R: Ring>(a: &R, b: &R) -> R {
    a.times(b).minus(&b.times(a))
}
