//! Sparse Gaussian elimination over `CycRat`.
//!
//! Unknown scalars in `ℚ(ε)[h]` are expanded in powers of `h`, so a linear
//! system over scalars becomes one over `CycRat` with coordinates
//! `(monomial, h-exponent)`.

use std::collections::BTreeMap;

use crate::pbw::{Monomial, PBWPoly};
use crate::scalar::{CycRat, Scalar};

type SparseVec<K> = BTreeMap<K, CycRat>;

fn axpy<K: Ord + Clone>(v: &mut SparseVec<K>, c: &CycRat, w: &SparseVec<K>) {
    for (k, x) in w {
        let e = v.entry(k.clone()).or_default();
        *e = &*e + &c.mul_ref(x);
        if e.is_zero() {
            v.remove(k);
        }
    }
}

/// Row echelon basis of the span of inserted vectors, each pivot remembering
/// its expression in the inserted columns.
#[derive(Debug, Default)]
pub struct Echelon<K: Ord + Clone> {
    pivots: BTreeMap<K, (SparseVec<K>, SparseVec<usize>)>,
    columns: usize,
    dependent: bool,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { pivots: BTreeMap::new(), columns: 0, dependent: false }
    }

    /// Reduces `v` against the pivots; returns the residual and the combination subtracted.
    pub fn reduce(&self, mut v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut combo: SparseVec<usize> = BTreeMap::new();
        let mut done: SparseVec<K> = BTreeMap::new();
        while let Some((k, c)) = v.pop_last() {
            match self.pivots.get(&k) {
                Some((pv, pc)) => {
                    // pivot vectors are normalized to 1 at their leading key
                    let mut rest = pv.clone();
                    rest.remove(&k);
                    axpy(&mut v, &-&c, &rest);
                    axpy(&mut combo, &c, pc);
                }
                None => {
                    done.insert(k, c);
                }
            }
        }
        (done, combo)
    }

    /// Adds a column; returns false when it is dependent on earlier ones.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let idx = self.columns;
        self.columns += 1;
        let (res, combo) = self.reduce(v);
        let Some((lead, lc)) = res.last_key_value().map(|(k, c)| (k.clone(), c.clone())) else {
            self.dependent = true;
            return false;
        };
        let inv = lc.inv().expect("nonzero leading coefficient");
        let mut expr: SparseVec<usize> = BTreeMap::from([(idx, CycRat::from_int(1))]);
        axpy(&mut expr, &CycRat::from_int(-1), &combo);
        let res: SparseVec<K> = res.into_iter().map(|(k, c)| (k, c.mul_ref(&inv))).collect();
        let expr: SparseVec<usize> = expr.into_iter().map(|(k, c)| (k, c.mul_ref(&inv))).collect();
        self.pivots.insert(lead, (res, expr));
        true
    }

    pub fn is_independent(&self) -> bool {
        !self.dependent
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Solution of `target = Σ c_b basis_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub coeffs: Vec<Scalar>,
    /// False when the basis is linearly dependent, so free unknowns were set to zero.
    pub unique: bool,
}

fn coords(p: &PBWPoly, shift: u32) -> SparseVec<(Monomial, u32)> {
    let mut v = BTreeMap::new();
    for (m, c) in p.terms() {
        for (e, x) in c.terms() {
            v.insert((m.clone(), e + shift), x.clone());
        }
    }
    v
}

/// Largest `x`-weight plus `h`-degree over the terms; every relation preserves it.
fn weight_bound(p: &PBWPoly) -> u32 {
    p.terms().map(|(m, c)| m.x_weight() + c.h_degree().unwrap_or(0)).max().unwrap_or(0)
}

/// Finds scalars with `target = Σ c_b · basis_b`, or `None` when no combination exists.
///
/// Unknowns range over `h^e` with `e` up to the weight of the target, which
/// suffices because every basis element has nonnegative weight.
pub fn solve_combination(target: &PBWPoly, basis: &[PBWPoly]) -> Option<Solution> {
    let top = weight_bound(target);
    let mut ech = Echelon::new();
    let mut unknowns = Vec::new();
    for (b, p) in basis.iter().enumerate() {
        for e in 0..=top {
            ech.insert(coords(p, e));
            unknowns.push((b, e));
        }
    }
    let (res, combo) = ech.reduce(coords(target, 0));
    if !res.is_empty() {
        return None;
    }
    let mut coeffs = vec![Scalar::zero(); basis.len()];
    for (u, c) in combo {
        let (b, e) = unknowns[u];
        coeffs[b] += &Scalar::monomial(c, e);
    }
    Some(Solution { coeffs, unique: ech.is_independent() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PBWPoly {
        PBWPoly::parse(s).unwrap()
    }

    #[test]
    fn recovers_known_combination() {
        let basis = [p("x1"), p("y1"), p("x1*y2")];
        let target = p("3*x1 - h^2*y1 + (2 + eps*h)*x1*y2");
        let s = solve_combination(&target, &basis).unwrap();
        assert!(s.unique);
        assert_eq!(s.coeffs[0], Scalar::from_int(3));
        assert_eq!(s.coeffs[1], Scalar::parse("-h^2").unwrap());
        assert_eq!(s.coeffs[2], Scalar::parse("2 + eps*h").unwrap());
    }

    #[test]
    fn reports_missing_direction() {
        assert!(solve_combination(&p("y2"), &[p("x1"), p("y1")]).is_none());
    }

    #[test]
    fn flags_dependence() {
        let s = solve_combination(&p("2*x1"), &[p("x1"), p("2*x1")]).unwrap();
        assert!(!s.unique);
    }
}
