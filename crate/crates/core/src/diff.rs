//! Total differentials via clone indices.
//!
//! `dx_i` and `dy_i` are the generators of the clone slot of `i`, so the module
//! relations are instances of the algebra relations. `d_K` replaces one letter
//! of a variable slot by its clone, summed over positions.

use std::collections::BTreeSet;

use crate::action::{act, is_invariant, ActionOp};
use crate::bracket::bracket;
use crate::error::Result;
use crate::forms::Point;
use crate::localization::{form_polynomial, slash_bracket, z, LocElement};
use crate::pbw::{Generator, Index, Kind, PBWPoly, Slot};
use crate::polarize::delta_to;
use crate::report::Check;
use crate::ring::Ring;
use crate::scalar::Scalar;

/// `(dx_i, dy_i)`.
pub fn differential_point(i: Index) -> Point<PBWPoly> {
    Point::new(PBWPoly::dx(i), PBWPoly::dy(i))
}

/// `d_K a` for a polynomial in base generators.
pub fn total_differential(a: &PBWPoly, k: &[Index]) -> PBWPoly {
    let vars: BTreeSet<Index> = k.iter().copied().collect();
    vars.iter().fold(PBWPoly::zero(), |acc, &i| &acc + &delta_to(a, i, &differential_point(i)))
}

fn d_letter(g: Generator, k: &[Index]) -> PBWPoly {
    let i = g.slot.index();
    if g.slot.is_clone() || !k.contains(&i) {
        return PBWPoly::zero();
    }
    match g.kind {
        Kind::X => PBWPoly::dx(i),
        Kind::Y => PBWPoly::dy(i),
    }
}

/// Leibniz rule applied letter by letter to an unreduced word.
pub fn differential_of_word(word: &[Generator], k: &[Index]) -> PBWPoly {
    let mut out = PBWPoly::zero();
    for (pos, g) in word.iter().enumerate() {
        let dg = d_letter(*g, k);
        if dg.is_zero() {
            continue;
        }
        let t = &(&PBWPoly::from_word(&word[..pos]) * &dg) * &PBWPoly::from_word(&word[pos + 1..]);
        out = &out + &t;
    }
    out
}

/// `d_K` on localized elements, with `d(b^{-1}) = −b^{-1}·db·b^{-1}` for the denominators.
pub fn loc_differential(a: &LocElement, k: &[Index]) -> Result<LocElement> {
    let num = LocElement::from_poly(a.numerator().clone());
    let dnum = LocElement::from_poly(total_differential(a.numerator(), k));
    let ymono = crate::localization::y_monomial(a.y_denominator());
    let yinv = LocElement::new(PBWPoly::one(), a.y_denominator().clone(), PBWPoly::one())?;
    let dyinv = yinv.times(&LocElement::from_poly(total_differential(&ymono, k))).times(&yinv).negate();
    let cden = a.central_denominator();
    let cinv = LocElement::central_inv(cden)?;
    let dcinv = cinv.times(&LocElement::from_poly(total_differential(cden, k))).times(&cinv).negate();
    Ok(dnum.times(&yinv).times(&cinv).plus(&num.times(&dyinv).times(&cinv)).plus(&num.times(&yinv).times(&dcinv)))
}

/// `(idj) = x_i dy_j − y_i dx_j − h y_i dy_j`, equal to `d_K (ij)` when `j ∈ K`, `i ∉ K`.
pub fn diff_bracket(i: Index, j: Index) -> PBWPoly {
    let a = &PBWPoly::x(i) * &PBWPoly::dy(j);
    let b = &PBWPoly::y(i) * &PBWPoly::dx(j);
    let c = &PBWPoly::y(i) * &PBWPoly::dy(j);
    &(&a - &b) - &c.scale(&Scalar::h())
}

/// `[idj) = (z_i − h/2) dy_j − dx_j`.
pub fn diff_slash_bracket(i: Index, j: Index) -> LocElement {
    let half_h = LocElement::from_poly(PBWPoly::constant(Scalar::h().scale(&crate::scalar::CycRat::from_frac(1, 2))));
    z(i).minus(&half_h).times(&LocElement::from_poly(PBWPoly::dy(j))).minus(&LocElement::from_poly(PBWPoly::dx(j)))
}

/// `dz_i`.
pub fn dz(i: Index) -> LocElement {
    loc_differential(&z(i), &[i]).expect("y-denominator only")
}

/// Number of clone letters per term, when constant.
pub fn clone_degree(p: &PBWPoly) -> Option<u32> {
    let mut degs = p.terms().map(|(m, _)| m.blocks().iter().filter(|b| b.slot.is_clone()).map(|b| b.degree()).sum::<u32>());
    let first = degs.next().unwrap_or(0);
    degs.all(|d| d == first).then_some(first)
}

/// `E∘d = d∘E`, `F∘d = d∘F`, `H∘d = d∘H` on one sample; returns the first failing operator.
pub fn equivariance_violation(a: &PBWPoly, k: &[Index]) -> Option<ActionOp> {
    let da = total_differential(a, k);
    [ActionOp::E, ActionOp::F, ActionOp::H].into_iter().find(|&op| act(op, &da) != total_differential(&act(op, a), k))
}

pub fn check_equivariance(samples: &[(PBWPoly, Vec<Index>)]) -> Check {
    Check::run("d commutes with E, F, H", || {
        for (n, (a, k)) in samples.iter().enumerate() {
            if let Some(op) = equivariance_violation(a, k) {
                return Ok((false, format!("sample {n} ({a}) under {op:?}")));
            }
        }
        Ok((true, String::new()))
    })
}

/// Residuals of the four module relations between `i` and the clone of `j`.
pub fn module_relation_residuals(i: Index, j: Index) -> [PBWPoly; 4] {
    let (xi, yi) = (PBWPoly::x(i), PBWPoly::y(i));
    let (dx, dy) = (PBWPoly::dx(j), PBWPoly::dy(j));
    let h = Scalar::h();
    let hh = &h * &h;
    let r1 = &(&(&(&(&dx * &xi) - &(&xi * &dx)) + &(&xi * &dy).scale(&h)) - &(&yi * &dx).scale(&h)) - &(&yi * &dy).scale(&hh);
    let r2 = &(&dy * &yi) - &(&yi * &dy);
    let r3 = &(&(&dx * &yi) - &(&yi * &dx)) - &(&yi * &dy).scale(&h);
    let r4 = &(&(&dy * &xi) - &(&xi * &dy)) + &(&yi * &dy).scale(&h);
    [r1, r2, r3, r4]
}

/// `(d0,0) = y dx − x dy + s·h y dy` at index 0 for `s = ±1`.
pub fn elliptic_numerator(sign: i64) -> PBWPoly {
    let (x, y, dx, dy) = (PBWPoly::x(0), PBWPoly::y(0), PBWPoly::dx(0), PBWPoly::dy(0));
    &(&(&y * &dx) - &(&x * &dy)) + &(&y * &dy).scale(&(&Scalar::h() * &Scalar::from_int(sign)))
}

fn loc(p: PBWPoly) -> LocElement {
    LocElement::from_poly(p)
}

fn product_except(factors: &[LocElement], skip: usize, replace: Option<&LocElement>) -> LocElement {
    factors.iter().enumerate().fold(LocElement::one(), |acc, (n, f)| match (n == skip, replace) {
        (true, Some(r)) => acc.times(r),
        (true, None) => acc,
        (false, _) => acc.times(f),
    })
}

/// Both differential formulas for `f_z = [0i₁)⋯[0iₙ)` with `K = {0, i₁, …, iₙ}`.
pub fn fz_differentials(indices: &[Index]) -> Vec<Check> {
    let fz = form_polynomial(indices);
    let factors: Vec<LocElement> = indices.iter().map(|&i| slash_bracket(0, i)).collect();
    let n = indices.len();
    let d0 = Check::zero(format!("d0 f_z, n={n}"), || {
        let lhs = loc_differential(&fz, &[0])?;
        let coeff = (0..n).fold(LocElement::zero(), |acc, i| acc.plus(&loc(PBWPoly::y(indices[i])).times(&product_except(&factors, i, None))));
        let r = lhs.minus(&coeff.times(&dz(0)));
        Ok((r.is_zero(), r))
    });
    let delta = Check::zero(format!("delta f_z, n={n}"), || {
        let lhs = loc_differential(&fz, indices)?;
        let rhs = (0..n).fold(LocElement::zero(), |acc, i| acc.plus(&product_except(&factors, i, Some(&diff_slash_bracket(0, indices[i])))));
        let r = lhs.minus(&rhs);
        Ok((r.is_zero(), r))
    });
    vec![d0, delta]
}

/// `dz = −(0d0) y^{-2}` at index 0.
pub fn dz_identity() -> Check {
    Check::zero("dz = -(0d0) y^-2", || {
        let y2 = LocElement::y_inv(Slot::base(0)).power(2);
        let r = dz(0).plus(&loc(diff_bracket(0, 0)).times(&y2));
        Ok((r.is_zero(), r))
    })
}

/// `d_{K∪K'} = d_K + d_{K'}` on a sample.
pub fn splitting_residual(a: &PBWPoly, k: &[Index], k2: &[Index]) -> PBWPoly {
    let both: Vec<Index> = k.iter().chain(k2).copied().collect();
    &total_differential(a, &both) - &(&total_differential(a, k) + &total_differential(a, k2))
}

/// `(idj)` is invariant and equals `d_{j}(ij)`.
pub fn diff_bracket_check(i: Index, j: Index) -> bool {
    let db = diff_bracket(i, j);
    is_invariant(&db) && total_differential(&bracket(i, j), &[j]) == db
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::Generator as G;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PBWPoly {
        PBWPoly::parse(s).unwrap()
    }

    #[test]
    fn generator_values() {
        assert_eq!(total_differential(&p("x1*y2"), &[1, 2]), p("dx1*y2 + x1*dy2"));
        assert!(total_differential(&PBWPoly::one(), &[0, 1]).is_zero());
        assert!(total_differential(&bracket(1, 2), &[0, 3]).is_zero());
    }

    #[test]
    fn module_relations_are_algebra_relations() {
        for i in 0..4 {
            for j in 0..4 {
                for r in module_relation_residuals(i, j) {
                    assert!(r.is_zero(), "{i} {j}: {r}");
                }
            }
        }
    }

    #[test]
    fn consistency_with_relations() {
        let word = [G::x(2), G::y(1)];
        let k = [1, 2];
        let lhs = differential_of_word(&word, &k);
        let rhs = total_differential(&(&(&PBWPoly::y(1) * &PBWPoly::x(2)) + &(&PBWPoly::y(1) * &PBWPoly::y(2)).scale(&Scalar::h())), &k);
        assert_eq!(lhs, rhs);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let len = rng.gen_range(1..7);
            let w: Vec<G> = (0..len)
                .map(|_| {
                    let i = rng.gen_range(0..4);
                    if rng.gen_bool(0.5) {
                        G::x(i)
                    } else {
                        G::y(i)
                    }
                })
                .collect();
            let k: Vec<Index> = (0..4).filter(|_| rng.gen_bool(0.6)).collect();
            assert_eq!(differential_of_word(&w, &k), total_differential(&PBWPoly::from_word(&w), &k));
        }
    }

    #[test]
    fn differential_brackets() {
        assert!(diff_bracket_check(1, 2));
        assert!(diff_bracket_check(3, 0));
        assert!(total_differential(&bracket(1, 2), &[0]).is_zero());
        assert_eq!(clone_degree(&diff_bracket(1, 2)), Some(1));
    }

    #[test]
    fn equivariance() {
        let samples = vec![(p("x1*y2"), vec![1, 2]), (bracket(1, 2), vec![1, 2]), (PBWPoly::one(), vec![0]), (p("x1^2*y3 + h*x2*x3"), vec![1, 3])];
        assert!(check_equivariance(&samples).holds);
    }

    #[test]
    fn splitting() {
        let a = &bracket(0, 1) * &bracket(0, 2);
        assert!(splitting_residual(&a, &[0], &[1, 2]).is_zero());
    }

    #[test]
    fn elliptic_numerator_sign() {
        assert!(is_invariant(&elliptic_numerator(1)));
        assert!(!is_invariant(&elliptic_numerator(-1)));
        assert_eq!(elliptic_numerator(1), -&diff_bracket(0, 0));
    }

    #[test]
    fn dz_formula() {
        assert!(dz_identity().holds);
    }

    #[test]
    fn slashed_bracket_differentials() {
        let dzi = dz(1);
        assert_eq!(loc_differential(&slash_bracket(1, 2), &[1]).unwrap(), loc(PBWPoly::y(2)).times(&dzi));
        assert_eq!(loc_differential(&slash_bracket(1, 2), &[2]).unwrap(), diff_slash_bracket(1, 2));
    }

    #[test]
    fn form_polynomial_differentials() {
        for n in 1..=3u32 {
            let idx: Vec<Index> = (1..=n).collect();
            for c in fz_differentials(&idx) {
                assert!(c.holds, "{c}");
            }
        }
    }

    #[test]
    fn extended_commutation() {
        let algebra = |a: Index, b: Index| vec![loc(PBWPoly::y(a)), z(a).minus(&z(b)), loc(bracket(a, b)), slash_bracket(a, b)];
        let module = |a: Index, b: Index| vec![loc(PBWPoly::dy(a)), dz(a), loc(diff_bracket(a, b)), diff_slash_bracket(a, b)];
        let pairs = [(1, 2), (2, 3), (3, 1)];
        let alg: Vec<LocElement> = pairs.iter().flat_map(|&(a, b)| algebra(a, b)).collect();
        let md: Vec<LocElement> = pairs.iter().flat_map(|&(a, b)| module(a, b)).collect();
        for u in &alg {
            for v in alg.iter().chain(&md) {
                assert_eq!(u.times(v), v.times(u), "{u} / {v}");
            }
        }
    }
}
