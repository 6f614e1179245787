//! Quadratic and cubic solvers, typical representations, and zero verification.
//!
//! An auxiliary index `a` (usually 1) supplies `η = (0a)` and the
//! polarizations `P_{0a}`. Every identity with a denominator is checked in
//! cleared form.

use std::sync::Arc;

use crate::bracket::bracket;
use crate::constants::{named_invariant, SYZYGY_DELTA_FACTOR};
use crate::error::{Error, Result};
use crate::ext::{Coefficient, Ext, Adjunction};
use crate::forms::{make_point, Form, Point, Side, DIST};
use crate::localization::{invert, LocElement};
use crate::pbw::{Index, PBWPoly, Slot};
use crate::polarize::{polarize_pow, substitute, PolarTarget};
use crate::report::Check;
use crate::ring::Ring;
use crate::scalar::Scalar;

pub type ExtPoly = Ext<PBWPoly>;
pub type ExtLoc = Ext<LocElement>;

fn lift(p: &PBWPoly) -> ExtPoly {
    Ext::from_pbw(p)
}

fn frac(p: i64, q: i64) -> Scalar {
    Scalar::from_frac(p, q)
}

/// `P_{0a}^k f`.
pub fn p0(f: &PBWPoly, aux: Index, k: u32) -> Result<PBWPoly> {
    polarize_pow(f, 0, &PolarTarget::Index(aux), k)
}

fn form_of_degree(f: &PBWPoly, n: u32, aux: Index) -> Result<Form> {
    let form = Form::extract(f, Side::Right)?;
    if form.n != n {
        return Err(Error::NotAForm(format!("expected degree {n}, found {}", form.n)));
    }
    let aux_slot = Slot::base(aux);
    if form.coeffs.iter().any(|c| c.slots().iter().any(|s| *s == DIST || *s == aux_slot)) {
        return Err(Error::Invalid(format!("coefficients must avoid the indices 0 and {aux}")));
    }
    Ok(form)
}

fn linear_point(xi: &PBWPoly) -> Result<Point<PBWPoly>> {
    make_point(&Form::extract_unchecked(xi, Side::Right)?)
}

fn lift_point(p: &Point<PBWPoly>) -> Point<ExtPoly> {
    Point::new(lift(&p.x), lift(&p.y))
}

/// `G_{(x,y),p} f = 0`.
pub fn verify_zero<C: Coefficient>(f: &PBWPoly, p: &Point<Ext<C>>) -> bool {
    substitute(f, 0, p).is_zero()
}

fn residual_check(name: &str, r: Result<ExtPoly>) -> Check {
    Check::zero(name, || r.map(|r| (r.is_zero(), r)))
}

fn poly_check(name: &str, r: Result<PBWPoly>) -> Check {
    Check::zero(name, || r.map(|r| (r.is_zero(), r)))
}

#[derive(Clone, Debug)]
pub struct QuadraticSolution {
    pub aux: Index,
    pub form: Form,
    pub d2: PBWPoly,
    pub adj: Arc<Adjunction<PBWPoly>>,
    pub points: [Point<ExtPoly>; 2],
}

/// Adjoins `s` with `s² = −½d₂` and returns the points of `P_{0a}f ± (0a)s`.
pub fn solve_quadratic(f: &PBWPoly, aux: Index) -> Result<QuadraticSolution> {
    let form = form_of_degree(f, 2, aux)?;
    let d2 = named_invariant("d2")?.instantiate(&form)?;
    let adj = Arc::new(Adjunction::central_root("s", 2, d2.scale(&frac(-1, 2)))?);
    let s = Ext::letter(&adj, 0);
    let base = lift_point(&linear_point(&p0(f, aux, 1)?)?);
    let (xa, ya) = (lift(&PBWPoly::x(aux)), lift(&PBWPoly::y(aux)));
    let point = |sign: i64| {
        let ss = s.scaled(&Scalar::from_int(sign));
        Point::new(base.x.plus(&xa.times(&ss)), base.y.plus(&ya.times(&ss)))
    };
    Ok(QuadraticSolution { aux, form, d2, adj, points: [point(1), point(-1)] })
}

impl QuadraticSolution {
    pub fn s(&self) -> ExtPoly {
        Ext::letter(&self.adj, 0)
    }

    fn coeff(&self, i: usize) -> ExtPoly {
        lift(&self.form.coeffs[i])
    }

    /// `X₁,₂`, `Y₁,₂` from the closed formulas.
    pub fn printed_points(&self) -> [Point<ExtPoly>; 2] {
        let (a, b, c) = (self.coeff(0), self.coeff(1), self.coeff(2));
        let (x1, y1) = (lift(&PBWPoly::x(self.aux)), lift(&PBWPoly::y(self.aux)));
        let h = Scalar::h();
        let point = |sign: i64| {
            let s = self.s().scaled(&Scalar::from_int(sign));
            let x = x1
                .times(&b)
                .negate()
                .minus(&y1.times(&c))
                .plus(&x1.times(&s))
                .minus(&y1.times(&b).scaled(&(&h * &Scalar::from_int(2))))
                .minus(&x1.times(&a).scaled(&(&h * &frac(3, 2))));
            let y = x1.times(&a).plus(&y1.times(&b)).plus(&y1.times(&s)).minus(&y1.times(&a).scaled(&(&h * &frac(1, 2))));
            Point::new(x, y)
        };
        [point(1), point(-1)]
    }

    /// `Z₁,₂ = (−B ± s)A^{-1}`; needs `A` to be a `y`-monomial or central.
    pub fn z(&self) -> Result<[ExtLoc; 2]> {
        let adj = Arc::new(self.adj.map(|c| LocElement::from_poly(c.clone())));
        let s = Ext::letter(&adj, 0);
        let ainv = Ext::base(invert(&self.form.coeffs[0])?);
        let b = Ext::base(LocElement::from_poly(self.form.coeffs[1].clone()));
        Ok([b.negate().plus(&s).times(&ainv), b.negate().minus(&s).times(&ainv)])
    }

    /// `Z·Y − X − (h/2)Y` for a point of this (or another) solution of the same form.
    pub fn z_residual(z: &ExtLoc, p: &Point<ExtPoly>) -> ExtLoc {
        let adj = z.adj().cloned();
        let conv = |e: &ExtPoly| e.map_coeffs(adj.clone(), |c| LocElement::from_poly(c.clone()));
        let (x, y) = (conv(&p.x), conv(&p.y));
        z.times(&y).minus(&x).minus(&y.scaled(&frac(1, 2).scale_h()))
    }

    /// Every identity of the quadratic solver, for the form `f` it was built from.
    pub fn checks(&self, f: &PBWPoly) -> Vec<Check> {
        let aux = self.aux;
        let pf = p0(f, aux, 1);
        let pf2 = p0(f, aux, 2);
        let eta = bracket(0, aux);
        let mut out = Vec::new();
        out.push(poly_check("typical representation n=2", (|| {
            let (pf, pf2) = (pf.clone()?, pf2.clone()?);
            Ok(&(&(f * &pf2) - &(&pf * &pf)) - &(&(&eta * &eta) * &self.d2).scale(&frac(1, 2)))
        })()));
        let lhs = pf2.clone().map(|p2| lift(&(f * &p2)));
        out.push(residual_check("quadratic factorization", (|| {
            let (l, pf) = (lhs.clone()?, lift(&pf.clone()?));
            let se = lift(&eta).times(&self.s());
            Ok(l.minus(&pf.plus(&se).times(&pf.minus(&se))))
        })()));
        out.push(residual_check("product of linear forms", (|| {
            let prod = self.points[0].linear_form().times(&self.points[1].linear_form());
            Ok(lhs.clone()?.minus(&prod))
        })()));
        let printed = self.printed_points();
        out.push(Check::run("closed formulas for X, Y", || Ok((printed == self.points, String::new()))));
        for (i, p) in self.points.iter().enumerate() {
            out.push(Check::run(format!("root {} annihilates f", i + 1), || Ok((verify_zero(f, p), String::new()))));
        }
        out.push(Check::run("Z = (-B ± s)A^-1", || {
            let z = self.z()?;
            let ok = z.iter().zip(&self.points).all(|(z, p)| QuadraticSolution::z_residual(z, p).is_zero());
            Ok((ok, String::new()))
        }));
        out
    }
}

trait ScaleH {
    fn scale_h(&self) -> Scalar;
}

impl ScaleH for Scalar {
    fn scale_h(&self) -> Scalar {
        self * &Scalar::h()
    }
}

#[derive(Clone, Debug)]
pub struct CubicSolution {
    pub aux: Index,
    pub form: Form,
    /// `ξ = P_{0a}²f = xδ − yγ − hyδ`.
    pub xi: PBWPoly,
    pub gamma: PBWPoly,
    pub delta: PBWPoly,
    pub f1: PBWPoly,
    pub delta1: PBWPoly,
    pub j1: PBWPoly,
    pub adj: Arc<Adjunction<PBWPoly>>,
    pub points: [Point<ExtPoly>; 3],
}

/// Adjoins the Cardano pair for `Δ₁ = P_{0a}²Δ`, `j₁ = P_{0a}³j` and returns the three roots.
pub fn solve_cubic(f: &PBWPoly, aux: Index) -> Result<CubicSolution> {
    let form = form_of_degree(f, 3, aux)?;
    let xi = p0(f, aux, 2)?;
    let gd = linear_point(&xi)?;
    let f1 = p0(f, aux, 3)?;
    let big_delta = named_invariant("hessian")?.instantiate(&form)?.scale(&frac(SYZYGY_DELTA_FACTOR.0, SYZYGY_DELTA_FACTOR.1));
    let delta1 = p0(&big_delta, aux, 2)?;
    let j1 = p0(&named_invariant("j")?.instantiate(&form)?, aux, 3)?;
    let adj = Arc::new(Adjunction::cardano(delta1.clone(), j1.clone())?);
    let mut sol = CubicSolution {
        aux,
        form,
        xi,
        gamma: gd.x,
        delta: gd.y,
        f1,
        delta1,
        j1,
        adj,
        points: [Point::new(Ext::zero(), Ext::zero()), Point::new(Ext::zero(), Ext::zero()), Point::new(Ext::zero(), Ext::zero())],
    };
    let (xa, ya) = (lift(&PBWPoly::x(aux)), lift(&PBWPoly::y(aux)));
    for i in 0..3 {
        let t = sol.t(i as u32 + 1);
        sol.points[i] = Point::new(lift(&sol.gamma).minus(&t.times(&xa)), lift(&sol.delta).minus(&t.times(&ya)));
    }
    Ok(sol)
}

impl CubicSolution {
    /// `t_i = ε^i u₁ + ε^{2i} u₂`.
    pub fn t(&self, i: u32) -> ExtPoly {
        let e = Scalar::eps();
        let (u1, u2) = (Ext::letter(&self.adj, 0), Ext::letter(&self.adj, 1));
        u1.scaled(&e.pow(i % 3)).plus(&u2.scaled(&e.pow((2 * i) % 3)))
    }

    pub fn eta(&self) -> PBWPoly {
        bracket(0, self.aux)
    }

    /// `γ + hδ` and `δ` from the closed formulas in `A, B, C, D`.
    ///
    /// The first closed formula yields `γ + hδ`, the negated `y`-coefficient
    /// of `ξ`; see [`CubicSolution::gamma_formula`] for `γ` itself.
    pub fn printed_gamma_delta(&self) -> (PBWPoly, PBWPoly) {
        let c = |i: usize| self.form.coeffs[i].clone();
        let (a, b, cc, d) = (c(0), c(1), c(2), c(3));
        let (x1, y1) = (PBWPoly::x(self.aux), PBWPoly::y(self.aux));
        let h = PBWPoly::h();
        let h2 = &h * &h;
        let h3 = &h2 * &h;
        let x11 = &x1 * &x1;
        let x1y1 = &x1 * &y1;
        let y11 = &y1 * &y1;
        let g0 = &b + &(&h * &a);
        let g1 = &(&(&cc.scale_int(2) + &(&h * &b).scale_int(3)) + &(&h2 * &a));
        let g2 = &(&(&(&d + &(&h * &cc).scale_int(2)) + &(&h2 * &b)) - &(&h3 * &a));
        let gamma = -&(&(&(&x11 * &g0) + &(&x1y1 * g1)) + &(&y11 * g2));
        let d0 = a.clone();
        let d1 = &b.scale_int(2) - &(&h * &a);
        let d2 = &(&cc - &(&h * &b)) + &(&h2 * &a);
        let delta = &(&(&x11 * &d0) + &(&x1y1 * &d1)) + &(&y11 * &d2);
        (gamma, delta)
    }

    /// `γ = −x₁²(B+2hA) − x₁y₁(2C+5hB) − y₁²(D+3hC)`.
    pub fn gamma_formula(&self) -> PBWPoly {
        let c = |i: usize| self.form.coeffs[i].clone();
        let (x1, y1) = (PBWPoly::x(self.aux), PBWPoly::y(self.aux));
        let h = PBWPoly::h();
        let t0 = &c(1) + &(&h * &c(0)).scale_int(2);
        let t1 = &c(2).scale_int(2) + &(&h * &c(1)).scale_int(5);
        let t2 = &c(3) + &(&h * &c(2)).scale_int(3);
        -&(&(&(&(&x1 * &x1) * &t0) + &(&(&x1 * &y1) * &t1)) + &(&(&y1 * &y1) * &t2))
    }

    pub fn checks(&self, f: &PBWPoly) -> Vec<Check> {
        let eta = self.eta();
        let (xi, f1) = (&self.xi, &self.f1);
        let (x, y) = (PBWPoly::x(0), PBWPoly::y(0));
        let (x1, y1) = (PBWPoly::x(self.aux), PBWPoly::y(self.aux));
        let (g, d) = (&self.gamma, &self.delta);
        let cubic = {
            let xi3 = &(xi * xi) * xi;
            let mid = &(&(&self.delta1 * &eta) * &eta) * xi;
            let e3 = &(&eta * &eta) * &eta;
            &(&xi3 + &mid.scale_int(3)) - &(&self.j1 * &e3)
        };
        let lhs = &(f * f1) * f1;
        let mut out = vec![poly_check("typical representation n=3", Ok(&lhs - &cubic))];
        out.push(residual_check("Cardano product", {
            let prod = (1..=3).fold(Ext::one(), |acc: ExtPoly, i| acc.times(&lift(xi).minus(&self.t(i).times(&lift(&eta)))));
            Ok(prod.minus(&lift(&cubic)))
        }));
        out.push(residual_check("product of linear forms", {
            let prod = ExtPoly::product(self.points.iter().map(|p| p.linear_form()).collect::<Vec<_>>().iter());
            Ok(prod.minus(&lift(&lhs)))
        }));
        let (pg, pd) = self.printed_gamma_delta();
        out.push(poly_check("closed formula for gamma + h delta", Ok(&(&pg - g) - &(&PBWPoly::h() * d))));
        out.push(poly_check("closed formula for gamma", Ok(&self.gamma_formula() - g)));
        out.push(poly_check("closed formula for delta", Ok(&pd - d)));
        let xfer = &(&x1 * d) - &(g * &y1);
        out.push(poly_check("xi y1 - eta delta = y(x1 delta - gamma y1)", Ok(&(&(xi * &y1) - &(&eta * d)) - &(&y * &xfer))));
        out.push(poly_check("xi x1 - eta gamma = x(delta x1 - y1 gamma)", Ok(&(&(xi * &x1) - &(&eta * g)) - &(&x * &(&(d * &x1) - &(&y1 * g))))));
        out.push(poly_check("f1 = delta x1 - y1 gamma", Ok(&(&(d * &x1) - &(&y1 * g)) - f1)));
        out.push(poly_check("f1 = x1 delta - gamma y1", Ok(&xfer - f1)));
        out.push(poly_check("f1 = x1 delta - y1 gamma - h y1 delta", Ok(&(&(&(&x1 * d) - &(&y1 * g)) - &(&(&y1 * d) * &PBWPoly::h())) - f1)));
        out.push(poly_check("x f1 = xi x1 - eta gamma", Ok(&(&x * f1) - &(&(xi * &x1) - &(&eta * g)))));
        out.push(poly_check("y f1 = xi y1 - eta delta", Ok(&(&y * f1) - &(&(xi * &y1) - &(&eta * d)))));
        for (i, p) in self.points.iter().enumerate() {
            out.push(Check::run(format!("root {} annihilates f", i + 1), || Ok((verify_zero(f, p), String::new()))));
        }
        out.push(poly_check("4 Delta1^3 + j1^2 + d3 f1^2 = 0", (|| {
            let d3 = named_invariant("d3")?.instantiate(&self.form)?;
            let dd = &self.delta1 * &self.delta1;
            Ok(&(&(&dd * &self.delta1).scale_int(4) + &(&self.j1 * &self.j1)) + &(&(&d3 * f1) * f1))
        })()));
        out.push(Check::run("f1 invariant and central", || {
            Ok((crate::action::is_invariant(f1) && crate::localization::is_central(f1), String::new()))
        }));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::bracket_product_form;
    use crate::localization::z;
    use crate::report::all_hold;

    fn assert_all(checks: &[Check]) {
        for c in checks {
            assert!(c.holds, "{c}");
        }
    }

    #[test]
    fn quadratic_on_a_product_of_brackets() {
        let f = bracket_product_form(&[2, 3]);
        let sol = solve_quadratic(&f, 1).unwrap();
        assert_all(&sol.checks(&f));
        assert_eq!(sol.d2, bracket(2, 3).pow(2).scale(&frac(-1, 2)));
    }

    #[test]
    fn quadratic_roots_are_the_coordinate_points() {
        let f = bracket_product_form(&[2, 3]);
        let sol = solve_quadratic(&f, 1).unwrap();
        let zs = sol.z().unwrap();
        let half = LocElement::from_poly(bracket(2, 3).scale(&frac(1, 2)));
        let got: Vec<LocElement> = zs.iter().map(|z| z.specialize(&[half.clone()]).unwrap()).collect();
        assert!(got.contains(&z(2)) && got.contains(&z(3)), "{got:?}");
        let other: Vec<LocElement> = zs.iter().map(|z| z.specialize(&[half.negate()]).unwrap()).collect();
        assert!(other.contains(&z(2)) && other.contains(&z(3)));
    }

    #[test]
    fn quadratic_general_coefficients() {
        let f = &(&bracket(0, 2) * &bracket(0, 3)) + &(&bracket(0, 4) * &bracket(0, 5));
        let sol = solve_quadratic(&f, 1).unwrap();
        let checks: Vec<Check> = sol.checks(&f).into_iter().filter(|c| !c.name.starts_with("Z =")).collect();
        assert!(all_hold(&checks), "{checks:?}");
    }

    #[test]
    fn auxiliary_index_does_not_matter() {
        let f = bracket_product_form(&[2, 3]);
        let a = solve_quadratic(&f, 1).unwrap();
        let b = solve_quadratic(&f, 5).unwrap();
        let za = a.z().unwrap();
        for (z, p) in za.iter().zip(&b.points) {
            assert!(QuadraticSolution::z_residual(z, p).is_zero());
        }
    }

    #[test]
    fn rejects_wrong_degree() {
        assert!(solve_quadratic(&bracket_product_form(&[2, 3, 4]), 1).is_err());
        assert!(solve_cubic(&bracket_product_form(&[2, 3]), 1).is_err());
        assert!(solve_quadratic(&bracket_product_form(&[1, 3]), 1).is_err());
    }

    #[test]
    fn zeros_of_a_factored_form() {
        let f = bracket_product_form(&[1, 2]);
        let lift_pt = |i| {
            let p = crate::forms::coordinate_point(i);
            Point::new(lift(&p.x), lift(&p.y))
        };
        assert!(verify_zero(&f, &lift_pt(1)));
        assert!(!verify_zero(&f, &lift_pt(3)));
    }

    #[test]
    fn cubic_solver() {
        let f = bracket_product_form(&[2, 3, 4]);
        let sol = solve_cubic(&f, 1).unwrap();
        assert_all(&sol.checks(&f));
    }

    #[test]
    fn cubic_closed_formulas_on_a_sum() {
        let f = &bracket_product_form(&[2, 3, 4]) + &bracket_product_form(&[5, 6, 7]);
        let sol = solve_cubic(&f, 1).unwrap();
        let (pg, pd) = sol.printed_gamma_delta();
        assert_eq!(pd, sol.delta);
        assert_eq!(sol.gamma_formula(), sol.gamma);
        assert_eq!(&pg - &(&PBWPoly::h() * &sol.delta), sol.gamma);
        assert_ne!(pg, sol.gamma);
    }
}
