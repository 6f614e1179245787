//! n-forms in the distinguished index 0, their coefficients, and points.
//!
//! A form of degree `n` is written with binomial weights,
//! `f = Σ_i C(n,i) x^{n−i} y^i A_i` (right coefficients) or
//! `f = Σ_i C(n,i) A_i x^{n−i} y^i` (left coefficients), where `x = x_0`,
//! `y = y_0` and the `A_i` involve only other indices.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::action::is_invariant;
use crate::error::{Error, Result};
use crate::linsolve::solve_combination;
use crate::pbw::{Block, Kind, Monomial, PBWPoly, Slot};
use crate::ring::Ring;
use crate::scalar::Scalar;

pub const DIST: Slot = Slot::base(0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Side> {
        match s {
            "right" => Ok(Side::Right),
            "left" => Ok(Side::Left),
            _ => Err(Error::Invalid(format!("unknown side '{s}'"))),
        }
    }
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn binomial_scalar(n: u32, k: u32) -> Scalar {
    Scalar::from_bigint(binomial(n, k))
}

/// `x_0^a y_0^b`.
pub fn xy_power(a: u32, b: u32) -> PBWPoly {
    PBWPoly::monomial(Monomial::from_blocks([Block { slot: DIST, x: a as u16, y: b as u16 }]))
}

/// Coefficient name used in printed tables: `A, B, C, …`.
pub fn letter(i: usize) -> String {
    if i < 26 {
        ((b'A' + i as u8) as char).to_string()
    } else {
        format!("A{i}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    pub n: u32,
    pub coeffs: Vec<PBWPoly>,
    pub side: Side,
}

impl Form {
    /// Coefficients of an invariant element homogeneous in index 0.
    pub fn extract(f: &PBWPoly, side: Side) -> Result<Form> {
        if !is_invariant(f) {
            return Err(Error::NotAForm("input is not invariant".into()));
        }
        Form::extract_unchecked(f, side)
    }

    /// Coefficient extraction without the invariance check.
    pub fn extract_unchecked(f: &PBWPoly, side: Side) -> Result<Form> {
        if f.is_zero() {
            return Err(Error::NotAForm("the zero element".into()));
        }
        let n = f.degree_in(DIST).ok_or(Error::Inhomogeneous(0))?;
        let coeffs = match side {
            Side::Right => (0..=n)
                .map(|i| {
                    let part = f.filter_block(DIST, (n - i) as u16, i as u16).strip_slot(DIST);
                    part.scale(&inv_binomial(n, i))
                })
                .collect(),
            Side::Left => left_coefficients(f, n),
        };
        Ok(Form { n, coeffs, side })
    }

    pub fn reconstruct(&self) -> PBWPoly {
        let mut out = PBWPoly::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            let i = i as u32;
            let m = xy_power(self.n - i, i);
            let t = match self.side {
                Side::Right => &m * a,
                Side::Left => a * &m,
            };
            out = &out + &t.scale(&binomial_scalar(self.n, i));
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn coeff(&self, i: usize) -> &PBWPoly {
        &self.coeffs[i]
    }
}

fn inv_binomial(n: u32, k: u32) -> Scalar {
    Scalar::one().checked_div(&binomial_scalar(n, k)).expect("nonzero binomial")
}

/// `(A · x^a y^b)` restricted to the block `x^a y^b` of index 0, with that block removed.
fn left_image(a_coeff: &PBWPoly, a: u32, b: u32) -> PBWPoly {
    (a_coeff * &xy_power(a, b)).filter_block(DIST, a as u16, b as u16).strip_slot(DIST)
}

/// Triangular solve: moving `x_0` to the left only turns it into `y_0`, so the
/// block `x^{n−i} y^i` of `A_j x^{n−j} y^j` vanishes for `j > i`, and the map
/// `A ↦ (A x^{n−i} y^i)|_{block}` is the identity plus a part lowering the `x` weight.
fn left_coefficients(f: &PBWPoly, n: u32) -> Vec<PBWPoly> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    for i in 0..=n {
        let c = binomial_scalar(n, i);
        let target = rest.filter_block(DIST, (n - i) as u16, i as u16).strip_slot(DIST).scale(&inv_binomial(n, i));
        let mut a = target.clone();
        loop {
            let r = &target - &left_image(&a, n - i, i);
            if r.is_zero() {
                break;
            }
            a = &a + &r;
        }
        rest = &rest - &(&a * &xy_power(n - i, i)).scale(&c);
        out.push(a);
    }
    debug_assert!(rest.is_zero());
    out
}

/// Homogeneous coordinates of a point; `f = xY − yX − hyY`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<R: Ring> {
    pub x: R,
    pub y: R,
}

impl<R: Ring> Point<R> {
    pub fn new(x: R, y: R) -> Self {
        Point { x, y }
    }

    /// `XY − YX − hY²`.
    pub fn self_residual(&self) -> R {
        let h = Scalar::h();
        self.x.times(&self.y).minus(&self.y.times(&self.x)).minus(&self.y.times(&self.y).scaled(&h))
    }

    /// Residuals of the four cross relations against another point.
    pub fn cross_residuals(&self, o: &Point<R>) -> [R; 4] {
        let h = Scalar::h();
        let h2 = Scalar::h_pow(2);
        let (x, y, x2, y2) = (&self.x, &self.y, &o.x, &o.y);
        let xx = x.times(x2).minus(
            &x2.times(x)
                .minus(&x2.times(y).scaled(&h))
                .plus(&y2.times(x).scaled(&h))
                .plus(&y2.times(y).scaled(&h2)),
        );
        let yy = y.times(y2).minus(&y2.times(y));
        let xy = x.times(y2).minus(&y2.times(x).plus(&y2.times(y).scaled(&h)));
        let yx = y.times(x2).minus(&x2.times(y).minus(&y2.times(y).scaled(&h)));
        [xx, yy, xy, yx]
    }

    pub fn is_point(&self) -> bool {
        self.self_residual().is_zero()
    }

    pub fn relations_hold(&self, o: &Point<R>) -> bool {
        self.cross_residuals(o).iter().all(|r| r.is_zero())
    }

    /// The linear form `x_0 Y − y_0 X − h y_0 Y`.
    pub fn linear_form(&self) -> R {
        let x = R::from_pbw(&PBWPoly::x(0));
        let y = R::from_pbw(&PBWPoly::y(0));
        x.times(&self.y).minus(&y.times(&self.x)).minus(&y.times(&self.y).scaled(&Scalar::h()))
    }
}

impl<R: Ring> fmt::Display for Point<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X = {}, Y = {}", self.x, self.y)
    }
}

/// `Y = A_0`, `X = −A_1 − hA_0` from a linear form with right coefficients.
pub fn make_point(f: &Form) -> Result<Point<PBWPoly>> {
    if f.n != 1 || f.side != Side::Right {
        return Err(Error::Invalid("a point needs a linear form with right coefficients".into()));
    }
    let y = f.coeffs[0].clone();
    let x = -&(&f.coeffs[1] + &y.scale(&Scalar::h()));
    Ok(Point { x, y })
}

/// The point of the bracket `(0i)`: `X = x_i`, `Y = y_i`.
pub fn coordinate_point(i: crate::pbw::Index) -> Point<PBWPoly> {
    Point { x: PBWPoly::x(i), y: PBWPoly::y(i) }
}

/// `A'_l A_k − A_k A'_l = Σ α_{ij} A_i A'_j`; for a single form only `l > k`
/// is listed and the products are `A_i A_j` with `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CommutatorTable {
    pub single: bool,
    pub entries: BTreeMap<(usize, usize), Vec<(usize, usize, Scalar)>>,
    /// `A_k · v = Σ c · w · A_i` for `v, w ∈ {x, y}`.
    pub mixed: BTreeMap<(usize, Kind), Vec<(Kind, usize, Scalar)>>,
}

impl CommutatorTable {
    pub fn get(&self, l: usize, k: usize, i: usize, j: usize) -> Scalar {
        self.entries
            .get(&(l, k))
            .and_then(|v| v.iter().find(|(a, b, _)| (*a, *b) == (i, j)))
            .map(|t| t.2.clone())
            .unwrap_or_default()
    }

    pub fn get_mixed(&self, k: usize, v: Kind, w: Kind, i: usize) -> Scalar {
        self.mixed
            .get(&(k, v))
            .and_then(|t| t.iter().find(|(a, b, _)| (*a, *b) == (w, i)))
            .map(|t| t.2.clone())
            .unwrap_or_default()
    }

    /// JSON-friendly view keyed by `"(l,k)"`.
    pub fn to_map(&self) -> BTreeMap<String, Vec<(usize, usize, Scalar)>> {
        self.entries.iter().map(|((l, k), v)| (format!("({l},{k})"), v.clone())).collect()
    }

    /// True when every entry of a single-form table has `i ≤ j`.
    pub fn is_triangular(&self) -> bool {
        self.entries.values().flatten().all(|(i, j, _)| i <= j)
    }
}

impl fmt::Display for CommutatorTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.single { "" } else { "'" };
        for ((l, k), v) in self.entries.iter().rev() {
            let lhs = format!("{}{prime}{}", letter(*l), letter(*k));
            let mut rhs = vec![format!("{}{}{prime}", letter(*k), letter(*l))];
            for (i, j, c) in v.iter().rev() {
                rhs.push(format!("({c})*{}{}{prime}", letter(*i), letter(*j)));
            }
            writeln!(f, "{lhs} = {}", rhs.join(" + "))?;
        }
        for ((k, v), t) in &self.mixed {
            let g = |kind: &Kind| if *kind == Kind::X { "x" } else { "y" };
            let rhs: Vec<String> = t.iter().map(|(w, i, c)| format!("({c})*{}{}", g(w), letter(*i))).collect();
            writeln!(f, "{}{} = {}", letter(*k), g(v), rhs.join(" + "))?;
        }
        Ok(())
    }
}

fn solve_into(target: &PBWPoly, basis: &[(PBWPoly, (usize, usize))]) -> Result<Vec<(usize, usize, Scalar)>> {
    let polys: Vec<PBWPoly> = basis.iter().map(|b| b.0.clone()).collect();
    let sol = solve_combination(target, &polys)
        .ok_or_else(|| Error::Unsolvable("commutator is not in the span of the ordered products".into()))?;
    Ok(basis.iter().zip(sol.coeffs).filter(|(_, c)| !c.is_zero()).map(|(b, c)| (b.1 .0, b.1 .1, c)).collect())
}

/// Structure constants of the coefficient commutators of `f` and `g` (or of `f` with itself).
pub fn commutator_constants(f: &Form, g: Option<&Form>) -> Result<CommutatorTable> {
    let (g, single) = match g {
        Some(g) => (g, false),
        None => (f, true),
    };
    if f.n != g.n {
        return Err(Error::Invalid(format!("degrees differ: {} and {}", f.n, g.n)));
    }
    let n = f.n as usize;
    let a = &f.coeffs;
    let b = &g.coeffs;
    let mut table = CommutatorTable { single, ..Default::default() };
    for l in 0..=n {
        for k in 0..=n {
            if single && l <= k {
                continue;
            }
            let target = &(&b[l] * &a[k]) - &(&a[k] * &b[l]);
            let mut basis = Vec::new();
            for i in 0..=k {
                for j in 0..=l {
                    if i + j < k + l && (!single || i <= j) {
                        basis.push((&a[i] * &b[j], (i, j)));
                    }
                }
            }
            table.entries.insert((l, k), solve_into(&target, &basis)?);
        }
    }
    if single {
        table.mixed = mixed_relations(f)?;
    }
    Ok(table)
}

fn mixed_relations(f: &Form) -> Result<BTreeMap<(usize, Kind), Vec<(Kind, usize, Scalar)>>> {
    let n = f.n as usize;
    let gens = [(Kind::X, PBWPoly::x(0)), (Kind::Y, PBWPoly::y(0))];
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for (w, g) in &gens {
        for i in 0..=n {
            basis.push(g * &f.coeffs[i]);
            labels.push((*w, i));
        }
    }
    let mut out = BTreeMap::new();
    for k in 0..=n {
        for (v, g) in &gens {
            let target = &f.coeffs[k] * g;
            let sol = solve_combination(&target, &basis)
                .ok_or_else(|| Error::Unsolvable("coefficient times generator is not in the span".into()))?;
            let row = labels.iter().zip(sol.coeffs).filter(|(_, c)| !c.is_zero()).map(|(l, c)| (l.0, l.1, c)).collect();
            out.insert((k, *v), row);
        }
    }
    Ok(out)
}

/// `∏ (0 i)` for the given indices, in order.
pub fn bracket_product_form(indices: &[crate::pbw::Index]) -> PBWPoly {
    PBWPoly::product(indices.iter().map(|i| crate::bracket::bracket(0, *i)).collect::<Vec<_>>().iter())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::bracket;

    fn p(s: &str) -> PBWPoly {
        PBWPoly::parse(s).unwrap()
    }

    fn sc(s: &str) -> Scalar {
        Scalar::parse(s).unwrap()
    }

    #[test]
    fn square_of_linear_form_both_sides() {
        let f = bracket_product_form(&[1, 1]);
        let r = Form::extract(&f, Side::Right).unwrap();
        assert_eq!(r.coeffs, vec![p("y1^2"), p("-x1*y1 - h/2*y1^2"), p("x1^2 + 3*h*x1*y1")]);
        let l = Form::extract(&f, Side::Left).unwrap();
        assert_eq!(l.coeffs, vec![p("y1^2"), p("-x1*y1 + 3*h/2*y1^2"), p("x1^2 - h*x1*y1")]);
        assert_eq!(r.reconstruct(), f);
        assert_eq!(l.reconstruct(), f);
    }

    #[test]
    fn quadratic_coefficients() {
        let f = Form::extract(&bracket_product_form(&[1, 2]), Side::Right).unwrap();
        assert_eq!(f.coeffs[0], p("y1*y2"));
        assert_eq!(f.coeffs[1], p("-1/2*(x1*y2 + y1*x2) - h*y1*y2"));
        assert_eq!(f.coeffs[2], p("x1*x2 + h*x1*y2 + 2*h*y1*x2 + 2*h^2*y1*y2"));
    }

    #[test]
    fn rejects_non_forms() {
        assert!(Form::extract(&p("x0*y1"), Side::Right).is_err());
        assert!(Form::extract_unchecked(&p("x0 + x0^2"), Side::Right).is_err());
    }

    #[test]
    fn quadratic_table() {
        let f = Form::extract(&bracket_product_form(&[1, 2]), Side::Right).unwrap();
        let t = commutator_constants(&f, None).unwrap();
        assert!(t.is_triangular());
        // CA, CB, BA
        assert_eq!(t.get(2, 0, 0, 1), sc("-4*h"));
        assert_eq!(t.get(2, 0, 0, 0), sc("6*h^2"));
        assert_eq!(t.get(2, 1, 0, 2), sc("-2*h"));
        assert_eq!(t.get(2, 1, 0, 1), sc("2*h^2"));
        assert_eq!(t.get(2, 1, 0, 0), sc("-3*h^3"));
        assert_eq!(t.get(2, 1, 1, 1), Scalar::zero());
        assert_eq!(t.get(1, 0, 0, 0), sc("-2*h"));
        use Kind::{X, Y};
        assert_eq!(t.mixed[&(0, X)], vec![(X, 0, sc("1")), (Y, 0, sc("-2*h"))]);
        assert_eq!(t.mixed[&(0, Y)], vec![(Y, 0, sc("1"))]);
        assert_eq!(t.mixed[&(1, X)], vec![(X, 0, sc("h")), (X, 1, sc("1")), (Y, 0, sc("h^2"))]);
        assert_eq!(t.mixed[&(1, Y)], vec![(Y, 0, sc("-h")), (Y, 1, sc("1"))]);
        assert_eq!(t.mixed[&(2, X)], vec![(X, 1, sc("2*h")), (X, 2, sc("1")), (Y, 1, sc("4*h^2")), (Y, 2, sc("2*h"))]);
        assert_eq!(t.mixed[&(2, Y)], vec![(Y, 0, sc("2*h^2")), (Y, 1, sc("-2*h")), (Y, 2, sc("1"))]);
    }

    #[test]
    fn cubic_table() {
        let f = Form::extract(&bracket_product_form(&[1, 2, 3]), Side::Right).unwrap();
        let t = commutator_constants(&f, None).unwrap();
        assert!(t.is_triangular());
        let want: &[((usize, usize), &[(usize, usize, &str)])] = &[
            ((3, 0), &[(0, 2, "-9*h"), (0, 1, "36*h^2"), (0, 0, "-60*h^3")]),
            ((3, 1), &[(0, 3, "-3*h"), (1, 2, "-3*h"), (0, 2, "9*h^2"), (1, 1, "6*h^2"), (0, 1, "-24*h^3"), (0, 0, "36*h^4")]),
            ((3, 2), &[(1, 3, "-6*h"), (2, 2, "3*h"), (0, 3, "12*h^2"), (0, 2, "-6*h^3"), (1, 1, "-18*h^3"), (0, 1, "36*h^4"), (0, 0, "-48*h^5")]),
            ((2, 0), &[(0, 1, "-6*h"), (0, 0, "12*h^2")]),
            ((2, 1), &[(0, 2, "-h"), (1, 1, "-2*h"), (0, 1, "2*h^2"), (0, 0, "-4*h^3")]),
            ((1, 0), &[(0, 0, "-3*h")]),
        ];
        for ((l, k), row) in want {
            let mut got = t.entries[&(*l, *k)].clone();
            got.sort_by_key(|e| (e.0, e.1));
            let mut exp: Vec<(usize, usize, Scalar)> = row.iter().map(|(i, j, c)| (*i, *j, sc(c))).collect();
            exp.sort_by_key(|e| (e.0, e.1));
            assert_eq!(got, exp, "relation ({l},{k})");
        }
    }

    #[test]
    fn points_from_linear_forms() {
        let f = Form::extract(&bracket(0, 1), Side::Right).unwrap();
        let pt = make_point(&f).unwrap();
        assert_eq!(pt, coordinate_point(1));
        let fh = &(&bracket(0, 2) * &bracket(1, 3)) + &(&bracket(0, 3) * &bracket(1, 2));
        let g = Form::extract(&fh, Side::Right).unwrap();
        assert_eq!(g.coeffs[0], p("2*x1*y2*y3 - y1*x2*y3 - y1*y2*x3 - 3*h*y1*y2*y3"));
        assert_eq!(
            g.coeffs[1],
            p("-x1*x2*y3 - x1*y2*x3 + 2*y1*x2*x3 - h*x1*y2*y3 + h*y1*x2*y3 + 3*h*y1*y2*x3 + 3*h^2*y1*y2*y3")
        );
        let q = make_point(&g).unwrap();
        assert!(q.is_point());
        assert!(q.relations_hold(&coordinate_point(4)));
        assert!(coordinate_point(4).relations_hold(&q));
        assert_eq!(q.linear_form(), fh);
        let degenerate = Point { x: p("x5 + y6"), y: PBWPoly::zero() };
        assert!(degenerate.is_point());
        assert_eq!(degenerate.linear_form(), p("-y0*x5 - y0*y6"));
    }
}
