//! Addition theorem for hyperelliptic differentials.
//!
//! A curve is given by `r = A P² − B Q²` where `A` and `B` split the `2g+2`
//! branch brackets `(0 b)`, `P`, `Q` are bracket products and `U` carries the
//! numerator of a holomorphic differential of degree `g − 1`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::action::is_invariant;
use crate::bracket::{classical_eval, expand_brackets, BracketPoly};
use crate::diff::{check_equivariance, elliptic_numerator, loc_differential, total_differential};
use crate::error::{Error, Result};
use crate::forms::{coordinate_point, Point};
use crate::localization::LocElement;
use crate::oracle::{CommPoly, Var};
use crate::pbw::{Generator, Index, Kind, PBWPoly, Slot};
use crate::polarize::{point_bracket, substitute};
use crate::report::Check;
use crate::ring::Ring;
use crate::scalar::{CycRat, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticData {
    pub g: u32,
    pub s: u32,
    pub branch: Vec<Index>,
    pub u: Vec<Index>,
    pub p_idx: Vec<Index>,
    pub q_idx: Vec<Index>,
}

fn bracket_product(indices: &[Index]) -> BracketPoly {
    indices.iter().fold(BracketPoly::one(), |acc, &i| &acc * &BracketPoly::br(0, i))
}

impl HyperellipticData {
    pub fn new(g: u32, s: u32, branch: Vec<Index>, u: Vec<Index>, p_idx: Vec<Index>, q_idx: Vec<Index>) -> Result<Self> {
        let d = HyperellipticData { g, s, branch, u, p_idx, q_idx };
        d.validate()?;
        Ok(d)
    }

    /// Consecutive indices starting after `1..=k`, which stay free for test points.
    pub fn standard(g: u32, s: u32, p: u32, q: u32) -> Result<Self> {
        let k = s + 2 * p;
        let mut next = k + 1;
        let mut take = |n: u32| {
            let v: Vec<Index> = (next..next + n).collect();
            next += n;
            v
        };
        let branch = take(2 * g + 2);
        let u = take(g.saturating_sub(1));
        let p_idx = take(p);
        let q_idx = take(q);
        HyperellipticData::new(g, s, branch, u, p_idx, q_idx)
    }

    fn validate(&self) -> Result<()> {
        let (g, s) = (self.g as i64, self.s as i64);
        if g < 1 {
            return Err(Error::Invalid("genus must be at least 1".into()));
        }
        if self.branch.len() as i64 != 2 * g + 2 || s > 2 * g + 2 {
            return Err(Error::Invalid(format!("need 2g+2 = {} branch indices and s ≤ 2g+2", 2 * g + 2)));
        }
        if self.u.len() as i64 != g - 1 {
            return Err(Error::Invalid(format!("U needs g-1 = {} indices", g - 1)));
        }
        let (p, q) = (self.p_idx.len() as i64, self.q_idx.len() as i64);
        if p - q != g + 1 - s {
            return Err(Error::Invalid(format!("p - q = {} but g + 1 - s = {}", p - q, g + 1 - s)));
        }
        let mut all: Vec<Index> = self.branch.iter().chain(&self.u).chain(&self.p_idx).chain(&self.q_idx).copied().collect();
        if all.contains(&0) {
            return Err(Error::Invalid("index 0 is reserved for the variable point".into()));
        }
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("indices must be distinct".into()));
        }
        Ok(())
    }

    /// `k = s + 2p`, the degree of `r` in index 0.
    pub fn k(&self) -> u32 {
        self.s + 2 * self.p_idx.len() as u32
    }

    pub fn a(&self) -> BracketPoly {
        bracket_product(&self.branch[..self.s as usize])
    }

    pub fn b(&self) -> BracketPoly {
        bracket_product(&self.branch[self.s as usize..])
    }

    pub fn p(&self) -> BracketPoly {
        bracket_product(&self.p_idx)
    }

    pub fn q(&self) -> BracketPoly {
        bracket_product(&self.q_idx)
    }

    pub fn u_form(&self) -> BracketPoly {
        bracket_product(&self.u)
    }

    pub fn r_brackets(&self) -> BracketPoly {
        &(&self.a() * &self.p().pow(2)) - &(&self.b() * &self.q().pow(2))
    }

    /// `r` in normal form, checked to be a form of degree `k` in index 0.
    ///
    /// Each summand is homogeneous in every index; `r` itself only in index 0.
    pub fn build_r(&self) -> Result<PBWPoly> {
        for part in [&self.a() * &self.p().pow(2), &self.b() * &self.q().pow(2)] {
            for (slot, d) in expand_brackets(&part).degree_profile() {
                if d.is_none() {
                    return Err(Error::Inhomogeneous(slot.index()));
                }
            }
        }
        let r = expand_brackets(&self.r_brackets());
        if r.degree_in(Slot::base(0)) != Some(self.k()) {
            return Err(Error::Invalid("r does not have degree k in index 0".into()));
        }
        Ok(r)
    }

    /// `P ∪ Q`, the indices moved by `δ`.
    pub fn moving(&self) -> Vec<Index> {
        self.p_idx.iter().chain(&self.q_idx).copied().collect()
    }
}

fn pbw(b: &BracketPoly) -> PBWPoly {
    expand_brackets(b)
}

fn loc(p: PBWPoly) -> LocElement {
    LocElement::from_poly(p)
}

/// `2APδP − 2BQδQ`, optionally multiplied on the left by `y`.
fn delta_r_expansion(d: &HyperellipticData, with_y: bool) -> PBWPoly {
    let (a, b, p, q) = (pbw(&d.a()), pbw(&d.b()), pbw(&d.p()), pbw(&d.q()));
    let dp = total_differential(&p, &d.p_idx);
    let dq = total_differential(&q, &d.q_idx);
    let y = if with_y { PBWPoly::y(0) } else { PBWPoly::one() };
    let pos = PBWPoly::product([&y, &a, &p, &dp]);
    let neg = PBWPoly::product([&y, &b, &q, &dq]);
    (&pos - &neg).scale_int(2)
}

/// `y^{k+1} d r_z = y^{k+1} d_0 r_z + 2yAPδP − 2yBQδQ` with `r_z = y^{-k} r`.
pub fn master_identity(d: &HyperellipticData) -> Vec<Check> {
    let k = d.k();
    let kset: Vec<Index> = std::iter::once(0).chain(d.moving()).collect();
    let main = Check::zero(format!("master identity, k={k}"), || {
        let r = d.build_r()?;
        let rz = LocElement::y_inv(Slot::base(0)).power(k).times(&loc(r));
        let yk1 = loc(PBWPoly::y(0).pow(k + 1));
        let lhs = yk1.times(&loc_differential(&rz, &kset)?);
        let rhs = yk1.times(&loc_differential(&rz, &[0])?).plus(&loc(delta_r_expansion(d, true)));
        let res = lhs.minus(&rhs);
        Ok((res.is_zero(), res))
    });
    let cleared = Check::zero(format!("y^(k+1) d(y^-k r) = -k dy r + y dr, k={k}"), || {
        let r = d.build_r()?;
        let rz = LocElement::y_inv(Slot::base(0)).power(k).times(&loc(r.clone()));
        let lhs = loc(PBWPoly::y(0).pow(k + 1)).times(&loc_differential(&rz, &kset)?);
        let dr = total_differential(&r, &kset);
        let rhs = &(&PBWPoly::y(0) * &dr) - &(&PBWPoly::dy(0) * &r).scale_int(k as i64);
        let res = lhs.minus(&loc(rhs));
        Ok((res.is_zero(), res))
    });
    let oracle = Check::run(format!("delta r at h=0 against the commutative oracle, k={k}"), || {
        let r = d.build_r()?;
        let engine = total_differential(&r, &d.moving());
        let expanded = delta_r_expansion(d, false);
        if engine != expanded {
            return Ok((false, format!("engine delta r differs from 2AP dP - 2BQ dQ by {}", &engine - &expanded)));
        }
        let cl = classical_eval(&d.r_brackets()).differential(&d.moving());
        let (a, b, p, q) = (classical_eval(&d.a()), classical_eval(&d.b()), classical_eval(&d.p()), classical_eval(&d.q()));
        let cl2 = a.mul(&p).mul(&p.differential(&d.p_idx)).sub(&b.mul(&q).mul(&q.differential(&d.q_idx))).scale(&Scalar::from_int(2));
        let h0 = CommPoly::from_pbw_h0(&engine);
        Ok(if h0 != cl {
            (false, "h=0 reading differs from the classical differential".into())
        } else if cl != cl2 {
            (false, "classical product rule fails".into())
        } else {
            (true, String::new())
        })
    });
    vec![main, cleared, oracle]
}

fn generic_point(slot: Slot) -> Point<PBWPoly> {
    Point::new(PBWPoly::gen(Generator { slot, kind: Kind::X }), PBWPoly::gen(Generator { slot, kind: Kind::Y }))
}

/// `Σ_i (−1)^{i−1} g(X_i) ∏_{j<l; j,l≠i} (X_j X_l)` at the coordinate points `alphas`.
///
/// This is the cleared form of `Σ_i g(X_i) / ∏_{j≠i} (X_i X_j) = 0` for a form
/// `g` of degree `k − 2` in index 0.
pub fn partial_fraction_residual(g: &PBWPoly, alphas: &[Index]) -> Result<PBWPoly> {
    let k = alphas.len();
    if k < 2 {
        return Err(Error::Invalid("need at least two points".into()));
    }
    match g.degree_in(Slot::base(0)) {
        Some(n) if n as usize == k - 2 => {}
        None if g.is_zero() => {}
        _ => return Err(Error::NotAForm(format!("expected degree {} in index 0", k - 2))),
    }
    for &a in alphas {
        let pt = coordinate_point(a);
        if let Some(s) = g.slots().into_iter().find(|s| *s != Slot::base(0) && !pt.relations_hold(&generic_point(*s))) {
            return Err(Error::Invalid(format!("point {a} cannot replace index 0 next to slot {s}")));
        }
    }
    let mut out = PBWPoly::zero();
    for i in 0..k {
        let gi = substitute(g, 0, &coordinate_point(alphas[i]));
        let mut term = gi;
        for j in 0..k {
            for l in j + 1..k {
                if j != i && l != i {
                    term = &term * &point_bracket(&coordinate_point(alphas[j]), alphas[l]);
                }
            }
        }
        out = if i % 2 == 0 { &out + &term } else { &out - &term };
    }
    Ok(out)
}

/// The classical value of the same sum for a bracket-product `g`.
pub fn partial_fraction_classical(g: &BracketPoly, alphas: &[Index]) -> CommPoly {
    let k = alphas.len();
    let mut out = CommPoly::zero();
    for i in 0..k {
        let mut term = CommPoly::zero();
        for (m, c) in g.terms() {
            let mut t = CommPoly::constant(c.clone());
            for &(a, b) in m {
                let (a, b) = (if a == 0 { alphas[i] } else { a }, if b == 0 { alphas[i] } else { b });
                t = t.mul(&CommPoly::bracket(a, b));
            }
            term = term.add(&t);
        }
        for j in 0..k {
            for l in j + 1..k {
                if j != i && l != i {
                    term = term.mul(&CommPoly::bracket(alphas[j], alphas[l]));
                }
            }
        }
        out = if i % 2 == 0 { out.add(&term) } else { out.sub(&term) };
    }
    out
}

/// A random product of `k − 2` brackets `(0 β)` with `β` drawn from `pool`.
pub fn random_bracket_form<R: Rng>(k: usize, pool: &[Index], rng: &mut R) -> BracketPoly {
    (0..k - 2).fold(BracketPoly::one(), |acc, _| &acc * &BracketPoly::br(0, pool[rng.gen_range(0..pool.len())]))
}

/// Partial fractions for seeded random bracket products, engine and oracle.
pub fn partial_fraction_checks(ks: &[usize], seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ks.iter()
        .map(|&k| {
            let alphas: Vec<Index> = (1..=k as Index).collect();
            let pool: Vec<Index> = (k as Index + 1..=k as Index + 3).collect();
            let g = random_bracket_form(k, &pool, &mut rng);
            Check::run(format!("partial fractions, k={k}, g={g}"), || {
                let res = partial_fraction_residual(&pbw(&g), &alphas)?;
                let cl = partial_fraction_classical(&g, &alphas);
                Ok(match (res.is_zero(), cl.is_zero()) {
                    (true, true) => (true, String::new()),
                    (false, _) => (false, crate::report::truncate(&res.to_string())),
                    (true, false) => (false, "oracle disagrees".into()),
                })
            })
        })
        .collect()
}

/// `U(QδP − PδQ)`, the numerator form of the Abel sum.
pub fn abel_numerator(d: &HyperellipticData) -> PBWPoly {
    let (u, p, q) = (pbw(&d.u_form()), pbw(&d.p()), pbw(&d.q()));
    let dp = total_differential(&p, &d.p_idx);
    let dq = total_differential(&q, &d.q_idx);
    &u * &(&(&q * &dp) - &(&p * &dq))
}

/// Partial fractions applied to `U(QδP − PδQ)`, whose differentials sit on clone slots.
pub fn abel_partial_fractions(d: &HyperellipticData) -> Check {
    let k = d.k();
    Check::zero(format!("partial fractions for U(Q dP - P dQ), k={k}"), || {
        let alphas: Vec<Index> = (1..=k).collect();
        let res = partial_fraction_residual(&abel_numerator(d), &alphas)?;
        Ok((res.is_zero(), res))
    })
}

/// The differential `U·(y dx − x dy + h y dy)` is invariant.
pub fn differential_invariance(d: &HyperellipticData) -> Check {
    Check::run(format!("invariance of U (d0,0), g={}", d.g), || {
        let w = &pbw(&d.u_form()) * &elliptic_numerator(1);
        let wrong = &pbw(&d.u_form()) * &elliptic_numerator(-1);
        Ok(match (is_invariant(&w), is_invariant(&wrong)) {
            (true, false) => (true, String::new()),
            (a, b) => (false, format!("invariant with +h: {a}, with -h: {b}")),
        })
    })
}

/// Outcome of the sign relations on `r = (01)² − (02)²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignInstance {
    pub root: String,
    pub epsilon: i64,
}

/// Roots `X = (x1 ∓ x2, y1 ∓ y2)` of `r = (01)² − (02)²`, with `A = (01)²`,
/// `B = (02)²`, `P = Q = 1` and `W = (01)(02)`. Returns the sign `ε` with
/// `A_i P_i = ε W_i Q_i` and `B_i Q_i = ε W_i P_i`.
pub fn sign_relations() -> Result<Vec<SignInstance>> {
    let (b1, b2) = (pbw(&BracketPoly::br(0, 1)), pbw(&BracketPoly::br(0, 2)));
    let r = &(&b1 * &b1) - &(&b2 * &b2);
    let a = &b1 * &b1;
    let b = &b2 * &b2;
    let w = &b1 * &b2;
    let mut out = Vec::new();
    for sign in [-1i64, 1] {
        let pt = Point::new(&PBWPoly::x(1) + &PBWPoly::x(2).scale_int(sign), &PBWPoly::y(1) + &PBWPoly::y(2).scale_int(sign));
        let name = format!("(x1 {0} x2, y1 {0} y2)", if sign < 0 { "-" } else { "+" });
        if !pt.is_point() || ![1, 2].iter().all(|&i| pt.relations_hold(&coordinate_point(i))) {
            return Err(Error::Invalid(format!("{name} is not a point")));
        }
        if !substitute(&r, 0, &pt).is_zero() {
            return Err(Error::Invalid(format!("{name} is not a root")));
        }
        let (ai, bi, wi) = (substitute(&a, 0, &pt), substitute(&b, 0, &pt), substitute(&w, 0, &pt));
        let plus = &ai + &wi;
        let minus = &ai - &wi;
        if !(&plus * &minus).is_zero() {
            return Err(Error::Invalid(format!("(AP + WQ)(AP - WQ) does not vanish at {name}")));
        }
        let eps = match (minus.is_zero(), plus.is_zero()) {
            (true, false) => 1,
            (false, true) => -1,
            _ => return Err(Error::Invalid(format!("no unique sign at {name}"))),
        };
        if !(&bi - &wi.scale_int(eps)).is_zero() {
            return Err(Error::Invalid(format!("B Q = eps W P fails at {name}")));
        }
        out.push(SignInstance { root: name, epsilon: eps });
    }
    Ok(out)
}

pub fn sign_relations_check() -> Check {
    Check::run("sign relations on (01)^2 - (02)^2", || {
        let v = sign_relations()?;
        let got: Vec<i64> = v.iter().map(|s| s.epsilon).collect();
        let detail = v.iter().map(|s| format!("{}: eps = {}", s.root, s.epsilon)).collect::<Vec<_>>().join(", ");
        Ok((got == [1, -1], detail))
    })
}

fn rat(s: Option<Scalar>) -> Result<BigRational> {
    let s = s.ok_or_else(|| Error::Invalid("unassigned variable".into()))?;
    match s.as_const() {
        Some(c) if c.is_rational() => Ok(c.re),
        _ => Err(Error::Invalid(format!("{s} is not rational"))),
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Data of one exact `h = 0` evaluation of the Abel sum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericAbel {
    pub roots: Vec<String>,
    pub epsilons: Vec<i64>,
    /// Coefficients of `dx_j`, `dy_j` for `j ∈ P ∪ Q`; all vanish when the theorem holds.
    pub coefficients: Vec<String>,
    /// The same coefficients with every sign set to `+1`.
    pub unsigned: Vec<String>,
}

/// Exact classical check for `k = 3` in the affine chart `y = 1`.
///
/// Numeric coordinates are drawn from a seeded generator. Two roots are chosen
/// and the curve is fitted through them by solving for one branch point of `A`
/// and one of `B`; the third root follows from the cubic. The sum
/// `Σ ε_i U(Z_i) dZ_i / W_i` with `dZ_i = −δr(Z_i)/r'(Z_i)` and
/// `ε_i W_i = A_i P_i / Q_i` is then evaluated coefficient by coefficient.
pub fn numeric_abel(d: &HyperellipticData, seed: u64) -> Result<NumericAbel> {
    if d.k() != 3 || d.s == 0 || d.s as usize == d.branch.len() {
        return Err(Error::Invalid("the numeric check needs k = 3 and both A and B nonempty".into()));
    }
    let r = classical_eval(&d.r_brackets());
    let (ca, cb, cp, cq, cu) = (classical_eval(&d.a()), classical_eval(&d.b()), classical_eval(&d.p()), classical_eval(&d.q()), classical_eval(&d.u_form()));
    let dr = r.derivative(Var::x(0));
    let (ua, ub) = (d.branch[0], d.branch[d.s as usize]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<Index> = d.branch.iter().chain(&d.u).chain(&d.p_idx).chain(&d.q_idx).copied().collect();
    'attempt: for _ in 0..200 {
        let mut vals: BTreeMap<Var, CycRat> = BTreeMap::new();
        vals.insert(Var::y(0), CycRat::from_int(1));
        for &i in &all {
            vals.insert(Var::x(i), CycRat::from_int(rng.gen_range(-6..=6)));
            vals.insert(Var::y(i), CycRat::from_int(rng.gen_range(1..=4)));
        }
        let z1 = q(rng.gen_range(-5..=5));
        let z2 = q(rng.gen_range(-5..=5));
        if z1 == z2 {
            continue;
        }
        let eval = |p: &CommPoly, vals: &BTreeMap<Var, CycRat>, z: &BigRational| -> Result<BigRational> {
            let mut v = vals.clone();
            v.insert(Var::x(0), CycRat::rat(z.clone()));
            rat(p.eval_at(&v))
        };
        let affine = |z: &BigRational, va: i64, vb: i64| -> Result<BigRational> {
            let mut v = vals.clone();
            v.insert(Var::x(ua), CycRat::from_int(va));
            v.insert(Var::x(ub), CycRat::from_int(vb));
            eval(&r, &v, z)
        };
        let mut rows = Vec::new();
        for z in [&z1, &z2] {
            let c0 = affine(z, 0, 0)?;
            rows.push((affine(z, 1, 0)? - &c0, affine(z, 0, 1)? - &c0, -c0));
        }
        let det = &rows[0].0 * &rows[1].1 - &rows[0].1 * &rows[1].0;
        if det.is_zero() {
            continue;
        }
        let xa = (&rows[0].2 * &rows[1].1 - &rows[0].1 * &rows[1].2) / &det;
        let xb = (&rows[0].0 * &rows[1].2 - &rows[0].2 * &rows[1].0) / &det;
        vals.insert(Var::x(ua), CycRat::rat(xa));
        vals.insert(Var::x(ub), CycRat::rat(xb));
        let (t0, t1) = (q(101), q(-103));
        let quot = |t: &BigRational| -> Result<BigRational> { Ok(eval(&r, &vals, t)? / ((t - &z1) * (t - &z2))) };
        let (q0, q1) = (quot(&t0)?, quot(&t1)?);
        let lead = (&q0 - &q1) / (&t0 - &t1);
        if lead.is_zero() {
            continue;
        }
        let z3 = &t0 - &q0 / &lead;
        let roots = [z1.clone(), z2.clone(), z3];
        if roots[2] == z1 || roots[2] == z2 || !eval(&r, &vals, &roots[2])?.is_zero() || !eval(&r, &vals, &q(7))?.eq(&(&lead * (q(7) - &z1) * (q(7) - &z2) * (q(7) - &roots[2]))) {
            continue;
        }
        let mut eps = Vec::new();
        let mut weights = Vec::new();
        for z in &roots {
            let (a, b, p, qq) = (eval(&ca, &vals, z)?, eval(&cb, &vals, z)?, eval(&cp, &vals, z)?, eval(&cq, &vals, z)?);
            let deriv = eval(&dr, &vals, z)?;
            if qq.is_zero() || a.is_zero() || b.is_zero() || deriv.is_zero() {
                continue 'attempt;
            }
            let signed_w = &a * &p / &qq;
            let w = signed_w.abs();
            if &w * &w != &a * &b {
                return Err(Error::Invalid("W_i squared differs from A_i B_i".into()));
            }
            let e = if signed_w.is_positive() { 1 } else { -1 };
            eps.push(e);
            weights.push((w, eval(&cu, &vals, z)?, deriv));
        }
        let mut coefficients = Vec::new();
        let mut unsigned = Vec::new();
        for &j in &d.moving() {
            for v in [Var::x(j), Var::y(j)] {
                let dv = r.derivative(v);
                let mut signed_sum = BigRational::zero();
                let mut plain = BigRational::zero();
                for (i, z) in roots.iter().enumerate() {
                    let (w, u, deriv) = &weights[i];
                    let dz = -eval(&dv, &vals, z)? / deriv;
                    let term = u * &dz / w;
                    signed_sum += if eps[i] > 0 { term.clone() } else { -term.clone() };
                    plain += term;
                }
                coefficients.push(signed_sum.to_string());
                unsigned.push(plain.to_string());
            }
        }
        return Ok(NumericAbel { roots: roots.iter().map(|z| z.to_string()).collect(), epsilons: eps, coefficients, unsigned });
    }
    Err(Error::Unsolvable("no nondegenerate numeric instance found".into()))
}

pub fn numeric_abel_check(d: &HyperellipticData, seed: u64) -> Check {
    Check::run(format!("exact h=0 Abel sum, k={}", d.k()), || {
        let n = numeric_abel(d, seed)?;
        let holds = n.coefficients.iter().all(|c| c == "0");
        Ok((holds, format!("roots {:?}, eps {:?}, coefficients {:?}, unsigned {:?}", n.roots, n.epsilons, n.coefficients, n.unsigned)))
    })
}

/// Every check available for one curve.
pub fn abel_suite(d: &HyperellipticData, seed: u64) -> Vec<Check> {
    let mut out = master_identity(d);
    let kset: Vec<Index> = d.moving();
    out.push(check_equivariance(&[(pbw(&d.r_brackets()), kset)]));
    out.push(abel_partial_fractions(d));
    out.push(differential_invariance(d));
    if d.k() == 3 && d.s > 0 && (d.s as usize) < d.branch.len() {
        out.push(numeric_abel_check(d, seed));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::grassmann_pluecker;

    #[test]
    fn validation() {
        assert!(HyperellipticData::standard(1, 3, 0, 1).is_ok());
        assert!(HyperellipticData::standard(1, 1, 1, 0).is_ok());
        assert!(HyperellipticData::standard(2, 4, 0, 1).is_ok());
        assert!(HyperellipticData::standard(2, 5, 0, 2).is_ok());
        assert!(HyperellipticData::standard(2, 5, 0, 1).is_err());
        assert!(HyperellipticData::new(1, 3, vec![1, 2, 3, 3], vec![], vec![], vec![5]).is_err());
        assert!(HyperellipticData::new(1, 3, vec![0, 2, 3, 4], vec![], vec![], vec![5]).is_err());
    }

    #[test]
    fn r_degree() {
        let d = HyperellipticData::standard(1, 3, 0, 1).unwrap();
        assert_eq!(d.k(), 3);
        let r = d.build_r().unwrap();
        assert_eq!(r.degree_in(Slot::base(0)), Some(3));
        assert!(is_invariant(&r));
    }

    #[test]
    fn partial_fractions_k3_is_pluecker() {
        let g = BracketPoly::br(0, 4);
        let res = partial_fraction_residual(&pbw(&g), &[1, 2, 3]).unwrap();
        assert!(res.is_zero());
        let sum = &(&(&pbw(&BracketPoly::br(1, 4)) * &pbw(&BracketPoly::br(2, 3))) - &(&pbw(&BracketPoly::br(2, 4)) * &pbw(&BracketPoly::br(1, 3))))
            + &(&pbw(&BracketPoly::br(3, 4)) * &pbw(&BracketPoly::br(1, 2)));
        assert_eq!(res, sum);
        assert!(pbw(&grassmann_pluecker(1, 2, 3, 4)).is_zero());
    }

    #[test]
    fn partial_fractions_detect_wrong_degree() {
        let g = pbw(&BracketPoly::br(0, 4).pow(2));
        assert!(partial_fraction_residual(&g, &[1, 2, 3]).is_err());
        let res = partial_fraction_residual(&pbw(&BracketPoly::br(0, 4)), &[1, 2, 3, 5]);
        assert!(res.is_err());
    }

    #[test]
    fn partial_fractions_random() {
        for c in partial_fraction_checks(&[2, 3, 4], 11) {
            assert!(c.holds, "{c}");
        }
    }

    #[test]
    fn master_identity_genus_one() {
        for (s, p, q) in [(3, 0, 1), (1, 1, 0)] {
            let d = HyperellipticData::standard(1, s, p, q).unwrap();
            for c in master_identity(&d) {
                assert!(c.holds, "{c}");
            }
        }
    }

    #[test]
    fn abel_numerator_partial_fractions() {
        let d = HyperellipticData::standard(1, 3, 0, 1).unwrap();
        assert!(abel_partial_fractions(&d).holds);
    }

    #[test]
    fn sign_instance() {
        let v = sign_relations().unwrap();
        assert_eq!(v.iter().map(|s| s.epsilon).collect::<Vec<_>>(), vec![1, -1]);
    }

    #[test]
    fn numeric_sum_vanishes_only_with_signs() {
        for (s, p, q) in [(3, 0, 1), (1, 1, 0)] {
            let d = HyperellipticData::standard(1, s, p, q).unwrap();
            let n = numeric_abel(&d, 5).unwrap();
            assert!(n.coefficients.iter().all(|c| c == "0"), "{n:?}");
            assert!(n.unsigned.iter().any(|c| c != "0"), "{n:?}");
        }
    }

    #[test]
    fn hyperelliptic_differential_invariant() {
        let d = HyperellipticData::standard(2, 4, 0, 1).unwrap();
        assert!(differential_invariance(&d).holds);
    }
}
