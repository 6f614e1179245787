//! The ten acceptance criteria as named, timed groups of checks.
//!
//! Every comparison is exact: a residual passes only when it is the zero
//! element. Each criterion carries a wall-clock budget in milliseconds.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abel::{self, HyperellipticData};
use crate::action::{act, check_lie_relations, is_invariant, ActionOp};
use crate::bracket::{bracket, classical_eval, expand_brackets, grassmann_pluecker, verify_bracket_identity, BracketPoly, Verdict};
use crate::constants::{discriminant_of_hessian_residual, named_invariant, printed, printed_row, syzygy_residual, D2_PRINTED, D3_PRINTED, HESSIAN_PRINTED, J_PRINTED};
use crate::diff;
use crate::error::Result;
use crate::forms::{bracket_product_form, commutator_constants, Form, Side};
use crate::localization::{z, LocElement};
use crate::oracle::CommPoly;
use crate::pbw::rewrite::{normal_form, Order};
use crate::pbw::{Generator, Index, Kind, PBWPoly};
use crate::report::Check;
use crate::ring::Ring;
use crate::scalar::Scalar;
use crate::solvers::{solve_cubic, solve_quadratic};
use crate::symbolic::symbolic_invariant;

/// Budgets in milliseconds, criteria 1 to 10.
pub const BUDGET_MS: [u128; 10] = [1_000, 5_000, 30_000, 60_000, 300_000, 600_000, 300_000, 120_000, 600_000, 5_000];

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: usize,
    pub title: String,
    pub checks: Vec<Check>,
    pub ms: u128,
    pub budget_ms: u128,
}

impl Criterion {
    pub fn exact(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn within_budget(&self) -> bool {
        self.ms <= self.budget_ms
    }

    pub fn passed(&self) -> bool {
        self.exact() && self.within_budget()
    }

    /// One line: verdict, id, title, counts and time.
    pub fn summary(&self) -> String {
        let held = self.checks.iter().filter(|c| c.holds).count();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!("{verdict} {:>2}. {} [{held}/{} checks, {} ms of {} ms]", self.id, self.title, self.checks.len(), self.ms, self.budget_ms);
        if !self.within_budget() {
            line.push_str(" over budget");
        }
        if let Some(c) = self.checks.iter().find(|c| !c.holds) {
            line.push_str(&format!("; first failure: {} {}", c.name, c.detail));
        }
        line
    }
}

pub const TITLES: [&str; 10] = [
    "rewriting golden set",
    "action suite",
    "bracket laws and backend agreement",
    "coefficient tables",
    "symbolic method",
    "cubic syzygy",
    "quadratic and cubic solvers",
    "differential module",
    "Abel chain",
    "oracle independence",
];

fn p(s: &str) -> PBWPoly {
    PBWPoly::parse(s).expect("golden polynomial parses")
}

fn sc(s: &str) -> Scalar {
    Scalar::parse(s).expect("golden scalar parses")
}

fn eq_check(name: impl Into<String>, got: &PBWPoly, want: &PBWPoly) -> Check {
    let r = got - want;
    Check::zero(name, || Ok((r.is_zero(), r)))
}

fn truth(name: impl Into<String>, f: impl FnOnce() -> Result<bool>) -> Check {
    Check::run(name, || Ok((f()?, String::new())))
}

fn random_poly<R: Rng>(rng: &mut R, max_index: Index, max_terms: usize, max_len: usize) -> PBWPoly {
    let n = rng.gen_range(1..=max_terms);
    (0..n).fold(PBWPoly::zero(), |acc, _| {
        let len = rng.gen_range(0..=max_len);
        let word: Vec<Generator> = (0..len)
            .map(|_| {
                let i = rng.gen_range(0..=max_index);
                if rng.gen_bool(0.5) {
                    Generator::x(i)
                } else {
                    Generator::y(i)
                }
            })
            .collect();
        let c = &Scalar::from_int(rng.gen_range(-3..=3)) + &if rng.gen_bool(0.3) { Scalar::h() } else { Scalar::zero() };
        &acc + &PBWPoly::from_word(&word).scale(&c)
    })
}

pub fn criterion_1() -> Vec<Check> {
    let h = Scalar::h();
    let mut out = vec![
        eq_check("y1 x1", &(&p("y1") * &p("x1")), &p("x1*y1 - h*y1^2")),
        eq_check("x2 y1", &(&p("x2") * &p("y1")), &p("y1*x2 + h*y1*y2")),
        eq_check("y2 x1", &(&p("y2") * &p("x1")), &p("x1*y2 - h*y1*y2")),
        eq_check("y2 y1", &(&p("y2") * &p("y1")), &p("y1*y2")),
        eq_check("x2 x1", &(&p("x2") * &p("x1")), &p("x1*x2 - h*x1*y2 + h*y1*x2 + h^2*y1*y2")),
    ];
    let (s, t) = (p("x1 + x2"), p("y1 + y2"));
    out.push(eq_check("braided sum (x1+x2)(y1+y2)", &(&(&s * &t) - &(&t * &s)), &(&t * &t).scale(&h)));
    out.push(eq_check("common right multiple", &(&p("x2") * &p("x1 - h*y1")), &(&p("x1") * &p("x2 - h*y2"))));
    out.push(truth("leftmost and rightmost rewriting agree on random words", || {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        Ok((0..30).all(|_| {
            let len = rng.gen_range(1..6);
            let w: Vec<Generator> = (0..len).map(|_| if rng.gen_bool(0.5) { Generator::x(rng.gen_range(1..4)) } else { Generator::y(rng.gen_range(1..4)) }).collect();
            let input = [(w, Scalar::one())];
            normal_form(&input, Order::Leftmost) == normal_form(&input, Order::Rightmost)
        }))
    }));
    out
}

pub fn criterion_2(seed: u64) -> Vec<Check> {
    use ActionOp::*;
    let mut out = Vec::new();
    let table: [(ActionOp, &str, &str); 9] = [
        (E, "x1", "0"),
        (E, "y1", "x1"),
        (F, "x1", "y1"),
        (F, "y1", "0"),
        (H, "x1", "x1"),
        (H, "y1", "-y1"),
        (E, "1", "0"),
        (F, "1", "0"),
        (H, "1", "0"),
    ];
    for (op, a, want) in table {
        out.push(eq_check(format!("{op:?} {a} = {want}"), &act(op, &p(a)), &p(want)));
    }
    out.push(eq_check("F(x1 x2)", &act(F, &p("x1*x2")), &p("y1*x2 + x1*y2")));
    out.push(eq_check("exp(hF) x1", &act(ExpHF, &p("x1")), &p("x1 + h*y1")));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(PBWPoly, PBWPoly)> = (0..12).map(|_| (random_poly(&mut rng, 3, 2, 3), random_poly(&mut rng, 3, 2, 3))).collect();
    out.push(truth("twisted Leibniz rules for E and H, ordinary for F", || {
        Ok(pairs.iter().all(|(a, b)| {
            let ab = a * b;
            let twisted = |op| &(&act(op, a) * &act(ExpNegHF, b)) + &(&act(ExpHF, a) * &act(op, b));
            act(E, &ab) == twisted(E) && act(H, &ab) == twisted(H) && act(F, &ab) == &(&act(F, a) * b) + &(a * &act(F, b))
        }))
    }));
    out.push(truth("exp(hF) is multiplicative and inverse to exp(-hF)", || {
        Ok(pairs.iter().all(|(a, b)| act(ExpHF, &(a * b)) == &act(ExpHF, a) * &act(ExpHF, b) && act(ExpNegHF, &act(ExpHF, a)) == *a))
    }));
    let sample: Vec<PBWPoly> = (0..20).map(|_| random_poly(&mut rng, 3, 3, 4)).collect();
    out.push(Check::run("Lie relations on 20 random elements", || {
        Ok(match check_lie_relations(&sample) {
            Ok(()) => (true, String::new()),
            Err((i, rel)) => (false, format!("sample {i} breaks {rel:?}")),
        })
    }));
    out.push(truth("(ij) invariant, x1 not", || {
        let pairs_ok = [(1, 2), (0, 3), (4, 2)].iter().all(|&(i, j)| is_invariant(&bracket(i, j)));
        let e = &(&bracket(1, 2) * &bracket(3, 4)) + &(&bracket(1, 3) * &bracket(4, 2));
        Ok(pairs_ok && !is_invariant(&p("x1")) && is_invariant(&e) && e == -&(&bracket(1, 4) * &bracket(2, 3)))
    }));
    out.push(eq_check("H(x1 x2) from the twisted rule", &act(H, &p("x1*x2")), &p("2*x1*x2 - h*x1*y2 + h*y1*x2")));
    out.push(truth("H is the weight x-degree minus y-degree modulo h", || {
        let zero = Default::default();
        Ok(sample.iter().all(|a| {
            a.terms().all(|(m, c)| {
                let term = PBWPoly::term(m.clone(), c.clone());
                let w = 2 * m.x_weight() as i64 - m.degree() as i64;
                (&act(H, &term) - &term.scale_int(w)).eval_h(&zero).is_zero()
            })
        }))
    }));
    out
}

fn random_bracket_poly<R: Rng>(rng: &mut R) -> (BracketPoly, bool) {
    let idx = |rng: &mut R| rng.gen_range(0..6);
    let coeff = |rng: &mut R| &Scalar::from_int(rng.gen_range(1..=3)) + &if rng.gen_bool(0.5) { Scalar::h() } else { Scalar::zero() };
    if rng.gen_bool(0.5) {
        let gp = grassmann_pluecker(idx(rng), idx(rng), idx(rng), idx(rng));
        let factor = BracketPoly::br(idx(rng), idx(rng)).scale(&coeff(rng));
        (&gp * &factor, true)
    } else {
        let n = rng.gen_range(1..=3);
        let e = (0..n).fold(BracketPoly::zero(), |acc, _| &acc + &(&BracketPoly::br(idx(rng), idx(rng)) * &BracketPoly::br(idx(rng), idx(rng))).scale(&coeff(rng)));
        (e, false)
    }
}

pub fn criterion_3(seed: u64) -> Vec<Check> {
    let mut out = vec![
        truth("(ii) = 0", || Ok((0..6).all(|i| bracket(i, i).is_zero()))),
        truth("antisymmetry", || Ok((0..5).all(|i| (0..5).all(|j| bracket(j, i) == -&bracket(i, j))))),
        truth("alternative expressions of (12)", || {
            let a = &(&p("x1") * &p("y2")) - &(&p("x2") * &p("y1"));
            let b = &(&p("y2") * &p("x1")) - &(&p("y1") * &p("x2"));
            Ok(a == bracket(1, 2) && b == bracket(1, 2))
        }),
        eq_check("(12) shape", &bracket(1, 2), &p("x1*y2 - y1*x2 - h*y1*y2")),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.push(Check::run("Grassmann-Pluecker, 100 random quadruples", || {
        for _ in 0..100 {
            let q: Vec<Index> = (0..4).map(|_| rng.gen_range(0..7)).collect();
            let v = verify_bracket_identity(&grassmann_pluecker(q[0], q[1], q[2], q[3]));
            if v != Verdict::Holds {
                return Ok((false, format!("{q:?}: {v:?}")));
            }
        }
        Ok((true, String::new()))
    }));
    out.push(Check::run("brackets are central, 50 random triples", || {
        for _ in 0..50 {
            let (i, j, k) = (rng.gen_range(0..6), rng.gen_range(0..6), rng.gen_range(0..6));
            let b = bracket(i, j);
            for g in [PBWPoly::x(k), PBWPoly::y(k)] {
                if &g * &b != &b * &g {
                    return Ok((false, format!("({i}{j}) against {g}")));
                }
            }
        }
        Ok((true, String::new()))
    }));
    out.push(Check::run("engine and oracle agree on 200 random bracket polynomials", || {
        let (mut zero, mut nonzero) = (0, 0);
        for n in 0..200 {
            let (e, identity) = random_bracket_poly(&mut rng);
            match verify_bracket_identity(&e) {
                Verdict::Holds => zero += 1,
                Verdict::Fails(_) if !identity => nonzero += 1,
                v => return Ok((false, format!("sample {n} ({e}): {v:?}"))),
            }
        }
        Ok((zero > 0 && nonzero > 0, format!("{zero} identities, {nonzero} non-identities")))
    }));
    out.push(truth("(12)(34) - (13)(24) fails in both backends", || {
        Ok(matches!(verify_bracket_identity(&BracketPoly::parse("(12)*(34) - (13)*(24)")?), Verdict::Fails(_)))
    }));
    out
}

type Row = &'static [(usize, usize, &'static str)];

fn table_rows(f: &Form, want: &[((usize, usize), Row)], label: &str) -> Check {
    Check::run(format!("{label} commutator table"), || {
        let t = commutator_constants(f, None)?;
        if !t.is_triangular() {
            return Ok((false, "not triangular".into()));
        }
        if t.entries.len() != want.len() {
            return Ok((false, format!("{} relations, expected {}", t.entries.len(), want.len())));
        }
        for ((l, k), row) in want {
            let mut got = t.entries.get(&(*l, *k)).cloned().unwrap_or_default();
            got.sort_by_key(|e| (e.0, e.1));
            let mut exp: Vec<(usize, usize, Scalar)> = row.iter().map(|(i, j, c)| (*i, *j, sc(c))).collect();
            exp.sort_by_key(|e| (e.0, e.1));
            if got != exp {
                return Ok((false, format!("relation ({l},{k})")));
            }
        }
        Ok((true, String::new()))
    })
}

pub fn criterion_4() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::run("right and left coefficients of (01)^2", || {
        let f = bracket_product_form(&[1, 1]);
        let r = Form::extract(&f, Side::Right)?;
        let l = Form::extract(&f, Side::Left)?;
        let ok = r.coeffs == [p("y1^2"), p("-x1*y1 - h/2*y1^2"), p("x1^2 + 3*h*x1*y1")]
            && l.coeffs == [p("y1^2"), p("-x1*y1 + 3*h/2*y1^2"), p("x1^2 - h*x1*y1")]
            && r.reconstruct() == f
            && l.reconstruct() == f;
        Ok((ok, String::new()))
    }));
    let quad = Form::extract(&bracket_product_form(&[1, 2]), Side::Right).expect("quadratic form");
    out.push(table_rows(
        &quad,
        &[((1, 0), &[(0, 0, "-2*h")]), ((2, 0), &[(0, 1, "-4*h"), (0, 0, "6*h^2")]), ((2, 1), &[(0, 2, "-2*h"), (0, 1, "2*h^2"), (0, 0, "-3*h^3")])],
        "quadratic",
    ));
    out.push(Check::run("quadratic mixed relations", || {
        use Kind::{X, Y};
        let t = commutator_constants(&quad, None)?;
        let want: [((usize, Kind), Vec<(Kind, usize, Scalar)>); 6] = [
            ((0, X), vec![(X, 0, sc("1")), (Y, 0, sc("-2*h"))]),
            ((0, Y), vec![(Y, 0, sc("1"))]),
            ((1, X), vec![(X, 0, sc("h")), (X, 1, sc("1")), (Y, 0, sc("h^2"))]),
            ((1, Y), vec![(Y, 0, sc("-h")), (Y, 1, sc("1"))]),
            ((2, X), vec![(X, 1, sc("2*h")), (X, 2, sc("1")), (Y, 1, sc("4*h^2")), (Y, 2, sc("2*h"))]),
            ((2, Y), vec![(Y, 0, sc("2*h^2")), (Y, 1, sc("-2*h")), (Y, 2, sc("1"))]),
        ];
        for (key, row) in want {
            if t.mixed.get(&key) != Some(&row) {
                return Ok((false, format!("A_{} {:?}", key.0, key.1)));
            }
        }
        Ok((true, String::new()))
    }));
    let cubic = Form::extract(&bracket_product_form(&[1, 2, 3]), Side::Right).expect("cubic form");
    out.push(table_rows(
        &cubic,
        &[
            ((3, 0), &[(0, 2, "-9*h"), (0, 1, "36*h^2"), (0, 0, "-60*h^3")]),
            ((3, 1), &[(0, 3, "-3*h"), (1, 2, "-3*h"), (0, 2, "9*h^2"), (1, 1, "6*h^2"), (0, 1, "-24*h^3"), (0, 0, "36*h^4")]),
            ((3, 2), &[(1, 3, "-6*h"), (2, 2, "3*h"), (0, 3, "12*h^2"), (0, 2, "-6*h^3"), (1, 1, "-18*h^3"), (0, 1, "36*h^4"), (0, 0, "-48*h^5")]),
            ((2, 0), &[(0, 1, "-6*h"), (0, 0, "12*h^2")]),
            ((2, 1), &[(0, 2, "-h"), (1, 1, "-2*h"), (0, 1, "2*h^2"), (0, 0, "-4*h^3")]),
            ((1, 0), &[(0, 0, "-3*h")]),
        ],
        "cubic",
    ));
    out.push(truth("tables vanish at h=0", || {
        let t = commutator_constants(&cubic, None)?;
        Ok(t.entries.values().flatten().all(|(_, _, c)| c.eval_h_scalar(&Default::default()).is_zero()))
    }));
    out
}

pub fn criterion_5() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(truth("d2 from (12)^2 matches the four printed rewritings", || {
        let d2 = named_invariant("d2")?;
        for t in D2_PRINTED {
            if !d2.equivalent(&printed(2, t)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    out.push(truth("(12)^3 and (12)(13)(23) give 0", || {
        let a = symbolic_invariant(&BracketPoly::parse("(12)^3")?, 3)?.canonical()?;
        let b = symbolic_invariant(&BracketPoly::parse("(12)*(13)*(23)")?, 2)?.canonical()?;
        Ok(a.is_zero() && b.is_zero())
    }));
    out.push(Check::run("d2 on (01)(02) is -1/2 (12)^2, also at h=0 in the oracle", || {
        let v = named_invariant("d2")?.instantiate(&Form::extract(&bracket_product_form(&[1, 2]), Side::Right)?)?;
        let want = BracketPoly::br(1, 2).pow(2).scale(&Scalar::from_frac(-1, 2));
        let engine = v == expand_brackets(&want);
        let oracle = CommPoly::from_pbw_h0(&v) == classical_eval(&want);
        Ok((engine && oracle, format!("engine {engine}, oracle {oracle}")))
    }));
    out.push(truth("d2 on (01)^2 is 0", || Ok(named_invariant("d2")?.instantiate(&Form::extract(&bracket_product_form(&[1, 1]), Side::Right)?)?.is_zero())));
    out.push(truth("hessian matches the printed K, L, M", || named_invariant("hessian")?.equivalent(&printed(3, HESSIAN_PRINTED)?)));
    out.push(truth("j matches the printed x^3 coefficient", || named_invariant("j")?.prefix_part(3, 0).equivalent(&printed_row(3, J_PRINTED, 3, 0)?)));
    out.push(truth("j matches every printed row", || {
        let j = named_invariant("j")?;
        for (a, b) in [(2, 1), (1, 2), (0, 3)] {
            if !j.prefix_part(a, b).equivalent(&printed_row(3, J_PRINTED, a, b)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    out.push(truth("d3 matches the printed table", || named_invariant("d3")?.equivalent(&printed(3, D3_PRINTED)?)));
    out.push(Check::zero("d2(hessian) = 2 d3 on (01)(02)(03)", || {
        let r = discriminant_of_hessian_residual(&Form::extract(&bracket_product_form(&[1, 2, 3]), Side::Right)?)?;
        Ok((r.is_zero(), r))
    }));
    out
}

pub fn criterion_6() -> Vec<Check> {
    vec![Check::zero("4 Delta^3 + j^2 + d3 f^2 on (01)(02)(03)", || {
        let r = syzygy_residual(&Form::extract(&bracket_product_form(&[1, 2, 3]), Side::Right)?)?;
        Ok((r.is_zero(), r))
    })]
}

pub fn criterion_7() -> Vec<Check> {
    let mut out = Vec::new();
    let f2 = bracket_product_form(&[1, 2]);
    match solve_quadratic(&f2, 3) {
        Ok(sol) => {
            out.extend(sol.checks(&f2).into_iter().map(|c| Check { name: format!("quadratic: {}", c.name), ..c }));
            out.push(truth("quadratic roots are {z1, z2} for both signs of s", || {
                let zs = sol.z()?;
                let half = LocElement::from_poly(bracket(1, 2).scale(&Scalar::from_frac(1, 2)));
                for s in [half.clone(), half.negate()] {
                    let got: Vec<LocElement> = zs.iter().map(|z| z.specialize(&[s.clone()])).collect::<Result<_>>()?;
                    if !(got.contains(&z(1)) && got.contains(&z(2))) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }));
        }
        Err(e) => out.push(Check::new("quadratic solver", false, e.to_string())),
    }
    let f3 = bracket_product_form(&[1, 2, 3]);
    match solve_cubic(&f3, 4) {
        Ok(sol) => out.extend(sol.checks(&f3).into_iter().map(|c| Check { name: format!("cubic: {}", c.name), ..c })),
        Err(e) => out.push(Check::new("cubic solver", false, e.to_string())),
    }
    out
}

pub fn criterion_8(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(truth("module relations between every i and dj, i, j < 4", || {
        Ok((0..4).all(|i| (0..4).all(|j| diff::module_relation_residuals(i, j).iter().all(|r| r.is_zero()))))
    }));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.push(truth("d on words agrees with d on normal forms", || {
        let word = [Generator::x(2), Generator::y(1)];
        let direct = diff::differential_of_word(&word, &[1, 2]) == diff::total_differential(&p("y1*x2 + h*y1*y2"), &[1, 2]);
        let random = (0..40).all(|_| {
            let len = rng.gen_range(1..7);
            let w: Vec<Generator> = (0..len).map(|_| if rng.gen_bool(0.5) { Generator::x(rng.gen_range(0..4)) } else { Generator::y(rng.gen_range(0..4)) }).collect();
            let k: Vec<Index> = (0..4).filter(|_| rng.gen_bool(0.6)).collect();
            diff::differential_of_word(&w, &k) == diff::total_differential(&PBWPoly::from_word(&w), &k)
        });
        Ok(direct && random)
    }));
    let samples: Vec<(PBWPoly, Vec<Index>)> = (0..50)
        .map(|_| {
            let a = random_poly(&mut rng, 3, 2, 3);
            let k: Vec<Index> = (0..4).filter(|_| rng.gen_bool(0.5)).collect();
            (a, k)
        })
        .collect();
    let mut equiv = diff::check_equivariance(&samples);
    equiv.name = "d commutes with E, F, H on 50 random samples".into();
    out.push(equiv);
    out.push(truth("splitting d_{K+K'} = d_K + d_K'", || {
        let a = &bracket(0, 1) * &bracket(0, 2);
        let b = random_poly(&mut rng, 3, 3, 3);
        Ok(diff::splitting_residual(&a, &[0], &[1, 2]).is_zero() && diff::splitting_residual(&b, &[0, 1], &[2, 3]).is_zero())
    }));
    for n in 1..=3 {
        let idx: Vec<Index> = (1..=n).collect();
        out.extend(diff::fz_differentials(&idx));
    }
    out.push(diff::dz_identity());
    out.push(truth("(idj) is invariant and equals d_j (ij)", || Ok(diff::diff_bracket_check(1, 2) && diff::diff_bracket_check(3, 0))));
    out.push(truth("y dx - x dy + h y dy is invariant and equals -(0d0)", || {
        let e = diff::elliptic_numerator(1);
        Ok(is_invariant(&e) && !is_invariant(&diff::elliptic_numerator(-1)) && e == -&diff::diff_bracket(0, 0))
    }));
    out
}

pub fn criterion_9(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    match HyperellipticData::standard(1, 3, 0, 1) {
        Ok(d) => {
            out.push(truth("build_r for g=1, s=3, p=0, q=1", || Ok(d.build_r().is_ok())));
            out.extend(abel::abel_suite(&d, seed));
        }
        Err(e) => out.push(Check::new("g=1, s=3, p=0, q=1", false, e.to_string())),
    }
    out.push(truth("partial fractions for k=3 reduce to Grassmann-Pluecker", || {
        let res = abel::partial_fraction_residual(&bracket(0, 4), &[1, 2, 3])?;
        let gp = &(&(&bracket(1, 4) * &bracket(2, 3)) - &(&bracket(1, 3) * &bracket(2, 4))) + &(&bracket(1, 2) * &bracket(3, 4));
        Ok(res == gp && res.is_zero() && matches!(verify_bracket_identity(&grassmann_pluecker(1, 2, 3, 4)), Verdict::Holds))
    }));
    out.push(truth("partial fractions for k=4 with g=(05)(06)", || {
        let g = BracketPoly::parse("(05)*(06)")?;
        let alphas = [1, 2, 3, 4];
        Ok(abel::partial_fraction_residual(&expand_brackets(&g), &alphas)?.is_zero() && abel::partial_fraction_classical(&g, &alphas).is_zero())
    }));
    out.extend(abel::partial_fraction_checks(&[2, 3, 4, 5], seed));
    out.push(abel::sign_relations_check());
    out.push(truth("g=2, s=5, p=0, q=1 is rejected as inconsistent", || Ok(HyperellipticData::standard(2, 5, 0, 1).is_err())));
    for (s, q) in [(4, 1), (5, 2)] {
        match HyperellipticData::standard(2, s, 0, q) {
            Ok(d) => {
                out.extend(abel::master_identity(&d).into_iter().map(|c| Check { name: format!("g=2, s={s}: {}", c.name), ..c }));
                let mut pf = abel::abel_partial_fractions(&d);
                pf.name = format!("g=2, s={s}: {}", pf.name);
                out.push(pf);
            }
            Err(e) => out.push(Check::new(format!("g=2, s={s}"), false, e.to_string())),
        }
    }
    out.push(truth("malformed data is rejected", || {
        Ok(HyperellipticData::new(1, 3, vec![1, 2, 2, 4], vec![], vec![], vec![5]).is_err() && HyperellipticData::new(1, 3, vec![1, 2, 3, 4], vec![], vec![], vec![0]).is_err())
    }));
    out
}

/// Source of the classical backend, audited for calls into the normal-form product.
const ORACLE_SOURCE: &str = include_str!("oracle.rs");

pub fn criterion_10(earlier: &[Criterion]) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(Check::run("oracle source does not call the normal-form product", || {
        let code: String = ORACLE_SOURCE.lines().filter(|l| !l.trim_start().starts_with("//")).collect::<Vec<_>>().join("\n");
        let banned = ["PBWPoly::mono_mul", "PBWPoly::product", ".multiply(", "rewrite", "tables", "normal_form", "from_word"];
        let hits: Vec<&str> = banned.iter().copied().filter(|b| code.contains(b)).collect();
        Ok((hits.is_empty(), hits.join(", ")))
    }));
    out.push(truth("engine and oracle products agree at h=0 on (12)^2", || {
        let a = &bracket(1, 2) * &bracket(1, 2);
        let cl = CommPoly::bracket(1, 2).mul(&CommPoly::bracket(1, 2));
        Ok(CommPoly::from_pbw_h0(&a) == cl && a.max_h_degree() > 0)
    }));
    for id in [3, 5, 9] {
        let name = format!("criterion {id} contains passing oracle cross-checks");
        match earlier.iter().find(|c| c.id == id) {
            Some(c) => {
                let oracle: Vec<&Check> = c.checks.iter().filter(|k| k.name.contains("oracle")).collect();
                let ok = !oracle.is_empty() && oracle.iter().all(|k| k.holds);
                out.push(Check::new(name, ok, format!("{} oracle checks", oracle.len())));
            }
            None => out.push(Check::new(name, false, "criterion not run")),
        }
    }
    out
}

fn timed(id: usize, f: impl FnOnce() -> Vec<Check>) -> Criterion {
    let t = Instant::now();
    let checks = f();
    Criterion { id, title: TITLES[id - 1].to_string(), checks, ms: t.elapsed().as_millis(), budget_ms: BUDGET_MS[id - 1] }
}

/// Runs one criterion; criterion 10 runs 3, 5 and 9 first.
pub fn run_criterion(id: usize, seed: u64) -> Option<Criterion> {
    Some(match id {
        1 => timed(1, criterion_1),
        2 => timed(2, || criterion_2(seed)),
        3 => timed(3, || criterion_3(seed)),
        4 => timed(4, criterion_4),
        5 => timed(5, criterion_5),
        6 => timed(6, criterion_6),
        7 => timed(7, criterion_7),
        8 => timed(8, || criterion_8(seed)),
        9 => timed(9, || criterion_9(seed)),
        10 => {
            let earlier: Vec<Criterion> = [3, 5, 9].iter().filter_map(|&i| run_criterion(i, seed)).collect();
            timed(10, || criterion_10(&earlier))
        }
        _ => return None,
    })
}

/// All ten criteria in order; `on_done` sees each as it finishes.
pub fn run_all(seed: u64, mut on_done: impl FnMut(&Criterion)) -> Vec<Criterion> {
    let mut out: Vec<Criterion> = Vec::new();
    for id in 1..=9 {
        let c = run_criterion(id, seed).expect("known criterion");
        on_done(&c);
        out.push(c);
    }
    let c = timed(10, || criterion_10(&out));
    on_done(&c);
    out.push(c);
    out
}
