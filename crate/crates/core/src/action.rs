//! The operators `E, F, H` and the exponentials `e^{±hF}`.
//!
//! On generators `H x = x, H y = −y, E x = 0, E y = x, F x = y, F y = 0`.
//! `F` is an ordinary derivation; `E` and `H` follow the twisted rule
//! `E(ab) = E(a) e^{−hF}(b) + e^{hF}(a) E(b)`. Every operator preserves slots,
//! so on a PBW monomial the value is assembled from per-block values by
//! concatenation; block values are cached.

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::pbw::{Block, Monomial, PBWPoly, Slot};
use crate::scalar::{CycRat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ActionOp {
    E,
    F,
    H,
    ExpHF,
    ExpNegHF,
}

impl std::str::FromStr for ActionOp {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        Ok(match s {
            "E" => ActionOp::E,
            "F" => ActionOp::F,
            "H" => ActionOp::H,
            "expHF" | "ExpHF" => ActionOp::ExpHF,
            "expNegHF" | "ExpNegHF" => ActionOp::ExpNegHF,
            _ => return Err(crate::Error::Invalid(format!("unknown operator '{s}'"))),
        })
    }
}

thread_local! {
    static BLOCK_CACHE: RefCell<HashMap<(ActionOp, u16, u16), PBWPoly>> = RefCell::new(HashMap::new());
}

const PROTO: u32 = 0;

fn proto_block(x: u16, y: u16) -> PBWPoly {
    PBWPoly::monomial(Monomial::from_blocks([Block { slot: Slot::base(PROTO), x, y }]))
}

/// Moves a single-slot polynomial from the prototype slot to `slot`.
fn to_slot(p: &PBWPoly, slot: Slot) -> PBWPoly {
    PBWPoly::from_terms(p.terms().map(|(m, c)| {
        let blocks: Vec<Block> = m.blocks().iter().map(|b| Block { slot, ..*b }).collect();
        (Monomial::from_blocks(blocks), c.clone())
    }))
}

fn factorial(n: u32) -> CycRat {
    CycRat::from_int((1..=n as i64).product::<i64>().max(1))
}

/// `Σ_n (±h)^n F^n(a) / n!`; the series stops because `F` lowers the `x` degree.
fn exp_series(a: &PBWPoly, sign: i64) -> PBWPoly {
    let mut out = a.clone();
    let mut cur = a.clone();
    let mut n = 0;
    loop {
        n += 1;
        cur = act_f(&cur);
        if cur.is_zero() {
            return out;
        }
        let c = Scalar::monomial(CycRat::from_int(sign.pow(n)).mul_ref(&factorial(n).inv().unwrap()), n);
        out = &out + &cur.scale(&c);
    }
}

fn block_value(op: ActionOp, x: u16, y: u16) -> PBWPoly {
    if let Some(v) = BLOCK_CACHE.with(|c| c.borrow().get(&(op, x, y)).cloned()) {
        return v;
    }
    let v = match op {
        ActionOp::ExpHF => exp_series(&proto_block(x, y), 1),
        ActionOp::ExpNegHF => exp_series(&proto_block(x, y), -1),
        _ if x + y == 0 => PBWPoly::zero(),
        _ => {
            // split off the first letter: w = u·v
            let (u, v) = if x > 0 { ((1, 0), (x - 1, y)) } else { ((0, 1), (0, y - 1)) };
            let pu = proto_block(u.0, u.1);
            let pv = proto_block(v.0, v.1);
            let (op_u, op_v) = (letter_value(op, u), block_value(op, v.0, v.1));
            match op {
                ActionOp::F => &(&op_u * &pv) + &(&pu * &op_v),
                _ => {
                    let left = &op_u * &block_value(ActionOp::ExpNegHF, v.0, v.1);
                    let right = &block_value(ActionOp::ExpHF, u.0, u.1) * &op_v;
                    &left + &right
                }
            }
        }
    };
    BLOCK_CACHE.with(|c| c.borrow_mut().insert((op, x, y), v.clone()));
    v
}

fn letter_value(op: ActionOp, letter: (u16, u16)) -> PBWPoly {
    let is_x = letter == (1, 0);
    match (op, is_x) {
        (ActionOp::E, true) => PBWPoly::zero(),
        (ActionOp::E, false) => proto_block(1, 0),
        (ActionOp::F, true) => proto_block(0, 1),
        (ActionOp::F, false) => PBWPoly::zero(),
        (ActionOp::H, true) => proto_block(1, 0),
        (ActionOp::H, false) => -proto_block(0, 1),
        _ => unreachable!(),
    }
}

/// Product of polynomials living on strictly ascending slots: plain concatenation.
fn concat(parts: &[PBWPoly]) -> PBWPoly {
    let mut acc: Vec<(Monomial, Scalar)> = vec![(Monomial::one(), Scalar::one())];
    for p in parts {
        let mut next = Vec::with_capacity(acc.len() * p.len());
        for (m, c) in &acc {
            for (m2, c2) in p.terms() {
                next.push((m.concat_ordered(m2).expect("ascending slots"), c * c2));
            }
        }
        acc = next;
    }
    PBWPoly::from_terms(acc)
}

fn act_mono(op: ActionOp, m: &Monomial) -> PBWPoly {
    let blocks = m.blocks();
    let val = |o: ActionOp, b: &Block| to_slot(&block_value(o, b.x, b.y), b.slot);
    let plain = |b: &Block| PBWPoly::monomial(Monomial::from_blocks([*b]));
    match op {
        ActionOp::ExpHF | ActionOp::ExpNegHF => concat(&blocks.iter().map(|b| val(op, b)).collect::<Vec<_>>()),
        _ => {
            let mut out = PBWPoly::zero();
            for i in 0..blocks.len() {
                let parts: Vec<PBWPoly> = blocks
                    .iter()
                    .enumerate()
                    .map(|(k, b)| match (op, k.cmp(&i)) {
                        (_, std::cmp::Ordering::Equal) => val(op, b),
                        (ActionOp::F, _) => plain(b),
                        (_, std::cmp::Ordering::Less) => val(ActionOp::ExpHF, b),
                        (_, std::cmp::Ordering::Greater) => val(ActionOp::ExpNegHF, b),
                    })
                    .collect();
                out = &out + &concat(&parts);
            }
            out
        }
    }
}

fn act_f(a: &PBWPoly) -> PBWPoly {
    let mut out = PBWPoly::zero();
    for (m, c) in a.terms() {
        out = &out + &act_mono(ActionOp::F, m).scale(c);
    }
    out
}

/// Applies an operator; the exponentials are evaluated as terminating series in `F`.
pub fn act(op: ActionOp, a: &PBWPoly) -> PBWPoly {
    match op {
        ActionOp::ExpHF => exp_series(a, 1),
        ActionOp::ExpNegHF => exp_series(a, -1),
        _ => {
            let mut out = PBWPoly::zero();
            for (m, c) in a.terms() {
                out = &out + &act_mono(op, m).scale(c);
            }
            out
        }
    }
}

pub fn is_invariant(a: &PBWPoly) -> bool {
    [ActionOp::E, ActionOp::F, ActionOp::H].iter().all(|op| act(*op, a).is_zero())
}

/// `Σ_k c_k h^k F^k(a) / k!` over the given parity of `k`.
fn f_series(a: &PBWPoly, odd: bool) -> PBWPoly {
    let mut out = PBWPoly::zero();
    let mut cur = a.clone();
    let mut k = 0u32;
    while !cur.is_zero() {
        if (k % 2 == 1) == odd {
            let c = Scalar::monomial(factorial(k).inv().unwrap(), k);
            out = &out + &cur.scale(&c);
        }
        cur = act_f(&cur);
        k += 1;
    }
    out
}

/// `(2/h) sinh(hF)` applied to `a`.
pub fn two_sinh_over_h(a: &PBWPoly) -> PBWPoly {
    let s = f_series(a, true);
    // every term carries h^{odd}; divide by h and double
    PBWPoly::from_terms(s.terms().map(|(m, c)| {
        let lowered: std::collections::BTreeMap<u32, CycRat> =
            c.terms().map(|(e, v)| (e - 1, v.scale_int(&2.into()))).collect();
        (m.clone(), Scalar::from_terms(lowered))
    }))
}

pub fn cosh_hf(a: &PBWPoly) -> PBWPoly {
    f_series(a, false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LieRelation {
    EF,
    HF,
    HE,
}

/// Residuals of `[E,F] = H`, `[H,F] = −(2/h) sinh(hF)`, `[H,E] = E cosh(hF) + cosh(hF) E` on `a`.
pub fn lie_residuals(a: &PBWPoly) -> Vec<(LieRelation, PBWPoly)> {
    use ActionOp::*;
    let ef = &(&act(E, &act(F, a)) - &act(F, &act(E, a))) - &act(H, a);
    let hf = &(&act(H, &act(F, a)) - &act(F, &act(H, a))) + &two_sinh_over_h(a);
    let he = &(&act(H, &act(E, a)) - &act(E, &act(H, a)))
        - &(&act(E, &cosh_hf(a)) + &cosh_hf(&act(E, a)));
    vec![(LieRelation::EF, ef), (LieRelation::HF, hf), (LieRelation::HE, he)]
}

/// First sample and relation that fails, if any.
pub fn check_lie_relations(sample: &[PBWPoly]) -> Result<(), (usize, LieRelation)> {
    for (i, a) in sample.iter().enumerate() {
        for (rel, r) in lie_residuals(a) {
            if !r.is_zero() {
                return Err((i, rel));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PBWPoly {
        PBWPoly::parse(s).unwrap()
    }

    #[test]
    fn generator_table() {
        assert_eq!(act(ActionOp::E, &p("y1")), p("x1"));
        assert!(act(ActionOp::E, &p("x1")).is_zero());
        assert_eq!(act(ActionOp::F, &p("x1")), p("y1"));
        assert!(act(ActionOp::F, &p("y1")).is_zero());
        assert_eq!(act(ActionOp::H, &p("x1")), p("x1"));
        assert_eq!(act(ActionOp::H, &p("y1")), p("-y1"));
        assert_eq!(act(ActionOp::F, &p("x1*x2")), p("y1*x2 + x1*y2"));
        assert_eq!(act(ActionOp::ExpHF, &p("x1")), p("x1 + h*y1"));
    }

    #[test]
    fn twisted_leibniz_on_product() {
        let a = p("x1 + y2");
        let b = p("x3*y1");
        let lhs = act(ActionOp::E, &(&a * &b));
        let rhs = &(&act(ActionOp::E, &a) * &act(ActionOp::ExpNegHF, &b))
            + &(&act(ActionOp::ExpHF, &a) * &act(ActionOp::E, &b));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn invariance_examples() {
        let b = |i, j| crate::bracket::bracket(i, j);
        assert!(is_invariant(&b(1, 2)));
        assert!(!is_invariant(&p("x1")));
        let e = &(&b(1, 2) * &b(3, 4)) + &(&b(1, 3) * &b(4, 2));
        assert!(is_invariant(&e));
    }

    #[test]
    fn lie_on_generators() {
        assert!(check_lie_relations(&[p("x1"), p("y1"), p("x1*y2"), p("x2^2*x1")]).is_ok());
    }
}
