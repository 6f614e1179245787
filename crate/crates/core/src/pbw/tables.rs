//! Cached multiplication tables for single blocks.
//!
//! * Jordan table: `x^a y^b · x^c y^d` inside one slot, from
//!   `y^b x^c = Σ_k (−1)^k C(c,k) b(b+1)⋯(b+k−1) h^k x^{c−k} y^{b+k}`.
//! * Braid table: `x_k^a y_k^b · x_l^c y_l^d` for slots `k > l`, rewritten as
//!   `Σ (x_l^… y_l^…)(x_k^… y_k^…)`. A letter of slot `k` moves left past a
//!   letter `u` of slot `l` through the upper triangular matrix
//!   `[x_k; y_k]·u = M(u)·[x_k; y_k]` with
//!   `M(x_l) = [[x_l + h y_l, −h x_l + h² y_l], [0, x_l − h y_l]]` and
//!   `M(y_l) = [[y_l, h y_l], [0, y_l]]`.
//!
//! Both tables depend only on exponents, never on the actual slots, so one
//! cache serves every pair of indices and every clone slot.
//!
//! Every relation is homogeneous for the weight `x ↦ 1, y ↦ 0, h ↦ 1`, so the
//! power of `h` attached to a term is fixed by its `x` exponents.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::{Block, Monomial};

/// `coef · h^e · x^p y^q` in a single slot.
pub type JTerm = (u16, u16, u32, BigInt);

/// Terms `coef · h^e · (x_l^lx y_l^ly)(x_k^kx y_k^ky)`.
#[derive(Clone, Debug)]
pub struct BraidTerm {
    pub lx: u16,
    pub ly: u16,
    pub kx: u16,
    pub ky: u16,
    pub e: u32,
    pub coef: BigInt,
}

type JPoly = BTreeMap<(u16, u16, u32), BigInt>;

thread_local! {
    static JORDAN: RefCell<HashMap<(u16, u16, u16, u16), Rc<Vec<JTerm>>>> = RefCell::new(HashMap::new());
    static BRAID: RefCell<HashMap<(u16, u16, u16, u16), Rc<Vec<BraidTerm>>>> = RefCell::new(HashMap::new());
    static XK: RefCell<HashMap<(u16, u16, u16), Rc<Vec<BraidTerm>>>> = RefCell::new(HashMap::new());
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn rising(b: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(b + i))
}

/// `x^a y^b · x^c y^d` in one slot.
pub fn jordan(a: u16, b: u16, c: u16, d: u16) -> Rc<Vec<JTerm>> {
    if let Some(v) = JORDAN.with(|t| t.borrow().get(&(a, b, c, d)).cloned()) {
        return v;
    }
    let kmax = if b == 0 { 0 } else { c };
    let v: Vec<JTerm> = (0..=kmax)
        .map(|k| {
            let mut coef = binom(c as u64, k as u64) * rising(b as u64, k as u64);
            if k % 2 == 1 {
                coef = -coef;
            }
            (a + c - k, b + d + k, k as u32, coef)
        })
        .filter(|t| !t.3.is_zero())
        .collect();
    let v = Rc::new(v);
    JORDAN.with(|t| t.borrow_mut().insert((a, b, c, d), v.clone()));
    v
}

fn jpoly_mul(p: &JPoly, q: &JPoly) -> JPoly {
    let mut out = JPoly::new();
    for ((a, b, e1), c1) in p {
        for ((c, d, e2), c2) in q {
            for (x, y, e, k) in jordan(*a, *b, *c, *d).iter() {
                *out.entry((*x, *y, e1 + e2 + e)).or_insert_with(BigInt::zero) += c1 * c2 * k;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn jpoly_add(p: &mut JPoly, q: &JPoly) {
    for (k, v) in q {
        *p.entry(*k).or_insert_with(BigInt::zero) += v;
    }
    p.retain(|_, v| !v.is_zero());
}

fn jmono(x: u16, y: u16) -> JPoly {
    let mut p = JPoly::new();
    p.insert((x, y, 0), BigInt::one());
    p
}

/// `x + λ h y` for an integer λ.
fn x_shift(lambda: i64) -> JPoly {
    let mut p = jmono(1, 0);
    if lambda != 0 {
        p.insert((0, 1, 1), BigInt::from(lambda));
    }
    p
}

fn jpow(base: &JPoly, n: u16) -> JPoly {
    (0..n).fold(jmono(0, 0), |acc, _| jpoly_mul(&acc, base))
}

/// `x_k^a · x_l^p y_l^q` for slots `k > l`.
fn xk_pow(a: u16, p: u16, q: u16) -> Rc<Vec<BraidTerm>> {
    if let Some(v) = XK.with(|t| t.borrow().get(&(a, p, q)).cloned()) {
        return v;
    }
    let v = if a == 0 {
        vec![BraidTerm { lx: p, ly: q, kx: 0, ky: 0, e: 0, coef: BigInt::one() }]
    } else {
        let yq = jmono(0, q);
        // x_k L = τ(L) x_k + N(L) y_k
        let tau = jpoly_mul(&jpow(&x_shift(1), p), &yq);
        let mut m12x = JPoly::new();
        m12x.insert((1, 0, 1), BigInt::from(-1));
        m12x.insert((0, 1, 2), BigInt::one());
        let mut n = JPoly::new();
        for i in 1..=p {
            let t = jpoly_mul(&jpow(&x_shift(1), i - 1), &m12x);
            let t = jpoly_mul(&t, &jpow(&x_shift(-1), p - i));
            jpoly_add(&mut n, &jpoly_mul(&t, &yq));
        }
        if q > 0 {
            let t: JPoly = tau.iter().map(|((x, y, e), c)| ((*x, *y, e + 1), c * BigInt::from(q))).collect();
            jpoly_add(&mut n, &t);
        }
        let mut acc: BTreeMap<(u16, u16, u16, u16), (BigInt, u32)> = BTreeMap::new();
        let mut push = |t: &BraidTerm, kx: u16, ky: u16, e: u32, c: BigInt| {
            let slot = acc.entry((t.lx, t.ly, kx, ky)).or_insert((BigInt::zero(), e));
            debug_assert_eq!(slot.1, e);
            slot.0 += c;
        };
        for ((x, y, e), c) in &tau {
            for t in xk_pow(a - 1, *x, *y).iter() {
                for (kx, ky, e2, c2) in jordan(t.kx, t.ky, 1, 0).iter() {
                    push(t, *kx, *ky, e + t.e + e2, c * &t.coef * c2);
                }
            }
        }
        for ((x, y, e), c) in &n {
            for t in xk_pow(a - 1, *x, *y).iter() {
                push(t, t.kx, t.ky + 1, e + t.e, c * &t.coef);
            }
        }
        acc.into_iter()
            .filter(|(_, (c, _))| !c.is_zero())
            .map(|((lx, ly, kx, ky), (coef, e))| BraidTerm { lx, ly, kx, ky, e, coef })
            .collect()
    };
    let v = Rc::new(v);
    XK.with(|t| t.borrow_mut().insert((a, p, q), v.clone()));
    v
}

/// `x_k^a y_k^b · x_l^c y_l^d` for slots `k > l`.
pub fn braid(a: u16, b: u16, c: u16, d: u16) -> Rc<Vec<BraidTerm>> {
    if let Some(v) = BRAID.with(|t| t.borrow().get(&(a, b, c, d)).cloned()) {
        return v;
    }
    // y_k^b L = σ^b(L) y_k^b with σ^b(x_l) = x_l − b h y_l
    let sig = jpoly_mul(&jpow(&x_shift(-(b as i64)), c), &jmono(0, d));
    let mut acc: BTreeMap<(u16, u16, u16, u16), (BigInt, u32)> = BTreeMap::new();
    for ((x, y, e), coef) in &sig {
        for t in xk_pow(a, *x, *y).iter() {
            let slot = acc.entry((t.lx, t.ly, t.kx, t.ky + b)).or_insert((BigInt::zero(), e + t.e));
            debug_assert_eq!(slot.1, e + t.e);
            slot.0 += coef * &t.coef;
        }
    }
    let v: Vec<BraidTerm> = acc
        .into_iter()
        .filter(|(_, (c, _))| !c.is_zero())
        .map(|((lx, ly, kx, ky), (coef, e))| BraidTerm { lx, ly, kx, ky, e, coef })
        .collect();
    let v = Rc::new(v);
    BRAID.with(|t| t.borrow_mut().insert((a, b, c, d), v.clone()));
    v
}

type State = (SmallVec<[Block; 4]>, u16, u16);

/// `K · n` for a single block `K` and a normal monomial `n`.
pub fn block_times_mono(k: Block, n: &Monomial) -> Vec<(Monomial, BigInt, u32)> {
    let (head, mid, tail) = n.split_at_slot(k.slot);
    let mut states: HashMap<State, (BigInt, u32)> = HashMap::new();
    states.insert((SmallVec::new(), k.x, k.y), (BigInt::one(), 0));
    for l in head.blocks() {
        let mut next: HashMap<State, (BigInt, u32)> = HashMap::with_capacity(states.len() * 4);
        for ((prefix, kx, ky), (c, e)) in states {
            for t in braid(kx, ky, l.x, l.y).iter() {
                let mut p = prefix.clone();
                p.push(Block { slot: l.slot, x: t.lx, y: t.ly });
                let slot = next.entry((p, t.kx, t.ky)).or_insert((BigInt::zero(), e + t.e));
                slot.0 += &c * &t.coef;
            }
        }
        next.retain(|_, (c, _)| !c.is_zero());
        states = next;
    }
    let mut out: HashMap<Monomial, (BigInt, u32)> = HashMap::with_capacity(states.len());
    for ((prefix, kx, ky), (c, e)) in states {
        let finals: Vec<(u16, u16, u32, BigInt)> = match mid {
            Some(m) => jordan(kx, ky, m.x, m.y).iter().map(|(x, y, e2, c2)| (*x, *y, *e2, &c * c2)).collect(),
            None => vec![(kx, ky, 0, c)],
        };
        for (x, y, e2, c2) in finals {
            let mut blocks = prefix.clone();
            blocks.push(Block { slot: k.slot, x, y });
            blocks.extend(tail.blocks().iter().copied());
            let slot = out.entry(Monomial::from_blocks(blocks)).or_insert((BigInt::zero(), e + e2));
            slot.0 += c2;
        }
    }
    out.into_iter().filter(|(_, (c, _))| !c.is_zero()).map(|(m, (c, e))| (m, c, e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_small() {
        // y x = x y − h y²
        let t = jordan(0, 1, 1, 0);
        assert_eq!(t.as_slice(), &[(1, 1, 0, BigInt::one()), (0, 2, 1, BigInt::from(-1))]);
        // y x² = x² y − 2h x y² + 2h² y³
        let t = jordan(0, 1, 2, 0);
        let c: Vec<i64> = t.iter().map(|x| i64::try_from(&x.3).unwrap()).collect();
        assert_eq!(c, vec![1, -2, 2]);
    }

    #[test]
    fn braid_generators() {
        // x_k x_l = x_l x_k − h x_l y_k + h y_l x_k + h² y_l y_k
        let t = braid(1, 0, 1, 0);
        let got: Vec<(u16, u16, u16, u16, u32, i64)> =
            t.iter().map(|b| (b.lx, b.ly, b.kx, b.ky, b.e, i64::try_from(&b.coef).unwrap())).collect();
        let mut want = vec![(1, 0, 1, 0, 0, 1), (1, 0, 0, 1, 1, -1), (0, 1, 1, 0, 1, 1), (0, 1, 0, 1, 2, 1)];
        want.sort();
        let mut got = got;
        got.sort();
        assert_eq!(got, want);
    }
}
