//! The algebra generated by `x_i, y_i` over ordered indices, with PBW normal form.
//!
//! Normal monomials are products of blocks `x_i^a y_i^b` with strictly ascending
//! slots. A slot is an index together with a clone flag; clone slots (`dx_i`,
//! `dy_i`) sort after every base slot and obey the same commutation rules.
//!
//! Products are computed with cached block tables (see [`tables`]); the literal
//! rewriter in [`rewrite`] applies the defining relations one adjacent pair at a
//! time and serves as an independent route to the same normal form.

pub mod rewrite;
pub mod tables;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::scalar::{CycRat, Scalar};

pub type Index = u32;

const CLONE_BIT: u32 = 1 << 31;

/// An index with its clone flag; ordered so that every clone follows every base index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slot(u32);

impl Slot {
    pub const fn base(i: Index) -> Slot {
        assert!(i < CLONE_BIT, "index out of range");
        Slot(i)
    }

    pub fn clone_of(i: Index) -> Slot {
        assert!(i < CLONE_BIT, "index out of range");
        Slot(i | CLONE_BIT)
    }

    pub fn index(self) -> Index {
        self.0 & !CLONE_BIT
    }

    pub fn is_clone(self) -> bool {
        self.0 & CLONE_BIT != 0
    }

    /// The clone slot of a base slot.
    pub fn differential(self) -> Slot {
        Slot::clone_of(self.index())
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clone() {
            write!(f, "d{}", self.index())
        } else {
            write!(f, "{}", self.index())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    X,
    Y,
}

/// A single generator; the derived order is the PBW order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub slot: Slot,
    pub kind: Kind,
}

impl Generator {
    pub fn x(i: Index) -> Self {
        Generator { slot: Slot::base(i), kind: Kind::X }
    }
    pub fn y(i: Index) -> Self {
        Generator { slot: Slot::base(i), kind: Kind::Y }
    }
    pub fn dx(i: Index) -> Self {
        Generator { slot: Slot::clone_of(i), kind: Kind::X }
    }
    pub fn dy(i: Index) -> Self {
        Generator { slot: Slot::clone_of(i), kind: Kind::Y }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = if self.slot.is_clone() { "d" } else { "" };
        let k = match self.kind {
            Kind::X => "x",
            Kind::Y => "y",
        };
        write!(f, "{d}{k}{}", self.slot.index())
    }
}

/// `x_slot^x y_slot^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub slot: Slot,
    pub x: u16,
    pub y: u16,
}

impl Block {
    pub fn degree(&self) -> u32 {
        self.x as u32 + self.y as u32
    }
}

/// A PBW basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    blocks: SmallVec<[Block; 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// Blocks must have strictly ascending slots; empty blocks are dropped.
    pub fn from_blocks<I: IntoIterator<Item = Block>>(blocks: I) -> Self {
        let blocks: SmallVec<[Block; 4]> = blocks.into_iter().filter(|b| b.x + b.y > 0).collect();
        debug_assert!(blocks.windows(2).all(|w| w[0].slot < w[1].slot));
        Monomial { blocks }
    }

    pub fn generator(g: Generator) -> Self {
        let (x, y) = match g.kind {
            Kind::X => (1, 0),
            Kind::Y => (0, 1),
        };
        Monomial::from_blocks([Block { slot: g.slot, x, y }])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_one(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block(&self, slot: Slot) -> Option<Block> {
        self.blocks.iter().copied().find(|b| b.slot == slot)
    }

    pub fn degree(&self) -> u32 {
        self.blocks.iter().map(Block::degree).sum()
    }

    pub fn degree_in(&self, slot: Slot) -> u32 {
        self.block(slot).map(|b| b.degree()).unwrap_or(0)
    }

    /// Total number of `x` letters.
    pub fn x_weight(&self) -> u32 {
        self.blocks.iter().map(|b| b.x as u32).sum()
    }

    /// The letters of the monomial in order.
    pub fn letters(&self) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for b in &self.blocks {
            out.extend(std::iter::repeat(Generator { slot: b.slot, kind: Kind::X }).take(b.x as usize));
            out.extend(std::iter::repeat(Generator { slot: b.slot, kind: Kind::Y }).take(b.y as usize));
        }
        out
    }

    /// Concatenation when every slot of `self` precedes every slot of `o`.
    pub fn concat_ordered(&self, o: &Monomial) -> Option<Monomial> {
        match (self.blocks.last(), o.blocks.first()) {
            (Some(a), Some(b)) if a.slot >= b.slot => None,
            _ => {
                let mut blocks = self.blocks.clone();
                blocks.extend(o.blocks.iter().copied());
                Some(Monomial { blocks })
            }
        }
    }

    /// Splits into the part with slots below `slot`, the block at `slot`, and the rest.
    pub fn split_at_slot(&self, slot: Slot) -> (Monomial, Option<Block>, Monomial) {
        let pos = self.blocks.iter().position(|b| b.slot >= slot).unwrap_or(self.blocks.len());
        let (head, tail) = self.blocks.split_at(pos);
        let (mid, tail) = match tail.first() {
            Some(b) if b.slot == slot => (Some(*b), &tail[1..]),
            _ => (None, tail),
        };
        (
            Monomial { blocks: head.iter().copied().collect() },
            mid,
            Monomial { blocks: tail.iter().copied().collect() },
        )
    }

    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        self.blocks.iter().map(|b| b.slot)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for b in &self.blocks {
            for (kind, e) in [(Kind::X, b.x), (Kind::Y, b.y)] {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let g = Generator { slot: b.slot, kind };
                if e == 1 {
                    write!(f, "{g}")?;
                } else {
                    write!(f, "{g}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Sparse linear combination of PBW monomials; never stores a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PBWPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

/// Products with at least this many term pairs are split across threads.
const PAR_THRESHOLD: usize = 4096;

/// Integer-coefficient expansion of a monomial product: `(monomial, k, e)` means `k·h^e·monomial`.
pub type MonoExpansion = Vec<(Monomial, BigInt, u32)>;

impl PBWPoly {
    pub fn zero() -> Self {
        PBWPoly::default()
    }

    pub fn one() -> Self {
        PBWPoly::constant(Scalar::one())
    }

    pub fn constant(s: Scalar) -> Self {
        PBWPoly::term(Monomial::one(), s)
    }

    pub fn term(m: Monomial, s: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(m, s);
        }
        PBWPoly { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        PBWPoly::term(m, Scalar::one())
    }

    pub fn gen(g: Generator) -> Self {
        PBWPoly::monomial(Monomial::generator(g))
    }

    pub fn x(i: Index) -> Self {
        PBWPoly::gen(Generator::x(i))
    }
    pub fn y(i: Index) -> Self {
        PBWPoly::gen(Generator::y(i))
    }
    pub fn dx(i: Index) -> Self {
        PBWPoly::gen(Generator::dx(i))
    }
    pub fn dy(i: Index) -> Self {
        PBWPoly::gen(Generator::dy(i))
    }

    pub fn h() -> Self {
        PBWPoly::constant(Scalar::h())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(it: I) -> Self {
        let mut p = PBWPoly::zero();
        for (m, s) in it {
            p.add_term(m, &s);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The constant coefficient when the polynomial is a pure scalar.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(s.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += s;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> PBWPoly {
        if s.is_zero() {
            return PBWPoly::zero();
        }
        PBWPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * s)))
    }

    pub fn scale_int(&self, k: i64) -> PBWPoly {
        self.scale(&Scalar::from_int(k))
    }

    pub fn map_coeffs<F: Fn(&Scalar) -> Scalar>(&self, f: F) -> PBWPoly {
        PBWPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Substitute `h := v` in every coefficient.
    pub fn eval_h(&self, v: &CycRat) -> PBWPoly {
        self.map_coeffs(|c| c.eval_h_scalar(v))
    }

    pub fn pow(&self, n: u32) -> PBWPoly {
        let mut acc = PBWPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn slots(&self) -> std::collections::BTreeSet<Slot> {
        self.terms.keys().flat_map(|m| m.slots().collect::<Vec<_>>()).collect()
    }

    /// Degree in `slot` when every term has the same degree there.
    pub fn degree_in(&self, slot: Slot) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree_in(slot));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Per-slot degree; `None` marks an inhomogeneous slot.
    pub fn degree_profile(&self) -> BTreeMap<Slot, Option<u32>> {
        self.slots().into_iter().map(|s| (s, self.degree_in(s))).collect()
    }

    pub fn max_h_degree(&self) -> u32 {
        self.terms.values().filter_map(|c| c.h_degree()).max().unwrap_or(0)
    }

    /// Multiplication of two normal monomials.
    pub fn mono_mul(a: &Monomial, b: &Monomial) -> MonoExpansion {
        if let Some(m) = a.concat_ordered(b) {
            return vec![(m, BigInt::from(1), 0)];
        }
        let mut cur: HashMap<Monomial, (BigInt, u32)> = HashMap::new();
        cur.insert(b.clone(), (BigInt::from(1), 0));
        for blk in a.blocks().iter().rev() {
            let mut next: HashMap<Monomial, (BigInt, u32)> = HashMap::with_capacity(cur.len() * 2);
            for (m, (k, e)) in cur {
                for (m2, k2, e2) in tables::block_times_mono(*blk, &m) {
                    let slot = next.entry(m2).or_insert((BigInt::from(0), e + e2));
                    debug_assert_eq!(slot.1, e + e2);
                    slot.0 += &k * &k2;
                }
            }
            next.retain(|_, (k, _)| k != &BigInt::from(0));
            cur = next;
        }
        cur.into_iter().map(|(m, (k, e))| (m, k, e)).collect()
    }

    fn block_times_poly(blk: Block, p: &HashMap<Monomial, Scalar>) -> HashMap<Monomial, Scalar> {
        let mut out: HashMap<Monomial, Scalar> = HashMap::with_capacity(p.len() * 2);
        for (m, c) in p {
            for (m2, k, e) in tables::block_times_mono(blk, m) {
                *out.entry(m2).or_default() += &c.mul_int_hpow(&k, e);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `Σ c_a · m_a · b`, sharing the product of every common block suffix of the `m_a`.
    fn mul_serial(terms_a: &[(&Monomial, &Scalar)], b: &PBWPoly) -> HashMap<Monomial, Scalar> {
        let base: HashMap<Monomial, Scalar> = b.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let mut memo: HashMap<Vec<Block>, HashMap<Monomial, Scalar>> = HashMap::new();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (ma, ca) in terms_a {
            let blocks = ma.blocks();
            for i in (0..blocks.len()).rev() {
                if memo.contains_key(&blocks[i..]) {
                    continue;
                }
                let prev = if i + 1 == blocks.len() { &base } else { &memo[&blocks[i + 1..]] };
                let next = PBWPoly::block_times_poly(blocks[i], prev);
                memo.insert(blocks[i..].to_vec(), next);
            }
            let prod = if blocks.is_empty() { &base } else { &memo[blocks] };
            for (m, c) in prod {
                *acc.entry(m.clone()).or_default() += &(*ca * c);
            }
        }
        acc
    }

    pub fn multiply(&self, b: &PBWPoly) -> PBWPoly {
        if self.is_zero() || b.is_zero() {
            return PBWPoly::zero();
        }
        let terms_a: Vec<(&Monomial, &Scalar)> = self.terms.iter().collect();
        let acc = if terms_a.len() * b.len() >= PAR_THRESHOLD && rayon::current_num_threads() > 1 {
            let chunk = terms_a.len().div_ceil(rayon::current_num_threads());
            let parts: Vec<HashMap<Monomial, Scalar>> =
                terms_a.par_chunks(chunk).map(|c| PBWPoly::mul_serial(c, b)).collect();
            let mut total: HashMap<Monomial, Scalar> = HashMap::new();
            for p in parts {
                for (m, c) in p {
                    *total.entry(m).or_default() += &c;
                }
            }
            total
        } else {
            PBWPoly::mul_serial(&terms_a, b)
        };
        PBWPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Product of a list of factors, left to right.
    pub fn product<'a, I: IntoIterator<Item = &'a PBWPoly>>(it: I) -> PBWPoly {
        it.into_iter().fold(PBWPoly::one(), |acc, p| &acc * p)
    }

    /// Normal form of a word given letter by letter.
    pub fn from_word(word: &[Generator]) -> PBWPoly {
        word.iter().fold(PBWPoly::one(), |acc, g| &acc * &PBWPoly::gen(*g))
    }

    /// Leading term in the monomial order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Restricts to terms whose block at `slot` has the given exponents (absent = (0,0)).
    pub fn filter_block(&self, slot: Slot, x: u16, y: u16) -> PBWPoly {
        PBWPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| {
                    let b = m.block(slot).map(|b| (b.x, b.y)).unwrap_or((0, 0));
                    b == (x, y)
                })
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Removes the block at `slot` from every monomial.
    pub fn strip_slot(&self, slot: Slot) -> PBWPoly {
        PBWPoly::from_terms(self.terms.iter().map(|(m, c)| {
            (Monomial::from_blocks(m.blocks().iter().copied().filter(|b| b.slot != slot)), c.clone())
        }))
    }

    /// Relabels base indices through `f`; the map must preserve the relative order of all slots present.
    pub fn relabel_monotone<F: Fn(Index) -> Index>(&self, f: F) -> PBWPoly {
        PBWPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let blocks: Vec<Block> = m
                .blocks()
                .iter()
                .map(|b| {
                    let slot = if b.slot.is_clone() { Slot::clone_of(f(b.slot.index())) } else { Slot::base(f(b.slot.index())) };
                    Block { slot, ..*b }
                })
                .collect();
            (Monomial::from_blocks(blocks), c.clone())
        }))
    }

    pub fn parse(s: &str) -> crate::error::Result<PBWPoly> {
        crate::parse::parse_pbw(s)
    }
}

impl Add for &PBWPoly {
    type Output = PBWPoly;
    fn add(self, o: &PBWPoly) -> PBWPoly {
        let (mut big, small) = if self.len() >= o.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }
}

impl Sub for &PBWPoly {
    type Output = PBWPoly;
    fn sub(self, o: &PBWPoly) -> PBWPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Neg for &PBWPoly {
    type Output = PBWPoly;
    fn neg(self) -> PBWPoly {
        PBWPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &PBWPoly {
    type Output = PBWPoly;
    fn mul(self, o: &PBWPoly) -> PBWPoly {
        self.multiply(o)
    }
}

#[macro_export]
#[doc(hidden)]
macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, o: &$t) -> $t {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(PBWPoly, Add, add);
forward_owned!(PBWPoly, Sub, sub);
forward_owned!(PBWPoly, Mul, mul);

impl Neg for PBWPoly {
    type Output = PBWPoly;
    fn neg(self) -> PBWPoly {
        -&self
    }
}

impl From<Scalar> for PBWPoly {
    fn from(s: Scalar) -> Self {
        PBWPoly::constant(s)
    }
}

/// Writes `coeff * body` terms joined by signs; shared by every printer in the crate.
pub(crate) fn write_sum<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (String, &'a Scalar)>,
{
    let mut first = true;
    for (body, c) in terms {
        let unit_body = body == "1";
        let (neg, coeff_txt) = if c.is_one() {
            (false, None)
        } else if (-c).is_one() {
            (true, None)
        } else if c.summand_count() == 1 {
            let s = c.to_string();
            match s.strip_prefix('-') {
                Some(rest) => (true, Some(rest.to_string())),
                None => (false, Some(s)),
            }
        } else {
            (false, Some(format!("({c})")))
        };
        let piece = match (coeff_txt, unit_body) {
            (None, true) => "1".to_string(),
            (None, false) => body,
            (Some(t), true) => t,
            (Some(t), false) => format!("{t}*{body}"),
        };
        match (first, neg) {
            (true, false) => write!(f, "{piece}")?,
            (true, true) => write!(f, "-{piece}")?,
            (false, false) => write!(f, " + {piece}")?,
            (false, true) => write!(f, " - {piece}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for PBWPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter().rev().map(|(m, c)| (m.to_string(), c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PBWPoly {
        PBWPoly::parse(s).unwrap()
    }

    #[test]
    fn defining_relations() {
        assert_eq!(&p("y1") * &p("x1"), p("x1*y1 - h*y1^2"));
        assert_eq!(&p("x2") * &p("y1"), p("y1*x2 + h*y1*y2"));
        assert_eq!(&p("y2") * &p("x1"), p("x1*y2 - h*y1*y2"));
        assert_eq!(&p("y2") * &p("y1"), p("y1*y2"));
        assert_eq!(&p("x2") * &p("x1"), p("x1*x2 - h*x1*y2 + h*y1*x2 + h^2*y1*y2"));
    }

    #[test]
    fn braided_sum() {
        let s = p("x1 + x2");
        let t = p("y1 + y2");
        let r = &(&(&s * &t) - &(&t * &s)) - &(&t * &t).scale(&Scalar::h());
        assert!(r.is_zero());
    }

    #[test]
    fn common_right_multiple() {
        assert_eq!(&p("x2") * &p("x1 - h*y1"), &p("x1") * &p("x2 - h*y2"));
    }

    #[test]
    fn unit_and_commuting_ys() {
        let a = p("x1*y2 + h*x3");
        assert_eq!(&a * &PBWPoly::one(), a);
        assert_eq!(&p("y3") * &p("y1*y2"), p("y1*y2*y3"));
    }

    #[test]
    fn degree_profile_examples() {
        let b12 = p("x1*y2 - y1*x2 - h*y1*y2");
        let b13 = p("x1*y3 - y1*x3 - h*y1*y3");
        let prof = (&b12 * &b13).degree_profile();
        assert_eq!(prof[&Slot::base(1)], Some(2));
        assert_eq!(prof[&Slot::base(2)], Some(1));
        assert_eq!(prof[&Slot::base(3)], Some(1));
        assert_eq!(p("x1 + y1^2").degree_profile()[&Slot::base(1)], None);
        assert!(PBWPoly::zero().degree_profile().is_empty());
    }

    #[test]
    fn clones_follow_base_indices() {
        // dx_1 behaves as an index larger than every base index
        assert_eq!(&p("dx1") * &p("x5"), p("x5*dx1 - h*x5*dy1 + h*y5*dx1 + h^2*y5*dy1"));
    }

    #[test]
    fn display_sorted() {
        assert_eq!(p("y1*x1").to_string(), "x1*y1 - h*y1^2");
    }
}
