//! Literal word rewriting with the five defining relations, oriented toward PBW order.
//!
//! For slots `i < j` (clones count as larger slots):
//!
//! ```text
//! y_i x_i -> x_i y_i − h y_i²
//! x_j y_i -> y_i x_j + h y_i y_j
//! y_j x_i -> x_i y_j − h y_i y_j
//! y_j y_i -> y_i y_j
//! x_j x_i -> x_i x_j − h x_i y_j + h y_i x_j + h² y_i y_j
//! ```
//!
//! Termination. Every rule rewrites an adjacent pair that is out of order. The
//! first summand on each right-hand side is the same two letters swapped, which
//! lowers the number of inversions of the word by one and keeps every letter.
//! Every other summand replaces at least one `x` by a `y` with the same slot.
//! So the pair (number of `x` letters, number of inversions), compared
//! lexicographically, strictly decreases along every summand of every step, and
//! it lives in a well-founded order. Rewriting therefore stops, and a word with
//! no inversions is exactly a PBW monomial.

use std::collections::HashMap;

use rand::Rng;

use super::{Block, Generator, Kind, Monomial, PBWPoly};
use crate::scalar::Scalar;

pub type Word = Vec<Generator>;

/// Which out-of-order pair gets rewritten next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Leftmost,
    Rightmost,
}

/// Right-hand side of the rule for the inverted pair `a b` (`a > b`).
pub fn rule(a: Generator, b: Generator) -> Vec<(Word, Scalar)> {
    let h = Scalar::h();
    let h2 = Scalar::h_pow(2);
    let one = Scalar::one();
    let x = |s| Generator { slot: s, kind: Kind::X };
    let y = |s| Generator { slot: s, kind: Kind::Y };
    if a.slot == b.slot {
        let i = a.slot;
        return vec![(vec![x(i), y(i)], one), (vec![y(i), y(i)], -&h)];
    }
    let (j, i) = (a.slot, b.slot);
    match (a.kind, b.kind) {
        (Kind::X, Kind::Y) => vec![(vec![y(i), x(j)], one), (vec![y(i), y(j)], h)],
        (Kind::Y, Kind::X) => vec![(vec![x(i), y(j)], one), (vec![y(i), y(j)], -&h)],
        (Kind::Y, Kind::Y) => vec![(vec![y(i), y(j)], one)],
        (Kind::X, Kind::X) => vec![
            (vec![x(i), x(j)], one),
            (vec![x(i), y(j)], -&h),
            (vec![y(i), x(j)], h),
            (vec![y(i), y(j)], h2),
        ],
    }
}

fn inversions(w: &[Generator]) -> impl Iterator<Item = usize> + '_ {
    (0..w.len().saturating_sub(1)).filter(move |&p| w[p] > w[p + 1])
}

fn word_to_monomial(w: &[Generator]) -> Monomial {
    let mut blocks: Vec<Block> = Vec::new();
    for g in w {
        match blocks.last_mut() {
            Some(b) if b.slot == g.slot => match g.kind {
                Kind::X => b.x += 1,
                Kind::Y => b.y += 1,
            },
            _ => blocks.push(match g.kind {
                Kind::X => Block { slot: g.slot, x: 1, y: 0 },
                Kind::Y => Block { slot: g.slot, x: 0, y: 1 },
            }),
        }
    }
    Monomial::from_blocks(blocks)
}

fn run<F: FnMut(&[Generator]) -> Option<usize>>(input: &[(Word, Scalar)], mut pick: F) -> PBWPoly {
    let mut pending: HashMap<Word, Scalar> = HashMap::new();
    for (w, c) in input {
        *pending.entry(w.clone()).or_default() += c;
    }
    let mut out = PBWPoly::zero();
    while let Some(w) = pending.keys().next().cloned() {
        let c = pending.remove(&w).unwrap();
        if c.is_zero() {
            continue;
        }
        match pick(&w) {
            None => out.add_term(word_to_monomial(&w), &c),
            Some(p) => {
                for (rhs, k) in rule(w[p], w[p + 1]) {
                    let mut nw = Vec::with_capacity(w.len());
                    nw.extend_from_slice(&w[..p]);
                    nw.extend(rhs);
                    nw.extend_from_slice(&w[p + 2..]);
                    *pending.entry(nw).or_default() += &(&c * &k);
                }
            }
        }
    }
    out
}

/// Normal form of a linear combination of words by literal rewriting.
pub fn normal_form(input: &[(Word, Scalar)], strategy: Order) -> PBWPoly {
    run(input, |w| match strategy {
        Order::Leftmost => inversions(w).next(),
        Order::Rightmost => inversions(w).last(),
    })
}

/// Normal form choosing the rewritten position at random.
pub fn normal_form_random<R: Rng>(input: &[(Word, Scalar)], rng: &mut R) -> PBWPoly {
    run(input, |w| {
        let inv: Vec<usize> = inversions(w).collect();
        if inv.is_empty() {
            None
        } else {
            Some(inv[rng.gen_range(0..inv.len())])
        }
    })
}

pub fn normal_form_word(w: &[Generator]) -> PBWPoly {
    normal_form(&[(w.to_vec(), Scalar::one())], Order::Leftmost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arb_gen() -> impl Strategy<Value = Generator> {
        (0u32..4, any::<bool>(), prop::bool::weighted(0.15)).prop_map(|(i, isx, cl)| {
            match (isx, cl) {
                (true, false) => Generator::x(i),
                (false, false) => Generator::y(i),
                (true, true) => Generator::dx(i),
                (false, true) => Generator::dy(i),
            }
        })
    }

    #[test]
    fn rewriter_matches_relations() {
        let w = vec![Generator::x(2), Generator::x(1)];
        let expect = PBWPoly::parse("x1*x2 - h*x1*y2 + h*y1*x2 + h^2*y1*y2").unwrap();
        assert_eq!(normal_form_word(&w), expect);
    }

    #[test]
    fn all_overlaps_resolve() {
        let gens: Vec<Generator> = [0, 1, 2].iter().flat_map(|&i| [Generator::x(i), Generator::y(i)]).chain([Generator::dx(1), Generator::dy(1)]).collect();
        for &a in &gens {
            for &b in &gens {
                for &c in &gens {
                    let w = vec![a, b, c];
                    assert_eq!(normal_form_word(&w), normal_form(&[(w.clone(), Scalar::one())], Order::Rightmost), "{w:?}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn strategies_agree_with_fast_product(w in proptest::collection::vec(arb_gen(), 0..=8), seed in any::<u64>()) {
            let left = normal_form_word(&w);
            let right = normal_form(&[(w.clone(), Scalar::one())], Order::Rightmost);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let random = normal_form_random(&[(w.clone(), Scalar::one())], &mut rng);
            let fast = PBWPoly::from_word(&w);
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(&left, &random);
            prop_assert_eq!(&left, &fast);
        }
    }
}
