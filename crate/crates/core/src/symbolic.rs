//! The symbolic method: invariants and covariants of an abstract n-form from bracket symbols.
//!
//! A symbol homogeneous of degree `n` in each of its nonzero indices is
//! expanded into normal form. Each block `x_j^a y_j^{n−a}` is then rewritten,
//! from `x_j^n` down to `y_j^n`, through the right coefficients of `(0j)^n`.
//! The coefficients of the resulting products are the coefficients of the
//! abstract invariant.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::bracket::{expand_brackets, BracketPoly};
use crate::error::{Error, Result};
use crate::forms::{bracket_product_form, commutator_constants, letter, xy_power, CommutatorTable, Form, Side, DIST};
use crate::linsolve::solve_combination;
use crate::pbw::{Block, Index, Monomial, PBWPoly, Slot};
use crate::scalar::Scalar;

/// `x^a y^b` followed by coefficient letters in factor order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbsWord {
    pub x: u16,
    pub y: u16,
    pub letters: Vec<u8>,
}

impl AbsWord {
    /// Compact notation: `"xxAC"` is `x²·A·C`.
    pub fn parse(s: &str) -> Result<AbsWord> {
        let mut w = AbsWord { x: 0, y: 0, letters: Vec::new() };
        for c in s.chars() {
            match c {
                'x' if w.letters.is_empty() && w.y == 0 => w.x += 1,
                'y' if w.letters.is_empty() => w.y += 1,
                'A'..='Z' => w.letters.push(c as u8 - b'A'),
                _ => return Err(Error::Invalid(format!("bad word '{s}' at '{c}'"))),
            }
        }
        Ok(w)
    }

    fn body(&self) -> String {
        let mut parts = Vec::new();
        let pw = |name: &str, e: u16| if e == 1 { name.to_string() } else { format!("{name}^{e}") };
        if self.x > 0 {
            parts.push(pw("x", self.x));
        }
        if self.y > 0 {
            parts.push(pw("y", self.y));
        }
        let mut k = 0;
        while k < self.letters.len() {
            let mut e = 1;
            while k + e < self.letters.len() && self.letters[k + e] == self.letters[k] {
                e += 1;
            }
            parts.push(pw(&letter(self.letters[k] as usize), e as u16));
            k += e;
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Noncommutative polynomial in the coefficient letters of an abstract n-form.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AbstractInvariant {
    pub n: u32,
    terms: BTreeMap<AbsWord, Scalar>,
}

impl AbstractInvariant {
    pub fn zero(n: u32) -> Self {
        AbstractInvariant { n, terms: BTreeMap::new() }
    }

    pub fn from_words(n: u32, words: &[(&str, &str)]) -> Result<Self> {
        let mut out = AbstractInvariant::zero(n);
        for (w, c) in words {
            out.add_term(AbsWord::parse(w)?, &Scalar::parse(c)?);
        }
        Ok(out)
    }

    pub fn add_term(&mut self, w: AbsWord, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AbsWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = AbstractInvariant::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &(c * s));
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), &-c);
        }
        out
    }

    /// The part with covariant prefix `x^a y^b`, prefix removed.
    pub fn prefix_part(&self, a: u16, b: u16) -> Self {
        let mut out = AbstractInvariant::zero(self.n);
        for (w, c) in &self.terms {
            if (w.x, w.y) == (a, b) {
                out.add_term(AbsWord { x: 0, y: 0, letters: w.letters.clone() }, c);
            }
        }
        out
    }

    /// Rewrites every word into non-decreasing letter order with the universal
    /// commutation relations of n-form coefficients.
    pub fn ordered(&self) -> Result<Self> {
        let table = universal_table(self.n)?;
        let mut pending: Vec<(AbsWord, Scalar)> = self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        let mut out = AbstractInvariant::zero(self.n);
        while let Some((w, c)) = pending.pop() {
            let Some(p) = (0..w.letters.len().saturating_sub(1)).find(|&p| w.letters[p] > w.letters[p + 1]) else {
                out.add_term(w, &c);
                continue;
            };
            let (l, k) = (w.letters[p] as usize, w.letters[p + 1] as usize);
            let splice = |i: usize, j: usize| {
                let mut nw = w.clone();
                nw.letters[p] = i as u8;
                nw.letters[p + 1] = j as u8;
                nw
            };
            pending.push((splice(k, l), c.clone()));
            for (i, j, b) in &table.entries[&(l, k)] {
                pending.push((splice(*i, *j), &c * b));
            }
        }
        Ok(out)
    }

    /// Substitutes the right coefficients of `f` in letter order.
    pub fn instantiate(&self, f: &Form) -> Result<PBWPoly> {
        if f.n != self.n {
            return Err(Error::Invalid(format!("invariant of a {}-form applied to a {}-form", self.n, f.n)));
        }
        if f.side != Side::Right {
            return Err(Error::Invalid("instantiation uses right coefficients".into()));
        }
        let mut memo: HashMap<Vec<u8>, PBWPoly> = HashMap::new();
        memo.insert(Vec::new(), PBWPoly::one());
        let mut out = PBWPoly::zero();
        for (w, c) in &self.terms {
            for len in 1..=w.letters.len() {
                let key = w.letters[..len].to_vec();
                if !memo.contains_key(&key) {
                    let prev = &memo[&w.letters[..len - 1]];
                    let v = prev * &f.coeffs[w.letters[len - 1] as usize];
                    memo.insert(key, v);
                }
            }
            let body = &memo[&w.letters];
            let t = if w.x + w.y > 0 { &xy_power(w.x as u32, w.y as u32) * body } else { body.clone() };
            out = &out + &t.scale(c);
        }
        Ok(out)
    }

    /// Normal form on the special form `(01)(02)…(0n)`.
    pub fn canonical(&self) -> Result<PBWPoly> {
        self.instantiate(&special_form(self.n))
    }

    /// Equality modulo the universal coefficient relations.
    pub fn equivalent(&self, o: &Self) -> Result<bool> {
        Ok(self.n == o.n && self.sub(o).canonical()?.is_zero())
    }
}

impl fmt::Display for AbstractInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::pbw::write_sum(f, self.terms.iter().map(|(w, c)| (w.body(), c)))
    }
}

thread_local! {
    static TABLES: RefCell<HashMap<u32, CommutatorTable>> = RefCell::new(HashMap::new());
    static CASCADE: RefCell<HashMap<u32, Vec<Vec<(usize, Scalar)>>>> = RefCell::new(HashMap::new());
}

/// `(01)(02)…(0n)` with right coefficients.
pub fn special_form(n: u32) -> Form {
    let idx: Vec<Index> = (1..=n).collect();
    Form::extract_unchecked(&bracket_product_form(&idx), Side::Right).expect("bracket products are forms")
}

fn universal_table(n: u32) -> Result<CommutatorTable> {
    if let Some(t) = TABLES.with(|c| c.borrow().get(&n).cloned()) {
        return Ok(t);
    }
    let t = commutator_constants(&special_form(n), None)?;
    TABLES.with(|c| c.borrow_mut().insert(n, t.clone()));
    Ok(t)
}

const PROTO: Index = 1;

/// Right coefficients of `(01)^n` as rows `a ↦ coefficient of x_1^a y_1^{n−a}`.
fn power_coefficients(n: u32) -> Vec<Vec<Scalar>> {
    let f = Form::extract_unchecked(&bracket_product_form(&vec![PROTO; n as usize]), Side::Right).expect("form");
    f.coeffs
        .iter()
        .map(|a| (0..=n).map(|e| a.coeff(&slot_monomial(Slot::base(PROTO), e as u16, (n - e) as u16))).collect())
        .collect()
}

fn slot_monomial(slot: Slot, x: u16, y: u16) -> Monomial {
    Monomial::from_blocks([Block { slot, x, y }])
}

/// Row `a`: `x_j^a y_j^{n−a} = Σ_i c_i A^{(j)}_i`, by the stepwise replacement from `x_j^n` down.
fn cascade_rows(n: u32) -> Vec<Vec<(usize, Scalar)>> {
    if let Some(t) = CASCADE.with(|c| c.borrow().get(&n).cloned()) {
        return t;
    }
    let m = power_coefficients(n);
    let nn = n as usize;
    let mut rows = Vec::new();
    for a in 0..=nn {
        let mut p = vec![Scalar::zero(); nn + 1];
        p[a] = Scalar::one();
        let mut row = Vec::new();
        for b in (0..=nn).rev() {
            if p[b].is_zero() {
                continue;
            }
            let coef = p[b].checked_div(&m[b][b]).expect("unit leading coefficient");
            for e in 0..=nn {
                p[e] -= &(&coef * &m[b][e]);
            }
            row.push((b, coef));
        }
        rows.push(row);
    }
    CASCADE.with(|c| c.borrow_mut().insert(n, rows.clone()));
    rows
}

fn symbol_indices(d: &PBWPoly, n: u32) -> Result<Vec<Index>> {
    let mut out = Vec::new();
    for (slot, deg) in d.degree_profile() {
        if slot.is_clone() {
            return Err(Error::Invalid("symbols cannot contain differentials".into()));
        }
        match (slot == DIST, deg) {
            (true, Some(_)) => {}
            (false, Some(k)) if k == n => out.push(slot.index()),
            (_, _) => return Err(Error::Inhomogeneous(slot.index())),
        }
    }
    Ok(out)
}

/// Abstract invariant (or covariant, when index 0 occurs) of a symbol, by the cascade.
pub fn symbolic_invariant(symbol: &BracketPoly, n: u32) -> Result<AbstractInvariant> {
    let d = expand_brackets(symbol);
    let indices = symbol_indices(&d, n)?;
    let rows = cascade_rows(n);
    let mut out = AbstractInvariant::zero(n);
    for (m, c) in d.terms() {
        let pre = m.block(DIST).map(|b| (b.x, b.y)).unwrap_or((0, 0));
        let mut partial: Vec<(Vec<u8>, Scalar)> = vec![(Vec::new(), c.clone())];
        for j in &indices {
            let b = m.block(Slot::base(*j)).expect("homogeneous");
            let mut next = Vec::with_capacity(partial.len() * rows[b.x as usize].len());
            for (w, k) in &partial {
                for (i, r) in &rows[b.x as usize] {
                    let mut w2 = w.clone();
                    w2.push(*i as u8);
                    next.push((w2, k * r));
                }
            }
            partial = next;
        }
        for (letters, k) in partial {
            out.add_term(AbsWord { x: pre.0, y: pre.1, letters }, &k);
        }
    }
    Ok(out)
}

/// The same abstract invariant obtained by one linear solve against all products of coefficients.
pub fn symbolic_invariant_by_solve(symbol: &BracketPoly, n: u32) -> Result<AbstractInvariant> {
    let d = expand_brackets(symbol);
    let indices = symbol_indices(&d, n)?;
    let coeffs = power_coefficients(n);
    let lift = |a: &[Scalar], j: Index| {
        PBWPoly::from_terms(
            a.iter().enumerate().map(|(e, c)| (slot_monomial(Slot::base(j), e as u16, (n - e as u32) as u16), c.clone())),
        )
    };
    let prefixes: Vec<(u16, u16)> = {
        let mut v: Vec<(u16, u16)> =
            d.terms().map(|(m, _)| m.block(DIST).map(|b| (b.x, b.y)).unwrap_or((0, 0))).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut words: Vec<AbsWord> = Vec::new();
    let mut basis: Vec<PBWPoly> = Vec::new();
    let k = indices.len();
    let total = (n as usize + 1).pow(k as u32);
    for &(a, b) in &prefixes {
        for code in 0..total {
            let mut letters = Vec::with_capacity(k);
            let mut r = code;
            for _ in 0..k {
                letters.push((r % (n as usize + 1)) as u8);
                r /= n as usize + 1;
            }
            letters.reverse();
            let mut p = xy_power(a as u32, b as u32);
            for (t, j) in indices.iter().enumerate() {
                p = &p * &lift(&coeffs[letters[t] as usize], *j);
            }
            basis.push(p);
            words.push(AbsWord { x: a, y: b, letters });
        }
    }
    let sol = solve_combination(&d, &basis).ok_or_else(|| Error::Unsolvable("symbol outside the span".into()))?;
    let mut out = AbstractInvariant::zero(n);
    for (w, c) in words.into_iter().zip(sol.coeffs) {
        out.add_term(w, &c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::is_invariant;
    use crate::bracket::bracket;

    fn sym(s: &str) -> BracketPoly {
        BracketPoly::parse(s).unwrap()
    }

    fn abs(n: u32, w: &[(&str, &str)]) -> AbstractInvariant {
        AbstractInvariant::from_words(n, w).unwrap()
    }

    #[test]
    fn cascade_of_square_bracket() {
        let d2 = symbolic_invariant(&sym("(12)^2"), 2).unwrap();
        let want = abs(2, &[("AC", "1"), ("CA", "1"), ("BB", "-2"), ("BA", "3*h"), ("AB", "-h"), ("AA", "3/2*h^2")]);
        assert_eq!(d2, want);
        assert_eq!(symbolic_invariant_by_solve(&sym("(12)^2"), 2).unwrap(), want);
        let ordered = abs(2, &[("AC", "2"), ("BB", "-2"), ("AB", "-2*h"), ("AA", "3/2*h^2")]);
        assert_eq!(d2.ordered().unwrap(), ordered);
    }

    #[test]
    fn printed_rewritings_agree() {
        let d2 = symbolic_invariant(&sym("(12)^2"), 2).unwrap();
        let variants = [
            abs(2, &[("AC", "1"), ("CA", "1"), ("BB", "-2"), ("AB", "h"), ("BA", "h"), ("AA", "-5/2*h^2")]),
            abs(2, &[("AC", "3/2"), ("CA", "1/2"), ("BB", "-2"), ("AA", "-3/2*h^2")]),
            abs(2, &[("AC", "1"), ("CA", "1"), ("BB", "-2"), ("AB", "-h/4"), ("BA", "9*h/4")]),
        ];
        for v in variants {
            assert!(d2.equivalent(&v).unwrap(), "{v}");
        }
    }

    #[test]
    fn zero_invariants() {
        assert!(symbolic_invariant(&sym("(12)^3"), 3).unwrap().canonical().unwrap().is_zero());
        assert!(symbolic_invariant(&sym("(12)*(13)*(23)"), 2).unwrap().canonical().unwrap().is_zero());
        assert!(symbolic_invariant(&sym("(12)^3"), 3).unwrap().ordered().unwrap().is_zero());
    }

    #[test]
    fn discriminant_on_special_forms() {
        let d2 = symbolic_invariant(&sym("(12)^2"), 2).unwrap();
        let f = Form::extract(&bracket_product_form(&[1, 2]), Side::Right).unwrap();
        let v = d2.instantiate(&f).unwrap();
        assert_eq!(v, (&bracket(1, 2) * &bracket(1, 2)).scale(&Scalar::from_frac(-1, 2)));
        let sq = Form::extract(&bracket_product_form(&[1, 1]), Side::Right).unwrap();
        assert!(d2.instantiate(&sq).unwrap().is_zero());
        let g = Form::extract(&bracket_product_form(&[3, 5]), Side::Right).unwrap();
        assert!(is_invariant(&d2.instantiate(&g).unwrap()));
    }

    #[test]
    fn rejects_inhomogeneous_symbol() {
        assert!(symbolic_invariant(&sym("(12)^2*(13)"), 2).is_err());
    }
}
