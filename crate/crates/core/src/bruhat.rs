//! Bruhat order, lower intervals and relative Poincaré polynomials.

use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::gens::GenSet;
use crate::group::Coxeter;

/// Integer polynomial in `t`; `coeffs[k]` is the coefficient of `t^k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![1] }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    /// `t^d P(1/t) = P(t)`.
    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Coefficient-wise `c_i <= c_{d-i}` for `i <= d/2`.
    pub fn is_bottom_heavy(&self) -> bool {
        let d = self.coeffs.len();
        (0..d / 2).all(|i| self.coeffs[i] <= self.coeffs[d - 1 - i])
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Polynomial::new(Vec::new());
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("t")?,
                (1, c) => write!(f, "{c}t")?,
                (k, 1) => write!(f, "t^{k}")?,
                (k, c) => write!(f, "{c}t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// `[e, top]`, members sorted.
#[derive(Debug, Clone)]
pub struct BruhatInterval<E> {
    pub top: E,
    pub members: Arc<Vec<E>>,
}

impl<E: Ord> BruhatInterval<E> {
    pub fn contains(&self, x: &E) -> bool {
        self.members.binary_search(x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Default bound on the total number of interval members held in the memo.
pub const DEFAULT_MEMO_CAP: usize = 20_000_000;

/// Memoizing front end for the order computations on one group. Safe to
/// share across threads.
pub struct Engine<'g, G: Coxeter> {
    g: &'g G,
    intervals: DashMap<G::Elem, Arc<Vec<G::Elem>>>,
    longest: DashMap<GenSet, G::Elem>,
    cached_members: AtomicUsize,
    cap: usize,
}

impl<'g, G: Coxeter> Engine<'g, G> {
    pub fn new(g: &'g G) -> Self {
        Self::with_memo_cap(g, DEFAULT_MEMO_CAP)
    }

    pub fn with_memo_cap(g: &'g G, cap: usize) -> Self {
        Engine {
            g,
            intervals: DashMap::new(),
            longest: DashMap::new(),
            cached_members: AtomicUsize::new(0),
            cap,
        }
    }

    pub fn group(&self) -> &'g G {
        self.g
    }

    /// Memoized longest element of `W_K`.
    pub fn longest(&self, k: GenSet) -> Result<G::Elem> {
        if let Some(w) = self.longest.get(&k) {
            return Ok(w.clone());
        }
        let w = self.g.longest_element(k)?;
        self.longest.insert(k, w.clone());
        Ok(w)
    }

    /// Seeds the longest-element memo, e.g. from a cache.
    pub fn seed_longest(&self, k: GenSet, w: G::Elem) {
        self.longest.insert(k, w);
    }

    /// `x <= w` by the lifting property: for `s ∈ D_L(w)`, `x <= w` iff
    /// `sx <= sw` when `s ∈ D_L(x)`, and iff `x <= sw` otherwise.
    pub fn bruhat_leq(&self, x: &G::Elem, w: &G::Elem) -> bool {
        let g = self.g;
        let mut x = x.clone();
        let mut w = w.clone();
        loop {
            let (lx, lw) = (g.length(&x), g.length(&w));
            if lx > lw {
                return false;
            }
            if lx == lw {
                return x == w;
            }
            if lx == 0 {
                return true;
            }
            let s = g
                .left_descents(&w)
                .first()
                .expect("element of positive length has a descent");
            if g.is_left_descent(&x, s) {
                x = g.lmul(s, &x);
            }
            w = g.lmul(s, &w);
        }
    }

    /// `x <= w` by membership in the subword-generated interval `[e, w]`.
    pub fn bruhat_leq_subword(&self, x: &G::Elem, w: &G::Elem) -> bool {
        self.g.length(x) <= self.g.length(w) && self.lower_interval(w).contains(x)
    }

    /// All elements obtained as subwords of the canonical reduced word of
    /// `w`. Built as `[e, w] = [e, sw] ∪ s[e, sw]` for the first letter `s`.
    pub fn lower_interval(&self, w: &G::Elem) -> BruhatInterval<G::Elem> {
        BruhatInterval {
            top: w.clone(),
            members: self.interval_members(w),
        }
    }

    fn interval_members(&self, w: &G::Elem) -> Arc<Vec<G::Elem>> {
        if let Some(hit) = self.intervals.get(w) {
            return hit.clone();
        }
        let g = self.g;
        // walk down the canonical word to the longest cached suffix
        let word = g.canonical_word(w);
        let mut suffixes = Vec::with_capacity(word.len() + 1);
        let mut cur = w.clone();
        let mut base: Option<Arc<Vec<G::Elem>>> = None;
        for &s in &word {
            suffixes.push((s, cur.clone()));
            cur = g.lmul(s, &cur);
            if let Some(hit) = self.intervals.get(&cur) {
                base = Some(hit.clone());
                break;
            }
        }
        let mut members = base.unwrap_or_else(|| Arc::new(vec![g.identity()]));
        for (s, top) in suffixes.into_iter().rev() {
            let mut set: HashSet<G::Elem> = members.iter().cloned().collect();
            for x in members.iter() {
                set.insert(g.lmul(s, x));
            }
            let mut v: Vec<_> = set.into_iter().collect();
            v.sort();
            members = Arc::new(v);
            self.remember(top, members.clone());
        }
        members
    }

    fn remember(&self, w: G::Elem, members: Arc<Vec<G::Elem>>) {
        let size = members.len();
        if self.cached_members.fetch_add(size, Ordering::Relaxed) + size <= self.cap {
            self.intervals.insert(w, members);
        } else {
            self.cached_members.fetch_sub(size, Ordering::Relaxed);
        }
    }

    fn require_min_rep(&self, w: &G::Elem, j: GenSet) -> Result<()> {
        if self.g.is_min_rep(w, j) {
            Ok(())
        } else {
            Err(Error::NotMinimalRep {
                word: self.format(w),
                j: self.g.system().format_set(j),
            })
        }
    }

    pub fn format(&self, w: &G::Elem) -> String {
        let word = self.g.canonical_word(w);
        if word.is_empty() {
            "e".to_string()
        } else {
            self.g.system().format_word(&word)
        }
    }

    /// `P_w^J(t) = Σ_{x ∈ [e,w] ∩ W^J} t^{ℓ(x)}`.
    pub fn poincare(&self, w: &G::Elem, j: GenSet) -> Result<Polynomial> {
        self.require_min_rep(w, j)?;
        Ok(self.count_by_length(w, |x| self.g.is_min_rep(x, j)))
    }

    /// `ᴶP_w(t)`, summing over `[e,w] ∩ ᴶW`; requires `w ∈ ᴶW`.
    pub fn left_poincare(&self, w: &G::Elem, j: GenSet) -> Result<Polynomial> {
        if !self.g.is_left_min_rep(w, j) {
            return Err(Error::NotMinimalRep {
                word: self.format(w),
                j: self.g.system().format_set(j),
            });
        }
        Ok(self.count_by_length(w, |x| self.g.is_left_min_rep(x, j)))
    }

    /// Generating function of `[e,w] ∩ W^J_K` by length.
    pub fn poincare_in(&self, w: &G::Elem, j: GenSet, k: GenSet) -> Result<Polynomial> {
        self.require_min_rep(w, j)?;
        Ok(self.count_by_length(w, |x| {
            self.g.is_min_rep(x, j) && self.g.support(x).is_subset(k)
        }))
    }

    fn count_by_length<F: Fn(&G::Elem) -> bool>(&self, w: &G::Elem, keep: F) -> Polynomial {
        let mut coeffs = vec![0u64; self.g.length(w) + 1];
        for x in self.interval_members(w).iter() {
            if keep(x) {
                coeffs[self.g.length(x)] += 1;
            }
        }
        Polynomial::new(coeffs)
    }

    /// Carrell-Peterson: `X^J(w)` is rationally smooth iff `P_w^J` is
    /// palindromic.
    pub fn is_rationally_smooth(&self, w: &G::Elem, j: GenSet) -> Result<bool> {
        Ok(self.poincare(w, j)?.is_palindromic())
    }

    /// The unique Bruhat-maximal element of `[e,w] ∩ W^J_K`.
    pub fn max_coset_element(&self, w: &G::Elem, j: GenSet, k: GenSet) -> Result<G::Elem> {
        if !j.is_subset(k) {
            return Err(Error::NotSubset {
                inner: self.g.system().format_set(j),
                outer: self.g.system().format_set(k),
            });
        }
        self.require_min_rep(w, j)?;
        let g = self.g;
        let members = self.interval_members(w);
        let candidates: Vec<&G::Elem> = members
            .iter()
            .filter(|x| g.is_min_rep(x, j) && g.support(x).is_subset(k))
            .collect();
        let top = candidates
            .iter()
            .max_by_key(|x| g.length(x))
            .expect("identity is always a candidate");
        for x in &candidates {
            if !self.bruhat_leq(x, top) {
                return Err(invariant(format!(
                    "[e,{}] ∩ W^J_K has no unique maximum: {} is not below {}",
                    self.format(w),
                    self.format(x),
                    self.format(top)
                )));
            }
        }
        Ok((*top).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexed::IndexedGroup;
    use crate::weyl::WeylGroup;
    use proptest::prelude::*;

    fn poly(c: &[u64]) -> Polynomial {
        Polynomial::new(c.to_vec())
    }

    /// Interval oracle: evaluate all `2^ℓ` subwords of the canonical word.
    fn subword_oracle<G: Coxeter>(g: &G, w: &G::Elem) -> Vec<G::Elem> {
        let word = g.canonical_word(w);
        let mut set = HashSet::new();
        for mask in 0u32..(1 << word.len()) {
            let sub: Vec<usize> = word
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &s)| s)
                .collect();
            set.insert(g.from_word(&sub));
        }
        let mut v: Vec<_> = set.into_iter().collect();
        v.sort();
        v
    }

    #[test]
    fn polynomial_basics() {
        let p = poly(&[1, 3, 5, 6, 4, 1]);
        assert!(!p.is_palindromic());
        assert!(poly(&[1]).is_palindromic());
        assert!(poly(&[1, 2, 1]).is_palindromic());
        assert_eq!(p.eval(1), 20);
        assert_eq!(p.to_string(), "t^5+4t^4+6t^3+5t^2+3t+1");
        assert_eq!(&poly(&[1, 1]) * &poly(&[1, 1]), poly(&[1, 2, 1]));
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1,3,5,6,4,1]");
        assert_eq!(poly(&[1, 0, 0]).degree(), Some(0));
    }

    #[test]
    fn worked_example_polynomials() {
        let g = IndexedGroup::parse("A3").unwrap();
        let e = Engine::new(&g);
        let w = g.element("1,3,2,3,1").unwrap();
        let j = GenSet::from_iter([0, 2]);
        assert_eq!(e.poincare(&w, GenSet::EMPTY).unwrap(), poly(&[1, 3, 5, 6, 4, 1]));
        let v = g.element("1,3,2").unwrap();
        assert_eq!(e.poincare(&v, j).unwrap(), poly(&[1, 1, 2, 1]));
        let u = g.element("3,1").unwrap();
        assert_eq!(e.poincare(&u, GenSet::EMPTY).unwrap(), poly(&[1, 2, 1]));
        let x = g.element("1,3,2,1").unwrap();
        assert_eq!(e.poincare(&x, GenSet::EMPTY).unwrap(), poly(&[1, 3, 4, 3, 1]));
        assert_eq!(e.lower_interval(&w).len(), 20);
        assert_eq!(e.poincare(&g.identity(), j).unwrap(), Polynomial::one());
        assert!(e.poincare(&w, j).is_err());
    }

    #[test]
    fn leq_examples() {
        let g = IndexedGroup::parse("A2").unwrap();
        let e = Engine::new(&g);
        let a = g.element("1,2").unwrap();
        let b = g.element("2,1").unwrap();
        assert!(!e.bruhat_leq(&a, &b) && !e.bruhat_leq(&b, &a));
        assert!(e.bruhat_leq(&g.identity(), &a));
        assert_eq!(e.lower_interval(&g.longest()).len(), 6);
        let g3 = IndexedGroup::parse("A3").unwrap();
        let e3 = Engine::new(&g3);
        let u = g3.element("3,1").unwrap();
        let w = g3.element("1,3,2,3,1").unwrap();
        assert!(e3.bruhat_leq(&u, &w) && e3.bruhat_leq_subword(&u, &w));
    }

    #[test]
    fn routes_agree_exhaustively() {
        for name in ["A3", "B3", "G2"] {
            let g = IndexedGroup::parse(name).unwrap();
            let e = Engine::new(&g);
            for w in g.elements() {
                let oracle = subword_oracle(&g, &w);
                assert_eq!(*e.lower_interval(&w).members, oracle, "{name}");
                for x in g.elements() {
                    assert_eq!(e.bruhat_leq(&x, &w), e.bruhat_leq_subword(&x, &w));
                }
                assert_eq!(
                    e.poincare(&w, GenSet::EMPTY).unwrap().eval(1) as usize,
                    oracle.len()
                );
            }
        }
    }

    #[test]
    fn intervals_are_monotone_and_closed() {
        let g = IndexedGroup::parse("B3").unwrap();
        let e = Engine::new(&g);
        for w in g.elements() {
            let iv = e.lower_interval(&w);
            for x in iv.members.iter() {
                assert!(e.bruhat_leq(x, &w));
                let sub = e.lower_interval(x);
                assert!(sub.members.iter().all(|y| iv.contains(y)));
            }
        }
    }

    #[test]
    fn weyl_and_indexed_intervals_agree() {
        let weyl = WeylGroup::parse("C3").unwrap();
        let (g, elems) = IndexedGroup::from_group(&weyl).unwrap();
        let ew = Engine::new(&weyl);
        let eg = Engine::new(&g);
        for (i, w) in elems.iter().enumerate() {
            let i = i as u32;
            for j in weyl.all_generators().subsets() {
                if weyl.is_min_rep(w, j) {
                    assert_eq!(ew.poincare(w, j).unwrap(), eg.poincare(&i, j).unwrap());
                }
            }
        }
    }

    #[test]
    fn longest_quotients_are_palindromic() {
        for name in ["A4", "B3", "C4", "D4", "F4", "G2"] {
            let g = IndexedGroup::parse(name).unwrap();
            let e = Engine::new(&g);
            for j in g.all_generators().subsets() {
                let top = g.min_coset_rep(&g.longest(), j);
                assert!(e.is_rationally_smooth(&top, j).unwrap(), "{name} {j:?}");
            }
        }
    }

    #[test]
    fn coefficients_are_bottom_heavy() {
        for name in ["A3", "B3", "G2"] {
            let g = IndexedGroup::parse(name).unwrap();
            let e = Engine::new(&g);
            for j in g.all_generators().subsets() {
                for w in g.elements().filter(|w| g.is_min_rep(w, j)) {
                    assert!(e.poincare(&w, j).unwrap().is_bottom_heavy());
                }
            }
        }
    }

    #[test]
    fn max_coset_examples() {
        let g = IndexedGroup::parse("A3").unwrap();
        let e = Engine::new(&g);
        let k = GenSet::from_iter([0, 2]);
        let w = g.element("1,3,2,3,1").unwrap();
        assert_eq!(e.max_coset_element(&w, GenSet::EMPTY, k).unwrap(), g.element("1,3").unwrap());
        let x = g.element("1,3,2,1").unwrap();
        assert_eq!(e.max_coset_element(&x, GenSet::EMPTY, k).unwrap(), g.element("1,3").unwrap());
        assert_eq!(e.max_coset_element(&x, k, k).is_err(), !g.is_min_rep(&x, k));
        assert_eq!(e.max_coset_element(&w, GenSet::EMPTY, GenSet::EMPTY).unwrap(), 0);
    }

    #[test]
    fn memo_cap_is_respected() {
        let g = IndexedGroup::parse("A3").unwrap();
        let e = Engine::with_memo_cap(&g, 0);
        let w = g.element("1,3,2,3,1").unwrap();
        assert_eq!(e.lower_interval(&w).len(), 20);
        assert!(e.intervals.is_empty());
    }

    proptest! {
        #[test]
        fn f4_routes_agree(a in proptest::collection::vec(0usize..4, 0..16),
                           b in proptest::collection::vec(0usize..4, 0..24)) {
            let g = WeylGroup::parse("F4").unwrap();
            let e = Engine::new(&g);
            let x = g.from_word(&a);
            let w = g.from_word(&b);
            prop_assert_eq!(e.bruhat_leq(&x, &w), e.bruhat_leq_subword(&x, &w));
        }
    }
}
