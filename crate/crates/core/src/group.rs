//! The `Coxeter` trait: the operations every group model provides, plus the
//! word- and parabolic-level algorithms written once on top of them.

use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::gens::{GenSet, Side};
use crate::system::CoxeterSystem;

pub trait Coxeter: Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn system(&self) -> &CoxeterSystem;
    fn identity(&self) -> Self::Elem;
    fn length(&self, w: &Self::Elem) -> usize;
    /// `s · w`
    fn lmul(&self, s: usize, w: &Self::Elem) -> Self::Elem;
    /// `w · s`
    fn rmul(&self, w: &Self::Elem, s: usize) -> Self::Elem;
    fn is_left_descent(&self, w: &Self::Elem, s: usize) -> bool;
    fn is_right_descent(&self, w: &Self::Elem, s: usize) -> bool;

    fn num_generators(&self) -> usize {
        self.system().num_generators()
    }

    fn all_generators(&self) -> GenSet {
        self.system().all()
    }

    fn generator(&self, s: usize) -> Self::Elem {
        self.lmul(s, &self.identity())
    }

    fn is_identity(&self, w: &Self::Elem) -> bool {
        self.length(w) == 0
    }

    /// Product of the letters of `word`, left to right.
    fn from_word(&self, word: &[usize]) -> Self::Elem {
        word.iter()
            .fold(self.identity(), |acc, &s| self.rmul(&acc, s))
    }

    /// Checked version of [`Coxeter::from_word`] for user input.
    fn try_from_word(&self, word: &[usize]) -> Result<Self::Elem> {
        let n = self.num_generators();
        if let Some(&bad) = word.iter().find(|&&s| s >= n) {
            return Err(Error::GeneratorOutOfRange(bad));
        }
        Ok(self.from_word(word))
    }

    /// Lexicographically minimal reduced word, built by repeatedly removing
    /// the smallest left descent.
    fn canonical_word(&self, w: &Self::Elem) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.length(w));
        let mut cur = w.clone();
        while !self.is_identity(&cur) {
            let s = (0..self.num_generators())
                .find(|&s| self.is_left_descent(&cur, s))
                .expect("non-identity element has a left descent");
            out.push(s);
            cur = self.lmul(s, &cur);
        }
        out
    }

    fn descents(&self, w: &Self::Elem, side: Side) -> GenSet {
        (0..self.num_generators())
            .filter(|&s| match side {
                Side::Left => self.is_left_descent(w, s),
                Side::Right => self.is_right_descent(w, s),
            })
            .collect()
    }

    fn left_descents(&self, w: &Self::Elem) -> GenSet {
        self.descents(w, Side::Left)
    }

    fn right_descents(&self, w: &Self::Elem) -> GenSet {
        self.descents(w, Side::Right)
    }

    /// Generators appearing in any (equivalently every) reduced word.
    fn support(&self, w: &Self::Elem) -> GenSet {
        self.canonical_word(w).into_iter().collect()
    }

    fn inverse(&self, w: &Self::Elem) -> Self::Elem {
        let mut word = self.canonical_word(w);
        word.reverse();
        self.from_word(&word)
    }

    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.canonical_word(y)
            .into_iter()
            .fold(x.clone(), |acc, s| self.rmul(&acc, s))
    }

    fn is_reduced(&self, word: &[usize]) -> bool {
        self.length(&self.from_word(word)) == word.len()
    }

    /// `w ∈ W^J`: no right descent lies in `J`.
    fn is_min_rep(&self, w: &Self::Elem, j: GenSet) -> bool {
        j.iter().all(|s| !self.is_right_descent(w, s))
    }

    /// `w ∈ ᴶW`: no left descent lies in `J`.
    fn is_left_min_rep(&self, w: &Self::Elem, j: GenSet) -> bool {
        j.iter().all(|s| !self.is_left_descent(w, s))
    }

    /// Right side: `w = v·u` with `v ∈ W^K`, `u ∈ W_K`. Left side:
    /// `w = u·v` with `u ∈ W_K`, `v ∈ ᴷW`. Returns `(v, u)` in both cases.
    fn parabolic_decompose(
        &self,
        w: &Self::Elem,
        k: GenSet,
        side: Side,
    ) -> (Self::Elem, Self::Elem) {
        let mut v = w.clone();
        let mut u = self.identity();
        match side {
            Side::Right => {
                while let Some(s) = k.iter().find(|&s| self.is_right_descent(&v, s)) {
                    v = self.rmul(&v, s);
                    u = self.lmul(s, &u);
                }
            }
            Side::Left => {
                while let Some(s) = k.iter().find(|&s| self.is_left_descent(&v, s)) {
                    v = self.lmul(s, &v);
                    u = self.rmul(&u, s);
                }
            }
        }
        (v, u)
    }

    /// Minimal-length representative of `w W_J`.
    fn min_coset_rep(&self, w: &Self::Elem, j: GenSet) -> Self::Elem {
        self.parabolic_decompose(w, j, Side::Right).0
    }

    /// Longest element of `W_K`.
    fn longest_element(&self, k: GenSet) -> Result<Self::Elem> {
        if !self.system().parabolic_is_finite(k) {
            return Err(Error::InfiniteParabolic(self.system().format_set(k)));
        }
        let mut w = self.identity();
        while let Some(s) = k.iter().find(|&s| !self.is_right_descent(&w, s)) {
            w = self.rmul(&w, s);
        }
        Ok(w)
    }

    /// `W^J_K = W^J ∩ W_K`, breadth-first by length, ties broken by
    /// canonical word.
    fn minimal_coset_reps(&self, k: GenSet, j: GenSet) -> Result<Vec<Self::Elem>> {
        if !j.is_subset(k) {
            return Err(Error::NotSubset {
                inner: self.system().format_set(j),
                outer: self.system().format_set(k),
            });
        }
        if !self.system().parabolic_is_finite(k) {
            return Err(Error::InfiniteParabolic(self.system().format_set(k)));
        }
        Ok(self.layers(k, |w| self.is_min_rep(w, j), None)
            .into_iter()
            .flatten()
            .collect())
    }

    /// Elements of `W_K` passing `keep`, layered by length, reached by left
    /// multiplication from shorter kept elements. `keep` must be closed
    /// under removing left descents.
    fn layers<F>(&self, k: GenSet, keep: F, max_len: Option<usize>) -> Vec<Vec<Self::Elem>>
    where
        F: Fn(&Self::Elem) -> bool,
    {
        let mut out = vec![vec![self.identity()]];
        loop {
            if max_len.is_some_and(|m| out.len() > m) {
                break;
            }
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for x in out.last().unwrap() {
                for s in k.iter() {
                    if self.is_left_descent(x, s) {
                        continue;
                    }
                    let y = self.lmul(s, x);
                    if keep(&y) && seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            let mut keyed: Vec<_> = next
                .into_iter()
                .map(|y| (self.canonical_word(&y), y))
                .collect();
            keyed.sort();
            out.push(keyed.into_iter().map(|(_, y)| y).collect());
        }
        out
    }

    /// All elements of `W` (or of length at most `max_len`), ordered by
    /// length and then canonical word.
    fn enumerate(&self, max_len: Option<usize>) -> Result<Vec<Self::Elem>> {
        if max_len.is_none() && self.system().is_affine() {
            return Err(Error::InfiniteParabolic(
                self.system().format_set(self.all_generators()),
            ));
        }
        Ok(self
            .layers(self.all_generators(), |_| true, max_len)
            .into_iter()
            .flatten()
            .collect())
    }
}

/// Applies a generator relabelling (`map[s]` is the image of `s`) to a word.
pub fn relabel_word(word: &[usize], map: &[usize]) -> Vec<usize> {
    word.iter().map(|&s| map[s]).collect()
}
