//! Affine type Ã_n through affine permutations in window notation, affine
//! pattern containment, and the smoothness decision for Ã_n.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bruhat::Engine;
use crate::classify::Tower;
use crate::error::{invariant, Error, Result};
use crate::gens::GenSet;
use crate::group::Coxeter;
use crate::system::{CoxeterSystem, TypeLabel};

/// A bijection `w` of the integers with `w(i + N) = w(i) + N`, stored as the
/// window `[w(1), ..., w(N)]` with `N = n + 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePermutation {
    window: Vec<i32>,
    len: u32,
}

impl AffinePermutation {
    pub fn window(&self) -> &[i32] {
        &self.window
    }

    pub fn period(&self) -> usize {
        self.window.len()
    }

    /// `w(i)` for any integer `i`.
    pub fn value(&self, i: i64) -> i64 {
        let n = self.window.len() as i64;
        let r = (i - 1).rem_euclid(n);
        let shift = (i - 1).div_euclid(n);
        self.window[r as usize] as i64 + shift * n
    }

    /// `w⁻¹(v)` for any integer `v`.
    pub fn position_of(&self, v: i64) -> i64 {
        let n = self.window.len() as i64;
        let p = self
            .window
            .iter()
            .position(|&x| (x as i64 - v).rem_euclid(n) == 0)
            .expect("window residues are complete");
        let k = (v - self.window[p] as i64) / n;
        p as i64 + 1 + k * n
    }

    /// `max |w(i) - i|` over the window.
    pub fn displacement(&self) -> i64 {
        self.window
            .iter()
            .enumerate()
            .map(|(i, &x)| (x as i64 - (i as i64 + 1)).abs())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.window.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Number of affine inversions: pairs `(i, j)` with `1 <= i <= N`, `i < j`
/// and `w(i) > w(j)`.
pub fn affine_length(window: &[i32]) -> usize {
    let n = window.len() as i64;
    let mut total = 0i64;
    for (i, &wi) in window.iter().enumerate() {
        for (jp, &wj) in window.iter().enumerate() {
            let d = wi as i64 - wj as i64;
            // j = jp + kN with j > i and k >= 0
            let k_min = if jp > i { 0 } else { 1 };
            let ceil = -((-d).div_euclid(n));
            total += (ceil - k_min).max(0);
        }
    }
    total as usize
}

#[derive(Debug, Clone)]
pub struct AffineGroup {
    sys: CoxeterSystem,
    period: usize,
}

impl AffineGroup {
    pub fn new(n: usize) -> Result<Self> {
        let sys = CoxeterSystem::build(TypeLabel::AffineA, n)?;
        Ok(AffineGroup { sys, period: n + 1 })
    }

    /// Rank `n` of Ã_n.
    pub fn rank(&self) -> usize {
        self.period - 1
    }

    /// Validates a window: complete residues mod `N` and `Σ (w(i) - i) = 0`.
    pub fn from_window(&self, window: &[i32]) -> Result<AffinePermutation> {
        let n = self.period as i32;
        let err = |reason: &str| Error::Parse {
            what: "affine window",
            input: format!("{window:?}"),
            reason: reason.to_string(),
        };
        if window.len() != self.period {
            return Err(err("window length must be n + 1"));
        }
        let mut seen = vec![false; self.period];
        for &x in window {
            let r = x.rem_euclid(n) as usize;
            if std::mem::replace(&mut seen[r], true) {
                return Err(err("residues mod n + 1 repeat"));
            }
        }
        let shift: i64 = window
            .iter()
            .enumerate()
            .map(|(i, &x)| x as i64 - (i as i64 + 1))
            .sum();
        if shift != 0 {
            return Err(err("window does not sum to 1 + ... + (n + 1)"));
        }
        Ok(AffinePermutation {
            window: window.to_vec(),
            len: affine_length(window) as u32,
        })
    }

    /// Parses `"[2,1,3]"` or `"2,1,3"`.
    pub fn parse_window(&self, text: &str) -> Result<AffinePermutation> {
        let t = text.trim().trim_start_matches('[').trim_end_matches(']');
        let window: Vec<i32> = t
            .split(',')
            .map(|p| {
                p.trim().parse().map_err(|_| Error::Parse {
                    what: "affine window",
                    input: text.to_string(),
                    reason: format!("{p:?} is not an integer"),
                })
            })
            .collect::<Result<_>>()?;
        self.from_window(&window)
    }

    /// Product of a word, with the inversion count checked against the
    /// length of the greedy reduced word.
    pub fn from_word_checked(&self, word: &[usize]) -> Result<AffinePermutation> {
        let w = self.try_from_word(word)?;
        let counted = affine_length(&w.window);
        let reduced = self.canonical_word(&w).len();
        if counted != reduced || counted != w.len as usize {
            return Err(invariant(format!(
                "affine length of {w} is {counted} but its reduced word has length {reduced}"
            )));
        }
        Ok(w)
    }

    /// Embeds a finite permutation of `1..=N` (an element of the finite
    /// parabolic generated by `s_1..s_n`).
    pub fn from_finite(&self, perm: &[usize]) -> Result<AffinePermutation> {
        let window: Vec<i32> = perm.iter().map(|&x| x as i32).collect();
        self.from_window(&window)
    }
}

impl Coxeter for AffineGroup {
    type Elem = AffinePermutation;

    fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    fn identity(&self) -> AffinePermutation {
        AffinePermutation {
            window: (1..=self.period as i32).collect(),
            len: 0,
        }
    }

    fn length(&self, w: &AffinePermutation) -> usize {
        w.len as usize
    }

    fn lmul(&self, s: usize, w: &AffinePermutation) -> AffinePermutation {
        let n = self.period as i32;
        let down = self.is_left_descent(w, s);
        let r = s as i32 % n;
        let r1 = (r + 1) % n;
        let window = w
            .window
            .iter()
            .map(|&x| {
                let m = x.rem_euclid(n);
                if m == r {
                    x + 1
                } else if m == r1 {
                    x - 1
                } else {
                    x
                }
            })
            .collect();
        AffinePermutation {
            window,
            len: if down { w.len - 1 } else { w.len + 1 },
        }
    }

    fn rmul(&self, w: &AffinePermutation, s: usize) -> AffinePermutation {
        let n = self.period;
        let down = self.is_right_descent(w, s);
        let mut window = w.window.clone();
        if s == 0 {
            let first = window[0];
            window[0] = window[n - 1] - n as i32;
            window[n - 1] = first + n as i32;
        } else {
            window.swap(s - 1, s);
        }
        AffinePermutation {
            window,
            len: if down { w.len - 1 } else { w.len + 1 },
        }
    }

    fn is_left_descent(&self, w: &AffinePermutation, s: usize) -> bool {
        w.position_of(s as i64) > w.position_of(s as i64 + 1)
    }

    fn is_right_descent(&self, w: &AffinePermutation, s: usize) -> bool {
        w.value(s as i64) > w.value(s as i64 + 1)
    }
}

/// Whether the finite permutation `perm` (one-line, any distinct values)
/// contains `pattern`, by checking every subsequence.
pub fn perm_contains(perm: &[i64], pattern: &[usize]) -> bool {
    fn rec(perm: &[i64], pattern: &[usize], start: usize, chosen: &mut Vec<i64>) -> bool {
        if chosen.len() == pattern.len() {
            return true;
        }
        for i in start..perm.len() {
            chosen.push(perm[i]);
            let k = chosen.len() - 1;
            let consistent = (0..k).all(|a| (chosen[a] < chosen[k]) == (pattern[a] < pattern[k]));
            if consistent && rec(perm, pattern, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    rec(perm, pattern, 0, &mut Vec::new())
}

/// One-line notation of a type-A element given by a word in generator
/// positions `0..n` (right multiplication swaps positions `s`, `s+1`).
pub fn one_line(n_plus_one: usize, word: &[usize]) -> Vec<i64> {
    let mut perm: Vec<i64> = (1..=n_plus_one as i64).collect();
    for &s in word {
        perm.swap(s, s + 1);
    }
    perm
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternVerdict {
    pub contains: bool,
    /// Final horizon `H`: indices searched in `[1, N + H]`.
    pub horizon: i64,
    /// The horizon provably covers every occurrence (patterns whose first
    /// entry exceeds their last, with `H >= 2 max|w(i) - i|`).
    pub certified: bool,
}

const MAX_HORIZON_FACTOR: i64 = 64;

fn occurs_within(w: &AffinePermutation, pattern: &[usize], horizon: i64) -> bool {
    let n = w.period() as i64;
    // i_1 ∈ [1, N] by periodicity; later indices in (i_1, N + H]
    for i1 in 1..=n {
        let seq: Vec<i64> = (i1..=n + horizon).map(|i| w.value(i)).collect();
        let mut chosen = vec![seq[0]];
        if extend(&seq, pattern, 1, &mut chosen) {
            return true;
        }
    }
    false
}

fn extend(seq: &[i64], pattern: &[usize], start: usize, chosen: &mut Vec<i64>) -> bool {
    if chosen.len() == pattern.len() {
        return true;
    }
    for i in start..seq.len() {
        let k = chosen.len();
        let ok = (0..k).all(|a| (chosen[a] < seq[i]) == (pattern[a] < pattern[k]));
        if ok {
            chosen.push(seq[i]);
            if extend(seq, pattern, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Affine pattern containment: integers `i_1 < ... < i_k` with
/// `(w(i_1), ..., w(i_k))` order-isomorphic to `pattern`. The horizon
/// starts at `k·N` and doubles until two consecutive verdicts agree and, for
/// certifiable patterns, it reaches `2 max|w(i) - i|`.
pub fn contains_pattern(w: &AffinePermutation, pattern: &[usize]) -> PatternVerdict {
    let n = w.period() as i64;
    let k = pattern.len() as i64;
    let certifiable = pattern.first() > pattern.last();
    let needed = 2 * w.displacement();
    let mut horizon = k * n;
    let mut prev = occurs_within(w, pattern, horizon);
    loop {
        if prev {
            // an occurrence is a witness at any horizon
            return PatternVerdict {
                contains: true,
                horizon,
                certified: true,
            };
        }
        let next_h = horizon * 2;
        let next = occurs_within(w, pattern, next_h);
        horizon = next_h;
        let stable = next == prev;
        prev = next;
        if next {
            continue;
        }
        if stable && certifiable && horizon >= needed {
            return PatternVerdict {
                contains: false,
                horizon,
                certified: true,
            };
        }
        if stable && (!certifiable || horizon >= MAX_HORIZON_FACTOR * n) {
            return PatternVerdict {
                contains: false,
                horizon,
                certified: false,
            };
        }
    }
}

pub const PATTERN_3412: [usize; 4] = [3, 4, 1, 2];
pub const PATTERN_4231: [usize; 4] = [4, 2, 3, 1];

#[derive(Debug, Clone)]
pub struct AffineVerdict {
    pub rationally_smooth: bool,
    pub contains_3412: PatternVerdict,
    pub contains_4231: PatternVerdict,
    pub avoids_patterns: bool,
    /// Rationally smooth yet containing one of the patterns.
    pub twisted_spiral_operational: bool,
    /// Rationally smooth with a complete tower of smooth fibres.
    pub tower_smooth: bool,
    /// `avoids_patterns ∧ tower_smooth`
    pub smooth: bool,
    /// Almost-maximality relative to `∅`, evaluated for operational twisted
    /// spirals.
    pub almost_maximal: Option<bool>,
    pub tower: Tower<AffinePermutation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRecord {
    pub n: usize,
    pub window: String,
    pub word: String,
    pub length: usize,
    pub rationally_smooth: bool,
    pub avoids_patterns: bool,
    pub twisted_spiral_operational: bool,
    pub tower_smooth: bool,
    pub smooth: bool,
    pub almost_maximal: Option<bool>,
    pub pattern_horizon: i64,
    pub pattern_certified: bool,
}

impl<'g> Engine<'g, AffineGroup> {
    pub fn affine_decide(&self, w: &AffinePermutation) -> Result<AffineVerdict> {
        let verdict = self.decide_smoothness(w, GenSet::EMPTY)?;
        let c3412 = contains_pattern(w, &PATTERN_3412);
        let c4231 = contains_pattern(w, &PATTERN_4231);
        let avoids = !c3412.contains && !c4231.contains;
        let twisted = verdict.rationally_smooth && !avoids;
        let almost_maximal = if twisted {
            Some(self.is_almost_maximal(w, GenSet::EMPTY)?)
        } else {
            None
        };
        Ok(AffineVerdict {
            rationally_smooth: verdict.rationally_smooth,
            contains_3412: c3412,
            contains_4231: c4231,
            avoids_patterns: avoids,
            twisted_spiral_operational: twisted,
            tower_smooth: verdict.smooth,
            smooth: avoids && verdict.smooth,
            almost_maximal,
            tower: verdict.tower,
        })
    }

    pub fn affine_record(&self, w: &AffinePermutation, v: &AffineVerdict) -> AffineRecord {
        AffineRecord {
            n: self.group().rank(),
            window: w.to_string(),
            word: self.format(w),
            length: self.group().length(w),
            rationally_smooth: v.rationally_smooth,
            avoids_patterns: v.avoids_patterns,
            twisted_spiral_operational: v.twisted_spiral_operational,
            tower_smooth: v.tower_smooth,
            smooth: v.smooth,
            almost_maximal: v.almost_maximal,
            pattern_horizon: v.contains_3412.horizon.max(v.contains_4231.horizon),
            pattern_certified: v.contains_3412.certified && v.contains_4231.certified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexed::IndexedGroup;
    use proptest::prelude::*;
    use std::collections::HashMap;

    #[test]
    fn words_to_windows() {
        let g = AffineGroup::new(2).unwrap();
        assert_eq!(g.from_word_checked(&[]).unwrap().window(), &[1, 2, 3]);
        assert_eq!(g.from_word_checked(&[1]).unwrap().window(), &[2, 1, 3]);
        assert_eq!(g.from_word_checked(&[0]).unwrap().window(), &[0, 2, 4]);
        let w = g.from_word_checked(&[1, 2, 1]).unwrap();
        assert_eq!(w.window(), &[3, 2, 1]);
        assert_eq!(affine_length(w.window()), 3);
        assert_eq!(affine_length(&[2, 1, 3]), 1);
        assert!(g.from_window(&[1, 1, 4]).is_err());
        assert!(g.from_window(&[2, 3, 4]).is_err());
        assert_eq!(g.parse_window("[0,2,4]").unwrap(), g.generator(0));
    }

    #[test]
    fn left_and_right_multiplication_agree_with_products() {
        let g = AffineGroup::new(3).unwrap();
        let w = g.from_word(&[0, 2, 1, 3, 0, 2]);
        for s in 0..4 {
            assert_eq!(g.lmul(s, &w), g.multiply(&g.generator(s), &w));
            assert_eq!(g.rmul(&g.lmul(s, &w), s), g.lmul(s, &g.rmul(&w, s)));
        }
    }

    /// Length oracle: BFS distance in the Cayley graph.
    fn bfs_lengths(g: &AffineGroup, max: usize) -> HashMap<AffinePermutation, usize> {
        let mut dist = HashMap::new();
        dist.insert(g.identity(), 0);
        let mut layer = vec![g.identity()];
        for d in 1..=max {
            let mut next = Vec::new();
            for x in &layer {
                for s in 0..g.num_generators() {
                    let y = g.rmul(x, s);
                    if !dist.contains_key(&y) {
                        dist.insert(y.clone(), d);
                        next.push(y);
                    }
                }
            }
            layer = next;
        }
        dist
    }

    #[test]
    fn lengths_match_cayley_distance() {
        for (n, max) in [(1, 10), (2, 10), (3, 8)] {
            let g = AffineGroup::new(n).unwrap();
            for (w, d) in bfs_lengths(&g, max) {
                assert_eq!(affine_length(w.window()), d, "{w}");
                assert_eq!(g.length(&w), d);
                assert_eq!(g.canonical_word(&w).len(), d);
            }
        }
    }

    #[test]
    fn descents_match_lengths() {
        let g = AffineGroup::new(2).unwrap();
        for w in g.enumerate(Some(7)).unwrap() {
            for s in 0..3 {
                let l = affine_length(w.window());
                let left = affine_length(g.lmul(s, &w).window());
                let right = affine_length(g.rmul(&w, s).window());
                assert_eq!(g.is_left_descent(&w, s), left < l);
                assert_eq!(g.is_right_descent(&w, s), right < l);
            }
        }
    }

    #[test]
    fn finite_pattern_oracle() {
        assert!(perm_contains(&[4, 2, 3, 1], &PATTERN_4231));
        assert!(!perm_contains(&[4, 2, 3, 1], &PATTERN_3412));
        assert!(perm_contains(&[3, 4, 1, 2], &PATTERN_3412));
        assert!(!perm_contains(&[1, 2, 3, 4], &PATTERN_3412));
        assert!(perm_contains(&[5, 3, 1, 4, 2], &PATTERN_4231));
    }

    #[test]
    fn affine_pattern_examples() {
        let g = AffineGroup::new(2).unwrap();
        assert!(!contains_pattern(&g.identity(), &PATTERN_4231).contains);
        let w = g.from_window(&[3, 2, 1]).unwrap();
        let v = contains_pattern(&w, &PATTERN_3412);
        assert!(!v.contains && v.certified);
        let g3 = AffineGroup::new(3).unwrap();
        let w = g3.from_finite(&[4, 2, 3, 1]).unwrap();
        assert!(contains_pattern(&w, &PATTERN_4231).contains);
    }

    #[test]
    fn finite_embeddings_match_finite_oracle() {
        // elements of the finite parabolic s_1..s_n are ordinary permutations
        let a = IndexedGroup::parse("A3").unwrap();
        let g = AffineGroup::new(3).unwrap();
        for w in a.elements() {
            let word = a.canonical_word(&w);
            let perm = one_line(4, &word);
            let shifted: Vec<usize> = word.iter().map(|s| s + 1).collect();
            let aff = g.from_word(&shifted);
            let window: Vec<i64> = aff.window().iter().map(|&x| x as i64).collect();
            assert_eq!(window, perm);
            for p in [PATTERN_3412, PATTERN_4231] {
                assert_eq!(contains_pattern(&aff, &p).contains, perm_contains(&perm, &p));
            }
        }
    }

    #[test]
    fn decide_examples() {
        let g = AffineGroup::new(3).unwrap();
        let e = Engine::new(&g);
        let w = g.from_finite(&[4, 2, 3, 1]).unwrap();
        let v = e.affine_decide(&w).unwrap();
        assert!(!v.rationally_smooth && !v.avoids_patterns && !v.smooth);
        let v = e.affine_decide(&g.identity()).unwrap();
        assert!(v.rationally_smooth && v.avoids_patterns && v.smooth);
    }

    fn shift_rotate(w: &AffinePermutation) -> Vec<i32> {
        // conjugation by the rotation i ↦ i + 1
        let n = w.period() as i64;
        (1..=n).map(|i| (w.value(i - 1) + 1) as i32).collect()
    }

    proptest! {
        #[test]
        fn window_invariants_hold(word in proptest::collection::vec(0usize..4, 0..20)) {
            let g = AffineGroup::new(3).unwrap();
            let w = g.from_word(&word);
            prop_assert!(g.from_window(w.window()).is_ok());
            prop_assert_eq!(g.length(&w), affine_length(w.window()));
        }

        #[test]
        fn containment_is_rotation_invariant(word in proptest::collection::vec(0usize..3, 0..12)) {
            let g = AffineGroup::new(2).unwrap();
            let w = g.from_word(&word);
            let r = g.from_window(&shift_rotate(&w)).unwrap();
            prop_assert_eq!(g.length(&r), g.length(&w));
            for p in [PATTERN_3412, PATTERN_4231] {
                prop_assert_eq!(contains_pattern(&w, &p).contains, contains_pattern(&r, &p).contains);
            }
        }
    }
}
