//! A finite Coxeter group flattened into multiplication tables. Elements are
//! indices ordered by length and then canonical word, so index 0 is the
//! identity and the last index is the longest element.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::gens::GenSet;
use crate::group::Coxeter;
use crate::system::{CoxeterSystem, SystemKey};
use crate::weyl::WeylGroup;

/// Raw tables; the serialized form used by the enumeration cache.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTables {
    pub system: SystemKey,
    pub len: Vec<u16>,
    /// `lmul[i * n + s]` is the index of `s · w_i`.
    pub lmul: Vec<u32>,
    /// `rmul[i * n + s]` is the index of `w_i · s`.
    pub rmul: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct IndexedGroup {
    sys: CoxeterSystem,
    n: usize,
    tables: GroupTables,
    ldesc: Vec<u32>,
    rdesc: Vec<u32>,
    support: Vec<u32>,
    inv: Vec<u32>,
}

impl IndexedGroup {
    /// Enumerates a finite group model and tabulates it.
    pub fn from_group<G: Coxeter>(g: &G) -> Result<(Self, Vec<G::Elem>)> {
        let elems = g.enumerate(None)?;
        let n = g.num_generators();
        let index: HashMap<&G::Elem, u32> =
            elems.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let mut lmul = Vec::with_capacity(elems.len() * n);
        let mut rmul = Vec::with_capacity(elems.len() * n);
        for e in &elems {
            for s in 0..n {
                lmul.push(index[&g.lmul(s, e)]);
                rmul.push(index[&g.rmul(e, s)]);
            }
        }
        let tables = GroupTables {
            system: g.system().key(),
            len: elems.iter().map(|e| g.length(e) as u16).collect(),
            lmul,
            rmul,
        };
        Ok((Self::from_tables(tables)?, elems))
    }

    pub fn from_weyl(g: &WeylGroup) -> Result<Self> {
        Ok(Self::from_group(g)?.0)
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::from_weyl(&WeylGroup::parse(name)?)
    }

    /// Rebuilds the group from raw tables, checking that they describe a
    /// length-graded Coxeter group presentation consistently.
    pub fn from_tables(tables: GroupTables) -> Result<Self> {
        let sys = CoxeterSystem::from_key(tables.system)?;
        if sys.is_affine() {
            return Err(Error::InfiniteParabolic(sys.format_set(sys.all())));
        }
        let n = sys.num_generators();
        let size = tables.len.len();
        if size == 0 || tables.lmul.len() != size * n || tables.rmul.len() != size * n {
            return Err(invariant("table dimensions disagree"));
        }
        if tables.len[0] != 0 || tables.len.windows(2).any(|p| p[0] > p[1]) {
            return Err(invariant("elements are not sorted by length"));
        }
        let mut ldesc = vec![0u32; size];
        let mut rdesc = vec![0u32; size];
        for i in 0..size {
            for s in 0..n {
                for (table, desc) in [(&tables.lmul, &mut ldesc), (&tables.rmul, &mut rdesc)] {
                    let j = table[i * n + s] as usize;
                    if j >= size || table[j * n + s] as usize != i {
                        return Err(invariant("generator table is not an involution"));
                    }
                    let (li, lj) = (tables.len[i] as i32, tables.len[j] as i32);
                    if (li - lj).abs() != 1 {
                        return Err(invariant("length does not change by one"));
                    }
                    if lj < li {
                        desc[i] |= 1 << s;
                    }
                }
            }
        }
        let mut support = vec![0u32; size];
        let mut inv = vec![0u32; size];
        for i in 1..size {
            let s = ldesc[i].trailing_zeros() as usize;
            let rest = tables.lmul[i * n + s] as usize;
            support[i] = support[rest] | (1 << s);
            // (s · x)⁻¹ = x⁻¹ · s
            inv[i] = tables.rmul[inv[rest] as usize * n + s];
        }
        Ok(IndexedGroup {
            sys,
            n,
            tables,
            ldesc,
            rdesc,
            support,
            inv,
        })
    }

    pub fn tables(&self) -> &GroupTables {
        &self.tables
    }

    pub fn size(&self) -> usize {
        self.tables.len.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size() as u32
    }

    pub fn longest(&self) -> u32 {
        self.size() as u32 - 1
    }

    /// Parses a word in label notation.
    pub fn element(&self, word: &str) -> Result<u32> {
        Ok(self.from_word(&self.sys.parse_word(word)?))
    }

    pub fn format(&self, w: u32) -> String {
        let word = self.canonical_word(&w);
        if word.is_empty() {
            "e".to_string()
        } else {
            self.sys.format_word(&word)
        }
    }
}

impl Coxeter for IndexedGroup {
    type Elem = u32;

    fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    fn identity(&self) -> u32 {
        0
    }

    fn length(&self, w: &u32) -> usize {
        self.tables.len[*w as usize] as usize
    }

    fn lmul(&self, s: usize, w: &u32) -> u32 {
        self.tables.lmul[*w as usize * self.n + s]
    }

    fn rmul(&self, w: &u32, s: usize) -> u32 {
        self.tables.rmul[*w as usize * self.n + s]
    }

    fn is_left_descent(&self, w: &u32, s: usize) -> bool {
        self.ldesc[*w as usize] & (1 << s) != 0
    }

    fn is_right_descent(&self, w: &u32, s: usize) -> bool {
        self.rdesc[*w as usize] & (1 << s) != 0
    }

    fn left_descents(&self, w: &u32) -> GenSet {
        GenSet::from_bits(self.ldesc[*w as usize])
    }

    fn right_descents(&self, w: &u32) -> GenSet {
        GenSet::from_bits(self.rdesc[*w as usize])
    }

    fn support(&self, w: &u32) -> GenSet {
        GenSet::from_bits(self.support[*w as usize])
    }

    fn inverse(&self, w: &u32) -> u32 {
        self.inv[*w as usize]
    }

    fn is_min_rep(&self, w: &u32, j: GenSet) -> bool {
        self.rdesc[*w as usize] & j.bits() == 0
    }

    fn is_left_min_rep(&self, w: &u32, j: GenSet) -> bool {
        self.ldesc[*w as usize] & j.bits() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::Side;

    #[test]
    fn tables_agree_with_matrix_model() {
        for name in ["A3", "B3", "G2", "D4"] {
            let weyl = WeylGroup::parse(name).unwrap();
            let (g, elems) = IndexedGroup::from_group(&weyl).unwrap();
            assert_eq!(g.identity(), 0);
            for (i, e) in elems.iter().enumerate() {
                let i = i as u32;
                assert_eq!(g.length(&i), weyl.length(e));
                assert_eq!(g.canonical_word(&i), weyl.canonical_word(e));
                assert_eq!(g.support(&i), weyl.support(e));
                assert_eq!(g.left_descents(&i), weyl.left_descents(e));
                assert_eq!(g.right_descents(&i), weyl.right_descents(e));
                assert_eq!(elems[g.inverse(&i) as usize], weyl.inverse(e));
            }
            let w0 = g.longest_element(g.all_generators()).unwrap();
            assert_eq!(w0, g.longest());
        }
    }

    #[test]
    fn order_is_length_then_word() {
        let g = IndexedGroup::parse("A3").unwrap();
        let keys: Vec<_> = g
            .elements()
            .map(|w| (g.length(&w), g.canonical_word(&w)))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn round_trip_through_tables() {
        let g = IndexedGroup::parse("B3").unwrap();
        let again = IndexedGroup::from_tables(g.tables().clone()).unwrap();
        assert_eq!(again.inv, g.inv);
        let mut bad = g.tables().clone();
        bad.lmul[5] = 0;
        assert!(IndexedGroup::from_tables(bad).is_err());
    }

    #[test]
    fn generic_algorithms_run_on_indices() {
        let g = IndexedGroup::parse("A3").unwrap();
        let w = g.element("1,3,2,3,1").unwrap();
        let (v, u) = g.parabolic_decompose(&w, GenSet::from_iter([0, 2]), Side::Right);
        assert_eq!(g.format(v), "1,3,2");
        assert_eq!(g.format(u), "1,3");
        assert_eq!(g.format(g.identity()), "e");
    }
}
