//! Cartan data for the finite Weyl groups and affine type Ã, using the
//! Dynkin labellings below, plus identification of sub-diagrams.
//!
//! ```text
//! A_n   1 - 2 - ... - n
//! B_n   1 - 2 - ... - (n-1) => n        (s_n short)
//! C_n   1 - 2 - ... - (n-1) <= n        (s_n long)
//! D_n   1 - 3 - 4 - ... - n,  2 - 3
//! E_n   1 - 2 - 4 - 5 - ... - n,  3 - 4
//! F_4   1 - 2 => 3 - 4                  (s_3, s_4 short)
//! G_2   1 => 2                          (s_2 short)
//! Ã_n   cycle 0 - 1 - ... - n - 0
//! ```
//!
//! Cartan entries follow `a_ij = 2(α_i, α_j) / (α_j, α_j)`, so the simple
//! reflection acts by `s_j(α_i) = α_i - a_ij α_j`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gens::{GenSet, MAX_GENERATORS};

/// Largest rank supported for finite types (elements are stored as fixed
/// 8×8 root matrices).
pub const MAX_FINITE_RANK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    AffineA,
}

impl TypeLabel {
    pub fn is_affine(self) -> bool {
        self == TypeLabel::AffineA
    }

    pub fn is_simply_laced(self) -> bool {
        matches!(self, TypeLabel::A | TypeLabel::D | TypeLabel::E | TypeLabel::AffineA)
    }

    fn prefix(self) -> &'static str {
        match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::E => "E",
            TypeLabel::F => "F",
            TypeLabel::G => "G",
            TypeLabel::AffineA => "affA",
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.prefix())
    }
}

/// A type label together with its rank, e.g. `B3` or `affA2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemKey {
    pub label: TypeLabel,
    pub rank: u8,
}

impl fmt::Display for SystemKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.label, self.rank)
    }
}

impl FromStr for SystemKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            what: "system",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (label, rest) = if let Some(rest) = t
            .strip_prefix("affA")
            .or_else(|| t.strip_prefix("AffA"))
            .or_else(|| t.strip_prefix("affa"))
        {
            (TypeLabel::AffineA, rest)
        } else {
            let mut chars = t.chars();
            let letter = chars.next().ok_or_else(|| err("empty"))?;
            let label = match letter.to_ascii_uppercase() {
                'A' => TypeLabel::A,
                'B' => TypeLabel::B,
                'C' => TypeLabel::C,
                'D' => TypeLabel::D,
                'E' => TypeLabel::E,
                'F' => TypeLabel::F,
                'G' => TypeLabel::G,
                _ => return Err(err("unknown type letter")),
            };
            (label, chars.as_str())
        };
        let rank: u8 = rest.parse().map_err(|_| err("rank is not a number"))?;
        Ok(SystemKey { label, rank })
    }
}

/// Cartan/Dynkin data for one finite or affine type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterSystem {
    key: SystemKey,
    labels: Vec<u32>,
    sq_lengths: Vec<i32>,
    gram: Vec<Vec<i32>>,
    cartan: Vec<Vec<i32>>,
    bonds: Vec<Vec<Option<u32>>>,
    positive_roots: Vec<Vec<i32>>,
}

/// Squared root lengths (scaled so short roots have length 2) and bonded
/// pairs of generator positions.
fn diagram(label: TypeLabel, n: usize) -> (Vec<i32>, Vec<(usize, usize)>) {
    let chain = |k: usize| (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match label {
        TypeLabel::A => (vec![2; n], chain(n)),
        TypeLabel::B => {
            let mut len = vec![4; n];
            len[n - 1] = 2;
            (len, chain(n))
        }
        TypeLabel::C => {
            let mut len = vec![2; n];
            len[n - 1] = 4;
            (len, chain(n))
        }
        TypeLabel::D => {
            // 1-3, 2-3, 3-4, ..., (n-1)-n in labels
            let mut edges = vec![(0, 2), (1, 2)];
            edges.extend((2..n - 1).map(|i| (i, i + 1)));
            (vec![2; n], edges)
        }
        TypeLabel::E => {
            // 1-2, 2-4, 3-4, 4-5, ..., (n-1)-n in labels
            let mut edges = vec![(0, 1), (1, 3), (2, 3)];
            edges.extend((3..n - 1).map(|i| (i, i + 1)));
            (vec![2; n], edges)
        }
        TypeLabel::F => (vec![4, 4, 2, 2], chain(4)),
        TypeLabel::G => (vec![6, 2], chain(2)),
        TypeLabel::AffineA => {
            let gens = n + 1;
            let mut edges = chain(gens);
            if gens > 2 {
                edges.push((0, gens - 1));
            }
            (vec![2; gens], edges)
        }
    }
}

fn check_legal(label: TypeLabel, rank: usize) -> Result<()> {
    let illegal = |reason| {
        Err(Error::IllegalSystem {
            label: label.to_string(),
            rank,
            reason,
        })
    };
    let ok = match label {
        TypeLabel::A => rank >= 1,
        TypeLabel::B | TypeLabel::C => rank >= 2,
        TypeLabel::D => rank >= 4,
        TypeLabel::E => (6..=8).contains(&rank),
        TypeLabel::F => rank == 4,
        TypeLabel::G => rank == 2,
        TypeLabel::AffineA => rank >= 1,
    };
    if !ok {
        return illegal("rank not allowed for this type");
    }
    if label.is_affine() {
        if rank + 1 > MAX_GENERATORS {
            return illegal("too many generators");
        }
    } else if rank > MAX_FINITE_RANK {
        return illegal("finite types are supported up to rank 8");
    }
    Ok(())
}

impl CoxeterSystem {
    /// Builds the system for a legal `(type, rank)` pair.
    pub fn build(label: TypeLabel, rank: usize) -> Result<Self> {
        check_legal(label, rank)?;
        let (sq_lengths, edges) = diagram(label, rank);
        let n = sq_lengths.len();
        let mut gram = vec![vec![0i32; n]; n];
        for i in 0..n {
            gram[i][i] = sq_lengths[i];
        }
        for &(i, j) in &edges {
            let (li, lj) = (sq_lengths[i], sq_lengths[j]);
            let ip = if label == TypeLabel::AffineA && n == 2 {
                // Ã_1: the two simple roots pair to -2 (infinite bond)
                -2
            } else if li == lj {
                -li / 2
            } else {
                // m = 4 (lengths 2,4) or m = 6 (lengths 2,6)
                -(li.max(lj) / 2)
            };
            gram[i][j] = ip;
            gram[j][i] = ip;
        }
        let cartan: Vec<Vec<i32>> = (0..n)
            .map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();
        let bonds = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            return Some(1);
                        }
                        match cartan[i][j] * cartan[j][i] {
                            0 => Some(2),
                            1 => Some(3),
                            2 => Some(4),
                            3 => Some(6),
                            _ => None,
                        }
                    })
                    .collect()
            })
            .collect();
        let labels = if label.is_affine() {
            (0..n as u32).collect()
        } else {
            (1..=n as u32).collect()
        };
        let mut sys = CoxeterSystem {
            key: SystemKey {
                label,
                rank: rank as u8,
            },
            labels,
            sq_lengths,
            gram,
            cartan,
            bonds,
            positive_roots: Vec::new(),
        };
        if !label.is_affine() {
            sys.positive_roots = sys.close_positive_roots();
        }
        Ok(sys)
    }

    pub fn from_key(key: SystemKey) -> Result<Self> {
        Self::build(key.label, key.rank as usize)
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::from_key(name.parse()?)
    }

    fn close_positive_roots(&self) -> Vec<Vec<i32>> {
        let n = self.num_generators();
        let mut roots: Vec<Vec<i32>> = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        let mut seen: std::collections::HashSet<Vec<i32>> = roots.iter().cloned().collect();
        let mut idx = 0;
        while idx < roots.len() {
            let root = roots[idx].clone();
            for s in 0..n {
                let img = self.reflect(s, &root);
                if img.iter().all(|&c| c >= 0) && seen.insert(img.clone()) {
                    roots.push(img);
                }
            }
            idx += 1;
        }
        roots.sort_by_key(|r| (r.iter().sum::<i32>(), r.clone()));
        roots
    }

    /// `s_j(x)` for `x` in simple-root coordinates.
    pub fn reflect(&self, j: usize, x: &[i32]) -> Vec<i32> {
        let c: i32 = x.iter().enumerate().map(|(i, &xi)| xi * self.cartan[i][j]).sum();
        let mut out = x.to_vec();
        out[j] -= c;
        out
    }

    pub fn key(&self) -> SystemKey {
        self.key
    }

    pub fn label(&self) -> TypeLabel {
        self.key.label
    }

    /// Type rank (`n` for Ã_n, which has `n + 1` generators).
    pub fn rank(&self) -> usize {
        self.key.rank as usize
    }

    pub fn num_generators(&self) -> usize {
        self.labels.len()
    }

    pub fn all(&self) -> GenSet {
        GenSet::full(self.num_generators())
    }

    pub fn is_affine(&self) -> bool {
        self.key.label.is_affine()
    }

    pub fn name(&self) -> String {
        self.key.to_string()
    }

    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<i32>] {
        &self.gram
    }

    pub fn sq_lengths(&self) -> &[i32] {
        &self.sq_lengths
    }

    /// `m_ij`, with `None` standing for an infinite bond.
    pub fn bond(&self, i: usize, j: usize) -> Option<u32> {
        self.bonds[i][j]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.bonds[i][j] != Some(2)
    }

    /// Positive roots in simple-root coordinates (empty for affine types).
    pub fn positive_roots(&self) -> &[Vec<i32>] {
        &self.positive_roots
    }

    /// Whether the standard parabolic subgroup generated by `k` is finite.
    pub fn parabolic_is_finite(&self, k: GenSet) -> bool {
        !self.is_affine() || k != self.all()
    }

    pub fn generator_label(&self, s: usize) -> u32 {
        self.labels[s]
    }

    pub fn position_of_label(&self, label: u32) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::GeneratorOutOfRange(label as usize))
    }

    pub fn neighbours(&self, s: usize, within: GenSet) -> GenSet {
        within.iter().filter(|&t| self.adjacent(s, t)).collect()
    }

    /// Connected components of the sub-diagram on `k`, each sorted.
    pub fn components(&self, k: GenSet) -> Vec<GenSet> {
        let mut rest = k;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = GenSet::singleton(start);
            let mut frontier = vec![start];
            while let Some(s) = frontier.pop() {
                for t in self.neighbours(s, rest.difference(comp)).iter() {
                    comp.insert(t);
                    frontier.push(t);
                }
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        word.iter()
            .map(|&s| self.labels[s].to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn format_set(&self, set: GenSet) -> String {
        set.iter()
            .map(|s| self.labels[s].to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses comma-separated generator labels, e.g. `"1,3,2"`. The empty
    /// string and `"e"` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        let t = text.trim();
        if t.is_empty() || t == "e" {
            return Ok(Vec::new());
        }
        t.split(',')
            .map(|part| {
                let label: u32 = part.trim().parse().map_err(|_| Error::Parse {
                    what: "word",
                    input: text.to_string(),
                    reason: format!("{part:?} is not a generator label"),
                })?;
                self.position_of_label(label).map_err(|_| Error::Parse {
                    what: "word",
                    input: text.to_string(),
                    reason: format!("no generator labelled {label} in {}", self.name()),
                })
            })
            .collect()
    }

    pub fn parse_set(&self, text: &str) -> Result<GenSet> {
        Ok(self.parse_word(text)?.into_iter().collect())
    }

    /// Decomposes the sub-diagram on `k` into connected components and
    /// matches each against the canonical labelled diagrams. Double-bond
    /// components inherit B or C from the ambient short/long orientation.
    pub fn identify_type(&self, k: GenSet) -> Result<Vec<SubDiagram>> {
        self.components(k)
            .into_iter()
            .map(|comp| self.identify_component(comp))
            .collect()
    }

    fn identify_component(&self, comp: GenSet) -> Result<SubDiagram> {
        let nodes: Vec<usize> = comp.iter().collect();
        let k = nodes.len();
        let candidates: &[TypeLabel] = &[
            TypeLabel::A,
            TypeLabel::B,
            TypeLabel::C,
            TypeLabel::D,
            TypeLabel::E,
            TypeLabel::F,
            TypeLabel::G,
        ];
        let mut best: Option<SubDiagram> = None;
        for &label in candidates {
            if check_legal(label, k).is_err() {
                continue;
            }
            let canon = CoxeterSystem::build(label, k)?;
            if let Some(map) = self.first_embedding(&canon, &nodes) {
                let better = best.as_ref().map_or(true, |b| map < b.relabel);
                if better {
                    best = Some(SubDiagram {
                        label,
                        rank: k,
                        relabel: map,
                    });
                }
            }
        }
        best.ok_or_else(|| Error::NotFiniteType(self.format_set(comp)))
    }

    /// Lexicographically first assignment canonical position -> ambient
    /// position that preserves every Cartan entry.
    fn first_embedding(&self, canon: &CoxeterSystem, nodes: &[usize]) -> Option<Vec<usize>> {
        fn extend(
            amb: &CoxeterSystem,
            canon: &CoxeterSystem,
            nodes: &[usize],
            map: &mut Vec<usize>,
        ) -> bool {
            let i = map.len();
            if i == nodes.len() {
                return true;
            }
            for &cand in nodes {
                if map.contains(&cand) {
                    continue;
                }
                let consistent = map.iter().enumerate().all(|(j, &mj)| {
                    canon.cartan[i][j] == amb.cartan[cand][mj]
                        && canon.cartan[j][i] == amb.cartan[mj][cand]
                });
                if consistent {
                    map.push(cand);
                    if extend(amb, canon, nodes, map) {
                        return true;
                    }
                    map.pop();
                }
            }
            false
        }
        let mut map = Vec::with_capacity(nodes.len());
        extend(self, canon, nodes, &mut map).then_some(map)
    }
}

/// One connected component of a sub-diagram, matched to a canonical type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubDiagram {
    pub label: TypeLabel,
    pub rank: usize,
    /// `relabel[i]` is the ambient generator position playing the role of
    /// canonical generator `i`.
    pub relabel: Vec<usize>,
}

impl SubDiagram {
    pub fn key(&self) -> SystemKey {
        SystemKey {
            label: self.label,
            rank: self.rank as u8,
        }
    }

    /// Ambient position -> canonical position.
    pub fn to_canonical(&self, ambient: usize) -> Option<usize> {
        self.relabel.iter().position(|&a| a == ambient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(name: &str) -> CoxeterSystem {
        CoxeterSystem::parse(name).unwrap()
    }

    #[test]
    fn a3_has_six_positive_roots() {
        assert_eq!(sys("A3").positive_roots().len(), 6);
    }

    #[test]
    fn positive_root_counts() {
        for (name, count) in [
            ("B3", 9),
            ("C4", 16),
            ("D4", 12),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("F4", 24),
            ("G2", 6),
            ("A4", 10),
        ] {
            assert_eq!(sys(name).positive_roots().len(), count, "{name}");
        }
    }

    #[test]
    fn g2_triple_bond() {
        let g2 = sys("G2");
        assert_eq!(g2.bond(0, 1), Some(6));
        assert_eq!(g2.positive_roots().len(), 6);
    }

    #[test]
    fn b_and_c_share_bonds_with_transposed_cartan() {
        let b = sys("B3");
        let c = sys("C3");
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.bond(i, j), c.bond(i, j));
                assert_eq!(b.cartan()[i][j], c.cartan()[j][i]);
            }
        }
        assert_ne!(b.cartan(), c.cartan());
    }

    #[test]
    fn bonds_match_cartan_products() {
        for name in ["A5", "B4", "C4", "D5", "E6", "F4", "G2", "affA3"] {
            let s = sys(name);
            let n = s.num_generators();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let p = s.cartan()[i][j] * s.cartan()[j][i];
                    let expected = match p {
                        0 => Some(2),
                        1 => Some(3),
                        2 => Some(4),
                        3 => Some(6),
                        _ => None,
                    };
                    assert_eq!(s.bond(i, j), expected, "{name} ({i},{j})");
                    assert_eq!(s.cartan()[i][j] == 0, s.cartan()[j][i] == 0);
                }
            }
        }
    }

    #[test]
    fn illegal_pairs_rejected() {
        for (label, rank) in [
            (TypeLabel::B, 1),
            (TypeLabel::D, 3),
            (TypeLabel::E, 5),
            (TypeLabel::E, 9),
            (TypeLabel::F, 3),
            (TypeLabel::G, 3),
            (TypeLabel::A, 0),
        ] {
            assert!(CoxeterSystem::build(label, rank).is_err(), "{label}{rank}");
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(sys("affA3").num_generators(), 4);
        assert_eq!(sys("affA3").generator_label(0), 0);
        assert_eq!(sys("B3").generator_label(0), 1);
        assert!(CoxeterSystem::parse("X3").is_err());
        assert!(CoxeterSystem::parse("B").is_err());
    }

    #[test]
    fn dynkin_labellings() {
        let d4 = sys("D4");
        // 1-3, 2-3, 3-4
        assert!(d4.adjacent(0, 2) && d4.adjacent(1, 2) && d4.adjacent(2, 3));
        assert!(!d4.adjacent(0, 1) && !d4.adjacent(0, 3));
        let e6 = sys("E6");
        // 1-2, 2-4, 3-4, 4-5, 5-6
        for (i, j) in [(0, 1), (1, 3), (2, 3), (3, 4), (4, 5)] {
            assert!(e6.adjacent(i, j));
        }
        assert!(!e6.adjacent(1, 2));
        let f4 = sys("F4");
        assert_eq!(f4.bond(1, 2), Some(4));
        assert!(f4.sq_lengths()[2] < f4.sq_lengths()[1]);
        let aff = sys("affA2");
        assert!(aff.adjacent(0, 2) && aff.adjacent(0, 1) && aff.adjacent(1, 2));
    }

    #[test]
    fn identify_chain_of_three() {
        let a = sys("A3");
        let comps = a.identify_type(a.all()).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].label, TypeLabel::A);
        assert_eq!(comps[0].relabel, vec![0, 1, 2]);
    }

    #[test]
    fn identify_c2_inside_c3() {
        let c = sys("C3");
        let comps = c.identify_type(GenSet::from_iter([1, 2])).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].label, TypeLabel::C);
        assert_eq!(comps[0].rank, 2);
        assert_eq!(comps[0].relabel, vec![1, 2]);
    }

    #[test]
    fn identify_singleton() {
        let c = sys("C3");
        let comps = c.identify_type(GenSet::singleton(1)).unwrap();
        assert_eq!(comps[0].label, TypeLabel::A);
        assert_eq!(comps[0].rank, 1);
    }

    #[test]
    fn identify_f4_subdiagrams() {
        let f = sys("F4");
        let lower = f.identify_type(GenSet::from_iter([0, 1, 2])).unwrap();
        assert_eq!((lower[0].label, lower[0].rank), (TypeLabel::B, 3));
        let upper = f.identify_type(GenSet::from_iter([1, 2, 3])).unwrap();
        assert_eq!((upper[0].label, upper[0].rank), (TypeLabel::C, 3));
        assert_eq!(upper[0].relabel, vec![3, 2, 1]);
        let split = f.identify_type(GenSet::from_iter([0, 3])).unwrap();
        assert_eq!(split.len(), 2);
    }

    #[test]
    fn identify_d4_inside_e6() {
        let e = sys("E6");
        // labels 2,3,4,5 -> positions 1,2,3,4: 4 is the branch node
        let comps = e.identify_type(GenSet::from_iter([1, 2, 3, 4])).unwrap();
        assert_eq!((comps[0].label, comps[0].rank), (TypeLabel::D, 4));
        let full = e.identify_type(e.all()).unwrap();
        assert_eq!((full[0].label, full[0].rank), (TypeLabel::E, 6));
    }

    #[test]
    fn affine_full_set_is_not_finite() {
        let a = sys("affA2");
        assert!(a.identify_type(a.all()).is_err());
        let proper = a.identify_type(GenSet::from_iter([0, 2])).unwrap();
        assert_eq!((proper[0].label, proper[0].rank), (TypeLabel::A, 2));
        // 2 - 0 chain: lexicographically first relabelling starts at 0
        assert_eq!(proper[0].relabel, vec![0, 2]);
    }

    #[test]
    fn word_round_trip() {
        let a = sys("A3");
        let w = a.parse_word("1,3,2,3,1").unwrap();
        assert_eq!(w, vec![0, 2, 1, 2, 0]);
        assert_eq!(a.format_word(&w), "1,3,2,3,1");
        assert!(a.parse_word("1,4").is_err());
        assert!(a.parse_word("x").is_err());
        assert!(a.parse_word("").unwrap().is_empty());
        let aff = sys("affA2");
        assert_eq!(aff.parse_word("0,1,2").unwrap(), vec![0, 1, 2]);
    }
}
