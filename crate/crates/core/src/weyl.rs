//! Finite Weyl groups in the reflection representation. An element is the
//! integer matrix of its action on the simple-root basis.

use std::fmt;

use crate::error::{Error, Result};
use crate::gens::GenSet;
use crate::group::Coxeter;
use crate::system::{CoxeterSystem, SystemKey, TypeLabel, MAX_FINITE_RANK};

const DIM: usize = MAX_FINITE_RANK;

/// Column-major: column `j` holds `w(α_j)` in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    owner: SystemKey,
    mat: [i8; DIM * DIM],
    len: u16,
}

impl Element {
    pub fn owner(&self) -> SystemKey {
        self.owner
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Image of the simple root `α_j`.
    pub fn column(&self, j: usize, rank: usize) -> &[i8] {
        &self.mat[j * DIM..j * DIM + rank]
    }

    /// Matrix entry `(i, j)`: coefficient of `α_i` in `w(α_j)`.
    pub fn entry(&self, i: usize, j: usize) -> i32 {
        self.mat[j * DIM + i] as i32
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.owner.rank as usize;
        let cols: Vec<_> = (0..n).map(|j| self.column(j, n).to_vec()).collect();
        write!(f, "Element({}, len {}, {:?})", self.owner, self.len, cols)
    }
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    sys: CoxeterSystem,
    rank: usize,
    cartan: [[i8; DIM]; DIM],
    gram: [[i32; DIM]; DIM],
    /// `2ρ` in simple-root coordinates; a regular dominant weight.
    rho2: [i32; DIM],
}

impl WeylGroup {
    pub fn new(sys: CoxeterSystem) -> Result<Self> {
        if sys.is_affine() {
            return Err(Error::IllegalSystem {
                label: sys.label().to_string(),
                rank: sys.rank(),
                reason: "affine systems use the affine permutation model",
            });
        }
        let rank = sys.num_generators();
        let mut cartan = [[0i8; DIM]; DIM];
        let mut gram = [[0i32; DIM]; DIM];
        for i in 0..rank {
            for j in 0..rank {
                cartan[i][j] = sys.cartan()[i][j] as i8;
                gram[i][j] = sys.gram()[i][j];
            }
        }
        let mut rho2 = [0i32; DIM];
        for root in sys.positive_roots() {
            for (acc, c) in rho2.iter_mut().zip(root) {
                *acc += c;
            }
        }
        Ok(WeylGroup {
            sys,
            rank,
            cartan,
            gram,
            rho2,
        })
    }

    pub fn build(label: TypeLabel, rank: usize) -> Result<Self> {
        Self::new(CoxeterSystem::build(label, rank)?)
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::new(CoxeterSystem::parse(name)?)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.enumerate(None).map(|v| v.len()).unwrap_or(0)
    }

    /// Product with an owner check.
    pub fn try_multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        for e in [x, y] {
            if e.owner != self.sys.key() {
                return Err(Error::OwnerMismatch {
                    left: self.sys.name(),
                    right: e.owner.to_string(),
                });
            }
        }
        Ok(self.multiply(x, y))
    }

    /// Parses a word in label notation, e.g. `"1,3,2"`.
    pub fn element(&self, word: &str) -> Result<Element> {
        Ok(self.from_word(&self.sys.parse_word(word)?))
    }

    /// `w(x)` for `x` in simple-root coordinates.
    pub fn act(&self, w: &Element, x: &[i32]) -> Vec<i32> {
        let n = self.rank;
        (0..n)
            .map(|i| (0..n).map(|j| w.entry(i, j) * x[j]).sum())
            .collect()
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self, w: &Element) -> usize {
        self.sys
            .positive_roots()
            .iter()
            .filter(|r| self.act(w, r).iter().any(|&c| c < 0))
            .count()
    }

    /// `(α_s, w(2ρ))`
    fn pairing_with_image(&self, w: &Element, s: usize) -> i32 {
        let n = self.rank;
        let mut total = 0;
        for j in 0..n {
            let c = self.rho2[j];
            if c == 0 {
                continue;
            }
            let col = w.column(j, n);
            let dot: i32 = (0..n).map(|i| self.gram[s][i] * col[i] as i32).sum();
            total += c * dot;
        }
        total
    }
}

impl Coxeter for WeylGroup {
    type Elem = Element;

    fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    fn identity(&self) -> Element {
        let mut mat = [0i8; DIM * DIM];
        for i in 0..self.rank {
            mat[i * DIM + i] = 1;
        }
        Element {
            owner: self.sys.key(),
            mat,
            len: 0,
        }
    }

    fn length(&self, w: &Element) -> usize {
        w.len as usize
    }

    fn lmul(&self, s: usize, w: &Element) -> Element {
        let n = self.rank;
        let down = self.is_left_descent(w, s);
        let mut out = w.clone();
        for j in 0..n {
            let col = &mut out.mat[j * DIM..j * DIM + n];
            let c: i32 = (0..n).map(|i| col[i] as i32 * self.cartan[i][s] as i32).sum();
            col[s] = (col[s] as i32 - c) as i8;
        }
        out.len = if down { w.len - 1 } else { w.len + 1 };
        out
    }

    fn rmul(&self, w: &Element, s: usize) -> Element {
        let n = self.rank;
        let down = self.is_right_descent(w, s);
        let mut out = w.clone();
        let col_s: [i8; DIM] = {
            let mut c = [0i8; DIM];
            c[..n].copy_from_slice(w.column(s, n));
            c
        };
        for j in 0..n {
            let a = self.cartan[j][s];
            if a == 0 {
                continue;
            }
            for i in 0..n {
                out.mat[j * DIM + i] -= a * col_s[i];
            }
        }
        out.len = if down { w.len - 1 } else { w.len + 1 };
        out
    }

    fn is_left_descent(&self, w: &Element, s: usize) -> bool {
        self.pairing_with_image(w, s) < 0
    }

    fn is_right_descent(&self, w: &Element, s: usize) -> bool {
        // roots are sign-coherent, so one nonzero coordinate decides
        w.column(s, self.rank).iter().any(|&c| c < 0)
    }

    fn support(&self, w: &Element) -> GenSet {
        // 2ρ - w(2ρ) has support exactly S(w)
        let img = self.act(w, &self.rho2[..self.rank]);
        (0..self.rank).filter(|&i| img[i] != self.rho2[i]).collect()
    }
}
