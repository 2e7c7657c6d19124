use std::fmt;

use super::{zero_matrix, MatDiffOp, MultiIndex};
use crate::{Error, Result};

/// A permutation `w` of `{1, 2, 3}`, stored zero-based as `w(j) = perm[j]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    perm: [usize; 3],
}

impl WeylElement {
    pub fn identity() -> Self {
        WeylElement { perm: [0, 1, 2] }
    }

    pub fn from_perm(perm: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p >= 3 || seen[p] {
                return Err(Error::Domain(format!("{perm:?} is not a permutation of 0..3")));
            }
            seen[p] = true;
        }
        Ok(WeylElement { perm })
    }

    /// The transposition of coordinates `i` and `j` (zero-based).
    pub fn transposition(i: usize, j: usize) -> Self {
        let mut perm = [0, 1, 2];
        perm.swap(i, j);
        WeylElement { perm }
    }

    /// All six elements: `e, s12, s13, s23, (123), (132)`.
    pub fn all() -> [WeylElement; 6] {
        [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]].map(|perm| WeylElement { perm })
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    pub fn apply(&self, j: usize) -> usize {
        self.perm[j]
    }

    /// `self ∘ v`, i.e. `(wv)(j) = w(v(j))`.
    pub fn compose(&self, v: &WeylElement) -> WeylElement {
        WeylElement { perm: v.perm.map(|j| self.perm[j]) }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut perm = [0; 3];
        for (j, &p) in self.perm.iter().enumerate() {
            perm[p] = j;
        }
        WeylElement { perm }
    }

    /// `P_w = (δ_{i, w(j)})`.
    pub fn matrix(&self) -> [[i64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| (i == self.perm[j]) as i64))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.perm {
            [0, 1, 2] => f.write_str("e"),
            [1, 0, 2] => f.write_str("s12"),
            [2, 1, 0] => f.write_str("s13"),
            [0, 2, 1] => f.write_str("s23"),
            [1, 2, 0] => f.write_str("(123)"),
            _ => f.write_str("(132)"),
        }
    }
}

impl MatDiffOp {
    /// `D^w`: every coordinate is renamed `t_j → t_{w(j)}` in the coefficients
    /// (odd generators pick up a sign when their pair is reoriented) and
    /// `∂_j → ∂_{w(j)}`. Matrix positions are left alone.
    pub fn weyl_transform(&self, w: &WeylElement) -> MatDiffOp {
        let mut out = MatDiffOp::zero(self.table);
        for (alpha, m) in &self.coeffs {
            let mut beta = [0; 3];
            for j in 0..3 {
                beta[w.apply(j)] = alpha.0[j];
            }
            let renamed = std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].rename_coordinates(w.perm)));
            out.add_term(MultiIndex(beta), &renamed);
        }
        out
    }

    /// `P_w⁻¹ D P_w`, whose `(i, j)` entry is `D_{w(i) w(j)}`.
    pub fn permute_by(&self, w: &WeylElement) -> MatDiffOp {
        let mut out = MatDiffOp::zero(self.table);
        for (alpha, m) in &self.coeffs {
            let mut p = zero_matrix(self.table);
            for (i, row) in p.iter_mut().enumerate() {
                for (j, slot) in row.iter_mut().enumerate() {
                    *slot = m[w.apply(i)][w.apply(j)].clone();
                }
            }
            out.add_term(*alpha, &p);
        }
        out
    }

    /// Whether `D^w = P_w⁻¹ D P_w` holds exactly.
    pub fn is_equivariant_under(&self, w: &WeylElement) -> bool {
        self.weyl_transform(w) == self.permute_by(w)
    }
}
