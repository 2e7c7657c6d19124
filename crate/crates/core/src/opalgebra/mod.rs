//! Matrix-valued differential operators on ℝ³ with [`DiffPoly`] coefficients.
//!
//! An operator is stored as `Σ_α C_α ∂^α` with the coefficient matrix on the
//! left. Composition `D ∘ E` applies `E` first.

mod numeric;
mod render;
mod weyl;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::diffring::{rational, DiffPoly, ParamId, Rational, TableKind};
use crate::{Error, Result};

pub use numeric::{
    fd_apply_oracle, full_symbol, numeric_residual, sample_points, ComplexMatrix, ComplexVector, ResidualStats,
    Sampler, VectorFn,
};
pub use render::OperatorFormat;
pub use weyl::WeylElement;

/// Derivative exponents `(n₁, n₂, n₃)` of `∂₁^n₁ ∂₂^n₂ ∂₃^n₃`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub [u32; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0, 0]);

    /// `∂ᵢ` with `dir` zero-based.
    pub fn unit(dir: usize) -> MultiIndex {
        let mut a = [0; 3];
        a[dir] = 1;
        MultiIndex(a)
    }

    pub fn order(self) -> u32 {
        self.0.iter().sum()
    }

    pub fn plus(self, other: MultiIndex) -> MultiIndex {
        MultiIndex([self.0[0] + other.0[0], self.0[1] + other.0[1], self.0[2] + other.0[2]])
    }

    pub fn le(self, other: MultiIndex) -> bool {
        (0..3).all(|i| self.0[i] <= other.0[i])
    }

    /// Every `γ ≤ self` together with `binom(self, γ)`.
    pub fn sub_indices(self) -> Vec<(MultiIndex, u64)> {
        let mut out = Vec::new();
        for a in 0..=self.0[0] {
            for b in 0..=self.0[1] {
                for c in 0..=self.0[2] {
                    let g = MultiIndex([a, b, c]);
                    let w = binomial(self.0[0], a) * binomial(self.0[1], b) * binomial(self.0[2], c);
                    out.push((g, w));
                }
            }
        }
        out
    }

    fn minus(self, other: MultiIndex) -> MultiIndex {
        MultiIndex([self.0[0] - other.0[0], self.0[1] - other.0[1], self.0[2] - other.0[2]])
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order() == 0 {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &n) in self.0.iter().enumerate() {
            if n == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "d{}", i + 1)?;
            if n > 1 {
                write!(f, "^{n}")?;
            }
        }
        Ok(())
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// A 3×3 matrix of coefficients.
pub type Matrix = [[DiffPoly; 3]; 3];

pub fn zero_matrix(table: TableKind) -> Matrix {
    std::array::from_fn(|_| std::array::from_fn(|_| DiffPoly::zero(table)))
}

pub fn scalar_matrix(p: &DiffPoly) -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { p.clone() } else { DiffPoly::zero(p.table()) }))
}

pub fn matrix_is_zero(m: &Matrix) -> bool {
    m.iter().flatten().all(DiffPoly::is_zero)
}

pub fn matrix_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let table = a[0][0].table();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = DiffPoly::zero(table);
            for l in 0..3 {
                if !a[i][l].is_zero() && !b[l][j].is_zero() {
                    acc = acc + &a[i][l] * &b[l][j];
                }
            }
            acc
        })
    })
}

fn matrix_add_assign(a: &mut Matrix, b: &Matrix) {
    for i in 0..3 {
        for j in 0..3 {
            if !b[i][j].is_zero() {
                a[i][j] = &a[i][j] + &b[i][j];
            }
        }
    }
}

fn matrix_map(m: &Matrix, f: impl Fn(&DiffPoly) -> DiffPoly) -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| f(&m[i][j])))
}

/// `Σ_α C_α ∂^α`; no all-zero coefficient matrix is ever stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MatDiffOp {
    table: TableKind,
    coeffs: BTreeMap<MultiIndex, Matrix>,
}

impl MatDiffOp {
    pub fn zero(table: TableKind) -> Self {
        MatDiffOp { table, coeffs: BTreeMap::new() }
    }

    pub fn identity(table: TableKind) -> Self {
        Self::scalar(MultiIndex::ZERO, &DiffPoly::one(table))
    }

    /// `∂ᵢ · I` with `dir` zero-based.
    pub fn partial(table: TableKind, dir: usize) -> Self {
        Self::scalar(MultiIndex::unit(dir), &DiffPoly::one(table))
    }

    /// `p · I · ∂^α`.
    pub fn scalar(alpha: MultiIndex, p: &DiffPoly) -> Self {
        Self::from_matrix(p.table(), alpha, scalar_matrix(p))
    }

    /// `m · ∂^α`.
    pub fn from_matrix(table: TableKind, alpha: MultiIndex, m: Matrix) -> Self {
        let mut op = Self::zero(table);
        op.add_term(alpha, &m);
        op
    }

    pub fn table(&self) -> TableKind {
        self.table
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &Matrix)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, alpha: MultiIndex) -> Option<&Matrix> {
        self.coeffs.get(&alpha)
    }

    /// Entry `(i, j)` (zero-based) of the coefficient of `∂^α`.
    pub fn entry(&self, alpha: MultiIndex, i: usize, j: usize) -> DiffPoly {
        self.coeffs.get(&alpha).map_or_else(|| DiffPoly::zero(self.table), |m| m[i][j].clone())
    }

    pub fn order(&self) -> u32 {
        self.coeffs.keys().map(|a| a.order()).max().unwrap_or(0)
    }

    /// Whether every coefficient is a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.coeffs
            .values()
            .all(|m| (0..3).all(|i| (0..3).all(|j| if i == j { m[i][i] == m[0][0] } else { m[i][j].is_zero() })))
    }

    /// Total number of nonzero terms across all coefficient entries.
    pub fn term_count(&self) -> usize {
        self.coeffs.values().flatten().flatten().map(DiffPoly::len).sum()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, m: &Matrix) {
        if matrix_is_zero(m) {
            return;
        }
        let slot = self.coeffs.entry(alpha).or_insert_with(|| zero_matrix(self.table));
        matrix_add_assign(slot, m);
        if matrix_is_zero(slot) {
            self.coeffs.remove(&alpha);
        }
    }

    fn check_table(&self, other: &MatDiffOp) -> Result<()> {
        if self.table != other.table {
            return Err(Error::TableMismatch { left: self.table, right: other.table });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MatDiffOp) -> Result<MatDiffOp> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (a, m) in &other.coeffs {
            out.add_term(*a, m);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MatDiffOp) -> Result<MatDiffOp> {
        self.checked_add(&other.scale(&rational(-1, 1)))
    }

    pub fn scale(&self, q: &Rational) -> MatDiffOp {
        if q.is_zero() {
            return MatDiffOp::zero(self.table);
        }
        self.map_coeffs(|p| p.scale(q))
    }

    /// Applies `f` to every coefficient entry, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> MatDiffOp {
        let mut out = MatDiffOp::zero(self.table);
        for (a, m) in &self.coeffs {
            out.add_term(*a, &matrix_map(m, &f));
        }
        out
    }

    /// Left multiplication by a coefficient matrix: `m · D`.
    pub fn left_mul_matrix(&self, m: &Matrix) -> MatDiffOp {
        let mut out = MatDiffOp::zero(self.table);
        for (a, c) in &self.coeffs {
            out.add_term(*a, &matrix_mul(m, c));
        }
        out
    }

    pub fn substitute_param(&self, param: ParamId, value: &Rational) -> MatDiffOp {
        self.map_coeffs(|p| p.substitute_param(param, value))
    }

    /// Reduces every coefficient modulo the hyperbolic cross-pair coth relation.
    pub fn reduce_coth_addition(&self) -> MatDiffOp {
        self.map_coeffs(DiffPoly::reduce_coth_addition)
    }

    /// `D ∘ E` by the Leibniz rule `A∂^α ∘ B∂^β = Σ_{γ≤α} binom(α,γ) A (∂^{α−γ}B) ∂^{γ+β}`.
    pub fn compose(&self, other: &MatDiffOp) -> Result<MatDiffOp> {
        self.check_table(other)?;
        let mut out = MatDiffOp::zero(self.table);
        let mut cache: HashMap<(MultiIndex, MultiIndex), Matrix> = HashMap::new();
        for (alpha, a) in &self.coeffs {
            for (gamma, w) in alpha.sub_indices() {
                let delta = alpha.minus(gamma);
                let w = Rational::from_integer(w.into());
                for (beta, b) in &other.coeffs {
                    let db = derived_matrix(&mut cache, *beta, b, delta);
                    if matrix_is_zero(&db) {
                        continue;
                    }
                    let prod = matrix_map(&matrix_mul(a, &db), |p| p.scale(&w));
                    out.add_term(gamma.plus(*beta), &prod);
                }
            }
        }
        Ok(out)
    }

    /// `[D, E] = D∘E − E∘D`.
    pub fn commutator(&self, other: &MatDiffOp) -> Result<MatDiffOp> {
        self.compose(other)?.checked_sub(&other.compose(self)?)
    }

    /// `g ∘ D ∘ g⁻¹` for a weight with `χᵢ = ∂ᵢ log g`, realized by
    /// substituting `∂ᵢ → ∂ᵢ − χᵢ`.
    pub fn conjugate(&self, chi: &[DiffPoly; 3]) -> Result<MatDiffOp> {
        for c in chi {
            if c.table() != self.table {
                return Err(Error::TableMismatch { left: self.table, right: c.table() });
            }
        }
        let shifted: Vec<MatDiffOp> = (0..3)
            .map(|i| MatDiffOp::partial(self.table, i).checked_sub(&MatDiffOp::scalar(MultiIndex::ZERO, &chi[i])))
            .collect::<Result<_>>()?;
        let mut powers: HashMap<(usize, u32), MatDiffOp> = HashMap::new();
        let mut power = |i: usize, n: u32| -> Result<MatDiffOp> {
            if let Some(p) = powers.get(&(i, n)) {
                return Ok(p.clone());
            }
            let mut acc = MatDiffOp::identity(self.table);
            for _ in 0..n {
                acc = shifted[i].compose(&acc)?;
            }
            powers.insert((i, n), acc.clone());
            Ok(acc)
        };
        let mut out = MatDiffOp::zero(self.table);
        for (alpha, m) in &self.coeffs {
            let mut term = MatDiffOp::identity(self.table);
            for i in (0..3).rev() {
                if alpha.0[i] > 0 {
                    term = power(i, alpha.0[i])?.compose(&term)?;
                }
            }
            out = out.checked_add(&term.left_mul_matrix(m))?;
        }
        Ok(out)
    }

    /// The symbol restricted to `λ₃ = −λ₁ − λ₂`, keyed by exponents of `(λ₁, λ₂)`.
    pub fn on_shell_symbol(&self) -> BTreeMap<(u32, u32), Matrix> {
        let mut out: BTreeMap<(u32, u32), Matrix> = BTreeMap::new();
        for (alpha, m) in &self.coeffs {
            let [a1, a2, a3] = alpha.0;
            let sign = if a3 % 2 == 0 { 1 } else { -1 };
            for r in 0..=a3 {
                let w = Rational::from_integer((sign * binomial(a3, r) as i64).into());
                let key = (a1 + r, a2 + a3 - r);
                let slot = out.entry(key).or_insert_with(|| zero_matrix(self.table));
                matrix_add_assign(slot, &matrix_map(m, |p| p.scale(&w)));
            }
        }
        out.retain(|_, m| !matrix_is_zero(m));
        out
    }

    /// Exact equality of full symbols on the hyperplane `λ₁ + λ₂ + λ₃ = 0`.
    pub fn on_shell_eq(&self, other: &MatDiffOp) -> Result<bool> {
        Ok(self.checked_sub(other)?.on_shell_symbol().is_empty())
    }

    /// Highest jet order of β in any coefficient.
    pub fn max_beta_order(&self) -> u32 {
        self.coeffs.values().flatten().flatten().map(DiffPoly::max_beta_order).max().unwrap_or(0)
    }
}

fn derived_matrix(
    cache: &mut HashMap<(MultiIndex, MultiIndex), Matrix>,
    beta: MultiIndex,
    b: &Matrix,
    delta: MultiIndex,
) -> Matrix {
    if delta == MultiIndex::ZERO {
        return b.clone();
    }
    if let Some(m) = cache.get(&(beta, delta)) {
        return m.clone();
    }
    let dir = (0..3).find(|&i| delta.0[i] > 0).expect("nonzero multi-index");
    let prev = derived_matrix(cache, beta, b, delta.minus(MultiIndex::unit(dir)));
    let m = matrix_map(&prev, |p| p.derive(dir));
    cache.insert((beta, delta), m.clone());
    m
}

macro_rules! op_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&MatDiffOp> for &MatDiffOp {
            type Output = MatDiffOp;
            /// Panics if the operands live over different generator tables.
            fn $method(self, rhs: &MatDiffOp) -> MatDiffOp {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait<MatDiffOp> for MatDiffOp {
            type Output = MatDiffOp;
            fn $method(self, rhs: MatDiffOp) -> MatDiffOp {
                (&self).$method(&rhs)
            }
        }
    };
}

op_binop!(Add, add, checked_add);
op_binop!(Sub, sub, checked_sub);
op_binop!(Mul, mul, compose);

impl std::ops::Neg for &MatDiffOp {
    type Output = MatDiffOp;
    fn neg(self) -> MatDiffOp {
        self.scale(&rational(-1, 1))
    }
}

impl fmt::Debug for MatDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatDiffOp[{:?}]\n{}", self.table, self.render(OperatorFormat::Text))
    }
}
