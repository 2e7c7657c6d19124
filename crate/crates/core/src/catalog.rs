//! Constructors for the named operators.
//!
//! `P1`, `Q1`, `P2` are built over any generator table from a generic odd β.
//! The remaining operators live in the hyperbolic table, where `coth t_ij`
//! exists as a generator, `β = 1/sinh` and `β′ = −cosh/sinh²`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::diffring::{parse_rational, rational, DiffPoly, GenKind, Pair, ParamId, Rational, TableKind};
use crate::opalgebra::{zero_matrix, MatDiffOp, Matrix, MultiIndex};
use crate::{Error, Result};

/// The coupling `k`: an indeterminate or a fixed rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KValue {
    Symbolic,
    Rational(Rational),
}

impl KValue {
    pub fn rational(num: i64, den: i64) -> Self {
        KValue::Rational(rational(num, den))
    }

    pub fn poly(&self, table: TableKind) -> DiffPoly {
        match self {
            KValue::Symbolic => DiffPoly::param(table, ParamId::K).expect("k exists in every table"),
            KValue::Rational(q) => DiffPoly::constant(table, q.clone()),
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            KValue::Symbolic => None,
            KValue::Rational(q) => Some(crate::diffring::rational_to_f64(q)),
        }
    }
}

impl FromStr for KValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("symbolic") {
            Ok(KValue::Symbolic)
        } else {
            parse_rational(s).map(KValue::Rational)
        }
    }
}

impl fmt::Display for KValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KValue::Symbolic => f.write_str("symbolic"),
            KValue::Rational(q) => write!(f, "{q}"),
        }
    }
}

/// Names accepted by [`build_named`].
pub const OPERATOR_NAMES: [&str; 14] = [
    "P1",
    "Q1",
    "P2",
    "L2",
    "tildeQ1",
    "tildeP2",
    "RtauD1",
    "RtauD2",
    "casimir_sl3r",
    "casimir_sl3c",
    "casimir_su6",
    "first_sl3r",
    "first_sl3c",
    "first_su6",
];

/// The three group cases `SL(3,𝕂)/SO(3)`-type pairs with `𝕂 = ℝ, ℂ, ℍ`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupCase {
    Sl3R,
    Sl3C,
    Su6,
}

impl GroupCase {
    pub const ALL: [GroupCase; 3] = [GroupCase::Sl3R, GroupCase::Sl3C, GroupCase::Su6];

    /// The multiplicity `k` of the case: 1/2, 1, 2.
    pub fn k(self) -> KValue {
        match self {
            GroupCase::Sl3R => KValue::rational(1, 2),
            GroupCase::Sl3C => KValue::rational(1, 1),
            GroupCase::Su6 => KValue::rational(2, 1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GroupCase::Sl3R => "sl3r",
            GroupCase::Sl3C => "sl3c",
            GroupCase::Su6 => "su6",
        }
    }

    fn weight(self, table: TableKind) -> DiffPoly {
        self.k().poly(table)
    }
}

const H: TableKind = TableKind::Hyperbolic;

fn scalar(alpha: MultiIndex, p: &DiffPoly) -> MatDiffOp {
    MatDiffOp::scalar(alpha, p)
}

fn sum(ops: impl IntoIterator<Item = MatDiffOp>, table: TableKind) -> MatDiffOp {
    ops.into_iter().fold(MatDiffOp::zero(table), |acc, op| &acc + &op)
}

/// `∂ᵢ` or `∂′ᵢ = ∂ᵢ − (∂₁ + ∂₂ + ∂₃)/3` as a scalar operator.
fn partial(table: TableKind, i: usize, primed: bool) -> MatDiffOp {
    let d = MatDiffOp::partial(table, i);
    if !primed {
        return d;
    }
    let third = DiffPoly::constant(table, rational(1, 3));
    let trace = sum((0..3).map(|j| scalar(MultiIndex::unit(j), &third)), table);
    &d - &trace
}

/// `∂₁∂₂ + ∂₂∂₃ + ∂₃∂₁` (or the primed version) times the identity.
fn e2(table: TableKind, primed: bool) -> MatDiffOp {
    let d: Vec<MatDiffOp> = (0..3).map(|i| partial(table, i, primed)).collect();
    sum([(0, 1), (1, 2), (2, 0)].map(|(i, j)| &d[i] * &d[j]), table)
}

/// `diag(∂₁, ∂₂, ∂₃)` or `diag(∂′₁, ∂′₂, ∂′₃)`.
fn diag_partials(table: TableKind, primed: bool) -> MatDiffOp {
    let mut out = MatDiffOp::zero(table);
    for i in 0..3 {
        for (alpha, m) in partial(table, i, primed).coeffs() {
            let mut e = zero_matrix(table);
            e[i][i] = m[0][0].clone();
            out.add_term(*alpha, &e);
        }
    }
    out
}

fn oriented(table: TableKind, kind: GenKind, i: usize, j: usize) -> DiffPoly {
    DiffPoly::oriented(table, kind, i, j).expect("generator supported by table")
}

fn times(m: &Matrix, p: &DiffPoly) -> Matrix {
    std::array::from_fn(|i| std::array::from_fn(|j| &m[i][j] * p))
}

fn constant_op(table: TableKind, m: Matrix) -> MatDiffOp {
    MatDiffOp::from_matrix(table, MultiIndex::ZERO, m)
}

/// Antisymmetric `B_ij = −β(t_i − t_j)`.
fn beta_matrix(table: TableKind) -> Matrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { DiffPoly::zero(table) } else { -oriented(table, GenKind::Beta, i, j) })
    })
}

/// `M_ii = Σ_{j≠i} β(t_ij)²`, `M_ij = β′(t_ij)`.
fn potential_matrix(table: TableKind) -> Matrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if i == j {
                let others = (0..3).filter(|&l| l != i);
                others.fold(DiffPoly::zero(table), |acc, l| acc + oriented(table, GenKind::Beta, i, l).pow(2))
            } else {
                oriented(table, GenKind::BetaPrime, i, j)
            }
        })
    })
}

/// `B` plus `diag(Σ_{j≠i} coth t_ij)`.
fn coth_matrix() -> Matrix {
    let mut c = beta_matrix(H);
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = (0..3).filter(|&j| j != i).fold(DiffPoly::zero(H), |acc, j| acc + oriented(H, GenKind::Coth, i, j));
    }
    c
}

/// `Σ_{i<j} coth t_ij (∂ᵢ − ∂ⱼ)`.
fn coth_drift() -> MatDiffOp {
    let mut out = MatDiffOp::zero(H);
    for pair in Pair::ALL {
        let (i, j) = pair.indices();
        let c = DiffPoly::coth(H, pair).expect("hyperbolic table");
        out = &out + &scalar(MultiIndex::unit(i), &c);
        out = &out - &scalar(MultiIndex::unit(j), &c);
    }
    out
}

/// `P₁ = ∂₁ + ∂₂ + ∂₃`.
pub fn build_p1(table: TableKind) -> MatDiffOp {
    sum((0..3).map(|i| MatDiffOp::partial(table, i)), table)
}

/// `Q₁ = diag(∂ᵢ) + k B`.
pub fn build_q1(table: TableKind, k: &KValue) -> MatDiffOp {
    let b = times(&beta_matrix(table), &k.poly(table));
    &diag_partials(table, false) + &constant_op(table, b)
}

/// `P₂ = e₂(∂) + k(k−1) Σ β(t_ij)² + k M`.
pub fn build_p2(table: TableKind, k: &KValue) -> MatDiffOp {
    let kp = k.poly(table);
    let sq = Pair::ALL.iter().fold(DiffPoly::zero(table), |acc, &p| acc + DiffPoly::beta(table, p).pow(2));
    let shift = &(&kp * &(&kp - &DiffPoly::one(table))) * &sq;
    let m = times(&potential_matrix(table), &kp);
    &(&e2(table, false) + &scalar(MultiIndex::ZERO, &shift)) + &constant_op(table, m)
}

fn l2_generic(k: &KValue, primed: bool) -> MatDiffOp {
    let drift = coth_drift().map_coeffs(|p| p * &k.poly(H));
    &e2(H, primed) - &drift
}

/// `L₂ = e₂(∂′) − k Σ_{i<j} coth t_ij (∂ᵢ − ∂ⱼ)`.
pub fn build_l2(k: &KValue) -> MatDiffOp {
    l2_generic(k, true)
}

/// `Q̃₁ = diag(∂ᵢ) + k C`.
pub fn build_tilde_q1(k: &KValue) -> MatDiffOp {
    &diag_partials(H, false) + &constant_op(H, times(&coth_matrix(), &k.poly(H)))
}

/// `P̃₂ = L₂ − 4k² + k M` with unprimed `L₂`.
pub fn build_tilde_p2(k: &KValue) -> MatDiffOp {
    let kp = k.poly(H);
    let shift = (&kp * &kp).scale(&rational(-4, 1));
    let m = times(&potential_matrix(H), &kp);
    &(&l2_generic(k, false) + &scalar(MultiIndex::ZERO, &shift)) + &constant_op(H, m)
}

/// `R_τ(D₁) = diag(∂′ᵢ) + k C`.
pub fn build_rtau_d1(k: &KValue) -> MatDiffOp {
    &diag_partials(H, true) + &constant_op(H, times(&coth_matrix(), &k.poly(H)))
}

/// `R_τ(D₂) = L₂ + k M`.
pub fn build_rtau_d2(k: &KValue) -> MatDiffOp {
    &build_l2(k) + &constant_op(H, times(&potential_matrix(H), &k.poly(H)))
}

/// First-order radial operator of a group case: `diag(∂′ᵢ) + w C` with
/// `w = 1/2, 1, 2`. The lower triangle is `+w/sinh t_ij` in all three cases.
pub fn build_group_firstorder(case: GroupCase) -> MatDiffOp {
    let w = case.weight(H);
    &diag_partials(H, true) + &constant_op(H, times(&coth_matrix(), &w))
}

/// The sl(3,ℂ) first-order matrix with lower-triangle entries `1/sinh t_ji`
/// taken literally, i.e. `−1/sinh t_ij`. Kept to show that this reading is
/// neither equivariant nor equal to `R_τ(D₁)` at `k = 1`.
pub fn build_first_sl3c_literal() -> MatDiffOp {
    let mut c = coth_matrix();
    for (i, row) in c.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            if i > j {
                *entry = -entry.clone();
            }
        }
    }
    &diag_partials(H, true) + &constant_op(H, c)
}

/// Right-hand side of the displayed Casimir radial part for a group case
/// (normalized as `−3R_τ(Ω)`, `−6R_τ(Ω) + 1/3`, `−12R_τ(Ω) + 3`).
pub fn build_group_casimir(case: GroupCase) -> MatDiffOp {
    let w = case.weight(H);
    let primed = case == GroupCase::Su6;
    let drift = coth_drift().map_coeffs(|p| p * &w);
    &(&e2(H, primed) - &drift) + &constant_op(H, times(&potential_matrix(H), &w))
}

/// Harish-Chandra images `(diag(λ₁, λ₂, λ₃), λ₁λ₂ + λ₂λ₃ + λ₃λ₁ + 4k²)` of `D₁`, `D₂`.
pub fn hc_eigenvalues(lambda: [Complex64; 3], k: Complex64) -> Result<([[Complex64; 3]; 3], Complex64)> {
    let total = lambda[0] + lambda[1] + lambda[2];
    let scale = lambda.iter().map(|l| l.norm()).fold(1.0, f64::max);
    if total.norm() > 1e-12 * scale {
        return Err(Error::Constraint(format!("λ₁ + λ₂ + λ₃ = {total} must vanish")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let d = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { lambda[i] } else { zero }));
    let e2 = lambda[0] * lambda[1] + lambda[1] * lambda[2] + lambda[2] * lambda[0];
    Ok((d, e2 + 4.0 * k * k))
}

/// Whether `name` needs `coth` generators (and hence the hyperbolic table).
pub fn is_hyperbolic_only(name: &str) -> bool {
    !matches!(name, "P1" | "Q1" | "P2")
}

/// Builds a catalog operator by name. `P1`, `Q1`, `P2` use `table`; the rest
/// require the hyperbolic table. Group-case operators ignore `k`.
pub fn build_named(name: &str, table: TableKind, k: &KValue) -> Result<MatDiffOp> {
    if is_hyperbolic_only(name) && OPERATOR_NAMES.contains(&name) && table != H {
        return Err(Error::UnsupportedGenerator { symbol: format!("coth (needed by {name})"), table });
    }
    Ok(match name {
        "P1" => build_p1(table),
        "Q1" => build_q1(table, k),
        "P2" => build_p2(table, k),
        "L2" => build_l2(k),
        "tildeQ1" => build_tilde_q1(k),
        "tildeP2" => build_tilde_p2(k),
        "RtauD1" => build_rtau_d1(k),
        "RtauD2" => build_rtau_d2(k),
        "casimir_sl3r" => build_group_casimir(GroupCase::Sl3R),
        "casimir_sl3c" => build_group_casimir(GroupCase::Sl3C),
        "casimir_su6" => build_group_casimir(GroupCase::Su6),
        "first_sl3r" => build_group_firstorder(GroupCase::Sl3R),
        "first_sl3c" => build_group_firstorder(GroupCase::Sl3C),
        "first_su6" => build_group_firstorder(GroupCase::Su6),
        other => {
            return Err(Error::UnknownOperator(format!("{other} (known: {})", OPERATOR_NAMES.join(", "))));
        }
    })
}

/// `χᵢ = ∂ᵢ log δ_k^{1/2}`: `k(c₁₂ + c₁₃)`, `k(−c₁₂ + c₂₃)`, `k(−c₁₃ − c₂₃)`.
pub fn delta_half_chi(k: &KValue) -> [DiffPoly; 3] {
    let c = coth_matrix();
    std::array::from_fn(|i| &c[i][i] * &k.poly(H))
}
