//! Floating-point evaluation of operators: full symbols, sampled residuals and a
//! finite-difference oracle.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{MatDiffOp, MultiIndex};
use crate::diffring::{CompiledPoly, PointValues};
use crate::elliptic::PotentialBackend;
use crate::{Error, Result};

pub type ComplexMatrix = [[Complex64; 3]; 3];
pub type ComplexVector = [Complex64; 3];

/// A test function `ℝ³ → ℂ³` for [`fd_apply_oracle`].
pub type VectorFn<'a> = dyn Fn([f64; 3]) -> Result<ComplexVector> + Sync + 'a;

/// `Σ_α C_α(t) λ^α`, the matrix by which `D` acts on `e^{λ·t} v`.
pub fn full_symbol(
    d: &MatDiffOp,
    backend: &PotentialBackend,
    t: [f64; 3],
    lambda: [Complex64; 3],
    k: f64,
) -> Result<ComplexMatrix> {
    let values = PointValues::new(backend, t, k, d.max_beta_order())?;
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (alpha, m) in d.coeffs() {
        let mono = (0..3).fold(Complex64::new(1.0, 0.0), |acc, i| acc * lambda[i].powu(alpha.0[i]));
        for i in 0..3 {
            for j in 0..3 {
                if !m[i][j].is_zero() {
                    out[i][j] += mono * m[i][j].eval(&values)?;
                }
            }
        }
    }
    Ok(out)
}

/// Deterministic uniform sampling of `[−box, box]³`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct Sampler {
    pub seed: u64,
    pub count: usize,
    pub half_width: f64,
}

impl Sampler {
    pub fn new(seed: u64, count: usize, half_width: f64) -> Self {
        Sampler { seed, count, half_width }
    }
}

/// `count` regular points for `backend`, drawn sequentially from the seed and
/// filtered by the guard radius. Returns the points and the number rejected.
pub fn sample_points(backend: &PotentialBackend, sampler: &Sampler) -> Result<(Vec<[f64; 3]>, usize)> {
    if sampler.count == 0 || sampler.half_width <= 0.0 || !sampler.half_width.is_finite() {
        return Err(Error::Sampling(format!(
            "need at least one sample in a nonempty box (count = {}, box = {})",
            sampler.count, sampler.half_width
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let max_attempts = 1000 * sampler.count + 1000;
    let mut points = Vec::with_capacity(sampler.count);
    let mut rejected = 0;
    let w = sampler.half_width;
    while points.len() < sampler.count && points.len() + rejected < max_attempts {
        let t = [rng.gen_range(-w..=w), rng.gen_range(-w..=w), rng.gen_range(-w..=w)];
        if backend.check_regular_point(t).is_ok() {
            points.push(t);
        } else {
            rejected += 1;
        }
    }
    if points.len() < sampler.count {
        return Err(Error::Sampling(format!(
            "only {} of {} regular points found in [-{w}, {w}]^3 after {max_attempts} draws ({backend})",
            points.len(),
            sampler.count
        )));
    }
    Ok((points, rejected))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualStats {
    pub worst_residual: f64,
    pub worst_point: [f64; 3],
    pub samples: usize,
    pub rejected: usize,
}

fn compile_entries(d: &MatDiffOp) -> Vec<CompiledPoly> {
    d.coeffs().flat_map(|(_, m)| m.iter().flatten().filter(|p| !p.is_zero()).map(|p| p.compile())).collect()
}

fn max_abs(polys: &[CompiledPoly], values: &PointValues) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for p in polys {
        let v = p.eval(values)?.abs();
        worst = if v.is_nan() { f64::INFINITY } else { worst.max(v) };
    }
    Ok(worst)
}

/// Largest normalized coefficient of `d` over the sampled points. At each point
/// the largest `|entry|` of `d` is divided by the largest `|entry|` among the
/// `inputs` that produced it (1 if they all vanish there).
pub fn numeric_residual(
    d: &MatDiffOp,
    inputs: &[&MatDiffOp],
    backend: &PotentialBackend,
    k: f64,
    sampler: &Sampler,
) -> Result<ResidualStats> {
    let (points, rejected) = sample_points(backend, sampler)?;
    let target = compile_entries(d);
    let scale: Vec<CompiledPoly> = inputs.iter().flat_map(|op| compile_entries(op)).collect();
    let order = inputs.iter().map(|op| op.max_beta_order()).chain([d.max_beta_order()]).max().unwrap_or(0);

    let residuals: Vec<f64> = points
        .par_iter()
        .map(|&t| {
            let values = PointValues::new(backend, t, k, order)?;
            let num = max_abs(&target, &values)?;
            let den = max_abs(&scale, &values)?;
            Ok(if den > 0.0 { num / den } else { num })
        })
        .collect::<Result<_>>()?;

    let (idx, worst) =
        residuals
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok(ResidualStats { worst_residual: worst, worst_point: points[idx], samples: points.len(), rejected })
}

/// Central-difference stencil of the `n`-th derivative: `(offset, weight)` with
/// weights to be divided by `hⁿ`. All are second-order accurate.
fn stencil(n: u32) -> Result<&'static [(i32, f64)]> {
    Ok(match n {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        _ => return Err(Error::Domain(format!("finite-difference oracle supports ∂ᵢ orders ≤ 3, got {n}"))),
    })
}

fn fd_partial(
    f: &VectorFn,
    backend: &PotentialBackend,
    t: [f64; 3],
    h: f64,
    alpha: MultiIndex,
) -> Result<ComplexVector> {
    let [s1, s2, s3] = [stencil(alpha.0[0])?, stencil(alpha.0[1])?, stencil(alpha.0[2])?];
    let scale = h.powi(alpha.order() as i32);
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for &(o1, w1) in s1 {
        for &(o2, w2) in s2 {
            for &(o3, w3) in s3 {
                let x = [t[0] + o1 as f64 * h, t[1] + o2 as f64 * h, t[2] + o3 as f64 * h];
                backend.check_regular_point(x)?;
                let v = f(x)?;
                let w = w1 * w2 * w3 / scale;
                for (a, vi) in acc.iter_mut().zip(v) {
                    *a += vi * w;
                }
            }
        }
    }
    Ok(acc)
}

/// `(D f)(t)` with every `∂^α f` replaced by a central difference of step `h`
/// and coefficients evaluated numerically at `t`. Error is `O(h²)`.
pub fn fd_apply_oracle(
    d: &MatDiffOp,
    f: &VectorFn,
    backend: &PotentialBackend,
    k: f64,
    t: [f64; 3],
    h: f64,
) -> Result<ComplexVector> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Domain(format!("finite-difference step must be positive, got {h}")));
    }
    let values = PointValues::new(backend, t, k, d.max_beta_order())?;
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (alpha, m) in d.coeffs() {
        let df = fd_partial(f, backend, t, h, *alpha)?;
        for i in 0..3 {
            for j in 0..3 {
                if !m[i][j].is_zero() {
                    out[i] += m[i][j].eval(&values)? * df[j];
                }
            }
        }
    }
    Ok(out)
}
