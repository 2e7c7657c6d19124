//! Numeric potential backends.
//!
//! Jacobi elliptic functions are computed by the descending Landen (AGM)
//! transformation; the four solution families of `β′² = (β² + A)(β² + B)`
//! and a negative control share one derivative recurrence:
//! ```text
//! β″ = c₃β³ + c₁β,   (c₃, c₁) = (2, A + B) for solutions, (-2, 1) for 1/cosh
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::diffring::{rational, Rational};
use crate::{Error, Result};

/// Points closer than this to the singular set are rejected.
pub const GUARD_RADIUS: f64 = 0.05;

/// `|sn|` (or the corresponding denominator) below this is treated as a pole.
pub const POLE_GUARD: f64 = 1e-8;

const LANDEN_MODULUS_TOL: f64 = 1e-15;
const LANDEN_MAX_ITER: usize = 32;

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Jacobi `sn, cn, dn` of `x` with parameter `m = κ ∈ [0, 1]` (so `dn² + κ sn² = 1`).
pub fn jacobi_sn_cn_dn(x: f64, kappa: f64) -> Result<EllipticTriple> {
    if !(0.0..=1.0).contains(&kappa) || kappa.is_nan() {
        return Err(Error::Domain(format!("elliptic parameter κ = {kappa} outside [0, 1]")));
    }
    if kappa == 0.0 {
        return Ok(EllipticTriple { sn: x.sin(), cn: x.cos(), dn: 1.0 });
    }
    if kappa == 1.0 {
        let sech = 1.0 / x.cosh();
        return Ok(EllipticTriple { sn: x.tanh(), cn: sech, dn: sech });
    }

    // Descending Landen: a ← (a + b)/2, b ← √(ab), starting from (1, √(1-κ)).
    let mut a = 1.0;
    let mut b2 = 1.0 - kappa;
    let mut ams = Vec::with_capacity(LANDEN_MAX_ITER);
    let mut bms = Vec::with_capacity(LANDEN_MAX_ITER);
    let mut mean;
    loop {
        let b = b2.sqrt();
        ams.push(a);
        bms.push(b);
        mean = 0.5 * (a + b);
        let modulus = (a - b) / (a + b);
        if modulus * modulus < LANDEN_MODULUS_TOL || ams.len() == LANDEN_MAX_ITER {
            break;
        }
        b2 = a * b;
        a = mean;
    }

    let u = x * mean;
    let mut sn = u.sin();
    let mut cn = u.cos();
    let mut dn = 1.0;
    if sn != 0.0 {
        // Ascend back through the stored means, carrying cn/sn.
        let mut ratio = cn / sn;
        let mut c = mean * ratio;
        for (&am, &bm) in ams.iter().zip(&bms).rev() {
            ratio *= c;
            c *= dn;
            dn = (bm + ratio) / (am + ratio);
            ratio = c / am;
        }
        let s = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { s } else { -s };
        cn = c * sn;
    }
    Ok(EllipticTriple { sn, cn, dn })
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..LANDEN_MAX_ITER {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// Complete elliptic integral of the first kind `K(κ)`, infinite at `κ = 1`.
pub fn complete_k(kappa: f64) -> f64 {
    if kappa >= 1.0 {
        return f64::INFINITY;
    }
    PI / (2.0 * agm(1.0, (1.0 - kappa).sqrt()))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// β = 1/t
    Rational,
    /// β = 1/sinh t
    Hyperbolic,
    /// β = 1/sin t
    Trig,
    /// β = a / sn(a t | κ)
    Elliptic { a: f64, kappa: f64 },
    /// β = 1/cosh t: even, hence outside the solution family.
    #[serde(rename = "invcosh")]
    InvCoshControl,
}

/// Numeric evaluator for one β family.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PotentialBackend {
    family: Family,
}

impl fmt::Display for PotentialBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Rational => f.write_str("rational"),
            Family::Hyperbolic => f.write_str("hyperbolic"),
            Family::Trig => f.write_str("trig"),
            Family::Elliptic { a, kappa } => write!(f, "elliptic(a={a}, kappa={kappa})"),
            Family::InvCoshControl => f.write_str("invcosh"),
        }
    }
}

impl PotentialBackend {
    pub fn new(family: Family) -> Result<Self> {
        if let Family::Elliptic { a, kappa } = family {
            if a == 0.0 || !a.is_finite() {
                return Err(Error::Domain(format!("elliptic amplitude a = {a} must be finite and nonzero")));
            }
            if !(0.0..=1.0).contains(&kappa) {
                return Err(Error::Domain(format!("elliptic parameter κ = {kappa} outside [0, 1]")));
            }
        }
        Ok(PotentialBackend { family })
    }

    pub fn rational() -> Self {
        PotentialBackend { family: Family::Rational }
    }

    pub fn hyperbolic() -> Self {
        PotentialBackend { family: Family::Hyperbolic }
    }

    pub fn trig() -> Self {
        PotentialBackend { family: Family::Trig }
    }

    pub fn elliptic(a: f64, kappa: f64) -> Result<Self> {
        Self::new(Family::Elliptic { a, kappa })
    }

    pub fn inv_cosh() -> Self {
        PotentialBackend { family: Family::InvCoshControl }
    }

    /// Parses a CLI family name; `a` and `kappa` are only used by `elliptic`.
    pub fn from_name(name: &str, a: f64, kappa: f64) -> Result<Self> {
        match name {
            "rational" => Ok(Self::rational()),
            "hyperbolic" => Ok(Self::hyperbolic()),
            "trig" => Ok(Self::trig()),
            "elliptic" => Self::elliptic(a, kappa),
            "invcosh" => Ok(Self::inv_cosh()),
            other => Err(Error::Usage(format!(
                "unknown family `{other}` (expected rational|hyperbolic|trig|elliptic|invcosh)"
            ))),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn is_solution(&self) -> bool {
        self.family != Family::InvCoshControl
    }

    pub fn supports_coth(&self) -> bool {
        self.family == Family::Hyperbolic
    }

    /// `(A, B)` with `β′² = (β² + A)(β² + B)`; `None` for the negative control.
    pub fn params(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::Rational => Some((0.0, 0.0)),
            Family::Hyperbolic => Some((1.0, 0.0)),
            Family::Trig => Some((-1.0, 0.0)),
            Family::Elliptic { a, kappa } => Some((-a * a, -kappa * a * a)),
            Family::InvCoshControl => None,
        }
    }

    /// Exact `(A, B)` for the families where they are rational constants.
    pub fn exact_params(&self) -> Option<(Rational, Rational)> {
        match self.family {
            Family::Rational => Some((rational(0, 1), rational(0, 1))),
            Family::Hyperbolic => Some((rational(1, 1), rational(0, 1))),
            Family::Trig => Some((rational(-1, 1), rational(0, 1))),
            _ => None,
        }
    }

    /// `(c₃, c₁)` with `β″ = c₃β³ + c₁β`.
    fn ode_coeffs(&self) -> (f64, f64) {
        match self.params() {
            Some((a, b)) => (2.0, a + b),
            None => (-2.0, 1.0),
        }
    }

    fn beta_and_prime(&self, t: f64) -> Result<(f64, f64)> {
        let singular = || Error::Singular(format!("β pole at t = {t} ({self})"));
        match self.family {
            Family::Rational => {
                if t.abs() < POLE_GUARD {
                    return Err(singular());
                }
                Ok((1.0 / t, -1.0 / (t * t)))
            }
            Family::Hyperbolic => {
                let s = t.sinh();
                if s.abs() < POLE_GUARD {
                    return Err(singular());
                }
                Ok((1.0 / s, -t.cosh() / (s * s)))
            }
            Family::Trig => {
                let s = t.sin();
                if s.abs() < POLE_GUARD {
                    return Err(singular());
                }
                Ok((1.0 / s, -t.cos() / (s * s)))
            }
            Family::Elliptic { a, kappa } => {
                let e = jacobi_sn_cn_dn(a * t, kappa)?;
                if e.sn.abs() < POLE_GUARD {
                    return Err(singular());
                }
                Ok((a / e.sn, -a * a * e.cn * e.dn / (e.sn * e.sn)))
            }
            Family::InvCoshControl => {
                let c = t.cosh();
                Ok((1.0 / c, -t.sinh() / (c * c)))
            }
        }
    }

    pub fn beta(&self, t: f64) -> Result<f64> {
        Ok(self.beta_and_prime(t)?.0)
    }

    /// `[β(t), β′(t), …, β⁽ⁿ⁾(t)]`; orders ≥ 2 come from the recurrence.
    pub fn beta_derivs(&self, t: f64, max_order: u32) -> Result<Vec<f64>> {
        let (b, bp) = self.beta_and_prime(t)?;
        let mut out = vec![b];
        if max_order >= 1 {
            out.push(bp);
        }
        if max_order >= 2 {
            let (c3, c1) = self.ode_coeffs();
            for poly in derivative_polys(c3, c1, max_order).iter().skip(2) {
                out.push(poly.eval(b, bp));
            }
        }
        Ok(out)
    }

    pub fn coth(&self, t: f64) -> Result<f64> {
        if !self.supports_coth() {
            return Err(Error::Domain(format!("coth generator is only defined for the hyperbolic family, not {self}")));
        }
        let s = t.sinh();
        if s.abs() < POLE_GUARD {
            return Err(Error::Singular(format!("coth pole at t = {t}")));
        }
        Ok(t.cosh() / s)
    }

    /// Distance from `x` to the nearest real pole of β.
    pub fn pole_distance(&self, x: f64) -> f64 {
        match self.family {
            Family::Rational | Family::Hyperbolic => x.abs(),
            Family::Trig => distance_to_lattice(x, PI),
            Family::Elliptic { a, kappa } => {
                if kappa >= 1.0 {
                    x.abs()
                } else {
                    distance_to_lattice(x, 2.0 * complete_k(kappa) / a.abs())
                }
            }
            Family::InvCoshControl => f64::INFINITY,
        }
    }

    /// Rejects points with some `|t_i − t_j|`, or its distance to a pole of β,
    /// below [`GUARD_RADIUS`].
    pub fn check_regular_point(&self, t: [f64; 3]) -> Result<()> {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let d = t[i] - t[j];
            if d.abs() < GUARD_RADIUS || self.pole_distance(d) < GUARD_RADIUS {
                return Err(Error::Singular(format!(
                    "t{}{} = {d} within guard radius {GUARD_RADIUS} of the singular set ({self})",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(())
    }

    pub fn check_regular_argument(&self, x: f64) -> Result<()> {
        if self.pole_distance(x) < GUARD_RADIUS {
            return Err(Error::Singular(format!("argument {x} within guard radius of a pole ({self})")));
        }
        Ok(())
    }
}

fn distance_to_lattice(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    r.min(period - r)
}

/// Polynomial in `(β, β′)`: map from exponents `(i, j)` to coefficient.
#[derive(Clone, Debug, Default, PartialEq)]
struct JetPoly(BTreeMap<(u32, u32), f64>);

impl JetPoly {
    fn eval(&self, b: f64, bp: f64) -> f64 {
        self.0.iter().map(|(&(i, j), c)| c * b.powi(i as i32) * bp.powi(j as i32)).sum()
    }

    fn add(&mut self, key: (u32, u32), c: f64) {
        *self.0.entry(key).or_insert(0.0) += c;
    }

    /// d/dt using β′ = β′ and β″ = c₃β³ + c₁β.
    fn differentiate(&self, c3: f64, c1: f64) -> JetPoly {
        let mut out = JetPoly::default();
        for (&(i, j), &c) in &self.0 {
            if i > 0 {
                out.add((i - 1, j + 1), c * i as f64);
            }
            if j > 0 {
                out.add((i + 3, j - 1), c * j as f64 * c3);
                out.add((i + 1, j - 1), c * j as f64 * c1);
            }
        }
        out.0.retain(|_, c| *c != 0.0);
        out
    }
}

fn derivative_polys(c3: f64, c1: f64, max_order: u32) -> Vec<JetPoly> {
    let mut polys = vec![JetPoly([((1, 0), 1.0)].into()), JetPoly([((0, 1), 1.0)].into())];
    while polys.len() <= max_order as usize {
        let next = polys.last().expect("non-empty").differentiate(c3, c1);
        polys.push(next);
    }
    polys
}

/// `δ_k^{1/2}(t) = ∏_{i<j} sinh(t_i − t_j)^k`, the half density of the
/// hyperbolic weight.
pub fn delta_half(k: f64, t: [f64; 3]) -> Result<f64> {
    let integral = k.fract() == 0.0;
    let mut prod = 1.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let d = t[i] - t[j];
        if d.abs() < POLE_GUARD {
            return Err(Error::Singular(format!("coincident coordinates t{} = t{}", i + 1, j + 1)));
        }
        let s = d.sinh();
        if s < 0.0 && !integral {
            return Err(Error::Domain(format!(
                "sinh(t{}{}) < 0 with non-integer k = {k}: outside the chamber t1 > t2 > t3",
                i + 1,
                j + 1
            )));
        }
        prod *= if integral { s.powi(k as i32) } else { s.powf(k) };
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn degenerate_parameters() {
        let e = jacobi_sn_cn_dn(0.5, 0.0).unwrap();
        assert!((e.sn - 0.479_425_538_604_203).abs() < 1e-15);
        let e = jacobi_sn_cn_dn(0.8, 1.0).unwrap();
        assert!((e.sn - 0.664_036_770_267_849).abs() < 1e-15);
    }

    #[test]
    fn parameter_domain() {
        assert!(matches!(jacobi_sn_cn_dn(0.1, -0.1), Err(Error::Domain(_))));
        assert!(matches!(jacobi_sn_cn_dn(0.1, 1.5), Err(Error::Domain(_))));
        assert!(PotentialBackend::elliptic(0.0, 0.5).is_err());
        assert!(PotentialBackend::elliptic(1.0, 1.2).is_err());
    }

    #[test]
    fn identities_hold_mid_range() {
        let e = jacobi_sn_cn_dn(0.7, 0.36).unwrap();
        assert!((e.sn * e.sn + e.cn * e.cn - 1.0).abs() < 1e-12);
        assert!((e.dn * e.dn + 0.36 * e.sn * e.sn - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_period_values() {
        for m in [0.1, 0.5, 0.9] {
            let k = complete_k(m);
            let e = jacobi_sn_cn_dn(k, m).unwrap();
            assert!(rel(e.sn, 1.0) < 1e-13, "sn(K) for m={m}: {}", e.sn);
            assert!(rel(e.dn, (1.0 - m).sqrt()) < 1e-13);
        }
    }

    #[test]
    fn complete_integral_reference() {
        // K(1/2) = Γ(1/4)² / (4√π)
        assert!(rel(complete_k(0.5), 1.854_074_677_301_372) < 1e-14);
        assert!(rel(complete_k(0.0), PI / 2.0) < 1e-15);
    }

    #[test]
    fn rational_derivatives() {
        let d = PotentialBackend::rational().beta_derivs(2.0, 2).unwrap();
        assert_eq!(d, vec![0.5, -0.25, 0.25]);
        let h = PotentialBackend::hyperbolic().beta_derivs(1.0, 0).unwrap();
        assert!((h[0] - 0.850_918_128_239_321_5).abs() < 1e-15);
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(PotentialBackend::rational().beta(0.0), Err(Error::Singular(_))));
        let e = PotentialBackend::elliptic(1.0, 0.5).unwrap();
        let period = 2.0 * complete_k(0.5);
        assert!(e.pole_distance(period + 0.01) < 0.011);
        assert!(e.check_regular_point([period + 0.01, 0.0, -1.0]).is_err());
        assert!(PotentialBackend::trig().check_regular_point([PI, 0.0, 1.0]).is_err());
        assert!(PotentialBackend::inv_cosh().check_regular_point([0.03, 0.0, 1.0]).is_err());
    }

    #[test]
    fn coth_only_hyperbolic() {
        assert!(PotentialBackend::rational().coth(1.0).is_err());
        assert!((PotentialBackend::hyperbolic().coth(1.0).unwrap() - 1.0f64.cosh() / 1.0f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn delta_half_domain() {
        assert_eq!(delta_half(0.0, [0.3, -1.0, 2.0]).unwrap(), 1.0);
        assert!(matches!(delta_half(1.0, [1.0, 1.0, 0.0]), Err(Error::Singular(_))));
        assert!(matches!(delta_half(0.5, [0.0, 1.0, 2.0]), Err(Error::Domain(_))));
        // integer k is fine outside the chamber
        assert!(delta_half(1.0, [0.0, 1.0, 2.0]).unwrap() < 0.0);
    }

    #[test]
    fn delta_half_values() {
        // direct product oracle: sinh(1)² sinh(2)
        let full = delta_half(1.0, [1.0, 0.0, -1.0]).unwrap();
        assert!(rel(full, 5.009_049_095_358_428) < 1e-14, "{full}");
        let half = delta_half(0.5, [2.0, 1.0, 0.0]).unwrap();
        assert!(rel(half, 2.238_090_502_048_214) < 1e-14, "{half}");
    }

    /// Taylor series of sn from `y″ = −(1+m)y + 2my³`, `y(0) = 0`, `y′(0) = 1`.
    fn sn_taylor(x: f64, m: f64, terms: usize) -> f64 {
        let mut a = vec![0.0; terms];
        a[1] = 1.0;
        for n in 0..terms - 2 {
            let mut cube = 0.0;
            for i in 0..=n {
                for j in 0..=n - i {
                    cube += a[i] * a[j] * a[n - i - j];
                }
            }
            a[n + 2] = (-(1.0 + m) * a[n] + 2.0 * m * cube) / ((n + 2) as f64 * (n + 1) as f64);
        }
        a.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    #[test]
    fn sn_matches_taylor_oracle() {
        for (x, m) in [(0.7, 0.36), (0.3, 0.9), (1.1, 0.1), (0.5, 0.5)] {
            let e = jacobi_sn_cn_dn(x, m).unwrap();
            let oracle = sn_taylor(x, m, 80);
            assert!(rel(e.sn, oracle) < 1e-13, "x={x} m={m}: {} vs {oracle}", e.sn);
        }
    }

    fn richardson(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
        let d = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    }

    #[test]
    fn recurrence_matches_finite_differences() {
        let backends = [
            PotentialBackend::elliptic(1.0, 0.5).unwrap(),
            PotentialBackend::elliptic(1.7, 0.2).unwrap(),
            PotentialBackend::hyperbolic(),
            PotentialBackend::trig(),
            PotentialBackend::rational(),
            PotentialBackend::inv_cosh(),
        ];
        for b in &backends {
            let d = b.beta_derivs(0.9, 3).unwrap();
            for (n, &exact) in d.iter().enumerate().skip(2) {
                let fd = richardson(|x| b.beta_derivs(x, 2).unwrap()[n - 1], 0.9, 1e-3);
                assert!(rel(exact, fd) < 1e-7, "{b} n={n}: {exact} vs {fd}");
            }
        }
    }

    #[test]
    fn degenerations() {
        let a = 1.3;
        let flat = PotentialBackend::elliptic(a, 0.0).unwrap();
        let sharp = PotentialBackend::elliptic(a, 1.0).unwrap();
        for t in [0.2, 0.7, -1.1, 1.9] {
            let trig = a / (a * t).sin();
            assert!(rel(flat.beta(t).unwrap(), trig) < 1e-12);
            let hyp = a / (a * t).tanh();
            assert!(rel(sharp.beta(t).unwrap(), hyp) < 1e-12);
        }
        let near = PotentialBackend::elliptic(a, 1e-9).unwrap();
        assert!(rel(near.beta(0.7).unwrap(), a / (a * 0.7).sin()) < 1e-8);
    }

    #[test]
    fn control_violates_ode() {
        let c = PotentialBackend::inv_cosh();
        for t in [0.4, 1.0, -0.8] {
            let d = c.beta_derivs(t, 1).unwrap();
            let residual = d[1] * d[1] - d[0].powi(4);
            assert!(residual.abs() > 1e-2, "t={t}: {residual}");
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(100))]

        #[test]
        fn ode_residual_and_oddness(t in -3.0f64..3.0, a in 0.5f64..2.0, kappa in 0.0f64..1.0) {
            let backends = [
                PotentialBackend::rational(),
                PotentialBackend::hyperbolic(),
                PotentialBackend::trig(),
                PotentialBackend::elliptic(a, kappa).unwrap(),
            ];
            for b in &backends {
                if b.check_regular_argument(t).is_err() {
                    continue;
                }
                let (pa, pb) = b.params().unwrap();
                let d = b.beta_derivs(t, 1).unwrap();
                let rhs = (d[0] * d[0] + pa) * (d[0] * d[0] + pb);
                proptest::prop_assert!((d[1] * d[1] - rhs).abs() <= 1e-10 * rhs.abs().max(d[1] * d[1]).max(1.0), "{} t={}", b, t);
                let odd = b.beta(-t).unwrap() + d[0];
                proptest::prop_assert!(odd.abs() <= 1e-12 * d[0].abs().max(1.0), "{} t={}", b, t);
            }
        }
    }
}
