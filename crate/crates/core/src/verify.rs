//! Check suites producing structured [`VerificationReport`]s.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{self, GroupCase, KValue};
use crate::diffring::{rational, Rational, TableKind};
use crate::elliptic::{self, PotentialBackend, GUARD_RADIUS};
use crate::opalgebra::{self, ComplexVector, MatDiffOp, Sampler, WeylElement};
use crate::{Error, Result};

pub const COMMUTE_TOL: f64 = 1e-9;
pub const FUNCEQ_TOL: f64 = 1e-11;
/// A negative control counts as rejected when its residual exceeds this.
pub const CONTROL_THRESHOLD: f64 = 1e-3;
pub const DEFAULT_BOX: f64 = 2.0;

const UNTESTED_COMPLEX: &str = "complex a and κ are not exercised; only real a ≠ 0, κ ∈ [0, 1] backends are tested";
const NORM_NOTE: &str = "residual = max |coefficient entry| / max |input coefficient entry| at the same point";

/// k values used when a symbolic-k statement is re-checked numerically.
pub fn numeric_k_grid() -> Vec<KValue> {
    vec![KValue::rational(1, 2), KValue::rational(1, 1), KValue::rational(2, 1), KValue::rational(37, 100)]
}

/// The six solution backends of the default suite.
pub fn solution_backends() -> Vec<PotentialBackend> {
    vec![
        PotentialBackend::rational(),
        PotentialBackend::hyperbolic(),
        PotentialBackend::trig(),
        PotentialBackend::elliptic(1.0, 0.3).expect("valid"),
        PotentialBackend::elliptic(0.7, 0.8).expect("valid"),
        PotentialBackend::elliptic(1.5, 0.1).expect("valid"),
    ]
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "numeric")]
    Numeric,
    #[serde(rename = "on-shell")]
    OnShell,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
            Mode::OnShell => "on-shell",
        })
    }
}

/// Parameters of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckSpec {
    pub ops: Vec<String>,
    pub backend: PotentialBackend,
    pub k_values: Vec<KValue>,
    pub samples: usize,
    pub seed: u64,
    pub half_width: f64,
    pub tolerance: f64,
}

impl Default for CheckSpec {
    fn default() -> Self {
        CheckSpec {
            ops: vec!["Q1".into(), "P2".into()],
            backend: PotentialBackend::hyperbolic(),
            k_values: vec![KValue::Symbolic],
            samples: 200,
            seed: 0,
            half_width: DEFAULT_BOX,
            tolerance: COMMUTE_TOL,
        }
    }
}

impl CheckSpec {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Usage(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.samples == 0 {
            return Err(Error::Usage("sample count must be at least 1".into()));
        }
        if !self.half_width.is_finite() || self.half_width <= GUARD_RADIUS {
            return Err(Error::Usage(format!("box half-width must exceed the guard radius {GUARD_RADIUS}")));
        }
        if self.k_values.is_empty() {
            return Err(Error::Usage("at least one k value is required".into()));
        }
        Ok(())
    }

    fn sampler(&self) -> Sampler {
        Sampler::new(self.seed, self.samples, self.half_width)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub mode: Mode,
    pub pass: bool,
    pub worst_residual: f64,
    pub worst_point: Option<Vec<f64>>,
    pub samples: usize,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub backend: Option<String>,
    pub elapsed_ms: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(name: impl Into<String>, mode: Mode) -> Self {
        VerificationReport {
            name: name.into(),
            mode,
            pass: true,
            worst_residual: 0.0,
            worst_point: None,
            samples: 0,
            seed: None,
            tolerance: None,
            backend: None,
            elapsed_ms: 0.0,
            notes: Vec::new(),
        }
    }

    fn finish(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    fn record(&mut self, residual: f64, point: Vec<f64>) {
        if residual > self.worst_residual || residual.is_nan() || self.worst_point.is_none() {
            self.worst_residual = if residual.is_nan() { f64::INFINITY } else { residual };
            self.worst_point = Some(point);
        }
    }

    /// Copy with `elapsed_ms` zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport { elapsed_ms: 0.0, ..self.clone() }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} [{}]", if self.pass { "PASS" } else { "FAIL" }, self.name, self.mode)?;
        if let Some(b) = &self.backend {
            write!(f, " backend={b}")?;
        }
        if self.mode == Mode::Numeric {
            write!(f, " worst={:.3e}", self.worst_residual)?;
            if let Some(p) = &self.worst_point {
                let coords: Vec<String> = p.iter().map(|x| format!("{x:.6}")).collect();
                write!(f, " at ({})", coords.join(", "))?;
            }
            write!(f, " samples={}", self.samples)?;
        }
        if let Some(s) = self.seed {
            write!(f, " seed={s}")?;
        }
        if let Some(t) = self.tolerance {
            write!(f, " tol={t:e}")?;
        }
        for n in &self.notes {
            write!(f, "\n    {n}")?;
        }
        Ok(())
    }
}

/// Wraps a check that must fail: passes iff the inner check failed with a
/// residual above [`CONTROL_THRESHOLD`].
pub fn negative_control(inner: VerificationReport) -> VerificationReport {
    let rejected = !inner.pass && inner.worst_residual > CONTROL_THRESHOLD;
    let mut r = inner.clone();
    r.name = format!("control: {}", inner.name);
    r.pass = rejected;
    r.notes.push(format!(
        "negative control: expected the inner check to fail with residual > {CONTROL_THRESHOLD:e}; inner pass = {}",
        inner.pass
    ));
    r
}

fn uses_coth(ops: &[String]) -> bool {
    ops.iter().any(|o| catalog::is_hyperbolic_only(o))
}

fn k_float(k: &KValue) -> f64 {
    k.to_f64().expect("numeric k")
}

/// Commutators of every pair in `spec.ops`. Pairs whose symbolic-k commutator
/// is the zero operator pass exactly; the rest are sampled numerically on
/// `spec.backend` at each k (the default grid when k is symbolic).
pub fn check_commutativity(spec: &CheckSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let start = Instant::now();
    if spec.ops.len() < 2 {
        return Err(Error::Usage("commutativity needs at least two operators".into()));
    }
    for op in &spec.ops {
        catalog::build_named(op, TableKind::Hyperbolic, &KValue::Symbolic)?;
    }
    let hyper = uses_coth(&spec.ops);
    if hyper && spec.backend != PotentialBackend::hyperbolic() {
        return Err(Error::Usage(format!(
            "operators {} need coth generators; use --family hyperbolic",
            spec.ops.join(",")
        )));
    }
    let (exact_table, numeric_table) =
        if hyper { (TableKind::Hyperbolic, TableKind::Hyperbolic) } else { (TableKind::General, TableKind::Jet) };

    let mut report = VerificationReport::new(format!("commute[{}]", spec.ops.join(",")), Mode::Exact);
    report.backend = Some(spec.backend.to_string());
    report.seed = Some(spec.seed);
    report.tolerance = Some(spec.tolerance);

    let mut numeric_ks: Vec<KValue> = Vec::new();
    for k in &spec.k_values {
        match k {
            KValue::Symbolic => numeric_ks.extend(numeric_k_grid()),
            k => numeric_ks.push(k.clone()),
        }
    }
    numeric_ks.dedup();

    for i in 0..spec.ops.len() {
        for j in i + 1..spec.ops.len() {
            let (a, b) = (&spec.ops[i], &spec.ops[j]);
            let exact = catalog::build_named(a, exact_table, &KValue::Symbolic)?.commutator(&catalog::build_named(
                b,
                exact_table,
                &KValue::Symbolic,
            )?)?;
            if exact.is_zero() {
                report.notes.push(format!("[{a},{b}] = 0 exactly for symbolic k"));
                continue;
            }
            report.mode = Mode::Numeric;
            let da = catalog::build_named(a, numeric_table, &KValue::Symbolic)?;
            let db = catalog::build_named(b, numeric_table, &KValue::Symbolic)?;
            let comm = da.commutator(&db)?;
            report
                .notes
                .push(format!("[{a},{b}] has {} nonzero terms symbolically; sampled numerically", exact.term_count()));
            for k in &numeric_ks {
                let kf = k_float(k);
                let stats = opalgebra::numeric_residual(&comm, &[&da, &db], &spec.backend, kf, &spec.sampler())?;
                report.samples += stats.samples;
                let mut point = stats.worst_point.to_vec();
                point.push(kf);
                report.record(stats.worst_residual, point);
                report.notes.push(format!("[{a},{b}] k={k}: worst {:.3e}", stats.worst_residual));
            }
        }
    }
    if report.mode == Mode::Numeric {
        report.pass = report.worst_residual <= spec.tolerance;
        report.notes.push(format!("{NORM_NOTE}; worst_point lists (t1, t2, t3, k)"));
        report.notes.push(UNTESTED_COMPLEX.into());
    }
    Ok(report.finish(start))
}

/// The four terms `−β(s)β(s+t)², β(s)β(t)², β(s+t)β′(t), β′(s+t)β(t)`.
pub fn funceq_terms(backend: &PotentialBackend, s: f64, t: f64) -> Result<[f64; 4]> {
    let bs = backend.beta_derivs(s, 0)?[0];
    let bt = backend.beta_derivs(t, 1)?;
    let bst = backend.beta_derivs(s + t, 1)?;
    Ok([-bs * bst[0] * bst[0], bs * bt[0] * bt[0], bst[0] * bt[1], bst[1] * bt[0]])
}

/// `|Σ terms| / max(1, max |term|)`.
pub fn funceq_residual(backend: &PotentialBackend, s: f64, t: f64) -> Result<f64> {
    let terms = funceq_terms(backend, s, t)?;
    let scale = terms.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    Ok(terms.iter().sum::<f64>().abs() / scale)
}

/// Exact cancellation of the functional equation for `β = 1/t` over ℚ on a
/// 6×6 grid of positive `(s, t)`. After clearing `s t² (s+t)²` the identity
/// is a polynomial of degree ≤ 2 in each variable, so the grid proves it.
pub fn rational_funceq_exact() -> bool {
    let beta = |x: &Rational| x.recip();
    let dbeta = |x: &Rational| -(x * x).recip();
    (1..=6).all(|i| {
        (1..=6).all(|j| {
            let s = rational(i, 3);
            let t = rational(j, 2);
            let st = &s + &t;
            let total = -beta(&s) * beta(&st) * beta(&st)
                + beta(&s) * beta(&t) * beta(&t)
                + beta(&st) * dbeta(&t)
                + dbeta(&st) * beta(&t);
            total.is_zero()
        })
    })
}

/// Samples `(s, t)` uniformly in `[−box, box]²` with `s`, `t`, `s+t` all at
/// least the guard radius from the poles and from 0.
pub fn sample_pairs(backend: &PotentialBackend, samples: usize, seed: u64, half_width: f64) -> Result<Vec<(f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    let ok = |x: f64| x.abs() >= GUARD_RADIUS && backend.check_regular_argument(x).is_ok();
    for _ in 0..1000 * samples + 1000 {
        if out.len() == samples {
            break;
        }
        let s = rng.gen_range(-half_width..=half_width);
        let t = rng.gen_range(-half_width..=half_width);
        if ok(s) && ok(t) && ok(s + t) {
            out.push((s, t));
        }
    }
    if out.len() < samples {
        return Err(Error::Sampling(format!("only {} of {samples} regular (s, t) pairs found ({backend})", out.len())));
    }
    Ok(out)
}

pub fn check_functional_equation(
    backend: &PotentialBackend,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    if tol.is_nan() || tol <= 0.0 || samples == 0 {
        return Err(Error::Usage("functional equation needs tol > 0 and at least one sample".into()));
    }
    let start = Instant::now();
    let mut report = VerificationReport::new("funceq", Mode::Numeric);
    report.backend = Some(backend.to_string());
    report.seed = Some(seed);
    report.tolerance = Some(tol);
    for (s, t) in sample_pairs(backend, samples, seed, DEFAULT_BOX)? {
        report.record(funceq_residual(backend, s, t)?, vec![s, t]);
        report.samples += 1;
    }
    report.pass = report.worst_residual <= tol;
    report.notes.push("residual = |sum of the four terms| / max(1, max |term|); worst_point is (s, t)".into());
    if *backend == PotentialBackend::rational() {
        let exact = rational_funceq_exact();
        report.pass &= exact;
        report.notes.push(format!("exact rational cancellation for beta = 1/t: {exact}"));
    }
    Ok(report.finish(start))
}

fn table_for(name: &str) -> TableKind {
    if catalog::is_hyperbolic_only(name) {
        TableKind::Hyperbolic
    } else {
        TableKind::General
    }
}

/// `D^w = P_w⁻¹ D P_w` for all six `w ∈ S₃`, exactly.
pub fn check_equivariance(name: &str, k: &KValue) -> Result<VerificationReport> {
    let op = catalog::build_named(name, table_for(name), k)?;
    Ok(check_equivariance_op(&format!("equivariance[{name}]"), &op))
}

pub fn check_equivariance_op(label: &str, op: &MatDiffOp) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(label, Mode::Exact);
    let failing: Vec<String> =
        WeylElement::all().iter().filter(|w| !op.is_equivariant_under(w)).map(|w| w.to_string()).collect();
    report.pass = failing.is_empty();
    report.worst_residual = failing.len() as f64;
    report.samples = 6;
    if !failing.is_empty() {
        report.notes.push(format!("fails for {}", failing.join(", ")));
    }
    report.finish(start)
}

/// `δ^{1/2} ∘ Q̃₁ ∘ δ^{−1/2} = Q₁` and `δ^{1/2} ∘ P̃₂ ∘ δ^{−1/2} = P₂` in the
/// hyperbolic table. The second identity is reduced with the cross-pair coth
/// addition relation, which the per-pair rewrites do not contain.
pub fn check_gauge(k: &KValue) -> Result<VerificationReport> {
    let start = Instant::now();
    let h = TableKind::Hyperbolic;
    let chi = catalog::delta_half_chi(k);
    let mut report = VerificationReport::new(format!("gauge[k={k}]"), Mode::Exact);

    let q_diff = catalog::build_tilde_q1(k).conjugate(&chi)?.checked_sub(&catalog::build_q1(h, k))?;
    let q_ok = q_diff.is_zero();
    report.notes.push(format!("conj(tildeQ1) - Q1 = 0 in canonical form: {q_ok}"));

    let p_raw = catalog::build_tilde_p2(k).conjugate(&chi)?.checked_sub(&catalog::build_p2(h, k))?;
    let p_diff = p_raw.reduce_coth_addition();
    let p_ok = p_diff.is_zero();
    report.notes.push(format!(
        "conj(tildeP2) - P2: {} terms before, {} after reducing by coth t12 coth t23 = coth t13 (coth t12 + coth t23) - 1",
        p_raw.term_count(),
        p_diff.term_count()
    ));

    let zero = Complex64::zero();
    let (_, shift) = catalog::hc_eigenvalues([zero; 3], Complex64::new(1.0, 0.0))?;
    report.notes.push(format!("constant -4k^2 in tildeP2 matches the image gamma(D2)(0) = 4k^2 (k=1: {})", shift.re));

    report.pass = q_ok && p_ok;
    report.worst_residual = (q_diff.term_count() + p_diff.term_count()) as f64;
    Ok(report.finish(start))
}

/// The six group-case operators against `R_τ(D₁)`, `R_τ(D₂)` at their k,
/// compared through the full symbol on `λ₁ + λ₂ + λ₃ = 0`.
pub fn check_group_consistency() -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new("group-consistency", Mode::OnShell);
    for case in GroupCase::ALL {
        let k = case.k();
        let pairs = [
            ("first", catalog::build_group_firstorder(case), catalog::build_rtau_d1(&k), "RtauD1"),
            ("casimir", catalog::build_group_casimir(case), catalog::build_rtau_d2(&k), "RtauD2"),
        ];
        for (kind, lhs, rhs, rname) in pairs {
            let ok = lhs.on_shell_eq(&rhs)?;
            if !ok {
                report.worst_residual += 1.0;
            }
            report.pass &= ok;
            report.samples += 1;
            report.notes.push(format!(
                "{kind}_{} vs {rname}(k={k}): {}",
                case.label(),
                if ok { "equal" } else { "DIFFER" }
            ));
        }
    }
    Ok(report.finish(start))
}

/// Elliptic-function and backend identities on random inputs.
pub fn check_elliptic(samples: usize, seed: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new("elliptic", Mode::Numeric);
    report.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratio: f64 = 0.0;
    let mut worst = |name: &str, tol: f64, values: &mut dyn Iterator<Item = Result<f64>>| -> Result<bool> {
        let mut m: f64 = 0.0;
        let mut n = 0;
        for v in values {
            let v = v?;
            m = if v.is_nan() { f64::INFINITY } else { m.max(v) };
            n += 1;
        }
        let ok = m < tol;
        ratio = ratio.max(m / tol);
        report.notes.push(format!("{name}: max {m:.3e} over {n} (tol {tol:e}) {}", if ok { "ok" } else { "FAIL" }));
        Ok(ok)
    };

    let xk: Vec<(f64, f64)> = (0..samples).map(|_| (rng.gen_range(-10.0..10.0), rng.gen_range(0.0..=1.0))).collect();
    let mut ok = worst(
        "sn^2+cn^2-1, dn^2+kappa*sn^2-1",
        1e-12,
        &mut xk.iter().map(|&(x, m)| {
            let e = elliptic::jacobi_sn_cn_dn(x, m)?;
            Ok((e.sn * e.sn + e.cn * e.cn - 1.0).abs().max((e.dn * e.dn + m * e.sn * e.sn - 1.0).abs()))
        }),
    )?;
    let xs: Vec<f64> = xk.iter().map(|p| p.0).collect();
    ok &= worst(
        "kappa=0 vs sin, kappa=1 vs tanh",
        1e-12,
        &mut xs.iter().map(|&x| {
            let a = elliptic::jacobi_sn_cn_dn(x, 0.0)?;
            let b = elliptic::jacobi_sn_cn_dn(x, 1.0)?;
            Ok((a.sn - x.sin()).abs().max((a.cn - x.cos()).abs()).max((b.sn - x.tanh()).abs()))
        }),
    )?;

    let backends = solution_backends();
    let mut ode_points = Vec::new();
    for b in &backends {
        let (a, bb) = b.params().expect("solution");
        let mut n = 0;
        while n < 100 {
            let t: f64 = rng.gen_range(-3.0..3.0);
            if b.check_regular_argument(t).is_err() || t.abs() < GUARD_RADIUS {
                continue;
            }
            ode_points.push((*b, t, a, bb));
            n += 1;
        }
    }
    ok &= worst(
        "ODE residual beta'^2 - (beta^2+A)(beta^2+B), relative",
        1e-10,
        &mut ode_points.iter().map(|&(b, t, a, bb)| {
            let d = b.beta_derivs(t, 1)?;
            let rhs = (d[0] * d[0] + a) * (d[0] * d[0] + bb);
            Ok((d[1] * d[1] - rhs).abs() / (d[1] * d[1]).max(rhs.abs()).max(1.0))
        }),
    )?;

    let fd_points: Vec<(PotentialBackend, f64)> = ode_points
        .iter()
        .filter(|&&(b, t, _, _)| b.pole_distance(t) > 0.3 && t.abs() > 0.3)
        .map(|&(b, t, _, _)| (b, t))
        .collect();
    ok &= worst(
        "recurrence vs Richardson central differences (orders 2, 3), relative",
        1e-7,
        &mut fd_points.iter().map(|&(b, t)| {
            let exact = b.beta_derivs(t, 3)?;
            let mut m: f64 = 0.0;
            for (n, &target) in exact.iter().enumerate().skip(2) {
                let g = |x: f64| -> Result<f64> { Ok(b.beta_derivs(x, n as u32 - 1)?[n - 1]) };
                let central = |h: f64| -> Result<f64> { Ok((g(t + h)? - g(t - h)?) / (2.0 * h)) };
                let h = 1e-3;
                let rich = (4.0 * central(h / 2.0)? - central(h)?) / 3.0;
                m = m.max((rich - target).abs() / target.abs().max(1.0));
            }
            Ok(m)
        }),
    )?;

    let control = PotentialBackend::inv_cosh();
    let ctl: f64 = (0..50)
        .map(|i| {
            let t = -2.0 + 4.0 * (i as f64 + 0.5) / 50.0;
            let d = control.beta_derivs(t, 1).expect("no poles");
            (d[1] * d[1] - d[0].powi(4)).abs()
        })
        .fold(0.0, f64::max);
    let ctl_ok = ctl > 1e-2;
    report.notes.push(format!("1/cosh violates beta'^2 = beta^4 by {ctl:.3e} (> 1e-2: {ctl_ok})"));
    ok &= ctl_ok;

    report.samples = samples;
    report.worst_residual = ratio;
    report.notes.push("worst_residual is the largest measured value divided by its tolerance".into());
    report.pass = ok;
    Ok(report.finish(start))
}

/// A smooth test vector function for the finite-difference oracle.
pub fn fd_test_function(x: [f64; 3]) -> Result<ComplexVector> {
    let [a, b, c] = x;
    Ok([
        Complex64::new((0.3 * a - 0.2 * b + 0.1 * c).exp(), 0.0),
        Complex64::new((a + 2.0 * c).sin(), (0.5 * b).cos()),
        Complex64::new((b - a).cos() * (1.0 + 0.2 * c * c), 0.1 * a * b),
    ])
}

/// Least-squares slope of `log r` against `log h`.
pub fn loglog_slope(hs: &[f64], rs: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let lx: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ly: Vec<f64> = rs.iter().map(|r| r.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Nested finite-difference commutator `Q₁(P₂ f) − P₂(Q₁ f)` on the hyperbolic
/// backend at k = 1, and its observed convergence order in `h`.
pub fn check_fd_convergence() -> Result<VerificationReport> {
    let start = Instant::now();
    let backend = PotentialBackend::hyperbolic();
    let k = KValue::rational(1, 1);
    let q1 = catalog::build_q1(TableKind::Hyperbolic, &k);
    let p2 = catalog::build_p2(TableKind::Hyperbolic, &k);
    let hs = [1e-2, 5e-3, 2.5e-3];
    let points = [[0.9, 0.1, -0.8], [1.3, -0.2, 0.4], [-0.5, 0.7, 1.6]];
    let mut report = VerificationReport::new("fd-oracle-convergence", Mode::Numeric);
    report.backend = Some(backend.to_string());
    report.tolerance = Some(1.8);
    let mut min_slope = f64::INFINITY;
    for t in points {
        let mut rs = Vec::new();
        for &h in &hs {
            let p_f = |x: [f64; 3]| opalgebra::fd_apply_oracle(&p2, &fd_test_function, &backend, 1.0, x, h);
            let q_f = |x: [f64; 3]| opalgebra::fd_apply_oracle(&q1, &fd_test_function, &backend, 1.0, x, h);
            let qp = opalgebra::fd_apply_oracle(&q1, &p_f, &backend, 1.0, t, h)?;
            let pq = opalgebra::fd_apply_oracle(&p2, &q_f, &backend, 1.0, t, h)?;
            rs.push(qp.iter().zip(&pq).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
        let slope = loglog_slope(&hs, &rs);
        report
            .notes
            .push(format!("t = {t:?}: |[Q1,P2]_h f| = {:.3e}, {:.3e}, {:.3e}; slope {slope:.3}", rs[0], rs[1], rs[2]));
        if slope < min_slope {
            min_slope = slope;
            report.worst_point = Some(t.to_vec());
        }
        report.samples += 1;
    }
    report.worst_residual = min_slope;
    report.pass = min_slope >= 1.8;
    report.notes.push("worst_residual holds the smallest observed order; pass iff >= 1.8".into());
    Ok(report.finish(start))
}

/// Configuration of [`run_all`].
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub half_width: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { samples: 200, seed: 0, half_width: DEFAULT_BOX }
    }
}

/// The full suite: exact commutators, numeric `[Q₁,P₂]` on every solution
/// backend and k in the grid, functional equation, equivariance, gauge, group
/// consistency, elliptic identities, the oracle convergence check, and
/// negative controls.
pub fn run_all(config: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    let base =
        CheckSpec { seed: config.seed, samples: config.samples, half_width: config.half_width, ..Default::default() };

    for ops in [["P1", "Q1"], ["P1", "P2"]] {
        let spec = CheckSpec { ops: ops.iter().map(|s| s.to_string()).collect(), ..base.clone() };
        out.push(check_commutativity(&spec)?);
    }
    for backend in solution_backends() {
        let spec = CheckSpec { backend, k_values: numeric_k_grid(), ..base.clone() };
        out.push(check_commutativity(&spec)?);
    }
    let control =
        CheckSpec { backend: PotentialBackend::inv_cosh(), k_values: vec![KValue::rational(1, 1)], ..base.clone() };
    out.push(negative_control(check_commutativity(&control)?));

    let mut fe_backends = solution_backends();
    fe_backends.push(PotentialBackend::elliptic(1.3, 0.5)?);
    for backend in fe_backends {
        out.push(check_functional_equation(&backend, 100, config.seed, FUNCEQ_TOL)?);
    }
    out.push(negative_control(check_functional_equation(&PotentialBackend::inv_cosh(), 100, config.seed, FUNCEQ_TOL)?));

    for name in ["P1", "Q1", "P2", "RtauD1", "RtauD2"] {
        out.push(check_equivariance(name, &KValue::Symbolic)?);
    }
    out.push(negative_control(check_equivariance_op("equivariance[Q1 with one sign flipped]", &mutated_q1())));
    out.push(check_gauge(&KValue::Symbolic)?);
    out.push(check_group_consistency()?);
    out.push(check_elliptic(1000, config.seed)?);
    out.push(check_fd_convergence()?);
    Ok(out)
}

/// `Q₁` with the sign of its `(1, 2)` potential entry flipped.
pub fn mutated_q1() -> MatDiffOp {
    let table = TableKind::General;
    let q = catalog::build_q1(table, &KValue::Symbolic);
    let mut m = opalgebra::zero_matrix(table);
    m[0][1] = q.entry(opalgebra::MultiIndex::ZERO, 0, 1).scale(&rational(-2, 1));
    q.checked_add(&MatDiffOp::from_matrix(table, opalgebra::MultiIndex::ZERO, m)).expect("same table")
}

/// Whether every report passed.
pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
