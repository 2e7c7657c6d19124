//! Command-line front end.
//!
//! ```text
//! a2ops verify <commute|funceq|equivariance|gauge|group|elliptic|oracle|all> [flags]
//! a2ops show <name> [--k K] [--format text|json|latex]
//! a2ops eval <name> --point t1,t2,t3 --lambda l1,l2,l3 [--on-shell]
//! ```
//!
//! Settings may also come from a flat `key = value` file named by `--config`
//! or the `A2OPS_CONFIG` environment variable; flags take precedence. Exit
//! status: 0 all checks pass, 1 some check fails, 2 usage or configuration
//! error, 3 singular point or sampling exhaustion.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::catalog::{self, KValue};
use crate::diffring::TableKind;
use crate::elliptic::{Family, PotentialBackend};
use crate::opalgebra::{self, OperatorFormat};
use crate::verify::{self, CheckSpec, SuiteConfig, VerificationReport};
use crate::{Error, Result};

pub const CONFIG_ENV: &str = "A2OPS_CONFIG";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "a2ops", version, about = "Build, inspect and verify A2 matrix differential operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a check suite and report pass/fail.
    Verify {
        #[arg(value_enum)]
        check: CheckName,
        #[command(flatten)]
        opts: Options,
    },
    /// Print a catalog operator.
    Show {
        name: String,
        #[command(flatten)]
        opts: Options,
    },
    /// Evaluate the full symbol of a catalog operator at (t, λ).
    Eval {
        name: String,
        /// Point t1,t2,t3.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Spectral parameter λ1,λ2,λ3 (components may be complex, e.g. 1+2i).
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Require λ1 + λ2 + λ3 = 0.
        #[arg(long)]
        on_shell: bool,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Commute,
    Funceq,
    Equivariance,
    Gauge,
    Group,
    Elliptic,
    Oracle,
    All,
}

/// Flags shared by all subcommands. Every field is optional so that unset
/// flags fall back to the config file.
#[derive(Args, Debug, Default, Clone, PartialEq)]
pub struct Options {
    /// Comma-separated operator names.
    #[arg(long)]
    pub ops: Option<String>,
    /// rational | hyperbolic | trig | elliptic | invcosh
    #[arg(long)]
    pub family: Option<String>,
    /// Elliptic amplitude a.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Elliptic parameter κ in [0, 1].
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Comma-separated rationals, or "symbolic".
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Half-width of the sampling box [-box, box]^3.
    #[arg(long = "box")]
    pub box_: Option<f64>,
    /// text | json | latex
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Config file; overrides the A2OPS_CONFIG environment variable.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const CONFIG_KEYS: [&str; 12] =
    ["ops", "family", "a", "kappa", "k", "trials", "seed", "tol", "box", "format", "out", "jobs"];

/// Parses a flat `key = value` file; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| Error::Usage(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::Usage(format!("config line {}: unknown key `{key}`", n + 1)));
        }
        out.insert(key.to_string(), value.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

fn config_value<T: std::str::FromStr>(cfg: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    cfg.get(key)
        .map(|v| v.parse::<T>().map_err(|_| Error::Usage(format!("config: bad value `{v}` for `{key}`"))))
        .transpose()
}

impl Options {
    /// Fills unset fields from `cfg`.
    pub fn merge_config(&self, cfg: &BTreeMap<String, String>) -> Result<Options> {
        Ok(Options {
            ops: self.ops.clone().or(config_value(cfg, "ops")?),
            family: self.family.clone().or(config_value(cfg, "family")?),
            a: self.a.or(config_value(cfg, "a")?),
            kappa: self.kappa.or(config_value(cfg, "kappa")?),
            k: self.k.clone().or(config_value(cfg, "k")?),
            trials: self.trials.or(config_value(cfg, "trials")?),
            seed: self.seed.or(config_value(cfg, "seed")?),
            tol: self.tol.or(config_value(cfg, "tol")?),
            box_: self.box_.or(config_value(cfg, "box")?),
            format: self.format.clone().or(config_value(cfg, "format")?),
            out: self.out.clone().or(config_value(cfg, "out")?),
            jobs: self.jobs.or(config_value(cfg, "jobs")?),
            config: self.config.clone(),
        })
    }

    /// Loads the config named by `--config` or `env_path` and merges it.
    pub fn resolve(&self, env_path: Option<&Path>) -> Result<Options> {
        let path = self.config.as_deref().or(env_path);
        match path {
            None => Ok(self.clone()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", p.display())))?;
                self.merge_config(&parse_config(&text)?)
            }
        }
    }

    pub fn backend(&self, default: &str) -> Result<PotentialBackend> {
        let name = self.family.as_deref().unwrap_or(default);
        PotentialBackend::from_name(name, self.a.unwrap_or(1.0), self.kappa.unwrap_or(0.5))
    }

    pub fn k_values(&self, default: &str) -> Result<Vec<KValue>> {
        self.k.as_deref().unwrap_or(default).split(',').map(str::parse).collect()
    }

    pub fn op_names(&self, default: &[&str]) -> Vec<String> {
        match &self.ops {
            Some(s) => s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
            None => default.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn output_format(&self) -> Result<OperatorFormat> {
        match self.format.as_deref().unwrap_or("text") {
            "text" => Ok(OperatorFormat::Text),
            "json" => Ok(OperatorFormat::Json),
            "latex" => Ok(OperatorFormat::Latex),
            other => Err(Error::Usage(format!("unknown format `{other}` (expected text|json|latex)"))),
        }
    }

    /// The [`CheckSpec`] for `verify commute`.
    pub fn check_spec(&self) -> Result<CheckSpec> {
        let d = CheckSpec::default();
        let spec = CheckSpec {
            ops: self.op_names(&["Q1", "P2"]),
            backend: self.backend("hyperbolic")?,
            k_values: self.k_values("symbolic")?,
            samples: self.trials.unwrap_or(d.samples),
            seed: self.seed.unwrap_or(d.seed),
            half_width: self.box_.unwrap_or(d.half_width),
            tolerance: self.tol.unwrap_or(d.tolerance),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn table_for_backend(backend: &PotentialBackend) -> TableKind {
    match backend.family() {
        Family::Hyperbolic => TableKind::Hyperbolic,
        Family::InvCoshControl => TableKind::Jet,
        _ => TableKind::General,
    }
}

fn parse_reals(s: &str) -> Result<[f64; 3]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Usage(format!("not a number: `{x}`"))))
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::Usage(format!("expected three comma-separated values, got `{s}`")))
}

fn parse_complex3(s: &str) -> Result<[Complex64; 3]> {
    let v: Vec<Complex64> = s
        .split(',')
        .map(|x| x.trim().parse::<Complex64>().map_err(|_| Error::Usage(format!("not a complex number: `{x}`"))))
        .collect::<Result<_>>()?;
    v.try_into().map_err(|_| Error::Usage(format!("expected three comma-separated values, got `{s}`")))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Singular(_) | Error::Sampling(_) => EXIT_SINGULAR,
        _ => EXIT_USAGE,
    }
}

fn emit(opts: &Options, body: &str, out: &mut dyn Write) -> Result<()> {
    match &opts.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => out.write_all(body.as_bytes()).map_err(|e| Error::Usage(format!("write failed: {e}"))),
    }
}

fn render_reports(reports: &[VerificationReport], format: OperatorFormat) -> Result<String> {
    match format {
        OperatorFormat::Json => Ok(serde_json::to_string_pretty(reports).expect("reports serialize") + "\n"),
        OperatorFormat::Text => {
            let mut s: String = reports.iter().map(|r| format!("{r}\n")).collect();
            let passed = reports.iter().filter(|r| r.pass).count();
            s.push_str(&format!("{passed}/{} checks passed\n", reports.len()));
            Ok(s)
        }
        OperatorFormat::Latex => Err(Error::Usage("reports support --format text or json".into())),
    }
}

fn run_verify(check: CheckName, opts: &Options) -> Result<Vec<VerificationReport>> {
    let seed = opts.seed.unwrap_or(0);
    Ok(match check {
        CheckName::Commute => vec![verify::check_commutativity(&opts.check_spec()?)?],
        CheckName::Funceq => {
            let backend = opts.backend("hyperbolic")?;
            vec![verify::check_functional_equation(
                &backend,
                opts.trials.unwrap_or(100),
                seed,
                opts.tol.unwrap_or(verify::FUNCEQ_TOL),
            )?]
        }
        CheckName::Equivariance => {
            let ks = opts.k_values("symbolic")?;
            let mut out = Vec::new();
            for name in opts.op_names(&["P1", "Q1", "P2", "RtauD1", "RtauD2"]) {
                for k in &ks {
                    out.push(verify::check_equivariance(&name, k)?);
                }
            }
            out
        }
        CheckName::Gauge => opts.k_values("symbolic")?.iter().map(verify::check_gauge).collect::<Result<_>>()?,
        CheckName::Group => vec![verify::check_group_consistency()?],
        CheckName::Elliptic => vec![verify::check_elliptic(opts.trials.unwrap_or(1000), seed)?],
        CheckName::Oracle => vec![verify::check_fd_convergence()?],
        CheckName::All => verify::run_all(&SuiteConfig {
            samples: opts.trials.unwrap_or(200),
            seed,
            half_width: opts.box_.unwrap_or(verify::DEFAULT_BOX),
        })?,
    })
}

fn run_show(name: &str, opts: &Options, out: &mut dyn Write) -> Result<()> {
    let k: KValue = opts.k.as_deref().unwrap_or("symbolic").parse()?;
    let table = if catalog::is_hyperbolic_only(name) {
        TableKind::Hyperbolic
    } else {
        match &opts.family {
            Some(_) => table_for_backend(&opts.backend("rational")?),
            None => TableKind::General,
        }
    };
    let op = catalog::build_named(name, table, &k)?;
    let format = opts.output_format()?;
    let mut body = String::new();
    if format == OperatorFormat::Text {
        body.push_str(&format!("# {name} (table {table:?}, k = {k})\n"));
    }
    body.push_str(&op.render(format));
    if format == OperatorFormat::Json {
        body.push('\n');
    }
    emit(opts, &body, out)
}

fn run_eval(name: &str, point: &str, lambda: &str, on_shell: bool, opts: &Options, out: &mut dyn Write) -> Result<()> {
    let t = parse_reals(point)?;
    let lam = parse_complex3(lambda)?;
    if on_shell {
        let total = lam[0] + lam[1] + lam[2];
        if total.norm() > 1e-12 * lam.iter().map(|l| l.norm()).fold(1.0, f64::max) {
            return Err(Error::Constraint(format!("--on-shell requires λ1 + λ2 + λ3 = 0, got {total}")));
        }
    }
    let backend = opts.backend("hyperbolic")?;
    let k: KValue = opts.k.as_deref().unwrap_or("1").parse()?;
    let kf = k.to_f64().ok_or_else(|| Error::Usage("eval needs a numeric --k".into()))?;
    let op = catalog::build_named(name, table_for_backend(&backend), &k)?;
    let m = opalgebra::full_symbol(&op, &backend, t, lam, kf)?;
    let body = match opts.output_format()? {
        OperatorFormat::Json => {
            let rows: Vec<Vec<[f64; 2]>> = m.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
            serde_json::to_string_pretty(&rows).expect("matrix serializes") + "\n"
        }
        _ => m
            .iter()
            .map(|r| r.iter().map(|z| format!("{:>+.12e}{:+.12e}i", z.re, z.im)).collect::<Vec<_>>().join("  ") + "\n")
            .collect(),
    };
    emit(opts, &body, out)
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Error::Usage("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Usage(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn dispatch(cli: Cli, env_config: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Verify { check, opts } => {
            let opts = opts.resolve(env_config)?;
            let format = opts.output_format()?;
            let reports = with_jobs(opts.jobs, || run_verify(check, &opts))??;
            let body = render_reports(&reports, format)?;
            emit(&opts, &body, out)?;
            if opts.out.is_some() {
                let summary = render_reports(&reports, OperatorFormat::Text)?;
                out.write_all(summary.as_bytes()).map_err(|e| Error::Usage(e.to_string()))?;
            }
            Ok(if verify::all_pass(&reports) { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Show { name, opts } => {
            run_show(&name, &opts.resolve(env_config)?, out)?;
            Ok(EXIT_PASS)
        }
        Command::Eval { name, point, lambda, on_shell, opts } => {
            run_eval(&name, &point, &lambda, on_shell, &opts.resolve(env_config)?, out)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, env_config: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match dispatch(cli, env_config, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
