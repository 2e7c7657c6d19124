use super::{rational_to_f64, DiffPoly, GenKind, Pair, ParamId, Symbol, TableKind};
use crate::elliptic::PotentialBackend;
use crate::{Error, Result};

/// Numeric values of every symbol at one point `t ∈ ℝ³` for one backend.
#[derive(Clone, Debug)]
pub struct PointValues {
    point: [f64; 3],
    /// `derivs[pair][n] = β⁽ⁿ⁾(t_pair)`
    derivs: [Vec<f64>; 3],
    coth: [Option<f64>; 3],
    k: f64,
    ab: Option<(f64, f64)>,
}

impl PointValues {
    /// Evaluates β and its derivatives up to `max_order` at the three pair
    /// differences. Fails inside the guard radius of the singular set.
    pub fn new(backend: &PotentialBackend, point: [f64; 3], k: f64, max_order: u32) -> Result<Self> {
        backend.check_regular_point(point)?;
        let mut derivs: [Vec<f64>; 3] = Default::default();
        let mut coth = [None; 3];
        for pair in Pair::ALL {
            let (i, j) = pair.indices();
            let x = point[i] - point[j];
            derivs[pair.index()] = backend.beta_derivs(x, max_order)?;
            if backend.supports_coth() {
                coth[pair.index()] = Some(backend.coth(x)?);
            }
        }
        Ok(PointValues { point, derivs, coth, k, ab: backend.params() })
    }

    pub fn point(&self) -> [f64; 3] {
        self.point
    }

    pub fn value(&self, sym: Symbol) -> Result<f64> {
        match sym {
            Symbol::Param(ParamId::K) => Ok(self.k),
            Symbol::Param(ParamId::A) => self.ab.map(|p| p.0).ok_or_else(no_params),
            Symbol::Param(ParamId::B) => self.ab.map(|p| p.1).ok_or_else(no_params),
            Symbol::Gen(g) => match g.kind {
                GenKind::Coth => self.coth[g.pair.index()].ok_or_else(|| Error::UnsupportedGenerator {
                    symbol: sym.to_string(),
                    table: TableKind::Hyperbolic,
                }),
                kind => {
                    let n = kind.beta_order().expect("β kinds carry an order") as usize;
                    self.derivs[g.pair.index()].get(n).copied().ok_or_else(|| {
                        Error::Domain(format!("{sym} requested beyond evaluated order {}", self.derivs[0].len() - 1))
                    })
                }
            },
        }
    }
}

fn no_params() -> Error {
    Error::Domain("backend has no (A, B) parameters: not a solution of the β′² relation".into())
}

/// A polynomial with coefficients pre-converted to `f64` for repeated evaluation.
#[derive(Clone, Debug, Default)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(Symbol, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &DiffPoly) -> Self {
        CompiledPoly {
            terms: p
                .terms()
                .map(|(m, q)| (rational_to_f64(q), m.factors().iter().map(|&(s, e)| (s, e as i32)).collect()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, values: &PointValues) -> Result<f64> {
        let mut acc = 0.0;
        for (c, factors) in &self.terms {
            let mut v = *c;
            for &(s, e) in factors {
                v *= values.value(s)?.powi(e);
            }
            acc += v;
        }
        Ok(acc)
    }
}
