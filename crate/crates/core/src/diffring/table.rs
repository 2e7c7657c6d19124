//! Generator tables: which symbols exist, how they differentiate, and which
//! polynomial relations are rewritten eagerly.

use serde::Serialize;

use super::symbols::{GenId, GenKind, Monomial, Pair, ParamId, Symbol};
use super::Rational;

/// Identifies a generator table; polynomials over different tables never mix.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    /// β, β′ per pair with `β′² = (β² + A)(β² + B)` and parameters k, A, B.
    /// Covers the whole `a / sn(a t | κ)` family.
    General,
    /// β = 1/sinh, β′ and coth per pair, with `β′ = -coth·β` and
    /// `coth² = 1 + β²`; parameter k only.
    Hyperbolic,
    /// Free jet: β, β′, β″, … are independent symbols. Valid for any odd β,
    /// including potentials outside the solution family.
    Jet,
}

/// Rule data for a [`TableKind`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    kind: TableKind,
}

/// A linear combination of monomials used as a rule right-hand side.
pub(crate) type Terms = Vec<(Rational, Monomial)>;

fn beta(pair: Pair) -> Symbol {
    Symbol::gen(pair, GenKind::Beta)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl GeneratorTable {
    pub fn new(kind: TableKind) -> Self {
        GeneratorTable { kind }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn supports(&self, sym: Symbol) -> bool {
        match (self.kind, sym) {
            (_, Symbol::Param(ParamId::K)) => true,
            (TableKind::General, Symbol::Param(_)) => true,
            (_, Symbol::Param(_)) => false,
            (_, Symbol::Gen(g)) => match g.kind {
                GenKind::Beta | GenKind::BetaPrime => true,
                GenKind::Coth => self.kind == TableKind::Hyperbolic,
                GenKind::Jet(n) => self.kind == TableKind::Jet && n >= 2,
            },
        }
    }

    /// `d/dt g(t)` at the generator's own argument, before the chain factor.
    pub(crate) fn derivative(&self, g: GenId) -> Terms {
        let b = beta(g.pair);
        match g.kind {
            GenKind::Beta => vec![(int(1), Monomial::symbol(Symbol::gen(g.pair, GenKind::BetaPrime)))],
            GenKind::BetaPrime => match self.kind {
                // β″ = 2β³ + (A + B)β
                TableKind::General => vec![
                    (int(2), Monomial::power(b, 3)),
                    (int(1), Monomial::from_unsorted(vec![(b, 1), (Symbol::Param(ParamId::A), 1)])),
                    (int(1), Monomial::from_unsorted(vec![(b, 1), (Symbol::Param(ParamId::B), 1)])),
                ],
                TableKind::Hyperbolic => vec![(int(2), Monomial::power(b, 3)), (int(1), Monomial::symbol(b))],
                TableKind::Jet => vec![(int(1), Monomial::symbol(Symbol::gen(g.pair, GenKind::Jet(2))))],
            },
            // d coth t / dt = -1/sinh² t
            GenKind::Coth => vec![(int(-1), Monomial::power(b, 2))],
            GenKind::Jet(n) => vec![(int(1), Monomial::symbol(Symbol::gen(g.pair, GenKind::Jet(n + 1))))],
        }
    }

    /// Finds the first rewrite rule that applies to `m` and returns the
    /// rewritten terms, or `None` if `m` is already reduced.
    pub(crate) fn rewrite(&self, m: &Monomial) -> Option<Terms> {
        match self.kind {
            TableKind::Jet => None,
            TableKind::General => {
                for pair in Pair::ALL {
                    let bp = Symbol::gen(pair, GenKind::BetaPrime);
                    if m.exponent(bp) >= 2 {
                        let rest = m.lower(bp, 2);
                        let b = beta(pair);
                        let a = Symbol::Param(ParamId::A);
                        let bb = Symbol::Param(ParamId::B);
                        // (β² + A)(β² + B) = β⁴ + Aβ² + Bβ² + AB
                        let rhs = [
                            Monomial::power(b, 4),
                            Monomial::from_unsorted(vec![(b, 2), (a, 1)]),
                            Monomial::from_unsorted(vec![(b, 2), (bb, 1)]),
                            Monomial::from_unsorted(vec![(a, 1), (bb, 1)]),
                        ];
                        return Some(rhs.iter().map(|r| (int(1), r.mul(&rest))).collect());
                    }
                }
                None
            }
            TableKind::Hyperbolic => {
                for pair in Pair::ALL {
                    let b = beta(pair);
                    let c = Symbol::gen(pair, GenKind::Coth);
                    let bp = Symbol::gen(pair, GenKind::BetaPrime);
                    if m.exponent(bp) >= 1 {
                        // β′ = -cosh/sinh² = -coth·β
                        let rest = m.lower(bp, 1);
                        let rhs = Monomial::from_unsorted(vec![(b, 1), (c, 1)]);
                        return Some(vec![(int(-1), rhs.mul(&rest))]);
                    }
                    if m.exponent(c) >= 2 {
                        let rest = m.lower(c, 2);
                        return Some(vec![(int(1), rest.clone()), (int(1), Monomial::power(b, 2).mul(&rest))]);
                    }
                }
                None
            }
        }
    }
}

/// The hyperbolic addition relation `coth t12·coth t23 = coth t13 (coth t12 + coth t23) - 1`,
/// valid because `t13 = t12 + t23`. Rewrites every `coth12·coth23` factor.
pub(crate) fn rewrite_coth_addition(m: &Monomial) -> Option<Terms> {
    let c12 = Symbol::gen(Pair::P12, GenKind::Coth);
    let c13 = Symbol::gen(Pair::P13, GenKind::Coth);
    let c23 = Symbol::gen(Pair::P23, GenKind::Coth);
    if m.exponent(c12) >= 1 && m.exponent(c23) >= 1 {
        let rest = m.lower(c12, 1).lower(c23, 1);
        return Some(vec![
            (int(1), Monomial::from_unsorted(vec![(c12, 1), (c13, 1)]).mul(&rest)),
            (int(1), Monomial::from_unsorted(vec![(c13, 1), (c23, 1)]).mul(&rest)),
            (int(-1), rest),
        ]);
    }
    None
}
