//! Symbols of the differential ring: generator functions of a root pair and
//! zero-derivative parameters, plus the monomials built from them.

use std::fmt;

/// A positive root pair `(i, j)`, `i < j`, labelling the argument `t_ij = t_i - t_j`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pair {
    P12,
    P13,
    P23,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P13, Pair::P23];

    /// Zero-based coordinate indices `(i, j)` with `i < j`.
    pub fn indices(self) -> (usize, usize) {
        match self {
            Pair::P12 => (0, 1),
            Pair::P13 => (0, 2),
            Pair::P23 => (1, 2),
        }
    }

    /// The pair for the argument `t_i - t_j` (zero-based, `i != j`) and whether the
    /// stored orientation is reversed relative to it.
    pub fn oriented(i: usize, j: usize) -> (Pair, bool) {
        assert!(i < 3 && j < 3 && i != j, "invalid root pair ({i}, {j})");
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let pair = match (lo, hi) {
            (0, 1) => Pair::P12,
            (0, 2) => Pair::P13,
            _ => Pair::P23,
        };
        (pair, i > j)
    }

    /// One-based label, e.g. `"12"`.
    pub fn label(self) -> &'static str {
        match self {
            Pair::P12 => "12",
            Pair::P13 => "13",
            Pair::P23 => "23",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Which function of `t_ij` a generator stands for.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    Beta,
    BetaPrime,
    Coth,
    /// `β⁽ⁿ⁾` for `n ≥ 2`; only present in the jet table.
    Jet(u8),
}

impl GenKind {
    /// Derivative order with respect to the argument, `None` for coth.
    pub fn beta_order(self) -> Option<u32> {
        match self {
            GenKind::Beta => Some(0),
            GenKind::BetaPrime => Some(1),
            GenKind::Jet(n) => Some(n as u32),
            GenKind::Coth => None,
        }
    }

    /// β and coth are odd, β′ is even; the n-th derivative of an odd function has
    /// parity `(-1)^(n+1)`.
    pub fn is_odd(self) -> bool {
        match self {
            GenKind::Beta | GenKind::Coth => true,
            GenKind::BetaPrime => false,
            GenKind::Jet(n) => n % 2 == 0,
        }
    }

    pub fn for_beta_order(n: u32) -> GenKind {
        match n {
            0 => GenKind::Beta,
            1 => GenKind::BetaPrime,
            n => GenKind::Jet(u8::try_from(n).expect("jet order overflow")),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId {
    pub pair: Pair,
    pub kind: GenKind,
}

impl GenId {
    pub fn new(pair: Pair, kind: GenKind) -> Self {
        GenId { pair, kind }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamId {
    K,
    A,
    B,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Gen(GenId),
    Param(ParamId),
}

impl Symbol {
    pub fn gen(pair: Pair, kind: GenKind) -> Symbol {
        Symbol::Gen(GenId::new(pair, kind))
    }

    pub fn latex(self) -> String {
        match self {
            Symbol::Gen(g) => {
                let arg = format!("t_{{{}}}", g.pair.label());
                match g.kind {
                    GenKind::Beta => format!("\\beta({arg})"),
                    GenKind::BetaPrime => format!("\\beta'({arg})"),
                    GenKind::Jet(2) => format!("\\beta''({arg})"),
                    GenKind::Jet(n) => format!("\\beta^{{({n})}}({arg})"),
                    GenKind::Coth => format!("\\coth {arg}"),
                }
            }
            Symbol::Param(p) => p.to_string(),
        }
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamId::K => "k",
            ParamId::A => "A",
            ParamId::B => "B",
        })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Gen(g) => {
                let arg = g.pair.label();
                match g.kind {
                    GenKind::Beta => write!(f, "beta(t{arg})"),
                    GenKind::BetaPrime => write!(f, "beta'(t{arg})"),
                    GenKind::Jet(2) => write!(f, "beta''(t{arg})"),
                    GenKind::Jet(n) => write!(f, "beta^({n})(t{arg})"),
                    GenKind::Coth => write!(f, "coth(t{arg})"),
                }
            }
            Symbol::Param(p) => p.fmt(f),
        }
    }
}

/// A power product of symbols, kept sorted by symbol with positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn symbol(sym: Symbol) -> Self {
        Monomial(vec![(sym, 1)])
    }

    pub fn power(sym: Symbol, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(sym, exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn exponent(&self, sym: Symbol) -> u32 {
        self.0.binary_search_by(|(s, _)| s.cmp(&sym)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Lowers the exponent of `sym` by `by`; the caller guarantees divisibility.
    pub fn lower(&self, sym: Symbol, by: u32) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len());
        for &(s, e) in &self.0 {
            if s == sym {
                assert!(e >= by, "monomial not divisible by {sym}^{by}");
                if e > by {
                    out.push((s, e - by));
                }
            } else {
                out.push((s, e));
            }
        }
        Monomial(out)
    }

    pub(crate) fn from_unsorted(mut factors: Vec<(Symbol, u32)>) -> Monomial {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by_key(|f| f.0);
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(factors.len());
        for (s, e) in factors {
            match out.last_mut() {
                Some((last, le)) if *last == s => *le += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation() {
        assert_eq!(Pair::oriented(0, 1), (Pair::P12, false));
        assert_eq!(Pair::oriented(1, 0), (Pair::P12, true));
        assert_eq!(Pair::oriented(2, 1), (Pair::P23, true));
        for p in Pair::ALL {
            let (i, j) = p.indices();
            assert_eq!(Pair::oriented(i, j), (p, false));
        }
    }

    #[test]
    fn parity_of_jets() {
        assert!(GenKind::Beta.is_odd());
        assert!(!GenKind::BetaPrime.is_odd());
        assert!(GenKind::Jet(2).is_odd());
        assert!(!GenKind::Jet(3).is_odd());
        assert!(GenKind::Coth.is_odd());
    }

    #[test]
    fn monomial_product_merges_exponents() {
        let b = Symbol::gen(Pair::P12, GenKind::Beta);
        let k = Symbol::Param(ParamId::K);
        let m = Monomial::symbol(b).mul(&Monomial::from_unsorted(vec![(k, 1), (b, 2)]));
        assert_eq!(m.exponent(b), 3);
        assert_eq!(m.exponent(k), 1);
        assert_eq!(m.lower(b, 3), Monomial::symbol(k));
        assert_eq!(m.to_string(), "beta(t12)^3*k");
    }
}
