//! Exact differential polynomials over ℚ.
//!
//! A [`DiffPoly`] is a polynomial in the generator functions of the three root
//! pairs (β(t_ij), β′(t_ij), coth t_ij, …) and the parameters k, A, B. The
//! derivations ∂₁, ∂₂, ∂₃ act through the chain factor `δ_ip − δ_iq` on a
//! generator of `t_pq`, so ∂₁ + ∂₂ + ∂₃ kills every polynomial.
//!
//! Relations that hold within a single pair are rewritten eagerly (see
//! [`TableKind`]); identities linking different pairs are not, so
//! [`DiffPoly::is_zero`] detects zero only in the free reduced algebra.

mod eval;
mod symbols;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};

use crate::{Error, Result};

pub use eval::{CompiledPoly, PointValues};
pub use symbols::{GenId, GenKind, Monomial, Pair, ParamId, Symbol};
pub use table::{GeneratorTable, TableKind};

use table::Terms;

/// Exact rational scalar; normalized with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-1/2"` or a decimal such as `"0.37"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Usage(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: divide in floating point after scaling.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact polynomial in generator and parameter symbols over one [`GeneratorTable`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    table: TableKind,
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPoly {
    pub fn zero(table: TableKind) -> Self {
        DiffPoly { table, terms: BTreeMap::new() }
    }

    pub fn one(table: TableKind) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn constant(table: TableKind, q: Rational) -> Self {
        let mut p = Self::zero(table);
        if !q.is_zero() {
            p.terms.insert(Monomial::one(), q);
        }
        p
    }

    pub fn integer(table: TableKind, n: i64) -> Self {
        Self::constant(table, Rational::from_integer(n.into()))
    }

    pub fn symbol(table: TableKind, sym: Symbol) -> Result<Self> {
        if !GeneratorTable::new(table).supports(sym) {
            return Err(Error::UnsupportedGenerator { symbol: sym.to_string(), table });
        }
        let mut p = Self::zero(table);
        p.add_reduced(Rational::one(), Monomial::symbol(sym));
        Ok(p)
    }

    /// Generator `kind` evaluated at `t_i - t_j` (zero-based, `i != j`), with the
    /// parity sign applied when the pair is stored the other way round.
    pub fn oriented(table: TableKind, kind: GenKind, i: usize, j: usize) -> Result<Self> {
        let (pair, reversed) = Pair::oriented(i, j);
        let p = Self::symbol(table, Symbol::gen(pair, kind))?;
        Ok(if reversed && kind.is_odd() { -p } else { p })
    }

    pub fn beta(table: TableKind, pair: Pair) -> Self {
        Self::symbol(table, Symbol::gen(pair, GenKind::Beta)).expect("β exists in every table")
    }

    pub fn beta_prime(table: TableKind, pair: Pair) -> Self {
        Self::symbol(table, Symbol::gen(pair, GenKind::BetaPrime)).expect("β′ exists in every table")
    }

    pub fn coth(table: TableKind, pair: Pair) -> Result<Self> {
        Self::symbol(table, Symbol::gen(pair, GenKind::Coth))
    }

    pub fn param(table: TableKind, p: ParamId) -> Result<Self> {
        Self::symbol(table, Symbol::Param(p))
    }

    pub fn table(&self) -> TableKind {
        self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|q| q.is_one())
    }

    /// The constant value if the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Largest jet order of β appearing in the polynomial.
    pub fn max_beta_order(&self) -> u32 {
        self.symbols()
            .filter_map(|s| match s {
                Symbol::Gen(g) => g.kind.beta_order(),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.terms.keys().flat_map(|m| m.factors().iter().map(|(s, _)| *s))
    }

    fn check_table(&self, other: &DiffPoly) -> Result<()> {
        if self.table != other.table {
            return Err(Error::TableMismatch { left: self.table, right: other.table });
        }
        Ok(())
    }

    /// Adds `q·m` to `self` with every rewrite rule applied to a fixpoint.
    fn add_reduced(&mut self, q: Rational, m: Monomial) {
        let table = GeneratorTable::new(self.table);
        self.add_with(q, m, &|m: &Monomial| table.rewrite(m));
    }

    fn add_with(&mut self, q: Rational, m: Monomial, rewrite: &dyn Fn(&Monomial) -> Option<Terms>) {
        let mut work = vec![(q, m)];
        while let Some((q, m)) = work.pop() {
            if q.is_zero() {
                continue;
            }
            match rewrite(&m) {
                Some(rhs) => work.extend(rhs.into_iter().map(|(c, r)| (&q * c, r))),
                None => self.add_raw(q, m),
            }
        }
    }

    fn add_raw(&mut self, q: Rational, m: Monomial) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(q);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += q;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_raw(q.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.add_raw(-q.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.check_table(other)?;
        let mut out = DiffPoly::zero(self.table);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let table = GeneratorTable::new(self.table);
        for (ma, qa) in &self.terms {
            for (mb, qb) in &other.terms {
                out.add_with(qa * qb, ma.mul(mb), &|m: &Monomial| table.rewrite(m));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> DiffPoly {
        if q.is_zero() {
            return DiffPoly::zero(self.table);
        }
        DiffPoly { table: self.table, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut out = DiffPoly::one(self.table);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// ∂ᵢ of the polynomial, `dir` zero-based (0, 1, 2 for ∂₁, ∂₂, ∂₃).
    pub fn derive(&self, dir: usize) -> DiffPoly {
        assert!(dir < 3, "direction must be 0, 1 or 2");
        let table = GeneratorTable::new(self.table);
        let mut out = DiffPoly::zero(self.table);
        for (m, q) in &self.terms {
            for &(sym, e) in m.factors() {
                let Symbol::Gen(g) = sym else { continue };
                let (p, r) = g.pair.indices();
                let chain: i64 = (dir == p) as i64 - (dir == r) as i64;
                if chain == 0 {
                    continue;
                }
                let rest = m.lower(sym, 1);
                let factor = q * Rational::from_integer(BigInt::from(chain * e as i64));
                for (c, d) in table.derivative(g) {
                    out.add_reduced(&factor * c, d.mul(&rest));
                }
            }
        }
        out
    }

    /// Substitutes a rational value for a parameter.
    pub fn substitute_param(&self, param: ParamId, value: &Rational) -> DiffPoly {
        let sym = Symbol::Param(param);
        let mut out = DiffPoly::zero(self.table);
        for (m, q) in &self.terms {
            let e = m.exponent(sym);
            if e == 0 {
                out.add_raw(q.clone(), m.clone());
            } else {
                let v = num_traits::pow(value.clone(), e as usize);
                out.add_reduced(q * v, m.lower(sym, e));
            }
        }
        out
    }

    /// Renames coordinates `t_j → t_{perm[j]}` (zero-based), reorienting pairs
    /// and applying the parity sign of odd generators.
    pub fn rename_coordinates(&self, perm: [usize; 3]) -> DiffPoly {
        let mut out = DiffPoly::zero(self.table);
        for (m, q) in &self.terms {
            let mut sign = 1i64;
            let factors = m
                .factors()
                .iter()
                .map(|&(sym, e)| match sym {
                    Symbol::Gen(g) => {
                        let (i, j) = g.pair.indices();
                        let (pair, reversed) = Pair::oriented(perm[i], perm[j]);
                        if reversed && g.kind.is_odd() && e % 2 == 1 {
                            sign = -sign;
                        }
                        (Symbol::gen(pair, g.kind), e)
                    }
                    other => (other, e),
                })
                .collect();
            let q = if sign < 0 { -q.clone() } else { q.clone() };
            out.add_reduced(q, Monomial::from_unsorted(factors));
        }
        out
    }

    /// Reduces modulo the hyperbolic coth addition relation across pairs
    /// (`t13 = t12 + t23`). Only meaningful in the hyperbolic table; other
    /// tables are returned unchanged.
    pub fn reduce_coth_addition(&self) -> DiffPoly {
        if self.table != TableKind::Hyperbolic {
            return self.clone();
        }
        let base = GeneratorTable::new(self.table);
        let rewrite = |m: &Monomial| base.rewrite(m).or_else(|| table::rewrite_coth_addition(m));
        let mut out = DiffPoly::zero(self.table);
        for (m, q) in &self.terms {
            out.add_with(q.clone(), m.clone(), &rewrite);
        }
        out
    }

    /// Evaluates in floating point with symbol values from `values`.
    pub fn eval(&self, values: &PointValues) -> Result<f64> {
        let mut acc = 0.0;
        for (m, q) in &self.terms {
            let mut v = rational_to_f64(q);
            for &(s, e) in m.factors() {
                v *= values.value(s)?.powi(e as i32);
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly::new(self)
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let abs = q.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body: Vec<String> = m
                .factors()
                .iter()
                .map(|&(sym, e)| if e == 1 { sym.latex() } else { format!("{}^{{{e}}}", sym.latex()) })
                .collect();
            let coef = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom())
            };
            if m.is_one() {
                s.push_str(&coef);
            } else {
                if !abs.is_one() {
                    s.push_str(&coef);
                    s.push(' ');
                }
                s.push_str(&body.join(" "));
            }
        }
        s
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            let abs = q.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly[{:?}]({self})", self.table)
    }
}

struct MonomialSer<'a>(&'a Monomial);

impl Serialize for MonomialSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.factors().len()))?;
        for (sym, e) in self.0.factors() {
            seq.serialize_element(&serde_json::json!({ "symbol": sym.to_string(), "exponent": e }))?;
        }
        seq.end()
    }
}

struct TermSer<'a>(&'a Monomial, &'a Rational);

impl Serialize for TermSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("coefficient", &format!("{}/{}", self.1.numer(), self.1.denom()))?;
        st.serialize_field("monomial", &MonomialSer(self.0))?;
        st.end()
    }
}

/// Serializes as a list of `{coefficient: "num/den", monomial: [{symbol, exponent}]}`.
impl Serialize for DiffPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, q) in &self.terms {
            seq.serialize_element(&TermSer(m, q))?;
        }
        seq.end()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&DiffPoly> for &DiffPoly {
            type Output = DiffPoly;
            /// Panics if the operands live over different generator tables.
            fn $method(self, rhs: &DiffPoly) -> DiffPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$trait<DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: DiffPoly) -> DiffPoly {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&DiffPoly> for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: &DiffPoly) -> DiffPoly {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(mut self) -> DiffPoly {
        for q in self.terms.values_mut() {
            *q = -q.clone();
        }
        self
    }
}

impl std::ops::Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -self.clone()
    }
}

#[cfg(test)]
mod tests;
