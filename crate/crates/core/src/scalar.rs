//! Exact scalars: arbitrary-precision rationals, and finite rational linear
//! combinations over a declared ℚ-linearly-independent symbol set.
//!
//! A [`SymbolicReal`] stores coefficients indexed by symbol slot, with slot 0
//! reserved for the rational constant 1. Independence of the symbols is an
//! input-level assertion (it is echoed into reports, never verified). Symbols
//! are purely additive: sums and rational rescalings are closed, while the
//! product of two genuinely symbolic values is rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. `num_rational` keeps values canonical: reduced,
/// with a positive denominator, so equality and hashing are structural.
pub type Rational = BigRational;

/// Shorthand for small rational literals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for small integer literals.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"` with optional sign; `q` must be nonzero.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(format!("malformed rational '{s}'"));
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = numer.parse().map_err(|_| bad())?;
    let d: BigInt = match denom {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::Input(format!(
            "malformed rational '{s}': zero denominator"
        )));
    }
    Ok(Rational::new(n, d))
}

/// Renders a rational as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An ordered set of symbol names, with the constant 1 implicitly at slot 0.
///
/// The set {1, symbols...} is *declared* ℚ-linearly independent by whoever
/// builds the model; that assertion is recorded in every report.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolBasis {
    names: Vec<String>,
}

impl SymbolBasis {
    pub fn new(names: Vec<String>) -> Result<Self> {
        for (k, name) in names.iter().enumerate() {
            if name.is_empty() || name == "1" {
                return Err(Error::Input(format!("invalid symbol name '{name}'")));
            }
            if names[..k].contains(name) {
                return Err(Error::Input(format!("duplicate symbol name '{name}'")));
            }
        }
        Ok(Self { names })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Number of symbols, not counting the constant slot.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Name of a slot: slot 0 is the constant `"1"`.
    pub fn slot_name(&self, slot: usize) -> Option<&str> {
        if slot == 0 {
            Some("1")
        } else {
            self.names.get(slot - 1).map(|s| s.as_str())
        }
    }

    /// Slot of a name; `"1"` maps to slot 0.
    pub fn slot_of(&self, name: &str) -> Option<usize> {
        if name == "1" {
            Some(0)
        } else {
            self.names.iter().position(|n| n == name).map(|k| k + 1)
        }
    }
}

/// A finite rational linear combination `c_0·1 + c_1·s_1 + …` over the
/// symbol slots. No zero coefficients are stored, so equality is structural
/// and exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymbolicReal {
    terms: BTreeMap<usize, Rational>,
}

impl SymbolicReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        Self { terms }
    }

    /// The bare symbol at `slot` (slot 0 gives the constant 1).
    pub fn symbol(slot: usize) -> Self {
        Self::term(slot, Rational::one())
    }

    /// A single term `coeff · s_slot`.
    pub fn term(slot: usize, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(slot, coeff);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when only the constant slot carries a coefficient.
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    /// The constant-slot coefficient.
    pub fn rational_part(&self) -> Rational {
        self.coeff(0)
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.rational_part())
        } else {
            None
        }
    }

    pub fn coeff(&self, slot: usize) -> Rational {
        self.terms
            .get(&slot)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    /// Largest slot index present (0 for zero or purely rational values).
    pub fn max_slot(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    /// Coefficient vector over slots `0..=width-1`; fails if a term lies
    /// beyond `width`.
    pub fn flatten(&self, width: usize) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); width];
        for (slot, c) in self.iter() {
            if slot >= width {
                return Err(Error::Input(format!(
                    "symbol slot {slot} out of range for a basis of {width} slots"
                )));
            }
            out[slot] = c.clone();
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self.terms.iter().map(|(&k, v)| (k, v * c)).collect();
        Self { terms }
    }

    /// Exact product; defined only when at least one factor is rational.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if let Some(r) = self.as_rational() {
            Ok(other.scale(&r))
        } else if let Some(r) = other.as_rational() {
            Ok(self.scale(&r))
        } else {
            Err(Error::SymbolProduct)
        }
    }

    /// Exact quotient by a nonzero rational.
    pub fn div_rational(&self, c: &Rational) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Input("division by zero".into()));
        }
        Ok(self.scale(&c.recip()))
    }

    /// Render with symbol names, e.g. `"1/2 + 3·eps1"`.
    pub fn display_with(&self, basis: &SymbolBasis) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (slot, c) in self.iter() {
            let coeff = format_rational(c);
            let part = if slot == 0 {
                coeff
            } else {
                let name = basis
                    .slot_name(slot)
                    .map(str::to_owned)
                    .unwrap_or_else(|| format!("s{slot}"));
                if c.is_one() {
                    name
                } else if (-c).is_one() {
                    format!("-{name}")
                } else {
                    format!("{coeff}·{name}")
                }
            };
            parts.push(part);
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }

    fn insert_add(&mut self, slot: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(slot).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&slot);
        }
    }
}

impl From<Rational> for SymbolicReal {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for SymbolicReal {
    fn from(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }
}

impl fmt::Display for SymbolicReal {
    /// Anonymous rendering with `s1, s2, …` placeholders; reports use
    /// [`SymbolicReal::display_with`] for named symbols.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&SymbolBasis::empty()))
    }
}

impl AddAssign<&SymbolicReal> for SymbolicReal {
    fn add_assign(&mut self, rhs: &SymbolicReal) {
        for (slot, c) in rhs.iter() {
            self.insert_add(slot, c);
        }
    }
}

impl SubAssign<&SymbolicReal> for SymbolicReal {
    fn sub_assign(&mut self, rhs: &SymbolicReal) {
        for (slot, c) in rhs.iter() {
            self.insert_add(slot, &-c.clone());
        }
    }
}

impl Add for &SymbolicReal {
    type Output = SymbolicReal;
    fn add(self, rhs: &SymbolicReal) -> SymbolicReal {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &SymbolicReal {
    type Output = SymbolicReal;
    fn sub(self, rhs: &SymbolicReal) -> SymbolicReal {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &SymbolicReal {
    type Output = SymbolicReal;
    fn neg(self) -> SymbolicReal {
        let terms = self.terms.iter().map(|(&k, v)| (k, -v.clone())).collect();
        SymbolicReal { terms }
    }
}

impl Add for SymbolicReal {
    type Output = SymbolicReal;
    fn add(self, rhs: SymbolicReal) -> SymbolicReal {
        &self + &rhs
    }
}

impl Sub for SymbolicReal {
    type Output = SymbolicReal;
    fn sub(self, rhs: SymbolicReal) -> SymbolicReal {
        &self - &rhs
    }
}

impl Neg for SymbolicReal {
    type Output = SymbolicReal;
    fn neg(self) -> SymbolicReal {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "1/2", "-4/6", "0"] {
            let r = parse_rational(s).unwrap();
            let back = parse_rational(&format_rational(&r)).unwrap();
            assert_eq!(r, back);
        }
        assert_eq!(parse_rational("-4/6").unwrap(), rat(-2, 3));
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1/0", "a/b", "1/2/3", "2.5"] {
            assert!(parse_rational(s).is_err(), "accepted '{s}'");
        }
    }

    #[test]
    fn symbol_basis_validation() {
        assert!(SymbolBasis::new(vec!["eps1".into(), "eps1".into()]).is_err());
        assert!(SymbolBasis::new(vec!["1".into()]).is_err());
        let b = SymbolBasis::new(vec!["eps1".into(), "eps2".into()]).unwrap();
        assert_eq!(b.slot_of("eps2"), Some(2));
        assert_eq!(b.slot_of("1"), Some(0));
        assert_eq!(b.slot_name(1), Some("eps1"));
    }

    #[test]
    fn symbolic_zero_terms_never_stored() {
        let a = SymbolicReal::term(1, rat_int(2));
        let b = SymbolicReal::term(1, rat_int(-2));
        let sum = &a + &b;
        assert!(sum.is_zero());
        assert_eq!(sum, SymbolicReal::zero());
    }

    #[test]
    fn rational_detection() {
        let a = SymbolicReal::from_rational(rat(3, 4));
        assert!(a.is_rational());
        assert_eq!(a.as_rational(), Some(rat(3, 4)));
        let b = &a + &SymbolicReal::symbol(2);
        assert!(!b.is_rational());
        assert_eq!(b.as_rational(), None);
        assert_eq!(b.rational_part(), rat(3, 4));
    }

    #[test]
    fn symbol_products_rejected() {
        let e1 = SymbolicReal::symbol(1);
        let e2 = SymbolicReal::symbol(2);
        assert!(matches!(e1.try_mul(&e2), Err(Error::SymbolProduct)));
        // rational × symbolic is fine
        let r = SymbolicReal::from_rational(rat(1, 2));
        assert_eq!(r.try_mul(&e1).unwrap(), SymbolicReal::term(1, rat(1, 2)));
    }

    #[test]
    fn display_with_names() {
        let basis = SymbolBasis::new(vec!["eps1".into(), "eps2".into()]).unwrap();
        let v = &(&SymbolicReal::from_rational(rat(1, 2)) + &SymbolicReal::symbol(1))
            - &SymbolicReal::term(2, rat_int(3));
        assert_eq!(v.display_with(&basis), "1/2 + eps1 - 3·eps2");
    }
}
