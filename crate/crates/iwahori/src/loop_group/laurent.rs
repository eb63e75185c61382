//! Laurent polynomials over a small finite field, with the Galois
//! conjugation of the two quadratic-extension models.
//!
//! Ramified model: K' = F_q((v)) with v² = t; τ negates v, i.e. the
//! odd-exponent coefficients. Unramified model: K' = F_{q²}((t)); τ is the
//! q-power Frobenius on coefficients. Elements of K are the even-exponent
//! (resp. prime-field-coefficient) polynomials.

use std::collections::BTreeMap;

use super::field::{BaseField, FieldElem, QuadField};
use crate::error::Error;
use crate::Result;

/// Which quadratic extension K'/K the series live in. `None` is the case of
/// K itself (no extension, τ = id).
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum ExtKind {
    None,
    Ramified,
    Unramified,
}

/// The coefficient arithmetic of K' = (residue field)((uniformizer)).
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub struct SeriesCtx {
    pub base: BaseField,
    pub ext: ExtKind,
    pub symbol: char,
}

impl SeriesCtx {
    pub fn new(q: u32, ext: ExtKind) -> Result<Self> {
        let base = BaseField::new(q)?;
        if ext == ExtKind::Unramified && base.degree != 1 {
            return Err(Error::UnsupportedField(format!(
                "unramified model over F_{q} would need a quartic coefficient field"
            )));
        }
        let symbol = match ext {
            ExtKind::None => 'u',
            ExtKind::Ramified => 'v',
            ExtKind::Unramified => 't',
        };
        Ok(SeriesCtx { base, ext, symbol })
    }

    pub fn field(&self) -> QuadField {
        self.base.field
    }

    /// τ, the non-trivial element of Gal(K'/K) (identity when ext = None).
    pub fn conj(&self, p: &LaurentPoly) -> LaurentPoly {
        match self.ext {
            ExtKind::None => p.clone(),
            ExtKind::Ramified => LaurentPoly {
                terms: p
                    .terms
                    .iter()
                    .map(|(&e, &c)| (e, if e.rem_euclid(2) == 1 { -c } else { c }))
                    .collect(),
            },
            ExtKind::Unramified => LaurentPoly {
                terms: p.terms.iter().map(|(&e, &c)| (e, c.frobenius())).collect(),
            },
        }
    }

    /// Whether the element lies in K ⊂ K'.
    pub fn in_base(&self, p: &LaurentPoly) -> bool {
        match self.ext {
            ExtKind::None => true,
            ExtKind::Ramified => p.terms.keys().all(|e| e.rem_euclid(2) == 0),
            ExtKind::Unramified => p.terms.values().all(|c| c.in_prime_field()),
        }
    }

    /// A coefficient-field element ε with τ(ε) = −ε (unramified model only).
    pub fn trace_zero_unit(&self) -> Result<FieldElem> {
        match self.ext {
            ExtKind::Unramified => Ok(self.field().s()),
            _ => Err(Error::UnsupportedField("trace-zero unit needs the unramified model".into())),
        }
    }
}

/// A Laurent polynomial in the uniformizer, normalized (no zero coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, FieldElem>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: FieldElem, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn one(f: QuadField) -> Self {
        Self::constant(f.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, FieldElem)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// Valuation: the minimal exponent; `None` for the zero element.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn coefficient(&self, exp: i64) -> Option<FieldElem> {
        self.terms.get(&exp).copied()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (&e, &c) in &other.terms {
            let entry = terms.entry(e).or_insert_with(|| {
                FieldElem { a: 0, b: 0, ..c }
            });
            let sum = *entry + c;
            if sum.is_zero() {
                terms.remove(&e);
            } else {
                *entry = sum;
            }
        }
        LaurentPoly { terms }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect() }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut acc: BTreeMap<i64, FieldElem> = BTreeMap::new();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                let prod = c1 * c2;
                let e = e1 + e2;
                match acc.get_mut(&e) {
                    Some(c) => {
                        let s = *c + prod;
                        if s.is_zero() {
                            acc.remove(&e);
                        } else {
                            *c = s;
                        }
                    }
                    None => {
                        if !prod.is_zero() {
                            acc.insert(e, prod);
                        }
                    }
                }
            }
        }
        LaurentPoly { terms: acc }
    }

    pub fn scale(&self, c: FieldElem) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(&e, &x)| (e, x * c)).collect() }
    }

    /// Inverse of a monomial c·w^e; `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<LaurentPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&e, &c) = self.terms.iter().next().unwrap();
        Some(LaurentPoly::monomial(c.inverse()?, -e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> SeriesCtx {
        SeriesCtx::new(5, ExtKind::Ramified).unwrap()
    }

    #[test]
    fn arithmetic_and_valuation() {
        let c = ctx();
        let f = c.field();
        let x = LaurentPoly::monomial(f.from_int(2), -1).add(&LaurentPoly::constant(f.from_int(3)));
        let y = LaurentPoly::monomial(f.from_int(1), 2);
        assert_eq!(x.valuation(), Some(-1));
        assert_eq!(LaurentPoly::zero().valuation(), None);
        let prod = x.mul(&y);
        assert_eq!(prod.valuation(), Some(1));
        assert_eq!(prod.coefficient(1), Some(f.from_int(2)));
        // x − x = 0 after normalization.
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn ramified_conjugation_negates_odd_exponents() {
        let c = ctx();
        let f = c.field();
        let v = LaurentPoly::monomial(f.one(), 1);
        assert_eq!(c.conj(&v), v.neg());
        let t = LaurentPoly::monomial(f.one(), 2);
        assert_eq!(c.conj(&t), t);
        assert!(c.in_base(&t));
        assert!(!c.in_base(&v));
        // τ is an involution and multiplicative.
        let x = v.add(&t).add(&LaurentPoly::constant(f.from_int(4)));
        assert_eq!(c.conj(&c.conj(&x)), x);
        assert_eq!(c.conj(&x.mul(&x)), c.conj(&x).mul(&c.conj(&x)));
    }

    #[test]
    fn unramified_conjugation_is_coefficient_frobenius() {
        let c = SeriesCtx::new(3, ExtKind::Unramified).unwrap();
        let f = c.field();
        let eps = c.trace_zero_unit().unwrap();
        let x = LaurentPoly::monomial(eps, -1);
        assert_eq!(c.conj(&x), x.neg());
        assert!(!c.in_base(&x));
        assert!(c.in_base(&LaurentPoly::monomial(f.from_int(2), 7)));
        // Unramified over F_9 would need F_81 coefficients.
        assert!(SeriesCtx::new(9, ExtKind::Unramified).is_err());
    }

    #[test]
    fn monomial_inverse() {
        let c = ctx();
        let f = c.field();
        let m = LaurentPoly::monomial(f.from_int(2), 3);
        let inv = m.monomial_inverse().unwrap();
        assert_eq!(m.mul(&inv), LaurentPoly::one(f));
        let not_monomial = m.add(&LaurentPoly::one(f));
        assert!(not_monomial.monomial_inverse().is_none());
    }
}
