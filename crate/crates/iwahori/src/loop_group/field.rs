//! Small finite fields F_p and F_{p²} for odd p, exactly.
//!
//! Elements are a + b·s with s² a fixed non-residue, so the quadratic
//! extension and its Frobenius a + b·s ↦ a − b·s are both closed-form.
//! Every element carries its field; mixing fields panics.

use crate::error::Error;
use crate::Result;

/// The container field F_(p²) = F_p\[s\]/(s² − nr).
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash)]
pub struct QuadField {
    pub p: u32,
    pub nr: u32,
}

/// An element a + b·s of F_{p²}.
#[derive(Debug, Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    pub p: u32,
    pub nr: u32,
    pub a: u32,
    pub b: u32,
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl QuadField {
    /// F_{p²} for an odd prime p, with the smallest quadratic non-residue.
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not an odd prime")));
        }
        let nr = (2..p)
            .find(|&n| pow_mod(n as u64, (p as u64 - 1) / 2, p as u64) == p as u64 - 1)
            .ok_or_else(|| Error::UnsupportedField(format!("no non-residue mod {p}")))?;
        Ok(QuadField { p, nr })
    }

    pub fn elem(&self, a: i64, b: i64) -> FieldElem {
        let p = self.p as i64;
        FieldElem {
            p: self.p,
            nr: self.nr,
            a: a.rem_euclid(p) as u32,
            b: b.rem_euclid(p) as u32,
        }
    }

    pub fn from_int(&self, a: i64) -> FieldElem {
        self.elem(a, 0)
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0, 0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1, 0)
    }

    /// The generator s, which satisfies s^p = −s (a trace-zero unit).
    pub fn s(&self) -> FieldElem {
        self.elem(0, 1)
    }
}

impl FieldElem {
    fn field(&self) -> QuadField {
        QuadField { p: self.p, nr: self.nr }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// The p-power Frobenius a + b·s ↦ a − b·s.
    pub fn frobenius(&self) -> FieldElem {
        FieldElem { a: self.a, b: (self.p - self.b) % self.p, ..*self }
    }

    /// Whether the element lies in the prime field F_p.
    pub fn in_prime_field(&self) -> bool {
        self.b == 0
    }

    pub fn inverse(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        let p = self.p as u64;
        // Norm a² − nr·b² is a non-zero element of F_p.
        let norm = (self.a as u64 * self.a as u64
            + (p - self.nr as u64 % p) * (self.b as u64 * self.b as u64 % p))
            % p;
        let ninv = pow_mod(norm, p - 2, p);
        let f = self.field();
        let conj = self.frobenius();
        Some(f.elem(
            (conj.a as u64 * ninv % p) as i64,
            (conj.b as u64 * ninv % p) as i64,
        ))
    }
}

impl std::ops::Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        assert_eq!(self.field(), rhs.field(), "mixed finite fields");
        self.field().elem((self.a + rhs.a) as i64, (self.b + rhs.b) as i64)
    }
}

impl std::ops::Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: FieldElem) -> FieldElem {
        self + (-rhs)
    }
}

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.field().elem(-(self.a as i64), -(self.b as i64))
    }
}

impl std::ops::Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: FieldElem) -> FieldElem {
        assert_eq!(self.field(), rhs.field(), "mixed finite fields");
        let (a1, b1, a2, b2) =
            (self.a as i64, self.b as i64, rhs.a as i64, rhs.b as i64);
        let nr = self.nr as i64;
        self.field().elem(a1 * a2 + nr * b1 * b2, a1 * b2 + b1 * a2)
    }
}

/// The residue field F_q of the base, q = p^degree with degree ∈ {1, 2}.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub struct BaseField {
    pub field: QuadField,
    pub degree: u8,
}

impl BaseField {
    /// Parse q as an odd prime or the square of one.
    pub fn new(q: u32) -> Result<Self> {
        if is_prime(q) && q != 2 {
            return Ok(BaseField { field: QuadField::new(q)?, degree: 1 });
        }
        let mut p = 2u32;
        while p * p < q {
            p += 1;
        }
        if p * p == q {
            return Ok(BaseField { field: QuadField::new(p)?, degree: 2 });
        }
        Err(Error::UnsupportedField(format!(
            "q = {q} is not an odd prime power p^k with k ≤ 2"
        )))
    }

    pub fn q(&self) -> u32 {
        if self.degree == 1 {
            self.field.p
        } else {
            self.field.p * self.field.p
        }
    }

    /// Whether x lies in F_q inside the container F_{p²}.
    pub fn contains(&self, x: &FieldElem) -> bool {
        self.degree == 2 || x.in_prime_field()
    }

    /// All non-zero elements of F_q, deterministic order.
    pub fn units(&self) -> Vec<FieldElem> {
        let p = self.field.p as i64;
        let mut out = Vec::new();
        let bmax = if self.degree == 2 { p } else { 1 };
        for a in 0..p {
            for b in 0..bmax {
                if a != 0 || b != 0 {
                    out.push(self.field.elem(a, b));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for p in [3u32, 5, 7] {
            let f = QuadField::new(p).unwrap();
            // s² is the chosen non-residue.
            assert_eq!(f.s() * f.s(), f.from_int(f.nr as i64));
            let elems: Vec<FieldElem> =
                (0..p as i64).flat_map(|a| (0..p as i64).map(move |b| (a, b)))
                    .map(|(a, b)| f.elem(a, b))
                    .collect();
            for &x in &elems {
                // Frobenius is the identity exactly on F_p.
                assert_eq!(x.frobenius() == x, x.in_prime_field());
                // Frobenius is multiplicative.
                for &y in &elems {
                    assert_eq!((x * y).frobenius(), x.frobenius() * y.frobenius());
                }
                if !x.is_zero() {
                    assert_eq!(x * x.inverse().unwrap(), f.one());
                }
            }
        }
    }

    #[test]
    fn base_field_parsing() {
        assert_eq!(BaseField::new(3).unwrap().q(), 3);
        assert_eq!(BaseField::new(9).unwrap().q(), 9);
        assert_eq!(BaseField::new(9).unwrap().degree, 2);
        assert!(BaseField::new(2).is_err());
        assert!(BaseField::new(8).is_err()); // 2³, and even
        assert!(BaseField::new(12).is_err());
        assert_eq!(BaseField::new(49).unwrap().field.p, 7);
    }

    #[test]
    fn unit_counts() {
        assert_eq!(BaseField::new(5).unwrap().units().len(), 4);
        assert_eq!(BaseField::new(9).unwrap().units().len(), 8);
    }
}
