use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// The paper's coefficient field modulus.
pub const DEFAULT_PRIME: u32 = 32003;

/// An element of `F_p`, always fully reduced modulo `p`.
pub type FieldElement = u32;

/// The prime field `Z/pZ`. Carries the modulus so polynomials can stay
/// plain data; all coefficient arithmetic goes through this struct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl Default for PrimeField {
    fn default() -> Self {
        Self::new(DEFAULT_PRIME).unwrap()
    }
}

impl PrimeField {
    /// Constructs the field, rejecting non-primes.
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce(&self, v: u64) -> FieldElement {
        (v % self.p as u64) as u32
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero { p: self.p });
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, mut base: FieldElement, mut exp: u32) -> FieldElement {
        let mut acc: FieldElement = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraparound_add() {
        let f = PrimeField::default();
        assert_eq!(f.add(32002, 1), 0);
    }

    #[test]
    fn inv_identity() {
        let f = PrimeField::default();
        assert_eq!(f.inv(1).unwrap(), 1);
    }

    #[test]
    fn inv_two() {
        let f = PrimeField::default();
        let i = f.inv(2).unwrap();
        assert_eq!(i, 16002);
        assert_eq!(f.mul(2, i), 1);
    }

    #[test]
    fn inv_zero_errors() {
        let f = PrimeField::default();
        assert!(f.inv(0).is_err());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(PrimeField::new(32004).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(101).is_ok());
    }

    // Field axioms sampled over a 100-element subset.
    #[test]
    fn field_axioms_sampled() {
        let f = PrimeField::default();
        let sample: Vec<u32> = (0..100).map(|i| (i * 317 + 5) % 32003).collect();
        for &a in &sample {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for &b in &sample {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
                for &c in sample.iter().take(10) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}
