use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// A monomial `x^a = x_0^{a_0} ... x_{n-1}^{a_{n-1}}` stored as its
/// exponent vector. Comparison is grevlex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exponents: Vec<u32>,
}

/// Grevlex comparison: higher total degree wins; on equal degree the
/// monomial whose last nonzero entry of `a - b` is negative is larger.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    if a.num_vars() != b.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: a.num_vars(),
            got: b.num_vars(),
        });
    }
    Ok(a.cmp(b))
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    /// The constant monomial 1 in `n` variables.
    pub fn one(n: usize) -> Self {
        Self {
            exponents: vec![0; n],
        }
    }

    /// The variable `x_i` in `n` variables.
    pub fn variable(i: usize, n: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self { exponents: e }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn num_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    /// `self / other`; errors unless `other` divides `self`.
    pub fn quotient(&self, other: &Monomial) -> Result<Monomial> {
        if !other.divides(self) {
            return Err(Error::NotDivisible {
                numerator: self.to_string(),
                denominator: other.to_string(),
            });
        }
        Ok(Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| *a.min(b))
                .collect(),
        }
    }

    /// Variable indices with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.num_vars(), other.num_vars());
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.exponents.iter().zip(&other.exponents).rev() {
            match a.cmp(b) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {}
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}
