//! Seeded samplers for the random ideal distributions used throughout:
//! weighted/uniform binomials and the Poisson-extended non-binomial
//! model, plus the JSON ideal file format.

use crate::algebra::{parse_polynomial, Monomial, Polynomial, PrimeField, Term, DEFAULT_PRIME};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// How monomial degrees are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Degree uniform on {1..d}, then uniform among monomials of that
    /// exact degree. Tends to produce low-degree binomials.
    Weighted,
    /// Uniform over all monomials of degree 1..d.
    Uniform,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Weighted => write!(f, "weighted"),
            Flavor::Uniform => write!(f, "uniform"),
        }
    }
}

/// A distribution over s-tuples of binomials of degree <= d in n
/// variables, written "n-d-s (flavor)". An optional Poisson parameter
/// turns it into the non-binomial toy model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub n: usize,
    pub d: u32,
    pub s: usize,
    pub flavor: Flavor,
    /// Poisson parameter for extra monomial terms; `None` means pure
    /// binomials.
    pub extra_terms_lambda: Option<f64>,
    pub p: u32,
}

impl DistributionSpec {
    pub fn new(n: usize, d: u32, s: usize, flavor: Flavor) -> Result<Self> {
        if n < 1 || d < 1 || s < 1 {
            return Err(Error::InvalidArgument(format!(
                "distribution requires n, d, s >= 1 (got {n}-{d}-{s})"
            )));
        }
        Ok(Self {
            n,
            d,
            s,
            flavor,
            extra_terms_lambda: None,
            p: DEFAULT_PRIME,
        })
    }

    pub fn with_lambda(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "poisson lambda must be positive (got {lambda})"
            )));
        }
        self.extra_terms_lambda = Some(lambda);
        Ok(self)
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("spec primes are validated")
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{} {}", self.n, self.d, self.s, self.flavor)?;
        if let Some(l) = self.extra_terms_lambda {
            write!(f, " lambda={l}")?;
        }
        Ok(())
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    /// Accepts "3-20-10 weighted", "3-20-10 (weighted)", and an
    /// optional trailing "lambda=0.5".
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("cannot parse distribution spec '{s}'"));
        let mut words = s.split_whitespace();
        let triple = words.next().ok_or_else(bad)?;
        let mut parts = triple.split('-');
        let n: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let d: u32 = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        let sz: usize = parts.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let flavor_word = words.next().ok_or_else(bad)?;
        let flavor = match flavor_word.trim_matches(|c| c == '(' || c == ')') {
            "weighted" => Flavor::Weighted,
            "uniform" => Flavor::Uniform,
            _ => return Err(bad()),
        };
        let mut spec = DistributionSpec::new(n, d, sz, flavor)?;
        if let Some(extra) = words.next() {
            let lambda = extra
                .strip_prefix("lambda=")
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(bad)?;
            spec = spec.with_lambda(lambda)?;
        }
        if words.next().is_some() {
            return Err(bad());
        }
        Ok(spec)
    }
}

/// A sampled ideal together with the spec and seed that reproduce it.
#[derive(Debug, Clone)]
pub struct IdealSample {
    pub generators: Vec<Polynomial>,
    pub spec: DistributionSpec,
    pub seed: u64,
}

/// Number of monomials of exact degree `t` in `n` variables,
/// C(t+n-1, n-1).
pub fn monomials_of_degree(n: usize, t: u32) -> u64 {
    binomial(t as u64 + n as u64 - 1, n as u64 - 1)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// The `rank`-th monomial of exact degree `t` in `n` variables under
/// the stars-and-bars bijection.
fn unrank_monomial(n: usize, t: u32, mut rank: u64) -> Monomial {
    let mut exps = vec![0u32; n];
    let mut remaining = t;
    for i in 0..n.saturating_sub(1) {
        let vars_left = (n - i - 1) as u64;
        for a in 0..=remaining {
            let cnt = binomial((remaining - a) as u64 + vars_left - 1, vars_left - 1);
            if rank < cnt {
                exps[i] = a;
                remaining -= a;
                break;
            }
            rank -= cnt;
        }
    }
    exps[n - 1] = remaining;
    Monomial::new(exps)
}

/// Draws a non-constant monomial of degree at most `d` per the flavor.
pub fn random_monomial<R: Rng>(flavor: Flavor, n: usize, d: u32, rng: &mut R) -> Monomial {
    match flavor {
        Flavor::Weighted => {
            let t = rng.gen_range(1..=d);
            let count = monomials_of_degree(n, t);
            unrank_monomial(n, t, rng.gen_range(0..count))
        }
        Flavor::Uniform => {
            // all monomials of degree 1..=d
            let total: u64 = (1..=d).map(|t| monomials_of_degree(n, t)).sum();
            let mut r = rng.gen_range(0..total);
            for t in 1..=d {
                let cnt = monomials_of_degree(n, t);
                if r < cnt {
                    return unrank_monomial(n, t, r);
                }
                r -= cnt;
            }
            unreachable!("rank exhausts the degree slices");
        }
    }
}

fn random_nonzero_coeff<R: Rng>(p: u32, rng: &mut R) -> u32 {
    rng.gen_range(1..p)
}

/// One binomial c1*m1 + c2*m2 with uniform nonzero coefficients. When
/// the two monomials collide the terms merge into a single monomial
/// generator; the draw is repeated only if the coefficients cancel to
/// zero.
fn random_binomial<R: Rng>(spec: &DistributionSpec, rng: &mut R) -> Polynomial {
    let field = spec.field();
    loop {
        let m1 = random_monomial(spec.flavor, spec.n, spec.d, rng);
        let m2 = random_monomial(spec.flavor, spec.n, spec.d, rng);
        let c1 = random_nonzero_coeff(spec.p, rng);
        let c2 = random_nonzero_coeff(spec.p, rng);
        let poly = Polynomial::new(
            spec.n,
            vec![
                Term { coeff: c1, monomial: m1 },
                Term { coeff: c2, monomial: m2 },
            ],
            &field,
        );
        if !poly.is_zero() {
            return poly;
        }
    }
}

/// Poisson sampling by inversion; exact for the small lambdas used here.
pub fn sample_poisson<R: Rng>(lambda: f64, rng: &mut R) -> u32 {
    let u: f64 = rng.gen();
    let mut k = 0u32;
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    while u > cdf && k < 1000 {
        k += 1;
        pmf *= lambda / k as f64;
        cdf += pmf;
    }
    k
}

/// Draws s generators from the spec using the provided RNG. With a
/// Poisson parameter, each generator is a binomial plus k extra
/// monomial terms from the same distribution; colliding monomials merge
/// by coefficient addition.
pub fn random_ideal<R: Rng>(spec: &DistributionSpec, rng: &mut R) -> Vec<Polynomial> {
    let field = spec.field();
    (0..spec.s)
        .map(|_| {
            let base = random_binomial(spec, rng);
            match spec.extra_terms_lambda {
                None => base,
                Some(lambda) => {
                    let k = sample_poisson(lambda, rng);
                    let mut terms = base.terms().to_vec();
                    for _ in 0..k {
                        terms.push(Term {
                            coeff: random_nonzero_coeff(spec.p, rng),
                            monomial: random_monomial(spec.flavor, spec.n, spec.d, rng),
                        });
                    }
                    Polynomial::new(spec.n, terms, &field)
                }
            }
        })
        .collect()
}

/// Regenerates the sample for `(spec, seed)` bit-exactly. Uses
/// ChaCha8 seeded from the 64-bit seed; per-episode seeds elsewhere
/// derive as seed0 + index.
pub fn sample_ideal(spec: &DistributionSpec, seed: u64) -> IdealSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    IdealSample {
        generators: random_ideal(spec, &mut rng),
        spec: spec.clone(),
        seed,
    }
}

/// On-disk ideal format: generators as polynomial strings plus enough
/// context to parse them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n: usize,
    #[serde(default = "default_prime")]
    pub p: u32,
    pub generators: Vec<String>,
}

fn default_prime() -> u32 {
    DEFAULT_PRIME
}

impl IdealFile {
    pub fn from_sample(sample: &IdealSample) -> Self {
        Self {
            spec: Some(sample.spec.to_string()),
            seed: Some(sample.seed),
            n: sample.spec.n,
            p: sample.spec.p,
            generators: sample.generators.iter().map(|g| g.to_string()).collect(),
        }
    }

    pub fn parse_generators(&self) -> Result<(Vec<Polynomial>, PrimeField)> {
        let field = PrimeField::new(self.p)?;
        let gens = self
            .generators
            .iter()
            .map(|s| parse_polynomial(s, self.n, &field))
            .collect::<Result<Vec<_>>>()?;
        Ok((gens, field))
    }
}
