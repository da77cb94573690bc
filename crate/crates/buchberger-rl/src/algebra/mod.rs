//! Exact arithmetic: the prime field `F_p`, monomials under the grevlex
//! order, sparse polynomials, S-polynomials, and the multivariate
//! division algorithm with addition counting.

mod field;
mod monomial;
mod poly;

pub use field::{FieldElement, PrimeField, DEFAULT_PRIME};
pub use monomial::{grevlex_cmp, Monomial};
pub use poly::{parse_polynomial, reduce, reduce_tracked, s_polynomial, Polynomial, ReductionResult, Term};
