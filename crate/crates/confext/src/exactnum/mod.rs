//! Exact scalars: ℚ, real quadratic fields ℚ(√d), and univariate polynomials over ℚ.

mod rational;
mod scalar;
mod unipoly;

pub use rational::Rational;
pub use scalar::{denominator_lcm, squarefree_decompose, Scalar};
pub use unipoly::{extract_roots, RootSplit, UniPoly};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("mixed quadratic extensions sqrt({0}) and sqrt({1})")]
    MixedExtension(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("square root of negative rational {0}")]
    NegativeRadicand(String),
    #[error("cannot parse scalar: {0}")]
    Parse(String),
}

/// Binomial coefficient C(n, k) for any integer n (falling factorial over k!).
pub fn binomial(n: i64, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc = &acc * &Rational::new(n - i, i + 1);
    }
    acc
}

/// Falling factorial n(n−1)…(n−k+1).
pub fn falling(n: i64, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc = &acc * &Rational::from_int(n - i);
    }
    acc
}

pub fn factorial(k: u32) -> Rational {
    falling(k as i64, k)
}
