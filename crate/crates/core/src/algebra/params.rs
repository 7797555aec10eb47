use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Entry `(α_i|α_j)` of the Cartan matrix of sl(n+1), 1-based indices.
pub fn cartan_entry(i: usize, j: usize) -> i64 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// Global parameters of the realization: rank `n`, split point `r`, the
/// value `γ²`, and the highest-weight values `λ_1..λ_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    n: usize,
    r: usize,
    gamma2: Rational,
    lambda: Vec<Rational>,
}

impl Params {
    pub fn new(n: usize, r: usize, gamma2: Rational, lambda: Vec<Rational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        if n > u16::MAX as usize {
            return Err(Error::InvalidParams(format!("n = {n} is too large")));
        }
        if r > n {
            return Err(Error::InvalidParams(format!("r = {r} exceeds n = {n}")));
        }
        if lambda.len() != n {
            return Err(Error::InvalidParams(format!(
                "expected {n} lambda values, got {}",
                lambda.len()
            )));
        }
        Ok(Params { n, r, gamma2, lambda })
    }

    /// Parameters with `λ = 0`.
    pub fn with_zero_weight(n: usize, r: usize, gamma2: Rational) -> Result<Self> {
        Self::new(n, r, gamma2, vec![Rational::ZERO; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn gamma2(&self) -> &Rational {
        &self.gamma2
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    /// `λ_i`, 1-based.
    pub fn lambda_i(&self, i: usize) -> &Rational {
        &self.lambda[i - 1]
    }

    /// The level `γ² − (r+1)`, the scalar by which `c` acts.
    pub fn level(&self) -> Rational {
        &self.gamma2 - &Rational::from_int(self.r as i64 + 1)
    }

    pub fn with_gamma2(&self, gamma2: Rational) -> Self {
        Params {
            gamma2,
            ..self.clone()
        }
    }

    pub fn with_lambda(&self, lambda: Vec<Rational>) -> Result<Self> {
        Self::new(self.n, self.r, self.gamma2.clone(), lambda)
    }
}
