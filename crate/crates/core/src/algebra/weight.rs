use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::algebra::params::{cartan_entry, Params};
use crate::algebra::poly::{Monomial, VarId};
use crate::error::Result;

/// A root-lattice offset `Σ k_i α_i` together with a δ-degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight {
    pub root_offset: Vec<i64>,
    pub delta_deg: i64,
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight {
            root_offset: vec![0; n],
            delta_deg: 0,
        }
    }

    /// `sign · α_[i,j] + delta · δ`.
    pub fn root_interval(n: usize, i: usize, j: usize, sign: i64, delta: i64) -> Self {
        let mut w = Weight::zero(n);
        for k in i..=j {
            w.root_offset[k - 1] = sign;
        }
        w.delta_deg = delta;
        w
    }

    /// `(α_i | offset)`.
    pub fn pair_simple(&self, i: usize) -> i64 {
        self.root_offset
            .iter()
            .enumerate()
            .map(|(k, c)| c * cartan_entry(i, k + 1))
            .sum()
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight {
            root_offset: self
                .root_offset
                .iter()
                .zip(&rhs.root_offset)
                .map(|(a, b)| a + b)
                .collect(),
            delta_deg: self.delta_deg + rhs.delta_deg,
        }
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self + &(-rhs)
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight {
            root_offset: self.root_offset.iter().map(|a| -a).collect(),
            delta_deg: -self.delta_deg,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.root_offset.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}a{}", k + 1)?;
            } else {
                write!(f, "{sign}{mag}a{}", k + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "; {}", self.delta_deg)
    }
}

/// Weight of a single Fock variable.
pub fn var_weight(v: VarId, params: &Params) -> Weight {
    let n = params.n();
    match v {
        VarId::X { i, j, m } => {
            let (i, j) = (i as usize, j as usize);
            if j <= params.r() && m >= 0 {
                Weight::root_interval(n, i, j, 1, -(m as i64))
            } else {
                Weight::root_interval(n, i, j, -1, m as i64)
            }
        }
        VarId::Y { m, .. } => Weight {
            root_offset: vec![0; n],
            delta_deg: -(m as i64),
        },
    }
}

pub fn weight_of(mono: &Monomial, params: &Params) -> Result<Weight> {
    mono.check(params)?;
    let mut w = Weight::zero(params.n());
    for &(v, e) in mono.factors() {
        let vw = var_weight(v, params);
        for (a, b) in w.root_offset.iter_mut().zip(&vw.root_offset) {
            *a += b * e as i64;
        }
        w.delta_deg += vw.delta_deg * e as i64;
    }
    Ok(w)
}
