use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::algebra::params::Params;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Mode = i32;

/// An indexed Fock-space variable.
///
/// `X { i, j, m }` is `x[i,j,m]` with `1 ≤ i ≤ j ≤ n`; `Y { i, m }` is
/// `y[i,m]` with `1 ≤ i ≤ n`, `m ≥ 1`. The derived order (all `X` before all
/// `Y`, then lexicographic on the indices) is the canonical monomial order.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum VarId {
    X { i: u16, j: u16, m: Mode },
    Y { i: u16, m: Mode },
}

impl VarId {
    pub fn x(i: usize, j: usize, m: Mode) -> Self {
        VarId::X {
            i: i as u16,
            j: j as u16,
            m,
        }
    }

    pub fn y(i: usize, m: Mode) -> Self {
        VarId::Y { i: i as u16, m }
    }

    pub fn mode(&self) -> Mode {
        match *self {
            VarId::X { m, .. } | VarId::Y { m, .. } => m,
        }
    }

    pub fn check(&self, params: &Params) -> Result<()> {
        let n = params.n();
        match *self {
            VarId::X { i, j, .. } => {
                let (i, j) = (i as usize, j as usize);
                if i == 0 || i > j || j > n {
                    return Err(Error::IndexOutOfBounds(format!(
                        "{self} needs 1 <= i <= j <= {n}"
                    )));
                }
            }
            VarId::Y { i, m } => {
                if i == 0 || i as usize > n {
                    return Err(Error::IndexOutOfBounds(format!("{self} needs 1 <= i <= {n}")));
                }
                if m < 1 {
                    return Err(Error::IndexOutOfBounds(format!("{self} needs a positive mode")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarId::X { i, j, m } => write!(f, "x[{i},{j},{m}]"),
            VarId::Y { i, m } => write!(f, "y[{i},{m}]"),
        }
    }
}

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[(VarId, u32); 8]>);

impl Clone for Monomial {
    fn clone(&self) -> Self {
        Monomial(SmallVec::from_slice(&self.0))
    }
}

impl Monomial {
    /// The vacuum monomial `1`.
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(smallvec::smallvec![(v, 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = (VarId, u32)>>(factors: I) -> Self {
        let mut m = Monomial::one();
        for (v, e) in factors {
            m.mul_var_assign(v, e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn mul_var_assign(&mut self, v: VarId, e: u32) {
        if e == 0 {
            return;
        }
        match self.0.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(k) => self.0[k].1 += e,
            Err(k) => self.0.insert(k, (v, e)),
        }
    }

    pub fn mul_var(&self, v: VarId) -> Monomial {
        let mut m = self.clone();
        m.mul_var_assign(v, 1);
        m
    }

    /// `∂/∂v` of this monomial as `(multiplicity, monomial)`, or `None` if `v`
    /// does not occur.
    pub fn derivative(&self, v: VarId) -> Option<(u32, Monomial)> {
        let k = self.0.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let e = self.0[k].1;
        let mut m = self.clone();
        if e == 1 {
            m.0.remove(k);
        } else {
            m.0[k].1 -= 1;
        }
        Some((e, m))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va < vb {
                        out.push((va, ea));
                        a.next();
                    } else if vb < va {
                        out.push((vb, eb));
                        b.next();
                    } else {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                }
                (Some(&&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&&x)) => {
                    out.push(x);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Divides out `other`, or `None` if it does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = self.clone();
        for &(v, e) in other.factors() {
            let k = m.0.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
            match m.0[k].1.cmp(&e) {
                std::cmp::Ordering::Less => return None,
                std::cmp::Ordering::Equal => {
                    m.0.remove(k);
                }
                std::cmp::Ordering::Greater => m.0[k].1 -= e,
            }
        }
        Some(m)
    }

    pub fn check(&self, params: &Params) -> Result<()> {
        self.vars().try_for_each(|v| v.check(params))
    }

    /// Largest `|mode|` among the variables, 0 for the vacuum.
    pub fn max_abs_mode(&self) -> Mode {
        self.vars().map(|v| v.mode().abs()).max().unwrap_or(0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of the Fock space: a sparse polynomial with exact rational
/// coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FockPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl FockPoly {
    pub fn zero() -> Self {
        FockPoly::default()
    }

    /// The vacuum vector `1`.
    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(Rational::ONE, m)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = FockPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(Monomial::var(v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> btree_map::Iter<'_, Monomial, Rational> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &FockPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, a) in other.terms() {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> FockPoly {
        let mut out = FockPoly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn check(&self, params: &Params) -> Result<()> {
        self.monomials().try_for_each(|m| m.check(params))
    }

    pub fn max_abs_mode(&self) -> Mode {
        self.monomials().map(Monomial::max_abs_mode).max().unwrap_or(0)
    }

    /// Leading term in canonical order.
    pub fn first_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next()
    }
}

impl FromIterator<(Monomial, Rational)> for FockPoly {
    fn from_iter<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = FockPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }
}

impl<'a> Add<&'a FockPoly> for &'a FockPoly {
    type Output = FockPoly;
    fn add(self, rhs: &FockPoly) -> FockPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::ONE);
        out
    }
}

impl<'a> Sub<&'a FockPoly> for &'a FockPoly {
    type Output = FockPoly;
    fn sub(self, rhs: &FockPoly) -> FockPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::ONE);
        out
    }
}

impl<'a> Mul<&'a FockPoly> for &'a FockPoly {
    type Output = FockPoly;
    fn mul(self, rhs: &FockPoly) -> FockPoly {
        let mut out = FockPoly::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &FockPoly {
    type Output = FockPoly;
    fn neg(self) -> FockPoly {
        self.scale(&-Rational::ONE)
    }
}

impl Add for FockPoly {
    type Output = FockPoly;
    fn add(mut self, rhs: FockPoly) -> FockPoly {
        self.add_scaled(&rhs, &Rational::ONE);
        self
    }
}

impl Sub for FockPoly {
    type Output = FockPoly;
    fn sub(mut self, rhs: FockPoly) -> FockPoly {
        self.add_scaled(&rhs, &-Rational::ONE);
        self
    }
}

impl Mul for FockPoly {
    type Output = FockPoly;
    fn mul(self, rhs: FockPoly) -> FockPoly {
        &self * &rhs
    }
}

impl fmt::Display for FockPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FockPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, j: usize, m: Mode) -> FockPoly {
        FockPoly::var(VarId::x(i, j, m))
    }

    fn y(i: usize, m: Mode) -> FockPoly {
        FockPoly::var(VarId::y(i, m))
    }

    fn c(n: i64, d: i64) -> FockPoly {
        FockPoly::constant(Rational::new(n, d))
    }

    #[test]
    fn additive_inverse_of_vacuum() {
        assert!((&FockPoly::one() + &c(-1, 1)).is_zero());
    }

    #[test]
    fn like_terms_merge() {
        let p = &x(1, 1, -1) + &x(1, 1, -1);
        assert_eq!(p, FockPoly::term(Rational::from_int(2), Monomial::var(VarId::x(1, 1, -1))));
    }

    #[test]
    fn mixed_merge() {
        let half = Rational::new(1, 2);
        let a = y(1, 2).scale(&half);
        let b = &y(1, 2).scale(&half) + &x(2, 2, 0);
        assert_eq!(&a + &b, &y(1, 2) + &x(2, 2, 0));
    }

    #[test]
    fn products() {
        let v = x(1, 1, -1);
        assert_eq!(
            &v * &v,
            FockPoly::monomial(Monomial::from_factors([(VarId::x(1, 1, -1), 2)]))
        );
        assert_eq!(&FockPoly::one() * &v, v);
        let p = &x(1, 2, 0) + &FockPoly::one();
        let q = &x(1, 2, 0) - &FockPoly::one();
        assert_eq!(&p * &q, &(&x(1, 2, 0) * &x(1, 2, 0)) - &FockPoly::one());
    }

    #[test]
    fn derivative_and_division() {
        let m = Monomial::from_factors([(VarId::x(1, 1, 0), 3), (VarId::y(1, 2), 1)]);
        let (k, d) = m.derivative(VarId::x(1, 1, 0)).unwrap();
        assert_eq!(k, 3);
        assert_eq!(d.exponent(VarId::x(1, 1, 0)), 2);
        assert!(m.derivative(VarId::y(1, 1)).is_none());
        let q = m.div(&Monomial::var(VarId::y(1, 2))).unwrap();
        assert_eq!(q, Monomial::from_factors([(VarId::x(1, 1, 0), 3)]));
        assert!(q.div(&Monomial::var(VarId::y(1, 2))).is_none());
    }

    #[test]
    fn canonical_order_puts_x_before_y() {
        let m = Monomial::from_factors([(VarId::y(1, 1), 1), (VarId::x(2, 2, 5), 1), (VarId::x(1, 2, -4), 2)]);
        assert_eq!(m.to_string(), "x[1,2,-4]^2*x[2,2,5]*y[1,1]");
    }
}
