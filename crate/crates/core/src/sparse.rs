//! Compact monomials and sparse integer vectors for the hot loops of the
//! verification suites.
//!
//! Variables are numbered in order of first use and a monomial is the sorted
//! multiset of its variable numbers, stored inline. Coefficients are exact
//! integers: callers scale rational data by a common denominator first.

use rustc_hash::FxHashMap;

use crate::algebra::{FockPoly, Monomial, VarId};
use crate::rational::Rational;

pub type MonoId = u32;
pub type VarIndex = u16;
pub type Coeff = i64;

/// Sparse vector over interned monomials, sorted by id, without zeros.
pub type SparseVec = Vec<(MonoId, Coeff)>;

/// Largest total degree a [`Packed`] monomial can hold.
pub const PACKED_DEGREE: usize = 15;

/// A monomial as a sorted multiset of variable numbers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Packed {
    len: u8,
    vars: [VarIndex; PACKED_DEGREE],
}

impl Packed {
    pub fn one() -> Self {
        Packed::default()
    }

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    pub fn as_slice(&self) -> &[VarIndex] {
        &self.vars[..self.len as usize]
    }

    /// Multiplies by one variable.
    pub fn times(&self, v: VarIndex) -> Packed {
        let n = self.len as usize;
        assert!(n < PACKED_DEGREE, "monomial degree exceeds {PACKED_DEGREE}");
        let k = self.as_slice().partition_point(|&w| w <= v);
        let mut out = *self;
        out.vars.copy_within(k..n, k + 1);
        out.vars[k] = v;
        out.len += 1;
        out
    }

    /// Removes the variable at position `k`.
    pub fn without(&self, k: usize) -> Packed {
        let n = self.len as usize;
        let mut out = *self;
        out.vars.copy_within(k + 1..n, k);
        out.vars[n - 1] = 0;
        out.len -= 1;
        out
    }

    /// Distinct variables as `(position of first occurrence, exponent)`.
    pub fn runs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        let s = self.as_slice();
        (0..s.len()).filter(move |&k| k == 0 || s[k] != s[k - 1]).map(move |k| {
            let e = s[k..].iter().take_while(|&&w| w == s[k]).count();
            (k, e as u32)
        })
    }
}

/// Numbers variables and monomials.
pub struct Interner {
    /// Direct lookup for variables with small indices and modes.
    dense: Vec<VarIndex>,
    var_ids: FxHashMap<VarId, VarIndex>,
    vars: Vec<VarId>,
    monos: Vec<Packed>,
    ids: FxHashMap<Packed, MonoId>,
}

const DENSE_INDEX: usize = 16;
const DENSE_MODE: i32 = 64;
const UNSET: VarIndex = VarIndex::MAX;

fn dense_slot(v: VarId) -> Option<usize> {
    let (y, i, j, m) = match v {
        VarId::X { i, j, m } => (0, i as usize, j as usize, m),
        VarId::Y { i, m } => (1, i as usize, 0, m),
    };
    (i < DENSE_INDEX && j < DENSE_INDEX && m.abs() < DENSE_MODE)
        .then(|| ((y * DENSE_INDEX + i) * DENSE_INDEX + j) * (2 * DENSE_MODE as usize) + (m + DENSE_MODE) as usize)
}

impl Default for Interner {
    fn default() -> Self {
        Interner {
            dense: vec![UNSET; 2 * DENSE_INDEX * DENSE_INDEX * 2 * DENSE_MODE as usize],
            var_ids: FxHashMap::default(),
            vars: Vec::new(),
            monos: Vec::new(),
            ids: FxHashMap::default(),
        }
    }
}

impl Interner {
    pub fn var(&mut self, v: VarId) -> VarIndex {
        let slot = dense_slot(v);
        if let Some(s) = slot {
            if self.dense[s] != UNSET {
                return self.dense[s];
            }
        } else if let Some(&k) = self.var_ids.get(&v) {
            return k;
        }
        let k = VarIndex::try_from(self.vars.len())
            .ok()
            .filter(|&k| k != UNSET)
            .expect("fewer than 2^16 - 1 distinct variables");
        self.vars.push(v);
        match slot {
            Some(s) => self.dense[s] = k,
            None => {
                self.var_ids.insert(v, k);
            }
        }
        k
    }

    pub fn var_id(&self, k: VarIndex) -> VarId {
        self.vars[k as usize]
    }

    pub fn intern(&mut self, m: Packed) -> MonoId {
        if let Some(&id) = self.ids.get(&m) {
            return id;
        }
        let id = MonoId::try_from(self.monos.len()).expect("fewer than 2^32 monomials");
        self.monos.push(m);
        self.ids.insert(m, id);
        id
    }

    pub fn get(&self, id: MonoId) -> Packed {
        self.monos[id as usize]
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    /// Forgets all monomials; variable numbers stay valid.
    pub fn clear_monomials(&mut self) {
        self.monos.clear();
        self.ids.clear();
    }

    pub fn pack(&mut self, m: &Monomial) -> Packed {
        let mut p = Packed::one();
        for &(v, e) in m.factors() {
            let k = self.var(v);
            for _ in 0..e {
                p = p.times(k);
            }
        }
        p
    }

    pub fn unpack(&self, p: &Packed) -> Monomial {
        Monomial::from_factors(p.as_slice().iter().map(|&k| (self.var_id(k), 1)))
    }

    /// The polynomial `v / scale`.
    pub fn to_poly(&self, v: &SparseVec, scale: &Rational) -> FockPoly {
        let inv = scale.recip().expect("nonzero scale");
        v.iter()
            .map(|&(id, c)| (self.unpack(&self.get(id)), &Rational::from_int(c) * &inv))
            .collect()
    }
}

pub fn rational_from_i128(c: i128) -> Rational {
    match i64::try_from(c) {
        Ok(c) => Rational::from_int(c),
        Err(_) => c.to_string().parse().expect("integer literal"),
    }
}

/// Converts an integral rational to a [`Coeff`], or `None` if it is not an
/// integer or does not fit.
pub fn integral(c: &Rational) -> Option<Coeff> {
    if !c.is_integer() {
        return None;
    }
    Coeff::try_from(c.numer()).ok()
}

/// Dense scratch accumulator indexed by monomial id.
#[derive(Default)]
pub struct Accumulator {
    vals: Vec<Coeff>,
    live: Vec<bool>,
    touched: Vec<MonoId>,
}

impl Accumulator {
    pub fn add(&mut self, id: MonoId, c: Coeff) {
        let k = id as usize;
        if k >= self.vals.len() {
            let len = (k + 1).max(self.vals.len() * 2);
            self.vals.resize(len, 0);
            self.live.resize(len, false);
        }
        if self.live[k] {
            self.vals[k] = self.vals[k].checked_add(c).expect("coefficient overflow");
        } else {
            self.live[k] = true;
            self.vals[k] = c;
            self.touched.push(id);
        }
    }

    pub fn add_scaled(&mut self, v: &[(MonoId, Coeff)], c: Coeff) {
        if c == 0 {
            return;
        }
        for &(id, x) in v {
            self.add(id, x.checked_mul(c).expect("coefficient overflow"));
        }
    }

    pub fn drain(&mut self) -> SparseVec {
        let mut touched = std::mem::take(&mut self.touched);
        touched.sort_unstable();
        let mut out = SparseVec::with_capacity(touched.len());
        for &id in &touched {
            let k = id as usize;
            self.live[k] = false;
            if self.vals[k] != 0 {
                out.push((id, self.vals[k]));
            }
        }
        touched.clear();
        self.touched = touched;
        out
    }

    /// Discards all pending entries.
    pub fn reset(&mut self) {
        *self = Accumulator::default();
    }
}

/// `a − b`.
pub fn difference(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = SparseVec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -b[j].1));
            j += 1;
        } else {
            let c = a[i].1 - b[j].1;
            if c != 0 {
                out.push((a[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    out
}
