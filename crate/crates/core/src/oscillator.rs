//! The oscillator algebras acting on the Fock space: elementary mode
//! operators, their creation/annihilation split, normal-ordered words, and
//! the matrix 𝔅 that normalizes the `b` oscillators.

use std::fmt;

use smallvec::SmallVec;

use crate::algebra::{cartan_entry, FockPoly, Mode, Monomial, Params, VarId};
use crate::error::{Error, Result};
use crate::linalg::bareiss_determinant;
use crate::rational::Rational;
use crate::report::Report;

/// One elementary mode operator `a_{ij,m}`, `a*_{ij,m}` or `b_{i,m}`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum OscillatorLabel {
    A { i: usize, j: usize, m: Mode },
    AStar { i: usize, j: usize, m: Mode },
    B { i: usize, m: Mode },
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum CAClass {
    Creation,
    Annihilation,
}

impl OscillatorLabel {
    pub fn mode(&self) -> Mode {
        match *self {
            OscillatorLabel::A { m, .. } | OscillatorLabel::AStar { m, .. } | OscillatorLabel::B { m, .. } => m,
        }
    }

    pub fn field(&self) -> Field {
        match *self {
            OscillatorLabel::A { i, j, .. } => Field::A { i, j },
            OscillatorLabel::AStar { i, j, .. } => Field::AStar { i, j },
            OscillatorLabel::B { i, .. } => Field::B { i },
        }
    }

    /// Creation/annihilation class for split point `r`; `None` for the
    /// scalar `b_{i,0}`.
    pub fn classify(&self, r: usize) -> Option<CAClass> {
        let ann = match *self {
            OscillatorLabel::A { j, m, .. } => j <= r && m >= 0,
            OscillatorLabel::AStar { j, m, .. } => (j <= r && m > 0) || j > r,
            OscillatorLabel::B { m, .. } => {
                if m == 0 {
                    return None;
                }
                m > 0
            }
        };
        Some(if ann {
            CAClass::Annihilation
        } else {
            CAClass::Creation
        })
    }

    pub fn check(&self, params: &Params) -> Result<()> {
        let n = params.n();
        let ok = match *self {
            OscillatorLabel::A { i, j, .. } | OscillatorLabel::AStar { i, j, .. } => 1 <= i && i <= j && j <= n,
            OscillatorLabel::B { i, .. } => 1 <= i && i <= n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfBounds(format!("{self} with n = {n}")))
        }
    }
}

impl fmt::Display for OscillatorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OscillatorLabel::A { i, j, m } => write!(f, "A({i},{j},{m})"),
            OscillatorLabel::AStar { i, j, m } => write!(f, "AStar({i},{j},{m})"),
            OscillatorLabel::B { i, m } => write!(f, "B({i},{m})"),
        }
    }
}

/// A mode-free oscillator field `a_{ij}(z)`, `a*_{ij}(z)` or `b_i(z)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Field {
    A { i: usize, j: usize },
    AStar { i: usize, j: usize },
    B { i: usize },
}

impl Field {
    pub fn at(self, m: Mode) -> OscillatorLabel {
        match self {
            Field::A { i, j } => OscillatorLabel::A { i, j, m },
            Field::AStar { i, j } => OscillatorLabel::AStar { i, j, m },
            Field::B { i } => OscillatorLabel::B { i, m },
        }
    }

    /// `a` and `b` carry `z^{-m-1}`, `a*` carries `z^{-m}`.
    pub fn shifts_exponent(&self) -> bool {
        !matches!(self, Field::AStar { .. })
    }

    /// Upper bound on the modes at which this field acts by multiplication
    /// (the scalar `b_{i,0}` included); `None` if every mode multiplies.
    fn mult_upper_bound(&self, r: usize) -> Option<Mode> {
        match *self {
            Field::A { j, .. } if j <= r => Some(-1),
            Field::A { .. } => None,
            Field::AStar { .. } | Field::B { .. } => Some(0),
        }
    }

    /// Whether some mode of this field acts by multiplication.
    fn multiplies(&self, r: usize) -> bool {
        !matches!(*self, Field::AStar { j, .. } if j > r)
    }

    fn unbounded_creation(&self, r: usize) -> bool {
        matches!(*self, Field::A { j, .. } if j > r)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Field::A { i, j } => write!(f, "a[{i},{j}]"),
            Field::AStar { i, j } => write!(f, "a*[{i},{j}]"),
            Field::B { i } => write!(f, "b[{i}]"),
        }
    }
}

/// The symmetric matrix `𝔅`, 1-based access through [`BMatrix::get`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BMatrix {
    n: usize,
    entries: Vec<Vec<Rational>>,
}

impl BMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }
}

impl fmt::Display for BMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, row) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join(","))?;
        }
        write!(f, "]")
    }
}

fn b_entrywise(params: &Params) -> Vec<Vec<Rational>> {
    let (n, r) = (params.n(), params.r());
    let g = params.gamma2();
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let mut inner = g.clone();
                    if i > r && j > r {
                        inner -= &Rational::from_int(r as i64 + 1);
                    }
                    if i == r + 1 && j == r + 1 {
                        inner += &Rational::new(r as i64, 2);
                    }
                    &Rational::from_int(cartan_entry(i, j)) * &inner
                })
                .collect()
        })
        .collect()
}

fn b_matrix_form(params: &Params) -> Vec<Vec<Rational>> {
    let (n, r) = (params.n(), params.r());
    let g = params.gamma2();
    let shift = Rational::from_int(r as i64 + 1);
    let mut out = vec![vec![Rational::ZERO; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            let a = Rational::from_int(cartan_entry(i, j));
            let mut v = g * &a;
            if i > r && j > r {
                v -= &(&shift * &a);
            }
            out[i - 1][j - 1] = v;
        }
    }
    if r < n {
        out[r][r] += &Rational::from_int(r as i64);
    }
    out
}

/// Builds `𝔅` entrywise and in block-matrix form; the two must agree.
pub fn build_b_matrix(params: &Params) -> BMatrix {
    let entries = b_entrywise(params);
    let other = b_matrix_form(params);
    assert_eq!(entries, other, "entrywise and matrix forms of the B matrix disagree");
    BMatrix {
        n: params.n(),
        entries,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetB {
    pub closed: Rational,
    pub eliminated: Rational,
}

/// Closed form `(n+1)·(γ²)^r·(γ²−r−1)^{n−r}` next to the eliminated
/// determinant of [`build_b_matrix`].
pub fn det_b(params: &Params) -> DetB {
    let (n, r) = (params.n(), params.r());
    let g = params.gamma2();
    let closed = &(&Rational::from_int(n as i64 + 1) * &g.pow(r as u32)) * &params.level().pow((n - r) as u32);
    let eliminated = bareiss_determinant(build_b_matrix(params).rows());
    DetB { closed, eliminated }
}

/// A normal-ordered product of fields with a scalar prefactor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalWord {
    pub factors: SmallVec<[Field; 3]>,
    pub scalar: Rational,
}

impl NormalWord {
    pub fn new<I: IntoIterator<Item = Field>>(factors: I) -> Self {
        NormalWord {
            factors: factors.into_iter().collect(),
            scalar: Rational::ONE,
        }
    }

    pub fn scaled(mut self, c: Rational) -> Self {
        self.scalar = &self.scalar * &c;
        self
    }

    /// Number of `a`/`b` factors (each contributes an extra `z^{-1}`).
    pub fn shift_count(&self) -> i64 {
        self.factors.iter().filter(|f| f.shifts_exponent()).count() as i64
    }

    /// Sum of factor modes that contributes to the coefficient of `z^{-M-1}`.
    pub fn mode_sum(&self, target_mode: Mode) -> i64 {
        target_mode as i64 + 1 - self.shift_count()
    }

    /// Rejects words whose modewise sums would not be locally finite.
    pub fn check_supported(&self, r: usize) -> Result<()> {
        let unbounded = self.factors.iter().filter(|f| f.unbounded_creation(r)).count();
        if unbounded == 0 {
            return Ok(());
        }
        let others_pure = self
            .factors
            .iter()
            .filter(|f| !f.unbounded_creation(r))
            .all(|f| !f.multiplies(r));
        if unbounded == 1 && others_pure && self.factors.len() > 1 {
            Ok(())
        } else if unbounded == 1 && self.factors.len() == 1 {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "word {self} has an unbounded mode sum for r = {r}"
            )))
        }
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.scalar.is_one() {
            write!(f, "{}*", self.scalar)?;
        }
        write!(f, ":")?;
        for x in &self.factors {
            write!(f, "{x}")?;
        }
        write!(f, ":")
    }
}

/// Receiver for the terms produced by word evaluation.
pub trait TermSink {
    fn push_term(&mut self, m: Monomial, c: Rational);
}

impl TermSink for FockPoly {
    fn push_term(&mut self, m: Monomial, c: Rational) {
        self.add_term(m, c);
    }
}

impl TermSink for Vec<(Monomial, Rational)> {
    fn push_term(&mut self, m: Monomial, c: Rational) {
        self.push((m, c));
    }
}

/// Result of one elementary operator on a monomial with coefficient 1.
type Terms = SmallVec<[(Monomial, Rational); 2]>;

/// The Fock representation: parameters together with the matrix `𝔅`.
#[derive(Clone, Debug)]
pub struct FockContext {
    params: Params,
    b: BMatrix,
}

impl FockContext {
    pub fn new(params: &Params) -> Self {
        FockContext {
            params: params.clone(),
            b: build_b_matrix(params),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn b_matrix(&self) -> &BMatrix {
        &self.b
    }

    /// Image of a single monomial under one elementary operator.
    pub fn apply_label_mono(&self, op: OscillatorLabel, mu: &Monomial) -> Terms {
        let r = self.params.r();
        let mut out = Terms::new();
        match op {
            OscillatorLabel::A { i, j, m } => {
                let v = VarId::x(i, j, m);
                if j <= r && m >= 0 {
                    if let Some((e, d)) = mu.derivative(v) {
                        out.push((d, Rational::from_int(e as i64)));
                    }
                } else {
                    out.push((mu.mul_var(v), Rational::ONE));
                }
            }
            OscillatorLabel::AStar { i, j, m } => {
                let v = VarId::x(i, j, -m);
                if j <= r && m <= 0 {
                    out.push((mu.mul_var(v), Rational::ONE));
                } else if let Some((e, d)) = mu.derivative(v) {
                    out.push((d, Rational::from_int(-(e as i64))));
                }
            }
            OscillatorLabel::B { i, m } => {
                if m == 0 {
                    let l = self.params.lambda_i(i);
                    if !l.is_zero() {
                        out.push((mu.clone(), l.clone()));
                    }
                } else if m < 0 {
                    out.push((mu.mul_var(VarId::y(i, -m)), Rational::ONE));
                } else {
                    for l in 1..=self.params.n() {
                        let bil = self.b.get(i, l);
                        if bil.is_zero() {
                            continue;
                        }
                        if let Some((e, d)) = mu.derivative(VarId::y(l, m)) {
                            let c = &Rational::from_int(m as i64 * e as i64) * bil;
                            out.push((d, c));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn apply_label(&self, op: OscillatorLabel, v: &FockPoly) -> Result<FockPoly> {
        op.check(&self.params)?;
        v.check(&self.params)?;
        let mut out = FockPoly::zero();
        for (mu, c) in v.terms() {
            for (m, k) in self.apply_label_mono(op, mu) {
                out.add_term(m, &k * c);
            }
        }
        Ok(out)
    }

    /// `:w:` at mode `target_mode` applied to `v`, summing only over the
    /// mode splittings that can contribute.
    pub fn apply_word(&self, w: &NormalWord, target_mode: Mode, v: &FockPoly) -> Result<FockPoly> {
        self.check_word(w)?;
        v.check(&self.params)?;
        let mut out = FockPoly::zero();
        for (mu, c) in v.terms() {
            self.word_on_monomial(w, w.mode_sum(target_mode), mu, &(c * &w.scalar), false, &mut out);
        }
        Ok(out)
    }

    fn check_word(&self, w: &NormalWord) -> Result<()> {
        for f in &w.factors {
            f.at(0).check(&self.params)?;
        }
        w.check_supported(self.params.r())
    }

    /// Adds `coeff · :w:_{(mode sum S)} μ` to `out`. Assumes `w` is supported.
    /// With `exact`, keeps only the terms in which every variable of `μ` is
    /// differentiated away.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn word_on_monomial<S: TermSink>(
        &self,
        w: &NormalWord,
        sum: i64,
        mu: &Monomial,
        coeff: &Rational,
        exact: bool,
        out: &mut S,
    ) {
        if exact && mu.degree() as usize > w.factors.len() {
            return;
        }
        let mut deferred: SmallVec<[Field; 3]> = SmallVec::new();
        self.split_derivatives(&w.factors, 0, mu.clone(), coeff.clone(), 0, &mut deferred, sum, exact, out);
    }

    /// Contribution of field `f` acting by differentiation on `v`, as the
    /// mode it must carry and the scalar it produces per unit exponent.
    pub(crate) fn derivative_match(&self, f: Field, v: VarId) -> Option<(i64, Rational)> {
        let r = self.params.r();
        match (f, v) {
            (Field::A { i, j }, VarId::X { i: vi, j: vj, m }) if i == vi as usize && j == vj as usize => {
                (j <= r && m >= 0).then(|| (m as i64, Rational::ONE))
            }
            (Field::AStar { i, j }, VarId::X { i: vi, j: vj, m }) if i == vi as usize && j == vj as usize => {
                (j > r || m < 0).then(|| (-(m as i64), -Rational::ONE))
            }
            (Field::B { i }, VarId::Y { i: l, m }) => {
                let c = self.b.get(i, l as usize);
                (!c.is_zero()).then(|| (m as i64, &Rational::from_int(m as i64) * c))
            }
            _ => None,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn split_derivatives<S: TermSink>(
        &self,
        fields: &[Field],
        k: usize,
        cur: Monomial,
        coeff: Rational,
        fixed: i64,
        deferred: &mut SmallVec<[Field; 3]>,
        sum: i64,
        exact: bool,
        out: &mut S,
    ) {
        if exact && cur.degree() as usize > fields.len() - k {
            return;
        }
        if k == fields.len() {
            self.distribute_multiplications(deferred, sum - fixed, cur, coeff, out);
            return;
        }
        let f = fields[k];
        for &(v, _) in cur.factors() {
            if let Some((mode, c)) = self.derivative_match(f, v) {
                let (e, d) = cur.derivative(v).expect("variable present");
                let c = &(&c * &Rational::from_int(e as i64)) * &coeff;
                self.split_derivatives(fields, k + 1, d, c, fixed + mode, deferred, sum, exact, out);
            }
        }
        if f.multiplies(self.params.r()) {
            deferred.push(f);
            self.split_derivatives(fields, k + 1, cur, coeff, fixed, deferred, sum, exact, out);
            deferred.pop();
        }
    }

    fn distribute_multiplications<S: TermSink>(&self, deferred: &[Field], rem: i64, cur: Monomial, coeff: Rational, out: &mut S) {
        let r = self.params.r();
        if deferred.is_empty() {
            if rem == 0 {
                out.push_term(cur, coeff);
            }
            return;
        }
        if deferred.iter().any(|f| f.unbounded_creation(r)) {
            assert_eq!(deferred.len(), 1, "unbounded creation factor alongside another multiplication");
            self.multiply_out(deferred, &[rem], cur, coeff, out);
            return;
        }
        let ubs: SmallVec<[i64; 3]> = deferred
            .iter()
            .map(|f| f.mult_upper_bound(r).expect("bounded") as i64)
            .collect();
        let mut modes: SmallVec<[i64; 3]> = SmallVec::new();
        self.enumerate_bounded(deferred, &ubs, rem, &mut modes, &cur, &coeff, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_bounded<S: TermSink>(
        &self,
        deferred: &[Field],
        ubs: &[i64],
        rem: i64,
        modes: &mut SmallVec<[i64; 3]>,
        cur: &Monomial,
        coeff: &Rational,
        out: &mut S,
    ) {
        let k = modes.len();
        if k + 1 == deferred.len() {
            if rem <= ubs[k] {
                modes.push(rem);
                self.multiply_out(deferred, modes, cur.clone(), coeff.clone(), out);
                modes.pop();
            }
            return;
        }
        let later: i64 = ubs[k + 1..].iter().sum();
        let lo = rem - later;
        for m in lo..=ubs[k] {
            modes.push(m);
            self.enumerate_bounded(deferred, ubs, rem - m, modes, cur, coeff, out);
            modes.pop();
        }
    }

    fn multiply_out<S: TermSink>(&self, deferred: &[Field], modes: &[i64], mut cur: Monomial, mut coeff: Rational, out: &mut S) {
        for (&f, &m) in deferred.iter().zip(modes) {
            let m = m as Mode;
            match f {
                Field::A { i, j } => cur.mul_var_assign(VarId::x(i, j, m), 1),
                Field::AStar { i, j } => cur.mul_var_assign(VarId::x(i, j, -m), 1),
                Field::B { i } => {
                    if m == 0 {
                        coeff = &coeff * self.params.lambda_i(i);
                        if coeff.is_zero() {
                            return;
                        }
                    } else {
                        cur.mul_var_assign(VarId::y(i, -m), 1);
                    }
                }
            }
        }
        out.push_term(cur, coeff);
    }

    /// Reference evaluator: sums `:w:` over every mode tuple inside
    /// `[-bound, bound]`, applying annihilation factors before creation ones.
    pub fn apply_word_box(&self, w: &NormalWord, target_mode: Mode, v: &FockPoly, bound: i64) -> Result<FockPoly> {
        self.check_word(w)?;
        v.check(&self.params)?;
        let sum = w.mode_sum(target_mode);
        let k = w.factors.len();
        let mut out = FockPoly::zero();
        if k == 0 {
            if sum == 0 {
                out.add_scaled(v, &w.scalar);
            }
            return Ok(out);
        }
        let mut modes = vec![-bound; k - 1];
        loop {
            let last = sum - modes.iter().sum::<i64>();
            if last.abs() <= bound {
                let mut labels: Vec<OscillatorLabel> = modes
                    .iter()
                    .chain(std::iter::once(&last))
                    .zip(&w.factors)
                    .map(|(&m, f)| f.at(m as Mode))
                    .collect();
                let r = self.params.r();
                labels.sort_by_key(|l| l.classify(r) == Some(CAClass::Annihilation));
                let mut acc = v.clone();
                for l in labels.iter().rev() {
                    acc = self.apply_label(*l, &acc)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                out.add_scaled(&acc, &w.scalar);
            }
            let mut t = 0;
            loop {
                if t == modes.len() {
                    return Ok(out);
                }
                if modes[t] < bound {
                    modes[t] += 1;
                    break;
                }
                modes[t] = -bound;
                t += 1;
            }
        }
    }

    /// A box radius large enough for [`FockContext::apply_word_box`] to
    /// capture every contributing splitting on `v`.
    pub fn sufficient_box(&self, w: &NormalWord, target_mode: Mode, v: &FockPoly) -> i64 {
        let d = v.max_abs_mode() as i64;
        w.mode_sum(target_mode).abs() + w.factors.len() as i64 * d + 1
    }
}

pub fn apply_oscillator(op: OscillatorLabel, v: &FockPoly, params: &Params) -> Result<FockPoly> {
    FockContext::new(params).apply_label(op, v)
}

pub fn apply_normal_word(w: &NormalWord, target_mode: Mode, v: &FockPoly, params: &Params) -> Result<FockPoly> {
    FockContext::new(params).apply_word(w, target_mode, v)
}

/// Every elementary label with `|mode| ≤ window`.
pub fn labels_in_window(params: &Params, window: Mode) -> Vec<OscillatorLabel> {
    let n = params.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            for m in -window..=window {
                out.push(OscillatorLabel::A { i, j, m });
            }
        }
    }
    for i in 1..=n {
        for j in i..=n {
            for m in -window..=window {
                out.push(OscillatorLabel::AStar { i, j, m });
            }
        }
    }
    for i in 1..=n {
        for m in -window..=window {
            out.push(OscillatorLabel::B { i, m });
        }
    }
    out
}

/// The scalar `[x, y]` predicted by the canonical commutation relations.
pub fn ccr_expected(x: OscillatorLabel, y: OscillatorLabel, b: &BMatrix) -> Rational {
    use OscillatorLabel::*;
    match (x, y) {
        (A { i, j, m }, AStar { i: k, j: l, m: p }) if i == k && j == l && m + p == 0 => Rational::ONE,
        (AStar { i, j, m }, A { i: k, j: l, m: p }) if i == k && j == l && m + p == 0 => -Rational::ONE,
        (B { i, m }, B { i: j, m: p }) if m + p == 0 => &Rational::from_int(m as i64) * b.get(i, j),
        _ => Rational::ZERO,
    }
}

fn merge_terms(mut terms: Vec<(Monomial, Rational)>) -> Vec<(Monomial, Rational)> {
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        match out.last_mut() {
            Some((lm, lc)) if *lm == m => *lc += &c,
            _ => out.push((m, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

impl FockContext {
    /// The action of `op` on a monomial as a list of `(variable, exponent
    /// change, scalar)`; a derivative's scalar is further multiplied by the
    /// exponent it lowers. A `None` variable means multiplication by the scalar.
    fn effects(&self, op: OscillatorLabel) -> SmallVec<[(Option<VarId>, i8, Rational); 3]> {
        let r = self.params.r();
        let mut out = SmallVec::new();
        match op {
            OscillatorLabel::A { i, j, m } => {
                let v = VarId::x(i, j, m);
                out.push((Some(v), if j <= r && m >= 0 { -1 } else { 1 }, Rational::ONE));
            }
            OscillatorLabel::AStar { i, j, m } => {
                let v = VarId::x(i, j, -m);
                if j <= r && m <= 0 {
                    out.push((Some(v), 1, Rational::ONE));
                } else {
                    out.push((Some(v), -1, -Rational::ONE));
                }
            }
            OscillatorLabel::B { i, m } => {
                if m == 0 {
                    out.push((None, 0, self.params.lambda_i(i).clone()));
                } else if m < 0 {
                    out.push((Some(VarId::y(i, -m)), 1, Rational::ONE));
                } else {
                    for l in 1..=self.params.n() {
                        let bil = self.b.get(i, l);
                        if !bil.is_zero() {
                            out.push((Some(VarId::y(l, m)), -1, &Rational::from_int(m as i64) * bil));
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether `[x, y] μ = c μ`. Terms are grouped by the net exponent
    /// change they make to `μ`; the unchanged group must sum to `c` and
    /// every other group to zero.
    fn commutator_is_scalar_on(&self, x: OscillatorLabel, y: OscillatorLabel, mu: &Monomial, c: &Rational) -> bool {
        type Net = SmallVec<[(VarId, i8); 2]>;
        let mut acc: SmallVec<[(Net, Rational); 8]> = SmallVec::new();
        let exp = |v: Option<VarId>| v.map_or(0, |v| mu.exponent(v) as i64);
        let coef = |d: i8, s: &Rational, e: i64| -> Rational {
            if d < 0 {
                s * &Rational::from_int(e)
            } else {
                s.clone()
            }
        };
        let (ex, ey) = (self.effects(x), self.effects(y));
        for (first, second, sign) in [(&ey, &ex, 1), (&ex, &ey, -1)] {
            for (v1, d1, s1) in first.iter() {
                let c1 = coef(*d1, s1, exp(*v1));
                if c1.is_zero() {
                    continue;
                }
                for (v2, d2, s2) in second.iter() {
                    let shift = if v2.is_some() && v1 == v2 { *d1 as i64 } else { 0 };
                    let c2 = coef(*d2, s2, exp(*v2) + shift);
                    if c2.is_zero() {
                        continue;
                    }
                    let mut net = Net::new();
                    for (v, d) in [(v1, d1), (v2, d2)] {
                        let Some(v) = v else { continue };
                        match net.iter_mut().find(|(w, _)| w == v) {
                            Some((_, e)) => *e += d,
                            None => net.push((*v, *d)),
                        }
                    }
                    net.retain(|(_, d)| *d != 0);
                    net.sort();
                    let val = &(&c1 * &c2) * &Rational::from_int(sign);
                    match acc.iter_mut().find(|(k, _)| *k == net) {
                        Some((_, t)) => *t += &val,
                        None => acc.push((net, val)),
                    }
                }
            }
        }
        let diagonal = acc
            .iter()
            .find(|(k, _)| k.is_empty())
            .map_or(Rational::ZERO, |(_, t)| t.clone());
        diagonal == *c && acc.iter().all(|(k, t)| k.is_empty() || t.is_zero())
    }

    /// `[x, y]` applied to `v`.
    pub fn commutator_on(&self, x: OscillatorLabel, y: OscillatorLabel, v: &FockPoly) -> FockPoly {
        let mut terms = Vec::new();
        for (mu, c) in v.terms() {
            for (m1, c1) in self.apply_label_mono(y, mu) {
                for (m2, c2) in self.apply_label_mono(x, &m1) {
                    terms.push((m2, &(&c1 * &c2) * c));
                }
            }
            for (m1, c1) in self.apply_label_mono(x, mu) {
                for (m2, c2) in self.apply_label_mono(y, &m1) {
                    terms.push((m2, -&(&(&c1 * &c2) * c)));
                }
            }
        }
        merge_terms(terms).into_iter().collect()
    }
}

/// Checks the canonical commutation relations for every pair of labels with
/// `|mode| ≤ mode_window` on every vector of `test_set`.
pub fn ccr_check(params: &Params, mode_window: Mode, test_set: &[FockPoly]) -> Report {
    let ctx = FockContext::new(params);
    let labels = labels_in_window(params, mode_window);
    let mut report = Report::new("ccr", Some(params));
    for (a, &x) in labels.iter().enumerate() {
        for &y in &labels[a..] {
            let expected = ccr_expected(x, y, ctx.b_matrix());
            let witness = test_set.iter().find_map(|v| {
                if let Some((mu, c)) = v.first_term().filter(|_| v.len() == 1) {
                    if ctx.commutator_is_scalar_on(x, y, mu, &(c * &expected)) {
                        return None;
                    }
                }
                let got = ctx.commutator_on(x, y, v);
                let want = v.scale(&expected);
                (got != want).then(|| format!("on {v}: got {got}, expected {want}"))
            });
            report.record(format!("[{x},{y}]"), witness);
        }
    }
    report
}
