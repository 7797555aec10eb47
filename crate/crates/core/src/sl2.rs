//! The sl(2) laboratory: the imaginary Verma quotient `V(0)` acted on by
//! commuting generators through, Wilson's alternating vectors, and four
//! explicit free-field realizations of affine sl(2).

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{FockPoly, Mode, Monomial, VarId};
use crate::error::{Error, Result};
use crate::linalg::row_reduce;
use crate::rational::Rational;
use crate::report::Report;
use crate::wakimoto::{CurrentLabel, Engine};

/// A generator of affine sl(2).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sl2Gen {
    E(Mode),
    H(Mode),
    F(Mode),
    C,
}

impl fmt::Display for Sl2Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sl2Gen::E(m) => write!(f, "e({m})"),
            Sl2Gen::H(m) => write!(f, "h({m})"),
            Sl2Gen::F(m) => write!(f, "f({m})"),
            Sl2Gen::C => write!(f, "c"),
        }
    }
}

/// `f_{s_1}⋯f_{s_k}|0⟩` with `s_1 ≤ … ≤ s_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FMonomial(Vec<Mode>);

impl FMonomial {
    pub fn new(mut modes: Vec<Mode>) -> Self {
        modes.sort_unstable();
        FMonomial(modes)
    }

    pub fn vacuum() -> Self {
        FMonomial(Vec::new())
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().map(|&m| m as i64).sum()
    }

    fn with(&self, m: Mode) -> Self {
        let mut v = self.0.clone();
        let k = v.partition_point(|&x| x <= m);
        v.insert(k, m);
        FMonomial(v)
    }
}

impl fmt::Display for FMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|m| format!("f[{m}]")).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A vector of `V(0)`: finitely many f-monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VPoly(BTreeMap<FMonomial, Rational>);

impl VPoly {
    pub fn zero() -> Self {
        VPoly(BTreeMap::new())
    }

    pub fn monomial(m: FMonomial) -> Self {
        VPoly::term(Rational::ONE, m)
    }

    pub fn term(c: Rational, m: FMonomial) -> Self {
        let mut v = VPoly::zero();
        v.add_term(m, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FMonomial, &Rational)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &FMonomial) -> Rational {
        self.0.get(m).cloned().unwrap_or(Rational::ZERO)
    }

    pub fn add_term(&mut self, m: FMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(m.clone()).or_insert(Rational::ZERO);
        *slot += &c;
        if slot.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add_scaled(&mut self, other: &VPoly, c: &Rational) {
        for (m, k) in other.terms() {
            self.add_term(m.clone(), k * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> VPoly {
        let mut out = VPoly::zero();
        out.add_scaled(self, c);
        out
    }
}

impl fmt::Display for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.0.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Parses `f[s1]*f[s2]*…` sums with optional rational coefficients, for
/// example `f[0]*f[3] - 2/3*f[1]*f[2]`. The literal `1` is the vacuum.
pub fn parse_vpoly(text: &str) -> Result<VPoly> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |msg: String| Error::Parse { pos: 0, msg };
    if s.is_empty() {
        return Err(err("empty input".into()));
    }
    let mut out = VPoly::zero();
    let mut terms = Vec::new();
    let mut start = 0;
    let mut depth = 0;
    for (k, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            '+' | '-' if depth == 0 && k > start => {
                terms.push(&s[start..k]);
                start = k;
            }
            _ => {}
        }
    }
    terms.push(&s[start..]);
    for t in terms {
        let (sign, body) = match t.as_bytes().first() {
            Some(b'-') => (-1, &t[1..]),
            Some(b'+') => (1, &t[1..]),
            _ => (1, t),
        };
        let mut c = Rational::from_int(sign);
        let mut modes = Vec::new();
        for factor in body.split('*') {
            if let Some(inner) = factor.strip_prefix("f[").and_then(|x| x.strip_suffix(']')) {
                modes.push(inner.parse::<Mode>().map_err(|e| err(format!("bad mode in {factor}: {e}")))?);
            } else {
                let q: Rational = factor.parse().map_err(|_| err(format!("bad factor {factor:?}")))?;
                c = &c * &q;
            }
        }
        out.add_term(FMonomial::new(modes), c);
    }
    Ok(out)
}

/// `h_j` on `∏_{s∈S} f_s|0⟩`.
fn v0_h(j: Mode, m: &[Mode]) -> VPoly {
    let mut out = VPoly::zero();
    for a in 0..m.len() {
        let mut v = m.to_vec();
        v[a] += j;
        out.add_term(FMonomial::new(v), Rational::from_int(-2));
    }
    out
}

/// The action of a generator on `V(0)`. The central element acts by zero.
pub fn v0_act(gen: Sl2Gen, v: &VPoly) -> VPoly {
    let mut out = VPoly::zero();
    for (mono, c) in v.terms() {
        let s = mono.modes();
        match gen {
            Sl2Gen::F(j) => out.add_term(mono.with(j), c.clone()),
            Sl2Gen::H(j) => out.add_scaled(&v0_h(j, s), c),
            Sl2Gen::E(j) => {
                for a in 0..s.len() {
                    let tail = v0_h(j + s[a], &s[a + 1..]);
                    for (t, k) in tail.terms() {
                        let mut modes = s[..a].to_vec();
                        modes.extend_from_slice(t.modes());
                        out.add_term(FMonomial::new(modes), k * c);
                    }
                }
            }
            Sl2Gen::C => {}
        }
    }
    out
}

fn permutations(r: usize) -> Vec<(Vec<usize>, i64)> {
    if r == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, sign) in permutations(r - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, r - 1);
            let moved = (p.len() - pos) as i64;
            out.push((q, if moved % 2 == 0 { sign } else { -sign }));
        }
    }
    out
}

/// `Σ_σ sgn(σ) f_{s_0+σ(0)}⋯f_{s_{r−1}+σ(r−1)}|0⟩`.
pub fn wilson_vector(r: usize, s: &[Mode]) -> Result<VPoly> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    if s.len() != r {
        return Err(Error::Precondition(format!("expected {r} shifts, got {}", s.len())));
    }
    let mut out = VPoly::zero();
    for (perm, sign) in permutations(r) {
        let modes = s.iter().zip(&perm).map(|(&x, &p)| x + p as Mode).collect();
        out.add_term(FMonomial::new(modes), Rational::from_int(sign));
    }
    Ok(out)
}

/// Outcome of [`singularity_check`]: annihilation by the `e_i` and by the
/// `h_j` reported separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub e_annihilated: bool,
    pub h_annihilated: bool,
    pub e_witness: Option<String>,
    pub h_witness: Option<String>,
}

/// Checks `e_i v = 0` for `|i| ≤ mode_window` and `h_j v = 0` for
/// `1 ≤ j ≤ mode_window`.
pub fn singularity_check(v: &VPoly, mode_window: Mode) -> Result<Singularity> {
    if v.is_zero() {
        return Err(Error::Precondition("singularity is checked on nonzero vectors".into()));
    }
    let e_witness = (-mode_window..=mode_window).find_map(|i| {
        let w = v0_act(Sl2Gen::E(i), v);
        (!w.is_zero()).then(|| format!("e({i}) v = {w}"))
    });
    let h_witness = (1..=mode_window).find_map(|j| {
        let w = v0_act(Sl2Gen::H(j), v);
        (!w.is_zero()).then(|| format!("h({j}) v = {w}"))
    });
    Ok(Singularity {
        e_annihilated: e_witness.is_none(),
        h_annihilated: h_witness.is_none(),
        e_witness,
        h_witness,
    })
}

/// Multisets of `count` modes in `[−window, window]` with the given total.
pub fn graded_basis(count: usize, total: i64, window: Mode) -> Vec<FMonomial> {
    fn go(count: usize, total: i64, lo: Mode, hi: Mode, acc: &mut Vec<Mode>, out: &mut Vec<FMonomial>) {
        if count == 0 {
            if total == 0 {
                out.push(FMonomial(acc.clone()));
            }
            return;
        }
        for m in lo..=hi {
            let rest = total - m as i64;
            let k = count as i64 - 1;
            if rest < m as i64 * k || rest > hi as i64 * k {
                continue;
            }
            acc.push(m);
            go(count - 1, rest, m, hi, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(count, total, -window, window, &mut Vec::new(), &mut out);
    out
}

fn coords(v: &VPoly, index: &BTreeMap<FMonomial, usize>) -> Vec<Rational> {
    let mut row = vec![Rational::ZERO; index.len()];
    for (m, c) in v.terms() {
        row[index[m]] = c.clone();
    }
    row
}

/// Basis of the `e`-singular vectors inside
/// `span{f_{t_1}⋯f_{t_count}|0⟩ : Σ t = total, |t_i| ≤ window}`.
///
/// The domain is finite and every image is computed exactly, so no
/// constraint is truncated. Only `|i| ≤ 3·window + 1` is imposed: beyond
/// that range every `e_i` sends distinct basis terms to distinct targets
/// exactly as some `e_i` inside the range does.
pub fn singular_space_kernel(count: usize, total: i64, window: Mode) -> Vec<VPoly> {
    singular_space_kernel_with_reach(count, total, window, 3 * window + 1)
}

/// [`singular_space_kernel`] imposing `e_i v = 0` for `|i| ≤ reach`.
pub fn singular_space_kernel_with_reach(count: usize, total: i64, window: Mode, reach: Mode) -> Vec<VPoly> {
    let basis = graded_basis(count, total, window);
    let index: BTreeMap<FMonomial, usize> = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let mut constraints: BTreeMap<(Mode, FMonomial), Vec<Rational>> = BTreeMap::new();
    for (col, m) in basis.iter().enumerate() {
        for i in -reach..=reach {
            for (t, c) in v0_act(Sl2Gen::E(i), &VPoly::monomial(m.clone())).terms() {
                let row = constraints
                    .entry((i, t.clone()))
                    .or_insert_with(|| vec![Rational::ZERO; basis.len()]);
                row[col] += c;
            }
        }
    }
    let ech = row_reduce(constraints.into_values().collect(), basis.len());
    ech.nullspace()
        .into_iter()
        .map(|v| {
            let mut out = VPoly::zero();
            for (m, c) in basis.iter().zip(v) {
                out.add_term(m.clone(), c);
            }
            debug_assert!(out.terms().all(|(m, _)| index.contains_key(m)));
            out
        })
        .collect()
}

/// Nonzero Wilson vectors of the given size whose support lies in the graded
/// piece `(count, total)` within the window.
pub fn wilson_vectors_in_window(count: usize, total: i64, window: Mode) -> Vec<VPoly> {
    let mut out = Vec::new();
    let span = window - count as Mode + 1;
    let mut s = vec![-window; count];
    if span < -window {
        return out;
    }
    loop {
        let v = wilson_vector(count, &s).expect("positive size");
        let fits = v
            .terms()
            .all(|(m, _)| m.total() == total && m.modes().iter().all(|x| x.abs() <= window));
        if !v.is_zero() && fits {
            out.push(v);
        }
        let mut k = 0;
        loop {
            if k == count {
                return out;
            }
            if s[k] < span {
                s[k] += 1;
                break;
            }
            s[k] = -window;
            k += 1;
        }
    }
}

/// Whether each basis vector of the graded singular space lies in the span
/// of the Wilson vectors of the same piece.
pub fn kernel_in_wilson_span(count: usize, total: i64, window: Mode) -> std::result::Result<(), String> {
    let basis = graded_basis(count, total, window);
    let index: BTreeMap<FMonomial, usize> = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
    let rows: Vec<Vec<Rational>> = wilson_vectors_in_window(count, total, window)
        .iter()
        .map(|v| coords(v, &index))
        .collect();
    let ech = row_reduce(rows, basis.len());
    for k in singular_space_kernel(count, total, window) {
        if !ech.contains(&coords(&k, &index)) {
            return Err(format!("{k} is not in the span of the Wilson vectors"));
        }
    }
    Ok(())
}

/// Which of the four free-field realizations of affine sl(2) to use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sl2RealizationKind {
    FirstFreeField,
    /// With the scalar sequence `λ_m`, zero outside the map.
    JakobsenKac(BTreeMap<Mode, Rational>),
    BernardFelder { k: Rational, j: Rational },
    SecondFreeField { k: Rational },
}

impl Sl2RealizationKind {
    /// The scalar by which `c` acts.
    pub fn level(&self) -> Rational {
        match self {
            Sl2RealizationKind::FirstFreeField | Sl2RealizationKind::JakobsenKac(_) => Rational::ZERO,
            Sl2RealizationKind::BernardFelder { k, .. } | Sl2RealizationKind::SecondFreeField { k } => k.clone(),
        }
    }

    /// Whether the Fock space has the `y_m` variables.
    pub fn has_y(&self) -> bool {
        matches!(
            self,
            Sl2RealizationKind::BernardFelder { .. } | Sl2RealizationKind::SecondFreeField { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            Sl2RealizationKind::FirstFreeField => "first",
            Sl2RealizationKind::JakobsenKac(_) => "jk",
            Sl2RealizationKind::BernardFelder { .. } => "bf",
            Sl2RealizationKind::SecondFreeField { .. } => "second",
        }
    }
}

/// The variable `x_m`.
pub fn x(m: Mode) -> VarId {
    VarId::x(1, 1, m)
}

/// The variable `y_m`, `m > 0`.
pub fn y(m: Mode) -> VarId {
    VarId::y(1, m)
}

fn check_alphabet(kind: &Sl2RealizationKind, v: &FockPoly) -> Result<()> {
    for mu in v.monomials() {
        for var in mu.vars() {
            let ok = match var {
                VarId::X { i, j, .. } => i == 1 && j == 1,
                VarId::Y { i, m } => i == 1 && m > 0 && kind.has_y(),
            };
            if !ok {
                return Err(Error::Unsupported(format!(
                    "{var} is not a variable of the {} realization",
                    kind.name()
                )));
            }
        }
    }
    Ok(())
}

fn x_vars(mu: &Monomial) -> impl Iterator<Item = Mode> + '_ {
    mu.vars().filter_map(|v| match v {
        VarId::X { m, .. } => Some(m),
        VarId::Y { .. } => None,
    })
}

fn y_vars(mu: &Monomial) -> impl Iterator<Item = Mode> + '_ {
    mu.vars().filter_map(|v| match v {
        VarId::Y { m, .. } => Some(m),
        VarId::X { .. } => None,
    })
}

fn d(mu: &Monomial, v: VarId) -> Option<(Rational, Monomial)> {
    mu.derivative(v).map(|(e, m)| (Rational::from_int(e as i64), m))
}

/// `−2 Σ_m x_{n+m} ∂/∂x_m`.
fn euler_shift(n: Mode, mu: &Monomial, c: &Rational, out: &mut FockPoly) {
    for m in x_vars(mu) {
        let (e, rest) = d(mu, x(m)).expect("present");
        out.add_term(rest.mul_var(x(n + m)), &(&e * c) * &Rational::from_int(-2));
    }
}

/// `−Σ_{m,k} x_{n+m+k} ∂²/∂x_m∂x_k`.
fn double_contraction(n: Mode, mu: &Monomial, c: &Rational, out: &mut FockPoly) {
    for m in x_vars(mu) {
        let (e1, r1) = d(mu, x(m)).expect("present");
        for k in x_vars(&r1) {
            let (e2, r2) = d(&r1, x(k)).expect("present");
            out.add_term(r2.mul_var(x(n + m + k)), -&(&(&e1 * &e2) * c));
        }
    }
}

fn first_kind(gen: Sl2Gen, mu: &Monomial, c: &Rational, out: &mut FockPoly) {
    match gen {
        Sl2Gen::F(n) => out.add_term(mu.mul_var(x(n)), c.clone()),
        Sl2Gen::H(n) => euler_shift(n, mu, c, out),
        Sl2Gen::E(n) => double_contraction(n, mu, c, out),
        Sl2Gen::C => {}
    }
}

fn jakobsen_kac(lambda: &BTreeMap<Mode, Rational>, gen: Sl2Gen, mu: &Monomial, c: &Rational, out: &mut FockPoly) {
    let lam = |m: Mode| lambda.get(&m).cloned().unwrap_or(Rational::ZERO);
    first_kind(gen, mu, c, out);
    match gen {
        Sl2Gen::H(n) => out.add_term(mu.clone(), -&(&lam(n) * c)),
        Sl2Gen::E(n) => {
            for m in x_vars(mu) {
                let (e, rest) = d(mu, x(m)).expect("present");
                out.add_term(rest, -&(&(&e * &lam(n + m)) * c));
            }
        }
        _ => {}
    }
}

fn bernard_felder(k: &Rational, j: &Rational, gen: Sl2Gen, mu: &Monomial, c: &Rational, out: &mut FockPoly) {
    first_kind(gen, mu, c, out);
    match gen {
        Sl2Gen::H(n) => {
            if n < 0 {
                out.add_term(mu.mul_var(y(-n)), c.clone());
            } else if n > 0 {
                if let Some((e, rest)) = d(mu, y(n)) {
                    out.add_term(rest, &(&e * c) * &(k * &Rational::from_int(2 * n as i64)));
                }
            } else {
                out.add_term(mu.clone(), j * c);
            }
        }
        Sl2Gen::E(n) => {
            for m in x_vars(mu) {
                let kk = -m - n;
                if kk > 0 {
                    let (e, rest) = d(mu, x(m)).expect("present");
                    out.add_term(rest.mul_var(y(kk)), &e * c);
                }
            }
            for m in y_vars(mu) {
                let (e1, r1) = d(mu, y(m)).expect("present");
                if let Some((e2, r2)) = d(&r1, x(m - n)) {
                    let w = &(k * &Rational::from_int(2 * m as i64)) * &(&e1 * &e2);
                    out.add_term(r2, &w * c);
                }
            }
            if let Some((e, rest)) = d(mu, x(-n)) {
                let w = &(k * &Rational::from_int(n as i64)) + j;
                out.add_term(rest, &(&w * &e) * c);
            }
        }
        _ => {}
    }
}

/// The free bosons of the second realization.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Boson {
    A,
    AStar,
    B,
}

/// How a boson mode acts: multiplication by a variable, or a derivative in
/// it times a scalar.
enum BosonAction {
    Mult(VarId),
    Deriv(VarId, Rational),
    Zero,
}

impl Boson {
    /// Largest mode acting by multiplication.
    fn mult_bound(self) -> Mode {
        match self {
            Boson::A | Boson::B => -1,
            Boson::AStar => 0,
        }
    }

    fn action(self, p: Mode, beta: &Rational) -> BosonAction {
        match self {
            Boson::A if p < 0 => BosonAction::Mult(x(p)),
            Boson::A => BosonAction::Deriv(x(p), Rational::ONE),
            Boson::AStar if p <= 0 => BosonAction::Mult(x(-p)),
            Boson::AStar => BosonAction::Deriv(x(-p), -Rational::ONE),
            Boson::B if p < 0 => BosonAction::Mult(y(-p)),
            Boson::B if p > 0 => BosonAction::Deriv(y(p), beta * &Rational::from_int(p as i64)),
            Boson::B => BosonAction::Zero,
        }
    }

    /// The mode at which this boson differentiates in `v`, if any.
    fn deriv_mode(self, v: VarId) -> Option<Mode> {
        match (self, v) {
            (Boson::A, VarId::X { m, .. }) if m >= 0 => Some(m),
            (Boson::AStar, VarId::X { m, .. }) if m < 0 => Some(-m),
            (Boson::B, VarId::Y { m, .. }) => Some(m),
            _ => None,
        }
    }
}

/// Compositions of `total ≥ 0` into `parts` non-negative integers.
fn compositions(parts: usize, total: i64) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(parts - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `c · :φ_1⋯φ_k:` at mode sum `total` applied to `μ`: derivatives act
/// first, then multiplications.
fn normal_ordered(
    factors: &[Boson],
    total: Mode,
    beta: &Rational,
    mu: &Monomial,
    c: &Rational,
    out: &mut FockPoly,
) {
    let k = factors.len();
    // Each factor either multiplies or differentiates one of the variables of μ.
    let vars: Vec<VarId> = mu.vars().collect();
    let mut choice: Vec<Option<VarId>> = vec![None; k];
    fn assign(
        idx: usize,
        factors: &[Boson],
        vars: &[VarId],
        choice: &mut Vec<Option<VarId>>,
        f: &mut dyn FnMut(&[Option<VarId>]),
    ) {
        if idx == factors.len() {
            f(choice);
            return;
        }
        choice[idx] = None;
        assign(idx + 1, factors, vars, choice, f);
        for &v in vars {
            if factors[idx].deriv_mode(v).is_some() {
                choice[idx] = Some(v);
                assign(idx + 1, factors, vars, choice, f);
            }
        }
        choice[idx] = None;
    }
    assign(0, factors, &vars, &mut choice, &mut |ch| {
        let mut modes: Vec<Option<Mode>> = vec![None; k];
        let mut fixed: i64 = 0;
        for (q, (b, v)) in factors.iter().zip(ch).enumerate() {
            if let Some(v) = v {
                let p = b.deriv_mode(*v).expect("chosen as a derivative");
                modes[q] = Some(p);
                fixed += p as i64;
            }
        }
        let free: Vec<usize> = (0..k).filter(|&q| modes[q].is_none()).collect();
        let bound: i64 = free.iter().map(|&q| factors[q].mult_bound() as i64).sum();
        let slack = bound - (total as i64 - fixed);
        if slack < 0 {
            return;
        }
        for comp in compositions(free.len(), slack) {
            let mut ms = modes.clone();
            for (&q, s) in free.iter().zip(&comp) {
                ms[q] = Some((factors[q].mult_bound() as i64 - s) as Mode);
            }
            let mut mono = mu.clone();
            let mut coef = c.clone();
            let mut mults = Vec::new();
            let mut dead = false;
            for (b, p) in factors.iter().zip(&ms) {
                match b.action(p.expect("assigned"), beta) {
                    BosonAction::Mult(v) => mults.push(v),
                    BosonAction::Deriv(v, s) => match d(&mono, v) {
                        Some((e, rest)) => {
                            mono = rest;
                            coef = &(&coef * &e) * &s;
                        }
                        None => dead = true,
                    },
                    BosonAction::Zero => dead = true,
                }
            }
            if dead {
                continue;
            }
            for v in mults {
                mono = mono.mul_var(v);
            }
            out.add_term(mono, coef);
        }
    });
}

fn second_kind(k: &Rational, gen: Sl2Gen, mu: &Monomial, c: &Rational, out: &mut FockPoly) {
    let beta = &(k + &Rational::from_int(2)) * &Rational::from_int(2);
    match gen {
        Sl2Gen::E(n) => normal_ordered(&[Boson::A], n, &beta, mu, c, out),
        Sl2Gen::H(n) => {
            normal_ordered(&[Boson::AStar, Boson::A], n, &beta, mu, &(c * &Rational::from_int(-2)), out);
            normal_ordered(&[Boson::B], n, &beta, mu, c, out);
        }
        Sl2Gen::F(n) => {
            normal_ordered(&[Boson::AStar, Boson::AStar, Boson::A], n, &beta, mu, &-c, out);
            let kn = &(k * &Rational::from_int(-(n as i64))) * c;
            normal_ordered(&[Boson::AStar], n, &beta, mu, &kn, out);
            normal_ordered(&[Boson::AStar, Boson::B], n, &beta, mu, c, out);
        }
        Sl2Gen::C => {}
    }
}

/// The image of `v` under a generator in the chosen realization.
pub fn sl2_realization_apply(kind: &Sl2RealizationKind, gen: Sl2Gen, v: &FockPoly) -> Result<FockPoly> {
    check_alphabet(kind, v)?;
    let mut out = FockPoly::zero();
    for (mu, c) in v.terms() {
        match (kind, gen) {
            (_, Sl2Gen::C) => out.add_term(mu.clone(), &kind.level() * c),
            (Sl2RealizationKind::FirstFreeField, g) => first_kind(g, mu, c, &mut out),
            (Sl2RealizationKind::JakobsenKac(l), g) => jakobsen_kac(l, g, mu, c, &mut out),
            (Sl2RealizationKind::BernardFelder { k, j }, g) => bernard_felder(k, j, g, mu, c, &mut out),
            (Sl2RealizationKind::SecondFreeField { k }, g) => second_kind(k, g, mu, c, &mut out),
        }
    }
    Ok(out)
}

/// Monomials of degree `≤ degree` in the realization's variables with
/// `|mode| ≤ window`.
pub fn sl2_test_set(kind: &Sl2RealizationKind, window: Mode, degree: u32) -> Vec<FockPoly> {
    let mut vars: Vec<VarId> = (-window..=window).map(x).collect();
    if kind.has_y() {
        vars.extend((1..=window).map(y));
    }
    vars.sort();
    crate::relations::monomials_up_to_degree(&vars, degree)
        .into_iter()
        .map(FockPoly::monomial)
        .collect()
}

fn gen_bracket(kind: &Sl2RealizationKind, a: Sl2Gen, b: Sl2Gen, v: &FockPoly) -> Result<FockPoly> {
    let ab = sl2_realization_apply(kind, a, &sl2_realization_apply(kind, b, v)?)?;
    let ba = sl2_realization_apply(kind, b, &sl2_realization_apply(kind, a, v)?)?;
    Ok(ab - ba)
}

/// The expected value of `[a, b]` as a combination of generators plus a
/// multiple of `c`.
fn sl2_bracket(a: Sl2Gen, b: Sl2Gen) -> (Vec<(i64, Sl2Gen)>, i64) {
    use Sl2Gen::*;
    match (a, b) {
        (E(m), F(n)) => (vec![(1, H(m + n))], if m + n == 0 { m as i64 } else { 0 }),
        (H(m), E(n)) => (vec![(2, E(m + n))], 0),
        (H(m), F(n)) => (vec![(-2, F(m + n))], 0),
        (H(m), H(n)) => (Vec::new(), if m + n == 0 { 2 * m as i64 } else { 0 }),
        _ => (Vec::new(), 0),
    }
}

/// Checks the affine sl(2) relations mode by mode on the test set.
pub fn sl2_relation_check(kind: &Sl2RealizationKind, mode_window: Mode, test_set: &[FockPoly]) -> Result<Report> {
    use Sl2Gen::*;
    let mut rep = Report::new(format!("sl2-relations-{}", kind.name()), None);
    let level = kind.level();
    let kinds: [fn(Mode) -> Sl2Gen; 3] = [E, H, F];
    let mut pairs = Vec::new();
    for m in -mode_window..=mode_window {
        for n in -mode_window..=mode_window {
            for (x1, x2) in [(0, 2), (1, 0), (1, 2), (1, 1), (0, 0), (2, 2)] {
                pairs.push((kinds[x1](m), kinds[x2](n)));
            }
        }
        for g in kinds {
            pairs.push((g(m), C));
        }
    }
    for (a, b) in pairs {
        let (terms, central) = sl2_bracket(a, b);
        let mut witness = None;
        for v in test_set {
            let got = gen_bracket(kind, a, b, v)?;
            let mut want = v.scale(&(&Rational::from_int(central) * &level));
            for (k, g) in &terms {
                want.add_scaled(&sl2_realization_apply(kind, *g, v)?, &Rational::from_int(*k));
            }
            if got != want {
                witness = Some(format!("on {v}: got {got}, expected {want}"));
                break;
            }
        }
        rep.record(format!("[{a},{b}]"), witness);
    }
    Ok(rep)
}

fn flip_y(v: &FockPoly) -> FockPoly {
    let mut out = FockPoly::zero();
    for (mu, c) in v.terms() {
        let odd: u32 = mu
            .factors()
            .iter()
            .filter(|(var, _)| matches!(var, VarId::Y { .. }))
            .map(|(_, e)| e)
            .sum();
        out.add_term(mu.clone(), if odd % 2 == 1 { -c } else { c.clone() });
    }
    out
}

/// Compares the second realization with the general engine at `n = r = 1`,
/// `γ² = K + 2`, `λ = 0`, under `e_n ↔ F_n`, `h_n ↔ −H_n`, `f_n ↔ E_n`,
/// `c ↔ c` and `y_m ↦ −y_m`.
pub fn second_matches_engine(k: &Rational, mode_window: Mode, test_set: &[FockPoly]) -> Result<Report> {
    let params = crate::algebra::Params::with_zero_weight(1, 1, k + &Rational::from_int(2))?;
    let engine = Engine::new(&params);
    let kind = Sl2RealizationKind::SecondFreeField { k: k.clone() };
    let mut rep = Report::new("sl2-second-vs-engine", None);
    let mut gens = vec![Sl2Gen::C];
    for m in -mode_window..=mode_window {
        gens.extend([Sl2Gen::E(m), Sl2Gen::H(m), Sl2Gen::F(m)]);
    }
    for g in gens {
        let (label, sign) = match g {
            Sl2Gen::E(m) => (CurrentLabel::f(1, m), 1),
            Sl2Gen::H(m) => (CurrentLabel::h(1, m), -1),
            Sl2Gen::F(m) => (CurrentLabel::e(1, m), 1),
            Sl2Gen::C => (CurrentLabel::C, 1),
        };
        let mut witness = None;
        for v in test_set {
            let got = sl2_realization_apply(&kind, g, v)?;
            let want = flip_y(&engine.apply(label, &flip_y(v))?).scale(&Rational::from_int(sign));
            if got != want {
                witness = Some(format!("on {v}: {g} gives {got}, engine {label} gives {want}"));
                break;
            }
        }
        rep.record(format!("{g} matches {label}"), witness);
    }
    Ok(rep)
}

/// `f_{s_1}⋯f_{s_k}|0⟩ ↦ x_{s_1}⋯x_{s_k}`, the identification of `V(0)`
/// with the first realization.
pub fn vpoly_to_fock(v: &VPoly) -> FockPoly {
    let mut out = FockPoly::zero();
    for (m, c) in v.terms() {
        let mono = m.modes().iter().fold(Monomial::one(), |acc, &s| acc.mul_var(x(s)));
        out.add_term(mono, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(modes: &[Mode]) -> VPoly {
        VPoly::monomial(FMonomial::new(modes.to_vec()))
    }

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn v0_examples() {
        assert!(v0_act(Sl2Gen::E(1), &f(&[0])).is_zero());
        assert_eq!(v0_act(Sl2Gen::H(2), &f(&[1])), f(&[3]).scale(&q(-2)));
        assert_eq!(v0_act(Sl2Gen::E(1), &f(&[0, -1])), f(&[0]).scale(&q(-2)));
    }

    #[test]
    fn wilson_examples() {
        assert_eq!(wilson_vector(1, &[5]).unwrap(), f(&[5]));
        let mut want = f(&[0, 3]);
        want.add_scaled(&f(&[1, 2]), &q(-1));
        assert_eq!(wilson_vector(2, &[0, 2]).unwrap(), want);
        assert!(wilson_vector(2, &[0, 0]).unwrap().is_zero());
        assert!(wilson_vector(0, &[]).is_err());
    }

    #[test]
    fn wilson_singularity_split() {
        let v = wilson_vector(2, &[0, 2]).unwrap();
        let s = singularity_check(&v, 4).unwrap();
        assert!(s.e_annihilated);
        assert!(!s.h_annihilated);
        let mut h1 = f(&[0, 4]).scale(&q(-2));
        h1.add_scaled(&f(&[2, 2]), &q(2));
        assert_eq!(v0_act(Sl2Gen::H(1), &v), h1);
        assert!(singularity_check(&f(&[0]), 4).unwrap().e_annihilated);
        assert!(singularity_check(&VPoly::zero(), 4).is_err());
    }

    #[test]
    fn permutation_signs() {
        let ps = permutations(3);
        assert_eq!(ps.len(), 6);
        assert_eq!(ps.iter().map(|(_, s)| s).sum::<i64>(), 0);
        assert!(ps.contains(&(vec![0, 1, 2], 1)));
        assert!(ps.contains(&(vec![1, 0, 2], -1)));
        assert!(ps.contains(&(vec![1, 2, 0], 1)));
    }

    #[test]
    fn kernels() {
        for n in -3..=3 {
            assert_eq!(singular_space_kernel(1, n, 3).len(), 1);
        }
        let k = singular_space_kernel(2, 3, 4);
        let w = wilson_vector(2, &[0, 2]).unwrap();
        let basis = graded_basis(2, 3, 4);
        let index: BTreeMap<FMonomial, usize> = basis.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect();
        let ech = row_reduce(k.iter().map(|v| coords(v, &index)).collect(), basis.len());
        assert!(ech.contains(&coords(&w, &index)));
        assert!(k.iter().all(|v| !v.is_zero()));
        for n in -4..=4 {
            assert_eq!(kernel_in_wilson_span(2, n, 4), Ok(()));
        }
    }

    #[test]
    fn parse_round_trip() {
        let v = parse_vpoly("f[0]*f[3] - 2/3*f[2]*f[1] + 1").unwrap();
        assert_eq!(v.to_string(), "1 + f[0]*f[3] - 2/3*f[1]*f[2]");
        assert_eq!(parse_vpoly(&v.to_string()).unwrap(), v);
        assert!(parse_vpoly("f[x]").is_err());
    }

    #[test]
    fn realization_examples() {
        let first = Sl2RealizationKind::FirstFreeField;
        let x1xm1 = FockPoly::monomial(Monomial::var(x(1)).mul_var(x(-1)));
        assert_eq!(
            sl2_realization_apply(&first, Sl2Gen::E(0), &x1xm1).unwrap(),
            FockPoly::var(x(0)).scale(&q(-2))
        );
        let bf = Sl2RealizationKind::BernardFelder { k: q(2), j: q(1) };
        let vac = FockPoly::one();
        for n in -3..=3 {
            assert!(sl2_realization_apply(&bf, Sl2Gen::E(n), &vac).unwrap().is_zero());
            let got = gen_bracket(&bf, Sl2Gen::E(n), Sl2Gen::F(-n), &vac).unwrap();
            assert_eq!(got, vac.scale(&q(1 + 2 * n as i64)));
        }
        assert_eq!(sl2_realization_apply(&bf, Sl2Gen::H(0), &vac).unwrap(), vac);
        let jk = Sl2RealizationKind::JakobsenKac(BTreeMap::from([(0, q(5))]));
        assert_eq!(sl2_realization_apply(&jk, Sl2Gen::H(0), &vac).unwrap(), vac.scale(&q(-5)));
        assert!(sl2_realization_apply(&first, Sl2Gen::F(0), &FockPoly::var(y(1))).is_err());
    }

    #[test]
    fn first_realization_is_v0() {
        let gens: Vec<Sl2Gen> = (-3..=3).flat_map(|m| [Sl2Gen::E(m), Sl2Gen::H(m), Sl2Gen::F(m)]).collect();
        for v in [f(&[]), f(&[0]), f(&[-1, 2]), f(&[1, 1, -2])] {
            for &g in &gens {
                let via_fock =
                    sl2_realization_apply(&Sl2RealizationKind::FirstFreeField, g, &vpoly_to_fock(&v)).unwrap();
                assert_eq!(via_fock, vpoly_to_fock(&v0_act(g, &v)), "{g} on {v}");
            }
        }
    }

    #[test]
    fn relation_suites() {
        let kinds = [
            Sl2RealizationKind::FirstFreeField,
            Sl2RealizationKind::JakobsenKac(BTreeMap::from([(0, q(5)), (1, q(2)), (-2, Rational::new(1, 3))])),
            Sl2RealizationKind::BernardFelder { k: q(2), j: q(1) },
            Sl2RealizationKind::SecondFreeField { k: Rational::new(1, 2) },
        ];
        for kind in &kinds {
            let ts = sl2_test_set(kind, 2, 2);
            let rep = sl2_relation_check(kind, 2, &ts).unwrap();
            assert!(rep.all_pass(), "{}: {:?}", kind.name(), rep.first_failure());
        }
    }

    #[test]
    fn second_agrees_with_engine() {
        let k = Rational::new(1, 2);
        let kind = Sl2RealizationKind::SecondFreeField { k: k.clone() };
        let rep = second_matches_engine(&k, 2, &sl2_test_set(&kind, 2, 2)).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.first_failure());
    }
}
