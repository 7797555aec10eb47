//! The realized currents `E_i(z)`, `F_i(z)`, `H_i(z)` and `c` as evaluation
//! plans of normal-ordered oscillator words.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::algebra::{FockPoly, Mode, Monomial, Params, Weight};
use crate::error::{Error, Result};
use crate::oscillator::{Field, FockContext, NormalWord, TermSink};
use crate::rational::Rational;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CurrentKind {
    E,
    F,
    H,
}

/// A generator `E_{i,m}`, `F_{i,m}`, `H_{i,m}` or the central `c`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum CurrentLabel {
    Mode { kind: CurrentKind, i: usize, m: Mode },
    C,
}

impl CurrentLabel {
    pub fn e(i: usize, m: Mode) -> Self {
        CurrentLabel::Mode { kind: CurrentKind::E, i, m }
    }

    pub fn f(i: usize, m: Mode) -> Self {
        CurrentLabel::Mode { kind: CurrentKind::F, i, m }
    }

    pub fn h(i: usize, m: Mode) -> Self {
        CurrentLabel::Mode { kind: CurrentKind::H, i, m }
    }

    pub fn check(&self, params: &Params) -> Result<()> {
        match *self {
            CurrentLabel::Mode { i, .. } if i == 0 || i > params.n() => Err(Error::IndexOutOfBounds(format!(
                "{self} with n = {}",
                params.n()
            ))),
            _ => Ok(()),
        }
    }

    /// Weight shift `wt(X) + m·δ` of the operator.
    pub fn weight(&self, n: usize) -> Weight {
        match *self {
            CurrentLabel::Mode { kind, i, m } => {
                let sign = match kind {
                    CurrentKind::E => 1,
                    CurrentKind::F => -1,
                    CurrentKind::H => 0,
                };
                let mut w = Weight::root_interval(n, i, i, sign, m as i64);
                if sign == 0 {
                    w.root_offset[i - 1] = 0;
                }
                w
            }
            CurrentLabel::C => Weight::zero(n),
        }
    }
}

impl fmt::Display for CurrentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CurrentLabel::Mode { kind, i, m } => write!(f, "{kind:?}({i},{m})"),
            CurrentLabel::C => write!(f, "c"),
        }
    }
}

/// One summand of a current: a normal-ordered word (its scalar is the
/// coefficient), optionally differentiated in `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanTerm {
    pub word: NormalWord,
    pub z_derivative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentPlan {
    pub terms: Vec<PlanTerm>,
    /// Scalar part; only the central element has one.
    pub scalar: Rational,
}

fn a(i: usize, j: usize) -> Field {
    Field::A { i, j }
}

fn a_star(i: usize, j: usize) -> Field {
    Field::AStar { i, j }
}

fn term<I: IntoIterator<Item = Field>>(c: i64, factors: I) -> PlanTerm {
    PlanTerm {
        word: NormalWord::new(factors).scaled(Rational::from_int(c)),
        z_derivative: false,
    }
}

fn plan_f(i: usize, n: usize) -> Vec<PlanTerm> {
    let mut t = vec![term(1, [a(i, i)])];
    for j in i + 1..=n {
        t.push(term(1, [a(i, j), a_star(i + 1, j)]));
    }
    t
}

fn plan_h(i: usize, n: usize) -> Vec<PlanTerm> {
    let mut t = vec![term(2, [a(i, i), a_star(i, i)])];
    for j in 1..i {
        t.push(term(1, [a(j, i), a_star(j, i)]));
        t.push(term(-1, [a(j, i - 1), a_star(j, i - 1)]));
    }
    for j in i + 1..=n {
        t.push(term(1, [a(i, j), a_star(i, j)]));
        t.push(term(-1, [a(i + 1, j), a_star(i + 1, j)]));
    }
    t.push(term(1, [Field::B { i }]));
    t
}

fn plan_e(i: usize, params: &Params) -> Vec<PlanTerm> {
    let (n, r) = (params.n(), params.r());
    let mut t = Vec::new();
    for k in 1..i {
        t.push(term(1, [a_star(i, i), a(k, i - 1), a_star(k, i - 1)]));
    }
    for k in 1..=i {
        t.push(term(-1, [a_star(i, i), a(k, i), a_star(k, i)]));
    }
    for k in i + 1..=n {
        t.push(term(1, [a(i + 1, k), a_star(i, k)]));
    }
    for k in 1..i {
        t.push(term(-1, [a(k, i - 1), a_star(k, i)]));
    }
    t.push(term(-1, [a_star(i, i), Field::B { i }]));
    let shift = if i > r { r + 1 } else { i + 1 };
    let coeff = -&(&Rational::from_int(shift as i64) - params.gamma2());
    t.push(PlanTerm {
        word: NormalWord::new([a_star(i, i)]).scaled(coeff),
        z_derivative: true,
    });
    t
}

/// The transcription of the realization formula for `label` (mode-free).
pub fn current_plan(label: CurrentLabel, params: &Params) -> Result<CurrentPlan> {
    label.check(params)?;
    let n = params.n();
    Ok(match label {
        CurrentLabel::C => CurrentPlan {
            terms: Vec::new(),
            scalar: params.level(),
        },
        CurrentLabel::Mode { kind, i, .. } => CurrentPlan {
            terms: match kind {
                CurrentKind::F => plan_f(i, n),
                CurrentKind::H => plan_h(i, n),
                CurrentKind::E => plan_e(i, params),
            },
            scalar: Rational::ZERO,
        },
    })
}

/// Evaluates currents on the Fock space. Results on individual monomials are
/// memoized per engine instance.
pub struct Engine {
    pub(crate) ctx: FockContext,
    pub(crate) plans: HashMap<(CurrentKind, usize), CurrentPlan>,
    memo: RefCell<HashMap<(CurrentLabel, Monomial), FockPoly>>,
}

impl Engine {
    pub fn new(params: &Params) -> Self {
        let ctx = FockContext::new(params);
        let mut plans = HashMap::new();
        for i in 1..=params.n() {
            for kind in [CurrentKind::E, CurrentKind::F, CurrentKind::H] {
                let plan = current_plan(CurrentLabel::Mode { kind, i, m: 0 }, params).expect("valid label");
                for t in &plan.terms {
                    t.word.check_supported(params.r()).expect("realization words are locally finite");
                }
                plans.insert((kind, i), plan);
            }
        }
        Engine {
            ctx,
            plans,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn params(&self) -> &Params {
        self.ctx.params()
    }

    pub fn context(&self) -> &FockContext {
        &self.ctx
    }

    pub fn clear_cache(&self) {
        self.memo.borrow_mut().clear();
    }

    pub(crate) fn apply_mono_uncached(&self, kind: CurrentKind, i: usize, m: Mode, mu: &Monomial) -> FockPoly {
        let mut out = FockPoly::zero();
        self.apply_mono_into(kind, i, m, mu, false, &mut out);
        out
    }

    pub(crate) fn apply_mono_into<S: TermSink>(
        &self,
        kind: CurrentKind,
        i: usize,
        m: Mode,
        mu: &Monomial,
        exact: bool,
        out: &mut S,
    ) {
        let plan = &self.plans[&(kind, i)];
        for t in &plan.terms {
            if t.z_derivative {
                let c = &t.word.scalar * &Rational::from_int(-(m as i64));
                if !c.is_zero() {
                    self.ctx.word_on_monomial(&t.word, t.word.mode_sum(m) - 1, mu, &c, exact, out);
                }
            } else {
                self.ctx.word_on_monomial(&t.word, t.word.mode_sum(m), mu, &t.word.scalar, exact, out);
            }
        }
    }

    fn apply_mono(&self, label: CurrentLabel, mu: &Monomial) -> FockPoly {
        let CurrentLabel::Mode { kind, i, m } = label else {
            return FockPoly::monomial(mu.clone()).scale(&self.params().level());
        };
        let key = (label, mu.clone());
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let out = self.apply_mono_uncached(kind, i, m, mu);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// `ρ(label) v`.
    pub fn apply(&self, label: CurrentLabel, v: &FockPoly) -> Result<FockPoly> {
        label.check(self.params())?;
        v.check(self.params())?;
        Ok(self.apply_unchecked(label, v))
    }

    pub(crate) fn apply_unchecked(&self, label: CurrentLabel, v: &FockPoly) -> FockPoly {
        let mut out = FockPoly::zero();
        for (mu, c) in v.terms() {
            out.add_scaled(&self.apply_mono(label, mu), c);
        }
        out
    }

    /// Applies a sequence of currents right to left: `labels[0]` acts last.
    pub fn apply_word(&self, labels: &[CurrentLabel], v: &FockPoly) -> Result<FockPoly> {
        let mut acc = v.clone();
        for l in labels.iter().rev() {
            acc = self.apply(*l, &acc)?;
        }
        Ok(acc)
    }

    /// Reference evaluation summing every oscillator word over a mode box of
    /// radius `scale` times the radius that provably suffices.
    pub fn apply_box(&self, label: CurrentLabel, v: &FockPoly, scale: i64) -> Result<FockPoly> {
        label.check(self.params())?;
        let CurrentLabel::Mode { kind, i, m } = label else {
            return Ok(v.scale(&self.params().level()));
        };
        let plan = &self.plans[&(kind, i)];
        let mut out = FockPoly::zero();
        for t in &plan.terms {
            if t.z_derivative {
                let w = t.word.clone().scaled(Rational::from_int(-(m as i64)));
                let bound = scale * self.ctx.sufficient_box(&w, m - 1, v);
                out.add_scaled(&self.ctx.apply_word_box(&w, m - 1, v, bound)?, &Rational::ONE);
            } else {
                let bound = scale * self.ctx.sufficient_box(&t.word, m, v);
                out.add_scaled(&self.ctx.apply_word_box(&t.word, m, v, bound)?, &Rational::ONE);
            }
        }
        Ok(out)
    }
}

pub fn apply_current(label: CurrentLabel, v: &FockPoly, params: &Params) -> Result<FockPoly> {
    Engine::new(params).apply(label, v)
}

/// `(λ_1..λ_n, γ²−(r+1))`, asserted against direct application to the
/// vacuum.
pub fn vacuum_eigenvalues(params: &Params) -> (Vec<Rational>, Rational) {
    let engine = Engine::new(params);
    let vac = FockPoly::one();
    for i in 1..=params.n() {
        let got = engine.apply_unchecked(CurrentLabel::h(i, 0), &vac);
        assert_eq!(got, vac.scale(params.lambda_i(i)), "H({i},0) on the vacuum");
    }
    let level = params.level();
    assert_eq!(engine.apply_unchecked(CurrentLabel::C, &vac), vac.scale(&level));
    (params.lambda().to_vec(), level)
}
