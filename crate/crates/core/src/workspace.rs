//! Batched current evaluation for the verification suites.
//!
//! A [`Workspace`] applies currents to sparse vectors over interned packed
//! monomials with exact integer coefficients, memoizing the image of every
//! monomial it meets. Every current is scaled by `D`, the least common
//! denominator of `γ²` and the `λ_i`; a vector produced by `k` applications
//! therefore carries the factor `D^k`.
//!
//! Currents whose words do not fit the integer scheme fall back to the
//! rational evaluator of [`Engine`].

use std::rc::Rc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::algebra::{FockPoly, Mode, Monomial, VarId};
use crate::oscillator::Field;
use crate::rational::Rational;
use crate::sparse::{integral, Accumulator, Coeff, Interner, MonoId, Packed, SparseVec, PACKED_DEGREE};
use crate::wakimoto::{CurrentKind, CurrentLabel, Engine};

/// One normal-ordered word of a current. At mode `m` the factor modes sum
/// to `m + 1 − shift`.
struct CompiledWord {
    fields: SmallVec<[Field; 3]>,
    shift: i64,
    /// Whether the word comes from `∂_z` and so carries the extra factor `−m`.
    z_derivative: bool,
    /// `D·s` for words without a `b` factor, `s` for words with one, where
    /// `s` is the word's scalar.
    coef: Coeff,
}

/// A multiset of marked variables, see [`Workspace::apply_marked`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MarkId(u32);

impl MarkId {
    /// The empty mark set.
    pub const NONE: MarkId = MarkId(0);
}

/// Largest supported number of marks.
pub const MAX_MARKS: usize = 4;

/// One word being applied to one monomial, with the variables each factor
/// can differentiate as `(run, mode, coefficient)`.
struct WordSplit<'a> {
    w: &'a CompiledWord,
    mu: Packed,
    runs: &'a [(usize, u32, VarId)],
    hits: &'a [SmallVec<[(usize, i64, Coeff); 8]>],
    r: usize,
}

/// Integer words of a current, or `None` if they do not fit the integer
/// scheme.
type Plan = Option<Vec<CompiledWord>>;

/// Per-parameter integer data: `D`, `D·𝔅` and `D·λ`.
struct Tables {
    d: Coeff,
    b: Vec<Vec<Coeff>>,
    lambda: Vec<Coeff>,
    r: usize,
}

pub struct Workspace<'e> {
    engine: &'e Engine,
    scale: Coeff,
    tables: Option<Tables>,
    interner: Interner,
    plans: FxHashMap<(CurrentKind, usize), Rc<Plan>>,
    mode_batch: Mode,
    batch: Vec<(Mode, SparseVec)>,
    mark_ids: FxHashMap<Packed, MarkId>,
    mark_sets: Vec<Packed>,
    absorbable: FxHashMap<(CurrentKind, usize, MarkId), Rc<[usize]>>,
    memo: FxHashMap<u128, u32>,
    spans: Vec<(u32, u32)>,
    data: Vec<(MonoId, Coeff)>,
    acc: Accumulator,
    image_acc: Accumulator,
    limit: usize,
}

fn label_code(l: CurrentLabel) -> u32 {
    match l {
        CurrentLabel::C => u32::MAX,
        CurrentLabel::Mode { kind, i, m } => {
            let k = match kind {
                CurrentKind::E => 0u32,
                CurrentKind::F => 1,
                CurrentKind::H => 2,
            };
            assert!(i < 1 << 10 && m.unsigned_abs() < 1 << 19, "label out of workspace range");
            (k << 30) | ((i as u32) << 20) | ((m + (1 << 19)) as u32)
        }
    }
}

fn memo_key(label: CurrentLabel, marks: MarkId, id: MonoId) -> u128 {
    (u128::from(label_code(label)) << 64) | (u128::from(marks.0) << 32) | u128::from(id)
}

/// Position recorded for a marked variable, which is not a factor of the
/// monomial itself.
const MARKED: usize = usize::MAX;

/// Mode and coefficient with which `f` differentiates `v` once, if it does.
fn contraction(t: &Tables, f: Field, v: VarId) -> Option<(i64, Coeff)> {
    match (f, v) {
        (Field::A { i, j }, VarId::X { i: vi, j: vj, m }) if i == vi as usize && j == vj as usize => {
            (j <= t.r && m >= 0).then_some((m as i64, 1))
        }
        (Field::AStar { i, j }, VarId::X { i: vi, j: vj, m }) if i == vi as usize && j == vj as usize => {
            (j > t.r || m < 0).then_some((-(m as i64), -1))
        }
        (Field::B { i }, VarId::Y { i: l, m }) => {
            let c = t.b[i - 1][l as usize - 1];
            (c != 0).then(|| (m as i64, mul(m as Coeff, c)))
        }
        _ => None,
    }
}

/// Whether distinct factors of `fields` can differentiate all of `marks`.
fn absorbs(t: &Tables, fields: &[Field], marks: &[VarId], used: &mut [bool; 8]) -> bool {
    let Some((&v, rest)) = marks.split_first() else {
        return true;
    };
    for (q, &f) in fields.iter().enumerate() {
        if !used[q] && contraction(t, f, v).is_some() {
            used[q] = true;
            let ok = absorbs(t, fields, rest, used);
            used[q] = false;
            if ok {
                return true;
            }
        }
    }
    false
}

fn denominator(c: &Rational) -> Coeff {
    Coeff::try_from(c.denom()).expect("parameter denominators fit in 64 bits")
}

fn lcm(a: Coeff, b: Coeff) -> Coeff {
    a / num_integer::gcd(a, b) * b
}

fn mul(a: Coeff, b: Coeff) -> Coeff {
    a.checked_mul(b).expect("coefficient overflow")
}

impl<'e> Workspace<'e> {
    /// Soft cap on interned monomials and stored image entries before
    /// [`Workspace::maybe_reset`] discards the caches.
    pub const DEFAULT_LIMIT: usize = 1 << 22;

    pub fn new(engine: &'e Engine) -> Self {
        let p = engine.params();
        let scale = p.lambda().iter().fold(denominator(p.gamma2()), |d, l| lcm(d, denominator(l)));
        let dr = Rational::from_int(scale);
        let n = p.n();
        let b = engine.context().b_matrix();
        let tables = (|| {
            let bt = (1..=n)
                .map(|i| (1..=n).map(|l| integral(&(b.get(i, l) * &dr))).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()?;
            let lambda = p.lambda().iter().map(|l| integral(&(l * &dr))).collect::<Option<Vec<_>>>()?;
            Some(Tables {
                d: scale,
                b: bt,
                lambda,
                r: p.r(),
            })
        })();
        Workspace {
            engine,
            scale,
            tables,
            interner: Interner::default(),
            plans: FxHashMap::default(),
            mode_batch: 0,
            batch: Vec::new(),
            mark_ids: FxHashMap::from_iter([(Packed::one(), MarkId::NONE)]),
            mark_sets: vec![Packed::one()],
            absorbable: FxHashMap::default(),
            memo: FxHashMap::default(),
            spans: Vec::new(),
            data: Vec::new(),
            acc: Accumulator::default(),
            image_acc: Accumulator::default(),
            limit: Self::DEFAULT_LIMIT,
        }
    }

    pub fn engine(&self) -> &'e Engine {
        self.engine
    }

    /// On a cache miss for a mode in `[-window, window]`, evaluates the
    /// current at every mode of that window in the same pass.
    pub fn set_mode_batch(&mut self, window: Mode) {
        self.mode_batch = window.max(0);
    }

    /// The factor `D` carried by each application.
    pub fn scale(&self) -> Coeff {
        self.scale
    }

    /// Drops the monomial and image caches once they outgrow the limit. Ids
    /// handed out earlier become invalid, so call this only between
    /// independent computations.
    pub fn maybe_reset(&mut self) {
        if self.interner.len() > self.limit || self.data.len() > 4 * self.limit {
            self.interner.clear_monomials();
            self.memo.clear();
            self.spans.clear();
            self.data.clear();
            self.acc.reset();
            self.image_acc.reset();
        }
    }

    /// Interns `L·p` where `L` is the least common denominator of the
    /// coefficients of `p`; returns the vector and `L`.
    pub fn intern_poly(&mut self, p: &FockPoly) -> (SparseVec, Coeff) {
        let l = p.terms().fold(1, |d, (_, c)| lcm(d, denominator(c)));
        let lr = Rational::from_int(l);
        let mut v: SparseVec = p
            .terms()
            .map(|(m, c)| {
                let packed = self.interner.pack(m);
                (self.interner.intern(packed), integral(&(c * &lr)).expect("scaled to an integer"))
            })
            .collect();
        v.sort_by_key(|t| t.0);
        (v, l)
    }

    /// The polynomial `v / (base · D^applications)`.
    pub fn to_poly(&self, v: &SparseVec, base: Coeff, applications: u32) -> FockPoly {
        let s = &Rational::from_int(base) * &Rational::from_int(self.scale).pow(applications);
        self.interner.to_poly(v, &s)
    }

    /// Registers a multiset of marked variables.
    pub fn mark_set(&mut self, vars: &[VarId]) -> MarkId {
        assert!(vars.len() <= MAX_MARKS, "too many marks");
        let mut p = Packed::one();
        for &v in vars {
            p = p.times(self.interner.var(v));
        }
        if let Some(&k) = self.mark_ids.get(&p) {
            return k;
        }
        let k = MarkId(self.mark_sets.len() as u32);
        self.mark_sets.push(p);
        self.mark_ids.insert(p, k);
        k
    }

    /// `D·ρ(label) v`.
    pub fn apply(&mut self, label: CurrentLabel, v: &SparseVec) -> SparseVec {
        self.apply_marked(label, MarkId::NONE, v)
    }

    /// `D·[…[ρ(label), x_1], …, x_k] v` for the marked variables `x_1 … x_k`:
    /// the part of `D·ρ(label)(x_1⋯x_k v)` in which every marked factor is
    /// differentiated away.
    pub fn apply_marked(&mut self, label: CurrentLabel, marks: MarkId, v: &SparseVec) -> SparseVec {
        if v.is_empty() || !self.may_absorb(label, marks) {
            return SparseVec::new();
        }

        for &(id, c) in v {
            let (start, len) = self.image(label, marks, id);
            let img = &self.data[start as usize..(start + len) as usize];
            self.acc.add_scaled(img, c);
        }
        self.acc.drain()
    }

    /// `Σ c_k · v_k`.
    pub fn combine(&mut self, parts: &[(&SparseVec, Coeff)]) -> SparseVec {
        for (v, c) in parts {
            self.acc.add_scaled(v, *c);
        }
        self.acc.drain()
    }

    /// False when no word of the current can differentiate every mark.
    fn may_absorb(&mut self, label: CurrentLabel, marks: MarkId) -> bool {
        match label {
            CurrentLabel::C => marks == MarkId::NONE,
            CurrentLabel::Mode { kind, i, .. } => marks == MarkId::NONE || !self.absorbing_words(kind, i, marks).is_empty(),
        }
    }

    /// Indices of the integer words of a current that can differentiate
    /// every mark; all words when the plan is not integral.
    fn absorbing_words(&mut self, kind: CurrentKind, i: usize, marks: MarkId) -> Rc<[usize]> {
        if let Some(w) = self.absorbable.get(&(kind, i, marks)) {
            return Rc::clone(w);
        }
        let plan = self.plan(kind, i);
        let words: Rc<[usize]> = match (&*plan, &self.tables) {
            (Some(words), Some(t)) => {
                let vars: SmallVec<[VarId; MAX_MARKS]> =
                    self.mark_sets[marks.0 as usize].as_slice().iter().map(|&x| self.interner.var_id(x)).collect();
                (0..words.len()).filter(|&k| absorbs(t, &words[k].fields, &vars, &mut [false; 8])).collect()
            }
            (Some(words), None) => (0..words.len()).collect(),
            (None, _) => Rc::from([0]),
        };
        self.absorbable.insert((kind, i, marks), Rc::clone(&words));
        words
    }

    fn plan(&mut self, kind: CurrentKind, i: usize) -> Rc<Plan> {
        if let Some(p) = self.plans.get(&(kind, i)) {
            return Rc::clone(p);
        }
        let plan = Rc::new(self.compile(kind, i));
        self.plans.insert((kind, i), Rc::clone(&plan));
        plan
    }

    fn compile(&self, kind: CurrentKind, i: usize) -> Plan {
        let d = Rational::from_int(self.scale);
        self.tables.as_ref()?;
        let mut words = Vec::new();
        for t in &self.engine.plans[&(kind, i)].terms {
            let s = &t.word.scalar;
            if s.is_zero() {
                continue;
            }
            let has_b = t.word.factors.iter().any(|f| matches!(f, Field::B { .. }));
            let coef = if has_b { integral(s) } else { integral(&(s * &d)) }?;
            words.push(CompiledWord {
                fields: t.word.factors.clone(),
                shift: t.word.shift_count() + i64::from(t.z_derivative),
                z_derivative: t.z_derivative,
                coef,
            });
        }
        Some(words)
    }

    fn store(&mut self, key: u128, out: &[(MonoId, Coeff)]) -> (u32, u32) {
        let start = u32::try_from(self.data.len()).expect("image arena below 2^32 entries");
        let span = (start, out.len() as u32);
        self.data.extend_from_slice(out);
        self.memo.insert(key, self.spans.len() as u32);
        self.spans.push(span);
        span
    }

    /// Location of `D·ρ(label)` applied to one interned monomial in the
    /// image arena.
    fn image(&mut self, label: CurrentLabel, marks: MarkId, id: MonoId) -> (u32, u32) {
        let key = memo_key(label, marks, id);
        if let Some(&k) = self.memo.get(&key) {
            return self.spans[k as usize];
        }
        let CurrentLabel::Mode { kind, i, m } = label else {
            let c = integral(&(&self.engine.params().level() * &Rational::from_int(self.scale))).expect("scaled level is integral");
            let out = if c == 0 || marks != MarkId::NONE { Vec::new() } else { vec![(id, c)] };
            return self.store(key, &out);
        };
        let plan = self.plan(kind, i);
        let Some(words) = &*plan else {
            let out = self.rational_image(label, marks, id);
            return self.store(key, &out);
        };
        let mut batch = std::mem::take(&mut self.batch);
        let mut used = 0;
        let mut slot = |batch: &mut Vec<(Mode, SparseVec)>, mm: Mode| {
            if used == batch.len() {
                batch.push((mm, SparseVec::new()));
            } else {
                batch[used].0 = mm;
                batch[used].1.clear();
            }
            used += 1;
        };
        slot(&mut batch, m);
        if m.abs() <= self.mode_batch {
            for mm in -self.mode_batch..=self.mode_batch {
                let k = memo_key(CurrentLabel::Mode { kind, i, m: mm }, marks, id);
                if mm != m && !self.memo.contains_key(&k) {
                    slot(&mut batch, mm);
                }
            }
        }
        batch.truncate(used);
        self.batch = batch;
        let mu = self.interner.get(id);
        let mut runs: SmallVec<[(usize, u32, VarId); PACKED_DEGREE]> = mu
            .runs()
            .map(|(pos, e)| (pos, e, self.interner.var_id(mu.as_slice()[pos])))
            .collect();
        let marked = self.mark_sets[marks.0 as usize];
        for &x in marked.as_slice() {
            runs.push((MARKED, 1, self.interner.var_id(x)));
        }
        let eligible = self.absorbing_words(kind, i, marks);
        for &k in eligible.iter() {
            self.eval_word(&words[k], mu, &runs);
        }
        let mut batch = std::mem::take(&mut self.batch);
        let mut span = (0, 0);
        for (k, (mm, out)) in batch.iter_mut().enumerate() {
            out.sort_unstable_by_key(|t| t.0);
            let start = u32::try_from(self.data.len()).expect("image arena below 2^32 entries");
            let mut q = 0;
            while q < out.len() {
                let nid = out[q].0;
                let mut c: Coeff = 0;
                while q < out.len() && out[q].0 == nid {
                    c = c.checked_add(out[q].1).expect("coefficient overflow");
                    q += 1;
                }
                if c != 0 {
                    self.data.push((nid, c));
                }
            }
            let s = (start, self.data.len() as u32 - start);
            let key = memo_key(CurrentLabel::Mode { kind, i, m: *mm }, marks, id);
            self.memo.insert(key, self.spans.len() as u32);
            self.spans.push(s);
            if k == 0 {
                span = s;
            }
        }
        self.batch = batch;
        span
    }

    fn rational_image(&mut self, label: CurrentLabel, marks: MarkId, id: MonoId) -> SparseVec {
        let mu = self.interner.unpack(&self.interner.get(id));
        let marked: Vec<VarId> = self.mark_sets[marks.0 as usize].as_slice().iter().map(|&x| self.interner.var_id(x)).collect();
        let mut img = FockPoly::zero();
        for t in 0u32..1 << marked.len() {
            let (mut inner, mut outer) = (mu.clone(), Monomial::one());
            for (k, &x) in marked.iter().enumerate() {
                if t >> k & 1 == 1 {
                    inner.mul_var_assign(x, 1);
                } else {
                    outer.mul_var_assign(x, 1);
                }
            }
            let part = self.engine.apply(label, &FockPoly::monomial(inner)).expect("checked label");
            let sign = if (marked.len() as u32 - t.count_ones()) % 2 == 0 { Rational::ONE } else { -Rational::ONE };
            img.add_scaled(&(&part * &FockPoly::monomial(outer)), &sign);
        }
        let d = Rational::from_int(self.scale);
        for (nu, c) in img.terms() {
            let p = self.interner.pack(nu);
            let nid = self.interner.intern(p);
            let c = integral(&(c * &d)).expect("scaled current coefficients are integral");
            self.image_acc.add(nid, c);
        }
        self.image_acc.drain()
    }

    /// Applies one word to `mu`. `runs` lists the distinct variables of
    /// `mu` as `(first position, exponent, variable)`, followed by the marks.
    fn eval_word(&mut self, w: &CompiledWord, mu: Packed, runs: &[(usize, u32, VarId)]) {
        let t = self.tables.as_ref().expect("integer tables");
        let mut hits: SmallVec<[SmallVec<[(usize, i64, Coeff); 8]>; 3]> = SmallVec::new();
        for &f in &w.fields {
            hits.push(
                runs.iter()
                    .enumerate()
                    .filter_map(|(q, &(_, _, v))| contraction(t, f, v).map(|(mode, c)| (q, mode, c)))
                    .collect(),
            );
        }
        let mut pending = 0;
        for (q, &(pos, _, _)) in runs.iter().enumerate() {
            if pos == MARKED {
                if !hits.iter().any(|h| h.iter().any(|&(hq, _, _)| hq == q)) {
                    return;
                }
                pending += 1;
            }
        }
        let word = WordSplit {
            w,
            mu,
            runs,
            hits: &hits,
            r: t.r,
        };
        let mut deferred: SmallVec<[Field; 3]> = SmallVec::new();
        let mut taken = [0u32; PACKED_DEGREE + MAX_MARKS];
        self.split(&word, 0, &mut taken, w.coef, 0, pending, &mut deferred);
    }

    /// Chooses, factor by factor, a variable to differentiate or defers the
    /// factor to act by multiplication. `pending` counts marks not yet
    /// differentiated.
    #[allow(clippy::too_many_arguments)]
    fn split(
        &mut self,
        word: &WordSplit,
        k: usize,
        taken: &mut [u32; PACKED_DEGREE + MAX_MARKS],
        coef: Coeff,
        fixed: i64,
        pending: usize,
        deferred: &mut SmallVec<[Field; 3]>,
    ) {
        let w = word.w;
        if pending > w.fields.len() - k {
            return;
        }
        if k == w.fields.len() {
            let mut cur = word.mu;
            for (q, &(pos, _, _)) in word.runs.iter().enumerate().rev() {
                if pos == MARKED {
                    continue;
                }
                for _ in 0..taken[q] {
                    cur = cur.without(pos);
                }
            }
            for b in 0..self.batch.len() {
                let m = self.batch[b].0 as i64;
                let c = if w.z_derivative { mul(coef, -m) } else { coef };
                if c == 0 {
                    continue;
                }
                let mut modes: SmallVec<[i64; 3]> = SmallVec::new();
                self.distribute(deferred, m + 1 - w.shift - fixed, &mut modes, cur, c, b);
            }
            return;
        }
        for &(q, mode, c) in &word.hits[k] {
            let (pos, e, _) = word.runs[q];
            let left = e - taken[q];
            if left == 0 {
                continue;
            }
            taken[q] += 1;
            let pending = if pos == MARKED { pending - 1 } else { pending };
            self.split(word, k + 1, taken, mul(coef, mul(c, left as Coeff)), fixed + mode, pending, deferred);
            taken[q] -= 1;
        }
        let f = w.fields[k];
        let multiplies = !matches!(f, Field::AStar { j, .. } if j > word.r);
        if multiplies {
            deferred.push(f);
            self.split(word, k + 1, taken, coef, fixed, pending, deferred);
            deferred.pop();
        }
    }

    /// Upper bound on the modes at which `f` multiplies; `None` if unbounded.
    fn upper_bound(&self, f: Field) -> Option<i64> {
        match f {
            Field::A { j, .. } if j <= self.tables.as_ref().expect("integer tables").r => Some(-1),
            Field::A { .. } => None,
            Field::AStar { .. } | Field::B { .. } => Some(0),
        }
    }

    fn distribute(&mut self, deferred: &[Field], rem: i64, modes: &mut SmallVec<[i64; 3]>, cur: Packed, coef: Coeff, slot: usize) {
        let k = modes.len();
        if k == deferred.len() {
            if rem == 0 {
                self.emit(deferred, modes, cur, coef, slot);
            }
            return;
        }
        let ub = self.upper_bound(deferred[k]);
        if k + 1 == deferred.len() {
            if ub.is_none_or(|u| rem <= u) {
                modes.push(rem);
                self.emit(deferred, modes, cur, coef, slot);
                modes.pop();
            }
            return;
        }
        let later: Option<i64> = deferred[k + 1..].iter().map(|&f| self.upper_bound(f)).sum();
        let (Some(ub), Some(later)) = (ub, later) else {
            panic!("unbounded creation factor alongside another multiplication");
        };
        for m in rem - later..=ub {
            modes.push(m);
            self.distribute(deferred, rem - m, modes, cur, coef, slot);
            modes.pop();
        }
    }

    fn emit(&mut self, deferred: &[Field], modes: &[i64], mut cur: Packed, mut coef: Coeff, slot: usize) {
        for (&f, &m) in deferred.iter().zip(modes) {
            let m = m as Mode;
            let v = match f {
                Field::A { i, j } => VarId::x(i, j, m),
                Field::AStar { i, j } => VarId::x(i, j, -m),
                Field::B { i } => {
                    let t = self.tables.as_ref().expect("integer tables");
                    if m == 0 {
                        coef = mul(coef, t.lambda[i - 1]);
                        if coef == 0 {
                            return;
                        }
                        continue;
                    }
                    coef = mul(coef, t.d);
                    VarId::y(i, -m)
                }
            };
            cur = cur.times(self.interner.var(v));
        }
        let id = self.interner.intern(cur);
        self.batch[slot].1.push((id, coef));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, Params};
    use crate::relations::test_monomials;
    use crate::sparse::rational_from_i128;

    fn agree(params: &Params, window: Mode, batch: Mode) {
        let engine = Engine::new(params);
        let mut ws = Workspace::new(&engine);
        ws.set_mode_batch(batch);
        let d = rational_from_i128(ws.scale() as i128);
        let monos: Vec<Monomial> = test_monomials(params, 2, 2).into_iter().map(|p| p.first_term().unwrap().0.clone()).collect();
        for kind in [CurrentKind::E, CurrentKind::F, CurrentKind::H] {
            for i in 1..=params.n() {
                for m in -window..=window {
                    let label = CurrentLabel::Mode { kind, i, m };
                    for mu in monos.iter().step_by(7) {
                        let v = FockPoly::monomial(mu.clone());
                        let (vid, _) = ws.intern_poly(&v);
                        let got = ws.apply(label, &vid);
                        let want = engine.apply(label, &v).unwrap().scale(&d);
                        assert_eq!(ws.to_poly(&got, 1, 0), want, "{label} on {mu}");
                    }
                }
            }
        }
        let (vid, _) = ws.intern_poly(&FockPoly::one());
        let got = ws.apply(CurrentLabel::C, &vid);
        assert_eq!(ws.to_poly(&got, 1, 1), FockPoly::one().scale(&params.level()));
    }

    #[test]
    fn integer_evaluator_matches_rational_engine() {
        for (n, r, g) in [(1, 0, Rational::new(9, 4)), (2, 1, Rational::new(9, 4)), (2, 2, Rational::ZERO), (3, 1, Rational::new(-5, 3))] {
            let lambda = (1..=n).map(|i| Rational::new(i as i64, 3)).collect();
            let p = Params::new(n, r, g, lambda).unwrap();
            agree(&p, 3, 0);
            agree(&p, 3, 2);
        }
    }

    #[test]
    fn marked_images_split_by_leibniz() {
        let p = Params::new(2, 1, Rational::new(9, 4), vec![Rational::new(1, 3), Rational::new(2, 3)]).unwrap();
        let engine = Engine::new(&p);
        let mut ws = Workspace::new(&engine);
        ws.set_mode_batch(2);
        let base = Monomial::from_factors([(VarId::x(1, 1, 0), 1), (VarId::y(2, 1), 1)]);
        let marks = [VarId::x(1, 1, 1), VarId::x(1, 2, -1), VarId::y(1, 2), VarId::x(1, 1, 0)];
        for kind in [CurrentKind::E, CurrentKind::F, CurrentKind::H] {
            for i in 1..=2 {
                for m in -2..=2 {
                    let label = CurrentLabel::Mode { kind, i, m };
                    for a in 0..marks.len() {
                        for b in a..marks.len() {
                            let s = [marks[a], marks[b]];
                            let mut full = base.clone();
                            full.mul_var_assign(s[0], 1);
                            full.mul_var_assign(s[1], 1);
                            let (fv, _) = ws.intern_poly(&FockPoly::monomial(full));
                            let want = ws.apply(label, &fv);
                            let want = ws.to_poly(&want, 1, 1);
                            let (bv, _) = ws.intern_poly(&FockPoly::monomial(base.clone()));
                            let mut got = FockPoly::zero();
                            for t in 0u32..4 {
                                let mut inner = Vec::new();
                                let mut o = Monomial::one();
                                for (k, &x) in s.iter().enumerate() {
                                    if t >> k & 1 == 1 {
                                        inner.push(x);
                                    } else {
                                        o.mul_var_assign(x, 1);
                                    }
                                }
                                let id = ws.mark_set(&inner);
                                let img = ws.apply_marked(label, id, &bv);
                                got = got + &ws.to_poly(&img, 1, 1) * &FockPoly::monomial(o);
                            }
                            assert_eq!(got, want, "{label} with marks {s:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn accumulated_scale_is_tracked() {
        let p = Params::new(1, 0, Rational::new(1, 2), vec![Rational::new(1, 3)]).unwrap();
        let engine = Engine::new(&p);
        let mut ws = Workspace::new(&engine);
        assert_eq!(ws.scale(), 6);
        let (vid, base) = ws.intern_poly(&FockPoly::one().scale(&Rational::new(1, 5)));
        assert_eq!(base, 5);
        let once = ws.apply(CurrentLabel::h(1, 0), &vid);
        let twice = ws.apply(CurrentLabel::h(1, 0), &once);
        let lambda = Rational::new(1, 3);
        let want = FockPoly::one().scale(&(&(&lambda * &lambda) * &Rational::new(1, 5)));
        assert_eq!(ws.to_poly(&twice, base, 2), want);
    }
}

