//! Modewise verification of the defining relations, the iterated
//! `F`-bracket identity, the highest-weight property and weight
//! homogeneity, pointwise on finite sets of test vectors.

use rustc_hash::FxHashMap;
use std::fmt;
use std::rc::Rc;

use crate::algebra::{cartan_entry, weight_of, FockPoly, Mode, Monomial, Params, VarId};
use crate::error::{Error, Result};
use crate::oscillator::{ccr_check, Field, NormalWord};
use crate::rational::Rational;
use crate::report::Report;
use crate::sparse::{difference, integral, Coeff, SparseVec};
use crate::wakimoto::{CurrentKind, CurrentLabel, Engine};
use crate::workspace::{MarkId, Workspace};

/// Predicted value of a bracket: a combination of currents plus a multiple
/// of `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketExpectation {
    pub lhs: (CurrentLabel, CurrentLabel),
    pub rhs: Vec<(CurrentLabel, Rational)>,
    pub central: Rational,
}

impl fmt::Display for BracketExpectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}] = ", self.lhs.0, self.lhs.1)?;
        let mut parts: Vec<String> = self.rhs.iter().map(|(l, c)| format!("{c}*{l}")).collect();
        if !self.central.is_zero() {
            parts.push(format!("{}*c", self.central));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The expected bracket `[x, y]` from the modewise relations, or `None` when
/// the pair is only constrained through the Engel relation.
pub fn bracket_expectation(x: CurrentLabel, y: CurrentLabel) -> Option<BracketExpectation> {
    use CurrentKind::*;
    let zero = |rhs: Vec<(CurrentLabel, Rational)>, central: Rational| BracketExpectation {
        lhs: (x, y),
        rhs,
        central,
    };
    let (CurrentLabel::Mode { kind: k1, i, m }, CurrentLabel::Mode { kind: k2, i: j, m: p }) = (x, y) else {
        return Some(zero(Vec::new(), Rational::ZERO));
    };
    let aij = Rational::from_int(cartan_entry(i, j));
    let delta = m + p == 0;
    let with_kind = |kind, idx| CurrentLabel::Mode { kind, i: idx, m: m + p };
    Some(match (k1, k2) {
        (H, H) => zero(
            Vec::new(),
            if delta { &Rational::from_int(m as i64) * &aij } else { Rational::ZERO },
        ),
        (H, E) => zero(vec![(with_kind(E, j), aij)], Rational::ZERO),
        (E, H) => zero(vec![(with_kind(E, i), -aij)], Rational::ZERO),
        (H, F) => zero(vec![(with_kind(F, j), -aij)], Rational::ZERO),
        (F, H) => zero(vec![(with_kind(F, i), aij)], Rational::ZERO),
        (E, F) | (F, E) => {
            let sign = if k1 == E { Rational::ONE } else { -Rational::ONE };
            if i != j {
                zero(Vec::new(), Rational::ZERO)
            } else {
                let em = if k1 == E { m } else { p };
                let central = if delta { &sign * &Rational::from_int(em as i64) } else { Rational::ZERO };
                zero(vec![(with_kind(H, i), sign)], central)
            }
        }
        (E, E) | (F, F) => {
            if cartan_entry(i, j) == -1 {
                return None;
            }
            zero(Vec::new(), Rational::ZERO)
        }
    })
}

fn commutator(engine: &Engine, x: CurrentLabel, y: CurrentLabel, v: &FockPoly) -> FockPoly {
    let xy = engine.apply_unchecked(x, &engine.apply_unchecked(y, v));
    let yx = engine.apply_unchecked(y, &engine.apply_unchecked(x, v));
    xy - yx
}

fn expected_value(engine: &Engine, e: &BracketExpectation, v: &FockPoly) -> FockPoly {
    let mut out = v.scale(&(&e.central * &engine.params().level()));
    for (l, c) in &e.rhs {
        out.add_scaled(&engine.apply_unchecked(*l, v), c);
    }
    out
}

fn first_mismatch<F: FnMut(&FockPoly) -> (FockPoly, FockPoly)>(test_set: &[FockPoly], mut f: F) -> Option<String> {
    test_set.iter().find_map(|v| {
        let (got, want) = f(v);
        (got != want).then(|| format!("on {v}: got {got}, expected {want}"))
    })
}

/// Checks `[x, y] v = rhs v` for every `v` in the test set.
pub fn check_commutator(
    engine: &Engine,
    expectation: &BracketExpectation,
    test_set: &[FockPoly],
) -> Result<Report> {
    let (x, y) = expectation.lhs;
    x.check(engine.params())?;
    y.check(engine.params())?;
    for v in test_set {
        v.check(engine.params())?;
    }
    let mut rep = Report::new("commutator", Some(engine.params()));
    let witness = first_mismatch(test_set, |v| (commutator(engine, x, y, v), expected_value(engine, expectation, v)));
    rep.record(expectation.to_string(), witness);
    Ok(rep)
}

/// Checks `[X_{i,m1},[X_{i,m2},X_{j,p}]] = 0` for `X ∈ {E, F}`.
pub fn check_serre_engel(
    engine: &Engine,
    i: usize,
    j: usize,
    modes: (Mode, Mode, Mode),
    test_set: &[FockPoly],
) -> Result<Report> {
    let params = engine.params();
    if i == 0 || j == 0 || i > params.n() || j > params.n() {
        return Err(Error::IndexOutOfBounds(format!("({i},{j}) with n = {}", params.n())));
    }
    if cartan_entry(i, j) != -1 {
        return Err(Error::Precondition(format!(
            "the Engel relation needs (a_{i}|a_{j}) = -1, got {}",
            cartan_entry(i, j)
        )));
    }
    let mut rep = Report::new("engel", Some(params));
    let (m1, m2, p) = modes;
    for kind in [CurrentKind::E, CurrentKind::F] {
        let x1 = CurrentLabel::Mode { kind, i, m: m1 };
        let x2 = CurrentLabel::Mode { kind, i, m: m2 };
        let y = CurrentLabel::Mode { kind, i: j, m: p };
        let witness = first_mismatch(test_set, |v| {
            let inner = |w: &FockPoly| commutator(engine, x2, y, w);
            let got = engine.apply_unchecked(x1, &inner(v)) - inner(&engine.apply_unchecked(x1, v));
            (got, FockPoly::zero())
        });
        rep.record(format!("[{x1},[{x2},{y}]] = 0"), witness);
    }
    Ok(rep)
}

/// The operator `a_{j i,M} + Σ_{q>i} Σ_p a_{jq,p} a*_{i+1,q,M−p}` applied to `v`.
pub fn root_operator(engine: &Engine, i: usize, j: usize, total: Mode, v: &FockPoly) -> Result<FockPoly> {
    let ctx = engine.context();
    let n = engine.params().n();
    let mut out = ctx.apply_word(&NormalWord::new([Field::A { i: j, j: i }]), total, v)?;
    for q in i + 1..=n {
        let w = NormalWord::new([Field::A { i: j, j: q }, Field::AStar { i: i + 1, j: q }]);
        out.add_scaled(&ctx.apply_word(&w, total, v)?, &Rational::ONE);
    }
    Ok(out)
}

/// The right-nested bracket `[F_{i,modes[0]},[F_{i-1,modes[1]},…,F_{j,modes[last]}]]` on `v`.
pub fn nested_f_bracket(engine: &Engine, i: usize, j: usize, modes: &[Mode], v: &FockPoly) -> FockPoly {
    debug_assert_eq!(modes.len(), i - j + 1);
    if i == j {
        return engine.apply_unchecked(CurrentLabel::f(i, modes[0]), v);
    }
    let x = CurrentLabel::f(i, modes[0]);
    let inner = |w: &FockPoly| nested_f_bracket(engine, i - 1, j, &modes[1..], w);
    engine.apply_unchecked(x, &inner(v)) - inner(&engine.apply_unchecked(x, v))
}

/// Checks the iterated `F`-bracket identity at the given per-factor modes.
pub fn check_f_root_bracket(
    engine: &Engine,
    i: usize,
    j: usize,
    modes: &[Mode],
    test_set: &[FockPoly],
) -> Result<Report> {
    let n = engine.params().n();
    if !(1 <= j && j < i && i <= n) {
        return Err(Error::Precondition(format!("need 1 <= j < i <= n, got i = {i}, j = {j}, n = {n}")));
    }
    if modes.len() != i - j + 1 {
        return Err(Error::Precondition(format!("expected {} modes, got {}", i - j + 1, modes.len())));
    }
    let total: Mode = modes.iter().sum();
    let mut rep = Report::new("root-bracket", Some(engine.params()));
    let mut witness = None;
    for v in test_set {
        let got = nested_f_bracket(engine, i, j, modes, v);
        let want = root_operator(engine, i, j, total, v)?;
        if got != want {
            witness = Some(format!("on {v}: got {got}, expected {want}"));
            break;
        }
    }
    let ms: Vec<String> = modes.iter().map(ToString::to_string).collect();
    rep.record(format!("F[{i}..{j}]({}) total {total}", ms.join(",")), witness);
    Ok(rep)
}

/// Generators of the Borel subalgebra as listed for the highest-weight
/// property, with `|mode| ≤ window`.
pub fn borel_generators(params: &Params, window: Mode) -> Vec<CurrentLabel> {
    let (n, r) = (params.n(), params.r());
    let mut out = Vec::new();
    for i in 1..=n {
        let lo = if i <= r { 0 } else { -window };
        for m in lo..=window {
            out.push(CurrentLabel::e(i, m));
        }
    }
    for i in 1..=r {
        for m in 1..=window {
            out.push(CurrentLabel::f(i, m));
        }
    }
    for i in 1..=n {
        for m in 1..=window {
            out.push(CurrentLabel::h(i, m));
        }
    }
    out
}

fn vacuum_annihilation(engine: &Engine, labels: &[CurrentLabel], rep: &mut Report) {
    let vac = FockPoly::one();
    for &l in labels {
        let got = engine.apply_unchecked(l, &vac);
        rep.record(format!("{l} kills vacuum"), (!got.is_zero()).then(|| format!("{l}(1) = {got}")));
    }
}

fn vacuum_eigen_cases(engine: &Engine, rep: &mut Report) {
    let params = engine.params();
    let vac = FockPoly::one();
    for i in 1..=params.n() {
        let got = engine.apply_unchecked(CurrentLabel::h(i, 0), &vac);
        let want = vac.scale(params.lambda_i(i));
        rep.record(format!("H({i},0) eigenvalue"), (got != want).then(|| format!("got {got}, expected {want}")));
    }
    let got = engine.apply_unchecked(CurrentLabel::C, &vac);
    let want = vac.scale(&params.level());
    rep.record("c eigenvalue", (got != want).then(|| format!("got {got}, expected {want}")));
}

/// Depth-2 brackets `[E_{i,m},E_{i+1,p}]` among the simple currents with
/// `i > r`, applied to the vacuum.
fn depth_two_cases(engine: &Engine, window: Mode, rep: &mut Report) {
    let (n, r) = (engine.params().n(), engine.params().r());
    let vac = FockPoly::one();
    for i in r + 1..n {
        for m in -window..=window {
            for p in -window..=window {
                let (x, y) = (CurrentLabel::e(i, m), CurrentLabel::e(i + 1, p));
                let got = commutator(engine, x, y, &vac);
                rep.record(format!("[{x},{y}] kills vacuum"), (!got.is_zero()).then(|| format!("got {got}")));
            }
        }
    }
}

/// The highest-weight property: the listed Borel generators kill the vacuum
/// and the Cartan currents and `c` act by the expected scalars.
pub fn check_highest_weight(params: &Params, mode_window: Mode) -> Report {
    let engine = Engine::new(params);
    let mut rep = Report::new("highest-weight", Some(params));
    vacuum_annihilation(&engine, &borel_generators(params, mode_window), &mut rep);
    depth_two_cases(&engine, mode_window, &mut rep);
    vacuum_eigen_cases(&engine, &mut rep);
    rep
}

/// Generators that kill the vacuum of the realized module: for `i ≤ r` the
/// lowering currents `F_{i,m}` with `m ≥ 0` and the raising currents
/// `E_{i,m}` with `m ≥ 1`, together with `E_{i,m}` (`i > r`, all `m`) and
/// `H_{i,m}` (`m ≥ 1`).
pub fn realized_borel_generators(params: &Params, window: Mode) -> Vec<CurrentLabel> {
    let (n, r) = (params.n(), params.r());
    let mut out = Vec::new();
    for i in 1..=n {
        let lo = if i <= r { 1 } else { -window };
        for m in lo..=window {
            out.push(CurrentLabel::e(i, m));
        }
    }
    for i in 1..=r {
        for m in 0..=window {
            out.push(CurrentLabel::f(i, m));
        }
    }
    for i in 1..=n {
        for m in 1..=window {
            out.push(CurrentLabel::h(i, m));
        }
    }
    out
}

/// The vacuum conditions actually satisfied by the realization (see
/// [`realized_borel_generators`]).
pub fn check_realized_highest_weight(params: &Params, mode_window: Mode) -> Report {
    let engine = Engine::new(params);
    let mut rep = Report::new("realized-highest-weight", Some(params));
    vacuum_annihilation(&engine, &realized_borel_generators(params, mode_window), &mut rep);
    depth_two_cases(&engine, mode_window, &mut rep);
    vacuum_eigen_cases(&engine, &mut rep);
    rep
}

/// All Fock variables with `|mode| ≤ window`.
pub fn variables_in_window(params: &Params, window: Mode) -> Vec<VarId> {
    let n = params.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            for m in -window..=window {
                out.push(VarId::x(i, j, m));
            }
        }
    }
    for i in 1..=n {
        for m in 1..=window {
            out.push(VarId::y(i, m));
        }
    }
    out.sort();
    out
}

/// Every monomial of degree `≤ degree` in the given variables, vacuum first.
pub fn monomials_up_to_degree(vars: &[VarId], degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (k, &v) in vars.iter().enumerate().skip(*start) {
                let mm = m.mul_var(v);
                out.push(mm.clone());
                next.push((mm, k));
            }
        }
        frontier = next;
    }
    out
}

/// Test vectors: monomials of degree `≤ degree` in variables with
/// `|mode| ≤ window`.
pub fn test_monomials(params: &Params, window: Mode, degree: u32) -> Vec<FockPoly> {
    monomials_up_to_degree(&variables_in_window(params, window), degree)
        .into_iter()
        .map(FockPoly::monomial)
        .collect()
}

/// All current labels with `|mode| ≤ window`.
pub fn currents_in_window(params: &Params, window: Mode) -> Vec<CurrentLabel> {
    let mut out = Vec::new();
    for kind in [CurrentKind::E, CurrentKind::F, CurrentKind::H] {
        for i in 1..=params.n() {
            for m in -window..=window {
                out.push(CurrentLabel::Mode { kind, i, m });
            }
        }
    }
    out
}

/// Every current applied to every test monomial is homogeneous of the
/// predicted weight.
pub fn check_weight_homogeneity(engine: &Engine, window: Mode, test_set: &[Monomial]) -> Report {
    let params = engine.params();
    let mut rep = Report::new("weight-homogeneity", Some(params));
    for l in currents_in_window(params, window) {
        let shift = l.weight(params.n());
        let witness = test_set.iter().find_map(|mu| {
            let want = &weight_of(mu, params).expect("in bounds") + &shift;
            let img = engine.apply_unchecked(l, &FockPoly::monomial(mu.clone()));
            let bad = img
                .monomials()
                .find(|nu| weight_of(nu, params).expect("in bounds") != want)
                .map(|nu| format!("{l} on {mu} produces {nu}, expected weight {want}"));
            bad
        });
        rep.record(format!("{l} homogeneous"), witness);
    }
    rep
}

/// Checks that `H_{i,0}` acts on each test monomial by
/// `λ_i + (α_i | offset)`.
pub fn check_cartan_eigenvalues(engine: &Engine, test_set: &[Monomial]) -> Report {
    let params = engine.params();
    let mut rep = Report::new("cartan-eigenvalues", Some(params));
    for i in 1..=params.n() {
        let witness = test_set.iter().find_map(|mu| {
            let w = weight_of(mu, params).expect("in bounds");
            let ev = params.lambda_i(i) + &Rational::from_int(w.pair_simple(i));
            let v = FockPoly::monomial(mu.clone());
            let got = engine.apply_unchecked(CurrentLabel::h(i, 0), &v);
            (got != v.scale(&ev)).then(|| format!("H({i},0) on {mu}: got {got}, expected {ev}"))
        });
        rep.record(format!("H({i},0) eigenvalue law"), witness);
    }
    rep
}

/// Every mode split of `total` over `parts` factors with entries in
/// `[-window, window]`.
fn mode_splits(parts: usize, total: Mode, window: Mode) -> Vec<Vec<Mode>> {
    if parts == 1 {
        return if total.abs() <= window { vec![vec![total]] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for m in -window..=window {
        for mut rest in mode_splits(parts - 1, total - m, window) {
            rest.insert(0, m);
            out.push(rest);
        }
    }
    out
}

/// Runs the root-bracket identity for all `1 ≤ j < i ≤ n`, totals
/// `|M| ≤ total_window`, and a few representative mode splits.
pub fn root_bracket_suite(engine: &Engine, total_window: Mode, test_set: &[FockPoly]) -> Report {
    let n = engine.params().n();
    let mut rep = Report::new("root-bracket", Some(engine.params()));
    for i in 2..=n {
        for j in 1..i {
            let parts = i - j + 1;
            for total in -total_window..=total_window {
                let mut splits = vec![];
                let mut last_heavy = vec![0; parts];
                last_heavy[parts - 1] = total;
                splits.push(last_heavy);
                let mut first_heavy = vec![0; parts];
                first_heavy[0] = total;
                splits.push(first_heavy);
                for s in mode_splits(parts, total, 1) {
                    splits.push(s);
                }
                splits.sort();
                splits.dedup();
                for s in splits {
                    let r = check_f_root_bracket(engine, i, j, &s, test_set).expect("admissible indices");
                    for c in r.cases {
                        rep.cases.push(c);
                    }
                }
            }
        }
    }
    rep
}

/// Every multiset of at most `degree` test variables, smallest first, with
/// its splits into two complementary parts.
///
/// A relation `D = 0` holds on all monomials of degree `≤ degree` in the
/// test variables exactly when `[…[D, x_1], …, x_k]·1 = 0` for every such
/// multiset `{x_1 … x_k}`: by Leibniz, `D(x_S) = Σ_{T ⊆ S} x_{S∖T}·D^T 1`,
/// which is triangular in `S`. The suites check the second form, which
/// shares all work between test monomials.
struct MarkTable {
    sets: Vec<Vec<VarId>>,
    ids: Vec<MarkId>,
    splits: Vec<Vec<(usize, usize)>>,
}

impl MarkTable {
    fn new(ws: &mut Workspace, vars: &[VarId], degree: u32) -> Self {
        let mut index: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
        let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        for _ in 0..degree {
            let mut next = Vec::new();
            for s in &frontier {
                let from = s.last().copied().unwrap_or(0);
                for k in from..vars.len() {
                    let mut t: Vec<usize> = s.clone();
                    t.push(k);
                    next.push(t);
                }
            }
            sets.extend(next.iter().cloned());
            frontier = next;
        }
        for (k, s) in sets.iter().enumerate() {
            index.insert(s.clone(), k);
        }
        let splits = sets
            .iter()
            .map(|s| {
                (0u32..1 << s.len())
                    .map(|mask| {
                        let (mut left, mut right) = (Vec::new(), Vec::new());
                        for (q, &x) in s.iter().enumerate() {
                            if mask >> q & 1 == 1 {
                                left.push(x);
                            } else {
                                right.push(x);
                            }
                        }
                        (index[&left], index[&right])
                    })
                    .collect()
            })
            .collect();
        let sets: Vec<Vec<VarId>> = sets.iter().map(|s| s.iter().map(|&k| vars[k]).collect()).collect();
        let ids = sets.iter().map(|s| ws.mark_set(s)).collect();
        MarkTable { sets, ids, splits }
    }

    fn monomial(&self, s: usize) -> FockPoly {
        let mut m = Monomial::one();
        for &x in &self.sets[s] {
            m.mul_var_assign(x, 1);
        }
        FockPoly::monomial(m)
    }
}

/// `X^S 1` for every mark set `S`, per current.
struct Singles {
    one: SparseVec,
    cache: FxHashMap<CurrentLabel, Rc<Vec<SparseVec>>>,
}

impl Singles {
    fn new(ws: &mut Workspace) -> Self {
        let (one, _) = ws.intern_poly(&FockPoly::one());
        Singles {
            one,
            cache: FxHashMap::default(),
        }
    }

    fn get(&mut self, ws: &mut Workspace, marks: &MarkTable, label: CurrentLabel) -> Rc<Vec<SparseVec>> {
        let one = &self.one;
        Rc::clone(
            self.cache
                .entry(label)
                .or_insert_with(|| Rc::new(marks.ids.iter().map(|&id| ws.apply_marked(label, id, one)).collect())),
        )
    }
}

/// `(XY)^S 1 = Σ X^{S₁} Y^{S₂} 1` over the splits of `S`, for every `S`.
fn pair_products(ws: &mut Workspace, marks: &MarkTable, x: CurrentLabel, ys: &[SparseVec]) -> Vec<SparseVec> {
    marks
        .splits
        .iter()
        .map(|sp| {
            let parts: Vec<SparseVec> =
                sp.iter().filter(|(_, b)| !ys[*b].is_empty()).map(|&(a, b)| ws.apply_marked(x, marks.ids[a], &ys[b])).collect();
            let refs: Vec<(&SparseVec, Coeff)> = parts.iter().map(|p| (p, 1)).collect();
            ws.combine(&refs)
        })
        .collect()
}

/// The relations `(R1)–(R5)` for every pair of currents with modes in the
/// window, on every monomial of degree `≤ degree` in `vars`.
pub fn bracket_suite(engine: &Engine, window: Mode, vars: &[VarId], degree: u32) -> Report {
    let params = engine.params();
    let labels = currents_in_window(params, window);
    let mut ws = Workspace::new(engine);
    ws.set_mode_batch(window);
    let marks = MarkTable::new(&mut ws, vars, degree);
    let mut singles = Singles::new(&mut ws);
    let d = Rational::from_int(ws.scale());
    let d2 = &d * &d;
    let mut rep = Report::new("brackets", Some(params));
    for a in 0..labels.len() {
        for b in a..labels.len() {
            let (x, y) = (labels[a], labels[b]);
            let Some(e) = bracket_expectation(x, y) else { continue };
            let xs = singles.get(&mut ws, &marks, x);
            let ys = singles.get(&mut ws, &marks, y);
            let rhs: Vec<(Rc<Vec<SparseVec>>, Coeff)> = e
                .rhs
                .iter()
                .map(|(l, c)| {
                    let c = integral(&(c * &d)).expect("integral bracket coefficients");
                    (singles.get(&mut ws, &marks, *l), -c)
                })
                .collect();
            let central = integral(&(&(&e.central * &params.level()) * &d2)).expect("integral central term");
            let mut witness = None;
            for (s, sp) in marks.splits.iter().enumerate() {
                let mut parts: Vec<(SparseVec, Coeff)> = Vec::new();
                for &(p, q) in sp {
                    if !ys[q].is_empty() {
                        parts.push((ws.apply_marked(x, marks.ids[p], &ys[q]), 1));
                    }
                    if !xs[q].is_empty() {
                        parts.push((ws.apply_marked(y, marks.ids[p], &xs[q]), -1));
                    }
                }
                for (img, c) in &rhs {
                    parts.push((img[s].clone(), *c));
                }
                if s == 0 {
                    parts.push((singles.one.clone(), -central));
                }
                let refs: Vec<(&SparseVec, Coeff)> = parts.iter().map(|(v, c)| (v, *c)).collect();
                if !ws.combine(&refs).is_empty() {
                    let v = marks.monomial(s);
                    let got = commutator(engine, x, y, &v);
                    let want = expected_value(engine, &e, &v);
                    witness = Some(format!("on {v}: got {got}, expected {want}"));
                    break;
                }
            }
            rep.record(e.to_string(), witness);
        }
    }
    rep
}

/// The Engel relations `(R6)` for every admissible pair and mode triple, on
/// every monomial of degree `≤ degree` in `vars`.
///
/// Triples are taken with `m1 ≤ m2`; the remaining ones follow from these
/// and `[X_{i,m1}, X_{i,m2}] = 0`, which [`bracket_suite`] checks.
pub fn engel_suite(engine: &Engine, window: Mode, vars: &[VarId], degree: u32) -> Report {
    let n = engine.params().n();
    let modes: Vec<Mode> = (-window..=window).collect();
    let mut rep = Report::new("engel", Some(engine.params()));
    for kind in [CurrentKind::E, CurrentKind::F] {
        for i in 1..=n {
            for j in 1..=n {
                if cartan_entry(i, j) != -1 {
                    continue;
                }
                let mut ws = Workspace::new(engine);
                ws.set_mode_batch(window);
                let marks = MarkTable::new(&mut ws, vars, degree);
                let mut singles = Singles::new(&mut ws);
                let xl = |m: Mode| CurrentLabel::Mode { kind, i, m };
                let yl = |m: Mode| CurrentLabel::Mode { kind, i: j, m };
                let mut products: FxHashMap<(CurrentLabel, CurrentLabel), Rc<Vec<SparseVec>>> = FxHashMap::default();
                let mut product = |ws: &mut Workspace, singles: &mut Singles, p: CurrentLabel, q: CurrentLabel| {
                    if let Some(v) = products.get(&(p, q)) {
                        return Rc::clone(v);
                    }
                    let qs = singles.get(ws, &marks, q);
                    let v = Rc::new(pair_products(ws, &marks, p, &qs));
                    products.insert((p, q), Rc::clone(&v));
                    v
                };
                for (a, &m1) in modes.iter().enumerate() {
                    for &m2 in &modes[a..] {
                        for &p in &modes {
                            let (x1, x2, y) = (xl(m1), xl(m2), yl(p));
                            // [X1,[X2,Y]] = X1 (X2 Y − Y X2) − X2 (Y X1) + Y (X2 X1)
                            let x2y = product(&mut ws, &mut singles, x2, y);
                            let yx2 = product(&mut ws, &mut singles, y, x2);
                            let yx1 = product(&mut ws, &mut singles, y, x1);
                            let x2x1 = product(&mut ws, &mut singles, x2, x1);
                            let z: Vec<SparseVec> = x2y.iter().zip(yx2.iter()).map(|(u, w)| difference(u, w)).collect();
                            let mut witness = None;
                            for sp in &marks.splits {
                                let mut parts: Vec<SparseVec> = Vec::new();
                                let mut signs: Vec<Coeff> = Vec::new();
                                for &(s1, s2) in sp {
                                    let id = marks.ids[s1];
                                    for (op, src, sign) in [(x1, &z[s2], 1), (x2, &yx1[s2], -1), (y, &x2x1[s2], 1)] {
                                        if !src.is_empty() {
                                            parts.push(ws.apply_marked(op, id, src));
                                            signs.push(sign);
                                        }
                                    }
                                }
                                let refs: Vec<(&SparseVec, Coeff)> = parts.iter().zip(&signs).map(|(v, c)| (v, *c)).collect();
                                if !ws.combine(&refs).is_empty() {
                                    let s = marks.splits.iter().position(|t| std::ptr::eq(t, sp)).expect("own split");
                                    let v = marks.monomial(s);
                                    let got = engine.apply_unchecked(x1, &commutator(engine, x2, y, &v))
                                        - commutator(engine, x2, y, &engine.apply_unchecked(x1, &v));
                                    witness = Some(format!("on {v}: got {got}, expected 0"));
                                    break;
                                }
                            }
                            rep.record(format!("[{x1},[{x2},{y}]] = 0"), witness);
                        }
                    }
                }
            }
        }
    }
    rep
}

/// The full relation suite: oscillator relations, `(R1)–(R6)`, the
/// root-bracket identity, the highest-weight property, weight homogeneity and
/// the Cartan eigenvalue law.
pub fn run_suite(params: &Params, mode_window: Mode, degree_bound: u32) -> Report {
    let engine = Engine::new(params);
    let vars = variables_in_window(params, mode_window);
    let monos = monomials_up_to_degree(&vars, degree_bound);
    let test_set: Vec<FockPoly> = monos.iter().cloned().map(FockPoly::monomial).collect();
    let mut rep = Report::new("relations", Some(params));
    rep.absorb(ccr_check(params, mode_window, &test_set));
    rep.absorb(bracket_suite(&engine, mode_window, &vars, degree_bound));
    rep.absorb(engel_suite(&engine, mode_window, &vars, degree_bound));
    rep.absorb(root_bracket_suite(&engine, mode_window.min(2), &test_set));
    rep.absorb(check_weight_homogeneity(&engine, mode_window, &monos));
    rep.absorb(check_cartan_eigenvalues(&engine, &monos));
    rep.absorb(check_highest_weight(params, mode_window));
    rep
}
