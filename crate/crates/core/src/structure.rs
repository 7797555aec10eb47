//! Structural checks on the realization: the generator census behind the
//! character comparison, constructive generation of Fock monomials from the
//! embedded smaller Fock space, and a bounded submodule probe.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use crate::algebra::var_weight;
use crate::algebra::{weight_of, FockPoly, Mode, Monomial, Params, VarId, Weight};
use crate::error::{Error, Result};
use crate::linalg::row_reduce;
use crate::rational::Rational;
use crate::relations::{monomials_up_to_degree, nested_f_bracket, variables_in_window};
use crate::report::{CaseStatus, Report};
use crate::wakimoto::{CurrentKind, CurrentLabel, Engine};

/// A basis element of the chosen complement of the Borel subalgebra.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComplementGenerator {
    /// `−α_[i,j] ⊗ t^m` with `j > r`, any `m`.
    NegRootFull { i: usize, j: usize, m: Mode },
    /// `+α_[i,j] ⊗ t^m` with `j ≤ r`, `m < 0`.
    PosRootNeg { i: usize, j: usize, m: Mode },
    /// `−α_[i,j] ⊗ t^m` with `j ≤ r`, `m ≤ 0`.
    NegRootNonpos { i: usize, j: usize, m: Mode },
    /// `h_i ⊗ t^m` with `m < 0`.
    CartanNeg { i: usize, m: Mode },
}

impl ComplementGenerator {
    pub fn weight(&self, n: usize) -> Weight {
        match *self {
            ComplementGenerator::NegRootFull { i, j, m } | ComplementGenerator::NegRootNonpos { i, j, m } => {
                Weight::root_interval(n, i, j, -1, m as i64)
            }
            ComplementGenerator::PosRootNeg { i, j, m } => Weight::root_interval(n, i, j, 1, m as i64),
            ComplementGenerator::CartanNeg { m, .. } => Weight {
                root_offset: vec![0; n],
                delta_deg: m as i64,
            },
        }
    }
}

/// Complement generators with `|m| ≤ window`.
pub fn complement_generators(params: &Params, window: Mode) -> Vec<ComplementGenerator> {
    let (n, r) = (params.n(), params.r());
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            for m in -window..=window {
                if j > r {
                    out.push(ComplementGenerator::NegRootFull { i, j, m });
                } else {
                    if m < 0 {
                        out.push(ComplementGenerator::PosRootNeg { i, j, m });
                    }
                    if m <= 0 {
                        out.push(ComplementGenerator::NegRootNonpos { i, j, m });
                    }
                }
            }
        }
        for m in -window..0 {
            out.push(ComplementGenerator::CartanNeg { i, m });
        }
    }
    out
}

/// Multiplicities per weight.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WeightCensus(pub BTreeMap<Weight, u64>);

impl WeightCensus {
    pub fn from_weights<I: IntoIterator<Item = Weight>>(weights: I) -> Self {
        let mut map = BTreeMap::new();
        for w in weights {
            *map.entry(w).or_insert(0) += 1;
        }
        WeightCensus(map)
    }

    pub fn get(&self, w: &Weight) -> u64 {
        self.0.get(w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, u64)> {
        self.0.iter().map(|(w, c)| (w, *c))
    }

    /// Weights whose multiplicities differ, with both counts.
    pub fn differences(&self, other: &WeightCensus) -> Vec<(Weight, u64, u64)> {
        let keys: std::collections::BTreeSet<&Weight> = self.0.keys().chain(other.0.keys()).collect();
        keys.into_iter()
            .filter_map(|w| {
                let (a, b) = (self.get(w), other.get(w));
                (a != b).then(|| (w.clone(), a, b))
            })
            .collect()
    }
}

impl fmt::Display for WeightCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(w, c)| format!("({w}):{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub fn complement_census(params: &Params, mode_window: Mode) -> WeightCensus {
    let n = params.n();
    WeightCensus::from_weights(complement_generators(params, mode_window).iter().map(|g| g.weight(n)))
}

pub fn fock_variable_census(params: &Params, mode_window: Mode) -> WeightCensus {
    WeightCensus::from_weights(
        variables_in_window(params, mode_window)
            .into_iter()
            .map(|v| var_weight(v, params)),
    )
}

/// Census of the complement of the subalgebra that actually annihilates the
/// vacuum: for `j ≤ r` the positive roots sit at `m ≤ 0` and the negative
/// roots at `m < 0`.
pub fn realized_complement_census(params: &Params, mode_window: Mode) -> WeightCensus {
    let (n, r) = (params.n(), params.r());
    let mut ws = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            for m in -mode_window..=mode_window {
                if j > r {
                    ws.push(Weight::root_interval(n, i, j, -1, m as i64));
                } else {
                    if m <= 0 {
                        ws.push(Weight::root_interval(n, i, j, 1, m as i64));
                    }
                    if m < 0 {
                        ws.push(Weight::root_interval(n, i, j, -1, m as i64));
                    }
                }
            }
        }
        for m in -mode_window..0 {
            ws.push(Weight {
                root_offset: vec![0; n],
                delta_deg: m as i64,
            });
        }
    }
    WeightCensus::from_weights(ws)
}

/// Counts monomials of degree `≤ max_degree` in generators with the given
/// census, per weight, keeping weights with `|δ-degree| ≤ delta_bound`.
pub fn monomial_census(census: &WeightCensus, max_degree: u32, delta_bound: i64) -> WeightCensus {
    let n = census.0.keys().next().map_or(0, |w| w.root_offset.len());
    let mut table: BTreeMap<(u32, Weight), u64> = BTreeMap::new();
    table.insert((0, Weight::zero(n)), 1);
    for (w, k) in census.iter() {
        let mut next = BTreeMap::new();
        for ((d, acc), count) in &table {
            let mut shifted = acc.clone();
            let mut ways = 1u64;
            for t in 0..=(max_degree - d) {
                if t > 0 {
                    shifted = &shifted + w;
                    ways = ways * (k + t as u64 - 1) / t as u64;
                }
                *next.entry((d + t, shifted.clone())).or_insert(0) += count * ways;
            }
        }
        table = next;
    }
    let mut out = BTreeMap::new();
    for ((_, w), c) in table {
        if w.delta_deg.abs() <= delta_bound {
            *out.entry(w).or_insert(0) += c;
        }
    }
    WeightCensus(out)
}

fn census_case(rep: &mut Report, id: &str, left: &WeightCensus, right: &WeightCensus) {
    let diff = left.differences(right);
    let witness = (!diff.is_empty()).then(|| {
        let shown: Vec<String> = diff.iter().take(6).map(|(w, a, b)| format!("({w}): {a} vs {b}")).collect();
        format!("{} weights differ, e.g. {}", diff.len(), shown.join("; "))
    });
    rep.record(id, witness);
}

/// Compares the complement census with the Fock-variable census, then the
/// monomial counts they induce up to degree and `|δ-degree|` at most
/// `delta_bound`. A diagnostic case compares the Fock census with the
/// complement of the subalgebra that actually kills the vacuum.
pub fn character_compare(params: &Params, mode_window: Mode, delta_bound: u32) -> Report {
    let mut rep = Report::new("character-compare", Some(params));
    let comp = complement_census(params, mode_window);
    let fock = fock_variable_census(params, mode_window);
    census_case(&mut rep, "complement census = Fock census", &comp, &fock);
    let d = delta_bound as i64;
    census_case(
        &mut rep,
        "monomial counts per weight",
        &monomial_census(&comp, delta_bound, d),
        &monomial_census(&fock, delta_bound, d),
    );
    census_case(
        &mut rep,
        "realized complement census = Fock census",
        &realized_complement_census(params, mode_window),
        &fock,
    );
    rep
}

/// Whether a variable belongs to the embedded Fock space of rank `r`.
pub fn in_small_fock(v: VarId, r: usize) -> bool {
    match v {
        VarId::X { j, .. } => (j as usize) <= r,
        VarId::Y { i, .. } => (i as usize) <= r,
    }
}

pub fn monomial_in_small_fock(mu: &Monomial, r: usize) -> bool {
    mu.vars().all(|v| in_small_fock(v, r))
}

/// An operator applied by a witness program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    Current(CurrentLabel),
    /// `[F_{top,modes[0]},[F_{top−1,modes[1]},…,F_{bottom,modes[last]}]]`.
    FBracket { top: usize, bottom: usize, modes: Vec<Mode> },
}

impl Operator {
    pub fn apply(&self, engine: &Engine, v: &FockPoly) -> FockPoly {
        match self {
            Operator::Current(l) => engine.apply(*l, v).expect("label checked at construction"),
            Operator::FBracket { top, bottom, modes } => nested_f_bracket(engine, *top, *bottom, modes, v),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Current(l) => write!(f, "{l}"),
            Operator::FBracket { top, bottom, modes } => {
                let ms: Vec<String> = modes.iter().map(ToString::to_string).collect();
                write!(f, "F[{top}..{bottom}]({})", ms.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Start from an element of the embedded Fock space.
    Seed(FockPoly),
    Apply(Operator),
    /// Subtract an element of the embedded Fock space.
    SubtractSeed(FockPoly),
    /// Subtract `coeff` times the output of another program.
    Subtract { coeff: Rational, program: Rc<WitnessProgram> },
    Scale(Rational),
}

/// Instructions that produce `target` from the vacuum sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessProgram {
    pub target: Monomial,
    pub steps: Vec<Step>,
}

#[derive(Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
enum StepJson {
    Seed { vector: String },
    Apply { operator: String },
    SubtractSeed { vector: String },
    Subtract { coeff: String, program: ProgramJson },
    Scale { factor: String },
}

#[derive(Serialize)]
struct ProgramJson {
    target: String,
    steps: Vec<StepJson>,
}

impl WitnessProgram {
    /// Runs the program. Subprograms whose targets are in `verified` are
    /// replaced by their targets; every program run to completion and found
    /// to reproduce its target is added to `verified`.
    pub fn run(&self, engine: &Engine, verified: &mut HashSet<Monomial>) -> FockPoly {
        let mut acc = FockPoly::zero();
        for step in &self.steps {
            match step {
                Step::Seed(p) => acc = p.clone(),
                Step::Apply(op) => acc = op.apply(engine, &acc),
                Step::SubtractSeed(p) => acc.add_scaled(p, &-&Rational::ONE),
                Step::Subtract { coeff, program } => {
                    let sub = if verified.contains(&program.target) {
                        FockPoly::monomial(program.target.clone())
                    } else {
                        program.run(engine, verified)
                    };
                    acc.add_scaled(&sub, &-coeff);
                }
                Step::Scale(c) => acc = acc.scale(c),
            }
        }
        if acc == FockPoly::monomial(self.target.clone()) {
            verified.insert(self.target.clone());
        }
        acc
    }

    pub fn execute(&self, engine: &Engine) -> FockPoly {
        self.run(engine, &mut HashSet::new())
    }

    /// Number of instructions, counting nested programs.
    pub fn size(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Subtract { program, .. } => 1 + program.size(),
                _ => 1,
            })
            .sum()
    }

    fn json(&self) -> ProgramJson {
        ProgramJson {
            target: self.target.to_string(),
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    Step::Seed(p) => StepJson::Seed { vector: p.to_string() },
                    Step::Apply(op) => StepJson::Apply { operator: op.to_string() },
                    Step::SubtractSeed(p) => StepJson::SubtractSeed { vector: p.to_string() },
                    Step::Subtract { coeff, program } => StepJson::Subtract {
                        coeff: coeff.to_string(),
                        program: program.json(),
                    },
                    Step::Scale(c) => StepJson::Scale { factor: c.to_string() },
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.json()).expect("serializable")
    }
}

impl fmt::Display for WitnessProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Seed(p) => format!("seed {p}"),
                Step::Apply(op) => format!("apply {op}"),
                Step::SubtractSeed(p) => format!("subtract {p}"),
                Step::Subtract { coeff, program } => format!("subtract {coeff} * {{{program}}}"),
                Step::Scale(c) => format!("scale {c}"),
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Builds witness programs, sharing subprograms between targets.
pub struct Generator<'a> {
    engine: &'a Engine,
    built: HashMap<Monomial, Rc<WitnessProgram>>,
    active: HashSet<Monomial>,
}

impl<'a> Generator<'a> {
    pub fn new(engine: &'a Engine) -> Self {
        Generator {
            engine,
            built: HashMap::new(),
            active: HashSet::new(),
        }
    }

    fn creation_operator(&self, v: VarId) -> Operator {
        match v {
            VarId::X { i, j, m } if i == j => Operator::Current(CurrentLabel::f(j as usize, m)),
            VarId::X { i, j, m } => {
                let mut modes = vec![0; (j - i) as usize + 1];
                modes[0] = m;
                Operator::FBracket {
                    top: j as usize,
                    bottom: i as usize,
                    modes,
                }
            }
            VarId::Y { i, m } => Operator::Current(CurrentLabel::h(i as usize, -m)),
        }
    }

    /// Variables to peel off last, most preferred first.
    fn candidates(&self, mu: &Monomial) -> Vec<VarId> {
        let r = self.engine.params().r();
        let mut vs: Vec<VarId> = mu.vars().filter(|&v| !in_small_fock(v, r)).collect();
        vs.sort_by_key(|v| match *v {
            VarId::X { i, j, m } => (0, -(j as i64), -(i as i64), m),
            VarId::Y { i, m } => (1, -(i as i64), 0, m),
        });
        vs
    }

    /// A verified program producing `target`.
    pub fn witness(&mut self, target: &Monomial) -> Result<Rc<WitnessProgram>> {
        target.check(self.engine.params())?;
        let prog = self
            .build(target)
            .ok_or_else(|| Error::Unsupported(format!("no generation program found for {target}")))?;
        if prog.execute(self.engine) != FockPoly::monomial(target.clone()) {
            return Err(Error::Unsupported(format!("program for {target} does not reproduce it")));
        }
        Ok(prog)
    }

    fn build(&mut self, mu: &Monomial) -> Option<Rc<WitnessProgram>> {
        if let Some(p) = self.built.get(mu) {
            return Some(p.clone());
        }
        let r = self.engine.params().r();
        if monomial_in_small_fock(mu, r) {
            let p = Rc::new(WitnessProgram {
                target: mu.clone(),
                steps: vec![Step::Seed(FockPoly::monomial(mu.clone()))],
            });
            self.built.insert(mu.clone(), p.clone());
            return Some(p);
        }
        if !self.active.insert(mu.clone()) {
            return None;
        }
        let mut found = None;
        for v in self.candidates(mu) {
            if let Some(p) = self.peel(mu, v) {
                found = Some(Rc::new(p));
                break;
            }
        }
        self.active.remove(mu);
        if let Some(p) = &found {
            self.built.insert(mu.clone(), p.clone());
        }
        found
    }

    fn peel(&mut self, mu: &Monomial, v: VarId) -> Option<WitnessProgram> {
        let rest = mu.div(&Monomial::var(v))?;
        let inner = self.build(&rest)?;
        let op = self.creation_operator(v);
        let image = op.apply(self.engine, &FockPoly::monomial(rest));
        let lead = image.coeff(mu);
        if lead.is_zero() {
            return None;
        }
        let r = self.engine.params().r();
        let mut steps = inner.steps.clone();
        steps.push(Step::Apply(op));
        let mut small = FockPoly::zero();
        let mut others = Vec::new();
        for (nu, c) in image.terms() {
            if nu == mu {
                continue;
            }
            if monomial_in_small_fock(nu, r) {
                small.add_term(nu.clone(), c.clone());
            } else {
                others.push((nu.clone(), c.clone()));
            }
        }
        if !small.is_zero() {
            steps.push(Step::SubtractSeed(small));
        }
        for (nu, c) in others {
            let program = self.build(&nu)?;
            steps.push(Step::Subtract { coeff: c, program });
        }
        if !lead.is_one() {
            steps.push(Step::Scale(lead.recip().expect("nonzero")));
        }
        Some(WitnessProgram {
            target: mu.clone(),
            steps,
        })
    }
}

/// A verified witness program for a single target monomial.
pub fn generation_witness(target: &Monomial, params: &Params) -> Result<Rc<WitnessProgram>> {
    let engine = Engine::new(params);
    Generator::new(&engine).witness(target)
}

/// Builds and executes a witness program for every monomial of degree
/// `≤ degree_bound` in the variables with `|mode| ≤ mode_window`.
pub fn generation_check(params: &Params, mode_window: Mode, degree_bound: u32) -> Report {
    let engine = Engine::new(params);
    let mut generator = Generator::new(&engine);
    let mut verified = HashSet::new();
    let mut rep = Report::new("generation", Some(params));
    let vars = variables_in_window(params, mode_window);
    for mu in monomials_up_to_degree(&vars, degree_bound) {
        let witness = match generator.build(&mu) {
            None => Some("no program found".to_string()),
            Some(p) => {
                let got = p.run(&engine, &mut verified);
                (got != FockPoly::monomial(mu.clone())).then(|| format!("program {p} produced {got}"))
            }
        };
        rep.record(format!("reach {mu}"), witness);
    }
    rep
}

/// Outcome of a bounded submodule probe.
#[derive(Clone, Debug)]
pub struct Probe {
    /// A nonzero vector in both the generated span and the embedded Fock
    /// space, if one was found.
    pub found: Option<FockPoly>,
    pub span_dim: usize,
    pub report: Report,
}

fn grade_ok(v: &FockPoly, params: &Params, grade_bound: i64) -> bool {
    v.monomials().all(|mu| {
        mu.vars().all(|x| i64::from(x.mode().abs()) <= grade_bound)
            && weight_of(mu, params).map_or(false, |w| w.delta_deg.abs() <= grade_bound)
    })
}

/// Searches the span of `{w·v}` over current words `w` of length
/// `≤ length_bound` with modes in `[−mode_window, mode_window]` for a nonzero
/// vector supported on the embedded Fock space. Images with a variable mode
/// or `δ`-degree beyond `grade_bound` are discarded. Finding nothing is
/// reported as inconclusive.
pub fn submodule_probe(
    v: &FockPoly,
    params: &Params,
    mode_window: Mode,
    grade_bound: i64,
    length_bound: usize,
) -> Result<Probe> {
    if v.is_zero() {
        return Err(Error::Precondition("the probe vector must be nonzero".into()));
    }
    v.check(params)?;
    let engine = Engine::new(params);
    let r = params.r();
    let mut labels = vec![CurrentLabel::C];
    for kind in [CurrentKind::E, CurrentKind::F, CurrentKind::H] {
        for i in 1..=params.n() {
            for m in -mode_window..=mode_window {
                labels.push(CurrentLabel::Mode { kind, i, m });
            }
        }
    }
    let mut span: Vec<FockPoly> = Vec::new();
    let mut frontier = Vec::new();
    let add = |w: FockPoly, span: &mut Vec<FockPoly>, frontier: &mut Vec<FockPoly>| {
        if w.is_zero() || !grade_ok(&w, params, grade_bound) {
            return;
        }
        span.push(w.clone());
        if independent(span, r) {
            frontier.push(w);
        } else {
            span.pop();
        }
    };
    add(v.clone(), &mut span, &mut frontier);
    for _ in 0..length_bound {
        let current = std::mem::take(&mut frontier);
        for w in &current {
            for &l in &labels {
                add(engine.apply_unchecked(l, w), &mut span, &mut frontier);
            }
        }
    }
    let all_columns: Vec<(bool, Monomial)> = columns_in_order(&span, r);
    let found = small_fock_vector(&span, &all_columns);
    let mut report = Report::new("submodule-probe", Some(params));
    let id = format!("span of words of length <= {length_bound} on {v} meets the embedded Fock space");
    match &found {
        Some(u) => report.push(id, CaseStatus::Pass, Some(u.to_string())),
        None => report.push(
            id,
            CaseStatus::Inconclusive,
            Some(format!("no such vector within a span of dimension {}", span.len())),
        ),
    }
    Ok(Probe {
        found,
        span_dim: span.len(),
        report,
    })
}

/// Columns ordered with monomials outside the embedded Fock space first.
fn columns_in_order(span: &[FockPoly], r: usize) -> Vec<(bool, Monomial)> {
    let mut cols: Vec<(bool, Monomial)> = span
        .iter()
        .flat_map(|w| w.monomials().map(|mu| (monomial_in_small_fock(mu, r), mu.clone())))
        .collect();
    cols.sort();
    cols.dedup();
    cols
}

fn to_rows(span: &[FockPoly], cols: &[(bool, Monomial)]) -> Vec<Vec<Rational>> {
    let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(k, (_, mu))| (mu, k)).collect();
    span.iter()
        .map(|w| {
            let mut row = vec![Rational::ZERO; cols.len()];
            for (mu, c) in w.terms() {
                row[index[mu]] = c.clone();
            }
            row
        })
        .collect()
}

fn independent(span: &[FockPoly], r: usize) -> bool {
    let cols = columns_in_order(span, r);
    row_reduce(to_rows(span, &cols), cols.len()).rank() == span.len()
}

/// In reduced echelon form with the outside columns first, the rows whose
/// pivot lies among the inside columns span the intersection.
fn small_fock_vector(span: &[FockPoly], cols: &[(bool, Monomial)]) -> Option<FockPoly> {
    let ech = row_reduce(to_rows(span, cols), cols.len());
    let (row, _) = ech.rows.iter().zip(&ech.pivots).find(|(_, &p)| cols[p].0)?;
    let mut out = FockPoly::zero();
    for (k, c) in row.iter().enumerate() {
        if !c.is_zero() {
            out.add_term(cols[k].1.clone(), c.clone());
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_monomial;

    fn params(n: usize, r: usize) -> Params {
        Params::with_zero_weight(n, r, Rational::new(9, 4)).unwrap()
    }

    fn census(n: usize, entries: &[(&[i64], i64, u64)]) -> WeightCensus {
        let mut map = BTreeMap::new();
        for (off, d, c) in entries {
            assert_eq!(off.len(), n);
            map.insert(
                Weight {
                    root_offset: off.to_vec(),
                    delta_deg: *d,
                },
                *c,
            );
        }
        WeightCensus(map)
    }

    #[test]
    fn complement_census_examples() {
        let c = complement_census(&params(1, 0), 1);
        assert_eq!(c, census(1, &[(&[-1], -1, 1), (&[-1], 0, 1), (&[-1], 1, 1), (&[0], -1, 1)]));
        let c = complement_census(&params(1, 1), 1);
        assert_eq!(c, census(1, &[(&[-1], 0, 1), (&[-1], -1, 1), (&[1], -1, 1), (&[0], -1, 1)]));
        let c = complement_census(&params(2, 2), 0);
        assert_eq!(c, census(2, &[(&[-1, 0], 0, 1), (&[0, -1], 0, 1), (&[-1, -1], 0, 1)]));
    }

    #[test]
    fn imaginary_censuses_agree() {
        for n in 1..=3 {
            for w in 0..=4 {
                let p = params(n, 0);
                assert_eq!(complement_census(&p, w), fock_variable_census(&p, w));
            }
        }
    }

    #[test]
    fn fock_census_matches_realized_complement() {
        for n in 1..=3 {
            for r in 0..=n {
                for w in 0..=4 {
                    let p = params(n, r);
                    assert_eq!(realized_complement_census(&p, w), fock_variable_census(&p, w));
                }
            }
        }
    }

    #[test]
    fn monomial_census_counts_multisets() {
        let c = census(1, &[(&[-1], 0, 2)]);
        let m = monomial_census(&c, 3, 0);
        assert_eq!(m.get(&Weight { root_offset: vec![-2], delta_deg: 0 }), 3);
        assert_eq!(m.get(&Weight { root_offset: vec![-3], delta_deg: 0 }), 4);
        assert_eq!(m.total(), 1 + 2 + 3 + 4);
    }

    #[test]
    fn witness_for_single_f_current() {
        let p = params(2, 1);
        let t = parse_monomial("x[2,2,5]", &p).unwrap();
        let prog = generation_witness(&t, &p).unwrap();
        assert_eq!(
            prog.steps,
            vec![
                Step::Seed(FockPoly::one()),
                Step::Apply(Operator::Current(CurrentLabel::f(2, 5)))
            ]
        );
    }

    #[test]
    fn witness_for_y_subtracts_small_correction() {
        let p = params(2, 1);
        let t = parse_monomial("y[2,1]", &p).unwrap();
        let prog = generation_witness(&t, &p).unwrap();
        assert_eq!(prog.steps[0], Step::Seed(FockPoly::one()));
        assert_eq!(prog.steps[1], Step::Apply(Operator::Current(CurrentLabel::h(2, -1))));
        assert!(prog.steps[2..].iter().all(|s| !matches!(s, Step::Subtract { .. })));
        assert_eq!(prog.execute(&Engine::new(&p)), FockPoly::monomial(t));
    }

    #[test]
    fn witness_for_root_vector_uses_bracket() {
        let p = params(2, 1);
        let t = parse_monomial("x[1,2,-1]", &p).unwrap();
        let prog = generation_witness(&t, &p).unwrap();
        assert!(matches!(prog.steps[1], Step::Apply(Operator::FBracket { top: 2, bottom: 1, .. })));
    }

    #[test]
    fn generation_reaches_small_windows() {
        assert!(generation_check(&params(2, 1), 2, 1).all_pass());
        assert!(generation_check(&params(2, 0), 2, 2).all_pass());
    }

    #[test]
    fn probe_of_vacuum_finds_vacuum() {
        let p = params(2, 1);
        let probe = submodule_probe(&FockPoly::one(), &p, 1, 2, 0).unwrap();
        assert_eq!(probe.found, Some(FockPoly::one()));
    }

    #[test]
    fn probe_output_is_supported_on_small_fock() {
        let p = params(2, 1);
        let v = FockPoly::var(VarId::x(2, 2, 0));
        let probe = submodule_probe(&v, &p, 1, 2, 2).unwrap();
        if let Some(u) = &probe.found {
            assert!(!u.is_zero());
            assert!(u.monomials().all(|mu| monomial_in_small_fock(mu, 1)));
        } else {
            assert_eq!(probe.report.inconclusive(), 1);
        }
    }

    #[test]
    fn probe_rejects_zero() {
        assert!(submodule_probe(&FockPoly::zero(), &params(2, 1), 1, 2, 1).is_err());
    }
}
