//! Pass/fail reports shared by every verification suite.

use std::fmt::Write as _;

use serde::Serialize;

use crate::algebra::Params;
use crate::rational::Rational;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CaseStatus {
    Pass,
    Fail,
    /// A semi-decision that found nothing within its bounds.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub id: String,
    pub status: CaseStatus,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamsEcho {
    pub n: usize,
    pub r: usize,
    pub gamma2: Rational,
    pub lambda: Vec<Rational>,
}

impl From<&Params> for ParamsEcho {
    fn from(p: &Params) -> Self {
        ParamsEcho {
            n: p.n(),
            r: p.r(),
            gamma2: p.gamma2().clone(),
            lambda: p.lambda().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub params: Option<ParamsEcho>,
    pub cases: Vec<Case>,
}

#[derive(Serialize)]
struct JsonCase<'a> {
    id: &'a str,
    pass: bool,
    witness: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    suite: &'a str,
    params: Option<&'a ParamsEcho>,
    cases: Vec<JsonCase<'a>>,
    passed: usize,
    failed: usize,
    inconclusive: usize,
}

impl Report {
    pub fn new(suite: impl Into<String>, params: Option<&Params>) -> Self {
        Report {
            suite: suite.into(),
            params: params.map(ParamsEcho::from),
            cases: Vec::new(),
        }
    }

    pub fn push(&mut self, id: impl Into<String>, status: CaseStatus, witness: Option<String>) {
        self.cases.push(Case {
            id: id.into(),
            status,
            witness,
        });
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.push(id, CaseStatus::Pass, None);
    }

    pub fn fail(&mut self, id: impl Into<String>, witness: impl Into<String>) {
        self.push(id, CaseStatus::Fail, Some(witness.into()));
    }

    /// Records `Pass` if `witness` is `None`, otherwise `Fail` with it.
    pub fn record(&mut self, id: impl Into<String>, witness: Option<String>) {
        match witness {
            None => self.pass(id),
            Some(w) => self.fail(id, w),
        }
    }

    /// Appends the cases of `other`, prefixing their ids with its suite name.
    pub fn absorb(&mut self, other: Report) {
        for c in other.cases {
            self.cases.push(Case {
                id: format!("{}/{}", other.suite, c.id),
                ..c
            });
        }
    }

    fn count(&self, s: CaseStatus) -> usize {
        self.cases.iter().filter(|c| c.status == s).count()
    }

    pub fn passed(&self) -> usize {
        self.count(CaseStatus::Pass)
    }

    pub fn failed(&self) -> usize {
        self.count(CaseStatus::Fail)
    }

    pub fn inconclusive(&self) -> usize {
        self.count(CaseStatus::Inconclusive)
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    pub fn first_failure(&self) -> Option<&Case> {
        self.cases.iter().find(|c| c.status == CaseStatus::Fail)
    }

    pub fn to_json(&self) -> String {
        let doc = JsonReport {
            suite: &self.suite,
            params: self.params.as_ref(),
            cases: self
                .cases
                .iter()
                .map(|c| JsonCase {
                    id: &c.id,
                    pass: c.status == CaseStatus::Pass,
                    witness: c.witness.as_deref(),
                })
                .collect(),
            passed: self.passed(),
            failed: self.failed(),
            inconclusive: self.inconclusive(),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite: {}", self.suite);
        if let Some(p) = &self.params {
            let lambda: Vec<String> = p.lambda.iter().map(ToString::to_string).collect();
            let _ = writeln!(
                s,
                "params: n={} r={} gamma2={} lambda={}",
                p.n,
                p.r,
                p.gamma2,
                lambda.join(",")
            );
        }
        for c in &self.cases {
            let tag = match c.status {
                CaseStatus::Pass => "PASS",
                CaseStatus::Fail => "FAIL",
                CaseStatus::Inconclusive => "INCONCLUSIVE",
            };
            match &c.witness {
                Some(w) => {
                    let _ = writeln!(s, "{tag} {} :: {w}", c.id);
                }
                None => {
                    let _ = writeln!(s, "{tag} {}", c.id);
                }
            }
        }
        let _ = writeln!(
            s,
            "passed={} failed={} inconclusive={}",
            self.passed(),
            self.failed(),
            self.inconclusive()
        );
        s
    }
}
