use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wakimoto_core::algebra::{parse_monomial, parse_poly};
use wakimoto_core::oscillator::{build_b_matrix, det_b};
use wakimoto_core::relations::{check_highest_weight, check_realized_highest_weight, run_suite};
use wakimoto_core::report::{CaseStatus, Report};
use wakimoto_core::sl2::{
    second_matches_engine, singularity_check, sl2_relation_check, sl2_test_set, wilson_vector, Sl2RealizationKind,
};
use wakimoto_core::structure::{character_compare, generation_check, generation_witness, submodule_probe};
use wakimoto_core::{Error, Params, Rational};

#[derive(Parser)]
#[command(name = "wakimoto", version, about = "Exact checks of intermediate Wakimoto realizations of affine sl(n+1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relation suites and the highest-weight property.
    #[command(subcommand)]
    Verify(Verify),
    /// The oscillator matrix.
    #[command(subcommand)]
    Matrix(Matrix),
    /// Generator census and character comparison.
    #[command(subcommand)]
    Character(Character),
    /// Constructive generation from the embedded Fock space.
    #[command(subcommand)]
    Generate(Generate),
    /// Bounded submodule search.
    #[command(subcommand)]
    Probe(Probe),
    /// The sl(2) laboratory.
    #[command(subcommand)]
    Sl2(Sl2),
}

#[derive(Subcommand)]
enum Verify {
    Relations {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    HighestWeight {
        #[command(flatten)]
        params: ParamArgs,
        /// Check the generators that actually kill the vacuum instead.
        #[arg(long)]
        realized: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum Matrix {
    DetB {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum Character {
    Compare {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2)]
        delta: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum Generate {
    Witness {
        #[command(flatten)]
        params: ParamArgs,
        /// Target monomial, e.g. `x[1,2,-1]*y[2,1]`.
        #[arg(long)]
        target: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    Check {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum Probe {
    Submodule {
        #[command(flatten)]
        params: ParamArgs,
        /// Starting vector, e.g. `x[2,2,0]`.
        #[arg(long)]
        vector: String,
        #[arg(long, default_value_t = 2)]
        grade: i64,
        #[arg(long, default_value_t = 2)]
        length: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum Sl2 {
    Singular {
        /// Number of factors of the alternating vector.
        #[arg(long)]
        r: usize,
        /// Comma-separated shifts.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<i32>,
        #[arg(long, default_value_t = 4)]
        check_window: i32,
        #[command(flatten)]
        out: OutputArgs,
    },
    Realization {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long = "K", default_value = "1")]
        k: String,
        #[arg(long = "J", default_value = "0")]
        j: String,
        /// Scalar sequence for `jk` as `mode:value` pairs, e.g. `0:5,1:-1/2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda_seq: Vec<String>,
        #[arg(long, default_value_t = 2)]
        mode_window: i32,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum KindArg {
    First,
    Jk,
    Bf,
    Second,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value = "9/4", allow_hyphen_values = true)]
    gamma2: String,
    /// Comma-separated highest-weight values; zero if omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Vec<String>,
    #[arg(long, default_value_t = 3)]
    mode_window: i32,
}

#[derive(Copy, Clone, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    report: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<String>,
}

enum Failure {
    Input(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn rational(text: &str) -> Result<Rational, Failure> {
    text.parse()
        .map_err(|_| Failure::Input(format!("not a rational number: {text:?}")))
}

impl ParamArgs {
    fn build(&self) -> Result<Params, Failure> {
        let gamma2 = rational(&self.gamma2)?;
        let lambda = if self.lambda.is_empty() {
            vec![Rational::ZERO; self.n]
        } else {
            self.lambda.iter().map(|s| rational(s)).collect::<Result<_, _>>()?
        };
        Ok(Params::new(self.n, self.r, gamma2, lambda)?)
    }
}

/// A finished run: the report, any extra text lines, and whether it passed.
struct Outcome {
    report: Report,
    notes: Vec<String>,
}

fn emit(outcome: &Outcome, out: &OutputArgs) -> Result<(), Failure> {
    let body = match out.report {
        Format::Json => format!("{}\n", outcome.report.to_json()),
        Format::Text => {
            let mut s = String::new();
            for n in &outcome.notes {
                s.push_str(n);
                s.push('\n');
            }
            s.push_str(&outcome.report.to_text());
            s
        }
    };
    match &out.output {
        Some(path) => fs::write(path, body).map_err(|e| Failure::Io(format!("{path}: {e}"))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn plain(report: Report) -> Outcome {
    Outcome {
        report,
        notes: Vec::new(),
    }
}

fn det_b_outcome(params: &Params) -> Outcome {
    let d = det_b(params);
    let mut report = Report::new("det-b", Some(params));
    let id = format!("closed={} eliminated={}", d.closed, d.eliminated);
    report.record(
        id,
        (d.closed != d.eliminated).then(|| "closed form and elimination disagree".to_string()),
    );
    Outcome {
        report,
        notes: vec![
            format!("B = {}", build_b_matrix(params)),
            format!("closed={}", d.closed),
            format!("eliminated={}", d.eliminated),
        ],
    }
}

fn singular_outcome(r: usize, s: &[i32], window: i32) -> Result<Outcome, Failure> {
    let v = wilson_vector(r, s)?;
    let mut report = Report::new("sl2-singular", None);
    let shifts: Vec<String> = s.iter().map(ToString::to_string).collect();
    let name = format!("v_{r}({})", shifts.join(","));
    let mut notes = vec![format!("{name} = {v}")];
    if v.is_zero() {
        report.fail(format!("{name} is nonzero"), "the alternating sum vanishes");
        return Ok(Outcome { report, notes });
    }
    let sc = singularity_check(&v, window)?;
    notes.push(format!("e-annihilated: {}", sc.e_annihilated));
    notes.push(format!("h-annihilated: {}", sc.h_annihilated));
    report.record(format!("e(i) {name} = 0 for |i| <= {window}"), sc.e_witness.clone());
    let h_id = format!("h(j) {name} = 0 for 1 <= j <= {window} (reported only)");
    match sc.h_witness {
        None => report.pass(h_id),
        Some(w) => report.push(h_id, CaseStatus::Inconclusive, Some(w)),
    }
    Ok(Outcome { report, notes })
}

fn realization_kind(kind: KindArg, k: &str, j: &str, seq: &[String]) -> Result<Sl2RealizationKind, Failure> {
    Ok(match kind {
        KindArg::First => Sl2RealizationKind::FirstFreeField,
        KindArg::Jk => {
            let mut lambda = BTreeMap::new();
            for item in seq {
                let (m, v) = item
                    .split_once(':')
                    .ok_or_else(|| Failure::Input(format!("expected mode:value, got {item:?}")))?;
                let m: i32 = m
                    .parse()
                    .map_err(|_| Failure::Input(format!("bad mode in {item:?}")))?;
                lambda.insert(m, rational(v)?);
            }
            Sl2RealizationKind::JakobsenKac(lambda)
        }
        KindArg::Bf => Sl2RealizationKind::BernardFelder {
            k: rational(k)?,
            j: rational(j)?,
        },
        KindArg::Second => Sl2RealizationKind::SecondFreeField { k: rational(k)? },
    })
}

fn run(cli: Cli) -> Result<(Outcome, OutputArgs), Failure> {
    Ok(match cli.command {
        Command::Verify(Verify::Relations { params, degree, out }) => {
            let p = params.build()?;
            (plain(run_suite(&p, params.mode_window, degree)), out)
        }
        Command::Verify(Verify::HighestWeight { params, realized, out }) => {
            let p = params.build()?;
            let rep = if realized {
                check_realized_highest_weight(&p, params.mode_window)
            } else {
                check_highest_weight(&p, params.mode_window)
            };
            (plain(rep), out)
        }
        Command::Matrix(Matrix::DetB { params, out }) => (det_b_outcome(&params.build()?), out),
        Command::Character(Character::Compare { params, delta, out }) => {
            let p = params.build()?;
            (plain(character_compare(&p, params.mode_window, delta)), out)
        }
        Command::Generate(Generate::Witness { params, target, out }) => {
            let p = params.build()?;
            let mono = parse_monomial(&target, &p)?;
            let prog = generation_witness(&mono, &p)?;
            let mut report = Report::new("generation-witness", Some(&p));
            report.push(format!("reach {mono}"), CaseStatus::Pass, Some(prog.to_json()));
            let notes = vec![format!("program: {prog}")];
            (Outcome { report, notes }, out)
        }
        Command::Generate(Generate::Check { params, degree, out }) => {
            let p = params.build()?;
            (plain(generation_check(&p, params.mode_window, degree)), out)
        }
        Command::Probe(Probe::Submodule {
            params,
            vector,
            grade,
            length,
            out,
        }) => {
            let p = params.build()?;
            let v = parse_poly(&vector, &p)?;
            let probe = submodule_probe(&v, &p, params.mode_window, grade, length)?;
            let notes = vec![format!("span dimension: {}", probe.span_dim)];
            (
                Outcome {
                    report: probe.report,
                    notes,
                },
                out,
            )
        }
        Command::Sl2(Sl2::Singular { r, s, check_window, out }) => (singular_outcome(r, &s, check_window)?, out),
        Command::Sl2(Sl2::Realization {
            kind,
            k,
            j,
            lambda_seq,
            mode_window,
            degree,
            out,
        }) => {
            let kind = realization_kind(kind, &k, &j, &lambda_seq)?;
            let test_set = sl2_test_set(&kind, mode_window, degree);
            let mut report = sl2_relation_check(&kind, mode_window, &test_set)?;
            if let Sl2RealizationKind::SecondFreeField { k } = &kind {
                report.absorb(second_matches_engine(k, mode_window, &test_set)?);
            }
            (plain(report), out)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, out)) => {
            if let Err(Failure::Io(msg) | Failure::Input(msg)) = emit(&outcome, &out) {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
            if outcome.report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg) | Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
