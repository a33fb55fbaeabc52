use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fschar::char_a::{char_a, verify_bijection, verify_formulas_a, verify_recurrences_a, Edge, RelationForm, Source};
use fschar::char_d::{
    char_d4_gamma, char_dl_lambda0, restricted_char, verify_decomposition_d4, verify_dl_remark, verify_formulas_d4,
    verify_recurrences_d4, DForm, DSource, DL_MAX_RANK,
};
use fschar::colors::realizable;
use fschar::verify::{weight_grid, Report};
use fschar::{enumerate_basis, enumerate_character, AlgebraSpec, EnumRequest, Error, ICVariant, QSeries, Weight};

const QMAX_LIMIT: usize = 200;
const GRID_LIMIT: i64 = 6;

#[derive(Parser)]
#[command(
    name = "fschar",
    version,
    about = "Characters and monomial bases of W(Lambda) subspaces"
)]
struct Cli {
    /// Worker threads; FSCHAR_JOBS takes precedence.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form characters, one row per weight.
    Char(CharArgs),
    /// Admissible monomials, or their character with --character.
    Enum(EnumArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    A,
    D,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, value_enum, ignore_case = true, default_value = "a")]
    family: FamilyArg,
    #[arg(long)]
    rank: usize,
    /// Index of the fundamental weight omega_m (type A only).
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Basic module L(Lambda_k).
    #[arg(long, conflicts_with = "target")]
    k: Option<usize>,
    /// Initial condition, e.g. lambda:0, ij:1,2, zero, gamma:u2, restricted:prime-b2.
    #[arg(long)]
    target: Option<String>,
    /// Lift the rank limit on the D_l closed form.
    #[arg(long)]
    allow_large_rank: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct WeightArgs {
    /// A single weight, e.g. 1,2,1.
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Every realizable weight with coordinates in 0..=BOUND.
    #[arg(long, value_name = "BOUND")]
    grid: Option<i64>,
}

#[derive(Args)]
struct CharArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value_t = 20)]
    qmax: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct EnumArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value_t = 20)]
    qmax: usize,
    /// Degree bound for basis listings; defaults to qmax.
    #[arg(long)]
    dmax: Option<i64>,
    /// Emit the character instead of the basis.
    #[arg(long)]
    character: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    AFormula,
    ARecurrence,
    ABijection,
    D4Formula,
    D4Recurrence,
    D4Split,
    DlRemark,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Rank for the A suites and dl-remark.
    #[arg(long)]
    rank: Option<usize>,
    /// Restrict the A suites to one m.
    #[arg(long)]
    m: Option<usize>,
    /// Per-coordinate weight bound.
    #[arg(long, default_value_t = 2)]
    bound: i64,
    #[arg(long, default_value_t = 15)]
    qmax: usize,
    #[arg(long, default_value_t = 12)]
    dmax: i64,
    /// Largest partition weight in a-bijection.
    #[arg(long, default_value_t = 8)]
    max_parts: i64,
    /// Use the deliberately wrong relation signs and D4 table, to check that
    /// failures are reported.
    #[arg(long)]
    corrupted: bool,
    #[arg(long)]
    allow_large_rank: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = match std::env::var("FSCHAR_JOBS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(j) => Some(j),
            Err(_) => {
                eprintln!("error: FSCHAR_JOBS must be a nonnegative integer, got {v:?}");
                return ExitCode::from(2);
            }
        },
        Err(_) => cli.jobs,
    };
    if let Some(j) = jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match cli.cmd {
        Cmd::Char(a) => cmd_char(&a),
        Cmd::Enum(a) => cmd_enum(&a),
        Cmd::Verify(a) => cmd_verify(&a),
    };
    match out {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        // a closed pipe is not worth a diagnostic
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_qmax(qmax: usize) -> std::result::Result<(), Failure> {
    if qmax > QMAX_LIMIT {
        return Err(usage(format!("qmax {qmax} exceeds {QMAX_LIMIT}")));
    }
    Ok(())
}

fn check_bound(bound: i64) -> std::result::Result<(), Failure> {
    if !(0..=GRID_LIMIT).contains(&bound) {
        return Err(usage(format!("grid bound must be in 0..={GRID_LIMIT}, got {bound}")));
    }
    Ok(())
}

fn resolve_spec(a: &SpecArgs) -> std::result::Result<(AlgebraSpec, ICVariant), Failure> {
    let spec = match a.family {
        FamilyArg::A => AlgebraSpec::type_a(a.rank, a.m)?,
        FamilyArg::D => {
            if a.rank > DL_MAX_RANK && !a.allow_large_rank {
                return Err(usage(format!(
                    "rank {} exceeds {DL_MAX_RANK}; pass --allow-large-rank to proceed",
                    a.rank
                )));
            }
            AlgebraSpec::type_d(a.rank)?
        }
    };
    let ic = match (&a.target, a.k) {
        (Some(t), _) => t.parse::<ICVariant>()?,
        (None, Some(k)) => ICVariant::LambdaK(k),
        (None, None) => ICVariant::LambdaK(0),
    };
    ic.check(&spec)?;
    Ok((spec, ic))
}

/// Single weights are kept even when unrealizable (they give a zero row);
/// grids drop unrealizable points.
fn resolve_weights(spec: &AlgebraSpec, a: &WeightArgs) -> std::result::Result<Vec<Weight>, Failure> {
    if let Some(s) = &a.weight {
        let w: Weight = s.parse()?;
        spec.check_weight(&w)?;
        return Ok(vec![w]);
    }
    let bound = a.grid.expect("clap requires weight or grid");
    check_bound(bound)?;
    Ok(weight_grid(spec.rank(), bound)
        .into_iter()
        .filter(|w| realizable(spec, w))
        .collect())
}

fn closed_form(spec: &AlgebraSpec, ic: &ICVariant, n: &Weight, qmax: usize) -> fschar::Result<QSeries> {
    match spec.family() {
        fschar::Family::A => char_a(spec, ic, n, qmax),
        fschar::Family::D if spec.rank() == 4 => match ic {
            ICVariant::Restricted(set) => restricted_char(*set, n, qmax),
            _ => char_d4_gamma(ic, n, qmax, DForm::Derived),
        },
        fschar::Family::D => match ic.canonical(spec) {
            ICVariant::LambdaK(0) => char_dl_lambda0(spec.rank(), n, qmax),
            other => Err(Error::IncompatibleVariant(format!(
                "{other} for {spec}: only lambda:0 has a closed form above rank 4"
            ))),
        },
    }
}

fn oracle(spec: &AlgebraSpec, ic: &ICVariant, n: &Weight, qmax: usize) -> EnumRequest {
    let req = EnumRequest::new(*spec, *ic, n.clone(), qmax);
    match ic {
        ICVariant::Restricted(set) => req.with_colors(set.colors()),
        _ => req,
    }
}

fn coeff_strings(s: &QSeries) -> Vec<String> {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

fn write_row(out: &mut impl Write, fmt: Format, ic: &ICVariant, w: &Weight, s: &QSeries) -> io::Result<()> {
    match fmt {
        Format::Csv => writeln!(out, "{w}, {}", coeff_strings(s).join(",")),
        Format::Json => writeln!(
            out,
            "{}",
            json!({"weight": w, "target": ic.to_string(), "coeffs": coeff_strings(s)})
        ),
        Format::Text => writeln!(out, "{w}: {s}"),
    }
}

fn cmd_char(a: &CharArgs) -> Outcome {
    check_qmax(a.qmax)?;
    let (spec, ic) = resolve_spec(&a.spec)?;
    let weights = resolve_weights(&spec, &a.weights)?;
    let rows: Vec<QSeries> = {
        use rayon::prelude::*;
        weights
            .par_iter()
            .map(|w| closed_form(&spec, &ic, w, a.qmax))
            .collect::<fschar::Result<_>>()?
    };
    let mut out = BufWriter::new(io::stdout().lock());
    for (w, s) in weights.iter().zip(&rows) {
        write_row(&mut out, a.format, &ic, w, s)?;
    }
    out.flush()?;
    Ok(true)
}

fn cmd_enum(a: &EnumArgs) -> Outcome {
    check_qmax(a.qmax)?;
    let (spec, ic) = resolve_spec(&a.spec)?;
    let weights = resolve_weights(&spec, &a.weights)?;
    let mut out = BufWriter::new(io::stdout().lock());
    if a.character {
        for w in &weights {
            let s = enumerate_character(&oracle(&spec, &ic, w, a.qmax));
            write_row(&mut out, a.format, &ic, w, &s)?;
        }
    } else {
        let dmax = a.dmax.unwrap_or(a.qmax as i64);
        for w in &weights {
            for x in enumerate_basis(&oracle(&spec, &ic, w, a.qmax), dmax) {
                match a.format {
                    Format::Json => writeln!(
                        out,
                        "{}",
                        json!({"weight": w, "degree": x.degree(), "monomial": x.to_string(), "factors": x.factors()})
                    )?,
                    Format::Csv => writeln!(out, "{w}, {}, {x}", x.degree())?,
                    Format::Text => writeln!(out, "{x}")?,
                }
            }
        }
    }
    out.flush()?;
    Ok(true)
}

fn a_specs(rank: Option<usize>, m: Option<usize>) -> std::result::Result<Vec<AlgebraSpec>, Failure> {
    let rank = rank.ok_or_else(|| usage("this suite needs --rank"))?;
    let ms: Vec<usize> = match m {
        Some(m) => vec![m],
        None => (1..=rank).collect(),
    };
    Ok(ms
        .into_iter()
        .map(|m| AlgebraSpec::type_a(rank, m))
        .collect::<fschar::Result<_>>()?)
}

fn run_suite(a: &VerifyArgs) -> std::result::Result<Report, Failure> {
    check_qmax(a.qmax)?;
    check_bound(a.bound)?;
    let d_form = if a.corrupted { DForm::Corrupted } else { DForm::Derived };
    Ok(match a.suite {
        Suite::AFormula => {
            let parts = a_specs(a.rank, a.m)?
                .iter()
                .map(|s| verify_formulas_a(s, a.bound, a.qmax))
                .collect();
            Report::merge("a-formula", parts)
        }
        Suite::ARecurrence => {
            let form = if a.corrupted {
                RelationForm::Corrupted
            } else {
                RelationForm::Derived
            };
            let mut parts = Vec::new();
            for s in a_specs(a.rank, a.m)? {
                for src in [Source::Oracle, Source::Formula] {
                    parts.push(verify_recurrences_a(&s, a.bound, a.qmax, src, form));
                }
            }
            Report::merge("a-recurrence", parts)
        }
        Suite::ABijection => {
            let rank = a.rank.ok_or_else(|| usage("a-bijection needs --rank"))?;
            let edges = match a.m {
                None => vec![Edge::Last, Edge::First],
                Some(m) if m == rank => vec![Edge::Last],
                Some(1) => vec![Edge::First],
                Some(m) => return Err(usage(format!("a-bijection needs m = 1 or m = rank, got {m}"))),
            };
            let parts = edges
                .into_iter()
                .map(|e| verify_bijection(rank, e, a.bound, a.max_parts))
                .collect::<fschar::Result<_>>()?;
            Report::merge("a-bijection", parts)
        }
        Suite::D4Formula => verify_formulas_d4(a.bound, a.qmax, d_form),
        Suite::D4Recurrence => {
            let parts = [DSource::Oracle, DSource::Formula]
                .into_iter()
                .map(|src| verify_recurrences_d4(a.bound, a.qmax, src))
                .collect();
            Report::merge("d4-recurrence", parts)
        }
        Suite::D4Split => verify_decomposition_d4(a.dmax, d_form),
        Suite::DlRemark => {
            let rank = a.rank.unwrap_or(5);
            if rank > DL_MAX_RANK && !a.allow_large_rank {
                return Err(usage(format!(
                    "rank {rank} exceeds {DL_MAX_RANK}; pass --allow-large-rank to proceed"
                )));
            }
            verify_dl_remark(rank, a.bound, a.qmax)?
        }
    })
}

fn cmd_verify(a: &VerifyArgs) -> Outcome {
    if a.format == Format::Csv {
        return Err(usage("verify reports are json or text"));
    }
    let rep = run_suite(a)?;
    let mut out = BufWriter::new(io::stdout().lock());
    match a.format {
        Format::Text => {
            writeln!(
                out,
                "{}: {} cases, {} failures, max discrepancy {}",
                rep.suite,
                rep.cases,
                rep.failures.len(),
                rep.max_discrepancy
            )?;
            for f in &rep.failures {
                writeln!(out, "  [{}] {}", f.weight, f.detail)?;
            }
        }
        _ => writeln!(out, "{}", serde_json::to_string(&rep).expect("report serializes"))?,
    }
    out.flush()?;
    Ok(rep.ok())
}
