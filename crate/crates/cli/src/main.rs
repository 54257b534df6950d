//! Command-line front end. Results go to stdout (or `--out`), diagnostics to stderr.
//! Exit codes: 0 success, 1 failed check, 2 invalid arguments, 3 size guard.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liftproj::analysis::{
    collapse_deviation, decision_rule, figure_data, gap_chipped, gap_chipped_lp, las_rank_cropped,
    localizer_mobius_deviation, mobius_factorization_deviation, p_of_n, q_of_n, rank_formula, Figure, FigureOptions,
    POracle, QMode, RankResult, RankValue, ThresholdResult,
};
use liftproj::moments::MomentVector;
use liftproj::operators::{
    build_las_chipped, build_las_cropped, build_sa_plus_chipped, build_sa_plus_top, check_las, check_sa_plus, dump_las,
    dump_sa_plus, enumerate_obstructions, parse_certificate, CertOperator, CertificateReport, LasCertificate,
    SaPlusCertificate,
};
use liftproj::polytopes::{chipped, cropped, LinearDescription};
use liftproj::symmat::DEFAULT_PSD_TOL;
use liftproj::Error;

use output::{render, Format, Record};

#[derive(Parser)]
#[command(name = "liftproj", version, about = "Lift-and-project ranks, thresholds and certificates")]
struct Cli {
    /// Worker threads for grid sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write results to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
#[group(required = false, multiple = false)]
struct RhoArgs {
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<f64>,
    /// `rho = λ / 1000`.
    #[arg(long)]
    rho_millis: Option<u32>,
}

impl RhoArgs {
    fn get(&self) -> Result<f64, Error> {
        match (self.rho, self.rho_millis) {
            (Some(r), None) => Ok(r),
            (None, Some(l)) => Ok(l as f64 / 1000.0),
            _ => Err(Error::InvalidArgument("one of --rho or --rho-millis is required".into())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Chipped,
    Cropped,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OperatorArg {
    Las,
    SaPlus,
    TildeLs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Q,
    P,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Collapsed,
    Full,
    Scalar,
    Eigen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GapOracle {
    Formula,
    Lp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuildOp {
    SaPlusTop,
    SaPlusLevel,
    LasChipped,
    LasCropped,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FigureArg {
    Fig2,
    Fig3,
    Fig4,
    Fig6,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdentityArg {
    /// Moment matrix factorization through the Möbius transform.
    Mobius,
    /// Closed-form Möbius transform of the chipped localizer.
    Localizer,
    /// Eigenvalue sign against the scalar decision rule.
    DecisionRule,
    /// Cardinality-class reduction of the cropped threshold matrix.
    Collapse,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of a family under an operator.
    Rank {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rho: RhoArgs,
        #[arg(long, value_enum, default_value_t = OperatorArg::Las)]
        operator: OperatorArg,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Threshold q(n) (cropped) or p(n) (chipped).
    Threshold {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
        tol: f64,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Integrality gap of the chipped hypercube along the all-ones direction.
    Gap {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        rho: RhoArgs,
        #[arg(long, value_enum, default_value_t = GapOracle::Formula)]
        oracle: GapOracle,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build or check certificates.
    Cert {
        #[command(subcommand)]
        action: CertAction,
    },
    /// k-small obstructions of the chipped hypercube.
    Obstructions {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rho: RhoArgs,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Figure data as CSV.
    Figure {
        #[arg(long, value_enum)]
        which: FigureArg,
        /// Comma-separated n values overriding the default range.
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Numerical identity checks.
    IdentityCheck {
        #[arg(long, value_enum)]
        which: IdentityArg,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum CertAction {
    /// Build a certificate and check it.
    Build {
        #[arg(long, value_enum)]
        op: BuildOp,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rho: RhoArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_PSD_TOL, allow_hyphen_values = true)]
        tol: f64,
        /// Emit the certificate dump instead of the report.
        #[arg(long)]
        dump: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check a dumped certificate against a family description.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = FamilyArg::Chipped)]
        family: FamilyArg,
        #[command(flatten)]
        rho: RhoArgs,
        #[arg(long, default_value_t = DEFAULT_PSD_TOL, allow_hyphen_values = true)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Successful command output and whether a check failed.
struct Outcome {
    text: String,
    failed: bool,
    out: Option<PathBuf>,
}

enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::InvalidArgument(msg.into()))
}

fn rank_records(r: &RankResult) -> Vec<Record> {
    let (lo, hi) = match r.rank {
        RankValue::Exact(k) => (k, k),
        RankValue::Bounds { lo, hi } => (lo, hi),
    };
    let method = match r.method {
        liftproj::analysis::RankMethod::Formula => "formula",
        liftproj::analysis::RankMethod::PsdScan => "psd-scan",
        liftproj::analysis::RankMethod::Certificate => "certificate",
    };
    let lambdas: Vec<String> = r.lambda_min.iter().map(|v| liftproj::symmat::fmt_real(*v)).collect();
    vec![vec![
        ("family", r.family.into()),
        ("n", r.n.into()),
        ("rho", r.rho.into()),
        ("operator", r.operator.into()),
        ("rank_lo", lo.into()),
        ("rank_hi", hi.into()),
        ("method", method.into()),
        ("lambda_min", lambdas.join(";").into()),
    ]]
}

fn threshold_records(r: &ThresholdResult) -> Vec<Record> {
    vec![vec![
        ("which", r.which.into()),
        ("n", r.n.into()),
        ("mode", r.mode.into()),
        ("value", r.value.into()),
        ("lo", r.lo.into()),
        ("hi", r.hi.into()),
        ("tol", r.tol.into()),
        ("theta", r.theta.into()),
    ]]
}

fn report_records(rep: &CertificateReport) -> Vec<Record> {
    let mut recs: Vec<Record> = rep
        .conditions
        .iter()
        .map(|c| {
            let at: Vec<String> = c.offending.iter().map(|i| i.to_string()).collect();
            vec![
                ("condition", c.name.clone().into()),
                ("passed", c.passed.into()),
                ("worst_violation", c.worst_violation.into()),
                ("offending", at.join(";").into()),
            ]
        })
        .collect();
    recs.push(vec![
        ("condition", "overall".into()),
        ("passed", rep.passed.into()),
        ("worst_violation", rep.conditions.iter().map(|c| c.worst_violation).fold(0.0, f64::max).into()),
        ("offending", rep.failed().join(";").into()),
    ]);
    recs
}

fn description(family: FamilyArg, n: usize, rho: f64) -> Result<LinearDescription, Error> {
    match family {
        FamilyArg::Chipped => chipped(n, rho),
        FamilyArg::Cropped => cropped(n, rho),
    }
}

fn finish(records: Vec<Record>, out: &OutputArgs, failed: bool) -> Outcome {
    Outcome { text: render(&records, out.format), failed, out: out.out.clone() }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Rank { family, n, rho, operator, out } => {
            let rho = rho.get()?;
            let r = match (family, operator) {
                (FamilyArg::Cropped, OperatorArg::Las) => las_rank_cropped(n, rho)?,
                (FamilyArg::Chipped, OperatorArg::SaPlus) => rank_formula("chipped", "sa-plus", n, rho)?,
                (FamilyArg::Chipped, OperatorArg::TildeLs) => rank_formula("chipped", "tilde-ls", n, rho)?,
                (FamilyArg::Cropped, OperatorArg::SaPlus) => rank_formula("cropped", "sa-plus", n, rho)?,
                _ => return Err(invalid("unsupported family/operator combination")),
            };
            Ok(finish(rank_records(&r), &out, false))
        }
        Command::Threshold { which, n, tol, mode, out } => {
            let r = match (which, mode) {
                (Which::Q, None | Some(ModeArg::Collapsed)) => q_of_n(n, tol, QMode::Collapsed)?,
                (Which::Q, Some(ModeArg::Full)) => q_of_n(n, tol, QMode::Full)?,
                (Which::P, None | Some(ModeArg::Scalar)) => p_of_n(n, tol, POracle::Scalar)?,
                (Which::P, Some(ModeArg::Eigen)) => p_of_n(n, tol, POracle::Eigen)?,
                _ => return Err(invalid("mode does not apply to this threshold")),
            };
            Ok(finish(threshold_records(&r), &out, false))
        }
        Command::Gap { n, k, rho, oracle, out } => {
            let rho = rho.get()?;
            let g = match oracle {
                GapOracle::Formula => gap_chipped(n, k, rho)?,
                GapOracle::Lp if k == 0 => gap_chipped_lp(n, rho)?,
                GapOracle::Lp => return Err(invalid("the LP oracle applies to k = 0 only")),
            };
            let recs = vec![vec![
                ("n", g.n.into()),
                ("k", g.k.into()),
                ("rho", g.rho.into()),
                ("gap", g.gap.into()),
                ("numerator", g.numerator.into()),
                ("denominator", g.denominator.into()),
            ]];
            Ok(finish(recs, &out, false))
        }
        Command::Cert { action } => run_cert(action),
        Command::Obstructions { n, rho, k, out } => {
            let desc = chipped(n, rho.get()?)?;
            let obs = enumerate_obstructions(&desc, k)?;
            let recs = obs
                .iter()
                .map(|o| {
                    let elems: Vec<String> = o.set.elements().map(|e| e.to_string()).collect();
                    vec![
                        ("inequality", o.ineq_index.into()),
                        ("set", elems.join(";").into()),
                        ("size", o.set.len().into()),
                        ("branch", format!("{:?}", o.branch).to_lowercase().into()),
                    ]
                })
                .collect::<Vec<Record>>();
            if recs.is_empty() {
                eprintln!("no {k}-small obstructions");
            }
            Ok(finish(recs, &out, false))
        }
        Command::Figure { which, n, tol, out } => {
            let fig = match which {
                FigureArg::Fig2 => Figure::Fig2,
                FigureArg::Fig3 => Figure::Fig3,
                FigureArg::Fig4 => Figure::Fig4,
                FigureArg::Fig6 => Figure::Fig6,
            };
            let t = figure_data(fig, &FigureOptions { ns: n, tol, ..Default::default() })?;
            for note in &t.notes {
                eprintln!("{note}");
            }
            let text = match out.format {
                Format::Csv => t.to_csv(),
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&t).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            Ok(Outcome { text, failed: false, out: out.out })
        }
        Command::IdentityCheck { which, n, out } => {
            let (name, worst, tol, checked) = identity(which, n)?;
            let passed = worst <= tol;
            let recs = vec![vec![
                ("identity", name.into()),
                ("n", n.into()),
                ("passed", passed.into()),
                ("worst", worst.into()),
                ("tol", tol.into()),
                ("cases", checked.into()),
            ]];
            Ok(finish(recs, &out, !passed))
        }
    }
}

const GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// `(name, worst deviation, tolerance, cases)`.
fn identity(which: IdentityArg, n: usize) -> Result<(&'static str, f64, f64, usize), CliError> {
    if !(2..=10).contains(&n) {
        return Err(CliError::Core(Error::SizeGuard { what: "identity check", n, limit: 10 }));
    }
    match which {
        IdentityArg::Mobius => {
            let mut worst = 0.0f64;
            for j in 0..10 {
                let y = MomentVector::from_fn(n, n, |m| (j as f64 + 0.7 * m as f64).sin())?;
                let scale = y_max(&y);
                worst = worst.max(mobius_factorization_deviation(&y)? / scale);
            }
            Ok(("mobius", worst, 1e-10, 10))
        }
        IdentityArg::Localizer => {
            let mut worst = 0.0f64;
            for &t in &GRID {
                for &r in &GRID {
                    worst = worst.max(localizer_mobius_deviation(n, t, r)?);
                }
            }
            Ok(("localizer", worst, 1e-10, GRID.len() * GRID.len()))
        }
        IdentityArg::DecisionRule => {
            let mut bad = 0usize;
            for &t in &GRID {
                for &r in &GRID {
                    if decision_rule(n, t, r, 1e-8)?.agree == Some(false) {
                        bad += 1;
                    }
                }
            }
            Ok(("decision-rule", bad as f64, 0.0, GRID.len() * GRID.len()))
        }
        IdentityArg::Collapse => {
            let mut worst = 0.0f64;
            for l in (5..=500).step_by(5) {
                worst = worst.max(collapse_deviation(n, l as f64 / 1000.0)?);
            }
            Ok(("collapse", worst, 1e-10, 100))
        }
    }
}

fn y_max(y: &MomentVector) -> f64 {
    y.max_abs().max(1.0)
}

fn run_cert(action: CertAction) -> Result<Outcome, CliError> {
    match action {
        CertAction::Build { op, n, rho, k, theta, tol, dump, out } => {
            let rho = rho.get()?;
            let need_k = || k.ok_or_else(|| invalid("--k is required for this operator"));
            let (text, report) = match op {
                BuildOp::SaPlusTop | BuildOp::SaPlusLevel => {
                    let cert = if op == BuildOp::SaPlusTop {
                        build_sa_plus_top(n, rho)?
                    } else {
                        build_sa_plus_chipped(n, rho, need_k()?)?
                    };
                    let rep = check_sa_plus(&cert, &chipped(n, rho)?, tol)?;
                    (dump_sa_plus(&cert), rep)
                }
                BuildOp::LasChipped => {
                    let theta = theta.ok_or_else(|| invalid("--theta is required for las-chipped"))?;
                    let cert = build_las_chipped(n, theta, rho)?;
                    let rep = check_las(&cert, tol)?;
                    (dump_las(&cert), rep)
                }
                BuildOp::LasCropped => {
                    let (cert, chk) = build_las_cropped(n, need_k()?, rho)?;
                    eprintln!(
                        "cut localizer deviations: full cut {:e}, congruence {:e}",
                        chk.full_cut_deviation, chk.congruence_deviation
                    );
                    let rep = check_las(&cert, tol)?;
                    (dump_las(&cert), rep)
                }
            };
            if dump {
                Ok(Outcome { text, failed: false, out: out.out })
            } else {
                let failed = !report.passed;
                Ok(finish(report_records(&report), &out, failed))
            }
        }
        CertAction::Check { input, family, rho, tol, out } => {
            let rho = rho.get()?;
            let text =
                std::fs::read_to_string(&input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
            let parsed = parse_certificate(&text)?;
            let desc = description(family, parsed.n, rho)?;
            let report = match parsed.operator {
                CertOperator::SaPlus => {
                    let cert = SaPlusCertificate::new(parsed.n, parsed.level, parsed.y.clone())?;
                    parsed.expect_family(&cert.family)?;
                    check_sa_plus(&cert, &desc, tol)?
                }
                CertOperator::Las => {
                    let cert = LasCertificate::new(parsed.level, parsed.y.clone(), desc)?;
                    parsed.expect_family(&cert.family)?;
                    check_las(&cert, tol)?
                }
            };
            let failed = !report.passed;
            Ok(finish(report_records(&report), &out, failed))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(o) => {
            let written = match &o.out {
                Some(path) => std::fs::write(path, &o.text).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", o.text);
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return ExitCode::from(2);
            }
            ExitCode::from(if o.failed { 1 } else { 0 })
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::SizeGuard { .. }) { 3 } else { 2 })
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
