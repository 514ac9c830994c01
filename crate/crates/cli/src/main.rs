use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jointur::statistics::StatKind;

mod commands;
mod output;

use commands::{Angles, CliError, Report};
use output::Format;

/// Noisy simultaneous measurement of σx and σz on a qubit: entropies,
/// majorization bounds and duality, as CSV or JSON tables.
///
/// Angles are radians unless --degrees is given; the flag applies to both
/// angle inputs (--delta) and angle columns (theta). Exit status is 0 on
/// success, 1 when a verification command finds a violated check and 2 for
/// usage or domain errors.
#[derive(Parser, Debug)]
#[command(name = "jointur", version, about, long_about)]
struct Cli {
    /// Output format: CSV with a header row, or a JSON array of records.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    /// Significant digits for real-valued cells.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(1..=17), global = true)]
    precision: u8,

    /// Read and write angles in degrees instead of radians.
    #[arg(long, global = true)]
    degrees: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Joint,
    MarginalProduct,
    IntrinsicProduct,
}

impl From<Kind> for StatKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Joint => StatKind::Joint,
            Kind::MarginalProduct => StatKind::MarginalProduct,
            Kind::IntrinsicProduct => StatKind::IntrinsicProduct,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalized Rényi entropy along the XZ great circle.
    ///
    /// Columns: theta, then alpha_<A> for each requested index in the order
    /// given. Each alpha column is (R - R_min) / (R_max - R_min) with the
    /// extremes taken over the circle |s| = smag. theta runs over [0, 2π]
    /// with both ends included.
    ScanTheta {
        #[arg(long, value_enum, default_value = "joint")]
        kind: Kind,
        /// Entropic indices; `inf` selects the min-entropy.
        #[arg(long, num_args = 1.., default_values_t = vec![1.0])]
        alpha: Vec<f64>,
        /// Apparatus angle δ in [0, π/2] [default: π/4].
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        /// Bloch vector length |s|.
        #[arg(long, default_value_t = 1.0)]
        smag: f64,
        /// Number of theta samples.
        #[arg(long, default_value_t = 721)]
        points: usize,
    },
    /// Entropy difference between extreme and intermediate states.
    ///
    /// Columns: alpha, dR_joint, dR_marginal_product, dR_intrinsic_product.
    /// dR = R(extreme-z, +) - R(intermediate, +, +) at the same |s|; alpha
    /// runs over LO + STEP, LO + 2 STEP, ... up to HI.
    DeltaR {
        #[arg(long, num_args = 3, value_names = ["LO", "HI", "STEP"], default_values_t = vec![0.0, 5.0, 0.01])]
        alpha_range: Vec<f64>,
        /// Apparatus angle δ in [0, π/2] [default: π/4].
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        smag: f64,
    },
    /// Entropic indices at which extreme and intermediate states swap order.
    ///
    /// Columns: kind, extreme, segment, alpha_lo, alpha_hi, sign. Each kind
    /// contributes one row per segment of (0, alpha-max] between consecutive
    /// roots of dR; sign is the sign of dR on that segment and `extreme`
    /// names the extreme state used. Interior alpha_hi values are the roots.
    CriticalAlpha {
        /// Restrict to one kind [default: all three].
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        /// Apparatus angle δ in [0, π/2] [default: π/4].
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        smag: f64,
        #[arg(long, default_value_t = jointur::entropy::ALPHA_MAX)]
        alpha_max: f64,
    },
    /// Constant vectors majorizing every state's statistics.
    ///
    /// Columns: kind, w1..w4 (computed bound), closed_w1..closed_w4 and
    /// max_deviation (filled only at δ = π/4), attainability_gap (smallest
    /// max-norm distance from any state's sorted statistics to the bound),
    /// then vs_joint, vs_marginal_product, vs_intrinsic_product with the
    /// verdict of this row's bound against that column's. Exits 1 when a
    /// deviation exceeds 1e-6.
    Bounds {
        /// Apparatus angle δ in [0, π/2] [default: π/4].
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
    },
    /// Majorization verdict between two distributions.
    ///
    /// Columns: p, q, verdict, witness_k1, witness_k2. verdict is one of
    /// Equal, Majorizes (q ≺ p), MajorizedBy (p ≺ q) or Incomparable. For
    /// incomparable inputs the witnesses are 1-based prefix lengths: at k1
    /// q's sorted prefix sum is larger, at k2 p's is.
    ///
    /// Vectors are comma-separated numbers or one of lambda-tilde, mu-tilde,
    /// lambda-tilde-prime, mu-tilde-prime, lambda, mu, omega-tilde,
    /// omega-tilde-prime, omega (evaluated at --smag and --delta).
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = jointur::majorization::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 1.0)]
        smag: f64,
        /// Apparatus angle δ in [0, π/2] [default: π/4].
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
    },
    /// Distinguishability, visibility and predictability for pure states.
    ///
    /// Columns: theta, D, V, P, sum_sq (= D² + V²). theta runs over [0, π]
    /// with both ends included.
    Duality {
        /// Apparatus angle δ in [0, π/2] [default: π/4].
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 181)]
        points: usize,
    },
    /// Cross-check of the closed-form statistics against the Hilbert-space model.
    ///
    /// Columns: trials, seed, tol, max_joint_deviation,
    /// max_marginal_deviation, status. Exits 1 when the larger deviation
    /// exceeds --tol.
    OracleCheck {
        #[arg(long, default_value_t = 1000, value_parser = parse_trials)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Purity below which the intermediate joint statistics are majorized
    /// by the intrinsic ones.
    ///
    /// Columns: threshold, closed_form, deviation, smag_below,
    /// verdict_below, smag_above, verdict_above, status. The verdicts compare
    /// the intermediate joint and intrinsic-product statistics at δ = π/4,
    /// 0.01 on either side of the threshold. Exits 1 if the bracket fails.
    Threshold,
}

fn parse_trials(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let angles = Angles { degrees: cli.degrees };
    match &cli.command {
        Command::ScanTheta {
            kind,
            alpha,
            delta,
            smag,
            points,
        } => commands::scan_theta(angles, (*kind).into(), alpha, *delta, *smag, *points),
        Command::DeltaR {
            alpha_range,
            delta,
            smag,
        } => commands::delta_r_table(alpha_range[0], alpha_range[1], alpha_range[2], *delta, *smag, angles),
        Command::CriticalAlpha {
            kind,
            delta,
            smag,
            alpha_max,
        } => {
            let kinds: Vec<StatKind> = match kind {
                Some(k) => vec![(*k).into()],
                None => StatKind::ALL.to_vec(),
            };
            commands::critical_alpha(&kinds, *delta, *smag, *alpha_max, angles)
        }
        Command::Bounds { delta } => commands::bounds(*delta, angles),
        Command::Compare { p, q, tol, smag, delta } => commands::compare_vectors(p, q, *tol, *smag, *delta, angles),
        Command::Duality { delta, points } => commands::duality(*delta, *points, angles),
        Command::OracleCheck { trials, seed, tol } => commands::oracle_check(*trials, *seed, *tol),
        Command::Threshold => commands::threshold(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = report.table.render(cli.format, usize::from(cli.precision));
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            match report.failure {
                Some(msg) => {
                    eprintln!("jointur: check failed: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("jointur: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("jointur: {msg}");
            ExitCode::from(1)
        }
    }
}
