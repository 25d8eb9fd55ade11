//! Command-line front end.
//!
//! ```text
//! qdilemma [--p P] [--q Q] [--n N] [--x X] [--gamma G] [--shots S] [--seed S]
//!          [--grid K] [--format text|json|csv] [--output PATH] <COMMAND>
//!
//!   play <PROFILE>                    one game, e.g. `play XIX`
//!   classes                           the ten strategy classes
//!   sweep <x|n|q> [--from A --to B]   equilibrium payoffs and x_c over a grid
//!   xc                                critical corruption and verdict at --x
//!   tomo forward|reconstruct|fidelity|estimate
//! ```
//!
//! Profiles are three letters from {I, H, X}; the leftmost letter is player 1
//! (qubit 0). Payoff parameters are checked for `0 < p < q < n` before anything
//! runs. Failures print one `error:` line on stderr and exit non-zero.

mod output;

use std::f64::consts::FRAC_PI_2;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

pub use output::{emit, format_sig12, Format, Output};

use crate::analysis::{
    critical_corruption, dominance, enumerate_classes, linspace, simulated_mean, sweep,
    CriticalCorruption, SweepTemplate, SweptParameter,
};
use crate::error::{Error, Result};
use crate::game::{output_state, payoff, play, EntanglerParams, PayoffTable, StrategyProfile};
use crate::noise::{corrupted_input, CorruptionModel};
use crate::qlinalg::DensityMatrix;
use crate::tomography::{
    estimate_expectations, expectations, fidelity_report, load_reference_state, parse_fixture,
    parse_tensor, reconstruct, ShotConfig, REFERENCE_STATES,
};

#[derive(Debug, Parser)]
#[command(
    name = "qdilemma",
    version,
    about = "Noisy three-player quantum dilemma game simulator"
)]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Payoff for attending alone / being left out of a pair.
    #[arg(long = "p", global = true, default_value_t = 1.0)]
    pub p: f64,
    /// Payoff when all three attend.
    #[arg(long = "q", global = true, default_value_t = 2.0)]
    pub q: f64,
    /// Payoff scale for pairs and for being betrayed.
    #[arg(long = "n", global = true, default_value_t = 9.0)]
    pub n: f64,
    /// Source corruption probability.
    #[arg(long = "x", global = true, default_value_t = 0.0)]
    pub x: f64,
    /// Entangling strength in radians, within [0, π/2].
    #[arg(long, global = true, default_value_t = FRAC_PI_2)]
    pub gamma: f64,
    /// Shots per Pauli string for `tomo estimate`.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Grid points for sweeps.
    #[arg(long, global = true, default_value_t = crate::analysis::DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play one strategy profile, e.g. XIX.
    Play { profile: String },
    /// Mean payoff of each of the ten strategy classes.
    Classes,
    /// Sweep x, n or q over an inclusive range.
    Sweep {
        #[arg(value_parser = parse_swept)]
        parameter: SweptParameter,
        /// Range start (default 0 for x).
        #[arg(long)]
        from: Option<f64>,
        /// Range end (default 1 for x).
        #[arg(long)]
        to: Option<f64>,
    },
    /// Critical corruption and which equilibrium wins at --x.
    Xc,
    /// Tomography tools.
    #[command(subcommand)]
    Tomo(TomoCommand),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// Output state of the game for this profile (uses --x and --gamma).
    #[arg(long)]
    pub profile: Option<String>,
    /// Bundled reference state name or a matrix file in fixture format.
    #[arg(long)]
    pub state: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum TomoCommand {
    /// Exact Pauli expectation tensor of a state.
    Forward {
        #[command(flatten)]
        source: StateSource,
    },
    /// Linear-inversion reconstruction from a tensor file (`LABEL VALUE` lines).
    Reconstruct { tensor: PathBuf },
    /// Fidelity of a state against a target: a bit string like 101, a profile like XIX, or a state.
    Fidelity {
        #[command(flatten)]
        source: StateSource,
        #[arg(long)]
        target: String,
    },
    /// Finite-shot estimate of the Pauli tensor (uses --shots and --seed).
    Estimate {
        #[command(flatten)]
        source: StateSource,
    },
}

fn parse_swept(s: &str) -> std::result::Result<SweptParameter, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Validated numeric configuration.
struct Validated {
    table: PayoffTable,
    x: f64,
    params: EntanglerParams,
}

impl RunConfig {
    fn validate(&self) -> Result<Validated> {
        Ok(Validated {
            table: PayoffTable::new(self.p, self.q, self.n)?,
            x: CorruptionModel::new(self.x)?.x(),
            params: EntanglerParams::new(self.gamma)?,
        })
    }

    fn params_map(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("p".into(), json!(self.p));
        m.insert("q".into(), json!(self.q));
        m.insert("n".into(), json!(self.n));
        m.insert("x".into(), json!(self.x));
        m.insert("gamma".into(), json!(self.gamma));
        m.insert("seed".into(), json!(self.seed));
        m
    }
}

fn record(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn bits(k: usize) -> String {
    format!("{k:03b}")
}

/// Runs a parsed command and returns its output records.
pub fn run(cli: &Cli) -> Result<Output> {
    let cfg = &cli.config;
    let v = cfg.validate()?;
    let mut params = cfg.params_map();
    let rows = match &cli.command {
        Command::Play { profile } => cmd_play(profile, &v)?,
        Command::Classes => cmd_classes(&v)?,
        Command::Sweep {
            parameter,
            from,
            to,
        } => {
            params.insert("grid".into(), json!(cfg.grid));
            cmd_sweep(*parameter, *from, *to, cfg.grid, cfg, &v)?
        }
        Command::Xc => cmd_xc(&v)?,
        Command::Tomo(sub) => {
            if matches!(sub, TomoCommand::Estimate { .. }) {
                params.insert("shots".into(), json!(cfg.shots));
            }
            cmd_tomo(sub, cfg, &v)?
        }
    };
    Ok(Output::new(params, rows))
}

fn cmd_play(profile: &str, v: &Validated) -> Result<Vec<Map<String, Value>>> {
    let profile: StrategyProfile = profile.parse()?;
    let input = corrupted_input(CorruptionModel::new(v.x)?);
    let dist = play(&profile, &input, v.params)?;
    let pay = payoff(&dist, &v.table);
    let mut row = record(vec![("profile", json!(profile.to_string()))]);
    for (k, &prob) in dist.probs().iter().enumerate() {
        row.insert(format!("p_{}", bits(k)), json!(prob));
    }
    row.insert("payoff_1".into(), json!(pay.player1));
    row.insert("payoff_2".into(), json!(pay.player2));
    row.insert("payoff_3".into(), json!(pay.player3));
    row.insert("mean".into(), json!(pay.mean));
    Ok(vec![row])
}

fn cmd_classes(v: &Validated) -> Result<Vec<Map<String, Value>>> {
    enumerate_classes()
        .into_iter()
        .map(|class| {
            let mean =
                simulated_mean(&class.multiset.canonical_profile(), &v.table, v.x, v.params)?;
            let configs: Vec<String> = class.configurations.iter().map(|p| p.to_string()).collect();
            Ok(record(vec![
                ("label", json!(class.label.roman())),
                ("multiset", json!(class.multiset.letters())),
                ("size", json!(class.size())),
                ("configurations", json!(configs.join(" "))),
                ("mean", json!(mean)),
            ]))
        })
        .collect()
}

fn cmd_sweep(
    parameter: SweptParameter,
    from: Option<f64>,
    to: Option<f64>,
    grid: usize,
    cfg: &RunConfig,
    v: &Validated,
) -> Result<Vec<Map<String, Value>>> {
    let (from, to) = match (parameter, from, to) {
        (_, Some(a), Some(b)) => (a, b),
        (SweptParameter::X, a, b) => (a.unwrap_or(0.0), b.unwrap_or(1.0)),
        _ => {
            return Err(Error::InvalidRange(format!(
                "sweeping {} needs --from and --to",
                parameter.name()
            )))
        }
    };
    let points = linspace(from, to, grid)?;
    let template = SweepTemplate {
        p: cfg.p,
        q: cfg.q,
        n: cfg.n,
        x: v.x,
        params: v.params,
    };
    sweep(&template, parameter, &points)
        .into_iter()
        .map(
            |r| match serde_json::to_value(&r).map_err(|e| Error::Parse(e.to_string()))? {
                Value::Object(m) => Ok(m),
                _ => unreachable!("records serialize as objects"),
            },
        )
        .collect()
}

fn cmd_xc(v: &Validated) -> Result<Vec<Map<String, Value>>> {
    let report = dominance(&v.table, v.x)?;
    let (xc, numerator) = match critical_corruption(&v.table) {
        CriticalCorruption::Crossing { value } => (json!(value), Value::Null),
        CriticalCorruption::NoAdvantage { numerator } => (Value::Null, json!(numerator)),
    };
    Ok(vec![record(vec![
        ("x_c", xc),
        ("quantum_advantage", json!(numerator.is_null())),
        ("no_advantage_numerator", numerator),
        ("quantum_ne_mean", json!(report.quantum_ne_mean)),
        ("classical_ne_mean", json!(report.classical_ne_mean)),
        ("dominant", json!(report.dominant.to_string())),
    ])])
}

fn load_state(arg: &str) -> Result<DensityMatrix> {
    if REFERENCE_STATES.contains(&arg) {
        return load_reference_state(arg);
    }
    let text =
        std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
    parse_fixture(&text)
}

fn game_state(profile: &str, v: &Validated) -> Result<DensityMatrix> {
    let profile: StrategyProfile = profile.parse()?;
    output_state(
        &profile,
        &corrupted_input(CorruptionModel::new(v.x)?),
        v.params,
    )
}

fn resolve_source(source: &StateSource, v: &Validated) -> Result<(String, DensityMatrix)> {
    match (&source.profile, &source.state) {
        (Some(p), None) => Ok((p.to_ascii_uppercase(), game_state(p, v)?)),
        (None, Some(s)) => Ok((s.clone(), load_state(s)?)),
        _ => Err(Error::Parse(
            "give exactly one of --profile or --state".into(),
        )),
    }
}

fn resolve_target(arg: &str, v: &Validated) -> Result<DensityMatrix> {
    if arg.len() == 3 && arg.chars().all(|c| c == '0' || c == '1') {
        let k = usize::from_str_radix(arg, 2).expect("binary digits");
        return DensityMatrix::basis(3, k);
    }
    if arg.len() == 3 && arg.parse::<StrategyProfile>().is_ok() {
        return game_state(arg, v);
    }
    load_state(arg)
}

fn cmd_tomo(sub: &TomoCommand, cfg: &RunConfig, v: &Validated) -> Result<Vec<Map<String, Value>>> {
    match sub {
        TomoCommand::Forward { source } => {
            let (name, rho) = resolve_source(source, v)?;
            let t = expectations(&rho)?;
            Ok(t.entries()
                .map(|(label, value)| {
                    record(vec![
                        ("source", json!(name)),
                        ("pauli", json!(label)),
                        ("value", json!(value)),
                    ])
                })
                .collect())
        }
        TomoCommand::Reconstruct { tensor } => {
            let text = std::fs::read_to_string(tensor)
                .map_err(|e| Error::Io(format!("{}: {e}", tensor.display())))?;
            let rho = reconstruct(&parse_tensor(&text)?)?;
            let mut rows = Vec::with_capacity(64);
            for i in 0..8 {
                for j in 0..8 {
                    let z = rho.get(i, j);
                    rows.push(record(vec![
                        ("row", json!(i)),
                        ("col", json!(j)),
                        ("re", json!(z.re)),
                        ("im", json!(z.im)),
                    ]));
                }
            }
            Ok(rows)
        }
        TomoCommand::Fidelity { source, target } => {
            let (name, rho) = resolve_source(source, v)?;
            let sigma = resolve_target(target, v)?;
            let report = fidelity_report(&rho, &sigma)?;
            Ok(vec![record(vec![
                ("state", json!(name)),
                ("target", json!(target)),
                ("fidelity", json!(report.fidelity)),
                ("clamped_eigenvalue", json!(report.clamped)),
                ("psd_violation", json!(report.flagged)),
                (
                    "state_hermiticity_deviation",
                    json!(rho.hermiticity_deviation()),
                ),
            ])])
        }
        TomoCommand::Estimate { source } => {
            let (name, rho) = resolve_source(source, v)?;
            let exact = expectations(&rho)?;
            let est = estimate_expectations(&rho, ShotConfig::new(cfg.shots, cfg.seed)?)?;
            Ok(est
                .entries()
                .zip(exact.values())
                .map(|((label, value), &truth)| {
                    record(vec![
                        ("source", json!(name)),
                        ("pauli", json!(label)),
                        ("estimate", json!(value)),
                        ("exact", json!(truth)),
                        ("error", json!(value - truth)),
                    ])
                })
                .collect())
        }
    }
}

/// Parses arguments, runs the command and writes its output. Returns the
/// process exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("error: {first}");
            return ExitCode::from(2);
        }
    };
    let result = run(&cli)
        .and_then(|out| emit(&out.render(cli.config.format), cli.config.output.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
