//! Argument parsing and dispatch. Exit codes: 0 success or pass, 1 a
//! verification failed, 2 bad input or any other error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tecost_core::channels::{parse_channel, write_channel};
use tecost_core::fidelity::fmin_descent;
use tecost_core::tecost::{
    channel_cost, chau_comparison, cost_energy_product, fastest_state_time, orthogonalization_time, teur_bound_check,
};
use tecost_core::{Complex64, ComplexMatrix, KrausChannel, PureState};

use crate::commands::{self, DEFAULT_SWEEP_POINTS};
use crate::error::{CliError, CliResult};
use crate::family;
use crate::report::{self, num, FidelityReport, TeCostReport};
use crate::settings::{Format, Overrides, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tecost",
    version,
    about = "Time-energy cost and minimum entanglement fidelity of quantum channels"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Master seed for every randomized step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Restarts for both solvers.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Solver tolerance (gradient norm for F_min, certified gap for the cost).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Verification tolerance on |F_min − max(cos, 0)|.
    #[arg(long, global = true)]
    pub gap_tol: Option<f64>,
    /// Iteration cap for both solvers.
    #[arg(long, global = true)]
    pub iters: Option<usize>,
    /// Step scale c of the c/√k supergradient ascent.
    #[arg(long, global = true)]
    pub step_c: Option<f64>,
    /// Reduced Planck constant.
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key = value file with defaults for the flags above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

impl GlobalArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            format: self.format,
            seed: self.seed,
            restarts: self.restarts,
            tol: self.tol,
            gap_tol: self.gap_tol,
            iters: self.iters,
            step_c: self.step_c,
            hbar: self.hbar,
            out: self.out.clone(),
        }
    }

    pub fn settings(&self) -> CliResult<Settings> {
        let file = match &self.config {
            Some(path) => Overrides::load_config(path)?,
            None => Overrides::default(),
        };
        Settings::resolve(self.overrides().or(file))
    }
}

/// Exactly one of a channel file or an inline family spec.
#[derive(Debug, Args)]
pub struct ChannelInput {
    /// Channel file (JSON Kraus operators).
    #[arg(long, required_unless_present = "family", conflicts_with = "family")]
    pub file: Option<PathBuf>,
    /// Inline family spec, e.g. depolarizing:n=3,q=0.2.
    #[arg(long)]
    pub family: Option<String>,
    /// Accept files whose Kraus operators are not complete.
    #[arg(long, requires = "file")]
    pub allow_incomplete: bool,
}

impl ChannelInput {
    pub fn load(&self) -> CliResult<(KrausChannel, String)> {
        match (&self.file, &self.family) {
            (Some(path), None) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok((parse_channel(&text, self.allow_incomplete)?, path.display().to_string()))
            }
            (None, Some(spec)) => Ok((family::build(spec)?, spec.clone())),
            _ => Err(CliError::Usage("give exactly one of --file or --family".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a channel file: shape, completeness residual, Choi positivity.
    Validate { path: PathBuf },
    /// Time-energy cost ‖K‖ and cos‖K‖.
    Tecost(ChannelInput),
    /// Minimum entanglement fidelity by gradient descent.
    Fmin(ChannelInput),
    /// Check F_min = max(cos‖K‖, 0) with both solvers; exit 1 on a gap.
    Verify(ChannelInput),
    /// Depolarizing solver outputs against the closed forms.
    SweepDepolarizing {
        #[arg(long)]
        n: usize,
        /// Explicit q values (comma separated); default is an even grid.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Option<Vec<f64>>,
        /// Grid size when --q is absent.
        #[arg(long, default_value_t = DEFAULT_SWEEP_POINTS)]
        points: usize,
    },
    /// Verify seeded random channels for every (n, d) pair.
    RandomSuite {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4])]
        d: Vec<usize>,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
    /// Time-energy uncertainty calculators.
    #[command(subcommand)]
    Teur(TeurCommand),
    /// Write a family channel as a channel file.
    WriteChannel {
        #[arg(long)]
        family: String,
    },
}

/// Energy interval as --e-max/--e-min or as --spread (with e_min = 0).
#[derive(Debug, Args)]
pub struct Interval {
    #[arg(long, allow_hyphen_values = true)]
    pub e_max: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_min: Option<f64>,
    #[arg(long, conflicts_with_all = ["e_max", "e_min"])]
    pub spread: Option<f64>,
}

impl Interval {
    fn resolve(&self) -> CliResult<(f64, f64)> {
        match (self.spread, self.e_max, self.e_min) {
            (Some(s), None, None) => Ok((s, 0.0)),
            (None, Some(hi), Some(lo)) => Ok((hi, lo)),
            _ => Err(CliError::Usage("give --spread or both --e-max and --e-min".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum TeurCommand {
    /// πħ/(E_max − E_min)
    Orthogonalization(Interval),
    /// 2ħ·arccos(F)/(E_max − E_min)
    Fastest {
        #[arg(long)]
        fidelity: f64,
        #[command(flatten)]
        interval: Interval,
    },
    /// Chau's ħ/(Aε) against πħ/(2ε).
    Chau {
        #[arg(long)]
        epsilon: f64,
    },
    /// (E_max − E_min)·t/(2ħ)
    Product {
        #[command(flatten)]
        interval: Interval,
        #[arg(long)]
        time: f64,
    },
    /// Evolve a state under a diagonal Hamiltonian and check t·ΔE ≥ ħ·arccos F.
    Check {
        /// Diagonal energies of H.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        energies: Vec<f64>,
        /// Amplitudes, each `re` or `re:im`; normalized before use.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        state: Vec<String>,
        #[arg(long)]
        time: f64,
    },
}

/// Rendered output plus the exit code it implies.
struct Rendered {
    text: String,
    code: i32,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

fn parse_amplitude(s: &str) -> CliResult<Complex64> {
    let bad = || CliError::Usage(format!("cannot parse amplitude `{s}`"));
    let (re, im) = s.split_once(':').unwrap_or((s, "0"));
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn run_command(cli: &Cli, settings: &Settings) -> CliResult<Rendered> {
    let fmt = settings.format;
    let seed = settings.seed;
    match &cli.command {
        Command::Validate { path } => {
            let v = commands::validate(path)?;
            let text = match fmt {
                Format::Json => report::json("validate", seed, &path.display().to_string(), &v)?,
                Format::Csv => report::csv_table(
                    &["n", "d", "completeness_residual", "choi_psd", "choi_min_eigenvalue", "valid"],
                    [vec![
                        v.n.to_string(),
                        v.d.to_string(),
                        num(v.completeness_residual),
                        v.choi_psd.to_string(),
                        num(v.choi_min_eigenvalue),
                        v.valid.to_string(),
                    ]],
                )?,
                Format::Human => format!(
                    "file             {}\nn                {}\nd                {}\nresidual         {:.3e} (tolerance {:.0e})\nChoi PSD         {} (min eigenvalue {:.3e})\nvalid            {}\n",
                    path.display(),
                    v.n,
                    v.d,
                    v.completeness_residual,
                    v.completeness_tol,
                    v.choi_psd,
                    v.choi_min_eigenvalue,
                    v.valid
                ),
            };
            Ok(Rendered {
                text,
                code: if v.valid { EXIT_OK } else { EXIT_FAIL },
            })
        }
        Command::Tecost(input) => {
            let (channel, name) = input.load()?;
            let r = TeCostReport::from(&channel_cost(&channel, &settings.cost)?);
            Ok(Rendered::ok(match fmt {
                Format::Json => report::json("tecost", seed, &name, &r)?,
                Format::Csv => r.csv()?,
                Format::Human => r.human(&name, seed),
            }))
        }
        Command::Fmin(input) => {
            let (channel, name) = input.load()?;
            let r = FidelityReport::from(&fmin_descent(&channel, &settings.fmin)?);
            Ok(Rendered::ok(match fmt {
                Format::Json => report::json("fmin", seed, &name, &r)?,
                Format::Csv => r.csv()?,
                Format::Human => r.human(&name, seed),
            }))
        }
        Command::Verify(input) => {
            let (channel, name) = input.load()?;
            let r = commands::verify(&channel, &name, settings)?;
            let text = match fmt {
                Format::Json => report::json("verify", seed, &name, &r)?,
                Format::Csv => r.csv()?,
                Format::Human => r.human(seed),
            };
            Ok(Rendered {
                text,
                code: if r.pass { EXIT_OK } else { EXIT_FAIL },
            })
        }
        Command::SweepDepolarizing { n, q, points } => {
            let qs = match q {
                Some(qs) => qs.clone(),
                None => commands::q_grid(*n, *points)?,
            };
            let rows = commands::sweep_depolarizing(*n, &qs, settings)?;
            let failed = rows
                .iter()
                .any(|r| r.fmin_gap > settings.gap_tol || r.cost_gap > settings.gap_tol);
            let text = match fmt {
                Format::Json => report::json("sweep-depolarizing", seed, &format!("depolarizing:n={n}"), &rows)?,
                Format::Csv => report::sweep_csv(&rows)?,
                Format::Human => report::sweep_human(*n, &rows),
            };
            Ok(Rendered {
                text,
                code: if failed { EXIT_FAIL } else { EXIT_OK },
            })
        }
        Command::RandomSuite { n, d, trials } => {
            let suite = commands::random_suite(n, d, *trials, settings)?;
            let bad = suite.summary.failures + suite.summary.one_sided_failures > 0;
            let text = match fmt {
                Format::Json => report::json("random-suite", seed, "random", &suite)?,
                Format::Csv => {
                    eprint!("{}", suite.summary_human());
                    suite.csv()?
                }
                Format::Human => suite.human(),
            };
            Ok(Rendered {
                text,
                code: if bad { EXIT_FAIL } else { EXIT_OK },
            })
        }
        Command::Teur(sub) => teur(sub, settings),
        Command::WriteChannel { family: spec } => {
            let mut text = write_channel(&family::build(spec)?);
            text.push('\n');
            Ok(Rendered::ok(text))
        }
    }
}

fn kv_output(settings: &Settings, command: &str, pairs: &[(&str, f64)]) -> CliResult<String> {
    Ok(match settings.format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = pairs
                .iter()
                .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                .collect();
            report::json(command, settings.seed, command, &map)?
        }
        Format::Csv => report::csv_table(
            &pairs.iter().map(|(k, _)| *k).collect::<Vec<_>>(),
            [pairs.iter().map(|(_, v)| num(*v)).collect()],
        )?,
        Format::Human => pairs.iter().map(|(k, v)| format!("{k:<16} {v:.9}\n")).collect(),
    })
}

fn teur(sub: &TeurCommand, settings: &Settings) -> CliResult<Rendered> {
    let hbar = settings.hbar;
    match sub {
        TeurCommand::Orthogonalization(interval) => {
            let (hi, lo) = interval.resolve()?;
            let t = orthogonalization_time(hi, lo, hbar)?;
            Ok(Rendered::ok(kv_output(
                settings,
                "teur-orthogonalization",
                &[("time", t)],
            )?))
        }
        TeurCommand::Fastest { fidelity, interval } => {
            let (hi, lo) = interval.resolve()?;
            let t = fastest_state_time(*fidelity, hi, lo, hbar)?;
            Ok(Rendered::ok(kv_output(settings, "teur-fastest", &[("time", t)])?))
        }
        TeurCommand::Chau { epsilon } => {
            let c = chau_comparison(*epsilon, hbar)?;
            Ok(Rendered::ok(kv_output(
                settings,
                "teur-chau",
                &[("chau_time", c.chau_time), ("fastest_time", c.fastest_time)],
            )?))
        }
        TeurCommand::Product { interval, time } => {
            let (hi, lo) = interval.resolve()?;
            let c = cost_energy_product(hi, lo, *time, hbar)?;
            Ok(Rendered::ok(kv_output(settings, "teur-product", &[("cost", c)])?))
        }
        TeurCommand::Check { energies, state, time } => {
            if energies.len() != state.len() {
                return Err(CliError::Usage(format!(
                    "{} energies but {} amplitudes",
                    energies.len(),
                    state.len()
                )));
            }
            let amps = state
                .iter()
                .map(|s| parse_amplitude(s))
                .collect::<CliResult<Vec<_>>>()?;
            let psi = PureState::normalized(amps)?;
            let h = ComplexMatrix::from_real_diag(energies);
            let r = teur_bound_check(&h, &psi, *time, hbar)?;
            let values = [
                ("e_max", r.e_max),
                ("e_min", r.e_min),
                ("time", r.time),
                ("hbar", r.hbar),
                ("cost", r.cost),
                ("fidelity", r.fidelity),
                ("delta_e", r.delta_e),
                ("lhs", r.time * r.delta_e),
                ("rhs", r.hbar * r.fidelity.min(1.0).acos()),
            ];
            let mut text = kv_output(settings, "teur-check", &values)?;
            if settings.format == Format::Human {
                text.push_str(&format!("bound_satisfied  {}\n", r.bound_satisfied));
            }
            Ok(Rendered {
                text,
                code: if r.bound_satisfied { EXIT_OK } else { EXIT_FAIL },
            })
        }
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output to `stdout` or the `--out` file. Errors go to `stderr`. Returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let outcome = cli.global.settings().and_then(|settings| {
        let rendered = run_command(&cli, &settings)?;
        match &settings.out {
            Some(path) => std::fs::write(path, &rendered.text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?,
            None => stdout.write_all(rendered.text.as_bytes())?,
        }
        Ok(rendered.code)
    });
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}
