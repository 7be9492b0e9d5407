//! Command-line front end for `discord-core`.
//!
//! [`run_command`] parses an argument vector, runs one operation and returns
//! the exit code with everything destined for standard output and standard
//! error, so the binary is a thin wrapper and tests can drive it in-process.

pub mod error;
pub mod format;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use discord_core::engine::{brute_force_min_conditional_entropy, discord, MeasurementFamily, OptimizerConfig};
use discord_core::entropy::{conditional_entropy, mutual_information, von_neumann};
use discord_core::qstate::{random_density, random_probabilities, ComplexMatrix, DensityMatrix, SeededRng};
use discord_core::structure::{
    certify_zero_discord_seeded, classify_correlations, extend_with_apparatus, generate_zero_discord,
    verify_proof_identities, CorrelationClass, Verdict, DEFAULT_CERTIFY_TOL, DEFAULT_CLASSIFY_TOL,
};
use num_complex::Complex64;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub use error::CliError;
use report::{matrix, num, reals, vector, Report};

#[derive(Debug, Parser)]
#[command(name = "qdiscord", version, about = "Quantum discord, strong subadditivity and zero-discord certification")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Command-specific tolerance (optimizer objective, certification or
    /// classification threshold).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Emit the report as JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Debug, Args)]
struct StateArg {
    /// Path to a `.qst` state file.
    #[arg(long)]
    state: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Von Neumann entropy; marginals, conditional entropy and mutual
    /// information for bipartite input.
    Entropy(StateArg),

    /// Discord D(A:B), measuring the second subsystem.
    Discord {
        #[command(flatten)]
        input: StateArg,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        max_iterations: Option<usize>,
        /// Search rank-1 POVMs instead of projective measurements.
        #[arg(long)]
        povm: bool,
        /// POVM outcome count (implies --povm; default dB²).
        #[arg(long)]
        outcomes: Option<usize>,
        /// Exchange subsystems first, giving D(B:A).
        #[arg(long)]
        swap: bool,
    },

    /// Grid-search minimum of the measured conditional entropy (qubit B).
    Oracle {
        #[command(flatten)]
        input: StateArg,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        swap: bool,
    },

    /// Decide whether the state has zero discord.
    Certify {
        #[command(flatten)]
        input: StateArg,
        #[arg(long)]
        swap: bool,
    },

    /// Record a measurement of B in an apparatus C and write the tripartite
    /// state.
    Extend {
        #[command(flatten)]
        input: StateArg,
        /// `computational` or the path of a matrix file holding the basis
        /// vectors as columns.
        #[arg(long)]
        basis: String,
        /// Output path; the state is printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Compare the apparatus-extension entropies with their closed forms.
    VerifyProof {
        #[command(flatten)]
        input: StateArg,
        #[arg(long)]
        basis: String,
    },

    /// Strong-subadditivity quantity of a tripartite state and its class.
    Ssa(StateArg),

    /// Generate a state file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Comma-separated subsystem dimensions, e.g. `2,3`.
        #[arg(long)]
        dims: String,
        #[arg(long)]
        rank: Option<usize>,
        /// Output path; the state is printed when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Random,
    Pure,
    ZeroDiscord,
    Bell,
    Classical,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Random => "random",
            Kind::Pure => "pure",
            Kind::ZeroDiscord => "zero-discord",
            Kind::Bell => "bell",
            Kind::Classical => "classical",
        }
    }
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the command.
/// Exit codes: 0 success, 1 input error, 2 internal error.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: CliError::Usage(text.clone()).exit_code(),
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

struct LoadedState {
    rho: DensityMatrix,
    path: String,
    sha256: String,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn load_state(path: &Path) -> Result<LoadedState, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Input(format!("{}: not UTF-8 text", path.display())))?;
    let rho = format::parse_state(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(LoadedState {
        rho,
        path: path.display().to_string(),
        sha256: digest(&bytes),
    })
}

fn input_echo(s: &LoadedState) -> Value {
    json!({ "path": s.path, "sha256": s.sha256, "dims": s.rho.dims() })
}

fn maybe_swap(rho: DensityMatrix, swap: bool) -> Result<DensityMatrix, CliError> {
    if swap {
        Ok(rho.swap()?)
    } else {
        Ok(rho)
    }
}

fn load_basis(spec: &str, d: usize) -> Result<ComplexMatrix, CliError> {
    if spec == "computational" {
        return Ok(ComplexMatrix::identity(d));
    }
    let text = fs::read_to_string(spec).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    format::parse_matrix(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")))
}

fn bipartite_b_dim(rho: &DensityMatrix) -> Result<usize, CliError> {
    rho.expect_subsystems(2)?;
    Ok(rho.dims()[1])
}

fn emit(cli: &Cli, r: &Report) -> String {
    if cli.json {
        r.to_json()
    } else {
        r.to_text()
    }
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Entropy(input) => {
            let s = load_state(&input.state)?;
            let mut r = Report::new("entropy");
            r.set("input", input_echo(&s));
            r.set("entropy", num(von_neumann(&s.rho)?));
            if s.rho.num_subsystems() == 2 {
                r.set("entropy_a", num(von_neumann(&s.rho.partial_trace(&[0])?)?));
                r.set("entropy_b", num(von_neumann(&s.rho.partial_trace(&[1])?)?));
                r.set("conditional_entropy_a_given_b", num(conditional_entropy(&s.rho)?));
                r.set("mutual_information", num(mutual_information(&s.rho)?));
            }
            Ok(emit(cli, &r))
        }
        Command::Discord {
            input,
            starts,
            max_iterations,
            povm,
            outcomes,
            swap,
        } => {
            let s = load_state(&input.state)?;
            let rho = maybe_swap(s.rho.clone(), *swap)?;
            let d_b = bipartite_b_dim(&rho)?;
            let defaults = OptimizerConfig::default();
            let outcome_count = match (povm, outcomes) {
                (_, Some(k)) => Some(*k),
                (true, None) => Some(d_b * d_b),
                (false, None) => None,
            };
            let cfg = OptimizerConfig {
                starts: starts.unwrap_or(defaults.starts),
                max_iterations: max_iterations.unwrap_or(defaults.max_iterations),
                tol: cli.tol.unwrap_or(defaults.tol),
                outcome_count,
                seed: cli.seed,
                ..defaults
            };
            let res = discord(&rho, &cfg)?;
            let family = match res.family {
                MeasurementFamily::Projective => "projective".to_string(),
                MeasurementFamily::Povm { outcomes } => format!("povm-{outcomes}"),
            };
            let mut r = Report::new("discord");
            r.set("input", input_echo(&s));
            r.set(
                "config",
                json!({
                    "starts": cfg.starts,
                    "max_iterations": cfg.max_iterations,
                    "refine_top": cfg.refine_top,
                    "refine_iterations": cfg.refine_iterations,
                    "tol": num(cfg.tol),
                    "outcome_count": cfg.outcome_count,
                    "seed": cfg.seed,
                    "swap": swap,
                }),
            );
            r.set("discord", num(res.discord));
            r.set("classical_correlations", num(res.classical_correlations));
            r.set("mutual_information", num(res.mutual_information));
            r.set("min_measured_conditional_entropy", num(res.min_measured_conditional_entropy));
            r.set("starts_used", res.starts_used);
            r.set("converged", res.converged);
            r.set("residual_spread", num(res.residual_spread));
            r.set("family", family);
            r.set("optimum_is_projective", res.optimum_is_projective);
            r.set("evaluations", res.evaluations);
            r.set(
                "optimal_povm",
                Value::Array(res.optimal_povm.vectors().iter().map(|v| vector(v)).collect()),
            );
            Ok(emit(cli, &r))
        }
        Command::Oracle { input, grid, swap } => {
            let s = load_state(&input.state)?;
            let rho = maybe_swap(s.rho.clone(), *swap)?;
            let (h, povm) = brute_force_min_conditional_entropy(&rho, *grid)?;
            let mut r = Report::new("oracle");
            r.set("input", input_echo(&s));
            r.set("config", json!({ "grid": grid, "swap": swap }));
            r.set("min_measured_conditional_entropy", num(h));
            r.set(
                "optimal_povm",
                Value::Array(povm.vectors().iter().map(|v| vector(v)).collect()),
            );
            Ok(emit(cli, &r))
        }
        Command::Certify { input, swap } => {
            let s = load_state(&input.state)?;
            let rho = maybe_swap(s.rho.clone(), *swap)?;
            let tol = cli.tol.unwrap_or(DEFAULT_CERTIFY_TOL);
            let cert = certify_zero_discord_seeded(&rho, tol, cli.seed)?;
            let mut r = Report::new("certify");
            r.set("input", input_echo(&s));
            r.set("config", json!({ "tol": num(tol), "seed": cli.seed, "swap": swap }));
            r.set(
                "verdict",
                match cert.verdict {
                    Verdict::Accepted => "accepted",
                    Verdict::Rejected => "rejected",
                },
            );
            r.set("residual", num(cert.residual));
            r.set("commuting_family_residual", num(cert.commuting_family_residual));
            r.set(
                "reconstruction_residual",
                cert.reconstruction_residual.map_or(Value::Null, num),
            );
            r.set("pointer_basis", cert.pointer_basis.as_ref().map_or(Value::Null, matrix));
            r.set(
                "weights",
                cert.weights.as_ref().map_or(Value::Null, |w| reals(w.as_slice())),
            );
            r.set(
                "conditional_states",
                Value::Array(cert.conditional_states.iter().map(|c| matrix(c.matrix())).collect()),
            );
            Ok(emit(cli, &r))
        }
        Command::Extend { input, basis, out } => {
            let s = load_state(&input.state)?;
            let d_b = bipartite_b_dim(&s.rho)?;
            let u = load_basis(basis, d_b)?;
            let ext = extend_with_apparatus(&s.rho, &u)?;
            let mut meta = BTreeMap::new();
            meta.insert("source_sha256".to_string(), s.sha256.clone());
            meta.insert("basis".to_string(), basis.clone());
            let text = format::serialize_state_with_metadata(&ext.rho_abc, &meta);
            match out {
                None => Ok(text),
                Some(path) => {
                    fs::write(path, &text)?;
                    let mut r = Report::new("extend");
                    r.set("input", input_echo(&s));
                    r.set("config", json!({ "basis": basis }));
                    r.set(
                        "output",
                        json!({ "path": path.display().to_string(), "sha256": digest(text.as_bytes()), "dims": ext.rho_abc.dims() }),
                    );
                    Ok(emit(cli, &r))
                }
            }
        }
        Command::VerifyProof { input, basis } => {
            let s = load_state(&input.state)?;
            let d_b = bipartite_b_dim(&s.rho)?;
            let u = load_basis(basis, d_b)?;
            let rep = verify_proof_identities(&s.rho, &u)?;
            let mut r = Report::new("verify-proof");
            r.set("input", input_echo(&s));
            r.set("config", json!({ "basis": basis }));
            r.set("h_abc", num(rep.h_abc));
            r.set("h_ab_reduced", num(rep.h_ab_reduced));
            r.set("h_bc_reduced", num(rep.h_bc_reduced));
            r.set("h_b_reduced", num(rep.h_b_reduced));
            r.set("target_h_ab", num(rep.target_h_ab));
            r.set("target_h_p_plus_average", num(rep.target_h_p_plus_average));
            r.set("target_h_b", num(rep.target_h_b));
            r.set("target_h_p", num(rep.target_h_p));
            r.set("max_deviation", num(rep.max_deviation));
            r.set("ssa_gap", num(rep.ssa_gap));
            r.set("measured_minus_conditional", num(rep.measured_minus_conditional));
            Ok(emit(cli, &r))
        }
        Command::Ssa(input) => {
            let s = load_state(&input.state)?;
            let tol = cli.tol.unwrap_or(DEFAULT_CLASSIFY_TOL);
            let c = classify_correlations(&s.rho, tol)?;
            let mut r = Report::new("ssa");
            r.set("input", input_echo(&s));
            r.set("config", json!({ "tol": num(tol) }));
            r.set("ssa_quantity", num(c.ssa_quantity));
            r.set(
                "classification",
                match c.class {
                    CorrelationClass::QuantumPositive => "quantum_positive",
                    CorrelationClass::ClassicalZero => "classical_zero",
                },
            );
            Ok(emit(cli, &r))
        }
        Command::Gen { kind, dims, rank, out } => {
            let dims = parse_dims(dims)?;
            let rho = generate(*kind, &dims, *rank, cli.seed)?;
            let mut meta = BTreeMap::new();
            meta.insert("kind".to_string(), kind.name().to_string());
            meta.insert("seed".to_string(), cli.seed.to_string());
            let text = format::serialize_state_with_metadata(&rho, &meta);
            match out {
                None => Ok(text),
                Some(path) => {
                    fs::write(path, &text)?;
                    let mut r = Report::new("gen");
                    r.set(
                        "config",
                        json!({ "kind": kind.name(), "dims": dims, "rank": rank, "seed": cli.seed }),
                    );
                    r.set(
                        "output",
                        json!({ "path": path.display().to_string(), "sha256": digest(text.as_bytes()) }),
                    );
                    Ok(emit(cli, &r))
                }
            }
        }
    }
}

fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    let dims = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|&d| d >= 1)
                .ok_or_else(|| CliError::Input(format!("bad dimension `{t}` in --dims")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if dims.len() > 3 {
        return Err(CliError::Input("--dims takes two or three dimensions (one for single systems)".into()));
    }
    Ok(dims)
}

fn generate(kind: Kind, dims: &[usize], rank: Option<usize>, seed: u64) -> Result<DensityMatrix, CliError> {
    let d: usize = dims.iter().product();
    let mut rng = SeededRng::new(seed);
    let rho = match kind {
        Kind::Random => random_density(d, rank.unwrap_or(d), &mut rng)?.with_dims(dims.to_vec())?,
        Kind::Pure => random_density(d, 1, &mut rng)?.with_dims(dims.to_vec())?,
        Kind::ZeroDiscord => {
            if dims.len() != 2 {
                return Err(CliError::Input("zero-discord states need --dims dA,dB".into()));
            }
            generate_zero_discord(dims[0], dims[1], &mut rng)?
        }
        Kind::Bell => {
            if dims.len() != 2 || dims[0] != dims[1] {
                return Err(CliError::Input("bell states need --dims d,d".into()));
            }
            let n = dims[0];
            let mut psi = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                psi[i * n + i] = Complex64::new(1.0, 0.0);
            }
            DensityMatrix::pure(&psi, dims.to_vec())?
        }
        Kind::Classical => {
            let p = random_probabilities(d, &mut rng);
            DensityMatrix::diagonal(&p, dims.to_vec())?
        }
    };
    Ok(rho)
}
