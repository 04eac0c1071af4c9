use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use qkdsim::channel::NoiseModel;
use qkdsim::distill::ReconcileParams;
use qkdsim::eve::{EntanglingProbe, EveStrategy, UnitaryProbe};
use qkdsim::otp::otp_xor;
use qkdsim::protocol::{run_session_detailed, run_session_timed, Protocol, SessionConfig};
use qkdsim::report::ReportDocument;
use qkdsim::transcript::bits_fingerprint;
use qkdsim::{fixtures, Bitstring, ProtocolError};

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_KEY_REUSE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qkdsim",
    version,
    about = "Seeded BB84/B92 quantum key distribution simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one session and print its report.
    Run(RunArgs),
    /// Run sessions over a parameter grid and print CSV.
    Sweep(SweepArgs),
    /// Replay a worked example and check the result.
    Fixture {
        #[arg(value_parser = ["fig6a", "fig6b", "vernam", "all"])]
        name: String,
    },
    /// One-time pad with a key-reuse ledger.
    Otp {
        #[command(subcommand)]
        op: OtpOp,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EveKind {
    None,
    Opaque,
    Translucent,
    Entangle,
    Pns,
}

/// Session flags. Unset flags fall back to the config file, then to defaults.
#[derive(Args, Clone, Default)]
struct SessionArgs {
    /// key = value file; flags given on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    protocol: Option<String>,
    /// Number of pulses.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Probability of a 90° polarization flip per pulse.
    #[arg(long)]
    flip: Option<f64>,
    /// Probability that a pulse is lost.
    #[arg(long)]
    loss: Option<f64>,
    /// Probability of a two-photon pulse.
    #[arg(long)]
    multi: Option<f64>,
    /// B92 half-angle in radians.
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, value_enum)]
    eve: Option<EveKind>,
    /// Opaque: intercepted fraction. Translucent/entangle: interaction strength in [0, 1].
    #[arg(long)]
    eve_frac: Option<f64>,
    /// Fraction of the raw key disclosed for error estimation.
    #[arg(long)]
    sample_frac: Option<f64>,
    /// Abort threshold on the estimated error rate.
    #[arg(long)]
    rmax: Option<f64>,
    /// Security parameter s.
    #[arg(long)]
    sec_param: Option<usize>,
    /// c in the leak bound k = ceil(c R n).
    #[arg(long)]
    leak_factor: Option<f64>,
    /// Consecutive clean subset checks that end reconciliation.
    #[arg(long)]
    n_clean: Option<usize>,
    #[arg(long)]
    max_passes: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    session: SessionArgs,
    /// Print the JSON report (the default).
    #[arg(long, conflicts_with = "summary")]
    json: bool,
    /// Print a short human-readable summary instead of JSON.
    #[arg(long)]
    summary: bool,
    /// Write the public transcript to FILE.
    #[arg(long, value_name = "FILE")]
    dump_transcript: Option<PathBuf>,
    /// Include wall-clock timings (makes the output non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Vary {
    EveFrac,
    Theta,
    Flip,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    session: SessionArgs,
    #[arg(long, value_enum)]
    vary: Vary,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long, default_value_t = 5)]
    steps: usize,
    /// Sessions per grid point; point i, repeat r uses seed + i*repeats + r.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Raw bytes.
    #[default]
    Raw,
    /// ASCII 0/1 characters; whitespace ignored.
    Bits,
    /// Hexadecimal text; whitespace ignored.
    Hex,
}

#[derive(Args)]
struct OtpArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_name = "FILE")]
    key: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Used-key ledger: one `fingerprint TAB timestamp` line per key.
    #[arg(long, value_name = "FILE", default_value = "qkdsim-ledger.tsv")]
    ledger: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Subcommand)]
enum OtpOp {
    Encrypt(OtpArgs),
    Decrypt(OtpArgs),
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<ProtocolError> for Failure {
    fn from(e: ProtocolError) -> Self {
        let code = match e {
            ProtocolError::LengthMismatch { .. } => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<(), Failure>;

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, Failure> {
    v.parse()
        .map_err(|_| Failure::usage(format!("bad value {v:?} for {key}")))
}

impl SessionArgs {
    /// Fills unset fields from a `key = value` file.
    fn apply_file(&mut self, path: &Path) -> CliResult {
        let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Failure::usage(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    lineno + 1
                )));
            };
            let (k, v) = (k.trim().replace('_', "-"), v.trim());
            macro_rules! fill {
                ($field:ident) => {
                    if self.$field.is_none() {
                        self.$field = Some(parse(&k, v)?);
                    }
                };
            }
            match k.as_str() {
                "protocol" => fill!(protocol),
                "n" | "n-pulses" => fill!(n),
                "seed" => fill!(seed),
                "flip" => fill!(flip),
                "loss" => fill!(loss),
                "multi" => fill!(multi),
                "theta" => fill!(theta),
                "eve" => {
                    if self.eve.is_none() {
                        self.eve = Some(EveKind::from_str(v, true).map_err(Failure::usage)?);
                    }
                }
                "eve-frac" => fill!(eve_frac),
                "sample-frac" => fill!(sample_frac),
                "rmax" => fill!(rmax),
                "sec-param" => fill!(sec_param),
                "leak-factor" => fill!(leak_factor),
                "n-clean" => fill!(n_clean),
                "max-passes" => fill!(max_passes),
                other => {
                    return Err(Failure::usage(format!(
                        "{}:{}: unknown key {other:?}",
                        path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }

    fn resolve(mut self) -> Result<SessionConfig, Failure> {
        if let Some(path) = self.config.clone() {
            self.apply_file(&path)?;
        }
        let d = SessionConfig::default();
        let protocol: Protocol = match &self.protocol {
            Some(p) => p.parse()?,
            None => d.protocol,
        };
        let theta = self.theta.unwrap_or(d.theta);
        let frac = self.eve_frac.unwrap_or(1.0);
        let eve = match self.eve.unwrap_or(EveKind::None) {
            EveKind::None => EveStrategy::NoEve,
            EveKind::Opaque => EveStrategy::Opaque { fraction: frac },
            EveKind::Translucent => {
                EveStrategy::TranslucentUnitary(UnitaryProbe::with_strength(theta, frac).map_err(ProtocolError::from)?)
            }
            EveKind::Entangle => EveStrategy::TranslucentEntangling(
                EntanglingProbe::with_strength(theta, frac).map_err(ProtocolError::from)?,
            ),
            EveKind::Pns => EveStrategy::PhotonNumberSplit,
        };
        let dr = ReconcileParams::default();
        let cfg = SessionConfig {
            protocol,
            n_pulses: self.n.unwrap_or(d.n_pulses),
            theta,
            noise: NoiseModel {
                flip_p: self.flip.unwrap_or(0.0),
                loss_p: self.loss.unwrap_or(0.0),
                multi_p: self.multi.unwrap_or(0.0),
            },
            eve,
            sample_fraction: self.sample_frac.unwrap_or(d.sample_fraction),
            r_max: self.rmax.unwrap_or(d.r_max),
            reconcile: ReconcileParams {
                n_clean: self.n_clean.unwrap_or(dr.n_clean),
                max_passes: self.max_passes.unwrap_or(dr.max_passes),
                ..dr
            },
            s: self.sec_param.unwrap_or(d.s),
            leak_factor: self.leak_factor.unwrap_or(d.leak_factor),
            seed: self.seed.unwrap_or(d.seed),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn cmd_run(args: RunArgs) -> CliResult {
    let cfg = args.session.resolve()?;
    let outcome = if args.timings {
        run_session_timed(&cfg)?
    } else {
        run_session_detailed(&cfg)?
    };
    if let Some(path) = &args.dump_transcript {
        fs::write(path, outcome.transcript.serialize()).map_err(|e| Failure::io(path, e))?;
    }
    let doc = ReportDocument::new(&cfg, &outcome);
    if args.summary {
        print!("{}", doc.summary());
    } else {
        println!("{}", doc.to_json());
    }
    Ok(())
}

struct Row {
    param: f64,
    error_rate: f64,
    conclusive_rate: f64,
    final_len: f64,
    aborted: f64,
}

fn cmd_sweep(args: SweepArgs) -> CliResult {
    if args.steps < 1 || args.repeats < 1 {
        return Err(Failure::usage("--steps and --repeats must be at least 1"));
    }
    let base_seed = args.session.seed.unwrap_or(0);
    let grid: Vec<f64> = (0..args.steps)
        .map(|i| {
            if args.steps == 1 {
                args.from
            } else {
                args.from + (args.to - args.from) * i as f64 / (args.steps - 1) as f64
            }
        })
        .collect();
    // Resolve every configuration up front so usage errors surface before any work.
    let mut jobs = Vec::with_capacity(grid.len() * args.repeats);
    for (i, &x) in grid.iter().enumerate() {
        for r in 0..args.repeats {
            let mut s = args.session.clone();
            match args.vary {
                Vary::EveFrac => s.eve_frac = Some(x),
                Vary::Theta => s.theta = Some(x),
                Vary::Flip => s.flip = Some(x),
            }
            s.seed = Some(base_seed.wrapping_add((i * args.repeats + r) as u64));
            jobs.push(s.resolve()?);
        }
    }
    let reports = jobs
        .par_iter()
        .map(run_session_detailed)
        .collect::<Result<Vec<_>, _>>()?;
    let rows = grid.iter().enumerate().map(|(i, &param)| {
        let chunk = &reports[i * args.repeats..(i + 1) * args.repeats];
        let m = chunk.len() as f64;
        let mean =
            |f: &dyn Fn(&qkdsim::protocol::RunReport) -> f64| chunk.iter().map(|o| f(&o.report)).sum::<f64>() / m;
        Row {
            param,
            error_rate: mean(&|r| r.sifted_error_rate.unwrap_or(0.0)),
            conclusive_rate: mean(&|r| r.sifted_count as f64 / r.n_pulses as f64),
            final_len: mean(&|r| r.final_key_length as f64),
            aborted: mean(&|r| r.aborted as u8 as f64),
        }
    });
    let mut out = io::stdout().lock();
    let w = |e: io::Error| Failure {
        code: EXIT_IO,
        message: e.to_string(),
    };
    writeln!(
        out,
        "param,mean_error_rate,mean_conclusive_rate,mean_final_len,aborted_frac"
    )
    .map_err(w)?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.param, r.error_rate, r.conclusive_rate, r.final_len, r.aborted
        )
        .map_err(w)?;
    }
    Ok(())
}

fn cmd_fixture(name: &str) -> CliResult {
    let names: Vec<&str> = if name == "all" {
        fixtures::NAMES.to_vec()
    } else {
        vec![name]
    };
    let mut all_ok = true;
    for n in names {
        let f = fixtures::by_name(n).ok_or_else(|| Failure::usage(format!("unknown fixture {n:?}")))?;
        println!("{}: {}", f.name, if f.passed { "pass" } else { "FAIL" });
        for line in &f.lines {
            println!("  {line}");
        }
        all_ok &= f.passed;
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_IO,
            message: "fixture mismatch".into(),
        })
    }
}

fn read_bits(path: &Path, format: Format) -> Result<Bitstring, Failure> {
    let data = fs::read(path).map_err(|e| Failure::io(path, e))?;
    let text = || String::from_utf8_lossy(&data).split_whitespace().collect::<String>();
    match format {
        Format::Raw => Ok(Bitstring::from_bytes(&data)),
        Format::Bits => text()
            .parse()
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        Format::Hex => hex::decode(text())
            .map(|b| Bitstring::from_bytes(&b))
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
    }
}

fn write_bits(path: &Path, bits: &Bitstring, format: Format) -> CliResult {
    let data = match format {
        Format::Raw => bits.to_bytes(),
        Format::Bits => format!("{bits}\n").into_bytes(),
        Format::Hex => format!("{}\n", hex::encode(bits.to_bytes())).into_bytes(),
    };
    fs::write(path, data).map_err(|e| Failure::io(path, e))
}

fn ledger_contains(ledger: &Path, fingerprint: &str) -> Result<bool, Failure> {
    match fs::read_to_string(ledger) {
        Ok(s) => Ok(s.lines().any(|l| l.split('\t').next() == Some(fingerprint))),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(false),
        Err(e) => Err(Failure::io(ledger, e)),
    }
}

fn cmd_otp(op: OtpOp) -> CliResult {
    let (encrypt, a) = match op {
        OtpOp::Encrypt(a) => (true, a),
        OtpOp::Decrypt(a) => (false, a),
    };
    let text = read_bits(&a.input, a.format)?;
    let key = read_bits(&a.key, a.format)?;
    let fingerprint = bits_fingerprint(&key);
    if encrypt && ledger_contains(&a.ledger, &fingerprint)? {
        return Err(Failure {
            code: EXIT_KEY_REUSE,
            message: format!(
                "refusing to encrypt: key {} is already recorded in {}; a one-time pad key used twice \
                 reveals the XOR of the two plaintexts",
                &fingerprint[..16],
                a.ledger.display()
            ),
        });
    }
    let out = otp_xor(&text, &key)?;
    write_bits(&a.out, &out, a.format)?;
    if encrypt {
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&a.ledger)
            .map_err(|e| Failure::io(&a.ledger, e))?;
        writeln!(f, "{fingerprint}\t{}", chrono::Utc::now().to_rfc3339()).map_err(|e| Failure::io(&a.ledger, e))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Fixture { name } => cmd_fixture(&name),
        Command::Otp { op } => cmd_otp(op),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qkdsim: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
