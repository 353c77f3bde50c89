//! `fermion-discord`: parameter scans, curves, density-file analysis and
//! exact-diagonalisation checks.

mod output;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fermion_discord::agassi::{self, AgassiModelSpec, PairKind};
use fermion_discord::densities::{self, io as density_io, DensitySet};
use fermion_discord::discord::{self, TwoOrbitalRdm};
use fermion_discord::fock::{self, MAX_VERIFY_OMEGA};
use fermion_discord::grid::GridRange;
use fermion_discord::lmg;
use fermion_discord::sampling;
use fermion_discord::Error;
use serde_json::{json, Value};

use output::{write_json, Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "fermion-discord", version, about = "Two-orbital quantum discord of fermionic states")]
struct Cli {
    /// Output file; standard output when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    /// Print entropies in bits instead of nats.
    #[arg(long, global = true)]
    bits: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Two-level pairing-plus-monopole model in the mean-field solution.
    #[command(subcommand)]
    Agassi(AgassiCommand),
    /// Two-level monopole model.
    #[command(subcommand)]
    Lmg(LmgCommand),
    /// Discord of user-supplied densities.
    #[command(subcommand)]
    Discord(DiscordCommand),
    /// Exact-diagonalisation checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
enum AgassiCommand {
    /// Pair discord over a (chi, sigma) grid.
    Scan(ScanArgs),
    /// Mean-field densities as a density file.
    Densities(ModelPoint),
}

#[derive(Debug, Subcommand)]
enum LmgCommand {
    /// Exact ground state on the same-m Hartree-Fock pair.
    ExactCurve(ExactCurveArgs),
    /// Hartree-Fock ground state on the same-m Hamiltonian pair.
    HfCurve(HfCurveArgs),
}

#[derive(Debug, Subcommand)]
enum DiscordCommand {
    /// Pair discord from a density file.
    FromDensities(FromDensitiesArgs),
    /// Seeded random two-orbital states with their correlations.
    Sample(SampleArgs),
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Diagonalise a small system exactly and check the mean-field claims.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Pair {
    /// `(m, +1)` with `(m, -1)`.
    Updown,
    /// `(m, +1)` with `(-m, +1)`.
    Pairing,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_enum, default_value = "updown")]
    pair: Pair,
    #[arg(long, default_value_t = 20)]
    omega: usize,
    /// `start:stop:step` or a single value.
    #[arg(long, value_parser = parse_grid)]
    chi: GridRange,
    /// `start:stop:step` or a single value.
    #[arg(long, value_parser = parse_grid)]
    sigma: GridRange,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct ModelPoint {
    #[arg(long, default_value_t = 20)]
    omega: usize,
    #[arg(long)]
    chi: f64,
    #[arg(long)]
    sigma: f64,
}

#[derive(Debug, Args)]
struct ExactCurveArgs {
    /// Particle numbers: `a:b` (inclusive) or a comma-separated list.
    #[arg(long, value_parser = parse_n_list)]
    n: NList,
    #[arg(long, value_parser = parse_grid)]
    chi: GridRange,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct HfCurveArgs {
    #[arg(long, value_parser = parse_grid)]
    chi: GridRange,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct FromDensitiesArgs {
    /// Density file; `-` reads standard input.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    #[arg(long, requires = "j", conflicts_with = "all_pairs")]
    i: Option<usize>,
    #[arg(long, requires = "i", conflicts_with = "all_pairs")]
    j: Option<usize>,
    /// Every pair instead of a single one.
    #[arg(long, required_unless_present = "i")]
    all_pairs: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Probability that each coherence is exactly zero.
    #[arg(long, default_value_t = 0.0)]
    zero_prob: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Agassi,
    /// Occupation-basis against quasispin solution of the monopole model.
    Lmg,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "agassi")]
    model: Model,
    #[arg(long, default_value_t = 4)]
    omega: usize,
    #[arg(long)]
    chi: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
}

#[derive(Debug, Clone)]
struct NList(Vec<usize>);

fn parse_grid(s: &str) -> Result<GridRange, String> {
    GridRange::from_str(s).map_err(|e| e.to_string())
}

fn parse_n_list(s: &str) -> Result<NList, String> {
    let int = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a non-negative integer"));
    let ns: Vec<usize> = match s.split_once(':') {
        Some((a, b)) => (int(a)?..=int(b)?).collect(),
        None => s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(int)
            .collect::<Result<_, _>>()?,
    };
    if ns.is_empty() {
        return Err("empty N list".into());
    }
    if let Some(n) = ns.iter().find(|&&n| !(2..=lmg::MAX_N).contains(&n)) {
        return Err(format!("N = {n} outside 2..={}", lmg::MAX_N));
    }
    Ok(NList(ns))
}

/// Failure category and the process status it maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Io(io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Numerical(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidRdm(_)
            | Error::NotHermitian(_)
            | Error::NotCanonical(_)
            | Error::NoConvergence(_)
            | Error::InvalidDistribution(_) => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<Status, Failure>;

/// Completed runs either hold or report a failed numerical check.
enum Status {
    Ok,
    CheckFailed,
}

struct Ctx {
    bits: bool,
    out: Box<dyn Write>,
}

impl Ctx {
    /// Entropy in the requested display unit.
    fn ent(&self, x: f64) -> f64 {
        if self.bits {
            x / std::f64::consts::LN_2
        } else {
            x
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => {
            eprintln!("error: numerical check failed");
            ExitCode::from(2)
        }
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Numerical(m) => eprintln!("error: {m}"),
                Failure::Io(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    // Opened before any computation so an unwritable path fails fast.
    let out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Usage(format!("cannot write {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut ctx = Ctx { bits: cli.bits, out };
    let status = match cli.command {
        Command::Agassi(AgassiCommand::Scan(a)) => agassi_scan(&mut ctx, a),
        Command::Agassi(AgassiCommand::Densities(a)) => agassi_densities(&mut ctx, a),
        Command::Lmg(LmgCommand::ExactCurve(a)) => lmg_exact_curve(&mut ctx, a),
        Command::Lmg(LmgCommand::HfCurve(a)) => lmg_hf_curve(&mut ctx, a),
        Command::Discord(DiscordCommand::FromDensities(a)) => from_densities(&mut ctx, a),
        Command::Discord(DiscordCommand::Sample(a)) => sample(&mut ctx, a),
        Command::Oracle(OracleCommand::Verify(a)) => oracle_verify(&mut ctx, a),
    }?;
    ctx.out.flush()?;
    Ok(status)
}

fn agassi_scan(ctx: &mut Ctx, a: ScanArgs) -> Outcome {
    let kind = match a.pair {
        Pair::Updown => PairKind::UpDown,
        Pair::Pairing => PairKind::Pairing,
    };
    let rows = agassi::scan_grid(a.omega, &a.chi, &a.sigma, kind)?;
    let table = Table {
        header: vec!["chi", "sigma", "phase", "discord", "mutual_info"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Float(r.chi),
                    Cell::Float(r.sigma),
                    Cell::Text(r.phase.as_str().into()),
                    Cell::Float(ctx.ent(r.discord)),
                    Cell::Float(ctx.ent(r.mutual_info)),
                ]
            })
            .collect(),
    };
    table.write(a.format, &mut ctx.out)?;
    Ok(Status::Ok)
}

fn agassi_densities(ctx: &mut Ctx, a: ModelPoint) -> Outcome {
    let spec = AgassiModelSpec::new(a.omega, a.chi, a.sigma)?;
    let d = agassi::hfb_densities(&spec)?;
    write_json(&density_io::density_set_to_json(&d), &mut ctx.out)?;
    Ok(Status::Ok)
}

fn lmg_exact_curve(ctx: &mut Ctx, a: ExactCurveArgs) -> Outcome {
    let points = lmg::exact_curve(&a.n.0, &a.chi)?;
    let table = Table {
        header: vec!["n", "chi", "d", "discord"],
        rows: points
            .iter()
            .map(|p| {
                vec![
                    Cell::Int(p.n),
                    Cell::Float(p.chi),
                    Cell::Float(p.d),
                    Cell::Float(ctx.ent(p.discord)),
                ]
            })
            .collect(),
    };
    table.write(a.format, &mut ctx.out)?;
    Ok(Status::Ok)
}

fn lmg_hf_curve(ctx: &mut Ctx, a: HfCurveArgs) -> Outcome {
    let points = lmg::hf_curve(&a.chi)?;
    let table = Table {
        header: vec!["chi", "discord"],
        rows: points
            .iter()
            .map(|&(chi, d)| vec![Cell::Float(chi), Cell::Float(ctx.ent(d))])
            .collect(),
    };
    table.write(a.format, &mut ctx.out)?;
    Ok(Status::Ok)
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    }
    Ok(text)
}

fn rdm_json(rdm: &TwoOrbitalRdm) -> Value {
    let m = rdm.to_matrix();
    Value::Array(
        (0..4)
            .map(|r| Value::Array((0..4).map(|c| json!([m[(r, c)].re, m[(r, c)].im])).collect()))
            .collect(),
    )
}

fn pair_json(ctx: &Ctx, d: &DensitySet, i: usize, j: usize) -> Result<Value, Failure> {
    let rdm = d.assemble_rdm(i, j)?;
    let r = discord::report(&rdm);
    Ok(json!({
        "i": i,
        "j": j,
        "discord": ctx.ent(r.discord),
        "mutual_info": ctx.ent(r.mutual_info),
        "classical": ctx.ent(r.classical_corr),
        "rdm": rdm_json(&rdm),
    }))
}

fn from_densities(ctx: &mut Ctx, a: FromDensitiesArgs) -> Outcome {
    let text = read_input(&a.input)?;
    let d = density_io::density_set_from_str(&text)?;
    let n = d.dim();
    let pairs: Vec<(usize, usize)> = match (a.i, a.j) {
        (Some(i), Some(j)) => vec![(i, j)],
        _ => (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect(),
    };
    match a.format {
        Format::Json => {
            let value = if a.all_pairs {
                let discord = densities::all_pairs_discord(&d)?;
                let matrix: Vec<Vec<f64>> = (0..n)
                    .map(|i| (0..n).map(|j| ctx.ent(discord[(i, j)])).collect())
                    .collect();
                let list = pairs
                    .iter()
                    .map(|&(i, j)| pair_json(ctx, &d, i, j))
                    .collect::<Result<Vec<_>, _>>()?;
                json!({ "omega": n, "discord": matrix, "pairs": list })
            } else {
                let (i, j) = pairs[0];
                pair_json(ctx, &d, i, j)?
            };
            write_json(&value, &mut ctx.out)?;
        }
        Format::Csv => {
            let mut rows = Vec::with_capacity(pairs.len());
            for &(i, j) in &pairs {
                let r = discord::report(&d.assemble_rdm(i, j)?);
                rows.push(vec![
                    Cell::Int(i),
                    Cell::Int(j),
                    Cell::Float(ctx.ent(r.discord)),
                    Cell::Float(ctx.ent(r.mutual_info)),
                    Cell::Float(ctx.ent(r.classical_corr)),
                ]);
            }
            let table = Table {
                header: vec!["i", "j", "discord", "mutual_info", "classical"],
                rows,
            };
            table.write(Format::Csv, &mut ctx.out)?;
        }
    }
    Ok(Status::Ok)
}

fn sample(ctx: &mut Ctx, a: SampleArgs) -> Outcome {
    if !(0.0..=1.0).contains(&a.zero_prob) {
        return Err(Failure::Usage(format!("--zero-prob {} outside [0, 1]", a.zero_prob)));
    }
    let mut rng = sampling::seeded_rng(a.seed);
    let mut rows = Vec::with_capacity(a.count);
    for _ in 0..a.count {
        let rdm = sampling::random_rdm(&mut rng, a.zero_prob)?;
        let r = discord::report(&rdm);
        let [r1, r2, r3, r4] = rdm.rho();
        rows.push(vec![
            Cell::Float(r1),
            Cell::Float(r2),
            Cell::Float(r3),
            Cell::Float(r4),
            Cell::Float(rdm.alpha().norm()),
            Cell::Float(rdm.gamma_off().norm()),
            Cell::Float(ctx.ent(r.discord)),
            Cell::Float(ctx.ent(r.mutual_info)),
        ]);
    }
    let table = Table {
        header: vec!["rho1", "rho2", "rho3", "rho4", "abs_alpha", "abs_gamma_off", "discord", "mutual_info"],
        rows,
    };
    table.write(a.format, &mut ctx.out)?;
    Ok(Status::Ok)
}

/// Agreement required between the two LMG solvers.
const LMG_TOL: f64 = 1e-10;

fn oracle_verify(ctx: &mut Ctx, a: VerifyArgs) -> Outcome {
    if a.omega > MAX_VERIFY_OMEGA {
        return Err(Failure::Usage(format!(
            "omega = {} exceeds the exact-diagonalisation limit of {MAX_VERIFY_OMEGA}",
            a.omega
        )));
    }
    let (value, pass) = match a.model {
        Model::Agassi => {
            let spec = AgassiModelSpec::new(a.omega, a.chi, a.sigma)?;
            let r = fock::verify_hamiltonian_basis(&spec)?;
            let value = json!({
                "model": "agassi",
                "omega": r.omega,
                "chi": r.chi,
                "sigma": r.sigma,
                "energy": r.energy,
                "max_offdiag_gamma": r.max_offdiag_gamma(),
                "max_kappa": r.max_kappa,
                "max_pair_discord": ctx.ent(r.max_pair_discord),
                "pass": r.pass,
            });
            (value, r.pass)
        }
        Model::Lmg => {
            let r = fock::lmg_cross_check(a.omega, a.chi)?;
            let pass = r.energy_gap() <= LMG_TOL && r.discord_gap() <= LMG_TOL;
            let value = json!({
                "model": "lmg",
                "omega": r.n,
                "chi": r.chi,
                "sigma": 0.0,
                "energy": r.fock_energy,
                "quasispin_energy": r.quasispin_energy,
                "energy_gap": r.energy_gap(),
                "fock_discord": ctx.ent(r.fock_discord),
                "quasispin_discord": ctx.ent(r.quasispin_discord),
                "discord_gap": ctx.ent(r.discord_gap()),
                "pass": pass,
            });
            (value, pass)
        }
    };
    write_json(&value, &mut ctx.out)?;
    Ok(if pass { Status::Ok } else { Status::CheckFailed })
}
