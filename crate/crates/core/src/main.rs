use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};

use emdyn::critical_times::{self, SweepMethod, TimesReport};
use emdyn::states::{self, parse_matrix_json, DensityMatrix, Family, FamilyKind, Sign};
use emdyn::trajectory::{figure_data, FigureId, Trajectory};

/// Entanglement and Bell-nonlocality dynamics of two decaying atoms.
#[derive(Parser)]
#[command(name = "emdyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a state is a valid density matrix.
    Validate(StateArgs),
    /// Sample concurrence and the CHSH quantity along the decay.
    Evolve(EvolveArgs),
    /// Report disentanglement and locality times.
    Times(TimesArgs),
    /// Critical times over a range of family parameters.
    Sweep(SweepArgs),
    /// Concurrence tables behind the two reference figures.
    Figure(FigureArgs),
}

#[derive(Args)]
struct StateArgs {
    /// State family.
    #[arg(long, value_parser = parse_family_kind, conflicts_with = "file")]
    family: Option<FamilyKind>,
    /// Concurrence parameter of a pure family.
    #[arg(long = "c", conflicts_with = "p")]
    c: Option<f64>,
    /// Mixing parameter of a Werner family.
    #[arg(long = "p")]
    p: Option<f64>,
    /// Sign of the superposition.
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    /// JSON state file with a 4x4 "matrix" of [re, im] pairs.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report physical time t = tau / gamma0 instead of tau.
    #[arg(long)]
    gamma0: Option<f64>,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value_t = 3.0)]
    tau_max: f64,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TimesArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long)]
    gamma0: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_family_kind)]
    family: FamilyKind,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    #[arg(long, default_value_t = 1.0)]
    to: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    /// Use the numeric root finder instead of the closed forms.
    #[arg(long)]
    numeric: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1 or fig2.
    id: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_family_kind(s: &str) -> Result<FamilyKind, String> {
    s.parse::<FamilyKind>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Invalid(String),
}

impl From<emdyn::Error> for Failure {
    fn from(e: emdyn::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

enum LoadedState {
    Family(Family, DensityMatrix),
    File(String, DensityMatrix),
}

impl LoadedState {
    fn label(&self) -> String {
        match self {
            LoadedState::Family(f, _) => f.to_string(),
            LoadedState::File(path, _) => path.clone(),
        }
    }

    fn state(&self) -> &DensityMatrix {
        match self {
            LoadedState::Family(_, rho) | LoadedState::File(_, rho) => rho,
        }
    }
}

impl StateArgs {
    fn sign(&self) -> Sign {
        match self.sign {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }

    fn family(&self) -> Result<Option<Family>, Failure> {
        let Some(kind) = self.family else {
            if self.c.is_some() || self.p.is_some() {
                return Err(Failure::Usage("--c/--p need --family".into()));
            }
            return Ok(None);
        };
        let param = match (kind.is_pure(), self.c, self.p) {
            (true, Some(c), None) => c,
            (false, None, Some(p)) => p,
            _ => {
                return Err(Failure::Usage(format!(
                    "family {kind} takes --{}",
                    kind.param_name().to_lowercase()
                )))
            }
        };
        Ok(Some(Family::new(kind, param)))
    }

    fn read_file(&self) -> Result<(String, String), Failure> {
        let path = self.file.as_ref().expect("file source");
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        Ok((path.display().to_string(), text))
    }

    fn load(&self) -> Result<LoadedState, Failure> {
        if let Some(f) = self.family()? {
            let rho = f.initial_state_with_sign(self.sign())?;
            return Ok(LoadedState::Family(f, rho));
        }
        if self.file.is_none() {
            return Err(Failure::Usage("give either --family or --file".into()));
        }
        let (label, text) = self.read_file()?;
        let m = parse_matrix_json(&text)?;
        let rho = DensityMatrix::new(m).map_err(|e| Failure::Invalid(format!("{label}: {e}")))?;
        Ok(LoadedState::File(label, rho))
    }
}

fn check_gamma0(gamma0: Option<f64>) -> Result<Option<f64>, Failure> {
    match gamma0 {
        Some(g) if !(g.is_finite() && g > 0.0) => Err(Failure::Usage(format!("--gamma0 must be positive, got {g}"))),
        g => Ok(g),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn cmd_validate(args: &StateArgs) -> CmdResult {
    let (label, report) = match args.family()? {
        Some(f) => (f.to_string(), f.initial_state_with_sign(args.sign())?.validate()),
        None if args.file.is_some() => {
            let (label, text) = args.read_file()?;
            (label, states::validate(&parse_matrix_json(&text)?))
        }
        None => return Err(Failure::Usage("give either --family or --file".into())),
    };
    println!("state:            {label}");
    println!("{report}");
    if report.passes() {
        Ok(())
    } else {
        Err(Failure::Invalid("state is not a valid density matrix".into()))
    }
}

fn cmd_evolve(args: &EvolveArgs) -> CmdResult {
    let gamma0 = check_gamma0(args.output.gamma0)?;
    let loaded = args.state.load()?;
    let traj = Trajectory::sample(loaded.state(), args.tau_max, args.step)?.with_source(loaded.label());
    let text = match args.format {
        Format::Csv => traj.to_csv(gamma0),
        Format::Json => traj.to_json(gamma0),
    };
    emit(&args.output.out, &text)
}

fn cmd_times(args: &TimesArgs) -> CmdResult {
    let gamma0 = check_gamma0(args.gamma0)?;
    let report = match args.state.load()? {
        LoadedState::Family(f, _) => TimesReport::for_family(&f, args.state.sign())?,
        LoadedState::File(label, rho) => TimesReport::for_state(label, &rho)?,
    };
    println!("{}", report.render(gamma0));
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let gamma0 = check_gamma0(args.output.gamma0)?;
    let method = if args.numeric {
        SweepMethod::Numeric
    } else {
        SweepMethod::Closed
    };
    let rows = critical_times::sweep(args.family, args.from, args.to, args.points, method)?;
    emit(&args.output.out, &critical_times::sweep_csv(&rows, gamma0))
}

fn cmd_figure(args: &FigureArgs) -> CmdResult {
    let gamma0 = check_gamma0(args.output.gamma0)?;
    let id: FigureId = args.id.parse().map_err(Failure::Usage)?;
    emit(&args.output.out, &figure_data(id)?.to_csv(gamma0))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("EMDYN_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("EMDYN_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Evolve(a) => cmd_evolve(a),
        Command::Times(a) => cmd_times(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Figure(a) => cmd_figure(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("invalid: {msg}");
            ExitCode::from(2)
        }
    }
}
