mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use config::{GridSpec, RunConfig};
use scount::asymptotics::constant_bundle;
use scount::report::{materialized_header, row_from, run_one, write_csv, write_materialized, CountKind, CountRow};
use scount::verify::{run_suite, Suite, SuiteParams};
use scount::{DistanceSystem, EnumerationOptions, Error, PlaceSet, Rational, SystemKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    #[value(name = "count_vectors")]
    CountVectors,
    #[value(name = "count_algebraic")]
    CountAlgebraic,
    Constants,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum System {
    #[value(name = "max_norm")]
    MaxNorm,
    Mahler,
}

/// Exact counts of S-integer points and algebraic numbers of bounded height,
/// with their predicted main terms.
#[derive(Debug, Parser)]
#[command(name = "scount", version)]
struct Cli {
    /// Run configuration (JSON); flags below override its fields.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Heights: `10,100,1000` or `from:to:steps` (geometric).
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Maximum number of candidate evaluations per enumeration.
    #[arg(long)]
    ceiling: Option<u128>,
    /// Also write every counted point or polynomial.
    #[arg(long)]
    materialize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Destination of materialised rows (defaults to `<out>.points.csv`).
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long)]
    suite: Option<String>,
    /// Fill the millis column with wall-clock times.
    #[arg(long)]
    timing: bool,
    /// Dimension for count_vectors, constants and verify.
    #[arg(long)]
    n: Option<u32>,
    /// Degree for count_algebraic.
    #[arg(long)]
    e: Option<u32>,
    #[arg(long, value_enum)]
    system: Option<System>,
    /// Monte-Carlo samples for the volume suite.
    #[arg(long)]
    samples: Option<u64>,
}

enum Failure {
    Config(String),
    Resource(String),
    Verification(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Verification(_) => 4,
            Failure::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Resource(m) | Failure::Verification(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Config(_)
            | Error::InvalidField(_)
            | Error::InvalidPrime(_)
            | Error::NotSInteger(_)
            | Error::NotMonic
            | Error::Regime(_) => Failure::Config(msg),
            Error::ResourceLimit { .. } => Failure::Resource(msg),
            Error::PartitionMismatch(_) => Failure::Verification(msg),
            _ => Failure::Internal(msg),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

struct Run {
    cli: Cli,
    cfg: RunConfig,
    ps: PlaceSet,
    opts: EnumerationOptions,
}

impl Run {
    fn grid(&self) -> Result<Option<Vec<Rational>>, Failure> {
        let spec = match (&self.cli.grid, &self.cfg.grid) {
            (Some(s), _) => GridSpec::Text(s.clone()),
            (None, Some(g)) => g.clone(),
            (None, None) => return Ok(None),
        };
        Ok(Some(spec.values()?))
    }

    fn required_grid(&self) -> Result<Vec<Rational>, Failure> {
        self.grid()?.ok_or_else(|| Failure::Config("a height grid is required (--grid or \"grid\")".into()))
    }

    fn out(&self) -> Option<PathBuf> {
        self.cli.out.clone().or_else(|| self.cfg.out.clone())
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match self.out() {
            Some(path) => fs::write(&path, text).map_err(|e| io_failure(&path, e)),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| Failure::Internal(e.to_string()))
            }
        }
    }

    fn n(&self) -> u32 {
        self.cli.n.or(self.cfg.n).unwrap_or(1)
    }

    fn count(&self, kind: CountKind) -> Result<(), Failure> {
        let grid = self.required_grid()?;
        let timing = self.cli.timing || self.cfg.timing.unwrap_or(false);
        let mut points = if self.opts.materialize {
            let path = self
                .cli
                .points
                .clone()
                .or_else(|| self.cfg.points.clone())
                .or_else(|| self.out().map(|o| PathBuf::from(format!("{}.points.csv", o.display()))))
                .ok_or_else(|| Failure::Config("--materialize needs --out or --points".into()))?;
            let file = File::create(&path).map_err(|e| io_failure(&path, e))?;
            let mut w = BufWriter::new(file);
            writeln!(w, "{}", materialized_header(&self.ps, kind)).map_err(|e| io_failure(&path, e))?;
            Some((path, w))
        } else {
            None
        };
        let mut rows: Vec<CountRow> = Vec::new();
        for h in &grid {
            let res = run_one(&self.ps, kind, h, &self.opts)?;
            if let Some((_, w)) = points.as_mut() {
                write_materialized(w, &self.ps, kind, h, &res)?;
            }
            rows.push(row_from(&self.ps, kind, h, &res));
        }
        if let Some((path, mut w)) = points {
            w.flush().map_err(|e| io_failure(&path, e))?;
        }
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows, timing).map_err(|e| Failure::Internal(e.to_string()))?;
        self.emit(&String::from_utf8(buf).expect("ascii csv"))
    }

    fn constants(&self) -> Result<(), Failure> {
        let system = match self.cli.system.map(|s| match s {
            System::MaxNorm => SystemKind::MaxNorm,
            System::Mahler => SystemKind::Mahler,
        }) {
            Some(k) => k,
            None => self.cfg.system.unwrap_or(SystemKind::MaxNorm),
        };
        let n = match system {
            SystemKind::MaxNorm => self.n(),
            SystemKind::Mahler => self.cli.e.or(self.cfg.e).or(self.cli.n).or(self.cfg.n).unwrap_or(1),
        };
        if n == 0 {
            return Err(Failure::Config("dimension must be at least 1".into()));
        }
        let system = match system {
            SystemKind::MaxNorm => DistanceSystem::max_norm(n),
            SystemKind::Mahler => DistanceSystem::mahler(n),
        };
        let bundle = constant_bundle(&self.ps, &system);
        let mut text = serde_json::to_string_pretty(&bundle).map_err(|e| Failure::Internal(e.to_string()))?;
        text.push('\n');
        self.emit(&text)
    }

    fn verify(&self) -> Result<(), Failure> {
        let name = self
            .cli
            .suite
            .clone()
            .or_else(|| self.cfg.suite.clone())
            .ok_or_else(|| Failure::Config("verify needs --suite".into()))?;
        let suite: Suite = name.parse()?;
        let defaults = SuiteParams::default();
        let params = SuiteParams {
            n: self.n(),
            grid: self.grid()?,
            seed: self.cli.seed.or(self.cfg.seed).unwrap_or(0),
            mahler_pairs: self.cfg.pairs.unwrap_or(defaults.mahler_pairs),
            volume_samples: self.cli.samples.or(self.cfg.samples).unwrap_or(defaults.volume_samples),
            davenport_ceiling: self.cfg.davenport_ceiling.unwrap_or(defaults.davenport_ceiling),
            opts: self.opts.clone(),
            ..defaults
        };
        let verdict = run_suite(suite, &self.ps, &params)?;
        let mut text = serde_json::to_string_pretty(&verdict).map_err(|e| Failure::Internal(e.to_string()))?;
        text.push('\n');
        self.emit(&text)?;
        if verdict.pass {
            Ok(())
        } else {
            Err(Failure::Verification(format!("suite {suite} failed")))
        }
    }
}

fn setup(cli: Cli) -> Result<Run, Failure> {
    let text = fs::read_to_string(&cli.config).map_err(|e| io_failure(&cli.config, e))?;
    let cfg = RunConfig::from_json(&text)?;
    let ps = cfg.field.placeset()?;
    let ceiling = cli.ceiling.or(cfg.ceiling.map(u128::from)).unwrap_or(EnumerationOptions::default().ceiling);
    if ceiling < 10_000 {
        return Err(Failure::Config(format!("ceiling {ceiling} is below 10000")));
    }
    let workers = cli.workers.or(cfg.workers).unwrap_or(1);
    if workers == 0 {
        return Err(Failure::Config("workers must be at least 1".into()));
    }
    let opts = EnumerationOptions {
        ceiling,
        workers,
        materialize: cli.materialize || cfg.materialize.unwrap_or(false),
    };
    Ok(Run { cli, cfg, ps, opts })
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let run = setup(cli)?;
    let command = match run.cli.command {
        Some(c) => c,
        None => {
            let name = run.cfg.command.clone().ok_or_else(|| Failure::Config("no command given".into()))?;
            Command::from_str(&name, false).map_err(|_| Failure::Config(format!("unknown command {name:?}")))?
        }
    };
    match command {
        Command::CountVectors => run.count(CountKind::Vectors { n: run.n() }),
        Command::CountAlgebraic => {
            let e = run.cli.e.or(run.cfg.e).unwrap_or(1);
            if e == 0 {
                return Err(Failure::Config("degree must be at least 1".into()));
            }
            run.count(CountKind::Algebraic { e })
        }
        Command::Constants => run.constants(),
        Command::Verify => run.verify(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
