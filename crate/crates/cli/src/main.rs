use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ffenum::catalog::{
    bench, export, parse_catalog, query, write_catalogs, BenchCase, BoundSpec, EnumerationConfig, ExportFormat, Method,
    QueryFilter,
};
use ffenum::{AberrationOrdering, Error, ExecMode};

#[derive(Parser)]
#[command(name = "ffenum", version, about = "Enumerate, query and export catalogs of regular 4^m 2^(n-p) designs")]
struct Cli {
    /// Run on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate non-isomorphic designs level by level, one catalog file per level.
    Enumerate {
        #[arg(long)]
        runs: usize,
        /// Number of four-level factors.
        #[arg(long = "four-level")]
        four_level: u32,
        /// Minimum resolution.
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=4))]
        resolution: u32,
        /// Largest number of two-level factors.
        #[arg(long = "max-two-level")]
        max_two_level: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::St)]
        method: MethodArg,
        /// Bounds file with lines "m,n,d0,...,dm".
        #[arg(long, conflicts_with = "default_bounds")]
        bounds: Option<PathBuf>,
        /// Use the shipped 64-run resolution III bounds.
        #[arg(long)]
        default_bounds: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank catalog records by aberration.
    Query {
        #[arg(long, required = true)]
        catalog: Vec<PathBuf>,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long = "min-resolution")]
        min_resolution: Option<u32>,
        #[arg(long = "rank-by", value_enum, default_value_t = RankBy::Type0)]
        rank_by: RankBy,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Print one record as a column list or a run matrix.
    Export {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        id: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Columns)]
        format: FormatArg,
    },
    /// Time the three extension methods on a case "N,m,R,n_max".
    Bench {
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// CSV output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    St,
    Dop,
    Full,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::St => Method::St,
            MethodArg::Dop => Method::Dop,
            MethodArg::Full => Method::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RankBy {
    Type0,
    Typem,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Matrix,
    Columns,
}

fn read(path: &PathBuf) -> ffenum::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn run(cli: Cli) -> ffenum::Result<()> {
    let exec = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    match cli.command {
        Command::Enumerate { runs, four_level, resolution, max_two_level, method, bounds, default_bounds, out } => {
            let mut config =
                EnumerationConfig::new(runs, four_level, resolution, max_two_level, method.into()).with_exec(exec);
            if default_bounds {
                config = config.with_bounds(BoundSpec::default_64_run());
            } else if let Some(path) = bounds {
                config = config.with_bounds(BoundSpec::parse(&read(&path)?)?);
            }
            config.validate()?;
            write_catalogs(config, &out, |w| {
                println!("n={} designs={} candidates={} file={}", w.n, w.count, w.candidates, w.path.display());
            })?;
        }
        Command::Query { catalog, runs, m, n, min_resolution, rank_by, top } => {
            let mut records = Vec::new();
            for path in &catalog {
                records.extend(parse_catalog(&read(path)?)?);
            }
            let ordering = match rank_by {
                RankBy::Type0 => AberrationOrdering::Type0,
                RankBy::Typem => AberrationOrdering::TypeM,
            };
            let filter = QueryFilter { runs, m, n, min_resolution };
            for (i, r) in query(&records, &filter, ordering, top)?.iter().enumerate() {
                let join = |v: Vec<String>| v.join(",");
                println!(
                    "{}\t{}\t{}\t{}\t{}",
                    i + 1,
                    r.record.id,
                    r.record.resolution,
                    join(r.record.columns.iter().map(u32::to_string).collect()),
                    join(r.signature(ordering).iter().map(u64::to_string).collect()),
                );
            }
        }
        Command::Export { catalog, id, format } => {
            let records = parse_catalog(&read(&catalog)?)?;
            let format = match format {
                FormatArg::Matrix => ExportFormat::Matrix,
                FormatArg::Columns => ExportFormat::Columns,
            };
            print!("{}", export(&records, &id, format)?);
        }
        Command::Bench { case, repeats, out } => {
            let case: BenchCase = case.parse()?;
            let report = bench(case, &Method::ALL, repeats, exec)?;
            let csv = report.to_csv();
            match out {
                Some(path) => std::fs::write(&path, csv)?,
                None => print!("{csv}"),
            }
            for level in report.levels() {
                if report.ordering_holds(level) == Some(false) {
                    eprintln!("level {level}: st <= dop <= full timing order does not hold");
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) | Error::Domain(_) => 1,
                _ => 2,
            })
        }
    }
}
