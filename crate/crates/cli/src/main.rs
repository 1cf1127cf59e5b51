use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use so5_coupling::batch::{payload_for, tabulate, verify_record, verify_store, BracketCache, Execution};
use so5_coupling::chain::angmom::{chain3_brackets, chain3_branch};
use so5_coupling::chain::isospin::{chain2_brackets, chain2_branch};
use so5_coupling::format::{self, Format, Table};
use so5_coupling::racah::solve_isoscalars;
use so5_coupling::store::{ChainTag, Payload, RecordKey, Store, StoreRecord};
use so5_coupling::{Error, HalfInt, So5Irrep};

#[derive(Parser)]
#[command(name = "so5cg", version, about = "Exact SO(5) reduced coupling coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChainArg {
    So4,
    Isospin,
    Angmom,
}

impl From<ChainArg> for ChainTag {
    fn from(c: ChainArg) -> ChainTag {
        match c {
            ChainArg::So4 => ChainTag::So4,
            ChainArg::Isospin => ChainTag::Isospin,
            ChainArg::Angmom => ChainTag::Angmom,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
    Float,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Digits after the point for `--format float`.
    #[arg(long, default_value_t = 12)]
    digits: u32,
    /// Write here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Output {
    fn format(&self) -> Result<Format, Error> {
        let name = match self.format {
            FormatArg::Text => "text",
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
            FormatArg::Float => "float",
        };
        Format::parse_with_digits(name, self.digits)
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.output {
            Some(p) => std::fs::write(p, text).map_err(|e| Error::Store(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of one coupling g1 x g2 -> g.
    Couple {
        #[arg(long)]
        g1: So5Irrep,
        #[arg(long)]
        g2: So5Irrep,
        #[arg(long)]
        g: So5Irrep,
        #[arg(long, value_enum, default_value = "so4")]
        chain: ChainArg,
        /// Reuse and extend this store.
        #[arg(long, env = "SO5_STORE")]
        store: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Fill a store with every coupling up to a bound on R.
    Tabulate {
        #[arg(long)]
        max_r: HalfInt,
        #[arg(long, value_enum, default_value = "so4")]
        chain: ChainArg,
        #[arg(long, env = "SO5_STORE")]
        store: PathBuf,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Transform a stored or exported block to the isospin or angular-momentum chain.
    Transform {
        /// JSON record as written by `couple --format json`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        chain: ChainArg,
        #[command(flatten)]
        out: Output,
    },
    /// Branching content of one irrep.
    Branch {
        #[arg(long)]
        g: So5Irrep,
        #[arg(long, value_enum, default_value = "so4")]
        chain: ChainArg,
        /// Restrict the isospin content to one M_S.
        #[arg(long, allow_hyphen_values = true)]
        ms: Option<HalfInt>,
        #[command(flatten)]
        out: Output,
    },
    /// Transformation brackets from the canonical basis to a chain.
    Brackets {
        #[arg(long)]
        g: So5Irrep,
        #[arg(long, value_enum, default_value = "isospin")]
        chain: ChainArg,
        #[command(flatten)]
        out: Output,
    },
    /// Check every record of a store.
    Verify {
        #[arg(long, env = "SO5_STORE")]
        store: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// A run that finished but found inconsistencies.
struct Failed;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::OutOfRange(_) | Error::MalformedSpin { .. } => 2,
        Error::NotInSeries { .. } => 3,
        Error::Store(_) => 4,
        _ => 1,
    }
}

fn jobs(n: Option<usize>) -> Execution {
    Execution::with_jobs(n.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())))
}

fn render_payload(p: &Payload, format: Format) -> Result<String, Error> {
    let b = p.block();
    let table = match p {
        Payload::So4 { .. } => format::block_table(b),
        Payload::Isospin { rows, .. } => format::chain2_table(Some(b.key.to_string()), rows, b.multiplicity()),
        Payload::Angmom { rows, .. } => format::chain3_table(Some(b.key.to_string()), rows, b.multiplicity()),
    };
    table.render(format)
}

fn render_record(rec: &StoreRecord, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => Ok(rec.to_json()),
        f => render_payload(&rec.payload, f),
    }
}

fn couple(key: RecordKey, store: Option<PathBuf>, out: &Output) -> Result<Result<(), Failed>, Error> {
    let format = out.format()?;
    let cache = BracketCache::default();
    let mut store = store.map(Store::open).transpose()?;
    let cached = match &store {
        Some(s) => s.load(&key)?,
        None => None,
    };
    let rec = match cached {
        Some(r) => r,
        None => {
            let block = solve_isoscalars(key.g1, key.g2, key.g)?;
            StoreRecord::new(payload_for(key.chain, block, &cache)?)
        }
    };
    let failures = verify_record(&rec, &cache);
    if !failures.is_empty() {
        for f in &failures {
            eprintln!("{f}");
        }
        return Ok(Err(Failed));
    }
    if let Some(s) = store.as_mut() {
        if !s.contains(&key) {
            s.put(&rec)?;
        }
    }
    out.emit(&render_record(&rec, format)?)?;
    Ok(Ok(()))
}

fn transform(input: &PathBuf, chain: ChainTag, out: &Output) -> Result<Result<(), Failed>, Error> {
    let format = out.format()?;
    let text = std::fs::read_to_string(input).map_err(|e| Error::Store(format!("{}: {e}", input.display())))?;
    let rec = StoreRecord::from_json(&text)?;
    let integrity = rec.integrity_failures();
    if !integrity.is_empty() {
        for f in &integrity {
            eprintln!("{f}");
        }
        return Ok(Err(Failed));
    }
    let cache = BracketCache::default();
    let rec = StoreRecord::new(payload_for(chain, rec.payload.block().clone(), &cache)?);
    out.emit(&render_record(&rec, format)?)?;
    Ok(Ok(()))
}

fn branch(g: So5Irrep, chain: ChainTag, ms: Option<HalfInt>, out: &Output) -> Result<(), Error> {
    let mut t = Table { title: Some(format!("{chain} content of {g}")), ..Default::default() };
    match chain {
        ChainTag::So4 => {
            t.header = vec!["xy".into()];
            t.rows = g.branch().into_iter().map(|xy| vec![xy.to_string()]).collect();
        }
        ChainTag::Isospin => {
            t.header = ["ms", "t", "multiplicity"].map(String::from).to_vec();
            t.rows = chain2_branch(g)
                .into_iter()
                .filter(|(m, _, _)| ms.is_none_or(|x| x == *m))
                .map(|(m, tt, n)| vec![m.to_string(), tt.to_string(), n.to_string()])
                .collect();
        }
        ChainTag::Angmom => {
            t.header = ["l", "multiplicity"].map(String::from).to_vec();
            t.rows = chain3_branch(g).into_iter().map(|(l, n)| vec![l.to_string(), n.to_string()]).collect();
        }
    }
    out.emit(&t.render(out.format()?)?)
}

fn brackets(g: So5Irrep, chain: ChainTag, out: &Output) -> Result<(), Error> {
    let format = out.format()?;
    let text = match chain {
        ChainTag::So4 => return Err(Error::Parse("brackets need --chain isospin or angmom".into())),
        ChainTag::Isospin => {
            let b = chain2_brackets(g)?;
            match format {
                Format::Json => format::to_json(&b.records()),
                f => format::chain2_brackets_table(&b).render(f)?,
            }
        }
        ChainTag::Angmom => {
            let b = chain3_brackets(g)?;
            match format {
                Format::Json => format::to_json(&b.records()),
                f => format::chain3_brackets_table(&b).render(f)?,
            }
        }
    };
    out.emit(&text)
}

fn run(cli: Cli) -> Result<Result<(), Failed>, Error> {
    match cli.command {
        Command::Couple { g1, g2, g, chain, store, out } => {
            couple(RecordKey { chain: chain.into(), g1, g2, g }, store, &out)
        }
        Command::Tabulate { max_r, chain, store, jobs: n } => {
            let mut s = Store::open(&store)?;
            let summary = tabulate(&mut s, max_r, chain.into(), jobs(n))?;
            println!(
                "{} computed, {} already stored, {} records in {}",
                summary.computed,
                summary.skipped,
                s.len(),
                store.display()
            );
            Ok(Ok(()))
        }
        Command::Transform { input, chain, out } => transform(&input, chain.into(), &out),
        Command::Branch { g, chain, ms, out } => branch(g, chain.into(), ms, &out).map(Ok),
        Command::Brackets { g, chain, out } => brackets(g, chain.into(), &out).map(Ok),
        Command::Verify { store, jobs: n } => {
            let s = Store::open_existing(&store)?;
            let report = verify_store(&s, jobs(n));
            for (key, failures) in &report.failures {
                println!("FAIL {key}");
                for f in failures {
                    println!("  {f}");
                }
            }
            println!("{} records checked, {} failed", report.checked, report.failures.len());
            Ok(if report.ok() { Ok(()) } else { Err(Failed) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("so5cg: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
