//! `kdeck`: command-line front end.
//!
//! Exit codes: 0 success, 1 negative finding (a pair asserted to collide does
//! not, or a search outcome differs from `--expect`), 2 usage or input error,
//! 3 resource error or corrupted bundled data.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use kdeck_core::bounds::bound_report;
use kdeck_core::channel::{discriminate, estimate_distribution, sample_batch, total_variation, SampleBatch};
use kdeck_core::collision::{check_r, compute_n, hunt_collisions, verify_pair, HuntConfig, Outcome, PairVerdict};
use kdeck_core::corpus::{parse_corpus, PAPER_PAIRS};
use kdeck_core::reconstruct::{invert_deck_bruteforce, reconstruct_runs};
use kdeck_core::{compute_deck, parse_rle, to_rle, BitString, Deck, Error, PartitionScheme, SearchConfig};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "kdeck", version, about = "Subsequence decks and the fixed-size binary deletion channel")]
struct Cli {
    /// Print line-oriented key=value output instead of the human report.
    #[arg(long, global = true)]
    machine: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Worker threads.
    #[arg(long, env = "KDECK_THREADS")]
    threads: Option<usize>,
    /// Memory budget in bytes for one partition of the fingerprint table.
    #[arg(long, default_value_t = 2 << 30)]
    memory_budget: u64,
    /// `weight` or `weight-pairs`.
    #[arg(long, default_value = "weight")]
    partition: String,
    /// Fingerprint passes per partition.
    #[arg(long, default_value_t = 1)]
    passes: usize,
    /// Seed of the deck fingerprint.
    #[arg(long)]
    fingerprint_seed: Option<u64>,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig, Error> {
        let mut cfg = SearchConfig::default();
        if let Some(t) = self.threads {
            cfg.workers = t;
        }
        cfg.memory_budget = self.memory_budget;
        cfg.partition = self.partition.parse::<PartitionScheme>()?;
        cfg.fingerprint_passes = self.passes;
        if let Some(s) = self.fingerprint_seed {
            cfg.fingerprint_seed = s;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the m-deck of a string (plain or run-length notation).
    Deck {
        #[arg(long)]
        input: String,
        #[arg(short)]
        m: usize,
        /// Write the deck here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check whether two strings have the same m-deck.
    Verify {
        a: String,
        b: String,
        #[arg(short)]
        m: usize,
    },
    /// Verify the bundled corpus of known colliding pairs.
    VerifyPaper {
        /// Only verify the pair for this deck order.
        #[arg(long)]
        only_m: Option<usize>,
        /// Read the corpus from a file instead of the bundled copy.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Decide whether all strings of length n have distinct m-decks.
    Search {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        /// Exit with status 1 unless the outcome is this (`holds` or `fails`).
        #[arg(long)]
        expect: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Find the longest length at which m-decks separate all strings.
    Nm {
        #[arg(short)]
        m: usize,
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Rebuild a string of length 2m-1 from its m-deck.
    Reconstruct {
        #[arg(short)]
        m: Option<usize>,
        /// Deck file, `-` for standard input.
        #[arg(long)]
        deck: PathBuf,
    },
    /// List every string with the given deck (n <= 24).
    Invert {
        #[arg(long)]
        deck: PathBuf,
    },
    /// Draw outputs of the (m, n)-deletion channel.
    Sample {
        #[arg(long)]
        input: String,
        #[arg(short)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Defaults to a fresh random seed, recorded in the output header.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "KDECK_THREADS")]
        threads: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also print the empirical distribution and its distance to the exact one.
        #[arg(long)]
        stats: bool,
    },
    /// Rank candidate messages by the likelihood of a sample batch.
    Discriminate {
        #[arg(long)]
        batch: PathBuf,
        /// Candidate message (repeatable).
        #[arg(long = "candidate")]
        candidates: Vec<String>,
        /// Use every string of the batch's length as a candidate (n <= 20).
        #[arg(long)]
        all: bool,
    },
    /// Upper and lower bounds on the longest separable length.
    Bounds {
        #[arg(short)]
        m: usize,
    },
    /// Look for colliding pairs by splicing pieces of a colliding seed pair.
    Hunt {
        a: String,
        b: String,
        #[arg(long)]
        target_m: usize,
        #[arg(long)]
        length_cap: usize,
        #[arg(long, env = "KDECK_THREADS")]
        threads: Option<usize>,
    },
}

enum Failure {
    Core(Error),
    Io(String),
    Exit(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Exit(code)) => ExitCode::from(code),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource(_) => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

fn threads(opt: Option<usize>) -> usize {
    opt.unwrap_or_else(|| SearchConfig::default().workers)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let machine = cli.machine;
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Deck { input, m, output } => {
            let x = parse_rle(input)?;
            let deck = compute_deck(&x, *m)?;
            match output {
                Some(path) => fs::write(path, deck.to_text())?,
                None => out.write_all(deck.to_text().as_bytes())?,
            }
            writeln!(out, "{}", deck.sum_check_line())?;
        }
        Command::Verify { a, b, m } => {
            let (a, b) = (parse_rle(a)?, parse_rle(b)?);
            let verdict = verify_pair(&a, &b, *m)?;
            print_verdict(&mut out, machine, *m, a.len(), &verdict, None)?;
            if !verdict.is_collision() {
                return Err(Failure::Exit(EXIT_NEGATIVE));
            }
        }
        Command::VerifyPaper { only_m, corpus } => {
            let text = match corpus {
                Some(p) => read_input(p)?,
                None => PAPER_PAIRS.to_string(),
            };
            let pairs = match parse_corpus(&text) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: corrupted corpus: {e}");
                    return Err(Failure::Exit(EXIT_RESOURCE));
                }
            };
            let selected: Vec<_> = pairs.iter().filter(|p| only_m.is_none_or(|m| p.m == m)).collect();
            if selected.is_empty() {
                eprintln!("error: no corpus pair with m={}", only_m.unwrap_or(0));
                return Err(Failure::Exit(EXIT_USAGE));
            }
            let mut all = true;
            for p in &selected {
                let start = Instant::now();
                let verdict = verify_pair(&p.a, &p.b, p.m)?;
                all &= verdict.is_collision();
                print_verdict(&mut out, machine, p.m, p.n, &verdict, Some(start.elapsed()))?;
            }
            if machine {
                writeln!(out, "pairs={} all_collide={all}", selected.len())?;
            } else if all {
                writeln!(out, "all {} pairs collide", selected.len())?;
            } else {
                writeln!(out, "some pairs do not collide")?;
            }
            if !all {
                return Err(Failure::Exit(EXIT_NEGATIVE));
            }
        }
        Command::Search { m, n, expect, search } => {
            let expect = match expect.as_deref() {
                None => None,
                Some("holds") => Some(Outcome::Holds),
                Some("fails") => Some(Outcome::Fails),
                Some(other) => return Err(Error::Parse { token: other.into(), reason: "expected `holds` or `fails`".into() }.into()),
            };
            let report = check_r(*m, *n, &search.config()?)?;
            if machine {
                for line in report.summary_lines() {
                    writeln!(out, "{line}")?;
                }
                writeln!(out, "elapsed_ms={}", report.elapsed.as_millis())?;
            } else {
                writeln!(out, "R({m},{n}) {}", report.outcome)?;
                if let Some((a, b)) = &report.witness {
                    writeln!(out, "witness: {a} / {b}")?;
                    writeln!(out, "         {} / {}", to_rle(a), to_rle(b))?;
                }
                print_stats(&mut out, &report)?;
            }
            if expect.is_some_and(|e| e != report.outcome) {
                return Err(Failure::Exit(EXIT_NEGATIVE));
            }
        }
        Command::Nm { m, max_n, search } => {
            let r = compute_n(*m, *max_n, &search.config()?)?;
            if machine {
                writeln!(out, "m={m} n_cap={max_n} value={} capped={}", r.value, r.capped)?;
                for rep in &r.reports {
                    writeln!(out, "{}", rep.summary_lines().join(" "))?;
                }
            } else {
                for rep in &r.reports {
                    writeln!(out, "R({},{}) {} ({} ms)", rep.m, rep.n, rep.outcome, rep.elapsed.as_millis())?;
                }
                if let Some((a, b)) = r.reports.last().and_then(|rep| rep.witness.as_ref()) {
                    writeln!(out, "witness: {a} / {b}")?;
                }
                if r.capped {
                    writeln!(out, "N_{m} >= {} (capped)", r.value)?;
                } else {
                    writeln!(out, "N_{m} = {}", r.value)?;
                }
            }
        }
        Command::Reconstruct { m, deck } => {
            let d = Deck::parse_text(&read_input(deck)?)?;
            if let Some(m) = m {
                if *m != d.m() {
                    return Err(Error::Domain(format!("-m {m} does not match the deck's m={}", d.m())).into());
                }
            }
            let x = reconstruct_runs(&d)?;
            if machine {
                writeln!(out, "x={x}")?;
            } else {
                writeln!(out, "{x}")?;
            }
        }
        Command::Invert { deck } => {
            let d = Deck::parse_text(&read_input(deck)?)?;
            let found = invert_deck_bruteforce(&d)?;
            for x in &found {
                writeln!(out, "{x}")?;
            }
            writeln!(out, "preimages={}", found.len())?;
        }
        Command::Sample { input, m, count, seed, threads: t, output, stats } => {
            let x = parse_rle(input)?;
            let seed = seed.unwrap_or_else(rand_seed);
            let batch = sample_batch(&x, *m, *count, seed, threads(*t))?;
            match output {
                Some(path) => fs::write(path, batch.to_text())?,
                None => out.write_all(batch.to_text().as_bytes())?,
            }
            if *stats {
                let est = estimate_distribution(&batch)?;
                let deck = compute_deck(&x, *m)?;
                for (y, f) in &est {
                    writeln!(out, "freq {y} {f:.6}")?;
                }
                writeln!(out, "tv_distance={:.6}", total_variation(&est, &deck))?;
            }
        }
        Command::Discriminate { batch, candidates, all } => {
            let batch = SampleBatch::parse_text(&read_input(batch)?)?;
            let mut cands = candidates.iter().map(|c| parse_rle(c)).collect::<Result<Vec<_>, _>>()?;
            if *all {
                if batch.n > 20 {
                    return Err(Error::Resource("--all is limited to n <= 20".into()).into());
                }
                cands.extend(BitString::all_of_length(batch.n));
            }
            let r = discriminate(&batch, &cands, batch.m)?;
            for (x, ll) in &r.log_likelihoods {
                writeln!(out, "{x} {ll}")?;
            }
            let names: Vec<String> = r.argmax.iter().map(|x| x.to_string()).collect();
            writeln!(out, "argmax={}", names.join(","))?;
        }
        Command::Bounds { m } => {
            if *m == 0 || *m > 16 {
                return Err(Error::Domain("bounds need 1 <= m <= 16".into()).into());
            }
            let r = bound_report(*m);
            if machine {
                writeln!(out, "m={m} {} consistent={}", r.summary_line(), r.consistent)?;
            } else {
                writeln!(out, "{}", r.summary_line())?;
            }
        }
        Command::Hunt { a, b, target_m, length_cap, threads: t } => {
            let (a, b) = (parse_rle(a)?, parse_rle(b)?);
            let cfg = HuntConfig { length_cap: *length_cap, workers: threads(*t) };
            let r = hunt_collisions((&a, &b), *target_m, &cfg)?;
            writeln!(out, "seed_level={} candidates={} pairs={}", r.seed_level, r.candidates, r.pairs.len())?;
            for (x, y) in &r.pairs {
                writeln!(out, "{} | {}", to_rle(x), to_rle(y))?;
            }
        }
    }
    Ok(())
}

fn rand_seed() -> u64 {
    use std::collections::hash_map::RandomState;
    use std::hash::{BuildHasher, Hasher};
    let mut h = RandomState::new().build_hasher();
    h.write_u128(std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_nanos()));
    h.finish()
}

fn print_verdict(
    out: &mut impl Write,
    machine: bool,
    m: usize,
    n: usize,
    verdict: &PairVerdict,
    elapsed: Option<std::time::Duration>,
) -> io::Result<()> {
    let time = elapsed.map(|d| d.as_secs_f64() * 1e3);
    if machine {
        let mut line = format!("m={m} n={n}");
        match verdict {
            PairVerdict::Collide => line.push_str(" verdict=Collide"),
            PairVerdict::Distinct { y, count_a, count_b } => {
                line.push_str(&format!(" verdict=Distinct y={y} count_a={count_a} count_b={count_b}"))
            }
        }
        if let Some(t) = time {
            line.push_str(&format!(" time_ms={t:.3}"));
        }
        writeln!(out, "{line}")
    } else {
        match time {
            Some(t) => writeln!(out, "m={m} n={n} {verdict} ({t:.3} ms)"),
            None => writeln!(out, "m={m} n={n} {verdict}"),
        }
    }
}

fn print_stats(out: &mut impl Write, report: &kdeck_core::CollisionReport) -> io::Result<()> {
    let s = &report.stats;
    writeln!(out, "strings enumerated   {}", s.strings_enumerated)?;
    writeln!(out, "decks computed       {}", s.decks_computed)?;
    writeln!(out, "fingerprint matches  {}", s.candidate_matches)?;
    writeln!(out, "confirmed groups     {}", s.confirmed_groups)?;
    writeln!(out, "buckets              {}", s.buckets)?;
    writeln!(out, "wall time            {:.3} s", report.elapsed.as_secs_f64())
}
