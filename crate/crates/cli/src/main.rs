use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use selfdual_core::analytics::fit_w76;
use selfdual_core::code::BinaryCode;
use selfdual_core::decomposition::SigmaLayout;
use selfdual_core::distance::{full_weight_distribution, DistancePlan, DistanceVerdict};
use selfdual_core::equivalence::{are_equivalent, aut_group_order, AutResult, EquivalenceVerdict, DEFAULT_BUDGET};
use selfdual_core::fixed_part::{exclusion_report, gpp_report};
use selfdual_core::hermitian::{codes_to_gm64, generate_m2_random, parse_gm64, validate_m2, HermitianCode};
use selfdual_core::perm::Permutation;
use selfdual_core::ring::{self, F64Elem};
use selfdual_search::stage::{E_MANIFEST, F_MANIFEST};
use selfdual_search::{classify, default_jobs, stage_e, stage_f, Manifest, Record, RunConfig};

#[derive(Parser)]
#[command(name = "selfdual-forge", version, about = "Search and analysis tools for self-dual [76,38,14] codes with an automorphism of order 9")]
struct Cli {
    /// Write the standard-output records to this file instead.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ring and field checks.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Hermitian self-dual codes over GF(64).
    #[command(subcommand)]
    M2(M2Cmd),
    /// Minimum distance of a `.gm2` code.
    Mindist {
        file: PathBuf,
        /// Stop as soon as a word below this weight is found.
        #[arg(long)]
        at_least: Option<usize>,
    },
    /// Weight distribution of a `.gm2` code.
    Wdist {
        file: PathBuf,
        /// Count only weights up to this value.
        #[arg(long)]
        up_to: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Match a self-dual length-76 code against the three weight enumerator families.
    FitEnum { file: PathBuf },
    /// Decide permutation equivalence of two codes.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Order of the permutation automorphism group.
    Aut {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Fixed-point part analysis.
    #[command(subcommand)]
    Fixedpart(FixedpartCmd),
    /// Two-stage search.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Summarize a complete manifest.
    Classify {
        #[arg(long)]
        from: PathBuf,
    },
}

#[derive(Subcommand)]
enum RingCmd {
    Selftest,
}

#[derive(Subcommand)]
enum M2Cmd {
    /// Check every code in a `.gm64` file.
    Validate { file: PathBuf },
    /// Random codes `[I4 | B]` with `B` unitary, in `.gm64` format.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Minimum distance of the binary image.
        #[arg(long, default_value_t = 16)]
        min_distance: usize,
    },
}

#[derive(Subcommand)]
enum FixedpartCmd {
    Report,
}

#[derive(Args)]
struct RunArgs {
    /// Run directory for the manifest and survivor files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Return after this many chunks; the run can be resumed.
    #[arg(long)]
    stop_after_chunks: Option<u64>,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Stage E: `[72, 32, 16]` codes from `e8` and each `M2`.
    E72 {
        /// A `.gm64` file or a directory of them.
        #[arg(long)]
        m2: PathBuf,
        /// Recorded in the manifest.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated transversal indices, all 30 by default.
        #[arg(long, value_delimiter = ',')]
        taus: Option<Vec<u8>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Stage F: self-dual `[76, 38, 14]` codes from a complete stage E manifest.
    F76 {
        #[arg(long)]
        from: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error(transparent)]
    Search(#[from] selfdual_search::SearchError),
    #[error(transparent)]
    Core(#[from] selfdual_core::Error),
    #[error(transparent)]
    Code(#[from] selfdual_core::error::CodeError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Standard output text and whether every check passed.
struct Outcome {
    stdout: String,
    ok: bool,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, ok: bool) -> Outcome {
        Outcome { stdout: format!("{}\n", serde_json::to_string_pretty(value).expect("serializable")), ok }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })
}

fn load_gm2(path: &Path) -> Result<BinaryCode, CliError> {
    BinaryCode::from_gm2(&read(path)?).map_err(|e| CliError::Input { path: path.display().to_string(), msg: e.to_string() })
}

/// Uses the order-9 symmetry when the code is a length-72 or length-76 code invariant under it.
fn plan_for(code: &BinaryCode) -> Result<DistancePlan, CliError> {
    if matches!(code.n(), 72 | 76) {
        let sym = SigmaLayout::symmetry(code.n());
        if code.is_invariant_under(sym.perm()) {
            return Ok(DistancePlan::with_symmetry(code, &sym)?);
        }
    }
    Ok(DistancePlan::new(code)?)
}

fn verdict_json(v: &DistanceVerdict) -> Value {
    match v {
        DistanceVerdict::Exact(d) => json!({"verdict": "exact", "min_distance": d}),
        DistanceVerdict::AtLeast(d) => json!({"verdict": "at_least", "bound": d}),
        DistanceVerdict::Below { threshold, witness } => {
            json!({"verdict": "below", "threshold": threshold, "witness": witness.to_string(), "witness_weight": witness.weight()})
        }
    }
}

fn cycles(images: &[usize]) -> String {
    Permutation::from_images(images.to_vec()).map(|p| p.to_string()).unwrap_or_default()
}

fn m2_files(path: &Path) -> Result<Vec<PathBuf>, CliError> {
    if path.is_dir() {
        let mut files: Vec<PathBuf> =
            fs::read_dir(path)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "gm64")).collect();
        files.sort();
        Ok(files)
    } else {
        Ok(vec![path.to_path_buf()])
    }
}

fn load_m2s(path: &Path) -> Result<Vec<HermitianCode<F64Elem>>, CliError> {
    let mut out = Vec::new();
    for file in m2_files(path)? {
        let blocks = parse_gm64(&read(&file)?).map_err(|e| CliError::Input { path: file.display().to_string(), msg: e.to_string() })?;
        for (line, rows) in blocks {
            out.push(validate_m2(rows).map_err(|e| CliError::Input { path: file.display().to_string(), msg: format!("code at line {line}: {e}") })?);
        }
    }
    Ok(out)
}

fn run_config(run: &RunArgs) -> RunConfig {
    let mut cfg = RunConfig::new(&run.out);
    cfg.jobs = run.jobs.unwrap_or_else(default_jobs);
    cfg.budget = run.budget;
    cfg.stop_after_chunks = run.stop_after_chunks;
    cfg
}

fn run_summary(m: &Manifest, path: &Path) -> Outcome {
    let complete = m.records.iter().rev().find_map(|r| match r {
        Record::Complete { distinct_survivors, classes, flagged } => Some(json!({"distinct_survivors": distinct_survivors, "classes": classes, "flagged": flagged})),
        _ => None,
    });
    let tasks = match m.header() {
        Some(Record::Header { tasks, .. }) => *tasks,
        _ => 0,
    };
    eprintln!("{} of {} tasks done, {} survivor tasks", m.cursor(), tasks, m.survivors().count());
    Outcome::json(
        &json!({
            "manifest": path.display().to_string(),
            "tasks": tasks,
            "cursor": m.cursor(),
            "complete": m.is_complete(),
            "survivor_tasks": m.survivors().count(),
            "summary": complete,
        }),
        true,
    )
}

fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Ring(RingCmd::Selftest) => {
            let suites = ring::selftest();
            for s in &suites {
                eprintln!("{:<6} {} ({} cases)", if s.passed { "ok" } else { "FAILED" }, s.name, s.cases);
            }
            let ok = suites.iter().all(|s| s.passed);
            Ok(Outcome::json(&json!({"passed": ok, "suites": suites}), ok))
        }
        Command::M2(M2Cmd::Validate { file }) => {
            let blocks = parse_gm64(&read(&file)?).map_err(|e| CliError::Input { path: file.display().to_string(), msg: e.to_string() })?;
            let mut codes = Vec::new();
            let mut ok = true;
            for (line, rows) in blocks {
                match validate_m2(rows) {
                    Ok(c) => {
                        let binary = DistancePlan::new(&c.binary_image())?.min_distance(None);
                        codes.push(json!({"line": line, "valid": true, "hash": c.content_hash(), "min_distance": c.min_distance(), "binary_min_distance": binary.exact()}));
                    }
                    Err(e) => {
                        ok = false;
                        eprintln!("{}: code at line {line}: {e}", file.display());
                        codes.push(json!({"line": line, "valid": false, "error": e.to_string()}));
                    }
                }
            }
            Ok(Outcome::json(&json!({"file": file.display().to_string(), "codes": codes}), ok))
        }
        Command::M2(M2Cmd::Generate { seed, count, min_distance }) => {
            let codes = generate_m2_random(seed, count, min_distance);
            if codes.len() < count {
                eprintln!("only {} of {count} codes found", codes.len());
            }
            let mut text = codes_to_gm64(&codes);
            if !text.is_empty() && !text.ends_with('\n') {
                text.push('\n');
            }
            Ok(Outcome { stdout: text, ok: codes.len() == count })
        }
        Command::Mindist { file, at_least } => {
            let code = load_gm2(&file)?;
            let v = plan_for(&code)?.min_distance(at_least);
            eprintln!("[{}, {}] d {v}", code.n(), code.k());
            let mut out = verdict_json(&v);
            out["n"] = json!(code.n());
            out["k"] = json!(code.k());
            Ok(Outcome::json(&out, true))
        }
        Command::Wdist { file, up_to, jobs } => {
            let code = load_gm2(&file)?;
            let dist = match up_to {
                Some(cap) => plan_for(&code)?.capped_distribution(cap),
                None => full_weight_distribution(&code, jobs.unwrap_or_else(default_jobs))?,
            };
            for (w, c) in dist.counts.iter().enumerate().filter(|(_, c)| **c > 0) {
                eprintln!("{w:>4} {c:>12}");
            }
            Ok(Outcome::json(&json!({"n": code.n(), "k": code.k(), "distribution": dist}), true))
        }
        Command::FitEnum { file } => {
            let code = load_gm2(&file)?;
            let report = fit_w76(&code)?;
            match report.fit {
                Some(f) => eprintln!("family {} alpha {}", f.family, f.alpha.map_or("-".into(), |a| a.to_string())),
                None => eprintln!("no family matches A14 = {}, A16 = {}", report.a14, report.a16),
            }
            let ok = report.fit.is_some() && report.shadow.as_ref().map_or(true, |s| s.consistent);
            Ok(Outcome::json(&report, ok))
        }
        Command::Equiv { a, b, budget } => {
            let (ca, cb) = (load_gm2(&a)?, load_gm2(&b)?);
            let out = match are_equivalent(&ca, &cb, budget)? {
                EquivalenceVerdict::Equivalent(cert) => json!({"verdict": "equivalent", "certificate": cert.cycle_notation(), "images": cert.perm}),
                EquivalenceVerdict::Inequivalent => json!({"verdict": "inequivalent"}),
                EquivalenceVerdict::BudgetExceeded { nodes } => json!({"verdict": "budget_exceeded", "nodes": nodes}),
            };
            eprintln!("{}", out["verdict"].as_str().unwrap_or_default());
            Ok(Outcome::json(&out, true))
        }
        Command::Aut { file, budget } => {
            let code = load_gm2(&file)?;
            let out = match aut_group_order(&code, budget)? {
                AutResult::Complete(g) => {
                    let order = g.order().map(|o| o.to_string());
                    eprintln!("|Aut| = {}", order.as_deref().unwrap_or("overflow"));
                    json!({
                        "complete": true,
                        "order": order,
                        "orbit_lengths": g.orbit_lengths,
                        "generators": g.generators.iter().map(|p| cycles(p)).collect::<Vec<_>>(),
                        "nodes": g.nodes,
                    })
                }
                AutResult::BudgetExceeded { nodes } => json!({"complete": false, "nodes": nodes}),
            };
            Ok(Outcome::json(&out, true))
        }
        Command::Fixedpart(FixedpartCmd::Report) => {
            let exclusions = exclusion_report();
            let group = gpp_report();
            eprintln!("6i2: every assignment below 14: {}", exclusions.six_i2.summary.all_below_14);
            eprintln!("2i2+h8: all five splits below 14: {}", exclusions.two_i2_h8.all_five_below_14);
            eprintln!("d12: cluster rule gives weight >= 14: {}", exclusions.d12.all_satisfying_at_least_14);
            eprintln!(
                "G'': closure order {}, index in S8 {}, stated {}",
                group.closure_order, group.index_in_s8, group.stated_order
            );
            let ok = exclusions.verdicts_hold() && group.every_element_preserves_g2 && group.index_matches();
            Ok(Outcome::json(
                &json!({
                    "exclusions": exclusions,
                    "verdicts_hold": exclusions.verdicts_hold(),
                    "group": group,
                    "order_matches": group.order_matches(),
                    "index_matches": group.index_matches(),
                }),
                ok,
            ))
        }
        Command::Search(SearchCmd::E72 { m2, seed, taus, run }) => {
            let codes = load_m2s(&m2)?;
            let mut cfg = run_config(&run);
            cfg.seed = seed;
            if let Some(t) = taus {
                cfg.taus = t;
            }
            let m = stage_e(&codes, &cfg, run.resume.as_deref())?;
            Ok(run_summary(&m, &cfg.dir.join(E_MANIFEST)))
        }
        Command::Search(SearchCmd::F76 { from, run }) => {
            let cfg = run_config(&run);
            let m = stage_f(&from, &cfg, run.resume.as_deref())?;
            Ok(run_summary(&m, &cfg.dir.join(F_MANIFEST)))
        }
        Command::Classify { from } => {
            let report = classify(&from)?;
            eprintln!(
                "{} distinct survivors in {} classes, {} flagged, {} diagnostics",
                report.distinct_survivors, report.classes, report.flagged, report.diagnostics
            );
            eprint!("{}", report.census.render());
            for (fit, n) in &report.fits {
                eprintln!("fit {fit}: {n}");
            }
            Ok(Outcome::json(&report, true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match dispatch(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &outcome.stdout),
        None => std::io::stdout().lock().write_all(outcome.stdout.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
