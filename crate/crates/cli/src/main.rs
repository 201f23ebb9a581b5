//! `rbskit`: build finite categories, compute nerve homology, run the
//! verification checks and time the core kernels.

mod bench;
mod objects;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rbskit::checks::{find, registry, CheckDef, CheckReport, Instance, Outcome, Profile};
use rbskit::fincat::{category_homology, homology, Coefficients, HomologyResult};
use rbskit::{Error, Guards, Result};
use serde::Serialize;

use bench::BenchArgs;
use objects::{build_json, build_space, describe, load_category, Object, ObjectParams, Space};

#[derive(Parser, Debug)]
#[command(name = "rbskit", version, about = "Reductive Borel-Serre categories of finite rings, at desk scale")]
struct Cli {
    /// Guard limits as a TOML (or .json) file; unset keys keep their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct an object and print it as JSON.
    Build {
        object: Object,
        #[command(flatten)]
        params: ObjectParams,
    },
    /// Nerve homology of an object, or of a category read from a file.
    Homology(HomologyArgs),
    /// Run a named check, or every check with --all.
    Verify(VerifyArgs),
    /// Time a kernel on deterministic input.
    Bench(BenchArgs),
    /// List the registered checks.
    Checks,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    #[arg(required_unless_present = "input", conflicts_with = "input")]
    object: Option<Object>,
    #[command(flatten)]
    params: ObjectParams,
    /// JSON file written by `build`, or a bare category.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Nerve depth D; degrees 0..D-1 are certified.
    #[arg(long, default_value_t = 4)]
    depth: usize,
    /// Z or F<prime>.
    #[arg(long, default_value = "Z")]
    coeff: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    check: Option<String>,
    #[arg(long)]
    all: bool,
    /// Instance set used when no parameters are given.
    #[arg(long, default_value = "desk")]
    profile: String,
    #[arg(long)]
    ring: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    ell: Option<u32>,
    /// Named category or sub-check label.
    #[arg(long, alias = "label")]
    category: Option<String>,
    /// Include wall-clock times in the output.
    #[arg(long)]
    timings: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Json(_) => 1,
        Error::Guard { .. } => 2,
        _ => 3,
    }
}

fn load_guards(path: Option<&PathBuf>) -> Result<Guards> {
    let Some(path) = path else { return Ok(Guards::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        Ok(serde_json::from_str(&text)?)
    } else {
        toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let guards = load_guards(cli.config.as_ref())?;
    match &cli.cmd {
        Command::Build { object, params } => {
            print_json(&build_json(*object, params, &guards)?)?;
            Ok(0)
        }
        Command::Homology(args) => cmd_homology(args, cli.json, &guards),
        Command::Verify(args) => cmd_verify(args, cli.json, &guards),
        Command::Bench(args) => {
            let row = bench::run(args, &guards)?;
            if cli.json {
                print_json(&row)?;
            } else {
                print!("{}", row.table());
            }
            Ok(if row.agrees { 0 } else { 3 })
        }
        Command::Checks => {
            for c in registry() {
                println!("{:<16} criterion {}  {}", c.name, c.criterion, c.title);
            }
            Ok(0)
        }
    }
}

#[derive(Serialize)]
struct HomologyReport {
    space: String,
    depth: Option<usize>,
    result: HomologyResult,
    groups: Vec<String>,
    reduced_groups: Vec<String>,
}

fn cmd_homology(args: &HomologyArgs, json: bool, guards: &Guards) -> Result<u8> {
    let coeff: Coefficients = args.coeff.parse()?;
    let (space, depth, result) = match (&args.input, args.object) {
        (Some(path), _) => {
            let c = load_category(path)?;
            (path.display().to_string(), Some(args.depth), category_homology(&c, args.depth, coeff, guards)?)
        }
        (None, Some(object)) => {
            let name = describe(object, &args.params);
            match build_space(object, &args.params, guards)? {
                Space::Category(c) => (name, Some(args.depth), category_homology(&c, args.depth, coeff, guards)?),
                Space::Tits(t) => (name, None, homology(&t.complex.chain_complex(), coeff)),
            }
        }
        (None, None) => return Err(Error::InvalidInput("give an object or --input".into())),
    };
    let reduced = HomologyResult {
        betti: result.reduced_betti(),
        ..result.clone()
    };
    let top = result.max_trusted_degree;
    let report = HomologyReport {
        groups: (0..=top).map(|k| result.group_string(k)).collect(),
        reduced_groups: (0..=top).map(|k| reduced.group_string(k)).collect(),
        space,
        depth,
        result,
    };
    if json {
        print_json(&report)?;
        return Ok(0);
    }
    match report.depth {
        Some(d) => println!("H_*({}; {coeff}), nerve depth {d}, trusted degrees 0..={top}", report.space),
        None => println!("H_*({}; {coeff}), all degrees", report.space),
    }
    let w = report.groups.iter().map(|g| g.chars().count()).max().unwrap_or(0).max(3);
    println!("{:>3}  {:<w$}  reduced", "k", "H_k");
    for k in 0..=top {
        println!("{k:>3}  {:<w$}  {}", report.groups[k], report.reduced_groups[k]);
    }
    Ok(0)
}

impl VerifyArgs {
    fn explicit_instance(&self) -> Result<Option<Instance>> {
        let ring = match (&self.ring, self.q) {
            (Some(_), Some(_)) => return Err(Error::InvalidInput("give either --ring or --q, not both".into())),
            (r, q) => r.clone().or(q.map(|q| format!("F{q}"))),
        };
        let inst = Instance {
            ring,
            n: self.n,
            depth: self.depth,
            cap: self.cap,
            ell: self.ell,
            label: self.category.clone(),
        };
        Ok((inst != Instance::default()).then_some(inst))
    }
}

fn cmd_verify(args: &VerifyArgs, json: bool, guards: &Guards) -> Result<u8> {
    let profile: Profile = args.profile.parse()?;
    let explicit = args.explicit_instance()?;
    let mut jobs: Vec<(&CheckDef, Instance)> = Vec::new();
    if args.all {
        if explicit.is_some() {
            return Err(Error::InvalidInput("--all takes no instance parameters".into()));
        }
        for c in registry() {
            jobs.extend(c.profile_instances(profile).into_iter().map(|i| (c, i)));
        }
    } else {
        let name = args.check.as_deref().unwrap_or_default();
        let c = find(name).ok_or_else(|| {
            let names: Vec<&str> = registry().iter().map(|c| c.name).collect();
            Error::InvalidInput(format!("unknown check `{name}` (known: {})", names.join(", ")))
        })?;
        match explicit {
            Some(i) => jobs.push((c, i)),
            None => jobs.extend(c.profile_instances(profile).into_iter().map(|i| (c, i))),
        }
    }

    let mut reports: Vec<CheckReport> = Vec::new();
    let mut worst: Option<u8> = None;
    let mut last_title = "";
    for (c, inst) in jobs {
        if !json && c.title != last_title {
            println!("{} (criterion {}): {}", c.name, c.criterion, c.title);
            last_title = c.title;
        }
        match c.run(&inst, guards) {
            Ok(mut r) => {
                if !args.timings {
                    r.elapsed_ms = None;
                }
                if !r.outcome.is_pass() {
                    worst = Some(worst.map_or(3, |w| w.min(3)));
                }
                if !json {
                    print_report(&r);
                }
                reports.push(r);
            }
            Err(e) => {
                let code = exit_code(&e);
                worst = Some(worst.map_or(code, |w| w.min(code)));
                eprintln!("error: {} {inst}: {e}", c.name);
            }
        }
    }
    if json {
        print_json(&reports)?;
    } else if reports.len() > 1 {
        let passed = reports.iter().filter(|r| r.outcome.is_pass()).count();
        println!("{passed}/{} instances passed", reports.len());
    }
    Ok(worst.unwrap_or(0))
}

fn print_report(r: &CheckReport) {
    let time = r.elapsed_ms.map(|t| format!(" ({t} ms)")).unwrap_or_default();
    let status = match &r.outcome {
        Outcome::Pass => "pass".to_string(),
        Outcome::Fail { .. } => "FAIL".to_string(),
        Outcome::Inconclusive { .. } => "inconclusive".to_string(),
    };
    println!("  [{status}] {}{time}", r.instance);
    for m in &r.measurements {
        let mark = match m.agrees {
            Some(true) => "ok",
            Some(false) => "!!",
            None => "??",
        };
        let prov = serde_json::to_value(m.provenance).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        println!("      {mark} {}: {} (expected {}, {prov})", m.quantity, m.measured, m.expected);
    }
}
