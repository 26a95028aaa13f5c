use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use theta_core::analysis::{is_k_connected, segal_check};
use theta_core::check::check_functoriality;
use theta_core::constructions::Indexing;
use theta_core::dump::{dump, load, Dump};
use theta_core::suite::{run_suite, SuiteOptions};
use theta_core::{Error, Precat, PrecatMap, Window};

mod build;

use build::{Built, Spec};

#[derive(Parser, Debug)]
#[command(name = "theta", version, about = "Finite n-precats on Θⁿ: constructions, checks and identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a construction and write its windowed dump.
    Build {
        /// Construction name (nerve, upsilon, cell, boundary, sigma, suspension, …).
        name: String,
        #[command(flatten)]
        params: BuildArgs,
        /// Window bound B (default 3, or 2 above dimension 2).
        #[arg(long)]
        window: Option<u32>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a law on a dump or on a construction.
    Check {
        kind: CheckKind,
        /// A dump written by `build`.
        #[arg(long = "in", conflicts_with = "build")]
        input: Option<PathBuf>,
        /// Construction to build instead of reading a dump.
        #[arg(long)]
        build: Option<String>,
        #[command(flatten)]
        params: BuildArgs,
        #[arg(long)]
        window: Option<u32>,
        /// Try every composable pair (functoriality).
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the identity verification suite.
    Verify {
        /// Window bound for every item (each item has its own default).
        #[arg(long)]
        window: Option<u32>,
        /// Run only this item.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        json: bool,
        /// Use the step-endpoint Υ indexing (a negative control).
        #[arg(long, hide = true)]
        legacy_indexing: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Segal,
    Functorial,
    Cofibration,
    Connected,
}

#[derive(Args, Debug, Clone, Default)]
struct BuildArgs {
    /// JSON object of parameters; flags take precedence.
    #[arg(long)]
    params: Option<String>,
    /// Input tokens: empty, point, <N>point, nerve:<cat>, sigma<k>, F<i>, dF<i>.
    #[arg(long, num_args = 1..)]
    inputs: Vec<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    /// Dimension of the result.
    #[arg(long)]
    n: Option<usize>,
    /// Category name (point, I, Ibar, Z2, kronecker, chain<k>) or JSON file.
    #[arg(long)]
    category: Option<String>,
    /// Υ face: drop-first, drop-last or merge:<i>.
    #[arg(long)]
    face: Option<String>,
    #[arg(long)]
    monoid: Option<String>,
}

impl BuildArgs {
    fn spec(&self, name: &str) -> Result<Spec, Error> {
        let mut s = Spec {
            name: name.to_string(),
            inputs: self.inputs.clone(),
            k: self.k,
            i: self.i,
            n: self.n,
            category: self.category.clone(),
            face: self.face.clone(),
            monoid: self.monoid.clone(),
            table: None,
        };
        if let Some(p) = &self.params {
            s.merge_params(p)?;
        }
        Ok(s)
    }
}

/// Outcome of a command: a verdict or an error (exit 2).
enum Outcome {
    Pass,
    Fail,
}

fn window_for(bound: Option<u32>, dim: usize) -> Result<Window, Error> {
    Window::new(bound.unwrap_or_else(|| Spec::default_bound(dim)))
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Build { name, params, window, out } => {
            let built = params.spec(&name)?.build(Indexing::Full)?;
            let w = window_for(window, built.precat.dim())?;
            let text = dump(&built.precat, &w)?.to_json();
            match out {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?,
                None => println!("{text}"),
            }
            Ok(Outcome::Pass)
        }
        Command::Check { kind, input, build, params, window, exhaustive, json } => {
            let (precat, map, dumped) = match (input, build) {
                (Some(path), None) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
                    let d = Dump::from_json(&text)?;
                    let w = d.window;
                    (load(&d, path.display().to_string())?, None, Some(w))
                }
                (None, Some(name)) => {
                    let Built { precat, map } = params.spec(&name)?.build(Indexing::Full)?;
                    (precat, map, None)
                }
                _ => return Err(Error::InvalidArgument("check needs --in <dump> or --build <name>".into())),
            };
            let w = match (window, dumped) {
                (Some(b), Some(dw)) if b > dw.bound => {
                    return Err(Error::OutsideWindow(format!("the dump only covers B={}", dw.bound)));
                }
                (None, Some(dw)) => dw,
                (b, _) => window_for(b, precat.dim())?,
            };
            check(kind, &precat, map.as_ref(), &w, &params, exhaustive, json)
        }
        Command::Verify { window, only, json, legacy_indexing } => {
            let opts = SuiteOptions {
                window,
                only,
                indexing: if legacy_indexing { Indexing::StepEndpoints } else { Indexing::Full },
            };
            let r = run_suite(&opts)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("suite result serializes"));
            } else {
                for e in &r.entries {
                    println!(
                        "{} {:<20} [{}] B={} {}ms  {}",
                        if e.passed { "PASS" } else { "FAIL" },
                        e.name,
                        e.anchor,
                        e.window,
                        e.wall_ms,
                        e.detail
                    );
                }
            }
            Ok(if r.passed() { Outcome::Pass } else { Outcome::Fail })
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn check(
    kind: CheckKind,
    p: &Precat,
    map: Option<&PrecatMap>,
    w: &Window,
    params: &BuildArgs,
    exhaustive: bool,
    json: bool,
) -> Result<Outcome, Error> {
    match kind {
        CheckKind::Segal => {
            let r = segal_check(p, w)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            } else {
                println!("{}: {} Segal maps checked on B={}", r.precat, r.maps.len(), w.bound);
                for m in r.failures() {
                    println!(
                        "  not bijective: prefix {:?}, p={}, tail {:?}: source {}, target {} (injective: {}, surjective: {})",
                        m.prefix, m.p, m.tail, m.source_size, m.target_size, m.injective, m.surjective
                    );
                }
                println!("{}", if r.strict() { "strict" } else { "not strict" });
            }
            Ok(verdict(r.strict()))
        }
        CheckKind::Functorial => {
            let r = check_functoriality(p, w, exhaustive)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            } else {
                println!("{}: {} morphisms, {} violations", r.precat, r.morphisms_checked, r.violations.len());
                for v in r.violations.iter().take(10) {
                    println!("  {} law: f={} g={} cell={} expected {} got {}", v.law, v.f, v.g, v.cell, v.expected, v.got);
                }
            }
            Ok(verdict(r.passed()))
        }
        CheckKind::Cofibration => {
            let f = map.ok_or_else(|| {
                Error::InvalidArgument("cofibration needs a construction with a map (cell, boundary, whitehead, upsilon --face)".into())
            })?;
            let natural = f.is_natural(w)?;
            let cof = f.is_cofibration(w)?;
            if json {
                println!("{}", json!({"map": f.name(), "window": w, "natural": natural, "cofibration": cof}));
            } else {
                println!("{}: {} -> {}: natural {natural}, cofibration {cof}", f.name(), f.domain().name(), f.codomain().name());
            }
            Ok(verdict(natural && cof))
        }
        CheckKind::Connected => {
            let k = params.k.ok_or_else(|| Error::InvalidArgument("connected needs --k".into()))?;
            let ok = is_k_connected(p, k, w)?;
            if json {
                println!("{}", json!({"precat": p.name(), "k": k, "window": w, "connected": ok}));
            } else {
                println!("{} is {}{k}-connected", p.name(), if ok { "" } else { "not " });
            }
            Ok(verdict(ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|info| eprintln!("theta: internal error: {info}")));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(Outcome::Pass)) => ExitCode::SUCCESS,
        Ok(Ok(Outcome::Fail)) => ExitCode::from(1),
        Ok(Err(e)) => {
            eprintln!("theta: {e}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
