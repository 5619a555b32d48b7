use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use decomp::composition::{hide, parallel};
use decomp::conformance::{inclusion_check, ioco_check, ioco_check_sa, ConformanceVerdict};
use decomp::dot::to_dot;
use decomp::interface::InterfaceSpec;
use decomp::onthefly::{sut_from_model, OnTheFlyTester, TestConfig, Verdict};
use decomp::quotient::{build_quotient, check_decomposable, Decomposability};
use decomp::semantics::{check_sa_valid, delta_transform, ValidityRule};
use decomp::{fixtures, parse_iolts, parse_model, parse_sa, serialize, Action, Iolts, Model};

#[derive(Parser)]
#[command(
    name = "decomp",
    version,
    about = "Decompositional ioco testing toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Suspension automaton of an IOLTS.
    Delta {
        model: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parallel composition, optionally hiding shared outputs.
    Compose {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_delimiter = ',')]
        hide: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Checks `implementation ioco specification`.
    Ioco {
        implementation: PathBuf,
        specification: PathBuf,
    },
    /// Checks that the platform's behaviour is included in the specification.
    Include {
        env: PathBuf,
        spec: PathBuf,
        #[arg(long, value_delimiter = ',')]
        shared: Option<Vec<String>>,
    },
    /// Builds the quotient automaton for the missing component.
    Quotient {
        spec: PathBuf,
        env: PathBuf,
        #[arg(long, value_delimiter = ',')]
        shared: Option<Vec<String>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Checks a suspension automaton for validity.
    ValidateSa { model: PathBuf },
    /// Checks the sufficient conditions for decomposability.
    Decompose {
        spec: PathBuf,
        env: PathBuf,
        #[arg(long, value_delimiter = ',')]
        shared: Option<Vec<String>>,
        /// Writes the quotient when it exists.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tests a component model on the fly against spec and platform.
    Mbtest {
        spec: PathBuf,
        env: PathBuf,
        #[arg(long)]
        sut: PathBuf,
        #[arg(long, value_delimiter = ',')]
        shared: Option<Vec<String>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
        #[arg(long, default_value_t = 0.0)]
        stop_prob: f64,
        /// Runs seeds `seed..seed+N` and prints one line per run.
        #[arg(long)]
        seeds: Option<u64>,
    },
    /// Graphviz export.
    Dot {
        model: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Writes the fixture corpus as `<name>.im` files.
    Fixtures { dir: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read `{}`", path.display()))
}

fn load(path: &Path) -> Result<Model> {
    parse_model(&read(path)?).with_context(|| format!("in `{}`", path.display()))
}

fn load_iolts(path: &Path) -> Result<Iolts> {
    parse_iolts(&read(path)?).with_context(|| format!("in `{}`", path.display()))
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write `{}`", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn interface(spec: &Iolts, env: &Iolts, shared: &Option<Vec<String>>) -> Result<InterfaceSpec> {
    let iface = InterfaceSpec::from_models(spec, env)?;
    if let Some(names) = shared {
        let claimed: BTreeSet<Action> = names
            .iter()
            .map(|n| Action::parse(n))
            .collect::<Result<_, _>>()?;
        iface.check_hidden(&claimed)?;
    }
    Ok(iface)
}

fn report(verdict: &ConformanceVerdict, holds: &str, fails: &str) -> bool {
    match &verdict.counterexample {
        None => println!("{holds}"),
        Some(cx) => println!("{fails}: {cx}"),
    }
    verdict.holds
}

fn rule_name(rule: ValidityRule) -> &'static str {
    match rule {
        ValidityRule::NonBlocking => "non-blocking",
        ValidityRule::AnomalyFree => "anomaly-free",
        ValidityRule::DeltaIdempotent => "delta-idempotent",
        ValidityRule::QuiescentReducible => "quiescent-reducible",
    }
}

/// Returns whether the verdict is positive.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Delta { model, output } => {
            let sa = delta_transform(&load_iolts(&model)?)?;
            emit(&serialize(&sa), &output)?;
            Ok(true)
        }
        Command::Compose {
            left,
            right,
            hide: hidden,
            output,
        } => {
            let mut composed = parallel(&load_iolts(&left)?, &load_iolts(&right)?)?;
            if !hidden.is_empty() {
                let set = hidden
                    .iter()
                    .map(|n| Action::parse(n))
                    .collect::<Result<_, _>>()?;
                composed = hide(&composed, &set)?;
            }
            emit(&serialize(&composed), &output)?;
            Ok(true)
        }
        Command::Ioco {
            implementation,
            specification,
        } => {
            let imp = load_iolts(&implementation)?;
            let verdict = match load(&specification)? {
                Model::Iolts(spec) => ioco_check(&imp, &spec)?,
                Model::Sa(spec) => ioco_check_sa(&imp, &spec)?,
            };
            Ok(report(&verdict, "conforms", "does not conform"))
        }
        Command::Include { env, spec, shared } => {
            let (env, spec) = (load_iolts(&env)?, load_iolts(&spec)?);
            let iface = interface(&spec, &env, &shared)?;
            let verdict = inclusion_check(&env, &spec, &iface)?;
            Ok(report(&verdict, "included", "not included"))
        }
        Command::Quotient {
            spec,
            env,
            shared,
            output,
        } => {
            let (spec, env) = (load_iolts(&spec)?, load_iolts(&env)?);
            let iface = interface(&spec, &env, &shared)?;
            let q = build_quotient(&spec, &env, &iface)?;
            emit(&serialize(&q.automaton), &output)?;
            Ok(true)
        }
        Command::ValidateSa { model } => {
            let sa =
                parse_sa(&read(&model)?).with_context(|| format!("in `{}`", model.display()))?;
            let validity = check_sa_valid(&sa);
            if validity.is_valid() {
                println!("valid");
            } else {
                println!("invalid");
                for v in &validity.violations {
                    println!("  {} at `{}`: {}", rule_name(v.rule), v.state, v.detail);
                }
            }
            Ok(validity.is_valid())
        }
        Command::Decompose {
            spec,
            env,
            shared,
            output,
        } => {
            let (spec, env) = (load_iolts(&spec)?, load_iolts(&env)?);
            let iface = interface(&spec, &env, &shared)?;
            match check_decomposable(&spec, &env, &iface)? {
                Decomposability::Decomposable(q) => {
                    println!("decomposable");
                    if output.is_some() {
                        emit(&serialize(&q.automaton), &output)?;
                    }
                    Ok(true)
                }
                Decomposability::NotEstablished { reasons, quotient } => {
                    println!("not established");
                    for r in &reasons {
                        println!("  {r}");
                    }
                    if let (Some(q), Some(_)) = (quotient, &output) {
                        emit(&serialize(&q.automaton), &output)?;
                    }
                    Ok(false)
                }
            }
        }
        Command::Mbtest {
            spec,
            env,
            sut,
            shared,
            seed,
            max_steps,
            stop_prob,
            seeds,
        } => {
            let (spec, env, imp) = (load_iolts(&spec)?, load_iolts(&env)?, load_iolts(&sut)?);
            let iface = interface(&spec, &env, &shared)?;
            let tester = OnTheFlyTester::new(&spec, &env, &iface)?;
            let config = |seed| TestConfig {
                seed,
                max_steps,
                stop_probability: stop_prob,
            };
            match seeds {
                None => {
                    let mut adapter = sut_from_model(&imp, seed)?;
                    let result = tester.run(&mut adapter, &config(seed))?;
                    print!("{}", result.render());
                    if let Some((rule, obs)) = &result.failure {
                        println!("failed by rule {rule} on `{obs}`");
                    }
                    Ok(result.verdict != Verdict::Fail)
                }
                Some(n) => {
                    let mut failed = 0u64;
                    for s in seed..seed.saturating_add(n) {
                        let mut adapter = sut_from_model(&imp, s)?;
                        let result = tester.run(&mut adapter, &config(s))?;
                        match &result.failure {
                            Some((rule, obs)) => {
                                failed += 1;
                                println!(
                                    "verdict {} seed {s} rule {rule} obs {obs}",
                                    result.verdict
                                );
                            }
                            None => println!("verdict {} seed {s}", result.verdict),
                        }
                    }
                    println!("runs {n} failed {failed}");
                    Ok(failed == 0)
                }
            }
        }
        Command::Dot { model, output } => {
            emit(&to_dot(load(&model)?.lts()), &output)?;
            Ok(true)
        }
        Command::Fixtures { dir } => {
            fs::create_dir_all(&dir)
                .with_context(|| format!("cannot create `{}`", dir.display()))?;
            for (name, doc) in fixtures::CORPUS {
                let path = dir.join(format!("{name}.im"));
                fs::write(&path, doc)
                    .with_context(|| format!("cannot write `{}`", path.display()))?;
            }
            println!("wrote {} fixtures", fixtures::CORPUS.len());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
