//! Command-line surface over the maxdet library.
//!
//! Exit codes: 0 = yes/success, 1 = no, 2 = error or exceeded budget,
//! 3 = witness failed oracle verification.

use clap::{Args, Parser, Subcommand};
use maxdet::deciders::{self, Decision};
use maxdet::files::{
    arena_to_dot, automaton_to_dot, parse_json, to_canonical_json, ArenaFile, AutomatonFile,
    MealyFile, ReportFile,
};
use maxdet::{corpus, oracle, Limits, WeightedAutomaton};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "maxdet", version, about = "Delay- and regret-constrained determinization of max-plus weighted automata")]
struct Cli {
    /// Ceiling on constructed state counts.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_states: usize,
    /// Ceiling on game arena sizes.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_arena: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an automaton on a word; prints the value or "undefined".
    Eval { automaton: PathBuf, word: String },
    /// Apply a construction to an automaton file.
    Transform {
        #[command(subcommand)]
        kind: TransformKind,
    },
    /// Decide a determinizability question.
    Decide {
        #[command(subcommand)]
        question: DecideKind,
    },
    /// Solve questions about an energy game with resets.
    Egr {
        #[command(subcommand)]
        action: EgrAction,
    },
    /// Generate a corpus fixture.
    Gen {
        #[command(subcommand)]
        fixture: GenKind,
    },
    /// Run an independent brute-force oracle check.
    Oracle {
        #[command(subcommand)]
        check: OracleKind,
    },
    /// Render an automaton or arena file as Graphviz dot (best effort).
    Dot { file: PathBuf },
}

#[derive(Subcommand)]
enum TransformKind {
    Trim { input: PathBuf, output: PathBuf },
    Pairdet { input: PathBuf, output: PathBuf },
    Delay { k: i64, input: PathBuf, output: PathBuf },
    Delaysubset { k: i64, input: PathBuf, output: PathBuf },
    Scale { x: i64, input: PathBuf, output: PathBuf },
    Gamma { k: i64, input: PathBuf, output: PathBuf },
    Bounddet { bound: i64, input: PathBuf, output: PathBuf },
}

#[derive(Args)]
struct DecideCommon {
    input: PathBuf,
    /// Write the witness automaton here on a yes answer.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Write the witness strategy here on a yes answer (regret questions).
    #[arg(long)]
    strategy: Option<PathBuf>,
    /// Re-check the witness against the oracles at this horizon.
    #[arg(long)]
    verify: Option<usize>,
    /// Write a structured report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DecideKind {
    /// Is the automaton k-delay determinizable?
    Kdelay {
        k: i64,
        #[command(flatten)]
        common: DecideCommon,
    },
    /// Is the automaton 0-delay determinizable?
    Zerodelay {
        #[command(flatten)]
        common: DecideCommon,
    },
    /// Is the automaton r-regret determinizable?
    Regret {
        r: i64,
        #[command(flatten)]
        common: DecideCommon,
    },
    /// Is the automaton r-regret determinizable for some r?
    RegretAny {
        #[command(flatten)]
        common: DecideCommon,
    },
    /// Search k = 0..k_max for a delay determinizer.
    Semidet {
        k_max: i64,
        #[command(flatten)]
        common: DecideCommon,
    },
}

#[derive(Subcommand)]
enum EgrAction {
    /// Does Eve win from the vertex with the given initial credit?
    Solve { vertex: String, credit: i64, arena: PathBuf },
    /// Minimal winning credit for the vertex, or "unwinnable".
    Mincredit { vertex: String, arena: PathBuf },
    /// Vertices from which Eve wins with the saturation credit.
    Region { arena: PathBuf },
}

#[derive(Subcommand)]
enum GenKind {
    Fig1Left { k: i64, output: PathBuf },
    Fig1Right { k: i64, output: PathBuf },
    Fig2Left { k: i64, output: PathBuf },
    Fig2Right { k: i64, output: PathBuf },
    Fig3 { output: PathBuf },
    Jpair { n: usize, output: PathBuf },
    Quadregret { k: usize, output: PathBuf },
    Maxab { output: PathBuf },
    EgrExample { output: PathBuf },
}

#[derive(Subcommand)]
enum OracleKind {
    /// Value agreement of two automata on all words up to the horizon.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
    },
    /// Word value by explicit run enumeration.
    Value { automaton: PathBuf, word: String },
    /// Bounded-horizon regret of a Mealy strategy.
    Regret {
        automaton: PathBuf,
        mealy: PathBuf,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
    },
    /// Least k with the first automaton k-included in the second.
    Mindelay {
        d: PathBuf,
        n: PathBuf,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
    },
    /// B-boundedness of an automaton over the horizon.
    Boundcheck {
        automaton: PathBuf,
        bound: i64,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
    },
    /// EGR winner from (vertex, credit) by the grid fixpoint.
    Egr { arena: PathBuf, vertex: String, credit: i64 },
}

fn read_automaton(path: &Path) -> maxdet::Result<WeightedAutomaton> {
    let text = std::fs::read_to_string(path)?;
    parse_json::<AutomatonFile>(&text)?.into_automaton()
}

fn read_arena(path: &Path) -> maxdet::Result<maxdet::EgrArena> {
    let text = std::fs::read_to_string(path)?;
    parse_json::<ArenaFile>(&text)?.into_arena()
}

fn write_automaton(path: &Path, wa: &WeightedAutomaton) -> maxdet::Result<()> {
    std::fs::write(path, to_canonical_json(&AutomatonFile::from_automaton(wa)))?;
    Ok(())
}

fn run(cli: Cli) -> maxdet::Result<u8> {
    let limits = Limits { max_states: cli.max_states, max_arena: cli.max_arena };
    match cli.command {
        Command::Eval { automaton, word } => {
            let wa = read_automaton(&automaton)?;
            let w = wa.parse_word(&word)?;
            println!("{}", wa.evaluate(&w)?);
            Ok(0)
        }
        Command::Transform { kind } => {
            let (input, output, result) = match kind {
                TransformKind::Trim { input, output } => {
                    let wa = read_automaton(&input)?;
                    (input, output, wa.trim())
                }
                TransformKind::Pairdet { input, output } => {
                    let wa = read_automaton(&input)?;
                    (input, output, maxdet::pair_determinize(&wa, &limits)?)
                }
                TransformKind::Delay { k, input, output } => {
                    let wa = read_automaton(&input)?;
                    (input, output, maxdet::delay_construct(&wa, k, &limits)?)
                }
                TransformKind::Delaysubset { k, input, output } => {
                    let wa = read_automaton(&input)?;
                    (input, output, maxdet::delay_subset_construct(&wa, k, &limits)?)
                }
                TransformKind::Scale { x, input, output } => {
                    let wa = read_automaton(&input)?;
                    (input, output, wa.scale(x)?)
                }
                TransformKind::Gamma { k, input, output } => {
                    let wa = read_automaton(&input)?;
                    (input, output, wa.gamma_round(k))
                }
                TransformKind::Bounddet { bound, input, output } => {
                    let wa = read_automaton(&input)?;
                    (input, output, maxdet::bounded_determinize(&wa, bound, &limits)?)
                }
            };
            let _ = input;
            write_automaton(&output, &result)?;
            Ok(0)
        }
        Command::Decide { question } => {
            let (common, decision, label) = match question {
                DecideKind::Kdelay { k, common } => {
                    let wa = read_automaton(&common.input)?;
                    (common, maxdet::decide_k_delay(&wa, k, &limits)?, format!("kdelay {k}"))
                }
                DecideKind::Zerodelay { common } => {
                    let wa = read_automaton(&common.input)?;
                    (common, maxdet::decide_0_delay(&wa, &limits)?, "zerodelay".into())
                }
                DecideKind::Regret { r, common } => {
                    let wa = read_automaton(&common.input)?;
                    (common, maxdet::decide_r_regret(&wa, r, &limits)?, format!("regret {r}"))
                }
                DecideKind::RegretAny { common } => {
                    let wa = read_automaton(&common.input)?;
                    (common, maxdet::decide_exists_regret(&wa, &limits)?, "regret-any".into())
                }
                DecideKind::Semidet { k_max, common } => {
                    let wa = read_automaton(&common.input)?;
                    (common, maxdet::semialgorithm_determinize(&wa, k_max, &limits)?, format!("semidet {k_max}"))
                }
            };
            finish_decision(&common, decision, &label, &limits)
        }
        Command::Egr { action } => match action {
            EgrAction::Solve { vertex, credit, arena } => {
                let g = read_arena(&arena)?;
                let v = g.vertex_id(&vertex).ok_or(maxdet::Error::UnknownVertex(vertex))?;
                let eve = maxdet::solve_egr(&g, v, credit, &limits)?;
                println!("{}", if eve { "eve" } else { "adam" });
                Ok(if eve { 0 } else { 1 })
            }
            EgrAction::Mincredit { vertex, arena } => {
                let g = read_arena(&arena)?;
                let v = g.vertex_id(&vertex).ok_or(maxdet::Error::UnknownVertex(vertex))?;
                match maxdet::minimal_credit(&g, v, &limits)? {
                    Some(c) => {
                        println!("{c}");
                        Ok(0)
                    }
                    None => {
                        println!("unwinnable");
                        Ok(1)
                    }
                }
            }
            EgrAction::Region { arena } => {
                let g = read_arena(&arena)?;
                let region = maxdet::win_region(&g, &limits)?;
                for v in region {
                    println!("{}", g.vertex_name(v));
                }
                Ok(0)
            }
        },
        Command::Gen { fixture } => {
            match fixture {
                GenKind::Fig1Left { k, output } => write_automaton(&output, &corpus::make_fig1_left(k))?,
                GenKind::Fig1Right { k, output } => write_automaton(&output, &corpus::make_fig1_right(k))?,
                GenKind::Fig2Left { k, output } => write_automaton(&output, &corpus::make_fig2_left(k))?,
                GenKind::Fig2Right { k, output } => write_automaton(&output, &corpus::make_fig2_right(k))?,
                GenKind::Fig3 { output } => write_automaton(&output, &corpus::make_fig3())?,
                GenKind::Jpair { n, output } => write_automaton(&output, &corpus::make_jpair(n))?,
                GenKind::Quadregret { k, output } => write_automaton(&output, &corpus::make_quadregret(k))?,
                GenKind::Maxab { output } => write_automaton(&output, &corpus::make_maxab())?,
                GenKind::EgrExample { output } => {
                    std::fs::write(output, to_canonical_json(&ArenaFile::from_arena(&corpus::make_egr_example())))?
                }
            }
            Ok(0)
        }
        Command::Oracle { check } => match check {
            OracleKind::Equiv { a, b, horizon } => {
                let (na, nb) = (read_automaton(&a)?, read_automaton(&b)?);
                let report = oracle::equivalence_check(&na, &nb, horizon)?;
                println!("{}", if report.pass { "pass".to_string() } else { format!("fail: {}", report.counterexample.unwrap_or_default()) });
                Ok(if report.pass { 0 } else { 1 })
            }
            OracleKind::Value { automaton, word } => {
                let wa = read_automaton(&automaton)?;
                let w = wa.parse_word(&word)?;
                println!("{}", oracle::brute_value(&wa, &w)?);
                Ok(0)
            }
            OracleKind::Regret { automaton, mealy, horizon } => {
                let wa = read_automaton(&automaton)?;
                let text = std::fs::read_to_string(&mealy)?;
                let m = parse_json::<MealyFile>(&text)?.into_mealy(&wa)?;
                println!("{}", oracle::brute_regret(&wa, &m, horizon)?);
                Ok(0)
            }
            OracleKind::Mindelay { d, n, horizon } => {
                let (da, na) = (read_automaton(&d)?, read_automaton(&n)?);
                match oracle::brute_min_delay(&da, &na, horizon)? {
                    Some(k) => println!("{k}"),
                    None => println!("not equivalent"),
                }
                Ok(0)
            }
            OracleKind::Boundcheck { automaton, bound, horizon } => {
                let wa = read_automaton(&automaton)?;
                let report = oracle::brute_bound_check(&wa, bound, horizon)?;
                println!("{}", if report.pass { "pass".to_string() } else { format!("fail: {}", report.counterexample.unwrap_or_default()) });
                Ok(if report.pass { 0 } else { 1 })
            }
            OracleKind::Egr { arena, vertex, credit } => {
                let g = read_arena(&arena)?;
                let v = g.vertex_id(&vertex).ok_or(maxdet::Error::UnknownVertex(vertex))?;
                let eve = oracle::brute_egr(&g, v, credit);
                println!("{}", if eve { "eve" } else { "adam" });
                Ok(if eve { 0 } else { 1 })
            }
        },
        Command::Dot { file } => {
            let text = std::fs::read_to_string(&file)?;
            if let Ok(auto) = parse_json::<AutomatonFile>(&text) {
                if let Ok(wa) = auto.into_automaton() {
                    print!("{}", automaton_to_dot(&wa));
                    return Ok(0);
                }
            }
            let arena = parse_json::<ArenaFile>(&text)?.into_arena()?;
            print!("{}", arena_to_dot(&arena));
            Ok(0)
        }
    }
}

fn finish_decision(common: &DecideCommon, decision: Decision, label: &str, limits: &Limits) -> maxdet::Result<u8> {
    let wa = read_automaton(&common.input)?;
    println!("{}", if decision.answer { "yes" } else { "no" });
    if let Some(k) = decision.certificates.found_k {
        println!("k = {k}");
    }
    if let Some(r) = decision.certificates.regret_bound {
        println!("regret bound = {r}");
    }
    let mut report = ReportFile::for_decision(label, &decision);
    if decision.answer {
        if let (Some(path), Some(witness)) = (&common.witness, &decision.witness_dwa) {
            write_automaton(path, witness)?;
            report.witness_file = Some(path.display().to_string());
        }
        if let (Some(path), Some(mealy), Some(game)) =
            (&common.strategy, &decision.witness_mealy, &decision.game_automaton)
        {
            std::fs::write(path, to_canonical_json(&MealyFile::from_mealy(mealy, game)))?;
        }
    }
    let mut code = if decision.answer { 0 } else { 1 };
    if let Some(horizon) = common.verify {
        if decision.answer {
            let verify = deciders::verify_witness(&wa, &decision, horizon, limits)?;
            for check in &verify.checks {
                println!(
                    "verify {}: {}{}",
                    check.name,
                    if check.pass { "pass" } else { "FAIL" },
                    check.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
                );
            }
            if !verify.all_pass() {
                code = 3;
            }
            report.verify = Some(verify);
        }
    }
    if let Some(path) = &common.report {
        std::fs::write(path, to_canonical_json(&report))?;
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
