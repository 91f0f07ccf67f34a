use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tctp::arena::{
    builtin_blocker, builtin_traveller, play, verify_traveller_strategy, BlockerPolicy, Game, LiBlocker, LiTraveller,
    Model, ReplayBlocker, ReplayTraveller, StaticBlocker, StaticTraveller, Transcript, TravellerPolicy, VerifyLimits,
};
use tctp::dagctp::{compute_pi, Dag};
use tctp::expansion::{build_expansion, NodeLabel};
use tctp::gadgets::{gen_li_np, gen_li_pspace, gen_static_np, parse_dimacs, parse_qbf};
use tctp::litctp::{exact_li, solve_k1, LatestTime, LiOptions};
use tctp::random::dag_to_static;
use tctp::staticctp::{exact_static_value, Discovery, StaticOptions};
use tctp::utctp::{decide_u, earliest_arrival, latest_departure, shortest_duration, Departure};
use tctp::{parse_instance, serialize_instance, serialize_instance_json, Cost, Error, Instance, Time};

/// Seed used when `--seed` is not given.
const DEFAULT_SEED: u64 = 2024;

const EXIT_WIN: u8 = 0;
const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BLOCKER: u8 = 3;
const EXIT_SIZE: u8 = 4;

#[derive(Parser)]
#[command(name = "tctp", version, about = "Solve and play temporal Canadian traveller games")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Cap on explored states for the exhaustive solvers and verifier; 0 lifts it.
    #[arg(long, global = true)]
    limit: Option<usize>,
    /// Print nothing; only the exit code reports the result.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Objective {
    Decide,
    Earliest,
    Latest,
    Duration,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GadgetKind {
    /// Quantified formula to a locally informed temporal game.
    Qbf,
    /// 3-CNF to a static game with budget 4.
    Sat4,
    /// 3-CNF to a locally informed temporal game with budget 2.
    Sat2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Li,
    U,
    Static,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Li => Model::Li,
            ModelArg::U => Model::U,
            ModelArg::Static => Model::Static,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the time-expanded DAG of a temporal instance.
    Expand {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        t1: Time,
        #[arg(long)]
        t2: Option<Time>,
    },
    /// Solve a DAG instance: π_k(s), or the whole table as TSV.
    DagSolve {
        instance: PathBuf,
        #[arg(long)]
        table: bool,
        #[arg(long)]
        deadline: Option<u64>,
    },
    /// Solve the uninformed game.
    SolveU {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Objective::Decide)]
        objective: Objective,
        #[arg(long, default_value_t = 0)]
        t1: Time,
        #[arg(long)]
        t2: Option<Time>,
    },
    /// Solve the locally informed game.
    SolveLi {
        instance: PathBuf,
        /// Exhaustive search, any budget. Without it the budget must be 1.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        deadline: Option<Time>,
        #[arg(long, default_value_t = 0)]
        t1: Time,
        /// With --exact, also play one optimal line.
        #[arg(long)]
        transcript: bool,
    },
    /// Solve a static game.
    SolveStatic {
        instance: PathBuf,
        #[arg(long)]
        deadline: Option<u64>,
    },
    /// Build a game instance from a formula file (DIMACS, optional `q e a …` line).
    Gen {
        #[arg(value_enum)]
        kind: GadgetKind,
        formula: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Referee one game and print its transcript as JSON lines.
    Play {
        instance: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// `optimal`, `greedy`, `dag`, or a transcript file to replay.
        #[arg(long, default_value = "optimal")]
        traveller: String,
        /// `none`, `all`, `random`, `optimal`, `dag`, `exhaustive`, or a transcript file.
        #[arg(long, default_value = "optimal")]
        blocker: String,
        #[arg(long, default_value_t = 0)]
        t1: Time,
        #[arg(long)]
        deadline: Option<Time>,
    },
    /// Check a Traveller policy against every Blocker behaviour.
    Verify {
        instance: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, default_value = "optimal")]
        traveller: String,
        #[arg(long, default_value_t = 0)]
        t1: Time,
        #[arg(long)]
        deadline: Option<Time>,
    },
}

/// What a subcommand produced: its exit code and both renderings.
struct Report {
    code: u8,
    json: Value,
    text: String,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn cost_json(c: Cost) -> Value {
    c.value().map_or(Value::Null, Value::from)
}

fn win_code(win: bool) -> u8 {
    if win {
        EXIT_WIN
    } else {
        EXIT_BLOCKER
    }
}

fn limit(cli: &Cli, default: usize) -> Option<usize> {
    match cli.limit {
        Some(0) => None,
        Some(n) => Some(n),
        None => Some(default),
    }
}

fn expand(inst: &Instance, t1: Time, t2: Option<Time>, format: Format) -> Outcome {
    let g = inst.temporal_graph()?;
    let x = build_expansion(g, inst.source, inst.target, inst.k, t1, t2)?;
    let names: Vec<String> = (0..x.dag.node_count()).map(|v| x.dag.name(v).to_string()).collect();
    let out = Instance::from_static(dag_to_static(&x.dag), &names[x.source], &names[x.target], inst.k)?;
    let text = match format {
        Format::Json => serialize_instance_json(&out),
        Format::Text => {
            let mut head = String::from("# nodes are vertex@time; `target` collects every arrival at the target\n");
            head.push_str("# the two directions of one time edge share its copies\n");
            for (v, label) in x.labels.iter().enumerate() {
                if let NodeLabel::At { vertex, time } = label {
                    head.push_str(&format!("# {} = {} at {}\n", names[v], g.vertices().name(*vertex), time));
                }
            }
            head + &serialize_instance(&out)
        }
    };
    Ok(Report { code: EXIT_WIN, json: Value::Null, text })
}

fn dag_solve(inst: &Instance, table: bool, deadline: Option<u64>) -> Outcome {
    let dag = Dag::from_static(inst.static_graph()?)?;
    let pi = compute_pi(&dag, inst.target, inst.k)?;
    let value = pi.get(inst.source, inst.k);
    let deadline = deadline.or(inst.deadline);
    let win = value.value().is_some_and(|v| deadline.is_none_or(|d| v <= d));
    let fmt = |c: Cost| c.value().map_or("UNREACHABLE".to_string(), |v| v.to_string());
    let (json, text) = if table {
        let mut text = String::from("vertex");
        for i in 0..=inst.k {
            text.push_str(&format!("\tpi_{i}"));
        }
        text.push('\n');
        let mut rows = serde_json::Map::new();
        for v in 0..dag.node_count() {
            let row = pi.row(v);
            text.push_str(dag.name(v));
            for &c in row {
                text.push('\t');
                text.push_str(&fmt(c));
            }
            text.push('\n');
            rows.insert(dag.name(v).to_string(), row.iter().map(|&c| cost_json(c)).collect());
        }
        (json!({ "k": inst.k, "table": rows }), text)
    } else {
        (json!({ "k": inst.k, "value": cost_json(value), "wins": win }), format!("{}\n", fmt(value)))
    };
    Ok(Report { code: win_code(win), json, text })
}

fn solve_u(inst: &Instance, objective: Objective, t1: Time, t2: Option<Time>) -> Outcome {
    let t2 = t2.or(inst.deadline);
    Ok(match objective {
        Objective::Decide => {
            let d = decide_u(inst, t1, t2)?;
            let json = json!({
                "objective": "decide",
                "wins": d.wins,
                "window": [t1, t2],
                "worst_arrival": d.worst_arrival,
                "expansion_nodes": d.strategy.expansion.dag.node_count(),
            });
            let text = format!(
                "{}\n",
                if d.wins { "Traveller wins" } else { "Blocker wins" }
            );
            Report { code: win_code(d.wins), json, text }
        }
        Objective::Earliest => {
            let a = earliest_arrival(inst)?;
            let text = a.map_or("UNREACHABLE\n".into(), |a| format!("earliest arrival {a}\n"));
            Report { code: win_code(a.is_some()), json: json!({ "objective": "earliest", "value": a }), text }
        }
        Objective::Latest => {
            let d = latest_departure(inst)?;
            let text = match d {
                Departure::Unreachable => "UNREACHABLE\n".into(),
                Departure::At(t) => format!("latest departure {t}\n"),
                Departure::Unbounded => "latest departure unbounded\n".into(),
            };
            let code = win_code(d != Departure::Unreachable);
            Report { code, json: json!({ "objective": "latest", "value": d }), text }
        }
        Objective::Duration => {
            let w = shortest_duration(inst)?;
            let text = w.map_or("UNREACHABLE\n".into(), |(a, b)| format!("shortest window [{a}, {b}], length {}\n", b - a));
            let json = json!({
                "objective": "duration",
                "window": w.map(|(a, b)| vec![a, b]),
                "value": w.map(|(a, b)| b - a),
            });
            Report { code: win_code(w.is_some()), json, text }
        }
    })
}

fn latest_json(t: LatestTime) -> Value {
    match t {
        LatestTime::Never => json!("never"),
        LatestTime::At(t) => json!(t),
        LatestTime::Unbounded => json!("unbounded"),
    }
}

fn solve_li(cli: &Cli, inst: &Instance, exact: bool, deadline: Option<Time>, t1: Time, transcript: bool) -> Outcome {
    let deadline = deadline.or(inst.deadline);
    if !exact {
        if inst.k != 1 {
            return Err(Error::InvalidArgument(format!("budget is {}; use --exact for budgets other than 1", inst.k)).into());
        }
        let (table, wins) = solve_k1(inst, t1, deadline)?;
        let mut rows = serde_json::Map::new();
        let mut text = format!("{}\nvertex\tpi1\tnu1\tlambda1\n", if wins { "Traveller wins" } else { "Blocker wins" });
        for v in 0..inst.vertices().len() {
            let name = inst.vertex_name(v).to_string();
            let cells = [table.pi1[v], table.nu1[v], table.lambda1[v]];
            text.push_str(&name);
            for c in cells {
                text.push('\t');
                text.push_str(&match c {
                    LatestTime::Never => "never".into(),
                    LatestTime::At(t) => t.to_string(),
                    LatestTime::Unbounded => "unbounded".into(),
                });
            }
            text.push('\n');
            rows.insert(name, json!({ "pi1": latest_json(cells[0]), "nu1": latest_json(cells[1]), "lambda1": latest_json(cells[2]) }));
        }
        return Ok(Report { code: win_code(wins), json: json!({ "wins": wins, "pi1": rows }), text });
    }
    let opts = LiOptions { max_states: limit(cli, 10_000_000) };
    let outcome = exact_li(inst, t1, deadline, opts)?;
    let mut json = json!({ "wins": outcome.wins, "states": outcome.states });
    let mut text = format!("{}\n", if outcome.wins { "Traveller wins" } else { "Blocker wins" });
    if transcript {
        let game = Game::new(Model::Li).window(t1, deadline);
        let t = play(inst, &mut LiTraveller::new(inst, game, opts)?, &mut LiBlocker::new(inst, game, opts)?, game)?;
        json["transcript"] = serde_json::to_value(&t).map_err(Error::from)?;
        text.push_str(&t.to_json_lines());
    }
    Ok(Report { code: win_code(outcome.wins), json, text })
}

fn solve_static(cli: &Cli, inst: &Instance, deadline: Option<u64>) -> Outcome {
    let directed = inst.static_graph()?.is_directed();
    let discovery = if directed { Discovery::Tail } else { Discovery::Incident };
    let max_states = limit(cli, 10_000_000);
    let value = exact_static_value(inst, StaticOptions { discovery, max_states })?;
    let deadline = deadline.or(inst.deadline);
    let win = value.value().is_some_and(|v| deadline.is_none_or(|d| v <= d));
    let game = Game::new(Model::Static);
    let t = play(inst, &mut StaticTraveller::new(inst, max_states)?, &mut StaticBlocker::new(inst, max_states)?, game)?;
    let json = json!({
        "value": cost_json(value),
        "deadline": deadline,
        "wins": win,
        "transcript": serde_json::to_value(&t).map_err(Error::from)?,
    });
    let head = value.value().map_or("UNREACHABLE".to_string(), |v| format!("value {v}"));
    Ok(Report { code: win_code(win), json, text: format!("{head}\n{}", t.to_json_lines()) })
}

fn gen(kind: GadgetKind, formula: &Path, output: Option<&Path>, format: Format) -> Outcome {
    let text = read(formula)?;
    let inst = match kind {
        GadgetKind::Qbf => gen_li_pspace(&parse_qbf(&text)?)?,
        GadgetKind::Sat4 => gen_static_np(&parse_dimacs(&text)?.0)?,
        GadgetKind::Sat2 => gen_li_np(&parse_dimacs(&text)?.0)?,
    };
    let rendered = match format {
        Format::Json => serialize_instance_json(&inst),
        Format::Text => serialize_instance(&inst),
    };
    match output {
        Some(path) => {
            fs::write(path, rendered).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
            let json = json!({ "output": path.display().to_string(), "vertices": inst.vertices().len(), "k": inst.k });
            Ok(Report { code: EXIT_WIN, json, text: format!("wrote {}\n", path.display()) })
        }
        None => Ok(Report { code: EXIT_WIN, json: Value::Null, text: rendered }),
    }
}

const TRAVELLERS: [&str; 3] = ["optimal", "greedy", "dag"];
const BLOCKERS: [&str; 5] = ["none", "all", "random", "optimal", "dag"];

fn traveller<'a>(cli: &Cli, name: &str, inst: &'a Instance, game: Game) -> Result<Box<dyn TravellerPolicy + 'a>, Failure> {
    if TRAVELLERS.contains(&name) {
        return Ok(builtin_traveller(name, inst, game, limit(cli, 10_000_000))?);
    }
    Ok(Box::new(ReplayTraveller::new(&Transcript::from_json_lines(&read(Path::new(name))?)?)))
}

fn blocker<'a>(cli: &Cli, name: &str, inst: &'a Instance, game: Game) -> Result<Box<dyn BlockerPolicy + 'a>, Failure> {
    if BLOCKERS.contains(&name) {
        return Ok(builtin_blocker(name, inst, game, cli.seed, limit(cli, 10_000_000))?);
    }
    Ok(Box::new(ReplayBlocker::new(&Transcript::from_json_lines(&read(Path::new(name))?)?)))
}

fn verify(cli: &Cli, inst: &Instance, traveller_name: &str, game: Game) -> Outcome {
    let mut t = traveller(cli, traveller_name, inst, game)?;
    let limits = VerifyLimits { max_states: limit(cli, 1_000_000) };
    let v = verify_traveller_strategy(inst, t.as_mut(), game, limits)?;
    let cex = match &v.counterexample {
        Some(c) => serde_json::to_value(c).map_err(Error::from)?,
        None => Value::Null,
    };
    let json = json!({ "holds": v.holds, "states": v.states, "counterexample": cex });
    let mut text = format!("{}\n", if v.holds { "strategy wins against every Blocker" } else { "strategy can be defeated" });
    if let Some(c) = &v.counterexample {
        text.push_str(&c.to_json_lines());
    }
    Ok(Report { code: win_code(v.holds), json, text })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Expand { instance, t1, t2 } => expand(&load(instance)?, *t1, *t2, cli.format),
        Command::DagSolve { instance, table, deadline } => dag_solve(&load(instance)?, *table, *deadline),
        Command::SolveU { instance, objective, t1, t2 } => solve_u(&load(instance)?, *objective, *t1, *t2),
        Command::SolveLi { instance, exact, deadline, t1, transcript } => {
            solve_li(cli, &load(instance)?, *exact, *deadline, *t1, *transcript)
        }
        Command::SolveStatic { instance, deadline } => solve_static(cli, &load(instance)?, *deadline),
        Command::Gen { kind, formula, output } => gen(*kind, formula, output.as_deref(), cli.format),
        Command::Play { instance, model, traveller: tr, blocker: bl, t1, deadline } => {
            let inst = load(instance)?;
            let game = Game::new((*model).into()).window(*t1, deadline.or(inst.deadline));
            if bl == "exhaustive" {
                return verify(cli, &inst, tr, game);
            }
            let mut t = traveller(cli, tr, &inst, game)?;
            let mut b = blocker(cli, bl, &inst, game)?;
            let transcript = play(&inst, t.as_mut(), b.as_mut(), game)?;
            let lines = transcript.to_json_lines();
            Ok(Report { code: win_code(transcript.traveller_won()), json: Value::Null, text: lines })
        }
        Command::Verify { instance, model, traveller: tr, t1, deadline } => {
            let inst = load(instance)?;
            let game = Game::new((*model).into()).window(*t1, deadline.or(inst.deadline));
            verify(cli, &inst, tr, game)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if !cli.quiet {
                // subcommands that emit a document print it in either format
                if cli.format == Format::Json && !report.json.is_null() {
                    println!("{}", serde_json::to_string_pretty(&report.json).expect("values serialize"));
                } else {
                    print!("{}", report.text);
                }
            }
            ExitCode::from(report.code)
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("tctp: {}: {e}", path.display());
            ExitCode::from(EXIT_OTHER)
        }
        Err(Failure::Core(e)) => {
            eprintln!("tctp: {e}");
            ExitCode::from(match e {
                Error::SizeLimit(_) => EXIT_SIZE,
                Error::InvalidArgument(_) | Error::WrongModel { .. } => EXIT_USAGE,
                _ => EXIT_OTHER,
            })
        }
    }
}
