//! Command line front end: run mechanisms on instance files, check matching
//! properties, query the brute-force oracles, and reproduce the experiment
//! figures as CSV.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use distmatch::constraints::DEFAULT_ENUM_LIMIT;
use distmatch::harness::experiments::{
    run_fig1, run_fig2, run_fig3, Fig1Config, Fig2Config, Fig3Config, Preset,
};
use distmatch::harness::gen::{example1_market, mallows_market, one_seat_market, two_box_market};
use distmatch::harness::rng::{stage, substream};
use distmatch::mechanisms::{
    acda, gda, gda_unit, make_weights, optimal_master_list, sd_reserved, sd_star, sda_reserved,
    MasterList,
};
use distmatch::model::{
    build_market, market_to_doc, matching_from_doc, matching_to_doc, InstanceDoc, MatchingDoc,
};
use distmatch::oracle::{
    check_strategyproof, exists_matching, full_universe, verify_profile_table, ProfileTable,
    RequiredProps,
};
use distmatch::properties::evaluate;
use distmatch::{AssignVec, Market, Matching};

#[derive(Parser)]
#[command(name = "distmatch", version, about = "Matching under distributional constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mechanism on an instance and emit the matching document.
    Run(RunArgs),
    /// Evaluate every matching property and emit a report.
    Check(CheckArgs),
    /// Brute-force oracles over small instances.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Reproduce an experiment figure as CSV.
    Experiment(ExperimentArgs),
    /// Write a generated instance document.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MechanismKind {
    Gda,
    GdaUnit,
    Sd,
    SdStar,
    Acda,
    Sda,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    mechanism: MechanismKind,
    #[arg(long)]
    instance: PathBuf,
    /// "document-order", "optimal", or a JSON file holding an array of
    /// student names.
    #[arg(long, default_value = "document-order")]
    master_list: String,
    /// How many students the sda mechanism serves serially.
    #[arg(long, default_value_t = 0)]
    sampled_k: usize,
    /// Reserved quota vector: "ones", "zero", a comma separated list, or a
    /// JSON file holding an array of numbers. Defaults to ones for sda and
    /// zero elsewhere.
    #[arg(long)]
    reserved: Option<String>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    matching: PathBuf,
    /// Also decide Pareto efficiency by search over dominating matchings.
    #[arg(long)]
    pareto: bool,
    /// Candidate budget for the Pareto search.
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    pareto_limit: u64,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Search every matching for one meeting all required properties.
    Exists(ExistsArgs),
    /// Recompute the impossibility tables and test every selection.
    VerifyTables(VerifyTablesArgs),
    /// Exhaustively test a mechanism for strategyproofness on an instance.
    SpCheck(SpCheckArgs),
}

#[derive(Args)]
struct ExistsArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Comma separated properties, e.g. "fair,nonwasteful".
    #[arg(long, default_value = "")]
    require: String,
    /// Additionally require envy bounded by k.
    #[arg(long)]
    ef_k: Option<usize>,
    /// Enumeration budget.
    #[arg(long, default_value_t = DEFAULT_ENUM_LIMIT)]
    limit: u64,
}

#[derive(Args)]
struct VerifyTablesArgs {
    /// "thm4.1" or "thm4.2"; both when absent.
    table: Option<String>,
}

#[derive(Args)]
struct SpCheckArgs {
    #[arg(long, value_enum)]
    mechanism: MechanismKind,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "document-order")]
    master_list: String,
    #[arg(long, default_value_t = 0)]
    sampled_k: usize,
    #[arg(long)]
    reserved: Option<String>,
    /// Cap on misreports tried per student.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Figure {
    Fig1,
    Fig2,
    Fig3,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    figure: Figure,
    /// "desk" or "paper".
    #[arg(long, default_value = "desk")]
    preset: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenerateArgs {
    /// "mallows-market", "example1", "thm4.1" or "thm4.2".
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long, default_value_t = 0.5)]
    phi_s: f64,
    #[arg(long, default_value_t = 0.5)]
    phi_c: f64,
    #[arg(long, default_value_t = 0.7)]
    rho: f64,
    /// Profile row for the table markets.
    #[arg(long, default_value_t = 1)]
    profile: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => cmd_run(args),
        Command::Check(args) => cmd_check(args),
        Command::Oracle(OracleCmd::Exists(args)) => cmd_exists(args),
        Command::Oracle(OracleCmd::VerifyTables(args)) => cmd_verify_tables(args),
        Command::Oracle(OracleCmd::SpCheck(args)) => cmd_sp_check(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Generate(args) => cmd_generate(args),
    }
}

fn load_market(path: &Path) -> Result<Market> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading instance {}", path.display()))?;
    let doc: InstanceDoc = serde_json::from_str(&text)
        .with_context(|| format!("parsing instance {}", path.display()))?;
    build_market(&doc).map_err(|e| anyhow!("building market from {}: {e}", path.display()))
}

fn parse_master_list(token: &str, market: &Market) -> Result<MasterList> {
    match token {
        "document-order" => Ok(MasterList::document_order(market.n())),
        "optimal" => Ok(optimal_master_list(market).0),
        path => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading master list {path}"))?;
            let names: Vec<String> = serde_json::from_str(&text)
                .with_context(|| format!("parsing master list {path}"))?;
            let order = names
                .iter()
                .map(|name| {
                    market
                        .student_names()
                        .iter()
                        .position(|x| x == name)
                        .ok_or_else(|| anyhow!("unknown student \"{name}\" in master list"))
                })
                .collect::<Result<Vec<usize>>>()?;
            MasterList::new(order, market.n()).map_err(|e| anyhow!("{e}"))
        }
    }
}

fn parse_reserved(token: &str, m: usize) -> Result<AssignVec> {
    match token {
        "ones" => Ok(AssignVec(vec![1; m])),
        "zero" => Ok(AssignVec::zero(m)),
        other => {
            let comma: Option<Vec<u32>> = other
                .split(',')
                .map(|part| part.trim().parse().ok())
                .collect();
            let values = match comma {
                Some(v) => v,
                None => {
                    let text = fs::read_to_string(other)
                        .with_context(|| format!("reading reserved vector {other}"))?;
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing reserved vector {other}"))?
                }
            };
            if values.len() != m {
                bail!("reserved vector has {} entries, the market has {m} colleges", values.len());
            }
            Ok(AssignVec(values))
        }
    }
}

fn resolve_reserved(flag: &Option<String>, kind: MechanismKind, m: usize) -> Result<AssignVec> {
    let default = match kind {
        MechanismKind::Sda => "ones",
        _ => "zero",
    };
    parse_reserved(flag.as_deref().unwrap_or(default), m)
}

fn run_mechanism(
    market: &Market,
    kind: MechanismKind,
    master_list: &str,
    sampled_k: usize,
    reserved: &Option<String>,
) -> Result<Matching> {
    Ok(match kind {
        MechanismKind::Gda => gda(market, &make_weights(market)),
        MechanismKind::GdaUnit => gda_unit(market, &make_weights(market)),
        MechanismKind::Sd => {
            let list = parse_master_list(master_list, market)?;
            let reserved = resolve_reserved(reserved, kind, market.m())?;
            sd_reserved(market, list.order(), &reserved).map_err(|e| anyhow!("{e}"))?
        }
        MechanismKind::SdStar => {
            let (y, _, k) = sd_star(market);
            eprintln!("note: the optimal master list bounds envy by {k}");
            y
        }
        MechanismKind::Acda => {
            let lower = resolve_reserved(reserved, kind, market.m())?;
            let nu_star = market
                .feasibility()
                .maximal_feasible_above(&lower)
                .map_err(|e| anyhow!("{e}"))?;
            acda(market, &nu_star)
        }
        MechanismKind::Sda => {
            let list = parse_master_list(master_list, market)?;
            let reserved = resolve_reserved(reserved, kind, market.m())?;
            let out =
                sda_reserved(market, sampled_k, &list, &reserved).map_err(|e| anyhow!("{e}"))?;
            if !out.uncovered.is_empty() {
                let names: Vec<&str> =
                    out.uncovered.iter().map(|&c| market.college_name(c)).collect();
                eprintln!(
                    "warning: no reserved seat at feasible colleges: {}",
                    names.join(", ")
                );
            }
            out.matching
        }
    })
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let market = load_market(&args.instance)?;
    let y = run_mechanism(
        &market,
        args.mechanism,
        &args.master_list,
        args.sampled_k,
        &args.reserved,
    )?;
    let doc = matching_to_doc(&market, &y);
    emit(serde_json::to_string_pretty(&doc)?, &args.out)
}

fn cmd_check(args: CheckArgs) -> Result<()> {
    let market = load_market(&args.instance)?;
    let text = fs::read_to_string(&args.matching)
        .with_context(|| format!("reading matching {}", args.matching.display()))?;
    let doc: MatchingDoc = serde_json::from_str(&text)
        .with_context(|| format!("parsing matching {}", args.matching.display()))?;
    let y = matching_from_doc(&market, &doc).map_err(|e| anyhow!("{e}"))?;
    let report = evaluate(&y, &market, args.pareto.then_some(args.pareto_limit));
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn cmd_exists(args: ExistsArgs) -> Result<()> {
    let market = load_market(&args.instance)?;
    let mut req = RequiredProps::parse(&args.require).map_err(|e| anyhow!("{e}"))?;
    req.ef_k = args.ef_k;
    let found = exists_matching(&market, &req, args.limit).map_err(|e| anyhow!("{e}"))?;
    let value = serde_json::json!({
        "exists": found.is_some(),
        "matching": found.map(|y| matching_to_doc(&market, &y)),
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn cmd_verify_tables(args: VerifyTablesArgs) -> Result<()> {
    let tables = match args.table.as_deref() {
        None => vec![ProfileTable::OneSeat, ProfileTable::TwoBox],
        Some(token) => vec![ProfileTable::parse(token)
            .ok_or_else(|| anyhow!("unknown table \"{token}\", expected thm4.1 or thm4.2"))?],
    };
    let mut ok = true;
    for table in tables {
        let report = verify_profile_table(table);
        println!("table {}", report.table);
        for row in &report.rows {
            println!(
                "  profile {}: computed {{{}}} expected {{{}}} {}",
                row.profile,
                row.computed.join(","),
                row.expected.join(","),
                if row.matches { "match" } else { "MISMATCH" }
            );
        }
        if report.strategyproof_selection_exists {
            println!(
                "  {} of {} selections manipulable: a strategyproof selection EXISTS",
                report.manipulable_selections, report.selections
            );
        } else {
            println!(
                "  {} of {} selections manipulable: no strategyproof selection exists",
                report.manipulable_selections, report.selections
            );
        }
        ok &= report.rows_match && !report.strategyproof_selection_exists;
    }
    if !ok {
        bail!("table verification failed");
    }
    Ok(())
}

fn cmd_sp_check(args: SpCheckArgs) -> Result<()> {
    let market = load_market(&args.instance)?;
    // surfaces configuration errors once, before the misreport sweep
    run_mechanism(
        &market,
        args.mechanism,
        &args.master_list,
        args.sampled_k,
        &args.reserved,
    )?;
    let kind = args.mechanism;
    let master_list = args.master_list.clone();
    let sampled_k = args.sampled_k;
    let reserved = args.reserved.clone();
    let mech = move |mk: &Market| {
        run_mechanism(mk, kind, &master_list, sampled_k, &reserved)
            .expect("mechanism already ran on the truthful market")
    };
    let universe = full_universe(&market, args.cap);
    let violation = check_strategyproof(mech, &market, &universe);
    let value = serde_json::json!({
        "strategyproof": violation.is_none(),
        "violation": violation.map(|v| serde_json::json!({
            "student": market.student_name(v.student),
            "misreport": v.misreport.iter().map(|&c| market.college_name(c)).collect::<Vec<_>>(),
            "truthful_outcome": v.truthful_outcome.map(|c| market.college_name(c)),
            "deviant_outcome": v.deviant_outcome.map(|c| market.college_name(c)),
        })),
    });
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let preset = Preset::parse(&args.preset)
        .ok_or_else(|| anyhow!("unknown preset \"{}\", expected desk or paper", args.preset))?;
    let csv = match args.figure {
        Figure::Fig1 => run_fig1(&Fig1Config::preset(preset, args.seed)).to_csv(),
        Figure::Fig2 => run_fig2(&Fig2Config::preset(preset, args.seed)).to_csv(),
        Figure::Fig3 => run_fig3(&Fig3Config::preset(preset, args.seed)).to_csv(),
    };
    fs::write(&args.out, csv).with_context(|| format!("writing {}", args.out.display()))
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let market = match args.kind.as_str() {
        "mallows-market" => {
            let mut rng = substream(args.seed, 0, stage::MISC);
            mallows_market(args.n, args.m, args.phi_s, args.phi_c, args.rho, &mut rng)
        }
        "example1" => example1_market(args.n),
        "thm4.1" => one_seat_market(args.profile),
        "thm4.2" => two_box_market(args.profile),
        other => bail!("unknown kind \"{other}\""),
    }
    .map_err(|e| anyhow!("{e}"))?;
    let doc = market_to_doc(&market);
    emit(serde_json::to_string_pretty(&doc)?, &args.out)
}
