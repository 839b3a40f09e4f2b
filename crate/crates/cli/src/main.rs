use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use zdense_core::bendcore::apply_bend;
use zdense_core::density::{certify_closure, ClosureClass};
use zdense_core::modsearch::{borel_fraction_check, search_eta, search_eta_at_prime, SearchMode};
use zdense_core::pipeline::{
    bend_candidates, load_final, prepared_rep, run_pipeline, verify_run, FieldChoice, PipelineConfig,
};
use zdense_core::repkit::{triangle_images, SurfaceRep};
use zdense_core::surfgrp::{
    find_surface_tuple, find_triangle_permutations, todd_coxeter, torsion_free_check, triangle_orbifold_euler, CosetTable,
    Presentation,
};
use zdense_core::Error;

/// Directory under which `pipeline run` creates run directories.
const RUN_DIR_ENV: &str = "ZDENSE_RUN_DIR";

#[derive(Parser)]
#[command(name = "zdense", version, about = "Exact bending of integral surface-group representations to Zariski density")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run or verify an end-to-end pipeline.
    #[command(subcommand)]
    Pipeline(PipelineCommand),
    /// Torsion-free subgroups of Δ(3,4,4) and genus-2 generating tuples.
    #[command(subcommand)]
    Subgroup(SubgroupCommand),
    /// Construct a bend matrix along a1 and print its certificate.
    Bend(BendArgs),
    /// Certify the Zariski-closure class of a representation.
    Certify(CertifyArgs),
    /// Search modulo primes for a word with prescribed characteristic polynomial.
    SearchEta(SearchEtaArgs),
    /// Count reducible characteristic polynomials in Sp(2k, F_p).
    BorelCheck {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum PipelineCommand {
    Run(RunArgs),
    Verify { dir: PathBuf },
}

#[derive(Subcommand)]
enum SubgroupCommand {
    Find {
        #[arg(long, default_value_t = 12)]
        index: usize,
        #[arg(long, default_value_t = 5)]
        length_bound: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse_field)]
    field: FieldChoice,
    #[arg(long)]
    n: usize,
    /// Seed representation (JSON) to use instead of the Δ(3,4,4) seed.
    #[arg(long)]
    seed_rep: Option<PathBuf>,
    /// Run directory; defaults to `$ZDENSE_RUN_DIR/<field>-n<n>`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = RUN_DIR_ENV, default_value = "runs")]
    run_root: PathBuf,
    #[arg(long)]
    word_bound: Option<usize>,
    #[arg(long)]
    eta_word_bound: Option<usize>,
    #[arg(long)]
    prime_cap: Option<u64>,
}

/// Where a representation comes from: a JSON file, the end of a run, or the
/// standard construction for a field and dimension.
#[derive(Args)]
struct RepSource {
    #[arg(long, conflicts_with_all = ["run", "field"])]
    rep: Option<PathBuf>,
    #[arg(long, conflicts_with = "field")]
    run: Option<PathBuf>,
    #[arg(long, value_parser = parse_field, requires = "n")]
    field: Option<FieldChoice>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct BendArgs {
    #[command(flatten)]
    source: RepSource,
    /// Bend with A^power.
    #[arg(long, default_value_t = 1)]
    power: u64,
    /// Write the bent representation here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    source: RepSource,
    #[arg(long, default_value_t = 2)]
    word_bound: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    OneSplit,
}

#[derive(Args)]
struct SearchEtaArgs {
    #[command(flatten)]
    source: RepSource,
    #[arg(long, value_enum, default_value = "one-split")]
    mode: ModeArg,
    /// A prime, or `auto` to try 5, 7, 11, … up to `--prime-cap`.
    #[arg(long, default_value = "auto")]
    p: String,
    #[arg(long)]
    residue: Option<u64>,
    #[arg(long, default_value_t = 5)]
    word_bound: usize,
    #[arg(long, default_value_t = 60)]
    prime_cap: u64,
}

fn parse_field(s: &str) -> Result<FieldChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn read_rep(path: &Path) -> anyhow::Result<SurfaceRep> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SurfaceRep::from_json(&serde_json::from_str(&text)?)?)
}

impl RepSource {
    fn load(&self) -> anyhow::Result<SurfaceRep> {
        if let Some(path) = &self.rep {
            return read_rep(path);
        }
        if let Some(dir) = &self.run {
            return Ok(load_final(dir)?.0);
        }
        let (Some(field), Some(n)) = (self.field, self.n) else {
            bail!("give --rep <file>, --run <dir>, or --field and --n");
        };
        Ok(prepared_rep(&PipelineConfig::new(field, n))?)
    }

    fn config(&self, rep: &SurfaceRep) -> PipelineConfig {
        let field = if rep.field.is_rationals() { FieldChoice::Rationals } else { FieldChoice::QSqrt2 };
        PipelineConfig::new(field, rep.n)
    }
}

fn pipeline_run(args: &RunArgs) -> anyhow::Result<i32> {
    let mut config = PipelineConfig::new(args.field, args.n);
    config.seed_rep = args.seed_rep.clone();
    if let Some(w) = args.word_bound {
        config.word_bound = w;
    }
    if let Some(w) = args.eta_word_bound {
        config.eta_word_bound = w;
    }
    if let Some(p) = args.prime_cap {
        config.prime_cap = p;
    }
    let tag = match args.field {
        FieldChoice::Rationals => "q",
        FieldChoice::QSqrt2 => "q-sqrt2",
    };
    let dir = args.out.clone().unwrap_or_else(|| args.run_root.join(format!("{tag}-n{}", args.n)));
    if dir.exists() {
        fs::remove_dir_all(&dir).with_context(|| format!("clearing {}", dir.display()))?;
    }
    let run = run_pipeline(&config, Some(&dir))?;
    print_json(&json!({
        "run_dir": dir,
        "status": run.status,
        "closure_classes": run.closure_classes,
        "steps": run.steps.iter().map(|s| &s.name).collect::<Vec<_>>(),
    }))?;
    Ok(run.status.exit_code())
}

fn subgroup_find(index: usize, length_bound: usize) -> anyhow::Result<i32> {
    let [a, b, c] = find_triangle_permutations(3, 4, 4, index)?;
    let table = CosetTable::from_permutations(&[a.clone(), b.clone(), c.clone()]);
    let torsion_free = torsion_free_check(&table, &[3, 4, 4]);
    let p = Presentation::triangle(3, 4, 4);
    let images = triangle_images()?;
    let tuple = find_surface_tuple(&p, &table, &images, length_bound)?;
    let tc_index = todd_coxeter(&p, &tuple.words(), 10_000)?.index();
    let chi = triangle_orbifold_euler(3, 4, 4) * index as i64;
    let names = p.generators.clone();
    print_json(&json!({
        "permutations": [a, b, c],
        "torsion_free": torsion_free,
        "tuple": tuple,
        "tuple_words": tuple.words().iter().map(|w| w.render(&names)).collect::<Vec<_>>(),
        "todd_coxeter_index": tc_index,
        "euler_characteristic": chi.to_string(),
    }))?;
    Ok(if torsion_free && tc_index == index { 0 } else { 1 })
}

fn bend(args: &BendArgs) -> anyhow::Result<i32> {
    let rep = args.source.load()?;
    let config = args.source.config(&rep);
    let candidates = bend_candidates(&rep, &config)?;
    let cert = candidates.first().ok_or_else(|| anyhow!("no valid bend matrix along a1"))?;
    let cert = if args.power == 1 { cert.clone() } else { cert.power(args.power, &rep.generators[0]) };
    let bent = apply_bend(&rep, &cert)?;
    if let Some(out) = &args.out {
        fs::write(out, serde_json::to_string_pretty(&bent.to_json())?)?;
    }
    print_json(&cert.to_json())?;
    Ok(if cert.is_valid() { 0 } else { 1 })
}

fn certify(args: &CertifyArgs) -> anyhow::Result<i32> {
    let rep = args.source.load()?;
    match certify_closure(&rep, args.word_bound) {
        Ok(cert) => {
            print_json(&cert.to_json())?;
            Ok(if cert.class == ClosureClass::FullSL { 0 } else { 3 })
        }
        Err(Error::Inconclusive(reason)) => {
            print_json(&json!({ "class": "Inconclusive", "reason": reason }))?;
            Ok(3)
        }
        Err(e) => Err(e.into()),
    }
}

fn search(args: &SearchEtaArgs) -> anyhow::Result<i32> {
    let rep = args.source.load()?;
    let mode = match args.mode {
        ModeArg::Full => SearchMode::Full,
        ModeArg::OneSplit => SearchMode::OneSplit,
    };
    let cert = if args.p == "auto" {
        search_eta(&rep, mode, args.word_bound, args.prime_cap)?
    } else {
        let p: u64 = args.p.parse().with_context(|| format!("--p expects a prime or auto, got {}", args.p))?;
        search_eta_at_prime(&rep, mode, args.word_bound, p, args.residue)?
    };
    let verified = cert.verify(&rep)?;
    let mut out = serde_json::to_value(cert.to_json(&rep.field))?;
    out["verified"] = json!(verified);
    out["integer_shape_holds"] = json!(cert.integer_shape_holds());
    print_json(&out)?;
    Ok(if verified { 0 } else { 1 })
}

fn borel(k: u32, p: u64) -> anyhow::Result<i32> {
    let c = borel_fraction_check(k, p)?;
    print_json(&c)?;
    Ok(if c.bound_holds { 0 } else { 1 })
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Pipeline(PipelineCommand::Run(args)) => pipeline_run(&args),
        Command::Pipeline(PipelineCommand::Verify { dir }) => {
            let report = verify_run(&dir);
            print_json(&report)?;
            Ok(if report.ok() { 0 } else { 1 })
        }
        Command::Subgroup(SubgroupCommand::Find { index, length_bound }) => subgroup_find(index, length_bound),
        Command::Bend(args) => bend(&args),
        Command::Certify(args) => certify(&args),
        Command::SearchEta(args) => search(&args),
        Command::BorelCheck { k, p } => borel(k, p),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

