use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use closure_core::catalog::{assemble_candidates, spo_search, Candidate, CatalogConfig, CoreInvariant, Parameters, SearchTarget};
use closure_core::closure::{m_closure_with, ClosureBudget};
use closure_core::io::{read_group, read_json, GroupJson, MatrixGroupJson};
use closure_core::linear::ClassicalGroup;
use closure_core::orbits::TupleColoring;
use closure_core::pipeline::{huppert_exceptional, run_pipeline, solvability_verdict, PipelineConfig};
use closure_core::products::{product, ProductMode};

#[derive(Parser)]
#[command(name = "mclosure", version, about = "m-closures of permutation groups and solvable linear group checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Direct,
    Wreath,
    Power,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the m-closure of a group.
    Closure {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Cap on n^m for the tuple coloring.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exit 0 if the group is m-closed, 1 if not.
    Isclosed {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Direct sum, imprimitive wreath product or product action of K by L.
    Product {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        l: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the m-orbit coloring as a binary file plus a JSON summary.
    Orbits {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the candidate subgroups of GL(d, p) for (p, d, a, e).
    Construct {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        e: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classify candidates; exits nonzero if any candidate errored.
    Pipeline {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Order and solvability of a group and its m-closure.
    Verdict {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
    /// Whether q is an exceptional prime power for 2-transitive affine groups.
    Huppert {
        #[arg(long)]
        q: u64,
    },
    /// Search for generator words of a subgroup of a small classical group.
    SpoSearch {
        /// For example "Sp(4,3)" or "O-(6,2)".
        #[arg(long)]
        group: String,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        core_prime: Option<u64>,
        #[arg(long)]
        core_order: Option<u64>,
        #[arg(long)]
        core_abelian: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        tries: usize,
        #[arg(long, default_value_t = 10)]
        word_len: usize,
    },
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn budget(cells: Option<u64>) -> ClosureBudget {
    let mut b = ClosureBudget::default();
    if let Some(c) = cells {
        b.tuple_cells = c;
    }
    b
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Closure { group, arity, budget: cells, out } => {
            let g = read_group(&group)?;
            let r = m_closure_with(&g, arity, &budget(cells))?;
            eprintln!("|G| = {}, |G^({arity})| = {}", r.input_order, r.closed_order);
            let name = format!("closure of arity {arity}");
            write_json(&GroupJson::from_group(&r.closed_group, Some(&name)), out.as_deref())?;
        }
        Command::Isclosed { group, arity, budget: cells } => {
            let g = read_group(&group)?;
            let r = m_closure_with(&g, arity, &budget(cells))?;
            println!("{}", r.is_closed());
            return Ok(if r.is_closed() { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Product { mode, k, l, out } => {
            let mode = match mode {
                Mode::Direct => ProductMode::Direct,
                Mode::Wreath => ProductMode::Wreath,
                Mode::Power => ProductMode::Power,
            };
            let g = product(&read_group(&k)?, &read_group(&l)?, mode)?;
            write_json(&GroupJson::from_group(&g, None), out.as_deref())?;
        }
        Command::Orbits { group, arity, out } => {
            let g = read_group(&group)?;
            let coloring = TupleColoring::new(&g, arity)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut w = BufWriter::new(file);
            coloring.write_binary(&mut w)?;
            w.flush()?;
            write_json(&coloring.summary(), Some(&out.with_extension("json")))?;
            println!("{} orbits on {}-tuples", coloring.num_colors(), arity);
        }
        Command::Construct { p, d, a, e, out, seed } => {
            let params = Parameters::new(p, d, a, e);
            let cfg = CatalogConfig { seed, ..CatalogConfig::default() };
            let candidates = assemble_candidates(&params, &cfg)?;
            fs::create_dir_all(&out)?;
            let mut built = Vec::new();
            let mut index = Vec::new();
            for c in &candidates {
                match c {
                    Candidate::Built(c) => {
                        built.push(MatrixGroupJson::from_group(&c.group, Some(&c.name), Some(c.order.to_string())));
                        index.push(serde_json::json!({
                            "name": c.name,
                            "order": c.order.to_string(),
                            "classical": c.classical,
                            "m_order": c.m_order,
                            "a_div": c.a_div,
                            "caveats": c.caveats,
                        }));
                    }
                    Candidate::Skipped { name, reason } => {
                        index.push(serde_json::json!({"name": name, "skipped": reason}));
                    }
                }
            }
            write_json(&built, Some(&out.join("candidates.json")))?;
            write_json(
                &serde_json::json!({"parameters": params, "candidates": index}),
                Some(&out.join("index.json")),
            )?;
            println!("{} candidates written to {}", built.len(), out.display());
        }
        Command::Pipeline { config, report, seed } => {
            let mut cfg: PipelineConfig = read_json(&config)?;
            if let Some(s) = seed {
                cfg.alpha_search.seed = s;
            }
            let r = run_pipeline(&cfg)?;
            write_json(&r, Some(&report))?;
            let s = r.summary;
            println!(
                "A: {}, B: {}, transitive: {}, unresolved: {}, skipped: {}, errors: {}",
                s.a, s.b, s.transitive, s.unresolved, s.skipped, s.errors
            );
            if r.has_errors() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Verdict { group, arity } => {
            let g = read_group(&group)?;
            write_json(&solvability_verdict(&g, arity, &ClosureBudget::default())?, None)?;
        }
        Command::Huppert { q } => {
            let hit = huppert_exceptional(q)?;
            println!("{hit}");
        }
        Command::SpoSearch { group, order, core_prime, core_order, core_abelian, seed, tries, word_len } => {
            let s = ClassicalGroup::from_name(&group)?;
            let core = match (core_prime, core_order) {
                (Some(prime), Some(order)) => Some(CoreInvariant { prime, order, abelian: core_abelian }),
                (None, None) => None,
                _ => bail!("--core-prime and --core-order go together"),
            };
            let target = SearchTarget { order, core };
            match spo_search(&s, &target, seed, tries, word_len)? {
                Some(words) => write_json(
                    &serde_json::json!({
                        "group": s.name(),
                        "generator_count": s.perm().generators().len(),
                        "order": order,
                        "core": target.core,
                        "words": words,
                    }),
                    None,
                )?,
                None => bail!("no subgroup of order {order} found in {tries} tries"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
