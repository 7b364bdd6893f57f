//! Command-line front end: construct, validate, classify, compare and convert
//! graded algebras. Exit codes: 0 success / checked-true, 1 checked-false,
//! 2 usage or format errors.

use clap::{Parser, Subcommand};
use gda::abgroup::{AbelianGroup, GroupElement, GroupHom};
use gda::algebra::GradedAlgebra;
use gda::classify::{classify, invariant_vector};
use gda::construct::{
    building_block, catalog, clifford_graded, endo_algebra, from_presentation, pauli_from_group,
    pauli_grading, BlockName, ClassLabel, DimensionFunction, TypeKind, ALL_BLOCKS,
};
use gda::format::{read_algebra, read_map, read_presentation, write_algebra, write_map};
use gda::isomap::{mu, search_monomial_iso, verify_graded_map};
use gda::selftest;
use serde_json::json;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gda", version, about = "Exact constructions and classification of real graded division algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an algebra: --type cgr|pauli|block|pres
    Construct {
        #[arg(long = "type")]
        kind: String,
        /// positive inertia index (cgr)
        #[arg(long)]
        p: Option<u32>,
        /// negative inertia index (cgr)
        #[arg(long)]
        m: Option<u32>,
        /// factor orders of H, e.g. "2,2" (pauli)
        #[arg(long)]
        h: Option<String>,
        /// ambient group orders, must split as H x H (pauli)
        #[arg(long)]
        group: Option<String>,
        /// building block name (block)
        #[arg(long)]
        name: Option<String>,
        /// presentation file (pres)
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the algebra laws of a galg file
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the separating invariants of a division grading
    Invariants {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Classify a division grading into its weak-isomorphism type
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Tensor product of two algebras
    Tensor {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Factor-grading along the quotient by the listed elements
    Coarsen {
        file: PathBuf,
        /// elements to kill, e.g. "0,1;1,0"
        #[arg(long)]
        kill: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a gmap file between two algebras
    IsoVerify {
        a: PathBuf,
        b: PathBuf,
        map: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for a monomial weak isomorphism
    IsoSearch {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// search frame scalars inside mu_N
        #[arg(long, default_value_t = 8)]
        scalars: u64,
        /// worker threads for the search
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Build the tensor normal form of a class label
    Catalog {
        /// e.g. "type=ix k=2" or "type=xiii H=2,2"
        #[arg(long)]
        label: Option<String>,
        /// list the available labels and building blocks
        #[arg(long)]
        list: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Endomorphism algebra M(D, kappa) over an ambient group
    Endo {
        /// galg file with the graded division algebra D
        #[arg(long)]
        d: PathBuf,
        /// ambient group orders, e.g. "4,2"
        #[arg(long)]
        group: String,
        /// images of D's group generators in the ambient group, e.g. "1,0;0,1"
        #[arg(long)]
        embed: Option<String>,
        /// coset multiplicities, e.g. "0,0:2;1,0:1"
        #[arg(long)]
        kappa: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance suite
    Selftest {
        #[arg(long)]
        json: bool,
        /// run a single criterion
        #[arg(long)]
        only: Option<usize>,
    },
}

/// CLI-level failure: exit 2 with a diagnostic.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn parse_orders(text: &str, what: &str) -> Result<Vec<u64>, Usage> {
    let orders: Result<Vec<u64>, _> = text.split(',').map(|t| t.trim().parse::<u64>()).collect();
    let orders = orders.map_err(|_| Usage(format!("{}: bad group literal '{}'", what, text)))?;
    if orders.is_empty() || orders.contains(&0) {
        return Err(Usage(format!("{}: factor orders must be positive", what)));
    }
    Ok(orders)
}

fn parse_element(text: &str, group: &AbelianGroup, what: &str) -> Result<GroupElement, Usage> {
    let res: Result<Vec<u64>, _> = text.split(',').map(|t| t.trim().parse::<u64>()).collect();
    let res = res.map_err(|_| Usage(format!("{}: bad element literal '{}'", what, text)))?;
    group
        .element(res)
        .map_err(|_| Usage(format!("{}: element '{}' outside the group", what, text)))
}

fn load_algebra(path: &Path) -> Result<GradedAlgebra, Usage> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Usage(format!("{}: {}", path.display(), e)))?;
    read_algebra(&text).map_err(|e| Usage(format!("{}: {}", path.display(), e)))
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Usage> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Usage(format!("{}: {}", path.display(), e)))?,
        None => print!("{}", text),
    }
    Ok(())
}

fn run() -> Result<ExitCode, Usage> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Construct { kind, p, m, h, group, name, file, output } => {
            let alg = match kind.as_str() {
                "cgr" => {
                    let p = p.ok_or(Usage("--type cgr requires --p".into()))?;
                    let m = m.ok_or(Usage("--type cgr requires --m".into()))?;
                    clifford_graded(p, m)
                }
                "pauli" => match (&h, &group) {
                    (Some(h), None) => pauli_grading(&AbelianGroup::new(parse_orders(h, "h")?)),
                    (None, Some(g)) => pauli_from_group(&AbelianGroup::new(parse_orders(g, "group")?))?,
                    _ => return Err(Usage("--type pauli requires exactly one of --h or --group".into())),
                },
                "block" => {
                    let name = name.ok_or(Usage("--type block requires --name".into()))?;
                    let block: BlockName = name.parse()?;
                    building_block(block)
                }
                "pres" => {
                    let path = file.ok_or(Usage("--type pres requires --file".into()))?;
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Usage(format!("{}: {}", path.display(), e)))?;
                    let pres = read_presentation(&text)
                        .map_err(|e| Usage(format!("{}: {}", path.display(), e)))?;
                    from_presentation(&pres)?
                }
                other => return Err(Usage(format!("unknown construction type '{}'", other))),
            };
            emit(&write_algebra(&alg), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Validate { file, json } => {
            let alg = load_algebra(&file)?;
            let report = alg.validate();
            if json {
                println!(
                    "{}",
                    json!({
                        "pass": report.pass,
                        "grading_ok": report.grading_ok,
                        "unit_ok": report.unit_ok,
                        "assoc_ok": report.assoc_ok,
                        "support_generates": report.support_generates,
                        "witness": report.witness,
                    })
                );
            } else if report.pass {
                println!("ok");
            } else {
                println!("invalid: {}", report.witness.as_deref().unwrap_or("unknown"));
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::Invariants { file, json } => {
            let alg = load_algebra(&file)?;
            match invariant_vector(&alg) {
                Ok(iv) => {
                    if json {
                        println!(
                            "{}",
                            json!({
                                "dim": iv.dim,
                                "n": iv.n,
                                "D": iv.d.to_string(),
                                "re_dim": iv.re_dim,
                                "re_type": iv.re_type.to_string(),
                                "center_support_trivial": iv.center_support_trivial,
                                "exponent": iv.exponent,
                                "elementary_2": iv.elementary_2,
                                "group_order": iv.group_order,
                            })
                        );
                    } else {
                        println!("{}", iv);
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("not applicable: {}", e);
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Cmd::Classify { file, json } => {
            let alg = load_algebra(&file)?;
            match classify(&alg) {
                Ok(label) => {
                    if json {
                        println!("{}", json!({ "label": label.to_string() }));
                    } else {
                        println!("{}", label);
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("unclassifiable: {}", e);
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Cmd::Tensor { a, b, output } => {
            let a = load_algebra(&a)?;
            let b = load_algebra(&b)?;
            emit(&write_algebra(&a.tensor_product(&b)), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Coarsen { file, kill, output } => {
            let alg = load_algebra(&file)?;
            let mut elems = Vec::new();
            for part in kill.split(';') {
                if !part.trim().is_empty() {
                    elems.push(parse_element(part, alg.group(), "kill")?);
                }
            }
            let (_, proj) = alg.group().quotient_by(&elems);
            let coarse = alg.coarsen(&proj)?;
            emit(&write_algebra(&coarse), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::IsoVerify { a, b, map, json } => {
            let a = load_algebra(&a)?;
            let b = load_algebra(&b)?;
            let text = std::fs::read_to_string(&map)
                .map_err(|e| Usage(format!("{}: {}", map.display(), e)))?;
            let gm = read_map(&text, &a, &b).map_err(|e| Usage(format!("{}: {}", map.display(), e)))?;
            let report = verify_graded_map(&a, &b, &gm);
            if json {
                println!(
                    "{}",
                    json!({
                        "pass": report.pass,
                        "bijective": report.bijective,
                        "multiplicative": report.multiplicative,
                        "graded": report.graded,
                        "unit_ok": report.unit_ok,
                        "witness": report.witness,
                    })
                );
            } else if report.pass {
                println!("ok");
            } else {
                println!("fails: {}", report.witness.as_deref().unwrap_or("unknown"));
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Cmd::IsoSearch { a, b, output, scalars, jobs, json } => {
            if let Some(n) = jobs {
                rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
            }
            let max_support: usize = std::env::var("GDA_MAX_GROUP")
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(256);
            let a = load_algebra(&a)?;
            let b = load_algebra(&b)?;
            match search_monomial_iso(&a, &b, &mu(scalars), max_support)? {
                Some(map) => {
                    let text = write_map(&map, b.conductor());
                    if json {
                        println!("{}", json!({ "found": true }));
                    }
                    emit(&text, &output)?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    if json {
                        println!("{}", json!({ "found": false }));
                    } else {
                        println!("not found (no monomial isomorphism over the scalar set)");
                    }
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Cmd::Catalog { label, list, output } => {
            if list {
                for t in TypeKind::ALL {
                    println!("type={} k={}..", t.roman(), t.min_k());
                }
                println!("type=xiii H=<orders>");
                for b in ALL_BLOCKS {
                    println!("block {}", b);
                }
                return Ok(ExitCode::SUCCESS);
            }
            let label = label.ok_or(Usage("catalog requires --label or --list".into()))?;
            let label: ClassLabel = label.parse()?;
            let alg = catalog(&label)?;
            emit(&write_algebra(&alg), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Endo { d, group, embed, kappa, output } => {
            let dalg = load_algebra(&d)?;
            let ambient = AbelianGroup::new(parse_orders(&group, "group")?);
            let images = match embed {
                Some(text) => {
                    let mut out = Vec::new();
                    for part in text.split(';') {
                        out.push(parse_element(part, &ambient, "embed")?);
                    }
                    out
                }
                None => {
                    // default embedding: trivial factors map to the identity,
                    // nontrivial factors must be a prefix of the ambient ones
                    let dr = dalg.group().orders();
                    let ar = ambient.orders();
                    let nontrivial: Vec<usize> = (0..dr.len()).filter(|&i| dr[i] > 1).collect();
                    if nontrivial.len() > ar.len()
                        || nontrivial.iter().enumerate().any(|(slot, &i)| dr[i] != ar[slot])
                    {
                        return Err(Usage(
                            "no default embedding: D's group is not a prefix of the ambient group; pass --embed".into(),
                        ));
                    }
                    (0..dr.len())
                        .map(|i| {
                            let mut res = vec![0u64; ar.len()];
                            if let Some(slot) = nontrivial.iter().position(|&t| t == i) {
                                res[slot] = 1;
                            }
                            ambient.element(res).unwrap()
                        })
                        .collect()
                }
            };
            let embed_hom = GroupHom::new(dalg.group().clone(), ambient.clone(), images)
                .map_err(|e| Usage(format!("embed: {}", e)))?;
            let mut kmap: BTreeMap<GroupElement, u32> = BTreeMap::new();
            let df_probe = DimensionFunction { d: dalg.clone(), embed: embed_hom.clone(), kappa: BTreeMap::new() };
            let h_sub = df_probe.support_subgroup();
            for part in kappa.split(';') {
                let (rep_text, count_text) = part
                    .split_once(':')
                    .ok_or(Usage(format!("kappa: expected 'rep:count', got '{}'", part)))?;
                let rep = parse_element(rep_text, &ambient, "kappa")?;
                let count: u32 = count_text
                    .trim()
                    .parse()
                    .map_err(|_| Usage(format!("kappa: bad count '{}'", count_text)))?;
                let canon = df_probe.canonical_rep(&rep, &h_sub);
                if kmap.insert(canon, count).is_some() {
                    return Err(Usage("kappa: duplicate coset".into()));
                }
            }
            let df = DimensionFunction { d: dalg, embed: embed_hom, kappa: kmap };
            let alg = endo_algebra(&df)?;
            emit(&write_algebra(&alg), &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Selftest { json, only } => {
            let outcomes = match only {
                Some(id) => {
                    vec![selftest::run_criterion(id).ok_or(Usage(format!("unknown criterion {}", id)))?]
                }
                None => selftest::run_all(),
            };
            let mut all = true;
            for o in &outcomes {
                if json {
                    println!(
                        "{}",
                        json!({
                            "id": o.id,
                            "name": o.name,
                            "pass": o.pass,
                            "elapsed_s": o.elapsed.as_secs_f64(),
                            "detail": o.detail,
                        })
                    );
                } else {
                    println!("{}", o.line());
                }
                all &= o.pass;
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
