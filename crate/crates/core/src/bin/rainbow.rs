use std::collections::BTreeSet;
use std::error::Error;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cayley_rainbow::cayley::TargetSets;
use cayley_rainbow::classify::classify;
use cayley_rainbow::construct::{build_core_embedding, partition_zero_sum, ConstructError};
use cayley_rainbow::group::{GroupElement, GroupSpec};
use cayley_rainbow::harness::{experiment_cross_check, harmonious_from_rainbow, run_report, ColorPolicy, GridConfig};
use cayley_rainbow::odc::{translates_cover, verify_odc};
use cayley_rainbow::solve::{find_rainbow, solve_exact, SearchConfig, SearchMode, SolveOutcome, VertexOrder};
use cayley_rainbow::tree::{find_core, parse_prufer, Tree};

type CliResult = Result<ExitCode, Box<dyn Error>>;

#[derive(Parser)]
#[command(
    name = "rainbow",
    version,
    about = "Rainbow trees in Cayley-sum colourings of abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TreeInput {
    /// Edge-list file: vertex count on the first line, then `u v` per edge.
    #[arg(long)]
    tree: Option<PathBuf>,
    /// Comma-separated Prüfer sequence.
    #[arg(long)]
    prufer: Option<String>,
}

impl TreeInput {
    fn load(&self) -> Result<Tree, Box<dyn Error>> {
        match (&self.tree, &self.prufer) {
            (Some(path), _) => Ok(fs::read_to_string(path)?.parse()?),
            (None, Some(seq)) => Ok(parse_prufer(seq)?),
            (None, None) => Err("a tree is required".into()),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Bfs,
    MostConstrained,
}

#[derive(Subcommand)]
enum Command {
    /// Report the obstructions for a spanning tree (exit 1 when obstructed).
    Classify {
        #[command(flatten)]
        input: TreeInput,
        #[arg(long)]
        group: GroupSpec,
    },
    /// Exact search for a rainbow embedding (exit 0 found, 1 none, 2 inconclusive).
    Solve {
        #[command(flatten)]
        input: TreeInput,
        #[arg(long)]
        group: GroupSpec,
        /// `all`, `all-minus-zero`, or elements separated by `;`.
        /// Defaults to `all-minus-zero` over Z2^k and `all` otherwise.
        #[arg(long)]
        colors: Option<String>,
        /// Count every embedding instead of stopping at the first.
        #[arg(long)]
        count: bool,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, value_enum, default_value = "bfs")]
        order: OrderArg,
    },
    /// Core embedding satisfying the core condition.
    CoreEmbed {
        #[command(flatten)]
        input: TreeInput,
        #[arg(long)]
        group: GroupSpec,
    },
    /// Split a zero-sum set into zero-sum parts of given sizes.
    PartitionZeroSum {
        #[arg(long)]
        group: GroupSpec,
        /// Elements separated by `;`, or `all`.
        #[arg(long)]
        set: String,
        /// Comma-separated part sizes.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Orthogonal double cover from the translates of a rainbow tree.
    Odc {
        #[command(flatten)]
        input: TreeInput,
        #[arg(long)]
        group: GroupSpec,
    },
    /// Classifier-versus-search grid over all small trees and groups.
    Grid {
        #[arg(long, default_value_t = 9)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        dmax: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        count: bool,
        /// Use every colour even over Z2^k.
        #[arg(long)]
        full_colors: bool,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Harmonious labelling from a rainbow embedding of the tree minus a leaf.
    Harmonious {
        #[command(flatten)]
        input: TreeInput,
        /// Leaf to delete; defaults to the lowest-index leaf.
        #[arg(long)]
        leaf: Option<usize>,
    },
}

fn parse_elements(spec: &GroupSpec, text: &str) -> Result<BTreeSet<GroupElement>, Box<dyn Error>> {
    if text.trim() == "all" {
        return Ok(spec.elements().collect());
    }
    let mut out = BTreeSet::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        out.insert(spec.parse_element(item)?);
    }
    Ok(out)
}

fn color_targets(spec: &GroupSpec, colors: Option<&str>) -> Result<TargetSets, Box<dyn Error>> {
    Ok(match colors {
        None => TargetSets::spanning_default(spec),
        Some("all") => TargetSets::full(spec),
        Some("all-minus-zero") => TargetSets::full_minus_zero(spec),
        Some(list) => TargetSets::new(spec, spec.elements().collect(), parse_elements(spec, list)?, false)?,
    })
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json value serializes")
    );
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Classify { input, group } => {
            let report = classify(&input.load()?, &group)?;
            println!("{}", report.to_json());
            Ok(ExitCode::from(report.obstructed as u8))
        }
        Command::Solve {
            input,
            group,
            colors,
            count,
            node_limit,
            order,
        } => {
            let tree = input.load()?;
            let targets = color_targets(&group, colors.as_deref())?;
            let cfg = SearchConfig {
                mode: if count { SearchMode::Count } else { SearchMode::Decide },
                ..SearchConfig::default()
            }
            .with_node_limit(node_limit)
            .with_order(match order {
                OrderArg::Bfs => VertexOrder::BfsFromMaxDegree,
                OrderArg::MostConstrained => VertexOrder::MostConstrained,
            });
            let report = solve_exact(&tree, &group, &targets, None, &cfg)?;
            let outcome = match (count, report.count) {
                (true, Some(0)) => "none",
                (true, Some(_)) => "found",
                (true, None) => "inconclusive",
                (false, _) => report.outcome.label(),
            };
            print_json(&json!({
                "outcome": outcome,
                "witness": report.outcome.witness(),
                "count": report.count,
                "stats": report.stats,
            }));
            Ok(ExitCode::from(match outcome {
                "found" => 0,
                "none" => 1,
                _ => 2,
            }))
        }
        Command::CoreEmbed { input, group } => {
            let tree = input.load()?;
            let core = find_core(&tree, None)?;
            match build_core_embedding(&tree, &core, &group) {
                Ok(r) => {
                    println!("{}", r.to_json());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ (ConstructError::Obstructed(_) | ConstructError::Exhausted(_))) => {
                    eprintln!("{e}");
                    Ok(ExitCode::from(1))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::PartitionZeroSum { group, set, sizes } => {
            let s = parse_elements(&group, &set)?;
            let parts = partition_zero_sum(&group, &s, &sizes)?;
            let shown: Vec<Vec<String>> = parts
                .iter()
                .map(|p| p.iter().map(|&a| group.format_element(a)).collect())
                .collect();
            print_json(&json!({ "group": group.to_string(), "parts": shown }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Odc { input, group } => {
            let tree = input.load()?;
            let targets = TargetSets::full_minus_zero(&group);
            let cfg = SearchConfig::decide().with_symmetry(true);
            let f = match find_rainbow(&tree, &group, &targets, &cfg)? {
                SolveOutcome::Found(f) => f,
                other => {
                    eprintln!("no rainbow embedding ({})", other.label());
                    return Ok(ExitCode::from(1));
                }
            };
            let cover = translates_cover(&tree, &f)?;
            let report = verify_odc(&cover);
            print_json(&json!({ "embedding": f, "cover": cover, "report": report }));
            Ok(ExitCode::from(if report.verdict { 0 } else { 2 }))
        }
        Command::Grid {
            nmax,
            dmax,
            out,
            count,
            full_colors,
            node_limit,
        } => {
            let cfg = GridConfig {
                policy: if full_colors {
                    ColorPolicy::Full
                } else {
                    ColorPolicy::SpanningDefault
                },
                count,
                node_limit,
                ..GridConfig::new(nmax, dmax)
            };
            let rows = experiment_cross_check(&cfg)?;
            let summary = run_report(&rows, fs::File::create(&out)?)?;
            println!("{}", summary.to_json());
            Ok(ExitCode::from(if summary.hard_violations == 0 { 0 } else { 3 }))
        }
        Command::Harmonious { input, leaf } => {
            let t_plus = input.load()?;
            let leaf = match leaf {
                Some(l) => l,
                None => *t_plus.leaves().first().ok_or("tree has no leaf")?,
            };
            let (tree, _) = t_plus.remove_leaf(leaf).ok_or("not a leaf")?;
            let spec = GroupSpec::cyclic(tree.n() as u64)?;
            let cfg = SearchConfig::decide().with_symmetry(true);
            let f = match find_rainbow(&tree, &spec, &TargetSets::full(&spec), &cfg)? {
                SolveOutcome::Found(f) => f,
                other => {
                    eprintln!("no rainbow embedding of the leaf-deleted tree ({})", other.label());
                    return Ok(ExitCode::from(1));
                }
            };
            let h = harmonious_from_rainbow(&t_plus, leaf, &f)?;
            print_json(&json!(h));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
