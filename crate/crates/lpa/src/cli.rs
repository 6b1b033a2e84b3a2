//! Command-line front end.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::checks;
use crate::front::phi_of_text;
use crate::graph::{render_vertex_set, Graph, GraphSpec};
use crate::ideal::{
    acyclic_dimension, certificate_to_json, demonstrate_simplicity, extract_vertex_projection,
    simplicity_report, IdealError,
};
use crate::scalar::{parse_field_spec, Field, FieldSpec, PrimeField, Rationals};

#[derive(Parser)]
#[command(name = "lpa", version, about = "Exact Leavitt path algebra computations via partial skew group rings")]
struct Cli {
    /// Coefficient field: `rational` or `gf:<p>`
    #[arg(long, global = true, default_value = "rational")]
    field: String,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Seed for the randomized parts of `check`
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Simplicity analysis: condition (L) and hereditary saturated subsets
    Analyze { graph: PathBuf },
    /// Evaluate a Leavitt expression in the skew ring
    Phi {
        graph: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Multiply two expressions
    Mul {
        graph: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Canonical normal form of an expression
    NormalForm {
        graph: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Extract a vertex projection from the ideal generated by an expression
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        expr: String,
    },
    /// Dimension of the algebra (acyclic graphs only)
    Dimension { graph: PathBuf },
    /// Run the full invariant suite
    Check { graph: PathBuf },
    /// Certify every vertex projection from one nonzero element
    DemoSimplicity {
        graph: PathBuf,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

fn load_graph(path: &PathBuf) -> Result<Graph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read `{}`: {e}", path.display()))?;
    let spec: GraphSpec = serde_json::from_str(&text)
        .map_err(|e| format!("bad graph file `{}`: {e}", path.display()))?;
    Graph::build(&spec).map_err(|e| e.to_string())
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let field = match parse_field_spec(&cli.field) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let result = match field {
        FieldSpec::Rational => dispatch(&cli, Rationals),
        FieldSpec::Prime(p) => {
            let f = PrimeField::new(p).expect("registry validated primality");
            dispatch(&cli, f)
        }
    };
    match result {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch<F: Field>(cli: &Cli, field: F) -> Result<(), String> {
    match &cli.command {
        Command::Analyze { graph } => {
            let g = load_graph(graph)?;
            let report = simplicity_report(&g).map_err(|e| e.to_string())?;
            let j = json!({
                "condition_L": {
                    "holds": report.condition_l.holds,
                    "witness": report.condition_l.witness.as_ref().map(|c| c.render(&g)),
                },
                "hs_subsets": report
                    .hs_subsets
                    .iter()
                    .map(|s| render_vertex_set(&g, s))
                    .collect::<Vec<_>>(),
                "criteria_met": report.criteria_met,
            });
            match cli.format {
                OutputFormat::Json => println!("{j}"),
                OutputFormat::Text => {
                    match &report.condition_l.witness {
                        None => println!("condition (L): holds"),
                        Some(c) => println!("condition (L): fails, exitless cycle `{}`", c.render(&g)),
                    }
                    println!(
                        "hereditary saturated subsets: {}",
                        report
                            .hs_subsets
                            .iter()
                            .map(|s| format!("{{{}}}", render_vertex_set(&g, s).join(", ")))
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                    println!("criteria met: {}", report.criteria_met);
                }
            }
            Ok(())
        }
        Command::Phi { graph, expr } | Command::NormalForm { graph, expr } => {
            let g = load_graph(graph)?;
            let img = phi_of_text(&g, field, expr)?;
            emit_element(cli, &g, &img.render(&g));
            Ok(())
        }
        Command::Mul { graph, lhs, rhs } => {
            let g = load_graph(graph)?;
            let a = phi_of_text(&g, field.clone(), lhs)?;
            let b = phi_of_text(&g, field, rhs)?;
            let prod = a.mul(&g, &b).map_err(|e| e.to_string())?;
            emit_element(cli, &g, &prod.render(&g));
            Ok(())
        }
        Command::Reduce { graph, expr } => {
            let g = load_graph(graph)?;
            let x = phi_of_text(&g, field, expr)?;
            let (v, cert) = extract_vertex_projection(&g, &x).map_err(render_ideal_err)?;
            let mut j = certificate_to_json(&g, &cert);
            j["vertex"] = json!(g.vertex_name(v));
            println!("{j}");
            Ok(())
        }
        Command::Dimension { graph } => {
            let g = load_graph(graph)?;
            let dim = acyclic_dimension(&g).map_err(render_ideal_err)?;
            match cli.format {
                OutputFormat::Json => println!("{}", json!({ "dimension": dim })),
                OutputFormat::Text => println!("{dim}"),
            }
            Ok(())
        }
        Command::Check { graph } => {
            let g = load_graph(graph)?;
            let results = checks::run_all(&g, field, cli.seed);
            let all_ok = results.iter().all(|c| c.passed);
            match cli.format {
                OutputFormat::Json => {
                    let j: Vec<_> = results
                        .iter()
                        .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                        .collect();
                    println!("{}", json!(j));
                }
                OutputFormat::Text => {
                    for c in &results {
                        let tag = if c.passed { "ok  " } else { "FAIL" };
                        println!("{tag} {:<14} {}", c.name, c.detail);
                    }
                }
            }
            if all_ok {
                Ok(())
            } else {
                Err("invariant suite reported failures".to_string())
            }
        }
        Command::DemoSimplicity { graph, expr, depth } => {
            let g = load_graph(graph)?;
            let x = phi_of_text(&g, field, expr)?;
            let demo = demonstrate_simplicity(&g, &x, *depth).map_err(render_ideal_err)?;
            let j = json!({
                "certificates": demo
                    .certificates
                    .iter()
                    .map(|(v, c)| (g.vertex_name(*v).to_string(), certificate_to_json(&g, c)))
                    .collect::<serde_json::Map<String, serde_json::Value>>(),
                "spanning": demo
                    .spanning
                    .iter()
                    .map(|s| json!({
                        "element": s.element.render(&g),
                        "vertex": g.vertex_name(s.vertex),
                    }))
                    .collect::<Vec<_>>(),
            });
            println!("{j}");
            Ok(())
        }
    }
}

fn emit_element(cli: &Cli, _g: &Graph, rendered: &str) {
    match cli.format {
        OutputFormat::Json => println!("{}", json!({ "element": rendered })),
        OutputFormat::Text => println!("{rendered}"),
    }
}

fn render_ideal_err(e: IdealError) -> String {
    match e {
        IdealError::CycleFound(c) => format!("graph has a cycle: `{c}`"),
        other => other.to_string(),
    }
}
