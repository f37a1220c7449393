//! Command-line front end: ordinal arithmetic, finitary proof checking,
//! embedding into the infinitary calculus, transformations, and the full
//! reflection pipeline.

use clap::{Args, Parser, Subcommand};
use rskp::embed::{audit_bounds, embed_proof};
use rskp::hfset::Universe;
use rskp::kpcalc::{check_fin, parse_proof, FinProof};
use rskp::ord::{
    below_eps_omega_plus_1, compare, natural_sum, normalize_cnf, parse_ord, Cmp,
};
use rskp::reflect::reflect;
use rskp::rsderiv::{
    check_wf_bounded, default_battery, navigate, node_info, Derivation, Kids, Step,
};
use rskp::syntax::{parse_term, RsTerm};
use rskp::transforms::cut_elim;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rskp", about = "sequent calculi, ordinal bookkeeping, and reflection audits", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Common,
}

#[derive(Args)]
struct Common {
    /// Rank bound of the finite set universe V_k.
    #[arg(long, global = true, default_value_t = 4)]
    universe_rank: u32,
    /// Sampling fuel for quantifiers over omega.
    #[arg(long, global = true, default_value_t = 8)]
    omega_fuel: u64,
    /// Battery terms fed to branching rules, comma separated; defaults to
    /// the universe constants plus omega.
    #[arg(long, global = true)]
    battery: Option<String>,
    /// Exploration depth for checks and audits.
    #[arg(long, global = true, default_value_t = 6)]
    depth: usize,
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ordinal notation arithmetic.
    Ord {
        #[command(subcommand)]
        cmd: OrdCmd,
    },
    /// Finitary sequent proofs.
    Kp {
        #[command(subcommand)]
        cmd: KpCmd,
    },
    /// Infinitary derivations.
    Rs {
        #[command(subcommand)]
        cmd: RsCmd,
    },
    /// Run the full pipeline on a proof file and audit the result.
    Reflect {
        file: String,
        /// Closed terms for free variables, e.g. "a={} b={{}}".
        #[arg(long)]
        subst: Option<String>,
    },
}

#[derive(Subcommand)]
enum OrdCmd {
    /// Compare two notations; prints <, =, or >.
    Cmp { a: String, b: String },
    /// Natural (Hessenberg) sum.
    Nsum { a: String, b: String },
    /// Normal form of a notation.
    Cnf { a: String },
    /// Is the notation below the epsilon tower? Prints the tower index.
    BelowEps { a: String },
}

#[derive(Subcommand)]
enum KpCmd {
    /// Check a proof file; prints `valid` or the violations.
    Check { file: String },
}

#[derive(Subcommand)]
enum RsCmd {
    /// Embed a proof file and print the root node.
    Embed {
        file: String,
        #[arg(long)]
        subst: Option<String>,
        /// Also check the recorded bounds against the advertised ones.
        #[arg(long)]
        audit_bounds: bool,
    },
    /// Embed, then eliminate cuts of and above the given rank.
    Transform {
        file: String,
        #[arg(long)]
        subst: Option<String>,
        /// Rank to cut-eliminate at, e.g. "W + 2".
        #[arg(long)]
        rank: String,
    },
    /// Embed and print the explored tree to the chosen depth.
    Dump {
        file: String,
        #[arg(long)]
        subst: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(ok) => {
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let opts = &cli.opts;
    match cli.cmd {
        Cmd::Ord { cmd } => run_ord(cmd, opts),
        Cmd::Kp { cmd } => match cmd {
            KpCmd::Check { file } => {
                let p = load_proof(&file)?;
                let v = check_fin(&p);
                if v.is_empty() {
                    println!("valid ({} quantifier inferences)", p.quantifier_rule_count());
                    Ok(true)
                } else {
                    for x in &v {
                        println!("{x}");
                    }
                    Ok(false)
                }
            }
        },
        Cmd::Rs { cmd } => run_rs(cmd, opts),
        Cmd::Reflect { file, subst } => {
            let p = load_proof(&file)?;
            let sigma = parse_subst(subst.as_deref())?;
            let u = universe(opts);
            let battery = battery(opts, &u)?;
            let report = reflect(&p, &sigma, &u, &battery, opts.depth)
                .map_err(|e| e.to_string())?;
            if opts.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                for s in &report.stages {
                    println!("{}: {} ({} ms)", s.name, s.root, s.millis);
                }
                println!(
                    "final length {} (below the tower: {}), rank {}",
                    report.final_length, report.length_below_tower, report.final_rank
                );
                println!(
                    "truth: {} over {} explored nodes",
                    report.truth_verdict, report.explored_nodes
                );
                for v in &report.violations {
                    println!("violation: {v}");
                }
            }
            Ok(report.ok())
        }
    }
}

fn run_ord(cmd: OrdCmd, opts: &Common) -> Result<bool, String> {
    match cmd {
        OrdCmd::Cmp { a, b } => {
            let x = parse_ord(&a).map_err(|e| e.to_string())?;
            let y = parse_ord(&b).map_err(|e| e.to_string())?;
            let s = match compare(&x, &y) {
                Cmp::Less => "<",
                Cmp::Equal => "=",
                Cmp::Greater => ">",
            };
            emit(opts, s, &format!("{{\"cmp\":\"{s}\"}}"));
            Ok(true)
        }
        OrdCmd::Nsum { a, b } => {
            let x = parse_ord(&a).map_err(|e| e.to_string())?;
            let y = parse_ord(&b).map_err(|e| e.to_string())?;
            let s = natural_sum(&x, &y).to_string();
            emit(opts, &s, &format!("{{\"nsum\":\"{s}\"}}"));
            Ok(true)
        }
        OrdCmd::Cnf { a } => {
            let x = parse_ord(&a).map_err(|e| e.to_string())?;
            let s = normalize_cnf(&x).to_string();
            emit(opts, &s, &format!("{{\"cnf\":\"{s}\"}}"));
            Ok(true)
        }
        OrdCmd::BelowEps { a } => {
            let x = parse_ord(&a).map_err(|e| e.to_string())?;
            let (below, idx) = below_eps_omega_plus_1(&x);
            let txt = match idx {
                Some(n) => format!("{below} (tower index {n})"),
                None => format!("{below}"),
            };
            emit(
                opts,
                &txt,
                &format!(
                    "{{\"below\":{below},\"tower_index\":{}}}",
                    idx.map(|n| n.to_string()).unwrap_or("null".into())
                ),
            );
            Ok(below)
        }
    }
}

fn run_rs(cmd: RsCmd, opts: &Common) -> Result<bool, String> {
    match cmd {
        RsCmd::Embed {
            file,
            subst,
            audit_bounds: audit,
        } => {
            let (p, d) = embed_file(&file, subst.as_deref(), opts)?;
            println!("{}", node_info(&d));
            let u = universe(opts);
            let battery = battery(opts, &u)?;
            let wf = check_wf_bounded(&d, &u, &battery, opts.depth);
            for v in &wf {
                println!("{v}");
            }
            let mut ok = wf.is_empty();
            if audit {
                match audit_bounds(&p, &d) {
                    Ok(()) => println!("bounds: ok"),
                    Err(e) => {
                        println!("bounds: {e}");
                        ok = false;
                    }
                }
            }
            Ok(ok)
        }
        RsCmd::Transform { file, subst, rank } => {
            let (_, d) = embed_file(&file, subst.as_deref(), opts)?;
            let r = parse_ord(&rank).map_err(|e| e.to_string())?;
            let u = universe(opts);
            let out = cut_elim(&d, &r, &u).map_err(|e| e.to_string())?;
            println!("{}", node_info(&out));
            Ok(true)
        }
        RsCmd::Dump { file, subst } => {
            let (_, d) = embed_file(&file, subst.as_deref(), opts)?;
            let u = universe(opts);
            let battery = battery(opts, &u)?;
            dump(&d, &battery, opts.depth, 0);
            Ok(true)
        }
    }
}

fn dump(d: &Derivation, battery: &[RsTerm], depth: usize, indent: usize) {
    println!("{}{}", "  ".repeat(indent), node_info(d));
    if depth == 0 {
        return;
    }
    match &d.kids {
        Kids::None => {}
        Kids::One(_) | Kids::Two(..) => {
            for i in 0..2 {
                if let Some(c) = navigate(d, &[Step::Idx(i)]) {
                    dump(&c, battery, depth - 1, indent + 1);
                }
            }
        }
        Kids::Branch(_) => {
            for t in battery {
                if let Some(c) = d.branch(t) {
                    println!("{}@ {t}", "  ".repeat(indent + 1));
                    dump(&c, battery, depth - 1, indent + 1);
                }
            }
        }
    }
}

fn load_proof(file: &str) -> Result<FinProof, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?;
    parse_proof(&text).map_err(|e| e.to_string())
}

fn embed_file(
    file: &str,
    subst: Option<&str>,
    opts: &Common,
) -> Result<(FinProof, Derivation), String> {
    let p = load_proof(file)?;
    let sigma = parse_subst(subst)?;
    let u = universe(opts);
    let d = embed_proof(&p, &sigma, &u).map_err(|e| e.to_string())?;
    Ok((p, d))
}

fn parse_subst(s: Option<&str>) -> Result<Vec<(String, RsTerm)>, String> {
    let mut out = Vec::new();
    let Some(s) = s else { return Ok(out) };
    for chunk in s.split_whitespace() {
        let (name, term) = chunk
            .split_once('=')
            .ok_or_else(|| format!("expected name=term, got {chunk}"))?;
        let t = parse_term(term).map_err(|e| format!("{chunk}: {e}"))?;
        if !t.is_closed() {
            return Err(format!("{chunk}: term is not closed"));
        }
        out.push((name.to_string(), t));
    }
    Ok(out)
}

fn universe(opts: &Common) -> Universe {
    Universe::new(opts.universe_rank, opts.omega_fuel)
}

fn battery(opts: &Common, u: &Universe) -> Result<Vec<RsTerm>, String> {
    let _ = u;
    match &opts.battery {
        None => Ok(default_battery(2)),
        Some(s) => s
            .split(',')
            .map(|t| {
                let term = parse_term(t.trim()).map_err(|e| format!("{t}: {e}"))?;
                if term.is_closed() {
                    Ok(term)
                } else {
                    Err(format!("{t}: battery terms must be closed"))
                }
            })
            .collect(),
    }
}

fn emit(opts: &Common, text: &str, json: &str) {
    if opts.json {
        println!("{json}");
    } else {
        println!("{text}");
    }
}
