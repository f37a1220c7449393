//! The end-to-end pipeline: translate a finitary proof, eliminate cuts
//! stage by stage down to rank Ω+1, then audit the truth of every explored
//! end sequent over a finite set universe.

use crate::embed::{embed_proof, rank_excess, EmbedError};
use crate::hfset::{eval_formula, fits_level, Level, Universe, Verdict};
use crate::kpcalc::FinProof;
use crate::ord::{below_eps_omega_plus_1, compare, Cmp, Ord as OrdN};
use crate::rsderiv::{node_info, Derivation, Kids, Step, Tag};
use crate::syntax::RsTerm;
use crate::transforms::{cut_elim, TransformError};
use serde::Serialize;
use std::time::Instant;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ReflectError {
    #[error("embedding failed: {0}")]
    Embed(#[from] EmbedError),
    #[error("cut elimination failed at stage {stage}: {source}")]
    Stage {
        stage: String,
        source: TransformError,
    },
    #[error("pipeline shape violation: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct StageReport {
    pub name: String,
    pub root: String,
    pub length: String,
    pub rank: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub schema_version: u32,
    pub stages: Vec<StageReport>,
    /// The m of the root rank Ω+m after embedding.
    pub rank_steps: u64,
    pub passes: u64,
    pub final_length: String,
    pub final_rank: String,
    pub length_below_tower: bool,
    pub tower_index: Option<u64>,
    pub truth_verdict: String,
    pub explored_nodes: u64,
    pub violations: Vec<String>,
}

impl PipelineReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.truth_verdict == "true"
    }
}

fn stage(name: &str, d: &Derivation, t0: Instant) -> StageReport {
    StageReport {
        name: name.to_string(),
        root: node_info(d),
        length: d.length.to_string(),
        rank: d.rank.to_string(),
        millis: t0.elapsed().as_millis(),
    }
}

/// Run the whole pipeline on a checked finitary proof.
pub fn reflect(
    p: &FinProof,
    subst: &[(String, RsTerm)],
    u: &Universe,
    battery: &[RsTerm],
    depth: usize,
) -> Result<PipelineReport, ReflectError> {
    let mut stages = Vec::new();
    let t0 = Instant::now();
    let mut d = embed_proof(p, subst, u)?;
    stages.push(stage("embed", &d, t0));
    // Cut-free axiom translations come out at rank 0; anything below Ω
    // needs no elimination passes at all.
    let m = if compare(&d.rank, &OrdN::Omega) == Cmp::Less {
        0
    } else {
        rank_excess(&d.rank).ok_or_else(|| {
            ReflectError::Shape(format!("embedded rank {} is not of the shape W+m", d.rank))
        })?
    };
    let passes = m.saturating_sub(1);
    for j in 0..passes {
        let target = OrdN::Omega.add_nat(m - 1 - j);
        let name = format!("cut-elim to W+{}", m - 1 - j);
        let t = Instant::now();
        d = cut_elim(&d, &target, u).map_err(|source| ReflectError::Stage {
            stage: name.clone(),
            source,
        })?;
        stages.push(stage(&name, &d, t));
    }
    let (below, tower_index) = below_eps_omega_plus_1(&d.length);
    let mut violations = Vec::new();
    if !below {
        violations.push(format!("final length {} not below the e-tower", d.length));
    }
    if compare(&d.rank, &OrdN::Omega.add_nat(1)) == Cmp::Greater {
        violations.push(format!("final rank {} exceeds W+1", d.rank));
    }
    let (verdict, explored) = if violations.is_empty() {
        let t = Instant::now();
        let mut walk = TruthWalk {
            u,
            battery,
            verdict: Verdict::True,
            explored: 0,
            violations: &mut violations,
        };
        walk.visit(&d, depth, &mut Vec::new());
        let explored = walk.explored;
        let v = walk.verdict;
        stages.push(stage("truth-audit", &d, t));
        (v, explored)
    } else {
        (Verdict::Unknown, 0)
    };
    Ok(PipelineReport {
        schema_version: REPORT_SCHEMA_VERSION,
        stages,
        rank_steps: m,
        passes,
        final_length: d.length.to_string(),
        final_rank: d.rank.to_string(),
        length_below_tower: below,
        tower_index,
        truth_verdict: match verdict {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Unknown => "unknown",
        }
        .to_string(),
        violations,
        explored_nodes: explored,
    })
}

/// Audit the end-sequent truth of every node reachable to the given depth,
/// feeding branches the battery.  Refuses derivations whose rank exceeds
/// Ω+1, since an uneliminated high cut can smuggle in a false sequent.
pub fn verify_truth_walk(
    d: &Derivation,
    u: &Universe,
    battery: &[RsTerm],
    depth: usize,
) -> Result<(Verdict, u64, Vec<String>), ReflectError> {
    if compare(&d.rank, &OrdN::Omega.add_nat(1)) == Cmp::Greater {
        return Err(ReflectError::Shape(format!(
            "rank {} exceeds W+1; run cut elimination first",
            d.rank
        )));
    }
    let mut violations = Vec::new();
    let mut walk = TruthWalk {
        u,
        battery,
        verdict: Verdict::True,
        explored: 0,
        violations: &mut violations,
    };
    walk.visit(d, depth, &mut Vec::new());
    let v = walk.verdict;
    let e = walk.explored;
    Ok((v, e, violations))
}

struct TruthWalk<'a> {
    u: &'a Universe,
    battery: &'a [RsTerm],
    verdict: Verdict,
    explored: u64,
    violations: &'a mut Vec<String>,
}

impl TruthWalk<'_> {
    fn visit(&mut self, d: &Derivation, depth: usize, path: &mut Vec<Step>) {
        self.explored += 1;
        // The end sequent as a disjunction.
        let mut here = Verdict::False;
        for f in d.end().iter() {
            here = here.or(eval_formula(f, self.u).unwrap_or(Verdict::Unknown));
        }
        if here == Verdict::False {
            self.violations
                .push(format!("end sequent false at {}", fmt_path(path)));
        }
        self.verdict = self.verdict.and(here);
        match &d.tag {
            Tag::Cut { formula } => {
                if !fits_level(formula, Level::Sigma(1)) && !fits_level(formula, Level::Pi(1)) {
                    self.violations.push(format!(
                        "cut formula {formula} is neither Sigma1 nor Pi1 at {}",
                        fmt_path(path)
                    ));
                }
            }
            Tag::SigmaRef {
                principal,
                reflected,
            } => {
                let a = eval_formula(reflected, self.u).unwrap_or(Verdict::Unknown);
                let ez = eval_formula(principal, self.u).unwrap_or(Verdict::Unknown);
                if a == Verdict::True && ez == Verdict::False {
                    self.violations.push(format!(
                        "reflection fails: {reflected} true but {principal} false at {}",
                        fmt_path(path)
                    ));
                }
            }
            _ => {}
        }
        if depth == 0 {
            return;
        }
        match &d.kids {
            Kids::None => {}
            Kids::One(c) => {
                path.push(Step::Idx(0));
                self.visit(c, depth - 1, path);
                path.pop();
            }
            Kids::Two(c0, c1) => {
                for (i, c) in [c0, c1].into_iter().enumerate() {
                    path.push(Step::Idx(i));
                    self.visit(c, depth - 1, path);
                    path.pop();
                }
            }
            Kids::Branch(_) => {
                for t in self.battery {
                    if let Some(c) = d.branch(t) {
                        path.push(Step::Term(t.clone()));
                        self.visit(&c, depth - 1, path);
                        path.pop();
                    }
                }
            }
        }
    }
}

fn fmt_path(path: &[Step]) -> String {
    if path.is_empty() {
        return "root".to_string();
    }
    let parts: Vec<String> = path
        .iter()
        .map(|s| match s {
            Step::Idx(i) => i.to_string(),
            Step::Term(t) => t.to_string(),
        })
        .collect();
    format!("[{}]", parts.join(" "))
}
