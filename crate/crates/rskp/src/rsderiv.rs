//! Infinitary derivations with lazily evaluated branching.
//!
//! A node stores its rule tag, side sequent Γ, claimed length and rank
//! bounds, and its premises.  ⋀-rules over all terms keep their premises as
//! a closure from terms to derivations; the closure is only run when a
//! premise is actually requested, and a global counter records every such
//! invocation.  Well-formedness of the branching rules is a Π2 property, so
//! the checker samples a finite battery of terms to a given depth.

use crate::hfset::{Universe, Verdict};
use crate::ord::{compare, Cmp, Ord as OrdN};
use crate::syntax::{
    and, formula_rank, mem, nmem, or, sigma_ref_principal, Formula, RsTerm, Sequent,
};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Total number of branch-closure invocations since the last reset.
static BRANCH_CALLS: AtomicU64 = AtomicU64::new(0);

pub fn branch_calls() -> u64 {
    BRANCH_CALLS.load(Ordering::SeqCst)
}

pub fn reset_branch_calls() {
    BRANCH_CALLS.store(0, Ordering::SeqCst);
}

#[derive(Clone)]
pub enum Tag {
    Axiom,
    AndI { principal: Formula },
    Or0 { principal: Formula },
    Or1 { principal: Formula },
    BAllI { principal: Formula },
    BExI { principal: Formula, witness: RsTerm },
    AllI { principal: Formula },
    ExI { principal: Formula, witness: RsTerm },
    Cut { formula: Formula },
    /// From Γ, A (A a Σ formula) conclude Γ, ∃z A^z.
    SigmaRef { principal: Formula, reflected: Formula },
}

impl Tag {
    pub fn name(&self) -> &'static str {
        match self {
            Tag::Axiom => "axiom",
            Tag::AndI { .. } => "and",
            Tag::Or0 { .. } => "or0",
            Tag::Or1 { .. } => "or1",
            Tag::BAllI { .. } => "ball",
            Tag::BExI { .. } => "bex",
            Tag::AllI { .. } => "all",
            Tag::ExI { .. } => "ex",
            Tag::Cut { .. } => "cut",
            Tag::SigmaRef { .. } => "sref",
        }
    }

    /// The formula the rule introduces, if any.
    pub fn principal(&self) -> Option<&Formula> {
        match self {
            Tag::Axiom | Tag::Cut { .. } => None,
            Tag::AndI { principal }
            | Tag::Or0 { principal }
            | Tag::Or1 { principal }
            | Tag::BAllI { principal }
            | Tag::BExI { principal, .. }
            | Tag::AllI { principal }
            | Tag::ExI { principal, .. }
            | Tag::SigmaRef { principal, .. } => Some(principal),
        }
    }
}

pub type BranchFn = Arc<dyn Fn(&RsTerm) -> Derivation + Send + Sync>;

#[derive(Clone)]
pub enum Kids {
    None,
    One(Box<Derivation>),
    Two(Box<Derivation>, Box<Derivation>),
    Branch(BranchFn),
}

#[derive(Clone)]
pub struct Derivation {
    pub tag: Tag,
    /// Γ of the rule; the end sequent is Γ plus the principal formula.
    pub side: Sequent,
    pub length: OrdN,
    pub rank: OrdN,
    pub kids: Kids,
}

impl std::fmt::Debug for Derivation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Derivation")
            .field("tag", &self.tag.name())
            .field("end", &format!("{}", self.end()))
            .field("length", &format!("{}", self.length))
            .field("rank", &format!("{}", self.rank))
            .finish_non_exhaustive()
    }
}

impl Derivation {
    pub fn axiom(seq: Sequent) -> Derivation {
        Derivation {
            tag: Tag::Axiom,
            side: seq,
            length: OrdN::Nat(0),
            rank: OrdN::Nat(0),
            kids: Kids::None,
        }
    }

    pub fn end(&self) -> Sequent {
        match self.tag.principal() {
            Some(p) => self.side.with(p),
            None => self.side.clone(),
        }
    }

    /// Invoke a ⋀-branch; every call is counted.
    pub fn branch(&self, s: &RsTerm) -> Option<Derivation> {
        match &self.kids {
            Kids::Branch(f) => {
                BRANCH_CALLS.fetch_add(1, Ordering::SeqCst);
                Some(f(s))
            }
            _ => None,
        }
    }

    pub fn child(&self, i: usize) -> Option<&Derivation> {
        match (&self.kids, i) {
            (Kids::One(u), 0) => Some(u),
            (Kids::Two(u, _), 0) => Some(u),
            (Kids::Two(_, v), 1) => Some(v),
            _ => None,
        }
    }

    /// The minor formula premise i must carry (branching rules take the
    /// chosen term instead of an index).
    pub fn minor(&self, i: usize, s: Option<&RsTerm>) -> Option<Formula> {
        match (&self.tag, i) {
            (Tag::AndI { principal }, 0 | 1) => crate::syntax::child_bit(principal, i as u8),
            (Tag::Or0 { principal }, 0) => crate::syntax::child_bit(principal, 0),
            (Tag::Or1 { principal }, 0) => crate::syntax::child_bit(principal, 1),
            (Tag::BAllI { principal } | Tag::AllI { principal }, 0) => {
                crate::syntax::child_term(principal, s?)
            }
            (Tag::BExI { principal, witness }, 0) => {
                crate::syntax::child_term(principal, witness)
            }
            (Tag::ExI { principal, witness }, 0) => crate::syntax::child_term(principal, witness),
            (Tag::Cut { formula }, 0) => Some(formula.clone()),
            (Tag::Cut { formula }, 1) => Some(formula.negate()),
            (Tag::SigmaRef { reflected, .. }, 0) => Some(reflected.clone()),
            _ => None,
        }
    }
}

/// One move of navigation: a premise index, or the term fed to a branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Idx(usize),
    Term(RsTerm),
}

/// Walk a path from the root; None when the path leaves the tree.
pub fn navigate(w: &Derivation, path: &[Step]) -> Option<Derivation> {
    let mut cur = w.clone();
    for step in path {
        cur = match (step, &cur.kids) {
            (Step::Idx(i), Kids::One(_) | Kids::Two(..)) => cur.child(*i)?.clone(),
            (Step::Term(s), Kids::Branch(_)) => cur.branch(s)?,
            _ => return None,
        };
    }
    Some(cur)
}

#[derive(Debug, Clone)]
pub struct WfViolation {
    /// Navigation path from the root.
    pub path: Vec<Step>,
    pub msg: String,
}

impl std::fmt::Display for WfViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at ")?;
        if self.path.is_empty() {
            write!(f, "root")?;
        } else {
            for (i, s) in self.path.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                match s {
                    Step::Idx(k) => write!(f, "{k}")?,
                    Step::Term(t) => write!(f, "[{t}]")?,
                }
            }
        }
        write!(f, ": {}", self.msg)
    }
}

/// Purely structural sanity of a single node: arity matches the tag and the
/// principal formula has the right shape.
pub fn check_quasicode(w: &Derivation) -> Result<(), String> {
    let arity_ok = match (&w.tag, &w.kids) {
        (Tag::Axiom, Kids::None) => true,
        (Tag::AndI { .. } | Tag::Cut { .. }, Kids::Two(..)) => true,
        (
            Tag::Or0 { .. }
            | Tag::Or1 { .. }
            | Tag::BExI { .. }
            | Tag::ExI { .. }
            | Tag::SigmaRef { .. },
            Kids::One(_),
        ) => true,
        (Tag::BAllI { .. } | Tag::AllI { .. }, Kids::Branch(_)) => true,
        _ => false,
    };
    if !arity_ok {
        return Err(format!("premise shape does not fit rule {}", self_name(w)));
    }
    let shape_ok = match &w.tag {
        Tag::Axiom | Tag::Cut { .. } => true,
        Tag::AndI { principal } => matches!(principal, Formula::And(..)),
        Tag::Or0 { principal } | Tag::Or1 { principal } => matches!(principal, Formula::Or(..)),
        Tag::BAllI { principal } => matches!(principal, Formula::BAll { .. }),
        Tag::BExI { principal, .. } => matches!(principal, Formula::BEx { .. }),
        Tag::AllI { principal } => matches!(principal, Formula::All(..)),
        Tag::ExI { principal, .. } => matches!(principal, Formula::Ex(..)),
        Tag::SigmaRef { principal, reflected } => {
            *principal == sigma_ref_principal(reflected)
        }
    };
    if !shape_ok {
        return Err(format!(
            "principal formula has the wrong shape for rule {}",
            self_name(w)
        ));
    }
    for f in w.end().iter() {
        if !f.is_closed() {
            return Err(format!("end-sequent formula is not closed: {f}"));
        }
    }
    Ok(())
}

fn self_name(w: &Derivation) -> &'static str {
    w.tag.name()
}

/// Finitized well-formedness: check every local condition, feeding each
/// branching rule every battery term, descending `depth` levels.
pub fn check_wf_bounded(
    w: &Derivation,
    u: &Universe,
    battery: &[RsTerm],
    depth: usize,
) -> Vec<WfViolation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    wf_node(w, u, battery, depth, &mut path, &mut out);
    out
}

fn wf_push(out: &mut Vec<WfViolation>, path: &[Step], msg: String) {
    out.push(WfViolation {
        path: path.to_vec(),
        msg,
    });
}

fn lt(a: &OrdN, b: &OrdN) -> bool {
    compare(a, b) == Cmp::Less
}

fn le(a: &OrdN, b: &OrdN) -> bool {
    compare(a, b) != Cmp::Greater
}

fn wf_premise(
    parent: &Derivation,
    child: &Derivation,
    minor: &Formula,
    out: &mut Vec<WfViolation>,
    path: &[Step],
) {
    let want = parent.side.with(minor);
    if child.end() != want {
        wf_push(
            out,
            path,
            format!("premise ends {}, expected {}", child.end(), want),
        );
    }
    if !lt(&child.length, &parent.length) {
        wf_push(
            out,
            path,
            format!(
                "premise length {} is not below {}",
                child.length, parent.length
            ),
        );
    }
    if !le(&child.rank, &parent.rank) {
        wf_push(
            out,
            path,
            format!("premise rank {} exceeds {}", child.rank, parent.rank),
        );
    }
}

fn wf_node(
    w: &Derivation,
    u: &Universe,
    battery: &[RsTerm],
    depth: usize,
    path: &mut Vec<Step>,
    out: &mut Vec<WfViolation>,
) {
    if let Err(e) = check_quasicode(w) {
        wf_push(out, path, e);
        return;
    }

    match &w.tag {
        Tag::Axiom => {
            let mut found = false;
            let mut undecided = false;
            for f in w.side.iter() {
                if f.is_delta0() {
                    match crate::hfset::truth_delta0(f, u) {
                        Ok(Verdict::True) => found = true,
                        Ok(Verdict::Unknown) => undecided = true,
                        Ok(Verdict::False) => {}
                        Err(_) => undecided = true,
                    }
                }
            }
            if !found {
                wf_push(
                    out,
                    path,
                    if undecided {
                        "axiom sequent has no decidably true Δ0 member".into()
                    } else {
                        "axiom sequent contains no true Δ0 formula".into()
                    },
                );
            }
        }
        Tag::Cut { formula } => {
            if w.end().contains(formula) || w.end().contains(&formula.negate()) {
                wf_push(out, path, "cut formula appears in the end sequent".into());
            }
            match formula_rank(formula, u) {
                Ok(r) => {
                    if !le(&r.add_nat(1), &w.rank) {
                        wf_push(
                            out,
                            path,
                            format!("cut formula rank {r}+1 exceeds node rank {}", w.rank),
                        );
                    }
                }
                Err(e) => wf_push(out, path, format!("cut formula rank: {e}")),
            }
        }
        Tag::SigmaRef { reflected, .. } => {
            if !reflected.is_sigma() {
                wf_push(out, path, "reflected formula is not Σ".into());
            }
            if !lt(&OrdN::Omega, &w.length) {
                wf_push(
                    out,
                    path,
                    format!("reflection length {} is not above Ω", w.length),
                );
            }
        }
        _ => {}
    }

    if depth == 0 {
        return;
    }

    match &w.kids {
        Kids::None => {}
        Kids::One(c) => {
            let minor = w.minor(0, None).expect("shape checked");
            wf_premise(w, c, &minor, out, path);
            path.push(Step::Idx(0));
            wf_node(c, u, battery, depth - 1, path, out);
            path.pop();
        }
        Kids::Two(c0, c1) => {
            for (i, c) in [c0, c1].into_iter().enumerate() {
                let minor = w.minor(i, None).expect("shape checked");
                wf_premise(w, c, &minor, out, path);
                path.push(Step::Idx(i));
                wf_node(c, u, battery, depth - 1, path, out);
                path.pop();
            }
        }
        Kids::Branch(_) => {
            for s in battery {
                let c = w.branch(s).expect("branch shape checked");
                let minor = w.minor(0, Some(s)).expect("shape checked");
                wf_premise(w, &c, &minor, out, path);
                path.push(Step::Term(s.clone()));
                wf_node(&c, u, battery, depth - 1, path, out);
                path.pop();
            }
        }
    }
}

/// The canonical battery: every universe constant plus c_ω.
pub fn default_battery(rank: u32) -> Vec<RsTerm> {
    let u = Universe::new(rank, 1);
    let mut out: Vec<RsTerm> = u.members().iter().cloned().map(RsTerm::Const).collect();
    out.push(RsTerm::Const(crate::hfset::HFSet::Omega));
    out
}

// ---------------------------------------------------------------------------
// Convenience constructors used by the embedding and in tests.

pub fn mk_and(principal: Formula, side: Sequent, a: OrdN, r: OrdN, u: Derivation, v: Derivation) -> Derivation {
    Derivation {
        tag: Tag::AndI { principal },
        side,
        length: a,
        rank: r,
        kids: Kids::Two(Box::new(u), Box::new(v)),
    }
}

pub fn mk_or(right: bool, principal: Formula, side: Sequent, a: OrdN, r: OrdN, u: Derivation) -> Derivation {
    Derivation {
        tag: if right {
            Tag::Or1 { principal }
        } else {
            Tag::Or0 { principal }
        },
        side,
        length: a,
        rank: r,
        kids: Kids::One(Box::new(u)),
    }
}

pub fn mk_ball(principal: Formula, side: Sequent, a: OrdN, r: OrdN, f: BranchFn) -> Derivation {
    Derivation {
        tag: Tag::BAllI { principal },
        side,
        length: a,
        rank: r,
        kids: Kids::Branch(f),
    }
}

pub fn mk_all(principal: Formula, side: Sequent, a: OrdN, r: OrdN, f: BranchFn) -> Derivation {
    Derivation {
        tag: Tag::AllI { principal },
        side,
        length: a,
        rank: r,
        kids: Kids::Branch(f),
    }
}

pub fn mk_bex(principal: Formula, witness: RsTerm, side: Sequent, a: OrdN, r: OrdN, u: Derivation) -> Derivation {
    Derivation {
        tag: Tag::BExI { principal, witness },
        side,
        length: a,
        rank: r,
        kids: Kids::One(Box::new(u)),
    }
}

pub fn mk_ex(principal: Formula, witness: RsTerm, side: Sequent, a: OrdN, r: OrdN, u: Derivation) -> Derivation {
    Derivation {
        tag: Tag::ExI { principal, witness },
        side,
        length: a,
        rank: r,
        kids: Kids::One(Box::new(u)),
    }
}

pub fn mk_cut(formula: Formula, side: Sequent, a: OrdN, r: OrdN, u: Derivation, v: Derivation) -> Derivation {
    Derivation {
        tag: Tag::Cut { formula },
        side,
        length: a,
        rank: r,
        kids: Kids::Two(Box::new(u), Box::new(v)),
    }
}

pub fn mk_sref(reflected: Formula, side: Sequent, a: OrdN, r: OrdN, u: Derivation) -> Derivation {
    Derivation {
        tag: Tag::SigmaRef {
            principal: sigma_ref_principal(&reflected),
            reflected,
        },
        side,
        length: a,
        rank: r,
        kids: Kids::One(Box::new(u)),
    }
}

/// Guarded component of a bounded universal at s: s∈t → F(s).
pub fn ball_component(t: &RsTerm, body: &Formula, s: &RsTerm) -> Formula {
    or(nmem(s.clone(), t.clone()), body.instantiate(s))
}

/// Guarded component of a bounded existential at s: s∈t ∧ F(s).
pub fn bex_component(t: &RsTerm, body: &Formula, s: &RsTerm) -> Formula {
    and(mem(s.clone(), t.clone()), body.instantiate(s))
}

/// Report a derivation's surface data without forcing any branch.
pub fn node_info(w: &Derivation) -> String {
    format!(
        "{}: end ⊢ {} (length {}, rank {})",
        w.tag.name(),
        w.end(),
        w.length,
        w.rank
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfset::HFSet;
    use crate::syntax::{all, ball, cempty, comega, vr};

    fn v3() -> Universe {
        Universe::new(3, 8)
    }

    fn true_ax(extra: Option<Formula>) -> Derivation {
        // ∅ ∈ ω is a true Δ0 formula
        let mut s = Sequent::single(mem(cempty(), comega()));
        if let Some(f) = extra {
            s.insert(f);
        }
        Derivation::axiom(s)
    }

    #[test]
    fn axiom_checks() {
        let u = v3();
        let ok = true_ax(None);
        assert!(check_wf_bounded(&ok, &u, &default_battery(3), 4).is_empty());
        let bad = Derivation::axiom(Sequent::single(mem(comega(), cempty())));
        assert_eq!(check_wf_bounded(&bad, &u, &default_battery(3), 4).len(), 1);
    }

    fn omega_lem() -> Derivation {
        // ∀y(y∈ω ∨ y∉ω) with each branch built on demand
        let body = or(mem(vr(0), comega()), nmem(vr(0), comega()));
        let goal = all(body.clone());
        let side = Sequent::empty();
        let f: BranchFn = Arc::new(move |s: &RsTerm| {
            let minor = or(mem(s.clone(), comega()), nmem(s.clone(), comega()));
            let ax = Derivation::axiom(Sequent::from_vec(vec![
                mem(s.clone(), comega()),
                nmem(s.clone(), comega()),
            ]));
            let s1 = mk_or(
                false,
                minor.clone(),
                Sequent::single(nmem(s.clone(), comega())),
                OrdN::Nat(1),
                OrdN::Nat(0),
                ax,
            );
            mk_or(
                true,
                minor.clone(),
                Sequent::single(minor.clone()),
                OrdN::Nat(2),
                OrdN::Nat(0),
                s1,
            )
        });
        mk_all(goal, side, OrdN::Omega, OrdN::Nat(0), f)
    }

    #[test]
    fn branch_laziness_and_navigation() {
        reset_branch_calls();
        let w = omega_lem();
        assert_eq!(branch_calls(), 0);
        let _ = node_info(&w);
        let _ = w.end();
        assert_eq!(branch_calls(), 0, "inspection must not force branches");

        let t = RsTerm::Const(HFSet::singleton(HFSet::empty()));
        let sub = navigate(&w, &[Step::Term(t.clone()), Step::Idx(0)]).unwrap();
        assert_eq!(branch_calls(), 1);
        assert!(sub.end().contains(&nmem(t.clone(), comega())));
        assert!(navigate(&w, &[Step::Idx(0)]).is_none());
        assert!(navigate(&sub, &[Step::Idx(0), Step::Idx(0)]).is_none());
    }

    #[test]
    fn wf_accepts_branching_derivation() {
        let u = v3();
        let w = omega_lem();
        let report = check_wf_bounded(&w, &u, &default_battery(3), 4);
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn wf_catches_length_violation() {
        let u = v3();
        // ∨-inference whose premise claims a length at least the node's
        let ax = true_ax(None);
        let m = mem(cempty(), comega());
        let f = or(m.clone(), nmem(cempty(), comega()));
        let bad = mk_or(false, f, Sequent::empty(), OrdN::Nat(0), OrdN::Nat(0), ax);
        assert!(!check_wf_bounded(&bad, &u, &default_battery(3), 4).is_empty());
    }

    #[test]
    fn wf_checks_cut_rank() {
        let u = v3();
        let a = crate::syntax::ex(mem(vr(0), comega()));
        let left = true_ax(Some(a.clone()));
        let right = true_ax(Some(a.negate()));
        // rank(∃x x∈ω) = Ω, so the node needs rank ⪰ Ω+1
        let bad = mk_cut(
            a.clone(),
            Sequent::single(mem(cempty(), comega())),
            OrdN::Nat(1),
            OrdN::Omega,
            left.clone(),
            right.clone(),
        );
        assert!(!check_wf_bounded(&bad, &u, &default_battery(3), 4).is_empty());
        let good = mk_cut(
            a,
            Sequent::single(mem(cempty(), comega())),
            OrdN::Nat(1),
            OrdN::Omega.add_nat(1),
            left,
            right,
        );
        assert!(check_wf_bounded(&good, &u, &default_battery(3), 4).is_empty());
    }

    #[test]
    fn quasicode_shape_errors() {
        let ax = true_ax(None);
        let wrong = Derivation {
            tag: Tag::AndI {
                principal: mem(cempty(), comega()),
            },
            side: Sequent::empty(),
            length: OrdN::Nat(1),
            rank: OrdN::Nat(0),
            kids: Kids::Two(Box::new(ax.clone()), Box::new(ax.clone())),
        };
        assert!(check_quasicode(&wrong).is_err());
        let wrong_arity = Derivation {
            tag: Tag::BAllI {
                principal: ball(comega(), mem(vr(0), comega())),
            },
            side: Sequent::empty(),
            length: OrdN::Omega,
            rank: OrdN::Nat(0),
            kids: Kids::One(Box::new(ax)),
        };
        assert!(check_quasicode(&wrong_arity).is_err());
    }
}
