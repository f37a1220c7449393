//! The four proof transformers: weakening, inversion, reduction, and one
//! round of cut elimination, each with the ordinal bound bookkeeping of its
//! defining clauses.
//!
//! All four preserve laziness: a branching premise is wrapped in a new
//! closure, never forced.  When a recursive call inside a closure hits
//! malformed input it yields a poison node (an axiom with an empty sequent,
//! which no well-formedness check accepts) — the closure cannot surface an
//! error at construction time.

use crate::hfset::{EvalError, Universe};
use crate::ord::{compare, natural_sum, Cmp, Ord as OrdN};
use crate::rsderiv::{check_quasicode, Derivation, Kids, Step, Tag};
use crate::syntax::{child_bit, child_term, decompose, formula_rank, Decomp, Formula, RsTerm, Sequent};

#[derive(Debug, thiserror::Error)]
pub enum TransformError {
    #[error("input is not a quasicode: {0}")]
    NotQuasicode(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("length bound violated: {0}")]
    Length(String),
    #[error("rank bound violated: {0}")]
    Rank(String),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

type TResult = Result<Derivation, TransformError>;

/// The stand-in for ∅ when a lazily forced premise turns out malformed.
fn poison() -> Derivation {
    Derivation::axiom(Sequent::empty())
}

fn lt(a: &OrdN, b: &OrdN) -> bool {
    compare(a, b) == Cmp::Less
}

/// Rebuild a node with new side/length/rank, transforming each premise.
/// Tree premises are transformed now (errors propagate); branching premises
/// are composed lazily.
fn map_node<F>(w: &Derivation, side: Sequent, length: OrdN, rank: OrdN, f: F) -> TResult
where
    F: Fn(&Derivation, &Formula) -> TResult + Clone + Send + Sync + 'static,
{
    let kids = match &w.kids {
        Kids::None => Kids::None,
        Kids::One(c) => {
            if !lt(&c.length, &w.length) {
                return Err(TransformError::Length(format!(
                    "premise length {} is not below {}",
                    c.length, w.length
                )));
            }
            let minor = w
                .minor(0, None)
                .ok_or_else(|| TransformError::Malformed("premise shape".into()))?;
            Kids::One(Box::new(f(c, &minor)?))
        }
        Kids::Two(c0, c1) => {
            let mut done = Vec::new();
            for (i, c) in [c0, c1].into_iter().enumerate() {
                if !lt(&c.length, &w.length) {
                    return Err(TransformError::Length(format!(
                        "premise length {} is not below {}",
                        c.length, w.length
                    )));
                }
                let minor = w
                    .minor(i, None)
                    .ok_or_else(|| TransformError::Malformed("premise shape".into()))?;
                done.push(f(c, &minor)?);
            }
            let second = done.pop().expect("two premises");
            let first = done.pop().expect("two premises");
            Kids::Two(Box::new(first), Box::new(second))
        }
        Kids::Branch(_) => {
            let inner = w.clone();
            Kids::Branch(std::sync::Arc::new(move |s: &RsTerm| {
                let minor = match inner.minor(0, Some(s)) {
                    Some(m) => m,
                    None => return poison(),
                };
                let child = match inner.branch(s) {
                    Some(c) => c,
                    None => return poison(),
                };
                f(&child, &minor).unwrap_or_else(|_| poison())
            }))
        }
    };
    Ok(Derivation {
        tag: w.tag.clone(),
        side,
        length,
        rank,
        kids,
    })
}

// ---------------------------------------------------------------------------
// Weakening.

/// Add the closed formulas Γ' everywhere; length and rank never grow.
pub fn wkn(extra: &Sequent, w: &Derivation) -> TResult {
    for f in extra.iter() {
        if !f.is_closed() {
            return Err(TransformError::Malformed(format!(
                "weakening formula is not closed: {f}"
            )));
        }
    }
    wkn_go(extra, w)
}

fn wkn_go(extra: &Sequent, w: &Derivation) -> TResult {
    check_quasicode(w).map_err(TransformError::NotQuasicode)?;
    match &w.tag {
        Tag::Axiom => Ok(Derivation::axiom(w.side.union(extra))),
        // A cut whose formula is being weakened in collapses to its left
        // premise: that premise already ends Γ, A.
        Tag::Cut { formula } if extra.contains(formula) => {
            let u = w
                .child(0)
                .ok_or_else(|| TransformError::Malformed("cut arity".into()))?;
            if !lt(&u.length, &w.length) {
                return Err(TransformError::Length(format!(
                    "premise length {} is not below {}",
                    u.length, w.length
                )));
            }
            wkn_go(extra, u)
        }
        _ => {
            let extra = extra.clone();
            let extra_inner = extra.clone();
            map_node(
                w,
                w.side.union(&extra),
                w.length.clone(),
                w.rank.clone(),
                move |c, _| wkn_go(&extra_inner, c),
            )
        }
    }
}

/// Weaken w until its end sequent is exactly `target` (which must contain
/// the current end sequent).
pub fn wkn_to(w: &Derivation, target: &Sequent) -> TResult {
    let end = w.end();
    if !end.is_subset(target) {
        return Err(TransformError::Malformed(format!(
            "cannot weaken {} into {}",
            end, target
        )));
    }
    let mut extra = Sequent::empty();
    for f in target.iter() {
        if !end.contains(f) {
            extra.insert(f.clone());
        }
    }
    if extra.is_empty() {
        return Ok(w.clone());
    }
    wkn(&extra, w)
}

// ---------------------------------------------------------------------------
// Inversion.

fn component(a: &Formula, i: &Step) -> Option<Formula> {
    match (decompose(a), i) {
        (Decomp::ConjBinary, Step::Idx(b @ (0 | 1))) => child_bit(a, *b as u8),
        (Decomp::ConjTerms, Step::Term(s)) => child_term(a, s),
        _ => None,
    }
}

/// Replace the ⋀-formula A by its i-th component throughout; A must not be
/// Δ0 (an axiom stays an axiom only because its true Δ0 member is elsewhere).
pub fn inv(a: &Formula, i: &Step, w: &Derivation) -> TResult {
    if a.is_delta0() {
        return Err(TransformError::Malformed(format!(
            "inversion target must not be Δ0: {a}"
        )));
    }
    let ai = component(a, i).ok_or_else(|| {
        TransformError::Malformed(format!("formula {a} has no component at that index"))
    })?;
    inv_go(a, i, &ai, w)
}

fn inv_go(a: &Formula, i: &Step, ai: &Formula, w: &Derivation) -> TResult {
    check_quasicode(w).map_err(TransformError::NotQuasicode)?;
    if !w.end().contains(a) {
        return Err(TransformError::Malformed(format!(
            "inversion target {a} is not in the end sequent"
        )));
    }
    if let Tag::Axiom = w.tag {
        return Ok(Derivation::axiom(w.side.without(a).with(ai)));
    }

    if w.tag.principal() == Some(a) {
        return match (&w.tag, i) {
            (Tag::AndI { .. }, Step::Idx(b @ (0 | 1))) => {
                let c = w.child(*b).expect("arity checked");
                if w.side.contains(a) {
                    if !lt(&c.length, &w.length) {
                        return Err(TransformError::Length(format!(
                            "premise length {} is not below {}",
                            c.length, w.length
                        )));
                    }
                    inv_go(a, i, ai, c)
                } else {
                    Ok(c.clone())
                }
            }
            (Tag::BAllI { .. } | Tag::AllI { .. }, Step::Term(s)) => {
                let c = w
                    .branch(s)
                    .ok_or_else(|| TransformError::Malformed("branch arity".into()))?;
                if w.side.contains(a) {
                    if !lt(&c.length, &w.length) {
                        return Err(TransformError::Length(format!(
                            "premise length {} is not below {}",
                            c.length, w.length
                        )));
                    }
                    inv_go(a, i, ai, &c)
                } else {
                    Ok(c)
                }
            }
            _ => Err(TransformError::Malformed(
                "index does not fit the principal formula".into(),
            )),
        };
    }

    let (a2, i2, ai2) = (a.clone(), i.clone(), ai.clone());
    map_node(
        w,
        w.side.without(a).with(ai),
        w.length.clone(),
        w.rank.clone(),
        move |c, _| inv_go(&a2, &i2, &ai2, c),
    )
}

// ---------------------------------------------------------------------------
// Reduction.

/// Eliminate a cut on C (rank(C) ≻ Ω) between derivations of Γ,C and Γ,¬C;
/// the result derives Γ with length at most the natural sum of the inputs.
pub fn red(c: &Formula, w0: &Derivation, w1: &Derivation, u: &Universe) -> TResult {
    let r = formula_rank(c, u)?;
    if compare(&r, &OrdN::Omega) != Cmp::Greater {
        return Err(TransformError::Rank(format!(
            "reduction formula must have rank above Ω, got {r}"
        )));
    }
    red_go(c, &r, w0, w1, u)
}

fn red_go(c: &Formula, r: &OrdN, w0: &Derivation, w1: &Derivation, u: &Universe) -> TResult {
    check_quasicode(w0).map_err(TransformError::NotQuasicode)?;
    check_quasicode(w1).map_err(TransformError::NotQuasicode)?;
    let nc = c.negate();
    let end0 = w0.end();
    let end1 = w1.end();
    if !end0.contains(c) {
        return Err(TransformError::Malformed(format!("{c} missing from the left input")));
    }
    if !end1.contains(&nc) {
        return Err(TransformError::Malformed(format!("{nc} missing from the right input")));
    }
    let gamma = end0.without(c);
    if end1.without(&nc) != gamma {
        return Err(TransformError::Malformed(
            "the two inputs do not share a side sequent".into(),
        ));
    }

    if matches!(w0.tag, Tag::Axiom) || matches!(w1.tag, Tag::Axiom) {
        return Ok(Derivation::axiom(gamma));
    }

    let ab = natural_sum(&w0.length, &w1.length);

    if w0.tag.principal() != Some(c) {
        // Copy the last inference of w0, pushing the reduction into every
        // premise; the right input is weakened by the minor formula first.
        let (c2, r2, nc2, g2, w1c, uc) = (
            c.clone(),
            r.clone(),
            nc.clone(),
            gamma.clone(),
            w1.clone(),
            u.clone(),
        );
        return map_node(w0, gamma.clone(), ab, r.clone(), move |prem, minor| {
            let left = wkn_to(prem, &g2.with(minor).with(&c2))?;
            let right = wkn_to(&w1c, &g2.with(minor).with(&nc2))?;
            red_go(&c2, &r2, &left, &right, &uc)
        });
    }

    if w1.tag.principal() != Some(&nc) {
        // Symmetric: descend the right input instead.
        return red_go(&nc, r, w1, w0, u);
    }

    // Both last inferences introduce the reduction formula.  Work on
    // whichever side is the disjunction.
    match decompose(c) {
        Decomp::DisjBinary | Decomp::DisjTerms => {}
        Decomp::ConjBinary | Decomp::ConjTerms => return red_go(&nc, r, w1, w0, u),
        Decomp::Atomic => {
            return Err(TransformError::Rank(
                "reduction formula of rank above Ω cannot be atomic".into(),
            ))
        }
    }

    // The left inference picks a component of C; cut the reduced premise
    // against the matching inversion of the right input.
    let (step, cut_formula) = match &w0.tag {
        Tag::Or0 { .. } => (Step::Idx(0), child_bit(c, 0)),
        Tag::Or1 { .. } => (Step::Idx(1), child_bit(c, 1)),
        Tag::BExI { witness, .. } | Tag::ExI { witness, .. } => {
            (Step::Term(witness.clone()), child_term(c, witness))
        }
        Tag::SigmaRef { .. } => {
            return Err(TransformError::Rank(
                "a reflection principal has rank Ω and cannot be reduced".into(),
            ))
        }
        _ => return Err(TransformError::Malformed("rule does not fit a disjunction".into())),
    };
    let cut_formula =
        cut_formula.ok_or_else(|| TransformError::Malformed("missing component".into()))?;

    let prem = w0
        .child(0)
        .ok_or_else(|| TransformError::Malformed("premise shape".into()))?;
    if !lt(&prem.length, &w0.length) {
        return Err(TransformError::Length(format!(
            "premise length {} is not below {}",
            prem.length, w0.length
        )));
    }
    let left = red_go(
        c,
        r,
        &wkn_to(prem, &gamma.with(&cut_formula).with(c))?,
        &wkn_to(w1, &gamma.with(&cut_formula).with(&nc))?,
        u,
    )?;
    let dual_step = step;
    let right = inv(&nc, &dual_step, w1)?;
    Ok(crate::rsderiv::mk_cut(
        cut_formula,
        gamma,
        ab,
        r.clone(),
        left,
        right,
    ))
}

// ---------------------------------------------------------------------------
// Cut elimination.

/// One round: a derivation of rank ⪯ r+1 (r ≻ Ω) becomes one of rank ⪯ r
/// with length ω^length.  Cuts of rank exactly r go through reduction.
pub fn cut_elim(w: &Derivation, r: &OrdN, u: &Universe) -> TResult {
    if compare(r, &OrdN::Omega) != Cmp::Greater {
        return Err(TransformError::Rank(format!(
            "target rank must be above Ω, got {r}"
        )));
    }
    check_quasicode(w).map_err(TransformError::NotQuasicode)?;
    match &w.tag {
        Tag::Axiom => Ok(w.clone()),
        Tag::Cut { formula } => {
            let ra = formula_rank(formula, u)?;
            let c0 = w.child(0).ok_or_else(|| TransformError::Malformed("cut arity".into()))?;
            let c1 = w.child(1).ok_or_else(|| TransformError::Malformed("cut arity".into()))?;
            for c in [c0, c1] {
                if !lt(&c.length, &w.length) {
                    return Err(TransformError::Length(format!(
                        "premise length {} is not below {}",
                        c.length, w.length
                    )));
                }
            }
            let j0 = cut_elim(c0, r, u)?;
            let j1 = cut_elim(c1, r, u)?;
            match compare(&ra, r) {
                Cmp::Less => Ok(crate::rsderiv::mk_cut(
                    formula.clone(),
                    w.side.clone(),
                    OrdN::omega_pow(w.length.clone()),
                    r.clone(),
                    j0,
                    j1,
                )),
                Cmp::Equal => red_go(formula, r, &j0, &j1, u),
                Cmp::Greater => Err(TransformError::Rank(format!(
                    "cut formula rank {ra} exceeds the bound {r}+1"
                ))),
            }
        }
        _ => {
            let (r2, u2) = (r.clone(), u.clone());
            map_node(
                w,
                w.side.clone(),
                OrdN::omega_pow(w.length.clone()),
                r.clone(),
                move |c, _| cut_elim(c, &r2, &u2),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfset::HFSet;
    use crate::rsderiv::{
        branch_calls, check_wf_bounded, default_battery, mk_all, mk_cut, mk_ex, mk_or,
        navigate, reset_branch_calls, BranchFn,
    };
    use crate::syntax::{all, cempty, comega, ex, mem, nmem, or, vr};
    use std::sync::Arc;

    fn v3() -> Universe {
        Universe::new(3, 8)
    }

    fn lem_disjunct(s: &RsTerm) -> Formula {
        or(mem(s.clone(), comega()), nmem(s.clone(), comega()))
    }

    /// ⊢ D(s) for any fixed term s, via the logical axiom.
    fn lem_proof(s: &RsTerm) -> Derivation {
        let ax = Derivation::axiom(Sequent::from_vec(vec![
            mem(s.clone(), comega()),
            nmem(s.clone(), comega()),
        ]));
        let step1 = mk_or(
            false,
            lem_disjunct(s),
            Sequent::single(nmem(s.clone(), comega())),
            OrdN::Nat(1),
            OrdN::Nat(0),
            ax,
        );
        mk_or(
            true,
            lem_disjunct(s),
            Sequent::single(lem_disjunct(s)),
            OrdN::Nat(2),
            OrdN::Nat(0),
            step1,
        )
    }

    /// ⊢ ∀y(y∈ω ∨ y∉ω), lazily.
    fn omega_lem() -> Derivation {
        let goal = all(or(mem(vr(0), comega()), nmem(vr(0), comega())));
        let f: BranchFn = Arc::new(|s: &RsTerm| lem_proof(s));
        mk_all(goal, Sequent::empty(), OrdN::Omega, OrdN::Nat(0), f)
    }

    #[test]
    fn weakening_adds_everywhere() {
        let u = v3();
        let w = omega_lem();
        let extra = Sequent::single(mem(cempty(), comega()));
        reset_branch_calls();
        let out = wkn(&extra, &w).unwrap();
        assert_eq!(branch_calls(), 0, "weakening must stay lazy");
        assert_eq!(out.end(), w.end().union(&extra));
        assert_eq!(compare(&out.length, &w.length), Cmp::Equal);
        assert!(check_wf_bounded(&out, &u, &default_battery(3), 4).is_empty());
        // the weakened formulas reach every premise
        let t = RsTerm::Const(HFSet::empty());
        let sub = navigate(&out, &[Step::Term(t), Step::Idx(0), Step::Idx(0)]).unwrap();
        assert!(sub.end().contains(&mem(cempty(), comega())));
    }

    #[test]
    fn weakening_rejects_open_formulas() {
        let extra = Sequent::single(mem(crate::syntax::fv("a"), comega()));
        assert!(wkn(&extra, &omega_lem()).is_err());
    }

    #[test]
    fn weakening_absorbs_cut() {
        // cut on A with left premise ending Γ,A: weakening by A keeps only
        // the left premise
        let a = ex(mem(vr(0), comega()));
        let m = mem(cempty(), comega());
        let left = Derivation::axiom(Sequent::from_vec(vec![m.clone(), a.clone()]));
        let right = Derivation::axiom(Sequent::from_vec(vec![m.clone(), a.negate()]));
        let w = mk_cut(
            a.clone(),
            Sequent::single(m.clone()),
            OrdN::Nat(1),
            OrdN::Omega.add_nat(1),
            left,
            right,
        );
        let out = wkn(&Sequent::single(a.clone()), &w).unwrap();
        assert!(matches!(out.tag, Tag::Axiom));
        assert_eq!(out.end(), Sequent::from_vec(vec![m, a]));
    }

    #[test]
    fn inversion_of_universal() {
        let u = v3();
        let w = omega_lem();
        let goal = all(or(mem(vr(0), comega()), nmem(vr(0), comega())));
        let s = RsTerm::Const(HFSet::singleton(HFSet::empty()));
        let out = inv(&goal, &Step::Term(s.clone()), &w).unwrap();
        assert_eq!(out.end(), Sequent::single(lem_disjunct(&s)));
        assert!(compare(&out.length, &w.length) != Cmp::Greater);
        assert!(check_wf_bounded(&out, &u, &default_battery(3), 4).is_empty());
    }

    #[test]
    fn inversion_through_side_formulas() {
        let u = v3();
        // weaken the target into a derivation where it is a side formula,
        // then invert it away
        let goal = all(mem(vr(0), comega()));
        let w = lem_proof(&cempty());
        let wk = wkn(&Sequent::single(goal.clone()), &w).unwrap();
        let s = RsTerm::Const(HFSet::von_neumann(2));
        let out = inv(&goal, &Step::Term(s.clone()), &wk).unwrap();
        assert!(out.end().contains(&mem(s, comega())));
        assert!(!out.end().contains(&goal));
        assert!(check_wf_bounded(&out, &u, &default_battery(3), 4).is_empty());
    }

    #[test]
    fn inversion_rejects_delta0() {
        let d = crate::syntax::and(mem(cempty(), comega()), mem(cempty(), comega()));
        assert!(inv(&d, &Step::Idx(0), &lem_proof(&cempty())).is_err());
    }

    /// Γ, ¬C for C = ∃x(x∈ω ∨ x∉ω): a lazy ∀ whose premises are axioms
    /// carrying a true Δ0 side formula.
    fn neg_c_derivation(m: &Formula, c: &Formula) -> Derivation {
        let nc = c.negate();
        let side = Sequent::single(m.clone());
        let nc_inner = nc.clone();
        let side_inner = side.clone();
        let f: BranchFn = Arc::new(move |s: &RsTerm| {
            let minor = crate::syntax::child_term(&nc_inner, s).expect("conjunctive");
            Derivation::axiom(side_inner.with(&minor))
        });
        mk_all(nc, side, OrdN::Omega, OrdN::Nat(0), f)
    }

    /// A true Δ0 marker distinct from the formulas built around ω.
    fn marker() -> Formula {
        mem(
            RsTerm::Const(HFSet::singleton(HFSet::empty())),
            RsTerm::Const(HFSet::fin(vec![
                HFSet::empty(),
                HFSet::singleton(HFSet::empty()),
            ])),
        )
    }

    /// C = ∃y∃x x∈ω (the outer variable vacuous), which has rank Ω+1, and a
    /// derivation of {marker}, C by two ∃-inferences.
    fn high_rank_cut_formula() -> (Formula, Derivation) {
        let t = ex(mem(vr(0), comega()));
        let c = ex(t.clone());
        let m = marker();
        let ax = Derivation::axiom(Sequent::from_vec(vec![m.clone(), mem(cempty(), comega())]));
        let dt = mk_ex(
            t.clone(),
            cempty(),
            Sequent::single(m.clone()),
            OrdN::Nat(1),
            OrdN::Nat(0),
            ax,
        );
        let left = mk_ex(
            c.clone(),
            cempty(),
            Sequent::single(m),
            OrdN::Nat(2),
            OrdN::Nat(0),
            dt,
        );
        (c, left)
    }

    #[test]
    fn reduction_eliminates_existential_cut() {
        let u = v3();
        let (c, left) = high_rank_cut_formula();
        let m = marker();
        let right = neg_c_derivation(&m, &c);
        assert!(check_wf_bounded(&left, &u, &default_battery(3), 5).is_empty());
        assert!(check_wf_bounded(&right, &u, &default_battery(3), 5).is_empty());
        let out = red(&c, &left, &right, &u).unwrap();
        assert_eq!(out.end(), Sequent::single(m));
        assert!(check_wf_bounded(&out, &u, &default_battery(3), 6).is_empty());
        let bound = natural_sum(&left.length, &right.length);
        assert!(compare(&out.length, &bound) != Cmp::Greater);
        assert!(compare(&out.rank, &formula_rank(&c, &u).unwrap()) != Cmp::Greater);
    }

    #[test]
    fn cut_elim_removes_top_rank_cut() {
        let u = v3();
        let (c, left_inner) = high_rank_cut_formula();
        let rc = formula_rank(&c, &u).unwrap();
        assert_eq!(compare(&rc, &OrdN::Omega.add_nat(1)), Cmp::Equal);
        let m = marker();
        let right = neg_c_derivation(&m, &c);
        let w = mk_cut(
            c.clone(),
            Sequent::single(m.clone()),
            OrdN::Omega.add_nat(1),
            rc.add_nat(1),
            left_inner,
            right,
        );
        assert!(check_wf_bounded(&w, &u, &default_battery(3), 5).is_empty());
        let out = cut_elim(&w, &rc, &u).unwrap();
        assert_eq!(out.end(), Sequent::single(m));
        assert!(compare(&out.rank, &rc) != Cmp::Greater);
        assert!(
            compare(&out.length, &OrdN::omega_pow(w.length.clone())) != Cmp::Greater
        );
        assert!(check_wf_bounded(&out, &u, &default_battery(3), 6).is_empty());
        // no cut on a formula of rank ⪰ rc may survive
        assert_no_big_cut(&out, &rc, &u);
    }

    fn assert_no_big_cut(w: &Derivation, r: &OrdN, u: &Universe) {
        if let Tag::Cut { formula } = &w.tag {
            let ra = formula_rank(formula, u).unwrap();
            assert!(compare(&ra, r) == Cmp::Less, "cut of rank {ra} survived");
        }
        match &w.kids {
            Kids::None => {}
            Kids::One(c) => assert_no_big_cut(c, r, u),
            Kids::Two(c0, c1) => {
                assert_no_big_cut(c0, r, u);
                assert_no_big_cut(c1, r, u);
            }
            Kids::Branch(_) => {
                for s in default_battery(2) {
                    assert_no_big_cut(&w.branch(&s).unwrap(), r, u);
                }
            }
        }
    }

    #[test]
    fn cut_elim_is_lazy() {
        let u = v3();
        let w = omega_lem();
        reset_branch_calls();
        let out = cut_elim(&w, &OrdN::Omega.add_nat(1), &u).unwrap();
        assert_eq!(branch_calls(), 0, "cut elimination must not force branches");
        assert_eq!(out.end(), w.end());
    }

    #[test]
    fn transformer_guards() {
        let u = v3();
        let w = lem_proof(&cempty());
        // inversion target absent
        let goal = all(mem(vr(0), comega()));
        assert!(inv(&goal, &Step::Term(cempty()), &w).is_err());
        // reduction sides disagree on Γ
        let c = ex(mem(vr(0), comega()));
        let bad = red(&c, &w, &w, &u);
        assert!(bad.is_err());
        // cut elimination needs a target rank above Ω
        assert!(cut_elim(&w, &OrdN::Omega, &u).is_err());
    }
}
