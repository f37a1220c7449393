//! Translating finitary sequent proofs into infinitary derivations.
//!
//! Axioms are handled by dedicated builders (excluded middle, the
//! extensionality recursion, the set-induction family, and one witnessing
//! step for each set-existence axiom); the inference rules are copied
//! node by node, with ∀-inferences becoming branching rules whose premise
//! family substitutes each requested term for the eigenvariable.  Every node
//! carries explicit length and rank bounds: axiom translations stay below
//! Ω·ω^ω, a proof with k ∀-inferences stays below Ω·φ₀^{k+1}(ω), and the
//! rank always has the shape Ω+m.

use crate::hfset::{ev_term, hf_rank, EvalError, Universe};
use crate::kpcalc::{check_fin, AxiomInst, FinProof, FinRule};
use crate::ord::{
    compare, natural_sum, omega_mul_left, phi0_iterate, Cmp, Ord as OrdN,
};
use crate::rsderiv::{
    mk_all, mk_and, mk_ball, mk_bex, mk_cut, mk_ex, mk_or, mk_sref, Derivation,
};
use crate::syntax::{
    child_bit, child_term, formula_rank, mem, neq_shorthand, nmem, sep_term,
    sigma_ref_principal, Formula, RsTerm, Sequent,
};
use crate::transforms::{wkn, wkn_to, TransformError};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
    #[error("weakening failed: {0}")]
    Transform(#[from] TransformError),
    #[error("invalid finitary proof: {0}")]
    Invalid(String),
}

type EResult = Result<Derivation, EmbedError>;

fn nat(n: u64) -> OrdN {
    OrdN::Nat(n)
}

fn omax(a: OrdN, b: OrdN) -> OrdN {
    if compare(&a, &b) == Cmp::Less {
        b
    } else {
        a
    }
}

/// ω^{rank(A)}, the length currency of the translation.
pub fn no_formula(a: &Formula, u: &Universe) -> Result<OrdN, EmbedError> {
    Ok(OrdN::omega_pow(formula_rank(a, u)?))
}

/// The natural sum of the member measures.
pub fn no_sequent(seq: &Sequent, u: &Universe) -> Result<OrdN, EmbedError> {
    let mut acc = nat(0);
    for f in seq.iter() {
        acc = natural_sum(&acc, &no_formula(f, u)?);
    }
    Ok(acc)
}

fn no_pair(a: &Formula, u: &Universe) -> Result<OrdN, EmbedError> {
    Ok(natural_sum(&no_formula(a, u)?, &no_formula(&a.negate(), u)?))
}

/// A premise closure may not report errors; a malformed forced premise
/// degrades to the empty axiom, which every checker flags.
fn stub() -> Derivation {
    Derivation::axiom(Sequent::empty())
}

fn bit(f: &Formula, i: u8) -> Result<Formula, EmbedError> {
    child_bit(f, i).ok_or_else(|| EmbedError::Schema(format!("no component {i} in {f}")))
}

fn term_child(f: &Formula, s: &RsTerm) -> Result<Formula, EmbedError> {
    child_term(f, s).ok_or_else(|| EmbedError::Schema(format!("no instance of {f}")))
}

// ---------------------------------------------------------------------------
// Excluded middle.

/// A derivation of A, ¬A with length ⪯ no(A,¬A) and rank 0.
pub fn lem(a: &Formula, u: &Universe) -> EResult {
    if !a.is_closed() {
        return Err(EmbedError::Schema(format!("open formula: {a}")));
    }
    if a.is_delta0() {
        return Ok(Derivation::axiom(Sequent::from_vec(vec![
            a.clone(),
            a.negate(),
        ])));
    }
    match a {
        // Conjunctive shapes: the pair {A, ¬A} is the same sequent as
        // {¬A, ¬¬A}, and the dual is disjunctive.
        Formula::And(..) | Formula::BAll { .. } | Formula::All(..) => lem(&a.negate(), u),
        Formula::Or(l, r) => {
            let claim = no_pair(a, u)?;
            let mut kids = Vec::new();
            for (i, part) in [l, r].into_iter().enumerate() {
                let inner = lem(part, u)?;
                kids.push(mk_or(
                    i == 1,
                    a.clone(),
                    Sequent::single(part.negate()),
                    no_pair(part, u)?.add_nat(1),
                    nat(0),
                    inner,
                ));
            }
            let second = kids.pop().expect("two disjuncts");
            let first = kids.pop().expect("two disjuncts");
            Ok(mk_and(
                a.negate(),
                Sequent::single(a.clone()),
                claim,
                nat(0),
                first,
                second,
            ))
        }
        Formula::BEx { .. } | Formula::Ex(..) => {
            let claim = no_pair(a, u)?;
            let af = a.clone();
            let uu = u.clone();
            let bounded = matches!(a, Formula::BEx { .. });
            let branch = Arc::new(move |s: &RsTerm| {
                lem_witness(&af, s, bounded, &uu).unwrap_or_else(|_| stub())
            });
            let neg = a.negate();
            Ok(if bounded {
                mk_ball(neg, Sequent::single(a.clone()), claim, nat(0), branch)
            } else {
                mk_all(neg, Sequent::single(a.clone()), claim, nat(0), branch)
            })
        }
        Formula::Mem { .. } => unreachable!("atoms are Delta0"),
    }
}

/// The witnessing premise of lem at an existential A: from {B(s), ¬B(s)}
/// introduce A over the witness s.
fn lem_witness(a: &Formula, s: &RsTerm, bounded: bool, u: &Universe) -> EResult {
    let b = term_child(a, s)?;
    let inner = lem(&b, u)?;
    let claim = no_pair(&b, u)?.add_nat(1);
    let side = Sequent::single(b.negate());
    Ok(if bounded {
        mk_bex(a.clone(), s.clone(), side, claim, nat(0), inner)
    } else {
        mk_ex(a.clone(), s.clone(), side, claim, nat(0), inner)
    })
}

// ---------------------------------------------------------------------------
// ∨-assembly: collapsing two sequent members into their disjunction.

/// From a derivation of Γ, B0, B1 derive Γ, B0∨B1 by two ∨-steps.
fn assemble_or(target: &Formula, w: Derivation, u: &Universe) -> EResult {
    let _ = u;
    let b0 = bit(target, 0)?;
    let b1 = bit(target, 1)?;
    let r = w.rank.clone();
    let l1 = w.length.add_nat(1);
    let n1 = mk_or(false, target.clone(), w.end().without(&b0), l1, r.clone(), w);
    let l2 = n1.length.add_nat(1);
    let side = n1.end().without(&b1);
    Ok(mk_or(true, target.clone(), side, l2, r, n1))
}

// ---------------------------------------------------------------------------
// Extensionality.

fn subst_many(f: &Formula, names: &[String], terms: &[RsTerm]) -> Formula {
    let mut out = f.clone();
    for (n, t) in names.iter().zip(terms) {
        out = out.subst_free(n, t);
    }
    out
}

/// A derivation of s1≠t1, …, sn≠tn, ¬A(s⃗), A(t⃗) with length ⪯ its no
/// measure and rank 0, by recursion on the schema A.
pub fn ext(
    schema: &Formula,
    names: &[String],
    svec: &[RsTerm],
    tvec: &[RsTerm],
    u: &Universe,
) -> EResult {
    if names.len() != svec.len() || svec.len() != tvec.len() {
        return Err(EmbedError::Schema("argument lists differ in length".into()));
    }
    let mut ineqs = Sequent::empty();
    for (s, t) in svec.iter().zip(tvec) {
        ineqs.insert(neq_shorthand(s, t));
    }
    let a_s = subst_many(schema, names, svec);
    let a_t = subst_many(schema, names, tvec);
    let neg_s = a_s.negate();
    if schema.is_delta0() {
        let mut seq = ineqs;
        seq.insert(neg_s);
        seq.insert(a_t);
        return Ok(Derivation::axiom(seq));
    }
    let top = ineqs.with(&neg_s).with(&a_t);
    let claim = no_sequent(&top, u)?;
    match schema {
        Formula::And(l, r) | Formula::Or(l, r) => {
            // The binary case: recurse on both components, ∨-wrap each
            // premise on the disjunctive side, conclude on the conjunctive.
            let conjunctive_t = matches!(schema, Formula::And(..));
            let (wrap_on, conclude_on) = if conjunctive_t {
                (neg_s.clone(), a_t.clone())
            } else {
                (a_t.clone(), neg_s.clone())
            };
            let mut kids = Vec::new();
            for (i, part) in [l, r].into_iter().enumerate() {
                let inner = ext(part, names, svec, tvec, u)?;
                kids.push(wrap_or_bit(&wrap_on, i as u8, inner, u)?);
            }
            let second = kids.pop().expect("two components");
            let first = kids.pop().expect("two components");
            let side = top.without(&conclude_on);
            Ok(mk_and(conclude_on, side, claim, nat(0), first, second))
        }
        Formula::BAll { .. } | Formula::BEx { .. } => {
            // A branching rule on the ∀-side; each premise pairs a
            // membership transfer with the recursive call on the body.
            let universal = matches!(schema, Formula::BAll { .. });
            let branch_on = if universal { a_t.clone() } else { neg_s.clone() };
            let side = top.without(&branch_on);
            let (schema_c, names_c, svec_c, tvec_c, uu) = (
                schema.clone(),
                names.to_vec(),
                svec.to_vec(),
                tvec.to_vec(),
                u.clone(),
            );
            let branch = Arc::new(move |s: &RsTerm| {
                ext_bounded_premise(
                    &schema_c, &names_c, &svec_c, &tvec_c, s, universal, &uu,
                )
                .unwrap_or_else(|_| stub())
            });
            Ok(mk_ball(branch_on, side, claim, nat(0), branch))
        }
        Formula::All(body) | Formula::Ex(body) => {
            let universal = matches!(schema, Formula::All(..));
            let (branch_on, witness_on) = if universal {
                (a_t.clone(), neg_s.clone())
            } else {
                (neg_s.clone(), a_t.clone())
            };
            let side = top.without(&branch_on);
            let (body_c, names_c, svec_c, tvec_c, uu) = (
                (**body).clone(),
                names.to_vec(),
                svec.to_vec(),
                tvec.to_vec(),
                u.clone(),
            );
            let branch = Arc::new(move |s: &RsTerm| {
                ext_unbounded_premise(
                    &body_c, &names_c, &svec_c, &tvec_c, s, &witness_on, &uu,
                )
                .unwrap_or_else(|_| stub())
            });
            Ok(mk_all(branch_on, side, claim, nat(0), branch))
        }
        Formula::Mem { .. } => unreachable!("atoms are Delta0"),
    }
}

/// Replace the i-th disjunct of `target` in the end of `w` by `target`.
fn wrap_or_bit(target: &Formula, i: u8, w: Derivation, u: &Universe) -> EResult {
    let minor = bit(target, i)?;
    let side = w.end().without(&minor);
    let claim = no_sequent(&side.with(target), u)?.add_nat(1);
    Ok(mk_or(i == 1, target.clone(), side, claim, nat(0), w))
}

/// Premise at term r for the bounded-quantifier extensionality step.
fn ext_bounded_premise(
    schema: &Formula,
    names: &[String],
    svec: &[RsTerm],
    tvec: &[RsTerm],
    r: &RsTerm,
    universal: bool,
    u: &Universe,
) -> EResult {
    let (bound, body) = match schema {
        Formula::BAll { bound, body } | Formula::BEx { bound, body } => (bound, body),
        _ => return Err(EmbedError::Schema("not a bounded quantifier".into())),
    };
    let a_s = subst_many(schema, names, svec);
    let a_t = subst_many(schema, names, tvec);
    // The two formulas the premise decomposes: a guarded disjunction on one
    // side, a guarded conjunction witnessed at r on the other.
    let (dis, con, con_host) = if universal {
        (term_child(&a_t, r)?, term_child(&a_s.negate(), r)?, a_s.negate())
    } else {
        (term_child(&a_s.negate(), r)?, term_child(&a_t, r)?, a_t.clone())
    };
    let mem_schema = if universal {
        nmem(r.clone(), bound.clone())
    } else {
        mem(r.clone(), bound.clone())
    };
    let body_schema = body.instantiate(r);
    let u0 = ext(&mem_schema, names, svec, tvec, u)?;
    let u1 = if universal {
        ext(&body_schema, names, svec, tvec, u)?
    } else {
        ext(&body_schema.negate(), names, svec, tvec, u)?
    };
    // In the universal case u1 derives the body transfer s⃗→t⃗; in the
    // existential case the roles of the two sides swap via the negation.
    let w0 = wrap_or_bit(&dis, 0, u0, u)?;
    let w1 = wrap_or_bit(&dis, 1, u1, u)?;
    let side = w0.end().without(&bit(&con, 0)?);
    let claim = no_sequent(&side.with(&con), u)?;
    let andnode = mk_and(con.clone(), side.clone(), claim, nat(0), w0, w1);
    let claim2 = no_sequent(&side.with(&con_host), u)?;
    Ok(mk_bex(con_host, r.clone(), side, claim2, nat(0), andnode))
}

/// Premise at term r for the unbounded-quantifier extensionality step.
fn ext_unbounded_premise(
    body: &Formula,
    names: &[String],
    svec: &[RsTerm],
    tvec: &[RsTerm],
    r: &RsTerm,
    witness_on: &Formula,
    u: &Universe,
) -> EResult {
    // `witness_on` is the existential member of the end sequent; its
    // instance at r is the minor the inner step discharges, and the
    // recursive call on the instantiated body supplies exactly that
    // instance together with the dual one on the other side.
    let body_schema = body.instantiate(r);
    let minor = term_child(witness_on, r)?;
    let inner = ext(&body_schema, names, svec, tvec, u)?;
    let side = inner.end().without(&minor);
    let claim = no_sequent(&side.with(witness_on), u)?;
    Ok(mk_ex(
        witness_on.clone(),
        r.clone(),
        side,
        claim,
        nat(0),
        inner,
    ))
}

// ---------------------------------------------------------------------------
// Set induction.

/// A derivation of A → ∀x F(x) for A ≡ ∀x((∀y∈x)F(y) → F(x)), built from
/// the ∈-recursive family deriving ¬A, F(s); rank 0 throughout.
pub fn ind(target: &Formula, u: &Universe) -> EResult {
    let neg_a = bit(target, 0)?;
    let all_f = bit(target, 1)?;
    let a = neg_a.negate();
    let n_a = no_formula(&a, u)?;
    let claim = natural_sum(&n_a, &OrdN::Omega);
    let (neg_c, all_c, n_c, uu) = (neg_a.clone(), all_f.clone(), n_a.clone(), u.clone());
    let branch = Arc::new(move |s: &RsTerm| {
        ind_step(&neg_c, &all_c, &n_c, s, &uu).unwrap_or_else(|_| stub())
    });
    let allnode = mk_all(all_f, Sequent::single(neg_a), claim, nat(0), branch);
    assemble_or(target, allnode, u)
}

/// The member of the family at s: ¬A, F(s) with length ⪯ ω^{rank A}#ω^{|s|+1}.
fn ind_step(
    neg_a: &Formula,
    all_f: &Formula,
    n_a: &OrdN,
    s: &RsTerm,
    u: &Universe,
) -> EResult {
    let f_s = term_child(all_f, s)?;
    let conj = term_child(neg_a, s)?;
    let ballpart = bit(&conj, 0)?;
    let s_rank = hf_rank(&ev_term(s, u)?);
    let base = natural_sum(n_a, &OrdN::omega_pow(s_rank.clone()));
    let (neg_c, all_c, n_c, ball_c, base_c, rank_c, uu) = (
        neg_a.clone(),
        all_f.clone(),
        n_a.clone(),
        ballpart.clone(),
        base.clone(),
        s_rank.clone(),
        u.clone(),
    );
    let branch = Arc::new(move |t: &RsTerm| {
        ind_guard(&neg_c, &all_c, &n_c, &ball_c, &base_c, &rank_c, t, &uu)
            .unwrap_or_else(|_| stub())
    });
    let ballnode = mk_ball(
        ballpart,
        Sequent::single(neg_a.clone()),
        base.add_nat(2),
        nat(0),
        branch,
    );
    let p0 = wkn(&Sequent::single(f_s.clone()), &ballnode)?;
    let p1 = wkn(&Sequent::single(neg_a.clone()), &lem(&f_s, u)?)?;
    let side = Sequent::from_vec(vec![neg_a.clone(), f_s]);
    let andnode = mk_and(conj, side.clone(), base.add_nat(3), nat(0), p0, p1);
    Ok(mk_ex(
        neg_a.clone(),
        s.clone(),
        side,
        natural_sum(n_a, &OrdN::omega_pow(s_rank.add_nat(1))),
        nat(0),
        andnode,
    ))
}

/// ¬A, t∈s → F(t): recursively for members, by a membership axiom above.
#[allow(clippy::too_many_arguments)]
fn ind_guard(
    neg_a: &Formula,
    all_f: &Formula,
    n_a: &OrdN,
    ballpart: &Formula,
    base: &OrdN,
    s_rank: &OrdN,
    t: &RsTerm,
    u: &Universe,
) -> EResult {
    let orf = term_child(ballpart, t)?;
    let t_rank = hf_rank(&ev_term(t, u)?);
    let side = Sequent::single(neg_a.clone());
    if compare(&t_rank, s_rank) == Cmp::Less {
        let inner = ind_step(neg_a, all_f, n_a, t, u)?;
        Ok(mk_or(true, orf, side, base.add_nat(1), nat(0), inner))
    } else {
        let non_member = bit(&orf, 0)?;
        let ax = Derivation::axiom(side.with(&non_member));
        Ok(mk_or(false, orf, side, base.add_nat(1), nat(0), ax))
    }
}

// ---------------------------------------------------------------------------
// The set-existence axioms.

/// One ∃-step over a true Δ0 instance at the canonical witness.
fn witnessed(principal: Formula, witness: RsTerm) -> EResult {
    let minor = term_child(&principal, &witness)?;
    let ax = Derivation::axiom(Sequent::single(minor));
    Ok(mk_ex(
        principal,
        witness,
        Sequent::empty(),
        nat(1),
        nat(0),
        ax,
    ))
}

/// Translate one instantiated axiom into a derivation of its formulas.
pub fn axiom_embed(inst: &AxiomInst, u: &Universe) -> EResult {
    match inst {
        AxiomInst::Logical { a } => lem(a, u),
        AxiomInst::Ext { s, t, v, b } => {
            let target = inst.formulas().remove(0);
            if target.is_delta0() {
                return Ok(Derivation::axiom(Sequent::single(target)));
            }
            let d = ext(
                b,
                std::slice::from_ref(v),
                std::slice::from_ref(s),
                std::slice::from_ref(t),
                u,
            )?;
            let inner = bit(&target, 0)?;
            let d1 = assemble_or(&inner, d, u)?;
            assemble_or(&target, d1, u)
        }
        AxiomInst::Ind { .. } => ind(&inst.formulas().remove(0), u),
        AxiomInst::Pair { s, t } => witnessed(
            inst.formulas().remove(0),
            RsTerm::Pair(Box::new(s.clone()), Box::new(t.clone())),
        ),
        AxiomInst::Union { s } => witnessed(
            inst.formulas().remove(0),
            RsTerm::Union(Box::new(s.clone())),
        ),
        AxiomInst::Infinity => witnessed(
            inst.formulas().remove(0),
            RsTerm::Const(crate::hfset::HFSet::Omega),
        ),
        AxiomInst::Sep { s, v, b } => witnessed(
            inst.formulas().remove(0),
            sep_term(s.clone(), v, b.clone()),
        ),
        AxiomInst::Col { .. } => {
            let target = inst.formulas().remove(0);
            let neg_lhs = bit(&target, 0)?;
            let rhs = bit(&target, 1)?;
            let lhs = neg_lhs.negate();
            if sigma_ref_principal(&lhs) != rhs {
                return Err(EmbedError::Schema(
                    "collection conclusion is not the reflection of its antecedent".into(),
                ));
            }
            let l = lem(&lhs, u)?;
            let alpha = l.length.clone();
            let sref = mk_sref(
                lhs,
                Sequent::single(neg_lhs),
                alpha.add_nat(1),
                nat(0),
                l,
            );
            assemble_or(&target, sref, u)
        }
    }
}

// ---------------------------------------------------------------------------
// The main translation.

fn subst_formula(f: &Formula, sigma: &[(String, RsTerm)], skip: &[&str]) -> Formula {
    let mut out = f.clone();
    for (n, t) in sigma {
        if !skip.contains(&n.as_str()) {
            out = out.subst_free(n, t);
        }
    }
    out
}

fn subst_term(t: &RsTerm, sigma: &[(String, RsTerm)]) -> RsTerm {
    let mut out = t.clone();
    for (n, s) in sigma {
        out = out.subst_free(n, s);
    }
    out
}

fn subst_inst(inst: &AxiomInst, sigma: &[(String, RsTerm)]) -> AxiomInst {
    match inst {
        AxiomInst::Logical { a } => AxiomInst::Logical {
            a: subst_formula(a, sigma, &[]),
        },
        AxiomInst::Ext { s, t, v, b } => AxiomInst::Ext {
            s: subst_term(s, sigma),
            t: subst_term(t, sigma),
            v: v.clone(),
            b: subst_formula(b, sigma, &[v]),
        },
        AxiomInst::Ind { v, f } => AxiomInst::Ind {
            v: v.clone(),
            f: subst_formula(f, sigma, &[v]),
        },
        AxiomInst::Pair { s, t } => AxiomInst::Pair {
            s: subst_term(s, sigma),
            t: subst_term(t, sigma),
        },
        AxiomInst::Union { s } => AxiomInst::Union {
            s: subst_term(s, sigma),
        },
        AxiomInst::Infinity => AxiomInst::Infinity,
        AxiomInst::Sep { s, v, b } => AxiomInst::Sep {
            s: subst_term(s, sigma),
            v: v.clone(),
            b: subst_formula(b, sigma, &[v]),
        },
        AxiomInst::Col { s, vx, vy, g } => AxiomInst::Col {
            s: subst_term(s, sigma),
            vx: vx.clone(),
            vy: vy.clone(),
            g: subst_formula(g, sigma, &[vx, vy]),
        },
    }
}

fn override_sigma(
    sigma: &[(String, RsTerm)],
    name: &str,
    t: &RsTerm,
) -> Vec<(String, RsTerm)> {
    let mut out: Vec<(String, RsTerm)> = sigma
        .iter()
        .filter(|(n, _)| n != name)
        .cloned()
        .collect();
    out.push((name.to_string(), t.clone()));
    out
}

/// Translate a checked finitary proof under a closed substitution for its
/// free variables; variables not covered default to c_∅.
pub fn embed_proof(p: &FinProof, subst: &[(String, RsTerm)], u: &Universe) -> EResult {
    let violations = check_fin(p);
    if let Some(v) = violations.first() {
        return Err(EmbedError::Invalid(v.to_string()));
    }
    for (n, t) in subst {
        if !t.is_closed() {
            return Err(EmbedError::Schema(format!("substitution for {n} is open")));
        }
    }
    let mut sigma: Vec<(String, RsTerm)> = subst.to_vec();
    for v in p.free_vars() {
        if !sigma.iter().any(|(n, _)| *n == v) {
            sigma.push((v, RsTerm::Const(crate::hfset::HFSet::empty())));
        }
    }
    embed_node(p, &sigma, u)
}

fn embed_node(p: &FinProof, sigma: &[(String, RsTerm)], u: &Universe) -> EResult {
    let mut gamma = Sequent::empty();
    for f in p.sequent.iter() {
        let g = subst_formula(f, sigma, &[]);
        if !g.is_closed() {
            return Err(EmbedError::Schema(format!(
                "substitution leaves {g} open"
            )));
        }
        gamma.insert(g);
    }
    match &p.rule {
        FinRule::Axiom(inst) => {
            let d = axiom_embed(&subst_inst(inst, sigma), u)?;
            Ok(wkn_to(&d, &gamma)?)
        }
        FinRule::AndR { principal } => {
            let pr = subst_formula(principal, sigma, &[]);
            let c0 = embed_premise(&p.children[0], sigma, u, &gamma, &bit(&pr, 0)?)?;
            let c1 = embed_premise(&p.children[1], sigma, u, &gamma, &bit(&pr, 1)?)?;
            let a = omax(c0.length.clone(), c1.length.clone()).add_nat(1);
            let r = omax(OrdN::Omega, omax(c0.rank.clone(), c1.rank.clone()));
            Ok(mk_and(pr, gamma, a, r, c0, c1))
        }
        FinRule::OrR { principal, right } => {
            let pr = subst_formula(principal, sigma, &[]);
            let minor = bit(&pr, *right as u8)?;
            let c = embed_premise(&p.children[0], sigma, u, &gamma, &minor)?;
            let a = c.length.add_nat(1);
            let r = omax(OrdN::Omega, c.rank.clone());
            Ok(mk_or(*right, pr, gamma, a, r, c))
        }
        FinRule::ExR { principal, witness } | FinRule::BExR { principal, witness } => {
            let pr = subst_formula(principal, sigma, &[]);
            let w = subst_term(witness, sigma);
            let minor = term_child(&pr, &w)?;
            let c = embed_premise(&p.children[0], sigma, u, &gamma, &minor)?;
            let a = c.length.add_nat(1);
            let r = omax(OrdN::Omega, c.rank.clone());
            Ok(match &p.rule {
                FinRule::ExR { .. } => mk_ex(pr, w, gamma, a, r, c),
                _ => mk_bex(pr, w, gamma, a, r, c),
            })
        }
        FinRule::Cut { formula } => {
            let f = subst_formula(formula, sigma, &[]);
            let c0 = embed_premise(&p.children[0], sigma, u, &gamma, &f)?;
            let c1 = embed_premise(&p.children[1], sigma, u, &gamma, &f.negate())?;
            let a = omax(c0.length.clone(), c1.length.clone()).add_nat(1);
            let rf = formula_rank(&f, u)?.add_nat(1);
            let r = omax(
                OrdN::Omega,
                omax(rf, omax(c0.rank.clone(), c1.rank.clone())),
            );
            Ok(mk_cut(f, gamma, a, r, c0, c1))
        }
        FinRule::AllR { principal, eigen } | FinRule::BAllR { principal, eigen } => {
            let pr = subst_formula(principal, sigma, &[]);
            let k = p.quantifier_rule_count() as u64;
            let a = omega_mul_left(&phi0_iterate(k, &OrdN::omega_small()));
            // The rank of the premise family is term-independent; probe it
            // at c_∅ and let the checker confirm the uniformity.
            let probe = embed_node(
                &p.children[0],
                &override_sigma(sigma, eigen, &RsTerm::Const(crate::hfset::HFSet::empty())),
                u,
            )?;
            let r = probe.rank.clone();
            let (child, eig, sig, gam, prc, uu) = (
                p.children[0].clone(),
                eigen.clone(),
                sigma.to_vec(),
                gamma.clone(),
                pr.clone(),
                u.clone(),
            );
            let branch = Arc::new(move |t: &RsTerm| {
                let res = (|| -> EResult {
                    let minor = term_child(&prc, t)?;
                    let inner =
                        embed_node(&child, &override_sigma(&sig, &eig, t), &uu)?;
                    Ok(wkn_to(&inner, &gam.with(&minor))?)
                })();
                res.unwrap_or_else(|_| stub())
            });
            Ok(match &p.rule {
                FinRule::AllR { .. } => mk_all(pr, gamma, a, r, branch),
                _ => mk_ball(pr, gamma, a, r, branch),
            })
        }
    }
}

fn embed_premise(
    c: &FinProof,
    sigma: &[(String, RsTerm)],
    u: &Universe,
    gamma: &Sequent,
    minor: &Formula,
) -> EResult {
    let inner = embed_node(c, sigma, u)?;
    Ok(wkn_to(&inner, &gamma.with(minor))?)
}

// ---------------------------------------------------------------------------
// Bound audits.

/// The finite part m of a rank of the shape Ω+m.
pub fn rank_excess(r: &OrdN) -> Option<u64> {
    for m in 0..=64 {
        if compare(r, &OrdN::Omega.add_nat(m)) == Cmp::Equal {
            return Some(m);
        }
    }
    None
}

/// Check the translation's recorded bounds against the advertised ones:
/// below Ω·ω^ω for an axiom, below Ω·φ₀^{k+1}(ω) for a proof with k
/// ∀-inferences, and rank of the shape Ω+m (rank 0 for axiom leaves is
/// reported as m = 0 here since the node is still a correct Ω+0 witness).
pub fn audit_bounds(p: &FinProof, d: &Derivation) -> Result<(), String> {
    let k = p.quantifier_rule_count() as u64;
    let bound = if matches!(p.rule, FinRule::Axiom(_)) {
        omega_mul_left(&phi0_iterate(1, &OrdN::omega_small()))
    } else {
        omega_mul_left(&phi0_iterate(k + 1, &OrdN::omega_small()))
    };
    if compare(&d.length, &bound) != Cmp::Less {
        return Err(format!(
            "length bound {} is not below {}",
            d.length, bound
        ));
    }
    let rank_ok = matches!(p.rule, FinRule::Axiom(_)) && d.rank.is_zero()
        || rank_excess(&d.rank).is_some();
    if !rank_ok {
        return Err(format!("rank {} does not have the shape W+m", d.rank));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfset::HFSet;
    use crate::kpcalc::corpus;
    use crate::rsderiv::{check_wf_bounded, default_battery, navigate, Step};
    use crate::syntax::{all_named, and, ball_named, cempty, comega, ex_named, fv, or, vr};

    fn universe() -> Universe {
        Universe::new(3, 4)
    }

    fn assert_wf(d: &Derivation, u: &Universe) {
        let battery = default_battery(2);
        let v = check_wf_bounded(d, u, &battery, 5);
        assert!(v.is_empty(), "violations: {:?}", v.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }

    #[test]
    fn lem_on_delta0_is_an_axiom() {
        let u = universe();
        let a = mem(cempty(), comega());
        let d = lem(&a, &u).unwrap();
        assert_eq!(d.end(), Sequent::from_vec(vec![a.clone(), a.negate()]));
        assert!(d.rank.is_zero());
        assert_wf(&d, &u);
    }

    #[test]
    fn lem_on_disjunction_splits() {
        let u = universe();
        let a = or(mem(cempty(), comega()), nmem(cempty(), comega()));
        let d = lem(&a, &u).unwrap();
        assert_eq!(d.end(), Sequent::from_vec(vec![a.clone(), a.negate()]));
        assert_wf(&d, &u);
    }

    #[test]
    fn lem_on_unbounded_quantifier_branches_lazily() {
        let u = universe();
        let a = crate::syntax::ex(mem(vr(0), comega()));
        crate::rsderiv::reset_branch_calls();
        let d = lem(&a, &u).unwrap();
        assert_eq!(crate::rsderiv::branch_calls(), 0);
        assert!(d.rank.is_zero());
        let child = navigate(&d, &[Step::Term(cempty())]).unwrap();
        assert!(child.end().contains(&a));
        assert_wf(&d, &u);
    }

    #[test]
    fn ext_on_delta0_schema() {
        let u = universe();
        let b = mem(fv("v"), RsTerm::Const(HFSet::singleton(HFSet::empty())));
        let d = ext(
            &b,
            &["v".into()],
            &[cempty()],
            &[cempty()],
            &u,
        )
        .unwrap();
        assert_wf(&d, &u);
    }

    #[test]
    fn ext_recurses_through_quantifiers() {
        let u = universe();
        // ∃x (x ∈ v): transfer from s to t along s≠t.
        let b = ex_named("x", mem(fv("x"), fv("v")));
        let s = cempty();
        let t = RsTerm::Const(HFSet::singleton(HFSet::empty()));
        let d = ext(&b, &["v".into()], &[s.clone()], &[t.clone()], &u).unwrap();
        let expect = Sequent::from_vec(vec![
            neq_shorthand(&s, &t),
            subst_many(&b, &["v".into()], &[s.clone()]).negate(),
            subst_many(&b, &["v".into()], &[t.clone()]),
        ]);
        assert_eq!(d.end(), expect);
        assert!(d.rank.is_zero());
        assert_wf(&d, &u);
    }

    #[test]
    fn ind_family_has_the_right_ends() {
        let u = universe();
        let inst = AxiomInst::Ind {
            v: "v".into(),
            f: mem(fv("v"), comega()),
        };
        let target = inst.formulas().remove(0);
        let d = ind(&target, &u).unwrap();
        assert_eq!(d.end(), Sequent::single(target.clone()));
        assert!(d.rank.is_zero());
        // Walk down the two ∨-steps to the ∀ and force one premise.
        let neg_a = bit(&target, 0).unwrap();
        let fam = navigate(
            &d,
            &[Step::Idx(0), Step::Idx(0), Step::Term(cempty())],
        )
        .unwrap();
        assert!(fam.end().contains(&neg_a));
        assert_wf(&d, &u);
    }

    #[test]
    fn axiom_translations_are_rank_zero_and_wf() {
        let u = universe();
        for (name, p) in corpus() {
            if let FinRule::Axiom(inst) = &p.rule {
                let mut sigma: Vec<(String, RsTerm)> = Vec::new();
                for v in p.free_vars() {
                    sigma.push((v, cempty()));
                }
                let d = axiom_embed(&subst_inst(inst, &sigma), &u).unwrap();
                assert!(d.rank.is_zero(), "{name} rank {}", d.rank);
                if name != "infinity" {
                    assert_wf(&d, &u);
                }
            }
        }
    }

    #[test]
    fn collection_translation_reflects() {
        let u = universe();
        let inst = AxiomInst::Col {
            s: cempty(),
            vx: "x".into(),
            vy: "y".into(),
            g: mem(fv("x"), fv("y")),
        };
        let d = axiom_embed(&inst, &u).unwrap();
        let has_sref = matches!(
            navigate(&d, &[Step::Idx(0), Step::Idx(0)]).unwrap().tag,
            crate::rsderiv::Tag::SigmaRef { .. }
        );
        assert!(has_sref);
        assert_wf(&d, &u);
    }

    #[test]
    fn embedding_covers_the_corpus_with_audited_bounds() {
        let u = universe();
        for (name, p) in corpus() {
            let d = embed_proof(&p, &[], &u).unwrap();
            let expect: Vec<Formula> = p
                .sequent
                .iter()
                .map(|f| {
                    let mut sigma = Vec::new();
                    for v in p.free_vars() {
                        sigma.push((v, cempty()));
                    }
                    subst_formula(f, &sigma, &[])
                })
                .collect();
            assert_eq!(d.end(), Sequent::from_vec(expect), "{name}");
            audit_bounds(&p, &d).unwrap_or_else(|e| panic!("{name}: {e}"));
            if name != "infinity" {
                assert_wf(&d, &u);
            }
        }
    }

    #[test]
    fn forall_embedding_is_lazy() {
        let u = universe();
        let p = corpus()
            .into_iter()
            .find(|(n, _)| *n == "forall")
            .unwrap()
            .1;
        crate::rsderiv::reset_branch_calls();
        let d = embed_proof(&p, &[], &u).unwrap();
        assert_eq!(crate::rsderiv::branch_calls(), 0);
        let c = navigate(&d, &[Step::Term(comega())]).unwrap();
        assert!(crate::rsderiv::branch_calls() >= 1);
        assert!(!c.end().is_empty());
    }

    #[test]
    fn cut_embedding_records_the_cut_rank() {
        let u = universe();
        let p = corpus().into_iter().find(|(n, _)| *n == "cut").unwrap().1;
        let d = embed_proof(&p, &[], &u).unwrap();
        assert_eq!(rank_excess(&d.rank), Some(2));
        assert_wf(&d, &u);
    }

    #[test]
    fn induction_axiom_schema_stays_in_sync() {
        // The translation discharges exactly the formula the axiom emits.
        let u = universe();
        let f = and(
            mem(fv("v"), comega()),
            ball_named("w", fv("v"), mem(fv("w"), comega())),
        );
        let inst = AxiomInst::Ind { v: "v".into(), f };
        let target = inst.formulas().remove(0);
        let d = ind(&target, &u).unwrap();
        assert_eq!(d.end(), Sequent::single(target));
    }

    #[test]
    fn free_variables_default_to_the_empty_set() {
        let u = universe();
        let p = FinProof::axiom(
            AxiomInst::Pair {
                s: fv("a"),
                t: fv("b"),
            },
            Sequent::empty(),
        );
        let d = embed_proof(&p, &[("a".into(), comega())], &u).unwrap();
        let f = d.end().iter().next().unwrap().clone();
        assert!(f.is_closed());
        assert!(format!("{f}").contains("omega"));
    }

    #[test]
    fn rank_excess_reads_omega_plus_m() {
        assert_eq!(rank_excess(&OrdN::Omega), Some(0));
        assert_eq!(rank_excess(&OrdN::Omega.add_nat(3)), Some(3));
        assert_eq!(rank_excess(&OrdN::Nat(5)), None);
        assert_eq!(
            rank_excess(&OrdN::omega_pow(OrdN::Omega.add_nat(1))),
            None
        );
    }

    #[test]
    fn sanity_all_named_roundtrip() {
        let f = all_named("x", mem(fv("x"), comega()));
        let inst = term_child(&f, &cempty()).unwrap();
        assert_eq!(inst, mem(cempty(), comega()));
    }
}
