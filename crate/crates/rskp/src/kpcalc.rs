//! The finitary one-sided sequent calculus: eight axiom schemas, seven
//! inference rules with an eigenvariable condition, a structural checker,
//! and a textual proof-file format.
//!
//! Sequents are finite sets read disjunctively.  A rule node stores its own
//! end sequent; the checker verifies that each child's sequent fits the rule
//! shape (for a one-premise rule, some side set Γ must give child = Γ,minor
//! and parent = Γ,principal).

use crate::syntax::{
    all_named, and, ball_named, bex_named, ex_named, fresh_name, fv, mem, neq_shorthand, or,
    Formula, ParseError, Parser, RsTerm, Sequent,
};
use std::fmt::Write as _;

/// An instantiated axiom schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomInst {
    /// Γ, A, ¬A for any formula A.
    Logical { a: Formula },
    /// Γ, s=t ∧ B(s) → B(t); `b` mentions the free variable `v`.
    Ext {
        s: RsTerm,
        t: RsTerm,
        v: String,
        b: Formula,
    },
    /// Γ, ∀x((∀y∈x)F(y) → F(x)) → ∀x F(x); `f` mentions `v`.
    Ind { v: String, f: Formula },
    /// Γ, ∃z(s∈z ∧ t∈z).
    Pair { s: RsTerm, t: RsTerm },
    /// Γ, ∃z(∀y∈s)(∀x∈y) x∈z.
    Union { s: RsTerm },
    /// Γ, ∃x((∃z∈x)z∈x ∧ (∀y∈x)(∃z∈x)y∈z).
    Infinity,
    /// Γ, ∃y((∀x∈y)(x∈s ∧ B(x)) ∧ (∀x∈s)(B(x) → x∈y)); B must be Δ0.
    Sep {
        s: RsTerm,
        v: String,
        b: Formula,
    },
    /// Γ, (∀x∈s)∃y G(x,y) → ∃z(∀x∈s)(∃y∈z)G(x,y); G must be Δ0.
    Col {
        s: RsTerm,
        vx: String,
        vy: String,
        g: Formula,
    },
}

/// A → B rendered in negation normal form.
fn implies(a: Formula, b: Formula) -> Formula {
    or(a.negate(), b)
}

impl AxiomInst {
    /// The formulas the axiom contributes to its end sequent.
    pub fn formulas(&self) -> Vec<Formula> {
        match self {
            AxiomInst::Logical { a } => vec![a.clone(), a.negate()],
            AxiomInst::Ext { s, t, v, b } => vec![or(
                or(neq_shorthand(s, t), b.subst_free(v, s).negate()),
                b.subst_free(v, t),
            )],
            AxiomInst::Ind { v, f } => {
                let w = fresh_name(&format!("{v}_"), &[f]);
                let prog = all_named(
                    v,
                    or(
                        bex_named(&w, fv(v), f.subst_free(v, &fv(&w)).negate()),
                        f.clone(),
                    ),
                );
                vec![implies(prog, all_named(v, f.clone()))]
            }
            AxiomInst::Pair { s, t } => {
                let guard = mem(s.clone(), t.clone());
                let z = fresh_name("z", &[&guard]);
                vec![ex_named(
                    &z,
                    and(mem(s.clone(), fv(&z)), mem(t.clone(), fv(&z))),
                )]
            }
            AxiomInst::Union { s } => {
                let guard = mem(s.clone(), s.clone());
                let z = fresh_name("z", &[&guard]);
                let y = fresh_name("y", &[&guard]);
                let x = fresh_name("x", &[&guard]);
                vec![ex_named(
                    &z,
                    ball_named(
                        &y,
                        s.clone(),
                        ball_named(&x, fv(&y), mem(fv(&x), fv(&z))),
                    ),
                )]
            }
            AxiomInst::Infinity => {
                let x = "x";
                let y = "y";
                let z = "z";
                vec![ex_named(
                    x,
                    and(
                        bex_named(z, fv(x), mem(fv(z), fv(x))),
                        ball_named(y, fv(x), bex_named(z, fv(x), mem(fv(y), fv(z)))),
                    ),
                )]
            }
            AxiomInst::Sep { s, v, b } => {
                let guard = mem(s.clone(), s.clone());
                let z = fresh_name("y", &[b, &guard]);
                vec![ex_named(
                    &z,
                    and(
                        ball_named(v, fv(&z), and(mem(fv(v), s.clone()), b.clone())),
                        ball_named(v, s.clone(), implies(b.clone(), mem(fv(v), fv(&z)))),
                    ),
                )]
            }
            AxiomInst::Col { s, vx, vy, g } => {
                let guard = mem(s.clone(), s.clone());
                let z = fresh_name("z", &[g, &guard]);
                let lhs = ball_named(vx, s.clone(), ex_named(vy, g.clone()));
                let rhs = ex_named(
                    &z,
                    ball_named(vx, s.clone(), bex_named(vy, fv(&z), g.clone())),
                );
                vec![implies(lhs, rhs)]
            }
        }
    }

    /// Instance-level side conditions (term shapes, Δ0 restrictions).
    fn validate(&self) -> Result<(), String> {
        let term_ok = |t: &RsTerm| -> Result<(), String> {
            if t.is_var_closed() {
                Ok(())
            } else {
                Err("axiom instance term has unbound indices".into())
            }
        };
        match self {
            AxiomInst::Logical { a } => {
                if a.is_var_closed() {
                    Ok(())
                } else {
                    Err("axiom formula has unbound indices".into())
                }
            }
            AxiomInst::Ext { s, t, b, .. } => {
                term_ok(s)?;
                term_ok(t)?;
                if b.is_var_closed() {
                    Ok(())
                } else {
                    Err("schema body has unbound indices".into())
                }
            }
            AxiomInst::Ind { f, .. } => {
                if f.is_var_closed() {
                    Ok(())
                } else {
                    Err("schema body has unbound indices".into())
                }
            }
            AxiomInst::Pair { s, t } => {
                term_ok(s)?;
                term_ok(t)
            }
            AxiomInst::Union { s } => term_ok(s),
            AxiomInst::Infinity => Ok(()),
            AxiomInst::Sep { s, b, .. } => {
                term_ok(s)?;
                if !b.is_var_closed() {
                    return Err("schema body has unbound indices".into());
                }
                if b.is_delta0() {
                    Ok(())
                } else {
                    Err("separation body must be Δ0".into())
                }
            }
            AxiomInst::Col { s, g, .. } => {
                term_ok(s)?;
                if !g.is_var_closed() {
                    return Err("schema body has unbound indices".into());
                }
                if g.is_delta0() {
                    Ok(())
                } else {
                    Err("collection body must be Δ0".into())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FinRule {
    Axiom(AxiomInst),
    /// From Γ,A and Γ,B infer Γ,A∧B.
    AndR { principal: Formula },
    /// From Γ,A_i infer Γ,A_0∨A_1.
    OrR { principal: Formula, right: bool },
    /// From Γ, a∈t → F(a) infer Γ, (∀x∈t)F(x); a fresh for the conclusion.
    BAllR { principal: Formula, eigen: String },
    /// From Γ, s∈t ∧ F(s) infer Γ, (∃x∈t)F(x).
    BExR { principal: Formula, witness: RsTerm },
    /// From Γ, F(a) infer Γ, ∀x F(x); a fresh for the conclusion.
    AllR { principal: Formula, eigen: String },
    /// From Γ, F(s) infer Γ, ∃x F(x).
    ExR { principal: Formula, witness: RsTerm },
    /// From Γ,A and Γ,¬A infer Γ.
    Cut { formula: Formula },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinProof {
    pub rule: FinRule,
    pub sequent: Sequent,
    pub children: Vec<FinProof>,
}

impl FinRule {
    /// The minor formula each premise must carry, or None when the rule
    /// shape is broken.
    pub fn minors(&self) -> Option<Vec<Formula>> {
        match self {
            FinRule::Axiom(_) => Some(vec![]),
            FinRule::AndR { principal } => match principal {
                Formula::And(l, r) => Some(vec![(**l).clone(), (**r).clone()]),
                _ => None,
            },
            FinRule::OrR { principal, right } => match principal {
                Formula::Or(l, r) => Some(vec![if *right {
                    (**r).clone()
                } else {
                    (**l).clone()
                }]),
                _ => None,
            },
            FinRule::BAllR { principal, eigen } => match principal {
                Formula::BAll { bound, body } => Some(vec![or(
                    crate::syntax::nmem(fv(eigen), bound.clone()),
                    body.instantiate(&fv(eigen)),
                )]),
                _ => None,
            },
            FinRule::BExR { principal, witness } => match principal {
                Formula::BEx { bound, body } => Some(vec![and(
                    mem(witness.clone(), bound.clone()),
                    body.instantiate(witness),
                )]),
                _ => None,
            },
            FinRule::AllR { principal, eigen } => match principal {
                Formula::All(body) => Some(vec![body.instantiate(&fv(eigen))]),
                _ => None,
            },
            FinRule::ExR { principal, witness } => match principal {
                Formula::Ex(body) => Some(vec![body.instantiate(witness)]),
                _ => None,
            },
            FinRule::Cut { formula } => Some(vec![formula.clone(), formula.negate()]),
        }
    }

    pub fn principal(&self) -> Option<&Formula> {
        match self {
            FinRule::Axiom(_) | FinRule::Cut { .. } => None,
            FinRule::AndR { principal }
            | FinRule::OrR { principal, .. }
            | FinRule::BAllR { principal, .. }
            | FinRule::BExR { principal, .. }
            | FinRule::AllR { principal, .. }
            | FinRule::ExR { principal, .. } => Some(principal),
        }
    }
}

impl FinProof {
    pub fn axiom(inst: AxiomInst, side: Sequent) -> FinProof {
        let mut sequent = side;
        for f in inst.formulas() {
            sequent.insert(f);
        }
        FinProof {
            rule: FinRule::Axiom(inst),
            sequent,
            children: vec![],
        }
    }

    fn one(rule: FinRule, child: FinProof) -> FinProof {
        let minors = rule.minors().expect("rule shape");
        let principal = rule.principal().expect("has principal").clone();
        let sequent = child.sequent.without(&minors[0]).with(&principal);
        FinProof {
            rule,
            sequent,
            children: vec![child],
        }
    }

    pub fn and_r(principal: Formula, c0: FinProof, c1: FinProof) -> FinProof {
        let rule = FinRule::AndR {
            principal: principal.clone(),
        };
        let minors = rule.minors().expect("rule shape");
        let sequent = c0
            .sequent
            .without(&minors[0])
            .union(&c1.sequent.without(&minors[1]))
            .with(&principal);
        FinProof {
            rule,
            sequent,
            children: vec![c0, c1],
        }
    }

    pub fn or_r(right: bool, principal: Formula, c: FinProof) -> FinProof {
        FinProof::one(FinRule::OrR { principal, right }, c)
    }

    pub fn ball_r(principal: Formula, eigen: &str, c: FinProof) -> FinProof {
        FinProof::one(
            FinRule::BAllR {
                principal,
                eigen: eigen.to_string(),
            },
            c,
        )
    }

    pub fn bex_r(principal: Formula, witness: RsTerm, c: FinProof) -> FinProof {
        FinProof::one(FinRule::BExR { principal, witness }, c)
    }

    pub fn all_r(principal: Formula, eigen: &str, c: FinProof) -> FinProof {
        FinProof::one(
            FinRule::AllR {
                principal,
                eigen: eigen.to_string(),
            },
            c,
        )
    }

    pub fn ex_r(principal: Formula, witness: RsTerm, c: FinProof) -> FinProof {
        FinProof::one(FinRule::ExR { principal, witness }, c)
    }

    pub fn cut(formula: Formula, c0: FinProof, c1: FinProof) -> FinProof {
        let sequent = c0.sequent.without(&formula);
        FinProof {
            rule: FinRule::Cut { formula },
            sequent,
            children: vec![c0, c1],
        }
    }

    /// Number of ∀ and (∀∈) inferences in the tree.
    pub fn quantifier_rule_count(&self) -> usize {
        let here = matches!(
            self.rule,
            FinRule::BAllR { .. } | FinRule::AllR { .. }
        ) as usize;
        here + self
            .children
            .iter()
            .map(FinProof::quantifier_rule_count)
            .sum::<usize>()
    }

    /// Largest rank (Ω+n shape) among cut formulas decides how many rounds
    /// of cut elimination the embedded derivation needs; collect the cut
    /// formulas here.
    pub fn cut_formulas(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.collect_cuts(&mut out);
        out
    }

    fn collect_cuts(&self, out: &mut Vec<Formula>) {
        if let FinRule::Cut { formula } = &self.rule {
            if !out.contains(formula) {
                out.push(formula.clone());
            }
        }
        for c in &self.children {
            c.collect_cuts(out);
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_frees(&mut out);
        out
    }

    fn collect_frees(&self, out: &mut Vec<String>) {
        for f in self.sequent.iter() {
            for n in f.free_vars() {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
        for c in &self.children {
            c.collect_frees(out);
        }
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    /// Path of child indices from the root.
    pub address: Vec<usize>,
    pub msg: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at ")?;
        if self.address.is_empty() {
            write!(f, "root")?;
        } else {
            for (i, a) in self.address.iter().enumerate() {
                if i > 0 {
                    write!(f, ".")?;
                }
                write!(f, "{a}")?;
            }
        }
        write!(f, ": {}", self.msg)
    }
}

/// Check the whole proof tree; an empty report means the proof is correct.
pub fn check_fin(p: &FinProof) -> Vec<Violation> {
    let mut out = Vec::new();
    check_node(p, &mut Vec::new(), &mut out);
    out
}

fn push(out: &mut Vec<Violation>, address: &[usize], msg: String) {
    out.push(Violation {
        address: address.to_vec(),
        msg,
    });
}

fn check_node(p: &FinProof, address: &mut Vec<usize>, out: &mut Vec<Violation>) {
    for f in p.sequent.iter() {
        if !f.is_var_closed() {
            push(out, address, format!("sequent formula has unbound indices: {f}"));
        }
    }

    let arity = match p.rule {
        FinRule::Axiom(_) => 0,
        FinRule::AndR { .. } | FinRule::Cut { .. } => 2,
        _ => 1,
    };
    if p.children.len() != arity {
        push(
            out,
            address,
            format!("expected {arity} premises, found {}", p.children.len()),
        );
        return;
    }

    match &p.rule {
        FinRule::Axiom(inst) => {
            if let Err(e) = inst.validate() {
                push(out, address, e);
            } else {
                for f in inst.formulas() {
                    if !p.sequent.contains(&f) {
                        push(out, address, format!("axiom formula missing from sequent: {f}"));
                    }
                }
            }
        }
        FinRule::Cut { formula } => {
            let want0 = p.sequent.with(formula);
            let want1 = p.sequent.with(&formula.negate());
            if p.children[0].sequent != want0 {
                push(out, address, "left premise must be the conclusion plus the cut formula".into());
            }
            if p.children[1].sequent != want1 {
                push(out, address, "right premise must be the conclusion plus the negated cut formula".into());
            }
        }
        rule => match rule.minors() {
            None => push(out, address, "principal formula has the wrong shape for the rule".into()),
            Some(minors) => {
                let principal = rule.principal().expect("has principal");
                if !p.sequent.contains(principal) {
                    push(out, address, format!("principal formula missing from conclusion: {principal}"));
                }
                for (i, minor) in minors.iter().enumerate() {
                    let child = &p.children[i];
                    if !child.sequent.contains(minor) {
                        push(out, address, format!("premise {i} is missing its minor formula: {minor}"));
                    }
                    if !child.sequent.without(minor).is_subset(&p.sequent) {
                        push(out, address, format!("premise {i} carries side formulas absent from the conclusion"));
                    }
                    if !p.sequent.without(principal).is_subset(&child.sequent) {
                        push(out, address, format!("premise {i} drops side formulas of the conclusion"));
                    }
                }
                if let FinRule::BAllR { eigen, .. } | FinRule::AllR { eigen, .. } = rule {
                    let mut lower = Vec::new();
                    for f in p.sequent.iter() {
                        lower.extend(f.free_vars());
                    }
                    if lower.contains(eigen) {
                        push(out, address, format!("eigenvariable {eigen} occurs in the conclusion"));
                    }
                }
                if let FinRule::BExR { witness, .. } | FinRule::ExR { witness, .. } = rule {
                    if !witness.is_var_closed() {
                        push(out, address, "witness term has unbound indices".into());
                    }
                }
            }
        },
    }

    for (i, c) in p.children.iter().enumerate() {
        address.push(i);
        check_node(c, address, out);
        address.pop();
    }
}

// ---------------------------------------------------------------------------
// Proof files.

pub fn write_proof(p: &FinProof) -> String {
    let mut s = String::new();
    write_node(p, 0, &mut s);
    s.push('\n');
    s
}

fn indent(s: &mut String, depth: usize) {
    for _ in 0..depth {
        s.push_str("  ");
    }
}

fn write_node(p: &FinProof, depth: usize, s: &mut String) {
    indent(s, depth);
    let head: String = match &p.rule {
        FinRule::Axiom(inst) => {
            let body = match inst {
                AxiomInst::Logical { a } => format!("(logical {a})"),
                AxiomInst::Ext { s, t, v, b } => format!("(ext {s} {t} {v} {b})"),
                AxiomInst::Ind { v, f } => format!("(ind {v} {f})"),
                AxiomInst::Pair { s, t } => format!("(pair {s} {t})"),
                AxiomInst::Union { s } => format!("(union {s})"),
                AxiomInst::Infinity => "(infinity)".to_string(),
                AxiomInst::Sep { s, v, b } => format!("(sep {s} {v} {b})"),
                AxiomInst::Col { s, vx, vy, g } => format!("(col {s} {vx} {vy} {g})"),
            };
            format!("(axiom {body}")
        }
        FinRule::AndR { principal } => format!("(and {principal}"),
        FinRule::OrR { principal, right } => {
            format!("({} {principal}", if *right { "or1" } else { "or0" })
        }
        FinRule::BAllR { principal, eigen } => format!("(ball {principal} {eigen}"),
        FinRule::BExR { principal, witness } => format!("(bex {principal} {witness}"),
        FinRule::AllR { principal, eigen } => format!("(all {principal} {eigen}"),
        FinRule::ExR { principal, witness } => format!("(ex {principal} {witness}"),
        FinRule::Cut { formula } => format!("(cut {formula}"),
    };
    s.push_str(&head);
    s.push(' ');
    let _ = write!(s, "(seq");
    for f in p.sequent.iter() {
        let _ = write!(s, " {f}");
    }
    s.push(')');
    if p.children.is_empty() {
        s.push(')');
        return;
    }
    for c in &p.children {
        s.push('\n');
        write_node(c, depth + 1, s);
    }
    s.push(')');
}

pub fn parse_proof(text: &str) -> Result<FinProof, ParseError> {
    let mut p = Parser::new(text);
    let proof = node(&mut p)?;
    p.finish()?;
    Ok(proof)
}

fn sequent(p: &mut Parser) -> Result<Sequent, ParseError> {
    p.expect(b'(')?;
    let head = p.ident()?;
    if head != "seq" {
        return p.err("expected (seq …)");
    }
    let mut s = Sequent::empty();
    while p.peek() != Some(b')') {
        s.insert(p.formula()?);
    }
    p.expect(b')')?;
    Ok(s)
}

fn node(p: &mut Parser) -> Result<FinProof, ParseError> {
    p.expect(b'(')?;
    let head = p.ident()?;
    let rule = match head.as_str() {
        "axiom" => {
            p.expect(b'(')?;
            let schema = p.ident()?;
            let inst = match schema.as_str() {
                "logical" => AxiomInst::Logical { a: p.formula()? },
                "ext" => {
                    let s = p.term()?;
                    let t = p.term()?;
                    let v = p.ident()?;
                    let b = p.formula()?;
                    AxiomInst::Ext { s, t, v, b }
                }
                "ind" => {
                    let v = p.ident()?;
                    let f = p.formula()?;
                    AxiomInst::Ind { v, f }
                }
                "pair" => {
                    let s = p.term()?;
                    let t = p.term()?;
                    AxiomInst::Pair { s, t }
                }
                "union" => AxiomInst::Union { s: p.term()? },
                "infinity" => AxiomInst::Infinity,
                "sep" => {
                    let s = p.term()?;
                    let v = p.ident()?;
                    let b = p.formula()?;
                    AxiomInst::Sep { s, v, b }
                }
                "col" => {
                    let s = p.term()?;
                    let vx = p.ident()?;
                    let vy = p.ident()?;
                    let g = p.formula()?;
                    AxiomInst::Col { s, vx, vy, g }
                }
                other => return p.err(&format!("unknown axiom schema '{other}'")),
            };
            p.expect(b')')?;
            FinRule::Axiom(inst)
        }
        "and" => FinRule::AndR { principal: p.formula()? },
        "or0" | "or1" => FinRule::OrR {
            principal: p.formula()?,
            right: head == "or1",
        },
        "ball" => {
            let principal = p.formula()?;
            let eigen = p.ident()?;
            FinRule::BAllR { principal, eigen }
        }
        "bex" => {
            let principal = p.formula()?;
            let witness = p.term()?;
            FinRule::BExR { principal, witness }
        }
        "all" => {
            let principal = p.formula()?;
            let eigen = p.ident()?;
            FinRule::AllR { principal, eigen }
        }
        "ex" => {
            let principal = p.formula()?;
            let witness = p.term()?;
            FinRule::ExR { principal, witness }
        }
        "cut" => FinRule::Cut { formula: p.formula()? },
        other => return p.err(&format!("unknown proof node '{other}'")),
    };
    let seq = sequent(p)?;
    let mut children = Vec::new();
    while p.peek() == Some(b'(') {
        children.push(node(p)?);
    }
    p.expect(b')')?;
    Ok(FinProof {
        rule,
        sequent: seq,
        children,
    })
}

// ---------------------------------------------------------------------------
// The bundled proofs.

use crate::hfset::HFSet;
use crate::syntax::{all, ball, cempty, comega, ex, nmem, vr};

fn c_single() -> RsTerm {
    RsTerm::Const(HFSet::singleton(HFSet::empty()))
}

fn c_two() -> RsTerm {
    RsTerm::Const(HFSet::fin(vec![
        HFSet::empty(),
        HFSet::singleton(HFSet::empty()),
    ]))
}

/// Names and proofs of the bundled corpus; every entry passes `check_fin`.
pub fn corpus() -> Vec<(&'static str, FinProof)> {
    let mut out: Vec<(&'static str, FinProof)> = Vec::new();

    // Pure axiom instances, with closed terms so their conclusions can be
    // audited semantically.
    out.push((
        "pair",
        FinProof::axiom(
            AxiomInst::Pair {
                s: cempty(),
                t: c_single(),
            },
            Sequent::empty(),
        ),
    ));
    out.push((
        "union",
        FinProof::axiom(
            AxiomInst::Union {
                s: RsTerm::Const(HFSet::singleton(HFSet::singleton(HFSet::empty()))),
            },
            Sequent::empty(),
        ),
    ));
    out.push(("infinity", FinProof::axiom(AxiomInst::Infinity, Sequent::empty())));
    out.push((
        "sep",
        FinProof::axiom(
            AxiomInst::Sep {
                s: c_two(),
                v: "x".into(),
                b: mem(fv("x"), c_single()),
            },
            Sequent::empty(),
        ),
    ));
    out.push((
        "col",
        FinProof::axiom(
            AxiomInst::Col {
                s: c_single(),
                vx: "x".into(),
                vy: "y".into(),
                g: mem(fv("x"), fv("y")),
            },
            Sequent::empty(),
        ),
    ));
    out.push((
        "ext",
        FinProof::axiom(
            AxiomInst::Ext {
                s: cempty(),
                t: cempty(),
                v: "v".into(),
                b: mem(fv("v"), c_single()),
            },
            Sequent::empty(),
        ),
    ));
    out.push((
        "induction",
        FinProof::axiom(
            AxiomInst::Ind {
                v: "v".into(),
                f: mem(fv("v"), cempty()),
            },
            Sequent::empty(),
        ),
    ));
    out.push((
        "logical",
        FinProof::axiom(
            AxiomInst::Logical {
                a: ex(mem(vr(0), comega())),
            },
            Sequent::empty(),
        ),
    ));

    // A cut on ∃y T where T = ∃z(∅∈z ∧ {∅}∈z); the bound variable y is
    // vacuous, so both premises are short.
    {
        let t_ax = AxiomInst::Pair {
            s: cempty(),
            t: c_single(),
        };
        let t = t_ax.formulas()[0].clone();
        let a = ex(t.clone());
        let left = FinProof::axiom(t_ax, Sequent::single(a.clone()));
        let not_t_seq = Sequent::from_vec(vec![t.clone(), t.negate()]);
        let log = FinProof::axiom(AxiomInst::Logical { a: t.clone() }, Sequent::empty());
        debug_assert_eq!(log.sequent, not_t_seq);
        let right = FinProof::all_r(a.negate(), "u", log);
        out.push(("cut", FinProof::cut(a, left, right)));
    }

    // ∀y(y∈ω ∨ y∉ω) through the law of excluded middle at an eigenvariable.
    {
        let d = |t: RsTerm| or(mem(t.clone(), comega()), nmem(t, comega()));
        let goal = all(or(mem(vr(0), comega()), nmem(vr(0), comega())));
        let ax = FinProof::axiom(
            AxiomInst::Logical {
                a: mem(fv("c"), comega()),
            },
            Sequent::empty(),
        );
        let step1 = FinProof::or_r(false, d(fv("c")), ax);
        let step2 = FinProof::or_r(true, d(fv("c")), step1);
        out.push(("forall", FinProof::all_r(goal, "c", step2)));
    }

    // ∃x(x∈ω ∨ x∉ω) with the explicit witness ∅.
    {
        let d = |t: RsTerm| or(mem(t.clone(), comega()), nmem(t, comega()));
        let goal = ex(or(mem(vr(0), comega()), nmem(vr(0), comega())));
        let ax = FinProof::axiom(
            AxiomInst::Logical {
                a: mem(cempty(), comega()),
            },
            Sequent::empty(),
        );
        let step1 = FinProof::or_r(false, d(cempty()), ax);
        let step2 = FinProof::or_r(true, d(cempty()), step1);
        out.push(("exists", FinProof::ex_r(goal, cempty(), step2)));
    }

    // (∀x∈{∅})(x∈{∅} ∨ x∉{∅}) through a bounded universal inference.
    {
        let t = c_single();
        let d = |s: RsTerm| or(mem(s.clone(), t.clone()), nmem(s, t.clone()));
        let goal = ball(t.clone(), or(mem(vr(0), t.clone()), nmem(vr(0), t.clone())));
        let minor = or(nmem(fv("c"), t.clone()), d(fv("c")));
        let ax = FinProof::axiom(
            AxiomInst::Logical {
                a: mem(fv("c"), t.clone()),
            },
            Sequent::empty(),
        );
        let s1 = FinProof::or_r(false, d(fv("c")), ax);
        let s2 = FinProof::or_r(true, d(fv("c")), s1);
        let s3 = FinProof::or_r(true, minor, s2);
        out.push(("bounded_forall", FinProof::ball_r(goal, "c", s3)));
    }

    // (∃x∈ω)x∈ω from a logical axiom on the conjunctive instance.
    {
        let m = mem(cempty(), comega());
        let conj = and(m.clone(), m.clone());
        let goal = crate::syntax::bex(comega(), mem(vr(0), comega()));
        let ax = FinProof::axiom(AxiomInst::Logical { a: conj.clone() }, Sequent::empty());
        out.push(("bounded_exists", FinProof::bex_r(goal, cempty(), ax)));
    }

    // A two-premise conjunction of excluded-middle disjuncts.
    {
        let d = or(mem(cempty(), comega()), nmem(cempty(), comega()));
        let mk = || {
            let ax = FinProof::axiom(
                AxiomInst::Logical {
                    a: mem(cempty(), comega()),
                },
                Sequent::empty(),
            );
            let s1 = FinProof::or_r(false, d.clone(), ax);
            FinProof::or_r(true, d.clone(), s1)
        };
        out.push(("conj", FinProof::and_r(and(d.clone(), d.clone()), mk(), mk())));
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_checks() {
        for (name, p) in corpus() {
            let report = check_fin(&p);
            assert!(
                report.is_empty(),
                "proof {name} failed: {}",
                report
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            );
        }
    }

    #[test]
    fn corpus_round_trips() {
        for (name, p) in corpus() {
            let text = write_proof(&p);
            let again = parse_proof(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(p, again, "round trip failed for {name}");
        }
    }

    #[test]
    fn axiom_shapes() {
        let pair = AxiomInst::Pair {
            s: fv("a"),
            t: fv("b"),
        };
        let f = &pair.formulas()[0];
        assert_eq!(f, &ex(and(mem(fv("a"), vr(0)), mem(fv("b"), vr(0)))));

        let inf = AxiomInst::Infinity.formulas()[0].clone();
        assert!(inf.is_closed());

        let ind = AxiomInst::Ind {
            v: "v".into(),
            f: mem(fv("v"), cempty()),
        };
        let g = &ind.formulas()[0];
        assert!(g.is_var_closed());
        assert!(g.free_vars().is_empty());
    }

    #[test]
    fn eigenvariable_violations_are_caught() {
        // ∀-inference whose eigenvariable leaks into the conclusion.
        let goal = all(mem(vr(0), fv("c")));
        let ax = FinProof::axiom(
            AxiomInst::Logical {
                a: mem(fv("c"), fv("c")),
            },
            Sequent::empty(),
        );
        // minor = c ∈ c, conclusion keeps the name c via the constant spine
        let bad = FinProof::all_r(goal, "c", ax);
        assert!(!check_fin(&bad).is_empty());
    }

    #[test]
    fn broken_cut_is_caught() {
        let a = mem(cempty(), comega());
        let left = FinProof::axiom(AxiomInst::Logical { a: a.clone() }, Sequent::empty());
        let right = FinProof::axiom(AxiomInst::Logical { a: a.clone() }, Sequent::empty());
        // both premises end {A, ¬A}; the conclusion of a cut on A would need
        // them to differ
        let bad = FinProof {
            rule: FinRule::Cut { formula: a },
            sequent: Sequent::empty(),
            children: vec![left, right],
        };
        assert!(!check_fin(&bad).is_empty());
    }

    #[test]
    fn missing_minor_is_caught() {
        let d = or(mem(cempty(), comega()), nmem(cempty(), comega()));
        let ax = FinProof::axiom(
            AxiomInst::Logical {
                a: mem(cempty(), cempty()),
            },
            Sequent::empty(),
        );
        let bad = FinProof {
            rule: FinRule::OrR {
                principal: d.clone(),
                right: false,
            },
            sequent: Sequent::single(d),
            children: vec![ax],
        };
        assert!(!check_fin(&bad).is_empty());
    }

    #[test]
    fn quantifier_counting() {
        let m: std::collections::BTreeMap<_, _> = corpus().into_iter().collect();
        assert_eq!(m["forall"].quantifier_rule_count(), 1);
        assert_eq!(m["pair"].quantifier_rule_count(), 0);
        assert_eq!(m["cut"].quantifier_rule_count(), 1);
    }
}
