//! Terms and negation-normal formulas of the infinitary system, with rank,
//! the ⋀/⋁ decomposition, relativization, and the textual S-expression
//! front end.
//!
//! Quantifiers and comprehension bind de Bruijn index 0 in their body; free
//! variables (used only by the finitary calculus) are named.  A formula is
//! closed when it has neither free variables nor unbound indices.

use crate::hfset::{ev_term, hf_rank, EvalError, HFSet, Universe};
use crate::ord::{compare, Cmp, Ord as OrdN};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RsTerm {
    Const(HFSet),
    /// Bound variable, de Bruijn style.
    Var(usize),
    /// Free variable of the finitary calculus.
    Free(String),
    Pair(Box<RsTerm>, Box<RsTerm>),
    Union(Box<RsTerm>),
    /// {x ∈ base | matrix(x, …)}; the matrix binds index 0 and must be Δ0.
    Sep {
        base: Box<RsTerm>,
        matrix: Box<Formula>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Mem { pos: bool, l: RsTerm, r: RsTerm },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// (∀x∈bound) body; binds index 0 in body.
    BAll { bound: RsTerm, body: Box<Formula> },
    /// (∃x∈bound) body; binds index 0 in body.
    BEx { bound: RsTerm, body: Box<Formula> },
    /// ∀x body; binds index 0 in body.
    All(Box<Formula>),
    /// ∃x body; binds index 0 in body.
    Ex(Box<Formula>),
}

pub fn mem(l: RsTerm, r: RsTerm) -> Formula {
    Formula::Mem { pos: true, l, r }
}
pub fn nmem(l: RsTerm, r: RsTerm) -> Formula {
    Formula::Mem { pos: false, l, r }
}
pub fn and(l: Formula, r: Formula) -> Formula {
    Formula::And(Box::new(l), Box::new(r))
}
pub fn or(l: Formula, r: Formula) -> Formula {
    Formula::Or(Box::new(l), Box::new(r))
}
pub fn ball(bound: RsTerm, body: Formula) -> Formula {
    Formula::BAll {
        bound,
        body: Box::new(body),
    }
}
pub fn bex(bound: RsTerm, body: Formula) -> Formula {
    Formula::BEx {
        bound,
        body: Box::new(body),
    }
}
pub fn all(body: Formula) -> Formula {
    Formula::All(Box::new(body))
}
pub fn ex(body: Formula) -> Formula {
    Formula::Ex(Box::new(body))
}
pub fn cempty() -> RsTerm {
    RsTerm::Const(HFSet::empty())
}
pub fn comega() -> RsTerm {
    RsTerm::Const(HFSet::Omega)
}
pub fn vr(i: usize) -> RsTerm {
    RsTerm::Var(i)
}
pub fn fv(name: &str) -> RsTerm {
    RsTerm::Free(name.to_string())
}

/// s = t as the shorthand (∀x∈s)x∈t ∧ (∀x∈t)x∈s.
pub fn eq_shorthand(s: &RsTerm, t: &RsTerm) -> Formula {
    and(
        ball(s.clone(), mem(vr(0), t.shifted())),
        ball(t.clone(), mem(vr(0), s.shifted())),
    )
}

/// s ≠ t, the De Morgan dual of the shorthand.
pub fn neq_shorthand(s: &RsTerm, t: &RsTerm) -> Formula {
    eq_shorthand(s, t).negate()
}

impl RsTerm {
    /// Shift unbound de Bruijn indices up by one (entering a binder).
    pub fn shifted(&self) -> RsTerm {
        self.shift(1, 0)
    }

    fn shift(&self, d: usize, cutoff: usize) -> RsTerm {
        match self {
            RsTerm::Var(i) => {
                if *i >= cutoff {
                    RsTerm::Var(i + d)
                } else {
                    RsTerm::Var(*i)
                }
            }
            RsTerm::Const(_) | RsTerm::Free(_) => self.clone(),
            RsTerm::Pair(a, b) => {
                RsTerm::Pair(Box::new(a.shift(d, cutoff)), Box::new(b.shift(d, cutoff)))
            }
            RsTerm::Union(a) => RsTerm::Union(Box::new(a.shift(d, cutoff))),
            RsTerm::Sep { base, matrix } => RsTerm::Sep {
                base: Box::new(base.shift(d, cutoff)),
                matrix: Box::new(matrix.shift(d, cutoff + 1)),
            },
        }
    }

    /// Substitute the closed term t for index j; indices above j drop by one.
    fn subst(&self, j: usize, t: &RsTerm) -> RsTerm {
        match self {
            RsTerm::Var(i) => {
                if *i == j {
                    t.clone()
                } else if *i > j {
                    RsTerm::Var(i - 1)
                } else {
                    RsTerm::Var(*i)
                }
            }
            RsTerm::Const(_) | RsTerm::Free(_) => self.clone(),
            RsTerm::Pair(a, b) => {
                RsTerm::Pair(Box::new(a.subst(j, t)), Box::new(b.subst(j, t)))
            }
            RsTerm::Union(a) => RsTerm::Union(Box::new(a.subst(j, t))),
            RsTerm::Sep { base, matrix } => RsTerm::Sep {
                base: Box::new(base.subst(j, t)),
                matrix: Box::new(matrix.subst(j + 1, t)),
            },
        }
    }

    /// Substitute a closed term for a named free variable.
    pub fn subst_free(&self, name: &str, t: &RsTerm) -> RsTerm {
        match self {
            RsTerm::Free(n) if n == name => t.clone(),
            RsTerm::Const(_) | RsTerm::Var(_) | RsTerm::Free(_) => self.clone(),
            RsTerm::Pair(a, b) => RsTerm::Pair(
                Box::new(a.subst_free(name, t)),
                Box::new(b.subst_free(name, t)),
            ),
            RsTerm::Union(a) => RsTerm::Union(Box::new(a.subst_free(name, t))),
            RsTerm::Sep { base, matrix } => RsTerm::Sep {
                base: Box::new(base.subst_free(name, t)),
                matrix: Box::new(matrix.subst_free(name, t)),
            },
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closed_at(0)
    }

    /// No unbound de Bruijn indices (named free variables allowed): the shape
    /// of finitary terms, safe to substitute under binders.
    pub fn is_var_closed(&self) -> bool {
        self.var_closed_at(0)
    }

    fn var_closed_at(&self, depth: usize) -> bool {
        match self {
            RsTerm::Const(_) | RsTerm::Free(_) => true,
            RsTerm::Var(i) => *i < depth,
            RsTerm::Pair(a, b) => a.var_closed_at(depth) && b.var_closed_at(depth),
            RsTerm::Union(a) => a.var_closed_at(depth),
            RsTerm::Sep { base, matrix } => {
                base.var_closed_at(depth) && matrix.var_closed_at(depth + 1)
            }
        }
    }

    fn closed_at(&self, depth: usize) -> bool {
        match self {
            RsTerm::Const(_) => true,
            RsTerm::Var(i) => *i < depth,
            RsTerm::Free(_) => false,
            RsTerm::Pair(a, b) => a.closed_at(depth) && b.closed_at(depth),
            RsTerm::Union(a) => a.closed_at(depth),
            RsTerm::Sep { base, matrix } => {
                base.closed_at(depth) && matrix.closed_at(depth + 1)
            }
        }
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            RsTerm::Free(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            RsTerm::Const(_) | RsTerm::Var(_) => {}
            RsTerm::Pair(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            RsTerm::Union(a) => a.free_vars(out),
            RsTerm::Sep { base, matrix } => {
                base.free_vars(out);
                matrix.collect_free(out);
            }
        }
    }
}

impl Formula {
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Mem { pos, l, r } => Formula::Mem {
                pos: !pos,
                l: l.clone(),
                r: r.clone(),
            },
            Formula::And(l, r) => or(l.negate(), r.negate()),
            Formula::Or(l, r) => and(l.negate(), r.negate()),
            Formula::BAll { bound, body } => bex(bound.clone(), body.negate()),
            Formula::BEx { bound, body } => ball(bound.clone(), body.negate()),
            Formula::All(body) => ex(body.negate()),
            Formula::Ex(body) => all(body.negate()),
        }
    }

    fn shift(&self, d: usize, cutoff: usize) -> Formula {
        match self {
            Formula::Mem { pos, l, r } => Formula::Mem {
                pos: *pos,
                l: l.shift(d, cutoff),
                r: r.shift(d, cutoff),
            },
            Formula::And(l, r) => and(l.shift(d, cutoff), r.shift(d, cutoff)),
            Formula::Or(l, r) => or(l.shift(d, cutoff), r.shift(d, cutoff)),
            Formula::BAll { bound, body } => ball(bound.shift(d, cutoff), body.shift(d, cutoff + 1)),
            Formula::BEx { bound, body } => bex(bound.shift(d, cutoff), body.shift(d, cutoff + 1)),
            Formula::All(body) => all(body.shift(d, cutoff + 1)),
            Formula::Ex(body) => ex(body.shift(d, cutoff + 1)),
        }
    }

    fn subst(&self, j: usize, t: &RsTerm) -> Formula {
        match self {
            Formula::Mem { pos, l, r } => Formula::Mem {
                pos: *pos,
                l: l.subst(j, t),
                r: r.subst(j, t),
            },
            Formula::And(l, r) => and(l.subst(j, t), r.subst(j, t)),
            Formula::Or(l, r) => or(l.subst(j, t), r.subst(j, t)),
            Formula::BAll { bound, body } => ball(bound.subst(j, t), body.subst(j + 1, t)),
            Formula::BEx { bound, body } => bex(bound.subst(j, t), body.subst(j + 1, t)),
            Formula::All(body) => all(body.subst(j + 1, t)),
            Formula::Ex(body) => ex(body.subst(j + 1, t)),
        }
    }

    /// Instantiate a quantifier body: replace index 0 by t.  t must have no
    /// unbound indices of its own (free names are fine — binders cannot
    /// capture them).
    pub fn instantiate(&self, t: &RsTerm) -> Formula {
        debug_assert!(t.is_var_closed(), "instantiation terms must carry no loose indices");
        self.subst(0, t)
    }

    pub fn subst_free(&self, name: &str, t: &RsTerm) -> Formula {
        debug_assert!(t.is_var_closed());
        match self {
            Formula::Mem { pos, l, r } => Formula::Mem {
                pos: *pos,
                l: l.subst_free(name, t),
                r: r.subst_free(name, t),
            },
            Formula::And(l, r) => and(l.subst_free(name, t), r.subst_free(name, t)),
            Formula::Or(l, r) => or(l.subst_free(name, t), r.subst_free(name, t)),
            Formula::BAll { bound, body } => {
                ball(bound.subst_free(name, t), body.subst_free(name, t))
            }
            Formula::BEx { bound, body } => {
                bex(bound.subst_free(name, t), body.subst_free(name, t))
            }
            Formula::All(body) => all(body.subst_free(name, t)),
            Formula::Ex(body) => ex(body.subst_free(name, t)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closed_at(0)
    }

    /// No unbound de Bruijn indices; named free variables allowed.
    pub fn is_var_closed(&self) -> bool {
        self.var_closed_at(0)
    }

    fn var_closed_at(&self, depth: usize) -> bool {
        match self {
            Formula::Mem { l, r, .. } => l.var_closed_at(depth) && r.var_closed_at(depth),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.var_closed_at(depth) && r.var_closed_at(depth)
            }
            Formula::BAll { bound, body } | Formula::BEx { bound, body } => {
                bound.var_closed_at(depth) && body.var_closed_at(depth + 1)
            }
            Formula::All(body) | Formula::Ex(body) => body.var_closed_at(depth + 1),
        }
    }

    fn closed_at(&self, depth: usize) -> bool {
        match self {
            Formula::Mem { l, r, .. } => l.closed_at(depth) && r.closed_at(depth),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.closed_at(depth) && r.closed_at(depth)
            }
            Formula::BAll { bound, body } | Formula::BEx { bound, body } => {
                bound.closed_at(depth) && body.closed_at(depth + 1)
            }
            Formula::All(body) | Formula::Ex(body) => body.closed_at(depth + 1),
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut Vec<String>) {
        match self {
            Formula::Mem { l, r, .. } => {
                l.free_vars(out);
                r.free_vars(out);
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_free(out);
                r.collect_free(out);
            }
            Formula::BAll { bound, body } | Formula::BEx { bound, body } => {
                bound.free_vars(out);
                body.collect_free(out);
            }
            Formula::All(body) | Formula::Ex(body) => body.collect_free(out),
        }
    }

    /// No unbounded quantifiers anywhere (comprehension matrices are Δ0 by
    /// invariant, and they contain no unbounded quantifiers regardless).
    pub fn is_delta0(&self) -> bool {
        match self {
            Formula::Mem { .. } => true,
            Formula::And(l, r) | Formula::Or(l, r) => l.is_delta0() && r.is_delta0(),
            Formula::BAll { body, .. } | Formula::BEx { body, .. } => body.is_delta0(),
            Formula::All(_) | Formula::Ex(_) => false,
        }
    }

    pub fn has_unbounded_quantifier(&self) -> bool {
        !self.is_delta0()
    }

    /// Is this a Σ formula (no unbounded ∀)?
    pub fn is_sigma(&self) -> bool {
        match self {
            Formula::Mem { .. } => true,
            Formula::And(l, r) | Formula::Or(l, r) => l.is_sigma() && r.is_sigma(),
            Formula::BAll { body, .. } | Formula::BEx { body, .. } => body.is_sigma(),
            Formula::Ex(body) => body.is_sigma(),
            Formula::All(_) => false,
        }
    }

    /// Relativize to a closed term: every ∃x becomes (∃x∈z), ∀x becomes
    /// (∀x∈z).
    pub fn relativize(&self, z: &RsTerm) -> Formula {
        debug_assert!(z.is_closed());
        match self {
            Formula::Mem { .. } => self.clone(),
            Formula::And(l, r) => and(l.relativize(z), r.relativize(z)),
            Formula::Or(l, r) => or(l.relativize(z), r.relativize(z)),
            Formula::BAll { bound, body } => ball(bound.clone(), body.relativize(z)),
            Formula::BEx { bound, body } => bex(bound.clone(), body.relativize(z)),
            Formula::All(body) => ball(z.clone(), body.relativize(z)),
            Formula::Ex(body) => bex(z.clone(), body.relativize(z)),
        }
    }

    /// Relativize to a bound variable j levels out (used to build ∃z A^z:
    /// the principal formula of reflection is ex(relativize_open(A, 0))).
    fn relativize_open(&self, j: usize) -> Formula {
        match self {
            Formula::Mem { .. } => self.clone(),
            Formula::And(l, r) => and(l.relativize_open(j), r.relativize_open(j)),
            Formula::Or(l, r) => or(l.relativize_open(j), r.relativize_open(j)),
            Formula::BAll { bound, body } => {
                ball(bound.clone(), body.relativize_open(j + 1))
            }
            Formula::BEx { bound, body } => bex(bound.clone(), body.relativize_open(j + 1)),
            Formula::All(body) => ball(RsTerm::Var(j), body.relativize_open(j + 1)),
            Formula::Ex(body) => bex(RsTerm::Var(j), body.relativize_open(j + 1)),
        }
    }
}

fn abstract_term(t: &RsTerm, name: &str, depth: usize) -> RsTerm {
    match t {
        RsTerm::Free(n) if n == name => RsTerm::Var(depth),
        RsTerm::Const(_) | RsTerm::Var(_) | RsTerm::Free(_) => t.clone(),
        RsTerm::Pair(a, b) => RsTerm::Pair(
            Box::new(abstract_term(a, name, depth)),
            Box::new(abstract_term(b, name, depth)),
        ),
        RsTerm::Union(a) => RsTerm::Union(Box::new(abstract_term(a, name, depth))),
        RsTerm::Sep { base, matrix } => RsTerm::Sep {
            base: Box::new(abstract_term(base, name, depth)),
            matrix: Box::new(abstract_formula(matrix, name, depth + 1)),
        },
    }
}

/// Turn the named free variable into a reference to a binder `depth` levels
/// out, so the result can be placed under a fresh outermost binder.
fn abstract_formula(f: &Formula, name: &str, depth: usize) -> Formula {
    match f {
        Formula::Mem { pos, l, r } => Formula::Mem {
            pos: *pos,
            l: abstract_term(l, name, depth),
            r: abstract_term(r, name, depth),
        },
        Formula::And(l, r) => and(
            abstract_formula(l, name, depth),
            abstract_formula(r, name, depth),
        ),
        Formula::Or(l, r) => or(
            abstract_formula(l, name, depth),
            abstract_formula(r, name, depth),
        ),
        Formula::BAll { bound, body } => ball(
            abstract_term(bound, name, depth),
            abstract_formula(body, name, depth + 1),
        ),
        Formula::BEx { bound, body } => bex(
            abstract_term(bound, name, depth),
            abstract_formula(body, name, depth + 1),
        ),
        Formula::All(body) => all(abstract_formula(body, name, depth + 1)),
        Formula::Ex(body) => ex(abstract_formula(body, name, depth + 1)),
    }
}

/// ∀name f, binding the named free variable.
pub fn all_named(name: &str, f: Formula) -> Formula {
    all(abstract_formula(&f, name, 0))
}
/// ∃name f.
pub fn ex_named(name: &str, f: Formula) -> Formula {
    ex(abstract_formula(&f, name, 0))
}
/// (∀name∈bound) f; the bound may not mention the name.
pub fn ball_named(name: &str, bound: RsTerm, f: Formula) -> Formula {
    ball(bound, abstract_formula(&f, name, 0))
}
/// (∃name∈bound) f.
pub fn bex_named(name: &str, bound: RsTerm, f: Formula) -> Formula {
    bex(bound, abstract_formula(&f, name, 0))
}

/// {name ∈ base | matrix}, binding the named free variable in the matrix.
pub fn sep_term(base: RsTerm, name: &str, matrix: Formula) -> RsTerm {
    RsTerm::Sep {
        base: Box::new(base),
        matrix: Box::new(abstract_formula(&matrix, name, 0)),
    }
}

/// A name not occurring free in any of the given formulas.
pub fn fresh_name(base: &str, avoid: &[&Formula]) -> String {
    let mut used: Vec<String> = Vec::new();
    for f in avoid {
        f.collect_free(&mut used);
    }
    let mut name = base.to_string();
    while used.contains(&name) {
        name.push('_');
    }
    name
}

/// ∃z A^z, the principal formula of the reflection rule for a closed A.
pub fn sigma_ref_principal(a: &Formula) -> Formula {
    debug_assert!(a.is_closed());
    ex(a.relativize_open(0))
}

/// ω·n (or ω·ω when the input rank is ω), the rank contribution of a term.
fn omega_times(rank: &OrdN) -> OrdN {
    match rank {
        OrdN::Nat(0) => OrdN::Nat(0),
        OrdN::Nat(n) => OrdN::sum(vec![OrdN::omega_small(); *n as usize]),
        _ => OrdN::omega_pow(OrdN::Nat(2)),
    }
}

fn ord_max(a: OrdN, b: OrdN) -> OrdN {
    if compare(&a, &b) == Cmp::Less {
        b
    } else {
        a
    }
}

/// rank(u) = ω·|u| for a closed term.
pub fn term_rank(t: &RsTerm, u: &Universe) -> Result<OrdN, EvalError> {
    let v = ev_term(t, u)?;
    Ok(omega_times(&hf_rank(&v)))
}

/// Formula rank, by the recursive clauses; quantifier bodies are measured at
/// the instance c_∅.
pub fn formula_rank(f: &Formula, u: &Universe) -> Result<OrdN, EvalError> {
    match f {
        Formula::Mem { l, r, .. } => {
            Ok(ord_max(term_rank(l, u)?, term_rank(r, u)?).add_nat(1))
        }
        Formula::And(l, r) | Formula::Or(l, r) => {
            Ok(ord_max(formula_rank(l, u)?, formula_rank(r, u)?).add_nat(1))
        }
        Formula::BAll { bound, body } | Formula::BEx { bound, body } => {
            let inst = body.instantiate(&cempty());
            Ok(ord_max(
                term_rank(bound, u)?.add_nat(3),
                formula_rank(&inst, u)?.add_nat(2),
            ))
        }
        Formula::All(body) | Formula::Ex(body) => {
            let inst = body.instantiate(&cempty());
            Ok(ord_max(OrdN::Omega, formula_rank(&inst, u)?.add_nat(1)))
        }
    }
}

/// k(A) = {|t| : t occurs in A} ∪ {Ω if A has an unbounded quantifier},
/// with quantifier bodies read at the instance c_∅.  Sorted, deduplicated by
/// value.
pub fn k_of(f: &Formula, u: &Universe) -> Result<Vec<OrdN>, EvalError> {
    let mut out: Vec<OrdN> = Vec::new();
    collect_k(f, u, &mut out)?;
    out.sort_by(|a, b| match compare(a, b) {
        Cmp::Less => std::cmp::Ordering::Less,
        Cmp::Equal => std::cmp::Ordering::Equal,
        Cmp::Greater => std::cmp::Ordering::Greater,
    });
    out.dedup_by(|a, b| compare(a, b) == Cmp::Equal);
    Ok(out)
}

fn collect_k(f: &Formula, u: &Universe, out: &mut Vec<OrdN>) -> Result<(), EvalError> {
    match f {
        Formula::Mem { l, r, .. } => {
            out.push(hf_rank(&ev_term(l, u)?));
            out.push(hf_rank(&ev_term(r, u)?));
        }
        Formula::And(l, r) | Formula::Or(l, r) => {
            collect_k(l, u, out)?;
            collect_k(r, u, out)?;
        }
        Formula::BAll { bound, body } | Formula::BEx { bound, body } => {
            out.push(hf_rank(&ev_term(bound, u)?));
            collect_k(&body.instantiate(&cempty()), u, out)?;
        }
        Formula::All(body) | Formula::Ex(body) => {
            out.push(OrdN::Omega);
            collect_k(&body.instantiate(&cempty()), u, out)?;
        }
    }
    Ok(())
}

/// How a formula decomposes into an infinitary conjunction or disjunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decomp {
    Atomic,
    /// ⋀ over {0,1}.
    ConjBinary,
    /// ⋀ over all terms.
    ConjTerms,
    /// ⋁ over {0,1}.
    DisjBinary,
    /// ⋁ over all terms.
    DisjTerms,
}

pub fn decompose(f: &Formula) -> Decomp {
    match f {
        Formula::Mem { .. } => Decomp::Atomic,
        Formula::And(..) => Decomp::ConjBinary,
        Formula::Or(..) => Decomp::DisjBinary,
        Formula::BAll { .. } | Formula::All(..) => Decomp::ConjTerms,
        Formula::BEx { .. } | Formula::Ex(..) => Decomp::DisjTerms,
    }
}

/// The i-th binary child (And/Or only).
pub fn child_bit(f: &Formula, i: u8) -> Option<Formula> {
    match (f, i) {
        (Formula::And(l, _), 0) | (Formula::Or(l, _), 0) => Some((**l).clone()),
        (Formula::And(_, r), 1) | (Formula::Or(_, r), 1) => Some((**r).clone()),
        _ => None,
    }
}

/// The term-indexed child at s, with the membership guard for bounded
/// quantifiers: (∀x∈t)A ↦ (s∉t) ∨ A(s) and (∃x∈t)A ↦ (s∈t) ∧ A(s).
pub fn child_term(f: &Formula, s: &RsTerm) -> Option<Formula> {
    match f {
        Formula::BAll { bound, body } => {
            Some(or(nmem(s.clone(), bound.clone()), body.instantiate(s)))
        }
        Formula::BEx { bound, body } => {
            Some(and(mem(s.clone(), bound.clone()), body.instantiate(s)))
        }
        Formula::All(body) | Formula::Ex(body) => Some(body.instantiate(s)),
        _ => None,
    }
}

/// A finite set of closed formulas in a canonical order; Γ,A means Γ∪{A}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Sequent(Vec<Formula>);

impl Sequent {
    pub fn empty() -> Sequent {
        Sequent(Vec::new())
    }
    pub fn from_vec(fs: Vec<Formula>) -> Sequent {
        let mut s = Sequent::empty();
        for f in fs {
            s.insert(f);
        }
        s
    }
    pub fn single(f: Formula) -> Sequent {
        Sequent(vec![f])
    }
    pub fn insert(&mut self, f: Formula) {
        if let Err(i) = self.0.binary_search(&f) {
            self.0.insert(i, f);
        }
    }
    pub fn with(&self, f: &Formula) -> Sequent {
        let mut s = self.clone();
        s.insert(f.clone());
        s
    }
    pub fn union(&self, other: &Sequent) -> Sequent {
        let mut s = self.clone();
        for f in &other.0 {
            s.insert(f.clone());
        }
        s
    }
    pub fn without(&self, f: &Formula) -> Sequent {
        Sequent(self.0.iter().filter(|g| *g != f).cloned().collect())
    }
    pub fn contains(&self, f: &Formula) -> bool {
        self.0.binary_search(f).is_ok()
    }
    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.0.iter()
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_subset(&self, other: &Sequent) -> bool {
        self.0.iter().all(|f| other.contains(f))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Canonical serialization (the golden-file format) and parsing.

impl fmt::Display for RsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, f, 0)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, 0)
    }
}

fn bname(depth: usize) -> String {
    format!("x{depth}")
}

fn write_term(t: &RsTerm, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
    match t {
        RsTerm::Const(s) => write!(f, "{s}"),
        RsTerm::Var(i) => {
            // Index i at binder depth d refers to the binder named x{d-1-i}.
            if *i < depth {
                write!(f, "{}", bname(depth - 1 - i))
            } else {
                write!(f, "?{i}")
            }
        }
        RsTerm::Free(n) => write!(f, "{n}"),
        RsTerm::Pair(a, b) => {
            write!(f, "(pair ")?;
            write_term(a, f, depth)?;
            write!(f, " ")?;
            write_term(b, f, depth)?;
            write!(f, ")")
        }
        RsTerm::Union(a) => {
            write!(f, "(union ")?;
            write_term(a, f, depth)?;
            write!(f, ")")
        }
        RsTerm::Sep { base, matrix } => {
            write!(f, "(sep {} ", bname(depth))?;
            write_term(base, f, depth)?;
            write!(f, " ")?;
            write_formula(matrix, f, depth + 1)?;
            write!(f, ")")
        }
    }
}

fn write_formula(g: &Formula, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
    match g {
        Formula::Mem { pos, l, r } => {
            write!(f, "({} ", if *pos { "mem" } else { "nmem" })?;
            write_term(l, f, depth)?;
            write!(f, " ")?;
            write_term(r, f, depth)?;
            write!(f, ")")
        }
        Formula::And(l, r) => {
            write!(f, "(and ")?;
            write_formula(l, f, depth)?;
            write!(f, " ")?;
            write_formula(r, f, depth)?;
            write!(f, ")")
        }
        Formula::Or(l, r) => {
            write!(f, "(or ")?;
            write_formula(l, f, depth)?;
            write!(f, " ")?;
            write_formula(r, f, depth)?;
            write!(f, ")")
        }
        Formula::BAll { bound, body } => {
            write!(f, "(ball {} ", bname(depth))?;
            write_term(bound, f, depth)?;
            write!(f, " ")?;
            write_formula(body, f, depth + 1)?;
            write!(f, ")")
        }
        Formula::BEx { bound, body } => {
            write!(f, "(bex {} ", bname(depth))?;
            write_term(bound, f, depth)?;
            write!(f, " ")?;
            write_formula(body, f, depth + 1)?;
            write!(f, ")")
        }
        Formula::All(body) => {
            write!(f, "(all {} ", bname(depth))?;
            write_formula(body, f, depth + 1)?;
            write!(f, ")")
        }
        Formula::Ex(body) => {
            write!(f, "(ex {} ", bname(depth))?;
            write_formula(body, f, depth + 1)?;
            write!(f, ")")
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

pub(crate) struct Parser<'a> {
    b: &'a [u8],
    pos: usize,
    /// Innermost binder last.
    binders: Vec<String>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str) -> Parser<'a> {
        Parser {
            b: text.as_bytes(),
            pos: 0,
            binders: Vec::new(),
        }
    }

    pub(crate) fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.b.len() && self.b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.b.get(self.pos).copied()
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.b.len()
            && (self.b[self.pos].is_ascii_alphanumeric() || self.b[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an identifier");
        }
        Ok(std::str::from_utf8(&self.b[start..self.pos]).unwrap().to_string())
    }

    fn set_literal(&mut self) -> Result<HFSet, ParseError> {
        self.expect(b'{')?;
        let mut elems = Vec::new();
        loop {
            match self.peek() {
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(HFSet::fin(elems));
                }
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b'{') => elems.push(self.set_literal()?),
                Some(_) => {
                    // allow `omega` inside explicit literals
                    let id = self.ident()?;
                    if id == "omega" {
                        elems.push(HFSet::Omega);
                    } else {
                        return self.err("expected a set literal element");
                    }
                }
                None => return self.err("unterminated set literal"),
            }
        }
    }

    pub(crate) fn term(&mut self) -> Result<RsTerm, ParseError> {
        match self.peek() {
            Some(b'{') => Ok(RsTerm::Const(self.set_literal()?)),
            Some(b'(') => {
                self.pos += 1;
                let head = self.ident()?;
                let t = match head.as_str() {
                    "pair" => {
                        let a = self.term()?;
                        let b = self.term()?;
                        RsTerm::Pair(Box::new(a), Box::new(b))
                    }
                    "union" => RsTerm::Union(Box::new(self.term()?)),
                    "sep" => {
                        let var = self.ident()?;
                        let base = self.term()?;
                        self.binders.push(var);
                        let matrix = self.formula();
                        self.binders.pop();
                        RsTerm::Sep {
                            base: Box::new(base),
                            matrix: Box::new(matrix?),
                        }
                    }
                    other => return self.err(&format!("unknown term former '{other}'")),
                };
                self.expect(b')')?;
                Ok(t)
            }
            Some(_) => {
                let id = self.ident()?;
                if id == "omega" {
                    return Ok(comega());
                }
                if let Some(i) = self.binders.iter().rev().position(|n| *n == id) {
                    Ok(RsTerm::Var(i))
                } else {
                    Ok(RsTerm::Free(id))
                }
            }
            None => self.err("expected a term"),
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        self.expect(b'(')?;
        let head = self.ident()?;
        let g = match head.as_str() {
            "mem" | "nmem" => {
                let l = self.term()?;
                let r = self.term()?;
                Formula::Mem {
                    pos: head == "mem",
                    l,
                    r,
                }
            }
            "and" | "or" => {
                let l = self.formula()?;
                let r = self.formula()?;
                if head == "and" {
                    and(l, r)
                } else {
                    or(l, r)
                }
            }
            "ball" | "bex" => {
                let var = self.ident()?;
                let bound = self.term()?;
                self.binders.push(var);
                let body = self.formula();
                self.binders.pop();
                let body = body?;
                if head == "ball" {
                    ball(bound, body)
                } else {
                    bex(bound, body)
                }
            }
            "all" | "ex" => {
                let var = self.ident()?;
                self.binders.push(var);
                let body = self.formula();
                self.binders.pop();
                let body = body?;
                if head == "all" {
                    all(body)
                } else {
                    ex(body)
                }
            }
            "eq" => {
                let l = self.term()?;
                let r = self.term()?;
                eq_shorthand(&l, &r)
            }
            "neq" => {
                let l = self.term()?;
                let r = self.term()?;
                neq_shorthand(&l, &r)
            }
            other => return self.err(&format!("unknown connective '{other}'")),
        };
        self.expect(b')')?;
        Ok(g)
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos != self.b.len() {
            return self.err("trailing input");
        }
        Ok(())
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(text: &str) -> Result<RsTerm, ParseError> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v4() -> Universe {
        Universe::new(4, 8)
    }

    fn c(s: HFSet) -> RsTerm {
        RsTerm::Const(s)
    }

    fn set1() -> HFSet {
        HFSet::singleton(HFSet::empty())
    }

    #[test]
    fn negate_involutive() {
        let f = all(or(mem(vr(0), cempty()), nmem(vr(0), cempty())));
        assert_eq!(f.negate().negate(), f);
        let n = f.negate();
        assert_eq!(n, ex(and(nmem(vr(0), cempty()), mem(vr(0), cempty()))));
    }

    #[test]
    fn rank_examples() {
        let u = v4();
        // rank(c_∅ ∈ c_{{∅}}) = max(0, ω·1)+1 = ω+1
        let f = mem(cempty(), c(set1()));
        let r = formula_rank(&f, &u).unwrap();
        assert_eq!(compare(&r, &OrdN::omega_small().add_nat(1)), Cmp::Equal);
        // rank(∃x x∈c_∅) = Ω
        let g = ex(mem(vr(0), cempty()));
        assert_eq!(
            compare(&formula_rank(&g, &u).unwrap(), &OrdN::Omega),
            Cmp::Equal
        );
        // rank((∀x∈c_{{∅}}) x∈c_∅) = max(ω·1+3, 0+1+2) = ω+3
        let h = ball(c(set1()), mem(vr(0), cempty()));
        assert_eq!(
            compare(
                &formula_rank(&h, &u).unwrap(),
                &OrdN::omega_small().add_nat(3)
            ),
            Cmp::Equal
        );
    }

    #[test]
    fn k_of_examples() {
        let u = v4();
        let f = mem(cempty(), c(set1()));
        assert_eq!(k_of(&f, &u).unwrap(), vec![OrdN::Nat(0), OrdN::Nat(1)]);
        let g = ex(mem(vr(0), cempty()));
        assert_eq!(k_of(&g, &u).unwrap(), vec![OrdN::Nat(0), OrdN::Omega]);
        let h = mem(comega(), comega());
        assert_eq!(k_of(&h, &u).unwrap(), vec![OrdN::omega_small()]);
    }

    #[test]
    fn decompose_examples() {
        let f = and(mem(cempty(), cempty()), nmem(cempty(), cempty()));
        assert_eq!(decompose(&f), Decomp::ConjBinary);
        assert_eq!(
            child_bit(&f, 0).unwrap(),
            mem(cempty(), cempty())
        );
        let g = bex(c(set1()), mem(vr(0), cempty()));
        let s = cempty();
        assert_eq!(
            child_term(&g, &s).unwrap(),
            and(mem(s.clone(), c(set1())), mem(s.clone(), cempty()))
        );
        let h = all(mem(vr(0), cempty()));
        assert_eq!(child_term(&h, &s).unwrap(), mem(s.clone(), cempty()));
    }

    #[test]
    fn relativize_examples() {
        let f = ex(mem(vr(0), c(set1())));
        let z = c(set1());
        assert_eq!(f.relativize(&z), bex(z.clone(), mem(vr(0), c(set1()))));
        let d0 = mem(cempty(), cempty());
        assert_eq!(d0.relativize(&z), d0);
    }

    #[test]
    fn sigma_ref_principal_shape() {
        let a = ex(mem(vr(0), cempty()));
        // ∃z (∃x∈z) x ∈ c_∅
        assert_eq!(
            sigma_ref_principal(&a),
            ex(bex(vr(0), mem(vr(0), cempty())))
        );
    }

    #[test]
    fn parse_and_serialize_round_trip() {
        for s in [
            "(mem {} {{}})",
            "(nmem omega {})",
            "(and (mem {} {}) (or (mem {} {}) (nmem {} {})))",
            "(ball x0 {{},{{}}} (mem x0 {{}}))",
            "(ex x0 (bex x1 x0 (mem x1 omega)))",
            "(all x0 (mem x0 (sep x1 {{}} (mem x1 {}))))",
            "(mem (pair {} {{}}) (union {{},{{}}}))",
        ] {
            let f = parse_formula(s).unwrap();
            let printed = f.to_string();
            let again = parse_formula(&printed).unwrap();
            assert_eq!(f, again, "round trip failed for {s}");
            assert_eq!(printed, again.to_string());
        }
    }

    #[test]
    fn parse_free_variables() {
        let f = parse_formula("(ex z (and (mem a z) (mem b z)))").unwrap();
        assert_eq!(f, ex(and(mem(fv("a"), vr(0)), mem(fv("b"), vr(0)))));
        assert_eq!(f.free_vars(), vec!["a".to_string(), "b".to_string()]);
        let g = f.subst_free("a", &cempty()).subst_free("b", &c(set1()));
        assert!(g.is_closed());
    }

    #[test]
    fn eq_shorthand_expansion() {
        let f = parse_formula("(eq {} {{}})").unwrap();
        assert_eq!(
            f,
            and(
                ball(cempty(), mem(vr(0), c(set1()))),
                ball(c(set1()), mem(vr(0), cempty()))
            )
        );
    }

    #[test]
    fn sequent_set_semantics() {
        let a = mem(cempty(), cempty());
        let b = nmem(cempty(), cempty());
        let mut s = Sequent::empty();
        s.insert(a.clone());
        s.insert(b.clone());
        s.insert(a.clone());
        assert_eq!(s.len(), 2);
        assert!(s.contains(&a));
        let t = Sequent::from_vec(vec![b, a]);
        assert_eq!(s, t);
    }
}
