//! Hereditarily finite sets plus a distinguished ω, the finite evaluation
//! universe V_k, term evaluation, and the leveled three-valued truth
//! predicates.

use crate::ord::Ord as OrdN;
use crate::syntax::{Formula, RsTerm};
use std::fmt;

/// A canonical hereditarily finite set, or the distinguished infinite set ω
/// (whose members are the finite von Neumann ordinals).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HFSet {
    /// Elements stored sorted and duplicate-free; equality is structural.
    Fin(Vec<HFSet>),
    Omega,
}

impl HFSet {
    pub fn empty() -> HFSet {
        HFSet::Fin(Vec::new())
    }

    /// Canonicalizing constructor: sorts and deduplicates.
    pub fn fin(mut elems: Vec<HFSet>) -> HFSet {
        elems.sort();
        elems.dedup();
        HFSet::Fin(elems)
    }

    pub fn singleton(x: HFSet) -> HFSet {
        HFSet::Fin(vec![x])
    }

    /// The von Neumann natural n = {0, …, n−1}.
    pub fn von_neumann(n: u64) -> HFSet {
        let mut cur = HFSet::empty();
        let mut all = Vec::new();
        for _ in 0..n {
            all.push(cur.clone());
            cur = HFSet::fin(all.clone());
        }
        cur
    }

    /// Some(n) iff this set is the von Neumann natural n.
    pub fn as_natural(&self) -> Option<u64> {
        match self {
            HFSet::Omega => None,
            HFSet::Fin(elems) => {
                let mut ns: Vec<u64> = Vec::with_capacity(elems.len());
                for e in elems {
                    ns.push(e.as_natural()?);
                }
                ns.sort_unstable();
                for (i, n) in ns.iter().enumerate() {
                    if *n != i as u64 {
                        return None;
                    }
                }
                Some(elems.len() as u64)
            }
        }
    }

    /// Membership x ∈ self; decidable for all pairs (ω's members are exactly
    /// the von Neumann naturals).
    pub fn contains(&self, x: &HFSet) -> bool {
        match self {
            HFSet::Fin(elems) => elems.binary_search(x).is_ok(),
            HFSet::Omega => x.as_natural().is_some(),
        }
    }

    pub fn elements(&self) -> Option<&[HFSet]> {
        match self {
            HFSet::Fin(elems) => Some(elems),
            HFSet::Omega => None,
        }
    }

    /// Set-theoretic rank as a natural number; None for ω.
    pub fn rank_nat(&self) -> Option<u64> {
        match self {
            HFSet::Omega => None,
            HFSet::Fin(elems) => Some(
                elems
                    .iter()
                    .map(|e| e.rank_nat().unwrap() + 1)
                    .max()
                    .unwrap_or(0),
            ),
        }
    }
}

/// Set-theoretic rank |u| as an ordinal notation: finite for HF sets, ω for ω.
pub fn hf_rank(s: &HFSet) -> OrdN {
    match s.rank_nat() {
        Some(n) => OrdN::Nat(n),
        None => OrdN::omega_small(),
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HFSet::Omega => write!(f, "omega"),
            HFSet::Fin(elems) => {
                write!(f, "{{")?;
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// The finite evaluation universe: all HF sets of rank < rank_bound, plus a
/// sampling budget for quantifiers over ω.
#[derive(Debug, Clone)]
pub struct Universe {
    pub rank_bound: u32,
    pub omega_fuel: u64,
    members: Vec<HFSet>,
}

impl Universe {
    pub fn new(rank_bound: u32, omega_fuel: u64) -> Universe {
        let mut members = vec![HFSet::empty()];
        for _ in 1..rank_bound {
            // V_{i+1} is the powerset of V_i.
            let prev = members.clone();
            let mut next = Vec::with_capacity(1usize << prev.len());
            for mask in 0u64..(1u64 << prev.len()) {
                let elems: Vec<HFSet> = prev
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, s)| s.clone())
                    .collect();
                next.push(HFSet::fin(elems));
            }
            next.sort();
            next.dedup();
            members = next;
        }
        if rank_bound == 0 {
            members.clear();
        }
        Universe {
            rank_bound,
            omega_fuel,
            members,
        }
    }

    /// Exactly the members of V_{rank_bound}.
    pub fn members(&self) -> &[HFSet] {
        &self.members
    }
}

/// Three-valued truth verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn of(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
    pub fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown => Verdict::Unknown,
        }
    }
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }
    pub fn or(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::True, _) | (_, Verdict::True) => Verdict::True,
            (Verdict::False, Verdict::False) => Verdict::False,
            _ => Verdict::Unknown,
        }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("comprehension over omega is not supported")]
    OmegaComprehension,
    #[error("undecided Delta0 instance inside a comprehension filter: {0}")]
    UndecidedFilter(String),
    #[error("term or formula is not closed: {0}")]
    Open(String),
    #[error("formula complexity exceeds the requested class: {0}")]
    Complexity(String),
}

/// Evaluate a closed term in the set universe.
pub fn ev_term(t: &RsTerm, u: &Universe) -> Result<HFSet, EvalError> {
    match t {
        RsTerm::Const(a) => Ok(a.clone()),
        RsTerm::Var(_) | RsTerm::Free(_) => Err(EvalError::Open(t.to_string())),
        RsTerm::Pair(s, t2) => Ok(HFSet::fin(vec![ev_term(s, u)?, ev_term(t2, u)?])),
        RsTerm::Union(s) => {
            let inner = ev_term(s, u)?;
            match inner {
                // ⋃ω = ω: the union of all finite ordinals.
                HFSet::Omega => Ok(HFSet::Omega),
                HFSet::Fin(elems) => {
                    let mut out = Vec::new();
                    for e in elems {
                        match e {
                            HFSet::Omega => return Ok(HFSet::Omega),
                            HFSet::Fin(inner_elems) => out.extend(inner_elems),
                        }
                    }
                    Ok(HFSet::fin(out))
                }
            }
        }
        RsTerm::Sep { base, matrix } => {
            let b = ev_term(base, u)?;
            let elems = match b {
                HFSet::Omega => return Err(EvalError::OmegaComprehension),
                HFSet::Fin(elems) => elems,
            };
            let mut out = Vec::new();
            for e in elems {
                let inst = matrix.instantiate(&RsTerm::Const(e.clone()));
                match truth_delta0(&inst, u)? {
                    Verdict::True => out.push(e),
                    Verdict::False => {}
                    Verdict::Unknown => {
                        return Err(EvalError::UndecidedFilter(inst.to_string()))
                    }
                }
            }
            Ok(HFSet::fin(out))
        }
    }
}

/// Truth of a closed Δ0 formula.  Bounded quantifiers over finite sets are
/// exhaustive; bounded quantifiers over ω sample naturals 0..omega_fuel−1,
/// with Unknown when the sample is inconclusive.
pub fn truth_delta0(f: &Formula, u: &Universe) -> Result<Verdict, EvalError> {
    if !f.is_delta0() {
        return Err(EvalError::Complexity(format!("not Delta0: {f}")));
    }
    eval_formula(f, u)
}

/// Syntactic complexity level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Sigma(u32),
    Pi(u32),
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Sigma(n) => write!(f, "Sigma{n}"),
            Level::Pi(n) => write!(f, "Pi{n}"),
        }
    }
}

/// Does f's syntactic complexity fit within the level?  Bounded quantifiers
/// are transparent; an unbounded quantifier of the wrong polarity falls
/// through to the dual class one level down.
pub fn fits_level(f: &Formula, level: Level) -> bool {
    if f.is_delta0() {
        return true;
    }
    match level {
        Level::Sigma(0) | Level::Pi(0) => false,
        Level::Sigma(n) => match f {
            Formula::And(l, r) | Formula::Or(l, r) => {
                fits_level(l, level) && fits_level(r, level)
            }
            Formula::BAll { body, .. } | Formula::BEx { body, .. } => fits_level(body, level),
            Formula::Ex(body) => fits_level(body, level),
            Formula::All(_) => fits_level(f, Level::Pi(n - 1)),
            Formula::Mem { .. } => true,
        },
        Level::Pi(n) => match f {
            Formula::And(l, r) | Formula::Or(l, r) => {
                fits_level(l, level) && fits_level(r, level)
            }
            Formula::BAll { body, .. } | Formula::BEx { body, .. } => fits_level(body, level),
            Formula::All(body) => fits_level(body, level),
            Formula::Ex(_) => fits_level(f, Level::Sigma(n - 1)),
            Formula::Mem { .. } => true,
        },
    }
}

/// The least level (by n, preferring the matching polarity) that f fits.
pub fn classify(f: &Formula) -> Level {
    if f.is_delta0() {
        return Level::Sigma(0);
    }
    for n in 1..=16 {
        if fits_level(f, Level::Sigma(n)) {
            return Level::Sigma(n);
        }
        if fits_level(f, Level::Pi(n)) {
            return Level::Pi(n);
        }
    }
    panic!("formula nests deeper than the supported quantifier alternation");
}

/// Leveled truth: like truth_delta0 but unbounded quantifiers range over the
/// universe's members.
pub fn truth_level(f: &Formula, level: Level, u: &Universe) -> Result<Verdict, EvalError> {
    if !fits_level(f, level) {
        return Err(EvalError::Complexity(format!(
            "{f} does not fit {level}"
        )));
    }
    eval_formula(f, u)
}

/// Truth of an arbitrary closed formula; the workhorse behind both truth
/// predicates.
pub fn eval_formula(f: &Formula, u: &Universe) -> Result<Verdict, EvalError> {
    match f {
        Formula::Mem { pos, l, r } => {
            let a = ev_term(l, u)?;
            let b = ev_term(r, u)?;
            let v = Verdict::of(b.contains(&a));
            Ok(if *pos { v } else { v.not() })
        }
        Formula::And(l, r) => Ok(eval_formula(l, u)?.and(eval_formula(r, u)?)),
        Formula::Or(l, r) => Ok(eval_formula(l, u)?.or(eval_formula(r, u)?)),
        Formula::BAll { bound, body } => {
            let b = ev_term(bound, u)?;
            match b {
                HFSet::Fin(elems) => {
                    let mut acc = Verdict::True;
                    for e in elems {
                        let inst = body.instantiate(&RsTerm::Const(e));
                        acc = acc.and(eval_formula(&inst, u)?);
                    }
                    Ok(acc)
                }
                HFSet::Omega => {
                    let mut acc = Verdict::True;
                    for n in 0..u.omega_fuel {
                        let inst = body.instantiate(&RsTerm::Const(HFSet::von_neumann(n)));
                        acc = acc.and(eval_formula(&inst, u)?);
                    }
                    // The sample cannot confirm a universal claim over ω.
                    Ok(acc.and(Verdict::Unknown))
                }
            }
        }
        Formula::BEx { bound, body } => {
            let b = ev_term(bound, u)?;
            match b {
                HFSet::Fin(elems) => {
                    let mut acc = Verdict::False;
                    for e in elems {
                        let inst = body.instantiate(&RsTerm::Const(e));
                        acc = acc.or(eval_formula(&inst, u)?);
                    }
                    Ok(acc)
                }
                HFSet::Omega => {
                    let mut acc = Verdict::False;
                    for n in 0..u.omega_fuel {
                        let inst = body.instantiate(&RsTerm::Const(HFSet::von_neumann(n)));
                        acc = acc.or(eval_formula(&inst, u)?);
                    }
                    Ok(acc.or(Verdict::Unknown))
                }
            }
        }
        // Unbounded quantifiers range over the audit universe: every member
        // of V_k plus ω itself.  An instance that cannot be evaluated only
        // degrades the verdict to Unknown.
        Formula::All(body) => {
            let mut acc = Verdict::True;
            for m in u.members().iter().cloned().chain([HFSet::Omega]) {
                let inst = body.instantiate(&RsTerm::Const(m));
                acc = acc.and(eval_formula(&inst, u).unwrap_or(Verdict::Unknown));
            }
            Ok(acc)
        }
        Formula::Ex(body) => {
            let mut acc = Verdict::False;
            for m in u.members().iter().cloned().chain([HFSet::Omega]) {
                let inst = body.instantiate(&RsTerm::Const(m));
                acc = acc.or(eval_formula(&inst, u).unwrap_or(Verdict::Unknown));
            }
            Ok(acc)
        }
    }
}
