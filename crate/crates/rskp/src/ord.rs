//! Ordinal notations up to and including ε_{Ω+1}.
//!
//! A notation is a natural number, the collapsing constant Ω, a sum of
//! ω-power-shaped parts (not necessarily in Cantor normal form), an ω-power,
//! or an ε-term.  Comparison follows the representation system's case
//! analysis; the canonical reading treats Ω as ω^Ω and ε_a as ω^{ε_a}, so
//! ω^Ω = Ω and ε_Ω = Ω hold by value.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ord {
    Nat(u64),
    Omega,
    /// Sum of parts; the raw constructor accepts arbitrary order, and
    /// `normalize_cnf` canonicalizes.  Construction flattens nested sums and
    /// collapses one-element sums.
    Sum(Vec<Ord>),
    OmegaPow(Box<Ord>),
    Eps(Box<Ord>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Less,
    Equal,
    Greater,
}

impl Cmp {
    pub fn rev(self) -> Cmp {
        match self {
            Cmp::Less => Cmp::Greater,
            Cmp::Equal => Cmp::Equal,
            Cmp::Greater => Cmp::Less,
        }
    }
    pub fn of(o: std::cmp::Ordering) -> Cmp {
        match o {
            std::cmp::Ordering::Less => Cmp::Less,
            std::cmp::Ordering::Equal => Cmp::Equal,
            std::cmp::Ordering::Greater => Cmp::Greater,
        }
    }
}

impl Ord {
    pub fn nat(n: u64) -> Ord {
        Ord::Nat(n)
    }
    pub fn omega_pow(e: Ord) -> Ord {
        Ord::OmegaPow(Box::new(e))
    }
    pub fn eps(i: Ord) -> Ord {
        Ord::Eps(Box::new(i))
    }
    /// ω itself, i.e. ω^1.
    pub fn omega_small() -> Ord {
        Ord::omega_pow(Ord::Nat(1))
    }
    /// ε_{Ω+1}, the ceiling of the whole system.
    pub fn eps_omega_plus_1() -> Ord {
        Ord::eps(Ord::sum(vec![Ord::Omega, Ord::Nat(1)]))
    }

    /// Sum constructor: flattens nested sums, drops value-zero parts,
    /// collapses empty/singleton results.
    pub fn sum(parts: Vec<Ord>) -> Ord {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Ord::Sum(inner) => flat.extend(inner),
                Ord::Nat(0) => {}
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Ord::Nat(0),
            1 => flat.pop().unwrap(),
            _ => Ord::Sum(flat),
        }
    }

    pub fn is_zero(&self) -> bool {
        cnf_exponents(self).is_empty()
    }

    /// Structural identity (the system's ≡), as opposed to value equality.
    pub fn identical(&self, other: &Ord) -> bool {
        self == other
    }

    pub fn contains_omega(&self) -> bool {
        match self {
            Ord::Nat(_) => false,
            Ord::Omega => true,
            Ord::Sum(ps) => ps.iter().any(|p| p.contains_omega()),
            Ord::OmegaPow(e) | Ord::Eps(e) => e.contains_omega(),
        }
    }

    /// Node count; `Nat(n)` counts as n+1 so exhaustive enumeration by size
    /// is finite.
    pub fn size(&self) -> usize {
        match self {
            Ord::Nat(n) => 1 + *n as usize,
            Ord::Omega => 1,
            Ord::Sum(ps) => 1 + ps.iter().map(|p| p.size()).sum::<usize>(),
            Ord::OmegaPow(e) | Ord::Eps(e) => 1 + e.size(),
        }
    }

    /// Ordinal addition of a natural number on the right: a + k.
    pub fn add_nat(&self, k: u64) -> Ord {
        if k == 0 {
            return self.clone();
        }
        match self {
            Ord::Nat(n) => Ord::Nat(n + k),
            Ord::Sum(ps) => {
                let mut ps = ps.clone();
                if let Some(Ord::Nat(n)) = ps.last_mut() {
                    *n += k;
                } else {
                    ps.push(Ord::Nat(k));
                }
                Ord::Sum(ps)
            }
            other => Ord::Sum(vec![other.clone(), Ord::Nat(k)]),
        }
    }
}

/// CNF exponent list of a notation: non-increasing exponents e_i with the
/// value ω^{e_1}+…+ω^{e_n}, computed with absorption (adding ω^e on the right
/// erases earlier strictly smaller terms, as ordinal addition does).
/// Ω contributes exponent Ω (reading Ω as ω^Ω) and ε_a contributes the ε-term
/// itself (reading ε_a as ω^{ε_a}).
pub fn cnf_exponents(a: &Ord) -> Vec<Ord> {
    let mut acc: Vec<Ord> = Vec::new();
    push_exponents(a, &mut acc);
    acc
}

fn push_exponents(a: &Ord, acc: &mut Vec<Ord>) {
    match a {
        Ord::Nat(n) => {
            for _ in 0..*n {
                push_one(Ord::Nat(0), acc);
            }
        }
        Ord::Omega => push_one(Ord::Omega, acc),
        Ord::OmegaPow(e) => push_one((**e).clone(), acc),
        Ord::Eps(_) => push_one(a.clone(), acc),
        Ord::Sum(ps) => {
            for p in ps {
                push_exponents(p, acc);
            }
        }
    }
}

fn push_one(e: Ord, acc: &mut Vec<Ord>) {
    while let Some(last) = acc.last() {
        if compare(last, &e) == Cmp::Less {
            acc.pop();
        } else {
            break;
        }
    }
    acc.push(e);
}

/// The ordering of the representation system.  Total and deterministic on
/// all notations; Equal means value equality (a ⪯ b and b ⪯ a), which is
/// weaker than structural identity.
pub fn compare(a: &Ord, b: &Ord) -> Cmp {
    match (a, b) {
        (Ord::Nat(m), Ord::Nat(n)) => Cmp::of(m.cmp(n)),
        (_, Ord::Omega) => vs_omega(a),
        (Ord::Omega, _) => vs_omega(b).rev(),
        (Ord::Eps(x), Ord::Eps(y)) => compare(x, y),
        (_, Ord::Eps(_)) => vs_eps(a, b),
        (Ord::Eps(_), _) => vs_eps(b, a).rev(),
        (Ord::Nat(n), _) => nat_vs(*n, b),
        (_, Ord::Nat(n)) => nat_vs(*n, a).rev(),
        // Sum or ω-power on both sides: sort into CNF and compare.
        _ => lex(&cnf_exponents(a), &cnf_exponents(b)),
    }
}

/// x compared against the atomic constant Ω.
fn vs_omega(x: &Ord) -> Cmp {
    match x {
        Ord::Nat(_) => Cmp::Less,
        Ord::Omega => Cmp::Equal,
        Ord::OmegaPow(e) | Ord::Eps(e) => vs_omega(e),
        Ord::Sum(ps) => sum_vs_omega(ps),
    }
}

fn sum_vs_omega(ps: &[Ord]) -> Cmp {
    match ps {
        [] => Cmp::Less,
        [last] => vs_omega(last),
        [first, rest @ ..] => match vs_omega(first) {
            Cmp::Less => sum_vs_omega(rest),
            Cmp::Greater => Cmp::Greater,
            // Ω plus a zero-valued tail is still Ω.
            Cmp::Equal => {
                if rest
                    .iter()
                    .all(|x| compare(x, &Ord::Nat(0)) == Cmp::Equal)
                {
                    Cmp::Equal
                } else {
                    Cmp::Greater
                }
            }
        },
    }
}

/// a (a natural, sum, or ω-power) compared against an ε-term `e`.
fn vs_eps(a: &Ord, e: &Ord) -> Cmp {
    match a {
        // Every ε-term's value is at least ε_0, above every natural.
        Ord::Nat(_) => Cmp::Less,
        Ord::OmegaPow(a0) => compare(a0, e),
        Ord::Sum(_) => {
            let exps = cnf_exponents(a);
            match exps.first() {
                None => Cmp::Less,
                Some(a0) => match compare(a0, e) {
                    Cmp::Less => Cmp::Less,
                    Cmp::Greater => Cmp::Greater,
                    // ω^{a0} alone is the fixed point itself; anything after
                    // it pushes the sum strictly above.
                    Cmp::Equal if exps.len() == 1 => Cmp::Equal,
                    Cmp::Equal => Cmp::Greater,
                },
            }
        }
        _ => unreachable!("Omega and Eps are dispatched earlier"),
    }
}

/// Natural number n against an Ω-free-or-not composite (sum or ω-power).
fn nat_vs(n: u64, b: &Ord) -> Cmp {
    if b.contains_omega() {
        return Cmp::Less;
    }
    let exps = cnf_exponents(b);
    if exps
        .iter()
        .any(|e| compare(e, &Ord::Nat(0)) == Cmp::Greater)
    {
        return Cmp::Less;
    }
    Cmp::of(n.cmp(&(exps.len() as u64)))
}

fn lex(xs: &[Ord], ys: &[Ord]) -> Cmp {
    for (x, y) in xs.iter().zip(ys.iter()) {
        match compare(x, y) {
            Cmp::Equal => continue,
            other => return other,
        }
    }
    Cmp::of(xs.len().cmp(&ys.len()))
}

/// Canonical Cantor normal form: a sum of ω-powers with non-increasing,
/// recursively normalized exponents (or a single ω-power, or 0).
/// Value-preserving and idempotent.
pub fn normalize_cnf(a: &Ord) -> Ord {
    let exps: Vec<Ord> = cnf_exponents(a).iter().map(normalize_exp).collect();
    rebuild(exps)
}

/// Normalize a CNF exponent.  Ω and ε-terms are their own exponents under
/// the canonical reading, so recursing into them as wholes would not
/// terminate; Ω stays atomic and ε-terms get a normalized index.
fn normalize_exp(e: &Ord) -> Ord {
    match e {
        Ord::Omega => Ord::Omega,
        Ord::Eps(i) => Ord::eps(normalize_cnf(i)),
        other => normalize_cnf(other),
    }
}

fn rebuild(exps: Vec<Ord>) -> Ord {
    let mut parts: Vec<Ord> = exps.into_iter().map(Ord::omega_pow).collect();
    match parts.len() {
        0 => Ord::Nat(0),
        1 => parts.pop().unwrap(),
        _ => Ord::Sum(parts),
    }
}

/// Natural (Hessenberg) sum: merge the CNFs of both arguments and sort the
/// exponents non-increasingly.  α#0 = 0#α = α returns the other argument
/// unchanged.
pub fn natural_sum(a: &Ord, b: &Ord) -> Ord {
    let ea = cnf_exponents(a);
    let eb = cnf_exponents(b);
    if ea.is_empty() {
        return b.clone();
    }
    if eb.is_empty() {
        return a.clone();
    }
    let mut merged = Vec::with_capacity(ea.len() + eb.len());
    let (mut i, mut j) = (0, 0);
    while i < ea.len() && j < eb.len() {
        if compare(&ea[i], &eb[j]) == Cmp::Less {
            merged.push(eb[j].clone());
            j += 1;
        } else {
            merged.push(ea[i].clone());
            i += 1;
        }
    }
    merged.extend_from_slice(&ea[i..]);
    merged.extend_from_slice(&eb[j..]);
    rebuild(merged)
}

/// e_0 = Ω+1, e_{n+1} = ω^{e_n}.
pub fn e_tower(n: u64) -> Ord {
    let mut t = Ord::sum(vec![Ord::Omega, Ord::Nat(1)]);
    for _ in 0..n {
        t = Ord::omega_pow(t);
    }
    t
}

/// x ≺ ε_{Ω+1} iff x ≺ e_n for some n; returns the least witnessing n.
pub fn below_eps_omega_plus_1(a: &Ord) -> (bool, Option<u64>) {
    if compare(a, &Ord::eps_omega_plus_1()) != Cmp::Less {
        return (false, None);
    }
    let mut n = 0u64;
    loop {
        if compare(a, &e_tower(n)) == Cmp::Less {
            return (true, Some(n));
        }
        n += 1;
        assert!(n < 256, "tower witness search exceeded its budget");
    }
}

/// φ₀^k(a): k-fold ω-exponentiation.
pub fn phi0_iterate(k: u64, a: &Ord) -> Ord {
    let mut t = a.clone();
    for _ in 0..k {
        t = Ord::omega_pow(t);
    }
    t
}

/// Ω·a, via the identity Ω·ω^c = ω^{Ω+c} applied to each CNF term of a.
pub fn omega_mul_left(a: &Ord) -> Ord {
    let exps = cnf_exponents(a);
    let mut parts = Vec::with_capacity(exps.len());
    for c in exps {
        if c.is_zero() {
            parts.push(Ord::Omega);
        } else {
            parts.push(Ord::omega_pow(Ord::sum(vec![Ord::Omega, c])));
        }
    }
    Ord::sum(parts)
}

impl fmt::Display for Ord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ord::Nat(n) => write!(f, "{n}"),
            Ord::Omega => write!(f, "W"),
            Ord::OmegaPow(e) => write!(f, "w^({e})"),
            Ord::Eps(i) => write!(f, "e({i})"),
            Ord::Sum(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("ordinal syntax error at byte {pos}: {msg}")]
pub struct OrdParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parse the textual syntax: `0`, `3`, `W`, `w^(...)`, `e(...)`, `a + b`,
/// with `(...)` usable for grouping.
pub fn parse_ord(text: &str) -> Result<Ord, OrdParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let t = parse_sum(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(OrdParseError {
            pos,
            msg: "trailing input".into(),
        });
    }
    Ok(t)
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_sum(b: &[u8], pos: &mut usize) -> Result<Ord, OrdParseError> {
    let mut parts = vec![parse_atom(b, pos)?];
    loop {
        skip_ws(b, pos);
        if *pos < b.len() && b[*pos] == b'+' {
            *pos += 1;
            parts.push(parse_atom(b, pos)?);
        } else {
            break;
        }
    }
    if parts.len() == 1 {
        Ok(parts.pop().unwrap())
    } else {
        Ok(Ord::sum(parts))
    }
}

fn parse_atom(b: &[u8], pos: &mut usize) -> Result<Ord, OrdParseError> {
    skip_ws(b, pos);
    let err = |pos: usize, msg: &str| OrdParseError {
        pos,
        msg: msg.into(),
    };
    if *pos >= b.len() {
        return Err(err(*pos, "unexpected end of input"));
    }
    match b[*pos] {
        b'0'..=b'9' => {
            let start = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let n: u64 = std::str::from_utf8(&b[start..*pos])
                .unwrap()
                .parse()
                .map_err(|_| err(start, "number too large"))?;
            Ok(Ord::Nat(n))
        }
        b'W' => {
            *pos += 1;
            Ok(Ord::Omega)
        }
        b'w' => {
            *pos += 1;
            skip_ws(b, pos);
            if *pos >= b.len() || b[*pos] != b'^' {
                return Err(err(*pos, "expected '^' after 'w'"));
            }
            *pos += 1;
            let e = parse_group(b, pos)?;
            Ok(Ord::omega_pow(e))
        }
        b'e' => {
            *pos += 1;
            let i = parse_group(b, pos)?;
            Ok(Ord::eps(i))
        }
        b'(' => parse_group(b, pos),
        _ => Err(err(*pos, "expected a notation")),
    }
}

fn parse_group(b: &[u8], pos: &mut usize) -> Result<Ord, OrdParseError> {
    skip_ws(b, pos);
    if *pos >= b.len() || b[*pos] != b'(' {
        return Err(OrdParseError {
            pos: *pos,
            msg: "expected '('".into(),
        });
    }
    *pos += 1;
    let t = parse_sum(b, pos)?;
    skip_ws(b, pos);
    if *pos >= b.len() || b[*pos] != b')' {
        return Err(OrdParseError {
            pos: *pos,
            msg: "expected ')'".into(),
        });
    }
    *pos += 1;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(e: Ord) -> Ord {
        Ord::omega_pow(e)
    }

    #[test]
    fn natural_order() {
        assert_eq!(compare(&Ord::Nat(3), &Ord::Nat(5)), Cmp::Less);
        assert_eq!(compare(&Ord::Nat(5), &Ord::Nat(5)), Cmp::Equal);
    }

    #[test]
    fn omega_pow_omega_collapses() {
        assert_eq!(compare(&w(Ord::Omega), &Ord::Omega), Cmp::Equal);
        assert_eq!(compare(&Ord::eps(Ord::Omega), &Ord::Omega), Cmp::Equal);
    }

    #[test]
    fn sum_beats_single_power() {
        let a = Ord::sum(vec![w(Ord::Nat(1)), w(Ord::Nat(0))]);
        assert_eq!(compare(&a, &w(Ord::Nat(1))), Cmp::Greater);
    }

    #[test]
    fn tower_below_eps() {
        let e2 = e_tower(2);
        assert_eq!(compare(&e2, &Ord::eps_omega_plus_1()), Cmp::Less);
        assert_eq!(compare(&e_tower(2), &e_tower(3)), Cmp::Less);
    }

    #[test]
    fn absorption_matches_omega_clause() {
        // 1 + Ω = Ω under ordinal addition, matching the Ω-vs-sum clause.
        let a = Ord::Sum(vec![w(Ord::Nat(0)), Ord::Omega]);
        assert_eq!(compare(&a, &Ord::Omega), Cmp::Equal);
        assert_eq!(compare(&a, &w(Ord::Omega)), Cmp::Equal);
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_cnf(&Ord::Nat(0)), Ord::Nat(0));
        let a = Ord::sum(vec![Ord::Omega, Ord::Nat(2)]);
        assert_eq!(
            normalize_cnf(&a),
            Ord::Sum(vec![w(Ord::Omega), w(Ord::Nat(0)), w(Ord::Nat(0))])
        );
        let n = normalize_cnf(&a);
        assert_eq!(normalize_cnf(&n), n);
        assert_eq!(compare(&a, &n), Cmp::Equal);
    }

    #[test]
    fn natural_sum_examples() {
        let z = natural_sum(&Ord::Nat(0), &Ord::eps(Ord::Omega));
        assert_eq!(z, Ord::eps(Ord::Omega));
        let a = Ord::sum(vec![w(Ord::Nat(1)), w(Ord::Nat(0))]);
        let s = natural_sum(&a, &w(Ord::Nat(1)));
        assert_eq!(
            s,
            Ord::Sum(vec![w(Ord::Nat(1)), w(Ord::Nat(1)), w(Ord::Nat(0))])
        );
        let t = natural_sum(
            &w(Ord::sum(vec![Ord::Omega, Ord::Nat(1)])),
            &w(Ord::Nat(2)),
        );
        assert_eq!(
            t,
            Ord::Sum(vec![
                w(Ord::sum(vec![Ord::Omega, Ord::Nat(1)])),
                w(Ord::Nat(2))
            ])
        );
    }

    #[test]
    fn e_tower_examples() {
        assert_eq!(e_tower(0), Ord::sum(vec![Ord::Omega, Ord::Nat(1)]));
        assert_eq!(e_tower(1), w(Ord::sum(vec![Ord::Omega, Ord::Nat(1)])));
        assert_eq!(compare(&e_tower(2), &e_tower(3)), Cmp::Less);
    }

    #[test]
    fn below_eps_examples() {
        assert_eq!(below_eps_omega_plus_1(&Ord::Omega), (true, Some(0)));
        assert_eq!(
            below_eps_omega_plus_1(&Ord::eps_omega_plus_1()),
            (false, None)
        );
        assert_eq!(below_eps_omega_plus_1(&e_tower(2)), (true, Some(3)));
    }

    #[test]
    fn phi0_examples() {
        assert_eq!(phi0_iterate(0, &Ord::Omega), Ord::Omega);
        assert_eq!(phi0_iterate(2, &Ord::Nat(1)), w(w(Ord::Nat(1))));
        assert_eq!(
            compare(&phi0_iterate(3, &w(Ord::Nat(1))), &Ord::eps(Ord::Nat(0))),
            Cmp::Less
        );
    }

    #[test]
    fn omega_mul_left_examples() {
        assert_eq!(omega_mul_left(&Ord::Nat(0)), Ord::Nat(0));
        assert_eq!(omega_mul_left(&Ord::Nat(1)), Ord::Omega);
        assert_eq!(
            omega_mul_left(&w(Ord::Nat(2))),
            w(Ord::sum(vec![Ord::Omega, Ord::Nat(2)]))
        );
        // Ω·ω = ω^{Ω+1} and Ω·(ω+1) = ω^{Ω+1} + ω^Ω.
        let a = Ord::sum(vec![w(Ord::Nat(1)), Ord::Nat(1)]);
        assert_eq!(
            omega_mul_left(&a),
            Ord::Sum(vec![
                w(Ord::sum(vec![Ord::Omega, Ord::Nat(1)])),
                Ord::Omega
            ])
        );
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "0",
            "3",
            "W",
            "w^(W + 1)",
            "e(W + 1)",
            "w^(w^(0)) + 2",
            "W + w^(1) + 1",
        ] {
            let t = parse_ord(s).unwrap();
            let printed = t.to_string();
            let again = parse_ord(&printed).unwrap();
            assert_eq!(t, again, "round trip failed for {s}");
        }
        assert_eq!(parse_ord("w^(W)").unwrap(), w(Ord::Omega));
    }

    #[test]
    fn compare_e2_below_eps_example() {
        let e2 = w(w(Ord::sum(vec![Ord::Omega, Ord::Nat(1)])));
        assert_eq!(compare(&e2, &Ord::eps_omega_plus_1()), Cmp::Less);
    }

    #[test]
    fn add_nat_behaves() {
        assert_eq!(Ord::Nat(2).add_nat(3), Ord::Nat(5));
        let a = Ord::Omega.add_nat(1);
        assert_eq!(a, Ord::Sum(vec![Ord::Omega, Ord::Nat(1)]));
        assert_eq!(a.add_nat(1), Ord::Sum(vec![Ord::Omega, Ord::Nat(2)]));
    }
}
