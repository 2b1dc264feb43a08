//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^e₀·c₀ + ω^e₁·c₁ + … + ω^eₖ·cₖ` with
//! strictly decreasing exponents `e₀ > e₁ > … > eₖ` (themselves ordinals)
//! and positive integer coefficients. The empty sum is `0`.
//!
//! Comparison is the lexicographic comparison of the term lists, with each
//! term compared first by exponent and then by coefficient; this is exactly
//! the order of the ordinals denoted, so the derived `Ord` is the ordinal
//! order.
//!
//! Coefficients are `u64`; arithmetic that would overflow a coefficient
//! panics.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::parse::{Cursor, SyntaxError};

/// Default bound on exponent nesting accepted by [`Ordinal::make`] and the parser.
pub const DEFAULT_DEPTH_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("exponents must be strictly decreasing (term {index})")]
    NonDecreasingExponents { index: usize },
    #[error("coefficient of term {index} is zero")]
    ZeroCoefficient { index: usize },
    #[error("left operand is greater than right operand")]
    NotLessOrEqual,
    #[error("ordinal {0} is not a successor")]
    NotASuccessor(Ordinal),
    #[error("ordinal {0} is not a limit")]
    NotALimit(Ordinal),
    #[error("unit exponents are not nonincreasing at index {index}")]
    UnitsNotSorted { index: usize },
    #[error("exponent nesting depth {depth} exceeds cap {cap}")]
    DepthExceeded { depth: usize, cap: usize },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// One summand `ω^exp · coef` of a Cantor normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub exp: Ordinal,
    pub coef: u64,
}

/// Terms are shared, so cloning an ordinal (or an exponent) is cheap.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordinal {
    terms: Arc<Vec<Term>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Zero,
    Successor,
    Limit,
}

/// An ordinal written as a nonincreasing list of ω-power exponents, one per
/// unit summand (coefficients expanded into repetitions).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitList(Vec<Ordinal>);

impl UnitList {
    pub fn new(exponents: Vec<Ordinal>) -> Result<Self, OrdinalError> {
        if let Some(index) = exponents.windows(2).position(|w| w[0] < w[1]) {
            return Err(OrdinalError::UnitsNotSorted { index: index + 1 });
        }
        Ok(UnitList(exponents))
    }

    pub fn exponents(&self) -> &[Ordinal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ordinal {
    fn from_terms(terms: Vec<Term>) -> Self {
        Ordinal {
            terms: Arc::new(terms),
        }
    }

    pub fn zero() -> Self {
        Ordinal::from_terms(Vec::new())
    }

    pub fn one() -> Self {
        Ordinal::from(1)
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// Builds a validated ordinal from `(exponent, coefficient)` pairs,
    /// rejecting anything that is not already in normal form.
    pub fn make(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        Self::make_with_cap(terms, DEFAULT_DEPTH_CAP)
    }

    pub fn make_with_cap(terms: Vec<(Ordinal, u64)>, cap: usize) -> Result<Self, OrdinalError> {
        for (index, (_, coef)) in terms.iter().enumerate() {
            if *coef == 0 {
                return Err(OrdinalError::ZeroCoefficient { index });
            }
        }
        if let Some(index) = terms.windows(2).position(|w| w[0].0 <= w[1].0) {
            return Err(OrdinalError::NonDecreasingExponents { index: index + 1 });
        }
        let ord = Ordinal::from_terms(
            terms
                .into_iter()
                .map(|(exp, coef)| Term { exp, coef })
                .collect(),
        );
        let depth = ord.depth();
        if depth > cap {
            return Err(OrdinalError::DepthExceeded { depth, cap });
        }
        Ok(ord)
    }

    /// `ω^exp`.
    pub fn omega_pow(exp: Ordinal) -> Self {
        Ordinal::from_terms(vec![Term { exp, coef: 1 }])
    }

    /// `ω^exp · coef`; zero when `coef == 0`.
    pub fn monomial(exp: Ordinal, coef: u64) -> Self {
        if coef == 0 {
            return Ordinal::zero();
        }
        Ordinal::from_terms(vec![Term { exp, coef }])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a natural number, if finite.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coef),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    /// Exponent nesting depth: 0 for zero, otherwise one more than the
    /// deepest exponent (so naturals have depth 1 and ω has depth 2).
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|t| 1 + t.exp.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exp)
    }

    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exp >= lead.exp)
            .cloned()
            .collect();
        let mut rest = rhs.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exp == lead.exp {
                last.coef = checked_coef(last.coef.checked_add(lead.coef));
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal::from_terms(terms)
    }

    /// The unique `ρ` with `self + ρ == other`, defined when `self ≤ other`.
    pub fn left_sub(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        if self > other {
            return Err(OrdinalError::NotLessOrEqual);
        }
        let i = self
            .terms
            .iter()
            .zip(other.terms.iter())
            .take_while(|(a, b)| a == b)
            .count();
        let (Some(a), Some(b)) = (self.terms.get(i), other.terms.get(i)) else {
            // self is a prefix of other
            return Ok(Ordinal::from_terms(other.terms[i..].to_vec()));
        };
        let mut terms = other.terms[i..].to_vec();
        if a.exp == b.exp {
            // a.coef < b.coef since self < other
            terms[0].coef = b.coef - a.coef;
        }
        Ok(Ordinal::from_terms(terms))
    }

    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = self.terms.first() else {
            return Ordinal::zero();
        };
        let mut acc = Ordinal::zero();
        for t in rhs.terms.iter() {
            let piece = if t.exp.is_zero() {
                let mut terms = self.terms.to_vec();
                terms[0].coef = checked_coef(terms[0].coef.checked_mul(t.coef));
                Ordinal::from_terms(terms)
            } else {
                Ordinal::monomial(lead.exp.add(&t.exp), t.coef)
            };
            acc = acc.add(&piece);
        }
        acc
    }

    /// Hessenberg natural sum: coefficient-wise addition per exponent.
    pub fn nat_sum(&self, rhs: &Ordinal) -> Ordinal {
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), rhs.terms.iter().peekable());
        loop {
            let next = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => a.next().cloned().unwrap(),
                (None, Some(_)) => b.next().cloned().unwrap(),
                (Some(x), Some(y)) => match x.exp.cmp(&y.exp) {
                    Ordering::Greater => a.next().cloned().unwrap(),
                    Ordering::Less => b.next().cloned().unwrap(),
                    Ordering::Equal => {
                        let coef = checked_coef(x.coef.checked_add(y.coef));
                        let exp = x.exp.clone();
                        a.next();
                        b.next();
                        Term { exp, coef }
                    }
                },
            };
            terms.push(next);
        }
        Ordinal::from_terms(terms)
    }

    pub fn to_units(&self) -> UnitList {
        let mut units = Vec::new();
        for t in self.terms.iter() {
            for _ in 0..t.coef {
                units.push(t.exp.clone());
            }
        }
        UnitList(units)
    }

    pub fn from_units(units: &UnitList) -> Ordinal {
        let mut terms: Vec<Term> = Vec::new();
        for e in &units.0 {
            match terms.last_mut() {
                Some(last) if last.exp == *e => last.coef += 1,
                _ => terms.push(Term {
                    exp: e.clone(),
                    coef: 1,
                }),
            }
        }
        Ordinal::from_terms(terms)
    }

    pub fn classify(&self) -> Classification {
        match self.terms.last() {
            None => Classification::Zero,
            Some(t) if t.exp.is_zero() => Classification::Successor,
            Some(_) => Classification::Limit,
        }
    }

    pub fn pred(&self) -> Result<Ordinal, OrdinalError> {
        if self.classify() != Classification::Successor {
            return Err(OrdinalError::NotASuccessor(self.clone()));
        }
        let mut terms = self.terms.to_vec();
        let last = terms.last_mut().unwrap();
        if last.coef == 1 {
            terms.pop();
        } else {
            last.coef -= 1;
        }
        Ok(Ordinal::from_terms(terms))
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// Splits off the last unit summand: `self = γ + ω^α`.
    fn split_last_unit(&self) -> Option<(Ordinal, Ordinal)> {
        let last = self.terms.last()?;
        let mut gamma = self.terms.to_vec();
        let exp = last.exp.clone();
        if last.coef == 1 {
            gamma.pop();
        } else {
            gamma.last_mut().unwrap().coef -= 1;
        }
        Some((Ordinal::from_terms(gamma), exp))
    }

    /// The `n`-th member of the fundamental sequence of a limit ordinal.
    ///
    /// Writing `λ = γ + ω^α`, the sequence is `γ + ω^β·n` when `α = β+1`,
    /// and `γ + Σ_{j<n} ω^{βⱼ}` (ordinal sum, so it collapses) with
    /// `βⱼ = fund_seq(α, j)` when `α` is itself a limit.
    pub fn fund_seq(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        if self.classify() != Classification::Limit {
            return Err(OrdinalError::NotALimit(self.clone()));
        }
        let (gamma, alpha) = self.split_last_unit().expect("limit is nonzero");
        match alpha.classify() {
            Classification::Successor => {
                let beta = alpha.pred()?;
                Ok(gamma.add(&Ordinal::monomial(beta, n)))
            }
            Classification::Limit => {
                let mut acc = gamma;
                for j in 0..n {
                    acc = acc.add(&Ordinal::omega_pow(alpha.fund_seq(j)?));
                }
                Ok(acc)
            }
            Classification::Zero => unreachable!("last exponent of a limit is positive"),
        }
    }

    /// True iff the ordinal is a single ω-power `ω^a` (coefficient 1).
    pub fn is_indecomposable(&self) -> bool {
        matches!(self.terms.as_slice(), [t] if t.coef == 1)
    }

    /// Size used to order the enumeration of ordinals: zero has size 0 and
    /// each term `ω^e·c` contributes `size(e) + c`.
    pub fn size(&self) -> u64 {
        self.terms.iter().map(|t| t.exp.size() + t.coef).sum()
    }

    pub fn parse(text: &str) -> Result<Ordinal, OrdinalError> {
        Self::parse_with_cap(text, DEFAULT_DEPTH_CAP)
    }

    pub fn parse_with_cap(text: &str, cap: usize) -> Result<Ordinal, OrdinalError> {
        let mut cur = Cursor::new(text);
        let ord = parse_ordinal(&mut cur, cap, 0)?;
        cur.finish()?;
        Ok(ord)
    }

    /// Reads `text` as a plain sum of parts in any order and evaluates it
    /// with ordinal addition, so `w + w^2` becomes `w^2`.
    pub fn parse_normalizing(text: &str, cap: usize) -> Result<Ordinal, OrdinalError> {
        let mut cur = Cursor::new(text);
        let parts = parse_parts(&mut cur, cap, 0)?;
        cur.finish()?;
        Ok(parts
            .into_iter()
            .fold(Ordinal::zero(), |acc, (_, part)| acc.add(&part)))
    }
}

fn checked_coef(v: Option<u64>) -> u64 {
    v.expect("ordinal coefficient overflowed u64")
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::monomial(Ordinal::zero(), n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coef)?;
                continue;
            }
            f.write_str("w")?;
            match t.exp.as_finite() {
                Some(1) => {}
                Some(d) if d < 10 => write!(f, "^{d}")?,
                _ => write!(f, "^({})", t.exp)?,
            }
            if t.coef > 1 {
                write!(f, "*{}", t.coef)?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ordinal::parse(s)
    }
}

/// Parses `ordinal := part ('+' part)* | '0'` at the cursor, requiring
/// nonincreasing exponents and collecting equal ones.
pub(crate) fn parse_ordinal(
    cur: &mut Cursor<'_>,
    cap: usize,
    depth: usize,
) -> Result<Ordinal, OrdinalError> {
    let parts = parse_parts(cur, cap, depth)?;
    let mut terms: Vec<Term> = Vec::new();
    for (pos, part) in parts {
        let Some(t) = part.terms.iter().next().cloned() else {
            continue;
        };
        match terms.last_mut() {
            Some(last) if last.exp < t.exp => {
                return Err(SyntaxError::new(pos, "exponents must be nonincreasing").into())
            }
            Some(last) if last.exp == t.exp => {
                last.coef = last
                    .coef
                    .checked_add(t.coef)
                    .ok_or_else(|| SyntaxError::new(pos, "coefficient too large"))?;
            }
            _ => terms.push(t),
        }
    }
    Ok(Ordinal::from_terms(terms))
}

/// Each part is returned with its starting position and as a monomial.
fn parse_parts(
    cur: &mut Cursor<'_>,
    cap: usize,
    depth: usize,
) -> Result<Vec<(usize, Ordinal)>, OrdinalError> {
    if depth >= cap {
        return Err(OrdinalError::DepthExceeded {
            depth: depth + 1,
            cap,
        });
    }
    let mut parts = Vec::new();
    loop {
        let pos = cur.mark();
        let part = match cur.peek() {
            Some(b'w') => {
                cur.bump();
                let exp = if cur.eat("^") {
                    match cur.peek() {
                        Some(b'(') => {
                            cur.bump();
                            let e = parse_ordinal(cur, cap, depth + 1)?;
                            cur.expect(")")?;
                            e
                        }
                        Some(d) if d.is_ascii_digit() => {
                            cur.bump();
                            Ordinal::from(u64::from(d - b'0'))
                        }
                        _ => return Err(cur.error("expected a digit or `(` after `^`").into()),
                    }
                } else {
                    Ordinal::one()
                };
                if exp.depth() + 1 > cap {
                    return Err(OrdinalError::DepthExceeded {
                        depth: exp.depth() + 1,
                        cap,
                    });
                }
                let coef = if cur.eat("*") {
                    let at = cur.mark();
                    let c = cur.nat()?;
                    if c == 0 {
                        return Err(SyntaxError::new(at, "coefficient must be at least 1").into());
                    }
                    c
                } else {
                    1
                };
                Ordinal::monomial(exp, coef)
            }
            Some(d) if d.is_ascii_digit() => {
                let n = cur.nat()?;
                if n == 0 && !parts.is_empty() {
                    return Err(SyntaxError::new(pos, "`0` cannot appear inside a sum").into());
                }
                Ordinal::from(n)
            }
            _ => return Err(cur.error("expected `w` or a number").into()),
        };
        let standalone_zero = part.is_zero();
        parts.push((pos, part));
        if !cur.eat("+") {
            break;
        }
        if standalone_zero {
            return Err(SyntaxError::new(pos, "`0` cannot appear inside a sum").into());
        }
    }
    Ok(parts)
}

/// Ordinals strictly below a bound, grouped by [`Ordinal::size`]; within a
/// size group they are listed in increasing order. Every ordinal below the
/// bound appears in exactly one group, and each group is finite.
#[derive(Debug, Default)]
pub struct BelowEnumerator {
    memo: HashMap<(Ordinal, u64), Vec<Ordinal>>,
}

impl BelowEnumerator {
    pub fn new() -> Self {
        Self::default()
    }

    /// All `β < bound` with `size(β) == size`, sorted increasingly.
    pub fn of_size(&mut self, bound: &Ordinal, size: u64) -> Vec<Ordinal> {
        if let Some(hit) = self.memo.get(&(bound.clone(), size)) {
            return hit.clone();
        }
        let out = self.compute(bound, size);
        self.memo.insert((bound.clone(), size), out.clone());
        out
    }

    fn compute(&mut self, bound: &Ordinal, size: u64) -> Vec<Ordinal> {
        let Some(first) = bound.terms.first() else {
            return Vec::new();
        };
        if size == 0 {
            return vec![Ordinal::zero()];
        }
        let bound_rest = Ordinal::from_terms(bound.terms[1..].to_vec());
        let lead_size = first.exp.size();
        let mut out = Vec::new();
        // first term ω^e·c, e of size k, remaining size for the tail
        for k in 0..size {
            let mut exps = self.of_size(&first.exp, k);
            if lead_size == k {
                exps.push(first.exp.clone());
            }
            for e in exps {
                let at_bound = e == first.exp;
                for c in 1..=(size - k) {
                    if at_bound && c > first.coef {
                        break;
                    }
                    let tail_bound = if at_bound && c == first.coef {
                        bound_rest.clone()
                    } else {
                        Ordinal::omega_pow(e.clone())
                    };
                    for tail in self.of_size(&tail_bound, size - k - c) {
                        let mut terms = vec![Term {
                            exp: e.clone(),
                            coef: c,
                        }];
                        terms.extend(tail.terms.iter().cloned());
                        out.push(Ordinal::from_terms(terms));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// The first `n` ordinals below `bound` in size-then-value order, or all
    /// of them when the bound is finite and at most `n`.
    pub fn first_below(&mut self, bound: &Ordinal, n: usize) -> Vec<Ordinal> {
        let mut out = Vec::new();
        let total = bound.as_finite();
        let mut size = 0;
        while out.len() < n {
            if let Some(t) = total {
                if out.len() as u64 >= t {
                    break;
                }
            }
            for o in self.of_size(bound, size) {
                if out.len() == n {
                    break;
                }
                out.push(o);
            }
            size += 1;
        }
        out
    }
}
