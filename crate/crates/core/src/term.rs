//! Well partial orders built from ordinals and finite posets with disjoint
//! union (`<+>`) and ordered sum (`++`), plus addressing of their points.
//!
//! Every term denotes a wpo: ordinals are well-orders, finite posets are
//! wpos, and both sums preserve being a wpo.

use std::fmt;

use thiserror::Error;

use crate::ordinal::{parse_ordinal, BelowEnumerator, Ordinal, OrdinalError, DEFAULT_DEPTH_CAP};
use crate::parse::{Cursor, SyntaxError};
use crate::poset::{parse_fin, FinitePoset, PosetError};

/// Bound on parenthesis / `L(..)` nesting accepted by the parsers.
pub const MAX_NESTING: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    InvalidPoset(#[from] PosetError),
    #[error("element {element} does not address a point of {term}")]
    ElementMismatch { element: String, term: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WpoTerm {
    /// An ordinal, as the well-order of all smaller ordinals.
    Ord(Ordinal),
    Fin(FinitePoset),
    /// Disjoint union: sides are incomparable.
    DSum(Box<WpoTerm>, Box<WpoTerm>),
    /// Ordered sum: the whole left side lies below the right side.
    OSum(Box<WpoTerm>, Box<WpoTerm>),
}

/// A point of a [`WpoTerm`]: a path of left/right choices ending at a leaf
/// coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// A point of an ordinal leaf: an ordinal strictly below it.
    Point(Ordinal),
    /// A node of a finite-poset leaf.
    Node(usize),
    Left(Box<Element>),
    Right(Box<Element>),
}

impl Element {
    pub fn left(inner: Element) -> Element {
        Element::Left(Box::new(inner))
    }

    pub fn right(inner: Element) -> Element {
        Element::Right(Box::new(inner))
    }

    pub fn point(o: impl Into<Ordinal>) -> Element {
        Element::Point(o.into())
    }

    pub fn parse(text: &str) -> Result<Element, TermError> {
        let mut cur = Cursor::new(text);
        let e = parse_element(&mut cur, 0)?;
        cur.finish()?;
        Ok(e)
    }
}

fn parse_element(cur: &mut Cursor<'_>, depth: usize) -> Result<Element, TermError> {
    if depth > MAX_NESTING {
        return Err(cur.error("element nested too deeply").into());
    }
    if cur.eat("L(") {
        let e = parse_element(cur, depth + 1)?;
        cur.expect(")")?;
        Ok(Element::left(e))
    } else if cur.eat("R(") {
        let e = parse_element(cur, depth + 1)?;
        cur.expect(")")?;
        Ok(Element::right(e))
    } else if cur.eat("#") {
        let at = cur.mark();
        let n = cur.nat()?;
        let n = usize::try_from(n).map_err(|_| SyntaxError::new(at, "node id too large"))?;
        Ok(Element::Node(n))
    } else {
        Ok(Element::Point(parse_ordinal(cur, DEFAULT_DEPTH_CAP, 0)?))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Point(o) => write!(f, "{o}"),
            Element::Node(n) => write!(f, "#{n}"),
            Element::Left(e) => write!(f, "L({e})"),
            Element::Right(e) => write!(f, "R({e})"),
        }
    }
}

impl WpoTerm {
    pub fn ord(o: Ordinal) -> WpoTerm {
        WpoTerm::Ord(o)
    }

    pub fn dsum(l: WpoTerm, r: WpoTerm) -> WpoTerm {
        WpoTerm::DSum(Box::new(l), Box::new(r))
    }

    pub fn osum(l: WpoTerm, r: WpoTerm) -> WpoTerm {
        WpoTerm::OSum(Box::new(l), Box::new(r))
    }

    pub fn parse(text: &str) -> Result<WpoTerm, TermError> {
        WpoTerm::parse_with_cap(text, DEFAULT_DEPTH_CAP)
    }

    /// Like [`WpoTerm::parse`], with a custom cap on ordinal nesting depth.
    pub fn parse_with_cap(text: &str, cap: usize) -> Result<WpoTerm, TermError> {
        let mut cur = Cursor::new(text);
        let t = parse_dsum(&mut cur, 0, cap)?;
        cur.finish()?;
        Ok(t)
    }

    pub fn validate_element(&self, x: &Element) -> bool {
        match (self, x) {
            (WpoTerm::Ord(alpha), Element::Point(xi)) => xi < alpha,
            (WpoTerm::Fin(p), Element::Node(n)) => *n < p.size(),
            (WpoTerm::DSum(l, _) | WpoTerm::OSum(l, _), Element::Left(e)) => l.validate_element(e),
            (WpoTerm::DSum(_, r) | WpoTerm::OSum(_, r), Element::Right(e)) => r.validate_element(e),
            _ => false,
        }
    }

    pub(crate) fn mismatch(&self, x: &Element) -> TermError {
        TermError::ElementMismatch {
            element: x.to_string(),
            term: self.to_string(),
        }
    }

    /// The partial order of the term.
    pub fn leq(&self, x: &Element, y: &Element) -> Result<bool, TermError> {
        for e in [x, y] {
            if !self.validate_element(e) {
                return Err(self.mismatch(e));
            }
        }
        Ok(self.leq_unchecked(x, y))
    }

    fn leq_unchecked(&self, x: &Element, y: &Element) -> bool {
        match (self, x, y) {
            (WpoTerm::Ord(_), Element::Point(a), Element::Point(b)) => a <= b,
            (WpoTerm::Fin(p), Element::Node(a), Element::Node(b)) => p.leq(*a, *b),
            (WpoTerm::DSum(l, _) | WpoTerm::OSum(l, _), Element::Left(a), Element::Left(b)) => {
                l.leq_unchecked(a, b)
            }
            (WpoTerm::DSum(_, r) | WpoTerm::OSum(_, r), Element::Right(a), Element::Right(b)) => {
                r.leq_unchecked(a, b)
            }
            (WpoTerm::OSum(..), Element::Left(_), Element::Right(_)) => true,
            _ => false,
        }
    }

    /// Number of points, if finite.
    pub fn carrier_size(&self) -> Option<u64> {
        match self {
            WpoTerm::Ord(a) => a.as_finite(),
            WpoTerm::Fin(p) => Some(p.size() as u64),
            WpoTerm::DSum(l, r) | WpoTerm::OSum(l, r) => {
                l.carrier_size()?.checked_add(r.carrier_size()?)
            }
        }
    }

    /// The first `n` points in a fixed enumeration that reaches every point
    /// eventually. Ordinal leaves list their points by increasing
    /// [`Ordinal::size`] and then increasing value; binary nodes alternate
    /// left and right, continuing with one side once the other runs out.
    pub fn enumerate_elements(&self, n: usize) -> Vec<Element> {
        self.enumerate_with(n, &mut BelowEnumerator::new())
    }

    pub(crate) fn enumerate_with(&self, n: usize, en: &mut BelowEnumerator) -> Vec<Element> {
        match self {
            WpoTerm::Ord(alpha) => en
                .first_below(alpha, n)
                .into_iter()
                .map(Element::Point)
                .collect(),
            WpoTerm::Fin(p) => (0..p.size().min(n)).map(Element::Node).collect(),
            WpoTerm::DSum(l, r) | WpoTerm::OSum(l, r) => {
                let left = l.enumerate_with(n, en);
                let right = r.enumerate_with(n, en);
                let mut out = Vec::with_capacity(n);
                let (mut li, mut ri) = (left.into_iter(), right.into_iter());
                while out.len() < n {
                    let a = li.next().map(Element::left);
                    let b = ri.next().map(Element::right);
                    if a.is_none() && b.is_none() {
                        break;
                    }
                    out.extend(a);
                    if out.len() < n {
                        out.extend(b);
                    }
                }
                out
            }
        }
    }

    /// Whether every ordinal leaf is finite.
    pub fn has_finite_leaves(&self) -> bool {
        match self {
            WpoTerm::Ord(a) => a.is_finite(),
            WpoTerm::Fin(_) => true,
            WpoTerm::DSum(l, r) | WpoTerm::OSum(l, r) => {
                l.has_finite_leaves() && r.has_finite_leaves()
            }
        }
    }
}

fn parse_dsum(cur: &mut Cursor<'_>, depth: usize, cap: usize) -> Result<WpoTerm, TermError> {
    let mut acc = parse_osum(cur, depth, cap)?;
    while cur.eat("<+>") {
        acc = WpoTerm::dsum(acc, parse_osum(cur, depth, cap)?);
    }
    Ok(acc)
}

fn parse_osum(cur: &mut Cursor<'_>, depth: usize, cap: usize) -> Result<WpoTerm, TermError> {
    let mut acc = parse_atom(cur, depth, cap)?;
    while cur.eat("++") {
        acc = WpoTerm::osum(acc, parse_atom(cur, depth, cap)?);
    }
    Ok(acc)
}

fn parse_atom(cur: &mut Cursor<'_>, depth: usize, cap: usize) -> Result<WpoTerm, TermError> {
    if depth > MAX_NESTING {
        return Err(cur.error("term nested too deeply").into());
    }
    if cur.eat("ord(") {
        let o = parse_ordinal(cur, cap, 0)?;
        cur.expect(")")?;
        Ok(WpoTerm::Ord(o))
    } else if cur.peek() == Some(b'f') {
        Ok(WpoTerm::Fin(parse_fin(cur)?))
    } else if cur.eat("(") {
        let t = parse_dsum(cur, depth + 1, cap)?;
        cur.expect(")")?;
        Ok(t)
    } else {
        Err(cur.error("expected `ord(`, `fin{` or `(`").into())
    }
}

impl fmt::Display for WpoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WpoTerm::Ord(a) => write!(f, "ord({a})"),
            WpoTerm::Fin(p) => write!(f, "{p}"),
            WpoTerm::DSum(l, r) => {
                write!(f, "{l} <+> ")?;
                match **r {
                    WpoTerm::DSum(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
            WpoTerm::OSum(l, r) => {
                match **l {
                    WpoTerm::DSum(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                f.write_str(" ++ ")?;
                match **r {
                    WpoTerm::DSum(..) | WpoTerm::OSum(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
        }
    }
}

impl std::str::FromStr for WpoTerm {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WpoTerm::parse(s)
    }
}
