//! Maximal order types and heights of [`WpoTerm`]s, with explicit witnesses.
//!
//! * `o(ord(α)) = α`, `o(fin D) = |D|`, `o(P ++ Q) = o(P) + o(Q)` and
//!   `o(P <+> Q) = o(P) # o(Q)` (natural sum).
//! * `ht(ord(α)) = α`, `ht(fin D)` is the longest chain, `ht(P ++ Q) =
//!   ht(P) + ht(Q)` and `ht(P <+> Q) = max(ht(P), ht(Q))`.
//!
//! The extension witness for a disjoint union lays out the Cantor normal
//! form blocks `ω^e·c` of both sides merged by nonincreasing exponent, the
//! left side's block first on ties. A point of a side sits in one of its
//! side's blocks and keeps its offset inside that block.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::oracle::{mc_by_recursion, mle_by_recursion, node_heights, OracleError, OracleLimits};
use crate::ordinal::{BelowEnumerator, Ordinal};
use crate::term::{Element, TermError, WpoTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaxTypeError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("position {xi} is not below {bound}")]
    PositionOutOfRange { xi: Ordinal, bound: Ordinal },
    #[error("element {0} is not on the chain")]
    NotInChain(String),
}

pub fn max_order_type(term: &WpoTerm) -> Ordinal {
    match term {
        WpoTerm::Ord(a) => a.clone(),
        WpoTerm::Fin(p) => Ordinal::from(p.size() as u64),
        WpoTerm::OSum(l, r) => max_order_type(l).add(&max_order_type(r)),
        WpoTerm::DSum(l, r) => max_order_type(l).nat_sum(&max_order_type(r)),
    }
}

pub fn height(term: &WpoTerm) -> Ordinal {
    match term {
        WpoTerm::Ord(a) => a.clone(),
        WpoTerm::Fin(p) => Ordinal::from(crate::oracle::desc_tree_rank(p) as u64),
        WpoTerm::OSum(l, r) => height(l).add(&height(r)),
        WpoTerm::DSum(l, r) => height(l).max(height(r)),
    }
}

/// Height of a single point: the height of the set of points strictly below it.
pub fn element_height(term: &WpoTerm, x: &Element) -> Result<Ordinal, TermError> {
    if !term.validate_element(x) {
        return Err(term.mismatch(x));
    }
    fn go(term: &WpoTerm, x: &Element) -> Ordinal {
        match (term, x) {
            (WpoTerm::Ord(_), Element::Point(xi)) => xi.clone(),
            (WpoTerm::Fin(p), Element::Node(n)) => Ordinal::from(node_heights(p)[*n] as u64),
            (WpoTerm::OSum(l, _) | WpoTerm::DSum(l, _), Element::Left(e)) => go(l, e),
            (WpoTerm::OSum(l, r), Element::Right(e)) => height(l).add(&go(r, e)),
            (WpoTerm::DSum(_, r), Element::Right(e)) => go(r, e),
            _ => unreachable!("validated"),
        }
    }
    Ok(go(term, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// One `ω^exp·coef` block of the merged layout of a disjoint union.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Block {
    side: Side,
    len: Ordinal,
    /// Start of the block within its own side.
    side_start: Ordinal,
    /// Start of the block within the merged order.
    merged_start: Ordinal,
}

#[derive(Debug, Clone)]
enum ExtNode {
    Ord,
    Fin {
        order: Vec<usize>,
        pos: Vec<usize>,
    },
    OSum {
        left: Box<Ext>,
        right: Box<Ext>,
    },
    DSum {
        left: Box<Ext>,
        right: Box<Ext>,
        blocks: Vec<Block>,
    },
}

#[derive(Debug, Clone)]
struct Ext {
    otype: Ordinal,
    node: ExtNode,
}

/// Blocks of a Cantor normal form with their starting offsets.
fn side_blocks(a: &Ordinal) -> Vec<(Ordinal, Ordinal)> {
    let mut start = Ordinal::zero();
    let mut out = Vec::new();
    for t in a.terms() {
        let len = Ordinal::monomial(t.exp.clone(), t.coef);
        out.push((start.clone(), len.clone()));
        start = start.add(&len);
    }
    out
}

fn merge_blocks(left: &Ordinal, right: &Ordinal) -> Vec<Block> {
    let lb = side_blocks(left);
    let rb = side_blocks(right);
    let (lt, rt) = (left.terms(), right.terms());
    let (mut i, mut j) = (0, 0);
    let mut merged_start = Ordinal::zero();
    let mut out = Vec::with_capacity(lb.len() + rb.len());
    while i < lb.len() || j < rb.len() {
        let take_left = match (lt.get(i), rt.get(j)) {
            (Some(a), Some(b)) => a.exp.cmp(&b.exp) != Ordering::Less,
            (Some(_), None) => true,
            _ => false,
        };
        let (side, (side_start, len)) = if take_left {
            i += 1;
            (Side::Left, lb[i - 1].clone())
        } else {
            j += 1;
            (Side::Right, rb[j - 1].clone())
        };
        let next = merged_start.add(&len);
        out.push(Block {
            side,
            len,
            side_start,
            merged_start,
        });
        merged_start = next;
    }
    out
}

impl Ext {
    fn build(term: &WpoTerm, limits: &OracleLimits) -> Result<Ext, OracleError> {
        Ok(match term {
            WpoTerm::Ord(a) => Ext {
                otype: a.clone(),
                node: ExtNode::Ord,
            },
            WpoTerm::Fin(p) => {
                let order = mle_by_recursion(p, limits)?;
                let mut pos = vec![0; order.len()];
                for (i, &x) in order.iter().enumerate() {
                    pos[x] = i;
                }
                Ext {
                    otype: Ordinal::from(order.len() as u64),
                    node: ExtNode::Fin { order, pos },
                }
            }
            WpoTerm::OSum(l, r) => {
                let (left, right) = (Ext::build(l, limits)?, Ext::build(r, limits)?);
                Ext {
                    otype: left.otype.add(&right.otype),
                    node: ExtNode::OSum {
                        left: Box::new(left),
                        right: Box::new(right),
                    },
                }
            }
            WpoTerm::DSum(l, r) => {
                let (left, right) = (Ext::build(l, limits)?, Ext::build(r, limits)?);
                let blocks = merge_blocks(&left.otype, &right.otype);
                Ext {
                    otype: left.otype.nat_sum(&right.otype),
                    node: ExtNode::DSum {
                        left: Box::new(left),
                        right: Box::new(right),
                        blocks,
                    },
                }
            }
        })
    }

    /// Assumes `x` has been validated against the term.
    fn position(&self, x: &Element) -> Ordinal {
        match (&self.node, x) {
            (ExtNode::Ord, Element::Point(xi)) => xi.clone(),
            (ExtNode::Fin { pos, .. }, Element::Node(n)) => Ordinal::from(pos[*n] as u64),
            (ExtNode::OSum { left, .. }, Element::Left(e)) => left.position(e),
            (ExtNode::OSum { left, right }, Element::Right(e)) => {
                left.otype.add(&right.position(e))
            }
            (
                ExtNode::DSum {
                    left,
                    right,
                    blocks,
                },
                Element::Left(e) | Element::Right(e),
            ) => {
                let (side, inner) = match x {
                    Element::Left(_) => (Side::Left, left.position(e)),
                    _ => (Side::Right, right.position(e)),
                };
                let block = blocks
                    .iter()
                    .rfind(|b| b.side == side && b.side_start <= inner)
                    .expect("inner position lies in some block");
                let offset = block
                    .side_start
                    .left_sub(&inner)
                    .expect("block start is below the position");
                block.merged_start.add(&offset)
            }
            _ => unreachable!("element validated against the term"),
        }
    }

    /// Assumes `xi < self.otype`.
    fn element_at(&self, xi: &Ordinal) -> Element {
        match &self.node {
            ExtNode::Ord => Element::Point(xi.clone()),
            ExtNode::Fin { order, .. } => {
                Element::Node(order[xi.as_finite().expect("finite position") as usize])
            }
            ExtNode::OSum { left, right } => {
                if *xi < left.otype {
                    Element::left(left.element_at(xi))
                } else {
                    let rest = left.otype.left_sub(xi).expect("xi past the left block");
                    Element::right(right.element_at(&rest))
                }
            }
            ExtNode::DSum {
                left,
                right,
                blocks,
            } => {
                let block = blocks
                    .iter()
                    .rfind(|b| b.merged_start <= *xi)
                    .expect("first block starts at zero");
                let offset = block
                    .merged_start
                    .left_sub(xi)
                    .expect("block start below xi");
                let inner = block.side_start.add(&offset);
                match block.side {
                    Side::Left => Element::left(left.element_at(&inner)),
                    Side::Right => Element::right(right.element_at(&inner)),
                }
            }
        }
    }
}

/// A linear extension of a term together with its order isomorphism onto
/// `max_order_type(term)`.
#[derive(Debug, Clone)]
pub struct ExtensionWitness {
    source: WpoTerm,
    root: Ext,
}

impl ExtensionWitness {
    pub fn source(&self) -> &WpoTerm {
        &self.source
    }

    /// Order type of the extension; equal to `max_order_type(source)`.
    pub fn order_type(&self) -> &Ordinal {
        &self.root.otype
    }

    pub fn position(&self, x: &Element) -> Result<Ordinal, MaxTypeError> {
        if !self.source.validate_element(x) {
            return Err(self.source.mismatch(x).into());
        }
        Ok(self.root.position(x))
    }

    pub fn element_at(&self, xi: &Ordinal) -> Result<Element, MaxTypeError> {
        if *xi >= self.root.otype {
            return Err(MaxTypeError::PositionOutOfRange {
                xi: xi.clone(),
                bound: self.root.otype.clone(),
            });
        }
        Ok(self.root.element_at(xi))
    }

    pub fn ext_leq(&self, x: &Element, y: &Element) -> Result<bool, MaxTypeError> {
        Ok(self.position(x)? <= self.position(y)?)
    }
}

pub fn mle_extension(
    term: &WpoTerm,
    limits: &OracleLimits,
) -> Result<ExtensionWitness, MaxTypeError> {
    Ok(ExtensionWitness {
        source: term.clone(),
        root: Ext::build(term, limits)?,
    })
}

#[derive(Debug, Clone)]
enum ChainNode {
    Ord,
    Fin { chain: Vec<usize> },
    OSum { left: Box<Chain>, right: Box<Chain> },
    DSum { side: Side, inner: Box<Chain> },
}

#[derive(Debug, Clone)]
struct Chain {
    height: Ordinal,
    node: ChainNode,
}

impl Chain {
    fn build(term: &WpoTerm, limits: &OracleLimits) -> Result<Chain, OracleError> {
        Ok(match term {
            WpoTerm::Ord(a) => Chain {
                height: a.clone(),
                node: ChainNode::Ord,
            },
            WpoTerm::Fin(p) => {
                let chain = mc_by_recursion(p, limits)?;
                Chain {
                    height: Ordinal::from(chain.len() as u64),
                    node: ChainNode::Fin { chain },
                }
            }
            WpoTerm::OSum(l, r) => {
                let (left, right) = (Chain::build(l, limits)?, Chain::build(r, limits)?);
                Chain {
                    height: left.height.add(&right.height),
                    node: ChainNode::OSum {
                        left: Box::new(left),
                        right: Box::new(right),
                    },
                }
            }
            WpoTerm::DSum(l, r) => {
                let (hl, hr) = (height(l), height(r));
                let (side, inner) = if hl >= hr {
                    (Side::Left, Chain::build(l, limits)?)
                } else {
                    (Side::Right, Chain::build(r, limits)?)
                };
                Chain {
                    height: inner.height.clone(),
                    node: ChainNode::DSum {
                        side,
                        inner: Box::new(inner),
                    },
                }
            }
        })
    }

    fn position(&self, x: &Element) -> Option<Ordinal> {
        match (&self.node, x) {
            (ChainNode::Ord, Element::Point(xi)) => Some(xi.clone()),
            (ChainNode::Fin { chain }, Element::Node(n)) => chain
                .iter()
                .position(|c| c == n)
                .map(|i| Ordinal::from(i as u64)),
            (ChainNode::OSum { left, .. }, Element::Left(e)) => left.position(e),
            (ChainNode::OSum { left, right }, Element::Right(e)) => {
                right.position(e).map(|p| left.height.add(&p))
            }
            (
                ChainNode::DSum {
                    side: Side::Left,
                    inner,
                },
                Element::Left(e),
            )
            | (
                ChainNode::DSum {
                    side: Side::Right,
                    inner,
                },
                Element::Right(e),
            ) => inner.position(e),
            _ => None,
        }
    }

    fn element_at(&self, xi: &Ordinal) -> Element {
        match &self.node {
            ChainNode::Ord => Element::Point(xi.clone()),
            ChainNode::Fin { chain } => {
                Element::Node(chain[xi.as_finite().expect("finite position") as usize])
            }
            ChainNode::OSum { left, right } => {
                if *xi < left.height {
                    Element::left(left.element_at(xi))
                } else {
                    let rest = left.height.left_sub(xi).expect("xi past the left chain");
                    Element::right(right.element_at(&rest))
                }
            }
            ChainNode::DSum { side, inner } => match side {
                Side::Left => Element::left(inner.element_at(xi)),
                Side::Right => Element::right(inner.element_at(xi)),
            },
        }
    }
}

/// A chain of a term of order type `height(term)`, with its isomorphism.
/// The point at position `ξ` has height exactly `ξ` in the term.
#[derive(Debug, Clone)]
pub struct ChainWitness {
    source: WpoTerm,
    root: Chain,
}

impl ChainWitness {
    pub fn source(&self) -> &WpoTerm {
        &self.source
    }

    pub fn order_type(&self) -> &Ordinal {
        &self.root.height
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.source.validate_element(x) && self.root.position(x).is_some()
    }

    pub fn position(&self, x: &Element) -> Result<Ordinal, MaxTypeError> {
        if !self.source.validate_element(x) {
            return Err(self.source.mismatch(x).into());
        }
        self.root
            .position(x)
            .ok_or_else(|| MaxTypeError::NotInChain(x.to_string()))
    }

    pub fn element_at(&self, xi: &Ordinal) -> Result<Element, MaxTypeError> {
        if *xi >= self.root.height {
            return Err(MaxTypeError::PositionOutOfRange {
                xi: xi.clone(),
                bound: self.root.height.clone(),
            });
        }
        Ok(self.root.element_at(xi))
    }

    /// Which side of a top-level disjoint union the chain lives in.
    pub fn top_side(&self) -> Option<Side> {
        match &self.root.node {
            ChainNode::DSum { side, .. } => Some(*side),
            _ => None,
        }
    }
}

pub fn max_chain(term: &WpoTerm, limits: &OracleLimits) -> Result<ChainWitness, MaxTypeError> {
    Ok(ChainWitness {
        source: term.clone(),
        root: Chain::build(term, limits)?,
    })
}

/// Indices of a longest subsequence whose entries are pairwise `≤` in
/// sequence order, lexicographically least among the longest ones.
pub fn increasing_subsequence<T>(seq: &[T], leq: impl Fn(&T, &T) -> bool) -> Vec<usize> {
    let n = seq.len();
    // best[i]: length of the longest such subsequence starting at i
    let mut best = vec![1usize; n];
    for i in (0..n).rev() {
        for j in i + 1..n {
            if leq(&seq[i], &seq[j]) {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    let Some(&top) = best.iter().max() else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity(top);
    let mut cur = (0..n).find(|&i| best[i] == top).unwrap();
    out.push(cur);
    while best[cur] > 1 {
        cur = (cur + 1..n)
            .find(|&j| best[j] + 1 == best[cur] && leq(&seq[cur], &seq[j]))
            .unwrap();
        out.push(cur);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchmidtError {
    #[error("row {row} must have at least {need} entries")]
    MalformedArray { row: usize, need: usize },
}

/// Result of [`schmidt_extract`]: the prefix of `g` that fits in the
/// horizon, and the index `j` at which the refinement ran out of indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchmidtPrefix {
    pub g: Vec<usize>,
    pub horizon_exhausted_at: usize,
}

/// Finite-horizon version of the nested refinement producing a strictly
/// increasing `g` with `y[g(j)][j] ≤ y[g(j+1)][j]` for every produced `j`.
///
/// `A_0` is a longest increasing subsequence of column 0 over rows
/// `0..horizon`; `A_j` keeps the members of `A_{j-1}` below `j` (where
/// column `j` is undefined) and refines the rest along column `j`. Then
/// `g(j)` is the `j`-th smallest member of `A_j`.
pub fn schmidt_extract<T>(
    y: &[Vec<T>],
    horizon: usize,
    leq: impl Fn(&T, &T) -> bool,
) -> Result<SchmidtPrefix, SchmidtError> {
    for (row, entries) in y.iter().enumerate().take(horizon) {
        if entries.len() < row + 1 {
            return Err(SchmidtError::MalformedArray { row, need: row + 1 });
        }
    }
    if y.len() < horizon {
        return Err(SchmidtError::MalformedArray {
            row: y.len(),
            need: y.len() + 1,
        });
    }
    let mut current: Vec<usize> = (0..horizon).collect();
    let mut g = Vec::new();
    for j in 0..horizon {
        let (kept, rest): (Vec<usize>, Vec<usize>) = current.iter().partition(|&&i| i < j);
        let column: Vec<&T> = rest.iter().map(|&i| &y[i][j]).collect();
        let chosen = increasing_subsequence(&column, |a, b| leq(a, b));
        let mut next = kept;
        next.extend(chosen.into_iter().map(|k| rest[k]));
        if next.len() <= j {
            return Ok(SchmidtPrefix {
                g,
                horizon_exhausted_at: j,
            });
        }
        g.push(next[j]);
        current = next;
    }
    Ok(SchmidtPrefix {
        horizon_exhausted_at: g.len(),
        g,
    })
}

/// Side of a shuffle sample.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize,
)]
pub enum ShuffleSide {
    I,
    J,
}

/// A finite prefix of a shuffle `L` of two well-orders `I` and `J` without
/// maximum, with the accessors the embedding needs. Points are labels whose
/// numeric order is their order within their own side.
///
/// With `I` cofinal the target is `J·I`: `least` is the least point of `J`
/// and `t` maps each point of `J` to the least point of `I` above it in `L`.
/// With `J` cofinal the roles swap and the target is `I·J`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ShufflePresentation {
    /// Points listed in `L`-order.
    pub sample: Vec<(ShuffleSide, u64)>,
    #[serde(default = "default_cofinal")]
    pub cofinal: ShuffleSide,
    pub least: u64,
    pub succ_i: std::collections::BTreeMap<u64, u64>,
    pub succ_j: std::collections::BTreeMap<u64, u64>,
    pub t: std::collections::BTreeMap<u64, u64>,
}

fn default_cofinal() -> ShuffleSide {
    ShuffleSide::I
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error("missing accessor {accessor} for {side:?}:{label}")]
    MissingAccessor {
        accessor: &'static str,
        side: ShuffleSide,
        label: u64,
    },
    #[error("embedding does not preserve order between {x:?} and {y:?}")]
    NotOrderPreserving {
        x: (ShuffleSide, u64),
        y: (ShuffleSide, u64),
    },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShuffleRow {
    pub side: ShuffleSide,
    pub label: u64,
    /// `(non-cofinal coordinate, cofinal coordinate)`; the second dominates.
    pub image: (u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShuffleReport {
    pub target: String,
    pub rows: Vec<ShuffleRow>,
    pub pairs_checked: usize,
}

impl ShufflePresentation {
    /// Presentation of an interleaving of two copies of ω, each side's
    /// points labelled by rank. The cofinal side is the side of the last
    /// point; `t` is read off the sample where possible.
    pub fn from_interleaving(sides: &[ShuffleSide]) -> ShufflePresentation {
        let cofinal = sides.last().copied().unwrap_or(ShuffleSide::I);
        let mut counts = [0u64; 2];
        let mut sample = Vec::with_capacity(sides.len());
        for &s in sides {
            let c = &mut counts[s as usize];
            sample.push((s, *c));
            *c += 1;
        }
        let succ = |n: u64| (0..n).map(|k| (k, k + 1)).collect();
        let mut t = std::collections::BTreeMap::new();
        for (i, &(s, label)) in sample.iter().enumerate() {
            if s != cofinal {
                if let Some(&(_, above)) = sample[i + 1..].iter().find(|(s2, _)| *s2 == cofinal) {
                    t.insert(label, above);
                }
            }
        }
        ShufflePresentation {
            sample,
            cofinal,
            least: 0,
            succ_i: succ(counts[0]),
            succ_j: succ(counts[1]),
            t,
        }
    }

    fn succ(&self, side: ShuffleSide, label: u64) -> Result<u64, ShuffleError> {
        let table = match side {
            ShuffleSide::I => &self.succ_i,
            ShuffleSide::J => &self.succ_j,
        };
        let accessor = match side {
            ShuffleSide::I => "succ_i",
            ShuffleSide::J => "succ_j",
        };
        table
            .get(&label)
            .copied()
            .ok_or(ShuffleError::MissingAccessor {
                accessor,
                side,
                label,
            })
    }
}

/// Embeds the sampled shuffle into `J·I` (or `I·J`) by
/// `f(x) = (m, s_I(x))` on the cofinal side and `f(x) = (s_J(x), t(x))` on
/// the other, then checks order preservation on every sampled pair.
pub fn shuffle_embed(p: &ShufflePresentation) -> Result<ShuffleReport, ShuffleError> {
    let cof = p.cofinal;
    for side in [ShuffleSide::I, ShuffleSide::J] {
        let labels: Vec<u64> = p
            .sample
            .iter()
            .filter(|s| s.0 == side)
            .map(|s| s.1)
            .collect();
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ShuffleError::InvalidPresentation(format!(
                "{side:?} labels are not increasing along the sample"
            )));
        }
    }
    let mut rows = Vec::with_capacity(p.sample.len());
    for &(side, label) in &p.sample {
        let image = if side == cof {
            (p.least, p.succ(side, label)?)
        } else {
            let t =
                p.t.get(&label)
                    .copied()
                    .ok_or(ShuffleError::MissingAccessor {
                        accessor: "t",
                        side,
                        label,
                    })?;
            (p.succ(side, label)?, t)
        };
        rows.push(ShuffleRow { side, label, image });
    }
    let mut pairs_checked = 0;
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            pairs_checked += 1;
            let (x, y) = (rows[a].image, rows[b].image);
            // anti-lexicographic: the cofinal coordinate dominates
            if (x.1, x.0) >= (y.1, y.0) {
                return Err(ShuffleError::NotOrderPreserving {
                    x: p.sample[a],
                    y: p.sample[b],
                });
            }
        }
    }
    let target = match cof {
        ShuffleSide::I => "J·I",
        ShuffleSide::J => "I·J",
    };
    Ok(ShuffleReport {
        target: target.to_string(),
        rows,
        pairs_checked,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingRow {
    pub source: String,
    pub image: String,
}

/// Outcome of the comparability demo for two ordinals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct McEmbedding {
    pub term: String,
    pub chain_side: Side,
    pub height: String,
    /// The smaller ordinal, which embeds into the chain side.
    pub embedded: String,
    pub rows: Vec<EmbeddingRow>,
    pub pairs_checked: usize,
    pub order_preserved: bool,
}

/// Forms `ord(α) <+> ord(β)`, takes its maximal chain (which lies in one
/// side), and embeds the smaller ordinal into that side by
/// `ξ ↦ chain.element_at(ξ)`, verified on the first `samples` points.
pub fn mc_to_embedding(alpha: &Ordinal, beta: &Ordinal, samples: usize) -> McEmbedding {
    let term = WpoTerm::dsum(WpoTerm::Ord(alpha.clone()), WpoTerm::Ord(beta.clone()));
    let chain = max_chain(&term, &OracleLimits::default()).expect("ordinal leaves only");
    let side = chain.top_side().expect("top-level disjoint union");
    let small = alpha.clone().min(beta.clone());
    let points = BelowEnumerator::new().first_below(&small, samples);
    let images: Vec<Element> = points
        .iter()
        .map(|xi| chain.element_at(xi).expect("below the height"))
        .collect();
    let mut pairs_checked = 0;
    let mut order_preserved = true;
    for a in 0..points.len() {
        for b in 0..points.len() {
            if a == b {
                continue;
            }
            pairs_checked += 1;
            let source_le = points[a] <= points[b];
            let image_le = term.leq(&images[a], &images[b]).expect("valid images");
            order_preserved &= source_le == image_le;
        }
    }
    McEmbedding {
        term: term.to_string(),
        chain_side: side,
        height: chain.order_type().to_string(),
        embedded: small.to_string(),
        rows: points
            .iter()
            .zip(&images)
            .map(|(s, i)| EmbeddingRow {
                source: s.to_string(),
                image: i.to_string(),
            })
            .collect(),
        pairs_checked,
        order_preserved,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinitePoset;

    fn t(s: &str) -> WpoTerm {
        WpoTerm::parse(s).unwrap()
    }

    fn o(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    fn e(s: &str) -> Element {
        Element::parse(s).unwrap()
    }

    fn lim() -> OracleLimits {
        OracleLimits::default()
    }

    #[test]
    fn order_type_examples() {
        assert_eq!(max_order_type(&t("ord(w) <+> ord(w+1)")), o("w*2+1"));
        assert_eq!(max_order_type(&t("fin{3; 0<1, 0<2}")), o("3"));
        assert_eq!(
            max_order_type(&t("(ord(w) ++ ord(1)) <+> ord(w)")),
            o("w*2+1")
        );
        assert_eq!(max_order_type(&t("ord(1) ++ ord(w)")), o("w"));
    }

    #[test]
    fn height_examples() {
        assert_eq!(height(&t("ord(w) <+> ord(w^2)")), o("w^2"));
        assert_eq!(height(&t("ord(w) ++ ord(w)")), o("w*2"));
        assert_eq!(height(&t("fin{4; 0<1, 1<3, 0<2}")), o("3"));
    }

    #[test]
    fn mle_positions_for_two_omegas() {
        let w = mle_extension(&t("ord(w) <+> ord(w)"), &lim()).unwrap();
        for k in 0..20u64 {
            let kk = Ordinal::from(k);
            assert_eq!(
                w.position(&Element::left(Element::Point(kk.clone())))
                    .unwrap(),
                kk
            );
            assert_eq!(
                w.position(&Element::right(Element::Point(kk.clone())))
                    .unwrap(),
                o("w").add(&kk)
            );
        }
    }

    #[test]
    fn mle_positions_for_unequal_sides() {
        let w = mle_extension(&t("ord(w+1) <+> ord(w)"), &lim()).unwrap();
        assert_eq!(w.position(&e("L(w)")).unwrap(), o("w*2"));
        assert_eq!(w.element_at(&o("w*2")).unwrap(), e("L(w)"));
        for k in 0..20u64 {
            let kk = Ordinal::from(k);
            assert_eq!(
                w.position(&Element::right(Element::Point(kk.clone())))
                    .unwrap(),
                o("w").add(&kk)
            );
            assert_eq!(
                w.position(&Element::left(Element::Point(kk.clone())))
                    .unwrap(),
                kk
            );
        }
        assert_eq!(w.order_type(), &o("w*2+1"));
        assert!(matches!(
            w.element_at(&o("w*2+1")),
            Err(MaxTypeError::PositionOutOfRange { .. })
        ));
        assert!(w.ext_leq(&e("R(5)"), &e("L(w)")).unwrap());
    }

    #[test]
    fn mle_identity_on_ordinal() {
        let w = mle_extension(&t("ord(3)"), &lim()).unwrap();
        assert_eq!(w.element_at(&o("2")).unwrap(), e("2"));
    }

    #[test]
    fn mle_finite_leaf_uses_recursion() {
        let w = mle_extension(&t("fin{3;}"), &lim()).unwrap();
        let order: Vec<Element> = (0..3u64)
            .map(|i| w.element_at(&Ordinal::from(i)).unwrap())
            .collect();
        assert_eq!(order, vec![e("#2"), e("#1"), e("#0")]);
    }

    #[test]
    fn chain_examples() {
        let c = max_chain(&t("ord(w) <+> ord(w^2)"), &lim()).unwrap();
        assert_eq!(c.top_side(), Some(Side::Right));
        assert_eq!(c.element_at(&o("w+3")).unwrap(), e("R(w+3)"));
        assert!(!c.contains(&e("L(0)")));
        let c = max_chain(&t("ord(2) ++ ord(2)"), &lim()).unwrap();
        assert_eq!(c.order_type(), &o("4"));
        let pts: Vec<Element> = (0..4u64)
            .map(|i| c.element_at(&Ordinal::from(i)).unwrap())
            .collect();
        assert_eq!(pts, vec![e("L(0)"), e("L(1)"), e("R(0)"), e("R(1)")]);
        let c = max_chain(&t("fin{3; }"), &lim()).unwrap();
        assert_eq!(c.order_type(), &o("1"));
        assert!(matches!(
            c.position(&e("#1")),
            Err(MaxTypeError::NotInChain(_))
        ));
    }

    #[test]
    fn chain_points_have_their_position_as_height() {
        let term = t("(fin{4; 0<1, 1<3, 0<2} ++ ord(w^2)) <+> ord(w*3) ++ ord(w)");
        let c = max_chain(&term, &lim()).unwrap();
        for xi in BelowEnumerator::new().first_below(c.order_type(), 100) {
            let x = c.element_at(&xi).unwrap();
            assert_eq!(element_height(&term, &x).unwrap(), xi);
            assert_eq!(c.position(&x).unwrap(), xi);
        }
    }

    /// Longest increasing subsequence by trying every index subset.
    fn lis_exhaustive<T>(seq: &[T], leq: impl Fn(&T, &T) -> bool) -> Vec<usize> {
        let n = seq.len();
        let mut best: Vec<usize> = Vec::new();
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let ok = idx
                .iter()
                .enumerate()
                .all(|(a, &i)| idx[a + 1..].iter().all(|&j| leq(&seq[i], &seq[j])));
            if ok && (idx.len() > best.len() || (idx.len() == best.len() && idx < best)) {
                best = idx;
            }
        }
        best
    }

    #[test]
    fn increasing_subsequence_examples() {
        let anti = FinitePoset::antichain(2);
        let seq = [0usize, 1, 0, 1, 0];
        let leq = |a: &usize, b: &usize| anti.leq(*a, *b);
        assert_eq!(increasing_subsequence(&seq, leq), vec![0, 2, 4]);
        assert_eq!(lis_exhaustive(&seq, leq), vec![0, 2, 4]);
        let up = [1, 2, 3, 4, 5];
        assert_eq!(
            increasing_subsequence(&up, |a, b| a <= b),
            vec![0, 1, 2, 3, 4]
        );
        let down = [5, 4, 3, 2, 1];
        assert_eq!(increasing_subsequence(&down, |a, b| a <= b), vec![0]);
        assert!(increasing_subsequence::<u8>(&[], |a, b| a <= b).is_empty());
        let mixed = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3];
        assert_eq!(
            increasing_subsequence(&mixed, |a, b| a <= b),
            lis_exhaustive(&mixed, |a, b| a <= b)
        );
    }

    #[test]
    fn schmidt_examples() {
        let y: Vec<Vec<usize>> = (0..6).map(|i| vec![i; i + 1]).collect();
        let r = schmidt_extract(&y, 6, |a, b| a <= b).unwrap();
        assert_eq!(r.g, vec![0, 1, 2, 3, 4, 5]);

        // row 0 alternates a, b in a 2-antichain
        let anti = FinitePoset::antichain(2);
        let y: Vec<Vec<usize>> = (0..8).map(|i| vec![i % 2; i + 1]).collect();
        let r = schmidt_extract(&y, 8, |a, b| anti.leq(*a, *b)).unwrap();
        assert!(!r.g.is_empty());
        assert!(r.g.iter().all(|&i| i % 2 == 0));
        for j in 0..r.g.len().saturating_sub(1) {
            assert!(r.g[j] < r.g[j + 1]);
            assert!(anti.leq(y[r.g[j]][j], y[r.g[j + 1]][j]));
        }

        let y = vec![vec![0usize]];
        let r = schmidt_extract(&y, 1, |a, b| a <= b).unwrap();
        assert_eq!(
            r,
            SchmidtPrefix {
                g: vec![0],
                horizon_exhausted_at: 1
            }
        );

        assert_eq!(
            schmidt_extract(&[vec![0usize], vec![1]], 2, |a, b| a <= b),
            Err(SchmidtError::MalformedArray { row: 1, need: 2 })
        );
    }

    fn evens_odds() -> ShufflePresentation {
        let sample = (0..10u64)
            .map(|k| {
                (
                    if k % 2 == 0 {
                        ShuffleSide::I
                    } else {
                        ShuffleSide::J
                    },
                    k,
                )
            })
            .collect();
        let mut p = ShufflePresentation {
            sample,
            cofinal: ShuffleSide::I,
            least: 1,
            succ_i: (0..10).step_by(2).map(|k| (k, k + 2)).collect(),
            succ_j: (1..10).step_by(2).map(|k| (k, k + 2)).collect(),
            t: (1..10).step_by(2).map(|k| (k, k + 1)).collect(),
        };
        // 9 is the last odd in the sample; its t lies just past the sample
        p.t.insert(9, 10);
        p
    }

    #[test]
    fn shuffle_evens_and_odds() {
        let report = shuffle_embed(&evens_odds()).unwrap();
        assert_eq!(report.target, "J·I");
        assert_eq!(report.rows[0].image, (1, 2));
        assert_eq!(report.rows[1].image, (3, 2));
        assert_eq!(report.rows[2].image, (1, 4));
        assert_eq!(report.pairs_checked, 45);
    }

    #[test]
    fn shuffle_all_of_i_first() {
        let p = ShufflePresentation::from_interleaving(&[ShuffleSide::I; 5]);
        let report = shuffle_embed(&p).unwrap();
        assert!(report.rows.iter().all(|r| r.image.0 == p.least));
    }

    #[test]
    fn shuffle_detects_corrupted_t() {
        let mut p = evens_odds();
        p.t.insert(1, 0);
        assert_eq!(
            shuffle_embed(&p),
            Err(ShuffleError::NotOrderPreserving {
                x: (ShuffleSide::I, 0),
                y: (ShuffleSide::J, 1)
            })
        );
        let mut p = evens_odds();
        p.succ_j.remove(&3);
        assert!(matches!(
            shuffle_embed(&p),
            Err(ShuffleError::MissingAccessor {
                accessor: "succ_j",
                ..
            })
        ));
    }

    #[test]
    fn shuffle_with_j_cofinal() {
        use ShuffleSide::*;
        let p = ShufflePresentation::from_interleaving(&[I, J, J, I, J]);
        assert_eq!(p.cofinal, J);
        let report = shuffle_embed(&p).unwrap();
        assert_eq!(report.target, "I·J");
    }

    #[test]
    fn mc_atr_examples() {
        let r = mc_to_embedding(&o("w"), &o("w^2"), 30);
        assert_eq!(r.chain_side, Side::Right);
        assert!(r.order_preserved);
        assert_eq!(r.rows[3].image, "R(3)");
        let r = mc_to_embedding(&o("5"), &o("5"), 30);
        assert_eq!(r.chain_side, Side::Left);
        assert_eq!(r.rows.len(), 5);
        assert!(r.order_preserved);
        let r = mc_to_embedding(&o("w+1"), &o("w"), 30);
        assert_eq!(r.chain_side, Side::Left);
        assert_eq!(r.embedded, "w");
        assert!(r.order_preserved);
    }
}
