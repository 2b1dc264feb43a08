//! Finite-horizon simulation of the stage-wise linear order built from a
//! one-to-one enumeration `f`.
//!
//! Stage `s+1` is inserted into the order on `{0, …, s}` as follows: if
//! `f(s+1) > f(s)` it goes immediately before `s`; otherwise it goes
//! immediately after the `≤_L`-largest `t ≤ s` with `f(s+1) < f(t)`.
//!
//! A stage is *true* when every later value is larger. Since tables are
//! finite prefixes, truth here is always relative to the horizon.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::parse::{Cursor, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrueStageError {
    #[error("not one-to-one: f({first}) = f({second})")]
    NotInjective { first: usize, second: usize },
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("stage {stage} is beyond the horizon {horizon}")]
    OutOfRange { stage: usize, horizon: usize },
    #[error("sequence is not strictly descending at index {index}")]
    NotDescending { index: usize },
    #[error("index {index} is out of range for a sequence of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("stage {0} is not horizon-true")]
    NotUpperSide(usize),
    #[error("no witness within the horizon")]
    HorizonExhausted,
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// The values `f(0), …, f(S)` of a one-to-one function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumFn {
    table: Vec<u64>,
}

impl EnumFn {
    pub fn new(table: Vec<u64>) -> Result<EnumFn, TrueStageError> {
        if table.is_empty() {
            return Err(TrueStageError::InvalidTable("table is empty".into()));
        }
        let mut seen = HashMap::with_capacity(table.len());
        for (i, &v) in table.iter().enumerate() {
            if let Some(first) = seen.insert(v, i) {
                return Err(TrueStageError::NotInjective { first, second: i });
            }
        }
        Ok(EnumFn { table })
    }

    /// A comma-separated list `5,3,4` or a JSON array `[5, 3, 4]`.
    pub fn parse(text: &str) -> Result<EnumFn, TrueStageError> {
        let mut cur = Cursor::new(text);
        let bracketed = cur.eat("[");
        let mut table = Vec::new();
        if !(bracketed && cur.peek() == Some(b']')) {
            loop {
                table.push(cur.nat()?);
                if !cur.eat(",") {
                    break;
                }
            }
        }
        if bracketed {
            cur.expect("]")?;
        }
        cur.finish()?;
        EnumFn::new(table)
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn horizon(&self) -> usize {
        self.table.len() - 1
    }

    pub fn value(&self, s: usize) -> u64 {
        self.table[s]
    }

    fn check_stage(&self, stage: usize) -> Result<(), TrueStageError> {
        if stage > self.horizon() {
            return Err(TrueStageError::OutOfRange {
                stage,
                horizon: self.horizon(),
            });
        }
        Ok(())
    }
}

/// The order `≤_L` on stages `0..=S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageOrder {
    /// Stages from `≤_L`-least to greatest.
    order: Vec<usize>,
    #[serde(skip)]
    rank: Vec<usize>,
}

impl StageOrder {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn horizon(&self) -> usize {
        self.order.len() - 1
    }

    /// Position of a stage in the order.
    pub fn position(&self, s: usize) -> usize {
        self.rank[s]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }
}

pub fn build_stage_order(f: &EnumFn) -> StageOrder {
    let t = f.table();
    let mut order = vec![0usize];
    for s in 0..f.horizon() {
        let pos = |order: &[usize], x: usize| order.iter().position(|&y| y == x).unwrap();
        let at = if t[s + 1] > t[s] {
            pos(&order, s)
        } else {
            // t = s qualifies, so some position is found
            order
                .iter()
                .rposition(|&u| u <= s && t[s + 1] < t[u])
                .expect("stage s itself qualifies")
                + 1
        };
        order.insert(at, s + 1);
    }
    let mut rank = vec![0; order.len()];
    for (i, &s) in order.iter().enumerate() {
        rank[s] = i;
    }
    StageOrder { order, rank }
}

/// `f(t) > f(s)` for every `t` with `s < t ≤ S`.
pub fn is_true_stage(f: &EnumFn, s: usize) -> Result<bool, TrueStageError> {
    f.check_stage(s)?;
    Ok(f.table()[s + 1..].iter().all(|&v| v > f.value(s)))
}

/// The horizon-true stages in increasing order. They form a strictly
/// `≤_L`-descending sequence.
pub fn extract_descending(f: &EnumFn) -> Vec<usize> {
    let t = f.table();
    let mut out = Vec::new();
    let mut min_after = u64::MAX;
    for s in (0..t.len()).rev() {
        if t[s] < min_after {
            out.push(s);
            min_after = t[s];
        }
    }
    out.reverse();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub m: u64,
    pub member: bool,
    /// Some `n ≤ s_m` with `f(n) = m`.
    pub witness: Option<usize>,
    /// The stage `s_m` bounding the search.
    pub bound: usize,
    /// Whether `f(s_m) ≥ m`, on which the decoding relies.
    pub bound_holds: bool,
}

/// Decides whether `m` is a value of `f` by searching only `f(0..=desc[m])`.
pub fn decode_membership(f: &EnumFn, desc: &[usize], m: usize) -> Result<Decoded, TrueStageError> {
    for &s in desc {
        f.check_stage(s)?;
    }
    let order = build_stage_order(f);
    if let Some(index) = desc.windows(2).position(|w| !order.lt(w[1], w[0])) {
        return Err(TrueStageError::NotDescending { index: index + 1 });
    }
    let bound = *desc.get(m).ok_or(TrueStageError::IndexOutOfRange {
        index: m,
        len: desc.len(),
    })?;
    let target = m as u64;
    let witness = f.table()[..=bound].iter().position(|&v| v == target);
    Ok(Decoded {
        m: target,
        member: witness.is_some(),
        witness,
        bound,
        bound_holds: f.value(bound) >= target,
    })
}

/// Replaces each stage `n` by the `n+1` consecutive points `(n,0), …, (n,n)`.
pub fn expand_prime(order: &StageOrder) -> Vec<(usize, usize)> {
    order
        .order()
        .iter()
        .flat_map(|&n| (0..=n).map(move |i| (n, i)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalWitness {
    pub y: (usize, usize),
    pub interval_size: usize,
}

/// Looks for `y ≤ x` in the expanded order with `|[y, x]| > k`, where `y`
/// is `x` itself or some `(m, 0)` whose stage `m` is horizon-true. The
/// `≤`-greatest such `y` is returned.
pub fn check_interval_property(
    expanded: &[(usize, usize)],
    f: &EnumFn,
    x: (usize, usize),
    k: usize,
) -> Result<IntervalWitness, TrueStageError> {
    f.check_stage(x.0)?;
    let xpos = expanded
        .iter()
        .position(|&p| p == x)
        .ok_or(TrueStageError::OutOfRange {
            stage: x.0,
            horizon: f.horizon(),
        })?;
    if !is_true_stage(f, x.0)? {
        return Err(TrueStageError::NotUpperSide(x.0));
    }
    for ypos in (0..=xpos).rev() {
        let y = expanded[ypos];
        let size = xpos - ypos + 1;
        let eligible = ypos == xpos || (y.1 == 0 && is_true_stage(f, y.0)?);
        if eligible && size > k {
            return Ok(IntervalWitness {
                y,
                interval_size: size,
            });
        }
    }
    Err(TrueStageError::HorizonExhausted)
}
