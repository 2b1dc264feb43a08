//! Explicit finite partial orders, stored as up-set bitmasks.

use std::fmt;

use thiserror::Error;

use crate::parse::{Cursor, SyntaxError};

/// Largest carrier a [`FinitePoset`] can hold (one `u64` mask per node).
pub const MAX_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("node {node} out of range for a poset of size {size}")]
    NodeOutOfRange { node: usize, size: usize },
    #[error("poset of size {0} exceeds the supported maximum of {MAX_NODES} nodes")]
    TooLarge(usize),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// A finite partial order on `0..size`. `up[x]` has bit `y` set iff `x ≤ y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    size: usize,
    up: Vec<u64>,
}

pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        bit(n) - 1
    }
}

pub(crate) fn ones(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl FinitePoset {
    pub fn antichain(size: usize) -> Self {
        assert!(size <= MAX_NODES);
        FinitePoset {
            size,
            up: (0..size).map(bit).collect(),
        }
    }

    /// `0 < 1 < … < size-1`.
    pub fn chain(size: usize) -> Self {
        assert!(size <= MAX_NODES);
        FinitePoset {
            size,
            up: (0..size).map(|i| full_mask(size) & !(bit(i) - 1)).collect(),
        }
    }

    /// The partial order generated by the strict pairs `a < b`: transitive
    /// closure is taken, then antisymmetry is checked.
    pub fn from_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        if size > MAX_NODES {
            return Err(PosetError::TooLarge(size));
        }
        let mut up: Vec<u64> = (0..size).map(bit).collect();
        for &(a, b) in pairs {
            for node in [a, b] {
                if node >= size {
                    return Err(PosetError::NodeOutOfRange { node, size });
                }
            }
            if a == b {
                return Err(PosetError::InvalidPoset(format!("{a}<{a} is not strict")));
            }
            up[a] |= bit(b);
        }
        // Warshall closure on bitmasks
        for k in 0..size {
            for i in 0..size {
                if up[i] & bit(k) != 0 {
                    up[i] |= up[k];
                }
            }
        }
        let poset = FinitePoset { size, up };
        poset.check_antisymmetric()?;
        Ok(poset)
    }

    /// Builds from a full relation matrix, `rel[x][y]` meaning `x ≤ y`, and
    /// validates reflexivity, antisymmetry and transitivity.
    pub fn from_matrix(rel: &[Vec<bool>]) -> Result<Self, PosetError> {
        let size = rel.len();
        if size > MAX_NODES {
            return Err(PosetError::TooLarge(size));
        }
        let mut up = vec![0u64; size];
        for (x, row) in rel.iter().enumerate() {
            if row.len() != size {
                return Err(PosetError::InvalidPoset(format!(
                    "row {x} has wrong length"
                )));
            }
            for (y, &v) in row.iter().enumerate() {
                if v {
                    up[x] |= bit(y);
                }
            }
        }
        let poset = FinitePoset { size, up };
        for x in 0..size {
            if !poset.leq(x, x) {
                return Err(PosetError::InvalidPoset(format!("not reflexive at {x}")));
            }
            for y in ones(poset.up[x]) {
                if poset.up[y] & !poset.up[x] != 0 {
                    return Err(PosetError::InvalidPoset(format!(
                        "not transitive through {x} <= {y}"
                    )));
                }
            }
        }
        poset.check_antisymmetric()?;
        Ok(poset)
    }

    fn check_antisymmetric(&self) -> Result<(), PosetError> {
        for x in 0..self.size {
            for y in ones(self.up[x] & !bit(x)) {
                if self.leq(y, x) {
                    return Err(PosetError::InvalidPoset(format!(
                        "antisymmetry fails for {x} and {y}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] & bit(y) != 0
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Mask of `{y : x ≤ y}`.
    pub fn up_mask(&self, x: usize) -> u64 {
        self.up[x]
    }

    /// Mask of `{y : y < x}`.
    pub fn strict_down_mask(&self, x: usize) -> u64 {
        (0..self.size)
            .filter(|&y| self.lt(y, x))
            .fold(0, |m, y| m | bit(y))
    }

    pub fn all_mask(&self) -> u64 {
        full_mask(self.size)
    }

    /// Covering pairs `a ⋖ b`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in ones(self.up[a] & !bit(a)) {
                let between = ones(self.up[a] & !bit(a) & !bit(b)).any(|c| self.lt(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.size)
            .map(|x| (0..self.size).map(|y| self.leq(x, y)).collect())
            .collect()
    }

    /// Disjoint union; the right poset's nodes are shifted by `self.size()`.
    pub fn disjoint_sum(&self, other: &FinitePoset) -> Result<FinitePoset, PosetError> {
        let size = self.size + other.size;
        if size > MAX_NODES {
            return Err(PosetError::TooLarge(size));
        }
        let mut up = self.up.clone();
        up.extend(other.up.iter().map(|m| m << self.size));
        Ok(FinitePoset { size, up })
    }

    /// Ordered sum: every node of `self` lies below every node of `other`.
    pub fn ordered_sum(&self, other: &FinitePoset) -> Result<FinitePoset, PosetError> {
        let size = self.size + other.size;
        if size > MAX_NODES {
            return Err(PosetError::TooLarge(size));
        }
        let right_all = full_mask(other.size) << self.size;
        let mut up: Vec<u64> = self.up.iter().map(|m| m | right_all).collect();
        up.extend(other.up.iter().map(|m| m << self.size));
        Ok(FinitePoset { size, up })
    }

    /// Relabels nodes: node `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> FinitePoset {
        let mut up = vec![0u64; self.size];
        for x in 0..self.size {
            for y in ones(self.up[x]) {
                up[perm[x]] |= bit(perm[y]);
            }
        }
        FinitePoset {
            size: self.size,
            up,
        }
    }

    pub fn parse(text: &str) -> Result<Self, PosetError> {
        let mut cur = Cursor::new(text);
        let p = parse_fin(&mut cur)?;
        cur.finish()?;
        Ok(p)
    }
}

/// `fin{n; a<b, …}` with an optional (possibly empty) pair list.
pub(crate) fn parse_fin(cur: &mut Cursor<'_>) -> Result<FinitePoset, PosetError> {
    cur.expect("fin{")?;
    let at = cur.mark();
    let n = cur.nat()?;
    if n > MAX_NODES as u64 {
        return Err(SyntaxError::new(at, format!("at most {MAX_NODES} nodes")).into());
    }
    cur.expect(";")?;
    let mut pairs = Vec::new();
    if cur.peek() != Some(b'}') {
        loop {
            let a = cur.nat()?;
            cur.expect("<")?;
            let b = cur.nat()?;
            pairs.push((
                a.min(u64::from(u32::MAX)) as usize,
                b.min(u64::from(u32::MAX)) as usize,
            ));
            if !cur.eat(",") {
                break;
            }
        }
    }
    cur.expect("}")?;
    FinitePoset::from_pairs(n as usize, &pairs)
}

impl fmt::Display for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fin{{{};", self.size)?;
        for (i, (a, b)) in self.covers().into_iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{a}<{b}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_closure() {
        let p = FinitePoset::parse("fin{4; 0<1, 1<3, 0<2}").unwrap();
        assert!(p.leq(0, 3));
        assert!(!p.leq(2, 3));
        assert_eq!(p.covers(), vec![(0, 1), (0, 2), (1, 3)]);
        assert_eq!(p.to_string(), "fin{4; 0<1, 0<2, 1<3}");
        assert_eq!(FinitePoset::parse(&p.to_string()).unwrap(), p);
        assert_eq!(
            FinitePoset::parse("fin{3;}").unwrap(),
            FinitePoset::antichain(3)
        );
        assert_eq!(
            FinitePoset::parse("fin{3; }").unwrap().to_string(),
            "fin{3;}"
        );
    }

    #[test]
    fn rejects_invalid() {
        assert!(matches!(
            FinitePoset::parse("fin{2; 0<1, 1<0}"),
            Err(PosetError::InvalidPoset(_))
        ));
        assert!(matches!(
            FinitePoset::parse("fin{3; 0<1, 1<2, 2<0}"),
            Err(PosetError::InvalidPoset(_))
        ));
        assert!(matches!(
            FinitePoset::parse("fin{2; 0<5}"),
            Err(PosetError::NodeOutOfRange { node: 5, size: 2 })
        ));
        assert!(FinitePoset::parse("fin{2; 1<1}").is_err());
        assert!(FinitePoset::parse("fin{99;}").is_err());
        assert!(FinitePoset::parse("fin{2; 0<}").is_err());
    }

    #[test]
    fn matrix_validation() {
        let chain = FinitePoset::chain(3);
        assert_eq!(FinitePoset::from_matrix(&chain.to_matrix()).unwrap(), chain);
        let mut bad = chain.to_matrix();
        bad[0][2] = false;
        assert!(FinitePoset::from_matrix(&bad).is_err());
        let mut irreflexive = chain.to_matrix();
        irreflexive[1][1] = false;
        assert!(FinitePoset::from_matrix(&irreflexive).is_err());
    }

    #[test]
    fn sums() {
        let a = FinitePoset::chain(2);
        let b = FinitePoset::antichain(2);
        let d = a.disjoint_sum(&b).unwrap();
        assert!(d.leq(0, 1) && !d.comparable(1, 2) && !d.comparable(2, 3));
        let o = a.ordered_sum(&b).unwrap();
        assert!(o.leq(1, 2) && o.leq(0, 3) && !o.comparable(2, 3));
    }
}
