//! Brute-force ground truth on explicit finite posets.
//!
//! The rank of the tree of bad sequences is computed by memoized recursion
//! on the residual set `P_σ = {p : no entry of σ is ≤ p}` rather than on σ
//! itself, since the rank below σ only depends on `P_σ`. States are bitmasks,
//! so a poset of size `n` has at most `2^n` of them.

use std::collections::HashMap;

use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::poset::{bit, ones, FinitePoset, PosetError};
use crate::term::WpoTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("poset of size {size} exceeds the configured cap of {cap}")]
    SizeLimit { size: usize, cap: usize },
    #[error("more than the requested number of linear extensions exist ({found} found so far)")]
    LimitExceeded { found: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    /// Largest poset handled by the rank computations.
    pub rank_cap: usize,
    /// Largest poset whose linear extensions may be enumerated.
    pub enum_cap: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            rank_cap: 20,
            enum_cap: 8,
        }
    }
}

fn check_cap(size: usize, cap: usize) -> Result<(), OracleError> {
    if size > cap {
        Err(OracleError::SizeLimit { size, cap })
    } else {
        Ok(())
    }
}

/// Memoized rank function of `Bad(P)`, keyed by residual set.
pub struct BadTree<'a> {
    poset: &'a FinitePoset,
    memo: HashMap<u64, usize>,
}

impl<'a> BadTree<'a> {
    pub fn new(poset: &'a FinitePoset, limits: &OracleLimits) -> Result<Self, OracleError> {
        check_cap(poset.size(), limits.rank_cap)?;
        Ok(BadTree {
            poset,
            memo: HashMap::new(),
        })
    }

    /// Residual set after appending `p` to a bad sequence with residual `state`.
    pub fn after(&self, state: u64, p: usize) -> u64 {
        state & !self.poset.up_mask(p)
    }

    pub fn rank(&mut self, state: u64) -> usize {
        if state == 0 {
            return 0;
        }
        if let Some(&r) = self.memo.get(&state) {
            return r;
        }
        let r = ones(state)
            .map(|p| self.rank(self.after(state, p)) + 1)
            .max()
            .unwrap_or(0);
        self.memo.insert(state, r);
        r
    }
}

pub fn bad_tree_rank(poset: &FinitePoset, limits: &OracleLimits) -> Result<usize, OracleError> {
    let mut tree = BadTree::new(poset, limits)?;
    Ok(tree.rank(poset.all_mask()))
}

/// For each node, the length of the longest chain strictly below it.
pub fn node_heights(poset: &FinitePoset) -> Vec<usize> {
    let n = poset.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| poset.strict_down_mask(x).count_ones());
    let mut h = vec![0usize; n];
    for &x in &order {
        h[x] = ones(poset.strict_down_mask(x))
            .map(|y| h[y] + 1)
            .max()
            .unwrap_or(0);
    }
    h
}

/// Rank of the tree of descending sequences: the length of a longest chain.
pub fn desc_tree_rank(poset: &FinitePoset) -> usize {
    node_heights(poset)
        .into_iter()
        .map(|h| h + 1)
        .max()
        .unwrap_or(0)
}

pub fn is_linear_extension(poset: &FinitePoset, order: &[usize]) -> bool {
    let n = poset.size();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &x) in order.iter().enumerate() {
        if x >= n || pos[x] != usize::MAX {
            return false;
        }
        pos[x] = i;
    }
    (0..n).all(|x| ones(poset.up_mask(x)).all(|y| pos[x] <= pos[y]))
}

/// No earlier entry is `≤` a later one.
pub fn is_bad_sequence(poset: &FinitePoset, seq: &[usize]) -> bool {
    seq.iter().enumerate().all(|(i, &later)| {
        later < poset.size() && seq[..i].iter().all(|&earlier| !poset.leq(earlier, later))
    })
}

pub fn is_chain(poset: &FinitePoset, nodes: &[usize]) -> bool {
    nodes.iter().enumerate().all(|(i, &a)| {
        a < poset.size() && nodes[..i].iter().all(|&b| b != a && poset.comparable(a, b))
    })
}

/// All linear extensions in lexicographic order of the node sequence.
/// Fails with [`OracleError::LimitExceeded`] when there are more than `limit`.
pub fn enumerate_linear_extensions(
    poset: &FinitePoset,
    limit: usize,
    limits: &OracleLimits,
) -> Result<Vec<Vec<usize>>, OracleError> {
    check_cap(poset.size(), limits.enum_cap)?;
    fn go(
        poset: &FinitePoset,
        placed: u64,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) -> Result<(), OracleError> {
        if prefix.len() == poset.size() {
            if out.len() == limit {
                return Err(OracleError::LimitExceeded { found: out.len() });
            }
            out.push(prefix.clone());
            return Ok(());
        }
        for x in ones(poset.all_mask() & !placed) {
            // x is minimal among the unplaced nodes
            if poset.strict_down_mask(x) & !placed == 0 {
                prefix.push(x);
                go(poset, placed | bit(x), prefix, out, limit)?;
                prefix.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(poset, 0, &mut Vec::new(), &mut out, limit)?;
    Ok(out)
}

/// The maximal linear extension built by the successor-step recursion on
/// `Bad(P)`: at residual set `P_σ` choose the least `p` with
/// `rk(σ⌢p) + 1 = rk(σ)` and put it on top of the extension of `P_{σ⌢p}`.
///
/// Returns the extension from least to greatest; read backwards it is the
/// bad sequence `σ` that the recursion walked.
pub fn mle_by_recursion(
    poset: &FinitePoset,
    limits: &OracleLimits,
) -> Result<Vec<usize>, OracleError> {
    let mut tree = BadTree::new(poset, limits)?;
    let mut state = poset.all_mask();
    let mut walked = Vec::with_capacity(poset.size());
    loop {
        let r = tree.rank(state);
        if r == 0 {
            break;
        }
        let p = ones(state)
            .find(|&p| tree.rank(tree.after(state, p)) + 1 == r)
            .expect("a successor rank is attained by some child");
        walked.push(p);
        state = tree.after(state, p);
    }
    walked.reverse();
    Ok(walked)
}

/// A longest chain built by the successor-step recursion on `Desc(P)`: at a
/// descending sequence ending in `q` choose the least `p < q` whose own
/// height is one less, so each chain member's height equals its index.
/// Returned from least to greatest.
pub fn mc_by_recursion(
    poset: &FinitePoset,
    limits: &OracleLimits,
) -> Result<Vec<usize>, OracleError> {
    check_cap(poset.size(), limits.rank_cap)?;
    let heights = node_heights(poset);
    let mut candidates = poset.all_mask();
    let mut ht = desc_tree_rank(poset);
    let mut walked = Vec::with_capacity(ht);
    while ht > 0 {
        let p = ones(candidates)
            .find(|&p| heights[p] + 1 == ht)
            .expect("height is attained below the current node");
        walked.push(p);
        ht = heights[p];
        candidates = poset.strict_down_mask(p);
    }
    walked.reverse();
    Ok(walked)
}

/// Replaces every ordinal leaf by a chain of `min(k, α)` points, i.e. keeps
/// an initial segment of size at most `k`.
pub fn truncate_symbolic(term: &WpoTerm, k: u64) -> WpoTerm {
    match term {
        WpoTerm::Ord(a) => {
            let size = a.as_finite().map_or(k, |n| n.min(k));
            WpoTerm::Ord(Ordinal::from(size))
        }
        WpoTerm::Fin(p) => WpoTerm::Fin(p.clone()),
        WpoTerm::DSum(l, r) => WpoTerm::dsum(truncate_symbolic(l, k), truncate_symbolic(r, k)),
        WpoTerm::OSum(l, r) => WpoTerm::osum(truncate_symbolic(l, k), truncate_symbolic(r, k)),
    }
}

/// Materializes the truncation of `term` into one explicit poset. Nodes are
/// numbered left to right through the term.
pub fn truncate_term(
    term: &WpoTerm,
    k: u64,
    limits: &OracleLimits,
) -> Result<FinitePoset, OracleError> {
    let truncated = truncate_symbolic(term, k);
    let size = truncated.carrier_size().expect("truncation is finite");
    check_cap(usize::try_from(size).unwrap_or(usize::MAX), limits.rank_cap)?;
    materialize(&truncated)
}

/// Explicit poset of a term whose ordinal leaves are all finite.
pub fn materialize(term: &WpoTerm) -> Result<FinitePoset, OracleError> {
    Ok(match term {
        WpoTerm::Ord(a) => {
            let n = a.as_finite().expect("finite ordinal leaf");
            if n > crate::poset::MAX_NODES as u64 {
                return Err(PosetError::TooLarge(n.min(usize::MAX as u64) as usize).into());
            }
            FinitePoset::chain(n as usize)
        }
        WpoTerm::Fin(p) => p.clone(),
        WpoTerm::DSum(l, r) => materialize(l)?.disjoint_sum(&materialize(r)?)?,
        WpoTerm::OSum(l, r) => materialize(l)?.ordered_sum(&materialize(r)?)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> FinitePoset {
        FinitePoset::parse(s).unwrap()
    }

    /// Longest bad sequence by exhaustive search over sequences.
    fn longest_bad_exhaustive(poset: &FinitePoset) -> usize {
        fn go(poset: &FinitePoset, seq: &mut Vec<usize>) -> usize {
            let mut best = seq.len();
            for x in 0..poset.size() {
                if seq.iter().all(|&s| !poset.leq(s, x)) {
                    seq.push(x);
                    best = best.max(go(poset, seq));
                    seq.pop();
                }
            }
            best
        }
        go(poset, &mut Vec::new())
    }

    /// Longest chain by checking every subset.
    fn longest_chain_exhaustive(poset: &FinitePoset) -> usize {
        (0u64..1 << poset.size())
            .filter(|&m| {
                let nodes: Vec<usize> = ones(m).collect();
                is_chain(poset, &nodes)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    const V: &str = "fin{3; 0<1, 0<2}";
    const Y: &str = "fin{4; 0<1, 1<3, 0<2}";

    #[test]
    fn bad_rank_examples() {
        let lim = OracleLimits::default();
        for (s, want) in [("fin{3;}", 3), ("fin{3; 0<1, 1<2}", 3), (V, 3)] {
            assert_eq!(longest_bad_exhaustive(&p(s)), want);
            assert_eq!(bad_tree_rank(&p(s), &lim).unwrap(), want);
        }
        assert!(is_bad_sequence(&p(V), &[1, 2, 0]));
        assert_eq!(
            bad_tree_rank(&FinitePoset::antichain(21), &lim),
            Err(OracleError::SizeLimit { size: 21, cap: 20 })
        );
    }

    #[test]
    fn desc_rank_examples() {
        assert_eq!(desc_tree_rank(&FinitePoset::chain(4)), 4);
        assert_eq!(desc_tree_rank(&FinitePoset::antichain(3)), 1);
        assert_eq!(desc_tree_rank(&p(Y)), 3);
        assert_eq!(longest_chain_exhaustive(&p(Y)), 3);
        assert_eq!(desc_tree_rank(&FinitePoset::antichain(0)), 0);
    }

    #[test]
    fn extension_examples() {
        let lim = OracleLimits::default();
        assert_eq!(
            enumerate_linear_extensions(&FinitePoset::antichain(2), 10, &lim).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        assert_eq!(
            enumerate_linear_extensions(&FinitePoset::chain(3), 10, &lim).unwrap(),
            vec![vec![0, 1, 2]]
        );
        let v = enumerate_linear_extensions(&p(V), 10, &lim).unwrap();
        assert_eq!(v, vec![vec![0, 1, 2], vec![0, 2, 1]]);
        assert!(v.iter().all(|e| is_linear_extension(&p(V), e)));
        assert_eq!(
            enumerate_linear_extensions(&FinitePoset::antichain(3), 4, &lim),
            Err(OracleError::LimitExceeded { found: 4 })
        );
        assert!(matches!(
            enumerate_linear_extensions(&FinitePoset::antichain(9), 10, &lim),
            Err(OracleError::SizeLimit { size: 9, cap: 8 })
        ));
    }

    #[test]
    fn mle_recursion_examples() {
        let lim = OracleLimits::default();
        // walked sequence is 0,1,2, so the extension lists it backwards
        assert_eq!(
            mle_by_recursion(&FinitePoset::antichain(3), &lim).unwrap(),
            vec![2, 1, 0]
        );
        assert_eq!(
            mle_by_recursion(&FinitePoset::antichain(1), &lim).unwrap(),
            vec![0]
        );
        let v = mle_by_recursion(&p(V), &lim).unwrap();
        assert!(is_linear_extension(&p(V), &v));
        let mut rev = v.clone();
        rev.reverse();
        assert!(is_bad_sequence(&p(V), &rev));
        assert_eq!(rev.len(), 3);
        assert_eq!(v, vec![0, 2, 1]);
    }

    #[test]
    fn mc_recursion_examples() {
        let lim = OracleLimits::default();
        assert_eq!(
            mc_by_recursion(&FinitePoset::chain(4), &lim).unwrap(),
            vec![0, 1, 2, 3]
        );
        assert_eq!(
            mc_by_recursion(&FinitePoset::antichain(3), &lim)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(mc_by_recursion(&p(Y), &lim).unwrap(), vec![0, 1, 3]);
        let h = node_heights(&p(Y));
        for (i, &x) in [0usize, 1, 3].iter().enumerate() {
            assert_eq!(h[x], i);
        }
    }

    #[test]
    fn truncation_examples() {
        let lim = OracleLimits::default();
        let t = WpoTerm::parse("ord(w) <+> ord(w)").unwrap();
        let m = truncate_term(&t, 3, &lim).unwrap();
        assert_eq!(
            m,
            FinitePoset::chain(3)
                .disjoint_sum(&FinitePoset::chain(3))
                .unwrap()
        );
        assert_eq!(bad_tree_rank(&m, &lim).unwrap(), 6);
        assert_eq!(longest_bad_exhaustive(&m), 6);
        let w2 = WpoTerm::parse("ord(w^2)").unwrap();
        assert_eq!(truncate_term(&w2, 4, &lim).unwrap(), FinitePoset::chain(4));
        let small = WpoTerm::parse("ord(2) ++ fin{2;}").unwrap();
        assert_eq!(truncate_term(&small, 10, &lim).unwrap().size(), 4);
        assert!(matches!(
            truncate_term(&t, 11, &lim),
            Err(OracleError::SizeLimit { size: 22, cap: 20 })
        ));
    }

    #[test]
    fn rank_equals_size_on_small_posets() {
        let lim = OracleLimits::default();
        for s in [V, Y, "fin{5; 0<4, 1<4, 2<3}", "fin{0;}"] {
            let q = p(s);
            assert_eq!(bad_tree_rank(&q, &lim).unwrap(), q.size());
            assert_eq!(longest_bad_exhaustive(&q), q.size());
            assert_eq!(desc_tree_rank(&q), longest_chain_exhaustive(&q));
        }
    }
}
