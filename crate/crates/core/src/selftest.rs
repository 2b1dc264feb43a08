//! Self-test suite: each criterion runs a fixed, seeded battery of checks
//! against independent oracles and reports how many cases ran and failed.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::maxtype::{
    element_height, height, increasing_subsequence, max_chain, max_order_type, mc_to_embedding,
    mle_extension, schmidt_extract, shuffle_embed, ShuffleError, ShufflePresentation, ShuffleSide,
    Side,
};
use crate::oracle::{
    bad_tree_rank, desc_tree_rank, is_bad_sequence, is_chain, is_linear_extension, materialize,
    mc_by_recursion, mle_by_recursion, OracleLimits,
};
use crate::ordinal::{BelowEnumerator, Ordinal, UnitList};
use crate::poset::FinitePoset;
use crate::term::{Element, WpoTerm};
use crate::truestage::{
    build_stage_order, check_interval_property, decode_membership, expand_prime,
    extract_descending, is_true_stage, EnumFn, TrueStageError,
};

/// Names of the criteria, indexed from 1.
pub const CRITERIA: [&str; 11] = [
    "ordinal algebra",
    "natural sum vs. sum comparison",
    "indecomposability",
    "finite oracle rank identity",
    "calculus/oracle agreement",
    "witness validity",
    "shuffle embedding",
    "recursion conformance",
    "true stages",
    "chain-to-embedding demo",
    "nested subsequence refinement",
];

const MAX_REPORTED: usize = 5;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub cases: u64,
    pub failures: u64,
    /// The first few failure descriptions.
    pub examples: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(describe());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        for e in other.examples {
            if self.examples.len() < MAX_REPORTED {
                self.examples.push(e);
            }
        }
    }

    fn merged(parts: Vec<Tally>) -> Tally {
        let mut t = Tally::default();
        for p in parts {
            t.merge(p);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    #[serde(flatten)]
    pub tally: Tally,
}

impl CriterionReport {
    /// One summary line, e.g. `criterion 1 (ordinal algebra): PASS, 123 cases`.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {} ({}): {verdict}, {} cases, {} failures",
            self.id, self.name, self.tally.cases, self.tally.failures
        );
        if let Some(first) = self.tally.examples.first() {
            s.push_str(&format!("; first: {first}"));
        }
        s
    }
}

pub fn run_criterion(id: usize) -> CriterionReport {
    let tally = match id {
        1 => ordinal_algebra(),
        2 => sum_comparison(),
        3 => indecomposability(),
        4 => rank_identity(),
        5 => calculus_agreement(),
        6 => witness_validity(),
        7 => shuffle_suite(),
        8 => recursion_conformance(),
        9 => true_stage_suite(),
        10 => chain_embedding_demo(),
        11 => schmidt_suite(),
        _ => panic!("no criterion {id}"),
    };
    CriterionReport {
        id,
        name: CRITERIA[id - 1],
        passed: tally.failures == 0 && tally.cases > 0,
        tally,
    }
}

pub fn run_all() -> Vec<CriterionReport> {
    (1..=CRITERIA.len())
        .into_par_iter()
        .map(run_criterion)
        .collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Ordinal regime and independent ordinal oracles

fn term_count(a: &Ordinal) -> usize {
    a.terms().iter().map(|t| 1 + term_count(&t.exp)).sum()
}

/// Ordinals of ω-nesting depth at most `depth` (depth 0: the naturals up to
/// 3), with at most 3 terms and coefficients at most 3 at every level, and
/// at most `budget` terms in total counting every level.
fn regime_at(depth: usize, budget: usize) -> Vec<Ordinal> {
    if depth == 0 {
        let top = if budget == 0 { 0 } else { 3 };
        return (0..=top).map(Ordinal::from).collect();
    }
    let mut exps = if budget == 0 {
        Vec::new()
    } else {
        regime_at(depth - 1, budget - 1)
    };
    exps.sort_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    fn extend(
        exps: &[Ordinal],
        prefix: &mut Vec<(Ordinal, u64)>,
        budget: usize,
        out: &mut Vec<Ordinal>,
    ) {
        out.push(Ordinal::make(prefix.clone()).expect("decreasing exponents"));
        if prefix.len() == 3 {
            return;
        }
        for (i, e) in exps.iter().enumerate() {
            let cost = 1 + term_count(e);
            if cost > budget {
                continue;
            }
            for c in 1..=3 {
                prefix.push((e.clone(), c));
                extend(&exps[i + 1..], prefix, budget - cost, out);
                prefix.pop();
            }
        }
    }
    extend(&exps, &mut Vec::new(), budget, &mut out);
    out
}

/// The ordinal test regime with the given total term budget.
pub fn ordinal_regime(budget: usize) -> Vec<Ordinal> {
    regime_at(2, budget)
}

/// Comparison written directly from the definition of Cantor normal form,
/// without the derived ordering.
fn oracle_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    for (x, y) in a.terms().iter().zip(b.terms()) {
        match oracle_cmp(&x.exp, &y.exp) {
            Ordering::Equal => {}
            other => return other,
        }
        match x.coef.cmp(&y.coef) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.terms().len().cmp(&b.terms().len())
}

/// Natural sum as the sorted merge of unit lists.
fn oracle_nat_sum(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let mut units: Vec<Ordinal> = a.to_units().exponents().to_vec();
    units.extend(b.to_units().exponents().iter().cloned());
    units.sort_by(|x, y| oracle_cmp(y, x));
    Ordinal::from_units(&UnitList::new(units).expect("sorted"))
}

/// Ordinal sum by absorption: units of `a` below the leading unit of `b`
/// disappear.
fn oracle_add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let bu = b.to_units();
    let Some(lead) = bu.exponents().first() else {
        return a.clone();
    };
    let mut units: Vec<Ordinal> = a
        .to_units()
        .exponents()
        .iter()
        .filter(|u| oracle_cmp(u, lead) != Ordering::Less)
        .cloned()
        .collect();
    units.extend(bu.exponents().iter().cloned());
    Ordinal::from_units(&UnitList::new(units).expect("sorted"))
}

fn ordinal_algebra() -> Tally {
    let zero = Ordinal::zero();
    let mut wide = ordinal_regime(6);
    wide.sort_by(oracle_cmp);

    let mut t = Tally::default();
    for a in &wide {
        t.check(a.add(&zero) == *a && zero.add(a) == *a, || format!("{a}+0"));
        t.check(a.nat_sum(&zero) == *a, || format!("{a}#0"));
        t.check(Ordinal::parse(&a.to_string()).as_ref() == Ok(a), || {
            format!("round trip {a}")
        });
    }

    // Every pair of the regime. Strict monotonicity is checked between
    // neighbours in sorted order, which covers all pairs by transitivity.
    let pairwise: Vec<Tally> = wide
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let mut t = Tally::default();
            let mut prev: Option<(Ordinal, Ordinal, Ordinal)> = None;
            for (j, b) in wide.iter().enumerate() {
                // comparison agrees with the sorted position: a total order
                t.check(a.cmp(b) == i.cmp(&j), || format!("cmp {a} {b}"));
                let ab = a.nat_sum(b);
                let ba = b.nat_sum(a);
                t.check(ab == ba, || format!("{a}#{b} commutes"));
                let right = a.add(b);
                let left = b.add(a);
                if i <= j {
                    let d = a.left_sub(b);
                    t.check(d.map(|d| a.add(&d)) == Ok(b.clone()), || {
                        format!("{a}+({b}-{a})")
                    });
                }
                if let Some((pba, pright, pleft)) = &prev {
                    t.check(*pba < ba, || format!("{}#{a} < {b}#{a}", wide[j - 1]));
                    t.check(*pright < right, || format!("{a}+{} < {a}+{b}", wide[j - 1]));
                    t.check(*pleft <= left, || format!("{}+{a} <= {b}+{a}", wide[j - 1]));
                }
                prev = Some((ba, right, left));
            }
            t
        })
        .collect();
    t.merge(Tally::merged(pairwise));

    // Sums against unit-list oracles on the next smaller regime.
    let mid = ordinal_regime(5);
    let oracles: Vec<Tally> = mid
        .par_iter()
        .map(|a| {
            let mut t = Tally::default();
            for b in &mid {
                t.check(a.nat_sum(b) == oracle_nat_sum(a, b), || {
                    format!("{a}#{b} units")
                });
                t.check(a.add(b) == oracle_add(a, b), || {
                    format!("{a}+{b} absorption")
                });
            }
            t
        })
        .collect();
    t.merge(Tally::merged(oracles));

    // Associativity over every triple of the smaller regime.
    let narrow = ordinal_regime(4);
    let table = |op: fn(&Ordinal, &Ordinal) -> Ordinal| -> Vec<Vec<Ordinal>> {
        narrow
            .iter()
            .map(|a| narrow.iter().map(|b| op(a, b)).collect())
            .collect()
    };
    let sums = table(Ordinal::add);
    let nsums = table(Ordinal::nat_sum);
    let triples: Vec<Tally> = (0..narrow.len())
        .into_par_iter()
        .map(|x| {
            let mut t = Tally::default();
            let a = &narrow[x];
            for y in 0..narrow.len() {
                for (z, c) in narrow.iter().enumerate() {
                    t.check(sums[x][y].add(c) == a.add(&sums[y][z]), || {
                        format!("({a}+{})+{c}", narrow[y])
                    });
                    t.check(nsums[x][y].nat_sum(c) == a.nat_sum(&nsums[y][z]), || {
                        format!("({a}#{})#{c}", narrow[y])
                    });
                }
            }
            t
        })
        .collect();
    t.merge(Tally::merged(triples));

    let mut r = rng(1);
    for _ in 0..100_000 {
        let [a, b, c] = [0; 3].map(|_| &wide[r.gen_range(0..wide.len())]);
        t.check(a.add(b).add(c) == a.add(&b.add(c)), || {
            format!("({a}+{b})+{c}")
        });
        t.check(a.nat_sum(b).nat_sum(c) == a.nat_sum(&b.nat_sum(c)), || {
            format!("({a}#{b})#{c}")
        });
    }
    t
}

fn sum_comparison() -> Tally {
    let wide = ordinal_regime(6);
    let parts: Vec<Tally> = wide
        .par_iter()
        .map(|a| {
            let mut t = Tally::default();
            let wa = Ordinal::omega_pow(a.clone());
            for b in &wide {
                let wb = Ordinal::omega_pow(b.clone());
                let lhs = wa <= wb;
                let rhs = oracle_cmp(a, b) != Ordering::Greater;
                t.check(lhs == rhs, || format!("w^{a} <= w^{b} vs {a} <= {b}"));
                if oracle_cmp(a, b) == Ordering::Less {
                    t.check(wa.add(&wb) == wb, || format!("w^{a} + w^{b} absorbs"));
                }
            }
            t
        })
        .collect();
    Tally::merged(parts)
}

fn indecomposability() -> Tally {
    let wide = ordinal_regime(6);
    let mut deltas = wide.clone();
    deltas.sort_by(oracle_cmp);
    let powers: Vec<Ordinal> = deltas
        .iter()
        .map(|d| Ordinal::omega_pow(d.clone()))
        .collect();
    let mut t = Tally::default();
    for w in powers.windows(2) {
        t.check(w[0] < w[1], || format!("w^ increasing at {}", w[1]));
    }
    // {δ : ω^δ ≤ x} is an initial segment of the sorted exponents, so the
    // implication for every δ is a comparison of segment lengths
    let below = |x: &Ordinal| powers.partition_point(|p| p <= x);
    let counts: Vec<usize> = wide.iter().map(below).collect();
    let parts: Vec<Tally> = wide
        .par_iter()
        .zip(&counts)
        .map(|(b, &nb)| {
            let mut t = Tally::default();
            for (c, &nc) in wide.iter().zip(&counts) {
                let nsum = below(&b.add(c));
                t.check(nsum <= nb.max(nc), || {
                    format!("some w^d <= {b}+{c} is below neither")
                });
            }
            t
        })
        .collect();
    t.merge(Tally::merged(parts));

    // direct check of every triple on the smaller regime
    let narrow = ordinal_regime(4);
    for d in &narrow {
        let wd = Ordinal::omega_pow(d.clone());
        for b in &narrow {
            for c in &narrow {
                if wd <= b.add(c) {
                    t.check(wd <= *b || wd <= *c, || format!("w^{d} <= {b}+{c}"));
                }
            }
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Finite posets

/// Every partial order on `0..n` (labelled, so isomorphic copies included).
pub fn all_posets(n: usize) -> Vec<FinitePoset> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    let total = 3usize.pow(pairs.len() as u32);
    for code in 0..total {
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut c = code;
        for &(i, j) in &pairs {
            match c % 3 {
                1 => rel[i][j] = true,
                2 => rel[j][i] = true,
                _ => {}
            }
            c /= 3;
        }
        if let Ok(p) = FinitePoset::from_matrix(&rel) {
            out.push(p);
        }
    }
    out
}

fn random_poset(r: &mut ChaCha8Rng, n: usize) -> FinitePoset {
    let density: f64 = r.gen_range(0.05..0.6);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(r);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    FinitePoset::from_pairs(n, &pairs).expect("edges follow a linear order")
}

/// Longest chain by checking every subset.
fn longest_chain_by_subsets(p: &FinitePoset) -> usize {
    let n = p.size();
    (0u64..1 << n)
        .filter(|&m| {
            (0..n).all(|x| {
                m & (1 << x) == 0 || (0..n).all(|y| m & (1 << y) == 0 || p.comparable(x, y))
            })
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Longest chain by unmemoized search over strictly increasing paths.
fn longest_chain_by_paths(p: &FinitePoset) -> usize {
    fn from(p: &FinitePoset, x: usize) -> usize {
        1 + (0..p.size())
            .filter(|&y| p.lt(x, y))
            .map(|y| from(p, y))
            .max()
            .unwrap_or(0)
    }
    (0..p.size()).map(|x| from(p, x)).max().unwrap_or(0)
}

/// Labelled poset counts for sizes 0..=5.
const LABELLED_POSETS: [usize; 6] = [1, 1, 3, 19, 219, 4231];

fn rank_identity() -> Tally {
    let limits = OracleLimits::default();
    let mut t = Tally::default();
    for (n, &count) in LABELLED_POSETS.iter().enumerate() {
        let all = all_posets(n);
        t.check(all.len() == count, || {
            format!("{} posets of size {n}", all.len())
        });
        for p in &all {
            t.check(bad_tree_rank(p, &limits) == Ok(n), || {
                format!("rank of {p}")
            });
            t.check(desc_tree_rank(p) == longest_chain_by_subsets(p), || {
                format!("height of {p}")
            });
        }
    }
    let mut r = rng(4);
    let posets: Vec<FinitePoset> = (0..200)
        .map(|_| {
            let n = r.gen_range(1..=limits.rank_cap);
            random_poset(&mut r, n)
        })
        .collect();
    let parts: Vec<Tally> = posets
        .par_iter()
        .map(|p| {
            let mut t = Tally::default();
            t.check(bad_tree_rank(p, &limits) == Ok(p.size()), || {
                format!("rank of {p}")
            });
            t.check(desc_tree_rank(p) == longest_chain_by_paths(p), || {
                format!("height of {p}")
            });
            t
        })
        .collect();
    t.merge(Tally::merged(parts));
    t
}

fn recursion_conformance() -> Tally {
    let limits = OracleLimits::default();
    let check = |p: &FinitePoset, t: &mut Tally| {
        let ext = mle_by_recursion(p, &limits).expect("under the cap");
        let rank = bad_tree_rank(p, &limits).expect("under the cap");
        t.check(is_linear_extension(p, &ext), || format!("extension of {p}"));
        let seq: Vec<usize> = ext.iter().rev().copied().collect();
        t.check(is_bad_sequence(p, &seq) && seq.len() == rank, || {
            format!("bad sequence of {p}")
        });
        let chain = mc_by_recursion(p, &limits).expect("under the cap");
        t.check(is_chain(p, &chain), || format!("chain of {p}"));
        t.check(chain.windows(2).all(|w| p.lt(w[0], w[1])), || {
            format!("chain order of {p}")
        });
        t.check(chain.len() == desc_tree_rank(p), || {
            format!("chain length of {p}")
        });
    };
    let mut t = Tally::default();
    for n in 0..=5 {
        for p in all_posets(n) {
            check(&p, &mut t);
        }
    }
    let mut r = rng(8);
    for _ in 0..100 {
        let n = r.gen_range(1..=16);
        check(&random_poset(&mut r, n), &mut t);
    }
    t
}

// ---------------------------------------------------------------------------
// Terms

fn random_fin(r: &mut ChaCha8Rng, max: usize) -> FinitePoset {
    let n = r.gen_range(1..=max);
    random_poset(r, n)
}

/// A random term whose leaves are drawn by `leaf`, with up to `depth`
/// levels of sums.
fn random_term(
    r: &mut ChaCha8Rng,
    depth: usize,
    leaf: &mut dyn FnMut(&mut ChaCha8Rng) -> WpoTerm,
) -> WpoTerm {
    if depth == 0 || r.gen_bool(0.3) {
        return leaf(r);
    }
    let l = random_term(r, depth - 1, leaf);
    let rt = random_term(r, depth - 1, leaf);
    if r.gen_bool(0.5) {
        WpoTerm::dsum(l, rt)
    } else {
        WpoTerm::osum(l, rt)
    }
}

fn calculus_agreement() -> Tally {
    let limits = OracleLimits::default();
    let mut t = Tally::default();
    let mut r = rng(5);
    let mut accepted = 0;
    while accepted < 80 {
        let term = random_term(&mut r, 3, &mut |r| {
            if r.gen_bool(0.5) {
                WpoTerm::Ord(Ordinal::from(r.gen_range(0..=3)))
            } else {
                WpoTerm::Fin(random_fin(r, 3))
            }
        });
        if term.carrier_size().is_none_or(|s| s > 8) {
            continue;
        }
        accepted += 1;
        let p = materialize(&term).expect("finite leaves");
        let rank = bad_tree_rank(&p, &limits).map(|n| Ordinal::from(n as u64));
        t.check(rank == Ok(max_order_type(&term)), || format!("o({term})"));
        let ht = Ordinal::from(desc_tree_rank(&p) as u64);
        t.check(ht == height(&term), || format!("ht({term})"));
    }
    for m in 0..=4usize {
        for n in 0..=4usize {
            let term = WpoTerm::dsum(
                WpoTerm::Fin(FinitePoset::chain(m)),
                WpoTerm::Fin(FinitePoset::chain(n)),
            );
            let p = materialize(&term).expect("finite");
            let expect = Ordinal::from((m + n) as u64);
            t.check(
                Ordinal::from(m as u64).nat_sum(&Ordinal::from(n as u64)) == expect,
                || format!("{m}#{n}"),
            );
            t.check(bad_tree_rank(&p, &limits).ok() == Some(m + n), || {
                format!("rank {term}")
            });
            t.check(max_order_type(&term) == expect, || format!("o({term})"));
        }
    }
    t
}

fn witness_validity() -> Tally {
    let limits = OracleLimits::default();
    let pool: Vec<Ordinal> = ordinal_regime(4)
        .into_iter()
        .filter(|a| !a.is_zero())
        .collect();
    let mut r = rng(6);
    let mut terms = Vec::new();
    while terms.len() < 60 {
        let term = random_term(&mut r, 3, &mut |r| {
            if r.gen_bool(0.7) {
                WpoTerm::Ord(pool[r.gen_range(0..pool.len())].clone())
            } else {
                WpoTerm::Fin(random_fin(r, 4))
            }
        });
        if term.carrier_size().is_none() {
            terms.push(term);
        }
    }
    let parts: Vec<Tally> = terms
        .par_iter()
        .map(|term| check_witnesses(term, &limits))
        .collect();
    Tally::merged(parts)
}

fn check_witnesses(term: &WpoTerm, limits: &OracleLimits) -> Tally {
    let mut t = Tally::default();
    let mut en = BelowEnumerator::new();
    let ext = match mle_extension(term, limits) {
        Ok(ext) => ext,
        Err(e) => {
            t.check(false, || format!("extension of {term}: {e}"));
            return t;
        }
    };
    let otype = max_order_type(term);
    t.check(*ext.order_type() == otype, || {
        format!("extension type of {term}")
    });

    let elems = term.enumerate_elements(40);
    let pos: Vec<Ordinal> = elems
        .iter()
        .map(|x| ext.position(x).expect("valid"))
        .collect();
    for (i, x) in elems.iter().enumerate() {
        t.check(
            pos[i] < otype && ext.element_at(&pos[i]).as_ref() == Ok(x),
            || format!("{term}: element_at(position({x}))"),
        );
        for (j, y) in elems.iter().enumerate().skip(i + 1) {
            let le = term.leq(x, y).expect("valid");
            let ge = term.leq(y, x).expect("valid");
            let ok = pos[i] != pos[j] && (!le || pos[i] < pos[j]) && (!ge || pos[j] < pos[i]);
            t.check(ok, || format!("{term}: extension order on {x}, {y}"));
        }
    }
    let mut positions = en.first_below(&otype, 60);
    positions.extend(pos.iter().cloned());
    for xi in &positions {
        let x = ext.element_at(xi);
        let back = x.as_ref().ok().and_then(|x| ext.position(x).ok());
        t.check(back.as_ref() == Some(xi), || {
            format!("{term}: position(element_at({xi}))")
        });
    }

    let chain = match max_chain(term, limits) {
        Ok(c) => c,
        Err(e) => {
            t.check(false, || format!("chain of {term}: {e}"));
            return t;
        }
    };
    let ht = height(term);
    t.check(*chain.order_type() == ht, || {
        format!("chain length of {term}")
    });
    let heights = en.first_below(&ht, 60);
    let points: Vec<Element> = heights
        .iter()
        .map(|xi| chain.element_at(xi).expect("below the height"))
        .collect();
    for (i, (xi, x)) in heights.iter().zip(&points).enumerate() {
        t.check(
            chain.contains(x) && chain.position(x).as_ref() == Ok(xi),
            || format!("{term}: chain position {xi}"),
        );
        t.check(element_height(term, x).as_ref() == Ok(xi), || {
            format!("{term}: height of chain point {x} is not {xi}")
        });
        for (zeta, y) in heights.iter().zip(&points).skip(i + 1) {
            let ok = if xi < zeta {
                term.leq(x, y) == Ok(true) && x != y
            } else {
                term.leq(y, x) == Ok(true) && x != y
            };
            t.check(ok, || format!("{term}: chain points {x}, {y} not ordered"));
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Shuffles

fn shuffle_suite() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(7);
    let mut negatives = 0;
    for _ in 0..100 {
        let a = r.gen_range(1..=15);
        let b = r.gen_range(1..=15);
        let mut sides = vec![ShuffleSide::I; a];
        sides.extend(vec![ShuffleSide::J; b]);
        sides.shuffle(&mut r);
        let p = ShufflePresentation::from_interleaving(&sides);
        let n = p.sample.len();
        match shuffle_embed(&p) {
            Ok(report) => t.check(report.pairs_checked == n * (n - 1) / 2, || {
                format!("pairs checked for {sides:?}")
            }),
            Err(e) => t.check(false, || format!("{sides:?}: {e}")),
        }
        // point t(x) at a cofinal point that lies below x
        let cof = p.cofinal;
        let target = p.sample.iter().enumerate().find_map(|(i, &(s, label))| {
            let earlier = p.sample[..i].iter().find(|(s2, _)| *s2 == cof)?;
            (s != cof).then_some((label, earlier.1))
        });
        if let Some((label, earlier)) = target {
            let mut bad = p.clone();
            bad.t.insert(label, earlier);
            negatives += 1;
            t.check(
                matches!(
                    shuffle_embed(&bad),
                    Err(ShuffleError::NotOrderPreserving { .. })
                ),
                || format!("corruption of {sides:?} not detected"),
            );
        }
    }
    t.check(negatives > 0, || {
        "no corrupted presentation was generated".into()
    });
    t
}

// ---------------------------------------------------------------------------
// True stages

fn check_stage_table(f: &EnumFn, t: &mut Tally) {
    let table = f.table();
    let horizon = f.horizon();
    let order = build_stage_order(f);
    let mut perm = order.order().to_vec();
    perm.sort_unstable();
    t.check(perm == (0..=horizon).collect::<Vec<_>>(), || {
        format!("{table:?}: not a permutation")
    });
    for s in 0..=horizon {
        for u in s + 1..=horizon {
            if order.lt(s, u) {
                let ok = (u + 1..=horizon).all(|r| order.lt(s, r));
                t.check(ok, || format!("{table:?}: fact 1 for {s} <L {u}"));
            }
            if table[u] < table[s] {
                t.check(order.lt(s, u), || format!("{table:?}: fact 2 for {s}, {u}"));
            }
        }
        let truth = is_true_stage(f, s).expect("in range");
        t.check(
            truth == (s + 1..=horizon).all(|u| table[u] > table[s]),
            || format!("{table:?}: truth of {s}"),
        );
        if truth {
            let ok = (s + 1..=horizon).all(|u| order.lt(u, s));
            t.check(ok, || {
                format!("{table:?}: later stages above true stage {s}")
            });
        } else {
            let t0 = (s + 1..=horizon)
                .find(|&u| table[u] < table[s])
                .expect("not true")
                - 1;
            let ok = (0..=horizon).all(|r| !order.lt(r, s) || r <= t0);
            t.check(ok, || format!("{table:?}: predecessors of {s} beyond {t0}"));
        }
    }
    let desc = extract_descending(f);
    let expected: Vec<usize> = (0..=horizon)
        .filter(|&s| is_true_stage(f, s).unwrap())
        .collect();
    t.check(desc == expected, || {
        format!("{table:?}: extracted {desc:?}")
    });
    t.check(desc.windows(2).all(|w| order.lt(w[1], w[0])), || {
        format!("{table:?}: {desc:?} not descending")
    });
    for m in 0..desc.len() {
        match decode_membership(f, &desc, m) {
            Ok(d) => {
                t.check(d.bound_holds, || format!("{table:?}: f(s_{m}) < {m}"));
                t.check(d.member == table.contains(&(m as u64)), || {
                    format!("{table:?}: decode {m}")
                });
            }
            Err(e) => t.check(false, || format!("{table:?}: decode {m}: {e}")),
        }
    }
}

fn all_injective_tables(len: usize, values: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if prefix.len() == len {
        out.push(prefix.clone());
        return;
    }
    for v in 0..values {
        if !prefix.contains(&v) {
            prefix.push(v);
            all_injective_tables(len, values, prefix, out);
            prefix.pop();
        }
    }
}

fn random_table(r: &mut ChaCha8Rng, len: usize) -> Vec<u64> {
    if r.gen_bool(0.5) {
        let mut values: Vec<u64> = (0..(len as u64) * 3).collect();
        values.shuffle(r);
        values.truncate(len);
        values
    } else {
        // mostly increasing, with local disorder
        let mut values: Vec<u64> = (0..len as u64).collect();
        for _ in 0..len / 3 {
            let i = r.gen_range(0..len);
            let j = (i + r.gen_range(1..=4)).min(len - 1);
            values.swap(i, j);
        }
        values
    }
}

fn true_stage_suite() -> Tally {
    let mut t = Tally::default();
    let mut tables = Vec::new();
    for len in 1..=6 {
        all_injective_tables(len, 9, &mut Vec::new(), &mut tables);
    }
    let mut r = rng(9);
    for _ in 0..500 {
        let len = r.gen_range(1..=40);
        tables.push(random_table(&mut r, len));
    }
    let parts: Vec<Tally> = tables
        .par_chunks(4096)
        .map(|chunk| {
            let mut t = Tally::default();
            for table in chunk {
                let f = EnumFn::new(table.clone()).expect("injective by construction");
                check_stage_table(&f, &mut t);
            }
            t
        })
        .collect();
    t.merge(Tally::merged(parts));

    for _ in 0..40 {
        let f = EnumFn::new(random_table(&mut r, 61)).expect("injective");
        check_interval_samples(&f, &mut r, &mut t);
    }
    t
}

fn check_interval_samples(f: &EnumFn, r: &mut ChaCha8Rng, t: &mut Tally) {
    let order = build_stage_order(f);
    let expanded = expand_prime(&order);
    let table = f.table();
    let true_stages = extract_descending(f);
    let index = |p: (usize, usize)| expanded.iter().position(|&q| q == p).unwrap();
    for _ in 0..10 {
        let n = true_stages[r.gen_range(0..true_stages.len())];
        let x = (n, r.gen_range(0..=n));
        let k = r.gen_range(0..=60);
        let xpos = index(x);
        // a true stage m <L n with m ≥ k guarantees a witness (m, 0)
        let guaranteed = true_stages.iter().any(|&m| m >= k && order.lt(m, n));
        match check_interval_property(&expanded, f, x, k) {
            Ok(w) => {
                let ypos = index(w.y);
                let eligible = w.y == x || (w.y.1 == 0 && true_stages.contains(&w.y.0));
                let ok = eligible && ypos <= xpos && w.interval_size == xpos - ypos + 1;
                t.check(ok && w.interval_size > k, || {
                    format!("{table:?}: witness for {x:?}, {k}")
                });
            }
            Err(TrueStageError::HorizonExhausted) => {
                t.check(!guaranteed, || {
                    format!("{table:?}: no witness for {x:?}, {k}")
                });
            }
            Err(e) => t.check(false, || format!("{table:?}: {x:?}, {k}: {e}")),
        }
    }
    // non-true stages are rejected
    if let Some(s) = (0..=f.horizon()).find(|s| !true_stages.contains(s)) {
        t.check(
            check_interval_property(&expanded, f, (s, 0), 0)
                == Err(TrueStageError::NotUpperSide(s)),
            || format!("{table:?}: stage {s} accepted"),
        );
    }
}

// ---------------------------------------------------------------------------
// Chains of disjoint unions of ordinals, and nested subsequence refinement

fn chain_embedding_demo() -> Tally {
    let wide = ordinal_regime(6);
    let mut r = rng(10);
    let mut pairs = vec![
        (Ordinal::omega(), Ordinal::omega_pow(Ordinal::from(2))),
        (Ordinal::from(5), Ordinal::from(5)),
    ];
    while pairs.len() < 50 {
        let a = wide[r.gen_range(0..wide.len())].clone();
        let b = wide[r.gen_range(0..wide.len())].clone();
        pairs.push((a, b));
    }
    let mut t = Tally::default();
    for (a, b) in &pairs {
        let demo = mc_to_embedding(a, b, 40);
        let side = if a >= b { Side::Left } else { Side::Right };
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        t.check(demo.chain_side == side, || format!("{a}, {b}: chain side"));
        t.check(demo.height == big.to_string(), || {
            format!("{a}, {b}: height")
        });
        t.check(demo.embedded == small.to_string(), || {
            format!("{a}, {b}: embedded")
        });
        t.check(demo.order_preserved, || {
            format!("{a}, {b}: order not preserved")
        });
        let expected_rows = small.as_finite().map_or(40, |n| n.min(40) as usize);
        t.check(demo.rows.len() == expected_rows, || {
            format!("{a}, {b}: rows")
        });
        let prefix = if side == Side::Left { "L(" } else { "R(" };
        t.check(
            demo.rows.iter().all(|row| row.image.starts_with(prefix)),
            || format!("{a}, {b}: image outside the chain side"),
        );
    }
    t
}

fn schmidt_verbatim(p: &FinitePoset, y: &[Vec<usize>], g: &[usize]) -> bool {
    g.windows(2)
        .enumerate()
        .all(|(j, w)| w[0] < w[1] && p.leq(y[w[0]][j], y[w[1]][j]))
}

fn schmidt_suite() -> Tally {
    let mut t = Tally::default();
    let mut r = rng(11);
    let small: Vec<FinitePoset> = (1..=5).flat_map(all_posets).collect();
    for _ in 0..300 {
        let p = &small[r.gen_range(0..small.len())];
        let h = r.gen_range(1..=14);
        let y: Vec<Vec<usize>> = (0..h)
            .map(|i| (0..=i).map(|_| r.gen_range(0..p.size())).collect())
            .collect();
        match schmidt_extract(&y, h, |a, b| p.leq(*a, *b)) {
            Ok(res) => {
                t.check(schmidt_verbatim(p, &y, &res.g), || {
                    format!("{p}: {y:?} gives {:?}", res.g)
                });
                t.check(
                    res.horizon_exhausted_at == res.g.len() && !res.g.is_empty(),
                    || format!("{p}: {y:?} stopped at {}", res.horizon_exhausted_at),
                );
            }
            Err(e) => t.check(false, || format!("{p}: {e}")),
        }
    }
    let chain = FinitePoset::chain(6);
    for h in 1..=16 {
        // columns nondecreasing down the rows
        let mut y: Vec<Vec<usize>> = vec![Vec::new(); h];
        for j in 0..h {
            let mut v = 0;
            for row in y.iter_mut().skip(j) {
                v = (v + r.gen_range(0..=1)).min(5);
                row.push(v);
            }
        }
        match schmidt_extract(&y, h, |a, b| chain.leq(*a, *b)) {
            Ok(res) => {
                t.check(res.g == (0..h).collect::<Vec<_>>(), || {
                    format!("chain horizon {h}: {:?}", res.g)
                });
                t.check(schmidt_verbatim(&chain, &y, &res.g), || {
                    format!("chain horizon {h}")
                });
            }
            Err(e) => t.check(false, || format!("chain horizon {h}: {e}")),
        }
    }
    // the refinement step itself against brute force on short sequences
    for _ in 0..200 {
        let p = &small[r.gen_range(0..small.len())];
        let len = r.gen_range(0..=10);
        let seq: Vec<usize> = (0..len).map(|_| r.gen_range(0..p.size())).collect();
        let got = increasing_subsequence(&seq, |a, b| p.leq(*a, *b));
        let best = longest_increasing_by_subsets(p, &seq);
        t.check(got.len() == best, || format!("{p}: {seq:?}"));
    }
    t
}

fn longest_increasing_by_subsets(p: &FinitePoset, seq: &[usize]) -> usize {
    let n = seq.len();
    (0u32..1 << n)
        .filter(|&m| {
            let idx: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).collect();
            idx.windows(2).all(|w| p.leq(seq[w[0]], seq[w[1]]))
                && idx
                    .iter()
                    .enumerate()
                    .all(|(a, &i)| idx[a + 1..].iter().all(|&j| p.leq(seq[i], seq[j])))
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regime_sizes() {
        // counted independently by a separate enumeration script
        assert_eq!(ordinal_regime(4).len(), 256);
        assert_eq!(ordinal_regime(6).len(), 3199);
        let mut sorted = ordinal_regime(6);
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 3199);
    }

    #[test]
    fn labelled_poset_counts() {
        for (n, &count) in LABELLED_POSETS.iter().enumerate().take(5) {
            assert_eq!(all_posets(n).len(), count);
        }
    }
}
