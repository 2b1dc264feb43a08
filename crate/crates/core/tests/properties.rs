use proptest::prelude::*;

use wpo_core::maxtype::{
    element_height, height, increasing_subsequence, max_chain, max_order_type, mle_extension,
};
use wpo_core::oracle::OracleLimits;
use wpo_core::truestage::{
    build_stage_order, decode_membership, expand_prime, extract_descending, EnumFn,
};
use wpo_core::{Classification, Element, FinitePoset, Ordinal, WpoTerm};

fn ordinal() -> impl Strategy<Value = Ordinal> {
    let leaf = (0u64..6).prop_map(Ordinal::from);
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop::collection::vec((inner, 1u64..5), 0..4).prop_map(|mut terms| {
            terms.sort_by(|a, b| b.0.cmp(&a.0));
            terms.dedup_by(|a, b| a.0 == b.0);
            Ordinal::make(terms).unwrap()
        })
    })
}

fn poset(max: usize) -> impl Strategy<Value = FinitePoset> {
    (1..=max)
        .prop_flat_map(|n| {
            (
                Just(n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
            )
        })
        .prop_map(|(n, perm, edges)| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if edges[k] {
                        pairs.push((perm[i], perm[j]));
                    }
                    k += 1;
                }
            }
            FinitePoset::from_pairs(n, &pairs).unwrap()
        })
}

fn term() -> impl Strategy<Value = WpoTerm> {
    let leaf = prop_oneof![
        3 => ordinal().prop_filter("nonzero", |a| !a.is_zero()).prop_map(WpoTerm::Ord),
        1 => poset(4).prop_map(WpoTerm::Fin),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        (inner.clone(), inner, any::<bool>()).prop_map(|(l, r, disjoint)| {
            if disjoint {
                WpoTerm::dsum(l, r)
            } else {
                WpoTerm::osum(l, r)
            }
        })
    })
}

fn table() -> impl Strategy<Value = EnumFn> {
    prop::collection::hash_set(0u64..100, 1..30)
        .prop_flat_map(|set| Just(set.into_iter().collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|t| EnumFn::new(t).unwrap())
}

proptest! {
    #[test]
    fn ordinal_text_round_trip(a in ordinal()) {
        prop_assert_eq!(Ordinal::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn comparison_is_transitive(a in ordinal(), b in ordinal(), c in ordinal()) {
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn addition_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.add(&b) >= b);
        if b < c {
            prop_assert!(a.add(&b) < a.add(&c));
        }
    }

    #[test]
    fn natural_sum_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.nat_sum(&b), b.nat_sum(&a));
        prop_assert_eq!(a.nat_sum(&b).nat_sum(&c), a.nat_sum(&b.nat_sum(&c)));
        prop_assert!(a.nat_sum(&b) >= a.add(&b));
        if a < b {
            prop_assert!(a.nat_sum(&c) < b.nat_sum(&c));
        }
    }

    #[test]
    fn left_subtraction_inverts_addition(a in ordinal(), b in ordinal()) {
        prop_assert_eq!(a.left_sub(&a.add(&b)).unwrap(), b.clone());
        if a <= b {
            prop_assert_eq!(a.add(&a.left_sub(&b).unwrap()), b);
        } else {
            prop_assert!(a.left_sub(&b).is_err());
        }
    }

    #[test]
    fn multiplication_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&Ordinal::one()), a.clone());
    }

    #[test]
    fn units_round_trip(a in ordinal()) {
        prop_assert_eq!(Ordinal::from_units(&a.to_units()), a);
    }

    #[test]
    fn successor_and_predecessor(a in ordinal()) {
        prop_assert_eq!(a.succ().pred().unwrap(), a.clone());
        prop_assert_eq!(a.succ().classify(), Classification::Successor);
    }

    #[test]
    fn fundamental_sequences_increase_below_the_limit(a in ordinal(), n in 0u64..20) {
        if a.classify() == Classification::Limit {
            let x = a.fund_seq(n).unwrap();
            let y = a.fund_seq(n + 1).unwrap();
            prop_assert!(x < y && y < a);
        }
    }

    #[test]
    fn term_text_round_trip(t in term()) {
        prop_assert_eq!(WpoTerm::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn term_order_is_a_partial_order(t in term()) {
        let xs = t.enumerate_elements(12);
        for x in &xs {
            prop_assert_eq!(Element::parse(&x.to_string()).unwrap(), x.clone());
            prop_assert!(t.leq(x, x).unwrap());
            for y in &xs {
                if x != y && t.leq(x, y).unwrap() {
                    prop_assert!(!t.leq(y, x).unwrap());
                }
                for z in &xs {
                    if t.leq(x, y).unwrap() && t.leq(y, z).unwrap() {
                        prop_assert!(t.leq(x, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_invariants(a in term(), b in term()) {
        let ab = WpoTerm::dsum(a.clone(), b.clone());
        let ba = WpoTerm::dsum(b.clone(), a.clone());
        prop_assert_eq!(max_order_type(&ab), max_order_type(&ba));
        prop_assert_eq!(height(&ab), height(&ba));
        prop_assert!(height(&ab) <= max_order_type(&ab));
    }

    #[test]
    fn witnesses_round_trip(t in term()) {
        let limits = OracleLimits::default();
        let ext = mle_extension(&t, &limits).unwrap();
        for x in t.enumerate_elements(16) {
            let xi = ext.position(&x).unwrap();
            prop_assert_eq!(ext.element_at(&xi).unwrap(), x);
        }
        let chain = max_chain(&t, &limits).unwrap();
        for x in t.enumerate_elements(16) {
            if let Ok(xi) = chain.position(&x) {
                prop_assert_eq!(element_height(&t, &x).unwrap(), xi);
            }
        }
    }

    #[test]
    fn true_stages_descend_and_decode(f in table()) {
        let order = build_stage_order(&f);
        let desc = extract_descending(&f);
        for w in desc.windows(2) {
            prop_assert!(order.lt(w[1], w[0]));
        }
        for m in 0..desc.len() {
            let d = decode_membership(&f, &desc, m).unwrap();
            prop_assert_eq!(d.member, f.table().contains(&(m as u64)));
        }
        let total: usize = order.order().iter().map(|n| n + 1).sum();
        prop_assert_eq!(expand_prime(&order).len(), total);
    }

    #[test]
    fn increasing_subsequences_are_increasing(p in poset(5), seq in prop::collection::vec(0usize..5, 0..20)) {
        let seq: Vec<usize> = seq.into_iter().map(|x| x % p.size()).collect();
        let idx = increasing_subsequence(&seq, |a, b| p.leq(*a, *b));
        for w in idx.windows(2) {
            prop_assert!(w[0] < w[1]);
            prop_assert!(p.leq(seq[w[0]], seq[w[1]]));
        }
        prop_assert_eq!(idx.is_empty(), seq.is_empty());
    }

    #[test]
    fn poset_text_round_trip(p in poset(8)) {
        prop_assert_eq!(FinitePoset::parse(&p.to_string()).unwrap(), p);
    }
}
