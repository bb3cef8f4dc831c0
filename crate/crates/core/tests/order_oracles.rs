use causet::order::{
    automorphism_count, canonical_class, chronology_from_order, enumerate_orders, FiniteOrder,
};
use proptest::prelude::*;
use std::collections::{BTreeSet, HashSet};

/// All reflexive, antisymmetric, transitive matrices on `k` elements, found
/// by trying the three possible states of every unordered pair.
fn brute_orders(k: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut m = vec![vec![false; k]; k];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        let mut c = code;
        for &(i, j) in &pairs {
            match c % 3 {
                1 => m[i][j] = true,
                2 => m[j][i] = true,
                _ => {}
            }
            c /= 3;
        }
        let transitive = (0..k).all(|a| {
            (0..k).all(|b| (0..k).all(|d| !(m[a][b] && m[b][d]) || m[a][d]))
        });
        if transitive {
            out.push(m);
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Lexicographically least relabeled matrix, by trying every permutation.
fn brute_canonical(m: &[Vec<bool>], perms: &[Vec<usize>]) -> Vec<bool> {
    let k = m.len();
    perms
        .iter()
        .map(|s| {
            let mut flat = vec![false; k * k];
            for i in 0..k {
                for j in 0..k {
                    flat[s[i] * k + s[j]] = m[i][j];
                }
            }
            flat
        })
        .min()
        .unwrap()
}

fn matrix(o: &FiniteOrder) -> Vec<Vec<bool>> {
    let k = o.size();
    (0..k).map(|i| (0..k).map(|j| o.leq(i, j)).collect()).collect()
}

#[test]
fn enumeration_matches_brute_force_filter() {
    for (k, expected) in [(1, 1), (2, 3), (3, 19), (4, 219), (5, 4231)] {
        let ours: HashSet<Vec<Vec<bool>>> = enumerate_orders(k).unwrap().iter().map(matrix).collect();
        let brute: HashSet<Vec<Vec<bool>>> = brute_orders(k).into_iter().collect();
        assert_eq!(enumerate_orders(k).unwrap().len(), expected, "K = {k}");
        assert_eq!(ours.len(), expected, "duplicates for K = {k}");
        assert_eq!(ours, brute, "K = {k}");
    }
}

#[test]
fn class_counts_match_permutation_search() {
    for (k, expected) in [(1, 1), (2, 2), (3, 5), (4, 16), (5, 63)] {
        let perms = permutations(k);
        let orders = enumerate_orders(k).unwrap();
        let brute: BTreeSet<Vec<bool>> = orders.iter().map(|o| brute_canonical(&matrix(o), &perms)).collect();
        let ours: BTreeSet<_> = orders.iter().map(|o| canonical_class(o).unwrap()).collect();
        assert_eq!(brute.len(), expected);
        assert_eq!(ours.len(), expected);
    }
}

#[test]
fn automorphism_weighted_counts_recover_labeled_counts() {
    for k in 1..=5 {
        let orders = enumerate_orders(k).unwrap();
        let mut reps = std::collections::BTreeMap::new();
        for o in &orders {
            reps.entry(canonical_class(o).unwrap()).or_insert_with(|| o.clone());
        }
        let fact: u64 = (1..=k as u64).product();
        let total: u64 = reps.values().map(|o| fact / automorphism_count(o).unwrap()).sum();
        assert_eq!(total as usize, orders.len());
    }
}

#[test]
fn canonical_class_is_permutation_invariant_exhaustively() {
    for k in 1..=4 {
        let perms = permutations(k);
        for o in enumerate_orders(k).unwrap() {
            let c = canonical_class(&o).unwrap();
            for s in &perms {
                assert_eq!(canonical_class(&o.permute(s).unwrap()).unwrap(), c);
            }
        }
    }
}

#[test]
fn equal_keys_only_for_isomorphic_orders() {
    let perms = permutations(5);
    let orders = enumerate_orders(5).unwrap();
    let mut seen = std::collections::BTreeMap::new();
    for o in &orders {
        let b = brute_canonical(&matrix(o), &perms);
        let c = canonical_class(o).unwrap();
        if let Some(prev) = seen.insert(c.clone(), b.clone()) {
            assert_eq!(prev, b, "class {c} merges non-isomorphic orders");
        }
    }
}

#[test]
fn chronology_of_small_orders_is_empty() {
    for k in 1..=4 {
        for o in enumerate_orders(k).unwrap() {
            assert!(chronology_from_order(&o).iter().flatten().all(|&b| !b));
        }
    }
}

fn brute_chronology(o: &FiniteOrder) -> Vec<Vec<bool>> {
    let k = o.size();
    let chain_interval = |u: usize, v: usize| {
        let i: Vec<usize> = (0..k).filter(|&m| o.leq(u, m) && o.leq(m, v)).collect();
        i.iter().all(|&a| i.iter().all(|&b| o.comparable(a, b)))
    };
    (0..k)
        .map(|x| {
            (0..k)
                .map(|y| {
                    o.leq(x, y)
                        && (0..k).any(|u| {
                            (0..k).any(|v| o.lt(x, u) && o.lt(u, v) && o.lt(v, y) && !chain_interval(u, v))
                        })
                })
                .collect()
        })
        .collect()
}

fn order_strategy(max_k: usize) -> impl Strategy<Value = FiniteOrder> {
    (1..=max_k)
        .prop_flat_map(|k| {
            let pairs = k * (k - 1) / 2;
            (Just(k), prop::collection::vec(prop::bool::weighted(0.35), pairs), Just(()).prop_perturb(move |_, mut rng| {
                let mut p: Vec<usize> = (0..k).collect();
                for i in (1..k).rev() {
                    let j = (rng.next_u64() % (i as u64 + 1)) as usize;
                    p.swap(i, j);
                }
                p
            }))
        })
        .prop_map(|(k, edges, sigma)| {
            let mut rel = Vec::new();
            let mut e = edges.into_iter();
            for i in 0..k {
                for j in i + 1..k {
                    if e.next().unwrap() {
                        rel.push((i, j));
                    }
                }
            }
            FiniteOrder::from_relations(k, &rel).unwrap().permute(&sigma).unwrap()
        })
}

fn shuffle_strategy(k: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..k).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_class_survives_random_relabeling(
        (o, s) in order_strategy(10).prop_flat_map(|o| { let k = o.size(); (Just(o), shuffle_strategy(k)) })
    ) {
        let p = o.permute(&s).unwrap();
        prop_assert_eq!(canonical_class(&p).unwrap(), canonical_class(&o).unwrap());
        prop_assert_eq!(automorphism_count(&p).unwrap(), automorphism_count(&o).unwrap());
        prop_assert_eq!(canonical_class(&canonical_class(&o).unwrap().representative()).unwrap(), canonical_class(&o).unwrap());
    }

    #[test]
    fn automorphisms_match_brute_force(o in order_strategy(6)) {
        let k = o.size();
        let brute = permutations(k)
            .into_iter()
            .filter(|s| (0..k).all(|i| (0..k).all(|j| o.leq(i, j) == o.leq(s[i], s[j]))))
            .count() as u64;
        prop_assert_eq!(automorphism_count(&o).unwrap(), brute);
    }

    #[test]
    fn chronology_matches_quantifier_loop(o in order_strategy(9)) {
        prop_assert_eq!(chronology_from_order(&o), brute_chronology(&o));
    }

    #[test]
    fn text_round_trip(o in order_strategy(12)) {
        prop_assert_eq!(FiniteOrder::from_text(&o.to_text()).unwrap(), o);
    }
}
