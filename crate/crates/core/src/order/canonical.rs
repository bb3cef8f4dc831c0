//! Canonical labelings by color refinement plus individualization search.

use super::{ones, BitMatrix, FiniteOrder};
use crate::error::{Error, Result};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Largest order the exact canonicalizer accepts.
pub const MAX_CANONICAL_SIZE: usize = 12;

/// Isomorphism class of a finite order, identified by the packed `≤` matrix
/// of its lexicographically least relabeling. The first byte is `K`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderClass {
    key: Vec<u8>,
}

impl OrderClass {
    pub fn size(&self) -> usize {
        self.key[0] as usize
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.key)
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("malformed class key {text:?}"));
        let key = hex::decode(text).map_err(|_| bad())?;
        let Some(&first) = key.first() else {
            return Err(bad());
        };
        let k = first as usize;
        if key.len() != 1 + (k * k).div_ceil(8) {
            return Err(bad());
        }
        let class = OrderClass { key };
        let rep = FiniteOrder::from_matrix(&class.matrix_rows()).map_err(|_| bad())?;
        if canonical_class(&rep)? != class {
            return Err(bad());
        }
        Ok(class)
    }

    fn matrix_rows(&self) -> Vec<Vec<bool>> {
        let k = self.size();
        (0..k)
            .map(|i| (0..k).map(|j| bit(&self.key[1..], i * k + j)).collect())
            .collect()
    }

    /// The canonically labeled order of this class.
    pub fn representative(&self) -> FiniteOrder {
        FiniteOrder::from_matrix(&self.matrix_rows()).expect("class keys encode valid orders")
    }

    pub fn is_chain(&self) -> bool {
        self.representative().is_chain()
    }
}

impl fmt::Debug for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderClass({})", self.to_hex())
    }
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for OrderClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for OrderClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        OrderClass::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

fn bit(bytes: &[u8], idx: usize) -> bool {
    bytes[idx / 8] >> (7 - idx % 8) & 1 == 1
}

struct Refiner<'a> {
    k: usize,
    leq: &'a BitMatrix,
    geq: BitMatrix,
}

impl<'a> Refiner<'a> {
    fn new(order: &'a FiniteOrder) -> Self {
        let leq = order.bits();
        Refiner { k: leq.size(), leq, geq: leq.transpose() }
    }

    /// Refines until the number of cells stops growing. Colors are dense
    /// ranks of sorted signatures, so they only depend on the order and the
    /// input coloring up to relabeling.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut cells = count_cells(&colors);
        loop {
            let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..self.k)
                .map(|v| {
                    let mut down: Vec<u32> =
                        ones(self.geq.row(v)).filter(|&u| u != v).map(|u| colors[u]).collect();
                    let mut up: Vec<u32> =
                        ones(self.leq.row(v)).filter(|&u| u != v).map(|u| colors[u]).collect();
                    down.sort_unstable();
                    up.sort_unstable();
                    (colors[v], down, up)
                })
                .collect();
            let mut sorted = sigs.clone();
            sorted.sort();
            sorted.dedup();
            colors = sigs
                .iter()
                .map(|s| sorted.binary_search(s).expect("signature present") as u32)
                .collect();
            if sorted.len() == cells {
                return colors;
            }
            cells = sorted.len();
        }
    }

    fn individualize(&self, colors: &[u32], v: usize) -> Vec<u32> {
        let split: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| 2 * c + u32::from(c == colors[v] && u != v))
            .collect();
        self.refine(dense_ranks(&split))
    }

    fn twins(&self, a: usize, b: usize) -> bool {
        let strip = |m: &BitMatrix, x: usize| {
            let mut r = m.row(x).to_vec();
            r[x / 64] &= !(1 << (x % 64));
            r
        };
        let (mut ua, mut ub) = (strip(self.leq, a), strip(self.leq, b));
        let (mut da, mut db) = (strip(&self.geq, a), strip(&self.geq, b));
        for r in [&mut ua, &mut ub, &mut da, &mut db] {
            r[a / 64] &= !(1 << (a % 64));
            r[b / 64] &= !(1 << (b % 64));
        }
        ua == ub && da == db && !self.leq.get(a, b) && !self.leq.get(b, a)
    }

    fn leaf_key(&self, colors: &[u32]) -> Vec<u8> {
        let k = self.k;
        let mut inv = vec![0usize; k];
        for (v, &c) in colors.iter().enumerate() {
            inv[c as usize] = v;
        }
        let mut key = vec![0u8; 1 + (k * k).div_ceil(8)];
        key[0] = k as u8;
        for a in 0..k {
            for b in 0..k {
                if self.leq.get(inv[a], inv[b]) {
                    let idx = a * k + b;
                    key[1 + idx / 8] |= 1 << (7 - idx % 8);
                }
            }
        }
        key
    }

    fn search(&self, colors: Vec<u32>, best: &mut Option<Vec<u8>>) {
        let cells = count_cells(&colors);
        if cells == self.k {
            let key = self.leaf_key(&colors);
            if best.as_ref().is_none_or(|b| key < *b) {
                *best = Some(key);
            }
            return;
        }
        let target = first_nonsingleton(&colors);
        let mut tried: Vec<usize> = Vec::new();
        for v in (0..self.k).filter(|&v| colors[v] == target) {
            // swapping two twins is an automorphism fixing everything
            // individualized so far, so their subtrees give the same leaves
            if tried.iter().any(|&w| self.twins(v, w)) {
                continue;
            }
            tried.push(v);
            self.search(self.individualize(&colors, v), best);
        }
    }
}

fn count_cells(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn dense_ranks(values: &[u32]) -> Vec<u32> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    values.iter().map(|v| sorted.binary_search(v).unwrap() as u32).collect()
}

fn first_nonsingleton(colors: &[u32]) -> u32 {
    let mut counts = vec![0usize; colors.len()];
    for &c in colors {
        counts[c as usize] += 1;
    }
    counts.iter().position(|&n| n > 1).expect("coloring is not discrete") as u32
}

fn check_size(order: &FiniteOrder) -> Result<()> {
    if order.size() > MAX_CANONICAL_SIZE || order.size() == 0 {
        return Err(Error::Capability(format!(
            "canonical labeling supports 1 ≤ K ≤ {MAX_CANONICAL_SIZE}, got K = {}",
            order.size()
        )));
    }
    Ok(())
}

/// Isomorphism-invariant class key of `order`.
pub fn canonical_class(order: &FiniteOrder) -> Result<OrderClass> {
    check_size(order)?;
    let r = Refiner::new(order);
    let colors = r.refine(vec![0; r.k]);
    let mut best = None;
    r.search(colors, &mut best);
    Ok(OrderClass { key: best.expect("search reaches at least one leaf") })
}

/// Number of order-preserving bijections of the element set onto itself.
///
/// Incomparable elements with identical strict up and down sets can be
/// permuted freely, so the count factors into the factorials of those twin
/// classes times the automorphisms of the quotient that respect class sizes.
pub fn automorphism_count(order: &FiniteOrder) -> Result<u64> {
    check_size(order)?;
    let r = Refiner::new(order);
    let colors = r.refine(vec![0; r.k]);

    let mut class_of = vec![usize::MAX; r.k];
    let mut reps: Vec<usize> = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    for v in 0..r.k {
        if let Some(c) = reps.iter().position(|&w| r.twins(v, w)) {
            class_of[v] = c;
            sizes[c] += 1;
        } else {
            class_of[v] = reps.len();
            reps.push(v);
            sizes.push(1);
        }
    }
    let twin_factor: u64 = sizes.iter().map(|&s| (1..=s).product::<u64>()).product();

    let m = reps.len();
    let label: Vec<(u32, u64)> = (0..m).map(|c| (colors[reps[c]], sizes[c])).collect();
    let mut image = vec![usize::MAX; m];
    let mut used = vec![false; m];
    let quotient = count_maps(order, &reps, &label, 0, &mut image, &mut used);
    Ok(twin_factor * quotient)
}

fn count_maps(
    order: &FiniteOrder,
    reps: &[usize],
    label: &[(u32, u64)],
    i: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> u64 {
    let m = reps.len();
    if i == m {
        return 1;
    }
    let mut total = 0;
    for j in 0..m {
        if used[j] || label[j] != label[i] {
            continue;
        }
        let consistent = (0..i).all(|p| {
            let (a, b) = (reps[p], reps[image[p]]);
            order.leq(a, reps[i]) == order.leq(b, reps[j]) && order.leq(reps[i], a) == order.leq(reps[j], b)
        });
        if consistent {
            image[i] = j;
            used[j] = true;
            total += count_maps(order, reps, label, i + 1, image, used);
            used[j] = false;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vee() -> FiniteOrder {
        FiniteOrder::from_relations(3, &[(0, 1), (0, 2)]).unwrap()
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

    fn brute_automorphisms(order: &FiniteOrder) -> u64 {
        let k = order.size();
        permutations(k)
            .into_iter()
            .filter(|s| (0..k).all(|i| (0..k).all(|j| order.leq(i, j) == order.leq(s[i], s[j]))))
            .count() as u64
    }

    #[test]
    fn chain_labelings_share_a_class() {
        let c = FiniteOrder::chain(3);
        let key = canonical_class(&c).unwrap();
        for s in permutations(3) {
            assert_eq!(canonical_class(&c.permute(&s).unwrap()).unwrap(), key);
        }
        assert_ne!(key, canonical_class(&FiniteOrder::antichain(3)).unwrap());
        assert!(key.is_chain());
    }

    #[test]
    fn automorphisms_of_small_orders() {
        for k in 1..=7 {
            assert_eq!(automorphism_count(&FiniteOrder::chain(k)).unwrap(), 1);
            let fact: u64 = (1..=k as u64).product();
            assert_eq!(automorphism_count(&FiniteOrder::antichain(k)).unwrap(), fact);
        }
        assert_eq!(automorphism_count(&vee()).unwrap(), 2);
        assert_eq!(brute_automorphisms(&vee()), 2);
    }

    #[test]
    fn automorphisms_of_two_chains_and_a_crown() {
        // two disjoint 2-chains: swap the chains
        let two = FiniteOrder::from_relations(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(automorphism_count(&two).unwrap(), 2);
        // the 6-crown: minimal i below maximal j unless j = i + 3
        let mut rel = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                if j != i + 3 {
                    rel.push((i, j));
                }
            }
        }
        let crown = FiniteOrder::from_relations(6, &rel).unwrap();
        assert_eq!(automorphism_count(&crown).unwrap(), brute_automorphisms(&crown));
        assert_eq!(automorphism_count(&crown).unwrap(), 6);
    }

    #[test]
    fn hex_round_trip_and_representative() {
        let class = canonical_class(&vee()).unwrap();
        let back = OrderClass::from_hex(&class.to_hex()).unwrap();
        assert_eq!(back, class);
        assert_eq!(canonical_class(&class.representative()).unwrap(), class);
        assert!(OrderClass::from_hex("zz").is_err());
        assert!(OrderClass::from_hex("03").is_err());
        let json = serde_json::to_string(&class).unwrap();
        assert_eq!(serde_json::from_str::<OrderClass>(&json).unwrap(), class);
    }

    #[test]
    fn too_large_is_a_capability_error() {
        let big = FiniteOrder::antichain(13);
        assert!(matches!(canonical_class(&big), Err(Error::Capability(_))));
        assert!(matches!(automorphism_count(&big), Err(Error::Capability(_))));
    }
}
