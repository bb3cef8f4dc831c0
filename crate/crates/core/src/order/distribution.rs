use super::OrderClass;
use crate::error::{Error, Result};
use crate::stats::binomial_std_error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassWeight {
    pub probability: f64,
    pub count: u64,
}

/// Probability distribution over the isomorphism classes of `K`-element
/// orders. `sample_count` is 0 for exact distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDistribution {
    pub k: usize,
    pub weights: BTreeMap<OrderClass, ClassWeight>,
    pub sample_count: u64,
}

impl ClassDistribution {
    /// Empirical frequencies from class counts.
    pub fn from_counts(k: usize, counts: BTreeMap<OrderClass, u64>) -> Result<Self> {
        let n: u64 = counts.values().sum();
        if n == 0 {
            return Err(Error::Argument("no samples".into()));
        }
        check_sizes(k, counts.keys())?;
        let weights = counts
            .into_iter()
            .map(|(c, count)| (c, ClassWeight { probability: count as f64 / n as f64, count }))
            .collect();
        Ok(ClassDistribution { k, weights, sample_count: n })
    }

    /// An exact distribution; probabilities must sum to 1 within `1e-12`.
    pub fn exact(k: usize, probabilities: BTreeMap<OrderClass, f64>) -> Result<Self> {
        check_sizes(k, probabilities.keys())?;
        if probabilities.values().any(|&p| !(p >= 0.0)) {
            return Err(Error::Argument("negative probability".into()));
        }
        let total: f64 = probabilities.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Argument(format!("probabilities sum to {total}")));
        }
        let weights = probabilities
            .into_iter()
            .map(|(c, probability)| (c, ClassWeight { probability, count: 0 }))
            .collect();
        Ok(ClassDistribution { k, weights, sample_count: 0 })
    }

    pub fn probability(&self, class: &OrderClass) -> f64 {
        self.weights.get(class).map_or(0.0, |w| w.probability)
    }

    /// Binomial standard error of a class frequency; 0 for exact inputs.
    pub fn std_error(&self, class: &OrderClass) -> f64 {
        if self.sample_count == 0 {
            0.0
        } else {
            binomial_std_error(self.probability(class), self.sample_count)
        }
    }

    /// Σ |p − q| over the union of supports.
    pub fn l1_distance(&self, other: &ClassDistribution) -> Result<f64> {
        if self.k != other.k {
            return Err(Error::Argument(format!("cannot compare K = {} with K = {}", self.k, other.k)));
        }
        let mut total = 0.0;
        for (c, w) in &self.weights {
            total += (w.probability - other.probability(c)).abs();
        }
        for (c, w) in &other.weights {
            if !self.weights.contains_key(c) {
                total += w.probability;
            }
        }
        Ok(total)
    }

    /// Combined binomial standard error of `l1_distance` between two
    /// independent estimates, summed over classes.
    pub fn l1_std_error(&self, other: &ClassDistribution) -> f64 {
        let classes: std::collections::BTreeSet<&OrderClass> =
            self.weights.keys().chain(other.weights.keys()).collect();
        classes
            .into_iter()
            .map(|c| (self.std_error(c).powi(2) + other.std_error(c).powi(2)).sqrt())
            .sum()
    }

    /// Probability of the `K`-chain class.
    pub fn chain_probability(&self) -> f64 {
        self.weights.iter().filter(|(c, _)| c.is_chain()).map(|(_, w)| w.probability).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("canonical_key,probability,count\n");
        for (c, w) in &self.weights {
            s.push_str(&format!("{},{},{}\n", c.to_hex(), w.probability, w.count));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == "canonical_key,probability,count" => {}
            _ => return Err(Error::Parse { line: 1, msg: "missing header".into() }),
        }
        let mut weights = BTreeMap::new();
        let mut k = None;
        let mut sampled = 0u64;
        for (n, line) in lines.filter(|(_, l)| !l.trim().is_empty()) {
            let err = |msg: String| Error::Parse { line: n + 1, msg };
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, got {}", fields.len())));
            }
            let class = OrderClass::from_hex(fields[0]).map_err(|e| err(e.to_string()))?;
            let probability: f64 = fields[1].parse().map_err(|e| err(format!("bad probability: {e}")))?;
            let count: u64 = fields[2].parse().map_err(|e| err(format!("bad count: {e}")))?;
            if *k.get_or_insert(class.size()) != class.size() {
                return Err(err("classes of different sizes".into()));
            }
            sampled += count;
            weights.insert(class, ClassWeight { probability, count });
        }
        let k = k.ok_or(Error::Parse { line: 2, msg: "no classes".into() })?;
        let total: f64 = weights.values().map(|w| w.probability).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parse { line: 1, msg: format!("probabilities sum to {total}") });
        }
        Ok(ClassDistribution { k, weights, sample_count: sampled })
    }
}

fn check_sizes<'a>(k: usize, classes: impl Iterator<Item = &'a OrderClass>) -> Result<()> {
    for c in classes {
        if c.size() != k {
            return Err(Error::Argument(format!("class of size {} in a K = {k} distribution", c.size())));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{canonical_class, FiniteOrder};

    fn class(o: FiniteOrder) -> OrderClass {
        canonical_class(&o).unwrap()
    }

    #[test]
    fn l1_extremes() {
        let chain = class(FiniteOrder::chain(3));
        let anti = class(FiniteOrder::antichain(3));
        let p = ClassDistribution::exact(3, BTreeMap::from([(chain.clone(), 1.0)])).unwrap();
        let q = ClassDistribution::exact(3, BTreeMap::from([(anti, 1.0)])).unwrap();
        assert_eq!(p.l1_distance(&p).unwrap(), 0.0);
        assert_eq!(p.l1_distance(&q).unwrap(), 2.0);
        let r = ClassDistribution::exact(2, BTreeMap::from([(class(FiniteOrder::chain(2)), 1.0)])).unwrap();
        assert!(matches!(p.l1_distance(&r), Err(Error::Argument(_))));
        assert_eq!(p.chain_probability(), 1.0);
    }

    #[test]
    fn csv_round_trip() {
        let counts = BTreeMap::from([(class(FiniteOrder::chain(3)), 3), (class(FiniteOrder::antichain(3)), 1)]);
        let d = ClassDistribution::from_counts(3, counts).unwrap();
        assert_eq!(d.sample_count, 4);
        let back = ClassDistribution::from_csv(&d.to_csv()).unwrap();
        assert_eq!(back, d);
        assert!(ClassDistribution::from_csv("nope\n").is_err());
    }

    #[test]
    fn exact_rejects_bad_mass() {
        let m = BTreeMap::from([(class(FiniteOrder::chain(2)), 0.7)]);
        assert!(ClassDistribution::exact(2, m).is_err());
    }
}
