//! Finite partial orders on `{0, …, K-1}`.
//!
//! Orders are stored reflexive and transitively closed as bit matrices. The
//! [`CausalOrder`] trait also lets the interval estimators run directly on a
//! model plus a point list, without materializing a `K × K` matrix.

mod bits;
mod canonical;
mod chronology;
mod distribution;
mod enumerate;

pub use canonical::{automorphism_count, canonical_class, OrderClass, MAX_CANONICAL_SIZE};
pub use chronology::chronology_from_order;
pub use distribution::{ClassDistribution, ClassWeight};
pub use enumerate::{enumerate_orders, MAX_ENUMERATION_SIZE};

pub(crate) use bits::{and_any, ones, BitMatrix};

use crate::error::{Error, Result};
use crate::spacetime::{Point, Spacetime};
use std::fmt;

/// Anything that can answer `i ≤ j` for indices below `size()`.
pub trait CausalOrder {
    fn size(&self) -> usize;
    fn leq(&self, i: usize, j: usize) -> bool;
}

/// A reflexive partial order on `{0, …, K-1}`, stored transitively closed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteOrder {
    leq: BitMatrix,
}

impl FiniteOrder {
    pub fn antichain(k: usize) -> Self {
        let mut leq = BitMatrix::new(k);
        for i in 0..k {
            leq.set(i, i, true);
        }
        FiniteOrder { leq }
    }

    /// `0 < 1 < … < K-1`.
    pub fn chain(k: usize) -> Self {
        let mut leq = BitMatrix::new(k);
        for i in 0..k {
            for j in i..k {
                leq.set(i, j, true);
            }
        }
        FiniteOrder { leq }
    }

    /// Reflexive-transitive closure of the given relations.
    pub fn from_relations(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut leq = BitMatrix::new(k);
        for i in 0..k {
            leq.set(i, i, true);
        }
        for &(a, b) in pairs {
            if a >= k || b >= k {
                return Err(Error::Argument(format!("relation ({a}, {b}) out of range for K = {k}")));
            }
            leq.set(a, b, true);
        }
        leq.close_transitively();
        let order = FiniteOrder { leq };
        if let Some((i, j)) = order.antisymmetry_violation() {
            return Err(Error::Argument(format!("relations contain a cycle through {i} and {j}")));
        }
        Ok(order)
    }

    /// Validates a full `≤` matrix.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let k = rows.len();
        let mut leq = BitMatrix::new(k);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Argument(format!("row {i} has {} entries, expected {k}", row.len())));
            }
            for (j, &b) in row.iter().enumerate() {
                leq.set(i, j, b);
            }
        }
        let order = FiniteOrder { leq };
        order.validate()?;
        Ok(order)
    }

    /// `leq[i][j] = causal_leq(points[i], points[j])`.
    ///
    /// Fails with [`Error::DegenerateSample`] when two distinct indices are
    /// mutually related, i.e. the points coincide.
    pub fn from_points<M: Spacetime + ?Sized>(model: &M, points: &[Point]) -> Result<Self> {
        for p in points {
            model.check_domain(p)?;
        }
        let k = points.len();
        let mut leq = BitMatrix::new(k);
        for (i, x) in points.iter().enumerate() {
            for (j, y) in points.iter().enumerate() {
                if i == j || model.leq(x, y) {
                    leq.set(i, j, true);
                }
            }
        }
        let order = FiniteOrder { leq };
        if let Some((i, j)) = order.antisymmetry_violation() {
            return Err(Error::DegenerateSample(format!("points {i} and {j} coincide")));
        }
        Ok(order)
    }

    pub(crate) fn from_bits(leq: BitMatrix) -> Self {
        FiniteOrder { leq }
    }

    pub(crate) fn bits(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn size(&self) -> usize {
        self.leq.size()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq.get(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    /// Number of strictly related pairs.
    pub fn relation_count(&self) -> usize {
        (0..self.size()).map(|i| ones(self.leq.row(i)).count() - 1).sum()
    }

    pub fn is_chain(&self) -> bool {
        2 * self.relation_count() == self.size() * self.size().saturating_sub(1)
    }

    fn antisymmetry_violation(&self) -> Option<(usize, usize)> {
        let k = self.size();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| self.leq(i, j) && self.leq(j, i))
    }

    fn validate(&self) -> Result<()> {
        let k = self.size();
        if let Some(i) = (0..k).find(|&i| !self.leq(i, i)) {
            return Err(Error::Argument(format!("relation is not reflexive at {i}")));
        }
        if let Some((i, j)) = self.antisymmetry_violation() {
            return Err(Error::Argument(format!("relation is not antisymmetric at ({i}, {j})")));
        }
        let mut closed = self.leq.clone();
        closed.close_transitively();
        if closed != self.leq {
            return Err(Error::Argument("relation is not transitive".into()));
        }
        Ok(())
    }

    /// Relabels element `i` as `sigma[i]`.
    pub fn permute(&self, sigma: &[usize]) -> Result<Self> {
        let k = self.size();
        let mut seen = vec![false; k];
        if sigma.len() != k || sigma.iter().any(|&s| s >= k || std::mem::replace(&mut seen[s], true)) {
            return Err(Error::Argument(format!("{sigma:?} is not a permutation of 0..{k}")));
        }
        let mut leq = BitMatrix::new(k);
        for i in 0..k {
            for j in ones(self.leq.row(i)) {
                leq.set(sigma[i], sigma[j], true);
            }
        }
        Ok(FiniteOrder { leq })
    }

    /// Common lower bounds `{m : m ≤ a for all a ∈ set}`; every element for
    /// the empty set.
    pub fn down_set(&self, set: &[usize]) -> Result<Vec<usize>> {
        self.check_indices(set)?;
        Ok((0..self.size()).filter(|&m| set.iter().all(|&a| self.leq(m, a))).collect())
    }

    /// Common upper bounds of `set`.
    pub fn up_set(&self, set: &[usize]) -> Result<Vec<usize>> {
        self.check_indices(set)?;
        Ok((0..self.size()).filter(|&m| set.iter().all(|&a| self.leq(a, m))).collect())
    }

    /// `{k : u ≤ k ≤ v}`.
    pub fn interval(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        self.check_indices(&[u, v])?;
        Ok((0..self.size()).filter(|&k| self.leq(u, k) && self.leq(k, v)).collect())
    }

    fn check_indices(&self, idx: &[usize]) -> Result<()> {
        match idx.iter().find(|&&i| i >= self.size()) {
            Some(i) => Err(Error::Argument(format!("index {i} out of range for K = {}", self.size()))),
            None => Ok(()),
        }
    }

    /// Line-based text form: `K`, then `K` rows of `0`/`1`.
    pub fn to_text(&self) -> String {
        let k = self.size();
        let mut s = format!("{k}\n");
        for i in 0..k {
            s.extend((0..k).map(|j| if self.leq(i, j) { '1' } else { '0' }));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let k: usize = first
            .trim()
            .parse()
            .map_err(|e| Error::Parse { line: 1, msg: format!("bad element count: {e}") })?;
        let mut rows = Vec::with_capacity(k);
        for (n, line) in lines {
            let line = line.trim();
            let row = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse { line: n + 1, msg: format!("unexpected character {other:?}") }),
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != k {
                return Err(Error::Parse { line: n + 1, msg: format!("expected {k} entries, got {}", row.len()) });
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(Error::Parse { line: rows.len() + 2, msg: format!("expected {k} rows, got {}", rows.len()) });
        }
        FiniteOrder::from_matrix(&rows)
    }
}

impl CausalOrder for FiniteOrder {
    fn size(&self) -> usize {
        FiniteOrder::size(self)
    }

    fn leq(&self, i: usize, j: usize) -> bool {
        FiniteOrder::leq(self, i, j)
    }
}

impl fmt::Debug for FiniteOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.size();
        let rel: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .filter(|&(i, j)| self.lt(i, j))
            .collect();
        f.debug_struct("FiniteOrder").field("k", &k).field("lt", &rel).finish()
    }
}

/// The order a point list induces, evaluated lazily.
pub struct PointOrder<'a, M: ?Sized> {
    pub model: &'a M,
    pub points: &'a [Point],
}

impl<M: Spacetime + ?Sized> CausalOrder for PointOrder<'_, M> {
    fn size(&self) -> usize {
        self.points.len()
    }

    fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.model.leq(&self.points[i], &self.points[j])
    }
}

/// Alias for [`FiniteOrder::from_points`].
pub fn order_from_points<M: Spacetime + ?Sized>(model: &M, points: &[Point]) -> Result<FiniteOrder> {
    FiniteOrder::from_points(model, points)
}

/// `|{k : u ≤ k ≤ v}| / K`, the finite-prefix estimate of the volume of the
/// diamond between `u` and `v`.
pub fn interval_measure_estimate<O: CausalOrder + ?Sized>(order: &O, u: usize, v: usize) -> Result<f64> {
    let k = order.size();
    if u >= k || v >= k {
        return Err(Error::Argument(format!("indices ({u}, {v}) out of range for K = {k}")));
    }
    if !order.leq(u, v) {
        return Err(Error::Precondition(format!("{u} is not below {v}")));
    }
    let count = (0..k).filter(|&m| order.leq(u, m) && order.leq(m, v)).count();
    Ok(count as f64 / k as f64)
}
