//! Labeled partial orders on small element sets.

use super::{BitMatrix, FiniteOrder};
use crate::error::{Error, Result};

pub const MAX_ENUMERATION_SIZE: usize = 5;

/// Every labeled partial order on `{0, …, K-1}`.
///
/// Orders on `K` elements are built from orders on the first `K-1` by
/// choosing the down-set and up-set of the new element: a down-closed set
/// `D`, an up-closed set `U`, disjoint, with every element of `D` below every
/// element of `U`. Each labeled order arises from exactly one such choice.
pub fn enumerate_orders(k: usize) -> Result<Vec<FiniteOrder>> {
    if k > MAX_ENUMERATION_SIZE {
        return Err(Error::Capability(format!(
            "enumeration supports K ≤ {MAX_ENUMERATION_SIZE}, got K = {k}"
        )));
    }
    let mut orders = vec![FiniteOrder::antichain(0)];
    for n in 1..=k {
        orders = orders.iter().flat_map(|o| extensions(o, n - 1)).collect();
    }
    Ok(orders)
}

fn extensions(order: &FiniteOrder, m: usize) -> Vec<FiniteOrder> {
    let subsets = 1u32 << m;
    let member = |s: u32, i: usize| s >> i & 1 == 1;
    let down_closed = |s: u32| (0..m).all(|x| !member(s, x) || (0..m).all(|y| !order.leq(y, x) || member(s, y)));
    let up_closed = |s: u32| (0..m).all(|x| !member(s, x) || (0..m).all(|y| !order.leq(x, y) || member(s, y)));
    let downs: Vec<u32> = (0..subsets).filter(|&s| down_closed(s)).collect();
    let ups: Vec<u32> = (0..subsets).filter(|&s| up_closed(s)).collect();

    let mut out = Vec::new();
    for &d in &downs {
        for &u in &ups {
            if d & u != 0 {
                continue;
            }
            if !(0..m).all(|x| !member(d, x) || (0..m).all(|y| !member(u, y) || order.leq(x, y))) {
                continue;
            }
            let mut bits = BitMatrix::new(m + 1);
            for i in 0..m {
                for j in 0..m {
                    bits.set(i, j, order.leq(i, j));
                }
                bits.set(i, m, member(d, i));
                bits.set(m, i, member(u, i));
            }
            bits.set(m, m, true);
            out.push(FiniteOrder::from_bits(bits));
        }
    }
    out
}
