use super::{and_any, ones, BitMatrix, FiniteOrder};

/// Marks `(x, y)` when some `u, v` with `x < u < v < y` bound an interval
/// that is not totally ordered.
pub fn chronology_from_order(order: &FiniteOrder) -> Vec<Vec<bool>> {
    let k = order.size();
    let leq = order.bits();
    let geq = leq.transpose();
    let words = leq.words();

    // wide[u] = {v : u < v and [u, v] contains an incomparable pair}
    let mut wide = BitMatrix::new(k);
    for u in 0..k {
        for v in ones(leq.row(u)).filter(|&v| v != u) {
            let interval: Vec<u64> = leq.row(u).iter().zip(geq.row(v)).map(|(a, b)| a & b).collect();
            let branched = ones(&interval).any(|a| {
                (0..words).any(|w| interval[w] & !(leq.row(a)[w] | geq.row(a)[w]) != 0)
            });
            if branched {
                wide.set(u, v, true);
            }
        }
    }

    let mut marked = vec![vec![false; k]; k];
    for (x, row) in marked.iter_mut().enumerate() {
        let mut reach = vec![0u64; words];
        for u in ones(leq.row(x)).filter(|&u| u != x) {
            for (r, w) in reach.iter_mut().zip(wide.row(u)) {
                *r |= w;
            }
        }
        if reach.iter().all(|&w| w == 0) {
            continue;
        }
        for y in ones(leq.row(x)) {
            let mut below = geq.row(y).to_vec();
            below[y / 64] &= !(1 << (y % 64));
            row[y] = and_any(&reach, &below);
        }
    }
    marked
}
