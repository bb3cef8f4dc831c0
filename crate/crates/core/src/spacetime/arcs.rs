//! Exact areas on a 1+1 cylinder built from time-dependent arcs.
//!
//! Causal cones on a flat cylinder with one spatial dimension are, slice by
//! slice, arcs whose half-width changes linearly in time. The overlap length
//! of two such arcs is piecewise linear in `t`, so integrating it piece by
//! piece between kinks is exact.

/// Arc of half-width `max(0, base + slope * t)` centred at `center`,
/// present for `t` in `[t_lo, t_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct MovingArc {
    pub center: f64,
    pub base: f64,
    pub slope: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl MovingArc {
    pub fn half_width(&self, t: f64) -> f64 {
        (self.base + self.slope * t).max(0.0)
    }
}

/// Signed representative of `d` modulo `c` in `[-c/2, c/2)`.
pub(crate) fn wrap_signed(d: f64, c: f64) -> f64 {
    let r = d.rem_euclid(c);
    if r >= 0.5 * c {
        r - c
    } else {
        r
    }
}

/// Length of the intersection of two arcs on a circle of circumference `c`
/// whose centres differ by `d`.
pub(crate) fn arc_overlap(c: f64, d: f64, h1: f64, h2: f64) -> f64 {
    if 2.0 * h1 >= c {
        return (2.0 * h2).min(c);
    }
    if 2.0 * h2 >= c {
        return (2.0 * h1).min(c);
    }
    let d = wrap_signed(d, c);
    let mut total = 0.0;
    for k in -1..=1 {
        let s = d + k as f64 * c;
        let lo = (-h1).max(s - h2);
        let hi = h1.min(s + h2);
        total += (hi - lo).max(0.0);
    }
    total
}

/// `∫ overlap(a(t), b(t)) dt` over the common lifetime of both arcs.
pub(crate) fn integrate_overlap(c: f64, a: &MovingArc, b: &MovingArc) -> f64 {
    let lo = a.t_lo.max(b.t_lo);
    let hi = a.t_hi.min(b.t_hi);
    if hi <= lo {
        return 0.0;
    }
    let d = wrap_signed(b.center - a.center, c);

    let mut cuts = vec![lo, hi];
    let mut push = |num: f64, den: f64| {
        if den != 0.0 {
            let t = num / den;
            if t > lo && t < hi {
                cuts.push(t);
            }
        }
    };
    for arc in [a, b] {
        // half-width reaches zero or half the circumference
        push(-arc.base, arc.slope);
        push(0.5 * c - arc.base, arc.slope);
    }
    for k in -1..=1 {
        let s = d + k as f64 * c;
        for s1 in [-1.0, 1.0] {
            for s2 in [-1.0, 1.0] {
                // s1 * h_a(t) = s + s2 * h_b(t)
                push(s - s1 * a.base + s2 * b.base, s1 * a.slope - s2 * b.slope);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let f = |t: f64| arc_overlap(c, d, a.half_width(t), b.half_width(t));
    cuts.windows(2)
        .map(|w| {
            let (t0, t1) = (w[0], w[1]);
            let m = 0.5 * (t0 + t1);
            (t1 - t0) * (f(t0) + 4.0 * f(m) + f(t1)) / 6.0
        })
        .sum()
}
