//! A flat cylinder with a thin conformally stretched strip.
//!
//! Inside the strip `{t > t₀, |θ - θ₀| < w/2}` the metric is multiplied by
//! `λ²`; the whole metric is then divided by the resulting total volume `V`
//! so the slab stays normalized. Conformal rescaling leaves the causal order
//! untouched, multiplies the volume form by `λ²/V` in the strip and `1/V`
//! elsewhere, and stretches the proper time along the strip by `λ/√V`.

use super::arcs::{wrap_signed, MovingArc};
use super::{Cone, FlatCylinder, Point, Spacetime, Tdiam};
use crate::error::{Error, Result};
use crate::rng::{open_unit, SimRng};
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct NeedleSlab {
    base: FlatCylinder,
    theta0: f64,
    halfwidth: f64,
    t0: f64,
    lambda: f64,
    /// Chart area of the strip.
    strip_area: f64,
    /// Volume before renormalization.
    raw_volume: f64,
}

impl NeedleSlab {
    pub fn new(extent: f64, theta0: f64, halfwidth: f64, t0: f64, lambda: f64) -> Result<Self> {
        let base = FlatCylinder::new(extent, 1)?;
        let c = base.circumference();
        if !(lambda.is_finite() && lambda >= 1.0) {
            return Err(Error::Argument(format!("conformal factor must be >= 1, got {lambda}")));
        }
        if !(halfwidth > 0.0 && 2.0 * halfwidth <= c) {
            return Err(Error::Argument(format!(
                "needle half-width must lie in (0, {}], got {halfwidth}",
                0.5 * c
            )));
        }
        if !(0.0..extent).contains(&t0) {
            return Err(Error::Argument(format!("needle start must lie in [0, {extent}), got {t0}")));
        }
        if !(0.0..c).contains(&theta0) {
            return Err(Error::Argument(format!("needle angle must lie in [0, {c}), got {theta0}")));
        }
        let strip_area = 2.0 * halfwidth * (extent - t0);
        let raw_volume = 1.0 + (lambda * lambda - 1.0) * strip_area;
        Ok(NeedleSlab { base, theta0, halfwidth, t0, lambda, strip_area, raw_volume })
    }

    pub fn base(&self) -> &FlatCylinder {
        &self.base
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// The apex `(t₀, θ₀)` the needle grows from.
    pub fn apex(&self) -> Point {
        Point::new(&[self.t0, self.theta0])
    }

    /// Total volume before renormalization.
    pub fn raw_volume(&self) -> f64 {
        self.raw_volume
    }

    /// Probability that a volume-uniform point lands in the strip.
    pub fn strip_mass(&self) -> f64 {
        self.lambda * self.lambda * self.strip_area / self.raw_volume
    }

    pub fn in_strip(&self, p: &Point) -> bool {
        p.time() > self.t0
            && wrap_signed(p.spatial()[0] - self.theta0, self.base.circumference()).abs() < self.halfwidth
    }

    /// Proper length of the curve `θ = θ₀` across the whole slab.
    pub fn needle_length(&self) -> f64 {
        (self.t0 + self.lambda * (self.base.extent() - self.t0)) / self.raw_volume.sqrt()
    }

    fn strip_arc(&self) -> MovingArc {
        MovingArc {
            center: self.theta0,
            base: self.halfwidth,
            slope: 0.0,
            t_lo: self.t0,
            t_hi: self.base.extent(),
        }
    }

    /// Longest of the direct chart geodesic and the best three-segment
    /// path entering the strip, riding it, and leaving it. Requires `x ≤ y`.
    fn tau_lower(&self, x: &Point, y: &Point) -> f64 {
        let base = &self.base;
        let mut best = base.tau(x, y);
        if self.lambda > 1.0 {
            let c = base.circumference();
            let inset = 0.999_999 * self.halfwidth;
            let clamp = |th: f64| self.theta0 + wrap_signed(th - self.theta0, c).clamp(-inset, inset);
            let ratio = self.lambda / (self.lambda * self.lambda - 1.0).sqrt();
            for th in [self.theta0, clamp(x.spatial()[0]), clamp(y.spatial()[0])] {
                let th = th.rem_euclid(c);
                let d1 = base.torus_distance(x.spatial(), &[th]);
                let d2 = base.torus_distance(&[th], y.spatial());
                let a_min = (x.time() + d1).max(self.t0);
                let b_max = y.time() - d2;
                if b_max <= a_min {
                    continue;
                }
                // each end segment is concave in its length; the stationary
                // point balances its slope against λ
                let a = (x.time() + ratio * d1).clamp(a_min, b_max);
                let b = (y.time() - ratio * d2).clamp(a, b_max);
                let seg = |dt: f64, d: f64| (dt * dt - d * d).max(0.0).sqrt();
                let len = seg(a - x.time(), d1) + self.lambda * (b - a) + seg(y.time() - b, d2);
                best = best.max(len);
            }
        }
        best / self.raw_volume.sqrt()
    }
}

impl Spacetime for NeedleSlab {
    fn kind(&self) -> &'static str {
        "needle_slab"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn in_domain(&self, p: &Point) -> bool {
        self.base.in_domain(p)
    }

    fn chart_box(&self) -> Vec<(f64, f64)> {
        self.base.chart_box()
    }

    fn leq(&self, x: &Point, y: &Point) -> bool {
        self.base.leq(x, y)
    }

    fn tau(&self, x: &Point, y: &Point) -> f64 {
        if self.base.leq(x, y) {
            self.tau_lower(x, y)
        } else if self.base.leq(y, x) {
            -self.tau_lower(y, x)
        } else {
            0.0
        }
    }

    fn tau_is_exact(&self) -> bool {
        self.lambda == 1.0
    }

    fn sample_uniform(&self, rng: &mut SimRng) -> Point {
        if rng.random::<f64>() < self.strip_mass() {
            let t = self.t0 + (self.base.extent() - self.t0) * open_unit(rng);
            let off = (2.0 * rng.random::<f64>() - 1.0) * self.halfwidth;
            let th = (self.theta0 + off).rem_euclid(self.base.circumference());
            return Point::new(&[t, th]);
        }
        loop {
            let p = self.base.sample_uniform(rng);
            if !self.in_strip(&p) {
                return p;
            }
        }
    }

    fn cone_volume(&self, a: &Cone, b: Option<&Cone>) -> Option<f64> {
        if self.lambda == 1.0 {
            return self.base.cone_volume(a, b);
        }
        if b.is_some() {
            return None;
        }
        let arc = self.base.cone_arc(a);
        let plain = self.base.arc_area(&arc, &self.base.whole_arc());
        let in_strip = self.base.arc_area(&arc, &self.strip_arc());
        Some((plain + (self.lambda * self.lambda - 1.0) * in_strip) / self.raw_volume)
    }

    fn tdiam(&self) -> Tdiam {
        let t = self.base.extent();
        let lower = (t / self.raw_volume.sqrt()).max(self.needle_length());
        Tdiam { lower, upper: (self.lambda == 1.0).then_some(t) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::spacetime::{analytic_volume, Region};

    fn needle(lambda: f64) -> NeedleSlab {
        NeedleSlab::new(1.0, 0.5, 0.02, 0.5, lambda).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(NeedleSlab::new(1.0, 0.5, 0.02, 0.5, 0.5).is_err());
        assert!(NeedleSlab::new(1.0, 0.5, 0.6, 0.5, 2.0).is_err());
        assert!(NeedleSlab::new(1.0, 0.5, 0.02, 1.0, 2.0).is_err());
        assert!(NeedleSlab::new(1.0, 1.5, 0.02, 0.5, 2.0).is_err());
    }

    #[test]
    fn normalized_volume() {
        let n = needle(20.0);
        assert!((analytic_volume(&n, &Region::Whole).unwrap() - 1.0).abs() < 1e-12);
        // sum of a cone and its complement
        let p = Point::new(&[0.4, 0.45]);
        let v = analytic_volume(&n, &Region::Future(p)).unwrap();
        let w = analytic_volume(&n, &Region::Future(p).complement()).unwrap();
        assert!((v + w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strip_volume_is_scaled() {
        let n = needle(20.0);
        // the future of the apex contains all of the strip except a sliver
        let cone = analytic_volume(&n, &Region::Future(n.apex())).unwrap();
        let base_cone = 0.25;
        let strip = 0.04 * 0.5;
        let sliver = 0.02 * 0.02;
        let expected = (base_cone + 399.0 * (strip - sliver)) / n.raw_volume();
        assert!((cone - expected).abs() < 1e-12, "{cone} vs {expected}");
    }

    #[test]
    fn tdiam_lower_bound_along_needle() {
        let n = needle(20.0);
        let td = n.tdiam();
        assert!(td.upper.is_none());
        assert!(td.lower >= 20.0 * 0.5 / n.raw_volume().sqrt());
        let flat = needle(1.0);
        assert_eq!(flat.tdiam(), Tdiam::exact(1.0));
    }

    #[test]
    fn tau_through_the_strip_beats_the_chart_geodesic() {
        let n = needle(20.0);
        let x = Point::new(&[0.5, 0.5]);
        let y = Point::new(&[0.99, 0.5]);
        let t = n.signed_tau(&x, &y).unwrap();
        assert!((t - 20.0 * 0.49 / n.raw_volume().sqrt()).abs() < 1e-12);
        assert_eq!(n.signed_tau(&y, &x).unwrap(), -t);
        assert!(!n.tau_is_exact());
    }

    #[test]
    fn unit_factor_is_the_base_cylinder() {
        let n = needle(1.0);
        let base = n.base().clone();
        let mut r1 = stream(11);
        let mut r2 = stream(11);
        for _ in 0..1000 {
            let x = n.sample_uniform(&mut r1);
            let y = base.sample_uniform(&mut r2);
            assert_eq!(n.tau(&x, &y), base.tau(&x, &y));
        }
        assert!(n.tau_is_exact());
    }
}
