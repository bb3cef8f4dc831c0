use super::arcs::{integrate_overlap, MovingArc};
use super::{Cone, ConeKind, Point, Spacetime, Tdiam};
use crate::error::{Error, Result};
use crate::rng::{open_unit, SimRng};
use rand::Rng;

/// `(0, T) × (S¹)ⁿ` with the flat metric `-dt² + dθ²`, where each circle has
/// circumference `T^(-1/n)` so that the total volume is exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatCylinder {
    extent: f64,
    spatial_dims: usize,
    circumference: f64,
}

/// Volume of the unit ball in `n` dimensions, `n ≤ 3`.
fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        _ => unreachable!("spatial dimension is capped at 3"),
    }
}

impl FlatCylinder {
    pub fn new(extent: f64, spatial_dims: usize) -> Result<Self> {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::Argument(format!("cylinder extent must be positive, got {extent}")));
        }
        if !(1..=3).contains(&spatial_dims) {
            return Err(Error::Argument(format!(
                "cylinder spatial dimension must be 1..=3, got {spatial_dims}"
            )));
        }
        let circumference = extent.powf(-1.0 / spatial_dims as f64);
        Ok(FlatCylinder { extent, spatial_dims, circumference })
    }

    /// The timelike extent `T`.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spatial_dims(&self) -> usize {
        self.spatial_dims
    }

    pub fn circumference(&self) -> f64 {
        self.circumference
    }

    /// Shortest distance between two angle tuples on the flat torus.
    pub fn torus_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let c = self.circumference;
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                // |y - x| keeps the distance bitwise symmetric
                let r = (y - x).abs().rem_euclid(c);
                let d = r.min(c - r);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Slice-wise arc of a cone (one spatial dimension only).
    pub(crate) fn cone_arc(&self, cone: &Cone) -> MovingArc {
        let p = &cone.apex;
        match cone.kind {
            ConeKind::Past => MovingArc {
                center: p.spatial()[0],
                base: p.time(),
                slope: -1.0,
                t_lo: 0.0,
                t_hi: p.time(),
            },
            ConeKind::Future => MovingArc {
                center: p.spatial()[0],
                base: -p.time(),
                slope: 1.0,
                t_lo: p.time(),
                t_hi: self.extent,
            },
        }
    }

    pub(crate) fn whole_arc(&self) -> MovingArc {
        MovingArc { center: 0.0, base: self.circumference, slope: 0.0, t_lo: 0.0, t_hi: self.extent }
    }

    /// Chart area of the overlap of two slice-wise arcs.
    pub(crate) fn arc_area(&self, a: &MovingArc, b: &MovingArc) -> f64 {
        integrate_overlap(self.circumference, a, b)
    }

    fn cone_extent(&self, cone: &Cone) -> f64 {
        match cone.kind {
            ConeKind::Past => cone.apex.time(),
            ConeKind::Future => self.extent - cone.apex.time(),
        }
    }
}

impl Spacetime for FlatCylinder {
    fn kind(&self) -> &'static str {
        "flat_cylinder"
    }

    fn dimension(&self) -> usize {
        self.spatial_dims + 1
    }

    fn in_domain(&self, p: &Point) -> bool {
        p.dim() == self.dimension()
            && p.coords().iter().all(|c| c.is_finite())
            && (0.0..=self.extent).contains(&p.time())
            && p.spatial().iter().all(|th| (0.0..=self.circumference).contains(th))
    }

    fn chart_box(&self) -> Vec<(f64, f64)> {
        let mut b = vec![(0.0, self.extent)];
        b.extend(std::iter::repeat_n((0.0, self.circumference), self.spatial_dims));
        b
    }

    fn leq(&self, x: &Point, y: &Point) -> bool {
        let dt = y.time() - x.time();
        dt >= 0.0 && dt >= self.torus_distance(x.spatial(), y.spatial())
    }

    fn tau(&self, x: &Point, y: &Point) -> f64 {
        let dt = y.time() - x.time();
        let d = self.torus_distance(x.spatial(), y.spatial());
        if dt.abs() >= d {
            dt.signum() * (dt * dt - d * d).sqrt()
        } else {
            0.0
        }
    }

    fn sample_uniform(&self, rng: &mut SimRng) -> Point {
        let mut c = [0.0; 4];
        c[0] = self.extent * open_unit(rng);
        for th in c.iter_mut().skip(1).take(self.spatial_dims) {
            *th = self.circumference * rng.random::<f64>();
        }
        Point::new(&c[..self.dimension()])
    }

    fn cone_volume(&self, a: &Cone, b: Option<&Cone>) -> Option<f64> {
        if self.spatial_dims == 1 {
            let arc_a = self.cone_arc(a);
            let arc_b = b.map_or_else(|| self.whole_arc(), |b| self.cone_arc(b));
            return Some(self.arc_area(&arc_a, &arc_b));
        }
        // higher dimensions: only single cones that have not yet wrapped
        let s = self.cone_extent(a);
        match b {
            None if s <= 0.5 * self.circumference => {
                let n = self.spatial_dims;
                Some(unit_ball_volume(n) * s.powi(n as i32 + 1) / (n as f64 + 1.0))
            }
            _ => None,
        }
    }

    fn flip(&self, x: &Point, y: &Point) -> Option<f64> {
        let dt = y.time() - x.time();
        let d = self.torus_distance(x.spatial(), y.spatial());
        Some((dt * dt + d * d).sqrt())
    }

    fn tdiam(&self) -> Tdiam {
        Tdiam::exact(self.extent)
    }

    fn covering_block(&self, radius: f64) -> Option<Vec<Point>> {
        let n = self.spatial_dims;
        // chart boxes whose half-diagonal equals `radius`
        let side = 2.0 * radius / ((n + 1) as f64).sqrt();
        let mt = (self.extent / side).ceil().max(1.0) as usize;
        let ms = (self.circumference / side).ceil().max(1.0) as usize;
        let dt = self.extent / mt as f64;
        let ds = self.circumference / ms as f64;
        let cells = mt * ms.pow(n as u32);
        let mut out = Vec::with_capacity(cells);
        for idx in 0..cells {
            let mut rest = idx;
            let mut c = [0.0; 4];
            c[0] = (rest % mt) as f64 * dt + 0.5 * dt;
            rest /= mt;
            for th in c.iter_mut().skip(1).take(n) {
                *th = (rest % ms) as f64 * ds + 0.5 * ds;
                rest /= ms;
            }
            out.push(Point::new(&c[..n + 1]));
        }
        Some(out)
    }

    /// A uniform rotation of the spatial torus.
    fn random_isometry(&self, points: &mut [Point], rng: &mut SimRng) {
        let c = self.circumference;
        let shift: Vec<f64> = (0..self.spatial_dims).map(|_| rng.random::<f64>() * c).collect();
        for p in points.iter_mut() {
            let mut coords = p.coords().to_vec();
            for (th, s) in coords[1..].iter_mut().zip(&shift) {
                *th = (*th + s) % c;
            }
            *p = Point::new(&coords);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spacetime::{analytic_volume, Region};

    fn cyl(t: f64) -> FlatCylinder {
        FlatCylinder::new(t, 1).unwrap()
    }

    #[test]
    fn normalization() {
        for (t, n) in [(1.0, 1), (7.0, 1), (10.0, 2), (3.0, 3)] {
            let c = FlatCylinder::new(t, n).unwrap();
            let vol = c.extent() * c.circumference().powi(n as i32);
            assert!((vol - 1.0).abs() < 1e-12, "T={t} n={n}: {vol}");
            assert!((analytic_volume(&c, &Region::Whole).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FlatCylinder::new(0.0, 1).is_err());
        assert!(FlatCylinder::new(1.0, 0).is_err());
        assert!(FlatCylinder::new(f64::NAN, 1).is_err());
    }

    #[test]
    fn spacelike_across_the_circle() {
        let c = cyl(1.0);
        let x = Point::new(&[0.1, 0.0]);
        let y = Point::new(&[0.2, 0.45 * c.circumference()]);
        assert!(!c.causal_leq(&x, &y).unwrap());
        assert_eq!(c.signed_tau(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn wraps_the_short_way() {
        let c = cyl(1.0);
        let x = Point::new(&[0.1, 0.05]);
        let y = Point::new(&[0.3, 0.95]);
        // separation 0.1 across the seam
        assert!(c.causal_leq(&x, &y).unwrap());
        let t = c.signed_tau(&x, &y).unwrap();
        assert!((t - (0.04f64 - 0.01).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn timelike_tau_and_flip() {
        let c = cyl(1.0);
        let x = Point::new(&[0.1, 0.0]);
        let y = Point::new(&[0.9, 0.0]);
        assert!((c.signed_tau(&x, &y).unwrap() - 0.8).abs() < 1e-12);
        assert!((c.signed_tau(&y, &x).unwrap() + 0.8).abs() < 1e-12);
        assert_eq!(c.signed_tau(&x, &x).unwrap(), 0.0);
        assert_eq!(c.flip_distance(&x, &x).unwrap(), 0.0);
        let z = Point::new(&[0.5, 0.0]);
        assert!((c.flip_distance(&x, &z).unwrap() - 0.4).abs() < 1e-12);
        let o = Point::new(&[0.0, 0.0]);
        let w = Point::new(&[0.3, 0.4 * c.circumference()]);
        assert!((c.flip_distance(&o, &w).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let c = cyl(1.0);
        let bad = Point::new(&[1.5, 0.0]);
        let ok = Point::new(&[0.5, 0.0]);
        assert!(matches!(c.causal_leq(&bad, &ok), Err(Error::Domain { .. })));
        assert!(matches!(c.signed_tau(&ok, &Point::new(&[0.5])), Err(Error::Domain { .. })));
    }

    #[test]
    fn cone_volumes_before_and_after_wrap() {
        let c = cyl(1.0);
        let p = Point::new(&[0.3, 0.2]);
        let v = analytic_volume(&c, &Region::Past(p)).unwrap();
        assert!((v - 0.09).abs() < 1e-12);
        // wrap at s = 1/2: 1/4 + (0.8 - 0.5) * 1
        let q = Point::new(&[0.8, 0.2]);
        let v = analytic_volume(&c, &Region::Past(q)).unwrap();
        assert!((v - 0.55).abs() < 1e-12, "{v}");
        let f = analytic_volume(&c, &Region::Future(p)).unwrap();
        assert!((f - (0.25 + 0.2)).abs() < 1e-12, "{f}");
    }

    #[test]
    fn spacelike_region_of_long_cylinder() {
        // the region spacelike to an interior point is a rhombus of area c²/2
        let c = cyl(10.0);
        let p = Point::new(&[5.0, 0.0]);
        let v = analytic_volume(&c, &Region::light_cone(p).complement()).unwrap();
        let circ = c.circumference();
        assert!((v - 0.5 * circ * circ).abs() < 1e-12, "{v}");
    }

    #[test]
    fn higher_dimensional_cones_before_wrap() {
        let c = FlatCylinder::new(8.0, 2).unwrap();
        let s = 0.1;
        let p = Point::new(&[s, 0.1, 0.1]);
        let v = analytic_volume(&c, &Region::Past(p)).unwrap();
        assert!((v - std::f64::consts::PI * s.powi(3) / 3.0).abs() < 1e-14);
        assert!(analytic_volume(&c, &Region::Past(Point::new(&[4.0, 0.1, 0.1]))).is_none());
    }
}
