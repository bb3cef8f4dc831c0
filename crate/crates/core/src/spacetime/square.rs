use super::{Cone, ConeKind, Point, Spacetime, Tdiam};
use crate::rng::{open_unit, SimRng};

/// The unit square in lightcone coordinates `(u, v)` with the product order
/// and `τ = √(Δu·Δv)` between related events.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LightconeSquare;

impl LightconeSquare {
    fn rect_volume(du: f64, dv: f64) -> f64 {
        du.max(0.0) * dv.max(0.0)
    }
}

impl Spacetime for LightconeSquare {
    fn kind(&self) -> &'static str {
        "lightcone_square"
    }

    fn dimension(&self) -> usize {
        2
    }

    fn in_domain(&self, p: &Point) -> bool {
        p.dim() == 2 && p.coords().iter().all(|c| (0.0..=1.0).contains(c))
    }

    fn chart_box(&self) -> Vec<(f64, f64)> {
        vec![(0.0, 1.0), (0.0, 1.0)]
    }

    fn leq(&self, x: &Point, y: &Point) -> bool {
        let (a, b) = (x.coords(), y.coords());
        a[0] <= b[0] && a[1] <= b[1]
    }

    fn tau(&self, x: &Point, y: &Point) -> f64 {
        let (a, b) = (x.coords(), y.coords());
        let (du, dv) = (b[0] - a[0], b[1] - a[1]);
        if du >= 0.0 && dv >= 0.0 {
            (du * dv).sqrt()
        } else if du <= 0.0 && dv <= 0.0 {
            -(du * dv).sqrt()
        } else {
            0.0
        }
    }

    fn sample_uniform(&self, rng: &mut SimRng) -> Point {
        Point::new(&[open_unit(rng), open_unit(rng)])
    }

    fn cone_volume(&self, a: &Cone, b: Option<&Cone>) -> Option<f64> {
        let p = a.apex.coords();
        let Some(b) = b else {
            return Some(match a.kind {
                ConeKind::Past => p[0] * p[1],
                ConeKind::Future => (1.0 - p[0]) * (1.0 - p[1]),
            });
        };
        let q = b.apex.coords();
        Some(match (a.kind, b.kind) {
            (ConeKind::Past, ConeKind::Past) => p[0].min(q[0]) * p[1].min(q[1]),
            (ConeKind::Future, ConeKind::Future) => (1.0 - p[0].max(q[0])) * (1.0 - p[1].max(q[1])),
            (ConeKind::Future, ConeKind::Past) => Self::rect_volume(q[0] - p[0], q[1] - p[1]),
            (ConeKind::Past, ConeKind::Future) => Self::rect_volume(p[0] - q[0], p[1] - q[1]),
        })
    }

    /// Area of a union of lower-left rectangles (a staircase).
    fn past_of_set_volume(&self, set: &[Point]) -> Option<f64> {
        let mut pts: Vec<(f64, f64)> = set.iter().map(|p| (p.coords()[0], p.coords()[1])).collect();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut area = 0.0;
        let mut max_v: f64 = 0.0;
        for (i, &(u, v)) in pts.iter().enumerate() {
            max_v = max_v.max(v);
            let next_u = pts.get(i + 1).map_or(0.0, |p| p.0);
            area += (u - next_u) * max_v;
        }
        Some(area)
    }

    fn flip(&self, x: &Point, y: &Point) -> Option<f64> {
        let (a, b) = (x.coords(), y.coords());
        // t = (u+v)/2, x = (v-u)/2
        let dt = 0.5 * ((b[0] - a[0]) + (b[1] - a[1]));
        let dx = 0.5 * ((b[1] - a[1]) - (b[0] - a[0]));
        Some((dt * dt + dx * dx).sqrt())
    }

    fn tdiam(&self) -> Tdiam {
        Tdiam::exact(1.0)
    }

    fn covering_block(&self, radius: f64) -> Option<Vec<Point>> {
        // a chart cell of side s has flip half-diagonal s/2
        let m = (0.5 / radius).ceil().max(1.0) as usize;
        let s = 1.0 / m as f64;
        let mut out = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                out.push(Point::new(&[(i as f64 + 0.5) * s, (j as f64 + 0.5) * s]));
            }
        }
        Some(out)
    }
}
