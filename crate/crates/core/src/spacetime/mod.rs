//! Exactly computable, unit-volume, spatially compact Cauchy slabs.
//!
//! Every model exposes its causal order, the signed time separation
//! (negative on the past cone), volume-uniform sampling and exact volumes for
//! the cone combinations it can integrate in closed form. Anything else is
//! estimated by Monte Carlo through [`region_volume`].

mod arcs;
mod cylinder;
mod needle;
mod point;
mod region;
mod square;

pub use cylinder::FlatCylinder;
pub use needle::NeedleSlab;
pub use point::{Point, MAX_DIM};
pub use region::{analytic_volume, Cone, ConeKind, Region};
pub use square::LightconeSquare;

use crate::error::{Error, Result};
use crate::rng::SimRng;
use crate::stats::Estimate;
use serde::{Deserialize, Serialize};

/// Timelike diameter, exact when `upper == Some(lower)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tdiam {
    pub lower: f64,
    pub upper: Option<f64>,
}

impl Tdiam {
    pub fn exact(v: f64) -> Self {
        Tdiam { lower: v, upper: Some(v) }
    }

    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }
}

/// A normalized Cauchy slab that can be queried exactly.
///
/// The unchecked methods (`leq`, `tau`, `flip`) assume their arguments lie in
/// the chart; the `causal_leq` / `signed_tau` / `flip_distance` wrappers check
/// the domain first.
pub trait Spacetime {
    fn kind(&self) -> &'static str;

    /// Spacetime dimension (time plus space).
    fn dimension(&self) -> usize;

    fn total_volume(&self) -> f64 {
        1.0
    }

    fn in_domain(&self, p: &Point) -> bool;

    /// Coordinate ranges of the (closed) chart, time first.
    fn chart_box(&self) -> Vec<(f64, f64)>;

    /// `y ∈ J⁺(x)`.
    fn leq(&self, x: &Point, y: &Point) -> bool;

    /// Signed time separation: `τ(x,y)` if `x ≤ y`, `-τ(y,x)` if `y ≤ x`,
    /// zero otherwise.
    fn tau(&self, x: &Point, y: &Point) -> f64;

    /// False when `tau` only returns a lower bound on its magnitude.
    fn tau_is_exact(&self) -> bool {
        true
    }

    fn sample_uniform(&self, rng: &mut SimRng) -> Point;

    /// Exact volume of a cone, or of the intersection of two cones.
    fn cone_volume(&self, a: &Cone, b: Option<&Cone>) -> Option<f64>;

    fn past_of_set_volume(&self, _set: &[Point]) -> Option<f64> {
        None
    }

    /// Distance in the Riemannian metric obtained by flipping the sign of the
    /// temporal part; `None` for models where it is not implemented.
    fn flip(&self, _x: &Point, _y: &Point) -> Option<f64> {
        None
    }

    fn tdiam(&self) -> Tdiam;

    /// Points whose flip-metric balls of the given radius cover the model.
    fn covering_block(&self, _radius: f64) -> Option<Vec<Point>> {
        None
    }

    /// Moves `points` by a random isometry of the model, if it has any
    /// beyond the identity.
    fn random_isometry(&self, _points: &mut [Point], _rng: &mut SimRng) {}

    fn check_domain(&self, p: &Point) -> Result<()> {
        if self.in_domain(p) {
            Ok(())
        } else {
            Err(Error::Domain { model: self.kind(), coords: p.coords().to_vec() })
        }
    }

    fn causal_leq(&self, x: &Point, y: &Point) -> Result<bool> {
        self.check_domain(x)?;
        self.check_domain(y)?;
        Ok(self.leq(x, y))
    }

    fn signed_tau(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_domain(x)?;
        self.check_domain(y)?;
        Ok(self.tau(x, y))
    }

    fn flip_distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_domain(x)?;
        self.check_domain(y)?;
        self.flip(x, y)
            .ok_or_else(|| Error::Capability(format!("no flip metric for {}", self.kind())))
    }
}

/// Volume of `region`: exact where the model integrates it, otherwise a
/// Monte Carlo estimate from `n_mc` uniform samples.
pub fn region_volume<M: Spacetime + ?Sized>(
    model: &M,
    region: &Region,
    n_mc: u64,
    rng: &mut SimRng,
) -> Result<Estimate> {
    for p in region.points() {
        model.check_domain(&p)?;
    }
    if let Some(v) = analytic_volume(model, region) {
        return Ok(Estimate::exact(v));
    }
    if n_mc == 0 {
        return Err(Error::Estimation(format!(
            "no closed form for {region} on {} and no Monte Carlo budget",
            model.kind()
        )));
    }
    let hits = (0..n_mc)
        .filter(|_| region.contains(model, &model.sample_uniform(rng)))
        .count() as u64;
    Ok(Estimate::proportion(hits, n_mc))
}

/// Any of the supported models.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    FlatCylinder(FlatCylinder),
    LightconeSquare(LightconeSquare),
    NeedleSlab(NeedleSlab),
}

macro_rules! dispatch {
    ($self:ident, $m:ident => $e:expr) => {
        match $self {
            Model::FlatCylinder($m) => $e,
            Model::LightconeSquare($m) => $e,
            Model::NeedleSlab($m) => $e,
        }
    };
}

impl Spacetime for Model {
    fn kind(&self) -> &'static str {
        dispatch!(self, m => m.kind())
    }
    fn dimension(&self) -> usize {
        dispatch!(self, m => m.dimension())
    }
    fn in_domain(&self, p: &Point) -> bool {
        dispatch!(self, m => m.in_domain(p))
    }
    fn chart_box(&self) -> Vec<(f64, f64)> {
        dispatch!(self, m => m.chart_box())
    }
    fn leq(&self, x: &Point, y: &Point) -> bool {
        dispatch!(self, m => m.leq(x, y))
    }
    fn tau(&self, x: &Point, y: &Point) -> f64 {
        dispatch!(self, m => m.tau(x, y))
    }
    fn tau_is_exact(&self) -> bool {
        dispatch!(self, m => m.tau_is_exact())
    }
    fn sample_uniform(&self, rng: &mut SimRng) -> Point {
        dispatch!(self, m => m.sample_uniform(rng))
    }
    fn cone_volume(&self, a: &Cone, b: Option<&Cone>) -> Option<f64> {
        dispatch!(self, m => m.cone_volume(a, b))
    }
    fn past_of_set_volume(&self, set: &[Point]) -> Option<f64> {
        dispatch!(self, m => m.past_of_set_volume(set))
    }
    fn flip(&self, x: &Point, y: &Point) -> Option<f64> {
        dispatch!(self, m => m.flip(x, y))
    }
    fn tdiam(&self) -> Tdiam {
        dispatch!(self, m => m.tdiam())
    }
    fn covering_block(&self, radius: f64) -> Option<Vec<Point>> {
        dispatch!(self, m => m.covering_block(radius))
    }
    fn random_isometry(&self, points: &mut [Point], rng: &mut SimRng) {
        dispatch!(self, m => m.random_isometry(points, rng))
    }
}

impl From<FlatCylinder> for Model {
    fn from(m: FlatCylinder) -> Self {
        Model::FlatCylinder(m)
    }
}

impl From<LightconeSquare> for Model {
    fn from(m: LightconeSquare) -> Self {
        Model::LightconeSquare(m)
    }
}

impl From<NeedleSlab> for Model {
    fn from(m: NeedleSlab) -> Self {
        Model::NeedleSlab(m)
    }
}

fn one() -> usize {
    1
}

/// Plain-text description of a model, as used in config files.
///
/// ```text
/// kind = "flat_cylinder"
/// T = 10.0
/// n = 1
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", from = "SpecFields")]
pub enum ModelSpec {
    FlatCylinder {
        #[serde(rename = "T")]
        extent: f64,
        #[serde(default = "one")]
        n: usize,
    },
    LightconeSquare,
    NeedleSlab {
        #[serde(rename = "T")]
        extent: f64,
        theta0: f64,
        halfwidth: f64,
        t0: f64,
        lambda: f64,
    },
}

// Unit variants of internally tagged enums ignore `deny_unknown_fields`, so
// configs are read through this mirror, where every variant has fields.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum SpecFields {
    FlatCylinder {
        #[serde(rename = "T")]
        extent: f64,
        #[serde(default = "one")]
        n: usize,
    },
    LightconeSquare {},
    NeedleSlab {
        #[serde(rename = "T")]
        extent: f64,
        theta0: f64,
        halfwidth: f64,
        t0: f64,
        lambda: f64,
    },
}

impl From<SpecFields> for ModelSpec {
    fn from(s: SpecFields) -> Self {
        match s {
            SpecFields::FlatCylinder { extent, n } => ModelSpec::FlatCylinder { extent, n },
            SpecFields::LightconeSquare {} => ModelSpec::LightconeSquare,
            SpecFields::NeedleSlab { extent, theta0, halfwidth, t0, lambda } => {
                ModelSpec::NeedleSlab { extent, theta0, halfwidth, t0, lambda }
            }
        }
    }
}

impl ModelSpec {
    pub fn build(&self) -> Result<Model> {
        Ok(match *self {
            ModelSpec::FlatCylinder { extent, n } => FlatCylinder::new(extent, n)?.into(),
            ModelSpec::LightconeSquare => LightconeSquare.into(),
            ModelSpec::NeedleSlab { extent, theta0, halfwidth, t0, lambda } => {
                NeedleSlab::new(extent, theta0, halfwidth, t0, lambda)?.into()
            }
        })
    }

    pub fn to_config_block(&self) -> String {
        toml::to_string(self).expect("model specs always serialize")
    }

    pub fn from_config_block(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

impl Model {
    pub fn spec(&self) -> ModelSpec {
        match self {
            Model::FlatCylinder(c) => ModelSpec::FlatCylinder { extent: c.extent(), n: c.spatial_dims() },
            Model::LightconeSquare(_) => ModelSpec::LightconeSquare,
            Model::NeedleSlab(s) => ModelSpec::NeedleSlab {
                extent: s.base().extent(),
                theta0: s.theta0(),
                halfwidth: s.halfwidth(),
                t0: s.t0(),
                lambda: s.lambda(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn spec_round_trip_through_config_text() {
        let specs = [
            ModelSpec::FlatCylinder { extent: 10.0, n: 1 },
            ModelSpec::LightconeSquare,
            ModelSpec::NeedleSlab { extent: 1.0, theta0: 0.5, halfwidth: 0.01, t0: 0.9, lambda: 30.0 },
        ];
        for s in specs {
            let text = s.to_config_block();
            assert_eq!(ModelSpec::from_config_block(&text).unwrap(), s, "{text}");
            assert_eq!(s.build().unwrap().spec(), s);
        }
        let parsed = ModelSpec::from_config_block("kind = \"flat_cylinder\"\nT = 7.0\n").unwrap();
        assert_eq!(parsed, ModelSpec::FlatCylinder { extent: 7.0, n: 1 });
        assert!(ModelSpec::from_config_block("kind = \"torus\"").is_err());
    }

    #[test]
    fn monte_carlo_fallback_and_missing_budget() {
        let m: Model = FlatCylinder::new(4.0, 2).unwrap().into();
        let region = Region::Past(Point::new(&[3.0, 0.1, 0.1]));
        let mut rng = stream(5);
        assert!(matches!(region_volume(&m, &region, 0, &mut rng), Err(Error::Estimation(_))));
        let est = region_volume(&m, &region, 20_000, &mut rng).unwrap();
        assert!(est.std_error > 0.0);
        assert!(est.value > 0.0 && est.value < 1.0);
    }

    #[test]
    fn monte_carlo_agrees_with_closed_form() {
        let m: Model = LightconeSquare.into();
        let p = Point::new(&[0.3, 0.8]);
        let q = Point::new(&[0.6, 0.5]);
        // three cones: no closed form, so compare against inclusion-exclusion by hand
        let region = Region::intersection(
            Region::Past(p),
            Region::intersection(Region::Past(q), Region::Future(Point::new(&[0.1, 0.1]))),
        );
        assert!(analytic_volume(&m, &region).is_none());
        let est = region_volume(&m, &region, 200_000, &mut stream(9)).unwrap();
        let exact = 0.2 * 0.4;
        assert!((est.value - exact).abs() < 4.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn flip_unsupported_on_needle() {
        let m: Model = NeedleSlab::new(1.0, 0.5, 0.01, 0.5, 3.0).unwrap().into();
        let p = Point::new(&[0.2, 0.2]);
        assert!(matches!(m.flip_distance(&p, &p), Err(Error::Capability(_))));
    }
}
