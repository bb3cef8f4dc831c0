use super::{Point, Spacetime};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeKind {
    Past,
    Future,
}

/// A closed causal cone `J⁻(apex)` or `J⁺(apex)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    pub apex: Point,
    pub kind: ConeKind,
}

impl Cone {
    pub fn past(apex: Point) -> Self {
        Cone { apex, kind: ConeKind::Past }
    }

    pub fn future(apex: Point) -> Self {
        Cone { apex, kind: ConeKind::Future }
    }

    pub fn contains<M: Spacetime + ?Sized>(&self, model: &M, z: &Point) -> bool {
        match self.kind {
            ConeKind::Past => model.leq(z, &self.apex),
            ConeKind::Future => model.leq(&self.apex, z),
        }
    }
}

/// Boolean combinations of causal cones.
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Whole,
    Past(Point),
    Future(Point),
    /// `J⁻(A)` for a finite set `A`.
    PastOfSet(Vec<Point>),
    Complement(Box<Region>),
    Intersection(Box<Region>, Box<Region>),
    Union(Box<Region>, Box<Region>),
}

impl Region {
    /// The causal diamond `J⁺(p) ∩ J⁻(q)`.
    pub fn diamond(p: Point, q: Point) -> Region {
        Region::intersection(Region::Future(p), Region::Past(q))
    }

    pub fn intersection(a: Region, b: Region) -> Region {
        Region::Intersection(Box::new(a), Box::new(b))
    }

    pub fn union(a: Region, b: Region) -> Region {
        Region::Union(Box::new(a), Box::new(b))
    }

    pub fn complement(self) -> Region {
        Region::Complement(Box::new(self))
    }

    /// Everything causally related to `p`.
    pub fn light_cone(p: Point) -> Region {
        Region::union(Region::Past(p), Region::Future(p))
    }

    pub(crate) fn as_cone(&self) -> Option<Cone> {
        match self {
            Region::Past(p) => Some(Cone::past(*p)),
            Region::Future(p) => Some(Cone::future(*p)),
            _ => None,
        }
    }

    pub fn contains<M: Spacetime + ?Sized>(&self, model: &M, z: &Point) -> bool {
        match self {
            Region::Whole => true,
            Region::Past(p) => model.leq(z, p),
            Region::Future(p) => model.leq(p, z),
            Region::PastOfSet(ps) => ps.iter().any(|p| model.leq(z, p)),
            Region::Complement(r) => !r.contains(model, z),
            Region::Intersection(a, b) => a.contains(model, z) && b.contains(model, z),
            Region::Union(a, b) => a.contains(model, z) || b.contains(model, z),
        }
    }

    /// Every apex mentioned by the region.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        self.collect_points(&mut out);
        out
    }

    fn collect_points(&self, out: &mut Vec<Point>) {
        match self {
            Region::Whole => {}
            Region::Past(p) | Region::Future(p) => out.push(*p),
            Region::PastOfSet(ps) => out.extend_from_slice(ps),
            Region::Complement(r) => r.collect_points(out),
            Region::Intersection(a, b) | Region::Union(a, b) => {
                a.collect_points(out);
                b.collect_points(out);
            }
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Whole => write!(f, "X"),
            Region::Past(p) => write!(f, "J-{p}"),
            Region::Future(p) => write!(f, "J+{p}"),
            Region::PastOfSet(ps) => write!(f, "J-[{} points]", ps.len()),
            Region::Complement(r) => write!(f, "X \\ ({r})"),
            Region::Intersection(a, b) => write!(f, "({a} ∩ {b})"),
            Region::Union(a, b) => write!(f, "({a} ∪ {b})"),
        }
    }
}

/// Exact volume of `region` if the model can evaluate every piece of it.
pub fn analytic_volume<M: Spacetime + ?Sized>(model: &M, region: &Region) -> Option<f64> {
    let v = match region {
        Region::Whole => Some(model.total_volume()),
        Region::Past(_) | Region::Future(_) => model.cone_volume(&region.as_cone()?, None),
        Region::PastOfSet(ps) => model.past_of_set_volume(ps),
        Region::Complement(r) => Some(model.total_volume() - analytic_volume(model, r)?),
        Region::Union(a, b) => {
            let va = analytic_volume(model, a)?;
            let vb = analytic_volume(model, b)?;
            Some(va + vb - intersection_volume(model, a, b)?)
        }
        Region::Intersection(a, b) => intersection_volume(model, a, b),
    };
    v.map(|v| v.max(0.0))
}

fn intersection_volume<M: Spacetime + ?Sized>(model: &M, a: &Region, b: &Region) -> Option<f64> {
    match (a, b) {
        (Region::Whole, x) | (x, Region::Whole) => analytic_volume(model, x),
        (Region::Complement(c), x) | (x, Region::Complement(c)) => {
            Some(analytic_volume(model, x)? - intersection_volume(model, x, c)?)
        }
        _ => {
            let (ca, cb) = (a.as_cone()?, b.as_cone()?);
            model.cone_volume(&ca, Some(&cb))
        }
    }
}
