//! Partial flocks of the quadratic cone `X1 X3 = X2²` in PG(3,q).
//!
//! The cone has vertex `x = (1,0,0,0)` and nuclear line
//! `N = {(t,0,1,0)} ∪ {x}`, which meets the plane `X0 = 0` in
//! `n = (0,0,1,0)`. A plane not through `x` can be scaled to
//! `X0 + f X1 + t X2 + g X3 = 0`; a set of such planes with distinct `t`
//! gives the base set `B` and value maps `f`, `g`.
//!
//! Two coordinate pictures are used. In the *additive* picture an arc with
//! conics `F(a,b,l)` gives the planes `X0 + al X1 + l X2 + bl X3 = 0` plus
//! `X0 = 0` ([`arc_to_flock`]). In the *projection* picture the conics live in
//! `X0 = 0` and are projected onto the cone from a point of `N`
//! ([`projection`]). [`projection::geometric_to_additive`] maps one to the
//! other.

pub mod composition;
pub mod projection;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::mathon::{close_set, Conic, MathonArc};
use crate::projective::{self, Plane3, Point3, PointBits};

pub use composition::{
    denniston_lines, extend_flock, plane_compose, singular_plane, standardize_plane, DennistonLines,
    StandardForm,
};
pub use projection::{
    additive_to_geometric, delta, geometric_to_additive, kappa, kappa_inv, phi, project_arc,
    project_conic_to_plane,
};

/// The cone `X1 X3 = X2²`.
pub struct Cone;

impl Cone {
    pub fn vertex(f: &Field) -> Point3 {
        Point3::from_ints(f, [1, 0, 0, 0]).expect("nonzero")
    }

    /// `n = N ∩ {X0 = 0}`.
    pub fn nucleus(f: &Field) -> Point3 {
        Point3::from_ints(f, [0, 0, 1, 0]).expect("nonzero")
    }

    pub fn contains(f: &Field, p: &Point3) -> bool {
        let [_, x1, x2, x3] = p.coords();
        f.mul(x1, x3) == f.square(x2)
    }

    /// Every point of the cone, by scanning PG(3,q).
    pub fn points(f: &Field) -> Vec<Point3> {
        Point3::all(f).into_iter().filter(|p| Cone::contains(f, p)).collect()
    }

    /// The q+1 points of the cone on a plane not through the vertex.
    pub fn section(f: &Field, plane: &Plane3) -> Result<Vec<Point3>> {
        let [c0, c1, c2, c3] = plane.coords();
        if c0.is_zero() {
            return Err(Error::PlaneThroughVertex(plane.to_ints()));
        }
        let inv = f.inv(c0)?;
        let mut pts: Vec<Point3> = std::iter::once((Gf::ZERO, Gf::ONE))
            .chain(f.elements().map(|u| (Gf::ONE, u)))
            .map(|(u, v)| {
                let (uu, uv, vv) = (f.square(u), f.mul(u, v), f.square(v));
                let x0 = f.mul(inv, f.mul(c1, uu) + f.mul(c2, uv) + f.mul(c3, vv));
                Point3::new(f, [x0, uu, uv, vv]).expect("nonzero")
            })
            .collect();
        pts.sort_unstable();
        Ok(pts)
    }

    pub fn section_bits(f: &Field, plane: &Plane3) -> Result<PointBits> {
        Ok(PointBits::new(f, Cone::section(f, plane)?))
    }
}

/// A plane not through the vertex, with its standard equation
/// `a X0 + b X1 + (a+1) X2 + c X3 = 0` when it avoids `p = (1,0,1,0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlockPlane {
    pub plane: Plane3,
    pub standard: Option<StandardForm>,
}

impl FlockPlane {
    pub fn new(f: &Field, plane: Plane3) -> Result<FlockPlane> {
        if plane.coords()[0].is_zero() {
            return Err(Error::PlaneThroughVertex(plane.to_ints()));
        }
        Ok(FlockPlane { plane, standard: standardize_plane(f, &plane).ok() })
    }

    /// `(t, f(t), g(t))` from `X0 + f X1 + t X2 + g X3 = 0`.
    pub fn base_values(&self, f: &Field) -> BaseValues {
        let [c0, c1, c2, c3] = self.plane.coords();
        let inv = f.inv(c0).expect("flock planes avoid the vertex");
        BaseValues { t: f.mul(c2, inv), f: f.mul(c1, inv), g: f.mul(c3, inv) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BaseValues {
    pub t: Gf,
    pub f: Gf,
    pub g: Gf,
}

/// A set of planes cutting the cone, not necessarily verified disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFlock {
    field: Field,
    planes: Vec<FlockPlane>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    /// `Tr[(f(s)+f(t))(g(s)+g(t))/(s+t)²]`; `None` when `s = t`.
    pub trace: Option<u8>,
    /// Number of cone points shared by the two sections.
    pub common_points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlockReport {
    pub pairs: Vec<PairCheck>,
    /// Pairs where the trace test and the point oracle disagree.
    pub disagreements: usize,
    pub verdict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlockClass {
    pub additive: bool,
    pub linear: bool,
}

impl PartialFlock {
    pub fn new(f: &Field, planes: impl IntoIterator<Item = Plane3>) -> Result<PartialFlock> {
        let planes = planes.into_iter().map(|p| FlockPlane::new(f, p)).collect::<Result<Vec<_>>>()?;
        Ok(PartialFlock { field: f.clone(), planes })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn planes(&self) -> &[FlockPlane] {
        &self.planes
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    /// Normalized planes as a set, for order-independent comparison.
    pub fn plane_set(&self) -> BTreeSet<Plane3> {
        self.planes.iter().map(|p| p.plane).collect()
    }

    /// The `(t, f(t), g(t))` triples, one per plane, in plane order.
    pub fn base_values(&self) -> Vec<BaseValues> {
        self.planes.iter().map(|p| p.base_values(&self.field)).collect()
    }

    /// `(B, f, g)` when all `t` are distinct.
    pub fn representation(&self) -> Result<Vec<BaseValues>> {
        let values = self.base_values();
        let mut seen = BTreeSet::new();
        for v in &values {
            if !seen.insert(v.t) {
                return Err(Error::RepeatedBase(v.t));
            }
        }
        Ok(values)
    }

    /// Pairwise trace test and cone-intersection oracle.
    pub fn verify(&self) -> FlockReport {
        let f = &self.field;
        let bits: Vec<PointBits> = self
            .planes
            .par_iter()
            .map(|p| Cone::section_bits(f, &p.plane).expect("flock planes avoid the vertex"))
            .collect();
        let values = self.base_values();
        let mut pairs = Vec::new();
        for i in 0..self.planes.len() {
            for j in i + 1..self.planes.len() {
                let (s, t) = (values[i], values[j]);
                let trace = (s.t != t.t).then(|| {
                    let num = f.mul(s.f + t.f, s.g + t.g);
                    f.trace(f.div(num, f.square(s.t + t.t)).expect("s != t"))
                });
                pairs.push(PairCheck { i, j, trace, common_points: bits[i].intersection_count(&bits[j]) });
            }
        }
        let disagreements = pairs.iter().filter(|p| (p.trace == Some(1)) != (p.common_points == 0)).count();
        let verdict = pairs.iter().all(|p| p.trace == Some(1) && p.common_points == 0);
        FlockReport { pairs, disagreements, verdict }
    }

    /// Whether the base set is a subgroup with additive `f`, `g`; and whether
    /// all planes share a line.
    pub fn classify(&self) -> FlockClass {
        FlockClass { additive: self.is_additive(), linear: self.common_line().is_some() }
    }

    fn is_additive(&self) -> bool {
        let Ok(values) = self.representation() else {
            return false;
        };
        let f = &self.field;
        let ts: Vec<Gf> = values.iter().map(|v| v.t).collect();
        let span = f.additive_span(&ts);
        if span.len() != ts.len() {
            return false;
        }
        let lookup = |t: Gf| values.iter().find(|v| v.t == t).copied();
        values.iter().all(|s| {
            values.iter().all(|t| match lookup(s.t + t.t) {
                Some(u) => u.f == s.f + t.f && u.g == s.g + t.g,
                None => false,
            })
        })
    }

    /// Two points spanning a line contained in every plane, if one exists.
    /// For fewer than three planes any line of their intersection qualifies.
    pub fn common_line(&self) -> Option<(Point3, Point3)> {
        let f = &self.field;
        match self.planes.as_slice() {
            [] => None,
            [only] => {
                let basis = projective::kernel(f, &[only.plane.coords()]);
                Some((Point3::new(f, basis[0]).ok()?, Point3::new(f, basis[1]).ok()?))
            }
            [first, second, rest @ ..] => {
                let (u, v) = projective::meet_planes(f, &first.plane, &second.plane).ok()?;
                rest.iter()
                    .all(|p| projective::incident(f, &u, &p.plane) && projective::incident(f, &v, &p.plane))
                    .then_some((u, v))
            }
        }
    }
}

/// Additive partial flock of an arc: `X0 + t a(t) X1 + t X2 + t b(t) X3 = 0`
/// for every conic `F(a(t), b(t), t)`, plus `X0 = 0`; sorted by `t`.
pub fn arc_to_flock(m: &MathonArc) -> PartialFlock {
    let f = m.field();
    let mut planes = vec![Plane3::from_ints(f, [1, 0, 0, 0]).expect("nonzero")];
    for c in m.conics() {
        let t = c.lambda;
        let plane = Plane3::new(f, [Gf::ONE, f.mul(t, c.alpha), t, f.mul(t, c.beta)]).expect("nonzero");
        planes.push(plane);
    }
    PartialFlock::new(f, planes).expect("X0 coefficient is 1")
}

/// The conic `F(f(t)/t, g(t)/t, t)` attached to an additive-picture plane
/// with `t ≠ 0`.
pub fn plane_conic(f: &Field, plane: &FlockPlane) -> Result<Conic> {
    let v = plane.base_values(f);
    let inv = f.inv(v.t)?;
    Conic::new(f, f.mul(v.f, inv), f.mul(v.g, inv), v.t)
}

/// Inverse of [`arc_to_flock`]; the flock must be additive.
pub fn flock_to_arc(flock: &PartialFlock) -> Result<MathonArc> {
    if !flock.classify().additive {
        return Err(Error::NotAdditive);
    }
    let f = flock.field();
    let conics = flock
        .planes()
        .iter()
        .filter(|p| !p.base_values(f).t.is_zero())
        .map(|p| plane_conic(f, p))
        .collect::<Result<Vec<_>>>()?;
    let arc = close_set(f, &conics)?;
    if arc.degree() != flock.len() {
        return Err(Error::NotAdditive);
    }
    Ok(arc)
}

/// See [`PartialFlock::verify`].
pub fn verify_partial_flock(flock: &PartialFlock) -> FlockReport {
    flock.verify()
}

/// See [`PartialFlock::classify`].
pub fn classify_flock(flock: &PartialFlock) -> FlockClass {
    flock.classify()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathon::denniston_arc;

    #[test]
    fn cone_size_and_sections() {
        for h in 1..=4 {
            let f = Field::new(h).unwrap();
            let q = f.q() as usize;
            assert_eq!(Cone::points(&f).len(), q * (q + 1) + 1);
            for plane in Plane3::all(&f) {
                let on_cone: Vec<Point3> = projective::Point3::all(&f)
                    .into_iter()
                    .filter(|p| Cone::contains(&f, p) && projective::incident(&f, p, &plane))
                    .collect();
                match Cone::section(&f, &plane) {
                    Ok(section) => {
                        assert_eq!(section.len(), q + 1);
                        assert_eq!(section, on_cone);
                    }
                    Err(_) => assert!(projective::incident(&f, &Cone::vertex(&f), &plane)),
                }
            }
        }
    }

    #[test]
    fn lines_through_interior_point_meet_cone_once() {
        let f = Field::new(3).unwrap();
        let p = Point3::from_ints(&f, [1, 0, 1, 0]).unwrap();
        let cone: BTreeSet<Point3> = Cone::points(&f).into_iter().collect();
        for other in Point3::all(&f) {
            if other == p {
                continue;
            }
            let line = projective::points_on_span(&f, &p, &other);
            assert_eq!(line.iter().filter(|x| cone.contains(x)).count(), 1);
        }
    }

    #[test]
    fn single_plane_is_vacuously_a_flock() {
        let f = Field::new(3).unwrap();
        let flock = PartialFlock::new(&f, [Plane3::from_ints(&f, [1, 2, 3, 4]).unwrap()]).unwrap();
        assert!(flock.verify().verdict);
    }

    #[test]
    fn vertex_planes_rejected() {
        let f = Field::new(3).unwrap();
        let err = PartialFlock::new(&f, [Plane3::from_ints(&f, [0, 1, 0, 0]).unwrap()]).unwrap_err();
        assert_eq!(err, Error::PlaneThroughVertex([0, 1, 0, 0]));
    }

    #[test]
    fn denniston_flock_gf8() {
        let f = Field::new(3).unwrap();
        let m = denniston_arc(&f, Gf(1), &[Gf(1), Gf(2), Gf(3)]).unwrap();
        let flock = arc_to_flock(&m);
        assert_eq!(flock.len(), 4);
        let report = flock.verify();
        assert!(report.verdict);
        assert_eq!(report.disagreements, 0);
        assert!(report.pairs.iter().all(|p| p.trace == Some(1) && p.common_points == 0));
        assert_eq!(flock.classify(), FlockClass { additive: true, linear: true });
        assert_eq!(flock_to_arc(&flock).unwrap(), m);
    }

    #[test]
    fn additive_maps() {
        let f = Field::new(4).unwrap();
        let m = denniston_arc(&f, Gf(8), &f.additive_span(&[Gf(1), Gf(6), Gf(9)])[1..]).unwrap();
        let values = arc_to_flock(&m).representation().unwrap();
        for s in &values {
            for t in &values {
                let u = values.iter().find(|u| u.t == s.t + t.t).unwrap();
                assert_eq!(u.f, s.f + t.f);
                assert_eq!(u.g, s.g + t.g);
            }
        }
    }

    #[test]
    fn trace_zero_pair_meets_on_cone() {
        let f = Field::new(3).unwrap();
        // same-pencil planes t = 1, 2 with g chosen so the trace is 0
        for g in f.elements() {
            let planes = [
                Plane3::new(&f, [Gf::ONE, Gf(1), Gf(1), Gf(1)]).unwrap(),
                Plane3::new(&f, [Gf::ONE, Gf(2), Gf(2), g]).unwrap(),
            ];
            let flock = PartialFlock::new(&f, planes).unwrap();
            let report = flock.verify();
            let pair = &report.pairs[0];
            assert_eq!(pair.trace == Some(1), pair.common_points == 0);
        }
    }

    #[test]
    fn flock_to_arc_rejects_non_additive() {
        let f = Field::new(3).unwrap();
        let flock = PartialFlock::new(
            &f,
            [Plane3::from_ints(&f, [1, 0, 1, 0]).unwrap(), Plane3::from_ints(&f, [1, 1, 2, 1]).unwrap()],
        )
        .unwrap();
        assert!(!flock.classify().additive);
        assert_eq!(flock_to_arc(&flock), Err(Error::NotAdditive));
    }
}
