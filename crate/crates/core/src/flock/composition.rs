//! Standard equations, composition of conic planes, singular planes, flock
//! extension, and Denniston lines.
//!
//! All of this lives in the projection picture with `p = (1,0,1,0)`: a plane
//! avoiding `p` has a unique standard equation
//! `a X0 + b X1 + (a+1) X2 + c X3 = 0`, and the conic plane of `F(α²,β²,λ²)`
//! has `(a,b,c) = (λ,α,β)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::mathon::MathonArc;
use crate::projective::{self, Line2, Plane3, Point2};

use super::projection::{delta, kappa, kappa_inv, phi};
use super::{Cone, FlockPlane, PartialFlock};

/// `(a, b, c)` of `a X0 + b X1 + (a+1) X2 + c X3 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StandardForm {
    pub a: Gf,
    pub b: Gf,
    pub c: Gf,
}

impl StandardForm {
    pub fn coefficients(&self) -> [Gf; 4] {
        [self.a, self.b, self.a + Gf::ONE, self.c]
    }

    pub fn plane(&self, f: &Field) -> Plane3 {
        Plane3::new(f, self.coefficients()).expect("a and a+1 are not both zero")
    }
}

/// The unique standard equation of a plane not containing `(1,0,1,0)`.
pub fn standardize_plane(f: &Field, plane: &Plane3) -> Result<StandardForm> {
    let [c0, c1, c2, c3] = plane.coords();
    if c0 == c2 {
        return Err(Error::PlaneContainsP(plane.to_ints()));
    }
    let k = f.inv(c0 + c2)?;
    Ok(StandardForm { a: f.mul(k, c0), b: f.mul(k, c1), c: f.mul(k, c3) })
}

fn standard_pair(f: &Field, v: &FlockPlane, w: &FlockPlane) -> Result<(StandardForm, StandardForm)> {
    let sv = standardize_plane(f, &v.plane)?;
    let sw = standardize_plane(f, &w.plane)?;
    if sv.a == sw.a {
        return Err(Error::EqualLambda(sv.a));
    }
    Ok((sv, sw))
}

/// `V ⊕ W`: the third conic plane of the degree-4 Denniston arc determined by
/// two conic planes with disjoint cone sections.
pub fn plane_compose(f: &Field, v: &FlockPlane, w: &FlockPlane) -> Result<FlockPlane> {
    let (sv, sw) = standard_pair(f, v, w)?;
    if Cone::section_bits(f, &v.plane)?.intersects(&Cone::section_bits(f, &w.plane)?) {
        return Err(Error::SectionsMeet(0, 1));
    }
    let sum = sv.a + sw.a;
    let weighted = |x: Gf, y: Gf| f.div(f.mul(x, sv.a) + f.mul(y, sw.a), sum).expect("a != a'");
    let composed = StandardForm { a: sum, b: weighted(sv.b, sw.b), c: weighted(sv.c, sw.c) };
    FlockPlane::new(f, composed.plane(f))
}

/// Coefficient-wise sum of the standard equations of `V` and `W`.
pub fn singular_plane(f: &Field, v: &FlockPlane, w: &FlockPlane) -> Result<Plane3> {
    let (sv, sw) = standard_pair(f, v, w)?;
    let [a, b, c, d] = sv.coefficients();
    let [a2, b2, c2, d2] = sw.coefficients();
    Plane3::new(f, [a + a2, b + b2, c + c2, d + d2])
}

/// The line a plane cuts out of `X0 = 0`, in the arc plane's `(x, y, z)`
/// coordinates.
pub fn trace_on_arc_plane(f: &Field, plane: &Plane3) -> Result<Line2> {
    let [_, c1, c2, c3] = plane.coords();
    Line2::new(f, [c1, c3, c2])
}

/// The unique additive partial flock of size 2d containing the additive
/// flock `flock` and the plane `v`.
///
/// Works in the projection picture: every plane is pulled back by
/// `δ ∘ φ ∘ κ⁻¹`, `v` is composed with each conic plane, and the results are
/// pushed forward again.
pub fn extend_flock(flock: &PartialFlock, v: &Plane3) -> Result<PartialFlock> {
    let f = flock.field();
    let [c0, _, c2, _] = v.coords();
    if c0.is_zero() || c2.is_zero() {
        return Err(Error::InversionUndefined(v.to_ints()));
    }
    if !flock.classify().additive {
        return Err(Error::NotAdditive);
    }
    let v_bits = Cone::section_bits(f, v)?;
    for (i, p) in flock.planes().iter().enumerate() {
        if Cone::section_bits(f, &p.plane)?.intersects(&v_bits) {
            return Err(Error::SectionsMeet(i, flock.len()));
        }
    }

    let pull = |p: &Plane3| -> Result<Plane3> { Ok(delta(f, &phi(f, &kappa_inv(f, p))?)) };
    let push = |p: &Plane3| -> Result<Plane3> { Ok(kappa(f, &phi(f, &delta(f, p))?)) };

    let v_geo = FlockPlane::new(f, pull(v)?)?;
    let mut out = flock.planes().iter().map(|p| p.plane).collect::<Vec<_>>();
    out.push(*v);
    for p in flock.planes() {
        let w_geo = pull(&p.plane)?;
        if standardize_plane(f, &w_geo).is_err() {
            // the singular plane X0 + X2 = 0; composing with it gives V back
            continue;
        }
        let composed = plane_compose(f, &v_geo, &FlockPlane::new(f, w_geo)?)?;
        out.push(push(&composed.plane)?);
    }
    let mut planes: Vec<Plane3> = out.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    planes.sort_by_key(|p| {
        let [c0, _, c2, _] = p.coords();
        f.div(c2, c0).expect("X0 coefficient is nonzero")
    });
    let extended = PartialFlock::new(f, planes)?;
    if extended.len() != 2 * flock.len() || !extended.classify().additive {
        return Err(Error::NotAdditive);
    }
    Ok(extended)
}

/// Lines at infinity of the degree-4 Denniston arcs spanned by pairs of
/// conics of an arc, and whether they pass through a common point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DennistonLines {
    pub lines: BTreeSet<Line2>,
    pub concurrent: bool,
    /// The shared point when at least two distinct lines occur; `None` when
    /// every pair gives the same line.
    pub common_point: Option<Point2>,
}

/// For each pair of conics `F(a,b,l)`, `F(a',b',l')` the line
/// `√(a+a') x + √(b+b') y + √(l+l') z = 0`, whose square is the sum of the
/// two conic equations.
pub fn denniston_lines(m: &MathonArc) -> Result<DennistonLines> {
    if m.degree() < 4 {
        return Err(Error::DegreeTooSmall { need: 4, got: m.degree() });
    }
    let f = m.field();
    let conics = m.conics();
    let mut lines = BTreeSet::new();
    for (i, c1) in conics.iter().enumerate() {
        for c2 in &conics[i + 1..] {
            let coords = [c1.alpha + c2.alpha, c1.beta + c2.beta, c1.lambda + c2.lambda].map(|x| f.sqrt(x));
            lines.insert(Line2::new(f, coords)?);
        }
    }
    let distinct: Vec<Line2> = lines.iter().copied().collect();
    let (concurrent, common_point) = match distinct.as_slice() {
        [_] => (true, None),
        [first, second, rest @ ..] => {
            let pt = projective::meet2(f, first, second)?;
            (rest.iter().all(|l| projective::incident(f, &pt, l)), Some(pt))
        }
        [] => unreachable!("degree >= 4 gives at least one pair"),
    };
    Ok(DennistonLines { lines, concurrent, common_point: common_point.filter(|_| concurrent) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flock::projection::{default_projection_point, project_conic_to_plane};
    use crate::flock::{arc_to_flock, flock_to_arc, plane_conic};
    use crate::mathon::{compose, denniston_arc, synthetic_extension, Conic};
    use crate::projective::{incident, Point3};

    #[test]
    fn standard_form_examples() {
        let f = Field::new(3).unwrap();
        let v = Plane3::from_ints(&f, [1, 1, 0, 1]).unwrap();
        assert_eq!(standardize_plane(&f, &v).unwrap(), StandardForm { a: Gf(1), b: Gf(1), c: Gf(1) });
        let scaled = Plane3::new(&f, [Gf(2), Gf(2), Gf(0), Gf(2)]).unwrap();
        assert_eq!(standardize_plane(&f, &scaled), standardize_plane(&f, &v));
        let through_p = Plane3::from_ints(&f, [1, 0, 1, 0]).unwrap();
        assert_eq!(standardize_plane(&f, &through_p), Err(Error::PlaneContainsP([1, 0, 1, 0])));
        for plane in Plane3::all(&f) {
            if let Ok(sf) = standardize_plane(&f, &plane) {
                assert_eq!(sf.plane(&f), plane);
            }
        }
    }

    #[test]
    fn singular_plane_of_unit_conic_plane() {
        let f = Field::new(5).unwrap();
        let v = FlockPlane::new(&f, Plane3::from_ints(&f, [1, 1, 0, 1]).unwrap()).unwrap();
        let (lam, beta) = (Gf(6), Gf(13));
        let w = FlockPlane::new(&f, Plane3::new(&f, [lam, Gf::ONE, lam + Gf::ONE, beta]).unwrap()).unwrap();
        let s = singular_plane(&f, &v, &w).unwrap();
        let one = Gf::ONE;
        assert_eq!(s, Plane3::new(&f, [lam + one, Gf::ZERO, lam + one, beta + one]).unwrap());
        assert!(incident(&f, &default_projection_point(&f), &s));
        assert!(incident(&f, &Point3::from_ints(&f, [0, 1, 0, 0]).unwrap(), &s));
    }

    #[test]
    fn plane_compose_matches_conic_compose() {
        let f = Field::new(3).unwrap();
        let p = default_projection_point(&f);
        let mut checked = 0;
        for a in f.elements() {
            for b in f.elements() {
                let Ok(c1) = Conic::new(&f, a, b, Gf(3)) else { continue };
                let Ok(c2) = Conic::new(&f, Gf(1), Gf(1), Gf(5)) else { continue };
                let Ok(c3) = compose(&f, &c1, &c2) else { continue };
                let v = project_conic_to_plane(&f, &c1, &p).unwrap();
                let w = project_conic_to_plane(&f, &c2, &p).unwrap();
                let vw = plane_compose(&f, &v, &w).unwrap();
                assert_eq!(vw, project_conic_to_plane(&f, &c3, &p).unwrap());
                assert_eq!(plane_compose(&f, &vw, &v).unwrap(), w);
                let (u1, u2) = projective::meet_planes(&f, &v.plane, &w.plane).unwrap();
                assert!(incident(&f, &u1, &vw.plane) && incident(&f, &u2, &vw.plane));
                let line = trace_on_arc_plane(&f, &singular_plane(&f, &v, &w).unwrap()).unwrap();
                let other = trace_on_arc_plane(&f, &singular_plane(&f, &v, &vw).unwrap()).unwrap();
                assert_eq!(line, other);
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn compose_rejects_equal_lambda() {
        let f = Field::new(3).unwrap();
        let v = FlockPlane::new(&f, Plane3::from_ints(&f, [2, 1, 3, 1]).unwrap()).unwrap();
        let w = FlockPlane::new(&f, Plane3::from_ints(&f, [2, 5, 3, 1]).unwrap()).unwrap();
        assert!(matches!(plane_compose(&f, &v, &w), Err(Error::EqualLambda(_))));
    }

    #[test]
    fn denniston_lines_of_denniston_arc() {
        let f = Field::new(3).unwrap();
        let m = denniston_arc(&f, Gf(1), &[Gf(1), Gf(2), Gf(3)]).unwrap();
        let dl = denniston_lines(&m).unwrap();
        assert_eq!(dl.lines.len(), 1);
        assert_eq!(*dl.lines.iter().next().unwrap(), Line2::from_ints(&f, [0, 0, 1]).unwrap());
        assert!(dl.concurrent);
        let small = denniston_arc(&f, Gf(1), &[Gf(1)]).unwrap();
        assert!(matches!(denniston_lines(&small), Err(Error::DegreeTooSmall { .. })));
    }

    #[test]
    fn degree_four_arcs_are_linear_about_their_own_line() {
        let f = Field::new(3).unwrap();
        let p = default_projection_point(&f);
        let with_lambda = |l: Gf| -> Vec<Conic> {
            f.elements()
                .flat_map(|a| f.elements().map(move |b| (a, b)))
                .filter_map(|(a, b)| Conic::new(&f, a, b, l).ok())
                .collect()
        };
        let mut count = 0;
        for c1 in with_lambda(Gf(1)) {
            for c2 in with_lambda(Gf(2)) {
                let Ok(m) = crate::mathon::denniston_closure(&f, &c1, &c2) else { continue };
                assert!(m.is_denniston_type());
                let constant = c1.alpha == c2.alpha && c1.beta == c2.beta;
                assert_eq!(arc_to_flock(&m).classify().linear, constant);
                let dl = denniston_lines(&m).unwrap();
                let [u, v, w] = dl.lines.iter().next().unwrap().coords();
                let singular = Plane3::new(&f, [w, u, w, v]).unwrap();
                let mut planes: Vec<Plane3> =
                    m.conics().iter().map(|c| project_conic_to_plane(&f, c, &p).unwrap().plane).collect();
                planes.push(singular);
                assert!(PartialFlock::new(&f, planes).unwrap().classify().linear);
                count += 1;
            }
        }
        assert!(count > 0);
    }

    #[test]
    fn extend_denniston_flock_gf8() {
        let f = Field::new(3).unwrap();
        let m = denniston_arc(&f, Gf(1), &[Gf(1), Gf(2), Gf(3)]).unwrap();
        let flock = arc_to_flock(&m);
        let (u, w) = flock.common_line().unwrap();
        let mut linear_found = false;
        for plane in Plane3::all(&f) {
            let [c0, _, c2, _] = plane.coords();
            if c0.is_zero() || c2.is_zero() {
                continue;
            }
            let Ok(ext) = extend_flock(&flock, &plane) else { continue };
            assert_eq!(ext.len(), 8);
            assert!(ext.verify().verdict);
            let contains_line = incident(&f, &u, &plane) && incident(&f, &w, &plane);
            assert_eq!(ext.classify().linear, contains_line);
            linear_found |= contains_line;
            let conic = plane_conic(&f, &FlockPlane::new(&f, plane).unwrap()).unwrap();
            let arc = synthetic_extension(&m, &conic).unwrap();
            assert_eq!(flock_to_arc(&ext).unwrap(), arc);
        }
        assert!(linear_found);
    }
}
