//! Projection of an arc in `X0 = 0` onto the cone, and the maps that carry
//! the resulting partial flock to the additive one.
//!
//! A point `(x, y, z)` of the arc plane sits in PG(3,q) as `(0, x, z, y)`,
//! so the conic `F(a,b,l)` becomes `a X1² + X1 X3 + b X3² + l X2² = 0` with
//! nucleus `n = (0,0,1,0)`. Projecting from `p = (s,0,1,0)` sends
//! `r = (0, x1, x2, x3)` to the unique cone point on the line `pr`.
//!
//! The chain back to the additive picture, for `p = (1,0,1,0)`:
//!
//! * [`delta`]: `X0 -> X0 + X2` on points, a collineation fixing the cone;
//! * [`phi`]: replace the point `(1,0,y,0)` where a plane meets `N` with
//!   `(1,0,1/y,0)`, keeping its line in `X0 = 0`;
//! * [`kappa`]: square every coordinate.

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::mathon::{Conic, MathonArc};
use crate::projective::{self, Plane3, Point2, Point3};

use super::{FlockPlane, PartialFlock};

/// `p = (1,0,1,0)`.
pub fn default_projection_point(f: &Field) -> Point3 {
    Point3::from_ints(f, [1, 0, 1, 0]).expect("nonzero")
}

/// For `p` on the nuclear line with `p ∉ {x, n}`, the `s` with `p = (s,0,1,0)`.
fn projection_scalar(f: &Field, p: &Point3) -> Result<Gf> {
    match p.coords() {
        [x0, x1, x2, x3] if x1.is_zero() && x3.is_zero() && !x0.is_zero() && !x2.is_zero() => f.div(x0, x2),
        _ => Err(Error::BadProjectionPoint),
    }
}

/// `(x, y, z) -> (0, x, z, y)`.
pub fn embed(f: &Field, pt: &Point2) -> Point3 {
    let [x, y, z] = pt.coords();
    Point3::new(f, [Gf::ZERO, x, z, y]).expect("nonzero")
}

/// The cone point on the line through `p` and a point `r` of `X0 = 0`.
pub fn project_point(f: &Field, p: &Point3, r: &Point3) -> Result<Point3> {
    let s = projection_scalar(f, p)?;
    let [r0, x1, x2, x3] = r.coords();
    if !r0.is_zero() {
        return Err(Error::Schema("point is not in the plane X0 = 0".into()));
    }
    // r + k p lies on X1 X3 = X2² exactly when k = sqrt(x1 x3) + x2.
    let k = f.sqrt(f.mul(x1, x3)) + x2;
    Point3::new(f, [f.mul(k, s), x1, x2 + k, x3])
}

/// The plane containing the projection of a conic.
///
/// For the default point `(1,0,1,0)` this is `λ X0 + α X1 + (λ+1) X2 + β X3 = 0`
/// with `(α, β, λ)` the square roots of the conic's coefficients; for any
/// other admissible point it is spanned by three projected conic points.
pub fn project_conic_to_plane(f: &Field, conic: &Conic, p: &Point3) -> Result<FlockPlane> {
    let s = projection_scalar(f, p)?;
    let plane = if s == Gf::ONE {
        let (alpha, beta, lambda) = conic.sqrt_coefficients(f);
        Plane3::new(f, [lambda, alpha, lambda + Gf::ONE, beta])?
    } else {
        project_conic_via_points(f, conic, p)?
    };
    FlockPlane::new(f, plane)
}

/// Plane through the projections of three points of the conic.
pub fn project_conic_via_points(f: &Field, conic: &Conic, p: &Point3) -> Result<Plane3> {
    let pts = conic.points(f);
    let img = pts[..3].iter().map(|pt| project_point(f, p, &embed(f, pt))).collect::<Result<Vec<_>>>()?;
    projective::plane_through(f, &img[0], &img[1], &img[2])
}

/// The conic planes of an arc followed by the singular plane
/// `X0 + s X2 = 0` spanned by `p` and the arc's line at infinity.
pub fn project_arc(m: &MathonArc, p: &Point3) -> Result<PartialFlock> {
    let f = m.field();
    let s = projection_scalar(f, p)?;
    let mut planes = m
        .conics()
        .iter()
        .map(|c| project_conic_to_plane(f, c, p).map(|fp| fp.plane))
        .collect::<Result<Vec<_>>>()?;
    planes.push(Plane3::new(f, [Gf::ONE, Gf::ZERO, s, Gf::ZERO])?);
    PartialFlock::new(f, planes)
}

/// `X0 -> X0 + X2` on points; on plane coordinates `[c0,c1,c2,c3] ->
/// [c0, c1, c2 + c0, c3]`. An involution fixing the cone.
pub fn delta(f: &Field, plane: &Plane3) -> Plane3 {
    let [c0, c1, c2, c3] = plane.coords();
    Plane3::new(f, [c0, c1, c2 + c0, c3]).expect("delta is invertible")
}

/// Inversion on the nuclear line lifted to planes:
/// `[c0,c1,c2,c3] -> [c2²/c0, c1, c2, c3]`.
///
/// The plane `X0 = 0` is left fixed, being the `t = 0` member of every
/// additive flock. Any other plane through `x` or `n` is rejected.
pub fn phi(f: &Field, plane: &Plane3) -> Result<Plane3> {
    let [c0, c1, c2, c3] = plane.coords();
    if c1.is_zero() && c2.is_zero() && c3.is_zero() {
        return Ok(*plane);
    }
    if c0.is_zero() || c2.is_zero() {
        return Err(Error::InversionUndefined(plane.to_ints()));
    }
    Plane3::new(f, [f.div(f.square(c2), c0)?, c1, c2, c3])
}

/// Coordinatewise Frobenius `(a,b,c,d) -> (a²,b²,c²,d²)`, on planes.
pub fn kappa(f: &Field, plane: &Plane3) -> Plane3 {
    Plane3::new(f, plane.coords().map(|c| f.square(c))).expect("Frobenius is bijective")
}

pub fn kappa_inv(f: &Field, plane: &Plane3) -> Plane3 {
    Plane3::new(f, plane.coords().map(|c| f.sqrt(c))).expect("Frobenius is bijective")
}

/// `κ ∘ φ ∘ δ` applied to every plane.
pub fn geometric_to_additive(flock: &PartialFlock) -> Result<PartialFlock> {
    let f = flock.field();
    let planes = flock
        .planes()
        .iter()
        .map(|p| Ok(kappa(f, &phi(f, &delta(f, &p.plane))?)))
        .collect::<Result<Vec<_>>>()?;
    PartialFlock::new(f, planes)
}

/// `δ ∘ φ ∘ κ⁻¹` applied to every plane; inverse of [`geometric_to_additive`].
pub fn additive_to_geometric(flock: &PartialFlock) -> Result<PartialFlock> {
    let f = flock.field();
    let planes = flock
        .planes()
        .iter()
        .map(|p| Ok(delta(f, &phi(f, &kappa_inv(f, &p.plane))?)))
        .collect::<Result<Vec<_>>>()?;
    PartialFlock::new(f, planes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flock::{arc_to_flock, Cone};
    use crate::mathon::{close_set, denniston_arc};
    use crate::projective::incident;

    fn gf8() -> Field {
        Field::new(3).unwrap()
    }

    #[test]
    fn unit_conic_plane() {
        let f = gf8();
        let c = Conic::new(&f, Gf(1), Gf(1), Gf(1)).unwrap();
        let plane = project_conic_to_plane(&f, &c, &default_projection_point(&f)).unwrap();
        assert_eq!(plane.plane, Plane3::from_ints(&f, [1, 1, 0, 1]).unwrap());
    }

    #[test]
    fn projected_points_lie_on_plane_and_cone() {
        let f = Field::new(4).unwrap();
        for (a, b, l) in [(1, 1, 1), (3, 5, 7), (9, 14, 2), (6, 11, 15)] {
            let Ok(c) = Conic::new(&f, Gf(a), Gf(b), Gf(l)) else { continue };
            for s in f.nonzero() {
                let p = Point3::new(&f, [s, Gf::ZERO, Gf::ONE, Gf::ZERO]).unwrap();
                let plane = project_conic_to_plane(&f, &c, &p).unwrap();
                let img: Vec<Point3> =
                    c.points(&f).iter().map(|pt| project_point(&f, &p, &embed(&f, pt)).unwrap()).collect();
                let distinct: std::collections::BTreeSet<_> = img.iter().collect();
                assert_eq!(distinct.len(), f.q() as usize + 1);
                for q in &img {
                    assert!(Cone::contains(&f, q));
                    assert!(incident(&f, q, &plane.plane));
                }
                if s == Gf::ONE {
                    assert_eq!(project_conic_via_points(&f, &c, &p).unwrap(), plane.plane);
                }
            }
        }
    }

    #[test]
    fn bad_projection_points() {
        let f = gf8();
        let c = Conic::new(&f, Gf(1), Gf(1), Gf(1)).unwrap();
        for bad in [[1, 0, 0, 0], [0, 0, 1, 0], [1, 1, 1, 0]] {
            let p = Point3::from_ints(&f, bad).unwrap();
            assert_eq!(project_conic_to_plane(&f, &c, &p), Err(Error::BadProjectionPoint));
        }
    }

    #[test]
    fn chain_pieces() {
        let f = gf8();
        let singular = Plane3::from_ints(&f, [1, 0, 1, 0]).unwrap();
        let x0 = Plane3::from_ints(&f, [1, 0, 0, 0]).unwrap();
        assert_eq!(delta(&f, &singular), x0);
        assert_eq!(delta(&f, &delta(&f, &singular)), singular);
        assert_eq!(phi(&f, &x0).unwrap(), x0);
        for pt in [[0, 0, 1, 0], [1, 0, 0, 0]] {
            let pt = Point3::from_ints(&f, pt).unwrap();
            let fixed = Point3::new(&f, pt.coords().map(|c| f.square(c))).unwrap();
            assert_eq!(fixed, pt);
        }
        let through_n = Plane3::from_ints(&f, [1, 1, 0, 1]).unwrap();
        assert!(matches!(phi(&f, &through_n), Err(Error::InversionUndefined(_))));
        let v = Plane3::from_ints(&f, [3, 2, 5, 7]).unwrap();
        assert_eq!(phi(&f, &phi(&f, &v).unwrap()).unwrap(), v);
        assert_eq!(kappa_inv(&f, &kappa(&f, &v)), v);
    }

    #[test]
    fn delta_and_kappa_fix_the_cone() {
        let f = gf8();
        for p in Cone::points(&f) {
            let [a, b, c, d] = p.coords();
            assert!(Cone::contains(&f, &Point3::new(&f, [a + c, b, c, d]).unwrap()));
            assert!(Cone::contains(&f, &Point3::new(&f, p.coords().map(|x| f.square(x))).unwrap()));
        }
    }

    #[test]
    fn chain_on_denniston_gf8() {
        let f = gf8();
        let m = denniston_arc(&f, Gf(1), &[Gf(1), Gf(2), Gf(3)]).unwrap();
        let raw = project_arc(&m, &default_projection_point(&f)).unwrap();
        assert_eq!(raw.len(), 4);
        assert!(raw.verify().verdict);
        let additive = geometric_to_additive(&raw).unwrap();
        assert_eq!(additive.plane_set(), arc_to_flock(&m).plane_set());
        assert_eq!(additive_to_geometric(&additive).unwrap().plane_set(), raw.plane_set());
    }

    #[test]
    fn singular_plane_meets_nuclear_line_in_p() {
        let f = gf8();
        let m = close_set(&f, &[Conic::new(&f, Gf(2), Gf(7), Gf(6)).unwrap()]).unwrap();
        for s in f.nonzero() {
            let p = Point3::new(&f, [s, Gf::ZERO, Gf::ONE, Gf::ZERO]).unwrap();
            let flock = project_arc(&m, &p).unwrap();
            assert_eq!(flock.len(), 2);
            assert!(flock.verify().verdict);
            let singular = flock.planes().last().unwrap().plane;
            assert!(incident(&f, &p, &singular));
            assert!(!incident(&f, &Cone::vertex(&f), &singular));
            assert!(!incident(&f, &Cone::nucleus(&f), &singular));
        }
    }
}
