//! Points and hyperplanes of PG(2,q) and PG(3,q) in homogeneous coordinates.
//!
//! Both points and hyperplanes are stored normalized so that the first
//! nonzero coordinate is 1, which makes value equality projective equality.
//! Enumeration is in lexicographic order of the normalized coordinates.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{Field, Gf};

fn normalize<const N: usize>(f: &Field, mut coords: [Gf; N]) -> Result<[Gf; N]> {
    let lead = *coords.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    let inv = f.inv(lead)?;
    for c in coords.iter_mut() {
        *c = f.mul(*c, inv);
    }
    Ok(coords)
}

fn dot<const N: usize>(f: &Field, a: &[Gf; N], b: &[Gf; N]) -> Gf {
    a.iter().zip(b).map(|(&x, &y)| f.mul(x, y)).sum()
}

macro_rules! homogeneous {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name<const N: usize>([Gf; N]);

        impl<const N: usize> $name<N> {
            /// Normalizes `coords`; fails if they are all zero.
            pub fn new(f: &Field, coords: [Gf; N]) -> Result<Self> {
                Ok(Self(normalize(f, coords)?))
            }

            /// Like [`Self::new`] but from raw integers, range-checked.
            pub fn from_ints(f: &Field, coords: [u32; N]) -> Result<Self> {
                let mut out = [Gf::ZERO; N];
                for (o, &c) in out.iter_mut().zip(&coords) {
                    *o = f.element(c)?;
                }
                Self::new(f, out)
            }

            pub fn coords(&self) -> [Gf; N] {
                self.0
            }

            pub fn to_ints(&self) -> [u32; N] {
                self.0.map(|c| c.0)
            }

            /// Every normalized vector, in lexicographic order.
            pub fn all(f: &Field) -> Vec<Self> {
                all_normalized::<N>(f).into_iter().map(Self).collect()
            }

            /// Position of this element in [`Self::all`].
            pub fn index(&self, f: &Field) -> usize {
                normalized_index(f, &self.0)
            }
        }
    };
}

homogeneous!(
    /// A point, normalized so its first nonzero coordinate is 1.
    Point
);
homogeneous!(
    /// A hyperplane `[u0, .., u_{N-1}]`, i.e. the set of points with
    /// `sum u_i X_i = 0`, normalized like a point.
    Hyperplane
);

pub type Point2 = Point<3>;
pub type Line2 = Hyperplane<3>;
pub type Point3 = Point<4>;
pub type Plane3 = Hyperplane<4>;

/// Number of points of PG(N-1, q).
pub fn count<const N: usize>(f: &Field) -> usize {
    let q = f.q() as usize;
    (0..N).map(|k| q.pow(k as u32)).sum()
}

fn all_normalized<const N: usize>(f: &Field) -> Vec<[Gf; N]> {
    let q = f.q();
    let mut out = Vec::with_capacity(count::<N>(f));
    for lead in (0..N).rev() {
        let tail = N - 1 - lead;
        let total = (q as u64).pow(tail as u32);
        for mut code in 0..total {
            let mut v = [Gf::ZERO; N];
            v[lead] = Gf::ONE;
            for i in (lead + 1..N).rev() {
                v[i] = Gf((code % q as u64) as u32);
                code /= q as u64;
            }
            out.push(v);
        }
    }
    out
}

fn normalized_index<const N: usize>(f: &Field, v: &[Gf; N]) -> usize {
    let q = f.q() as usize;
    let lead = v.iter().position(|c| !c.is_zero()).expect("normalized vectors are nonzero");
    let offset: usize = (lead + 1..N).map(|k| q.pow((N - 1 - k) as u32)).sum();
    let code = v[lead + 1..].iter().fold(0usize, |acc, c| acc * q + c.0 as usize);
    offset + code
}

pub fn incident<const N: usize>(f: &Field, pt: &Point<N>, hp: &Hyperplane<N>) -> bool {
    dot(f, &pt.0, &hp.0).is_zero()
}

/// Basis of the null space `{x : <row, x> = 0 for every row}` over the field.
pub fn kernel<const N: usize>(f: &Field, rows: &[[Gf; N]]) -> Vec<[Gf; N]> {
    let mut m: Vec<[Gf; N]> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..N {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = f.inv(m[r][col]).expect("pivot is nonzero");
        for c in m[r].iter_mut() {
            *c = f.mul(*c, inv);
        }
        let pivot_row = m[r];
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x += f.mul(factor, p);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..N)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = [Gf::ZERO; N];
            v[free] = Gf::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m[row][free];
            }
            v
        })
        .collect()
}

/// The unique plane through three non-collinear points.
pub fn plane_through(f: &Field, p1: &Point3, p2: &Point3, p3: &Point3) -> Result<Plane3> {
    match kernel(f, &[p1.0, p2.0, p3.0]).as_slice() {
        [v] => Hyperplane::new(f, *v),
        _ => Err(Error::DegenerateSpan),
    }
}

/// The line shared by two distinct planes, as two points spanning it.
pub fn meet_planes(f: &Field, a: &Plane3, b: &Plane3) -> Result<(Point3, Point3)> {
    match kernel(f, &[a.0, b.0]).as_slice() {
        [u, v] => Ok((Point::new(f, *u)?, Point::new(f, *v)?)),
        _ => Err(Error::EqualPlanes),
    }
}

/// The line of PG(2,q) through two distinct points.
pub fn join2(f: &Field, a: &Point2, b: &Point2) -> Result<Line2> {
    match kernel(f, &[a.0, b.0]).as_slice() {
        [v] => Hyperplane::new(f, *v),
        _ => Err(Error::DegenerateSpan),
    }
}

/// The common point of two distinct lines of PG(2,q).
pub fn meet2(f: &Field, a: &Line2, b: &Line2) -> Result<Point2> {
    match kernel(f, &[a.0, b.0]).as_slice() {
        [v] => Point::new(f, *v),
        _ => Err(Error::EqualPlanes),
    }
}

/// The q+1 points on the line spanned by two points `u != v`.
fn span_points<const N: usize>(f: &Field, u: [Gf; N], v: [Gf; N]) -> Vec<Point<N>> {
    let mut out = vec![Point::new(f, u).expect("spanning vector is nonzero")];
    for t in f.elements() {
        let mut w = v;
        for (x, &y) in w.iter_mut().zip(&u) {
            *x += f.mul(t, y);
        }
        out.push(Point::new(f, w).expect("u and v are independent"));
    }
    out
}

/// Points on a line of PG(2,q).
pub fn points_on_line(f: &Field, line: &Line2) -> Vec<Point2> {
    let basis = kernel(f, &[line.0]);
    span_points(f, basis[0], basis[1])
}

/// Points on the line of PG(3,q) spanned by two distinct points.
pub fn points_on_span(f: &Field, a: &Point3, b: &Point3) -> Vec<Point3> {
    span_points(f, a.0, b.0)
}

/// A dense set of points of PG(N-1,q), keyed by enumeration index.
#[derive(Debug, Clone)]
pub struct PointBits {
    words: Vec<u64>,
}

impl PointBits {
    pub fn new<const N: usize>(f: &Field, points: impl IntoIterator<Item = Point<N>>) -> Self {
        let mut words = vec![0u64; count::<N>(f).div_ceil(64)];
        for p in points {
            let i = p.index(f);
            words[i / 64] |= 1 << (i % 64);
        }
        PointBits { words }
    }

    pub fn contains<const N: usize>(&self, f: &Field, p: &Point<N>) -> bool {
        let i = p.index(f);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn intersects(&self, other: &PointBits) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_count(&self, other: &PointBits) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// Set of points on a line of PG(2,q), in a form cheap to reuse across many
/// incidence scans.
pub fn all_lines_with_points(f: &Field) -> Vec<(Line2, Vec<Point2>)> {
    Line2::all(f)
        .into_iter()
        .map(|l| {
            let pts = points_on_line(f, &l);
            (l, pts)
        })
        .collect()
}

pub fn as_set<const N: usize>(points: impl IntoIterator<Item = Point<N>>) -> BTreeSet<Point<N>> {
    points.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(h: u32) -> Field {
        Field::new(h).unwrap()
    }

    #[test]
    fn incidence_examples() {
        let f = gf(2);
        let p = |c| Point2::from_ints(&f, c).unwrap();
        let l = |c| Line2::from_ints(&f, c).unwrap();
        assert!(incident(&f, &p([0, 0, 1]), &l([1, 0, 0])));
        assert!(!incident(&f, &p([1, 0, 0]), &l([1, 0, 0])));
        assert!(incident(&f, &p([1, 1, 1]), &l([1, 1, 0])));
    }

    #[test]
    fn enumeration_counts() {
        for (h, n2, n3) in [(1, 7, 15), (2, 21, 85), (3, 73, 585)] {
            let f = gf(h);
            let pts = Point2::all(&f);
            assert_eq!(pts.len(), n2);
            assert_eq!(Point3::all(&f).len(), n3);
            // distinct, sorted, and indexable
            assert!(pts.windows(2).all(|w| w[0] < w[1]));
            for (i, p) in pts.iter().enumerate() {
                assert_eq!(p.index(&f), i);
            }
        }
    }

    #[test]
    fn enumeration_matches_normalizing_every_vector() {
        let f = gf(2);
        let q = f.q();
        let mut seen = BTreeSet::new();
        for a in 0..q {
            for b in 0..q {
                for c in 0..q {
                    if let Ok(p) = Point2::from_ints(&f, [a, b, c]) {
                        seen.insert(p);
                    }
                }
            }
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), Point2::all(&f));
    }

    #[test]
    fn normalization_is_canonical() {
        let f = gf(3);
        let a = Point3::from_ints(&f, [0, 3, 5, 7]).unwrap();
        let scaled: [Gf; 4] = a.coords().map(|c| f.mul(c, Gf(6)));
        assert_eq!(Point3::new(&f, scaled).unwrap(), a);
        assert_eq!(Point3::from_ints(&f, [0; 4]), Err(Error::ZeroVector));
    }

    #[test]
    fn lines_and_points_regular() {
        for h in 1..=4 {
            let f = gf(h);
            let q = f.q() as usize;
            let lines = all_lines_with_points(&f);
            let mut per_point = vec![0usize; count::<3>(&f)];
            for (l, pts) in &lines {
                assert_eq!(pts.len(), q + 1);
                assert_eq!(as_set(pts.iter().copied()).len(), q + 1);
                for p in pts {
                    assert!(incident(&f, p, l));
                    per_point[p.index(&f)] += 1;
                }
            }
            assert!(per_point.iter().all(|&n| n == q + 1));
        }
    }

    #[test]
    fn plane_through_examples() {
        let f = gf(3);
        let p = |c| Point3::from_ints(&f, c).unwrap();
        let pl = |c| Plane3::from_ints(&f, c).unwrap();
        assert_eq!(
            plane_through(&f, &p([1, 0, 0, 0]), &p([0, 1, 0, 0]), &p([0, 0, 1, 0])).unwrap(),
            pl([0, 0, 0, 1])
        );
        assert_eq!(
            plane_through(&f, &p([0, 1, 0, 0]), &p([0, 0, 1, 0]), &p([0, 0, 0, 1])).unwrap(),
            pl([1, 0, 0, 0])
        );
        assert_eq!(
            plane_through(&f, &p([1, 0, 0, 0]), &p([0, 1, 0, 0]), &p([1, 1, 0, 0])),
            Err(Error::DegenerateSpan)
        );
    }

    #[test]
    fn meet_planes_examples() {
        let f = gf(3);
        let pl = |c| Plane3::from_ints(&f, c).unwrap();
        let (a, b) = meet_planes(&f, &pl([1, 0, 0, 0]), &pl([0, 1, 0, 0])).unwrap();
        let line = as_set(points_on_span(&f, &a, &b));
        let expected = as_set(points_on_span(
            &f,
            &Point3::from_ints(&f, [0, 0, 1, 0]).unwrap(),
            &Point3::from_ints(&f, [0, 0, 0, 1]).unwrap(),
        ));
        assert_eq!(line, expected);

        // X1 = 0 and X3 = 0 meet in the nuclear line {(t,0,1,0)} + vertex.
        let (a, b) = meet_planes(&f, &pl([0, 1, 0, 0]), &pl([0, 0, 0, 1])).unwrap();
        let line = as_set(points_on_span(&f, &a, &b));
        assert!(line.contains(&Point3::from_ints(&f, [1, 0, 0, 0]).unwrap()));
        for t in 0..8 {
            assert!(line.contains(&Point3::from_ints(&f, [t, 0, 1, 0]).unwrap()));
        }
        assert_eq!(meet_planes(&f, &pl([1, 2, 3, 4]), &pl([1, 2, 3, 4])), Err(Error::EqualPlanes));
    }

    #[test]
    fn plane_and_meet_incidence_random() {
        let f = gf(4);
        let pts = Point3::all(&f);
        let planes = Plane3::all(&f);
        for (i, w) in pts.windows(3).step_by(7).enumerate() {
            if let Ok(pl) = plane_through(&f, &w[0], &w[1], &w[2]) {
                for p in w {
                    assert!(incident(&f, p, &pl));
                }
            }
            let (a, b) = (planes[i * 3 % planes.len()], planes[(i * 11 + 5) % planes.len()]);
            if a != b {
                let (u, v) = meet_planes(&f, &a, &b).unwrap();
                assert_ne!(u, v);
                for p in [u, v] {
                    assert!(incident(&f, &p, &a) && incident(&f, &p, &b));
                }
            }
        }
    }
}
