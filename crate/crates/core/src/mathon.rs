//! Conics on the common nucleus (0,0,1), their composition, and maximal arcs
//! of Denniston and Mathon type in PG(2,q), q = 2^h.
//!
//! A conic is `F(α,β,λ) = {(x,y,z) : αx² + xy + βy² + λz² = 0}` with
//! `Tr(αβ) = 1` and `λ ≠ 0`. Two conics with `λ ≠ λ'` compose to
//! `F(α⊕α', β⊕β', λ+λ')` where `α⊕α' = (αλ + α'λ')/(λ+λ')`. A set of such
//! conics that is closed under composition, together with the nucleus, is a
//! maximal arc of degree `|set| + 1`.
//!
//! Disjointness is always decided on point sets. The trace test
//! [`composition_trace`] is exposed separately so the two can be compared.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::projective::{self, Point2, PointBits};

/// `F(α,β,λ)`; see the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Conic {
    pub alpha: Gf,
    pub beta: Gf,
    pub lambda: Gf,
}

/// Points of `a x² + xy + b y² + l z² = 0`, for arbitrary coefficients.
///
/// Unlike [`Conic::points`] this accepts coefficients with `Tr(ab) = 0`, in
/// which case the line `z = 0` contributes two points.
pub fn quadric_points(f: &Field, a: Gf, b: Gf, l: Gf) -> Vec<Point2> {
    let mut out = Vec::new();
    let pt = |c: [Gf; 3]| Point2::new(f, c).expect("nonzero");
    // z = 0
    if b.is_zero() {
        out.push(pt([Gf::ZERO, Gf::ONE, Gf::ZERO]));
    }
    for y in f.elements() {
        if (a + y + f.mul(b, f.square(y))).is_zero() {
            out.push(pt([Gf::ONE, y, Gf::ZERO]));
        }
    }
    // z = 1: solve a x² + y x + (b y² + l) = 0 for x, one y at a time.
    for y in f.elements() {
        let c = f.mul(b, f.square(y)) + l;
        if a.is_zero() {
            if y.is_zero() {
                if c.is_zero() {
                    out.extend(f.elements().map(|x| pt([x, Gf::ZERO, Gf::ONE])));
                }
            } else {
                let x = f.div(c, y).expect("y != 0");
                out.push(pt([x, y, Gf::ONE]));
            }
        } else if y.is_zero() {
            let x = f.sqrt(f.div(c, a).expect("a != 0"));
            out.push(pt([x, Gf::ZERO, Gf::ONE]));
        } else {
            // x = (y/a) u turns the equation into u² + u = a c / y².
            let rhs = f.div(f.mul(a, c), f.square(y)).expect("y != 0");
            if let Some((u0, u1)) = f.solve_affine_quadratic(rhs) {
                let scale = f.div(y, a).expect("a != 0");
                for u in [u0, u1] {
                    out.push(pt([f.mul(scale, u), y, Gf::ONE]));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

impl Conic {
    pub fn new(f: &Field, alpha: Gf, beta: Gf, lambda: Gf) -> Result<Conic> {
        for v in [alpha, beta, lambda] {
            f.element(v.0)?;
        }
        if lambda.is_zero() || f.trace(f.mul(alpha, beta)) != 1 {
            return Err(Error::DegenerateConic { alpha, beta, lambda });
        }
        Ok(Conic { alpha, beta, lambda })
    }

    /// The q+1 points, sorted.
    pub fn points(&self, f: &Field) -> Vec<Point2> {
        quadric_points(f, self.alpha, self.beta, self.lambda)
    }

    pub fn bits(&self, f: &Field) -> PointBits {
        PointBits::new(f, self.points(f))
    }

    /// The nucleus `(0,0,1)` shared by every conic of this family.
    pub fn nucleus(f: &Field) -> Point2 {
        Point2::from_ints(f, [0, 0, 1]).expect("nonzero")
    }

    /// The same conic in the squared notation `(α², β², λ²)` ↦ `(α, β, λ)`
    /// used on the plane `X0 = 0` of PG(3,q): returns `(√α, √β, √λ)`.
    pub fn sqrt_coefficients(&self, f: &Field) -> (Gf, Gf, Gf) {
        (f.sqrt(self.alpha), f.sqrt(self.beta), f.sqrt(self.lambda))
    }
}

fn weighted(f: &Field, x: Gf, l: Gf, x2: Gf, l2: Gf) -> Gf {
    f.div(f.mul(x, l) + f.mul(x2, l2), l + l2).expect("l != l2")
}

/// The coefficients `(α⊕α', β⊕β', λ+λ')`, without checking the trace
/// condition.
pub fn compose_coefficients(f: &Field, c1: &Conic, c2: &Conic) -> Result<(Gf, Gf, Gf)> {
    if c1.lambda == c2.lambda {
        return Err(Error::EqualLambda(c1.lambda));
    }
    Ok((
        weighted(f, c1.alpha, c1.lambda, c2.alpha, c2.lambda),
        weighted(f, c1.beta, c1.lambda, c2.beta, c2.lambda),
        c1.lambda + c2.lambda,
    ))
}

/// Mathon composition. Fails on equal λ, or when the composed coefficients
/// violate the trace condition.
pub fn compose(f: &Field, c1: &Conic, c2: &Conic) -> Result<Conic> {
    let (a, b, l) = compose_coefficients(f, c1, c2)?;
    Conic::new(f, a, b, l)
}

/// `Tr((α⊕α')(β⊕β'))`, the trace shortcut for disjointness.
pub fn composition_trace(f: &Field, c1: &Conic, c2: &Conic) -> Result<u8> {
    let (a, b, _) = compose_coefficients(f, c1, c2)?;
    Ok(f.trace(f.mul(a, b)))
}

/// Point-set disjointness.
pub fn conics_disjoint(f: &Field, c1: &Conic, c2: &Conic) -> bool {
    !c1.bits(f).intersects(&c2.bits(f))
}

/// A closed set of conics on the nucleus `(0,0,1)`; with the nucleus, a
/// maximal arc of degree `conics.len() + 1`. Conics are kept sorted by λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MathonArc {
    field: Field,
    conics: Vec<Conic>,
}

impl MathonArc {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn conics(&self) -> &[Conic] {
        &self.conics
    }

    pub fn degree(&self) -> usize {
        self.conics.len() + 1
    }

    pub fn lambdas(&self) -> Vec<Gf> {
        self.conics.iter().map(|c| c.lambda).collect()
    }

    pub fn conic_with_lambda(&self, lambda: Gf) -> Option<&Conic> {
        self.conics.iter().find(|c| c.lambda == lambda)
    }

    /// The nucleus together with the points of every conic.
    pub fn points(&self) -> BTreeSet<Point2> {
        let f = &self.field;
        let mut pts: BTreeSet<Point2> = self.conics.iter().flat_map(|c| c.points(f)).collect();
        pts.insert(Conic::nucleus(f));
        pts
    }

    /// Restriction to the conics whose λ lies in `lambdas`, which must be a
    /// subgroup (without 0) of this arc's λ-group.
    pub fn sub_arc(&self, lambdas: &[Gf]) -> Result<MathonArc> {
        if !self.field.is_subgroup_minus_zero(lambdas) {
            return Err(Error::NotSubgroup);
        }
        let conics = lambdas
            .iter()
            .map(|&l| self.conic_with_lambda(l).copied().ok_or(Error::NotSubgroup))
            .collect::<Result<Vec<_>>>()?;
        close_set(&self.field, &conics)
    }

    /// Whether every conic of `other` belongs to this arc.
    pub fn contains_arc(&self, other: &MathonArc) -> bool {
        self.field == other.field && other.conics.iter().all(|c| self.conics.contains(c))
    }

    /// Whether the arc is isomorphic to a Denniston arc, tested by all
    /// pairwise Denniston lines coinciding. For arcs whose common Denniston
    /// line is `z = 0` this is the same as the additive flock being linear;
    /// a generic degree-4 arc is of Denniston type with a different line.
    pub fn is_denniston_type(&self) -> bool {
        match crate::flock::denniston_lines(self) {
            Ok(dl) => dl.lines.len() == 1,
            Err(_) => true,
        }
    }
}

/// Points of an arc; see [`MathonArc::points`].
pub fn arc_points(m: &MathonArc) -> BTreeSet<Point2> {
    m.points()
}

/// Smallest closed superset of `seed`. Fails when closure produces two
/// different conics with the same λ, a degenerate composition, more than
/// q−1 conics, or two conics that meet.
pub fn close_set(f: &Field, seed: &[Conic]) -> Result<MathonArc> {
    if seed.is_empty() {
        return Err(Error::EmptySeed);
    }
    let limit = (f.q() - 1) as usize;
    let mut by_lambda: BTreeMap<Gf, Conic> = BTreeMap::new();
    let mut list: Vec<Conic> = Vec::new();
    let insert = |c: Conic, by_lambda: &mut BTreeMap<Gf, Conic>, list: &mut Vec<Conic>| match by_lambda
        .get(&c.lambda)
    {
        Some(old) if *old == c => Ok(()),
        Some(_) => Err(Error::LambdaCollision { lambda: c.lambda }),
        None => {
            by_lambda.insert(c.lambda, c);
            list.push(c);
            if list.len() > limit {
                Err(Error::ClosureTooLarge(limit as u32))
            } else {
                Ok(())
            }
        }
    };
    for c in seed {
        let c = Conic::new(f, c.alpha, c.beta, c.lambda)?;
        insert(c, &mut by_lambda, &mut list)?;
    }
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            let c = compose(f, &list[i], &list[j])?;
            insert(c, &mut by_lambda, &mut list)?;
        }
        i += 1;
    }
    let conics: Vec<Conic> = by_lambda.into_values().collect();
    check_pairwise_disjoint(f, &conics)?;
    Ok(MathonArc { field: f.clone(), conics })
}

fn check_pairwise_disjoint(f: &Field, conics: &[Conic]) -> Result<()> {
    let bits: Vec<PointBits> = conics.par_iter().map(|c| c.bits(f)).collect();
    for i in 0..conics.len() {
        for j in i + 1..conics.len() {
            if bits[i].intersects(&bits[j]) {
                return Err(Error::ConicsMeet { first: conics[i].lambda, second: conics[j].lambda });
            }
        }
    }
    Ok(())
}

/// The Denniston arc `{F(α,1,λ) : λ ∈ A}`; `A ∪ {0}` must be an additive
/// subgroup and `Tr(α) = 1`.
pub fn denniston_arc(f: &Field, alpha: Gf, a_set: &[Gf]) -> Result<MathonArc> {
    f.element(alpha.0)?;
    if f.trace(alpha) != 1 {
        return Err(Error::DennistonAlpha(alpha));
    }
    if !f.is_subgroup_minus_zero(a_set) {
        return Err(Error::NotSubgroup);
    }
    let mut conics = a_set.iter().map(|&l| Conic::new(f, alpha, Gf::ONE, l)).collect::<Result<Vec<_>>>()?;
    conics.sort_by_key(|c| c.lambda);
    Ok(MathonArc { field: f.clone(), conics })
}

/// The unique degree-4 Denniston arc containing two disjoint conics.
pub fn denniston_closure(f: &Field, c1: &Conic, c2: &Conic) -> Result<MathonArc> {
    if c1.lambda == c2.lambda {
        return Err(Error::EqualLambda(c1.lambda));
    }
    if !conics_disjoint(f, c1, c2) {
        return Err(Error::ConicsMeet { first: c1.lambda, second: c2.lambda });
    }
    close_set(f, &[*c1, *c2])
}

/// The degree-2d arc generated by `m` and a conic disjoint from it whose λ
/// lies outside the λ-group of `m`.
pub fn synthetic_extension(m: &MathonArc, c: &Conic) -> Result<MathonArc> {
    let f = &m.field;
    if m.conic_with_lambda(c.lambda).is_some() {
        return Err(Error::LambdaInGroup(c.lambda));
    }
    let bits = c.bits(f);
    for other in &m.conics {
        if bits.intersects(&other.bits(f)) {
            return Err(Error::ConicsMeet { first: other.lambda, second: c.lambda });
        }
    }
    let mut seed = m.conics.clone();
    seed.push(*c);
    let out = close_set(f, &seed)?;
    debug_assert_eq!(out.degree(), 2 * m.degree());
    Ok(out)
}

/// Per-line intersection counts of a point set, and the maximal-arc verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcReport {
    pub q: u32,
    pub degree: usize,
    pub size: usize,
    pub expected_size: usize,
    /// intersection size -> number of lines
    pub histogram: BTreeMap<usize, usize>,
    pub verdict: bool,
}

/// Checks that every line meets `points` in 0 or `d` points and that there
/// are exactly q(d−1)+d of them.
pub fn verify_maximal_arc(f: &Field, points: &BTreeSet<Point2>, d: usize) -> ArcReport {
    let q = f.q() as usize;
    let bits = PointBits::new(f, points.iter().copied());
    let histogram = projective::Line2::all(f)
        .par_iter()
        .map(|line| {
            let n = projective::points_on_line(f, line).iter().filter(|p| bits.contains(f, *p)).count();
            BTreeMap::from([(n, 1usize)])
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let expected_size = q * (d.max(1) - 1) + d;
    let verdict = points.len() == expected_size && histogram.keys().all(|&k| k == 0 || k == d);
    ArcReport { q: f.q(), degree: d, size: points.len(), expected_size, histogram, verdict }
}

/// Verifies an arc's own point set at its own degree.
pub fn verify_arc(m: &MathonArc) -> ArcReport {
    verify_maximal_arc(&m.field, &m.points(), m.degree())
}
