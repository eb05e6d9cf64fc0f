//! Degree-2d Mathon arcs containing a degree-d Denniston arc.
//!
//! Fix an additive group `H ∋ 1` of order `d` and `λ_d ∉ H`. The Denniston
//! arc on `H` consists of the conics `(1, 1, λ²)` for `λ ∈ H∖{0}`; the new
//! conic is `C = (1, β², λ_d²)` with `β = (λ_d+1)/ρ + 1`. Intersecting `C`
//! with `(1, 1, λ²)` leads to `x² + x + 1 + (c_λ μ)² = 0` where `μ = 1/ρ` and
//! `c_λ = λ(λ_d+1)/(λ_d+λ)`, so the two conics are disjoint exactly when
//!
//! ```text
//! Tr(c_λ μ) = ε,   ε = 0 for odd h, ε = 1 for even h.
//! ```
//!
//! Each condition is GF(2)-affine in `μ`; the system is solved both by
//! scanning every `ρ` and by Gaussian elimination on the trace functionals.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::gf2;
use crate::mathon::{denniston_arc, synthetic_extension, Conic, MathonArc};

/// `H`, `λ_d` and `G = H ∪ (H + λ_d)`, all as sorted element lists.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub h_group: Vec<Gf>,
    pub lambda_d: Gf,
    pub g_group: Vec<Gf>,
}

impl GroupSpec {
    /// `H` is the span of `generators`, which must contain 1.
    pub fn new(f: &Field, generators: &[Gf], lambda_d: Gf) -> Result<GroupSpec> {
        for g in generators {
            f.element(g.0)?;
        }
        f.element(lambda_d.0)?;
        let h_group = f.additive_span(generators);
        if !h_group.contains(&Gf::ONE) {
            return Err(Error::BadGroup);
        }
        if h_group.contains(&lambda_d) {
            return Err(Error::LambdaDInH(lambda_d));
        }
        let mut with_d = generators.to_vec();
        with_d.push(lambda_d);
        let g_group = f.additive_span(&with_d);
        Ok(GroupSpec { h_group, lambda_d, g_group })
    }

    /// `|H|`.
    pub fn d(&self) -> usize {
        self.h_group.len()
    }

    /// `H∖{0}`.
    pub fn h_nonzero(&self) -> &[Gf] {
        &self.h_group[1..]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceCondition {
    pub lambda: Gf,
    /// `c_λ = λ(λ_d+1)/(λ_d+λ)`.
    pub coeff: Gf,
    pub epsilon: u8,
}

/// One condition `Tr(c_λ μ) = ε` per `λ ∈ H∖{0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceConditionSystem {
    pub field: Field,
    pub lambda_d: Gf,
    pub conditions: Vec<TraceCondition>,
    pub epsilon: u8,
}

/// `1 + Tr(1)`: 0 for odd h, 1 for even h.
pub fn parity_epsilon(f: &Field) -> u8 {
    1 ^ f.trace(Gf::ONE)
}

pub fn build_trace_system(f: &Field, spec: &GroupSpec) -> Result<TraceConditionSystem> {
    let ld = spec.lambda_d;
    if spec.h_group.contains(&ld) {
        return Err(Error::LambdaDInH(ld));
    }
    let epsilon = parity_epsilon(f);
    let conditions = spec
        .h_nonzero()
        .iter()
        .map(|&lambda| {
            let coeff = f.div(f.mul(lambda, ld + Gf::ONE), ld + lambda)?;
            Ok(TraceCondition { lambda, coeff, epsilon })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceConditionSystem { field: f.clone(), lambda_d: ld, conditions, epsilon })
}

impl TraceConditionSystem {
    /// Whether `μ` satisfies every condition.
    pub fn holds_for_mu(&self, mu: Gf) -> bool {
        let f = &self.field;
        self.conditions.iter().all(|c| f.trace(f.mul(c.coeff, mu)) == c.epsilon)
    }

    /// Rows `(functional, ε)` with bit `i` of the functional equal to
    /// `Tr(c_λ x^i)`.
    pub fn rows(&self) -> Vec<(u32, bool)> {
        let f = &self.field;
        self.conditions
            .iter()
            .map(|c| {
                let functional = (0..f.h())
                    .filter(|&i| f.trace(f.mul(c.coeff, Gf(1 << i))) == 1)
                    .fold(0u32, |acc, i| acc | 1 << i);
                (functional, c.epsilon == 1)
            })
            .collect()
    }
}

/// Every nonzero `ρ` whose `μ = 1/ρ` satisfies the system, by direct evaluation.
pub fn scan_solutions(sys: &TraceConditionSystem) -> Vec<Gf> {
    let f = &sys.field;
    let mut out: Vec<Gf> =
        f.nonzero().filter(|&rho| sys.holds_for_mu(f.inv(rho).expect("nonzero"))).collect();
    out.sort_unstable();
    out
}

/// The same set via Gaussian elimination in `μ`, dropping `μ = 0`.
pub fn linear_solutions(sys: &TraceConditionSystem) -> Vec<Gf> {
    let f = &sys.field;
    let reduced = gf2::row_reduce(&sys.rows(), f.h());
    let mut out: Vec<Gf> = reduced
        .solutions()
        .into_iter()
        .filter(|&mu| mu != 0)
        .map(|mu| f.inv(Gf(mu)).expect("nonzero"))
        .collect();
    out.sort_unstable();
    out
}

/// `β = (λ_d+1)/ρ + 1`.
pub fn beta_for(f: &Field, lambda_d: Gf, rho: Gf) -> Result<Gf> {
    if rho.is_zero() {
        return Err(Error::ZeroRho);
    }
    Ok(f.div(lambda_d + Gf::ONE, rho)? + Gf::ONE)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSolution {
    /// `ρ` satisfying every trace condition.
    pub prefilter: Vec<Gf>,
    /// Those with `Tr(β) = 1`.
    pub valid: Vec<Gf>,
    /// `prefilter.len() - valid.len()`.
    pub removed: usize,
}

/// Solves by both routes, fails if they differ, then applies `Tr(β) = 1`.
pub fn solve_trace_system(sys: &TraceConditionSystem) -> Result<TraceSolution> {
    let prefilter = scan_solutions(sys);
    if prefilter != linear_solutions(sys) {
        return Err(Error::SolverMismatch);
    }
    let f = &sys.field;
    let valid: Vec<Gf> = prefilter
        .iter()
        .copied()
        .filter(|&rho| f.trace(beta_for(f, sys.lambda_d, rho).expect("nonzero")) == 1)
        .collect();
    Ok(TraceSolution { removed: prefilter.len() - valid.len(), prefilter, valid })
}

/// The squared form `Tr[1 + λ²(λ_d+1)²/(ρ²(λ_d+λ)²)] = 1` for one `λ`.
pub fn squared_condition_holds(f: &Field, lambda: Gf, lambda_d: Gf, rho: Gf) -> Result<bool> {
    let num = f.square(f.mul(lambda, lambda_d + Gf::ONE));
    let den = f.square(f.mul(rho, lambda_d + lambda));
    Ok(f.trace(Gf::ONE + f.div(num, den)?) == 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankAnalysis {
    pub rank: usize,
    /// Solutions `μ` of the affine system, `μ = 0` included: 0 or `2^(h-rank)`.
    pub solution_count: u64,
    /// Whether the functionals are linearly independent.
    pub independent: bool,
}

pub fn rank_analysis(sys: &TraceConditionSystem) -> RankAnalysis {
    let reduced = gf2::row_reduce(&sys.rows(), sys.field.h());
    RankAnalysis {
        rank: reduced.rank(),
        solution_count: reduced.solution_count(),
        independent: reduced.rank() == sys.conditions.len(),
    }
}

/// The Denniston arc `{(1, 1, λ²) : λ ∈ H∖{0}}`.
pub fn denniston_base(f: &Field, spec: &GroupSpec) -> Result<MathonArc> {
    if f.trace(Gf::ONE) != 1 {
        return Err(Error::EvenDegreeBase(f.h()));
    }
    let squares: Vec<Gf> = spec.h_nonzero().iter().map(|&l| f.square(l)).collect();
    denniston_arc(f, Gf::ONE, &squares)
}

/// `C = (1, β², λ_d²)`.
pub fn extension_conic(f: &Field, spec: &GroupSpec, rho: Gf) -> Result<Conic> {
    let beta = beta_for(f, spec.lambda_d, rho)?;
    if f.trace(beta) != 1 {
        return Err(Error::BetaTrace { rho, beta });
    }
    Conic::new(f, Gf::ONE, f.square(beta), f.square(spec.lambda_d))
}

/// The degree-2d arc generated by the Denniston base on `H` and the conic
/// determined by `ρ`.
pub fn construct_extension_arc(f: &Field, spec: &GroupSpec, rho: Gf) -> Result<MathonArc> {
    f.element(rho.0)?;
    if rho.is_zero() {
        return Err(Error::ZeroRho);
    }
    let base = denniston_base(f, spec)?;
    let conic = extension_conic(f, spec, rho)?;
    for other in base.conics() {
        if !crate::mathon::conics_disjoint(f, other, &conic) {
            return Err(Error::RhoRejected { rho, lambda: other.lambda });
        }
    }
    synthetic_extension(&base, &conic)
}

/// `2^(⌊log₂ h⌋ + 1)`.
pub fn guaranteed_degree(h: u32) -> u64 {
    assert!(h >= 1, "h must be positive");
    1u64 << (h.ilog2() + 1)
}

/// Every additive subgroup of order `d` containing 1, as sorted element
/// lists in lexicographic order.
pub fn subgroups_containing_one(f: &Field, d: usize) -> Vec<Vec<Gf>> {
    if !d.is_power_of_two() || d < 2 || d > f.q() as usize {
        return Vec::new();
    }
    let mut level: BTreeSet<Vec<Gf>> = BTreeSet::from([vec![Gf::ZERO, Gf::ONE]]);
    while level.first().is_some_and(|g| g.len() < d) {
        level = level
            .par_iter()
            .flat_map_iter(|group| {
                let members: BTreeSet<Gf> = group.iter().copied().collect();
                f.elements()
                    .filter(move |x| !members.contains(x))
                    .map(|x| {
                        let mut gens = group.clone();
                        gens.push(x);
                        f.additive_span(&gens)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    level.into_iter().collect()
}

/// All `(H, λ_d)` with `|H| = d`, ordered by `H` then `λ_d`.
pub fn enumerate_group_specs(f: &Field, d: usize) -> Vec<GroupSpec> {
    subgroups_containing_one(f, d)
        .into_iter()
        .flat_map(|h_group| {
            f.elements()
                .filter(|x| !h_group.contains(x))
                .map(|ld| GroupSpec::new(f, &h_group, ld).expect("valid by construction"))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Outcome of the search for one `(H, λ_d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub spec: GroupSpec,
    pub epsilon: u8,
    pub rank: RankAnalysis,
    pub solution: TraceSolution,
    /// The first valid `ρ` in the requested order that yields an arc, when
    /// one exists and the Denniston base is defined.
    pub example_rho: Option<Gf>,
    pub example_arc: Option<MathonArc>,
}

/// Order in which candidate `ρ` values are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedOrder {
    #[default]
    Asc,
    Desc,
}

impl SeedOrder {
    pub fn arrange<T: Ord + Copy>(self, items: &[T]) -> Vec<T> {
        let mut v = items.to_vec();
        v.sort_unstable();
        if self == SeedOrder::Desc {
            v.reverse();
        }
        v
    }

    fn arrange_specs(self, mut specs: Vec<GroupSpec>) -> Vec<GroupSpec> {
        if self == SeedOrder::Desc {
            specs.reverse();
        }
        specs
    }
}

pub fn search_one(f: &Field, spec: &GroupSpec, order: SeedOrder, build_arc: bool) -> Result<SearchOutcome> {
    let sys = build_trace_system(f, spec)?;
    let solution = solve_trace_system(&sys)?;
    let example = if build_arc && f.trace(Gf::ONE) == 1 {
        order
            .arrange(&solution.valid)
            .into_iter()
            .find_map(|rho| construct_extension_arc(f, spec, rho).ok().map(|m| (rho, m)))
    } else {
        None
    };
    let (example_rho, example_arc) = example.unzip();
    Ok(SearchOutcome {
        spec: spec.clone(),
        epsilon: sys.epsilon,
        rank: rank_analysis(&sys),
        solution,
        example_rho,
        example_arc,
    })
}

/// [`search_one`] over every `(H, λ_d)` with `|H| = d`, in canonical order.
pub fn search_all(f: &Field, d: usize, order: SeedOrder, build_arc: bool) -> Result<Vec<SearchOutcome>> {
    let specs = order.arrange_specs(enumerate_group_specs(f, d));
    specs.par_iter().map(|s| search_one(f, s, order, build_arc)).collect()
}

/// The `λ ∈ H∖{0}` for which the quadrics `(1, β², λ_d²)` and `(1, 1, λ²)`
/// share a point. Works for any `h`, degenerate quadrics included.
pub fn meeting_base_conics(f: &Field, spec: &GroupSpec, rho: Gf) -> Result<Vec<Gf>> {
    let beta = beta_for(f, spec.lambda_d, rho)?;
    let c_points = crate::mathon::quadric_points(f, Gf::ONE, f.square(beta), f.square(spec.lambda_d));
    let c_set: BTreeSet<_> = c_points.into_iter().collect();
    Ok(spec
        .h_nonzero()
        .iter()
        .filter(|&&l| {
            crate::mathon::quadric_points(f, Gf::ONE, Gf::ONE, f.square(l)).iter().any(|p| c_set.contains(p))
        })
        .copied()
        .collect())
}
