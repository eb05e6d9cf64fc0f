//! JSON documents for arcs, flocks and search reports.
//!
//! Field elements are plain integers (bit `i` is the coefficient of `x^i`),
//! points and planes are integer coordinate arrays. Unknown keys are ignored
//! on input, so a document carrying an extra `verification` object still
//! parses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::flock::PartialFlock;
use crate::mathon::{close_set, Conic, MathonArc};
use crate::projective::Plane3;
use crate::search::SearchOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicJson {
    pub alpha: u32,
    pub beta: u32,
    pub lambda: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub field: FieldSpec,
    pub conics: Vec<ConicJson>,
    pub degree: usize,
}

impl ArcJson {
    pub fn from_arc(m: &MathonArc) -> ArcJson {
        ArcJson {
            field: m.field().spec(),
            conics: m
                .conics()
                .iter()
                .map(|c| ConicJson { alpha: c.alpha.0, beta: c.beta.0, lambda: c.lambda.0 })
                .collect(),
            degree: m.degree(),
        }
    }

    /// Rebuilds the arc; the conic set must already be closed.
    pub fn to_arc(&self) -> Result<MathonArc> {
        let f = Field::from_spec(self.field)?;
        let conics = self
            .conics
            .iter()
            .map(|c| Conic::new(&f, f.element(c.alpha)?, f.element(c.beta)?, f.element(c.lambda)?))
            .collect::<Result<Vec<_>>>()?;
        let arc = close_set(&f, &conics)?;
        if arc.degree() != conics.len() + 1 {
            return Err(Error::Schema(format!(
                "conic set is not closed: its closure has degree {}",
                arc.degree()
            )));
        }
        if arc.degree() != self.degree {
            return Err(Error::Schema(format!("degree {} but {} conics", self.degree, conics.len())));
        }
        Ok(arc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlockJson {
    pub field: FieldSpec,
    pub planes: Vec<[u32; 4]>,
    #[serde(rename = "B", default)]
    pub base: Vec<u32>,
    #[serde(default)]
    pub f: Vec<u32>,
    #[serde(default)]
    pub g: Vec<u32>,
    #[serde(default)]
    pub additive: Option<bool>,
    #[serde(default)]
    pub linear: Option<bool>,
}

impl FlockJson {
    /// `B`, `f`, `g` are listed per plane, in plane order.
    pub fn from_flock(flock: &PartialFlock) -> FlockJson {
        let values = flock.base_values();
        let class = flock.classify();
        FlockJson {
            field: flock.field().spec(),
            planes: flock.planes().iter().map(|p| p.plane.to_ints()).collect(),
            base: values.iter().map(|v| v.t.0).collect(),
            f: values.iter().map(|v| v.f.0).collect(),
            g: values.iter().map(|v| v.g.0).collect(),
            additive: Some(class.additive),
            linear: Some(class.linear),
        }
    }

    /// Rebuilds the flock from `planes`. `B`, `f`, `g` and the flags are
    /// optional, but when present they must agree with the planes.
    pub fn to_flock(&self) -> Result<PartialFlock> {
        let fld = Field::from_spec(self.field)?;
        let planes = self
            .planes
            .iter()
            .map(|&p| {
                for c in p {
                    fld.element(c)?;
                }
                Plane3::from_ints(&fld, p)
            })
            .collect::<Result<Vec<_>>>()?;
        let flock = PartialFlock::new(&fld, planes)?;
        let expect = FlockJson::from_flock(&flock);
        let check = |name: &str, given: &[u32], want: &[u32]| {
            if !given.is_empty() && given != want {
                return Err(Error::Schema(format!("{name} does not match the planes")));
            }
            Ok(())
        };
        check("B", &self.base, &expect.base)?;
        check("f", &self.f, &expect.f)?;
        check("g", &self.g, &expect.g)?;
        for (name, given, want) in
            [("additive", self.additive, expect.additive), ("linear", self.linear, expect.linear)]
        {
            if given.is_some() && given != want {
                return Err(Error::Schema(format!("{name} flag does not match the planes")));
            }
        }
        Ok(flock)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub q: u32,
    #[serde(rename = "H")]
    pub h_group: Vec<u32>,
    pub lambda_d: u32,
    pub epsilon: u8,
    pub rank: usize,
    pub independent: bool,
    /// Affine solutions in `μ`, zero included.
    pub solution_count: u64,
    pub num_rho_prefilter: usize,
    pub num_rho_valid: usize,
    /// Pre-filter solutions discarded because `Tr(β) = 0`.
    pub num_rho_beta_rejected: usize,
    pub example_rho: Option<u32>,
    pub example_arc: Option<ArcJson>,
}

impl SearchReport {
    pub fn from_outcome(f: &Field, out: &SearchOutcome) -> SearchReport {
        SearchReport {
            q: f.q(),
            h_group: out.spec.h_group.iter().map(|g| g.0).collect(),
            lambda_d: out.spec.lambda_d.0,
            epsilon: out.epsilon,
            rank: out.rank.rank,
            independent: out.rank.independent,
            solution_count: out.rank.solution_count,
            num_rho_prefilter: out.solution.prefilter.len(),
            num_rho_valid: out.solution.valid.len(),
            num_rho_beta_rejected: out.solution.removed,
            example_rho: out.example_rho.map(|r| r.0),
            example_arc: out.example_arc.as_ref().map(ArcJson::from_arc),
        }
    }
}
