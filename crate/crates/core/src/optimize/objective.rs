//! Objective terms, weighted-sum scalarization and the area-based stand-in
//! for the normalized Q-factor.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genes::{Bits, Encoding, Gene, TriangleGene};
use crate::mesh::AreaVector;
use crate::metrics::MeshContext;

type TermFn = dyn Fn(&Bits) -> Result<f64> + Send + Sync;

/// A named scalar function of a gene, minimized by the optimizer.
#[derive(Clone)]
pub struct ObjectiveTerm {
    name: String,
    eval: Arc<TermFn>,
}

impl ObjectiveTerm {
    pub fn new<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&Bits) -> Result<f64> + Send + Sync + 'static,
    {
        ObjectiveTerm {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluate(&self, gene: &Bits) -> Result<f64> {
        (self.eval)(gene)
    }
}

impl fmt::Debug for ObjectiveTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveTerm").field("name", &self.name).finish()
    }
}

/// Terms paired with non-negative weights.
#[derive(Debug, Clone)]
pub struct ObjectiveSpec {
    terms: Vec<ObjectiveTerm>,
    weights: Vec<f64>,
}

impl ObjectiveSpec {
    pub fn new(terms: Vec<ObjectiveTerm>, weights: Vec<f64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Objective("at least one term is required".into()));
        }
        if terms.len() != weights.len() {
            return Err(Error::Objective(format!(
                "{} terms but {} weights",
                terms.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Objective(format!(
                "weights must be finite and non-negative, got {w}"
            )));
        }
        Ok(ObjectiveSpec { terms, weights })
    }

    /// A single term with weight 1.
    pub fn single(term: ObjectiveTerm) -> Self {
        ObjectiveSpec {
            terms: vec![term],
            weights: vec![1.0],
        }
    }

    pub fn terms(&self) -> &[ObjectiveTerm] {
        &self.terms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn evaluate_terms(&self, gene: &Bits) -> Result<Vec<f64>> {
        self.terms.iter().map(|t| t.evaluate(gene)).collect()
    }
}

/// `Σ_i w_i · term_i(gene)`. Zero-weight terms are skipped.
pub fn scalarize(spec: &ObjectiveSpec, gene: &Bits) -> Result<f64> {
    let mut total = 0.0;
    for (term, &w) in spec.terms.iter().zip(&spec.weights) {
        if w != 0.0 {
            total += w * term.evaluate(gene)?;
        }
    }
    Ok(total)
}

/// Area-only stand-in for `Q / Q_lb`.
///
/// `(‖a‖₁ / max(aᵀt, ‖a‖₁ / T))^{3/2}`: with `Q ∝ (ka)⁻³` and an effective
/// size growing like the square root of the metallized area. The value is 1
/// for a fully metallized region and grows as material is removed; the floor
/// at one triangle's worth of average area keeps it finite for empty genes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SurrogateQ;

impl SurrogateQ {
    pub fn evaluate(&self, t: &TriangleGene, a: &AreaVector) -> Result<f64> {
        Error::check_len(a.len(), t.len())?;
        if a.is_empty() {
            return Err(Error::NoTriangles);
        }
        let total = a.total();
        let floor = total / a.len() as f64;
        let covered: f64 = t.bits().iter_ones().map(|m| a.as_slice()[m]).fold(0.0, |s, x| s + x);
        Ok((total / covered.max(floor)).powf(1.5))
    }
}

/// Named objective terms available to configuration files and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    Surrogate,
    RArea,
    /// `1 − r_area`, to drive designs toward full coverage with a non-negative weight.
    OneMinusRArea,
    RPoint,
    RHom,
    RSlot,
}

impl TermKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TermKind::Surrogate => "surrogate",
            TermKind::RArea => "r_area",
            TermKind::OneMinusRArea => "one_minus_r_area",
            TermKind::RPoint => "r_point",
            TermKind::RHom => "r_hom",
            TermKind::RSlot => "r_slot",
        }
    }

    /// Binds the term to a mesh and gene encoding.
    pub fn build(self, ctx: Arc<MeshContext>, encoding: Encoding) -> Result<ObjectiveTerm> {
        if self == TermKind::RSlot && encoding != Encoding::Basis {
            return Err(Error::Objective("r_slot requires the basis encoding".into()));
        }
        let gene = move |bits: &Bits| Gene::from_bits(encoding, bits.clone());
        let term = match self {
            TermKind::Surrogate => ObjectiveTerm::new(self.as_str(), move |b| {
                let t = ctx.enabled_triangles(&gene(b))?;
                SurrogateQ.evaluate(&t, ctx.areas())
            }),
            TermKind::RArea => {
                ObjectiveTerm::new(self.as_str(), move |b| Ok(ctx.r_area(&gene(b))?.value))
            }
            TermKind::OneMinusRArea => {
                ObjectiveTerm::new(self.as_str(), move |b| Ok(1.0 - ctx.r_area(&gene(b))?.value))
            }
            TermKind::RPoint => {
                ObjectiveTerm::new(self.as_str(), move |b| Ok(ctx.r_point(&gene(b))?.value))
            }
            TermKind::RHom => {
                ObjectiveTerm::new(self.as_str(), move |b| Ok(ctx.r_hom(&gene(b))?.value))
            }
            TermKind::RSlot => ObjectiveTerm::new(self.as_str(), move |b| {
                Error::check_len(ctx.basis_count(), b.len())?;
                Ok(ctx.r_slot(&crate::genes::BasisGene::new(b.clone()))?.value)
            }),
        };
        Ok(term)
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TermKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_owned()))
            .map_err(|_| Error::Config(format!("unknown objective term `{s}`")))
    }
}
