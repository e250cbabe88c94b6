//! Shape-regularity parameters for triangle and basis-function genes.
//!
//! Counts are exact integers, homogeneity rows are exact rationals, and only
//! the final ratios are converted to `f64`. Degenerate denominators yield 0
//! and raise a flag instead of failing.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genes::{
    boolean_round, gene_to_triangles, heaviside, triangles_to_gene, xor, BasisGene, Bits,
    Encoding, Gene, TriangleGene,
};
use crate::graph::{
    build_graph, homogeneity_matrix, incidence_matrix, line_graph, node_edge_incidence,
    node_triangle_incidence, MeshGraph,
};
use crate::mesh::{triangle_areas, AreaVector, Mesh};
use crate::sparse::{IntMatrix, RatioMatrix};

/// A normalized parameter together with a degenerate-denominator marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    pub degenerate: bool,
}

impl MetricValue {
    fn ratio(numer: f64, denom: f64) -> Self {
        if denom > 0.0 {
            MetricValue {
                value: numer / denom,
                degenerate: false,
            }
        } else {
            MetricValue {
                value: 0.0,
                degenerate: true,
            }
        }
    }
}

/// Per-node count `p_n` of enabled triangles minus enabled basis functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointVector(pub Vec<i64>);

impl PointVector {
    /// `‖𝓗{p − 2p₀}‖₁`: nodes with `p_n ≥ 2`.
    pub fn problematic_count(&self) -> usize {
        let shifted: Vec<i64> = self.0.iter().map(|p| p - 2).collect();
        heaviside(&shifted).count_ones()
    }

    /// `‖𝓗{−p}‖₁`: nodes with `p_n ≤ 0`.
    pub fn non_positive_count(&self) -> usize {
        let neg: Vec<i64> = self.0.iter().map(|p| -p).collect();
        heaviside(&neg).count_ones()
    }

    /// `‖¬B{p}‖₁`: nodes with `p_n = 0`.
    pub fn zero_count(&self) -> usize {
        self.0.len() - boolean_round(&self.0).count_ones()
    }
}

/// Point-connection ratio with its raw counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointStats {
    pub value: f64,
    pub degenerate: bool,
    pub problematic: usize,
    /// Denominator: nodes that are neither fully surrounded nor untouched.
    pub active: usize,
}

/// Slot ratio with its raw count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotStats {
    pub value: f64,
    pub degenerate: bool,
    pub slots: usize,
}

/// `r_area(t) = aᵀt / ‖a‖₁`.
pub fn r_area_t(t: &TriangleGene, a: &AreaVector) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::NoTriangles);
    }
    Error::check_len(a.len(), t.len())?;
    Ok(enabled_area(t, a) / a.total())
}

fn enabled_area(t: &TriangleGene, a: &AreaVector) -> f64 {
    t.bits().iter_ones().map(|m| a.as_slice()[m]).fold(0.0, |s, x| s + x)
}

/// `r_area(g) = aᵀB{Mg} / aᵀB{Mg₀}`.
pub fn r_area_g(g: &BasisGene, a: &AreaVector, incidence: &IntMatrix) -> Result<MetricValue> {
    if a.is_empty() {
        return Err(Error::NoTriangles);
    }
    Error::check_len(a.len(), incidence.rows())?;
    let t = gene_to_triangles(g, incidence)?;
    let reachable = gene_to_triangles(&BasisGene::ones(incidence.cols()), incidence)?;
    Ok(MetricValue::ratio(enabled_area(&t, a), enabled_area(&reachable, a)))
}

/// `p = M_nt t − M_nb g`.
pub fn point_vector(
    t: &TriangleGene,
    g: &BasisGene,
    node_triangle: &IntMatrix,
    node_edge: &IntMatrix,
) -> Result<PointVector> {
    Error::check_len(node_triangle.cols(), t.len())?;
    Error::check_len(node_edge.cols(), g.len())?;
    Error::check_len(node_triangle.rows(), node_edge.rows())?;
    let tri = node_triangle.mul_vec(&t.to_ints());
    let basis = node_edge.mul_vec(&g.to_ints());
    Ok(PointVector(tri.iter().zip(&basis).map(|(a, b)| a - b).collect()))
}

/// Point vector of a triangle gene; the basis gene is rebuilt from `t`.
pub fn point_vector_t(
    t: &TriangleGene,
    incidence: &IntMatrix,
    node_triangle: &IntMatrix,
    node_edge: &IntMatrix,
) -> Result<PointVector> {
    let g = triangles_to_gene(t, incidence)?;
    point_vector(t, &g, node_triangle, node_edge)
}

/// Point vector of a basis gene, evaluated on its slot-free reconstruction
/// `t = B{Mg}`, `g' = ¬B{Mᵀt − 2g₀}`.
pub fn point_vector_g(
    g: &BasisGene,
    incidence: &IntMatrix,
    node_triangle: &IntMatrix,
    node_edge: &IntMatrix,
) -> Result<PointVector> {
    let t = gene_to_triangles(g, incidence)?;
    let rebuilt = triangles_to_gene(&t, incidence)?;
    point_vector(&t, &rebuilt, node_triangle, node_edge)
}

/// `r_point(t) = ‖𝓗{p − 2p₀}‖₁ / (N − ‖𝓗{−p}‖₁)`.
pub fn r_point_t(
    t: &TriangleGene,
    incidence: &IntMatrix,
    node_triangle: &IntMatrix,
    node_edge: &IntMatrix,
) -> Result<PointStats> {
    let p = point_vector_t(t, incidence, node_triangle, node_edge)?;
    Ok(point_stats(&p, p.non_positive_count()))
}

/// `r_point(g) = ‖𝓗{p − 2p₀}‖₁ / (N − ‖¬B{p}‖₁)`.
pub fn r_point_g(
    g: &BasisGene,
    incidence: &IntMatrix,
    node_triangle: &IntMatrix,
    node_edge: &IntMatrix,
) -> Result<PointStats> {
    let p = point_vector_g(g, incidence, node_triangle, node_edge)?;
    Ok(point_stats(&p, p.zero_count()))
}

fn point_stats(p: &PointVector, excluded: usize) -> PointStats {
    let problematic = p.problematic_count();
    let active = p.0.len() - excluded;
    let MetricValue { value, degenerate } = MetricValue::ratio(problematic as f64, active as f64);
    PointStats {
        value,
        degenerate,
        problematic,
        active,
    }
}

/// `Σ_m min_x |2 H_m x − 1|` over Boolean `x`.
///
/// For a row with `c` equal weights `w` the row sum `H_m x` can only take the
/// values `j·w`, `j = 0..=c`, so the minimum is a scan over `j`.
pub fn hom_normalization(h: &RatioMatrix) -> Ratio<i64> {
    let one = Ratio::from_integer(1);
    let mut rows: Vec<(usize, Ratio<i64>)> = vec![(0, Ratio::from_integer(0)); h.rows()];
    for &(r, _, w) in h.entries() {
        rows[r].0 += 1;
        rows[r].1 = w;
    }
    let mut acc = RationalSum::default();
    for (count, w) in rows {
        let best = (0..=count as i64)
            .map(|j| abs(w * 2 * j - one))
            .min()
            .expect("range is non-empty");
        acc.add(best);
    }
    acc.total()
}

/// `(n − ‖2Hx − 1‖₁) / (n − Σ_m min |2H_m x − 1|)` on any homogeneity matrix.
pub fn r_hom(x: &Bits, h: &RatioMatrix) -> Result<MetricValue> {
    Error::check_len(h.cols(), x.len())?;
    let norm = hom_normalization(h);
    Ok(r_hom_with_normalization(x, h, norm))
}

pub(crate) fn r_hom_with_normalization(x: &Bits, h: &RatioMatrix, norm: Ratio<i64>) -> MetricValue {
    let one = Ratio::from_integer(1);
    let mut row_sums = vec![Ratio::from_integer(0); h.rows()];
    for &(r, c, w) in h.entries() {
        if x[c] {
            row_sums[r] += w;
        }
    }
    let mut spread = RationalSum::default();
    for s in row_sums {
        spread.add(abs(s * 2 - one));
    }
    let n = Ratio::from_integer(h.rows() as i64);
    let numer = n - spread.total();
    let denom = n - norm;
    if *denom.numer() <= 0 {
        return MetricValue {
            value: 0.0,
            degenerate: true,
        };
    }
    let r = numer / denom;
    MetricValue {
        value: *r.numer() as f64 / *r.denom() as f64,
        degenerate: false,
    }
}

/// `r_hom(t)` with `H` built on the mesh graph.
pub fn r_hom_t(t: &TriangleGene, h: &RatioMatrix) -> Result<MetricValue> {
    r_hom(t.bits(), h)
}

/// `r_hom(g)` with `H` built on the line graph.
pub fn r_hom_g(g: &BasisGene, h_line: &RatioMatrix) -> Result<MetricValue> {
    r_hom(g.bits(), h_line)
}

/// `‖g ⊕ ¬B{MᵀB{Mg} − 2g₀}‖₁`: disabled basis functions between two enabled
/// triangles.
pub fn slot_count(g: &BasisGene, incidence: &IntMatrix) -> Result<usize> {
    let t = gene_to_triangles(g, incidence)?;
    let rebuilt = triangles_to_gene(&t, incidence)?;
    Ok(xor(g.bits(), rebuilt.bits())?.count_ones())
}

/// `slot_count / (B − ⌊T/2⌋)`, not clamped to 1.
pub fn r_slot(g: &BasisGene, incidence: &IntMatrix) -> Result<SlotStats> {
    let slots = slot_count(g, incidence)?;
    let triangles = incidence.rows() as i64;
    let basis = incidence.cols() as i64;
    let MetricValue { value, degenerate } =
        MetricValue::ratio(slots as f64, (basis - triangles / 2) as f64);
    Ok(SlotStats {
        value,
        degenerate,
        slots,
    })
}

fn abs(x: Ratio<i64>) -> Ratio<i64> {
    if x < Ratio::from_integer(0) {
        -x
    } else {
        x
    }
}

/// Exact sum of small-denominator rationals, grouped by denominator so that
/// long sums never overflow through repeated cross-multiplication.
#[derive(Default)]
struct RationalSum(BTreeMap<i64, i64>);

impl RationalSum {
    fn add(&mut self, x: Ratio<i64>) {
        *self.0.entry(*x.denom()).or_default() += *x.numer();
    }

    fn total(&self) -> Ratio<i64> {
        self.0
            .iter()
            .fold(Ratio::from_integer(0), |acc, (&d, &n)| acc + Ratio::new(n, d))
    }
}

/// Degenerate situations reported alongside a [`MetricsReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    AreaDegenerate,
    PointDegenerate,
    HomDegenerate,
    SlotDegenerate,
    /// `r_slot` exceeded 1: the matching-based denominator underestimates the
    /// maximum slot count on this mesh.
    SlotAboveOne,
}

/// All shape parameters of one gene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema: u32,
    pub encoding: Encoding,
    pub r_area: f64,
    pub r_point: f64,
    pub r_hom: f64,
    pub r_slot: Option<f64>,
    pub problematic_nodes: usize,
    pub slots: Option<usize>,
    pub flags: Vec<Flag>,
}

/// Everything derived from a mesh that metric evaluation needs, built once.
#[derive(Debug, Clone)]
pub struct MeshContext {
    mesh: Mesh,
    areas: AreaVector,
    graph: MeshGraph,
    line_graph: MeshGraph,
    incidence: IntMatrix,
    node_triangle: IntMatrix,
    node_edge: IntMatrix,
    homogeneity: RatioMatrix,
    line_homogeneity: RatioMatrix,
    hom_norm: Ratio<i64>,
    line_hom_norm: Ratio<i64>,
}

impl MeshContext {
    pub fn new(mesh: Mesh) -> Result<Self> {
        let areas = triangle_areas(&mesh)?;
        let graph = build_graph(&mesh);
        let line = line_graph(&graph);
        let incidence = incidence_matrix(&graph);
        let node_triangle = node_triangle_incidence(&mesh);
        let node_edge = node_edge_incidence(&mesh, &graph)?;
        let homogeneity = homogeneity_matrix(&graph);
        let line_homogeneity = homogeneity_matrix(&line);
        let hom_norm = hom_normalization(&homogeneity);
        let line_hom_norm = hom_normalization(&line_homogeneity);
        Ok(MeshContext {
            mesh,
            areas,
            graph,
            line_graph: line,
            incidence,
            node_triangle,
            node_edge,
            homogeneity,
            line_homogeneity,
            hom_norm,
            line_hom_norm,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn areas(&self) -> &AreaVector {
        &self.areas
    }

    pub fn graph(&self) -> &MeshGraph {
        &self.graph
    }

    pub fn line_graph(&self) -> &MeshGraph {
        &self.line_graph
    }

    pub fn incidence(&self) -> &IntMatrix {
        &self.incidence
    }

    pub fn node_triangle(&self) -> &IntMatrix {
        &self.node_triangle
    }

    pub fn node_edge(&self) -> &IntMatrix {
        &self.node_edge
    }

    pub fn homogeneity(&self) -> &RatioMatrix {
        &self.homogeneity
    }

    pub fn line_homogeneity(&self) -> &RatioMatrix {
        &self.line_homogeneity
    }

    /// Triangle count `T`.
    pub fn triangle_count(&self) -> usize {
        self.mesh.triangle_count()
    }

    /// Basis-function count `B`.
    pub fn basis_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn gene_len(&self, encoding: Encoding) -> usize {
        match encoding {
            Encoding::Triangle => self.triangle_count(),
            Encoding::Basis => self.basis_count(),
        }
    }

    pub fn check_gene(&self, gene: &Gene) -> Result<()> {
        Error::check_len(self.gene_len(gene.encoding()), gene.bits().len())
    }

    /// Triangles enabled by a gene (`t` itself or `B{Mg}`).
    pub fn enabled_triangles(&self, gene: &Gene) -> Result<TriangleGene> {
        self.check_gene(gene)?;
        match gene {
            Gene::Triangle(t) => Ok(t.clone()),
            Gene::Basis(g) => gene_to_triangles(g, &self.incidence),
        }
    }

    pub fn r_area(&self, gene: &Gene) -> Result<MetricValue> {
        self.check_gene(gene)?;
        match gene {
            Gene::Triangle(t) => Ok(MetricValue {
                value: r_area_t(t, &self.areas)?,
                degenerate: false,
            }),
            Gene::Basis(g) => r_area_g(g, &self.areas, &self.incidence),
        }
    }

    pub fn r_point(&self, gene: &Gene) -> Result<PointStats> {
        self.check_gene(gene)?;
        match gene {
            Gene::Triangle(t) => r_point_t(t, &self.incidence, &self.node_triangle, &self.node_edge),
            Gene::Basis(g) => r_point_g(g, &self.incidence, &self.node_triangle, &self.node_edge),
        }
    }

    pub fn point_vector(&self, gene: &Gene) -> Result<PointVector> {
        self.check_gene(gene)?;
        match gene {
            Gene::Triangle(t) => point_vector_t(t, &self.incidence, &self.node_triangle, &self.node_edge),
            Gene::Basis(g) => point_vector_g(g, &self.incidence, &self.node_triangle, &self.node_edge),
        }
    }

    pub fn r_hom(&self, gene: &Gene) -> Result<MetricValue> {
        self.check_gene(gene)?;
        Ok(match gene {
            Gene::Triangle(t) => r_hom_with_normalization(t.bits(), &self.homogeneity, self.hom_norm),
            Gene::Basis(g) => {
                r_hom_with_normalization(g.bits(), &self.line_homogeneity, self.line_hom_norm)
            }
        })
    }

    pub fn r_slot(&self, g: &BasisGene) -> Result<SlotStats> {
        r_slot(g, &self.incidence)
    }

    /// Indices of basis functions sitting on slots (both triangles enabled,
    /// function disabled), via the reconstruction XOR.
    pub fn slot_positions(&self, g: &BasisGene) -> Result<Vec<usize>> {
        let t = gene_to_triangles(g, &self.incidence)?;
        let rebuilt = triangles_to_gene(&t, &self.incidence)?;
        Ok(xor(g.bits(), rebuilt.bits())?.iter_ones().collect())
    }

    /// Nodes with `p_n ≥ 2`.
    pub fn problematic_nodes(&self, gene: &Gene) -> Result<Vec<usize>> {
        let p = self.point_vector(gene)?;
        Ok(p.0.iter().enumerate().filter(|(_, &v)| v >= 2).map(|(n, _)| n).collect())
    }

    /// Evaluates every applicable parameter. Triangle genes carry no slot data.
    pub fn evaluate_all(&self, gene: &Gene) -> Result<MetricsReport> {
        let area = self.r_area(gene)?;
        let point = self.r_point(gene)?;
        let hom = self.r_hom(gene)?;
        let mut flags = Vec::new();
        if area.degenerate {
            flags.push(Flag::AreaDegenerate);
        }
        if point.degenerate {
            flags.push(Flag::PointDegenerate);
        }
        if hom.degenerate {
            flags.push(Flag::HomDegenerate);
        }
        let (r_slot, slots) = match gene {
            Gene::Triangle(_) => (None, None),
            Gene::Basis(g) => {
                let s = self.r_slot(g)?;
                if s.degenerate {
                    flags.push(Flag::SlotDegenerate);
                }
                if s.value > 1.0 {
                    flags.push(Flag::SlotAboveOne);
                }
                (Some(s.value), Some(s.slots))
            }
        };
        Ok(MetricsReport {
            schema: 1,
            encoding: gene.encoding(),
            r_area: area.value,
            r_point: point.value,
            r_hom: hom.value,
            r_slot,
            problematic_nodes: point.problematic,
            slots,
            flags,
        })
    }
}

/// `evaluate_all` as a free function.
pub fn evaluate_all(gene: &Gene, ctx: &MeshContext) -> Result<MetricsReport> {
    ctx.evaluate_all(gene)
}
