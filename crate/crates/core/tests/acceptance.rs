//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Every reference value here comes from code that does not go through the
//! library's matrix formulas: adjacency, components, slots and matchings are
//! enumerated directly from triangle vertex lists or by brute force.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shapereg::genes::{random_bits, triangles_to_gene, Bits};
use shapereg::graph::{adjacency_matrix, build_graph, degree_matrix, homogeneity_matrix, incidence_matrix};
use shapereg::matching::{augmenting_matching, exhaustive_matching};
use shapereg::metrics::slot_count;
use shapereg::optimize::{dominates, linear_weights, pareto_sweep, SweepOptions, TermKind};
use shapereg::run::{run_optimize, write_outputs, RunConfig};
use shapereg::{generate_plate, BasisGene, Encoding, Gene, Mesh, MeshContext, MeshGraph, TriangleGene};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if $cond {
        } else {
            return Err(format!($($msg)*));
        }
    };
}

fn main() {
    let mut bounds = Bounds::default();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut run = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let outcome = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(o) => o,
            Err(p) => Err(format!(
                "panic: {}",
                p.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            )),
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("criterion {id:2} {name:<24} {tag}  {detail}");
        results.push((id, name, outcome));
    };

    run(1, "matrix identities", &mut criterion_matrix_identities);
    run(2, "point oracle", &mut || criterion_point_oracle(&mut bounds));
    run(3, "slot oracle", &mut || criterion_slot_oracle(&mut bounds));
    run(4, "homogeneity extremes", &mut || criterion_hom_extremes(&mut bounds));
    run(5, "matching", &mut criterion_matching);
    run(6, "slot bound tightness", &mut criterion_slot_bound);
    run(7, "pareto reproduction", &mut criterion_pareto);
    run(8, "metric bounds", &mut || criterion_bounds(&mut bounds));
    run(9, "determinism", &mut criterion_determinism);
    run(10, "performance", &mut criterion_performance);

    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// meshes

fn plate(nx: usize, ny: usize) -> Mesh {
    generate_plate(nx, ny).unwrap()
}

/// Plate with a random diagonal direction in every cell.
fn mixed_plate(nx: usize, ny: usize, seed: u64) -> Mesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut nodes = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([i as f64, j as f64]);
        }
    }
    let mut tris = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (ll, lr, ul, ur) = (id(i, j), id(i + 1, j), id(i, j + 1), id(i + 1, j + 1));
            if rng.gen::<bool>() {
                tris.push([ll, ur, ul]);
                tris.push([ll, lr, ur]);
            } else {
                tris.push([ll, lr, ul]);
                tris.push([lr, ur, ul]);
            }
        }
    }
    Mesh::new(nodes, tris).unwrap()
}

fn bowtie() -> Mesh {
    Mesh::new(
        vec![[0.0, 0.0], [-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]],
        vec![[0, 1, 2], [0, 3, 4]],
    )
    .unwrap()
}

/// Triangles around a centre node; `closed` wraps all the way round.
fn fan(k: usize, closed: bool) -> Mesh {
    let outer = if closed { k } else { k + 1 };
    let sweep = if closed { std::f64::consts::TAU } else { 0.8 * std::f64::consts::PI };
    let mut nodes = vec![[0.0, 0.0]];
    for i in 0..outer {
        let a = sweep * i as f64 / k as f64;
        nodes.push([a.cos(), a.sin()]);
    }
    let tris = (0..k).map(|i| [0, 1 + i, 1 + (i + 1) % outer]).collect();
    Mesh::new(nodes, tris).unwrap()
}

/// Two open fans of two triangles meeting only at the centre.
fn two_fans() -> Mesh {
    let deg = |d: f64| [d.to_radians().cos(), d.to_radians().sin()];
    Mesh::new(
        vec![[0.0, 0.0], deg(150.0), deg(180.0), deg(210.0), deg(330.0), deg(0.0), deg(30.0)],
        vec![[0, 1, 2], [0, 2, 3], [0, 4, 5], [0, 5, 6]],
    )
    .unwrap()
}

fn oracle_meshes() -> Vec<(String, Mesh)> {
    let mut meshes = vec![
        ("bowtie".to_string(), bowtie()),
        ("two_fans".into(), two_fans()),
        ("fan6_closed".into(), fan(6, true)),
        ("fan5_open".into(), fan(5, false)),
        ("fan7_closed".into(), fan(7, true)),
    ];
    for (nx, ny) in [(1, 1), (2, 1), (3, 3), (4, 2), (5, 5), (8, 3)] {
        meshes.push((format!("plate{nx}x{ny}"), plate(nx, ny)));
    }
    for seed in 0..4 {
        meshes.push((format!("mixed4x4#{seed}"), mixed_plate(4, 4, seed)));
    }
    meshes
}

// ---------------------------------------------------------------------------
// direct enumeration from triangle vertex lists

/// Triangle pairs sharing an edge, with the shared node pair, sorted by the
/// triangle pair.
fn shared_edges(mesh: &Mesh) -> Vec<([usize; 2], [usize; 2])> {
    let mut by_edge: HashMap<[usize; 2], Vec<usize>> = HashMap::new();
    for (m, t) in mesh.triangles().iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            by_edge.entry([a.min(b), a.max(b)]).or_default().push(m);
        }
    }
    let mut out: Vec<_> = by_edge
        .into_iter()
        .filter(|(_, ts)| ts.len() == 2)
        .map(|(e, ts)| ([ts[0].min(ts[1]), ts[0].max(ts[1])], e))
        .collect();
    out.sort();
    out
}

struct Oracle {
    pairs: Vec<([usize; 2], [usize; 2])>,
    tris_at: Vec<Vec<usize>>,
}

impl Oracle {
    fn new(mesh: &Mesh, graph: &MeshGraph) -> Result<Self, String> {
        let pairs = shared_edges(mesh);
        let tri_pairs: Vec<[usize; 2]> = pairs.iter().map(|p| p.0).collect();
        ensure!(tri_pairs == graph.edges(), "graph edge order differs from enumeration");
        let mut tris_at = vec![Vec::new(); mesh.node_count()];
        for (m, t) in mesh.triangles().iter().enumerate() {
            for &n in t {
                tris_at[n].push(m);
            }
        }
        Ok(Oracle { pairs, tris_at })
    }

    fn triangles_of_basis(&self, t_count: usize, g: &Bits) -> Vec<bool> {
        let mut on = vec![false; t_count];
        for k in g.iter_ones() {
            let [u, v] = self.pairs[k].0;
            on[u] = true;
            on[v] = true;
        }
        on
    }

    /// Per node: number of groups of enabled triangles connected through
    /// shared edges at that node.
    fn components(&self, on: &[bool]) -> Vec<usize> {
        let pair_index: std::collections::HashSet<[usize; 2]> = self.pairs.iter().map(|p| p.0).collect();
        self.tris_at
            .iter()
            .map(|ts| {
                let live: Vec<usize> = ts.iter().copied().filter(|&m| on[m]).collect();
                let mut parent: Vec<usize> = (0..live.len()).collect();
                fn find(p: &mut [usize], i: usize) -> usize {
                    if p[i] == i {
                        i
                    } else {
                        let r = find(p, p[i]);
                        p[i] = r;
                        r
                    }
                }
                for a in 0..live.len() {
                    for b in a + 1..live.len() {
                        let key = [live[a].min(live[b]), live[a].max(live[b])];
                        // Any shared edge between two triangles at this node passes through it.
                        if pair_index.contains(&key) {
                            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                            parent[ra] = rb;
                        }
                    }
                }
                (0..live.len()).filter(|&i| find(&mut parent, i) == i).count()
            })
            .collect()
    }

    fn slots(&self, on: &[bool], g: &Bits) -> usize {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(k, p)| !g[*k] && on[p.0[0]] && on[p.0[1]])
            .count()
    }
}

// ---------------------------------------------------------------------------
// bounds bookkeeping shared across suites

#[derive(Default)]
struct Bounds {
    checked: usize,
    violations: Vec<String>,
    slot_checked: usize,
    slot_above_one: Vec<(String, f64)>,
}

impl Bounds {
    fn record(&mut self, label: &str, name: &str, v: f64) {
        self.checked += 1;
        if !(0.0..=1.0).contains(&v) {
            self.violations.push(format!("{label}: {name} = {v}"));
        }
    }

    fn report(&mut self, label: &str, ctx: &MeshContext, gene: &Gene) {
        let r = ctx.evaluate_all(gene).unwrap();
        self.record(label, "r_area", r.r_area);
        self.record(label, "r_point", r.r_point);
        self.record(label, "r_hom", r.r_hom);
        if let Some(s) = r.r_slot {
            self.slot(label, s);
        }
    }

    fn slot(&mut self, label: &str, v: f64) {
        self.slot_checked += 1;
        if label.starts_with("plate") {
            self.record(label, "r_slot", v);
        } else if v > 1.0 {
            self.slot_above_one.push((label.to_string(), v));
        } else if v < 0.0 {
            self.violations.push(format!("{label}: r_slot = {v}"));
        }
    }
}

fn random_gene(rng: &mut ChaCha8Rng, len: usize) -> Bits {
    let density = rng.gen_range(0.05..0.95);
    random_bits(len, density, rng.gen()).unwrap()
}

// ---------------------------------------------------------------------------
// criteria

fn criterion_matrix_identities() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_row = 0.0f64;
    let mut largest = 0;
    for _ in 0..50 {
        let (nx, ny) = (rng.gen_range(1..=20), rng.gen_range(1..=20));
        let mesh = plate(nx, ny);
        let g = build_graph(&mesh);
        let v = g.vertex_count();
        largest = largest.max(v);
        let m = incidence_matrix(&g);
        let a = adjacency_matrix(&g);
        let d = degree_matrix(&g);

        // M Mᵀ from the two endpoints of every column.
        let mut cols: Vec<Vec<(usize, i64)>> = vec![Vec::new(); m.cols()];
        for &(r, c, x) in m.entries() {
            cols[c].push((r, x));
        }
        let mut mmt: HashMap<(usize, usize), i64> = HashMap::new();
        for col in &cols {
            for &(i, x) in col {
                for &(j, y) in col {
                    *mmt.entry((i, j)).or_default() += x * y;
                }
            }
        }
        let expected_degree = {
            let mut deg = vec![0i64; v];
            for (p, _) in shared_edges(&mesh) {
                deg[p[0]] += 1;
                deg[p[1]] += 1;
            }
            deg
        };
        let mut keys: Vec<(usize, usize)> = mmt.keys().copied().collect();
        keys.extend(a.entries().iter().map(|e| (e.0, e.1)));
        keys.extend(d.entries().iter().map(|e| (e.0, e.1)));
        for (i, j) in keys {
            let lhs = d.get(i, j);
            let rhs = mmt.get(&(i, j)).copied().unwrap_or(0) - a.get(i, j);
            ensure!(lhs == rhs, "plate {nx}x{ny}: D[{i},{j}] = {lhs}, MMᵀ − A = {rhs}");
        }
        for (i, &deg) in expected_degree.iter().enumerate() {
            ensure!(d.get(i, i) == deg, "plate {nx}x{ny}: degree of {i}");
        }

        let h = homogeneity_matrix(&g);
        let mut sums = vec![0.0f64; h.rows()];
        for (r, _, x) in h.to_f64_triplets() {
            sums[r] += x;
        }
        for s in sums {
            worst_row = worst_row.max((s - 1.0).abs());
        }
    }
    let elapsed = start.elapsed();
    ensure!(worst_row <= 1e-12, "homogeneity row sum off by {worst_row:e}");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "50 plates up to {largest} triangles, max |row sum − 1| = {worst_row:e}, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_point_oracle(bounds: &mut Bounds) -> Outcome {
    let meshes = oracle_meshes();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut genes = 0;
    let mut mismatches = Vec::new();

    let bow = MeshContext::new(bowtie()).unwrap();
    let both = Gene::Triangle(TriangleGene::ones(2));
    let bow_value = bow.r_point(&both).unwrap().value;
    ensure!(bow_value == 0.2, "bowtie r_point = {bow_value}");

    let contexts: Vec<(String, MeshContext)> =
        meshes.into_iter().map(|(n, m)| (n, MeshContext::new(m).unwrap())).collect();
    while genes < 1000 {
        let (label, ctx) = &contexts[genes % contexts.len()];
        let oracle = Oracle::new(ctx.mesh(), ctx.graph())?;
        let encoding = if genes % 2 == 0 { Encoding::Triangle } else { Encoding::Basis };
        let bits = random_gene(&mut rng, ctx.gene_len(encoding));
        let gene = Gene::from_bits(encoding, bits.clone());
        let comps = match encoding {
            Encoding::Triangle => {
                let on: Vec<bool> = bits.iter().map(|b| *b).collect();
                oracle.components(&on)
            }
            // Basis genes are judged on their slot-free reconstruction: every
            // shared edge between two enabled triangles counts as enabled.
            Encoding::Basis => {
                let on = oracle.triangles_of_basis(ctx.triangle_count(), &bits);
                oracle.components(&on)
            }
        };
        let expected: Vec<usize> = (0..comps.len()).filter(|&n| comps[n] >= 2).collect();
        let got = ctx.problematic_nodes(&gene).unwrap();
        let stats = ctx.r_point(&gene).unwrap();
        if got != expected || stats.problematic != expected.len() {
            mismatches.push(format!("{label} {encoding} {}", shapereg::genes::format_bits(&bits)));
        }
        bounds.report(label, ctx, &gene);
        genes += 1;
    }
    ensure!(mismatches.is_empty(), "{} mismatches, first: {}", mismatches.len(), mismatches[0]);
    Ok(format!("{genes} genes on {} meshes, 0 mismatches, bowtie r_point = 0.2", contexts.len()))
}

fn criterion_slot_oracle(bounds: &mut Bounds) -> Outcome {
    let contexts: Vec<(String, MeshContext)> = oracle_meshes()
        .into_iter()
        .map(|(n, m)| (n, MeshContext::new(m).unwrap()))
        .filter(|(_, c)| c.basis_count() > 0)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut total_slots = 0;
    for i in 0..1000 {
        let (label, ctx) = &contexts[i % contexts.len()];
        let oracle = Oracle::new(ctx.mesh(), ctx.graph())?;
        let bits = random_gene(&mut rng, ctx.basis_count());
        let on = oracle.triangles_of_basis(ctx.triangle_count(), &bits);
        let expected = oracle.slots(&on, &bits);
        let g = BasisGene::new(bits.clone());
        let got = slot_count(&g, ctx.incidence()).unwrap();
        ensure!(got == expected, "{label}: slot_count {got}, enumeration {expected}");
        total_slots += got;
        bounds.report(label, ctx, &Gene::Basis(g));

        let t = TriangleGene::new(random_gene(&mut rng, ctx.triangle_count()));
        let rebuilt = triangles_to_gene(&t, ctx.incidence()).unwrap();
        let s = slot_count(&rebuilt, ctx.incidence()).unwrap();
        ensure!(s == 0, "{label}: triangles_to_gene produced {s} slots");
    }
    Ok(format!("1000 basis genes ({total_slots} slots) exact; 1000 reconstructed genes slot-free"))
}

fn criterion_hom_extremes(bounds: &mut Bounds) -> Outcome {
    let mut meshes: Vec<(String, Mesh)> = vec![
        ("bowtie".into(), bowtie()),
        ("two_fans".into(), two_fans()),
        ("fan6_closed".into(), fan(6, true)),
        ("fan5_open".into(), fan(5, false)),
        ("fan7_closed".into(), fan(7, true)),
    ];
    for nx in 1..=8 {
        for ny in 1..=(8 / nx) {
            meshes.push((format!("plate{nx}x{ny}"), plate(nx, ny)));
        }
    }
    let mut irregular = Vec::new();
    for seed in 0..3 {
        irregular.push((format!("mixed2x4#{seed}"), mixed_plate(2, 4, seed)));
        irregular.push((format!("mixed3x2#{seed}"), mixed_plate(3, 2, seed)));
    }
    let exhaustive_max = |ctx: &MeshContext, label: &str, bounds: &mut Bounds| {
        let t_count = ctx.triangle_count();
        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1 << t_count) {
            let bits: Bits = (0..t_count).map(|i| mask >> i & 1 == 1).collect();
            let v = ctx.r_hom(&Gene::Triangle(TriangleGene::new(bits))).unwrap().value;
            bounds.record(label, "r_hom", v);
            best = best.max(v);
        }
        best
    };
    let mut checked = 0;
    let mut degenerate = Vec::new();
    for (label, mesh) in meshes {
        let ctx = MeshContext::new(mesh).unwrap();
        let t_count = ctx.triangle_count();
        assert!(t_count <= 16);
        let full = ctx.r_hom(&Gene::Triangle(TriangleGene::ones(t_count))).unwrap();
        let empty = ctx.r_hom(&Gene::Triangle(TriangleGene::zeros(t_count))).unwrap();
        ensure!(full.value == 0.0 && empty.value == 0.0, "{label}: r_hom(t0) = {}, r_hom(0) = {}", full.value, empty.value);
        if full.degenerate {
            degenerate.push(label);
            continue;
        }
        let best = exhaustive_max(&ctx, &label, bounds);
        ensure!((best - 1.0).abs() <= 1e-12, "{label}: exhaustive max r_hom = {best}");
        checked += 1;
    }
    // The normalization is a row-wise bound; on meshes with mixed cell
    // diagonals it need not be attained. Reported, not asserted.
    let mut below = Vec::new();
    for (label, mesh) in irregular {
        let ctx = MeshContext::new(mesh).unwrap();
        let best = exhaustive_max(&ctx, &label, bounds);
        if (best - 1.0).abs() > 1e-12 {
            below.push(format!("{label} {best:.4}"));
        }
    }
    Ok(format!(
        "max r_hom = 1 on {checked} plate/fan meshes; degenerate denominator: {}; mixed-diagonal meshes below 1: {}/6 [{}]",
        degenerate.join(", "),
        below.len(),
        below.join(", ")
    ))
}

fn is_matching(g: &MeshGraph, edges: &[usize]) -> bool {
    let mut used = vec![false; g.vertex_count()];
    edges.iter().all(|&e| {
        let [u, v] = g.edges()[e];
        let free = !used[u] && !used[v];
        used[u] = true;
        used[v] = true;
        free
    })
}

fn criterion_matching() -> Outcome {
    // Six-vertex examples: the path of a 3×1 plate and a triangular prism.
    let path = build_graph(&plate(3, 1));
    let prism = MeshGraph::from_edges(6, [[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5], [0, 3], [1, 4], [2, 5]])
        .map_err(|e| e.to_string())?;
    for (name, g) in [("3x1 plate", &path), ("prism", &prism)] {
        ensure!(g.vertex_count() == 6, "{name} has {} vertices", g.vertex_count());
        let m = augmenting_matching(g);
        ensure!(m.cardinality() == 3 && is_matching(g, &m.edges), "{name}: matching {:?}", m.edges);
        ensure!(exhaustive_matching(g).cardinality() == 3, "{name}: exhaustive");
    }

    let mut compared = 0;
    let mut check = |g: &MeshGraph| -> Result<(), String> {
        let a = augmenting_matching(g);
        let b = exhaustive_matching(g);
        compared += 1;
        ensure!(is_matching(g, &a.edges), "augmenting result is not a matching: {:?}", g.edges());
        ensure!(
            a.cardinality() == b.cardinality(),
            "V={} edges {:?}: augmenting {} vs exhaustive {}",
            g.vertex_count(),
            g.edges(),
            a.cardinality(),
            b.cardinality()
        );
        Ok(())
    };
    // Every labelled graph on up to 6 vertices.
    for v in 1..=6usize {
        let all: Vec<[usize; 2]> = (0..v).flat_map(|i| (i + 1..v).map(move |j| [i, j])).collect();
        for mask in 0u32..(1 << all.len()) {
            let edges = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e);
            check(&MeshGraph::from_edges(v, edges).unwrap())?;
        }
    }
    // Random graphs on 7..=12 vertices across densities.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20_000 {
        let v = rng.gen_range(7..=12usize);
        let p = rng.gen_range(0.05..0.7);
        let edges: Vec<[usize; 2]> = (0..v)
            .flat_map(|i| (i + 1..v).map(move |j| [i, j]))
            .filter(|_| rng.gen::<f64>() < p)
            .collect();
        check(&MeshGraph::from_edges(v, edges).unwrap())?;
    }
    // Mesh and line graphs of small meshes.
    for (_, mesh) in oracle_meshes() {
        let g = build_graph(&mesh);
        if g.vertex_count() <= 12 {
            check(&g)?;
        }
    }
    Ok(format!(
        "6-vertex examples give 3; {compared} graphs with V ≤ 12 agree (all graphs with V ≤ 6, 20000 random with 7 ≤ V ≤ 12)"
    ))
}

fn criterion_slot_bound() -> Outcome {
    let mut plates = 0;
    let mut degenerate = Vec::new();
    for nx in 1..=12 {
        for ny in 1..=12 {
            let ctx = MeshContext::new(plate(nx, ny)).unwrap();
            let (t, b) = (ctx.triangle_count(), ctx.basis_count());
            // One basis function per cell: the diagonal joining its two triangles.
            let diag: Bits = ctx.graph().edges().iter().map(|e| e[1] == e[0] + 1 && e[0] % 2 == 0).collect();
            ensure!(diag.count_ones() == t / 2, "{nx}x{ny}: {} diagonals", diag.count_ones());
            let g = BasisGene::new(diag);
            let stats = ctx.r_slot(&g).unwrap();
            ensure!(stats.slots == b - t / 2, "{nx}x{ny}: {} slots, expected {}", stats.slots, b - t / 2);
            if b == t / 2 {
                // No interior edge outside the matching, so no slot is possible.
                ensure!(stats.degenerate && stats.value == 0.0, "{nx}x{ny}: r_slot = {}", stats.value);
                degenerate.push(format!("{nx}x{ny}"));
            } else {
                ensure!(stats.value == 1.0, "{nx}x{ny}: r_slot = {}", stats.value);
            }
            plates += 1;
        }
    }
    Ok(format!(
        "{plates} plates up to 12x12: diagonal matching gives slot_count = B − T/2 and r_slot = 1 (zero denominator, flagged: {})",
        degenerate.join(", ")
    ))
}

fn criterion_pareto() -> Outcome {
    let start = Instant::now();
    let ctx = Arc::new(MeshContext::new(plate(10, 10)).unwrap());
    let encoding = Encoding::Basis;
    let q = TermKind::Surrogate.build(ctx.clone(), encoding).unwrap();
    let area = TermKind::RArea.build(ctx.clone(), encoding).unwrap();
    let opts = SweepOptions { budget: 20_000, seed: 13, ..Default::default() };
    let frontier = pareto_sweep(q, area, &linear_weights(11), ctx.gene_len(encoding), &opts).unwrap();
    let elapsed = start.elapsed();

    let points: Vec<&Vec<f64>> = frontier.records.iter().map(|r| &r.objectives).collect();
    for (i, r) in frontier.records.iter().enumerate() {
        let dominated = points.iter().enumerate().any(|(j, p)| j != i && dominates(p, &r.objectives));
        ensure!(r.nondominated == !dominated, "record {i} flagged {} but oracle says {}", r.nondominated, !dominated);
    }
    let mut front: Vec<[f64; 2]> = frontier.front().iter().map(|r| [r.objectives[0], r.objectives[1]]).collect();
    front.sort_by(|a, b| a[1].total_cmp(&b[1]));
    for w in front.windows(2) {
        ensure!(w[1][1] > w[0][1] && w[1][0] < w[0][0], "not strictly monotone: {:?} then {:?}", w[0], w[1]);
    }
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    let shown: Vec<String> = front.iter().map(|p| format!("({:.3}, {:.2})", p[1], p[0])).collect();
    Ok(format!(
        "{} distinct front points (r_area, Q) {}, {:.1}s",
        front.len(),
        shown.join(" "),
        elapsed.as_secs_f64()
    ))
}

fn criterion_bounds(bounds: &mut Bounds) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut meshes = oracle_meshes();
    for seed in 10..16 {
        meshes.push((format!("mixed6x5#{seed}"), mixed_plate(6, 5, seed)));
    }
    meshes.push(("plate12x7".into(), plate(12, 7)));
    for (label, mesh) in meshes {
        let ctx = MeshContext::new(mesh).unwrap();
        for encoding in [Encoding::Triangle, Encoding::Basis] {
            for _ in 0..150 {
                let bits = random_gene(&mut rng, ctx.gene_len(encoding));
                bounds.report(&label, &ctx, &Gene::from_bits(encoding, bits));
            }
        }
    }
    ensure!(bounds.violations.is_empty(), "{} violations, first: {}", bounds.violations.len(), bounds.violations[0]);
    let above = &bounds.slot_above_one;
    let note = match above.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
        Some((label, v)) => format!("; r_slot > 1 on irregular meshes {} times (max {v:.3} on {label})", above.len()),
        None => "; no r_slot > 1 on irregular meshes".into(),
    };
    Ok(format!(
        "{} values in [0, 1], {} r_slot values checked{note}",
        bounds.checked, bounds.slot_checked
    ))
}

fn criterion_determinism() -> Outcome {
    let config = RunConfig::from_json(
        r#"{
            "mesh": {"plate": {"nx": 6, "ny": 6}},
            "encoding": "basis",
            "terms": ["surrogate", "r_hom", "r_slot"],
            "weights": [[1.0, 0.0, 0.0], [0.5, 0.25, 0.25], [0.2, 0.4, 0.4]],
            "budget": 3000,
            "seed": 42,
            "runs_per_weight": 3
        }"#,
    )
    .map_err(|e| e.to_string())?;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let frontier = run_optimize(&config, Path::new(".")).map_err(|e| e.to_string())?;
        write_outputs(dir.path(), &config, &frontier).map_err(|e| e.to_string())?;
    }
    let read = |d: &tempfile::TempDir, f: &str| std::fs::read(d.path().join(f)).unwrap();
    for file in ["frontier.json", "run.log", "genes/record_000.txt", "genes/record_002.txt"] {
        ensure!(read(&dirs[0], file) == read(&dirs[1], file), "{file} differs between runs");
    }
    Ok(format!("frontier.json byte-identical ({} bytes)", read(&dirs[0], "frontier.json").len()))
}

fn criterion_performance() -> Outcome {
    let ctx = MeshContext::new(plate(100, 50)).unwrap();
    ensure!(ctx.triangle_count() == 10_000, "{} triangles", ctx.triangle_count());
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = Duration::ZERO;
    for encoding in [Encoding::Triangle, Encoding::Basis] {
        let genes: Vec<Gene> = (0..6)
            .map(|_| Gene::from_bits(encoding, random_gene(&mut rng, ctx.gene_len(encoding))))
            .collect();
        ctx.evaluate_all(&genes[0]).unwrap();
        for gene in &genes[1..] {
            let start = Instant::now();
            std::hint::black_box(ctx.evaluate_all(gene).unwrap());
            worst = worst.max(start.elapsed());
        }
    }
    ensure!(worst < Duration::from_millis(50), "slowest evaluate_all took {worst:?}");
    Ok(format!("slowest of 10 evaluate_all calls on 10000 triangles: {:.2} ms", worst.as_secs_f64() * 1e3))
}
