//! Planar triangle meshes: validation, the text file format, plate generation
//! and per-triangle areas.
//!
//! File format (UTF-8, line oriented, `#` comment lines and blank lines are
//! ignored):
//!
//! ```text
//! nodes <N>
//! <x> <y>          (N lines)
//! triangles <T>
//! <i> <j> <k>      (T lines, 0-based node indices)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One undirected mesh edge together with the triangles that contain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshEdge {
    /// Endpoints, smaller index first.
    pub nodes: [usize; 2],
    /// First triangle containing the edge and, for interior edges, the second.
    pub triangles: (usize, Option<usize>),
}

impl MeshEdge {
    pub fn is_interior(&self) -> bool {
        self.triangles.1.is_some()
    }
}

/// A validated triangle mesh of a planar design region.
///
/// Orientation of the triangles is irrelevant; every triangle has three
/// distinct in-range nodes, no node triple occurs twice and every edge is
/// shared by at most two triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<MeshEdge>,
}

impl Mesh {
    pub fn new(nodes: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::NoTriangles);
        }
        let node_count = nodes.len();
        let mut seen: HashMap<[usize; 3], usize> = HashMap::with_capacity(triangles.len());
        for (index, tri) in triangles.iter().enumerate() {
            if let Some(&node) = tri.iter().find(|&&n| n >= node_count) {
                return Err(Error::NodeOutOfRange {
                    index,
                    node,
                    node_count,
                });
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::DegenerateTriangle { index, nodes: *tri });
            }
            let mut key = *tri;
            key.sort_unstable();
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicateTriangle { index, first });
            }
            seen.insert(key, index);
        }
        let edges = build_edge_table(&triangles)?;
        Ok(Mesh {
            nodes,
            triangles,
            edges,
        })
    }

    /// Number of nodes `N`.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of triangles `T`.
    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// All mesh edges sorted by their node pair.
    pub fn edges(&self) -> &[MeshEdge] {
        &self.edges
    }

    /// Edges shared by exactly two triangles.
    pub fn interior_edges(&self) -> impl Iterator<Item = &MeshEdge> {
        self.edges.iter().filter(|e| e.is_interior())
    }

    pub fn interior_edge_count(&self) -> usize {
        self.interior_edges().count()
    }

    /// Serializes to the text format accepted by [`parse_mesh`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "nodes {}", self.nodes.len());
        for [x, y] in &self.nodes {
            // `{:?}` on f64 is the shortest representation that round-trips.
            let _ = writeln!(out, "{x:?} {y:?}");
        }
        let _ = writeln!(out, "triangles {}", self.triangles.len());
        for [i, j, k] in &self.triangles {
            let _ = writeln!(out, "{i} {j} {k}");
        }
        out
    }
}

fn build_edge_table(triangles: &[[usize; 3]]) -> Result<Vec<MeshEdge>> {
    let mut map: HashMap<[usize; 2], (usize, Option<usize>)> = HashMap::new();
    for (index, &[a, b, c]) in triangles.iter().enumerate() {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let key = [u.min(v), u.max(v)];
            match map.get_mut(&key) {
                None => {
                    map.insert(key, (index, None));
                }
                Some(slot) if slot.1.is_none() => slot.1 = Some(index),
                Some(_) => return Err(Error::NonManifoldEdge(key[0], key[1])),
            }
        }
    }
    let mut edges: Vec<MeshEdge> = map
        .into_iter()
        .map(|(nodes, triangles)| MeshEdge { nodes, triangles })
        .collect();
    edges.sort_unstable_by_key(|e| e.nodes);
    Ok(edges)
}

/// Parses a mesh from the text format described in the module docs.
pub fn parse_mesh(text: &str) -> Result<Mesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let mut next_line = |what: &str| {
        lines.next().ok_or_else(|| Error::Syntax {
            line: text.lines().count(),
            message: format!("unexpected end of file, expected {what}"),
        })
    };

    let (line, header) = next_line("`nodes <N>` header")?;
    let node_count = parse_header(line, header, "nodes")?;
    let mut nodes = Vec::with_capacity(node_count);
    for _ in 0..node_count {
        let (line, content) = next_line("node coordinates")?;
        let [x, y] = parse_fields::<f64, 2>(line, content)?;
        if !x.is_finite() || !y.is_finite() {
            return Err(syntax(line, "non-finite coordinate"));
        }
        nodes.push([x, y]);
    }

    let (line, header) = next_line("`triangles <T>` header")?;
    let triangle_count = parse_header(line, header, "triangles")?;
    let mut triangles = Vec::with_capacity(triangle_count);
    for _ in 0..triangle_count {
        let (line, content) = next_line("triangle node indices")?;
        triangles.push(parse_fields::<usize, 3>(line, content)?);
    }

    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, "unexpected content after the triangle list"));
    }
    Mesh::new(nodes, triangles)
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_header(line: usize, content: &str, keyword: &str) -> Result<usize> {
    let mut parts = content.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(n), None) if k == keyword => n
            .parse()
            .map_err(|_| syntax(line, format!("invalid {keyword} count `{n}`"))),
        _ => Err(syntax(line, format!("expected `{keyword} <count>`"))),
    }
}

fn parse_fields<T: std::str::FromStr, const K: usize>(line: usize, content: &str) -> Result<[T; K]> {
    let parts: Vec<&str> = content.split_whitespace().collect();
    if parts.len() != K {
        return Err(syntax(
            line,
            format!("expected {K} fields, found {}", parts.len()),
        ));
    }
    let mut values = Vec::with_capacity(K);
    for p in parts {
        values.push(
            p.parse::<T>()
                .map_err(|_| syntax(line, format!("cannot parse `{p}`")))?,
        );
    }
    values
        .try_into()
        .map_err(|_| syntax(line, "field count mismatch"))
}

/// Structured rectangular plate of `nx` by `ny` unit cells.
///
/// Node `(i, j)` has index `j * (nx + 1) + i`. Every cell is split along its
/// lower-left to upper-right diagonal; the upper-left triangle of a cell is
/// listed before the lower-right one, so a single row of cells yields a path
/// graph whose vertex order follows the triangle order.
pub fn generate_plate(nx: usize, ny: usize) -> Result<Mesh> {
    generate_plate_sized(nx, ny, nx as f64, ny as f64)
}

/// Same as [`generate_plate`] with the plate scaled to `width` x `height`.
pub fn generate_plate_sized(nx: usize, ny: usize, width: f64, height: f64) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::EmptyPlate { nx, ny });
    }
    let dx = width / nx as f64;
    let dy = height / ny as f64;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([i as f64 * dx, j as f64 * dy]);
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (ll, lr, ur, ul) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([ll, ur, ul]);
            triangles.push([ll, lr, ur]);
        }
    }
    Mesh::new(nodes, triangles)
}

/// Surface area of every triangle, in mesh units squared.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaVector(Vec<f64>);

impl AreaVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `‖a‖₁`, the total area of the region.
    pub fn total(&self) -> f64 {
        self.0.iter().fold(0.0, |s, x| s + x)
    }
}

/// Triangle areas by the cross-product formula.
pub fn triangle_areas(mesh: &Mesh) -> Result<AreaVector> {
    let nodes = mesh.nodes();
    let scale = bounding_box_diagonal_sq(nodes);
    let tol = 1e-14 * scale;
    mesh.triangles()
        .iter()
        .enumerate()
        .map(|(m, &[i, j, k])| {
            let [ax, ay] = nodes[i];
            let [bx, by] = nodes[j];
            let [cx, cy] = nodes[k];
            let cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
            let area = 0.5 * cross.abs();
            if area <= tol {
                Err(Error::ZeroArea(m))
            } else {
                Ok(area)
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(AreaVector)
}

fn bounding_box_diagonal_sq(nodes: &[[f64; 2]]) -> f64 {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in nodes {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    (hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)
}
