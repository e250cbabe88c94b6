//! The mesh graph: triangles as vertices, shared triangle edges as graph
//! edges, and the sparse matrices derived from it.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::sparse::{IntMatrix, RatioMatrix};

/// Simple undirected graph with a fixed vertex/edge numbering.
///
/// Edges are stored as `[u, v]` with `u < v`, sorted lexicographically. When
/// the graph comes from a mesh, every edge also remembers the mesh node pair
/// of the triangle edge it represents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshGraph {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    mesh_edges: Option<Vec<[usize; 2]>>,
}

impl MeshGraph {
    /// Graph from an explicit edge list. Edge order is normalized.
    pub fn from_edges(vertex_count: usize, edges: impl IntoIterator<Item = [usize; 2]>) -> Result<Self> {
        let mut list: Vec<[usize; 2]> = Vec::new();
        for [u, v] in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u.max(v) >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) outside {vertex_count} vertices"
                )));
            }
            list.push([u.min(v), u.max(v)]);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0][0], w[0][1]
            )));
        }
        Ok(MeshGraph {
            vertex_count,
            edges: list,
            mesh_edges: None,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Mesh node pair behind each graph edge, if the graph was built from a mesh.
    pub fn mesh_edges(&self) -> Option<&[[usize; 2]]> {
        self.mesh_edges.as_deref()
    }

    /// Neighbor lists, ascending.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &[u, v] in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Edge indices incident to each vertex, ascending.
    pub fn incident_edges(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (n, &[u, v]) in self.edges.iter().enumerate() {
            inc[u].push(n);
            inc[v].push(n);
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &[u, v] in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }
}

/// One vertex per triangle and one edge per interior mesh edge.
pub fn build_graph(mesh: &Mesh) -> MeshGraph {
    let mut pairs: Vec<([usize; 2], [usize; 2])> = mesh
        .interior_edges()
        .map(|e| {
            let (a, b) = (e.triangles.0, e.triangles.1.expect("interior edge"));
            ([a.min(b), a.max(b)], e.nodes)
        })
        .collect();
    pairs.sort_unstable();
    let (edges, mesh_edges) = pairs.into_iter().unzip();
    MeshGraph {
        vertex_count: mesh.triangle_count(),
        edges,
        mesh_edges: Some(mesh_edges),
    }
}

/// Vertex-by-edge incidence matrix `M` (`V x E`).
pub fn incidence_matrix(g: &MeshGraph) -> IntMatrix {
    let entries = g
        .edges
        .iter()
        .enumerate()
        .flat_map(|(n, &[u, v])| [(u, n, 1), (v, n, 1)])
        .collect();
    IntMatrix::from_triplets(g.vertex_count, g.edge_count(), entries)
}

/// Symmetric vertex adjacency matrix `A` with zero diagonal.
pub fn adjacency_matrix(g: &MeshGraph) -> IntMatrix {
    let entries = g
        .edges
        .iter()
        .flat_map(|&[u, v]| [(u, v, 1), (v, u, 1)])
        .collect();
    IntMatrix::from_triplets(g.vertex_count, g.vertex_count, entries)
}

/// Diagonal degree matrix `D`.
pub fn degree_matrix(g: &MeshGraph) -> IntMatrix {
    let entries = g
        .degrees()
        .into_iter()
        .enumerate()
        .map(|(m, d)| (m, m, d as i64))
        .collect();
    IntMatrix::from_triplets(g.vertex_count, g.vertex_count, entries)
}

/// Homogeneity matrix `H = (D + E)⁻¹ (A + E)`.
///
/// `D + E` is diagonal, so row `m` is the closed neighborhood of `m` scaled
/// by `1 / (deg(m) + 1)`.
pub fn homogeneity_matrix(g: &MeshGraph) -> RatioMatrix {
    let adj = g.neighbors();
    let mut entries = Vec::with_capacity(g.vertex_count + 2 * g.edge_count());
    for (m, nbrs) in adj.iter().enumerate() {
        let w = Ratio::new(1, nbrs.len() as i64 + 1);
        entries.push((m, m, w));
        entries.extend(nbrs.iter().map(|&n| (m, n, w)));
    }
    RatioMatrix::from_triplets(g.vertex_count, g.vertex_count, entries)
}

/// Node-by-triangle incidence `M_nt` (`N x T`).
pub fn node_triangle_incidence(mesh: &Mesh) -> IntMatrix {
    let entries = mesh
        .triangles()
        .iter()
        .enumerate()
        .flat_map(|(t, tri)| tri.map(|n| (n, t, 1)))
        .collect();
    IntMatrix::from_triplets(mesh.node_count(), mesh.triangle_count(), entries)
}

/// Node-by-basis-function incidence `M_nb` (`N x E`): the two endpoints of the
/// mesh edge behind each graph edge.
pub fn node_edge_incidence(mesh: &Mesh, g: &MeshGraph) -> Result<IntMatrix> {
    let mesh_edges = g
        .mesh_edges()
        .ok_or_else(|| Error::InvalidGraph("graph was not built from a mesh".into()))?;
    let entries = mesh_edges
        .iter()
        .enumerate()
        .flat_map(|(n, &[a, b])| [(a, n, 1), (b, n, 1)])
        .collect::<Vec<_>>();
    if let Some(&(node, _, _)) = entries.iter().find(|e| e.0 >= mesh.node_count()) {
        return Err(Error::InvalidGraph(format!(
            "mesh edge references node {node} outside the mesh"
        )));
    }
    Ok(IntMatrix::from_triplets(mesh.node_count(), g.edge_count(), entries))
}

/// Line graph `L(G)`: vertex `n` is edge `n` of `G`; two vertices are adjacent
/// iff the edges share an endpoint. Parallel adjacencies collapse to one edge.
pub fn line_graph(g: &MeshGraph) -> MeshGraph {
    let mut edges = Vec::new();
    for inc in g.incident_edges() {
        for (i, &a) in inc.iter().enumerate() {
            for &b in &inc[i + 1..] {
                edges.push([a.min(b), a.max(b)]);
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    MeshGraph {
        vertex_count: g.edge_count(),
        edges,
        mesh_edges: None,
    }
}
