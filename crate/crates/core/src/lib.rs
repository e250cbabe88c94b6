//! Shape-regularity metrics for discrete topology optimization on triangle
//! meshes.
//!
//! A meshed design region is turned into a graph whose vertices are triangles
//! and whose edges are shared triangle edges. Designs are Boolean genes over
//! triangles (`t`) or over shared-edge basis functions (`g`). The crate
//! evaluates four regularity parameters on those genes:
//!
//! * `r_area`: fraction of the region covered by material,
//! * `r_point`: fraction of touched nodes where material meets only at a point,
//! * `r_hom`: how rapidly material presence changes between neighbors,
//! * `r_slot`: zero-width cuts between enabled triangles (basis genes only),
//!
//! and trades them off against a physical objective with seeded local search
//! and weight sweeps.

pub mod error;
pub mod genes;
pub mod graph;
pub mod matching;
pub mod mesh;
pub mod optimize;
pub mod render;
pub mod run;
pub mod metrics;
pub mod sparse;

pub use error::{Error, Result};
pub use genes::{BasisGene, Bits, Encoding, Gene, TriangleGene};
pub use graph::MeshGraph;
pub use mesh::{generate_plate, parse_mesh, AreaVector, Mesh};
pub use metrics::{MeshContext, MetricsReport};
