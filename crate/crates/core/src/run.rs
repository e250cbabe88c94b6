//! Optimization run configuration (JSON) and the output directory layout.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "mesh": {"plate": {"nx": 10, "ny": 10}},
//!   "encoding": "basis",
//!   "terms": ["surrogate", "r_area"],
//!   "weights": [[1.0, 0.0], [0.5, 0.5]],
//!   "budget": 20000,
//!   "seed": 7,
//!   "runs_per_weight": 2,
//!   "pinned": [12]
//! }
//! ```
//!
//! `mesh` may instead be `{"path": "plate.mesh"}`, resolved against the
//! directory of the configuration file. The output directory receives
//! `frontier.json`, `run.log` and one gene file per record under `genes/`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genes::{format_bits, Bits, Encoding};
use crate::mesh::{generate_plate_sized, parse_mesh, Mesh};
use crate::metrics::MeshContext;
use crate::optimize::{
    weight_sweep, ParetoFrontier, SearchOptions, Strategy, SweepOptions, TermKind,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MeshSource {
    Path(PathBuf),
    Plate(PlateDims),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateDims {
    pub nx: usize,
    pub ny: usize,
    /// Plate extent; defaults to unit cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
}

impl MeshSource {
    pub fn load(&self, base_dir: &Path) -> Result<Mesh> {
        match self {
            MeshSource::Path(p) => {
                let path = base_dir.join(p);
                let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                parse_mesh(&text)
            }
            MeshSource::Plate(d) => generate_plate_sized(
                d.nx,
                d.ny,
                d.width.unwrap_or(d.nx as f64),
                d.height.unwrap_or(d.ny as f64),
            ),
        }
    }
}

fn schema_v1() -> u32 {
    1
}

fn one() -> usize {
    1
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "schema_v1")]
    pub schema: u32,
    pub mesh: MeshSource,
    pub encoding: Encoding,
    pub terms: Vec<TermKind>,
    /// One weight vector per scalarized run, each as long as `terms`.
    pub weights: Vec<Vec<f64>>,
    pub budget: usize,
    pub seed: u64,
    #[serde(default = "one")]
    pub runs_per_weight: usize,
    /// Gene indices held enabled (feed-edge mask).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pinned: Vec<usize>,
    #[serde(default = "half")]
    pub initial_density: f64,
    #[serde(default)]
    pub strategy: Strategy,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a config file; returns it with the directory relative mesh paths
    /// resolve against.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((RunConfig::from_json(&text)?, base))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != 1 {
            return Err(Error::Config(format!("unsupported schema {}", self.schema)));
        }
        if self.terms.is_empty() {
            return Err(Error::Config("at least one objective term is required".into()));
        }
        if self.weights.is_empty() {
            return Err(Error::Config("at least one weight vector is required".into()));
        }
        if let Some(w) = self.weights.iter().find(|w| w.len() != self.terms.len()) {
            return Err(Error::Config(format!(
                "weight vector {w:?} does not match {} terms",
                self.terms.len()
            )));
        }
        if self.runs_per_weight == 0 {
            return Err(Error::Config("runs_per_weight must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.initial_density) {
            return Err(Error::Density(self.initial_density));
        }
        Ok(())
    }
}

/// Loads the mesh, binds the objective terms and runs the weight sweep.
pub fn run_optimize(config: &RunConfig, base_dir: &Path) -> Result<ParetoFrontier> {
    config.validate()?;
    let mesh = config.mesh.load(base_dir)?;
    let ctx = Arc::new(MeshContext::new(mesh)?);
    run_with_context(config, ctx)
}

pub fn run_with_context(config: &RunConfig, ctx: Arc<MeshContext>) -> Result<ParetoFrontier> {
    let gene_len = ctx.gene_len(config.encoding);
    let terms = config
        .terms
        .iter()
        .map(|k| k.build(ctx.clone(), config.encoding))
        .collect::<Result<Vec<_>>>()?;
    let pinned = if config.pinned.is_empty() {
        None
    } else {
        let mut mask = Bits::repeat(false, gene_len);
        for &i in &config.pinned {
            if i >= gene_len {
                return Err(Error::Config(format!(
                    "pinned index {i} outside gene of length {gene_len}"
                )));
            }
            mask.set(i, true);
        }
        Some(mask)
    };
    let opts = SweepOptions {
        runs_per_weight: config.runs_per_weight,
        budget: config.budget,
        seed: config.seed,
        initial_density: config.initial_density,
        search: SearchOptions {
            strategy: config.strategy,
            restart_density: 0.5,
            pinned,
        },
    };
    weight_sweep(&terms, &config.weights, gene_len, &opts)
}

/// Frontier JSON exactly as written to `frontier.json`.
pub fn frontier_json(frontier: &ParetoFrontier) -> Result<String> {
    let mut text = serde_json::to_string_pretty(frontier)?;
    text.push('\n');
    Ok(text)
}

/// Human-readable per-record summary written to `run.log`.
pub fn run_log(config: &RunConfig, frontier: &ParetoFrontier) -> String {
    let mut log = String::new();
    let _ = writeln!(
        log,
        "encoding={} terms={} budget={} seed={} runs_per_weight={}",
        config.encoding,
        frontier.terms.join(","),
        config.budget,
        config.seed,
        config.runs_per_weight
    );
    for (i, r) in frontier.records.iter().enumerate() {
        let _ = writeln!(
            log,
            "record {i:03} weights={:?} run={} scalar={} objectives={:?} evaluations={} restarts={} moves={} nondominated={}",
            r.weights, r.run, r.scalar, r.objectives, r.evaluations, r.restarts, r.moves, r.nondominated
        );
    }
    log
}

/// Writes `frontier.json`, `run.log` and `genes/record_XXX.txt` under `out_dir`.
pub fn write_outputs(out_dir: &Path, config: &RunConfig, frontier: &ParetoFrontier) -> Result<()> {
    let genes_dir = out_dir.join("genes");
    fs::create_dir_all(&genes_dir).map_err(|e| Error::io(&genes_dir, e))?;
    let write = |path: PathBuf, contents: String| {
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))
    };
    write(out_dir.join("frontier.json"), frontier_json(frontier)?)?;
    write(out_dir.join("run.log"), run_log(config, frontier))?;
    for (i, r) in frontier.records.iter().enumerate() {
        write(
            genes_dir.join(format!("record_{i:03}.txt")),
            format!("{}\n", format_bits(&r.gene)),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = r#"{
        "mesh": {"plate": {"nx": 3, "ny": 2}},
        "encoding": "triangle",
        "terms": ["r_area"],
        "weights": [[1.0]],
        "budget": 500,
        "seed": 3
    }"#;

    #[test]
    fn parses_defaults() {
        let c = RunConfig::from_json(CONFIG).unwrap();
        assert_eq!(c.schema, 1);
        assert_eq!(c.runs_per_weight, 1);
        assert_eq!(c.initial_density, 0.5);
        assert_eq!(c.strategy, Strategy::FirstImprovement);
        assert_eq!(c.mesh, MeshSource::Plate(PlateDims { nx: 3, ny: 2, width: None, height: None }));
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            CONFIG.replace("\"weights\": [[1.0]]", "\"weights\": [[1.0, 2.0]]"),
            CONFIG.replace("\"r_area\"", "\"q_factor\""),
            CONFIG.replace("\"seed\": 3", "\"seed\": 3, \"extra\": 1"),
            CONFIG.replace("\"weights\": [[1.0]]", "\"weights\": []"),
            CONFIG.replace("\"budget\": 500,", ""),
        ];
        for text in bad {
            assert!(matches!(RunConfig::from_json(&text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn area_only_run_empties_plate() {
        let c = RunConfig::from_json(CONFIG).unwrap();
        let f = run_optimize(&c, Path::new(".")).unwrap();
        assert_eq!(f.records.len(), 1);
        assert_eq!(f.records[0].gene.count_ones(), 0);
        assert!(f.records[0].nondominated);
    }

    #[test]
    fn pinned_range_checked() {
        let mut c = RunConfig::from_json(CONFIG).unwrap();
        c.pinned = vec![12];
        assert!(matches!(run_optimize(&c, Path::new(".")), Err(Error::Config(_))));
        c.pinned = vec![5];
        let f = run_optimize(&c, Path::new(".")).unwrap();
        assert_eq!(f.records[0].gene.iter_ones().collect::<Vec<_>>(), vec![5]);
    }

    #[test]
    fn missing_mesh_file() {
        let mut c = RunConfig::from_json(CONFIG).unwrap();
        c.mesh = MeshSource::Path("does/not/exist.mesh".into());
        assert!(matches!(run_optimize(&c, Path::new(".")), Err(Error::Io { .. })));
    }
}
