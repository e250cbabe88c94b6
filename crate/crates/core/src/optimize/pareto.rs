//! Weight sweeps over scalarized objectives and non-dominated filtering.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::objective::{ObjectiveSpec, ObjectiveTerm};
use super::search::{local_search, SearchOptions};
use crate::error::{Error, Result};
use crate::genes::{format_bits, parse_bits, random_bits, Bits};

/// `a` dominates `b` (minimization): no worse anywhere, strictly better somewhere.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strictly |= x < y;
    }
    strictly
}

/// Indices of the non-dominated points, in input order.
///
/// Maintains an archive of mutually non-dominated points: a newcomer is
/// dropped if an archive member dominates it, otherwise it evicts every
/// member it dominates. Identical vectors do not dominate each other and are
/// all kept.
pub fn nondominated_filter(points: &[Vec<f64>]) -> Vec<usize> {
    let mut archive: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if archive.iter().any(|&j| dominates(&points[j], p)) {
            continue;
        }
        archive.retain(|&j| !dominates(p, &points[j]));
        archive.push(i);
    }
    archive.sort_unstable();
    archive
}

/// Outcome of the best run for one weight vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoRecord {
    pub weights: Vec<f64>,
    /// Index of the winning run for this weight vector.
    pub run: usize,
    pub scalar: f64,
    pub objectives: Vec<f64>,
    pub nondominated: bool,
    pub evaluations: usize,
    pub restarts: usize,
    pub moves: usize,
    #[serde(with = "bits_string")]
    pub gene: Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFrontier {
    pub schema: u32,
    pub terms: Vec<String>,
    pub records: Vec<ParetoRecord>,
}

impl ParetoFrontier {
    fn from_records(terms: Vec<String>, mut records: Vec<ParetoRecord>) -> Self {
        let points: Vec<Vec<f64>> = records.iter().map(|r| r.objectives.clone()).collect();
        for i in nondominated_filter(&points) {
            records[i].nondominated = true;
        }
        ParetoFrontier {
            schema: 1,
            terms,
            records,
        }
    }

    /// Non-dominated records with repeated objective vectors collapsed,
    /// ordered lexicographically by objectives.
    pub fn front(&self) -> Vec<&ParetoRecord> {
        let mut front: Vec<&ParetoRecord> = self.records.iter().filter(|r| r.nondominated).collect();
        front.sort_by(|a, b| {
            a.objectives
                .iter()
                .zip(&b.objectives)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        front.dedup_by(|a, b| a.objectives == b.objectives);
        front
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub runs_per_weight: usize,
    /// Evaluation budget of every individual run.
    pub budget: usize,
    pub seed: u64,
    /// Density of each run's random starting gene.
    pub initial_density: f64,
    pub search: SearchOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            runs_per_weight: 1,
            budget: 20_000,
            seed: 0,
            initial_density: 0.5,
            search: SearchOptions::default(),
        }
    }
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over the combined inputs
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `runs_per_weight` local searches per weight vector and keeps the best
/// of each. Runs execute in parallel; results are merged in (weight, run)
/// order, so the output depends only on the inputs and the seed.
pub fn weight_sweep(
    terms: &[ObjectiveTerm],
    grid: &[Vec<f64>],
    gene_len: usize,
    opts: &SweepOptions,
) -> Result<ParetoFrontier> {
    if opts.runs_per_weight == 0 {
        return Err(Error::Config("runs_per_weight must be at least 1".into()));
    }
    let specs = grid
        .iter()
        .map(|w| ObjectiveSpec::new(terms.to_vec(), w.clone()))
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|w| (0..opts.runs_per_weight).map(move |r| (w, r)))
        .collect();
    let results = tasks
        .par_iter()
        .map(|&(w, r)| {
            let start_seed = mix(opts.seed, w as u64, 2 * r as u64);
            let search_seed = mix(opts.seed, w as u64, 2 * r as u64 + 1);
            let init = random_bits(gene_len, opts.initial_density, start_seed)?;
            local_search(&specs[w], &init, opts.budget, search_seed, &opts.search)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::with_capacity(grid.len());
    for (w, chunk) in results.chunks(opts.runs_per_weight).enumerate() {
        // Lowest scalar wins; ties keep the earlier run.
        let mut run = 0;
        for (r, res) in chunk.iter().enumerate() {
            if res.best_value < chunk[run].best_value {
                run = r;
            }
        }
        let best = &chunk[run];
        records.push(ParetoRecord {
            weights: grid[w].clone(),
            run,
            scalar: best.best_value,
            objectives: specs[w].evaluate_terms(&best.best)?,
            nondominated: false,
            evaluations: best.evaluations,
            restarts: best.restarts,
            moves: best.accepted_moves(),
            gene: best.best.clone(),
        });
    }
    let names = terms.iter().map(|t| t.name().to_owned()).collect();
    Ok(ParetoFrontier::from_records(names, records))
}

/// Sweep of `(1 − w)·term_a + w·term_b` over sorted weights in `[0, 1]`.
pub fn pareto_sweep(
    term_a: ObjectiveTerm,
    term_b: ObjectiveTerm,
    weights: &[f64],
    gene_len: usize,
    opts: &SweepOptions,
) -> Result<ParetoFrontier> {
    if weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
        return Err(Error::Config("sweep weights must lie in [0, 1]".into()));
    }
    if weights.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::Config("sweep weights must be sorted".into()));
    }
    let grid: Vec<Vec<f64>> = weights.iter().map(|&w| vec![1.0 - w, w]).collect();
    weight_sweep(&[term_a, term_b], &grid, gene_len, opts)
}

/// `steps` evenly spaced weights from 0 to 1 inclusive.
pub fn linear_weights(steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..steps).map(|i| i as f64 / (steps - 1) as f64).collect(),
    }
}

/// All weight triples `(i, j, k) / divisions` with `i + j + k = divisions`.
pub fn simplex_grid(divisions: usize) -> Vec<Vec<f64>> {
    let d = divisions.max(1);
    let mut grid = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            let k = d - i - j;
            grid.push(vec![i as f64 / d as f64, j as f64 / d as f64, k as f64 / d as f64]);
        }
    }
    grid
}

/// Three-objective run (physical term, homogeneity, slots) over a weight
/// grid on the 2-simplex.
pub fn multi_objective_run(
    terms: [ObjectiveTerm; 3],
    grid: &[Vec<f64>],
    gene_len: usize,
    opts: &SweepOptions,
) -> Result<ParetoFrontier> {
    if let Some(w) = grid.iter().find(|w| w.len() != 3) {
        return Err(Error::Config(format!("grid point {w:?} does not have 3 weights")));
    }
    weight_sweep(&terms, grid, gene_len, opts)
}

/// Pairs of non-dominated records `(i, j)` that agree on objective `key` while
/// record `i` is lower in objective `x` and higher in objective `y`. An empty
/// result means `x` and `y` never trade off at equal `key`.
pub fn tradeoff_pairs(frontier: &ParetoFrontier, key: usize, x: usize, y: usize) -> Vec<(usize, usize)> {
    let front: Vec<usize> = (0..frontier.records.len())
        .filter(|&i| frontier.records[i].nondominated)
        .collect();
    let obj = |i: usize| &frontier.records[i].objectives;
    let mut pairs = Vec::new();
    for &i in &front {
        for &j in &front {
            if obj(i)[key] == obj(j)[key] && obj(i)[x] < obj(j)[x] && obj(i)[y] > obj(j)[y] {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

mod bits_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(bits: &Bits, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_bits(bits))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Bits, D::Error> {
        let text = String::deserialize(d)?;
        parse_bits(&text).map_err(serde::de::Error::custom)
    }
}
