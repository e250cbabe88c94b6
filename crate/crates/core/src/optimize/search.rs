//! Seeded bit-flip local search with random restarts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::objective::{scalarize, ObjectiveSpec};
use crate::error::{Error, Result};
use crate::genes::{random_bits_with, Bits};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Cyclic scan over the bits, accepting the first improving flip.
    #[default]
    FirstImprovement,
    /// Evaluate every flip and take the best; ties go to the lowest index.
    Steepest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub strategy: Strategy,
    /// Density of the random genes used for restarts.
    pub restart_density: f64,
    /// Bits forced to 1 and never flipped (e.g. the feed edge).
    pub pinned: Option<Bits>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: Strategy::default(),
            restart_density: 0.5,
            pinned: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceEvent {
    /// An accepted flip and the objective value after it.
    Flip { evaluation: usize, bit: usize, value: f64 },
    /// Jump to a fresh random gene.
    Restart { evaluation: usize, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best: Bits,
    pub best_value: f64,
    /// Objective of the starting gene after pinning.
    pub initial_value: f64,
    /// Evaluations charged against the budget.
    pub evaluations: usize,
    pub restarts: usize,
    pub trace: Vec<TraceEvent>,
}

impl SearchResult {
    pub fn accepted_moves(&self) -> usize {
        self.trace
            .iter()
            .filter(|e| matches!(e, TraceEvent::Flip { .. }))
            .count()
    }
}

fn improves(candidate: f64, current: f64) -> bool {
    candidate < current - 1e-12 * current.abs().max(1.0)
}

/// Minimizes the scalarized objective starting from `initial`.
///
/// Each objective evaluation after the initial one costs one unit of
/// `budget`; a zero budget returns the (pinned) initial gene unchanged. When
/// no single flip improves the current gene the search restarts from a seeded
/// random gene. The best gene seen overall is returned.
pub fn local_search(
    spec: &ObjectiveSpec,
    initial: &Bits,
    budget: usize,
    seed: u64,
    options: &SearchOptions,
) -> Result<SearchResult> {
    let n = initial.len();
    if !(0.0..=1.0).contains(&options.restart_density) {
        return Err(Error::Density(options.restart_density));
    }
    let pinned = match &options.pinned {
        Some(mask) => {
            Error::check_len(n, mask.len())?;
            mask.clone()
        }
        None => Bits::repeat(false, n),
    };
    let free: Vec<usize> = pinned.iter_zeros().collect();
    let apply_pins = |bits: &mut Bits| *bits |= pinned.as_bitslice();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = initial.clone();
    apply_pins(&mut current);
    let initial_value = scalarize(spec, &current)?;
    let mut state = State {
        current_value: initial_value,
        best: current.clone(),
        best_value: initial_value,
        evaluations: 0,
        restarts: 0,
        trace: Vec::new(),
    };

    if free.is_empty() {
        return Ok(state.finish(initial_value));
    }

    match options.strategy {
        Strategy::FirstImprovement => {
            let mut pos = 0;
            let mut since_improvement = 0;
            while state.evaluations < budget {
                if since_improvement >= free.len() {
                    current = random_bits_with(n, options.restart_density, &mut rng)?;
                    apply_pins(&mut current);
                    state.restart(&current, scalarize(spec, &current)?);
                    since_improvement = 0;
                    pos = 0;
                    continue;
                }
                let bit = free[pos];
                pos = (pos + 1) % free.len();
                flip(&mut current, bit);
                let value = scalarize(spec, &current)?;
                state.evaluations += 1;
                if improves(value, state.current_value) {
                    state.accept(&current, bit, value);
                    since_improvement = 0;
                } else {
                    flip(&mut current, bit);
                    since_improvement += 1;
                }
            }
        }
        Strategy::Steepest => {
            let mut at_optimum = false;
            while state.evaluations < budget {
                if at_optimum {
                    current = random_bits_with(n, options.restart_density, &mut rng)?;
                    apply_pins(&mut current);
                    state.restart(&current, scalarize(spec, &current)?);
                    at_optimum = false;
                    continue;
                }
                let mut best_move: Option<(usize, f64)> = None;
                let mut complete = true;
                for &bit in &free {
                    if state.evaluations >= budget {
                        complete = false;
                        break;
                    }
                    flip(&mut current, bit);
                    let value = scalarize(spec, &current)?;
                    flip(&mut current, bit);
                    state.evaluations += 1;
                    let reference = best_move.map_or(state.current_value, |(_, v)| v);
                    if improves(value, reference) {
                        best_move = Some((bit, value));
                    }
                }
                match best_move {
                    Some((bit, value)) => {
                        flip(&mut current, bit);
                        state.accept(&current, bit, value);
                    }
                    None => at_optimum = complete,
                }
            }
        }
    }
    Ok(state.finish(initial_value))
}

fn flip(bits: &mut Bits, i: usize) {
    let v = bits[i];
    bits.set(i, !v);
}

struct State {
    current_value: f64,
    best: Bits,
    best_value: f64,
    evaluations: usize,
    restarts: usize,
    trace: Vec<TraceEvent>,
}

impl State {
    fn accept(&mut self, current: &Bits, bit: usize, value: f64) {
        self.current_value = value;
        self.trace.push(TraceEvent::Flip {
            evaluation: self.evaluations,
            bit,
            value,
        });
        self.record_best(current);
    }

    fn restart(&mut self, current: &Bits, value: f64) {
        self.evaluations += 1;
        self.restarts += 1;
        self.current_value = value;
        self.trace.push(TraceEvent::Restart {
            evaluation: self.evaluations,
            value,
        });
        self.record_best(current);
    }

    fn record_best(&mut self, current: &Bits) {
        if self.current_value < self.best_value {
            self.best_value = self.current_value;
            self.best = current.clone();
        }
    }

    fn finish(self, initial_value: f64) -> SearchResult {
        SearchResult {
            best: self.best,
            best_value: self.best_value,
            initial_value,
            evaluations: self.evaluations,
            restarts: self.restarts,
            trace: self.trace,
        }
    }
}
