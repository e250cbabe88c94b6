//! Discrete multi-objective search over genes: weighted-sum scalarization,
//! bit-flip local search and weight sweeps producing Pareto frontiers.

pub mod objective;
pub mod pareto;
pub mod search;

pub use objective::{scalarize, ObjectiveSpec, ObjectiveTerm, SurrogateQ, TermKind};
pub use pareto::{
    dominates, linear_weights, multi_objective_run, nondominated_filter, pareto_sweep, simplex_grid, tradeoff_pairs,
    weight_sweep, ParetoFrontier, ParetoRecord, SweepOptions,
};
pub use search::{local_search, SearchOptions, SearchResult, Strategy, TraceEvent};
