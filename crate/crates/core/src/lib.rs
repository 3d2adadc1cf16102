//! Opinion dynamics with two competing camps investing in a social network.

pub mod allocation;
pub mod dynamics;
pub mod error;
pub mod linsolve;
pub mod lp;
pub mod network;
pub mod oracle;
pub mod robust;
pub mod sparse;
pub mod strategies;
pub mod verify;

pub use allocation::{Allocation, GameOutcome};
pub use dynamics::{
    influence_vector, iterate_dynamics, opinion_sum, steady_state, InfluenceVector, OpinionState,
    Trajectory,
};
pub use error::{
    Error, LpError, NetworkError, OracleError, RobustError, RowViolation, SolveError, StrategyError,
};
pub use lp::{solve_lp, LpProblem, LpSolution, LpStatus, RowKind};
pub use network::{
    build_network, generate_extra_weights, generated_network, karate, load_edge_list,
    weighted_class_weights, Budgets, EdgeList, ExtraWeight, Graph, Network, ValidationPolicy,
};
pub use robust::{
    build_box_sum_polytope, feasible_boundary_set, realized_value, robust_good_strategy,
    RobustOutcome, UncertaintyPolytope,
};
pub use strategies::adversary::{
    adversary_bounded, adversary_unbounded, deviation_game, deviation_strategy, DesiredInvestment,
};
pub use strategies::basic::{
    fundamental_game, is_random_optimal, optimal_bounded, optimal_unbounded,
};
pub use strategies::ccc::{
    bad_best_response, candidate_boundaries, ccc_maxmin, ccc_minmax, good_allocation_for_boundary,
    BoundaryCandidate,
};
pub use strategies::concave::{concave_bounded, concave_game, concave_unbounded, ConcaveParams};
