//! Exact desk-scale solvers for the per-stage base problems.

pub mod assignment;
pub mod graph;
pub mod hmmd;
pub mod knapsack;
pub mod multiple_choice;

pub use assignment::{solve_assignment, AssignmentInstance, Permutation};
pub use graph::{minimum_spanning_tree, steiner_tree, Edge, EdgeKey, TreeSolution, WeightedGraph};
pub use hmmd::{
    evaluate_composite, hmmd_synthesize, Alternative, Compatibility, Component, CompositeSolution,
    MorphSystem,
};
pub use knapsack::{solve_knapsack, Item, KnapsackInstance, SubsetSolution};
pub use multiple_choice::{solve_multiple_choice, GroupSelection, McGroup, MultipleChoiceInstance};
