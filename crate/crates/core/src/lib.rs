//! Nested-aggregate disjunctive logic programs with preference rules.

pub mod evaluator;
pub mod grounder;
pub mod model;
pub mod parser;
pub mod pipeline;
pub mod preference;
pub mod ptsp;
pub mod rational;
pub mod render;
pub mod solver;

pub use evaluator::{eval_aggregate, eval_builtin, multiset_of, satisfies_conjunct, satisfies_rule, Multiset, Valuation};
pub use grounder::{ground_program, GroundError, GroundProgram, GroundingConfig, GroundingMode};
pub use model::*;
pub use pipeline::{solve_program, Solved};
pub use preference::{rank, RankResult, Relation, Strategy};
pub use parser::{parse_program, parse_program_with, ParseError, ParseOptions};
pub use render::render_program;
pub use solver::{answer_sets, is_answer_set, reduct, AnswerSetCollection, SolveError, SolveOptions};
