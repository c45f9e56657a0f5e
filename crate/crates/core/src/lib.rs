//! Actual causes of Hennessy-Milner effects in finite labeled transition
//! systems, causal projections, and empirical checks of their
//! compositionality under interleaving.

pub mod causality;
pub mod composition;
pub mod computation;
pub mod error;
pub mod hml;
pub mod lts;
pub mod testkit;

pub use error::{ComputationError, FormulaError, LtsError};
pub use hml::{formula_alphabet, is_immediate_effect, parse_formula, satisfies, EffectContext, Formula};
pub use lts::{Label, Lts, LtsBuilder, StateId, Word};
pub use causality::{
    causal_projection, cause_candidate, causes, check_computation, classify_word, extension_universe,
    judge_core, CauseReport, CauseSet, Classification, Condition, Conditions, Exactness,
};
pub use computation::{Computation, Core, DList};
