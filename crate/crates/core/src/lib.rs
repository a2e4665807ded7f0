//! Proof search for hypersequent calculi over full Lambek calculus with
//! exchange, extended by structural rules.

mod syntax;

pub mod backward;
pub mod calculus;
pub mod checker;
pub mod derivation;
pub mod forward;
pub mod formula;
pub mod hyperseq;
pub mod oracle;
pub mod semantics;
pub mod wqo;

pub use calculus::{builtin_calculus, Calculus, CalculusError, RuleSchema};
pub use formula::{parse_formula, Formula, OmegaSet};
pub use hyperseq::{parse_hypersequent, Hypersequent, Multiset, Sequent};
