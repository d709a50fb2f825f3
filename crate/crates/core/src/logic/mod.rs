//! First-order logic over finite relational structures and their
//! ultrapowers.

mod enumerate;
mod eval;
mod formula;
mod parser;
mod transfer;

use thiserror::Error;

use crate::index_algebra::AlgebraError;
use crate::ultrapower::UltrapowerError;

pub use enumerate::{enumerate_formulas, enumerate_sentences, SentenceBounds, PRUNING_RULES, VARIABLES};
pub use eval::{eval_base, eval_collapsed, eval_star, truth_set, StarValuation, Valuation};
pub use formula::{Formula, Signature, Term, MEMBERSHIP};
pub use parser::parse;
pub use transfer::{transfer_check, transfer_check_sentences, TransferLine, TransferReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("syntax error at offset {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation `{relation}` has arity {expected}, got {found} arguments")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("constant c{0} does not name an element")]
    UnknownConstant(usize),
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error(transparent)]
    Ultrapower(#[from] UltrapowerError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
