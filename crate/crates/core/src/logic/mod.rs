//! First-order formulas: syntax, evaluation and Ehrenfeucht–Fraïssé types.

mod eval;
mod formula;
mod parser;

pub use eval::{evaluate, evaluate_in, holds, holds_lenient, solution_set, Assignment, Evaluator, Interpretation};
#[allow(unused_imports)]
pub(crate) use eval::{eval_node, Compiled, Node, Oracle, Tri};
pub use formula::{Formula, NVar, Nameless};
pub use parser::{parse_formula, parse_formula_untyped, parse_sentence};
mod ef;
pub use ef::{
    characteristic_formula, characteristic_sentence, rank_equivalent, rank_types, rank_types_exact,
    rank_types_with, scott_sentence, sentences_up_to, structures_up_to_iso, theory_key, RankTypePartition,
    SentenceBudget, TypeCaps, TypeInterner,
};
