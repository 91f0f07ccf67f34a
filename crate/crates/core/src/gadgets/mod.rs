//! Reductions from Boolean formulas to game instances, plus brute-force
//! formula evaluation to check them against.

mod formula;
mod generators;

pub use formula::{
    cnf_corpus, eval_cnf_sat, eval_qbf, parse_dimacs, parse_qbf, qbf_corpus, CnfFormula, QbfFormula,
    MAX_EVAL_VARS,
};
pub use generators::{gen_li_np, gen_li_pspace, gen_static_np};
