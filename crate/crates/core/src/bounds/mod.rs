//! Lower bounds by the entropy method: the polymatroid LP and certificate
//! checkers for the inequalities behind the cube and lattice bounds.

mod driver;
mod lemmas;
mod lp;
mod simplex;

pub use driver::{lp_bound, symmetry_check, LpBound, SymmetryReport, MAX_SYMMETRY_DIM};
pub use lemmas::{
    bracket, check_lemma1, check_lemma2, check_lemma_dk, check_lemma_path, lattice_lower_bound, lemma2_level_parts,
    lemma_dk_constant, Certificate, Entry, LatticeBound, Lemma2Parts, LemmaId,
};
pub use lp::{build_entropy_lp, build_entropy_lp_with, LpOptions, LpProblem, Objective, Row, RowKind, MAX_LP_VERTICES};
pub use simplex::{solve_lp, LpSolution};
