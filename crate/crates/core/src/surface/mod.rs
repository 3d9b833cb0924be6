//! Cubic surfaces attached to a coefficient tuple, their rational points,
//! singularities and classification.

mod classify;
mod cone;
mod count;
mod factor;
mod form;
mod locus;
mod search;

use thiserror::Error;

use crate::gf::GfError;

pub use classify::{
    class_bound, classify, classify_detailed, eta, goal_holds, BoundCheck, Classification, Pattern,
    SurfaceClass, WEIL_SET,
};
pub use cone::{cone_test, ConeInfo};
pub use count::{count_at_infinity, count_points, count_projective, MAX_COUNT_SPACE};
pub use factor::{linear_factor, LinearFactor};
pub use form::{apply_psi, build_s1, build_s2, monomial_index, Coeffs, CubicForm, MONOMIALS};
pub use locus::{
    rational_coords, singular_at_infinity, singular_locus, singular_locus_over, LocusPoint,
    SingularLocus, MAX_ISOLATED,
};
pub use search::{HPoly, SearchField, UPoly, Workbench};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("{what}: search space {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u64,
        limit: u64,
    },
    #[error("form has no cubic terms")]
    NotCubic,
}
