//! Norm–trace curves over F_{q^3}, the cubic surfaces attached to their
//! intersections with cubic graphs, and the resulting evaluation codes.

pub mod agcode;
pub mod census;
pub mod curve;
pub mod gf;
pub mod surface;

pub use gf::{Element, ExtField, Fe, FieldTower, GfError, Level};
pub use surface::{Coeffs, CubicForm, SurfaceClass, SurfaceError, Workbench};
