//! Rational point counts over extensions of the coefficient field.

use rayon::prelude::*;

use super::form::CubicForm;
use super::search::{HPoly, Workbench};
use super::SurfaceError;

/// Limit on `Q³` for affine enumeration.
pub const MAX_COUNT_SPACE: u64 = 1 << 28;

/// Affine zeros with coordinates in the degree-`d` extension of the
/// coefficient field.
pub fn count_points(wb: &Workbench, form: &CubicForm, d: u32) -> Result<u64, SurfaceError> {
    let size = wb.extension_size(form.level(), d);
    let space = size.saturating_pow(3);
    if space > MAX_COUNT_SPACE {
        return Err(SurfaceError::TooLarge {
            what: "point count",
            size: space,
            limit: MAX_COUNT_SPACE,
        });
    }
    let sf = wb.search_field(form.level(), d)?;
    let f = &sf.field;
    let poly = HPoly::from_form(sf, form);
    let one = f.one();
    let count_row = |x0| -> u64 {
        f.elements()
            .map(|x1| poly.univariate(f, &[x0, x1, one, one], 2).count_roots(f))
            .sum()
    };
    let total = if size >= 64 {
        let xs: Vec<_> = f.elements().collect();
        xs.into_par_iter().map(count_row).sum()
    } else {
        f.elements().map(count_row).sum()
    };
    Ok(total)
}

/// Zeros of the cubic part on the plane at infinity.
pub fn count_at_infinity(wb: &Workbench, form: &CubicForm, d: u32) -> Result<u64, SurfaceError> {
    let size = wb.extension_size(form.level(), d);
    if size.saturating_pow(2) > MAX_COUNT_SPACE {
        return Err(SurfaceError::TooLarge {
            what: "point count at infinity",
            size: size.saturating_pow(2),
            limit: MAX_COUNT_SPACE,
        });
    }
    let sf = wb.search_field(form.level(), d)?;
    let f = &sf.field;
    let top = HPoly::from_form(sf, form).without(3);
    let (zero, one) = (f.zero(), f.one());
    let mut n = 0;
    for a in f.elements() {
        n += top.univariate(f, &[one, a, one, zero], 2).count_roots(f);
    }
    n += top.univariate(f, &[zero, one, one, zero], 2).count_roots(f);
    if f.is_zero(top.eval(f, &[zero, zero, one, zero])) {
        n += 1;
    }
    Ok(n)
}

/// Zeros on the projective closure.
pub fn count_projective(wb: &Workbench, form: &CubicForm, d: u32) -> Result<u64, SurfaceError> {
    Ok(count_points(wb, form, d)? + count_at_infinity(wb, form, d)?)
}
