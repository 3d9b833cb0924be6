//! Search for a plane contained in a cubic surface.
//!
//! If the homogenized cubic factors over the algebraic closure, its linear
//! components are permuted by Frobenius. Orbits have size 1 or 3 unless a
//! rational component also exists, so extensions of degree 1 and 3 suffice.

use serde::Serialize;

use crate::gf::{ExtField, Fe};

use super::form::CubicForm;
use super::search::{HPoly, Workbench};
use super::SurfaceError;

/// Limit on candidate planes tried per leading variable.
pub const MAX_PLANE_CANDIDATES: u64 = 1 << 22;

/// `x_lead + Σ_{i > lead} a_i x_i`, coefficients as encodings in the flat
/// field of the given degree over the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFactor {
    pub degree: u8,
    pub lead: u8,
    pub coeffs: [u32; 4],
}

pub fn linear_factor(
    wb: &Workbench,
    form: &CubicForm,
) -> Result<Option<LinearFactor>, SurfaceError> {
    for d in [1u32, 3] {
        let sf = wb.search_field(form.level(), d)?;
        let poly = HPoly::from_form(sf, form);
        if let Some((lead, a)) = search(&sf.field, &poly)? {
            let f = &sf.field;
            return Ok(Some(LinearFactor {
                degree: d as u8,
                lead: lead as u8,
                coeffs: a.map(|c| f.encoding(c)),
            }));
        }
    }
    Ok(None)
}

/// Whether the plane `x_lead = -Σ a_i x_i` lies on `F = 0`.
pub fn plane_divides(f: &ExtField, poly: &HPoly, lead: usize, a: &[Fe; 4]) -> bool {
    // x_lead = y_lead - Σ a_i y_i, other x_i = y_i; then the plane is y_lead = 0.
    let mut l = [[f.zero(); 4]; 4];
    for (i, row) in l.iter_mut().enumerate() {
        row[i] = f.one();
    }
    for i in lead + 1..4 {
        l[lead][i] = f.neg(a[i]);
    }
    let g = poly.substitute(f, &l);
    g.terms.iter().all(|(e, _)| e[lead] > 0)
}

fn search(f: &ExtField, poly: &HPoly) -> Result<Option<(usize, [Fe; 4])>, SurfaceError> {
    let zero = f.zero();
    let one = f.one();
    for lead in 0..4 {
        // Candidates for a_i: roots of t ↦ F(P) with P_lead = -t, P_i = 1.
        let mut cands: Vec<Vec<Fe>> = Vec::new();
        let mut total: u64 = 1;
        for i in lead + 1..4 {
            let mut fixed = [zero; 4];
            fixed[i] = one;
            let u = poly.univariate(f, &fixed, lead);
            // substitute x_lead = -t: flip signs of odd coefficients
            let mut c = u.c;
            c[1] = f.neg(c[1]);
            c[3] = f.neg(c[3]);
            let roots = super::search::UPoly::new(f, c).roots(f);
            total = total.saturating_mul(roots.len() as u64);
            cands.push(roots);
        }
        if lead == 3 {
            // the plane x3 = 0 itself
            if poly.without(3).is_zero() {
                return Ok(Some((3, [zero; 4])));
            }
            continue;
        }
        if total == 0 {
            continue;
        }
        if total > MAX_PLANE_CANDIDATES {
            return Err(SurfaceError::TooLarge {
                what: "plane candidates",
                size: total,
                limit: MAX_PLANE_CANDIDATES,
            });
        }
        let probes = probe_points(f, lead);
        let mut idx = vec![0usize; cands.len()];
        loop {
            let mut a = [zero; 4];
            for (k, &j) in idx.iter().enumerate() {
                a[lead + 1 + k] = cands[k][j];
            }
            if probes_vanish(f, poly, lead, &a, &probes) && plane_divides(f, poly, lead, &a) {
                return Ok(Some((lead, a)));
            }
            // odometer
            let mut k = 0;
            loop {
                if k == idx.len() {
                    break;
                }
                idx[k] += 1;
                if idx[k] < cands[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Ok(None)
}

/// A few fixed points with the free coordinates set, for a cheap rejection
/// test before the symbolic check.
fn probe_points(f: &ExtField, lead: usize) -> Vec<[Fe; 4]> {
    let n = f.size().min(5);
    let mut out = Vec::new();
    for s in 1..n {
        for t in 0..n {
            let mut p = [f.zero(); 4];
            let vals = [
                f.from_encoding(s),
                f.from_encoding(t),
                f.from_encoding((s + t) % n),
            ];
            for (k, i) in (0..4).filter(|&i| i != lead).enumerate() {
                p[i] = vals[k];
            }
            out.push(p);
        }
    }
    out
}

fn probes_vanish(f: &ExtField, poly: &HPoly, lead: usize, a: &[Fe; 4], probes: &[[Fe; 4]]) -> bool {
    probes.iter().all(|p| {
        let mut x = *p;
        let mut s = f.zero();
        for i in lead + 1..4 {
            s = f.add(s, f.mul(a[i], x[i]));
        }
        x[lead] = f.neg(s);
        f.is_zero(poly.eval(f, &x))
    })
}
