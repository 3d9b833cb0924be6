//! Cone detection.
//!
//! `P` is a vertex iff `F(X + tP) = F(X)` identically. After the coordinate
//! change `x_i = y_i + P_i y_j` (with `P_j = 1`) this says that `y_j` does not
//! occur. For an irreducible cubic the vertex is unique, hence rational.

use serde::Serialize;

use crate::gf::{ExtField, Fe};

use super::form::CubicForm;
use super::locus::SingularLocus;
use super::search::{HPoly, Workbench};
use super::SurfaceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConeInfo {
    /// Tower codes at the form's level, first nonzero coordinate 1.
    pub vertex: [u32; 4],
    /// Whether the plane cubic the cone is built over is singular.
    pub base_singular: bool,
}

/// Rational points of P^n as coordinate vectors, first nonzero entry 1.
fn projective_points(f: &ExtField, n: usize) -> Vec<[Fe; 4]> {
    let mut out = Vec::new();
    for j in 0..=n {
        // first nonzero coordinate is j
        let free = n - j;
        let count = (f.size() as u64).pow(free as u32);
        for code in 0..count {
            let mut p = [f.zero(); 4];
            p[j] = f.one();
            let mut c = code;
            for slot in &mut p[j + 1..=n] {
                *slot = f.from_encoding((c % f.size() as u64) as u32);
                c /= f.size() as u64;
            }
            out.push(p);
        }
    }
    out
}

fn is_singular_at(f: &ExtField, poly: &HPoly, grad: &[HPoly], p: &[Fe; 4]) -> bool {
    f.is_zero(poly.eval(f, p)) && grad.iter().all(|g| f.is_zero(g.eval(f, p)))
}

pub fn cone_test(
    wb: &Workbench,
    form: &CubicForm,
    locus: &SingularLocus,
) -> Result<Option<ConeInfo>, SurfaceError> {
    if locus.points.is_empty() {
        return Ok(None);
    }
    let level = form.level();
    let sf = wb.search_field(level, 1)?;
    let f = &sf.field;
    let poly = HPoly::from_form(sf, form);
    let grad: Vec<HPoly> = (0..4).map(|i| poly.partial(f, i)).collect();

    let candidates: Vec<[Fe; 4]> = if locus.exceeded {
        projective_points(f, 3)
            .into_iter()
            .filter(|p| is_singular_at(f, &poly, &grad, p))
            .collect()
    } else {
        locus
            .points
            .iter()
            .filter(|p| p.degree == 1)
            .map(|p| p.coords.map(|c| f.from_encoding(c)))
            .collect()
    };

    for p in candidates {
        let j = (0..4)
            .find(|&i| !f.is_zero(p[i]))
            .expect("projective point");
        let mut l = [[f.zero(); 4]; 4];
        for (i, row) in l.iter_mut().enumerate() {
            row[i] = f.one();
            if i != j {
                row[j] = p[i];
            }
        }
        let g = poly.substitute(f, &l);
        if g.terms.iter().any(|(e, _)| e[j] > 0) {
            continue;
        }
        let base_grad: Vec<HPoly> = (0..4)
            .filter(|&i| i != j)
            .map(|i| g.partial(f, i))
            .collect();
        let base_singular = projective_points(f, 3)
            .into_iter()
            .filter(|x| f.is_zero(x[j]))
            .any(|x| is_singular_at(f, &g, &base_grad, &x));
        let mut vertex = [0; 4];
        for (slot, &c) in vertex.iter_mut().zip(&p) {
            *slot = sf.to_tower(level, c).expect("rational point");
        }
        return Ok(Some(ConeInfo {
            vertex,
            base_singular,
        }));
    }
    Ok(None)
}
