//! Singular points of the projective closure, found by sweeping the
//! extensions of degree 1 to 4 of the coefficient field.

use serde::Serialize;

use crate::gf::{ExtField, Fe, Level};

use super::form::CubicForm;
use super::search::{common_roots, HPoly, SearchField, UPoly, Workbench};
use super::SurfaceError;

/// A double point of a cubic surface not on a singular curve is one of at
/// most four, so a fifth point means the singular locus is a curve.
pub const MAX_ISOLATED: usize = 4;

/// Limit on the number of lines swept per extension degree.
pub const MAX_SWEEP_LINES: u64 = 1 << 28;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LocusPoint {
    /// Smallest extension degree over the coefficient field containing the
    /// point.
    pub degree: u8,
    /// Encodings in the flat search field of that degree. The last
    /// coordinate is 1 for affine points and 0 at infinity; at infinity the
    /// first nonzero coordinate is 1.
    pub coords: [u32; 4],
}

impl LocusPoint {
    pub fn is_affine(&self) -> bool {
        self.coords[3] == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularLocus {
    pub points: Vec<LocusPoint>,
    /// More than [`MAX_ISOLATED`] points were found.
    pub exceeded: bool,
    /// Largest extension degree that was swept.
    pub searched_degree: u8,
}

impl SingularLocus {
    /// Extension degrees of the points, ascending.
    pub fn degrees(&self) -> Vec<u8> {
        let mut d: Vec<u8> = self.points.iter().map(|p| p.degree).collect();
        d.sort_unstable();
        d
    }

    pub fn has_rational_point(&self) -> bool {
        self.points.iter().any(|p| p.degree == 1)
    }
}

/// Smallest `k | d` such that every coordinate is fixed by the `k`-th power
/// of the coefficient-field Frobenius.
fn point_degree(f: &ExtField, level_degree: u32, d: u32, x: &[Fe; 4]) -> u32 {
    (1..=d)
        .filter(|&k| d.is_multiple_of(k))
        .find(|&k| x.iter().all(|&c| f.frobenius(c, level_degree * k) == c))
        .unwrap_or(d)
}

struct Collector<'a> {
    sf: &'a SearchField,
    level_degree: u32,
    d: u32,
    found: &'a mut Vec<LocusPoint>,
}

impl Collector<'_> {
    /// Record `x` and its conjugates if its degree is exactly `d`; returns
    /// true once the bound is exceeded.
    fn push(&mut self, x: [Fe; 4]) -> bool {
        let f = &self.sf.field;
        if point_degree(f, self.level_degree, self.d, &x) != self.d {
            return false;
        }
        for k in 0..self.d {
            let coords = x.map(|c| f.encoding(f.frobenius(c, self.level_degree * k)));
            let p = LocusPoint {
                degree: self.d as u8,
                coords,
            };
            if !self.found.contains(&p) {
                self.found.push(p);
            }
            if self.found.len() > MAX_ISOLATED {
                return true;
            }
        }
        false
    }
}

/// Singular points over extensions of degree up to `max_degree` (≤ 4).
pub fn singular_locus_over(
    wb: &Workbench,
    form: &CubicForm,
    max_degree: u32,
) -> Result<SingularLocus, SurfaceError> {
    let max_degree = max_degree.min(4);
    let mut found = Vec::new();
    for d in 1..=max_degree {
        let size = wb.extension_size(form.level(), d);
        if size.saturating_pow(2) > MAX_SWEEP_LINES {
            return Err(SurfaceError::TooLarge {
                what: "singular locus sweep",
                size: size.saturating_pow(2),
                limit: MAX_SWEEP_LINES,
            });
        }
        let sf = wb.search_field(form.level(), d)?;
        let exceeded = sweep(sf, wb.level_degree(form.level()), d, form, &mut found);
        if exceeded {
            return Ok(SingularLocus {
                points: found,
                exceeded: true,
                searched_degree: d as u8,
            });
        }
    }
    Ok(SingularLocus {
        points: found,
        exceeded: false,
        searched_degree: max_degree as u8,
    })
}

pub fn singular_locus(wb: &Workbench, form: &CubicForm) -> Result<SingularLocus, SurfaceError> {
    singular_locus_over(wb, form, 4)
}

fn sweep(
    sf: &SearchField,
    level_degree: u32,
    d: u32,
    form: &CubicForm,
    found: &mut Vec<LocusPoint>,
) -> bool {
    let f = &sf.field;
    let big = HPoly::from_form(sf, form);
    let grad: Vec<HPoly> = (0..4).map(|i| big.partial(f, i)).collect();
    let mut col = Collector {
        sf,
        level_degree,
        d,
        found,
    };
    let (zero, one) = (f.zero(), f.one());

    // Affine part: x3 = 1, where the x3-partial follows from Euler's identity.
    let affine = [
        grad[0].clone(),
        grad[1].clone(),
        grad[2].clone(),
        big.clone(),
    ];
    // Points of degree d come in full Frobenius orbits, so x0 can be taken
    // up to conjugacy.
    let reps: Vec<Fe> = f
        .elements()
        .filter(|&x| (1..d).all(|k| f.encoding(f.frobenius(x, level_degree * k)) >= f.encoding(x)))
        .collect();
    for &x0 in &reps {
        let grids: Vec<Grid> = affine.iter().map(|p| Grid::new(f, p, x0)).collect();
        for x1 in f.elements() {
            let pw = [one, x1, f.mul(x1, x1), f.pow(x1, 3)];
            let mut g: Option<UPoly> = None;
            for grid in &grids {
                let u = grid.at(f, &pw);
                let next = match g {
                    None => u,
                    Some(g) => UPoly::gcd(f, g, u),
                };
                g = Some(next);
                if next.is_unit() {
                    break;
                }
            }
            let Some(g) = g.filter(|g| !g.is_unit()) else {
                continue;
            };
            for x2 in g.roots(f) {
                if col.push([x0, x1, x2, one]) {
                    return true;
                }
            }
        }
    }

    // Plane at infinity.
    let at_inf = [
        grad[0].clone(),
        grad[1].clone(),
        grad[2].clone(),
        grad[3].clone(),
        big.clone(),
    ];
    for a in f.elements() {
        let fixed = [one, a, zero, zero];
        for b in common_roots(f, &at_inf, &fixed, 2) {
            if col.push([one, a, b, zero]) {
                return true;
            }
        }
    }
    for b in common_roots(f, &at_inf, &[zero, one, zero, zero], 2) {
        if col.push([zero, one, b, zero]) {
            return true;
        }
    }
    let p = [zero, zero, one, zero];
    if at_inf.iter().all(|g| f.is_zero(g.eval(f, &p))) && col.push(p) {
        return true;
    }
    false
}

/// A polynomial on the affine chart with `x0` fixed, as coefficients of
/// `x1^i x2^j` at `[i][j]`.
struct Grid {
    c: [[Fe; 4]; 4],
}

impl Grid {
    fn new(f: &ExtField, p: &HPoly, x0: Fe) -> Self {
        let mut c = [[f.zero(); 4]; 4];
        for &(e, v) in &p.terms {
            let t = f.mul(v, f.pow(x0, e[0] as u64));
            let slot = &mut c[e[1] as usize][e[2] as usize];
            *slot = f.add(*slot, t);
        }
        Grid { c }
    }

    /// Restriction to `x1 = pw[1]`, as a polynomial in `x2`.
    fn at(&self, f: &ExtField, pw: &[Fe; 4]) -> UPoly {
        let mut u = [f.zero(); 4];
        for (i, row) in self.c.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !f.is_zero(v) {
                    u[j] = f.add(u[j], f.mul(v, pw[i]));
                }
            }
        }
        UPoly::new(f, u)
    }
}

/// Whether the plane cubic cut out at infinity is singular over some
/// extension of degree ≤ 4.
pub fn singular_at_infinity(wb: &Workbench, form: &CubicForm) -> Result<bool, SurfaceError> {
    for d in 1..=4 {
        let sf = wb.search_field(form.level(), d)?;
        let f = &sf.field;
        let top = HPoly::from_form(sf, form).without(3);
        let polys = [
            top.partial(f, 0),
            top.partial(f, 1),
            top.partial(f, 2),
            top.clone(),
        ];
        let (zero, one) = (f.zero(), f.one());
        for a in f.elements() {
            if !common_roots(f, &polys, &[one, a, zero, zero], 2).is_empty() {
                return Ok(true);
            }
        }
        if !common_roots(f, &polys, &[zero, one, zero, zero], 2).is_empty() {
            return Ok(true);
        }
        let p = [zero, zero, one, zero];
        if polys.iter().all(|g| f.is_zero(g.eval(f, &p))) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Tower codes of a rational point (degree 1), at the form's level.
pub fn rational_coords(
    wb: &Workbench,
    level: Level,
    p: &LocusPoint,
) -> Result<Option<[u32; 4]>, SurfaceError> {
    if p.degree != 1 {
        return Ok(None);
    }
    let sf = wb.search_field(level, 1)?;
    let f = &sf.field;
    let mut out = [0; 4];
    for (slot, &c) in out.iter_mut().zip(&p.coords) {
        match sf.to_tower(level, f.from_encoding(c)) {
            Some(v) => *slot = v,
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}
