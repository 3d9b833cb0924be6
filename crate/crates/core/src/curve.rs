//! The norm–trace curve N(x) = T(y) over F_{q^3}.

use crate::gf::{Element, FieldTower, GfError, Level};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CurvePoint {
    pub x: u32,
    pub y: u32,
}

/// All affine rational points, sorted by `(x, y)` code.
#[derive(Debug, Clone)]
pub struct CurveTable {
    pub points: Vec<CurvePoint>,
}

impl CurveTable {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// For every `c` in F_q, the sorted list of `y` with `T(y) = c`.
pub fn trace_fibers(tower: &FieldTower) -> Vec<Vec<u32>> {
    let mut fibers = vec![Vec::new(); tower.q() as usize];
    for y in 0..tower.cubic_size() {
        fibers[tower.ctrace(y) as usize].push(y);
    }
    fibers
}

pub fn enumerate_points(tower: &FieldTower) -> CurveTable {
    let fibers = trace_fibers(tower);
    let mut points = Vec::with_capacity(tower.q().pow(5) as usize);
    for x in 0..tower.cubic_size() {
        for &y in &fibers[tower.cnorm(x) as usize] {
            points.push(CurvePoint { x, y });
        }
    }
    CurveTable { points }
}

pub fn is_on_curve(tower: &FieldTower, x: Element, y: Element) -> Result<bool, GfError> {
    let x = x.lift(Level::Cubic);
    let y = y.lift(Level::Cubic);
    Ok(tower.norm(x)? == tower.trace(y)?)
}

/// `(q², q²+q+1)`, the generators of the Weierstrass semigroup at infinity.
pub fn semigroup_generators(q: u32) -> (u32, u32) {
    (q * q, q * q + q + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AutomorphismReport {
    pub count_checked: u64,
    pub all_preserve: bool,
}

/// The map `(x, y) -> (b x, N(b) y + a)`.
pub fn apply_automorphism(tower: &FieldTower, a: u32, b: u32, p: CurvePoint) -> CurvePoint {
    CurvePoint {
        x: tower.cmul(b, p.x),
        y: tower.cadd(tower.cmul(tower.cnorm(b), p.y), a),
    }
}

/// Check every map `(x, y) -> (b x, N(b) y + a)` with `T(a) = 0`, `b ≠ 0`
/// sends the curve into itself.
pub fn verify_automorphisms(tower: &FieldTower) -> AutomorphismReport {
    let table = enumerate_points(tower);
    let kernel: Vec<u32> = (0..tower.cubic_size())
        .filter(|&a| tower.ctrace(a) == 0)
        .collect();
    let mut count = 0u64;
    let mut ok = true;
    for &a in &kernel {
        for b in 1..tower.cubic_size() {
            count += 1;
            ok &= table.points.iter().all(|&pt| {
                let img = apply_automorphism(tower, a, b, pt);
                tower.cnorm(img.x) == tower.ctrace(img.y)
            });
        }
    }
    AutomorphismReport {
        count_checked: count,
        all_preserve: ok,
    }
}
