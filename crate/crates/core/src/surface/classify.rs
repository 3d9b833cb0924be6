//! The classification decision tree and per-class point-count bounds.

use serde::{Serialize, Serializer};
use std::fmt;

use super::cone::{cone_test, ConeInfo};
use super::factor::{linear_factor, LinearFactor};
use super::form::CubicForm;
use super::locus::{singular_locus, SingularLocus};
use super::search::Workbench;
use super::SurfaceError;

/// Sorted extension degrees of the singular points, at most four of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Pattern {
    degrees: [u8; 4],
    len: u8,
}

impl Pattern {
    pub fn new(degrees: &[u8]) -> Self {
        assert!(degrees.len() <= 4, "at most four isolated singularities");
        let mut d = [0u8; 4];
        d[..degrees.len()].copy_from_slice(degrees);
        d[..degrees.len()].sort_unstable();
        Pattern {
            degrees: d,
            len: degrees.len() as u8,
        }
    }

    pub fn degrees(&self) -> &[u8] {
        &self.degrees[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, d: u8) -> bool {
        self.degrees().contains(&d)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<String> = self.degrees().iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl Serialize for Pattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.degrees().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SurfaceClass {
    Reducible,
    ConeOverSmoothCubic,
    ConeOverSingularCubic,
    NonIsolatedNotCone,
    Isolated(Pattern),
    Smooth,
}

impl SurfaceClass {
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceClass::Reducible => "Reducible",
            SurfaceClass::ConeOverSmoothCubic => "ConeOverSmoothCubic",
            SurfaceClass::ConeOverSingularCubic => "ConeOverSingularCubic",
            SurfaceClass::NonIsolatedNotCone => "NonIsolatedNotCone",
            SurfaceClass::Isolated(_) => "Isolated",
            SurfaceClass::Smooth => "Smooth",
        }
    }

    /// Number of isolated singular points (0 outside the isolated case).
    pub fn delta(&self) -> usize {
        match self {
            SurfaceClass::Isolated(p) => p.len(),
            _ => 0,
        }
    }

    pub fn pattern(&self) -> Pattern {
        match self {
            SurfaceClass::Isolated(p) => *p,
            _ => Pattern::default(),
        }
    }

    /// Classes for which the `q² + 7q + 1` bound is claimed when `A ≠ 0`.
    pub fn under_goal(&self) -> bool {
        matches!(
            self,
            SurfaceClass::Smooth
                | SurfaceClass::Isolated(_)
                | SurfaceClass::NonIsolatedNotCone
                | SurfaceClass::ConeOverSingularCubic
        )
    }

    pub const ALL_NAMES: [&'static str; 6] = [
        "Reducible",
        "ConeOverSmoothCubic",
        "ConeOverSingularCubic",
        "NonIsolatedNotCone",
        "Isolated",
        "Smooth",
    ];
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for SurfaceClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Everything the decision tree computed on the way to its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub class: SurfaceClass,
    pub factor: Option<LinearFactor>,
    pub locus: Option<SingularLocus>,
    pub cone: Option<ConeInfo>,
}

pub fn classify_detailed(wb: &Workbench, form: &CubicForm) -> Result<Classification, SurfaceError> {
    if let Some(factor) = linear_factor(wb, form)? {
        return Ok(Classification {
            class: SurfaceClass::Reducible,
            factor: Some(factor),
            locus: None,
            cone: None,
        });
    }
    let locus = singular_locus(wb, form)?;
    let cone = cone_test(wb, form, &locus)?;
    let class = match (&cone, locus.exceeded) {
        (Some(c), _) if c.base_singular => SurfaceClass::ConeOverSingularCubic,
        (Some(_), _) => SurfaceClass::ConeOverSmoothCubic,
        (None, true) => SurfaceClass::NonIsolatedNotCone,
        (None, false) if locus.points.is_empty() => SurfaceClass::Smooth,
        (None, false) => SurfaceClass::Isolated(Pattern::new(&locus.degrees())),
    };
    Ok(Classification {
        class,
        factor: None,
        locus: Some(locus),
        cone,
    })
}

pub fn classify(wb: &Workbench, form: &CubicForm) -> Result<SurfaceClass, SurfaceError> {
    Ok(classify_detailed(wb, form)?.class)
}

/// Admissible `η` in `q² + ηq + 1` for smooth cubic surfaces.
pub const WEIL_SET: [i64; 9] = [-2, -1, 0, 1, 2, 3, 4, 5, 7];

/// `(count - q² - 1) / q` when this is an integer.
pub fn eta(q: u64, count: u64) -> Option<i64> {
    let r = count as i64 - (q * q) as i64 - 1;
    (r % q as i64 == 0).then(|| r / q as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub ok: bool,
}

/// The bound that applies to a class, checked against the affine count
/// (and, for smooth surfaces, the projective count).
pub fn class_bound(class: &SurfaceClass, q: u64, affine: u64, projective: u64) -> BoundCheck {
    let q2 = q * q;
    let (name, ok) = match class {
        SurfaceClass::Smooth => (
            "weil",
            eta(q, projective).is_some_and(|e| WEIL_SET.contains(&e)),
        ),
        SurfaceClass::Isolated(p) if p.contains(1) => ("one_singular", affine + 6 <= q2 + 6 * q),
        SurfaceClass::Isolated(p) if p.contains(2) => {
            let upper = affine + q <= q2;
            // The lower bound is vacuous or unproven below q = 17.
            let lower = q < 17 || affine as i64 >= (q2 as i64) - 14 * q as i64 + 39;
            ("two_singular", upper && lower)
        }
        SurfaceClass::Isolated(p) if p.degrees() == [3, 3, 3] => (
            "three_singular",
            eta(q, affine).is_some_and(|e| (0..=2).contains(&e)),
        ),
        SurfaceClass::Isolated(p) if p.degrees() == [4, 4, 4, 4] => ("four_singular", affine <= q2),
        SurfaceClass::Isolated(_) => ("isolated", affine <= q2 + 7 * q + 1),
        SurfaceClass::ConeOverSingularCubic => ("cone_singular", affine <= q2 + 2 * q + 1),
        SurfaceClass::ConeOverSmoothCubic => {
            // affine ≤ q² + 2q√q + 1, compared in integers
            let slack = affine as i64 - q2 as i64 - 1;
            (
                "cone_smooth",
                slack <= 0 || (slack * slack) as u64 <= 4 * q * q * q,
            )
        }
        SurfaceClass::NonIsolatedNotCone => {
            ("non_isolated", affine <= 3 * q2 && affine <= q2 + 7 * q + 1)
        }
        SurfaceClass::Reducible => ("reducible", affine <= 3 * q2),
    };
    BoundCheck { name, ok }
}

/// The `q² + 7q + 1` claim for `A ≠ 0`; vacuously true outside its classes.
pub fn goal_holds(class: &SurfaceClass, a_nonzero: bool, q: u64, affine: u64) -> bool {
    !(a_nonzero && class.under_goal()) || affine <= q * q + 7 * q + 1
}
