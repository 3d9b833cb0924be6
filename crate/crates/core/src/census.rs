//! Sweeps over coefficient tuples `(A, B, C, D)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::gf::{FieldTower, Level};
use crate::surface::{
    build_s1, build_s2, class_bound, classify, count_points, count_projective, eta, goal_holds,
    singular_locus, singular_locus_over, Coeffs, SurfaceClass, SurfaceError, Workbench,
};

/// `#{x ∈ F_{q^3} : N(x) = T(A x³ + B x² + C x + D)}`.
pub fn intersect_count(tower: &FieldTower, k: Coeffs) -> u64 {
    (0..tower.cubic_size())
        .filter(|&x| {
            let x2 = tower.cmul(x, x);
            let x3 = tower.cmul(x2, x);
            let v = tower.cadd(
                tower.cadd(tower.cmul(k.a, x3), tower.cmul(k.b, x2)),
                tower.cadd(tower.cmul(k.c, x), k.d),
            );
            tower.cnorm(x) == tower.ctrace(v)
        })
        .count() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    All,
    ANonzero,
    B0C0,
    A0,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::All => "all",
            Family::ANonzero => "A_nonzero",
            Family::B0C0 => "B0C0",
            Family::A0 => "a0",
        }
    }

    pub fn contains(&self, k: &Coeffs) -> bool {
        match self {
            Family::All => true,
            Family::ANonzero => k.a != 0,
            Family::B0C0 => k.a != 0 && k.b == 0 && k.c == 0,
            Family::A0 => k.a == 0,
        }
    }

    /// Number of tuples in the family.
    pub fn size(&self, tower: &FieldTower) -> u64 {
        let n = tower.cubic_size() as u64;
        match self {
            Family::All => n.pow(4),
            Family::ANonzero => (n - 1) * n.pow(3),
            Family::B0C0 => (n - 1) * n,
            Family::A0 => n.pow(3),
        }
    }

    fn a_range(&self, n: u32) -> std::ops::Range<u32> {
        match self {
            Family::A0 => 0..1,
            Family::ANonzero | Family::B0C0 => 1..n,
            Family::All => 0..n,
        }
    }

    /// Every tuple in canonical order (A most significant).
    fn tuples(&self, tower: &FieldTower) -> Vec<Coeffs> {
        let n = tower.cubic_size();
        let bc = if *self == Family::B0C0 { 1 } else { n };
        let mut out = Vec::new();
        for a in self.a_range(n) {
            for b in 0..bc {
                for c in 0..bc {
                    for d in 0..n {
                        out.push(Coeffs::new(a, b, c, d));
                    }
                }
            }
        }
        out
    }

    /// `n` tuples drawn uniformly from the family, sorted and deduplicated.
    fn sample(&self, tower: &FieldTower, n: usize, seed: u64) -> Vec<Coeffs> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = tower.cubic_size();
        let ar = self.a_range(size);
        let mut out: Vec<Coeffs> = (0..n)
            .map(|_| {
                let a = rng.gen_range(ar.clone());
                let (b, c) = if *self == Family::B0C0 {
                    (0, 0)
                } else {
                    (rng.gen_range(0..size), rng.gen_range(0..size))
                };
                Coeffs::new(a, b, c, rng.gen_range(0..size))
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(Family::All),
            "A_nonzero" => Ok(Family::ANonzero),
            "B0C0" => Ok(Family::B0C0),
            "a0" => Ok(Family::A0),
            _ => Err(format!(
                "unknown family `{s}` (expected all, A_nonzero, B0C0 or a0)"
            )),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Classification and counts of one surface, shared by every `D` with the
/// same trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceFacts {
    pub class: SurfaceClass,
    pub count: u64,
    pub count_projective: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub coeffs: Coeffs,
    /// Number of `x` with `N(x) = T(A x³ + B x² + C x + D)`.
    pub count: u64,
    pub count_projective: u64,
    pub class: SurfaceClass,
    pub eta: Option<i64>,
    pub bound: &'static str,
    /// The class bound and the `q² + 7q + 1` claim both hold.
    pub bound_ok: bool,
    /// The `q² + 7q + 1` claim holds (or does not apply).
    pub goal_ok: bool,
    /// `count` agrees with the affine point count of the surface.
    pub cross_check: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CensusSummary {
    pub records: u64,
    /// Verdict name -> (count -> number of records).
    pub histograms: BTreeMap<&'static str, BTreeMap<u64, u64>>,
    pub max_count: BTreeMap<&'static str, u64>,
    /// Isolated singularity pattern -> number of records.
    pub patterns: BTreeMap<String, u64>,
    /// Records violating the `q² + 7q + 1` claim.
    pub counterexamples: Vec<CensusRecord>,
    /// Records violating their class bound.
    pub bound_failures: Vec<CensusRecord>,
    pub cross_check_failures: u64,
}

impl CensusSummary {
    fn add(&mut self, r: &CensusRecord) {
        self.records += 1;
        let name = r.class.name();
        *self
            .histograms
            .entry(name)
            .or_default()
            .entry(r.count)
            .or_default() += 1;
        let m = self.max_count.entry(name).or_default();
        *m = (*m).max(r.count);
        if let SurfaceClass::Isolated(p) = r.class {
            *self.patterns.entry(p.to_string()).or_default() += 1;
        }
        if !r.goal_ok {
            self.counterexamples.push(*r);
        }
        if !r.bound_ok {
            self.bound_failures.push(*r);
        }
        if !r.cross_check {
            self.cross_check_failures += 1;
        }
    }

    /// Sum of all histogram masses.
    pub fn histogram_mass(&self) -> u64 {
        self.histograms.values().flat_map(|h| h.values()).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
            && self.bound_failures.is_empty()
            && self.cross_check_failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub family: Family,
    pub records: Vec<CensusRecord>,
    pub summary: CensusSummary,
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Surface facts keyed by `(A, B, C, T(D))`.
pub type SurfaceTable = HashMap<(u32, u32, u32, u32), SurfaceFacts>;

/// Classification facts for every `(A, B, C, T(D))` appearing in `tuples`.
pub fn surface_table(wb: &Workbench, tuples: &[Coeffs]) -> Result<SurfaceTable, SurfaceError> {
    let tower = wb.tower();
    let mut keys: Vec<(u32, u32, u32, u32)> = tuples
        .iter()
        .map(|k| (k.a, k.b, k.c, tower.ctrace(k.d)))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    // a representative D for each trace value
    let mut rep = vec![u32::MAX; tower.q() as usize];
    for d in 0..tower.cubic_size() {
        let e = tower.ctrace(d) as usize;
        if rep[e] == u32::MAX {
            rep[e] = d;
        }
    }
    keys.into_par_iter()
        .map(|key| {
            let (a, b, c, e) = key;
            let form = build_s1(tower, Coeffs::new(a, b, c, rep[e as usize]));
            let class = classify(wb, &form)?;
            let count = count_points(wb, &form, 1)?;
            let count_projective = count_projective(wb, &form, 1)?;
            Ok((
                key,
                SurfaceFacts {
                    class,
                    count,
                    count_projective,
                },
            ))
        })
        .collect()
}

fn make_record(tower: &FieldTower, k: Coeffs, facts: &SurfaceFacts) -> CensusRecord {
    let q = tower.q() as u64;
    let count = intersect_count(tower, k);
    let bound = class_bound(&facts.class, q, count, facts.count_projective);
    let goal_ok = goal_holds(&facts.class, k.a != 0, q, count);
    CensusRecord {
        coeffs: k,
        count,
        count_projective: facts.count_projective,
        class: facts.class,
        eta: eta(q, count),
        bound: bound.name,
        bound_ok: bound.ok && goal_ok,
        goal_ok,
        cross_check: count == facts.count,
    }
}

/// Records for an explicit list of tuples, in the given order.
pub fn census_of(wb: &Workbench, tuples: &[Coeffs]) -> Result<Vec<CensusRecord>, SurfaceError> {
    let table = surface_table(wb, tuples)?;
    let tower = wb.tower();
    Ok(tuples
        .par_iter()
        .map(|k| {
            let facts = &table[&(k.a, k.b, k.c, tower.ctrace(k.d))];
            make_record(tower, *k, facts)
        })
        .collect())
}

/// Optional uniform sampling of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
}

/// The tuples a census visits: the whole family, or a uniform sample of it.
pub fn family_tuples(
    tower: &FieldTower,
    family: Family,
    sampling: Option<Sampling>,
) -> Result<Vec<Coeffs>, SurfaceError> {
    match sampling {
        Some(s) => Ok(family.sample(tower, s.count, s.seed)),
        None => {
            let size = family.size(tower);
            if size >= 1 << 24 {
                return Err(SurfaceError::TooLarge {
                    what: "exhaustive census",
                    size,
                    limit: 1 << 24,
                });
            }
            Ok(family.tuples(tower))
        }
    }
}

pub fn full_census(
    wb: &Workbench,
    family: Family,
    sampling: Option<Sampling>,
) -> Result<Census, SurfaceError> {
    let tuples = family_tuples(wb.tower(), family, sampling)?;
    let table = surface_table(wb, &tuples)?;
    Ok(census_from_table(wb.tower(), family, &tuples, &table))
}

/// A census over `tuples` reusing classifications from [`surface_table`].
///
/// Panics if `table` lacks an entry for some tuple.
pub fn census_from_table(
    tower: &FieldTower,
    family: Family,
    tuples: &[Coeffs],
    table: &SurfaceTable,
) -> Census {
    let records: Vec<CensusRecord> = tuples
        .par_iter()
        .map(|k| {
            let facts = &table[&(k.a, k.b, k.c, tower.ctrace(k.d))];
            make_record(tower, *k, facts)
        })
        .collect();
    let mut summary = CensusSummary::default();
    for r in &records {
        summary.add(r);
    }
    Census {
        family,
        records,
        summary,
    }
}

/// What the B = C = 0 analysis predicts for the affine singular points of S_2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Prediction {
    /// Exactly these points, as cubic-field codes.
    Points(Vec<[u32; 3]>),
    /// A positive-dimensional singular locus.
    Exceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialCaseReport {
    pub a: u32,
    pub d: u32,
    pub e: u32,
    pub characteristic: u32,
    /// `N(A)` as a base-field code.
    pub norm_a: u32,
    /// The degeneration criterion (N(A) = 1 in char 2, 27 N(A) = 1 otherwise;
    /// never in char 3).
    pub degenerate: bool,
    pub predicted: Prediction,
    /// Affine singular points of S_2 over F_{q^3}, sorted.
    pub found: Vec<[u32; 3]>,
    /// Singular points of S_2 at infinity over F_{q^3}.
    pub found_at_infinity: usize,
    pub exceeded: bool,
    /// The full locus of S_1 (extensions up to degree 4) has the same size
    /// and is mapped onto `found` by ψ.
    pub s1_consistent: bool,
    pub matches: bool,
}

/// Check the singular points of S_2 for `B = C = 0` against the
/// characteristic-dependent prediction.
pub fn special_case_b0c0(
    wb: &Workbench,
    a: u32,
    d: u32,
) -> Result<SpecialCaseReport, SurfaceError> {
    let tower = wb.tower();
    let p = tower.p();
    let k = Coeffs::new(a, 0, 0, d);
    let e = tower.ctrace(d);
    let norm_a = tower.cnorm(a);
    let degenerate = match p {
        3 => false,
        2 => norm_a == 1,
        _ => tower.bmul(norm_a, 27 % p) == 1,
    };

    let predicted = if p == 3 {
        if e == 0 {
            Prediction::Points(vec![[0, 0, 0]])
        } else {
            // X_i^3 = -E / A^{q^i}; cube roots are unique in characteristic 3.
            let cube_root_exp = 3u64.pow(3 * tower.h() - 1);
            let mut pts: Vec<[u32; 3]> = (0..3)
                .map(|i| {
                    let ai = tower.cfrob(a, i);
                    let inv = tower.cpow(ai, tower.cubic_size() as u64 - 2);
                    let rhs = tower.cmul(tower.cneg(e), inv);
                    let mut pt = [0; 3];
                    pt[i as usize] = tower.cpow(rhs, cube_root_exp);
                    pt
                })
                .collect();
            pts.sort_unstable();
            Prediction::Points(pts)
        }
    } else if e != 0 {
        Prediction::Points(Vec::new())
    } else if degenerate {
        Prediction::Exceeded
    } else {
        Prediction::Points(vec![[0, 0, 0]])
    };

    let s2 = build_s2(tower, k);
    let locus2 = singular_locus_over(wb, &s2, 1)?;
    let sf = wb.search_field(Level::Cubic, 1)?;
    let f = &sf.field;
    let to_code = |c: u32| {
        sf.to_tower(Level::Cubic, f.from_encoding(c))
            .expect("degree-1 point")
    };
    let mut found: Vec<[u32; 3]> = locus2
        .points
        .iter()
        .filter(|pt| pt.is_affine())
        .map(|pt| {
            [
                to_code(pt.coords[0]),
                to_code(pt.coords[1]),
                to_code(pt.coords[2]),
            ]
        })
        .collect();
    found.sort_unstable();
    let found_at_infinity = locus2.points.iter().filter(|pt| !pt.is_affine()).count();

    let s1_consistent = if locus2.exceeded {
        singular_locus(wb, &build_s1(tower, k))?.exceeded
    } else {
        s1_matches(wb, k, &found)?
    };

    let matches = match &predicted {
        Prediction::Exceeded => locus2.exceeded,
        Prediction::Points(pts) => !locus2.exceeded && *pts == found,
    };
    Ok(SpecialCaseReport {
        a,
        d,
        e,
        characteristic: p,
        norm_a,
        degenerate,
        predicted,
        found,
        found_at_infinity,
        exceeded: locus2.exceeded,
        s1_consistent,
        matches,
    })
}

/// [`special_case_b0c0`] for every `A ≠ 0` and one `D` per value of `T(D)`.
pub fn special_case_sweep(wb: &Workbench) -> Result<Vec<SpecialCaseReport>, SurfaceError> {
    let tower = wb.tower();
    let mut rep = vec![None; tower.q() as usize];
    for d in 0..tower.cubic_size() {
        rep[tower.ctrace(d) as usize].get_or_insert(d);
    }
    let jobs: Vec<(u32, u32)> = (1..tower.cubic_size())
        .flat_map(|a| rep.iter().map(move |d| (a, d.expect("trace is onto"))))
        .collect();
    jobs.into_par_iter()
        .map(|(a, d)| special_case_b0c0(wb, a, d))
        .collect()
}

/// ψ carries the affine singular points of S_1 onto `found`.
fn s1_matches(wb: &Workbench, k: Coeffs, found: &[[u32; 3]]) -> Result<bool, SurfaceError> {
    let tower = wb.tower();
    let locus1 = singular_locus(wb, &build_s1(tower, k))?;
    if locus1.exceeded {
        return Ok(false);
    }
    let affine: Vec<_> = locus1.points.iter().filter(|pt| pt.is_affine()).collect();
    // S_2's points live in F_{q^3}, so S_1's must have degree 1 or 3.
    if affine.iter().any(|pt| pt.degree != 1 && pt.degree != 3) || affine.len() != found.len() {
        return Ok(false);
    }
    let cubic = wb.search_field(Level::Base, 3)?;
    let f3 = &cubic.field;
    let mut images: Vec<[u32; 3]> = Vec::new();
    for pt in affine {
        let v = if pt.degree == 1 {
            let base = wb.search_field(Level::Base, 1)?;
            let code = |c: u32| {
                base.to_tower(Level::Base, base.field.from_encoding(c))
                    .expect("rational")
            };
            [0, 1, 2].map(|i| cubic.map(Level::Base, code(pt.coords[i])))
        } else {
            [0, 1, 2].map(|i| f3.from_encoding(pt.coords[i]))
        };
        let al = [0, 1, 2].map(|i| cubic.map(Level::Cubic, tower.cfrob(tower.alpha().code, i)));
        let mut img = [0u32; 3];
        for (r, slot) in img.iter_mut().enumerate() {
            let mut acc = f3.zero();
            for (c, &x) in v.iter().enumerate() {
                acc = f3.add(acc, f3.mul(al[(r + c) % 3], x));
            }
            match cubic.to_tower(Level::Cubic, acc) {
                Some(code) => *slot = code,
                None => return Ok(false),
            }
        }
        images.push(img);
    }
    images.sort_unstable();
    Ok(images == found)
}
