//! One-point evaluation codes on the norm–trace curve and their weights.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::census::{surface_table, SurfaceTable};
use crate::curve::{enumerate_points, semigroup_generators, CurveTable};
use crate::gf::{Element, ExtField, Fe, FieldTower, Level};
use crate::surface::{Coeffs, SearchField, SurfaceClass, SurfaceError, Workbench};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("monomial x^{i} y^{j} is not in the basis for k = {k}")]
    DimensionMismatch { i: u32, j: u32, k: u32 },
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("family `{0}` is only enumerated for q = 2")]
    FamilyUnsupported(&'static str),
}

/// Monomials `x^i y^j` with pole order at most `k`, sorted by pole order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub k: u32,
    pub monomials: Vec<(u32, u32)>,
    pub pole_orders: Vec<u32>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, mono: (u32, u32)) -> Option<usize> {
        self.monomials.iter().position(|&m| m == mono)
    }
}

pub fn basis_for(q: u32, k: u32) -> MonomialBasis {
    let (gx, gy) = semigroup_generators(q);
    let mut v: Vec<(u32, (u32, u32))> = Vec::new();
    for j in 0..q * q {
        if j * gy > k {
            break;
        }
        let mut i = 0;
        while i * gx + j * gy <= k {
            v.push((i * gx + j * gy, (i, j)));
            i += 1;
        }
    }
    v.sort_unstable();
    MonomialBasis {
        k,
        monomials: v.iter().map(|&(_, m)| m).collect(),
        pole_orders: v.iter().map(|&(o, _)| o).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct EvalCode {
    pub q: u32,
    pub k: u32,
    pub basis: MonomialBasis,
    pub points: CurveTable,
    /// One row per basis monomial, cubic-field codes in point order.
    pub rows: Vec<Vec<u32>>,
}

impl EvalCode {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn build_code(tower: &FieldTower, k: u32) -> EvalCode {
    let basis = basis_for(tower.q(), k);
    let points = enumerate_points(tower);
    let rows = basis
        .monomials
        .iter()
        .map(|&(i, j)| {
            points
                .points
                .iter()
                .map(|p| tower.cmul(tower.cpow(p.x, i as u64), tower.cpow(p.y, j as u64)))
                .collect()
        })
        .collect();
    EvalCode {
        q: tower.q(),
        k,
        basis,
        points,
        rows,
    }
}

/// Rank of the generator matrix by Gaussian elimination over F_{q^3}.
pub fn rank(tower: &FieldTower, code: &EvalCode) -> usize {
    let mut m = code.rows.clone();
    let cols = code.n();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = tower.cpow(m[r][c], tower.cubic_size() as u64 - 2);
        let pivot_row: Vec<u32> = m[r].iter().map(|&v| tower.cmul(v, inv)).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = tower.cadd(*x, tower.cneg(tower.cmul(factor, pv)));
            }
        }
        m[r] = pivot_row;
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// `n - k`.
pub fn designed_distance(code: &EvalCode) -> u64 {
    (code.n() as u64).saturating_sub(code.k as u64)
}

/// Monomials addressed by a 7-entry coefficient vector `(a, …, g)`.
pub const COMBO_MONOMIALS: [(u32, u32); 7] =
    [(0, 2), (1, 1), (0, 1), (3, 0), (2, 0), (1, 0), (0, 0)];

/// Weight of `a y² + b xy + c y + d x³ + e x² + f x + g`, computed by
/// counting zeros over the point table.
pub fn weight_of(tower: &FieldTower, code: &EvalCode, combo: &[u32; 7]) -> Result<u64, CodeError> {
    for (&c, &(i, j)) in combo.iter().zip(&COMBO_MONOMIALS) {
        if c != 0 && code.basis.position((i, j)).is_none() {
            return Err(CodeError::DimensionMismatch { i, j, k: code.k });
        }
    }
    let zeros = code
        .points
        .points
        .iter()
        .filter(|p| {
            let mut acc = 0;
            for (&c, &(i, j)) in combo.iter().zip(&COMBO_MONOMIALS) {
                if c != 0 {
                    let m = tower.cmul(tower.cpow(p.x, i as u64), tower.cpow(p.y, j as u64));
                    acc = tower.cadd(acc, tower.cmul(c, m));
                }
            }
            acc == 0
        })
        .count();
    Ok((code.n() - zeros) as u64)
}

/// Weight of the codeword `Σ coeffs[r] · rows[r]`.
pub fn weight_of_vector(
    tower: &FieldTower,
    code: &EvalCode,
    coeffs: &[u32],
) -> Result<u64, CodeError> {
    if coeffs.len() != code.dimension() {
        return Err(CodeError::WrongLength {
            expected: code.dimension(),
            got: coeffs.len(),
        });
    }
    let mut w = 0;
    for col in 0..code.n() {
        let mut acc = 0;
        for (r, &c) in coeffs.iter().enumerate() {
            acc = tower.cadd(acc, tower.cmul(c, code.rows[r][col]));
        }
        w += (acc != 0) as u64;
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightFamily {
    /// `a = b = d = 0`.
    A0B0D0,
    /// `a = b = 0`, `d ≠ 0`.
    A0B0DNonzero,
    /// Every combination of the basis.
    Full,
}

impl WeightFamily {
    pub fn name(&self) -> &'static str {
        match self {
            WeightFamily::A0B0D0 => "a0b0d0",
            WeightFamily::A0B0DNonzero => "a0b0_dnonzero",
            WeightFamily::Full => "full",
        }
    }
}

impl FromStr for WeightFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a0b0d0" => Ok(WeightFamily::A0B0D0),
            "a0b0_dnonzero" => Ok(WeightFamily::A0B0DNonzero),
            "full" => Ok(WeightFamily::Full),
            _ => Err(format!(
                "unknown family `{s}` (expected a0b0d0, a0b0_dnonzero or full)"
            )),
        }
    }
}

impl fmt::Display for WeightFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClaimedWeight {
    Exact(u64),
    AtLeast(u64),
}

impl ClaimedWeight {
    pub fn holds(&self, w: u64) -> bool {
        match *self {
            ClaimedWeight::Exact(v) => w == v,
            ClaimedWeight::AtLeast(v) => w >= v,
        }
    }
}

impl fmt::Display for ClaimedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimedWeight::Exact(v) => write!(f, "={v}"),
            ClaimedWeight::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

impl Serialize for ClaimedWeight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Which clause of the weight-case list a function falls under, and what
/// that clause claims.
///
/// `class` is the classification of the surface for `(−d/c, −e/c, −f/c, −g/c)`
/// and is only consulted when `a = b = 0`, `c ≠ 0`, `d ≠ 0`.
pub fn weight_case(
    tower: &FieldTower,
    combo: &[u32; 7],
    class: Option<SurfaceClass>,
    goppa: u64,
) -> (&'static str, ClaimedWeight) {
    use ClaimedWeight::*;
    let q = tower.q() as u64;
    let n = q.pow(5);
    let q2 = q * q;
    let [a, b, c, d, e, f, g] = *combo;
    if a != 0 || b != 0 {
        return ("ab", AtLeast(goppa));
    }
    if d == 0 {
        if c == 0 {
            if e == 0 && f == 0 && g == 0 {
                return ("d0.1a", Exact(0));
            }
            if e == 0 && f == 0 {
                return ("d0.1b", Exact(n));
            }
            if e == 0 {
                return ("d0.1c", Exact(n - q2));
            }
            let disc = tower.cadd(
                tower.cmul(f, f),
                tower.cneg(tower.cmul(tower.scale_int(4, Element::new(Level::Cubic, e)).code, g)),
            );
            if f != 0 && disc == 0 {
                return ("d0.1d", Exact(n - q2));
            }
            return ("d0.1e", Exact(n - 2 * q2));
        }
        if e == 0 && f == 0 && g == 0 {
            return ("d0.2a", Exact(n - 1));
        }
        if e == 0 && f == 0 {
            return ("d0.2b", Exact(n - q2));
        }
        if e == 0 {
            return ("d0.2c", AtLeast(n - (q2 + q + 1)));
        }
        return ("d0.2d", AtLeast(n - (q2 + 7 * q + 1)));
    }
    if c == 0 {
        if e == 0 && f == 0 {
            return if g == 0 {
                ("dn.1a", Exact(n - q2))
            } else {
                ("dn.1b", Exact(n - q2))
            };
        }
        return ("dn.1c", AtLeast(n - 3 * q2));
    }
    match class.expect("classification needed for c, d nonzero") {
        SurfaceClass::Reducible => ("dn.2c", AtLeast(n - 3 * q2)),
        SurfaceClass::ConeOverSmoothCubic => {
            // n - (q² + 2q√q + 1), rounded up to an integer
            let mut s = 0u64;
            while (s + 1) * (s + 1) <= 4 * q * q * q {
                s += 1;
            }
            ("dn.2b", AtLeast(n.saturating_sub(q2 + s + 1)))
        }
        _ => ("dn.2a", AtLeast(n - (q2 + 7 * q + 1))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightRow {
    pub case: &'static str,
    /// First function (in enumeration order) attaining the weight.
    pub coeffs: [u32; 7],
    pub weight: u64,
    pub claimed: ClaimedWeight,
    pub ok: bool,
    /// Number of functions in the case with this weight.
    pub functions: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightTable {
    pub q: u32,
    pub k: u32,
    pub family: &'static str,
    pub designed_distance: u64,
    pub rows: Vec<WeightRow>,
    /// Functions whose weight disagreed with the per-x fiber count.
    pub fiber_mismatches: u64,
    pub functions: u64,
}

impl WeightTable {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn case_ok(&self, case: &str) -> bool {
        self.rows.iter().filter(|r| r.case == case).all(|r| r.ok)
    }
}

/// Point data mapped into the flat model of F_{q^3}.
struct FlatCurve<'a> {
    field: &'a ExtField,
    /// (x, y, x², x³) per curve point.
    pts: Vec<[Fe; 4]>,
    /// Distinct x with their norm.
    xs: Vec<(Fe, Fe)>,
    h: u32,
}

impl<'a> FlatCurve<'a> {
    fn new(wb: &'a Workbench) -> Result<Self, CodeError> {
        let tower = wb.tower();
        let sf = wb.search_field(Level::Cubic, 1)?;
        let f = &sf.field;
        let table = enumerate_points(tower);
        let m = |c| sf.map(Level::Cubic, c);
        let pts = table
            .points
            .iter()
            .map(|p| {
                let x = m(p.x);
                [x, m(p.y), f.pow(x, 2), f.pow(x, 3)]
            })
            .collect();
        let xs = (0..tower.cubic_size())
            .map(|x| (m(x), m(tower.cnorm(x))))
            .collect();
        Ok(FlatCurve {
            field: f,
            pts,
            xs,
            h: tower.h(),
        })
    }

    fn trace(&self, z: Fe) -> Fe {
        let f = self.field;
        f.add(z, f.add(f.frobenius(z, self.h), f.frobenius(z, 2 * self.h)))
    }

    /// Zero counts of `c y + d x³ + e x² + f x + g` for every `g`, indexed by
    /// the field index of `-g`.
    fn zero_histogram(&self, c: Fe, d: Fe, e: Fe, fc: Fe) -> Vec<u32> {
        let f = self.field;
        let mut hist = vec![0u32; f.size() as usize];
        for p in &self.pts {
            let v = f.add(
                f.add(f.mul(c, p[1]), f.mul(d, p[3])),
                f.add(f.mul(e, p[2]), f.mul(fc, p[0])),
            );
            hist[v.index() as usize] += 1;
        }
        hist
    }

    /// The same counts obtained fiber by fiber over `x`.
    fn fiber_histogram(&self, c: Fe, d: Fe, e: Fe, fc: Fe, q2: u32) -> Vec<u32> {
        let f = self.field;
        let mut hist = vec![0u32; f.size() as usize];
        let poly = |x: Fe| {
            f.add(
                f.add(f.mul(d, f.pow(x, 3)), f.mul(e, f.pow(x, 2))),
                f.mul(fc, x),
            )
        };
        if f.is_zero(c) {
            for &(x, _) in &self.xs {
                hist[poly(x).index() as usize] += q2;
            }
            return hist;
        }
        // c y + P(x) = -g has the single solution y = -(P(x) + g)/c, which is
        // on the curve iff N(x) + T(P(x)/c) = -T(g/c).
        let ci = f.inv(c).expect("nonzero");
        let mut by_trace = vec![0u32; f.size() as usize];
        for &(x, nx) in &self.xs {
            let s = f.add(nx, self.trace(f.mul(poly(x), ci)));
            by_trace[s.index() as usize] += 1;
        }
        for neg_g in f.elements() {
            let g = f.neg(neg_g);
            let key = f.neg(self.trace(f.mul(g, ci)));
            hist[neg_g.index() as usize] = by_trace[key.index() as usize];
        }
        hist
    }
}

type RowKey = (&'static str, u64);

fn merge_rows(into: &mut BTreeMap<RowKey, WeightRow>, from: BTreeMap<RowKey, WeightRow>) {
    for (key, row) in from {
        match into.get_mut(&key) {
            Some(r) => {
                r.functions += row.functions;
                if row.coeffs < r.coeffs {
                    r.coeffs = row.coeffs;
                }
            }
            None => {
                into.insert(key, row);
            }
        }
    }
}

/// Exact weights of every function in a family, sorted into the clauses of
/// the weight-case list.
pub fn weight_table(
    wb: &Workbench,
    k: u32,
    family: WeightFamily,
    classes: Option<&SurfaceTable>,
) -> Result<WeightTable, CodeError> {
    let tower = wb.tower();
    let q = tower.q();
    let basis = basis_for(q, k);
    let n = (q as u64).pow(5);
    let goppa = n.saturating_sub(k as u64);
    let needed: &[(u32, u32)] = match family {
        WeightFamily::A0B0D0 => &[(0, 1), (2, 0), (1, 0), (0, 0)],
        WeightFamily::A0B0DNonzero => &[(0, 1), (3, 0), (2, 0), (1, 0), (0, 0)],
        WeightFamily::Full => &[],
    };
    for &(i, j) in needed {
        if basis.position((i, j)).is_none() {
            return Err(CodeError::DimensionMismatch { i, j, k });
        }
    }
    if family == WeightFamily::Full {
        if q != 2 {
            return Err(CodeError::FamilyUnsupported("full"));
        }
        if basis.monomials.iter().any(|m| !COMBO_MONOMIALS.contains(m)) {
            return Err(CodeError::DimensionMismatch { i: 0, j: 2, k });
        }
    }

    let in_basis = |m: (u32, u32)| basis.position(m).is_some();
    let size = tower.cubic_size();
    let range = |m: (u32, u32), nonzero: bool| -> Vec<u32> {
        if !in_basis(m) {
            vec![0]
        } else if nonzero {
            (1..size).collect()
        } else {
            (0..size).collect()
        }
    };
    let (a_r, b_r, d_r) = match family {
        WeightFamily::A0B0D0 => (vec![0], vec![0], vec![0]),
        WeightFamily::A0B0DNonzero => (vec![0], vec![0], range((3, 0), true)),
        WeightFamily::Full => (
            range((0, 2), false),
            range((1, 1), false),
            range((3, 0), false),
        ),
    };
    let c_r = range((0, 1), false);
    let e_r = range((2, 0), false);
    let f_r = range((1, 0), false);

    // Classes of the surfaces needed for the c ≠ 0, d ≠ 0 clauses.
    let owned;
    let classes = match classes {
        Some(c) => Some(c),
        None if d_r.iter().any(|&d| d != 0) && c_r.len() > 1 => {
            let tuples: Vec<Coeffs> = (1..size)
                .flat_map(|a| (0..size).flat_map(move |b| (0..size).map(move |c| (a, b, c))))
                .flat_map(|(a, b, c)| (0..q).map(move |e| Coeffs::new(a, b, c, e)))
                .collect();
            owned = surface_table(wb, &tuples_with_trace(tower, &tuples))?;
            Some(&owned)
        }
        None => None,
    };

    let curve = FlatCurve::new(wb)?;
    let sf = wb.search_field(Level::Cubic, 1)?;
    let fl = &sf.field;
    let to_fe = |c: u32| sf.map(Level::Cubic, c);
    let q2 = q * q;

    let mut jobs: Vec<(u32, u32, u32)> = Vec::new();
    for &a in &a_r {
        for &b in &b_r {
            for &d in &d_r {
                jobs.push((a, b, d));
            }
        }
    }
    let results: Vec<(BTreeMap<RowKey, WeightRow>, u64, u64)> = jobs
        .par_iter()
        .map(|&(a, b, d)| {
            let mut rows: BTreeMap<RowKey, WeightRow> = BTreeMap::new();
            let mut mismatches = 0u64;
            let mut functions = 0u64;
            for &c in &c_r {
                for &e in &e_r {
                    for &fc in &f_r {
                        let zeros = if a == 0 && b == 0 {
                            curve.zero_histogram(to_fe(c), to_fe(d), to_fe(e), to_fe(fc))
                        } else {
                            general_histogram(&curve, sf, [a, b, c, d, e, fc])
                        };
                        let fiber = (a == 0 && b == 0).then(|| {
                            curve.fiber_histogram(to_fe(c), to_fe(d), to_fe(e), to_fe(fc), q2)
                        });
                        for g in 0..size {
                            let neg_g = fl.neg(to_fe(g));
                            let z = zeros[neg_g.index() as usize] as u64;
                            if let Some(fh) = &fiber {
                                mismatches += (fh[neg_g.index() as usize] as u64 != z) as u64;
                            }
                            let weight = n - z;
                            let combo = [a, b, c, d, e, fc, g];
                            let class = (a == 0 && b == 0 && c != 0 && d != 0).then(|| {
                                let key = normalized_key(tower, &combo);
                                classes.expect("classes computed")[&key].class
                            });
                            let (case, claimed) = weight_case(tower, &combo, class, goppa);
                            functions += 1;
                            rows.entry((case, weight))
                                .and_modify(|r| r.functions += 1)
                                .or_insert(WeightRow {
                                    case,
                                    coeffs: combo,
                                    weight,
                                    claimed,
                                    ok: claimed.holds(weight)
                                        || (case == "ab" && weight == 0 && combo == [0; 7]),
                                    functions: 1,
                                });
                        }
                    }
                }
            }
            (rows, mismatches, functions)
        })
        .collect();

    let mut rows = BTreeMap::new();
    let mut fiber_mismatches = 0;
    let mut functions = 0;
    for (r, m, nf) in results {
        merge_rows(&mut rows, r);
        fiber_mismatches += m;
        functions += nf;
    }
    Ok(WeightTable {
        q,
        k,
        family: family.name(),
        designed_distance: goppa,
        rows: rows.into_values().collect(),
        fiber_mismatches,
        functions,
    })
}

/// Tuples `(A, B, C, D)` with `D` chosen so that `T(D)` runs over F_q.
fn tuples_with_trace(tower: &FieldTower, keys: &[Coeffs]) -> Vec<Coeffs> {
    let mut rep = vec![u32::MAX; tower.q() as usize];
    for d in 0..tower.cubic_size() {
        let e = tower.ctrace(d) as usize;
        if rep[e] == u32::MAX {
            rep[e] = d;
        }
    }
    keys.iter()
        .map(|k| Coeffs::new(k.a, k.b, k.c, rep[k.d as usize]))
        .collect()
}

/// `(A, B, C, T(D))` for `c y + d x³ + e x² + f x + g`, i.e. `y = −(…)/c`.
fn normalized_key(tower: &FieldTower, combo: &[u32; 7]) -> (u32, u32, u32, u32) {
    let [_, _, c, d, e, f, g] = *combo;
    let ci = tower.cneg(tower.cpow(c, tower.cubic_size() as u64 - 2));
    (
        tower.cmul(d, ci),
        tower.cmul(e, ci),
        tower.cmul(f, ci),
        tower.ctrace(tower.cmul(g, ci)),
    )
}

/// Zero histogram for functions with `xy` or `y²` terms, by direct evaluation.
fn general_histogram(curve: &FlatCurve, sf: &SearchField, abcdef: [u32; 6]) -> Vec<u32> {
    let f = curve.field;
    let m = |c| sf.map(Level::Cubic, c);
    let [a, b, c, d, e, fc] = abcdef.map(m);
    let mut hist = vec![0u32; f.size() as usize];
    for p in &curve.pts {
        let (x, y) = (p[0], p[1]);
        let v = [
            f.mul(a, f.pow(y, 2)),
            f.mul(b, f.mul(x, y)),
            f.mul(c, y),
            f.mul(d, p[3]),
            f.mul(e, p[2]),
            f.mul(fc, x),
        ]
        .into_iter()
        .fold(f.zero(), |acc, t| f.add(acc, t));
        hist[v.index() as usize] += 1;
    }
    hist
}

/// Weight distribution of the whole code, by exhaustive enumeration of all
/// `(q³)^dim` codewords. Refuses codes with more than 2^22 codewords.
pub fn weight_spectrum(wb: &Workbench, code: &EvalCode) -> Result<BTreeMap<u64, u64>, CodeError> {
    let tower = wb.tower();
    let size = tower.cubic_size() as u64;
    let total = size.saturating_pow(code.dimension() as u32);
    if total > 1 << 22 {
        return Err(CodeError::Surface(SurfaceError::TooLarge {
            what: "weight spectrum",
            size: total,
            limit: 1 << 22,
        }));
    }
    let sf = wb.search_field(Level::Cubic, 1)?;
    let f = &sf.field;
    let rows: Vec<Vec<Fe>> = code
        .rows
        .iter()
        .map(|r| r.iter().map(|&c| sf.map(Level::Cubic, c)).collect())
        .collect();
    let dim = code.dimension();
    let n = code.n();
    // Enumerate the coefficient of the first row (the constant monomial)
    // via a histogram, everything else explicitly.
    let one_row = code
        .basis
        .position((0, 0))
        .expect("1 is always in the basis");
    let others: Vec<usize> = (0..dim).filter(|&r| r != one_row).collect();
    let columns: Vec<Vec<Fe>> = (0..n)
        .map(|col| others.iter().map(|&r| rows[r][col]).collect())
        .collect();
    let outer = size.pow(others.len() as u32);
    let hist = (0..outer)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, idx| {
            let mut coeffs = vec![f.zero(); others.len()];
            let mut t = idx;
            for c in coeffs.iter_mut() {
                *c = sf.map(Level::Cubic, (t % size) as u32);
                t /= size;
            }
            let mut counts = vec![0u32; f.size() as usize];
            for column in &columns {
                let v = column
                    .iter()
                    .zip(&coeffs)
                    .fold(f.zero(), |v, (&m, &c)| f.add(v, f.mul(c, m)));
                counts[v.index() as usize] += 1;
            }
            // adding g·1 vanishes exactly where v = -g
            for g in f.elements() {
                let z = counts[f.neg(g).index() as usize] as u64;
                *acc.entry(n as u64 - z).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        });
    Ok(hist)
}
