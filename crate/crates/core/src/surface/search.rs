//! Search fields and the small polynomial kernels shared by point counting,
//! singularity sweeps, factor search and the cone test.

use std::sync::OnceLock;

use crate::gf::ext::MAX_FLAT_SIZE;
use crate::gf::{ExtField, Fe, FieldTower, GfError, Level, TowerEmbedding};

use super::form::{CubicForm, MONOMIALS};
use super::SurfaceError;

/// A flat field GF(p^m) together with an embedding of the tower.
#[derive(Debug)]
pub struct SearchField {
    pub field: ExtField,
    pub emb: TowerEmbedding,
    base_code: Vec<u32>,
    cubic_code: Vec<u32>,
}

const NO_CODE: u32 = u32::MAX;

impl SearchField {
    fn build(tower: &FieldTower, m: u32) -> Result<Self, GfError> {
        let field = ExtField::new(tower.p(), m)?;
        let emb = field
            .embed_tower(tower)
            .expect("h divides the flat degree by construction");
        let mut base_code = vec![NO_CODE; field.size() as usize];
        for c in 0..tower.q() {
            base_code[emb.map(&field, Level::Base, c).index() as usize] = c;
        }
        let mut cubic_code = Vec::new();
        if emb.embeds_cubic() {
            cubic_code = vec![NO_CODE; field.size() as usize];
            for c in 0..tower.cubic_size() {
                cubic_code[emb.map(&field, Level::Cubic, c).index() as usize] = c;
            }
        }
        Ok(SearchField {
            field,
            emb,
            base_code,
            cubic_code,
        })
    }

    pub fn map(&self, level: Level, code: u32) -> Fe {
        self.emb.map(&self.field, level, code)
    }

    /// Tower code of `x` if it lies in the given level.
    pub fn to_tower(&self, level: Level, x: Fe) -> Option<u32> {
        let table = match level {
            Level::Prime | Level::Base => &self.base_code,
            Level::Cubic => &self.cubic_code,
        };
        table
            .get(x.index() as usize)
            .copied()
            .filter(|&c| c != NO_CODE)
    }
}

/// A tower plus lazily built search fields, shared read-only across workers.
#[derive(Debug)]
pub struct Workbench {
    tower: FieldTower,
    fields: Vec<OnceLock<Result<SearchField, GfError>>>,
}

impl Workbench {
    pub fn new(tower: FieldTower) -> Self {
        Workbench {
            tower,
            fields: (0..=64).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn build(p: u32, h: u32) -> Result<Self, GfError> {
        Ok(Self::new(FieldTower::build(p, h)?))
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// Size of the degree-`d` extension of the field at `level`.
    pub fn extension_size(&self, level: Level, d: u32) -> u64 {
        (self.tower.size(level) as u64).saturating_pow(d)
    }

    /// Degree over F_p of the field at `level`.
    pub fn level_degree(&self, level: Level) -> u32 {
        match level {
            Level::Prime => 1,
            Level::Base => self.tower.h(),
            Level::Cubic => 3 * self.tower.h(),
        }
    }

    /// The degree-`d` extension of the field at `level`, as a flat field.
    pub fn search_field(&self, level: Level, d: u32) -> Result<&SearchField, SurfaceError> {
        let m = self.level_degree(level) * d;
        let size = self.extension_size(level, d);
        if size > MAX_FLAT_SIZE || m as usize >= self.fields.len() {
            return Err(SurfaceError::TooLarge {
                what: "search field",
                size,
                limit: MAX_FLAT_SIZE,
            });
        }
        self.fields[m as usize]
            .get_or_init(|| SearchField::build(&self.tower, m))
            .as_ref()
            .map_err(|e| SurfaceError::Gf(e.clone()))
    }
}

/// Homogeneous polynomial in `x0..x3` as a list of nonzero terms.
#[derive(Clone, Debug, Default)]
pub struct HPoly {
    pub terms: Vec<([u8; 4], Fe)>,
}

impl HPoly {
    /// The homogenization of `form`, mapped into `sf`.
    pub fn from_form(sf: &SearchField, form: &CubicForm) -> Self {
        let mut terms = Vec::with_capacity(20);
        for (m, c) in MONOMIALS.iter().zip(form.coeffs()) {
            if c.is_zero() {
                continue;
            }
            let e = [m[0], m[1], m[2], 3 - m[0] - m[1] - m[2]];
            terms.push((e, sf.map(form.level(), c.code)));
        }
        HPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial(&self, f: &ExtField, i: usize) -> HPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .filter_map(|&(e, c)| {
                let c = f.mul(c, f.from_int(e[i] as i64));
                if f.is_zero(c) {
                    return None;
                }
                let mut e = e;
                e[i] -= 1;
                Some((e, c))
            })
            .collect();
        HPoly { terms }
    }

    /// Terms not involving `x_i`.
    pub fn without(&self, i: usize) -> HPoly {
        HPoly {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(e, _)| e[i] == 0)
                .collect(),
        }
    }

    pub fn eval(&self, f: &ExtField, x: &[Fe; 4]) -> Fe {
        let mut acc = f.zero();
        for &(e, c) in &self.terms {
            let mut t = c;
            for k in 0..4 {
                if e[k] > 0 {
                    t = f.mul(t, f.pow(x[k], e[k] as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Restriction to the line obtained by letting `x_var` vary with the
    /// other coordinates fixed.
    pub fn univariate(&self, f: &ExtField, fixed: &[Fe; 4], var: usize) -> UPoly {
        let mut u = [f.zero(); 4];
        for &(e, c) in &self.terms {
            let mut t = c;
            for k in 0..4 {
                if k != var && e[k] > 0 {
                    t = f.mul(t, f.pow(fixed[k], e[k] as u64));
                }
            }
            let d = e[var] as usize;
            u[d] = f.add(u[d], t);
        }
        UPoly::new(f, u)
    }

    /// `F(L y)`, where row `i` of `l` gives `x_i` as a linear form in `y`.
    pub fn substitute(&self, f: &ExtField, l: &[[Fe; 4]; 4]) -> HPoly {
        let mut acc = Dense::zero(f);
        for &(e, c) in &self.terms {
            let mut d = Dense::constant(f, c);
            for (i, &n) in e.iter().enumerate() {
                for _ in 0..n {
                    d = d.mul_linear(f, &l[i]);
                }
            }
            acc.add_assign(f, &d);
        }
        acc.into_hpoly(f)
    }
}

/// Dense homogeneous polynomial of degree ≤ 3; x3's exponent is implied.
struct Dense {
    c: [Fe; 64],
}

impl Dense {
    fn zero(f: &ExtField) -> Self {
        Dense { c: [f.zero(); 64] }
    }

    fn constant(f: &ExtField, v: Fe) -> Self {
        let mut d = Self::zero(f);
        d.c[0] = v;
        d
    }

    #[inline]
    fn idx(e0: usize, e1: usize, e2: usize) -> usize {
        e0 + 4 * e1 + 16 * e2
    }

    fn mul_linear(&self, f: &ExtField, l: &[Fe; 4]) -> Self {
        let mut out = Self::zero(f);
        for e2 in 0..3 {
            for e1 in 0..3 - e2 {
                for e0 in 0..3 - e2 - e1 {
                    let v = self.c[Self::idx(e0, e1, e2)];
                    if f.is_zero(v) {
                        continue;
                    }
                    let targets = [
                        Self::idx(e0 + 1, e1, e2),
                        Self::idx(e0, e1 + 1, e2),
                        Self::idx(e0, e1, e2 + 1),
                        Self::idx(e0, e1, e2),
                    ];
                    for k in 0..4 {
                        if !f.is_zero(l[k]) {
                            let t = targets[k];
                            out.c[t] = f.add(out.c[t], f.mul(v, l[k]));
                        }
                    }
                }
            }
        }
        out
    }

    fn add_assign(&mut self, f: &ExtField, o: &Dense) {
        for (a, &b) in self.c.iter_mut().zip(&o.c) {
            *a = f.add(*a, b);
        }
    }

    fn into_hpoly(self, f: &ExtField) -> HPoly {
        let mut terms = Vec::new();
        for e2 in 0..4u8 {
            for e1 in 0..4 - e2 {
                for e0 in 0..4 - e2 - e1 {
                    let v = self.c[Self::idx(e0 as usize, e1 as usize, e2 as usize)];
                    if !f.is_zero(v) {
                        terms.push(([e0, e1, e2, 3 - e0 - e1 - e2], v));
                    }
                }
            }
        }
        HPoly { terms }
    }
}

/// Univariate polynomial of degree ≤ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UPoly {
    pub c: [Fe; 4],
    /// Degree, or -1 for the zero polynomial.
    pub deg: i8,
}

impl UPoly {
    pub fn new(f: &ExtField, c: [Fe; 4]) -> Self {
        let deg = (0..4)
            .rev()
            .find(|&i| !f.is_zero(c[i]))
            .map_or(-1, |i| i as i8);
        UPoly { c, deg }
    }

    pub fn is_zero(&self) -> bool {
        self.deg < 0
    }

    pub fn is_unit(&self) -> bool {
        self.deg == 0
    }

    fn rem(mut self, f: &ExtField, m: &UPoly) -> UPoly {
        let dm = m.deg as usize;
        let lead_inv = f.inv(m.c[dm]).expect("nonzero divisor");
        while self.deg >= m.deg {
            let d = self.deg as usize;
            let q = f.mul(self.c[d], lead_inv);
            let shift = d - dm;
            for i in 0..=dm {
                self.c[i + shift] = f.sub(self.c[i + shift], f.mul(q, m.c[i]));
            }
            self = UPoly::new(f, self.c);
        }
        self
    }

    pub fn gcd(f: &ExtField, a: UPoly, b: UPoly) -> UPoly {
        let (mut a, mut b) = (a, b);
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a
    }

    pub fn eval(&self, f: &ExtField, x: Fe) -> Fe {
        f.eval_poly(&self.c, x)
    }

    /// All roots in the field; the zero polynomial vanishes everywhere.
    pub fn roots(&self, f: &ExtField) -> Vec<Fe> {
        match self.deg {
            -1 => f.elements().collect(),
            0 => Vec::new(),
            1 => {
                let r = f.neg(f.mul(self.c[0], f.inv(self.c[1]).expect("degree 1")));
                vec![r]
            }
            _ => f
                .elements()
                .filter(|&x| f.is_zero(self.eval(f, x)))
                .collect(),
        }
    }

    /// Number of roots without materializing them.
    pub fn count_roots(&self, f: &ExtField) -> u64 {
        match self.deg {
            -1 => f.size() as u64,
            0 => 0,
            1 => 1,
            _ => f.elements().filter(|&x| f.is_zero(self.eval(f, x))).count() as u64,
        }
    }
}

/// Common zeros on the line `x_var = t`, the other coordinates fixed.
///
/// Polynomials are folded into a running gcd in the given order, so put the
/// ones most likely to cut the gcd to a constant first.
pub fn common_roots(f: &ExtField, polys: &[HPoly], fixed: &[Fe; 4], var: usize) -> Vec<Fe> {
    let mut g: Option<UPoly> = None;
    for p in polys {
        let u = p.univariate(f, fixed, var);
        let next = match g {
            None => u,
            Some(g) => UPoly::gcd(f, g, u),
        };
        if next.is_unit() {
            return Vec::new();
        }
        g = Some(next);
    }
    g.map_or_else(Vec::new, |g| g.roots(f))
}
