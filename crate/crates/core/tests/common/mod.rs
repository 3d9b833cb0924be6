//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use normtrace_core::gf::{ExtField, Fe, FieldTower, Level};
use normtrace_core::surface::{monomial_index, Coeffs, CubicForm, SearchField, MONOMIALS};

/// Sparse polynomial in `x0, x1, x2` with cubic-field coefficient codes.
pub type Poly = BTreeMap<[u8; 3], u32>;

fn padd(t: &FieldTower, a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (e, &c) in b {
        let v = out.entry(*e).or_insert(0);
        *v = t.cadd(*v, c);
    }
    out.retain(|_, c| *c != 0);
    out
}

fn pmul(t: &FieldTower, a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, &ca) in a {
        for (eb, &cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let v = out.entry(e).or_insert(0);
            *v = t.cadd(*v, t.cmul(ca, cb));
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn pscale(t: &FieldTower, c: u32, a: &Poly) -> Poly {
    pmul(t, &Poly::from([([0, 0, 0], c)]), a)
}

/// Coefficientwise Frobenius; this is the q-power map on values taken at
/// F_q-points.
fn pfrob(t: &FieldTower, a: &Poly, k: u32) -> Poly {
    a.iter().map(|(e, &c)| (*e, t.cfrob(c, k))).collect()
}

fn ptrace(t: &FieldTower, a: &Poly) -> Poly {
    padd(t, &padd(t, a, &pfrob(t, a, 1)), &pfrob(t, a, 2))
}

/// `T(A Φ³ + B Φ² + C Φ + D) − N(Φ)` with `Φ = α x0 + α^q x1 + α^{q²} x2`,
/// expanded from scratch. Coefficients are cubic-field codes in
/// `MONOMIALS` order.
pub fn s1_expansion(t: &FieldTower, k: Coeffs) -> [u32; 20] {
    let a = t.alpha().code;
    let phi: Poly = [
        ([1, 0, 0], a),
        ([0, 1, 0], t.cfrob(a, 1)),
        ([0, 0, 1], t.cfrob(a, 2)),
    ]
    .into_iter()
    .collect();
    let phi2 = pmul(t, &phi, &phi);
    let phi3 = pmul(t, &phi2, &phi);
    let mut inner = pscale(t, k.a, &phi3);
    inner = padd(t, &inner, &pscale(t, k.b, &phi2));
    inner = padd(t, &inner, &pscale(t, k.c, &phi));
    if k.d != 0 {
        inner = padd(t, &inner, &Poly::from([([0, 0, 0], k.d)]));
    }
    let norm = pmul(t, &pmul(t, &phi, &pfrob(t, &phi, 1)), &pfrob(t, &phi, 2));
    let neg_norm: Poly = norm.iter().map(|(e, &c)| (*e, t.cneg(c))).collect();
    let s = padd(t, &ptrace(t, &inner), &neg_norm);
    let mut out = [0u32; 20];
    for (e, c) in s {
        out[monomial_index(e)] = c;
    }
    out
}

/// Terms of the homogenized form, `x3` last.
pub fn homogenize(sf: &SearchField, form: &CubicForm) -> Vec<([u8; 4], Fe)> {
    MONOMIALS
        .iter()
        .zip(form.coeffs())
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| {
            (
                [m[0], m[1], m[2], 3 - m[0] - m[1] - m[2]],
                sf.map(form.level(), c.code),
            )
        })
        .collect()
}

pub fn derivative(f: &ExtField, terms: &[([u8; 4], Fe)], i: usize) -> Vec<([u8; 4], Fe)> {
    terms
        .iter()
        .filter(|(e, _)| e[i] > 0)
        .map(|&(e, c)| {
            let mut e2 = e;
            e2[i] -= 1;
            (e2, f.mul(c, f.from_int(e[i] as i64)))
        })
        .filter(|(_, c)| !f.is_zero(*c))
        .collect()
}

pub fn evaluate(f: &ExtField, terms: &[([u8; 4], Fe)], x: &[Fe; 4]) -> Fe {
    terms.iter().fold(f.zero(), |acc, &(e, c)| {
        let mut v = c;
        for k in 0..4 {
            for _ in 0..e[k] {
                v = f.mul(v, x[k]);
            }
        }
        f.add(acc, v)
    })
}

/// Points of P³ over `f`, first nonzero coordinate 1.
pub fn projective_points(f: &ExtField) -> Vec<[Fe; 4]> {
    let n = f.size() as u64;
    let mut out = Vec::new();
    for lead in 0..4 {
        let free = 3 - lead;
        for code in 0..n.pow(free as u32) {
            let mut p = [f.zero(); 4];
            p[lead] = f.one();
            let mut c = code;
            for slot in p.iter_mut().skip(lead + 1) {
                *slot = f.from_encoding((c % n) as u32);
                c /= n;
            }
            out.push(p);
        }
    }
    out
}

/// Points of P³ with coordinates in `sub`, first nonzero coordinate 1.
pub fn projective_points_over(f: &ExtField, sub: &[Fe]) -> Vec<[Fe; 4]> {
    let mut out = Vec::new();
    for lead in 0..4 {
        let free = 3 - lead;
        for code in 0..sub.len().pow(free as u32) {
            let mut p = [f.zero(); 4];
            p[lead] = f.one();
            let mut c = code;
            for slot in p.iter_mut().skip(lead + 1) {
                *slot = sub[c % sub.len()];
                c /= sub.len();
            }
            out.push(p);
        }
    }
    out
}

/// Smallest `k` with every coordinate fixed by `x -> x^(p^(step k))`.
pub fn degree_of(f: &ExtField, step: u32, x: &[Fe; 4]) -> u32 {
    (1..)
        .find(|&k| x.iter().all(|&c| f.frobenius(c, step * k) == c))
        .unwrap()
}

/// Tiny deterministic generator for the identity checks below.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn fe(&mut self, f: &ExtField) -> Fe {
        f.from_encoding((self.next() % f.size() as u64) as u32)
    }
}

/// Whether `F(X + tP) = F(X)` identically, tested at random points of a
/// large extension.
pub fn is_vertex(f: &ExtField, terms: &[([u8; 4], Fe)], p: &[Fe; 4], rng: &mut Lcg) -> bool {
    (0..24).all(|_| {
        let x = [rng.fe(f), rng.fe(f), rng.fe(f), rng.fe(f)];
        let t = rng.fe(f);
        let y = [0, 1, 2, 3].map(|i| f.add(x[i], f.mul(t, p[i])));
        evaluate(f, terms, &x) == evaluate(f, terms, &y)
    })
}

/// Whether `F` vanishes on the plane `Σ a_i x_i = 0`, tested at random
/// points of the plane over a large extension.
pub fn vanishes_on_plane(
    f: &ExtField,
    terms: &[([u8; 4], Fe)],
    a: &[Fe; 4],
    rng: &mut Lcg,
) -> bool {
    let lead = (0..4).rev().find(|&i| !f.is_zero(a[i])).unwrap();
    let inv = f.inv(a[lead]).unwrap();
    (0..24).all(|_| {
        let mut x = [rng.fe(f), rng.fe(f), rng.fe(f), rng.fe(f)];
        let mut s = f.zero();
        for i in 0..4 {
            if i != lead {
                s = f.add(s, f.mul(a[i], x[i]));
            }
        }
        x[lead] = f.neg(f.mul(s, inv));
        f.is_zero(evaluate(f, terms, &x))
    })
}

pub fn level_code(t: &FieldTower, level: Level, n: u64) -> u32 {
    (n % t.size(level) as u64) as u32
}
