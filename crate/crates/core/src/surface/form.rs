//! Affine cubic forms in three variables and the two surfaces attached to a
//! coefficient tuple `(A, B, C, D)`.

use crate::gf::{Element, FieldTower, Level};
use serde::Serialize;
use std::fmt;

use super::SurfaceError;

/// Exponent triples, cubic part first, then quadratic, linear, constant.
pub const MONOMIALS: [[u8; 3]; 20] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
    [2, 0, 0],
    [1, 1, 0],
    [1, 0, 1],
    [0, 2, 0],
    [0, 1, 1],
    [0, 0, 2],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [0, 0, 0],
];

/// Position of an exponent triple in [`MONOMIALS`].
pub fn monomial_index(e: [u8; 3]) -> usize {
    MONOMIALS
        .iter()
        .position(|&m| m == e)
        .expect("exponent triple of total degree at most 3")
}

/// `f(x0, x1, x2) = Σ coeffs[i] · x^MONOMIALS[i]`, with coefficients at `level`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubicForm {
    level: Level,
    coeffs: [Element; 20],
}

impl CubicForm {
    /// Fails unless some cubic coefficient is nonzero.
    pub fn new(level: Level, coeffs: [u32; 20]) -> Result<Self, SurfaceError> {
        if coeffs[..10].iter().all(|&c| c == 0) {
            return Err(SurfaceError::NotCubic);
        }
        Ok(CubicForm {
            level,
            coeffs: coeffs.map(|c| Element::new(level, c)),
        })
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[Element; 20] {
        &self.coeffs
    }

    pub fn codes(&self) -> [u32; 20] {
        self.coeffs.map(|e| e.code)
    }

    pub fn coeff(&self, e: [u8; 3]) -> Element {
        self.coeffs[monomial_index(e)]
    }

    /// Evaluate at a point whose coordinates live at `self.level()` or below.
    pub fn eval(&self, tower: &FieldTower, x: [Element; 3]) -> Element {
        let mut acc = tower.zero(self.level);
        for (m, &c) in MONOMIALS.iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mut t = c;
            for k in 0..3 {
                for _ in 0..m[k] {
                    t = tower.mul(t, x[k]);
                }
            }
            acc = tower.add(acc, t);
        }
        acc
    }

    /// Polynomial display such as `x0^3+2*x0*x1*x2+1`, coefficients as codes.
    pub fn display<'a>(&'a self, tower: &'a FieldTower, pretty: bool) -> FormDisplay<'a> {
        FormDisplay {
            form: self,
            tower,
            pretty,
        }
    }
}

impl fmt::Debug for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CubicForm")
            .field("level", &self.level)
            .field("coeffs", &self.codes())
            .finish()
    }
}

pub struct FormDisplay<'a> {
    form: &'a CubicForm,
    tower: &'a FieldTower,
    pretty: bool,
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, &c) in MONOMIALS.iter().zip(&self.form.coeffs) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff = if self.pretty {
                format!("({})", self.tower.pretty(c))
            } else {
                c.code.to_string()
            };
            let vars: Vec<String> = (0..3)
                .filter(|&k| m[k] > 0)
                .map(|k| match m[k] {
                    1 => format!("x{k}"),
                    e => format!("x{k}^{e}"),
                })
                .collect();
            if vars.is_empty() {
                f.write_str(&coeff)?;
            } else if c.code == 1 {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, vars.join("*"))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A coefficient tuple for the cubic `y = A x³ + B x² + C x + D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Coeffs {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Coeffs {
    pub const fn new(a: u32, b: u32, c: u32, d: u32) -> Self {
        Coeffs { a, b, c, d }
    }
}

/// The F_q-rational surface whose F_q-points are the normal-basis coordinates
/// of the `x` with `N(x) = T(A x³ + B x² + C x + D)`.
///
/// Only `T(D)` enters, as the constant term.
pub fn build_s1(tower: &FieldTower, k: Coeffs) -> CubicForm {
    let cu = |c| Element::new(Level::Cubic, c);
    let (a, b, c, d) = (cu(k.a), cu(k.b), cu(k.c), cu(k.d));
    let t = |x: Element| tower.trace(x).expect("cubic level");
    let fr = |x: Element, i: u32| tower.frobenius(x, i).expect("cubic level");
    let al = [tower.alpha(), fr(tower.alpha(), 1), fr(tower.alpha(), 2)];
    let mul = |x, y| tower.mul(x, y);
    let mono = |e: [u32; 3]| -> Element {
        let mut r = tower.one(Level::Cubic);
        for (i, &n) in e.iter().enumerate() {
            for _ in 0..n {
                r = mul(r, al[i]);
            }
        }
        r
    };
    let n_alpha = tower.norm(tower.alpha()).expect("cubic level");
    let t_q2 = t(mono([2, 1, 0])); // T(α^{q+2})
    let t_2q1 = t(mono([1, 2, 0])); // T(α^{2q+1})
    let three = |x| tower.scale_int(3, x);
    let two = |x| tower.scale_int(2, x);
    let sub = |x, y| tower.sub(x, y);
    let ta = |e| t(mul(a, mono(e)));
    let tb = |e| t(mul(b, mono(e)));

    let mut coeffs = [Element::new(Level::Base, 0); 20];
    let mut set = |e: [u8; 3], v: Element| coeffs[monomial_index(e)] = v;

    set([3, 0, 0], sub(ta([3, 0, 0]), n_alpha));
    set([0, 3, 0], sub(ta([0, 3, 0]), n_alpha));
    set([0, 0, 3], sub(ta([0, 0, 3]), n_alpha));
    set([2, 1, 0], sub(three(ta([2, 1, 0])), t_q2));
    set([0, 2, 1], sub(three(ta([0, 2, 1])), t_q2));
    set([1, 0, 2], sub(three(ta([1, 0, 2])), t_q2));
    set([2, 0, 1], sub(three(ta([2, 0, 1])), t_2q1));
    set([1, 2, 0], sub(three(ta([1, 2, 0])), t_2q1));
    set([0, 1, 2], sub(three(ta([0, 1, 2])), t_2q1));
    // x0 x1 x2 also collects 6 N(α) T(A) from the cube of the linear form.
    let xyz = tower.neg(tower.add(three(n_alpha), t(mono([3, 0, 0]))));
    let six_na_ta = tower.scale_int(6, mul(n_alpha, t(a)));
    set([1, 1, 1], tower.add(xyz, six_na_ta));
    set([2, 0, 0], tb([2, 0, 0]));
    set([0, 2, 0], tb([0, 2, 0]));
    set([0, 0, 2], tb([0, 0, 2]));
    set([1, 1, 0], two(tb([1, 1, 0])));
    set([1, 0, 1], two(tb([1, 0, 1])));
    set([0, 1, 1], two(tb([0, 1, 1])));
    set([1, 0, 0], t(mul(al[0], c)));
    set([0, 1, 0], t(mul(al[0], fr(c, 2))));
    set([0, 0, 1], t(mul(al[0], fr(c, 1))));
    set([0, 0, 0], t(d));

    let codes = coeffs.map(|e| e.code);
    CubicForm::new(Level::Base, codes).expect("the norm contributes a nonzero cubic part")
}

/// `A X0³ + A^q X1³ + A^{q²} X2³ + … + E − X0 X1 X2` over F_{q^3}.
pub fn build_s2(tower: &FieldTower, k: Coeffs) -> CubicForm {
    let cu = |c| Element::new(Level::Cubic, c);
    let fr = |x: u32, i: u32| tower.cfrob(x, i);
    let mut coeffs = [0u32; 20];
    let mut set = |e: [u8; 3], v: u32| coeffs[monomial_index(e)] = v;
    for i in 0..3u32 {
        let mut e3 = [0u8; 3];
        e3[i as usize] = 3;
        set(e3, fr(k.a, i));
        let mut e2 = [0u8; 3];
        e2[i as usize] = 2;
        set(e2, fr(k.b, i));
        let mut e1 = [0u8; 3];
        e1[i as usize] = 1;
        set(e1, fr(k.c, i));
    }
    set([1, 1, 1], tower.neg(tower.one(Level::Cubic)).code);
    set([0, 0, 0], tower.trace(cu(k.d)).expect("cubic level").code);
    CubicForm::new(Level::Cubic, coeffs).expect("X0 X1 X2 term is always present")
}

/// `v ↦ M v` with `M` the circulant matrix of the conjugates of α.
pub fn apply_psi(tower: &FieldTower, v: [Element; 3]) -> [Element; 3] {
    let a = tower.alpha().code;
    let conj = [a, tower.cfrob(a, 1), tower.cfrob(a, 2)];
    let mut out = [Element::new(Level::Cubic, 0); 3];
    for (r, slot) in out.iter_mut().enumerate() {
        let mut acc = 0;
        for (c, x) in v.iter().enumerate() {
            acc = tower.cadd(acc, tower.cmul(conj[(r + c) % 3], x.code));
        }
        *slot = Element::new(Level::Cubic, acc);
    }
    out
}
