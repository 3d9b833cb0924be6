//! The tower F_p ⊂ F_q ⊂ F_{q^3}.
//!
//! F_q = F_p[s]/(modulus1) is tabulated outright (q ≤ 256). F_{q^3} is
//! F_q[t]/(modulus2) with elements held as three F_q digits; Frobenius and
//! trace are F_q-linear, so they are precomputed on the basis 1, t, t².

use super::poly::{digits, is_prime, rem, smallest_irreducible, undigits};
use super::{Element, GfError, Level};

/// Largest admissible `q^3`.
pub const MAX_CUBIC_SIZE: u64 = 1 << 24;

type Digits = [u32; 3];

#[derive(Debug, Clone)]
pub struct FieldTower {
    p: u32,
    h: u32,
    q: u32,
    modulus1: Vec<u32>,
    /// Monic cubic over F_q, lowest degree first, entries are F_q codes.
    modulus2: [u32; 4],
    alpha: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// t^3 and t^4 reduced.
    t3: Digits,
    t4: Digits,
    /// `frob[k][i]` is `(t^i)^(q^k)` for k = 1, 2.
    frob: [[Digits; 3]; 2],
    /// Trace of 1, t, t².
    trace_basis: Digits,
    /// Inverse of the matrix whose columns are α, α^q, α^{q²}.
    normal_inv: [[u32; 3]; 3],
}

impl FieldTower {
    /// Build the tower with the smallest moduli and the smallest normal element.
    pub fn build(p: u32, h: u32) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        let cubic_size = (p as u64)
            .checked_pow(3 * h)
            .filter(|_| h >= 1)
            .unwrap_or(u64::MAX);
        if cubic_size > MAX_CUBIC_SIZE {
            return Err(GfError::TooLarge {
                size: cubic_size,
                limit: MAX_CUBIC_SIZE,
            });
        }
        let q = p.pow(h);
        let hu = h as usize;
        let modulus1 = smallest_irreducible(p, hu);

        let qq = q as usize;
        let mut add = vec![0u16; qq * qq];
        let mut mul = vec![0u16; qq * qq];
        for a in 0..q {
            let da = digits(a as u64, p, hu);
            for b in 0..q {
                let db = digits(b as u64, p, hu);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p) as u16;
                let mut prod = vec![0u32; 2 * hu];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                mul[(a * q + b) as usize] = undigits(&rem(&prod, &modulus1, p), p) as u16;
            }
        }
        let mut neg = vec![0u16; qq];
        let mut inv = vec![0u16; qq];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b as u16;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                }
            }
        }

        let mut tower = FieldTower {
            p,
            h,
            q,
            modulus1,
            modulus2: [0, 0, 0, 1],
            alpha: 0,
            add,
            mul,
            neg,
            inv,
            t3: [0; 3],
            t4: [0; 3],
            frob: [[[0; 3]; 3]; 2],
            trace_basis: [0; 3],
            normal_inv: [[0; 3]; 3],
        };

        // Smallest cubic without roots in F_q.
        let m2 = (0..q.pow(3))
            .map(|c| [c % q, c / q % q, c / q / q])
            .find(|m| {
                (0..q).all(|x| {
                    let v = tower.badd(
                        tower.bmul(tower.bmul(x, x), x),
                        tower.badd(
                            tower.bmul(m[2], tower.bmul(x, x)),
                            tower.badd(tower.bmul(m[1], x), m[0]),
                        ),
                    );
                    v != 0
                })
            })
            .expect("irreducible cubics exist over every finite field");
        tower.modulus2 = [m2[0], m2[1], m2[2], 1];
        tower.t3 = [tower.bneg(m2[0]), tower.bneg(m2[1]), tower.bneg(m2[2])];
        tower.t4 = tower.cmul_digits([0, 1, 0], tower.t3);

        let one = [1, 0, 0];
        let t = [0, 1, 0];
        let t2 = [0, 0, 1];
        for k in 0..2 {
            let e = (q as u64).pow(k as u32 + 1);
            tower.frob[k] = [one, tower.cpow_digits(t, e), tower.cpow_digits(t2, e)];
        }
        for i in 0..3 {
            let x = [one, t, t2][i];
            let s = tower.cadd_digits(x, tower.cadd_digits(tower.frob[0][i], tower.frob[1][i]));
            debug_assert!(s[1] == 0 && s[2] == 0);
            tower.trace_basis[i] = s[0];
        }

        let alpha = (1..q.pow(3))
            .find(|&c| {
                let m = tower.conjugate_columns(c);
                tower.det3(&m) != 0
            })
            .expect("normal bases exist");
        tower.alpha = alpha;
        let m = tower.conjugate_columns(alpha);
        tower.normal_inv = tower.inv3(&m);
        Ok(tower)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Number of elements of F_{q^3}.
    pub fn cubic_size(&self) -> u32 {
        self.q * self.q * self.q
    }

    pub fn size(&self, level: Level) -> u32 {
        match level {
            Level::Prime => self.p,
            Level::Base => self.q,
            Level::Cubic => self.cubic_size(),
        }
    }

    /// Defining polynomial of F_q over F_p, lowest degree first.
    pub fn modulus1(&self) -> &[u32] {
        &self.modulus1
    }

    /// Defining polynomial of F_{q^3} over F_q as F_q codes, lowest degree first.
    pub fn modulus2(&self) -> &[u32; 4] {
        &self.modulus2
    }

    pub fn alpha(&self) -> Element {
        Element::new(Level::Cubic, self.alpha)
    }

    pub fn element(&self, level: Level, code: u32) -> Result<Element, GfError> {
        let size = self.size(level);
        if code >= size {
            return Err(GfError::OutOfRange {
                code: code as u64,
                size: size as u64,
            });
        }
        Ok(Element::new(level, code))
    }

    pub fn elements(&self, level: Level) -> impl Iterator<Item = Element> {
        (0..self.size(level)).map(move |c| Element::new(level, c))
    }

    pub fn zero(&self, level: Level) -> Element {
        Element::new(level, 0)
    }

    pub fn one(&self, level: Level) -> Element {
        Element::new(level, 1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Element {
        Element::new(Level::Prime, n.rem_euclid(self.p as i64) as u32)
    }

    // ---- F_q on raw codes ----

    #[inline]
    pub fn badd(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize] as u32
    }

    #[inline]
    pub fn bmul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize] as u32
    }

    #[inline]
    pub fn bneg(&self, a: u32) -> u32 {
        self.neg[a as usize] as u32
    }

    #[inline]
    pub fn bsub(&self, a: u32, b: u32) -> u32 {
        self.badd(a, self.bneg(b))
    }

    /// Inverse in F_q; zero maps to zero.
    #[inline]
    pub fn binv(&self, a: u32) -> u32 {
        self.inv[a as usize] as u32
    }

    // ---- F_{q^3} on digit triples ----

    #[inline]
    fn split(&self, c: u32) -> Digits {
        let q = self.q;
        [c % q, c / q % q, c / q / q]
    }

    #[inline]
    fn join(&self, d: Digits) -> u32 {
        d[0] + self.q * (d[1] + self.q * d[2])
    }

    #[inline]
    fn cadd_digits(&self, a: Digits, b: Digits) -> Digits {
        [
            self.badd(a[0], b[0]),
            self.badd(a[1], b[1]),
            self.badd(a[2], b[2]),
        ]
    }

    #[inline]
    fn scale_digits(&self, s: u32, a: Digits) -> Digits {
        [self.bmul(s, a[0]), self.bmul(s, a[1]), self.bmul(s, a[2])]
    }

    fn cmul_digits(&self, a: Digits, b: Digits) -> Digits {
        let mut c = [0u32; 5];
        for i in 0..3 {
            if a[i] == 0 {
                continue;
            }
            for j in 0..3 {
                c[i + j] = self.badd(c[i + j], self.bmul(a[i], b[j]));
            }
        }
        let mut r = [c[0], c[1], c[2]];
        if c[3] != 0 {
            r = self.cadd_digits(r, self.scale_digits(c[3], self.t3));
        }
        if c[4] != 0 {
            r = self.cadd_digits(r, self.scale_digits(c[4], self.t4));
        }
        r
    }

    fn cpow_digits(&self, mut base: Digits, mut e: u64) -> Digits {
        let mut acc = [1, 0, 0];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.cmul_digits(acc, base);
            }
            base = self.cmul_digits(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn cadd(&self, a: u32, b: u32) -> u32 {
        self.join(self.cadd_digits(self.split(a), self.split(b)))
    }

    #[inline]
    pub fn cmul(&self, a: u32, b: u32) -> u32 {
        self.join(self.cmul_digits(self.split(a), self.split(b)))
    }

    #[inline]
    pub fn cneg(&self, a: u32) -> u32 {
        let d = self.split(a);
        self.join([self.bneg(d[0]), self.bneg(d[1]), self.bneg(d[2])])
    }

    pub fn cpow(&self, a: u32, e: u64) -> u32 {
        self.join(self.cpow_digits(self.split(a), e))
    }

    /// `a^(q^k)` on a cubic code.
    pub fn cfrob(&self, a: u32, k: u32) -> u32 {
        let k = (k % 3) as usize;
        if k == 0 {
            return a;
        }
        let d = self.split(a);
        let f = &self.frob[k - 1];
        let mut r = [0; 3];
        for i in 0..3 {
            if d[i] != 0 {
                r = self.cadd_digits(r, self.scale_digits(d[i], f[i]));
            }
        }
        self.join(r)
    }

    /// Trace to F_q on a cubic code, returning an F_q code.
    pub fn ctrace(&self, a: u32) -> u32 {
        let d = self.split(a);
        (0..3).fold(0, |acc, i| {
            self.badd(acc, self.bmul(d[i], self.trace_basis[i]))
        })
    }

    /// Norm to F_q on a cubic code, returning an F_q code.
    pub fn cnorm(&self, a: u32) -> u32 {
        let n = self.cmul(a, self.cmul(self.cfrob(a, 1), self.cfrob(a, 2)));
        debug_assert!(n < self.q);
        n
    }

    // ---- Element API ----

    fn check(&self, x: Element) -> Element {
        debug_assert!(x.code < self.size(x.level));
        x
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        let level = a.level.max(b.level);
        let code = match level {
            Level::Cubic => self.cadd(a.code, b.code),
            _ => self.badd(a.code, b.code),
        };
        self.check(Element::new(level, code))
    }

    pub fn neg(&self, a: Element) -> Element {
        let code = match a.level {
            Level::Cubic => self.cneg(a.code),
            _ => self.bneg(a.code),
        };
        Element::new(a.level, code)
    }

    pub fn sub(&self, a: Element, b: Element) -> Element {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        let level = a.level.max(b.level);
        let code = match level {
            Level::Cubic => self.cmul(a.code, b.code),
            _ => self.bmul(a.code, b.code),
        };
        Element::new(level, code)
    }

    pub fn pow(&self, a: Element, e: u64) -> Element {
        let code = match a.level {
            Level::Cubic => self.cpow(a.code, e),
            _ => {
                let mut acc = 1;
                let (mut b, mut e) = (a.code, e);
                while e > 0 {
                    if e & 1 == 1 {
                        acc = self.bmul(acc, b);
                    }
                    b = self.bmul(b, b);
                    e >>= 1;
                }
                acc
            }
        };
        Element::new(a.level, code)
    }

    /// Multiplicative inverse as `x^(size-2)`; `None` for zero.
    pub fn checked_inv(&self, a: Element) -> Option<Element> {
        if a.is_zero() {
            return None;
        }
        match a.level {
            Level::Cubic => Some(self.pow(a, self.cubic_size() as u64 - 2)),
            _ => Some(Element::new(a.level, self.binv(a.code))),
        }
    }

    /// Multiply by an integer.
    pub fn scale_int(&self, n: i64, a: Element) -> Element {
        self.mul(self.from_int(n), a)
    }

    fn require_cubic(x: Element) -> Result<(), GfError> {
        if x.level != Level::Cubic {
            return Err(GfError::WrongLevel {
                expected: Level::Cubic,
                found: x.level,
            });
        }
        Ok(())
    }

    pub fn trace(&self, x: Element) -> Result<Element, GfError> {
        Self::require_cubic(x)?;
        Ok(Element::new(Level::Base, self.ctrace(x.code)))
    }

    pub fn norm(&self, x: Element) -> Result<Element, GfError> {
        Self::require_cubic(x)?;
        Ok(Element::new(Level::Base, self.cnorm(x.code)))
    }

    /// `x^(q^k)`.
    pub fn frobenius(&self, x: Element, k: u32) -> Result<Element, GfError> {
        Self::require_cubic(x)?;
        Ok(Element::new(Level::Cubic, self.cfrob(x.code, k)))
    }

    /// Coordinates of `x` on the normal basis α, α^q, α^{q²}.
    pub fn coords_on_normal_basis(&self, x: Element) -> Result<[Element; 3], GfError> {
        Self::require_cubic(x)?;
        let d = self.split(x.code);
        let mut out = [Element::new(Level::Base, 0); 3];
        for (i, slot) in out.iter_mut().enumerate() {
            let c = (0..3).fold(0, |acc, j| {
                self.badd(acc, self.bmul(self.normal_inv[i][j], d[j]))
            });
            *slot = Element::new(Level::Base, c);
        }
        Ok(out)
    }

    /// `x0·α + x1·α^q + x2·α^{q²}`.
    pub fn from_normal_coords(&self, x: [Element; 3]) -> Element {
        let mut acc = 0;
        for (k, xi) in x.iter().enumerate() {
            let term = self.cmul(xi.code, self.cfrob(self.alpha, k as u32));
            acc = self.cadd(acc, term);
        }
        Element::new(Level::Cubic, acc)
    }

    /// Whether an element of F_{q^3} lies in F_q.
    pub fn in_base(&self, x: Element) -> bool {
        x.code < self.q
    }

    /// Human-readable polynomial form, e.g. `t^2+(s+1)t+1`.
    pub fn pretty(&self, x: Element) -> String {
        let base =
            |c: u32| -> String { poly_string(&digits(c as u64, self.p, self.h as usize), "s") };
        match x.level {
            Level::Prime | Level::Base => base(x.code),
            Level::Cubic => {
                let d = self.split(x.code);
                let mut terms = Vec::new();
                for i in (0..3).rev() {
                    if d[i] == 0 {
                        continue;
                    }
                    let c = base(d[i]);
                    let c = if c.contains('+') { format!("({c})") } else { c };
                    let mono = match i {
                        0 => String::new(),
                        1 => "t".to_string(),
                        _ => format!("t^{i}"),
                    };
                    terms.push(match (c.as_str(), mono.is_empty()) {
                        (_, true) => c,
                        ("1", false) => mono,
                        _ => format!("{c}{mono}"),
                    });
                }
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
        }
    }

    fn conjugate_columns(&self, c: u32) -> [[u32; 3]; 3] {
        let cols = [
            self.split(c),
            self.split(self.cfrob(c, 1)),
            self.split(self.cfrob(c, 2)),
        ];
        let mut m = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = cols[j][i];
            }
        }
        m
    }

    fn det3(&self, m: &[[u32; 3]; 3]) -> u32 {
        let t = |a, b, c| self.bmul(a, self.bmul(b, c));
        let pos = self.badd(
            t(m[0][0], m[1][1], m[2][2]),
            self.badd(t(m[0][1], m[1][2], m[2][0]), t(m[0][2], m[1][0], m[2][1])),
        );
        let negs = self.badd(
            t(m[0][2], m[1][1], m[2][0]),
            self.badd(t(m[0][0], m[1][2], m[2][1]), t(m[0][1], m[1][0], m[2][2])),
        );
        self.bsub(pos, negs)
    }

    /// Inverse by adjugate; the caller guarantees a nonzero determinant.
    #[allow(clippy::needless_range_loop)]
    fn inv3(&self, m: &[[u32; 3]; 3]) -> [[u32; 3]; 3] {
        let di = self.binv(self.det3(m));
        let mut r = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                // cofactor C_{ji}
                let (a, b) = ((j + 1) % 3, (j + 2) % 3);
                let (c, d) = ((i + 1) % 3, (i + 2) % 3);
                let cof = self.bsub(self.bmul(m[a][c], m[b][d]), self.bmul(m[a][d], m[b][c]));
                r[i][j] = self.bmul(di, cof);
            }
        }
        r
    }
}

fn poly_string(coeffs: &[u32], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(if mono.is_empty() {
            c.to_string()
        } else if c == 1 {
            mono
        } else {
            format!("{c}{mono}")
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(c: u32) -> Element {
        Element::new(Level::Cubic, c)
    }

    #[test]
    fn binary_tower_constants() {
        let t = FieldTower::build(2, 1).unwrap();
        assert_eq!(t.modulus2(), &[1, 1, 0, 1]);
        assert_eq!(t.alpha().code, 3); // t + 1
                                       // t -> t^2 -> t^2 + t
        assert_eq!(t.frobenius(cubic(2), 1).unwrap().code, 4);
        assert_eq!(t.frobenius(cubic(2), 2).unwrap().code, 6);
        assert_eq!(t.trace(cubic(2)).unwrap().code, 0);
        assert_eq!(t.trace(cubic(1)).unwrap().code, 1);
    }

    #[test]
    fn one_has_all_ones_coordinates_for_q2() {
        let t = FieldTower::build(2, 1).unwrap();
        let c = t.coords_on_normal_basis(cubic(1)).unwrap();
        assert_eq!(c.map(|e| e.code), [1, 1, 1]);
        let a = t.coords_on_normal_basis(t.alpha()).unwrap();
        assert_eq!(a.map(|e| e.code), [1, 0, 0]);
    }

    #[test]
    fn cubic_multiplication_matches_flat_field() {
        // Cross-check against an independent GF(p^{3h}) built from scratch.
        for (p, h) in [(2, 1), (3, 1), (2, 2)] {
            let t = FieldTower::build(p, h).unwrap();
            let flat = super::super::ExtField::new(p, 3 * h).unwrap();
            let emb = flat.embed_tower(&t).unwrap();
            let img = |c| emb.map(&flat, Level::Cubic, c);
            for a in 0..t.cubic_size() {
                for b in (0..t.cubic_size()).step_by(7) {
                    assert_eq!(img(t.cmul(a, b)), flat.mul(img(a), img(b)));
                    assert_eq!(img(t.cadd(a, b)), flat.add(img(a), img(b)));
                }
            }
        }
    }

    #[test]
    fn wrong_level_is_reported() {
        let t = FieldTower::build(3, 1).unwrap();
        let x = Element::new(Level::Base, 1);
        assert!(matches!(t.trace(x), Err(GfError::WrongLevel { .. })));
        assert!(matches!(t.norm(x), Err(GfError::WrongLevel { .. })));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldTower::build(6, 1), Err(GfError::NotPrime(6))));
        assert!(matches!(
            FieldTower::build(2, 9),
            Err(GfError::TooLarge { .. })
        ));
        assert!(FieldTower::build(2, 8).is_ok());
    }

    #[test]
    fn pretty_forms() {
        let t = FieldTower::build(2, 1).unwrap();
        assert_eq!(t.pretty(t.alpha()), "t+1");
        let t4 = FieldTower::build(2, 2).unwrap();
        assert_eq!(t4.pretty(Element::new(Level::Base, 3)), "s+1");
    }
}
