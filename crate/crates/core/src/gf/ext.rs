//! Flat finite fields GF(p^m) with Zech-logarithm arithmetic.
//!
//! These are the search fields used for point counting and singularity
//! sweeps. Elements are stored by discrete logarithm with respect to a fixed
//! primitive element, so multiplication is an addition of exponents and
//! addition goes through the Zech table `log(1 + g^d)`.

use super::poly::{digits, smallest_irreducible, undigits};
use super::tower::FieldTower;
use super::GfError;

/// Largest flat field we are willing to tabulate.
pub const MAX_FLAT_SIZE: u64 = 1 << 21;

/// An element of an [`ExtField`], stored as a discrete logarithm.
///
/// Only meaningful together with the field that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(u32);

impl Fe {
    /// Raw table index: the discrete logarithm, or `size - 1` for zero.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn from_index(i: u32) -> Self {
        Fe(i)
    }
}

#[derive(Debug, Clone)]
pub struct ExtField {
    p: u32,
    degree: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    /// `log(-1)`, equal to 0 in characteristic 2.
    neg_one: u32,
}

impl ExtField {
    /// GF(p^degree) defined by the smallest monic irreducible of that degree.
    pub fn new(p: u32, degree: u32) -> Result<Self, GfError> {
        if !super::poly::is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        let size = (p as u64).checked_pow(degree).unwrap_or(u64::MAX);
        if degree == 0 || size > MAX_FLAT_SIZE {
            return Err(GfError::TooLarge {
                size,
                limit: MAX_FLAT_SIZE,
            });
        }
        let size = size as u32;
        let m = degree as usize;
        let modulus = smallest_irreducible(p, m);
        let n = size - 1;

        let mul_enc = |a: u32, b: u32| -> u32 {
            let da = digits(a as u64, p, m);
            let db = digits(b as u64, p, m);
            let mut prod = vec![0u64; 2 * m];
            for (i, &x) in da.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] += x as u64 * y as u64;
                }
            }
            let prod: Vec<u32> = prod.iter().map(|&c| (c % p as u64) as u32).collect();
            let r = super::poly::rem(&prod, &modulus, p);
            undigits(&r, p) as u32
        };

        // Smallest primitive element by encoding.
        let mut exp = vec![0u32; n as usize];
        let mut found = false;
        for g in 1..size {
            let mut cur = 1u32;
            let mut ok = true;
            for (i, slot) in exp.iter_mut().enumerate() {
                if i > 0 && cur == 1 {
                    ok = false;
                    break;
                }
                *slot = cur;
                cur = mul_enc(cur, g);
            }
            if ok && cur == 1 {
                found = true;
                break;
            }
        }
        assert!(found, "multiplicative group of a finite field is cyclic");

        let mut log = vec![n; size as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let add_enc = |a: u32, b: u32| -> u32 {
            let da = digits(a as u64, p, m);
            let db = digits(b as u64, p, m);
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&s, p) as u32
        };
        let zech = exp.iter().map(|&e| log[add_enc(e, 1) as usize]).collect();
        let neg_one = if p == 2 { 0 } else { n / 2 };
        Ok(ExtField {
            p,
            degree,
            size,
            modulus,
            exp,
            log,
            zech,
            neg_one,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Monic defining polynomial over F_p, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    fn order(&self) -> u32 {
        self.size - 1
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe(self.order())
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe(0)
    }

    #[inline]
    pub fn is_zero(&self, a: Fe) -> bool {
        a.0 == self.order()
    }

    pub fn from_encoding(&self, code: u32) -> Fe {
        Fe(self.log[code as usize])
    }

    pub fn encoding(&self, a: Fe) -> u32 {
        if self.is_zero(a) {
            0
        } else {
            self.exp[a.0 as usize]
        }
    }

    /// Image of an integer under Z -> F_p -> this field.
    pub fn from_int(&self, n: i64) -> Fe {
        let r = n.rem_euclid(self.p as i64) as u32;
        self.from_encoding(r)
    }

    /// All elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.size).map(move |c| self.from_encoding(c))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        let n = self.order();
        if a.0 == n || b.0 == n {
            return Fe(n);
        }
        let s = a.0 + b.0;
        Fe(if s >= n { s - n } else { s })
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let n = self.order();
        if a.0 == n {
            return b;
        }
        if b.0 == n {
            return a;
        }
        let d = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + n - a.0 };
        let z = self.zech[d as usize];
        if z == n {
            return Fe(n);
        }
        let s = a.0 + z;
        Fe(if s >= n { s - n } else { s })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.mul(a, Fe(self.neg_one))
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if self.is_zero(a) {
            None
        } else {
            let n = self.order();
            Some(Fe(if a.0 == 0 { 0 } else { n - a.0 }))
        }
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return self.one();
        }
        if self.is_zero(a) {
            return a;
        }
        let n = self.order() as u64;
        Fe(((a.0 as u64 * (e % n)) % n) as u32)
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: Fe, k: u32) -> Fe {
        self.pow(a, (self.p as u64).pow(k))
    }

    /// Evaluate a polynomial given lowest-degree-first.
    pub fn eval_poly(&self, coeffs: &[Fe], x: Fe) -> Fe {
        coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Smallest-encoding root of a polynomial, if any.
    fn find_root(&self, coeffs: &[Fe]) -> Option<Fe> {
        self.elements()
            .find(|&x| self.is_zero(self.eval_poly(coeffs, x)))
    }

    /// Field embedding of the tower's levels into this field.
    ///
    /// Requires `h | degree`; the cubic level embeds only when `3h | degree`.
    pub fn embed_tower(&self, tower: &FieldTower) -> Option<TowerEmbedding> {
        if self.p != tower.p() || !self.degree.is_multiple_of(tower.h()) {
            return None;
        }
        let m1: Vec<Fe> = tower
            .modulus1()
            .iter()
            .map(|&c| self.from_int(c as i64))
            .collect();
        let s = self.find_root(&m1)?;
        let h = tower.h() as usize;
        let base: Vec<Fe> = (0..tower.q())
            .map(|code| {
                let ds = digits(code as u64, self.p, h);
                let coeffs: Vec<Fe> = ds.iter().map(|&d| self.from_int(d as i64)).collect();
                self.eval_poly(&coeffs, s)
            })
            .collect();
        let cubic_root = if self.degree.is_multiple_of(3 * tower.h()) {
            let m2 = tower.modulus2();
            let coeffs: Vec<Fe> = m2.iter().map(|&c| base[c as usize]).collect();
            self.find_root(&coeffs)
        } else {
            None
        };
        Some(TowerEmbedding {
            base,
            cubic_root,
            q: tower.q(),
        })
    }
}

/// A field homomorphism from the tower into an [`ExtField`].
#[derive(Debug, Clone)]
pub struct TowerEmbedding {
    base: Vec<Fe>,
    cubic_root: Option<Fe>,
    q: u32,
}

impl TowerEmbedding {
    pub fn embeds_cubic(&self) -> bool {
        self.cubic_root.is_some()
    }

    /// Image of an element given by its canonical code at `level`.
    ///
    /// Panics if `level` is cubic and this embedding does not cover it.
    pub fn map(&self, field: &ExtField, level: super::Level, code: u32) -> Fe {
        match level {
            super::Level::Prime | super::Level::Base => self.base[code as usize],
            super::Level::Cubic => {
                let r = self.cubic_root.expect("cubic level is not embedded");
                let q = self.q;
                let c0 = self.base[(code % q) as usize];
                let c1 = self.base[(code / q % q) as usize];
                let c2 = self.base[(code / q / q) as usize];
                field.eval_poly(&[c0, c1, c2], r)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &ExtField) {
        let els: Vec<Fe> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.zero()), a);
            assert_eq!(f.mul(a, f.one()), a);
            assert!(f.is_zero(f.add(a, f.neg(a))));
            if let Some(i) = f.inv(a) {
                assert_eq!(f.mul(a, i), f.one());
            }
            for &b in els.iter().step_by(3) {
                assert_eq!(f.add(a, b), f.add(b, a));
                for &c in els.iter().step_by(5) {
                    let lhs = f.mul(a, f.add(b, c));
                    let rhs = f.add(f.mul(a, b), f.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for (p, m) in [(2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 2)] {
            check_axioms(&ExtField::new(p, m).unwrap());
        }
    }

    #[test]
    fn encoding_is_bijective() {
        let f = ExtField::new(3, 4).unwrap();
        let mut seen = [false; 81];
        for a in f.elements() {
            let c = f.encoding(a) as usize;
            assert!(!seen[c]);
            seen[c] = true;
        }
    }

    #[test]
    fn addition_matches_digitwise_sum() {
        let f = ExtField::new(3, 2).unwrap();
        for a in 0..9u32 {
            for b in 0..9u32 {
                let s = f.add(f.from_encoding(a), f.from_encoding(b));
                let expect = (a % 3 + b % 3) % 3 + 3 * ((a / 3 + b / 3) % 3);
                assert_eq!(f.encoding(s), expect);
            }
        }
    }

    #[test]
    fn frobenius_has_order_degree() {
        let f = ExtField::new(2, 4).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(a, 4), a);
        }
        assert!(f.elements().any(|a| f.frobenius(a, 2) != a));
    }

    #[test]
    fn rejects_oversized_and_composite() {
        assert!(matches!(ExtField::new(4, 2), Err(GfError::NotPrime(4))));
        assert!(matches!(
            ExtField::new(2, 30),
            Err(GfError::TooLarge { .. })
        ));
    }
}
