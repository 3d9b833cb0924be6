//! Dense polynomials over a prime field, used to pick deterministic moduli.
//!
//! Polynomials are coefficient vectors, lowest degree first. The canonical
//! integer encoding of a monic polynomial of degree `d` is the base-`p` number
//! formed by its `d` lower coefficients, constant term least significant.

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Base-`p` digits of `n`, least significant first, padded to `len`.
pub(crate) fn digits(mut n: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for slot in out.iter_mut() {
        *slot = (n % p as u64) as u32;
        n /= p as u64;
    }
    out
}

pub(crate) fn undigits(ds: &[u32], p: u32) -> u64 {
    ds.iter()
        .rev()
        .fold(0u64, |acc, &d| acc * p as u64 + d as u64)
}

/// Monic polynomial of degree `deg` whose lower coefficients encode `n`.
pub(crate) fn monic_from_code(n: u64, p: u32, deg: usize) -> Vec<u32> {
    let mut f = digits(n, p, deg);
    f.push(1);
    f
}

/// Remainder of `a` modulo the monic polynomial `m` over F_p.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    while r.len() > dm {
        let lead = r.pop().unwrap() % p64;
        if lead == 0 {
            continue;
        }
        let shift = r.len() - dm;
        for (i, &mc) in m[..dm].iter().enumerate() {
            // r -= lead * m * x^shift
            let sub = lead * mc as u64 % p64;
            r[shift + i] = (r[shift + i] + p64 - sub) % p64;
        }
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

/// Irreducibility over F_p by trial division with every monic polynomial of
/// degree at most half the degree of `f`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let g = monic_from_code(n, p, d);
            if rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `deg` over F_p with the smallest encoding.
pub(crate) fn smallest_irreducible(p: u32, deg: usize) -> Vec<u32> {
    let count = (p as u64).pow(deg as u32);
    (0..count)
        .map(|n| monic_from_code(n, p, deg))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn smallest_binary_irreducibles() {
        // x^2+x+1, x^3+x+1, x^4+x+1
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 4), vec![1, 1, 0, 0, 1]);
        // degree 1: x itself
        assert_eq!(smallest_irreducible(3, 1), vec![0, 1]);
    }

    #[test]
    fn ternary_quadratic() {
        // x^2+1 is the first irreducible quadratic over F_3
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert!(!is_irreducible(&[2, 0, 1], 3)); // x^2-1
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // number of monic irreducibles of degree 4 over F_2 is (16-4)/4 = 3
        let n = (0..16u64)
            .filter(|&c| is_irreducible(&monic_from_code(c, 2, 4), 2))
            .count();
        assert_eq!(n, 3);
        // degree 3 over F_3: (27-3)/3 = 8
        let n = (0..27u64)
            .filter(|&c| is_irreducible(&monic_from_code(c, 3, 3), 3))
            .count();
        assert_eq!(n, 8);
    }

    #[test]
    fn digit_roundtrip() {
        for n in 0..81u64 {
            assert_eq!(undigits(&digits(n, 3, 4), 3), n);
        }
    }
}
