//! Word-sized modular arithmetic: gcd, inverses, exponentiation, primality,
//! trial-division factorization, Tonelli-Shanks and CRT recombination.
//!
//! All moduli fit in a `u64`; products are formed in `u128` so nothing here
//! overflows for any modulus below 2^64.

use crate::error::{Error, Result};

/// Largest prime factor candidate tried by [`factorize`] unless a caller
/// asks for a different bound.
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 22;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm_u128(a: u128, b: u128) -> Option<u128> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd_u128(a, b)).checked_mul(b)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(base: u64, mut exp: u128, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce_signed(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime-power factorization by trial division up to `bound`.
///
/// A cofactor left over after trial division is accepted when it is prime;
/// otherwise the factorization is reported as exceeding the bound.
pub fn factorize_with_bound(n: u64, bound: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p <= bound && (p as u128) * (p as u128) <= m as u128 {
        if m.is_multiple_of(p) {
            let mut k = 0;
            while m.is_multiple_of(p) {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        if (p as u128) * (p as u128) > m as u128 || is_prime(m) {
            out.push((m, 1));
        } else {
            return Err(Error::FactorizationBound { n, bound });
        }
    }
    Ok(out)
}

pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    factorize_with_bound(n, DEFAULT_TRIAL_BOUND)
}

pub fn euler_phi_from_factors(factors: &[(u64, u32)]) -> u64 {
    factors.iter().map(|&(p, k)| p.pow(k - 1) * (p - 1)).product()
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(euler_phi_from_factors(&factorize(n)?))
}

/// Euler's criterion for an odd prime `p` and `a` coprime to `p`.
pub fn euler_criterion(a: u64, p: u64) -> bool {
    pow_mod(a, ((p - 1) / 2) as u128, p) == 1
}

/// One square root of a quadratic residue `a` modulo an odd prime `p`.
///
/// Below 50 the root is found by exhaustive search; above, by Tonelli-Shanks
/// with the first non-residue among 2, 3, 4, ... Returns `None` for
/// non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p < 50 {
        return (1..p).find(|&y| mul_mod(y, y, p) == a);
    }
    if !euler_criterion(a, p) {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, ((p + 1) / 4) as u128, p));
    }
    // p - 1 = q * 2^s with q odd
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| !euler_criterion(z, p))?;
    let mut m = s;
    let mut c = pow_mod(z, q as u128, p);
    let mut t = pow_mod(a, q as u128, p);
    let mut r = pow_mod(a, q.div_ceil(2) as u128, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u128 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Combines `x = r_i (mod m_i)` for pairwise coprime `m_i` whose product fits in a `u64`.
pub fn crt(residues: &[(u64, u64)]) -> u64 {
    let mut x = 0u64;
    let mut m = 1u64;
    for &(r, mi) in residues {
        // x + m * t = r (mod mi)
        let inv = inv_mod(m % mi, mi).expect("moduli must be pairwise coprime");
        let t = mul_mod(sub_mod(r % mi, x % mi, mi), inv, mi);
        let next = m as u128 * mi as u128;
        x = ((x as u128 + m as u128 * t as u128) % next) as u64;
        m = next as u64;
    }
    x
}
