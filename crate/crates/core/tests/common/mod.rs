#![allow(dead_code)]

use qrlift::{ideal_from_generators, Element, Ideal, Ring};

pub fn ring(spec: &str) -> Ring {
    Ring::parse(spec).unwrap()
}

pub fn el(r: &Ring, text: &str) -> Element {
    r.parse_element(text).unwrap()
}

pub fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
    let g: Vec<Element> = gens.iter().map(|s| el(r, s)).collect();
    ideal_from_generators(r, &g).unwrap()
}

/// `gcd` by repeated subtraction-free remainder, kept separate from the library.
pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Distinct prime factors by trial division.
pub fn distinct_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Square-root counts of every residue modulo `n`, by squaring each one.
pub fn root_counts_mod(n: u64) -> Vec<u32> {
    let mut counts = vec![0u32; n as usize];
    for y in 0..n {
        counts[(y * y % n) as usize] += 1;
    }
    counts
}

/// `|q(Z_n*)|` by exhaustive squaring.
pub fn brute_q_count(n: u64) -> u64 {
    let counts = root_counts_mod(n);
    (0..n).filter(|&a| gcd(a, n) == 1 && counts[a as usize] > 0).count() as u64
}
