//! One line per acceptance criterion; exits nonzero when any criterion fails
//! or overruns its time limit.

mod common;

use std::collections::HashSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{distinct_primes, gcd, ideal, pow_mod, ring, root_counts_mod};
use qrlift::{
    audit, brute_squares, canonical_chain, chain_census, chain_power_lift, power_lift, root_in_coset_verified, sqrt_zn,
    verify_chain, verify_cnc, zn_census, Alpha, CncChain, CncViolation, CosetRootFinder, Element, Error, Ring,
    RingSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5152_4c49_4654;

type Outcome = Result<String, String>;

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ms(limit: u64) -> Duration {
    Duration::from_millis(limit)
}

fn power_table() -> Outcome {
    let r = ring("Z25");
    let n = ideal(&r, &["5"]);
    let got: Vec<u64> = (0..5)
        .map(|x| power_lift(&r, &n, &r.from_int(x)).map(|h| h.residue()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(got == [0, 1, 7, 18, 24], || format!("table {got:?}"))?;
    Ok(format!("H = {got:?}"))
}

fn eta_bijection() -> Outcome {
    let r = ring("Z25");
    let n = ideal(&r, &["5"]);
    let finder = CosetRootFinder::new(&r, &n).map_err(|e| e.to_string())?;
    let pairs = finder.square_map(&r.from_int(3)).map_err(|e| e.to_string())?;
    let domain: Vec<u64> = pairs.iter().map(|(y, _)| y.residue()).collect();
    let mut image: Vec<u64> = pairs.iter().map(|(_, s)| s.residue()).collect();
    image.sort();
    ensure(domain == [3, 8, 13, 18, 23], || format!("domain {domain:?}"))?;
    ensure(image == [4, 9, 14, 19, 24], || format!("image {image:?}"))?;
    Ok("{3,8,13,18,23} -> {4,9,14,19,24}".into())
}

/// `|q(Z_n*)|` and the set of root counts of its members, from integer
/// squaring alone.
fn brute_zn(n: u64) -> (u128, HashSet<u32>) {
    let counts = root_counts_mod(n);
    let mut q = 0;
    let mut seen = HashSet::new();
    for a in 0..n {
        if gcd(a, n) == 1 && counts[a as usize] > 0 {
            q += 1;
            seen.insert(counts[a as usize]);
        }
    }
    (q, seen)
}

fn prime_power_census() -> Outcome {
    let mut done = 0;
    for p in [3u64, 5, 7, 11] {
        for k in 1..=3u32 {
            let n = p.pow(k);
            let r = Ring::new(&RingSpec::ZMod(n)).map_err(|e| e.to_string())?;
            let chain = canonical_chain(&r).map_err(|e| e.to_string())?;
            let report = chain_census(&chain).map_err(|e| format!("Z{n}: {e}"))?;
            let expected = (p.pow(k - 1) * (p - 1) / 2) as u128;
            let (brute_q, brute_counts) = brute_zn(n);
            ensure(report.q_actual == expected && brute_q == expected, || {
                format!("Z{n}: census {}, brute {brute_q}, expected {expected}", report.q_actual)
            })?;
            ensure(
                report.alpha == Alpha::Uniform(2) && brute_counts == HashSet::from([2]),
                || format!("Z{n}: alpha {} vs brute {brute_counts:?}", report.alpha),
            )?;
            ensure(report.all_pass(), || format!("Z{n}: failed identity"))?;
            done += 1;
        }
    }
    Ok(format!("{done} rings"))
}

fn composite_census() -> Outcome {
    let report = zn_census(675).map_err(|e| e.to_string())?;
    let (brute_q, counts) = brute_zn(675);
    ensure(report.q_actual == 90 && brute_q == 90, || {
        format!("q = {} / {brute_q}", report.q_actual)
    })?;
    ensure(counts == HashSet::from([4]), || format!("root counts {counts:?}"))?;
    let mut checked = 0;
    for n in (3..=2000u64).step_by(2) {
        let m = distinct_primes(n).len() as u32;
        let (brute_q, counts) = brute_zn(n);
        let report = zn_census(n).map_err(|e| format!("Z{n}: {e}"))?;
        ensure(counts == HashSet::from([1 << m]), || {
            format!("Z{n}: counts {counts:?}, m = {m}")
        })?;
        ensure(
            report.alpha == Alpha::Uniform(1 << m) && report.q_actual == brute_q,
            || {
                format!(
                    "Z{n}: census q {} alpha {}, brute q {brute_q}",
                    report.q_actual, report.alpha
                )
            },
        )?;
        checked += 1;
    }
    Ok(format!("|q(Z675*)| = 90, alpha = 4; {checked} odd moduli"))
}

/// Counts units and unit squares by squaring every element.
fn oracle_counts(r: &Ring) -> (u128, u128, HashSet<usize>) {
    let table = brute_squares(r).unwrap();
    let q = table.q_units();
    let counts = q.iter().map(|a| table.roots(a).len()).collect();
    (table.units().len() as u128, q.len() as u128, counts)
}

fn dual_numbers() -> Outcome {
    for (p, i) in [(3u64, 1u32), (3, 2), (5, 1), (5, 2)] {
        let r = Ring::new(&RingSpec::dual(RingSpec::ZMod(p.pow(i)))).map_err(|e| e.to_string())?;
        let n = ideal(&r, &[&p.to_string(), "x"]);
        let chain = verify_chain(&r, &[n]).map_err(|e| e.to_string())?;
        let report = chain_census(&chain).map_err(|e| e.to_string())?;
        let expected = (p.pow(2 * i - 1) * (p - 1) / 2) as u128;
        let (_, brute_q, counts) = oracle_counts(&r);
        ensure(report.q_actual == expected && brute_q == expected, || {
            format!("{r}: census {}, oracle {brute_q}, expected {expected}", report.q_actual)
        })?;
        ensure(
            counts == HashSet::from([2]) && report.alpha == Alpha::Uniform(2),
            || format!("{r}: root counts {counts:?}"),
        )?;
        audit_clean(&r, &chain)?;
    }
    Ok("4 rings".into())
}

fn audit_clean(r: &Ring, chain: &qrlift::IdealChain) -> Result<(), String> {
    let entries = audit(r, chain).map_err(|e| e.to_string())?;
    match entries.iter().find(|e| e.status != qrlift::AuditStatus::Pass) {
        Some(e) => Err(format!("{r}: audit {} {}: {}", e.name, e.status, e.details)),
        None => Ok(()),
    }
}

fn cyclic_group_rings() -> Outcome {
    for i in 1..=3u32 {
        let modulus = 3u64.pow(i);
        let r = Ring::parse(&format!("Z{modulus}[C2]")).map_err(|e| e.to_string())?;
        let chain = canonical_chain(&r).map_err(|e| e.to_string())?;
        let report = chain_census(&chain).map_err(|e| e.to_string())?;
        let q = 3u128.pow(2 * (i - 1));
        let (units, brute_q, _) = oracle_counts(&r);
        ensure(report.q_actual == q && brute_q == q, || {
            format!("{r}: census {}, oracle {brute_q}, expected {q}", report.q_actual)
        })?;
        ensure(units == 4 * q && report.units_count == 4 * q, || {
            format!("{r}: {units} units")
        })?;
        let roots_of_one = brute_squares(&r).unwrap().roots(r.one()).len();
        ensure(roots_of_one == 4, || format!("{r}: |s(1)| = {roots_of_one}"))?;
        audit_clean(&r, &chain)?;

        // (a + bu)^(3^(i-1)) = 1 when a = 1 and b = 0 mod 3
        let e = 3u128.pow(i - 1);
        let cnc = (i > 1)
            .then(|| {
                let ideals: Vec<_> = (1..i).map(|j| ideal(&r, &[&3u64.pow(j).to_string()])).collect();
                verify_cnc(&r, &ideals)
            })
            .transpose()
            .map_err(|e| e.to_string())?;
        for a in (1..modulus).step_by(3) {
            for b in (0..modulus).step_by(3) {
                let x = r.parse_element(&format!("{a} + {b}u")).map_err(|e| e.to_string())?;
                ensure(r.pow(&x, e) == *r.one(), || format!("{r}: ({})^{e} != 1", r.render(&x)))?;
                if let Some(cnc) = &cnc {
                    let w = chain_power_lift(cnc, r.one(), &x).map_err(|e| e.to_string())?;
                    ensure(w.exponent() == e && w.target() == r.one(), || {
                        format!("{r}: chain lift of {} gave {}", r.render(&x), r.render(w.target()))
                    })?;
                }
            }
        }
    }
    Ok("i = 1, 2, 3".into())
}

fn cnc_gatekeeping() -> Outcome {
    let r = ring("Z16");
    let good = [
        ideal(&r, &["2"]),
        ideal(&r, &["4"]),
        ideal(&r, &["8"]),
        ideal(&r, &["0"]),
    ];
    let chain = verify_cnc(&r, &good).map_err(|e| format!("rejected good chain: {e}"))?;
    ensure(chain.ideals().len() == 4, || "chain length".into())?;
    match verify_cnc(&r, &[ideal(&r, &["2"]), ideal(&r, &["0"])]) {
        Err(Error::Chain(v @ CncViolation::Characteristic { .. })) => Ok(format!("rejected: {v}")),
        Err(e) => Err(format!("wrong diagnostic: {e}")),
        Ok(_) => Err("accepted {<2>, {0}}".into()),
    }
}

struct Family {
    ring: Ring,
    chain: CncChain,
    units: Vec<Element>,
    n1: Vec<Element>,
    finder: Option<CosetRootFinder>,
}

fn family(spec: &str, links: &[&str]) -> Family {
    let r = ring(spec);
    let chain = if links.is_empty() {
        let c = canonical_chain(&r).unwrap();
        verify_cnc(&r, c.ideals()).unwrap()
    } else {
        let ideals: Vec<_> = links.iter().map(|g| ideal(&r, &[g])).collect();
        verify_cnc(&r, &ideals).unwrap()
    };
    let q = chain.first().quotient().unwrap();
    let two_invertible = q.ring().is_unit(&q.ring().from_int(2));
    let finder = two_invertible.then(|| CosetRootFinder::new(&r, chain.first()).unwrap());
    Family {
        units: r.units().unwrap(),
        n1: chain.first().elements().unwrap(),
        ring: r,
        chain,
        finder,
    }
}

fn chain_lift_soundness() -> Outcome {
    let families: Vec<Family> = [
        ("Z9", &[][..]),
        ("Z27", &[]),
        ("Z125", &[]),
        ("Z49", &[]),
        ("Z1331", &[]),
        ("Z3[x]/(x^2)", &[]),
        ("Z9[x]/(x^2)", &[]),
        ("Z5[x]/(x^2)", &[]),
        ("Z25[x]/(x^2)", &[]),
        ("Z3[C2]", &[]),
        ("Z9[C2]", &[]),
        ("Z27[C2]", &[]),
        ("Z25[C2]", &[]),
        ("Z9[C3]", &[]),
        ("Z16", &["2", "4", "8"]),
    ]
    .iter()
    .map(|(spec, links)| family(spec, links))
    .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut eta = 0;
    for k in 0..1000 {
        let f = &families[rng.gen_range(0..families.len())];
        let r = &f.ring;
        let g = &f.units[rng.gen_range(0..f.units.len())];
        let a = r.add(&r.square(g), &f.n1[rng.gen_range(0..f.n1.len())]);
        let w = chain_power_lift(&f.chain, g, &a).map_err(|e| format!("#{k} {r}: {e}"))?;
        let s = w.exponent();
        ensure(r.square(w.root()) == *w.target() && *w.target() == r.pow(&a, s), || {
            format!("#{k} {r}: bad witness for {}", r.render(&a))
        })?;
        if f.finder.is_some() {
            let y = root_in_coset_verified(r, f.chain.first(), g, &a).map_err(|e| format!("#{k} {r}: {e}"))?;
            let scan: Vec<Element> = f
                .chain
                .first()
                .coset(g)
                .unwrap()
                .into_iter()
                .filter(|y| r.square(y) == a)
                .collect();
            ensure(scan == [y.clone()], || {
                format!("#{k} {r}: root {} but coset scan found {}", r.render(&y), scan.len())
            })?;
            eta += 1;
        }
    }
    Ok(format!(
        "1000 chain lifts, {eta} coset roots, {} families",
        families.len()
    ))
}

fn sqrt_zn_end_to_end() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut empty = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..500_000u64) * 2 + 1;
        let primes = distinct_primes(n);
        let unit = |rng: &mut ChaCha8Rng| loop {
            let y = rng.gen_range(1..n);
            if gcd(y, n) == 1 {
                break y;
            }
        };
        let y = unit(&mut rng);
        let a = (y as u128 * y as u128 % n as u128) as u64;
        let roots = sqrt_zn(n, a, None).map_err(|e| format!("n = {n}: {e}"))?.residues();
        ensure(roots.len() == 1 << primes.len(), || {
            format!("n = {n}, a = {a}: {} roots", roots.len())
        })?;
        ensure(roots.contains(&y), || format!("n = {n}: {y} missing"))?;
        for x in &roots {
            ensure((*x as u128 * *x as u128 % n as u128) as u64 == a, || {
                format!("n = {n}: {x}^2 != {a}")
            })?;
        }
        // a unit failing Euler's test modulo some prime factor
        let z = (0..200)
            .map(|_| unit(&mut rng))
            .find(|&z| primes.iter().any(|&p| pow_mod(z % p, (p - 1) / 2, p) != 1));
        if let Some(z) = z {
            let got = sqrt_zn(n, z, None).map_err(|e| format!("n = {n}: {e}"))?;
            ensure(got.is_empty(), || format!("n = {n}: non-residue {z} has roots"))?;
            empty += 1;
        }
    }
    ensure(empty >= 90, || format!("only {empty} non-residues sampled"))?;
    Ok(format!("100 moduli, {empty} non-residues"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: "AC1",
            title: "Z25 power-lift table",
            limit: ms(1),
            run: power_table,
        },
        Criterion {
            id: "AC2",
            title: "squaring bijection on 3 + <5>",
            limit: ms(1),
            run: eta_bijection,
        },
        Criterion {
            id: "AC3",
            title: "prime-power census",
            limit: ms(5_000),
            run: prime_power_census,
        },
        Criterion {
            id: "AC4",
            title: "composite census",
            limit: ms(30_000),
            run: composite_census,
        },
        Criterion {
            id: "AC5",
            title: "dual numbers",
            limit: ms(60_000),
            run: dual_numbers,
        },
        Criterion {
            id: "AC6",
            title: "group rings Z_{3^i}C2",
            limit: ms(60_000),
            run: cyclic_group_rings,
        },
        Criterion {
            id: "AC7",
            title: "chain condition gatekeeping",
            limit: Duration::MAX,
            run: cnc_gatekeeping,
        },
        Criterion {
            id: "AC8",
            title: "chain lift soundness",
            limit: ms(120_000),
            run: chain_lift_soundness,
        },
        Criterion {
            id: "AC9",
            title: "sqrt_zn end to end",
            limit: ms(30_000),
            run: sqrt_zn_end_to_end,
        },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let limit = if c.limit == Duration::MAX {
            "no limit".to_string()
        } else {
            format!("limit {:?}", c.limit)
        };
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; too slow")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("{verdict} {} {}: {detail} ({elapsed:.2?}, {limit})", c.id, c.title);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
