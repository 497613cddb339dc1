mod common;

use common::{ideal, ring, root_counts_mod};
use qrlift::{
    audit, audit_passes, brute_squares, canonical_chain, verify_chain, zero_ideal, AuditStatus, Error, Ring, RingSpec,
};

fn assert_clean(r: &Ring, entries: &[qrlift::AuditEntry]) {
    for e in entries {
        assert_eq!(e.status, AuditStatus::Pass, "{r} {}: {}", e.name, e.details);
    }
    assert!(audit_passes(entries));
}

#[test]
fn z25_single_link() {
    let r = ring("Z25");
    let chain = verify_chain(&r, &[ideal(&r, &["5"])]).unwrap();
    let entries = audit(&r, &chain).unwrap();
    let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "square_table_partition",
            "link1_characteristic",
            "link1_nilpotency",
            "census",
            "residue_verdicts",
            "coset_equivalence",
            "solution_counts",
            "unit_partition"
        ]
    );
    assert_clean(&r, &entries);
}

#[test]
fn prime_power_chains() {
    for p in [3u64, 5, 7, 11] {
        for k in 1..=4u32 {
            let r = Ring::new(&RingSpec::ZMod(p.pow(k))).unwrap();
            let chain = canonical_chain(&r).unwrap();
            assert_eq!(chain.ideals().len(), k as usize);
            assert_clean(&r, &audit(&r, &chain).unwrap());
        }
    }
}

#[test]
fn dual_numbers() {
    for (p, i) in [(3u64, 1u32), (3, 2), (5, 1), (5, 2)] {
        let r = Ring::new(&RingSpec::dual(RingSpec::ZMod(p.pow(i)))).unwrap();
        let chain = canonical_chain(&r).unwrap();
        assert_clean(&r, &audit(&r, &chain).unwrap());
    }
}

#[test]
fn cyclic_group_rings() {
    for i in 1..=3u32 {
        let r = Ring::parse(&format!("Z{}[C2]", 3u64.pow(i))).unwrap();
        let chain = canonical_chain(&r).unwrap();
        assert_clean(&r, &audit(&r, &chain).unwrap());
    }
}

#[test]
fn mixed_rings() {
    for (spec, links) in [
        ("Z9 * Z25", vec![vec!["(3, 5)"]]),
        ("Z5[C2]", vec![vec!["0"]]),
        ("Z3[C3]", vec![vec!["2 + u"]]),
        ("Z25[x]/(x^2)", vec![vec!["x"]]),
    ] {
        let r = ring(spec);
        let ideals: Vec<_> = links.iter().map(|g| ideal(&r, g)).collect();
        let chain = verify_chain(&r, &ideals).unwrap();
        let entries = audit(&r, &chain).unwrap();
        assert!(audit_passes(&entries), "{spec}: {entries:?}");
    }
}

#[test]
fn even_characteristic_is_reported() {
    let r = ring("Z16");
    let chain = verify_chain(&r, &[ideal(&r, &["2"]), ideal(&r, &["4"]), ideal(&r, &["8"])]).unwrap();
    let entries = audit(&r, &chain).unwrap();
    assert!(audit_passes(&entries));
    let unmet: Vec<&str> = entries
        .iter()
        .filter(|e| e.status == AuditStatus::HypothesisNotMet)
        .map(|e| e.name.as_str())
        .collect();
    assert_eq!(
        unmet,
        ["census", "coset_equivalence", "solution_counts", "unit_partition"]
    );
    let partition = entries.iter().find(|e| e.name == "square_table_partition").unwrap();
    assert_eq!(partition.status, AuditStatus::Pass);
}

#[test]
fn trivial_chain() {
    for spec in ["Z9", "Z7", "Z11[x]/(x^2 + 1)"] {
        let r = ring(spec);
        let chain = verify_chain(&r, &[zero_ideal(&r)]).unwrap();
        assert_eq!(chain.ideals().len(), 1);
        assert_clean(&r, &audit(&r, &chain).unwrap());
    }
}

#[test]
fn ring_mismatch_is_rejected() {
    let (a, b) = (ring("Z25"), ring("Z27"));
    let chain = canonical_chain(&b).unwrap();
    assert!(matches!(audit(&a, &chain), Err(Error::RingMismatch(_))));
}

#[test]
fn square_tables_against_integers() {
    for n in [2u64, 9, 15, 16, 45, 121] {
        let r = Ring::new(&RingSpec::ZMod(n)).unwrap();
        let table = brute_squares(&r).unwrap();
        let counts = root_counts_mod(n);
        assert_eq!(table.row_sum(), n as u128);
        for a in table.elements() {
            assert_eq!(table.roots(a).len() as u32, counts[a.residue() as usize]);
            assert!(table.roots(a).iter().all(|y| r.square(y) == *a));
        }
    }
}
