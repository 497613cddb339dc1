//! Exhaustive ground truth. Everything here is recomputed from squaring
//! tables over enumerated rings; the census is only consulted through its
//! public results, which are then compared against the tables.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::census::{self, Alpha, ChainCensus};
use crate::error::{Error, Result};
use crate::ideal::{IdealChain, QuotientRing};
use crate::ring::{Element, Ring};

/// `a ↦ s(a)` for every element of an enumerable ring.
#[derive(Debug, Clone)]
pub struct SquareTable {
    ring: Ring,
    elements: Vec<Element>,
    table: HashMap<Element, Vec<Element>>,
}

impl SquareTable {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// `s(a)`, ascending.
    pub fn roots(&self, a: &Element) -> &[Element] {
        self.table.get(a).map_or(&[], Vec::as_slice)
    }

    /// `Σ_a |s(a)|`, which equals `|R|`.
    pub fn row_sum(&self) -> u128 {
        self.table.values().map(|v| v.len() as u128).sum()
    }

    pub fn units(&self) -> Vec<Element> {
        self.elements.iter().filter(|a| self.ring.is_unit(a)).cloned().collect()
    }

    /// Units with at least one square root, ascending.
    pub fn q_units(&self) -> Vec<Element> {
        self.elements
            .iter()
            .filter(|a| !self.roots(a).is_empty() && self.ring.is_unit(a))
            .cloned()
            .collect()
    }
}

/// Squares every element once.
pub fn brute_squares(r: &Ring) -> Result<SquareTable> {
    let elements = r.elements()?;
    let mut table: HashMap<Element, Vec<Element>> = HashMap::new();
    for y in &elements {
        table.entry(r.square(y)).or_default().push(y.clone());
    }
    Ok(SquareTable {
        ring: r.clone(),
        elements,
        table,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditStatus {
    Pass,
    Fail,
    HypothesisNotMet,
}

impl fmt::Display for AuditStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditStatus::Pass => "pass",
            AuditStatus::Fail => "FAIL",
            AuditStatus::HypothesisNotMet => "hypothesis-not-met",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub name: String,
    pub status: AuditStatus,
    pub details: String,
}

impl AuditEntry {
    fn new(name: impl Into<String>, ok: bool, details: impl Into<String>) -> Self {
        AuditEntry {
            name: name.into(),
            status: if ok { AuditStatus::Pass } else { AuditStatus::Fail },
            details: details.into(),
        }
    }

    fn unmet(name: impl Into<String>, details: impl Into<String>) -> Self {
        AuditEntry {
            name: name.into(),
            status: AuditStatus::HypothesisNotMet,
            details: details.into(),
        }
    }
}

/// True when no entry failed.
pub fn audit_passes(entries: &[AuditEntry]) -> bool {
    entries.iter().all(|e| e.status != AuditStatus::Fail)
}

struct QuotientTable {
    quotient: QuotientRing,
    table: SquareTable,
    q_units: HashSet<Element>,
}

impl QuotientTable {
    fn build(q: QuotientRing) -> Result<Self> {
        let table = brute_squares(q.ring())?;
        let q_units = table.q_units().into_iter().collect();
        Ok(QuotientTable {
            quotient: q,
            table,
            q_units,
        })
    }

    fn root_count(&self, a: &Element) -> usize {
        self.table.roots(&self.quotient.project(a)).len()
    }
}

/// Compares every census figure, coset verdict, solution count and the unit
/// partition against exhaustive tables. Mismatches are returned as entries
/// with status `Fail`.
pub fn audit(r: &Ring, chain: &IdealChain) -> Result<Vec<AuditEntry>> {
    if chain.ring() != r {
        return Err(Error::RingMismatch(format!(
            "chain over {} audited in {r}",
            chain.ring()
        )));
    }
    let table = brute_squares(r)?;
    let mut out = Vec::new();
    let size = r.cardinality();
    out.push(AuditEntry::new(
        "square_table_partition",
        table.row_sum() == size,
        format!("sum of root counts {} vs |R| = {size}", table.row_sum()),
    ));

    let units = table.units();
    let unit_set: HashSet<&Element> = units.iter().collect();
    let q_units = table.q_units();
    let q_set: HashSet<&Element> = q_units.iter().collect();
    let n1 = chain.first();
    let n1_size = n1.size();
    let first = QuotientTable::build(n1.quotient()?)?;
    let q_quotient = first.q_units.len() as u128;
    let quotient_units = first.table.units().len() as u128;

    let brute_alpha = {
        let counts: HashSet<usize> = first.q_units.iter().map(|a| first.table.roots(a).len()).collect();
        if counts.len() == 1 {
            Alpha::Uniform(*counts.iter().next().unwrap() as u64)
        } else {
            Alpha::NonUniform
        }
    };

    for (i, (&t, &s)) in chain
        .nilpotency_indices()
        .iter()
        .zip(chain.characteristics())
        .enumerate()
    {
        out.push(characteristic_entry(r, chain, i, s));
        out.push(nilpotency_entry(r, chain, i, t)?);
    }

    let two_invertible = first.quotient.ring().is_unit(&first.quotient.ring().from_int(2));
    let brute_summary = format!(
        "|R*| = {}, |q(R*)| = {}, |N1| = {n1_size}, |q((R/N1)*)| = {q_quotient}, alpha = {brute_alpha}",
        units.len(),
        q_units.len()
    );
    if !two_invertible {
        for name in ["census", "coset_equivalence", "solution_counts", "unit_partition"] {
            out.push(AuditEntry::unmet(
                name,
                format!("2 + N1 is not a unit of R/N1; {brute_summary}"),
            ));
        }
        return Ok(out);
    }

    let report = census::chain_census(chain)?;
    let mut mismatches = Vec::new();
    let figures = [
        ("units_count", report.units_count, units.len() as u128),
        ("n1_size", report.n1_size, n1_size),
        ("q_quotient_count", report.q_quotient_count, q_quotient),
        ("q_predicted", report.q_predicted, q_units.len() as u128),
        ("q_actual", report.q_actual, q_units.len() as u128),
    ];
    for (name, reported, brute) in figures {
        if reported != brute {
            mismatches.push(format!("{name}: census {reported}, brute {brute}"));
        }
    }
    if report.alpha != brute_alpha {
        mismatches.push(format!("alpha: census {}, brute {brute_alpha}", report.alpha));
    }
    if let Some(reported) = &report.q_units {
        if *reported != q_units {
            mismatches.push("q(R*) membership differs".into());
        }
    }
    if let Some(bad) = report.checks.iter().find(|c| !c.pass) {
        mismatches.push(format!(
            "census identity {} failed: {} vs {}",
            bad.name, bad.lhs, bad.rhs
        ));
    }
    if n1_size * q_quotient != q_units.len() as u128 {
        mismatches.push("brute |q(R*)| differs from |N1| |q((R/N1)*)|".into());
    }
    if n1_size * quotient_units != units.len() as u128 {
        mismatches.push("brute |R*| differs from |N1| |(R/N1)*|".into());
    }
    if let Alpha::Uniform(a) = brute_alpha {
        if a as u128 * q_units.len() as u128 != units.len() as u128 {
            mismatches.push("brute alpha |q(R*)| differs from |R*|".into());
        }
    }
    out.push(AuditEntry::new(
        "census",
        mismatches.is_empty(),
        summarize(&mismatches, &brute_summary),
    ));

    let mut verdicts = Vec::new();
    for a in table.elements() {
        let census = census::is_qr_unit(r, a)?;
        if census != q_set.contains(a) {
            verdicts.push(format!("{}: census says {census}", r.render(a)));
        }
    }
    out.push(AuditEntry::new(
        "residue_verdicts",
        verdicts.is_empty(),
        summarize(&verdicts, &format!("{} elements", table.elements().len())),
    ));

    // one representative per class of R/N1
    let mut census_ctx = ChainCensus::new(chain)?;
    let mut coset_bad = Vec::new();
    let mut seen = HashSet::new();
    for a in table.elements() {
        let class = first.quotient.project(a);
        if !seen.insert(class.clone()) {
            continue;
        }
        let in_quotient = first.q_units.contains(&class);
        let coset = n1.coset(a)?;
        let lifted = coset.iter().all(|y| q_set.contains(y));
        let none = coset.iter().all(|y| !q_set.contains(y));
        if in_quotient != lifted || (!in_quotient && !none) {
            coset_bad.push(format!("class of {}", r.render(a)));
        }
        if !census_ctx.coset_equivalence(a)? {
            coset_bad.push(format!("census verdict on {}", r.render(a)));
        }
    }
    out.push(AuditEntry::new(
        "coset_equivalence",
        coset_bad.is_empty(),
        summarize(&coset_bad, &format!("{} classes", seen.len())),
    ));

    let deeper: Vec<QuotientTable> = chain.ideals()[1..]
        .iter()
        .map(|i| QuotientTable::build(i.quotient()?))
        .collect::<Result<_>>()?;
    let mut count_bad = Vec::new();
    for a in &q_units {
        // [|s(a)|, |s(a + N_{k-1})|, …, |s(a + N_1)|]
        let mut brute: Vec<u64> = deeper.iter().rev().map(|q| q.root_count(a) as u64).collect();
        brute.push(first.root_count(a) as u64);
        if brute.iter().any(|&c| c != brute[0]) || brute[0] != table.roots(a).len() as u64 {
            count_bad.push(format!("{}: brute counts {brute:?}", r.render(a)));
        }
        let reported = census_ctx.solution_counts(a)?;
        if reported != brute {
            count_bad.push(format!("{}: census {reported:?} vs brute {brute:?}", r.render(a)));
        }
    }
    out.push(AuditEntry::new(
        "solution_counts",
        count_bad.is_empty(),
        summarize(&count_bad, &format!("{} residues", q_units.len())),
    ));

    // R* is the disjoint union of T(a + N1) over a + N1 in q((R/N1)*)
    let mut t_sets: HashMap<Element, u128> = HashMap::new();
    let mut partition_bad = Vec::new();
    for y in table.elements() {
        let class = first.quotient.project(&r.square(y));
        let in_t = first.q_units.contains(&class);
        if in_t != unit_set.contains(y) {
            partition_bad.push(format!("{} lies in T = {in_t} but unit = {}", r.render(y), !in_t));
        }
        if in_t {
            *t_sets.entry(class).or_default() += 1;
        }
    }
    for a in &first.q_units {
        let t = t_sets.get(a).copied().unwrap_or(0);
        let expected = first.table.roots(a).len() as u128 * n1_size;
        if t != expected {
            partition_bad.push(format!(
                "|T({} + N1)| = {t}, expected {expected}",
                first.quotient.ring().render(a)
            ));
        }
    }
    out.push(AuditEntry::new(
        "unit_partition",
        partition_bad.is_empty(),
        summarize(
            &partition_bad,
            &format!("{} units in {} sets", units.len(), t_sets.len()),
        ),
    ));
    Ok(out)
}

fn summarize(problems: &[String], ok: &str) -> String {
    match problems {
        [] => ok.to_string(),
        [one] => one.clone(),
        [first, rest @ ..] => format!("{first} (and {} more)", rest.len()),
    }
}

/// `s_i` is the least positive integer with `s_i N_i ⊆ N_{i+1}`.
fn characteristic_entry(r: &Ring, chain: &IdealChain, i: usize, s: u128) -> AuditEntry {
    let (ni, next) = (&chain.ideals()[i], &chain.ideals()[i + 1]);
    let name = format!("link{}_characteristic", i + 1);
    let Ok(elements) = ni.elements() else {
        return AuditEntry::unmet(name, "ideal too large to enumerate");
    };
    let kills = |k: u128| elements.iter().all(|x| next.contains(&r.mul_int(x, k)));
    let least = (1..=s).find(|&k| kills(k));
    AuditEntry::new(
        name,
        least == Some(s),
        format!("least annihilating multiple {}, chain reports {s}", shown(least)),
    )
}

/// `t_i` is the least exponent `≥ 2` with every `t_i`-fold product of
/// elements of `N_i` landing in `N_{i+1}`.
fn nilpotency_entry(r: &Ring, chain: &IdealChain, i: usize, t: u32) -> Result<AuditEntry> {
    let (ni, next) = (&chain.ideals()[i], &chain.ideals()[i + 1]);
    let name = format!("link{}_nilpotency", i + 1);
    let elements = ni.elements()?;
    // the set of all k-fold products, grown one factor at a time
    let mut products: HashSet<Element> = elements.iter().cloned().collect();
    let mut k = 1u32;
    let mut least = None;
    while k < t + 1 {
        let next_products: HashSet<Element> = products
            .iter()
            .flat_map(|p| elements.iter().map(move |x| r.mul(p, x)))
            .collect();
        products = next_products;
        k += 1;
        if products.iter().all(|p| next.contains(p)) {
            least = Some(k);
            break;
        }
    }
    Ok(AuditEntry::new(
        name,
        least == Some(t),
        format!(
            "least exponent {} with all products inside N{}, chain reports {t}",
            shown(least),
            i + 2
        ),
    ))
}

fn shown<T: fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "none".into(), |v| v.to_string())
}
