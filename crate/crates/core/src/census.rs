//! Quadratic residuosity, square roots and residue counts.

use std::collections::{HashMap, HashSet};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ideal::{canonical_chain, Ideal, IdealChain, QuotientRing};
use crate::lifting::CosetRootFinder;
use crate::modular;
use crate::ring::{Element, Ring, RingSpec};

/// Square roots of `target`, or of the coset `target + modulo` when a
/// modulus ideal is present. Roots are kept in ascending order.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    ring: Ring,
    target: Element,
    modulo: Option<Ideal>,
    roots: Vec<Element>,
}

impl SolutionSet {
    fn new(ring: &Ring, target: Element, modulo: Option<Ideal>, mut roots: Vec<Element>) -> Self {
        roots.sort();
        roots.dedup();
        SolutionSet {
            ring: ring.clone(),
            target,
            modulo,
            roots,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn target(&self) -> &Element {
        &self.target
    }

    pub fn modulo(&self) -> Option<&Ideal> {
        self.modulo.as_ref()
    }

    pub fn roots(&self) -> &[Element] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, y: &Element) -> bool {
        self.roots.binary_search(y).is_ok()
    }

    /// Roots as integers; meaningful for `ZMod` rings.
    pub fn residues(&self) -> Vec<u64> {
        self.roots.iter().map(Element::residue).collect()
    }

    pub fn rendered(&self) -> Vec<String> {
        self.roots.iter().map(|y| self.ring.render(y)).collect()
    }
}

/// Square-root counts and the unit group of an enumerable ring, built in
/// one pass.
#[derive(Debug, Clone)]
pub struct ResidueIndex {
    ring: Ring,
    root_counts: HashMap<Element, u64>,
    units: HashSet<Element>,
}

impl ResidueIndex {
    pub fn build(r: &Ring) -> Result<Self> {
        let mut root_counts = HashMap::new();
        let mut units = HashSet::new();
        for y in r.elements()? {
            *root_counts.entry(r.square(&y)).or_insert(0) += 1;
            if r.is_unit(&y) {
                units.insert(y);
            }
        }
        Ok(ResidueIndex {
            ring: r.clone(),
            root_counts,
            units,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// `|s(a)|`.
    pub fn root_count(&self, a: &Element) -> u64 {
        self.root_counts.get(a).copied().unwrap_or(0)
    }

    pub fn is_unit(&self, a: &Element) -> bool {
        self.units.contains(a)
    }

    pub fn is_qr_unit(&self, a: &Element) -> bool {
        self.is_unit(a) && self.root_count(a) > 0
    }

    pub fn unit_count(&self) -> u128 {
        self.units.len() as u128
    }

    /// `q(R*)`, ascending.
    pub fn q_units(&self) -> Vec<Element> {
        let mut q: Vec<Element> = self
            .root_counts
            .keys()
            .filter(|a| self.units.contains(*a))
            .cloned()
            .collect();
        q.sort();
        q
    }

    pub fn q_count(&self) -> u128 {
        self.root_counts.keys().filter(|a| self.units.contains(*a)).count() as u128
    }

    /// The common root count over `q(R*)`.
    pub fn alpha(&self) -> Alpha {
        let mut counts = self
            .root_counts
            .iter()
            .filter(|(a, _)| self.units.contains(*a))
            .map(|(_, &c)| c);
        let first = counts.next().unwrap_or(0);
        if counts.all(|c| c == first) {
            Alpha::Uniform(first)
        } else {
            Alpha::NonUniform
        }
    }
}

/// The number of square roots shared by every invertible residue, if it is
/// the same for all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alpha {
    Uniform(u64),
    NonUniform,
}

impl Alpha {
    pub fn value(self) -> Option<u64> {
        match self {
            Alpha::Uniform(a) => Some(a),
            Alpha::NonUniform => None,
        }
    }
}

impl std::fmt::Display for Alpha {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Alpha::Uniform(a) => write!(f, "{a}"),
            Alpha::NonUniform => f.write_str("non-uniform"),
        }
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Alpha::Uniform(a) => s.serialize_u64(*a),
            Alpha::NonUniform => s.serialize_str("non-uniform"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: u128,
    pub rhs: u128,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        IdentityCheck {
            name: name.into(),
            lhs,
            rhs,
            pass: lhs == rhs,
        }
    }
}

/// Prime factorization of an odd modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZnFactorization {
    pub n: u64,
    pub factors: Vec<PrimePower>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimePower {
    pub p: u64,
    pub k: u32,
}

impl ZnFactorization {
    /// Factors `n` by trial division (plus a primality test on the cofactor).
    pub fn of(n: u64) -> Result<Self> {
        require_odd_modulus(n)?;
        Self::from_pairs(n, &modular::factorize(n)?)
    }

    /// Accepts a caller-supplied factorization after checking it.
    pub fn from_pairs(n: u64, pairs: &[(u64, u32)]) -> Result<Self> {
        require_odd_modulus(n)?;
        let mut product: u128 = 1;
        let mut seen = HashSet::new();
        for &(p, k) in pairs {
            if p == 2 || k == 0 || !modular::is_prime(p) || !seen.insert(p) {
                return Err(Error::InvalidArgument(format!(
                    "{p}^{k} is not a valid odd prime power factor"
                )));
            }
            for _ in 0..k {
                product = product.saturating_mul(p as u128);
            }
        }
        if product != n as u128 {
            return Err(Error::InvalidArgument(format!(
                "supplied factors multiply to {product}, not {n}"
            )));
        }
        let mut factors: Vec<PrimePower> = pairs.iter().map(|&(p, k)| PrimePower { p, k }).collect();
        factors.sort_by_key(|f| f.p);
        Ok(ZnFactorization { n, factors })
    }

    /// Number of distinct primes.
    pub fn m(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|f| f.p).product()
    }

    fn pairs(&self) -> Vec<(u64, u32)> {
        self.factors.iter().map(|f| (f.p, f.k)).collect()
    }

    /// `|Z_n*|`.
    pub fn phi(&self) -> u128 {
        modular::euler_phi_from_factors(&self.pairs()) as u128
    }

    /// `|q(Z_n*)| = φ(n) / 2^m`.
    pub fn q_count(&self) -> u128 {
        self.phi() >> self.m()
    }

    /// Whether the unit `a` is a square modulo every prime factor.
    pub fn is_qr_unit(&self, a: u64) -> bool {
        modular::gcd(a, self.n) == 1 && self.factors.iter().all(|f| modular::euler_criterion(a % f.p, f.p))
    }
}

fn require_odd_modulus(n: u64) -> Result<()> {
    if n.is_multiple_of(2) {
        return Err(Error::Hypothesis(format!(
            "modulus {n} is even, so 2 is not a unit modulo its radical"
        )));
    }
    if n < 3 {
        return Err(Error::InvalidArgument(format!("modulus {n} is below 3")));
    }
    Ok(())
}

/// Summary of a residue census.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueReport {
    pub ring_spec: String,
    /// Generators of each ideal of the chain, ending with `{0}`.
    pub chain: Vec<Vec<String>>,
    /// `enumeration` when `q(R*)` was counted element by element, otherwise
    /// `closed-form`.
    pub method: String,
    pub units_count: u128,
    pub n1_size: u128,
    pub q_quotient_count: u128,
    pub q_predicted: u128,
    pub q_actual: u128,
    pub alpha: Alpha,
    pub checks: Vec<IdentityCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<PrimePower>,
    #[serde(skip)]
    pub q_units: Option<Vec<Element>>,
}

impl ResidueReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Every square root of `a`. Units of `ZMod(n)` with `n` odd go through
/// [`sqrt_zn`]; everything else is found by enumeration.
pub fn sqrt_all(r: &Ring, a: &Element) -> Result<SolutionSet> {
    r.check(a)?;
    if let Some(n) = r.zmod_modulus() {
        if n % 2 == 1 && modular::gcd(a.residue(), n) == 1 {
            let roots = sqrt_zn(n, a.residue(), None)?;
            return Ok(SolutionSet::new(r, a.clone(), None, roots.roots));
        }
        if !r.is_enumerable() && n % 2 == 0 {
            return Err(Error::Hypothesis(format!(
                "Z{n} is too large to enumerate and square roots modulo even n have no fast path"
            )));
        }
    }
    let roots = r.elements()?.into_iter().filter(|y| r.square(y) == *a).collect();
    Ok(SolutionSet::new(r, a.clone(), None, roots))
}

/// `T(a + N) = {y : y² ∈ a + N}`.
pub fn sqrt_coset(r: &Ring, n: &Ideal, a: &Element) -> Result<SolutionSet> {
    r.check(a)?;
    let roots = r
        .elements()?
        .into_iter()
        .filter(|y| n.contains(&r.sub(&r.square(y), a)))
        .collect();
    Ok(SolutionSet::new(r, a.clone(), Some(n.clone()), roots))
}

/// Whether `a` is a unit with a square root.
pub fn is_qr_unit(r: &Ring, a: &Element) -> Result<bool> {
    r.check(a)?;
    if !r.is_unit(a) {
        return Ok(false);
    }
    if let Some(n) = r.zmod_modulus() {
        if n % 2 == 1 {
            if modular::is_prime(n) {
                return Ok(modular::euler_criterion(a.residue(), n));
            }
            return Ok(ZnFactorization::of(n)?.is_qr_unit(a.residue()));
        }
    }
    Ok(!sqrt_all(r, a)?.is_empty())
}

/// `|s(a)|`, by enumeration or, for odd `ZMod`, the CRT root count.
fn root_count(r: &Ring, a: &Element) -> Result<u64> {
    if !r.is_enumerable() {
        return Ok(sqrt_all(r, a)?.len() as u64);
    }
    Ok(r.elements()?.iter().filter(|y| r.square(y) == *a).count() as u64)
}

fn require_two_invertible(q: &QuotientRing, chain: &IdealChain) -> Result<()> {
    let two = q.ring().from_int(2);
    if !q.ring().is_unit(&two) {
        return Err(Error::Hypothesis(format!(
            "2 + N1 is not a unit of R/N1 for N1 = {}",
            chain.first()
        )));
    }
    Ok(())
}

/// Census data for one ring and chain, with indexes built on demand.
pub struct ChainCensus<'a> {
    ring: &'a Ring,
    chain: &'a IdealChain,
    quotient: QuotientRing,
    ring_index: Option<ResidueIndex>,
    quotient_index: Option<ResidueIndex>,
    link_indexes: Vec<Option<(QuotientRing, Option<ResidueIndex>)>>,
}

impl<'a> ChainCensus<'a> {
    /// Fails when `2 + N_1` is not a unit of `R/N_1`.
    pub fn new(chain: &'a IdealChain) -> Result<Self> {
        let quotient = chain.first().quotient()?;
        require_two_invertible(&quotient, chain)?;
        Ok(ChainCensus {
            ring: chain.ring(),
            chain,
            quotient,
            ring_index: None,
            quotient_index: None,
            link_indexes: vec![None; chain.ideals().len()],
        })
    }

    fn ring_index(&mut self) -> Result<&ResidueIndex> {
        if self.ring_index.is_none() {
            self.ring_index = Some(ResidueIndex::build(self.ring)?);
        }
        Ok(self.ring_index.as_ref().unwrap())
    }

    fn quotient_index(&mut self) -> Result<&ResidueIndex> {
        if self.quotient_index.is_none() {
            self.quotient_index = Some(ResidueIndex::build(self.quotient.ring())?);
        }
        Ok(self.quotient_index.as_ref().unwrap())
    }

    pub fn quotient(&self) -> &QuotientRing {
        &self.quotient
    }

    /// Whether "`a + N_1` is an invertible residue of `R/N_1`" agrees with
    /// "every element of `a + N_1` is an invertible residue of `R`".
    pub fn coset_equivalence(&mut self, a: &Element) -> Result<bool> {
        self.ring.check(a)?;
        let abar = self.quotient.project(a);
        let in_quotient = self.quotient_index()?.is_qr_unit(&abar);
        let coset = self.chain.first().coset(a)?;
        let index = self.ring_index()?;
        let all_lifted = coset.iter().all(|y| index.is_qr_unit(y));
        Ok(in_quotient == all_lifted)
    }

    /// `[|s(a)|, |s(a + N_{k-1})|, …, |s(a + N_1)|]`.
    pub fn solution_counts(&mut self, a: &Element) -> Result<Vec<u64>> {
        let r = self.ring;
        r.check(a)?;
        let abar = self.quotient.project(a);
        let q = self.quotient.ring();
        let is_residue = if q.is_enumerable() {
            self.quotient_index()?.is_qr_unit(&abar)
        } else {
            is_qr_unit(q, &abar)?
        };
        if !is_residue {
            return Err(Error::Precondition(format!(
                "{} + N1 is not an invertible quadratic residue of R/N1",
                r.render(a)
            )));
        }
        (0..self.chain.ideals().len())
            .rev()
            .map(|i| self.link_root_count(i, a))
            .collect()
    }

    fn link_root_count(&mut self, link: usize, a: &Element) -> Result<u64> {
        if self.link_indexes[link].is_none() {
            let qi = self.chain.ideals()[link].quotient()?;
            let index = if qi.ring().is_enumerable() {
                Some(ResidueIndex::build(qi.ring())?)
            } else {
                None
            };
            self.link_indexes[link] = Some((qi, index));
        }
        let (qi, index) = self.link_indexes[link].as_ref().unwrap();
        let abar = qi.project(a);
        match index {
            Some(index) => Ok(index.root_count(&abar)),
            None => root_count(qi.ring(), &abar),
        }
    }

    /// The full report: counts in `R/N_1`, the lifted prediction, the actual
    /// count in `R`, and the identities relating them.
    pub fn report(&mut self) -> Result<ResidueReport> {
        let r = self.ring;
        let n1 = self.chain.first().size();
        let q = self.quotient.ring().clone();
        let mut checks = Vec::new();
        let mut factors = Vec::new();

        let (q_quotient, quotient_units, alpha, residue_root_sum) = if q.is_enumerable() {
            let idx = self.quotient_index()?;
            let qs = idx.q_units();
            let sum: u128 = qs.iter().map(|a| idx.root_count(a) as u128).sum();
            (idx.q_count(), idx.unit_count(), idx.alpha(), Some(sum))
        } else {
            let d = q.zmod_modulus().ok_or(Error::CapExceeded {
                cardinality: q.cardinality(),
                cap: q.cap(),
            })?;
            let f = ZnFactorization::of(d)?;
            (f.q_count(), f.phi(), Alpha::Uniform(1 << f.m()), None)
        };
        let q_predicted = n1 * q_quotient;

        let (method, q_actual, units, q_units) = if r.is_enumerable() {
            let idx = self.ring_index()?;
            let q_units = idx.q_units();
            let rc: Vec<(Element, u64)> = q_units.iter().map(|a| (a.clone(), idx.root_count(a))).collect();
            let (qa, units) = (idx.q_count(), idx.unit_count());
            let projected: Vec<(Element, u64)> = rc.iter().map(|(a, c)| (self.quotient.project(a), *c)).collect();
            let qi = self.quotient_index()?;
            let matching = projected.iter().filter(|(a, c)| qi.root_count(a) == *c).count() as u128;
            checks.push(IdentityCheck::new("root_count_lift", matching, qa));
            ("enumeration", qa, units, Some(q_units))
        } else {
            let n = r.zmod_modulus().ok_or(Error::CapExceeded {
                cardinality: r.cardinality(),
                cap: r.cap(),
            })?;
            let f = ZnFactorization::of(n)?;
            factors = f.factors.clone();
            ("closed-form", f.q_count(), f.phi(), None)
        };

        checks.push(IdentityCheck::new("q_lift", q_actual, q_predicted));
        checks.push(IdentityCheck::new("unit_lift", units, n1 * quotient_units));
        if let Some(sum) = residue_root_sum {
            checks.push(IdentityCheck::new("unit_partition", units, n1 * sum));
        }
        if let Alpha::Uniform(a) = alpha {
            let a = a as u128;
            checks.push(IdentityCheck::new("alpha_quotient", a * q_quotient, quotient_units));
            checks.push(IdentityCheck::new("alpha_lifted", a * q_actual, n1 * quotient_units));
            checks.push(IdentityCheck::new("alpha_units", a * q_actual, units));
        }
        if r.is_enumerable() {
            self.link_checks(q_quotient, alpha, &mut checks)?;
        }

        Ok(ResidueReport {
            ring_spec: r.label().to_string(),
            chain: self.chain.generator_lists(),
            method: method.into(),
            units_count: units,
            n1_size: n1,
            q_quotient_count: q_quotient,
            q_predicted,
            q_actual,
            alpha,
            checks,
            factors,
            q_units,
        })
    }

    /// For each deeper ideal `N_i` of the chain, `|q((R/N_i)*)|` and the
    /// uniform root count of `R/N_i` against those of `R/N_1`.
    fn link_checks(&self, q1: u128, alpha1: Alpha, checks: &mut Vec<IdentityCheck>) -> Result<()> {
        let n1 = self.chain.first().size();
        let ideals = self.chain.ideals();
        for (i, ideal) in ideals.iter().enumerate().skip(1).take(ideals.len().saturating_sub(2)) {
            let qi = ideal.quotient()?;
            let idx = ResidueIndex::build(qi.ring())?;
            let link = i + 1;
            checks.push(IdentityCheck::new(
                format!("q_lift_n{link}"),
                idx.q_count(),
                (n1 / ideal.size()) * q1,
            ));
            if let (Alpha::Uniform(a1), Alpha::Uniform(ai)) = (alpha1, idx.alpha()) {
                checks.push(IdentityCheck::new(format!("alpha_n{link}"), ai as u128, a1 as u128));
            } else {
                checks.push(IdentityCheck::new(format!("alpha_n{link}"), 0, 1));
            }
        }
        Ok(())
    }
}

/// Whether `a + N_1 ∈ q((R/N_1)*)` exactly when `a + N_1 ⊆ q(R*)`.
pub fn coset_equivalence_check(chain: &IdealChain, a: &Element) -> Result<bool> {
    ChainCensus::new(chain)?.coset_equivalence(a)
}

/// `[|s(a)|, |s(a + N_{k-1})|, …, |s(a + N_1)|]` for `a + N_1` an invertible
/// residue of `R/N_1`.
pub fn solution_count_chain(chain: &IdealChain, a: &Element) -> Result<Vec<u64>> {
    ChainCensus::new(chain)?.solution_counts(a)
}

/// Census of `q(R*)` over a chain whose first ideal has `2 + N_1` invertible.
pub fn chain_census(chain: &IdealChain) -> Result<ResidueReport> {
    ChainCensus::new(chain)?.report()
}

/// Combines per-factor censuses of a direct product.
pub fn product_census(reports: &[ResidueReport]) -> Result<ResidueReport> {
    match reports {
        [] => Err(Error::InvalidArgument(
            "a product census needs at least one factor".into(),
        )),
        [single] => Ok(single.clone()),
        _ => {
            let prod = |f: fn(&ResidueReport) -> u128| reports.iter().map(f).product::<u128>();
            let units = prod(|r| r.units_count);
            let q_predicted = prod(|r| r.q_predicted);
            let q_actual = prod(|r| r.q_actual);
            let alpha = reports.iter().try_fold(1u64, |acc, r| r.alpha.value().map(|a| acc * a));
            let mut checks = vec![IdentityCheck::new("q_product", q_actual, q_predicted)];
            for (i, r) in reports.iter().enumerate() {
                for c in &r.checks {
                    checks.push(IdentityCheck {
                        name: format!("factor{}_{}", i + 1, c.name),
                        ..c.clone()
                    });
                }
            }
            if let Some(a) = alpha {
                checks.push(IdentityCheck::new("alpha_product", a as u128 * q_actual, units));
            }
            Ok(ResidueReport {
                ring_spec: reports
                    .iter()
                    .map(|r| {
                        if r.ring_spec.contains(' ') {
                            format!("({})", r.ring_spec)
                        } else {
                            r.ring_spec.clone()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" * "),
                chain: product_chain(reports),
                method: if reports.iter().all(|r| r.method == "enumeration") {
                    "enumeration".into()
                } else {
                    "closed-form".into()
                },
                units_count: units,
                n1_size: prod(|r| r.n1_size),
                q_quotient_count: prod(|r| r.q_quotient_count),
                q_predicted,
                q_actual,
                alpha: alpha.map_or(Alpha::NonUniform, Alpha::Uniform),
                checks,
                factors: Vec::new(),
                q_units: None,
            })
        }
    }
}

/// `N_1` of a product as generator tuples `(g, 0, …)`, `(0, h, …)`, then `{0}`.
fn product_chain(reports: &[ResidueReport]) -> Vec<Vec<String>> {
    let m = reports.len();
    let mut gens = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        for g in r.chain.first().into_iter().flatten().filter(|g| *g != "0") {
            let parts: Vec<&str> = (0..m).map(|j| if j == i { g.as_str() } else { "0" }).collect();
            gens.push(format!("({})", parts.join(", ")));
        }
    }
    if gens.is_empty() {
        gens.push("0".into());
    }
    vec![gens, vec!["0".into()]]
}

/// [`product_census`] over the factors of `r` with one chain per factor;
/// when `r` is enumerable the combined counts are also checked against `r`
/// itself, including `|s((a_1,…,a_m))| = ∏ |s(a_i + N_i)|`.
pub fn product_ring_census(r: &Ring, chains: &[IdealChain]) -> Result<ResidueReport> {
    let factors = r
        .product_factors()
        .map(<[Ring]>::to_vec)
        .unwrap_or_else(|| vec![r.clone()]);
    if factors.len() != chains.len() {
        return Err(Error::InvalidArgument(format!(
            "{r} has {} factors but {} chains were given",
            factors.len(),
            chains.len()
        )));
    }
    for (f, c) in factors.iter().zip(chains) {
        if f != c.ring() {
            return Err(Error::RingMismatch(format!(
                "chain over {} given for factor {f}",
                c.ring()
            )));
        }
    }
    let reports = chains.iter().map(chain_census).collect::<Result<Vec<_>>>()?;
    let mut report = product_census(&reports)?;
    report.ring_spec = r.label().to_string();
    if factors.len() > 1 && r.is_enumerable() {
        let idx = ResidueIndex::build(r)?;
        let quotients: Vec<(QuotientRing, ResidueIndex)> = chains
            .iter()
            .map(|c| {
                let q = c.first().quotient()?;
                let i = ResidueIndex::build(q.ring())?;
                Ok((q, i))
            })
            .collect::<Result<_>>()?;
        let q_units = idx.q_units();
        let matching = q_units
            .iter()
            .filter(|a| {
                let parts = r.components(a).expect("product element");
                let predicted: u64 = parts
                    .iter()
                    .zip(&quotients)
                    .map(|(x, (q, i))| i.root_count(&q.project(x)))
                    .product();
                predicted == idx.root_count(a)
            })
            .count() as u128;
        report
            .checks
            .push(IdentityCheck::new("ring_q_count", idx.q_count(), report.q_predicted));
        report
            .checks
            .push(IdentityCheck::new("ring_units", idx.unit_count(), report.units_count));
        report.checks.push(IdentityCheck::new(
            "root_count_product",
            matching,
            q_units.len() as u128,
        ));
        report.method = "enumeration".into();
        report.q_actual = idx.q_count();
        report.q_units = Some(q_units);
    }
    Ok(report)
}

/// Census over a default chain: the closed form for `ZMod`, canonical chains
/// per factor for products, and the canonical chain otherwise.
pub fn ring_census(r: &Ring) -> Result<ResidueReport> {
    if let Some(n) = r.zmod_modulus() {
        return zn_census_with(&ZnFactorization::of(n)?, r.cap());
    }
    if let Some(factors) = r.product_factors() {
        let chains = factors.iter().map(canonical_chain).collect::<Result<Vec<_>>>()?;
        return product_ring_census(r, &chains);
    }
    chain_census(&canonical_chain(r)?)
}

/// Closed-form census of `Z_n*` for odd `n`, checked against enumeration
/// when `n` is within the enumeration cap.
pub fn zn_census(n: u64) -> Result<ResidueReport> {
    zn_census_with(&ZnFactorization::of(n)?, crate::ring::DEFAULT_CAP)
}

pub fn zn_census_with(f: &ZnFactorization, cap: u64) -> Result<ResidueReport> {
    let n = f.n;
    let rad = f.radical();
    let rad_f = ZnFactorization::from_pairs(rad, &f.factors.iter().map(|x| (x.p, 1)).collect::<Vec<_>>())?;
    let n1 = (n / rad) as u128;
    let q = f.q_count();
    let alpha = 1u64 << f.m();
    let mut checks = vec![
        IdentityCheck::new("q_lift", q, n1 * rad_f.q_count()),
        IdentityCheck::new("unit_lift", f.phi(), n1 * rad_f.phi()),
        IdentityCheck::new("alpha_units", alpha as u128 * q, f.phi()),
    ];
    let mut method = "closed-form";
    let mut q_units = None;
    if n <= cap {
        let (units, counts) = enumerate_zn(n);
        let residues: Vec<u64> = (0..n)
            .filter(|&a| units[a as usize] && counts[a as usize] > 0)
            .collect();
        let uniform = residues.iter().filter(|&&a| counts[a as usize] as u64 == alpha).count() as u128;
        checks.push(IdentityCheck::new("brute_q_count", residues.len() as u128, q));
        checks.push(IdentityCheck::new("brute_root_counts", uniform, q));
        checks.push(IdentityCheck::new(
            "brute_units",
            units.iter().filter(|&&u| u).count() as u128,
            f.phi(),
        ));
        method = "closed-form+enumeration";
        q_units = Some(residues.into_iter().map(|a| Element::from_digits(vec![a])).collect());
    }
    Ok(ResidueReport {
        ring_spec: RingSpec::ZMod(n).to_string(),
        chain: vec![vec![rad.to_string()], vec!["0".into()]],
        method: method.into(),
        units_count: f.phi(),
        n1_size: n1,
        q_quotient_count: rad_f.q_count(),
        q_predicted: n1 * rad_f.q_count(),
        q_actual: q,
        alpha: Alpha::Uniform(alpha),
        checks,
        factors: f.factors.clone(),
        q_units,
    })
}

/// Unit flags and square-root counts of every residue modulo `n`.
fn enumerate_zn(n: u64) -> (Vec<bool>, Vec<u32>) {
    let units: Vec<bool> = (0..n).map(|a| modular::gcd(a, n) == 1).collect();
    let mut counts = vec![0u32; n as usize];
    for y in 0..n {
        counts[modular::mul_mod(y, y, n) as usize] += 1;
    }
    (units, counts)
}

/// Every square root of the unit `a` modulo odd `n`: a root modulo each
/// prime, lifted to each prime power inside its coset, then combined by CRT
/// over all sign choices.
pub fn sqrt_zn(n: u64, a: u64, factorization: Option<&ZnFactorization>) -> Result<SolutionSet> {
    require_odd_modulus(n)?;
    let owned;
    let f = match factorization {
        Some(f) if f.n == n => f,
        Some(f) => {
            return Err(Error::InvalidArgument(format!(
                "factorization of {} supplied for modulus {n}",
                f.n
            )))
        }
        None => {
            owned = ZnFactorization::of(n)?;
            &owned
        }
    };
    let a = a % n;
    if modular::gcd(a, n) != 1 {
        return Err(Error::NotAUnit(format!("{a} modulo {n}")));
    }
    let ring = Ring::new(&RingSpec::ZMod(n))?;
    let target = Element::from_digits(vec![a]);
    let mut per_prime: Vec<([u64; 2], u64)> = Vec::with_capacity(f.factors.len());
    for &PrimePower { p, k } in &f.factors {
        let pk = p.pow(k);
        let Some(r0) = modular::sqrt_mod_prime(a % p, p) else {
            return Ok(SolutionSet::new(&ring, target, None, Vec::new()));
        };
        let root = if k == 1 {
            r0
        } else {
            let zpk = Ring::new(&RingSpec::ZMod(pk))?;
            let ideal = crate::ideal::ideal_from_generators(&zpk, &[Element::from_digits(vec![p])])?;
            CosetRootFinder::new(&zpk, &ideal)?
                .root(&Element::from_digits(vec![r0]), &Element::from_digits(vec![a % pk]))?
                .residue()
        };
        per_prime.push(([root, pk - root], pk));
    }
    let mut roots = Vec::with_capacity(1 << per_prime.len());
    for mask in 0u64..(1 << per_prime.len()) {
        let residues: Vec<(u64, u64)> = per_prime
            .iter()
            .enumerate()
            .map(|(i, (pair, pk))| (pair[((mask >> i) & 1) as usize], *pk))
            .collect();
        let y = modular::crt(&residues);
        if modular::mul_mod(y, y, n) != a {
            return Err(Error::Invariant(format!("{y}^2 is not {a} modulo {n}")));
        }
        roots.push(Element::from_digits(vec![y]));
    }
    Ok(SolutionSet::new(&ring, target, None, roots))
}
