//! Ideals, ideal powers, quotient rings and chains of ideals satisfying the
//! chain / nilpotency / characteristic (CNC) conditions.
//!
//! Ideals of `ZMod(n)` are kept in closed form as `⟨d⟩` with `d | n`; ideals
//! of every other ring are enumerated. An enumerated ideal is built as the sum
//! of the principal ideals `R·g`, each of which is already an additive
//! subgroup closed under multiplication by `R`.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::modular;
use crate::ring::{split_top, Element, Ring, RingSpec};

#[derive(Clone)]
pub struct Ideal(Arc<IdealInner>);

struct IdealInner {
    ring: Ring,
    generators: Vec<Element>,
    /// Generators that each enlarged the ideal when added.
    basis: Vec<Element>,
    repr: Repr,
    quotient: OnceLock<Result<QuotientRing>>,
}

enum Repr {
    /// `{0, d, 2d, …}` inside `ZMod(n)`, with `d | n`.
    Multiples { d: u64, n: u64 },
    Enumerated {
        elements: Vec<Element>,
        set: HashSet<Element>,
    },
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal({} in {})", self, self.ring())
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("{0}");
        }
        let gens: Vec<String> = self.0.basis.iter().map(|g| self.ring().render(g)).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.ring() == other.ring() && self.size() == other.size() && self.is_subset_of(other)
    }
}

impl Eq for Ideal {}

impl Ideal {
    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    /// The generators this ideal was constructed from.
    pub fn generators(&self) -> &[Element] {
        &self.0.generators
    }

    /// A generating set with no redundant members.
    pub fn basis(&self) -> &[Element] {
        &self.0.basis
    }

    pub fn size(&self) -> u128 {
        match &self.0.repr {
            Repr::Multiples { d, n } => (n / d) as u128,
            Repr::Enumerated { elements, .. } => elements.len() as u128,
        }
    }

    pub fn contains(&self, a: &Element) -> bool {
        match &self.0.repr {
            Repr::Multiples { d, .. } => a.residue().is_multiple_of(*d),
            Repr::Enumerated { set, .. } => set.contains(a),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.size() == 1
    }

    /// `self ⊆ other`; both ideals must live in the same ring.
    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        match (&self.0.repr, &other.0.repr) {
            (Repr::Multiples { d: d1, .. }, Repr::Multiples { d: d2, .. }) => d1 % d2 == 0,
            _ => self.basis().iter().all(|g| other.contains(g)),
        }
    }

    /// All members in ascending order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        match &self.0.repr {
            Repr::Multiples { d, n } => {
                let size = n / d;
                if size > self.ring().cap() {
                    return Err(Error::CapExceeded {
                        cardinality: size as u128,
                        cap: self.ring().cap(),
                    });
                }
                Ok((0..size).map(|k| Element::from_digits(vec![k * d])).collect())
            }
            Repr::Enumerated { elements, .. } => Ok(elements.clone()),
        }
    }

    /// The coset `a + I`, ascending.
    pub fn coset(&self, a: &Element) -> Result<Vec<Element>> {
        let r = self.ring();
        let mut out: Vec<Element> = self.elements()?.iter().map(|n| r.add(a, n)).collect();
        out.sort();
        Ok(out)
    }

    /// `R/I`, computed once and cached.
    pub fn quotient(&self) -> Result<QuotientRing> {
        self.0.quotient.get_or_init(|| QuotientRing::build(self)).clone()
    }

    /// The closed-form generator `d` of a `ZMod` ideal.
    pub fn zmod_generator(&self) -> Option<u64> {
        match self.0.repr {
            Repr::Multiples { d, .. } => Some(d),
            Repr::Enumerated { .. } => None,
        }
    }

    pub fn rendered_generators(&self) -> Vec<String> {
        if self.is_zero() {
            return vec!["0".into()];
        }
        self.basis().iter().map(|g| self.ring().render(g)).collect()
    }
}

/// The ideal `{0}`.
pub fn zero_ideal(r: &Ring) -> Ideal {
    ideal_from_generators(r, &[r.zero().clone()]).expect("the zero ideal always exists")
}

/// Parses `g1, g2, …` into the ideal they generate; an empty string or
/// `{0}` is the zero ideal.
pub fn parse_ideal(r: &Ring, text: &str) -> Result<Ideal> {
    let t = text.trim();
    if t.is_empty() || t == "{0}" {
        return Ok(zero_ideal(r));
    }
    let gens = split_top(t, ',')
        .into_iter()
        .map(|g| r.parse_element(g))
        .collect::<Result<Vec<Element>>>()?;
    ideal_from_generators(r, &gens)
}

/// Parses `;`-separated ideals such as `5, x; 5x`.
pub fn parse_chain(r: &Ring, text: &str) -> Result<Vec<Ideal>> {
    split_top(text, ';')
        .into_iter()
        .map(|part| parse_ideal(r, part))
        .collect()
}

/// Smallest ideal containing `gens`.
pub fn ideal_from_generators(r: &Ring, gens: &[Element]) -> Result<Ideal> {
    for g in gens {
        r.check(g)?;
    }
    if let Some(n) = r.zmod_modulus() {
        let d = gens.iter().fold(n, |acc, g| modular::gcd(acc, g.residue()));
        let basis = if d == n {
            Vec::new()
        } else {
            vec![Element::from_digits(vec![d])]
        };
        return Ok(Ideal(Arc::new(IdealInner {
            ring: r.clone(),
            generators: gens.to_vec(),
            basis,
            repr: Repr::Multiples { d, n },
            quotient: OnceLock::new(),
        })));
    }

    let all = r.elements()?;
    let mut elements = vec![r.zero().clone()];
    let mut set: HashSet<Element> = elements.iter().cloned().collect();
    let mut basis = Vec::new();
    for g in gens {
        if set.contains(g) {
            continue;
        }
        basis.push(g.clone());
        for x in &all {
            extend_span(r, &mut elements, &mut set, &r.mul(x, g));
        }
    }
    elements.sort();
    Ok(Ideal(Arc::new(IdealInner {
        ring: r.clone(),
        generators: gens.to_vec(),
        basis,
        repr: Repr::Enumerated { elements, set },
        quotient: OnceLock::new(),
    })))
}

/// Enlarges the additive subgroup `elements` to contain `h`.
fn extend_span(r: &Ring, elements: &mut Vec<Element>, set: &mut HashSet<Element>, h: &Element) {
    if set.contains(h) {
        return;
    }
    let base = elements.clone();
    let mut multiple = h.clone();
    // the cosets S + j·h for 1 ≤ j < (order of h mod S) are pairwise disjoint
    while !set.contains(&multiple) {
        for x in &base {
            let y = r.add(x, &multiple);
            set.insert(y.clone());
            elements.push(y);
        }
        multiple = r.add(&multiple, h);
    }
}

/// The ideal generated by all products `ab` with `a ∈ I`, `b ∈ J`.
pub fn ideal_product(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    let r = i.ring();
    if r != j.ring() {
        return Err(Error::RingMismatch(format!("{j} is not an ideal of {r}")));
    }
    if let (Repr::Multiples { d: d1, n }, Repr::Multiples { d: d2, .. }) = (&i.0.repr, &j.0.repr) {
        let d = modular::gcd_u128(*n as u128, *d1 as u128 * *d2 as u128) as u64;
        return ideal_from_generators(r, &[Element::from_digits(vec![d % n])]);
    }
    let mut gens = Vec::new();
    let mut seen = HashSet::new();
    for a in i.basis() {
        for b in j.basis() {
            let p = r.mul(a, b);
            if !r.is_zero(&p) && seen.insert(p.clone()) {
                gens.push(p);
            }
        }
    }
    if gens.is_empty() {
        return Ok(zero_ideal(r));
    }
    ideal_from_generators(r, &gens)
}

/// `I^t` for `t ≥ 1`.
pub fn ideal_power(i: &Ideal, t: u32) -> Result<Ideal> {
    if t == 0 {
        return Err(Error::InvalidArgument("ideal powers start at 1".into()));
    }
    let mut acc = i.clone();
    for _ in 1..t {
        if acc.is_zero() {
            break;
        }
        acc = ideal_product(&acc, i)?;
    }
    Ok(acc)
}

/// Minimal `t ≥ 2` with `I^t ⊆ J` and minimal `s ≥ 1` with `s·I ⊆ J`.
///
/// Fails with [`Error::NotNil`] when the powers of `I` stabilize outside `J`.
pub fn nilpotency_data(i: &Ideal, j: &Ideal) -> Result<(u32, u128)> {
    if !j.is_subset_of(i) {
        return Err(Error::Precondition(format!("{j} is not contained in {i}")));
    }
    let mut t = 2u32;
    let mut power = ideal_product(i, i)?;
    while !power.is_subset_of(j) {
        let next = ideal_product(&power, i)?;
        if next == power {
            return Err(Error::NotNil);
        }
        power = next;
        t += 1;
    }
    let s = match (&i.0.repr, &j.0.repr) {
        (Repr::Multiples { d: d1, .. }, Repr::Multiples { d: d2, .. }) => (d2 / d1) as u128,
        _ => {
            let r = i.ring();
            let mut s = 1u128;
            for g in i.basis() {
                let mut k = 1u128;
                let mut x = g.clone();
                while !j.contains(&x) {
                    x = r.add(&x, g);
                    k += 1;
                }
                s = modular::lcm_u128(s, k).ok_or(Error::CardinalityOverflow)?;
            }
            s
        }
    };
    Ok((t, s))
}

/// `[I, I^2, …, I^k = {0}]`, failing when `I` is not nilpotent.
pub fn power_chain(i: &Ideal) -> Result<Vec<Ideal>> {
    let mut chain = vec![i.clone()];
    let mut current = i.clone();
    while !current.is_zero() {
        let next = ideal_product(&current, i)?;
        if next == current {
            return Err(Error::NotNil);
        }
        chain.push(next.clone());
        current = next;
    }
    Ok(chain)
}

/// The ideal of all nilpotent elements.
pub fn nilradical(r: &Ring) -> Result<Ideal> {
    if let Some(n) = r.zmod_modulus() {
        let rad: u64 = modular::factorize(n)?.iter().map(|&(p, _)| p).product();
        return ideal_from_generators(r, &[Element::from_digits(vec![rad % n])]);
    }
    let mut current = zero_ideal(r);
    for a in r.elements()? {
        if current.contains(&a) || !is_nilpotent(r, &a) {
            continue;
        }
        let mut gens = current.basis().to_vec();
        gens.push(a);
        current = ideal_from_generators(r, &gens)?;
    }
    Ok(current)
}

fn is_nilpotent(r: &Ring, a: &Element) -> bool {
    let mut x = a.clone();
    // x^(2^j) reaches 0 once 2^j is at least the nilpotency index, which is at most |R|
    for _ in 0..=128 {
        if r.is_zero(&x) {
            return true;
        }
        let next = r.square(&x);
        if next == x {
            return false;
        }
        x = next;
    }
    false
}

/// The chain of powers of the nilradical, `[J, J^2, …, {0}]`.
pub fn canonical_chain(r: &Ring) -> Result<IdealChain> {
    verify_chain(r, &power_chain(&nilradical(r)?)?)
}

/// The first condition a candidate chain violates, with 1-based link index
/// (link `i` joins `N_i` to `N_{i+1}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CncViolation {
    Empty,
    Chain { link: usize },
    Nilpotency { link: usize },
    Characteristic { link: usize, s: u128, t: u32, prime: u64 },
}

impl fmt::Display for CncViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CncViolation::Empty => f.write_str("an ideal chain needs at least one ideal"),
            CncViolation::Chain { link } => write!(
                f,
                "chain condition violated at link {link}: N{} is not contained in N{link}",
                link + 1
            ),
            CncViolation::Nilpotency { link } => write!(
                f,
                "nilpotency condition violated at link {link}: no power of N{link} lies in N{}",
                link + 1
            ),
            CncViolation::Characteristic { link, s, t, prime } => write!(
                f,
                "characteristic condition violated at link {link}: s={s} has prime factor {prime} below t={t}"
            ),
        }
    }
}

/// A chain `N_1 ⊇ … ⊇ N_k = {0}` meeting the chain and nilpotency conditions,
/// with the minimal nilpotency index `t_i` and characteristic `s_i` of each link.
#[derive(Debug, Clone)]
pub struct IdealChain {
    ring: Ring,
    ideals: Vec<Ideal>,
    nilpotency_indices: Vec<u32>,
    characteristics: Vec<u128>,
}

impl IdealChain {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// `[N_1, …, N_k]`, ending with `{0}`.
    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn first(&self) -> &Ideal {
        &self.ideals[0]
    }

    pub fn nilpotency_indices(&self) -> &[u32] {
        &self.nilpotency_indices
    }

    pub fn characteristics(&self) -> &[u128] {
        &self.characteristics
    }

    pub fn links(&self) -> usize {
        self.ideals.len() - 1
    }

    pub fn generator_lists(&self) -> Vec<Vec<String>> {
        self.ideals.iter().map(Ideal::rendered_generators).collect()
    }
}

/// An [`IdealChain`] that also meets the characteristic condition.
#[derive(Debug, Clone)]
pub struct CncChain(IdealChain);

impl CncChain {
    pub fn as_chain(&self) -> &IdealChain {
        &self.0
    }
}

impl std::ops::Deref for CncChain {
    type Target = IdealChain;
    fn deref(&self) -> &IdealChain {
        &self.0
    }
}

/// Checks the chain and nilpotency conditions, appending `{0}` when the list
/// does not already end with it.
pub fn verify_chain(r: &Ring, ideals: &[Ideal]) -> Result<IdealChain> {
    if ideals.is_empty() {
        return Err(CncViolation::Empty.into());
    }
    if let Some(bad) = ideals.iter().find(|i| i.ring() != r) {
        return Err(Error::RingMismatch(format!("{bad} is not an ideal of {r}")));
    }
    let mut list = ideals.to_vec();
    if !list.last().unwrap().is_zero() {
        list.push(zero_ideal(r));
    }
    for link in 1..list.len() {
        if !list[link].is_subset_of(&list[link - 1]) {
            return Err(CncViolation::Chain { link }.into());
        }
    }
    let mut nilpotency_indices = Vec::new();
    let mut characteristics = Vec::new();
    for link in 1..list.len() {
        match nilpotency_data(&list[link - 1], &list[link]) {
            Ok((t, s)) => {
                nilpotency_indices.push(t);
                characteristics.push(s);
            }
            Err(Error::NotNil) => return Err(CncViolation::Nilpotency { link }.into()),
            Err(e) => return Err(e),
        }
    }
    Ok(IdealChain {
        ring: r.clone(),
        ideals: list,
        nilpotency_indices,
        characteristics,
    })
}

/// Prime factors of `s` that fall below `t`, smallest first.
pub(crate) fn small_prime_factor(s: u128, t: u32) -> Result<Option<u64>> {
    if s <= 1 {
        return Ok(None);
    }
    let s = u64::try_from(s).map_err(|_| Error::InvalidArgument(format!("characteristic {s} exceeds 64 bits")))?;
    Ok(modular::factorize(s)?
        .into_iter()
        .map(|(p, _)| p)
        .find(|&p| p < t as u64))
}

/// Full CNC verification: chain, nilpotency and characteristic conditions.
pub fn verify_cnc(r: &Ring, ideals: &[Ideal]) -> Result<CncChain> {
    let chain = verify_chain(r, ideals)?;
    for (idx, (&t, &s)) in chain.nilpotency_indices.iter().zip(&chain.characteristics).enumerate() {
        if let Some(prime) = small_prime_factor(s, t)? {
            return Err(CncViolation::Characteristic {
                link: idx + 1,
                s,
                t,
                prime,
            }
            .into());
        }
    }
    Ok(CncChain(chain))
}

#[derive(Clone)]
enum Projection {
    Identity,
    Residue(u64),
    Table,
}

/// `R/I` together with the canonical projection `R → R/I`.
#[derive(Clone)]
pub struct QuotientRing {
    parent: Ring,
    ring: Ring,
    projection: Projection,
}

impl fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientRing({})", self.ring)
    }
}

impl QuotientRing {
    fn build(ideal: &Ideal) -> Result<QuotientRing> {
        let parent = ideal.ring().clone();
        if ideal.is_zero() {
            return Ok(QuotientRing {
                ring: parent.clone(),
                parent,
                projection: Projection::Identity,
            });
        }
        if ideal.size() == parent.cardinality() {
            return Err(Error::InvalidArgument(
                "quotient by the whole ring is the zero ring".into(),
            ));
        }
        match ideal.0.repr {
            Repr::Multiples { d, .. } => Ok(QuotientRing {
                ring: Ring::with_cap(&RingSpec::ZMod(d), parent.cap())?,
                parent,
                projection: Projection::Residue(d),
            }),
            Repr::Enumerated { ref elements, .. } => {
                let label = format!("{parent} / {ideal}");
                Ok(QuotientRing {
                    ring: Ring::quotient_of(&parent, elements, label)?,
                    parent,
                    projection: Projection::Table,
                })
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn parent(&self) -> &Ring {
        &self.parent
    }

    /// `a ↦ a + I`.
    pub fn project(&self, a: &Element) -> Element {
        match self.projection {
            Projection::Identity => a.clone(),
            Projection::Residue(d) => Element::from_digits(vec![a.residue() % d]),
            Projection::Table => self.ring.reduce(a.clone()),
        }
    }

    /// The canonical (least) representative of a coset, as a parent element.
    pub fn lift(&self, x: &Element) -> Element {
        x.clone()
    }
}

/// `R/I`.
pub fn quotient(r: &Ring, i: &Ideal) -> Result<QuotientRing> {
    if i.ring() != r {
        return Err(Error::RingMismatch(format!("{i} is not an ideal of {r}")));
    }
    i.quotient()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_text() {
        let r = Ring::parse("Z25[x]/(x^2)").unwrap();
        let chain = parse_chain(&r, "5, x; 5x;{0}").unwrap();
        assert_eq!(chain.iter().map(Ideal::size).collect::<Vec<_>>(), vec![125, 5, 1]);
        let p = Ring::parse("Z9 * Z25").unwrap();
        assert_eq!(parse_ideal(&p, "(3, 0), (0, 5)").unwrap().size(), 15);
        assert_eq!(split_top("(1, 2), (3, 4)", ','), vec!["(1, 2)", " (3, 4)"]);
    }

    fn ring(s: &str) -> Ring {
        Ring::parse(s).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        let g: Vec<Element> = gens.iter().map(|s| r.parse_element(s).unwrap()).collect();
        ideal_from_generators(r, &g).unwrap()
    }

    fn residues(i: &Ideal) -> Vec<u64> {
        i.elements().unwrap().iter().map(Element::residue).collect()
    }

    #[test]
    fn zmod_ideals() {
        let z25 = ring("Z25");
        assert_eq!(residues(&ideal(&z25, &["5"])), vec![0, 5, 10, 15, 20]);
        assert_eq!(residues(&ideal(&z25, &["0"])), vec![0]);
        assert_eq!(residues(&ideal(&z25, &["10", "15"])), vec![0, 5, 10, 15, 20]);
        let z27 = ring("Z27");
        let sq = ideal_power(&ideal(&z27, &["3"]), 2).unwrap();
        assert_eq!(residues(&sq), vec![0, 9, 18]);
        assert!(ideal_power(&ideal(&z25, &["5"]), 2).unwrap().is_zero());
    }

    #[test]
    fn power_one_is_identity() {
        let d = ring("Z25[x]/(x^2)");
        let n = ideal(&d, &["5", "x"]);
        assert_eq!(ideal_power(&n, 1).unwrap(), n);
    }

    #[test]
    fn dual_number_maximal_ideal() {
        let d = ring("Z25[x]/(x^2)");
        let n = ideal(&d, &["5", "x"]);
        assert_eq!(n.size(), 125);
        let q = n.quotient().unwrap();
        assert_eq!(q.ring().cardinality(), 5);
        // nilpotency index of <5, x> in Z_{p^2}[x]/(x^2) is 3
        assert!(!ideal_power(&n, 2).unwrap().is_zero());
        assert!(ideal_power(&n, 3).unwrap().is_zero());
        assert_eq!(power_chain(&n).unwrap().len(), 3);
    }

    #[test]
    fn enumerated_closure() {
        let r = ring("Z9[C2]");
        let n = ideal(&r, &["3"]);
        assert_eq!(n.size(), 9);
        let elems = n.elements().unwrap();
        let all = r.elements().unwrap();
        for a in &elems {
            assert!(n.contains(&r.neg(a)));
            for b in &elems {
                assert!(n.contains(&r.add(a, b)));
            }
            for x in &all {
                assert!(n.contains(&r.mul(a, x)));
            }
        }
    }

    #[test]
    fn nilpotency_examples() {
        let z25 = ring("Z25");
        let zero = zero_ideal(&z25);
        assert_eq!(nilpotency_data(&ideal(&z25, &["5"]), &zero).unwrap(), (2, 5));
        let z16 = ring("Z16");
        let two = ideal(&z16, &["2"]);
        assert_eq!(nilpotency_data(&two, &zero_ideal(&z16)).unwrap(), (4, 8));
        assert_eq!(nilpotency_data(&two, &ideal(&z16, &["4"])).unwrap(), (2, 2));
        assert!(matches!(
            nilpotency_data(&ideal(&z16, &["4"]), &two),
            Err(Error::Precondition(_))
        ));
        // a unit ideal is never nilpotent
        assert!(matches!(
            nilpotency_data(&ideal(&z16, &["1"]), &zero_ideal(&z16)),
            Err(Error::NotNil)
        ));
    }

    #[test]
    fn cnc_examples() {
        let z25 = ring("Z25");
        let c = verify_cnc(&z25, &[ideal(&z25, &["5"])]).unwrap();
        assert_eq!(c.nilpotency_indices(), &[2]);
        assert_eq!(c.characteristics(), &[5]);

        let z16 = ring("Z16");
        match verify_cnc(&z16, &[ideal(&z16, &["2"])]) {
            Err(Error::Chain(CncViolation::Characteristic {
                link: 1,
                s: 8,
                t: 4,
                prime: 2,
            })) => {}
            other => panic!("unexpected {other:?}"),
        }
        let c = verify_cnc(&z16, &[ideal(&z16, &["2"]), ideal(&z16, &["4"]), ideal(&z16, &["8"])]).unwrap();
        assert_eq!(c.nilpotency_indices(), &[2, 2, 2]);
        assert_eq!(c.characteristics(), &[2, 2, 2]);
        assert_eq!(c.ideals().len(), 4);

        match verify_cnc(&z16, &[ideal(&z16, &["4"]), ideal(&z16, &["2"])]) {
            Err(Error::Chain(CncViolation::Chain { link: 1 })) => {}
            other => panic!("unexpected {other:?}"),
        }
        match verify_cnc(&z16, &[ideal(&z16, &["1"])]) {
            Err(Error::Chain(CncViolation::Nilpotency { link: 1 })) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nilradicals() {
        let z = ring("Z675");
        assert_eq!(nilradical(&z).unwrap().zmod_generator(), Some(15));
        let d = ring("Z9[x]/(x^2)");
        assert_eq!(nilradical(&d).unwrap(), ideal(&d, &["3", "x"]));
        let g = ring("Z3[C3]");
        // 1 - g is nilpotent since (1 - g)^3 = 1 - g^3 = 0 in characteristic 3
        assert_eq!(nilradical(&g).unwrap(), ideal(&g, &["2 + g"]));
        let c = canonical_chain(&ring("Z125")).unwrap();
        assert_eq!(c.characteristics(), &[5, 5]);
        let c = canonical_chain(&ring("Z7")).unwrap();
        assert_eq!(c.links(), 0);
    }

    #[test]
    fn quotients() {
        let z25 = ring("Z25");
        let q = ideal(&z25, &["5"]).quotient().unwrap();
        assert_eq!(q.ring().spec(), Some(&RingSpec::ZMod(5)));
        assert_eq!(q.project(&z25.parse_element("13").unwrap()).residue(), 3);

        let same = zero_ideal(&z25).quotient().unwrap();
        assert_eq!(same.ring(), &z25);

        assert!(ideal(&z25, &["1"]).quotient().is_err());

        let g = ring("Z9[C2]");
        let q = ideal(&g, &["3"]).quotient().unwrap();
        assert_eq!(q.ring().cardinality(), 9);
        assert_eq!(q.ring().characteristic(), 3);
    }

    #[test]
    fn projection_is_homomorphism() {
        for (spec, gens) in [
            ("Z27", vec!["3"]),
            ("Z9[C2]", vec!["3"]),
            ("Z9[x]/(x^2)", vec!["3", "x"]),
            ("Z3[C2*C2]", vec!["1 + g1"]),
        ] {
            let r = ring(spec);
            let i = ideal(&r, &gens);
            let q = i.quotient().unwrap();
            let qr = q.ring();
            let all = r.elements().unwrap();
            assert_eq!(qr.cardinality() * i.size(), r.cardinality());
            for a in &all {
                // kernel is exactly I
                assert_eq!(qr.is_zero(&q.project(a)), i.contains(a));
                for b in &all {
                    assert_eq!(q.project(&r.add(a, b)), qr.add(&q.project(a), &q.project(b)));
                    assert_eq!(q.project(&r.mul(a, b)), qr.mul(&q.project(a), &q.project(b)));
                }
            }
        }
    }
}
