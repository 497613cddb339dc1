//! Lifting units, square roots and residues from a quotient `R/N` back to `R`.

use crate::error::{Error, Result};
use crate::ideal::{
    ideal_from_generators, nilpotency_data, small_prime_factor, zero_ideal, CncChain, CncViolation, Ideal, QuotientRing,
};
use crate::modular;
use crate::ring::{Element, Ring};

/// A certified square root: `root² = target` in `ring`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftWitness {
    ring: Ring,
    target: Element,
    root: Element,
    exponent_trace: Vec<u128>,
}

impl LiftWitness {
    pub fn new(ring: &Ring, target: Element, root: Element, exponent_trace: Vec<u128>) -> Result<Self> {
        if ring.square(&root) != target {
            return Err(Error::Invariant(format!(
                "({})^2 != {} in {ring}",
                ring.render(&root),
                ring.render(&target)
            )));
        }
        Ok(LiftWitness {
            ring: ring.clone(),
            target,
            root,
            exponent_trace,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn target(&self) -> &Element {
        &self.target
    }

    pub fn root(&self) -> &Element {
        &self.root
    }

    /// The exponents `s_i` applied, empty for a coset root.
    pub fn exponent_trace(&self) -> &[u128] {
        &self.exponent_trace
    }

    /// Product of the exponent trace.
    pub fn exponent(&self) -> u128 {
        self.exponent_trace.iter().product()
    }
}

fn ensure_ideal_of(r: &Ring, n: &Ideal) -> Result<()> {
    if n.ring() != r {
        return Err(Error::RingMismatch(format!("{n} is not an ideal of {r}")));
    }
    Ok(())
}

/// Nilpotency index of `N` (its least `t ≥ 2` with `N^t = 0`) and the
/// least `s` with `sN = 0`.
fn nil_data(n: &Ideal) -> Result<(u32, u128)> {
    nilpotency_data(n, &zero_ideal(n.ring()))
}

/// Whether `a + N` is a unit of `R/N`. When it is, every member of the coset
/// is checked to be a unit of `R`; a counterexample is an invariant error.
pub fn assert_unit_coset(r: &Ring, n: &Ideal, a: &Element) -> Result<bool> {
    ensure_ideal_of(r, n)?;
    r.check(a)?;
    nil_data(n)?;
    let q = n.quotient()?;
    if !q.ring().is_unit(&q.project(a)) {
        return Ok(false);
    }
    if n.size() <= r.cap() as u128 {
        for y in n.coset(a)? {
            if !r.is_unit(&y) {
                return Err(Error::Invariant(format!(
                    "{} lies in a unit coset but is not a unit",
                    r.render(&y)
                )));
            }
        }
    }
    Ok(true)
}

/// Square roots inside cosets of a fixed nil ideal, by Hensel iteration.
#[derive(Debug, Clone)]
pub struct CosetRootFinder {
    ring: Ring,
    ideal: Ideal,
    quotient: QuotientRing,
    max_steps: u32,
}

impl CosetRootFinder {
    pub fn new(r: &Ring, n: &Ideal) -> Result<Self> {
        ensure_ideal_of(r, n)?;
        let (t, _) = nil_data(n)?;
        // the defect lies in N^(2^j) after j steps
        let max_steps = 32 - (t - 1).leading_zeros() + 2;
        Ok(CosetRootFinder {
            ring: r.clone(),
            ideal: n.clone(),
            quotient: n.quotient()?,
            max_steps,
        })
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    /// Checks `(g+N)² = b+N` and that `2g+N` is a unit of `R/N`.
    pub fn check_preconditions(&self, g: &Element, b: &Element) -> Result<()> {
        let r = &self.ring;
        r.check(g)?;
        r.check(b)?;
        let q = self.quotient.ring();
        let gq = self.quotient.project(g);
        if q.square(&gq) != self.quotient.project(b) {
            return Err(Error::Precondition(format!(
                "({})^2 is not congruent to {} modulo {}",
                r.render(g),
                r.render(b),
                self.ideal
            )));
        }
        if !q.is_unit(&q.add(&gq, &gq)) {
            return Err(Error::Hypothesis(format!(
                "2*({}) + N is not a unit of R/N, so squaring is not injective on the coset",
                r.render(g)
            )));
        }
        Ok(())
    }

    /// The unique `y ∈ g + N` with `y² = b`.
    pub fn root(&self, g: &Element, b: &Element) -> Result<Element> {
        self.check_preconditions(g, b)?;
        let r = &self.ring;
        let mut y = g.clone();
        for _ in 0..=self.max_steps {
            let defect = r.sub(&r.square(&y), b);
            if r.is_zero(&defect) {
                return Ok(y);
            }
            let inv = r.inverse(&r.add(&y, &y))?;
            y = r.sub(&y, &r.mul(&defect, &inv));
        }
        Err(Error::NonConvergence { steps: self.max_steps })
    }

    /// [`root`](Self::root), then a scan of `g + N` confirming the root is
    /// the only one in the coset.
    pub fn root_verified(&self, g: &Element, b: &Element) -> Result<Element> {
        let y = self.root(g, b)?;
        let r = &self.ring;
        let roots: Vec<Element> = self.ideal.coset(g)?.into_iter().filter(|z| r.square(z) == *b).collect();
        if roots != [y.clone()] {
            return Err(Error::Invariant(format!(
                "coset of {} holds {} square roots of {}",
                r.render(g),
                roots.len(),
                r.render(b)
            )));
        }
        Ok(y)
    }

    /// `y ↦ y²` on `g + N`, as `(y, y²)` pairs in ascending order of `y`.
    pub fn square_map(&self, g: &Element) -> Result<Vec<(Element, Element)>> {
        let r = &self.ring;
        let sq = r.square(g);
        self.check_preconditions(g, &sq)?;
        Ok(self
            .ideal
            .coset(g)?
            .into_iter()
            .map(|y| {
                let s = r.square(&y);
                (y, s)
            })
            .collect())
    }
}

/// The unique `y ∈ g + N` with `y² = b`, given `(g+N)² = b+N` and `2g+N`
/// invertible in `R/N`.
pub fn root_in_coset(r: &Ring, n: &Ideal, g: &Element, b: &Element) -> Result<Element> {
    CosetRootFinder::new(r, n)?.root(g, b)
}

/// [`root_in_coset`] with a uniqueness scan of the coset.
pub fn root_in_coset_verified(r: &Ring, n: &Ideal, g: &Element, b: &Element) -> Result<Element> {
    CosetRootFinder::new(r, n)?.root_verified(g, b)
}

/// The map `x + N ↦ x^s` on `R/N`, where `s` is the least integer with
/// `sN = 0`.
#[derive(Debug, Clone)]
pub struct PowerMap {
    ring: Ring,
    nilpotency_index: u32,
    exponent: u128,
}

impl PowerMap {
    /// Fails unless every prime factor of `s` is at least the nilpotency
    /// index of `N`.
    pub fn new(r: &Ring, n: &Ideal) -> Result<Self> {
        ensure_ideal_of(r, n)?;
        let (t, s) = nil_data(n)?;
        if let Some(prime) = small_prime_factor(s, t)? {
            return Err(CncViolation::Characteristic { link: 1, s, t, prime }.into());
        }
        Ok(PowerMap {
            ring: r.clone(),
            nilpotency_index: t,
            exponent: s,
        })
    }

    pub fn exponent(&self) -> u128 {
        self.exponent
    }

    pub fn nilpotency_index(&self) -> u32 {
        self.nilpotency_index
    }

    pub fn apply(&self, x: &Element) -> Element {
        self.ring.pow(x, self.exponent)
    }
}

/// `H(x + N) = x^s`.
pub fn power_lift(r: &Ring, n: &Ideal, x: &Element) -> Result<Element> {
    r.check(x)?;
    Ok(PowerMap::new(r, n)?.apply(x))
}

/// Lifts a root of `a + N_1` in `R/N_1` to the root `g^S` of `a^S` in `R`,
/// with `S = s_1 ⋯ s_{k-1}` the minimal characteristics of the chain.
pub fn chain_power_lift(chain: &CncChain, g: &Element, a: &Element) -> Result<LiftWitness> {
    chain_power_lift_with(chain, g, a, chain.characteristics())
}

/// [`chain_power_lift`] with caller-chosen exponents `s_i'`, each of which
/// must kill its link (`s_i' N_i ⊆ N_{i+1}`) and have no prime factor below
/// `t_i`.
pub fn chain_power_lift_with(chain: &CncChain, g: &Element, a: &Element, exponents: &[u128]) -> Result<LiftWitness> {
    let r = chain.ring();
    r.check(g)?;
    r.check(a)?;
    if exponents.len() != chain.links() {
        return Err(Error::InvalidArgument(format!(
            "chain has {} links but {} exponents were given",
            chain.links(),
            exponents.len()
        )));
    }
    for (i, (&s, (&min, &t))) in exponents
        .iter()
        .zip(chain.characteristics().iter().zip(chain.nilpotency_indices()))
        .enumerate()
    {
        if s == 0 || s % min != 0 {
            return Err(Error::InvalidArgument(format!(
                "exponent {s} does not annihilate link {} (needs a multiple of {min})",
                i + 1
            )));
        }
        if let Some(prime) = small_prime_factor(s, t)? {
            return Err(CncViolation::Characteristic {
                link: i + 1,
                s,
                t,
                prime,
            }
            .into());
        }
    }
    let q = chain.first().quotient()?;
    let gq = q.project(g);
    if q.ring().square(&gq) != q.project(a) {
        return Err(Error::Precondition(format!(
            "({})^2 is not congruent to {} modulo {}",
            r.render(g),
            r.render(a),
            chain.first()
        )));
    }
    let mut root = g.clone();
    let mut target = a.clone();
    for &s in exponents {
        root = r.pow(&root, s);
        target = r.pow(&target, s);
    }
    LiftWitness::new(r, target, root, exponents.to_vec())
}

/// Whether `(a+n)^p - a^p ∈ p·n·R`, for `n ∈ N` and a prime `p` at least the
/// nilpotency index of `N`.
pub fn freshman_power_check(r: &Ring, n_ideal: &Ideal, a: &Element, n: &Element, p: u64) -> Result<bool> {
    ensure_ideal_of(r, n_ideal)?;
    r.check(a)?;
    if !n_ideal.contains(n) {
        return Err(Error::Precondition(format!("{} is not in {n_ideal}", r.render(n))));
    }
    if !modular::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let (t, _) = nil_data(n_ideal)?;
    if p < t as u64 {
        return Err(Error::Precondition(format!("{p} is below the nilpotency index {t}")));
    }
    let lhs = r.pow(&r.add(a, n), p as u128);
    let diff = r.sub(&lhs, &r.pow(a, p as u128));
    let pn = r.mul_int(n, p as u128);
    Ok(ideal_from_generators(r, &[pn])?.contains(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::verify_cnc;

    fn setup(spec: &str, gens: &[&str]) -> (Ring, Ideal) {
        let r = Ring::parse(spec).unwrap();
        let g: Vec<Element> = gens.iter().map(|s| r.parse_element(s).unwrap()).collect();
        let n = ideal_from_generators(&r, &g).unwrap();
        (r, n)
    }

    fn el(r: &Ring, s: &str) -> Element {
        r.parse_element(s).unwrap()
    }

    #[test]
    fn unit_cosets() {
        let (r, n) = setup("Z25", &["5"]);
        assert!(assert_unit_coset(&r, &n, &el(&r, "3")).unwrap());
        assert!(!assert_unit_coset(&r, &n, &el(&r, "5")).unwrap());
        let (d, m) = setup("Z25[x]/(x^2)", &["5", "x"]);
        assert!(assert_unit_coset(&d, &m, &el(&d, "2")).unwrap());
        assert!(!assert_unit_coset(&d, &m, &el(&d, "x")).unwrap());
        let (z, u) = setup("Z25", &["1"]);
        assert!(matches!(assert_unit_coset(&z, &u, &el(&z, "1")), Err(Error::NotNil)));
    }

    #[test]
    fn coset_roots() {
        let (r, n) = setup("Z25", &["5"]);
        assert_eq!(
            root_in_coset_verified(&r, &n, &el(&r, "3"), &el(&r, "19"))
                .unwrap()
                .residue(),
            13
        );
        assert_eq!(
            root_in_coset_verified(&r, &n, &el(&r, "3"), &el(&r, "4"))
                .unwrap()
                .residue(),
            23
        );
        let z = zero_ideal(&r);
        assert_eq!(root_in_coset(&r, &z, &el(&r, "7"), &el(&r, "24")).unwrap().residue(), 7);
        assert!(matches!(
            root_in_coset(&r, &n, &el(&r, "3"), &el(&r, "6")),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn even_obstruction() {
        let (r, n) = setup("Z16", &["8"]);
        assert!(matches!(
            root_in_coset(&r, &n, &el(&r, "1"), &el(&r, "1")),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn structured_coset_roots() {
        let (r, n) = setup("Z25[x]/(x^2)", &["5", "x"]);
        let b = el(&r, "4 + 3x");
        let y = root_in_coset_verified(&r, &n, &el(&r, "2"), &b).unwrap();
        assert_eq!(r.square(&y), b);
        let (g, m) = setup("Z27[C2]", &["3"]);
        let b = el(&g, "1 + 9u");
        let y = root_in_coset_verified(&g, &m, &el(&g, "u"), &b).unwrap();
        assert_eq!(g.square(&y), b);
    }

    #[test]
    fn power_map_on_z25() {
        let (r, n) = setup("Z25", &["5"]);
        let h: Vec<u64> = (0..5)
            .map(|x| power_lift(&r, &n, &r.from_int(x)).unwrap().residue())
            .collect();
        assert_eq!(h, vec![0, 1, 7, 18, 24]);
        assert_eq!(power_lift(&r, &n, &el(&r, "8")).unwrap().residue(), 18);
        let two = power_lift(&r, &n, &el(&r, "2")).unwrap();
        let one = power_lift(&r, &n, &el(&r, "1")).unwrap();
        assert_ne!(two, r.add(&one, &one));
    }

    #[test]
    fn power_map_rejects_small_primes() {
        let (r, n) = setup("Z16", &["2"]);
        assert!(matches!(
            PowerMap::new(&r, &n),
            Err(Error::Chain(CncViolation::Characteristic { .. }))
        ));
    }

    #[test]
    fn chain_lifts() {
        let r = Ring::parse("Z27").unwrap();
        let ideals: Vec<Ideal> = ["3", "9"]
            .iter()
            .map(|g| ideal_from_generators(&r, &[el(&r, g)]).unwrap())
            .collect();
        let chain = verify_cnc(&r, &ideals).unwrap();
        let w = chain_power_lift(&chain, &el(&r, "1"), &el(&r, "7")).unwrap();
        assert_eq!(w.root().residue(), 1);
        assert_eq!(w.target().residue(), 1);
        assert_eq!(w.exponent_trace(), &[3, 3]);
        let w = chain_power_lift_with(&chain, &el(&r, "1"), &el(&r, "7"), &[9, 3]).unwrap();
        assert_eq!(w.exponent(), 27);
        assert!(chain_power_lift_with(&chain, &el(&r, "1"), &el(&r, "7"), &[2, 3]).is_err());
        assert!(chain_power_lift(&chain, &el(&r, "1"), &el(&r, "2")).is_err());

        let (d, n) = setup("Z5[x]/(x^2)", &["x"]);
        let chain = verify_cnc(&d, &[n]).unwrap();
        let w = chain_power_lift(&chain, &el(&d, "2"), &el(&d, "4 + 3x")).unwrap();
        assert_eq!(w.root(), &el(&d, "2"));
        assert_eq!(w.target(), &el(&d, "4"));
    }

    #[test]
    fn freshman_powers() {
        let (r, n) = setup("Z25", &["5"]);
        assert!(freshman_power_check(&r, &n, &el(&r, "2"), &el(&r, "5"), 5).unwrap());
        assert!(freshman_power_check(&r, &n, &el(&r, "2"), &el(&r, "0"), 5).unwrap());
        let (r, n) = setup("Z27", &["3"]);
        for a in 0..27 {
            for m in [0, 3, 6, 9, 12] {
                assert!(freshman_power_check(&r, &n, &r.from_int(a), &r.from_int(m), 3).unwrap());
            }
        }
        assert!(freshman_power_check(&r, &n, &el(&r, "1"), &el(&r, "3"), 2).is_err());
        assert!(freshman_power_check(&r, &n, &el(&r, "1"), &el(&r, "1"), 3).is_err());
    }
}
