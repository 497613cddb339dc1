//! Finite commutative rings with identity and their elements.
//!
//! Every ring stores its elements as flat digit vectors. A `ZMod(n)` element
//! is one residue in `[0, n)`; polynomial and group-ring elements concatenate
//! the digits of their coefficients; products concatenate their components;
//! quotient rings reuse the parent's layout and store the least element of
//! each coset. Equality of elements is therefore plain digit equality, and
//! the lexicographic order on digits is the fixed total order used for
//! canonical coset representatives and sorted output.

mod parse;
mod spec;

use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;

pub use parse::parse_ring_spec;
pub(crate) use parse::{parse_lincomb, split_top, split_tuple};
pub use spec::{render_poly, RingSpec};

use crate::error::{Error, Result};
use crate::modular;

/// Default enumeration cap: structured rings may have at most this many elements.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Canonical digit representation of a ring element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(Vec<u64>);

impl Element {
    pub fn digits(&self) -> &[u64] {
        &self.0
    }

    pub(crate) fn from_digits(d: Vec<u64>) -> Self {
        Element(d)
    }

    /// The residue of a `ZMod` element.
    pub fn residue(&self) -> u64 {
        self.0[0]
    }
}

impl Borrow<[u64]> for Element {
    fn borrow(&self) -> &[u64] {
        &self.0
    }
}

/// A realized finite commutative ring. Cheap to clone; immutable.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

struct RingInner {
    kind: Kind,
    spec: Option<RingSpec>,
    label: String,
    width: usize,
    cardinality: u128,
    characteristic: u128,
    zero: Element,
    one: Element,
    cap: u64,
}

enum Kind {
    ZMod {
        n: u64,
    },
    Poly {
        base: Ring,
        degree: usize,
        /// `x^degree = sum reduction[j] x^j`
        reduction: Vec<Element>,
    },
    Group {
        base: Ring,
        orders: Vec<u64>,
        size: usize,
        /// `table[g * size + h]` is the index of `g·h`.
        table: Vec<usize>,
    },
    Product {
        factors: Vec<Ring>,
        offsets: Vec<usize>,
    },
    Quotient {
        parent: Ring,
        reps: HashMap<Element, Element>,
        elements: Vec<Element>,
    },
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.label)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.spec.is_some() && self.0.spec == other.0.spec && self.0.cap == other.0.cap)
    }
}

impl Eq for Ring {}

/// Builds a ring from its spec with the default enumeration cap.
pub fn make_ring(spec: &RingSpec) -> Result<Ring> {
    Ring::new(spec)
}

impl Ring {
    pub fn new(spec: &RingSpec) -> Result<Ring> {
        Ring::with_cap(spec, DEFAULT_CAP)
    }

    /// Builds a ring whose structured (non-`ZMod`) parts may hold at most `cap` elements.
    pub fn with_cap(spec: &RingSpec, cap: u64) -> Result<Ring> {
        spec.validate()?;
        let ring = Ring::build(spec, cap)?;
        if !matches!(spec, RingSpec::ZMod(_)) && ring.cardinality() > cap as u128 {
            return Err(Error::CapExceeded {
                cardinality: ring.cardinality(),
                cap,
            });
        }
        Ok(ring)
    }

    pub fn parse(text: &str) -> Result<Ring> {
        Ring::new(&parse_ring_spec(text)?)
    }

    fn build(spec: &RingSpec, cap: u64) -> Result<Ring> {
        match spec {
            RingSpec::ZMod(n) => Ok(Ring(Arc::new(RingInner {
                kind: Kind::ZMod { n: *n },
                spec: Some(spec.clone()),
                label: spec.to_string(),
                width: 1,
                cardinality: *n as u128,
                characteristic: *n as u128,
                zero: Element(vec![0]),
                one: Element(vec![1]),
                cap,
            }))),
            RingSpec::QuotientPoly { base, modulus } => {
                let base = Ring::build(base, cap)?;
                let degree = modulus.len() - 1;
                let reduction = modulus[..degree].iter().map(|&c| base.from_int(-(c as i128))).collect();
                let cardinality = checked_pow(base.cardinality(), degree as u32)?;
                let width = base.width() * degree;
                let mut one = vec![0; width];
                one[..base.width()].copy_from_slice(base.one().digits());
                Ok(Ring(Arc::new(RingInner {
                    characteristic: base.characteristic(),
                    kind: Kind::Poly {
                        base,
                        degree,
                        reduction,
                    },
                    spec: Some(spec.clone()),
                    label: spec.to_string(),
                    width,
                    cardinality,
                    zero: Element(vec![0; width]),
                    one: Element(one),
                    cap,
                })))
            }
            RingSpec::GroupRing { base, orders } => {
                let base = Ring::build(base, cap)?;
                let size = orders
                    .iter()
                    .try_fold(1u128, |acc, &k| acc.checked_mul(k as u128))
                    .filter(|&s| s <= cap as u128)
                    .ok_or(Error::CapExceeded {
                        cardinality: u128::MAX,
                        cap,
                    })? as usize;
                let cardinality = checked_pow(base.cardinality(), size as u32)?;
                if cardinality > cap as u128 {
                    return Err(Error::CapExceeded { cardinality, cap });
                }
                let table = group_table(orders, size);
                let width = base.width() * size;
                let mut one = vec![0; width];
                one[..base.width()].copy_from_slice(base.one().digits());
                Ok(Ring(Arc::new(RingInner {
                    characteristic: base.characteristic(),
                    kind: Kind::Group {
                        base,
                        orders: orders.clone(),
                        size,
                        table,
                    },
                    spec: Some(spec.clone()),
                    label: spec.to_string(),
                    width,
                    cardinality,
                    zero: Element(vec![0; width]),
                    one: Element(one),
                    cap,
                })))
            }
            RingSpec::Product(specs) => {
                let factors = specs.iter().map(|s| Ring::build(s, cap)).collect::<Result<Vec<_>>>()?;
                let mut offsets = Vec::with_capacity(factors.len() + 1);
                let mut width = 0;
                let mut cardinality = 1u128;
                let mut characteristic = 1u128;
                let mut one = Vec::new();
                for f in &factors {
                    offsets.push(width);
                    width += f.width();
                    cardinality = cardinality
                        .checked_mul(f.cardinality())
                        .ok_or(Error::CardinalityOverflow)?;
                    characteristic =
                        modular::lcm_u128(characteristic, f.characteristic()).ok_or(Error::CardinalityOverflow)?;
                    one.extend_from_slice(f.one().digits());
                }
                offsets.push(width);
                Ok(Ring(Arc::new(RingInner {
                    kind: Kind::Product { factors, offsets },
                    spec: Some(spec.clone()),
                    label: spec.to_string(),
                    width,
                    cardinality,
                    characteristic,
                    zero: Element(vec![0; width]),
                    one: Element(one),
                    cap,
                })))
            }
        }
    }

    /// Builds the quotient of `parent` by the additive subgroup `ideal`
    /// (which the caller guarantees is a proper ideal). Coset
    /// representatives are the least elements of each coset.
    pub(crate) fn quotient_of(parent: &Ring, ideal: &[Element], label: String) -> Result<Ring> {
        let all = parent.elements()?;
        let mut reps: HashMap<Element, Element> = HashMap::with_capacity(all.len());
        let mut elements = Vec::with_capacity(all.len() / ideal.len().max(1));
        for a in &all {
            if reps.contains_key(a) {
                continue;
            }
            for n in ideal {
                reps.insert(parent.add(a, n), a.clone());
            }
            elements.push(a.clone());
        }
        let one = reps[parent.one()].clone();
        if one == *parent.zero() {
            return Err(Error::InvalidArgument(
                "quotient by the whole ring is the zero ring".into(),
            ));
        }
        let zero = parent.zero().clone();
        let cardinality = elements.len() as u128;
        let mut characteristic = 1u128;
        let mut acc = one.clone();
        while acc != zero {
            acc = reps[&parent.add(&acc, &one)].clone();
            characteristic += 1;
        }
        Ok(Ring(Arc::new(RingInner {
            width: parent.width(),
            cap: parent.cap(),
            kind: Kind::Quotient {
                parent: parent.clone(),
                reps,
                elements,
            },
            spec: None,
            label,
            cardinality,
            characteristic,
            zero,
            one,
        })))
    }

    pub fn spec(&self) -> Option<&RingSpec> {
        self.0.spec.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    pub fn cardinality(&self) -> u128 {
        self.0.cardinality
    }

    /// Least `s ≥ 1` with `s·1 = 0`.
    pub fn characteristic(&self) -> u128 {
        self.0.characteristic
    }

    pub fn zero(&self) -> &Element {
        &self.0.zero
    }

    pub fn one(&self) -> &Element {
        &self.0.one
    }

    pub fn cap(&self) -> u64 {
        self.0.cap
    }

    pub fn width(&self) -> usize {
        self.0.width
    }

    /// `Some(n)` when this ring is `ZMod(n)`.
    pub fn zmod_modulus(&self) -> Option<u64> {
        match self.0.kind {
            Kind::ZMod { n } => Some(n),
            _ => None,
        }
    }

    pub fn is_enumerable(&self) -> bool {
        self.cardinality() <= self.cap() as u128
    }

    pub fn same_as(&self, other: &Ring) -> bool {
        self == other
    }

    /// Components of a product ring, or `None` for other kinds.
    pub fn product_factors(&self) -> Option<&[Ring]> {
        match &self.0.kind {
            Kind::Product { factors, .. } => Some(factors),
            _ => None,
        }
    }

    /// Splits a product element into its components.
    pub fn components(&self, a: &Element) -> Option<Vec<Element>> {
        match &self.0.kind {
            Kind::Product { offsets, .. } => {
                Some(offsets.windows(2).map(|w| Element(a.0[w[0]..w[1]].to_vec())).collect())
            }
            _ => None,
        }
    }

    /// Assembles a product element from its components.
    pub fn from_components(&self, parts: &[Element]) -> Option<Element> {
        match &self.0.kind {
            Kind::Product { factors, .. } if factors.len() == parts.len() => {
                Some(Element(parts.iter().flat_map(|p| p.0.iter().copied()).collect()))
            }
            _ => None,
        }
    }

    pub fn contains(&self, a: &Element) -> bool {
        a.0.len() == self.width() && self.digits_valid(&a.0)
    }

    fn digits_valid(&self, d: &[u64]) -> bool {
        match &self.0.kind {
            Kind::ZMod { n } => d[0] < *n,
            Kind::Poly { base, .. } | Kind::Group { base, .. } => d.chunks(base.width()).all(|c| base.digits_valid(c)),
            Kind::Product { factors, offsets } => factors
                .iter()
                .zip(offsets.windows(2))
                .all(|(f, w)| f.digits_valid(&d[w[0]..w[1]])),
            Kind::Quotient { reps, .. } => reps.get(d).is_some_and(|r| r.0 == d),
        }
    }

    /// Rejects elements that do not belong to this ring.
    pub fn check(&self, a: &Element) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{:?} in {}", a.0, self.label())))
        }
    }

    /// The image of the integer `k` under `k ↦ k·1`.
    pub fn from_int(&self, k: i128) -> Element {
        match &self.0.kind {
            Kind::ZMod { n } => Element(vec![modular::reduce_signed(k, *n)]),
            Kind::Poly { base, .. } | Kind::Group { base, .. } => {
                let mut d = vec![0; self.width()];
                d[..base.width()].copy_from_slice(base.from_int(k).digits());
                Element(d)
            }
            Kind::Product { factors, .. } => Element(factors.iter().flat_map(|f| f.from_int(k).0).collect()),
            Kind::Quotient { parent, .. } => self.reduce(parent.from_int(k)),
        }
    }

    /// Canonical representative of a parent element in a quotient ring;
    /// the identity for every other kind of ring.
    pub(crate) fn reduce(&self, mut a: Element) -> Element {
        self.reduce_in_place(&mut a.0);
        a
    }

    fn reduce_in_place(&self, d: &mut [u64]) {
        if let Kind::Quotient { reps, .. } = &self.0.kind {
            let r = &reps[&*d];
            d.copy_from_slice(&r.0);
        }
    }

    // ---- digit-level arithmetic -------------------------------------------------

    fn add_assign(&self, acc: &mut [u64], b: &[u64]) {
        match &self.0.kind {
            Kind::ZMod { n } => acc[0] = modular::add_mod(acc[0], b[0], *n),
            Kind::Poly { base, .. } | Kind::Group { base, .. } => {
                let w = base.width();
                for (x, y) in acc.chunks_mut(w).zip(b.chunks(w)) {
                    base.add_assign(x, y);
                }
            }
            Kind::Product { factors, offsets } => {
                for (f, w) in factors.iter().zip(offsets.windows(2)) {
                    f.add_assign(&mut acc[w[0]..w[1]], &b[w[0]..w[1]]);
                }
            }
            Kind::Quotient { parent, .. } => {
                parent.add_assign(acc, b);
                self.reduce_in_place(acc);
            }
        }
    }

    fn neg_assign(&self, acc: &mut [u64]) {
        match &self.0.kind {
            Kind::ZMod { n } => acc[0] = (n - acc[0]) % n,
            Kind::Poly { base, .. } | Kind::Group { base, .. } => {
                for x in acc.chunks_mut(base.width()) {
                    base.neg_assign(x);
                }
            }
            Kind::Product { factors, offsets } => {
                for (f, w) in factors.iter().zip(offsets.windows(2)) {
                    f.neg_assign(&mut acc[w[0]..w[1]]);
                }
            }
            Kind::Quotient { parent, .. } => {
                parent.neg_assign(acc);
                self.reduce_in_place(acc);
            }
        }
    }

    /// `acc += a * b`
    fn fma_assign(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        if let Kind::ZMod { n } = self.0.kind {
            let prod = modular::mul_mod(a[0], b[0], n);
            acc[0] = modular::add_mod(acc[0], prod, n);
            return;
        }
        let mut tmp = vec![0; self.width()];
        self.mul_into(a, b, &mut tmp);
        self.add_assign(acc, &tmp);
    }

    fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        match &self.0.kind {
            Kind::ZMod { n } => out[0] = modular::mul_mod(a[0], b[0], *n),
            Kind::Poly {
                base,
                degree,
                reduction,
            } => {
                let w = base.width();
                let d = *degree;
                let mut tmp = vec![0u64; (2 * d - 1) * w];
                for i in 0..d {
                    let ai = &a[i * w..(i + 1) * w];
                    if is_zero_digits(ai) {
                        continue;
                    }
                    for j in 0..d {
                        let bj = &b[j * w..(j + 1) * w];
                        if is_zero_digits(bj) {
                            continue;
                        }
                        base.fma_assign(&mut tmp[(i + j) * w..(i + j + 1) * w], ai, bj);
                    }
                }
                for i in (d..2 * d - 1).rev() {
                    let c = tmp[i * w..(i + 1) * w].to_vec();
                    if is_zero_digits(&c) {
                        continue;
                    }
                    for (j, r) in reduction.iter().enumerate() {
                        let k = i - d + j;
                        base.fma_assign(&mut tmp[k * w..(k + 1) * w], &c, &r.0);
                    }
                }
                out.copy_from_slice(&tmp[..d * w]);
            }
            Kind::Group { base, size, table, .. } => {
                let w = base.width();
                out.fill(0);
                for g in 0..*size {
                    let ag = &a[g * w..(g + 1) * w];
                    if is_zero_digits(ag) {
                        continue;
                    }
                    for h in 0..*size {
                        let bh = &b[h * w..(h + 1) * w];
                        if is_zero_digits(bh) {
                            continue;
                        }
                        let k = table[g * size + h];
                        base.fma_assign(&mut out[k * w..(k + 1) * w], ag, bh);
                    }
                }
            }
            Kind::Product { factors, offsets } => {
                for (f, w) in factors.iter().zip(offsets.windows(2)) {
                    f.mul_into(&a[w[0]..w[1]], &b[w[0]..w[1]], &mut out[w[0]..w[1]]);
                }
            }
            Kind::Quotient { parent, .. } => {
                parent.mul_into(a, b, out);
                self.reduce_in_place(out);
            }
        }
    }

    // ---- element-level arithmetic -----------------------------------------------

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        let mut out = a.0.clone();
        self.add_assign(&mut out, &b.0);
        Element(out)
    }

    pub fn neg(&self, a: &Element) -> Element {
        let mut out = a.0.clone();
        self.neg_assign(&mut out);
        Element(out)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = vec![0; self.width()];
        self.mul_into(&a.0, &b.0, &mut out);
        Element(out)
    }

    pub fn square(&self, a: &Element) -> Element {
        self.mul(a, a)
    }

    /// `a^e` by square-and-multiply; `a^0 = 1`.
    pub fn pow(&self, a: &Element, mut e: u128) -> Element {
        let mut acc = self.one().clone();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    /// `k·a` by double-and-add.
    pub fn mul_int(&self, a: &Element, mut k: u128) -> Element {
        let mut acc = self.zero().clone();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        a == self.zero()
    }

    /// Multiplicative order of `a` when `a` is a unit.
    ///
    /// The powers of `a` are followed until they reach one (unit) or revisit
    /// a value without passing through one (non-unit).
    fn unit_order_by_cycle(&self, a: &Element) -> Option<u128> {
        let mut seen = HashSet::new();
        let mut x = a.clone();
        let mut k = 1u128;
        loop {
            if x == *self.one() {
                return Some(k);
            }
            if !seen.insert(x.clone()) {
                return None;
            }
            x = self.mul(&x, a);
            k += 1;
        }
    }

    pub fn is_unit(&self, a: &Element) -> bool {
        match &self.0.kind {
            Kind::ZMod { n } => modular::gcd(a.0[0], *n) == 1,
            Kind::Product { factors, offsets } => factors
                .iter()
                .zip(offsets.windows(2))
                .all(|(f, w)| f.is_unit(&Element(a.0[w[0]..w[1]].to_vec()))),
            _ => self.unit_order_by_cycle(a).is_some(),
        }
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        let not_unit = || Error::NotAUnit(self.render(a));
        match &self.0.kind {
            Kind::ZMod { n } => modular::inv_mod(a.0[0], *n)
                .map(|x| Element(vec![x]))
                .ok_or_else(not_unit),
            Kind::Product { factors, offsets } => {
                let mut out = Vec::with_capacity(self.width());
                for (f, w) in factors.iter().zip(offsets.windows(2)) {
                    let inv = f.inverse(&Element(a.0[w[0]..w[1]].to_vec())).map_err(|_| not_unit())?;
                    out.extend(inv.0);
                }
                Ok(Element(out))
            }
            _ => {
                let ord = self.unit_order_by_cycle(a).ok_or_else(not_unit)?;
                Ok(self.pow(a, ord - 1))
            }
        }
    }

    // ---- enumeration ------------------------------------------------------------

    fn require_enumerable(&self) -> Result<()> {
        if self.is_enumerable() {
            Ok(())
        } else {
            Err(Error::CapExceeded {
                cardinality: self.cardinality(),
                cap: self.cap(),
            })
        }
    }

    /// All elements in ascending canonical order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        self.require_enumerable()?;
        Ok(match &self.0.kind {
            Kind::ZMod { n } => (0..*n).map(|r| Element(vec![r])).collect(),
            Kind::Poly { base, degree, .. } => cartesian(&vec![base.elements()?; *degree]),
            Kind::Group { base, size, .. } => cartesian(&vec![base.elements()?; *size]),
            Kind::Product { factors, .. } => {
                cartesian(&factors.iter().map(Ring::elements).collect::<Result<Vec<_>>>()?)
            }
            Kind::Quotient { elements, .. } => elements.clone(),
        })
    }

    pub fn units(&self) -> Result<Vec<Element>> {
        Ok(self.elements()?.into_iter().filter(|a| self.is_unit(a)).collect())
    }

    /// `|R*|`; uses Euler's totient for `ZMod` and multiplicativity for products.
    pub fn unit_count(&self) -> Result<u128> {
        match &self.0.kind {
            Kind::ZMod { n } => Ok(modular::euler_phi(*n)? as u128),
            Kind::Product { factors, .. } => factors.iter().try_fold(1u128, |acc, f| Ok(acc * f.unit_count()?)),
            _ => Ok(self.units()?.len() as u128),
        }
    }

    pub fn random_element<G: Rng + ?Sized>(&self, rng: &mut G) -> Element {
        match &self.0.kind {
            Kind::ZMod { n } => Element(vec![rng.gen_range(0..*n)]),
            Kind::Poly { base, degree: k, .. } | Kind::Group { base, size: k, .. } => {
                Element((0..*k).flat_map(|_| base.random_element(rng).0).collect())
            }
            Kind::Product { factors, .. } => Element(factors.iter().flat_map(|f| f.random_element(rng).0).collect()),
            Kind::Quotient { parent, .. } => self.reduce(parent.random_element(rng)),
        }
    }

    // ---- literals -----------------------------------------------------------------

    /// Renders an element in the literal syntax accepted by [`Ring::parse_element`].
    pub fn render(&self, a: &Element) -> String {
        match &self.0.kind {
            Kind::ZMod { .. } => a.0[0].to_string(),
            Kind::Poly { base, degree, .. } => {
                let names: Vec<String> = (0..*degree)
                    .map(|i| match i {
                        0 => String::new(),
                        1 => "x".into(),
                        _ => format!("x^{i}"),
                    })
                    .collect();
                render_combination(base, &a.0, &names)
            }
            Kind::Group { base, orders, size, .. } => {
                let names: Vec<String> = (0..*size).map(|idx| group_monomial(orders, idx)).collect();
                render_combination(base, &a.0, &names)
            }
            Kind::Product { factors, offsets } => {
                let parts: Vec<String> = factors
                    .iter()
                    .zip(offsets.windows(2))
                    .map(|(f, w)| f.render(&Element(a.0[w[0]..w[1]].to_vec())))
                    .collect();
                format!("({})", parts.join(", "))
            }
            Kind::Quotient { parent, .. } => parent.render(a),
        }
    }

    /// Parses an element literal: an integer for `ZMod`, a polynomial in `x`
    /// for quotient polynomial rings, a combination of `g1, g2, …` (or `u`
    /// for a cyclic group) for group rings, a tuple `(a, b)` for products.
    /// A bare integer is accepted in every ring and denotes `k·1`.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        match &self.0.kind {
            Kind::Product { factors, .. } => {
                let t = text.trim();
                if !t.starts_with('(') {
                    return self.parse_combination(t, &[]);
                }
                let parts = split_tuple(t)?;
                if parts.len() != factors.len() {
                    return Err(Error::syntax(
                        0,
                        format!("a {}-tuple", factors.len()),
                        format!("{} components", parts.len()),
                    ));
                }
                let mut digits = Vec::with_capacity(self.width());
                for (f, p) in factors.iter().zip(parts) {
                    digits.extend(f.parse_element(p)?.0);
                }
                Ok(Element(digits))
            }
            Kind::Quotient { parent, .. } => Ok(self.reduce(parent.parse_element(text)?)),
            Kind::ZMod { .. } => self.parse_combination(text, &[]),
            Kind::Poly {
                degree,
                reduction,
                base,
            } => {
                let x = if *degree >= 2 {
                    let mut d = vec![0; self.width()];
                    d[base.width()..2 * base.width()].copy_from_slice(base.one().digits());
                    Element(d)
                } else {
                    let mut d = vec![0; self.width()];
                    d.copy_from_slice(reduction[0].digits());
                    Element(d)
                };
                self.parse_over(base, text, &[("x", x)])
            }
            Kind::Group { base, orders, size, .. } => {
                let mut gens = Vec::new();
                let mut stride = *size;
                for (i, &k) in orders.iter().enumerate() {
                    stride /= k as usize;
                    let mut d = vec![0; self.width()];
                    d[stride * base.width()..(stride + 1) * base.width()].copy_from_slice(base.one().digits());
                    gens.push((format!("g{}", i + 1), Element(d)));
                }
                if orders.len() == 1 {
                    let g = gens[0].1.clone();
                    gens.push(("u".into(), g.clone()));
                    gens.push(("g".into(), g));
                }
                let named: Vec<(&str, Element)> = gens.iter().map(|(n, e)| (n.as_str(), e.clone())).collect();
                self.parse_over(base, text, &named)
            }
        }
    }

    /// Parses a sum whose terms may carry a parenthesized coefficient from
    /// `base`, as in `(1, 2) + (0, 1)*x`.
    fn parse_over(&self, base: &Ring, text: &str, vars: &[(&str, Element)]) -> Result<Element> {
        if !text.contains('(') {
            return self.parse_combination(text, vars);
        }
        let mut acc = self.zero().clone();
        let mut depth = 0i32;
        let mut start = 0;
        let mut terms = Vec::new();
        for (i, c) in text.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '+' if depth == 0 => {
                    terms.push((start, &text[start..i]));
                    start = i + 1;
                }
                _ => {}
            }
        }
        terms.push((start, &text[start..]));
        for (offset, term) in terms {
            let t = term.trim();
            let Some(inner) = t.strip_prefix('(') else {
                acc = self.add(&acc, &self.parse_combination(t, vars)?);
                continue;
            };
            let close = matching_paren(inner).ok_or_else(|| Error::syntax(offset + t.len(), "')'", "end of input"))?;
            let coeff = base.parse_element(&inner[..close])?;
            let mut embedded = self.zero().0.clone();
            embedded[..base.width()].copy_from_slice(coeff.digits());
            let rest = inner[close + 1..].trim();
            let monomial = match rest.strip_prefix('*') {
                Some(m) => self.parse_combination(m, vars)?,
                None if rest.is_empty() => self.one().clone(),
                None => return Err(Error::syntax(offset, "'*' after a coefficient", rest.to_string())),
            };
            acc = self.add(&acc, &self.mul(&Element(embedded), &monomial));
        }
        Ok(acc)
    }

    fn parse_combination(&self, text: &str, vars: &[(&str, Element)]) -> Result<Element> {
        let terms = parse_lincomb(text)?;
        let mut acc = self.zero().clone();
        for term in terms {
            let mut value = self.from_int(term.coeff);
            for (name, exp) in &term.factors {
                let var = vars
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, e)| e)
                    .ok_or_else(|| Error::syntax(0, format!("a variable of {}", self.label()), name.clone()))?;
                value = self.mul(&value, &self.pow(var, *exp as u128));
            }
            acc = self.add(&acc, &value);
        }
        Ok(acc)
    }
}

/// Index of the `)` closing an already-opened parenthesis.
fn matching_paren(text: &str) -> Option<usize> {
    let mut depth = 1i32;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn is_zero_digits(d: &[u64]) -> bool {
    d.iter().all(|&x| x == 0)
}

fn checked_pow(base: u128, exp: u32) -> Result<u128> {
    base.checked_pow(exp).ok_or(Error::CardinalityOverflow)
}

/// Mixed-radix index arithmetic for a product of cyclic groups; the first
/// factor is the most significant digit.
fn group_table(orders: &[u64], size: usize) -> Vec<usize> {
    let decode = |mut idx: usize| -> Vec<u64> {
        let mut exps = vec![0; orders.len()];
        for (slot, &k) in exps.iter_mut().zip(orders).rev() {
            *slot = (idx % k as usize) as u64;
            idx /= k as usize;
        }
        exps
    };
    let encode = |exps: &[u64]| -> usize {
        exps.iter()
            .zip(orders)
            .fold(0usize, |acc, (&e, &k)| acc * k as usize + e as usize)
    };
    let decoded: Vec<Vec<u64>> = (0..size).map(decode).collect();
    let mut table = vec![0; size * size];
    for g in 0..size {
        for h in 0..size {
            let sum: Vec<u64> = decoded[g]
                .iter()
                .zip(&decoded[h])
                .zip(orders)
                .map(|((a, b), k)| (a + b) % k)
                .collect();
            table[g * size + h] = encode(&sum);
        }
    }
    table
}

fn group_monomial(orders: &[u64], mut idx: usize) -> String {
    let mut exps = vec![0u64; orders.len()];
    for (slot, &k) in exps.iter_mut().zip(orders).rev() {
        *slot = (idx % k as usize) as u64;
        idx /= k as usize;
    }
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            let name = if orders.len() == 1 {
                "u".to_string()
            } else {
                format!("g{}", i + 1)
            };
            if e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

fn render_combination(base: &Ring, digits: &[u64], names: &[String]) -> String {
    let w = base.width();
    let numeric = base.zmod_modulus().is_some();
    let mut terms = Vec::new();
    for (chunk, name) in digits.chunks(w).zip(names) {
        let c = Element(chunk.to_vec());
        if base.is_zero(&c) {
            continue;
        }
        let coeff = base.render(&c);
        let coeff = if numeric { coeff } else { format!("({coeff})") };
        terms.push(if name.is_empty() {
            coeff
        } else if c == *base.one() {
            name.clone()
        } else if numeric {
            format!("{coeff}{name}")
        } else {
            format!("{coeff}*{name}")
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Lexicographic cartesian product of element lists, concatenating digits.
fn cartesian(lists: &[Vec<Element>]) -> Vec<Element> {
    let total: usize = lists.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; lists.len()];
    for _ in 0..total {
        out.push(Element(
            idx.iter()
                .zip(lists)
                .flat_map(|(&i, l)| l[i].0.iter().copied())
                .collect(),
        ));
        for pos in (0..lists.len()).rev() {
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
    out
}
