use std::fmt;

use crate::error::{Error, Result};

/// Algebraic description of a finite commutative ring with identity.
///
/// Modulus polynomials are integer coefficient lists, lowest degree first,
/// and are mapped into the base ring through `n ↦ n·1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// Integers modulo `n`.
    ZMod(u64),
    /// `base[x]/(f)` for a monic `f` of degree at least one.
    QuotientPoly { base: Box<RingSpec>, modulus: Vec<i64> },
    /// Group ring over the direct product of cyclic groups of the given orders.
    GroupRing { base: Box<RingSpec>, orders: Vec<u64> },
    /// Direct product of at least two rings.
    Product(Vec<RingSpec>),
}

impl RingSpec {
    pub fn zmod(n: u64) -> Self {
        RingSpec::ZMod(n)
    }

    pub fn quotient_poly(base: RingSpec, modulus: Vec<i64>) -> Self {
        RingSpec::QuotientPoly {
            base: Box::new(base),
            modulus,
        }
    }

    pub fn group_ring(base: RingSpec, orders: Vec<u64>) -> Self {
        RingSpec::GroupRing {
            base: Box::new(base),
            orders,
        }
    }

    /// Dual numbers `base[x]/(x^2)`.
    pub fn dual(base: RingSpec) -> Self {
        RingSpec::quotient_poly(base, vec![0, 0, 1])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RingSpec::ZMod(n) => {
                if *n < 2 {
                    return Err(Error::InvalidSpec(format!("Z{n}: modulus must be at least 2")));
                }
            }
            RingSpec::QuotientPoly { base, modulus } => {
                base.validate()?;
                if modulus.len() < 2 {
                    return Err(Error::InvalidSpec(
                        "modulus polynomial must have degree at least 1".into(),
                    ));
                }
                if *modulus.last().unwrap() != 1 {
                    return Err(Error::InvalidSpec(format!(
                        "modulus polynomial {} is not monic",
                        render_poly(modulus)
                    )));
                }
            }
            RingSpec::GroupRing { base, orders } => {
                base.validate()?;
                if orders.is_empty() {
                    return Err(Error::InvalidSpec("group needs at least one cyclic factor".into()));
                }
                if let Some(k) = orders.iter().find(|&&k| k < 2) {
                    return Err(Error::InvalidSpec(format!("cyclic factor C{k} has order below 2")));
                }
            }
            RingSpec::Product(factors) => {
                if factors.len() < 2 {
                    return Err(Error::InvalidSpec("a product needs at least two factors".into()));
                }
                for f in factors {
                    f.validate()?;
                }
            }
        }
        Ok(())
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if matches!(self, RingSpec::Product(_)) {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::ZMod(n) => write!(f, "Z{n}"),
            RingSpec::QuotientPoly { base, modulus } => {
                base.fmt_operand(f)?;
                write!(f, "[x]/({})", render_poly(modulus))
            }
            RingSpec::GroupRing { base, orders } => {
                base.fmt_operand(f)?;
                let group: Vec<String> = orders.iter().map(|k| format!("C{k}")).collect();
                write!(f, "[{}]", group.join("*"))
            }
            RingSpec::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" * ")?;
                    }
                    factor.fmt_operand(f)?;
                }
                Ok(())
            }
        }
    }
}

/// Renders an integer polynomial in `x`, highest degree first.
pub fn render_poly(coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (deg, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        match deg {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if mag != 1 {
                    out.push_str(&mag.to_string());
                }
                out.push('x');
                if deg > 1 {
                    out.push_str(&format!("^{deg}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
