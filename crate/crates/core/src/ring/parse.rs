//! Parsers for the ring-spec mini-language and for element literals.
//!
//! ```text
//! ring    := factor ('*' factor)*
//! factor  := atom suffix*
//! atom    := 'Z' INT | '(' ring ')'
//! suffix  := '[x]/(' poly ')' | '[' 'C' INT ('*' 'C' INT)* ']'
//! poly    := ['+'|'-'] term (('+'|'-') term)*
//! term    := INT | [INT ['*']] 'x' ['^' INT]
//! ```
//!
//! Whitespace is ignored everywhere.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::RingSpec;

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(src: &str) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.found();
            Err(Error::syntax(self.pos, format!("'{c}'"), found))
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            let found = self.found();
            return Err(Error::syntax(start, "an integer", found));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse()
            .map_err(|_| Error::syntax(start, "an integer below 2^64", digits))
    }

    fn identifier(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            Some(self.chars[start..self.pos].iter().collect())
        } else {
            None
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses a ring spec such as `Z25[x]/(x^2)`, `Z9[C2]` or `Z9 * Z25`.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    let mut cur = Cursor::new(text);
    let spec = ring(&mut cur)?;
    if !cur.at_end() {
        let found = cur.found();
        return Err(Error::syntax(cur.pos, "end of ring spec", found));
    }
    spec.validate()?;
    Ok(spec)
}

fn ring(cur: &mut Cursor) -> Result<RingSpec> {
    let mut factors = vec![factor(cur)?];
    while cur.eat('*') {
        factors.push(factor(cur)?);
    }
    Ok(if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        RingSpec::Product(factors)
    })
}

fn factor(cur: &mut Cursor) -> Result<RingSpec> {
    let mut spec = match cur.peek() {
        Some('Z') => {
            cur.pos += 1;
            RingSpec::ZMod(cur.integer()?)
        }
        Some('(') => {
            cur.pos += 1;
            let inner = ring(cur)?;
            cur.expect(')')?;
            inner
        }
        _ => {
            let found = cur.found();
            return Err(Error::syntax(cur.pos, "'Z<n>' or '('", found));
        }
    };
    while cur.eat('[') {
        match cur.peek() {
            Some('x') => {
                cur.pos += 1;
                cur.expect(']')?;
                cur.expect('/')?;
                cur.expect('(')?;
                let poly = poly_in_x(cur)?;
                cur.expect(')')?;
                spec = RingSpec::quotient_poly(spec, poly);
            }
            Some('C') => {
                let mut orders = Vec::new();
                loop {
                    cur.expect('C')?;
                    orders.push(cur.integer()?);
                    if !cur.eat('*') {
                        break;
                    }
                }
                cur.expect(']')?;
                spec = RingSpec::group_ring(spec, orders);
            }
            _ => {
                let found = cur.found();
                return Err(Error::syntax(cur.pos, "'x]' or 'C<k>'", found));
            }
        }
    }
    Ok(spec)
}

fn poly_in_x(cur: &mut Cursor) -> Result<Vec<i64>> {
    let start = cur.pos;
    let terms = lincomb(cur)?;
    let mut by_degree: BTreeMap<u64, i128> = BTreeMap::new();
    for term in terms {
        let mut deg = 0u64;
        for (var, exp) in term.factors {
            if var != "x" {
                return Err(Error::syntax(start, "a polynomial in x", var));
            }
            deg += exp;
        }
        *by_degree.entry(deg).or_default() += term.coeff;
    }
    let top = by_degree.keys().next_back().copied().unwrap_or(0);
    if top > 64 {
        return Err(Error::InvalidSpec(format!("modulus degree {top} is too large")));
    }
    let mut coeffs = vec![0i64; top as usize + 1];
    for (d, c) in by_degree {
        coeffs[d as usize] =
            i64::try_from(c).map_err(|_| Error::InvalidSpec("modulus coefficient out of range".into()))?;
    }
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// One signed term of a linear combination: `coeff * v1^e1 * v2^e2 ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Term {
    pub coeff: i128,
    pub factors: Vec<(String, u64)>,
}

fn lincomb(cur: &mut Cursor) -> Result<Vec<Term>> {
    let mut terms = Vec::new();
    let mut sign = if cur.eat('-') {
        -1
    } else {
        cur.eat('+');
        1
    };
    loop {
        let mut t = term(cur)?;
        t.coeff *= sign;
        terms.push(t);
        if cur.eat('+') {
            sign = 1;
        } else if cur.eat('-') {
            sign = -1;
        } else {
            break;
        }
    }
    Ok(terms)
}

fn term(cur: &mut Cursor) -> Result<Term> {
    let mut coeff: i128 = 1;
    let mut factors = Vec::new();
    if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
        coeff = cur.integer()? as i128;
        if !cur.eat('*') && !matches!(cur.peek(), Some(c) if c.is_ascii_alphabetic()) {
            return Ok(Term { coeff, factors });
        }
    }
    loop {
        let pos = cur.pos;
        match cur.identifier() {
            Some(name) => {
                let exp = if cur.eat('^') { cur.integer()? } else { 1 };
                factors.push((name, exp));
            }
            None => {
                let found = cur.found();
                return Err(Error::syntax(pos, "a term", found));
            }
        }
        if !cur.eat('*') {
            break;
        }
        if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
            coeff *= cur.integer()? as i128;
            if !cur.eat('*') {
                break;
            }
        }
    }
    Ok(Term { coeff, factors })
}

/// Parses a linear combination like `4 + 3x` or `2 - g1*g2^2`.
pub(crate) fn parse_lincomb(text: &str) -> Result<Vec<Term>> {
    let mut cur = Cursor::new(text);
    let terms = lincomb(&mut cur)?;
    if !cur.at_end() {
        let found = cur.found();
        return Err(Error::syntax(cur.pos, "'+', '-' or end of element", found));
    }
    Ok(terms)
}

/// Splits `(a, (b, c), d)` into its top-level components.
pub(crate) fn split_tuple(text: &str) -> Result<Vec<&str>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::syntax(0, "a tuple '(a, b, ...)'", t.to_string()))?;
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::syntax(i + 1, "balanced parentheses", ")"));
                }
            }
            ',' if depth == 0 => {
                parts.push(&inner[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::syntax(t.len(), "')'", "end of input"));
    }
    parts.push(&inner[start..]);
    Ok(parts)
}

/// Splits on `sep` outside parentheses.
pub(crate) fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(parse_ring_spec("Z25").unwrap(), RingSpec::zmod(25));
        assert_eq!(
            parse_ring_spec("Z25[x]/(x^2)").unwrap(),
            RingSpec::dual(RingSpec::zmod(25))
        );
        assert_eq!(
            parse_ring_spec("Z9[C2]").unwrap(),
            RingSpec::group_ring(RingSpec::zmod(9), vec![2])
        );
        assert_eq!(
            parse_ring_spec(" Z9 *  Z25 ").unwrap(),
            RingSpec::Product(vec![RingSpec::zmod(9), RingSpec::zmod(25)])
        );
        assert_eq!(
            parse_ring_spec("Z3[C2*C4]").unwrap(),
            RingSpec::group_ring(RingSpec::zmod(3), vec![2, 4])
        );
        assert_eq!(
            parse_ring_spec("Z5[x]/(x^3 - 2x + 1)").unwrap(),
            RingSpec::quotient_poly(RingSpec::zmod(5), vec![1, -2, 0, 1])
        );
        assert_eq!(
            parse_ring_spec("(Z3 * Z5)[x]/(x^2)").unwrap(),
            RingSpec::dual(RingSpec::Product(vec![RingSpec::zmod(3), RingSpec::zmod(5)]))
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_ring_spec("Z25[y]") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_ring_spec("Q7"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_ring_spec("Z7 *"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_ring_spec("Z7)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(parse_ring_spec("Z5[x]/(2x^2)"), Err(Error::InvalidSpec(_))));
        assert!(matches!(parse_ring_spec("Z1"), Err(Error::InvalidSpec(_))));
        assert!(matches!(parse_ring_spec("Z5[C1]"), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn lincomb_terms() {
        let t = parse_lincomb("4 + 3x").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(
            t[1],
            Term {
                coeff: 3,
                factors: vec![("x".into(), 1)]
            }
        );
        let t = parse_lincomb("-2*g1^2*g2 - u").unwrap();
        assert_eq!(t[0].coeff, -2);
        assert_eq!(t[0].factors, vec![("g1".into(), 2), ("g2".into(), 1)]);
        assert_eq!(t[1].coeff, -1);
    }

    #[test]
    fn tuples_split_at_top_level() {
        assert_eq!(split_tuple("(1, (2, 3), 4)").unwrap(), vec!["1", " (2, 3)", " 4"]);
        assert!(split_tuple("1, 2").is_err());
    }
}
