//! Canonical text form of field elements, polynomials in `T` and twisted
//! polynomials in `t`.
//!
//! Printing: monomials in strictly descending degree joined by `+`, explicit
//! `*`, coefficient 1 omitted in front of a variable, and coefficients that
//! involve the generator `w` of F_q enclosed in parentheses, e.g.
//! `T^3+(w+1)*T+2`. Parsing accepts any arrangement of `+`, `-`, `*`, `^`,
//! parentheses, integers and the letters `T`, `w`, `t`, with spaces.

use crate::error::{Error, Result};
use crate::gfq::{FieldSpec, FqElem, Poly};
use crate::ring::{Field, Ring};

pub type FqPoly = Poly<FqElem>;

fn monomial(coeff: Option<String>, var: &str, k: usize) -> String {
    let power = match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    };
    match (coeff, k) {
        (Some(c), 0) => c,
        (None, 0) => "1".into(),
        (Some(c), _) => format!("{c}*{power}"),
        (None, _) => power,
    }
}

/// `a` as a polynomial in `w` (or an integer when n = 1), without parentheses.
pub fn format_fq(a: &FqElem) -> String {
    if a.spec().n() == 1 {
        return a.index().to_string();
    }
    let terms: Vec<String> = a
        .w_coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| monomial((c != 1 || k == 0).then(|| c.to_string()), "w", k))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Coefficient as it appears inside a larger expression.
pub fn format_fq_coeff(a: &FqElem) -> String {
    if a.is_prime_field() {
        format_fq(a)
    } else {
        format!("({})", format_fq(a))
    }
}

pub fn format_poly(f: &FqPoly, var: &str) -> String {
    format_terms(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (k, (!c.is_zero()).then(|| c), c.is_one())),
        var,
        |c| format_fq_coeff(c),
    )
}

/// Generic printer used for debugging output over arbitrary fields.
pub fn format_poly_with<F: Field>(f: &Poly<F>, var: &str, show: impl Fn(&F) -> String) -> String {
    format_terms(
        f.coeffs().iter().enumerate().map(|(k, c)| (k, (!c.is_zero()).then(|| c), c.is_one())),
        var,
        |c| {
            let s = show(c);
            if s.chars().all(|ch| ch.is_ascii_digit()) {
                s
            } else {
                format!("({s})")
            }
        },
    )
}

fn format_terms<'a, C: 'a>(
    terms: impl DoubleEndedIterator<Item = (usize, Option<&'a C>, bool)>,
    var: &str,
    show: impl Fn(&C) -> String,
) -> String {
    let parts: Vec<String> = terms
        .rev()
        .filter_map(|(k, c, is_one)| {
            let c = c?;
            let coeff = (!is_one || k == 0).then(|| show(c));
            Some(monomial(coeff, var, k))
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Twisted polynomial `sum c_k t^k` with coefficients in A; multi-term
/// coefficients of positive powers are parenthesized.
pub fn format_tau(coeffs: &[FqPoly]) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let s = format_poly(c, "T");
            let coeff = if k == 0 {
                Some(s)
            } else if c.is_one() {
                None
            } else if c.coeffs().iter().filter(|x| !x.is_zero()).count() > 1 {
                Some(format!("({s})"))
            } else {
                Some(s)
            };
            monomial(coeff, "t", k)
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Commutative bivariate value in `T` and `t` used during parsing; index is
/// the power of `t`.
#[derive(Clone)]
struct Bi(Vec<FqPoly>);

impl Bi {
    fn constant(c: FqPoly) -> Self {
        Bi(vec![c])
    }

    fn trim(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn add(&self, o: &Bi) -> Bi {
        let n = self.0.len().max(o.0.len());
        let fq = *self.0[0].ctx_ref();
        Bi((0..n)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_else(|| Poly::zero(&fq));
                let b = o.0.get(i).cloned().unwrap_or_else(|| Poly::zero(&fq));
                a + b
            })
            .collect())
        .trim()
    }

    fn neg(&self) -> Bi {
        Bi(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Bi) -> Bi {
        let fq = *self.0[0].ctx_ref();
        let mut out = vec![Poly::zero(&fq); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Bi(out).trim()
    }

    fn pow(&self, e: u64) -> Bi {
        let fq = *self.0[0].ctx_ref();
        (0..e).fold(Bi::constant(Poly::one(&fq)), |acc, _| acc.mul(self))
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    fq: &'static FieldSpec,
    allow_t: bool,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Bi> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Bi> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Bi> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
            let e: u64 = match digits.parse() {
                Ok(e) if e <= 4096 => e,
                _ => return self.err("expected a small nonnegative exponent"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Bi> {
        let fq = self.fq;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut v = 0u64;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    v = (v * 10 + (self.s[self.pos] - b'0') as u64) % fq.p();
                    self.pos += 1;
                }
                Ok(Bi::constant(Poly::constant(fq.elem(v))))
            }
            Some(b'T') => {
                self.pos += 1;
                Ok(Bi::constant(Poly::x(&fq)))
            }
            Some(b'w') => {
                if fq.n() == 1 {
                    return self.err("the generator w is only available when q is not prime");
                }
                self.pos += 1;
                Ok(Bi::constant(Poly::constant(fq.w())))
            }
            Some(b't') if self.allow_t => {
                self.pos += 1;
                Ok(Bi(vec![Poly::zero(&fq), Poly::one(&fq)]))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_bi(s: &str, fq: &'static FieldSpec, allow_t: bool) -> Result<Bi> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, fq, allow_t };
    if p.peek().is_none() {
        return p.err("empty input");
    }
    let v = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parses an element of A = F_q[T].
pub fn parse_poly(s: &str, fq: &'static FieldSpec) -> Result<FqPoly> {
    Ok(parse_bi(s, fq, false)?.0.swap_remove(0))
}

/// Parses an element of F_q.
pub fn parse_fq(s: &str, fq: &'static FieldSpec) -> Result<FqElem> {
    let f = parse_poly(s, fq)?;
    if f.degree() > Some(0) {
        return Err(Error::Parse { pos: 0, msg: "expected a constant".into() });
    }
    Ok(f.coeff(0))
}

/// Parses a twisted polynomial `sum c_k t^k` (coefficients written to the
/// left of powers of `t`) into its coefficient list.
pub fn parse_tau(s: &str, fq: &'static FieldSpec) -> Result<Vec<FqPoly>> {
    let mut v = parse_bi(s, fq, true)?.0;
    if v.len() == 1 && v[0].is_zero() {
        v.clear();
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip_over_f9() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let f = parse_poly("T^3 + (w+1)*T + 2", f9).unwrap();
        assert_eq!(format_poly(&f, "T"), "T^3+(w+1)*T+2");
        let g = parse_poly("2*w*T^2 - T", f9).unwrap();
        assert_eq!(format_poly(&g, "T"), "(2*w)*T^2+2*T");
        assert_eq!(parse_poly(&format_poly(&g, "T"), f9).unwrap(), g);
    }

    #[test]
    fn tau_text() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let c = parse_tau("(T+1)*t^2+t+T", f3).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(format_tau(&c), "(T+1)*t^2+t+T");
        assert_eq!(format_tau(&parse_tau("2*T*t", f3).unwrap()), "2*T*t");
        assert_eq!(format_tau(&parse_tau("T*t", f3).unwrap()), "T*t");
    }

    #[test]
    fn parse_errors() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert!(matches!(parse_poly("T+", f3), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("w", f3), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(T", f3), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("", f3), Err(Error::Parse { .. })));
        assert_eq!(parse_poly("  T ^ 2 - 1 ", f3).unwrap().to_string(), "T^2+2");
    }
}
