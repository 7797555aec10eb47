//! Text syntax for Fock-space polynomials.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! coeff  := integer | integer '/' positive-integer
//! factor := 'x[' i ',' j ',' m ']' ('^' e)? | 'y[' i ',' m ']' ('^' e)?
//! ```
//!
//! Whitespace is ignored everywhere. The literal `1` is the vacuum.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::params::Params;
use crate::algebra::poly::{FockPoly, Monomial, VarId};
use crate::error::{Error, Result};
use crate::rational::Rational;

struct Cursor {
    bytes: Vec<(usize, u8)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        let bytes: Vec<(usize, u8)> = text
            .bytes()
            .enumerate()
            .filter(|(_, b)| !b.is_ascii_whitespace())
            .collect();
        Cursor {
            bytes,
            pos: 0,
            end: text.len(),
        }
    }

    fn offset(&self) -> usize {
        self.bytes.get(self.pos).map(|&(o, _)| o).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).map(|&(_, b)| b)
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected digits");
        }
        let s: String = self.bytes[start..self.pos].iter().map(|&(_, b)| b as char).collect();
        Ok(s.parse().expect("ascii digits"))
    }

    fn signed_small(&mut self) -> Result<i64> {
        let at = self.offset();
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let d = self.digits()?;
        let v: i64 = i64::try_from(&d).map_err(|_| Error::Parse {
            pos: at,
            msg: "integer out of range".into(),
        })?;
        Ok(if neg { -v } else { v })
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.offset();
        let v = self.signed_small()?;
        usize::try_from(v).map_err(|_| Error::Parse {
            pos: at,
            msg: "index must be non-negative".into(),
        })
    }

    fn mode(&mut self) -> Result<i32> {
        let at = self.offset();
        let v = self.signed_small()?;
        i32::try_from(v).map_err(|_| Error::Parse {
            pos: at,
            msg: "mode out of range".into(),
        })
    }
}

fn parse_factor(cur: &mut Cursor, params: &Params) -> Result<(VarId, u32)> {
    let at = cur.offset();
    let var = match cur.bump() {
        Some(b'x') => {
            cur.expect(b'[')?;
            let i = cur.index()?;
            cur.expect(b',')?;
            let j = cur.index()?;
            cur.expect(b',')?;
            let m = cur.mode()?;
            cur.expect(b']')?;
            if i > u16::MAX as usize || j > u16::MAX as usize {
                return Err(Error::IndexOutOfBounds(format!("x[{i},{j},{m}]")));
            }
            VarId::x(i, j, m)
        }
        Some(b'y') => {
            cur.expect(b'[')?;
            let i = cur.index()?;
            cur.expect(b',')?;
            let m = cur.mode()?;
            cur.expect(b']')?;
            if i > u16::MAX as usize {
                return Err(Error::IndexOutOfBounds(format!("y[{i},{m}]")));
            }
            VarId::y(i, m)
        }
        _ => {
            return Err(Error::Parse {
                pos: at,
                msg: "expected a factor 'x[..]' or 'y[..]'".into(),
            })
        }
    };
    var.check(params)?;
    let exp = if cur.peek() == Some(b'^') {
        cur.bump();
        let at = cur.offset();
        let e = cur.digits()?;
        match u32::try_from(&e) {
            Ok(e) if e > 0 => e,
            _ => {
                return Err(Error::Parse {
                    pos: at,
                    msg: "exponent must be a positive integer".into(),
                })
            }
        }
    } else {
        1
    };
    Ok((var, exp))
}

fn parse_term(cur: &mut Cursor, params: &Params) -> Result<(Monomial, Rational)> {
    let mut coeff = Rational::ONE;
    let mut mono = Monomial::one();
    if matches!(cur.peek(), Some(b'0'..=b'9')) {
        let num = cur.digits()?;
        let den = if cur.peek() == Some(b'/') {
            cur.bump();
            let at = cur.offset();
            let d = cur.digits()?;
            if d == BigInt::from(0) {
                return Err(Error::Parse {
                    pos: at,
                    msg: "zero denominator".into(),
                });
            }
            d
        } else {
            BigInt::from(1)
        };
        coeff = Rational::from(BigRational::new(num, den));
    } else {
        let (v, e) = parse_factor(cur, params)?;
        mono.mul_var_assign(v, e);
    }
    while cur.peek() == Some(b'*') {
        cur.bump();
        let (v, e) = parse_factor(cur, params)?;
        mono.mul_var_assign(v, e);
    }
    Ok((mono, coeff))
}

pub fn parse_poly(text: &str, params: &Params) -> Result<FockPoly> {
    let mut cur = Cursor::new(text);
    let mut out = FockPoly::zero();
    let mut sign = Rational::ONE;
    match cur.peek() {
        None => return cur.error("empty polynomial"),
        Some(b'-') => {
            cur.bump();
            sign = -Rational::ONE;
        }
        Some(b'+') => {
            cur.bump();
        }
        _ => {}
    }
    loop {
        let (m, c) = parse_term(&mut cur, params)?;
        out.add_term(m, &c * &sign);
        match cur.bump() {
            None => break,
            Some(b'+') => sign = Rational::ONE,
            Some(b'-') => sign = -Rational::ONE,
            Some(_) => {
                cur.pos -= 1;
                return cur.error("expected '+', '-', '*' or end of input");
            }
        }
    }
    Ok(out)
}

/// Parses a single monomial (a term whose coefficient is 1).
pub fn parse_monomial(text: &str, params: &Params) -> Result<Monomial> {
    let p = parse_poly(text, params)?;
    match p.first_term() {
        Some((m, c)) if p.len() == 1 && c.is_one() => Ok(m.clone()),
        _ => Err(Error::Parse {
            pos: 0,
            msg: "expected a single monomial with coefficient 1".into(),
        }),
    }
}

pub fn format_poly(p: &FockPoly) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> Params {
        Params::with_zero_weight(2, 1, Rational::ONE).unwrap()
    }

    #[test]
    fn vacuum_literal() {
        assert_eq!(parse_poly("1", &params()).unwrap(), FockPoly::one());
    }

    #[test]
    fn single_term() {
        let p = parse_poly("3/2*x[1,2,-4]^2*y[1,1]", &params()).unwrap();
        assert_eq!(p.len(), 1);
        let (m, c) = p.first_term().unwrap();
        assert_eq!(*c, Rational::new(3, 2));
        assert_eq!(m.exponent(VarId::x(1, 2, -4)), 2);
        assert_eq!(format_poly(&p), "3/2*x[1,2,-4]^2*y[1,1]");
    }

    #[test]
    fn cancellation() {
        assert!(parse_poly("x[1,1,0]-x[1,1,0]", &params()).unwrap().is_zero());
    }

    #[test]
    fn whitespace_and_signs() {
        let p = parse_poly(" - x[1,1,0] + 2 * y[2,3] - 1/3 ", &params()).unwrap();
        assert_eq!(format_poly(&p), "-1/3 - x[1,1,0] + 2*y[2,3]");
        assert_eq!(parse_poly(&format_poly(&p), &params()).unwrap(), p);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("x[1,1,0]+*", &params()) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 9),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("x[1,3,0]", &params()), Err(Error::IndexOutOfBounds(_))));
        assert!(matches!(parse_poly("y[1,0]", &params()), Err(Error::IndexOutOfBounds(_))));
        assert!(matches!(parse_poly("1/0", &params()), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("", &params()), Err(Error::Parse { .. })));
    }
}
