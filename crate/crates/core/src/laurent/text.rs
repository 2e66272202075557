//! Text form `c0 + c1*t + c2*t^2 + ...` (variables `t1`, `t2`, ... when there
//! is more than one), terms in ascending exponent order.

use std::fmt;

use thiserror::Error;

use super::LaurentPoly;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParsePolyError {
    #[error("empty polynomial text")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
    #[error("unknown variable `{0}`")]
    BadVariable(String),
}

fn var_name(nvars: usize, i: usize) -> String {
    if nvars == 1 {
        "t".to_string()
    } else {
        format!("t{}", i + 1)
    }
}

fn monomial_text(nvars: usize, exps: &[i64]) -> String {
    exps.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| {
            let v = var_name(nvars, i);
            if e == 1 {
                v
            } else {
                format!("{v}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub(super) fn write_poly<C: Scalar>(p: &LaurentPoly<C>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (idx, (exps, c)) in p.terms().enumerate() {
        let negative = !c.is_positive();
        let mag = if negative { -c.clone() } else { c.clone() };
        let mono = monomial_text(p.nvars(), exps);
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            mono
        } else {
            format!("{mag}*{mono}")
        };
        match (idx, negative) {
            (0, false) => write!(f, "{body}")?,
            (0, true) => write!(f, "-{body}")?,
            (_, false) => write!(f, " + {body}")?,
            (_, true) => write!(f, " - {body}")?,
        }
    }
    Ok(())
}

/// Parse the text form. Accepts optional `*` between coefficient and
/// monomial, arbitrary whitespace, and negative exponents (`t^-2`).
pub fn parse_laurent<C: Scalar>(text: &str, nvars: usize) -> Result<LaurentPoly<C>, ParsePolyError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(ParsePolyError::Empty);
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);

    let mut out = LaurentPoly::zero(nvars);
    for term in terms {
        let (neg, body) = match term.as_bytes().first() {
            Some(b'-') => (true, &term[1..]),
            Some(b'+') => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(ParsePolyError::BadTerm(term.to_string()));
        }
        let digits = body.bytes().take_while(|b| b.is_ascii_digit()).count();
        let coeff: i64 = if digits == 0 {
            1
        } else {
            body[..digits]
                .parse()
                .map_err(|_| ParsePolyError::BadTerm(term.to_string()))?
        };
        let mut rest = &body[digits..];
        if digits > 0 {
            rest = rest.strip_prefix('*').unwrap_or(rest);
            if body[digits..].starts_with('*') && rest.is_empty() {
                return Err(ParsePolyError::BadTerm(term.to_string()));
            }
        }
        let mut exps = vec![0i64; nvars];
        if !rest.is_empty() {
            for factor in rest.split('*') {
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<i64>()
                            .map_err(|_| ParsePolyError::BadTerm(term.to_string()))?,
                    ),
                    None => (factor, 1),
                };
                let idx = (0..nvars)
                    .find(|&i| var_name(nvars, i) == name || (nvars == 1 && name == "t1"))
                    .ok_or_else(|| ParsePolyError::BadVariable(name.to_string()))?;
                exps[idx] += e;
            }
        }
        let c = C::from_i64(if neg { -coeff } else { coeff });
        out.add_term(exps, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_bigint::BigInt;

    #[test]
    fn display_integer_poly() {
        let f: LaurentPoly<BigInt> = parse_laurent("1-t+ t^2", 1).unwrap();
        assert_eq!(f.to_string(), "1 - t + t^2");
        let g: LaurentPoly<BigInt> = parse_laurent("2 - 3*t + 2*t^2", 1).unwrap();
        assert_eq!(g.to_string(), "2 - 3*t + 2*t^2");
    }

    #[test]
    fn display_field_poly() {
        let f: LaurentPoly<Fp<13>> = parse_laurent("1 - t + t^2", 1).unwrap();
        assert_eq!(f.to_string(), "1 + 12*t + t^2");
    }

    #[test]
    fn negative_exponents_and_multivariable() {
        assert_eq!(
            parse_laurent::<BigInt>("t^-1 + 3t1*t2^2", 2).unwrap_err(),
            ParsePolyError::BadVariable("t".into())
        );
        let g: LaurentPoly<BigInt> = parse_laurent("t1^-1 - 3*t1*t2^2", 2).unwrap();
        assert_eq!(g.to_string(), "t1^-1 - 3*t1*t2^2");
        let h: LaurentPoly<BigInt> = parse_laurent("t^-2 + 1", 1).unwrap();
        assert_eq!(h.to_string(), "t^-2 + 1");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_laurent::<BigInt>("", 1).is_err());
        assert!(parse_laurent::<BigInt>("1 + x", 1).is_err());
        assert!(parse_laurent::<BigInt>("1 + 2*", 1).is_err());
    }

}
