//! Command-line value parsers: polynomial expressions over the coordinate
//! basis z1..zd and the rotated basis w1..wd, complex scalar lists, and
//! tolerance override maps.

use num_complex::Complex64 as Cx;
use qmod_core::poly::{multiply, w_basis};
use qmod_core::{HPoly, QmodError};
use std::collections::BTreeMap;

fn input(msg: impl Into<String>) -> QmodError {
    QmodError::SpecParse(msg.into())
}

/// Parse a polynomial expression such as `z1`, `w2^2`, `2*z1*z3 - w2`,
/// `z1 + 0.5*z2^3`. Variables are 1-based; `w` variables are the discrete
/// Fourier rotation of the coordinates. Coefficients are real literals with
/// an optional trailing `i` for purely imaginary values (`2i`, `-0.5i`, `i`).
pub fn parse_poly(text: &str, d: usize) -> Result<HPoly, QmodError> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(input("polynomial: empty expression"));
    }
    let w = w_basis(d)?;
    let mut total: Option<HPoly> = None;
    for (sign, term) in split_terms(&cleaned)? {
        let mut coeff = Cx::new(sign, 0.0);
        let mut factor_poly: Option<HPoly> = None;
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(input(format!("polynomial: empty factor in `{term}`")));
            }
            if let Some(first) = factor.chars().next() {
                if first == 'z' || first == 'w' {
                    let (base, power) = split_power(factor)?;
                    let idx: usize = base[1..].parse().map_err(|_| {
                        input(format!("polynomial: bad variable `{base}`"))
                    })?;
                    if idx < 1 || idx > d {
                        return Err(input(format!(
                            "polynomial: variable `{base}` out of range 1..={d}"
                        )));
                    }
                    let var = if first == 'z' {
                        HPoly::coordinate(d, idx - 1)
                    } else {
                        w[idx - 1].clone()
                    };
                    for _ in 0..power {
                        factor_poly = Some(match factor_poly {
                            Some(p) => multiply(&p, &var)?,
                            None => var.clone(),
                        });
                    }
                    continue;
                }
            }
            coeff *= parse_scalar(factor)?;
        }
        let poly = match factor_poly {
            Some(p) => p.scale(coeff),
            None => {
                return Err(input(format!(
                    "polynomial: term `{term}` has no variable (constants are not degree-graded)"
                )))
            }
        };
        total = Some(match total {
            Some(t) => t.add(&poly)?,
            None => poly,
        });
    }
    let total = total.ok_or_else(|| input("polynomial: empty expression"))?;
    if total.is_zero() {
        return Err(input("polynomial: expression cancels to zero"));
    }
    Ok(total)
}

/// Split an expression into (+1/−1, term) pairs at top-level `+`/`-`.
fn split_terms(s: &str) -> Result<Vec<(f64, String)>, QmodError> {
    let mut out = Vec::new();
    let mut sign = 1.0;
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for c in s.chars() {
        let binds = matches!(prev, Some('e') | Some('E') | Some('^') | Some('*') | None if !cur.is_empty() || prev.is_some());
        if (c == '+' || c == '-') && !binds {
            if cur.is_empty() {
                if c == '-' {
                    sign = -sign;
                }
            } else {
                out.push((sign, std::mem::take(&mut cur)));
                sign = if c == '-' { -1.0 } else { 1.0 };
            }
        } else {
            cur.push(c);
        }
        prev = Some(c);
    }
    if cur.is_empty() {
        return Err(input("polynomial: trailing operator"));
    }
    out.push((sign, cur));
    Ok(out)
}

fn split_power(factor: &str) -> Result<(&str, u32), QmodError> {
    match factor.split_once('^') {
        None => Ok((factor, 1)),
        Some((base, pow)) => {
            let p: u32 = pow
                .parse()
                .map_err(|_| input(format!("polynomial: bad exponent `{pow}`")))?;
            if p == 0 {
                return Err(input("polynomial: exponent 0 is not degree-graded"));
            }
            Ok((base, p))
        }
    }
}

/// Parse a scalar literal: `2`, `-0.5`, `1e-3`, `i`, `2i`, `-1.5i`.
pub fn parse_scalar(s: &str) -> Result<Cx, QmodError> {
    if let Some(body) = s.strip_suffix('i') {
        let v = if body.is_empty() || body == "+" {
            1.0
        } else if body == "-" {
            -1.0
        } else {
            body.parse()
                .map_err(|_| input(format!("bad imaginary literal `{s}`")))?
        };
        Ok(Cx::new(0.0, v))
    } else {
        let v: f64 = s
            .parse()
            .map_err(|_| input(format!("bad numeric literal `{s}`")))?;
        Ok(Cx::new(v, 0.0))
    }
}

/// Parse a comma-separated complex vector such as `1,1,1` or `1,-i,0.5i`.
pub fn parse_complex_list(text: &str, d: usize) -> Result<Vec<Cx>, QmodError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != d {
        return Err(input(format!(
            "complex list: {} entries ≠ d={d}",
            parts.len()
        )));
    }
    parts.iter().map(|p| parse_scalar(p)).collect()
}

/// Parse `--tol` overrides: comma-separated `experiment=value` pairs.
pub fn parse_tol(text: &str) -> Result<BTreeMap<String, f64>, QmodError> {
    let mut out = BTreeMap::new();
    for pair in text.split(',') {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| input(format!("tolerance override `{pair}`: expected name=value")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| input(format!("tolerance override `{pair}`: bad value")))?;
        if !(v > 0.0) {
            return Err(input(format!(
                "tolerance override `{pair}`: value must be positive"
            )));
        }
        out.insert(name.trim().to_string(), v);
    }
    Ok(out)
}
