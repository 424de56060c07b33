//! Complex literals: `a`, `bi`, `a+bi`, `a-bi`, with `i` alone meaning 1i.
//! Real parts accept anything `f64::from_str` does (`1e-3`, `-2.5`).

use num_complex::Complex64;

/// A parsed value that remembers the text it came from, so reports can
/// echo the literal exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Literal<T> {
    pub text: String,
    pub value: T,
}

pub fn parse_complex(text: &str) -> Result<Literal<Complex64>, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let value = match s.strip_suffix('i').or_else(|| s.strip_suffix('j')) {
        None => Complex64::new(parse_real(&s, text)?, 0.0),
        Some(body) => {
            // split at the last sign that is not leading and not an exponent sign
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
            match split {
                Some(pos) => Complex64::new(parse_real(&body[..pos], text)?, parse_imag(&body[pos..], text)?),
                None => Complex64::new(0.0, parse_imag(body, text)?),
            }
        }
    };
    if !value.is_finite() {
        return Err(format!("non-finite complex literal '{text}'"));
    }
    Ok(Literal {
        text: text.to_string(),
        value,
    })
}

fn parse_real(s: &str, whole: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .map_err(|_| format!("invalid complex literal '{whole}'"))
}

fn parse_imag(s: &str, whole: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s, whole),
    }
}

pub fn parse_real_literal(text: &str) -> Result<Literal<f64>, String> {
    let value: f64 = text.trim().parse().map_err(|_| format!("invalid number '{text}'"))?;
    if !value.is_finite() {
        return Err(format!("non-finite number '{text}'"));
    }
    Ok(Literal {
        text: text.to_string(),
        value,
    })
}

/// Comma-separated list of complex literals.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|part| parse_complex(part).map(|l| l.value))
        .collect()
}
