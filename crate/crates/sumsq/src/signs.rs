//! Sign files and `f(n)=v` overrides.
//!
//! A sign file has one `n:+1` or `n:-1` entry per line. Blank lines and lines
//! starting with `#` are skipped.

use std::collections::BTreeMap;

use sumsq_core::engine::{Sign, SignAssignment};
use sumsq_core::{Error, Rational, Result};

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Input(format!("sign file line {line}: {msg}"))
}

pub fn parse_sign_file(text: &str) -> Result<SignAssignment> {
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (n, s) = line
            .split_once(':')
            .ok_or_else(|| bad(i + 1, format!("expected n:+1 or n:-1, got {line:?}")))?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| bad(i + 1, format!("{:?} is not a positive integer", n.trim())))?;
        if n == 0 {
            return Err(bad(i + 1, "n must be positive"));
        }
        let sign = match s.trim() {
            "+1" => Sign::Plus,
            "-1" => Sign::Minus,
            other => return Err(bad(i + 1, format!("sign must be +1 or -1, got {other:?}"))),
        };
        if let Some(prev) = seen.insert(n, sign) {
            if prev != sign {
                return Err(bad(i + 1, format!("conflicting signs for {n}")));
            }
        }
    }
    Ok(SignAssignment::from_entries(seen))
}

/// Parses `f(n)=v` with `v` an integer or `p/q`.
pub fn parse_override(text: &str) -> Result<(u64, Rational)> {
    let malformed = || Error::Input(format!("override must look like f(3)=2 or f(5)=1/3, got {text:?}"));
    let rest = text.trim().strip_prefix("f(").ok_or_else(malformed)?;
    let (n, v) = rest.split_once(")=").ok_or_else(malformed)?;
    let n: u64 = n.trim().parse().map_err(|_| malformed())?;
    if n == 0 {
        return Err(malformed());
    }
    let v: Rational = v.trim().parse()?;
    Ok((n, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_files() {
        let s = parse_sign_file("# comment\n7:-1\n\n 8 : +1\n").unwrap();
        assert_eq!(s.get(7), Sign::Minus);
        assert_eq!(s.get(8), Sign::Plus);
        assert_eq!(s.get(10), Sign::Plus);
        assert!(parse_sign_file("7:-2").is_err());
        assert!(parse_sign_file("x:-1").is_err());
        assert!(parse_sign_file("0:+1").is_err());
        assert!(parse_sign_file("7").is_err());
        assert!(parse_sign_file("7:+1\n7:-1").is_err());
        assert!(parse_sign_file("7:+1\n7:+1").is_ok());
    }

    #[test]
    fn overrides() {
        assert_eq!(parse_override("f(3)=2").unwrap(), (3, Rational::from(2)));
        assert_eq!(
            parse_override("f(5)=-1/3").unwrap(),
            (5, sumsq_core::rat_make(-1, 3).unwrap())
        );
        for bad in ["3=2", "f(3)2", "f(x)=2", "f(0)=1", "f(3)=1/0", "f(3)="] {
            assert!(parse_override(bad).is_err(), "{bad}");
        }
    }
}
