//! Reading sequences, equations and polynomials from files, stdin or inline text.

use std::io::Read;

use mahlerkit::exactalg::{Rational, UniPoly};
use mahlerkit::sequence::SequenceSpec;
use serde::de::DeserializeOwned;

use crate::CliError;

/// Text behind `--input`-style arguments: inline JSON when it starts with
/// `[` or `{`, stdin for `-`, otherwise a file path.
pub fn read_source(arg: &str) -> Result<String, CliError> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::input(format!("{arg}: {e}")))
}

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::input(format!("malformed {what}: {e}")))
}

/// A sequence: a tagged spec, `{"values": [...], "offset": 0|1}`, a bare
/// JSON array (offset 1), or b-file text.
pub fn parse_sequence(text: &str) -> Result<SequenceSpec, CliError> {
    let t = text.trim_start();
    if !(t.starts_with('{') || t.starts_with('[')) {
        return parse_bfile(text);
    }
    let v: serde_json::Value = parse_json(text, "sequence JSON")?;
    let v = match v {
        serde_json::Value::Array(values) => serde_json::json!({"type": "values", "values": values}),
        serde_json::Value::Object(mut m) => {
            if !m.contains_key("type") && m.contains_key("values") {
                m.insert("type".into(), "values".into());
            }
            serde_json::Value::Object(m)
        }
        _ => {
            return Err(CliError::input(
                "sequence JSON must be an object or an array",
            ))
        }
    };
    serde_json::from_value(v).map_err(|e| CliError::input(format!("malformed sequence: {e}")))
}

/// OEIS-style b-file: `index value` per line, `#` comments, contiguous
/// indices starting at 0 or 1.
pub fn parse_bfile(text: &str) -> Result<SequenceSpec, CliError> {
    let mut values = Vec::new();
    let mut first: Option<u64> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = |msg: String| CliError::input(format!("b-file line {}: {msg}", lineno + 1));
        let mut cols = line.split_whitespace();
        let (Some(i), Some(v)) = (cols.next(), cols.next()) else {
            return Err(at("expected two columns".into()));
        };
        let i: u64 = i.parse().map_err(|_| at(format!("bad index {i:?}")))?;
        let v: Rational = v.parse().map_err(|_| at(format!("bad value {v:?}")))?;
        let expected = match first {
            None => {
                if i > 1 {
                    return Err(at(format!("indices must start at 0 or 1, found {i}")));
                }
                first = Some(i);
                i
            }
            Some(f) => f + values.len() as u64,
        };
        if i != expected {
            return Err(at(format!("expected index {expected}, found {i}")));
        }
        values.push(v);
    }
    let offset = first.ok_or_else(|| CliError::input("b-file has no data lines"))? as usize;
    Ok(SequenceSpec::Values { values, offset })
}

/// A polynomial as a JSON coefficient array, lowest degree first.
pub fn parse_poly(text: &str) -> Result<UniPoly<Rational>, CliError> {
    parse_json(&read_source(text)?, "polynomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfile() {
        let s = parse_bfile("# comment\n1 1\n2 -1/2\n\n3 3\n").unwrap();
        assert_eq!(
            s,
            SequenceSpec::Values {
                values: vec![1.into(), Rational::new(-1, 2), 3.into()],
                offset: 1
            }
        );
        let e = parse_bfile("0 1\n2 3\n").unwrap_err();
        assert!(e.message.contains("line 2"), "{}", e.message);
        assert!(parse_bfile("5 1\n").is_err());
        assert!(parse_bfile("1 x\n").is_err());
    }

    #[test]
    fn json_forms() {
        let a = parse_sequence("[1, 2, 3]").unwrap();
        let b = parse_sequence(r#"{"values": [1, 2, 3]}"#).unwrap();
        let c = parse_sequence(r#"{"type": "values", "values": [1, 2, 3], "offset": 1}"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(
            parse_sequence(r#"{"type": "identity"}"#).unwrap(),
            SequenceSpec::Identity
        );
        let e = parse_sequence("{\"values\": [1,\n 2,,]}").unwrap_err();
        assert!(e.message.contains("line 2"), "{}", e.message);
    }
}
