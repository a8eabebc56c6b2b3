//! Deterministic JSON: 17-significant-digit float serialization (lossless
//! for 64-bit floats) and input parsing that reports the failing field
//! path.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::bodies::BodySpec;
use crate::{Error, Result};

/// serde_json formatter printing every finite float as `d.16 digits e exp`:
/// 17 significant digits, enough to round-trip any f64 exactly. Non-finite
/// floats become null upstream.
#[derive(Clone, Copy, Default)]
pub struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.8e}")
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_string_17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::Parse(format!("serialized non-utf8: {e}")))
}

/// Write a value as one JSON document plus trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = to_string_17(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

/// Parse a JSON document, naming the failing field on error.
pub fn from_str<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            Error::Parse(format!("{what}: {}", e.inner()))
        } else {
            Error::Parse(format!("{what}: at field `{path}`: {}", e.inner()))
        }
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    from_str(&text, &path.display().to_string())
}

pub fn read_body(path: &Path) -> Result<BodySpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    crate::bodies::body_from_str(&text, &path.display().to_string())
}

/// Loose reader for any JSON document carrying planar vertices, such as
/// polygon outputs used as render overlays.
#[derive(Clone, Debug, serde::Deserialize)]
pub struct PolygonFile {
    pub vertices: Vec<[f64; 2]>,
}

/// Loose reader pulling failure markers out of a verification report.
#[derive(Clone, Debug, serde::Deserialize)]
pub struct ReportFile {
    #[serde(default)]
    pub failures: Vec<ReportFailure>,
}

#[derive(Clone, Debug, serde::Deserialize)]
pub struct ReportFailure {
    pub point: [f64; 2],
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let vals = [
            0.0,
            -0.0,
            1.0,
            std::f64::consts::PI,
            2.0f64.sqrt() / 2.0,
            1e-300,
            -3.337e222,
            f64::MIN_POSITIVE,
            4.9e-324,
        ];
        for &v in &vals {
            let s = to_string_17(&v).unwrap();
            let back: f64 = serde_json::from_str(&s).unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{v} via {s}");
        }
    }

    #[test]
    fn non_finite_serializes_as_null() {
        assert_eq!(to_string_17(&f64::NAN).unwrap(), "null");
        assert_eq!(to_string_17(&f64::INFINITY).unwrap(), "null");
    }

    #[test]
    fn output_is_compact_and_deterministic() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: Vec<u32>,
        }
        let s = S { a: 0.5, b: vec![1, 2] };
        let one = to_string_17(&s).unwrap();
        let two = to_string_17(&s).unwrap();
        assert_eq!(one, two);
        assert_eq!(one, r#"{"a":5.0000000000000000e-1,"b":[1,2]}"#);
    }

    #[test]
    fn parse_errors_name_the_field() {
        let text = r#"{"kind":"circle","radius":"big","samples":32}"#;
        let err = crate::bodies::body_from_str(text, "body").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("radius"), "{msg}");
        let err = crate::bodies::body_from_str(r#"{"kind":"torus"}"#, "body").unwrap_err();
        assert!(err.to_string().contains("torus"), "{err}");
    }

    #[test]
    fn body_round_trip_is_exact() {
        let spec = BodySpec::Polygon {
            vertices: vec![
                [0.1234567890123456, -7.654321098765432e-3],
                [1.0, 0.0],
                [0.5, 2.0f64.sqrt()],
            ],
        };
        let s = to_string_17(&spec).unwrap();
        let back: BodySpec = from_str(&s, "round trip").unwrap();
        match (spec, back) {
            (BodySpec::Polygon { vertices: a }, BodySpec::Polygon { vertices: b }) => {
                assert_eq!(a, b);
            }
            _ => panic!("kind changed in round trip"),
        }
    }
}
