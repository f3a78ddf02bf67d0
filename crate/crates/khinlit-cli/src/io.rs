//! Tensor file format.
//!
//! A tensor is a JSON document `{"shape": [...], "re": [...], "im": [...]}`
//! with flat row-major coefficient arrays (slot 1 slowest). Floats render
//! through the shortest round-trip decimal form, so write/read round-trips
//! are bit-exact.

use std::io::Read;

use anyhow::{bail, Context};
use khinlit::{Complex64, ComplexTensor};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
struct TensorDoc {
    shape: Vec<usize>,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// Parses a tensor from its JSON document.
pub fn tensor_from_json(text: &str) -> anyhow::Result<ComplexTensor> {
    let doc: TensorDoc = serde_json::from_str(text).context("malformed tensor document")?;
    if doc.re.len() != doc.im.len() {
        bail!("re has {} entries but im has {}", doc.re.len(), doc.im.len());
    }
    let data: Vec<Complex64> = doc
        .re
        .iter()
        .zip(&doc.im)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect();
    ComplexTensor::new(doc.shape, data).map_err(|e| anyhow::anyhow!("{e}"))
}

/// Renders a tensor as its JSON document.
pub fn tensor_to_json(t: &ComplexTensor) -> String {
    let doc = TensorDoc {
        shape: t.shape().to_vec(),
        re: t.data().iter().map(|z| z.re).collect(),
        im: t.data().iter().map(|z| z.im).collect(),
    };
    serde_json::to_string(&doc).expect("tensor document serializes")
}

/// Reads a tensor from a file path, or from standard input when the
/// path is `-`.
pub fn read_tensor(path: &str) -> anyhow::Result<ComplexTensor> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).context("reading tensor from stdin")?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading tensor file {path}"))?
    };
    tensor_from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let t = ComplexTensor::new(
            vec![2, 2],
            vec![
                Complex64::new(0.1, -0.2),
                Complex64::new(1.0 / 3.0, 2.0f64.sqrt()),
                Complex64::new(-1e-307, 1e300),
                Complex64::new(0.0, -0.0),
            ],
        )
        .unwrap();
        let text = tensor_to_json(&t);
        let back = tensor_from_json(&text).unwrap();
        assert_eq!(back.shape(), t.shape());
        for (a, b) in back.data().iter().zip(t.data()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(tensor_from_json("{}").is_err());
        assert!(tensor_from_json(r#"{"shape":[2],"re":[1.0],"im":[0.0,0.0]}"#).is_err());
        assert!(tensor_from_json(r#"{"shape":[3],"re":[1.0],"im":[0.0]}"#).is_err());
    }
}
