use std::fmt;

use serde::{Deserialize, Serialize};

/// A positive quantity that may be flagged as unbounded.
///
/// Used for the spectral correlation width of a Schell-model pump, the
/// resulting coherence time, and detector averaging windows. The infinite
/// case is a flag rather than a large float so that limits stay exact.
///
/// Serialized as a plain number, or as the string `"inf"` for the unbounded
/// case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExtentRepr", into = "ExtentRepr")]
pub enum Extent {
    Finite(f64),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtentRepr {
    Number(f64),
    Text(String),
}

impl TryFrom<ExtentRepr> for Extent {
    type Error = String;

    fn try_from(r: ExtentRepr) -> Result<Self, String> {
        match r {
            ExtentRepr::Number(v) => Ok(Extent::from(v)),
            ExtentRepr::Text(t) if matches!(t.as_str(), "inf" | "infinite") => Ok(Extent::Infinite),
            ExtentRepr::Text(t) => Err(format!("expected a number or \"inf\", got {t:?}")),
        }
    }
}

impl From<Extent> for ExtentRepr {
    fn from(e: Extent) -> Self {
        match e {
            Extent::Finite(v) => ExtentRepr::Number(v),
            Extent::Infinite => ExtentRepr::Text("inf".into()),
        }
    }
}

impl Extent {
    pub fn is_infinite(self) -> bool {
        matches!(self, Extent::Infinite)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extent::Finite(v) => Some(v),
            Extent::Infinite => None,
        }
    }

    /// `1/x²`, which vanishes in the infinite limit.
    pub(crate) fn inverse_square(self) -> f64 {
        match self {
            Extent::Finite(v) => 1.0 / (v * v),
            Extent::Infinite => 0.0,
        }
    }

    pub(crate) fn is_valid(self) -> bool {
        match self {
            Extent::Finite(v) => v.is_finite() && v > 0.0,
            Extent::Infinite => true,
        }
    }
}

impl From<f64> for Extent {
    fn from(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            Extent::Infinite
        } else {
            Extent::Finite(v)
        }
    }
}

impl fmt::Display for Extent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extent::Finite(v) => write!(f, "{v}"),
            Extent::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Deserialize, Serialize)]
    struct Holder {
        x: Extent,
    }

    #[test]
    fn reads_numbers_and_infinity_flags() {
        let h: Holder = toml::from_str("x = 2.5").unwrap();
        assert_eq!(h.x, Extent::Finite(2.5));
        let h: Holder = toml::from_str("x = \"inf\"").unwrap();
        assert_eq!(h.x, Extent::Infinite);
        let h: Holder = toml::from_str("x = inf").unwrap();
        assert_eq!(h.x, Extent::Infinite);
        assert!(toml::from_str::<Holder>("x = \"wide\"").is_err());
    }

    #[test]
    fn writes_infinity_as_text() {
        let s = serde_json::to_string(&Holder { x: Extent::Infinite }).unwrap();
        assert_eq!(s, r#"{"x":"inf"}"#);
        assert_eq!(Extent::Finite(3.0).to_string(), "3");
    }

    #[test]
    fn validity() {
        assert!(Extent::Infinite.is_valid());
        assert!(!Extent::Finite(0.0).is_valid());
        assert!(!Extent::Finite(f64::NAN).is_valid());
        assert_eq!(Extent::Infinite.inverse_square(), 0.0);
    }
}
