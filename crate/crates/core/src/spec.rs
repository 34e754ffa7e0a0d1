use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Which transform evaluates the amplitudes.
///
/// `Integral` is the `{1, i, -1, -i}` transform; it is the modified AQFT at
/// order 2 and evaluates identically to `ModifiedAqft { m: 2 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformSpec {
    ExactQft,
    /// Approximate QFT keeping `m` terms of each phase exponent.
    Aqft { m: u32 },
    /// AQFT keeping `m` terms plus the next term with a doubled coefficient.
    ModifiedAqft { m: u32 },
    Integral,
}

impl TransformSpec {
    /// The order `m` of the phase group, i.e. phases are multiples of
    /// `2π / 2^m`. For the exact QFT this is `n`.
    pub fn order(self, n: u32) -> u32 {
        match self {
            TransformSpec::ExactQft => n,
            TransformSpec::Aqft { m } | TransformSpec::ModifiedAqft { m } => m,
            TransformSpec::Integral => 2,
        }
    }

    /// Checks the spec against a register width and returns the order.
    pub fn order_for(self, n: u32) -> Result<u32> {
        let m = self.order(n);
        if m == 0 || m > n {
            return Err(invalid(format!(
                "transform order m = {m} must satisfy 1 <= m <= n = {n} ({self})"
            )));
        }
        if m > 62 {
            return Err(invalid(format!("transform order m = {m} exceeds 62")));
        }
        Ok(m)
    }

    /// Whether the `(m+1)`th term is kept with a doubled coefficient.
    pub fn is_modified(self) -> bool {
        matches!(self, TransformSpec::ModifiedAqft { .. } | TransformSpec::Integral)
    }

    /// `m = 1` is the Hadamard transform.
    pub fn is_degenerate(self) -> bool {
        matches!(
            self,
            TransformSpec::Aqft { m: 1 } | TransformSpec::ModifiedAqft { m: 1 }
        )
    }

    /// The same transform expressed without the `integral` alias.
    pub fn canonical(self) -> TransformSpec {
        match self {
            TransformSpec::Integral => TransformSpec::ModifiedAqft { m: 2 },
            other => other,
        }
    }

    /// Phase terms are `{1, i, -1, -i}` multiples, so sums are exact
    /// Gaussian integers.
    pub fn is_gaussian(self, n: u32) -> bool {
        self.order(n) <= 2
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSpec::ExactQft => f.write_str("qft"),
            TransformSpec::Aqft { m } => write!(f, "aqft:{m}"),
            TransformSpec::ModifiedAqft { m } => write!(f, "maqft:{m}"),
            TransformSpec::Integral => f.write_str("integral"),
        }
    }
}

impl FromStr for TransformSpec {
    type Err = Error;

    /// Grammar: `qft` | `aqft:m` | `maqft:m` | `integral`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "qft" => return Ok(TransformSpec::ExactQft),
            "integral" => return Ok(TransformSpec::Integral),
            _ => {}
        }
        let (kind, m) = s
            .split_once(':')
            .ok_or_else(|| invalid(format!("unknown transform spec {s:?}")))?;
        let m: u32 = m
            .parse()
            .map_err(|_| invalid(format!("bad order in transform spec {s:?}")))?;
        if m == 0 {
            return Err(invalid("transform order must be at least 1"));
        }
        match kind {
            "aqft" => Ok(TransformSpec::Aqft { m }),
            "maqft" => Ok(TransformSpec::ModifiedAqft { m }),
            _ => Err(invalid(format!("unknown transform kind {kind:?}"))),
        }
    }
}

impl Serialize for TransformSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TransformSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_grammar() {
        assert_eq!("qft".parse::<TransformSpec>().unwrap(), TransformSpec::ExactQft);
        assert_eq!("integral".parse::<TransformSpec>().unwrap(), TransformSpec::Integral);
        assert_eq!(
            "aqft:3".parse::<TransformSpec>().unwrap(),
            TransformSpec::Aqft { m: 3 }
        );
        assert_eq!(
            "maqft:2".parse::<TransformSpec>().unwrap(),
            TransformSpec::ModifiedAqft { m: 2 }
        );
        for bad in ["", "fft", "aqft", "aqft:", "aqft:x", "maqft:0", "qft:3"] {
            assert!(bad.parse::<TransformSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn integral_is_maqft2() {
        assert_eq!(
            TransformSpec::Integral.canonical(),
            TransformSpec::ModifiedAqft { m: 2 }
        );
        assert_eq!(TransformSpec::Integral.order(30), 2);
        assert!(TransformSpec::Integral.is_modified());
    }

    #[test]
    fn order_bounds() {
        assert_eq!(TransformSpec::ExactQft.order_for(9).unwrap(), 9);
        assert!(TransformSpec::Aqft { m: 5 }.order_for(4).is_err());
        assert!(TransformSpec::Integral.order_for(1).is_err());
        assert!(TransformSpec::Aqft { m: 1 }.is_degenerate());
        assert!(!TransformSpec::Aqft { m: 2 }.is_degenerate());
    }

    #[test]
    fn display_round_trips() {
        for s in ["qft", "aqft:4", "maqft:3", "integral"] {
            assert_eq!(s.parse::<TransformSpec>().unwrap().to_string(), s);
        }
    }
}
