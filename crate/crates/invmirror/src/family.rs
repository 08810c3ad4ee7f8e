use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Loop,
    Chain,
    Bp,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Loop, Family::Chain, Family::Bp];

    pub fn name(self) -> &'static str {
        match self {
            Family::Loop => "loop",
            Family::Chain => "chain",
            Family::Bp => "bp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "loop" => Ok(Family::Loop),
            "chain" => Ok(Family::Chain),
            "bp" | "brieskorn-pham" => Ok(Family::Bp),
            other => Err(Error::Domain(format!("unknown family {other:?}"))),
        }
    }
}

/// A polynomial family together with its exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub p: u32,
    pub q: u32,
}

impl FamilySpec {
    pub fn new(family: Family, p: u32, q: u32) -> Result<Self, Error> {
        if p < 2 || q < 2 {
            return Err(Error::Domain(format!("exponents must be at least 2, got p={p} q={q}")));
        }
        Ok(FamilySpec { family, p, q })
    }

    /// Milnor number of the polynomial (and of its transpose).
    pub fn milnor(&self) -> usize {
        let (p, q) = (self.p as usize, self.q as usize);
        match self.family {
            Family::Loop => p * q,
            Family::Chain => p * q - p + 1,
            Family::Bp => (p - 1) * (q - 1),
        }
    }

    /// The summands of the Milnor number by object class:
    /// grid, x-class, y-class, f-class.
    pub fn milnor_parts(&self) -> Vec<usize> {
        let (p, q) = (self.p as usize, self.q as usize);
        let grid = (p - 1) * (q - 1);
        match self.family {
            Family::Loop => vec![grid, p - 1, q - 1, 1],
            Family::Chain => vec![grid, q - 1, 1],
            Family::Bp => vec![grid],
        }
    }

    /// All specs with `lo <= p, q <= hi` for the given families.
    pub fn range(families: &[Family], lo: u32, hi: u32) -> Vec<FamilySpec> {
        let mut out = Vec::new();
        for &family in families {
            for p in lo..=hi {
                for q in lo..=hi {
                    out.push(FamilySpec { family, p, q });
                }
            }
        }
        out
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.family, self.p, self.q)
    }
}
