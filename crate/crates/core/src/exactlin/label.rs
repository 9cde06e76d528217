use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Parity {
    #[default]
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Option<Parity> {
        match bit {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Name of an indexed family of basis vectors. The `bar` flag marks the odd
/// copy produced by the Kantor construction; it is written `~name`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FamilyId {
    name: Arc<str>,
    bar: bool,
}

impl FamilyId {
    pub fn new(name: &str) -> FamilyId {
        FamilyId { name: Arc::from(name), bar: false }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_bar(&self) -> bool {
        self.bar
    }

    pub fn barred(&self) -> FamilyId {
        FamilyId { name: self.name.clone(), bar: true }
    }

    pub fn unbarred(&self) -> FamilyId {
        FamilyId { name: self.name.clone(), bar: false }
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (bar, name) = match s.strip_prefix('~') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        if !valid_name(name) {
            return Err(Error::Parse(format!("invalid family name `{s}`")));
        }
        Ok(FamilyId { name: Arc::from(name), bar })
    }
}

impl TryFrom<String> for FamilyId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<FamilyId> for String {
    fn from(f: FamilyId) -> String {
        f.to_string()
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bar {
            write!(f, "~{}", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

/// One basis vector of a countable basis. Ordered lexicographically by
/// family, then index; parity is determined by the family.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    family: FamilyId,
    index: u64,
    parity: Parity,
}

impl BasisLabel {
    pub fn new(family: FamilyId, index: u64, parity: Parity) -> BasisLabel {
        BasisLabel { family, index, parity }
    }

    /// Even label, for quick construction in tests and ungraded specs.
    pub fn even(family: &str, index: u64) -> BasisLabel {
        BasisLabel::new(FamilyId::new(family), index, Parity::Even)
    }

    pub fn family(&self) -> &FamilyId {
        &self.family
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn with_parity(&self, parity: Parity) -> BasisLabel {
        BasisLabel { family: self.family.clone(), index: self.index, parity }
    }
}

/// Command-line syntax: `family:index`, `~family:index` for bar copies.
impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.index)
    }
}

/// Splits `f:3` / `~f:3` into its family and index.
pub fn parse_label_ref(s: &str) -> Result<(FamilyId, u64), Error> {
    let (fam, idx) = s
        .trim()
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("label `{s}` must look like family:index")))?;
    let family: FamilyId = fam.parse()?;
    let index = idx
        .trim()
        .parse::<u64>()
        .map_err(|_| Error::Parse(format!("bad index in label `{s}`")))?;
    Ok((family, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_roundtrip() {
        let f: FamilyId = "~f".parse().unwrap();
        assert!(f.is_bar());
        assert_eq!(f.name(), "f");
        assert_eq!(f.to_string(), "~f");
        assert!("1x".parse::<FamilyId>().is_err());
        assert!("".parse::<FamilyId>().is_err());
    }

    #[test]
    fn label_order_is_family_then_index() {
        let e = BasisLabel::even("e", 0);
        let f1 = BasisLabel::even("f", 1);
        let f10 = BasisLabel::even("f", 10);
        assert!(e < f1 && f1 < f10);
        let fb = BasisLabel::new(FamilyId::new("f").barred(), 0, Parity::Odd);
        assert!(f10 < fb);
    }

    #[test]
    fn label_ref_parsing() {
        let (fam, idx) = parse_label_ref("~x:12").unwrap();
        assert_eq!(fam, FamilyId::new("x").barred());
        assert_eq!(idx, 12);
        assert!(parse_label_ref("x12").is_err());
        assert!(parse_label_ref("x:-1").is_err());
    }
}
