use std::fmt;
use std::str::FromStr;

use crate::cardinalities::CardinalitySet;
use crate::error::{Error, Result};

/// Number of family members of a given size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mult {
    Finite(u64),
    Infinite,
}

impl Mult {
    pub fn is_zero(self) -> bool {
        self == Mult::Finite(0)
    }
}

impl std::ops::Add for Mult {
    type Output = Mult;

    fn add(self, other: Mult) -> Mult {
        match (self, other) {
            (Mult::Finite(a), Mult::Finite(b)) => Mult::Finite(a + b),
            _ => Mult::Infinite,
        }
    }
}

impl fmt::Display for Mult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mult::Finite(k) => write!(f, "{k}"),
            Mult::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Mult {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "\u{221e}" => Ok(Mult::Infinite),
            t => t
                .parse()
                .map(Mult::Finite)
                .map_err(|_| Error::Invalid(format!("bad multiplicity '{t}'"))),
        }
    }
}

/// Finite model sizes: an eventually periodic set or the powers of a base.
#[derive(Clone, Debug)]
pub enum SizeSet {
    Set(CardinalitySet),
    Powers(u64),
}

impl SizeSet {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            SizeSet::Set(s) => s.contains(n),
            SizeSet::Powers(b) => {
                let mut p = *b;
                while p < n {
                    p = p.saturating_mul(*b);
                }
                p == n
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            SizeSet::Set(s) => s.is_infinite(),
            SizeSet::Powers(_) => true,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SizeSet::Set(s) => s.is_empty_set(),
            SizeSet::Powers(_) => false,
        }
    }

    /// Members `≤ bound` in increasing order.
    pub fn members_up_to(&self, bound: u64) -> Vec<u64> {
        match self {
            SizeSet::Set(s) => s.members_up_to(bound).into_iter().collect(),
            SizeSet::Powers(b) => std::iter::successors(Some(*b), |p| p.checked_mul(*b))
                .take_while(|&p| p <= bound)
                .collect(),
        }
    }

    /// Members `≥ from`, counted; `None` when there are infinitely many.
    pub fn count_from(&self, from: u64) -> Option<u64> {
        if self.is_infinite() {
            return None;
        }
        let SizeSet::Set(s) = self else { unreachable!() };
        let top = s.max_finite().unwrap_or(0);
        Some(s.members_up_to(top).range(from..).count() as u64)
    }

    pub fn as_set(&self) -> Result<CardinalitySet> {
        match self {
            SizeSet::Set(s) => Ok(s.clone()),
            SizeSet::Powers(b) => Err(Error::Unsupported(format!(
                "the powers of {b} are not eventually periodic"
            ))),
        }
    }
}

impl fmt::Display for SizeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeSet::Set(s) => write!(f, "{s}"),
            SizeSet::Powers(b) => write!(f, "{b}^n"),
        }
    }
}

/// Multiset of model sizes over `Z+ ∪ {∞}` given by finitely many entries.
#[derive(Clone, Debug)]
pub struct CardinalitySpectrum {
    pub entries: Vec<(SizeSet, Mult)>,
    pub infinite: Mult,
}

impl Default for CardinalitySpectrum {
    fn default() -> Self {
        CardinalitySpectrum { entries: Vec::new(), infinite: Mult::Finite(0) }
    }
}

impl CardinalitySpectrum {
    pub fn single(sizes: SizeSet, mult: Mult) -> Self {
        CardinalitySpectrum { entries: vec![(sizes, mult)], infinite: Mult::Finite(0) }
    }

    pub fn with_infinite(mut self, mult: Mult) -> Self {
        self.infinite = self.infinite + mult;
        self
    }

    pub fn push(&mut self, sizes: SizeSet, mult: Mult) {
        self.entries.push((sizes, mult));
    }

    pub fn multiplicity(&self, n: u64) -> Mult {
        self.entries
            .iter()
            .filter(|(s, _)| s.contains(n))
            .fold(Mult::Finite(0), |acc, (_, m)| acc + *m)
    }

    fn live(&self) -> impl Iterator<Item = &(SizeSet, Mult)> {
        self.entries.iter().filter(|(s, m)| !m.is_zero() && !s.is_empty())
    }

    pub fn finite_sizes_unbounded(&self) -> bool {
        self.live().any(|(s, _)| s.is_infinite())
    }

    /// Sizes carried by infinitely many members.
    pub fn infinitely_repeated(&self) -> Result<CardinalitySet> {
        let mut out = CardinalitySet::Empty;
        for (s, m) in self.live() {
            if *m == Mult::Infinite {
                out = out.union(&s.as_set()?);
            }
        }
        Ok(out)
    }

    /// All finite sizes with positive multiplicity.
    pub fn finite_sizes(&self) -> Result<CardinalitySet> {
        let mut out = CardinalitySet::Empty;
        for (s, _) in self.live() {
            out = out.union(&s.as_set()?);
        }
        Ok(out)
    }

    pub fn has_finite_members(&self) -> bool {
        self.live().next().is_some()
    }

    /// Whether the described family is infinite.
    pub fn is_infinite(&self) -> bool {
        self.infinite == Mult::Infinite
            || self.live().any(|(s, m)| *m == Mult::Infinite || s.is_infinite())
    }

    /// Largest finite size, when the sizes are bounded.
    pub fn max_size(&self) -> Option<u64> {
        if self.finite_sizes_unbounded() {
            return None;
        }
        self.live()
            .filter_map(|(s, _)| s.as_set().ok().and_then(|s| s.max_finite()))
            .max()
    }

    /// Extensional comparison on sizes `1..=horizon` and at infinity.
    pub fn agrees_with(&self, other: &Self, horizon: u64) -> bool {
        self.infinite == other.infinite
            && self.finite_sizes_unbounded() == other.finite_sizes_unbounded()
            && (1..=horizon).all(|n| self.multiplicity(n) == other.multiplicity(n))
    }
}

impl fmt::Display for CardinalitySpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .live()
            .map(|(s, m)| format!("{s}:{m}"))
            .collect();
        if !self.infinite.is_zero() {
            parts.push(format!("inf:{}", self.infinite));
        }
        if parts.is_empty() {
            f.write_str("\u{2205}")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

impl FromStr for CardinalitySpectrum {
    type Err = Error;

    /// Entries `<sizes>:<mult>` separated by `;`, with sizes `inf` for
    /// infinite models and `b^n` for the powers of `b`.
    fn from_str(text: &str) -> Result<Self> {
        let mut out = CardinalitySpectrum::default();
        let t = text.trim();
        if t.is_empty() || t == "\u{2205}" {
            return Ok(out);
        }
        for entry in t.split(';') {
            let (sizes, mult) = entry
                .rsplit_once(':')
                .ok_or_else(|| Error::Invalid(format!("spectrum entry '{}' lacks ':<mult>'", entry.trim())))?;
            let mult: Mult = mult.parse()?;
            let sizes = sizes.trim();
            if sizes == "inf" || sizes == "\u{221e}" {
                out.infinite = out.infinite + mult;
            } else if let Some(base) = sizes.strip_suffix("^n") {
                let b = base
                    .parse::<u64>()
                    .ok()
                    .filter(|&b| b >= 2)
                    .ok_or_else(|| Error::Invalid(format!("bad power base '{base}'")))?;
                out.push(SizeSet::Powers(b), mult);
            } else {
                out.push(SizeSet::Set(sizes.parse()?), mult);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_queries() {
        let s: CardinalitySpectrum = "5:inf; 1,2,..:1; inf:1".parse().unwrap();
        assert_eq!(s.multiplicity(5), Mult::Infinite);
        assert_eq!(s.multiplicity(4), Mult::Finite(1));
        assert!(s.finite_sizes_unbounded());
        assert!(s.infinitely_repeated().unwrap().same_as(&CardinalitySet::finite([5])));
        let back: CardinalitySpectrum = s.to_string().parse().unwrap();
        assert!(back.agrees_with(&s, 50));
    }

    #[test]
    fn powers() {
        let s: CardinalitySpectrum = "2^n:1".parse().unwrap();
        assert_eq!(s.multiplicity(8), Mult::Finite(1));
        assert_eq!(s.multiplicity(6), Mult::Finite(0));
        assert!(s.finite_sizes_unbounded() && s.is_infinite());
        assert!(s.infinitely_repeated().unwrap().is_empty_set());
        assert!(s.finite_sizes().is_err());
    }

    #[test]
    fn bounded() {
        let s: CardinalitySpectrum = "1,2,3:1".parse().unwrap();
        assert_eq!(s.max_size(), Some(3));
        assert!(!s.is_infinite());
        assert!("5".parse::<CardinalitySpectrum>().is_err());
    }
}
