use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest bound accepted by the explicit-membership operations.
pub const MAX_BOUND: u64 = 1_000_000;

/// A symbolic set of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CardinalitySet {
    Empty,
    Finite(BTreeSet<u64>),
    /// `⋃_{k∈K} kZ⁺`.
    Progressions(BTreeSet<u64>),
    /// All sums `Σ c_k·k` with `c_k ≥ 0`, not all zero.
    SumClosure(BTreeSet<u64>),
    /// `{m ≥ from : m mod modulus ∈ residues}`.
    Residues {
        modulus: u64,
        residues: BTreeSet<u64>,
        from: u64,
    },
    Complement(Box<CardinalitySet>),
    Union(Vec<CardinalitySet>),
    Intersection(Vec<CardinalitySet>),
}

use CardinalitySet::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    (a / gcd(a, b)).saturating_mul(b)
}

/// Membership of `0..=bound` in the additive semigroup generated by `k`.
fn semigroup_table(k: &BTreeSet<u64>, bound: u64) -> Vec<bool> {
    let mut reach = vec![false; bound as usize + 1];
    reach[0] = true;
    for m in 1..=bound as usize {
        reach[m] = k.iter().any(|&g| g as usize <= m && reach[m - g as usize]);
    }
    reach[0] = false;
    reach
}

impl CardinalitySet {
    pub fn all() -> Self {
        Complement(Box::new(Empty))
    }

    pub fn finite(xs: impl IntoIterator<Item = u64>) -> Self {
        let s: BTreeSet<u64> = xs.into_iter().filter(|&x| x > 0).collect();
        if s.is_empty() {
            Empty
        } else {
            Finite(s)
        }
    }

    /// `{n : n ≥ from}`.
    pub fn at_least(from: u64) -> Self {
        Complement(Box::new(Self::finite(1..from)))
    }

    pub fn multiples(k: u64) -> Self {
        Progressions([k].into_iter().collect())
    }

    pub fn sum_closure(k: impl IntoIterator<Item = u64>) -> Self {
        let k: BTreeSet<u64> = k.into_iter().filter(|&x| x > 0).collect();
        if k.is_empty() {
            Empty
        } else {
            SumClosure(k)
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            Complement(inner) => (**inner).clone(),
            other => Complement(Box::new(other.clone())),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Union(vec![self.clone(), other.clone()])
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Intersection(vec![self.clone(), other.clone()])
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn contains(&self, m: u64) -> bool {
        if m == 0 {
            return false;
        }
        match self {
            Empty => false,
            Finite(s) => s.contains(&m),
            Progressions(k) => k.iter().any(|&g| m.is_multiple_of(g)),
            SumClosure(k) => {
                let g = k.iter().fold(0, |a, &b| gcd(a, b));
                if !m.is_multiple_of(g) {
                    return false;
                }
                let (pre, _) = self.periodicity();
                if m >= pre {
                    return true;
                }
                semigroup_table(k, m)[m as usize]
            }
            Residues {
                modulus,
                residues,
                from,
            } => m >= *from && residues.contains(&(m % modulus)),
            Complement(x) => !x.contains(m),
            Union(xs) => xs.iter().any(|x| x.contains(m)),
            Intersection(xs) => xs.iter().all(|x| x.contains(m)),
        }
    }

    /// `(pre, period)` such that membership of `m ≥ pre` depends only on
    /// `m mod period`.
    pub fn periodicity(&self) -> (u64, u64) {
        match self {
            Empty => (1, 1),
            Finite(s) => (s.iter().max().map_or(1, |m| m + 1), 1),
            Progressions(k) => (1, k.iter().fold(1, |a, &b| lcm(a, b))),
            SumClosure(k) => {
                // beyond g·(a·b) every multiple of g is a sum (Frobenius bound)
                let g = k.iter().fold(0, |a, &b| gcd(a, b));
                let lo = k.iter().min().unwrap() / g;
                let hi = k.iter().max().unwrap() / g;
                (g * lo * hi + 1, g)
            }
            Residues { modulus, from, .. } => ((*from).max(1), *modulus),
            Complement(x) => x.periodicity(),
            Union(xs) | Intersection(xs) => xs.iter().fold((1, 1), |(p, q), x| {
                let (a, b) = x.periodicity();
                (p.max(a), lcm(q, b))
            }),
        }
    }

    /// Smallest preperiod and period describing the set.
    pub fn tight_periodicity(&self) -> (u64, u64) {
        let (mut pre, period) = self.periodicity();
        let same = |a: u64, b: u64| self.contains(a) == self.contains(b);
        let mut best = period;
        for d in 1..period {
            if period % d == 0 && (pre..pre + period).all(|m| same(m, m + d)) {
                best = d;
                break;
            }
        }
        while pre > 1 && same(pre - 1, pre - 1 + best) {
            pre -= 1;
        }
        (pre, best)
    }

    pub fn is_infinite(&self) -> bool {
        let (pre, period) = self.periodicity();
        (pre..pre + period).any(|m| self.contains(m))
    }

    pub fn is_empty_set(&self) -> bool {
        !self.is_infinite() && self.members_up_to(self.periodicity().0).is_empty()
    }

    /// Largest member of a finite set.
    pub fn max_finite(&self) -> Option<u64> {
        if self.is_infinite() {
            return None;
        }
        self.members_up_to(self.periodicity().0).into_iter().max()
    }

    pub fn members_up_to(&self, bound: u64) -> BTreeSet<u64> {
        match self {
            SumClosure(k) => {
                let t = semigroup_table(k, bound);
                (1..=bound).filter(|&m| t[m as usize]).collect()
            }
            _ => (1..=bound).filter(|&m| self.contains(m)).collect(),
        }
    }

    /// Extensional equality, decided through a common period.
    pub fn same_as(&self, other: &Self) -> bool {
        let (a, p) = self.periodicity();
        let (b, q) = other.periodicity();
        let end = a.max(b) + lcm(p, q);
        (1..=end).all(|m| self.contains(m) == other.contains(m))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.minus(other).is_empty_set()
    }
}

/// `{m ≤ bound : m is a positive combination of K}`.
pub fn semigroup_set(k: &BTreeSet<u64>, bound: u64) -> Result<BTreeSet<u64>> {
    if k.is_empty() || k.contains(&0) {
        return Err(Error::Precondition("generators must be nonempty positive integers".into()));
    }
    if bound > MAX_BOUND {
        return Err(Error::CapExceeded(format!("bound {bound} above {MAX_BOUND}")));
    }
    Ok(CardinalitySet::SumClosure(k.clone()).members_up_to(bound))
}

/// Result of [`recover_generators`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovered {
    Generators(BTreeSet<u64>),
    /// The sample is not a semigroup truncated at the bound; `missing` is a
    /// forced sum absent from it (or an element that cannot be generated).
    Inconsistent { missing: u64 },
}

/// The minimal generating set whose semigroup, cut at `bound`, is `sample`.
pub fn recover_generators(sample: &BTreeSet<u64>, bound: u64) -> Recovered {
    let mut k = BTreeSet::new();
    for &m in sample.iter().filter(|&&m| m <= bound) {
        if m == 0 {
            return Recovered::Inconsistent { missing: 0 };
        }
        let generated = !k.is_empty() && semigroup_table(&k, m)[m as usize];
        if !generated {
            k.insert(m);
        }
    }
    if k.is_empty() {
        return Recovered::Inconsistent { missing: 0 };
    }
    let closure = semigroup_table(&k, bound);
    for m in 1..=bound {
        if closure[m as usize] && !sample.contains(&m) {
            return Recovered::Inconsistent { missing: m };
        }
    }
    Recovered::Generators(k)
}

/// Outcome of [`validate_complete_pinf`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PinfValidation {
    Ok(Option<u64>),
    Reject { offending: u64, k0: u64 },
}

/// Checks a proposed set of `p_∞` cardinalities. For a complete type all
/// members must be multiples of the least one.
pub fn validate_complete_pinf(k: &BTreeSet<u64>, complete: bool) -> PinfValidation {
    if !complete {
        return PinfValidation::Ok(None);
    }
    let Some(&k0) = k.iter().next() else {
        return PinfValidation::Ok(None);
    };
    match k.iter().find(|&&m| m % k0 != 0) {
        Some(&m) => PinfValidation::Reject { offending: m, k0 },
        None => PinfValidation::Ok(Some(k0)),
    }
}

/// The sum closure of the distinct class sizes.
pub fn chat_from_si_classes(class_sizes: &[u64]) -> Result<CardinalitySet> {
    if class_sizes.is_empty() || class_sizes.contains(&0) {
        return Err(Error::Precondition("class sizes must be nonempty and positive".into()));
    }
    Ok(CardinalitySet::sum_closure(class_sizes.iter().copied()))
}

fn join(xs: &BTreeSet<u64>) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for CardinalitySet {
    /// Finite sets are listed; infinite ones list two periods past the
    /// preperiod followed by `..`, with the period spelled out whenever it
    /// is not the gap between the last two listed members.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_infinite() {
            let m = self.members_up_to(self.periodicity().0);
            return if m.is_empty() {
                f.write_str("\u{2205}")
            } else {
                f.write_str(&join(&m))
            };
        }
        let (pre, period) = self.tight_periodicity();
        let mut shown = self.members_up_to(pre + 2 * period - 1);
        while shown.len() < 2 {
            let next = (shown.iter().max().copied().unwrap_or(0) + 1..)
                .find(|&m| self.contains(m))
                .unwrap();
            shown.insert(next);
        }
        let tail: Vec<u64> = shown.iter().rev().take(2).copied().collect();
        write!(f, "{},..", join(&shown))?;
        if tail[0] - tail[1] != period || (pre..pre + period).filter(|&m| self.contains(m)).count() != 1 {
            write!(f, " (period {period})")?;
        }
        Ok(())
    }
}

impl FromStr for CardinalitySet {
    type Err = Error;

    /// Accepts `∅`, `all`, `Z+`, `kZ+`, `>=n`, `sum(a,b,..)`, explicit lists
    /// and the `..` continuation notation produced by `Display`.
    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Invalid(format!("cannot read cardinality set '{t}'"));
        let nums = |s: &str| -> Result<BTreeSet<u64>> {
            s.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        if t.is_empty() || t == "\u{2205}" || t == "empty" {
            return Ok(Empty);
        }
        if t == "all" || t == "Z+" {
            return Ok(Self::all());
        }
        if let Some(k) = t.strip_suffix("Z+") {
            return Ok(Self::multiples(k.parse().map_err(|_| bad())?));
        }
        if let Some(n) = t.strip_prefix(">=") {
            return Ok(Self::at_least(n.trim().parse().map_err(|_| bad())?));
        }
        if let Some(inner) = t.strip_prefix("sum(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Self::sum_closure(nums(inner)?));
        }
        let (body, period) = match t.split_once("(period") {
            Some((b, p)) => {
                let p = p.trim().trim_end_matches(')').trim();
                (b.trim(), Some(p.parse::<u64>().map_err(|_| bad())?))
            }
            None => (t, None),
        };
        match body.strip_suffix("..") {
            None => Ok(Self::finite(nums(body)?)),
            Some(listed) => {
                let xs: Vec<u64> = nums(listed)?.into_iter().collect();
                if xs.len() < 2 {
                    return Err(bad());
                }
                let last = xs[xs.len() - 1];
                let p = period.unwrap_or(last - xs[xs.len() - 2]);
                if p == 0 {
                    return Err(bad());
                }
                // the last period repeats forever
                let residues: BTreeSet<u64> = xs
                    .iter()
                    .filter(|&&x| x + p > last)
                    .map(|&x| x % p)
                    .collect();
                let head = Self::finite(xs.iter().copied());
                let tail = Residues {
                    modulus: p,
                    residues,
                    from: last + 1,
                };
                Ok(Union(vec![head, tail]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn semigroup_examples() {
        assert_eq!(semigroup_set(&set(&[2]), 10).unwrap(), set(&[2, 4, 6, 8, 10]));
        assert_eq!(semigroup_set(&set(&[2, 3]), 10).unwrap(), (2..=10).collect());
        assert_eq!(semigroup_set(&set(&[5]), 12).unwrap(), set(&[5, 10]));
    }

    #[test]
    fn recovery() {
        assert_eq!(
            recover_generators(&set(&[2, 4, 6, 8, 10]), 10),
            Recovered::Generators(set(&[2]))
        );
        assert_eq!(
            recover_generators(&(2..=10).collect(), 10),
            Recovered::Generators(set(&[2, 3]))
        );
        assert_eq!(
            recover_generators(&set(&[3, 5]), 10),
            Recovered::Inconsistent { missing: 6 }
        );
    }

    #[test]
    fn completeness_validation() {
        assert_eq!(validate_complete_pinf(&set(&[3, 6, 9]), true), PinfValidation::Ok(Some(3)));
        assert_eq!(
            validate_complete_pinf(&set(&[2, 3]), true),
            PinfValidation::Reject { offending: 3, k0: 2 }
        );
        assert_eq!(validate_complete_pinf(&set(&[2, 3]), false), PinfValidation::Ok(None));
    }

    #[test]
    fn display_and_parse() {
        let cases = [
            (CardinalitySet::multiples(2), "2,4,.."),
            (CardinalitySet::all(), "1,2,.."),
            (CardinalitySet::multiples(2).complement(), "1,3,.."),
            (CardinalitySet::at_least(5), "5,6,.."),
            (CardinalitySet::sum_closure([2, 3]), "2,3,.."),
            (CardinalitySet::finite([1, 2, 3, 4]), "1,2,3,4"),
            (CardinalitySet::Empty, "\u{2205}"),
        ];
        for (s, text) in cases {
            assert_eq!(s.to_string(), text);
            assert!(text.parse::<CardinalitySet>().unwrap().same_as(&s), "{text}");
        }
        let odd_pairs = CardinalitySet::Residues {
            modulus: 4,
            residues: set(&[1, 2]),
            from: 1,
        };
        let shown = odd_pairs.to_string();
        assert_eq!(shown, "1,2,5,6,.. (period 4)");
        assert!(shown.parse::<CardinalitySet>().unwrap().same_as(&odd_pairs));
        for text in ["3Z+", ">=7", "sum(4,6)", "all", "2,5,.."] {
            let s: CardinalitySet = text.parse().unwrap();
            assert!(s.to_string().parse::<CardinalitySet>().unwrap().same_as(&s), "{text}");
        }
    }

    #[test]
    fn infinitude_and_subsets() {
        assert!(CardinalitySet::sum_closure([6, 10, 15]).is_infinite());
        assert!(!CardinalitySet::finite([3, 9]).is_infinite());
        assert!(CardinalitySet::multiples(4).is_subset_of(&CardinalitySet::multiples(2)));
        assert!(CardinalitySet::multiples(3).is_subset_of(&CardinalitySet::sum_closure([3, 5])));
        assert!(!CardinalitySet::sum_closure([3, 5]).is_subset_of(&CardinalitySet::multiples(3)));
        assert_eq!(CardinalitySet::finite([2, 7]).max_finite(), Some(7));
    }

    #[test]
    fn class_sizes() {
        let c = chat_from_si_classes(&[2, 2, 3]).unwrap();
        assert_eq!(c, CardinalitySet::sum_closure([2, 3]));
        assert!(chat_from_si_classes(&[1]).unwrap().same_as(&CardinalitySet::all()));
    }
}
