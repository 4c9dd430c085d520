//! Finite sets of positive integers and their index combinatorics.
//!
//! Conventions for the empty set: `u = v = 0`, `σ = ℕ`, `s = 1`, `F↓ = ∅`,
//! admissible; the involution is undefined on it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `F = {f_1 < ... < f_k}` with every `f_i ≥ 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct FiniteSet {
    elems: Vec<u32>,
}

/// The offsets attached to a set and the degrees its sequence skips.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetIndices {
    pub u: u64,
    pub v: u64,
    /// `{u + f : f ∈ F}`, the gaps of `σ_F` above `u`.
    pub excluded: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivedSets {
    pub s: usize,
    /// `F \ {f_i}` for `i = 1..k`.
    pub dropped: Vec<FiniteSet>,
    pub down: FiniteSet,
    /// Whether `F↓ = I(G \ {g_m})` with `G = I(F)` (vacuously true for ∅).
    pub down_is_involution_of_reduced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// Maximal runs of consecutive integers, in increasing order.
    pub blocks: Vec<Vec<u32>>,
}

impl FiniteSet {
    pub fn new(elems: Vec<u32>) -> Result<Self> {
        if elems.first() == Some(&0) {
            return Err(Error::InvalidSet("elements must be positive".into()));
        }
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet(format!("{elems:?} is not strictly increasing")));
        }
        Ok(Self { elems })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `{1, 2, ..., k}`.
    pub fn segment(k: u32) -> Self {
        Self {
            elems: (1..=k).collect(),
        }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn k(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn largest(&self) -> Option<u32> {
        self.elems.last().copied()
    }

    pub fn contains(&self, f: u32) -> bool {
        self.elems.binary_search(&f).is_ok()
    }

    /// Whether `F = {1, ..., k}` (including `k = 0`).
    pub fn is_segment(&self) -> bool {
        self.elems.iter().enumerate().all(|(i, &f)| f as usize == i + 1)
    }

    /// `u_F = Σf − C(k+1, 2)`.
    pub fn u(&self) -> u64 {
        let k = self.k() as u64;
        self.elems.iter().map(|&f| f as u64).sum::<u64>() - k * (k + 1) / 2
    }

    /// `v_F = u_F + f_k + 1`; zero for the empty set.
    pub fn v(&self) -> u64 {
        match self.largest() {
            Some(fk) => self.u() + fk as u64 + 1,
            None => 0,
        }
    }

    pub fn indices(&self) -> SetIndices {
        let u = self.u();
        SetIndices {
            u,
            v: self.v(),
            excluded: self.elems.iter().map(|&f| u + f as u64).collect(),
        }
    }

    pub fn in_sigma(&self, n: u64) -> bool {
        let u = self.u();
        n >= u && !(n > u && n - u <= u32::MAX as u64 && self.contains((n - u) as u32))
    }

    /// `σ_F` in increasing order (infinite).
    pub fn sigma(&self) -> impl Iterator<Item = u64> + '_ {
        (self.u()..).filter(move |&n| self.in_sigma(n))
    }

    /// Elements of `σ_F` in `[lo, hi]`.
    pub fn sigma_range(&self, lo: u64, hi: u64) -> Vec<u64> {
        (lo.max(self.u())..=hi).filter(|&n| self.in_sigma(n)).collect()
    }

    /// `I(F) = {1..f_k} \ {f_k − f : f ∈ F}`.
    pub fn involution(&self) -> Result<Self> {
        let fk = self.largest().ok_or(Error::EmptySet)?;
        let elems = (1..=fk).filter(|&j| !self.contains(fk - j)).collect();
        Ok(Self { elems })
    }

    /// `s_F` (1 for ∅, `k+1` for a segment, else the least `s` with `s < f_s`).
    pub fn s(&self) -> usize {
        if self.is_empty() {
            return 1;
        }
        if self.is_segment() {
            return self.k() + 1;
        }
        (1..=self.k())
            .find(|&s| (s as u32) < self.elems[s - 1])
            .expect("a non-segment has a gap")
    }

    /// `F \ {f_i}` for 1-based `i`.
    pub fn drop(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.k() {
            return Err(Error::IndexOutOfRange(format!("element {i} of a {}-element set", self.k())));
        }
        let mut elems = self.elems.clone();
        elems.remove(i - 1);
        Ok(Self { elems })
    }

    /// `F \ {f_k}`; the empty set stays empty.
    pub fn drop_last(&self) -> Self {
        let mut elems = self.elems.clone();
        elems.pop();
        Self { elems }
    }

    /// `F↓ = {f_s − s, ..., f_k − s}`, or ∅ for a segment.
    pub fn down(&self) -> Self {
        if self.is_segment() {
            return Self::empty();
        }
        let s = self.s();
        Self {
            elems: self.elems[s - 1..].iter().map(|&f| f - s as u32).collect(),
        }
    }

    pub fn derived_sets(&self) -> DerivedSets {
        let down = self.down();
        let check = match self.involution() {
            Ok(g) => {
                let reduced = g.drop_last();
                let back = if reduced.is_empty() {
                    Self::empty()
                } else {
                    reduced.involution().expect("nonempty")
                };
                back == down
            }
            Err(_) => true,
        };
        DerivedSets {
            s: self.s(),
            dropped: (1..=self.k()).map(|i| self.drop(i).expect("in range")).collect(),
            down,
            down_is_involution_of_reduced: check,
        }
    }

    pub fn admissibility(&self) -> Admissibility {
        let mut blocks: Vec<Vec<u32>> = Vec::new();
        for &f in &self.elems {
            match blocks.last_mut() {
                Some(b) if *b.last().expect("blocks are nonempty") + 1 == f => b.push(f),
                _ => blocks.push(vec![f]),
            }
        }
        Admissibility {
            admissible: blocks.iter().all(|b| b.len() % 2 == 0),
            blocks,
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility().admissible
    }

    /// All nonempty sets with maximum at most `n`, ordered by size then lexicographically.
    pub fn all_with_max(n: u32) -> Vec<Self> {
        assert!(n < 32, "enumeration limited to maxima below 32");
        let mut out: Vec<Self> = (1u64..1 << n)
            .map(|mask| Self {
                elems: (1..=n).filter(|&j| mask & (1 << (j - 1)) != 0).collect(),
            })
            .collect();
        out.sort_by(|a, b| a.k().cmp(&b.k()).then_with(|| a.elems.cmp(&b.elems)));
        out
    }

    /// Comma-separated form accepted by [`FromStr`].
    pub fn to_list(&self) -> String {
        self.elems.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

/// The set `{λ_j + 2j − 2, λ_j + 2j − 1 : j = 1..l}` attached to a partition.
pub fn partition_to_set(lambda: &[u32]) -> Result<FiniteSet> {
    if lambda.first() == Some(&0) || lambda.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(format!(
            "{lambda:?} must be a non-decreasing sequence of positive integers"
        )));
    }
    let elems = lambda
        .iter()
        .enumerate()
        .flat_map(|(i, &l)| {
            let j = i as u32 + 1;
            [l + 2 * j - 2, l + 2 * j - 1]
        })
        .collect();
    FiniteSet::new(elems)
}

impl TryFrom<Vec<u32>> for FiniteSet {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FiniteSet> for Vec<u32> {
    fn from(f: FiniteSet) -> Self {
        f.elems
    }
}

impl FromStr for FiniteSet {
    type Err = Error;
    /// Parses `"1,2,5,6"`; the empty string (or `"{}"`) is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let elems = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidSet(format!("cannot parse {t:?} as a positive integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(elems)
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_list())
    }
}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FiniteSet {
        s.parse().unwrap()
    }

    #[test]
    fn indices_examples() {
        let e = FiniteSet::empty();
        assert_eq!((e.u(), e.v()), (0, 0));
        assert!(e.in_sigma(0) && e.in_sigma(7));
        let f = fs("1,2");
        assert_eq!((f.u(), f.v()), (0, 3));
        assert_eq!(f.sigma().take(4).collect::<Vec<_>>(), vec![0, 3, 4, 5]);
        let g = fs("2,3");
        assert_eq!((g.u(), g.v()), (2, 6));
        assert_eq!(g.sigma().take(4).collect::<Vec<_>>(), vec![2, 3, 6, 7]);
        assert_eq!(g.indices().excluded, vec![4, 5]);
    }

    #[test]
    fn involution_examples() {
        assert_eq!(fs("1,2,3,4").involution().unwrap(), fs("4"));
        assert_eq!(fs("1,5").involution().unwrap(), fs("1,2,3,5"));
        assert_eq!(FiniteSet::empty().involution(), Err(Error::EmptySet));
        for f in FiniteSet::all_with_max(8) {
            let g = f.involution().unwrap();
            assert_eq!(g.involution().unwrap(), f);
            assert_eq!(g.largest(), f.largest());
            assert_eq!(g.k(), f.largest().unwrap() as usize - f.k() + 1);
        }
    }

    #[test]
    fn derived_examples() {
        let seg = fs("1,2,3");
        assert_eq!(seg.s(), 4);
        assert_eq!(seg.down(), FiniteSet::empty());
        assert_eq!(fs("2,3").s(), 1);
        assert_eq!(fs("2,3").down(), fs("1,2"));
        assert_eq!(FiniteSet::empty().s(), 1);
        assert_eq!(fs("1,2,5").down(), fs("2"));
        let d = fs("1,3,4").derived_sets();
        assert_eq!(d.dropped, vec![fs("3,4"), fs("1,4"), fs("1,3")]);
        assert!(d.down_is_involution_of_reduced);
    }

    #[test]
    fn admissibility_examples() {
        let a = fs("1,2").admissibility();
        assert!(a.admissible);
        assert_eq!(a.blocks, vec![vec![1, 2]]);
        assert!(!fs("1").is_admissible());
        let b = fs("1,2,4,5").admissibility();
        assert!(b.admissible);
        assert_eq!(b.blocks, vec![vec![1, 2], vec![4, 5]]);
        assert!(FiniteSet::empty().is_admissible());
    }

    #[test]
    fn partitions() {
        assert_eq!(partition_to_set(&[1]).unwrap(), fs("1,2"));
        assert_eq!(partition_to_set(&[2, 2]).unwrap(), fs("2,3,4,5"));
        assert!(partition_to_set(&[2, 1]).is_err());
        assert!(partition_to_set(&[1, 3, 3]).unwrap().is_admissible());
    }

    #[test]
    fn parsing_and_serde() {
        assert!("2,1".parse::<FiniteSet>().is_err());
        assert!("0,1".parse::<FiniteSet>().is_err());
        assert!("1,x".parse::<FiniteSet>().is_err());
        assert_eq!("".parse::<FiniteSet>().unwrap(), FiniteSet::empty());
        let f = fs("1, 2,5,6");
        assert_eq!(serde_json::to_string(&f).unwrap(), "[1,2,5,6]");
        assert_eq!(serde_json::from_str::<FiniteSet>("[1,2,5,6]").unwrap(), f);
        assert!(serde_json::from_str::<FiniteSet>("[3,3]").is_err());
        assert_eq!(f.to_string(), "{1,2,5,6}");
        assert_eq!(FiniteSet::all_with_max(8).len(), 255);
    }
}
