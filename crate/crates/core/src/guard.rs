//! Guard functions: finite partial maps from red variable indices to blue
//! variable indices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A finite partial map `i ↦ j` from red indices to blue indices.
///
/// Both index kinds start at 1. The map is stored ordered by red index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuardFunction(BTreeMap<usize, usize>);

impl GuardFunction {
    /// The guard function with empty domain.
    pub fn empty() -> Self {
        GuardFunction(BTreeMap::new())
    }

    /// Builds a guard function from `(i, j)` pairs; later pairs overwrite earlier ones.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        GuardFunction(pairs.into_iter().collect())
    }

    /// The underlying ordered map.
    pub fn map(&self) -> &BTreeMap<usize, usize> {
        &self.0
    }

    /// Value at red index `i`.
    pub fn get(&self, i: usize) -> Option<usize> {
        self.0.get(&i).copied()
    }

    /// Sets the value at `i`.
    pub fn insert(&mut self, i: usize, j: usize) {
        self.0.insert(i, j);
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True iff the domain is empty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Dom(g)`.
    pub fn dom(&self) -> BTreeSet<usize> {
        self.0.keys().copied().collect()
    }

    /// `Img(g)`.
    pub fn img(&self) -> BTreeSet<usize> {
        self.0.values().copied().collect()
    }

    /// Iterates over the entries in ascending red index.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&i, &j)| (i, j))
    }

    /// Restriction `g|_X`.
    pub fn restrict(&self, xs: &BTreeSet<usize>) -> Self {
        GuardFunction(self.0.iter().filter(|(i, _)| xs.contains(i)).map(|(&i, &j)| (i, j)).collect())
    }

    /// `g − X`: the restriction to `Dom(g) ∖ X`.
    pub fn minus(&self, xs: &BTreeSet<usize>) -> Self {
        GuardFunction(self.0.iter().filter(|(i, _)| !xs.contains(i)).map(|(&i, &j)| (i, j)).collect())
    }

    /// `self ∪ other` where `self` takes precedence on common indices.
    pub fn union_prec(&self, other: &GuardFunction) -> Self {
        let mut m = other.0.clone();
        m.extend(self.0.iter().map(|(&i, &j)| (i, j)));
        GuardFunction(m)
    }

    /// True iff the two functions agree on their common domain.
    pub fn compatible(&self, other: &GuardFunction) -> bool {
        self.conflicts(other).is_empty()
    }

    /// Indices on which the two functions disagree.
    pub fn conflicts(&self, other: &GuardFunction) -> Vec<usize> {
        self.0
            .iter()
            .filter(|(i, j)| other.0.get(i).is_some_and(|k| k != *j))
            .map(|(&i, _)| i)
            .collect()
    }

    /// Largest blue index in the image (0 if empty).
    pub fn max_blue(&self) -> usize {
        self.0.values().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for GuardFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (i, j)) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}->{j}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<(usize, usize)> for GuardFunction {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        GuardFunction::from_pairs(iter)
    }
}
