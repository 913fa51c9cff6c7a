use std::fmt;

use crate::error::{Error, Result};

/// Strictly increasing list of chart axes indexing a basis r-covector
/// `dx^{i₁} ∧ … ∧ dx^{i_r}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Build from axes that are already strictly increasing.
    pub fn new(axes: Vec<usize>) -> Option<Self> {
        axes.windows(2)
            .all(|w| w[0] < w[1])
            .then_some(MultiIndex(axes))
    }

    /// Sort arbitrary axes, returning the index and the sign of the sorting
    /// permutation, or `None` when an axis repeats (the wedge vanishes).
    pub fn canonicalize(axes: &[usize]) -> Option<(Self, f64)> {
        let mut v = axes.to_vec();
        let mut sign = 1.0;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((MultiIndex(v), sign))
    }

    /// Full index `0..dim` of a top-degree form.
    pub fn top(dim: usize) -> Self {
        MultiIndex((0..dim).collect())
    }

    pub fn axes(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, axis: usize) -> bool {
        self.0.binary_search(&axis).is_ok()
    }

    pub(crate) fn check(&self, dim: usize) -> Result<()> {
        match self.0.iter().find(|&&a| a >= dim) {
            Some(&axis) => Err(Error::AxisOutOfRange { axis, dim }),
            None => Ok(()),
        }
    }

    /// Merge two indices for `dx^I ∧ dx^J`: the merged index and the sign of
    /// the shuffle, or `None` if they share an axis.
    pub fn merge(&self, other: &MultiIndex) -> Option<(MultiIndex, f64)> {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let mut inversions = 0usize;
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i] < other.0[j]) {
                out.push(self.0[i]);
                i += 1;
            } else if i == self.0.len() || other.0[j] < self.0[i] {
                // other[j] jumps over the remaining elements of self
                inversions += self.0.len() - i;
                out.push(other.0[j]);
                j += 1;
            } else {
                return None;
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        Some((MultiIndex(out), sign))
    }

    /// Insert `axis` in front (`dx^axis ∧ dx^I`); returns the sign of moving
    /// it into place.
    pub fn insert_front(&self, axis: usize) -> Option<(MultiIndex, f64)> {
        MultiIndex(vec![axis]).merge(self)
    }

    /// Remove the entry at `position`.
    pub fn remove_at(&self, position: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.remove(position);
        MultiIndex(v)
    }

    /// Axes of `0..dim` not in this index, increasing.
    pub fn complement(&self, dim: usize) -> MultiIndex {
        MultiIndex((0..dim).filter(|a| !self.contains(*a)).collect())
    }

    pub fn shifted(&self, offset: isize) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .map(|&a| (a as isize + offset) as usize)
                .collect(),
        )
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|a| format!("dx{a}")).collect();
        write!(f, "{}", parts.join("∧"))
    }
}
