//! Finite unions of closed 1-D intervals.
//!
//! Cross-sections of 2-D domains along vertical lines and intersections of
//! rays with domains are both represented this way.

use crate::Real;

/// Sorted, pairwise-disjoint list of intervals `[a, b]` with `a < b`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct IntervalSet<T> {
    parts: Vec<(T, T)>,
}

impl<T: Real> IntervalSet<T> {
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn single(a: T, b: T) -> Self {
        if b > a {
            Self { parts: vec![(a, b)] }
        } else {
            Self::empty()
        }
    }

    /// Normalizes an arbitrary list of intervals (overlapping ones merged).
    pub fn from_unsorted(mut raw: Vec<(T, T)>) -> Self {
        raw.retain(|&(a, b)| b > a);
        raw.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite interval"));
        let mut parts: Vec<(T, T)> = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            match parts.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => parts.push((a, b)),
            }
        }
        Self { parts }
    }

    pub fn parts(&self) -> &[(T, T)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn length(&self) -> T {
        self.parts.iter().fold(T::zero(), |acc, &(a, b)| acc + (b - a))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut raw = self.parts.clone();
        raw.extend_from_slice(&other.parts);
        Self::from_unsorted(raw)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a0, a1) = self.parts[i];
            let (b0, b1) = other.parts[j];
            let lo = if a0 > b0 { a0 } else { b0 };
            let hi = if a1 < b1 { a1 } else { b1 };
            if hi > lo {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { parts: out }
    }

    /// Restricts to `[lo, hi]`.
    pub fn clip(&self, lo: T, hi: T) -> Self {
        self.intersection(&Self::single(lo, hi))
    }

    pub fn contains(&self, t: T) -> bool {
        self.parts.iter().any(|&(a, b)| a <= t && t <= b)
    }

    /// Maps `u ∈ [0, length]` to the corresponding point of the set.
    pub fn point_at_length(&self, mut u: T) -> Option<T> {
        for &(a, b) in &self.parts {
            let len = b - a;
            if u <= len {
                return Some(a + u);
            }
            u -= len;
        }
        self.parts.last().map(|&(_, b)| b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn merge_and_intersect() {
        let a = IntervalSet::from_unsorted(vec![(3.0, 4.0), (0.0, 1.0), (0.5, 2.0)]);
        assert_eq!(a.parts(), &[(0.0, 2.0), (3.0, 4.0)]);
        let b = IntervalSet::from_unsorted(vec![(1.5, 3.5)]);
        assert_eq!(a.intersection(&b).parts(), &[(1.5, 2.0), (3.0, 3.5)]);
        assert_eq!(a.union(&b).parts(), &[(0.0, 4.0)]);
        assert_eq!(a.length(), 3.0);
        assert_eq!(a.point_at_length(2.5), Some(3.5));
    }

    proptest! {
        #[test]
        fn inclusion_exclusion(raw_a in prop::collection::vec((-10.0f64..10.0, 0.0f64..3.0), 0..6),
                               raw_b in prop::collection::vec((-10.0f64..10.0, 0.0f64..3.0), 0..6)) {
            let a = IntervalSet::from_unsorted(raw_a.iter().map(|&(s, l)| (s, s + l)).collect());
            let b = IntervalSet::from_unsorted(raw_b.iter().map(|&(s, l)| (s, s + l)).collect());
            let lhs = a.union(&b).length() + a.intersection(&b).length();
            let rhs = a.length() + b.length();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }
    }
}
