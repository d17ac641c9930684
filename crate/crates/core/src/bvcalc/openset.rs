use serde::{Deserialize, Serialize};

use crate::error::{domain, param, Result};

/// Finite union of disjoint open intervals, sorted by left endpoint.
/// Endpoints may be infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenSet1D {
    intervals: Vec<(f64, f64)>,
}

impl OpenSet1D {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return param("open set needs at least one interval");
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(a, b) in &intervals {
            if a.is_nan() || b.is_nan() || a >= b {
                return param(format!("degenerate interval ({a}, {b})"));
            }
        }
        for w in intervals.windows(2) {
            if w[1].0 < w[0].1 {
                return param(format!(
                    "intervals ({}, {}) and ({}, {}) overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                ));
            }
        }
        Ok(Self { intervals })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    /// The unit interval `(0, 1)`.
    pub fn unit() -> Self {
        Self { intervals: vec![(0.0, 1.0)] }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn inf(&self) -> f64 {
        self.intervals[0].0
    }

    pub fn sup(&self) -> f64 {
        self.intervals[self.intervals.len() - 1].1
    }

    pub fn is_bounded(&self) -> bool {
        self.inf().is_finite() && self.sup().is_finite()
    }

    /// Lebesgue measure (possibly infinite).
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a < x && x < b)
    }

    pub fn closure_contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x <= b)
    }

    /// Whether every interval of `self` lies inside an interval of `other`.
    pub fn is_subset_of(&self, other: &OpenSet1D) -> bool {
        self.intervals
            .iter()
            .all(|&(a, b)| other.intervals.iter().any(|&(c, d)| c <= a && b <= d))
    }

    pub(crate) fn require_subset_of(&self, other: &OpenSet1D) -> Result<()> {
        if self.is_subset_of(other) {
            Ok(())
        } else {
            domain(format!("{self:?} is not contained in {other:?}"))
        }
    }

    /// Intersection with `(-r, r)`.
    pub fn truncated(&self, r: f64) -> Result<Self> {
        let iv: Vec<_> = self
            .intervals
            .iter()
            .map(|&(a, b)| (a.max(-r), b.min(r)))
            .filter(|(a, b)| a < b)
            .collect();
        if iv.is_empty() {
            return domain(format!("open set does not meet (-{r}, {r})"));
        }
        Ok(Self { intervals: iv })
    }

    pub fn union(&self, other: &OpenSet1D) -> Result<Self> {
        let mut iv = self.intervals.clone();
        iv.extend_from_slice(&other.intervals);
        Self::new(iv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates() {
        assert!(OpenSet1D::new(vec![]).is_err());
        assert!(OpenSet1D::new(vec![(1.0, 0.0)]).is_err());
        assert!(OpenSet1D::new(vec![(0.0, 0.6), (0.5, 1.0)]).is_err());
        let s = OpenSet1D::new(vec![(0.5, 1.0), (0.0, 0.5)]).unwrap();
        assert_eq!(s.intervals()[0], (0.0, 0.5));
        assert_eq!(s.measure(), 1.0);
        assert!(!s.contains(0.5));
        assert!(s.closure_contains(0.5));
    }

    #[test]
    fn truncation_and_subsets() {
        let line = OpenSet1D::interval(f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!(!line.is_bounded());
        let t = line.truncated(3.0).unwrap();
        assert_eq!(t.intervals(), &[(-3.0, 3.0)]);
        assert!(OpenSet1D::unit().is_subset_of(&t));
        assert!(!t.is_subset_of(&OpenSet1D::unit()));
    }
}
