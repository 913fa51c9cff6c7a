use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Aabb;

use super::cell::ParamCell;

/// Box-shaped coordinate chart domain.
///
/// Periodic axes (angles) wrap; an exclusion on an axis marks an open lower
/// bound of the underlying manifold (e.g. `r > 0`) that the box must stay
/// strictly above.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartDomain {
    bounds: Vec<(f64, f64)>,
    periodic: Vec<bool>,
    excluded: Vec<Option<f64>>,
}

impl ChartDomain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self> {
        for (axis, (lo, hi)) in bounds.iter().enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidDomain(format!(
                    "axis {axis}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        let d = bounds.len();
        Ok(Self {
            bounds,
            periodic: vec![false; d],
            excluded: vec![None; d],
        })
    }

    pub fn with_periodic(mut self, axis: usize) -> Result<Self> {
        self.check_axis(axis)?;
        self.periodic[axis] = true;
        Ok(self)
    }

    /// Require the box to stay strictly above `value` along `axis`.
    pub fn with_exclusion(mut self, axis: usize, value: f64) -> Result<Self> {
        self.check_axis(axis)?;
        if !(self.bounds[axis].0 > value) {
            return Err(Error::InvalidDomain(format!(
                "axis {axis} must stay above the excluded value {value}, lower bound is {}",
                self.bounds[axis].0
            )));
        }
        self.excluded[axis] = Some(value);
        Ok(self)
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.dim() {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn is_periodic(&self, axis: usize) -> bool {
        self.periodic[axis]
    }

    pub fn exclusion(&self, axis: usize) -> Option<f64> {
        self.excluded[axis]
    }

    pub fn aabb(&self) -> Aabb {
        Aabb::new(
            self.bounds.iter().map(|b| b.0).collect(),
            self.bounds.iter().map(|b| b.1).collect(),
        )
    }

    /// Closed-box membership; periodic axes accept any value.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().enumerate().all(|(i, &v)| {
                let (lo, hi) = self.bounds[i];
                v.is_finite() && (self.periodic[i] || (lo <= v && v <= hi))
            })
    }

    /// Strict interior membership with a margin on every non-periodic axis.
    pub fn contains_ball(&self, center: &[f64], radius: f64) -> bool {
        center.len() == self.dim()
            && center.iter().enumerate().all(|(i, &c)| {
                let (lo, hi) = self.bounds[i];
                lo < c - radius && c + radius < hi
            })
    }

    /// Map periodic coordinates back into `[lo, hi)`.
    pub fn wrap(&self, x: &mut [f64]) {
        for (i, v) in x.iter_mut().enumerate() {
            if self.periodic[i] {
                let (lo, hi) = self.bounds[i];
                let period = hi - lo;
                *v = lo + (*v - lo).rem_euclid(period);
            }
        }
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Vec<f64>> {
        (0..n)
            .map(|_| {
                self.bounds
                    .iter()
                    .map(|&(lo, hi)| rng.gen_range(lo..hi))
                    .collect()
            })
            .collect()
    }

    /// The whole domain as one identity-mapped cell; periodic axes carry over.
    pub fn to_cell(&self) -> ParamCell {
        let lo = self.bounds.iter().map(|b| b.0).collect();
        let hi = self.bounds.iter().map(|b| b.1).collect();
        let mut cell = ParamCell::new(crate::exterior::SmoothMap::identity(self.dim()), lo, hi)
            .expect("valid bounds");
        for axis in (0..self.dim()).filter(|&a| self.periodic[a]) {
            cell = cell.with_periodic(axis);
        }
        cell
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn validation() {
        assert!(ChartDomain::new(vec![(1.0, 0.0)]).is_err());
        let d = ChartDomain::new(vec![(0.2, 4.0), (0.0, 2.0 * PI)]).unwrap();
        assert!(d.clone().with_exclusion(0, 0.0).is_ok());
        assert!(d.clone().with_exclusion(0, 0.5).is_err());
        assert!(d.clone().with_periodic(5).is_err());
    }

    #[test]
    fn wrap_and_contains() {
        let d = ChartDomain::new(vec![(0.2, 4.0), (0.0, 2.0 * PI)])
            .unwrap()
            .with_periodic(1)
            .unwrap();
        let mut x = [1.0, 2.0 * PI + 0.5];
        assert!(d.contains(&x));
        d.wrap(&mut x);
        assert!((x[1] - 0.5).abs() < 1e-12);
        assert!(!d.contains(&[0.1, 0.0]));
        assert!(d.contains_ball(&[1.0, 1.0], 0.5));
        assert!(!d.contains_ball(&[0.5, 1.0], 0.4));
    }
}
