use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::SmoothMap;
use crate::field::ScalarField;

/// Oriented image of a parameter box under a smooth map.
///
/// A periodic parameter axis closes up (e.g. an angle over a full turn); its
/// two faces cancel and are left out of the boundary.
#[derive(Clone, Debug)]
pub struct ParamCell {
    map: SmoothMap,
    lo: Vec<f64>,
    hi: Vec<f64>,
    periodic: Vec<bool>,
    orientation: f64,
    jacobian: Arc<Vec<Vec<ScalarField>>>,
}

impl ParamCell {
    pub fn new(map: SmoothMap, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let k = map.source_dim();
        if lo.len() != k || hi.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: lo.len().min(hi.len()),
            });
        }
        if let Some(axis) = (0..k).find(|&i| !(lo[i] < hi[i])) {
            return Err(Error::InvalidDomain(format!(
                "parameter axis {axis}: need lower < upper"
            )));
        }
        let jacobian = Arc::new(map.jacobian());
        Ok(Self {
            map,
            lo,
            hi,
            periodic: vec![false; k],
            orientation: 1.0,
            jacobian,
        })
    }

    /// A 0-cell sitting at `p`.
    pub fn point(p: &[f64]) -> Self {
        Self::new(SmoothMap::point(p), Vec::new(), Vec::new()).expect("0-cell")
    }

    /// Straight segment from `a` to `b`, parameterized over `[0, 1]`.
    pub fn segment(a: &[f64], b: &[f64]) -> Self {
        let edge: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        Self::new(SmoothMap::affine(a, &[edge]), vec![0.0], vec![1.0]).expect("segment")
    }

    /// Axis-aligned box mapped identically.
    pub fn axis_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        Self::new(SmoothMap::identity(lo.len()), lo, hi)
    }

    pub fn with_periodic(mut self, axis: usize) -> Self {
        self.periodic[axis] = true;
        self
    }

    pub fn reversed(mut self) -> Self {
        self.orientation = -self.orientation;
        self
    }

    pub fn param_dim(&self) -> usize {
        self.lo.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.map.target_dim()
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn lower(&self) -> &[f64] {
        &self.lo
    }

    pub fn upper(&self) -> &[f64] {
        &self.hi
    }

    pub fn is_periodic(&self, axis: usize) -> bool {
        self.periodic[axis]
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub(crate) fn jacobian_fields(&self) -> &[Vec<ScalarField>] {
        &self.jacobian
    }

    pub fn eval(&self, u: &[f64]) -> Vec<f64> {
        self.map.eval(u)
    }

    /// Oriented faces of the parameter box, outward normal first: the face at
    /// the upper end of axis i carries orientation `(-1)^i`, the lower face
    /// the opposite sign. Periodic axes contribute nothing.
    pub fn faces(&self) -> Vec<ParamCell> {
        let k = self.param_dim();
        let mut out = Vec::new();
        for axis in (0..k).filter(|&a| !self.periodic[a]) {
            let base = if axis % 2 == 0 { 1.0 } else { -1.0 };
            for (value, sign) in [(self.lo[axis], -base), (self.hi[axis], base)] {
                let insertion = SmoothMap::new(
                    k - 1,
                    (0..k)
                        .map(|j| match j.cmp(&axis) {
                            std::cmp::Ordering::Less => ScalarField::coord(j),
                            std::cmp::Ordering::Equal => ScalarField::constant(value),
                            std::cmp::Ordering::Greater => ScalarField::coord(j - 1),
                        })
                        .collect(),
                );
                let drop = |v: &[f64]| -> Vec<f64> {
                    v.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != axis)
                        .map(|(_, x)| *x)
                        .collect()
                };
                let mut face =
                    ParamCell::new(self.map.after(&insertion), drop(&self.lo), drop(&self.hi))
                        .expect("face of a valid cell");
                face.periodic = self
                    .periodic
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != axis)
                    .map(|(_, p)| *p)
                    .collect();
                face.orientation = self.orientation * sign;
                out.push(face);
            }
        }
        out
    }
}

/// Weighted formal sum of oriented cells of a common dimension.
#[derive(Clone, Debug)]
pub struct Chain {
    dim: usize,
    ambient: usize,
    cells: Vec<(ParamCell, f64)>,
}

impl Chain {
    pub fn empty(dim: usize, ambient: usize) -> Self {
        Self {
            dim,
            ambient,
            cells: Vec::new(),
        }
    }

    pub fn new(cells: Vec<(ParamCell, f64)>) -> Result<Self> {
        let first = cells
            .first()
            .ok_or_else(|| Error::InvalidDomain("a chain needs at least one cell".into()))?;
        let (dim, ambient) = (first.0.param_dim(), first.0.ambient_dim());
        for (c, _) in &cells {
            if c.param_dim() != dim {
                return Err(Error::DegreeMismatch {
                    expected: dim,
                    found: c.param_dim(),
                });
            }
            if c.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: c.ambient_dim(),
                });
            }
        }
        Ok(Self {
            dim,
            ambient,
            cells,
        })
    }

    pub fn single(cell: ParamCell) -> Self {
        Self::new(vec![(cell, 1.0)]).expect("one cell")
    }

    /// Weighted 0-chain of points.
    pub fn points(points: &[(Vec<f64>, f64)]) -> Result<Self> {
        Self::new(
            points
                .iter()
                .map(|(p, w)| (ParamCell::point(p), *w))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn cells(&self) -> &[(ParamCell, f64)] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn plus(&self, other: &Chain) -> Result<Chain> {
        if other.dim != self.dim {
            return Err(Error::DegreeMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(Chain {
            cells,
            ..self.clone()
        })
    }

    pub fn scaled(&self, c: f64) -> Chain {
        Chain {
            cells: self
                .cells
                .iter()
                .map(|(cell, w)| (cell.clone(), w * c))
                .collect(),
            ..self.clone()
        }
    }

    /// Oriented boundary, cell by cell.
    pub fn boundary(&self) -> Result<Chain> {
        if self.dim == 0 {
            return Err(Error::DegreeTooLarge { degree: 1, dim: 0 });
        }
        let cells = self
            .cells
            .iter()
            .flat_map(|(cell, w)| cell.faces().into_iter().map(move |f| (f, *w)))
            .collect();
        Ok(Chain {
            dim: self.dim - 1,
            ambient: self.ambient,
            cells,
        })
    }
}

/// Convenience: oriented boundary of a chain.
pub fn chain_boundary(c: &Chain) -> Result<Chain> {
    c.boundary()
}
