use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{ScalarField, Support};

use super::map::SmoothMap;
use super::multi_index::MultiIndex;
use super::vector::VectorField;

/// Degree-r differential form on a d-dimensional chart, stored sparsely as
/// `Σ_I a_I dx^I` over strictly increasing multi-indices. Absent keys are zero.
#[derive(Clone, Debug)]
pub struct DifferentialForm {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, ScalarField>,
}

fn accumulate(map: &mut BTreeMap<MultiIndex, ScalarField>, idx: MultiIndex, f: ScalarField) {
    if f.is_zero() {
        return;
    }
    match map.remove(&idx) {
        Some(prev) => {
            let s = prev + f;
            if !s.is_zero() {
                map.insert(idx, s);
            }
        }
        None => {
            map.insert(idx, f);
        }
    }
}

impl DifferentialForm {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if degree > dim {
            return Err(Error::DegreeTooLarge { degree, dim });
        }
        Ok(Self {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        })
    }

    /// 0-form given by a function.
    pub fn scalar(dim: usize, f: ScalarField) -> Self {
        let mut coeffs = BTreeMap::new();
        accumulate(&mut coeffs, MultiIndex::empty(), f);
        Self {
            dim,
            degree: 0,
            coeffs,
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::scalar(dim, ScalarField::constant(c))
    }

    /// `f · dx^{a₁} ∧ … ∧ dx^{a_r}` for axes in any order.
    pub fn term(dim: usize, axes: &[usize], f: ScalarField) -> Result<Self> {
        Self::from_terms(dim, axes.len(), [(axes.to_vec(), f)])
    }

    pub fn basis(dim: usize, axes: &[usize]) -> Result<Self> {
        Self::term(dim, axes, ScalarField::one())
    }

    /// Sum of terms; unsorted axes are sorted with the permutation sign
    /// folded into the coefficient, repeated axes contribute nothing.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, ScalarField)>,
    ) -> Result<Self> {
        let mut form = Self::zero(dim, degree)?;
        for (axes, f) in terms {
            if axes.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: axes.len(),
                });
            }
            if let Some((idx, sign)) = MultiIndex::canonicalize(&axes) {
                idx.check(dim)?;
                accumulate(&mut form.coeffs, idx, f.scale(sign));
            }
        }
        Ok(form)
    }

    fn with_coeffs(dim: usize, degree: usize, coeffs: BTreeMap<MultiIndex, ScalarField>) -> Self {
        Self {
            dim,
            degree,
            coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&MultiIndex, &ScalarField)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, idx: &MultiIndex) -> Option<&ScalarField> {
        self.coeffs.get(idx)
    }

    /// Coefficient of `dx^{axes}` with axes in any order (sign-adjusted).
    pub fn component(&self, axes: &[usize]) -> ScalarField {
        match MultiIndex::canonicalize(axes) {
            Some((idx, sign)) => self
                .coeffs
                .get(&idx)
                .map_or_else(ScalarField::zero, |f| f.scale(sign)),
            None => ScalarField::zero(),
        }
    }

    /// Structurally zero (no stored coefficients).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> Vec<(MultiIndex, f64)> {
        self.coeffs
            .iter()
            .map(|(k, f)| (k.clone(), f.eval(x)))
            .collect()
    }

    pub fn eval_component(&self, axes: &[usize], x: &[f64]) -> f64 {
        self.component(axes).eval(x)
    }

    /// `max_I |a_I(x)|`, zero for the zero form.
    pub fn max_abs_at(&self, x: &[f64]) -> f64 {
        self.coeffs
            .values()
            .map(|f| f.eval(x).abs())
            .fold(0.0, f64::max)
    }

    pub fn support(&self) -> Support {
        self.coeffs
            .values()
            .fold(Support::Empty, |acc, f| acc.union(&f.support()))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut coeffs = self.coeffs.clone();
        for (k, f) in &other.coeffs {
            accumulate(&mut coeffs, k.clone(), f.clone());
        }
        Ok(Self::with_coeffs(self.dim, self.degree, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_coefficients(|f| f.scale(c))
    }

    /// Multiply by a 0-form given as a field.
    pub fn mul_field(&self, g: &ScalarField) -> Self {
        self.map_coefficients(|f| f.mul(g))
    }

    /// Apply `op` to each coefficient, pruning results that fold to zero.
    pub fn map_coefficients(&self, op: impl Fn(&ScalarField) -> ScalarField) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, f) in &self.coeffs {
            accumulate(&mut coeffs, k.clone(), op(f));
        }
        Self::with_coeffs(self.dim, self.degree, coeffs)
    }

    /// Re-key and re-map coefficients onto a chart of dimension `dim`.
    pub(crate) fn rebuild(
        &self,
        dim: usize,
        reindex: impl Fn(&MultiIndex) -> Option<MultiIndex>,
        op: impl Fn(&ScalarField) -> ScalarField,
    ) -> Self {
        let mut coeffs = BTreeMap::new();
        let mut degree = self.degree;
        for (k, f) in &self.coeffs {
            if let Some(nk) = reindex(k) {
                degree = nk.len();
                accumulate(&mut coeffs, nk, op(f));
            }
        }
        Self::with_coeffs(dim, degree, coeffs)
    }

    pub(crate) fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    /// `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let degree = self.degree + other.degree;
        if degree > self.dim {
            return Err(Error::DegreeTooLarge {
                degree,
                dim: self.dim,
            });
        }
        let mut coeffs = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                if let Some((k, sign)) = i.merge(j) {
                    accumulate(&mut coeffs, k, a.mul(b).scale(sign));
                }
            }
        }
        Ok(Self::with_coeffs(self.dim, degree, coeffs))
    }

    /// Exterior derivative. For a top-degree form there is no higher slot and
    /// the zero form of degree `dim` is returned.
    pub fn exterior_derivative(&self) -> Self {
        if self.degree >= self.dim {
            return Self::with_coeffs(self.dim, self.dim, BTreeMap::new());
        }
        let mut coeffs = BTreeMap::new();
        for (idx, f) in &self.coeffs {
            for axis in (0..self.dim).filter(|a| !idx.contains(*a)) {
                let df = f.partial(axis);
                if df.is_zero() {
                    continue;
                }
                let (k, sign) = idx.insert_front(axis).expect("axis not in index");
                accumulate(&mut coeffs, k, df.scale(sign));
            }
        }
        Self::with_coeffs(self.dim, self.degree + 1, coeffs)
    }

    /// Interior product `v ⌟ self`.
    pub fn contract(&self, v: &VectorField) -> Result<Self> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        if self.degree == 0 {
            return Err(Error::ContractZeroForm);
        }
        let mut coeffs = BTreeMap::new();
        for (idx, f) in &self.coeffs {
            for (pos, &axis) in idx.axes().iter().enumerate() {
                let vc = &v.components()[axis];
                if vc.is_zero() {
                    continue;
                }
                let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                accumulate(&mut coeffs, idx.remove_at(pos), vc.mul(f).scale(sign));
            }
        }
        Ok(Self::with_coeffs(self.dim, self.degree - 1, coeffs))
    }

    /// Pullback along a map from a k-dimensional parameter space into this
    /// chart. Degrees above k have no slot and are rejected.
    pub fn pullback(&self, map: &SmoothMap) -> Result<Self> {
        if map.target_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: map.target_dim(),
            });
        }
        let k = map.source_dim();
        if self.degree > k {
            return Err(Error::DegreeTooLarge {
                degree: self.degree,
                dim: k,
            });
        }
        let jac = map.jacobian();
        let mut coeffs = BTreeMap::new();
        let targets = increasing_subsets(k, self.degree);
        for (idx, f) in &self.coeffs {
            let pulled = f.compose(map.components());
            for cols in &targets {
                let minor = determinant_field(&jac, idx.axes(), cols);
                if minor.is_zero() {
                    continue;
                }
                accumulate(
                    &mut coeffs,
                    MultiIndex::new(cols.clone()).expect("increasing"),
                    pulled.mul(&minor),
                );
            }
        }
        Ok(Self::with_coeffs(k, self.degree, coeffs))
    }

    /// Evaluate `F*(self)` on the unit parameter r-vector at a point, given
    /// `x = F(u)` and the Jacobian values `jac[target][source]`. Only the full
    /// parameter index is produced, so `self.degree` must equal the
    /// parameter dimension.
    pub(crate) fn pulled_top_value(&self, x: &[f64], jac: &[Vec<f64>]) -> f64 {
        let k = self.degree;
        let mut total = 0.0;
        for (idx, f) in &self.coeffs {
            let a = f.eval(x);
            if a == 0.0 {
                continue;
            }
            let det = if k == 0 {
                1.0
            } else {
                let rows = idx.axes();
                let mut m = [[0.0f64; 4]; 4];
                debug_assert!(k <= 4);
                for (r, &row) in rows.iter().enumerate() {
                    for c in 0..k {
                        m[r][c] = jac[row][c];
                    }
                }
                small_det(&m, k)
            };
            total += a * det;
        }
        total
    }
}

/// All strictly increasing subsets of `0..n` of size `r`.
pub(crate) fn increasing_subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    if n == 0 {
        return vec![(Vec::new(), 1.0)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // moving n-1 from the end to `pos` is (len - pos) transpositions
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Leibniz expansion of `det(jac[rows][cols])` as a field.
fn determinant_field(jac: &[Vec<ScalarField>], rows: &[usize], cols: &[usize]) -> ScalarField {
    let r = rows.len();
    if r == 0 {
        return ScalarField::one();
    }
    ScalarField::sum(permutations(r).into_iter().map(|(perm, sign)| {
        let mut term = ScalarField::constant(sign);
        for (i, &p) in perm.iter().enumerate() {
            term = term.mul(&jac[rows[i]][cols[p]]);
            if term.is_zero() {
                break;
            }
        }
        term
    }))
}

fn small_det(m: &[[f64; 4]; 4], k: usize) -> f64 {
    match k {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => {
            let mut det = 0.0;
            for (perm, sign) in permutations(k) {
                let mut p = sign;
                for (i, &j) in perm.iter().enumerate() {
                    p *= m[i][j];
                }
                det += p;
            }
            det
        }
    }
}
