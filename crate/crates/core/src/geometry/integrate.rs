use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exterior::DifferentialForm;
use crate::field::{Aabb, Support};

use super::cell::{Chain, ParamCell};
use super::quadrature::{compensated_sum, GaussRule, Quadrature};

/// `∫_c a` by composite Gauss–Legendre quadrature of the pulled-back form on
/// each cell's parameter box.
///
/// When `a` has bounded support, the parameter box is first narrowed to the
/// subcells whose image can meet it, then covered by
/// `quad.support_subcells` subcells per axis; those that meet the support are
/// refined by `quad.support_refine` per axis and the rest are skipped.
/// Subcell results are summed in a fixed order, so parallel and serial runs
/// agree bit for bit.
pub fn integrate(a: &DifferentialForm, c: &Chain, quad: &Quadrature) -> Result<f64> {
    if a.degree() != c.dim() {
        return Err(Error::DegreeMismatch {
            expected: c.dim(),
            found: a.degree(),
        });
    }
    if a.dim() != c.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: c.ambient_dim(),
            found: a.dim(),
        });
    }
    let support = a.support();
    if support.is_empty() || c.is_empty() {
        return Ok(0.0);
    }
    let rule = quad.rule();
    Ok(compensated_sum(c.cells().iter().map(|(cell, w)| {
        cell.orientation() * w * integrate_cell(a, cell, quad, &rule, &support)
    })))
}

fn integrate_cell(
    a: &DifferentialForm,
    cell: &ParamCell,
    quad: &Quadrature,
    rule: &GaussRule,
    support: &Support,
) -> f64 {
    let k = cell.param_dim();
    if k == 0 {
        let x = cell.eval(&[]);
        if let Support::Bounded(bx) = support {
            if !point_box(&x).intersects(bx) {
                return 0.0;
            }
        }
        return a.pulled_top_value(&x, &[]);
    }
    let Support::Bounded(bx) = support else {
        let parts = grid(cell.lower(), cell.upper(), quad.subcells)
            .into_par_iter()
            .map(|(lo, hi)| gauss_box(a, cell, rule, &lo, &hi))
            .collect::<Vec<_>>();
        return compensated_sum(parts);
    };
    // shrink the parameter box onto the preimage of the support first
    let (mut lo, mut hi) = (cell.lower().to_vec(), cell.upper().to_vec());
    for _ in 0..MAX_ZOOM {
        let Some((zlo, zhi)) = active_box(cell, &lo, &hi, ZOOM_GRID, bx) else {
            return 0.0;
        };
        let shrink = (0..k)
            .map(|i| (hi[i] - lo[i]) / (zhi[i] - zlo[i]))
            .fold(1.0, f64::max);
        lo = zlo;
        hi = zhi;
        if shrink < 1.2 {
            break;
        }
    }
    let parts = grid(&lo, &hi, quad.support_subcells)
        .into_par_iter()
        .map(|(slo, shi)| {
            if !image_box(cell, &slo, &shi).intersects(bx) {
                return 0.0;
            }
            refined(a, cell, rule, &slo, &shi, quad.support_refine, bx)
        })
        .collect::<Vec<_>>();
    compensated_sum(parts)
}

const MAX_ZOOM: usize = 12;
const ZOOM_GRID: usize = 16;

/// `n` subdivisions per axis of `[lo, hi]`, in a fixed order.
fn grid(lo: &[f64], hi: &[f64], n: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let k = lo.len();
    let n = n.max(1);
    (0..n.pow(k as u32))
        .map(|flat| {
            let mut rem = flat;
            let mut sub_lo = vec![0.0; k];
            let mut sub_hi = vec![0.0; k];
            for i in 0..k {
                let j = rem % n;
                rem /= n;
                let w = (hi[i] - lo[i]) / n as f64;
                sub_lo[i] = lo[i] + j as f64 * w;
                sub_hi[i] = if j + 1 == n { hi[i] } else { lo[i] + (j + 1) as f64 * w };
            }
            (sub_lo, sub_hi)
        })
        .collect()
}

/// Parameter bounding box of the grid subcells whose image may meet `bx`.
fn active_box(
    cell: &ParamCell,
    lo: &[f64],
    hi: &[f64],
    n: usize,
    bx: &Aabb,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let hits: Vec<(Vec<f64>, Vec<f64>)> = grid(lo, hi, n)
        .into_par_iter()
        .filter(|(slo, shi)| image_box(cell, slo, shi).intersects(bx))
        .collect();
    let k = lo.len();
    let mut out: Option<(Vec<f64>, Vec<f64>)> = None;
    for (slo, shi) in hits {
        match &mut out {
            None => out = Some((slo, shi)),
            Some((alo, ahi)) => {
                for i in 0..k {
                    alo[i] = alo[i].min(slo[i]);
                    ahi[i] = ahi[i].max(shi[i]);
                }
            }
        }
    }
    out
}

fn refined(
    a: &DifferentialForm,
    cell: &ParamCell,
    rule: &GaussRule,
    lo: &[f64],
    hi: &[f64],
    factor: usize,
    support: &Aabb,
) -> f64 {
    let m = factor.max(1);
    if m == 1 {
        return gauss_box(a, cell, rule, lo, hi);
    }
    let k = lo.len();
    let width: Vec<f64> = (0..k).map(|i| (hi[i] - lo[i]) / m as f64).collect();
    let mut parts = Vec::with_capacity(m.pow(k as u32));
    let mut sub_lo = vec![0.0; k];
    let mut sub_hi = vec![0.0; k];
    for flat in 0..m.pow(k as u32) {
        let mut rem = flat;
        for i in 0..k {
            let j = rem % m;
            rem /= m;
            sub_lo[i] = lo[i] + j as f64 * width[i];
            sub_hi[i] = if j + 1 == m {
                hi[i]
            } else {
                lo[i] + (j + 1) as f64 * width[i]
            };
        }
        if image_box(cell, &sub_lo, &sub_hi).intersects(support) {
            parts.push(gauss_box(a, cell, rule, &sub_lo, &sub_hi));
        }
    }
    compensated_sum(parts)
}

fn gauss_box(
    a: &DifferentialForm,
    cell: &ParamCell,
    rule: &GaussRule,
    lo: &[f64],
    hi: &[f64],
) -> f64 {
    let k = lo.len();
    let q = rule.nodes.len();
    let half: Vec<f64> = (0..k).map(|i| 0.5 * (hi[i] - lo[i])).collect();
    let mid: Vec<f64> = (0..k).map(|i| 0.5 * (hi[i] + lo[i])).collect();
    let volume: f64 = half.iter().product();
    let jac_fields = cell.jacobian_fields();
    let d = jac_fields.len();
    let mut u = vec![0.0; k];
    let mut jac = vec![vec![0.0; k]; d];
    let mut total = 0.0;
    for flat in 0..q.pow(k as u32) {
        let mut rem = flat;
        let mut w = 1.0;
        for i in 0..k {
            let j = rem % q;
            rem /= q;
            u[i] = mid[i] + half[i] * rule.nodes[j];
            w *= rule.weights[j];
        }
        let x = cell.eval(&u);
        for (row, fields) in jac.iter_mut().zip(jac_fields) {
            for (v, f) in row.iter_mut().zip(fields) {
                *v = f.eval(&u);
            }
        }
        total += w * a.pulled_top_value(&x, &jac);
    }
    volume * total
}

fn point_box(x: &[f64]) -> Aabb {
    Aabb::new(x.to_vec(), x.to_vec())
}

/// Padded bounding box of a subcell image, from a 3-per-axis sample grid.
fn image_box(cell: &ParamCell, lo: &[f64], hi: &[f64]) -> Aabb {
    let k = lo.len();
    let d = cell.ambient_dim();
    let mut bmin = vec![f64::INFINITY; d];
    let mut bmax = vec![f64::NEG_INFINITY; d];
    let mut u = vec![0.0; k];
    for flat in 0..3usize.pow(k as u32) {
        let mut rem = flat;
        for i in 0..k {
            let j = rem % 3;
            rem /= 3;
            u[i] = lo[i] + 0.5 * j as f64 * (hi[i] - lo[i]);
        }
        for (i, v) in cell.eval(&u).into_iter().enumerate() {
            bmin[i] = bmin[i].min(v);
            bmax[i] = bmax[i].max(v);
        }
    }
    for i in 0..d {
        let pad = 0.5 * (bmax[i] - bmin[i]) + 1e-9 * (1.0 + bmin[i].abs().max(bmax[i].abs()));
        bmin[i] -= pad;
        bmax[i] += pad;
    }
    Aabb::new(bmin, bmax)
}

/// `|∫_c da − ∫_{∂c} a|`.
pub fn stokes_residual(a: &DifferentialForm, c: &Chain, quad: &Quadrature) -> Result<f64> {
    if a.degree() + 1 != c.dim() {
        return Err(Error::DegreeMismatch {
            expected: c.dim().saturating_sub(1),
            found: a.degree(),
        });
    }
    let interior = integrate(&a.exterior_derivative(), c, quad)?;
    let boundary = integrate(a, &c.boundary()?, quad)?;
    Ok((interior - boundary).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::SmoothMap;
    use crate::field::ScalarField;
    use std::f64::consts::PI;

    fn x(i: usize) -> ScalarField {
        ScalarField::coord(i)
    }

    fn annulus(r_in: f64, r_out: f64) -> Chain {
        Chain::single(
            ParamCell::axis_box(vec![r_in, 0.0], vec![r_out, 2.0 * PI])
                .unwrap()
                .with_periodic(1),
        )
    }

    #[test]
    fn unit_square_area() {
        let sq = Chain::single(ParamCell::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap());
        let area = DifferentialForm::basis(2, &[0, 1]).unwrap();
        let v = integrate(&area, &sq, &Quadrature::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn circle_angle() {
        // unit circle in (r, α) coordinates: r = 1, α ∈ [0, 2π]
        let circle = ParamCell::new(
            SmoothMap::new(1, vec![ScalarField::one(), x(0)]),
            vec![0.0],
            vec![2.0 * PI],
        )
        .unwrap()
        .with_periodic(0);
        let dalpha = DifferentialForm::basis(2, &[1]).unwrap();
        let v = integrate(&dalpha, &Chain::single(circle), &Quadrature::default()).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn annulus_area_form() {
        let f = DifferentialForm::term(2, &[0, 1], x(0)).unwrap();
        let v = integrate(&f, &annulus(1.0, 2.0), &Quadrature::default()).unwrap();
        assert!((v - 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let f = DifferentialForm::basis(2, &[0]).unwrap();
        assert!(matches!(
            integrate(&f, &annulus(1.0, 2.0), &Quadrature::default()),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn stokes_on_square() {
        let sq = Chain::single(ParamCell::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap());
        let q = Quadrature::new(4, 4);
        let c = DifferentialForm::from_terms(
            2,
            1,
            [
                (vec![0], ScalarField::constant(2.0)),
                (vec![1], ScalarField::constant(-1.0)),
            ],
        )
        .unwrap();
        assert!(stokes_residual(&c, &sq, &q).unwrap() < 1e-14);
        let a = DifferentialForm::term(2, &[1], x(0)).unwrap();
        let interior = integrate(&a.exterior_derivative(), &sq, &q).unwrap();
        let boundary = integrate(&a, &sq.boundary().unwrap(), &q).unwrap();
        assert!((interior - 1.0).abs() < 1e-14);
        assert!((boundary - 1.0).abs() < 1e-14);
        assert!(stokes_residual(&a, &sq, &q).unwrap() < 1e-10);
    }

    #[test]
    fn point_chain_evaluates_zero_forms() {
        let pts = Chain::points(&[(vec![1.0, 2.0], 2.0), (vec![0.0, 0.0], -1.0)]).unwrap();
        let f = DifferentialForm::scalar(2, x(0) + x(1) + 1.0);
        let v = integrate(&f, &pts, &Quadrature::default()).unwrap();
        assert_eq!(v, 2.0 * 4.0 - 1.0);
    }

    #[test]
    fn compact_support_skips_far_cells() {
        let sq = Chain::single(ParamCell::axis_box(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap());
        let far =
            DifferentialForm::term(2, &[0, 1], ScalarField::bump(&[5.0, 5.0], 0.1, 1.0)).unwrap();
        assert_eq!(integrate(&far, &sq, &Quadrature::default()).unwrap(), 0.0);
        // a bump inside agrees with a much finer uniform rule on an opaque copy
        let near =
            DifferentialForm::term(2, &[0, 1], ScalarField::bump(&[0.5, 0.4], 0.1, 1.0)).unwrap();
        let fast = integrate(&near, &sq, &Quadrature::default()).unwrap();
        let slow_field = {
            let b = ScalarField::bump(&[0.5, 0.4], 0.1, 1.0);
            ScalarField::from_fn(move |p| b.eval(p))
        };
        let slow_form = DifferentialForm::term(2, &[0, 1], slow_field).unwrap();
        let slow = integrate(&slow_form, &sq, &Quadrature::new(12, 256)).unwrap();
        assert!((fast - slow).abs() < 1e-6 * slow.abs(), "{fast} vs {slow}");
    }
}
