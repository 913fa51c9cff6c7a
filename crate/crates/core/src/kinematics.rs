//! Kinematic flux fields and their integral curves (worldlines).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, VectorField, VolumeElement};
use crate::geometry::ChartDomain;

/// `v` with `v ⌟ θ = J` for a flux form `J` of degree `d − 1`:
/// `v^k = (−1)^k J_{0…k̂…d−1} / θ_{0…d−1}`.
///
/// The field is not checked against zeros of `θ`; use
/// [`kinematic_flux_at`] for a checked point evaluation.
pub fn kinematic_flux(jtop: &DifferentialForm, theta: &VolumeElement) -> Result<VectorField> {
    check_flux_form(jtop, theta)?;
    let d = theta.dim();
    let density = theta.density();
    let components = (0..d)
        .map(|k| {
            let rest: Vec<usize> = (0..d).filter(|&i| i != k).collect();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            jtop.component(&rest).scale(sign).div(&density)
        })
        .collect();
    Ok(VectorField::new(components))
}

/// Point value of [`kinematic_flux`]; errors where `θ` vanishes.
pub fn kinematic_flux_at(
    jtop: &DifferentialForm,
    theta: &VolumeElement,
    x: &[f64],
) -> Result<Vec<f64>> {
    check_flux_form(jtop, theta)?;
    let d = theta.dim();
    let th = theta.density().eval(x);
    if th == 0.0 || !th.is_finite() {
        return Err(Error::DegenerateVolumeElement { point: x.to_vec() });
    }
    Ok((0..d)
        .map(|k| {
            let rest: Vec<usize> = (0..d).filter(|&i| i != k).collect();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * jtop.eval_component(&rest, x) / th
        })
        .collect())
}

fn check_flux_form(jtop: &DifferentialForm, theta: &VolumeElement) -> Result<()> {
    let d = theta.dim();
    if jtop.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: jtop.dim(),
        });
    }
    if d == 0 || jtop.degree() != d - 1 {
        return Err(Error::DegreeMismatch {
            expected: d.saturating_sub(1),
            found: jtop.degree(),
        });
    }
    Ok(())
}

/// Whether `v(x)` lies in the flux space of `J` at `x`, i.e. every
/// coefficient of `v ⌟ J` is below `tol` there.
pub fn flux_space_membership(
    v: &VectorField,
    jtop: &DifferentialForm,
    x: &[f64],
    tol: f64,
) -> bool {
    if jtop.degree() == 0 {
        return true;
    }
    match jtop.contract(v) {
        Ok(c) => c.max_abs_at(x) < tol,
        Err(_) => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WorldlineStatus {
    /// Reached a rest point of the field.
    Completed,
    /// The next step would leave the domain; the last point is in it.
    LeftDomain,
    MaxSteps,
}

/// Sampled integral curve of a vector field.
#[derive(Clone, Debug, Serialize)]
pub struct Worldline {
    pub params: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub seed: Vec<f64>,
    pub step: f64,
    pub status: WorldlineStatus,
}

impl Worldline {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> &[f64] {
        self.points
            .last()
            .expect("a worldline holds at least its seed")
    }
}

/// Fixed-step classical RK4 for `dc/dp = v(c)` from `seed`.
///
/// Stops before the first step that leaves `domain`, at a rest point, or
/// after `max_steps` steps. Periodic coordinates are wrapped.
pub fn integrate_worldline(
    v: &VectorField,
    seed: &[f64],
    step: f64,
    max_steps: usize,
    domain: &ChartDomain,
) -> Result<Worldline> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "worldline step must be positive, got {step}"
        )));
    }
    let (points, status) = rk4(v, seed, step, max_steps, domain)?;
    let params = (0..points.len()).map(|i| i as f64 * step).collect();
    Ok(Worldline {
        params,
        points,
        seed: seed.to_vec(),
        step,
        status,
    })
}

/// Worldline through `seed` in both directions: the backward branch is
/// reversed and joined to the forward one, so `params` run from negative
/// values through 0 at the seed. The status is that of the forward branch.
pub fn trace_through(
    v: &VectorField,
    seed: &[f64],
    step: f64,
    max_steps: usize,
    domain: &ChartDomain,
) -> Result<Worldline> {
    let forward = integrate_worldline(v, seed, step, max_steps, domain)?;
    let (mut back, _) = rk4(v, seed, -step, max_steps, domain)?;
    back.reverse();
    let nb = back.len() - 1;
    back.pop();
    let params = (0..nb + forward.points.len())
        .map(|i| (i as f64 - nb as f64) * step)
        .collect();
    back.extend(forward.points);
    Ok(Worldline {
        params,
        points: back,
        seed: seed.to_vec(),
        step,
        status: forward.status,
    })
}

fn rk4(
    v: &VectorField,
    seed: &[f64],
    h: f64,
    max_steps: usize,
    domain: &ChartDomain,
) -> Result<(Vec<Vec<f64>>, WorldlineStatus)> {
    if v.dim() != domain.dim() || seed.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: if seed.len() != domain.dim() {
                seed.len()
            } else {
                v.dim()
            },
        });
    }
    if !domain.contains(seed) {
        return Err(Error::OutsideDomain {
            point: seed.to_vec(),
        });
    }
    let d = seed.len();
    let mut x = seed.to_vec();
    domain.wrap(&mut x);
    let mut points = vec![x.clone()];
    let offset = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    for _ in 0..max_steps {
        let k1 = v.eval(&x);
        if k1.iter().all(|&c| c == 0.0) {
            return Ok((points, WorldlineStatus::Completed));
        }
        let k2 = v.eval(&offset(&x, &k1, 0.5 * h));
        let k3 = v.eval(&offset(&x, &k2, 0.5 * h));
        let k4 = v.eval(&offset(&x, &k3, h));
        let mut next: Vec<f64> = (0..d)
            .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if !domain.contains(&next) {
            return Ok((points, WorldlineStatus::LeftDomain));
        }
        domain.wrap(&mut next);
        points.push(next.clone());
        x = next;
    }
    Ok((points, WorldlineStatus::MaxSteps))
}

/// Largest parallelism defect between the kinematic fluxes of `J` under two
/// volume elements: `|v₁ − proj_{v₂} v₁| / |v₁|`, 0 where `v₁ = 0`.
pub fn volume_element_invariance(
    jtop: &DifferentialForm,
    theta1: &VolumeElement,
    theta2: &VolumeElement,
    samples: &[Vec<f64>],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in samples {
        let v1 = kinematic_flux_at(jtop, theta1, x)?;
        let v2 = kinematic_flux_at(jtop, theta2, x)?;
        let n1 = dot(&v1, &v1).sqrt();
        if n1 == 0.0 {
            continue;
        }
        let n22 = dot(&v2, &v2);
        let defect = if n22 == 0.0 {
            1.0
        } else {
            let c = dot(&v1, &v2) / n22;
            let r: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| a - c * b).collect();
            dot(&r, &r).sqrt() / n1
        };
        worst = worst.max(defect);
    }
    Ok(worst)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Distance between the images of two curves that start at the same point.
///
/// Both are cut to their common arc length (in chart coordinates), resampled
/// at matching arc-length positions, and the largest pointwise distance is
/// returned. This bounds the Hausdorff distance of the two images.
pub fn worldline_image_distance(a: &Worldline, b: &Worldline, samples: usize) -> f64 {
    let (sa, sb) = (arc_lengths(&a.points), arc_lengths(&b.points));
    let total = sa
        .last()
        .copied()
        .unwrap_or(0.0)
        .min(sb.last().copied().unwrap_or(0.0));
    let m = samples.max(2);
    (0..m)
        .map(|i| {
            let s = total * i as f64 / (m - 1) as f64;
            let pa = at_arc_length(&a.points, &sa, s);
            let pb = at_arc_length(&b.points, &sb, s);
            pa.iter()
                .zip(&pb)
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

fn arc_lengths(points: &[Vec<f64>]) -> Vec<f64> {
    let mut out = Vec::with_capacity(points.len());
    let mut s = 0.0;
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            s += p
                .iter()
                .zip(&points[i - 1])
                .map(|(x, y)| (x - y).powi(2))
                .sum::<f64>()
                .sqrt();
        }
        out.push(s);
    }
    out
}

fn at_arc_length(points: &[Vec<f64>], s_of: &[f64], s: f64) -> Vec<f64> {
    let i = s_of.partition_point(|&v| v < s);
    if i == 0 {
        return points[0].clone();
    }
    if i >= points.len() {
        return points[points.len() - 1].clone();
    }
    let (s0, s1) = (s_of[i - 1], s_of[i]);
    let w = if s1 > s0 { (s - s0) / (s1 - s0) } else { 0.0 };
    points[i - 1]
        .iter()
        .zip(&points[i])
        .map(|(x, y)| x + w * (y - x))
        .collect()
}
