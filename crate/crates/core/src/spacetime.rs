//! Product-chart spacetime: time on axis 0, the spatial chart on axes 1..=n.

use crate::error::{Error, Result};
use crate::exterior::{DifferentialForm, TimeDependentForm, VectorField};
use crate::geometry::ChartDomain;

/// Spacetime chart `[t0, t1] × space`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacetimeChart {
    space_dim: usize,
    chart: ChartDomain,
}

impl SpacetimeChart {
    /// Wrap a chart whose axis 0 is time.
    pub fn new(chart: ChartDomain) -> Result<Self> {
        if chart.dim() == 0 {
            return Err(Error::InvalidDomain("spacetime needs a time axis".into()));
        }
        if chart.is_periodic(0) {
            return Err(Error::InvalidDomain(
                "the time axis cannot be periodic".into(),
            ));
        }
        Ok(Self {
            space_dim: chart.dim() - 1,
            chart,
        })
    }

    /// Product of a time interval with a spatial chart. Periodic axes and
    /// exclusions carry over.
    pub fn product(time: (f64, f64), space: &ChartDomain) -> Result<Self> {
        let bounds = std::iter::once(time)
            .chain(space.bounds().iter().copied())
            .collect();
        let mut chart = ChartDomain::new(bounds)?;
        for axis in 0..space.dim() {
            if space.is_periodic(axis) {
                chart = chart.with_periodic(axis + 1)?;
            }
            if let Some(v) = space.exclusion(axis) {
                chart = chart.with_exclusion(axis + 1, v)?;
            }
        }
        Self::new(chart)
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn chart(&self) -> &ChartDomain {
        &self.chart
    }

    pub fn time_range(&self) -> (f64, f64) {
        self.chart.bounds()[0]
    }

    /// The spatial factor of the chart.
    pub fn space(&self) -> ChartDomain {
        let mut space =
            ChartDomain::new(self.chart.bounds()[1..].to_vec()).expect("valid spatial bounds");
        for axis in 0..self.space_dim {
            if self.chart.is_periodic(axis + 1) {
                space = space.with_periodic(axis).expect("axis in range");
            }
            if let Some(v) = self.chart.exclusion(axis + 1) {
                space = space
                    .with_exclusion(axis, v)
                    .expect("exclusion already validated");
            }
        }
        space
    }

    pub fn dt(&self) -> DifferentialForm {
        DifferentialForm::basis(self.space_dim + 1, &[0]).expect("axis 0 exists")
    }

    pub fn d_t(&self) -> VectorField {
        VectorField::basis(self.space_dim + 1, 0)
    }
}

fn dt(space_dim: usize) -> DifferentialForm {
    DifferentialForm::basis(space_dim + 1, &[0]).expect("axis 0 exists")
}

fn expect_degree(a: &TimeDependentForm, degree: usize) -> Result<()> {
    if a.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: a.degree(),
        });
    }
    Ok(())
}

/// A time-dependent spatial form read on the spacetime chart; it has no `dt`
/// component, so `∂_t ⌟ lift(a) = 0`.
pub fn lift(a: &TimeDependentForm) -> DifferentialForm {
    a.lifted().clone()
}

/// `𝔍 = −dt ∧ J̃ + ρ̃`.
pub fn assemble_spacetime_flux(
    rho: &TimeDependentForm,
    j: &TimeDependentForm,
) -> Result<DifferentialForm> {
    let n = rho.space_dim();
    if j.space_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: j.space_dim(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidDomain("space needs at least one axis".into()));
    }
    expect_degree(rho, n)?;
    expect_degree(j, n - 1)?;
    dt(n).wedge(j.lifted())?.scale(-1.0).add(rho.lifted())
}

/// `𝔰 = dt ∧ ς̃`.
pub fn assemble_spacetime_source(sigma: &TimeDependentForm) -> Result<DifferentialForm> {
    let n = sigma.space_dim();
    expect_degree(sigma, n)?;
    dt(n).wedge(sigma.lifted())
}

/// `J = −∂_t ⌟ 𝔍`, as a time-dependent spatial (n−1)-form.
pub fn project_flux(jst: &DifferentialForm) -> Result<TimeDependentForm> {
    let n = spacetime_space_dim(jst)?;
    let d_t = VectorField::basis(n + 1, 0);
    TimeDependentForm::from_lifted(jst.contract(&d_t)?.scale(-1.0))
}

/// The `dt`-free part of `𝔍`, i.e. the density.
pub fn extract_density(jst: &DifferentialForm) -> Result<TimeDependentForm> {
    spacetime_space_dim(jst)?;
    let terms = jst
        .coefficients()
        .filter(|(k, _)| !k.contains(0))
        .map(|(k, f)| (k.axes().to_vec(), f.clone()));
    TimeDependentForm::from_lifted(DifferentialForm::from_terms(
        jst.dim(),
        jst.degree(),
        terms,
    )?)
}

fn spacetime_space_dim(jst: &DifferentialForm) -> Result<usize> {
    if jst.dim() < 2 {
        return Err(Error::InvalidDomain(
            "spacetime needs a time axis and space".into(),
        ));
    }
    let n = jst.dim() - 1;
    if jst.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: jst.degree(),
        });
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;

    fn c(v: f64) -> ScalarField {
        ScalarField::constant(v)
    }

    fn x(i: usize) -> ScalarField {
        ScalarField::coord(i)
    }

    fn assert_component(f: &DifferentialForm, axes: &[usize], p: &[f64], want: f64) {
        let got = f.eval_component(axes, p);
        assert!(
            (got - want).abs() < 1e-12,
            "{axes:?} at {p:?}: {got} vs {want}"
        );
    }

    #[test]
    fn lift_has_no_time_leg() {
        let dx = TimeDependentForm::from_terms(1, 1, [(vec![0], c(1.0))]).unwrap();
        let lifted = lift(&dx);
        assert_eq!(lifted.dim(), 2);
        assert_component(&lifted, &[1], &[0.3, 0.7], 1.0);
        let chart =
            SpacetimeChart::new(ChartDomain::new(vec![(0.0, 2.0), (-2.0, 2.0)]).unwrap()).unwrap();
        assert!(lifted.contract(&chart.d_t()).unwrap().is_zero());
        assert_eq!(chart.dt().eval_component(&[0], &[0.0, 0.0]), 1.0);
    }

    #[test]
    fn example1_assembly_and_projection() {
        // t on axis 0; ρ = a_x t dx, J = −a_t t
        let (at, ax) = (1.0, 2.0);
        let rho = TimeDependentForm::from_terms(1, 1, [(vec![0], x(0) * ax)]).unwrap();
        let j = TimeDependentForm::scalar(1, x(0) * (-at));
        let jst = assemble_spacetime_flux(&rho, &j).unwrap();
        for p in [[1.0, 0.5], [0.3, -1.0]] {
            assert_component(&jst, &[0], &p, at * p[0]);
            assert_component(&jst, &[1], &p, ax * p[0]);
        }
        let back = project_flux(&jst).unwrap();
        assert_eq!(back.degree(), 0);
        assert!((back.eval_component(&[], 1.5, &[0.0]) + at * 1.5).abs() < 1e-15);
        let dens = extract_density(&jst).unwrap();
        assert!((dens.eval_component(&[0], 1.5, &[0.0]) - ax * 1.5).abs() < 1e-15);
        let sigma = TimeDependentForm::from_terms(1, 1, [(vec![0], c(ax))]).unwrap();
        let src = assemble_spacetime_source(&sigma).unwrap();
        assert_component(&src, &[0, 1], &[0.4, 0.1], ax);
    }

    #[test]
    fn example2_flux() {
        // (t, r, α); ρ = ρ₀ r dr∧dα, J = a_α dα with a_α = v₀ r
        let (rho0, v0) = (1.5, 3.0);
        let rho = TimeDependentForm::from_terms(2, 2, [(vec![0, 1], x(1) * rho0)]).unwrap();
        let j = TimeDependentForm::from_terms(2, 1, [(vec![1], x(1) * v0)]).unwrap();
        let jst = assemble_spacetime_flux(&rho, &j).unwrap();
        let p = [0.5, 2.0, 1.0];
        assert_component(&jst, &[0, 2], &p, -v0 * 2.0);
        assert_component(&jst, &[1, 2], &p, rho0 * 2.0);
        assert_component(&jst, &[0, 1], &p, 0.0);
        let dens = extract_density(&jst).unwrap();
        assert!(dens.lifted().sub(rho.lifted()).unwrap().max_abs_at(&p) < 1e-15);
    }

    #[test]
    fn example2_exponential_source() {
        let v0 = 0.7;
        let sigma = TimeDependentForm::from_terms(2, 2, [(vec![0, 1], x(1).exp() * v0)]).unwrap();
        let src = assemble_spacetime_source(&sigma).unwrap();
        let p = [0.2, 1.3, 4.0];
        assert_component(&src, &[0, 1, 2], &p, v0 * 1.3f64.exp());
    }

    #[test]
    fn example3_inverse_check() {
        // 𝔍 = −ρ₀r²/(t+t₀) dt∧dα + rρ₀ dr∧dα
        let (rho0, t0) = (2.0, 1.0);
        let r = x(1);
        let jst = DifferentialForm::from_terms(
            3,
            2,
            [
                (vec![0, 2], (&r * &r * (-rho0)).div(&(x(0) + t0))),
                (vec![1, 2], &r * rho0),
            ],
        )
        .unwrap();
        let j = project_flux(&jst).unwrap();
        let (t, rv) = (0.5, 1.7);
        assert!((j.eval_component(&[1], t, &[rv, 0.0]) - rho0 * rv * rv / (t + t0)).abs() < 1e-14);
        let rho = extract_density(&jst).unwrap();
        let again = assemble_spacetime_flux(&rho, &j).unwrap();
        assert!(again.sub(&jst).unwrap().max_abs_at(&[t, rv, 0.3]) < 1e-14);
        // 𝔰 = d𝔍 = 2rρ₀/(t+t₀) dt∧dr∧dα
        let s = jst.exterior_derivative();
        assert_component(&s, &[0, 1, 2], &[t, rv, 0.3], 2.0 * rv * rho0 / (t + t0));
    }

    #[test]
    fn pure_density_projects_to_zero() {
        let rho = TimeDependentForm::from_terms(1, 1, [(vec![0], x(1))]).unwrap();
        let j = TimeDependentForm::zero(1, 0).unwrap();
        let jst = assemble_spacetime_flux(&rho, &j).unwrap();
        assert!(project_flux(&jst).unwrap().is_zero());
        let only_flux = assemble_spacetime_flux(
            &TimeDependentForm::zero(1, 1).unwrap(),
            &TimeDependentForm::scalar(1, x(1)),
        )
        .unwrap();
        assert!(extract_density(&only_flux).unwrap().is_zero());
        assert!(
            assemble_spacetime_source(&TimeDependentForm::zero(1, 1).unwrap())
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn degree_errors() {
        let j = TimeDependentForm::scalar(1, x(0));
        assert!(assemble_spacetime_flux(&j, &j).is_err());
        assert!(project_flux(&DifferentialForm::basis(3, &[0]).unwrap()).is_err());
    }

    #[test]
    fn product_chart_keeps_periodicity() {
        let space = ChartDomain::new(vec![(0.2, 4.0), (0.0, std::f64::consts::TAU)])
            .unwrap()
            .with_periodic(1)
            .unwrap()
            .with_exclusion(0, 0.0)
            .unwrap();
        let st = SpacetimeChart::product((0.0, 2.0), &space).unwrap();
        assert!(st.chart().is_periodic(2));
        assert!(!st.chart().is_periodic(0));
        assert_eq!(st.space(), space);
        assert!(SpacetimeChart::new(
            ChartDomain::new(vec![(0.0, 1.0)])
                .unwrap()
                .with_periodic(0)
                .unwrap()
        )
        .is_err());
    }
}
