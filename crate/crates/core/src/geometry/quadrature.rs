use serde::{Deserialize, Serialize};

/// Composite tensor-product Gauss–Legendre settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Quadrature {
    /// Gauss points per axis in each subcell.
    pub order: usize,
    /// Uniform subcells per parameter axis.
    pub subcells: usize,
    /// Subcells per axis over the box that carries a compactly supported
    /// integrand.
    pub support_subcells: usize,
    /// Extra per-axis subdivision of subcells whose image meets the support
    /// of a compactly supported integrand.
    pub support_refine: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            order: 8,
            subcells: 32,
            support_subcells: 16,
            support_refine: 2,
        }
    }
}

impl Quadrature {
    pub fn new(order: usize, subcells: usize) -> Self {
        Self {
            order,
            subcells,
            ..Self::default()
        }
    }

    pub fn with_support_subcells(mut self, n: usize) -> Self {
        self.support_subcells = n.max(1);
        self
    }

    pub fn with_support_refine(mut self, factor: usize) -> Self {
        self.support_refine = factor.max(1);
        self
    }

    pub fn rule(&self) -> GaussRule {
        GaussRule::new(self.order)
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// `∫_a^b f` with this rule.
    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Neumaier-compensated sum, evaluated in iteration order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for n in 1..=12 {
            let r = GaussRule::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}");
            for i in 0..n {
                assert!((r.nodes[i] + r.nodes[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn eight_point_reference_values() {
        let r = GaussRule::new(8);
        assert!((r.nodes[7] - 0.960_289_856_497_536_2).abs() < 1e-15);
        assert!((r.weights[7] - 0.101_228_536_290_376_26).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials_up_to_2n_minus_1() {
        let r = GaussRule::new(4);
        for p in 0..8 {
            let got = r.integrate(0.0, 2.0, |x| x.powi(p));
            let exact = 2f64.powi(p + 1) / (p as f64 + 1.0);
            assert!((got - exact).abs() < 1e-12 * exact.max(1.0), "p={p}");
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(v), 2.0);
    }
}
