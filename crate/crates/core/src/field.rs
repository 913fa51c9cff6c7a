//! Scalar coefficient fields on a coordinate chart.
//!
//! A [`ScalarField`] is a cheaply clonable, thread-safe function `ℝ^d → ℝ`.
//! Fields built from the combinators in this module (coordinates, constants,
//! arithmetic, `exp`, `sin`, powers, bump profiles) carry exact partial
//! derivatives of every order. Fields built from opaque closures fall back to
//! central finite differences, unless an analytic gradient is supplied.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Relative step used by central finite differences.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

pub type FieldFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Axis-aligned box in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Aabb {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Aabb {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        Self { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn intersects(&self, other: &Aabb) -> bool {
        self.lo
            .iter()
            .zip(&self.hi)
            .zip(other.lo.iter().zip(&other.hi))
            .all(|((a_lo, a_hi), (b_lo, b_hi))| a_lo <= b_hi && b_lo <= a_hi)
    }

    fn intersection(&self, other: &Aabb) -> Option<Aabb> {
        if !self.intersects(other) {
            return None;
        }
        let lo = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| a.max(*b))
            .collect();
        let hi = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(a, b)| a.min(*b))
            .collect();
        Some(Aabb { lo, hi })
    }

    fn union(&self, other: &Aabb) -> Aabb {
        let lo = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| a.min(*b))
            .collect();
        let hi = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(a, b)| a.max(*b))
            .collect();
        Aabb { lo, hi }
    }

    fn padded(&self, pad: impl Fn(f64, f64) -> f64) -> Aabb {
        let (lo, hi) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| {
                let p = pad(l, h);
                (l - p, h + p)
            })
            .unzip();
        Aabb { lo, hi }
    }
}

/// Conservative description of where a field may be nonzero.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    Empty,
    Bounded(Aabb),
    Everywhere,
}

impl Support {
    pub fn intersect(&self, other: &Support) -> Support {
        match (self, other) {
            (Support::Empty, _) | (_, Support::Empty) => Support::Empty,
            (Support::Everywhere, s) | (s, Support::Everywhere) => s.clone(),
            (Support::Bounded(a), Support::Bounded(b)) => {
                a.intersection(b).map_or(Support::Empty, Support::Bounded)
            }
        }
    }

    pub fn union(&self, other: &Support) -> Support {
        match (self, other) {
            (Support::Everywhere, _) | (_, Support::Everywhere) => Support::Everywhere,
            (Support::Empty, s) | (s, Support::Empty) => s.clone(),
            (Support::Bounded(a), Support::Bounded(b)) => Support::Bounded(a.union(b)),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Support::Empty)
    }
}

#[derive(Clone)]
enum Unary {
    Exp,
    Ln,
    Sin,
    Cos,
    Powi(i32),
}

impl Unary {
    fn apply(&self, v: f64) -> f64 {
        match self {
            Unary::Exp => v.exp(),
            Unary::Ln => v.ln(),
            Unary::Sin => v.sin(),
            Unary::Cos => v.cos(),
            Unary::Powi(n) => v.powi(*n),
        }
    }

    /// `f'(arg)` as a field.
    fn derivative(&self, arg: &ScalarField) -> ScalarField {
        match self {
            Unary::Exp => arg.exp(),
            Unary::Ln => arg.powi(-1),
            Unary::Sin => arg.cos(),
            Unary::Cos => -arg.sin(),
            Unary::Powi(n) => arg.powi(n - 1) * (*n as f64),
        }
    }

    fn vanishes_at_zero(&self) -> bool {
        match self {
            Unary::Sin => true,
            Unary::Powi(n) => *n > 0,
            _ => false,
        }
    }
}

enum Node {
    Const(f64),
    Coord(usize),
    Sum(Vec<ScalarField>),
    Product(ScalarField, ScalarField),
    Scaled(f64, ScalarField),
    Unary(Unary, ScalarField),
    /// `e·exp(-s)·P(s)` with `s = 1/(1-q)` for `q < 1`, zero otherwise.
    /// `P = 1` is the normalized bump profile; derivatives keep the same
    /// form with a different polynomial.
    Bump {
        poly: Arc<[f64]>,
        q: ScalarField,
        support: Support,
    },
    Compose(ScalarField, Arc<[ScalarField]>),
    Closure {
        f: FieldFn,
        grad: Option<GradientFn>,
        fd_step: f64,
        support: Support,
    },
    GradComponent {
        grad: GradientFn,
        axis: usize,
        fd_step: f64,
        support: Support,
    },
    FiniteDiff {
        base: ScalarField,
        axis: usize,
        fd_step: f64,
    },
}

/// A smooth real-valued function on a chart.
#[derive(Clone)]
pub struct ScalarField(Arc<Node>);

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Coord(i) => write!(f, "x{i}"),
            Node::Sum(terms) => {
                write!(f, "(")?;
                for (k, t) in terms.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t:?}")?;
                }
                write!(f, ")")
            }
            Node::Product(a, b) => write!(f, "{a:?}*{b:?}"),
            Node::Scaled(c, a) => write!(f, "{c}*{a:?}"),
            Node::Unary(op, a) => {
                let name = match op {
                    Unary::Exp => "exp".to_string(),
                    Unary::Ln => "ln".to_string(),
                    Unary::Sin => "sin".to_string(),
                    Unary::Cos => "cos".to_string(),
                    Unary::Powi(n) => format!("pow{n}"),
                };
                write!(f, "{name}({a:?})")
            }
            Node::Bump { poly, q, .. } => write!(f, "bump[{}]({q:?})", poly.len()),
            Node::Compose(outer, _) => write!(f, "({outer:?})∘map"),
            Node::Closure { grad, .. } => {
                write!(f, "<fn{}>", if grad.is_some() { "+grad" } else { "" })
            }
            Node::GradComponent { axis, .. } => write!(f, "<grad_{axis}>"),
            Node::FiniteDiff { base, axis, .. } => write!(f, "fd_{axis}({base:?})"),
        }
    }
}

impl ScalarField {
    fn node(node: Node) -> Self {
        ScalarField(Arc::new(node))
    }

    pub fn constant(c: f64) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The coordinate function `x ↦ x[axis]`.
    pub fn coord(axis: usize) -> Self {
        Self::node(Node::Coord(axis))
    }

    /// Opaque field; partials by central finite differences.
    pub fn from_fn(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::node(Node::Closure {
            f: Arc::new(f),
            grad: None,
            fd_step: DEFAULT_FD_STEP,
            support: Support::Everywhere,
        })
    }

    /// Opaque field with an analytic gradient. Second partials fall back to
    /// finite differences of the gradient.
    pub fn with_gradient(
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self::node(Node::Closure {
            f: Arc::new(f),
            grad: Some(Arc::new(grad)),
            fd_step: DEFAULT_FD_STEP,
            support: Support::Everywhere,
        })
    }

    /// Override the finite-difference step of an opaque field. No effect on
    /// combinator fields, which differentiate exactly.
    pub fn with_fd_step(self, step: f64) -> Self {
        match &*self.0 {
            Node::Closure {
                f, grad, support, ..
            } => Self::node(Node::Closure {
                f: f.clone(),
                grad: grad.clone(),
                fd_step: step,
                support: support.clone(),
            }),
            _ => self,
        }
    }

    /// Declare that an opaque field vanishes outside `aabb`.
    pub fn with_support(self, aabb: Aabb) -> Self {
        match &*self.0 {
            Node::Closure {
                f, grad, fd_step, ..
            } => Self::node(Node::Closure {
                f: f.clone(),
                grad: grad.clone(),
                fd_step: *fd_step,
                support: Support::Bounded(aabb),
            }),
            _ => self,
        }
    }

    /// Normalized smooth bump `amplitude·exp(1 - 1/(1 - |x-c|²/ρ²))`, equal to
    /// `amplitude` at the center and identically zero outside the closed ball.
    pub fn bump(center: &[f64], radius: f64, amplitude: f64) -> Self {
        let inv_r2 = 1.0 / (radius * radius);
        let terms: Vec<ScalarField> = center
            .iter()
            .enumerate()
            .map(|(i, &c)| (Self::coord(i) - c).powi(2))
            .collect();
        let q = Self::sum(terms) * inv_r2;
        let aabb = Aabb::new(
            center.iter().map(|c| c - radius).collect(),
            center.iter().map(|c| c + radius).collect(),
        );
        Self::node(Node::Bump {
            poly: Arc::from(vec![1.0]),
            q,
            support: Support::Bounded(aabb),
        }) * amplitude
    }

    pub fn sum(terms: impl IntoIterator<Item = ScalarField>) -> Self {
        let mut constant = 0.0;
        let mut rest = Vec::new();
        for t in terms {
            match &*t.0 {
                Node::Const(c) => constant += c,
                Node::Sum(inner) => rest.extend(inner.iter().cloned()),
                _ => rest.push(t),
            }
        }
        if constant != 0.0 {
            rest.push(Self::constant(constant));
        }
        match rest.len() {
            0 => Self::zero(),
            1 => rest.pop().unwrap(),
            _ => Self::node(Node::Sum(rest)),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// True only for the literal zero constant (structural test, no sampling).
    pub fn is_zero(&self) -> bool {
        self.as_constant() == Some(0.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        if c == 1.0 {
            return self.clone();
        }
        match &*self.0 {
            Node::Const(v) => Self::constant(c * v),
            Node::Scaled(k, inner) => inner.scale(c * k),
            _ => Self::node(Node::Scaled(c, self.clone())),
        }
    }

    pub fn mul(&self, other: &ScalarField) -> Self {
        match (self.as_constant(), other.as_constant()) {
            (Some(a), Some(b)) => Self::constant(a * b),
            (Some(a), None) => other.scale(a),
            (None, Some(b)) => self.scale(b),
            (None, None) => Self::node(Node::Product(self.clone(), other.clone())),
        }
    }

    fn unary(&self, op: Unary) -> Self {
        if let Some(c) = self.as_constant() {
            return Self::constant(op.apply(c));
        }
        Self::node(Node::Unary(op, self.clone()))
    }

    pub fn exp(&self) -> Self {
        self.unary(Unary::Exp)
    }

    pub fn ln(&self) -> Self {
        self.unary(Unary::Ln)
    }

    pub fn sin(&self) -> Self {
        self.unary(Unary::Sin)
    }

    pub fn cos(&self) -> Self {
        self.unary(Unary::Cos)
    }

    pub fn powi(&self, n: i32) -> Self {
        match n {
            0 => Self::one(),
            1 => self.clone(),
            _ => self.unary(Unary::Powi(n)),
        }
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn div(&self, other: &ScalarField) -> Self {
        self.mul(&other.recip())
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match &*self.0 {
            Node::Const(c) => *c,
            Node::Coord(i) => x[*i],
            Node::Sum(terms) => terms.iter().map(|t| t.eval(x)).sum(),
            Node::Product(a, b) => {
                let va = a.eval(x);
                if va == 0.0 {
                    return 0.0;
                }
                va * b.eval(x)
            }
            Node::Scaled(c, a) => c * a.eval(x),
            Node::Unary(op, a) => op.apply(a.eval(x)),
            Node::Bump { poly, q, .. } => bump_profile(poly, q.eval(x)),
            Node::Compose(outer, inner) => {
                let y: Vec<f64> = inner.iter().map(|g| g.eval(x)).collect();
                outer.eval(&y)
            }
            Node::Closure { f, .. } => f(x),
            Node::GradComponent { grad, axis, .. } => grad(x)[*axis],
            Node::FiniteDiff {
                base,
                axis,
                fd_step,
            } => {
                let h = fd_step * x[*axis].abs().max(1.0);
                let mut p = x.to_vec();
                p[*axis] = x[*axis] + h;
                let fp = base.eval(&p);
                p[*axis] = x[*axis] - h;
                let fm = base.eval(&p);
                (fp - fm) / (2.0 * h)
            }
        }
    }

    /// Partial derivative along `axis`, itself a field.
    pub fn partial(&self, axis: usize) -> ScalarField {
        match &*self.0 {
            Node::Const(_) => Self::zero(),
            Node::Coord(i) => Self::constant(if *i == axis { 1.0 } else { 0.0 }),
            Node::Sum(terms) => Self::sum(terms.iter().map(|t| t.partial(axis))),
            Node::Product(a, b) => a.partial(axis).mul(b) + a.mul(&b.partial(axis)),
            Node::Scaled(c, a) => a.partial(axis).scale(*c),
            Node::Unary(op, a) => {
                let da = a.partial(axis);
                if da.is_zero() {
                    return Self::zero();
                }
                op.derivative(a).mul(&da)
            }
            Node::Bump { poly, q, support } => {
                let dq = q.partial(axis);
                if dq.is_zero() {
                    return Self::zero();
                }
                let next = Self::node(Node::Bump {
                    poly: bump_poly_derivative(poly),
                    q: q.clone(),
                    support: support.clone(),
                });
                next.mul(&dq)
            }
            Node::Compose(outer, inner) => Self::sum((0..inner.len()).filter_map(|i| {
                let di = inner[i].partial(axis);
                if di.is_zero() {
                    None
                } else {
                    Some(outer.partial(i).compose(inner).mul(&di))
                }
            })),
            Node::Closure {
                grad: Some(grad),
                fd_step,
                support,
                ..
            } => Self::node(Node::GradComponent {
                grad: grad.clone(),
                axis,
                fd_step: *fd_step,
                support: support.clone(),
            }),
            Node::Closure { fd_step, .. } | Node::GradComponent { fd_step, .. } => {
                self.finite_difference(axis, *fd_step)
            }
            Node::FiniteDiff { fd_step, .. } => self.finite_difference(axis, *fd_step),
        }
    }

    fn finite_difference(&self, axis: usize, fd_step: f64) -> ScalarField {
        Self::node(Node::FiniteDiff {
            base: self.clone(),
            axis,
            fd_step,
        })
    }

    pub fn gradient_at(&self, x: &[f64]) -> Vec<f64> {
        (0..x.len()).map(|i| self.partial(i).eval(x)).collect()
    }

    /// `self ∘ inner`, where `inner[i]` supplies the i-th argument of `self`.
    /// Combinator trees are rewritten in place; opaque leaves are wrapped.
    pub fn compose(&self, inner: &[ScalarField]) -> ScalarField {
        match &*self.0 {
            Node::Const(_) => self.clone(),
            Node::Coord(i) => inner[*i].clone(),
            Node::Sum(terms) => Self::sum(terms.iter().map(|t| t.compose(inner))),
            Node::Product(a, b) => a.compose(inner).mul(&b.compose(inner)),
            Node::Scaled(c, a) => a.compose(inner).scale(*c),
            Node::Unary(op, a) => a.compose(inner).unary(op.clone()),
            Node::Bump { poly, q, .. } => Self::node(Node::Bump {
                poly: poly.clone(),
                q: q.compose(inner),
                support: Support::Everywhere,
            }),
            Node::Compose(outer, mid) => {
                let mid: Vec<ScalarField> = mid.iter().map(|g| g.compose(inner)).collect();
                outer.compose(&mid)
            }
            _ => Self::node(Node::Compose(self.clone(), Arc::from(inner.to_vec()))),
        }
    }

    /// Conservative support in chart coordinates.
    pub fn support(&self) -> Support {
        match &*self.0 {
            Node::Const(c) => {
                if *c == 0.0 {
                    Support::Empty
                } else {
                    Support::Everywhere
                }
            }
            Node::Coord(_) => Support::Everywhere,
            Node::Sum(terms) => terms
                .iter()
                .fold(Support::Empty, |acc, t| acc.union(&t.support())),
            Node::Product(a, b) => a.support().intersect(&b.support()),
            Node::Scaled(_, a) => a.support(),
            Node::Unary(op, a) => {
                if op.vanishes_at_zero() {
                    a.support()
                } else {
                    Support::Everywhere
                }
            }
            Node::Bump { support, .. } => support.clone(),
            Node::Compose(outer, _) => {
                if outer.support().is_empty() {
                    Support::Empty
                } else {
                    Support::Everywhere
                }
            }
            Node::Closure { support, .. } | Node::GradComponent { support, .. } => support.clone(),
            Node::FiniteDiff { base, fd_step, .. } => match base.support() {
                Support::Bounded(b) => {
                    Support::Bounded(b.padded(|l, h| 2.0 * fd_step * l.abs().max(h.abs()).max(1.0)))
                }
                s => s,
            },
        }
    }
}

fn bump_profile(poly: &[f64], q: f64) -> f64 {
    if !(q < 1.0) {
        return 0.0;
    }
    let s = 1.0 / (1.0 - q);
    if s > 700.0 {
        return 0.0;
    }
    let p = poly.iter().rev().fold(0.0, |acc, c| acc * s + c);
    (1.0 - s).exp() * p
}

/// With `h(q) = e·exp(-s)·P(s)`, `s = 1/(1-q)` and `ds/dq = s²`:
/// `h'(q) = e·exp(-s)·s²·(P'(s) - P(s))`.
fn bump_poly_derivative(poly: &[f64]) -> Arc<[f64]> {
    let mut out = vec![0.0; poly.len() + 2];
    for (i, c) in poly.iter().enumerate() {
        out[i + 2] -= c;
        if i > 0 {
            out[i + 1] += i as f64 * c;
        }
    }
    Arc::from(out)
}

impl From<f64> for ScalarField {
    fn from(c: f64) -> Self {
        ScalarField::constant(c)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                $body(&self, &rhs)
            }
        }
        impl $trait<&ScalarField> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                $body(&self, rhs)
            }
        }
        impl $trait<ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                $body(self, &rhs)
            }
        }
        impl $trait<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                $body(self, rhs)
            }
        }
        impl $trait<f64> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                $body(&self, &ScalarField::constant(rhs))
            }
        }
        impl $trait<f64> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                $body(self, &ScalarField::constant(rhs))
            }
        }
    };
}

impl_binop!(Add, add, |a: &ScalarField, b: &ScalarField| {
    ScalarField::sum([a.clone(), b.clone()])
});
impl_binop!(Sub, sub, |a: &ScalarField, b: &ScalarField| {
    ScalarField::sum([a.clone(), b.scale(-1.0)])
});
impl_binop!(Mul, mul, |a: &ScalarField, b: &ScalarField| a.mul(b));

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: &ScalarField, x: &[f64], axis: usize) -> f64 {
        let h = 1e-6;
        let mut p = x.to_vec();
        p[axis] += h;
        let a = f.eval(&p);
        p[axis] -= 2.0 * h;
        (a - f.eval(&p)) / (2.0 * h)
    }

    #[test]
    fn combinator_partials_match_differences() {
        let x = ScalarField::coord(0);
        let y = ScalarField::coord(1);
        let f = (&x * &y).exp() + x.sin() * y.powi(3) - x.recip() * 2.0 + y.ln();
        let p = [0.7, 1.3];
        for axis in 0..2 {
            let analytic = f.partial(axis).eval(&p);
            assert!((analytic - fd(&f, &p, axis)).abs() < 1e-7, "axis {axis}");
        }
    }

    #[test]
    fn bump_values_and_support() {
        let b = ScalarField::bump(&[0.5, 0.5], 0.2, 3.0);
        assert_eq!(b.eval(&[0.5, 0.5]), 3.0);
        assert_eq!(b.eval(&[0.71, 0.5]), 0.0);
        assert_eq!(b.eval(&[0.5, 0.7]), 0.0);
        assert!(b.eval(&[0.6, 0.55]) > 0.0);
        match b.support() {
            Support::Bounded(bx) => {
                assert!((bx.lo[0] - 0.3).abs() < 1e-15 && (bx.hi[1] - 0.7).abs() < 1e-15)
            }
            s => panic!("unexpected support {s:?}"),
        }
        // derivatives stay inside the ball
        assert_eq!(b.partial(0).partial(1).eval(&[0.9, 0.9]), 0.0);
    }

    #[test]
    fn bump_derivatives_match_differences() {
        let b = ScalarField::bump(&[0.0, 0.0, 0.0], 1.0, 1.0);
        let p = [0.3, -0.2, 0.4];
        for axis in 0..3 {
            let d = b.partial(axis);
            assert!((d.eval(&p) - fd(&b, &p, axis)).abs() < 1e-8);
            for axis2 in 0..3 {
                let dd = d.partial(axis2).eval(&p);
                assert!((dd - fd(&d, &p, axis2)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn closure_fields_use_finite_differences() {
        let f = ScalarField::from_fn(|x| x[0] * x[0] * x[1]);
        let p = [2.0, 3.0];
        assert!((f.partial(0).eval(&p) - 12.0).abs() < 1e-8);
        assert!((f.partial(1).eval(&p) - 4.0).abs() < 1e-8);
        let g = ScalarField::with_gradient(|x| x[0] * x[1], |x| vec![x[1], x[0]]);
        assert_eq!(g.partial(0).eval(&p), 3.0);
        assert!((g.partial(0).partial(1).eval(&p) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn compose_rewrites_combinators() {
        let f = ScalarField::coord(0) * ScalarField::coord(1);
        let u = ScalarField::coord(0);
        let g = f.compose(&[u.clone() * 2.0, u.clone() + 1.0]);
        assert_eq!(g.eval(&[3.0]), 24.0);
        assert_eq!(g.partial(0).eval(&[3.0]), 4.0 * 3.0 + 2.0);
        let opaque = ScalarField::from_fn(|x| x[0] + 10.0 * x[1]);
        let h = opaque.compose(&[u.clone(), u.powi(2)]);
        assert!((h.partial(0).eval(&[2.0]) - 41.0).abs() < 1e-7);
    }

    #[test]
    fn constant_folding_prunes_zeros() {
        let z = ScalarField::coord(0) * 0.0;
        assert!(z.is_zero());
        assert!(ScalarField::constant(5.0).partial(2).is_zero());
        assert!(ScalarField::coord(1).partial(0).is_zero());
        assert!((ScalarField::coord(0) * ScalarField::coord(0))
            .partial(1)
            .is_zero());
    }
}
