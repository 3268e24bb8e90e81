use super::{grid_angle, unit, Complex, Expr};
use crate::{Error, Result};

/// `|(z - w) / (1 - conj(w) z)|` on the open unit disc.
pub fn pseudohyperbolic(z: Complex, w: Complex) -> Result<f64> {
    for v in [z, w] {
        if !(v.norm() < 1.0) {
            return Err(Error::OutsideDisc(v.to_string()));
        }
    }
    Ok((z - w).norm() / (1.0 - w.conj() * z).norm())
}

/// A self-map of the closed disc built from the coordinate, constants in
/// the closed disc, disc automorphisms and products.
#[derive(Clone, Debug, PartialEq)]
pub enum SchurFunction {
    Coordinate,
    Constant(Complex),
    /// `(f - a) / (1 - conj(a) f)` with `|a| < 1`.
    Mobius {
        a: Complex,
        inner: Box<SchurFunction>,
    },
    Product(Box<SchurFunction>, Box<SchurFunction>),
}

impl SchurFunction {
    pub fn mobius(a: Complex, inner: SchurFunction) -> SchurFunction {
        if a == Complex::new(0.0, 0.0) {
            inner
        } else {
            SchurFunction::Mobius {
                a,
                inner: Box::new(inner),
            }
        }
    }

    pub fn product(f: SchurFunction, g: SchurFunction) -> SchurFunction {
        SchurFunction::Product(Box::new(f), Box::new(g))
    }

    pub fn eval(&self, z: Complex) -> Complex {
        match self {
            SchurFunction::Coordinate => z,
            SchurFunction::Constant(c) => *c,
            SchurFunction::Mobius { a, inner } => {
                let t = inner.eval(z);
                (t - a) / (1.0 - a.conj() * t)
            }
            SchurFunction::Product(f, g) => f.eval(z) * g.eval(z),
        }
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            SchurFunction::Coordinate => Expr::lambda(),
            SchurFunction::Constant(c) => Expr::constant(*c),
            SchurFunction::Mobius { a, inner } => Expr::blaschke(*a, inner.to_expr()),
            SchurFunction::Product(f, g) => Expr::mul(vec![f.to_expr(), g.to_expr()]),
        }
    }

    /// Max of `|f|` over `n` equispaced points of the unit circle.
    pub fn boundary_sup(&self, n: usize) -> f64 {
        (0..n)
            .map(|k| self.eval(unit(grid_angle(k, n))).norm())
            .fold(0.0, f64::max)
    }
}

/// Schur function `h` with `h(z1) = w1` and `h(z2) = w2`.
///
/// Returns the central solution `h = m_{-w1}(c * m_{z1}(z))` where `m_a` is
/// the automorphism sending `a` to 0 and `c = m_{w1}(w2) / m_{z1}(z2)`.
/// Problems within `tol` of infeasibility are clamped to `|c| = 1`.
pub fn solve_two_point_pick(
    z1: Complex,
    w1: Complex,
    z2: Complex,
    w2: Complex,
    tol: f64,
) -> Result<SchurFunction> {
    let nodes = pseudohyperbolic(z1, z2)?;
    let targets = pseudohyperbolic(w1, w2)?;
    if z1 == z2 {
        return Err(Error::CoincidentNodes);
    }
    if targets > nodes + tol {
        return Err(Error::PickInfeasible { targets, nodes });
    }
    let u = (z2 - z1) / (1.0 - z1.conj() * z2);
    let v = (w2 - w1) / (1.0 - w1.conj() * w2);
    let mut c = v / u;
    if c.norm() > 1.0 {
        c /= c.norm();
    }
    if c == Complex::new(0.0, 0.0) {
        return Ok(SchurFunction::Constant(w1));
    }
    let inner = SchurFunction::mobius(z1, SchurFunction::Coordinate);
    let scaled = if c == Complex::new(1.0, 0.0) {
        inner
    } else {
        SchurFunction::product(SchurFunction::Constant(c), inner)
    };
    Ok(SchurFunction::mobius(-w1, scaled))
}
