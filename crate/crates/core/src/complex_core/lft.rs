use serde::{Deserialize, Serialize};

use super::{grid_angle, unit, Complex, Extended, DEGENERATE_TOL, DENOM_FLOOR};
use crate::domains::TetraPoint;
use crate::{Error, Result};

/// The map `z -> (alpha z + beta) / (gamma z + delta)`.
///
/// `constant` is set for maps that are known to be constant even where the
/// quotient is `0/0`, which is how the product case of `Psi` is carried.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFractional {
    pub alpha: Complex,
    pub beta: Complex,
    pub gamma: Complex,
    pub delta: Complex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<Complex>,
}

impl LinearFractional {
    pub fn new(alpha: Complex, beta: Complex, gamma: Complex, delta: Complex) -> Result<Self> {
        let zero = Complex::new(0.0, 0.0);
        if (alpha == zero && beta == zero) || (gamma == zero && delta == zero) {
            return Err(Error::DegenerateMap);
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
            constant: None,
        })
    }

    pub fn constant(c: Complex) -> Self {
        Self {
            alpha: Complex::new(0.0, 0.0),
            beta: c,
            gamma: Complex::new(0.0, 0.0),
            delta: Complex::new(1.0, 0.0),
            constant: Some(c),
        }
    }

    /// `Psi(z, x) = (x3 z - x1) / (x2 z - 1)`, constant `x1` when `x1 x2 = x3`.
    pub fn psi(x: &TetraPoint) -> Self {
        let one = Complex::new(1.0, 0.0);
        Self {
            alpha: x.x3,
            beta: -x.x1,
            gamma: x.x2,
            delta: -one,
            constant: is_degenerate(x).then_some(x.x1),
        }
    }

    /// `Upsilon(z, x) = Psi(z, (x2, x1, x3))`.
    pub fn upsilon(x: &TetraPoint) -> Self {
        Self::psi(&x.swap())
    }

    /// Blaschke factor `(z - a) / (1 - conj(a) z)`.
    pub fn blaschke(a: Complex) -> Self {
        Self {
            alpha: Complex::new(1.0, 0.0),
            beta: -a,
            gamma: -a.conj(),
            delta: Complex::new(1.0, 0.0),
            constant: None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant.is_some()
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        if let Some(c) = self.constant {
            return Ok(c);
        }
        let den = self.gamma * z + self.delta;
        let m = den.norm();
        if m <= DENOM_FLOOR {
            return Err(Error::DenominatorVanishes(m));
        }
        Ok((self.alpha * z + self.beta) / den)
    }
}

/// Whether `x1 x2 = x3` up to `DEGENERATE_TOL * (1 + |x3|)`.
pub fn is_degenerate(x: &TetraPoint) -> bool {
    (x.x1 * x.x2 - x.x3).norm() <= DEGENERATE_TOL * (1.0 + x.x3.norm())
}

/// Image of the open unit disc under a linear-fractional map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscImage {
    pub center: Complex,
    pub radius: f64,
    pub degenerate: bool,
}

/// Disc `Psi(., x)` maps the unit disc onto.
pub fn psi_image_disc(x: &TetraPoint) -> Result<DiscImage> {
    if is_degenerate(x) {
        return Ok(DiscImage {
            center: x.x1,
            radius: 0.0,
            degenerate: true,
        });
    }
    let d = 1.0 - x.x2.norm_sqr();
    if d <= 0.0 {
        return Err(Error::NormInfinite);
    }
    Ok(DiscImage {
        center: (x.x1 - x.x2.conj() * x.x3) / d,
        radius: (x.x1 * x.x2 - x.x3).norm() / d,
        degenerate: false,
    })
}

pub fn upsilon_image_disc(x: &TetraPoint) -> Result<DiscImage> {
    psi_image_disc(&x.swap())
}

/// `D(x) = sup |Psi(z, x)|` over the unit disc, in closed form.
pub fn d_norm(x: &TetraPoint) -> Extended {
    let d = 1.0 - x.x2.norm_sqr();
    if d > 0.0 {
        let num = (x.x1 - x.x2.conj() * x.x3).norm() + (x.x1 * x.x2 - x.x3).norm();
        Extended::Finite(num / d)
    } else if is_degenerate(x) {
        Extended::Finite(x.x1.norm())
    } else {
        Extended::Infinite
    }
}

/// Largest `|f|` over `n` equispaced points of the unit circle, and the
/// index where it occurs.
pub fn boundary_grid_max(f: &LinearFractional, n: usize) -> Result<(f64, usize)> {
    if n < 16 {
        return Err(Error::InvalidGrid { got: n, min: 16 });
    }
    if let Some(c) = f.constant {
        return Ok((c.norm(), 0));
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for k in 0..n {
        let theta = grid_angle(k, n);
        let v = f
            .eval(unit(theta))
            .map_err(|_| Error::PoleOnBoundary(theta))?
            .norm();
        if v > best.0 {
            best = (v, k);
        }
    }
    Ok(best)
}

/// Boundary sup-norm of `f` by brute force.
///
/// Scans `n` equispaced points of the unit circle, then polishes the best
/// one with a golden-section search confined to the two adjacent grid
/// cells. The result is never below the raw grid maximum.
pub fn sup_norm_grid(f: &LinearFractional, n: usize) -> Result<f64> {
    let (grid_max, k) = boundary_grid_max(f, n)?;
    if f.is_constant() {
        return Ok(grid_max);
    }
    let h = grid_angle(1, n);
    let center = grid_angle(k, n);
    let g = |t: f64| f.eval(unit(t)).map(|v| v.norm()).unwrap_or(f64::INFINITY);
    let refined = golden_max(g, center - h, center + h, 90);
    Ok(grid_max.max(refined))
}

/// Golden-section maximisation of a function assumed unimodal on `[lo, hi]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(g: F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..iters {
        if gc > gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - inv_phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + inv_phi * (hi - lo);
            gd = g(d);
        }
    }
    gc.max(gd)
}
