//! Complex-scalar utilities shared by every other module.

mod expr;
mod lft;
mod pick;

pub use expr::Expr;
pub use lft::{
    boundary_grid_max, d_norm, is_degenerate, psi_image_disc, sup_norm_grid, upsilon_image_disc,
    DiscImage, LinearFractional,
};
pub use pick::{pseudohyperbolic, solve_two_point_pick, SchurFunction};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::PI;

/// Scalar field for every point of C, C^2 and C^3 in the crate.
pub type Complex = num_complex::Complex64;

/// Denominators at or below this modulus are classified as poles.
pub const DENOM_FLOOR: f64 = 1e-14;

/// Relative tolerance used to detect the product case `x1 x2 = x3`.
pub const DEGENERATE_TOL: f64 = 1e-12;

pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Point of the unit circle at angle `theta`.
pub fn unit(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

/// `k`-th of `n` equispaced angles on the circle.
pub(crate) fn grid_angle(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// Radii in `[0, r]` clustered toward `r` (Chebyshev-like `sin` spacing).
pub(crate) fn clustered_radii(n: usize, r: f64) -> Vec<f64> {
    if n <= 1 {
        return vec![r];
    }
    (0..n)
        .map(|k| r * (0.5 * PI * k as f64 / (n - 1) as f64).sin())
        .collect()
}

/// A nonnegative real or the infinite marker.
///
/// `d_norm` never hands out a floating infinity; callers compare through
/// [`Extended::le`] or match on the variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn le(self, bound: f64) -> bool {
        matches!(self, Extended::Finite(v) if v <= bound)
    }

    /// `bound - self`, with `-inf` for the infinite marker.
    pub fn slack_below(self, bound: f64) -> f64 {
        match self {
            Extended::Finite(v) => bound - v,
            Extended::Infinite => f64::NEG_INFINITY,
        }
    }

    pub fn max(self, other: Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a.max(b)),
            _ => Extended::Infinite,
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_f64(*v),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = crate::ext_float::deserialize(d)?;
        Ok(if v.is_finite() {
            Extended::Finite(v)
        } else {
            Extended::Infinite
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radii_are_clustered_and_end_at_r() {
        let r = clustered_radii(64, 1.0);
        assert_eq!(r[0], 0.0);
        assert_eq!(r[63], 1.0);
        assert!(r[63] - r[62] < r[1] - r[0]);
    }

    #[test]
    fn extended_ordering() {
        assert!(Extended::Finite(0.5).le(0.5));
        assert!(!Extended::Infinite.le(1e300));
        assert_eq!(Extended::Infinite.slack_below(1.0), f64::NEG_INFINITY);
        assert_eq!(
            Extended::Finite(0.2).max(Extended::Finite(0.3)),
            Extended::Finite(0.3)
        );
    }
}
