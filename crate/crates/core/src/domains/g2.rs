use serde::{Deserialize, Serialize};

use super::{BetaPair, CriterionResult, MembershipVerdict, Region, SymPoint, TetraPoint};
use crate::complex_core::{grid_angle, unit, Complex};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum G2Criterion {
    /// `|p| < 1` and `|beta| < 1` with `beta = (s - conj(s) p) / (1 - |p|^2)`.
    Beta,
    /// Both roots of `z^2 - s z + p` lie in the unit disc.
    Roots,
}

impl G2Criterion {
    pub const ALL: [G2Criterion; 2] = [G2Criterion::Beta, G2Criterion::Roots];

    pub fn id(self) -> &'static str {
        match self {
            G2Criterion::Beta => "beta",
            G2Criterion::Roots => "roots",
        }
    }

    pub fn margin(self, y: &SymPoint, band: f64) -> f64 {
        match self {
            G2Criterion::Beta => {
                let gap = 1.0 - y.p.norm();
                if gap > band {
                    gap.min(1.0 - canonical_beta(y).norm())
                } else {
                    g2_slack(y)
                }
            }
            G2Criterion::Roots => {
                let (r1, r2) = roots(y);
                1.0 - r1.norm().max(r2.norm())
            }
        }
    }
}

fn canonical_beta(y: &SymPoint) -> Complex {
    (y.s - y.s.conj() * y.p) / (1.0 - y.p.norm_sqr())
}

/// Roots of `z^2 - s z + p`, larger one computed first for stability.
fn roots(y: &SymPoint) -> (Complex, Complex) {
    let disc = (y.s * y.s - 4.0 * y.p).sqrt();
    let plus = y.s + disc;
    let minus = y.s - disc;
    let big = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    } * 0.5;
    let small = if big == Complex::new(0.0, 0.0) {
        big
    } else {
        y.p / big
    };
    (big, small)
}

/// Closure slack `min(1 - |p|, 1 - |p|^2 - |s - conj(s) p|, 2 - |s|)`.
///
/// Nonnegative exactly on `Gamma2`; division-free so it stays meaningful on
/// the torus `|p| = 1`.
pub fn g2_slack(y: &SymPoint) -> f64 {
    (1.0 - y.p.norm())
        .min((1.0 - y.p.norm_sqr()) - (y.s - y.s.conj() * y.p).norm())
        .min(2.0 - y.s.norm())
}

/// Membership of `(s, p)` in `G2`, with the root criterion as cross-check.
///
/// The beta witness is carried in `beta1` of a [`BetaPair`] (`beta2 = 0`).
pub fn g2_membership(y: &SymPoint, band: f64) -> MembershipVerdict {
    let per_criterion = G2Criterion::ALL
        .iter()
        .map(|c| {
            let margin = c.margin(y, band);
            CriterionResult {
                id: c.id().to_string(),
                region: Region::classify(margin, band),
                margin,
            }
        })
        .collect();
    let beta = (1.0 - y.p.norm() > band).then(|| BetaPair {
        beta1: canonical_beta(y),
        beta2: Complex::new(0.0, 0.0),
    });
    MembershipVerdict::assemble(per_criterion, g2_slack(y), beta, None)
}

/// `f(s, p) = (s/2, s/2, p)`.
pub fn embed_f(y: &SymPoint) -> TetraPoint {
    let h = y.s * 0.5;
    TetraPoint::new(h, h, y.p)
}

/// `g(a, b, p) = (a + b, p)`.
pub fn project_g(x: &TetraPoint) -> SymPoint {
    SymPoint::new(x.x1 + x.x2, x.x3)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TirthaCheck {
    /// Every slice point `(x1 + z x2, z x3)` on the grid is interior.
    pub holds: bool,
    pub region: Region,
    pub worst_z: Complex,
    #[serde(with = "crate::ext_float")]
    pub margin: f64,
}

/// Checks `(x1 + z x2, z x3)` against `G2` for `n` points `z` of the circle.
///
/// The returned margin is the smallest beta-criterion margin on the grid.
pub fn tirtha_check(x: &TetraPoint, n: usize, band: f64) -> Result<TirthaCheck> {
    if n < 16 {
        return Err(Error::InvalidGrid { got: n, min: 16 });
    }
    let mut worst = (f64::INFINITY, unit(0.0));
    for k in 0..n {
        let z = unit(grid_angle(k, n));
        let y = SymPoint::new(x.x1 + z * x.x2, z * x.x3);
        let m = G2Criterion::Beta.margin(&y, band);
        if m < worst.0 {
            worst = (m, z);
        }
    }
    let region = Region::classify(worst.0, band);
    Ok(TirthaCheck {
        holds: region == Region::Interior,
        region,
        worst_z: worst.1,
        margin: worst.0,
    })
}
