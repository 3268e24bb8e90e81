use serde::{Deserialize, Serialize};

use super::{matrix_completion, BetaPair, CriterionResult, MembershipVerdict, Region, TetraPoint};
use crate::complex_core::{d_norm, Extended};
use crate::{Error, Result};

/// The equivalent characterisations of the tetrablock that are evaluated in
/// closed form. The defining non-vanishing condition itself is checked by
/// brute force in [`crate::oracle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TetraCriterion {
    /// `||Psi(., x)|| < 1`, plus `|x2| < 1` in the product case.
    #[serde(rename = "2")]
    PsiNorm,
    /// `||Upsilon(., x)|| < 1`, plus `|x1| < 1` in the product case.
    #[serde(rename = "2'")]
    UpsilonNorm,
    #[serde(rename = "3")]
    Ineq3,
    #[serde(rename = "3'")]
    Ineq3Swapped,
    #[serde(rename = "4")]
    Ineq4,
    #[serde(rename = "4'")]
    Ineq4Swapped,
    #[serde(rename = "5")]
    Ineq5,
    #[serde(rename = "6")]
    Ineq6,
    /// Minimal-norm completion is a strict contraction.
    #[serde(rename = "7")]
    Contraction,
    /// Symmetric completion is a strict contraction.
    #[serde(rename = "8")]
    SymmetricContraction,
    /// `|x3| < 1` and the canonical beta pair has `|beta1| + |beta2| < 1`.
    #[serde(rename = "9")]
    BetaPair,
}

impl TetraCriterion {
    pub const ALL: [TetraCriterion; 11] = [
        TetraCriterion::PsiNorm,
        TetraCriterion::UpsilonNorm,
        TetraCriterion::Ineq3,
        TetraCriterion::Ineq3Swapped,
        TetraCriterion::Ineq4,
        TetraCriterion::Ineq4Swapped,
        TetraCriterion::Ineq5,
        TetraCriterion::Ineq6,
        TetraCriterion::Contraction,
        TetraCriterion::SymmetricContraction,
        TetraCriterion::BetaPair,
    ];

    pub fn id(self) -> &'static str {
        match self {
            TetraCriterion::PsiNorm => "2",
            TetraCriterion::UpsilonNorm => "2'",
            TetraCriterion::Ineq3 => "3",
            TetraCriterion::Ineq3Swapped => "3'",
            TetraCriterion::Ineq4 => "4",
            TetraCriterion::Ineq4Swapped => "4'",
            TetraCriterion::Ineq5 => "5",
            TetraCriterion::Ineq6 => "6",
            TetraCriterion::Contraction => "7",
            TetraCriterion::SymmetricContraction => "8",
            TetraCriterion::BetaPair => "9",
        }
    }

    pub fn from_id(id: &str) -> Option<TetraCriterion> {
        Self::ALL.into_iter().find(|c| c.id() == id)
    }

    /// Signed slack of the governing strict inequality.
    pub fn margin(self, x: &TetraPoint, band: f64) -> f64 {
        let (a1, a2, a3) = (x.x1.norm(), x.x2.norm(), x.x3.norm());
        let q = (x.x1 * x.x2 - x.x3).norm();
        let r1 = (x.x1 - x.x2.conj() * x.x3).norm();
        let r2 = (x.x2 - x.x1.conj() * x.x3).norm();
        match self {
            TetraCriterion::PsiNorm => psi_margin(x),
            TetraCriterion::UpsilonNorm => psi_margin(&x.swap()),
            TetraCriterion::Ineq3 => (1.0 - a2 * a2) - r1 - q,
            TetraCriterion::Ineq3Swapped => (1.0 - a1 * a1) - r2 - q,
            TetraCriterion::Ineq4 => (1.0 - (a1 * a1 - a2 * a2 + a3 * a3 + 2.0 * r2)).min(1.0 - a2),
            TetraCriterion::Ineq4Swapped => {
                (1.0 - (-a1 * a1 + a2 * a2 + a3 * a3 + 2.0 * r1)).min(1.0 - a1)
            }
            TetraCriterion::Ineq5 => (1.0 - (a1 * a1 + a2 * a2 - a3 * a3 + 2.0 * q)).min(1.0 - a3),
            TetraCriterion::Ineq6 => (1.0 - a3 * a3) - r1 - r2,
            TetraCriterion::Contraction => 1.0 - matrix_completion(x, false, band).norm,
            TetraCriterion::SymmetricContraction => 1.0 - matrix_completion(x, true, band).norm,
            TetraCriterion::BetaPair => match beta_decompose(x, band) {
                Ok(b) => 1.0 - b.weight(),
                Err(_) => 1.0 - a3,
            },
        }
    }
}

fn psi_margin(x: &TetraPoint) -> f64 {
    match d_norm(x) {
        Extended::Infinite => f64::NEG_INFINITY,
        Extended::Finite(d) if x.x2.norm_sqr() < 1.0 => 1.0 - d,
        // Product case with |x2| >= 1: Psi is the constant x1 but the point
        // is only in the closure when |x2| = 1 as well.
        Extended::Finite(d) => (1.0 - d).min(1.0 - x.x2.norm()),
    }
}

/// Canonical closure slack `1 - |x3|^2 - |x1 - conj(x2) x3| - |x2 - conj(x1) x3|`.
///
/// Nonnegative exactly on the closed tetrablock; used wherever a single
/// membership margin is needed (verification grids, sampler shells).
pub fn tetra_slack(x: &TetraPoint) -> f64 {
    (1.0 - x.x3.norm_sqr())
        - (x.x1 - x.x2.conj() * x.x3).norm()
        - (x.x2 - x.x1.conj() * x.x3).norm()
}

/// Unique solution of `x1 = b1 + conj(b2) x3`, `x2 = b2 + conj(b1) x3`.
pub fn beta_decompose(x: &TetraPoint, tol: f64) -> Result<BetaPair> {
    let m = x.x3.norm();
    if m >= 1.0 - tol {
        return Err(Error::OnTorusX3(m));
    }
    let d = 1.0 - x.x3.norm_sqr();
    Ok(BetaPair {
        beta1: (x.x1 - x.x2.conj() * x.x3) / d,
        beta2: (x.x2 - x.x1.conj() * x.x3) / d,
    })
}

/// Evaluates the selected criteria and combines them.
///
/// Witnesses: the canonical beta pair (when `|x3| < 1`) and the symmetric
/// completion, both attached only when the point is not exterior.
pub fn tetra_membership(
    x: &TetraPoint,
    criteria: &[TetraCriterion],
    band: f64,
) -> MembershipVerdict {
    let per_criterion = criteria
        .iter()
        .map(|c| {
            let margin = c.margin(x, band);
            CriterionResult {
                id: c.id().to_string(),
                region: Region::classify(margin, band),
                margin,
            }
        })
        .collect();
    let beta = beta_decompose(x, band).ok();
    let matrix = Some(matrix_completion(x, true, band).matrix);
    MembershipVerdict::assemble(per_criterion, tetra_slack(x), beta, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex_core::Complex;

    const BAND: f64 = 1e-9;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn tp(a: f64, b: f64, p: f64) -> TetraPoint {
        TetraPoint::new(c(a), c(b), c(p))
    }

    #[test]
    fn origin_is_interior_everywhere() {
        let v = tetra_membership(&TetraPoint::origin(), &TetraCriterion::ALL, BAND);
        assert_eq!(v.overall, Region::Interior);
        assert!(v.per_criterion.iter().all(|r| r.region == Region::Interior));
        assert_eq!(v.criterion("3").unwrap().margin, 1.0);
    }

    #[test]
    fn unit_first_coordinate_is_boundary() {
        let v = tetra_membership(&tp(1.0, 0.0, 0.0), &TetraCriterion::ALL, BAND);
        assert_eq!(v.overall, Region::Boundary);
        assert_eq!(v.criterion("3").unwrap().margin, 0.0);
        assert_eq!(v.criterion("5").unwrap().margin, 0.0);
        assert!(v.conflicts.is_empty());
    }

    #[test]
    fn interior_example_with_beta_witness() {
        let x = tp(0.3, 0.0, 0.2);
        let v = tetra_membership(&x, &TetraCriterion::ALL, BAND);
        assert_eq!(v.overall, Region::Interior);
        assert!(v.conflicts.is_empty());
        let b = v.beta.unwrap();
        assert!((b.beta1 - c(0.3125)).norm() < 1e-15);
        assert!((b.beta2 - c(-0.0625)).norm() < 1e-15);
        assert!((b.weight() - 0.375).abs() < 1e-15);
        assert!(v.matrix.is_some());
    }

    #[test]
    fn beta_decompose_examples() {
        let b = beta_decompose(&TetraPoint::origin(), BAND).unwrap();
        assert_eq!(b.weight(), 0.0);

        let x = tp(0.3, 0.0, 0.2);
        let b = beta_decompose(&x, BAND).unwrap();
        assert_eq!(b.beta1 + b.beta2.conj() * x.x3, x.x1);

        let b = beta_decompose(&tp(0.5, 0.5, 0.25), BAND).unwrap();
        assert!((b.beta1 - c(0.4)).norm() < 1e-15);
        assert!((b.beta2 - c(0.4)).norm() < 1e-15);
        assert!((b.weight() - 0.8).abs() < 1e-15);

        assert!(matches!(
            beta_decompose(&tp(0.0, 0.0, 1.0), BAND),
            Err(Error::OnTorusX3(_))
        ));
    }

    #[test]
    fn product_point_beyond_unit_circle_is_exterior() {
        // (0, 2, 0): Psi is the zero constant, yet 1 - 2w vanishes at w = 1/2.
        let v = tetra_membership(&tp(0.0, 2.0, 0.0), &TetraCriterion::ALL, BAND);
        assert_eq!(v.overall, Region::Exterior);
        assert!(v.conflicts.is_empty(), "{:?}", v.conflicts);
    }

    #[test]
    fn product_point_on_torus_is_boundary() {
        let v = tetra_membership(&tp(1.0, 1.0, 1.0), &TetraCriterion::ALL, BAND);
        assert_eq!(v.overall, Region::Boundary);
        assert!(v.conflicts.is_empty());
    }

    #[test]
    fn clearly_exterior_point() {
        let v = tetra_membership(&tp(1.2, 0.0, 0.0), &TetraCriterion::ALL, BAND);
        assert_eq!(v.overall, Region::Exterior);
        assert!(v.conflicts.is_empty());
        assert!(v.beta.is_none());
    }

    #[test]
    fn criterion_ids_round_trip() {
        for c in TetraCriterion::ALL {
            assert_eq!(TetraCriterion::from_id(c.id()), Some(c));
        }
    }
}
