//! Membership in the tetrablock, its closure, the symmetrized bidisc and
//! `Gamma2`, with witnesses and the maps between the two domains.

mod g2;
mod matrix;
mod tetra;

pub use g2::{embed_f, g2_membership, g2_slack, project_g, tirtha_check, G2Criterion, TirthaCheck};
pub(crate) use matrix::golden_min;
pub use matrix::{matrix_completion, Completion, Matrix2};
pub use tetra::{beta_decompose, tetra_membership, tetra_slack, TetraCriterion};

pub use crate::verdict::{Conflict, Region};

use serde::{Deserialize, Serialize};

use crate::complex_core::Complex;

/// A point `(x1, x2, x3)` of C^3. Serialised as `[x1, x2, x3]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Complex; 3]", into = "[Complex; 3]")]
pub struct TetraPoint {
    pub x1: Complex,
    pub x2: Complex,
    pub x3: Complex,
}

impl TetraPoint {
    pub fn new(x1: Complex, x2: Complex, x3: Complex) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn origin() -> Self {
        let z = Complex::new(0.0, 0.0);
        Self::new(z, z, z)
    }

    /// `(x2, x1, x3)`.
    pub fn swap(&self) -> Self {
        Self::new(self.x2, self.x1, self.x3)
    }

    pub fn is_finite(&self) -> bool {
        [self.x1, self.x2, self.x3]
            .iter()
            .all(|z| crate::complex_core::is_finite(*z))
    }

    /// Largest coordinate-wise distance.
    pub fn dist(&self, other: &TetraPoint) -> f64 {
        (self.x1 - other.x1)
            .norm()
            .max((self.x2 - other.x2).norm())
            .max((self.x3 - other.x3).norm())
    }
}

impl From<[Complex; 3]> for TetraPoint {
    fn from(v: [Complex; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<TetraPoint> for [Complex; 3] {
    fn from(x: TetraPoint) -> Self {
        [x.x1, x.x2, x.x3]
    }
}

/// A point `(s, p)` of C^2. Serialised as `[s, p]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Complex; 2]", into = "[Complex; 2]")]
pub struct SymPoint {
    pub s: Complex,
    pub p: Complex,
}

impl SymPoint {
    pub fn new(s: Complex, p: Complex) -> Self {
        Self { s, p }
    }

    /// `(z1 + z2, z1 z2)`.
    pub fn symmetrize(z1: Complex, z2: Complex) -> Self {
        Self::new(z1 + z2, z1 * z2)
    }

    pub fn is_finite(&self) -> bool {
        crate::complex_core::is_finite(self.s) && crate::complex_core::is_finite(self.p)
    }

    pub fn dist(&self, other: &SymPoint) -> f64 {
        (self.s - other.s).norm().max((self.p - other.p).norm())
    }
}

impl From<[Complex; 2]> for SymPoint {
    fn from(v: [Complex; 2]) -> Self {
        Self::new(v[0], v[1])
    }
}

impl From<SymPoint> for [Complex; 2] {
    fn from(y: SymPoint) -> Self {
        [y.s, y.p]
    }
}

/// Coefficients with `x1 = beta1 + conj(beta2) x3`, `x2 = beta2 + conj(beta1) x3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaPair {
    pub beta1: Complex,
    pub beta2: Complex,
}

impl BetaPair {
    pub fn weight(&self) -> f64 {
        self.beta1.norm() + self.beta2.norm()
    }
}

/// Outcome of one criterion in a membership battery.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: String,
    pub region: Region,
    #[serde(with = "crate::ext_float")]
    pub margin: f64,
}

/// Result of a membership battery.
///
/// `margin` is the canonical closure slack of the point (see
/// [`tetra_slack`] and [`g2_slack`]); `conflicts` lists criterion pairs that
/// landed on opposite sides of the band, which is a defect.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub overall: Region,
    #[serde(with = "crate::ext_float")]
    pub margin: f64,
    pub per_criterion: Vec<CriterionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Matrix2>,
    pub conflicts: Vec<Conflict>,
}

impl MembershipVerdict {
    pub fn criterion(&self, id: &str) -> Option<&CriterionResult> {
        self.per_criterion.iter().find(|c| c.id == id)
    }

    pub(crate) fn assemble(
        per_criterion: Vec<CriterionResult>,
        margin: f64,
        beta: Option<BetaPair>,
        matrix: Option<Matrix2>,
    ) -> Self {
        let (overall, conflicts) = crate::verdict::consensus(
            per_criterion
                .iter()
                .map(|c| (c.id.as_str(), c.region, c.margin)),
        );
        let inside = overall.in_closure();
        Self {
            overall,
            margin,
            per_criterion,
            beta: beta.filter(|_| inside),
            matrix: matrix.filter(|_| inside),
            conflicts,
        }
    }
}
