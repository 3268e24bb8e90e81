//! Brute-force ground truth: grid minima of the defining polynomials,
//! domain samplers and the equivalence sweep.

mod sample;
mod sweep;

pub use sample::{
    sample_g2, sample_g2_with, sample_lambda0, sample_mixed_tetra, sample_tetra, G2Sampler,
    SHELL_FRACTION,
};
pub use sweep::{
    equivalence_sweep, Campaign, Classification, DisagreementRecord, SweepConfig, SweepReport,
    SweepSummary,
};

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;
use serde::{Deserialize, Serialize};

use crate::complex_core::{clustered_radii, grid_angle, unit, Complex};
use crate::domains::TetraPoint;
use crate::schwarz::{Branch, SchwarzProblem};
use crate::{Error, Result};

/// Default radius of the closed sub-bidisc searched by the sweep.
pub const SWEEP_RADIUS: f64 = 1.0 - 1e-12;

/// Minimum of `|A(z) - w B(z)|` over `|z|, |w| <= r` for affine `A`, `B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMinimum {
    #[serde(with = "crate::ext_float")]
    pub min_modulus: f64,
    /// `min_z (|A(z)| - r |B(z)|)`; negative when the pencil has a zero in
    /// the sub-bidisc.
    #[serde(with = "crate::ext_float")]
    pub slack: f64,
    pub z: Complex,
    pub w: Complex,
}

/// `A(z) = a0 + a1 z`, `B(z) = b0 + b1 z`.
#[derive(Clone, Copy, Debug)]
struct Pencil {
    a0: Complex,
    a1: Complex,
    b0: Complex,
    b1: Complex,
}

impl Pencil {
    fn slack(&self, z: Complex, r: f64) -> f64 {
        (self.a0 + self.a1 * z).norm() - r * (self.b0 + self.b1 * z).norm()
    }

    /// The `w` of modulus at most `r` closest to a zero of `A(z) - w B(z)`.
    fn best_w(&self, z: Complex, r: f64) -> Complex {
        let a = self.a0 + self.a1 * z;
        let b = self.b0 + self.b1 * z;
        if b.norm() == 0.0 {
            return Complex::new(0.0, 0.0);
        }
        let q = a / b;
        if q.norm() <= r {
            q
        } else {
            q * (r / q.norm())
        }
    }
}

struct Local {
    pencil: Pencil,
    r: f64,
}

impl CostFunction for Local {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let rho = p[0].clamp(0.0, self.r);
        Ok(self.pencil.slack(Complex::from_polar(rho, p[1]), self.r))
    }
}

fn pencil_minimum(pencil: Pencil, n: usize, r: f64) -> GridMinimum {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut radii = clustered_radii(n, r);
    radii.extend((1..=12).map(|k| r * 10f64.powi(-k)));
    let units: Vec<Complex> = (0..n).map(|k| unit(grid_angle(k, n))).collect();
    for rho in radii {
        for (k, u) in units.iter().enumerate() {
            let s = pencil.slack(u * rho, r);
            if s < best.0 {
                best = (s, rho, grid_angle(k, n));
            }
        }
    }
    if pencil.a1.norm() > 0.0 {
        let root = -pencil.a0 / pencil.a1;
        if root.norm() <= r {
            let s = pencil.slack(root, r);
            if s < best.0 {
                best = (s, root.norm(), root.arg());
            }
        }
    }
    let h = grid_angle(1, n);
    let simplex = vec![
        vec![best.1, best.2],
        vec![(best.1 - 0.5 * r / n as f64).max(0.0), best.2],
        vec![best.1, best.2 + 0.5 * h],
    ];
    if let Ok(solver) = NelderMead::new(simplex).with_sd_tolerance(1e-16) {
        let local = Local { pencil, r };
        if let Ok(res) = Executor::new(local, solver)
            .configure(|s| s.max_iters(150))
            .timer(false)
            .run()
        {
            let state = res.state();
            if let Some(p) = state.best_param.as_ref() {
                if state.best_cost < best.0 {
                    best = (state.best_cost, p[0].clamp(0.0, r), p[1]);
                }
            }
        }
    }
    let z = Complex::from_polar(best.1, best.2);
    GridMinimum {
        min_modulus: best.0.max(0.0),
        slack: best.0,
        z,
        w: pencil.best_w(z, r),
    }
}

fn check_grid(n: usize, r: f64) -> Result<()> {
    if n < 16 {
        return Err(Error::InvalidGrid { got: n, min: 16 });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidRadius(r));
    }
    Ok(())
}

/// Minimum of `|1 - z x1 - w x2 + z w x3|` over `|z|, |w| <= r`.
///
/// `z` runs over an `n x n` polar grid (radii clustered toward `r`, plus
/// radii `r 10^-k` near the origin and the zero of `A`) followed by a local
/// search; the minimum over `w` is exact.
pub fn bidisc_nonvanishing(x: &TetraPoint, n: usize, r: f64) -> Result<GridMinimum> {
    check_grid(n, r)?;
    let one = Complex::new(1.0, 0.0);
    Ok(pencil_minimum(
        Pencil {
            a0: one,
            a1: -x.x1,
            b0: x.x2,
            b1: -x.x3,
        },
        n,
        r,
    ))
}

/// Grid counterpart of the non-vanishing condition for the Schwarz problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Condition7Grid {
    /// The margin is not below `-band`.
    pub holds: bool,
    /// Slack of the applicable branches divided by `|lambda0|`, combined as
    /// in the analytic condition.
    #[serde(with = "crate::ext_float")]
    pub margin: f64,
    /// `lambda0 - a z - b lambda0 w + p z w`.
    pub branch1: GridMinimum,
    /// `lambda0 - a lambda0 z - b w + p z w`.
    pub branch2: GridMinimum,
}

/// Searches both polynomials of the non-vanishing condition for zeros in the
/// sub-bidisc of radius `r`.
///
/// A negative margin certifies a zero; a positive one is only consistent
/// with non-vanishing on the grid.
pub fn condition7_grid(
    prob: &SchwarzProblem<TetraPoint>,
    n: usize,
    r: f64,
    band: f64,
) -> Result<Condition7Grid> {
    check_grid(n, r)?;
    let l0 = prob.lambda0;
    let TetraPoint {
        x1: a,
        x2: b,
        x3: p,
    } = prob.target;
    let branch1 = pencil_minimum(
        Pencil {
            a0: l0,
            a1: -a,
            b0: b * l0,
            b1: -p,
        },
        n,
        r,
    );
    let branch2 = pencil_minimum(
        Pencil {
            a0: l0,
            a1: -a * l0,
            b0: b,
            b1: -p,
        },
        n,
        r,
    );
    let l = l0.norm();
    let branch = Branch::of(&prob.target, band);
    let mut margin = f64::NEG_INFINITY;
    if branch != Branch::ALeB {
        margin = margin.max(branch1.slack / l);
    }
    if branch != Branch::BLeA {
        margin = margin.max(branch2.slack / l);
    }
    Ok(Condition7Grid {
        holds: margin >= -band,
        margin,
        branch1,
        branch2,
    })
}
