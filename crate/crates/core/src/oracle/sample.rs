use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::complex_core::Complex;
use crate::domains::{Matrix2, SymPoint, TetraPoint};

/// Share of `sample_tetra` draws whose matrix norm is pushed into
/// `(0.98, 1)`.
pub const SHELL_FRACTION: f64 = 0.3;

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn in_disc(rng: &mut ChaCha8Rng, radius: f64) -> Complex {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex::from_polar(r, 2.0 * PI * rng.gen::<f64>())
}

fn matrix_with_norm(rng: &mut ChaCha8Rng, norm: f64) -> Matrix2 {
    loop {
        let m = Matrix2::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
        let n = m.norm();
        if n > 1e-12 {
            return m.scale(Complex::new(norm / n, 0.0));
        }
    }
}

pub(crate) fn draw_tetra(rng: &mut ChaCha8Rng) -> TetraPoint {
    let u: f64 = rng.gen();
    let norm = if rng.gen::<f64>() < SHELL_FRACTION {
        1.0 - 0.02 * (1.0 - u)
    } else {
        u.sqrt()
    };
    matrix_with_norm(rng, norm).tetra_point()
}

/// Interior points `(a11, a22, det A)` of random strict contractions `A`.
///
/// The norm of `A` is `sqrt(u)` for most draws and lies in `(0.98, 1)` for
/// a [`SHELL_FRACTION`] share, so that near-boundary shells are populated.
pub fn sample_tetra(n: usize, seed: u64) -> Vec<TetraPoint> {
    let mut rng = rng_for(seed);
    (0..n).map(|_| draw_tetra(&mut rng)).collect()
}

pub(crate) fn draw_mixed_tetra(rng: &mut ChaCha8Rng) -> TetraPoint {
    let kind: f64 = rng.gen();
    if kind < 0.35 {
        draw_tetra(rng)
    } else if kind < 0.55 {
        let k = 3.0 + 10.0 * rng.gen::<f64>();
        let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let eps = if rng.gen::<f64>() < 0.2 {
            0.0
        } else {
            sign * 10f64.powf(-k)
        };
        matrix_with_norm(rng, 1.0 + eps).tetra_point()
    } else if kind < 0.75 {
        let norm = 1.0 + rng.gen::<f64>();
        matrix_with_norm(rng, norm).tetra_point()
    } else if kind < 0.85 {
        TetraPoint::new(in_disc(rng, 1.5), in_disc(rng, 1.5), in_disc(rng, 1.5))
    } else if kind < 0.95 {
        let (x1, x2) = (in_disc(rng, 1.3), in_disc(rng, 1.3));
        TetraPoint::new(x1, x2, x1 * x2)
    } else {
        let x3 = Complex::from_polar(1.0, 2.0 * PI * rng.gen::<f64>());
        let x2 = in_disc(rng, 1.1);
        let size = 10f64.powf(-3.0 - 9.0 * rng.gen::<f64>());
        let nudge = in_disc(rng, size);
        TetraPoint::new(x2.conj() * x3 + nudge, x2, x3)
    }
}

/// Points on both sides of the tetrablock boundary: interior draws,
/// `(a11, a22, det A)` for `||A||` within `1e-3` of 1 and beyond 1, points
/// of a polydisc of radius 1.5, product points `x3 = x1 x2`, and
/// perturbations of points with `|x3| = 1`.
pub fn sample_mixed_tetra(n: usize, seed: u64) -> Vec<TetraPoint> {
    let mut rng = rng_for(seed);
    (0..n).map(|_| draw_mixed_tetra(&mut rng)).collect()
}

pub(crate) fn draw_lambda0(rng: &mut ChaCha8Rng) -> Complex {
    loop {
        let z = in_disc(rng, 1.0);
        if z.norm() > 0.0 {
            return z;
        }
    }
}

/// Nodes uniform in the punctured unit disc.
pub fn sample_lambda0(n: usize, seed: u64) -> Vec<Complex> {
    let mut rng = rng_for(seed);
    (0..n).map(|_| draw_lambda0(&mut rng)).collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum G2Sampler {
    /// `z1`, `z2` uniform in the unit disc.
    #[default]
    Uniform,
    /// `z1 = z2 = 0`.
    Origin,
}

pub(crate) fn draw_g2(rng: &mut ChaCha8Rng, mode: G2Sampler) -> SymPoint {
    match mode {
        G2Sampler::Uniform => SymPoint::symmetrize(in_disc(rng, 1.0), in_disc(rng, 1.0)),
        G2Sampler::Origin => SymPoint::symmetrize(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)),
    }
}

/// `(z1 + z2, z1 z2)` with `z1`, `z2` uniform in the unit disc.
pub fn sample_g2(n: usize, seed: u64) -> Vec<SymPoint> {
    sample_g2_with(n, seed, G2Sampler::Uniform)
}

pub fn sample_g2_with(n: usize, seed: u64, mode: G2Sampler) -> Vec<SymPoint> {
    let mut rng = rng_for(seed);
    (0..n).map(|_| draw_g2(&mut rng, mode)).collect()
}
