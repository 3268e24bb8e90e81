use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

use super::TetraPoint;
use crate::complex_core::Complex;

/// A 2x2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a11: Complex,
    pub a12: Complex,
    pub a21: Complex,
    pub a22: Complex,
}

impl Matrix2 {
    pub fn new(a11: Complex, a12: Complex, a21: Complex, a22: Complex) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn zero() -> Self {
        let z = Complex::new(0.0, 0.0);
        Self::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let (z, o) = (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
        Self::new(o, z, z, o)
    }

    pub fn det(&self) -> Complex {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self::new(self.a11 * k, self.a12 * k, self.a21 * k, self.a22 * k)
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr()
    }

    /// Operator norm (largest singular value).
    ///
    /// Uses `s1 + s2 = sqrt(F + 2|det|)` and `s1 - s2 = sqrt(F - 2|det|)`
    /// with `F` the squared Frobenius norm.
    pub fn norm(&self) -> f64 {
        let f = self.frobenius_sq();
        let d = 2.0 * self.det().norm();
        0.5 * ((f + d).sqrt() + (f - d).max(0.0).sqrt())
    }

    /// `(a11, a22, det)`.
    pub fn tetra_point(&self) -> TetraPoint {
        TetraPoint::new(self.a11, self.a22, self.det())
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 + o.a11,
            self.a12 + o.a12,
            self.a21 + o.a21,
            self.a22 + o.a22,
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

/// A matrix with prescribed diagonal and determinant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub matrix: Matrix2,
    pub norm: f64,
    /// Achieved norm exceeds `1 + tol`.
    pub exceeds_ball: bool,
}

/// Completes `x` to a 2x2 matrix with `a11 = x1`, `a22 = x2`, `det = x3`.
///
/// The off-diagonal product is forced to `q = x1 x2 - x3`. In symmetric mode
/// both entries are the principal square root of `q`; otherwise
/// `a12 = t u`, `a21 = q / (t u)` with `u` the phase of `sqrt(q)` and `t > 0`
/// found by golden-section search on `log t`.
pub fn matrix_completion(x: &TetraPoint, symmetric: bool, tol: f64) -> Completion {
    let q = x.x1 * x.x2 - x.x3;
    let build = |a12: Complex, a21: Complex| Matrix2::new(x.x1, a12, a21, x.x2);
    let matrix = if q == Complex::new(0.0, 0.0) {
        build(q, q)
    } else if symmetric {
        let r = q.sqrt();
        build(r, r)
    } else {
        let root = q.sqrt();
        let u = root / root.norm();
        let at = |log_t: f64| {
            let a12 = u * log_t.exp();
            build(a12, q / a12)
        };
        let mid = root.norm().ln();
        let log_t = golden_min(|s| at(s).norm(), mid - 20.0, mid + 20.0, 100);
        at(log_t)
    };
    let norm = matrix.norm();
    Completion {
        matrix,
        norm,
        exceeds_ball: norm > 1.0 + tol,
    }
}

/// Golden-section minimiser; returns the abscissa.
pub(crate) fn golden_min<F: Fn(f64) -> f64>(g: F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..iters {
        if gc < gd {
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
    if gc < gd {
        c
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    // Largest singular value via the eigenvalues of A*A, computed from the
    // characteristic polynomial of the Hermitian product.
    fn norm_oracle(a: &Matrix2) -> f64 {
        let h = a.adjoint() * *a;
        let tr = (h.a11 + h.a22).re;
        let det = h.det().re;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        (tr / 2.0 + disc).sqrt()
    }

    #[test]
    fn norm_matches_eigen_oracle() {
        let mats = [
            Matrix2::new(c(0.3, 0.1), c(-0.2, 0.5), c(0.7, 0.0), c(0.1, -0.9)),
            Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)),
            Matrix2::new(c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)),
        ];
        for m in mats {
            assert!((m.norm() - norm_oracle(&m)).abs() < 1e-12);
        }
    }

    #[test]
    fn completion_of_origin_is_zero() {
        let k = matrix_completion(&TetraPoint::origin(), true, 1e-9);
        assert_eq!(k.matrix, Matrix2::zero());
        assert_eq!(k.norm, 0.0);
    }

    #[test]
    fn completion_of_product_point_is_diagonal() {
        let x = TetraPoint::new(c(0.5, 0.0), c(0.5, 0.0), c(0.25, 0.0));
        for sym in [true, false] {
            let k = matrix_completion(&x, sym, 1e-9);
            assert_eq!(k.matrix.a12, c(0.0, 0.0));
            assert_eq!(k.matrix.a21, c(0.0, 0.0));
            assert!((k.norm - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_completion_example() {
        let x = TetraPoint::new(c(0.3, 0.0), c(0.0, 0.0), c(0.2, 0.0));
        let k = matrix_completion(&x, true, 1e-9);
        assert!((k.matrix.a12 - c(0.0, 0.2f64.sqrt())).norm() < 1e-15);
        assert_eq!(k.matrix.a12, k.matrix.a21);
        assert!((k.matrix.det() - c(0.2, 0.0)).norm() < 1e-15);
        assert!(k.norm <= 1.0);
        assert!((k.norm - norm_oracle(&k.matrix)).abs() < 1e-12);
    }

    #[test]
    fn balanced_completion_matches_symmetric_norm() {
        let x = TetraPoint::new(c(0.2, -0.3), c(0.4, 0.1), c(-0.1, 0.25));
        let s = matrix_completion(&x, true, 1e-9);
        let n = matrix_completion(&x, false, 1e-9);
        assert!((s.norm - n.norm).abs() < 1e-10);
        assert!(n.matrix.tetra_point().dist(&x) < 1e-12);
    }

    #[test]
    fn exterior_completion_is_flagged() {
        let x = TetraPoint::new(c(0.9, 0.0), c(0.9, 0.0), c(-0.9, 0.0));
        assert!(matrix_completion(&x, true, 1e-9).exceeds_ball);
    }
}
