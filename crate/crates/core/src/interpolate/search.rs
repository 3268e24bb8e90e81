//! Strategy S3: every Schur-class `F` with `F(0) = [[0, c], [0, 0]]` is
//! `M_{-B}(lambda V)` with `B = c E12` and `V` Schur class, so the problem
//! reduces to finding `c` and a completion `A` of `x` with
//! `||M_B(A)|| <= |lambda0|` and then taking `V` constant.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;

use super::{AnalyticDisc, Strategy, VERIFY_TOL};
use crate::complex_core::{Complex, Expr};
use crate::domains::{Matrix2, TetraPoint};

/// `M_B(X)` for `B = c E12`.
fn mobius(c: Complex, x: &Matrix2) -> Option<Matrix2> {
    let s = (1.0 - c.norm_sqr()).sqrt();
    let d = 1.0 - c.conj() * x.a12;
    if d.norm() < 1e-12 {
        return None;
    }
    Some(Matrix2::new(
        x.a11 * s / d,
        (x.a12 - c) / d,
        (x.a21 + c.conj() * x.det()) / d,
        x.a22 * s / d,
    ))
}

/// Unconstrained parameters `(t, u, v)` to `c` in the disc and the
/// completion with `a12 = e^t sqrt(q)`, `a21 = e^-t sqrt(q)`.
fn unpack(x: &TetraPoint, w: &[f64]) -> (Complex, Matrix2) {
    let c = Complex::new(w[1], w[2]) / (1.0 + w[1] * w[1] + w[2] * w[2]).sqrt();
    let root = (x.x1 * x.x2 - x.x3).sqrt();
    let a = Matrix2::new(x.x1, root * w[0].exp(), root * (-w[0]).exp(), x.x2);
    (c, a)
}

struct Cost {
    x: TetraPoint,
}

impl CostFunction for Cost {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, w: &Self::Param) -> Result<f64, argmin::core::Error> {
        let (c, a) = unpack(&self.x, w);
        Ok(mobius(c, &a).map_or(1e6, |m| m.norm()))
    }
}

fn minimise(x: &TetraPoint, start: [f64; 3]) -> Option<(Vec<f64>, f64)> {
    let simplex = (0..4)
        .map(|i| {
            let mut p = start.to_vec();
            if i > 0 {
                p[i - 1] += 0.5;
            }
            p
        })
        .collect();
    let solver = NelderMead::new(simplex).with_sd_tolerance(1e-15).ok()?;
    let res = Executor::new(Cost { x: *x }, solver)
        .configure(|s| s.max_iters(3000))
        .run()
        .ok()?;
    let state = res.state();
    Some((state.best_param.clone()?, state.best_cost))
}

pub(super) fn strategy_s3(lambda0: Complex, x: &TetraPoint) -> Result<AnalyticDisc, String> {
    let l = lambda0.norm();
    let starts = [
        [0.0, 0.0, 0.0],
        [0.0, 0.6, 0.0],
        [0.0, -0.6, 0.0],
        [0.0, 0.0, 0.6],
        [0.0, 0.0, -0.6],
    ];
    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in starts {
        if let Some(run) = minimise(x, start) {
            if best.as_ref().is_none_or(|b| run.1 < b.1) {
                best = Some(run);
            }
        }
        if best.as_ref().is_some_and(|b| b.1 <= l) {
            break;
        }
    }
    let (w, cost) = best.ok_or_else(|| "S3: optimiser failed".to_string())?;
    if cost > l + VERIFY_TOL * 0.1 {
        return Err(format!(
            "S3: best ||M_B(A)|| = {cost} exceeds |lambda0| = {l}"
        ));
    }
    let (c, a) = unpack(x, &w);
    let m = mobius(c, &a).ok_or_else(|| "S3: singular Moebius map".to_string())?;
    let v = m.scale(Complex::new(1.0, 0.0) / lambda0);
    let s = (1.0 - c.norm_sqr()).sqrt();
    let det = v.det();
    // 1 / (1 + conj(c) V12 lambda)
    let inv = Expr::inverse_linear(-c * v.a12.conj());
    let lam = Expr::lambda;
    let lam2 = || Expr::mul(vec![lam(), lam()]);
    let over = |e: Expr| Expr::mul(vec![e, inv.clone()]);
    let f11 = over(Expr::scale(v.a11 * s, lam()));
    let f22 = over(Expr::scale(v.a22 * s, lam()));
    let f3 = over(Expr::add(vec![
        Expr::scale(det, lam2()),
        Expr::scale(-c * v.a21, lam()),
    ]));
    let f12 = over(Expr::add(vec![
        Expr::scale(v.a12, lam()),
        Expr::constant(c),
    ]));
    let f21 = over(Expr::add(vec![
        Expr::scale(v.a21, lam()),
        Expr::scale(-c.conj() * det, lam2()),
    ]));
    Ok(AnalyticDisc {
        components: vec![f11.clone(), f22.clone(), f3],
        strategy: Strategy::S3,
        swapped: false,
        matrix: Some([f11, f12, f21, f22]),
    })
}
