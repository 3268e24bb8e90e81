//! Explicit analytic discs `phi` with `phi(0) = 0` and `phi(lambda0) = x`,
//! the matching 2x2 Schur-class matrix functions, and the verifier every
//! emitted disc has to pass.

mod search;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex_core::{clustered_radii, grid_angle, solve_two_point_pick, unit, Complex, Expr};
use crate::domains::{
    beta_decompose, g2_slack, golden_min, matrix_completion, tetra_slack, Matrix2, SymPoint,
    TetraPoint,
};
use crate::schwarz::{g2_feasibility, tetra_feasibility, SchwarzProblem};
use crate::{Error, Result};

/// Endpoint and membership tolerance of the verifier.
pub const VERIFY_TOL: f64 = 1e-9;

/// Grid size (radii and angles) used when a builder verifies its output.
pub const VERIFY_GRID: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// `(lambda a/lambda0, lambda b/lambda0, lambda^2 p/lambda0^2)`.
    S1,
    /// Beta disc composed with a two-point Pick solution.
    S2,
    /// Matrix Moebius search over Schur-class matrix functions.
    S3,
}

/// An analytic map of the disc given by one expression tree per coordinate.
///
/// `matrix` holds `[F11, F12, F21, F22]` when the builder produced an exact
/// Schur-class matrix function along with the disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticDisc {
    pub components: Vec<Expr>,
    pub strategy: Strategy,
    pub swapped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[Expr; 4]>,
}

impl AnalyticDisc {
    pub fn eval(&self, lambda: Complex) -> Vec<Complex> {
        self.components.iter().map(|e| e.eval(lambda)).collect()
    }

    fn swap_coordinates(mut self) -> Self {
        self.components.swap(0, 1);
        self.matrix = self.matrix.map(|[f11, f12, f21, f22]| [f22, f12, f21, f11]);
        self.swapped = !self.swapped;
        self
    }
}

/// The point a disc has to reach at `lambda0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "domain", content = "point", rename_all = "lowercase")]
pub enum Target {
    Tetra(TetraPoint),
    G2(SymPoint),
}

impl Target {
    fn coordinates(&self) -> Vec<Complex> {
        match self {
            Target::Tetra(x) => vec![x.x1, x.x2, x.x3],
            Target::G2(y) => vec![y.s, y.p],
        }
    }

    fn slack(&self, v: &[Complex]) -> f64 {
        match self {
            Target::Tetra(_) => tetra_slack(&TetraPoint::new(v[0], v[1], v[2])),
            Target::G2(_) => g2_slack(&SymPoint::new(v[0], v[1])),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolantReport {
    #[serde(with = "crate::ext_float")]
    pub endpoint_err_0: f64,
    #[serde(with = "crate::ext_float")]
    pub endpoint_err_lambda0: f64,
    /// Smallest closure slack of `phi(lambda)` over the polar grid.
    #[serde(with = "crate::ext_float")]
    pub worst_membership_margin: f64,
    pub worst_lambda: Complex,
    pub grid: usize,
    pub verified: bool,
}

/// Checks endpoints and closure membership on an `n x n` polar grid of the
/// closed disc (radii clustered toward the circle).
pub fn verify_interpolant(
    disc: &AnalyticDisc,
    lambda0: Complex,
    target: &Target,
    n: usize,
) -> Result<InterpolantReport> {
    if n < 64 {
        return Err(Error::InvalidGrid { got: n, min: 64 });
    }
    let want = target.coordinates();
    if disc.components.len() != want.len() {
        return Err(Error::DimensionMismatch {
            expected: want.len(),
            got: disc.components.len(),
        });
    }
    let sup = |v: Vec<Complex>, w: &[Complex]| {
        v.iter()
            .zip(w)
            .map(|(a, b)| (a - b).norm())
            .fold(
                0.0,
                |m: f64, e| if e.is_nan() { f64::NAN } else { m.max(e) },
            )
    };
    let zeros = vec![Complex::new(0.0, 0.0); want.len()];
    let endpoint_err_0 = sup(disc.eval(Complex::new(0.0, 0.0)), &zeros);
    let endpoint_err_lambda0 = sup(disc.eval(lambda0), &want);
    let (worst_membership_margin, worst_lambda) = clustered_radii(n, 1.0)
        .into_par_iter()
        .map(|r| {
            (0..n)
                .map(|k| {
                    let z = unit(grid_angle(k, n)) * r;
                    let m = target.slack(&disc.eval(z));
                    (if m.is_nan() { f64::NEG_INFINITY } else { m }, z)
                })
                .fold((f64::INFINITY, Complex::new(0.0, 0.0)), |a, b| {
                    if b.0 < a.0 {
                        b
                    } else {
                        a
                    }
                })
        })
        .reduce(
            || (f64::INFINITY, Complex::new(0.0, 0.0)),
            |a, b| if b.0 < a.0 { b } else { a },
        );
    let verified = endpoint_err_0 <= VERIFY_TOL
        && endpoint_err_lambda0 <= VERIFY_TOL
        && worst_membership_margin >= -VERIFY_TOL;
    Ok(InterpolantReport {
        endpoint_err_0,
        endpoint_err_lambda0,
        worst_membership_margin,
        worst_lambda,
        grid: n,
        verified,
    })
}

fn lambda_pow(k: i32) -> Expr {
    match k {
        0 => Expr::constant(Complex::new(1.0, 0.0)),
        1 => Expr::lambda(),
        _ => Expr::mul(vec![Expr::lambda(); k as usize]),
    }
}

/// `phi(lambda) = (lambda a/lambda0, lambda b/lambda0, lambda^2 p/lambda0^2)`
/// when the doubly scaled point lies in the closure, with
/// `F = diag(1, lambda) G diag(lambda, 1)` for a completion `G` of it.
fn strategy_s1(lambda0: Complex, x: &TetraPoint) -> std::result::Result<AnalyticDisc, String> {
    let y = TetraPoint::new(x.x1 / lambda0, x.x2 / lambda0, x.x3 / (lambda0 * lambda0));
    let slack = tetra_slack(&y);
    if slack < -VERIFY_TOL {
        return Err(format!("S1 not applicable (slack {slack:e})"));
    }
    let g = matrix_completion(&y, true, VERIFY_TOL).matrix;
    let components = vec![
        Expr::scale(y.x1, lambda_pow(1)),
        Expr::scale(y.x2, lambda_pow(1)),
        Expr::scale(y.x3, lambda_pow(2)),
    ];
    let matrix = [
        Expr::scale(g.a11, lambda_pow(1)),
        Expr::constant(g.a12),
        Expr::scale(g.a21, lambda_pow(2)),
        Expr::scale(g.a22, lambda_pow(1)),
    ];
    Ok(AnalyticDisc {
        components,
        strategy: Strategy::S1,
        swapped: false,
        matrix: Some(matrix),
    })
}

/// Beta disc `(lambda(b1 + conj(b2) z), b2 + conj(b1) z, lambda z)` with
/// `z` the Pick solution of `z(0) = -b2/conj(b1)`, `z(lambda0) = p/lambda0`.
fn strategy_s2(lambda0: Complex, x: &TetraPoint) -> std::result::Result<AnalyticDisc, String> {
    let y = TetraPoint::new(x.x1 / lambda0, x.x2, x.x3 / lambda0);
    let beta = beta_decompose(&y, VERIFY_TOL).map_err(|e| format!("S2: {e}"))?;
    let (b1, b2) = (beta.beta1, beta.beta2);
    let done = |components| AnalyticDisc {
        components,
        strategy: Strategy::S2,
        swapped: false,
        matrix: None,
    };
    if b1.norm() == 0.0 && b2.norm() == 0.0 {
        return Ok(done(vec![
            Expr::zero(),
            Expr::zero(),
            Expr::scale(y.x3, lambda_pow(1)),
        ]));
    }
    if b2.norm() > b1.norm() {
        return Err(format!(
            "S2 not applicable (|beta2| = {} > |beta1| = {})",
            b2.norm(),
            b1.norm()
        ));
    }
    let start = -b2 / b1.conj();
    let zeta = solve_two_point_pick(Complex::new(0.0, 0.0), start, lambda0, y.x3, VERIFY_TOL)
        .map_err(|e| format!("S2: {e}"))?
        .to_expr();
    let lz = Expr::mul(vec![Expr::lambda(), zeta.clone()]);
    Ok(done(vec![
        Expr::add(vec![
            Expr::scale(b1, Expr::lambda()),
            Expr::scale(b2.conj(), lz.clone()),
        ]),
        Expr::add(vec![Expr::constant(b2), Expr::scale(b1.conj(), zeta)]),
        lz,
    ]))
}

fn try_strategies(lambda0: Complex, x: &TetraPoint) -> Result<AnalyticDisc> {
    let target = Target::Tetra(*x);
    let swap = x.x1.norm() < x.x2.norm();
    let inner = if swap { x.swap() } else { *x };
    let mut log = Vec::new();
    let builders: [fn(Complex, &TetraPoint) -> std::result::Result<AnalyticDisc, String>; 3] =
        [strategy_s1, strategy_s2, search::strategy_s3];
    for build in builders {
        match build(lambda0, &inner) {
            Ok(disc) => {
                let disc = if swap { disc.swap_coordinates() } else { disc };
                let report = verify_interpolant(&disc, lambda0, &target, VERIFY_GRID)?;
                if report.verified {
                    return Ok(disc);
                }
                log.push(format!(
                    "{:?} not verified (endpoints {:e}, {:e}; margin {:e} at {})",
                    disc.strategy,
                    report.endpoint_err_0,
                    report.endpoint_err_lambda0,
                    report.worst_membership_margin,
                    report.worst_lambda
                ));
            }
            Err(msg) => log.push(msg),
        }
    }
    Err(Error::ConstructionIncomplete(format!(
        "lambda0 = {lambda0}, x = ({}, {}, {}), swapped = {swap}: {}",
        x.x1,
        x.x2,
        x.x3,
        log.join("; ")
    )))
}

/// Builds a verified disc into the closed tetrablock through `x` at
/// `lambda0`, trying strategies S1, S2 and S3 in turn after normalising to
/// `|a| >= |b|`.
pub fn build_interpolant_tetra(
    prob: &SchwarzProblem<TetraPoint>,
    band: f64,
) -> Result<AnalyticDisc> {
    let report = tetra_feasibility(prob, band);
    if !report.feasible.admissible() {
        return Err(Error::InfeasibleProblem(report.margin));
    }
    try_strategies(prob.lambda0, &prob.target)
}

/// `psi = g o phi = (phi1 + phi2, phi3)` for the tetrablock disc through
/// `(s/2, s/2, p)`.
pub fn build_interpolant_g2(prob: &SchwarzProblem<SymPoint>, band: f64) -> Result<AnalyticDisc> {
    let report = g2_feasibility(prob, band);
    if !report.feasible.admissible() {
        return Err(Error::InfeasibleProblem(report.margin));
    }
    let half = prob.target.s * 0.5;
    let phi = try_strategies(prob.lambda0, &TetraPoint::new(half, half, prob.target.p))?;
    let mut it = phi.components.into_iter();
    let (f1, f2, f3) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    let psi = AnalyticDisc {
        components: vec![Expr::add(vec![f1, f2]), f3],
        strategy: phi.strategy,
        swapped: phi.swapped,
        matrix: phi.matrix,
    };
    let report = verify_interpolant(&psi, prob.lambda0, &Target::G2(prob.target), VERIFY_GRID)?;
    if !report.verified {
        return Err(Error::ConstructionIncomplete(format!(
            "g o phi not verified (endpoints {:e}, {:e}; margin {:e})",
            report.endpoint_err_0, report.endpoint_err_lambda0, report.worst_membership_margin
        )));
    }
    Ok(psi)
}

/// A 2x2 matrix function `F` with `F(0) = [[0, *], [0, 0]]` and
/// `F(lambda0) = A`, `x = (a11, a22, det A)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchurWitness {
    /// `[F11, F12, F21, F22]`.
    pub entries: [Expr; 4],
    /// Largest norm of `F` on the boundary grid.
    #[serde(with = "crate::ext_float")]
    pub grid_norm: f64,
    /// Largest defect in `F(0)`'s zero pattern and in `diag F(lambda0)`,
    /// `det F(lambda0)`.
    #[serde(with = "crate::ext_float")]
    pub endpoint_err: f64,
    pub contractive: bool,
}

fn matrix_at(entries: &[Expr; 4], lambda: Complex) -> Matrix2 {
    Matrix2::new(
        entries[0].eval(lambda),
        entries[1].eval(lambda),
        entries[2].eval(lambda),
        entries[3].eval(lambda),
    )
}

fn boundary_norm(entries: &[Expr; 4], n: usize) -> f64 {
    (0..n)
        .into_par_iter()
        .map(|k| matrix_at(entries, unit(grid_angle(k, n))).norm())
        .reduce(|| 0.0, f64::max)
}

/// Schur-class matrix witness for a tetrablock disc.
///
/// Uses the exact matrix carried by the disc when there is one. Otherwise
/// sets `F12 = c`, `F21 = (phi1 phi2 - phi3) / c` with `c > 0` chosen to
/// minimise the boundary norm, and falls back to the matrix Moebius search
/// when that is not contractive. Contractivity is checked on `n * n` points
/// of the circle.
pub fn schur_matrix_witness(
    prob: &SchwarzProblem<TetraPoint>,
    disc: &AnalyticDisc,
    n: usize,
) -> Result<SchurWitness> {
    if n < 16 {
        return Err(Error::InvalidGrid { got: n, min: 16 });
    }
    if disc.components.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: disc.components.len(),
        });
    }
    let fine = n * n;
    let heuristic = match &disc.matrix {
        Some(m) => m.clone(),
        None => {
            let [f1, f2, f3] = [0, 1, 2].map(|i| disc.components[i].clone());
            let h = Expr::add(vec![
                Expr::mul(vec![f1.clone(), f2.clone()]),
                Expr::scale(Complex::new(-1.0, 0.0), f3),
            ]);
            let h_sup = (0..fine)
                .map(|k| h.eval(unit(grid_angle(k, fine))).norm())
                .fold(0.0, f64::max);
            let with = |c: f64| {
                if c == 0.0 {
                    [f1.clone(), Expr::zero(), Expr::zero(), f2.clone()]
                } else {
                    [
                        f1.clone(),
                        Expr::constant(Complex::new(c, 0.0)),
                        Expr::scale(Complex::new(1.0 / c, 0.0), h.clone()),
                        f2.clone(),
                    ]
                }
            };
            if h_sup <= 1e-15 {
                with(0.0)
            } else {
                let coarse = 256;
                let c = golden_min(|c| boundary_norm(&with(c), coarse), 1e-9, 1.0, 80);
                with(c)
            }
        }
    };
    let mut witness = assess(prob, heuristic, fine);
    if !witness.contractive && disc.matrix.is_none() {
        if let Ok(exact) = search::strategy_s3(prob.lambda0, &prob.target) {
            if let Some(m) = exact.matrix {
                witness = assess(prob, m, fine);
            }
        }
    }
    if !witness.contractive {
        return Err(Error::WitnessNotConstructed(witness.grid_norm));
    }
    Ok(witness)
}

fn assess(prob: &SchwarzProblem<TetraPoint>, entries: [Expr; 4], fine: usize) -> SchurWitness {
    let x = prob.target;
    let at0 = matrix_at(&entries, Complex::new(0.0, 0.0));
    let at1 = matrix_at(&entries, prob.lambda0);
    let endpoint_err = [
        at0.a11.norm(),
        at0.a21.norm(),
        at0.a22.norm(),
        (at1.a11 - x.x1).norm(),
        (at1.a22 - x.x2).norm(),
        (at1.det() - x.x3).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let grid_norm = boundary_norm(&entries, fine);
    let contractive = grid_norm <= 1.0 + VERIFY_TOL && endpoint_err <= VERIFY_TOL;
    SchurWitness {
        entries,
        grid_norm,
        endpoint_err,
        contractive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BAND: f64 = 1e-9;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn prob(l: f64, a: f64, b: f64, p: f64) -> SchwarzProblem<TetraPoint> {
        SchwarzProblem::new(c(l), TetraPoint::new(c(a), c(b), c(p))).unwrap()
    }

    #[test]
    fn origin_gives_zero_disc() {
        let pr = prob(0.5, 0.0, 0.0, 0.0);
        let disc = build_interpolant_tetra(&pr, BAND).unwrap();
        assert_eq!(disc.strategy, Strategy::S1);
        for z in [c(0.3), Complex::new(0.0, 0.9)] {
            assert!(disc.eval(z).iter().all(|v| v.norm() == 0.0));
        }
        let r = verify_interpolant(&disc, pr.lambda0, &Target::Tetra(pr.target), 64).unwrap();
        assert!(r.verified);
        assert_eq!(r.endpoint_err_0, 0.0);
        assert_eq!(r.endpoint_err_lambda0, 0.0);
        let w = schur_matrix_witness(&pr, &disc, 32).unwrap();
        assert_eq!(w.grid_norm, 0.0);
    }

    #[test]
    fn beta_disc_example() {
        let pr = prob(0.6, 0.3, 0.0, 0.2);
        let disc = build_interpolant_tetra(&pr, BAND).unwrap();
        assert_eq!(disc.strategy, Strategy::S2);
        assert!(!disc.swapped);
        for z in [c(0.2), Complex::new(-0.4, 0.7), c(1.0)] {
            let v = disc.eval(z);
            assert!((v[0] - z * 0.5).norm() < 1e-15);
            assert!(v[1].norm() < 1e-15);
            assert!((v[2] - z / 3.0).norm() < 1e-15);
        }
        let w = schur_matrix_witness(&pr, &disc, 32).unwrap();
        assert!(w.contractive);
    }

    #[test]
    fn infeasible_is_rejected() {
        assert!(matches!(
            build_interpolant_tetra(&prob(0.4, 0.3, 0.0, 0.2), BAND),
            Err(Error::InfeasibleProblem(_))
        ));
        let g = SchwarzProblem::new(c(0.4), SymPoint::new(c(1.0), c(0.25))).unwrap();
        assert!(matches!(
            build_interpolant_g2(&g, BAND),
            Err(Error::InfeasibleProblem(_))
        ));
    }

    #[test]
    fn hand_written_disc_fails_near_boundary() {
        let disc = AnalyticDisc {
            components: vec![Expr::lambda(), Expr::lambda(), Expr::lambda()],
            strategy: Strategy::S1,
            swapped: false,
            matrix: None,
        };
        let x = TetraPoint::new(c(0.5), c(0.5), c(0.5));
        let r = verify_interpolant(&disc, c(0.5), &Target::Tetra(x), 64).unwrap();
        assert_eq!(r.endpoint_err_0, 0.0);
        assert_eq!(r.endpoint_err_lambda0, 0.0);
        assert!(r.worst_membership_margin < -VERIFY_TOL);
        assert!(!r.verified);
        assert!(verify_interpolant(&disc, c(0.5), &Target::Tetra(x), 32).is_err());
    }

    #[test]
    fn swapped_targets_are_normalised() {
        let pr = prob(0.6, 0.0, 0.3, 0.2);
        let disc = build_interpolant_tetra(&pr, BAND).unwrap();
        assert!(disc.swapped);
        let r = verify_interpolant(&disc, pr.lambda0, &Target::Tetra(pr.target), 64).unwrap();
        assert!(r.verified);
    }

    #[test]
    fn g2_discs() {
        let g = SchwarzProblem::new(c(0.5), SymPoint::new(c(0.0), c(0.0))).unwrap();
        let psi = build_interpolant_g2(&g, BAND).unwrap();
        assert!(psi.eval(c(0.7)).iter().all(|v| v.norm() == 0.0));

        let g = SchwarzProblem::new(c(0.6), SymPoint::new(c(1.0), c(0.25))).unwrap();
        let psi = build_interpolant_g2(&g, BAND).unwrap();
        let r = verify_interpolant(&psi, g.lambda0, &Target::G2(g.target), 64).unwrap();
        assert!(r.verified);
    }

    #[test]
    fn s3_alone_solves_the_example() {
        let pr = prob(0.6, 0.3, 0.0, 0.2);
        let disc = search::strategy_s3(pr.lambda0, &pr.target).unwrap();
        let r = verify_interpolant(&disc, pr.lambda0, &Target::Tetra(pr.target), 64).unwrap();
        assert!(r.verified, "{r:?}");
        let w = schur_matrix_witness(&pr, &disc, 32).unwrap();
        assert!(w.endpoint_err < 1e-12);
    }

    #[test]
    fn disc_json_shape() {
        let pr = prob(0.6, 0.3, 0.0, 0.2);
        let disc = build_interpolant_tetra(&pr, BAND).unwrap();
        let s = serde_json::to_string(&disc).unwrap();
        assert!(s.contains("\"strategy\":\"s2\""));
        let back: AnalyticDisc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, disc);
    }
}
