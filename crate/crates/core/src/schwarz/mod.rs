//! Two-point Schwarz feasibility from the origin: every equivalent condition
//! for the tetrablock and the symmetrized bidisc, with margins, witnesses and
//! the origin-based Lempert values.

use serde::{Deserialize, Serialize};

use crate::complex_core::{d_norm, Complex};
use crate::domains::{
    beta_decompose, embed_f, g2_slack, matrix_completion, tetra_slack, BetaPair, Matrix2, SymPoint,
    TetraPoint,
};
use crate::verdict::{consensus, Conflict, Region};
use crate::{Error, Result};

/// Interpolation data `0 -> origin`, `lambda0 -> target`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchwarzProblem<T> {
    pub lambda0: Complex,
    pub target: T,
}

impl<T> SchwarzProblem<T> {
    /// Rejects nodes outside the punctured disc.
    pub fn new(lambda0: Complex, target: T) -> Result<Self> {
        let m = lambda0.norm();
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::InvalidNode(lambda0.to_string()));
        }
        Ok(Self { lambda0, target })
    }

    /// Same phase, modulus `r`.
    pub fn with_modulus(&self, r: f64) -> Result<Self>
    where
        T: Copy,
    {
        Self::new(Complex::from_polar(r, self.lambda0.arg()), self.target)
    }
}

/// Tri-state answer of a feasibility query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Boundary,
    Infeasible,
}

impl From<Region> for Verdict {
    fn from(r: Region) -> Self {
        match r {
            Region::Interior => Verdict::Feasible,
            Region::Boundary => Verdict::Boundary,
            Region::Exterior => Verdict::Infeasible,
        }
    }
}

impl Verdict {
    pub fn region(self) -> Region {
        match self {
            Verdict::Feasible => Region::Interior,
            Verdict::Boundary => Region::Boundary,
            Verdict::Infeasible => Region::Exterior,
        }
    }

    /// Feasible or within the band of the threshold.
    pub fn admissible(self) -> bool {
        self != Verdict::Infeasible
    }
}

/// Which disjunct of the "either ... or" conditions applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `|b| <= |a|`.
    BLeA,
    /// `|a| <= |b|`.
    ALeB,
    Both,
}

impl Branch {
    pub fn of(x: &TetraPoint, band: f64) -> Branch {
        let gap = x.x1.norm() - x.x2.norm();
        if gap.abs() <= band {
            Branch::Both
        } else if gap > 0.0 {
            Branch::BLeA
        } else {
            Branch::ALeB
        }
    }

    fn first(self) -> bool {
        self != Branch::ALeB
    }

    fn second(self) -> bool {
        self != Branch::BLeA
    }

    /// Margin of the disjunction: the larger margin among applicable sides.
    fn either(self, first: impl FnOnce() -> f64, second: impl FnOnce() -> f64) -> f64 {
        let mut m = f64::NEG_INFINITY;
        if self.first() {
            m = m.max(first());
        }
        if self.second() {
            m = m.max(second());
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub id: String,
    pub verdict: Verdict,
    #[serde(with = "crate::ext_float")]
    pub margin: f64,
}

/// Per-condition verdicts of one feasibility query.
///
/// `margin` is the margin of the closed-form threshold condition, i.e.
/// `|lambda0|` minus the Lempert value. `conflicts` is empty on a healthy
/// build.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub feasible: Verdict,
    #[serde(with = "crate::ext_float")]
    pub margin: f64,
    pub branch: Branch,
    pub conditions: Vec<ConditionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Matrix2>,
    pub conflicts: Vec<Conflict>,
    pub notes: Vec<String>,
    #[serde(with = "crate::ext_float")]
    pub band: f64,
}

impl ConditionReport {
    pub fn condition(&self, id: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }

    /// Copy of the report with the margin of condition `id` negated and the
    /// verdicts recomputed. Used to check that the sweep catches a broken
    /// condition.
    pub fn mutate(&self, id: &str) -> ConditionReport {
        let margins = self
            .conditions
            .iter()
            .map(|c| {
                let m = if c.id == id { -c.margin } else { c.margin };
                (c.id.clone(), m)
            })
            .collect();
        let mut out = assemble(margins, self.band);
        out.margin = self.margin;
        out.branch = self.branch;
        out.notes = self.notes.clone();
        out
    }
}

fn assemble(margins: Vec<(String, f64)>, band: f64) -> ConditionReport {
    let conditions: Vec<ConditionResult> = margins
        .into_iter()
        .map(|(id, margin)| ConditionResult {
            verdict: Region::classify(margin, band).into(),
            id,
            margin,
        })
        .collect();
    let (overall, conflicts) = consensus(
        conditions
            .iter()
            .map(|c| (c.id.as_str(), c.verdict.region(), c.margin)),
    );
    ConditionReport {
        feasible: overall.into(),
        margin: f64::NAN,
        branch: Branch::Both,
        conditions,
        beta: None,
        matrix: None,
        conflicts,
        notes: Vec::new(),
        band,
    }
}

fn node_notes(lambda0: Complex, band: f64, notes: &mut Vec<String>) {
    let m = lambda0.norm();
    if m <= band || m >= 1.0 - band {
        notes.push(format!(
            "hypothesis: |lambda0| = {m} is within the band of the unit circle or of 0"
        ));
    }
}

/// `(|a - conj(b) p| + |ab - p|) / (1 - |b|^2)`, infinite when `|b| >= 1`.
fn quotient(a: Complex, b: Complex, p: Complex) -> f64 {
    let den = 1.0 - b.norm_sqr();
    if den <= 0.0 {
        return f64::INFINITY;
    }
    ((a - b.conj() * p).norm() + (a * b - p).norm()) / den
}

fn quadratic6(l2: f64, a: Complex, b: Complex, p: Complex) -> f64 {
    l2 - (a.norm_sqr() - l2 * b.norm_sqr() + p.norm_sqr() + 2.0 * (b * l2 - a.conj() * p).norm())
}

fn quadratic8(l: f64, a: Complex, b: Complex, p: Complex) -> f64 {
    let l2 = l * l;
    l2 - (l * (a - b.conj() * p).norm() + (b * l2 - a.conj() * p).norm() + p.norm_sqr())
}

fn quadratic9(l: f64, a: Complex, b: Complex, p: Complex) -> f64 {
    let l2 = l * l;
    let q = a.norm_sqr() + l2 * b.norm_sqr() - p.norm_sqr() + 2.0 * l * (a * b - p).norm();
    (l - p.norm()).min(l2 - q)
}

/// `min(|lambda0| - |p|, 1 - |beta1| - |beta2|)` for the rescaled point `y`.
///
/// On the torus `|y3| = 1` the pair is undefined and the closure slack of `y`
/// stands in for the weight condition.
fn beta_margin(l: f64, p: Complex, y: &TetraPoint, band: f64) -> f64 {
    let w = match beta_decompose(y, band) {
        Ok(beta) => 1.0 - beta.weight(),
        Err(_) => tetra_slack(y),
    };
    (l - p.norm()).min(w)
}

/// The rescaled points `(a/lambda0, b, p/lambda0)` and `(a, b/lambda0, p/lambda0)`.
fn rescaled(lambda0: Complex, x: &TetraPoint) -> (TetraPoint, TetraPoint) {
    (
        TetraPoint::new(x.x1 / lambda0, x.x2, x.x3 / lambda0),
        TetraPoint::new(x.x1, x.x2 / lambda0, x.x3 / lambda0),
    )
}

fn tetra_margins(
    prob: &SchwarzProblem<TetraPoint>,
    branch: Branch,
    band: f64,
) -> Vec<(String, f64)> {
    let x = prob.target;
    let (a, b, p) = (x.x1, x.x2, x.x3);
    let l = prob.lambda0.norm();
    let l2 = l * l;
    let (y1, y2) = rescaled(prob.lambda0, &x);
    let m = [
        ("2", l - quotient(a, b, p).max(quotient(b, a, p))),
        (
            "3",
            branch.either(|| l - quotient(a, b, p), || l - quotient(b, a, p)),
        ),
        (
            "5",
            branch.either(
                || d_norm(&x).slack_below(l),
                || d_norm(&x.swap()).slack_below(l),
            ),
        ),
        (
            "6",
            branch.either(|| quadratic6(l2, a, b, p), || quadratic6(l2, b, a, p)),
        ),
        ("7", branch.either(|| tetra_slack(&y1), || tetra_slack(&y2))),
        (
            "8",
            branch.either(|| quadratic8(l, a, b, p), || quadratic8(l, b, a, p)),
        ),
        (
            "9",
            branch.either(|| quadratic9(l, a, b, p), || quadratic9(l, b, a, p)),
        ),
        (
            "10",
            branch.either(
                || beta_margin(l, p, &y1, band),
                || beta_margin(l, p, &y2, band),
            ),
        ),
    ];
    m.into_iter().map(|(id, v)| (id.to_string(), v)).collect()
}

/// Evaluates conditions (2), (3) and (5) through (10) for a tetrablock
/// target.
///
/// Condition (4) is the Schur-class matrix statement; its target matrix
/// (the balanced completion of `x`) is attached when the problem is not
/// infeasible, and a matrix function is built by
/// [`crate::interpolate::schur_matrix_witness`].
pub fn tetra_feasibility(prob: &SchwarzProblem<TetraPoint>, band: f64) -> ConditionReport {
    let x = prob.target;
    let branch = Branch::of(&x, band);
    let mut report = assemble(tetra_margins(prob, branch, band), band);
    report.branch = branch;
    report.margin = report.condition("2").map_or(f64::NAN, |c| c.margin);
    if report.feasible.admissible() {
        report.beta = condition10_pair(prob, branch, band).ok().map(|(b, _)| b);
        report.matrix = Some(matrix_completion(&x, true, band).matrix);
    }
    if tetra_slack(&x) <= band {
        report.notes.push(
            "hypothesis: the target is not in the open tetrablock; equivalence is only asserted there"
                .to_string(),
        );
    }
    node_notes(prob.lambda0, band, &mut report.notes);
    report
}

fn g2_margins(prob: &SchwarzProblem<SymPoint>, band: f64) -> Vec<(String, f64)> {
    let SymPoint { s, p } = prob.target;
    let lambda0 = prob.lambda0;
    let l = lambda0.norm();
    let l2 = l * l;
    let ss = s.norm_sqr();
    let sbp = (s - s.conj() * p).norm();
    let disc = (s * s - 4.0 * p).norm();
    let y = TetraPoint::new(s / (2.0 * lambda0), s * 0.5, p / lambda0);
    let cond2 = if ss < 4.0 {
        l - (2.0 * sbp + disc) / (4.0 - ss)
    } else {
        f64::NEG_INFINITY
    };
    let m = [
        ("2", cond2),
        ("4", d_norm(&embed_f(&prob.target)).slack_below(l)),
        (
            "5",
            4.0 * l2
                - ((1.0 - l2) * ss + 4.0 * p.norm_sqr() + 4.0 * (s * l2 - s.conj() * p).norm()),
        ),
        ("6", tetra_slack(&y)),
        (
            "7",
            2.0 * l2 - (l * sbp + (s * l2 - s.conj() * p).norm() + 2.0 * p.norm_sqr()),
        ),
        (
            "8",
            (l - p.norm()).min(4.0 * l2 - ((1.0 + l2) * ss - 4.0 * p.norm_sqr() + 2.0 * l * disc)),
        ),
        ("9", beta_margin(l, p, &y, band)),
    ];
    m.into_iter().map(|(id, v)| (id.to_string(), v)).collect()
}

/// Evaluates conditions (2) and (4) through (9) for a symmetrized-bidisc
/// target, plus the tetrablock report of `f(s, p) = (s/2, s/2, p)` under the
/// id `"f"`.
///
/// Conflicts inside the tetrablock report are carried over with ids
/// prefixed by `f:`.
pub fn g2_feasibility(prob: &SchwarzProblem<SymPoint>, band: f64) -> ConditionReport {
    let lifted = SchwarzProblem {
        lambda0: prob.lambda0,
        target: embed_f(&prob.target),
    };
    let tetra = tetra_feasibility(&lifted, band);
    let mut margins = g2_margins(prob, band);
    margins.push(("f".to_string(), tetra.margin));
    let mut report = assemble(margins, band);
    report.branch = Branch::Both;
    report.margin = report.condition("2").map_or(f64::NAN, |c| c.margin);
    report
        .conflicts
        .extend(tetra.conflicts.into_iter().map(|c| Conflict {
            first: format!("f:{}", c.first),
            second: format!("f:{}", c.second),
            margins: c.margins,
        }));
    if report.feasible.admissible() {
        report.beta = tetra.beta;
        report.matrix = tetra.matrix;
    }
    if g2_slack(&prob.target) <= band {
        report.notes.push(
            "hypothesis: the target is not in the open symmetrized bidisc; equivalence is only asserted there"
                .to_string(),
        );
    }
    node_notes(prob.lambda0, band, &mut report.notes);
    report
}

/// Minimal `|lambda0|` for which the problem with target `x` is solvable:
/// `max(D(x), D(swap x))`.
pub fn lempert_origin_tetra(x: &TetraPoint) -> Result<f64> {
    let slack = tetra_slack(x);
    if !(slack > 0.0) {
        return Err(Error::OutsideDomain(slack));
    }
    d_norm(x)
        .max(d_norm(&x.swap()))
        .finite()
        .ok_or(Error::OutsideDomain(slack))
}

/// `(2|s - conj(s) p| + |s^2 - 4p|) / (4 - |s|^2)`.
pub fn lempert_origin_g2(y: &SymPoint) -> Result<f64> {
    let slack = g2_slack(y);
    if !(slack > 0.0) {
        return Err(Error::OutsideDomain(slack));
    }
    let SymPoint { s, p } = *y;
    Ok((2.0 * (s - s.conj() * p).norm() + (s * s - 4.0 * p).norm()) / (4.0 - s.norm_sqr()))
}

fn condition10_pair(
    prob: &SchwarzProblem<TetraPoint>,
    branch: Branch,
    band: f64,
) -> Result<(BetaPair, Branch)> {
    let (y1, y2) = rescaled(prob.lambda0, &prob.target);
    let mut last = Err(Error::InfeasibleProblem(f64::NAN));
    for (use_it, y, side) in [
        (branch.first(), y1, Branch::BLeA),
        (branch.second(), y2, Branch::ALeB),
    ] {
        if !use_it {
            continue;
        }
        match beta_decompose(&y, band) {
            Ok(beta) if beta.weight() <= 1.0 + band => return Ok((beta, side)),
            Ok(beta) => last = Err(Error::InfeasibleProblem(1.0 - beta.weight())),
            Err(e) => last = Err(e),
        }
    }
    last
}

/// The pair `(beta1, beta2)` of condition (10) and the side it was found on.
///
/// Side `BLeA` solves `a = beta1 lambda0 + conj(beta2) p`,
/// `b lambda0 = beta2 lambda0 + conj(beta1) p`; side `ALeB` solves
/// `a lambda0 = beta1 lambda0 + conj(beta2) p`,
/// `b = beta2 lambda0 + conj(beta1) p`.
pub fn condition10_witness(
    prob: &SchwarzProblem<TetraPoint>,
    band: f64,
) -> Result<(BetaPair, Branch)> {
    let report = tetra_feasibility(prob, band);
    if !report.feasible.admissible() {
        return Err(Error::InfeasibleProblem(report.margin));
    }
    condition10_pair(prob, report.branch, band)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BAND: f64 = 1e-9;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn tetra(l: f64, a: f64, b: f64, p: f64) -> ConditionReport {
        let prob = SchwarzProblem::new(c(l), TetraPoint::new(c(a), c(b), c(p))).unwrap();
        tetra_feasibility(&prob, BAND)
    }

    #[test]
    fn node_must_be_in_punctured_disc() {
        assert!(SchwarzProblem::new(c(0.0), TetraPoint::origin()).is_err());
        assert!(SchwarzProblem::new(c(1.0), TetraPoint::origin()).is_err());
        assert!(SchwarzProblem::new(Complex::new(f64::NAN, 0.0), TetraPoint::origin()).is_err());
        assert!(SchwarzProblem::new(Complex::new(0.0, -0.5), TetraPoint::origin()).is_ok());
    }

    #[test]
    fn origin_target_is_feasible_everywhere() {
        for l in [0.01, 0.5, 0.99] {
            let r = tetra(l, 0.0, 0.0, 0.0);
            assert_eq!(r.feasible, Verdict::Feasible);
            assert!(r.conflicts.is_empty());
            assert_eq!(r.condition("2").unwrap().margin, l);
            assert_eq!(r.branch, Branch::Both);
        }
    }

    #[test]
    fn threshold_example() {
        let r = tetra(0.6, 0.3, 0.0, 0.2);
        assert_eq!(r.feasible, Verdict::Feasible);
        assert!((r.margin - 0.1).abs() < 1e-15);
        assert!(r.conflicts.is_empty());
        assert!(r.conditions.iter().all(|c| c.verdict == Verdict::Feasible));
        assert_eq!(r.branch, Branch::BLeA);

        let r = tetra(0.4, 0.3, 0.0, 0.2);
        assert_eq!(r.feasible, Verdict::Infeasible);
        assert!(r
            .conditions
            .iter()
            .all(|c| c.verdict == Verdict::Infeasible));
        assert!(r.beta.is_none());
    }

    #[test]
    fn lempert_values() {
        assert_eq!(lempert_origin_tetra(&TetraPoint::origin()).unwrap(), 0.0);
        let x = TetraPoint::new(c(0.3), c(0.0), c(0.2));
        assert!((lempert_origin_tetra(&x).unwrap() - 0.5).abs() < 1e-12);
        let x = TetraPoint::new(c(0.5), c(0.5), c(0.25));
        assert!((lempert_origin_tetra(&x).unwrap() - 0.5).abs() < 1e-12);
        assert!(lempert_origin_tetra(&TetraPoint::new(c(1.0), c(0.0), c(0.0))).is_err());

        assert_eq!(
            lempert_origin_g2(&SymPoint::new(c(0.0), c(0.0))).unwrap(),
            0.0
        );
        let y = SymPoint::new(c(1.0), c(0.25));
        assert!((lempert_origin_g2(&y).unwrap() - 0.5).abs() < 1e-12);
        let y = SymPoint::new(c(0.0), Complex::new(0.3, 0.4));
        assert!((lempert_origin_g2(&y).unwrap() - 0.5).abs() < 1e-12);
        assert!(lempert_origin_g2(&SymPoint::new(c(2.0), c(1.0))).is_err());
    }

    #[test]
    fn g2_examples() {
        let run = |l: f64, s: f64, p: f64| {
            let prob = SchwarzProblem::new(c(l), SymPoint::new(c(s), c(p))).unwrap();
            g2_feasibility(&prob, BAND)
        };
        let r = run(0.3, 0.0, 0.0);
        assert_eq!(r.feasible, Verdict::Feasible);

        let r = run(0.6, 1.0, 0.25);
        assert_eq!(r.feasible, Verdict::Feasible);
        assert!((r.margin - 0.1).abs() < 1e-15);
        assert!((r.condition("f").unwrap().margin - 0.1).abs() < 1e-15);
        assert!(r.conflicts.is_empty());

        let r = run(0.4, 1.0, 0.25);
        assert_eq!(r.feasible, Verdict::Infeasible);
        assert!(r
            .conditions
            .iter()
            .all(|c| c.verdict == Verdict::Infeasible));
    }

    #[test]
    fn witness_examples() {
        let prob = SchwarzProblem::new(c(0.5), TetraPoint::origin()).unwrap();
        let (beta, _) = condition10_witness(&prob, BAND).unwrap();
        assert_eq!(beta.weight(), 0.0);

        let x = TetraPoint::new(c(0.3), c(0.0), c(0.2));
        let prob = SchwarzProblem::new(c(0.6), x).unwrap();
        let (beta, side) = condition10_witness(&prob, BAND).unwrap();
        assert_eq!(side, Branch::BLeA);
        assert!((beta.beta1 - c(0.5625)).norm() < 1e-12);
        assert!((beta.beta2 - c(-0.1875)).norm() < 1e-12);
        let l = prob.lambda0;
        assert!((beta.beta1 * l + beta.beta2.conj() * x.x3 - x.x1).norm() < 1e-15);
        assert!((beta.beta2 * l + beta.beta1.conj() * x.x3 - x.x2 * l).norm() < 1e-15);

        let prob = SchwarzProblem::new(c(0.4), x).unwrap();
        assert!(matches!(
            condition10_witness(&prob, BAND),
            Err(Error::InfeasibleProblem(_))
        ));
    }

    #[test]
    fn mutation_flips_one_condition() {
        let r = tetra(0.6, 0.3, 0.0, 0.2);
        let m = r.mutate("8");
        assert_eq!(m.conflicts.len(), 7);
        assert_eq!(m.feasible, Verdict::Feasible);
        assert!(m
            .conflicts
            .iter()
            .all(|c| c.first == "8" || c.second == "8"));
    }

    #[test]
    fn boundary_target_is_noted() {
        let r = tetra(0.9, 1.0, 0.0, 0.0);
        assert!(!r.notes.is_empty());
    }
}
