use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sample::{draw_g2, draw_lambda0, draw_mixed_tetra, draw_tetra, rng_for, G2Sampler};
use super::{condition7_grid, SWEEP_RADIUS};
use crate::complex_core::{d_norm, sup_norm_grid, Complex, Extended, LinearFractional};
use crate::domains::{tetra_membership, TetraCriterion, TetraPoint};
use crate::schwarz::{g2_feasibility, tetra_feasibility, SchwarzProblem};
use crate::verdict::{consensus, Region};
use crate::{Error, Result};

/// Largest `|x2|` for which the sup-norm grid is compared with `D(x)`.
const SUP_NORM_X2_LIMIT: f64 = 0.95;

/// Allowed gap between `D(x)` and the grid sup-norm.
pub const SUP_NORM_GAP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Campaign {
    /// Membership criteria on points on both sides of the tetrablock boundary.
    Membership,
    /// Feasibility conditions for interior tetrablock targets.
    #[default]
    Tetra,
    /// Feasibility conditions for interior symmetrized-bidisc targets.
    G2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    #[serde(alias = "n")]
    pub n_samples: usize,
    pub seed: u64,
    #[serde(alias = "band", with = "crate::ext_float")]
    pub tolerance_band: f64,
    /// Points of the circle for the sup-norm comparison.
    pub torus_grid: usize,
    /// Radii and angles of the `z` grid in the non-vanishing search.
    pub bidisc_grid: usize,
    pub campaign: Campaign,
    /// Id of a condition whose margin is negated before classification.
    pub mutation: Option<String>,
    /// Cap on stored records; counts in the summary are never capped.
    pub max_records: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_samples: 1000,
            seed: 42,
            tolerance_band: crate::DEFAULT_BAND,
            torus_grid: 4096,
            bidisc_grid: 32,
            campaign: Campaign::Tetra,
            mutation: None,
            max_records: 1000,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        for g in [self.torus_grid, self.bidisc_grid] {
            if g < 16 {
                return Err(Error::InvalidGrid { got: g, min: 16 });
            }
        }
        if !(self.tolerance_band >= 0.0 && self.tolerance_band.is_finite()) {
            return Err(Error::InvalidBand(self.tolerance_band));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// The two verdicts differ but at least one margin is inside the band.
    WithinBand,
    /// Both margins are outside the band, with opposite signs.
    Genuine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisagreementRecord {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<Complex>,
    pub point: Vec<Complex>,
    pub condition_ids: (String, String),
    #[serde(with = "crate::ext_float::pair")]
    pub margins: (f64, f64),
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub campaign: Campaign,
    pub n_samples: usize,
    pub seed: u64,
    #[serde(with = "crate::ext_float")]
    pub band: f64,
    pub mutation: Option<String>,
    /// Samples whose combined verdict is interior / feasible.
    pub positive: usize,
    pub boundary: usize,
    /// Samples whose combined verdict is exterior / infeasible.
    pub negative: usize,
    /// Counted per pair of conditions, not per sample.
    pub genuine_disagreements: usize,
    /// Counted per pair of conditions, not per sample.
    pub within_band_disagreements: usize,
    /// Samples on which the grid non-vanishing search ran.
    pub grid_checks: usize,
    /// Genuine disagreements between the grid search and the analytic
    /// condition (included in `genuine_disagreements`).
    pub grid_genuine: usize,
    pub sup_norm_checks: usize,
    #[serde(with = "crate::ext_float")]
    pub sup_norm_max_gap: f64,
    /// Samples whose gap exceeds the allowed `1e-6`.
    pub sup_norm_violations: usize,
    pub records_truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub summary: SweepSummary,
    pub records: Vec<DisagreementRecord>,
}

#[derive(Default)]
struct Outcome {
    region: Option<Region>,
    records: Vec<DisagreementRecord>,
    within_band: usize,
    grid_checked: bool,
    grid_genuine: usize,
    sup_gap: Option<f64>,
}

struct Sample {
    index: usize,
    lambda0: Option<Complex>,
    point: Vec<Complex>,
}

impl Sample {
    fn record(
        &self,
        ids: (&str, &str),
        margins: (f64, f64),
        class: Classification,
    ) -> DisagreementRecord {
        DisagreementRecord {
            index: self.index,
            lambda0: self.lambda0,
            point: self.point.clone(),
            condition_ids: (ids.0.to_string(), ids.1.to_string()),
            margins,
            classification: class,
        }
    }
}

fn classify_pair(m1: f64, m2: f64, band: f64) -> Option<Classification> {
    let (r1, r2) = (Region::classify(m1, band), Region::classify(m2, band));
    if r1.opposes(r2) {
        Some(Classification::Genuine)
    } else if r1 != r2 {
        Some(Classification::WithinBand)
    } else {
        None
    }
}

/// Classifies every pair, applies the mutation and returns the combined region.
fn compare_all(
    sample: &Sample,
    margins: &mut [(String, f64)],
    cfg: &SweepConfig,
    out: &mut Outcome,
) {
    if let Some(id) = &cfg.mutation {
        for m in margins.iter_mut().filter(|m| &m.0 == id) {
            m.1 = -m.1;
        }
    }
    let band = cfg.tolerance_band;
    for (i, a) in margins.iter().enumerate() {
        for b in &margins[i + 1..] {
            match classify_pair(a.1, b.1, band) {
                Some(Classification::Genuine) => out.records.push(sample.record(
                    (&a.0, &b.0),
                    (a.1, b.1),
                    Classification::Genuine,
                )),
                Some(Classification::WithinBand) => out.within_band += 1,
                None => {}
            }
        }
    }
    let (region, _) = consensus(
        margins
            .iter()
            .map(|(id, m)| (id.as_str(), Region::classify(*m, band), *m)),
    );
    out.region = Some(region);
}

fn sup_norm_gap(x: &TetraPoint, n: usize) -> Option<f64> {
    if x.x2.norm() > SUP_NORM_X2_LIMIT {
        return None;
    }
    let closed = match d_norm(x) {
        Extended::Finite(v) => v,
        Extended::Infinite => return None,
    };
    let grid = sup_norm_grid(&LinearFractional::psi(x), n).ok()?;
    Some((closed - grid).abs())
}

fn run_one(index: usize, cfg: &SweepConfig) -> Outcome {
    let mut rng = rng_for(cfg.seed ^ index as u64);
    let band = cfg.tolerance_band;
    let mut out = Outcome::default();
    match cfg.campaign {
        Campaign::Membership => {
            let x = draw_mixed_tetra(&mut rng);
            let sample = Sample {
                index,
                lambda0: None,
                point: vec![x.x1, x.x2, x.x3],
            };
            let v = tetra_membership(&x, &TetraCriterion::ALL, band);
            let mut margins: Vec<_> = v
                .per_criterion
                .into_iter()
                .map(|c| (c.id, c.margin))
                .collect();
            compare_all(&sample, &mut margins, cfg, &mut out);
            out.sup_gap = sup_norm_gap(&x, cfg.torus_grid);
        }
        Campaign::Tetra => {
            let x = draw_tetra(&mut rng);
            let lambda0 = draw_lambda0(&mut rng);
            let sample = Sample {
                index,
                lambda0: Some(lambda0),
                point: vec![x.x1, x.x2, x.x3],
            };
            let prob = SchwarzProblem { lambda0, target: x };
            let report = tetra_feasibility(&prob, band);
            let mut margins: Vec<_> = report
                .conditions
                .into_iter()
                .map(|c| (c.id, c.margin))
                .collect();
            compare_all(&sample, &mut margins, cfg, &mut out);
            if let Ok(grid) = condition7_grid(&prob, cfg.bidisc_grid, SWEEP_RADIUS, band) {
                out.grid_checked = true;
                let analytic = margins
                    .iter()
                    .find(|m| m.0 == "7")
                    .map_or(f64::NAN, |m| m.1);
                match classify_pair(analytic, grid.margin, band) {
                    Some(Classification::Genuine) => {
                        out.grid_genuine += 1;
                        out.records.push(sample.record(
                            ("7", "7-grid"),
                            (analytic, grid.margin),
                            Classification::Genuine,
                        ));
                    }
                    Some(Classification::WithinBand) => out.within_band += 1,
                    None => {}
                }
            }
            out.sup_gap = sup_norm_gap(&x, cfg.torus_grid);
        }
        Campaign::G2 => {
            let y = draw_g2(&mut rng, G2Sampler::Uniform);
            let lambda0 = draw_lambda0(&mut rng);
            let sample = Sample {
                index,
                lambda0: Some(lambda0),
                point: vec![y.s, y.p],
            };
            let report = g2_feasibility(&SchwarzProblem { lambda0, target: y }, band);
            for c in report
                .conflicts
                .iter()
                .filter(|c| c.first.starts_with("f:"))
            {
                out.records.push(sample.record(
                    (&c.first, &c.second),
                    c.margins,
                    Classification::Genuine,
                ));
            }
            let mut margins: Vec<_> = report
                .conditions
                .into_iter()
                .map(|c| (c.id, c.margin))
                .collect();
            compare_all(&sample, &mut margins, cfg, &mut out);
        }
    }
    out
}

/// Runs the campaign selected by `cfg` over `cfg.n_samples` samples.
///
/// Sample `i` is drawn from a generator seeded with `seed ^ i`, so results
/// do not depend on how rayon splits the work.
pub fn equivalence_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let outcomes: Vec<Outcome> = (0..cfg.n_samples)
        .into_par_iter()
        .map(|i| run_one(i, cfg))
        .collect();
    let mut summary = SweepSummary {
        campaign: cfg.campaign,
        n_samples: cfg.n_samples,
        seed: cfg.seed,
        band: cfg.tolerance_band,
        mutation: cfg.mutation.clone(),
        positive: 0,
        boundary: 0,
        negative: 0,
        genuine_disagreements: 0,
        within_band_disagreements: 0,
        grid_checks: 0,
        grid_genuine: 0,
        sup_norm_checks: 0,
        sup_norm_max_gap: 0.0,
        sup_norm_violations: 0,
        records_truncated: false,
    };
    let mut records = Vec::new();
    for o in outcomes {
        match o.region {
            Some(Region::Interior) => summary.positive += 1,
            Some(Region::Boundary) => summary.boundary += 1,
            Some(Region::Exterior) => summary.negative += 1,
            None => {}
        }
        summary.genuine_disagreements += o.records.len();
        summary.within_band_disagreements += o.within_band;
        summary.grid_checks += o.grid_checked as usize;
        summary.grid_genuine += o.grid_genuine;
        if let Some(gap) = o.sup_gap {
            summary.sup_norm_checks += 1;
            summary.sup_norm_max_gap = summary.sup_norm_max_gap.max(gap);
            summary.sup_norm_violations += (gap > SUP_NORM_GAP) as usize;
        }
        for r in o.records {
            if records.len() < cfg.max_records {
                records.push(r);
            } else {
                summary.records_truncated = true;
            }
        }
    }
    Ok(SweepReport { summary, records })
}
