use mu_domains::domains::tetra_slack;
use mu_domains::oracle::{
    bidisc_nonvanishing, condition7_grid, equivalence_sweep, sample_mixed_tetra, Campaign,
    SweepConfig, SWEEP_RADIUS,
};
use mu_domains::schwarz::SchwarzProblem;
use mu_domains::{Complex, TetraPoint};

fn c(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

/// Brute minimum of `|1 - z x1 - w x2 + z w x3|` on a full polar grid in both variables.
fn brute_minimum(x: &TetraPoint, n: usize, r: f64) -> f64 {
    let pts: Vec<Complex> = (1..=n)
        .flat_map(|i| {
            let rho = r * i as f64 / n as f64;
            (0..n)
                .map(move |k| Complex::from_polar(rho, k as f64 * std::f64::consts::TAU / n as f64))
        })
        .collect();
    let mut best = f64::INFINITY;
    for z in &pts {
        for w in &pts {
            best = best.min((1.0 - z * x.x1 - w * x.x2 + z * w * x.x3).norm());
        }
    }
    best
}

#[test]
fn pencil_minimum_is_below_brute_force() {
    for x in sample_mixed_tetra(40, 3) {
        let m = bidisc_nonvanishing(&x, 32, 0.9).unwrap();
        let brute = brute_minimum(&x, 24, 0.9);
        assert!(
            m.min_modulus <= brute + 1e-12,
            "{x:?} {} {brute}",
            m.min_modulus
        );
        let at = (1.0 - m.z * x.x1 - m.w * x.x2 + m.z * m.w * x.x3).norm();
        assert!((at - m.min_modulus).abs() < 1e-9, "{x:?}");
        assert!(m.z.norm() <= 0.9 + 1e-15 && m.w.norm() <= 0.9 + 1e-15);
    }
}

#[test]
fn nonvanishing_matches_membership() {
    let mut checked = 0;
    for x in sample_mixed_tetra(1500, 19) {
        let slack = tetra_slack(&x);
        if slack.abs() < 1e-4 {
            continue;
        }
        let m = bidisc_nonvanishing(&x, 32, SWEEP_RADIUS).unwrap();
        assert_eq!(m.slack > 1e-9, slack > 0.0, "{x:?} {m:?}");
        checked += 1;
    }
    assert!(checked > 1000, "{checked}");
}

#[test]
fn condition7_zero_is_a_zero() {
    let x = TetraPoint::new(c(0.3), c(0.0), c(0.2));
    let prob = SchwarzProblem::new(Complex::new(0.0, 0.45), x).unwrap();
    let g = condition7_grid(&prob, 32, SWEEP_RADIUS, 1e-9).unwrap();
    assert!(!g.holds);
    let (l, z, w) = (prob.lambda0, g.branch1.z, g.branch1.w);
    assert!((l - x.x1 * z - x.x2 * l * w + x.x3 * z * w).norm() < 1e-9);

    let prob = SchwarzProblem::new(Complex::new(0.0, 0.55), x).unwrap();
    assert!(
        condition7_grid(&prob, 32, SWEEP_RADIUS, 1e-9)
            .unwrap()
            .holds
    );
    assert!(condition7_grid(&prob, 8, 0.5, 1e-9).is_err());
}

#[test]
fn sweeps_are_reproducible() {
    for campaign in [Campaign::Membership, Campaign::Tetra, Campaign::G2] {
        let cfg = SweepConfig {
            n_samples: 300,
            seed: 9,
            campaign,
            ..SweepConfig::default()
        };
        let a = equivalence_sweep(&cfg).unwrap();
        let b = equivalence_sweep(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.summary.genuine_disagreements, 0,
            "{campaign:?} {:?}",
            a.records
        );
        assert_eq!(
            a.summary.positive + a.summary.boundary + a.summary.negative,
            300
        );
    }
}

#[test]
fn config_accepts_short_names() {
    let cfg: SweepConfig = serde_json::from_str(r#"{"n": 10, "seed": 3, "band": 1e-8}"#).unwrap();
    assert_eq!((cfg.n_samples, cfg.seed, cfg.tolerance_band), (10, 3, 1e-8));
    assert!(cfg.validate().is_ok());
    let bad = SweepConfig {
        tolerance_band: -1.0,
        ..SweepConfig::default()
    };
    assert!(equivalence_sweep(&bad).is_err());
}
