use mu_domains::domains::embed_f;
use mu_domains::oracle::{condition7_grid, sample_g2, sample_lambda0, sample_tetra, SWEEP_RADIUS};
use mu_domains::schwarz::{
    condition10_witness, g2_feasibility, lempert_origin_g2, lempert_origin_tetra,
    tetra_feasibility, Branch, SchwarzProblem, Verdict,
};
use mu_domains::{Complex, SymPoint, TetraPoint};
use proptest::prelude::*;

const BAND: f64 = 1e-9;

/// Origin Lempert value of the tetrablock, written out from the disc image of `Psi`.
fn lempert_tetra_oracle(x: &TetraPoint) -> f64 {
    let side = |a: Complex, b: Complex, p: Complex| {
        ((a - b.conj() * p).norm() + (a * b - p).norm()) / (1.0 - b.norm_sqr())
    };
    side(x.x1, x.x2, x.x3).max(side(x.x2, x.x1, x.x3))
}

/// Origin Lempert value of the symmetrized bidisc.
fn lempert_g2_oracle(y: &SymPoint) -> f64 {
    let (s, p) = (y.s, y.p);
    (2.0 * (s - s.conj() * p).norm() + (s * s - 4.0 * p).norm()) / (4.0 - s.norm_sqr())
}

fn feasibility(l: Complex, x: TetraPoint) -> mu_domains::schwarz::ConditionReport {
    tetra_feasibility(&SchwarzProblem::new(l, x).unwrap(), BAND)
}

fn node() -> impl Strategy<Value = Complex> {
    (0.01..0.99f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

fn sampled() -> impl Strategy<Value = TetraPoint> {
    any::<u64>().prop_map(|seed| sample_tetra(1, seed)[0])
}

proptest! {
    #[test]
    fn lempert_matches_oracle(x in sampled()) {
        let v = lempert_origin_tetra(&x).unwrap();
        prop_assert!((v - lempert_tetra_oracle(&x)).abs() < 1e-12 * (1.0 + v));
        prop_assert!(v < 1.0);
    }

    #[test]
    fn g2_lempert_matches_oracle(seed in any::<u64>()) {
        let y = sample_g2(1, seed)[0];
        let v = lempert_origin_g2(&y).unwrap();
        prop_assert!((v - lempert_g2_oracle(&y)).abs() < 1e-12 * (1.0 + v));
    }

    #[test]
    fn verdict_follows_threshold(x in sampled(), l in node()) {
        let r = feasibility(l, x);
        let gap = l.norm() - lempert_tetra_oracle(&x);
        prop_assert!((r.margin - gap).abs() < 1e-12);
        if gap > 1e-7 {
            prop_assert_eq!(r.feasible, Verdict::Feasible);
        } else if gap < -1e-7 {
            prop_assert_eq!(r.feasible, Verdict::Infeasible);
        }
        prop_assert!(r.conflicts.is_empty(), "{:?}", r.conflicts);
    }

    #[test]
    fn swap_symmetry(x in sampled(), l in node()) {
        let r = feasibility(l, x);
        let s = feasibility(l, x.swap());
        prop_assert_eq!(r.feasible, s.feasible);
        prop_assert!((r.margin - s.margin).abs() < 1e-12);
    }

    #[test]
    fn equal_moduli_branches_agree(x in sampled(), l in node(), t in 0.0..std::f64::consts::TAU) {
        let b = x.x1 * Complex::from_polar(1.0, t);
        let y = TetraPoint::new(x.x1, b, x.x1 * b * 0.5 + x.x3 * 0.5);
        prop_assume!(mu_domains::domains::tetra_slack(&y) > 0.0);
        let both = feasibility(l, y);
        prop_assert_eq!(both.branch, Branch::Both);
        prop_assert!(both.conflicts.is_empty(), "{:?}", both.conflicts);
        for c in &both.conditions {
            prop_assert!(!c.verdict.region().opposes(both.feasible.region()), "{c:?}");
        }
        let narrow = tetra_feasibility(&SchwarzProblem::new(l, y).unwrap(), 0.0);
        prop_assert!(!narrow.feasible.region().opposes(both.feasible.region()));
    }

    #[test]
    fn witness_reconstructs_target(x in sampled(), l in node()) {
        let prob = SchwarzProblem::new(l, x).unwrap();
        let r = tetra_feasibility(&prob, BAND);
        prop_assume!(r.feasible == Verdict::Feasible);
        let (beta, side) = condition10_witness(&prob, BAND).unwrap();
        prop_assert!(beta.weight() <= 1.0 + 1e-9);
        let (a, b) = match side {
            Branch::ALeB => (x.x1 * l, x.x2),
            _ => (x.x1, x.x2 * l),
        };
        prop_assert!((beta.beta1 * l + beta.beta2.conj() * x.x3 - a).norm() < 1e-9);
        prop_assert!((beta.beta2 * l + beta.beta1.conj() * x.x3 - b).norm() < 1e-9);
    }
}

#[test]
fn phase_invariance() {
    let xs = sample_tetra(10_000, 101);
    let ls = sample_lambda0(10_000, 102);
    for (i, (x, l)) in xs.into_iter().zip(ls).enumerate() {
        let (u, v, w) = (
            Complex::from_polar(1.0, 0.7 * i as f64),
            Complex::from_polar(1.0, 1.9 * i as f64),
            Complex::from_polar(1.0, -2.3 * i as f64),
        );
        let r = feasibility(l, x);
        let s = feasibility(l * w, TetraPoint::new(u * x.x1, v * x.x2, u * v * x.x3));
        assert_eq!(r.feasible, s.feasible, "{x:?} {l}");
        assert!((r.margin - s.margin).abs() < 1e-12, "{x:?} {l}");
        for c in &r.conditions {
            let d = s.condition(&c.id).unwrap();
            assert!(
                !c.verdict.region().opposes(d.verdict.region()),
                "{} {x:?} {l}",
                c.id
            );
        }
    }
}

#[test]
fn feasibility_is_monotone_in_modulus() {
    let xs = sample_tetra(2000, 55);
    for x in xs {
        let mut seen_feasible = false;
        let mut last = f64::NEG_INFINITY;
        for k in 1..100 {
            let r = feasibility(Complex::from_polar(k as f64 / 100.0, 1.0), x);
            assert!(r.margin >= last, "{x:?}");
            last = r.margin;
            if seen_feasible {
                assert_eq!(r.feasible, Verdict::Feasible, "{x:?} at {k}");
            }
            seen_feasible |= r.feasible == Verdict::Feasible;
        }
    }
}

#[test]
fn grid_agrees_with_closed_form_away_from_threshold() {
    let xs = sample_tetra(400, 66);
    let ls = sample_lambda0(400, 67);
    let mut checked = 0;
    for (x, l) in xs.into_iter().zip(ls) {
        let prob = SchwarzProblem::new(l, x).unwrap();
        let r = tetra_feasibility(&prob, BAND);
        if r.margin.abs() < 1e-6 {
            continue;
        }
        let g = condition7_grid(&prob, 32, SWEEP_RADIUS, BAND).unwrap();
        assert_eq!(g.holds, r.margin > 0.0, "{x:?} {l} {g:?}");
        checked += 1;
    }
    assert!(checked > 350, "{checked}");
}

#[test]
fn g2_agrees_with_lifted_problem() {
    let ys = sample_g2(3000, 71);
    let ls = sample_lambda0(3000, 72);
    for (y, l) in ys.into_iter().zip(ls) {
        let r = g2_feasibility(&SchwarzProblem::new(l, y).unwrap(), BAND);
        assert!(r.conflicts.is_empty(), "{y:?} {l} {:?}", r.conflicts);
        let gap = l.norm() - lempert_g2_oracle(&y);
        if gap.abs() > 1e-7 {
            assert_eq!(r.feasible == Verdict::Feasible, gap > 0.0, "{y:?} {l}");
        }
        let lifted = feasibility(l, embed_f(&y));
        assert!(
            !lifted.feasible.region().opposes(r.feasible.region()),
            "{y:?} {l}"
        );
    }
}
