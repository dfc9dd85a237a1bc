//! Desk-scale properties that need large tables.

use std::sync::OnceLock;

use psix_core::constants::{self, crosscheck_constants};
use psix_core::extrema::primorial_stream;
use psix_core::mertens::{
    compute_b1, dusart_bound_check, euler_product_inv, psi_product, zeta2_partial_product,
    DusartStatus, DUSART_VALIDITY,
};
use psix_core::squarefree::squarefree_harmonic;
use psix_core::SieveTables;

fn big() -> &'static SieveTables {
    static T: OnceLock<SieveTables> = OnceLock::new();
    T.get_or_init(|| SieveTables::build(100_000_000).unwrap())
}

#[test]
fn theta_tracks_x() {
    let t = big();
    let theta = t.theta(1e8).unwrap();
    assert!((theta / 1e8 - 1.0).abs() < 0.01, "theta(1e8) = {theta}");
    assert!(t.theta_prefix().windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn primorial_ratio_approaches_limit_constant() {
    let t = big();
    let last = primorial_stream(100_000_000, t).unwrap().last().unwrap();
    assert_eq!(last.p_k, 99_999_989);
    let ratio = last.psi_ratio / (last.loglog_n * constants::threshold());
    assert!((1.0..=1.01).contains(&ratio), "ratio = {ratio}");
}

#[test]
fn primorial_margin_trend() {
    // Recorded only: the margin shrinks overall but is not monotone.
    let t = big();
    let margins: Vec<f64> = primorial_stream(10_000_000, t)
        .unwrap()
        .skip(9)
        .map(|r| r.margin)
        .collect();
    let rises = margins.windows(2).filter(|w| w[1] > w[0]).count();
    println!("margin rises {rises} times over {} steps", margins.len() - 1);
    assert!(margins.last().unwrap() < &margins[0]);
}

#[test]
fn constants_crosscheck() {
    let t = big();
    for c in crosscheck_constants(t).unwrap() {
        let tol = match c.name {
            "B1" => 1e-7,
            "six_over_pi_sq" => 1e-5,
            "threshold" => 1e-14,
            "gamma" => 1e-8,
            other => panic!("unexpected crosscheck {other}"),
        };
        assert!(c.residual <= tol, "{}: {}", c.name, c.residual);
    }
    let small = SieveTables::build(1_000).unwrap();
    assert!(crosscheck_constants(&small).is_err());
}

#[test]
fn b1_at_1e6_and_1e7() {
    let t = big();
    let (v6, tail6) = compute_b1(1_000_000, t).unwrap();
    assert!((v6 - 0.2614972128).abs() <= 5e-8);
    assert!(v6 - constants::b1() <= tail6);
    let (v7, _) = compute_b1(10_000_000, t).unwrap();
    assert!((v7 - 0.2614972128).abs() < 5e-9, "{v7}");
}

#[test]
fn dusart_samples() {
    let t = big();
    assert!(dusart_bound_check(1e7, t).unwrap().holds());
    let at = dusart_bound_check(DUSART_VALIDITY as f64, t).unwrap();
    assert_ne!(at.status, DusartStatus::BelowValidity);
    let below = dusart_bound_check(DUSART_VALIDITY as f64 - 1.0, t).unwrap();
    assert_eq!(below.status, DusartStatus::BelowValidity);
}

#[test]
fn harmonic_residual_settles() {
    let t = big();
    let r5 = squarefree_harmonic(100_000, t).unwrap().residual;
    let r6 = squarefree_harmonic(1_000_000, t).unwrap().residual;
    assert!((r5 - r6).abs() < 1e-2);
    assert!((r6 - 1.0439).abs() < 1e-3, "{r6}");
}

#[test]
fn zeta2_partial_product_tail() {
    let t = big();
    for x in [10.0, 57.0, 1e3, 98_765.0, 1e6, 1e7] {
        let z = zeta2_partial_product(x, t).unwrap();
        assert!((z - constants::six_over_pi_sq()).abs() < 1.0 / x, "x = {x}");
    }
}

#[test]
fn product_residuals_recorded() {
    let t = big();
    for e in 2..=7 {
        let x = 10f64.powi(e);
        let euler = euler_product_inv(x, t).unwrap();
        let psi = psi_product(x, t).unwrap();
        println!(
            "x=1e{e}: euler residual {:.3e}, psi residual {:.3e}",
            euler.residual, psi.residual
        );
    }
    let psi = psi_product(1e6, t).unwrap();
    assert!((psi.value / psi.main_term - 1.0).abs() < 0.01);
}
