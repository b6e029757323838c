use perfhom_core::regime::{
    convergence_rates, figure2_region, limit_regime, perforation_numbers, rates_at,
    validate_epsilon, PerforationParams, Region, Scenario, ScalingLaw, VCase, Violation,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn v_eps_is_below_both_numbers(n in 2usize..=7, s in 1.05f64..4.0, t in -4.0f64..4.0, e in 2.0f64..6.0) {
        let eps = 10f64.powf(-e);
        let p = PerforationParams::power_laws(n, s, t).unwrap();
        prop_assume!(p.d(eps) < eps / 2.0);
        let num = perforation_numbers(&p, eps).unwrap();
        prop_assert!(num.v_eps <= num.p_eps * (1.0 + 1e-12));
        prop_assert!(num.v_eps <= num.q_eps * (1.0 + 1e-12));
        prop_assert!(num.v_eps >= 0.0);
        prop_assert!(num.lambda_eps > 0.0);
    }

    #[test]
    fn region_agrees_with_limits_off_the_lines(n in 3usize..=7, s in 1.05f64..4.0, t in -6.0f64..6.0) {
        let pline = n as f64 - (n as f64 - 1.0) * s;
        let qline = n as f64 / (n as f64 - 2.0);
        prop_assume!((t - pline).abs() > 1e-6 && (s - qline).abs() > 1e-6);
        let p = PerforationParams::power_laws(n, s, t).unwrap();
        let report = limit_regime(&p);
        prop_assert_eq!(report.region(), figure2_region(n, s, t).unwrap());
        prop_assert_eq!(report.scenario == Scenario::VanishingLimit, report.region() == Region::BothInfinite);
    }

    #[test]
    fn rates_are_ordered(n in 2usize..=6, s in 1.05f64..3.0, e in 3.0f64..7.0) {
        // P ≡ 1 along t = n - (n-1)s
        let t = n as f64 - (n as f64 - 1.0) * s;
        let eps = 10f64.powf(-e);
        let p = PerforationParams::power_laws(n, s, t).unwrap();
        prop_assume!(p.d(eps) < eps / 4.0);
        let r = rates_at(&p, eps).unwrap();
        prop_assert!(r.eta_prime.unwrap() >= r.eta.unwrap());
        prop_assert!(r.delta_2.unwrap() >= r.delta_1.unwrap() || n == 2);
        prop_assert!(r.eta.unwrap() >= r.delta_3.unwrap());
        prop_assert!(r.eta.unwrap() >= r.delta_4.unwrap());
        prop_assert!(r.eta_dprime.is_some());
    }

    /// With `d = c ε^s`, `γ = g ε^t` the numbers scale as `P ∝ g c^{n-1}`,
    /// `Q ∝ c^{n-2}` (n ≥ 3).
    #[test]
    fn numbers_scale_with_coefficients(n in 3usize..=6, c in 0.1f64..1.0, g in 0.1f64..10.0) {
        let eps = 1e-3;
        let base = PerforationParams::power_laws(n, 2.0, 0.0).unwrap();
        let scaled = PerforationParams::new(
            n,
            ScalingLaw::new(c, 2.0, 0).unwrap(),
            ScalingLaw::new(g, 0.0, 0).unwrap(),
        ).unwrap();
        let a = perforation_numbers(&base, eps).unwrap();
        let b = perforation_numbers(&scaled, eps).unwrap();
        let want_p = a.p_eps * g * c.powi(n as i32 - 1);
        let want_q = a.q_eps * c.powi(n as i32 - 2);
        prop_assert!((b.p_eps - want_p).abs() <= 1e-12 * want_p);
        prop_assert!((b.q_eps - want_q).abs() <= 1e-12 * want_q);
    }
}

#[test]
fn critical_family_has_both_positive() {
    // n=3: s=3 puts Q on its line; t = 3 - 2·3 = -3 puts P on its line
    let p = PerforationParams::power_laws(3, 3.0, -3.0).unwrap();
    let r = limit_regime(&p);
    assert_eq!(r.v_case, VCase::BothPos);
    let kappa = 4.0 * std::f64::consts::PI;
    let v = r.v.unwrap();
    assert!((v - kappa * kappa / (2.0 * kappa)).abs() < 1e-12);
}

#[test]
fn vanishing_family_rates() {
    let p = PerforationParams::power_laws(3, 1.1, -5.0).unwrap();
    let r = convergence_rates(&p, 1e-4, None).unwrap();
    assert!(r.eta.is_none());
    assert!(r.th5_bound > 0.0 && r.th5_bound < 1.0);
    // the hole fits, although Λ_ε is still above 1/4 here
    let v = validate_epsilon(&p, 1e-4).unwrap();
    assert!(v.iter().all(|v| matches!(v, Violation::LambdaTooLarge { .. })));
}
