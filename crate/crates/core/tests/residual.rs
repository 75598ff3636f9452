mod common;

use common::{fig1, random_branch_points};
use hexwave::presets::figure;
use hexwave::verify::{
    kernel_certificate, log_log_fit, log_spaced, nonlinear_residual, null_projection, order_fit,
    order_fit_with, system_residual,
};
use hexwave::{
    cubic_coefficients, second_order_coefficients, solve_amplitudes_with, synthesize, Error,
    Normalization, Order,
};
use hexwave::spectral::field_norm;

#[test]
fn second_order_beats_first_order_on_random_branches() {
    let mut checked = 0;
    for bp in random_branch_points(3, 20) {
        let co = second_order_coefficients(&bp).unwrap();
        let ls = cubic_coefficients(&bp, &co).unwrap();
        for mu in [-1e-3, 1e-3] {
            let Ok(a) = solve_amplitudes_with(&bp, &ls, mu, 0.0, Normalization::Reference) else {
                continue;
            };
            let r1 = nonlinear_residual(&synthesize(&bp, &a, [0.0, 0.0], Order::First)).total;
            let r2 = nonlinear_residual(&synthesize(&bp, &a, [0.0, 0.0], Order::Second)).total;
            assert!(r2 < r1, "{r2:e} vs {r1:e}");
            checked += 1;
        }
    }
    assert!(checked >= 10);
}

#[test]
fn square_lattice_residual_orders() {
    let bp = fig1();
    let mus = log_spaced(-1.0, -4.0, -2.0, 5);
    let first = order_fit(&bp, 0.0, Order::First, &mus).unwrap();
    let second = order_fit(&bp, 0.0, Order::Second, &mus).unwrap();
    assert!((first.slope - 1.0).abs() < 0.15, "{}", first.slope);
    assert!((second.slope - 1.5).abs() < 0.15, "{}", second.slope);
    assert!(first.r_squared > 0.999 && second.r_squared > 0.999);
}

#[test]
fn residual_is_shift_invariant() {
    let bp = fig1();
    let co = second_order_coefficients(&bp).unwrap();
    let ls = cubic_coefficients(&bp, &co).unwrap();
    let a = solve_amplitudes_with(&bp, &ls, -0.01, 0.0, Normalization::Reference).unwrap();
    let base = nonlinear_residual(&synthesize(&bp, &a, [0.0, 0.0], Order::Second)).total;
    let moved = nonlinear_residual(&synthesize(&bp, &a, [1.3, -0.4], Order::Second)).total;
    assert!((base - moved).abs() < 1e-13 * base);
}

#[test]
fn consistent_normalization_removes_the_kernel_component() {
    let bp = fig1();
    let co = second_order_coefficients(&bp).unwrap();
    let ls = cubic_coefficients(&bp, &co).unwrap();
    let mus = log_spaced(-1.0, -4.0, -2.0, 5);
    let proj = |n| -> Vec<f64> {
        mus.iter()
            .map(|&mu| {
                let a = solve_amplitudes_with(&bp, &ls, mu, 0.0, n).unwrap();
                null_projection(&synthesize(&bp, &a, [0.0, 0.0], Order::Second))
            })
            .collect()
    };
    let reference = proj(Normalization::Reference);
    let consistent = proj(Normalization::Consistent);
    let (sp, _, _) = log_log_fit(&mus, &reference);
    let (sc, _, _) = log_log_fit(&mus, &consistent);
    assert!((sp - 1.5).abs() < 0.15, "{sp}");
    assert!(sc > 2.3, "{sc}");
    assert!(consistent.iter().zip(&reference).all(|(c, p)| c < p));
    let fit = order_fit_with(&bp, 0.0, Order::Second, &mus, Normalization::Consistent).unwrap();
    assert!((fit.slope - 1.5).abs() < 0.15);
}

#[test]
fn golden_lattice_has_no_branch_in_either_direction() {
    let bp = figure(3).unwrap().branch_point().unwrap();
    let mus = log_spaced(-1.0, -4.0, -2.0, 5);
    assert!(matches!(
        order_fit(&bp, 0.0, Order::First, &mus),
        Err(Error::BranchNonexistent { .. })
    ));
    let mus = log_spaced(1.0, -4.0, -2.0, 5);
    assert!(matches!(
        order_fit(&bp, 0.0, Order::First, &mus),
        Err(Error::BranchNonexistent { .. })
    ));
}

#[test]
fn sample_validation() {
    let bp = fig1();
    let short = log_spaced(-1.0, -3.0, -2.0, 5);
    assert!(matches!(order_fit(&bp, 0.0, Order::First, &short), Err(Error::InvalidSamples(_))));
    assert!(matches!(order_fit(&bp, 0.0, Order::First, &[-1e-3; 3]), Err(Error::InvalidSamples(_))));
    let with_zero = [0.0, -1e-4, -1e-3, -1e-2, -1e-1];
    assert!(matches!(order_fit(&bp, 0.0, Order::First, &with_zero), Err(Error::InvalidSamples(_))));
}

#[test]
fn kernel_certificates_for_branch_points() {
    for bp in (1..=4).map(|n| figure(n).unwrap().branch_point().unwrap()).chain(random_branch_points(8, 10)) {
        let cert = kernel_certificate(&bp).unwrap();
        assert_eq!(cert.elements, 5);
        assert!(cert.max_residual < 1e-13, "{:e}", cert.max_residual);
    }
}

#[test]
fn residual_of_exact_constant_state_vanishes() {
    let bp = fig1();
    let u = &hexwave::linop::constant_element() * 0.4;
    assert!(field_norm(&system_residual(&u, bp.beta0 + 0.3, &bp.cfg)) == 0.0);
}
