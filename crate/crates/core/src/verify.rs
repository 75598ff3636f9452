//! Residual oracle: substitutes a synthesized solution into the full
//! nonlinear system and measures how the residual scales with `mu`.

use num_complex::Complex64;

use crate::bifurcation::{
    cubic_coefficients, second_order_coefficients, solve_amplitudes_with, BranchPoint,
    Normalization,
};
use crate::error::{Error, Result};
use crate::lattice::{wavevector, LatticeConfig};
use crate::linop::{apply_g, apply_l, kernel_basis};
use crate::spectral::{component_norm, field_norm, quadratic_b, ResidualField, SpectralField};
use crate::synthesis::{synthesize, Order, StandingWaveSolution};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub mu: f64,
    pub eta_equation_norm: f64,
    pub v_equation_norm: f64,
    pub total: f64,
}

/// `L_beta U + beta G B(U, U)` for the full system at `beta`.
pub fn system_residual(u: &SpectralField, beta: f64, cfg: &LatticeConfig) -> ResidualField {
    let linear = apply_l(u, beta, cfg);
    let nonlinear = apply_g(&quadratic_b(u), cfg);
    &linear + &(&nonlinear * beta)
}

fn report(r: &ResidualField, mu: f64) -> ResidualReport {
    let eta = component_norm(r, 0);
    let v = (component_norm(r, 1).powi(2) + component_norm(r, 2).powi(2)).sqrt();
    ResidualReport {
        mu,
        eta_equation_norm: eta,
        v_equation_norm: v,
        total: field_norm(r),
    }
}

/// Residual of `sol` in the system at `beta0 + mu`, computed exactly in
/// coefficient space.
pub fn nonlinear_residual(sol: &StandingWaveSolution) -> ResidualReport {
    report(&system_residual(&sol.field, sol.beta(), &sol.bp.cfg), sol.mu)
}

/// Largest component of the residual along the resonant left-null
/// directions, `|p| r_eta - i p.r_v`. This is the part the amplitude
/// equations are meant to remove.
pub fn null_projection(sol: &StandingWaveSolution) -> f64 {
    let r = system_residual(&sol.field, sol.beta(), &sol.bp.cfg);
    sol.bp
        .resonant
        .iter()
        .map(|idx| {
            let p = wavevector(*idx, &sol.bp.cfg);
            let c = r.get(idx);
            (c[0] * p.norm() - I * (c[1] * p.p1 + c[2] * p.p2)).norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub slope: f64,
    pub intercept: f64,
    pub mu_samples: Vec<f64>,
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

/// Least-squares line through `(ln x, ln y)`: `(slope, intercept, r^2)`.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.abs().ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

fn check_samples(mu_list: &[f64]) -> Result<()> {
    if mu_list.len() < 5 {
        return Err(Error::InvalidSamples(format!(
            "need at least 5 values of mu, got {}",
            mu_list.len()
        )));
    }
    if mu_list.iter().any(|m| *m == 0.0 || !m.is_finite()) {
        return Err(Error::InvalidSamples("mu values must be finite and nonzero".into()));
    }
    let lo = mu_list.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let hi = mu_list.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if hi / lo < 100.0 * (1.0 - 1e-9) {
        return Err(Error::InvalidSamples(format!(
            "mu values must span two decades, got [{lo:e}, {hi:e}]"
        )));
    }
    Ok(())
}

/// Residual slope in `|mu|` along the branch through `bp`.
pub fn order_fit(bp: &BranchPoint, c: f64, order: Order, mu_list: &[f64]) -> Result<OrderFit> {
    order_fit_with(bp, c, order, mu_list, Normalization::Reference)
}

pub fn order_fit_with(
    bp: &BranchPoint,
    c: f64,
    order: Order,
    mu_list: &[f64],
    normalization: Normalization,
) -> Result<OrderFit> {
    check_samples(mu_list)?;
    let co = second_order_coefficients(bp)?;
    let ls = cubic_coefficients(bp, &co)?;
    let residuals = mu_list
        .iter()
        .map(|&mu| {
            let amps = solve_amplitudes_with(bp, &ls, mu, c, normalization)?;
            Ok(nonlinear_residual(&synthesize(bp, &amps, [0.0, 0.0], order)).total)
        })
        .collect::<Result<Vec<_>>>()?;
    let (slope, intercept, r_squared) = log_log_fit(mu_list, &residuals);
    Ok(OrderFit {
        slope,
        intercept,
        mu_samples: mu_list.to_vec(),
        residuals,
        r_squared,
    })
}

/// `n` values of `sign * 10^e` with `e` evenly spaced over `[lo_exp, hi_exp]`.
pub fn log_spaced(sign: f64, lo_exp: f64, hi_exp: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let e = lo_exp + (hi_exp - lo_exp) * i as f64 / (n - 1) as f64;
            sign.signum() * 10f64.powf(e)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelCertificate {
    /// Largest `|L xi|` over the basis, constant included.
    pub max_residual: f64,
    pub elements: usize,
}

/// `L` at `beta0` applied to every kernel element.
pub fn kernel_certificate(bp: &BranchPoint) -> Result<KernelCertificate> {
    kernel_certificate_at(&bp.cfg, bp.beta0, bp.beta0)
}

/// Kernel elements for `beta0` tested against `L` at `beta`.
pub fn kernel_certificate_at(
    cfg: &LatticeConfig,
    beta0: f64,
    beta: f64,
) -> Result<KernelCertificate> {
    let basis = kernel_basis(beta0, cfg, crate::lattice::DEFAULT_EPS_RES)?;
    let mut max_residual = field_norm(&apply_l(&basis.zeta0, beta, cfg));
    for (_, xi) in &basis.xis {
        max_residual = max_residual.max(field_norm(&apply_l(xi, beta, cfg)));
    }
    Ok(KernelCertificate {
        max_residual,
        elements: basis.xis.len() + 1,
    })
}
