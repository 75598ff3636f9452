//! The linearized operator `L`, the forcing operator `G`, the mode-wise
//! pseudo-inverse `T` and the kernel of `L` at a resonant `beta0`.
//!
//! In coefficient space, for `q > 0`,
//!
//! ```text
//! (L U)_eta = -q (1 + omega |p|^2) eta + i beta p.v      (sin qt)
//! (L U)_v   =  i beta p eta + q (1 + omega |p|^2) v      (cos qt)
//! (G F)     = (i p.f, i p g)
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{
    dispersion_delta, enumerate_resonance_set, wavevector, LatticeConfig, ModeIndex,
    ResonanceSet,
};
use crate::spectral::{Coeff, ForcingField, ResidualField, SpectralField};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Mode-wise `L_beta U`.
pub fn apply_l(u: &SpectralField, beta: f64, cfg: &LatticeConfig) -> ResidualField {
    u.map(|idx, c| {
        let p = wavevector(*idx, cfg);
        let qs = idx.q as f64 * (1.0 + cfg.omega * p.norm_sq());
        let p_dot_v = c[1] * p.p1 + c[2] * p.p2;
        [
            -c[0] * qs + I * beta * p_dot_v,
            I * beta * p.p1 * c[0] + c[1] * qs,
            I * beta * p.p2 * c[0] + c[2] * qs,
        ]
    })
    .retag()
}

/// Mode-wise `G F = (div f, grad g)`.
pub fn apply_g(forcing: &ForcingField, cfg: &LatticeConfig) -> ResidualField {
    forcing
        .map(|idx, c| {
            let p = wavevector(*idx, cfg);
            [
                I * (c[1] * p.p1 + c[2] * p.p2),
                I * p.p1 * c[0],
                I * p.p2 * c[0],
            ]
        })
        .retag()
}

/// A resonant mode at which the forcing is not in the range of `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub index: ModeIndex,
    /// `|p| g + i p.f` at the mode.
    pub residue: Complex64,
}

/// The compatibility residue `|p| g + i p.f` of one mode.
pub fn compatibility_residue(forcing: &ForcingField, idx: ModeIndex, cfg: &LatticeConfig) -> Complex64 {
    let p = wavevector(idx, cfg);
    let c = forcing.get(&idx);
    c[0] * p.norm() + I * (c[1] * p.p1 + c[2] * p.p2)
}

/// Resonant modes whose residue exceeds `tol` in modulus.
pub fn check_compatibility_tol(
    forcing: &ForcingField,
    resonant: &ResonanceSet,
    cfg: &LatticeConfig,
    tol: f64,
) -> Vec<Violation> {
    resonant
        .iter()
        .map(|&index| Violation {
            index,
            residue: compatibility_residue(forcing, index, cfg),
        })
        .filter(|v| v.residue.norm() > tol)
        .collect()
}

/// [`check_compatibility_tol`] with a tolerance of `1e-12` relative to the
/// forcing's scale.
pub fn check_compatibility(
    forcing: &ForcingField,
    resonant: &ResonanceSet,
    cfg: &LatticeConfig,
) -> Vec<Violation> {
    let p_max = resonant
        .iter()
        .map(|i| wavevector(*i, cfg).norm())
        .fold(0.0, f64::max);
    let tol = 1e-12 * (1.0 + p_max * forcing.max_abs());
    check_compatibility_tol(forcing, resonant, cfg, tol)
}

/// Closed-form solve of one nonresonant `q > 0` mode.
pub fn solve_mode(c: &Coeff, idx: ModeIndex, beta: f64, cfg: &LatticeConfig) -> Coeff {
    let p = wavevector(idx, cfg);
    let p2 = p.norm_sq();
    let qs = idx.q as f64 * (1.0 + cfg.omega * p2);
    let inv = -1.0 / dispersion_delta(p, idx.q, beta, cfg.omega);
    let (g, f1, f2) = (c[0], c[1], c[2]);
    let p_dot_f = f1 * p.p1 + f2 * p.p2;
    let eta = (I * qs * p_dot_f + g * beta * p2) * inv;
    let v1 = (-I * qs * p.p1 * g + p_dot_f * beta * p.p1) * inv;
    let v2 = (-I * qs * p.p2 * g + p_dot_f * beta * p.p2) * inv;
    [eta, v1, v2]
}

/// The pseudo-inverse `T`: solves `L U = G F` at every solvable mode, maps
/// resonant and `q = 0` modes to `(g / beta, 0, 0)` and the origin to zero.
///
/// Defined for any `F`, compatible or not.
pub fn solve_t(
    forcing: &ForcingField,
    beta: f64,
    cfg: &LatticeConfig,
    resonant: &ResonanceSet,
) -> SpectralField {
    let zero = re(0.0);
    SpectralField::from_modes(forcing.iter().filter_map(|(idx, c)| {
        if *idx == ModeIndex::ORIGIN {
            None
        } else if idx.q == 0 || resonant.contains(idx) {
            Some((*idx, [c[0] / beta, zero, zero]))
        } else {
            Some((*idx, solve_mode(c, *idx, beta, cfg)))
        }
    }))
}

/// Kernel element `(|p| cos qt, -i p sin qt) exp(i p.x)` for a resonant index.
pub fn kernel_element(idx: ModeIndex, cfg: &LatticeConfig) -> SpectralField {
    let p = wavevector(idx, cfg);
    SpectralField::from_modes([(idx, [re(p.norm()), -I * p.p1, -I * p.p2])])
}

/// `zeta0 = (1, 0, 0)`.
pub fn constant_element() -> SpectralField {
    SpectralField::from_modes([(ModeIndex::ORIGIN, [re(1.0), re(0.0), re(0.0)])])
}

/// Kernel of `L` at `beta0`: the constant plus one element per resonant index.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub beta0: f64,
    pub cfg: LatticeConfig,
    pub resonant: ResonanceSet,
    pub zeta0: SpectralField,
    pub xis: Vec<(ModeIndex, SpectralField)>,
}

/// Coordinates of a kernel vector: the mean height and one complex amplitude
/// per chosen resonant index (its conjugate partner is added automatically).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KernelCoords {
    pub c: f64,
    pub amplitudes: Vec<(ModeIndex, Complex64)>,
}

impl KernelBasis {
    pub fn element(&self, idx: &ModeIndex) -> Option<&SpectralField> {
        self.xis.iter().find(|(i, _)| i == idx).map(|(_, f)| f)
    }

    /// `C zeta0 + sum (A xi + conj(A xi))`.
    pub fn combination(&self, coords: &KernelCoords) -> Result<SpectralField> {
        let mut out = &self.zeta0 * coords.c;
        for (idx, a) in &coords.amplitudes {
            let (xi, xi_bar) = match (self.element(idx), self.element(&idx.reflected())) {
                (Some(x), Some(xb)) => (x, xb),
                _ => {
                    return Err(Error::HypothesisViolation {
                        extra: vec![*idx],
                        missing: vec![],
                    })
                }
            };
            out = &out + &(xi * *a);
            out = &out + &(xi_bar * a.conj());
        }
        Ok(out)
    }
}

pub fn kernel_basis(beta0: f64, cfg: &LatticeConfig, eps_res: f64) -> Result<KernelBasis> {
    let resonant = enumerate_resonance_set(beta0, cfg, eps_res);
    if resonant.is_empty() {
        return Err(Error::EmptyKernel);
    }
    let xis = resonant
        .iter()
        .map(|&idx| (idx, kernel_element(idx, cfg)))
        .collect();
    Ok(KernelBasis {
        beta0,
        cfg: *cfg,
        resonant,
        zeta0: constant_element(),
        xis,
    })
}

/// `U = T F + sum (A xi + conj) + C zeta0` for a compatible forcing.
pub fn general_solution(
    forcing: &ForcingField,
    coords: &KernelCoords,
    basis: &KernelBasis,
) -> Result<SpectralField> {
    let violations = check_compatibility(forcing, &basis.resonant, &basis.cfg);
    if !violations.is_empty() {
        return Err(Error::Incompatible(violations));
    }
    let particular = solve_t(forcing, basis.beta0, &basis.cfg, &basis.resonant);
    Ok(&particular + &basis.combination(coords)?)
}
