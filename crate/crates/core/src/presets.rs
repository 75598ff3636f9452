//! Parameter sets of the five standing-wave figure presets.

use std::f64::consts::{PI, SQRT_2};

use crate::bifurcation::BranchPoint;
use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;

/// How to read the fifth figure's `tau` values, `((sqrt5 ± 1)/2)^2 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fig5Reading {
    /// `tau_j` is the square root of the expression, which would make both
    /// unit modes resonant at `beta0 = sqrt 5`.
    #[default]
    Corrected,
    /// The expressions taken as `tau_j` directly.
    Literal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub number: u8,
    pub cfg: LatticeConfig,
    pub beta0: f64,
    pub q: u32,
    pub c: f64,
    pub mu: f64,
    /// Reference `|A1|`, `|A2|`.
    pub reference: [f64; 2],
    /// Snapshot time of the figure.
    pub t: f64,
    pub notes: Vec<String>,
}

impl FigurePreset {
    /// Validated branch point for this preset.
    pub fn branch_point(&self) -> Result<BranchPoint> {
        BranchPoint::validate(self.beta0, self.q, &self.cfg)
    }
}

pub const FIGURE_T: f64 = PI / 20.0;

fn preset(number: u8, cfg: LatticeConfig, beta0: f64, mu: f64, reference: [f64; 2]) -> FigurePreset {
    FigurePreset {
        number,
        cfg,
        beta0,
        q: 1,
        c: 0.0,
        mu,
        reference,
        t: FIGURE_T,
        notes: Vec::new(),
    }
}

/// Preset `n` in `1..=5`, reading figure 5 as corrected.
pub fn figure(n: u8) -> Result<FigurePreset> {
    figure_with(n, Fig5Reading::Corrected)
}

pub fn figure_with(n: u8, reading: Fig5Reading) -> Result<FigurePreset> {
    let s5 = 5f64.sqrt();
    let s3 = 3f64.sqrt();
    let cfg = |k1, k2, t1, t2| LatticeConfig::new(1.0, k1, k2, t1, t2);
    let p = match n {
        1 => preset(1, cfg(1.0 / SQRT_2, 1.0 / SQRT_2, 1.0, 1.0)?, 2.0, -0.3, [0.539972, 0.539972]),
        2 => preset(2, cfg(1.0 / s5, 1.0 / s5, 2.0, 2.0)?, 2.0, -0.02, [0.397342, 0.397342]),
        3 => preset(
            3,
            cfg((s5 + 1.0) / (2.0 * SQRT_2), (s5 - 1.0) / (2.0 * SQRT_2), 1.0, 1.0)?,
            s5,
            -0.2,
            [0.18089, 0.784643],
        ),
        4 => {
            let mut p = preset(
                4,
                cfg((s5 + 1.0) / (2.0 * s3), (s5 - 1.0) / (2.0 * s3), SQRT_2, SQRT_2)?,
                s5,
                -0.08,
                [0.186587, 0.730987],
            );
            p.notes.push("tau1 = tau2 = sqrt 2 (the value resonant at beta0 = sqrt 5)".into());
            p
        }
        5 => return figure5(reading),
        _ => return Err(Error::InvalidConfig(format!("figure must be 1..=5, got {n}"))),
    };
    Ok(p)
}

fn figure5(reading: Fig5Reading) -> Result<FigurePreset> {
    let s5 = 5f64.sqrt();
    let plus = ((s5 + 1.0) / 2.0).powi(2) - 1.0;
    let minus = ((s5 - 1.0) / 2.0).powi(2) - 1.0;
    match reading {
        Fig5Reading::Corrected => Err(Error::InvalidConfig(format!(
            "figure 5 corrected reading needs tau2^2 = ((sqrt5 - 1)/2)^2 - 1 = {minus:.6}, \
             which is negative; with k2 = 1 the second unit mode has |P2| >= 1 and cannot \
             meet the resonant radius (sqrt5 - 1)/2 at beta0 = sqrt 5"
        ))),
        Fig5Reading::Literal => {
            // tau2 < 0 here, so the configuration is outside the validated
            // domain and is built field by field.
            let cfg = LatticeConfig {
                omega: 1.0,
                k1: 1.0,
                k2: 1.0,
                tau1: plus,
                tau2: minus,
            };
            let mut p = preset(5, cfg, s5, 0.5, [0.47833, 0.620853]);
            p.notes.push(format!(
                "literal tau values ({plus:.6}, {minus:.6}); tau2 is negative and neither unit \
                 mode is resonant at beta0 = sqrt 5, so the branch-point hypothesis fails"
            ));
            Ok(p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_four_are_branch_points() {
        for n in 1..=4 {
            let p = figure(n).unwrap();
            assert!(p.branch_point().is_ok(), "figure {n}");
        }
    }

    #[test]
    fn figure5_readings() {
        assert!(matches!(figure(5), Err(Error::InvalidConfig(_))));
        let lit = figure_with(5, Fig5Reading::Literal).unwrap();
        assert!(lit.cfg.tau2 < 0.0);
        assert!(lit.cfg.validate().is_err());
        assert!(figure(6).is_err());
    }
}
