//! Lattice geometry, the dispersion function and the resonance set.
//!
//! The spatial lattice is spanned by `P1 = k1 (1, tau1)` and `P2 = k2 (1, -tau2)`.
//! A triple `(n1, n2, q)` labels the Fourier mode `exp(i p.x)` with
//! `p = n1 P1 + n2 P2` and time frequency `q`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Default relative tolerance for resonance detection.
pub const DEFAULT_EPS_RES: f64 = 1e-9;

/// The five positive parameters fixing lattice and dispersion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    pub omega: f64,
    pub k1: f64,
    pub k2: f64,
    pub tau1: f64,
    pub tau2: f64,
}

impl LatticeConfig {
    pub fn new(omega: f64, k1: f64, k2: f64, tau1: f64, tau2: f64) -> Result<Self> {
        let cfg = LatticeConfig {
            omega,
            k1,
            k2,
            tau1,
            tau2,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks positivity of every parameter and the non-degeneracy of the
    /// lattice basis.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega", self.omega),
            ("k1", self.k1),
            ("k2", self.k2),
            ("tau1", self.tau1),
            ("tau2", self.tau2),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lattice basis is degenerate (determinant {det})"
            )));
        }
        Ok(())
    }

    /// Determinant of the map `(n1, n2) -> p`, equal to `-(tau1 + tau2) k1 k2`.
    pub fn determinant(&self) -> f64 {
        -(self.tau1 + self.tau2) * self.k1 * self.k2
    }

    /// `|P1|^2 = k1^2 (1 + tau1^2)`.
    pub fn p1_norm_sq(&self) -> f64 {
        self.k1 * self.k1 * (1.0 + self.tau1 * self.tau1)
    }

    /// `|P2|^2 = k2^2 (1 + tau2^2)`.
    pub fn p2_norm_sq(&self) -> f64 {
        self.k2 * self.k2 * (1.0 + self.tau2 * self.tau2)
    }

    /// The configuration with the roles of the two basis vectors exchanged.
    pub fn swapped(&self) -> Self {
        LatticeConfig {
            omega: self.omega,
            k1: self.k2,
            k2: self.k1,
            tau1: self.tau2,
            tau2: self.tau1,
        }
    }

    /// All `(n1, n2)` with `|p| <= radius`, in lexicographic order.
    ///
    /// Uses the box `k1 |n1| + k2 |n2| <= radius` (same-sign indices) or
    /// `tau1 k1 |n1| + tau2 k2 |n2| <= radius` (opposite signs).
    pub fn points_within(&self, radius: f64) -> Vec<(i32, i32)> {
        if !(radius >= 0.0) {
            return Vec::new();
        }
        let slack = 1.0 + 1e-12;
        let n1_max = (radius * slack / (self.k1 * self.tau1.min(1.0))).floor() as i32;
        let n2_max = (radius * slack / (self.k2 * self.tau2.min(1.0))).floor() as i32;
        let r2 = radius * radius * slack;
        let mut out = Vec::new();
        for n1 in -n1_max..=n1_max {
            for n2 in -n2_max..=n2_max {
                let p = wavevector(ModeIndex::new(n1, n2, 0), self);
                if p.norm_sq() <= r2 {
                    out.push((n1, n2));
                }
            }
        }
        out
    }

    /// Length of the shortest nonzero lattice vector.
    pub fn shortest_vector(&self) -> f64 {
        let r = self.p1_norm_sq().sqrt().max(self.p2_norm_sq().sqrt());
        self.points_within(r)
            .into_iter()
            .filter(|&nn| nn != (0, 0))
            .map(|(n1, n2)| wavevector(ModeIndex::new(n1, n2, 0), self).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Integer label `(n1, n2, q)` of a space-time Fourier mode.
///
/// Ordered lexicographically by `(q, n1, n2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub n1: i32,
    pub n2: i32,
    pub q: u32,
}

impl ModeIndex {
    pub const ORIGIN: ModeIndex = ModeIndex { n1: 0, n2: 0, q: 0 };

    pub const fn new(n1: i32, n2: i32, q: u32) -> Self {
        ModeIndex { n1, n2, q }
    }

    /// `(-n1, -n2, q)`.
    pub const fn reflected(self) -> Self {
        ModeIndex {
            n1: -self.n1,
            n2: -self.n2,
            q: self.q,
        }
    }

    pub const fn is_spatial_origin(self) -> bool {
        self.n1 == 0 && self.n2 == 0
    }
}

impl Ord for ModeIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.n1, self.n2).cmp(&(other.q, other.n1, other.n2))
    }
}

impl PartialOrd for ModeIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n1, self.n2, self.q)
    }
}

/// Real wavevector `(p1, p2)` of a lattice mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub p1: f64,
    pub p2: f64,
}

impl WaveVector {
    pub fn norm_sq(&self) -> f64 {
        self.p1 * self.p1 + self.p2 * self.p2
    }

    pub fn norm(&self) -> f64 {
        self.p1.hypot(self.p2)
    }

    pub fn dot(&self, x1: f64, x2: f64) -> f64 {
        self.p1 * x1 + self.p2 * x2
    }
}

/// `p = (k1 n1 + k2 n2, tau1 k1 n1 - tau2 k2 n2)`.
pub fn wavevector(idx: ModeIndex, cfg: &LatticeConfig) -> WaveVector {
    let n1 = idx.n1 as f64;
    let n2 = idx.n2 as f64;
    WaveVector {
        p1: cfg.k1 * n1 + cfg.k2 * n2,
        p2: cfg.tau1 * cfg.k1 * n1 - cfg.tau2 * cfg.k2 * n2,
    }
}

/// `Delta(p, q) = q^2 (1 + omega |p|^2)^2 - beta^2 |p|^2`.
pub fn dispersion_delta(p: WaveVector, q: u32, beta: f64, omega: f64) -> f64 {
    let q = q as f64;
    let p2 = p.norm_sq();
    let s = 1.0 + omega * p2;
    q * q * s * s - beta * beta * p2
}

/// Signed linear factor `q (1 + omega |p|^2) - beta |p|` of the dispersion
/// function.
pub fn dispersion_factor(p: WaveVector, q: u32, beta: f64, omega: f64) -> f64 {
    q as f64 * (1.0 + omega * p.norm_sq()) - beta * p.norm()
}

/// Finite set of resonant indices, sorted by `(q, n1, n2)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResonanceSet {
    modes: Vec<ModeIndex>,
}

impl ResonanceSet {
    pub fn from_modes(modes: impl IntoIterator<Item = ModeIndex>) -> Self {
        let set: BTreeSet<ModeIndex> = modes.into_iter().collect();
        ResonanceSet {
            modes: set.into_iter().collect(),
        }
    }

    pub fn contains(&self, idx: &ModeIndex) -> bool {
        self.modes.binary_search(idx).is_ok()
    }

    pub fn modes(&self) -> &[ModeIndex] {
        &self.modes
    }

    pub fn iter(&self) -> impl Iterator<Item = &ModeIndex> {
        self.modes.iter()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Number of distinct spatial pairs `(n1, n2)`.
    pub fn spatial_count(&self) -> usize {
        self.modes
            .iter()
            .map(|m| (m.n1, m.n2))
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Number of distinct time frequencies `q`.
    pub fn frequency_count(&self) -> usize {
        self.modes.iter().map(|m| m.q).collect::<BTreeSet<_>>().len()
    }
}

fn max_resonant_q(beta: f64, omega: f64, eps_res: f64) -> u32 {
    (beta / (2.0 * omega.sqrt()) * (1.0 + eps_res)).floor() as u32
}

/// Roots in `|p|` of `omega q r^2 - beta r + q = 0`, or `None` when complex.
fn radius_roots(beta: f64, omega: f64, q: u32, eps_res: f64) -> Option<(f64, f64)> {
    let q = q as f64;
    let mut disc = beta * beta - 4.0 * omega * q * q;
    if disc < 0.0 {
        if disc < -eps_res * beta * beta {
            return None;
        }
        disc = 0.0;
    }
    let sq = disc.sqrt();
    Some(((beta - sq) / (2.0 * omega * q), (beta + sq) / (2.0 * omega * q)))
}

/// All `(n1, n2, q)`, `q > 0`, whose `|p|` matches a root of the resonance
/// quadratic to relative tolerance `eps_res`.
pub fn enumerate_resonance_set(beta: f64, cfg: &LatticeConfig, eps_res: f64) -> ResonanceSet {
    assert!(beta > 0.0, "beta must be positive");
    let mut modes = Vec::new();
    for q in 1..=max_resonant_q(beta, cfg.omega, eps_res) {
        let Some((r_lo, r_hi)) = radius_roots(beta, cfg.omega, q, eps_res) else {
            continue;
        };
        for (n1, n2) in cfg.points_within(r_hi * (1.0 + 2.0 * eps_res)) {
            let r = wavevector(ModeIndex::new(n1, n2, q), cfg).norm();
            let hit = [r_lo, r_hi]
                .iter()
                .any(|&root| (r - root).abs() <= eps_res * root);
            if hit {
                modes.push(ModeIndex::new(n1, n2, q));
            }
        }
    }
    ResonanceSet::from_modes(modes)
}

/// Uniform bound `M` on `|p| / |q (1 + omega |p|^2) - beta |p||` over all
/// nonresonant modes.
///
/// Modes with `q |p| > 2 beta / omega` are bounded by `1 / beta`; the finite
/// remainder is scanned exhaustively.
pub fn operator_bound(beta: f64, cfg: &LatticeConfig, eps_res: f64) -> Result<f64> {
    assert!(beta > 0.0, "beta must be positive");
    let resonant = enumerate_resonance_set(beta, cfg, eps_res);
    let cutoff = 2.0 * beta / cfg.omega;
    let shortest = cfg.shortest_vector();
    let q_max = (cutoff / shortest).floor() as u32;
    let mut bound = 1.0 / beta;
    for q in 1..=q_max {
        for (n1, n2) in cfg.points_within(cutoff / q as f64) {
            let idx = ModeIndex::new(n1, n2, q);
            if idx.is_spatial_origin() || resonant.contains(&idx) {
                continue;
            }
            let p = wavevector(idx, cfg);
            let denom = dispersion_factor(p, q, beta, cfg.omega).abs();
            if denom < eps_res {
                return Err(Error::NearResonance {
                    index: idx,
                    denominator: denom,
                    tolerance: eps_res,
                });
            }
            bound = bound.max(p.norm() / denom);
        }
    }
    Ok(bound)
}

/// The common value of `q (1 + omega |P_j|^2) / |P_j|`, `j = 1, 2`, which makes
/// both unit modes resonant.
pub fn beta0_for_unit_modes(cfg: &LatticeConfig, q: u32, eps_res: f64) -> Result<f64> {
    let q = q as f64;
    let candidate = |norm_sq: f64| q * (1.0 + cfg.omega * norm_sq) / norm_sq.sqrt();
    let b1 = candidate(cfg.p1_norm_sq());
    let b2 = candidate(cfg.p2_norm_sq());
    if (b1 - b2).abs() > eps_res * b1.abs().max(b2.abs()) {
        return Err(Error::InconsistentConfig(format!(
            "unit modes resonate at different beta: {b1} vs {b2}"
        )));
    }
    Ok(b1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn fig1() -> LatticeConfig {
        LatticeConfig::new(1.0, 1.0 / SQRT_2, 1.0 / SQRT_2, 1.0, 1.0).unwrap()
    }

    fn fig3() -> LatticeConfig {
        let s5 = 5f64.sqrt();
        LatticeConfig::new(
            1.0,
            (s5 + 1.0) / (2.0 * SQRT_2),
            (s5 - 1.0) / (2.0 * SQRT_2),
            1.0,
            1.0,
        )
        .unwrap()
    }

    fn four(q: u32) -> ResonanceSet {
        ResonanceSet::from_modes([
            ModeIndex::new(1, 0, q),
            ModeIndex::new(-1, 0, q),
            ModeIndex::new(0, 1, q),
            ModeIndex::new(0, -1, q),
        ])
    }

    #[test]
    fn wavevector_examples() {
        let cfg = LatticeConfig::new(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            wavevector(ModeIndex::new(1, 0, 0), &cfg),
            WaveVector { p1: 1.0, p2: 1.0 }
        );
        assert_eq!(
            wavevector(ModeIndex::new(0, 1, 0), &cfg),
            WaveVector { p1: 1.0, p2: -1.0 }
        );
        assert_eq!(
            wavevector(ModeIndex::new(1, 1, 0), &cfg),
            WaveVector { p1: 2.0, p2: 0.0 }
        );
    }

    #[test]
    fn dispersion_examples() {
        let zero = WaveVector { p1: 0.0, p2: 0.0 };
        assert_eq!(dispersion_delta(zero, 2, 7.3, 1.0), 4.0);
        let h = 1.0 / SQRT_2;
        let p = WaveVector { p1: h, p2: h };
        assert!(dispersion_delta(p, 1, 2.0, 1.0).abs() < 1e-15);
        let p = WaveVector { p1: 1.0, p2: 1.0 };
        assert!((dispersion_delta(p, 1, 2.0, 1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn resonance_set_examples() {
        assert_eq!(enumerate_resonance_set(2.0, &fig1(), DEFAULT_EPS_RES), four(1));
        assert!(enumerate_resonance_set(1.5, &fig1(), DEFAULT_EPS_RES).is_empty());
        assert_eq!(
            enumerate_resonance_set(5f64.sqrt(), &fig3(), DEFAULT_EPS_RES),
            four(1)
        );
        let set = four(1);
        assert_eq!(set.spatial_count(), 4);
        assert_eq!(set.frequency_count(), 1);
    }

    #[test]
    fn resonance_set_is_sorted_by_q_then_n() {
        let set = enumerate_resonance_set(4.5, &fig1(), DEFAULT_EPS_RES);
        let modes = set.modes().to_vec();
        let mut sorted = modes.clone();
        sorted.sort();
        assert_eq!(modes, sorted);
        for m in &modes {
            assert!(set.contains(&m.reflected()));
        }
    }

    #[test]
    fn operator_bound_is_at_least_inverse_beta() {
        let m = operator_bound(2.0, &fig1(), DEFAULT_EPS_RES).unwrap();
        assert!(m > 0.5);
        // A lattice so coarse that q|p| <= 2 beta / omega never holds.
        let coarse = LatticeConfig::new(1.0, 10.0, 10.0, 1.0, 1.0).unwrap();
        let m = operator_bound(2.0, &coarse, DEFAULT_EPS_RES).unwrap();
        assert_eq!(m, 0.5);
    }

    #[test]
    fn operator_bound_reports_near_resonance() {
        let beta = 2.0 * (1.0 + 1e-12);
        let err = operator_bound(beta, &fig1(), 1e-11).unwrap_err();
        assert!(matches!(err, Error::NearResonance { .. }));
    }

    #[test]
    fn beta0_examples() {
        assert!((beta0_for_unit_modes(&fig1(), 1, DEFAULT_EPS_RES).unwrap() - 2.0).abs() < 1e-14);
        assert!(
            (beta0_for_unit_modes(&fig3(), 1, DEFAULT_EPS_RES).unwrap() - 5f64.sqrt()).abs()
                < 1e-14
        );
        // |P1| = 1, |P2| = 2.
        let cfg = LatticeConfig::new(1.0, 1.0 / SQRT_2, 2.0 / SQRT_2, 1.0, 1.0).unwrap();
        assert!(matches!(
            beta0_for_unit_modes(&cfg, 1, DEFAULT_EPS_RES),
            Err(Error::InconsistentConfig(_))
        ));
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(LatticeConfig::new(1.0, 1.0, 1.0, -0.5, 1.0).is_err());
        assert!(LatticeConfig::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(LatticeConfig::new(1.0, 1.0, f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn shortest_vector_of_square_lattice() {
        assert!((fig1().shortest_vector() - 1.0).abs() < 1e-15);
    }
}
