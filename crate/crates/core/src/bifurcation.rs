//! Scalar coefficient tables and amplitude equations of the reduction onto
//! the four-element kernel `{(±1,0,q), (0,±1,q)}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{
    dispersion_delta, enumerate_resonance_set, wavevector, LatticeConfig, ModeIndex,
    ResonanceSet, WaveVector, DEFAULT_EPS_RES,
};
use crate::linop::kernel_element;
use crate::spectral::{bilinear_b, inner_product};
use crate::synthesis::{assemble_x, correction_v2};

/// Agreement required between closed forms and the generic pipeline.
pub const PIPELINE_RTOL: f64 = 1e-9;

/// Lattice, critical `beta0` and time frequency `q` whose resonance set is
/// exactly the four unit modes.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchPoint {
    pub beta0: f64,
    pub q: u32,
    pub cfg: LatticeConfig,
    pub resonant: ResonanceSet,
}

impl BranchPoint {
    pub fn validate(beta0: f64, q: u32, cfg: &LatticeConfig) -> Result<Self> {
        Self::validate_with(beta0, q, cfg, DEFAULT_EPS_RES)
    }

    pub fn validate_with(beta0: f64, q: u32, cfg: &LatticeConfig, eps_res: f64) -> Result<Self> {
        if !(beta0 > 0.0) || q == 0 {
            return Err(Error::InvalidConfig(format!(
                "beta0 must be positive and q at least 1 (got beta0={beta0}, q={q})"
            )));
        }
        cfg.validate()?;
        let resonant = enumerate_resonance_set(beta0, cfg, eps_res);
        let expected = Self::unit_modes(q);
        let extra: Vec<_> = resonant
            .iter()
            .filter(|m| !expected.contains(m))
            .copied()
            .collect();
        let missing: Vec<_> = expected
            .iter()
            .filter(|m| !resonant.contains(m))
            .copied()
            .collect();
        if !extra.is_empty() || !missing.is_empty() {
            return Err(Error::HypothesisViolation { extra, missing });
        }
        Ok(BranchPoint {
            beta0,
            q,
            cfg: *cfg,
            resonant,
        })
    }

    /// A branch point that skips the resonance check, for diagnosing
    /// configurations that fail it. Results carry no guarantees.
    pub fn unchecked(beta0: f64, q: u32, cfg: &LatticeConfig) -> Self {
        BranchPoint {
            beta0,
            q,
            cfg: *cfg,
            resonant: ResonanceSet::from_modes(Self::unit_modes(q)),
        }
    }

    pub fn unit_modes(q: u32) -> [ModeIndex; 4] {
        [
            ModeIndex::new(1, 0, q),
            ModeIndex::new(-1, 0, q),
            ModeIndex::new(0, 1, q),
            ModeIndex::new(0, -1, q),
        ]
    }

    pub fn xi1_index(&self) -> ModeIndex {
        ModeIndex::new(1, 0, self.q)
    }

    pub fn xi2_index(&self) -> ModeIndex {
        ModeIndex::new(0, 1, self.q)
    }

    /// `k1^2 (1 + tau1^2)`.
    pub fn k1_sq(&self) -> f64 {
        self.cfg.p1_norm_sq()
    }

    /// `k2^2 (1 + tau2^2)`.
    pub fn k2_sq(&self) -> f64 {
        self.cfg.p2_norm_sq()
    }

    /// Same branch point with the roles of the two lattice vectors exchanged.
    pub fn swapped(&self) -> Self {
        BranchPoint::unchecked(self.beta0, self.q, &self.cfg.swapped())
    }
}

pub fn validate_branch_point(beta0: f64, q: u32, cfg: &LatticeConfig) -> Result<BranchPoint> {
    BranchPoint::validate(beta0, q, cfg)
}

/// Second-harmonic coefficient tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub b5: f64,
    pub b6: f64,
    pub d1: f64,
    pub d2: f64,
}

impl BifurcationCoefficients {
    pub fn a(&self) -> [f64; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }

    pub fn b(&self) -> [f64; 6] {
        [self.b1, self.b2, self.b3, self.b4, self.b5, self.b6]
    }

    pub fn d(&self) -> [f64; 2] {
        [self.d1, self.d2]
    }
}

fn check_denominator(what: &'static str, value: f64, scale: f64) -> Result<()> {
    if value.abs() < 1e-12 * scale.max(1e-300) {
        Err(Error::Degenerate { what, value })
    } else {
        Ok(())
    }
}

/// `(a_odd, a_even)` for one lattice direction with `k`, `tau`.
fn a_pair(k: f64, tau: f64, beta0: f64, q: f64, omega: f64) -> Result<(f64, f64)> {
    let s = (1.0 + tau * tau).sqrt();
    let kk = k * k * (1.0 + tau * tau);
    let w = 1.0 + 4.0 * omega * kk;
    let t1 = 4.0 * q * q * w * w;
    let t2 = 4.0 * beta0 * beta0 * kk;
    let den = t1 - t2;
    check_denominator("a", den, t1.max(t2))?;
    let odd = -(beta0 * kk * kk + 2.0 * q * k.powi(3) * s.powi(3) * w) / den;
    let even = (2.0 * beta0 * k.powi(4) * s.powi(3) + q * k.powi(3) * s * s * w) / den;
    Ok((odd, even))
}

/// Closed-form `a1..a4`, `b1..b6`, `d1`, `d2`.
///
/// `d1`, `d2` are the dispersion function at `(P1 ± P2, 2q)`; `b3` and `b6`
/// are evaluated with the common prefactor cancelled so `k1 = k2` is regular.
pub fn second_order_coefficients(bp: &BranchPoint) -> Result<BifurcationCoefficients> {
    let LatticeConfig {
        omega,
        k1,
        k2,
        tau1: t1,
        tau2: t2,
    } = bp.cfg;
    let (b0, q) = (bp.beta0, bp.q as f64);
    let (a1, a2) = a_pair(k1, t1, b0, q, omega)?;
    let (a3, a4) = a_pair(k2, t2, b0, q, omega)?;

    let s1 = (1.0 + t1 * t1).sqrt();
    let s2 = (1.0 + t2 * t2).sqrt();
    let kk = k1 * k2;
    let sp = (k1 + k2).powi(2) + (k1 * t1 - k2 * t2).powi(2);
    let sm = (k1 - k2).powi(2) + (k1 * t1 + k2 * t2).powi(2);
    let wp = 1.0 + omega * sp;
    let wm = 1.0 + omega * sm;
    let d1 = 4.0 * q * q * wp * wp - b0 * b0 * sp;
    let d2 = 4.0 * q * q * wm * wm - b0 * b0 * sm;
    check_denominator("d1", d1, 4.0 * q * q * wp * wp)?;
    check_denominator("d2", d2, 4.0 * q * q * wm * wm)?;

    let cross_p = kk * (k1 + k2) * (s1 + s2) - kk * (k1 * t1 - k2 * t2) * (t2 * s1 - t1 * s2);
    let cross_m = kk * (k1 - k2) * (s1 - s2) - kk * (k1 * t1 + k2 * t2) * (t2 * s1 + t1 * s2);
    let b1 = (-2.0 * q * wp * cross_p - b0 * kk * (1.0 - t1 * t2) * sp) / (2.0 * d1);
    let b2 = (k1 + k2) / (2.0 * d1) * (2.0 * q * kk * (1.0 - t1 * t2) * wp + b0 * cross_p);
    let b3 = (k1 * t1 - k2 * t2) / (2.0 * d1) * (2.0 * q * kk * (1.0 - t1 * t2) * wp + b0 * cross_p);
    let b4 = (2.0 * q * wm * cross_m + b0 * kk * (1.0 - t1 * t2) * sm) / (2.0 * d2);
    let inner = 2.0 * q * kk * (t1 * t2 - 1.0) * wm - b0 * cross_m;
    let b5 = (k1 - k2) / (2.0 * d2) * inner;
    let b6 = (k1 * t1 + k2 * t2) / (2.0 * d2) * inner;

    Ok(BifurcationCoefficients {
        a1,
        a2,
        a3,
        a4,
        b1,
        b2,
        b3,
        b4,
        b5,
        b6,
        d1,
        d2,
    })
}

/// `d1`, `d2` straight from the dispersion function.
pub fn second_harmonic_deltas(bp: &BranchPoint) -> (f64, f64) {
    let p1 = wavevector(bp.xi1_index(), &bp.cfg);
    let p2 = wavevector(bp.xi2_index(), &bp.cfg);
    let plus = WaveVector {
        p1: p1.p1 + p2.p1,
        p2: p1.p2 + p2.p2,
    };
    let minus = WaveVector {
        p1: p1.p1 - p2.p1,
        p2: p1.p2 - p2.p2,
    };
    let dq = 2 * bp.q;
    (
        dispersion_delta(plus, dq, bp.beta0, bp.cfg.omega),
        dispersion_delta(minus, dq, bp.beta0, bp.cfg.omega),
    )
}

fn unit_x(bp: &BranchPoint, a1: f64, a2: f64) -> crate::spectral::SpectralField {
    assemble_x(bp, Complex64::new(a1, 0.0), Complex64::new(a2, 0.0), 0.0)
}

/// The same tables read off `beta0 T B(X, X)` at the second-harmonic modes
/// for unit amplitudes. `d1`, `d2` come from [`second_harmonic_deltas`].
pub fn pipeline_second_order(bp: &BranchPoint) -> BifurcationCoefficients {
    let i = Complex64::new(0.0, 1.0);
    let b0 = bp.beta0;
    let dq = 2 * bp.q;
    let read = |a1: f64, a2: f64, n1: i32, n2: i32| {
        let v2 = correction_v2(bp, &unit_x(bp, a1, a2));
        let c = v2.get(&ModeIndex::new(n1, n2, dq));
        [
            (c[0] / b0).re,
            (c[1] / (i * b0)).re,
            (c[2] / (i * b0)).re,
        ]
    };
    let [a1, a2, _] = read(1.0, 0.0, 2, 0);
    let [a3, a4, _] = read(0.0, 1.0, 0, 2);
    let [b1, b2, b3] = read(1.0, 1.0, 1, 1);
    let [b4, b5, b6] = read(1.0, 1.0, 1, -1);
    let (d1, d2) = second_harmonic_deltas(bp);
    BifurcationCoefficients {
        a1,
        a2,
        a3,
        a4,
        b1,
        b2,
        b3,
        b4,
        b5,
        b6,
        d1,
        d2,
    }
}

/// Leading coefficient of the closed form for `l3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L3Convention {
    /// `1/4 k2^4 (1 + tau2^2)^2`.
    Quarter,
    /// `1/2 k2^4 (1 + tau2^2)^2`.
    Half,
}

impl L3Convention {
    pub fn factor(self) -> f64 {
        match self {
            L3Convention::Quarter => 0.25,
            L3Convention::Half => 0.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            L3Convention::Quarter => "quarter",
            L3Convention::Half => "half",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    /// `l3` convention confirmed by the pipeline.
    pub variant: L3Convention,
    /// `[l1, l2, l3]` from the projection pipeline.
    pub pipeline: [f64; 3],
}

impl CubicCoefficients {
    pub fn l(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }

    /// `l1 l3 - l2^2`.
    pub fn determinant(&self) -> f64 {
        self.l1 * self.l3 - self.l2 * self.l2
    }
}

/// Closed-form `l1`, `l2`, `l3` with the given `l3` convention.
pub fn cubic_closed_form(
    bp: &BranchPoint,
    co: &BifurcationCoefficients,
    l3_variant: L3Convention,
) -> [f64; 3] {
    let LatticeConfig {
        k1,
        k2,
        tau1: t1,
        tau2: t2,
        ..
    } = bp.cfg;
    let b0 = bp.beta0;
    let s1 = (1.0 + t1 * t1).sqrt();
    let s2 = (1.0 + t2 * t2).sqrt();
    let (kk1, kk2) = (bp.k1_sq(), bp.k2_sq());
    let l1 = 0.25 * kk1 * kk1 - b0 * co.a2 * k1 * k1 * s1.powi(3) + 0.5 * b0 * co.a1 * kk1;
    let l3 = l3_variant.factor() * kk2 * kk2 - b0 * co.a4 * k2 * k2 * s2.powi(3)
        + 0.5 * b0 * co.a3 * kk2;
    let kk = k1 * k2;
    let m = 1.0 - t1 * t2;
    let h = 0.5 * b0 * kk;
    let l2 = kk * kk * m * m + h * (co.b1 - co.b4) * m
        - h * co.b2 * (s1 + s2)
        - h * co.b3 * (t1 * s2 - t2 * s1)
        + h * co.b5 * (s1 - s2)
        - h * co.b6 * (t1 * s2 + t2 * s1);
    [l1, l2, l3]
}

/// `<2B(X, beta0 T B(X, X)), xi>` for unit real amplitudes.
fn projection(bp: &BranchPoint, a1: f64, a2: f64, onto: ModeIndex) -> f64 {
    let x = unit_x(bp, a1, a2);
    let v2 = correction_v2(bp, &x);
    let two_b = &bilinear_b(&x, &v2) * 2.0;
    inner_product(&two_b, &kernel_element(onto, &bp.cfg)).re
}

/// `[l1, l2, l3]` read off the cubic projections of the reduced equations.
pub fn pipeline_cubic(bp: &BranchPoint) -> [f64; 3] {
    let l1 = projection(bp, 1.0, 0.0, bp.xi1_index());
    let l12 = projection(bp, 1.0, 1.0, bp.xi1_index());
    let l3 = projection(bp, 0.0, 1.0, bp.xi2_index());
    [l1, l12 - l1, l3]
}

fn close(a: f64, b: f64, floor: f64) -> bool {
    (a - b).abs() <= PIPELINE_RTOL * a.abs().max(b.abs()).max(floor)
}

/// Closed-form `l`'s, cross-checked against the pipeline.
///
/// The `l3` convention is whichever of the two the pipeline confirms.
pub fn cubic_coefficients(
    bp: &BranchPoint,
    co: &BifurcationCoefficients,
) -> Result<CubicCoefficients> {
    let pipeline = pipeline_cubic(bp);
    let floor = pipeline.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let quarter = cubic_closed_form(bp, co, L3Convention::Quarter);
    let half = cubic_closed_form(bp, co, L3Convention::Half);
    for (what, k) in [("l1", 0), ("l2", 1)] {
        if !close(quarter[k], pipeline[k], floor) {
            return Err(Error::PipelineMismatch {
                what,
                closed: quarter[k],
                pipeline: pipeline[k],
            });
        }
    }
    let (variant, l) = if close(quarter[2], pipeline[2], floor) {
        (L3Convention::Quarter, quarter)
    } else if close(half[2], pipeline[2], floor) {
        (L3Convention::Half, half)
    } else {
        return Err(Error::PipelineMismatch {
            what: "l3",
            closed: quarter[2],
            pipeline: pipeline[2],
        });
    };
    Ok(CubicCoefficients {
        l1: l[0],
        l2: l[1],
        l3: l[2],
        variant,
        pipeline,
    })
}

/// Scale of the kernel pairing used in the amplitude equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// `<xi, xi> = k^2 (1 + tau^2)` on the linear terms, matching the
    /// reference amplitude quotients.
    #[default]
    Reference,
    /// `<xi, xi> = 2 k^2 (1 + tau^2)`, the value the cubic projections are
    /// computed with; doubles both squares.
    Consistent,
}

impl Normalization {
    pub fn factor(self) -> f64 {
        match self {
            Normalization::Reference => 1.0,
            Normalization::Consistent => 2.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Normalization::Reference => "reference",
            Normalization::Consistent => "consistent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub a1_sq: f64,
    pub a2_sq: f64,
    pub mu: f64,
    pub c: f64,
    pub normalization: Normalization,
}

impl Amplitudes {
    pub fn a1(&self) -> f64 {
        self.a1_sq.sqrt()
    }

    pub fn a2(&self) -> f64 {
        self.a2_sq.sqrt()
    }
}

const NEGATIVE_SQUARE_TOL: f64 = 1e-14;

fn clamp_square(which: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        // Adding zero maps -0.0 to 0.0.
        Ok(value + 0.0)
    } else if value >= -NEGATIVE_SQUARE_TOL {
        Ok(0.0)
    } else {
        Err(Error::BranchNonexistent { which, value })
    }
}

/// `|A1|^2`, `|A2|^2` from the truncated amplitude equations.
pub fn solve_amplitudes(
    bp: &BranchPoint,
    ls: &CubicCoefficients,
    mu: f64,
    c: f64,
) -> Result<Amplitudes> {
    solve_amplitudes_with(bp, ls, mu, c, Normalization::Reference)
}

pub fn solve_amplitudes_with(
    bp: &BranchPoint,
    ls: &CubicCoefficients,
    mu: f64,
    c: f64,
    normalization: Normalization,
) -> Result<Amplitudes> {
    let det = ls.determinant();
    let scale = ls.l1.abs().max(ls.l2.abs()).max(ls.l3.abs()).powi(2);
    if det.abs() <= 1e-12 * scale || det == 0.0 {
        return Err(Error::Degenerate {
            what: "l1 l3 - l2^2",
            value: det,
        });
    }
    let w = normalization.factor();
    let (kk1, kk2) = (w * bp.k1_sq(), w * bp.k2_sq());
    let forcing = mu + c * bp.beta0;
    let den = bp.beta0 * det;
    let a1_sq = forcing * (ls.l3 * kk1 - ls.l2 * kk2) / den;
    let a2_sq = forcing * (ls.l1 * kk2 - ls.l2 * kk1) / den;
    Ok(Amplitudes {
        a1_sq: clamp_square("|A1|^2", a1_sq)?,
        a2_sq: clamp_square("|A2|^2", a2_sq)?,
        mu,
        c,
        normalization,
    })
}

/// Truncated amplitude polynomials `(P1, P2)` in the amplitudes' own
/// normalization.
pub fn bifurcation_polynomials(
    ls: &CubicCoefficients,
    bp: &BranchPoint,
    amps: &Amplitudes,
) -> (f64, f64) {
    let w = amps.normalization.factor();
    let forcing = amps.mu + amps.c * bp.beta0;
    let b0 = bp.beta0;
    let p1 = forcing * w * bp.k1_sq() - b0 * ls.l1 * amps.a1_sq - b0 * ls.l2 * amps.a2_sq;
    let p2 = forcing * w * bp.k2_sq() - b0 * ls.l3 * amps.a2_sq - b0 * ls.l2 * amps.a1_sq;
    (p1, p2)
}
