//! Assembly of standing-wave fields: the kernel part `X`, the corrections
//! `V1 = mu T X` and `V2 = beta0 T B(X, X)`, and the second-order free
//! surface.

use num_complex::Complex64;

use crate::bifurcation::{Amplitudes, BifurcationCoefficients, BranchPoint};
use crate::error::{Error, Result};
use crate::lattice::ModeIndex;
use crate::linop::{constant_element, kernel_element, solve_t};
use crate::spectral::{quadratic_b, Coeff, SpectralField, ZERO_COEFF};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `A1 xi1 + conj + A2 xi2 + conj + C zeta0`.
pub fn assemble_x(bp: &BranchPoint, a1: Complex64, a2: Complex64, c: f64) -> SpectralField {
    let cfg = &bp.cfg;
    let i1 = bp.xi1_index();
    let i2 = bp.xi2_index();
    let terms = [
        kernel_element(i1, cfg).scaled(a1),
        kernel_element(i1.reflected(), cfg).scaled(a1.conj()),
        kernel_element(i2, cfg).scaled(a2),
        kernel_element(i2.reflected(), cfg).scaled(a2.conj()),
        &constant_element() * c,
    ];
    let mut out = SpectralField::zero();
    for t in &terms {
        out = &out + t;
    }
    out
}

/// `V1 = mu T X`, with `X` read as a forcing.
pub fn correction_v1(bp: &BranchPoint, x: &SpectralField, mu: f64) -> SpectralField {
    &solve_t(&x.retag(), bp.beta0, &bp.cfg, &bp.resonant) * mu
}

/// Closed form of `V1`: `(mu / beta0)` times the height of each
/// fundamental mode, as an `eta cos qt` field.
pub fn correction_v1_closed(bp: &BranchPoint, a1: Complex64, a2: Complex64, mu: f64) -> SpectralField {
    let s = mu / bp.beta0;
    let h1 = bp.k1_sq().sqrt();
    let h2 = bp.k2_sq().sqrt();
    let z = re(0.0);
    let i1 = bp.xi1_index();
    let i2 = bp.xi2_index();
    SpectralField::from_modes([
        (i1, [a1 * h1 * s, z, z]),
        (i1.reflected(), [a1.conj() * h1 * s, z, z]),
        (i2, [a2 * h2 * s, z, z]),
        (i2.reflected(), [a2.conj() * h2 * s, z, z]),
    ])
}

/// `V2 = beta0 T B(X, X)`.
pub fn correction_v2(bp: &BranchPoint, x: &SpectralField) -> SpectralField {
    &solve_t(&quadratic_b(x), bp.beta0, &bp.cfg, &bp.resonant) * bp.beta0
}

fn conj3(c: Coeff) -> Coeff {
    [c[0].conj(), c[1].conj(), c[2].conj()]
}

/// `V3 + V4` assembled from the coefficient tables.
pub fn correction_v2_closed(
    bp: &BranchPoint,
    co: &BifurcationCoefficients,
    a1: Complex64,
    a2: Complex64,
) -> SpectralField {
    let LatticeParts { k1, k2, t1, t2 } = LatticeParts::of(bp);
    let (kk1, kk2) = (bp.k1_sq(), bp.k2_sq());
    let cross = k1 * k2 * (1.0 - t1 * t2);
    let b0 = bp.beta0;
    let dq = 2 * bp.q;
    let z = re(0.0);
    let mut out = SpectralField::zero();
    let mut pair = |n1: i32, n2: i32, q: u32, c: Coeff| {
        out.add_to(ModeIndex::new(n1, n2, q), c);
        out.add_to(ModeIndex::new(-n1, -n2, q), conj3(c));
    };

    // V3: time-independent heights.
    pair(2, 0, 0, [a1 * a1 * (-0.25 * kk1), z, z]);
    pair(0, 2, 0, [a2 * a2 * (-0.25 * kk2), z, z]);
    pair(1, 1, 0, [a1 * a2 * (-0.5 * cross), z, z]);
    pair(1, -1, 0, [a1 * a2.conj() * (0.5 * cross), z, z]);

    // V4: second harmonics in time.
    let delta = |s: Complex64, e: f64, v1: f64, v2: f64| -> Coeff {
        [s * (b0 * e), s * I * (b0 * v1), s * I * (b0 * v2)]
    };
    pair(2, 0, dq, delta(a1 * a1, co.a1, co.a2, t1 * co.a2));
    pair(0, 2, dq, delta(a2 * a2, co.a3, co.a4, -t2 * co.a4));
    pair(1, 1, dq, delta(a1 * a2, co.b1, co.b2, co.b3));
    pair(1, -1, dq, delta(a1 * a2.conj(), co.b4, co.b5, co.b6));
    out
}

struct LatticeParts {
    k1: f64,
    k2: f64,
    t1: f64,
    t2: f64,
}

impl LatticeParts {
    fn of(bp: &BranchPoint) -> Self {
        LatticeParts {
            k1: bp.cfg.k1,
            k2: bp.cfg.k2,
            t1: bp.cfg.tau1,
            t2: bp.cfg.tau2,
        }
    }
}

/// Truncation order of a synthesized solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// `X`.
    First,
    /// `X - V1 - V2`.
    Second,
}

impl Order {
    pub fn from_int(n: u32) -> Result<Self> {
        match n {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::InvalidConfig(format!("order must be 1 or 2, got {n}"))),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Order::First => 1,
            Order::Second => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandingWaveSolution {
    pub bp: BranchPoint,
    pub mu: f64,
    pub c: f64,
    pub a1: Complex64,
    pub a2: Complex64,
    pub sigma: [f64; 2],
    pub order: Order,
    pub field: SpectralField,
}

impl StandingWaveSolution {
    /// `beta0 + mu`.
    pub fn beta(&self) -> f64 {
        self.bp.beta0 + self.mu
    }
}

/// Real nonnegative amplitudes from `amps`, shifted by `x -> x - sigma`.
pub fn synthesize(
    bp: &BranchPoint,
    amps: &Amplitudes,
    sigma: [f64; 2],
    order: Order,
) -> StandingWaveSolution {
    let a1 = re(amps.a1());
    let a2 = re(amps.a2());
    synthesize_complex(bp, a1, a2, amps.mu, amps.c, sigma, order)
}

pub fn synthesize_complex(
    bp: &BranchPoint,
    a1: Complex64,
    a2: Complex64,
    mu: f64,
    c: f64,
    sigma: [f64; 2],
    order: Order,
) -> StandingWaveSolution {
    let x = assemble_x(bp, a1, a2, c);
    let unshifted = match order {
        Order::First => x,
        Order::Second => {
            let v1 = correction_v1(bp, &x, mu);
            let v2 = correction_v2(bp, &x);
            &(&x - &v1) - &v2
        }
    };
    StandingWaveSolution {
        bp: bp.clone(),
        mu,
        c,
        a1,
        a2,
        sigma,
        order,
        field: unshifted.shifted(sigma, &bp.cfg),
    }
}

/// Modes carrying the second-order free surface at `C = 0`: the four
/// fundamentals and the eight second-order spatial modes at times `0` and `2q`.
pub fn corollary_modes(q: u32) -> Vec<ModeIndex> {
    let mut out: Vec<ModeIndex> = BranchPoint::unit_modes(q).to_vec();
    for tq in [0, 2 * q] {
        for (n1, n2) in [(2, 0), (0, 2), (1, 1), (1, -1)] {
            out.push(ModeIndex::new(n1, n2, tq));
            out.push(ModeIndex::new(-n1, -n2, tq));
        }
    }
    out.sort();
    out
}

/// Explicit second-order free surface (height only) for `C = 0`, shifted by
/// `x -> x - sigma`.
///
/// The cross term at `P1 + P2` carries `+k1 k2 (1 - tau1 tau2) |A1 A2|`, the
/// sign that agrees with `X - V2`. `V1` is of higher order here and left out.
pub fn corollary_surface(
    bp: &BranchPoint,
    co: &BifurcationCoefficients,
    amps: &Amplitudes,
    sigma: [f64; 2],
) -> Result<SpectralField> {
    if amps.c != 0.0 {
        return Err(Error::InvalidConfig(format!(
            "the second-order surface assumes C = 0, got {}",
            amps.c
        )));
    }
    let LatticeParts { k1, k2, t1, t2 } = LatticeParts::of(bp);
    let (m1, m2) = (amps.a1(), amps.a2());
    let (kk1, kk2) = (bp.k1_sq(), bp.k2_sq());
    let cross = k1 * k2 * (1.0 - t1 * t2);
    let b0 = bp.beta0;
    let dq = 2 * bp.q;

    // Cosine amplitudes; stored coefficients are half of these.
    let cosines = [
        (1, 0, bp.q, 2.0 * kk1.sqrt() * m1),
        (0, 1, bp.q, 2.0 * kk2.sqrt() * m2),
        (2, 0, 0, 0.5 * kk1 * m1 * m1),
        (0, 2, 0, 0.5 * kk2 * m2 * m2),
        (1, 1, 0, cross * m1 * m2),
        (1, -1, 0, -cross * m1 * m2),
        (2, 0, dq, -2.0 * b0 * co.a1 * m1 * m1),
        (0, 2, dq, -2.0 * b0 * co.a3 * m2 * m2),
        (1, 1, dq, -2.0 * b0 * co.b1 * m1 * m2),
        (1, -1, dq, -2.0 * b0 * co.b4 * m1 * m2),
    ];
    let mut out = SpectralField::zero();
    for (n1, n2, q, amp) in cosines {
        let c = [re(0.5 * amp), re(0.0), re(0.0)];
        out.add_to(ModeIndex::new(n1, n2, q), c);
        out.add_to(ModeIndex::new(-n1, -n2, q), c);
    }
    Ok(out.shifted(sigma, &bp.cfg))
}

/// Height component of `field` restricted to `modes`.
pub fn height_on(field: &SpectralField, modes: &[ModeIndex]) -> SpectralField {
    SpectralField::from_modes(modes.iter().map(|m| {
        let mut c = ZERO_COEFF;
        c[0] = field.get(m)[0];
        (*m, c)
    }))
}
