//! Finite triple-periodic Fourier fields and their exact algebra.
//!
//! A field stores, for every mode `(n1, n2, q)`, a triple of complex
//! coefficients multiplying `exp(i p.x)` and a fixed time factor per component.
//! State and forcing fields carry `(cos qt, sin qt, sin qt)`; residual fields,
//! obtained after one time derivative, carry `(sin qt, cos qt, cos qt)`.
//!
//! Terms whose time factor is `sin(0 t)` do not exist and are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::lattice::{wavevector, LatticeConfig, ModeIndex};

/// Three complex coefficients `(eta, v1, v2)` (or `(g, f1, f2)`) of one mode.
pub type Coeff = [Complex64; 3];

pub const ZERO_COEFF: Coeff = [Complex64::new(0.0, 0.0); 3];

/// Time parity of a field family.
pub trait Parity: Clone + fmt::Debug + PartialEq {
    /// `true` when the first component multiplies `cos qt` and the other two
    /// `sin qt`; `false` for the opposite assignment.
    const FIRST_IS_COS: bool;
}

/// `(eta cos qt, v sin qt)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct State;

/// `(g cos qt, f sin qt)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Forcing;

/// `(eta-equation sin qt, v-equation cos qt)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residual;

impl Parity for State {
    const FIRST_IS_COS: bool = true;
}
impl Parity for Forcing {
    const FIRST_IS_COS: bool = true;
}
impl Parity for Residual {
    const FIRST_IS_COS: bool = false;
}

/// Sparse coefficient map with a fixed time parity.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeField<P: Parity> {
    modes: BTreeMap<ModeIndex, Coeff>,
    _parity: PhantomData<P>,
}

pub type SpectralField = ModeField<State>;
pub type ForcingField = ModeField<Forcing>;
pub type ResidualField = ModeField<Residual>;

fn time_factor_vanishes<P: Parity>(component: usize, q: u32) -> bool {
    let is_cos = (component == 0) == P::FIRST_IS_COS;
    !is_cos && q == 0
}

impl<P: Parity> Default for ModeField<P> {
    fn default() -> Self {
        ModeField {
            modes: BTreeMap::new(),
            _parity: PhantomData,
        }
    }
}

impl<P: Parity> ModeField<P> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_modes(modes: impl IntoIterator<Item = (ModeIndex, Coeff)>) -> Self {
        let mut field = Self::zero();
        for (idx, c) in modes {
            field.add_to(idx, c);
        }
        field
    }

    /// Accumulates `c` into mode `idx`.
    pub fn add_to(&mut self, idx: ModeIndex, mut c: Coeff) {
        for (k, ck) in c.iter_mut().enumerate() {
            if time_factor_vanishes::<P>(k, idx.q) {
                *ck = Complex64::new(0.0, 0.0);
            }
        }
        let entry = self.modes.entry(idx).or_insert(ZERO_COEFF);
        for k in 0..3 {
            entry[k] += c[k];
        }
    }

    pub fn get(&self, idx: &ModeIndex) -> Coeff {
        self.modes.get(idx).copied().unwrap_or(ZERO_COEFF)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeIndex, &Coeff)> {
        self.modes.iter()
    }

    pub fn indices(&self) -> impl Iterator<Item = &ModeIndex> {
        self.modes.keys()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.modes
            .values()
            .flat_map(|c| c.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Drops modes whose every component is below `rel * max_abs()`.
    pub fn pruned(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs();
        let modes = self
            .modes
            .iter()
            .filter(|(_, c)| c.iter().any(|z| z.norm() > cut))
            .map(|(i, c)| (*i, *c))
            .collect();
        ModeField {
            modes,
            _parity: PhantomData,
        }
    }

    /// Canonical form: coefficients below `1e-15 * max` removed.
    pub fn canonical(&self) -> Self {
        self.pruned(1e-15)
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        self.map(|_, c| [c[0] * s, c[1] * s, c[2] * s])
    }

    /// Applies `f` mode-wise, keeping the support.
    pub fn map(&self, mut f: impl FnMut(&ModeIndex, &Coeff) -> Coeff) -> Self {
        Self::from_modes(self.modes.iter().map(|(i, c)| (*i, f(i, c))))
    }

    /// Restriction to the modes accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&ModeIndex) -> bool) -> Self {
        Self::from_modes(
            self.modes
                .iter()
                .filter(|(i, _)| keep(i))
                .map(|(i, c)| (*i, *c)),
        )
    }

    /// The field `(n1, n2, q) -> conj(c(-n1, -n2, q))`.
    ///
    /// A field is real-valued exactly when it equals its own conjugate
    /// reflection.
    pub fn conjugate_reflection(&self) -> Self {
        Self::from_modes(
            self.modes
                .iter()
                .map(|(i, c)| (i.reflected(), [c[0].conj(), c[1].conj(), c[2].conj()])),
        )
    }

    /// Largest violation of the reality condition `c(-n) = conj(c(n))`.
    pub fn reality_defect(&self) -> f64 {
        let mirror = self.conjugate_reflection();
        (self - &mirror).max_abs()
    }

    /// Reinterprets the coefficients under another parity of the same shape.
    pub fn retag<Q: Parity>(&self) -> ModeField<Q> {
        ModeField::<Q>::from_modes(self.modes.iter().map(|(i, c)| (*i, *c)))
    }

    /// One component as a scalar coefficient list.
    pub fn component(&self, k: usize) -> BTreeMap<ModeIndex, Complex64> {
        self.modes.iter().map(|(i, c)| (*i, c[k])).collect()
    }

    /// Applies the spatial shift `x -> x - sigma`: every coefficient picks up
    /// the phase `exp(-i p.sigma)`.
    pub fn shifted(&self, sigma: [f64; 2], cfg: &LatticeConfig) -> Self {
        self.map(|i, c| {
            let phase = Complex64::from_polar(1.0, -wavevector(*i, cfg).dot(sigma[0], sigma[1]));
            [c[0] * phase, c[1] * phase, c[2] * phase]
        })
    }
}

impl<P: Parity> Add<&ModeField<P>> for &ModeField<P> {
    type Output = ModeField<P>;
    fn add(self, rhs: &ModeField<P>) -> ModeField<P> {
        let mut out = self.clone();
        for (i, c) in rhs.iter() {
            out.add_to(*i, *c);
        }
        out
    }
}

impl<P: Parity> Sub<&ModeField<P>> for &ModeField<P> {
    type Output = ModeField<P>;
    fn sub(self, rhs: &ModeField<P>) -> ModeField<P> {
        let mut out = self.clone();
        for (i, c) in rhs.iter() {
            out.add_to(*i, [-c[0], -c[1], -c[2]]);
        }
        out
    }
}

impl<P: Parity> Neg for &ModeField<P> {
    type Output = ModeField<P>;
    fn neg(self) -> ModeField<P> {
        self.scaled(Complex64::new(-1.0, 0.0))
    }
}

impl<P: Parity> Mul<f64> for &ModeField<P> {
    type Output = ModeField<P>;
    fn mul(self, s: f64) -> ModeField<P> {
        self.scaled(Complex64::new(s, 0.0))
    }
}

impl<P: Parity> Mul<Complex64> for &ModeField<P> {
    type Output = ModeField<P>;
    fn mul(self, s: Complex64) -> ModeField<P> {
        self.scaled(s)
    }
}

fn time_weight(q: u32) -> f64 {
    if q == 0 {
        1.0
    } else {
        0.5
    }
}

/// Weighted coefficient norm `sqrt(sum_q w_q |c|^2)` with `w_0 = 1` and
/// `w_q = 1/2` otherwise, i.e. the root mean square over one space-time cell.
pub fn field_norm<P: Parity>(field: &ModeField<P>) -> f64 {
    field
        .iter()
        .map(|(i, c)| time_weight(i.q) * c.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

/// Same as [`field_norm`] restricted to one component.
pub fn component_norm<P: Parity>(field: &ModeField<P>, k: usize) -> f64 {
    field
        .iter()
        .map(|(i, c)| time_weight(i.q) * c[k].norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Complex pointwise sum of the series at `(x1, x2, t)`.
pub fn evaluate_complex<P: Parity>(
    field: &ModeField<P>,
    cfg: &LatticeConfig,
    x1: f64,
    x2: f64,
    t: f64,
) -> [Complex64; 3] {
    let mut out = ZERO_COEFF;
    for (idx, c) in field.iter() {
        let phase = Complex64::from_polar(1.0, wavevector(*idx, cfg).dot(x1, x2));
        let qt = idx.q as f64 * t;
        let (cos_qt, sin_qt) = (qt.cos(), qt.sin());
        let (first, rest) = if P::FIRST_IS_COS {
            (cos_qt, sin_qt)
        } else {
            (sin_qt, cos_qt)
        };
        out[0] += c[0] * phase * first;
        out[1] += c[1] * phase * rest;
        out[2] += c[2] * phase * rest;
    }
    out
}

/// Real field values at `(x1, x2, t)`; the imaginary part vanishes for fields
/// satisfying the reality condition.
pub fn evaluate<P: Parity>(
    field: &ModeField<P>,
    cfg: &LatticeConfig,
    x1: f64,
    x2: f64,
    t: f64,
) -> [f64; 3] {
    let z = evaluate_complex(field, cfg, x1, x2, t);
    [z[0].re, z[1].re, z[2].re]
}

fn shift(a: &ModeIndex, b: &ModeIndex) -> (i32, i32) {
    (a.n1 + b.n1, a.n2 + b.n2)
}

fn dot3(a: &Coeff, b: &Coeff) -> Complex64 {
    a[1] * b[1] + a[2] * b[2]
}

/// Symmetric bilinear form `B(u, w) = (v_u.v_w / 2, (eta_u v_w + eta_w v_u) / 2)`,
/// so that `B(u, u) = (|v|^2 / 2, eta v)`.
///
/// Products are formed exactly in coefficient space:
/// `sin a sin b = [cos(a-b) - cos(a+b)] / 2` and
/// `cos a sin b = [sin(a+b) + sin(b-a)] / 2`.
pub fn bilinear_b(u: &SpectralField, w: &SpectralField) -> ForcingField {
    let mut out = ForcingField::zero();
    let half = 0.5;
    for (ia, ca) in u.iter() {
        for (ib, cb) in w.iter() {
            let (n1, n2) = shift(ia, ib);
            let (qa, qb) = (ia.q, ib.q);
            let sum_q = ModeIndex::new(n1, n2, qa + qb);
            let diff_q = ModeIndex::new(n1, n2, qa.abs_diff(qb));

            // (v_a . v_b) / 2 with sin qa sin qb.
            let vv = dot3(ca, cb) * half;
            if vv != Complex64::new(0.0, 0.0) {
                let z = Complex64::new(0.0, 0.0);
                out.add_to(diff_q, [vv * half, z, z]);
                out.add_to(sum_q, [-vv * half, z, z]);
            }

            // (eta_a v_b + eta_b v_a) / 2; each product is cos(q_eta) sin(q_v).
            for (eta, v, q_eta, q_v) in [(ca[0], cb, qa, qb), (cb[0], ca, qb, qa)] {
                if eta == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let f = [v[1] * eta * half, v[2] * eta * half];
                let z = Complex64::new(0.0, 0.0);
                out.add_to(sum_q, [z, f[0] * half, f[1] * half]);
                let sign = match q_v.cmp(&q_eta) {
                    std::cmp::Ordering::Greater => 1.0,
                    std::cmp::Ordering::Less => -1.0,
                    std::cmp::Ordering::Equal => 0.0,
                };
                if sign != 0.0 {
                    out.add_to(diff_q, [z, f[0] * half * sign, f[1] * half * sign]);
                }
            }
        }
    }
    out
}

/// `B(U, U) = (|v|^2 / 2, eta v)`.
pub fn quadratic_b(u: &SpectralField) -> ForcingField {
    bilinear_b(u, u)
}

/// Unnormalized coefficient pairing
/// `sum_modes [g conj(xi_eta) + f . conj(xi_v)]`.
///
/// With this pairing a kernel element satisfies `<xi, xi> = 2 |p|^2`.
pub fn inner_product(forcing: &ForcingField, xi: &SpectralField) -> Complex64 {
    xi.iter()
        .map(|(idx, x)| {
            let f = forcing.get(idx);
            f[0] * x[0].conj() + f[1] * x[1].conj() + f[2] * x[2].conj()
        })
        .sum()
}
