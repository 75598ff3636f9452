#![allow(dead_code)]

use std::f64::consts::SQRT_2;

use hexwave::lattice::LatticeConfig;
use hexwave::spectral::{Coeff, ModeField, Parity};
use hexwave::{BranchPoint, ModeIndex};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fig1_cfg() -> LatticeConfig {
    LatticeConfig::new(1.0, 1.0 / SQRT_2, 1.0 / SQRT_2, 1.0, 1.0).unwrap()
}

pub fn fig1() -> BranchPoint {
    BranchPoint::validate(2.0, 1, &fig1_cfg()).unwrap()
}

/// A lattice whose two unit vectors have lengths that are the two roots (or
/// a double use of one root) of the resonance quadratic at `q = 1`.
pub fn random_branch_candidate(rng: &mut impl Rng) -> (LatticeConfig, f64) {
    let omega: f64 = rng.gen_range(0.3..2.0);
    let r1: f64 = rng.gen_range(0.3..1.5) / omega.sqrt();
    let (r2, beta0) = if rng.gen_bool(0.5) {
        (r1, (1.0 + omega * r1 * r1) / r1)
    } else {
        let r2 = 1.0 / (omega * r1);
        (r2, omega * (r1 + r2))
    };
    let t1: f64 = rng.gen_range(0.2..3.0);
    let t2: f64 = rng.gen_range(0.2..3.0);
    let cfg = LatticeConfig::new(
        omega,
        r1 / (1.0 + t1 * t1).sqrt(),
        r2 / (1.0 + t2 * t2).sqrt(),
        t1,
        t2,
    )
    .unwrap();
    (cfg, beta0)
}

/// `n` seeded branch points satisfying the four-mode hypothesis.
pub fn random_branch_points(seed: u64, n: usize) -> Vec<BranchPoint> {
    let mut rng = rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let (cfg, beta0) = random_branch_candidate(&mut rng);
        if let Ok(bp) = BranchPoint::validate(beta0, 1, &cfg) {
            out.push(bp);
        }
    }
    out
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random real field: `pairs` conjugate pairs with `|n| <= n_max`,
/// `q <= q_max`; sine components vanish at `q = 0`.
pub fn random_field<P: Parity>(rng: &mut impl Rng, pairs: usize, n_max: i32, q_max: u32) -> ModeField<P> {
    let mut f = ModeField::<P>::zero();
    for _ in 0..pairs {
        let idx = ModeIndex::new(
            rng.gen_range(-n_max..=n_max),
            rng.gen_range(-n_max..=n_max),
            rng.gen_range(0..=q_max),
        );
        let mut c: Coeff = [random_complex(rng), random_complex(rng), random_complex(rng)];
        if idx.reflected() == idx {
            c = [
                Complex64::new(c[0].re, 0.0),
                Complex64::new(c[1].re, 0.0),
                Complex64::new(c[2].re, 0.0),
            ];
            f.add_to(idx, c);
            continue;
        }
        f.add_to(idx, c);
        f.add_to(idx.reflected(), [c[0].conj(), c[1].conj(), c[2].conj()]);
    }
    f
}
