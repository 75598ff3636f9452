mod common;

use common::{fig1, random_branch_points, random_field, rng};
use hexwave::lattice::{operator_bound, wavevector};
use hexwave::linop::{
    apply_g, apply_l, check_compatibility, compatibility_residue, general_solution, kernel_basis,
    kernel_element, solve_t, KernelCoords,
};
use hexwave::spectral::field_norm;
use hexwave::{BranchPoint, Error, ForcingField, ModeIndex, DEFAULT_EPS_RES};
use num_complex::Complex64;
use proptest::prelude::*;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Random real forcing made compatible by setting `g = -i p.f / |p|` at the
/// resonant modes.
fn compatible_forcing(seed: u64, bp: &BranchPoint, pairs: usize) -> ForcingField {
    let mut f: ForcingField = random_field(&mut rng(seed), pairs, 8, 4);
    for m in [bp.xi1_index(), bp.xi2_index()] {
        f.add_to(m, [Complex64::new(0.1, 0.2); 3]);
        f.add_to(m.reflected(), [Complex64::new(0.1, -0.2); 3]);
    }
    f.map(|idx, c| {
        if bp.resonant.contains(idx) {
            let p = wavevector(*idx, &bp.cfg);
            let g = -I * (c[1] * p.p1 + c[2] * p.p2) / p.norm();
            [g, c[1], c[2]]
        } else {
            *c
        }
    })
}

fn right_inverse_defect(bp: &BranchPoint, f: &ForcingField) -> f64 {
    let u = solve_t(f, bp.beta0, &bp.cfg, &bp.resonant);
    let gf = apply_g(f, &bp.cfg);
    field_norm(&(&apply_l(&u, bp.beta0, &bp.cfg) - &gf)) / (1.0 + field_norm(&gf))
}

#[test]
fn t_is_a_right_inverse_on_compatible_forcings() {
    let bp = fig1();
    for seed in 0..100 {
        let f = compatible_forcing(seed, &bp, 100);
        assert!(check_compatibility(&f, &bp.resonant, &bp.cfg).is_empty());
        let d = right_inverse_defect(&bp, &f);
        assert!(d < 1e-12, "seed {seed}: {d:e}");
    }
    for (k, bp) in random_branch_points(5, 10).iter().enumerate() {
        let f = compatible_forcing(1000 + k as u64, bp, 60);
        assert!(right_inverse_defect(bp, &f) < 1e-11);
    }
}

#[test]
fn t_is_bounded_by_the_operator_bound() {
    for bp in std::iter::once(fig1()).chain(random_branch_points(9, 5)) {
        let m = operator_bound(bp.beta0, &bp.cfg, DEFAULT_EPS_RES).unwrap();
        for seed in 0..20 {
            let f = compatible_forcing(seed, &bp, 80);
            let u = solve_t(&f, bp.beta0, &bp.cfg, &bp.resonant);
            assert!(field_norm(&u) <= m * field_norm(&f) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn incompatible_forcing_is_rejected_with_its_residues() {
    let bp = fig1();
    let idx = bp.xi1_index();
    let f = ForcingField::from_modes([(idx, [Complex64::new(1.0, 0.0); 3])]);
    let basis = kernel_basis(bp.beta0, &bp.cfg, DEFAULT_EPS_RES).unwrap();
    match general_solution(&f, &KernelCoords::default(), &basis) {
        Err(Error::Incompatible(v)) => {
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].index, idx);
            assert!((v[0].residue - compatibility_residue(&f, idx, &bp.cfg)).norm() == 0.0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn compatibility_residue_examples() {
    let bp = fig1();
    let idx = bp.xi1_index();
    let p = wavevector(idx, &bp.cfg);
    // f along i p cancels g = |p|; f along -i p doubles it.
    let aligned = ForcingField::from_modes([(idx, [Complex64::new(p.norm(), 0.0), I * p.p1, I * p.p2])]);
    let opposed = ForcingField::from_modes([(idx, [Complex64::new(p.norm(), 0.0), -I * p.p1, -I * p.p2])]);
    assert!(compatibility_residue(&aligned, idx, &bp.cfg).norm() < 1e-15);
    assert!((compatibility_residue(&opposed, idx, &bp.cfg) - 2.0 * p.norm_sq()).norm() < 1e-14);
}

#[test]
fn general_solution_adds_kernel_part() {
    let bp = fig1();
    let basis = kernel_basis(bp.beta0, &bp.cfg, DEFAULT_EPS_RES).unwrap();
    let f = compatible_forcing(77, &bp, 40);
    let coords = KernelCoords {
        c: 0.3,
        amplitudes: vec![(bp.xi1_index(), Complex64::new(0.2, -0.5)), (bp.xi2_index(), Complex64::new(-1.0, 0.1))],
    };
    let u = general_solution(&f, &coords, &basis).unwrap();
    let r = &apply_l(&u, bp.beta0, &bp.cfg) - &apply_g(&f, &bp.cfg);
    assert!(field_norm(&r) < 1e-12 * (1.0 + field_norm(&f)));
    assert!(u.reality_defect() < 1e-14);
    let bad = KernelCoords {
        c: 0.0,
        amplitudes: vec![(ModeIndex::new(1, 1, 1), Complex64::new(1.0, 0.0))],
    };
    assert!(general_solution(&f, &bad, &basis).is_err());
}

#[test]
fn kernel_elements_are_annihilated() {
    for bp in std::iter::once(fig1()).chain(random_branch_points(13, 20)) {
        for m in bp.resonant.iter() {
            let xi = kernel_element(*m, &bp.cfg);
            let r = field_norm(&apply_l(&xi, bp.beta0, &bp.cfg));
            assert!(r < 1e-12 * (1.0 + field_norm(&xi)), "{m}: {r:e}");
        }
    }
}

proptest! {
    #[test]
    fn t_commutes_with_conjugate_reflection(seed in 0u64..100_000) {
        let bp = fig1();
        let f: ForcingField = hexwave::spectral::ModeField::from_modes(
            random_field::<hexwave::spectral::Forcing>(&mut rng(seed), 10, 5, 3)
                .iter()
                .enumerate()
                .map(|(k, (i, c))| (*i, [c[0] * (1.0 + k as f64), c[1], c[2] * Complex64::new(0.3, 1.0)])),
        );
        let a = solve_t(&f.conjugate_reflection(), bp.beta0, &bp.cfg, &bp.resonant);
        let b = solve_t(&f, bp.beta0, &bp.cfg, &bp.resonant).conjugate_reflection();
        prop_assert!((&a - &b).max_abs() < 1e-13 * (1.0 + a.max_abs()));
    }

    #[test]
    fn t_is_linear(s1 in 0u64..100_000, s2 in 0u64..100_000, k in -3.0f64..3.0) {
        let bp = fig1();
        let f: ForcingField = random_field(&mut rng(s1), 8, 5, 3);
        let g: ForcingField = random_field(&mut rng(s2), 8, 5, 3);
        let t = |x: &ForcingField| solve_t(x, bp.beta0, &bp.cfg, &bp.resonant);
        let lhs = t(&(&f + &(&g * k)));
        let rhs = &t(&f) + &(&t(&g) * k);
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12 * (1.0 + lhs.max_abs()));
    }
}
