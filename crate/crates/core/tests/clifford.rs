use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minimal_tori::clifford::{
    alpha_closed_form, alpha_equation_residual, closed_embedding, closed_form_chart,
    isometry_functions, isometry_quadratic_residual, reparametrize_to_square, verify_isometry,
    verify_minimal_closed_form, CliffordParams,
};
use minimal_tori::surface::{embed_point, fundamental_forms};

fn random_e_phi(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.gen_range(-10.0..10.0), rng.gen_range(-PI..PI)))
        .collect()
}

#[test]
fn alpha_satisfies_first_order_identity() {
    for (e, phi) in random_e_phi(1, 1000) {
        let p = CliffordParams::unit(e).unwrap();
        let a = alpha_closed_form(phi, &p);
        let a2 = 1.0 + e * e;
        let rhs = a.sin_alpha.powi(2) * (a2 * a.sin_alpha.powi(2) - 1.0);
        assert!(
            (a.alpha_prime.powi(2) - rhs).abs() < 1e-11,
            "e = {e}, φ = {phi}"
        );
    }
}

#[test]
fn alpha_satisfies_second_order_equation() {
    for (e, phi) in random_e_phi(2, 1000) {
        let a = alpha_closed_form(phi, &CliffordParams::unit(e).unwrap());
        assert!(
            alpha_equation_residual(&a).abs() <= 1e-11,
            "e = {e}, φ = {phi}"
        );
    }
}

#[test]
fn alpha_derivatives_match_finite_differences() {
    let h = 1e-5;
    for (e, phi) in random_e_phi(3, 200) {
        let e = e / 5.0;
        let p = CliffordParams::unit(e).unwrap();
        let at = |x: f64| alpha_closed_form(x, &p);
        let d_alpha = (at(phi + h).alpha - at(phi - h).alpha) / (2.0 * h);
        let dd_alpha = (at(phi + h).alpha_prime - at(phi - h).alpha_prime) / (2.0 * h);
        assert!((d_alpha - at(phi).alpha_prime).abs() < 1e-7, "e = {e}");
        assert!(
            (dd_alpha - at(phi).alpha_double_prime).abs() < 1e-7,
            "e = {e}"
        );
    }
}

#[test]
fn alpha_stays_in_the_open_interval() {
    for (e, phi) in random_e_phi(4, 1000) {
        let a = alpha_closed_form(phi, &CliffordParams::unit(e).unwrap());
        assert!(a.alpha > 0.0 && a.alpha < PI);
        assert!((a.sin_alpha.powi(2) + a.cos_alpha.powi(2) - 1.0).abs() < 1e-14);
    }
}

#[test]
fn closed_embedding_agrees_with_generic_chart() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for e in [0.0, 0.3, 1.0, 7.0, 100.0] {
        let p = CliffordParams::new(e, 0.4, 1).unwrap();
        let chart = closed_form_chart(&p);
        for _ in 0..200 {
            let (p1, p2) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let a = closed_embedding(p1, p2, &p).x;
            let b = embed_point(p1, p2, &chart).x;
            for i in 0..4 {
                assert!((a[i] - b[i]).abs() < 1e-12, "e = {e}");
            }
        }
    }
}

#[test]
fn negated_deformation_is_a_phase_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for e in [0.5, 2.0, 30.0] {
        let minus = CliffordParams::new(-e, 0.0, 1).unwrap();
        let shifted = CliffordParams::new(e, PI, 1).unwrap();
        for _ in 0..200 {
            let (p1, p2) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let a = closed_embedding(p1, p2, &minus).x;
            let b = closed_embedding(p1, p2, &shifted).x;
            for i in 0..4 {
                assert!((a[i] - b[i]).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn closed_form_is_minimal() {
    let one = verify_minimal_closed_form(&CliffordParams::unit(1.0).unwrap(), 10_000).unwrap();
    assert!(one <= 1e-10, "{one:e}");
    let hundred =
        verify_minimal_closed_form(&CliffordParams::unit(100.0).unwrap(), 10_000).unwrap();
    assert!(hundred <= 1e-8, "{hundred:e}");
}

#[test]
fn isometry_doubles_the_metric() {
    let one = verify_isometry(&CliffordParams::unit(1.0).unwrap(), 1000).unwrap();
    assert!(one <= 1e-10, "{one:e}");
    let five = verify_isometry(&CliffordParams::unit(5.0).unwrap(), 1000).unwrap();
    assert!(five <= 1e-9, "{five:e}");
}

#[test]
fn isometry_functions_structure() {
    for (e, phi) in random_e_phi(7, 1000) {
        let p = CliffordParams::unit(e).unwrap();
        let iso = isometry_functions(phi, &p);
        let a = alpha_closed_form(phi, &p);
        assert!((iso.u - iso.v - a.cos_alpha).abs() < 1e-14);
        assert!((iso.u + iso.v - 2.0 * iso.w).abs() < 1e-14);
        assert!(isometry_quadratic_residual(phi, &p).abs() <= 1e-12 * (1.0 + e * e));
    }
    let iso = isometry_functions(0.7, &CliffordParams::unit(0.0).unwrap());
    assert_eq!(iso.j, [[1.0, 0.0], [0.0, 1.0]]);
}

#[test]
fn isometry_w_vanishes_with_deformation() {
    for e in [1e-2, 1e-4, 1e-6] {
        let w = isometry_functions(1.1, &CliffordParams::unit(e).unwrap()).w;
        assert!(w.abs() < e * e, "e = {e}: {w:e}");
    }
}

/// The alternative displayed root `−1 + √(1 + ¾x² + 9⁄4 x)/(1 + x)`, `x = e²sin²φ`.
fn displayed_w(e: f64, phi: f64) -> f64 {
    let x = (e * phi.sin()).powi(2);
    -1.0 + (1.0 + 0.75 * x * x + 2.25 * x).sqrt() / (1.0 + x)
}

#[test]
fn displayed_w_solves_its_own_quadratic() {
    for (e, phi) in random_e_phi(8, 1000) {
        let p = CliffordParams::unit(e).unwrap();
        let cos_alpha = alpha_closed_form(phi, &p).cos_alpha;
        let x = (e * phi.sin()).powi(2);
        let rhs = 0.5 * x / (1.0 + x).powi(2);
        // root of w² + 2w + ¼cos²α − rhs = 0 continuous at e = 0
        let root = -1.0 + (1.0 - 0.25 * cos_alpha * cos_alpha + rhs).sqrt();
        let w = displayed_w(e, phi);
        assert!((w - root).abs() < 1e-10);
        assert!((w * w + 2.0 * w + 0.25 * cos_alpha * cos_alpha - rhs).abs() <= 1e-12);
    }
}

#[test]
fn implemented_w_is_the_root_of_the_isometry_quadratic() {
    for (e, phi) in random_e_phi(9, 1000) {
        let p = CliffordParams::unit(e).unwrap();
        let a = alpha_closed_form(phi, &p);
        // 2w² + 2w + ½cos²α − ½α′² = 0, root with w(0) = 0
        let c = 0.5 * a.cos_alpha.powi(2) - 0.5 * a.alpha_prime.powi(2);
        let root = 0.5 * (-1.0 + (1.0 - 2.0 * c).sqrt());
        assert!((isometry_functions(phi, &p).w - root).abs() < 1e-10);
    }
}

#[test]
fn square_reparametrisation_pulls_back_half_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for e in [0.5, 1.0, 3.0] {
        let p = CliffordParams::unit(e).unwrap();
        let chart = closed_form_chart(&p);
        for _ in 0..20 {
            let (p1, p2) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
            let map = |a: f64, b: f64| reparametrize_to_square(a, b, &p).unwrap();
            let jac = |h: f64| {
                let (a1, a2) = map(p1 + h, p2);
                let (b1, b2) = map(p1 - h, p2);
                let (c1, c2) = map(p1, p2 + h);
                let (d1, d2) = map(p1, p2 - h);
                [
                    [(a1 - b1) / (2.0 * h), (c1 - d1) / (2.0 * h)],
                    [(a2 - b2) / (2.0 * h), (c2 - d2) / (2.0 * h)],
                ]
            };
            let (coarse, fine) = (jac(2e-3), jac(1e-3));
            let mut j = [[0.0; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    j[a][b] = (4.0 * fine[a][b] - coarse[a][b]) / 3.0;
                }
            }
            // g = ½ JᵀJ: the square torus of radius 1/√2 has metric ½ I in φ̃
            let g = fundamental_forms(p1, p2, &chart).unwrap().g;
            for a in 0..2 {
                for b in 0..2 {
                    let jj = j[0][a] * j[0][b] + j[1][a] * j[1][b];
                    assert!((0.5 * jj - g[a][b]).abs() < 1e-8, "e = {e}");
                }
            }
        }
    }
}

#[test]
fn reparametrisation_closes_up() {
    // ∫u and ∫v agree over a period, so (2π, 0) maps to a lattice translate
    for e in [0.5, 2.0, 10.0] {
        let p = CliffordParams::unit(e).unwrap();
        let (a1, a2) = reparametrize_to_square(TAU, 0.0, &p).unwrap();
        let (du, dv) = (a1 - TAU, a2);
        assert!((du - dv).abs() < 1e-10, "e = {e}");
    }
}

proptest! {
    #[test]
    fn closed_embedding_has_unit_norm(e in -50.0f64..50.0, p1 in 0.0..TAU, p2 in 0.0..TAU, phi0 in -PI..PI) {
        let p = CliffordParams::new(e, phi0, 1).unwrap();
        prop_assert!((closed_embedding(p1, p2, &p).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn alpha_identity_holds(e in -20.0f64..20.0, phi in -PI..PI) {
        let a = alpha_closed_form(phi, &CliffordParams::unit(e).unwrap());
        let rhs = a.sin_alpha.powi(2) * ((1.0 + e * e) * a.sin_alpha.powi(2) - 1.0);
        prop_assert!((a.alpha_prime.powi(2) - rhs).abs() < 1e-11);
    }
}
