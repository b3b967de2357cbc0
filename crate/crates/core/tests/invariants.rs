use cmc_darboux_core::family::{plaquette_flatness, ConnectionForm};
use cmc_darboux_core::holonomy::holonomy_y;
use cmc_darboux_core::ode::Tolerance;
use cmc_darboux_core::patch::Grid;
use cmc_darboux_core::surfaces::{delaunay_patch, Cylinder, DelaunayKind};
use cmc_darboux_core::{ComplexPair, Quaternion, SpectralParam, C64};
use proptest::prelude::*;

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(|[w, x, y, z]| Quaternion::new(w, x, y, z))
}

/// `μ` in an annulus, away from `μ = 1`.
fn mu() -> impl Strategy<Value = C64> {
    (0.05..20.0f64, -3.14..3.14f64)
        .prop_map(|(r, t)| C64::from_polar(r, t))
        .prop_filter("away from 1", |m| (m - 1.0).norm() > 0.05)
}

proptest! {
    #[test]
    fn norm_is_multiplicative(p in quat(), q in quat()) {
        let lhs = (p * q).norm();
        prop_assert!((lhs - p.norm() * q.norm()).abs() <= 1e-12 * (1.0 + lhs));
    }

    #[test]
    fn pair_round_trip(q in quat()) {
        let back = Quaternion::from_pair(q.to_pair());
        prop_assert!((back - q).norm() <= 1e-15 * (1.0 + q.norm()));
    }

    #[test]
    fn left_multiplication_is_a_homomorphism(p in quat(), q in quat(), v in quat()) {
        let direct = (p * v).to_pair();
        let via = p.left_mul_matrix() * v.to_pair();
        prop_assert!((direct - via).norm() <= 1e-12 * (1.0 + direct.norm()));
        let m = (p * q).left_mul_matrix() - p.left_mul_matrix() * q.left_mul_matrix();
        prop_assert!(m.norm() <= 1e-12 * (1.0 + (p * q).norm()));
    }

    #[test]
    fn right_j_matches_quaternion_product(q in quat()) {
        let lhs = (q * Quaternion::J).to_pair();
        prop_assert!((lhs - q.to_pair().right_j()).norm() <= 1e-14 * (1.0 + q.norm()));
    }

    #[test]
    fn spectral_scalars_satisfy_pythagoras(m in mu()) {
        let p = SpectralParam::new(m).unwrap();
        prop_assert!(p.pythagoras_defect() <= 1e-12 * (1.0 + p.a.norm_sqr()));
        prop_assert!((p.c * p.c - (p.a - 1.0)).norm() <= 1e-12 * (1.0 + p.a.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn holonomy_is_unimodular(m in mu(), x0 in -2.0..2.0f64) {
        let form = ConnectionForm::new(Cylinder, SpectralParam::new(m).unwrap());
        let h = holonomy_y(&form, x0, Tolerance::relative(1e-12)).unwrap();
        let scale = h.matrix.norm().powi(2).max(1.0);
        prop_assert!((h.det() - 1.0).norm() <= 1e-9 * scale, "{:?}", h.det());
        prop_assert!((h.h_plus * h.h_minus - 1.0).norm() <= 1e-9);
    }

    #[test]
    fn plaquette_defect_is_fourth_order(m in mu()) {
        let form = ConnectionForm::new(Cylinder, SpectralParam::new(m).unwrap());
        let n = 4.0 + form.param.b.norm().sqrt().ceil();
        let coarse = Grid { nx: 5, ny: 5, x0: 0.0, x1: 0.4 / n, y0: 0.3, y_len: 0.4 / n, y_periodic: false };
        let fine = Grid { nx: 5, ny: 5, x0: 0.0, x1: 0.2 / n, y0: 0.3, y_len: 0.2 / n, y_periodic: false };
        let (a, b) = (plaquette_flatness(&form, &coarse), plaquette_flatness(&form, &fine));
        prop_assume!(b > 1e-14);
        prop_assert!(a / b > 12.0, "{a:e} {b:e} ratio {}", a / b);
    }

    #[test]
    fn delaunay_patches_validate(neck in 0.05..0.5f64, nodoid in any::<bool>()) {
        let kind = if nodoid { DelaunayKind::Nodoid } else { DelaunayKind::Unduloid };
        let p = delaunay_patch(kind, neck, 16, 32, 3.0).unwrap();
        let r = p.validate();
        prop_assert!(r.passes(1e-6), "{r:?}");
    }
}

#[test]
fn random_section_pairs_are_stable() {
    let v = ComplexPair::new(C64::new(0.3, -1.0), C64::new(2.0, 0.5));
    assert!((v.right_j().right_j() + v).norm() < 1e-15);
}
