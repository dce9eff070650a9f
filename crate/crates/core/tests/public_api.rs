use nalgebra::{Matrix4, Vector4, Vector5};
use proptest::prelude::*;

use pentavec::connection::{p_from_o, transport};
use pentavec::format::{self, Document, Kind};
use pentavec::poincare::{transform_form_p, transform_vector_p};
use pentavec::stress_energy::{assemble_m_p, transform_m};
use pentavec::{eta4, BasisFlag, FiveForm, FiveVector, Grid, PoincareTransform, SigmaField, ThetaField};

fn boost(rapidity: f64, angle: f64) -> Matrix4<f64> {
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let (c, s) = (angle.cos(), angle.sin());
    let b = Matrix4::new(ch, sh, 0.0, 0.0, sh, ch, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
    let r = Matrix4::new(1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, c, -s, 0.0, 0.0, s, c);
    b * r
}

fn transform_strategy() -> impl Strategy<Value = PoincareTransform> {
    (-1.0..1.0f64, -3.0..3.0f64, prop::array::uniform4(-2.0..2.0f64))
        .prop_map(|(y, th, a)| PoincareTransform::new(boost(y, th), Vector4::from(a)).expect("lorentz"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn p_law_preserves_pairing(
        t in transform_strategy(),
        v in prop::array::uniform5(-5.0..5.0f64),
        w in prop::array::uniform5(-5.0..5.0f64),
        kappa in 0.2..2.0f64,
    ) {
        let v = FiveVector::new(Vector5::from(v));
        let w = FiveForm::new(Vector5::from(w));
        let before = w.pair(&v);
        let after = transform_form_p(&w, &t, kappa).pair(&transform_vector_p(&v, &t, kappa));
        prop_assert!((before - after).abs() <= 1e-10 * (1.0 + before.abs()));
    }

    #[test]
    fn transport_round_trip_is_identity(
        v in prop::array::uniform5(-5.0..5.0f64),
        a in prop::array::uniform4(-2.0..2.0f64),
        b in prop::array::uniform4(-2.0..2.0f64),
        kappa in 0.2..2.0f64,
    ) {
        let v = Vector5::from(v);
        let (a, b) = (Vector4::from(a), Vector4::from(b));
        let there = transport(&v, &a, &b, BasisFlag::O, kappa);
        let back = transport(&there, &b, &a, BasisFlag::O, kappa);
        prop_assert!((back - v).amax() <= 1e-10 * (1.0 + v.amax()));
        prop_assert_eq!(transport(&v, &a, &b, BasisFlag::P, kappa), v);
    }

    #[test]
    fn p_basis_inner_product_at_origin_is_eta(kappa in 0.1..3.0f64) {
        let n = p_from_o(&Vector4::zeros(), kappa);
        prop_assert_eq!(n.block(), Matrix4::identity());
        prop_assert_eq!(n.fifth_row(), Vector4::zeros());
    }

    #[test]
    fn vector_documents_round_trip_bit_exact(
        data in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO, 5..40),
        kappa in prop::num::f64::NORMAL,
    ) {
        let n = data.len() / 5;
        let grid = Grid::new([0.0; 4], [1.0; 4], [n, 1, 1, 1]).unwrap();
        let doc = Document::new(Kind::FiveForm, BasisFlag::P, kappa, grid, data[..n * 5].to_vec()).unwrap();
        let back = format::parse(&format::emit(&doc)).unwrap();
        prop_assert_eq!(back.kappa.to_bits(), kappa.to_bits());
        for (x, y) in back.data.iter().zip(&doc.data) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }
}

#[test]
fn m_field_transform_composes() {
    let grid = Grid::cube(-1.0, 1.0, 3, [true, false, true, false]).unwrap();
    let theta = ThetaField::from_fn(grid, |x| Matrix4::from_fn(|a, b| eta4()[(a, b)] + 0.3 * x[a] - 0.2 * x[b]));
    let m = assemble_m_p(&theta, &SigmaField::zero(grid), 0.9).unwrap();
    let t1 = PoincareTransform::new(boost(0.3, 0.7), Vector4::new(0.1, -0.4, 0.2, 0.0)).unwrap();
    let t2 = PoincareTransform::new(boost(-0.5, 1.9), Vector4::new(1.0, 0.0, 0.3, -0.2)).unwrap();
    let stepwise = transform_m(&transform_m(&m, &t2), &t1);
    let once = transform_m(&m, &t1.compose(&t2));
    assert!(stepwise.max_diff(&once) <= 1e-12 * m.max_abs());
}

#[test]
fn documents_reject_kind_mismatch() {
    let doc = Document::from_transform(&PoincareTransform::identity());
    assert!(doc.m_field().is_err());
    assert!(doc.vectors().is_err());
    assert!(doc.transform().is_ok());
}
