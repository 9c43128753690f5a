use std::sync::Arc;

use gauge_color::code::{CheckMatrices, GaugeColorCode};
use gauge_color::gf2::BitRow;
use gauge_color::lattice::{build_closed, ColoredComplex, Family};
use gauge_color::pauli::{parse_check_matrix_text, to_check_matrix_text, GeneratorSet, PauliOperator};
use gauge_color::protocol::{decompose_stabilizer, gauge_fix_plan};
use gauge_color::sim::{encode_state, logical_expectations, run_gauge_fixing, stabilizer_expectations};
use gauge_color::transversal::{gate_plan, GatePlan};
use num_complex::Complex64;
use proptest::prelude::*;
use serde_json::Value;

#[test]
fn lattice_json_round_trip_and_schema() {
    for (family, n) in [(Family::TwoD, 2), (Family::ThreeD, 1)] {
        let k = build_closed(family, n).unwrap();
        let text = k.to_json().unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["D"], family.dim());
        for key in ["id", "color", "pos", "origin"] {
            assert!(v["vertices"][0].get(key).is_some(), "{key}");
        }
        assert!(v["top_simplices"].is_array());
        let back = ColoredComplex::from_json(&text).unwrap();
        assert_eq!(back.num_qubits(), k.num_qubits());
        assert_eq!(back.top_simplices(), k.top_simplices());
    }
}

#[test]
fn malformed_lattice_json_is_rejected() {
    assert!(ColoredComplex::from_json("{").is_err());
    let k = build_closed(Family::TwoD, 1).unwrap();
    let mut v: Value = serde_json::from_str(&k.to_json().unwrap()).unwrap();
    v["top_simplices"][0] = serde_json::json!([0, 1]);
    assert!(ColoredComplex::from_json(&v.to_string()).is_err());
}

#[test]
fn check_matrices_round_trip() {
    let k = Arc::new(build_closed(Family::ThreeD, 1).unwrap());
    let code = GaugeColorCode::new(k, 1, 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    CheckMatrices::from_code(&code).write(dir.path()).unwrap();
    let m = CheckMatrices::read(dir.path()).unwrap();
    let s = GeneratorSet::new(m.n, m.stabilizer).unwrap();
    let g = GeneratorSet::new(m.n, m.gauge).unwrap();
    assert!(s.same_span(code.stabilizer()));
    assert!(g.same_span(code.gauge()));
    assert_eq!(m.logicals.len(), 2);
}

#[test]
fn gate_plan_json_schema() {
    let k = Arc::new(build_closed(Family::TwoD, 1).unwrap());
    let code = GaugeColorCode::new(k, 1, 1).unwrap();
    let plan = gate_plan(&code, 2).unwrap();
    let v: Value = serde_json::from_str(&plan.to_json()).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["T", "exponents", "k", "n"]);
    let back: GatePlan = serde_json::from_value(v).unwrap();
    assert_eq!(back, plan);
}

#[test]
fn gauge_fix_plan_json_schema() {
    let k = Arc::new(build_closed(Family::ThreeD, 1).unwrap());
    let c11 = GaugeColorCode::new(k.clone(), 1, 1).unwrap();
    let c12 = GaugeColorCode::new(k, 1, 2).unwrap();
    let plan = gauge_fix_plan(&c11, &c12).unwrap();
    let v: Value = serde_json::from_str(&plan.to_json()).unwrap();
    let m = v["pairing_matrix"].as_array().unwrap();
    assert_eq!(m.len(), plan.len());
    // The pairing matrix is invertible over GF(2); its recorded entries must
    // match the commutation of the listed operators.
    for (j, row) in m.iter().enumerate() {
        for (i, bit) in row.as_array().unwrap().iter().enumerate() {
            let anti = !plan.measurements[j].commutes(&plan.corrections[i]).unwrap();
            assert_eq!(bit.as_u64().unwrap() == 1, anti);
        }
    }
}

#[test]
fn stabilizers_decompose_into_colored_cells() {
    // Each 3-cell Z stabilizer of the (1,1) code in 3D is the product of its
    // κ-cells for any pair κ of its colors.
    let k = build_closed(Family::ThreeD, 2).unwrap();
    let n = k.num_qubits();
    for delta in k.delta_set(0).unwrap() {
        let whole = k.support(&delta).unwrap();
        let c = k.color(delta.vertices()[0]);
        let others: Vec<u8> = (0..4).filter(|&x| x != c).collect();
        for i in 0..3 {
            for j in i + 1..3 {
                let kappa = [others[i], others[j]];
                let mut acc = BitRow::zeros(n);
                for cell in decompose_stabilizer(&k, &delta, &kappa).unwrap() {
                    acc.xor_assign(&k.support(&cell).unwrap());
                }
                assert_eq!(acc, whole, "vertex {delta:?}, κ = {kappa:?}");
            }
        }
    }
}

fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
    (prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n)).prop_map(|(x, z)| {
        PauliOperator::hermitian(BitRow::from_bools(&x), BitRow::from_bools(&z))
    })
}

proptest! {
    #[test]
    fn check_matrix_text_round_trips(rows in prop::collection::vec(arb_pauli(9), 0..6)) {
        let text = to_check_matrix_text(9, &rows);
        let (n, back) = parse_check_matrix_text(&text).unwrap();
        prop_assert_eq!(n, 9);
        prop_assert_eq!(back.len(), rows.len());
        for (a, b) in rows.iter().zip(&back) {
            prop_assert_eq!(&a.x, &b.x);
            prop_assert_eq!(&a.z, &b.z);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gauge_fixing_preserves_any_logical_state(
        theta in 0.0..std::f64::consts::PI,
        phi in 0.0..2.0 * std::f64::consts::PI,
        seed in any::<u64>(),
    ) {
        let k = Arc::new(build_closed(Family::ThreeD, 1).unwrap());
        let c11 = GaugeColorCode::new(k.clone(), 1, 1).unwrap();
        let c12 = GaugeColorCode::new(k, 1, 2).unwrap();
        let plan = gauge_fix_plan(&c11, &c12).unwrap();
        let psi = encode_state(
            &c11,
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ).unwrap();
        let before = logical_expectations(&psi, &c11).unwrap();
        let (out, _) = run_gauge_fixing(&psi, &c11, &plan, seed).unwrap();
        for e in stabilizer_expectations(&out, c12.stabilizer()).unwrap() {
            prop_assert!((e - 1.0).abs() < 1e-10);
        }
        let after = logical_expectations(&out, &c12).unwrap();
        for (a, b) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
