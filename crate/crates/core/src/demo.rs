//! Encode in (1,1), gauge fix to (1,2), apply transversal R_3.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::code::{CodeError, GaugeColorCode};
use crate::lattice::{build_closed, Family, LatticeError};
use crate::protocol::{gauge_fix_plan, ProtocolError};
use crate::sim::{
    clifford_transversal_check, encode_logical, encode_state, logical_expectations,
    run_gauge_fixing_with, stabilizer_expectations, MeasurementRecord, SimError,
};
use crate::transversal::{gate_plan, TransversalError};

pub const TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum DemoError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Transversal(#[from] TransversalError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Debug)]
pub struct DemoOptions {
    pub seed: u64,
    pub skip_correction: bool,
    /// Bloch angles of the encoded input.
    pub theta: f64,
    pub phi: f64,
}

impl Default for DemoOptions {
    fn default() -> Self {
        DemoOptions {
            seed: crate::DEFAULT_SEED,
            skip_correction: false,
            theta: 1.1,
            phi: 0.7,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub seed: u64,
    pub qubits: usize,
    pub hadamard_transversal_11: bool,
    pub cnot_transversal_11: bool,
    pub fix_measurements: usize,
    pub record: MeasurementRecord,
    pub stabilizer_expectations: Vec<f64>,
    pub all_stabilizers_plus_one: bool,
    /// (⟨X⟩, ⟨Y⟩, ⟨Z⟩) before and after fixing.
    pub logical_before: [f64; 3],
    pub logical_after: [f64; 3],
    pub logical_drift: f64,
    pub gate_level: usize,
    pub k: u64,
    /// Relative phase the plan puts on |1̄⟩, in units of π.
    pub logical_phase_over_pi: f64,
    pub fidelity_after_fixing: f64,
    pub fidelity_after_gate: f64,
    pub pass: bool,
}

pub fn run_demo(opts: &DemoOptions) -> Result<DemoReport, DemoError> {
    let lattice = Arc::new(build_closed(Family::ThreeD, 1)?);
    let c11 = GaugeColorCode::new(lattice.clone(), 1, 1)?;
    let c12 = GaugeColorCode::new(lattice, 1, 2)?;
    let alpha = Complex64::new((opts.theta / 2.0).cos(), 0.0);
    let beta = Complex64::from_polar((opts.theta / 2.0).sin(), opts.phi);

    let psi = encode_state(&c11, alpha, beta)?;
    let clifford = clifford_transversal_check(&c11);
    let logical_before = logical_expectations(&psi, &c11)?;

    let fix = gauge_fix_plan(&c11, &c12)?;
    let (fixed, record) = run_gauge_fixing_with(&psi, &c11, &fix, opts.seed, opts.skip_correction)?;
    let stabs = stabilizer_expectations(&fixed, c12.stabilizer())?;
    let all_plus = stabs.iter().all(|e| (e - 1.0).abs() < TOLERANCE);
    let logical_after = logical_expectations(&fixed, &c12)?;
    let drift = logical_before
        .iter()
        .zip(&logical_after)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let fidelity_after_fixing = encode_state(&c12, alpha, beta)?.fidelity(&fixed);

    let plan = gate_plan(&c12, 3)?;
    let mut zero = encode_logical(&c12, false)?;
    let mut one = encode_logical(&c12, true)?;
    let (z0, o0) = (zero.clone(), one.clone());
    zero.apply_gate_plan(&plan)?;
    one.apply_gate_plan(&plan)?;
    let rel = (z0.inner(&zero).conj() * o0.inner(&one)).arg();

    let mut out = fixed.clone();
    out.apply_gate_plan(&plan)?;
    let target = encode_state(&c12, alpha, beta * Complex64::from_polar(1.0, PI / 4.0))?;
    let fidelity_after_gate = target.fidelity(&out);

    let pass = clifford.hadamard
        && all_plus
        && drift < TOLERANCE
        && fidelity_after_gate >= 1.0 - TOLERANCE
        && (rel - PI / 4.0).abs() < TOLERANCE;
    Ok(DemoReport {
        seed: opts.seed,
        qubits: c11.num_qubits(),
        hadamard_transversal_11: clifford.hadamard,
        cnot_transversal_11: clifford.cnot,
        fix_measurements: fix.len(),
        record,
        stabilizer_expectations: stabs,
        all_stabilizers_plus_one: all_plus,
        logical_before,
        logical_after,
        logical_drift: drift,
        gate_level: plan.n,
        k: plan.k,
        logical_phase_over_pi: rel / PI,
        fidelity_after_fixing,
        fidelity_after_gate,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let r = run_demo(&DemoOptions::default()).unwrap();
        assert!(r.pass, "{r:#?}");
        assert_eq!(r.k, 7);
        assert!((r.logical_phase_over_pi - 0.25).abs() < 1e-10);
    }

    #[test]
    fn skipping_correction_leaves_minus_ones() {
        let mut seen_failure = false;
        for seed in 0..8 {
            let r = run_demo(&DemoOptions { seed, skip_correction: true, ..Default::default() }).unwrap();
            let any_minus = r.record.outcomes.iter().any(|&(_, o)| o == -1);
            assert_eq!(any_minus, !r.all_stabilizers_plus_one, "seed {seed}");
            seen_failure |= any_minus;
        }
        assert!(seen_failure);
    }
}
