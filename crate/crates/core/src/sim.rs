//! Dense statevector simulation and symbolic checks of Clifford gates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::GaugeColorCode;
use crate::gf2::{BitMatrix, BitRow};
use crate::pauli::{GeneratorSet, PauliOperator};
use crate::protocol::GaugeFixPlan;
use crate::report::{Check, Report};
use crate::transversal::GatePlan;

pub const MAX_QUBITS: usize = 20;
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("{0} qubits exceed the simulator limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("size mismatch: state has {0} qubits, operator has {1}")]
    SizeMismatch(usize, usize),
    #[error("operator {0} is not Hermitian")]
    NotHermitian(String),
    #[error("state is not in the code space: {0}")]
    Precondition(String),
    #[error("norm drifted to {0}")]
    Norm(f64),
}

#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0…0⟩.
    pub fn zero(n: usize) -> Result<Self, SimError> {
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Bit q of the index is qubit q.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_norm(&self) -> Result<(), SimError> {
        let nrm = self.norm();
        if (nrm - 1.0).abs() > NORM_TOL {
            return Err(SimError::Norm(nrm));
        }
        Ok(())
    }

    fn renormalize(&mut self) {
        let nrm = self.norm();
        for a in self.amps.iter_mut() {
            *a /= nrm;
        }
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn scaled_sum(&self, a: Complex64, other: &StateVector, b: Complex64) -> StateVector {
        StateVector {
            n: self.n,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    fn masks(&self, p: &PauliOperator) -> Result<(usize, usize), SimError> {
        if p.num_qubits() != self.n {
            return Err(SimError::SizeMismatch(self.n, p.num_qubits()));
        }
        let to_mask = |r: &BitRow| r.ones().fold(0usize, |m, q| m | 1 << q);
        Ok((to_mask(&p.x), to_mask(&p.z)))
    }

    /// `P|ψ⟩` as a new state.
    pub fn pauli_image(&self, p: &PauliOperator) -> Result<StateVector, SimError> {
        let (x, z) = self.masks(p)?;
        let ph = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][p.phase as usize % 4];
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            let sign = if (z & b).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[b ^ x] = ph * sign * a;
        }
        Ok(StateVector { n: self.n, amps: out })
    }

    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<(), SimError> {
        *self = self.pauli_image(p)?;
        Ok(())
    }

    /// ⟨ψ|P|ψ⟩ for Hermitian P.
    pub fn expectation(&self, p: &PauliOperator) -> Result<f64, SimError> {
        if !p.is_hermitian() {
            return Err(SimError::NotHermitian(p.to_string()));
        }
        Ok(self.inner(&self.pauli_image(p)?).re)
    }

    /// Multiplies each basis amplitude by exp(2πi Σ_q e_q b_q / 2^n).
    pub fn apply_gate_plan(&mut self, plan: &GatePlan) -> Result<(), SimError> {
        if plan.exponents.len() != self.n {
            return Err(SimError::SizeMismatch(self.n, plan.exponents.len()));
        }
        let modulus = 1i64 << plan.n;
        let phases: Vec<Complex64> = (0..modulus)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / modulus as f64))
            .collect();
        for (b, a) in self.amps.iter_mut().enumerate() {
            let mut s = 0i64;
            let mut bits = b;
            while bits != 0 {
                let q = bits.trailing_zeros() as usize;
                s += plan.exponents[q];
                bits &= bits - 1;
            }
            *a *= phases[s.rem_euclid(modulus) as usize];
        }
        self.check_norm()
    }

    /// Projective measurement of a Hermitian Pauli. The RNG is consulted only
    /// when both outcomes have non-negligible probability.
    pub fn measure_pauli<R: Rng>(&mut self, p: &PauliOperator, rng: &mut R) -> Result<(i8, f64), SimError> {
        if !p.is_hermitian() {
            return Err(SimError::NotHermitian(p.to_string()));
        }
        let image = self.pauli_image(p)?;
        let ev = self.inner(&image).re;
        let p_plus = ((1.0 + ev) / 2.0).clamp(0.0, 1.0);
        let outcome: i8 = if p_plus >= 1.0 - NORM_TOL {
            1
        } else if p_plus <= NORM_TOL {
            -1
        } else if rng.gen::<f64>() < p_plus {
            1
        } else {
            -1
        };
        let s = f64::from(outcome);
        *self = self.scaled_sum(Complex64::new(0.5, 0.0), &image, Complex64::new(0.5 * s, 0.0));
        self.renormalize();
        self.check_norm()?;
        Ok((outcome, if outcome == 1 { p_plus } else { 1.0 - p_plus }))
    }
}

fn x_gauge_basis(code: &GaugeColorCode) -> Vec<BitRow> {
    let n = code.num_qubits();
    let rows = code.gauge().x_type().map(|p| p.x.clone()).collect();
    BitMatrix::from_rows(n, rows).echelon().rows
}

/// Equal superposition over X_G X_Q^a |0…0⟩ for X_G in the X part of G.
pub fn encode_logical(code: &GaugeColorCode, a: bool) -> Result<StateVector, SimError> {
    let n = code.num_qubits();
    let mut st = StateVector::zero(n)?;
    st.amps[0] = Complex64::new(0.0, 0.0);
    let basis: Vec<usize> = x_gauge_basis(code)
        .iter()
        .map(|r| r.ones().fold(0usize, |m, q| m | 1 << q))
        .collect();
    let shift = if a { (1usize << n) - 1 } else { 0 };
    let amp = Complex64::new((0.5f64).powi(basis.len() as i32).sqrt(), 0.0);
    for c in 0u64..(1u64 << basis.len()) {
        let mut b = shift;
        for (i, &v) in basis.iter().enumerate() {
            if c >> i & 1 == 1 {
                b ^= v;
            }
        }
        st.amps[b] = amp;
    }
    st.check_norm()?;
    Ok(st)
}

/// α|0̄⟩ + β|1̄⟩, normalized.
pub fn encode_state(code: &GaugeColorCode, alpha: Complex64, beta: Complex64) -> Result<StateVector, SimError> {
    let zero = encode_logical(code, false)?;
    let one = encode_logical(code, true)?;
    let mut st = zero.scaled_sum(alpha, &one, beta);
    st.renormalize();
    Ok(st)
}

pub fn logical_y(code: &GaugeColorCode) -> PauliOperator {
    let y = code.logical_x().mul(code.logical_z());
    PauliOperator {
        phase: (y.phase + 1) % 4,
        ..y
    }
}

/// (⟨X_Q⟩, ⟨Y_Q⟩, ⟨Z_Q⟩).
pub fn logical_expectations(state: &StateVector, code: &GaugeColorCode) -> Result<[f64; 3], SimError> {
    Ok([
        state.expectation(code.logical_x())?,
        state.expectation(&logical_y(code))?,
        state.expectation(code.logical_z())?,
    ])
}

pub fn stabilizer_expectations(state: &StateVector, s: &GeneratorSet) -> Result<Vec<f64>, SimError> {
    s.generators().iter().map(|p| state.expectation(p)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub seed: u64,
    /// (row of the measured operator in code2's stabilizer list, ±1).
    pub outcomes: Vec<(usize, i8)>,
    pub corrections: Vec<usize>,
}

/// Measures the plan's operators, then applies the correction chosen by the
/// outcomes (unless `skip_correction`).
pub fn run_gauge_fixing_with(
    state: &StateVector,
    code1: &GaugeColorCode,
    plan: &GaugeFixPlan,
    seed: u64,
    skip_correction: bool,
) -> Result<(StateVector, MeasurementRecord), SimError> {
    for (i, p) in code1.stabilizer().generators().iter().enumerate() {
        let ev = state.expectation(p)?;
        if (ev - 1.0).abs() > 1e-10 {
            return Err(SimError::Precondition(format!(
                "stabilizer {i} has expectation {ev}"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = state.clone();
    let mut outcomes = Vec::new();
    let mut flips = BitRow::zeros(plan.len());
    for (j, p) in plan.measurements.iter().enumerate() {
        let (o, _) = st.measure_pauli(p, &mut rng)?;
        outcomes.push((plan.measurement_rows[j], o));
        if o == -1 {
            flips.set(j, true);
        }
    }
    let corrections = if skip_correction {
        Vec::new()
    } else {
        let idx = plan.correction_indices(&flips);
        for &i in &idx {
            st.apply_pauli(&plan.corrections[i])?;
        }
        idx.iter().map(|&i| plan.correction_rows[i]).collect()
    };
    Ok((
        st,
        MeasurementRecord {
            seed,
            outcomes,
            corrections,
        },
    ))
}

pub fn run_gauge_fixing(
    state: &StateVector,
    code1: &GaugeColorCode,
    plan: &GaugeFixPlan,
    seed: u64,
) -> Result<(StateVector, MeasurementRecord), SimError> {
    run_gauge_fixing_with(state, code1, plan, seed, false)
}

/// CLI-facing summary of a simulation run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub fidelity: f64,
    pub phases: Vec<f64>,
    pub stabilizer_expectations: Vec<f64>,
    pub record: Option<MeasurementRecord>,
}

/// Samples random X-type gauge elements X_G and checks that U X_G U† acts
/// trivially: X_G U|ψ⟩ = U|ψ⟩ for random logical states ψ. Returns the worst
/// infidelity seen.
pub fn gauge_invariance_defect(
    code: &GaugeColorCode,
    plan: &GatePlan,
    samples: usize,
    seed: u64,
) -> Result<f64, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = x_gauge_basis(code);
    let n = code.num_qubits();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (th, ph): (f64, f64) = (rng.gen::<f64>() * PI, rng.gen::<f64>() * 2.0 * PI);
        let psi = encode_state(
            code,
            Complex64::new((th / 2.0).cos(), 0.0),
            Complex64::from_polar((th / 2.0).sin(), ph),
        )?;
        let mut g = BitRow::zeros(n);
        for r in &basis {
            if rng.gen::<bool>() {
                g.xor_assign(r);
            }
        }
        let xg = PauliOperator::x_type(g);
        let mut u_psi = psi.clone();
        u_psi.apply_gate_plan(plan)?;
        let moved = u_psi.pauli_image(&xg)?;
        worst = worst.max(1.0 - moved.fidelity(&u_psi));
        let mut u_g_psi = psi.pauli_image(&xg)?;
        u_g_psi.apply_gate_plan(plan)?;
        worst = worst.max(1.0 - u_g_psi.fidelity(&u_psi));
    }
    Ok(worst)
}

fn in_group(g: &GeneratorSet, p: &PauliOperator) -> bool {
    g.member(p, true)
}

fn cnot_image(a: &PauliOperator, b: &PauliOperator) -> (PauliOperator, PauliOperator) {
    // (x1, z1, x2, z2) → (x1, z1 + z2, x1 + x2, z2)
    (
        PauliOperator::hermitian(a.x.clone(), a.z.xor(&b.z)),
        PauliOperator::hermitian(a.x.xor(&b.x), b.z.clone()),
    )
}

fn hadamard_image(p: &PauliOperator) -> PauliOperator {
    PauliOperator::hermitian(p.z.clone(), p.x.clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct CliffordReport {
    pub cnot: bool,
    pub hadamard: bool,
    pub checks: Report,
}

/// Symbolic check of transversal CNOT between two blocks and transversal
/// Hadamard on one block.
pub fn clifford_transversal_check(code: &GaugeColorCode) -> CliffordReport {
    let n = code.num_qubits();
    let id = PauliOperator::identity(n);
    let mut checks = Report::default();
    let mut cnot_ok = true;
    for (name, g) in [("cnot_stabilizer", code.stabilizer()), ("cnot_gauge", code.gauge())] {
        let mut witness = None;
        'gens: for (i, p) in g.generators().iter().enumerate() {
            for (a, b) in [(p, &id), (&id, p)] {
                let (x, y) = cnot_image(a, b);
                if !in_group(g, &x) || !in_group(g, &y) {
                    witness = Some(format!("image of generator {i} leaves the group"));
                    break 'gens;
                }
            }
        }
        cnot_ok &= witness.is_none();
        checks.push(Check::from_witness(name, witness));
    }
    let (xq, zq) = (code.logical_x(), code.logical_z());
    let logical_cases = [
        ((xq, &id), (xq, xq)),
        ((&id, xq), (&id, xq)),
        ((zq, &id), (zq, &id)),
        ((&id, zq), (zq, zq)),
    ];
    let mut lw = None;
    for ((a, b), (ea, eb)) in logical_cases {
        let (x, y) = cnot_image(a, b);
        if x.symplectic() != ea.symplectic() || y.symplectic() != eb.symplectic() {
            lw = Some(format!("({a}, {b}) maps to ({x}, {y})"));
        }
    }
    cnot_ok &= lw.is_none();
    checks.push(Check::from_witness("cnot_logicals", lw));

    let mut had_ok = true;
    for (name, g) in [("hadamard_stabilizer", code.stabilizer()), ("hadamard_gauge", code.gauge())] {
        let w = g
            .generators()
            .iter()
            .position(|p| !in_group(g, &hadamard_image(p)))
            .map(|i| format!("image of generator {i} leaves the group"));
        had_ok &= w.is_none();
        checks.push(Check::from_witness(name, w));
    }
    let hw = (hadamard_image(xq).symplectic() != zq.symplectic()
        || hadamard_image(zq).symplectic() != xq.symplectic())
    .then(|| "logicals are not exchanged".to_string());
    had_ok &= hw.is_none();
    checks.push(Check::from_witness("hadamard_logicals", hw));
    CliffordReport {
        cnot: cnot_ok,
        hadamard: had_ok,
        checks,
    }
}
