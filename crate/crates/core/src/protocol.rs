//! Gauge fixing between codes on one lattice, and the decomposition of
//! stabilizer measurements into rounds of small gauge measurements.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::code::{CodeError, GaugeColorCode, PauliKind};
use crate::gf2::{BitMatrix, BitRow};
use crate::lattice::{Color, ColoredComplex, LatticeError, Simplex};
use crate::pauli::{GeneratorSet, PauliError, PauliOperator};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("codes live on different lattices")]
    DifferentLattices,
    #[error("algebraic test and parameter order disagree: {0}")]
    CriterionMismatch(String),
    #[error("not a gauge-fixing pair: {0}")]
    NotAPair(String),
    #[error("no invertible pairing between measurements and gauge corrections: {0}")]
    NoInvertiblePairing(String),
    #[error("invalid color set: {0}")]
    InvalidColors(String),
    #[error("d′ = {0} is outside every sector range ({1})")]
    DPrimeOutOfRange(usize, String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

fn same_lattice(a: &Arc<ColoredComplex>, b: &Arc<ColoredComplex>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.dim() == b.dim()
            && a.vertices() == b.vertices()
            && a.top_simplices() == b.top_simplices())
}

/// Elements of `g` commuting with all of `s`, modulo phase.
fn commutant_within(g: &GeneratorSet, s: &GeneratorSet) -> GeneratorSet {
    let basis = g.basis();
    let rows = s
        .basis()
        .iter()
        .map(|p| {
            BitRow::from_indices(
                basis.len(),
                (0..basis.len()).filter(|&i| !basis[i].commutes_unchecked(p)),
            )
        })
        .collect();
    let m = BitMatrix::from_rows(basis.len(), rows);
    let n = g.num_qubits();
    let gens = m
        .nullspace()
        .iter()
        .map(|c| {
            c.ones()
                .fold(PauliOperator::identity(n), |acc, i| acc.mul(&basis[i]))
                .canonical_phase()
        })
        .collect();
    GeneratorSet::new(n, gens).expect("lengths agree")
}

/// Why the algebraic conditions fail, if they do.
pub fn gauge_fixing_obstruction(code1: &GaugeColorCode, code2: &GaugeColorCode) -> Option<String> {
    let (s1, g1) = (code1.stabilizer(), code1.gauge());
    let (s2, g2) = (code2.stabilizer(), code2.gauge());
    if let Some(i) = s2.missing_from(s1) {
        return Some(format!("S1 generator {i} is not in S2"));
    }
    if let Some(i) = g1.missing_from(s2) {
        return Some(format!("S2 generator {i} is not in G1"));
    }
    let expected = commutant_within(g1, s2);
    if !expected.same_span(g2) {
        return Some(format!(
            "G2 has rank {} but centralizer(S2) ∩ G1 has rank {}",
            g2.rank(),
            expected.rank()
        ));
    }
    None
}

/// Whether `code2` is a gauge-fixed version of `code1`. Errors when the
/// algebraic test and the order d1 ≤ d2, e1 ≤ e2 disagree.
pub fn is_gauge_fixing_pair(code1: &GaugeColorCode, code2: &GaugeColorCode) -> Result<bool, ProtocolError> {
    if !same_lattice(code1.lattice(), code2.lattice()) {
        return Err(ProtocolError::DifferentLattices);
    }
    let obstruction = gauge_fixing_obstruction(code1, code2);
    let by_params = code1.d() <= code2.d() && code1.e() <= code2.e();
    if obstruction.is_none() != by_params {
        return Err(ProtocolError::CriterionMismatch(format!(
            "{} → {}: algebra says {}, parameters say {by_params}{}",
            code1.label(),
            code2.label(),
            obstruction.is_none(),
            obstruction.map(|o| format!(" ({o})")).unwrap_or_default()
        )));
    }
    Ok(by_params)
}

#[derive(Clone, Debug)]
pub struct GaugeFixPlan {
    /// Row indices into code2's stabilizer generators.
    pub measurement_rows: Vec<usize>,
    pub measurements: Vec<PauliOperator>,
    /// Row indices into code1's gauge generators.
    pub correction_rows: Vec<usize>,
    pub corrections: Vec<PauliOperator>,
    /// pairing[j][i] = 1 iff measurement j anticommutes with correction i.
    pub pairing: BitMatrix,
    pub pairing_inverse: BitMatrix,
}

#[derive(Serialize)]
struct PlanJson<'a> {
    measurements: &'a [usize],
    corrections: &'a [usize],
    pairing_matrix: Vec<Vec<u8>>,
}

impl GaugeFixPlan {
    pub fn len(&self) -> usize {
        self.measurements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measurements.is_empty()
    }

    /// Correction indices for outcomes `v` (bit j set when measurement j gave −1).
    pub fn correction_indices(&self, v: &BitRow) -> Vec<usize> {
        self.pairing_inverse.mul_vec(v).ones().collect()
    }

    pub fn correction_operator(&self, v: &BitRow) -> PauliOperator {
        let n = self
            .measurements
            .first()
            .map_or(0, |p| p.num_qubits());
        self.correction_indices(v)
            .into_iter()
            .fold(PauliOperator::identity(n), |acc, i| acc.mul(&self.corrections[i]))
    }

    pub fn to_json(&self) -> String {
        let pairing_matrix = self
            .pairing
            .rows()
            .iter()
            .map(|r| (0..r.len()).map(|i| u8::from(r.get(i))).collect())
            .collect();
        serde_json::to_string_pretty(&PlanJson {
            measurements: &self.measurement_rows,
            corrections: &self.correction_rows,
            pairing_matrix,
        })
        .expect("serializable")
    }
}

/// Measurements: code2 stabilizer generators independent modulo S1.
/// Corrections: code1 gauge generators whose pairing columns are independent.
pub fn gauge_fix_plan(code1: &GaugeColorCode, code2: &GaugeColorCode) -> Result<GaugeFixPlan, ProtocolError> {
    if !is_gauge_fixing_pair(code1, code2)? {
        return Err(ProtocolError::NotAPair(format!(
            "{} cannot be fixed to {}",
            code1.label(),
            code2.label()
        )));
    }
    let mut span = code1.stabilizer().clone();
    let mut measurement_rows = Vec::new();
    let mut measurements = Vec::new();
    for (i, p) in code2.stabilizer().generators().iter().enumerate() {
        if !span.member(p, true) {
            span.push(p.clone())?;
            measurement_rows.push(i);
            measurements.push(p.clone());
        }
    }
    let m = measurements.len();
    let mut correction_rows = Vec::new();
    let mut corrections = Vec::new();
    let mut columns: Vec<BitRow> = Vec::new();
    for (i, g) in code1.gauge().generators().iter().enumerate() {
        if corrections.len() == m {
            break;
        }
        let col = BitRow::from_bools(
            &measurements
                .iter()
                .map(|meas| !meas.commutes_unchecked(g))
                .collect::<Vec<_>>(),
        );
        if col.is_zero() {
            continue;
        }
        let mut trial = columns.clone();
        trial.push(col.clone());
        if BitMatrix::from_rows(m, trial).rank() == columns.len() + 1 {
            columns.push(col);
            correction_rows.push(i);
            corrections.push(g.clone());
        }
    }
    if corrections.len() < m {
        return Err(ProtocolError::NoInvertiblePairing(format!(
            "found {} independent corrections for {m} measurements",
            corrections.len()
        )));
    }
    let pairing = BitMatrix::from_rows(m, columns).transpose();
    let pairing_inverse = pairing
        .inverse()
        .ok_or_else(|| ProtocolError::NoInvertiblePairing("pairing matrix is singular".into()))?;
    Ok(GaugeFixPlan {
        measurement_rows,
        measurements,
        correction_rows,
        corrections,
        pairing,
        pairing_inverse,
    })
}

fn mask_colors(mask: u32) -> Vec<Color> {
    (0..32).filter(|c| mask >> c & 1 == 1).map(|c| c as Color).collect()
}

/// The κ-colored cells inside the cell dual to `delta`: the simplices
/// extending `delta` whose colors are the complement of κ.
pub fn decompose_stabilizer(
    k: &ColoredComplex,
    delta: &Simplex,
    kappa: &[Color],
) -> Result<Vec<Simplex>, ProtocolError> {
    let full = k.full_color_mask();
    let kmask = kappa.iter().fold(0u32, |m, &c| m | 1 << c);
    let dmask = k.color_mask(delta);
    if kappa.is_empty() || kmask & !full != 0 {
        return Err(ProtocolError::InvalidColors(format!("{kappa:?} is not a nonempty color set")));
    }
    if kmask & dmask != 0 {
        return Err(ProtocolError::InvalidColors(format!(
            "{kappa:?} is not contained in the cell colors {:?}",
            mask_colors(full & !dmask)
        )));
    }
    if k.cofaces(delta).is_empty() {
        return Err(LatticeError::UnknownSimplex(delta.vertices().to_vec()).into());
    }
    let want = full & !kmask;
    let mut out: Vec<Simplex> = k
        .cofaces(delta)
        .iter()
        .map(|&t| {
            let top = &k.top_simplices()[t];
            Simplex::new(
                top.vertices()
                    .iter()
                    .copied()
                    .filter(|&v| want >> k.color(v) & 1 == 1)
                    .collect(),
            )
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Round {
    pub colors: Vec<Color>,
    pub cells: Vec<Simplex>,
    #[serde(skip)]
    pub supports: Vec<BitRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorSchedule {
    pub kind: PauliKind,
    pub cover: Vec<Vec<Color>>,
    pub rounds: Vec<Round>,
    /// For each stabilizer generator of this type: (generator row, [(round, cell)]).
    pub reconstruction: Vec<(usize, Vec<(usize, usize)>)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasurementSchedule {
    pub dprime: usize,
    pub sectors: Vec<SectorSchedule>,
}

/// Smallest family of `size`-subsets of `0..colors` such that every
/// `target`-subset contains a member; ties broken lexicographically.
pub fn minimal_color_cover(colors: usize, size: usize, target: usize) -> Vec<u32> {
    let subsets = |k: usize| -> Vec<u32> {
        (0u32..1 << colors).filter(|m| m.count_ones() as usize == k).collect()
    };
    let candidates = subsets(size);
    let targets = subsets(target);
    fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            combos(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    for k in 1..=candidates.len() {
        let mut all = Vec::new();
        combos(candidates.len(), k, 0, &mut Vec::new(), &mut all);
        for c in all {
            let fam: Vec<u32> = c.iter().map(|&i| candidates[i]).collect();
            if targets.iter().all(|t| fam.iter().any(|f| f & !t == 0)) {
                return fam;
            }
        }
    }
    Vec::new()
}

/// Rounds of d′-cell measurements from which every stabilizer generator of
/// each applicable sector can be reconstructed.
pub fn measurement_schedule(code: &GaugeColorCode, dprime: usize) -> Result<MeasurementSchedule, ProtocolError> {
    let k = code.lattice();
    let dim = code.dim();
    let (d, e) = (code.d(), code.e());
    let (dbar, ebar) = (dim - d, dim - e);
    let ranges = [
        (PauliKind::Z, d + 1, ebar + 1),
        (PauliKind::X, e + 1, dbar + 1),
    ];
    let mut sectors = Vec::new();
    for (kind, lo, hi) in ranges {
        if dprime < lo || dprime > hi {
            continue;
        }
        let cover = minimal_color_cover(dim + 1, dprime, hi);
        let mut rounds = Vec::new();
        for &kmask in &cover {
            let want = k.full_color_mask() & !kmask;
            let cells: Vec<Simplex> = k
                .delta_set(dim - dprime)?
                .into_iter()
                .filter(|s| k.color_mask(s) == want)
                .collect();
            let supports = cells
                .iter()
                .map(|s| k.support(s))
                .collect::<Result<Vec<_>, _>>()?;
            rounds.push(Round {
                colors: mask_colors(kmask),
                cells,
                supports,
            });
        }
        let mut reconstruction = Vec::new();
        for (row, (p, label)) in code
            .stabilizer()
            .generators()
            .iter()
            .zip(code.stabilizer_labels())
            .enumerate()
        {
            if label.kind != kind {
                continue;
            }
            let cell_colors = k.full_color_mask() & !k.color_mask(&label.simplex);
            let (ri, kmask) = cover
                .iter()
                .enumerate()
                .find(|(_, &m)| m & !cell_colors == 0)
                .map(|(i, &m)| (i, m))
                .ok_or_else(|| ProtocolError::InvalidColors("cover misses a stabilizer color class".into()))?;
            let parts = decompose_stabilizer(k, &label.simplex, &mask_colors(kmask))?;
            let mut map = Vec::new();
            let mut acc = BitRow::zeros(code.num_qubits());
            for part in parts {
                let idx = rounds[ri]
                    .cells
                    .binary_search(&part)
                    .map_err(|_| LatticeError::UnknownSimplex(part.vertices().to_vec()))?;
                acc.xor_assign(&rounds[ri].supports[idx]);
                map.push((ri, idx));
            }
            let target = match kind {
                PauliKind::X => &p.x,
                PauliKind::Z => &p.z,
            };
            if &acc != target {
                return Err(ProtocolError::InvalidColors(format!(
                    "reconstruction of stabilizer {row} does not match its support"
                )));
            }
            reconstruction.push((row, map));
        }
        sectors.push(SectorSchedule {
            kind,
            cover: cover.iter().map(|&m| mask_colors(m)).collect(),
            rounds,
            reconstruction,
        });
    }
    if sectors.is_empty() {
        return Err(ProtocolError::DPrimeOutOfRange(
            dprime,
            format!("Z: [{}, {}], X: [{}, {}]", d + 1, ebar + 1, e + 1, dbar + 1),
        ));
    }
    Ok(MeasurementSchedule { dprime, sectors })
}
