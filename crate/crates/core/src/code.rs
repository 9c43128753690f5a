//! The groups C(d,e) and (d,e) gauge color codes.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitRow};
use crate::lattice::{ColoredComplex, LatticeError, Simplex};
use crate::pauli::{
    center, centralizer, parse_check_matrix_text, to_check_matrix_text, GeneratorSet,
    PauliError, PauliOperator,
};
use crate::report::{Check, Report};

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("structural invariant failed: {0}")]
    Structure(String),
    #[error("distance search too large: {0}")]
    SearchTooLarge(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliKind {
    X,
    Z,
}

impl fmt::Display for PauliKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PauliKind::X => "X",
            PauliKind::Z => "Z",
        })
    }
}

impl std::str::FromStr for PauliKind {
    type Err = CodeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X" | "x" => Ok(PauliKind::X),
            "Z" | "z" => Ok(PauliKind::Z),
            _ => Err(CodeError::InvalidParameters(format!("unknown Pauli type '{s}'"))),
        }
    }
}

/// Which simplex a generator is attached to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenLabel {
    pub kind: PauliKind,
    pub simplex: Simplex,
}

/// Generators X_{S_δ} for δ in Δ_{d−1} followed by Z_{S_δ} for δ in Δ_{e−1}.
pub fn build_group_c(
    k: &ColoredComplex,
    d: usize,
    e: usize,
) -> Result<(GeneratorSet, Vec<GenLabel>), CodeError> {
    let dim = k.dim();
    if d < 1 || e < 1 || d >= dim || e >= dim {
        return Err(CodeError::InvalidParameters(format!(
            "C({d},{e}) needs 1 ≤ d,e ≤ {}",
            dim - 1
        )));
    }
    let n = k.num_qubits();
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for (kind, level) in [(PauliKind::X, d - 1), (PauliKind::Z, e - 1)] {
        for s in k.delta_set(level)? {
            let support = k.support(&s)?;
            gens.push(match kind {
                PauliKind::X => PauliOperator::x_type(support),
                PauliKind::Z => PauliOperator::z_type(support),
            });
            labels.push(GenLabel { kind, simplex: s });
        }
    }
    Ok((GeneratorSet::new(n, gens)?, labels))
}

#[derive(Clone, Debug)]
pub struct GaugeColorCode {
    lattice: Arc<ColoredComplex>,
    d: usize,
    e: usize,
    stabilizer: GeneratorSet,
    stabilizer_labels: Vec<GenLabel>,
    gauge: GeneratorSet,
    gauge_labels: Vec<GenLabel>,
    logical_x: PauliOperator,
    logical_z: PauliOperator,
}

impl GaugeColorCode {
    /// Builds S = C(d,e), G = C(D−e, D−d) and checks S = center(G).
    pub fn new(lattice: Arc<ColoredComplex>, d: usize, e: usize) -> Result<Self, CodeError> {
        let dim = lattice.dim();
        if d < 1 || e < 1 || d + e > dim {
            return Err(CodeError::InvalidParameters(format!(
                "need d, e ≥ 1 and d + e ≤ D = {dim}; got d = {d}, e = {e}"
            )));
        }
        if !lattice.is_closed() {
            return Err(LatticeError::NotClosed.into());
        }
        let (stabilizer, stabilizer_labels) = build_group_c(&lattice, d, e)?;
        let (gauge, gauge_labels) = build_group_c(&lattice, dim - e, dim - d)?;
        let n = lattice.num_qubits();
        let all = BitRow::from_indices(n, 0..n);
        let code = GaugeColorCode {
            lattice,
            d,
            e,
            stabilizer,
            stabilizer_labels,
            gauge,
            gauge_labels,
            logical_x: PauliOperator::x_type(all.clone()),
            logical_z: PauliOperator::z_type(all),
        };
        if let Some((i, j)) = code.stabilizer.anticommuting_pair() {
            return Err(CodeError::Structure(format!(
                "stabilizer generators {i} and {j} anticommute"
            )));
        }
        if !center(&code.gauge).same_span(&code.stabilizer) {
            return Err(CodeError::Structure("S differs from center(G)".into()));
        }
        Ok(code)
    }

    /// Same code with a replaced stabilizer; nothing is re-verified.
    pub fn with_stabilizer(&self, stabilizer: GeneratorSet, labels: Vec<GenLabel>) -> Self {
        GaugeColorCode {
            stabilizer,
            stabilizer_labels: labels,
            ..self.clone()
        }
    }

    pub fn lattice(&self) -> &Arc<ColoredComplex> {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn num_qubits(&self) -> usize {
        self.lattice.num_qubits()
    }

    pub fn stabilizer(&self) -> &GeneratorSet {
        &self.stabilizer
    }

    pub fn stabilizer_labels(&self) -> &[GenLabel] {
        &self.stabilizer_labels
    }

    pub fn gauge(&self) -> &GeneratorSet {
        &self.gauge
    }

    pub fn gauge_labels(&self) -> &[GenLabel] {
        &self.gauge_labels
    }

    pub fn logical_x(&self) -> &PauliOperator {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliOperator {
        &self.logical_z
    }

    pub fn gauge_qubits(&self) -> usize {
        (self.gauge.rank() - self.stabilizer.rank()) / 2
    }

    /// |Q| − rank(S) − gauge qubits.
    pub fn logical_qubits(&self) -> isize {
        self.num_qubits() as isize - self.stabilizer.rank() as isize - self.gauge_qubits() as isize
    }

    pub fn is_conventional(&self) -> bool {
        self.stabilizer.same_span(&self.gauge)
    }

    /// X-type and Z-type generators of G span the same supports.
    pub fn is_self_dual(&self) -> bool {
        let xs: Vec<BitRow> = self.gauge.x_type().map(|p| p.x.clone()).collect();
        let zs: Vec<BitRow> = self.gauge.z_type().map(|p| p.z.clone()).collect();
        let n = self.num_qubits();
        let ex = BitMatrix::from_rows(n, xs.clone()).echelon();
        let ez = BitMatrix::from_rows(n, zs.clone()).echelon();
        ex.rank() == ez.rank() && zs.iter().all(|z| ex.contains(z))
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.d, self.e)
    }
}

/// Generator weight → count.
pub fn weight_histogram(g: &GeneratorSet) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for p in g.generators() {
        *h.entry(p.weight()).or_insert(0) += 1;
    }
    h
}

/// All groups C(a,b) on the lattice, keyed by (a,b).
type GroupsByParams = Vec<((usize, usize), GeneratorSet)>;

fn all_groups(k: &ColoredComplex) -> Result<GroupsByParams, CodeError> {
    let dim = k.dim();
    let pairs: Vec<(usize, usize)> = (1..dim)
        .flat_map(|a| (1..dim).map(move |b| (a, b)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(a, b)| Ok(((a, b), build_group_c(k, a, b)?.0)))
        .collect()
}

/// Exhaustive GF(2) checks of the code's algebra.
pub fn verify_structure(code: &GaugeColorCode) -> Report {
    let mut report = Report::default();
    let s = code.stabilizer();
    let g = code.gauge();

    report.push(Check::from_witness(
        "stabilizer_abelian",
        s.anticommuting_pair().map(|(i, j)| {
            format!(
                "generators {i} ({}) and {j} ({}) anticommute",
                s.generators()[i],
                s.generators()[j]
            )
        }),
    ));

    let c = center(g);
    report.push(Check::from_witness(
        "stabilizer_is_center_of_gauge",
        if c.same_span(s) {
            None
        } else {
            Some(match c.missing_from(s) {
                Some(i) => format!("S generator {i} is not central in G"),
                None => format!("rank(center(G)) = {}, rank(S) = {}", c.rank(), s.rank()),
            })
        },
    ));

    let groups = match all_groups(code.lattice()) {
        Ok(gs) => gs,
        Err(e) => {
            report.push(Check::fail("group_inclusions", e.to_string()));
            return report;
        }
    };
    let mut bad = None;
    'incl: for ((a1, b1), g1) in &groups {
        for ((a2, b2), g2) in &groups {
            let expected = a1 <= a2 && b1 <= b2;
            if g2.contains_group(g1) != expected {
                bad = Some(format!(
                    "C({a1},{b1}) ⊆ C({a2},{b2}) is {} but the order predicts {expected}",
                    !expected
                ));
                break 'incl;
            }
        }
    }
    report.push(Check::from_witness("group_inclusions", bad));

    let dressed = centralizer(s);
    let mut expected = g.clone();
    let bare = [code.logical_x().clone(), code.logical_z().clone()];
    for p in &bare {
        expected.push(p.clone()).expect("lengths agree");
    }
    report.push(Check::from_witness(
        "centralizer_formula",
        if dressed.same_span(&expected) {
            None
        } else {
            Some(format!(
                "rank(centralizer(S)) = {}, rank(⟨X_Q, Z_Q⟩·G) = {}",
                dressed.rank(),
                expected.rank()
            ))
        },
    ));

    let n = code.num_qubits();
    report.push(Check::from_witness(
        "odd_qubit_count",
        n.is_multiple_of(2).then(|| format!("|Q| = {n}")),
    ));

    let xz = code.logical_x().mul(code.logical_z());
    let mut hit = None;
    for ((a, b), grp) in &groups {
        for (name, p) in [("X_Q", code.logical_x()), ("Z_Q", code.logical_z()), ("X_Q Z_Q", &xz)] {
            if grp.member(p, true) {
                hit = Some(format!("{name} ∈ C({a},{b})"));
            }
        }
    }
    report.push(Check::from_witness("logicals_outside_groups", hit));

    let anti = g
        .generators()
        .iter()
        .position(|p| !p.commutes_unchecked(code.logical_x()) || !p.commutes_unchecked(code.logical_z()));
    report.push(Check::from_witness(
        "bare_logicals",
        anti.map(|i| format!("gauge generator {i} anticommutes with a logical")),
    ));

    let k = code.logical_qubits();
    report.push(Check::from_witness(
        "one_logical_qubit",
        (k != 1).then(|| {
            format!(
                "|Q| = {n}, rank(S) = {}, rank(G) = {} give {k} logical qubits",
                s.rank(),
                g.rank()
            )
        }),
    ));
    report
}

/// Minimum weight of a dressed logical of the given type, searching up to
/// `weight_cap`. `None` when nothing is found below the cap.
pub fn code_distance_bruteforce(
    code: &GaugeColorCode,
    kind: PauliKind,
    weight_cap: usize,
) -> Result<Option<usize>, CodeError> {
    let n = code.num_qubits();
    if n > 31 && weight_cap > 7 {
        return Err(CodeError::SearchTooLarge(format!(
            "{n} qubits with weight cap {weight_cap}; cap must be ≤ 7 beyond 31 qubits"
        )));
    }
    // A Z-type logical must commute with the X-type stabilizers, and vice versa.
    let checks: Vec<&BitRow> = match kind {
        PauliKind::Z => code.stabilizer().x_type().map(|p| &p.x).collect(),
        PauliKind::X => code.stabilizer().z_type().map(|p| &p.z).collect(),
    };
    let same: Vec<BitRow> = match kind {
        PauliKind::Z => code.gauge().z_type().map(|p| p.z.clone()).collect(),
        PauliKind::X => code.gauge().x_type().map(|p| p.x.clone()).collect(),
    };
    let gauge_span = BitMatrix::from_rows(n, same).echelon();
    let m = checks.len();
    let columns: Vec<BitRow> = (0..n)
        .map(|q| BitRow::from_indices(m, (0..m).filter(|&r| checks[r].get(q))))
        .collect();

    fn search(
        start: usize,
        left: usize,
        syndrome: &mut BitRow,
        chosen: &mut Vec<usize>,
        columns: &[BitRow],
        n: usize,
        gauge_span: &crate::gf2::Echelon,
    ) -> bool {
        if left == 0 {
            return syndrome.is_zero()
                && !gauge_span.contains(&BitRow::from_indices(n, chosen.iter().copied()));
        }
        for q in start..=n - left {
            syndrome.xor_assign(&columns[q]);
            chosen.push(q);
            if search(q + 1, left - 1, syndrome, chosen, columns, n, gauge_span) {
                return true;
            }
            chosen.pop();
            syndrome.xor_assign(&columns[q]);
        }
        false
    }

    for w in 1..=weight_cap.min(n) {
        let mut syndrome = BitRow::zeros(m);
        let mut chosen = Vec::new();
        if search(0, w, &mut syndrome, &mut chosen, &columns, n, &gauge_span) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

pub const STABILIZER_FILE: &str = "stabilizer.txt";
pub const GAUGE_FILE: &str = "gauge.txt";
pub const LOGICALS_FILE: &str = "logicals.txt";

/// Check matrices as read back from disk.
#[derive(Clone, Debug)]
pub struct CheckMatrices {
    pub n: usize,
    pub stabilizer: Vec<PauliOperator>,
    pub gauge: Vec<PauliOperator>,
    pub logicals: Vec<PauliOperator>,
}

impl CheckMatrices {
    pub fn from_code(code: &GaugeColorCode) -> Self {
        CheckMatrices {
            n: code.num_qubits(),
            stabilizer: code.stabilizer().generators().to_vec(),
            gauge: code.gauge().generators().to_vec(),
            logicals: vec![code.logical_x().clone(), code.logical_z().clone()],
        }
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CodeError> {
        fs::create_dir_all(dir)?;
        let mut out = Vec::new();
        for (name, rows) in [
            (STABILIZER_FILE, &self.stabilizer),
            (GAUGE_FILE, &self.gauge),
            (LOGICALS_FILE, &self.logicals),
        ] {
            let path = dir.join(name);
            fs::write(&path, to_check_matrix_text(self.n, rows))?;
            out.push(path);
        }
        Ok(out)
    }

    pub fn read(dir: &Path) -> Result<Self, CodeError> {
        let load = |name: &str| -> Result<(usize, Vec<PauliOperator>), CodeError> {
            Ok(parse_check_matrix_text(&fs::read_to_string(dir.join(name))?)?)
        };
        let (n, stabilizer) = load(STABILIZER_FILE)?;
        let (n2, gauge) = load(GAUGE_FILE)?;
        let (n3, logicals) = load(LOGICALS_FILE)?;
        if n2 != n || n3 != n {
            return Err(PauliError::LengthMismatch(n, n2.max(n3)).into());
        }
        Ok(CheckMatrices {
            n,
            stabilizer,
            gauge,
            logicals,
        })
    }
}

/// Writes S, G and the logicals in check-matrix text format.
pub fn export_check_matrices(code: &GaugeColorCode, dir: &Path) -> Result<Vec<PathBuf>, CodeError> {
    CheckMatrices::from_code(code).write(dir)
}
