//! Transversal R_n gates: T-sets, the intersection condition, exponent k and
//! perfect subdivision.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{CodeError, GaugeColorCode};
use crate::gf2::{BitMatrix, BitRow};
use crate::lattice::{ColoredComplex, LatticeError, Origin, Simplex, Vertex};
use crate::report::{Check, Report};

#[derive(Debug, Error)]
pub enum TransversalError {
    #[error("dimension condition D ≥ n·ē fails: D = {dim}, n = {n}, ē = {ebar}")]
    DimensionCondition { dim: usize, n: usize, ebar: usize },
    #[error("signed count |Q|_T = {0} is even; T is corrupted")]
    EvenSignedCount(i64),
    #[error("bad-cell system is inconsistent: {0}")]
    Inconsistent(String),
    #[error("intersection condition fails: {0}")]
    ConditionFailed(String),
    #[error("invalid T: {0}")]
    InvalidTSet(String),
    #[error("invalid gate level {0}")]
    InvalidLevel(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Qubits on which the rotation is inverted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSet {
    members: BitRow,
}

impl TSet {
    pub fn empty(n: usize) -> Self {
        TSet {
            members: BitRow::zeros(n),
        }
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Result<Self, TransversalError> {
        let mut members = BitRow::zeros(n);
        for q in idx {
            if q >= n {
                return Err(TransversalError::InvalidTSet(format!("qubit {q} ≥ {n}")));
            }
            members.set(q, true);
        }
        Ok(TSet { members })
    }

    pub fn from_row(members: BitRow) -> Self {
        TSet { members }
    }

    pub fn num_qubits(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.members.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_zero()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.members.get(q)
    }

    pub fn as_row(&self) -> &BitRow {
        &self.members
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.ones().collect()
    }

    /// |T′∩V| − |T∩V|.
    pub fn signed_count(&self, v: &BitRow) -> i64 {
        v.count_ones() as i64 - 2 * self.members.and_count(v) as i64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.indices()).expect("serializable")
    }
}

/// The first collection of X-type gauge generators violating the condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionViolation {
    pub generators: Vec<usize>,
    pub signed_count: i64,
    pub modulus: u64,
}

fn x_gauge_supports(code: &GaugeColorCode) -> Vec<(usize, BitRow)> {
    code.gauge()
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.z.is_zero() && !p.x.is_zero())
        .map(|(i, p)| (i, p.x.clone()))
        .collect()
}

/// For m = 1..n and every m X-type generators of G,
/// |∩ S_i|_T ≡ 0 mod 2^{n−m+1}.
pub fn intersection_violation(
    code: &GaugeColorCode,
    t: &TSet,
    n: usize,
) -> Option<IntersectionViolation> {
    let gens = x_gauge_supports(code);

    fn dfs(
        gens: &[(usize, BitRow)],
        t: &TSet,
        n: usize,
        start: usize,
        acc: &BitRow,
        chosen: &mut Vec<usize>,
    ) -> Option<IntersectionViolation> {
        let m = chosen.len();
        let modulus = 1u64 << (n - m + 1);
        let signed = t.signed_count(acc);
        if signed.rem_euclid(modulus as i64) != 0 {
            return Some(IntersectionViolation {
                generators: chosen.iter().map(|&i| gens[i].0).collect(),
                signed_count: signed,
                modulus,
            });
        }
        if m == n {
            return None;
        }
        for j in start..gens.len() {
            let next = acc.and(&gens[j].1);
            // empty intersections stay empty and satisfy every congruence
            if next.is_zero() {
                continue;
            }
            chosen.push(j);
            let found = dfs(gens, t, n, j + 1, &next, chosen);
            chosen.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    if n == 0 {
        return None;
    }
    let found: Vec<IntersectionViolation> = (0..gens.len())
        .into_par_iter()
        .filter_map(|i| dfs(&gens, t, n, i + 1, &gens[i].1, &mut vec![i]))
        .collect();
    found.into_iter().min_by(|a, b| a.generators.cmp(&b.generators))
}

pub fn check_intersection_condition(code: &GaugeColorCode, t: &TSet, n: usize) -> bool {
    intersection_violation(code, t, n).is_none()
}

/// Compares bitset intersections of X-type gauge supports against the colex
/// prediction ∩ S_{δ_i} = S_{∪δ_i} (empty when the union is not a face),
/// over all collections of up to `max_m` generators. Returns the first mismatch.
pub fn intersection_color_cross_check(code: &GaugeColorCode, max_m: usize) -> Option<String> {
    let k = code.lattice();
    let labeled: Vec<(Simplex, BitRow)> = code
        .gauge()
        .generators()
        .iter()
        .zip(code.gauge_labels())
        .filter(|(p, _)| p.z.is_zero())
        .map(|(p, l)| (l.simplex.clone(), p.x.clone()))
        .collect();
    let n = code.num_qubits();
    let predicted = |s: &Simplex| -> BitRow {
        if s.len() <= k.dim() && k.is_face(s) {
            k.support(s).unwrap_or_else(|_| BitRow::zeros(n))
        } else {
            BitRow::zeros(n)
        }
    };

    fn rec(
        labeled: &[(Simplex, BitRow)],
        start: usize,
        left: usize,
        s: &Simplex,
        acc: &BitRow,
        predicted: &dyn Fn(&Simplex) -> BitRow,
    ) -> Option<String> {
        if &predicted(s) != acc {
            return Some(format!("intersection for union {s:?} disagrees with its support"));
        }
        if left == 0 || acc.is_zero() {
            return None;
        }
        for j in start..labeled.len() {
            let u = s.union(&labeled[j].0);
            let a = acc.and(&labeled[j].1);
            if let Some(w) = rec(labeled, j + 1, left - 1, &u, &a, predicted) {
                return Some(w);
            }
        }
        None
    }

    for i in 0..labeled.len() {
        if let Some(w) = rec(
            &labeled,
            i + 1,
            max_m.saturating_sub(1),
            &labeled[i].0,
            &labeled[i].1,
            &predicted,
        ) {
            return Some(w);
        }
    }
    None
}

/// Colex 2-cells and the indicator of those with |V_c| ≡ 2 mod 4.
pub fn bad_cell_syndrome(k: &ColoredComplex) -> Result<(Vec<(Simplex, BitRow)>, BitRow), TransversalError> {
    let cells = k.colex_cells(2)?;
    let bad = BitRow::from_bools(
        &cells
            .iter()
            .map(|(_, v)| v.count_ones() % 4 == 2)
            .collect::<Vec<_>>(),
    );
    Ok((cells, bad))
}

/// Solves ⟨V_c, T⟩ = bad(c) over GF(2) for all colex 2-cells.
pub fn solve_tset(k: &ColoredComplex) -> Result<TSet, TransversalError> {
    let n = k.num_qubits();
    let (cells, bad) = bad_cell_syndrome(k)?;
    if let Some((s, v)) = cells.iter().find(|(_, v)| v.count_ones() % 2 == 1) {
        return Err(TransversalError::Inconsistent(format!(
            "2-cell dual to {s:?} has odd size {}",
            v.count_ones()
        )));
    }
    let a = BitMatrix::from_rows(n, cells.into_iter().map(|(_, v)| v).collect());
    a.solve(&bad)
        .map(TSet::from_row)
        .ok_or_else(|| TransversalError::Inconsistent("no T satisfies the bad-cell equations".into()))
}

/// Union of the even-triad bulk tetrahedra with the face and edge attachment
/// qubits not already covered by them.
pub fn explicit_tset_3d(k: &ColoredComplex) -> Result<TSet, TransversalError> {
    if k.dim() != 3 || !k.is_closed() {
        return Err(TransversalError::InvalidTSet(
            "explicit T needs a closed 3D family lattice".into(),
        ));
    }
    let q = k.qubit_indexing().ok_or(LatticeError::NotClosed)?;
    let original = |v: usize| k.vertices()[v].origin == Origin::Original;
    let mut members = BTreeSet::new();
    let mut t3_faces = BTreeSet::new();
    for (i, s) in q.qubits.iter().enumerate() {
        if s.vertices().iter().all(|&v| original(v)) && k.triad_parity(s)? {
            members.insert(i);
            t3_faces.extend(s.faces());
        }
    }
    let orig_part = |s: &Simplex| Simplex::new(s.vertices().iter().copied().filter(|&v| original(v)).collect());
    let mut t2_faces = BTreeSet::new();
    for (i, s) in q.qubits.iter().enumerate() {
        let o = orig_part(s);
        if o.len() == 3 && !t3_faces.contains(&o) {
            members.insert(i);
            t2_faces.extend(o.faces());
        }
    }
    for (i, s) in q.qubits.iter().enumerate() {
        let o = orig_part(s);
        if o.len() == 2 && !t2_faces.contains(&o) {
            members.insert(i);
        }
    }
    TSet::from_indices(k.num_qubits(), members)
}

/// First colex cell with |V_c|_T ≢ 0 mod 2^d.
pub fn cells_t_violation(k: &ColoredComplex, t: &TSet) -> Result<Option<String>, TransversalError> {
    for d in 1..=k.dim() {
        for (s, v) in k.colex_cells(d)? {
            let signed = t.signed_count(&v);
            if signed.rem_euclid(1 << d) != 0 {
                return Ok(Some(format!(
                    "{d}-cell dual to {s:?}: |V| = {}, |V|_T = {signed}, not divisible by {}",
                    v.count_ones(),
                    1 << d
                )));
            }
        }
    }
    Ok(None)
}

pub fn verify_cells_t(k: &ColoredComplex, t: &TSet) -> Result<bool, TransversalError> {
    Ok(cells_t_violation(k, t)?.is_none())
}

/// Inverse of |Q|_T modulo 2^n.
pub fn compute_k(q_t: i64, n: usize) -> Result<u64, TransversalError> {
    if n == 0 || n > 62 {
        return Err(TransversalError::InvalidLevel(n));
    }
    let m = 1i64 << n;
    let a = q_t.rem_euclid(m);
    if a % 2 == 0 {
        return Err(TransversalError::EvenSignedCount(q_t));
    }
    // odd numbers are units mod 2^n; a^{-1} = a^{2^{n-1}-1}
    let mut k = 1i128;
    let (mut base, mut e) = (a as i128, (1u64 << (n - 1)) - 1);
    while e > 0 {
        if e & 1 == 1 {
            k = k * base % m as i128;
        }
        base = base * base % m as i128;
        e >>= 1;
    }
    Ok(k as u64)
}

/// Per-qubit rotation exponents realizing a logical R_n.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GatePlan {
    pub n: usize,
    pub k: u64,
    #[serde(rename = "T")]
    pub t: Vec<usize>,
    /// −k on T, +k elsewhere; qubit q gets R_n^{exponents[q]}.
    pub exponents: Vec<i64>,
}

impl GatePlan {
    pub fn new(n: usize, k: u64, t: &TSet) -> Self {
        let exponents = (0..t.num_qubits())
            .map(|q| if t.contains(q) { -(k as i64) } else { k as i64 })
            .collect();
        GatePlan {
            n,
            k,
            t: t.indices(),
            exponents,
        }
    }

    pub fn tset(&self) -> TSet {
        TSet::from_indices(self.exponents.len(), self.t.iter().copied()).expect("indices in range")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn check_dimension_condition(code: &GaugeColorCode, n: usize) -> Result<(), TransversalError> {
    let dim = code.dim();
    let ebar = dim - code.e();
    if n == 0 {
        return Err(TransversalError::InvalidLevel(n));
    }
    if dim < n * ebar {
        return Err(TransversalError::DimensionCondition { dim, n, ebar });
    }
    Ok(())
}

/// Plan using the solver T.
pub fn gate_plan(code: &GaugeColorCode, n: usize) -> Result<GatePlan, TransversalError> {
    check_dimension_condition(code, n)?;
    let t = solve_tset(code.lattice())?;
    gate_plan_with_tset(code, n, &t)
}

pub fn gate_plan_with_tset(code: &GaugeColorCode, n: usize, t: &TSet) -> Result<GatePlan, TransversalError> {
    check_dimension_condition(code, n)?;
    if t.num_qubits() != code.num_qubits() {
        return Err(TransversalError::InvalidTSet(format!(
            "T has {} qubits, code has {}",
            t.num_qubits(),
            code.num_qubits()
        )));
    }
    if let Some(v) = intersection_violation(code, t, n) {
        return Err(TransversalError::ConditionFailed(format!(
            "generators {:?}: |∩|_T = {} not divisible by {}",
            v.generators, v.signed_count, v.modulus
        )));
    }
    let all = BitRow::from_indices(code.num_qubits(), 0..code.num_qubits());
    let k = compute_k(t.signed_count(&all), n)?;
    Ok(GatePlan::new(n, k, t))
}

/// Splits each top simplex in `t` into 2^{D+1} − 1 pieces, one per nonempty
/// color set κ: the new vertices colored κ plus the old ones colored outside κ.
pub fn perfect_subdivision(k: &ColoredComplex, t: &TSet) -> Result<ColoredComplex, TransversalError> {
    if !k.is_closed() {
        return Err(LatticeError::NotClosed.into());
    }
    if t.num_qubits() != k.num_qubits() {
        return Err(TransversalError::InvalidTSet(format!(
            "T has {} qubits, complex has {}",
            t.num_qubits(),
            k.num_qubits()
        )));
    }
    let dim = k.dim();
    let mut vertices: Vec<Vertex> = k.vertices().to_vec();
    let split: BTreeSet<&Simplex> = t.indices().into_iter().map(|q| k.qubit_simplex(q)).collect();
    let mut top = Vec::new();
    for s in k.top_simplices() {
        if !split.contains(s) {
            top.push(s.clone());
            continue;
        }
        let base = vertices.len();
        let by_color: BTreeMap<u8, usize> = s.vertices().iter().map(|&v| (k.color(v), v)).collect();
        for c in 0..=dim {
            let centroid = s
                .vertices()
                .iter()
                .fold([0i64; 3], |acc, &v| {
                    let p = k.vertices()[v].position;
                    [acc[0] + p[0], acc[1] + p[1], acc[2] + p[2]]
                });
            vertices.push(Vertex {
                id: base + c,
                color: c as u8,
                position: centroid.map(|x| x / (dim as i64 + 1)),
                origin: Origin::Subdivision,
            });
        }
        for kappa in 1u32..(1 << (dim + 1)) {
            let piece = (0..=dim)
                .map(|c| {
                    if kappa >> c & 1 == 1 {
                        base + c
                    } else {
                        by_color[&(c as u8)]
                    }
                })
                .collect();
            top.push(Simplex::new(piece));
        }
    }
    Ok(ColoredComplex::new(dim, vertices, top)?)
}

/// Cell-by-cell growth |V_c′| = |V_c| + (2^d − 2)|T ∩ V_c| between a complex
/// and its subdivision. Returns the first violation.
pub fn change_v_violation(
    k: &ColoredComplex,
    sub: &ColoredComplex,
    t: &TSet,
) -> Result<Option<String>, TransversalError> {
    for d in 1..=k.dim() {
        for (s, v) in k.colex_cells(d)? {
            let after = sub.support(&s)?.count_ones() as i64;
            let expected = v.count_ones() as i64 + ((1i64 << d) - 2) * t.as_row().and_count(&v) as i64;
            if after != expected {
                return Ok(Some(format!(
                    "{d}-cell dual to {s:?}: {after} qubits after subdivision, expected {expected}"
                )));
            }
        }
    }
    Ok(None)
}

/// Every colex d-cell has a multiple of 2^d qubits.
pub fn perfection_violation(k: &ColoredComplex) -> Result<Option<String>, TransversalError> {
    cells_t_violation(k, &TSet::empty(k.num_qubits()))
}

/// For every colex 3-cell, the bad 2-cells in each of its color classes have
/// equal parity.
pub fn bad_cell_parity_report(k: &ColoredComplex) -> Result<Report, TransversalError> {
    let mut report = Report::default();
    let dim = k.dim();
    if dim < 3 {
        report.push(Check::skipped("bad_cell_parity", "no 3-cells below dimension 3"));
        return Ok(report);
    }
    let (cells, bad) = bad_cell_syndrome(k)?;
    let bad_of: BTreeMap<&Simplex, bool> = cells
        .iter()
        .enumerate()
        .map(|(i, (s, _))| (s, bad.get(i)))
        .collect();
    let mut witness = None;
    for delta in k.delta_set(dim - 3)? {
        let mut parity: BTreeMap<u8, bool> = BTreeMap::new();
        for w in 0..k.vertices().len() {
            if delta.contains(w) {
                continue;
            }
            let mut ext = delta.vertices().to_vec();
            ext.push(w);
            let ext = Simplex::new(ext);
            if let Some(&b) = bad_of.get(&ext) {
                *parity.entry(k.color(w)).or_insert(false) ^= b;
            }
        }
        let distinct: BTreeSet<bool> = parity.values().copied().collect();
        if distinct.len() > 1 {
            witness = Some(format!("3-cell dual to {delta:?} has class parities {parity:?}"));
            break;
        }
    }
    report.push(Check::from_witness("bad_cell_parity", witness));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_closed, Family};
    use std::sync::Arc;

    fn code(fam: Family, n: usize, d: usize, e: usize) -> GaugeColorCode {
        GaugeColorCode::new(Arc::new(build_closed(fam, n).unwrap()), d, e).unwrap()
    }

    #[test]
    fn steane_condition() {
        let c = code(Family::TwoD, 1, 1, 1);
        assert!(check_intersection_condition(&c, &TSet::empty(7), 2));
        let q = c.gauge().x_type().next().unwrap().x.first_one().unwrap();
        let t = TSet::from_indices(7, [q]).unwrap();
        assert!(!check_intersection_condition(&c, &t, 2));
    }

    #[test]
    fn fifteen_qubit_condition() {
        let c = code(Family::ThreeD, 1, 1, 2);
        assert!(check_intersection_condition(&c, &TSet::empty(15), 3));
        assert!(intersection_color_cross_check(&c, 3).is_none());
    }

    #[test]
    fn modular_inverse_oracle() {
        assert_eq!(compute_k(7, 2).unwrap(), 3);
        assert_eq!(compute_k(15, 3).unwrap(), 7);
        for n in 1..8 {
            assert_eq!(compute_k(1, n).unwrap(), 1);
            for q in (-41i64..41).step_by(2) {
                let k = compute_k(q, n).unwrap() as i64;
                assert_eq!((k * q).rem_euclid(1 << n), 1 % (1 << n));
            }
        }
        assert!(matches!(compute_k(6, 3), Err(TransversalError::EvenSignedCount(6))));
    }

    #[test]
    fn solver_gives_empty_at_n1() {
        for fam in [Family::TwoD, Family::ThreeD] {
            let k = build_closed(fam, 1).unwrap();
            assert!(solve_tset(&k).unwrap().is_empty());
            assert!(verify_cells_t(&k, &TSet::empty(k.num_qubits())).unwrap());
        }
    }

    #[test]
    fn single_qubit_t_breaks_cells() {
        let k = build_closed(Family::TwoD, 1).unwrap();
        assert!(!verify_cells_t(&k, &TSet::from_indices(7, [0]).unwrap()).unwrap());
    }

    #[test]
    fn plans() {
        let p = gate_plan(&code(Family::TwoD, 1, 1, 1), 2).unwrap();
        assert_eq!((p.k, p.t.len()), (3, 0));
        let p = gate_plan(&code(Family::ThreeD, 1, 1, 2), 3).unwrap();
        assert_eq!((p.k, p.t.len()), (7, 0));
        assert!(p.exponents.iter().all(|&e| e == 7));
        assert!(matches!(
            gate_plan(&code(Family::ThreeD, 1, 1, 1), 3),
            Err(TransversalError::DimensionCondition { dim: 3, n: 3, ebar: 2 })
        ));
    }

    #[test]
    fn explicit_t_at_n1() {
        let k = build_closed(Family::ThreeD, 1).unwrap();
        let t = explicit_tset_3d(&k).unwrap();
        assert!(verify_cells_t(&k, &t).unwrap());
        let m = crate::lattice::build_3d_tetrahedron(1).unwrap();
        let even = m
            .top_simplices()
            .iter()
            .filter(|s| m.triad_parity(s).unwrap())
            .count();
        let bulk_in_t = t
            .indices()
            .into_iter()
            .filter(|&q| k.qubit_simplex(q).vertices().iter().all(|&v| k.vertices()[v].origin == Origin::Original))
            .count();
        assert_eq!(bulk_in_t, even);
    }

    #[test]
    fn subdividing_one_triangle() {
        let k = build_closed(Family::TwoD, 1).unwrap();
        let t = TSet::from_indices(7, [3]).unwrap();
        let sub = perfect_subdivision(&k, &t).unwrap();
        assert_eq!(sub.top_simplices().len(), k.top_simplices().len() + 6);
        assert_eq!(sub.vertices().len(), k.vertices().len() + 3);
        assert!(sub.is_closed());
        assert!(change_v_violation(&k, &sub, &t).unwrap().is_none());
        let same = perfect_subdivision(&k, &TSet::empty(7)).unwrap();
        assert_eq!(same.top_simplices(), k.top_simplices());
    }
}
