//! Pauli operators and groups in the GF(2) symplectic picture.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitRow};

#[derive(Debug, Error)]
pub enum PauliError {
    #[error("length mismatch: {0} vs {1} qubits")]
    LengthMismatch(usize, usize),
    #[error("{what}: generator {generator} is not contained")]
    NotIncluded { what: String, generator: String },
    #[error("center mismatch: {0}")]
    CenterMismatch(String),
    #[error("check-matrix parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// `i^phase · X^x · Z^z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    pub x: BitRow,
    pub z: BitRow,
    pub phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitRow::zeros(n),
            z: BitRow::zeros(n),
            phase: 0,
        }
    }

    pub fn x_type(support: BitRow) -> Self {
        let n = support.len();
        Self {
            x: support,
            z: BitRow::zeros(n),
            phase: 0,
        }
    }

    pub fn z_type(support: BitRow) -> Self {
        let n = support.len();
        Self {
            x: BitRow::zeros(n),
            z: support,
            phase: 0,
        }
    }

    /// Operator with the given masks and the phase that makes it Hermitian.
    pub fn hermitian(x: BitRow, z: BitRow) -> Self {
        let phase = if x.dot(&z) { 1 } else { 0 };
        Self { x, z, phase }
    }

    /// From a symplectic vector `(x | z)`.
    pub fn from_symplectic(v: &BitRow) -> Self {
        let n = v.len() / 2;
        Self::hermitian(v.slice(0, n), v.slice(n, n))
    }

    /// Parses strings like `"-iXIZY"`, `"+XZ"` or `"IIX"`.
    pub fn parse(s: &str) -> Result<Self, PauliError> {
        let mut phase = 0u8;
        let mut rest = s;
        if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase = (phase + 1) % 4;
            rest = r;
        }
        let n = rest.chars().count();
        let mut p = Self::identity(n);
        for (q, c) in rest.chars().enumerate() {
            match c {
                'I' => {}
                'X' => p.x.set(q, true),
                'Z' => p.z.set(q, true),
                // Y = i X Z
                'Y' => {
                    p.x.set(q, true);
                    p.z.set(q, true);
                    p.phase = (p.phase + 1) % 4;
                }
                other => return Err(PauliError::Parse(format!("bad Pauli letter '{other}'"))),
            }
        }
        p.phase = (p.phase + phase) % 4;
        Ok(p)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn weight(&self) -> usize {
        self.x.or(&self.z).count_ones()
    }

    pub fn is_identity_mod_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == u8::from(self.x.dot(&self.z))
    }

    pub fn symplectic(&self) -> BitRow {
        self.x.concat(&self.z)
    }

    pub fn check_len(&self, other: &PauliOperator) -> Result<(), PauliError> {
        if self.num_qubits() != other.num_qubits() {
            return Err(PauliError::LengthMismatch(
                self.num_qubits(),
                other.num_qubits(),
            ));
        }
        Ok(())
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, PauliError> {
        self.check_len(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &PauliOperator) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Exact product `self · other`.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        debug_assert_eq!(self.num_qubits(), other.num_qubits());
        // Z^z1 X^x2 = (-1)^{z1·x2} X^x2 Z^z1
        let sign = if self.z.dot(&other.x) { 2 } else { 0 };
        PauliOperator {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            phase: (self.phase + other.phase + sign) % 4,
        }
    }

    /// Adjusts the phase so that the operator is Hermitian with sign +.
    pub fn canonical_phase(mut self) -> Self {
        self.phase = u8::from(self.x.dot(&self.z));
        self
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Letters written as Y absorb one factor of i each.
        let ys = self.x.and_count(&self.z) as u8;
        let k = (self.phase + 4 - ys % 4) % 4;
        let prefix = ["+", "+i", "-", "-i"][k as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.num_qubits() {
            let c = match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An ordered generating set with a cached exact-phase echelon basis.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    n: usize,
    generators: Vec<PauliOperator>,
    basis: Vec<PauliOperator>,
    /// Pivot column (in `(x | z)` order) of each basis row.
    pivots: Vec<usize>,
    pivot_row: HashMap<usize, usize>,
    /// Scalars in the group are the powers of `i^scalar_step`.
    scalar_step: u8,
}

fn gcd(a: u8, b: u8) -> u8 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl GeneratorSet {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            generators: Vec::new(),
            basis: Vec::new(),
            pivots: Vec::new(),
            pivot_row: HashMap::new(),
            scalar_step: 4,
        }
    }

    pub fn new(n: usize, generators: Vec<PauliOperator>) -> Result<Self, PauliError> {
        let mut g = Self::empty(n);
        for p in generators {
            g.push(p)?;
        }
        Ok(g)
    }

    pub fn push(&mut self, p: PauliOperator) -> Result<(), PauliError> {
        if p.num_qubits() != self.n {
            return Err(PauliError::LengthMismatch(self.n, p.num_qubits()));
        }
        if self
            .generators
            .iter()
            .any(|g| !g.commutes_unchecked(&p))
        {
            self.scalar_step = gcd(self.scalar_step, 2);
        }
        self.scalar_step = gcd(self.scalar_step, p.mul(&p).phase);
        let r = self.reduce(&p);
        match r.symplectic().first_one() {
            None => self.scalar_step = gcd(self.scalar_step, r.phase),
            Some(pivot) => {
                self.pivot_row.insert(pivot, self.basis.len());
                self.pivots.push(pivot);
                self.basis.push(r);
            }
        }
        self.generators.push(p);
        Ok(())
    }

    /// Multiplies by basis rows until the lowest set bit is not a pivot.
    fn reduce(&self, p: &PauliOperator) -> PauliOperator {
        let mut r = p.clone();
        let n = self.n;
        loop {
            let lowest = match (r.x.first_one(), r.z.first_one()) {
                (Some(i), _) => i,
                (None, Some(j)) => n + j,
                (None, None) => return r,
            };
            match self.pivot_row.get(&lowest) {
                Some(&row) => r = r.mul(&self.basis[row]),
                None => return r,
            }
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Independent operators spanning the group modulo phase.
    pub fn basis(&self) -> &[PauliOperator] {
        &self.basis
    }

    /// Rank modulo phase.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether `p` is in the group; with `mod_phase` the phase is ignored.
    pub fn member(&self, p: &PauliOperator, mod_phase: bool) -> bool {
        if p.num_qubits() != self.n {
            return false;
        }
        let r = self.reduce(p);
        if !r.is_identity_mod_phase() {
            return false;
        }
        mod_phase || r.phase.is_multiple_of(self.scalar_step)
    }

    /// First generator of `other` not in this group (mod phase).
    pub fn missing_from(&self, other: &GeneratorSet) -> Option<usize> {
        other
            .generators
            .iter()
            .position(|g| !self.member(g, true))
    }

    pub fn contains_group(&self, other: &GeneratorSet) -> bool {
        self.missing_from(other).is_none()
    }

    pub fn same_span(&self, other: &GeneratorSet) -> bool {
        self.rank() == other.rank() && self.contains_group(other)
    }

    /// First anticommuting pair of generators, if any.
    pub fn anticommuting_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.generators.len() {
            for j in i + 1..self.generators.len() {
                if !self.generators[i].commutes_unchecked(&self.generators[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_abelian(&self) -> bool {
        // the basis spans the group, so checking it suffices
        self.basis
            .iter()
            .enumerate()
            .all(|(i, a)| self.basis[i + 1..].iter().all(|b| a.commutes_unchecked(b)))
    }

    /// Rows `(x | z)` of the generators.
    pub fn symplectic_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(
            2 * self.n,
            self.generators.iter().map(|g| g.symplectic()).collect(),
        )
    }

    pub fn x_part_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.n, self.generators.iter().map(|g| g.x.clone()).collect())
    }

    pub fn z_part_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.n, self.generators.iter().map(|g| g.z.clone()).collect())
    }

    /// Generators that are purely X-type (nonzero).
    pub fn x_type(&self) -> impl Iterator<Item = &PauliOperator> {
        self.generators
            .iter()
            .filter(|g| g.z.is_zero() && !g.x.is_zero())
    }

    pub fn z_type(&self) -> impl Iterator<Item = &PauliOperator> {
        self.generators
            .iter()
            .filter(|g| g.x.is_zero() && !g.z.is_zero())
    }

    /// Group generated by the union.
    pub fn join(&self, other: &GeneratorSet) -> Result<GeneratorSet, PauliError> {
        let mut g = self.clone();
        for p in &other.generators {
            g.push(p.clone())?;
        }
        Ok(g)
    }
}

/// All Pauli operators commuting with every element of `g`, modulo phase.
pub fn centralizer(g: &GeneratorSet) -> GeneratorSet {
    let n = g.num_qubits();
    let rows = g.basis().iter().map(|p| p.z.concat(&p.x)).collect();
    let m = BitMatrix::from_rows(2 * n, rows);
    let gens = m
        .nullspace()
        .iter()
        .map(PauliOperator::from_symplectic)
        .collect();
    GeneratorSet::new(n, gens).expect("lengths agree")
}

/// Elements of `g` commuting with all of `g`, modulo phase.
pub fn center(g: &GeneratorSet) -> GeneratorSet {
    let n = g.num_qubits();
    let b = g.basis();
    let m = b.len();
    let gram_rows = (0..m)
        .map(|i| {
            BitRow::from_indices(
                m,
                (0..m).filter(|&j| !b[i].commutes_unchecked(&b[j])),
            )
        })
        .collect();
    let gram = BitMatrix::from_rows(m, gram_rows);
    let gens = gram
        .nullspace()
        .iter()
        .map(|c| {
            c.ones()
                .fold(PauliOperator::identity(n), |acc, i| acc.mul(&b[i]))
                .canonical_phase()
        })
        .collect();
    GeneratorSet::new(n, gens).expect("lengths agree")
}

/// Canonical generators `X_i, Z_i` with `Z_1..Z_r` spanning `S1`,
/// `Z_1..Z_s` spanning `S2` and `G1 = ⟨Z_1..Z_r, X_j, Z_j : r < j ≤ t⟩`.
#[derive(Clone, Debug)]
pub struct SymplecticBasis {
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub x: Vec<PauliOperator>,
    pub z: Vec<PauliOperator>,
}

fn sform(a: &BitRow, b: &BitRow) -> bool {
    let n = a.len() / 2;
    a.slice(0, n).dot(&b.slice(n, n)) != a.slice(n, n).dot(&b.slice(0, n))
}

/// Makes `u` orthogonal to the hyperbolic pair `(x, z)` with `⟨x, z⟩ = 1`.
fn project(u: &mut BitRow, x: &BitRow, z: &BitRow) {
    let ux = sform(u, x);
    let uz = sform(u, z);
    if ux {
        u.xor_assign(z);
    }
    if uz {
        u.xor_assign(x);
    }
}

fn extend_independent(span: &mut Vec<BitRow>, candidates: impl Iterator<Item = BitRow>) -> Vec<BitRow> {
    let mut added = Vec::new();
    for c in candidates {
        let m = BitMatrix::from_rows(c.len(), span.clone());
        if !m.echelon().contains(&c) {
            span.push(c.clone());
            added.push(c);
        }
    }
    added
}

pub fn canonical_basis(
    s1: &GeneratorSet,
    s2: &GeneratorSet,
    g1: &GeneratorSet,
) -> Result<SymplecticBasis, PauliError> {
    let n = g1.num_qubits();
    for g in [s1, s2] {
        if g.num_qubits() != n {
            return Err(PauliError::LengthMismatch(n, g.num_qubits()));
        }
    }
    if let Some(i) = s2.missing_from(s1) {
        return Err(PauliError::NotIncluded {
            what: "S1 ⊆ S2".into(),
            generator: s1.generators()[i].to_string(),
        });
    }
    if let Some(i) = g1.missing_from(s2) {
        return Err(PauliError::NotIncluded {
            what: "S2 ⊆ G1".into(),
            generator: s2.generators()[i].to_string(),
        });
    }
    if let Some((i, j)) = s2.anticommuting_pair() {
        return Err(PauliError::NotIncluded {
            what: "S2 abelian".into(),
            generator: format!("{} / {}", s2.generators()[i], s2.generators()[j]),
        });
    }
    let c = center(g1);
    if !c.same_span(s1) {
        let witness = match c.missing_from(s1) {
            Some(i) => format!("S1 generator {} is not central in G1", s1.generators()[i]),
            None => format!("rank(center(G1)) = {} but rank(S1) = {}", c.rank(), s1.rank()),
        };
        return Err(PauliError::CenterMismatch(witness));
    }

    let mut zs: Vec<BitRow> = s1.basis().iter().map(|p| p.symplectic()).collect();
    let r = zs.len();
    let mut span = zs.clone();
    zs.extend(extend_independent(
        &mut span,
        s2.generators().iter().map(|p| p.symplectic()),
    ));
    let s = zs.len();
    let mut pool = extend_independent(&mut span, g1.generators().iter().map(|p| p.symplectic()));
    let mut xs: Vec<Option<BitRow>> = vec![None; s];

    // partners for Z_{r+1..s} inside G1
    for i in r..s {
        let k = pool
            .iter()
            .position(|w| sform(w, &zs[i]))
            .ok_or_else(|| PauliError::Internal(format!("no partner for Z_{}", i + 1)))?;
        let x = pool.remove(k);
        let z = zs[i].clone();
        for u in pool.iter_mut() {
            project(u, &x, &z);
        }
        for zj in zs[i + 1..].iter_mut() {
            project(zj, &x, &z);
        }
        xs[i] = Some(x);
    }
    // remaining gauge pairs
    let mut gauge: Vec<(BitRow, BitRow)> = Vec::new();
    pool.retain(|u| !u.is_zero());
    while let Some(a) = pool.first().cloned() {
        pool.remove(0);
        let k = pool
            .iter()
            .position(|w| sform(w, &a))
            .ok_or_else(|| PauliError::Internal("gauge vector without partner".into()))?;
        let b = pool.remove(k);
        for u in pool.iter_mut() {
            project(u, &a, &b);
        }
        pool.retain(|u| !u.is_zero());
        gauge.push((a, b));
    }
    let t = s + gauge.len();

    // complement: partners for Z_1..Z_r and the logical pairs
    let mut rest: Vec<BitRow> = (0..2 * n).map(|i| BitRow::from_indices(2 * n, [i])).collect();
    let mut pairs: Vec<(BitRow, BitRow)> = (r..s)
        .map(|i| (xs[i].clone().unwrap(), zs[i].clone()))
        .collect();
    pairs.extend(gauge.iter().cloned());
    for u in rest.iter_mut() {
        for (x, z) in &pairs {
            project(u, x, z);
        }
    }
    for i in 0..r {
        let k = rest
            .iter()
            .position(|w| sform(w, &zs[i]))
            .ok_or_else(|| PauliError::Internal(format!("no partner for Z_{}", i + 1)))?;
        let x = rest.remove(k);
        let z = zs[i].clone();
        for u in rest.iter_mut() {
            project(u, &x, &z);
        }
        for zj in zs[i + 1..r].iter_mut() {
            project(zj, &x, &z);
        }
        xs[i] = Some(x);
    }
    let mut logical = Vec::new();
    rest.retain(|u| !u.is_zero());
    while let Some(a) = rest.first().cloned() {
        rest.remove(0);
        let k = rest
            .iter()
            .position(|w| sform(w, &a))
            .ok_or_else(|| PauliError::Internal("degenerate complement".into()))?;
        let b = rest.remove(k);
        for u in rest.iter_mut() {
            project(u, &a, &b);
        }
        rest.retain(|u| !u.is_zero());
        logical.push((a, b));
    }

    let mut xv: Vec<BitRow> = xs.into_iter().map(|x| x.unwrap()).collect();
    let mut zv = zs;
    for (a, b) in gauge.into_iter().chain(logical) {
        xv.push(a);
        zv.push(b);
    }
    if xv.len() != n {
        return Err(PauliError::Internal(format!(
            "built {} pairs for {n} qubits",
            xv.len()
        )));
    }
    for i in 0..n {
        for j in 0..n {
            let ok = sform(&xv[i], &zv[j]) == (i == j)
                && (i == j || (!sform(&xv[i], &xv[j]) && !sform(&zv[i], &zv[j])));
            if !ok {
                return Err(PauliError::Internal(format!(
                    "commutation relation violated at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(SymplecticBasis {
        r,
        s,
        t,
        x: xv.iter().map(PauliOperator::from_symplectic).collect(),
        z: zv.iter().map(PauliOperator::from_symplectic).collect(),
    })
}

/// Check-matrix text: `PAULI <n> <rows>` then `<x-bits> <z-bits>` per row.
pub fn to_check_matrix_text(n: usize, rows: &[PauliOperator]) -> String {
    let mut out = format!("PAULI {n} {}\n", rows.len());
    for p in rows {
        out.push_str(&p.x.to_01());
        out.push(' ');
        out.push_str(&p.z.to_01());
        out.push('\n');
    }
    out
}

pub fn parse_check_matrix_text(text: &str) -> Result<(usize, Vec<PauliOperator>), PauliError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| PauliError::Parse("empty input".into()))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (n, rows) = match parts.as_slice() {
        ["PAULI", n, r] => (
            n.parse::<usize>()
                .map_err(|e| PauliError::Parse(format!("qubit count: {e}")))?,
            r.parse::<usize>()
                .map_err(|e| PauliError::Parse(format!("row count: {e}")))?,
        ),
        _ => return Err(PauliError::Parse(format!("bad header '{header}'"))),
    };
    let mut ops = Vec::with_capacity(rows);
    for (i, line) in lines.enumerate() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [xs, zs] = parts.as_slice() else {
            return Err(PauliError::Parse(format!("row {i}: expected two fields")));
        };
        let x = BitRow::parse01(xs)
            .ok_or_else(|| PauliError::Parse(format!("row {i}: bad x bits")))?;
        let z = BitRow::parse01(zs)
            .ok_or_else(|| PauliError::Parse(format!("row {i}: bad z bits")))?;
        if x.len() != n || z.len() != n {
            return Err(PauliError::Parse(format!("row {i}: expected {n} bits")));
        }
        ops.push(PauliOperator::hermitian(x, z));
    }
    if ops.len() != rows {
        return Err(PauliError::Parse(format!(
            "header declares {rows} rows, found {}",
            ops.len()
        )));
    }
    Ok((n, ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    type Mat = Vec<Vec<Complex64>>;

    fn kron(a: &Mat, b: &Mat) -> Mat {
        let (n, m) = (a.len(), b.len());
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n * m]; n * m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..m {
                        out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    fn matmul(a: &Mat, b: &Mat) -> Mat {
        let n = a.len();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    // Independent dense representation built letter by letter.
    fn dense(p: &PauliOperator) -> Mat {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let i2 = vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]];
        let x = vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]];
        let z = vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]];
        let mut m: Mat = vec![vec![c(1., 0.)]];
        for q in 0..p.num_qubits() {
            let f = match (p.x.get(q), p.z.get(q)) {
                (false, false) => i2.clone(),
                (true, false) => x.clone(),
                (false, true) => z.clone(),
                (true, true) => matmul(&x, &z),
            };
            m = kron(&m, &f);
        }
        let ph = [c(1., 0.), c(0., 1.), c(-1., 0.), c(0., -1.)][p.phase as usize];
        m.iter().map(|r| r.iter().map(|v| v * ph).collect()).collect()
    }

    fn close(a: &Mat, b: &Mat) -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| (x - y).norm() < 1e-12)
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliOperator> {
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(any::<bool>(), n),
            0u8..4,
        )
            .prop_map(|(x, z, phase)| PauliOperator {
                x: BitRow::from_bools(&x),
                z: BitRow::from_bools(&z),
                phase,
            })
    }

    fn arb_triple() -> impl Strategy<Value = (PauliOperator, PauliOperator, PauliOperator)> {
        (1usize..=4).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
    }

    fn arb_set() -> impl Strategy<Value = Vec<PauliOperator>> {
        (1usize..=6).prop_flat_map(|n| prop::collection::vec(arb_pauli(n), 0..8))
    }

    #[test]
    fn basic_commutation() {
        let xq = PauliOperator::parse("XI").unwrap();
        let zq = PauliOperator::parse("ZI").unwrap();
        assert!(!xq.commutes(&zq).unwrap());
        let xx = PauliOperator::parse("XX").unwrap();
        let zz = PauliOperator::parse("ZZ").unwrap();
        assert!(xx.commutes(&zz).unwrap());
        assert!(xx.commutes(&PauliOperator::parse("XX").unwrap()).unwrap());
        assert!(xx.commutes(&PauliOperator::parse("X").unwrap()).is_err());
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["+XYZI", "-iYY", "+iZ", "-X"] {
            assert_eq!(PauliOperator::parse(s).unwrap().to_string(), s);
        }
        assert!(PauliOperator::parse("Y").unwrap().is_hermitian());
    }

    #[test]
    fn centralizer_of_all_x_is_x_type() {
        let n = 4;
        let g = GeneratorSet::new(
            n,
            (0..n).map(|q| PauliOperator::x_type(BitRow::from_indices(n, [q]))).collect(),
        )
        .unwrap();
        let c = centralizer(&g);
        assert_eq!(c.rank(), n);
        assert!(c.generators().iter().all(|p| p.z.is_zero()));
    }

    #[test]
    fn centralizer_of_full_group_is_trivial() {
        let n = 3;
        let mut gens = Vec::new();
        for q in 0..n {
            gens.push(PauliOperator::x_type(BitRow::from_indices(n, [q])));
            gens.push(PauliOperator::z_type(BitRow::from_indices(n, [q])));
        }
        let g = GeneratorSet::new(n, gens).unwrap();
        assert_eq!(centralizer(&g).rank(), 0);
        assert_eq!(center(&g).rank(), 0);
    }

    #[test]
    fn center_of_single_pair_is_trivial() {
        let g = GeneratorSet::new(
            2,
            vec![
                PauliOperator::parse("XI").unwrap(),
                PauliOperator::parse("ZI").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(center(&g).rank(), 0);
        assert!(g.member(&PauliOperator::parse("-II").unwrap(), false));
    }

    #[test]
    fn exact_phase_membership() {
        let g = GeneratorSet::new(2, vec![PauliOperator::parse("XX").unwrap(), PauliOperator::parse("ZZ").unwrap()]).unwrap();
        assert!(g.member(&PauliOperator::parse("-YY").unwrap(), false));
        assert!(!g.member(&PauliOperator::parse("YY").unwrap(), false));
        assert!(g.member(&PauliOperator::parse("YY").unwrap(), true));
        assert!(g.member(&PauliOperator::identity(2), false));
    }

    #[test]
    fn canonical_basis_abelian_case() {
        let g = GeneratorSet::new(3, vec![PauliOperator::parse("ZZI").unwrap(), PauliOperator::parse("IZZ").unwrap()]).unwrap();
        let b = canonical_basis(&g, &g, &g).unwrap();
        assert_eq!((b.r, b.s, b.t), (2, 2, 2));
    }

    #[test]
    fn canonical_basis_rejects_non_inclusion() {
        let s = GeneratorSet::new(2, vec![PauliOperator::parse("ZZ").unwrap()]).unwrap();
        let g = GeneratorSet::new(2, vec![PauliOperator::parse("XX").unwrap()]).unwrap();
        let err = canonical_basis(&s, &s, &g).unwrap_err();
        assert!(matches!(err, PauliError::NotIncluded { .. }));
    }

    #[test]
    fn check_matrix_text_round_trip() {
        let ops = vec![
            PauliOperator::parse("XXI").unwrap(),
            PauliOperator::parse("IZZ").unwrap(),
        ];
        let text = to_check_matrix_text(3, &ops);
        assert_eq!(text, "PAULI 3 2\n110 000\n000 011\n");
        let (n, back) = parse_check_matrix_text(&text).unwrap();
        assert_eq!(n, 3);
        assert_eq!(to_check_matrix_text(n, &back), text);
        assert!(parse_check_matrix_text("PAULI 3 3\n110 000\n").is_err());
    }

    proptest! {
        #[test]
        fn product_matches_matrix_oracle((a, b, c) in arb_triple()) {
            prop_assert!(close(&dense(&a.mul(&b)), &matmul(&dense(&a), &dense(&b))));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn commutation_symmetric((a, b, _c) in arb_triple()) {
            prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
            prop_assert!(a.commutes(&a).unwrap());
            let ab = matmul(&dense(&a), &dense(&b));
            let ba = matmul(&dense(&b), &dense(&a));
            prop_assert_eq!(a.commutes(&b).unwrap(), close(&ab, &ba));
        }

        #[test]
        fn member_invariant_under_permutation(gens in arb_set(), seed in any::<u64>(), pick in any::<u64>()) {
            let n = gens.first().map_or(1, |g| g.num_qubits());
            let g = GeneratorSet::new(n, gens.clone()).unwrap();
            let mut perm = gens.clone();
            let len = perm.len();
            for i in (1..len).rev() {
                let j = ((seed >> (i % 60)) as usize + i * 7) % (i + 1);
                perm.swap(i, j);
            }
            let h = GeneratorSet::new(n, perm).unwrap();
            let mut probe = PauliOperator::identity(n);
            for (i, p) in gens.iter().enumerate() {
                if pick >> (i % 64) & 1 == 1 {
                    probe = probe.mul(p);
                }
            }
            prop_assert!(g.member(&probe, false));
            prop_assert!(h.member(&probe, false));
            let flipped = PauliOperator { phase: (probe.phase + 1) % 4, ..probe.clone() };
            prop_assert_eq!(g.member(&flipped, false), h.member(&flipped, false));
            prop_assert_eq!(g.rank(), h.rank());
        }

        #[test]
        fn centralizer_rank(gens in arb_set()) {
            let n = gens.first().map_or(1, |g| g.num_qubits());
            let g = GeneratorSet::new(n, gens).unwrap();
            let c = centralizer(&g);
            prop_assert_eq!(c.rank(), 2 * n - g.rank());
            for p in c.generators() {
                for q in g.generators() {
                    prop_assert!(p.commutes(q).unwrap());
                }
            }
            let z = center(&g);
            prop_assert!(g.contains_group(&z));
            prop_assert!(c.contains_group(&z));
        }
    }
}
