//! Colored simplicial lattices: the 2D and 3D families, closure to a sphere,
//! simplex sets, supports and the dual colex view.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::BitRow;
use crate::report::{Check, Report};

/// Color index in `0..=D`.
pub type Color = u8;

pub const COLOR_NAMES: [&str; 4] = ["red", "green", "blue", "yellow"];

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed complex: {0}")]
    Malformed(String),
    #[error("boundary of the open complex is not a colored simplex: {0}")]
    InvalidBoundary(String),
    #[error("complex is not closed")]
    NotClosed,
    #[error("complex is already closed")]
    AlreadyClosed,
    #[error("simplex {0:?} is not in any delta set")]
    UnknownSimplex(Vec<usize>),
    #[error("no triad for top simplex {0:?}: {1}")]
    MissingTriad(Vec<usize>, String),
    #[error("lattice failed validation: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Original,
    Closure,
    Subdivision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub color: Color,
    /// Lattice position scaled by 4 (zero for abstract vertices).
    pub position: [i64; 3],
    pub origin: Origin,
}

/// Sorted list of vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        Simplex::new(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let k = self.0.len();
        (1u32..(1 << k)).map(move |mask| {
            Simplex(
                (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl From<Vec<usize>> for Simplex {
    fn from(v: Vec<usize>) -> Self {
        Simplex::new(v)
    }
}

/// Qubits are the top simplices with at least one non-closure vertex.
#[derive(Clone, Debug)]
pub struct QubitIndexing {
    pub qubits: Vec<Simplex>,
    pub index: HashMap<Simplex, usize>,
}

#[derive(Clone, Debug)]
pub struct ColoredComplex {
    dim: usize,
    vertices: Vec<Vertex>,
    top: Vec<Simplex>,
    closed: bool,
    /// Every face mapped to the indices of the top simplices containing it.
    faces: BTreeMap<Simplex, Vec<usize>>,
    qubits: Option<QubitIndexing>,
    /// Qubit index of each top simplex, if any.
    top_qubit: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(rename = "2d")]
    TwoD,
    #[serde(rename = "3d")]
    ThreeD,
}

impl Family {
    pub fn dim(self) -> usize {
        match self {
            Family::TwoD => 2,
            Family::ThreeD => 3,
        }
    }

    pub fn expected_qubits(self, n: usize) -> usize {
        match self {
            Family::TwoD => 1 + 3 * n + 3 * n * n,
            Family::ThreeD => 1 + 4 * n + 6 * n * n + 4 * n * n * n,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "2d" | "2" => Ok(Family::TwoD),
            "3d" | "3" => Ok(Family::ThreeD),
            other => Err(LatticeError::InvalidParameter(format!(
                "unknown family '{other}' (expected 2d or 3d)"
            ))),
        }
    }
}

impl ColoredComplex {
    /// Assembles a complex and its face index. Coloring is not enforced here;
    /// see [`validate_complex`].
    pub fn new(
        dim: usize,
        vertices: Vec<Vertex>,
        top: Vec<Simplex>,
    ) -> Result<Self, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::Malformed("dimension must be positive".into()));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.id != i {
                return Err(LatticeError::Malformed(format!(
                    "vertex ids must be 0..{} in order; found {} at position {i}",
                    vertices.len(),
                    v.id
                )));
            }
            if v.color as usize > dim {
                return Err(LatticeError::Malformed(format!(
                    "vertex {i} has color {} outside 0..={dim}",
                    v.color
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for s in &top {
            if s.len() != dim + 1 {
                return Err(LatticeError::Malformed(format!(
                    "top simplex {s:?} does not have {} distinct vertices",
                    dim + 1
                )));
            }
            if let Some(&v) = s.vertices().iter().find(|&&v| v >= vertices.len()) {
                return Err(LatticeError::Malformed(format!(
                    "top simplex {s:?} references unknown vertex {v}"
                )));
            }
            if !seen.insert(s.clone()) {
                return Err(LatticeError::Malformed(format!("duplicate top simplex {s:?}")));
            }
        }
        let mut faces: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
        for (i, s) in top.iter().enumerate() {
            for f in s.faces() {
                faces.entry(f).or_default().push(i);
            }
        }
        let closed = !top.is_empty()
            && faces
                .iter()
                .filter(|(f, _)| f.len() == dim)
                .all(|(_, c)| c.len() == 2);
        let mut cx = ColoredComplex {
            dim,
            vertices,
            top,
            closed,
            faces,
            qubits: None,
            top_qubit: Vec::new(),
        };
        cx.top_qubit = vec![None; cx.top.len()];
        if closed {
            let mut q: Vec<(Simplex, usize)> = cx
                .top
                .iter()
                .enumerate()
                .filter(|(_, s)| cx.has_non_closure_vertex(s))
                .map(|(i, s)| (s.clone(), i))
                .collect();
            q.sort();
            let mut index = HashMap::new();
            for (qi, (s, ti)) in q.iter().enumerate() {
                index.insert(s.clone(), qi);
                cx.top_qubit[*ti] = Some(qi);
            }
            cx.qubits = Some(QubitIndexing {
                qubits: q.into_iter().map(|(s, _)| s).collect(),
                index,
            });
        }
        Ok(cx)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn top_simplices(&self) -> &[Simplex] {
        &self.top
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn qubit_indexing(&self) -> Option<&QubitIndexing> {
        self.qubits.as_ref()
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.as_ref().map_or(0, |q| q.qubits.len())
    }

    pub fn qubit_simplex(&self, q: usize) -> &Simplex {
        &self.qubits.as_ref().expect("closed complex").qubits[q]
    }

    pub fn color(&self, v: usize) -> Color {
        self.vertices[v].color
    }

    /// Bitmask of the colors of a simplex.
    pub fn color_mask(&self, s: &Simplex) -> u32 {
        s.vertices()
            .iter()
            .fold(0, |m, &v| m | 1 << self.vertices[v].color)
    }

    pub fn full_color_mask(&self) -> u32 {
        (1 << (self.dim + 1)) - 1
    }

    pub fn is_face(&self, s: &Simplex) -> bool {
        self.faces.contains_key(s)
    }

    /// Indices of the top simplices containing `s`.
    pub fn cofaces(&self, s: &Simplex) -> &[usize] {
        self.faces.get(s).map_or(&[], |v| v.as_slice())
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.keys()
    }

    fn has_non_closure_vertex(&self, s: &Simplex) -> bool {
        s.vertices()
            .iter()
            .any(|&v| self.vertices[v].origin != Origin::Closure)
    }

    /// d-simplices with at least one non-closure vertex, lexicographic order.
    pub fn delta_set(&self, d: usize) -> Result<Vec<Simplex>, LatticeError> {
        if !self.closed {
            return Err(LatticeError::NotClosed);
        }
        if d > self.dim {
            return Err(LatticeError::InvalidParameter(format!(
                "d = {d} exceeds dimension {}",
                self.dim
            )));
        }
        Ok(self
            .faces
            .keys()
            .filter(|f| f.len() == d + 1 && self.has_non_closure_vertex(f))
            .cloned()
            .collect())
    }

    /// Qubits (top simplices) containing `s`.
    pub fn support(&self, s: &Simplex) -> Result<BitRow, LatticeError> {
        if !self.closed {
            return Err(LatticeError::NotClosed);
        }
        if s.len() > self.dim || !self.has_non_closure_vertex(s) {
            return Err(LatticeError::UnknownSimplex(s.vertices().to_vec()));
        }
        let Some(cof) = self.faces.get(s) else {
            return Err(LatticeError::UnknownSimplex(s.vertices().to_vec()));
        };
        Ok(BitRow::from_indices(
            self.num_qubits(),
            cof.iter().filter_map(|&t| self.top_qubit[t]),
        ))
    }

    /// Dual colex d-cells, one per simplex in the (D−d) delta set.
    pub fn colex_cells(&self, d: usize) -> Result<Vec<(Simplex, BitRow)>, LatticeError> {
        if d == 0 || d > self.dim {
            return Err(LatticeError::InvalidParameter(format!(
                "cell dimension {d} outside 1..={}",
                self.dim
            )));
        }
        self.delta_set(self.dim - d)?
            .into_iter()
            .map(|s| {
                let v = self.support(&s)?;
                Ok((s, v))
            })
            .collect()
    }

    /// Parity of the axis triad `(a, b, c)` of a 3D family tetrahedron,
    /// recovered from vertex positions. `true` for even permutations.
    pub fn triad_parity(&self, s: &Simplex) -> Result<bool, LatticeError> {
        let fail = |why: &str| LatticeError::MissingTriad(s.vertices().to_vec(), why.to_string());
        if self.dim != 3 || s.len() != 4 {
            return Err(fail("not a tetrahedron of a 3D complex"));
        }
        if s
            .vertices()
            .iter()
            .any(|&v| self.vertices[v].origin != Origin::Original)
        {
            return Err(fail("contains non-lattice vertices"));
        }
        let pos: Vec<[i64; 3]> = s.vertices().iter().map(|&v| self.vertices[v].position).collect();
        let integer: Vec<&[i64; 3]> = pos
            .iter()
            .filter(|p| p.iter().all(|c| c.rem_euclid(4) == 0))
            .collect();
        let half: Vec<&[i64; 3]> = pos
            .iter()
            .filter(|p| p.iter().all(|c| c.rem_euclid(4) == 2))
            .collect();
        if integer.len() != 2 || half.len() != 2 {
            return Err(fail("vertex positions do not match the BCC pattern"));
        }
        let axis_of = |u: &[i64; 3], w: &[i64; 3]| -> Option<usize> {
            let diff: Vec<i64> = (0..3).map(|k| (w[k] - u[k]).abs()).collect();
            match diff.as_slice() {
                [4, 0, 0] => Some(0),
                [0, 4, 0] => Some(1),
                [0, 0, 4] => Some(2),
                _ => None,
            }
        };
        let a = axis_of(integer[0], integer[1]).ok_or_else(|| fail("integer edge is not axial"))?;
        let c = axis_of(half[0], half[1]).ok_or_else(|| fail("half-integer edge is not axial"))?;
        if a == c {
            return Err(fail("degenerate triad"));
        }
        let b = 3 - a - c;
        Ok(matches!((a, b, c), (0, 1, 2) | (1, 2, 0) | (2, 0, 1)))
    }

    pub fn to_json(&self) -> Result<String, LatticeError> {
        Ok(serde_json::to_string_pretty(&ComplexJson::from(self))?)
    }

    /// Parses and validates a complex; any failed check is an error.
    pub fn from_json(s: &str) -> Result<Self, LatticeError> {
        let j: ComplexJson = serde_json::from_str(s)?;
        let cx = ColoredComplex::new(
            j.dim,
            j.vertices
                .into_iter()
                .map(|v| Vertex {
                    id: v.id,
                    color: v.color,
                    position: v.pos,
                    origin: v.origin,
                })
                .collect(),
            j.top_simplices.into_iter().map(Simplex::new).collect(),
        )?;
        let report = validate_complex(&cx);
        if let Some(fail) = report.first_failure() {
            return Err(LatticeError::Invalid(format!(
                "{}: {}",
                fail.check_name,
                fail.witness.clone().unwrap_or_default()
            )));
        }
        Ok(cx)
    }

    pub fn load(path: &Path) -> Result<Self, LatticeError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Replaces one vertex's color; used to build corrupted fixtures.
    pub fn with_recolored_vertex(&self, v: usize, color: Color) -> Result<Self, LatticeError> {
        let mut vs = self.vertices.clone();
        vs.get_mut(v)
            .ok_or_else(|| LatticeError::InvalidParameter(format!("no vertex {v}")))?
            .color = color;
        ColoredComplex::new(self.dim, vs, self.top.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    color: Color,
    pos: [i64; 3],
    origin: Origin,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    #[serde(rename = "D")]
    dim: usize,
    vertices: Vec<VertexJson>,
    top_simplices: Vec<Vec<usize>>,
}

impl From<&ColoredComplex> for ComplexJson {
    fn from(cx: &ColoredComplex) -> Self {
        ComplexJson {
            dim: cx.dim,
            vertices: cx
                .vertices
                .iter()
                .map(|v| VertexJson {
                    id: v.id,
                    color: v.color,
                    pos: v.position,
                    origin: v.origin,
                })
                .collect(),
            top_simplices: cx.top.iter().map(|s| s.vertices().to_vec()).collect(),
        }
    }
}

// Half-space normals of the tetrahedral region.
const L: [[i64; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];

fn color_3d(p: [i64; 3]) -> Color {
    match ((p[0] + p[1] + p[2]) / 2).rem_euclid(4) {
        0 => 0,
        2 => 1,
        3 => 2,
        _ => 3,
    }
}

/// Open 3D lattice: BCC tetrahedra inside a large tetrahedron of size `n`.
pub fn build_3d_tetrahedron(n: usize) -> Result<ColoredComplex, LatticeError> {
    if n == 0 {
        return Err(LatticeError::InvalidParameter("n must be at least 1".into()));
    }
    let n = n as i64;
    let bound = [8 * (n - 1), 2, 4, 6];
    let inside = |p: &[i64; 3]| {
        (0..4).all(|k| L[k][0] * p[0] + L[k][1] * p[1] + L[k][2] * p[2] <= bound[k])
    };
    let r = 4 * n + 8;
    let mut tets: BTreeSet<Vec<[i64; 3]>> = BTreeSet::new();
    let unit = |k: usize| {
        let mut u = [0i64; 3];
        u[k] = 4;
        u
    };
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for x0 in (-r..=r).step_by(4) {
        for x1 in (-r..=r).step_by(4) {
            for x2 in (-r..=r).step_by(4) {
                let x = [x0, x1, x2];
                for perm in perms {
                    let (a, b, c) = (unit(perm[0]), unit(perm[1]), unit(perm[2]));
                    for s in [1i64, -1] {
                        let v = [
                            x,
                            std::array::from_fn(|q| x[q] + a[q]),
                            std::array::from_fn(|q| x[q] + (a[q] + s * b[q] + c[q]) / 2),
                            std::array::from_fn(|q| x[q] + (a[q] + s * b[q] - c[q]) / 2),
                        ];
                        if v.iter().all(inside) {
                            let mut key = v.to_vec();
                            key.sort();
                            tets.insert(key);
                        }
                    }
                }
            }
        }
    }
    let points: BTreeSet<[i64; 3]> = tets.iter().flatten().copied().collect();
    let id: HashMap<[i64; 3], usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let vertices = points
        .iter()
        .enumerate()
        .map(|(i, p)| Vertex {
            id: i,
            color: color_3d(*p),
            position: *p,
            origin: Origin::Original,
        })
        .collect();
    let top = tets
        .iter()
        .map(|t| Simplex::new(t.iter().map(|p| id[p]).collect()))
        .collect();
    ColoredComplex::new(3, vertices, top)
}

/// Open 2D lattice: a 3-colored triangulated triangle of size `n`.
pub fn build_2d_triangle(n: usize) -> Result<ColoredComplex, LatticeError> {
    if n == 0 {
        return Err(LatticeError::InvalidParameter("n must be at least 1".into()));
    }
    let n = n as i64;
    let inside = |i: i64, j: i64| i - j <= 1 && i + 2 * j < 3 * n && 2 * i + j >= 0;
    let r = 3 * n + 4;
    let mut points = BTreeSet::new();
    for i in -r..=r {
        for j in -r..=r {
            if inside(i, j) {
                points.insert((i, j));
            }
        }
    }
    let id: HashMap<(i64, i64), usize> =
        points.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let mut top = Vec::new();
    for i in -r - 1..=r {
        for j in -r - 1..=r {
            for tri in [
                [(i, j), (i + 1, j), (i, j + 1)],
                [(i + 1, j), (i, j + 1), (i + 1, j + 1)],
            ] {
                if tri.iter().all(|p| id.contains_key(p)) {
                    top.push(Simplex::new(tri.iter().map(|p| id[p]).collect()));
                }
            }
        }
    }
    let vertices = points
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| Vertex {
            id: k,
            color: (i - j).rem_euclid(3) as Color,
            position: [i, j, 0],
            origin: Origin::Original,
        })
        .collect();
    ColoredComplex::new(2, vertices, top)
}

/// Closes an open complex shaped like a colored D-simplex into a sphere by
/// attaching one new vertex per color.
pub fn close_to_sphere(m: &ColoredComplex) -> Result<ColoredComplex, LatticeError> {
    if m.closed {
        return Err(LatticeError::AlreadyClosed);
    }
    let dim = m.dim;
    let full = m.full_color_mask();
    if let Some(s) = m.top.iter().find(|s| m.color_mask(s) != full) {
        return Err(LatticeError::InvalidBoundary(format!(
            "top simplex {s:?} is not properly colored"
        )));
    }
    // faces of the boundary facets missing each color
    let mut boundary: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim + 1];
    for (f, cof) in &m.faces {
        if f.len() != dim {
            continue;
        }
        match cof.len() {
            1 => {
                let missing = (full & !m.color_mask(f)).trailing_zeros() as usize;
                for g in f.faces() {
                    boundary[missing].insert(g);
                }
            }
            2 => {}
            k => {
                return Err(LatticeError::InvalidBoundary(format!(
                    "facet {f:?} lies in {k} top simplices"
                )))
            }
        }
    }
    let base = m.vertices.len();
    let mut vertices = m.vertices.clone();
    for c in 0..=dim {
        vertices.push(Vertex {
            id: base + c,
            color: c as Color,
            position: [0; 3],
            origin: Origin::Closure,
        });
    }
    let mut top = m.top.clone();
    for f in m.faces.keys() {
        if f.len() > dim {
            continue;
        }
        let missing: Vec<usize> = (0..=dim)
            .filter(|c| (full & !m.color_mask(f)) >> c & 1 == 1)
            .collect();
        if missing.iter().all(|&c| boundary[c].contains(f)) {
            let mut v = f.vertices().to_vec();
            v.extend(missing.iter().map(|c| base + c));
            top.push(Simplex::new(v));
        }
    }
    top.push(Simplex::new((0..=dim).map(|c| base + c).collect()));
    let k = ColoredComplex::new(dim, vertices, top)?;
    if !k.closed {
        let bad = k
            .faces
            .iter()
            .find(|(f, c)| f.len() == dim && c.len() != 2)
            .map(|(f, c)| format!("facet {f:?} has {} cofacets after closure", c.len()))
            .unwrap_or_default();
        return Err(LatticeError::InvalidBoundary(bad));
    }
    if let Some(s) = k.top.iter().find(|s| k.color_mask(s) != full) {
        return Err(LatticeError::InvalidBoundary(format!(
            "closure simplex {s:?} is not properly colored"
        )));
    }
    Ok(k)
}

/// Builds a family lattice and closes it.
pub fn build_closed(family: Family, n: usize) -> Result<ColoredComplex, LatticeError> {
    let m = match family {
        Family::TwoD => build_2d_triangle(n)?,
        Family::ThreeD => build_3d_tetrahedron(n)?,
    };
    close_to_sphere(&m)
}

/// Structural checks on a complex. Failures carry a witness.
pub fn validate_complex(k: &ColoredComplex) -> Report {
    let mut report = Report::default();

    let bad_color = k.all_faces().find(|f| k.color_mask(f).count_ones() as usize != f.len());
    report.push(Check::from_witness(
        "proper_coloring",
        bad_color.map(|f| {
            let cols: Vec<Color> = f.vertices().iter().map(|&v| k.color(v)).collect();
            format!("simplex {f:?} has colors {cols:?}")
        }),
    ));

    if !k.closed {
        report.push(Check::skipped("pseudomanifold", "complex is open"));
        return report;
    }
    let bad_pm = k
        .faces
        .iter()
        .find(|(f, c)| f.len() == k.dim && c.len() != 2);
    report.push(Check::from_witness(
        "pseudomanifold",
        bad_pm.map(|(f, c)| format!("facet {f:?} lies in {} top simplices", c.len())),
    ));

    if k.dim >= 2 {
        let odd = k
            .colex_cells(2)
            .ok()
            .and_then(|cells| cells.into_iter().find(|(_, v)| v.count_ones() % 2 == 1));
        report.push(Check::from_witness(
            "two_cell_evenness",
            odd.map(|(s, v)| format!("2-cell dual to {s:?} has {} qubits", v.count_ones())),
        ));
    }

    let mut overlap = None;
    'outer: for d in 0..k.dim {
        let Ok(set) = k.delta_set(d) else { break };
        let mut by_color: BTreeMap<u32, Vec<(Simplex, BitRow)>> = BTreeMap::new();
        for s in set {
            if let Ok(v) = k.support(&s) {
                by_color.entry(k.color_mask(&s)).or_default().push((s, v));
            }
        }
        for group in by_color.values() {
            let mut acc = BitRow::zeros(k.num_qubits());
            for (s, v) in group {
                if acc.and_count(v) > 0 {
                    overlap = Some(format!("cell dual to {s:?} overlaps another cell of its color set"));
                    break 'outer;
                }
                acc.xor_assign(v);
            }
        }
    }
    report.push(Check::from_witness("color_disjointness", overlap));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(k: &ColoredComplex) -> Vec<usize> {
        (0..=k.dim()).map(|d| k.delta_set(d).unwrap().len()).collect()
    }

    #[test]
    fn single_simplex_at_n1() {
        let m2 = build_2d_triangle(1).unwrap();
        assert_eq!(m2.top_simplices().len(), 1);
        let m3 = build_3d_tetrahedron(1).unwrap();
        assert_eq!(m3.top_simplices().len(), 1);
        assert_eq!(m3.vertices().len(), 4);
        let cols: BTreeSet<Color> = m3.vertices().iter().map(|v| v.color).collect();
        assert_eq!(cols.len(), 4);
    }

    #[test]
    fn closure_sizes() {
        let k2 = build_closed(Family::TwoD, 1).unwrap();
        assert_eq!((k2.vertices().len(), k2.top_simplices().len()), (6, 8));
        let k3 = build_closed(Family::ThreeD, 1).unwrap();
        assert_eq!((k3.vertices().len(), k3.top_simplices().len()), (8, 16));
    }

    #[test]
    fn delta_sizes_n1() {
        assert_eq!(sizes(&build_closed(Family::TwoD, 1).unwrap()), vec![3, 9, 7]);
        assert_eq!(sizes(&build_closed(Family::ThreeD, 1).unwrap()), vec![4, 18, 28, 15]);
    }

    #[test]
    fn qubit_counts() {
        for n in 1..=3 {
            for fam in [Family::TwoD, Family::ThreeD] {
                let k = build_closed(fam, n).unwrap();
                assert_eq!(k.num_qubits(), fam.expected_qubits(n), "{fam:?} n={n}");
                assert_eq!(k.num_qubits() % 2, 1);
            }
        }
    }

    #[test]
    fn supports_at_n1() {
        let k2 = build_closed(Family::TwoD, 1).unwrap();
        for v in k2.delta_set(0).unwrap() {
            assert_eq!(k2.support(&v).unwrap().count_ones(), 4);
        }
        let k3 = build_closed(Family::ThreeD, 1).unwrap();
        for v in k3.delta_set(0).unwrap() {
            assert_eq!(k3.support(&v).unwrap().count_ones(), 8);
        }
        for e in k3.delta_set(1).unwrap() {
            assert_eq!(k3.support(&e).unwrap().count_ones(), 4);
        }
    }

    #[test]
    fn pure_closure_simplex_is_not_a_qubit() {
        let k = build_closed(Family::ThreeD, 2).unwrap();
        let pure = k
            .top_simplices()
            .iter()
            .find(|s| s.vertices().iter().all(|&v| k.vertices()[v].origin == Origin::Closure))
            .unwrap();
        assert!(!k.qubit_indexing().unwrap().index.contains_key(pure));
        assert!(k.support(pure).is_err());
    }

    #[test]
    fn validation_passes_and_catches_recoloring() {
        let k = build_closed(Family::TwoD, 1).unwrap();
        assert!(validate_complex(&k).all_pass());
        let bad = k.with_recolored_vertex(0, (k.color(0) + 1) % 3).unwrap();
        let r = validate_complex(&bad);
        let c = r.get("proper_coloring").unwrap();
        assert!(!c.pass && c.witness.is_some());
    }

    #[test]
    fn json_round_trip() {
        let k = build_closed(Family::ThreeD, 1).unwrap();
        let s = k.to_json().unwrap();
        assert!(s.find("\"D\"").unwrap() < s.find("\"vertices\"").unwrap());
        let back = ColoredComplex::from_json(&s).unwrap();
        assert_eq!(back.to_json().unwrap(), s);
        assert_eq!(back.num_qubits(), 15);
    }

    #[test]
    fn json_rejects_bad_coloring() {
        let k = build_closed(Family::TwoD, 1).unwrap();
        let bad = k.with_recolored_vertex(1, k.color(0)).unwrap();
        assert!(matches!(
            ColoredComplex::from_json(&bad.to_json().unwrap()),
            Err(LatticeError::Invalid(_))
        ));
    }

    #[test]
    fn triad_parity_known_at_n1() {
        let m = build_3d_tetrahedron(1).unwrap();
        assert!(m.triad_parity(&m.top_simplices()[0]).unwrap());
    }

    #[test]
    fn closing_twice_is_an_error() {
        let k = build_closed(Family::TwoD, 1).unwrap();
        assert!(matches!(close_to_sphere(&k), Err(LatticeError::AlreadyClosed)));
    }
}
