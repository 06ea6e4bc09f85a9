//! Perfect-matching weights of embedded planar graphs in polynomial time.
//!
//! A Pfaffian orientation makes every matching contribute to the Pfaffian of
//! the signed adjacency matrix with the same sign; that common sign is read
//! from the unit-weight Pfaffian, whose magnitude counts the matchings.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use thiserror::Error;

use crate::complex::{Complex, Tolerance, ONE, ZERO};
use crate::graph::{Edge, GraphForm, to_embedded_form};
use crate::logc::LogComplex;
use crate::term::TermDiagram;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FktError {
    #[error("edge {edge} refers to vertex {vertex}, but there are {count} vertices")]
    UnknownVertex { edge: usize, vertex: usize, count: usize },
    #[error("rotation of vertex {vertex} is not a permutation of its edge ends")]
    BadRotation { vertex: usize },
    #[error("outer side of edge {edge} does not leave vertex {vertex}")]
    BadOuter { edge: usize, vertex: usize },
    #[error("Euler check failed: V={v}, E={e}, F={f}, components={c}")]
    NotPlanar { v: usize, e: usize, f: usize, c: usize },
    #[error("expected a scalar diagram, got {0} boundary wires")]
    NotScalar(usize),
}

/// One side of an edge: `forward` leaves the edge's `u` endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

impl Dart {
    pub fn twin(self) -> Dart {
        Dart {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

/// Weighted graph with a counterclockwise rotation system.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPlaneGraph {
    n: usize,
    edges: Vec<(usize, usize, Complex)>,
    rotation: Vec<Vec<Dart>>,
    outer: Option<Dart>,
}

impl WeightedPlaneGraph {
    pub fn from_parts(
        n: usize,
        edges: Vec<(usize, usize, Complex)>,
        rotation: Vec<Vec<Dart>>,
        outer: Option<Dart>,
    ) -> Result<Self, FktError> {
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(FktError::UnknownVertex { edge: i, vertex: x, count: n });
                }
            }
        }
        if rotation.len() != n {
            return Err(FktError::BadRotation { vertex: rotation.len().min(n) });
        }
        let g = WeightedPlaneGraph {
            n,
            edges,
            rotation,
            outer,
        };
        let mut seen = vec![false; 2 * g.edges.len()];
        for (v, rot) in g.rotation.iter().enumerate() {
            for &d in rot {
                let slot = 2 * d.edge + usize::from(d.forward);
                if d.edge >= g.edges.len() || g.tail(d) != v || seen[slot] {
                    return Err(FktError::BadRotation { vertex: v });
                }
                seen[slot] = true;
            }
        }
        if let Some(slot) = seen.iter().position(|s| !s) {
            return Err(FktError::BadRotation {
                vertex: g.tail(Dart {
                    edge: slot / 2,
                    forward: slot % 2 == 1,
                }),
            });
        }
        if let Some(d) = outer {
            if d.edge >= g.edges.len() {
                return Err(FktError::BadOuter { edge: d.edge, vertex: usize::MAX });
            }
        }
        let faces = g.faces();
        let comps = g.components().iter().filter(|c| c.len() > 1 || g.degree(c[0]) > 0).count();
        let isolated_free = g.edges.is_empty();
        let (v, e, f) = (
            (0..g.n).filter(|&x| g.degree(x) > 0).count(),
            g.edges.len(),
            faces.len(),
        );
        // Each component traces its own outer face.
        if !isolated_free && v + f != e + 2 * comps {
            return Err(FktError::NotPlanar { v, e, f, c: comps });
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, Complex)] {
        &self.edges
    }

    pub fn rotation(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    pub fn outer(&self) -> Option<Dart> {
        self.outer
    }

    pub fn tail(&self, d: Dart) -> usize {
        let (u, v, _) = self.edges[d.edge];
        if d.forward {
            u
        } else {
            v
        }
    }

    pub fn head(&self, d: Dart) -> usize {
        self.tail(d.twin())
    }

    fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// The dart after `twin(d)` around `head(d)`.
    fn next(&self, d: Dart, pos: &BTreeMap<Dart, usize>) -> Dart {
        let t = d.twin();
        let rot = &self.rotation[self.tail(t)];
        rot[(pos[&t] + 1) % rot.len()]
    }

    fn positions(&self) -> BTreeMap<Dart, usize> {
        let mut pos = BTreeMap::new();
        for rot in &self.rotation {
            for (i, &d) in rot.iter().enumerate() {
                pos.insert(d, i);
            }
        }
        pos
    }

    /// Face boundary walks; every dart lies on exactly one.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let pos = self.positions();
        let mut done = BTreeMap::new();
        let mut faces = Vec::new();
        for rot in &self.rotation {
            for &start in rot {
                if done.contains_key(&start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = start;
                loop {
                    done.insert(d, faces.len());
                    face.push(d);
                    d = self.next(d, &pos);
                    if d == start {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Vertex sets of connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for &d in &self.rotation[v] {
                    let w = self.head(d);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Sums parallel edges and drops self-loops and zero weights, keeping the
    /// surviving edge ends in rotation order.
    pub fn simplified(&self, tol: &Tolerance) -> WeightedPlaneGraph {
        let mut first: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut sum: Vec<Complex> = Vec::new();
        let mut keep_of = vec![usize::MAX; self.edges.len()];
        let mut flipped = vec![false; self.edges.len()];
        let mut reps: Vec<(usize, usize)> = Vec::new();
        for (i, &(u, v, w)) in self.edges.iter().enumerate() {
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            let id = *first.entry(key).or_insert_with(|| {
                reps.push((u, v));
                sum.push(ZERO);
                reps.len() - 1
            });
            sum[id] += w;
            keep_of[i] = id;
            flipped[i] = (u, v) != reps[id];
        }
        let alive: Vec<bool> = sum.iter().map(|w| !tol.is_zero(*w)).collect();
        let mut new_id = vec![usize::MAX; sum.len()];
        let mut edges = Vec::new();
        for (id, &(u, v)) in reps.iter().enumerate() {
            if alive[id] {
                new_id[id] = edges.len();
                edges.push((u, v, sum[id]));
            }
        }
        // Parallel copies are deleted, keeping the first edge of each bundle,
        // so the surviving rotation stays planar.
        let mut rep_edge = vec![usize::MAX; sum.len()];
        for (i, &id) in keep_of.iter().enumerate() {
            if id != usize::MAX && rep_edge[id] == usize::MAX {
                rep_edge[id] = i;
            }
        }
        let mut rotation = Vec::with_capacity(self.n);
        for rot in &self.rotation {
            let r: Vec<Dart> = rot
                .iter()
                .filter(|d| {
                    let id = keep_of[d.edge];
                    id != usize::MAX && alive[id] && rep_edge[id] == d.edge
                })
                .map(|d| Dart {
                    edge: new_id[keep_of[d.edge]],
                    forward: d.forward != flipped[d.edge],
                })
                .collect();
            rotation.push(r);
        }
        let outer = self.outer.and_then(|d| {
            let id = keep_of[d.edge];
            (id != usize::MAX && alive[id] && rep_edge[id] == d.edge).then(|| Dart {
                edge: new_id[id],
                forward: d.forward != flipped[d.edge],
            })
        });
        WeightedPlaneGraph {
            n: self.n,
            edges,
            rotation,
            outer,
        }
    }

    /// The induced subgraph on `vertices` with its inherited rotation.
    pub fn restrict(&self, vertices: &[usize]) -> (WeightedPlaneGraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edge_map = vec![usize::MAX; self.edges.len()];
        let mut edges = Vec::new();
        for (i, &(u, v, w)) in self.edges.iter().enumerate() {
            if local[u] != usize::MAX && local[v] != usize::MAX {
                edge_map[i] = edges.len();
                edges.push((local[u], local[v], w));
            }
        }
        let rotation = vertices
            .iter()
            .map(|&v| {
                self.rotation[v]
                    .iter()
                    .map(|d| Dart {
                        edge: edge_map[d.edge],
                        forward: d.forward,
                    })
                    .collect()
            })
            .collect();
        let outer = self.outer.and_then(|d| {
            (edge_map[d.edge] != usize::MAX).then(|| Dart {
                edge: edge_map[d.edge],
                forward: d.forward,
            })
        });
        (
            WeightedPlaneGraph {
                n: vertices.len(),
                edges,
                rotation,
                outer,
            },
            vertices.to_vec(),
        )
    }

    /// Black-only graph form with the same edges, for brute-force checks.
    pub fn to_graph_form(&self) -> GraphForm {
        GraphForm {
            vertices: self.n,
            edges: self
                .edges
                .iter()
                .map(|&(u, v, weight)| Edge { u, v, weight })
                .collect(),
            legs: Vec::new(),
            wires: Vec::new(),
            loops: Vec::new(),
            scalar: ONE,
            ports: 0,
        }
    }
}

/// Direction per edge: `true` orients the edge from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub forward: Vec<bool>,
}

impl Orientation {
    /// Darts of `face` whose direction agrees with the edge orientation.
    pub fn agreeing(&self, face: &[Dart]) -> usize {
        face.iter().filter(|d| d.forward == self.forward[d.edge]).count()
    }
}

/// The face treated as unbounded for a connected graph: the designated one if
/// present, otherwise the longest walk.
pub fn outer_face_index(g: &WeightedPlaneGraph, faces: &[Vec<Dart>]) -> Option<usize> {
    if faces.is_empty() {
        return None;
    }
    if let Some(o) = g.outer() {
        if let Some(i) = faces.iter().position(|f| f.contains(&o)) {
            return Some(i);
        }
    }
    (0..faces.len()).max_by_key(|&i| (faces[i].len(), usize::MAX - i))
}

/// Kasteleyn orientation of a connected plane graph.
///
/// Tree edges are fixed first; each bounded face is then completed through
/// its dual-tree parent edge, leaves first, so that an odd number of its
/// boundary darts agree with the orientation. Agreement with the walk
/// direction is used in place of "clockwise": the walks of all faces share a
/// handedness, so this is the clockwise condition of the mirror embedding.
pub fn pfaffian_orientation(g: &WeightedPlaneGraph) -> Orientation {
    let m = g.edges().len();
    let forward = vec![true; m];
    let mut in_tree = vec![false; m];
    let mut visited = vec![false; g.vertex_count()];
    for s in 0..g.vertex_count() {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &d in &g.rotation()[v] {
                let w = g.head(d);
                if !visited[w] {
                    visited[w] = true;
                    in_tree[d.edge] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let faces = g.faces();
    let mut face_of: BTreeMap<Dart, usize> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &d in f {
            face_of.insert(d, i);
        }
    }
    let mut orient = Orientation { forward };
    for comp in g.components() {
        let comp_faces: Vec<usize> = {
            let mut fs: Vec<usize> = comp
                .iter()
                .flat_map(|&v| g.rotation()[v].iter().map(|d| face_of[d]))
                .collect();
            fs.sort_unstable();
            fs.dedup();
            fs
        };
        if comp_faces.is_empty() {
            continue;
        }
        let local: Vec<Vec<Dart>> = comp_faces.iter().map(|&i| faces[i].clone()).collect();
        let root = comp_faces[outer_face_index(g, &local).expect("component has faces")];
        // Dual tree over non-tree edges, explored from the outer face.
        let mut parent_edge: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = vec![root];
        let mut reached = BTreeMap::from([(root, ())]);
        let mut i = 0;
        while i < order.len() {
            let f = order[i];
            i += 1;
            for &d in &faces[f] {
                if in_tree[d.edge] {
                    continue;
                }
                let other = face_of[&d.twin()];
                if let alloc::collections::btree_map::Entry::Vacant(e) = reached.entry(other) {
                    e.insert(());
                    parent_edge.insert(other, d.edge);
                    order.push(other);
                }
            }
        }
        for &f in order.iter().skip(1).rev() {
            let pe = parent_edge[&f];
            orient.forward[pe] = true;
            if orient.agreeing(&faces[f]).is_multiple_of(2) {
                orient.forward[pe] = false;
            }
        }
    }
    orient
}

/// Checks the odd-agreement condition on every face except one outer face
/// per component.
pub fn orientation_is_pfaffian(g: &WeightedPlaneGraph, o: &Orientation) -> bool {
    let faces = g.faces();
    let mut face_of: BTreeMap<Dart, usize> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &d in f {
            face_of.insert(d, i);
        }
    }
    g.components().iter().all(|comp| {
        let mut fs: Vec<usize> = comp
            .iter()
            .flat_map(|&v| g.rotation()[v].iter().map(|d| face_of[d]))
            .collect();
        fs.sort_unstable();
        fs.dedup();
        if fs.is_empty() {
            return true;
        }
        let local: Vec<Vec<Dart>> = fs.iter().map(|&i| faces[i].clone()).collect();
        let outer = outer_face_index(g, &local).expect("faces exist");
        local
            .iter()
            .enumerate()
            .all(|(i, f)| i == outer || o.agreeing(f) % 2 == 1)
    })
}

/// Dense skew-symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl SkewMatrix {
    pub fn zeros(n: usize) -> Self {
        SkewMatrix {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.n + j]
    }

    /// Sets entry (i, j) to `w` and (j, i) to `-w`.
    ///
    /// # Panics
    /// Panics when `i == j` and `w` is nonzero.
    pub fn set(&mut self, i: usize, j: usize, w: Complex) {
        assert!(i != j || w == ZERO, "skew matrices have a zero diagonal");
        self.data[i * self.n + j] = w;
        self.data[j * self.n + i] = -w;
    }

    pub fn add(&mut self, i: usize, j: usize, w: Complex) {
        let cur = self.get(i, j);
        self.set(i, j, cur + w);
    }

    /// Signed adjacency matrix of an oriented graph.
    pub fn tutte(g: &WeightedPlaneGraph, o: &Orientation, unit: bool) -> Self {
        let mut a = Self::zeros(g.vertex_count());
        for (i, &(u, v, w)) in g.edges().iter().enumerate() {
            let w = if unit { ONE } else { w };
            if o.forward[i] {
                a.add(u, v, w);
            } else {
                a.add(v, u, w);
            }
        }
        a
    }

    fn swap(&mut self, p: usize, q: usize) {
        if p == q {
            return;
        }
        let n = self.n;
        for k in 0..n {
            self.data.swap(p * n + k, q * n + k);
        }
        for k in 0..n {
            self.data.swap(k * n + p, k * n + q);
        }
    }
}

/// Pivots below this fraction of the largest entry count as zero.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// Pfaffian by skew-symmetric elimination, two rows at a time.
///
/// Each step brings the largest remaining entry to position (k, k+1), which
/// costs a sign per transposition, and clears row and column k with
/// congruences that leave the Pfaffian unchanged.
pub fn pfaffian(a: &SkewMatrix) -> LogComplex {
    let n = a.dim();
    if n % 2 == 1 {
        return LogComplex::ZERO;
    }
    let mut m = a.clone();
    let scale = m.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if n == 0 {
        return LogComplex::ONE;
    }
    if scale == 0.0 {
        return LogComplex::ZERO;
    }
    let threshold = PIVOT_THRESHOLD * scale;
    let mut acc = LogComplex::ONE;
    let mut k = 0;
    while k < n {
        let (mut bp, mut bq, mut best) = (k, k + 1, -1.0);
        for p in k..n {
            for q in (p + 1)..n {
                let v = m.get(p, q).norm();
                if v > best {
                    best = v;
                    bp = p;
                    bq = q;
                }
            }
        }
        if best <= threshold {
            return LogComplex::ZERO;
        }
        let mut sign = false;
        if bp != k {
            m.swap(k, bp);
            sign = !sign;
            if bq == k {
                bq = bp;
            }
        }
        if bq != k + 1 {
            m.swap(k + 1, bq);
            sign = !sign;
        }
        let pivot = m.get(k, k + 1);
        acc = acc * pivot;
        if sign {
            acc = -acc;
        }
        let tau: Vec<Complex> = ((k + 2)..n).map(|i| m.get(k, i) / pivot).collect();
        let row: Vec<Complex> = ((k + 2)..n).map(|j| m.get(k + 1, j)).collect();
        for (ii, i) in ((k + 2)..n).enumerate() {
            for (jj, j) in ((i + 1)..n).enumerate() {
                let jj = jj + ii + 1;
                let upd = m.get(i, j) - tau[ii] * row[jj] + tau[jj] * row[ii];
                m.set(i, j, upd);
            }
        }
        k += 2;
    }
    acc
}

/// Pfaffian of a small matrix as a plain complex number.
pub fn pfaffian_value(a: &SkewMatrix) -> Complex {
    pfaffian(a).to_complex()
}

/// Total weight of perfect matchings.
pub fn matching_weight_fkt(g: &WeightedPlaneGraph) -> LogComplex {
    matching_weight_fkt_with(g, &Tolerance::default())
}

pub fn matching_weight_fkt_with(g: &WeightedPlaneGraph, tol: &Tolerance) -> LogComplex {
    let simple = g.simplified(tol);
    let mut total = LogComplex::ONE;
    for comp in simple.components() {
        if comp.len() % 2 == 1 {
            return LogComplex::ZERO;
        }
        let (sub, _) = simple.restrict(&comp);
        let o = pfaffian_orientation(&sub);
        debug_assert!(orientation_is_pfaffian(&sub, &o));
        let pf_w = pfaffian(&SkewMatrix::tutte(&sub, &o, false));
        let pf_u = pfaffian(&SkewMatrix::tutte(&sub, &o, true));
        if pf_u.is_zero() || pf_u.log10_magnitude < Float::log10(0.5) {
            return LogComplex::ZERO;
        }
        total = total * pf_w;
        if pf_u.phase.re < 0.0 {
            total = -total;
        }
    }
    total
}

/// Value of a scalar diagram through its planar graph form.
pub fn scalar_eval_fkt(d: &TermDiagram) -> Result<LogComplex, FktError> {
    scalar_eval_fkt_with(d, &Tolerance::default())
}

pub fn scalar_eval_fkt_with(d: &TermDiagram, tol: &Tolerance) -> Result<LogComplex, FktError> {
    if !d.is_scalar() {
        return Err(FktError::NotScalar(d.n_inputs() + d.n_outputs()));
    }
    let e = to_embedded_form(d);
    let mut factor = e.form.scalar;
    for l in &e.form.loops {
        factor *= ONE + l;
    }
    let pg = e.plane_graph();
    Ok(matching_weight_fkt_with(&pg, tol) * factor)
}

/// Closed-form count of domino tilings of an m × n grid.
pub fn kasteleyn_grid_count(m: usize, n: usize) -> f64 {
    match kasteleyn_grid_log10(m, n) {
        Some(l) => Float::powf(10.0, l),
        None => 0.0,
    }
}

/// Decimal logarithm of [`kasteleyn_grid_count`], `None` when the count is 0.
pub fn kasteleyn_grid_log10(m: usize, n: usize) -> Option<f64> {
    if (m * n) % 2 == 1 {
        return None;
    }
    let pi = core::f64::consts::PI;
    let mut log = 0.0;
    for j in 1..=m.div_ceil(2) {
        for k in 1..=n.div_ceil(2) {
            let a = Float::cos(pi * j as f64 / (m as f64 + 1.0));
            let b = Float::cos(pi * k as f64 / (n as f64 + 1.0));
            log += Float::log10(4.0 * a * a + 4.0 * b * b);
        }
    }
    Some(log)
}
