//! Arc diagrams: the substrate of the rewrite engine.
//!
//! A diagram in state form is drawn with its black nodes and its outputs as
//! points on a horizontal line and every wire as an arc above the line. Arcs
//! carry the white nodes sitting on them as a list of factors. Two arcs
//! cross exactly when their endpoints interleave, and every crossing is a
//! fermionic swap. With `A[p][q] = ±w` (plus when `p` precedes `q`), the
//! coefficient at `α` is
//!
//! ```text
//! Γ_α = scalar · Pf(A restricted to the black nodes and the outputs with α = 1))
//! ```
//!
//! which is the signed matching sum: a black node is covered exactly once, an
//! output with bit 1 is covered once, and each pair of crossing arcs in a
//! matching contributes −1.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitWord;
use crate::complex::{Complex, Tolerance, ONE, ZERO};
use crate::fkt::{pfaffian_value, SkewMatrix};
use crate::tensor::Tensor;
use crate::term::{Body, Generator, TermDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    /// A black node: always covered by exactly one arc.
    Vertex,
    /// Output wire `k` (0-based, state-form order).
    Output(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arc {
    pub id: usize,
    pub a: usize,
    pub b: usize,
    /// White nodes along the arc; empty for a plain wire.
    pub factors: Vec<Complex>,
}

impl Arc {
    pub fn weight(&self) -> Complex {
        self.factors.iter().fold(ONE, |acc, f| acc * f)
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    pub fn touches(&self, p: usize) -> bool {
        self.a == p || self.b == p
    }

    pub fn other(&self, p: usize) -> usize {
        if self.a == p {
            self.b
        } else {
            self.a
        }
    }

    /// Counts towards the white-node total of the termination measure.
    pub fn white_count(&self) -> usize {
        self.factors.len().max(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArcDiagram {
    /// Point kinds by id; removed points are `None`.
    kinds: Vec<Option<PointKind>>,
    /// Live point ids from left to right.
    order: Vec<usize>,
    arcs: Vec<Arc>,
    next_arc: usize,
    pub scalar: Complex,
    n_outputs: usize,
}

impl ArcDiagram {
    /// An empty line with `n` outputs and no arcs.
    pub fn outputs_only(n: usize, scalar: Complex) -> Self {
        let mut g = ArcDiagram {
            kinds: Vec::new(),
            order: Vec::new(),
            arcs: Vec::new(),
            next_arc: 0,
            scalar,
            n_outputs: n,
        };
        for k in 0..n {
            let p = g.new_point(PointKind::Output(k));
            g.order.push(p);
        }
        g
    }

    /// The arc diagram of the state form of `d`.
    pub fn from_term(d: &TermDiagram) -> Self {
        let mut b = ArcBuilder::default();
        let frag = b.build(d);
        let mut g = ArcDiagram {
            kinds: b.kinds,
            order: frag.line,
            arcs: b.arcs,
            next_arc: b.next_arc,
            scalar: b.scalar,
            n_outputs: frag.outputs.len(),
        };
        for (k, &p) in frag.outputs.iter().enumerate() {
            g.kinds[p] = Some(PointKind::Output(k));
        }
        g
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.id == id)
    }

    pub fn kind(&self, p: usize) -> Option<PointKind> {
        self.kinds.get(p).copied().flatten()
    }

    pub fn is_vertex(&self, p: usize) -> bool {
        self.kind(p) == Some(PointKind::Vertex)
    }

    pub fn is_output(&self, p: usize) -> bool {
        matches!(self.kind(p), Some(PointKind::Output(_)))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().copied().filter(move |&p| self.is_vertex(p))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().count()
    }

    pub fn output_point(&self, k: usize) -> usize {
        self.order
            .iter()
            .copied()
            .find(|&p| self.kind(p) == Some(PointKind::Output(k)))
            .expect("every output has a point")
    }

    pub fn position(&self, p: usize) -> usize {
        self.order.iter().position(|&q| q == p).expect("live point")
    }

    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.kinds.len()];
        for (i, &p) in self.order.iter().enumerate() {
            pos[p] = i;
        }
        pos
    }

    /// Arc count at `p`, a self-loop counting twice.
    pub fn degree(&self, p: usize) -> usize {
        self.arcs
            .iter()
            .map(|a| usize::from(a.a == p) + usize::from(a.b == p))
            .sum()
    }

    pub fn arcs_at(&self, p: usize) -> impl Iterator<Item = &Arc> + '_ {
        self.arcs.iter().filter(move |a| a.touches(p))
    }

    /// Distinct neighbours of `p`, self excluded.
    pub fn neighbours(&self, p: usize) -> BTreeSet<usize> {
        self.arcs_at(p).filter(|a| !a.is_loop()).map(|a| a.other(p)).collect()
    }

    /// Total weight between two distinct points.
    pub fn weight_between(&self, p: usize, q: usize) -> Complex {
        self.arcs
            .iter()
            .filter(|a| (a.a == p && a.b == q) || (a.a == q && a.b == p))
            .map(Arc::weight)
            .sum()
    }

    pub(crate) fn new_point(&mut self, kind: PointKind) -> usize {
        self.kinds.push(Some(kind));
        self.kinds.len() - 1
    }

    /// Inserts a new vertex at line position `pos`.
    pub fn insert_vertex(&mut self, pos: usize) -> usize {
        let p = self.new_point(PointKind::Vertex);
        self.order.insert(pos, p);
        p
    }

    pub fn add_arc(&mut self, a: usize, b: usize, factors: Vec<Complex>) -> usize {
        let id = self.next_arc;
        self.next_arc += 1;
        self.arcs.push(Arc { id, a, b, factors });
        id
    }

    pub fn remove_arc(&mut self, id: usize) -> Option<Arc> {
        let i = self.arcs.iter().position(|a| a.id == id)?;
        Some(self.arcs.remove(i))
    }

    pub fn arc_mut(&mut self, id: usize) -> Option<&mut Arc> {
        self.arcs.iter_mut().find(|a| a.id == id)
    }

    /// Removes a vertex together with its arcs.
    pub fn remove_vertex(&mut self, p: usize) {
        assert!(self.is_vertex(p), "only black nodes can be removed");
        self.arcs.retain(|a| !a.touches(p));
        self.order.retain(|&q| q != p);
        self.kinds[p] = None;
    }

    /// Moves the `from` end of an arc to point `to`.
    pub fn reattach(&mut self, id: usize, from: usize, to: usize) {
        let arc = self.arc_mut(id).expect("live arc");
        if arc.a == from {
            arc.a = to;
        } else {
            assert_eq!(arc.b, from, "arc does not end at the given point");
            arc.b = to;
        }
    }

    /// Degrees indexed by point id.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.kinds.len()];
        for a in &self.arcs {
            d[a.a] += 1;
            d[a.b] += 1;
        }
        d
    }

    /// Whether any arc joins point `p` to an output.
    pub fn has_output_arc(&self, p: usize) -> bool {
        self.arcs_at(p).any(|a| !a.is_loop() && self.is_output(a.other(p)))
    }

    /// Multiplies the weight of an arc by −1 without adding a white node.
    pub fn negate_arc(&mut self, id: usize) {
        let arc = self.arc_mut(id).expect("live arc");
        match arc.factors.last_mut() {
            Some(f) => *f = -*f,
            None => arc.factors.push(-ONE),
        }
    }

    /// Whether two arcs' endpoints interleave on the line.
    fn crossing(pos: &[usize], x: &Arc, y: &Arc) -> bool {
        let (a, b) = (pos[x.a].min(pos[x.b]), pos[x.a].max(pos[x.b]));
        let inside = |p: usize| a < pos[p] && pos[p] < b;
        let shared = x.touches(y.a) || x.touches(y.b);
        !x.is_loop() && !y.is_loop() && !shared && inside(y.a) != inside(y.b)
    }

    /// Number of crossing arc pairs, i.e. fermionic swaps.
    pub fn crossings(&self) -> usize {
        let pos = self.positions();
        let mut n = 0;
        for (i, x) in self.arcs.iter().enumerate() {
            for y in &self.arcs[i + 1..] {
                if Self::crossing(&pos, x, y) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Change in the crossing count if the points at positions `i` and
    /// `i + 1` were exchanged.
    pub fn swap_crossing_delta(&self, i: usize) -> isize {
        let (a, b) = (self.order[i], self.order[i + 1]);
        let pos = self.positions();
        let mut delta = 0isize;
        for x in self.arcs_at(a).filter(|x| !x.is_loop() && !x.touches(b)) {
            for y in self.arcs_at(b).filter(|y| !y.is_loop() && !y.touches(a)) {
                if x.other(a) == y.other(b) {
                    continue;
                }
                delta += if Self::crossing(&pos, x, y) { -1 } else { 1 };
            }
        }
        delta
    }

    /// Exchanges the points at positions `i` and `i + 1`; at least one must
    /// be a black node. Arcs at the other point, except those joining the
    /// two, change sign.
    pub fn swap_adjacent(&mut self, i: usize) {
        let (a, b) = (self.order[i], self.order[i + 1]);
        let (fixed, flipped) = if self.is_vertex(a) {
            (a, b)
        } else {
            assert!(self.is_vertex(b), "two outputs cannot be exchanged");
            (b, a)
        };
        let ids: Vec<usize> = self
            .arcs_at(flipped)
            .filter(|x| !x.touches(fixed) && !x.is_loop())
            .map(|x| x.id)
            .collect();
        for id in ids {
            self.negate_arc(id);
        }
        self.order.swap(i, i + 1);
    }

    /// Moves black node `p` to position `target` by adjacent exchanges.
    pub fn move_vertex(&mut self, p: usize, target: usize) {
        assert!(self.is_vertex(p));
        let mut i = self.position(p);
        while i < target {
            self.swap_adjacent(i);
            i += 1;
        }
        while i > target {
            self.swap_adjacent(i - 1);
            i -= 1;
        }
    }

    /// Moves black node `v` next to `u`, immediately after it.
    pub fn bring_after(&mut self, v: usize, u: usize) {
        let pu = self.position(u);
        let pv = self.position(v);
        if pv > pu {
            self.move_vertex(v, pu + 1);
        } else {
            self.move_vertex(v, pu);
        }
    }

    /// Moves black node `v` next to `u`, immediately before it.
    pub fn bring_before(&mut self, v: usize, u: usize) {
        let pu = self.position(u);
        let pv = self.position(v);
        if pv < pu {
            self.move_vertex(v, pu - 1);
        } else {
            self.move_vertex(v, pu);
        }
    }

    /// Signed matrix entry `A[p][q]` from the summed arc weights.
    fn signed(&self, pos: &[usize], p: usize, q: usize) -> Complex {
        let w = self.weight_between(p, q);
        if pos[p] < pos[q] {
            w
        } else {
            -w
        }
    }

    /// Eliminates the adjacent black nodes `u` (left) and `v` (right) by a
    /// Schur complement: the scalar gains `A[u][v]` and every pair of other
    /// neighbours `p < q` gains `−(A[u][p]·A[v][q] − A[v][p]·A[u][q]) / A[u][v]`.
    ///
    /// Returns the scalar factor.
    ///
    /// # Panics
    /// Panics unless `u`, `v` are adjacent black nodes with `u` first and a
    /// nonzero total weight between them.
    pub fn eliminate_adjacent(&mut self, u: usize, v: usize) -> Complex {
        let pos = self.positions();
        assert!(self.is_vertex(u) && self.is_vertex(v));
        assert_eq!(pos[u] + 1, pos[v], "pivot pair must be adjacent");
        let a = self.weight_between(u, v);
        assert!(a != ZERO, "pivot weight must be nonzero");
        let mut nbrs: Vec<usize> = self
            .neighbours(u)
            .union(&self.neighbours(v))
            .copied()
            .filter(|&p| p != u && p != v)
            .collect();
        nbrs.sort_by_key(|&p| pos[p]);
        let cu: Vec<Complex> = nbrs.iter().map(|&p| self.signed(&pos, u, p)).collect();
        let cv: Vec<Complex> = nbrs.iter().map(|&p| self.signed(&pos, v, p)).collect();
        let mut updates = Vec::new();
        for i in 0..nbrs.len() {
            for j in (i + 1)..nbrs.len() {
                let delta = -(cu[i] * cv[j] - cv[i] * cu[j]) / a;
                if delta != ZERO {
                    updates.push((nbrs[i], nbrs[j], delta));
                }
            }
        }
        self.remove_vertex(u);
        self.remove_vertex(v);
        for (p, q, w) in updates {
            self.add_arc(p, q, vec![w]);
        }
        self.scalar *= a;
        a
    }

    /// Brings `v` next to `u` and eliminates the pair.
    pub fn pivot(&mut self, u: usize, v: usize) -> Complex {
        self.bring_after(v, u);
        self.eliminate_adjacent(u, v)
    }

    /// Signed adjacency over all live points in line order.
    pub fn skew_matrix(&self) -> SkewMatrix {
        let pos = self.positions();
        let mut m = SkewMatrix::zeros(self.order.len());
        for arc in &self.arcs {
            if arc.is_loop() {
                continue;
            }
            let (i, j) = (pos[arc.a], pos[arc.b]);
            let w = arc.weight();
            if i < j {
                m.add(i, j, w);
            } else {
                m.add(j, i, w);
            }
        }
        m
    }

    /// Coefficient at `alpha` via one Pfaffian.
    pub fn coefficient(&self, alpha: &BitWord) -> Complex {
        assert_eq!(alpha.len(), self.n_outputs);
        let full = self.skew_matrix();
        self.coefficient_from(&full, alpha)
    }

    fn coefficient_from(&self, full: &SkewMatrix, alpha: &BitWord) -> Complex {
        if self.scalar == ZERO {
            return ZERO;
        }
        let keep: Vec<usize> = self
            .order
            .iter()
            .enumerate()
            .filter(|(_, &p)| match self.kind(p) {
                Some(PointKind::Output(k)) => alpha.get(k + 1),
                _ => true,
            })
            .map(|(i, _)| i)
            .collect();
        let mut sub = SkewMatrix::zeros(keep.len());
        for (x, &i) in keep.iter().enumerate() {
            for (y, &j) in keep.iter().enumerate().skip(x + 1) {
                sub.set(x, y, full.get(i, j));
            }
        }
        self.scalar * pfaffian_value(&sub)
    }

    /// The full state tensor.
    pub fn tensor(&self) -> Tensor {
        let full = self.skew_matrix();
        let mut t = Tensor::zeros(self.n_outputs);
        for alpha in BitWord::all(self.n_outputs) {
            let v = self.coefficient_from(&full, &alpha);
            t.set(&alpha, v);
        }
        t
    }

    /// Signed matching enumeration; exponential, for cross-checks.
    pub fn tensor_brute(&self) -> Tensor {
        let pos = self.positions();
        let mut t = Tensor::zeros(self.n_outputs);
        let arcs: Vec<&Arc> = self.arcs.iter().filter(|a| !a.is_loop()).collect();
        for alpha in BitWord::all(self.n_outputs) {
            let present: Vec<usize> = self
                .order
                .iter()
                .copied()
                .filter(|&p| match self.kind(p) {
                    Some(PointKind::Output(k)) => alpha.get(k + 1),
                    _ => true,
                })
                .collect();
            let mut covered = vec![false; self.kinds.len()];
            let mut chosen: Vec<&Arc> = Vec::new();
            let v = brute(&present, &arcs, &pos, &mut covered, &mut chosen);
            t.set(&alpha, self.scalar * v);
        }
        t
    }

    pub fn is_zero_scalar(&self, tol: &Tolerance) -> bool {
        tol.is_zero(self.scalar)
    }
}

fn brute<'a>(
    present: &[usize],
    arcs: &[&'a Arc],
    pos: &[usize],
    covered: &mut Vec<bool>,
    chosen: &mut Vec<&'a Arc>,
) -> Complex {
    let Some(&p) = present.iter().find(|&&p| !covered[p]) else {
        let mut sign = ONE;
        for i in 0..chosen.len() {
            for j in (i + 1)..chosen.len() {
                if ArcDiagram::crossing(pos, chosen[i], chosen[j]) {
                    sign = -sign;
                }
            }
        }
        return sign * chosen.iter().fold(ONE, |acc, a| acc * a.weight());
    };
    covered[p] = true;
    let mut total = ZERO;
    for &arc in arcs.iter().filter(|a| a.touches(p)) {
        let q = arc.other(p);
        if covered[q] || !present.contains(&q) {
            continue;
        }
        covered[q] = true;
        chosen.push(arc);
        total += brute(present, arcs, pos, covered, chosen);
        chosen.pop();
        covered[q] = false;
    }
    covered[p] = false;
    total
}

#[derive(Default)]
struct ArcBuilder {
    kinds: Vec<Option<PointKind>>,
    arcs: Vec<Arc>,
    next_arc: usize,
    scalar: Complex,
    started: bool,
}

/// A diagram piece in state form: its line of points and, among them, its
/// outputs (reversed inputs, then outputs).
struct Fragment {
    line: Vec<usize>,
    outputs: Vec<usize>,
}

impl ArcBuilder {
    fn point(&mut self, kind: PointKind) -> usize {
        self.kinds.push(Some(kind));
        self.kinds.len() - 1
    }

    fn arc(&mut self, a: usize, b: usize, factors: Vec<Complex>) {
        let id = self.next_arc;
        self.next_arc += 1;
        self.arcs.push(Arc { id, a, b, factors });
    }

    fn open(&mut self, k: usize) -> Vec<usize> {
        (0..k).map(|_| self.point(PointKind::Output(0))).collect()
    }

    fn build(&mut self, d: &TermDiagram) -> Fragment {
        if !self.started {
            self.started = true;
            self.scalar = ONE;
        }
        match d.body() {
            Body::Gen(g) => self.leaf(g),
            Body::Tensor(f, g) => {
                let f = self.build(f);
                let g_in = g.n_inputs();
                let g = self.build(g);
                // f sits between g's reversed inputs and g's outputs.
                let cut = if g_in == 0 {
                    0
                } else {
                    let last = g.outputs[g_in - 1];
                    g.line.iter().position(|&p| p == last).expect("output on line") + 1
                };
                let mut line = g.line[..cut].to_vec();
                line.extend(&f.line);
                line.extend(&g.line[cut..]);
                let f_in = d.n_inputs() - g_in;
                let mut outputs = g.outputs[..g_in].to_vec();
                outputs.extend(&f.outputs[..f_in]);
                outputs.extend(&f.outputs[f_in..]);
                outputs.extend(&g.outputs[g_in..]);
                Fragment { line, outputs }
            }
            Body::Compose(f_term, g_term) => {
                let a = f_term.n_inputs();
                let b = f_term.n_outputs();
                let f = self.build(f_term);
                let g = self.build(g_term);
                let mut line = f.line.clone();
                line.extend(&g.line);
                // Innermost pairs first: f's last output meets g's last input.
                for j in (0..b).rev() {
                    let p = f.outputs[a + j];
                    let q = g.outputs[b - 1 - j];
                    let ip = line.iter().position(|&x| x == p).unwrap();
                    let iq = line.iter().position(|&x| x == q).unwrap();
                    let between = iq - ip - 1;
                    self.kinds[p] = Some(PointKind::Vertex);
                    self.kinds[q] = Some(PointKind::Vertex);
                    let factors = if between % 2 == 1 { vec![-ONE] } else { Vec::new() };
                    self.arc(p, q, factors);
                }
                let mut outputs = f.outputs[..a].to_vec();
                outputs.extend(&g.outputs[b..]);
                Fragment { line, outputs }
            }
        }
    }

    fn leaf(&mut self, g: &Generator) -> Fragment {
        match *g {
            Generator::Identity(k) => {
                let outs = self.open(2 * k);
                for i in 0..k {
                    self.arc(outs[i], outs[2 * k - 1 - i], Vec::new());
                }
                Fragment {
                    line: outs.clone(),
                    outputs: outs,
                }
            }
            Generator::Black(n, m) => {
                let v = self.point(PointKind::Vertex);
                let outs = self.open(n + m);
                for &o in &outs {
                    self.arc(v, o, Vec::new());
                }
                let mut line = vec![v];
                line.extend(&outs);
                Fragment { line, outputs: outs }
            }
            Generator::White(r) => {
                let outs = self.open(2);
                self.arc(outs[0], outs[1], vec![r]);
                Fragment {
                    line: outs.clone(),
                    outputs: outs,
                }
            }
            Generator::Cup | Generator::Cap => {
                let outs = self.open(2);
                self.arc(outs[0], outs[1], Vec::new());
                Fragment {
                    line: outs.clone(),
                    outputs: outs,
                }
            }
            Generator::FSwap => {
                // Line order in₂, in₁, out₁, out₂; in₁ meets out₂, in₂ meets out₁.
                let outs = self.open(4);
                self.arc(outs[0], outs[2], Vec::new());
                self.arc(outs[1], outs[3], Vec::new());
                Fragment {
                    line: outs.clone(),
                    outputs: outs,
                }
            }
            Generator::Scalar(c) => {
                self.scalar *= c;
                Fragment {
                    line: Vec::new(),
                    outputs: Vec::new(),
                }
            }
        }
    }
}
