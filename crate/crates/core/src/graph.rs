//! Diagrams as embedded graphs.
//!
//! [`OpenPlaneGraph`] is a half-edge map built from the grid layout of a term:
//! generators left to right inside tensors, rows top to bottom across
//! compositions. Its rotation lists each node's half-edges counterclockwise,
//! starting with the top ports from right to left and continuing with the
//! bottom ports from left to right.
//!
//! [`GraphForm`] forgets the embedding and keeps black nodes with weighted
//! edges, which is what the matching semantics needs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{Complex, Tolerance, ONE};
use crate::fkt::{Dart, WeightedPlaneGraph};
use crate::term::{Body, Generator, TermDiagram};

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Black,
    White(Complex),
    /// Ports in rotation order: in₂, in₁, out₁, out₂.
    FSwap,
    /// Boundary port `k` in state-form order.
    Port(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    /// Half-edges counterclockwise.
    pub rotation: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub node: usize,
    pub twin: usize,
}

/// Half-edge form of a diagram. Every half-edge is paired; boundary ports are
/// degree-one [`NodeKind::Port`] nodes listed in `boundary`.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenPlaneGraph {
    pub nodes: Vec<Node>,
    pub half_edges: Vec<HalfEdge>,
    /// Port nodes: inputs in reverse order, then outputs.
    pub boundary: Vec<usize>,
    pub n_inputs: usize,
    pub n_outputs: usize,
    /// Closed wires carrying no node at all.
    pub free_loops: usize,
    pub scalar: Complex,
}

impl OpenPlaneGraph {
    pub fn from_term(d: &TermDiagram) -> Self {
        let mut b = Builder::default();
        let slab = b.build(d);
        let mut scalar = ONE;
        for s in &b.scalars {
            scalar *= s;
        }
        // Boundary ports close off the dangling ends.
        let n_in = slab.top.len();
        let mut boundary = Vec::new();
        for &stub in slab.top.iter().rev() {
            boundary.push(b.port(stub));
        }
        for &stub in &slab.bottom {
            boundary.push(b.port(stub));
        }
        for (i, &node) in boundary.iter().enumerate() {
            b.kinds[node] = Kind::Port(i);
        }
        b.finish(boundary, n_in, slab.bottom.len(), scalar)
    }

    pub fn count(&self, pred: impl Fn(&NodeKind) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(&n.kind)).count()
    }

    /// Node on the other end of half-edge `h`'s edge, and the half-edge there.
    pub fn across(&self, h: usize) -> (usize, usize) {
        let t = self.half_edges[h].twin;
        (self.half_edges[t].node, t)
    }

    /// Undirected edges as half-edge pairs `(h, twin)` with `h < twin`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.half_edges.len())
            .filter(|&h| h < self.half_edges[h].twin)
            .map(|h| (h, self.half_edges[h].twin))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Node(NodeKind),
    /// Degree-two plumbing from identities, cups and caps; smoothed away.
    Wire,
    Port(usize),
}

#[derive(Default)]
struct Builder {
    kinds: Vec<Kind>,
    rotation: Vec<Vec<usize>>,
    owner: Vec<usize>,
    twin: Vec<Option<usize>>,
    scalars: Vec<Complex>,
}

struct Slab {
    top: Vec<usize>,
    bottom: Vec<usize>,
}

impl Builder {
    fn node(&mut self, kind: Kind, top: usize, bottom: usize) -> Slab {
        let id = self.kinds.len();
        self.kinds.push(kind);
        let mk = |b: &mut Self| {
            let h = b.owner.len();
            b.owner.push(id);
            b.twin.push(None);
            h
        };
        let top_stubs: Vec<usize> = (0..top).map(|_| mk(self)).collect();
        let bottom_stubs: Vec<usize> = (0..bottom).map(|_| mk(self)).collect();
        let mut rot: Vec<usize> = top_stubs.iter().rev().copied().collect();
        rot.extend(bottom_stubs.iter().copied());
        self.rotation.push(rot);
        Slab {
            top: top_stubs,
            bottom: bottom_stubs,
        }
    }

    fn pair(&mut self, a: usize, b: usize) {
        self.twin[a] = Some(b);
        self.twin[b] = Some(a);
    }

    fn port(&mut self, stub: usize) -> usize {
        let s = self.node(Kind::Port(0), 0, 1);
        self.pair(s.bottom[0], stub);
        self.kinds.len() - 1
    }

    fn build(&mut self, d: &TermDiagram) -> Slab {
        match d.body() {
            Body::Gen(g) => match *g {
                Generator::Identity(k) => {
                    let mut top = Vec::new();
                    let mut bottom = Vec::new();
                    for _ in 0..k {
                        let s = self.node(Kind::Wire, 1, 1);
                        top.extend(s.top);
                        bottom.extend(s.bottom);
                    }
                    Slab { top, bottom }
                }
                Generator::Black(n, m) => self.node(Kind::Node(NodeKind::Black), n, m),
                Generator::White(r) => self.node(Kind::Node(NodeKind::White(r)), 1, 1),
                Generator::Cup => self.node(Kind::Wire, 2, 0),
                Generator::Cap => self.node(Kind::Wire, 0, 2),
                Generator::FSwap => self.node(Kind::Node(NodeKind::FSwap), 2, 2),
                Generator::Scalar(c) => {
                    self.scalars.push(c);
                    Slab {
                        top: Vec::new(),
                        bottom: Vec::new(),
                    }
                }
            },
            Body::Tensor(a, b) => {
                let mut l = self.build(a);
                let r = self.build(b);
                l.top.extend(r.top);
                l.bottom.extend(r.bottom);
                l
            }
            Body::Compose(f, g) => {
                let first = self.build(f);
                let then = self.build(g);
                for (a, b) in first.bottom.iter().zip(&then.top) {
                    self.pair(*a, *b);
                }
                Slab {
                    top: first.top,
                    bottom: then.bottom,
                }
            }
        }
    }

    /// Smooths wire nodes and renumbers what is left.
    fn finish(mut self, boundary: Vec<usize>, n_inputs: usize, n_outputs: usize, scalar: Complex) -> OpenPlaneGraph {
        let mut free_loops = 0;
        let mut dead_half = vec![false; self.owner.len()];
        for node in 0..self.kinds.len() {
            if self.kinds[node] != Kind::Wire {
                continue;
            }
            let (a, b) = (self.rotation[node][0], self.rotation[node][1]);
            let ta = self.twin[a].expect("all stubs paired");
            let tb = self.twin[b].expect("all stubs paired");
            dead_half[a] = true;
            dead_half[b] = true;
            if ta == b {
                free_loops += 1;
            } else {
                self.pair(ta, tb);
            }
        }
        let mut node_map = vec![usize::MAX; self.kinds.len()];
        let mut nodes = Vec::new();
        for (i, k) in self.kinds.iter().enumerate() {
            let kind = match k {
                Kind::Wire => continue,
                Kind::Node(n) => n.clone(),
                Kind::Port(p) => NodeKind::Port(*p),
            };
            node_map[i] = nodes.len();
            nodes.push(Node {
                kind,
                rotation: Vec::new(),
            });
        }
        let mut half_map = vec![usize::MAX; self.owner.len()];
        let mut count = 0;
        for h in 0..self.owner.len() {
            if !dead_half[h] {
                half_map[h] = count;
                count += 1;
            }
        }
        let mut half_edges = Vec::with_capacity(count);
        for h in 0..self.owner.len() {
            if !dead_half[h] {
                half_edges.push(HalfEdge {
                    node: node_map[self.owner[h]],
                    twin: half_map[self.twin[h].expect("all stubs paired")],
                });
            }
        }
        for (i, rot) in self.rotation.iter().enumerate() {
            if node_map[i] != usize::MAX {
                nodes[node_map[i]].rotation = rot.iter().map(|&h| half_map[h]).collect();
            }
        }
        OpenPlaneGraph {
            nodes,
            half_edges,
            boundary: boundary.iter().map(|&b| node_map[b]).collect(),
            n_inputs,
            n_outputs,
            free_loops,
            scalar,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Complex,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Leg {
    pub vertex: usize,
    /// 0-based boundary port.
    pub port: usize,
    pub weight: Complex,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PassWire {
    pub a: usize,
    pub b: usize,
    pub weight: Complex,
}

/// Black-only weighted graph with boundary legs.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphForm {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    pub legs: Vec<Leg>,
    pub wires: Vec<PassWire>,
    pub loops: Vec<Complex>,
    pub scalar: Complex,
    pub ports: usize,
}

impl GraphForm {
    /// Sums parallel edges, drops self-loops and edges whose weight is zero
    /// under `tol`.
    pub fn merged(&self, tol: &Tolerance) -> GraphForm {
        let mut sums: BTreeMap<(usize, usize), Complex> = BTreeMap::new();
        for e in &self.edges {
            if e.u == e.v {
                continue;
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            *sums.entry(key).or_default() += e.weight;
        }
        GraphForm {
            edges: sums
                .into_iter()
                .filter(|(_, w)| !tol.is_zero(*w))
                .map(|((u, v), weight)| Edge { u, v, weight })
                .collect(),
            ..self.clone()
        }
    }
}

/// A graph form together with the embedding inherited from the term layout.
#[derive(Clone, Debug)]
pub struct EmbeddedForm {
    /// Unmerged: parallel edges, self-loops and zero weights kept.
    pub form: GraphForm,
    /// Per black vertex, its edge ends counterclockwise (legs omitted).
    pub rotation: Vec<Vec<Dart>>,
}

impl EmbeddedForm {
    pub fn plane_graph(&self) -> WeightedPlaneGraph {
        WeightedPlaneGraph::from_parts(
            self.form.vertices,
            self.form.edges.iter().map(|e| (e.u, e.v, e.weight)).collect(),
            self.rotation.clone(),
            None,
        )
        .expect("term layouts give valid rotation systems")
    }
}

/// Expands fswaps, folds white chains into weights and keeps the embedding.
pub fn to_embedded_form(d: &TermDiagram) -> EmbeddedForm {
    let g = OpenPlaneGraph::from_term(&d.expand_fswaps());
    let mut vertex_of = vec![usize::MAX; g.nodes.len()];
    let mut vertices = 0;
    for (i, n) in g.nodes.iter().enumerate() {
        if n.kind == NodeKind::Black {
            vertex_of[i] = vertices;
            vertices += 1;
        }
    }
    let mut seen = vec![false; g.half_edges.len()];
    let mut edges = Vec::new();
    let mut legs = Vec::new();
    let mut wires = Vec::new();
    let mut end_of: BTreeMap<usize, Dart> = BTreeMap::new();

    // Walk from a black or port half-edge through white nodes.
    let walk = |start: usize, seen: &mut Vec<bool>| -> (usize, usize, Complex) {
        let mut h = start;
        let mut w = ONE;
        seen[h] = true;
        loop {
            let (node, arrive) = g.across(h);
            seen[arrive] = true;
            match g.nodes[node].kind {
                NodeKind::White(r) => {
                    w *= r;
                    let rot = &g.nodes[node].rotation;
                    h = if rot[0] == arrive { rot[1] } else { rot[0] };
                    seen[h] = true;
                }
                _ => return (node, arrive, w),
            }
        }
    };

    for (i, n) in g.nodes.iter().enumerate() {
        if n.kind != NodeKind::Black {
            continue;
        }
        for &h in &n.rotation {
            if seen[h] {
                continue;
            }
            let (node, arrive, w) = walk(h, &mut seen);
            match g.nodes[node].kind {
                NodeKind::Black => {
                    let id = edges.len();
                    edges.push(Edge {
                        u: vertex_of[i],
                        v: vertex_of[node],
                        weight: w,
                    });
                    end_of.insert(h, Dart { edge: id, forward: true });
                    end_of.insert(arrive, Dart { edge: id, forward: false });
                }
                NodeKind::Port(p) => legs.push(Leg {
                    vertex: vertex_of[i],
                    port: p,
                    weight: w,
                }),
                _ => unreachable!("fswaps are expanded"),
            }
        }
    }
    // Ports not reached from a black node are joined by pass-through wires.
    for n in &g.nodes {
        if let NodeKind::Port(p) = n.kind {
            let h = n.rotation[0];
            if seen[h] {
                continue;
            }
            let (node, _, w) = walk(h, &mut seen);
            if let NodeKind::Port(q) = g.nodes[node].kind {
                wires.push(PassWire { a: p, b: q, weight: w });
            }
        }
    }
    // Remaining white nodes sit on closed loops.
    let mut loops = Vec::new();
    for (i, n) in g.nodes.iter().enumerate() {
        if let NodeKind::White(_) = n.kind {
            let h0 = n.rotation[0];
            if seen[h0] {
                continue;
            }
            let mut w = ONE;
            let mut node = i;
            let mut out = h0;
            loop {
                if let NodeKind::White(r) = g.nodes[node].kind {
                    w *= r;
                }
                seen[out] = true;
                let (next, arrive) = g.across(out);
                seen[arrive] = true;
                let rot = &g.nodes[next].rotation;
                out = if rot[0] == arrive { rot[1] } else { rot[0] };
                node = next;
                if next == i {
                    break;
                }
            }
            loops.push(w);
        }
    }
    loops.extend(core::iter::repeat_n(ONE, g.free_loops));
    let rotation = g
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::Black)
        .map(|n| n.rotation.iter().filter_map(|h| end_of.get(h).copied()).collect())
        .collect();
    EmbeddedForm {
        form: GraphForm {
            vertices,
            edges,
            legs,
            wires,
            loops,
            scalar: g.scalar,
            ports: g.boundary.len(),
        },
        rotation,
    }
}

/// Black-only graph form with merged parallel edges.
pub fn to_graph_form(d: &TermDiagram) -> GraphForm {
    to_graph_form_with(d, &Tolerance::default())
}

pub fn to_graph_form_with(d: &TermDiagram, tol: &Tolerance) -> GraphForm {
    to_embedded_form(d).form.merged(tol)
}
