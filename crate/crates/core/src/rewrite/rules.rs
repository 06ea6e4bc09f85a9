//! The rule catalogue: redex search and application on arc diagrams and on
//! WGS-X forms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arc::{ArcDiagram, PointKind};
use crate::complex::{Complex, Tolerance, ONE, ZERO};

use super::wgsx::Wgsx;
use super::RewriteError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    WSpiderFusion,
    WBinary,
    WBialgebra,
    WLoop,
    PhaseFusion,
    ZBinary,
    PhaseDistrib,
    Sum,
    FswapZ,
    FswapsW,
    Zero,
    FswapRemoval,
    FswapYB,
    FswapRotated,
    SumRw,
    WLoopRw,
    ZeroEdge,
    BinaryWRw,
    FswapRemovalRw,
    PhaseFusionRw,
    FloopRw,
    Fusion0Rw,
    FusionRw,
    Pivot,
    ZeroRw,
    Reduce1,
    Reduce2,
    Reduce3,
    Reduce4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleFamily {
    /// Equational axioms, usable in either direction.
    Axiom,
    /// Oriented rules driving the first normalization step.
    Rewrite,
    /// Rules acting on WGS-X forms.
    Reduce,
}

impl RuleId {
    pub const ALL: [RuleId; 29] = [
        RuleId::WSpiderFusion,
        RuleId::WBinary,
        RuleId::WBialgebra,
        RuleId::WLoop,
        RuleId::PhaseFusion,
        RuleId::ZBinary,
        RuleId::PhaseDistrib,
        RuleId::Sum,
        RuleId::FswapZ,
        RuleId::FswapsW,
        RuleId::Zero,
        RuleId::FswapRemoval,
        RuleId::FswapYB,
        RuleId::FswapRotated,
        RuleId::SumRw,
        RuleId::WLoopRw,
        RuleId::ZeroEdge,
        RuleId::BinaryWRw,
        RuleId::FswapRemovalRw,
        RuleId::PhaseFusionRw,
        RuleId::FloopRw,
        RuleId::Fusion0Rw,
        RuleId::FusionRw,
        RuleId::Pivot,
        RuleId::ZeroRw,
        RuleId::Reduce1,
        RuleId::Reduce2,
        RuleId::Reduce3,
        RuleId::Reduce4,
    ];

    /// Priority order of the first normalization step; the pivot comes last.
    pub const STEP_ONE: [RuleId; 11] = [
        RuleId::SumRw,
        RuleId::WLoopRw,
        RuleId::ZeroEdge,
        RuleId::BinaryWRw,
        RuleId::FswapRemovalRw,
        RuleId::PhaseFusionRw,
        RuleId::FloopRw,
        RuleId::Fusion0Rw,
        RuleId::FusionRw,
        RuleId::ZeroRw,
        RuleId::Pivot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::WSpiderFusion => "W-spider-fusion",
            RuleId::WBinary => "W-binary",
            RuleId::WBialgebra => "W-bialgebra",
            RuleId::WLoop => "W-loop",
            RuleId::PhaseFusion => "phase-fusion",
            RuleId::ZBinary => "Z-binary",
            RuleId::PhaseDistrib => "phase-distrib",
            RuleId::Sum => "sum",
            RuleId::FswapZ => "fswap-Z",
            RuleId::FswapsW => "fswaps-W",
            RuleId::Zero => "zero",
            RuleId::FswapRemoval => "fswap-removal",
            RuleId::FswapYB => "fswap-YB",
            RuleId::FswapRotated => "fswap-rotated",
            RuleId::SumRw => "sum→",
            RuleId::WLoopRw => "W-loop→",
            RuleId::ZeroEdge => "zero-edge(★)",
            RuleId::BinaryWRw => "binary-W→",
            RuleId::FswapRemovalRw => "fswap-removal→",
            RuleId::PhaseFusionRw => "phase-fusion(★)",
            RuleId::FloopRw => "floop→",
            RuleId::Fusion0Rw => "fusion-0→",
            RuleId::FusionRw => "fusion→",
            RuleId::Pivot => "pivot(∗)",
            RuleId::ZeroRw => "zero→",
            RuleId::Reduce1 => "reduce-1",
            RuleId::Reduce2 => "reduce-2",
            RuleId::Reduce3 => "reduce-3",
            RuleId::Reduce4 => "reduce-4",
        }
    }

    pub fn from_name(name: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn family(self) -> RuleFamily {
        use RuleId::*;
        match self {
            Reduce1 | Reduce2 | Reduce3 | Reduce4 => RuleFamily::Reduce,
            SumRw | WLoopRw | ZeroEdge | BinaryWRw | FswapRemovalRw | PhaseFusionRw | FloopRw
            | Fusion0Rw | FusionRw | Pivot | ZeroRw => RuleFamily::Rewrite,
            _ => RuleFamily::Axiom,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a redex is anchored at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Anchor {
    /// A point of an arc diagram, by id.
    Point(usize),
    /// An arc of an arc diagram, by id.
    Arc(usize),
    /// A WGS-X vertex, 1-based.
    Vertex(usize),
}

impl fmt::Display for Anchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anchor::Point(p) => write!(f, "p{p}"),
            Anchor::Arc(a) => write!(f, "a{a}"),
            Anchor::Vertex(v) => write!(f, "v{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Redex {
    pub rule: RuleId,
    pub anchors: Vec<Anchor>,
}

impl Redex {
    fn new(rule: RuleId, anchors: Vec<Anchor>) -> Self {
        Redex { rule, anchors }
    }

    fn point(&self, i: usize) -> usize {
        match self.anchors[i] {
            Anchor::Point(p) => p,
            _ => unreachable!("anchor {i} of {:?} is not a point", self.rule),
        }
    }

    fn arc(&self, i: usize) -> usize {
        match self.anchors[i] {
            Anchor::Arc(a) => a,
            _ => unreachable!("anchor {i} of {:?} is not an arc", self.rule),
        }
    }

    fn vertex(&self, i: usize) -> usize {
        match self.anchors[i] {
            Anchor::Vertex(v) => v,
            _ => unreachable!("anchor {i} of {:?} is not a vertex", self.rule),
        }
    }
}

/// Role of a black node relative to the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    /// Joined to an output.
    Type1,
    /// Not type 1, but joined to a binary type-1 node.
    Type0,
    Internal,
}

pub fn node_class(g: &ArcDiagram, p: usize) -> NodeClass {
    if g.has_output_arc(p) {
        return NodeClass::Type1;
    }
    let binary_type1 =
        |q: usize| g.is_vertex(q) && g.degree(q) == 2 && g.has_output_arc(q);
    if g.neighbours(p).into_iter().any(binary_type1) {
        NodeClass::Type0
    } else {
        NodeClass::Internal
    }
}

fn plain(g: &ArcDiagram, id: usize) -> bool {
    g.arc(id).is_some_and(|a| a.factors.is_empty())
}

/// Arcs at `p`, excluding self-loops, as `(arc id, other end)`.
fn ends(g: &ArcDiagram, p: usize) -> Vec<(usize, usize)> {
    g.arcs_at(p)
        .filter(|a| !a.is_loop())
        .map(|a| (a.id, a.other(p)))
        .collect()
}

fn arcs_between(g: &ArcDiagram, p: usize, q: usize) -> Vec<usize> {
    g.arcs()
        .iter()
        .filter(|a| (a.a == p && a.b == q) || (a.a == q && a.b == p))
        .map(|a| a.id)
        .collect()
}

fn joined(g: &ArcDiagram, p: usize, q: usize) -> bool {
    !arcs_between(g, p, q).is_empty()
}

/// `u – x – v` through a binary black node `x`, with `u ≠ v` black.
fn binary_paths(g: &ArcDiagram) -> Vec<(usize, usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for x in g.vertices() {
        let e = ends(g, x);
        if e.len() != 2 || g.degree(x) != 2 {
            continue;
        }
        let [(a1, u), (a2, v)] = [e[0], e[1]];
        if u == v || !g.is_vertex(u) || !g.is_vertex(v) {
            continue;
        }
        out.push((u, a1, x, a2, v));
        out.push((v, a2, x, a1, u));
    }
    out
}

/// All redexes of one rule on an arc diagram; empty for the WGS-X rules.
pub fn find_redexes(g: &ArcDiagram, rule: RuleId, tol: &Tolerance) -> Vec<Redex> {
    use Anchor::{Arc as A, Point as P};
    use RuleId::*;
    let deg = g.degrees();
    let mut out = Vec::new();
    match rule {
        WLoop | WLoopRw => {
            for a in g.arcs().iter().filter(|a| a.is_loop()) {
                if rule == WLoopRw || a.factors.is_empty() {
                    out.push(Redex::new(rule, vec![A(a.id)]));
                }
            }
        }
        PhaseFusion | PhaseFusionRw => {
            for a in g.arcs().iter().filter(|a| a.factors.len() >= 2) {
                out.push(Redex::new(rule, vec![A(a.id)]));
            }
        }
        ZBinary => {
            for a in g.arcs() {
                if a.factors.iter().any(|&f| tol.approx_eq(f, ONE)) {
                    out.push(Redex::new(rule, vec![A(a.id)]));
                }
            }
        }
        ZeroEdge => {
            for a in g.arcs() {
                if tol.is_zero(a.weight()) {
                    out.push(Redex::new(rule, vec![A(a.id)]));
                }
            }
        }
        PhaseDistrib => {
            for v in g.vertices() {
                let arcs: Vec<_> = g.arcs_at(v).collect();
                if arcs.is_empty() || arcs.iter().any(|a| a.is_loop() || a.factors.is_empty()) {
                    continue;
                }
                let r = *arcs[0].factors.last().unwrap();
                if tol.is_zero(r) {
                    continue;
                }
                if arcs.iter().all(|a| tol.approx_eq(*a.factors.last().unwrap(), r)) {
                    out.push(Redex::new(rule, vec![P(v)]));
                }
            }
        }
        Sum | SumRw => {
            let arcs = g.arcs();
            for (i, x) in arcs.iter().enumerate() {
                for y in &arcs[i + 1..] {
                    let same = (x.a == y.a && x.b == y.b) || (x.a == y.b && x.b == y.a);
                    if !same || x.is_loop() {
                        continue;
                    }
                    if rule == SumRw || (x.factors.len() <= 1 && y.factors.len() <= 1) {
                        out.push(Redex::new(rule, vec![A(x.id), A(y.id)]));
                    }
                }
            }
        }
        FswapZ | FswapsW | FswapRemoval | FswapRemovalRw | FloopRw => {
            let order = g.order();
            for i in 0..order.len().saturating_sub(1) {
                let (a, b) = (order[i], order[i + 1]);
                let (va, vb) = (g.is_vertex(a), g.is_vertex(b));
                let ok = match rule {
                    FswapZ => va != vb,
                    FswapsW => va && vb,
                    FswapRemoval | FswapRemovalRw => {
                        (va || vb) && !joined(g, a, b) && g.swap_crossing_delta(i) < 0
                    }
                    _ => (va || vb) && joined(g, a, b) && g.swap_crossing_delta(i) < 0,
                };
                if ok {
                    out.push(Redex::new(rule, vec![P(a), P(b)]));
                }
            }
        }
        FswapYB => {
            let order = g.order();
            for i in 0..order.len().saturating_sub(2) {
                if g.is_vertex(order[i]) {
                    out.push(Redex::new(rule, vec![P(order[i]), P(order[i + 1]), P(order[i + 2])]));
                }
            }
        }
        FswapRotated => {
            let order = g.order();
            if order.len() >= 2 && g.is_vertex(order[order.len() - 1]) {
                out.push(Redex::new(rule, vec![P(order[order.len() - 1])]));
            }
        }
        Zero | ZeroRw => {
            for v in g.vertices().filter(|&v| deg[v] == 0) {
                if rule == ZeroRw || g.scalar != ZERO {
                    out.push(Redex::new(rule, vec![P(v)]));
                }
            }
        }
        WSpiderFusion => {
            for (u, a1, x, a2, v) in binary_paths(g) {
                if plain(g, a1) && plain(g, a2) && u < v {
                    out.push(Redex::new(rule, vec![P(u), P(x), P(v)]));
                }
            }
        }
        FusionRw => {
            for (u, a1, x, a2, v) in binary_paths(g) {
                let (r, s) = (g.arc(a1).unwrap().weight(), g.arc(a2).unwrap().weight());
                if deg[u] != 2 && deg[v] != 2 && !tol.is_zero(r) && !tol.is_zero(s) && u < v {
                    out.push(Redex::new(rule, vec![P(u), P(x), P(v)]));
                }
            }
        }
        WBinary | BinaryWRw => {
            for x1 in g.vertices() {
                for (id, x2) in ends(g, x1) {
                    if x2 <= x1 || !g.is_vertex(x2) || deg[x1] != 2 || deg[x2] != 2 {
                        continue;
                    }
                    if arcs_between(g, x1, x2).len() != 1 {
                        continue;
                    }
                    let outer_plain = ends(g, x1)
                        .into_iter()
                        .chain(ends(g, x2))
                        .all(|(a, _)| plain(g, a));
                    let ok = match rule {
                        WBinary => outer_plain,
                        _ => !tol.is_zero(g.arc(id).unwrap().weight()),
                    };
                    if ok {
                        out.push(Redex::new(rule, vec![P(x1), P(x2)]));
                    }
                }
            }
        }
        WBialgebra => {
            for u in g.vertices() {
                for (id, v) in ends(g, u) {
                    if v > u
                        && g.is_vertex(v)
                        && deg[u] >= 3
                        && deg[v] >= 3
                        && arcs_between(g, u, v).len() == 1
                        && plain(g, id)
                    {
                        out.push(Redex::new(rule, vec![P(u), P(v)]));
                    }
                }
            }
        }
        Fusion0Rw => {
            for v in g.vertices().filter(|&v| deg[v] == 1) {
                let e = ends(g, v);
                if let [(id, u)] = e[..] {
                    if g.is_vertex(u) && !tol.is_zero(g.arc(id).unwrap().weight()) {
                        out.push(Redex::new(rule, vec![P(v), P(u)]));
                    }
                }
            }
        }
        Pivot => {
            let mut found: Vec<(f64, usize, usize)> = Vec::new();
            let classes: Vec<(usize, NodeClass)> =
                g.vertices().map(|v| (v, node_class(g, v))).collect();
            let class = |p: usize| classes.iter().find(|c| c.0 == p).map(|c| c.1);
            for u in g.vertices() {
                for v in g.neighbours(u) {
                    if v <= u || !g.is_vertex(v) {
                        continue;
                    }
                    let internal = class(u) == Some(NodeClass::Internal)
                        || class(v) == Some(NodeClass::Internal);
                    let r = g.weight_between(u, v);
                    if internal && !tol.is_zero(r) {
                        found.push((r.norm(), u, v));
                    }
                }
            }
            found.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
            out.extend(found.into_iter().map(|(_, u, v)| Redex::new(rule, vec![P(u), P(v)])));
        }
        Reduce1 | Reduce2 | Reduce3 | Reduce4 => {}
    }
    out
}

/// Applies a redex found by [`find_redexes`] on the current diagram.
pub fn apply_unchecked(g: &mut ArcDiagram, r: &Redex, tol: &Tolerance) {
    use RuleId::*;
    match r.rule {
        WLoop | WLoopRw | ZeroEdge => {
            g.remove_arc(r.arc(0));
        }
        PhaseFusion | PhaseFusionRw => {
            let arc = g.arc_mut(r.arc(0)).unwrap();
            let w = arc.weight();
            arc.factors = vec![w];
        }
        ZBinary => {
            let arc = g.arc_mut(r.arc(0)).unwrap();
            let i = arc.factors.iter().position(|&f| tol.approx_eq(f, ONE)).unwrap();
            arc.factors.remove(i);
        }
        PhaseDistrib => {
            let v = r.point(0);
            let ids: Vec<usize> = g.arcs_at(v).map(|a| a.id).collect();
            let factor = *g.arc(ids[0]).unwrap().factors.last().unwrap();
            for id in ids {
                g.arc_mut(id).unwrap().factors.pop();
            }
            g.scalar *= factor;
        }
        Sum | SumRw => {
            let y = g.remove_arc(r.arc(1)).unwrap();
            let x = g.arc_mut(r.arc(0)).unwrap();
            let w = x.weight() + y.weight();
            x.factors = vec![w];
        }
        FswapZ | FswapsW | FswapRemoval | FswapRemovalRw | FloopRw => {
            let i = g.position(r.point(0));
            g.swap_adjacent(i);
        }
        FswapYB => {
            let v = r.point(0);
            let i = g.position(v);
            g.move_vertex(v, i + 2);
        }
        FswapRotated => g.move_vertex(r.point(0), 0),
        Zero => g.scalar *= ZERO,
        ZeroRw => {
            g.scalar = ZERO;
            let vs: Vec<usize> = g.vertices().collect();
            for v in vs {
                g.remove_vertex(v);
            }
        }
        WSpiderFusion | FusionRw => {
            let (u, x) = (r.point(0), r.point(1));
            g.pivot(u, x);
        }
        WBinary | BinaryWRw | WBialgebra | Fusion0Rw | Pivot => {
            g.pivot(r.point(0), r.point(1));
        }
        Reduce1 | Reduce2 | Reduce3 | Reduce4 => {
            unreachable!("{} acts on WGS-X forms", r.rule)
        }
    }
}

/// Applies a redex after checking that it is currently present.
pub fn apply_rule(g: &mut ArcDiagram, r: &Redex, tol: &Tolerance) -> Result<(), RewriteError> {
    if r.rule.family() == RuleFamily::Reduce {
        return Err(RewriteError::WrongSubstrate(r.rule));
    }
    if !find_redexes(g, r.rule, tol).contains(r) {
        return Err(RewriteError::NoRedex(r.rule));
    }
    apply_unchecked(g, r, tol);
    Ok(())
}

/// Kind of the point an anchor names, for tests and traces.
pub fn anchor_kind(g: &ArcDiagram, a: Anchor) -> Option<PointKind> {
    match a {
        Anchor::Point(p) => g.kind(p),
        _ => None,
    }
}

/// `Pf(W[T])` for a sorted set of at most four vertices.
fn small_pf(w: &Wgsx, t: &[usize]) -> Complex {
    match t.len() {
        0 => ONE,
        2 => w.w(t[0], t[1]),
        4 => {
            w.w(t[0], t[1]) * w.w(t[2], t[3]) - w.w(t[0], t[2]) * w.w(t[1], t[3])
                + w.w(t[0], t[3]) * w.w(t[1], t[2])
        }
        _ => ZERO,
    }
}

fn reduce_rule(w: &Wgsx, i: usize, j: usize) -> RuleId {
    match (w.degree(i) == 1, w.degree(j) == 1) {
        (true, true) => RuleId::Reduce1,
        (true, false) => RuleId::Reduce2,
        (false, true) => RuleId::Reduce3,
        (false, false) => RuleId::Reduce4,
    }
}

/// Redexes of a reduction rule: a vertex `i` with `b_i = 0` and a neighbour
/// `j > i`, classified by whether each of them has degree one.
pub fn find_wgsx_redexes(w: &Wgsx, rule: RuleId, tol: &Tolerance) -> Vec<Redex> {
    let mut out = Vec::new();
    if w.is_zero() {
        return out;
    }
    for (&(i, j), &x) in &w.edges {
        if !w.b.get(i) && !tol.is_zero(x) && reduce_rule(w, i, j) == rule {
            out.push(Redex::new(rule, vec![Anchor::Vertex(i), Anchor::Vertex(j)]));
        }
    }
    out
}

/// Re-expresses the form around `b ⊕ e_i ⊕ e_j`: the new scalar is
/// `s·w_ij` and every new weight is `Pf(W[{i,j} ⊕ {k,l}]) / w_ij`.
pub fn apply_wgsx(w: &Wgsx, r: &Redex) -> Wgsx {
    let (i, j) = (r.vertex(0), r.vertex(1));
    let wij = w.w(i, j);
    let mut next = Wgsx {
        scalar: w.scalar * wij,
        n: w.n,
        edges: Default::default(),
        b: w.b.flip(i).flip(j),
    };
    for k in 1..=w.n {
        for l in (k + 1)..=w.n {
            let mut t: Vec<usize> = Vec::with_capacity(4);
            for v in [i, j, k, l] {
                if let Some(p) = t.iter().position(|&x| x == v) {
                    t.remove(p);
                } else {
                    t.push(v);
                }
            }
            t.sort_unstable();
            let value = small_pf(w, &t) / wij;
            next.set_edge(k, l, value);
        }
    }
    next
}
