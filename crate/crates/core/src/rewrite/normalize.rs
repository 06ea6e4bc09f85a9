use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arc::ArcDiagram;
use crate::bits::BitWord;
use crate::complex::{Complex, Tolerance, ONE, ZERO};
use crate::logc::format_complex;
use crate::term::TermDiagram;

use super::measure::MeasureT;
use super::rules::{apply_unchecked, apply_wgsx, find_redexes, find_wgsx_redexes, Anchor, Redex, RuleId};
use super::wgsx::Wgsx;

/// One line of a rewrite trace.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub index: usize,
    pub rule: RuleId,
    pub anchors: Vec<Anchor>,
    /// Factor contributed to the global scalar.
    pub scalar: Complex,
}

/// `step <k> rule=<name> at=<anchors> scalar=<c>`
impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut at = String::new();
        for (i, a) in self.anchors.iter().enumerate() {
            if i > 0 {
                at.push(',');
            }
            at.push_str(&alloc::format!("{a}"));
        }
        write!(
            f,
            "step {} rule={} at={} scalar={}",
            self.index,
            self.rule.name(),
            at,
            format_complex(self.scalar)
        )
    }
}

#[derive(Default)]
struct Tracer {
    enabled: bool,
    steps: Vec<TraceStep>,
    count: usize,
}

impl Tracer {
    fn record(&mut self, rule: RuleId, anchors: Vec<Anchor>, scalar: Complex) {
        self.count += 1;
        if self.enabled {
            self.steps.push(TraceStep {
                index: self.count,
                rule,
                anchors,
                scalar,
            });
        }
    }
}

/// Result of a traced normalization.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub form: Wgsx,
    pub trace: Vec<TraceStep>,
    /// Measure before the first-step rewrites and after each of them.
    pub measures: Vec<MeasureT>,
}

pub fn normalize(d: &TermDiagram, tol: &Tolerance) -> Wgsx {
    run(d, tol, false).form
}

pub fn normalize_traced(d: &TermDiagram, tol: &Tolerance) -> Normalized {
    run(d, tol, true)
}

fn run(d: &TermDiagram, tol: &Tolerance, trace: bool) -> Normalized {
    let mut tracer = Tracer {
        enabled: trace,
        ..Tracer::default()
    };
    let mut g = ArcDiagram::from_term(d);
    let measures = step_one(&mut g, tol, &mut tracer, trace);
    let form = step_two(g, tol, &mut tracer);
    let form = step_three(form, tol, &mut tracer);
    Normalized {
        form,
        trace: tracer.steps,
        measures,
    }
}

fn ratio(before: Complex, after: Complex) -> Complex {
    if before == ZERO {
        ONE
    } else {
        after / before
    }
}

/// The first rule in priority order with a redex, and its first redex.
pub fn next_step_one_redex(g: &ArcDiagram, tol: &Tolerance) -> Option<Redex> {
    RuleId::STEP_ONE
        .iter()
        .find_map(|&r| find_redexes(g, r, tol).into_iter().next())
}

/// Applies the oriented rules until none matches. Leaves a pseudo form
/// whose remaining black nodes all touch the boundary.
fn step_one(g: &mut ArcDiagram, tol: &Tolerance, tracer: &mut Tracer, measure: bool) -> Vec<MeasureT> {
    let mut measures = Vec::new();
    if measure {
        measures.push(MeasureT::of(g));
    }
    while let Some(redex) = next_step_one_redex(g, tol) {
        let before = g.scalar;
        apply_unchecked(g, &redex, tol);
        tracer.record(redex.rule, redex.anchors, ratio(before, g.scalar));
        if measure {
            measures.push(MeasureT::of(g));
        }
        if g.scalar == ZERO {
            break;
        }
    }
    measures
}

/// Runs the first step only, returning the resulting arc diagram.
pub fn step_one_only(d: &TermDiagram, tol: &Tolerance) -> (ArcDiagram, Vec<MeasureT>) {
    let mut g = ArcDiagram::from_term(d);
    let mut tracer = Tracer::default();
    let m = step_one(&mut g, tol, &mut tracer, true);
    (g, m)
}

/// Per output: the slot nodes in front of it. `y` carries the output's
/// former arcs while it lives; `x` sits between `y` and the output.
#[derive(Clone, Copy)]
struct Slot {
    y: Option<usize>,
    x: usize,
}

fn insert_slot(g: &mut ArcDiagram, k: usize, tracer: &mut Tracer) -> Slot {
    let o = g.output_point(k);
    let pos = g.position(o);
    let y = g.insert_vertex(pos);
    let x = g.insert_vertex(pos + 1);
    let ids: Vec<usize> = g.arcs_at(o).map(|a| a.id).collect();
    for id in ids {
        g.reattach(id, o, y);
    }
    g.add_arc(y, x, Vec::new());
    g.add_arc(x, o, Vec::new());
    tracer.record(
        RuleId::WBinary,
        vec![Anchor::Point(y), Anchor::Point(x), Anchor::Point(o)],
        ONE,
    );
    Slot { y: Some(y), x }
}

/// Eliminates every remaining black node and reads off a WGS-X form.
fn step_two(mut g: ArcDiagram, tol: &Tolerance, tracer: &mut Tracer) -> Wgsx {
    let n = g.n_outputs();
    if tol.is_zero(g.scalar) {
        return Wgsx::zero(n);
    }
    let mut slots: Vec<Slot> = (0..n).map(|k| insert_slot(&mut g, k, tracer)).collect();
    loop {
        let is_slot = |p: usize, slots: &[Slot]| slots.iter().any(|s| s.x == p || s.y == Some(p));
        let original = g.vertices().find(|&p| !is_slot(p, &slots));
        let Some(u) = original else { break };
        let mut best: Option<(u8, f64, usize)> = None;
        for v in g.neighbours(u) {
            if !g.is_vertex(v) {
                continue;
            }
            let w = g.weight_between(u, v);
            if tol.is_zero(w) {
                continue;
            }
            let rank = if !is_slot(v, &slots) {
                0
            } else if slots.iter().any(|s| s.y == Some(v)) {
                1
            } else {
                2
            };
            let better = match best {
                None => true,
                Some((r, m, _)) => w.norm() > m || (w.norm() == m && rank < r),
            };
            if better {
                best = Some((rank, w.norm(), v));
            }
        }
        let Some((rank, _, v)) = best else {
            tracer.record(RuleId::ZeroRw, vec![Anchor::Point(u)], ZERO);
            return Wgsx::zero(n);
        };
        let before = g.scalar;
        match rank {
            0 => {
                g.pivot(u, v);
            }
            1 => {
                g.bring_before(u, v);
                g.eliminate_adjacent(u, v);
                let k = slots.iter().position(|s| s.y == Some(v)).unwrap();
                slots[k].y = None;
            }
            _ => {
                g.bring_before(u, v);
                g.eliminate_adjacent(u, v);
                let k = slots.iter().position(|s| s.x == v).unwrap();
                slots[k] = insert_slot(&mut g, k, tracer);
            }
        }
        tracer.record(
            RuleId::Pivot,
            vec![Anchor::Point(u), Anchor::Point(v)],
            ratio(before, g.scalar),
        );
    }
    read_off(&g, &slots, tol, tracer)
}

fn read_off(g: &ArcDiagram, slots: &[Slot], tol: &Tolerance, tracer: &mut Tracer) -> Wgsx {
    let n = slots.len();
    let mut scalar = g.scalar;
    let mut bits = vec![false; n];
    let mut z = vec![0usize; n];
    let mut scale = vec![ONE; n];
    for (k, s) in slots.iter().enumerate() {
        let o = g.output_point(k);
        let c = g.weight_between(s.x, o);
        let factor = match s.y {
            Some(y) => {
                let d = g.weight_between(y, s.x);
                z[k] = y;
                scale[k] = c / d;
                d
            }
            None => {
                z[k] = s.x;
                bits[k] = true;
                scale[k] = ONE / c;
                c
            }
        };
        scalar *= factor;
        tracer.record(RuleId::PhaseDistrib, vec![Anchor::Point(z[k])], factor);
    }
    let mut form = Wgsx {
        scalar,
        n,
        edges: Default::default(),
        b: BitWord::from_bits(&bits).expect("at most 64 wires"),
    };
    for k in 0..n {
        for l in (k + 1)..n {
            let w = g.weight_between(z[k], z[l]) * scale[k] * scale[l];
            if !tol.is_zero(w) {
                form.set_edge(k + 1, l + 1, w);
            }
        }
    }
    form.prune(tol);
    form
}

/// Applies the reduction rules at the leftmost offending vertex until the
/// form is reduced; at most `n` rounds.
fn step_three(mut w: Wgsx, tol: &Tolerance, tracer: &mut Tracer) -> Wgsx {
    loop {
        let mut all: Vec<Redex> = [RuleId::Reduce1, RuleId::Reduce2, RuleId::Reduce3, RuleId::Reduce4]
            .iter()
            .flat_map(|&r| find_wgsx_redexes(&w, r, tol))
            .collect();
        if all.is_empty() {
            return w;
        }
        let key = |r: &Redex| match (r.anchors[0], r.anchors[1]) {
            (Anchor::Vertex(i), Anchor::Vertex(j)) => (i, j),
            _ => unreachable!(),
        };
        let i = all.iter().map(|r| key(r).0).min().unwrap();
        all.retain(|r| key(r).0 == i);
        let best = all
            .iter()
            .max_by(|a, b| {
                let (wa, wb) = (w.w(i, key(a).1).norm(), w.w(i, key(b).1).norm());
                wa.total_cmp(&wb).then(key(b).1.cmp(&key(a).1))
            })
            .unwrap()
            .clone();
        let before = w.scalar;
        w = apply_wgsx(&w, &best);
        w.prune(tol);
        tracer.record(best.rule, best.anchors, ratio(before, w.scalar));
    }
}

/// Reduces a WGS-X form with the reduction rules.
pub fn reduce_wgsx(w: Wgsx, tol: &Tolerance) -> Wgsx {
    step_three(w, tol, &mut Tracer::default())
}

/// The WGS-X form of an arc diagram, through the elimination step only.
pub fn arc_to_wgsx(g: &ArcDiagram, tol: &Tolerance) -> Wgsx {
    step_two(g.clone(), tol, &mut Tracer::default())
}

/// The state of an arc diagram, by eliminating its black nodes and
/// evaluating the resulting form; no weights are discarded.
pub fn arc_tensor(g: &ArcDiagram) -> crate::tensor::Tensor {
    let exact = Tolerance { eps: 0.0, abs: 0.0 };
    arc_to_wgsx(g, &exact).tensor()
}

/// Whether two diagrams have equal interpretations, decided on normal forms.
pub fn equal(a: &TermDiagram, b: &TermDiagram, tol: &Tolerance) -> bool {
    if a.n_inputs() != b.n_inputs() || a.n_outputs() != b.n_outputs() {
        return false;
    }
    normalize(a, tol).approx_eq(&normalize(b, tol), tol)
}
