//! Acceptance criteria. Each test prints one `criterion N ...: PASS|FAIL`
//! line straight to stdout so the verdicts show up even when output capture
//! is on.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use pw_core::arc::ArcDiagram;
use pw_core::complex::{c, ONE, ZERO};
use pw_core::fkt::{
    kasteleyn_grid_count, kasteleyn_grid_log10, matching_weight_fkt, pfaffian, scalar_eval_fkt, SkewMatrix,
};
use pw_core::matchgate::{
    compose_states, contract_consecutive, mgi_check, parity_check, state_tensor_product, synthesize,
    weight2_reconstruct,
};
use pw_core::oracle::{interpret, scalar_brute};
use pw_core::rewrite::{
    apply_rule, apply_wgsx, arc_tensor, equal, find_redexes, find_wgsx_redexes, normalize, normalize_traced,
    RuleFamily, RuleId, Wgsx,
};
use pw_core::term::{grid_diagram, state_form, Generator, TermDiagram as T};
use pw_core::{BitWord, Complex, Tensor, Tolerance};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

const EPS: f64 = 1e-9;

fn tol() -> Tolerance {
    Tolerance::new(EPS)
}

fn report(n: usize, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {n} {name}: {verdict} {detail}");
    let _ = out.flush();
}

/// Relative distance between two tensors: `max |a − b| / max(1, max |a|, max |b|)`.
fn rel_err(a: &Tensor, b: &Tensor) -> f64 {
    a.max_abs_diff(b) / a.max_norm().max(b.max_norm()).max(1.0)
}

/// A random host term with its oracle tensor; terms whose intermediate
/// width exceeds the oracle cap are resampled.
fn host_term(rng: &mut StdRng) -> (T, Tensor) {
    loop {
        let d = common::random_term(rng, 20, 10);
        if d.generator_count() <= 20 && d.n_inputs() + d.n_outputs() <= 10 {
            if let Ok(t) = interpret(&d) {
                return (d, t);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 1

fn some_vertex(g: &mut ArcDiagram, rng: &mut StdRng) -> usize {
    let vs: Vec<usize> = g.vertices().collect();
    match vs.choose(rng) {
        Some(&v) => v,
        None => {
            let pos = rng.gen_range(0..=g.order().len());
            g.insert_vertex(pos)
        }
    }
}

fn some_point(g: &mut ArcDiagram, rng: &mut StdRng) -> usize {
    if g.order().is_empty() {
        return some_vertex(g, rng);
    }
    *g.order().choose(rng).unwrap()
}

fn two_vertices(g: &mut ArcDiagram, rng: &mut StdRng) -> (usize, usize) {
    while g.vertex_count() < 2 {
        let pos = rng.gen_range(0..=g.order().len());
        g.insert_vertex(pos);
    }
    let vs: Vec<usize> = g.vertices().collect();
    let pair: Vec<usize> = vs.choose_multiple(rng, 2).copied().collect();
    (pair[0], pair[1])
}

fn factors(rng: &mut StdRng, lo: usize, hi: usize) -> Vec<Complex> {
    let k = rng.gen_range(lo..=hi);
    (0..k).map(|_| common::nonzero_weight(rng)).collect()
}

fn new_vertex(g: &mut ArcDiagram, rng: &mut StdRng) -> usize {
    let pos = rng.gen_range(0..=g.order().len());
    g.insert_vertex(pos)
}

/// Adds a pattern to `g` that the rule should match.
fn plant(g: &mut ArcDiagram, rule: RuleId, rng: &mut StdRng) {
    use RuleId::*;
    match rule {
        WLoop | WLoopRw => {
            let v = some_vertex(g, rng);
            let f = if rule == WLoop { Vec::new() } else { factors(rng, 0, 3) };
            g.add_arc(v, v, f);
        }
        PhaseFusion | PhaseFusionRw => {
            let (p, q) = (some_point(g, rng), some_point(g, rng));
            let f = factors(rng, 2, 4);
            g.add_arc(p, q, f);
        }
        ZBinary => {
            let (p, q) = (some_point(g, rng), some_point(g, rng));
            let mut f = factors(rng, 0, 2);
            let at = rng.gen_range(0..=f.len());
            f.insert(at, ONE);
            g.add_arc(p, q, f);
        }
        ZeroEdge => {
            let v = some_vertex(g, rng);
            let p = some_point(g, rng);
            g.add_arc(v, p, vec![common::nonzero_weight(rng), ZERO]);
        }
        PhaseDistrib => {
            let v = some_vertex(g, rng);
            if g.degree(v) == 0 || rng.gen_bool(0.3) {
                let p = some_point(g, rng);
                if p != v {
                    g.add_arc(v, p, factors(rng, 0, 1));
                }
            }
            let loops: Vec<usize> = g.arcs_at(v).filter(|a| a.is_loop()).map(|a| a.id).collect();
            for id in loops {
                g.remove_arc(id);
            }
            let r = common::nonzero_weight(rng);
            let ids: Vec<usize> = g.arcs_at(v).map(|a| a.id).collect();
            for id in ids {
                g.arc_mut(id).unwrap().factors.push(r);
            }
        }
        Sum | SumRw => {
            let existing: Vec<(usize, usize)> =
                g.arcs().iter().filter(|a| !a.is_loop()).map(|a| (a.a, a.b)).collect();
            let (p, q) = match existing.choose(rng) {
                Some(&pq) if rng.gen_bool(0.7) => pq,
                _ => {
                    let (u, v) = two_vertices(g, rng);
                    g.add_arc(u, v, factors(rng, 0, 1));
                    (u, v)
                }
            };
            let f = if rule == Sum { factors(rng, 0, 1) } else { factors(rng, 0, 3) };
            if rng.gen_bool(0.5) {
                g.add_arc(p, q, f);
            } else {
                g.add_arc(q, p, f);
            }
        }
        Zero | ZeroRw => {
            new_vertex(g, rng);
        }
        WSpiderFusion | FusionRw => {
            let (u, v) = two_vertices(g, rng);
            let x = new_vertex(g, rng);
            let (f1, f2) = if rule == WSpiderFusion {
                (Vec::new(), Vec::new())
            } else {
                (factors(rng, 0, 2), factors(rng, 0, 2))
            };
            g.add_arc(u, x, f1);
            g.add_arc(x, v, f2);
            if rule == FusionRw {
                for w in [u, v] {
                    if g.degree(w) == 2 {
                        let p = some_point(g, rng);
                        if p != w && p != x {
                            g.add_arc(w, p, factors(rng, 0, 1));
                        }
                    }
                }
            }
        }
        WBinary | BinaryWRw => {
            let pos = rng.gen_range(0..=g.order().len());
            let x1 = g.insert_vertex(pos);
            let x2 = g.insert_vertex(pos + rng.gen_range(0..=1));
            let mid = if rule == WBinary { factors(rng, 0, 2) } else { factors(rng, 1, 2) };
            g.add_arc(x1, x2, mid);
            for x in [x1, x2] {
                let p = some_point(g, rng);
                let p = if p == x1 || p == x2 { some_vertex(g, rng) } else { p };
                let f = if rule == WBinary { Vec::new() } else { factors(rng, 0, 1) };
                g.add_arc(x, p, f);
            }
        }
        WBialgebra | Pivot => {
            let u = new_vertex(g, rng);
            let v = new_vertex(g, rng);
            let f = if rule == WBialgebra { Vec::new() } else { factors(rng, 1, 1) };
            g.add_arc(u, v, f);
            for x in [u, v] {
                for _ in 0..2 {
                    let p = if rule == Pivot { some_vertex(g, rng) } else { some_point(g, rng) };
                    if p != u && p != v {
                        g.add_arc(x, p, factors(rng, 0, 1));
                    }
                }
            }
        }
        Fusion0Rw => {
            let u = some_vertex(g, rng);
            let v = new_vertex(g, rng);
            g.add_arc(v, u, factors(rng, 0, 2));
        }
        FswapZ | FswapsW | FswapRemoval | FswapRemovalRw | FloopRw | FswapYB | FswapRotated => {
            let (u, v) = two_vertices(g, rng);
            let x = new_vertex(g, rng);
            g.add_arc(u, x, factors(rng, 0, 1));
            let p = some_point(g, rng);
            g.add_arc(v, p, factors(rng, 0, 1));
        }
        Reduce1 | Reduce2 | Reduce3 | Reduce4 => unreachable!(),
    }
}

struct Soundness {
    hosts: usize,
    planted: usize,
    max_err: f64,
    failures: Vec<String>,
}

fn arc_rule_soundness(rule: RuleId, seed: u64, target: usize) -> Soundness {
    let tol = tol();
    let mut rng = common::rng(seed);
    let mut s = Soundness {
        hosts: 0,
        planted: 0,
        max_err: 0.0,
        failures: Vec::new(),
    };
    let mut attempts = 0;
    while s.hosts < target && attempts < 50 * target {
        attempts += 1;
        let (d, oracle) = host_term(&mut rng);
        let mut g = ArcDiagram::from_term(&d);
        let mut redexes = find_redexes(&g, rule, &tol);
        let mut planted = false;
        if redexes.is_empty() || rng.gen_bool(0.3) {
            for _ in 0..4 {
                plant(&mut g, rule, &mut rng);
                planted = true;
                redexes = find_redexes(&g, rule, &tol);
                if !redexes.is_empty() {
                    break;
                }
            }
        }
        let Some(redex) = redexes.choose(&mut rng).cloned() else { continue };
        let before = if planted { arc_tensor(&g) } else { oracle };
        let mut h = g.clone();
        if let Err(e) = apply_rule(&mut h, &redex, &tol) {
            s.failures.push(format!("{rule}: {e}"));
            continue;
        }
        let after = arc_tensor(&h);
        let err = rel_err(&before, &after);
        s.max_err = s.max_err.max(err);
        if !before.approx_eq(&after, &tol) {
            s.failures.push(format!("{rule} at {:?}: error {err:e} on {}", redex.anchors, pw::print_diagram(&d)));
        }
        s.hosts += 1;
        s.planted += usize::from(planted);
    }
    s
}

fn random_wgsx(rng: &mut StdRng) -> Wgsx {
    let n = rng.gen_range(2..=10);
    let mut w = Wgsx::zero(n);
    w.scalar = common::nonzero_weight(rng);
    let p = rng.gen_range(0.1..0.9);
    for i in 1..=n {
        for j in i + 1..=n {
            if rng.gen_bool(p) {
                w.set_edge(i, j, common::nonzero_weight(rng));
            }
        }
    }
    w.b = BitWord::from_index(rng.gen_range(0..1u64 << n), n);
    w
}

fn reduce_rule_soundness(rule: RuleId, seed: u64, target: usize) -> Soundness {
    let tol = tol();
    let mut rng = common::rng(seed);
    let mut s = Soundness {
        hosts: 0,
        planted: 0,
        max_err: 0.0,
        failures: Vec::new(),
    };
    let mut attempts = 0;
    while s.hosts < target && attempts < 200 * target {
        attempts += 1;
        let w = random_wgsx(&mut rng);
        let redexes = find_wgsx_redexes(&w, rule, &tol);
        let Some(r) = redexes.choose(&mut rng) else { continue };
        let before = w.tensor();
        let after = apply_wgsx(&w, r).tensor();
        let err = rel_err(&before, &after);
        s.max_err = s.max_err.max(err);
        if !before.approx_eq(&after, &tol) {
            s.failures.push(format!("{rule} at {:?} on {w}: error {err:e}", r.anchors));
        }
        s.hosts += 1;
    }
    s
}

#[test]
fn criterion_1_rule_soundness() {
    const HOSTS: usize = 1000;
    let start = Instant::now();
    let results: Vec<(RuleId, Soundness)> = std::thread::scope(|scope| {
        let handles: Vec<_> = RuleId::ALL
            .iter()
            .enumerate()
            .map(|(k, &rule)| {
                scope.spawn(move || {
                    let seed = 1000 + k as u64;
                    let s = if rule.family() == RuleFamily::Reduce {
                        reduce_rule_soundness(rule, seed, HOSTS)
                    } else {
                        arc_rule_soundness(rule, seed, HOSTS)
                    };
                    (rule, s)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    // The elimination evaluator used above against the Pfaffian definition.
    let mut rng = common::rng(999);
    let mut eval_err: f64 = 0.0;
    for _ in 0..200 {
        let (d, oracle) = host_term(&mut rng);
        let g = ArcDiagram::from_term(&d);
        let (direct, fast) = (g.tensor(), arc_tensor(&g));
        eval_err = eval_err.max(rel_err(&direct, &fast)).max(rel_err(&direct, &oracle));
    }
    let elapsed = start.elapsed().as_secs_f64();

    let mut ok = eval_err <= EPS && elapsed < 300.0;
    let mut max_err: f64 = 0.0;
    let mut min_hosts = usize::MAX;
    for (rule, s) in &results {
        max_err = max_err.max(s.max_err);
        min_hosts = min_hosts.min(s.hosts);
        if s.hosts < HOSTS || !s.failures.is_empty() {
            ok = false;
            eprintln!("{rule}: {} hosts, {} failures", s.hosts, s.failures.len());
            for f in s.failures.iter().take(3) {
                eprintln!("  {f}");
            }
        }
        eprintln!("{rule}: hosts={} planted={} max_err={:e}", s.hosts, s.planted, s.max_err);
    }
    report(
        1,
        "rule-soundness",
        ok,
        &format!(
            "rules={} min_hosts={min_hosts} max_rel_err={max_err:.2e} evaluator_err={eval_err:.2e} tol={EPS:e} time={elapsed:.1}s limit=300s",
            results.len()
        ),
    );
    assert!(ok);
}

// ---------------------------------------------------------------------------
// Criterion 2

#[test]
fn criterion_2_normalization() {
    let tol = tol();
    let mut rng = common::rng(2002);
    let mut bad = Vec::new();
    let mut max_err: f64 = 0.0;
    let mut steps = 0;
    for case in 0..1000 {
        let (d, expect) = host_term(&mut rng);
        let n = normalize_traced(&d, &tol);
        steps += n.trace.len();
        let err = rel_err(&n.form.tensor(), &expect);
        max_err = max_err.max(err);
        if err > EPS {
            bad.push(format!("case {case}: form differs by {err:e}"));
        }
        if !n.form.is_reduced() {
            bad.push(format!("case {case}: {} is not reduced", n.form));
        }
        if let Some(w) = n.measures.windows(2).find(|w| w[1] >= w[0]) {
            bad.push(format!("case {case}: measure {:?} -> {:?}", w[0], w[1]));
        }
        let back = n.form.to_diagram();
        let back_t = evaluate(&back);
        let rt = rel_err(&back_t, &expect);
        max_err = max_err.max(rt);
        if rt > EPS {
            bad.push(format!("case {case}: round trip differs by {rt:e}"));
        }
        if !normalize(&back, &tol).approx_eq(&n.form, &tol) {
            bad.push(format!("case {case}: normal form is not stable"));
        }
    }
    for b in bad.iter().take(5) {
        eprintln!("{b}");
    }
    report(
        2,
        "normalization",
        bad.is_empty(),
        &format!("terms=1000 rewrite_steps={steps} failures={} max_rel_err={max_err:.2e} tol={EPS:e}", bad.len()),
    );
    assert!(bad.is_empty());
}

// ---------------------------------------------------------------------------
// Criterion 3

fn leaf(g: &Generator) -> T {
    T::generator(g.clone()).unwrap()
}

/// `id(i) ⊗ f ⊗ id(k − i − 1)` for a one-wire `f`.
fn on_wire(f: T, i: usize, k: usize) -> T {
    T::tensor_all([T::identity(i), f, T::identity(k - i - 1)])
}

/// A semantically neutral replacement for one generator.
fn neutral_rewrite(g: &Generator, rng: &mut StdRng) -> T {
    let (n, m) = g.arity();
    let here = leaf(g);
    let snake = || T::tensor(T::cap(), T::identity(1)).then(T::tensor(T::identity(1), T::cup()));
    let r = common::nonzero_weight(rng);
    let pick = rng.gen_range(0..6);
    match (g, pick) {
        (Generator::Black(n, m), 0) => T::black(*n, 1).then(T::x()).then(T::black(1, *m)),
        (Generator::White(w), 0) => T::white(r).unwrap().then(T::white(*w / r).unwrap()),
        (Generator::Scalar(s), 0) => T::tensor(T::scalar(r).unwrap(), T::scalar(*s / r).unwrap()),
        (Generator::FSwap, 0) => T::fswap().then(T::fswap()).then(T::fswap()),
        (Generator::Cap, 0) => T::cap().then(T::tensor(T::white(r).unwrap(), T::white(ONE / r).unwrap())),
        (Generator::Cup, 0) => T::tensor(T::white(r).unwrap(), T::white(ONE / r).unwrap()).then(T::cup()),
        _ if pick <= 2 && m > 0 => {
            let i = rng.gen_range(0..m);
            let f = match pick {
                1 => snake(),
                _ => T::white(ONE).unwrap(),
            };
            here.then(on_wire(f, i, m))
        }
        _ if pick <= 4 && n > 0 => {
            let i = rng.gen_range(0..n);
            on_wire(T::x().then(T::x()), i, n).then(here)
        }
        _ => T::tensor_all([T::scalar(r).unwrap(), here, T::scalar(ONE / r).unwrap()]),
    }
}

fn rewrite_once(d: &T, rng: &mut StdRng) -> T {
    let target = rng.gen_range(0..d.generator_count());
    let mut k = 0;
    d.map_leaves(&mut |g| {
        let out = if k == target { neutral_rewrite(g, rng) } else { leaf(g) };
        k += 1;
        out
    })
}

fn same_triple(a: &Wgsx, b: &Wgsx, tol: &Tolerance) -> bool {
    a.n == b.n
        && a.b == b.b
        && a.edges.keys().eq(b.edges.keys())
        && tol.approx_eq(a.scalar, b.scalar)
        && a.edges.iter().zip(&b.edges).all(|((_, x), (_, y))| tol.approx_eq(*x, *y))
}

/// A small change to one generator.
fn perturb(d: &T, rng: &mut StdRng) -> T {
    let target = rng.gen_range(0..d.generator_count());
    let mut k = 0;
    let delta = common::nonzero_weight(rng);
    d.map_leaves(&mut |g| {
        let here = k == target;
        k += 1;
        if !here {
            return leaf(g);
        }
        match g {
            Generator::White(w) => T::white(*w + delta).unwrap(),
            Generator::Scalar(s) => T::scalar(*s + delta).unwrap(),
            _ => {
                let (_, m) = g.arity();
                if m > 0 {
                    leaf(g).then(on_wire(T::white(c(2.0, 0.0) + delta).unwrap(), rng.gen_range(0..m), m))
                } else {
                    T::tensor(leaf(g), T::scalar(c(2.0, 0.0)).unwrap())
                }
            }
        }
    })
}

#[test]
fn criterion_3_equality() {
    let tol = tol();
    let mut rng = common::rng(3003);
    let mut bad = Vec::new();
    let mut total_rewrites = 0;
    let mut equal_pairs = 0;
    while equal_pairs < 500 {
        let d = common::random_term(&mut rng, 12, 6);
        let steps = rng.gen_range(1..=30);
        total_rewrites += steps;
        let mut e = d.clone();
        for _ in 0..steps {
            e = rewrite_once(&e, &mut rng);
        }
        let (td, te) = match (interpret(&d), interpret(&e)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        if !td.approx_eq(&te, &tol) {
            bad.push(format!("rewrite changed the map: {}", pw::print_diagram(&d)));
        }
        equal_pairs += 1;
        let (fd, fe) = (normalize(&d, &tol), normalize(&e, &tol));
        if !equal(&d, &e, &tol) || !same_triple(&fd, &fe, &tol) {
            bad.push(format!("equal pair missed: {fd} vs {fe}"));
        }
    }
    let mut distinct_pairs = 0;
    while distinct_pairs < 500 {
        let d = common::random_term(&mut rng, 12, 6);
        let e = perturb(&d, &mut rng);
        let (td, te) = (interpret(&d).unwrap(), interpret(&e).unwrap());
        if rel_err(&td, &te) < 1e-6 {
            continue;
        }
        distinct_pairs += 1;
        if equal(&d, &e, &tol) {
            bad.push(format!("distinct pair called equal: {}", pw::print_diagram(&d)));
        }
    }
    for b in bad.iter().take(5) {
        eprintln!("{b}");
    }
    report(
        3,
        "equality",
        bad.is_empty(),
        &format!(
            "equal_pairs={equal_pairs} rewrites={total_rewrites} distinguished_pairs={distinct_pairs} failures={} tol={EPS:e}",
            bad.len()
        ),
    );
    assert!(bad.is_empty());
}

// ---------------------------------------------------------------------------
// Criterion 4

#[test]
fn criterion_4_fkt() {
    let mut rng = common::rng(4004);
    let mut bad = Vec::new();
    let mut max_err: f64 = 0.0;
    let mut nonzero = 0;
    for case in 0..1000 {
        let g = common::random_plane_graph(&mut rng, 14);
        let fkt = matching_weight_fkt(&g).to_complex();
        let brute = scalar_brute(&g.to_graph_form()).unwrap();
        let err = (fkt - brute).norm() / brute.norm().max(1.0);
        max_err = max_err.max(err);
        nonzero += usize::from(brute.norm() > 1e-9);
        if err > EPS {
            bad.push(format!("graph {case}: fkt {fkt} brute {brute}"));
        }
    }
    let mut grids = 0;
    for m in 2..=8 {
        for n in 2..=8 {
            let v = scalar_eval_fkt(&grid_diagram(m, n, ONE).unwrap()).unwrap().to_complex();
            let k = kasteleyn_grid_count(m, n);
            if v.re.round() != k.round() || (v.re - k.round()).abs() > 1e-6 || v.im.abs() > 1e-6 {
                bad.push(format!("{m}x{n} grid: {v} vs {k}"));
            }
            grids += 1;
        }
    }
    let start = Instant::now();
    let big = scalar_eval_fkt(&grid_diagram(30, 30, ONE).unwrap()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let expect = kasteleyn_grid_log10(30, 30).unwrap();
    let rel = (big.log10_magnitude - expect).abs() / expect;
    if secs >= 10.0 || rel > EPS || (big.phase - ONE).norm() > 1e-6 {
        bad.push(format!("30x30 grid: log10 {} vs {expect} in {secs:.2}s", big.log10_magnitude));
    }
    for b in bad.iter().take(5) {
        eprintln!("{b}");
    }
    report(
        4,
        "fkt",
        bad.is_empty(),
        &format!(
            "graphs=1000 nonzero={nonzero} max_rel_err={max_err:.2e} tol={EPS:e} grids={grids} exact grid_30x30_time={secs:.2}s limit=10s log10_rel_err={rel:.1e}"
        ),
    );
    assert!(bad.is_empty());
}

// ---------------------------------------------------------------------------
// Criterion 5

fn random_state(rng: &mut StdRng, max_wires: usize) -> Tensor {
    loop {
        let d = common::random_term(rng, 14, max_wires);
        if d.n_inputs() + d.n_outputs() <= max_wires {
            return interpret(&state_form(&d)).unwrap();
        }
    }
}

fn swap_state() -> Tensor {
    let mut t = Tensor::zeros(4);
    for x in 0..2u64 {
        for y in 0..2u64 {
            let idx = (y << 3) | (x << 2) | (y << 1) | x;
            t.set(&BitWord::from_index(idx, 4), ONE);
        }
    }
    t
}

#[test]
fn criterion_5_matchgates() {
    let tol = tol();
    let mut rng = common::rng(5005);
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let t = random_state(&mut rng, 8);
        let r = mgi_check(&t, &tol).unwrap();
        worst = worst.max(r.residual);
        if !r.passed {
            bad.push(format!("term state {k} failed with residual {:e}", r.residual));
        }
    }
    let mut closure = 0;
    for _ in 0..300 {
        let f = random_state(&mut rng, 4);
        let g = random_state(&mut rng, 4);
        let at = rng.gen_range(0..=f.wires());
        let p = state_tensor_product(&f, &g, at).unwrap();
        let mut results = vec![p.clone()];
        if p.wires() >= 2 {
            let i = rng.gen_range(1..p.wires());
            results.push(contract_consecutive(&p, i).unwrap());
        }
        let k = rng.gen_range(0..=f.wires().min(g.wires()));
        results.push(compose_states(&f, &g, k).unwrap());
        for t in results {
            closure += 1;
            if !mgi_check(&t, &tol).unwrap().passed {
                bad.push("closure failed".into());
            }
        }
    }
    let swap = swap_state();
    let r = mgi_check(&swap, &tol).unwrap();
    let witness = r.witness.clone();
    match &witness {
        Some(w) if !r.passed && w.residual > EPS => {}
        _ => bad.push("swap state passed".into()),
    }
    let mut parity_cases = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(0..=3);
        let mut t = Tensor::zeros(n);
        let mode = rng.gen_range(0..3);
        for a in BitWord::all(n) {
            let keep = match mode {
                0 => !a.parity(),
                1 => a.parity(),
                _ => rng.gen_bool(0.5),
            };
            if keep {
                t.set(&a, common::nonzero_weight(&mut rng));
            }
        }
        parity_cases += 1;
        if parity_check(&t, &tol).is_some() != mgi_check(&t, &tol).unwrap().passed {
            bad.push(format!("parity and identities disagree on {t:?}"));
        }
    }
    let mut ghz = Tensor::zeros(4);
    ghz.set(&BitWord::parse("0000").unwrap(), ONE);
    ghz.set(&BitWord::parse("1111").unwrap(), ONE);
    let ghz_ok = parity_check(&ghz, &tol) == Some(false) && !mgi_check(&ghz, &tol).unwrap().passed;
    if !ghz_ok {
        bad.push("0000+1111 should pass parity and fail the identities".into());
    }
    for b in bad.iter().take(5) {
        eprintln!("{b}");
    }
    let w = witness.map_or("none".to_string(), |w| w.to_string());
    report(
        5,
        "matchgates",
        bad.is_empty(),
        &format!(
            "term_states=1000 max_residual={worst:.2e} closure_checks={closure} swap_witness=[{w}] parity_cases={parity_cases} n4_even_non_matchgate={ghz_ok} tol={EPS:e}"
        ),
    );
    assert!(bad.is_empty());
}

// ---------------------------------------------------------------------------
// Criterion 6

fn evaluate(d: &T) -> Tensor {
    interpret(d).unwrap_or_else(|_| arc_tensor(&ArcDiagram::from_term(d)))
}

#[test]
fn criterion_6_universality() {
    let tol = tol();
    let mut rng = common::rng(6006);
    let mut bad = Vec::new();
    let mut branches: BTreeMap<&str, usize> = BTreeMap::new();
    let mut max_err: f64 = 0.0;
    for k in 0..500 {
        let t = match k % 5 {
            0 => Tensor::zeros(rng.gen_range(0..=6)),
            1 | 2 => random_state(&mut rng, 6),
            _ => {
                let mut w = random_wgsx(&mut rng);
                w.n = w.n.min(6);
                w.edges.retain(|&(_, j), _| j <= 6);
                w.b = w.b.slice(1, w.n);
                w.tensor()
            }
        };
        let branch = if t.max_norm() <= EPS {
            "zero"
        } else if tol.is_zero(t.amplitudes()[0]) {
            "gamma0_zero"
        } else {
            "gamma0_nonzero"
        };
        *branches.entry(branch).or_default() += 1;
        let d = match synthesize(&t, &tol) {
            Ok(d) => d,
            Err(e) => {
                bad.push(format!("tensor {k}: {e}"));
                continue;
            }
        };
        let back = evaluate(&d);
        let err = rel_err(&back, &t);
        max_err = max_err.max(err);
        if d.n_inputs() != 0 || !back.approx_eq(&t, &tol) {
            bad.push(format!("tensor {k} ({branch}): error {err:e}"));
        }
    }
    let covered = ["zero", "gamma0_zero", "gamma0_nonzero"].iter().all(|b| branches.get(b).copied().unwrap_or(0) >= 20);
    if !covered {
        bad.push(format!("branch coverage too thin: {branches:?}"));
    }
    for b in bad.iter().take(5) {
        eprintln!("{b}");
    }
    report(
        6,
        "universality",
        bad.is_empty(),
        &format!("tensors=500 branches={branches:?} max_rel_err={max_err:.2e} tol={EPS:e}"),
    );
    assert!(bad.is_empty());
}

// ---------------------------------------------------------------------------
// Criterion 7

#[test]
fn criterion_7_weight_two() {
    let tol = tol();
    let mut rng = common::rng(7007);
    let mut max_err: f64 = 0.0;
    for _ in 0..500 {
        let w: Vec<Complex> = (0..6).map(|_| common::weight(&mut rng)).collect();
        let [w12, w13, w14, w23, w24, w34] = [w[0], w[1], w[2], w[3], w[4], w[5]];
        let expect = w12 * w34 - w13 * w24 + w14 * w23;
        let mut form = Wgsx::zero(4);
        form.scalar = ONE;
        for (&(i, j), &x) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)].iter().zip(&w) {
            if x != ZERO {
                form.set_edge(i, j, x);
            }
        }
        let top = BitWord::parse("1111").unwrap();
        let via_diagram = evaluate(&form.to_diagram());
        let rebuilt = weight2_reconstruct(&via_diagram, &tol).unwrap();
        for v in [form.tensor().get(&top), via_diagram.get(&top), rebuilt.get(&top)] {
            max_err = max_err.max((v - expect).norm() / expect.norm().max(1.0));
        }
    }
    let ok = max_err <= EPS;
    report(7, "weight-two", ok, &format!("cases=500 max_rel_err={max_err:.2e} tol={EPS:e}"));
    assert!(ok);
}

// ---------------------------------------------------------------------------
// Criterion 8

#[test]
fn criterion_8_pfaffian() {
    let mut rng = common::rng(8008);
    let mut max_err: f64 = 0.0;
    let mut odd_ok = true;
    let mut cases = 0;
    for n in 1..=40 {
        for rep in 0..5 {
            let mut a = SkewMatrix::zeros(n);
            let density = if rep == 0 { 0.3 } else { 1.0 };
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(density) {
                        a.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                    }
                }
            }
            cases += 1;
            let pf = pfaffian(&a).to_complex();
            if n % 2 == 1 {
                odd_ok &= pf == ZERO;
                continue;
            }
            let det = common::determinant(&a);
            let err = (pf * pf - det).norm() / det.norm().max(1e-300);
            max_err = max_err.max(if det.norm() == 0.0 { pf.norm() } else { err });
        }
    }
    let ok = max_err <= EPS && odd_ok;
    report(
        8,
        "pfaffian",
        ok,
        &format!("matrices={cases} max_dim=40 max_rel_err={max_err:.2e} odd_dims_zero={odd_ok} tol={EPS:e}"),
    );
    assert!(ok);
}
