#![allow(dead_code)]

use pw_core::complex::c;
use pw_core::term::TermDiagram as T;
use pw_core::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A weight that is sometimes special (0, 1, −1, i) and otherwise a small
/// random complex number.
pub fn weight(rng: &mut StdRng) -> Complex {
    match rng.gen_range(0..10) {
        0 => c(1.0, 0.0),
        1 => c(-1.0, 0.0),
        2 => c(0.0, 1.0),
        3 if rng.gen_bool(0.3) => c(0.0, 0.0),
        4 => c(rng.gen_range(-2.0..2.0), 0.0),
        _ => c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
    }
}

pub fn nonzero_weight(rng: &mut StdRng) -> Complex {
    loop {
        let w = weight(rng);
        if w.norm() > 0.2 {
            return w;
        }
    }
}

/// A random term with at most `max_boundary` boundary wires (inputs plus
/// outputs), at most `max_width` wires between layers and roughly
/// `max_gens` generators.
pub fn random_term(rng: &mut StdRng, max_gens: usize, max_boundary: usize) -> T {
    let max_width = max_boundary.max(1) + 2;
    let inputs = rng.gen_range(0..=max_boundary.min(3));
    let mut width = inputs;
    let mut d = T::identity(inputs);
    let mut gens = 0;
    while gens < max_gens {
        let (layer, out, used) = random_layer(rng, width, max_width, max_gens - gens);
        d = d.then(layer);
        width = out;
        gens += used;
        if rng.gen_bool(0.15) {
            break;
        }
    }
    // Close off surplus wires until the boundary budget holds.
    while inputs + width > max_boundary && width > 0 {
        let mut parts = Vec::new();
        let mut left = width;
        if left >= 2 && rng.gen_bool(0.5) {
            parts.push(T::cup());
            left -= 2;
        } else {
            parts.push(match rng.gen_range(0..3) {
                0 => T::bra1(),
                1 => T::black(1, 0),
                _ => T::white(weight(rng)).unwrap().then(T::black(1, 0)),
            });
            left -= 1;
        }
        parts.push(T::identity(left));
        d = d.then(T::tensor_all(parts));
        width = d.n_outputs();
    }
    d
}

fn random_layer(rng: &mut StdRng, width: usize, max_width: usize, budget: usize) -> (T, usize, usize) {
    let mut parts = Vec::new();
    let mut remaining = width;
    let mut out = 0;
    let mut used = 0;
    while remaining > 0 || used == 0 || (out < max_width && rng.gen_bool(0.2)) {
        if used >= budget.max(1) && remaining > 0 {
            parts.push(T::identity(remaining));
            out += remaining;
            break;
        }
        let n_in = rng.gen_range(0..=remaining.min(3));
        let room = max_width.saturating_sub(out + remaining);
        let (g, n_out) = random_generator(rng, n_in, room + n_in);
        parts.push(g);
        remaining -= n_in;
        out += n_out;
        used += 1;
    }
    (T::tensor_all(parts), out, used)
}

fn random_generator(rng: &mut StdRng, n_in: usize, max_out: usize) -> (T, usize) {
    let m_cap = max_out.min(3);
    let g = match n_in {
        0 => match rng.gen_range(0..6) {
            0 if m_cap >= 2 => T::cap(),
            1 if m_cap >= 1 => T::ket0(),
            2 if m_cap >= 1 => T::ket1(),
            3 => T::scalar(nonzero_weight(rng)).unwrap(),
            _ => T::black(0, rng.gen_range(0..=m_cap).max(usize::from(m_cap > 0))),
        },
        1 => match rng.gen_range(0..6) {
            0 => T::identity(1),
            1 | 2 => T::white(weight(rng)).unwrap(),
            3 => T::x(),
            4 => T::bra1(),
            _ => T::black(1, rng.gen_range(0..=m_cap)),
        },
        2 => match rng.gen_range(0..5) {
            0 => T::cup(),
            1 if max_out >= 2 => T::fswap(),
            2 if max_out >= 2 => T::identity(2),
            _ => T::black(2, rng.gen_range(0..=m_cap)),
        },
        _ => T::black(n_in, rng.gen_range(0..=m_cap)),
    };
    let n = g.n_outputs();
    (g, n)
}

/// A random straight-line planar graph on at most `max_n` vertices with
/// complex weights and its counterclockwise rotation system.
pub fn random_plane_graph(rng: &mut StdRng, max_n: usize) -> pw_core::fkt::WeightedPlaneGraph {
    use pw_core::fkt::{Dart, WeightedPlaneGraph};
    let n = rng.gen_range(1..=max_n);
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    let mut edges: Vec<(usize, usize, Complex)> = Vec::new();
    let cross = |a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)| {
        let o = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
        o(a, b, c) * o(a, b, d) < 0.0 && o(c, d, a) * o(c, d, b) < 0.0
    };
    let density = rng.gen_range(0.3..1.0);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.sort_by(|a, b| {
        let d = |(i, j): (usize, usize)| (pts[i].0 - pts[j].0).hypot(pts[i].1 - pts[j].1);
        d(*a).total_cmp(&d(*b))
    });
    for (i, j) in pairs {
        if !rng.gen_bool(density) {
            continue;
        }
        let ok = edges.iter().all(|&(u, v, _)| {
            u == i || u == j || v == i || v == j || !cross(pts[i], pts[j], pts[u], pts[v])
        });
        if ok {
            edges.push((i, j, nonzero_weight(rng)));
        }
    }
    let mut rotation: Vec<Vec<(f64, Dart)>> = vec![Vec::new(); n];
    for (e, &(u, v, _)) in edges.iter().enumerate() {
        let ang = |a: usize, b: usize| (pts[b].1 - pts[a].1).atan2(pts[b].0 - pts[a].0);
        rotation[u].push((ang(u, v), Dart { edge: e, forward: true }));
        rotation[v].push((ang(v, u), Dart { edge: e, forward: false }));
    }
    let rotation = rotation
        .into_iter()
        .map(|mut r| {
            r.sort_by(|a, b| a.0.total_cmp(&b.0));
            r.into_iter().map(|x| x.1).collect()
        })
        .collect();
    WeightedPlaneGraph::from_parts(n, edges, rotation, None).expect("geometric graphs are planar")
}

/// Determinant of a skew matrix by partial-pivot LU, for cross-checks.
#[allow(clippy::needless_range_loop)]
pub fn determinant(a: &pw_core::fkt::SkewMatrix) -> Complex {
    let n = a.dim();
    let mut m: Vec<Vec<Complex>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
    let mut det = c(1.0, 0.0);
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| m[x][k].norm().total_cmp(&m[y][k].norm())).unwrap();
        if m[p][k].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            for j in k..n {
                let v = m[k][j];
                m[i][j] -= f * v;
            }
        }
    }
    det
}
