//! Exponential-time reference semantics.
//!
//! Terms are interpreted as dense matrices, and graph forms are evaluated by
//! enumerating matchings. Both are test instruments for the fast paths.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bits::BitWord;
use crate::complex::{Complex, ONE, ZERO};
use crate::graph::GraphForm;
use crate::tensor::Tensor;
use crate::term::{fswap_decomposition, Body, Generator, TermDiagram};

pub const DEFAULT_WIDTH_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("a sub-diagram has {width} wires, above the cap of {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("expected {expected} boundary bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the graph has {0} boundary ports; a scalar graph was expected")]
    NotScalar(usize),
}

/// Row-major 2^m × 2^n matrix of an n → m diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex>,
}

impl Matrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> Complex {
        self.data[r * self.cols + c]
    }

    fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                if a == ZERO {
                    continue;
                }
                for r2 in 0..other.rows {
                    let base = (r1 * other.rows + r2) * cols + c1 * other.cols;
                    for c2 in 0..other.cols {
                        out.data[base + c2] = a * other.at(r2, c2);
                    }
                }
            }
        }
        out
    }

    /// `self · other`.
    fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

/// The semantics of an n → m diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct Interpretation {
    pub n_inputs: usize,
    pub n_outputs: usize,
    matrix: Matrix,
}

impl Interpretation {
    /// Entry ⟨out|D|in⟩ with both indices most-significant-bit first.
    pub fn matrix_entry(&self, out: usize, input: usize) -> Complex {
        self.matrix.at(out, input)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The state-form tensor: reversed inputs, then outputs.
    pub fn state(&self) -> Tensor {
        let (n, m) = (self.n_inputs, self.n_outputs);
        let mut t = Tensor::zeros(n + m);
        for input in 0..(1usize << n) {
            let rev = reverse_bits(input, n);
            for out in 0..(1usize << m) {
                let idx = BitWord::from_index(((rev << m) | out) as u64, n + m);
                t.set(&idx, self.matrix.at(out, input));
            }
        }
        t
    }
}

fn reverse_bits(v: usize, len: usize) -> usize {
    (0..len).fold(0, |acc, i| (acc << 1) | ((v >> i) & 1))
}

/// Interprets `d` with the default width cap and returns its state-form
/// tensor.
pub fn interpret(d: &TermDiagram) -> Result<Tensor, OracleError> {
    Ok(interpret_map(d, DEFAULT_WIDTH_CAP)?.state())
}

pub fn interpret_map(d: &TermDiagram, cap: usize) -> Result<Interpretation, OracleError> {
    let matrix = eval(d, cap)?;
    Ok(Interpretation {
        n_inputs: d.n_inputs(),
        n_outputs: d.n_outputs(),
        matrix,
    })
}

fn eval(d: &TermDiagram, cap: usize) -> Result<Matrix, OracleError> {
    let width = d.n_inputs() + d.n_outputs();
    if width > cap {
        return Err(OracleError::WidthCap { width, cap });
    }
    match d.body() {
        Body::Gen(g) => leaf(g, cap),
        Body::Tensor(a, b) => Ok(eval(a, cap)?.kron(&eval(b, cap)?)),
        Body::Compose(f, g) => Ok(eval(g, cap)?.mul(&eval(f, cap)?)),
    }
}

fn leaf(g: &Generator, cap: usize) -> Result<Matrix, OracleError> {
    Ok(match *g {
        Generator::Identity(k) => Matrix::identity(1 << k),
        Generator::Black(n, m) => {
            let mut mat = Matrix::zeros(1 << m, 1 << n);
            for r in 0..(1usize << m) {
                for c in 0..(1usize << n) {
                    if r.count_ones() + c.count_ones() == 1 {
                        mat.data[r * mat.cols + c] = ONE;
                    }
                }
            }
            mat
        }
        Generator::White(r) => Matrix {
            rows: 2,
            cols: 2,
            data: vec![ONE, ZERO, ZERO, r],
        },
        Generator::Cup => Matrix {
            rows: 1,
            cols: 4,
            data: vec![ONE, ZERO, ZERO, ONE],
        },
        Generator::Cap => Matrix {
            rows: 4,
            cols: 1,
            data: vec![ONE, ZERO, ZERO, ONE],
        },
        Generator::FSwap => eval(&fswap_decomposition(), cap)?,
        Generator::Scalar(c) => Matrix {
            rows: 1,
            cols: 1,
            data: vec![c],
        },
    })
}

/// Matching-sum coefficient of a graph form at boundary assignment `alpha`.
pub fn coefficient(g: &GraphForm, alpha: &BitWord) -> Result<Complex, OracleError> {
    if alpha.len() != g.ports {
        return Err(OracleError::LengthMismatch {
            expected: g.ports,
            got: alpha.len(),
        });
    }
    let mut value = g.scalar;
    for l in &g.loops {
        value *= ONE + l;
    }
    for w in &g.wires {
        match (alpha.get(w.a + 1), alpha.get(w.b + 1)) {
            (false, false) => {}
            (true, true) => value *= w.weight,
            _ => return Ok(ZERO),
        }
    }
    if value == ZERO {
        return Ok(ZERO);
    }
    // Vertices covered by a bit-1 leg are taken out; a vertex covered twice
    // kills the term.
    let mut covered = vec![false; g.vertices];
    for leg in &g.legs {
        if alpha.get(leg.port + 1) {
            if covered[leg.vertex] {
                return Ok(ZERO);
            }
            covered[leg.vertex] = true;
            value *= leg.weight;
        }
    }
    let mut adj: Vec<Vec<(usize, Complex)>> = vec![Vec::new(); g.vertices];
    for e in &g.edges {
        if e.u != e.v && !covered[e.u] && !covered[e.v] {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
    }
    Ok(value * matching_sum(&adj, &mut covered))
}

/// Branches on the lowest-indexed uncovered vertex.
fn matching_sum(adj: &[Vec<(usize, Complex)>], covered: &mut [bool]) -> Complex {
    let Some(v) = covered.iter().position(|c| !c) else {
        return ONE;
    };
    covered[v] = true;
    let mut total = ZERO;
    for &(u, w) in &adj[v] {
        if !covered[u] {
            covered[u] = true;
            total += w * matching_sum(adj, covered);
            covered[u] = false;
        }
    }
    covered[v] = false;
    total
}

/// Total matching weight of a graph form without boundary.
pub fn scalar_brute(g: &GraphForm) -> Result<Complex, OracleError> {
    if g.ports != 0 {
        return Err(OracleError::NotScalar(g.ports));
    }
    coefficient(g, &BitWord::zero(0))
}

/// Every coefficient of a graph form, as a tensor over its boundary ports.
pub fn graph_tensor(g: &GraphForm) -> Result<Tensor, OracleError> {
    let mut t = Tensor::zeros(g.ports);
    for alpha in BitWord::all(g.ports) {
        let v = coefficient(g, &alpha)?;
        t.set(&alpha, v);
    }
    Ok(t)
}
