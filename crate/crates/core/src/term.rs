//! Diagrams as composition/tensor trees of generators.

use alloc::boxed::Box;
use alloc::vec::Vec;

use thiserror::Error;

use crate::complex::{is_finite, Complex, ONE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TermError {
    #[error("cannot compose: first diagram has {outputs} outputs, second has {inputs} inputs")]
    ArityMismatch { outputs: usize, inputs: usize },
    #[error("weight {0} is not finite")]
    NonFinite(Complex),
    #[error("a diagram needs at least one row")]
    Empty,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Identity(usize),
    Black(usize, usize),
    White(Complex),
    Cup,
    Cap,
    FSwap,
    Scalar(Complex),
}

impl Generator {
    pub fn arity(&self) -> (usize, usize) {
        match *self {
            Generator::Identity(k) => (k, k),
            Generator::Black(n, m) => (n, m),
            Generator::White(_) => (1, 1),
            Generator::Cup => (2, 0),
            Generator::Cap => (0, 2),
            Generator::FSwap => (2, 2),
            Generator::Scalar(_) => (0, 0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Gen(Generator),
    Tensor(Box<TermDiagram>, Box<TermDiagram>),
    Compose(Box<TermDiagram>, Box<TermDiagram>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermDiagram {
    n_inputs: usize,
    n_outputs: usize,
    body: Body,
}

impl TermDiagram {
    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.n_outputs
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn is_scalar(&self) -> bool {
        self.n_inputs == 0 && self.n_outputs == 0
    }

    pub fn generator(g: Generator) -> Result<Self, TermError> {
        if let Generator::White(r) | Generator::Scalar(r) = g {
            if !is_finite(r) {
                return Err(TermError::NonFinite(r));
            }
        }
        let (n_inputs, n_outputs) = g.arity();
        Ok(TermDiagram {
            n_inputs,
            n_outputs,
            body: Body::Gen(g),
        })
    }

    fn leaf(g: Generator) -> Self {
        let (n_inputs, n_outputs) = g.arity();
        TermDiagram {
            n_inputs,
            n_outputs,
            body: Body::Gen(g),
        }
    }

    pub fn identity(k: usize) -> Self {
        Self::leaf(Generator::Identity(k))
    }

    pub fn black(n: usize, m: usize) -> Self {
        Self::leaf(Generator::Black(n, m))
    }

    pub fn white(r: Complex) -> Result<Self, TermError> {
        Self::generator(Generator::White(r))
    }

    pub fn scalar(c: Complex) -> Result<Self, TermError> {
        Self::generator(Generator::Scalar(c))
    }

    pub fn cup() -> Self {
        Self::leaf(Generator::Cup)
    }

    pub fn cap() -> Self {
        Self::leaf(Generator::Cap)
    }

    pub fn fswap() -> Self {
        Self::leaf(Generator::FSwap)
    }

    pub fn x() -> Self {
        Self::black(1, 1)
    }

    pub fn ket1() -> Self {
        Self::black(0, 1)
    }

    pub fn bra1() -> Self {
        Self::black(1, 0)
    }

    pub fn ket0() -> Self {
        Self::ket1().then(Self::x())
    }

    pub fn tensor(left: TermDiagram, right: TermDiagram) -> Self {
        TermDiagram {
            n_inputs: left.n_inputs + right.n_inputs,
            n_outputs: left.n_outputs + right.n_outputs,
            body: Body::Tensor(Box::new(left), Box::new(right)),
        }
    }

    pub fn compose(first: TermDiagram, then: TermDiagram) -> Result<Self, TermError> {
        if first.n_outputs != then.n_inputs {
            return Err(TermError::ArityMismatch {
                outputs: first.n_outputs,
                inputs: then.n_inputs,
            });
        }
        Ok(TermDiagram {
            n_inputs: first.n_inputs,
            n_outputs: then.n_outputs,
            body: Body::Compose(Box::new(first), Box::new(then)),
        })
    }

    /// `compose(self, then)` for arities known to match.
    ///
    /// # Panics
    /// Panics on an arity mismatch.
    pub fn then(self, then: TermDiagram) -> Self {
        Self::compose(self, then).expect("arity mismatch in composition")
    }

    pub fn tensor_all<I: IntoIterator<Item = TermDiagram>>(parts: I) -> Self {
        let mut parts: Vec<_> = parts.into_iter().collect();
        match parts.len() {
            0 => Self::identity(0),
            _ => {
                let mut acc = parts.pop().unwrap();
                while let Some(p) = parts.pop() {
                    acc = Self::tensor(p, acc);
                }
                acc
            }
        }
    }

    /// Right-nested rows: generators in a row are tensored, rows are composed
    /// top to bottom.
    pub fn from_rows(rows: Vec<Vec<TermDiagram>>) -> Result<Self, TermError> {
        let mut rows: Vec<TermDiagram> = rows.into_iter().map(Self::tensor_all).collect();
        let mut acc = rows.pop().ok_or(TermError::Empty)?;
        while let Some(r) = rows.pop() {
            acc = Self::compose(r, acc)?;
        }
        Ok(acc)
    }

    /// Row decomposition used by the printer: the interchange law lines up
    /// rows of tensored factors, padding the shorter side with identities.
    pub fn rows(&self) -> Vec<Vec<Generator>> {
        match &self.body {
            Body::Gen(g) => alloc::vec![alloc::vec![g.clone()]],
            Body::Compose(f, g) => {
                let mut r = f.rows();
                r.extend(g.rows());
                r
            }
            Body::Tensor(f, g) => {
                let (rf, rg) = (f.rows(), g.rows());
                let depth = rf.len().max(rg.len());
                let mut out = Vec::with_capacity(depth);
                for i in 0..depth {
                    let mut row = Vec::new();
                    match rf.get(i) {
                        Some(r) => row.extend(r.iter().cloned()),
                        None if f.n_outputs > 0 => row.push(Generator::Identity(f.n_outputs)),
                        None => {}
                    }
                    match rg.get(i) {
                        Some(r) => row.extend(r.iter().cloned()),
                        None if g.n_outputs > 0 => row.push(Generator::Identity(g.n_outputs)),
                        None => {}
                    }
                    if row.is_empty() {
                        row.push(Generator::Identity(0));
                    }
                    out.push(row);
                }
                out
            }
        }
    }

    /// Visits every generator left to right, top to bottom.
    pub fn for_each_generator<F: FnMut(&Generator)>(&self, f: &mut F) {
        match &self.body {
            Body::Gen(g) => f(g),
            Body::Tensor(a, b) | Body::Compose(a, b) => {
                a.for_each_generator(f);
                b.for_each_generator(f);
            }
        }
    }

    pub fn generator_count(&self) -> usize {
        let mut n = 0;
        self.for_each_generator(&mut |_| n += 1);
        n
    }

    /// Rebuilds the tree bottom-up, replacing each leaf by `f(leaf)`.
    pub fn map_leaves<F: FnMut(&Generator) -> TermDiagram>(&self, f: &mut F) -> TermDiagram {
        match &self.body {
            Body::Gen(g) => f(g),
            Body::Tensor(a, b) => Self::tensor(a.map_leaves(f), b.map_leaves(f)),
            Body::Compose(a, b) => a.map_leaves(f).then(b.map_leaves(f)),
        }
    }

    /// Replaces every fswap by its black/white decomposition.
    pub fn expand_fswaps(&self) -> TermDiagram {
        let gadget = fswap_decomposition();
        self.map_leaves(&mut |g| match g {
            Generator::FSwap => gadget.clone(),
            other => Self::leaf(other.clone()),
        })
    }
}

/// The fermionic swap written with black nodes and two weight −1 edges.
///
/// Input 1 and output 2 sit on the diagonal of a wheel of four inner black
/// nodes; the two −1 weights make the doubly-occupied configuration pick up
/// the sign.
pub fn fswap_decomposition() -> TermDiagram {
    use TermDiagram as T;
    let id = || T::identity(1);
    let neg = || T::white(Complex::new(-1.0, 0.0)).unwrap();
    T::from_rows(alloc::vec![
        alloc::vec![T::black(1, 2), T::x()],
        alloc::vec![id(), neg(), id()],
        alloc::vec![id(), T::black(2, 1)],
        alloc::vec![T::black(1, 2), id()],
        alloc::vec![id(), T::black(2, 1)],
        alloc::vec![neg(), id()],
        alloc::vec![T::black(1, 2), id()],
        alloc::vec![T::x(), T::black(2, 1)],
    ])
    .expect("gadget rows are arity-consistent")
}

/// `k` nested caps: a 0 → 2k state pairing wire `i` with wire `2k + 1 - i`.
pub fn nested_caps(k: usize) -> TermDiagram {
    let mut d = TermDiagram::identity(0);
    for j in 0..k {
        let layer = TermDiagram::tensor_all([
            TermDiagram::identity(j),
            TermDiagram::cap(),
            TermDiagram::identity(j),
        ]);
        d = d.then(layer);
    }
    d
}

/// `k` nested cups: a 2k → 0 effect pairing wire `i` with wire `2k + 1 - i`.
pub fn nested_cups(k: usize) -> TermDiagram {
    let mut d = TermDiagram::identity(2 * k);
    for j in (0..k).rev() {
        let layer = TermDiagram::tensor_all([
            TermDiagram::identity(j),
            TermDiagram::cup(),
            TermDiagram::identity(j),
        ]);
        d = d.then(layer);
    }
    d
}

/// Bends the inputs of an n → m diagram into a 0 → n + m state whose wires are
/// the inputs in reverse order followed by the outputs.
pub fn state_form(d: &TermDiagram) -> TermDiagram {
    let n = d.n_inputs();
    if n == 0 {
        return d.clone();
    }
    nested_caps(n).then(TermDiagram::tensor(TermDiagram::identity(n), d.clone()))
}

/// Inverse of [`state_form`]: reads the first `n` wires of a state as inputs.
///
/// # Panics
/// Panics if `s` is not a state with at least `n` wires.
pub fn map_form(s: &TermDiagram, n: usize) -> TermDiagram {
    assert!(s.n_inputs() == 0 && s.n_outputs() >= n, "map_form needs a state");
    if n == 0 {
        return s.clone();
    }
    let m = s.n_outputs() - n;
    TermDiagram::tensor(TermDiagram::identity(n), s.clone()).then(TermDiagram::tensor(
        nested_cups(n),
        TermDiagram::identity(m),
    ))
}

/// An m × n grid graph as a scalar diagram: each grid vertex is a black node,
/// vertical edges are wires between rows and horizontal edges are cups.
pub fn grid_diagram(rows: usize, cols: usize, weight: Complex) -> Result<TermDiagram, TermError> {
    use TermDiagram as T;
    if rows == 0 || cols == 0 {
        return Ok(T::identity(0));
    }
    let edge = || -> Result<TermDiagram, TermError> {
        if weight == ONE {
            Ok(T::identity(1))
        } else {
            T::white(weight)
        }
    };
    let mut layers: Vec<Vec<TermDiagram>> = Vec::new();
    for r in 0..rows {
        let down = usize::from(r + 1 < rows);
        let up = usize::from(r > 0);
        let mut row = Vec::new();
        for c in 0..cols {
            let side = usize::from(c > 0) + usize::from(c + 1 < cols);
            row.push(T::black(up, down + side));
        }
        layers.push(row);
        let mut join = Vec::new();
        for c in 0..cols {
            if c > 0 {
                join.push(T::tensor(edge()?, T::identity(1)).then(T::cup()));
            }
            if down == 1 {
                join.push(edge()?);
            }
        }
        if join.is_empty() {
            join.push(T::identity(0));
        }
        layers.push(join);
    }
    T::from_rows(layers)
}
