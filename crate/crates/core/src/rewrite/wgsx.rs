//! Weighted graph states with X layers: the normal forms.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitWord;
use crate::complex::{Complex, Tolerance, ONE, ZERO};
use crate::fkt::{pfaffian_value, SkewMatrix};
use crate::logc::format_complex;
use crate::tensor::Tensor;
use crate::term::TermDiagram;

/// `Γ_α = scalar · Pf(W[{i : α_i ⊕ b_i = 1}])` over vertices `1..=n`, where
/// `W` is the antisymmetric matrix with `W[i][j] = w_ij` for `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Wgsx {
    pub scalar: Complex,
    pub n: usize,
    /// Edge weights keyed by `(i, j)` with `1 <= i < j <= n`.
    pub edges: BTreeMap<(usize, usize), Complex>,
    pub b: BitWord,
}

impl Wgsx {
    /// The canonical zero form on `n` wires.
    pub fn zero(n: usize) -> Self {
        Wgsx {
            scalar: ZERO,
            n,
            edges: BTreeMap::new(),
            b: BitWord::zero(n),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar == ZERO
    }

    /// `w_ij` for `i < j`, `−w_ji` for `i > j`.
    pub fn w(&self, i: usize, j: usize) -> Complex {
        if i < j {
            self.edges.get(&(i, j)).copied().unwrap_or(ZERO)
        } else if i > j {
            -self.edges.get(&(j, i)).copied().unwrap_or(ZERO)
        } else {
            ZERO
        }
    }

    pub fn set_edge(&mut self, i: usize, j: usize, w: Complex) {
        let key = (i.min(j), i.max(j));
        if w == ZERO {
            self.edges.remove(&key);
        } else {
            self.edges.insert(key, w);
        }
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbours(i).len()
    }

    /// `Pf(W[S])` for a set of vertices in any order.
    pub fn pfaffian_on(&self, set: &[usize]) -> Complex {
        let mut s = set.to_vec();
        s.sort_unstable();
        let mut m = SkewMatrix::zeros(s.len());
        for (x, &i) in s.iter().enumerate() {
            for (y, &j) in s.iter().enumerate().skip(x + 1) {
                m.set(x, y, self.w(i, j));
            }
        }
        pfaffian_value(&m)
    }

    pub fn coefficient(&self, alpha: &BitWord) -> Complex {
        if self.is_zero() {
            return ZERO;
        }
        let s = alpha.xor(&self.b).expect("word length matches");
        self.scalar * self.pfaffian_on(&s.ones())
    }

    pub fn tensor(&self) -> Tensor {
        let mut t = Tensor::zeros(self.n);
        for alpha in BitWord::all(self.n) {
            let v = self.coefficient(&alpha);
            t.set(&alpha, v);
        }
        t
    }

    /// No vertex with `b_i = 0` has a neighbour to its right.
    pub fn is_reduced(&self) -> bool {
        if self.is_zero() {
            return self.edges.is_empty() && self.b.weight() == 0;
        }
        self.edges.keys().all(|&(i, _)| self.b.get(i))
    }

    /// Drops weights that are zero within the tolerance.
    pub fn prune(&mut self, tol: &Tolerance) {
        self.edges.retain(|_, w| !tol.is_zero(*w));
        if tol.is_zero(self.scalar) {
            *self = Wgsx::zero(self.n);
        }
    }

    /// Same `n` and `b`, scalars and weights equal within the tolerance.
    pub fn approx_eq(&self, other: &Wgsx, tol: &Tolerance) -> bool {
        if self.n != other.n || self.b != other.b || !tol.approx_eq(self.scalar, other.scalar) {
            return false;
        }
        let keys: alloc::collections::BTreeSet<_> =
            self.edges.keys().chain(other.edges.keys()).collect();
        keys.into_iter()
            .all(|&(i, j)| tol.approx_eq(self.w(i, j), other.w(i, j)))
    }

    /// The form restricted to `α_i = b_i`, i.e. with vertex `i` deleted.
    pub fn remove_vertex(&self, i: usize) -> Wgsx {
        assert!(1 <= i && i <= self.n);
        let shift = |k: usize| if k > i { k - 1 } else { k };
        let mut edges = BTreeMap::new();
        for (&(a, b), &w) in &self.edges {
            if a != i && b != i {
                edges.insert((shift(a), shift(b)), w);
            }
        }
        let mut bits = self.b.bits();
        bits.remove(i - 1);
        Wgsx {
            scalar: self.scalar,
            n: self.n - 1,
            edges,
            b: BitWord::from_bits(&bits).expect("short word"),
        }
    }

    /// A diagram with this state: one cap per edge carrying its weight, the
    /// cap ends sorted into vertex order with fermionic swaps, then per
    /// vertex a black node, an X, and a second X where `b_i = 1`.
    pub fn to_diagram(&self) -> TermDiagram {
        use TermDiagram as T;
        let edges: Vec<((usize, usize), Complex)> =
            self.edges.iter().map(|(&k, &w)| (k, w)).collect();
        let mut ends: Vec<usize> = Vec::new();
        let mut d = T::identity(0);
        if !edges.is_empty() {
            let mut caps = Vec::new();
            for &((i, j), w) in &edges {
                let pair = if w == ONE {
                    T::cap()
                } else {
                    T::cap().then(T::tensor(T::identity(1), T::white(w).expect("finite weight")))
                };
                caps.push(pair);
                ends.push(i);
                ends.push(j);
            }
            d = T::tensor_all(caps);
        }
        let width = ends.len();
        // Stable bubble sort of the wire ends by vertex.
        let mut swapped = true;
        while swapped {
            swapped = false;
            for k in 0..width.saturating_sub(1) {
                if ends[k] > ends[k + 1] {
                    ends.swap(k, k + 1);
                    let layer = T::tensor_all([
                        T::identity(k),
                        T::fswap(),
                        T::identity(width - k - 2),
                    ]);
                    d = d.then(layer);
                    swapped = true;
                }
            }
        }
        let mut nodes = Vec::new();
        for i in 1..=self.n {
            let deg = ends.iter().filter(|&&v| v == i).count();
            let mut node = T::black(deg, 1).then(T::x());
            if self.b.get(i) {
                node = node.then(T::x());
            }
            nodes.push(node);
        }
        if !nodes.is_empty() {
            d = d.then(T::tensor_all(nodes));
        }
        T::tensor(d, T::scalar(self.scalar).expect("finite scalar"))
    }
}

/// `s=<c>; n=<k>; edges=(i,j:w)...; b=<bits>`
impl fmt::Display for Wgsx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut edges = String::new();
        for (&(i, j), &w) in &self.edges {
            edges.push_str(&alloc::format!("({},{}:{})", i, j, format_complex(w)));
        }
        write!(
            f,
            "s={}; n={}; edges={}; b={}",
            format_complex(self.scalar),
            self.n,
            edges,
            self.b
        )
    }
}
