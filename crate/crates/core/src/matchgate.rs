//! Matchgate identities, tensor operations on states, and synthesis of a
//! diagram from any matchgate tensor.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::bits::BitWord;
use crate::complex::{Complex, Tolerance, ZERO};
use crate::logc::format_real;
use crate::rewrite::Wgsx;
use crate::tensor::Tensor;
use crate::term::TermDiagram;

/// Largest width accepted by [`mgi_check`]; the check costs `O(4^n · n)`.
pub const MGI_MAX_WIRES: usize = 14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatchgateError {
    #[error("{0} wires exceed the limit of {MGI_MAX_WIRES} for the identity check")]
    TooManyWires(usize),
    #[error("tensor violates the matchgate identities: {0}")]
    NotMatchgate(MgiWitness),
    #[error("weight-2 reconstruction needs a nonzero all-zeros amplitude")]
    ZeroAmplitude,
    #[error("wire index {0} is out of range")]
    BadWire(usize),
    #[error("states of {0} and {1} wires cannot be composed over {2} wires")]
    BadComposition(usize, usize, usize),
}

/// A pair `(α, β)` whose identity fails, with its normalized residual.
#[derive(Clone, Debug, PartialEq)]
pub struct MgiWitness {
    pub alpha: BitWord,
    pub beta: BitWord,
    pub residual: f64,
}

impl fmt::Display for MgiWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} residual={}",
            self.alpha,
            self.beta,
            format_real(self.residual)
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MgiReport {
    pub passed: bool,
    /// Largest residual over all pairs, relative to `max |Γ|²`.
    pub residual: f64,
    /// The worst pair when the check fails.
    pub witness: Option<MgiWitness>,
}

/// `Σ_k (−1)^k Γ_{α⊕e_{p_k}} Γ_{β⊕e_{p_k}}` over the positions `p_1 < p_2 < …`
/// where `α` and `β` differ.
fn identity_sum(t: &Tensor, a: usize, b: usize, n: usize) -> Complex {
    let amps = t.amplitudes();
    let diff = a ^ b;
    let mut total = ZERO;
    let mut k = 0;
    for p in 0..n {
        // Position p (0-based from the left) is bit n-1-p of the index.
        let m = 1usize << (n - 1 - p);
        if diff & m == 0 {
            continue;
        }
        k += 1;
        let term = amps[a ^ m] * amps[b ^ m];
        if k % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

/// Checks every matchgate identity.
pub fn mgi_check(t: &Tensor, tol: &Tolerance) -> Result<MgiReport, MatchgateError> {
    let n = t.wires();
    if n > MGI_MAX_WIRES {
        return Err(MatchgateError::TooManyWires(n));
    }
    let norm = t.max_norm().powi(2);
    if norm == 0.0 {
        return Ok(MgiReport {
            passed: true,
            residual: 0.0,
            witness: None,
        });
    }
    let size = 1usize << n;
    let mut worst = (0.0f64, 0usize, 0usize);
    for a in 0..size {
        for b in a..size {
            let r = identity_sum(t, a, b, n).norm() / norm;
            if r > worst.0 {
                worst = (r, a, b);
            }
        }
    }
    let passed = worst.0 <= tol.eps;
    let witness = (!passed).then(|| MgiWitness {
        alpha: BitWord::from_index(worst.1 as u64, n),
        beta: BitWord::from_index(worst.2 as u64, n),
        residual: worst.0,
    });
    Ok(MgiReport {
        passed,
        residual: worst.0,
        witness,
    })
}

/// `Some(false)` when every nonzero amplitude has even weight, `Some(true)`
/// when all are odd, `None` for mixed parity. The zero tensor is even.
pub fn parity_check(t: &Tensor, tol: &Tolerance) -> Option<bool> {
    let scale = t.max_norm().max(1.0);
    let mut parity = None;
    for alpha in BitWord::all(t.wires()) {
        if t.get(&alpha).norm() <= tol.eps * scale {
            continue;
        }
        match parity {
            None => parity = Some(alpha.parity()),
            Some(p) if p != alpha.parity() => return None,
            _ => {}
        }
    }
    Some(parity.unwrap_or(false))
}

/// Inserts `g` after the first `at` wires of `f`:
/// `result[α¹·α²·α³] = f[α¹·α³] · g[α²]` with `|α¹| = at`.
pub fn state_tensor_product(f: &Tensor, g: &Tensor, at: usize) -> Result<Tensor, MatchgateError> {
    let (nf, ng) = (f.wires(), g.wires());
    if at > nf {
        return Err(MatchgateError::BadWire(at));
    }
    let mut out = Tensor::zeros(nf + ng);
    for a in BitWord::all(nf) {
        let head = a.slice(1, at);
        let tail = a.slice(at + 1, nf - at);
        for b in BitWord::all(ng) {
            let idx = head
                .concat(&b)
                .and_then(|x| x.concat(&tail))
                .expect("combined width fits");
            out.set(&idx, f.get(&a) * g.get(&b));
        }
    }
    Ok(out)
}

/// Joins wires `i` and `i + 1` (1-based) with a cup:
/// `Γ'_α = Γ_{α with 00 at i} + Γ_{α with 11 at i}`.
pub fn contract_consecutive(t: &Tensor, i: usize) -> Result<Tensor, MatchgateError> {
    let n = t.wires();
    if i == 0 || i + 1 > n {
        return Err(MatchgateError::BadWire(i));
    }
    let mut out = Tensor::zeros(n - 2);
    for a in BitWord::all(n - 2) {
        let head = a.slice(1, i - 1);
        let tail = a.slice(i, n - 1 - i);
        let mut v = ZERO;
        for pair in ["00", "11"] {
            let mid = BitWord::parse(pair).unwrap();
            let idx = head.concat(&mid).and_then(|x| x.concat(&tail)).unwrap();
            v += t.get(&idx);
        }
        out.set(&a, v);
    }
    Ok(out)
}

/// Composes two states in state form: the last `k` wires of `f` (outputs)
/// meet the first `k` wires of `g` (its inputs, reversed).
pub fn compose_states(f: &Tensor, g: &Tensor, k: usize) -> Result<Tensor, MatchgateError> {
    let (nf, ng) = (f.wires(), g.wires());
    if k > nf || k > ng {
        return Err(MatchgateError::BadComposition(nf, ng, k));
    }
    let mut t = state_tensor_product(f, g, nf)?;
    for j in 0..k {
        t = contract_consecutive(&t, nf - j)?;
    }
    Ok(t)
}

/// Rebuilds a matchgate tensor from `Γ_0` and its weight-2 amplitudes by
/// expanding along the first set bit:
/// `Γ_0 Γ_α = Σ_k (−1)^k Γ_{e_{p_1}+e_{p_k}} Γ_{α − e_{p_1} − e_{p_k}}`.
pub fn weight2_reconstruct(t: &Tensor, tol: &Tolerance) -> Result<Tensor, MatchgateError> {
    let n = t.wires();
    let g0 = t.get(&BitWord::zero(n));
    if tol.is_zero(g0) {
        return Err(MatchgateError::ZeroAmplitude);
    }
    let mut out = Tensor::zeros(n);
    out.set(&BitWord::zero(n), g0);
    let mut words: Vec<BitWord> = BitWord::all(n).collect();
    words.sort_by_key(|w| w.weight());
    for alpha in words {
        let ones = alpha.ones();
        if ones.len() < 2 || ones.len() % 2 == 1 {
            continue;
        }
        if ones.len() == 2 {
            out.set(&alpha, t.get(&alpha));
            continue;
        }
        let p1 = ones[0];
        let mut v = ZERO;
        for (idx, &pk) in ones.iter().enumerate().skip(1) {
            let pair = BitWord::zero(n).flip(p1).flip(pk);
            let rest = alpha.flip(p1).flip(pk);
            let term = t.get(&pair) * out.get(&rest);
            // idx is k − 1 for the k-th set bit.
            if idx % 2 == 1 {
                v += term;
            } else {
                v -= term;
            }
        }
        out.set(&alpha, v / g0);
    }
    Ok(out)
}

/// The WGS-X form of a matchgate tensor around a reference index `β`:
/// `β = 0` when `Γ_0` is nonzero, otherwise the lexicographically least
/// index whose amplitude exceeds `eps · max |Γ|`.
pub fn tensor_to_wgsx(t: &Tensor, tol: &Tolerance) -> Wgsx {
    let n = t.wires();
    let max = t.max_norm();
    if max <= tol.eps {
        return Wgsx::zero(n);
    }
    let zero = BitWord::zero(n);
    let beta = if !tol.is_zero(t.get(&zero)) {
        zero
    } else {
        BitWord::all(n)
            .find(|b| t.get(b).norm() > tol.eps * max)
            .expect("some amplitude is nonzero")
    };
    let s = t.get(&beta);
    let mut edges = BTreeMap::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let w = t.get(&beta.flip(i).flip(j)) / s;
            if w != ZERO {
                edges.insert((i, j), w);
            }
        }
    }
    Wgsx {
        scalar: s,
        n,
        edges,
        b: beta,
    }
}

/// A diagram whose interpretation is the given matchgate tensor.
pub fn synthesize(t: &Tensor, tol: &Tolerance) -> Result<TermDiagram, MatchgateError> {
    let report = mgi_check(t, tol)?;
    if let Some(w) = report.witness {
        return Err(MatchgateError::NotMatchgate(w));
    }
    let n = t.wires();
    if t.max_norm() <= tol.eps {
        let kets = TermDiagram::tensor_all((0..n).map(|_| TermDiagram::ket0()));
        return Ok(TermDiagram::tensor(
            kets,
            TermDiagram::scalar(ZERO).expect("finite"),
        ));
    }
    Ok(tensor_to_wgsx(t, tol).to_diagram())
}
