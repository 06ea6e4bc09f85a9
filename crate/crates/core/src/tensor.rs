//! Dense amplitude vectors over bit words.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bits::BitWord;
use crate::complex::{is_finite, Complex, Tolerance, ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("expected {expected} amplitudes for {wires} wires, got {got}")]
    WrongLength {
        wires: usize,
        expected: usize,
        got: usize,
    },
    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },
    #[error("tensors with more than 30 wires are not supported")]
    TooWide,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    wires: usize,
    amplitudes: Vec<Complex>,
}

impl Tensor {
    pub fn new(wires: usize, amplitudes: Vec<Complex>) -> Result<Self, TensorError> {
        if wires > 30 {
            return Err(TensorError::TooWide);
        }
        let expected = 1usize << wires;
        if amplitudes.len() != expected {
            return Err(TensorError::WrongLength {
                wires,
                expected,
                got: amplitudes.len(),
            });
        }
        if let Some(index) = amplitudes.iter().position(|z| !is_finite(*z)) {
            return Err(TensorError::NonFinite { index });
        }
        Ok(Tensor { wires, amplitudes })
    }

    pub fn zeros(wires: usize) -> Self {
        Tensor {
            wires,
            amplitudes: vec![ZERO; 1 << wires],
        }
    }

    pub fn scalar(c: Complex) -> Self {
        Tensor {
            wires: 0,
            amplitudes: vec![c],
        }
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn get(&self, alpha: &BitWord) -> Complex {
        assert_eq!(alpha.len(), self.wires, "bit word length must match wire count");
        self.amplitudes[alpha.index()]
    }

    pub fn set(&mut self, alpha: &BitWord, value: Complex) {
        assert_eq!(alpha.len(), self.wires, "bit word length must match wire count");
        self.amplitudes[alpha.index()] = value;
    }

    pub fn max_norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: &Tolerance) -> bool {
        self.amplitudes.iter().all(|z| tol.is_zero(*z))
    }

    pub fn scale(&self, c: Complex) -> Tensor {
        Tensor {
            wires: self.wires,
            amplitudes: self.amplitudes.iter().map(|z| z * c).collect(),
        }
    }

    /// Entrywise agreement, with the tolerance scaled to the larger tensor.
    pub fn approx_eq(&self, other: &Tensor, tol: &Tolerance) -> bool {
        if self.wires != other.wires {
            return false;
        }
        let scale = self.max_norm().max(other.max_norm()).max(1.0);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .all(|(a, b)| (a - b).norm() <= tol.eps * scale + tol.abs)
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        assert_eq!(self.wires, other.wires);
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Kronecker product with `self` on the most significant wires.
    pub fn kron(&self, other: &Tensor) -> Tensor {
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Tensor {
            wires: self.wires + other.wires,
            amplitudes,
        }
    }
}
