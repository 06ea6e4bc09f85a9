//! Complex scalars and the tolerance that governs every zero test.

pub use num_complex::Complex64 as Complex;

/// Zero and equality thresholds shared by the rewrite engine, the matchgate
/// checks and the evaluators.
///
/// A weight `w` counts as zero when `|w| <= eps`. Two values `a`, `b` agree
/// when `|a - b| <= eps * max(|a|, |b|) + abs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        Tolerance {
            eps,
            ..Tolerance::default()
        }
    }

    pub fn is_zero(&self, z: Complex) -> bool {
        z.norm() <= self.eps
    }

    pub fn approx_eq(&self, a: Complex, b: Complex) -> bool {
        let scale = a.norm().max(b.norm());
        (a - b).norm() <= self.eps * scale + self.abs
    }
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };
pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
