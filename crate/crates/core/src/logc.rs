//! Overflow-safe complex scalars and number formatting.

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::ops::{Mul, Neg};

use num_traits::Float;

use crate::complex::{Complex, ONE, ZERO};

/// `phase · 10^log10_magnitude`, with `phase` of unit modulus or exactly 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    pub phase: Complex,
    pub log10_magnitude: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        phase: ZERO,
        log10_magnitude: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        phase: ONE,
        log10_magnitude: 0.0,
    };

    pub fn from_complex(z: Complex) -> Self {
        let r = z.norm();
        if r == 0.0 {
            return Self::ZERO;
        }
        LogComplex {
            phase: z / r,
            log10_magnitude: r.log10(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.phase == ZERO
    }

    /// Back to an ordinary complex number; overflows to infinity or
    /// underflows to zero outside the double range.
    pub fn to_complex(&self) -> Complex {
        if self.is_zero() {
            return ZERO;
        }
        self.phase * Float::powf(10.0, self.log10_magnitude)
    }

    /// Decimal exponent `k` and mantissa `m` with `1 <= |m| < 10`.
    pub fn scientific(&self) -> (Complex, i64) {
        if self.is_zero() {
            return (ZERO, 0);
        }
        let k = self.log10_magnitude.floor();
        let mantissa = self.phase * Float::powf(10.0, self.log10_magnitude - k);
        (mantissa, k as i64)
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        LogComplex {
            phase: -self.phase,
            ..self
        }
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        let p = self.phase * rhs.phase;
        LogComplex {
            phase: p / p.norm(),
            log10_magnitude: self.log10_magnitude + rhs.log10_magnitude,
        }
    }
}

impl Mul<Complex> for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: Complex) -> LogComplex {
        self * LogComplex::from_complex(rhs)
    }
}

/// Plain decimal for exponents up to 15 in absolute value, otherwise
/// `<re>+<im>i x10^<k>`.
impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (m, k) = self.scientific();
        if k.abs() <= 15 {
            return f.write_str(&format_complex(self.to_complex()));
        }
        let sign = if m.im < 0.0 { '-' } else { '+' };
        write!(
            f,
            "{}{}{}i x10^{}",
            format_real(m.re),
            sign,
            format_real(m.im.abs()),
            k
        )
    }
}

/// A real with 15 significant digits and no trailing zeros.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return String::from("0");
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.14e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(String::from(mant)), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    String::from(t)
}

/// `a`, `bi`, `a+bi` or `a-bi`, each part with 15 significant digits.
pub fn format_complex(z: Complex) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    match (re == 0.0, im == 0.0) {
        (_, true) => format_real(re),
        (true, false) => format!("{}i", format_real(im)),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{}{}{}i", format_real(re), sign, format_real(im.abs()))
        }
    }
}
