use std::f64::consts::{PI, TAU};
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number stored as `(ln|w|, arg w)`.
///
/// `log_mag = -inf` encodes an exact zero, which absorbs under
/// multiplication. Phases are kept in `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { log_mag: f64::NEG_INFINITY, phase: 0.0 };
    pub const ONE: LogComplex = LogComplex { log_mag: 0.0, phase: 0.0 };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex { log_mag, phase: wrap_phase(phase) }
    }

    pub fn from_complex(w: Complex64) -> Self {
        if w.re == 0.0 && w.im == 0.0 {
            return Self::ZERO;
        }
        LogComplex { log_mag: w.norm().ln(), phase: w.arg() }
    }

    /// `e^w`.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn abs(&self) -> f64 {
        self.log_mag.exp()
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn neg(self) -> Self {
        if self.is_zero() {
            return self;
        }
        Self::new(self.log_mag, self.phase + PI)
    }

    /// Multiplicative inverse; the inverse of zero is reported as `+inf` magnitude.
    pub fn recip(self) -> Self {
        LogComplex { log_mag: -self.log_mag, phase: wrap_phase(-self.phase) }
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, o: LogComplex) -> LogComplex {
        if self.is_zero() || o.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_mag + o.log_mag, self.phase + o.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, o: LogComplex) -> LogComplex {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        self * o.recip()
    }
}

impl std::iter::Product for LogComplex {
    fn product<I: Iterator<Item = LogComplex>>(iter: I) -> Self {
        iter.fold(LogComplex::ONE, |a, b| a * b)
    }
}

/// Reduce an angle to `(-π, π]`.
pub fn wrap_phase(p: f64) -> f64 {
    if !p.is_finite() {
        return p;
    }
    let r = p.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}
