//! Quantum integers at the root of unity of level `r`, their factorials, and a
//! sign/log-magnitude number type used wherever products of sines would
//! overflow or underflow.
//!
//! Two normalizations appear:
//!
//! * the sine bracket `⟨n⟩ = sin(πn/r)` used in norms and closed forms;
//! * the balanced quantum integer `[n] = sin(πn/r)/sin(π/r)` used by the
//!   Kauffman–Lins recoupling theory at `A = −e^{iπ/2r}`.
//!
//! For `0 < n < r` both are strictly positive, so factorials of arguments in
//! `0..r` are positive and their logarithms are well defined.

use std::f64::consts::PI;
use std::ops::{Div, Mul};

/// Products with more factors than this are accumulated in log-space.
pub const LOG_SPACE_THRESHOLD: usize = 32;

/// The sine bracket `⟨n⟩ = sin(πn/r)`.
pub fn quantum_int(n: i64, r: u32) -> f64 {
    (PI * n as f64 / r as f64).sin()
}

/// `⟨n⟩! = ∏_{i=1}^n ⟨i⟩`, with `⟨0⟩! = 1`.
///
/// Long products are evaluated in log-space with the sign tracked separately.
pub fn quantum_factorial(n: u32, r: u32) -> f64 {
    if (n as usize) <= LOG_SPACE_THRESHOLD {
        (1..=n as i64).map(|i| quantum_int(i, r)).product()
    } else {
        let mut acc = LogReal::one();
        for i in 1..=n as i64 {
            acc = acc * LogReal::from_f64(quantum_int(i, r));
        }
        acc.to_f64()
    }
}

/// A real number stored as a sign and the logarithm of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogReal {
    /// `-1`, `0` or `+1`.
    pub sign: i8,
    /// Natural logarithm of the magnitude (meaningless when `sign == 0`).
    pub ln: f64,
}

impl LogReal {
    /// The number one.
    pub fn one() -> Self {
        LogReal { sign: 1, ln: 0.0 }
    }

    /// The number zero.
    pub fn zero() -> Self {
        LogReal {
            sign: 0,
            ln: f64::NEG_INFINITY,
        }
    }

    /// Converts an ordinary float.
    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::zero()
        } else {
            LogReal {
                sign: if x > 0.0 { 1 } else { -1 },
                ln: x.abs().ln(),
            }
        }
    }

    /// Converts back to an ordinary float (may overflow to ±∞).
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            self.sign as f64 * self.ln.exp()
        }
    }

    /// `(-1)^k` as a log-real.
    pub fn parity(k: i64) -> Self {
        LogReal {
            sign: if k.rem_euclid(2) == 0 { 1 } else { -1 },
            ln: 0.0,
        }
    }

    /// Absolute value.
    pub fn abs(self) -> Self {
        LogReal {
            sign: self.sign.abs(),
            ln: self.ln,
        }
    }

    /// Square root of the absolute value.
    pub fn sqrt_abs(self) -> Self {
        if self.sign == 0 {
            Self::zero()
        } else {
            LogReal {
                sign: 1,
                ln: 0.5 * self.ln,
            }
        }
    }

    /// Whether the value is exactly zero.
    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Sums a list of log-reals, factoring out the largest magnitude first so
    /// that no intermediate overflows.
    pub fn sum(terms: &[LogReal]) -> LogReal {
        let max = terms
            .iter()
            .filter(|t| t.sign != 0)
            .map(|t| t.ln)
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Self::zero();
        }
        let s: f64 = terms
            .iter()
            .filter(|t| t.sign != 0)
            .map(|t| t.sign as f64 * (t.ln - max).exp())
            .sum();
        let mut out = LogReal::from_f64(s);
        out.ln += max;
        out
    }
}

impl Mul for LogReal {
    type Output = LogReal;
    fn mul(self, o: LogReal) -> LogReal {
        if self.sign == 0 || o.sign == 0 {
            return LogReal::zero();
        }
        LogReal {
            sign: self.sign * o.sign,
            ln: self.ln + o.ln,
        }
    }
}

impl Div for LogReal {
    type Output = LogReal;
    fn div(self, o: LogReal) -> LogReal {
        assert!(o.sign != 0, "division of a log-real by zero");
        if self.sign == 0 {
            return LogReal::zero();
        }
        LogReal {
            sign: self.sign * o.sign,
            ln: self.ln - o.ln,
        }
    }
}

/// Precomputed quantum data for one level `r`.
///
/// Tables cover the whole admissible range: sine brackets for `0..=2r` and
/// logarithmic balanced factorials `ln [n]!` for `0 <= n < r`.
#[derive(Debug, Clone)]
pub struct QTable {
    r: u32,
    sin: Vec<f64>,
    ln_fact: Vec<f64>,
}

impl QTable {
    /// Builds the tables for level `r >= 2`.
    pub fn new(r: u32) -> Self {
        assert!(r >= 2, "level must be at least 2");
        let sin = (0..=2 * r as i64).map(|n| quantum_int(n, r)).collect();
        let s1 = quantum_int(1, r);
        let mut ln_fact = Vec::with_capacity(r as usize);
        ln_fact.push(0.0);
        for n in 1..r as i64 {
            let prev = *ln_fact.last().unwrap();
            ln_fact.push(prev + (quantum_int(n, r) / s1).ln());
        }
        QTable { r, sin, ln_fact }
    }

    /// The level.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// `⟨n⟩ = sin(πn/r)` for any integer `n` (tabulated on `0..=2r`).
    pub fn bracket(&self, n: i64) -> f64 {
        if (0..=2 * self.r as i64).contains(&n) {
            self.sin[n as usize]
        } else {
            quantum_int(n, self.r)
        }
    }

    /// Balanced quantum integer `[n]`.
    pub fn qint(&self, n: i64) -> f64 {
        self.bracket(n) / self.bracket(1)
    }

    /// `ln [n]!` as a log-real; the factorial vanishes for `n >= r`.
    pub fn qfact(&self, n: i64) -> LogReal {
        assert!(n >= 0, "negative factorial argument {n}");
        if n >= self.r as i64 {
            LogReal::zero()
        } else {
            LogReal {
                sign: 1,
                ln: self.ln_fact[n as usize],
            }
        }
    }

    /// `ln ⟨n⟩!` for `0 <= n < r` (sine-bracket factorial).
    pub fn ln_bracket_fact(&self, n: i64) -> f64 {
        assert!(
            n >= 0 && n < self.r as i64,
            "bracket factorial argument {n} out of range"
        );
        self.ln_fact[n as usize] + n as f64 * self.bracket(1).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_vanish_at_zero_and_r() {
        assert_eq!(quantum_int(0, 7), 0.0);
        assert!(quantum_int(7, 7).abs() < 1e-15);
        assert!((quantum_int(1, 6) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reflection_symmetry() {
        assert!((quantum_int(2, 5) - quantum_int(3, 5)).abs() < 1e-15);
    }

    #[test]
    fn factorial_paths_agree() {
        let r = 101;
        let direct: f64 = (1..=40).map(|i| quantum_int(i, r)).product();
        let logged = quantum_factorial(40, r);
        assert!((direct - logged).abs() <= 1e-12 * direct.abs());
    }

    #[test]
    fn log_real_sum_handles_huge_terms() {
        let a = LogReal { sign: 1, ln: 800.0 };
        let b = LogReal { sign: -1, ln: 800.0 + (0.5f64).ln() };
        let s = LogReal::sum(&[a, b]);
        assert_eq!(s.sign, 1);
        assert!((s.ln - (800.0 + (0.5f64).ln())).abs() < 1e-12);
    }

    #[test]
    fn table_matches_direct_factorials() {
        let t = QTable::new(23);
        let direct: f64 = (1..=9).map(|i| t.qint(i)).product();
        assert!((t.qfact(9).to_f64() - direct).abs() < 1e-9 * direct);
        assert!(t.qfact(23).is_zero());
    }
}
