//! Kauffman–Lins recoupling at `A = −e^{iπ/2r}`, evaluated in log-space.
//!
//! Labels in this module are strand counts (`color − 1`).  The evaluations
//! `Δ_n`, `θ(a, b, c)` and `Tet` are products and alternating sums of
//! balanced quantum factorials whose magnitudes exceed the `f64` range for
//! levels in the thousands, so every quantity is a [`LogReal`] until the final
//! ratio.
//!
//! Two matrix elements are built on top of these evaluations, both already
//! expressed in the orthonormal basis:
//!
//! * [`Recoupler::loop_element`]: the dual curve of a loop edge, a single
//!   strand fused into the loop and removed again;
//! * [`Recoupler::joining_row`]: the dual curve of an edge between two
//!   distinct vertices.  The curve is split into two "lassos" around the
//!   neighbouring edges `c` and `d` joined by a strand pair across `e`; the
//!   pair is fused into a 2-strand, the lassos are evaluated as
//!   crossing-phase sums, and the 2-strand is absorbed into `e` by two
//!   triangle reductions.  No cancellation-prone sum over intermediate
//!   channels is involved, so the result is accurate at large `r`.

use crate::coloring::{LogReal, QTable};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Recoupling evaluations for one level.
#[derive(Debug, Clone)]
pub struct Recoupler {
    t: Arc<QTable>,
    lassos: Arc<Vec<Complex64>>,
}

impl Recoupler {
    /// Wraps a quantum table and tabulates the lassos of every strand count.
    pub fn new(t: Arc<QTable>) -> Self {
        let mut rc = Recoupler {
            t,
            lassos: Arc::new(Vec::new()),
        };
        let r = rc.r() as i64;
        let table: Vec<Complex64> = (0..r.max(1) - 1)
            .map(|d| if rc.adm(2, d, d) { rc.lasso(d, 1) } else { Complex64::new(0.0, 0.0) })
            .collect();
        rc.lassos = Arc::new(table);
        rc
    }

    fn lasso_cached(&self, d: i64, s: i64) -> Complex64 {
        let z = self.lassos[d as usize];
        if s > 0 {
            z
        } else {
            z.conj()
        }
    }

    /// The level.
    pub fn r(&self) -> u32 {
        self.t.r()
    }

    /// Strand admissibility: even sum, triangle inequalities, and
    /// `a + b + c ≤ 2(r − 2)`.
    pub fn adm(&self, a: i64, b: i64, c: i64) -> bool {
        a >= 0
            && b >= 0
            && c >= 0
            && (a + b + c) % 2 == 0
            && a <= b + c
            && b <= a + c
            && c <= a + b
            && a + b + c <= 2 * (self.r() as i64 - 2)
    }

    fn qf(&self, n: i64) -> LogReal {
        self.t.qfact(n)
    }

    fn qint(&self, n: i64) -> LogReal {
        LogReal::from_f64(self.t.qint(n))
    }

    /// `Δ_n = (−1)^n [n+1]`.
    pub fn delta(&self, n: i64) -> LogReal {
        LogReal::parity(n) * self.qint(n + 1)
    }

    /// The theta net `θ(a, b, c)`.
    pub fn theta(&self, a: i64, b: i64, c: i64) -> LogReal {
        debug_assert!((a + b + c) % 2 == 0);
        let m = (a + b - c) / 2;
        let n = (b + c - a) / 2;
        let p = (a + c - b) / 2;
        debug_assert!(m >= 0 && n >= 0 && p >= 0, "theta({a},{b},{c})");
        LogReal::parity(m + n + p) * self.qf(m + n + p + 1) * self.qf(m) * self.qf(n) * self.qf(p)
            / (self.qf(m + n) * self.qf(n + p) * self.qf(m + p))
    }

    /// The tetrahedral net with edge labels in Kauffman–Lins order
    /// `[[A, B, E], [C, D, F]]`.
    pub fn tet(&self, a: i64, b: i64, e: i64, c: i64, d: i64, f: i64) -> LogReal {
        let ai = [(a + d + e) / 2, (b + c + e) / 2, (a + b + f) / 2, (c + d + f) / 2];
        let bj = [(b + d + e + f) / 2, (a + c + e + f) / 2, (a + b + c + d) / 2];
        let mut inner = LogReal::one();
        for &x in &ai {
            for &y in &bj {
                inner = inner * self.qf(y - x);
            }
        }
        let mut efact = LogReal::one();
        for x in [a, b, c, d, e, f] {
            efact = efact * self.qf(x);
        }
        let lo = *ai.iter().max().unwrap();
        let hi = *bj.iter().min().unwrap();
        let mut terms = Vec::with_capacity((hi - lo + 1).max(0) as usize);
        for s in lo..=hi {
            let mut den = LogReal::one();
            for &x in &ai {
                den = den * self.qf(s - x);
            }
            for &y in &bj {
                den = den * self.qf(y - s);
            }
            terms.push(LogReal::parity(s) * self.qf(s + 1) / den);
        }
        inner / efact * LogReal::sum(&terms)
    }

    /// Triangle reduction coefficient: a triangle with outer legs `A, B, C`
    /// and inner edges `iA, iB, iC` (inner edge `iX` opposite the corner of
    /// leg `X`) equals this factor times the bare vertex `(A, B, C)`.
    pub fn tri(&self, a: i64, b: i64, c: i64, ia: i64, ib: i64, ic: i64) -> LogReal {
        self.tet(ib, c, a, b, ic, ia) / self.theta(a, b, c)
    }

    /// Matrix element of the dual curve of a loop edge between normalized
    /// basis vectors: the loop carries `e` strands and the leg `f` strands;
    /// the result is the coefficient of the vector with `e + ε` strands.
    pub fn loop_element(&self, e: i64, f: i64, eps: i64) -> f64 {
        let ep = e + eps;
        if ep < 0 || !self.adm(ep, ep, f) || !self.adm(e, e, f) {
            return 0.0;
        }
        let nrm = |x: i64| (self.theta(x, x, f) / self.delta(x)).sqrt_abs();
        let v = self.delta(ep) / self.theta(e, 1, ep) * self.tri(ep, f, ep, e, 1, e) * nrm(ep)
            / nrm(e);
        v.to_f64()
    }

    /// `ring(n) = −2cos(π(n+1)/r)`: a closed strand encircling an `n`-strand.
    pub fn ring(&self, n: i64) -> f64 {
        -2.0 * (PI * (n + 1) as f64 / self.r() as f64).cos()
    }

    /// The lasso around a `d`-strand: a single strand encircling it with the
    /// two loose ends fused into a 2-strand, evaluated with crossing phase
    /// exponent `s = ±1`.
    pub fn lasso(&self, d: i64, s: i64) -> Complex64 {
        let r = self.r() as f64;
        let mut tot = Complex64::new(0.0, 0.0);
        for dp in [d - 1, d + 1] {
            if dp < 0 || !self.adm(1, d, dp) {
                continue;
            }
            // λ² for the half-twist of strands (1, d) into dp.
            let lam2 = if dp == d + 1 {
                PI * d as f64 / r
            } else {
                -PI * (d + 2) as f64 / r
            };
            let w = (self.delta(dp) / self.theta(1, d, dp) * self.tri(2, d, d, dp, 1, 1)).to_f64();
            tot += Complex64::from_polar(w, s as f64 * lam2);
        }
        tot
    }

    /// Row of the dual curve of a joining edge: for strand labels
    /// `(a, b, c, d, e)` (first vertex `(e, a, d)`, second `(e, c, b)`),
    /// returns `(e′, coefficient)` for `e′ ∈ {e − 2, e, e + 2}` in the
    /// orthonormal basis (before basis phases).
    pub fn joining_row(&self, a: i64, b: i64, c: i64, d: i64, e: i64) -> Vec<(i64, f64)> {
        let mut out = vec![(e, self.ring(d) * self.ring(c) / self.delta(1).to_f64())];
        // The 2-strand channel needs admissible vertices (2, d, d) and
        // (2, c, c); otherwise only the vacuum channel survives.
        if c == 0 || d == 0 || !self.adm(2, d, d) || !self.adm(2, c, c) {
            return out;
        }
        let z = self.lasso_cached(d, 1) * self.lasso_cached(c, -1);
        let coef = (self.delta(2) / self.theta(1, 1, 2)).to_f64() * z.re;
        let nrm = |x: i64| (self.theta(a, d, x) * self.theta(b, c, x) / self.delta(x)).sqrt_abs();
        for ep in [e - 2, e, e + 2] {
            if ep < 0 || !(self.adm(a, d, ep) && self.adm(b, c, ep) && self.adm(e, 2, ep)) {
                continue;
            }
            let v = self.delta(ep) / self.theta(e, 2, ep)
                * self.tri(a, d, ep, 2, e, d)
                * self.tri(b, c, ep, 2, e, c)
                * nrm(ep)
                / nrm(e);
            let v = coef * v.to_f64();
            match out.iter_mut().find(|(x, _)| *x == ep) {
                Some(slot) => slot.1 += v,
                None => out.push((ep, v)),
            }
        }
        out.sort_by_key(|x| x.0);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(r: u32) -> Recoupler {
        Recoupler::new(Arc::new(QTable::new(r)))
    }

    #[test]
    fn theta_and_delta_small_values() {
        let k = rc(23);
        // θ(1,1,0) = Δ_1 and θ(0,0,0) = 1.
        assert!((k.theta(1, 1, 0).to_f64() - k.delta(1).to_f64()).abs() < 1e-12);
        assert!((k.theta(0, 0, 0).to_f64() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tet_with_zero_edge_is_theta() {
        let k = rc(29);
        // Tet[[A,A,E],[D,D,0]] collapses to θ(A,D,E).
        let (a, d, e) = (3, 4, 5);
        let t = k.tet(a, a, e, d, d, 0).to_f64();
        assert!((t - k.theta(a, d, e).to_f64()).abs() < 1e-9 * t.abs());
    }
}
