//! Closed-form fusion coefficients for the local pieces of a multicurve.
//!
//! * `F_{ε,μ}(a, b, c, r)`: merging one arc running between the circles
//!   colored `b` and `c` of a pair of pants into the graph, shifting those
//!   colors by `ε` and `μ`;
//! * `G_±`, `H_±`, `L_±`: the three annulus configurations (straight, twisted
//!   and core arcs), all of modulus `(⟨n±1⟩/⟨n⟩)^{1/2}` with different phases;
//! * [`pants_reduce`]: the ordered product of `F` factors for a pants piece
//!   with `α`, `β`, `γ` arcs, fusing the `α` arcs first, then `β`, then `γ`;
//! * [`candlestick_glue`]: the scalar obtained when two candlesticks with the
//!   same legs are glued, by successive bigon elimination.
//!
//! Colors are the shifted labels (`c = strands + 1`); every function returns
//! exactly zero for configurations whose intermediate colors leave the
//! admissible range, and errors only on malformed input.

use crate::coloring::{triple_ok, QTable};
use crate::curves::PantsArcs;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Sign of a color shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Shift {
    /// `+1`.
    Plus,
    /// `−1`.
    Minus,
}

impl Shift {
    /// `±1` as an integer.
    pub fn value(self) -> i64 {
        match self {
            Shift::Plus => 1,
            Shift::Minus => -1,
        }
    }

    /// Converts `±1`.
    pub fn from_i64(x: i64) -> Result<Shift> {
        match x {
            1 => Ok(Shift::Plus),
            -1 => Ok(Shift::Minus),
            _ => Err(Error::Usage(format!("shift must be ±1, got {x}"))),
        }
    }
}

/// Which annulus family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum AnnulusFamily {
    /// Arc crossing the annulus straight.
    G,
    /// Arc crossing the annulus with a twist.
    H,
    /// Arc running around the core.
    L,
}

fn half(n: i64) -> Result<i64> {
    if n % 2 != 0 {
        return Err(Error::Inadmissible(format!(
            "half-integer bracket argument {n}/2"
        )));
    }
    Ok(n / 2)
}

/// `F_{ε,μ}(a, b, c, r)`.
///
/// ```
/// use curveops::fusion::coeffs::{coeff_f, Shift};
/// use curveops::coloring::quantum_int;
/// let r = 17;
/// let v = coeff_f(Shift::Plus, Shift::Plus, 1, 1, 1, r).unwrap();
/// let want = (quantum_int(2, r) / quantum_int(1, r)).sqrt();
/// assert!((v - want).abs() < 1e-14);
/// ```
pub fn coeff_f(eps: Shift, mu: Shift, a: i64, b: i64, c: i64, r: u32) -> Result<f64> {
    if a < 1 || b < 1 || c < 1 || a >= r as i64 || b >= r as i64 || c >= r as i64 {
        return Err(Error::Inadmissible(format!(
            "colors ({a}, {b}, {c}) outside 1..{r}"
        )));
    }
    let t = QTable::new(r);
    coeff_f_with(&t, eps, mu, a, b, c)
}

/// [`coeff_f`] with a prebuilt table.
pub fn coeff_f_with(t: &QTable, eps: Shift, mu: Shift, a: i64, b: i64, c: i64) -> Result<f64> {
    let (sign, x, y) = match (eps, mu) {
        (Shift::Plus, Shift::Plus) => (1.0, half(a + b + c + 1)?, half(b + c - a + 1)?),
        (Shift::Minus, Shift::Minus) => (-1.0, half(a + b + c - 1)?, half(b + c - a - 1)?),
        // F_{+,−}(a,b,c) = F_{−,+}(a,c,b); the printed expression is symmetric
        // in (b, c), so both orders evaluate the same radicand.
        _ => (-1.0, half(a - b + c - 1)?, half(a + b - c - 1)?),
    };
    let radicand = t.bracket(x) * t.bracket(y) / (t.bracket(b) * t.bracket(c));
    if radicand < -1e-14 {
        return Err(Error::Inadmissible(format!(
            "negative radicand in F at ({a}, {b}, {c})"
        )));
    }
    Ok(sign * radicand.max(0.0).sqrt())
}

/// `G_±(n, r)`, `H_±(n, r)`, `L_±(n, r)`.
pub fn coeff_annulus(family: AnnulusFamily, sign: Shift, n: i64, r: u32) -> Result<Complex64> {
    let m = n + sign.value();
    if n < 1 || n >= r as i64 || m < 1 || m >= r as i64 {
        return Err(Error::Inadmissible(format!(
            "annulus color {n}{:+} outside 1..{r}",
            sign.value()
        )));
    }
    let rf = r as f64;
    let nf = n as f64;
    let modulus = (QTable::new(r).bracket(m) / QTable::new(r).bracket(n)).sqrt();
    let parity = if (n + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let phase = match (family, sign) {
        (AnnulusFamily::G, Shift::Plus) => -PI * (nf - 1.0) / rf,
        (AnnulusFamily::G, Shift::Minus) => PI * (nf + 1.0) / rf,
        (AnnulusFamily::H, Shift::Plus) => PI * (nf - 1.0) / rf,
        (AnnulusFamily::H, Shift::Minus) => -PI * (nf + 1.0) / rf,
        (AnnulusFamily::L, Shift::Plus) => PI * (nf + 2.0) / rf,
        (AnnulusFamily::L, Shift::Minus) => -PI * (nf - 2.0) / rf,
    };
    Ok(Complex64::from_polar(parity * modulus, phase))
}

/// The pants reduction coefficient `P_{ε,μ,ν}(a, b, c, r)` for a piece with
/// arc counts `(α, β, γ)`; `ε`, `μ`, `ν` list the shifts of `a`, `b`, `c`
/// (lengths `β+γ`, `α+γ`, `α+β`).
///
/// Returns zero when an intermediate triple is inadmissible.
pub fn pants_reduce(
    arcs: &PantsArcs,
    colors: (i64, i64, i64),
    eps: &[Shift],
    mu: &[Shift],
    nu: &[Shift],
    r: u32,
) -> Result<f64> {
    if arcs.self_arcs.iter().any(|&s| s > 0) {
        return Err(Error::Capability(
            "pants pieces with returning arcs are reduced by recoupling, not by F chains".into(),
        ));
    }
    let (al, be, ga) = (arcs.alpha as usize, arcs.beta as usize, arcs.gamma as usize);
    if eps.len() != be + ga || mu.len() != al + ga || nu.len() != al + be {
        return Err(Error::Mismatch(format!(
            "shift lengths ({}, {}, {}) do not match arcs ({al}, {be}, {ga})",
            eps.len(),
            mu.len(),
            nu.len()
        )));
    }
    let (a0, b0, c0) = colors;
    let ok = |x: i64, y: i64, z: i64| {
        x >= 1 && y >= 1 && z >= 1 && triple_ok(x as u32, y as u32, z as u32, r)
    };
    if !ok(a0, b0, c0) {
        return Err(Error::Inadmissible(format!(
            "pants colors ({a0}, {b0}, {c0}) at r = {r}"
        )));
    }
    let t = QTable::new(r);
    let (mut a, mut b, mut c) = (a0, b0, c0);
    let mut prod = 1.0;
    // α arcs between C_b and C_c.
    for i in 0..al {
        prod *= coeff_f_with(&t, mu[i], nu[i], a, b, c)?;
        b += mu[i].value();
        c += nu[i].value();
        if !ok(a, b, c) {
            return Ok(0.0);
        }
    }
    // β arcs between C_a and C_c.
    for j in 0..be {
        prod *= coeff_f_with(&t, nu[al + j], eps[j], b, a, c)?;
        c += nu[al + j].value();
        a += eps[j].value();
        if !ok(a, b, c) {
            return Ok(0.0);
        }
    }
    // γ arcs between C_a and C_b.
    for k in 0..ga {
        prod *= coeff_f_with(&t, mu[al + k], eps[be + k], c, b, a)?;
        b += mu[al + k].value();
        a += eps[be + k].value();
        if !ok(a, b, c) {
            return Ok(0.0);
        }
    }
    Ok(prod)
}

/// Gluing factor of two candlesticks with bottom color `n` and leg shifts
/// `ε` (top) and `μ` (bottom), aligned leg by leg so that each step removes
/// one bigon with factor `(⟨n + Σ^{k+1}ε⟩ / ⟨n + Σ^k ε⟩)^{1/2}`.
///
/// ```
/// use curveops::fusion::coeffs::{candlestick_glue, Shift::*};
/// // Unequal total shift: the two-point sphere with distinct colors is zero.
/// assert_eq!(candlestick_glue(5, &[Plus], &[Minus], 20).unwrap(), 0.0);
/// // Two opposite legs telescope to one.
/// let v = candlestick_glue(5, &[Plus, Minus], &[Plus, Minus], 20).unwrap();
/// assert!((v - 1.0).abs() < 1e-14);
/// ```
pub fn candlestick_glue(n: i64, eps: &[Shift], mu: &[Shift], r: u32) -> Result<f64> {
    if eps.len() != mu.len() {
        return Err(Error::Mismatch(format!(
            "candlesticks with {} and {} legs",
            eps.len(),
            mu.len()
        )));
    }
    if n < 1 || n >= r as i64 {
        return Err(Error::Inadmissible(format!("bottom color {n} outside 1..{r}")));
    }
    let se: i64 = eps.iter().map(|s| s.value()).sum();
    let sm: i64 = mu.iter().map(|s| s.value()).sum();
    if se != sm {
        return Ok(0.0);
    }
    if eps != mu {
        return Err(Error::Capability(
            "candlesticks whose legs need exchanging (switching-leg case)".into(),
        ));
    }
    let t = QTable::new(r);
    let mut cur = n;
    let mut prod = 1.0;
    for s in eps {
        let next = cur + s.value();
        if next < 1 || next >= r as i64 {
            return Ok(0.0);
        }
        prod *= (t.bracket(next) / t.bracket(cur)).sqrt();
        cur = next;
    }
    Ok(prod)
}

/// The bigon factor that closes a single fused arc in the orthonormal basis
/// `φ_c`: `g(n, ε) = sgn(ε) (⟨n⟩ / ⟨n + ε⟩)^{1/2}`.
///
/// It is the reciprocal of the candlestick factor, with the sign that the
/// `F_{−,−}` coefficient carries; together with [`coeff_f`] it reproduces
/// the matrix element of the dual curve of a loop edge.
pub fn bigon_factor(t: &QTable, n: i64, eps: Shift) -> f64 {
    let m = n + eps.value();
    let s = if eps == Shift::Plus { 1.0 } else { -1.0 };
    s * (t.bracket(n) / t.bracket(m)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::quantum_int;

    #[test]
    fn f_symmetry() {
        let r = 31;
        for (a, b, c) in [(3, 5, 7), (9, 4, 6), (11, 11, 11)] {
            let x = coeff_f(Shift::Plus, Shift::Minus, a, b, c, r).unwrap();
            let y = coeff_f(Shift::Minus, Shift::Plus, a, c, b, r).unwrap();
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn annulus_moduli_agree() {
        let r = 40;
        for n in 2..38 {
            for s in [Shift::Plus, Shift::Minus] {
                let g = coeff_annulus(AnnulusFamily::G, s, n, r).unwrap();
                let h = coeff_annulus(AnnulusFamily::H, s, n, r).unwrap();
                let l = coeff_annulus(AnnulusFamily::L, s, n, r).unwrap();
                assert!((g.norm() - h.norm()).abs() < 1e-14);
                assert!((g.norm() - l.norm()).abs() < 1e-14);
                assert!((g - h.conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn g_product_is_a_phase() {
        let r = 40;
        for n in 2..37 {
            let p = coeff_annulus(AnnulusFamily::G, Shift::Plus, n, r).unwrap()
                * coeff_annulus(AnnulusFamily::G, Shift::Minus, n + 1, r).unwrap();
            assert!((p.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn empty_and_single_arc_pants() {
        let r = 23;
        let empty = PantsArcs::default();
        assert_eq!(pants_reduce(&empty, (3, 5, 7), &[], &[], &[], r).unwrap(), 1.0);
        let one = PantsArcs {
            gamma: 1,
            ..Default::default()
        };
        let v = pants_reduce(&one, (3, 5, 7), &[Shift::Plus], &[Shift::Plus], &[], r).unwrap();
        let w = coeff_f(Shift::Plus, Shift::Plus, 7, 5, 3, r).unwrap();
        assert!((v - w).abs() < 1e-14);
    }

    #[test]
    fn one_leg_candlestick() {
        let r = 20;
        let v = candlestick_glue(6, &[Shift::Plus], &[Shift::Plus], r).unwrap();
        let want = (quantum_int(7, r) / quantum_int(6, r)).sqrt();
        assert!((v - want).abs() < 1e-14);
    }
}
