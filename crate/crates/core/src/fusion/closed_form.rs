//! Closed forms of the dual-curve coefficients, used as oracles for the
//! recoupling engine and as the exact `ħ`-dependence in symbol tests.
//!
//! All angles are already multiplied by `π`: `W(πτ_e, πτ_f, πħ)` and
//! `I(πτ, πħ)`, `J(πτ, πħ)` with `τ = (τ_a, τ_b, τ_c, τ_d, τ_e)` laid out as
//! around a joining edge `e` whose first vertex reads `(e, a, d)` and second
//! vertex `(e, c, b)` counter-clockwise.

/// `W(τ, α, ħ) = (sin(τ+α/2+ħ/2) sin(τ−α/2+ħ/2) / (sin τ sin(τ+ħ)))^{1/2}`.
pub fn w(tau: f64, alpha: f64, hbar: f64) -> f64 {
    let num = (tau + alpha / 2.0 + hbar / 2.0).sin() * (tau - alpha / 2.0 + hbar / 2.0).sin();
    let den = tau.sin() * (tau + hbar).sin();
    (num / den).max(0.0).sqrt()
}

fn p_minus(t: &[f64; 5], h: f64) -> f64 {
    let [a, b, c, d, e] = *t;
    ((a + d - e - h) / 2.0).sin()
        * ((a - d + e + h) / 2.0).sin()
        * ((b + c - e - h) / 2.0).sin()
        * ((b - c + e + h) / 2.0).sin()
        / (e.sin() * (e + h).sin())
}

fn p_plus(t: &[f64; 5], h: f64) -> f64 {
    let [a, b, c, d, e] = *t;
    ((a + d + e + h) / 2.0).sin()
        * ((-a + d + e + h) / 2.0).sin()
        * ((b + c + e + h) / 2.0).sin()
        * ((-b + c + e + h) / 2.0).sin()
        / ((e + h).sin() * (e + 2.0 * h).sin())
}

/// The diagonal coefficient `I(τ, ħ)` of a joining dual curve.
pub fn i_coeff(t: &[f64; 5], h: f64) -> f64 {
    let [a, b, c, d, e] = *t;
    let s = f64::sin;
    2.0 * (c + d - h).cos()
        + 4.0 * p_minus(t, h)
        + 4.0
            * s((a + d + e - h) / 2.0)
            * s((-a + d + e - h) / 2.0)
            * s((b + c + e - h) / 2.0)
            * s((-b + c + e - h) / 2.0)
            / (s(e) * s(e - h))
}

/// The off-diagonal coefficient `J(τ, ħ) = 4 (P₋ P₊)^{1/2}`.
///
/// The coefficient is the geometric mean of the two four-sine products; the
/// square root is what makes the dual curve operator Hermitian.
pub fn j_coeff(t: &[f64; 5], h: f64) -> f64 {
    4.0 * (p_minus(t, h) * p_plus(t, h)).max(0.0).sqrt()
}

/// `J(τ − 2ħδ_e, ħ)`, the coefficient of the downward shift.
pub fn j_down(t: &[f64; 5], h: f64) -> f64 {
    let mut s = *t;
    s[4] -= 2.0 * h;
    j_coeff(&s, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_shift_identity() {
        // W(τ, α, ħ) = W(τ + ħ/2, α, 0) + O(ħ²).
        let (t, a) = (1.1, 0.7);
        for h in [1e-2, 5e-3] {
            let d = w(t, a, h) - w(t + h / 2.0, a, 0.0);
            assert!(d.abs() < 2.0 * h * h);
        }
    }

    #[test]
    fn j_shift_identity() {
        let t = [0.9, 1.3, 1.0, 1.4, 1.2];
        // J(τ, ħ) = J(τ + ħδ_e, 0) + O(ħ²).
        for h in [1e-2, 5e-3] {
            let mut s = t;
            s[4] += h;
            assert!((j_coeff(&t, h) - j_coeff(&s, 0.0)).abs() < 10.0 * h * h);
        }
    }
}
