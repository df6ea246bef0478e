//! Closed-form quantities for the string of diamonds.

use statrs::function::gamma::ln_gamma;

/// Bracket `(2m, 4m + 1)` for the expected synchronous spread time of
/// `S_{m,k,l}` from `v_0`.
pub fn diamond_s_bounds(m: usize) -> (u64, u64) {
    (2 * m as u64, 4 * m as u64 + 1)
}

/// `Pr[Z > t] = (1 + t/2)^k e^{-kt/2}` for `Z` the minimum of `k` independent
/// sums of two Exp(rate 1/2) variables.
pub fn z_tail(k: u32, t: f64) -> f64 {
    let k = k as f64;
    (k * ((t / 2.0).ln_1p() - t / 2.0)).exp()
}

/// `E[Z] = ∫_0^∞ Pr[Z > t] dt` by adaptive Simpson quadrature on
/// `[0, 200/√k]` plus a bound on the remaining tail.
pub fn z_mean(k: u32) -> f64 {
    assert!(k >= 1, "k must be positive");
    let upper = 200.0 / (k as f64).sqrt();
    let body = adaptive_simpson(&|t| z_tail(k, t), 0.0, upper, 1e-10);
    // for t >= T, d/dt ln Pr[Z > t] <= -kT / (2(2 + T))
    let decay = k as f64 * upper / (2.0 * (2.0 + upper));
    body + z_tail(k, upper) / decay
}

/// `2 e^k k! / k^{k+1}`, an upper bound on `E[Z]`.
pub fn z_mean_upper_bound(k: u32) -> f64 {
    let kf = k as f64;
    (2f64.ln() + kf + ln_gamma(kf + 1.0) - (kf + 1.0) * kf.ln()).exp()
}

/// `H_n = Σ_{i=1}^n 1/i`.
pub fn harmonic(n: u64) -> f64 {
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

/// Lower bound on the expected time to cross one diamond of width `k`:
/// `(1/(3√k)) · (1 − 2/3 − 1/18)`.
pub fn y_lower_threshold(k: u32) -> f64 {
    (1.0 - 2.0 / 3.0 - 1.0 / 18.0) / (3.0 * (k as f64).sqrt())
}

/// Upper bound `2t + kt²/2` on `Pr[Y ≤ t]` for one diamond crossing.
pub fn y_tail_bound(k: u32, t: f64) -> f64 {
    2.0 * t + k as f64 * t * t / 2.0
}

/// Band for `E[A(S_{m,k,l}, v_0)]`: `m · y_lower_threshold(k)` below and
/// `m · z_mean(k) + ln n + 1` above.
pub fn diamond_a_band(m: usize, k: u32, n: usize) -> (f64, f64) {
    let m = m as f64;
    (m * y_lower_threshold(k), m * z_mean(k) + (n as f64).ln() + 1.0)
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}
