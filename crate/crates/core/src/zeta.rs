//! Hurwitz zeta function for real `s > 1`, `q > 0`.

// B_2k / (2k)! for k = 1..=7
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
];

/// `sum_{j >= 0} (q + j)^(-s)` via Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    assert!(s > 1.0, "hurwitz_zeta requires s > 1 (got {s})");
    assert!(q > 0.0, "hurwitz_zeta requires q > 0 (got {q})");
    // Shift far enough that the asymptotic tail converges quickly for large s.
    let direct_terms = 10 + s.ceil() as usize;
    let mut sum = 0.0;
    for j in 0..direct_terms {
        sum += (q + j as f64).powf(-s);
    }
    let a = q + direct_terms as f64;
    let a_pow = a.powf(-s);
    sum += a * a_pow / (s - 1.0) + 0.5 * a_pow;

    // rising factorial s (s+1) ... (s + 2k - 2) times a^(-s-2k+1)
    let mut factor = s * a_pow / a;
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coeff * factor;
        sum += term;
        if term.abs() < 1e-17 * sum {
            break;
        }
        let m = (2 * k + 1) as f64;
        factor *= (s + m) * (s + m + 1.0) / (a * a);
    }
    sum
}
