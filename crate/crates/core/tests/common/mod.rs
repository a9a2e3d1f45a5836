//! Shared oracles for the integration tests. Everything here is independent
//! of the implementation paths it checks: the dimension oracle goes through
//! periodic orbits and the Fredholm determinant, not through collocation.

/// SplitMix64: tiny deterministic generator for reproducible random inputs.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, bound).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform in [lo, hi].
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.below((hi - lo + 1) as u64) as i64)
    }
}

/// Orbit weights Lambda_w = (q_l + x* q_{l-1})^2 for every digit string w of
/// length `len` over {1..a_bound}, where x* is the attracting fixed point of
/// the composite inverse branch. |h_w'(x*)| = 1/Lambda_w and
/// h_w'(x*) = (-1)^len / Lambda_w.
fn orbit_weights(a_bound: u64, len: usize) -> Vec<f64> {
    let mut out = Vec::new();
    // Continuants: (p_prev, p, q_prev, q), starting from the identity.
    fn rec(a_bound: u64, left: usize, p_prev: u64, p: u64, q_prev: u64, q: u64, out: &mut Vec<f64>) {
        if left == 0 {
            // Fixed point of x -> (p + x p_prev)/(q + x q_prev) in [0, 1]:
            // q_prev x^2 + (q - p_prev) x - p = 0, positive root.
            let a = q_prev as f64;
            let b = (q - p_prev) as f64;
            let c = -(p as f64);
            let x = if a == 0.0 {
                -c / b
            } else {
                (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a)
            };
            let denom = q as f64 + x * q_prev as f64;
            out.push(denom * denom);
            return;
        }
        for d in 1..=a_bound {
            rec(
                a_bound,
                left - 1,
                p,
                d * p + p_prev,
                q,
                d * q + q_prev,
                out,
            );
        }
    }
    rec(a_bound, len, 1, 0, 0, 1, &mut out);
    out
}

/// Hausdorff dimension of the bounded-digit set by cycle expansion: the
/// zero in sigma of the truncated Fredholm determinant
///
///   det(1 - L_sigma) = exp(-sum_n tr L_sigma^n / n),
///
/// with traces summed over the periodic words of length <= max_len. The
/// truncated determinant converges superexponentially in max_len.
pub fn dimension_cycle_expansion(a_bound: u64, max_len: usize) -> f64 {
    let weights: Vec<Vec<f64>> = (1..=max_len)
        .map(|len| orbit_weights(a_bound, len))
        .collect();
    let det = |sigma: f64| -> f64 {
        // Traces c_n, then the determinant coefficients by Newton's
        // identities: a_m = -(1/m) sum_k c_k a_{m-k}.
        let traces: Vec<f64> = weights
            .iter()
            .enumerate()
            .map(|(i, ws)| {
                let sign = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
                ws.iter()
                    .map(|&lam| lam.powf(-sigma) / (1.0 - sign / lam))
                    .sum()
            })
            .collect();
        let mut coeffs = vec![1.0f64];
        for m in 1..=max_len {
            let mut s = 0.0;
            for k in 1..=m {
                s += traces[k - 1] * coeffs[m - k];
            }
            coeffs.push(-s / m as f64);
        }
        coeffs.iter().sum()
    };
    // det < 0 left of the dimension (lambda > 1), > 0 right of it.
    let (mut lo, mut hi) = (0.1f64, 0.98f64);
    assert!(det(lo) < 0.0 && det(hi) > 0.0, "cycle expansion bracket");
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if det(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
