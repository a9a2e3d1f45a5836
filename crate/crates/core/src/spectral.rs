//! Collocation discretization of the constrained transfer operators
//!
//!   (L_{sigma,u,A} f)(x) = sum_{a <= A} |h_a'(x)|^sigma e^u f(h_a(x)),
//!   h_a(x) = 1/(x + a),
//!
//! on [0,1], with the dominant eigenvalue solved by power iteration and the
//! Hausdorff dimension / pole curve located by bisection on sigma.
//!
//! The branches are analytic contractions of [0,1], so polynomial collocation
//! at Chebyshev-Lobatto nodes converges superexponentially; node counts in
//! the low tens already reach machine precision.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default bisection tolerance on sigma.
pub const DEFAULT_SIGMA_TOL: f64 = 1e-12;
/// Default residual tolerance for the eigenvalue iteration.
pub const DEFAULT_EIG_TOL: f64 = 1e-13;

const MAX_POWER_ITERATIONS: usize = 20_000;
const MAX_BISECTION_ITERATIONS: usize = 200;

/// Collocation nodes, barycentric weights and the dense matrix discretizing
/// L_{sigma,u,A} restricted to the branches digit_min..=digit_max.
#[derive(Debug, Clone)]
pub struct OperatorGrid {
    pub m: usize,
    pub sigma: f64,
    pub u: f64,
    pub digit_min: u64,
    pub digit_max: u64,
    nodes: Vec<f64>,
    bary: Vec<f64>,
    matrix: Vec<f64>,
}

/// Chebyshev-Lobatto points mapped to [0,1], strictly increasing, with the
/// standard barycentric weights (+-1, halved at the endpoints).
fn lobatto_nodes(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 2);
    let n = (m - 1) as f64;
    let nodes: Vec<f64> = (0..m)
        .map(|i| (1.0 - (std::f64::consts::PI * i as f64 / n).cos()) / 2.0)
        .collect();
    let bary: Vec<f64> = (0..m)
        .map(|i| {
            let s = if i % 2 == 0 { 1.0 } else { -1.0 };
            if i == 0 || i == m - 1 {
                0.5 * s
            } else {
                s
            }
        })
        .collect();
    (nodes, bary)
}

/// Values of the cardinal interpolation functions c_j at y.
fn cardinal_row(nodes: &[f64], bary: &[f64], y: f64) -> Vec<f64> {
    let m = nodes.len();
    let mut row = vec![0.0; m];
    for j in 0..m {
        if y == nodes[j] {
            row[j] = 1.0;
            return row;
        }
    }
    let mut denom = 0.0;
    for j in 0..m {
        let t = bary[j] / (y - nodes[j]);
        row[j] = t;
        denom += t;
    }
    for r in row.iter_mut() {
        *r /= denom;
    }
    row
}

/// The operator with all branches 1..=A.
pub fn build_operator(a_bound: u64, sigma: f64, u: f64, m: usize) -> OperatorGrid {
    build_operator_restricted(1, a_bound, sigma, u, m)
}

/// The operator over branches digit_min..=digit_max; digit_min = 2 gives the
/// final-digit-restricted operator used for unique expansions of rationals.
pub fn build_operator_restricted(
    digit_min: u64,
    digit_max: u64,
    sigma: f64,
    u: f64,
    m: usize,
) -> OperatorGrid {
    let (nodes, bary) = lobatto_nodes(m);
    let eu = u.exp();
    let mut matrix = vec![0.0; m * m];
    for (i, &x) in nodes.iter().enumerate() {
        for a in digit_min..=digit_max {
            let xa = x + a as f64;
            let weight = xa.powf(-2.0 * sigma) * eu;
            let row = cardinal_row(&nodes, &bary, 1.0 / xa);
            for (j, c) in row.iter().enumerate() {
                matrix[i * m + j] += weight * c;
            }
        }
    }
    OperatorGrid {
        m,
        sigma,
        u,
        digit_min,
        digit_max,
        nodes,
        bary,
        matrix,
    }
}

impl OperatorGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// (L f) sampled at the nodes, for f given by its node values.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.m);
        let mut out = vec![0.0; self.m];
        for i in 0..self.m {
            let row = &self.matrix[i * self.m..(i + 1) * self.m];
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Barycentric evaluation at x of the interpolant through the node values.
    pub fn interpolate(&self, v: &[f64], x: f64) -> f64 {
        assert_eq!(v.len(), self.m);
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..self.m {
            if x == self.nodes[j] {
                return v[j];
            }
            let t = self.bary[j] / (x - self.nodes[j]);
            num += t * v[j];
            den += t;
        }
        num / den
    }
}

/// Dominant eigenpair of a discretized transfer operator.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralData {
    pub lambda: f64,
    pub eigenfunction: Vec<f64>,
    pub residual: f64,
    pub m: usize,
}

/// Power iteration from the constant vector. The dominant eigenvalue of
/// L_{sigma,u,A} is simple and positive with a positive eigenfunction, so
/// this converges; failure to reach `tol` within the iteration cap is an
/// error (bad parameters or too small a grid).
pub fn dominant_eig(grid: &OperatorGrid, tol: f64) -> Result<SpectralData> {
    let m = grid.m;
    let mut v = vec![1.0; m];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_POWER_ITERATIONS {
        let w = grid.apply(&v);
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let lambda = vw / vv;
        let vmax = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        residual = v
            .iter()
            .zip(&w)
            .map(|(a, b)| (b - lambda * a).abs())
            .fold(0.0f64, f64::max)
            / vmax;
        // Normalize by the entry of largest modulus, keeping its sign fixed
        // so the iteration does not oscillate.
        let imax = w
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .expect("nonempty vector");
        let scale = w[imax];
        if scale == 0.0 {
            // Zero operator (empty branch set).
            return Ok(SpectralData {
                lambda: 0.0,
                eigenfunction: vec![0.0; m],
                residual: 0.0,
                m,
            });
        }
        v = w.iter().map(|x| x / scale).collect();
        if residual < tol {
            return Ok(SpectralData {
                lambda,
                eigenfunction: v,
                residual,
                m,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_POWER_ITERATIONS,
        residual,
    })
}

/// lambda(sigma, u) for the full branch set 1..=A.
pub fn eigenvalue(a_bound: u64, sigma: f64, u: f64, m: usize) -> Result<f64> {
    Ok(dominant_eig(&build_operator(a_bound, sigma, u, m), DEFAULT_EIG_TOL)?.lambda)
}

/// Bisection for lambda(sigma, w) = 1 over sigma in (0, 1); lambda is
/// strictly decreasing in sigma, so the root is unique when the bracket is
/// valid. Returns (root, lo, hi, lambda at the initial lo, final residual).
fn bisect_sigma(a_bound: u64, w: f64, tol: f64, m: usize) -> Result<(f64, f64, f64, f64, f64)> {
    let mut lo = 1e-4;
    let mut hi = 1.0 - 1e-7;
    let lambda_lo = eigenvalue(a_bound, lo, w, m)?;
    let lambda_hi = eigenvalue(a_bound, hi, w, m)?;
    if lambda_lo <= 1.0 {
        return Err(Error::BracketFailure(format!(
            "lambda({lo}) = {lambda_lo} <= 1 for A = {a_bound}, w = {w}; \
             the digit set is degenerate or w is outside the usable window"
        )));
    }
    if lambda_hi >= 1.0 {
        return Err(Error::BracketFailure(format!(
            "lambda({hi}) = {lambda_hi} >= 1 for A = {a_bound}, w = {w}"
        )));
    }
    for _ in 0..MAX_BISECTION_ITERATIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let lambda_mid = eigenvalue(a_bound, mid, w, m)?;
        if lambda_mid > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let res = dominant_eig(&build_operator(a_bound, root, w, m), DEFAULT_EIG_TOL)?;
    Ok((root, lo, hi, lambda_lo, res.residual))
}

/// Hausdorff dimension delta_A of the bounded-digit set, with the bracket,
/// endpoint eigenvalues, and a cross-validation run at doubled node count.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionResult {
    pub delta: f64,
    pub lo: f64,
    pub hi: f64,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub m_coarse: usize,
    pub m_fine: usize,
    pub delta_coarse: f64,
    pub residual: f64,
}

impl DimensionResult {
    /// The JSON record {A, delta, lo, hi, m, residual}.
    pub fn to_json(&self, a_bound: u64) -> serde_json::Value {
        serde_json::json!({
            "A": a_bound,
            "delta": self.delta,
            "lo": self.lo,
            "hi": self.hi,
            "m": self.m_fine,
            "residual": self.residual,
        })
    }
}

/// Bisection for lambda(sigma, 0) = 1 at node counts m and 2m; the returned
/// delta comes from the finer grid and `delta_coarse` records the other run.
pub fn solve_dimension(a_bound: u64, tol: f64, m: usize) -> Result<DimensionResult> {
    if m < 8 {
        return Err(Error::InvalidParameter(format!("node count m = {m} < 8")));
    }
    let (delta_coarse, _, _, _, _) = bisect_sigma(a_bound, 0.0, tol, m)?;
    let (delta, lo, hi, lambda_lo, residual) = bisect_sigma(a_bound, 0.0, tol, 2 * m)?;
    let lambda_hi = eigenvalue(a_bound, 1.0 - 1e-7, 0.0, 2 * m)?;
    Ok(DimensionResult {
        delta,
        lo,
        hi,
        lambda_lo,
        lambda_hi,
        m_coarse: m,
        m_fine: 2 * m,
        delta_coarse,
        residual,
    })
}

/// The pole location s_0(w): the sigma with lambda(sigma, w) = 1. At w = 0
/// this is delta_A.
pub fn solve_pole(a_bound: u64, w: f64, tol: f64, m: usize) -> Result<f64> {
    if m < 8 {
        return Err(Error::InvalidParameter(format!("node count m = {m} < 8")));
    }
    let (root, _, _, _, _) = bisect_sigma(a_bound, w, tol, m)?;
    Ok(root)
}

/// Truncated operator series at zero:
///
///   (L^sharp . sum_{n=0}^{depth-1} L^n 1)(0),
///
/// where L^sharp keeps only the branches with a >= 2. Equals the orbit sum
/// over digit strings of length <= depth whose final digit is >= 2.
pub fn operator_series_at_zero(a_bound: u64, sigma: f64, w: f64, depth: usize, m: usize) -> f64 {
    assert!(depth >= 1);
    let grid = build_operator(a_bound, sigma, w, m);
    let mut v = vec![1.0; m];
    let mut acc = v.clone();
    for _ in 1..depth {
        v = grid.apply(&v);
        for (a, b) in acc.iter_mut().zip(&v) {
            *a += b;
        }
    }
    if a_bound < 2 {
        return 0.0;
    }
    let sharp = build_operator_restricted(2, a_bound, sigma, w, m);
    let out = sharp.apply(&acc);
    // x = 0 is the first collocation node.
    out[0]
}

/// Exact-continuant reference for the same truncated series: the sum of
/// q_l^{-2 sigma} e^{w l} over digit strings (a_1..a_l), a_i <= A, a_l >= 2,
/// l <= depth. This is the other route through the operator identity and
/// stays free of any collocation machinery.
pub fn orbit_sum(a_bound: u64, sigma: f64, w: f64, depth: usize) -> f64 {
    fn rec(
        a_bound: u64,
        sigma: f64,
        w: f64,
        depth_left: usize,
        q_prev: u64,
        q_cur: u64,
        len: u32,
        total: &mut f64,
    ) {
        for a in 1..=a_bound {
            let q_new = a * q_cur + q_prev;
            if a >= 2 {
                *total += (q_new as f64).powf(-2.0 * sigma) * (w * (len + 1) as f64).exp();
            }
            if depth_left > 1 {
                rec(a_bound, sigma, w, depth_left - 1, q_cur, q_new, len + 1, total);
            }
        }
    }
    let mut total = 0.0;
    rec(a_bound, sigma, w, depth, 0, 1, 0, &mut total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    const PHI: f64 = 1.618033988749894848;

    #[test]
    fn counting_eigenvalue_is_a() {
        for a in [2u64, 3, 8] {
            let lambda = eigenvalue(a, 0.0, 0.0, 32).unwrap();
            assert!((lambda - a as f64).abs() < 1e-12, "A={a} lambda={lambda}");
        }
    }

    #[test]
    fn single_branch_closed_form() {
        // A=1: the operator is one weighted composition; its dominant
        // eigenvalue is |h_1'(x*)|^sigma at the golden-ratio fixed point.
        let lambda = eigenvalue(1, 0.5, 0.0, 32).unwrap();
        assert!((lambda - 1.0 / PHI).abs() < 1e-12, "lambda={lambda}");
        let lambda2 = eigenvalue(1, 0.8, 0.0, 32).unwrap();
        assert!((lambda2 - PHI.powf(-1.6)).abs() < 1e-12);
    }

    #[test]
    fn spectral_convergence_m_vs_2m() {
        for (a, sigma) in [(2u64, 0.5), (2, 0.3), (8, 0.9)] {
            let l1 = eigenvalue(a, sigma, 0.0, 32).unwrap();
            let l2 = eigenvalue(a, sigma, 0.0, 64).unwrap();
            assert!((l1 - l2).abs() < 1e-12, "A={a} sigma={sigma}: {l1} vs {l2}");
        }
    }

    #[test]
    fn eigenfunction_positive() {
        for (a, sigma, u) in [(2u64, 0.53, 0.0), (3, 0.7, 0.1), (5, 0.4, -0.1)] {
            let data = dominant_eig(&build_operator(a, sigma, u, 40), 1e-13).unwrap();
            assert!(data.eigenfunction.iter().all(|&x| x > 0.0));
            assert!(data.residual < 1e-13);
        }
    }

    #[test]
    fn bowen_monotone_and_log_convex() {
        let mut prev = f64::INFINITY;
        let mut logs = Vec::new();
        for k in 0..17 {
            let sigma = 0.1 + 0.05 * k as f64;
            let l = eigenvalue(2, sigma, 0.0, 32).unwrap();
            assert!(l < prev, "not strictly decreasing at sigma={sigma}");
            prev = l;
            logs.push(l.ln());
        }
        for w in logs.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-9, "log-convexity violated");
        }
    }

    #[test]
    fn dimension_a2() {
        let r = solve_dimension(2, DEFAULT_SIGMA_TOL, 32).unwrap();
        assert!(r.delta > 0.531 && r.delta < 0.532, "delta = {}", r.delta);
        assert!((r.delta - r.delta_coarse).abs() < 1e-10);
        assert!(r.lambda_lo > 1.0 && r.lambda_hi < 1.0);
        assert!(r.hi - r.lo <= DEFAULT_SIGMA_TOL * 1.01);
    }

    #[test]
    fn dimension_a1_bracket_failure() {
        assert!(matches!(
            solve_dimension(1, DEFAULT_SIGMA_TOL, 32),
            Err(Error::BracketFailure(_))
        ));
    }

    #[test]
    fn dimension_ordering() {
        let deltas: Vec<f64> = (2..=5u64)
            .map(|a| solve_dimension(a, 1e-11, 24).unwrap().delta)
            .collect();
        for pair in deltas.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn pole_examples() {
        let delta = solve_dimension(2, DEFAULT_SIGMA_TOL, 32).unwrap().delta;
        let s0 = solve_pole(2, 0.0, DEFAULT_SIGMA_TOL, 64).unwrap();
        assert!((s0 - delta).abs() < 2.1 * DEFAULT_SIGMA_TOL);
        // w > 0 inflates lambda, pushing the root to the right.
        let s0_pos = solve_pole(2, 0.1, DEFAULT_SIGMA_TOL, 32).unwrap();
        assert!(s0_pos > delta);
        // Cross-validation between m and 2m.
        let s0_fine = solve_pole(2, 0.1, DEFAULT_SIGMA_TOL, 64).unwrap();
        assert!((s0_pos - s0_fine).abs() < 1e-10);
    }

    #[test]
    fn series_depth_one_closed_form() {
        // depth 1: only the sharp layer: sum over 2 <= a <= A of a^{-2s} e^w.
        for (a_bound, sigma, w) in [(2u64, 0.7, 0.0), (3, 0.8, 0.1)] {
            let got = operator_series_at_zero(a_bound, sigma, w, 1, 32);
            let want: f64 = (2..=a_bound)
                .map(|a| (a as f64).powf(-2.0 * sigma) * w.exp())
                .sum();
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn series_matches_orbit_sum() {
        for (a, sigma, w) in [
            (2u64, 0.7, 0.0),
            (2, 0.8, 0.1),
            (3, 0.7, 0.1),
            (3, 0.8, 0.0),
        ] {
            let series = operator_series_at_zero(a, sigma, w, 10, 40);
            let orbit = orbit_sum(a, sigma, w, 10);
            assert!(
                (series - orbit).abs() < 1e-8,
                "A={a} sigma={sigma} w={w}: {series} vs {orbit}"
            );
        }
    }

    #[test]
    fn interpolation_at_nodes_is_exact() {
        let grid = build_operator(2, 0.5, 0.0, 16);
        let v: Vec<f64> = (0..16).map(|i| (i as f64).sin()).collect();
        for (j, &x) in grid.nodes().iter().enumerate() {
            assert_eq!(grid.interpolate(&v, x), v[j]);
        }
        // And reproduces a quadratic exactly between nodes.
        let quad: Vec<f64> = grid.nodes().iter().map(|&x| 3.0 * x * x - x + 0.25).collect();
        let y = grid.interpolate(&quad, 0.3721);
        assert!((y - (3.0 * 0.3721f64 * 0.3721 - 0.3721 + 0.25)).abs() < 1e-13);
    }
}
