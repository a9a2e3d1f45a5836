//! Enumeration and counting of the bounded-digit sets: Sigma_{N,A},
//! Omega_{N,A} and the thickened windows Sigma_{N,A}(eps) over Q, and their
//! height-indexed analogues over the norm-Euclidean imaginary quadratic
//! fields.
//!
//! The production engines are pruned depth-first searches over inverse
//! branches; the brute-force scans in this module are their independent
//! oracles and stay deliberately simple.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::cf::expand_u64;
use crate::error::{Error, Result};
use crate::quadratic::{
    attainable_digits, cf_expand_complex, quadrat_from_pair, reduce_fraction, Field, QuadInt,
    QuadRat,
};

/// Counts keyed by denominator (real case) or squared height (complex case),
/// with a per-key histogram of expansion lengths. The length histogram is
/// exact integer data, so weighted sums for any w can be evaluated after the
/// fact and parallel merges are bit-identical to sequential runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    limit: u64,
    entries: BTreeMap<u64, Vec<(u32, u64)>>,
}

impl CountTable {
    pub fn new(limit: u64) -> Self {
        CountTable {
            limit,
            entries: BTreeMap::new(),
        }
    }

    /// Largest key the table was built to cover (inclusive).
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn record(&mut self, key: u64, len: u32) {
        debug_assert!(key <= self.limit);
        let hist = self.entries.entry(key).or_default();
        match hist.binary_search_by_key(&len, |&(l, _)| l) {
            Ok(i) => hist[i].1 += 1,
            Err(i) => hist.insert(i, (len, 1)),
        }
    }

    /// |Sigma_{key}|: number of recorded elements with exactly this key.
    pub fn count(&self, key: u64) -> u64 {
        self.entries
            .get(&key)
            .map(|h| h.iter().map(|&(_, c)| c).sum())
            .unwrap_or(0)
    }

    /// Total count over all keys (|Omega| for a table built to its limit).
    pub fn total(&self) -> u64 {
        self.entries
            .values()
            .map(|h| h.iter().map(|&(_, c)| c).sum::<u64>())
            .sum()
    }

    /// Cumulative count over keys <= n.
    pub fn total_up_to(&self, n: u64) -> u64 {
        self.entries
            .range(..=n)
            .map(|(_, h)| h.iter().map(|&(_, c)| c).sum::<u64>())
            .sum()
    }

    /// Sum of e^{w * length} over the elements with this key; at w = 0 this
    /// is exactly `count(key)`.
    pub fn weighted(&self, key: u64, w: f64) -> f64 {
        self.entries
            .get(&key)
            .map(|h| {
                h.iter()
                    .map(|&(l, c)| c as f64 * (w * l as f64).exp())
                    .sum()
            })
            .unwrap_or(0.0)
    }

    /// Psi_w(n) = sum over keys <= n of the weighted counts.
    pub fn weighted_up_to(&self, n: u64, w: f64) -> f64 {
        self.entries
            .range(..=n)
            .map(|(_, h)| {
                h.iter()
                    .map(|&(l, c)| c as f64 * (w * l as f64).exp())
                    .sum::<f64>()
            })
            .sum()
    }

    /// Count over the thickened window [n_low, n_max].
    pub fn thickened_count(&self, window: &ThickenedWindow) -> Result<u64> {
        if window.n_max > self.limit {
            return Err(Error::TableCoverage {
                limit: self.limit,
                requested: window.n_max,
            });
        }
        Ok(self
            .entries
            .range(window.n_low()..=window.n_max)
            .map(|(_, h)| h.iter().map(|&(_, c)| c).sum::<u64>())
            .sum())
    }

    /// Keys with at least one recorded element, ascending.
    pub fn keys(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merges two partial tables; integer-exact, so the result does not
    /// depend on merge order or scheduling.
    pub fn merge(mut self, other: CountTable) -> CountTable {
        debug_assert_eq!(self.limit, other.limit);
        for (key, hist) in other.entries {
            let slot = self.entries.entry(key).or_default();
            for (len, c) in hist {
                match slot.binary_search_by_key(&len, |&(l, _)| l) {
                    Ok(i) => slot[i].1 += c,
                    Err(i) => slot.insert(i, (len, c)),
                }
            }
        }
        self
    }

    /// CSV with columns `n,count` plus one `w_<value>` column per sampled w.
    /// Counts are exact integers; weighted sums carry 18 significant digits.
    pub fn to_csv(&self, ws: &[f64]) -> String {
        let mut out = String::from("n,count");
        for w in ws {
            out.push_str(&format!(",w_{w}"));
        }
        out.push('\n');
        for (&key, _) in &self.entries {
            out.push_str(&format!("{key},{}", self.count(key)));
            for &w in ws {
                out.push_str(&format!(",{:.17e}", self.weighted(key, w)));
            }
            out.push('\n');
        }
        out
    }
}

/// Parsed form of the count CSV; `to_string` re-emits the exact bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct CountCsv {
    pub ws: Vec<f64>,
    pub rows: Vec<(u64, u64, Vec<f64>)>,
}

impl CountCsv {
    pub fn parse(text: &str) -> Result<CountCsv> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty csv".into()))?;
        let mut cols = header.split(',');
        if cols.next() != Some("n") || cols.next() != Some("count") {
            return Err(Error::Parse(format!("unexpected csv header: {header}")));
        }
        let mut ws = Vec::new();
        for col in cols {
            let w = col
                .strip_prefix("w_")
                .ok_or_else(|| Error::Parse(format!("unexpected column: {col}")))?;
            ws.push(
                w.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad w column {col}: {e}")))?,
            );
        }
        let mut rows = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let n = parts
                .next()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse(format!("bad row: {line}")))?;
            let count = parts
                .next()
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Parse(format!("bad row: {line}")))?;
            let mut weighted = Vec::new();
            for p in parts {
                weighted.push(
                    p.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad weighted value {p}: {e}")))?,
                );
            }
            if weighted.len() != ws.len() {
                return Err(Error::Parse(format!("column mismatch in row: {line}")));
            }
            rows.push((n, count, weighted));
        }
        Ok(CountCsv { ws, rows })
    }
}

impl std::fmt::Display for CountCsv {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n,count")?;
        for w in &self.ws {
            write!(f, ",w_{w}")?;
        }
        writeln!(f)?;
        for (n, count, weighted) in &self.rows {
            write!(f, "{n},{count}")?;
            for v in weighted {
                write!(f, ",{v:.17e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The window [N - floor(N * eps), N] with eps = N^{-gamma/2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThickenedWindow {
    pub n_max: u64,
    pub gamma: f64,
}

impl ThickenedWindow {
    pub fn new(n_max: u64, gamma: f64) -> Result<ThickenedWindow> {
        if !(gamma > 0.0) {
            return Err(Error::BadWindow(format!("gamma = {gamma} must be > 0")));
        }
        let w = ThickenedWindow { n_max, gamma };
        if w.floor_n_eps() >= n_max {
            return Err(Error::BadWindow(format!(
                "floor(N*eps) = {} >= N = {n_max}",
                w.floor_n_eps()
            )));
        }
        Ok(w)
    }

    pub fn epsilon(&self) -> f64 {
        (self.n_max as f64).powf(-self.gamma / 2.0)
    }

    pub fn floor_n_eps(&self) -> u64 {
        (self.n_max as f64 * self.epsilon()).floor() as u64
    }

    pub fn n_low(&self) -> u64 {
        self.n_max - self.floor_n_eps()
    }
}

/// Keys up to this bound are accumulated in a flat per-key array during
/// enumeration (the tree-map upsert would otherwise dominate the walk) and
/// converted to the canonical table afterwards.
const DENSE_LIMIT: u64 = 1 << 22;

/// Flat accumulator indexed by key; exact integers only, so conversion and
/// merging are lossless.
struct DenseAcc {
    limit: u64,
    hists: Vec<Vec<(u32, u64)>>,
}

impl DenseAcc {
    fn new(limit: u64) -> DenseAcc {
        DenseAcc {
            limit,
            hists: vec![Vec::new(); (limit + 1) as usize],
        }
    }

    #[inline]
    fn record(&mut self, key: u64, len: u32) {
        let hist = &mut self.hists[key as usize];
        match hist.binary_search_by_key(&len, |&(l, _)| l) {
            Ok(i) => hist[i].1 += 1,
            Err(i) => hist.insert(i, (len, 1)),
        }
    }

    fn into_table(self) -> CountTable {
        CountTable {
            limit: self.limit,
            entries: self
                .hists
                .into_iter()
                .enumerate()
                .filter(|(_, h)| !h.is_empty())
                .map(|(k, h)| (k as u64, h))
                .collect(),
        }
    }
}

fn run_dense_or_sparse(n_max: u64, walk: impl Fn(&mut dyn FnMut(u64, u32))) -> CountTable {
    if n_max <= DENSE_LIMIT {
        let mut acc = DenseAcc::new(n_max);
        walk(&mut |key, len| acc.record(key, len));
        acc.into_table()
    } else {
        let mut table = CountTable::new(n_max);
        walk(&mut |key, len| table.record(key, len));
        table
    }
}

/// Pruned depth-first enumeration of Omega_{N,A}: digit strings with digits
/// in {1..A}, pruned as soon as the continuant denominator exceeds `n_max`
/// (denominators never decrease along a branch), recording each node whose
/// final digit is >= 2.
pub fn enumerate_real(a_bound: u64, n_max: u64) -> CountTable {
    run_dense_or_sparse(n_max, |record| {
        dfs_real(a_bound, n_max, 0, 1, 0, 0, record)
    })
}

/// As `enumerate_real`, with the forest split at depth one (one subtree per
/// first digit) and the per-subtree tables merged in digit order. The merge
/// is integer-exact, so the result is bit-identical to the sequential run.
pub fn enumerate_real_parallel(a_bound: u64, n_max: u64) -> CountTable {
    let parts: Vec<CountTable> = (1..=a_bound)
        .into_par_iter()
        .map(|first| {
            run_dense_or_sparse(n_max, |record| {
                if first <= n_max {
                    dfs_real(a_bound, n_max, 1, first, first, 1, record);
                }
            })
        })
        .collect();
    parts
        .into_iter()
        .fold(CountTable::new(n_max), CountTable::merge)
}

fn dfs_real(
    a_bound: u64,
    n_max: u64,
    q_prev: u64,
    q_cur: u64,
    last: u64,
    len: u32,
    record: &mut dyn FnMut(u64, u32),
) {
    if last >= 2 {
        record(q_cur, len);
    }
    for a in 1..=a_bound {
        let Some(q_new) = a.checked_mul(q_cur).and_then(|x| x.checked_add(q_prev)) else {
            break;
        };
        if q_new > n_max {
            break;
        }
        dfs_real(a_bound, n_max, q_cur, q_new, a, len + 1, record);
    }
}

/// The elements of Omega_{N,A} as reduced fractions (numerator, denominator),
/// for set-semantics tests at desk scale.
pub fn enumerate_real_elements(a_bound: u64, n_max: u64) -> Vec<(u64, u64)> {
    fn dfs(
        a_bound: u64,
        n_max: u64,
        p_prev: u64,
        p_cur: u64,
        q_prev: u64,
        q_cur: u64,
        last: u64,
        out: &mut Vec<(u64, u64)>,
    ) {
        if last >= 2 {
            out.push((p_cur, q_cur));
        }
        for a in 1..=a_bound {
            let Some(q_new) = a.checked_mul(q_cur).and_then(|x| x.checked_add(q_prev)) else {
                break;
            };
            if q_new > n_max {
                break;
            }
            let p_new = a * p_cur + p_prev;
            dfs(a_bound, n_max, p_cur, p_new, q_cur, q_new, a, out);
        }
    }
    let mut out = Vec::new();
    dfs(a_bound, n_max, 1, 0, 0, 1, 0, &mut out);
    out
}

/// Brute-force oracle for the real sets: scans every reduced fraction a/n
/// with n <= n_max, expands it digit by digit, and keeps those with all
/// digits <= a_bound. Intended for oracle scales (n_max <= 1e5).
pub fn brute_force_real(a_bound: u64, n_max: u64) -> CountTable {
    let mut table = CountTable::new(n_max);
    for n in 2..=n_max {
        for a in 1..n {
            if num_integer::gcd(a, n) != 1 {
                continue;
            }
            let digits = expand_u64(a, n);
            if digits.iter().all(|&d| d <= a_bound) {
                table.record(n, digits.len() as u32);
            }
        }
    }
    table
}

/// A finite digit alphabet over O_d for the complex enumeration.
#[derive(Debug, Clone)]
pub struct ComplexAlphabet {
    pub field: Field,
    digits: Vec<QuadInt>,
}

impl ComplexAlphabet {
    /// The default alphabet: attainable digits with field norm <= max_norm.
    pub fn with_norm_bound(field: Field, max_norm: u64) -> ComplexAlphabet {
        ComplexAlphabet {
            field,
            digits: attainable_digits(field, max_norm),
        }
    }

    /// An explicit digit set, optionally closed under unit multiplication.
    pub fn from_digits(field: Field, digits: Vec<QuadInt>, close_under_units: bool) -> ComplexAlphabet {
        let mut set: std::collections::BTreeSet<QuadInt> = digits.into_iter().collect();
        if close_under_units {
            let base: Vec<QuadInt> = set.iter().cloned().collect();
            for x in base {
                for e in field.units() {
                    set.insert(field.mul_int(&x, &e));
                }
            }
        }
        let mut digits: Vec<QuadInt> = set.into_iter().collect();
        digits.sort_by_key(|x| (field.norm_int(x), x.a.clone(), x.b.clone()));
        ComplexAlphabet { field, digits }
    }

    pub fn digits(&self) -> &[QuadInt] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn contains(&self, x: &QuadInt) -> bool {
        self.digits.iter().any(|d| d == x)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct SmallQuad {
    a: i64,
    b: i64,
}

impl SmallQuad {
    const ZERO: SmallQuad = SmallQuad { a: 0, b: 0 };
    const ONE: SmallQuad = SmallQuad { a: 1, b: 0 };
}

/// Complex enumeration engine.
///
/// Digit strings are grown from the innermost digit outward: the state is
/// the exact tail value t = [0; c_k, ..., c_l] as a coprime fraction
/// num/den over O_d, and prepending a digit c maps it to 1/(c + t) with
/// (num, den) <- (den, c*den + num). Growing this way makes the string's
/// admissibility checkable one digit at a time -- nearest(c + t) must equal
/// c, which also forces the previous tail into the rounding cell -- so every
/// state IS an element of E_{A_d} and no re-expansion filter is needed.
/// Denominator norms strictly increase through admissible states, which
/// gives the exact prune norm(den) > N and guarantees termination.
struct ComplexDfs {
    digits: Vec<SmallQuad>,
    n_max: u64,
    // omega^2 = s*omega + t; norm(a + b*omega) = a^2 + tr*a*b + nm*b^2.
    sq_s: i128,
    sq_t: i128,
    nc_tr: i128,
    nc_nm: i128,
    neighbors: Vec<(i128, i128)>,
}

impl ComplexDfs {
    fn new(alphabet: &ComplexAlphabet, n_max: u64) -> Self {
        use num_traits::ToPrimitive;
        let field = alphabet.field;
        let digits = alphabet
            .digits
            .iter()
            .map(|d| SmallQuad {
                a: d.a.to_i64().expect("alphabet digit fits i64"),
                b: d.b.to_i64().expect("alphabet digit fits i64"),
            })
            .collect();
        let d = field.d() as i128;
        let (sq_s, sq_t, nc_tr, nc_nm) = if field.is_hexagonal() {
            (1, -(d + 1) / 4, 1, (d + 1) / 4)
        } else {
            (0, -d, 0, d)
        };
        let mut neighbors = vec![(1, 0), (-1, 0), (0, 1), (0, -1)];
        if field.is_hexagonal() {
            neighbors.push((-1, 1));
            neighbors.push((1, -1));
        }
        ComplexDfs {
            digits,
            n_max,
            sq_s,
            sq_t,
            nc_tr,
            nc_nm,
            neighbors,
        }
    }

    fn norm128(&self, a: i128, b: i128) -> i128 {
        a * a + self.nc_tr * a * b + self.nc_nm * b * b
    }

    fn norm(&self, x: SmallQuad) -> i128 {
        self.norm128(x.a as i128, x.b as i128)
    }

    /// c*x + y over O_d with overflow checks.
    fn mul_add(&self, c: SmallQuad, x: SmallQuad, y: SmallQuad) -> Option<SmallQuad> {
        let bb = c.b.checked_mul(x.b)?;
        let a = c
            .a
            .checked_mul(x.a)?
            .checked_add(bb.checked_mul(self.sq_t as i64)?)?
            .checked_add(y.a)?;
        let b = c
            .a
            .checked_mul(x.b)?
            .checked_add(c.b.checked_mul(x.a)?)?
            .checked_add(bb.checked_mul(self.sq_s as i64)?)?
            .checked_add(y.b)?;
        Some(SmallQuad { a, b })
    }

    /// Coordinates (X, Y) with x/y = (X + Y*omega)/norm(y).
    fn rationalize(&self, x: SmallQuad, y: SmallQuad) -> (i128, i128, i128) {
        let (xa, xb) = (x.a as i128, x.b as i128);
        let (ya, yb) = (y.a as i128, y.b as i128);
        // conj(y) = (ya + tr*yb, -yb).
        let (ca, cb) = (ya + self.nc_tr * yb, -yb);
        let cross = xa * cb + xb * ca;
        let re = xa * ca + xb * cb * self.sq_t;
        let im = cross + xb * cb * self.sq_s;
        (re, im, self.norm128(ya, yb))
    }

    /// Nearest lattice point to (X + Y*omega)/n, same tie-break as
    /// `Field::nearest_lattice_point`: smallest (a, b) among exact ties.
    fn nearest_frac(&self, x: i128, y: i128, n: i128) -> (i64, i64) {
        debug_assert!(n > 0);
        let seed_a = div_floor_i128(2 * x + n, 2 * n);
        let seed_b = div_floor_i128(2 * y + n, 2 * n);
        let mut best: Option<(i128, i64, i64)> = None;
        for da in -1..=1i128 {
            for db in -1..=1i128 {
                let (a, b) = (seed_a + da, seed_b + db);
                let d2 = self.norm128(x - a * n, y - b * n);
                let better = match best {
                    None => true,
                    Some((bd, ba, bb)) => {
                        d2 < bd || (d2 == bd && (a as i64, b as i64) < (ba, bb))
                    }
                };
                if better {
                    best = Some((d2, a as i64, b as i64));
                }
            }
        }
        let (_, a, b) = best.expect("nonempty block");
        (a, b)
    }

    /// Whether (X + Y*omega)/n lies in the closed fundamental domain.
    fn in_closure_frac(&self, x: i128, y: i128, n: i128) -> bool {
        let n0 = self.norm128(x, y);
        self.neighbors
            .iter()
            .all(|&(ma, mb)| n0 <= self.norm128(x - ma * n, y - mb * n))
    }

    /// Visits every admissible state below `t = num/den`; `record` receives
    /// (value fraction, height^2, string length) for states with
    /// norm(den) <= N.
    fn walk(
        &self,
        num: SmallQuad,
        den: SmallQuad,
        len: u32,
        record: &mut impl FnMut(SmallQuad, SmallQuad, u64, u32),
    ) {
        for &c in &self.digits {
            let Some(den_new) = self.mul_add(c, den, num) else { continue };
            let n_new = self.norm(den_new);
            if n_new == 0 || n_new > self.n_max as i128 {
                continue;
            }
            // Admissibility: the new value 1/(c + t) must expand with first
            // digit exactly c, i.e. c + t rounds to c.
            let (fx, fy, fn_) = self.rationalize(den_new, den);
            if self.nearest_frac(fx, fy, fn_) != (c.a, c.b) {
                continue;
            }
            // The new value den/den_new is a member iff it lies in I_d.
            let (zx, zy, zn) = self.rationalize(den, den_new);
            if self.in_closure_frac(zx, zy, zn) {
                record(den, den_new, n_new as u64, len + 1);
            }
            self.walk(den, den_new, len + 1, record);
        }
    }
}

fn div_floor_i128(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

/// Depth-first enumeration of Omega_{N,A_d}, keyed by squared height.
/// Produces the same table as `brute_force_complex` on its domain.
pub fn enumerate_complex(alphabet: &ComplexAlphabet, n_max: u64) -> CountTable {
    if alphabet.is_empty() || n_max == 0 {
        return CountTable::new(n_max);
    }
    let dfs = ComplexDfs::new(alphabet, n_max);
    run_dense_or_sparse(n_max, |record| {
        dfs.walk(SmallQuad::ZERO, SmallQuad::ONE, 0, &mut |_, _, key, len| {
            record(key, len)
        });
    })
}

/// Parallel variant split at depth one (one subtree per innermost digit),
/// merged in digit order; bit-identical to `enumerate_complex`.
pub fn enumerate_complex_parallel(alphabet: &ComplexAlphabet, n_max: u64) -> CountTable {
    if alphabet.is_empty() || n_max == 0 {
        return CountTable::new(n_max);
    }
    let dfs = ComplexDfs::new(alphabet, n_max);
    let parts: Vec<CountTable> = (0..dfs.digits.len())
        .into_par_iter()
        .map(|idx| {
            run_dense_or_sparse(n_max, |record| {
                let c = dfs.digits[idx];
                let n_c = dfs.norm(c);
                if n_c == 0 || n_c > n_max as i128 {
                    return;
                }
                let (zx, zy, zn) = dfs.rationalize(SmallQuad::ONE, c);
                if dfs.in_closure_frac(zx, zy, zn) {
                    record(n_c as u64, 1);
                }
                dfs.walk(SmallQuad::ONE, c, 1, &mut |_, _, key, len| {
                    record(key, len)
                });
            })
        })
        .collect();
    parts
        .into_iter()
        .fold(CountTable::new(n_max), CountTable::merge)
}

/// The elements of Omega_{N,A_d} with their keys and expansion lengths, for
/// desk-scale tests.
pub fn enumerate_complex_elements(
    alphabet: &ComplexAlphabet,
    n_max: u64,
) -> Vec<(QuadRat, u64, u32)> {
    let mut out = Vec::new();
    if alphabet.is_empty() || n_max == 0 {
        return out;
    }
    let field = alphabet.field;
    let dfs = ComplexDfs::new(alphabet, n_max);
    dfs.walk(SmallQuad::ZERO, SmallQuad::ONE, 0, &mut |num, den, key, len| {
        let z = quadrat_from_pair(
            field,
            &QuadInt::from_i64(num.a, num.b),
            &QuadInt::from_i64(den.a, den.b),
        )
        .expect("den != 0");
        out.push((z, key, len));
    });
    out
}

/// Brute-force oracle for the complex sets: scans all fractions alpha/beta
/// with both norms <= n_max, keeps the distinct reduced values inside the
/// closed fundamental domain, expands each, and filters by alphabet
/// membership. Oracle scale: n_max <= 1e4.
pub fn brute_force_complex(alphabet: &ComplexAlphabet, n_max: u64) -> CountTable {
    let field = alphabet.field;
    let mut table = CountTable::new(n_max);
    if n_max == 0 {
        return table;
    }
    let points = lattice_points_with_norm_up_to(field, n_max);
    let mut seen: std::collections::BTreeSet<(QuadInt, QuadInt)> = std::collections::BTreeSet::new();
    for beta in &points {
        if beta.is_zero() {
            continue;
        }
        let n_beta = field.norm_int(beta);
        for alpha in &points {
            if alpha.is_zero() {
                continue;
            }
            // |alpha/beta| <= R_c < 1 inside I_d, so norm(alpha) < norm(beta).
            if field.norm_int(alpha) >= n_beta {
                continue;
            }
            let z = quadrat_from_pair(field, alpha, beta).expect("beta != 0");
            if !field.in_closure(&z) {
                continue;
            }
            let reduced = reduce_fraction(field, alpha, beta).expect("beta != 0");
            seen.insert(reduced);
        }
    }
    for (alpha, beta) in seen {
        let ht2 = field.norm_int(&alpha).max(field.norm_int(&beta));
        if ht2 > BigInt::from(n_max) || !ht2.is_positive() {
            continue;
        }
        let z = quadrat_from_pair(field, &alpha, &beta).expect("beta != 0");
        let Ok(digits) = cf_expand_complex(field, &z) else {
            continue;
        };
        if digits.is_empty() {
            continue;
        }
        if digits.iter().all(|d| alphabet.contains(d)) {
            use num_traits::ToPrimitive;
            table.record(ht2.to_u64().expect("ht2 <= n_max"), digits.len() as u32);
        }
    }
    table
}

/// All lattice points of O_d with field norm <= n_max.
fn lattice_points_with_norm_up_to(field: Field, n_max: u64) -> Vec<QuadInt> {
    let bound = (2.0 * (n_max as f64).sqrt()).ceil() as i64 + 2;
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            let x = QuadInt::from_i64(a, b);
            if field.norm_int(&x) <= BigInt::from(n_max) {
                out.push(x);
            }
        }
    }
    out
}
