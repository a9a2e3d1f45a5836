//! Exact nearest-integer continued fractions over the five norm-Euclidean
//! imaginary quadratic fields Q(sqrt(-d)), d in {1, 2, 3, 7, 11}.
//!
//! Elements are stored as exact rational coordinate pairs over the module
//! basis (1, omega), where omega = sqrt(-d) for d = 1, 2 and
//! omega = (1 + sqrt(-d))/2 for d = 3, 7, 11. No floating point enters the
//! expansion path; the digit-attainability scan uses floats only to locate
//! candidate witnesses which are then confirmed exactly.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Hard cap on complex expansion length; rationals terminate long before
/// this, so hitting the cap signals a bug rather than a deep input.
pub const EXPANSION_GUARD: usize = 4096;

/// One of the five norm-Euclidean imaginary quadratic fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    D1,
    D2,
    D3,
    D7,
    D11,
}

impl Field {
    pub const ALL: [Field; 5] = [Field::D1, Field::D2, Field::D3, Field::D7, Field::D11];

    pub fn new(d: u32) -> Result<Field> {
        match d {
            1 => Ok(Field::D1),
            2 => Ok(Field::D2),
            3 => Ok(Field::D3),
            7 => Ok(Field::D7),
            11 => Ok(Field::D11),
            _ => Err(Error::InvalidParameter(format!(
                "d = {d} is not norm-Euclidean (need d in {{1,2,3,7,11}})"
            ))),
        }
    }

    pub fn d(self) -> u32 {
        match self {
            Field::D1 => 1,
            Field::D2 => 2,
            Field::D3 => 3,
            Field::D7 => 7,
            Field::D11 => 11,
        }
    }

    /// Rectangular lattice (omega = sqrt(-d)) vs hexagonal
    /// (omega = (1+sqrt(-d))/2).
    pub fn is_hexagonal(self) -> bool {
        matches!(self, Field::D3 | Field::D7 | Field::D11)
    }

    /// (s, t) with omega^2 = s*omega + t.
    fn omega_square(self) -> (i64, i64) {
        let d = self.d() as i64;
        if self.is_hexagonal() {
            (1, -(d + 1) / 4)
        } else {
            (0, -d)
        }
    }

    /// (tr, nm) with norm(u + v*omega) = u^2 + tr*u*v + nm*v^2.
    fn norm_coeffs(self) -> (i64, i64) {
        let d = self.d() as i64;
        if self.is_hexagonal() {
            (1, (d + 1) / 4)
        } else {
            (0, d)
        }
    }

    /// omega as a complex float, for witness-search only.
    fn omega_f64(self) -> (f64, f64) {
        let d = self.d() as f64;
        if self.is_hexagonal() {
            (0.5, d.sqrt() / 2.0)
        } else {
            (0.0, d.sqrt())
        }
    }

    /// The units of O_d: 4 for d=1, 6 for d=3, 2 otherwise.
    pub fn units(self) -> Vec<QuadInt> {
        let mut us = vec![QuadInt::from_i64(1, 0), QuadInt::from_i64(-1, 0)];
        match self {
            Field::D1 => {
                us.push(QuadInt::from_i64(0, 1));
                us.push(QuadInt::from_i64(0, -1));
            }
            Field::D3 => {
                us.push(QuadInt::from_i64(0, 1));
                us.push(QuadInt::from_i64(0, -1));
                us.push(QuadInt::from_i64(-1, 1));
                us.push(QuadInt::from_i64(1, -1));
            }
            _ => {}
        }
        us
    }

    /// Lattice vectors whose bisectors bound the Voronoi cell I_d.
    fn voronoi_neighbors(self) -> Vec<QuadInt> {
        let mut ns = vec![
            QuadInt::from_i64(1, 0),
            QuadInt::from_i64(-1, 0),
            QuadInt::from_i64(0, 1),
            QuadInt::from_i64(0, -1),
        ];
        if self.is_hexagonal() {
            ns.push(QuadInt::from_i64(-1, 1));
            ns.push(QuadInt::from_i64(1, -1));
        }
        ns
    }
}

/// An element a + b*omega of the ring of integers O_d.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInt {
    pub fn new(a: BigInt, b: BigInt) -> Self {
        QuadInt { a, b }
    }

    pub fn from_i64(a: i64, b: i64) -> Self {
        QuadInt::new(BigInt::from(a), BigInt::from(b))
    }

    pub fn zero() -> Self {
        QuadInt::from_i64(0, 0)
    }

    pub fn one() -> Self {
        QuadInt::from_i64(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn neg(&self) -> Self {
        QuadInt::new(-&self.a, -&self.b)
    }

    pub fn add(&self, other: &QuadInt) -> Self {
        QuadInt::new(&self.a + &other.a, &self.b + &other.b)
    }

    pub fn sub(&self, other: &QuadInt) -> Self {
        QuadInt::new(&self.a - &other.a, &self.b - &other.b)
    }

    pub fn to_rat(&self) -> QuadRat {
        QuadRat::new(
            BigRational::from(self.a.clone()),
            BigRational::from(self.b.clone()),
        )
    }
}

impl fmt::Display for QuadInt {
    /// Canonical form "a+bw" / "a-bw" / "a" / "bw" / "0", with the
    /// coefficient of w always written out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}w", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{}-{}w", self.a, self.b.magnitude())
        } else {
            write!(f, "{}+{}w", self.a, self.b)
        }
    }
}

/// An element u + v*omega of Q(sqrt(-d)) with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    pub u: BigRational,
    pub v: BigRational,
}

impl QuadRat {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        QuadRat { u, v }
    }

    pub fn from_i64(un: i64, ud: i64, vn: i64, vd: i64) -> Self {
        QuadRat::new(
            BigRational::new(BigInt::from(un), BigInt::from(ud)),
            BigRational::new(BigInt::from(vn), BigInt::from(vd)),
        )
    }

    pub fn zero() -> Self {
        QuadRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn add(&self, other: &QuadRat) -> Self {
        QuadRat::new(&self.u + &other.u, &self.v + &other.v)
    }

    pub fn sub(&self, other: &QuadRat) -> Self {
        QuadRat::new(&self.u - &other.u, &self.v - &other.v)
    }

    pub fn sub_int(&self, other: &QuadInt) -> Self {
        QuadRat::new(&self.u - BigRational::from(other.a.clone()), &self.v - BigRational::from(other.b.clone()))
    }
}

impl Field {
    pub fn mul_int(self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let (s, t) = self.omega_square();
        let cross = &x.a * &y.b + &x.b * &y.a;
        QuadInt::new(
            &x.a * &y.a + &x.b * &y.b * t,
            cross + &x.b * &y.b * s,
        )
    }

    pub fn conj_int(self, x: &QuadInt) -> QuadInt {
        let (tr, _) = self.norm_coeffs();
        QuadInt::new(&x.a + &x.b * tr, -&x.b)
    }

    /// The field norm |x|^2, a nonnegative rational integer.
    pub fn norm_int(self, x: &QuadInt) -> BigInt {
        let (tr, nm) = self.norm_coeffs();
        &x.a * &x.a + &x.a * &x.b * tr + &x.b * &x.b * nm
    }

    pub fn mul_rat(self, x: &QuadRat, y: &QuadRat) -> QuadRat {
        let (s, t) = self.omega_square();
        let s = BigRational::from(BigInt::from(s));
        let t = BigRational::from(BigInt::from(t));
        let cross = &x.u * &y.v + &x.v * &y.u;
        QuadRat::new(
            &x.u * &y.u + &(&x.v * &y.v) * &t,
            cross + &(&x.v * &y.v) * &s,
        )
    }

    pub fn conj_rat(self, x: &QuadRat) -> QuadRat {
        let (tr, _) = self.norm_coeffs();
        let tr = BigRational::from(BigInt::from(tr));
        QuadRat::new(&x.u + &(&x.v * &tr), -&x.v)
    }

    /// |x|^2 as an exact nonnegative rational.
    pub fn norm_rat(self, x: &QuadRat) -> BigRational {
        let (tr, nm) = self.norm_coeffs();
        let tr = BigRational::from(BigInt::from(tr));
        let nm = BigRational::from(BigInt::from(nm));
        &x.u * &x.u + &(&x.u * &x.v) * &tr + &(&x.v * &x.v) * &nm
    }

    /// Exact inverse 1/x = conj(x)/|x|^2.
    pub fn inv_rat(self, x: &QuadRat) -> Result<QuadRat> {
        if x.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let n = self.norm_rat(x);
        let c = self.conj_rat(x);
        Ok(QuadRat::new(c.u / &n, c.v / &n))
    }

    /// Exact quotient x/y in O_d, if y divides x.
    pub fn div_int_exact(self, x: &QuadInt, y: &QuadInt) -> Option<QuadInt> {
        if y.is_zero() {
            return None;
        }
        let n = self.norm_int(y);
        let prod = self.mul_int(x, &self.conj_int(y));
        let (qa, ra) = prod.a.div_rem(&n);
        let (qb, rb) = prod.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(QuadInt::new(qa, qb))
        } else {
            None
        }
    }

    /// Squared distance |z - mu|^2 between a field element and a lattice point.
    fn dist2(self, z: &QuadRat, mu: &QuadInt) -> BigRational {
        self.norm_rat(&z.sub_int(mu))
    }

    /// A lattice point of O_d minimizing |z - alpha|^2. Exact ties are broken
    /// toward the lexicographically smallest coordinate pair (a, then b).
    pub fn nearest_lattice_point(self, z: &QuadRat) -> QuadInt {
        let sa = round_half_up(&z.u);
        let sb = round_half_up(&z.v);
        let mut best: Option<(BigRational, QuadInt)> = None;
        for i in -1..=1i64 {
            for j in -1..=1i64 {
                let cand = QuadInt::new(&sa + BigInt::from(i), &sb + BigInt::from(j));
                let d2 = self.dist2(z, &cand);
                best = match best {
                    None => Some((d2, cand)),
                    Some((bd, bc)) => {
                        if d2 < bd || (d2 == bd && (&cand.a, &cand.b) < (&bc.a, &bc.b)) {
                            Some((d2, cand))
                        } else {
                            Some((bd, bc))
                        }
                    }
                };
            }
        }
        best.expect("candidate block is nonempty").1
    }

    /// Membership in the closed fundamental domain I_d (Voronoi cell of 0).
    pub fn in_closure(self, z: &QuadRat) -> bool {
        let n0 = self.norm_rat(z);
        self.voronoi_neighbors()
            .iter()
            .all(|mu| n0 <= self.dist2(z, mu))
    }

    /// Strict interior of I_d: 0 is the unique nearest lattice point.
    pub fn in_interior(self, z: &QuadRat) -> bool {
        let n0 = self.norm_rat(z);
        self.voronoi_neighbors()
            .iter()
            .all(|mu| n0 < self.dist2(z, mu))
    }
}

/// floor(r + 1/2) as a BigInt.
fn round_half_up(r: &BigRational) -> BigInt {
    let shifted = r + BigRational::new(BigInt::one(), BigInt::from(2));
    shifted.numer().div_floor(shifted.denom())
}

/// One application of the complex Gauss map T_d(z) = 1/z - [1/z] on a
/// nonzero z in the closed fundamental domain. Returns the digit and the
/// exact remainder, which again lies in the closed fundamental domain.
pub fn complex_gauss_step(field: Field, z: &QuadRat) -> Result<(QuadInt, QuadRat)> {
    if z.is_zero() {
        return Err(Error::OutOfDomain("complex_gauss_step(0)".into()));
    }
    if !field.in_closure(z) {
        return Err(Error::OutOfDomain(format!(
            "z = ({}, {}) outside closure(I_{})",
            z.u,
            z.v,
            field.d()
        )));
    }
    let w = field.inv_rat(z)?;
    let digit = field.nearest_lattice_point(&w);
    let rem = w.sub_int(&digit);
    Ok((digit, rem))
}

/// Nearest-integer continued fraction expansion of a field rational in the
/// closed fundamental domain; `0` expands to the empty sequence.
pub fn cf_expand_complex(field: Field, z: &QuadRat) -> Result<Vec<QuadInt>> {
    cf_expand_complex_guarded(field, z, EXPANSION_GUARD)
}

/// As `cf_expand_complex` with an explicit termination guard.
pub fn cf_expand_complex_guarded(
    field: Field,
    z: &QuadRat,
    max_steps: usize,
) -> Result<Vec<QuadInt>> {
    if !field.in_closure(z) {
        return Err(Error::OutOfDomain(format!(
            "z = ({}, {}) outside closure(I_{})",
            z.u,
            z.v,
            field.d()
        )));
    }
    let mut digits = Vec::new();
    let mut cur = z.clone();
    while !cur.is_zero() {
        if digits.len() >= max_steps {
            return Err(Error::ExpansionGuard(max_steps));
        }
        let (digit, rem) = complex_gauss_step(field, &cur)?;
        digits.push(digit);
        cur = rem;
    }
    Ok(digits)
}

/// Exact bottom-up evaluation of [0; alpha_1, ..., alpha_l]; the empty
/// sequence evaluates to 0. A zero denominator part-way through signals an
/// inadmissible digit list.
pub fn reconstruct_complex(field: Field, digits: &[QuadInt]) -> Result<QuadRat> {
    let mut acc = QuadRat::zero();
    for d in digits.iter().rev() {
        let t = acc.add(&d.to_rat());
        if t.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        acc = field.inv_rat(&t)?;
    }
    Ok(acc)
}

/// Greatest common divisor in O_d by the norm-Euclidean algorithm; the
/// result is determined up to units.
pub fn euclid_gcd(field: Field, a: &QuadInt, b: &QuadInt) -> QuadInt {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let q = field.nearest_lattice_point(&quadrat_div(field, &x, &y));
        let r = x.sub(&field.mul_int(&q, &y));
        debug_assert!(field.norm_int(&r) < field.norm_int(&y));
        x = y;
        y = r;
    }
    x
}

/// x/y as an exact field element (y != 0).
fn quadrat_div(field: Field, x: &QuadInt, y: &QuadInt) -> QuadRat {
    let n = BigRational::from(field.norm_int(y));
    let prod = field.mul_int(x, &field.conj_int(y));
    QuadRat::new(BigRational::from(prod.a) / &n, BigRational::from(prod.b) / &n)
}

/// Whether x and y differ by a unit factor.
pub fn is_associate(field: Field, x: &QuadInt, y: &QuadInt) -> bool {
    field
        .units()
        .iter()
        .any(|e| &field.mul_int(x, e) == y)
}

/// Reduces num/den to lowest terms and normalizes by a unit so that the
/// denominator's coordinate pair is lexicographically maximal among its unit
/// multiples; this fixes one representative per field rational.
pub fn reduce_fraction(field: Field, num: &QuadInt, den: &QuadInt) -> Result<(QuadInt, QuadInt)> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let g = euclid_gcd(field, num, den);
    let alpha = field
        .div_int_exact(num, &g)
        .expect("gcd divides the numerator");
    let beta = field
        .div_int_exact(den, &g)
        .expect("gcd divides the denominator");
    let mut best: Option<(QuadInt, QuadInt)> = None;
    for e in field.units() {
        let nb = field.mul_int(&beta, &e);
        let na = field.mul_int(&alpha, &e);
        best = match best {
            None => Some((na, nb)),
            Some((ba, bb)) => {
                if (&nb.a, &nb.b) > (&bb.a, &bb.b) {
                    Some((na, nb))
                } else {
                    Some((ba, bb))
                }
            }
        };
    }
    Ok(best.expect("unit set is nonempty"))
}

/// The exact value of num/den as a field element.
pub fn quadrat_from_pair(field: Field, num: &QuadInt, den: &QuadInt) -> Result<QuadRat> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(quadrat_div(field, num, den))
}

/// Writes z as a reduced fraction alpha/beta over O_d (canonical unit
/// normalization); z = 0 yields (0, 1).
pub fn quadrat_to_reduced(field: Field, z: &QuadRat) -> Result<(QuadInt, QuadInt)> {
    if z.is_zero() {
        return Ok((QuadInt::zero(), QuadInt::one()));
    }
    let m = z.u.denom().lcm(z.v.denom());
    let num = QuadInt::new(
        (&z.u * BigRational::from(m.clone())).to_integer(),
        (&z.v * BigRational::from(m.clone())).to_integer(),
    );
    let den = QuadInt::new(m, BigInt::zero());
    reduce_fraction(field, &num, &den)
}

/// Squared canonical height ht(z)^2 = max(|alpha|^2, |beta|^2) over the
/// reduced form z = alpha/beta. By convention ht(0)^2 = 0.
pub fn height_squared(field: Field, z: &QuadRat) -> BigInt {
    if z.is_zero() {
        return BigInt::zero();
    }
    let (alpha, beta) = quadrat_to_reduced(field, z).expect("z != 0 has a reduced form");
    field.norm_int(&alpha).max(field.norm_int(&beta))
}

/// Digits alpha in O_d with nonempty cylinder O_alpha and field norm at most
/// `max_norm`, in (norm, a, b) order.
///
/// A digit is included only with an exact witness: a rational grid point z in
/// the open fundamental domain whose exact inverse rounds to the digit. The
/// float pass merely decides where to spend exact arithmetic.
pub fn attainable_digits(field: Field, max_norm: u64) -> Vec<QuadInt> {
    const K: i64 = 512;
    let (ore, oim) = field.omega_f64();
    let neighbors: Vec<(f64, f64)> = field
        .voronoi_neighbors()
        .iter()
        .map(|mu| to_f64_point(mu, ore, oim))
        .collect();
    let mut found: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
    let max_norm_f = max_norm as f64;
    for i in -K..=K {
        for j in -K..=K {
            if i == 0 && j == 0 {
                continue;
            }
            let (uf, vf) = (i as f64 / K as f64, j as f64 / K as f64);
            let (zre, zim) = (uf + vf * ore, vf * oim);
            let n0 = zre * zre + zim * zim;
            if !neighbors.iter().all(|&(mre, mim)| {
                let (dre, dim) = (zre - mre, zim - mim);
                n0 < dre * dre + dim * dim
            }) {
                continue;
            }
            // 1/z and its coordinates over (1, omega).
            let (wre, wim) = (zre / n0, -zim / n0);
            let cv = wim / oim;
            let cu = wre - cv * ore;
            let (ca, cb) = (cu.round(), cv.round());
            let cand_norm = {
                let (re, im) = (ca + cb * ore, cb * oim);
                re * re + im * im
            };
            if cand_norm > max_norm_f + 3.0 {
                continue;
            }
            if found.contains(&(BigInt::from(ca as i64), BigInt::from(cb as i64))) {
                continue;
            }
            // Exact confirmation: the witness certifies whatever digit the
            // exact inverse actually rounds to.
            let z = QuadRat::from_i64(i, K, j, K);
            if !field.in_interior(&z) {
                continue;
            }
            let w = field.inv_rat(&z).expect("z != 0");
            let digit = field.nearest_lattice_point(&w);
            if field.norm_int(&digit) <= BigInt::from(max_norm) {
                found.insert((digit.a, digit.b));
            }
        }
    }
    let mut digits: Vec<QuadInt> = found
        .into_iter()
        .map(|(a, b)| QuadInt::new(a, b))
        .collect();
    digits.sort_by_key(|x| (field.norm_int(x), x.a.clone(), x.b.clone()));
    digits
}

fn to_f64_point(x: &QuadInt, ore: f64, oim: f64) -> (f64, f64) {
    let a = bigint_to_f64(&x.a);
    let b = bigint_to_f64(&x.b);
    (a + b * ore, b * oim)
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(a: i64, b: i64) -> QuadInt {
        QuadInt::from_i64(a, b)
    }

    /// (a + b*w)/(c + e*w) as an exact QuadRat.
    fn frac(field: Field, a: i64, b: i64, c: i64, e: i64) -> QuadRat {
        quadrat_from_pair(field, &qi(a, b), &qi(c, e)).unwrap()
    }

    #[test]
    fn field_construction() {
        assert!(Field::new(1).is_ok());
        assert!(Field::new(11).is_ok());
        assert!(Field::new(5).is_err());
        assert_eq!(Field::new(3).unwrap().d(), 3);
        assert!(Field::D3.is_hexagonal());
        assert!(!Field::D2.is_hexagonal());
    }

    #[test]
    fn norm_and_mul() {
        // d=1: N(3 - i) = 10, N(7) = 49.
        assert_eq!(Field::D1.norm_int(&qi(3, -1)), BigInt::from(10));
        assert_eq!(Field::D1.norm_int(&qi(7, 0)), BigInt::from(49));
        // d=3: N(u + v*omega) = u^2 + uv + v^2.
        assert_eq!(Field::D3.norm_int(&qi(2, 3)), BigInt::from(4 + 6 + 9));
        // omega * conj(omega) = N(omega).
        for f in Field::ALL {
            let om = qi(0, 1);
            let prod = f.mul_int(&om, &f.conj_int(&om));
            assert_eq!(prod.b, BigInt::zero());
            assert_eq!(prod.a, f.norm_int(&om));
        }
    }

    #[test]
    fn inverse_is_exact() {
        for f in Field::ALL {
            let z = frac(f, 3, -2, 7, 1);
            let w = f.inv_rat(&z).unwrap();
            let back = f.mul_rat(&z, &w);
            assert_eq!(back, QuadRat::from_i64(1, 1, 0, 1));
        }
        assert!(Field::D1.inv_rat(&QuadRat::zero()).is_err());
    }

    #[test]
    fn nearest_examples() {
        // d=1: 21/10 + (7/10) i -> 2 + i.
        let z = QuadRat::from_i64(21, 10, 7, 10);
        assert_eq!(Field::D1.nearest_lattice_point(&z), qi(2, 1));
        // 0 -> 0.
        assert_eq!(Field::D1.nearest_lattice_point(&QuadRat::zero()), qi(0, 0));
        // d=3: lattice point maps to itself.
        assert_eq!(
            Field::D3.nearest_lattice_point(&qi(0, 1).to_rat()),
            qi(0, 1)
        );
    }

    #[test]
    fn nearest_tie_break_lexicographic() {
        // d=1: (21/10, 1/2) is equidistant from 2 and 2+i; (2,0) < (2,1).
        let z = QuadRat::from_i64(21, 10, 1, 2);
        assert_eq!(Field::D1.nearest_lattice_point(&z), qi(2, 0));
        // Dead-center of the square cell: four-way tie, smallest pair wins.
        let z = QuadRat::from_i64(1, 2, 1, 2);
        assert_eq!(Field::D1.nearest_lattice_point(&z), qi(0, 0));
    }

    /// Exhaustive rounding consistency over a 5x5 block, on a deterministic
    /// sweep of rational points per field.
    #[test]
    fn rounding_consistency_5x5() {
        for f in Field::ALL {
            for i in -12..=12i64 {
                for j in -12..=12i64 {
                    let z = QuadRat::from_i64(3 * i + 1, 17, 2 * j - 3, 13);
                    let best = f.nearest_lattice_point(&z);
                    let dbest = f.norm_rat(&z.sub_int(&best));
                    let sa = round_half_up(&z.u);
                    let sb = round_half_up(&z.v);
                    for di in -2..=2i64 {
                        for dj in -2..=2i64 {
                            let mu = QuadInt::new(&sa + BigInt::from(di), &sb + BigInt::from(dj));
                            assert!(
                                dbest <= f.norm_rat(&z.sub_int(&mu)),
                                "field d={} z=({},{})",
                                f.d(),
                                z.u,
                                z.v
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_step_examples() {
        // d=1, z = (2-i)/5: 1/z = 2+i exactly.
        let z = frac(Field::D1, 2, -1, 5, 0);
        let (d, r) = complex_gauss_step(Field::D1, &z).unwrap();
        assert_eq!(d, qi(2, 1));
        assert!(r.is_zero());

        // d=1, z = (3-i)/7: digit 2+i, remainder (1-3i)/10.
        let z = frac(Field::D1, 3, -1, 7, 0);
        let (d, r) = complex_gauss_step(Field::D1, &z).unwrap();
        assert_eq!(d, qi(2, 1));
        assert_eq!(r, frac(Field::D1, 1, -3, 10, 0));
        assert!(Field::D1.in_closure(&r));

        // d=1, z = (1-3i)/10: 1/z = 1+3i exactly.
        let z = frac(Field::D1, 1, -3, 10, 0);
        let (d, r) = complex_gauss_step(Field::D1, &z).unwrap();
        assert_eq!(d, qi(1, 3));
        assert!(r.is_zero());
    }

    #[test]
    fn gauss_step_domain_errors() {
        assert!(complex_gauss_step(Field::D1, &QuadRat::zero()).is_err());
        // 3 + 0w is far outside I_1.
        assert!(complex_gauss_step(Field::D1, &qi(3, 0).to_rat()).is_err());
    }

    #[test]
    fn expand_examples() {
        let z = frac(Field::D1, 2, -1, 5, 0);
        let ds = cf_expand_complex(Field::D1, &z).unwrap();
        assert_eq!(ds, vec![qi(2, 1)]);

        let z = frac(Field::D1, 3, -1, 7, 0);
        let ds = cf_expand_complex(Field::D1, &z).unwrap();
        assert_eq!(reconstruct_complex(Field::D1, &ds).unwrap(), z);
        assert_eq!(ds, vec![qi(2, 1), qi(1, 3)]);

        assert!(cf_expand_complex(Field::D1, &QuadRat::zero())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn reconstruct_examples() {
        // [2+i] -> (2-i)/5.
        let z = reconstruct_complex(Field::D1, &[qi(2, 1)]).unwrap();
        assert_eq!(z, frac(Field::D1, 2, -1, 5, 0));
        // [2+i, 1+3i] -> (3-i)/7.
        let z = reconstruct_complex(Field::D1, &[qi(2, 1), qi(1, 3)]).unwrap();
        assert_eq!(z, frac(Field::D1, 3, -1, 7, 0));
        // [1+i] -> (1-i)/2, on the boundary of I_1.
        let z = reconstruct_complex(Field::D1, &[qi(1, 1)]).unwrap();
        assert_eq!(z, frac(Field::D1, 1, -1, 2, 0));
        assert!(Field::D1.in_closure(&z));
        // Empty input is the zero element.
        assert!(reconstruct_complex(Field::D1, &[]).unwrap().is_zero());
        // [i, i] over d=1 hits a zero denominator.
        assert!(matches!(
            reconstruct_complex(Field::D1, &[qi(0, 1), qi(0, 1)]),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn height_examples() {
        // 7 is inert in Z[i], so (3-i, 7) is already coprime.
        assert_eq!(
            height_squared(Field::D1, &frac(Field::D1, 3, -1, 7, 0)),
            BigInt::from(49)
        );
        // 5 = (2+i)(2-i) splits: the reduced form of (2-i)/5 is 1/(2+i),
        // so the height comes from the norm-5 denominator.
        assert_eq!(
            height_squared(Field::D1, &frac(Field::D1, 2, -1, 5, 0)),
            BigInt::from(5)
        );
        assert_eq!(height_squared(Field::D1, &QuadRat::zero()), BigInt::zero());
        // Height is computed on the *reduced* form: (2+2i)/10 = (1+i)/5.
        assert_eq!(
            height_squared(Field::D1, &frac(Field::D1, 2, 2, 10, 0)),
            BigInt::from(25)
        );
    }

    #[test]
    fn gcd_examples() {
        // gcd(2, 1+i) = 1+i up to units (2 = (1+i)(1-i) = -i (1+i)^2).
        let g = euclid_gcd(Field::D1, &qi(2, 0), &qi(1, 1));
        assert!(is_associate(Field::D1, &g, &qi(1, 1)));
        // gcd(a, 0) = a.
        assert_eq!(euclid_gcd(Field::D1, &qi(3, -2), &QuadInt::zero()), qi(3, -2));
        // gcd(3, 3) = 3 up to units.
        let g = euclid_gcd(Field::D3, &qi(3, 0), &qi(3, 0));
        assert!(is_associate(Field::D3, &g, &qi(3, 0)));
    }

    #[test]
    fn gcd_norm_decreases() {
        // Step through the algorithm manually and check the remainder norms.
        for f in Field::ALL {
            let mut x = qi(137, -41);
            let mut y = qi(25, 18);
            while !y.is_zero() {
                let q = f.nearest_lattice_point(&quadrat_div(f, &x, &y));
                let r = x.sub(&f.mul_int(&q, &y));
                assert!(f.norm_int(&r) < f.norm_int(&y), "d={}", f.d());
                x = y;
                y = r;
            }
        }
    }

    #[test]
    fn reduce_fraction_is_canonical() {
        // All unit-multiplied representations reduce to the same pair.
        for f in Field::ALL {
            let num = qi(6, -2);
            let den = qi(4, 2);
            let (a0, b0) = reduce_fraction(f, &num, &den).unwrap();
            for e in f.units() {
                let (a1, b1) =
                    reduce_fraction(f, &f.mul_int(&num, &e), &f.mul_int(&den, &e)).unwrap();
                assert_eq!((a1.clone(), b1.clone()), (a0.clone(), b0.clone()), "d={}", f.d());
            }
            // And the reduced pair is actually coprime.
            let g = euclid_gcd(f, &a0, &b0);
            assert_eq!(f.norm_int(&g), BigInt::one());
        }
    }

    /// Round trip + remainder domain closure over a deterministic family of
    /// field rationals in I_d, for all five fields.
    #[test]
    fn roundtrip_all_fields() {
        for f in Field::ALL {
            let mut lens = Vec::new();
            for i in 0..160i64 {
                let a = (i * 7
                    + 3) % 23 - 11;
                let b = (i * 5 + 2) % 19 - 9;
                let c = (i % 13) + 2;
                let e = (i * 3 + 1) % 7 - 3;
                let den = qi(c, e);
                if den.is_zero() {
                    continue;
                }
                let raw = quadrat_from_pair(f, &qi(a, b), &den).unwrap();
                // Translate into I_d; height is unchanged by integer shifts.
                let shift = f.nearest_lattice_point(&raw);
                let z = raw.sub_int(&shift);
                assert!(f.in_closure(&z));
                let ds = cf_expand_complex(f, &z).unwrap();
                lens.push(ds.len());
                assert_eq!(reconstruct_complex(f, &ds).unwrap(), z, "d={} i={}", f.d(), i);
                // Every remainder along the way stays in the closed domain.
                let mut cur = z.clone();
                while !cur.is_zero() {
                    let (_, rem) = complex_gauss_step(f, &cur).unwrap();
                    assert!(f.in_closure(&rem));
                    cur = rem;
                }
            }
            assert!(lens.iter().all(|&l| l < 64));
        }
    }

    #[test]
    fn attainable_digits_d1_norm8() {
        // Classical fact for the Gaussian field: the digits are exactly the
        // lattice points of norm >= 2.
        let digits = attainable_digits(Field::D1, 8);
        let mut expected = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let n = a * a + b * b;
                if n >= 2 && n <= 8 {
                    expected.push(qi(a, b));
                }
            }
        }
        expected.sort_by_key(|x| (Field::D1.norm_int(x), x.a.clone(), x.b.clone()));
        assert_eq!(digits, expected);
    }

    #[test]
    fn attainable_digits_exclude_units() {
        for f in Field::ALL {
            let digits = attainable_digits(f, 30);
            assert!(!digits.is_empty());
            for u in f.units() {
                assert!(!digits.contains(&u), "unit {u} attainable in d={}", f.d());
            }
            // Closed under unit multiplication (lattice symmetry).
            for x in &digits {
                for e in f.units() {
                    let y = f.mul_int(x, &e);
                    assert!(digits.contains(&y), "d={} digit {x} unit {e}", f.d());
                }
            }
        }
    }

    #[test]
    fn display_format() {
        assert_eq!(qi(2, 1).to_string(), "2+1w");
        assert_eq!(qi(1, 3).to_string(), "1+3w");
        assert_eq!(qi(2, -1).to_string(), "2-1w");
        assert_eq!(qi(-3, 0).to_string(), "-3");
        assert_eq!(qi(0, -2).to_string(), "-2w");
        assert_eq!(qi(0, 0).to_string(), "0");
    }
}
