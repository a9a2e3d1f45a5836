//! Exact continued fraction expansion and reconstruction for rationals in
//! (0,1) under the Gauss map, together with continuant algebra for the
//! inverse branches h_a(x) = 1/(x+a).
//!
//! All arithmetic here is exact arbitrary precision; nothing in this module
//! touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// One application of the Gauss map T(x) = 1/x - floor(1/x) on a rational
/// x in (0, 1]. Returns the digit floor(1/x) and the exact remainder.
pub fn gauss_step(x: &BigRational) -> Result<(BigInt, BigRational)> {
    if !x.is_positive() || x > &BigRational::one() {
        return Err(Error::OutOfDomain(format!("gauss_step({x})")));
    }
    // x = p/q with 0 < p <= q, so 1/x = q/p and the digit is floor(q/p).
    let (digit, rem) = x.denom().div_rem(x.numer());
    let remainder = BigRational::new(rem, x.numer().clone());
    Ok((digit, remainder))
}

/// Canonical continued fraction expansion of a rational x in (0, 1).
///
/// The returned digits are all >= 1 and the last digit is >= 2, which is the
/// unique terminating form. The zero rational is not expandable here; callers
/// that want `0 -> []` handle it themselves.
pub fn cf_expand(x: &BigRational) -> Result<Vec<BigInt>> {
    if !x.is_positive() || x >= &BigRational::one() {
        return Err(Error::OutOfDomain(format!("cf_expand({x})")));
    }
    let mut digits = Vec::new();
    let mut cur = x.clone();
    while !cur.is_zero() {
        let (digit, rem) = gauss_step(&cur)?;
        digits.push(digit);
        cur = rem;
    }
    Ok(digits)
}

/// Evaluates a finite continued fraction [0; d_1, ..., d_l] bottom-up in
/// exact arithmetic. Digits need not be canonical, but must all be >= 1.
pub fn reconstruct(digits: &[BigInt]) -> Result<BigRational> {
    if digits.is_empty() {
        return Err(Error::EmptyDigits);
    }
    let mut acc = BigRational::zero();
    for d in digits.iter().rev() {
        if !d.is_positive() {
            return Err(Error::InvalidDigit(d.to_string()));
        }
        // acc <- 1 / (d + acc); d + acc > 0 always holds here.
        acc = (BigRational::from(d.clone()) + acc).recip();
    }
    Ok(acc)
}

/// Convergent numerators and denominators tracked under digit application.
///
/// The identity pair corresponds to the empty digit string; pushing digits
/// a_1, ..., a_k yields p_k/q_k = [0; a_1, ..., a_k] with the usual
/// recursion q_k = a_k q_{k-1} + q_{k-2}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Continuants {
    pub p_prev: BigInt,
    pub p_cur: BigInt,
    pub q_prev: BigInt,
    pub q_cur: BigInt,
}

impl Continuants {
    pub fn identity() -> Self {
        Continuants {
            p_prev: BigInt::one(),
            p_cur: BigInt::zero(),
            q_prev: BigInt::zero(),
            q_cur: BigInt::one(),
        }
    }

    /// Applies one digit, i.e. composes with the inverse branch h_a.
    pub fn apply_digit(&self, a: &BigInt) -> Self {
        Continuants {
            p_prev: self.p_cur.clone(),
            p_cur: a * &self.p_cur + &self.p_prev,
            q_prev: self.q_cur.clone(),
            q_cur: a * &self.q_cur + &self.q_prev,
        }
    }

    pub fn apply_digits(&self, digits: &[BigInt]) -> Self {
        digits.iter().fold(self.clone(), |c, a| c.apply_digit(a))
    }

    /// p_cur * q_prev - p_prev * q_cur; stays +-1 under digit application.
    pub fn determinant(&self) -> BigInt {
        &self.p_cur * &self.q_prev - &self.p_prev * &self.q_cur
    }

    /// The convergent p_k/q_k as an exact rational.
    pub fn value(&self) -> Result<BigRational> {
        if self.q_cur.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(BigRational::new(self.p_cur.clone(), self.q_cur.clone()))
    }
}

/// |h'(0)| for the composite inverse branch h = h_{a_1} o ... o h_{a_l},
/// returned exactly as 1/q_l^2.
pub fn branch_derivative_at_zero(digits: &[BigInt]) -> Result<BigRational> {
    if digits.is_empty() {
        return Err(Error::EmptyDigits);
    }
    let c = Continuants::identity().apply_digits(digits);
    Ok(BigRational::new(BigInt::one(), &c.q_cur * &c.q_cur))
}

/// Continued fraction digits of a/n via the integer Euclidean chain.
/// Requires 0 < a < n and gcd(a, n) = 1; same output as `cf_expand(a/n)`.
pub(crate) fn expand_u64(a: u64, n: u64) -> Vec<u64> {
    debug_assert!(0 < a && a < n);
    let mut digits = Vec::new();
    let (mut num, mut den) = (a, n);
    while num != 0 {
        digits.push(den / num);
        let r = den % num;
        den = num;
        num = r;
    }
    digits
}

/// Whether some a coprime to n has a/n in E_A, i.e. Sigma_{n,A} != empty.
///
/// Runs the pruned depth-first search over digit strings with digits <= `a_bound`
/// and stops at the first string whose final continuant denominator equals `n`.
pub fn is_zaremba_denominator(n: u64, a_bound: u64) -> bool {
    if n < 2 || a_bound < 2 {
        return false;
    }
    fn dfs(a_bound: u64, target: u64, q_prev: u64, q_cur: u64, last: u64) -> bool {
        if last >= 2 && q_cur == target {
            return true;
        }
        for a in 1..=a_bound {
            let Some(q_new) = a.checked_mul(q_cur).and_then(|x| x.checked_add(q_prev)) else {
                break;
            };
            if q_new > target {
                break;
            }
            if dfs(a_bound, target, q_cur, q_new, a) {
                return true;
            }
        }
        false
    }
    dfs(a_bound, n, 0, 1, 0)
}
