//! Exact counting sequences for one word and the probability curves they
//! define.
//!
//! For a word `w` of length `k` over `q` symbols:
//!
//! - `a(n)` counts length-`n` strings that avoid `w`,
//! - `h(n) = q·a(n-1) - a(n)` counts strings whose only occurrence of `w` is
//!   the final `k` symbols,
//! - `H(n) = q·h(n-1) - h(n)` counts strings that begin and end with `w` and
//!   contain no other occurrence. `H(k) = -1` by this definition.
//!
//! `h` is generated by the autocorrelation recurrence
//! `h(n) = q h(n-1) - h(n-k) + Σ_{t=1}^{k-1} b_t H(n-k+t)` and `a` is derived
//! from `h`, so there is a single source of truth.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::word::{autocorrelation, Autocorrelation, Word};

/// `numerator / base^exp`, kept exact. Equality and ordering compare values,
/// so `2/4 == 1/2`.
#[derive(Clone, Debug)]
pub struct ExactProbability {
    numerator: BigInt,
    base: u32,
    exp: u32,
}

impl ExactProbability {
    pub fn new(numerator: BigInt, base: u32, exp: u32) -> Self {
        assert!(base >= 2, "base must be at least 2");
        ExactProbability {
            numerator,
            base,
            exp,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn denominator(&self) -> BigInt {
        Pow::pow(BigInt::from(self.base), self.exp)
    }

    pub fn is_probability(&self) -> bool {
        !self.numerator.is_negative() && self.numerator <= self.denominator()
    }

    /// Decimal rendering with `precision` fractional digits, rounded half to
    /// even, trailing zeros dropped.
    pub fn to_decimal(&self, precision: usize) -> String {
        let den = self.denominator();
        let scaled = self.numerator.abs() * Pow::pow(BigInt::from(10u32), precision);
        let (mut quotient, remainder) = scaled.div_rem(&den);
        let twice = remainder * 2u32;
        match twice.cmp(&den) {
            Ordering::Greater => quotient += 1u32,
            Ordering::Equal if quotient.is_odd() => quotient += 1u32,
            _ => {}
        }
        let digits = quotient.to_string();
        let (int_part, frac_part) = if digits.len() > precision {
            let split = digits.len() - precision;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            ("0".to_string(), format!("{digits:0>precision$}"))
        };
        let frac = frac_part.trim_end_matches('0');
        let negative = self.numerator.is_negative() && !quotient.is_zero();
        let sign = if negative { "-" } else { "" };
        if frac.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac}")
        }
    }

    /// Nearest `f64`, for plotting at the output boundary only. Values far
    /// below `f64::MIN_POSITIVE` come back as 0.
    pub fn to_f64(&self) -> f64 {
        if self.numerator.is_zero() {
            return 0.0;
        }
        let den = self.denominator();
        let (num_top, num_shift) = top_bits(&self.numerator);
        let (den_top, den_shift) = top_bits(&den);
        let ratio = num_top / den_top;
        let e = num_shift as i64 - den_shift as i64;
        ratio * 2f64.powi(e.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

// Splits |x| into (leading 60 bits as f64, shift).
fn top_bits(x: &BigInt) -> (f64, u64) {
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let top = if x.sign() == Sign::Minus { -top } else { top };
    (top, shift)
}

impl PartialEq for ExactProbability {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExactProbability {}

impl Ord for ExactProbability {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.base == other.base {
            // Bring both to the larger exponent with a single multiplication.
            let q = BigInt::from(self.base);
            return match self.exp.cmp(&other.exp) {
                Ordering::Equal => self.numerator.cmp(&other.numerator),
                Ordering::Less => {
                    (&self.numerator * Pow::pow(&q, other.exp - self.exp)).cmp(&other.numerator)
                }
                Ordering::Greater => self
                    .numerator
                    .cmp(&(&other.numerator * Pow::pow(&q, self.exp - other.exp))),
            };
        }
        (&self.numerator * other.denominator()).cmp(&(&other.numerator * self.denominator()))
    }
}

impl PartialOrd for ExactProbability {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExactProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator, self.base, self.exp)
    }
}

/// `a`, `h` and `H` for one word, indices `0..=horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    word: Word,
    autocorrelation: Autocorrelation,
    avoiding: Vec<BigInt>,
    first_hits: Vec<BigInt>,
    first_returns: Vec<BigInt>,
}

/// Fills `a`, `h`, `H` up to `horizon`, which must be at least `2k`.
pub fn compute_series(w: &Word, horizon: usize) -> Result<CountSeries> {
    let k = w.len();
    if horizon < 2 * k {
        return Err(Error::HorizonTooSmall {
            horizon,
            required: 2 * k,
        });
    }
    let q = BigInt::from(w.q());
    let cor = autocorrelation(w);
    let overlaps: Vec<usize> = cor.ones().filter(|&t| t < k).collect();

    let mut h = vec![BigInt::zero(); horizon + 1];
    let mut big_h = vec![BigInt::zero(); horizon + 1];
    h[k] = BigInt::one();
    big_h[k] = -BigInt::one();
    for n in k + 1..=horizon {
        let mut next = &q * &h[n - 1] - &h[n - k];
        for &t in &overlaps {
            next += &big_h[n - k + t];
        }
        big_h[n] = &q * &h[n - 1] - &next;
        h[n] = next;
    }

    let mut a = Vec::with_capacity(horizon + 1);
    let mut power = BigInt::one();
    for n in 0..=horizon {
        if n < k {
            a.push(power.clone());
            power *= &q;
        } else {
            let prev: &BigInt = &a[n - 1];
            let next = &q * prev - &h[n];
            a.push(next);
        }
    }

    Ok(CountSeries {
        word: w.clone(),
        autocorrelation: cor,
        avoiding: a,
        first_hits: h,
        first_returns: big_h,
    })
}

impl CountSeries {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn autocorrelation(&self) -> &Autocorrelation {
        &self.autocorrelation
    }

    pub fn k(&self) -> usize {
        self.word.len()
    }

    pub fn q(&self) -> u32 {
        self.word.q()
    }

    pub fn horizon(&self) -> usize {
        self.first_hits.len() - 1
    }

    /// `a(n)`.
    pub fn avoiding(&self, n: usize) -> &BigInt {
        &self.avoiding[n]
    }

    /// `h(n)`.
    pub fn first_hits(&self, n: usize) -> &BigInt {
        &self.first_hits[n]
    }

    /// `H(n)`.
    pub fn first_returns(&self, n: usize) -> &BigInt {
        &self.first_returns[n]
    }

    pub fn avoiding_counts(&self) -> &[BigInt] {
        &self.avoiding
    }

    pub fn first_hit_counts(&self) -> &[BigInt] {
        &self.first_hits
    }

    pub fn first_return_counts(&self) -> &[BigInt] {
        &self.first_returns
    }

    fn ratio(&self, numerator: &BigInt, n: usize) -> ExactProbability {
        ExactProbability::new(numerator.clone(), self.q(), n as u32)
    }

    /// First hitting probability by time `t ≥ 0`: `h(t+k) / q^(t+k)`.
    /// Summed over all `t` this is 1.
    pub fn hit_curve(&self) -> Curve {
        let k = self.k();
        Curve {
            kind: CurveKind::Hit,
            word: self.word.clone(),
            origin: 0,
            values: (k..=self.horizon())
                .map(|n| self.ratio(&self.first_hits[n], n))
                .collect(),
        }
    }

    /// Survival `a(n) / q^n` for `n = 0..=horizon`.
    pub fn survival_curve(&self) -> Curve {
        Curve {
            kind: CurveKind::Survival,
            word: self.word.clone(),
            origin: 0,
            values: (0..=self.horizon())
                .map(|n| self.ratio(&self.avoiding[n], n))
                .collect(),
        }
    }

    /// First return probability `H(n) / q^n` for `n > k`.
    pub fn return_curve(&self) -> Curve {
        let k = self.k();
        Curve {
            kind: CurveKind::Return,
            word: self.word.clone(),
            origin: k + 1,
            values: (k + 1..=self.horizon())
                .map(|n| self.ratio(&self.first_returns[n], n))
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Hit,
    Return,
    Survival,
}

/// A probability sequence indexed from `origin`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub kind: CurveKind,
    pub word: Word,
    pub origin: usize,
    pub values: Vec<ExactProbability>,
}

impl Curve {
    pub fn get(&self, index: usize) -> Option<&ExactProbability> {
        index
            .checked_sub(self.origin)
            .and_then(|i| self.values.get(i))
    }

    /// Last valid index, if the curve is non-empty.
    pub fn last_index(&self) -> Option<usize> {
        (!self.values.is_empty()).then(|| self.origin + self.values.len() - 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &ExactProbability)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, p)| (self.origin + i, p))
    }
}
