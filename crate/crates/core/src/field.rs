//! Prime fields and the rationals, with small dense linear algebra.
//!
//! Elements of either field are carried as [`Rational`]; for `F_p` they are
//! integers in `0..p`. The [`Field`] value supplies the arithmetic.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

pub type Elem = Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Field {
    /// `F_p` for a prime `p`.
    Prime(u32),
    Rationals,
}

impl Field {
    pub fn prime(p: u32) -> Result<Self> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::InvalidField(format!("F{p}")))
        }
    }

    /// Characteristic; zero for the rationals.
    pub fn characteristic(&self) -> u32 {
        match *self {
            Field::Prime(p) => p,
            Field::Rationals => 0,
        }
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match *self {
            Field::Prime(p) => int(n.rem_euclid(p as i64)),
            Field::Rationals => int(n),
        }
    }

    /// Maps a rational into the field; fails in `F_p` when `p` divides the
    /// denominator.
    pub fn from_rational(&self, q: Rational) -> Result<Elem> {
        match *self {
            Field::Prime(_) => {
                let den = self.from_i64(*q.denom());
                if den.is_zero() {
                    return Err(Error::InvalidElement(
                        rational::format(&q),
                        self.to_string(),
                    ));
                }
                Ok(self.mul(&self.from_i64(*q.numer()), &self.inv(&den)?))
            }
            Field::Rationals => Ok(q),
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        self.from_rational(rational::parse(s)?)
    }

    pub fn zero(&self) -> Elem {
        Elem::zero()
    }

    pub fn one(&self) -> Elem {
        Elem::one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(a - b)
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.reduce(-a)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match *self {
            Field::Prime(p) => {
                let prod = (a.to_integer() as u64) * (b.to_integer() as u64) % p as u64;
                int(prod as i64)
            }
            Field::Rationals => a * b,
        }
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroScalar);
        }
        Ok(match *self {
            Field::Prime(p) => self.pow(a, p as u64 - 2),
            Field::Rationals => a.recip(),
        })
    }

    fn reduce(&self, a: Elem) -> Elem {
        match *self {
            Field::Prime(p) => int(a.to_integer().rem_euclid(p as i64)),
            Field::Rationals => a,
        }
    }

    /// Every element of `F_p`, or `None` for the rationals.
    pub fn elements(&self) -> Option<impl Iterator<Item = Elem>> {
        match *self {
            Field::Prime(p) => Some((0..p as i64).map(int)),
            Field::Rationals => None,
        }
    }

    pub fn format_elem(&self, a: &Elem) -> String {
        rational::format(a)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<Elem>]) -> usize {
        let mut m: Vec<Vec<Elem>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = self.inv(&m[rank][col]).expect("pivot is nonzero");
            for row in rank + 1..m.len() {
                if m[row][col].is_zero() {
                    continue;
                }
                let factor = self.mul(&m[row][col], &inv);
                for c in col..cols {
                    let delta = self.mul(&factor, &m[rank][c]);
                    m[row][c] = self.sub(&m[row][c], &delta);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant of a square matrix by elimination.
    pub fn det(&self, rows: &[Vec<Elem>]) -> Result<Elem> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let mut m = rows.to_vec();
        let mut det = self.one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(self.zero());
            };
            if pivot != col {
                m.swap(col, pivot);
                det = self.neg(&det);
            }
            det = self.mul(&det, &m[col][col]);
            let inv = self.inv(&m[col][col])?;
            for row in col + 1..n {
                let factor = self.mul(&m[row][col], &inv);
                for c in col..n {
                    let delta = self.mul(&factor, &m[col][c]);
                    m[row][c] = self.sub(&m[row][c], &delta);
                }
            }
        }
        Ok(det)
    }

    /// All `b ≠ 0` with `b^r = a`, ascending. Exhaustive over `F_p^×`; over
    /// the rationals, the real roots of `a` when numerator and denominator
    /// are perfect `r`-th powers.
    pub fn roots(&self, a: &Elem, r: u32) -> Vec<Elem> {
        match self.elements() {
            Some(elems) => elems
                .filter(|b| !b.is_zero() && self.pow(b, r as u64) == *a)
                .collect(),
            None => rational_roots(a, r),
        }
    }
}

fn rational_roots(a: &Rational, r: u32) -> Vec<Rational> {
    if a.is_zero() || r == 0 {
        return Vec::new();
    }
    let (Some(num), Some(den)) = (
        integer_root(a.numer().abs(), r),
        integer_root(*a.denom(), r),
    ) else {
        return Vec::new();
    };
    let root = Rational::new(num, den);
    match (a.is_negative(), r.is_multiple_of(2)) {
        (true, true) => Vec::new(),
        (true, false) => vec![-root],
        (false, true) => vec![-root, root],
        (false, false) => vec![root],
    }
}

/// Exact `r`-th root of a nonnegative integer, if any.
fn integer_root(n: i64, r: u32) -> Option<i64> {
    if n < 2 || r == 1 {
        return Some(n);
    }
    let guess = (n as f64).powf(1.0 / r as f64).round() as i64;
    (guess.saturating_sub(1)..=guess + 1).find(|&b| b >= 0 && b.checked_pow(r) == Some(n))
}

fn is_prime(p: u32) -> bool {
    let p = p as u64;
    p >= 2
        && (2..)
            .take_while(|d: &u64| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "F{p}"),
            Field::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::Rationals);
        }
        t.strip_prefix('F')
            .and_then(|p| p.parse::<u32>().ok())
            .filter(|&p| p < 1 << 31)
            .ok_or_else(|| Error::InvalidField(s.to_string()))
            .and_then(Field::prime)
            .map_err(|_| Error::InvalidField(s.to_string()))
    }
}

impl TryFrom<String> for Field {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Field> for String {
    fn from(f: Field) -> Self {
        f.to_string()
    }
}
