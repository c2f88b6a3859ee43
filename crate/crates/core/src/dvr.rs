//! Matrix groups over the truncated ring `R = k[π]/(π^{n+1})`, `k = F_p`.
//!
//! The kernel layer `1 + πⁿ M(r, R)` is abelian and its determinant is
//! `1 + πⁿ tr`. Two splittings drive the determinant correction of a lift:
//! the trace section `λ ↦ λ E₁₁` and the determinant section
//! `u ↦ diag(u, 1, …, 1)`. Reduction `R → k[π]/(πⁿ)` drops the top
//! coefficient.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;

/// `F_p[π]/(π^{n+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedRing {
    p: u64,
    n: usize,
}

impl TruncatedRing {
    pub fn new(field: Field, n: usize) -> Result<Self> {
        match field {
            Field::Prime(p) => Ok(TruncatedRing { p: p as u64, n }),
            Field::Rationals => Err(Error::NotPrimeField(field.to_string())),
        }
    }

    pub fn field(&self) -> Field {
        Field::Prime(self.p as u32)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Truncation order: `π^{n+1} = 0`.
    pub fn order(&self) -> usize {
        self.n
    }

    /// `k[π]/(πⁿ)`, the target of reduction. Fails for `n = 0`.
    pub fn reduced(&self) -> Result<Self> {
        if self.n == 0 {
            return Err(Error::TruncationOrder);
        }
        Ok(TruncatedRing {
            p: self.p,
            n: self.n - 1,
        })
    }

    /// `k[π]/(π^{n+2})`, the ring a lift lives in.
    pub fn lifted(&self) -> Self {
        TruncatedRing {
            p: self.p,
            n: self.n + 1,
        }
    }

    pub fn zero(&self) -> TruncatedScalar {
        TruncatedScalar {
            ring: *self,
            coeffs: vec![0; self.n + 1],
        }
    }

    pub fn one(&self) -> TruncatedScalar {
        self.constant(1)
    }

    pub fn constant(&self, c: i64) -> TruncatedScalar {
        let mut s = self.zero();
        s.coeffs[0] = self.reduce(c);
        s
    }

    /// `c·π^k`.
    pub fn monomial(&self, c: i64, k: usize) -> TruncatedScalar {
        let mut s = self.zero();
        if k <= self.n {
            s.coeffs[k] = self.reduce(c);
        }
        s
    }

    /// Coefficients `c_0, c_1, …`; missing high coefficients are zero.
    pub fn scalar(&self, coeffs: &[i64]) -> Result<TruncatedScalar> {
        if coeffs.len() > self.n + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for truncation order {}",
                coeffs.len(),
                self.n
            )));
        }
        let mut s = self.zero();
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = self.reduce(c);
        }
        Ok(s)
    }

    fn reduce(&self, c: i64) -> u64 {
        c.rem_euclid(self.p as i64) as u64
    }

    fn inv_mod(&self, a: u64) -> u64 {
        let mut base = a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for TruncatedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}[pi]/(pi^{})", self.p, self.n + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedScalar {
    ring: TruncatedRing,
    coeffs: Vec<u64>,
}

impl TruncatedScalar {
    pub fn ring(&self) -> TruncatedRing {
        self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }

    /// Index of the first nonzero coefficient; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Inverse of a unit, coefficient by coefficient.
    pub fn inverse(&self) -> Result<TruncatedScalar> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let ring = self.ring;
        let p = ring.p;
        let c0_inv = ring.inv_mod(self.coeffs[0]);
        let mut inv = vec![0u64; ring.n + 1];
        inv[0] = c0_inv;
        for k in 1..=ring.n {
            let mut acc = 0u64;
            for j in 1..=k {
                acc = (acc + self.coeffs[j] * inv[k - j]) % p;
            }
            inv[k] = (p - acc) % p * c0_inv % p;
        }
        Ok(TruncatedScalar { ring, coeffs: inv })
    }

    /// Divides out `π^k`, assuming the low `k` coefficients vanish; the top
    /// `k` coefficients of the result are set to zero.
    fn shift_down(&self, k: usize) -> TruncatedScalar {
        let mut out = self.ring.zero();
        for i in k..=self.ring.n {
            out.coeffs[i - k] = self.coeffs[i];
        }
        out
    }

    /// Image in `k[π]/(πⁿ)`.
    pub fn reduce(&self) -> Result<TruncatedScalar> {
        let ring = self.ring.reduced()?;
        Ok(TruncatedScalar {
            ring,
            coeffs: self.coeffs[..=ring.n].to_vec(),
        })
    }

    /// Lift to `k[π]/(π^{n+2})` with zero top coefficient.
    pub fn lift(&self) -> TruncatedScalar {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(0);
        TruncatedScalar {
            ring: self.ring.lifted(),
            coeffs,
        }
    }

    fn same_ring(&self, other: &TruncatedScalar) {
        assert_eq!(
            self.ring, other.ring,
            "scalars from different truncated rings"
        );
    }
}

impl Add for &TruncatedScalar {
    type Output = TruncatedScalar;

    fn add(self, rhs: &TruncatedScalar) -> TruncatedScalar {
        self.same_ring(rhs);
        let p = self.ring.p;
        TruncatedScalar {
            ring: self.ring,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }
}

impl Neg for &TruncatedScalar {
    type Output = TruncatedScalar;

    fn neg(self) -> TruncatedScalar {
        let p = self.ring.p;
        TruncatedScalar {
            ring: self.ring,
            coeffs: self.coeffs.iter().map(|a| (p - a) % p).collect(),
        }
    }
}

impl Sub for &TruncatedScalar {
    type Output = TruncatedScalar;

    fn sub(self, rhs: &TruncatedScalar) -> TruncatedScalar {
        self + &(-rhs)
    }
}

impl Mul for &TruncatedScalar {
    type Output = TruncatedScalar;

    fn mul(self, rhs: &TruncatedScalar) -> TruncatedScalar {
        self.same_ring(rhs);
        let ring = self.ring;
        let mut out = ring.zero();
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..=ring.n - i].iter().enumerate() {
                out.coeffs[i + j] = (out.coeffs[i + j] + a * b) % ring.p;
            }
        }
        out
    }
}

impl Serialize for TruncatedScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// Square matrix over a truncated ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedMatrix {
    ring: TruncatedRing,
    entries: Vec<Vec<TruncatedScalar>>,
}

impl TruncatedMatrix {
    pub fn new(ring: TruncatedRing, entries: Vec<Vec<TruncatedScalar>>) -> Result<Self> {
        let r = entries.len();
        if r == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if entries.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("matrix is not square".into()));
        }
        if entries.iter().flatten().any(|x| x.ring != ring) {
            return Err(Error::DimensionMismatch("entries from another ring".into()));
        }
        Ok(TruncatedMatrix { ring, entries })
    }

    /// Entries given as coefficient vectors.
    pub fn from_coeffs(ring: TruncatedRing, rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|c| ring.scalar(c)).collect())
            .collect::<Result<_>>()?;
        Self::new(ring, entries)
    }

    /// A matrix over `k` viewed as constants.
    pub fn constant(ring: TruncatedRing, rows: &[Vec<i64>]) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|row| row.iter().map(|&c| ring.constant(c)).collect())
            .collect();
        Self::new(ring, entries)
    }

    pub fn identity(ring: TruncatedRing, r: usize) -> Self {
        Self::diagonal(ring, &vec![ring.one(); r])
    }

    pub fn diagonal(ring: TruncatedRing, diag: &[TruncatedScalar]) -> Self {
        let r = diag.len();
        let entries = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { diag[i].clone() } else { ring.zero() })
                    .collect()
            })
            .collect();
        TruncatedMatrix { ring, entries }
    }

    pub fn ring(&self) -> TruncatedRing {
        self.ring
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncatedScalar {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<TruncatedScalar>] {
        &self.entries
    }

    pub fn scale(&self, c: &TruncatedScalar) -> Self {
        self.map(|x| c * x)
    }

    fn map(&self, f: impl Fn(&TruncatedScalar) -> TruncatedScalar) -> Self {
        TruncatedMatrix {
            ring: self.ring,
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&TruncatedScalar, &TruncatedScalar) -> TruncatedScalar,
    ) -> Self {
        assert_eq!(self.size(), other.size(), "matrix sizes differ");
        TruncatedMatrix {
            ring: self.ring,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x - y)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size(), other.size(), "matrix sizes differ");
        let r = self.size();
        let entries = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        (0..r).fold(self.ring.zero(), |acc, k| {
                            &acc + &(&self.entries[i][k] * &other.entries[k][j])
                        })
                    })
                    .collect()
            })
            .collect();
        TruncatedMatrix {
            ring: self.ring,
            entries,
        }
    }

    pub fn trace(&self) -> TruncatedScalar {
        (0..self.size()).fold(self.ring.zero(), |acc, i| &acc + &self.entries[i][i])
    }

    /// Determinant by elimination with a pivot of least π-adic valuation.
    ///
    /// Every entry below the pivot is divisible by the pivot's `π^v`, and any
    /// ambiguity in the quotient is killed by `π^v`, so the row operations
    /// are exact.
    pub fn det(&self) -> TruncatedScalar {
        let ring = self.ring;
        let r = self.size();
        let mut m = self.entries.clone();
        let mut det = ring.one();
        let mut negate = false;
        for k in 0..r {
            let pivot = (k..r)
                .flat_map(|i| (k..r).map(move |j| (i, j)))
                .filter_map(|(i, j)| m[i][j].valuation().map(|v| (v, i, j)))
                .min();
            let Some((v, pi, pj)) = pivot else {
                return ring.zero();
            };
            if pi != k {
                m.swap(pi, k);
                negate = !negate;
            }
            if pj != k {
                for row in m.iter_mut() {
                    row.swap(pj, k);
                }
                negate = !negate;
            }
            let unit_inv = m[k][k]
                .shift_down(v)
                .inverse()
                .expect("shifted pivot is a unit");
            for i in k + 1..r {
                if m[i][k].is_zero() {
                    continue;
                }
                let factor = &m[i][k].shift_down(v) * &unit_inv;
                for j in k..r {
                    let delta = &factor * &m[k][j];
                    m[i][j] = &m[i][j] - &delta;
                }
                debug_assert!(m[i][k].is_zero());
            }
            det = &det * &m[k][k];
        }
        if negate {
            -&det
        } else {
            det
        }
    }

    /// Invertible iff the reduction mod π is invertible over `k`.
    pub fn is_invertible(&self) -> bool {
        self.det().is_unit()
    }

    /// Image over `k[π]/(πⁿ)`.
    pub fn reduce(&self) -> Result<Self> {
        let ring = self.ring.reduced()?;
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(TruncatedScalar::reduce).collect())
            .collect::<Result<_>>()?;
        Ok(TruncatedMatrix { ring, entries })
    }

    /// Entrywise lift with zero top coefficients.
    pub fn lift(&self) -> Self {
        TruncatedMatrix {
            ring: self.ring.lifted(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(TruncatedScalar::lift).collect())
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == TruncatedMatrix::identity(self.ring, self.size())
    }

    /// Coefficient matrix of `π^k` as integers mod `p`.
    pub fn layer(&self, k: usize) -> Vec<Vec<u64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| x.coeff(k)).collect())
            .collect()
    }
}

impl Serialize for TruncatedMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

/// `I + πⁿ A` for a matrix `A` over `k`.
pub fn kernel_layer_element(ring: TruncatedRing, a: &[Vec<i64>]) -> Result<TruncatedMatrix> {
    let n = ring.order();
    let entries = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &c)| {
                    let term = ring.monomial(c, n);
                    if i == j {
                        &ring.one() + &term
                    } else {
                        term
                    }
                })
                .collect()
        })
        .collect();
    TruncatedMatrix::new(ring, entries)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetTraceReport {
    pub ring: String,
    /// `det(I + πⁿA)`.
    pub det: TruncatedScalar,
    /// `1 + πⁿ tr(A)`.
    pub one_plus_trace: TruncatedScalar,
    pub holds: bool,
}

/// Evaluates both sides of `det(I + πⁿA) = 1 + πⁿ tr(A)` in
/// `k[π]/(π^{n+1})`, `n ≥ 1`.
pub fn det_trace_identity(field: Field, a: &[Vec<i64>], n: usize) -> Result<DetTraceReport> {
    if n == 0 {
        return Err(Error::TruncationOrder);
    }
    let ring = TruncatedRing::new(field, n)?;
    let m = kernel_layer_element(ring, a)?;
    let trace: i64 = (0..a.len()).map(|i| a[i][i]).sum();
    let det = m.det();
    let one_plus_trace = &ring.one() + &ring.monomial(trace, n);
    Ok(DetTraceReport {
        ring: ring.to_string(),
        holds: det == one_plus_trace,
        det,
        one_plus_trace,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlKernelVerdict {
    pub det_is_one: bool,
    /// Image in `SL(r, k[π]/(πⁿ))` is the identity.
    pub reduces_to_identity: bool,
    /// `M = I + πⁿB` with `tr B ≡ 0 mod π`.
    pub trace_condition: bool,
    pub in_kernel: bool,
    /// `(det = 1 ∧ reduces to I) ⇔ trace condition`.
    pub agrees: bool,
}

/// Tests membership of `M` in the kernel of `SL(r, R) → SL(r, R/πⁿ)` two ways.
pub fn sl_kernel_check(m: &TruncatedMatrix) -> Result<SlKernelVerdict> {
    let n = m.ring().order();
    let det_is_one = m.det().is_one();
    let reduces_to_identity = m.reduce()?.is_identity();
    let trace_condition = reduces_to_identity && {
        let top = m.layer(n);
        (0..m.size()).map(|i| top[i][i]).sum::<u64>() % m.ring().characteristic() == 0
    };
    let in_kernel = det_is_one && reduces_to_identity;
    Ok(SlKernelVerdict {
        det_is_one,
        reduces_to_identity,
        trace_condition,
        in_kernel,
        agrees: in_kernel == trace_condition,
    })
}

/// Splitting of the trace: `λ ↦ λ E₁₁`.
pub fn trace_section(lambda: &TruncatedScalar, r: usize) -> Result<TruncatedMatrix> {
    if r == 0 {
        return Err(Error::DimensionMismatch("size 0".into()));
    }
    let ring = lambda.ring();
    let mut diag = vec![ring.zero(); r];
    diag[0] = lambda.clone();
    Ok(TruncatedMatrix::diagonal(ring, &diag))
}

/// Splitting of the determinant: `u ↦ diag(u, 1, …, 1)`.
pub fn det_section(u: &TruncatedScalar, r: usize) -> Result<TruncatedMatrix> {
    if !u.is_unit() {
        return Err(Error::NotUnit);
    }
    if r == 0 {
        return Err(Error::DimensionMismatch("size 0".into()));
    }
    let ring = u.ring();
    let mut diag = vec![ring.one(); r];
    diag[0] = u.clone();
    Ok(TruncatedMatrix::diagonal(ring, &diag))
}

/// Writes `γ = 1 + πⁿλ`, returning `λ` (only its constant term matters).
pub fn kernel_layer_coordinate(gamma: &TruncatedScalar) -> Result<TruncatedScalar> {
    let ring = gamma.ring();
    let n = ring.order();
    let diff = gamma - &ring.one();
    if diff.coeffs()[..n].iter().any(|&c| c != 0) {
        return Err(Error::NotInKernelLayer(n));
    }
    Ok(ring.constant(diff.coeff(n) as i64))
}

/// Lifts `γ ∈ 1 + πⁿR` to `Γ = I + πⁿ φ(λ)` in the kernel layer of `GL(r, R)`.
pub fn kernel_layer_lift(gamma: &TruncatedScalar, r: usize) -> Result<TruncatedMatrix> {
    let ring = gamma.ring();
    let lambda = kernel_layer_coordinate(gamma)?;
    let shifted = &lambda * &ring.monomial(1, ring.order());
    Ok(TruncatedMatrix::identity(ring, r).add(&trace_section(&shifted, r)?))
}

/// Multiplies each cochain entry `F_j` by the kernel-layer lift of `γ_j`, so
/// that `det(Γ_j F_j) = γ_j det(F_j)`.
pub fn torsor_correct(
    cocycle: &[TruncatedMatrix],
    gammas: &[TruncatedScalar],
) -> Result<Vec<TruncatedMatrix>> {
    if cocycle.len() != gammas.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} matrices but {} scalars",
            cocycle.len(),
            gammas.len()
        )));
    }
    cocycle
        .iter()
        .zip(gammas)
        .map(|(f, gamma)| {
            if f.ring() != gamma.ring() {
                return Err(Error::DimensionMismatch(
                    "matrix and scalar rings differ".into(),
                ));
            }
            if !f.is_invertible() {
                return Err(Error::NotInvertible);
            }
            let corrected = kernel_layer_lift(gamma, f.size())?.mul(f);
            assert_eq!(
                corrected.det(),
                gamma * &f.det(),
                "determinant is compatible with the torsor action"
            );
            Ok(corrected)
        })
        .collect()
}

/// Lifts `M ∈ SL(r, R)` to `SL(r, R')` over the next truncation: lift the
/// entries, then rescale the first column by the inverse determinant through
/// the determinant section.
pub fn lift_special_linear(m: &TruncatedMatrix) -> Result<TruncatedMatrix> {
    if !m.det().is_one() {
        return Err(Error::NotSpecialLinear);
    }
    let naive = m.lift();
    let correction = det_section(&naive.det().inverse()?, m.size())?;
    Ok(naive.mul(&correction))
}
