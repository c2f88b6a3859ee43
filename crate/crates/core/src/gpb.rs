//! Generalized parabolic bundle numerics and explicit node gluing data.
//!
//! A bundle `E` of rank `r` and degree `d` on the normalization `Ỹ` of an
//! irreducible nodal curve carries, over each node divisor `D = p + q`, a
//! flag `E(p) ⊕ E(q) ⊃ F₁ ⊃ 0` with weights `(0, 1)`. The descended sheaf
//! `φ(E)` on `Y` is locally free when both projections `F₁ → E(p)` and
//! `F₁ → E(q)` are isomorphisms.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::rational::{self, int, Rational};
use crate::stability::Relation;

/// Quotient dimensions `(m₁, m₂)` of one node flag: `m₁ = dim E|_D / F₁`,
/// `m₂ = dim F₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagDims {
    pub m1: u32,
    pub m2: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpbClass {
    pub rank: u32,
    /// Degree on the normalization.
    pub degree: i64,
    /// One entry per node divisor.
    pub nodes: Vec<FlagDims>,
}

impl GpbClass {
    /// Canonical structure: `F₁` spanned by `e_j ⊕ f_j` at each of `nodes`
    /// nodes, so `(m₁, m₂) = (r, r)`.
    pub fn canonical(rank: u32, degree: i64, nodes: usize) -> Result<Self> {
        let g = GpbClass {
            rank,
            degree,
            nodes: vec![FlagDims { m1: rank, m2: rank }; nodes],
        };
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<()> {
        if self.rank == 0 {
            return Err(Error::ZeroRank);
        }
        for dims in &self.nodes {
            if dims.m1 + dims.m2 != 2 * self.rank {
                return Err(Error::FlagDimensions {
                    m1: dims.m1,
                    m2: dims.m2,
                    rank: self.rank,
                });
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `wt = Σ (0·m₁ + 1·m₂)`.
    pub fn weight(&self) -> i64 {
        self.nodes.iter().map(|n| n.m2 as i64).sum()
    }

    pub fn parabolic_degree(&self) -> i64 {
        self.degree + self.weight()
    }
}

/// `(deg + wt) / rank`.
pub fn parabolic_slope(g: &GpbClass) -> Result<Rational> {
    g.check()?;
    Ok(Rational::new(g.parabolic_degree(), g.rank as i64))
}

/// Numerics of a subbundle `K ⊂ E` with its induced flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubbundleNumerics {
    pub rank: u32,
    pub degree: i64,
    /// `dim F₁(K)` at each node.
    pub flag_dims: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubbundleVerdict {
    #[serde(with = "rational")]
    pub sub_slope: Rational,
    #[serde(with = "rational")]
    pub ambient_slope: Rational,
    /// `(d' + γ r') / r'`, the slope `K` would have with full flags.
    #[serde(with = "rational")]
    pub full_flag_bound: Rational,
    pub relation: Relation,
    /// `par μ(K) ≤ par μ(E)`.
    pub bounded: bool,
    /// When `d'/r' ≤ d/r`: whether `par μ(K) ≤ bound ≤ par μ(E)` holds.
    pub chain: Option<bool>,
}

/// Compares the parabolic slope of a subbundle with that of `g`.
pub fn gpb_subbundle_check(g: &GpbClass, sub: &SubbundleNumerics) -> Result<SubbundleVerdict> {
    g.check()?;
    if sub.rank == 0 || sub.rank >= g.rank {
        return Err(Error::RankBound {
            sub: sub.rank,
            rank: g.rank,
        });
    }
    if sub.flag_dims.len() != g.node_count() {
        return Err(Error::NodeCountMismatch {
            expected: g.node_count(),
            got: sub.flag_dims.len(),
        });
    }
    if let Some((node, &dim)) = sub
        .flag_dims
        .iter()
        .enumerate()
        .find(|(_, &dim)| dim > sub.rank)
    {
        return Err(Error::DimensionBound {
            node,
            dim,
            rank: sub.rank,
        });
    }

    let r_sub = sub.rank as i64;
    let flag_total: i64 = sub.flag_dims.iter().map(|&m| m as i64).sum();
    let sub_slope = Rational::new(sub.degree + flag_total, r_sub);
    let ambient_slope = parabolic_slope(g)?;
    let full_flag_bound = Rational::new(sub.degree + g.node_count() as i64 * r_sub, r_sub);
    let relation = Relation::from(sub_slope.cmp(&ambient_slope));
    let semistable_input =
        Rational::new(sub.degree, r_sub) <= Rational::new(g.degree, g.rank as i64);
    Ok(SubbundleVerdict {
        sub_slope,
        ambient_slope,
        full_flag_bound,
        relation,
        bounded: relation != Relation::Greater,
        chain: semistable_input
            .then(|| sub_slope <= full_flag_bound && full_flag_bound <= ambient_slope),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiNumerics {
    pub rank: u32,
    /// `χ(E)` on the normalization.
    pub chi_normalization: i64,
    /// `χ(φ(E)) = χ(E) - Σ dim F₁`.
    pub chi: i64,
    /// Arithmetic genus `g̃ + γ` of the nodal curve.
    pub arithmetic_genus: i64,
    /// `χ(φ(E)) + r(ρ_a - 1)`.
    pub degree: i64,
    /// Whether the degree matches the degree on the normalization.
    pub degree_preserved: bool,
}

/// Rank and degree of `φ(E)` from the two Riemann–Roch evaluations on `Ỹ`
/// and on `Y`.
pub fn phi_rank_degree(g: &GpbClass, normalization_genus: u32) -> Result<PhiNumerics> {
    g.check()?;
    let r = g.rank as i64;
    let genus = normalization_genus as i64;
    let chi_normalization = g.degree + r * (1 - genus);
    let chi = chi_normalization - g.weight();
    let arithmetic_genus = genus + g.node_count() as i64;
    let degree = chi + r * (arithmetic_genus - 1);
    Ok(PhiNumerics {
        rank: g.rank,
        chi_normalization,
        chi,
        arithmetic_genus,
        degree,
        degree_preserved: degree == g.degree,
    })
}

/// `F₁ ⊂ E(p) ⊕ E(q)` as the row span of an `r × 2r` matrix in the bases
/// `{e_j}` (left block) and `{f_j}` (right block).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FlagDocument", into = "FlagDocument")]
pub struct GluingFlag {
    field: Field,
    rank: usize,
    rows: Vec<Vec<Elem>>,
}

/// Wire form: `{"field":"F7","rows":[["1","0","0","1"],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagDocument {
    pub field: Field,
    pub rows: Vec<Vec<String>>,
}

impl GluingFlag {
    pub fn new(field: Field, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        if rows.iter().any(|row| row.len() != 2 * rank) {
            return Err(Error::DimensionMismatch(format!(
                "flag rows must have length {}",
                2 * rank
            )));
        }
        let rows: Vec<Vec<Elem>> = rows
            .into_iter()
            .map(|row| row.into_iter().map(|x| field.from_rational(x)).collect())
            .collect::<Result<_>>()?;
        let found = field.rank(&rows);
        if found != rank {
            return Err(Error::RankDeficient {
                rank: found,
                expected: rank,
            });
        }
        Ok(GluingFlag { field, rank, rows })
    }

    /// Integer rows, reduced into `field`.
    pub fn from_ints(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            field,
            rows.iter()
                .map(|row| row.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    /// The diagonal flag spanned by `e_j ⊕ f_j`.
    pub fn canonical(field: Field, rank: usize) -> Result<Self> {
        let rows = (0..rank)
            .map(|j| {
                (0..2 * rank)
                    .map(|c| if c == j || c == rank + j { 1 } else { 0 })
                    .collect()
            })
            .collect::<Vec<Vec<i64>>>();
        Self::from_ints(field, &rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    /// Restriction of `pr₁` to the spanning rows (left `r` columns).
    pub fn first_block(&self) -> Vec<Vec<Elem>> {
        self.rows
            .iter()
            .map(|row| row[..self.rank].to_vec())
            .collect()
    }

    /// Restriction of `pr₂` to the spanning rows (right `r` columns).
    pub fn second_block(&self) -> Vec<Vec<Elem>> {
        self.rows
            .iter()
            .map(|row| row[self.rank..].to_vec())
            .collect()
    }
}

impl TryFrom<FlagDocument> for GluingFlag {
    type Error = Error;

    fn try_from(doc: FlagDocument) -> Result<Self> {
        let rows = doc
            .rows
            .iter()
            .map(|row| row.iter().map(|s| doc.field.parse_elem(s)).collect())
            .collect::<Result<_>>()?;
        GluingFlag::new(doc.field, rows)
    }
}

impl From<GluingFlag> for FlagDocument {
    fn from(flag: GluingFlag) -> Self {
        FlagDocument {
            field: flag.field,
            rows: flag
                .rows
                .iter()
                .map(|row| row.iter().map(|x| flag.field.format_elem(x)).collect())
                .collect(),
        }
    }
}

/// Flag for a rational normalization: row `j` is `e_j ⊕ Σ_{l≠j} f_l`, i.e.
/// the matrix `[ I | J - I ]`. `det(J - I) = (-1)^{r-1}(r - 1)`, so the
/// second projection degenerates when the characteristic divides `r - 1`.
pub fn build_rational_flag(field: Field, rank: usize, degree: i64, a: i64) -> Result<GluingFlag> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    let ra = rank as i64 * a;
    if ra > degree {
        return Err(Error::DegreeBound { ra, d: degree });
    }
    let rows: Vec<Vec<i64>> = (0..rank)
        .map(|j| {
            let mut row = vec![0; 2 * rank];
            row[j] = 1;
            for l in (0..rank).filter(|&l| l != j) {
                row[rank + l] = 1;
            }
            row
        })
        .collect();
    let flag = GluingFlag::from_ints(field, &rows)?;
    if field.det(&flag.second_block())?.is_zero() {
        return Err(Error::SingularProjection {
            field: field.to_string(),
            rank,
        });
    }
    Ok(flag)
}

/// One independent rational-normalization flag per node.
pub fn build_rational_flags(
    field: Field,
    rank: usize,
    degree: i64,
    a: i64,
    nodes: usize,
) -> Result<Vec<GluingFlag>> {
    (0..nodes)
        .map(|_| build_rational_flag(field, rank, degree, a))
        .collect()
}

/// Rank of each projection restricted to `F₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionVerdict {
    pub rank: usize,
    pub first_rank: usize,
    pub second_rank: usize,
    pub first_iso: bool,
    pub second_iso: bool,
    /// Both projections are isomorphisms, so `φ(E)` is locally free at the
    /// node.
    pub locally_free: bool,
}

pub fn check_projections(flag: &GluingFlag) -> ProjectionVerdict {
    let field = flag.field();
    let first_rank = field.rank(&flag.first_block());
    let second_rank = field.rank(&flag.second_block());
    let r = flag.rank();
    ProjectionVerdict {
        rank: r,
        first_rank,
        second_rank,
        first_iso: first_rank == r,
        second_iso: second_rank == r,
        locally_free: first_rank == r && second_rank == r,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelVerdict {
    /// `dim F₁ ∩ (E(p) ⊕ 0)`.
    pub meets_first: usize,
    /// `dim F₁ ∩ (0 ⊕ E(q))`.
    pub meets_second: usize,
    pub pass: bool,
}

/// Verifies that no nonzero vector of `F₁` lives in a single factor, by
/// `dim(F₁ ∩ U) = dim F₁ + dim U - dim(F₁ + U)` for each coordinate factor
/// `U`.
pub fn check_no_kernel_section(flag: &GluingFlag) -> KernelVerdict {
    let field = flag.field();
    let r = flag.rank();
    let factor = |offset: usize| -> Vec<Vec<Elem>> {
        (0..r)
            .map(|j| {
                (0..2 * r)
                    .map(|c| if c == offset + j { int(1) } else { int(0) })
                    .collect()
            })
            .collect()
    };
    let meet = |u: Vec<Vec<Elem>>| {
        let mut stacked = flag.rows().to_vec();
        stacked.extend(u);
        2 * r - field.rank(&stacked)
    };
    let meets_first = meet(factor(0));
    let meets_second = meet(factor(r));
    KernelVerdict {
        meets_first,
        meets_second,
        pass: meets_first == 0 && meets_second == 0,
    }
}

/// Solves `b^r = a` in the field for each gluing scalar: the twist by an
/// `r`-th root line bundle that corrects the determinant on the kernel
/// `⊕ k^×` of the Picard restriction. Over `F_p` the smallest root is
/// returned; over the rationals the positive one when there is a choice.
pub fn picard_rth_root(field: Field, r: u32, scalars: &[Elem]) -> Result<Vec<Elem>> {
    scalars
        .iter()
        .map(|a| {
            let a = field.from_rational(*a)?;
            if a.is_zero() {
                return Err(Error::ZeroScalar);
            }
            let roots = field.roots(&a, r);
            let pick = roots
                .iter()
                .copied()
                .find(|b| field == Field::Rationals && *b > Rational::zero())
                .or_else(|| roots.first().copied());
            pick.ok_or_else(|| Error::NoRoot(field.format_elem(&a), r))
        })
        .collect()
}

/// The `[r]` map `(b_i) ↦ (b_i^r)`.
pub fn rth_power(field: Field, r: u32, scalars: &[Elem]) -> Vec<Elem> {
    scalars.iter().map(|b| field.pow(b, r as u64)).collect()
}
