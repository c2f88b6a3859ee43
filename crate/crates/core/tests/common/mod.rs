//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's arithmetic: curves are plain
//! adjacency lists, windows are compared with cross-multiplied integers, and
//! determinants come from cofactor expansion over integer polynomials.

#![allow(dead_code)]

use nodal_stab::{BundleClass, Component, Polarization, Rational, TreeLikeCurve};
use rand::seq::SliceRandom;
use rand::Rng;

/// A tree-like curve as raw data, indexed `0..n` in input order.
#[derive(Debug, Clone)]
pub struct RawCurve {
    pub ids: Vec<u32>,
    pub genus: Vec<u32>,
    pub self_nodes: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

impl RawCurve {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn rho(&self, i: usize) -> i64 {
        (self.genus[i] + self.self_nodes[i]) as i64
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    pub fn build(&self) -> TreeLikeCurve {
        let comps = (0..self.len())
            .map(|i| Component::new(self.ids[i], self.genus[i], self.self_nodes[i]))
            .collect();
        let edges: Vec<[u32; 2]> = self
            .edges
            .iter()
            .map(|&(a, b)| [self.ids[a], self.ids[b]])
            .collect();
        TreeLikeCurve::new(comps, &edges).expect("generated trees are valid")
    }

    /// `d_i + r(1 - ρ_i)`.
    pub fn chi_i(&self, d: &[i64], r: i64, i: usize) -> i64 {
        d[i] + r * (1 - self.rho(i))
    }

    pub fn chi_total(&self, d: &[i64], r: i64) -> i64 {
        (0..self.len()).map(|i| self.chi_i(d, r, i)).sum::<i64>() - r * (self.len() as i64 - 1)
    }

    /// Multidegree after `O(Σ a_j Y_j)`, via neighbour counts.
    pub fn twist(&self, d: &[i64], r: i64, a: &[i64]) -> Vec<i64> {
        let adj = self.adjacency();
        (0..self.len())
            .map(|i| {
                let self_term = -(adj[i].len() as i64) * a[i];
                let nbr: i64 = adj[i].iter().map(|&j| a[j]).sum();
                d[i] + r * (self_term + nbr)
            })
            .collect()
    }

    /// Connected component of `start` inside `allowed`.
    pub fn reach(&self, start: usize, allowed: &[bool]) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            out.push(v);
            for &w in &adj[v] {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_connected(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return false;
        }
        let mut allowed = vec![false; self.len()];
        for &v in set {
            allowed[v] = true;
        }
        self.reach(set[0], &allowed).len() == set.len()
    }

    /// `true` when every entry of `order` is a leaf of the subtree of
    /// components not yet listed.
    pub fn is_leaf_order(&self, order: &[usize]) -> bool {
        let n = self.len();
        let adj = self.adjacency();
        let mut alive = vec![true; n];
        if order.len() != n {
            return false;
        }
        for &v in &order[..n - 1] {
            if !alive[v] {
                return false;
            }
            let live_nbrs = adj[v].iter().filter(|&&w| alive[w]).count();
            if live_nbrs != 1 {
                return false;
            }
            alive[v] = false;
        }
        alive[order[n - 1]]
    }

    /// `G(i)` for each position: the piece containing `order[i]` among the
    /// components at positions `≤ i`.
    pub fn good_sets(&self, order: &[usize]) -> Vec<Vec<usize>> {
        let mut allowed = vec![false; self.len()];
        order
            .iter()
            .map(|&v| {
                allowed[v] = true;
                self.reach(v, &allowed)
            })
            .collect()
    }
}

/// Positive integer weights `w_i`, meaning `λ_i = w_i / Σw`.
#[derive(Debug, Clone)]
pub struct Weights(pub Vec<i64>);

impl Weights {
    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn polarization(&self, curve: &TreeLikeCurve) -> Polarization {
        let t = self.total();
        let w: Vec<Rational> = self.0.iter().map(|&x| Rational::new(x, t)).collect();
        Polarization::new(curve, &w).expect("weights are positive and sum to one")
    }
}

/// Per-position verdicts `(S_i, pass)` with windows compared after scaling
/// by `Σw`: `W·L ≤ W·S ≤ W·L + W·r` where `W·L = w(G)·χ + W·r(|G|-1)`.
pub fn windows(
    raw: &RawCurve,
    goods: &[Vec<usize>],
    w: &Weights,
    d: &[i64],
    r: i64,
) -> Vec<(i64, bool)> {
    let big_w = w.total();
    let chi = raw.chi_total(d, r);
    goods
        .iter()
        .map(|g| {
            let wg: i64 = g.iter().map(|&j| w.0[j]).sum();
            let s: i64 = g.iter().map(|&j| raw.chi_i(d, r, j)).sum();
            let lower = wg * chi + big_w * r * (g.len() as i64 - 1);
            let scaled = big_w * s;
            (s, lower <= scaled && scaled <= lower + big_w * r)
        })
        .collect()
}

pub fn all_pass(raw: &RawCurve, goods: &[Vec<usize>], w: &Weights, d: &[i64], r: i64) -> bool {
    windows(raw, goods, w, d, r).iter().all(|&(_, p)| p)
}

/// Random tree on `n` components with distinct shuffled ids.
pub fn random_curve<R: Rng>(rng: &mut R, n: usize, max_genus: u32) -> RawCurve {
    let mut ids: Vec<u32> = (1..=60).collect();
    ids.shuffle(rng);
    ids.truncate(n);
    let genus: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=max_genus)).collect();
    let self_nodes: Vec<u32> = genus
        .iter()
        .map(|&g| {
            if g < max_genus && rng.gen_bool(0.2) {
                1
            } else {
                0
            }
        })
        .collect();
    let edges = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let mut raw = RawCurve {
        ids,
        genus,
        self_nodes,
        edges,
    };
    // Relabel positions so the attachment structure is not aligned with ids.
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    raw.edges = raw.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    raw
}

pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Weights {
    Weights((0..n).map(|_| rng.gen_range(1..=9)).collect())
}

pub fn class(curve: &TreeLikeCurve, r: u32, d: &[i64]) -> BundleClass {
    BundleClass::new(curve, r, d).expect("degrees match the curve")
}

/// Every labelled tree on `n` vertices, from Prüfer sequences.
pub fn all_labelled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 1 {
        return vec![Vec::new()];
    }
    if n == 2 {
        return vec![vec![(0, 1)]];
    }
    let mut out = Vec::new();
    let total = n.pow((n - 2) as u32);
    for code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::with_capacity(n - 1);
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf.min(s), leaf.max(s)));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        edges.sort_unstable();
        out.push(edges);
    }
    out
}

/// Integer polynomials in `π`, lowest degree first.
pub type Poly = Vec<i64>;

pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Determinant by Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return vec![1];
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Poly = Vec::new();
    for col in 0..n {
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let mut term = poly_mul(&m[0][col], &cofactor_det(&minor));
        if col % 2 == 1 {
            term.iter_mut().for_each(|x| *x = -*x);
        }
        acc = poly_add(&acc, &term);
    }
    acc
}

/// Reduces coefficients mod `p` and keeps degrees `0..=n`.
pub fn truncate(a: &Poly, p: i64, n: usize) -> Vec<u64> {
    (0..=n)
        .map(|k| a.get(k).copied().unwrap_or(0).rem_euclid(p) as u64)
        .collect()
}
