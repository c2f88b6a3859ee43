//! Tree-like nodal curves as decorated dual graphs.
//!
//! A [`TreeLikeCurve`] stores one [`Component`] per irreducible component and
//! one edge per node joining two distinct components. Self-nodes of a
//! component are not edges; they are counted in
//! [`Component::internal_nodes`]. The dual graph must be a tree.
//!
//! Components are addressed two ways: by their user-facing `id` (positive,
//! unique, used on the wire) and by their position in
//! [`TreeLikeCurve::components`] (a `usize` index, used by every API in this
//! crate).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: u32,
    /// Genus of the normalization.
    pub geometric_genus: u32,
    /// Number of self-nodes.
    #[serde(default)]
    pub internal_nodes: u32,
}

impl Component {
    pub fn new(id: u32, geometric_genus: u32, internal_nodes: u32) -> Self {
        Component {
            id,
            geometric_genus,
            internal_nodes,
        }
    }

    pub fn arithmetic_genus(&self) -> u32 {
        self.geometric_genus + self.internal_nodes
    }

    /// Smooth rational component: geometric genus zero and no self-nodes.
    pub fn is_rational(&self) -> bool {
        self.arithmetic_genus() == 0
    }
}

/// Wire form of a curve: `{"components":[...],"edges":[[1,2],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDocument {
    pub components: Vec<Component>,
    #[serde(default)]
    pub edges: Vec<[u32; 2]>,
}

/// A connected nodal curve whose dual graph is a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CurveDocument", into = "CurveDocument")]
pub struct TreeLikeCurve {
    components: Vec<Component>,
    /// Edges as index pairs `(a, b)` with `a < b`, sorted.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    index_by_id: BTreeMap<u32, usize>,
}

impl TreeLikeCurve {
    /// Builds and validates a curve from components and id-pairs.
    pub fn new(components: Vec<Component>, edges: &[[u32; 2]]) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyCurve);
        }
        let mut index_by_id = BTreeMap::new();
        for (idx, c) in components.iter().enumerate() {
            if c.id == 0 {
                return Err(Error::ZeroId);
            }
            if index_by_id.insert(c.id, idx).is_some() {
                return Err(Error::DuplicateId(c.id));
            }
        }

        let n = components.len();
        let mut seen = BTreeSet::new();
        let mut pairs = Vec::with_capacity(edges.len());
        for &[u, v] in edges {
            let a = *index_by_id.get(&u).ok_or(Error::UnknownComponent(u))?;
            let b = *index_by_id.get(&v).ok_or(Error::UnknownComponent(v))?;
            if a == b {
                return Err(Error::SelfLoop(u));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::MultiEdge(u.min(v), u.max(v)));
            }
            pairs.push(key);
        }

        // Union-find: the first edge closing a loop is reported.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &pairs {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                let (u, v) = (components[a].id, components[b].id);
                return Err(Error::CycleDetected(u.min(v), u.max(v)));
            }
            parent[ra] = rb;
        }
        let parts = (0..n).filter(|&x| find(&mut parent, x) == x).count();
        if parts != 1 {
            return Err(Error::Disconnected {
                components: n,
                parts,
            });
        }

        pairs.sort_unstable();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &pairs {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(TreeLikeCurve {
            components,
            edges: pairs,
            adjacency,
            index_by_id,
        })
    }

    /// Path `Y_1 - Y_2 - ... - Y_N` with ids `1..=N` and the given genera.
    pub fn path(genera: &[u32]) -> Result<Self> {
        let components = genera
            .iter()
            .enumerate()
            .map(|(i, &g)| Component::new(i as u32 + 1, g, 0))
            .collect();
        let edges: Vec<[u32; 2]> = (1..genera.len() as u32).map(|i| [i, i + 1]).collect();
        Self::new(components, &edges)
    }

    /// Irreducible curve with a single component of id 1.
    pub fn irreducible(geometric_genus: u32, internal_nodes: u32) -> Self {
        Self::new(
            vec![Component::new(1, geometric_genus, internal_nodes)],
            &[],
        )
        .expect("single component is a tree")
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component(&self, idx: usize) -> Result<&Component> {
        self.components.get(idx).ok_or(Error::IndexOutOfRange {
            index: idx,
            len: self.len(),
        })
    }

    pub fn id(&self, idx: usize) -> u32 {
        self.components[idx].id
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.index_by_id.get(&id).copied()
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.components.iter().map(|c| c.id)
    }

    /// Edges as sorted index pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, idx: usize) -> &[usize] {
        &self.adjacency[idx]
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.adjacency[idx].len()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub(crate) fn check_index(&self, idx: usize) -> Result<()> {
        if idx < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: idx,
                len: self.len(),
            })
        }
    }

    /// Whether the component indices in `set` induce a connected subgraph.
    pub fn is_connected_subset(&self, set: &BTreeSet<usize>) -> bool {
        let Some(&start) = set.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if set.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == set.len()
    }

    pub fn to_document(&self) -> CurveDocument {
        CurveDocument {
            components: self.components.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [self.id(a), self.id(b)])
                .collect(),
        }
    }
}

impl TryFrom<CurveDocument> for TreeLikeCurve {
    type Error = Error;

    fn try_from(doc: CurveDocument) -> Result<Self> {
        TreeLikeCurve::new(doc.components, &doc.edges)
    }
}

impl From<TreeLikeCurve> for CurveDocument {
    fn from(c: TreeLikeCurve) -> Self {
        c.to_document()
    }
}

/// Arithmetic genus `p_a = Σ ρ_a(Y_i)`; the tree contributes no loops.
pub fn arithmetic_genus(curve: &TreeLikeCurve) -> u32 {
    curve
        .components
        .iter()
        .map(Component::arithmetic_genus)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub components: usize,
    pub edges: usize,
    pub arithmetic_genus: u32,
    /// `p_a ≥ 2`. Reported only; nothing in the crate requires it.
    pub genus_at_least_two: bool,
    pub rational_components: Vec<u32>,
}

/// Validates a curve document and reports its genus data.
pub fn validate_curve(doc: &CurveDocument) -> Result<ValidationReport> {
    let curve = TreeLikeCurve::try_from(doc.clone())?;
    let pa = arithmetic_genus(&curve);
    Ok(ValidationReport {
        valid: true,
        components: curve.len(),
        edges: curve.edges.len(),
        arithmetic_genus: pa,
        genus_at_least_two: pa >= 2,
        rational_components: curve
            .components
            .iter()
            .filter(|c| c.is_rational())
            .map(|c| c.id)
            .collect(),
    })
}

/// A leaf-pruning order of the components.
///
/// Position `i` (0-based) holds component `order[i]`. For `i < N-1` the
/// component at `i` has exactly one neighbour at a later position, `ν(i)`,
/// and the later positions form a connected subtree `B(i)`. `G(i)` is the
/// complement of `B(i)`: the component at `i` together with everything pruned
/// into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    order: Vec<usize>,
    position: Vec<usize>,
    /// `next[i]` is the position of `ν(i)`; `None` for the last position.
    next: Vec<Option<usize>>,
    /// Component indices of `G(i)`, sorted.
    good: Vec<Vec<usize>>,
}

impl Ordering {
    /// Accepts an explicit permutation of component indices if it has the
    /// leaf-pruning property on `curve`.
    pub fn from_permutation(curve: &TreeLikeCurve, order: Vec<usize>) -> Result<Self> {
        let n = curve.len();
        if order.len() != n {
            return Err(Error::OrderingMismatch);
        }
        let mut position = vec![usize::MAX; n];
        for (pos, &idx) in order.iter().enumerate() {
            if idx >= n || position[idx] != usize::MAX {
                return Err(Error::OrderingMismatch);
            }
            position[idx] = pos;
        }

        let mut next = vec![None; n];
        for (pos, &idx) in order.iter().enumerate() {
            let later: Vec<usize> = curve
                .neighbors(idx)
                .iter()
                .map(|&w| position[w])
                .filter(|&p| p > pos)
                .collect();
            match (pos + 1 == n, later.as_slice()) {
                (true, []) => {}
                (false, [p]) => next[pos] = Some(*p),
                _ => return Err(Error::OrderingMismatch),
            }
        }

        let mut good: Vec<Vec<usize>> = order.iter().map(|&idx| vec![idx]).collect();
        for pos in 0..n {
            if let Some(up) = next[pos] {
                let moved = good[pos].clone();
                good[up].extend(moved);
            }
        }
        for g in &mut good {
            g.sort_unstable();
        }
        Ok(Ordering {
            order,
            position,
            next,
            good,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Component indices in pruning order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn component_at(&self, pos: usize) -> usize {
        self.order[pos]
    }

    pub fn position_of(&self, idx: usize) -> usize {
        self.position[idx]
    }

    /// Position of `ν(pos)`.
    pub fn next(&self, pos: usize) -> Option<usize> {
        self.next[pos]
    }

    /// Component indices of `G(pos)`, sorted.
    pub fn good(&self, pos: usize) -> &[usize] {
        &self.good[pos]
    }

    /// Whether this ordering is a valid leaf-pruning order of `curve`.
    pub fn belongs_to(&self, curve: &TreeLikeCurve) -> bool {
        Ordering::from_permutation(curve, self.order.clone()).as_ref() == Ok(self)
    }

    pub(crate) fn check(&self, curve: &TreeLikeCurve) -> Result<()> {
        if self.belongs_to(curve) {
            Ok(())
        } else {
            Err(Error::OrderingMismatch)
        }
    }

    /// Component ids in pruning order.
    pub fn ids(&self, curve: &TreeLikeCurve) -> Vec<u32> {
        self.order.iter().map(|&i| curve.id(i)).collect()
    }
}

/// Leaf-pruning order with a deterministic tie-break.
///
/// The tree is peeled in rounds: each round removes the leaves of the tree
/// as it stood at the start of the round, in increasing id order, stopping
/// when one component remains. That component gets the last position.
pub fn prune_ordering(curve: &TreeLikeCurve) -> Ordering {
    let n = curve.len();
    let mut degree: Vec<usize> = (0..n).map(|i| curve.degree(i)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);

    while order.len() + 1 < n {
        let mut round: Vec<usize> = (0..n).filter(|&i| !removed[i] && degree[i] <= 1).collect();
        round.sort_by_key(|&i| curve.id(i));
        for v in round {
            if order.len() + 1 == n {
                break;
            }
            removed[v] = true;
            order.push(v);
            for &w in curve.neighbors(v) {
                if !removed[w] {
                    degree[w] -= 1;
                }
            }
        }
    }
    order.extend((0..n).filter(|&i| !removed[i]));
    Ordering::from_permutation(curve, order).expect("pruning order satisfies the leaf property")
}

/// `G(i)`, `B(i)` and the node joining them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Component indices of `G(i)`.
    pub good: Vec<usize>,
    /// Component indices of `B(i)`; empty for the last position.
    pub bad: Vec<usize>,
    /// The edge `{Y_i, Y_ν(i)}` as component indices.
    pub boundary: Option<(usize, usize)>,
}

/// Splits the curve at ordering position `pos` (0-based).
pub fn decompose(curve: &TreeLikeCurve, ord: &Ordering, pos: usize) -> Result<Decomposition> {
    ord.check(curve)?;
    if pos >= ord.len() {
        return Err(Error::IndexOutOfRange {
            index: pos,
            len: ord.len(),
        });
    }
    let good = ord.good(pos).to_vec();
    let bad = (0..curve.len())
        .filter(|i| good.binary_search(i).is_err())
        .collect();
    let boundary = ord
        .next(pos)
        .map(|up| (ord.component_at(pos), ord.component_at(up)));
    Ok(Decomposition {
        good,
        bad,
        boundary,
    })
}
