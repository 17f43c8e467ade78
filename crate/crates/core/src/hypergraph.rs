//! Hypergraph data model, family generators, and spanning-subhypergraph
//! enumeration.
//!
//! Vertices are 1-indexed in all I/O and error messages; internally an edge
//! is a bitmask with bit `i - 1` standing for vertex `i`. Edges are kept in
//! canonical order (ascending by order, then by numeric mask), so equal
//! hypergraphs compare and serialize identically.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Maximum number of randomizable (order >= 2) edges for subset enumeration.
pub const MAX_RANDOMIZABLE_EDGES: usize = 20;

/// Maximum qubit count for sign-vector construction.
pub const MAX_QUBITS: usize = 20;

/// A hypergraph: a vertex count plus a set of hyperedges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    /// Sorted by (popcount, mask), no duplicates.
    edges: Vec<u32>,
    name: Option<String>,
}

impl Hypergraph {
    /// Builds a hypergraph from edge bitmasks, canonicalizing the edge order.
    ///
    /// Every mask must be nonempty and use only bits `0..n`. Duplicate masks
    /// are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("vertex count must be >= 1".into()));
        }
        if n > 32 {
            return Err(Error::Capacity {
                what: "vertices",
                got: n,
                limit: 32,
            });
        }
        let full: u32 = ones(n);
        let mut set: Vec<u32> = Vec::new();
        for e in edges {
            if e == 0 {
                return Err(Error::InvalidArgument("empty hyperedge".into()));
            }
            if e & !full != 0 {
                let bad = 32 - (e & !full).leading_zeros() as usize;
                return Err(Error::VertexOutOfRange { index: bad, n });
            }
            if set.contains(&e) {
                return Err(Error::DuplicateEdge {
                    edge: format_edge(e),
                    line: 0,
                });
            }
            set.push(e);
        }
        set.sort_by_key(|&e| (e.count_ones(), e));
        Ok(Self {
            n,
            edges: set,
            name: None,
        })
    }

    /// Builds a hypergraph from 1-indexed vertex lists.
    pub fn from_vertex_lists(n: usize, edges: &[&[usize]]) -> Result<Self> {
        let mut masks = Vec::with_capacity(edges.len());
        for list in edges {
            let mut m = 0u32;
            for &v in *list {
                if v == 0 || v > n {
                    return Err(Error::VertexOutOfRange { index: v, n });
                }
                m |= 1 << (v - 1);
            }
            masks.push(m);
        }
        Self::new(n, masks)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[u32] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges of order >= 2, the ones subject to randomization.
    pub fn randomizable_edges(&self) -> impl Iterator<Item = u32> + '_ {
        self.edges.iter().copied().filter(|e| e.count_ones() >= 2)
    }

    /// Order-1 edges (loops); retained in every spanning subhypergraph.
    pub fn loop_edges(&self) -> impl Iterator<Item = u32> + '_ {
        self.edges.iter().copied().filter(|e| e.count_ones() == 1)
    }

    /// Maximum edge order, or 0 for an edgeless hypergraph.
    pub fn max_order(&self) -> usize {
        self.edges
            .iter()
            .map(|e| e.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// The distinct randomizable edge orders, ascending.
    pub fn randomizable_orders(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = self
            .randomizable_edges()
            .map(|e| e.count_ones() as usize)
            .collect();
        orders.sort_unstable();
        orders.dedup();
        orders
    }

    /// Canonical single-record serialization; `parse_hypergraph` inverts it.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str("name=");
            out.push_str(name);
            out.push_str("; ");
        }
        out.push_str(&format!("vertices={}; edges=", self.n));
        for (i, &e) in self.edges.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format_edge(e));
        }
        out
    }

    /// Enumerates all spanning subhypergraphs.
    ///
    /// Subhypergraph `k` (for `k` in `0..2^m`, ascending) deletes exactly the
    /// randomizable edges whose bit is set in `k`; loops are always kept.
    /// Index 0 is the hypergraph itself, index `2^m - 1` keeps only loops.
    pub fn spanning_subhypergraphs(&self) -> Result<SpanningIter<'_>> {
        let rand: Vec<u32> = self.randomizable_edges().collect();
        if rand.len() > MAX_RANDOMIZABLE_EDGES {
            return Err(Error::Capacity {
                what: "randomizable edges",
                got: rand.len(),
                limit: MAX_RANDOMIZABLE_EDGES,
            });
        }
        Ok(SpanningIter {
            parent: self,
            rand,
            next: 0,
        })
    }

    /// Number of spanning subhypergraphs, `2^m`.
    pub fn spanning_count(&self) -> Result<usize> {
        let m = self.randomizable_edges().count();
        if m > MAX_RANDOMIZABLE_EDGES {
            return Err(Error::Capacity {
                what: "randomizable edges",
                got: m,
                limit: MAX_RANDOMIZABLE_EDGES,
            });
        }
        Ok(1usize << m)
    }

    /// The spanning subhypergraph that deletes the randomizable edges selected
    /// by `deleted`, bit `j` referring to the `j`-th randomizable edge in
    /// canonical order.
    pub fn spanning_subhypergraph(&self, deleted: u32) -> Hypergraph {
        let rand: Vec<u32> = self.randomizable_edges().collect();
        subhypergraph(self, &rand, deleted)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn ones(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// `{i,j,...}` with ascending 1-indexed vertices.
pub(crate) fn format_edge(mask: u32) -> String {
    let mut s = String::from("{");
    let mut first = true;
    for v in 1..=32 {
        if mask & (1 << (v - 1)) != 0 {
            if !first {
                s.push(',');
            }
            s.push_str(&v.to_string());
            first = false;
        }
    }
    s.push('}');
    s
}

fn subhypergraph(parent: &Hypergraph, rand: &[u32], deleted: u32) -> Hypergraph {
    let kept = parent
        .loop_edges()
        .chain(
            rand.iter()
                .enumerate()
                .filter(|(j, _)| deleted & (1 << j) == 0)
                .map(|(_, &e)| e),
        )
        .collect::<Vec<_>>();
    // Masks come from a valid parent, so this cannot fail.
    Hypergraph::new(parent.n, kept).expect("subhypergraph of valid hypergraph")
}

/// Iterator over spanning subhypergraphs in deleted-subset-mask order.
pub struct SpanningIter<'a> {
    parent: &'a Hypergraph,
    rand: Vec<u32>,
    next: u64,
}

impl Iterator for SpanningIter<'_> {
    type Item = Hypergraph;

    fn next(&mut self) -> Option<Hypergraph> {
        let total = 1u64 << self.rand.len();
        if self.next >= total {
            return None;
        }
        let deleted = self.next as u32;
        self.next += 1;
        Some(subhypergraph(self.parent, &self.rand, deleted))
    }
}

impl ExactSizeIterator for SpanningIter<'_> {
    fn len(&self) -> usize {
        ((1u64 << self.rand.len()) - self.next) as usize
    }
}

/// Per-order edge counts of a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrderProfile {
    counts: BTreeMap<usize, usize>,
}

impl EdgeOrderProfile {
    pub fn of(h: &Hypergraph) -> Self {
        let mut counts = BTreeMap::new();
        for &e in h.edges() {
            *counts.entry(e.count_ones() as usize).or_insert(0) += 1;
        }
        Self { counts }
    }

    pub fn count(&self, order: usize) -> usize {
        self.counts.get(&order).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

/// Clover on `n >= 3` vertices: vertex `n` is the hub, rim vertices
/// `1..n-1` form a cycle, and each edge is a hub-plus-adjacent-rim-pair
/// triple. `clover(3)` degenerates to the single edge `{1,2,3}`.
pub fn clover(n: usize) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "clover requires n >= 3, got {n}"
        )));
    }
    let rim = n - 1;
    let hub = 1u32 << (n - 1);
    let edges = (0..rim).map(|i| {
        let a = 1u32 << i;
        let b = 1u32 << ((i + 1) % rim);
        hub | a | b
    });
    // rim = 2 yields the same triple twice; Hypergraph::new rejects
    // duplicates, so dedup first.
    let mut masks: Vec<u32> = edges.collect();
    masks.sort_unstable();
    masks.dedup();
    Ok(Hypergraph::new(n, masks)?.with_name(format!("clover-{n}")))
}

/// Flower on odd `n >= 3` vertices: vertex `n` is the hub and the rim splits
/// into `(n-1)/2` disjoint pairs, one triple per pair.
pub fn flower(n: usize) -> Result<Hypergraph> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "flower requires odd n >= 3, got {n}"
        )));
    }
    let hub = 1u32 << (n - 1);
    let petals = (n - 1) / 2;
    let edges = (0..petals).map(|j| hub | (1u32 << (2 * j)) | (1u32 << (2 * j + 1)));
    Ok(Hypergraph::new(n, edges)?.with_name(format!("flower-{n}")))
}

/// Star graph on `n >= 2` vertices: vertex 1 joined to every other vertex by
/// an order-2 edge.
pub fn star(n: usize) -> Result<Hypergraph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "star requires n >= 2, got {n}"
        )));
    }
    let edges = (2..=n).map(|v| 1u32 | (1u32 << (v - 1)));
    Ok(Hypergraph::new(n, edges)?.with_name(format!("star-{n}")))
}

/// One hyperedge covering all `n` vertices.
pub fn single_edge(n: usize) -> Result<Hypergraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("single-edge requires n >= 1".into()));
    }
    Ok(Hypergraph::new(n, [ones(n)])?.with_name(format!("single-edge-{n}")))
}

/// All `C(n, k)` order-`k` edges.
pub fn complete_uniform(k: usize, n: usize) -> Result<Hypergraph> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "complete-{k}-uniform requires 1 <= k <= n, got n = {n}"
        )));
    }
    let mut edges = Vec::new();
    for mask in 1u32..=ones(n) {
        if mask.count_ones() as usize == k {
            edges.push(mask);
        }
    }
    Ok(Hypergraph::new(n, edges)?.with_name(format!("complete-{k}-uniform-{n}")))
}

/// Looks up a generator by family name: `clover`, `flower`, `star`,
/// `single-edge`, `edgeless`, or `complete-<k>-uniform`.
pub fn family(name: &str, n: usize) -> Result<Hypergraph> {
    match name {
        "clover" => clover(n),
        "flower" => flower(n),
        "star" => star(n),
        "single-edge" => single_edge(n),
        "edgeless" => {
            Ok(Hypergraph::new(n, std::iter::empty())?.with_name(format!("edgeless-{n}")))
        }
        _ => {
            if let Some(rest) = name.strip_prefix("complete-") {
                if let Some(k) = rest.strip_suffix("-uniform") {
                    if let Ok(k) = k.parse::<usize>() {
                        return complete_uniform(k, n);
                    }
                }
            }
            Err(Error::UnknownFamily(name.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn canonical_edge_order() {
        let h = Hypergraph::from_vertex_lists(4, &[&[1, 2, 3, 4], &[2, 3], &[1]]).unwrap();
        let orders: Vec<u32> = h.edges().iter().map(|e| e.count_ones()).collect();
        assert_eq!(orders, vec![1, 2, 4]);
    }

    #[test]
    fn rejects_duplicate_and_out_of_range() {
        assert!(matches!(
            Hypergraph::from_vertex_lists(3, &[&[1, 2, 3], &[3, 2, 1]]),
            Err(Error::DuplicateEdge { .. })
        ));
        assert!(matches!(
            Hypergraph::from_vertex_lists(3, &[&[1, 4]]),
            Err(Error::VertexOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn spanning_counts() {
        let h14 = complete_uniform(3, 4).unwrap();
        let subs: Vec<_> = h14.spanning_subhypergraphs().unwrap().collect();
        assert_eq!(subs.len(), 16);
        assert_eq!(subs[0], h14.clone().spanning_subhypergraph(0));
        assert_eq!(subs[0].edges(), h14.edges());
        assert_eq!(subs[15].edge_count(), 0);

        let edgeless = family("edgeless", 3).unwrap();
        assert_eq!(edgeless.spanning_subhypergraphs().unwrap().count(), 1);

        let pair = Hypergraph::from_vertex_lists(2, &[&[1, 2]]).unwrap();
        let subs: Vec<_> = pair.spanning_subhypergraphs().unwrap().collect();
        assert_eq!(subs.len(), 2);
        assert_eq!(subs[0].edge_count(), 1);
        assert_eq!(subs[1].edge_count(), 0);
    }

    #[test]
    fn spanning_keeps_loops() {
        let h = Hypergraph::from_vertex_lists(3, &[&[1], &[1, 2, 3]]).unwrap();
        let subs: Vec<_> = h.spanning_subhypergraphs().unwrap().collect();
        assert_eq!(subs.len(), 2);
        for s in subs {
            assert!(s.edges().contains(&1u32));
        }
    }

    #[test]
    fn spanning_duplicate_free() {
        let h = clover(6).unwrap();
        let all: Vec<_> = h.spanning_subhypergraphs().unwrap().collect();
        let set: HashSet<_> = all.iter().map(|g| g.edges().to_vec()).collect();
        assert_eq!(set.len(), all.len());
        assert_eq!(all.len(), 1 << 5);
    }

    #[test]
    fn clover_structure() {
        let c3 = clover(3).unwrap();
        assert_eq!(c3.edges(), &[0b111]);

        let c4 = clover(4).unwrap();
        let expect =
            Hypergraph::from_vertex_lists(4, &[&[4, 1, 2], &[4, 2, 3], &[4, 3, 1]]).unwrap();
        assert_eq!(c4.edges(), expect.edges());

        for n in 3..=9 {
            let c = clover(n).unwrap();
            assert_eq!(c.edge_count(), if n == 3 { 1 } else { n - 1 });
            assert!(c.edges().iter().all(|e| e.count_ones() == 3));
        }
        assert!(clover(2).is_err());
    }

    #[test]
    fn flower_structure() {
        assert_eq!(flower(3).unwrap().edges(), clover(3).unwrap().edges());
        assert!(flower(4).is_err());
        assert!(flower(1).is_err());

        let f5 = flower(5).unwrap();
        assert_eq!(f5.edge_count(), 2);
        let hub = 1u32 << 4;
        assert_eq!(f5.edges()[0] & f5.edges()[1], hub);

        let f9 = flower(9).unwrap();
        assert_eq!(f9.edge_count(), 4);
        for (i, &a) in f9.edges().iter().enumerate() {
            for &b in &f9.edges()[i + 1..] {
                assert_eq!(a & b, 1u32 << 8);
            }
        }
    }

    #[test]
    fn family_lookup() {
        let h14 = family("complete-3-uniform", 4).unwrap();
        let expect = Hypergraph::from_vertex_lists(
            4,
            &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]],
        )
        .unwrap();
        assert_eq!(h14.edges(), expect.edges());

        assert_eq!(family("star", 2).unwrap().edges(), &[0b11]);
        assert_eq!(family("single-edge", 4).unwrap().edges(), &[0b1111]);
        assert!(family("moebius", 4).is_err());
        assert!(family("complete-5-uniform", 4).is_err());
    }

    #[test]
    fn profile_totals() {
        let h = Hypergraph::from_vertex_lists(4, &[&[1], &[1, 2], &[1, 2, 3, 4]]).unwrap();
        let p = EdgeOrderProfile::of(&h);
        assert_eq!(p.total(), 3);
        assert_eq!(p.count(1), 1);
        assert_eq!(p.count(2), 1);
        assert_eq!(p.count(4), 1);
        assert_eq!(p.count(3), 0);
    }
}
