//! Undirected coupling graphs: regular rings, Watts-Strogatz small worlds,
//! and a plain edge-list text format.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha1::{Digest, Sha1};

use crate::error::{Error, Result};

/// Reseeding attempts before a small-world request is declared unsatisfiable.
const MAX_RESEEDS: u64 = 10_000;

/// Simple undirected graph over neurons `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n: usize,
    /// Normalized `(min, max)` pairs.
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Topology {
    /// Builds a simple graph, rejecting self-loops, duplicates and out-of-range
    /// indices. Connectivity is not required here; see [`Topology::connected`].
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!("edge ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::InvalidParameter(format!("self-loop at {i}")));
            }
            if !set.insert((i.min(j), i.max(j))) {
                return Err(Error::InvalidParameter(format!("duplicate edge ({i}, {j})")));
            }
        }
        Ok(Self::from_set(n, set))
    }

    /// Like [`Topology::from_edges`] but additionally requires a connected graph.
    pub fn connected(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let t = Self::from_edges(n, edges)?;
        if !t.is_connected() {
            return Err(Error::InvalidParameter(format!("graph over {n} neurons is disconnected")));
        }
        Ok(t)
    }

    /// `n` isolated neurons; the topology of an uncoupled run.
    pub fn empty(n: usize) -> Self {
        Self::from_set(n, BTreeSet::new())
    }

    fn from_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j) in &edges {
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { n, edges, adjacency }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn degree(&self, i: usize) -> Result<usize> {
        self.adjacency
            .get(i)
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidParameter(format!("neuron {i} out of range for n = {}", self.n)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Relabels neuron `i` as `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: perm.len() });
        }
        Self::from_edges(self.n, self.edges().map(|(i, j)| (perm[i], perm[j])))
    }

    /// One `i j` line per edge, sorted lexicographically.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }

    /// Git blob hash (SHA-1 of `"blob <len>\0" + edge list`) as lowercase hex.
    pub fn content_hash(&self) -> String {
        let body = self.to_edge_list();
        let mut hasher = Sha1::new();
        hasher.update(format!("blob {}\0", body.len()).as_bytes());
        hasher.update(body.as_bytes());
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn check_ring(n: usize, k: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("ring needs n >= 3, got {n}")));
    }
    if k == 0 || k % 2 != 0 {
        return Err(Error::InvalidParameter(format!("k must be a positive even number, got {k}")));
    }
    if k >= n {
        return Err(Error::InvalidParameter(format!("k ({k}) must be < n ({n})")));
    }
    Ok(())
}

/// Ring lattice: neuron `i` is joined to `i +- 1, ..., i +- k/2 (mod n)`.
pub fn regular_ring(n: usize, k: usize) -> Result<Topology> {
    check_ring(n, k)?;
    Topology::from_edges(n, ring_edges(n, k))
}

/// Ring edges in the canonical visiting order: ascending `i`, then ascending offset.
fn ring_edges(n: usize, k: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (1..=k / 2).map(move |off| (i, (i + off) % n)))
        .collect()
}

/// A Watts-Strogatz sample together with the seed that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallWorld {
    pub topology: Topology,
    /// `seed + r` where `r` counts rejected disconnected samples.
    pub accepted_seed: u64,
}

/// Watts-Strogatz rewiring of `regular_ring(n, k)`.
///
/// Each ring edge `(i, i + off)` is visited once in ascending `(i, off)` order
/// and, with probability `p`, its far endpoint is moved to a uniformly chosen
/// neuron that is neither `i` nor already adjacent to `i`. Disconnected
/// samples are discarded and the generator is reseeded with `seed + 1`,
/// `seed + 2`, ... The random stream is ChaCha8 seeded via `seed_from_u64`.
pub fn watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<SmallWorld> {
    check_ring(n, k)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("rewiring probability must lie in [0, 1], got {p}")));
    }
    for attempt in 0..MAX_RESEEDS {
        let accepted_seed = seed.wrapping_add(attempt);
        let topology = rewire_once(n, k, p, accepted_seed);
        if topology.is_connected() {
            return Ok(SmallWorld { topology, accepted_seed });
        }
    }
    Err(Error::InvalidParameter(format!(
        "no connected sample for n = {n}, k = {k}, p = {p} within {MAX_RESEEDS} seeds"
    )))
}

fn rewire_once(n: usize, k: usize, p: f64, seed: u64) -> Topology {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut adj = vec![BTreeSet::new(); n];
    let order = ring_edges(n, k);
    for &(i, j) in &order {
        edges.insert((i.min(j), i.max(j)));
        adj[i].insert(j);
        adj[j].insert(i);
    }
    for (i, j) in order {
        if !rng.gen_bool(p) {
            continue;
        }
        let candidates: Vec<usize> = (0..n).filter(|&r| r != i && !adj[i].contains(&r)).collect();
        if candidates.is_empty() {
            continue;
        }
        let r = candidates[rng.gen_range(0..candidates.len())];
        edges.remove(&(i.min(j), i.max(j)));
        adj[i].remove(&j);
        adj[j].remove(&i);
        edges.insert((i.min(r), i.max(r)));
        adj[i].insert(r);
        adj[r].insert(i);
    }
    Topology::from_set(n, edges)
}

/// Parses the edge-list format: two whitespace-separated zero-based indices per
/// line, `#` starts a comment, blank lines ignored.
///
/// With `n = None` the neuron count is the largest index plus one. The result
/// must be a connected simple graph.
pub fn load_edge_list(text: &str, n: Option<usize>) -> Result<Topology> {
    let mut pairs = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line: line_no, message: format!("expected two indices, found {}", fields.len()) });
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line: line_no, message: format!("'{s}' is not a non-negative integer") })
        };
        let (i, j) = (parse(fields[0])?, parse(fields[1])?);
        if i == j {
            return Err(Error::Parse { line: line_no, message: format!("self-loop at {i}") });
        }
        if let Some(n) = n {
            if i >= n || j >= n {
                return Err(Error::Parse { line: line_no, message: format!("index out of range for n = {n}") });
            }
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::Parse { line: line_no, message: format!("duplicate edge ({i}, {j})") });
        }
        pairs.push((i, j, line_no));
    }
    let n = n.unwrap_or_else(|| pairs.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0));
    let last_line = pairs.last().map_or(0, |p| p.2);
    let topology = Topology::from_edges(n, pairs.into_iter().map(|(i, j, _)| (i, j)))?;
    if !topology.is_connected() {
        return Err(Error::Parse { line: last_line, message: format!("graph over {n} neurons is disconnected") });
    }
    Ok(topology)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_ring() {
        let t = regular_ring(7, 4).unwrap();
        assert_eq!(t.edge_count(), 14);
        assert!(t.degrees().iter().all(|&d| d == 4));
        assert_eq!(t.neighbors(6), &[0, 1, 4, 5]);
        assert_eq!(t.degree(3).unwrap(), 4);
        assert!(t.degree(7).is_err());
    }

    #[test]
    fn small_rings() {
        let tri = regular_ring(3, 2).unwrap();
        assert_eq!(tri.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        let k7 = regular_ring(7, 6).unwrap();
        assert_eq!(k7.edge_count(), 21);
    }

    #[test]
    fn ring_rejects_bad_k() {
        assert!(regular_ring(7, 3).is_err());
        assert!(regular_ring(7, 8).is_err());
        assert!(regular_ring(4, 4).is_err());
        assert!(regular_ring(2, 2).is_err());
    }

    #[test]
    fn zero_rewiring_is_the_ring() {
        for seed in 0..20 {
            let sw = watts_strogatz(9, 4, 0.0, seed).unwrap();
            assert_eq!(sw.topology, regular_ring(9, 4).unwrap());
            assert_eq!(sw.accepted_seed, seed);
        }
    }

    #[test]
    fn rewiring_is_deterministic() {
        let a = watts_strogatz(7, 4, 0.5, 42).unwrap();
        let b = watts_strogatz(7, 4, 0.5, 42).unwrap();
        assert_eq!(a, b);
        assert!(watts_strogatz(7, 4, 1.5, 0).is_err());
    }

    #[test]
    fn parse_triangle() {
        let t = load_edge_list("0 1\n1 2\n2 0\n", None).unwrap();
        assert_eq!(t.n(), 3);
        assert!(t.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            load_edge_list("# loop\n0 0\n", None).unwrap_err(),
            Error::Parse { line: 2, message: "self-loop at 0".into() }
        );
        assert!(matches!(load_edge_list("0 1\n1 0\n", None), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("0 1\n1 5\n", Some(3)), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("0 1\n2 3\n", None), Err(Error::Parse { .. })));
        assert!(matches!(load_edge_list("0 x\n", None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_edge_list("0 1 2\n", None), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn comments_and_blanks() {
        let t = load_edge_list("# header\n\n0 1   # first\n 1 2\n", None).unwrap();
        assert_eq!(t.edge_count(), 2);
    }

    #[test]
    fn ring_round_trip() {
        let ring = regular_ring(7, 4).unwrap();
        let text = ring.to_edge_list();
        assert_eq!(text.lines().count(), 14);
        assert_eq!(load_edge_list(&text, Some(7)).unwrap(), ring);
    }

    #[test]
    fn hash_is_git_blob_hash() {
        // `printf '0 1\n' | git hash-object --stdin`
        let t = Topology::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(t.content_hash(), "6e8183b72e5ed9b26e9e2c64bb6bc849b23b0690");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rewiring_preserves_shape(n in 5usize..25, half_k in 1usize..3, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let k = 2 * half_k;
            prop_assume!(k < n);
            let sw = watts_strogatz(n, k, p, seed).unwrap();
            let t = &sw.topology;
            prop_assert_eq!(t.n(), n);
            prop_assert_eq!(t.edge_count(), n * k / 2);
            prop_assert!(t.is_connected());
            prop_assert_eq!(t.degrees().iter().sum::<usize>(), 2 * t.edge_count());
            prop_assert!(t.edges().all(|(i, j)| i < j));
        }

        #[test]
        fn edge_list_round_trip(n in 5usize..20, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let t = watts_strogatz(n, 4, p, seed).unwrap().topology;
            prop_assert_eq!(load_edge_list(&t.to_edge_list(), Some(n)).unwrap(), t);
        }
    }
}
