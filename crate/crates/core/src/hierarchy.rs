//! Spiking hierarchy: primary neurons, breadth-first layers, the directed
//! propagation graph and within-layer order rules.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{LockedPhase, TAU_SAME};
use crate::topology::Topology;

/// Default `|TD|` bound (ms) below which a neuron counts as unaffected by the network.
pub const TAU_PRIMARY: f64 = 0.1;

/// Longest prefix of the neurons sorted by initial potential (descending,
/// ties by index) whose stabilized TD satisfies `|TD| < tau_primary`.
///
/// A missing TD (never stabilized) ends the prefix.
pub fn detect_primary(initial_v: &[f64], stabilized_td: &[Option<f64>], tau_primary: f64) -> Result<Vec<usize>> {
    if initial_v.len() != stabilized_td.len() {
        return Err(Error::DimensionMismatch { expected: initial_v.len(), got: stabilized_td.len() });
    }
    if !(tau_primary > 0.0) {
        return Err(Error::InvalidParameter(format!("tau_primary must be > 0, got {tau_primary}")));
    }
    let order = by_potential(initial_v);
    let primary: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&i| stabilized_td[i].is_some_and(|td| td.abs() < tau_primary))
        .collect();
    match order.first() {
        None => Err(Error::NoPrimary("empty network".into())),
        Some(&top) if primary.is_empty() => Err(Error::NoPrimary(match stabilized_td[top] {
            Some(td) => format!(
                "highest-potential neuron {top} ({} mV) has TD = {td:.4} ms, |TD| >= {tau_primary} ms",
                initial_v[top]
            ),
            None => format!("highest-potential neuron {top} has no stabilized TD"),
        })),
        Some(_) => {
            let mut primary = primary;
            primary.sort_unstable();
            Ok(primary)
        }
    }
}

fn by_potential(initial_v: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..initial_v.len()).collect();
    order.sort_by(|&a, &b| initial_v[b].total_cmp(&initial_v[a]).then(a.cmp(&b)));
    order
}

/// Breadth-first layers from the primary set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layering {
    /// `layers[0]` is the primary set; each layer sorted by index.
    pub layers: Vec<Vec<usize>>,
    pub layer_of: Vec<usize>,
}

pub fn grade_layers(topology: &Topology, primary: &[usize]) -> Result<Layering> {
    let n = topology.n();
    if primary.is_empty() {
        return Err(Error::InvalidParameter("primary set is empty".into()));
    }
    let mut layer_of = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &p in primary {
        if p >= n {
            return Err(Error::InvalidParameter(format!("primary neuron {p} out of range (N = {n})")));
        }
        if layer_of[p] == 0 {
            return Err(Error::InvalidParameter(format!("primary neuron {p} listed twice")));
        }
        layer_of[p] = 0;
        queue.push_back(p);
    }
    while let Some(u) = queue.pop_front() {
        for &v in topology.neighbors(u) {
            if layer_of[v] == usize::MAX {
                layer_of[v] = layer_of[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if let Some(lost) = layer_of.iter().position(|&l| l == usize::MAX) {
        return Err(Error::Internal(format!("neuron {lost} is unreachable from the primary set")));
    }
    let depth = layer_of.iter().max().map_or(0, |m| m + 1);
    let mut layers = vec![Vec::new(); depth];
    for (i, &l) in layer_of.iter().enumerate() {
        layers[l].push(i);
    }
    Ok(Layering { layers, layer_of })
}

/// Layered directed graph along topology edges between adjacent layers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropagationGraph {
    pub layers: Vec<Vec<usize>>,
    pub layer_of: Vec<usize>,
    /// `(u, v)` with `layer_of[v] == layer_of[u] + 1`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// Number of in-edges from the layer above; `None` for primary neurons.
    pub dr: Vec<Option<usize>>,
    /// Degree in the undirected topology.
    pub degree: Vec<usize>,
    /// Upper-layer neighbors of each neuron, sorted.
    pub upstream: Vec<Vec<usize>>,
}

pub fn build_propagation_graph(topology: &Topology, layering: &Layering) -> Result<PropagationGraph> {
    let n = topology.n();
    if layering.layer_of.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: layering.layer_of.len() });
    }
    let layer_of = &layering.layer_of;
    let mut edges = Vec::new();
    let mut upstream = vec![Vec::new(); n];
    for (a, b) in topology.edges() {
        let (u, v) = match (layer_of[a], layer_of[b]) {
            (la, lb) if lb == la + 1 => (a, b),
            (la, lb) if la == lb + 1 => (b, a),
            (la, lb) if la == lb => continue,
            (la, lb) => {
                return Err(Error::InvalidParameter(format!(
                    "edge {a}-{b} spans layers {la} and {lb}; not a breadth-first layering"
                )))
            }
        };
        edges.push((u, v));
        upstream[v].push(u);
    }
    edges.sort_unstable();
    for up in &mut upstream {
        up.sort_unstable();
    }
    let dr = (0..n)
        .map(|v| {
            if layer_of[v] == 0 {
                Ok(None)
            } else if upstream[v].is_empty() {
                Err(Error::InvalidParameter(format!("neuron {v} has no upstream neighbor")))
            } else {
                Ok(Some(upstream[v].len()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PropagationGraph {
        layers: layering.layers.clone(),
        layer_of: layer_of.clone(),
        edges,
        dr,
        degree: topology.degrees(),
        upstream,
    })
}

impl PropagationGraph {
    pub fn n(&self) -> usize {
        self.layer_of.len()
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.edges.iter().filter(|(a, _)| *a == u).count()
    }

    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |(a, _)| *a == u).map(|(_, b)| *b)
    }

    /// Identical upstream sets, or upstream first-spike multisets equal within [`TAU_SAME`].
    pub fn same_stimuli(&self, u: usize, v: usize, first_spike: &[f64]) -> bool {
        let (a, b) = (&self.upstream[u], &self.upstream[v]);
        if a == b {
            return true;
        }
        if a.len() != b.len() {
            return false;
        }
        let sorted = |ids: &[usize]| {
            let mut t: Vec<f64> = ids.iter().map(|&i| first_spike[i]).collect();
            t.sort_by(f64::total_cmp);
            t
        };
        sorted(a).iter().zip(sorted(b)).all(|(x, y)| (x - y).abs() <= TAU_SAME)
    }

    /// DOT rendering: one `rank=same` subgraph per layer, `layer`, `dr` and `d` as node attributes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph propagation {\n  rankdir=TB;\n");
        for (m, layer) in self.layers.iter().enumerate() {
            let _ = writeln!(out, "  subgraph layer_{m} {{\n    rank=same;");
            for &v in layer {
                let dr = self.dr[v].map_or("-".to_string(), |d| d.to_string());
                let _ = writeln!(
                    out,
                    "    n{v} [label=\"{v}\", layer={m}, dr=\"{dr}\", d={}];",
                    self.degree[v]
                );
            }
            out.push_str("  }\n");
        }
        for (u, v) in &self.edges {
            let _ = writeln!(out, "  n{u} -> n{v};");
        }
        out.push_str("}\n");
        out
    }
}

/// Predicted weak order per layer: `order[m]` lists tie classes, earliest first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictedOrder {
    pub order: Vec<Vec<Vec<usize>>>,
}

impl PredictedOrder {
    /// Position of the tie class holding `v` within its layer.
    pub fn rank(&self, v: usize) -> Option<(usize, usize)> {
        self.order
            .iter()
            .enumerate()
            .find_map(|(m, classes)| classes.iter().position(|c| c.contains(&v)).map(|r| (m, r)))
    }
}

/// Within-layer order from `(dr desc, degree asc among equal stimuli, mean upstream first spike asc)`.
///
/// `first_spike[i]` is neuron `i`'s first spike in the locked burst (ms); only
/// entries of non-bottom layers are read. Layer 0 is ordered by initial potential.
pub fn predict_order(graph: &PropagationGraph, initial_v: &[f64], first_spike: &[f64]) -> Result<PredictedOrder> {
    let n = graph.n();
    if initial_v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: initial_v.len() });
    }
    if first_spike.len() != n {
        return Err(Error::InsufficientData(format!(
            "upstream first-spike times for {} of {n} neurons",
            first_spike.len()
        )));
    }
    let feeding = &graph.layers[..graph.layers.len().saturating_sub(1)];
    if let Some(&i) = feeding.iter().flatten().find(|&&i| !first_spike[i].is_finite()) {
        return Err(Error::InsufficientData(format!("first-spike time of upstream neuron {i} is not finite")));
    }

    let mut order = Vec::with_capacity(graph.layers.len());
    let mut top = Vec::<Vec<usize>>::new();
    for &i in &by_potential(initial_v).iter().copied().filter(|&i| graph.layer_of[i] == 0).collect::<Vec<_>>() {
        match top.last_mut() {
            Some(class) if initial_v[class[0]] == initial_v[i] => class.push(i),
            _ => top.push(vec![i]),
        }
    }
    order.push(top);

    for layer in &graph.layers[1..] {
        order.push(order_layer(graph, layer, first_spike));
    }
    for classes in &mut order {
        for c in classes.iter_mut() {
            c.sort_unstable();
        }
    }
    Ok(PredictedOrder { order })
}

fn mean_upstream(graph: &PropagationGraph, v: usize, first_spike: &[f64]) -> f64 {
    let up = &graph.upstream[v];
    up.iter().map(|&u| first_spike[u]).sum::<f64>() / up.len() as f64
}

fn order_layer(graph: &PropagationGraph, layer: &[usize], first_spike: &[f64]) -> Vec<Vec<usize>> {
    // stimulus classes: connected components of the same-stimuli relation among equal-dr neurons
    let mut class = vec![usize::MAX; graph.n()];
    let mut class_time = Vec::new();
    for &v in layer {
        if class[v] != usize::MAX {
            continue;
        }
        let id = class_time.len();
        let mut members = vec![v];
        class[v] = id;
        let mut cursor = 0;
        while cursor < members.len() {
            let a = members[cursor];
            cursor += 1;
            for &b in layer {
                if class[b] == usize::MAX && graph.dr[a] == graph.dr[b] && graph.same_stimuli(a, b, first_spike) {
                    class[b] = id;
                    members.push(b);
                }
            }
        }
        let t = members.iter().map(|&m| mean_upstream(graph, m, first_spike)).sum::<f64>() / members.len() as f64;
        class_time.push(t);
    }

    let key = |v: usize| {
        (
            std::cmp::Reverse(graph.dr[v].unwrap_or(0)),
            class_time[class[v]],
            class[v],
            graph.degree[v],
            mean_upstream(graph, v, first_spike),
        )
    };
    let mut sorted = layer.to_vec();
    sorted.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(ka.2.cmp(&kb.2))
            .then(ka.3.cmp(&kb.3))
            .then(ka.4.total_cmp(&kb.4))
            .then(a.cmp(&b))
    });

    // neighbours in the sorted list tie when they differ only by upstream timing within TAU_SAME
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in sorted {
        let joins = classes.last().is_some_and(|c| {
            let head = c[0];
            let (kh, kv) = (key(head), key(v));
            kh.0 == kv.0
                && kh.3 == kv.3
                && (kh.2 == kv.2 || (kh.1 - kv.1).abs() <= TAU_SAME)
                && (kh.4 - kv.4).abs() <= TAU_SAME
        });
        if joins {
            classes.last_mut().expect("non-empty").push(v);
        } else {
            classes.push(vec![v]);
        }
    }
    classes
}

/// A same-layer pair (or cross-layer edge) contradicting a rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Neuron expected to spike no later.
    pub early: usize,
    pub late: usize,
    /// Layer of `late`.
    pub layer: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyReport {
    pub layer_monotonicity: CheckResult,
    pub dr_rule: CheckResult,
    pub degree_rule: CheckResult,
    /// Neurons whose stabilized TD exceeds `+TAU_PRIMARY` (delayed by the network).
    pub delayed: Vec<(usize, f64)>,
    /// Observed co-spiking groups that fall inside one predicted tie class.
    pub groups_consistent: bool,
}

impl HierarchyReport {
    pub fn all_passed(&self) -> bool {
        self.layer_monotonicity.passed() && self.dr_rule.passed() && self.degree_rule.passed()
    }
}

/// Checks the observed locked burst against the layering and the order rules.
///
/// Times are first spikes of the locked burst; "no later" allows [`TAU_SAME`].
pub fn verify_hierarchy(
    graph: &PropagationGraph,
    locked: &LockedPhase,
    stabilized_td: &[Option<f64>],
    predicted: &PredictedOrder,
) -> Result<HierarchyReport> {
    let n = graph.n();
    if locked.relative_ms.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: locked.relative_ms.len() });
    }
    let first = locked.first_spikes();

    let mut mono = CheckResult { name: "layer_monotonicity".into(), pairs_checked: 0, violations: vec![] };
    let layer_min: Vec<f64> =
        graph.layers.iter().map(|l| l.iter().map(|&i| first[i]).fold(f64::INFINITY, f64::min)).collect();
    for m in 1..graph.layers.len() {
        mono.pairs_checked += 1;
        if !(layer_min[m - 1] < layer_min[m]) {
            let early = *graph.layers[m - 1].iter().min_by(|&&a, &&b| first[a].total_cmp(&first[b])).expect("layer");
            let late = *graph.layers[m].iter().min_by(|&&a, &&b| first[a].total_cmp(&first[b])).expect("layer");
            mono.violations.push(Violation {
                early,
                late,
                layer: m,
                detail: format!("layer {m} starts at {:.3} ms, not after layer {} ({:.3} ms)", layer_min[m], m - 1, layer_min[m - 1]),
            });
        }
    }
    for &(u, v) in &graph.edges {
        mono.pairs_checked += 1;
        if !(first[u] < first[v]) {
            mono.violations.push(Violation {
                early: u,
                late: v,
                layer: graph.layer_of[v],
                detail: format!("{u} -> {v}: {:.3} ms vs {:.3} ms", first[u], first[v]),
            });
        }
    }

    let mut dr_rule = CheckResult { name: "dr_rule".into(), pairs_checked: 0, violations: vec![] };
    let mut degree_rule = CheckResult { name: "degree_rule".into(), pairs_checked: 0, violations: vec![] };
    for (m, layer) in graph.layers.iter().enumerate().skip(1) {
        for (x, &a) in layer.iter().enumerate() {
            for &b in &layer[x + 1..] {
                let (da, db) = (graph.dr[a].unwrap_or(0), graph.dr[b].unwrap_or(0));
                if da != db {
                    let (hi, lo) = if da > db { (a, b) } else { (b, a) };
                    dr_rule.pairs_checked += 1;
                    if first[hi] > first[lo] + TAU_SAME {
                        dr_rule.violations.push(Violation {
                            early: hi,
                            late: lo,
                            layer: m,
                            detail: format!(
                                "dr {} > {} but {:.3} ms after {:.3} ms",
                                graph.dr[hi].unwrap_or(0),
                                graph.dr[lo].unwrap_or(0),
                                first[hi],
                                first[lo]
                            ),
                        });
                    }
                } else if graph.degree[a] != graph.degree[b] && graph.same_stimuli(a, b, &first) {
                    let (small, large) = if graph.degree[a] < graph.degree[b] { (a, b) } else { (b, a) };
                    degree_rule.pairs_checked += 1;
                    if first[small] > first[large] + TAU_SAME {
                        degree_rule.violations.push(Violation {
                            early: small,
                            late: large,
                            layer: m,
                            detail: format!(
                                "degree {} < {} but {:.3} ms after {:.3} ms",
                                graph.degree[small], graph.degree[large], first[small], first[large]
                            ),
                        });
                    }
                }
            }
        }
    }

    let delayed = stabilized_td
        .iter()
        .enumerate()
        .filter_map(|(i, td)| td.filter(|&t| t >= TAU_PRIMARY).map(|t| (i, t)))
        .collect();
    let groups_consistent = locked.groups.iter().all(|g| {
        let ranks: Vec<_> = g.iter().map(|&v| predicted.rank(v)).collect();
        ranks.windows(2).all(|w| w[0] == w[1])
    });

    Ok(HierarchyReport { layer_monotonicity: mono, dr_rule, degree_rule, delayed, groups_consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::locked_phase_at;
    use crate::integrator::SpikeTrain;
    use crate::topology::regular_ring;

    fn case1_graph() -> PropagationGraph {
        let ring = regular_ring(7, 4).unwrap();
        build_propagation_graph(&ring, &grade_layers(&ring, &[6]).unwrap()).unwrap()
    }

    #[test]
    fn prefix_rule() {
        let v = [-63.3, -69.7, -70.0, -63.4, -64.6, -55.7, -52.0];
        let td = [Some(-3.0), Some(-4.0), Some(-5.0), Some(-3.0), Some(-3.5), Some(-1.2), Some(0.01)];
        assert_eq!(detect_primary(&v, &td, TAU_PRIMARY).unwrap(), vec![6]);
        let v4 = [-51.0, -57.8, -65.1, -57.0, -56.9, -56.5, -51.3];
        let td4 = [Some(0.0), Some(-1.0), Some(-2.0), Some(-1.0), Some(-1.0), Some(-1.0), Some(0.0)];
        assert_eq!(detect_primary(&v4, &td4, TAU_PRIMARY).unwrap(), vec![0, 6]);
        // a low-potential neuron with TD = 0 stays out
        let td_low = [Some(-3.0), Some(-4.0), Some(0.0), Some(-3.0), Some(-3.5), Some(-1.2), Some(0.0)];
        assert_eq!(detect_primary(&v, &td_low, TAU_PRIMARY).unwrap(), vec![6]);
        assert_eq!(detect_primary(&[-60.0], &[Some(0.0)], TAU_PRIMARY).unwrap(), vec![0]);
    }

    #[test]
    fn no_primary_when_top_is_delayed() {
        let err = detect_primary(&[-52.0, -60.0], &[Some(0.8), Some(0.0)], TAU_PRIMARY).unwrap_err();
        assert!(matches!(err, Error::NoPrimary(_)));
        assert!(matches!(detect_primary(&[-52.0], &[None], TAU_PRIMARY), Err(Error::NoPrimary(_))));
    }

    #[test]
    fn case1_layers() {
        let ring = regular_ring(7, 4).unwrap();
        let l = grade_layers(&ring, &[6]).unwrap();
        assert_eq!(l.layers, vec![vec![6], vec![0, 1, 4, 5], vec![2, 3]]);
    }

    #[test]
    fn every_rotation_of_the_ring() {
        let ring = regular_ring(7, 4).unwrap();
        for p in 0..7 {
            let l = grade_layers(&ring, &[p]).unwrap();
            let mut second: Vec<usize> = [1, 2, 5, 6].iter().map(|o| (p + o) % 7).collect();
            let mut third: Vec<usize> = [3, 4].iter().map(|o| (p + o) % 7).collect();
            second.sort_unstable();
            third.sort_unstable();
            assert_eq!(l.layers, vec![vec![p], second, third], "primary {p}");
        }
    }

    #[test]
    fn complete_graph_has_two_layers() {
        let k7 = regular_ring(7, 6).unwrap();
        assert_eq!(grade_layers(&k7, &[3]).unwrap().layers.len(), 2);
        let all: Vec<usize> = (0..7).collect();
        let single = grade_layers(&k7, &all).unwrap();
        assert_eq!(single.layers.len(), 1);
        let g = build_propagation_graph(&k7, &single).unwrap();
        assert!(g.edges.is_empty());
    }

    #[test]
    fn case1_propagation_graph() {
        let g = case1_graph();
        assert_eq!(g.dr[2], Some(3));
        assert_eq!(g.dr[3], Some(3));
        assert_eq!(g.dr[6], None);
        assert_eq!(g.out_degree(0), 1);
        assert_eq!(g.out_degree(5), 1);
        assert_eq!(g.out_degree(1), 2);
        assert_eq!(g.out_degree(4), 2);
        let total: usize = g.dr.iter().flatten().sum();
        assert_eq!(total, g.edges.len());
    }

    #[test]
    fn dot_has_ranked_layers() {
        let dot = case1_graph().to_dot();
        assert_eq!(dot.matches("rank=same").count(), 3);
        assert!(dot.contains("n6 -> n0;"));
        assert!(dot.contains("n2 [label=\"2\", layer=2, dr=\"3\", d=4];"));
    }

    fn locked_from_first(first: &[f64]) -> LockedPhase {
        let trains: Vec<SpikeTrain> =
            first.iter().enumerate().map(|(i, &t)| SpikeTrain::new(i, vec![t, t + 0.6, t + 1.5])).collect();
        locked_phase_at(&trains, 3, 1).unwrap()
    }

    #[test]
    fn case1_prediction_and_verification() {
        let g = case1_graph();
        let v = [-63.3, -69.7, -70.0, -63.4, -64.6, -55.7, -52.0];
        let first = [3.56, 3.46, 6.5, 6.5, 3.46, 3.56, 0.0];
        let pred = predict_order(&g, &v, &first).unwrap();
        assert_eq!(pred.order[0], vec![vec![6]]);
        assert_eq!(pred.order[1], vec![vec![0, 1, 4, 5]]);
        assert_eq!(pred.order[2], vec![vec![2, 3]]);
        let locked = locked_from_first(&first);
        let td = [Some(-1.0); 7];
        let report = verify_hierarchy(&g, &locked, &td, &pred).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert!(report.groups_consistent);
        assert!(report.delayed.is_empty());
    }

    #[test]
    fn dr_beats_degree() {
        // 0 primary; 1, 2 secondary; 3 sees both, 4 sees only 2
        let t = Topology::connected(5, [(0, 1), (0, 2), (1, 3), (2, 3), (2, 4)]).unwrap();
        let g = build_propagation_graph(&t, &grade_layers(&t, &[0]).unwrap()).unwrap();
        let pred = predict_order(&g, &[-52.0, -60.0, -60.0, -65.0, -65.0], &[0.0, 2.0, 2.0, f64::NAN, f64::NAN]).unwrap();
        assert_eq!(pred.order[2], vec![vec![3], vec![4]]);
    }

    #[test]
    fn degree_orders_equal_stimuli() {
        // star around 0 plus extra edges raising the degree of 2 and 3
        let t = Topology::connected(5, [(0, 1), (0, 2), (0, 3), (0, 4), (2, 3), (3, 4)]).unwrap();
        let g = build_propagation_graph(&t, &grade_layers(&t, &[0]).unwrap()).unwrap();
        let pred = predict_order(&g, &[-52.0, -65.0, -65.0, -65.0, -65.0], &[0.0; 5]).unwrap();
        assert_eq!(pred.order[1], vec![vec![1], vec![2, 4], vec![3]]);
    }

    #[test]
    fn missing_upstream_time_is_an_error() {
        let g = case1_graph();
        let v = [-63.3, -69.7, -70.0, -63.4, -64.6, -55.7, -52.0];
        let mut first = [0.0; 7];
        first[6] = f64::NAN;
        assert!(matches!(predict_order(&g, &v, &first), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn violations_are_reported() {
        let g = case1_graph();
        let v = [-63.3, -69.7, -70.0, -63.4, -64.6, -55.7, -52.0];
        // neuron 2 fires before its upstream neuron 0
        let first = [3.56, 3.46, 1.0, 6.5, 3.46, 3.56, 0.0];
        let pred = predict_order(&g, &v, &first).unwrap();
        let report = verify_hierarchy(&g, &locked_from_first(&first), &[Some(0.9), None, None, None, None, None, None], &pred).unwrap();
        assert!(!report.layer_monotonicity.passed());
        assert!(report.layer_monotonicity.violations.iter().any(|x| x.early == 0 && x.late == 2));
        assert_eq!(report.delayed, vec![(0, 0.9)]);
    }
}
