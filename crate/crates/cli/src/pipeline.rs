//! Analysis chains shared by the commands and the acceptance suite.

use anyhow::{Context, Result};
use serde::Serialize;

use burstlab::hierarchy::{
    build_propagation_graph, detect_primary, grade_layers, predict_order, verify_hierarchy, HierarchyReport,
    PredictedOrder, PropagationGraph,
};
use burstlab::integrator::{simulate_single, IntegratorConfig, SpikeTrain};
use burstlab::metrics::{
    classify_firing, common_burst_size, cv, locked_phase, segment_bursts, stabilized_delta, stabilized_portion, td,
    FiringPattern, LockedPhase, Normalization, SyncTrace, TdTrace,
};
use burstlab::neuron::NeuronParams;
use burstlab::simulate::{paired_run, simulate_network, NetworkRun};
use burstlab::topology::Topology;
use burstlab::Error;

#[derive(Debug, Clone, Serialize)]
pub struct SingleSummary {
    pub n_spikes: usize,
    pub cv: Option<f64>,
    /// `spiking`, `bursting` or `silent` (fewer than three stabilized spikes).
    pub class: String,
    pub k: Option<usize>,
    /// One stabilized cycle of ISIs (ms), when bursts were segmented.
    pub cycle_isis: Option<Vec<f64>>,
}

pub fn summarize_single(train: &SpikeTrain, t_end: f64) -> Result<SingleSummary> {
    let stable = stabilized_portion(train, t_end);
    let cv_value = match cv(&stable) {
        Ok(c) => Some(c),
        Err(Error::InsufficientData(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let class = match cv_value {
        None => "silent".to_string(),
        Some(c) => classify_firing(c).as_str().to_string(),
    };
    let seg = segment_bursts(&stable).ok();
    let cycle_isis = seg.as_ref().and_then(|s| {
        let start = *s.boundaries.first()?;
        let isis = stable.isis();
        isis.get(start..start + s.k).map(<[f64]>::to_vec)
    });
    Ok(SingleSummary { n_spikes: train.len(), cv: cv_value, class, k: seg.map(|s| s.k), cycle_isis })
}

pub fn run_single(params: &NeuronParams, v0: f64, w0: f64, cfg: &IntegratorConfig) -> Result<(SpikeTrain, SingleSummary)> {
    let (train, _) = simulate_single(params, v0, w0, cfg)?;
    let summary = summarize_single(&train, cfg.t_end)?;
    Ok((train, summary))
}

/// Classification of one cell of the `(V_r, I)` plane.
pub fn classify_cell(base: &NeuronParams, v_reset: f64, i_ext: f64, cfg: &IntegratorConfig) -> Result<(Option<f64>, String)> {
    let params = NeuronParams { v_reset, i_ext, ..*base };
    let (_, s) = run_single(&params, params.e_l, 0.0, cfg)?;
    Ok((s.cv, s.class))
}

#[derive(Debug, Clone, Serialize)]
pub struct SyncAnalysis {
    pub k: usize,
    pub normalization: Normalization,
    pub trace: SyncTrace,
    pub locked: LockedPhase,
}

pub fn analyse_sync(trains: &[SpikeTrain], t_end: f64, norm: Normalization) -> Result<SyncAnalysis> {
    let k = common_burst_size(trains, t_end).context("burst size")?;
    let trace = stabilized_delta(trains, k, norm)?;
    let locked = locked_phase(trains, k)?;
    Ok(SyncAnalysis { k, normalization: norm, trace, locked })
}

pub struct NetAnalysis {
    pub run: NetworkRun,
    pub sync: SyncAnalysis,
}

pub fn run_net(
    topology: &Topology,
    params: &NeuronParams,
    initial_v: &[f64],
    cfg: &IntegratorConfig,
    norm: Normalization,
) -> Result<NetAnalysis> {
    let run = simulate_network(topology, params, initial_v, cfg)?;
    let sync = analyse_sync(&run.trains, cfg.t_end, norm)?;
    Ok(NetAnalysis { run, sync })
}

pub struct PairAnalysis {
    pub coupled: NetworkRun,
    pub uncoupled: NetworkRun,
    pub sync: SyncAnalysis,
    pub td: Vec<TdTrace>,
}

impl PairAnalysis {
    pub fn stabilized_td(&self) -> Vec<Option<f64>> {
        self.td.iter().map(|t| t.stabilized_td).collect()
    }
}

pub fn run_pair(
    topology: &Topology,
    params: &NeuronParams,
    initial_v: &[f64],
    cfg: &IntegratorConfig,
    norm: Normalization,
) -> Result<PairAnalysis> {
    let (coupled, uncoupled) = paired_run(topology, params, initial_v, cfg)?;
    let sync = analyse_sync(&coupled.trains, cfg.t_end, norm)?;
    let td = (0..coupled.n()).map(|i| td(&coupled.trains, &uncoupled.trains, i)).collect::<burstlab::Result<Vec<_>>>()?;
    Ok(PairAnalysis { coupled, uncoupled, sync, td })
}

#[derive(Debug, Clone, Serialize)]
pub struct HierarchyAnalysis {
    pub primary: Vec<usize>,
    pub graph: PropagationGraph,
    pub predicted: PredictedOrder,
    pub report: HierarchyReport,
}

pub fn analyse_hierarchy(topology: &Topology, initial_v: &[f64], pair: &PairAnalysis, tau_primary: f64) -> Result<HierarchyAnalysis> {
    let stabilized = pair.stabilized_td();
    let primary = detect_primary(initial_v, &stabilized, tau_primary)?;
    let graph = build_propagation_graph(topology, &grade_layers(topology, &primary)?)?;
    let first = pair.sync.locked.first_spikes();
    let predicted = predict_order(&graph, initial_v, &first)?;
    let report = verify_hierarchy(&graph, &pair.sync.locked, &stabilized, &predicted)?;
    Ok(HierarchyAnalysis { primary, graph, predicted, report })
}

/// Two coupled neurons started at `v0` and `v0 - diff`: `(delta(1), stabilized delta)` in seconds.
pub fn toy_point(params: &NeuronParams, cfg: &IntegratorConfig, v0: f64, diff: f64) -> Result<(f64, Option<f64>)> {
    let pair = Topology::connected(2, [(0, 1)])?;
    let run = simulate_network(&pair, params, &[v0, v0 - diff], cfg)?;
    let k = common_burst_size(&run.trains, cfg.t_end)?;
    let trace = stabilized_delta(&run.trains, k, Normalization::NMinusOne)?;
    Ok((trace.delta_series[0], trace.stabilized))
}

pub fn class_is_bursting(class: &str) -> bool {
    class == FiringPattern::Bursting.as_str()
}
