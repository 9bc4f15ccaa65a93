//! Whole-network runs and the coupled/uncoupled pair used for spike-time differences.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{step, IntegratorConfig, SpikeTrain};
use crate::neuron::{NeuronParams, NeuronState};
use crate::topology::Topology;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    /// Whether spikes incremented the spiking neuron's `g`.
    pub coupled: bool,
    pub n_neurons: usize,
    pub n_edges: usize,
    pub topology_hash: String,
    /// Seed that produced the topology, when it was generated.
    pub seed: Option<u64>,
    /// Number of `g_exc` increments applied.
    pub g_increments: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct NetworkRun {
    pub topology: Topology,
    pub params: NeuronParams,
    pub initial_v: Vec<f64>,
    pub cfg: IntegratorConfig,
    /// One train per neuron, index-aligned with the topology.
    pub trains: Vec<SpikeTrain>,
    pub metadata: RunMetadata,
}

impl NetworkRun {
    pub fn n(&self) -> usize {
        self.trains.len()
    }

    pub fn total_spikes(&self) -> usize {
        self.trains.iter().map(SpikeTrain::len).sum()
    }
}

/// Integrates the coupled network from `V = initial_v`, `w = g = 0`.
pub fn simulate_network(
    topology: &Topology,
    params: &NeuronParams,
    initial_v: &[f64],
    cfg: &IntegratorConfig,
) -> Result<NetworkRun> {
    run(topology, params, initial_v, cfg, true)
}

/// Runs the network twice with identical inputs: once coupled through
/// `topology`, once as isolated neurons without `g` increments.
pub fn paired_run(
    topology: &Topology,
    params: &NeuronParams,
    initial_v: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(NetworkRun, NetworkRun)> {
    let coupled = run(topology, params, initial_v, cfg, true)?;
    let uncoupled = run(&Topology::empty(topology.n()), params, initial_v, cfg, false)?;
    Ok((coupled, uncoupled))
}

fn run(
    topology: &Topology,
    params: &NeuronParams,
    initial_v: &[f64],
    cfg: &IntegratorConfig,
    coupled: bool,
) -> Result<NetworkRun> {
    params.validate()?;
    cfg.validate()?;
    let n = topology.n();
    if initial_v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: initial_v.len() });
    }
    if let Some(i) = initial_v.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidState(format!("initial V of neuron {i} is not finite")));
    }
    let warnings: Vec<String> = initial_v
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < params.e_l || v > params.v_t)
        .map(|(i, v)| format!("initial V of neuron {i} ({v} mV) lies outside [E_L, V_T]"))
        .collect();

    let mut states: Vec<NeuronState> = initial_v.iter().map(|&v| NeuronState::at_potential(v)).collect();
    let mut trains: Vec<SpikeTrain> = (0..n).map(|i| SpikeTrain::new(i, Vec::new())).collect();
    let mut coupling = vec![0.0; n];
    let mut g_increments = 0;
    for k in 0..cfg.n_steps() {
        let t = k as f64 * cfg.dt;
        for (i, c) in coupling.iter_mut().enumerate() {
            *c = topology.neighbors(i).iter().map(|&j| states[j].g).sum();
        }
        for spike in step(&mut states, params, &coupling, cfg, t, coupled)? {
            trains[spike.neuron].times.push(spike.time);
            if coupled {
                g_increments += 1;
            }
        }
    }

    Ok(NetworkRun {
        topology: topology.clone(),
        params: *params,
        initial_v: initial_v.to_vec(),
        cfg: *cfg,
        trains,
        metadata: RunMetadata {
            coupled,
            n_neurons: n,
            n_edges: topology.edge_count(),
            topology_hash: topology.content_hash(),
            seed: None,
            g_increments,
            warnings,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::simulate_single;
    use crate::topology::regular_ring;

    fn short() -> IntegratorConfig {
        IntegratorConfig { t_end: 400.0, ..Default::default() }
    }

    #[test]
    fn empty_topology_matches_single_runs() {
        let p = NeuronParams::default();
        let v0 = [-70.6, -65.0, -60.0, -55.0, -52.0, -68.0, -63.3];
        let run = simulate_network(&Topology::empty(7), &p, &v0, &short()).unwrap();
        for (i, &v) in v0.iter().enumerate() {
            let (single, _) = simulate_single(&p, v, 0.0, &short()).unwrap();
            assert_eq!(run.trains[i].times, single.times, "neuron {i}");
        }
    }

    #[test]
    fn equal_start_two_nodes_stay_identical() {
        let t = Topology::connected(2, [(0, 1)]).unwrap();
        let run = simulate_network(&t, &NeuronParams::default(), &[-60.0, -60.0], &short()).unwrap();
        assert!(!run.trains[0].is_empty());
        assert_eq!(run.trains[0].times, run.trains[1].times);
    }

    #[test]
    fn increments_match_spikes() {
        let t = regular_ring(7, 4).unwrap();
        let v0 = [-63.3, -69.7, -70.0, -63.4, -64.6, -55.7, -52.0];
        let (c, u) = paired_run(&t, &NeuronParams::default(), &v0, &short()).unwrap();
        assert_eq!(c.metadata.g_increments, c.total_spikes());
        assert_eq!(u.metadata.g_increments, 0);
        assert!(c.metadata.coupled && !u.metadata.coupled);
        assert_eq!(u.metadata.n_edges, 0);
    }

    #[test]
    fn dimension_mismatch() {
        let t = regular_ring(7, 4).unwrap();
        let err = simulate_network(&t, &NeuronParams::default(), &[-60.0; 6], &short()).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 7, got: 6 });
    }

    #[test]
    fn out_of_range_start_warns() {
        let t = Topology::connected(2, [(0, 1)]).unwrap();
        let cfg = IntegratorConfig { t_end: 10.0, ..Default::default() };
        let run = simulate_network(&t, &NeuronParams::default(), &[-80.0, -60.0], &cfg).unwrap();
        assert_eq!(run.metadata.warnings.len(), 1);
        assert!(run.metadata.warnings[0].contains("neuron 0"));
    }
}
