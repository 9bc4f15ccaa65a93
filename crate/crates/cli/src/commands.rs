use std::fmt::Write as _;

use anyhow::{anyhow, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use burstlab::integrator::simulate_single;
use burstlab::neuron::nullclines;
use burstlab::simulate::RunMetadata;

use crate::config::{Kind, Resolved};
use crate::output::{delta_csv, opt, raster_csv, spikes_csv, td_csv, OutputDir};
use crate::pipeline::{
    analyse_hierarchy, classify_cell, run_net, run_pair, summarize_single, toy_point, PairAnalysis, SyncAnalysis,
};

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a Resolved,
    runs: Vec<RunMetadata>,
    outputs: Vec<String>,
}

/// Runs the command named by `res.kind` and returns the files written.
pub fn run(res: &Resolved) -> Result<Vec<String>> {
    let mut out = OutputDir::create(&res.out_dir)?;
    let runs = match res.kind {
        Kind::Scan => scan(res, &mut out)?,
        Kind::Single => single(res, &mut out)?,
        Kind::Net => net(res, &mut out)?,
        Kind::Td => td(res, &mut out).map(|(runs, _)| runs)?,
        Kind::Hierarchy => hierarchy(res, &mut out)?,
        Kind::ToySweep => toy_sweep(res, &mut out)?,
    };
    let mut outputs = out.written().to_vec();
    outputs.push("metadata.json".into());
    let meta = Metadata {
        tool: "burstlab",
        version: env!("CARGO_PKG_VERSION"),
        command: res.kind.as_str(),
        config: res,
        runs,
        outputs: outputs.clone(),
    };
    out.write_json("metadata.json", &meta)?;
    Ok(outputs)
}

fn scan(res: &Resolved, out: &mut OutputDir) -> Result<Vec<RunMetadata>> {
    let grid = res.scan.as_ref().ok_or_else(|| anyhow!("scan grid missing"))?;
    let v_r = grid.v_reset.values()?;
    let i_ext = grid.i_ext.values()?;
    let cells: Vec<(f64, f64)> = v_r.iter().flat_map(|&v| i_ext.iter().map(move |&i| (v, i))).collect();
    let rows = cells
        .par_iter()
        .map(|&(v, i)| {
            classify_cell(&res.neuron, v, i, &res.integrator)
                .with_context(|| format!("scan cell V_r = {v} mV, I = {i} pA"))
                .map(|(c, class)| format!("{v},{i},{},{class}\n", opt(c, 6)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("V_r_mV,I_pA,CV,class\n");
    rows.iter().for_each(|r| csv.push_str(r));
    out.write("scan.csv", &csv)?;
    Ok(Vec::new())
}

fn single(res: &Resolved, out: &mut OutputDir) -> Result<Vec<RunMetadata>> {
    let sc = res.single.clone().unwrap_or_default();
    let v0 = sc.v0.unwrap_or(res.neuron.e_l);
    let (train, trajectory) = simulate_single(&res.neuron, v0, sc.w0, &res.integrator)?;
    let summary = summarize_single(&train, res.integrator.t_end)?;
    out.write("spikes.csv", &spikes_csv(std::slice::from_ref(&train)))?;
    out.write_json("summary.json", &summary)?;
    if let Some(tr) = trajectory {
        let mut csv = String::from("t_ms,V_mV,w_pA\n");
        for p in &tr {
            let _ = writeln!(csv, "{:.4},{:.6},{:.6}", p.t, p.v, p.w);
        }
        out.write("trajectory.csv", &csv)?;
        let samples: Vec<f64> = (0..=400).map(|i| -80.0 + 0.1 * i as f64).collect();
        let (vn, wn) = nullclines(&res.neuron, &samples);
        let mut csv = String::from("V_mV,w_Vnull_pA,w_wnull_pA\n");
        for ((v, a), b) in samples.iter().zip(&vn).zip(&wn) {
            let _ = writeln!(csv, "{v:.1},{a:.6},{b:.6}");
        }
        out.write("nullclines.csv", &csv)?;
    }
    Ok(Vec::new())
}

fn write_sync(res: &Resolved, out: &mut OutputDir, trains: &[burstlab::integrator::SpikeTrain], sync: &SyncAnalysis) -> Result<()> {
    out.write("delta.csv", &delta_csv(&sync.trace.delta_series))?;
    out.write_json("sync.json", &sync.trace)?;
    out.write_json("locked_phase.json", &sync.locked)?;
    let mut bursts: Vec<usize> = sync.trace.stabilized_at.into_iter().collect();
    bursts.extend(res.analysis.raster_bursts.iter().copied());
    bursts.sort_unstable();
    bursts.dedup();
    for n in bursts {
        if let Some(csv) = raster_csv(trains, sync.k, n) {
            out.write(&format!("raster_burst_{n}.csv"), &csv)?;
        }
    }
    Ok(())
}

fn net(res: &Resolved, out: &mut OutputDir) -> Result<Vec<RunMetadata>> {
    let mut a = run_net(res.topology()?, &res.neuron, res.initial_v()?, &res.integrator, res.analysis.normalization)?;
    a.run.metadata.seed = res.topology.as_ref().and_then(|t| t.accepted_seed);
    out.write("spikes.csv", &spikes_csv(&a.run.trains))?;
    write_sync(res, out, &a.run.trains, &a.sync)?;
    Ok(vec![a.run.metadata])
}

fn write_td(res: &Resolved, out: &mut OutputDir, pair: &PairAnalysis) -> Result<()> {
    out.write("spikes_coupled.csv", &spikes_csv(&pair.coupled.trains))?;
    out.write("spikes_uncoupled.csv", &spikes_csv(&pair.uncoupled.trains))?;
    let initial_v = res.initial_v()?;
    let mut table = String::from("neuron_id,initial_V_mV,stabilized_td_ms,last_td_ms\n");
    for t in &pair.td {
        out.write(&format!("td/neuron_{}.csv", t.neuron_id), &td_csv(&t.td_series))?;
        let _ = writeln!(
            table,
            "{},{},{},{}",
            t.neuron_id,
            initial_v[t.neuron_id],
            opt(t.stabilized_td, 6),
            opt(t.td_series.last().copied(), 6)
        );
    }
    out.write("td_table.csv", &table)?;
    write_sync(res, out, &pair.coupled.trains, &pair.sync)
}

fn td(res: &Resolved, out: &mut OutputDir) -> Result<(Vec<RunMetadata>, PairAnalysis)> {
    let mut pair = run_pair(res.topology()?, &res.neuron, res.initial_v()?, &res.integrator, res.analysis.normalization)?;
    let seed = res.topology.as_ref().and_then(|t| t.accepted_seed);
    pair.coupled.metadata.seed = seed;
    pair.uncoupled.metadata.seed = seed;
    write_td(res, out, &pair)?;
    Ok((vec![pair.coupled.metadata.clone(), pair.uncoupled.metadata.clone()], pair))
}

fn hierarchy(res: &Resolved, out: &mut OutputDir) -> Result<Vec<RunMetadata>> {
    let (runs, pair) = td(res, out)?;
    let h = match analyse_hierarchy(res.topology()?, res.initial_v()?, &pair, res.analysis.tau_primary) {
        Ok(h) => h,
        Err(e) => {
            // keep the TD outputs inspectable when the layering cannot be built
            out.write_json("verification.json", &serde_json::json!({ "error": format!("{e:#}") }))?;
            return Err(e.context(format!("hierarchy for {}", res.config_path.display())));
        }
    };
    out.write("propagation.dot", &h.graph.to_dot())?;
    let mut csv = String::from("neuron_id,layer,dr,d\n");
    for v in 0..h.graph.n() {
        let dr = h.graph.dr[v].map(|d| d.to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{v},{},{dr},{}", h.graph.layer_of[v], h.graph.degree[v]);
    }
    out.write("layers.csv", &csv)?;
    out.write_json("propagation_graph.json", &h.graph)?;
    out.write_json("predicted_order.json", &h.predicted)?;
    out.write_json("verification.json", &h.report)?;
    Ok(runs)
}

fn toy_sweep(res: &Resolved, out: &mut OutputDir) -> Result<Vec<RunMetadata>> {
    let toy = res.toy.as_ref().ok_or_else(|| anyhow!("toy sweep grid missing"))?;
    let diffs = toy.diff.values()?;
    let cells: Vec<(f64, f64)> = toy.v0.iter().flat_map(|&v| diffs.iter().map(move |&d| (v, d))).collect();
    let rows = cells
        .par_iter()
        .map(|&(v0, d)| {
            toy_point(&res.neuron, &res.integrator, v0, d)
                .with_context(|| format!("toy V0 = {v0} mV, V0 - V1 = {d} mV"))
                .map(|(d1, ds)| format!("{v0},{d},{d1:.9e},{}\n", ds.map(|x| format!("{x:.9e}")).unwrap_or_default()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("V0_mV,diff_mV,delta1_s,delta_s\n");
    rows.iter().for_each(|r| csv.push_str(r));
    out.write("toy_sweep.csv", &csv)?;
    Ok(Vec::new())
}
