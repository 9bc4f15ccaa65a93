//! Spike-train measurements: ISI statistics and CV, burst segmentation, the
//! per-burst synchronization parameter, coupled-vs-uncoupled spike time
//! differences, and locked-phase extraction.
//!
//! Spike times are in ms. The synchronization parameter is reported in seconds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::SpikeTrain;

/// CV at or above this value classifies a train as bursting.
pub const BURSTING_CV: f64 = 0.5;
/// Leading fraction of a run discarded as transient.
pub const TRANSIENT_FRACTION: f64 = 0.2;
/// An ISI is an inter-burst gap iff it exceeds this multiple of the smallest ISI.
pub const BURST_GAP_FACTOR: f64 = 3.0;
/// Bursts inspected when certifying a stabilized synchronization parameter.
pub const DELTA_WINDOW: usize = 10;
/// Relative spread of the synchronization parameter accepted as stable.
pub const DELTA_REL_TOL: f64 = 1e-3;
/// Absolute spread (s) accepted as stable when the parameter is near zero.
pub const DELTA_ABS_TOL: f64 = 1e-6;
/// Minimum number of complete bursts for a stabilization verdict.
pub const MIN_BURSTS: usize = 30;
/// Spikes inspected when certifying a stabilized time difference.
pub const TD_WINDOW: usize = 30;
/// Spread (ms) of the time difference accepted as stable.
pub const TD_TOL: f64 = 0.02;
/// Spikes closer than this (ms) count as simultaneous.
pub const TAU_SAME: f64 = 0.05;

/// Population standard deviation, evaluated as `sqrt(E[x^2] - E[x]^2)` on
/// values shifted by their minimum (the result is shift invariant).
pub fn population_std(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let n = xs.len() as f64;
    let origin = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let (s1, s2) = xs.iter().fold((0.0, 0.0), |(s1, s2), &x| {
        let d = x - origin;
        (s1 + d, s2 + d * d)
    });
    let mean = s1 / n;
    (s2 / n - mean * mean).max(0.0).sqrt()
}

/// Coefficient of variation of the ISIs: population standard deviation over mean.
///
/// Uses every spike of `train`; trim the transient first with [`stabilized_portion`].
pub fn cv(train: &SpikeTrain) -> Result<f64> {
    if train.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "CV needs at least 3 spikes, neuron {} has {}",
            train.neuron_id,
            train.len()
        )));
    }
    let isis = train.isis();
    let mean = isis.iter().sum::<f64>() / isis.len() as f64;
    Ok(population_std(&isis) / mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiringPattern {
    Spiking,
    Bursting,
}

impl FiringPattern {
    pub fn as_str(&self) -> &'static str {
        match self {
            FiringPattern::Spiking => "spiking",
            FiringPattern::Bursting => "bursting",
        }
    }
}

pub fn classify_firing(cv_value: f64) -> FiringPattern {
    if cv_value < BURSTING_CV {
        FiringPattern::Spiking
    } else {
        FiringPattern::Bursting
    }
}

fn gap_threshold(isis: &[f64]) -> f64 {
    BURST_GAP_FACTOR * isis.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Drops the transient: spikes before `TRANSIENT_FRACTION * t_end`, and, if the
/// remainder contains inter-burst gaps, everything before the first burst onset.
pub fn stabilized_portion(train: &SpikeTrain, t_end: f64) -> SpikeTrain {
    let cutoff = TRANSIENT_FRACTION * t_end;
    let first = train.times.partition_point(|&t| t < cutoff);
    let trimmed = SpikeTrain::new(train.neuron_id, train.times[first..].to_vec());
    let isis = trimmed.isis();
    if isis.is_empty() {
        return trimmed;
    }
    let threshold = gap_threshold(&isis);
    if first > 0 && train.times[first] - train.times[first - 1] > threshold {
        return trimmed;
    }
    match isis.iter().position(|&isi| isi > threshold) {
        Some(gap) => SpikeTrain::new(train.neuron_id, trimmed.times[gap + 1..].to_vec()),
        None => trimmed,
    }
}

/// Burst structure of a regular train.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurstSegmentation {
    /// Spikes per burst.
    pub k: usize,
    /// Index (into the segmented train) of the first spike of every complete burst.
    pub boundaries: Vec<usize>,
    /// ISIs above this (ms) separate bursts.
    pub gap_threshold: f64,
}

/// Splits a stabilized train into bursts at ISIs above `3 x` the smallest ISI.
///
/// Runs before the first and after the last gap may be truncated and are not
/// counted. A train without any gap is tonic: every spike is its own burst.
pub fn segment_bursts(train: &SpikeTrain) -> Result<BurstSegmentation> {
    let isis = train.isis();
    if isis.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "burst segmentation needs at least 3 spikes, neuron {} has {}",
            train.neuron_id,
            train.len()
        )));
    }
    let gap_threshold = gap_threshold(&isis);
    let gaps: Vec<usize> = isis.iter().enumerate().filter(|(_, &isi)| isi > gap_threshold).map(|(i, _)| i).collect();
    if gaps.is_empty() {
        return Ok(BurstSegmentation { k: 1, boundaries: (0..train.len()).collect(), gap_threshold });
    }
    if gaps.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "neuron {} shows no complete burst between two gaps",
            train.neuron_id
        )));
    }
    let boundaries: Vec<usize> = gaps[..gaps.len() - 1].iter().map(|g| g + 1).collect();
    let sizes: Vec<usize> = gaps.windows(2).map(|w| w[1] - w[0]).collect();
    let k = sizes[0];
    if let Some(bad) = sizes.iter().position(|&s| s != k) {
        return Err(Error::IrregularBursts(format!(
            "neuron {}: burst {} has {} spikes, expected {k}",
            train.neuron_id, bad, sizes[bad]
        )));
    }
    Ok(BurstSegmentation { k, boundaries, gap_threshold })
}

/// Spikes-per-burst shared by every train of a run, measured on the stabilized portion.
pub fn common_burst_size(trains: &[SpikeTrain], t_end: f64) -> Result<usize> {
    let mut k = None;
    for train in trains {
        let seg = segment_bursts(&stabilized_portion(train, t_end))?;
        match k {
            None => k = Some(seg.k),
            Some(k0) if k0 != seg.k => {
                return Err(Error::IrregularBursts(format!(
                    "neuron {} fires {} spikes per burst, others {k0}",
                    train.neuron_id, seg.k
                )))
            }
            _ => {}
        }
    }
    k.ok_or_else(|| Error::InsufficientData("run has no neurons".into()))
}

/// Number of complete bursts `n` for which every neuron has `k * n` spikes.
pub fn complete_bursts(trains: &[SpikeTrain], k: usize) -> usize {
    if k == 0 {
        return 0;
    }
    trains.iter().map(SpikeTrain::len).min().unwrap_or(0) / k
}

/// Divisor applied to the across-neuron standard deviation in [`delta_n_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `N - 1`, as the formula is written.
    #[default]
    NMinusOne,
    /// `sqrt(N - 1)`, the scale of the published tables.
    SqrtNMinusOne,
}

impl Normalization {
    pub fn divisor(self, n_neurons: usize) -> f64 {
        let m = n_neurons.saturating_sub(1) as f64;
        match self {
            Normalization::NMinusOne => m,
            Normalization::SqrtNMinusOne => m.sqrt(),
        }
    }
}

/// Synchronization parameter of burst `n` (1-based), in seconds:
/// the mean over the burst's `k` spike positions of the across-neuron
/// population standard deviation, divided by `N - 1`.
pub fn delta_n(trains: &[SpikeTrain], k: usize, n: usize) -> Result<f64> {
    delta_n_with(trains, k, n, Normalization::NMinusOne)
}

/// [`delta_n`] with a selectable divisor.
pub fn delta_n_with(trains: &[SpikeTrain], k: usize, n: usize, norm: Normalization) -> Result<f64> {
    let n_neurons = trains.len();
    if n_neurons < 2 {
        return Err(Error::InsufficientData(format!("synchronization needs >= 2 neurons, got {n_neurons}")));
    }
    if k == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("k and n must be >= 1 (k = {k}, n = {n})")));
    }
    if let Some(short) = trains.iter().find(|t| t.len() < k * n) {
        return Err(Error::InsufficientData(format!(
            "neuron {} has {} spikes, burst {n} needs {}",
            short.neuron_id,
            short.len(),
            k * n
        )));
    }
    let divisor = norm.divisor(n_neurons);
    let mut column = vec![0.0; n_neurons];
    let mut acc = 0.0;
    for j in 0..k {
        let m = j + k * (n - 1);
        for (slot, train) in column.iter_mut().zip(trains) {
            *slot = train.times[m];
        }
        acc += population_std(&column) / divisor;
    }
    Ok(acc / k as f64 * 1e-3)
}

/// `delta_n_with` for every complete burst, starting at `n = 1`.
pub fn delta_series(trains: &[SpikeTrain], k: usize, norm: Normalization) -> Result<Vec<f64>> {
    (1..=complete_bursts(trains, k)).map(|n| delta_n_with(trains, k, n, norm)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyncTrace {
    pub k: usize,
    /// `delta_series[n - 1]` is the value for burst `n` (s).
    pub delta_series: Vec<f64>,
    /// Certified limit (s), when the window criterion held.
    pub stabilized: Option<f64>,
    /// First burst (1-based) from which the series stays within tolerance of the limit.
    pub stabilized_at: Option<usize>,
    pub diagnostic: Option<String>,
}

fn is_settled(spread: f64, mean: f64) -> bool {
    spread <= DELTA_REL_TOL * mean.abs() || spread < DELTA_ABS_TOL
}

/// Certifies the long-run limit of the synchronization parameter.
///
/// Stable when the last [`DELTA_WINDOW`] values spread by at most
/// [`DELTA_REL_TOL`] of their mean (or by less than [`DELTA_ABS_TOL`] s);
/// the limit is the window mean.
pub fn stabilized_delta(trains: &[SpikeTrain], k: usize, norm: Normalization) -> Result<SyncTrace> {
    let series = delta_series(trains, k, norm)?;
    if series.len() < MIN_BURSTS {
        return Err(Error::InsufficientData(format!(
            "{} complete bursts, stabilization needs {MIN_BURSTS}",
            series.len()
        )));
    }
    let window = &series[series.len() - DELTA_WINDOW..];
    let (lo, hi) = min_max(window);
    let mean = window.iter().sum::<f64>() / window.len() as f64;
    if !is_settled(hi - lo, mean) {
        return Ok(SyncTrace {
            k,
            diagnostic: Some(format!(
                "last {DELTA_WINDOW} bursts spread by {:.3e} s around {:.6e} s",
                hi - lo,
                mean
            )),
            delta_series: series,
            stabilized: None,
            stabilized_at: None,
        });
    }
    // extend the window backwards while the criterion keeps holding
    let mut start = series.len() - DELTA_WINDOW;
    let (mut lo, mut hi) = (lo, hi);
    while start > 0 {
        let v = series[start - 1];
        let (nlo, nhi) = (lo.min(v), hi.max(v));
        if !is_settled(nhi - nlo, mean) {
            break;
        }
        lo = nlo;
        hi = nhi;
        start -= 1;
    }
    Ok(SyncTrace { k, delta_series: series, stabilized: Some(mean), stabilized_at: Some(start + 1), diagnostic: None })
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TdTrace {
    pub neuron_id: usize,
    /// `T_coupled(k) - T_uncoupled(k)` (ms) over the common spike range.
    pub td_series: Vec<f64>,
    pub stabilized_td: Option<f64>,
}

/// Spike time differences of neuron `i` between a coupled and an uncoupled run.
pub fn td(coupled: &[SpikeTrain], uncoupled: &[SpikeTrain], i: usize) -> Result<TdTrace> {
    let (a, b) = match (coupled.get(i), uncoupled.get(i)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidParameter(format!("neuron {i} missing from one of the runs"))),
    };
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData(format!("neuron {i} has no spikes in one of the runs")));
    }
    let td_series: Vec<f64> = a.times.iter().zip(&b.times).map(|(t1, t2)| t1 - t2).collect();
    let stabilized_td = (td_series.len() >= TD_WINDOW)
        .then(|| &td_series[td_series.len() - TD_WINDOW..])
        .filter(|w| {
            let (lo, hi) = min_max(w);
            hi - lo < TD_TOL
        })
        .map(|w| w.iter().sum::<f64>() / w.len() as f64);
    Ok(TdTrace { neuron_id: i, td_series, stabilized_td })
}

/// Relative spike pattern of one stabilized burst.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LockedPhase {
    /// 1-based burst index the pattern was taken from.
    pub burst: usize,
    pub k: usize,
    /// Absolute time (ms) of the earliest spike in the burst.
    pub origin_ms: f64,
    /// `relative_ms[i][j]`: spike `j` of neuron `i`, relative to `origin_ms`.
    pub relative_ms: Vec<Vec<f64>>,
    /// Neurons whose corresponding spikes all coincide within [`TAU_SAME`],
    /// ordered by first spike.
    pub groups: Vec<Vec<usize>>,
    /// Neurons by first spike in the burst, ties by index.
    pub first_spike_order: Vec<usize>,
}

impl LockedPhase {
    /// First spike of each neuron relative to the burst origin (ms).
    pub fn first_spikes(&self) -> Vec<f64> {
        self.relative_ms.iter().map(|r| r[0]).collect()
    }

    pub fn group_of(&self, neuron: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&neuron))
    }
}

/// Locked phase of the last burst completed by every neuron.
pub fn locked_phase(trains: &[SpikeTrain], k: usize) -> Result<LockedPhase> {
    let n = complete_bursts(trains, k);
    if n == 0 {
        return Err(Error::InsufficientData(format!("no burst of {k} spikes completed by every neuron")));
    }
    locked_phase_at(trains, k, n)
}

/// Locked phase of burst `n` (1-based).
pub fn locked_phase_at(trains: &[SpikeTrain], k: usize, n: usize) -> Result<LockedPhase> {
    if trains.is_empty() || k == 0 || n == 0 {
        return Err(Error::InsufficientData("locked phase needs neurons, k >= 1 and n >= 1".into()));
    }
    if let Some(short) = trains.iter().find(|t| t.len() < k * n) {
        return Err(Error::InsufficientData(format!(
            "neuron {} has {} spikes, burst {n} needs {}",
            short.neuron_id,
            short.len(),
            k * n
        )));
    }
    let first = k * (n - 1);
    let origin_ms = trains.iter().flat_map(|t| &t.times[first..first + k]).copied().fold(f64::INFINITY, f64::min);
    let relative_ms: Vec<Vec<f64>> =
        trains.iter().map(|t| t.times[first..first + k].iter().map(|x| x - origin_ms).collect()).collect();

    let count = trains.len();
    let mut parent: Vec<usize> = (0..count).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for a in 0..count {
        for b in a + 1..count {
            let same = relative_ms[a].iter().zip(&relative_ms[b]).all(|(x, y)| (x - y).abs() <= TAU_SAME);
            if same {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }

    let mut first_spike_order: Vec<usize> = (0..count).collect();
    first_spike_order.sort_by(|&a, &b| relative_ms[a][0].total_cmp(&relative_ms[b][0]).then(a.cmp(&b)));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of_root = vec![usize::MAX; count];
    for &i in &first_spike_order {
        let r = root(&mut parent, i);
        if group_of_root[r] == usize::MAX {
            group_of_root[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of_root[r]].push(i);
    }
    for g in &mut groups {
        g.sort_unstable();
    }

    Ok(LockedPhase { burst: n, k, origin_ms, relative_ms, groups, first_spike_order })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn train(id: usize, times: &[f64]) -> SpikeTrain {
        SpikeTrain::new(id, times.to_vec())
    }

    fn from_isis(start: f64, isis: &[f64]) -> SpikeTrain {
        let mut times = vec![start];
        for isi in isis {
            times.push(times.last().unwrap() + isi);
        }
        SpikeTrain::new(0, times)
    }

    #[test]
    fn cv_of_regular_train_is_zero() {
        assert_eq!(cv(&from_isis(3.0, &[5.0; 6])).unwrap(), 0.0);
    }

    #[test]
    fn cv_hand_value() {
        // mean 2, population sd sqrt(2)
        let c = cv(&from_isis(0.0, &[1.0, 1.0, 4.0])).unwrap();
        assert!((c - 0.7071067811865476).abs() < 1e-12, "{c}");
    }

    #[test]
    fn cv_needs_three_spikes() {
        assert!(matches!(cv(&train(4, &[1.0, 2.0])), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn classification_boundary() {
        assert_eq!(classify_firing(0.0), FiringPattern::Spiking);
        assert_eq!(classify_firing(0.49), FiringPattern::Spiking);
        assert_eq!(classify_firing(0.5), FiringPattern::Bursting);
        assert_eq!(classify_firing(1.4), FiringPattern::Bursting);
    }

    #[test]
    fn segments_synthetic_bursts() {
        let isis: Vec<f64> = [2.0, 2.0, 20.0].iter().copied().cycle().take(30).collect();
        let seg = segment_bursts(&from_isis(0.0, &isis)).unwrap();
        assert_eq!(seg.k, 3);
        assert_eq!(seg.boundaries, vec![3, 6, 9, 12, 15, 18, 21, 24, 27]);
        assert_eq!(seg.gap_threshold, 6.0);
    }

    #[test]
    fn tonic_train_has_unit_bursts() {
        let seg = segment_bursts(&from_isis(0.0, &[90.0, 90.1, 89.9, 90.0])).unwrap();
        assert_eq!(seg.k, 1);
        assert_eq!(seg.boundaries.len(), 5);
    }

    #[test]
    fn irregular_bursts_rejected() {
        let t = from_isis(0.0, &[20.0, 1.0, 1.0, 20.0, 1.0, 20.0, 1.0, 1.0, 20.0]);
        assert!(matches!(segment_bursts(&t), Err(Error::IrregularBursts(_))));
    }

    #[test]
    fn transient_trimmed_to_burst_onset() {
        // bursts of 3 starting at 0, 100, 200, ...; cut at 0.2 * 1000 = 200 lands
        // on an onset, so the first retained spike is 200
        let mut times = Vec::new();
        for b in 0..10 {
            let s = b as f64 * 100.0;
            times.extend([s, s + 1.0, s + 2.0]);
        }
        let st = stabilized_portion(&train(0, &times), 1000.0);
        assert_eq!(st.times[0], 200.0);
        let st = stabilized_portion(&train(0, &times), 1005.0);
        assert_eq!(st.times[0], 300.0);
    }

    #[test]
    fn delta_hand_values() {
        let two = [train(0, &[0.0]), train(1, &[2.0])];
        assert!((delta_n(&two, 1, 1).unwrap() - 1.0e-3).abs() < 1e-15);
        let three = [train(0, &[0.0]), train(1, &[0.0]), train(2, &[3.0])];
        let d = delta_n(&three, 1, 1).unwrap();
        assert!((d - 0.7071067811865476e-3).abs() < 1e-15, "{d}");
    }

    #[test]
    fn sqrt_normalization_rescales() {
        let three = [train(0, &[0.0]), train(1, &[0.0]), train(2, &[3.0])];
        let d = delta_n_with(&three, 1, 1, Normalization::SqrtNMinusOne).unwrap();
        assert!((d - 1.0e-3).abs() < 1e-15, "{d}");
        let two = [train(0, &[0.0]), train(1, &[2.0])];
        assert_eq!(
            delta_n_with(&two, 1, 1, Normalization::SqrtNMinusOne).unwrap(),
            delta_n(&two, 1, 1).unwrap()
        );
    }

    #[test]
    fn delta_zero_for_identical_trains() {
        let t: Vec<f64> = (0..60).map(|i| 1234.5678 + 17.3 * i as f64).collect();
        let trains: Vec<SpikeTrain> = (0..7).map(|i| train(i, &t)).collect();
        for v in delta_series(&trains, 3, Normalization::NMinusOne).unwrap() {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn delta_needs_spikes() {
        let trains = [train(0, &[1.0, 2.0]), train(1, &[1.0])];
        assert!(matches!(delta_n(&trains, 2, 1), Err(Error::InsufficientData(_))));
        assert!(matches!(delta_n(&trains[..1], 1, 1), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn stabilization_certified_on_constant_tail() {
        // neuron 1 lags by a shrinking offset that settles at 3 ms
        let a: Vec<f64> = (0..40).map(|i| 100.0 * i as f64).collect();
        let b: Vec<f64> = (0..40).map(|i| 100.0 * i as f64 + 3.0 + if i < 20 { 5.0 / (i + 1) as f64 } else { 0.0 }).collect();
        let trace = stabilized_delta(&[train(0, &a), train(1, &b)], 1, Normalization::NMinusOne).unwrap();
        assert!((trace.stabilized.unwrap() - 1.5e-3).abs() < 1e-12);
        assert_eq!(trace.stabilized_at, Some(21));
        assert_eq!(trace.delta_series.len(), 40);
    }

    #[test]
    fn stabilization_refused_on_drift() {
        let a: Vec<f64> = (0..40).map(|i| 100.0 * i as f64).collect();
        let b: Vec<f64> = (0..40).map(|i| 100.0 * i as f64 + 0.1 * i as f64).collect();
        let trace = stabilized_delta(&[train(0, &a), train(1, &b)], 1, Normalization::NMinusOne).unwrap();
        assert!(trace.stabilized.is_none());
        assert!(trace.diagnostic.is_some());
        let short = stabilized_delta(&[train(0, &a[..20]), train(1, &b[..20])], 1, Normalization::NMinusOne);
        assert!(matches!(short, Err(Error::InsufficientData(_))));
    }

    #[test]
    fn td_self_is_zero_and_truncates() {
        let t: Vec<f64> = (0..50).map(|i| 10.0 * i as f64).collect();
        let runs = [train(0, &t)];
        let trace = td(&runs, &runs, 0).unwrap();
        assert!(trace.td_series.iter().all(|&x| x == 0.0));
        assert_eq!(trace.stabilized_td, Some(0.0));
        let shorter = [train(0, &t[..40])];
        assert_eq!(td(&runs, &shorter, 0).unwrap().td_series.len(), 40);
        assert!(matches!(td(&runs, &[train(0, &[])], 0), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn td_stabilizes_on_constant_lead() {
        let t2: Vec<f64> = (0..50).map(|i| 10.0 * i as f64).collect();
        let t1: Vec<f64> = t2.iter().map(|t| t - 1.25).collect();
        let trace = td(&[train(0, &t1)], &[train(0, &t2)], 0).unwrap();
        assert!((trace.stabilized_td.unwrap() + 1.25).abs() < 1e-12);
    }

    #[test]
    fn locked_phase_groups() {
        let trains = [
            train(0, &[10.0, 11.0, 100.0, 101.0]),
            train(1, &[10.02, 11.03, 100.02, 101.03]),
            train(2, &[12.0, 13.0, 102.5, 103.5]),
            train(3, &[9.0, 10.0, 99.0, 100.0]),
        ];
        let lp = locked_phase(&trains, 2).unwrap();
        assert_eq!(lp.burst, 2);
        assert_eq!(lp.origin_ms, 99.0);
        assert_eq!(lp.groups, vec![vec![3], vec![0, 1], vec![2]]);
        assert_eq!(lp.first_spike_order, vec![3, 0, 1, 2]);
        assert!((lp.relative_ms[2][0] - 3.5).abs() < 1e-12);
        assert_eq!(lp.group_of(1), Some(1));
    }
}
