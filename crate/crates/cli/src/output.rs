use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use burstlab::integrator::SpikeTrain;

/// Output directory that records every file written through it.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Writes `name` via a temporary sibling and a rename.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
        }
        write_atomic(&path, contents.as_bytes())?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).context("serializing report")?;
        text.push('\n');
        self.write(name, &text)
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{file_name}.tmp{}", std::process::id()));
    let result = (|| -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.with_context(|| format!("writing {}", path.display()))
}

/// `neuron_id,spike_index,time_ms`
pub fn spikes_csv(trains: &[SpikeTrain]) -> String {
    let mut out = String::from("neuron_id,spike_index,time_ms\n");
    for train in trains {
        for (m, t) in train.times.iter().enumerate() {
            let _ = writeln!(out, "{},{m},{t:.6}", train.neuron_id);
        }
    }
    out
}

/// `n,delta_s`
pub fn delta_csv(series: &[f64]) -> String {
    let mut out = String::from("n,delta_s\n");
    for (i, d) in series.iter().enumerate() {
        let _ = writeln!(out, "{},{d:.9e}", i + 1);
    }
    out
}

/// `k,td_ms`
pub fn td_csv(series: &[f64]) -> String {
    let mut out = String::from("k,td_ms\n");
    for (k, d) in series.iter().enumerate() {
        let _ = writeln!(out, "{k},{d:.6}");
    }
    out
}

/// `neuron_id,time_ms` for spikes `k * (n - 1) .. k * n` of every train.
pub fn raster_csv(trains: &[SpikeTrain], k: usize, n: usize) -> Option<String> {
    if n == 0 {
        return None;
    }
    let range = k * (n - 1)..k * n;
    if trains.iter().any(|t| t.len() < range.end) {
        return None;
    }
    let mut out = String::from("neuron_id,time_ms\n");
    for train in trains {
        for t in &train.times[range.clone()] {
            let _ = writeln!(out, "{},{t:.6}", train.neuron_id);
        }
    }
    Some(out)
}

pub fn opt(v: Option<f64>, precision: usize) -> String {
    v.map(|x| format!("{x:.precision$}")).unwrap_or_default()
}
