use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use burstlab::hierarchy::TAU_PRIMARY;
use burstlab::integrator::IntegratorConfig;
use burstlab::metrics::Normalization;
use burstlab::neuron::NeuronParams;
use burstlab::topology::{load_edge_list, regular_ring, watts_strogatz, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Scan,
    Single,
    Net,
    Td,
    Hierarchy,
    ToySweep,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Scan => "scan",
            Kind::Single => "single",
            Kind::Net => "net",
            Kind::Td => "td",
            Kind::Hierarchy => "hierarchy",
            Kind::ToySweep => "toy-sweep",
        }
    }
}

/// A number in internal units, or a string such as `"0.66 nA"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Voltage,
    Time,
    Current,
    Conductance,
    Capacitance,
}

impl Dimension {
    /// Factor converting `unit` to the internal unit of this dimension.
    fn factor(self, unit: &str) -> Option<f64> {
        let table: &[(&str, f64)] = match self {
            Dimension::Voltage => &[("mV", 1.0), ("V", 1e3), ("uV", 1e-3)],
            Dimension::Time => &[("ms", 1.0), ("s", 1e3), ("us", 1e-3)],
            Dimension::Current => &[("pA", 1.0), ("nA", 1e3), ("uA", 1e6)],
            Dimension::Conductance => &[("nS", 1.0), ("uS", 1e3), ("mS", 1e6), ("pS", 1e-3)],
            Dimension::Capacitance => &[("pF", 1.0), ("nF", 1e3)],
        };
        table.iter().find(|(u, _)| *u == unit).map(|(_, f)| *f)
    }

    fn internal(self) -> &'static str {
        match self {
            Dimension::Voltage => "mV",
            Dimension::Time => "ms",
            Dimension::Current => "pA",
            Dimension::Conductance => "nS",
            Dimension::Capacitance => "pF",
        }
    }
}

impl Quantity {
    fn resolve(&self, dim: Dimension) -> Result<f64> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(s) => {
                let s = s.trim();
                let split = s
                    .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
                    .ok_or_else(|| anyhow!("'{s}' has no unit; use a bare number for {}", dim.internal()))?;
                let (num, unit) = s.split_at(split);
                let value: f64 = num.trim().parse().with_context(|| format!("'{}' is not a number", num.trim()))?;
                let factor = dim
                    .factor(unit.trim())
                    .ok_or_else(|| anyhow!("unit '{}' does not measure a {}-valued quantity", unit.trim(), dim.internal()))?;
                Ok(value * factor)
            }
        }
    }
}

/// Per-field overrides of [`NeuronParams`].
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeuronOverrides {
    pub c_m: Option<Quantity>,
    pub g_l: Option<Quantity>,
    pub e_l: Option<Quantity>,
    pub v_t: Option<Quantity>,
    pub delta_t: Option<Quantity>,
    pub tau_w: Option<Quantity>,
    pub a: Option<Quantity>,
    pub b: Option<Quantity>,
    pub v_reset: Option<Quantity>,
    pub i_ext: Option<Quantity>,
    pub tau_g: Option<Quantity>,
    pub v_rev: Option<Quantity>,
    pub g_exc: Option<Quantity>,
    pub v_peak: Option<Quantity>,
}

impl NeuronOverrides {
    pub fn apply(&self, base: NeuronParams) -> Result<NeuronParams> {
        use Dimension::*;
        let mut p = base;
        let fields: [(&str, &Option<Quantity>, Dimension, &mut f64); 14] = [
            ("c_m", &self.c_m, Capacitance, &mut p.c_m),
            ("g_l", &self.g_l, Conductance, &mut p.g_l),
            ("e_l", &self.e_l, Voltage, &mut p.e_l),
            ("v_t", &self.v_t, Voltage, &mut p.v_t),
            ("delta_t", &self.delta_t, Voltage, &mut p.delta_t),
            ("tau_w", &self.tau_w, Time, &mut p.tau_w),
            ("a", &self.a, Conductance, &mut p.a),
            ("b", &self.b, Current, &mut p.b),
            ("v_reset", &self.v_reset, Voltage, &mut p.v_reset),
            ("i_ext", &self.i_ext, Current, &mut p.i_ext),
            ("tau_g", &self.tau_g, Time, &mut p.tau_g),
            ("v_rev", &self.v_rev, Voltage, &mut p.v_rev),
            ("g_exc", &self.g_exc, Conductance, &mut p.g_exc),
            ("v_peak", &self.v_peak, Voltage, &mut p.v_peak),
        ];
        for (name, q, dim, slot) in fields {
            if let Some(q) = q {
                *slot = q.resolve(dim).with_context(|| format!("neuron.{name}"))?;
            }
        }
        p.validate().context("neuron")?;
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TopologySpec {
    Ring { n: usize, k: usize },
    SmallWorld { n: usize, k: usize, p: f64 },
    EdgeList { path: PathBuf, n: Option<usize> },
}

/// Inline list, or one of `"uniform:<mV>"`, `"resting-except:<i>=<mV>[,<j>=<mV>...]"`,
/// or a path to a whitespace/comma separated file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialV {
    List(Vec<f64>),
    Spec(String),
}

impl InitialV {
    pub fn resolve(&self, n: usize, e_l: f64, base_dir: &Path) -> Result<Vec<f64>> {
        let v = match self {
            InitialV::List(v) => v.clone(),
            InitialV::Spec(s) => {
                if let Some(rest) = s.strip_prefix("uniform:") {
                    let value: f64 = rest.trim().parse().with_context(|| format!("'{rest}' is not a potential"))?;
                    vec![value; n]
                } else if let Some(rest) = s.strip_prefix("resting-except:") {
                    let mut v = vec![e_l; n];
                    for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                        let (i, value) =
                            item.split_once('=').ok_or_else(|| anyhow!("'{item}' should read <index>=<mV>"))?;
                        let i: usize = i.trim().parse().with_context(|| format!("'{i}' is not an index"))?;
                        let value: f64 = value.trim().parse().with_context(|| format!("'{value}' is not a potential"))?;
                        *v.get_mut(i).ok_or_else(|| anyhow!("index {i} out of range for {n} neurons"))? = value;
                    }
                    v
                } else {
                    let path = base_dir.join(s);
                    let text =
                        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    text.lines()
                        .map(|l| l.split('#').next().unwrap_or(""))
                        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
                        .filter(|x| !x.is_empty())
                        .map(|x| x.parse::<f64>().with_context(|| format!("'{x}' in {} is not a potential", path.display())))
                        .collect::<Result<Vec<_>>>()?
                }
            }
        };
        if v.len() != n {
            bail!("{} potentials given for {n} neurons", v.len());
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(self.stop >= self.start) || !self.start.is_finite() || !self.stop.is_finite() {
            bail!("degenerate range {} ..= {} step {}", self.start, self.stop, self.step);
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| self.start + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Reset potentials (mV).
    pub v_reset: Range,
    /// Injected currents (pA).
    pub i_ext: Range,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            v_reset: Range { start: -70.0, stop: -42.0, step: 1.0 },
            i_ext: Range { start: 400.0, stop: 1000.0, step: 20.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToySweepConfig {
    /// Potentials of neuron 0 (mV).
    pub v0: Vec<f64>,
    /// `V0 - V1` values (mV).
    pub diff: Range,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SingleConfig {
    /// Initial potential (mV); `E_L` when absent.
    pub v0: Option<f64>,
    /// Initial adaptation current (pA).
    pub w0: f64,
}

impl Default for SingleConfig {
    fn default() -> Self {
        Self { v0: None, w0: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub normalization: Normalization,
    /// `|TD|` bound for primary neurons (ms).
    pub tau_primary: f64,
    /// Extra bursts to export as rasters besides the first stabilized one.
    pub raster_bursts: Vec<usize>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self { normalization: Normalization::NMinusOne, tau_primary: TAU_PRIMARY, raster_bursts: vec![100] }
    }
}

/// The experiment file as written.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub neuron: NeuronOverrides,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    pub topology: Option<TopologySpec>,
    pub initial_v: Option<InitialV>,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    pub scan: Option<ScanConfig>,
    pub toy: Option<ToySweepConfig>,
    pub single: Option<SingleConfig>,
}

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub dt: Option<f64>,
}

/// Environment variable that redirects the output directory.
pub const OUT_ENV: &str = "BURSTLAB_OUT";

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedTopology {
    pub spec: TopologySpec,
    #[serde(skip)]
    pub topology: Topology,
    pub accepted_seed: Option<u64>,
    pub n_edges: usize,
    pub hash: String,
}

/// Everything a command needs, with files loaded and units converted.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub kind: Kind,
    pub config_path: PathBuf,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub out_dir: PathBuf,
    pub neuron: NeuronParams,
    pub integrator: IntegratorConfig,
    pub topology: Option<ResolvedTopology>,
    pub initial_v: Option<Vec<f64>>,
    pub analysis: AnalysisConfig,
    pub scan: Option<ScanConfig>,
    pub toy: Option<ToySweepConfig>,
    pub single: Option<SingleConfig>,
}

impl Resolved {
    pub fn topology(&self) -> Result<&Topology> {
        self.topology.as_ref().map(|t| &t.topology).ok_or_else(|| {
            anyhow!("{}: field `topology` is required for `{}`", self.config_path.display(), self.kind.as_str())
        })
    }

    pub fn initial_v(&self) -> Result<&[f64]> {
        self.initial_v.as_deref().ok_or_else(|| {
            anyhow!("{}: field `initial_v` is required for `{}`", self.config_path.display(), self.kind.as_str())
        })
    }
}

pub fn parse(text: &str) -> Result<ExperimentConfig> {
    Ok(toml::from_str(text)?)
}

pub fn load(path: &Path, overrides: &Overrides) -> Result<Resolved> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let cfg = parse(&text).with_context(|| format!("config {}", path.display()))?;
    resolve(cfg, path, overrides, std::env::var_os(OUT_ENV).map(PathBuf::from))
}

pub fn resolve(cfg: ExperimentConfig, path: &Path, overrides: &Overrides, env_out: Option<PathBuf>) -> Result<Resolved> {
    let where_ = |field: &str| format!("{}: field `{field}`", path.display());
    let base_dir = path.parent().unwrap_or(Path::new("."));

    let neuron = cfg.neuron.apply(NeuronParams::default()).with_context(|| where_("neuron"))?;
    let mut integrator = cfg.integrator;
    if let Some(dt) = overrides.dt {
        integrator.dt = dt;
    }
    integrator.validate().with_context(|| where_("integrator"))?;
    let seed = overrides.seed.or(cfg.seed);

    let topology = match &cfg.topology {
        None => None,
        Some(spec) => {
            let (topology, accepted_seed) = match spec {
                TopologySpec::Ring { n, k } => (regular_ring(*n, *k).with_context(|| where_("topology"))?, None),
                TopologySpec::SmallWorld { n, k, p } => {
                    let s = seed.ok_or_else(|| anyhow!("{} requires `seed` for a small-world topology", where_("topology")))?;
                    let sw = watts_strogatz(*n, *k, *p, s).with_context(|| where_("topology"))?;
                    (sw.topology, Some(sw.accepted_seed))
                }
                TopologySpec::EdgeList { path: rel, n } => {
                    let file = base_dir.join(rel);
                    let text = std::fs::read_to_string(&file)
                        .with_context(|| format!("{}: reading {}", where_("topology.path"), file.display()))?;
                    let t = load_edge_list(&text, *n)
                        .with_context(|| format!("{}: {}", where_("topology.path"), file.display()))?;
                    (t, None)
                }
            };
            Some(ResolvedTopology {
                spec: spec.clone(),
                n_edges: topology.edge_count(),
                hash: topology.content_hash(),
                topology,
                accepted_seed,
            })
        }
    };

    let initial_v = match (&cfg.initial_v, &topology) {
        (Some(iv), Some(t)) => {
            Some(iv.resolve(t.topology.n(), neuron.e_l, base_dir).with_context(|| where_("initial_v"))?)
        }
        (Some(_), None) => bail!("{} needs a `topology` to size it", where_("initial_v")),
        (None, _) => None,
    };

    if !(cfg.analysis.tau_primary > 0.0) {
        bail!("{} must be > 0", where_("analysis.tau_primary"));
    }
    let scan = match (cfg.kind, cfg.scan) {
        (Kind::Scan, None) => Some(ScanConfig::default()),
        (_, s) => s,
    };
    if let Some(s) = &scan {
        s.v_reset.values().with_context(|| where_("scan.v_reset"))?;
        s.i_ext.values().with_context(|| where_("scan.i_ext"))?;
    }
    if cfg.kind == Kind::ToySweep {
        let toy = cfg.toy.as_ref().ok_or_else(|| anyhow!("{} is required for `toy-sweep`", where_("toy")))?;
        toy.diff.values().with_context(|| where_("toy.diff"))?;
        if toy.v0.is_empty() {
            bail!("{} must list at least one potential", where_("toy.v0"));
        }
    }

    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into());
    let out_dir = overrides.out.clone().or(env_out).or(cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out").join(stem));

    Ok(Resolved {
        kind: cfg.kind,
        config_path: path.to_path_buf(),
        seed,
        out_dir,
        neuron,
        integrator,
        topology,
        initial_v,
        analysis: cfg.analysis,
        scan,
        toy: cfg.toy,
        single: cfg.single,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resolve_text(text: &str) -> Result<Resolved> {
        resolve(parse(text)?, Path::new("test.toml"), &Overrides::default(), None)
    }

    #[test]
    fn nanoamps_become_picoamps() {
        let r = resolve_text("kind = \"single\"\n[neuron]\ni_ext = \"0.66 nA\"\nb = \"0.5nA\"\n").unwrap();
        assert!((r.neuron.i_ext - 660.0).abs() < 1e-9);
        assert!((r.neuron.b - 500.0).abs() < 1e-9);
    }

    #[test]
    fn wrong_unit_is_rejected() {
        let err = resolve_text("kind = \"single\"\n[neuron]\na = \"4 nA\"\n").unwrap_err();
        assert!(format!("{err:#}").contains("neuron.a"), "{err:#}");
    }

    #[test]
    fn initial_v_forms() {
        let base = "kind = \"net\"\n[topology]\nkind = \"ring\"\nn = 7\nk = 4\n";
        let r = resolve_text(&format!("initial_v = \"uniform:-60\"\n{base}")).unwrap();
        assert_eq!(r.initial_v.unwrap(), vec![-60.0; 7]);
        let r = resolve_text(&format!("initial_v = \"resting-except:6=-52,0=-51\"\n{base}")).unwrap();
        let v = r.initial_v.unwrap();
        assert_eq!(v[6], -52.0);
        assert_eq!(v[0], -51.0);
        assert_eq!(v[3], -70.6);
        let err = resolve_text(&format!("initial_v = [-60.0, -61.0]\n{base}")).unwrap_err();
        assert!(format!("{err:#}").contains("initial_v"));
    }

    #[test]
    fn small_world_needs_seed() {
        let text = "kind = \"net\"\n[topology]\nkind = \"small-world\"\nn = 9\nk = 4\np = 0.5\n";
        assert!(resolve_text(text).is_err());
        let r = resolve(parse(text).unwrap(), Path::new("x.toml"), &Overrides { seed: Some(3), ..Default::default() }, None).unwrap();
        let t = r.topology.unwrap();
        assert_eq!(t.n_edges, 18);
        assert!(t.accepted_seed.unwrap() >= 3);
    }

    #[test]
    fn output_directory_precedence() {
        let cfg = || parse("kind = \"single\"\nout = \"from-config\"\n").unwrap();
        let p = Path::new("cfg/case.toml");
        let r = resolve(cfg(), p, &Overrides::default(), None).unwrap();
        assert_eq!(r.out_dir, PathBuf::from("from-config"));
        let r = resolve(cfg(), p, &Overrides::default(), Some("from-env".into())).unwrap();
        assert_eq!(r.out_dir, PathBuf::from("from-env"));
        let o = Overrides { out: Some("from-flag".into()), ..Default::default() };
        let r = resolve(cfg(), p, &o, Some("from-env".into())).unwrap();
        assert_eq!(r.out_dir, PathBuf::from("from-flag"));
        let r = resolve(parse("kind = \"single\"").unwrap(), p, &Overrides::default(), None).unwrap();
        assert_eq!(r.out_dir, PathBuf::from("out/case"));
    }

    #[test]
    fn dt_override_is_validated() {
        let o = Overrides { dt: Some(0.5), ..Default::default() };
        assert!(resolve(parse("kind = \"single\"").unwrap(), Path::new("a.toml"), &o, None).is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse("kind = \"single\"\ncolour = 3\n").is_err());
        assert!(parse("kind = \"single\"\n[neuron]\nvolts = 3\n").is_err());
    }

    #[test]
    fn degenerate_scan_grid() {
        let text = "kind = \"scan\"\n[scan]\nv_reset = { start = -44.0, stop = -50.0, step = 1.0 }\ni_ext = { start = 660.0, stop = 660.0, step = 20.0 }\n";
        assert!(resolve_text(text).is_err());
        let r = Range { start: -44.0, stop: -44.0, step: 1.0 };
        assert_eq!(r.values().unwrap(), vec![-44.0]);
        assert_eq!(Range { start: -70.0, stop: -42.0, step: 1.0 }.values().unwrap().len(), 29);
    }
}
