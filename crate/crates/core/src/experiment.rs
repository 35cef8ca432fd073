//! Experiment configs, training runs and ablation grids.
//!
//! Configs are TOML with an explicit `schema_version`; unknown keys are
//! rejected. The only environment inputs are `GLIF_OUTPUT_ROOT` (prefix for
//! relative output directories) and `GLIF_THREADS` (parallel ablation entries).

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::checkpoint::save_checkpoint;
use crate::datasets::{load_csv, load_idx, LabeledSpikeDataset, SyntheticTaskSpec, TaskKind};
use crate::dynamics::export_param_histograms;
use crate::error::{Error, Result};
use crate::network::{NetworkSpec, SharingScheme};
use crate::neuron::NeuronMode;
use crate::trainer::{init_and_train, write_metrics_csv, EpochMetrics, InitTable, TrainConfig};

pub const SCHEMA_VERSION: u32 = 1;
pub const OUTPUT_ROOT_ENV: &str = "GLIF_OUTPUT_ROOT";
pub const THREADS_ENV: &str = "GLIF_THREADS";

pub const METRICS_FILE: &str = "metrics.csv";
pub const CHECKPOINT_FILE: &str = "checkpoint.json";
pub const CONFIG_SNAPSHOT_FILE: &str = "config.toml";
pub const ABLATION_FILE: &str = "ablation.csv";
pub const HISTOGRAM_FILE: &str = "histograms.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetSource {
    Rate,
    Temporal,
    Csv,
    Idx,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub source: DatasetSource,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub num_classes: Option<usize>,
    #[serde(default)]
    pub samples_per_class: Option<usize>,
    #[serde(default)]
    pub noise_std: Option<f64>,
    #[serde(default = "default_eval_fraction")]
    pub eval_fraction: f64,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub images: Option<PathBuf>,
    #[serde(default)]
    pub labels: Option<PathBuf>,
}

fn default_eval_fraction() -> f64 {
    0.3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub time_steps: usize,
    #[serde(default)]
    pub hidden: Vec<usize>,
    #[serde(default)]
    pub sharing: SharingScheme,
    #[serde(default = "default_mode")]
    pub mode: NeuronMode,
}

fn default_mode() -> NeuronMode {
    NeuronMode::Glif
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: PathBuf,
    pub dataset: DatasetConfig,
    pub network: NetworkConfig,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub init: InitTable,
}

/// `[train]` table; the seed comes from the top level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub lr0: f64,
    pub momentum: f64,
    pub weight_decay: f64,
    pub gate_lr_scale: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub t_max: Option<usize>,
    pub spike_mode: crate::neuron::SpikeMode,
}

impl Default for TrainSection {
    fn default() -> Self {
        let d = TrainConfig::default();
        TrainSection {
            lr0: d.lr0,
            momentum: d.momentum,
            weight_decay: d.weight_decay,
            gate_lr_scale: d.gate_lr_scale,
            epochs: d.epochs,
            batch_size: d.batch_size,
            t_max: d.t_max,
            spike_mode: d.spike_mode,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn train_config(&self) -> TrainConfig {
        let t = &self.train;
        TrainConfig {
            lr0: t.lr0,
            momentum: t.momentum,
            weight_decay: t.weight_decay,
            gate_lr_scale: t.gate_lr_scale,
            epochs: t.epochs,
            batch_size: t.batch_size,
            seed: self.seed,
            t_max: t.t_max,
            spike_mode: t.spike_mode,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.network.time_steps == 0 {
            return Err(Error::Config("network.time_steps must be positive".into()));
        }
        if self.network.hidden.contains(&0) {
            return Err(Error::Config("hidden layer widths must be positive".into()));
        }
        let d = &self.dataset;
        if !(0.0..1.0).contains(&d.eval_fraction) {
            return Err(Error::Config("dataset.eval_fraction must lie in [0, 1)".into()));
        }
        match d.source {
            DatasetSource::Rate | DatasetSource::Temporal => {
                for (name, present) in [
                    ("dim", d.dim.is_some()),
                    ("num_classes", d.num_classes.is_some()),
                    ("samples_per_class", d.samples_per_class.is_some()),
                ] {
                    if !present {
                        return Err(Error::Config(format!(
                            "dataset.{name} is required for synthetic tasks"
                        )));
                    }
                }
                self.synthetic_spec().expect("synthetic source").validate()?;
            }
            DatasetSource::Csv => {
                if d.path.is_none() {
                    return Err(Error::Config("dataset.path is required for csv".into()));
                }
            }
            DatasetSource::Idx => {
                if d.images.is_none() || d.labels.is_none() {
                    return Err(Error::Config(
                        "dataset.images and dataset.labels are required for idx".into(),
                    ));
                }
            }
        }
        self.train_config().validate()?;
        self.init.validate()
    }

    pub fn synthetic_spec(&self) -> Option<SyntheticTaskSpec> {
        let d = &self.dataset;
        let kind = match d.source {
            DatasetSource::Rate => TaskKind::RatePatterns,
            DatasetSource::Temporal => TaskKind::TemporalPositionPatterns,
            _ => return None,
        };
        Some(SyntheticTaskSpec {
            kind,
            dim: d.dim.unwrap_or(0),
            time_steps: self.network.time_steps,
            num_classes: d.num_classes.unwrap_or(0),
            samples_per_class: d.samples_per_class.unwrap_or(0),
            noise_std: d.noise_std.unwrap_or(0.0),
            seed: self.seed,
        })
    }

    /// Loads or generates the data and splits it into `(train, eval)`.
    pub fn datasets(&self) -> Result<(LabeledSpikeDataset, LabeledSpikeDataset)> {
        let d = &self.dataset;
        let t = self.network.time_steps;
        let all = match d.source {
            DatasetSource::Rate | DatasetSource::Temporal => {
                self.synthetic_spec().expect("synthetic source").generate()?
            }
            DatasetSource::Csv => load_csv(d.path.as_deref().expect("validated"), t)?,
            DatasetSource::Idx => load_idx(
                d.images.as_deref().expect("validated"),
                d.labels.as_deref().expect("validated"),
                t,
            )?,
        };
        all.split(d.eval_fraction, self.seed)
    }

    /// Zero-initialized network sized for `data`.
    pub fn build_network(
        &self,
        data: &LabeledSpikeDataset,
        mode: NeuronMode,
        sharing: SharingScheme,
    ) -> NetworkSpec {
        let mut dims = vec![data.dim];
        dims.extend(&self.network.hidden);
        dims.push(data.num_classes);
        NetworkSpec::zeroed(&dims, self.network.time_steps, sharing, mode)
    }

    /// `output_dir`, prefixed by `GLIF_OUTPUT_ROOT` when relative.
    pub fn resolved_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_ROOT_ENV) {
            Some(root) if self.output_dir.is_relative() => PathBuf::from(root).join(&self.output_dir),
            _ => self.output_dir.clone(),
        }
    }
}

/// Creates `dir`, refusing to reuse a non-empty directory unless `overwrite`.
pub fn prepare_output_dir(dir: &Path, overwrite: bool) -> Result<()> {
    if dir.exists() {
        let non_empty = fs::read_dir(dir)
            .map_err(|e| Error::io(dir, e))?
            .next()
            .is_some();
        if non_empty && !overwrite {
            return Err(Error::Config(format!(
                "output directory {} is not empty (pass --overwrite to replace its contents)",
                dir.display()
            )));
        }
    }
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

#[derive(Clone, Debug)]
pub struct TrainOutcome {
    pub history: Vec<EpochMetrics>,
    pub network: NetworkSpec,
}

fn train_one(
    cfg: &ExperimentConfig,
    train: &LabeledSpikeDataset,
    eval: &LabeledSpikeDataset,
    mode: NeuronMode,
    sharing: SharingScheme,
) -> Result<TrainOutcome> {
    let mut net = cfg.build_network(train, mode, sharing);
    let eval = (!eval.is_empty()).then_some(eval);
    let history = init_and_train(&mut net, &cfg.init, train, eval, &cfg.train_config())?;
    Ok(TrainOutcome { history, network: net })
}

/// Trains per the config and writes the metrics CSV, the final checkpoint and
/// a resolved-config snapshot into `out_dir`.
pub fn run_train(cfg: &ExperimentConfig, out_dir: &Path, overwrite: bool) -> Result<TrainOutcome> {
    cfg.validate()?;
    prepare_output_dir(out_dir, overwrite)?;
    let (train, eval) = cfg.datasets()?;
    let outcome = train_one(cfg, &train, &eval, cfg.network.mode, cfg.network.sharing)?;
    write_metrics_csv(&outcome.history, &out_dir.join(METRICS_FILE))?;
    save_checkpoint(&outcome.network, &out_dir.join(CHECKPOINT_FILE))?;
    let snapshot = out_dir.join(CONFIG_SNAPSHOT_FILE);
    fs::write(&snapshot, cfg.to_toml()?).map_err(|e| Error::io(&snapshot, e))?;
    Ok(outcome)
}

/// One model in an ablation grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridEntry {
    pub name: String,
    pub mode: NeuronMode,
    /// `None` uses the config's sharing scheme.
    pub sharing: Option<SharingScheme>,
}

/// Ordered, duplicate-free list of models to compare.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AblationGrid {
    pub entries: Vec<GridEntry>,
}

impl AblationGrid {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(mut self, name: &str, mode: NeuronMode, sharing: Option<SharingScheme>) -> Self {
        let dup = self
            .entries
            .iter()
            .any(|e| e.name == name || (e.mode == mode && e.sharing == sharing));
        if !dup {
            self.entries.push(GridEntry {
                name: name.into(),
                mode,
                sharing,
            });
        }
        self
    }

    /// The eight frozen-gate models, `000` to `111`.
    pub fn simplex(self) -> Self {
        NeuronMode::simplex_all()
            .into_iter()
            .fold(self, |g, m| g.push(&m.label(), m, None))
    }

    pub fn glif(self) -> Self {
        self.push("glif", NeuronMode::Glif, Some(SharingScheme::ChannelWise))
    }

    /// Static-gate and gate-free variants.
    pub fn gate_variants(self) -> Self {
        self.push("glif_s", NeuronMode::GlifStaticGates, None)
            .push("glif_f", NeuronMode::GlifFused, None)
    }

    /// Channel-wise and layer-wise GLIF.
    pub fn sharing_pair(self) -> Self {
        self.glif()
            .push("glif_lw", NeuronMode::Glif, Some(SharingScheme::LayerWise))
    }

    pub fn full() -> Self {
        Self::new().simplex().glif().gate_variants().sharing_pair()
    }

    /// `full`, `simplex`, `gates`, `sharing`, or a comma-separated list of
    /// entry names (`101,glif,glif_lw,...`).
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "full" => return Ok(Self::full()),
            "simplex" => return Ok(Self::new().simplex().glif()),
            "gates" => return Ok(Self::new().gate_variants().glif()),
            "sharing" => return Ok(Self::new().sharing_pair()),
            _ => {}
        }
        let mut grid = Self::new();
        for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let before = grid.entries.len();
            grid = match name {
                "glif" => grid.glif(),
                "glif_lw" => grid.push("glif_lw", NeuronMode::Glif, Some(SharingScheme::LayerWise)),
                other => {
                    let mode: NeuronMode = other.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
                    grid.push(other, mode, None)
                }
            };
            if grid.entries.len() == before {
                return Err(Error::Config(format!("grid entry {name:?} is duplicated")));
            }
        }
        if grid.entries.is_empty() {
            return Err(Error::Config("ablation grid is empty".into()));
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub name: String,
    pub mode: String,
    pub sharing: String,
    pub status: String,
    pub final_train_loss: f64,
    pub final_train_acc: f64,
    pub final_eval_acc: f64,
    pub error: String,
}

#[derive(Clone, Debug)]
pub struct AblationSummary {
    pub rows: Vec<AblationRow>,
    /// GLIF eval accuracy minus the median over simplex rows, when both exist.
    pub glif_minus_simplex_median: Option<f64>,
}

fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(1)
}

/// Trains every grid entry on the same data split and seed. Each entry gets
/// `<out_dir>/<name>/` with metrics, checkpoint and parameter histograms; the
/// summary goes to `<out_dir>/ablation.csv`. A failing entry is recorded and
/// the run continues.
pub fn run_ablation(
    cfg: &ExperimentConfig,
    grid: &AblationGrid,
    out_dir: &Path,
    overwrite: bool,
) -> Result<AblationSummary> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::Config("ablation grid is empty".into()));
    }
    prepare_output_dir(out_dir, overwrite)?;
    let (train, eval) = cfg.datasets()?;
    let snapshot = out_dir.join(CONFIG_SNAPSHOT_FILE);
    fs::write(&snapshot, cfg.to_toml()?).map_err(|e| Error::io(&snapshot, e))?;

    let run_entry = |entry: &GridEntry| -> AblationRow {
        let sharing = entry.sharing.unwrap_or(cfg.network.sharing);
        let result = train_one(cfg, &train, &eval, entry.mode, sharing).and_then(|outcome| {
            let dir = out_dir.join(&entry.name);
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            write_metrics_csv(&outcome.history, &dir.join(METRICS_FILE))?;
            save_checkpoint(&outcome.network, &dir.join(CHECKPOINT_FILE))?;
            export_param_histograms(&outcome.network, &dir.join(HISTOGRAM_FILE), 20)?;
            Ok(outcome)
        });
        let mut row = AblationRow {
            name: entry.name.clone(),
            mode: entry.mode.label(),
            sharing: sharing.label().into(),
            status: "ok".into(),
            final_train_loss: f64::NAN,
            final_train_acc: f64::NAN,
            final_eval_acc: f64::NAN,
            error: String::new(),
        };
        match result {
            Ok(outcome) => {
                if let Some(last) = outcome.history.last() {
                    row.final_train_loss = last.train_loss;
                    row.final_train_acc = last.train_acc;
                    row.final_eval_acc = last.eval_acc;
                }
            }
            Err(e) => {
                row.status = "failed".into();
                row.error = e.to_string();
            }
        }
        row
    };

    let threads = thread_count().min(grid.len());
    let rows: Vec<AblationRow> = if threads <= 1 {
        grid.entries.iter().map(run_entry).collect()
    } else {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<AblationRow>>> = Mutex::new(vec![None; grid.len()]);
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(entry) = grid.entries.get(i) else { break };
                    let row = run_entry(entry);
                    slots.lock().expect("ablation slots")[i] = Some(row);
                });
            }
        });
        slots
            .into_inner()
            .expect("ablation slots")
            .into_iter()
            .map(|r| r.expect("every entry ran"))
            .collect()
    };

    let path = out_dir.join(ABLATION_FILE);
    let mut w = csv::Writer::from_path(&path).map_err(|e| Error::io(&path, std::io::Error::other(e)))?;
    for row in &rows {
        w.serialize(row).map_err(|e| Error::io(&path, std::io::Error::other(e)))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;

    Ok(AblationSummary {
        glif_minus_simplex_median: directional_gap(&rows),
        rows,
    })
}

fn directional_gap(rows: &[AblationRow]) -> Option<f64> {
    let glif = rows.iter().find(|r| r.name == "glif" && r.status == "ok")?.final_eval_acc;
    let mut simplex: Vec<f64> = rows
        .iter()
        .filter(|r| r.status == "ok" && r.name.len() == 3 && r.name.bytes().all(|b| b == b'0' || b == b'1'))
        .map(|r| r.final_eval_acc)
        .collect();
    if simplex.is_empty() {
        return None;
    }
    simplex.sort_by(f64::total_cmp);
    let n = simplex.len();
    let median = if n % 2 == 1 {
        simplex[n / 2]
    } else {
        0.5 * (simplex[n / 2 - 1] + simplex[n / 2])
    };
    Some(glif - median)
}
