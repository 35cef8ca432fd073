//! Synthetic desk-scale tasks and small file-backed datasets.
//!
//! Every sample is a `time_steps x dim` array of real-valued input currents in
//! `[0, 1]`, so the default threshold of 0.5 is reachable from the first layer.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::encode_constant;

/// Independent random streams derived from one experiment seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Data = 1,
    Split = 2,
    Init = 3,
    Shuffle = 4,
    GradCheck = 5,
}

pub fn rng_for(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// `time_steps x dim`.
    pub input: Vec<Vec<f64>>,
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledSpikeDataset {
    pub samples: Vec<Sample>,
    pub num_classes: usize,
    pub time_steps: usize,
    pub dim: usize,
}

impl LabeledSpikeDataset {
    pub fn new(samples: Vec<Sample>, num_classes: usize, time_steps: usize, dim: usize) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if s.input.len() != time_steps || s.input.iter().any(|r| r.len() != dim) {
                return Err(Error::Dataset(format!(
                    "sample {i} is not {time_steps}x{dim}"
                )));
            }
            if s.label >= num_classes {
                return Err(Error::Dataset(format!(
                    "sample {i} has label {} but there are {num_classes} classes",
                    s.label
                )));
            }
        }
        Ok(LabeledSpikeDataset {
            samples,
            num_classes,
            time_steps,
            dim,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn subset(&self, idx: &[usize]) -> Self {
        LabeledSpikeDataset {
            samples: idx.iter().map(|&i| self.samples[i].clone()).collect(),
            num_classes: self.num_classes,
            time_steps: self.time_steps,
            dim: self.dim,
        }
    }

    /// Seeded shuffle, then the first `round(eval_fraction * n)` samples go to
    /// the eval set. Returns `(train, eval)`.
    pub fn split(&self, eval_fraction: f64, seed: u64) -> Result<(Self, Self)> {
        if !(0.0..1.0).contains(&eval_fraction) {
            return Err(Error::Dataset(format!(
                "eval fraction {eval_fraction} must lie in [0, 1)"
            )));
        }
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut rng_for(seed, Stream::Split));
        let n_eval = (eval_fraction * self.len() as f64).round() as usize;
        let (eval, train) = idx.split_at(n_eval);
        Ok((self.subset(train), self.subset(eval)))
    }

    /// Seeded batches of sample indices covering the dataset once.
    pub fn batches(&self, batch_size: usize, seed: u64) -> Vec<Vec<usize>> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.shuffle(&mut rng_for(seed, Stream::Shuffle));
        idx.chunks(batch_size.max(1)).map(<[usize]>::to_vec).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    /// Classes differ by mean input intensity, constant over time.
    RatePatterns,
    /// Classes share one spatial pattern and differ by when it arrives.
    TemporalPositionPatterns,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticTaskSpec {
    pub kind: TaskKind,
    pub dim: usize,
    pub time_steps: usize,
    pub num_classes: usize,
    pub samples_per_class: usize,
    pub noise_std: f64,
    pub seed: u64,
}

impl SyntheticTaskSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Dataset(format!("degenerate task: {m}")));
        if self.dim == 0 || self.time_steps == 0 {
            return bad("dim and time_steps must be positive");
        }
        if self.num_classes == 0 || self.samples_per_class == 0 {
            return bad("need at least one class and one sample per class");
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return bad("noise_std must be finite and >= 0");
        }
        if self.kind == TaskKind::TemporalPositionPatterns && self.time_steps < self.num_classes {
            return bad("temporal task needs time_steps >= num_classes");
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<LabeledSpikeDataset> {
        match self.kind {
            TaskKind::RatePatterns => gen_rate_task(self),
            TaskKind::TemporalPositionPatterns => gen_temporal_task(self),
        }
    }
}

/// Per-class mean intensities of the rate task, drawn from `[0.1, 0.9)`.
pub fn rate_class_means(spec: &SyntheticTaskSpec) -> Vec<Vec<f64>> {
    draw_means(spec, &mut rng_for(spec.seed, Stream::Data))
}

fn draw_means(spec: &SyntheticTaskSpec, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..spec.num_classes)
        .map(|_| (0..spec.dim).map(|_| rng.random_range(0.1..0.9)).collect())
        .collect()
}

fn noisy(base: &[f64], noise: Option<&Normal<f64>>, rng: &mut ChaCha8Rng) -> Vec<f64> {
    base.iter()
        .map(|&m| match noise {
            Some(n) => (m + n.sample(rng)).clamp(0.0, 1.0),
            None => m,
        })
        .collect()
}

fn normal(std: f64) -> Result<Option<Normal<f64>>> {
    if std == 0.0 {
        return Ok(None);
    }
    Normal::new(0.0, std)
        .map(Some)
        .map_err(|e| Error::Dataset(e.to_string()))
}

/// Class `k` is its mean vector plus clamped Gaussian noise, held constant
/// over time. Samples are ordered class by class.
pub fn gen_rate_task(spec: &SyntheticTaskSpec) -> Result<LabeledSpikeDataset> {
    spec.validate()?;
    let noise = normal(spec.noise_std)?;
    let mut rng = rng_for(spec.seed, Stream::Data);
    let means = draw_means(spec, &mut rng);
    let mut samples = Vec::with_capacity(spec.num_classes * spec.samples_per_class);
    for (label, mean) in means.iter().enumerate() {
        for _ in 0..spec.samples_per_class {
            let x = noisy(mean, noise.as_ref(), &mut rng);
            samples.push(Sample {
                input: encode_constant(&x, spec.time_steps),
                label,
            });
        }
    }
    LabeledSpikeDataset::new(samples, spec.num_classes, spec.time_steps, spec.dim)
}

/// Burst window `[start, end)` of class `label` in the temporal task.
pub fn burst_window(label: usize, num_classes: usize, time_steps: usize) -> (usize, usize) {
    let width = time_steps / num_classes;
    (label * width, (label + 1) * width)
}

/// Every class carries the same spatial pattern (drawn from `[0.5, 1.0)`) for
/// the same number of steps; class `k` places it in window `k`, so per-sample
/// input totals carry no class information.
pub fn gen_temporal_task(spec: &SyntheticTaskSpec) -> Result<LabeledSpikeDataset> {
    spec.validate()?;
    let mut rng = rng_for(spec.seed, Stream::Data);
    let pattern: Vec<f64> = (0..spec.dim).map(|_| rng.random_range(0.5..1.0)).collect();
    let noise = normal(spec.noise_std)?;
    let mut samples = Vec::with_capacity(spec.num_classes * spec.samples_per_class);
    for label in 0..spec.num_classes {
        let (start, end) = burst_window(label, spec.num_classes, spec.time_steps);
        for _ in 0..spec.samples_per_class {
            let x = noisy(&pattern, noise.as_ref(), &mut rng);
            let input = (0..spec.time_steps)
                .map(|t| {
                    if (start..end).contains(&t) {
                        x.clone()
                    } else {
                        vec![0.0; spec.dim]
                    }
                })
                .collect();
            samples.push(Sample { input, label });
        }
    }
    LabeledSpikeDataset::new(samples, spec.num_classes, spec.time_steps, spec.dim)
}

/// Leaves rows alone when every value is already in `[0, 1]`; otherwise
/// rescales globally by `(x - min) / (max - min)`.
pub fn normalize_unit_interval(rows: &mut [Vec<f64>]) {
    let (min, max) = rows
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if min >= 0.0 && max <= 1.0 {
        return;
    }
    let span = max - min;
    for v in rows.iter_mut().flatten() {
        *v = if span > 0.0 { (*v - min) / span } else { 0.0 };
    }
}

fn from_static_rows(
    rows: Vec<Vec<f64>>,
    labels: Vec<usize>,
    time_steps: usize,
    path: &Path,
) -> Result<LabeledSpikeDataset> {
    if rows.is_empty() {
        return Err(Error::Dataset(format!("{} contains no samples", path.display())));
    }
    let dim = rows[0].len();
    let num_classes = labels.iter().max().map_or(0, |m| m + 1);
    let samples = rows
        .into_iter()
        .zip(labels)
        .map(|(x, label)| Sample {
            input: encode_constant(&x, time_steps),
            label,
        })
        .collect();
    LabeledSpikeDataset::new(samples, num_classes, time_steps, dim)
}

fn parse_err(path: &Path, location: String, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        location,
        message: message.into(),
    }
}

/// Reads `label,f0,f1,...` rows and encodes each over `time_steps`.
pub fn load_csv(path: &Path, time_steps: usize) -> Result<LabeledSpikeDataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if text.trim().is_empty() {
        return Err(Error::Dataset(format!("{} is empty", path.display())));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| parse_err(path, "line 1".into(), e.to_string()))?
        .clone();
    if header.get(0) != Some("label")
        || header.len() < 2
        || header.iter().skip(1).enumerate().any(|(i, h)| h != format!("f{i}"))
    {
        return Err(parse_err(
            path,
            "line 1".into(),
            "header must be label,f0,f1,...",
        ));
    }
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(path, format!("line {line}"), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let loc = || format!("line {line}");
        let label = record[0]
            .parse::<usize>()
            .map_err(|e| parse_err(path, loc(), format!("label {:?}: {e}", &record[0])))?;
        let x = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(i, v)| {
                v.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(path, loc(), format!("f{i} = {v:?} is not a finite number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(x);
        labels.push(label);
    }
    normalize_unit_interval(&mut rows);
    from_static_rows(rows, labels, time_steps, path)
}

/// Writes the first time step of every sample as `label,f0,f1,...`.
pub fn write_csv(data: &LabeledSpikeDataset, path: &Path) -> Result<()> {
    let io = |e: csv::Error| Error::io(path, std::io::Error::other(e));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let mut header = vec!["label".to_string()];
    header.extend((0..data.dim).map(|i| format!("f{i}")));
    w.write_record(&header).map_err(io)?;
    for s in &data.samples {
        let mut row = vec![s.label.to_string()];
        row.extend(s.input[0].iter().map(|v| format!("{v:?}")));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Element types of the IDX container.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdxType {
    U8 = 0x08,
    I8 = 0x09,
    I16 = 0x0B,
    I32 = 0x0C,
    F32 = 0x0D,
    F64 = 0x0E,
}

impl IdxType {
    fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0x08 => IdxType::U8,
            0x09 => IdxType::I8,
            0x0B => IdxType::I16,
            0x0C => IdxType::I32,
            0x0D => IdxType::F32,
            0x0E => IdxType::F64,
            _ => return None,
        })
    }

    fn width(self) -> usize {
        match self {
            IdxType::U8 | IdxType::I8 => 1,
            IdxType::I16 => 2,
            IdxType::I32 | IdxType::F32 => 4,
            IdxType::F64 => 8,
        }
    }
}

/// A decoded IDX array: dimensions and values in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct IdxArray {
    pub kind: IdxType,
    pub dims: Vec<usize>,
    pub values: Vec<f64>,
}

pub fn parse_idx(bytes: &[u8], path: &Path) -> Result<IdxArray> {
    let at = |off: usize| format!("byte offset {off}");
    if bytes.is_empty() {
        return Err(Error::Dataset(format!("{} is empty", path.display())));
    }
    if bytes.len() < 4 || bytes[0] != 0 || bytes[1] != 0 {
        return Err(parse_err(path, at(0), "bad magic number"));
    }
    let kind = IdxType::from_code(bytes[2])
        .ok_or_else(|| parse_err(path, at(2), format!("unknown element type 0x{:02x}", bytes[2])))?;
    let ndim = bytes[3] as usize;
    let header = 4 + 4 * ndim;
    if bytes.len() < header {
        return Err(parse_err(path, at(bytes.len()), "truncated dimension table"));
    }
    let dims: Vec<usize> = (0..ndim)
        .map(|i| {
            let o = 4 + 4 * i;
            u32::from_be_bytes([bytes[o], bytes[o + 1], bytes[o + 2], bytes[o + 3]]) as usize
        })
        .collect();
    let count: usize = dims.iter().product();
    let expected = header + count * kind.width();
    if bytes.len() != expected {
        return Err(parse_err(
            path,
            at(bytes.len().min(expected)),
            format!("expected {expected} bytes, found {}", bytes.len()),
        ));
    }
    let body = &bytes[header..];
    let values = body
        .chunks_exact(kind.width())
        .map(|c| match kind {
            IdxType::U8 => c[0] as f64,
            IdxType::I8 => c[0] as i8 as f64,
            IdxType::I16 => i16::from_be_bytes([c[0], c[1]]) as f64,
            IdxType::I32 => i32::from_be_bytes([c[0], c[1], c[2], c[3]]) as f64,
            IdxType::F32 => f32::from_be_bytes([c[0], c[1], c[2], c[3]]) as f64,
            IdxType::F64 => f64::from_be_bytes(c.try_into().expect("8-byte chunk")),
        })
        .collect();
    Ok(IdxArray { kind, dims, values })
}

pub fn encode_idx(array: &IdxArray) -> Vec<u8> {
    let mut out = vec![0, 0, array.kind as u8, array.dims.len() as u8];
    for &d in &array.dims {
        out.extend_from_slice(&(d as u32).to_be_bytes());
    }
    for &v in &array.values {
        match array.kind {
            IdxType::U8 => out.push(v as u8),
            IdxType::I8 => out.push(v as i8 as u8),
            IdxType::I16 => out.extend_from_slice(&(v as i16).to_be_bytes()),
            IdxType::I32 => out.extend_from_slice(&(v as i32).to_be_bytes()),
            IdxType::F32 => out.extend_from_slice(&(v as f32).to_be_bytes()),
            IdxType::F64 => out.extend_from_slice(&v.to_be_bytes()),
        }
    }
    out
}

/// Loads an IDX image file and its label file. `u8` images are scaled by
/// 1/255; other types go through [`normalize_unit_interval`].
pub fn load_idx(images: &Path, labels: &Path, time_steps: usize) -> Result<LabeledSpikeDataset> {
    let read = |p: &Path| fs::read(p).map_err(|e| Error::io(p, e));
    let img = parse_idx(&read(images)?, images)?;
    let lab = parse_idx(&read(labels)?, labels)?;
    let n = img.dims.first().copied().unwrap_or(0);
    if lab.dims.len() != 1 || lab.dims[0] != n {
        return Err(parse_err(
            labels,
            "byte offset 4".into(),
            format!("label file has dims {:?}, images have {n} samples", lab.dims),
        ));
    }
    if n == 0 {
        return Err(Error::Dataset(format!("{} contains no samples", images.display())));
    }
    let dim = img.values.len() / n;
    let mut rows: Vec<Vec<f64>> = img.values.chunks(dim.max(1)).map(<[f64]>::to_vec).collect();
    if img.kind == IdxType::U8 {
        rows.iter_mut().flatten().for_each(|v| *v /= 255.0);
    } else {
        normalize_unit_interval(&mut rows);
    }
    let labels_out = lab
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(parse_err(labels, format!("label {i}"), format!("{v} is not a class index")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    from_static_rows(rows, labels_out, time_steps, images)
}

/// Writes the first time step of every sample as an `f64` image file and a
/// `u8` label file.
pub fn write_idx(data: &LabeledSpikeDataset, images: &Path, labels: &Path) -> Result<()> {
    let img = IdxArray {
        kind: IdxType::F64,
        dims: vec![data.len(), data.dim],
        values: data.samples.iter().flat_map(|s| s.input[0].clone()).collect(),
    };
    let lab = IdxArray {
        kind: IdxType::U8,
        dims: vec![data.len()],
        values: data.samples.iter().map(|s| s.label as f64).collect(),
    };
    let write = |p: &Path, bytes: Vec<u8>| {
        fs::File::create(p)
            .and_then(|mut f| f.write_all(&bytes))
            .map_err(|e| Error::io(p, e))
    };
    write(images, encode_idx(&img))?;
    write(labels, encode_idx(&lab))
}
