//! Small feedforward threshold networks viewed as learning machines.
//!
//! A network is trained with logistic units and per-sample gradient descent,
//! but the function it *represents* is always read off in hard-threshold
//! mode: every unit outputs 1 iff its pre-activation is `>= 0`. Sweeping all
//! `2^N` inputs gives a truth table, and the canonical minimal DNF of that
//! table is the network's current X-form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::canonical_min_dnf;
use crate::jsonl;
use crate::pattern::{enumerate_patterns, Dataset, Pattern, MAX_WIDTH};
use crate::table::TruthTable;
use crate::xform::XForm;

/// Widest input for which the exhaustive input sweep is allowed.
pub const EXTRACTION_MAX_WIDTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("input width {0} is too large for extraction (limit {EXTRACTION_MAX_WIDTH})")]
    WidthTooLargeForExtraction(usize),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("width mismatch: network takes {expected} inputs, dataset has width {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("malformed network record: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    /// Step function, tie at 0 maps to 1.
    Hard,
    /// Logistic sigmoid, used for training only.
    Smooth,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Hard => {
                if z >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Smooth => 1.0 / (1.0 + (-z).exp()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    /// One row per unit, one column per unit of the previous layer.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn units(&self) -> usize {
        self.bias.len()
    }

    fn pre_activations(&self, input: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(row, b)| row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + b)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdNet {
    input_width: usize,
    layers: Vec<Layer>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetRecord {
    shape: Vec<usize>,
    layers: Vec<Layer>,
}

impl ThresholdNet {
    /// Checks that adjacent dimensions agree, the last layer has one unit and
    /// every parameter is finite.
    pub fn new(input_width: usize, layers: Vec<Layer>) -> Result<Self, NetError> {
        if input_width == 0 || input_width > MAX_WIDTH {
            return Err(NetError::BadShape(format!("input width {input_width} outside 1..={MAX_WIDTH}")));
        }
        if layers.is_empty() {
            return Err(NetError::BadShape("no layers".into()));
        }
        let mut prev = input_width;
        for (l, layer) in layers.iter().enumerate() {
            if layer.units() == 0 || layer.weights.len() != layer.units() {
                return Err(NetError::BadShape(format!(
                    "layer {l}: {} weight rows for {} biases",
                    layer.weights.len(),
                    layer.units()
                )));
            }
            if let Some(row) = layer.weights.iter().find(|r| r.len() != prev) {
                return Err(NetError::BadShape(format!("layer {l}: row of {} weights, expected {prev}", row.len())));
            }
            let finite = layer.weights.iter().flatten().chain(&layer.bias).all(|v| v.is_finite());
            if !finite {
                return Err(NetError::BadShape(format!("layer {l}: non-finite parameter")));
            }
            prev = layer.units();
        }
        if prev != 1 {
            return Err(NetError::BadShape(format!("final layer has {prev} units, expected 1")));
        }
        Ok(Self { input_width, layers })
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Layer widths, input first.
    pub fn shape(&self) -> Vec<usize> {
        std::iter::once(self.input_width).chain(self.layers.iter().map(Layer::units)).collect()
    }

    /// Multiplies one unit's weights and bias by `factor`.
    pub fn scale_unit(&mut self, layer: usize, unit: usize, factor: f64) {
        let l = &mut self.layers[layer];
        l.weights[unit].iter_mut().for_each(|w| *w *= factor);
        l.bias[unit] *= factor;
    }

    /// Output of the single final unit.
    pub fn forward(&self, input: &[f64], mode: Activation) -> f64 {
        let mut act = input.to_vec();
        for layer in &self.layers {
            act = layer.pre_activations(&act).into_iter().map(|z| mode.apply(z)).collect();
        }
        act[0]
    }

    /// True if some unit sees a pre-activation of exactly 0 on some input
    /// under hard thresholding.
    pub fn has_threshold_tie(&self) -> bool {
        let Ok(patterns) = enumerate_patterns(self.input_width) else { return false };
        patterns.iter().any(|p| {
            let mut act = inputs_of(p);
            self.layers.iter().any(|layer| {
                let z = layer.pre_activations(&act);
                let tie = z.contains(&0.0);
                act = z.into_iter().map(|v| Activation::Hard.apply(v)).collect();
                tie
            })
        })
    }

    pub fn to_json(&self) -> String {
        jsonl::to_line(&NetRecord { shape: self.shape(), layers: self.layers.clone() })
    }

    pub fn from_json(text: &str) -> Result<Self, NetError> {
        let record: NetRecord = serde_json::from_str(text).map_err(|e| NetError::Malformed(e.to_string()))?;
        let input_width = *record.shape.first().ok_or_else(|| NetError::Malformed("empty shape".into()))?;
        let net = Self::new(input_width, record.layers)?;
        if net.shape() != record.shape {
            return Err(NetError::Malformed(format!(
                "declared shape {:?} does not match layers {:?}",
                record.shape,
                net.shape()
            )));
        }
        Ok(net)
    }
}

fn inputs_of(p: &Pattern) -> Vec<f64> {
    p.bits().map(|b| if b { 1.0 } else { 0.0 }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Parameters are drawn uniformly from `[-init_scale, init_scale]`.
    pub init_scale: f64,
}

impl TrainConfig {
    /// A zero learning rate is accepted and freezes the network.
    pub fn new(learning_rate: f64, epochs: usize, seed: u64, init_scale: f64) -> Result<Self, NetError> {
        if !(learning_rate.is_finite() && learning_rate >= 0.0) {
            return Err(NetError::InvalidConfig(format!("learning rate {learning_rate}")));
        }
        if epochs == 0 {
            return Err(NetError::InvalidConfig("epochs must be positive".into()));
        }
        if !(init_scale.is_finite() && init_scale > 0.0) {
            return Err(NetError::InvalidConfig(format!("init scale {init_scale}")));
        }
        Ok(Self { learning_rate, epochs, seed, init_scale })
    }
}

/// Hard-mode truth table of `net` over all `2^N` inputs.
pub fn extract_function(net: &ThresholdNet) -> Result<TruthTable, NetError> {
    let n = net.input_width;
    if n > EXTRACTION_MAX_WIDTH {
        return Err(NetError::WidthTooLargeForExtraction(n));
    }
    let outputs = enumerate_patterns(n)
        .expect("width checked")
        .iter()
        .map(|p| net.forward(&inputs_of(p), Activation::Hard) == 1.0)
        .collect();
    Ok(TruthTable::new(n, outputs).expect("one output per pattern"))
}

pub fn net_to_xform(net: &ThresholdNet) -> Result<XForm, NetError> {
    Ok(canonical_min_dnf(&extract_function(net)?))
}

/// Seeded uniform initialization. Parameters are drawn layer by layer, each
/// unit's weights in column order followed by all the layer's biases.
pub fn init_net(shape: &[usize], cfg: &TrainConfig) -> Result<ThresholdNet, NetError> {
    if shape.len() < 2 {
        return Err(NetError::BadShape(format!("{shape:?} needs an input and an output layer")));
    }
    if shape.contains(&0) {
        return Err(NetError::BadShape(format!("{shape:?} has an empty layer")));
    }
    if shape[shape.len() - 1] != 1 {
        return Err(NetError::BadShape(format!("{shape:?} must end with a single unit")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let s = cfg.init_scale;
    let layers = shape
        .windows(2)
        .map(|w| {
            let (fan_in, units) = (w[0], w[1]);
            let weights = (0..units).map(|_| (0..fan_in).map(|_| rng.random_range(-s..=s)).collect()).collect();
            let bias = (0..units).map(|_| rng.random_range(-s..=s)).collect();
            Layer { weights, bias }
        })
        .collect();
    ThresholdNet::new(shape[0], layers)
}

/// One pass of per-sample gradient descent on `0.5 * (y - label)^2` with
/// logistic units, visiting samples in lexicographic pattern order.
pub fn train_epoch(net: &ThresholdNet, d: &Dataset, cfg: &TrainConfig) -> Result<ThresholdNet, NetError> {
    if d.width() != net.input_width {
        return Err(NetError::WidthMismatch { expected: net.input_width, found: d.width() });
    }
    let mut net = net.clone();
    let lr = cfg.learning_rate;
    if lr == 0.0 {
        return Ok(net);
    }
    for sample in d.iter() {
        // forward pass keeping every layer's activations, input included
        let mut acts = vec![inputs_of(&sample.pattern)];
        for layer in &net.layers {
            let z = layer.pre_activations(acts.last().expect("non-empty"));
            acts.push(z.into_iter().map(|v| Activation::Smooth.apply(v)).collect());
        }
        let y = acts.last().expect("non-empty")[0];
        let target = if sample.label { 1.0 } else { 0.0 };

        let mut deltas: Vec<Vec<f64>> = vec![Vec::new(); net.layers.len()];
        let last = net.layers.len() - 1;
        deltas[last] = vec![(y - target) * y * (1.0 - y)];
        for l in (0..last).rev() {
            let next = &net.layers[l + 1];
            deltas[l] = acts[l + 1]
                .iter()
                .enumerate()
                .map(|(j, &a)| {
                    let back: f64 = next.weights.iter().zip(&deltas[l + 1]).map(|(row, d)| row[j] * d).sum();
                    back * a * (1.0 - a)
                })
                .collect();
        }
        for (l, layer) in net.layers.iter_mut().enumerate() {
            for (u, delta) in deltas[l].iter().enumerate() {
                for (w, x) in layer.weights[u].iter_mut().zip(&acts[l]) {
                    *w -= lr * delta * x;
                }
                layer.bias[u] -= lr * delta;
            }
        }
    }
    Ok(net)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryEntry {
    pub epoch: usize,
    pub table: TruthTable,
    pub xform: XForm,
    pub xform_size: usize,
}

#[derive(Serialize)]
struct TrajectoryRecord {
    epoch: usize,
    table: String,
    xform: String,
    size: usize,
}

impl TrajectoryEntry {
    fn at(epoch: usize, table: TruthTable) -> Self {
        let xform = canonical_min_dnf(&table);
        let xform_size = xform.size();
        Self { epoch, table, xform, xform_size }
    }

    pub fn to_record(&self) -> String {
        jsonl::to_line(&TrajectoryRecord {
            epoch: self.epoch,
            table: self.table.to_string(),
            xform: self.xform.to_string(),
            size: self.xform_size,
        })
    }
}

/// Epoch 0 plus every epoch whose extracted table differs from the previous entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XFormTrajectory {
    pub entries: Vec<TrajectoryEntry>,
}

impl XFormTrajectory {
    pub fn last(&self) -> &TrajectoryEntry {
        self.entries.last().expect("epoch 0 is always recorded")
    }
}

/// Initializes a network, trains it for `cfg.epochs` epochs and records the
/// X-form trajectory. Returns the trajectory and the final network.
pub fn trace_training(
    shape: &[usize],
    d: &Dataset,
    cfg: &TrainConfig,
) -> Result<(XFormTrajectory, ThresholdNet), NetError> {
    if let Some(&n) = shape.first() {
        if n > EXTRACTION_MAX_WIDTH {
            return Err(NetError::WidthTooLargeForExtraction(n));
        }
    }
    let mut net = init_net(shape, cfg)?;
    if d.width() != net.input_width {
        return Err(NetError::WidthMismatch { expected: net.input_width, found: d.width() });
    }
    let mut entries = vec![TrajectoryEntry::at(0, extract_function(&net)?)];
    for epoch in 1..=cfg.epochs {
        net = train_epoch(&net, d, cfg)?;
        let table = extract_function(&net)?;
        if table != entries.last().expect("non-empty").table {
            entries.push(TrajectoryEntry::at(epoch, table));
        }
    }
    Ok((XFormTrajectory { entries }, net))
}
