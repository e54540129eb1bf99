//! Feed-forward networks over a flat parameter vector, and the
//! classification-error objective.
//!
//! Flat layout, layer by layer from input to output: the weight matrix stored
//! row-major by destination neuron (`w[dest * fan_in + src]`), followed by that
//! layer's biases. A 1-1-1 network `[a, b, c, d]` therefore has hidden weight
//! `a`, hidden bias `b`, output weight `c` and output bias `d`.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objective::Objective;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Sigmoid,
    Tanh,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Sigmoid => sigmoid(z),
            Activation::Tanh => z.tanh(),
        }
    }
}

/// Logistic function, branch form so `exp` never overflows.
#[inline]
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// How network outputs become a class index.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputHead {
    /// One output in (0, 1), scaled to `[0, classes - 1]` and rounded.
    #[default]
    Rounded,
    /// One output per class, largest wins.
    Argmax,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology {
    pub inputs: usize,
    pub hidden: Vec<usize>,
    pub outputs: usize,
    pub hidden_activation: Activation,
    pub output_activation: Activation,
}

impl NetworkTopology {
    pub fn new(inputs: usize, hidden: Vec<usize>, outputs: usize) -> Result<Self> {
        if inputs == 0 || outputs == 0 || hidden.contains(&0) {
            return Err(Error::config("every layer needs at least one neuron"));
        }
        Ok(Self {
            inputs,
            hidden,
            outputs,
            hidden_activation: Activation::Sigmoid,
            output_activation: Activation::Sigmoid,
        })
    }

    /// One hidden layer of `2 * inputs + 1` sigmoid neurons and one output.
    pub fn benchmark(inputs: usize) -> Result<Self> {
        Self::new(inputs, vec![2 * inputs + 1], 1)
    }

    /// `(fan_in, fan_out)` for each layer, input side first.
    pub fn layer_shapes(&self) -> Vec<(usize, usize)> {
        let mut widths = Vec::with_capacity(self.hidden.len() + 2);
        widths.push(self.inputs);
        widths.extend_from_slice(&self.hidden);
        widths.push(self.outputs);
        widths.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn parameter_count(&self) -> usize {
        self.layer_shapes()
            .iter()
            .map(|&(fan_in, fan_out)| fan_in * fan_out + fan_out)
            .sum()
    }

    fn activation(&self, layer: usize) -> Activation {
        if layer == self.hidden.len() {
            self.output_activation
        } else {
            self.hidden_activation
        }
    }

    fn max_width(&self) -> usize {
        self.hidden.iter().copied().chain([self.inputs, self.outputs]).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Weights,
    Biases,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub layer: usize,
    pub kind: SegmentKind,
    pub range: Range<usize>,
}

/// Maps flat parameter vectors to layer weights and back.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDecoding {
    topology: NetworkTopology,
    segments: Vec<Segment>,
    len: usize,
}

impl WeightDecoding {
    pub fn new(topology: NetworkTopology) -> Self {
        let mut segments = Vec::new();
        let mut at = 0;
        for (layer, (fan_in, fan_out)) in topology.layer_shapes().into_iter().enumerate() {
            let w = fan_in * fan_out;
            segments.push(Segment {
                layer,
                kind: SegmentKind::Weights,
                range: at..at + w,
            });
            at += w;
            segments.push(Segment {
                layer,
                kind: SegmentKind::Biases,
                range: at..at + fan_out,
            });
            at += fan_out;
        }
        Self {
            topology,
            segments,
            len: at,
        }
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn parameter_count(&self) -> usize {
        self.len
    }

    fn check_len(&self, flat: &[f64]) -> Result<()> {
        if flat.len() != self.len {
            return Err(Error::DimensionMismatch {
                expected: self.len,
                found: flat.len(),
            });
        }
        Ok(())
    }

    pub fn decode(&self, flat: &[f64]) -> Result<Network> {
        self.check_len(flat)?;
        let layers = self
            .segments
            .chunks(2)
            .zip(self.topology.layer_shapes())
            .enumerate()
            .map(|(layer, (pair, (fan_in, fan_out)))| Layer {
                fan_in,
                fan_out,
                weights: flat[pair[0].range.clone()].to_vec(),
                biases: flat[pair[1].range.clone()].to_vec(),
                activation: self.topology.activation(layer),
            })
            .collect();
        Ok(Network { layers })
    }

    pub fn encode(&self, net: &Network) -> Result<Vec<f64>> {
        let shapes = self.topology.layer_shapes();
        if net.layers.len() != shapes.len()
            || net
                .layers
                .iter()
                .zip(&shapes)
                .any(|(l, &(i, o))| l.fan_in != i || l.fan_out != o)
        {
            return Err(Error::config("network shape does not match the decoding"));
        }
        let mut flat = Vec::with_capacity(self.len);
        for l in &net.layers {
            flat.extend_from_slice(&l.weights);
            flat.extend_from_slice(&l.biases);
        }
        Ok(flat)
    }

    /// Forward pass straight off the flat vector. `scratch` is resized as
    /// needed and holds the output on return.
    pub fn forward_flat<'s>(&self, flat: &[f64], x: &[f64], scratch: &'s mut Scratch) -> Result<&'s [f64]> {
        self.check_len(flat)?;
        if x.len() != self.topology.inputs {
            return Err(Error::DimensionMismatch {
                expected: self.topology.inputs,
                found: x.len(),
            });
        }
        Ok(self.forward_unchecked(flat, x, scratch))
    }

    fn forward_unchecked<'s>(&self, flat: &[f64], x: &[f64], scratch: &'s mut Scratch) -> &'s [f64] {
        let width = self.topology.max_width();
        scratch.a.resize(width, 0.0);
        scratch.b.resize(width, 0.0);
        scratch.a[..x.len()].copy_from_slice(x);
        let mut n_in = x.len();
        for (layer, pair) in self.segments.chunks(2).enumerate() {
            let fan_out = pair[1].range.len();
            layer_forward(
                &flat[pair[0].range.clone()],
                &flat[pair[1].range.clone()],
                self.topology.activation(layer),
                &scratch.a[..n_in],
                &mut scratch.b[..fan_out],
            );
            std::mem::swap(&mut scratch.a, &mut scratch.b);
            n_in = fan_out;
        }
        &scratch.a[..n_in]
    }
}

#[derive(Debug, Default, Clone)]
pub struct Scratch {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[inline]
fn layer_forward(weights: &[f64], biases: &[f64], act: Activation, input: &[f64], out: &mut [f64]) {
    let fan_in = input.len();
    for (o, (row, &b)) in out.iter_mut().zip(weights.chunks_exact(fan_in).zip(biases)) {
        let z = row.iter().zip(input).fold(b, |acc, (w, x)| acc + w * x);
        *o = act.apply(z);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub fan_in: usize,
    pub fan_out: usize,
    /// `fan_out` rows of `fan_in` weights.
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
    pub activation: Activation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub layers: Vec<Layer>,
}

impl Network {
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let first = self.layers.first().ok_or(Error::config("network has no layers"))?;
        if x.len() != first.fan_in {
            return Err(Error::DimensionMismatch {
                expected: first.fan_in,
                found: x.len(),
            });
        }
        let mut cur = x.to_vec();
        for l in &self.layers {
            let mut next = vec![0.0; l.fan_out];
            layer_forward(&l.weights, &l.biases, l.activation, &cur, &mut next);
            cur = next;
        }
        if cur.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(cur)
    }
}

/// Class index for a network output.
pub fn classify(output: &[f64], class_count: usize, head: OutputHead) -> Result<usize> {
    if output.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if output.is_empty() || class_count == 0 {
        return Err(Error::EmptySamples);
    }
    Ok(match head {
        OutputHead::Rounded => {
            let top = (class_count - 1) as f64;
            (output[0] * top).round().clamp(0.0, top) as usize
        }
        OutputHead::Argmax => {
            let mut best = 0;
            for (i, v) in output.iter().enumerate().skip(1) {
                if *v > output[best] {
                    best = i;
                }
            }
            best
        }
    })
}

/// Percentage of misclassified samples for a flat weight vector. Lower is better.
#[derive(Debug, Clone)]
pub struct ClassificationObjective {
    decoding: WeightDecoding,
    features: Vec<f64>,
    labels: Vec<usize>,
    class_count: usize,
    head: OutputHead,
}

impl ClassificationObjective {
    /// `features` is row-major, one row of `topology.inputs` values per label.
    pub fn new(
        decoding: WeightDecoding,
        features: Vec<f64>,
        labels: Vec<usize>,
        class_count: usize,
        head: OutputHead,
    ) -> Result<Self> {
        let d = decoding.topology().inputs;
        if labels.is_empty() {
            return Err(Error::EmptySamples);
        }
        if features.len() != labels.len() * d {
            return Err(Error::DimensionMismatch {
                expected: labels.len() * d,
                found: features.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_count) {
            return Err(Error::data(format!("label {bad} outside [0, {class_count})")));
        }
        let outs = decoding.topology().outputs;
        match head {
            OutputHead::Rounded if outs != 1 => {
                return Err(Error::config("rounded head needs exactly one output"));
            }
            OutputHead::Argmax if outs != class_count => {
                return Err(Error::config("argmax head needs one output per class"));
            }
            _ => {}
        }
        Ok(Self {
            decoding,
            features,
            labels,
            class_count,
            head,
        })
    }

    pub fn decoding(&self) -> &WeightDecoding {
        &self.decoding
    }

    pub fn sample_count(&self) -> usize {
        self.labels.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    fn misclassified(&self, flat: &[f64]) -> usize {
        let d = self.decoding.topology().inputs;
        let mut scratch = Scratch::default();
        self.features
            .chunks_exact(d)
            .zip(&self.labels)
            .filter(|(x, &label)| {
                let out = self.decoding.forward_unchecked(flat, x, &mut scratch);
                // non-finite output counts as a miss
                classify(out, self.class_count, self.head).map_or(true, |c| c != label)
            })
            .count()
    }

    /// `100 * misses / samples`.
    pub fn error(&self, flat: &[f64]) -> Result<f64> {
        self.decoding.check_len(flat)?;
        Ok(100.0 * self.misclassified(flat) as f64 / self.labels.len() as f64)
    }
}

impl Objective for ClassificationObjective {
    fn dimension(&self) -> usize {
        self.decoding.parameter_count()
    }

    fn evaluate(&self, position: &[f64]) -> f64 {
        self.error(position).unwrap_or(100.0)
    }
}

pub fn classification_error(flat: &[f64], obj: &ClassificationObjective) -> Result<f64> {
    obj.error(flat)
}
