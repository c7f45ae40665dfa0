//! One-hidden-layer perceptron with logistic units, trained by online
//! backpropagation with momentum on squared error.
//!
//! By default 0/1 inputs are rescaled to -1/+1 before they reach the hidden
//! layer, the same normalization WEKA's perceptron applies. A zero input
//! contributes no gradient to its weights, which stalls learning on the XOR
//! datasets.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check_width;
use crate::data::{Encoding, Subset};
use crate::error::{Error, Result};
use crate::math::sigmoid;

/// Half-width of the uniform weight initialization interval.
pub const INIT_RANGE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlpParams {
    pub hidden: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs: usize,
    /// Map {0, 1} features onto {-1, +1}; no effect on ±1 data.
    pub scale_inputs: bool,
}

impl Default for MlpParams {
    fn default() -> Self {
        Self {
            hidden: 16,
            learning_rate: 0.3,
            momentum: 0.2,
            epochs: 500,
            scale_inputs: true,
        }
    }
}

impl MlpParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidParameter(msg));
        if self.hidden == 0 {
            return bad("mlp hidden layer needs at least one unit".into());
        }
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return bad(format!(
                "mlp learning rate must be in (0, 1], got {}",
                self.learning_rate
            ));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return bad(format!(
                "mlp momentum must be in [0, 1), got {}",
                self.momentum
            ));
        }
        Ok(())
    }
}

/// Network with layer sizes `[d, h, 1]`.
///
/// `hidden_weights` is `h × d` row-major; the output unit has `h` weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    inputs: usize,
    /// Inputs are mapped through `2x - 1` before the hidden layer.
    rescale: bool,
    hidden_weights: Vec<f64>,
    hidden_bias: Vec<f64>,
    output_weights: Vec<f64>,
    output_bias: f64,
    params: MlpParams,
    seed: u64,
}

/// Gradient of the squared-error loss, laid out like [`MlpModel::parameters`].
pub type Gradient = Vec<f64>;

impl MlpModel {
    /// Seeded initialization: every weight and bias drawn uniformly from
    /// `[-0.5, 0.5]`, hidden layer first.
    /// `encoding` decides whether inputs are rescaled (see [`MlpParams::scale_inputs`]).
    pub fn initialize(inputs: usize, encoding: Encoding, params: &MlpParams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::init_with(inputs, encoding, params, seed, &mut rng)
    }

    fn init_with(
        inputs: usize,
        encoding: Encoding,
        params: &MlpParams,
        seed: u64,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let h = params.hidden;
        let mut draw = |n: usize| -> Vec<f64> {
            (0..n)
                .map(|_| rng.random_range(-INIT_RANGE..=INIT_RANGE))
                .collect()
        };
        let hidden_weights = draw(h * inputs);
        let hidden_bias = draw(h);
        let output_weights = draw(h);
        let output_bias = draw(1)[0];
        Self {
            inputs,
            rescale: params.scale_inputs && encoding == Encoding::Boolean,
            hidden_weights,
            hidden_bias,
            output_weights,
            output_bias,
            params: *params,
            seed,
        }
    }

    /// A network with explicit weights applied to raw inputs.
    /// `hidden_weights` has one row of `d` weights per hidden unit.
    pub fn from_weights(
        hidden_weights: Vec<Vec<f64>>,
        hidden_bias: Vec<f64>,
        output_weights: Vec<f64>,
        output_bias: f64,
    ) -> Result<Self> {
        let h = hidden_weights.len();
        let inputs = hidden_weights.first().map_or(0, Vec::len);
        if h == 0 || hidden_bias.len() != h || output_weights.len() != h {
            return Err(Error::InvalidParameter(
                "mlp weight shapes do not chain".into(),
            ));
        }
        if hidden_weights.iter().any(|r| r.len() != inputs) {
            return Err(Error::InvalidParameter(
                "ragged hidden weight matrix".into(),
            ));
        }
        Ok(Self {
            inputs,
            rescale: false,
            hidden_weights: hidden_weights.concat(),
            hidden_bias,
            output_weights,
            output_bias,
            params: MlpParams {
                hidden: h,
                epochs: 0,
                scale_inputs: false,
                ..MlpParams::default()
            },
            seed: 0,
        })
    }

    pub fn layer_sizes(&self) -> [usize; 3] {
        [self.inputs, self.hidden_bias.len(), 1]
    }

    pub fn params(&self) -> &MlpParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// All weights and biases flattened: hidden weights, hidden biases,
    /// output weights, output bias.
    pub fn parameters(&self) -> Vec<f64> {
        let mut p = self.hidden_weights.clone();
        p.extend_from_slice(&self.hidden_bias);
        p.extend_from_slice(&self.output_weights);
        p.push(self.output_bias);
        p
    }

    /// # Panics
    /// If `p` does not have the length of [`MlpModel::parameters`].
    pub fn set_parameters(&mut self, p: &[f64]) {
        let (hw, h) = (self.hidden_weights.len(), self.hidden_bias.len());
        assert_eq!(p.len(), hw + 2 * h + 1, "parameter vector length");
        self.hidden_weights.copy_from_slice(&p[..hw]);
        self.hidden_bias.copy_from_slice(&p[hw..hw + h]);
        self.output_weights.copy_from_slice(&p[hw + h..hw + 2 * h]);
        self.output_bias = p[hw + 2 * h];
    }

    /// Whether inputs are rescaled from {0, 1} to {-1, +1}.
    pub fn rescales_inputs(&self) -> bool {
        self.rescale
    }

    fn input(&self, x: &[f64], buf: &mut Vec<f64>) {
        buf.clear();
        if self.rescale {
            buf.extend(x.iter().map(|v| 2.0 * v - 1.0));
        } else {
            buf.extend_from_slice(x);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.parameters().iter().all(|v| v.is_finite())
    }

    fn forward_into(&self, x: &[f64], hidden: &mut [f64]) -> f64 {
        let d = self.inputs;
        let mut z = self.output_bias;
        for (j, a) in hidden.iter_mut().enumerate() {
            let w = &self.hidden_weights[j * d..(j + 1) * d];
            let s: f64 = w.iter().zip(x).map(|(w, x)| w * x).sum::<f64>() + self.hidden_bias[j];
            *a = sigmoid(s);
            z += self.output_weights[j] * *a;
        }
        sigmoid(z)
    }

    pub fn output(&self, x: &[f64]) -> Result<f64> {
        check_width(self.inputs, x)?;
        let mut hidden = vec![0.0; self.hidden_bias.len()];
        let mut buf = Vec::with_capacity(x.len());
        self.input(x, &mut buf);
        Ok(self.forward_into(&buf, &mut hidden))
    }

    /// Class 1 iff the output activation is strictly above 0.5.
    pub fn predict_with_output(&self, x: &[f64]) -> Result<(u8, f64)> {
        let o = self.output(x)?;
        Ok((u8::from(o > 0.5), o))
    }

    /// Loss `Σ ½ (o - y)²` over the samples and its gradient with respect to
    /// [`MlpModel::parameters`].
    pub fn loss_and_gradient(&self, samples: &[(&[f64], u8)]) -> Result<(f64, Gradient)> {
        let (d, h) = (self.inputs, self.hidden_bias.len());
        let mut grad = vec![0.0; d * h + 2 * h + 1];
        let mut hidden = vec![0.0; h];
        let mut buf = Vec::with_capacity(d);
        let mut loss = 0.0;
        for &(raw, y) in samples {
            check_width(d, raw)?;
            self.input(raw, &mut buf);
            let x = &buf[..];
            let o = self.forward_into(x, &mut hidden);
            let err = o - f64::from(y);
            loss += 0.5 * err * err;
            let delta_out = err * o * (1.0 - o);
            for j in 0..h {
                let delta_hidden =
                    delta_out * self.output_weights[j] * hidden[j] * (1.0 - hidden[j]);
                for (g, &xi) in grad[j * d..(j + 1) * d].iter_mut().zip(x) {
                    *g += delta_hidden * xi;
                }
                grad[d * h + j] += delta_hidden;
                grad[d * h + h + j] += delta_out * hidden[j];
            }
            grad[d * h + 2 * h] += delta_out;
        }
        Ok((loss, grad))
    }
}

/// Online backprop: each epoch visits the samples in a fresh seeded
/// permutation and updates after every sample.
pub fn mlp_train(train: &Subset<'_>, params: &MlpParams, seed: u64) -> Result<MlpModel> {
    params.validate()?;
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = MlpModel::init_with(train.width(), train.encoding(), params, seed, &mut rng);
    let (d, h) = (net.inputs, params.hidden);
    let (lr, mom) = (params.learning_rate, params.momentum);

    let mut hidden = vec![0.0; h];
    let mut delta_hidden = vec![0.0; h];
    let mut dw_hidden = vec![0.0; d * h];
    let mut db_hidden = vec![0.0; h];
    let mut dw_out = vec![0.0; h];
    let mut db_out = 0.0;
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut buf = Vec::with_capacity(d);

    for epoch in 0..params.epochs {
        order.shuffle(&mut rng);
        let mut loss = 0.0;
        for &i in &order {
            net.input(train.row(i), &mut buf);
            let x = &buf[..];
            let y = f64::from(train.label(i));
            let o = net.forward_into(x, &mut hidden);
            let err = o - y;
            loss += 0.5 * err * err;
            let delta_out = err * o * (1.0 - o);
            for j in 0..h {
                delta_hidden[j] = delta_out * net.output_weights[j] * hidden[j] * (1.0 - hidden[j]);
            }

            for j in 0..h {
                dw_out[j] = -lr * delta_out * hidden[j] + mom * dw_out[j];
                net.output_weights[j] += dw_out[j];
            }
            db_out = -lr * delta_out + mom * db_out;
            net.output_bias += db_out;

            for j in 0..h {
                let dj = delta_hidden[j];
                let w = &mut net.hidden_weights[j * d..(j + 1) * d];
                let dw = &mut dw_hidden[j * d..(j + 1) * d];
                for ((w, dw), &xi) in w.iter_mut().zip(dw.iter_mut()).zip(x) {
                    *dw = -lr * dj * xi + mom * *dw;
                    *w += *dw;
                }
                db_hidden[j] = -lr * dj + mom * db_hidden[j];
                net.hidden_bias[j] += db_hidden[j];
            }
        }
        if !loss.is_finite() {
            return Err(Error::Divergence { epoch });
        }
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::BinaryDataset;
    use alloc::string::ToString;

    fn xor4() -> BinaryDataset {
        BinaryDataset::new(
            "xor",
            vec!["a".to_string(), "b".to_string()],
            Encoding::Boolean,
            vec![
                vec![0.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
            ],
            vec![0, 1, 1, 0],
        )
        .unwrap()
    }

    #[test]
    fn zero_epochs_returns_initialization() {
        let ds = xor4();
        let params = MlpParams {
            epochs: 0,
            ..MlpParams::default()
        };
        let trained = mlp_train(&ds.all(), &params, 11).unwrap();
        assert_eq!(
            trained,
            MlpModel::initialize(2, Encoding::Boolean, &params, 11)
        );
        assert!(trained
            .parameters()
            .iter()
            .all(|w| (-INIT_RANGE..=INIT_RANGE).contains(w)));
    }

    #[test]
    fn training_is_deterministic() {
        let ds = xor4();
        let params = MlpParams {
            epochs: 50,
            ..MlpParams::default()
        };
        let a = mlp_train(&ds.all(), &params, 5).unwrap();
        let b = mlp_train(&ds.all(), &params, 5).unwrap();
        let bits = |m: &MlpModel| {
            m.parameters()
                .iter()
                .map(|v| v.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&mlp_train(&ds.all(), &params, 6).unwrap()));
    }

    #[test]
    fn learns_four_point_xor() {
        // Seed 1 reaches zero training error with this configuration.
        let ds = xor4();
        let params = MlpParams {
            hidden: 4,
            learning_rate: 0.3,
            momentum: 0.2,
            epochs: 5000,
            ..MlpParams::default()
        };
        let net = mlp_train(&ds.all(), &params, 1).unwrap();
        for (row, y) in ds.all().iter() {
            assert_eq!(net.predict_with_output(row).unwrap().0, y);
        }
        assert!(net.is_finite());
    }

    #[test]
    fn zero_weights_output_one_half() {
        let net = MlpModel::from_weights(vec![vec![0.0, 0.0]; 3], vec![0.0; 3], vec![0.0; 3], 0.0)
            .unwrap();
        let (class, o) = net.predict_with_output(&[1.0, 0.0]).unwrap();
        assert_eq!(o, 0.5);
        assert_eq!(class, 0);
    }

    #[test]
    fn hand_built_xor_network() {
        // Hidden unit 0 is OR, unit 1 is NAND, the output is AND of the two.
        let net = MlpModel::from_weights(
            vec![vec![20.0, 20.0], vec![-20.0, -20.0]],
            vec![-10.0, 30.0],
            vec![20.0, 20.0],
            -30.0,
        )
        .unwrap();
        for (x, y) in [
            ([0.0, 0.0], 0),
            ([0.0, 1.0], 1),
            ([1.0, 0.0], 1),
            ([1.0, 1.0], 0),
        ] {
            let (class, o) = net.predict_with_output(&x).unwrap();
            assert_eq!(class, y, "{x:?} -> {o}");
            assert_eq!(net.predict_with_output(&x).unwrap(), (class, o));
        }
    }

    #[test]
    fn shape_errors() {
        assert!(MlpModel::from_weights(
            vec![vec![1.0], vec![1.0, 2.0]],
            vec![0.0; 2],
            vec![0.0; 2],
            0.0
        )
        .is_err());
        assert!(MlpModel::from_weights(vec![vec![1.0]], vec![0.0; 2], vec![0.0], 0.0).is_err());
        let net = MlpModel::initialize(3, Encoding::Signed, &MlpParams::default(), 0);
        assert_eq!(net.layer_sizes(), [3, 16, 1]);
        assert_eq!(
            net.output(&[0.0; 2]),
            Err(Error::WidthMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn rejects_bad_hyperparameters() {
        let ds = xor4();
        for p in [
            MlpParams {
                hidden: 0,
                ..MlpParams::default()
            },
            MlpParams {
                learning_rate: 0.0,
                ..MlpParams::default()
            },
            MlpParams {
                learning_rate: 1.5,
                ..MlpParams::default()
            },
            MlpParams {
                momentum: 1.0,
                ..MlpParams::default()
            },
        ] {
            assert!(matches!(
                mlp_train(&ds.all(), &p, 0),
                Err(Error::InvalidParameter(_))
            ));
        }
    }
}
