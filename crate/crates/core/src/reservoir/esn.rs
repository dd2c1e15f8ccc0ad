use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EsnError;

/// Reservoir hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EsnConfig {
    pub n_reservoir: usize,
    pub spectral_radius: f64,
    pub input_scaling: f64,
    pub leak_rate: f64,
    pub connectivity: f64,
    pub ridge: f64,
    /// Leading frames per sequence whose states are ignored.
    pub washout: usize,
    pub seed: u64,
}

impl Default for EsnConfig {
    fn default() -> Self {
        Self {
            n_reservoir: 100,
            spectral_radius: 0.9,
            input_scaling: 0.5,
            leak_rate: 0.3,
            connectivity: 0.1,
            ridge: 1e-6,
            washout: 20,
            seed: 0,
        }
    }
}

impl EsnConfig {
    pub fn validate(&self) -> Result<(), EsnError> {
        let bad = |m: String| Err(EsnError::InvalidConfig(m));
        if self.n_reservoir < 1 {
            return bad("n_reservoir must be at least 1".into());
        }
        if !(self.spectral_radius > 0.0 && self.spectral_radius < 1.0) {
            return bad(format!("spectral_radius {} not in (0, 1)", self.spectral_radius));
        }
        if !(self.leak_rate > 0.0 && self.leak_rate <= 1.0) {
            return bad(format!("leak_rate {} not in (0, 1]", self.leak_rate));
        }
        if !(self.connectivity > 0.0 && self.connectivity <= 1.0) {
            return bad(format!("connectivity {} not in (0, 1]", self.connectivity));
        }
        if !(self.input_scaling >= 0.0 && self.input_scaling.is_finite()) {
            return bad(format!("input_scaling {} must be finite and >= 0", self.input_scaling));
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return bad(format!("ridge {} must be finite and >= 0", self.ridge));
        }
        Ok(())
    }
}

/// Squarings before the spectral-radius estimate is accepted regardless.
const MAX_SQUARINGS: usize = 64;
/// Relative change between successive estimates that ends the iteration.
const RADIUS_TOLERANCE: f64 = 1e-13;
/// Radius (relative to the Frobenius norm) below which a matrix counts as nilpotent.
const NILPOTENT_TOLERANCE: f64 = 1e-8;
const MAX_RESAMPLES: usize = 8;

fn mat_square(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        let dst = &mut out[i * n..(i + 1) * n];
        for (k, &aik) in row.iter().enumerate() {
            if aik == 0.0 {
                continue;
            }
            let src = &a[k * n..(k + 1) * n];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d += aik * s;
            }
        }
    }
    out
}

/// Largest eigenvalue magnitude of a square row-major matrix.
///
/// Power iteration on the matrix itself: repeated squaring gives
/// `‖M^k‖^(1/k)` for `k = 2, 4, 8, …`, which converges to the spectral radius
/// even when the dominant eigenvalues form a complex pair or several
/// eigenvalues share the largest modulus. Each power is renormalized and the
/// scale carried in log space.
pub fn spectral_radius(m: &[f64], n: usize) -> f64 {
    assert_eq!(m.len(), n * n, "matrix must be n x n");
    let frob = |a: &[f64]| a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let base = frob(m);
    if base == 0.0 {
        return 0.0;
    }
    let mut a: Vec<f64> = m.iter().map(|x| x / base).collect();
    let mut log_scale = base.ln();
    let mut power = 1.0f64;
    let mut estimate = base;
    for _ in 0..MAX_SQUARINGS {
        a = mat_square(&a, n);
        log_scale *= 2.0;
        power *= 2.0;
        let f = frob(&a);
        if f == 0.0 || !f.is_finite() {
            return 0.0;
        }
        for x in a.iter_mut() {
            *x /= f;
        }
        log_scale += f.ln();
        let next = (log_scale / power).exp();
        let done = (next - estimate).abs() <= RADIUS_TOLERANCE * next;
        estimate = next;
        if done {
            break;
        }
    }
    estimate
}

/// Echo state network with a fixed random reservoir and a linear readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Esn {
    pub config: EsnConfig,
    pub input_dim: usize,
    /// `n_reservoir × input_dim`, row-major.
    pub w_in: Vec<f64>,
    /// `n_reservoir × n_reservoir`, row-major.
    pub w_res: Vec<f64>,
    /// Readout `[bias, w_1 … w_n]`; `None` until trained.
    pub w_out: Option<Vec<f64>>,
    #[serde(skip)]
    state: Vec<f64>,
}

impl Esn {
    /// Builds a reservoir deterministically from `config.seed`.
    pub fn new(config: EsnConfig, input_dim: usize) -> Result<Self, EsnError> {
        config.validate()?;
        if input_dim == 0 {
            return Err(EsnError::InvalidConfig("input_dim must be at least 1".into()));
        }
        let n = config.n_reservoir;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut w_res = vec![0.0; n * n];
        let mut radius = 0.0;
        for _ in 0..MAX_RESAMPLES {
            for w in w_res.iter_mut() {
                *w = if rng.random::<f64>() < config.connectivity {
                    rng.random_range(-1.0..=1.0)
                } else {
                    0.0
                };
            }
            let frob = w_res.iter().map(|x| x * x).sum::<f64>().sqrt();
            radius = spectral_radius(&w_res, n);
            if frob > 0.0 && radius > NILPOTENT_TOLERANCE * frob {
                break;
            }
            radius = 0.0;
        }
        if radius == 0.0 {
            return Err(EsnError::ZeroSpectralRadius);
        }
        let gain = config.spectral_radius / radius;
        for w in w_res.iter_mut() {
            *w *= gain;
        }
        let s = config.input_scaling;
        let w_in = (0..n * input_dim)
            .map(|_| if s > 0.0 { rng.random_range(-s..=s) } else { 0.0 })
            .collect();
        Ok(Self {
            config,
            input_dim,
            w_in,
            w_res,
            w_out: None,
            state: vec![0.0; n],
        })
    }

    pub fn n_reservoir(&self) -> usize {
        self.config.n_reservoir
    }

    pub fn zero_state(&self) -> Vec<f64> {
        vec![0.0; self.n_reservoir()]
    }

    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn reset(&mut self) {
        self.state = self.zero_state();
    }

    /// Leaky-tanh update of an external state buffer:
    /// `x ← (1−α)x + α·tanh(W_res·x + W_in·u)`.
    pub fn step(&self, x: &mut [f64], u: &[f64]) -> Result<(), EsnError> {
        let n = self.n_reservoir();
        if u.len() != self.input_dim {
            return Err(EsnError::DimensionMismatch {
                expected: self.input_dim,
                got: u.len(),
            });
        }
        if x.len() != n {
            return Err(EsnError::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let a = self.config.leak_rate;
        let pre: Vec<f64> = (0..n)
            .map(|i| {
                let r: f64 = self.w_res[i * n..(i + 1) * n]
                    .iter()
                    .zip(x.iter())
                    .map(|(w, s)| w * s)
                    .sum();
                let d = self.input_dim;
                let v: f64 = self.w_in[i * d..(i + 1) * d]
                    .iter()
                    .zip(u)
                    .map(|(w, s)| w * s)
                    .sum();
                r + v
            })
            .collect();
        for (xi, p) in x.iter_mut().zip(pre) {
            *xi = (1.0 - a) * *xi + a * p.tanh();
        }
        Ok(())
    }

    /// Advances the internal state by one input and returns it.
    pub fn update(&mut self, u: &[f64]) -> Result<&[f64], EsnError> {
        if self.state.len() != self.n_reservoir() {
            self.reset();
        }
        let mut x = std::mem::take(&mut self.state);
        let r = self.step(&mut x, u);
        self.state = x;
        r.map(|_| self.state.as_slice())
    }

    /// Replaces the internal state (e.g. to study forgetting of initial conditions).
    pub fn set_state(&mut self, x: Vec<f64>) -> Result<(), EsnError> {
        if x.len() != self.n_reservoir() {
            return Err(EsnError::DimensionMismatch {
                expected: self.n_reservoir(),
                got: x.len(),
            });
        }
        self.state = x;
        Ok(())
    }

    /// Runs a sequence from the zero state and returns the states after
    /// every frame.
    pub fn run(&self, frames: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, EsnError> {
        let mut x = self.zero_state();
        let mut out = Vec::with_capacity(frames.len());
        for u in frames {
            self.step(&mut x, u)?;
            out.push(x.clone());
        }
        Ok(out)
    }

    /// Serialized model including the config echo.
    pub fn to_json(&self) -> String {
        let file = ModelFile {
            format: MODEL_FORMAT.into(),
            version: MODEL_VERSION,
            esn: self.clone(),
        };
        serde_json::to_string(&file).expect("model serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, EsnError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| EsnError::Format(e.to_string()))?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(EsnError::Format(format!(
                "unsupported model {} v{}",
                file.format, file.version
            )));
        }
        let mut esn = file.esn;
        esn.config.validate()?;
        let n = esn.config.n_reservoir;
        if esn.w_res.len() != n * n || esn.w_in.len() != n * esn.input_dim {
            return Err(EsnError::Format("weight shapes do not match config".into()));
        }
        if esn.w_out.as_ref().is_some_and(|w| w.len() != n + 1) {
            return Err(EsnError::Format("readout length does not match config".into()));
        }
        esn.reset();
        Ok(esn)
    }
}

const MODEL_FORMAT: &str = "homecore-esn";
const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    #[serde(flatten)]
    esn: Esn,
}
