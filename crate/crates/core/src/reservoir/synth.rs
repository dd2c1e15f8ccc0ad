//! Synthetic waving / not-waving skeleton sequences.
//!
//! Waving moves the right wrist horizontally along a sinusoid of 0.5–2 Hz
//! (30 fps); not-waving holds a static pose. Both add Gaussian keypoint noise
//! of σ = 0.02 shoulder widths, and the fingertip patch brightens with wrist
//! motion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::features::{feature_vector, FingertipPatch, Joint, SkeletonFrame};
use super::readout::{Label, LabeledSequence};
use super::EsnError;
use crate::geometry::Point2;

pub const FPS: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub frames: usize,
    pub min_freq_hz: f64,
    pub max_freq_hz: f64,
    /// Keypoint noise in shoulder widths.
    pub noise: f64,
    pub patch_size: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            frames: 100,
            min_freq_hz: 0.5,
            max_freq_hz: 2.0,
            noise: 0.02,
            patch_size: 6,
        }
    }
}

fn mix(seed: u64, index: u64) -> u64 {
    crate::rng::stream_seed(seed, index)
}

/// One sequence; the RNG stream depends only on `(seed, index)`.
pub fn generate_sequence(
    cfg: &SynthConfig,
    label: Label,
    seed: u64,
    index: u64,
) -> Result<LabeledSequence, EsnError> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, index));
    let noise = Normal::new(0.0, cfg.noise.max(0.0)).map_err(|e| EsnError::InvalidConfig(e.to_string()))?;
    let patch_noise = Normal::new(0.0, 0.05).expect("valid sigma");

    // Body placement in pixels: position- and scale-varied so the
    // normalization has work to do.
    let neck = Point2::new(rng.random_range(150.0..490.0), rng.random_range(120.0..300.0));
    let scale = rng.random_range(40.0..90.0);
    let body = |p: Point2| neck.add(p.scale(scale));

    let raised = Point2::new(rng.random_range(0.6..1.0), rng.random_range(-0.9..-0.4));
    let lowered = Point2::new(rng.random_range(0.5..0.8), rng.random_range(1.0..1.4));
    let right_home = match label {
        Label::Waving => raised,
        // Half of the static sequences hold the hand up without moving it.
        Label::NotWaving if rng.random_bool(0.5) => raised,
        Label::NotWaving => lowered,
    };
    let left_wrist = Point2::new(rng.random_range(-0.8..-0.5), rng.random_range(1.0..1.4));
    let freq = rng.random_range(cfg.min_freq_hz..=cfg.max_freq_hz);
    let amplitude = rng.random_range(0.2..0.4);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);

    let mut frames = Vec::with_capacity(cfg.frames);
    let mut prev_x = None;
    for t in 0..cfg.frames {
        let offset = match label {
            Label::Waving => {
                amplitude * (std::f64::consts::TAU * freq * t as f64 / FPS + phase).sin()
            }
            Label::NotWaving => 0.0,
        };
        let mut jitter = || Point2::new(noise.sample(&mut rng), noise.sample(&mut rng));
        let rw = right_home.add(Point2::new(offset, 0.0)).add(jitter());
        let frame = SkeletonFrame::default()
            .with(Joint::Neck, body(jitter()))
            .with(Joint::LeftShoulder, body(Point2::new(-0.5, 0.15).add(jitter())))
            .with(Joint::RightShoulder, body(Point2::new(0.5, 0.15).add(jitter())))
            .with(Joint::LeftWrist, body(left_wrist.add(jitter())))
            .with(Joint::RightWrist, body(rw));
        // The patch sees the real hand, so detector jitter does not light it up.
        let motion = prev_x.map_or(0.0, |px: f64| (offset - px).abs());
        prev_x = Some(offset);
        let level = (0.2 + 4.0 * motion).min(1.0);
        let n = cfg.patch_size.max(1);
        let pixels = (0..n * n)
            .map(|_| (level + patch_noise.sample(&mut rng)).clamp(0.0, 1.0))
            .collect();
        let patch = FingertipPatch::new(n, n, pixels)?;
        frames.push(feature_vector(&frame, &patch)?);
    }
    Ok(LabeledSequence { label, frames })
}

/// Alternating labels (even indices waving), `count` sequences.
pub fn generate_dataset(
    cfg: &SynthConfig,
    count: usize,
    seed: u64,
) -> Result<Vec<LabeledSequence>, EsnError> {
    (0..count)
        .map(|i| {
            let label = if i % 2 == 0 {
                Label::Waving
            } else {
                Label::NotWaving
            };
            generate_sequence(cfg, label, seed, i as u64)
        })
        .collect()
}

/// Training and held-out test sets drawn from disjoint seed streams.
pub fn benchmark_split(
    cfg: &SynthConfig,
    train: usize,
    test: usize,
    seed: u64,
) -> Result<(Vec<LabeledSequence>, Vec<LabeledSequence>), EsnError> {
    Ok((
        generate_dataset(cfg, train, mix(seed, 0x7472_6169_6e))?,
        generate_dataset(cfg, test, mix(seed, 0x7465_7374))?,
    ))
}

#[derive(Serialize, Deserialize)]
struct JsonLine {
    label: Label,
    frames: Vec<Vec<f64>>,
}

pub fn to_jsonl(seqs: &[LabeledSequence]) -> String {
    let mut out = String::new();
    for s in seqs {
        out.push_str(
            &serde_json::to_string(&JsonLine {
                label: s.label,
                frames: s.frames.clone(),
            })
            .expect("serializable"),
        );
        out.push('\n');
    }
    out
}

pub fn from_jsonl(text: &str) -> Result<Vec<LabeledSequence>, EsnError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let j: JsonLine = serde_json::from_str(l)
                .map_err(|e| EsnError::Format(format!("line {}: {e}", i + 1)))?;
            if j.frames.is_empty() {
                return Err(EsnError::Format(format!("line {}: sequence has no frames", i + 1)));
            }
            Ok(LabeledSequence {
                label: j.label,
                frames: j.frames,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::FEATURE_DIM;

    #[test]
    fn generator_shapes_and_determinism() {
        let cfg = SynthConfig::default();
        let a = generate_dataset(&cfg, 4, 9).unwrap();
        assert_eq!(a, generate_dataset(&cfg, 4, 9).unwrap());
        assert!(a.iter().all(|s| s.frames.len() == 100));
        assert!(a[0].frames.iter().all(|f| f.len() == FEATURE_DIM));
        assert_eq!(a[1].label, Label::NotWaving);
    }

    #[test]
    fn jsonl_round_trip() {
        let seqs = generate_dataset(&SynthConfig { frames: 3, ..Default::default() }, 2, 1).unwrap();
        let text = to_jsonl(&seqs);
        assert!(text.starts_with(r#"{"label":"waving","frames":[["#));
        assert_eq!(from_jsonl(&text).unwrap(), seqs);
        assert!(from_jsonl("{\"label\":\"jumping\",\"frames\":[[1]]}").is_err());
    }
}
