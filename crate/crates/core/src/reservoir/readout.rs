use serde::{Deserialize, Serialize};

use super::{Esn, EsnError};
use crate::linalg::cholesky_solve;

/// Pivot floor (relative to the largest diagonal entry) for the ridge system.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Waving,
    NotWaving,
}

impl Label {
    pub fn target(self) -> f64 {
        match self {
            Label::Waving => 1.0,
            Label::NotWaving => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSequence {
    pub label: Label,
    pub frames: Vec<Vec<f64>>,
}

/// Ridge regression `w = (SᵀS + λI)⁻¹ Sᵀy` for a row-major `rows × cols`
/// design matrix.
pub fn ridge_solve(
    design: &[f64],
    rows: usize,
    cols: usize,
    targets: &[f64],
    lambda: f64,
) -> Result<Vec<f64>, EsnError> {
    assert_eq!(design.len(), rows * cols);
    assert_eq!(targets.len(), rows);
    let mut gram = vec![0.0; cols * cols];
    let mut rhs = vec![0.0; cols];
    for r in 0..rows {
        let row = &design[r * cols..(r + 1) * cols];
        for i in 0..cols {
            let ri = row[i];
            if ri == 0.0 {
                continue;
            }
            rhs[i] += ri * targets[r];
            for j in i..cols {
                gram[i * cols + j] += ri * row[j];
            }
        }
    }
    for i in 0..cols {
        for j in 0..i {
            gram[i * cols + j] = gram[j * cols + i];
        }
        gram[i * cols + i] += lambda;
    }
    cholesky_solve(gram, cols, rhs, 1, SINGULAR_TOLERANCE).map_err(|e| EsnError::SingularSystem {
        pivot: e.pivot,
    })
}

/// Post-washout reservoir states of every sequence as readout features
/// `[1, x_1 … x_n]`, with one ±1 target per row.
pub fn collect_states(esn: &Esn, sequences: &[LabeledSequence]) -> Result<(Vec<f64>, Vec<f64>), EsnError> {
    let washout = esn.config.washout;
    let mut design = Vec::new();
    let mut targets = Vec::new();
    for s in sequences {
        for x in esn.run(&s.frames)?.into_iter().skip(washout) {
            design.push(1.0);
            design.extend_from_slice(&x);
            targets.push(s.label.target());
        }
    }
    Ok((design, targets))
}

/// Trains the linear readout by ridge regression on per-frame states.
pub fn fit_readout(esn: &mut Esn, sequences: &[LabeledSequence]) -> Result<(), EsnError> {
    let has = |l: Label| sequences.iter().any(|s| s.label == l);
    if !has(Label::Waving) {
        return Err(EsnError::MissingClass(Label::Waving));
    }
    if !has(Label::NotWaving) {
        return Err(EsnError::MissingClass(Label::NotWaving));
    }
    let (design, targets) = collect_states(esn, sequences)?;
    let cols = esn.n_reservoir() + 1;
    let rows = targets.len();
    if rows == 0 {
        return Err(EsnError::InvalidConfig(
            "every sequence is shorter than the washout".into(),
        ));
    }
    esn.w_out = Some(ridge_solve(&design, rows, cols, &targets, esn.config.ridge)?);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub label: Label,
    /// Mean readout over the scored frames; positive means waving.
    pub score: f64,
}

/// Runs the sequence from the zero state and thresholds the mean readout
/// over post-washout frames at 0. Sequences no longer than the washout are
/// scored over all frames.
pub fn classify(esn: &Esn, frames: &[Vec<f64>]) -> Result<Classification, EsnError> {
    let w = esn.w_out.as_ref().ok_or(EsnError::UntrainedModel)?;
    if frames.is_empty() {
        return Err(EsnError::EmptySequence);
    }
    let washout = if frames.len() > esn.config.washout {
        esn.config.washout
    } else {
        0
    };
    let mut x = esn.zero_state();
    let mut sum = 0.0;
    let mut count = 0usize;
    for (t, u) in frames.iter().enumerate() {
        esn.step(&mut x, u)?;
        if t >= washout {
            sum += w[0] + w[1..].iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
            count += 1;
        }
    }
    let score = sum / count as f64;
    Ok(Classification {
        label: if score > 0.0 {
            Label::Waving
        } else {
            Label::NotWaving
        },
        score,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    /// `[[true waving → waving, true waving → not], [not → waving, not → not]]`.
    pub confusion: [[usize; 2]; 2],
    pub total: usize,
}

pub fn evaluate(esn: &Esn, sequences: &[LabeledSequence]) -> Result<Evaluation, EsnError> {
    let mut confusion = [[0usize; 2]; 2];
    for s in sequences {
        let c = classify(esn, &s.frames)?;
        let row = (s.label == Label::NotWaving) as usize;
        let col = (c.label == Label::NotWaving) as usize;
        confusion[row][col] += 1;
    }
    let correct = confusion[0][0] + confusion[1][1];
    Ok(Evaluation {
        accuracy: if sequences.is_empty() {
            0.0
        } else {
            correct as f64 / sequences.len() as f64
        },
        confusion,
        total: sequences.len(),
    })
}
