use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{annotated_scene, render_preview, sample_seed, Annotation, SceneConfig, SceneError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: u64,
    pub seed: u64,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub preview: Option<String>,
    pub annotations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: u32,
    pub count: u64,
    pub config: SceneConfig,
    pub samples: Vec<ManifestEntry>,
}

/// One `class_id cx cy w h` line per annotation.
pub fn label_text(annotations: &[Annotation]) -> String {
    let mut s = String::new();
    for a in annotations {
        let [cx, cy, w, h] = a.bbox;
        s.push_str(&format!("{} {cx:.6} {cy:.6} {w:.6} {h:.6}\n", a.class_id));
    }
    s
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SceneError + '_ {
    move |source| SceneError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes via a sibling temp file and rename so partial files never appear
/// under the final name.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), SceneError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

fn produce(
    config: &SceneConfig,
    index: u64,
    out: &Path,
    previews: bool,
) -> Result<ManifestEntry, SceneError> {
    let label_rel = format!("labels/{index:06}.txt");
    let preview_rel = previews.then(|| format!("previews/{index:06}.ppm"));
    let label_path = out.join(&label_rel);
    let have_label = label_path.is_file();
    let have_preview = preview_rel.as_ref().is_none_or(|p| out.join(p).is_file());

    let annotations = if have_label && have_preview {
        fs::read_to_string(&label_path)
            .map_err(io_err(&label_path))?
            .lines()
            .count()
    } else {
        let sample = annotated_scene(config, index)?;
        if !have_label {
            write_atomic(&label_path, label_text(&sample.annotations).as_bytes())?;
        }
        if let Some(rel) = &preview_rel {
            if !have_preview {
                write_atomic(&out.join(rel), &render_preview(&sample, config).to_ppm())?;
            }
        }
        sample.annotations.len()
    };
    Ok(ManifestEntry {
        index,
        seed: sample_seed(config, index),
        label: label_rel,
        preview: preview_rel,
        annotations,
    })
}

/// Generates samples `0..n` under `out`, skipping samples whose files
/// already exist. With `jobs > 1` samples are striped across threads; the
/// output is identical to a serial run.
pub fn generate_dataset(
    config: &SceneConfig,
    n: u64,
    out: &Path,
    previews: bool,
    jobs: usize,
) -> Result<Manifest, SceneError> {
    config.validate()?;
    let labels = out.join("labels");
    fs::create_dir_all(&labels).map_err(io_err(&labels))?;
    if previews {
        let p = out.join("previews");
        fs::create_dir_all(&p).map_err(io_err(&p))?;
    }
    let jobs = jobs.max(1) as u64;
    let mut results: Vec<Result<ManifestEntry, SceneError>> = if jobs == 1 {
        (0..n).map(|i| produce(config, i, out, previews)).collect()
    } else {
        let mut parts: Vec<Vec<(u64, Result<ManifestEntry, SceneError>)>> = Vec::new();
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|t| {
                    s.spawn(move || {
                        (t..n)
                            .step_by(jobs as usize)
                            .map(|i| (i, produce(config, i, out, previews)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                parts.push(h.join().expect("worker panicked"));
            }
        });
        let mut all: Vec<_> = parts.into_iter().flatten().collect();
        all.sort_by_key(|(i, _)| *i);
        all.into_iter().map(|(_, r)| r).collect()
    };
    let samples = results.drain(..).collect::<Result<Vec<_>, _>>()?;
    let manifest = Manifest {
        format: "homecore-scenegen".into(),
        version: 1,
        count: n,
        config: config.clone(),
        samples,
    };
    let path = out.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("serializable");
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_format() {
        let a = Annotation {
            object: 0,
            class_id: 7,
            bbox: [0.5, 0.25, 0.125, 1.0],
        };
        assert_eq!(label_text(&[a]), "7 0.500000 0.250000 0.125000 1.000000\n");
        assert_eq!(label_text(&[]), "");
    }
}
