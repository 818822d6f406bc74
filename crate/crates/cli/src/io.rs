//! Atomic file output and the on-disk layout of handover documents.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::NamedTempFile;

use lts_eval::scenario::TestCase;
use lts_eval::testbed::{ExperimentData, ExperimentManifest};
use lts_eval::trajectory::{io as traj_io, Source, Trajectory};

pub const EXPERIMENT_FILE: &str = "experiment.yaml";
pub const TESTCASE_FILE: &str = "testcase.yaml";
pub const GT_FILE: &str = "gt.csv";
pub const LTS_FILE: &str = "lts.csv";

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| anyhow!(e.error))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_yaml<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_yaml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_yaml<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_yaml::to_string(value)?;
    write_atomic(path, text.as_bytes())
}

pub fn read_trajectory(path: &Path, source: Source) -> Result<Trajectory> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    traj_io::read_csv(source, f).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    let mut buf = Vec::new();
    traj_io::write_csv(traj, &mut buf)?;
    write_atomic(path, &buf)
}

/// Resolves `rel` against the directory holding `anchor`.
pub fn resolve(anchor: &Path, rel: &Path) -> PathBuf {
    if rel.is_absolute() {
        return rel.to_path_buf();
    }
    anchor.parent().map_or_else(|| rel.to_path_buf(), |d| d.join(rel))
}

/// Experiment directory: trajectories, the test case and a manifest whose
/// paths are relative to the directory.
pub fn write_experiment(
    dir: &Path,
    tc: &TestCase,
    data: &ExperimentData,
    lts_name: Option<&str>,
) -> Result<PathBuf> {
    write_trajectory(&dir.join(GT_FILE), &data.gt)?;
    write_trajectory(&dir.join(LTS_FILE), &data.lts)?;
    write_yaml(&dir.join(TESTCASE_FILE), tc)?;
    let manifest = ExperimentManifest {
        test_case_id: data.test_case_id.clone(),
        testcase: TESTCASE_FILE.into(),
        gt_csv: GT_FILE.into(),
        lts_csv: LTS_FILE.into(),
        lts_name: lts_name.map(str::to_owned),
        seed: data.seed,
        error_model_sha256: data.error_model_sha256.clone(),
        static_gate_log: data.static_gate_log.clone(),
    };
    let path = dir.join(EXPERIMENT_FILE);
    write_yaml(&path, &manifest)?;
    Ok(path)
}

pub struct LoadedExperiment {
    pub testcase: TestCase,
    pub data: ExperimentData,
    pub lts_name: Option<String>,
}

/// Accepts the manifest itself or the directory containing it.
pub fn read_experiment(path: &Path) -> Result<LoadedExperiment> {
    let path = if path.is_dir() { path.join(EXPERIMENT_FILE) } else { path.to_path_buf() };
    let m: ExperimentManifest = read_yaml(&path)?;
    let testcase: TestCase = read_yaml(&resolve(&path, Path::new(&m.testcase)))?;
    let gt = read_trajectory(&resolve(&path, Path::new(&m.gt_csv)), Source::GroundTruth)?;
    let lts = read_trajectory(&resolve(&path, Path::new(&m.lts_csv)), Source::Lts)?;
    Ok(LoadedExperiment {
        testcase,
        data: ExperimentData {
            test_case_id: m.test_case_id,
            gt,
            lts,
            static_gate_log: m.static_gate_log,
            seed: m.seed,
            error_model_sha256: m.error_model_sha256,
        },
        lts_name: m.lts_name,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b/c.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn resolve_is_relative_to_anchor() {
        assert_eq!(resolve(Path::new("/x/m.yaml"), Path::new("t.yaml")), PathBuf::from("/x/t.yaml"));
        assert_eq!(resolve(Path::new("/x/m.yaml"), Path::new("/y")), PathBuf::from("/y"));
    }
}
