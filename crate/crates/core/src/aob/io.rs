//! JSON instance files.
//!
//! Layout: `{format_version, spec{base, s_size[], gamma[], bounds, seed},
//! permutation[], shift[], weights[], rotations[][][], subspaces[][]}`.
//! Reals are written in shortest round-trip form (at most 17 significant
//! digits), so a save/load cycle is bit-exact.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::instance::{ProblemInstance, ProblemSpec, Rotation};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

const SECTIONS: [&str; 7] = [
    "format_version",
    "spec",
    "permutation",
    "shift",
    "weights",
    "rotations",
    "subspaces",
];

#[derive(Serialize)]
struct InstanceFileRef<'a> {
    format_version: u32,
    spec: &'a ProblemSpec,
    permutation: &'a [usize],
    shift: &'a [f64],
    weights: &'a [f64],
    rotations: Vec<Vec<&'a [f64]>>,
    subspaces: &'a [Vec<usize>],
}

#[derive(Deserialize)]
struct InstanceFile {
    format_version: Option<u32>,
    spec: Option<ProblemSpec>,
    permutation: Option<Vec<usize>>,
    shift: Option<Vec<f64>>,
    weights: Option<Vec<f64>>,
    rotations: Option<Vec<Vec<Vec<f64>>>>,
    subspaces: Option<Vec<Vec<usize>>>,
}

pub fn instance_to_json(instance: &ProblemInstance) -> Result<String> {
    let file = InstanceFileRef {
        format_version: FORMAT_VERSION,
        spec: &instance.spec,
        permutation: &instance.permutation,
        shift: &instance.shift,
        weights: &instance.weights,
        rotations: instance.rotations.iter().map(|r| r.rows().collect()).collect(),
        subspaces: &instance.subspaces,
    };
    Ok(serde_json::to_string(&file)?)
}

pub fn instance_from_json(text: &str) -> Result<ProblemInstance> {
    let value: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) if e.is_eof() => {
            return Err(Error::TruncatedInstance {
                section: truncated_section(text).to_string(),
            })
        }
        Err(e) => return Err(Error::parse("instance file", e.to_string())),
    };
    let file: InstanceFile =
        serde_json::from_value(value).map_err(|e| Error::parse("instance file", e.to_string()))?;

    let version = file.format_version.ok_or_else(|| missing("format_version"))?;
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let spec = file.spec.ok_or_else(|| missing("spec"))?;
    let permutation = file.permutation.ok_or_else(|| missing("permutation"))?;
    let shift = file.shift.ok_or_else(|| missing("shift"))?;
    let weights = file.weights.ok_or_else(|| missing("weights"))?;
    let rotations = file
        .rotations
        .ok_or_else(|| missing("rotations"))?
        .into_iter()
        .map(Rotation::from_rows)
        .collect::<Result<Vec<_>>>()?;
    let subspaces = file.subspaces.ok_or_else(|| missing("subspaces"))?;

    let instance = ProblemInstance::from_parts(spec, permutation, shift, weights, rotations)?;
    if instance.subspaces != subspaces {
        return Err(Error::parse(
            "instance file",
            "subspaces do not match the permutation and overlap layout",
        ));
    }
    Ok(instance)
}

pub fn save_instance(instance: &ProblemInstance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, instance_to_json(instance)?).map_err(|e| Error::io(path, e))
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<ProblemInstance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    instance_from_json(&text)
}

fn missing(section: &str) -> Error {
    Error::MissingSection {
        section: section.to_string(),
    }
}

/// First section whose key never appears, or the last one started if all
/// keys made it into the text.
fn truncated_section(text: &str) -> &'static str {
    let mut last_started = (0usize, SECTIONS[0]);
    for name in SECTIONS {
        match text.find(&format!("\"{name}\"")) {
            None => return name,
            Some(pos) if pos >= last_started.0 => last_started = (pos, name),
            Some(_) => {}
        }
    }
    last_started.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aob::BaseFunction;

    fn instance() -> ProblemInstance {
        ProblemInstance::generate(&ProblemSpec::mini_preset(BaseFunction::Rastrigin, 3, 11).unwrap())
            .unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let inst = instance();
        let back = instance_from_json(&instance_to_json(&inst).unwrap()).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn truncation_names_missing_section() {
        let text = instance_to_json(&instance()).unwrap();
        let cut = text.find("\"rotations\"").unwrap() - 1;
        match instance_from_json(&text[..cut]) {
            Err(Error::TruncatedInstance { section }) => assert_eq!(section, "rotations"),
            other => panic!("unexpected {other:?}"),
        }
        // Cut inside the final section.
        match instance_from_json(&text[..text.len() - 5]) {
            Err(Error::TruncatedInstance { section }) => assert_eq!(section, "subspaces"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_and_version_errors() {
        let text = instance_to_json(&instance()).unwrap();
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v.as_object_mut().unwrap().remove("weights");
        assert!(matches!(
            instance_from_json(&v.to_string()),
            Err(Error::MissingSection { section }) if section == "weights"
        ));
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["format_version"] = 9.into();
        assert!(matches!(
            instance_from_json(&v.to_string()),
            Err(Error::VersionMismatch { found: 9, expected: 1 })
        ));
        assert!(matches!(instance_from_json("[1, 2]"), Err(Error::Parse { .. })));
    }

    #[test]
    fn tampered_subspaces_rejected() {
        let text = instance_to_json(&instance()).unwrap();
        let mut v: Value = serde_json::from_str(&text).unwrap();
        v["subspaces"][0][0] = 99999.into();
        assert!(instance_from_json(&v.to_string()).is_err());
    }
}
