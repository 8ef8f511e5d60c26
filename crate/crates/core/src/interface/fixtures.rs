use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::InterfaceError;
use crate::scoring::CaseAnnotation;
use crate::transcript::Transcript;

pub const CASE_NAMES: [&str; 4] = ["case1", "case2", "case3", "case4"];

const MANIFEST: &str = include_str!("../../fixtures/MANIFEST");

const EMBEDDED: [(&str, &str); 8] = [
    ("case1.jsonl", include_str!("../../fixtures/case1.jsonl")),
    (
        "case1.subscores.json",
        include_str!("../../fixtures/case1.subscores.json"),
    ),
    ("case2.jsonl", include_str!("../../fixtures/case2.jsonl")),
    (
        "case2.subscores.json",
        include_str!("../../fixtures/case2.subscores.json"),
    ),
    ("case3.jsonl", include_str!("../../fixtures/case3.jsonl")),
    (
        "case3.subscores.json",
        include_str!("../../fixtures/case3.subscores.json"),
    ),
    ("case4.jsonl", include_str!("../../fixtures/case4.jsonl")),
    (
        "case4.subscores.json",
        include_str!("../../fixtures/case4.subscores.json"),
    ),
];

/// One annotated case dialogue.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: String,
    pub transcript: Transcript,
    pub annotation: CaseAnnotation,
}

/// `sha256sum`-style manifest: `<hex>  <file>` per line.
pub fn parse_manifest(text: &str) -> Result<BTreeMap<String, String>, InterfaceError> {
    let mut out = BTreeMap::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (hash, file) = line
            .split_once("  ")
            .ok_or_else(|| InterfaceError::Invalid(format!("bad manifest line {line:?}")))?;
        out.insert(file.trim().to_string(), hash.trim().to_lowercase());
    }
    Ok(out)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn verify(
    manifest: &BTreeMap<String, String>,
    file: &str,
    bytes: &[u8],
) -> Result<(), InterfaceError> {
    let expected = manifest
        .get(file)
        .ok_or_else(|| InterfaceError::MissingFixture(format!("{file} (not in MANIFEST)")))?;
    let actual = sha256_hex(bytes);
    if &actual != expected {
        return Err(InterfaceError::CorruptFixture {
            file: file.to_string(),
            expected: expected.clone(),
            actual,
        });
    }
    Ok(())
}

fn build(
    manifest: &BTreeMap<String, String>,
    mut read: impl FnMut(&str) -> Result<Vec<u8>, InterfaceError>,
) -> Result<Vec<Fixture>, InterfaceError> {
    CASE_NAMES
        .iter()
        .map(|name| {
            let jsonl_name = format!("{name}.jsonl");
            let scores_name = format!("{name}.subscores.json");
            let jsonl = read(&jsonl_name)?;
            verify(manifest, &jsonl_name, &jsonl)?;
            let scores = read(&scores_name)?;
            verify(manifest, &scores_name, &scores)?;
            let transcript = Transcript::from_jsonl_reader(jsonl.as_slice())?;
            let annotation: CaseAnnotation = serde_json::from_slice(&scores)?;
            annotation.scores.validate()?;
            Ok(Fixture {
                name: name.to_string(),
                transcript,
                annotation,
            })
        })
        .collect()
}

/// The four bundled case dialogues with their published sub-scores.
pub fn load_fixtures() -> Result<Vec<Fixture>, InterfaceError> {
    let manifest = parse_manifest(MANIFEST)?;
    build(&manifest, |file| {
        EMBEDDED
            .iter()
            .find(|(n, _)| *n == file)
            .map(|(_, body)| body.as_bytes().to_vec())
            .ok_or_else(|| InterfaceError::MissingFixture(file.to_string()))
    })
}

/// Loads and hash-checks a fixture directory laid out like the bundled one.
pub fn load_fixtures_from(dir: impl AsRef<Path>) -> Result<Vec<Fixture>, InterfaceError> {
    let dir = dir.as_ref();
    let manifest_path = dir.join("MANIFEST");
    let manifest_text =
        fs::read_to_string(&manifest_path).map_err(|e| InterfaceError::io(&manifest_path, e))?;
    let manifest = parse_manifest(&manifest_text)?;
    build(&manifest, |file| {
        let path = dir.join(file);
        fs::read(&path).map_err(|e| InterfaceError::io(&path, e))
    })
}

/// Writes the bundled corpus to `dir`, MANIFEST included.
pub fn export_fixtures(dir: impl AsRef<Path>) -> Result<(), InterfaceError> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| InterfaceError::io(dir, e))?;
    for (name, body) in EMBEDDED.iter().chain([("MANIFEST", MANIFEST)].iter()) {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| InterfaceError::io(&path, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus() {
        let cases = load_fixtures().unwrap();
        assert_eq!(cases.len(), 4);
        let case1 = &cases[0].transcript;
        assert_eq!(case1.len(), 9);
        let speakers: std::collections::BTreeSet<_> =
            case1.iter().map(|t| t.speaker.as_str()).collect();
        assert_eq!(speakers.into_iter().collect::<Vec<_>>(), ["LLM", "Speaker"]);
        assert_eq!(
            cases[0].transcript.turns()[0].text,
            "I care for him, but not because I love him."
        );
        let total = crate::scoring::total_metric(
            &cases[3].annotation.scores,
            crate::scoring::Metric::ResponsibilityChain,
        )
        .unwrap();
        assert_eq!(total, 3);
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        export_fixtures(dir.path()).unwrap();
        assert_eq!(
            load_fixtures_from(dir.path()).unwrap(),
            load_fixtures().unwrap()
        );

        let path = dir.path().join("case2.subscores.json");
        let text = fs::read_to_string(&path)
            .unwrap()
            .replace("[2, 2, 2, 2]", "[2, 2, 2, 3]");
        fs::write(&path, text).unwrap();
        let err = load_fixtures_from(dir.path()).unwrap_err();
        assert!(
            matches!(err, InterfaceError::CorruptFixture { ref file, .. } if file == "case2.subscores.json")
        );
        assert_eq!(err.code(), "CorruptFixture");
    }

    #[test]
    fn missing_file() {
        let dir = tempfile::tempdir().unwrap();
        export_fixtures(dir.path()).unwrap();
        fs::remove_file(dir.path().join("case4.jsonl")).unwrap();
        assert!(matches!(
            load_fixtures_from(dir.path()),
            Err(InterfaceError::Io { .. })
        ));
    }
}
