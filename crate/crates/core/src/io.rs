//! Line-delimited JSON file formats.
//!
//! Every file is one JSON object per line; blank lines are skipped. Unknown fields are
//! ignored with a warning. See `docs/formats.md` for the field reference.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{ArgumentGraph, ArgumentPair, PairKind, RelationLabel, ScoreBundle, TaskMode};

/// A loaded graph with its score bundles.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub graph: ArgumentGraph,
    pub scores: BTreeMap<String, ScoreBundle>,
    pub warnings: Vec<String>,
}

/// One line of a predictions file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub pair_id: String,
    pub support: f64,
    pub attack: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub neutral: Option<f64>,
    pub predicted: RelationLabel,
    pub energy_share: f64,
    pub converged: bool,
}

impl PredictionRecord {
    /// Score of `label`; neutral is 0 when the record has no neutral column.
    pub fn score(&self, label: RelationLabel) -> f64 {
        match label {
            RelationLabel::Support => self.support,
            RelationLabel::Attack => self.attack,
            RelationLabel::Neutral => self.neutral.unwrap_or(0.0),
        }
    }

    /// One-hot scores for systems that only emit a label.
    pub fn one_hot(pair_id: impl Into<String>, label: RelationLabel, mode: TaskMode) -> Self {
        let hot = |l| if label == l { 1.0 } else { 0.0 };
        PredictionRecord {
            pair_id: pair_id.into(),
            support: hot(RelationLabel::Support),
            attack: hot(RelationLabel::Attack),
            neutral: (mode == TaskMode::Ternary).then(|| hot(RelationLabel::Neutral)),
            predicted: label,
            energy_share: 0.0,
            converged: true,
        }
    }
}

/// One line of a scoring manifest: a pair that still needs a score bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub pair_id: String,
    pub statement_id: String,
    pub claim_id: String,
    pub kind: PairKind,
}

/// Parses every non-blank line of `path` as `T`, reporting unknown fields as warnings.
pub fn read_jsonl<T>(path: &Path, warnings: &mut Vec<String>) -> Result<Vec<(usize, T)>>
where
    T: DeserializeOwned + Serialize,
{
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: Value =
            serde_json::from_str(&line).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        let record: T =
            serde_json::from_value(raw.clone()).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        let canonical = serde_json::to_value(&record).expect("records serialize");
        let mut unknown = Vec::new();
        unknown_fields(&raw, &canonical, "", &mut unknown);
        for field in unknown {
            warnings.push(format!("{}: line {line_no}: unknown field `{field}` ignored", path.display()));
        }
        records.push((line_no, record));
    }
    Ok(records)
}

fn unknown_fields(raw: &Value, canonical: &Value, prefix: &str, out: &mut Vec<String>) {
    match (raw, canonical) {
        (Value::Object(raw), Value::Object(known)) => {
            for (key, value) in raw {
                let path = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                match known.get(key) {
                    Some(inner) => unknown_fields(value, inner, &path, out),
                    None if value.is_null() => {}
                    None => out.push(path),
                }
            }
        }
        (Value::Array(raw), Value::Array(known)) => {
            for (i, (value, inner)) in raw.iter().zip(known).enumerate() {
                unknown_fields(value, inner, &format!("{prefix}[{i}]"), out);
            }
        }
        _ => {}
    }
}

/// Writes one JSON line per record, atomically (temp file + rename).
pub fn write_jsonl<'a, T, I>(path: &Path, records: I) -> Result<()>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    write_atomic(path, |w| {
        for record in records {
            serde_json::to_writer(&mut *w, record).map_err(std::io::Error::other)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })
}

/// Writes through a temp file in the destination directory, then renames over `path`.
pub fn write_atomic(path: &Path, body: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<()> {
    let file_name =
        path.file_name().ok_or_else(|| Error::Invalid(format!("`{}` is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", file_name.to_string_lossy()));
    let result = (|| {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        body(&mut w)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

/// Reads the arguments file into a validated graph.
pub fn load_arguments(path: &Path, mode: TaskMode, warnings: &mut Vec<String>) -> Result<ArgumentGraph> {
    let mut graph = ArgumentGraph::new(mode);
    for (line, pair) in read_jsonl::<ArgumentPair>(path, warnings)? {
        graph.add_pair(pair).map_err(|e| match e {
            Error::Invalid(message) => Error::Parse { line, message },
            other => other,
        })?;
    }
    graph.check_indirect()?;
    Ok(graph)
}

/// Reads and validates score bundles; every bundle must name a pair of `graph`.
pub fn load_scores(
    path: &Path,
    graph: &ArgumentGraph,
    warnings: &mut Vec<String>,
) -> Result<BTreeMap<String, ScoreBundle>> {
    let mut scores = BTreeMap::new();
    for (line, mut bundle) in read_jsonl::<ScoreBundle>(path, warnings)? {
        if graph.get(&bundle.pair_id).is_none() {
            return Err(Error::field(line, "pair_id", format!("unknown pair `{}`", bundle.pair_id)));
        }
        warnings.extend(bundle.validate(line)?);
        if scores.contains_key(&bundle.pair_id) {
            return Err(Error::field(line, "pair_id", format!("duplicate bundle for `{}`", bundle.pair_id)));
        }
        scores.insert(bundle.pair_id.clone(), bundle);
    }
    Ok(scores)
}

/// Loads an arguments file and its scores file. Warnings are also sent to the log.
pub fn load_dataset(arguments: &Path, scores: &Path, mode: TaskMode) -> Result<Dataset> {
    let mut warnings = Vec::new();
    let graph = load_arguments(arguments, mode, &mut warnings)?;
    let scores = load_scores(scores, &graph, &mut warnings)?;
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Dataset { graph, scores, warnings })
}

pub fn write_arguments(path: &Path, graph: &ArgumentGraph) -> Result<()> {
    write_jsonl(path, graph.pairs())
}

pub fn write_scores<'a>(path: &Path, scores: impl IntoIterator<Item = &'a ScoreBundle>) -> Result<()> {
    write_jsonl(path, scores)
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>> {
    let mut warnings = Vec::new();
    let records = read_jsonl(path, &mut warnings)?;
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(records.into_iter().map(|(_, r)| r).collect())
}
