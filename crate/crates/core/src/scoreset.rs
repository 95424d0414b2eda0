//! Ingestion of long-format score tables into a dense, oriented tensor.
//!
//! Every downstream module assumes a complete `(metric, system, utterance)`
//! table where larger is better. Orientation is declared per metric in a
//! profile document; `LowerBetter` metrics are negated on the way in and
//! negated back when dumping, so `load(dump(t)) == t` bit for bit.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

/// Column names of the long-format table, in order.
pub const LONG_HEADER: [&str; 5] = ["dataset", "metric", "system", "utterance", "score"];

/// Prefix that marks a human metric when `kind` is omitted from a profile.
pub const HUMAN_PREFIX: &str = "H:";

#[derive(Debug, thiserror::Error)]
pub enum ScoreSetError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed table: {0}")]
    Csv(#[from] csv::Error),
    #[error("bad header: expected `{expected}`, found `{found}`")]
    Header { expected: String, found: String },
    #[error("line {line}: cannot parse score `{value}`")]
    BadScore { line: u64, value: String },
    #[error("malformed profile document: {0}")]
    Profiles(String),
    #[error("missing cell (metric `{metric}`, system `{system}`, utterance `{utterance}`)")]
    MissingCell {
        metric: String,
        system: String,
        utterance: String,
    },
    #[error("duplicate row for (metric `{metric}`, system `{system}`, utterance `{utterance}`)")]
    DuplicateKey {
        metric: String,
        system: String,
        utterance: String,
    },
    #[error("metric `{0}` has no profile")]
    UnknownMetric(String),
    #[error("duplicate metric profile `{0}`")]
    DuplicateProfile(String),
    #[error("non-finite score for (metric `{metric}`, system `{system}`, utterance `{utterance}`)")]
    NonFiniteScore {
        metric: String,
        system: String,
        utterance: String,
    },
    #[error("no complete utterance remains after dropping incomplete ones")]
    EmptyAfterDrop,
    #[error("table holds several datasets ({0}); select one")]
    MultipleDatasets(String),
    #[error("dataset `{0}` not found in table")]
    UnknownDataset(String),
    #[error("invalid shape: {0}")]
    Shape(String),
}

impl ScoreSetError {
    /// Errors caused by unreadable input, as opposed to readable input that
    /// fails validation.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Self::Io(_) | Self::Csv(_) | Self::Header { .. } | Self::BadScore { .. } | Self::Profiles(_)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Human,
    Automatic,
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::Human => "human",
            MetricKind::Automatic => "automatic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    HigherBetter,
    LowerBetter,
}

impl Orientation {
    fn apply(self, raw: f64) -> f64 {
        match self {
            Orientation::HigherBetter => raw,
            Orientation::LowerBetter => -raw,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricProfile {
    pub id: String,
    pub kind: MetricKind,
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub release_date: Option<NaiveDate>,
    /// Variants sharing a family (e.g. several ROUGE flavours) enter the
    /// release timeline together.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

impl MetricProfile {
    pub fn new(id: impl Into<String>, kind: MetricKind, orientation: Orientation) -> Self {
        Self {
            id: id.into(),
            kind,
            orientation,
            release_date: None,
            family: None,
        }
    }

    pub fn human(id: impl Into<String>) -> Self {
        Self::new(id, MetricKind::Human, Orientation::HigherBetter)
    }

    pub fn automatic(id: impl Into<String>) -> Self {
        Self::new(id, MetricKind::Automatic, Orientation::HigherBetter)
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_release(mut self, date: NaiveDate) -> Self {
        self.release_date = Some(date);
        self
    }

    pub fn with_family(mut self, family: impl Into<String>) -> Self {
        self.family = Some(family.into());
        self
    }

    pub fn is_human(&self) -> bool {
        self.kind == MetricKind::Human
    }

    /// Timeline grouping key: the declared family, or the id itself.
    pub fn family_key(&self) -> &str {
        self.family.as_deref().unwrap_or(&self.id)
    }
}

#[derive(Deserialize)]
struct ProfileDocument {
    #[serde(default, rename = "metric")]
    metrics: Vec<ProfileRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileRecord {
    id: String,
    kind: Option<MetricKind>,
    orientation: Orientation,
    // Accept both quoted strings and bare TOML dates.
    release_date: Option<toml::Value>,
    family: Option<String>,
}

/// Parses a TOML profile document made of `[[metric]]` tables.
///
/// ```toml
/// [[metric]]
/// id = "H:fluency"
/// kind = "human"
/// orientation = "higher_better"
///
/// [[metric]]
/// id = "ter"
/// kind = "automatic"
/// orientation = "lower_better"
/// release_date = "2006-08-01"
/// ```
pub fn parse_profiles(text: &str) -> Result<Vec<MetricProfile>, ScoreSetError> {
    let doc: ProfileDocument =
        toml::from_str(text).map_err(|e| ScoreSetError::Profiles(e.to_string()))?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(doc.metrics.len());
    for rec in doc.metrics {
        if rec.id.trim().is_empty() {
            return Err(ScoreSetError::Profiles("empty metric id".into()));
        }
        if !seen.insert(rec.id.clone()) {
            return Err(ScoreSetError::DuplicateProfile(rec.id));
        }
        let release_date = match rec.release_date {
            None => None,
            Some(v) => {
                let text = match &v {
                    toml::Value::String(s) => s.clone(),
                    toml::Value::Datetime(d) => d.to_string(),
                    other => {
                        return Err(ScoreSetError::Profiles(format!(
                            "release_date of `{}` must be a date, got {other}",
                            rec.id
                        )))
                    }
                };
                Some(NaiveDate::parse_from_str(&text, "%Y-%m-%d").map_err(|e| {
                    ScoreSetError::Profiles(format!("release_date of `{}`: {e}", rec.id))
                })?)
            }
        };
        let kind = rec.kind.unwrap_or(if rec.id.starts_with(HUMAN_PREFIX) {
            MetricKind::Human
        } else {
            MetricKind::Automatic
        });
        out.push(MetricProfile {
            id: rec.id,
            kind,
            orientation: rec.orientation,
            release_date,
            family: rec.family,
        });
    }
    Ok(out)
}

pub fn load_profiles(path: impl AsRef<Path>) -> Result<Vec<MetricProfile>, ScoreSetError> {
    parse_profiles(&std::fs::read_to_string(path)?)
}

/// Renders profiles back into the TOML document accepted by [`parse_profiles`].
pub fn profiles_to_toml(profiles: &[MetricProfile]) -> String {
    let mut out = String::new();
    for p in profiles {
        out.push_str("[[metric]]\n");
        out.push_str(&format!("id = {}\n", toml_quote(&p.id)));
        out.push_str(&format!("kind = \"{}\"\n", p.kind));
        let orientation = match p.orientation {
            Orientation::HigherBetter => "higher_better",
            Orientation::LowerBetter => "lower_better",
        };
        out.push_str(&format!("orientation = \"{orientation}\"\n"));
        if let Some(d) = p.release_date {
            out.push_str(&format!("release_date = \"{}\"\n", d.format("%Y-%m-%d")));
        }
        if let Some(f) = &p.family {
            out.push_str(&format!("family = {}\n", toml_quote(f)));
        }
        out.push('\n');
    }
    out
}

fn toml_quote(s: &str) -> String {
    toml::Value::String(s.to_owned()).to_string()
}

/// Dense score table indexed by `(metric, system, utterance)`; every stored
/// score is oriented so that larger is better.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTensor {
    dataset_id: String,
    metrics: Vec<MetricProfile>,
    systems: Vec<String>,
    utterances: Vec<String>,
    // metric-major, then system, then utterance
    scores: Vec<f64>,
}

impl ScoreTensor {
    /// Builds a tensor from raw (un-oriented) scores laid out metric-major,
    /// then system, then utterance.
    pub fn from_raw(
        dataset_id: impl Into<String>,
        metrics: Vec<MetricProfile>,
        systems: Vec<String>,
        utterances: Vec<String>,
        raw: Vec<f64>,
    ) -> Result<Self, ScoreSetError> {
        let (m, n, k) = (metrics.len(), systems.len(), utterances.len());
        if m == 0 {
            return Err(ScoreSetError::Shape("at least one metric is required".into()));
        }
        if n < 2 {
            return Err(ScoreSetError::Shape(format!("at least two systems are required, got {n}")));
        }
        if k == 0 {
            return Err(ScoreSetError::Shape("at least one utterance is required".into()));
        }
        if raw.len() != m * n * k {
            return Err(ScoreSetError::Shape(format!(
                "expected {} scores for M={m} N={n} K={k}, got {}",
                m * n * k,
                raw.len()
            )));
        }
        check_unique("metric", metrics.iter().map(|p| p.id.as_str()))?;
        check_unique("system", systems.iter().map(String::as_str))?;
        check_unique("utterance", utterances.iter().map(String::as_str))?;

        let mut scores = raw;
        for (mi, profile) in metrics.iter().enumerate() {
            for si in 0..n {
                for ui in 0..k {
                    let cell = &mut scores[(mi * n + si) * k + ui];
                    if !cell.is_finite() {
                        return Err(ScoreSetError::NonFiniteScore {
                            metric: profile.id.clone(),
                            system: systems[si].clone(),
                            utterance: utterances[ui].clone(),
                        });
                    }
                    *cell = profile.orientation.apply(*cell);
                }
            }
        }
        Ok(Self {
            dataset_id: dataset_id.into(),
            metrics,
            systems,
            utterances,
            scores,
        })
    }

    pub fn dataset_id(&self) -> &str {
        &self.dataset_id
    }

    pub fn metrics(&self) -> &[MetricProfile] {
        &self.metrics
    }

    pub fn systems(&self) -> &[String] {
        &self.systems
    }

    pub fn utterances(&self) -> &[String] {
        &self.utterances
    }

    /// `(M, N, K)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.metrics.len(), self.systems.len(), self.utterances.len())
    }

    pub fn metric_index(&self, id: &str) -> Option<usize> {
        self.metrics.iter().position(|p| p.id == id)
    }

    pub fn profile(&self, id: &str) -> Option<&MetricProfile> {
        self.metrics.iter().find(|p| p.id == id)
    }

    /// Oriented score of one cell.
    pub fn score(&self, metric: usize, system: usize, utterance: usize) -> f64 {
        let (_, n, k) = self.shape();
        self.scores[(metric * n + system) * k + utterance]
    }

    /// Oriented scores of one system across all utterances.
    pub fn system_row(&self, metric: usize, system: usize) -> &[f64] {
        let (_, n, k) = self.shape();
        let start = (metric * n + system) * k;
        &self.scores[start..start + k]
    }

    /// Oriented scores of every system on one utterance.
    pub fn utterance_column(&self, metric: usize, utterance: usize) -> Vec<f64> {
        (0..self.systems.len())
            .map(|s| self.score(metric, s, utterance))
            .collect()
    }

    /// Score as it appeared in the input table.
    pub fn raw_score(&self, metric: usize, system: usize, utterance: usize) -> f64 {
        self.metrics[metric]
            .orientation
            .apply(self.score(metric, system, utterance))
    }

    /// Keeps only the listed metrics, in the listed order.
    pub fn select_metrics(&self, ids: &[&str]) -> Result<Self, ScoreSetError> {
        let (_, n, k) = self.shape();
        let mut metrics = Vec::with_capacity(ids.len());
        let mut scores = Vec::with_capacity(ids.len() * n * k);
        for id in ids {
            let mi = self
                .metric_index(id)
                .ok_or_else(|| ScoreSetError::UnknownMetric((*id).to_owned()))?;
            metrics.push(self.metrics[mi].clone());
            scores.extend_from_slice(&self.scores[mi * n * k..(mi + 1) * n * k]);
        }
        if metrics.is_empty() {
            return Err(ScoreSetError::Shape("at least one metric is required".into()));
        }
        check_unique("metric", metrics.iter().map(|p| p.id.as_str()))?;
        Ok(Self {
            dataset_id: self.dataset_id.clone(),
            metrics,
            systems: self.systems.clone(),
            utterances: self.utterances.clone(),
            scores,
        })
    }

    /// Writes the canonical long-format dump: header, then rows sorted by
    /// `(metric, system, utterance)`, raw scores in shortest round-trip form.
    pub fn write_long<W: Write>(&self, out: W) -> Result<(), ScoreSetError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(LONG_HEADER)?;
        let mut metric_order: Vec<usize> = (0..self.metrics.len()).collect();
        metric_order.sort_by(|&a, &b| self.metrics[a].id.cmp(&self.metrics[b].id));
        let mut system_order: Vec<usize> = (0..self.systems.len()).collect();
        system_order.sort_by(|&a, &b| self.systems[a].cmp(&self.systems[b]));
        let mut utt_order: Vec<usize> = (0..self.utterances.len()).collect();
        utt_order.sort_by(|&a, &b| self.utterances[a].cmp(&self.utterances[b]));
        for &m in &metric_order {
            for &s in &system_order {
                for &u in &utt_order {
                    let score = self.raw_score(m, s, u).to_string();
                    w.write_record([
                        self.dataset_id.as_str(),
                        self.metrics[m].id.as_str(),
                        self.systems[s].as_str(),
                        self.utterances[u].as_str(),
                        score.as_str(),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_long_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_long(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

fn check_unique<'a>(what: &str, ids: impl Iterator<Item = &'a str>) -> Result<(), ScoreSetError> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if id.is_empty() {
            return Err(ScoreSetError::Shape(format!("empty {what} id")));
        }
        if !seen.insert(id) {
            return Err(ScoreSetError::Shape(format!("duplicate {what} id `{id}`")));
        }
    }
    Ok(())
}

/// How to treat utterances lacking some cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ingestion {
    #[default]
    Strict,
    DropIncomplete,
}

/// Utterances removed by lenient ingestion.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DropReport {
    pub dropped_utterances: Vec<String>,
}

/// Cells of one dataset, accumulated before densification.
#[derive(Debug, Clone)]
pub struct PartialTable {
    dataset_id: String,
    metrics: Vec<MetricProfile>,
    cells: HashMap<(String, String, String), f64>,
    systems: BTreeSet<String>,
    utterances: BTreeSet<String>,
}

impl PartialTable {
    pub fn new(dataset_id: impl Into<String>, metrics: Vec<MetricProfile>) -> Self {
        Self {
            dataset_id: dataset_id.into(),
            metrics,
            cells: HashMap::new(),
            systems: BTreeSet::new(),
            utterances: BTreeSet::new(),
        }
    }

    pub fn dataset_id(&self) -> &str {
        &self.dataset_id
    }

    pub fn insert(
        &mut self,
        metric: &str,
        system: &str,
        utterance: &str,
        raw: f64,
    ) -> Result<(), ScoreSetError> {
        if !self.metrics.iter().any(|p| p.id == metric) {
            return Err(ScoreSetError::UnknownMetric(metric.to_owned()));
        }
        if !raw.is_finite() {
            return Err(ScoreSetError::NonFiniteScore {
                metric: metric.to_owned(),
                system: system.to_owned(),
                utterance: utterance.to_owned(),
            });
        }
        let key = (metric.to_owned(), system.to_owned(), utterance.to_owned());
        if self.cells.insert(key, raw).is_some() {
            return Err(ScoreSetError::DuplicateKey {
                metric: metric.to_owned(),
                system: system.to_owned(),
                utterance: utterance.to_owned(),
            });
        }
        self.systems.insert(system.to_owned());
        self.utterances.insert(utterance.to_owned());
        Ok(())
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Metrics with at least one row, in profile order.
    fn present_metrics(&self) -> Vec<MetricProfile> {
        let present: BTreeSet<&str> = self.cells.keys().map(|(m, _, _)| m.as_str()).collect();
        self.metrics
            .iter()
            .filter(|p| present.contains(p.id.as_str()))
            .cloned()
            .collect()
    }

    /// Every absent `(metric, system, utterance)` triple, sorted.
    pub fn missing_cells(&self) -> Vec<(String, String, String)> {
        let mut missing = Vec::new();
        let mut metrics: Vec<String> = self.present_metrics().into_iter().map(|p| p.id).collect();
        metrics.sort();
        for m in &metrics {
            for s in &self.systems {
                for u in &self.utterances {
                    let key = (m.clone(), s.clone(), u.clone());
                    if !self.cells.contains_key(&key) {
                        missing.push(key);
                    }
                }
            }
        }
        missing
    }

    /// Densifies, failing on the first missing triple in sorted order.
    pub fn into_strict(self) -> Result<ScoreTensor, ScoreSetError> {
        if let Some((metric, system, utterance)) = self.missing_cells().into_iter().next() {
            return Err(ScoreSetError::MissingCell {
                metric,
                system,
                utterance,
            });
        }
        let utterances: Vec<String> = self.utterances.iter().cloned().collect();
        self.densify(utterances)
    }

    /// Densifies after removing every utterance that lacks any cell.
    pub fn drop_incomplete(self) -> Result<(ScoreTensor, DropReport), ScoreSetError> {
        let incomplete: BTreeSet<String> =
            self.missing_cells().into_iter().map(|(_, _, u)| u).collect();
        let keep: Vec<String> = self
            .utterances
            .iter()
            .filter(|u| !incomplete.contains(*u))
            .cloned()
            .collect();
        if keep.is_empty() {
            return Err(ScoreSetError::EmptyAfterDrop);
        }
        let tensor = self.densify(keep)?;
        Ok((
            tensor,
            DropReport {
                dropped_utterances: incomplete.into_iter().collect(),
            },
        ))
    }

    pub fn finish(self, mode: Ingestion) -> Result<(ScoreTensor, DropReport), ScoreSetError> {
        match mode {
            Ingestion::Strict => self.into_strict().map(|t| (t, DropReport::default())),
            Ingestion::DropIncomplete => self.drop_incomplete(),
        }
    }

    fn densify(self, utterances: Vec<String>) -> Result<ScoreTensor, ScoreSetError> {
        let metrics = self.present_metrics();
        let systems: Vec<String> = self.systems.iter().cloned().collect();
        let mut raw = Vec::with_capacity(metrics.len() * systems.len() * utterances.len());
        for p in &metrics {
            for s in &systems {
                for u in &utterances {
                    let key = (p.id.clone(), s.clone(), u.clone());
                    let v = self.cells.get(&key).ok_or_else(|| ScoreSetError::MissingCell {
                        metric: key.0.clone(),
                        system: key.1.clone(),
                        utterance: key.2.clone(),
                    })?;
                    raw.push(*v);
                }
            }
        }
        ScoreTensor::from_raw(self.dataset_id, metrics, systems, utterances, raw)
    }
}

/// Reads a long-format table into one partial table per dataset. Lines
/// starting with `#` are comments.
pub fn read_long_tables<R: Read>(
    input: R,
    profiles: &[MetricProfile],
) -> Result<BTreeMap<String, PartialTable>, ScoreSetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let header = reader.headers()?.clone();
    let found: Vec<&str> = header.iter().collect();
    if found != LONG_HEADER {
        return Err(ScoreSetError::Header {
            expected: LONG_HEADER.join(","),
            found: found.join(","),
        });
    }
    let mut tables: BTreeMap<String, PartialTable> = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let score_text = &record[4];
        let raw: f64 = score_text.parse().map_err(|_| ScoreSetError::BadScore {
            line,
            value: score_text.to_owned(),
        })?;
        let dataset = &record[0];
        tables
            .entry(dataset.to_owned())
            .or_insert_with(|| PartialTable::new(dataset, profiles.to_vec()))
            .insert(&record[1], &record[2], &record[3], raw)?;
    }
    Ok(tables)
}

/// Picks one dataset out of a multi-dataset table. With `dataset = None` the
/// table must hold exactly one.
pub fn select_dataset(
    mut tables: BTreeMap<String, PartialTable>,
    dataset: Option<&str>,
) -> Result<PartialTable, ScoreSetError> {
    match dataset {
        Some(id) => tables
            .remove(id)
            .ok_or_else(|| ScoreSetError::UnknownDataset(id.to_owned())),
        None => {
            if tables.len() > 1 {
                let ids: Vec<&str> = tables.keys().map(String::as_str).collect();
                return Err(ScoreSetError::MultipleDatasets(ids.join(", ")));
            }
            tables
                .into_values()
                .next()
                .ok_or_else(|| ScoreSetError::Shape("table has no rows".into()))
        }
    }
}

/// Loads a single-dataset long table from disk.
pub fn load_long_table(
    path: impl AsRef<Path>,
    profiles: &[MetricProfile],
    mode: Ingestion,
) -> Result<(ScoreTensor, DropReport), ScoreSetError> {
    let file = std::fs::File::open(path)?;
    let tables = read_long_tables(std::io::BufReader::new(file), profiles)?;
    select_dataset(tables, None)?.finish(mode)
}
