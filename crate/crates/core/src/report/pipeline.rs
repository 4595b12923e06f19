use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use thiserror::Error;

use super::config::{ConfigError, PipelineConfig};
use super::figures::{emit_box_plot, emit_heatmap, emit_scatter, write_file, Fit, ScatterMode, ScatterOptions};
use super::tables::{
    ols_report, write_ols_csv, write_quadratic_csv, write_ranked_table, write_regression_csv, write_ttest_table,
};
use super::{write_datasheet, PieceRecord, ReportError};
use crate::ingest::{read_piece, scan_corpus, CorpusEntry, CorpusIndex, PieceId, PitchClassSequence};
use crate::originality::{rank_pieces, score_corpus, Method, RankInput, ScoringOptions};
use crate::popularity::{annotate_datasheet, write_static_csv, PopularityError, Provider};
use crate::stats::{linear_regression, ols_no_intercept, pairwise_composer_tests, quadratic_fit, round_display};
use crate::transitions::{count_transitions, normalize, CountMatrix, Decimals, StochasticMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Scan,
    Matrix,
    Score,
    Popularity,
    Stats,
    Report,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Scan => "scan",
            Stage::Matrix => "matrix",
            Stage::Score => "score",
            Stage::Popularity => "popularity",
            Stage::Stats => "stats",
            Stage::Report => "report",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Scan,
    Matrix,
    Score,
    Popularity,
    Stats,
    Report,
    Run,
}

impl Command {
    /// Stages executed, in order. Each command reruns whatever its own stage depends on.
    pub fn stages(self) -> &'static [Stage] {
        use Stage::*;
        match self {
            Command::Scan => &[Scan],
            Command::Matrix => &[Scan, Matrix],
            Command::Score => &[Scan, Matrix, Score],
            Command::Popularity => &[Scan, Popularity],
            Command::Stats => &[Scan, Matrix, Score, Popularity, Stats],
            Command::Report | Command::Run => &[Scan, Matrix, Score, Popularity, Stats, Report],
        }
    }
}

/// A non-fatal problem tied to one piece, title or analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub stage: Stage,
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.stage, self.subject, self.message)
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{} issue(s) in strict mode", .0.len())]
    Strict(Vec<Issue>),
    #[error("{stage}: {message}")]
    Fatal { stage: Stage, message: String },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Strict(_) | PipelineError::Fatal { .. } => 1,
        }
    }

    pub fn issues(&self) -> &[Issue] {
        match self {
            PipelineError::Strict(v) => v,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Any issue aborts the run at the end of the stage that raised it.
    pub strict: bool,
}

#[derive(Debug, Default)]
pub struct RunSummary {
    pub pieces_listed: usize,
    pub pieces_read: usize,
    pub pieces_scored: usize,
    pub issues: Vec<Issue>,
    /// Files written, in order.
    pub artifacts: Vec<PathBuf>,
    /// Human-readable highlights.
    pub lines: Vec<String>,
}

struct Piece {
    entry: CorpusEntry,
    seq: PitchClassSequence,
}

#[derive(Debug, Clone, Copy, Default)]
struct PieceScores {
    all_notes: f64,
    simonton: Option<f64>,
    ngram: Option<f64>,
}

struct Run<'a> {
    config: &'a PipelineConfig,
    options: &'a RunOptions,
    out: PathBuf,
    summary: RunSummary,
    index: Option<CorpusIndex>,
    pieces: Vec<Piece>,
    matrix: Option<StochasticMatrix<f64>>,
    scores: HashMap<String, PieceScores>,
    popularity: HashMap<String, u64>,
    fits: Fits,
}

#[derive(Default)]
struct Fits {
    line: Option<Fit>,
    ols: Option<Fit>,
    quadratic: Option<Fit>,
}

fn fatal(stage: Stage) -> impl Fn(ReportError) -> PipelineError {
    move |e| PipelineError::Fatal { stage, message: e.to_string() }
}

impl<'a> Run<'a> {
    fn issue(&mut self, stage: Stage, subject: impl Into<String>, message: impl fmt::Display) {
        let issue = Issue { stage, subject: subject.into(), message: message.to_string() };
        warn!("{issue}");
        self.summary.issues.push(issue);
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.out.join(name);
        self.summary.artifacts.push(p.clone());
        p
    }

    fn index(&self) -> &CorpusIndex {
        self.index.as_ref().expect("scan runs first")
    }

    fn scan(&mut self) -> Result<(), PipelineError> {
        let scan = scan_corpus(&self.config.corpus_root, &self.config.datasheet)
            .map_err(|e| PipelineError::Fatal { stage: Stage::Scan, message: e.to_string() })?;
        for m in &scan.missing {
            self.issue(Stage::Scan, m.file_name.clone(), format!("datasheet row {}: file not found", m.row));
        }
        let index = scan.index;
        let missing: std::collections::HashSet<&str> = scan.missing.iter().map(|m| m.file_name.as_str()).collect();
        let present: Vec<&CorpusEntry> =
            index.entries.iter().filter(|e| !missing.contains(e.file_name.as_str())).collect();
        let extraction = self.config.extraction;
        let results: Vec<_> = present
            .par_iter()
            .map(|e| (*e, read_piece(&index.path_of(e), &extraction, e.file_name.as_str())))
            .collect();
        let mut pieces = Vec::new();
        let mut failures = Vec::new();
        for (entry, r) in results {
            match r {
                Ok(seq) => pieces.push(Piece { entry: entry.clone(), seq }),
                Err(e) => failures.push((entry.file_name.clone(), e)),
            }
        }
        for (name, e) in failures {
            self.issue(Stage::Scan, name, e);
        }
        self.summary.pieces_listed = index.len();
        self.summary.pieces_read = pieces.len();
        self.summary.lines.push(format!("pieces: {} listed, {} read", index.len(), pieces.len()));

        let path = self.path("index.csv");
        let read: HashMap<&str, usize> =
            pieces.iter().map(|p| (p.entry.file_name.as_str(), p.seq.note_count())).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let to_err = |e: csv::Error| PipelineError::Fatal { stage: Stage::Scan, message: e.to_string() };
        w.write_record(["File Name", "Piece Title", "Composer", "Notes", "Status"]).map_err(to_err)?;
        for e in &index.entries {
            let (notes, status) = match read.get(e.file_name.as_str()) {
                Some(n) => (n.to_string(), "ok"),
                None if missing.contains(e.file_name.as_str()) => (String::new(), "missing"),
                None => (String::new(), "unreadable"),
            };
            w.write_record([e.file_name.as_str(), &e.title, &e.composer, &notes, status]).map_err(to_err)?;
        }
        let bytes = w.into_inner().map_err(|e| PipelineError::Fatal { stage: Stage::Scan, message: e.to_string() })?;
        write_file(&path, &bytes).map_err(fatal(Stage::Scan))?;

        if pieces.is_empty() {
            return Err(PipelineError::Fatal { stage: Stage::Scan, message: "no readable pieces".into() });
        }
        self.pieces = pieces;
        self.index = Some(index);
        Ok(())
    }

    fn matrix(&mut self) -> Result<(), PipelineError> {
        let counts: CountMatrix = self.pieces.par_iter().map(|p| count_transitions(&p.seq)).sum();
        let matrix = normalize::<f64>(&counts);
        for pc in crate::ingest::PitchClass::ALL {
            if !matrix.is_defined(pc) {
                self.issue(Stage::Matrix, pc.name(), "no transitions start on this pitch class");
            }
        }
        let mut buf = Vec::new();
        counts
            .write_csv(&mut buf)
            .map_err(|e| PipelineError::Fatal { stage: Stage::Matrix, message: e.to_string() })?;
        let p = self.path("counts.csv");
        write_file(&p, &buf).map_err(fatal(Stage::Matrix))?;
        for (name, decimals) in [("probabilities.csv", Decimals::Full), ("probabilities_4dp.csv", Decimals::Fixed(4))] {
            let mut buf = Vec::new();
            matrix
                .write_csv(&mut buf, decimals)
                .map_err(|e| PipelineError::Fatal { stage: Stage::Matrix, message: e.to_string() })?;
            let p = self.path(name);
            write_file(&p, &buf).map_err(fatal(Stage::Matrix))?;
        }
        self.summary.lines.push(format!("bigrams: {}", counts.total_bigrams()));
        self.matrix = Some(matrix);
        Ok(())
    }

    fn score(&mut self) -> Result<(), PipelineError> {
        let seqs: Vec<PitchClassSequence> = self.pieces.iter().map(|p| p.seq.clone()).collect();
        let opts = ScoringOptions { leave_one_out: self.config.leave_one_out };
        let run = |m: Method| {
            score_corpus::<f64>(&seqs, m, opts)
                .map_err(|e| PipelineError::Fatal { stage: Stage::Score, message: e.to_string() })
        };
        let all = run(Method::AllNotes)?;
        let simonton: HashMap<PieceId, f64> =
            run(Method::Simonton)?.into_iter().filter_map(|(id, r)| Some((id, r.ok()?.value))).collect();
        let ngram: HashMap<PieceId, f64> = match self.config.ngram_order {
            Some(n) => run(Method::Ngram(n))?.into_iter().filter_map(|(id, r)| Some((id, r.ok()?.value))).collect(),
            None => HashMap::new(),
        };
        for (id, r) in all {
            match r {
                Ok(s) => {
                    let scores = PieceScores {
                        all_notes: s.value,
                        simonton: simonton.get(&id).copied(),
                        ngram: ngram.get(&id).copied(),
                    };
                    self.scores.insert(id.0, scores);
                }
                Err(e) => self.issue(Stage::Score, id.0, e),
            }
        }
        self.summary.pieces_scored = self.scores.len();

        let mut header = vec!["File Name", "Piece Title", "Composer", "Notes", "All Notes", "Simonton"];
        let ngram_header = self.config.ngram_order.map(|n| format!("Ngram {n}"));
        if let Some(h) = &ngram_header {
            header.push(h);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let to_err = |e: csv::Error| PipelineError::Fatal { stage: Stage::Score, message: e.to_string() };
        w.write_record(&header).map_err(to_err)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for p in &self.pieces {
            let Some(s) = self.scores.get(&p.entry.file_name) else { continue };
            let mut row = vec![
                p.entry.file_name.clone(),
                p.entry.title.clone(),
                p.entry.composer.clone(),
                p.seq.note_count().to_string(),
                s.all_notes.to_string(),
                opt(s.simonton),
            ];
            if ngram_header.is_some() {
                row.push(opt(s.ngram));
            }
            w.write_record(&row).map_err(to_err)?;
        }
        let bytes = w.into_inner().map_err(|e| PipelineError::Fatal { stage: Stage::Score, message: e.to_string() })?;
        let path = self.path("scores.csv");
        write_file(&path, &bytes).map_err(fatal(Stage::Score))?;

        let inputs: Vec<RankInput<f64>> = self
            .pieces
            .iter()
            .filter_map(|p| {
                let s = self.scores.get(&p.entry.file_name)?;
                Some(RankInput { title: p.entry.title.clone(), composer: p.entry.composer.clone(), value: s.all_notes })
            })
            .collect();
        let ranked = rank_pieces(&inputs, self.config.top_k);
        let path = self.path("ranked.csv");
        write_ranked_table(&ranked, &path).map_err(fatal(Stage::Score))?;
        for r in &ranked {
            self.summary.lines.push(format!("#{} {:.4}  {} ({})", r.rank, r.value, r.title, r.composer));
        }
        Ok(())
    }

    fn popularity(&mut self) -> Result<(), PipelineError> {
        let mut provider = Provider::from_config(&self.config.provider).map_err(|e| match e {
            PopularityError::InvalidConfig(m) => {
                PipelineError::Config(ConfigError::Value { key: "provider".into(), message: m })
            }
            other => PipelineError::Fatal { stage: Stage::Popularity, message: other.to_string() },
        })?;
        let annotation = annotate_datasheet(self.index(), &mut provider);
        for f in annotation.failures {
            self.issue(Stage::Popularity, f.title, f.error);
        }
        let mut seen = std::collections::HashSet::new();
        let mut records = Vec::new();
        for r in annotation.records {
            if seen.insert(r.title.clone()) {
                self.popularity.insert(r.title.clone(), r.count);
                records.push(r);
            }
        }
        let path = self.path("popularity.csv");
        write_static_csv(&records, &path)
            .map_err(|e| PipelineError::Fatal { stage: Stage::Popularity, message: e.to_string() })?;
        Ok(())
    }

    /// Full-precision records for every datasheet row.
    fn records(&self) -> Vec<PieceRecord> {
        self.index()
            .entries
            .iter()
            .map(|e| PieceRecord {
                file_name: e.file_name.clone(),
                title: e.title.clone(),
                composer: e.composer.clone(),
                originality: self.scores.get(&e.file_name).map(|s| s.all_notes),
                popularity: self.popularity.get(&e.title).copied(),
            })
            .collect()
    }

    fn complete_records(&self) -> Vec<PieceRecord> {
        self.records().into_iter().filter(|r| r.originality.is_some() && r.popularity.is_some()).collect()
    }

    fn scores_by_composer(&self) -> BTreeMap<String, Vec<f64>> {
        let mut map: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for p in &self.pieces {
            if let Some(s) = self.scores.get(&p.entry.file_name) {
                map.entry(p.entry.composer.clone()).or_default().push(s.all_notes);
            }
        }
        map
    }

    fn stats(&mut self) -> Result<(), PipelineError> {
        let complete = self.complete_records();
        let x: Vec<f64> = complete.iter().map(|r| r.popularity.unwrap() as f64).collect();
        let y: Vec<f64> = complete.iter().map(|r| r.originality.unwrap()).collect();
        let io = fatal(Stage::Stats);

        match linear_regression(&x, &y) {
            Ok(r) => {
                let path = self.path("regression.csv");
                write_regression_csv(&r, &path).map_err(&io)?;
                self.summary.lines.push(format!("linear regression: r = {:.10}, R^2 = {:.5}", r.r, r.r_squared));
                self.fits.line = Some(Fit::from(&r));
            }
            Err(e) => self.issue(Stage::Stats, "linear regression", e),
        }
        match ols_no_intercept(&y, &x) {
            Ok(o) => {
                let path = self.path("ols.csv");
                write_ols_csv(&o, &path).map_err(&io)?;
                let path = self.path("ols_report.txt");
                write_file(&path, ols_report(&o, "Melodic Originality", "Popularity").as_bytes()).map_err(&io)?;
                self.summary.lines.push(format!(
                    "OLS through origin: R^2 (uncentered) = {:.3}, Durbin-Watson = {:.3}",
                    o.r2_uncentered, o.durbin_watson
                ));
                self.fits.ols = Some(Fit::Line { slope: o.coef, intercept: 0.0 });
            }
            Err(e) => self.issue(Stage::Stats, "OLS", e),
        }
        match quadratic_fit(&x, &y) {
            Ok(q) => {
                let path = self.path("quadratic.csv");
                write_quadratic_csv(&q, &path).map_err(&io)?;
                self.summary.lines.push(format!(
                    "quadratic fit: c2 = {:.4e} ({}), R^2 = {:.5}",
                    q.c2,
                    if q.is_inverted_u() { "inverted U" } else { "not inverted U" },
                    q.r_squared
                ));
                self.fits.quadratic = Some(Fit::from(&q));
            }
            Err(e) => self.issue(Stage::Stats, "quadratic fit", e),
        }

        match pairwise_composer_tests(&self.scores_by_composer(), self.config.t_test) {
            Ok(tests) => {
                let csv_path = self.path("ttests.csv");
                let txt_path = self.path("ttests.txt");
                write_ttest_table(&tests, self.config.alpha, &csv_path, &txt_path).map_err(&io)?;
                let mut significant = 0;
                for t in &tests {
                    match &t.result {
                        Ok(r) if r.is_significant(self.config.alpha) => significant += 1,
                        Ok(_) => {}
                        Err(e) => self.issue(Stage::Stats, t.label(), e),
                    }
                }
                self.summary.lines.push(format!(
                    "pairwise t-tests: {significant} of {} significant at alpha = {}",
                    tests.len(),
                    round_display(self.config.alpha, 4)
                ));
            }
            Err(e) => self.issue(Stage::Stats, "pairwise t-tests", e),
        }
        Ok(())
    }

    fn report(&mut self) -> Result<(), PipelineError> {
        let io = fatal(Stage::Report);
        if let Some(m) = self.matrix.clone() {
            let svg = self.path("heatmap.svg");
            let csv = self.path("heatmap.csv");
            match emit_heatmap(&m, &svg, &csv) {
                Ok(()) => {}
                Err(e @ ReportError::UndefinedRow(_)) => {
                    self.summary.artifacts.retain(|p| p != &svg && p != &csv);
                    self.issue(Stage::Report, "heat map", e);
                }
                Err(e) => return Err(io(e)),
            }
        }

        let complete = self.complete_records();
        if complete.is_empty() {
            self.issue(Stage::Report, "scatter plots", "no piece has both originality and popularity");
        } else {
            let swap = self.config.swap_axes;
            let mut figures = vec![("scatter_composers.svg", ScatterOptions::new(ScatterMode::ByComposer), None)];
            if let Some(f) = self.fits.line {
                figures.push(("scatter_regression.svg", ScatterOptions::new(ScatterMode::Regression), Some(f)));
            }
            if let Some(f) = self.fits.ols {
                let mut o = ScatterOptions::new(ScatterMode::Regression);
                o.title = "OLS fitted values (through the origin)".into();
                figures.push(("scatter_ols.svg", o, Some(f)));
            }
            if let Some(f) = self.fits.quadratic {
                let mut o = ScatterOptions::new(ScatterMode::Regression);
                o.title = "Quadratic fit of melodic originality on popularity".into();
                figures.push(("scatter_quadratic.svg", o, Some(f)));
            }
            for (name, mut options, fit) in figures {
                options.swap_axes = swap;
                // Fits are of originality on popularity, so they are only drawn in that orientation.
                options.fit = if swap { None } else { fit };
                let path = self.path(name);
                emit_scatter(&complete, options, &path).map_err(&io)?;
            }
        }

        let groups = self.scores_by_composer();
        if !groups.is_empty() {
            let svg = self.path("boxplot.svg");
            let csv = self.path("boxplot.csv");
            emit_box_plot(&groups, &svg, &csv).map_err(&io)?;
        }
        Ok(())
    }

    fn write_datasheet(&mut self) -> Result<(), PipelineError> {
        let path = self.path("datasheet.csv");
        write_datasheet(&self.records(), &path).map_err(fatal(Stage::Report))
    }

    fn checkpoint(&self, stage: Stage) -> Result<(), PipelineError> {
        if self.options.strict && !self.summary.issues.is_empty() {
            info!("stopping after {stage} in strict mode");
            return Err(PipelineError::Strict(self.summary.issues.clone()));
        }
        Ok(())
    }
}

/// Runs the stages behind `command`, writing artifacts into the configured output directory.
///
/// Per-piece problems become [`Issue`]s. Without `strict` they are logged and the run
/// continues; with it the run stops at the end of the first stage that raised any.
pub fn run_pipeline(
    config: &PipelineConfig,
    command: Command,
    options: &RunOptions,
) -> Result<RunSummary, PipelineError> {
    std::fs::create_dir_all(&config.out_dir).map_err(|e| PipelineError::Fatal {
        stage: Stage::Scan,
        message: format!("{}: {e}", config.out_dir.display()),
    })?;
    let mut run = Run {
        config,
        options,
        out: config.out_dir.clone(),
        summary: RunSummary::default(),
        index: None,
        pieces: Vec::new(),
        matrix: None,
        scores: HashMap::new(),
        popularity: HashMap::new(),
        fits: Fits::default(),
    };
    let stages = command.stages();
    for &stage in stages {
        match stage {
            Stage::Scan => run.scan()?,
            Stage::Matrix => run.matrix()?,
            Stage::Score => run.score()?,
            Stage::Popularity => run.popularity()?,
            Stage::Stats => run.stats()?,
            Stage::Report => run.report()?,
        }
        run.checkpoint(stage)?;
    }
    if stages.contains(&Stage::Score) || stages.contains(&Stage::Popularity) {
        run.write_datasheet()?;
    }
    Ok(run.summary)
}

/// Output directory override, applied after loading the config.
pub fn with_out_dir(mut config: PipelineConfig, out: Option<&Path>) -> PipelineConfig {
    if let Some(o) = out {
        config.out_dir = o.to_path_buf();
    }
    config
}
