//! Ingest → indices and moments → coordinates → clustering → JSON/CSV/SVG.
//!
//! [`run`] drives a single configured analysis; [`reproduce`] runs the full
//! eleven-language experiment on the bundled grapheme table with every
//! clustering method.

mod svg;

pub use svg::{format_sig4, render_scatter, render_scatter_with, LabeledPoint, PlotText};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cluster::{
    canonical, kmeans, kmedoids_pam, partition_oracle, ClusterResult, Method, Metric, Objective,
    PointSet, Variant, DEFAULT_RESTARTS, DEFAULT_SEED,
};
use crate::error::{Error, Result, ResultExt};
use crate::freqdata::{
    load_tables, load_tables_auto, rank_frequencies, CategoryTable, Format, Tables,
};
use crate::indices::{index_summary, modified_coords, IndexSummary, ModifiedPoint};
use crate::moments::{empirical_moments, ord_coords, MomentSummary, OrdPoint};

/// Grapheme rank-frequency counts for eleven Slavic languages (matrix layout).
pub const SLAVIC_TABLE_TSV: &str = include_str!("../../data/slavic_graphemes.tsv");

pub fn slavic_tables() -> Tables {
    load_tables(SLAVIC_TABLE_TSV.as_bytes(), Format::Matrix).expect("bundled table parses")
}

/// Which coordinates the languages are clustered on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordMode {
    /// Ord's `(I, S)` from rank-frequency moments.
    Original,
    /// `(I_m, S_m)` from indices of qualitative variation.
    Modified,
    /// Inventory size `K`, one-dimensional.
    #[serde(alias = "inventory_size")]
    Inventory,
}

impl FromStr for CoordMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(CoordMode::Original),
            "modified" => Ok(CoordMode::Modified),
            "inventory" | "inventory_size" | "inventory-size" => Ok(CoordMode::Inventory),
            other => Err(Error::Value(format!("unknown coordinate mode {other:?}"))),
        }
    }
}

impl fmt::Display for CoordMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            CoordMode::Original => "original",
            CoordMode::Modified => "modified",
            CoordMode::Inventory => "inventory",
        })
    }
}

/// Clustering request independent of where the points come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    pub method: Method,
    pub variant: Variant,
    pub metric: Metric,
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
}

impl Default for ClusterSpec {
    fn default() -> Self {
        ClusterSpec {
            method: Method::Kmeans,
            variant: Variant::Lloyd,
            metric: Metric::Euclidean,
            k: 3,
            seed: DEFAULT_SEED,
            restarts: DEFAULT_RESTARTS,
        }
    }
}

impl ClusterSpec {
    pub fn apply(&self, points: &PointSet) -> Result<ClusterResult> {
        match self.method {
            Method::Kmeans => kmeans(points, self.k, self.variant, self.seed, self.restarts),
            Method::Kmedoids => kmedoids_pam(points, self.k, self.metric),
            Method::Oracle => partition_oracle(points, self.k, Objective::Wcss),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    /// `None` picks the layout from the header line.
    pub format: Option<Format>,
    pub coords: CoordMode,
    pub cluster: ClusterSpec,
    #[serde(default)]
    pub json_output: Option<PathBuf>,
    #[serde(default)]
    pub csv_output: Option<PathBuf>,
    #[serde(default)]
    pub svg_output: Option<PathBuf>,
    #[serde(default)]
    pub overlay: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, coords: CoordMode, cluster: ClusterSpec) -> Self {
        RunConfig {
            input: input.into(),
            format: None,
            coords,
            cluster,
            json_output: None,
            csv_output: None,
            svg_output: None,
            overlay: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.cluster.k < 2 {
            return Err(Error::Value(format!(
                "k = {}, need at least 2",
                self.cluster.k
            )));
        }
        if self.coords == CoordMode::Inventory && self.svg_output.is_some() {
            return Err(Error::Value(
                "inventory sizes are one-dimensional; no scatter plot".into(),
            ));
        }
        Ok(())
    }
}

/// Everything computed for one language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageSummary {
    pub language: String,
    /// Total count `N`.
    pub total: u64,
    /// Category count `K`, the inventory size.
    pub categories: usize,
    pub indices: IndexSummary,
    pub moments: MomentSummary,
    pub ord: OrdPoint,
    pub modified: ModifiedPoint,
}

impl LanguageSummary {
    pub fn compute(language: &str, table: &CategoryTable) -> Result<Self> {
        let ctx = || format!("language {language}");
        let moments = empirical_moments(&rank_frequencies(table)).context_with(ctx)?;
        Ok(LanguageSummary {
            language: language.to_string(),
            total: table.total(),
            categories: table.num_categories(),
            indices: index_summary(table).context_with(ctx)?,
            moments,
            ord: ord_coords(&moments).context_with(ctx)?,
            modified: modified_coords(table).context_with(ctx)?,
        })
    }

    pub fn coords(&self, mode: CoordMode) -> Vec<f64> {
        match mode {
            CoordMode::Original => vec![self.ord.i, self.ord.s],
            CoordMode::Modified => vec![self.modified.i_m, self.modified.s_m],
            CoordMode::Inventory => vec![self.categories as f64],
        }
    }
}

pub fn summarize(tables: &Tables) -> Result<Vec<LanguageSummary>> {
    tables
        .iter()
        .map(|(lang, table)| LanguageSummary::compute(lang, table))
        .collect()
}

pub fn point_set(languages: &[LanguageSummary], mode: CoordMode) -> Result<PointSet> {
    PointSet::new(
        languages.iter().map(|l| l.coords(mode)).collect(),
        languages.iter().map(|l| l.language.clone()).collect(),
    )
}

pub fn labeled_points(languages: &[LanguageSummary], mode: CoordMode) -> Vec<LabeledPoint> {
    languages
        .iter()
        .map(|l| {
            let c = l.coords(mode);
            LabeledPoint::new(&l.language, c[0], c.get(1).copied().unwrap_or(0.0))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub languages: Vec<LanguageSummary>,
    pub clustering: ClusterResult,
}

impl Report {
    /// Clusters the stored coordinates again with the stored configuration.
    pub fn recluster(&self) -> Result<ClusterResult> {
        self.config
            .cluster
            .apply(&point_set(&self.languages, self.config.coords)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Reads a table file in the given layout, or sniffs it from the header.
pub fn load_path(path: &Path, format: Option<Format>) -> Result<Tables> {
    let bytes = read_file(path)?;
    let ctx = || path.display().to_string();
    match format {
        Some(f) => load_tables(&bytes[..], f).context_with(ctx),
        None => load_tables_auto(&bytes[..])
            .map(|(t, _)| t)
            .context_with(ctx),
    }
}

/// JSON with sorted keys, two-space indent and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

/// Runs the configured analysis. Nothing is written here; see [`write_outputs`].
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let tables = load_path(&config.input, config.format)?;
    run_tables(&tables, config)
}

pub fn run_tables(tables: &Tables, config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let languages = summarize(tables)?;
    let clustering = config
        .cluster
        .apply(&point_set(&languages, config.coords)?)?;
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        languages,
        clustering,
    })
}

pub fn report_csv(report: &Report) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = [
        "language", "N", "K", "va", "sda", "re", "rr_norm", "mean", "mu2", "mu3", "I", "S", "I_m",
        "S_m", "cluster",
    ];
    let to_err = |e: csv::Error| Error::Value(e.to_string());
    w.write_record(header).map_err(to_err)?;
    for l in &report.languages {
        let cluster = report
            .clustering
            .cluster_of(&l.language)
            .map(|c| c.to_string())
            .unwrap_or_default();
        let row = [
            l.language.clone(),
            l.total.to_string(),
            l.categories.to_string(),
            l.indices.va.to_string(),
            l.indices.sda.to_string(),
            l.indices.re.to_string(),
            l.indices.rr_norm.to_string(),
            l.moments.mean.to_string(),
            l.moments.mu2.to_string(),
            l.moments.mu3.to_string(),
            l.ord.i.to_string(),
            l.ord.s.to_string(),
            l.modified.i_m.to_string(),
            l.modified.s_m.to_string(),
            cluster,
        ];
        w.write_record(&row).map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Value(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
}

fn plot_text(mode: CoordMode) -> PlotText {
    match mode {
        CoordMode::Modified => PlotText {
            title: "Modified Ord's graph".into(),
            x_label: "I_m = SDA / VA".into(),
            y_label: "S_m = RE / SDA".into(),
        },
        _ => PlotText {
            title: "Ord's graph".into(),
            x_label: "I = mu2 / mu".into(),
            y_label: "S = mu3 / mu2".into(),
        },
    }
}

pub fn render_languages(
    languages: &[LanguageSummary],
    mode: CoordMode,
    clusters: Option<&ClusterResult>,
    overlay: bool,
) -> Result<String> {
    if mode == CoordMode::Inventory {
        return Err(Error::Value(
            "inventory sizes are one-dimensional; no scatter plot".into(),
        ));
    }
    render_scatter_with(
        &labeled_points(languages, mode),
        clusters,
        overlay,
        &plot_text(mode),
    )
}

/// Writes whichever of the JSON, CSV and SVG outputs the config names.
pub fn write_outputs(report: &Report) -> Result<()> {
    let cfg = &report.config;
    // render everything before touching the filesystem so no partial output is left
    let svg = match &cfg.svg_output {
        Some(_) => Some(render_languages(
            &report.languages,
            cfg.coords,
            Some(&report.clustering),
            cfg.overlay,
        )?),
        None => None,
    };
    let csv = cfg
        .csv_output
        .as_ref()
        .map(|_| report_csv(report))
        .transpose()?;
    if let Some(p) = &cfg.json_output {
        write_file(p, &to_json(report))?;
    }
    if let (Some(p), Some(s)) = (&cfg.csv_output, csv) {
        write_file(p, &s)?;
    }
    if let (Some(p), Some(s)) = (&cfg.svg_output, svg) {
        write_file(p, &s)?;
    }
    Ok(())
}

/// One clustering of the reproduction experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproRun {
    pub coords: CoordMode,
    /// e.g. `kmeans/lloyd`, `kmedoids/manhattan`, `oracle/wcss`.
    pub method: String,
    pub clusters: Vec<Vec<String>>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reproduction {
    pub version: String,
    pub k: usize,
    pub seed: u64,
    pub restarts: usize,
    pub languages: Vec<LanguageSummary>,
    pub runs: Vec<ReproRun>,
}

impl Reproduction {
    pub fn runs_for(&self, coords: CoordMode) -> impl Iterator<Item = &ReproRun> {
        self.runs.iter().filter(move |r| r.coords == coords)
    }

    /// Clustering from the first run of a mode, as an SVG overlay source.
    fn first(&self, coords: CoordMode) -> Option<&ReproRun> {
        self.runs_for(coords).next()
    }

    /// The modified and original scatter plots, hulls from k-means/Lloyd.
    pub fn render(&self) -> Result<(String, String)> {
        let to_result = |run: &ReproRun| {
            let ids: Vec<String> = self.languages.iter().map(|l| l.language.clone()).collect();
            let assignment = ids
                .iter()
                .map(|id| {
                    run.clusters
                        .iter()
                        .position(|c| c.contains(id))
                        .unwrap_or(0)
                })
                .collect();
            ClusterResult {
                method: Method::Kmeans,
                variant: None,
                metric: None,
                seed: None,
                restarts: None,
                k: run.clusters.len(),
                ids,
                assignment,
                centers: Vec::new(),
                medoids: None,
                objective: run.objective,
                iterations: 0,
            }
        };
        let modified = self.first(CoordMode::Modified).map(to_result);
        let original = self.first(CoordMode::Original).map(to_result);
        Ok((
            render_languages(
                &self.languages,
                CoordMode::Modified,
                modified.as_ref(),
                false,
            )?,
            render_languages(
                &self.languages,
                CoordMode::Original,
                original.as_ref(),
                true,
            )?,
        ))
    }

    /// Human-readable listing, one line per run.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for run in &self.runs {
            let groups: Vec<String> = run
                .clusters
                .iter()
                .map(|c| format!("{{{}}}", c.join(", ")))
                .collect();
            out.push_str(&format!(
                "{:<10} {:<20} {}  (objective {})\n",
                run.coords.to_string(),
                run.method,
                groups.join(" "),
                format_sig4(run.objective)
            ));
        }
        out
    }
}

/// Clusters the bundled languages on modified, original and inventory
/// coordinates with every k-means variant, both PAM metrics and the exhaustive
/// WCSS optimum.
pub fn reproduce(seed: u64, restarts: usize) -> Result<Reproduction> {
    reproduce_tables(&slavic_tables(), 3, seed, restarts)
}

pub fn reproduce_tables(
    tables: &Tables,
    k: usize,
    seed: u64,
    restarts: usize,
) -> Result<Reproduction> {
    let languages = summarize(tables)?;
    let mut runs = Vec::new();
    for coords in [
        CoordMode::Modified,
        CoordMode::Original,
        CoordMode::Inventory,
    ] {
        let points = point_set(&languages, coords)?;
        let mut push = |method: String, r: ClusterResult| {
            runs.push(ReproRun {
                coords,
                method,
                clusters: canonical(r.clusters()),
                objective: r.objective,
            })
        };
        for variant in Variant::ALL {
            push(
                format!("kmeans/{variant}"),
                kmeans(&points, k, variant, seed, restarts)?,
            );
        }
        for metric in Metric::ALL {
            push(
                format!("kmedoids/{metric}"),
                kmedoids_pam(&points, k, metric)?,
            );
        }
        if points.len() <= crate::cluster::ORACLE_MAX_POINTS {
            push(
                "oracle/wcss".into(),
                partition_oracle(&points, k, Objective::Wcss)?,
            );
        }
    }
    Ok(Reproduction {
        version: env!("CARGO_PKG_VERSION").to_string(),
        k,
        seed,
        restarts,
        languages,
        runs,
    })
}

/// Writes `reproduce.json`, `modified.svg` and `original.svg` into `dir`.
pub fn write_reproduction(repro: &Reproduction, dir: &Path) -> Result<()> {
    let (modified, original) = repro.render()?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_file(&dir.join("reproduce.json"), &to_json(repro))?;
    write_file(&dir.join("modified.svg"), &modified)?;
    write_file(&dir.join("original.svg"), &original)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_shape() {
        let t = slavic_tables();
        assert_eq!(t.len(), 11);
        let sizes: Vec<usize> = t.values().map(|c| c.num_categories()).collect();
        assert_eq!(sizes, vec![43, 42, 37, 34, 33, 32, 31, 30, 30, 30, 25]);
        assert_eq!(&t["SLO"].counts()[..2], &[30849, 29708]);
        assert_eq!(t["RUS"].counts()[32], 0);
    }

    #[test]
    fn json_keys_sorted() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: u8,
        }
        assert_eq!(
            to_json(&S { zeta: 1, alpha: 2 }),
            "{\n  \"alpha\": 2,\n  \"zeta\": 1\n}\n"
        );
    }

    #[test]
    fn coord_mode_names() {
        assert_eq!(
            "inventory_size".parse::<CoordMode>().unwrap(),
            CoordMode::Inventory
        );
        assert_eq!(CoordMode::Modified.to_string(), "modified");
        assert!("raw".parse::<CoordMode>().is_err());
    }

    #[test]
    fn degenerate_language_names_itself() {
        let text = "language\tgrapheme\tcount\nok\ta\t3\nok\tb\t1\nbad\ta\t5\nbad\tb\t0\n";
        let tables = load_tables(text.as_bytes(), Format::Long).unwrap();
        let err = summarize(&tables).unwrap_err();
        assert!(err.to_string().contains("language bad"), "{err}");
        assert_eq!(err.exit_code(), 3);
    }
}
