use clap::{Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qvord::cluster::{ClusterResult, Method, Metric, Variant, DEFAULT_RESTARTS, DEFAULT_SEED};
use qvord::freqdata::{count_graphemes, load_alphabet, save_tables, Format, Tables};
use qvord::moments::ord_coords;
use qvord::pipeline::{
    self, load_path, render_languages, summarize, to_json, ClusterSpec, CoordMode, Report,
    RunConfig,
};
use qvord::theory::{classify_region, dist_moments, DistSpec};
use qvord::Error;

#[derive(Parser)]
#[command(
    name = "qvord",
    version,
    about = "Qualitative variation indices and Ord's graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// VA, SDA, RE and RR_norm per language
    Indices {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Original and modified Ord coordinates per language
    Ord {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cluster languages on one kind of coordinates
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        coords: CoordMode,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        method: Method,
        #[arg(long, default_value = "lloyd")]
        variant: Variant,
        #[arg(long, default_value = "euclidean")]
        metric: Metric,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// SVG scatter plot, optionally with cluster hulls from a cluster report
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        format: Option<Format>,
        #[arg(long)]
        coords: CoordMode,
        #[arg(long)]
        clusters: Option<PathBuf>,
        #[arg(long)]
        overlay: bool,
        #[arg(long)]
        output: PathBuf,
    },
    /// Ord coordinates of a theoretical distribution
    Theory {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        params: String,
        #[arg(long)]
        classify: bool,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Count graphemes of a text into a long-format table
    Count {
        #[arg(long)]
        text: PathBuf,
        #[arg(long)]
        alphabet: PathBuf,
        #[arg(long)]
        fold_case: bool,
        /// Language column value; defaults to the text file stem
        #[arg(long)]
        language: Option<String>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Classify the bundled Slavic languages with every method
    Reproduce {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        /// Directory for reproduce.json, modified.svg and original.svg
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn read_text(path: &Path) -> qvord::Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::Io {
        path: path.into(),
        source: e,
    })?;
    String::from_utf8(bytes).map_err(|_| Error::Parse {
        line: 0,
        message: format!("{} is not valid UTF-8", path.display()),
    })
}

fn emit(text: &str, output: Option<&Path>) -> qvord::Result<()> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io {
            path: p.into(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_clusters(path: &Path) -> qvord::Result<ClusterResult> {
    let text = read_text(path)?;
    if let Ok(report) = Report::from_json(&text) {
        return Ok(report.clustering);
    }
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        line: e.line(),
        message: format!(
            "{}: neither a cluster report nor a cluster result",
            path.display()
        ),
    })
}

fn execute(command: Command) -> qvord::Result<()> {
    match command {
        Command::Indices {
            input,
            format,
            output,
        } => {
            let languages = summarize(&load_path(&input, Some(format))?)?;
            let rows: serde_json::Map<String, serde_json::Value> = languages
                .iter()
                .map(|l| {
                    let mut v = serde_json::to_value(l.indices).expect("plain struct");
                    v["N"] = l.total.into();
                    v["K"] = l.categories.into();
                    (l.language.clone(), v)
                })
                .collect();
            emit(&to_json(&rows), output.as_deref())
        }
        Command::Ord {
            input,
            format,
            output,
        } => {
            let languages = summarize(&load_path(&input, Some(format))?)?;
            let rows: serde_json::Map<String, serde_json::Value> = languages
                .iter()
                .map(|l| {
                    let v = serde_json::json!({
                        "moments": l.moments,
                        "original": l.ord,
                        "modified": { "i_m": l.modified.i_m, "s_m": l.modified.s_m },
                    });
                    (l.language.clone(), v)
                })
                .collect();
            emit(&to_json(&rows), output.as_deref())
        }
        Command::Cluster {
            input,
            format,
            coords,
            k,
            method,
            variant,
            metric,
            seed,
            restarts,
            output,
        } => {
            let mut config = RunConfig::new(
                input,
                coords,
                ClusterSpec {
                    method,
                    variant,
                    metric,
                    k,
                    seed,
                    restarts,
                },
            );
            config.format = format;
            let report = pipeline::run(&config)?;
            emit(&to_json(&report), output.as_deref())
        }
        Command::Plot {
            input,
            format,
            coords,
            clusters,
            overlay,
            output,
        } => {
            let languages = summarize(&load_path(&input, format)?)?;
            let clusters = clusters.as_deref().map(load_clusters).transpose()?;
            let svg = render_languages(&languages, coords, clusters.as_ref(), overlay)?;
            emit(&svg, Some(&output))
        }
        Command::Theory {
            dist,
            params,
            classify,
            tol,
        } => {
            let spec = DistSpec::parse(&dist, &params)?;
            let moments = dist_moments(&spec)?;
            let point = ord_coords(&moments)?;
            let mut out = serde_json::json!({
                "distribution": spec,
                "moments": moments,
                "point": point,
            });
            if classify {
                out["classification"] =
                    serde_json::to_value(classify_region(point, tol)).expect("plain struct");
            }
            emit(&to_json(&out), None)
        }
        Command::Count {
            text,
            alphabet,
            fold_case,
            language,
            output,
        } => {
            let alpha = load_alphabet(&read_text(&alphabet)?, fold_case)
                .map_err(|e| e.context(alphabet.display().to_string()))?;
            let table = count_graphemes(&read_text(&text)?, &alpha)
                .map_err(|e| e.context(text.display().to_string()))?;
            let language = language.unwrap_or_else(|| {
                text.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "text".into())
            });
            let mut tables = Tables::new();
            tables.insert(language, table);
            let mut buf = Vec::new();
            save_tables(&tables, Format::Long, &mut buf)?;
            emit(
                &String::from_utf8(buf).expect("UTF-8 labels"),
                Some(&output),
            )
        }
        Command::Reproduce {
            seed,
            restarts,
            out_dir,
        } => {
            let repro = pipeline::reproduce(seed, restarts)?;
            print!("{}", repro.summary());
            if let Some(dir) = out_dir {
                pipeline::write_reproduction(&repro, &dir)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
