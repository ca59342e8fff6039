use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use pqk::circuit::{Entanglement, PairMap};
use pqk::harness::{
    embed_dataset, feature_order, per_motif_analysis, read_labeled_csv, run_experiment, screen_experiment,
    write_count_csv, write_significance_csv, write_split_f1_csv, ExperimentConfig, OrderMode, Scale,
};
use pqk::kernel::{Gamma, KernelKind, KernelSpec};
use pqk::motif::{encode_dataset, load_constructs, read_encoded_csv, write_encoded_csv};
use pqk::sim::{write_feature_csv, Backend, EmbeddingConfig, FeatureCache, StatevectorSimulator, DEFAULT_MAX_QUBITS};
use pqk::svm::{grid_search, predict, smo_train, weighted_f1, Grid, SmoParams, SvmModel};
use pqk::{PqkError, Result};

#[derive(Parser)]
#[command(name = "pqk", version, about = "Projected quantum kernel pipeline")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    E1,
    E2,
}

#[derive(Subcommand)]
enum Command {
    /// One-hot encode a constructs CSV.
    Encode {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 4)]
        positions: usize,
    },
    /// Project an encoded CSV to single-qubit Pauli features.
    Embed {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum)]
        embedding: Family,
        #[arg(long, default_value_t = 8)]
        reps: usize,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, default_value = "pi2")]
        scale: Scale,
        #[arg(long, default_value = "exact")]
        backend: Backend,
        #[arg(long, default_value = "natural")]
        order: OrderMode,
        #[arg(long, value_parser = parse_entanglement, default_value = "linear")]
        entanglement: Entanglement,
        /// E1 pair angle: `product` 2·s²·x_j·x_k or `shifted` 2·(π−s·x_j)(π−s·x_k).
        #[arg(long, value_parser = parse_pair_map, default_value = "product")]
        pair_map: PairMap,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Kernel screening metrics for an experiment config.
    Screen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fit an SVM on a labeled CSV; without --kernel the grid is searched.
    Train {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        kernel: Option<KernelKind>,
        /// Penalty for a fixed kernel, or comma-separated grid values.
        #[arg(long, value_delimiter = ',')]
        c: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<Gamma>,
        #[arg(long, value_delimiter = ',')]
        kernels: Vec<KernelKind>,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        grid_csv: Option<PathBuf>,
    },
    /// Score a saved model on a labeled CSV.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
    /// Run the full split protocol and write the report files.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
    },
}

fn parse_entanglement(s: &str) -> std::result::Result<Entanglement, String> {
    match s {
        "linear" => Ok(Entanglement::Linear),
        "full" => Ok(Entanglement::Full),
        other => Err(format!("unknown entanglement `{other}`")),
    }
}

fn parse_pair_map(s: &str) -> std::result::Result<PairMap, String> {
    match s {
        "product" => Ok(PairMap::Product),
        "shifted" => Ok(PairMap::Shifted),
        other => Err(format!("unknown pair map `{other}`")),
    }
}

fn pick<T>(given: Vec<T>, default: Vec<T>) -> Vec<T> {
    if given.is_empty() {
        default
    } else {
        given
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| PqkError::Data(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Encode { input, output, positions } => {
            let data = encode_dataset(&load_constructs(&input)?, positions)?;
            write_encoded_csv(create(&output)?, &data)?;
            info!("encoded {} constructs into {} bits", data.len(), data.width());
        }
        Command::Embed {
            input,
            output,
            embedding,
            reps,
            steps,
            scale,
            backend,
            order,
            entanglement,
            pair_map,
            seed,
            max_qubits,
            cache_dir,
        } => {
            let data = read_encoded_csv(open(&input)?)?;
            let emb = match embedding {
                Family::E1 => EmbeddingConfig::ZzFeatureMap { reps, scale: scale.0, entanglement, pair_map },
                Family::E2 => EmbeddingConfig::Heisenberg { steps, scale: scale.0, seed },
            };
            let cache = cache_dir.map(FeatureCache::new).transpose()?;
            let perm = feature_order(&data, order);
            let sim = StatevectorSimulator { max_qubits };
            let m = embed_dataset(&data, &emb, backend, &perm, &sim, cache.as_ref())?;
            write_feature_csv(create(&output)?, &m, Some(&data.labels()))?;
        }
        Command::Screen { config, output } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = screen_experiment(&cfg)?;
            print!("{report}");
            if let Some(path) = output {
                serde_json::to_writer_pretty(create(&path)?, &report)?;
            }
        }
        Command::Train { input, output, kernel, c, gamma, kernels, folds, seed, grid_csv } => {
            let t = read_labeled_csv(open(&input)?)?;
            let params = SmoParams::default();
            let model = match kernel {
                Some(kind) => {
                    let [c] = c.as_slice() else {
                        return Err(PqkError::Config("a fixed kernel needs exactly one --c".into()));
                    };
                    let g = match gamma.as_slice() {
                        [] => Gamma::Scale,
                        [g] => *g,
                        _ => return Err(PqkError::Config("a fixed kernel takes at most one --gamma".into())),
                    };
                    smo_train(&t.rows, &t.labels, &KernelSpec::new(kind, g), *c, &params)?
                }
                None => {
                    let seed = seed.ok_or_else(|| PqkError::Config("grid search needs --seed".into()))?;
                    let full = Grid::full();
                    let grid = Grid::new(pick(kernels, full.kernels), pick(c, full.c), pick(gamma, full.gamma))?;
                    let result = grid_search(&t.rows, &t.labels, &grid, folds, seed)?;
                    if let Some(path) = grid_csv {
                        result.write_csv(create(&path)?)?;
                    }
                    let best = result.best();
                    println!(
                        "best: {} C={} gamma={} cv_f1={:.4} ± {:.4}",
                        best.spec.kind, best.c, best.spec.gamma, best.mean, best.std
                    );
                    smo_train(&t.rows, &t.labels, &best.spec, best.c, &params)?
                }
            };
            serde_json::to_writer_pretty(create(&output)?, &model)?;
        }
        Command::Evaluate { model, input, predictions } => {
            let model: SvmModel = serde_json::from_reader(open(&model)?)?;
            let t = read_labeled_csv(open(&input)?)?;
            let pred = predict(&model, &t.rows)?;
            println!("weighted_f1 = {:.6}", weighted_f1(&t.labels, &pred)?);
            if let Some(path) = predictions {
                let mut w = csv::Writer::from_writer(create(&path)?);
                w.write_record(["row", "label", "prediction"])?;
                for (i, (y, p)) in t.labels.iter().zip(&pred).enumerate() {
                    w.write_record([i.to_string(), y.to_string(), p.to_string()])?;
                }
                w.flush()?;
            }
        }
        Command::Report { config, out_dir, alpha } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = run_experiment(&cfg)?;
            fs::create_dir_all(&out_dir)?;
            create(&out_dir.join("report.json"))?.write_all(report.to_json()?.as_bytes())?;
            write_count_csv(create(&out_dir.join("counts.csv"))?, &report)?;
            write_split_f1_csv(create(&out_dir.join("split_f1.csv"))?, &report)?;
            let sig = per_motif_analysis(&report, alpha)?;
            write_significance_csv(create(&out_dir.join("significance.csv"))?, &sig)?;
            println!(
                "original median F1 {:.4} (max {:.4}); pqk median F1 {:.4} (max {:.4}); {} significant cells",
                report.original.median,
                report.original.max,
                report.pqk.median,
                report.pqk.max,
                sig.iter().filter(|r| r.significant).count()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
