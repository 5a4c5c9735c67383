use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use morsereduce::image::DEFAULT_PGM_THRESHOLD;
use morsereduce::pipeline::{
    run_checks, Checks, Dims, PipelineOptions, PipelineReport, PipelineResult,
};
use morsereduce::{
    boundary_matrices, build_cubical, count_components, parse_netpbm, reduce_pipeline_with,
    reduce_truncated, rs_algorithm, sort_by_lambda, BinaryImage, Gf2Matrix, TruncatedComplex,
};

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "morsereduce",
    version,
    about = "Homology of binary images over GF(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Betti numbers of a PBM/PGM image, as a JSON report.
    Homology {
        image: PathBuf,
        #[command(flatten)]
        input: ImageInput,
        /// Compute Betti numbers on the unreduced boundary matrices.
        #[arg(long)]
        no_reduce: bool,
        /// Skip the verification battery.
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        pretty: bool,
        /// Directory to write the reduced `d1.txt` and `d2.txt` into.
        #[arg(long)]
        emit_reduced: Option<PathBuf>,
    },
    /// Reduce a complex given as two matrix files `D1` and `D2`.
    Reduce {
        d1: PathBuf,
        d2: PathBuf,
        #[arg(long)]
        fast: bool,
        #[arg(long)]
        pretty: bool,
        #[arg(long)]
        emit_reduced: Option<PathBuf>,
    },
    /// Write the boundary matrices of an image.
    Matrices {
        image: PathBuf,
        #[command(flatten)]
        input: ImageInput,
        /// Output directory for `d1.txt` and `d2.txt`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Admissible discrete vector field of a matrix, sorted by lambda.
    Dvf { matrix: PathBuf },
    /// Run the verification battery on an image or on random images.
    Verify {
        image: Option<PathBuf>,
        #[command(flatten)]
        input: ImageInput,
        /// Number of random images.
        #[arg(long, conflicts_with = "image")]
        random: Option<usize>,
        #[command(flatten)]
        synth: Synthetic,
        /// Corrupt the homotopy of each reduction before checking.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Time the pipeline on random images; CSV on stdout.
    Bench {
        #[command(flatten)]
        synth: Synthetic,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long)]
        fast: bool,
    },
}

#[derive(Debug, Args)]
struct ImageInput {
    /// PGM pixels strictly below this value are foreground.
    #[arg(long, default_value_t = DEFAULT_PGM_THRESHOLD)]
    threshold: u8,
}

#[derive(Debug, Args)]
struct Synthetic {
    #[arg(long, num_args = 2, value_names = ["W", "H"], default_values_t = [32, 32])]
    size: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Synthetic {
    /// Image `i` of a batch uses seed `seed + i`.
    fn image(&self, i: usize) -> BinaryImage {
        BinaryImage::random(
            self.size[0],
            self.size[1],
            self.density,
            self.seed.wrapping_add(i as u64),
        )
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Homology {
            image,
            input,
            no_reduce,
            fast,
            pretty,
            emit_reduced,
        } => {
            let img = read_image(&image, input.threshold)?;
            if no_reduce {
                let report = unreduced_report(&img)?;
                print_json(&report, pretty)?;
                return Ok(exit_for(&report.checks, true));
            }
            let res = reduce_pipeline_with(&img, PipelineOptions { verify: !fast })?;
            finish_pipeline(&res, pretty, emit_reduced.as_deref())
        }
        Command::Reduce {
            d1,
            d2,
            fast,
            pretty,
            emit_reduced,
        } => {
            let t = TruncatedComplex::new(read_matrix(&d1)?, read_matrix(&d2)?)?;
            let res = reduce_truncated(t, PipelineOptions { verify: !fast })?;
            finish_pipeline(&res, pretty, emit_reduced.as_deref())
        }
        Command::Matrices { image, input, out } => {
            let img = read_image(&image, input.threshold)?;
            let t = boundary_matrices(&build_cubical(&img))?;
            write_matrices(&out, &t)?;
            Ok(EXIT_OK)
        }
        Command::Dvf { matrix } => {
            let m = read_matrix(&matrix)?;
            print!("{}", sort_by_lambda(&rs_algorithm(&m)));
            Ok(EXIT_OK)
        }
        Command::Verify {
            image,
            input,
            random,
            synth,
            inject_fault,
        } => {
            let images: Vec<BinaryImage> = match (image, random) {
                (Some(path), _) => vec![read_image(&path, input.threshold)?],
                (None, Some(n)) => (0..n).map(|i| synth.image(i)).collect(),
                (None, None) => bail!("give an image path or --random N"),
            };
            verify_batch(&images, inject_fault)
        }
        Command::Bench {
            synth,
            trials,
            fast,
        } => {
            bench(&synth, trials, fast)?;
            Ok(EXIT_OK)
        }
    }
}

fn read_image(path: &Path, threshold: u8) -> Result<BinaryImage> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    parse_netpbm(&bytes, threshold).with_context(|| format!("parsing {}", path.display()))
}

fn read_matrix(path: &Path) -> Result<Gf2Matrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn write_matrices(dir: &Path, t: &TruncatedComplex) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("d1.txt"), t.d1.to_text())?;
    fs::write(dir.join("d2.txt"), t.d2.to_text())?;
    Ok(())
}

fn print_json(report: &PipelineReport, pretty: bool) -> Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(report)?
    } else {
        serde_json::to_string(report)?
    };
    println!("{text}");
    Ok(())
}

fn exit_for(checks: &Checks, betti_equal: bool) -> u8 {
    if checks.none_failed() && betti_equal {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

fn finish_pipeline(res: &PipelineResult, pretty: bool, emit: Option<&Path>) -> Result<u8> {
    if let Some(dir) = emit {
        write_matrices(dir, &res.reduced)?;
    }
    print_json(&res.report(), pretty)?;
    for note in &res.notes {
        eprintln!("note: {note}");
    }
    if res.all_passed() {
        return Ok(EXIT_OK);
    }
    for failed in res.details.failures() {
        eprintln!("failed: {failed}");
    }
    Ok(EXIT_VERIFY_FAILED)
}

fn unreduced_report(img: &BinaryImage) -> Result<PipelineReport> {
    let start = Instant::now();
    let t = boundary_matrices(&build_cubical(img))?;
    let built = start.elapsed().as_secs_f64() * 1e3;
    let betti = t.betti();
    let total = start.elapsed().as_secs_f64() * 1e3;
    let [c0, c1, c2] = t.dims();
    let dims = Dims { c0, c1, c2 };
    Ok(PipelineReport {
        original: dims,
        nv: 0,
        reduced: dims,
        betti_original: betti,
        betti_reduced: betti,
        components: Some(count_components(img)),
        checks: Checks {
            boundary: Some(t.check_boundary().is_ok()),
            ..Checks::default()
        },
        timings_ms: BTreeMap::from([
            ("complex".to_string(), built),
            ("betti_original".to_string(), total - built),
            ("total".to_string(), total),
        ]),
    })
}

/// Thread pool honoring `MORSEREDUCE_THREADS` (unset or 0: rayon default).
fn pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var("MORSEREDUCE_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .with_context(|| format!("MORSEREDUCE_THREADS={v:?} is not a count"))?,
        _ => 0,
    };
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()?)
}

const VERIFY_ROWS: [&str; 10] = [
    "dvf",
    "triangular",
    "boundary",
    "reduction_axioms",
    "bpl_match",
    "nilpotency",
    "betti_equal",
    "betti0_components",
    "betti2_zero",
    "pipeline_error",
];

fn verify_batch(images: &[BinaryImage], inject_fault: bool) -> Result<u8> {
    let outcomes: Vec<Vec<(&'static str, bool)>> = pool()?.install(|| {
        images
            .par_iter()
            .map(|img| verify_one(img, inject_fault))
            .collect()
    });

    let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for name in VERIFY_ROWS {
        tally.insert(name, (0, 0));
    }
    for (name, ok) in outcomes.iter().flatten() {
        let e = tally.entry(name).or_default();
        if *ok {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    println!("instances {}", images.len());
    let mut any_failed = false;
    for name in VERIFY_ROWS {
        let (pass, fail) = tally[name];
        any_failed |= fail > 0;
        println!("{name} passed={pass} failed={fail}");
    }
    Ok(if any_failed {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    })
}

fn verify_one(img: &BinaryImage, inject_fault: bool) -> Vec<(&'static str, bool)> {
    let run = || -> morsereduce::Result<PipelineResult> {
        let mut res = reduce_pipeline_with(img, PipelineOptions { verify: false })?;
        if inject_fault {
            if let Some(h0) = res.reduction.h_mut(0) {
                if h0.rows() > 0 && h0.cols() > 0 {
                    h0.flip(0, 0);
                }
            }
        }
        run_checks(&mut res);
        Ok(res)
    };
    match run() {
        Ok(res) => {
            let mut out: Vec<(&'static str, bool)> = res
                .checks
                .entries()
                .into_iter()
                .map(|(n, v)| (n, v == Some(true)))
                .collect();
            out.push(("betti_equal", res.betti_original == res.betti_reduced));
            out.push((
                "betti0_components",
                res.components == Some(res.betti_original[0]),
            ));
            out.push(("betti2_zero", res.betti_original[2] == 0));
            out.push(("pipeline_error", true));
            out
        }
        Err(e) => {
            eprintln!("pipeline error: {e}");
            vec![("pipeline_error", false)]
        }
    }
}

fn bench(synth: &Synthetic, trials: usize, fast: bool) -> Result<()> {
    const STAGES: [&str; 8] = [
        "complex",
        "dvf",
        "reorder",
        "reduce",
        "betti_original",
        "betti_reduced",
        "verify",
        "total",
    ];
    let mut header = vec!["trial", "c0", "c1", "c2", "nv", "r0", "r1", "r2"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    header.extend(STAGES.iter().map(|s| format!("{s}_ms")));
    println!("{}", header.join(","));

    for trial in 0..trials {
        let img = synth.image(trial);
        let res = reduce_pipeline_with(&img, PipelineOptions { verify: !fast })?;
        if !res.all_passed() {
            bail!("trial {trial} failed verification");
        }
        let [c0, c1, c2] = res.original.dims();
        let [r0, r1, r2] = res.reduced.dims();
        let mut row = vec![
            trial.to_string(),
            c0.to_string(),
            c1.to_string(),
            c2.to_string(),
            res.nv().to_string(),
            r0.to_string(),
            r1.to_string(),
            r2.to_string(),
        ];
        row.extend(
            STAGES
                .iter()
                .map(|s| format!("{:.3}", res.timings_ms.get(*s).copied().unwrap_or(0.0))),
        );
        println!("{}", row.join(","));
    }
    Ok(())
}
