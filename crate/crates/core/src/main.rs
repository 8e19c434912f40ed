//! Command-line pipeline: simulate a network, track its holes, render the
//! barcode, and re-verify a finished report against the brute-force oracle.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

use holetrack::hopsize::{annotate_barcode, SizeProfile};
use holetrack::io::{
    build_report, digest_hex, emit_report, parse_adjacency_sequence, parse_events, parse_report,
    write_adjacency_sequence, InputKind, ReportParams,
};
use holetrack::netsim::{simulate_frames, NetworkConfig};
use holetrack::oracle;
use holetrack::render::{render_svg, render_text};
use holetrack::sequence::{build_stream, complexes_from_adjacency_sequence, CoarseSequence};
use holetrack::simplicial::{boundary, Z2Chain};
use holetrack::tracker::{classify, run, Change, EventKind, EventStream, TrackerState};

#[derive(Parser)]
#[command(name = "holetrack", version, about = "Coverage-hole tracking for dynamic sensor networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tracker over an event stream or an adjacency sequence.
    Track(TrackArgs),
    /// Generate a seeded dynamic network as an adjacency sequence.
    Simulate(SimulateArgs),
    /// Render a report as text or SVG.
    Render(RenderArgs),
    /// Replay a report's input and re-verify every tracker answer against
    /// the from-scratch oracle.
    OracleCheck(OracleCheckArgs),
}

#[derive(Args)]
#[command(group = ArgGroup::new("input").required(true).args(["events", "adjacency"]))]
struct TrackArgs {
    /// Event stream file, one `A v,..`/`R v,..` line per step.
    #[arg(long)]
    events: Option<PathBuf>,
    /// Adjacency-sequence JSON file.
    #[arg(long)]
    adjacency: Option<PathBuf>,
    /// Homology dimensions to track.
    #[arg(long, value_delimiter = ',', default_values_t = [0, 1])]
    dims: Vec<usize>,
    /// Drop closed intervals that were never live at a coarse mark
    /// (adjacency input only).
    #[arg(long)]
    collapse_zero_length: bool,
    /// Annotate H_1 intervals with hop sizes per coarse step (adjacency
    /// input only).
    #[arg(long)]
    sizes: bool,
    /// Seed to record in the report when the input came from `simulate`.
    #[arg(long)]
    seed: Option<u64>,
    /// Report output path.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Network config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Adjacency-sequence output path.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
#[command(group = ArgGroup::new("mode").required(true).args(["svg", "text"]))]
struct RenderArgs {
    #[arg(long)]
    report: PathBuf,
    /// Write an SVG barcode to this path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Print the text barcode to stdout.
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
#[command(group = ArgGroup::new("input").required(true).args(["events", "adjacency"]))]
struct OracleCheckArgs {
    #[arg(long)]
    report: PathBuf,
    /// The event file the report was produced from.
    #[arg(long)]
    events: Option<PathBuf>,
    /// The adjacency file the report was produced from.
    #[arg(long)]
    adjacency: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Track(args) => track(&args),
        Command::Simulate(args) => simulate(&args),
        Command::Render(args) => render(&args),
        Command::OracleCheck(args) => oracle_check(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Stream plus optional coarse structure, from either input kind.
fn load_input(
    events: Option<&PathBuf>,
    adjacency: Option<&PathBuf>,
) -> Result<(EventStream, Option<CoarseSequence>, InputKind, String)> {
    if let Some(path) = events {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let text = String::from_utf8(bytes.clone()).context("event file is not UTF-8")?;
        let stream = parse_events(&text)?;
        Ok((stream, None, InputKind::Events, digest_hex(&bytes)))
    } else {
        let path = adjacency.expect("clap guarantees one input");
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let text = String::from_utf8(bytes.clone()).context("adjacency file is not UTF-8")?;
        let frames = parse_adjacency_sequence(&text)?;
        let complexes = complexes_from_adjacency_sequence(&frames)?;
        let (stream, coarse) = build_stream(&complexes)?;
        Ok((stream, Some(coarse), InputKind::Adjacency, digest_hex(&bytes)))
    }
}

fn normalized_dims(dims: &[usize]) -> Vec<usize> {
    let mut d = dims.to_vec();
    d.sort_unstable();
    d.dedup();
    d
}

fn track(args: &TrackArgs) -> Result<()> {
    let (stream, coarse, kind, digest) = load_input(args.events.as_ref(), args.adjacency.as_ref())?;
    if kind == InputKind::Events {
        if args.sizes {
            bail!("--sizes needs coarse complexes; use --adjacency input");
        }
        if args.collapse_zero_length {
            bail!("--collapse-zero-length needs coarse marks; use --adjacency input");
        }
    }
    let dims = normalized_dims(&args.dims);
    let barcode = run(&stream, &dims)?;
    let profiles: Option<Vec<SizeProfile>> = if args.sizes {
        Some(annotate_barcode(&barcode, coarse.as_ref().expect("adjacency input"))?)
    } else {
        None
    };
    let report = build_report(&ReportParams {
        barcode: &barcode,
        coarse: coarse.as_ref(),
        sizes: profiles.as_deref(),
        input_kind: kind,
        input_digest: digest,
        seed: args.seed,
        dims: &dims,
        collapse_zero_length: args.collapse_zero_length,
    });
    fs::write(&args.output, emit_report(&report))
        .with_context(|| format!("writing {}", args.output.display()))?;
    eprintln!(
        "track: {} events, {} intervals -> {}",
        report.events,
        report.intervals.len(),
        args.output.display()
    );
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let text = fs::read_to_string(&args.config)
        .with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg: NetworkConfig = serde_json::from_str(&text).context("parsing config")?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let frames = simulate_frames(&cfg)?;
    fs::write(&args.output, write_adjacency_sequence(&frames))
        .with_context(|| format!("writing {}", args.output.display()))?;
    eprintln!(
        "simulate: n={} steps={} seed={} -> {}",
        cfg.n,
        cfg.steps,
        cfg.seed,
        args.output.display()
    );
    Ok(())
}

fn render(args: &RenderArgs) -> Result<()> {
    let text = fs::read_to_string(&args.report)
        .with_context(|| format!("reading {}", args.report.display()))?;
    let report = parse_report(&text)?;
    if let Some(path) = &args.svg {
        fs::write(path, render_svg(&report))
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("render: {} bars -> {}", report.intervals.len(), path.display());
    } else {
        print!("{}", render_text(&report));
    }
    Ok(())
}

fn oracle_check(args: &OracleCheckArgs) -> Result<()> {
    let text = fs::read_to_string(&args.report)
        .with_context(|| format!("reading {}", args.report.display()))?;
    let stored = parse_report(&text)?;
    let (stream, coarse, kind, digest) =
        load_input(args.events.as_ref(), args.adjacency.as_ref())?;
    if kind != stored.input_kind {
        bail!("report was produced from {:?} input, got {:?}", stored.input_kind, kind);
    }
    if digest != stored.input_digest {
        bail!(
            "input digest mismatch: report {} vs file {digest}",
            stored.input_digest
        );
    }
    println!("ok: input digest matches");

    // Replay the stream, re-deriving every invariant from scratch.
    let dims = normalized_dims(&stored.dims);
    let mut state = TrackerState::new(&dims);
    let mut closed = Vec::new();
    for event in stream.events() {
        // A removal that kills an untracked class also yields no interval, so
        // classify first instead of inferring "birth" from a None return.
        let change = classify(&state, event)?;
        let canonical_birth: Option<Z2Chain> = (change == (Change::Birth, 1)
            && event.kind == EventKind::Remove
            && event.simplex.dimension() == 2)
            .then(|| boundary(&event.simplex));
        if let Some(interval) = state.step(event)? {
            closed.push(interval);
        } else if let Some(expected) = canonical_birth {
            if dims.contains(&1) {
                let reps = state.current_representatives(1);
                let first = reps
                    .first()
                    .ok_or_else(|| anyhow!("step {}: birth by removal lost its column", event.step))?;
                if first.0 != event.step || first.1 != expected {
                    bail!(
                        "step {}: birth by 2-simplex removal did not store its boundary",
                        event.step
                    );
                }
            }
        }
        for &p in &dims {
            let reps = state.current_representatives(p);
            let expected = oracle::betti(state.complex(), p);
            if reps.len() != expected {
                bail!(
                    "step {}: {} live intervals in dim {p}, oracle says {expected}",
                    event.step,
                    reps.len()
                );
            }
            for (_, cycle) in &reps {
                for s in cycle.support() {
                    if !state.complex().contains(s) {
                        bail!("step {}: representative uses removed simplex {s}", event.step);
                    }
                }
            }
            let cycles: Vec<Z2Chain> = reps.into_iter().map(|(_, c)| c).collect();
            if !oracle::validate_basis(state.complex(), p, &cycles) {
                bail!("step {}: representatives fail as a homology basis in dim {p}", event.step);
            }
        }
    }
    println!("ok: per-event counts, bases, canonical births, and supports verified");

    // Reassemble the report under the stored options; it must match exactly.
    let barcode = holetrack::tracker::TrackedBarcode {
        closed,
        open: state.drain_open(),
        events: stream.len(),
    };
    let profiles: Option<Vec<SizeProfile>> = if stored.with_sizes {
        let coarse = coarse
            .as_ref()
            .ok_or_else(|| anyhow!("report has sizes but the input has no coarse structure"))?;
        Some(annotate_barcode(&barcode, coarse)?)
    } else {
        None
    };
    let rebuilt = build_report(&ReportParams {
        barcode: &barcode,
        coarse: coarse.as_ref(),
        sizes: profiles.as_deref(),
        input_kind: kind,
        input_digest: digest,
        seed: stored.seed,
        dims: &dims,
        collapse_zero_length: stored.collapse_zero_length,
    });
    if rebuilt != stored {
        bail!("replayed report differs from the stored one");
    }
    println!("ok: replayed report matches byte-for-byte");
    Ok(())
}
