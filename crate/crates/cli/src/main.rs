//! `xara`: certify X-tanglement/X-arability of quantum states and
//! subspaces from the command line. Inputs and outputs are JSON; complex
//! numbers are `[re, im]` pairs and matrices are row-major.

mod request;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use request::{error_json, exit_code, run_request, InputPayload, JobReport, JobRequest};
use xarability::VarietySpec;

#[derive(Parser)]
#[command(
    name = "xara",
    version,
    about = "Hierarchies for X-arability of states and X-tanglement of subspaces",
    long_about = None
)]
struct Cli {
    /// Run one JSON job request (object) or a batch (array of objects)
    /// instead of inline flags.
    #[arg(long, value_name = "FILE", global = true)]
    request: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone)]
struct VarietyArgs {
    /// Variety family: sep | schmidt | bosonic | fermionic | bisep | lsep
    /// | tprod | mps | schmidt_surrogate. Alternatively pass --spec-json.
    #[arg(long)]
    variety: Option<String>,
    /// Local dimensions, comma separated (e.g. 2,2,3).
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// Schmidt rank / bond dimension bound.
    #[arg(long)]
    r: Option<usize>,
    /// Particle count (bosonic/fermionic).
    #[arg(short, long)]
    m: Option<usize>,
    /// Constituent dimension (bosonic/fermionic).
    #[arg(short, long)]
    n: Option<usize>,
    /// Block count for lsep.
    #[arg(short, long)]
    l: Option<usize>,
    /// Block-size bound for tprod.
    #[arg(short, long)]
    t: Option<usize>,
    /// Factor indices on one side of the surrogate bipartition.
    #[arg(long, value_delimiter = ',')]
    bipartition: Vec<usize>,
    /// Full variety spec as a JSON object (overrides the flags above).
    #[arg(long)]
    spec_json: Option<String>,
}

impl VarietyArgs {
    fn build(&self) -> Result<VarietySpec, String> {
        if let Some(js) = &self.spec_json {
            return serde_json::from_str(js).map_err(|e| format!("bad --spec-json: {e}"));
        }
        let name = self.variety.as_deref().ok_or("missing --variety")?;
        let dims = self.dims.clone();
        let spec = match name {
            "sep" => VarietySpec::Sep { dims },
            "schmidt" => VarietySpec::Schmidt {
                r: self.r.ok_or("schmidt needs --r")?,
                dims,
            },
            "bosonic" => VarietySpec::Bosonic {
                m: self.m.ok_or("bosonic needs --m")?,
                n: self.n.ok_or("bosonic needs --n")?,
            },
            "fermionic" => VarietySpec::Fermionic {
                m: self.m.ok_or("fermionic needs --m")?,
                n: self.n.ok_or("fermionic needs --n")?,
            },
            "bisep" => VarietySpec::Bisep { dims },
            "lsep" => VarietySpec::LSep {
                l: self.l.ok_or("lsep needs --l")?,
                dims,
            },
            "tprod" => VarietySpec::TProd {
                t: self.t.ok_or("tprod needs --t")?,
                dims,
            },
            "mps" => VarietySpec::Mps {
                r: self.r.ok_or("mps needs --r")?,
                dims,
            },
            "schmidt_surrogate" => VarietySpec::SchmidtSurrogate {
                r: self.r.ok_or("schmidt_surrogate needs --r")?,
                dims,
                bipartition: self.bipartition.clone(),
            },
            other => return Err(format!("unknown variety {other:?}")),
        };
        Ok(spec)
    }
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Hierarchy level.
    #[arg(short, long)]
    k: Option<usize>,
    /// Inclusive level range, e.g. --k-range 1,6.
    #[arg(long, value_delimiter = ',')]
    k_range: Option<Vec<usize>>,
    /// Tolerance override (meaning is per command; defaults documented in
    /// the README).
    #[arg(long)]
    tol: Option<f64>,
    /// RNG seed recorded in the report.
    #[arg(long)]
    seed: Option<u64>,
    /// Ambient-size cap override (matrix entries).
    #[arg(long)]
    max_entries: Option<usize>,
    /// JSON file with the input payload ({"state": …} | {"subspace": …} |
    /// {"observable": …} | {"hermitian_form": …}).
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Input payload inline (same schema as --input).
    #[arg(long)]
    input_json: Option<String>,
}

impl CommonArgs {
    fn payload(&self) -> Result<Option<InputPayload>, String> {
        let text = match (&self.input, &self.input_json) {
            (Some(_), Some(_)) => return Err("pass --input or --input-json, not both".into()),
            (Some(path), None) => {
                std::fs::read_to_string(path).map_err(|e| format!("cannot read input: {e}"))?
            }
            (None, Some(js)) => js.clone(),
            (None, None) => return Ok(None),
        };
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| format!("bad input payload: {e}"))
    }

    fn k_range(&self) -> Result<Option<(usize, usize)>, String> {
        match &self.k_range {
            None => Ok(None),
            Some(v) if v.len() == 2 => Ok(Some((v[0], v[1]))),
            Some(_) => Err("--k-range takes exactly two values".into()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dimension (and optionally a basis) of the level-k complement space.
    Ikperp {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// closed (default) or sampling.
        #[arg(long)]
        route: Option<String>,
        /// Sample-count override for the sampling route.
        #[arg(long)]
        samples: Option<usize>,
        /// Include the basis matrix in the report.
        #[arg(long)]
        emit_basis: bool,
    },
    /// Certify a subspace X-tangled (rank test + eigen cross-check).
    CertifySubspace {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Geometric-measure lower bounds over a level range.
    Gm {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Construct a witness from a subspace, or verify a given observable.
    Witness {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Optimize a Hermitian observable or Hermitian form over the variety.
    Optimize {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// max (default) or min; observables only.
        #[arg(long)]
        direction: Option<String>,
        /// Degree of the Hermitian form payload.
        #[arg(long)]
        form_degree: Option<usize>,
        /// Attempt the constructive PSD split at the last level.
        #[arg(long)]
        hsos: bool,
    },
    /// Level-k extension feasibility of a state, with certificates.
    Tension {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Iteration budget for the alternating projections.
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Closed-form de Finetti distance bounds over a level range.
    Definetti {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Worst-case and generic degree report.
    Degree {
        #[command(flatten)]
        variety: VarietyArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Subspace dimension for the generic-degree search.
        #[arg(long)]
        s: Option<usize>,
        /// Search cap for the generic degree (default 12).
        #[arg(long)]
        generic_k_cap: Option<usize>,
    },
}

fn build_request(cmd: &Command) -> Result<JobRequest, String> {
    let (name, variety, common) = match cmd {
        Command::Ikperp {
            variety, common, ..
        } => ("ikperp", variety, common),
        Command::CertifySubspace { variety, common } => ("certify-subspace", variety, common),
        Command::Gm { variety, common } => ("gm", variety, common),
        Command::Witness { variety, common } => ("witness", variety, common),
        Command::Optimize {
            variety, common, ..
        } => ("optimize", variety, common),
        Command::Tension {
            variety, common, ..
        } => ("tension", variety, common),
        Command::Definetti { variety, common } => ("definetti", variety, common),
        Command::Degree {
            variety, common, ..
        } => ("degree", variety, common),
    };
    let mut req = JobRequest {
        command: name.to_string(),
        variety: Some(variety.build()?),
        input: common.payload()?,
        k: common.k,
        k_range: common.k_range()?,
        s: None,
        direction: None,
        form_degree: None,
        tolerance: common.tol,
        seed: common.seed,
        max_entries: common.max_entries,
        max_iters: None,
        samples: None,
        emit_basis: None,
        route: None,
        generic_k_cap: None,
        hsos: None,
    };
    match cmd {
        Command::Ikperp {
            route,
            samples,
            emit_basis,
            ..
        } => {
            req.route = route.clone();
            req.samples = *samples;
            req.emit_basis = Some(*emit_basis);
        }
        Command::Optimize {
            direction,
            form_degree,
            hsos,
            ..
        } => {
            req.direction = direction.clone();
            req.form_degree = *form_degree;
            req.hsos = Some(*hsos);
        }
        Command::Tension { max_iters, .. } => {
            req.max_iters = *max_iters;
        }
        Command::Degree {
            s, generic_k_cap, ..
        } => {
            req.s = *s;
            req.generic_k_cap = *generic_k_cap;
        }
        _ => {}
    }
    Ok(req)
}

fn run_and_report(req: JobRequest) -> Result<JobReport, xarability::Error> {
    let started = Instant::now();
    let (result, effective) = run_request(&req)?;
    let seed = req.seed.unwrap_or(0);
    Ok(JobReport {
        request: req,
        result,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        effective,
    })
}

fn fail(e: &xarability::Error) -> ExitCode {
    eprintln!(
        "{}",
        serde_json::to_string(&error_json(e)).expect("error json")
    );
    ExitCode::from(exit_code(e) as u8)
}

fn fail_input(msg: &str) -> ExitCode {
    let e = xarability::Error::InvalidInput(msg.to_string());
    fail(&e)
}

fn main() -> ExitCode {
    // Flag misuse is an input error (exit 1, JSON on stderr); --help and
    // --version keep clap's normal behavior.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            return fail_input(&e.to_string());
        }
        Err(e) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };

    if let Some(path) = &cli.request {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail_input(&format!("cannot read request file: {e}")),
        };
        let parsed: serde_json::Value = match serde_json::from_str(&text) {
            Ok(v) => v,
            Err(e) => return fail_input(&format!("request file is not JSON: {e}")),
        };
        let batch: Vec<JobRequest> = if parsed.is_array() {
            match serde_json::from_value(parsed) {
                Ok(v) => v,
                Err(e) => return fail_input(&format!("bad request array: {e}")),
            }
        } else {
            match serde_json::from_value(parsed) {
                Ok(v) => vec![v],
                Err(e) => return fail_input(&format!("bad request: {e}")),
            }
        };
        let mut reports = Vec::new();
        for req in batch {
            match run_and_report(req) {
                Ok(rep) => reports.push(rep),
                Err(e) => return fail(&e),
            }
        }
        let out = if reports.len() == 1 {
            serde_json::to_string_pretty(&reports[0])
        } else {
            serde_json::to_string_pretty(&reports)
        };
        println!("{}", out.expect("report json"));
        return ExitCode::SUCCESS;
    }

    let Some(cmd) = &cli.command else {
        return fail_input("pass a subcommand or --request FILE (see --help)");
    };
    let req = match build_request(cmd) {
        Ok(r) => r,
        Err(msg) => return fail_input(&msg),
    };
    match run_and_report(req) {
        Ok(rep) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&rep).expect("report json")
            );
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}
