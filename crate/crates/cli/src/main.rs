use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use spinwig::angular::Spin;
use spinwig::io::fmt_sig;
use spinwig::measures::{catalog, measure_report, resolve, MeasureReport};
use spinwig::num_complex::Complex64;
use spinwig::phasespace::{
    negativity_report, wigner_eval, NegativityOptions, SphereGrid, DEFAULT_REL_TOL, MAX_REFINEMENTS,
};
use spinwig::random::{sample, Measure, DEFAULT_BINS, DEFAULT_SAMPLES, SAMPLE_REL_TOL};
use spinwig::search::{
    linspace, maximize_negativity, maximize_with_tetra_snap, minimize_negativity, polish,
    sweep_pyramid, sweep_two_triangles,
};
use spinwig::stellar::{constellation_to_state, state_to_constellation, Constellation, SpinState};
use spinwig::Error;

const DEFAULT_SEED: u64 = 1;
const DEFAULT_STARTS: usize = 2000;

#[derive(Parser)]
#[command(
    name = "spinwig",
    version,
    about = "Wigner negativity of spin states and Majorana constellations"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// RNG seed for stochastic commands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads, or "auto"
    #[arg(long, global = true, env = "SPINWIG_THREADS", default_value = "auto")]
    threads: String,
    /// Relative tolerance of the negativity integral
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the result here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Constraint {
    None,
    TetraSnap,
    Pyramid,
    TwoTriangles,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    Negativity,
    Entropy,
}

#[derive(Args)]
struct StateArg {
    /// `name:<catalog name>`, `file:<path>`, or either without prefix
    #[arg(long)]
    state: String,
    /// Spin for parametric names such as `coherent` or `dicke(1)`
    #[arg(long)]
    spin: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Dicke amplitudes <-> Majorana constellation
    Convert {
        #[command(flatten)]
        input: StateArg,
        /// Convert back and report the fidelity with the input
        #[arg(long)]
        roundtrip: bool,
    },
    /// Wigner negativity with per-pass estimates
    Negativity {
        #[command(flatten)]
        input: StateArg,
        /// Refinement passes before giving up
        #[arg(long, default_value_t = MAX_REFINEMENTS)]
        max_refinements: usize,
    },
    /// Maximize negativity, optionally within a constrained family
    Search {
        #[arg(long)]
        spin: Option<String>,
        #[arg(long, default_value_t = DEFAULT_STARTS)]
        starts: usize,
        #[arg(long, value_enum, default_value = "none")]
        constraint: Constraint,
        /// Minimize instead of maximize (unconstrained only)
        #[arg(long)]
        minimize: bool,
        /// Grid points per axis for landscape constraints
        #[arg(long)]
        grid: Option<usize>,
        /// Polish this state locally instead of a multi-start search
        #[arg(long)]
        polish_from: Option<String>,
    },
    /// Histogram of a measure over Haar-random states
    Sample {
        #[arg(long)]
        spin: String,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
        #[arg(long, value_enum, default_value = "negativity")]
        measure: MeasureArg,
        /// Also write the statistics JSON here
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Negativity, anticoherence, entanglement and Coulomb energy
    Measures {
        #[arg(long, required_unless_present = "all")]
        state: Option<String>,
        #[arg(long)]
        spin: Option<String>,
        /// Every fixed-spin catalog state
        #[arg(long, conflicts_with = "state")]
        all: bool,
    },
    /// Wigner function on a Gauss-Legendre x uniform grid
    Wigner {
        #[command(flatten)]
        input: StateArg,
        /// Polar nodes; azimuthal nodes are twice this
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
}

enum Input {
    State(SpinState),
    Stars(Constellation),
}

impl Input {
    fn state(&self) -> SpinState {
        match self {
            Input::State(s) => s.clone(),
            Input::Stars(c) => constellation_to_state(c),
        }
    }
}

fn parse_spin(s: &Option<String>) -> Result<Option<Spin>, Error> {
    s.as_deref().map(Spin::parse).transpose()
}

#[derive(Deserialize)]
struct RawFile {
    twice_j: u32,
    amps: Option<Vec<[f64; 2]>>,
    stars: Option<Vec<[f64; 2]>>,
}

fn read_file(path: &Path) -> Result<Input, Error> {
    let text = std::fs::read_to_string(path)?;
    let raw: RawFile = serde_json::from_str(&text)?;
    let spin = Spin::physical(raw.twice_j)?;
    match (raw.amps, raw.stars) {
        (Some(amps), None) => {
            if amps.is_empty() {
                return Err(Error::ZeroState);
            }
            SpinState::new(
                spin,
                amps.iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect(),
            )
            .map(Input::State)
        }
        (None, Some(stars)) => {
            if stars.len() != spin.twice() as usize {
                return Err(Error::Dimension {
                    expected: spin.twice() as usize,
                    got: stars.len(),
                });
            }
            let pairs: Vec<(f64, f64)> = stars.iter().map(|&[t, p]| (t, p)).collect();
            Constellation::from_angles(&pairs).map(Input::Stars)
        }
        _ => Err(Error::Parse(format!(
            "{}: expected exactly one of \"amps\" or \"stars\"",
            path.display()
        ))),
    }
}

/// Names take precedence over files when no prefix is given.
fn load(spec: &str, spin: Option<Spin>) -> Result<Input, Error> {
    if let Some(name) = spec.strip_prefix("name:") {
        return resolve(name, spin).map(Input::State);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        return read_file(Path::new(path));
    }
    match resolve(spec, spin) {
        Ok(s) => Ok(Input::State(s)),
        Err(e @ Error::UnknownState(_)) => {
            if Path::new(spec).exists() {
                read_file(Path::new(spec))
            } else {
                Err(e)
            }
        }
        Err(e) => Err(e),
    }
}

fn load_arg(a: &StateArg) -> Result<Input, Error> {
    load(&a.state, parse_spin(&a.spin)?)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn stars_csv(c: &Constellation) -> String {
    let mut s = String::from("theta,phi\n");
    for st in c.stars() {
        let _ = writeln!(s, "{},{}", fmt_sig(st.theta), fmt_sig(st.phi));
    }
    s
}

fn amps_csv(psi: &SpinState) -> String {
    let mut s = String::from("m,re,im\n");
    for (m, a) in psi.spin().projections().zip(psi.amps()) {
        let _ = writeln!(s, "{},{},{}", m, fmt_sig(a.re), fmt_sig(a.im));
    }
    s
}

fn seed_of(g: &Global) -> u64 {
    let seed = g.seed.unwrap_or(DEFAULT_SEED);
    eprintln!("seed: {seed}");
    seed
}

fn require_spin(spin: Option<Spin>, want: u32, what: &str) -> Result<(), Error> {
    match spin {
        Some(s) if s.twice() != want => Err(Error::Invalid(format!(
            "{what} is defined for 2j = {want}, got 2j = {}",
            s.twice()
        ))),
        _ => Ok(()),
    }
}

fn report_row(name: &str, r: &MeasureReport) -> String {
    let a: Vec<String> = r.anticoherence.iter().map(|x| fmt_sig(*x)).collect();
    format!(
        "{},{},{},{},{},{},{},{}\n",
        name,
        r.spin.twice(),
        fmt_sig(r.negativity),
        fmt_sig(r.geometric_entanglement),
        fmt_sig(r.linear_entropy),
        if r.coulomb_energy.is_finite() {
            fmt_sig(r.coulomb_energy)
        } else {
            String::new()
        },
        r.a1_maximal,
        a.join(";")
    )
}

fn report_table(name: &str, r: &MeasureReport) -> String {
    let mut s = format!("{name} (j = {})\n", r.spin.value());
    let _ = writeln!(s, "  negativity              {}", fmt_sig(r.negativity));
    let _ = writeln!(
        s,
        "  geometric entanglement  {}",
        fmt_sig(r.geometric_entanglement)
    );
    let _ = writeln!(s, "  linear entropy          {}", fmt_sig(r.linear_entropy));
    let e = if r.coulomb_energy.is_finite() {
        fmt_sig(r.coulomb_energy)
    } else {
        "inf".into()
    };
    let _ = writeln!(s, "  coulomb energy          {e}");
    let _ = writeln!(s, "  A_1 maximal             {}", r.a1_maximal);
    for (k, a) in r.anticoherence.iter().enumerate() {
        let _ = writeln!(s, "  A_{:<2}                    {}", k + 1, fmt_sig(*a));
    }
    s
}

fn run(cli: Cli) -> Result<String, Error> {
    let g = &cli.global;
    match &cli.command {
        Command::Convert { input, roundtrip } => {
            let inp = load_arg(input)?;
            let fmt = g.format.unwrap_or(Format::Json);
            let (out_json, out_csv, fidelity) = match &inp {
                Input::State(psi) => {
                    let c = state_to_constellation(psi);
                    let f = roundtrip.then(|| constellation_to_state(&c).fidelity(psi));
                    (serde_json::to_value(&c)?, stars_csv(&c), f)
                }
                Input::Stars(c) => {
                    let psi = constellation_to_state(c);
                    let f = roundtrip.then(|| state_to_constellation(&psi).matched_distance(c));
                    (serde_json::to_value(&psi)?, amps_csv(&psi), f)
                }
            };
            // roundtrip reports fidelity for states and matched distance for constellations
            let key = if matches!(inp, Input::State(_)) {
                "roundtrip_fidelity"
            } else {
                "roundtrip_distance"
            };
            Ok(match fmt {
                Format::Csv => {
                    if let Some(f) = fidelity {
                        eprintln!("{key}: {}", fmt_sig(f));
                    }
                    out_csv
                }
                _ => match fidelity {
                    Some(f) => to_json(&json!({ "result": out_json, key: f }))?,
                    None => to_json(&out_json)?,
                },
            })
        }
        Command::Negativity {
            input,
            max_refinements,
        } => {
            let psi = load_arg(input)?.state();
            let opts = NegativityOptions {
                rel_tol: g.tol.unwrap_or(DEFAULT_REL_TOL),
                max_refinements: *max_refinements,
            };
            let r = negativity_report(&psi, opts)?;
            Ok(match g.format.unwrap_or(Format::Text) {
                Format::Json => to_json(&r)?,
                Format::Csv => {
                    let mut s = String::from("pass,estimate\n");
                    for (i, e) in r.estimates.iter().enumerate() {
                        let _ = writeln!(s, "{},{}", i + 1, fmt_sig(*e));
                    }
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for (i, e) in r.estimates.iter().enumerate() {
                        let _ = writeln!(s, "pass {}: {}", i + 1, fmt_sig(*e));
                    }
                    let _ = writeln!(
                        s,
                        "negativity = {} (rel_tol {}, {} panels, {} latitudes)",
                        fmt_sig(r.value),
                        fmt_sig(r.rel_tol),
                        r.panels,
                        r.latitudes
                    );
                    s
                }
            })
        }
        Command::Search {
            spin,
            starts,
            constraint,
            minimize,
            grid,
            polish_from,
        } => {
            let spin = parse_spin(spin)?;
            let tol = g.tol.unwrap_or(DEFAULT_REL_TOL);
            let fmt = g.format.unwrap_or(Format::Json);
            if let Some(spec) = polish_from {
                let c = state_to_constellation(&load(spec, spin)?.state());
                let r = polish(&c, tol)?;
                return Ok(match fmt {
                    Format::Csv => stars_csv(&r.constellation),
                    Format::Text => format!(
                        "negativity {} -> {}\n",
                        fmt_sig(r.negativity_before),
                        fmt_sig(r.negativity)
                    ),
                    Format::Json => to_json(&r)?,
                });
            }
            if *starts == 0 {
                return Err(Error::Invalid("--starts must be at least 1".into()));
            }
            match constraint {
                Constraint::Pyramid => {
                    require_spin(spin, 5, "the square pyramid")?;
                    let sw = sweep_pyramid(
                        &linspace(0.0, std::f64::consts::PI, grid.unwrap_or(181)),
                        tol,
                    )?;
                    Ok(match fmt {
                        Format::Csv => sw.to_csv(),
                        Format::Text => {
                            format!(
                                "peak theta_base = {} negativity = {}\n",
                                fmt_sig(sw.peak.0),
                                fmt_sig(sw.peak.1)
                            )
                        }
                        Format::Json => to_json(&sw)?,
                    })
                }
                Constraint::TwoTriangles => {
                    require_spin(spin, 7, "the two-triangles family")?;
                    let axis = linspace(0.0, std::f64::consts::PI, grid.unwrap_or(41));
                    let sw = sweep_two_triangles(&axis, &axis, tol)?;
                    Ok(match fmt {
                        Format::Csv => sw.to_csv(),
                        Format::Text => format!(
                            "peak theta1 = {} theta2 = {} negativity = {} separation = {}\n",
                            fmt_sig(sw.peak_theta1),
                            fmt_sig(sw.peak_theta2),
                            fmt_sig(sw.peak_negativity),
                            fmt_sig(sw.peak_separation)
                        ),
                        Format::Json => to_json(&sw)?,
                    })
                }
                Constraint::None | Constraint::TetraSnap => {
                    let spin = spin.ok_or_else(|| Error::Invalid("--spin is required".into()))?;
                    let seed = seed_of(g);
                    let out = match (constraint, minimize) {
                        (Constraint::TetraSnap, false) => {
                            maximize_with_tetra_snap(spin, *starts, seed, tol)?
                        }
                        (Constraint::TetraSnap, true) => {
                            return Err(Error::Invalid(
                                "--minimize applies to unconstrained search".into(),
                            ))
                        }
                        (_, false) => maximize_negativity(spin, *starts, seed, tol)?,
                        (_, true) => minimize_negativity(spin, *starts, seed, tol)?,
                    };
                    Ok(match fmt {
                        Format::Csv => stars_csv(&out.constellation),
                        Format::Text => format!(
                            "negativity = {} ({} of {} starts in the best cluster, {} clusters)\n",
                            fmt_sig(out.negativity),
                            out.n_converged_to_best,
                            out.n_starts,
                            out.clusters.len()
                        ),
                        Format::Json => to_json(&out)?,
                    })
                }
            }
        }
        Command::Sample {
            spin,
            n,
            bins,
            measure,
            stats,
        } => {
            let spin = Spin::parse(spin)?;
            if *n == 0 || *bins == 0 {
                return Err(Error::Invalid("--n and --bins must be positive".into()));
            }
            let seed = seed_of(g);
            let m = match measure {
                MeasureArg::Negativity => Measure::Negativity,
                MeasureArg::Entropy => Measure::Entropy,
            };
            let st = sample(spin, *n, seed, m, g.tol.unwrap_or(SAMPLE_REL_TOL))?;
            let h = st.histogram(*bins);
            let near = st.fraction_near_max(2.0);
            let blob = json!({ "stats": st, "fraction_within_2pct_of_max": near });
            if let Some(p) = stats {
                std::fs::write(p, to_json(&blob)?)?;
            }
            Ok(match g.format.unwrap_or(Format::Csv) {
                Format::Csv => h.to_csv(),
                Format::Json => to_json(
                    &json!({ "stats": st, "fraction_within_2pct_of_max": near, "histogram": h }),
                )?,
                Format::Text => format!(
                    "n = {} mean = {} std = {} min = {} max = {} within 2% of max: {}\n",
                    st.n_samples,
                    fmt_sig(st.mean),
                    fmt_sig(st.std),
                    fmt_sig(st.min),
                    fmt_sig(st.max),
                    fmt_sig(near)
                ),
            })
        }
        Command::Measures { state, spin, all } => {
            let tol = g.tol.unwrap_or(DEFAULT_REL_TOL);
            let states: Vec<(String, SpinState)> = if *all {
                catalog()
                    .into_iter()
                    .map(|s| (s.name.clone(), s.state()))
                    .collect()
            } else {
                let spec = state.as_deref().expect("clap requires --state");
                vec![(spec.to_string(), load(spec, parse_spin(spin)?)?.state())]
            };
            let reports: Vec<(String, MeasureReport)> = states
                .into_iter()
                .map(|(n, s)| measure_report(&s, tol).map(|r| (n, r)))
                .collect::<Result<_, _>>()?;
            Ok(match g.format.unwrap_or(Format::Text) {
                Format::Json => {
                    let v: Vec<_> = reports
                        .iter()
                        .map(|(n, r)| json!({ "name": n, "report": r }))
                        .collect();
                    to_json(&v)?
                }
                Format::Csv => {
                    let mut s = String::from(
                        "name,twice_j,negativity,geometric_entanglement,linear_entropy,coulomb_energy,a1_maximal,anticoherence\n",
                    );
                    for (n, r) in &reports {
                        s += &report_row(n, r);
                    }
                    s
                }
                Format::Text => reports
                    .iter()
                    .map(|(n, r)| report_table(n, r))
                    .collect::<Vec<_>>()
                    .join("\n"),
            })
        }
        Command::Wigner { input, grid } => {
            let psi = load_arg(input)?.state();
            if *grid == 0 {
                return Err(Error::Invalid("--grid must be positive".into()));
            }
            let field = wigner_eval(&psi, &SphereGrid::square(psi.spin(), *grid))?;
            Ok(match g.format.unwrap_or(Format::Csv) {
                Format::Csv => field.to_csv(),
                Format::Json => to_json(&field)?,
                Format::Text => format!(
                    "min W = {} max W = {}\n",
                    fmt_sig(field.min()),
                    fmt_sig(field.max())
                ),
            })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::UnknownState(_) => 2,
        Error::NonConvergence { .. } => 4,
        _ => 3,
    }
}

fn configure_threads(spec: &str) -> Result<(), Error> {
    if spec.eq_ignore_ascii_case("auto") {
        return Ok(());
    }
    let n: usize = spec.parse().map_err(|_| {
        Error::Parse(format!(
            "--threads expects an integer or auto, got {spec:?}"
        ))
    })?;
    if n == 0 {
        return Err(Error::Invalid("--threads must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Invalid(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.global.output.clone();
    let result = configure_threads(&cli.global.threads)
        .and_then(|()| run(cli))
        .and_then(|text| match &output {
            Some(p) => std::fs::write(p, text).map_err(Error::from),
            None => {
                print!("{text}");
                Ok(())
            }
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
