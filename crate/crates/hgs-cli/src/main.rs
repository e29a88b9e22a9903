use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hgs::canonicalize::{
    congruent, effectivize, isotropy_group, poly_to_calibrated, primitive_core, weighted_to_calibrated,
    MAX_PERMUTATION_L,
};
use hgs::cyclicity::{index_period, special_exponents};
use hgs::field_poly::{
    basic_power_matrix, basic_power_matrix_inverse, format_matrix, m_polynomial, power_matrix, power_matrix_inverse,
    Matrix,
};
use hgs::hyperstate::{build_state, check_covariance, check_stabilizer_pushforward, lme_dense, lme_exact, DenseCap, Stabilizer};
use hgs::io::{calibrated_to_json, format_config, format_state, parse_hypergraph, parse_ring, AnyHypergraph};
use hgs::marked_cz::marked_to_calibrated;
use hgs::qudit_space::{config_at, config_count};
use hgs::{CalibratedHypergraph, Elem, GaloisRing, OrdinalMorphism};

/// Tolerance for the dense cross-checks.
const TOL: f64 = 1e-9;
/// Upper bound on the number of maps [l] → [m], m ≤ l, visited by the covariance suites.
const MAX_MAPS: usize = 20_000;

#[derive(Parser)]
#[command(name = "hgs", version, about = "Calibrated hypergraph states over Galois-ring qudits")]
struct Cli {
    /// Machine-readable output; errors go to stderr as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ring tables.
    Ring {
        #[command(subcommand)]
        command: RingCommand,
    },
    /// Build or verify a hypergraph state.
    State {
        #[command(subcommand)]
        command: StateCommand,
    },
    /// Effective form, primitive core and extracted constant.
    Reduce { file: PathBuf },
    /// Congruence classes of the hypergraph files in a directory.
    Classify {
        dir: PathBuf,
        #[arg(long, default_value_t = MAX_PERMUTATION_L)]
        max_l: usize,
    },
    /// Convert weighted, marked or polynomial data to a calibrated hypergraph.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        from: Source,
        #[arg(long, value_enum)]
        to: To,
        /// Marked value x* (marked input only).
        #[arg(long)]
        xstar: Option<u32>,
    },
    /// A, A⁻¹, C, C⁻¹ and the basic interpolation polynomials of a field.
    Matrices { file: PathBuf },
}

#[derive(Subcommand)]
enum RingCommand {
    Info { file: PathBuf },
}

#[derive(Subcommand)]
enum StateCommand {
    Build {
        file: PathBuf,
        /// Also print complex amplitudes.
        #[arg(long)]
        dense: bool,
    },
    /// Runs the selected suites; all of them when none is selected.
    Verify {
        file: PathBuf,
        #[arg(long)]
        stabilizer: bool,
        #[arg(long)]
        covariance: bool,
        #[arg(long)]
        lme: bool,
        #[arg(long)]
        pushforward: bool,
        /// Compare with the state of another hypergraph file, up to global phase.
        #[arg(long, value_name = "FILE")]
        against: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Weighted,
    Marked,
    Poly,
}

#[derive(Clone, Copy, ValueEnum)]
enum To {
    Calibrated,
}

enum Failure {
    Input(String, String),
    Check(String),
}

impl From<hgs::Error> for Failure {
    fn from(e: hgs::Error) -> Self {
        Failure::Input(e.kind().to_string(), e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input("Io".into(), format!("{}: {e}", path.display())))
}

fn to_calibrated(hg: &AnyHypergraph) -> Result<CalibratedHypergraph, Failure> {
    Ok(match hg {
        AnyHypergraph::Calibrated(h) => h.clone(),
        AnyHypergraph::Weighted(w) => weighted_to_calibrated(w),
        AnyHypergraph::Marked(m, xs) => marked_to_calibrated(m, *xs)?,
        AnyHypergraph::Poly(p) => poly_to_calibrated(p)?,
    })
}

fn load_calibrated(path: &Path) -> Result<CalibratedHypergraph, Failure> {
    to_calibrated(&parse_hypergraph(&read(path)?)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn ring_info(ring: &GaloisRing, as_json: bool) -> String {
    let rows: Vec<Value> = ring
        .elements()
        .map(|x| {
            let (iota, pi) = index_period(ring, x);
            json!({
                "element": ring.format_elem(x),
                "trace": ring.trace(x),
                "class": if ring.is_unit(x) { "unit" } else { "nilpotent" },
                "iota": iota,
                "pi": pi,
            })
        })
        .collect();
    if as_json {
        return pretty(&json!({
            "name": ring.name(),
            "p": ring.p(), "r": ring.r(), "d": ring.d(), "q": ring.order(),
            "modulus": ring.modulus(),
            "elements": rows,
        }));
    }
    let mut out = format!(
        "ring {}  p={} r={} d={} q={}  modulus {:?}\n",
        ring.name(),
        ring.p(),
        ring.r(),
        ring.d(),
        ring.order(),
        ring.modulus()
    );
    out.push_str("element\ttrace\tclass\tiota\tpi\n");
    for row in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\n",
            row["element"].as_str().unwrap(),
            row["trace"],
            row["class"].as_str().unwrap(),
            row["iota"],
            row["pi"]
        ));
    }
    let units = ring.elements().filter(|&x| ring.is_unit(x)).count();
    out.push_str(&format!("units {units}, nilpotents {}\n", ring.order() - units));
    out
}

fn state_build(path: &Path, dense: bool, as_json: bool) -> Outcome {
    let hg = load_calibrated(path)?;
    let psi = build_state(&hg)?;
    if !as_json {
        return Ok(format_state(&psi, dense));
    }
    let ring = psi.ring();
    let mut v = json!({
        "ring": ring.name(),
        "l": psi.l(),
        "basis": psi.basis().name(),
        "norm_exp": psi.norm_exp(),
        "phases": psi.phases(),
    });
    if dense {
        let amps: Vec<[f64; 2]> = psi.to_dense().amplitudes().iter().map(|c| [c.re, c.im]).collect();
        v["amplitudes"] = json!(amps);
    }
    Ok(pretty(&v))
}

fn maps_up_to(l: usize) -> Result<Vec<OrdinalMorphism>, Failure> {
    let total: usize = (1..=l).map(|m| m.saturating_pow(l as u32)).fold(0, usize::saturating_add);
    if total > MAX_MAPS {
        return Err(Failure::Input("TooLarge".into(), format!("{total} maps [{l}] -> [m] exceed {MAX_MAPS}")));
    }
    Ok((1..=l).flat_map(|m| OrdinalMorphism::all_maps(l, m)).collect())
}

struct Suite {
    name: &'static str,
    passed: usize,
    total: usize,
}

fn stabilizer_suite(hg: &CalibratedHypergraph) -> Result<Suite, Failure> {
    let ring = hg.ring();
    let q = ring.order();
    let k = Stabilizer::new(hg)?;
    let psi = k.state();
    let total = config_count(q, hg.l())?;
    let mut passed = 0;
    for i in 0..total {
        if k.apply(&config_at(q, hg.l(), i), &psi)? == psi {
            passed += 1;
        }
    }
    Ok(Suite { name: "stabilizer", passed, total })
}

fn covariance_suite(hg: &CalibratedHypergraph) -> Result<Suite, Failure> {
    let maps = maps_up_to(hg.l())?;
    let mut passed = 0;
    for f in &maps {
        if check_covariance(hg, f)? {
            passed += 1;
        }
    }
    Ok(Suite { name: "covariance", passed, total: maps.len() })
}

fn pushforward_suite(hg: &CalibratedHypergraph, cap: &DenseCap) -> Result<Suite, Failure> {
    let maps = maps_up_to(hg.l())?;
    let mut passed = 0;
    for f in &maps {
        if check_stabilizer_pushforward(hg, f, cap, TOL)? {
            passed += 1;
        }
    }
    Ok(Suite { name: "pushforward", passed, total: maps.len() })
}

fn lme_suite(hg: &CalibratedHypergraph, cap: &DenseCap) -> Result<Suite, Failure> {
    let passed = lme_exact(hg, cap)? as usize + lme_dense(hg, cap, TOL)? as usize;
    Ok(Suite { name: "lme", passed, total: 2 })
}

fn against_suite(hg: &CalibratedHypergraph, other: &Path) -> Result<Suite, Failure> {
    let same = build_state(hg)?.eq_up_to_phase(&build_state(&load_calibrated(other)?)?);
    Ok(Suite { name: "equivalence", passed: same as usize, total: 1 })
}

fn state_verify(path: &Path, sel: [bool; 4], against: Option<&Path>, as_json: bool) -> Outcome {
    let hg = load_calibrated(path)?;
    let cap = DenseCap::from_env();
    let all = !sel.iter().any(|&s| s) && against.is_none();
    let mut suites = Vec::new();
    if all || sel[0] {
        suites.push(stabilizer_suite(&hg)?);
    }
    if all || sel[1] {
        suites.push(covariance_suite(&hg)?);
    }
    if all || sel[2] {
        suites.push(lme_suite(&hg, &cap)?);
    }
    if all || sel[3] {
        suites.push(pushforward_suite(&hg, &cap)?);
    }
    if let Some(other) = against {
        suites.push(against_suite(&hg, other)?);
    }
    let ok = suites.iter().all(|s| s.passed == s.total);
    let out = if as_json {
        let list: Vec<Value> = suites
            .iter()
            .map(|s| json!({"suite": s.name, "passed": s.passed, "total": s.total}))
            .collect();
        pretty(&json!({"ok": ok, "suites": list}))
    } else {
        suites
            .iter()
            .map(|s| format!("{}/{} {} checks passed\n", s.passed, s.total, s.name))
            .collect()
    };
    if ok {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn reduce(path: &Path) -> Outcome {
    let hg = load_calibrated(path)?;
    let (k, a) = effectivize(&hg);
    let (z, core) = primitive_core(&k)?;
    Ok(pretty(&json!({
        "constant": a,
        "effective": calibrated_to_json(&k),
        "chart": z.values(),
        "core": calibrated_to_json(&core),
    })))
}

struct Class {
    rep: CalibratedHypergraph,
    members: Vec<(String, Vec<usize>)>,
    isotropy: Vec<Vec<usize>>,
}

fn classify(dir: &Path, max_l: usize, as_json: bool) -> Outcome {
    if max_l > MAX_PERMUTATION_L {
        return Err(Failure::Input("TooLarge".into(), format!("--max-l {max_l} exceeds {MAX_PERMUTATION_L}")));
    }
    let entries = fs::read_dir(dir).map_err(|e| Failure::Input("Io".into(), format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut classes: Vec<Class> = Vec::new();
    let mut skipped: Vec<(String, String)> = Vec::new();
    for path in files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let hg = match read(&path).and_then(|t| parse_hypergraph(&t).map_err(Failure::from)).and_then(|h| to_calibrated(&h)) {
            Ok(h) => h,
            Err(Failure::Input(_, msg)) | Err(Failure::Check(msg)) => {
                skipped.push((name, msg));
                continue;
            }
        };
        if hg.l() > max_l {
            skipped.push((name, format!("l = {} exceeds --max-l {max_l}", hg.l())));
            continue;
        }
        let (k, _) = effectivize(&hg);
        let mut placed = false;
        for class in classes.iter_mut() {
            if **class.rep.ring() != **k.ring() {
                continue;
            }
            if let Some(f) = congruent(&class.rep, &k)? {
                class.members.push((name.clone(), f.values().to_vec()));
                placed = true;
                break;
            }
        }
        if !placed {
            let isotropy = isotropy_group(&k)?.iter().map(|f| f.values().to_vec()).collect();
            let l = k.l();
            classes.push(Class { rep: k, members: vec![(name, (0..l).collect())], isotropy });
        }
    }
    if as_json {
        let list: Vec<Value> = classes
            .iter()
            .map(|c| {
                json!({
                    "ring": c.rep.ring().name(),
                    "l": c.rep.l(),
                    "members": c.members.iter().map(|(n, w)| json!({"file": n, "witness": w})).collect::<Vec<_>>(),
                    "isotropy": c.isotropy,
                })
            })
            .collect();
        let skip: Vec<Value> = skipped.iter().map(|(n, m)| json!({"file": n, "reason": m})).collect();
        return Ok(pretty(&json!({"classes": list, "skipped": skip})));
    }
    let mut out = String::new();
    for (i, c) in classes.iter().enumerate() {
        out.push_str(&format!("class {} ({} l={}), isotropy order {}\n", i + 1, c.rep.ring().name(), c.rep.l(), c.isotropy.len()));
        for (n, w) in &c.members {
            out.push_str(&format!("  {n} via {w:?}\n"));
        }
        for s in &c.isotropy {
            out.push_str(&format!("  isotropy {s:?}\n"));
        }
    }
    for (n, m) in &skipped {
        out.push_str(&format!("skipped {n}: {m}\n"));
    }
    Ok(out)
}

fn convert(path: &Path, from: Source, xstar: Option<u32>) -> Outcome {
    let hg = parse_hypergraph(&read(path)?)?;
    let cal = match (from, &hg) {
        (Source::Weighted, AnyHypergraph::Weighted(w)) => weighted_to_calibrated(w),
        (Source::Poly, AnyHypergraph::Poly(p)) => poly_to_calibrated(p)?,
        (Source::Marked, AnyHypergraph::Marked(m, file_xs)) => {
            let xs = match xstar {
                Some(v) => m.ring().check(Elem(v)).map_err(|_| {
                    Failure::Input("BadMark".into(), format!("marked value {v} outside the field"))
                })?,
                None => *file_xs,
            };
            marked_to_calibrated(m, xs)?
        }
        _ => return Err(Failure::Input("Parse".into(), format!("input is a {} hypergraph", hg.kind()))),
    };
    Ok(hgs::io::to_json_string(&calibrated_to_json(&cal)) + "\n")
}

fn matrices(path: &Path, as_json: bool) -> Outcome {
    let ring = parse_ring(&read(path)?)?;
    let tables: [(&str, Matrix); 4] = [
        ("A", power_matrix(&ring)?),
        ("A^-1", power_matrix_inverse(&ring)?),
        ("C", basic_power_matrix(&ring)?),
        ("C^-1", basic_power_matrix_inverse(&ring)?),
    ];
    let s = special_exponents(&ring).s;
    let mut polys = Vec::new();
    for (y, u) in ring.elements().zip(&s) {
        polys.push((ring.format_elem(y), m_polynomial(&ring, u)?.format(&ring)));
    }
    if as_json {
        let mut v = json!({"ring": ring.name()});
        for (name, m) in &tables {
            v[*name] = json!(m.iter().map(|row| row.iter().map(|&e| ring.format_elem(e)).collect::<Vec<_>>()).collect::<Vec<_>>());
        }
        v["m_s"] = json!(polys.iter().map(|(y, p)| json!({"y": y, "coeffs": p})).collect::<Vec<_>>());
        return Ok(pretty(&v));
    }
    let mut out = format!("ring {}, rows and columns in canonical order {}\n", ring.name(), format_config(&ring, &ring.elements().collect::<Vec<_>>()));
    for (name, m) in &tables {
        out.push_str(&format!("{name}:\n"));
        for line in format_matrix(&ring, m) {
            out.push_str(&format!("  {line}\n"));
        }
    }
    out.push_str("m_s(y), coefficients from degree 0:\n");
    for (y, p) in polys {
        out.push_str(&format!("  y={y}: {p}\n"));
    }
    Ok(out)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Ring { command: RingCommand::Info { file } } => {
            let ring = parse_ring(&read(file)?)?;
            Ok(ring_info(&ring, cli.json))
        },
        Command::State { command: StateCommand::Build { file, dense } } => state_build(file, *dense, cli.json),
        Command::State { command: StateCommand::Verify { file, stabilizer, covariance, lme, pushforward, against } } => {
            state_verify(file, [*stabilizer, *covariance, *lme, *pushforward], against.as_deref(), cli.json)
        }
        Command::Reduce { file } => reduce(file),
        Command::Classify { dir, max_l } => classify(dir, *max_l, cli.json),
        Command::Convert { file, from, to: To::Calibrated, xstar } => convert(file, *from, *xstar),
        Command::Matrices { file } => matrices(file, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            print!("{out}");
            if cli.json {
                eprintln!("{}", json!({"error": "CheckFailed", "message": "verification failed"}));
            } else {
                eprintln!("error: verification failed");
            }
            ExitCode::from(2)
        }
        Err(Failure::Input(kind, msg)) => {
            if cli.json {
                eprintln!("{}", json!({"error": kind, "message": msg}));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(1)
        }
    }
}
