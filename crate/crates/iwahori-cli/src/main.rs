//! Command-line front end: datum construction, admissible sets, σ-conjugacy
//! invariants, stratification posets, curve chains, loop-group verification,
//! and the invariant selftest.
//!
//! Output is JSON on stdout (DOT with `--dot` where supported), byte-identical
//! across runs for identical inputs. Exit codes: 0 success, 1 domain error,
//! 2 usage error; errors are printed as `{"error": ...}` records.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use iwahori::admissible::{admissible_set, admissible_set_j, curve_chain, kr_poset_very_special};
use iwahori::affine_weyl::{
    reduced_word, simple_reflection_label, ExtendedAffineElement, ParahoricType,
};
use iwahori::datum::{
    datum_from_file, datum_to_file, element_from_repr, element_to_repr, restriction_of_scalars,
    standard_datum, unitary_twist, DatumFile, ElementRepr,
};
use iwahori::frobenius::FrobeniusTwist;
use iwahori::loop_group::{case_context, check_case, FieldElem, LoopMatrix};
use iwahori::root_system::{AffineWeylDatum, RationalVector};
use iwahori::sigma_conjugacy::{
    b_of_g_mu, is_sigma_straight, mu_ordinary, newton_point, straight_translations_in_orbit,
};

#[derive(Parser)]
#[command(name = "iwahori", version, about = "Extended affine Weyl group combinatorics")]
struct Cli {
    /// Seed for the randomized selftest checks.
    #[arg(long, global = true, default_value_t = 20260809)]
    seed: u64,
    /// Worker threads for internal sweeps (1 = fully sequential).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a standard datum (with twist) as JSON.
    Datum {
        /// Kind: gl(n), sl(n), pgl(n), gsp(4), e.g. "gl3".
        #[arg(long)]
        kind: String,
        /// Apply the quasi-split unitary twist (gl kinds only).
        #[arg(long)]
        unitary: bool,
        /// Restriction of scalars along an unramified extension of this degree.
        #[arg(long)]
        res: Option<usize>,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The μ-admissible set, optionally projected to W_J\W/W_J.
    Adm {
        #[arg(long)]
        datum: PathBuf,
        /// Dominant μ as comma-separated integers.
        #[arg(long)]
        mu: String,
        /// Parahoric type: comma-separated 𝕊 labels ("s1,s2"), or "very-special".
        #[arg(long)]
        parahoric: Option<String>,
    },
    /// σ-straight translations in the W₀-orbit of μ.
    Straight {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        mu: String,
        /// Instead list every σ-straight element up to this length in the
        /// Ω-component of t_μ (exploratory; no completeness claim as a set
        /// of classes beyond the admissible bound).
        #[arg(long)]
        length_cap: Option<i64>,
    },
    /// Newton point and straightness of one element.
    Newton {
        #[arg(long)]
        datum: PathBuf,
        /// Element as JSON {"translation": [...], "finite_part": ...}.
        #[arg(long, conflicts_with = "translation")]
        element: Option<String>,
        /// Shorthand for the translation element t_λ.
        #[arg(long)]
        translation: Option<String>,
    },
    /// B(G,{μ}) as (ν̄, κ) pairs.
    Bg {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        mu: String,
    },
    /// The μ-ordinary class, when it exists.
    MuOrdinary {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        mu: String,
    },
    /// The very special Kottwitz–Rapoport stratification poset.
    KrPoset {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        mu: String,
        /// Emit the Hasse diagram as Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// The ascent chain from a stratum to μ.
    Chain {
        #[arg(long)]
        datum: PathBuf,
        #[arg(long)]
        mu: String,
        /// Starting stratum λ as comma-separated integers.
        #[arg(long)]
        from: String,
    },
    /// Verify one loop-group membership identity over F_q.
    VerifyLoop {
        #[arg(long)]
        case: u8,
        #[arg(long)]
        q: u32,
        /// Use the unramified quadratic extension (cases 1-2 only).
        #[arg(long)]
        unramified: bool,
        /// Lift the default cap q ≤ 9 (cost grows linearly in q).
        #[arg(long)]
        allow_large_q: bool,
    },
    /// Run the full invariant suite.
    Selftest,
}


/// Print one line to stdout, exiting quietly when the consumer closed the
/// pipe (e.g. `iwahori ... | head`).
fn print_line(s: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out
        .write_all(s.as_bytes())
        .and_then(|_| out.write_all(b"\n"))
        .and_then(|_| out.flush())
        .is_err()
    {
        std::process::exit(0);
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print_line(e.to_string().trim_end());
                return ExitCode::SUCCESS;
            }
            print_line(&json!({ "error": e.to_string() }).to_string());
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(msg) => {
            print_line(&json!({ "error": msg }).to_string());
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.cmd {
        Cmd::Datum { kind, unitary, res, out } => cmd_datum(kind, *unitary, *res, out.as_deref()),
        Cmd::Adm { datum, mu, parahoric } => cmd_adm(datum, mu, parahoric.as_deref()),
        Cmd::Straight { datum, mu, length_cap } => cmd_straight(datum, mu, *length_cap),
        Cmd::Newton { datum, element, translation } => {
            cmd_newton(datum, element.as_deref(), translation.as_deref())
        }
        Cmd::Bg { datum, mu } => cmd_bg(datum, mu),
        Cmd::MuOrdinary { datum, mu } => cmd_mu_ordinary(datum, mu),
        Cmd::KrPoset { datum, mu, dot } => cmd_kr_poset(datum, mu, *dot),
        Cmd::Chain { datum, mu, from } => cmd_chain(datum, mu, from),
        Cmd::VerifyLoop { case, q, unramified, allow_large_q } => {
            if *q > 9 && !allow_large_q {
                return Err(format!("q = {q} exceeds the default cap 9; pass --allow-large-q"));
            }
            cmd_verify_loop(*case, *q, *unramified, cli.jobs)
        }
        Cmd::Selftest => cmd_selftest(cli.seed, cli.jobs),
    }
}

fn parse_mu(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad integer '{t}' in vector")))
        .collect()
}

fn load(path: &std::path::Path) -> Result<(Arc<AffineWeylDatum>, FrobeniusTwist), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: DatumFile =
        serde_json::from_str(&text).map_err(|e| format!("bad datum JSON: {e}"))?;
    datum_from_file(&file).map_err(|e| e.to_string())
}

fn rat_vec_json(v: &RationalVector) -> Value {
    Value::Array(v.coords.iter().map(|r| Value::String(r.to_string())).collect())
}

fn word_string(w: &ExtendedAffineElement) -> String {
    let (word, omega) = reduced_word(w);
    let mut parts: Vec<String> =
        word.iter().map(|&i| simple_reflection_label(w.datum(), i)).collect();
    if omega != ExtendedAffineElement::identity(w.datum().clone()) {
        parts.push(format!(
            "tau[{}]",
            omega.translation().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ));
    }
    if parts.is_empty() {
        "e".into()
    } else {
        parts.join("*")
    }
}

fn element_json(w: &ExtendedAffineElement) -> Value {
    let repr = element_to_repr(w);
    json!({
        "translation": repr.translation,
        "finite_part": serde_json::to_value(&repr.finite_part).unwrap(),
        "length": w.length(),
        "word": word_string(w),
    })
}

fn emit(v: &Value) {
    print_line(&serde_json::to_string_pretty(v).expect("serializable output"));
}

fn cmd_datum(
    kind: &str,
    unitary: bool,
    res: Option<usize>,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, String> {
    let datum = standard_datum(kind).map_err(|e| e.to_string())?;
    let twist = if unitary {
        unitary_twist(&datum).map_err(|e| e.to_string())?
    } else {
        FrobeniusTwist::split(datum.clone())
    };
    let (datum, twist) = match res {
        None | Some(1) => (datum, twist),
        Some(f) => restriction_of_scalars(&datum, &twist, f, None).map_err(|e| e.to_string())?,
    };
    let file = datum_to_file(&datum, Some(&twist));
    let text = serde_json::to_string_pretty(&file).expect("serializable datum");
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print_line(&text),
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_parahoric(datum: &AffineWeylDatum, input: &str) -> Result<ParahoricType, String> {
    if input == "very-special" {
        return Ok(ParahoricType::very_special(datum));
    }
    let nfin = datum.simple_indices().len();
    let ncomp = datum.components().len();
    let mut indices = Vec::new();
    for tok in input.split(',') {
        let tok = tok.trim();
        let idx = (0..nfin + ncomp)
            .find(|&i| simple_reflection_label(datum, i) == tok)
            .or_else(|| tok.parse::<usize>().ok().filter(|&i| i < nfin + ncomp))
            .ok_or_else(|| format!("unknown simple reflection '{tok}'"))?;
        indices.push(idx);
    }
    Ok(ParahoricType::new(indices))
}

fn cmd_adm(
    path: &std::path::Path,
    mu: &str,
    parahoric: Option<&str>,
) -> Result<ExitCode, String> {
    let (datum, twist) = load(path)?;
    let mu = parse_mu(mu)?;
    let elements = match parahoric {
        None => admissible_set(&twist, &mu).map_err(|e| e.to_string())?.elements,
        Some(input) => {
            let j = parse_parahoric(&datum, input)?;
            admissible_set_j(&twist, &mu, &j).map_err(|e| e.to_string())?
        }
    };
    emit(&json!({
        "datum": datum.name(),
        "mu": mu,
        "count": elements.len(),
        "elements": elements.iter().map(element_json).collect::<Vec<_>>(),
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_straight(
    path: &std::path::Path,
    mu: &str,
    length_cap: Option<i64>,
) -> Result<ExitCode, String> {
    let (datum, twist) = load(path)?;
    let mu = parse_mu(mu)?;
    if let Some(cap) = length_cap {
        let component = iwahori::affine_weyl::omega_component(
            &ExtendedAffineElement::translation_element(datum.clone(), &mu),
        );
        let elems = iwahori::sigma_conjugacy::straight_elements_up_to_length(
            &twist,
            cap,
            &[component],
        );
        emit(&json!({
            "datum": datum.name(),
            "mu": mu,
            "length_cap": cap,
            "straight_elements": elems
                .iter()
                .map(|w| json!({
                    "element": element_json(w),
                    "newton": rat_vec_json(&newton_point(&twist, w).nu_bar),
                    "kappa": twist.kottwitz_galois(w).coords,
                }))
                .collect::<Vec<_>>(),
        }));
        return Ok(ExitCode::SUCCESS);
    }
    let list = straight_translations_in_orbit(&twist, &mu).map_err(|e| e.to_string())?;
    emit(&json!({
        "datum": datum.name(),
        "mu": mu,
        "straight_translations": list
            .iter()
            .map(|s| json!({
                "mu_prime": s.mu_prime,
                "newton": rat_vec_json(&s.newton.nu_bar),
                "kappa": s.kappa.coords,
            }))
            .collect::<Vec<_>>(),
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_newton(
    path: &std::path::Path,
    element: Option<&str>,
    translation: Option<&str>,
) -> Result<ExitCode, String> {
    let (datum, twist) = load(path)?;
    let w = match (element, translation) {
        (Some(text), _) => {
            let repr: ElementRepr =
                serde_json::from_str(text).map_err(|e| format!("bad element JSON: {e}"))?;
            element_from_repr(&datum, &repr).map_err(|e| e.to_string())?
        }
        (None, Some(t)) => {
            ExtendedAffineElement::translation_element(datum.clone(), &parse_mu(t)?)
        }
        (None, None) => return Err("pass --element or --translation".into()),
    };
    let np = newton_point(&twist, &w);
    emit(&json!({
        "datum": datum.name(),
        "element": element_json(&w),
        "nu": rat_vec_json(&np.nu),
        "nu_bar": rat_vec_json(&np.nu_bar),
        "sigma_straight": is_sigma_straight(&twist, &w),
        "kappa": twist.kottwitz_galois(&w).coords,
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_bg(path: &std::path::Path, mu: &str) -> Result<ExitCode, String> {
    let (datum, twist) = load(path)?;
    let mu = parse_mu(mu)?;
    let points = b_of_g_mu(&twist, &mu).map_err(|e| e.to_string())?;
    emit(&json!({
        "datum": datum.name(),
        "mu": mu,
        "classes": points
            .iter()
            .map(|p| json!({ "newton": rat_vec_json(&p.newton), "kappa": p.kappa.coords }))
            .collect::<Vec<_>>(),
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_mu_ordinary(path: &std::path::Path, mu: &str) -> Result<ExitCode, String> {
    let (datum, twist) = load(path)?;
    let mu = parse_mu(mu)?;
    let ord = mu_ordinary(&twist, &mu).map_err(|e| e.to_string())?;
    emit(&json!({
        "datum": datum.name(),
        "mu": mu,
        "mu_diamond": rat_vec_json(&twist.mu_diamond(&mu).map_err(|e| e.to_string())?),
        "present": ord.is_some(),
        "point": ord.map(|p| json!({
            "newton": rat_vec_json(&p.newton),
            "kappa": p.kappa.coords,
        })),
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_kr_poset(path: &std::path::Path, mu: &str, dot: bool) -> Result<ExitCode, String> {
    let (datum, twist) = load(path)?;
    let mu = parse_mu(mu)?;
    let poset = kr_poset_very_special(&twist, &mu).map_err(|e| e.to_string())?;
    if dot {
        let label = |l: &[i64]| l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut dot = String::from("digraph kr_strata {\n");
        for node in &poset.nodes {
            dot.push_str(&format!(
                "  \"{}\" [orbit={}{}];\n",
                label(&node.lambda),
                node.orbit_size,
                if node.is_top { ", top=true" } else { "" }
            ));
        }
        for &(lo, hi) in &poset.edges {
            dot.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                label(&poset.nodes[lo].lambda),
                label(&poset.nodes[hi].lambda)
            ));
        }
        dot.push('}');
        print_line(&dot);
    } else {
        emit(&json!({
            "datum": datum.name(),
            "mu": mu,
            "nodes": poset.nodes.iter().map(|n| json!({
                "lambda": n.lambda,
                "orbit_size": n.orbit_size,
                "top": n.is_top,
            })).collect::<Vec<_>>(),
            "edges": poset.edges.iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        }));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_chain(path: &std::path::Path, mu: &str, from: &str) -> Result<ExitCode, String> {
    let (datum, twist) = load(path)?;
    let mu = parse_mu(mu)?;
    let from = parse_mu(from)?;
    let chain = curve_chain(&twist, &from, &mu).map_err(|e| e.to_string())?;
    emit(&json!({
        "datum": datum.name(),
        "mu": mu,
        "from": from,
        "steps": chain.len() - 1,
        "chain": chain,
    }));
    Ok(ExitCode::SUCCESS)
}

fn field_elem_json(x: &FieldElem) -> Value {
    json!([x.a, x.b])
}

fn matrix_json(m: &LoopMatrix) -> Value {
    let n = m.size();
    let rows: Vec<Value> = (0..n)
        .map(|i| {
            let cols: Vec<Value> = (0..n)
                .map(|j| {
                    let obj: serde_json::Map<String, Value> = m
                        .entry(i, j)
                        .terms()
                        .map(|(e, c)| (e.to_string(), field_elem_json(&c)))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            Value::Array(cols)
        })
        .collect();
    Value::Array(rows)
}

fn cmd_verify_loop(case: u8, q: u32, unramified: bool, jobs: usize) -> Result<ExitCode, String> {
    let ctx = case_context(case, q, unramified).map_err(|e| e.to_string())?;
    let units = ctx.base.units();
    let jobs = jobs.max(1).min(units.len().max(1));
    let mut checks: Vec<(FieldElem, bool, LoopMatrix)> = Vec::with_capacity(units.len());
    if jobs == 1 {
        for x in &units {
            let res = check_case(case, q, unramified, *x).map_err(|e| e.to_string())?;
            checks.push((*x, res.ok, res.witness));
        }
    } else {
        let results: Vec<Result<(FieldElem, bool, LoopMatrix), String>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = units
                    .chunks(units.len().div_ceil(jobs))
                    .map(|chunk| {
                        scope.spawn(move || {
                            chunk
                                .iter()
                                .map(|x| {
                                    check_case(case, q, unramified, *x)
                                        .map(|r| (*x, r.ok, r.witness))
                                        .map_err(|e| e.to_string())
                                })
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("worker")).collect()
            });
        for r in results {
            checks.push(r?);
        }
    }
    let all_pass = checks.iter().all(|(_, ok, _)| *ok);
    let first_failure = checks.iter().find(|(_, ok, _)| !ok);
    emit(&json!({
        "case": case,
        "q": q,
        "unramified": unramified,
        "uniformizer": ctx.symbol.to_string(),
        "checked": checks.len(),
        "all_pass": all_pass,
        "results": checks
            .iter()
            .map(|(x, ok, _)| json!({ "x": field_elem_json(x), "ok": ok }))
            .collect::<Vec<_>>(),
        "first_failure": first_failure.map(|(x, _, w)| json!({
            "x": field_elem_json(x),
            "witness": matrix_json(w),
        })),
    }));
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(seed: u64, jobs: usize) -> Result<ExitCode, String> {
    let report = iwahori::selftest::run(seed, jobs);
    emit(&json!({
        "seed": seed,
        "all_ok": report.all_ok(),
        "checks": report.checks.iter().map(|c| json!({
            "name": c.name,
            "ok": c.ok,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    }));
    if report.all_ok() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
