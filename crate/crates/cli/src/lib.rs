//! Command implementations behind the `graphon-psi` binary.
//!
//! Every command renders its whole output to a `String` first, so identical
//! arguments give byte-identical files regardless of thread scheduling.
//! CSV outputs may end with `#`-prefixed lines carrying verdicts and notes.

pub mod args;
pub mod sweep;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use graphon_psi::charseries::{
    format_signs, logconcavity_report, psi_from_graph, psi_from_kernel, quasirandom_test, sign_report,
    smallest_root, trust_radius, PsiResult, RootEntry, QUOTED_SIGNS_HALF,
};
use graphon_psi::graphs::{gen_complete, gen_er, gen_from_kernel, Graph};
use graphon_psi::partitions::hs_family;
use graphon_psi::series::{format_rational, parse_rational};
use graphon_psi::spectra::{energy, sym_eig, Spectrum, DEFAULT_TOL};
use graphon_psi::{Error, KernelSpec, Result, Route, Scalar};
use serde_json::{json, Value};

use crate::args::{
    Cli, Command, ConvergeArgs, Format, GraphArgs, GraphRoute, KernelArgs, Model, PartitionsArgs, QuasirandomArgs,
    SignsArgs,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERICAL
    }
}

/// Runs the command and writes its output to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<()> {
    let text = render(&cli.command)?;
    match &cli.command.output().out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

pub fn render(command: &Command) -> Result<String> {
    match command {
        Command::Graph(a) => cmd_graph(a),
        Command::Kernel(a) => cmd_kernel(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Quasirandom(a) => cmd_quasirandom(a),
        Command::Signs(a) => cmd_signs(a),
        Command::Partitions(a) => cmd_partitions(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

fn check_degree(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::invalid(format!("degree K must be at least 2, got {k}")));
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn series_csv(psi: &PsiResult) -> String {
    psi.series.to_csv()
}

/// Real roots of `ψ` within `radius` (the trust radius by default), each
/// flagged against the trust radius.
fn roots(psi: &PsiResult, spectrum: &Spectrum, radius: Option<f64>) -> Result<Vec<RootEntry>> {
    let trust = trust_radius(psi.meta.degree, spectrum.max_abs());
    let radius = match radius {
        Some(r) => r,
        None if trust.is_finite() => trust,
        None => return Ok(Vec::new()),
    };
    Ok(smallest_root(&psi.series, radius)?.entries(radius, trust))
}

pub fn cmd_graph(a: &GraphArgs) -> Result<String> {
    check_degree(a.degree)?;
    let g = Graph::parse(&read(&a.input)?)?;
    let route = match a.route {
        GraphRoute::Eigen => Route::Eigen,
        GraphRoute::Newton => Route::Newton,
        GraphRoute::HararySachs => Route::HararySachs,
    };
    let psi = psi_from_graph(&g, a.degree, route)?;
    if a.output.format == Format::Csv {
        return Ok(series_csv(&psi));
    }
    let spectrum = match &psi.meta.spectrum {
        Some(s) => s.clone(),
        None if g.n() == 0 => Spectrum::new(Vec::new(), "empty"),
        None => sym_eig(&g.normalized_adjacency(), DEFAULT_TOL)?,
    };
    let mut out = psi.to_json(&roots(&psi, &spectrum, a.radius)?);
    out["n"] = json!(g.n());
    out["edges"] = json!(g.edge_count());
    out["spectrum_top"] = json!(spectrum.top(a.top));
    out["energy"] = json!(g.n() as f64 * energy(&spectrum));
    Ok(pretty(&out))
}

pub fn cmd_kernel(a: &KernelArgs) -> Result<String> {
    check_degree(a.degree)?;
    if a.blocks == 0 {
        return Err(Error::invalid("--blocks must be at least 1"));
    }
    let spec = KernelSpec::from_json(&read(&a.input)?)?;
    let step = spec.to_step(a.blocks)?;
    let psi = psi_from_kernel(&step, a.degree)?;
    if a.output.format == Format::Csv {
        return Ok(series_csv(&psi));
    }
    let spectrum = psi.meta.spectrum.clone().expect("kernel route keeps its spectrum");
    let mut out = psi.to_json(&roots(&psi, &spectrum, a.radius)?);
    out["kernel"] = spec.to_json();
    out["blocks"] = json!(step.blocks());
    out["spectrum_top"] = json!(spectrum.top(a.top));
    Ok(pretty(&out))
}

pub fn cmd_converge(a: &ConvergeArgs) -> Result<String> {
    check_degree(a.degree)?;
    let spec = KernelSpec::from_json(&read(&a.input)?)?;
    let config = sweep::SweepConfig {
        sizes: a.sizes.clone(),
        seeds: a.seeds.clone(),
        samples: a.samples.unwrap_or(a.seeds.len()),
        degree: a.degree,
        blocks: a.blocks,
        mode: a.sample_mode.into(),
    };
    let report = sweep::converge(&spec, &config)?;
    Ok(match a.output.format {
        Format::Csv => report.to_csv(),
        Format::Json => pretty(&report.to_json()),
    })
}

fn single_seed(seeds: &[u64]) -> Result<u64> {
    match seeds {
        [] => Err(Error::invalid("randomized command requires --seed")),
        [s] => Ok(*s),
        _ => Err(Error::invalid("this command takes a single --seed")),
    }
}

fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::invalid("empty size sweep (--n)"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("sizes (--n) must be strictly increasing"));
    }
    if sizes[0] == 0 {
        return Err(Error::invalid("sizes (--n) must be positive"));
    }
    Ok(())
}

fn quasirandom_graphs(a: &QuasirandomArgs, p: f64) -> Result<Vec<Graph>> {
    match a.model {
        None => {
            if a.input.is_empty() {
                return Err(Error::invalid("quasirandom needs --input graph files or --model"));
            }
            a.input.iter().map(|path| Graph::parse(&read(path)?)).collect()
        }
        Some(model) => {
            if !a.input.is_empty() {
                return Err(Error::invalid("--input and --model are mutually exclusive"));
            }
            check_sizes(&a.sizes)?;
            match model {
                Model::Complete => Ok(a.sizes.iter().map(|&n| gen_complete(n)).collect()),
                Model::Er => {
                    let seed = single_seed(&a.seeds)?;
                    a.sizes.iter().map(|&n| gen_er(n, p, seed)).collect()
                }
                Model::Kernel => {
                    let path = a.kernel.as_ref().ok_or_else(|| Error::invalid("--model kernel needs --kernel"))?;
                    let spec = KernelSpec::from_json(&read(path)?)?;
                    let seed = single_seed(&a.seeds)?;
                    a.sizes.iter().map(|&n| gen_from_kernel(&spec, n, seed, a.sample_mode.into())).collect()
                }
            }
        }
    }
}

pub fn cmd_quasirandom(a: &QuasirandomArgs) -> Result<String> {
    check_degree(a.degree)?;
    let p = parse_rational(&a.p)?.to_f64();
    let graphs = quasirandom_graphs(a, p)?;
    if graphs.windows(2).any(|w| w[0].n() >= w[1].n()) {
        return Err(Error::invalid("graphs must have strictly increasing vertex counts"));
    }
    let report = quasirandom_test(&graphs, p, a.tol_root, a.tol_gap, a.degree)?;
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    Ok(match a.output.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            v["verdict"] = json!(verdict);
            pretty(&v)
        }
        Format::Csv => {
            let mut out = String::from("n,lambda1,lambda2,root,roots_in_radius,max_coeff\n");
            for r in &report.rows {
                let root = r.root.map(|z| format!("{z:?}")).unwrap_or_default();
                writeln!(out, "{},{:?},{:?},{},{},{:?}", r.n, r.lambda1, r.lambda2, root, r.roots_in_radius, r.max_coeff)
                    .unwrap();
            }
            writeln!(out, "# verdict: {verdict}").unwrap();
            for reason in &report.reasons {
                writeln!(out, "# reason: {reason}").unwrap();
            }
            out
        }
    })
}

pub fn cmd_signs(a: &SignsArgs) -> Result<String> {
    check_degree(a.degree)?;
    let p = parse_rational(&a.p)?;
    if p < graphon_psi::Rational::from_int(0) || p > graphon_psi::Rational::from_int(1) {
        return Err(Error::invalid(format!("p = {} outside [0, 1]", format_rational(&p))));
    }
    let rep = sign_report(&p, a.degree)?;
    let signs = format_signs(&rep.signs);
    let note = rep.quoted_mismatch.map(|k| {
        format!("exact signs differ from the commonly quoted pattern {QUOTED_SIGNS_HALF} first at k = {k}")
    });
    let turan = logconcavity_report(&rep.coeffs)?;
    Ok(match a.output.format {
        Format::Json => pretty(&json!({
            "p": format_rational(&p),
            "K": a.degree,
            "coeffs": rep.coeffs.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
            "signs": signs,
            "exact_zeros": rep.exact_zeros,
            "turan": turan.iter().map(|t| json!({
                "k": t.k,
                "value": format_rational(&t.value),
                "satisfied": t.satisfied,
            })).collect::<Vec<_>>(),
            "quoted_pattern": if rep.quoted_mismatch.is_some() { Some(QUOTED_SIGNS_HALF) } else { None },
            "quoted_mismatch_at": rep.quoted_mismatch,
            "note": note,
        })),
        Format::Csv => {
            let mut out = String::from("k,coeff,sign\n");
            for (k, (c, s)) in rep.coeffs.coeffs().iter().zip(&rep.signs).enumerate() {
                writeln!(out, "{k},{},{s}", format_rational(c)).unwrap();
            }
            writeln!(out, "# signs: {signs}").unwrap();
            let zeros: Vec<String> = rep.exact_zeros.iter().map(usize::to_string).collect();
            writeln!(out, "# exact zeros (k != 1): {}", if zeros.is_empty() { "none".into() } else { zeros.join(",") })
                .unwrap();
            if let Some(note) = note {
                writeln!(out, "# note: {note}").unwrap();
            }
            out
        }
    })
}

pub fn cmd_partitions(a: &PartitionsArgs) -> Result<String> {
    let terms = hs_family(a.degree);
    Ok(match a.output.format {
        Format::Json => pretty(&json!({
            "k": a.degree,
            "terms": terms.iter().map(|t| json!({
                "partition": t.partition.to_string(),
                "parts": t.partition.len(),
                "twos": t.partition.twos(),
                "cycles": t.z,
                "edges": t.edge_count(),
                "eta": t.eta.to_string(),
                "sign": t.sign,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("partition,parts,twos,cycles,edges,eta,sign\n");
            for t in &terms {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    t.partition,
                    t.partition.len(),
                    t.partition.twos(),
                    t.z,
                    t.edge_count(),
                    t.eta,
                    t.sign
                )
                .unwrap();
            }
            out
        }
    })
}
