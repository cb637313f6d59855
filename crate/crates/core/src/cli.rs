//! Command-line front end. Exit codes: 0 when every verdict passes, 1 on
//! any failure, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::census::{census, closed_form_count, quadric_cone_count, stratum_count, stratum_type, strata_dimension_table, CensusOptions};
use crate::chart_eqs::{
    chart_point_count_ff, eliminate_linear, generate_invariance_equations, parse_golden, reduce_with_substitution, ChartSpec, N3_EXTRA, N3_GOLDEN,
    N3_ORDER, N3_TARGET,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::modules::{chart_transition, classify_type, cyclic_kernel};
use crate::parse::parse_poly;
use crate::projective::analyze_phi;
use crate::report::{parse_pullback_golden, reproduce_paper, Report, ReproduceOptions, DEFAULT_SEED, PULLBACK_GOLDEN};
use crate::scalar::{Field, Scalar};
use crate::stable_pairs::{deg3_invariant, edge_normal_form, kernel_consistency, FormMatrix};
use crate::truncated::TruncatedPoly;

#[derive(Parser, Debug)]
#[command(name = "quotfib", version, about = "Torsion quotients of rank-2 bundles on curves: censuses, chart equations, and the cubic involution of P^3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Edge,
    Deg3,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count n-dimensional t-invariant subspaces of (GF(q)[t]/t^n)^r by module type.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        /// Run without the thread pool.
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Emit the t-invariance equations on the standard chart of Gr(n, 2n).
    ChartEquations {
        #[arg(long)]
        n: usize,
        /// Golden file to compare the n = 3 system against.
        #[arg(long, value_name = "PATH")]
        golden: Option<PathBuf>,
        /// Also count solutions over GF(q).
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Checks on the cubic involution of P^3. Without flags, runs all of them.
    Phi {
        #[arg(long)]
        check_involution: bool,
        #[arg(long)]
        pullbacks: bool,
        #[arg(long)]
        ledger: bool,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Kernel of (f, g) -> f*e + g*h on (k[t]/t^n)^2.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        n: usize,
        /// Work over GF(q) instead of QQ.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Chart change m(t) -> m(t)^(-1) mod t^n.
    Transition {
        /// Comma-separated coefficients m1, m2, ...
        #[arg(long, allow_hyphen_values = true)]
        coords: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Normal form and invariant of a stable-pair matrix read from a file.
    NormalForm {
        #[arg(long, value_enum)]
        shape: ShapeArg,
        #[arg(long, value_name = "PATH")]
        matrix: PathBuf,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Points of V(xz + y^2) in P^3(GF(q)).
    QuadricCount {
        #[arg(long)]
        q: u32,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Strata of the punctual quotient space by module type.
    Strata {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Run every reproduction check.
    ReproducePaper {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Directory with replacement golden files.
        #[arg(long, value_name = "DIR")]
        golden_dir: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

fn field_of(q: Option<u32>) -> Result<Field> {
    match q {
        Some(q) => Field::prime(q as u64),
        None => Ok(Field::Rationals),
    }
}

fn exec_of(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

/// Parses arguments, runs the subcommand and writes the report.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let start = Instant::now();
    let json_path = json_target(&cli.command).cloned();
    match execute(cli.command) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis();
            if let Some(p) = json_path {
                if let Err(e) = write_json(&p, &report, out) {
                    let _ = writeln!(err, "error: {e}");
                    return 2;
                }
            }
            let _ = write!(out, "{report}");
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn json_target(c: &Command) -> Option<&PathBuf> {
    match c {
        Command::Census { json, .. }
        | Command::ChartEquations { json, .. }
        | Command::Phi { json, .. }
        | Command::Kernel { json, .. }
        | Command::Transition { json, .. }
        | Command::NormalForm { json, .. }
        | Command::QuadricCount { json, .. }
        | Command::Strata { json, .. }
        | Command::ReproducePaper { json, .. } => json.as_ref(),
    }
}

/// Writes the JSON report to `path`, or to `out` when `path` is `-`.
fn write_json<W: Write>(path: &Path, report: &Report, out: &mut W) -> Result<()> {
    let text = report.to_json();
    if path.as_os_str() == "-" {
        writeln!(out, "{text}")?;
    } else {
        std::fs::write(path, text + "\n")?;
    }
    Ok(())
}

pub fn execute(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Census { n, r, q, shards, sequential, .. } => run_census(n, r, q, shards, exec_of(sequential)),
        Command::ChartEquations { n, golden, q, .. } => run_chart_equations(n, golden.as_deref(), q),
        Command::Phi {
            check_involution,
            pullbacks,
            ledger,
            ..
        } => {
            let all = !(check_involution || pullbacks || ledger);
            run_phi(all || check_involution, all || pullbacks, all || ledger)
        }
        Command::Kernel { e, h, n, q, .. } => run_kernel(&e, &h, n, field_of(q)?),
        Command::Transition { coords, n, q, .. } => run_transition(&coords, n, field_of(q)?),
        Command::NormalForm { shape, matrix, q, .. } => run_normal_form(shape, &matrix, field_of(q)?),
        Command::QuadricCount { q, .. } => run_quadric(q),
        Command::Strata { r, n, .. } => {
            let t = strata_dimension_table(r, n)?;
            let mut rep = Report::new("strata", json!({ "r": r, "n": n }));
            rep.text = t.to_string();
            rep.results = serde_json::to_value(&t).expect("serializes");
            Ok(rep)
        }
        Command::ReproducePaper {
            seed,
            golden_dir,
            sequential,
            ..
        } => Ok(reproduce_paper(&ReproduceOptions {
            seed,
            golden_dir,
            execution: exec_of(sequential),
        })),
    }
}

fn run_census(n: usize, r: usize, q: u32, shards: usize, execution: Execution) -> Result<Report> {
    Field::prime(q as u64)?;
    let opts = CensusOptions {
        shards: shards.max(1),
        execution,
        ..CensusOptions::default()
    };
    let rep = census(n, r, q, &opts)?;
    let mut report = Report::new("census", json!({ "n": n, "r": r, "q": q, "shards": shards }));
    report.text = rep.to_string();
    if r == 2 {
        let closed = closed_form_count(n, q as u64);
        report.verdict("closed-form total", rep.total as u128 == closed, format!("{} vs {closed}", rep.total));
        let strata_ok = (0..=n / 2).all(|m| stratum_count(n, m, q as u64).map(|c| c == rep.count(&stratum_type(n, m)) as u128).unwrap_or(false));
        report.verdict("stratum counts", strata_ok, "(q+1)q^(n-2m-1) per stratum");
    }
    report.results = serde_json::to_value(&rep).expect("serializes");
    Ok(report)
}

fn run_chart_equations(n: usize, golden: Option<&Path>, q: Option<u32>) -> Result<Report> {
    let chart = ChartSpec::standard(n)?;
    let f = Field::Rationals;
    let sys = generate_invariance_equations(&chart, f)?;
    let mut report = Report::new("chart-equations", json!({ "n": n, "golden": golden.map(|p| p.display().to_string()), "q": q }));
    let refs: Vec<String> = chart.reference().iter().map(|m| m.to_string()).collect();
    let comp: Vec<String> = chart.complement().iter().map(|m| m.to_string()).collect();
    let mut text = format!(
        "chart W = span({}), complement ({}), variables {}\n{} equations:\n{sys}",
        refs.join(", "),
        comp.join(", "),
        chart.vars().join(","),
        sys.equations.len()
    );
    let mut results = json!({
        "reference": refs,
        "complement": comp,
        "vars": chart.vars(),
        "equations": sys.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
    });
    if n == 3 {
        let golden_text = match golden {
            Some(p) => std::fs::read_to_string(p)?,
            None => N3_GOLDEN.to_string(),
        };
        let g = parse_golden(&golden_text, chart.vars(), f)?;
        report.verdict("golden equations", sys.same_up_to_normalization(&g), format!("{} equations compared after normalization", g.equations.len()));
        let el = eliminate_linear(&sys, &N3_ORDER)?;
        let rv = &el.residual.vars;
        let extra = [(N3_EXTRA.0.to_string(), parse_poly(N3_EXTRA.1, rv, f)?)].into();
        let target = parse_poly(N3_TARGET, rv, f)?;
        let v = reduce_with_substitution(&el.residual, &extra, &target)?;
        text.push_str("elimination:\n");
        for s in &el.trace {
            text.push_str(&format!("  {} = {}   (from equation {})\n", s.var, s.value, s.equation + 1));
        }
        text.push_str(&format!("residual:\n{}", el.residual));
        text.push_str(&format!("after {} -> {}: every generator is a multiple of {}\n", N3_EXTRA.0, N3_EXTRA.1, target));
        report.verdict("residual hypersurface", v.pass, format!("{target} = 0"));
        results["residual"] = json!(el.residual.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>());
        results["multipliers"] = json!(v.multipliers.iter().map(|m| m.as_ref().map(|c| c.to_string())).collect::<Vec<_>>());
    }
    if let Some(q) = q {
        let c = chart_point_count_ff(&sys, q)?;
        text.push_str(&format!("solutions over GF({q}): {c}\n"));
        results["solutions"] = json!(c);
    }
    report.text = text;
    report.results = results;
    Ok(report)
}

fn run_phi(involution: bool, pullbacks: bool, ledger: bool) -> Result<Report> {
    let a = analyze_phi()?;
    let mut report = Report::new("phi", json!({ "check_involution": involution, "pullbacks": pullbacks, "ledger": ledger }));
    let mut text = String::new();
    let mut results = serde_json::Map::new();
    if involution {
        text.push_str(&format!(
            "phi∘phi = {}\ncleared factor {}\n",
            a.composition.map, a.composition.cleared_factor
        ));
        report.verdict("involution", a.involution, "phi∘phi is the identity");
        results.insert("composition".into(), json!(a.composition.map.to_string()));
        results.insert("cleared_factor".into(), json!(a.composition.cleared_factor.to_string()));
    }
    if pullbacks {
        let golden = parse_pullback_golden(PULLBACK_GOLDEN);
        let mut ok = true;
        text.push_str("pullbacks:\n");
        for (name, p) in &a.pullbacks {
            text.push_str(&format!("  {name} -> {} (degree {})\n", p.divisor, p.accounted_degree));
            ok &= golden.get(name) == Some(&p.divisor.to_string()) && p.accounted_degree == 3;
        }
        report.verdict("pullback table", ok, "four hyperplanes, degree 3 each");
        results.insert(
            "pullbacks".into(),
            json!(a.pullbacks.iter().map(|(n, p)| (n.clone(), p.divisor.to_string())).collect::<std::collections::BTreeMap<_, _>>()),
        );
    }
    if ledger {
        for j in &a.jacobian {
            text.push_str(&format!(
                "Jacobian order along {} (charts {}, {}): {}\n",
                j.divisor,
                j.source_chart + 1,
                j.target_chart + 1,
                j.jacobian_order
            ));
        }
        text.push_str(&format!("{}\nledger: {}\n", a.ledger, a.ledger.total));
        let ok = a.ledger.verify().is_ok();
        report.verdict("discrepancy ledger", ok, a.ledger.total.to_string());
        results.insert("jacobian".into(), serde_json::to_value(&a.jacobian).expect("serializes"));
        results.insert("ledger".into(), serde_json::to_value(&a.ledger).expect("serializes"));
    }
    report.text = text;
    report.results = serde_json::Value::Object(results);
    Ok(report)
}

fn run_kernel(e: &str, h: &str, n: usize, field: Field) -> Result<Report> {
    if n == 0 {
        return Err(Error::Shape("n must be positive".into()));
    }
    let ep = TruncatedPoly::parse(e, field, n)?;
    let hp = TruncatedPoly::parse(h, field, n)?;
    let (g, basis) = cyclic_kernel(&ep, &hp)?;
    let t = classify_type(&basis);
    let mut report = Report::new("kernel", json!({ "e": e, "h": h, "n": n, "field": field.to_string() }));
    report.text = format!("kernel generated by {g}\ndimension {}, type {t}\n", basis.dim());
    report.verdict("kernel has full length", basis.dim() == n, format!("dim {} = n", basis.dim()));
    report.results = json!({ "generator": g, "dimension": basis.dim(), "type": t, "basis": basis });
    Ok(report)
}

fn run_transition(coords: &str, n: usize, field: Field) -> Result<Report> {
    let vars: Vec<String> = Vec::new();
    let mut m: Vec<Scalar> = coords
        .split(',')
        .map(|s| parse_poly(s.trim(), &vars, field)?.constant_value().ok_or_else(|| Error::Shape(format!("`{s}` is not a constant"))))
        .collect::<Result<_>>()?;
    if n == 0 || m.is_empty() {
        return Err(Error::Shape("need n >= 1 and at least one coordinate".into()));
    }
    m.resize(n, Scalar::zero(field));
    let l = chart_transition(&m)?;
    let back = chart_transition(&l)?;
    let show = |v: &[Scalar]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
    let mut report = Report::new("transition", json!({ "coords": coords, "n": n, "field": field.to_string() }));
    report.text = format!("U ({}) -> V ({})\n", show(&m), show(&l));
    report.verdict("involution", back == m, "applying the transition twice returns the input");
    report.results = json!({ "u": m, "v": l });
    Ok(report)
}

fn run_normal_form(shape: ShapeArg, path: &Path, field: Field) -> Result<Report> {
    let text = std::fs::read_to_string(path)?;
    let shape_name = match shape {
        ShapeArg::Edge => "edge",
        ShapeArg::Deg3 => "deg3",
    };
    let mat = FormMatrix::parse(&text, shape_name, field)?;
    let mut report = Report::new("normal-form", json!({ "shape": shape_name, "matrix": path.display().to_string(), "field": field.to_string() }));
    match shape {
        ShapeArg::Edge => {
            let (nf, inv) = edge_normal_form(&mat)?;
            report.text = format!("input:\n{mat}\nnormal form:\n{nf}\ninvariant: {inv}\n");
            let (_, again) = edge_normal_form(&nf)?;
            report.verdict("normal form is fixed", again == inv, "normal form has the same invariant");
            report.results = json!({ "normal_form": nf, "invariant": inv });
        }
        ShapeArg::Deg3 => {
            let inv = deg3_invariant(&mat)?;
            report.text = format!("input:\n{mat}\ninvariant: {inv}\n");
            let mut results = json!({ "invariant": inv });
            if let Field::Prime(_) = field {
                let k = kernel_consistency(&mat)?;
                for r in &k.roots {
                    report.text.push_str(&format!(
                        "  root ({}:{}): multiplicity {}, cokernel length {}\n",
                        r.point.0, r.point.1, r.multiplicity, r.cokernel_length
                    ));
                }
                report.verdict("kernel consistency", k.pass, format!("{} base-field roots, split {}", k.roots.len(), k.split));
                results["kernel"] = serde_json::to_value(&k).expect("serializes");
            }
            report.results = results;
        }
    }
    Ok(report)
}

fn run_quadric(q: u32) -> Result<Report> {
    let c = quadric_cone_count(q)?;
    let closed = closed_form_count(2, q as u64);
    let mut report = Report::new("quadric-count", json!({ "q": q }));
    report.text = format!("V(xz + y^2) has {c} points over GF({q})\n");
    report.verdict("matches punctual count for n = 2", c as u128 == closed, format!("{c} vs {closed}"));
    report.results = json!({ "count": c, "closed_form": closed.to_string() });
    Ok(report)
}
