//! Structured reports and the one-shot reproduction driver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::census::{census, closed_form_count, enumerate_invariant_subspaces, quadric_cone_count, stratum_count, stratum_type, CensusOptions};
use crate::chart_eqs::{
    chart_point_count_ff, eliminate_linear, generate_invariance_equations, parse_golden, reduce_with_substitution, singular_points_ff, ChartSpec,
    N3_EXTRA, N3_GOLDEN, N3_ORDER, N3_TARGET,
};
use crate::error::Result;
use crate::exec::Execution;
use crate::modules::{chart_transition, cyclic_kernel, ModuleElement};
use crate::parse::parse_poly;
use crate::poly::{var_names, BinaryForm, MultiPoly};
use crate::projective::{analyze_phi, adjugate_compose_check};
use crate::scalar::{Field, Scalar};
use crate::stable_pairs::{edge_orbit_comparison, random_form};
use crate::truncated::TruncatedPoly;

pub const DEFAULT_SEED: u64 = 20240229;

/// The pullbacks of the four target hyperplanes, one `name: divisor` per line.
pub const PULLBACK_GOLDEN: &str = include_str!("../golden/pullbacks.txt");
pub const EQUATIONS_GOLDEN_FILE: &str = "chart_equations_n3.txt";
pub const PULLBACK_GOLDEN_FILE: &str = "pullbacks.txt";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {} ({} ms)", self.check, self.detail, self.elapsed_ms)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subcommand: String,
    pub inputs: Value,
    pub results: Value,
    pub verdicts: Vec<Verdict>,
    pub elapsed_ms: u128,
    #[serde(skip)]
    pub text: String,
}

impl Report {
    pub fn new(subcommand: &str, inputs: Value) -> Report {
        Report {
            subcommand: subcommand.to_string(),
            inputs,
            results: Value::Null,
            verdicts: Vec::new(),
            elapsed_ms: 0,
            text: String::new(),
        }
    }

    pub fn verdict(&mut self, check: &str, pass: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            check: check.to_string(),
            pass,
            detail: detail.into(),
            elapsed_ms: 0,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.text.is_empty() {
            writeln!(f, "{}", self.text.trim_end())?;
        }
        for v in &self.verdicts {
            writeln!(f, "{v}")?;
        }
        if !self.verdicts.is_empty() {
            let passed = self.verdicts.iter().filter(|v| v.pass).count();
            writeln!(f, "{passed}/{} checks passed in {} ms", self.verdicts.len(), self.elapsed_ms)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ReproduceOptions {
    pub seed: u64,
    /// Directory holding replacement golden files.
    pub golden_dir: Option<PathBuf>,
    pub execution: Execution,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            seed: DEFAULT_SEED,
            golden_dir: None,
            execution: Execution::Parallel,
        }
    }
}

impl ReproduceOptions {
    fn golden(&self, file: &str, embedded: &str) -> Result<String> {
        match &self.golden_dir {
            Some(d) => Ok(std::fs::read_to_string(d.join(file))?),
            None => Ok(embedded.to_string()),
        }
    }
}

/// Outcome of one check: pass flag, one-line detail, structured data.
pub type CheckOutcome = (bool, String, Value);

type CheckFn = fn(&ReproduceOptions) -> Result<CheckOutcome>;

/// The reproduction checks in order, with their time limits in seconds.
pub const CHECKS: [(&str, f64, CheckFn); 13] = [
    ("chart-equations", 1.0, check_chart_equations),
    ("residual-hypersurface", 1.0, check_residual),
    ("singular-locus", 1.0, check_singular_locus),
    ("involution", 1.0, check_involution),
    ("pullback-table", 1.0, check_pullbacks),
    ("discrepancy-ledger", 5.0, check_ledger),
    ("census-closed-form", 60.0, check_census),
    ("quadric-fibre", 1.0, check_quadric),
    ("kernel-oracle", 30.0, check_kernel_oracle),
    ("chart-transition", 5.0, check_transition),
    ("chart-census-bijection", 5.0, check_chart_census),
    ("stable-pair-orbits", 60.0, check_orbits),
    ("cramer-identity", 5.0, check_cramer),
];

/// Runs check `index` (0-based), turning errors into failures.
pub fn run_check(index: usize, opts: &ReproduceOptions) -> (Verdict, Value) {
    let (name, _, f) = CHECKS[index];
    let start = Instant::now();
    let (pass, detail, data) = match f(opts) {
        Ok(o) => o,
        Err(e) => (false, format!("error: {e}"), Value::Null),
    };
    let verdict = Verdict {
        check: name.to_string(),
        pass,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    };
    (verdict, data)
}

pub fn reproduce_paper(opts: &ReproduceOptions) -> Report {
    let start = Instant::now();
    let mut report = Report::new(
        "reproduce-paper",
        json!({
            "seed": opts.seed,
            "golden_dir": opts.golden_dir.as_ref().map(|p| p.display().to_string()),
        }),
    );
    let mut results = serde_json::Map::new();
    for i in 0..CHECKS.len() {
        let (v, data) = run_check(i, opts);
        results.insert(v.check.clone(), data);
        report.verdicts.push(v);
    }
    report.results = Value::Object(results);
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

fn check_chart_equations(opts: &ReproduceOptions) -> Result<CheckOutcome> {
    let chart = ChartSpec::standard(3)?;
    let sys = generate_invariance_equations(&chart, Field::Rationals)?;
    let golden = parse_golden(&opts.golden(EQUATIONS_GOLDEN_FILE, N3_GOLDEN)?, chart.vars(), Field::Rationals)?;
    let pass = sys.equations.len() == 9 && sys.same_up_to_normalization(&golden);
    let eqs: Vec<String> = sys.equations.iter().map(|e| e.to_string()).collect();
    Ok((pass, format!("{} equations, golden match {}", eqs.len(), pass), json!({ "equations": eqs })))
}

fn check_residual(_: &ReproduceOptions) -> Result<CheckOutcome> {
    let chart = ChartSpec::standard(3)?;
    let sys = generate_invariance_equations(&chart, Field::Rationals)?;
    let el = eliminate_linear(&sys, &N3_ORDER)?;
    let rv = &el.residual.vars;
    let mut extra = BTreeMap::new();
    extra.insert(N3_EXTRA.0.to_string(), parse_poly(N3_EXTRA.1, rv, Field::Rationals)?);
    let target = parse_poly(N3_TARGET, rv, Field::Rationals)?;
    let v = reduce_with_substitution(&el.residual, &extra, &target)?;
    let allowed = [0, 1, -1].map(|k| Scalar::from_int(Field::Rationals, k));
    let pass = v.pass && v.multipliers.iter().flatten().all(|m| allowed.contains(m));
    let mults: Vec<String> = v.multipliers.iter().map(|m| m.as_ref().map_or("none".into(), |c| c.to_string())).collect();
    Ok((
        pass,
        format!("multipliers [{}] on {}", mults.join(", "), target),
        json!({
            "residual": el.residual.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "multipliers": mults,
            "target": target.to_string(),
        }),
    ))
}

fn check_singular_locus(_: &ReproduceOptions) -> Result<CheckOutcome> {
    let vars = var_names(&["a", "b", "c", "g"]);
    let h = parse_poly(N3_TARGET, &vars, Field::Rationals)?;
    let mut counts = Vec::new();
    for q in [2u32, 3, 5] {
        counts.push((q, singular_points_ff(&h, q)?.len() as u64));
    }
    let pass = counts.iter().all(|&(q, c)| c == q as u64);
    let d: Vec<String> = counts.iter().map(|(q, c)| format!("q={q}: {c}")).collect();
    Ok((pass, d.join(", "), json!(counts)))
}

fn check_involution(_: &ReproduceOptions) -> Result<CheckOutcome> {
    let a = analyze_phi()?;
    let expected = parse_poly("m1^6*m4^2", a.composition.map.source(), Field::Rationals)?;
    let pass = a.involution && a.composition.cleared_factor == expected;
    Ok((
        pass,
        format!("phi∘phi = identity: {}, cleared factor {}", a.involution, a.composition.cleared_factor),
        json!({ "composition": a.composition.map.to_string(), "cleared_factor": a.composition.cleared_factor.to_string() }),
    ))
}

/// Parses `H_i: divisor` lines.
pub fn parse_pullback_golden(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

fn check_pullbacks(opts: &ReproduceOptions) -> Result<CheckOutcome> {
    let a = analyze_phi()?;
    let golden = parse_pullback_golden(&opts.golden(PULLBACK_GOLDEN_FILE, PULLBACK_GOLDEN)?);
    let mut pass = golden.len() == 4;
    let mut rows = Vec::new();
    for (name, p) in &a.pullbacks {
        let shown = p.divisor.to_string();
        pass &= golden.get(name) == Some(&shown) && p.accounted_degree == 3 && p.degree == 3 && p.cofactor.is_constant();
        rows.push(json!({ "divisor": name, "pullback": shown, "degree": p.accounted_degree }));
    }
    let d: Vec<String> = a.pullbacks.iter().map(|(n, p)| format!("{n} -> {}", p.divisor)).collect();
    Ok((pass, d.join("; "), Value::Array(rows)))
}

fn check_ledger(_: &ReproduceOptions) -> Result<CheckOutcome> {
    let a = analyze_phi()?;
    let orders: Vec<i64> = a.jacobian.iter().map(|j| j.jacobian_order).collect();
    let total = a.ledger.total.to_string();
    let pass = orders == [-6, 2] && a.ledger.verify().is_ok() && total == "K_X + A_2 + A_4 + G";
    Ok((
        pass,
        format!("Jacobian orders {orders:?}, ledger {total}"),
        json!({ "jacobian": a.jacobian, "ledger": a.ledger }),
    ))
}

fn check_census(opts: &ReproduceOptions) -> Result<CheckOutcome> {
    let copts = CensusOptions {
        execution: opts.execution,
        shards: 8,
        ..CensusOptions::default()
    };
    let cases = [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)];
    let mut pass = true;
    let mut rows = Vec::new();
    for (n, q) in cases {
        let rep = census(n, 2, q, &copts)?;
        let closed = closed_form_count(n, q as u64);
        let mut ok = rep.total as u128 == closed;
        let mut expected_types = BTreeSet::new();
        for m in 0..=n / 2 {
            let t = stratum_type(n, m);
            ok &= rep.count(&t) as u128 == stratum_count(n, m, q as u64)?;
            expected_types.insert(t);
        }
        ok &= rep.by_type.keys().all(|t| expected_types.contains(t));
        pass &= ok;
        rows.push(json!({ "n": n, "q": q, "total": rep.total, "closed_form": closed.to_string(), "strata_ok": ok }));
    }
    Ok((pass, format!("{} cases against (q+1)q^(n-2m-1)", cases.len()), Value::Array(rows)))
}

fn check_quadric(_: &ReproduceOptions) -> Result<CheckOutcome> {
    let mut pass = true;
    let mut d = Vec::new();
    for q in [2u32, 3, 5] {
        let c = quadric_cone_count(q)?;
        pass &= c as u128 == closed_form_count(2, q as u64);
        d.push((q, c));
    }
    let s: Vec<String> = d.iter().map(|(q, c)| format!("q={q}: {c}")).collect();
    Ok((pass, s.join(", "), json!(d)))
}

fn trunc_mul(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let n = a.len();
    let mut out = vec![0u32; n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] = (out[i + j] + a[i] * b[j]) % q;
        }
    }
    out
}

fn digits(mut idx: u64, q: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (idx % q as u64) as u32;
            idx /= q as u64;
            d
        })
        .collect()
}

fn check_kernel_oracle(_: &ReproduceOptions) -> Result<CheckOutcome> {
    let q = 3u32;
    let field = Field::prime(q as u64)?;
    let mut pairs = 0u64;
    let mut failures = Vec::new();
    for n in 1..=3usize {
        let size = (q as u64).pow(n as u32);
        for ei in 0..size {
            let e = digits(ei, q, n);
            for hi in 0..size {
                let h = digits(hi, q, n);
                if e[0] == 0 && h[0] == 0 {
                    continue;
                }
                pairs += 1;
                let to_tp = |v: &[u32]| TruncatedPoly::from_ints(field, n, &v.iter().map(|&x| x as i64).collect::<Vec<_>>());
                let (_, basis) = cyclic_kernel(&to_tp(&e), &to_tp(&h))?;
                let mut count = 0u64;
                let mut all_in = true;
                for fi in 0..size {
                    let f = digits(fi, q, n);
                    let fe = trunc_mul(&f, &e, q);
                    for gi in 0..size {
                        let g = digits(gi, q, n);
                        let gh = trunc_mul(&g, &h, q);
                        if fe.iter().zip(&gh).all(|(a, b)| (a + b) % q == 0) {
                            count += 1;
                            let el = ModuleElement::new(vec![to_tp(&f), to_tp(&g)])?;
                            all_in &= basis.membership(&el)?;
                        }
                    }
                }
                if !(all_in && count == (q as u64).pow(basis.dim() as u32)) {
                    failures.push(format!("n={n} e={e:?} h={h:?}"));
                }
            }
        }
    }
    Ok((
        failures.is_empty(),
        format!("{pairs} unit pairs over GF(3), n <= 3, {} mismatches", failures.len()),
        json!({ "pairs": pairs, "failures": failures }),
    ))
}

fn random_rational<R: Rng>(rng: &mut R, nonzero: bool) -> Scalar {
    loop {
        let num = rng.gen_range(-50i64..=50);
        let den = rng.gen_range(1i64..=30);
        if !(nonzero && num == 0) {
            return Scalar::from_ratio(Field::Rationals, &BigInt::from(num), &BigInt::from(den)).expect("nonzero denominator");
        }
    }
}

fn check_transition(opts: &ReproduceOptions) -> Result<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let f = Field::Rationals;
    let mut involution = true;
    let mut formula = true;
    for n in [2usize, 3] {
        for _ in 0..1000 {
            let mut m = vec![random_rational(&mut rng, true)];
            m.extend((1..n).map(|_| random_rational(&mut rng, false)));
            let l = chart_transition(&m)?;
            involution &= chart_transition(&l)? == m;
            if n == 2 {
                let inv = m[0].inv()?;
                formula &= l == vec![inv.clone(), -&(&m[1] * &(&inv * &inv))];
            }
        }
    }
    // (m1 + m2 t)·(m1 − m2 t) ≡ m1² mod t², i.e. the inverse is (1/m1, −m2/m1²)
    let vars = var_names(&["m1", "m2", "t"]);
    let prod = &parse_poly("m1 + m2*t", &vars, f)? * &parse_poly("m1 - m2*t", &vars, f)?;
    let truncated = MultiPoly::from_terms(&vars, f, prod.terms().filter(|(m, _)| m.0[2] < 2).map(|(m, c)| (m.clone(), c.clone())));
    let symbolic = truncated == parse_poly("m1^2", &vars, f)?;
    let pass = involution && formula && symbolic;
    Ok((
        pass,
        format!("involution {involution} on 2000 inputs, degree-2 formula {formula}, symbolic {symbolic}"),
        json!({ "involution": involution, "formula": formula, "symbolic": symbolic }),
    ))
}

fn check_chart_census(opts: &ReproduceOptions) -> Result<CheckOutcome> {
    let chart = ChartSpec::standard(3)?;
    let sys = generate_invariance_equations(&chart, Field::Rationals)?;
    let solutions = chart_point_count_ff(&sys, 2)?;
    let copts = CensusOptions {
        execution: opts.execution,
        ..CensusOptions::default()
    };
    let subspaces = enumerate_invariant_subspaces(3, 2, 2, 3, &copts)?;
    let in_chart = subspaces.iter().filter(|s| chart.contains(s)).count() as u64;
    Ok((
        solutions == in_chart,
        format!("{solutions} solutions over GF(2), {in_chart} invariant subspaces in the chart"),
        json!({ "solutions": solutions, "census": in_chart }),
    ))
}

fn check_orbits(opts: &ReproduceOptions) -> Result<CheckOutcome> {
    let mut pass = true;
    let mut rows = Vec::new();
    let mut d = Vec::new();
    for q in [2u32, 3] {
        for (r, n) in [(2usize, 1u32), (2, 2), (3, 1)] {
            let c = edge_orbit_comparison(r, n, q, opts.execution)?;
            pass &= c.consistent;
            d.push(format!("q={q} (r,n)=({r},{n}): {} orbits", c.orbits));
            rows.push(serde_json::to_value(&c).expect("serializes"));
        }
    }
    Ok((pass, d.join(", "), Value::Array(rows)))
}

fn check_cramer(opts: &ReproduceOptions) -> Result<CheckOutcome> {
    let q = Field::Rationals;
    let xy = crate::poly::xy_vars();
    let form = |s: &str| -> Result<BinaryForm> { BinaryForm::from_poly(parse_poly(s, &xy, q)?) };
    let worked = adjugate_compose_check(&[vec![form("x^2")?, form("y^2")?], vec![form("x")?, form("y")?]])?;
    let mut pass = worked.pass && worked.det == parse_poly("x^2*y - x*y^2", &xy, q)?;
    let f5 = Field::Prime(5);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut random_pass = 0;
    for _ in 0..100 {
        let m = vec![
            vec![random_form(f5, 2, &mut rng), random_form(f5, 2, &mut rng)],
            vec![random_form(f5, 1, &mut rng), random_form(f5, 1, &mut rng)],
        ];
        if adjugate_compose_check(&m)?.pass {
            random_pass += 1;
        }
    }
    pass &= random_pass == 100;
    Ok((
        pass,
        format!("worked example det {}, {random_pass}/100 random matrices", worked.det),
        json!({ "det": worked.det.to_string(), "random_pass": random_pass }),
    ))
}
