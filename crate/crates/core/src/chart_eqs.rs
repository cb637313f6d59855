//! Local equations of the variety of n-dimensional submodules of
//! (k[t]/⟨tⁿ⟩)^⊕2 on an affine chart of the Grassmannian, their
//! user-ordered linear elimination, and brute-force probes over 𝔽_q.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::census::budget_from_env;
use crate::error::{Error, Result};
use crate::exec::{sum_range, Execution};
use crate::modules::SubmoduleBasis;
use crate::parse::parse_poly;
use crate::poly::MultiPoly;
use crate::scalar::{Field, Scalar};

/// The basis vector u_c·tᵖ of (k[t]/⟨tⁿ⟩)^⊕2 (c = 0 is `u`, c = 1 is `v`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisMonomial {
    pub component: usize,
    pub power: usize,
}

impl BasisMonomial {
    pub const fn new(component: usize, power: usize) -> Self {
        BasisMonomial { component, power }
    }

    /// Column in the (u, ut, …, v, vt, …) coordinate ordering.
    pub fn column(&self, n: usize) -> usize {
        self.component * n + self.power
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = ["u", "v"].get(self.component).copied().unwrap_or("w");
        match self.power {
            0 => write!(f, "{g}"),
            1 => write!(f, "{g}t"),
            p => write!(f, "{g}t^{p}"),
        }
    }
}

/// An affine chart of Gr(n, 2n) around the span of `reference`: subspaces
/// spanned by rows Rⱼ = referenceⱼ + Σₖ xⱼₖ·complementₖ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartSpec {
    n: usize,
    reference: Vec<BasisMonomial>,
    complement: Vec<BasisMonomial>,
    vars: Vec<String>,
}

impl ChartSpec {
    pub fn new(n: usize, reference: Vec<BasisMonomial>, complement: Vec<BasisMonomial>, vars: Vec<String>) -> Result<ChartSpec> {
        let mut all: Vec<BasisMonomial> = reference.iter().chain(&complement).copied().collect();
        all.sort();
        let expected: Vec<BasisMonomial> = (0..2).flat_map(|c| (0..n).map(move |p| BasisMonomial::new(c, p))).collect();
        if all != expected {
            return Err(Error::NotABasis(format!(
                "reference {:?} and complement {:?} must partition the {} monomials",
                reference.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                complement.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                2 * n
            )));
        }
        if reference.len() != n {
            return Err(Error::NotABasis(format!("reference must have {n} vectors, got {}", reference.len())));
        }
        if vars.len() != n * n {
            return Err(Error::Shape(format!("chart needs {} variables, got {}", n * n, vars.len())));
        }
        Ok(ChartSpec { n, reference, complement, vars })
    }

    /// Chart centred at W₀ = Span(ut, …, utⁿ⁻¹, vtⁿ⁻¹) with complement
    /// (u, v, vt, …, vtⁿ⁻²). For n = 3 this is W = Span(ut, ut², vt²) with
    /// M/W ≃ Span(u, v, vt) and variables a…i; for n = 1 it is Span(u) with
    /// complement (v).
    pub fn standard(n: usize) -> Result<ChartSpec> {
        if n == 0 {
            return Err(Error::Shape("n must be positive".into()));
        }
        let (reference, complement) = if n == 1 {
            (vec![BasisMonomial::new(0, 0)], vec![BasisMonomial::new(1, 0)])
        } else {
            let mut reference: Vec<_> = (1..n).map(|p| BasisMonomial::new(0, p)).collect();
            reference.push(BasisMonomial::new(1, n - 1));
            let mut complement = vec![BasisMonomial::new(0, 0)];
            complement.extend((0..n - 1).map(|p| BasisMonomial::new(1, p)));
            (reference, complement)
        };
        ChartSpec::new(n, reference, complement, default_chart_vars(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn reference(&self) -> &[BasisMonomial] {
        &self.reference
    }

    pub fn complement(&self) -> &[BasisMonomial] {
        &self.complement
    }

    /// Name of the chart variable in row `j`, complement column `k`.
    pub fn var(&self, j: usize, k: usize) -> &str {
        &self.vars[j * self.n + k]
    }

    /// The subspace of the chart point `values` (row-major), in standard
    /// coordinates.
    pub fn subspace_at(&self, field: Field, values: &[Scalar]) -> Result<SubmoduleBasis> {
        let n = self.n;
        if values.len() != n * n {
            return Err(Error::Shape(format!("chart point needs {} values", n * n)));
        }
        let rows: Vec<Vec<Scalar>> = (0..n)
            .map(|j| {
                let mut row = vec![Scalar::zero(field); 2 * n];
                row[self.reference[j].column(n)] = Scalar::one(field);
                for (k, c) in self.complement.iter().enumerate() {
                    row[c.column(n)] = values[j * n + k].clone();
                }
                row
            })
            .collect();
        SubmoduleBasis::from_rows(n, 2, field, &rows)
    }

    /// Whether `s` is a graph over the reference space, i.e. complementary
    /// to the span of the complement vectors.
    pub fn contains(&self, s: &SubmoduleBasis) -> bool {
        let cols: Vec<usize> = self.reference.iter().map(|m| m.column(self.n)).collect();
        s.dim() == self.n && s.rank_on_columns(&cols) == self.n
    }
}

/// Variable names a, b, c, … (row-major) while they last, then x1, x2, ….
pub fn default_chart_vars(n: usize) -> Vec<String> {
    if n * n <= 26 {
        (0..n * n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=n * n).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolynomialSystem {
    pub vars: Vec<String>,
    pub equations: Vec<MultiPoly>,
}

impl PolynomialSystem {
    /// Drops zero equations; all equations must use `vars`.
    pub fn new(vars: Vec<String>, equations: Vec<MultiPoly>) -> Result<PolynomialSystem> {
        for e in &equations {
            if e.vars() != vars.as_slice() {
                return Err(Error::VariableMismatch(format!("equation {e} is not over {vars:?}")));
            }
        }
        Ok(PolynomialSystem {
            vars,
            equations: equations.into_iter().filter(|e| !e.is_zero()).collect(),
        })
    }

    pub fn parse(lines: &[&str], vars: &[String], field: Field) -> Result<PolynomialSystem> {
        let eqs = lines.iter().map(|l| parse_poly(l, vars, field)).collect::<Result<_>>()?;
        PolynomialSystem::new(vars.to_vec(), eqs)
    }

    /// Each equation scaled to graded-lex leading coefficient 1.
    pub fn normalized(&self) -> PolynomialSystem {
        PolynomialSystem {
            vars: self.vars.clone(),
            equations: self.equations.iter().map(MultiPoly::monic).collect(),
        }
    }

    /// Canonical text of the normalized equations, sorted.
    pub fn canonical_lines(&self) -> Vec<String> {
        let mut v: Vec<String> = self.normalized().equations.iter().map(|e| e.to_string()).collect();
        v.sort();
        v
    }

    /// Equality after sign normalization, ignoring equation order.
    pub fn same_up_to_normalization(&self, o: &PolynomialSystem) -> bool {
        self.vars == o.vars && self.canonical_lines() == o.canonical_lines()
    }

    pub fn to_field(&self, field: Field) -> Result<PolynomialSystem> {
        Ok(PolynomialSystem {
            vars: self.vars.clone(),
            equations: self.equations.iter().map(|e| e.to_field(field)).collect::<Result<_>>()?,
        })
    }
}

impl fmt::Display for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.equations {
            writeln!(f, "  {e} = 0")?;
        }
        Ok(())
    }
}

/// The t-invariance conditions on the chart: for each row Rⱼ, t·Rⱼ must
/// equal Σᵢ cᵢRᵢ where cᵢ are its reference coordinates; the complement
/// coordinates of t·Rⱼ − Σᵢ cᵢRᵢ are the equations, emitted row by row.
pub fn generate_invariance_equations(chart: &ChartSpec, field: Field) -> Result<PolynomialSystem> {
    let n = chart.n;
    let vars = &chart.vars;
    let zero = MultiPoly::zero(vars, field);
    let x = |j: usize, k: usize| MultiPoly::var(vars, field, chart.var(j, k));
    let ref_pos = |m: &BasisMonomial| chart.reference.iter().position(|r| r == m);
    let comp_pos = |m: &BasisMonomial| chart.complement.iter().position(|r| r == m);

    let mut equations = Vec::new();
    for j in 0..n {
        // t·Rⱼ in (reference, complement) coordinates
        let mut ref_c = vec![zero.clone(); n];
        let mut comp_c = vec![zero.clone(); n];
        let mut place = |m: BasisMonomial, coeff: MultiPoly| {
            if m.power + 1 >= n {
                return;
            }
            let shifted = BasisMonomial::new(m.component, m.power + 1);
            if let Some(i) = ref_pos(&shifted) {
                ref_c[i] = &ref_c[i] + &coeff;
            } else if let Some(k) = comp_pos(&shifted) {
                comp_c[k] = &comp_c[k] + &coeff;
            }
        };
        place(chart.reference[j], MultiPoly::one(vars, field));
        for (k, m) in chart.complement.iter().enumerate() {
            place(*m, x(j, k)?);
        }
        for (k, d) in comp_c.iter().enumerate() {
            let mut eq = d.clone();
            for (i, c) in ref_c.iter().enumerate() {
                eq = &eq - &(c * &x(i, k)?);
            }
            equations.push(eq);
        }
    }
    PolynomialSystem::new(vars.clone(), equations)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    pub var: String,
    /// Index of the solved equation in the input system.
    pub equation: usize,
    pub value: MultiPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub trace: Vec<EliminationStep>,
    /// Final values of the eliminated variables in the residual variables.
    pub substitutions: BTreeMap<String, MultiPoly>,
    pub residual: PolynomialSystem,
}

fn lone_linear_coefficient(eq: &MultiPoly, vi: usize) -> Option<Scalar> {
    let mut coeff = None;
    for (m, c) in eq.terms() {
        if m.0[vi] == 0 {
            continue;
        }
        let lone = m.0[vi] == 1 && m.degree() == 1;
        if !lone {
            return None;
        }
        coeff = Some(c.clone());
    }
    coeff
}

/// Solves the named variables in order, each from the first equation in
/// which it is a lone linear term with constant coefficient.
pub fn eliminate_linear(system: &PolynomialSystem, order: &[&str]) -> Result<Elimination> {
    let vars = &system.vars;
    let mut eqs: Vec<(usize, MultiPoly)> = system.equations.iter().cloned().enumerate().collect();
    let mut trace = Vec::new();
    let mut solved: Vec<(String, MultiPoly)> = Vec::new();
    for &v in order {
        let vi = crate::poly::index_of(vars, v)?;
        let pos = eqs
            .iter()
            .position(|(_, e)| lone_linear_coefficient(e, vi).is_some())
            .ok_or_else(|| Error::NotLinear(v.to_string()))?;
        let (idx, eq) = eqs.remove(pos);
        let c = lone_linear_coefficient(&eq, vi).expect("qualifying equation");
        let v_term = MultiPoly::var(vars, eq.field(), v)?.scale(&c);
        let value = (&eq - &v_term).scale(&(-&c.inv()?));
        let mut bind = BTreeMap::new();
        bind.insert(v.to_string(), value.clone());
        for (_, e) in eqs.iter_mut() {
            *e = e.substitute(&bind)?;
        }
        for (_, s) in solved.iter_mut() {
            *s = s.substitute(&bind)?;
        }
        trace.push(EliminationStep {
            var: v.to_string(),
            equation: idx,
            value: value.clone(),
        });
        solved.push((v.to_string(), value));
    }
    let remaining: Vec<String> = vars.iter().filter(|v| !order.contains(&v.as_str())).cloned().collect();
    let substitutions = solved
        .into_iter()
        .map(|(v, s)| Ok((v, s.reembed(&remaining)?)))
        .collect::<Result<_>>()?;
    let residual = PolynomialSystem::new(
        remaining.clone(),
        eqs.into_iter().map(|(_, e)| e.reembed(&remaining).map(|p| p.monic())).collect::<Result<_>>()?,
    )?;
    Ok(Elimination {
        trace,
        substitutions,
        residual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionVerdict {
    pub target: MultiPoly,
    pub images: Vec<MultiPoly>,
    /// `Some(c)` when the image equals c·target.
    pub multipliers: Vec<Option<Scalar>>,
    pub pass: bool,
}

/// Applies `extra` to every generator and checks each image is a scalar
/// multiple (possibly zero) of `target`.
pub fn reduce_with_substitution(residual: &PolynomialSystem, extra: &BTreeMap<String, MultiPoly>, target: &MultiPoly) -> Result<ReductionVerdict> {
    let mut images = Vec::new();
    let mut multipliers = Vec::new();
    for g in &residual.equations {
        let img = g.substitute(extra)?;
        let m = img.reembed(target.vars()).ok().and_then(|p| p.scalar_multiple_of(target));
        images.push(img);
        multipliers.push(m);
    }
    let pass = !target.is_zero() && multipliers.iter().all(Option::is_some);
    Ok(ReductionVerdict {
        target: target.clone(),
        images,
        multipliers,
        pass,
    })
}

fn check_budget(q: u32, nvars: usize) -> Result<u64> {
    let total = (q as u128).checked_pow(nvars as u32).unwrap_or(u128::MAX);
    let budget = budget_from_env();
    if total > budget {
        return Err(Error::BudgetExceeded {
            candidates: total,
            budget,
            suggested_shards: total.div_ceil(budget.max(1)),
        });
    }
    Ok(total as u64)
}

fn decode(mut idx: u64, q: u32, out: &mut [u32]) {
    for v in out.iter_mut() {
        *v = (idx % q as u64) as u32;
        idx /= q as u64;
    }
}

/// 𝔽_q-points where the hypersurface and all its partials vanish.
pub fn singular_points_ff(hypersurface: &MultiPoly, q: u32) -> Result<Vec<Vec<u32>>> {
    let field = Field::prime(q as u64)?;
    let h = hypersurface.to_field(field)?;
    let nv = h.vars().len();
    let total = check_budget(q, nv)?;
    let mut polys = vec![h.clone()];
    for v in h.vars() {
        polys.push(h.partial_derivative(v)?);
    }
    let mut out = Vec::new();
    let mut pt = vec![0u32; nv];
    for idx in 0..total {
        decode(idx, q, &mut pt);
        if polys.iter().all(|p| p.eval_mod(&pt) == 0) {
            out.push(pt.clone());
        }
    }
    Ok(out)
}

/// Number of common 𝔽_q-zeros of the system.
pub fn chart_point_count_ff(system: &PolynomialSystem, q: u32) -> Result<u64> {
    let field = Field::prime(q as u64)?;
    let sys = system.to_field(field)?;
    let nv = sys.vars.len();
    let total = check_budget(q, nv)?;
    Ok(sum_range(Execution::Parallel, total, |idx| {
        let mut pt = vec![0u32; nv];
        decode(idx, q, &mut pt);
        sys.equations.iter().all(|e| e.eval_mod(&pt) == 0) as u64
    }))
}

/// All 𝔽_q-points of the system (row-major chart values).
pub fn chart_points_ff(system: &PolynomialSystem, q: u32) -> Result<Vec<Vec<u32>>> {
    let field = Field::prime(q as u64)?;
    let sys = system.to_field(field)?;
    let nv = sys.vars.len();
    let total = check_budget(q, nv)?;
    let mut pt = vec![0u32; nv];
    let mut out = Vec::new();
    for idx in 0..total {
        decode(idx, q, &mut pt);
        if sys.equations.iter().all(|e| e.eval_mod(&pt) == 0) {
            out.push(pt.clone());
        }
    }
    Ok(out)
}

/// Elimination order, extra substitution and residual target for the
/// three-dimensional chart.
pub const N3_ORDER: [&str; 4] = ["d", "e", "f", "h"];
pub const N3_EXTRA: (&str, &str) = ("i", "-a");
pub const N3_TARGET: &str = "a^3 - g*(b - a*c)";

/// The 9 invariance equations as displayed for the chart of Span(ut, ut², vt²).
pub const N3_GOLDEN: &str = include_str!("../golden/chart_equations_n3.txt");

/// Reads a golden file: one equation per line, `#` comments ignored.
pub fn parse_golden(text: &str, vars: &[String], field: Field) -> Result<PolynomialSystem> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.trim_end_matches("= 0").trim_end_matches("=0").trim())
        .collect();
    PolynomialSystem::parse(&lines, vars, field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::var_names;

    const Q: Field = Field::Rationals;

    #[test]
    fn n3_chart_matches_displayed_equations() {
        let chart = ChartSpec::standard(3).unwrap();
        assert_eq!(chart.reference().iter().map(|m| m.to_string()).collect::<Vec<_>>(), ["ut", "ut^2", "vt^2"]);
        assert_eq!(chart.complement().iter().map(|m| m.to_string()).collect::<Vec<_>>(), ["u", "v", "vt"]);
        let sys = generate_invariance_equations(&chart, Q).unwrap();
        assert_eq!(sys.equations.len(), 9);
        let expected = PolynomialSystem::parse(
            &[
                "-a^2-d-g*c",
                "-a*b-e-c*h",
                "b-a*c-f-c*i",
                "-a*d-f*g",
                "-b*d-f*h",
                "e-c*d-f*i",
                "-a*g-g*i",
                "-b*g-h*i",
                "h-c*g-i^2",
            ],
            chart.vars(),
            Q,
        )
        .unwrap();
        // literal signs of the display, in order
        assert_eq!(sys, expected);
    }

    #[test]
    fn n1_and_n2_charts() {
        let chart = ChartSpec::standard(1).unwrap();
        assert!(generate_invariance_equations(&chart, Q).unwrap().equations.is_empty());

        let chart = ChartSpec::new(
            2,
            vec![BasisMonomial::new(0, 1), BasisMonomial::new(1, 1)],
            vec![BasisMonomial::new(0, 0), BasisMonomial::new(1, 0)],
            var_names(&["a", "b", "c", "d"]),
        )
        .unwrap();
        assert_eq!(chart, ChartSpec::standard(2).unwrap());
        let sys = generate_invariance_equations(&chart, Q).unwrap();
        let expected = PolynomialSystem::parse(&["a^2+b*c", "b*(a+d)", "c*(a+d)", "c*b+d^2"], chart.vars(), Q).unwrap();
        assert!(sys.same_up_to_normalization(&expected));
    }

    #[test]
    fn invalid_chart() {
        let dup = ChartSpec::new(
            1,
            vec![BasisMonomial::new(0, 0)],
            vec![BasisMonomial::new(0, 0)],
            var_names(&["a"]),
        );
        assert!(matches!(dup, Err(Error::NotABasis(_))));
    }

    #[test]
    fn elimination_pipeline() {
        let chart = ChartSpec::standard(3).unwrap();
        let sys = generate_invariance_equations(&chart, Q).unwrap();
        let el = eliminate_linear(&sys, &N3_ORDER).unwrap();
        let rv = &el.residual.vars;
        assert_eq!(rv, &var_names(&["a", "b", "c", "g", "i"]));
        let p = |s: &str| parse_poly(s, rv, Q).unwrap();
        assert_eq!(el.substitutions["d"], p("-a^2 - g*c"));
        assert_eq!(el.substitutions["f"], p("b - a*c - c*i"));
        assert_eq!(el.substitutions["h"], p("c*g + i^2"));
        assert_eq!(el.substitutions["e"], p("-a*b - c*(c*g + i^2)"));
        assert_eq!(el.trace.iter().map(|s| s.equation).collect::<Vec<_>>(), vec![0, 1, 2, 8]);
        let res = &el.residual.equations;
        assert!(res.contains(&p("g*(a+i)").monic()));
        assert!(res.contains(&p("(a+i)*(b-a*c)").monic()));

        let mut extra = BTreeMap::new();
        extra.insert("i".to_string(), p("-a"));
        let target = parse_poly(N3_TARGET, rv, Q).unwrap();
        let v = reduce_with_substitution(&el.residual, &extra, &target).unwrap();
        assert!(v.pass);
        let allowed = [Scalar::from_int(Q, 0), Scalar::from_int(Q, 1), Scalar::from_int(Q, -1)];
        assert!(v.multipliers.iter().all(|m| allowed.contains(m.as_ref().unwrap())));
        let idx = res.iter().position(|e| *e == p("a^3 + 2*a*c*g - b*g + c*g*i")).unwrap();
        assert_eq!(v.multipliers[idx], Some(Scalar::from_int(Q, 1)));
        let idx = res.iter().position(|e| *e == p("b*g + c*g*i + i^3").monic()).unwrap();
        assert_eq!(v.multipliers[idx], Some(Scalar::from_int(Q, -1)));
    }

    #[test]
    fn elimination_small_cases() {
        let vars = var_names(&["x", "y"]);
        let sys = PolynomialSystem::parse(&["x+y", "y^2"], &vars, Q).unwrap();
        let el = eliminate_linear(&sys, &["x"]).unwrap();
        assert_eq!(el.substitutions["x"], parse_poly("-y", &var_names(&["y"]), Q).unwrap());
        assert_eq!(el.residual.equations, vec![parse_poly("y^2", &var_names(&["y"]), Q).unwrap()]);

        let sys = PolynomialSystem::parse(&["x^2+y"], &vars, Q).unwrap();
        assert_eq!(eliminate_linear(&sys, &["x"]), Err(Error::NotLinear("x".into())));
    }

    #[test]
    fn reduction_small_cases() {
        let y = var_names(&["y"]);
        let sys = PolynomialSystem::parse(&["y^2"], &y, Q).unwrap();
        let v = reduce_with_substitution(&sys, &BTreeMap::new(), &parse_poly("y^2", &y, Q).unwrap()).unwrap();
        assert!(v.pass);
        assert_eq!(v.multipliers, vec![Some(Scalar::from_int(Q, 1))]);

        let xy = var_names(&["x", "y"]);
        let sys = PolynomialSystem::parse(&["x"], &xy, Q).unwrap();
        let v = reduce_with_substitution(&sys, &BTreeMap::new(), &parse_poly("y", &xy, Q).unwrap()).unwrap();
        assert!(!v.pass);
    }

    #[test]
    fn singular_point_examples() {
        let abcg = var_names(&["a", "b", "c", "g"]);
        let f = parse_poly(N3_TARGET, &abcg, Q).unwrap();
        let pts = singular_points_ff(&f, 3).unwrap();
        assert_eq!(pts, vec![vec![0, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 2, 0]]);

        let quad = parse_poly("a^2+b^2+c^2+g^2", &abcg, Q).unwrap();
        assert_eq!(singular_points_ff(&quad, 3).unwrap(), vec![vec![0, 0, 0, 0]]);
        assert!(singular_points_ff(&parse_poly("a", &abcg, Q).unwrap(), 3).unwrap().is_empty());
    }

    #[test]
    fn point_count_examples() {
        let chart = ChartSpec::standard(2).unwrap();
        let sys = generate_invariance_equations(&chart, Q).unwrap();
        assert_eq!(chart_point_count_ff(&sys, 2).unwrap(), 4);
        let empty = PolynomialSystem::new(var_names(&["x", "y"]), vec![]).unwrap();
        assert_eq!(chart_point_count_ff(&empty, 3).unwrap(), 9);
    }

    #[test]
    fn golden_file_matches_generated() {
        let chart = ChartSpec::standard(3).unwrap();
        let golden = parse_golden(N3_GOLDEN, chart.vars(), Q).unwrap();
        let sys = generate_invariance_equations(&chart, Q).unwrap();
        assert!(sys.same_up_to_normalization(&golden));
    }
}
