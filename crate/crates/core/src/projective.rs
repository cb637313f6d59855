//! Rational maps of projective space given by homogeneous coordinates, the
//! degree-3 involution φ of ℙ³, divisor pullbacks and discrepancy bookkeeping.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{determinant, var_names, BinaryForm, Monomial, MultiPoly};
use crate::scalar::{Field, Scalar};

pub fn source_vars() -> Vec<String> {
    var_names(&["m1", "m2", "m3", "m4"])
}

pub fn target_vars() -> Vec<String> {
    var_names(&["l1", "l2", "l3", "l4"])
}

/// A rational map (f₀ : … : f_N) from ℙ(source) to ℙ(target). Coordinates
/// are homogeneous of one degree and carry no common monomial factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveMap {
    source: Vec<String>,
    target: Vec<String>,
    coords: Vec<MultiPoly>,
    degree: u32,
}

/// Splits off the largest monomial dividing every coordinate.
fn monomial_content(coords: &[MultiPoly]) -> Monomial {
    let nv = coords[0].vars().len();
    let mut min = vec![u32::MAX; nv];
    for c in coords {
        for (m, _) in c.terms() {
            for (lo, &e) in min.iter_mut().zip(&m.0) {
                *lo = (*lo).min(e);
            }
        }
    }
    Monomial(min.into_iter().map(|e| if e == u32::MAX { 0 } else { e }).collect())
}

fn divide_all(coords: &[MultiPoly], d: &MultiPoly) -> Result<Option<Vec<MultiPoly>>> {
    let mut out = Vec::with_capacity(coords.len());
    for c in coords {
        match c.exact_divide(d)? {
            Some(q) => out.push(q),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

impl ProjectiveMap {
    pub fn new(source: Vec<String>, target: Vec<String>, coords: Vec<MultiPoly>) -> Result<ProjectiveMap> {
        Ok(ProjectiveMap::with_content(source, target, coords)?.0)
    }

    /// Builds the map and returns the monomial content that was removed.
    fn with_content(source: Vec<String>, target: Vec<String>, coords: Vec<MultiPoly>) -> Result<(ProjectiveMap, MultiPoly)> {
        if coords.len() != target.len() {
            return Err(Error::Shape(format!("{} coordinates for {} target variables", coords.len(), target.len())));
        }
        if coords.iter().all(MultiPoly::is_zero) {
            return Err(Error::ZeroMap);
        }
        for c in &coords {
            if c.vars() != source.as_slice() {
                return Err(Error::VariableMismatch(format!("coordinate {c} is not over {source:?}")));
            }
        }
        let field = coords[0].field();
        let content = MultiPoly::monomial(&source, monomial_content(&coords), Scalar::one(field));
        let coords = divide_all(&coords, &content)?.expect("monomial content divides");
        let degree = coords.iter().find_map(MultiPoly::total_degree).unwrap_or(0);
        for c in &coords {
            if !c.is_homogeneous() || c.total_degree().is_some_and(|d| d != degree) {
                return Err(Error::NotHomogeneous(format!("coordinate {c} is not a form of degree {degree}")));
            }
        }
        Ok((ProjectiveMap { source, target, coords, degree }, content))
    }

    /// (m₁ : m₂ : m₃ : m₄) ↦ (m₁²m₄ : −m₁m₂m₄ : m₂²m₄ − m₁m₃m₄ : m₁³) over ℚ.
    pub fn phi_standard() -> ProjectiveMap {
        let src = source_vars();
        let coords = ["m1^2*m4", "-m1*m2*m4", "m2^2*m4 - m1*m3*m4", "m1^3"]
            .iter()
            .map(|s| parse_poly(s, &src, Field::Rationals).expect("valid literal"))
            .collect();
        ProjectiveMap::new(src, target_vars(), coords).expect("valid map")
    }

    pub fn identity(source: Vec<String>, target: Vec<String>, field: Field) -> Result<ProjectiveMap> {
        let coords = source.iter().map(|v| MultiPoly::var(&source, field, v)).collect::<Result<_>>()?;
        ProjectiveMap::new(source, target, coords)
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn coords(&self) -> &[MultiPoly] {
        &self.coords
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    /// The same map written in other variable names.
    pub fn relabel(&self, source: &[String], target: &[String]) -> Result<ProjectiveMap> {
        if source.len() != self.source.len() || target.len() != self.target.len() {
            return Err(Error::Shape("relabelling must keep the number of variables".into()));
        }
        let bind: BTreeMap<String, MultiPoly> = self
            .source
            .iter()
            .zip(source)
            .map(|(o, n)| Ok((o.clone(), MultiPoly::var(source, self.field(), n)?)))
            .collect::<Result<_>>()?;
        let coords = self
            .coords
            .iter()
            .map(|c| c.substitute(&bind)?.reembed(source))
            .collect::<Result<_>>()?;
        ProjectiveMap::new(source.to_vec(), target.to_vec(), coords)
    }

    /// Coordinate values at a point; `None` where every coordinate vanishes.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        let v: Vec<Scalar> = self.coords.iter().map(|c| c.eval(point)).collect::<Result<_>>()?;
        Ok((!v.iter().all(Scalar::is_zero)).then_some(v))
    }

    /// Equal up to a common nonzero scalar.
    pub fn projectively_equal(&self, o: &ProjectiveMap) -> bool {
        if self.source != o.source || self.target != o.target || self.coords.len() != o.coords.len() {
            return false;
        }
        let Some(i) = self.coords.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let Some(c) = o.coords[i].scalar_multiple_of(&self.coords[i]) else {
            return false;
        };
        !c.is_zero() && self.coords.iter().zip(&o.coords).all(|(a, b)| a.scale(&c) == *b)
    }

    pub fn is_identity(&self) -> bool {
        ProjectiveMap::identity(self.source.clone(), self.source.clone(), self.field())
            .map(|id| self.source == self.target && self.projectively_equal(&id))
            .unwrap_or(false)
    }

    /// Pulls a polynomial in the target variables back to the source.
    pub fn pull_back(&self, p: &MultiPoly) -> Result<MultiPoly> {
        if p.vars() != self.target.as_slice() {
            return Err(Error::VariableMismatch(format!("{p} is not over {:?}", self.target)));
        }
        let bind: BTreeMap<String, MultiPoly> = self.target.iter().cloned().zip(self.coords.iter().cloned()).collect();
        p.substitute(&bind)?.reembed(&self.source)
    }
}

impl fmt::Display for ProjectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({}) -> ({})", self.source.join(":"), s.join(" : "))
    }
}

/// The primes m₁, m₄ and m₂² − m₁m₃ written in the given four variables.
pub fn default_known_primes(vars: &[String], field: Field) -> Result<Vec<MultiPoly>> {
    if vars.len() != 4 {
        return Ok(Vec::new());
    }
    let v = |i: usize| MultiPoly::var(vars, field, &vars[i]);
    let g = &v(1)?.pow(2) - &(&v(0)? * &v(2)?);
    Ok(vec![v(0)?, v(3)?, g])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Composition {
    pub map: ProjectiveMap,
    /// Product of everything divided out of the substituted coordinates.
    pub cleared_factor: MultiPoly,
}

/// f ∘ g with the default list of known primes.
pub fn compose(f: &ProjectiveMap, g: &ProjectiveMap) -> Result<Composition> {
    compose_with(f, g, &default_known_primes(&g.source, g.field())?)
}

/// f ∘ g: substitute, remove the monomial content, then divide out any
/// known prime that divides every coordinate.
pub fn compose_with(f: &ProjectiveMap, g: &ProjectiveMap, known: &[MultiPoly]) -> Result<Composition> {
    if g.target != f.source {
        return Err(Error::VariableMismatch(format!("cannot compose: {:?} vs {:?}", g.target, f.source)));
    }
    let raw: Vec<MultiPoly> = f.coords.iter().map(|c| g.pull_back(&c.reembed(&g.target)?)).collect::<Result<_>>()?;
    let (mut map, mut cleared) = ProjectiveMap::with_content(g.source.clone(), f.target.clone(), raw)?;
    for p in known {
        while let Some(coords) = divide_all(&map.coords, p)? {
            map.coords = coords;
            cleared = &cleared * p;
        }
    }
    map.degree = map.coords.iter().find_map(MultiPoly::total_degree).unwrap_or(0);
    Ok(Composition { map, cleared_factor: cleared })
}

/// A named prime divisor; formal symbols (canonical classes, placeholders)
/// have no equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeDivisor {
    pub name: String,
    pub equation: Option<MultiPoly>,
    pub degree: i64,
}

impl PrimeDivisor {
    pub fn new(name: &str, equation: MultiPoly) -> Result<PrimeDivisor> {
        if !equation.is_homogeneous() || equation.is_constant() {
            return Err(Error::NotHomogeneous(format!("{name}: {equation}")));
        }
        let degree = equation.total_degree().unwrap_or(0) as i64;
        Ok(PrimeDivisor {
            name: name.to_string(),
            equation: Some(equation),
            degree,
        })
    }

    pub fn formal(name: &str, degree: i64) -> PrimeDivisor {
        PrimeDivisor {
            name: name.to_string(),
            equation: None,
            degree,
        }
    }
}

fn name_rank(name: &str) -> (u8, String) {
    let class = match name {
        "K_X" => 0,
        "K_Y" => 1,
        _ if name.starts_with("A_") => 2,
        _ if name.starts_with("H_") => 3,
        "G" => 4,
        "P" => 5,
        _ => 6,
    };
    (class, name.to_string())
}

/// A formal integer combination of named divisors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorSum {
    terms: BTreeMap<(u8, String), i64>,
}

impl DivisorSum {
    pub fn new() -> DivisorSum {
        DivisorSum::default()
    }

    pub fn single(name: &str, coeff: i64) -> DivisorSum {
        let mut s = DivisorSum::new();
        s.add(name, coeff);
        s
    }

    pub fn add(&mut self, name: &str, coeff: i64) {
        let k = name_rank(name);
        let v = self.terms.entry(k.clone()).or_insert(0);
        *v += coeff;
        if *v == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn add_sum(&mut self, o: &DivisorSum) {
        for ((_, n), c) in &o.terms {
            self.add(n, *c);
        }
    }

    pub fn coefficient(&self, name: &str) -> i64 {
        self.terms.get(&name_rank(name)).copied().unwrap_or(0)
    }

    /// Nonzero terms in display order.
    pub fn terms(&self) -> impl Iterator<Item = (&str, i64)> {
        self.terms.iter().map(|((_, n), c)| (n.as_str(), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for DivisorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (n, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else { "+" };
            match (i, c.abs()) {
                (0, 1) if c < 0 => write!(f, "-{n}")?,
                (0, 1) => write!(f, "{n}")?,
                (0, a) if c < 0 => write!(f, "-{a}{n}")?,
                (0, a) => write!(f, "{a}{n}")?,
                (_, 1) => write!(f, " {sign} {n}")?,
                (_, a) => write!(f, " {sign} {a}{n}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for DivisorSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The named divisors of the ledger: Aᵢ: mᵢ = 0, Hᵢ: lᵢ = 0,
/// G: m₂² − m₁m₃ = 0, the placeholder P and the canonical symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorLedger {
    pub divisors: Vec<PrimeDivisor>,
}

impl DivisorLedger {
    pub fn standard() -> DivisorLedger {
        let f = Field::Rationals;
        let (m, l) = (source_vars(), target_vars());
        let mut divisors = Vec::new();
        for i in 0..4 {
            divisors.push(PrimeDivisor::new(&format!("A_{}", i + 1), MultiPoly::var(&m, f, &m[i]).unwrap()).unwrap());
        }
        for i in 0..4 {
            divisors.push(PrimeDivisor::new(&format!("H_{}", i + 1), MultiPoly::var(&l, f, &l[i]).unwrap()).unwrap());
        }
        divisors.push(PrimeDivisor::new("G", parse_poly("m2^2 - m1*m3", &m, f).unwrap()).unwrap());
        divisors.push(PrimeDivisor::formal("P", 2));
        divisors.push(PrimeDivisor::formal("K_X", -4));
        divisors.push(PrimeDivisor::formal("K_Y", -4));
        DivisorLedger { divisors }
    }

    pub fn get(&self, name: &str) -> Option<&PrimeDivisor> {
        self.divisors.iter().find(|d| d.name == name)
    }

    /// The source-side primes with equations (A₁…A₄, G).
    pub fn source_candidates(&self) -> Vec<PrimeDivisor> {
        self.divisors
            .iter()
            .filter(|d| d.equation.as_ref().is_some_and(|e| e.vars() == source_vars().as_slice()))
            .cloned()
            .collect()
    }

    /// Σ coefficient · degree; errors on a name missing from the ledger.
    pub fn degree(&self, s: &DivisorSum) -> Result<i64> {
        s.terms()
            .map(|(n, c)| {
                self.get(n)
                    .map(|d| c * d.degree)
                    .ok_or_else(|| Error::LedgerViolation(format!("unknown divisor {n}")))
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pullback {
    pub divisor: DivisorSum,
    /// Degree of the pulled-back equation.
    pub degree: i64,
    /// Σ multiplicity · degree over the candidates.
    pub accounted_degree: i64,
    /// What is left after dividing out the candidates; a nonzero constant.
    pub cofactor: MultiPoly,
}

/// Decomposes the divisor of `prime ∘ f` along the candidates.
pub fn pullback_divisor(f: &ProjectiveMap, prime: &MultiPoly, candidates: &[PrimeDivisor]) -> Result<Pullback> {
    let pulled = f.pull_back(prime)?;
    if pulled.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree = pulled.total_degree().unwrap_or(0) as i64;
    let mut rest = pulled;
    let mut divisor = DivisorSum::new();
    let mut accounted = 0;
    for c in candidates {
        let Some(eq) = &c.equation else { continue };
        let eq = eq.reembed(&f.source)?;
        let k = rest.multiplicity_along(&eq)?;
        for _ in 0..k {
            rest = rest.exact_divide(&eq)?.expect("multiplicity counted");
        }
        if k > 0 {
            divisor.add(&c.name, k as i64);
            accounted += k as i64 * c.degree;
        }
    }
    if !rest.is_constant() {
        return Err(Error::IncompleteCandidates(rest.to_string()));
    }
    Ok(Pullback {
        divisor,
        degree,
        accounted_degree: accounted,
        cofactor: rest,
    })
}

/// The four pullbacks φ*Hᵢ, in order.
pub fn phi_pullback_table(f: &ProjectiveMap, ledger: &DivisorLedger) -> Result<Vec<(String, Pullback)>> {
    let cands = ledger.source_candidates();
    (1..=4)
        .map(|i| {
            let name = format!("H_{i}");
            let eq = ledger.get(&name).and_then(|d| d.equation.clone()).expect("standard ledger");
            Ok((name, pullback_divisor(f, &eq, &cands)?))
        })
        .collect()
}

fn dehomogenize(p: &MultiPoly, var: &str, affine: &[String]) -> Result<MultiPoly> {
    let mut bind = BTreeMap::new();
    bind.insert(var.to_string(), MultiPoly::one(p.vars(), p.field()));
    p.substitute(&bind)?.reembed(affine)
}

/// The Jacobian of the map on affine charts, as a numerator and the
/// denominator D with J = numerator / D^(2N).
struct ChartJacobian {
    numerator: MultiPoly,
    denominator: MultiPoly,
    power: u32,
    prime: MultiPoly,
}

fn chart_jacobian(f: &ProjectiveMap, prime: &MultiPoly, source_chart: usize, target_chart: usize) -> Result<ChartJacobian> {
    let ns = f.source.len();
    if source_chart >= ns || target_chart >= f.target.len() || f.target.len() != ns {
        return Err(Error::Shape("chart index out of range or map not between spaces of equal dimension".into()));
    }
    let chart_var = f.source[source_chart].clone();
    let affine: Vec<String> = f.source.iter().filter(|v| **v != chart_var).cloned().collect();
    let prime = dehomogenize(&prime.reembed(&f.source)?, &chart_var, &affine)?;
    if prime.is_constant() {
        return Err(Error::ChartMissesDivisor);
    }
    let dh: Vec<MultiPoly> = f.coords.iter().map(|c| dehomogenize(c, &chart_var, &affine)).collect::<Result<_>>()?;
    let d = dh[target_chart].clone();
    if d.is_zero() {
        return Err(Error::DegenerateChart);
    }
    let rows: Vec<Vec<MultiPoly>> = dh
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != target_chart)
        .map(|(_, n)| {
            affine
                .iter()
                .map(|v| Ok(&(&n.partial_derivative(v)? * &d) - &(n * &d.partial_derivative(v)?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let numerator = determinant(&rows);
    if numerator.is_zero() {
        return Err(Error::DegenerateChart);
    }
    Ok(ChartJacobian {
        numerator,
        denominator: d,
        power: 2 * affine.len() as u32,
        prime,
    })
}

/// Order of vanishing along `prime` (source variables) of the Jacobian
/// determinant of the dehomogenized map, numerator order minus denominator
/// order.
pub fn jacobian_order(f: &ProjectiveMap, prime: &MultiPoly, source_chart: usize, target_chart: usize) -> Result<i64> {
    let j = chart_jacobian(f, prime, source_chart, target_chart)?;
    Ok(j.numerator.multiplicity_along(&j.prime)? as i64 - j.power as i64 * j.denominator.multiplicity_along(&j.prime)? as i64)
}

/// Raw data along one exceptional prime: the Jacobian order and the
/// multiplicity of the target chart coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianData {
    pub divisor: String,
    pub source_chart: usize,
    pub target_chart: usize,
    pub jacobian_order: i64,
    pub chart_multiplicity: i64,
}

impl JacobianData {
    /// Coefficient of the prime in φ*K_Y − K_X, with the canonical form of
    /// the target chart having a pole of order N + 1 along its hyperplane.
    pub fn coefficient(&self, ambient_dim: usize) -> i64 {
        -((ambient_dim as i64 + 1) * self.chart_multiplicity) - self.jacobian_order
    }
}

pub fn jacobian_data(f: &ProjectiveMap, divisor: &PrimeDivisor, source_chart: usize, target_chart: usize) -> Result<JacobianData> {
    let eq = divisor
        .equation
        .as_ref()
        .ok_or_else(|| Error::LedgerViolation(format!("{} has no equation", divisor.name)))?;
    let j = chart_jacobian(f, eq, source_chart, target_chart)?;
    let order = j.numerator.multiplicity_along(&j.prime)? as i64 - j.power as i64 * j.denominator.multiplicity_along(&j.prime)? as i64;
    Ok(JacobianData {
        divisor: divisor.name.clone(),
        source_chart,
        target_chart,
        jacobian_order: order,
        chart_multiplicity: j.denominator.multiplicity_along(&j.prime)? as i64,
    })
}

/// Discrepancy coefficient of `divisor` on the given charts.
pub fn discrepancy_coefficient(f: &ProjectiveMap, divisor: &PrimeDivisor, source_chart: usize, target_chart: usize) -> Result<i64> {
    Ok(jacobian_data(f, divisor, source_chart, target_chart)?.coefficient(f.source.len() - 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerReport {
    /// Coefficients of the exceptional primes in φ*K_Y = K_X + Σ cE.
    pub exceptional: Vec<(String, i64)>,
    /// φ*(K_Y + Σ Hᵢ) written on the source.
    pub total: DivisorSum,
    pub degree: i64,
    pub degree_identity: bool,
    pub exceptional_sum: i64,
    pub exceptional_expected: i64,
    pub constraint: bool,
}

impl LedgerReport {
    pub fn verify(&self) -> Result<()> {
        if !self.degree_identity {
            return Err(Error::LedgerViolation(format!("degree identity: {} ≠ 0", self.degree)));
        }
        if !self.constraint {
            return Err(Error::LedgerViolation(format!(
                "coefficient constraint: {} ≠ {}",
                self.exceptional_sum, self.exceptional_expected
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LedgerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, c) in &self.exceptional {
            writeln!(f, "  coefficient of {n}: {c}")?;
        }
        writeln!(f, "  pullback of K_Y + H_1 + H_2 + H_3 + H_4 = {}", self.total)?;
        writeln!(f, "  degree: {} ({})", self.degree, if self.degree_identity { "ok" } else { "violated" })?;
        write!(
            f,
            "  exceptional coefficients sum to {} (expected {})",
            self.exceptional_sum, self.exceptional_expected
        )
    }
}

/// Forms K_X + Σ pullbacks + Σ cE·E and checks that its degree vanishes and
/// that the exceptional coefficients make up the degree the rest lacks.
pub fn discrepancy_ledger(ledger: &DivisorLedger, pullbacks: &[DivisorSum], exceptional: &[(String, i64)]) -> Result<LedgerReport> {
    let mut total = DivisorSum::single("K_X", 1);
    for p in pullbacks {
        total.add_sum(p);
    }
    for (n, c) in exceptional {
        total.add(n, *c);
    }
    let degree = ledger.degree(&total)?;
    let is_exc = |n: &str| exceptional.iter().any(|(e, _)| e == n);
    let mut rest_degree = 0;
    let mut exceptional_sum = 0;
    for (n, c) in total.terms() {
        let d = ledger.get(n).map(|d| d.degree).unwrap_or(0);
        if is_exc(n) {
            exceptional_sum += c * d;
        } else {
            rest_degree += c * d;
        }
    }
    let exceptional_expected = -rest_degree;
    Ok(LedgerReport {
        exceptional: exceptional.to_vec(),
        total,
        degree,
        degree_identity: degree == 0,
        exceptional_sum,
        exceptional_expected,
        constraint: exceptional_sum == exceptional_expected,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiAnalysis {
    pub composition: Composition,
    pub involution: bool,
    pub pullbacks: Vec<(String, Pullback)>,
    pub jacobian: Vec<JacobianData>,
    pub ledger: LedgerReport,
}

/// The complete φ computation: involution, pullback table, Jacobian data
/// along A₁ (charts m₄, l₄) and A₄ (charts m₃, l₄), and the ledger.
pub fn analyze_phi() -> Result<PhiAnalysis> {
    let phi = ProjectiveMap::phi_standard();
    let back = phi.relabel(&target_vars(), &source_vars())?;
    let composition = compose(&back, &phi)?;
    let involution = composition.map.is_identity();
    let ledger = DivisorLedger::standard();
    let pullbacks = phi_pullback_table(&phi, &ledger)?;
    let jacobian = vec![
        jacobian_data(&phi, ledger.get("A_1").unwrap(), 3, 3)?,
        jacobian_data(&phi, ledger.get("A_4").unwrap(), 2, 3)?,
    ];
    let exceptional: Vec<(String, i64)> = jacobian.iter().map(|j| (j.divisor.clone(), j.coefficient(3))).collect();
    let sums: Vec<DivisorSum> = pullbacks.iter().map(|(_, p)| p.divisor.clone()).collect();
    let report = discrepancy_ledger(&ledger, &sums, &exceptional)?;
    Ok(PhiAnalysis {
        composition,
        involution,
        pullbacks,
        jacobian,
        ledger: report,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjugateVerdict {
    pub det: MultiPoly,
    pub pass: bool,
}

/// Checks adj(M)·M = det(M)·I for a 2×2 matrix of binary forms.
pub fn adjugate_compose_check(mat: &[Vec<BinaryForm>]) -> Result<AdjugateVerdict> {
    if mat.len() != 2 || mat.iter().any(|r| r.len() != 2) {
        return Err(Error::Shape("adjugate check needs a 2x2 matrix".into()));
    }
    let e = |i: usize, j: usize| mat[i][j].poly();
    if mat[0][0].degree() + mat[1][1].degree() != mat[0][1].degree() + mat[1][0].degree() {
        return Err(Error::InhomogeneousDeterminant);
    }
    let det = &(e(0, 0) * e(1, 1)) - &(e(0, 1) * e(1, 0));
    let adj = [[e(1, 1).clone(), -e(0, 1)], [-e(1, 0), e(0, 0).clone()]];
    let zero = MultiPoly::zero(det.vars(), det.field());
    let mut pass = true;
    for (i, adj_row) in adj.iter().enumerate() {
        for j in 0..2 {
            let prod = &(&adj_row[0] * e(0, j)) + &(&adj_row[1] * e(1, j));
            let want = if i == j { &det } else { &zero };
            pass &= prod == *want;
        }
    }
    Ok(AdjugateVerdict { det, pass })
}

/// Order at s = 0 of `p` restricted to the line `point + s·direction`
/// (over a prime field); `None` when the restriction vanishes identically.
pub fn order_along_line(p: &MultiPoly, point: &[u32], direction: &[u32]) -> Result<Option<u32>> {
    let Field::Prime(q) = p.field() else {
        return Err(Error::FieldMismatch(p.field(), Field::Rationals));
    };
    let s = var_names(&["s"]);
    let field = p.field();
    let bind: BTreeMap<String, MultiPoly> = p
        .vars()
        .iter()
        .zip(point.iter().zip(direction))
        .map(|(v, (&a, &b))| {
            let c = MultiPoly::constant(&s, Scalar::from_int(field, (a % q) as i64));
            let t = MultiPoly::var(&s, field, "s").map(|x| x.scale(&Scalar::from_int(field, (b % q) as i64)))?;
            Ok((v.clone(), &c + &t))
        })
        .collect::<Result<_>>()?;
    let r = p.substitute(&bind)?.reembed(&s)?;
    Ok(r.terms().map(|(m, _)| m.0[0]).min())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn m(s: &str) -> MultiPoly {
        parse_poly(s, &source_vars(), Q).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(Q, x)).collect()
    }

    #[test]
    fn phi_literal_and_values() {
        let phi = ProjectiveMap::phi_standard();
        assert_eq!(phi.degree(), 3);
        assert_eq!(phi.coords(), &[m("m1^2*m4"), m("-m1*m2*m4"), m("m2^2*m4 - m1*m3*m4"), m("m1^3")]);
        assert_eq!(phi.evaluate(&pt(&[1, 0, 0, 1])).unwrap(), Some(pt(&[1, 0, 0, 1])));
        assert_eq!(phi.evaluate(&pt(&[1, 1, 1, 1])).unwrap(), Some(pt(&[1, -1, 0, 1])));
        assert_eq!(phi.evaluate(&pt(&[0, 0, 1, 0])).unwrap(), None);
    }

    #[test]
    fn involution_and_cleared_factor() {
        let phi = ProjectiveMap::phi_standard();
        let back = phi.relabel(&target_vars(), &source_vars()).unwrap();
        let c = compose(&back, &phi).unwrap();
        assert!(c.map.is_identity());
        assert_eq!(c.cleared_factor, m("m1^6*m4^2"));

        let id_t = ProjectiveMap::identity(target_vars(), target_vars(), Q).unwrap();
        let id_s = ProjectiveMap::identity(source_vars(), source_vars(), Q).unwrap();
        assert_eq!(compose(&id_t, &phi).unwrap().map, phi);
        assert_eq!(compose(&phi, &id_s).unwrap().map, phi);
        assert!(matches!(compose(&phi, &phi), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn known_primes_are_cleared() {
        let src = source_vars();
        let g = m("m2^2 - m1*m3");
        let coords: Vec<MultiPoly> = ["m1", "m2", "m3", "m4"].iter().map(|v| &m(v) * &g).collect();
        let f = ProjectiveMap {
            source: src.clone(),
            target: src.clone(),
            coords,
            degree: 3,
        };
        let id = ProjectiveMap::identity(src.clone(), src, Q).unwrap();
        let c = compose(&id, &f).unwrap();
        assert!(c.map.is_identity());
        assert_eq!(c.cleared_factor, g);
    }

    #[test]
    fn pullback_table() {
        let phi = ProjectiveMap::phi_standard();
        let ledger = DivisorLedger::standard();
        let table = phi_pullback_table(&phi, &ledger).unwrap();
        let shown: Vec<String> = table.iter().map(|(_, p)| p.divisor.to_string()).collect();
        assert_eq!(shown, ["2A_1 + A_4", "A_1 + A_2 + A_4", "A_4 + G", "3A_1"]);
        for (_, p) in &table {
            assert_eq!(p.accounted_degree, 3);
            assert_eq!(p.degree, 3);
            assert!(p.cofactor.is_constant());
        }

        let id = ProjectiveMap::identity(source_vars(), target_vars(), Q).unwrap();
        let h1 = ledger.get("H_1").unwrap().equation.clone().unwrap();
        let p = pullback_divisor(&id, &h1, &ledger.source_candidates()).unwrap();
        assert_eq!(p.divisor.to_string(), "A_1");

        let only_a1 = vec![ledger.get("A_1").unwrap().clone()];
        assert!(matches!(pullback_divisor(&phi, &h1, &only_a1), Err(Error::IncompleteCandidates(_))));
    }

    #[test]
    fn jacobian_orders() {
        let phi = ProjectiveMap::phi_standard();
        assert_eq!(jacobian_order(&phi, &m("m1"), 3, 3).unwrap(), -6);
        assert_eq!(jacobian_order(&phi, &m("m4"), 2, 3).unwrap(), 2);
        assert_eq!(jacobian_order(&phi, &m("m1"), 3, 0).unwrap(), -2);
        assert_eq!(jacobian_order(&phi, &m("m4"), 3, 3), Err(Error::ChartMissesDivisor));

        let id = ProjectiveMap::identity(source_vars(), target_vars(), Q).unwrap();
        for (p, s, t) in [("m1", 3, 3), ("m4", 0, 0), ("m2^2 - m1*m3", 3, 1)] {
            assert_eq!(jacobian_order(&id, &m(p), s, t).unwrap(), 0);
        }
    }

    #[test]
    fn discrepancy_is_chart_independent() {
        let phi = ProjectiveMap::phi_standard();
        let ledger = DivisorLedger::standard();
        let a1 = ledger.get("A_1").unwrap();
        let a4 = ledger.get("A_4").unwrap();
        assert_eq!(discrepancy_coefficient(&phi, a1, 3, 3).unwrap(), -6);
        assert_eq!(discrepancy_coefficient(&phi, a1, 3, 0).unwrap(), -6);
        assert_eq!(discrepancy_coefficient(&phi, a1, 2, 3).unwrap(), -6);
        assert_eq!(discrepancy_coefficient(&phi, a4, 2, 3).unwrap(), -2);
        assert_eq!(discrepancy_coefficient(&phi, a4, 0, 3).unwrap(), -2);

        let id = ProjectiveMap::identity(source_vars(), target_vars(), Q).unwrap();
        assert_eq!(discrepancy_coefficient(&id, a1, 3, 3).unwrap(), 0);
    }

    #[test]
    fn ledger() {
        let a = analyze_phi().unwrap();
        assert!(a.involution);
        assert_eq!(a.jacobian.iter().map(|j| j.jacobian_order).collect::<Vec<_>>(), [-6, 2]);
        assert_eq!(a.ledger.exceptional, vec![("A_1".to_string(), -6), ("A_4".to_string(), -2)]);
        assert_eq!(a.ledger.total.to_string(), "K_X + A_2 + A_4 + G");
        assert!(a.ledger.verify().is_ok());

        let ledger = DivisorLedger::standard();
        let sums: Vec<DivisorSum> = a.pullbacks.iter().map(|(_, p)| p.divisor.clone()).collect();
        let trivial = vec![("A_1".to_string(), 0), ("A_4".to_string(), 0)];
        let r = discrepancy_ledger(&ledger, &sums, &trivial).unwrap();
        assert_eq!((r.exceptional_sum, r.exceptional_expected), (9, 1));
        assert_eq!(r.verify(), Err(Error::LedgerViolation("degree identity: 8 ≠ 0".into())));
        assert!(!r.constraint);
    }

    #[test]
    fn divisor_sum_display() {
        let mut s = DivisorSum::single("G", 1);
        s.add("A_1", -6);
        s.add("K_X", 1);
        assert_eq!(s.to_string(), "K_X - 6A_1 + G");
        s.add("A_1", 6);
        assert_eq!(s.coefficient("A_1"), 0);
        assert_eq!(DivisorSum::new().to_string(), "0");
    }

    #[test]
    fn adjugate() {
        let xy = crate::poly::xy_vars();
        let f = |s: &str| BinaryForm::from_poly(parse_poly(s, &xy, Q).unwrap()).unwrap();
        let v = adjugate_compose_check(&[vec![f("x^2"), f("y^2")], vec![f("x"), f("y")]]).unwrap();
        assert!(v.pass);
        assert_eq!(v.det, parse_poly("x^2*y - x*y^2", &xy, Q).unwrap());
        let v = adjugate_compose_check(&[vec![f("1"), BinaryForm::zero(Q, 0)], vec![BinaryForm::zero(Q, 0), f("1")]]).unwrap();
        assert!(v.pass);
        assert_eq!(v.det, MultiPoly::one(&xy, Q));
        assert_eq!(
            adjugate_compose_check(&[vec![f("x^2"), f("y")], vec![f("x"), f("y")]]),
            Err(Error::InhomogeneousDeterminant)
        );
    }

    #[test]
    fn line_orders() {
        let f5 = Field::Prime(5);
        let p = parse_poly("m1^3*m4", &source_vars(), f5).unwrap();
        assert_eq!(order_along_line(&p, &[0, 1, 2, 1], &[1, 0, 0, 0]).unwrap(), Some(3));
        assert_eq!(order_along_line(&p, &[1, 1, 2, 1], &[1, 0, 0, 0]).unwrap(), Some(0));
        assert_eq!(order_along_line(&p, &[0, 1, 2, 1], &[0, 1, 0, 0]).unwrap(), None);
    }
}
