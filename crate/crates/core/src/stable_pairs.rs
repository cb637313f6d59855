//! Matrices of binary forms presenting stable pairs on ℙ¹, normal forms under
//! the automorphisms of the target bundle, and the invariant (det, β).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::linalg::{rank, rref, Matrix};
use crate::modules::{ModuleElement, SubmoduleBasis};
use crate::parse::parse_poly;
use crate::poly::{determinant, var_names, xy_vars, BinaryForm, MultiPoly};
use crate::scalar::{Field, Scalar};
use crate::truncated::TruncatedPoly;

/// A matrix of binary forms whose rows have fixed degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormMatrix {
    field: Field,
    rows: Vec<Vec<BinaryForm>>,
}

/// The two bundle shapes: 𝒪^{r−1} ⊕ 𝒪(n) with one row of degree-n forms
/// over r − 1 constant rows, and 𝒪(1) ⊕ 𝒪(2) with row degrees (2; 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairShape {
    Edge { r: usize, n: u32 },
    Deg3,
}

impl FormMatrix {
    pub fn new(rows: Vec<Vec<BinaryForm>>) -> Result<FormMatrix> {
        let first = rows.first().and_then(|r| r.first()).ok_or_else(|| Error::Shape("empty matrix".into()))?;
        let field = first.field();
        let cols = rows[0].len();
        for row in &rows {
            if row.len() != cols {
                return Err(Error::Shape("ragged rows".into()));
            }
            for e in row {
                field.check(&e.field())?;
                if e.degree() != row[0].degree() {
                    return Err(Error::NotHomogeneous(format!("row mixes degrees {} and {}", row[0].degree(), e.degree())));
                }
            }
        }
        Ok(FormMatrix { field, rows })
    }

    /// Rows of polynomial expressions with the given row degrees; zero
    /// entries take the degree of their row.
    pub fn from_exprs(rows: &[Vec<&str>], degrees: &[u32], field: Field) -> Result<FormMatrix> {
        if rows.len() != degrees.len() {
            return Err(Error::Shape(format!("{} rows for {} degrees", rows.len(), degrees.len())));
        }
        let xy = xy_vars();
        let rows = rows
            .iter()
            .zip(degrees)
            .map(|(row, &d)| {
                row.iter()
                    .map(|s| BinaryForm::new(parse_poly(s, &xy, field)?, d))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        FormMatrix::new(rows)
    }

    /// Parses one row per line, entries separated by commas; brackets and
    /// `#` comments are ignored. Degrees come from `shape`; for the edge
    /// shape the first-row degree is read off its nonzero entries.
    pub fn parse(text: &str, shape: &str, field: Field) -> Result<FormMatrix> {
        let rows: Vec<Vec<&str>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().trim_start_matches('[').trim_end_matches(']').trim())
            .filter(|l| !l.is_empty())
            .map(|l| l.split(',').map(str::trim).collect())
            .collect();
        if rows.is_empty() {
            return Err(Error::Shape("no rows".into()));
        }
        let degrees = match shape {
            "deg3" => vec![2, 1],
            "edge" => {
                let xy = xy_vars();
                let mut n = None;
                for s in &rows[0] {
                    if let Some(d) = parse_poly(s, &xy, field)?.total_degree() {
                        n = Some(d);
                        break;
                    }
                }
                let mut d = vec![n.unwrap_or(0)];
                d.resize(rows.len(), 0);
                d
            }
            other => return Err(Error::Shape(format!("unknown shape `{other}` (expected edge or deg3)"))),
        };
        FormMatrix::from_exprs(&rows, &degrees, field)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.rows[0].len())
    }

    pub fn rows(&self) -> &[Vec<BinaryForm>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BinaryForm {
        &self.rows[i][j]
    }

    pub fn row_degrees(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r[0].degree()).collect()
    }

    pub fn shape(&self) -> Result<PairShape> {
        let (nr, nc) = self.dims();
        let d = self.row_degrees();
        if nr != nc {
            return Err(Error::Shape(format!("{nr}x{nc} matrix is not square")));
        }
        if d == [2, 1] {
            return Ok(PairShape::Deg3);
        }
        if nr >= 2 && d[1..].iter().all(|&e| e == 0) {
            return Ok(PairShape::Edge { r: nr, n: d[0] });
        }
        Err(Error::Shape(format!("row degrees {d:?} match neither shape")))
    }

    pub fn determinant(&self) -> Result<MultiPoly> {
        let (nr, nc) = self.dims();
        if nr != nc {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let m: Vec<Vec<MultiPoly>> = self.rows.iter().map(|r| r.iter().map(|e| e.poly().clone()).collect()).collect();
        let det = determinant(&m);
        if !det.is_homogeneous() {
            return Err(Error::InhomogeneousDeterminant);
        }
        Ok(det)
    }

    fn constant_row(&self, i: usize) -> Vec<Scalar> {
        self.rows[i].iter().map(|e| e.coeffs()[0].clone()).collect()
    }
}

impl fmt::Display for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            let s: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", s.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for FormMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|e| e.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// Class of the β data: a row-reduced basis of the span of the constant
/// rows, or a normalized point of ℙ³.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BetaClass {
    Span(Matrix),
    Point(Vec<Scalar>),
}

impl fmt::Display for BetaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Scalar], sep: &str| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(sep);
        match self {
            BetaClass::Point(p) => write!(f, "({})", join(p, ":")),
            BetaClass::Span(rows) if rows.len() == 1 => write!(f, "[{}]", join(&rows[0], ":")),
            BetaClass::Span(rows) => {
                let r: Vec<String> = rows.iter().map(|r| format!("[{}]", join(r, ", "))).collect();
                write!(f, "span{{{}}}", r.join(", "))
            }
        }
    }
}

/// (det up to scale, β class).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PairInvariant {
    pub det: MultiPoly,
    pub beta: BetaClass,
}

impl fmt::Display for PairInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "det = {}, beta = {}", self.det, self.beta)
    }
}

/// Normal form for 𝒪^{r−1} ⊕ 𝒪(n): the β block in reduced echelon form
/// (leftmost pivots), the α row cleared at the pivot columns and scaled so
/// the determinant has leading coefficient 1.
pub fn edge_normal_form(mat: &FormMatrix) -> Result<(FormMatrix, PairInvariant)> {
    let PairShape::Edge { r, .. } = mat.shape()? else {
        return Err(Error::Shape("expected one form row over constant rows".into()));
    };
    let field = mat.field;
    let beta: Matrix = (1..r).map(|i| mat.constant_row(i)).collect();
    let (b, pivots) = rref(field, &beta, r);
    if pivots.len() < r - 1 {
        return Err(Error::BetaRankDeficient {
            rank: pivots.len(),
            expected: r - 1,
        });
    }
    let mut alpha = mat.rows[0].clone();
    for (row, &p) in b.iter().zip(&pivots) {
        let a = alpha[p].clone();
        for (j, s) in row.iter().enumerate() {
            if !s.is_zero() {
                alpha[j] = alpha[j].try_sub(&a.scale(s))?;
            }
        }
    }
    let mut rows = vec![alpha];
    rows.extend(b.iter().map(|row| row.iter().map(|s| BinaryForm::from_coeffs(field, std::slice::from_ref(s))).collect()));
    let nf = FormMatrix::new(rows)?;
    // row operations are invertible, so stability is read off the reduced matrix
    let det = nf.determinant()?;
    let lc = det.leading_term().map(|(_, c)| c.clone()).ok_or(Error::ZeroDeterminant)?;
    let scale = lc.inv()?;
    let mut rows = nf.rows;
    rows[0] = rows[0].iter().map(|e| e.scale(&scale)).collect();
    let nf = FormMatrix::new(rows)?;
    let inv = PairInvariant {
        det: det.scale(&scale),
        beta: BetaClass::Span(b),
    };
    Ok((nf, inv))
}

/// (det, [β₁ : β₂]) for 𝒪(1) ⊕ 𝒪(2), with β read in coefficient
/// coordinates (β₁ₓ, β₁ᵧ, β₂ₓ, β₂ᵧ).
pub fn deg3_invariant(mat: &FormMatrix) -> Result<PairInvariant> {
    if mat.shape()? != PairShape::Deg3 {
        return Err(Error::Shape("expected row degrees (2; 1)".into()));
    }
    let mut point: Vec<Scalar> = mat.rows[1].iter().flat_map(|b| b.coeffs()).collect();
    let Some(first) = point.iter().find(|c| !c.is_zero()).cloned() else {
        return Err(Error::ZeroBeta);
    };
    let det = mat.determinant()?;
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let inv = first.inv()?;
    for c in point.iter_mut() {
        *c = &*c * &inv;
    }
    Ok(PairInvariant {
        det: det.monic(),
        beta: BetaClass::Point(point),
    })
}

pub fn invariant(mat: &FormMatrix) -> Result<PairInvariant> {
    match mat.shape()? {
        PairShape::Deg3 => deg3_invariant(mat),
        PairShape::Edge { .. } => edge_normal_form(mat).map(|(_, i)| i),
    }
}

/// Whether two stable matrices of the same shape have equal invariants.
pub fn equivalent(a: &FormMatrix, b: &FormMatrix) -> Result<bool> {
    if a.shape()? != b.shape()? || a.field != b.field {
        return Err(Error::Shape("matrices have different shapes".into()));
    }
    Ok(invariant(a)? == invariant(b)?)
}

/// Applies (γ₁, γ₂, φ) to an edge matrix: the form row becomes
/// γ₁·α + Σⱼ φⱼ·βⱼ and the constant rows become γ₂·β.
pub fn apply_edge_automorphism(mat: &FormMatrix, gamma1: &Scalar, gamma2: &Matrix, phi: &[BinaryForm]) -> Result<FormMatrix> {
    let PairShape::Edge { r, n } = mat.shape()? else {
        return Err(Error::Shape("expected the edge shape".into()));
    };
    if gamma1.is_zero() || gamma2.len() != r - 1 || phi.len() != r - 1 || phi.iter().any(|p| p.degree() != n) {
        return Err(Error::Shape("automorphism data does not match the matrix".into()));
    }
    if rank(mat.field, gamma2, r - 1) < r - 1 {
        return Err(Error::Shape("gamma2 is singular".into()));
    }
    let mut alpha: Vec<BinaryForm> = mat.rows[0].iter().map(|a| a.scale(gamma1)).collect();
    for (i, p) in phi.iter().enumerate() {
        for (j, a) in alpha.iter_mut().enumerate() {
            let b = mat.rows[i + 1][j].coeffs()[0].clone();
            *a = a.try_add(&p.scale(&b))?;
        }
    }
    let mut rows = vec![alpha];
    for g in gamma2 {
        let row = (0..r)
            .map(|j| {
                let mut s = Scalar::zero(mat.field);
                for (i, c) in g.iter().enumerate() {
                    s = &s + &(c * &mat.rows[i + 1][j].coeffs()[0]);
                }
                BinaryForm::from_coeffs(mat.field, &[s])
            })
            .collect();
        rows.push(row);
    }
    FormMatrix::new(rows)
}

/// Applies (γ₁, γ₂, ℓ) to a (2; 1) matrix: rows become γ₁·α + ℓ·β and γ₂·β.
pub fn apply_deg3_automorphism(mat: &FormMatrix, gamma1: &Scalar, gamma2: &Scalar, l: &BinaryForm) -> Result<FormMatrix> {
    if mat.shape()? != PairShape::Deg3 || l.degree() != 1 || gamma1.is_zero() || gamma2.is_zero() {
        return Err(Error::Shape("automorphism data does not match the matrix".into()));
    }
    let alpha = mat.rows[0]
        .iter()
        .zip(&mat.rows[1])
        .map(|(a, b)| a.scale(gamma1).try_add(&l.mul(b)?))
        .collect::<Result<_>>()?;
    let beta = mat.rows[1].iter().map(|b| b.scale(gamma2)).collect();
    FormMatrix::new(vec![alpha, beta])
}

/// A uniformly random form of the given degree over a prime field.
pub fn random_form<R: Rng>(field: Field, degree: u32, rng: &mut R) -> BinaryForm {
    let Field::Prime(p) = field else {
        panic!("random forms need a prime field");
    };
    let c: Vec<Scalar> = (0..=degree).map(|_| Scalar::from_int(field, rng.gen_range(0..p) as i64)).collect();
    BinaryForm::from_coeffs(field, &c)
}

/// A random matrix with the given row degrees over a prime field.
pub fn random_matrix<R: Rng>(field: Field, degrees: &[u32], cols: usize, rng: &mut R) -> FormMatrix {
    let rows = degrees.iter().map(|&d| (0..cols).map(|_| random_form(field, d, rng)).collect()).collect();
    FormMatrix::new(rows).expect("uniform row degrees")
}

/// A point of ℙ¹ as (x : y).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootCheck {
    pub point: (Scalar, Scalar),
    pub multiplicity: u32,
    pub cokernel_length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelConsistency {
    pub roots: Vec<RootCheck>,
    /// Whether the determinant splits into base-field linear factors.
    pub split: bool,
    pub pass: bool,
}

/// Compares the divisor of det with the cokernel lengths at each
/// base-field zero. Near (x₀ : 1) the matrix is read in x = x₀ + t, y = 1,
/// near (1 : 0) in x = 1, y = t; the cokernel length of the resulting
/// matrix over k[t]/tᴺ (N above the degree of det) is 2N minus the
/// dimension of the submodule its columns generate.
pub fn kernel_consistency(mat: &FormMatrix) -> Result<KernelConsistency> {
    let field = mat.field;
    let Field::Prime(q) = field else {
        return Err(Error::Other("kernel consistency needs a prime field to enumerate roots".into()));
    };
    let (nr, nc) = mat.dims();
    if nr != 2 || nc != 2 {
        return Err(Error::Shape("kernel consistency is defined for 2x2 matrices".into()));
    }
    let det = mat.determinant()?;
    if det.is_zero() {
        return Err(Error::ZeroDeterminant);
    }
    let deg = det.total_degree().unwrap_or(0);
    let modulus = deg as usize + 1;
    let xy = xy_vars();
    let one = Scalar::one(field);
    let zero = Scalar::zero(field);
    let mut points: Vec<(Scalar, Scalar)> = (0..q).map(|a| (Scalar::from_int(field, a as i64), one.clone())).collect();
    points.push((one.clone(), zero.clone()));
    let mut roots = Vec::new();
    let mut pass = true;
    let mut total = 0;
    for (a, b) in points {
        let lin = if b.is_zero() {
            MultiPoly::var(&xy, field, "y")?
        } else {
            &MultiPoly::var(&xy, field, "x")? - &MultiPoly::var(&xy, field, "y")?.scale(&a)
        };
        let mult = det.multiplicity_along(&lin)?;
        if mult == 0 {
            continue;
        }
        let local = |e: &BinaryForm| -> Result<TruncatedPoly> {
            let t = var_names(&["t"]);
            let (xs, ys) = if b.is_zero() {
                (MultiPoly::one(&t, field), MultiPoly::var(&t, field, "t")?)
            } else {
                (&MultiPoly::constant(&t, a.clone()) + &MultiPoly::var(&t, field, "t")?, MultiPoly::one(&t, field))
            };
            let bind: BTreeMap<String, MultiPoly> = [("x".to_string(), xs), ("y".to_string(), ys)].into();
            let p = e.poly().substitute(&bind)?.reembed(&t)?;
            let mut c = vec![Scalar::zero(field); modulus];
            for (m, v) in p.terms() {
                if (m.0[0] as usize) < modulus {
                    c[m.0[0] as usize] = v.clone();
                }
            }
            TruncatedPoly::new(field, modulus, &c)
        };
        let cols = (0..2)
            .map(|j| ModuleElement::new(vec![local(&mat.rows[0][j])?, local(&mat.rows[1][j])?]))
            .collect::<Result<Vec<_>>>()?;
        let image = SubmoduleBasis::generated_by(modulus, 2, field, &cols)?;
        let length = 2 * modulus - image.dim();
        pass &= length == mult as usize;
        total += mult;
        roots.push(RootCheck {
            point: (a, b),
            multiplicity: mult,
            cokernel_length: length,
        });
    }
    Ok(KernelConsistency {
        roots,
        split: total == deg,
        pass,
    })
}

/// Result of comparing Aut-orbits with invariant classes on every stable
/// edge matrix over 𝔽_q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitComparison {
    pub r: usize,
    pub n: u32,
    pub q: u32,
    pub matrices: u64,
    pub stable: u64,
    pub orbits: usize,
    pub invariant_classes: usize,
    pub consistent: bool,
}

fn primitive_root(q: u32) -> u32 {
    if q == 2 {
        return 1;
    }
    (2..q)
        .find(|&g| {
            let mut x = 1u32;
            (1..q - 1).all(|_| {
                x = x * g % q;
                x != 1
            })
        })
        .expect("prime fields have primitive roots")
}

struct EdgeCodec {
    r: usize,
    n: usize,
    q: u32,
    len: usize,
}

impl EdgeCodec {
    fn alpha(&self, j: usize, k: usize) -> usize {
        j * (self.n + 1) + k
    }

    fn beta(&self, i: usize, j: usize) -> usize {
        self.r * (self.n + 1) + i * self.r + j
    }

    fn decode(&self, mut idx: u64) -> Vec<u32> {
        (0..self.len)
            .map(|_| {
                let d = (idx % self.q as u64) as u32;
                idx /= self.q as u64;
                d
            })
            .collect()
    }

    fn encode(&self, c: &[u32]) -> u64 {
        c.iter().rev().fold(0u64, |acc, &d| acc * self.q as u64 + d as u64)
    }

    /// Determinant of a square matrix of residues.
    fn scalar_det(&self, m: &[Vec<i64>]) -> i64 {
        let q = self.q as i64;
        match m.len() {
            0 => 1,
            1 => m[0][0].rem_euclid(q),
            _ => {
                let mut acc = 0;
                for j in 0..m.len() {
                    let minor: Vec<Vec<i64>> = m[1..].iter().map(|row| [&row[..j], &row[j + 1..]].concat()).collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    acc = (acc + s * m[0][j] * self.scalar_det(&minor)).rem_euclid(q);
                }
                acc
            }
        }
    }

    /// Expansion along the form row: det = Σⱼ (−1)ʲ αⱼ · minorⱼ(β).
    fn is_stable(&self, c: &[u32]) -> bool {
        let q = self.q as i64;
        let mut det = vec![0i64; self.n + 1];
        for j in 0..self.r {
            let minor: Vec<Vec<i64>> = (0..self.r - 1)
                .map(|i| (0..self.r).filter(|&k| k != j).map(|k| c[self.beta(i, k)] as i64).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { q - 1 };
            let m = s * self.scalar_det(&minor) % q;
            for (k, d) in det.iter_mut().enumerate() {
                *d = (*d + m * c[self.alpha(j, k)] as i64) % q;
            }
        }
        det.iter().any(|&d| d != 0)
    }

    fn to_matrix(&self, c: &[u32], field: Field) -> FormMatrix {
        let s = |v: u32| Scalar::from_int(field, v as i64);
        let mut rows = vec![(0..self.r)
            .map(|j| BinaryForm::from_coeffs(field, &(0..=self.n).map(|k| s(c[self.alpha(j, k)])).collect::<Vec<_>>()))
            .collect::<Vec<_>>()];
        for i in 0..self.r - 1 {
            rows.push((0..self.r).map(|j| BinaryForm::from_coeffs(field, &[s(c[self.beta(i, j)])])).collect());
        }
        FormMatrix::new(rows).expect("uniform row degrees")
    }

    /// Images of `c` under a generating set of the automorphism group.
    fn neighbours(&self, c: &[u32], g: u32) -> Vec<Vec<u32>> {
        let q = self.q;
        let mut out = Vec::new();
        let mut d = c.to_vec();
        for j in 0..self.r {
            for k in 0..=self.n {
                d[self.alpha(j, k)] = c[self.alpha(j, k)] * g % q;
            }
        }
        out.push(d);
        for i in 0..self.r - 1 {
            let mut d = c.to_vec();
            for j in 0..self.r {
                d[self.beta(i, j)] = c[self.beta(i, j)] * g % q;
            }
            out.push(d);
            for i2 in 0..self.r - 1 {
                if i2 == i {
                    continue;
                }
                let mut d = c.to_vec();
                for j in 0..self.r {
                    d[self.beta(i, j)] = (c[self.beta(i, j)] + c[self.beta(i2, j)]) % q;
                }
                out.push(d);
            }
            for k in 0..=self.n {
                let mut d = c.to_vec();
                for j in 0..self.r {
                    d[self.alpha(j, k)] = (c[self.alpha(j, k)] + c[self.beta(i, j)]) % q;
                }
                out.push(d);
            }
        }
        out
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Partitions all stable edge matrices over 𝔽_q into orbits by union-find
/// along group generators and compares with the partition by invariants.
pub fn edge_orbit_comparison(r: usize, n: u32, q: u32, exec: Execution) -> Result<OrbitComparison> {
    let field = Field::prime(q as u64)?;
    if r < 2 {
        return Err(Error::Shape("the edge shape needs r >= 2".into()));
    }
    let codec = EdgeCodec {
        r,
        n: n as usize,
        q,
        len: r * (n as usize + 1) + (r - 1) * r,
    };
    let total = (q as u128).pow(codec.len as u32);
    let budget = crate::census::budget_from_env().min(u32::MAX as u128);
    if total > budget {
        return Err(Error::BudgetExceeded {
            candidates: total,
            budget,
            suggested_shards: total.div_ceil(budget.max(1)),
        });
    }
    let total = total as u64;
    let g = primitive_root(q);
    let stable: Vec<u64> = (0..total).filter(|&i| codec.is_stable(&codec.decode(i))).collect();
    let mut parent: Vec<u32> = (0..total as u32).collect();
    for &i in &stable {
        for d in codec.neighbours(&codec.decode(i), g) {
            let (a, b) = (find(&mut parent, i as u32), find(&mut parent, codec.encode(&d) as u32));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let invariants: Vec<Result<PairInvariant>> = map_ordered(exec, &stable, |&i| {
        edge_normal_form(&codec.to_matrix(&codec.decode(i), field)).map(|(_, inv)| inv)
    });
    let mut by_orbit: HashMap<u32, PairInvariant> = HashMap::new();
    let mut classes: HashMap<PairInvariant, u32> = HashMap::new();
    let mut consistent = true;
    for (&i, inv) in stable.iter().zip(invariants) {
        let inv = inv?;
        let root = find(&mut parent, i as u32);
        match by_orbit.get(&root) {
            Some(seen) => consistent &= *seen == inv,
            None => {
                by_orbit.insert(root, inv.clone());
            }
        }
        let owner = *classes.entry(inv).or_insert(root);
        consistent &= owner == root;
    }
    Ok(OrbitComparison {
        r,
        n,
        q,
        matrices: total,
        stable: stable.len() as u64,
        orbits: by_orbit.len(),
        invariant_classes: classes.len(),
        consistent: consistent && by_orbit.len() == classes.len(),
    })
}
