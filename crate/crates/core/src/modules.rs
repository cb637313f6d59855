//! Submodules of M = (k[t]/⟨tⁿ⟩)^⊕r viewed as t-invariant subspaces of kⁿʳ.
//!
//! Coordinates of the underlying space are ordered
//! (u₁, u₁t, …, u₁tⁿ⁻¹, u₂, u₂t, …), so component `k` occupies the column
//! block `k*n .. (k+1)*n`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{in_span, rref, Matrix};
use crate::scalar::{Field, Scalar};
use crate::truncated::TruncatedPoly;

/// An r-tuple of truncated polynomials sharing modulus and field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleElement {
    components: Vec<TruncatedPoly>,
}

impl ModuleElement {
    pub fn new(components: Vec<TruncatedPoly>) -> Result<ModuleElement> {
        let first = components.first().ok_or_else(|| Error::Shape("empty module element".into()))?;
        for c in &components[1..] {
            first.field().check(&c.field())?;
            if c.modulus() != first.modulus() {
                return Err(Error::ModulusMismatch(first.modulus(), c.modulus()));
            }
        }
        Ok(ModuleElement { components })
    }

    /// Parses a tuple such as `"(-3-4*t, 1+2*t)"`.
    pub fn parse(text: &str, field: Field, modulus: usize) -> Result<ModuleElement> {
        let inner = text.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Syntax {
                pos: 0,
                msg: "module element must be a parenthesised tuple".into(),
            })?;
        let comps = inner
            .split(',')
            .map(|s| TruncatedPoly::parse(s, field, modulus))
            .collect::<Result<Vec<_>>>()?;
        ModuleElement::new(comps)
    }

    pub fn components(&self) -> &[TruncatedPoly] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn modulus(&self) -> usize {
        self.components[0].modulus()
    }

    pub fn field(&self) -> Field {
        self.components[0].field()
    }

    pub fn to_vector(&self) -> Vec<Scalar> {
        self.components.iter().flat_map(|c| c.coeffs().iter().cloned()).collect()
    }

    pub fn from_vector(field: Field, n: usize, r: usize, v: &[Scalar]) -> ModuleElement {
        assert_eq!(v.len(), n * r);
        ModuleElement {
            components: v.chunks(n).map(|c| TruncatedPoly::new(field, n, c).expect("same field")).collect(),
        }
    }

    pub fn shift(&self) -> ModuleElement {
        ModuleElement {
            components: self.components.iter().map(TruncatedPoly::shift).collect(),
        }
    }
}

impl fmt::Display for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for ModuleElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Multiplication by t on a coordinate vector of length n·r.
pub fn shift_vector(n: usize, v: &[Scalar]) -> Vec<Scalar> {
    let mut out = v.to_vec();
    for block in out.chunks_mut(n) {
        block.rotate_right(1);
        block[0] = Scalar::zero(block[0].field());
    }
    out
}

/// Whether the row span of `rows` is closed under multiplication by t.
pub fn t_invariant(n: usize, r: usize, field: Field, rows: &[Vec<Scalar>]) -> Result<bool> {
    check_rows(n, r, rows)?;
    let (basis, pivots) = rref(field, rows, n * r);
    Ok(basis.iter().all(|row| in_span(&shift_vector(n, row), &basis, &pivots)))
}

fn check_rows(n: usize, r: usize, rows: &[Vec<Scalar>]) -> Result<()> {
    match rows.iter().find(|row| row.len() != n * r) {
        Some(row) => Err(Error::Shape(format!("row of length {} in a space of dimension {}", row.len(), n * r))),
        None => Ok(()),
    }
}

/// A t-invariant subspace in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubmoduleBasis {
    n: usize,
    r: usize,
    field: Field,
    rows: Matrix,
    pivots: Vec<usize>,
}

impl SubmoduleBasis {
    /// Row-reduces `rows`; fails unless the span is t-invariant.
    pub fn from_rows(n: usize, r: usize, field: Field, rows: &[Vec<Scalar>]) -> Result<SubmoduleBasis> {
        check_rows(n, r, rows)?;
        let (rows, pivots) = rref(field, rows, n * r);
        let s = SubmoduleBasis { n, r, field, rows, pivots };
        if s.rows.iter().all(|row| s.contains_vector(&shift_vector(n, row))) {
            Ok(s)
        } else {
            Err(Error::NotInvariant)
        }
    }

    /// The submodule generated by `gens`: span of all tʲ·g.
    pub fn generated_by(n: usize, r: usize, field: Field, gens: &[ModuleElement]) -> Result<SubmoduleBasis> {
        let mut rows = Vec::new();
        for g in gens {
            if g.rank() != r || g.modulus() != n {
                return Err(Error::Shape(format!("generator {g} does not lie in (k[t]/t^{n})^{r}")));
            }
            field.check(&g.field())?;
            let mut v = g.to_vector();
            for _ in 0..n {
                rows.push(v.clone());
                v = shift_vector(n, &v);
            }
        }
        SubmoduleBasis::from_rows(n, r, field, &rows)
    }

    pub fn zero(n: usize, r: usize, field: Field) -> SubmoduleBasis {
        SubmoduleBasis::from_rows(n, r, field, &[]).expect("zero space")
    }

    pub fn full(n: usize, r: usize, field: Field) -> SubmoduleBasis {
        let rows: Matrix = (0..n * r)
            .map(|i| (0..n * r).map(|j| Scalar::from_int(field, (i == j) as i64)).collect())
            .collect();
        SubmoduleBasis::from_rows(n, r, field, &rows).expect("full space")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        in_span(v, &self.rows, &self.pivots)
    }

    pub fn membership(&self, v: &ModuleElement) -> Result<bool> {
        if v.rank() != self.r || v.modulus() != self.n {
            return Err(Error::Shape(format!("{v} is not an element of (k[t]/t^{})^{}", self.n, self.r)));
        }
        self.field.check(&v.field())?;
        Ok(self.contains_vector(&v.to_vector()))
    }

    /// dim(tʲ·S) for j = 0..=n.
    pub fn t_power_dims(&self) -> Vec<usize> {
        let mut cur = self.rows.clone();
        let mut dims = Vec::with_capacity(self.n + 1);
        for _ in 0..=self.n {
            let (b, _) = rref(self.field, &cur, self.n * self.r);
            dims.push(b.len());
            cur = b.iter().map(|row| shift_vector(self.n, row)).collect();
        }
        dims
    }

    /// Rank of the rows restricted to the given columns.
    pub fn rank_on_columns(&self, cols: &[usize]) -> usize {
        let restricted: Matrix = self.rows.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        crate::linalg::rank(self.field, &restricted, cols.len())
    }
}

impl Serialize for SubmoduleBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// Isomorphism type ⊕ k[t]/⟨t^ℓⱼ⟩ recorded as a weakly decreasing partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuleType(pub Vec<usize>);

impl ModuleType {
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn parts(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for ModuleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for ModuleType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Recovers the partition from dⱼ = dim(tʲS): the number of parts
/// exceeding j is dⱼ − dⱼ₊₁.
pub fn classify_type(s: &SubmoduleBasis) -> ModuleType {
    let dims = s.t_power_dims();
    let exceeding: Vec<usize> = dims.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for j in (0..exceeding.len()).rev() {
        let next = exceeding.get(j + 1).copied().unwrap_or(0);
        for _ in 0..exceeding[j] - next {
            parts.push(j + 1);
        }
    }
    ModuleType(parts)
}

/// Kernel of (f, g) ↦ f·e + g·h, generated by (−h, e).
pub fn cyclic_kernel(e: &TruncatedPoly, h: &TruncatedPoly) -> Result<(ModuleElement, SubmoduleBasis)> {
    e.field().check(&h.field())?;
    if e.modulus() != h.modulus() {
        return Err(Error::ModulusMismatch(e.modulus(), h.modulus()));
    }
    if !e.is_unit() && !h.is_unit() {
        return Err(Error::NotSurjective);
    }
    let gen = ModuleElement::new(vec![h.neg(), e.clone()])?;
    let basis = SubmoduleBasis::generated_by(e.modulus(), 2, e.field(), std::slice::from_ref(&gen))?;
    Ok((gen, basis))
}

/// Chart membership of a rank-2 submodule of dimension n.
///
/// Chart U holds submodules generated by (m(t), 1), chart V those generated
/// by (1, l(t)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartReport {
    pub u_coords: Option<Vec<Scalar>>,
    pub v_coords: Option<Vec<Scalar>>,
}

impl ChartReport {
    pub fn is_cyclic(&self) -> bool {
        self.u_coords.is_some() || self.v_coords.is_some()
    }
}

impl fmt::Display for ChartReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &Option<Vec<Scalar>>| match c {
            Some(v) => format!("({})", v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")),
            None => "-".into(),
        };
        if !self.is_cyclic() {
            return write!(f, "non-cyclic");
        }
        write!(f, "U: {}  V: {}", show(&self.u_coords), show(&self.v_coords))
    }
}

pub fn chart_coords(s: &SubmoduleBasis) -> Result<ChartReport> {
    if s.r != 2 {
        return Err(Error::Shape(format!("chart coordinates need rank 2, got {}", s.r)));
    }
    if s.dim() != s.n {
        return Err(Error::Shape(format!("chart coordinates need dimension {}, got {}", s.n, s.dim())));
    }
    Ok(ChartReport {
        u_coords: normalized_generator(s, 1),
        v_coords: normalized_generator(s, 0),
    })
}

/// If S projects isomorphically onto component `unit`, returns the other
/// component of the element projecting to 1.
fn normalized_generator(s: &SubmoduleBasis, unit: usize) -> Option<Vec<Scalar>> {
    let n = s.n;
    let other = 1 - unit;
    let order: Vec<usize> = (unit * n..(unit + 1) * n).chain(other * n..(other + 1) * n).collect();
    let permuted: Matrix = s.rows.iter().map(|row| order.iter().map(|&c| row[c].clone()).collect()).collect();
    let (b, pivots) = rref(s.field, &permuted, 2 * n);
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    Some(b[0][n..].to_vec())
}

/// Chart change U → V: coefficients of (Σ mᵢ tⁱ⁻¹)⁻¹ mod tⁿ.
pub fn chart_transition(m_coeffs: &[Scalar]) -> Result<Vec<Scalar>> {
    let first = m_coeffs.first().ok_or_else(|| Error::Shape("empty coordinate vector".into()))?;
    let p = TruncatedPoly::new(first.field(), m_coeffs.len(), m_coeffs)?;
    Ok(p.invert()?.coeffs().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn tp(f: Field, n: usize, c: &[i64]) -> TruncatedPoly {
        TruncatedPoly::from_ints(f, n, c)
    }

    fn ints(f: Field, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(f, x)).collect()
    }

    #[test]
    fn cyclic_kernel_examples() {
        let (g, b) = cyclic_kernel(&tp(Q, 2, &[1, 2]), &tp(Q, 2, &[3, 4])).unwrap();
        assert_eq!(g.to_string(), "(-4*t - 3, 2*t + 1)");
        assert_eq!(b.dim(), 2);
        assert!(b.membership(&g).unwrap());

        let (g, b) = cyclic_kernel(&tp(Q, 2, &[1]), &tp(Q, 2, &[0])).unwrap();
        assert_eq!(g, ModuleElement::new(vec![tp(Q, 2, &[0]), tp(Q, 2, &[1])]).unwrap());
        assert_eq!(b.rows(), &vec![ints(Q, &[0, 0, 1, 0]), ints(Q, &[0, 0, 0, 1])]);

        assert_eq!(cyclic_kernel(&tp(Q, 2, &[0, 1]), &tp(Q, 2, &[0, 3])), Err(Error::NotSurjective));
    }

    #[test]
    fn classify_examples() {
        let f = Q;
        let t0 = ModuleElement::new(vec![tp(f, 2, &[0, 1]), tp(f, 2, &[0])]).unwrap();
        let t1 = ModuleElement::new(vec![tp(f, 2, &[0]), tp(f, 2, &[0, 1])]).unwrap();
        let s = SubmoduleBasis::generated_by(2, 2, f, &[t0, t1]).unwrap();
        assert_eq!(classify_type(&s), ModuleType(vec![1, 1]));

        let (_, k) = cyclic_kernel(&tp(f, 2, &[1]), &tp(f, 2, &[3, 4])).unwrap();
        assert_eq!(k.t_power_dims(), vec![2, 1, 0]);
        assert_eq!(classify_type(&k), ModuleType(vec![2]));

        // S = ⟨(t, 0), (0, t²)⟩ sits strictly between t²M and M for n = 3.
        let a = ModuleElement::new(vec![tp(f, 3, &[0, 1]), tp(f, 3, &[0])]).unwrap();
        let b = ModuleElement::new(vec![tp(f, 3, &[0]), tp(f, 3, &[0, 0, 1])]).unwrap();
        let s = SubmoduleBasis::generated_by(3, 2, f, &[a, b]).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(classify_type(&s), ModuleType(vec![2, 1]));
    }

    #[test]
    fn chart_coords_examples() {
        let f = Q;
        let g = ModuleElement::new(vec![tp(f, 3, &[2, 1, 1]), tp(f, 3, &[1])]).unwrap();
        let s = SubmoduleBasis::generated_by(3, 2, f, &[g]).unwrap();
        let rep = chart_coords(&s).unwrap();
        assert_eq!(rep.u_coords, Some(ints(f, &[2, 1, 1])));
        assert_eq!(rep.v_coords, Some(vec![Scalar::rational(1, 2), Scalar::rational(-1, 4), Scalar::rational(-1, 8)]));

        let g = ModuleElement::new(vec![tp(f, 2, &[0]), tp(f, 2, &[1])]).unwrap();
        let s = SubmoduleBasis::generated_by(2, 2, f, &[g]).unwrap();
        let rep = chart_coords(&s).unwrap();
        assert_eq!(rep.u_coords, Some(ints(f, &[0, 0])));
        assert_eq!(rep.v_coords, None);

        let a = ModuleElement::new(vec![tp(f, 3, &[0, 1]), tp(f, 3, &[0])]).unwrap();
        let b = ModuleElement::new(vec![tp(f, 3, &[0]), tp(f, 3, &[0, 0, 1])]).unwrap();
        let s = SubmoduleBasis::generated_by(3, 2, f, &[a, b]).unwrap();
        let rep = chart_coords(&s).unwrap();
        assert!(!rep.is_cyclic());
        assert_eq!(rep.to_string(), "non-cyclic");

        assert!(chart_coords(&SubmoduleBasis::full(1, 3, f)).is_err());
    }

    #[test]
    fn transition_examples() {
        let f = Q;
        assert_eq!(chart_transition(&ints(f, &[1, 3])).unwrap(), ints(f, &[1, -3]));
        assert_eq!(
            chart_transition(&ints(f, &[2, 1, 1])).unwrap(),
            vec![Scalar::rational(1, 2), Scalar::rational(-1, 4), Scalar::rational(-1, 8)]
        );
        assert_eq!(chart_transition(&ints(f, &[1, 0, 0])).unwrap(), ints(f, &[1, 0, 0]));
        assert_eq!(chart_transition(&ints(f, &[0, 1])), Err(Error::NotAUnit));
    }

    #[test]
    fn invariance_examples() {
        let f = Q;
        // u and v themselves, n = 2: t·u = ut is missing.
        assert!(!t_invariant(2, 2, f, &[ints(f, &[1, 0, 0, 0]), ints(f, &[0, 0, 1, 0])]).unwrap());
        assert!(t_invariant(2, 2, f, SubmoduleBasis::full(2, 2, f).rows()).unwrap());
        assert!(t_invariant(2, 2, f, &[]).unwrap());
        assert!(t_invariant(2, 2, f, &[ints(f, &[1, 0, 0])]).is_err());
        assert_eq!(SubmoduleBasis::from_rows(2, 2, f, &[ints(f, &[1, 0, 0, 0])]), Err(Error::NotInvariant));
    }

    #[test]
    fn module_element_parse() {
        let e = ModuleElement::parse("(-3-4*t, 1+2*t)", Q, 2).unwrap();
        assert_eq!(e.to_vector(), ints(Q, &[-3, -4, 1, 2]));
        assert!(ModuleElement::parse("-3, 1", Q, 2).is_err());
    }
}
