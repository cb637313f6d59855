//! Brute-force census of t-invariant subspaces of (𝔽_q[t]/⟨tⁿ⟩)^⊕r and the
//! closed-form counts it is checked against.
//!
//! Enumeration walks the Schubert cells of the Grassmannian: every
//! `dim`-subset of pivot columns, every filling of the free entries of the
//! corresponding reduced echelon matrix. Each candidate is tested for
//! t-invariance row by row with early exit. Cells are split into index ranges
//! ("shards") that are processed independently and concatenated in a fixed
//! order, so the output does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exec::{map_ordered, sum_range, Execution};
use crate::modules::{classify_type, ModuleType, SubmoduleBasis};
use crate::scalar::{Field, Scalar};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
pub const BUDGET_ENV: &str = "QUOTFIB_BUDGET";

/// Enumeration cap, overridable through `QUOTFIB_BUDGET`.
pub fn budget_from_env() -> u128 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub shards: usize,
    pub execution: Execution,
    pub budget: u128,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            shards: 1,
            execution: Execution::Parallel,
            budget: budget_from_env(),
        }
    }
}

/// Gaussian binomial [n choose k]_q.
pub fn gaussian_binomial(n: usize, k: usize, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

struct Cell {
    pivots: Vec<usize>,
    /// (row, column) of each free entry, most significant digit first.
    free: Vec<(usize, usize)>,
}

fn cells(ncols: usize, dim: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        let free = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| ((p + 1)..ncols).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        out.push(Cell {
            pivots: pivots.clone(),
            free,
        });
        // next combination in lexicographic order
        let mut i = dim;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < ncols - dim + i {
                break;
            }
        }
        pivots[i] += 1;
        for j in i + 1..dim {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
}

struct Shard {
    cell: usize,
    start: u64,
    end: u64,
}

/// Scans one shard; returns the invariant echelon matrices found, flattened.
fn scan_shard(cell: &Cell, shard: &Shard, n: usize, ncols: usize, q: u32) -> Vec<Vec<u32>> {
    let dim = cell.pivots.len();
    let mut m = vec![0u32; dim * ncols];
    for (i, &p) in cell.pivots.iter().enumerate() {
        m[i * ncols + p] = 1;
    }
    let mut found = Vec::new();
    let mut shifted = vec![0u32; ncols];
    for idx in shard.start..shard.end {
        let mut rest = idx;
        for &(row, col) in cell.free.iter().rev() {
            m[row * ncols + col] = (rest % q as u64) as u32;
            rest /= q as u64;
        }
        let invariant = (0..dim).all(|i| {
            let row = &m[i * ncols..(i + 1) * ncols];
            for (b, block) in row.chunks(n).enumerate() {
                shifted[b * n] = 0;
                shifted[b * n + 1..(b + 1) * n].copy_from_slice(&block[..n - 1]);
            }
            // w − Σ w[pivot_j]·row_j must vanish
            for (j, &p) in cell.pivots.iter().enumerate() {
                let f = shifted[p];
                if f == 0 {
                    continue;
                }
                let rj = &m[j * ncols..(j + 1) * ncols];
                for (w, &x) in shifted.iter_mut().zip(rj) {
                    *w = (*w + (q - f) * x) % q;
                }
            }
            shifted.iter().all(|&w| w == 0)
        });
        if invariant {
            found.push(m.clone());
        }
    }
    found
}

/// All `dim`-dimensional t-invariant subspaces of (𝔽_q[t]/⟨tⁿ⟩)^⊕r, in
/// canonical echelon form, ordered by pivot set and then by free entries.
pub fn enumerate_invariant_subspaces(n: usize, r: usize, q: u32, dim: usize, opts: &CensusOptions) -> Result<Vec<SubmoduleBasis>> {
    let field = Field::prime(q as u64)?;
    if n == 0 || r == 0 {
        return Err(Error::Shape("n and r must be positive".into()));
    }
    let ncols = n * r;
    if dim > ncols {
        return Ok(Vec::new());
    }
    let total = gaussian_binomial(ncols, dim, q as u128);
    if total > opts.budget {
        return Err(Error::BudgetExceeded {
            candidates: total,
            budget: opts.budget,
            suggested_shards: total.div_ceil(opts.budget.max(1)),
        });
    }
    let cells = cells(ncols, dim);
    let chunk = (total as u64).div_ceil(opts.shards.max(1) as u64).max(1);
    let mut shards = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let size = (q as u64).pow(cell.free.len() as u32);
        let mut start = 0;
        while start < size {
            let end = (start + chunk).min(size);
            shards.push(Shard { cell: ci, start, end });
            start = end;
        }
    }
    let found = map_ordered(opts.execution, &shards, |s| scan_shard(&cells[s.cell], s, n, ncols, q));
    found
        .into_iter()
        .flatten()
        .map(|flat| {
            let rows: Vec<Vec<Scalar>> = flat
                .chunks(ncols)
                .map(|row| row.iter().map(|&v| Scalar::from_int(field, v as i64)).collect())
                .collect();
            SubmoduleBasis::from_rows(n, r, field, &rows)
        })
        .collect()
}

/// Stratified count of the n-dimensional t-invariant subspaces.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub n: usize,
    pub r: usize,
    pub q: u32,
    pub total: u64,
    pub by_type: BTreeMap<ModuleType, u64>,
    pub elapsed: Duration,
}

// Timing is not part of a report's identity.
impl PartialEq for CensusReport {
    fn eq(&self, o: &Self) -> bool {
        (self.n, self.r, self.q, self.total, &self.by_type) == (o.n, o.r, o.q, o.total, &o.by_type)
    }
}

impl CensusReport {
    pub fn count(&self, t: &ModuleType) -> u64 {
        self.by_type.get(t).copied().unwrap_or(0)
    }
}

impl Serialize for CensusReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            n: usize,
            r: usize,
            q: u32,
            total: u64,
            by_type: BTreeMap<String, u64>,
            elapsed_ms: u128,
        }
        Wire {
            n: self.n,
            r: self.r,
            q: self.q,
            total: self.total,
            by_type: self.by_type.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            elapsed_ms: self.elapsed.as_millis(),
        }
        .serialize(s)
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "census n={} r={} q={}: {} subspaces", self.n, self.r, self.q, self.total)?;
        for (t, c) in self.by_type.iter().rev() {
            writeln!(f, "  type {t:<12} {c}")?;
        }
        write!(f, "  elapsed {} ms", self.elapsed.as_millis())
    }
}

pub fn census(n: usize, r: usize, q: u32, opts: &CensusOptions) -> Result<CensusReport> {
    let start = Instant::now();
    let subspaces = enumerate_invariant_subspaces(n, r, q, n, opts)?;
    let types = map_ordered(opts.execution, &subspaces, classify_type);
    let mut by_type = BTreeMap::new();
    for t in types {
        *by_type.entry(t).or_insert(0) += 1;
    }
    Ok(CensusReport {
        n,
        r,
        q,
        total: subspaces.len() as u64,
        by_type,
        elapsed: start.elapsed(),
    })
}

/// |Q₀| = 1, |Q₁| = q+1, |Qₙ| = (q+1)qⁿ⁻¹ + |Qₙ₋₂|.
pub fn closed_form_count(n: usize, q: u64) -> u128 {
    let q = q as u128;
    match n {
        0 => 1,
        1 => q + 1,
        _ => (q + 1) * q.pow(n as u32 - 1) + closed_form_count(n - 2, q as u64),
    }
}

/// Points of the stratum of type (n−m, m): (q+1)q^{n−2m−1}, or 1 when n = 2m.
pub fn stratum_count(n: usize, m: usize, q: u64) -> Result<u128> {
    if 2 * m > n {
        return Err(Error::StratumOutOfRange { n, m });
    }
    let q = q as u128;
    Ok(if n == 2 * m { 1 } else { (q + 1) * q.pow((n - 2 * m - 1) as u32) })
}

/// The module type of stratum m for rank 2: partition (n−m, m).
pub fn stratum_type(n: usize, m: usize) -> ModuleType {
    ModuleType([n - m, m].into_iter().filter(|&p| p > 0).collect())
}

/// 𝔽_q-points of V(xz + y²) ⊆ ℙ³, counted over normalized representatives.
pub fn quadric_cone_count(q: u32) -> Result<u64> {
    Field::prime(q as u64)?;
    let q64 = q as u64;
    let count = sum_range(Execution::Parallel, q64.pow(4), |idx| {
        let c = [idx % q64, idx / q64 % q64, idx / (q64 * q64) % q64, idx / (q64 * q64 * q64)];
        let Some(first) = c.iter().position(|&v| v != 0) else {
            return 0;
        };
        if c[first] != 1 {
            return 0;
        }
        let [x, y, z, _w] = c;
        ((x * z + y * y) % q64 == 0) as u64
    });
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumEntry {
    pub module_type: ModuleType,
    pub dimension: Option<usize>,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumDimensionTable {
    pub r: usize,
    pub n: usize,
    pub entries: Vec<StratumEntry>,
}

impl fmt::Display for StratumDimensionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "strata r={} n={}", self.r, self.n)?;
        for e in &self.entries {
            let d = e.dimension.map(|d| d.to_string()).unwrap_or_else(|| "?".into());
            writeln!(f, "  {:<12} dim {:<4} {}", e.module_type.to_string(), d, e.description)?;
        }
        Ok(())
    }
}

/// Partitions of `n` into at most `max_parts` parts, in decreasing
/// lexicographic order.
pub fn partitions(n: usize, max_parts: usize) -> Vec<ModuleType> {
    fn go(rest: usize, cap: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<ModuleType>) {
        if rest == 0 {
            out.push(ModuleType(cur.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, max_parts, &mut Vec::new(), &mut out);
    out
}

pub fn strata_dimension_table(r: usize, n: usize) -> Result<StratumDimensionTable> {
    if r < 2 || n < 1 {
        return Err(Error::Shape(format!("strata table needs r ≥ 2 and n ≥ 1, got r={r}, n={n}")));
    }
    let entries = if r == 2 {
        (0..=n / 2)
            .map(|m| {
                let description = if n == 2 * m {
                    "single point".to_string()
                } else if n == 2 * m + 1 {
                    "P^1".to_string()
                } else {
                    format!("A^{}-bundle over P^1", n - 2 * m - 1)
                };
                StratumEntry {
                    module_type: stratum_type(n, m),
                    dimension: Some(n - 2 * m),
                    description,
                }
            })
            .collect()
    } else {
        partitions(n, r)
            .into_iter()
            .map(|t| {
                let (dimension, description) = if t.0 == [n] {
                    (Some(n * (r - 1)), "S_1, smooth open stratum".to_string())
                } else if n >= 2 && t.0 == [n - 1, 1] {
                    (Some(n * (r - 1) - 2), "S_2, smooth locally closed".to_string())
                } else {
                    (None, "unknown".to_string())
                };
                StratumEntry {
                    module_type: t,
                    dimension,
                    description,
                }
            })
            .collect()
    };
    Ok(StratumDimensionTable { r, n, entries })
}
