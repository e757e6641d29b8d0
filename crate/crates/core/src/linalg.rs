//! Exact linear algebra: sparse row echelon over ℚ and fraction-free
//! (Bareiss) elimination over ℚ[∂].

use crate::algebra::{Polynomial, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::Bound;

pub type SparseVec<K> = BTreeMap<K, Rational>;

fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    for (k, v) in x {
        let entry = y.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += a * v;
        if entry.is_zero() {
            y.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K> {
    vec: SparseVec<K>,
    /// The row as a combination of the inserted vectors, by insertion tag.
    combo: SparseVec<usize>,
}

/// Incrementally built row echelon form with provenance tracking.
///
/// Each stored row has leading coefficient 1 at its pivot (its smallest
/// key), so reduction visits keys in ascending order.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self {
            rows: BTreeMap::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows. Returns the remainder and the
    /// coefficients `c` with `v = remainder + Σ c_t · inserted_t`.
    pub fn reduce(&self, v: &SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut rem = v.clone();
        let mut coeffs = SparseVec::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => rem.keys().next().cloned(),
                Some(c) => rem
                    .range((Bound::Excluded(c.clone()), Bound::Unbounded))
                    .next()
                    .map(|(k, _)| k.clone()),
            };
            let Some(key) = next else { break };
            if let Some(row) = self.rows.get(&key) {
                let lambda = rem[&key].clone();
                axpy(&mut rem, &-lambda.clone(), &row.vec);
                axpy(&mut coeffs, &lambda, &row.combo);
            }
            cursor = Some(key);
        }
        (rem, coeffs)
    }

    /// Stored rows keyed by pivot, each with leading coefficient 1.
    pub fn rows(&self) -> impl Iterator<Item = (&K, &SparseVec<K>)> {
        self.rows.iter().map(|(k, r)| (k, &r.vec))
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Inserts `v`; returns whether it was independent of the rows so far.
    /// Every call consumes one insertion tag, independent or not.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let tag = self.inserted;
        self.inserted += 1;
        let (rem, coeffs) = self.reduce(v);
        let Some((pivot, lead)) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Rational::one() / lead;
        let mut combo = SparseVec::new();
        combo.insert(tag, inv.clone());
        axpy(&mut combo, &-inv.clone(), &coeffs);
        let vec = rem.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.rows.insert(pivot, Row { vec, combo });
        true
    }

    /// Coefficients expressing `v` through the inserted vectors, if `v` is
    /// in their span.
    pub fn solve(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let (rem, coeffs) = self.reduce(v);
        rem.is_empty().then_some(coeffs)
    }
}

/// Rank of a matrix over ℚ[∂] (equivalently over ℚ(∂)) by fraction-free
/// elimination. Every division performed is exact.
pub fn bareiss_rank(mut m: Vec<Vec<Polynomial>>) -> usize {
    bareiss(&mut m).0
}

/// Determinant of a square matrix over ℚ[∂].
pub fn bareiss_determinant(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return Polynomial::one();
    }
    let (rank, sign) = bareiss(&mut m);
    if rank < n {
        return Polynomial::zero();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}

/// In-place elimination; returns (rank, whether an odd number of row swaps
/// happened). For a nonsingular square input the last pivot is ± det.
fn bareiss(m: &mut [Vec<Polynomial>]) -> (usize, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = Polynomial::one();
    let mut rank = 0;
    let mut odd = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            odd = !odd;
        }
        let pivot = m[rank][col].clone();
        let (top, bottom) = m.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            for (x, p) in row[col + 1..cols].iter_mut().zip(&pivot_row[col + 1..cols]) {
                let num = &(&pivot * &*x) - &(&factor * p);
                *x = num
                    .div_exact(&prev)
                    .expect("fraction-free elimination produced an inexact division");
            }
            row[col] = Polynomial::zero();
        }
        prev = pivot;
        rank += 1;
    }
    (rank, odd)
}
