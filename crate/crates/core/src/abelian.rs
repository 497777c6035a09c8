//! Abelian invariants of L-presented groups: exponent-sum lattices, closure
//! under abelianized substitutions, and Hermite and Smith normal forms over the
//! integers.
//!
//! Vectors are rows; an endomorphism acts on a row vector `v` as `v * M`.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{FreeEndomorphism, LPresentation, Word};

/// Default bound on the number of saturation rounds in [`invariant_lattice_closure`].
pub const DEFAULT_ROUND_CAP: usize = 1000;

/// A dense matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn new(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("rows of inconsistent length".into()));
        }
        Ok(IntegerMatrix { cols, rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        IntegerMatrix {
            cols,
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            cols,
            rows: vec![vec![BigInt::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.nrows() {
            return Err(Error::Malformed(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows(),
                self.cols,
                other.nrows(),
                other.cols
            )));
        }
        let rows = self.rows.iter().map(|r| vec_mul(r, other)).collect();
        Ok(IntegerMatrix {
            cols: other.cols,
            rows,
        })
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        let n = self.nrows();
        if n != self.cols {
            return Err(Error::Malformed("determinant of a non-square matrix".into()));
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * prev)
    }
}

fn vec_mul(v: &[BigInt], m: &IntegerMatrix) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); m.cols];
    for (x, row) in v.iter().zip(&m.rows) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

/// Exponent sums of `w` over an alphabet of size `k`.
pub fn abelianize_word(w: &Word, k: usize) -> Vec<BigInt> {
    let mut v = vec![0i64; k];
    for l in w.letters() {
        v[l.gen()] += l.sign();
    }
    v.into_iter().map(BigInt::from).collect()
}

/// Row `i` is the exponent-sum vector of the image of generator `i`.
pub fn abelianize_endo(e: &FreeEndomorphism) -> IntegerMatrix {
    let k = e.rank();
    IntegerMatrix {
        cols: k,
        rows: e.images().iter().map(|w| abelianize_word(w, k)).collect(),
    }
}

fn add_multiple(target: &mut [BigInt], source: &[BigInt], q: &BigInt) {
    for (t, s) in target.iter_mut().zip(source) {
        *t -= q * s;
    }
}

/// Row Hermite normal form `H = U * A` with `U` unimodular. `H` keeps all rows
/// of `A`; zero rows come last.
pub fn hermite_with_transform(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let m = a.nrows();
    let mut h = a.rows.clone();
    let mut u = IntegerMatrix::identity(m).rows;
    let mut r = 0;
    for col in 0..a.cols {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[r][col]);
                let (hr, ur) = (h[r].clone(), u[r].clone());
                add_multiple(&mut h[i], &hr, &q);
                add_multiple(&mut u[i], &ur, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !h[r][col].is_zero() {
            if h[r][col].is_negative() {
                h[r].iter_mut().for_each(|x| *x = -&*x);
                u[r].iter_mut().for_each(|x| *x = -&*x);
            }
            for i in 0..r {
                let q = h[i][col].div_floor(&h[r][col]);
                if !q.is_zero() {
                    let (hr, ur) = (h[r].clone(), u[r].clone());
                    add_multiple(&mut h[i], &hr, &q);
                    add_multiple(&mut u[i], &ur, &q);
                }
            }
            r += 1;
        }
    }
    (
        IntegerMatrix { cols: a.cols, rows: h },
        IntegerMatrix { cols: m, rows: u },
    )
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn hermite_basis(a: &IntegerMatrix) -> IntegerMatrix {
    let (h, _) = hermite_with_transform(a);
    IntegerMatrix {
        cols: a.cols,
        rows: h
            .rows
            .into_iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .collect(),
    }
}

/// Smith normal form `D = U * A * V` with `U`, `V` unimodular. Returns `(U, D, V)`.
pub fn smith_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
    let (m, n) = (a.nrows(), a.cols);
    let mut d = a.rows.clone();
    let mut u = IntegerMatrix::identity(m).rows;
    let mut v = IntegerMatrix::identity(n).rows;
    let swap_cols = |mat: &mut Vec<Vec<BigInt>>, i: usize, j: usize| {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    };
    let col_op = |mat: &mut Vec<Vec<BigInt>>, target: usize, source: usize, q: &BigInt| {
        for row in mat.iter_mut() {
            let s = row[source].clone();
            row[target] -= q * s;
        }
    };
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the remaining block goes to (t, t)
            let best = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !d[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| d[i][j].abs().cmp(&d[k][l].abs()));
            let Some((pi, pj)) = best else {
                return finish(a.cols, d, u, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                let (dr, ur) = (d[t].clone(), u[t].clone());
                add_multiple(&mut d[i], &dr, &q);
                add_multiple(&mut u[i], &ur, &q);
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_op(&mut d, j, t, &q);
                col_op(&mut v, j, t, &q);
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad {
                Some(i) => {
                    let (di, ui) = (d[i].clone(), u[i].clone());
                    let one = -BigInt::one();
                    add_multiple(&mut d[t], &di, &one);
                    add_multiple(&mut u[t], &ui, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            d[t].iter_mut().for_each(|x| *x = -&*x);
            u[t].iter_mut().for_each(|x| *x = -&*x);
        }
    }
    finish(a.cols, d, u, v)
}

fn finish(
    cols: usize,
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
    let m = u.len();
    (
        IntegerMatrix { cols: m, rows: u },
        IntegerMatrix { cols, rows: d },
        IntegerMatrix { cols, rows: v },
    )
}

/// Smallest lattice containing `vectors` and closed under `v -> v * M` for every
/// matrix, as a Hermite basis.
pub fn invariant_lattice_closure(
    vectors: &[Vec<BigInt>],
    matrices: &[IntegerMatrix],
    dim: usize,
    round_cap: usize,
) -> Result<IntegerMatrix> {
    if vectors.iter().any(|v| v.len() != dim)
        || matrices.iter().any(|m| m.nrows() != dim || m.cols != dim)
    {
        return Err(Error::Malformed("inconsistent dimensions in lattice closure".into()));
    }
    let mut basis = hermite_basis(&IntegerMatrix {
        cols: dim,
        rows: vectors.to_vec(),
    });
    for _ in 0..round_cap {
        let mut rows = basis.rows.clone();
        for m in matrices {
            rows.extend(basis.rows.iter().map(|b| vec_mul(b, m)));
        }
        let next = hermite_basis(&IntegerMatrix { cols: dim, rows });
        if next == basis {
            return Ok(basis);
        }
        basis = next;
    }
    Err(Error::ResourceLimit(format!(
        "lattice closure did not stabilize within {round_cap} rounds"
    )))
}

/// A finitely generated abelian group `Z^rank x Z/d1 x ... x Z/dk` with `d1 | d2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    /// Invariants of `Z^dim` modulo the row lattice of `relations`.
    pub fn of_quotient(relations: &IntegerMatrix) -> Result<Self> {
        let dim = relations.cols;
        let (_, d, _) = smith_normal_form(relations);
        let diag: Vec<BigInt> = (0..relations.nrows().min(dim))
            .map(|i| d.rows[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect();
        let rank = dim - diag.len();
        let torsion = diag
            .into_iter()
            .filter(|x| !x.is_one())
            .map(|x| {
                x.to_u64()
                    .ok_or_else(|| Error::ResourceLimit(format!("torsion coefficient {x} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AbelianInvariants { rank, torsion })
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = self
            .torsion
            .iter()
            .chunk_by(|&&d| d)
            .into_iter()
            .map(|(d, run)| match run.count() {
                1 => format!("Z/{d}"),
                k => format!("(Z/{d})^{k}"),
            })
            .collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// Abelian invariants of the group defined by `lp`: `Z^k` modulo the span of the
/// fixed relators and the substitution-closed lattice of the iterated relators.
pub fn abelian_invariants(lp: &LPresentation) -> Result<AbelianInvariants> {
    abelian_invariants_with_cap(lp, DEFAULT_ROUND_CAP)
}

pub fn abelian_invariants_with_cap(lp: &LPresentation, round_cap: usize) -> Result<AbelianInvariants> {
    let k = lp.rank();
    let matrices: Vec<IntegerMatrix> = lp
        .substitutions()
        .iter()
        .map(|s| abelianize_endo(&s.endo))
        .collect();
    let iterated: Vec<Vec<BigInt>> = lp.iterated().iter().map(|r| abelianize_word(r, k)).collect();
    let closed = invariant_lattice_closure(&iterated, &matrices, k, round_cap)?;
    let mut rows = closed.rows;
    rows.extend(lp.fixed().iter().map(|q| abelianize_word(q, k)));
    AbelianInvariants::of_quotient(&IntegerMatrix { cols: k, rows })
}

/// Invariants of a finite presentation.
pub fn abelian_invariants_finite(relators: &[Word], k: usize) -> Result<AbelianInvariants> {
    AbelianInvariants::of_quotient(&IntegerMatrix {
        cols: k,
        rows: relators.iter().map(|r| abelianize_word(r, k)).collect(),
    })
}

/// Invariants of the instantiations at `depth` and `depth + 1`, accepted only if they agree.
pub fn abelian_invariants_truncated(lp: &LPresentation, depth: usize) -> Result<AbelianInvariants> {
    let k = lp.rank();
    let a = abelian_invariants_finite(&lp.instantiate(depth).relators, k)?;
    let b = abelian_invariants_finite(&lp.instantiate(depth + 1).relators, k)?;
    if a == b {
        Ok(a)
    } else {
        Err(Error::Inconclusive(format!(
            "abelian invariants differ between depth {depth} ({a}) and {} ({b})",
            depth + 1
        )))
    }
}
