//! Exact linear algebra over the scalar field.

use thiserror::Error;

use crate::algebra::RatFn;

pub type Matrix = Vec<Vec<RatFn>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("system is inconsistent")]
    Inconsistent,
    #[error("dimension mismatch")]
    Dimension,
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { RatFn::one() } else { RatFn::zero() }).collect()).collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let mut acc = RatFn::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Pivot preference: constants first, then fewer terms.
fn pivot_cost(x: &RatFn) -> usize {
    if x.is_constant() {
        0
    } else {
        1 + x.num().len() + x.den().len()
    }
}

/// Row reduction of `[a | b]`; returns the reduced augmented rows and the
/// pivot columns.
fn reduce(mut rows: Vec<Vec<RatFn>>, ncols: usize) -> (Vec<Vec<RatFn>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let best = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by_key(|&i| pivot_cost(&rows[i][c]));
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        let pivot_row: Vec<RatFn> = rows[r].iter().map(|x| if x.is_zero() { RatFn::zero() } else { x * &inv }).collect();
        rows[r] = pivot_row.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (j, x) in row.iter_mut().enumerate() {
                if !pivot_row[j].is_zero() {
                    *x = &*x - &(&f * &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (rows, pivots)
}

/// Solves `a x = b` for a system of full column rank.
pub fn solve(a: &Matrix, b: &[RatFn]) -> Result<Vec<RatFn>, LinalgError> {
    let sols = solve_many(a, &b.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>())?;
    Ok(sols.into_iter().map(|mut r| r.remove(0)).collect())
}

/// Solves `a X = B` for several right-hand sides (columns of `b`).
pub fn solve_many(a: &Matrix, b: &Matrix) -> Result<Matrix, LinalgError> {
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    if a.len() != b.len() {
        return Err(LinalgError::Dimension);
    }
    let k = b.first().map(|r| r.len()).unwrap_or(0);
    let rows: Vec<Vec<RatFn>> = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb.iter()).cloned().collect()).collect();
    let (red, pivots) = reduce(rows, n);
    if pivots.len() < n {
        return Err(LinalgError::Singular);
    }
    for row in &red[n..] {
        if row[n..].iter().any(|x| !x.is_zero()) {
            return Err(LinalgError::Inconsistent);
        }
    }
    Ok((0..n).map(|i| red[i][n..n + k].to_vec()).collect())
}

/// Connected blocks of a square matrix: index sets such that the matrix is
/// block diagonal after a simultaneous permutation.
fn blocks(m: &Matrix) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        let mut y = x;
        while c[y] != r {
            let nx = c[y];
            c[y] = r;
            y = nx;
        }
        r
    }
    for i in 0..n {
        for j in 0..n {
            if !m[i][j].is_zero() {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                if a != b {
                    comp[a] = b;
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..n {
        let r = find(&mut comp, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => out[k].push(i),
            None => {
                roots.push(r);
                out.push(vec![i]);
            }
        }
    }
    out
}

/// Matrix inverse, splitting into diagonal blocks when possible.
pub fn inverse(m: &Matrix) -> Result<Matrix, LinalgError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Dimension);
    }
    let bl = blocks(m);
    let mut out = vec![vec![RatFn::zero(); n]; n];
    for idx in bl {
        let sub: Matrix = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        let inv = if sub.len() == 1 {
            vec![vec![sub[0][0].inv().map_err(|_| LinalgError::Singular)?]]
        } else {
            solve_many(&sub, &identity(sub.len()))?
        };
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[i][j] = inv[a][b].clone();
            }
        }
    }
    Ok(out)
}

pub fn determinant(m: &Matrix) -> RatFn {
    let n = m.len();
    let mut a = m.clone();
    let mut det = RatFn::one();
    for c in 0..n {
        let Some(p) = (c..n).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| pivot_cost(&a[i][c])) else {
            return RatFn::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det = &det * &piv;
        let inv = piv.inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                if !a[c][j].is_zero() {
                    let t = &f * &a[c][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
    }
    det
}

pub fn rank(m: &Matrix) -> usize {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    reduce(m.clone(), ncols).1.len()
}

/// Incremental row reduction. Rows are offered one at a time; each is either
/// independent of the previous pivots (and becomes one) or a combination of
/// them.
#[derive(Clone, Debug, Default)]
pub struct RowReducer {
    ncols: usize,
    /// Rows in reduced echelon form with their pivot column.
    reduced: Vec<(usize, Vec<RatFn>)>,
    /// `combos[k][j]`: coefficient of original pivot row `j` in reduced row `k`.
    combos: Vec<Vec<RatFn>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    /// Index of the new pivot row.
    Pivot(usize),
    /// Coefficients expressing the row through the pivot rows so far.
    Dependent(Vec<RatFn>),
}

impl RowReducer {
    pub fn new(ncols: usize) -> Self {
        RowReducer { ncols, reduced: Vec::new(), combos: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    pub fn push(&mut self, row: &[RatFn]) -> RowStatus {
        assert_eq!(row.len(), self.ncols);
        let npiv = self.reduced.len();
        let mut r = row.to_vec();
        // combo of r in terms of pivot rows, with the new row itself as slot npiv
        let mut lambda = vec![RatFn::zero(); npiv];
        for (k, (pc, red)) in self.reduced.iter().enumerate() {
            if r[*pc].is_zero() {
                continue;
            }
            let f = r[*pc].clone();
            for (j, x) in r.iter_mut().enumerate() {
                if !red[j].is_zero() {
                    *x = &*x - &(&f * &red[j]);
                }
            }
            for (j, l) in lambda.iter_mut().enumerate() {
                if !self.combos[k][j].is_zero() {
                    *l = &*l + &(&f * &self.combos[k][j]);
                }
            }
        }
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return RowStatus::Dependent(lambda);
        };
        let inv = r[pc].inv().expect("nonzero");
        let red: Vec<RatFn> = r.iter().map(|x| if x.is_zero() { RatFn::zero() } else { x * &inv }).collect();
        // combo of the new reduced row: (e_new - lambda) * inv
        let mut combo: Vec<RatFn> = lambda.iter().map(|l| -(l * &inv)).collect();
        combo.push(inv.clone());
        for c in self.combos.iter_mut() {
            c.push(RatFn::zero());
        }
        // Keep echelon form reduced: clear column pc in existing rows.
        for k in 0..self.reduced.len() {
            let f = self.reduced[k].1[pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                if !red[j].is_zero() {
                    let t = &f * &red[j];
                    self.reduced[k].1[j] = &self.reduced[k].1[j] - &t;
                }
            }
            for j in 0..=npiv {
                if !combo[j].is_zero() {
                    let t = &f * &combo[j];
                    self.combos[k][j] = &self.combos[k][j] - &t;
                }
            }
        }
        self.reduced.push((pc, red));
        self.combos.push(combo);
        RowStatus::Pivot(npiv)
    }

    /// Solution of the pivot rows `row_j . x = rhs_j` with free variables
    /// set to zero.
    pub fn particular_solution(&self, rhs: &[RatFn]) -> Vec<RatFn> {
        let mut x = vec![RatFn::zero(); self.ncols];
        for (k, (pc, _)) in self.reduced.iter().enumerate() {
            let mut acc = RatFn::zero();
            for (j, c) in self.combos[k].iter().enumerate() {
                if !c.is_zero() && !rhs[j].is_zero() {
                    acc = &acc + &(c * &rhs[j]);
                }
            }
            x[*pc] = acc;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_scalar;

    fn m(rows: &[&[&str]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|s| parse_scalar(s).unwrap()).collect()).collect()
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = m(&[&["a", "1", "0"], &["b", "a", "0"], &["0", "0", "b"]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        assert_eq!(determinant(&a), parse_scalar("(a^2 - b)*b").unwrap());
        assert!(inverse(&m(&[&["1", "2"], &["2", "4"]])).is_err());
    }

    #[test]
    fn overdetermined_solve() {
        let a = m(&[&["1", "0"], &["0", "1"], &["1", "1"]]);
        let x = solve(&a, &m(&[&["a"], &["b"], &["a+b"]]).into_iter().map(|r| r[0].clone()).collect::<Vec<_>>()).unwrap();
        assert_eq!(x, vec![parse_scalar("a").unwrap(), parse_scalar("b").unwrap()]);
        let bad = solve(&a, &[RatFn::one(), RatFn::one(), RatFn::one()]);
        assert_eq!(bad, Err(LinalgError::Inconsistent));
    }

    #[test]
    fn row_reducer_tracks_combinations() {
        let rows = m(&[&["1", "2", "0"], &["0", "1", "1"], &["1", "4", "2"], &["2", "0", "0"]]);
        let mut rr = RowReducer::new(3);
        assert_eq!(rr.push(&rows[0]), RowStatus::Pivot(0));
        assert_eq!(rr.push(&rows[1]), RowStatus::Pivot(1));
        assert_eq!(rr.push(&rows[2]), RowStatus::Dependent(vec![RatFn::one(), RatFn::int(2)]));
        assert_eq!(rr.push(&rows[3]), RowStatus::Pivot(2));
        let rhs = [RatFn::int(3), RatFn::int(2), RatFn::int(4)];
        let x = rr.particular_solution(&rhs);
        for (k, row) in [&rows[0], &rows[1], &rows[3]].iter().enumerate() {
            let mut acc = RatFn::zero();
            for j in 0..3 {
                acc = &acc + &(&row[j] * &x[j]);
            }
            assert_eq!(acc, rhs[k]);
        }
    }
}
