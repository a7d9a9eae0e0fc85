//! Sparse LU factorization of a basis matrix, left-looking with partial
//! pivoting (Gilbert–Peierls), plus the triangular solves the simplex needs.
//!
//! Conventions: `rowperm[orig_row] = pivot position`, `colorder[step] =
//! basis slot processed at that step`. After factorization all L/U row
//! indices live in pivot space, so the solves are plain substitutions.

use super::Scalar;

pub(crate) struct LuFactors<S> {
    m: usize,
    /// L columns: strictly-below-diagonal entries (pivot-space row, value).
    lcols: Vec<Vec<(usize, S)>>,
    /// U columns: strictly-above-diagonal entries (pivot-space row, value).
    ucols: Vec<Vec<(usize, S)>>,
    udiag: Vec<S>,
    rowperm: Vec<usize>,
    colorder: Vec<usize>,
}

pub(crate) struct LuError;

const PIVOT_ZERO: f64 = 1e-11;

pub(crate) fn factorize<S: Scalar>(m: usize, basis_cols: &[Vec<(usize, S)>]) -> Result<LuFactors<S>, LuError> {
    assert_eq!(basis_cols.len(), m);
    const NONE: usize = usize::MAX;

    // Process sparser columns first; cheap fill heuristic, deterministic.
    let mut colorder: Vec<usize> = (0..m).collect();
    colorder.sort_by_key(|&c| (basis_cols[c].len(), c));

    let mut rowperm = vec![NONE; m];
    // L columns carry original row indices during factorization (rows gain
    // pivot positions as we go); remapped to pivot space afterwards.
    let mut lcols_orig: Vec<Vec<(usize, S)>> = Vec::with_capacity(m);
    let mut ucols: Vec<Vec<(usize, S)>> = Vec::with_capacity(m);
    let mut udiag: Vec<S> = Vec::with_capacity(m);

    let mut work = vec![S::zero(); m]; // dense accumulator, orig row space
    let mut stamp = vec![0u32; m];
    let mut epoch = 0u32;
    let mut topo: Vec<usize> = Vec::with_capacity(m); // orig rows, topo order
    let mut dfs_stack: Vec<(usize, usize)> = Vec::new();

    for step in 0..m {
        let bcol = colorder[step];
        epoch += 1;
        topo.clear();

        // Symbolic: reachable set of the L-solve, via DFS over L's pattern.
        for &(r, _) in &basis_cols[bcol] {
            if stamp[r] == epoch {
                continue;
            }
            dfs_stack.push((r, 0));
            stamp[r] = epoch;
            while let Some((node, child)) = dfs_stack.pop() {
                let succ: &[(usize, S)] =
                    if rowperm[node] == NONE { &[] } else { &lcols_orig[rowperm[node]] };
                let mut pushed = false;
                let mut ci = child;
                while ci < succ.len() {
                    let nr = succ[ci].0;
                    if stamp[nr] != epoch {
                        stamp[nr] = epoch;
                        dfs_stack.push((node, ci + 1));
                        dfs_stack.push((nr, 0));
                        pushed = true;
                        break;
                    }
                    ci += 1;
                }
                if !pushed {
                    topo.push(node);
                }
            }
        }
        // `topo` is a postorder: dependencies of a row appear before it when
        // reversed.
        for &r in topo.iter() {
            work[r] = S::zero();
        }
        for &(r, v) in &basis_cols[bcol] {
            work[r] = v;
        }
        // Numeric L-solve in reverse postorder.
        for &r in topo.iter().rev() {
            let p = rowperm[r];
            if p == NONE {
                continue;
            }
            let xr = work[r];
            if xr == S::zero() {
                continue;
            }
            for &(r2, l) in &lcols_orig[p] {
                work[r2] = work[r2] - l * xr;
            }
        }

        // Pivot: largest magnitude among not-yet-pivotal rows; lowest row on
        // ties for determinism.
        let mut pivot_row = NONE;
        let mut pivot_mag = S::zero();
        for &r in topo.iter() {
            if rowperm[r] == NONE {
                let mag = work[r].abs();
                if mag > pivot_mag || (mag == pivot_mag && pivot_row != NONE && r < pivot_row && mag > S::zero()) {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
        }
        if pivot_row == NONE || pivot_mag < S::c(PIVOT_ZERO) {
            return Err(LuError);
        }
        let pivot_val = work[pivot_row];
        rowperm[pivot_row] = step;
        udiag.push(pivot_val);

        let mut ucol: Vec<(usize, S)> = Vec::new();
        let mut lcol: Vec<(usize, S)> = Vec::new();
        for &r in topo.iter() {
            let v = work[r];
            if v == S::zero() || r == pivot_row {
                continue;
            }
            let p = rowperm[r];
            if p != NONE && p != step {
                ucol.push((p, v));
            } else if p == NONE {
                lcol.push((r, v / pivot_val));
            }
        }
        ucol.sort_by_key(|&(p, _)| p);
        lcol.sort_by_key(|&(r, _)| r);
        ucols.push(ucol);
        lcols_orig.push(lcol);
    }

    let lcols: Vec<Vec<(usize, S)>> = lcols_orig
        .into_iter()
        .map(|col| col.into_iter().map(|(r, v)| (rowperm[r], v)).collect())
        .collect();

    Ok(LuFactors { m, lcols, ucols, udiag, rowperm, colorder })
}

impl<S: Scalar> LuFactors<S> {
    /// Solves `B x = b`, in place over basis-slot indexing.
    pub fn ftran(&self, b: &mut [S], scratch: &mut Vec<S>) {
        let m = self.m;
        scratch.clear();
        scratch.resize(m, S::zero());
        for r in 0..m {
            scratch[self.rowperm[r]] = b[r];
        }
        // L z = Pb (forward, column-oriented).
        for j in 0..m {
            let zj = scratch[j];
            if zj == S::zero() {
                continue;
            }
            for &(i, l) in &self.lcols[j] {
                scratch[i] = scratch[i] - l * zj;
            }
        }
        // U w = z (backward).
        for j in (0..m).rev() {
            let wj = scratch[j] / self.udiag[j];
            scratch[j] = wj;
            if wj == S::zero() {
                continue;
            }
            for &(i, u) in &self.ucols[j] {
                scratch[i] = scratch[i] - u * wj;
            }
        }
        for k in 0..m {
            b[self.colorder[k]] = scratch[k];
        }
    }

    /// Solves `Bᵀ y = c`, in place: `c` is indexed by basis slot on entry and
    /// by original row on exit.
    pub fn btran(&self, c: &mut [S], scratch: &mut Vec<S>) {
        let m = self.m;
        scratch.clear();
        scratch.resize(m, S::zero());
        for k in 0..m {
            scratch[k] = c[self.colorder[k]];
        }
        // Uᵀ z = c' (forward, gather over U columns).
        for j in 0..m {
            let mut v = scratch[j];
            for &(i, u) in &self.ucols[j] {
                v = v - u * scratch[i];
            }
            scratch[j] = v / self.udiag[j];
        }
        // Lᵀ w = z (backward, gather over L columns).
        for j in (0..m).rev() {
            let mut v = scratch[j];
            for &(i, l) in &self.lcols[j] {
                v = v - l * scratch[i];
            }
            scratch[j] = v;
        }
        for r in 0..m {
            c[r] = scratch[self.rowperm[r]];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(dense: &[&[f64]]) -> Vec<Vec<(usize, f64)>> {
        let m = dense.len();
        (0..m)
            .map(|j| (0..m).filter(|&i| dense[i][j] != 0.0).map(|i| (i, dense[i][j])).collect())
            .collect()
    }

    fn check_solves(dense: &[&[f64]]) {
        let m = dense.len();
        let lu = factorize(m, &cols(dense)).ok().unwrap();
        let mut scratch = Vec::new();
        // FTran: pick x, compute b = Ax, solve, compare.
        let x: Vec<f64> = (0..m).map(|i| (i as f64) - 1.3).collect();
        let mut b = vec![0.0; m];
        for i in 0..m {
            for j in 0..m {
                b[i] += dense[i][j] * x[j];
            }
        }
        lu.ftran(&mut b, &mut scratch);
        for i in 0..m {
            assert!((b[i] - x[i]).abs() < 1e-9, "ftran mismatch at {i}");
        }
        // BTran: pick y, compute c = Aᵀy, solve, compare.
        let y: Vec<f64> = (0..m).map(|i| 0.7 * (i as f64) + 0.2).collect();
        let mut c = vec![0.0; m];
        for j in 0..m {
            for i in 0..m {
                c[j] += dense[i][j] * y[i];
            }
        }
        lu.btran(&mut c, &mut scratch);
        for i in 0..m {
            assert!((c[i] - y[i]).abs() < 1e-9, "btran mismatch at {i}");
        }
    }

    #[test]
    fn dense_3x3() {
        check_solves(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 4.0]]);
    }

    #[test]
    fn permuted_identity() {
        check_solves(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
    }

    #[test]
    fn needs_pivoting() {
        check_solves(&[
            &[1e-14, 1.0, 0.0, 0.0],
            &[1.0, 1.0, 0.0, 2.0],
            &[0.0, 5.0, 1.0, 0.0],
            &[3.0, 0.0, 0.0, 1.0],
        ]);
    }

    #[test]
    fn singular_detected() {
        let dense: &[&[f64]] = &[&[1.0, 2.0], &[2.0, 4.0]];
        assert!(factorize(2, &cols(dense)).is_err());
    }
}
