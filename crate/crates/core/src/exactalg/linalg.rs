//! Exact Gauss-Jordan elimination over the rationals.

use num_traits::{One, Zero};

use super::Rat;

/// Solution set of an affine system `A v = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    /// Reduced-echelon particular solution with every free variable set to zero.
    pub particular: Vec<Rat>,
    /// One kernel vector per free variable, in column order.
    pub kernel: Vec<Vec<Rat>>,
}

/// Row-reduces `[A | b]` where `a` has `ncols` columns. Returns `None` when
/// the system is inconsistent.
pub fn solve_affine(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<AffineSolution> {
    debug_assert_eq!(a.len(), b.len());
    let mut rows: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.resize(ncols, Rat::zero());
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut rows, ncols);
    // a pivot in the augmented column means 0 = nonzero
    if rows.iter().skip(pivots.len()).any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut particular = vec![Rat::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r][ncols].clone();
    }
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut kernel = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -rows[r][free].clone();
        }
        kernel.push(v);
    }
    Some(AffineSolution { particular, kernel })
}

/// In-place reduced row echelon form over the first `ncols` columns. Pivot
/// rows are moved to the top; returns the pivot column of each.
fn rref(rows: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rint;

    fn row(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rint(x)).collect()
    }

    #[test]
    fn unique_solution() {
        let a = vec![row(&[2, 1]), row(&[1, -1])];
        let s = solve_affine(&a, &row(&[3, 0]), 2).unwrap();
        assert_eq!(s.particular, row(&[1, 1]));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn free_variables_zero_in_particular() {
        // y1 = -1, y0 free
        let a = vec![row(&[0, -1])];
        let s = solve_affine(&a, &row(&[1]), 2).unwrap();
        assert_eq!(s.particular, row(&[0, -1]));
        assert_eq!(s.kernel, vec![row(&[1, 0])]);
    }

    #[test]
    fn inconsistent() {
        let a = vec![row(&[1, 1]), row(&[2, 2])];
        assert!(solve_affine(&a, &row(&[1, 3]), 2).is_none());
    }

    #[test]
    fn empty_system() {
        let s = solve_affine(&[], &[], 2).unwrap();
        assert_eq!(s.particular, row(&[0, 0]));
        assert_eq!(s.kernel.len(), 2);
    }
}
