//! Dense Cholesky factorization for the grounded graph Laplacian.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::math;

/// Relative pivot floor: a Schur-complement pivot below
/// `PIVOT_FLOOR * max diagonal` means the matrix is numerically singular.
pub const PIVOT_FLOOR: f64 = 1e-12;

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`, row-major.
#[derive(Clone, Debug)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Factors the symmetric matrix `a` (row-major, `n x n`; only the lower
    /// triangle is read). Fails when a pivot drops below the relative floor.
    pub fn factor(mut a: Vec<f64>, n: usize) -> Result<Cholesky> {
        assert_eq!(a.len(), n * n);
        let max_diag = (0..n).map(|i| a[i * n + i]).fold(0.0f64, f64::max);
        let floor = PIVOT_FLOOR * max_diag;
        for i in 0..n {
            let (done, rest) = a.split_at_mut(i * n);
            let row_i = &mut rest[..n];
            for j in 0..i {
                let row_j = &done[j * n..j * n + j + 1];
                let dot: f64 = row_i[..j].iter().zip(&row_j[..j]).map(|(x, y)| x * y).sum();
                row_i[j] = (row_i[j] - dot) / row_j[j];
            }
            let pivot = row_i[i] - row_i[..i].iter().map(|x| x * x).sum::<f64>();
            if !(pivot > floor) {
                return Err(Error::NumericallySingular { pivot, floor });
            }
            row_i[i] = math::sqrt(pivot);
            for x in &mut row_i[i + 1..] {
                *x = 0.0;
            }
        }
        Ok(Cholesky { n, l: a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `ln det A = 2 Σ ln L_ii`.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.n).map(|i| math::ln(self.l[i * self.n + i])).sum::<f64>()
    }

    /// Solves `A x = b` in place.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for i in 0..n {
            let row = &self.l[i * n..i * n + i];
            let dot: f64 = row.iter().zip(&b[..i]).map(|(x, y)| x * y).sum();
            b[i] = (b[i] - dot) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }
}

/// Grounded Laplacian: rows/columns of `vertices` (in that order) of the
/// Laplacian of `g`. Neighbors outside `vertices` still count toward the
/// diagonal, which is exactly the effect of grounding them.
pub fn laplacian_minor(g: &Graph, vertices: &[usize]) -> Vec<f64> {
    let m = vertices.len();
    let mut position = vec![usize::MAX; g.n()];
    for (i, &v) in vertices.iter().enumerate() {
        position[v] = i;
    }
    let mut a = vec![0.0; m * m];
    for (i, &v) in vertices.iter().enumerate() {
        a[i * m + i] = g.degree(v) as f64;
        for &w in g.neighbors(v) {
            let j = position[w];
            if j != usize::MAX {
                a[i * m + j] = -1.0;
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::make_complete;

    #[test]
    fn solves_small_spd_system() {
        let a = vec![4.0, 2.0, 2.0, 3.0];
        let c = Cholesky::factor(a, 2).unwrap();
        assert!((c.log_det() - libm::log(8.0)).abs() < 1e-14);
        let mut b = vec![2.0, 1.0];
        c.solve_in_place(&mut b);
        assert!((4.0 * b[0] + 2.0 * b[1] - 2.0).abs() < 1e-14);
        assert!((2.0 * b[0] + 3.0 * b[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = vec![1.0, 1.0, 1.0, 1.0];
        assert!(matches!(Cholesky::factor(a, 2), Err(Error::NumericallySingular { .. })));
    }

    #[test]
    fn grounded_complete_graph_determinant_is_cayley() {
        // det of the K_5 minor is 5^3.
        let g = make_complete(5).unwrap();
        let a = laplacian_minor(&g, &[1, 2, 3, 4]);
        let c = Cholesky::factor(a, 4).unwrap();
        assert!((c.log_det() - 3.0 * libm::log(5.0)).abs() < 1e-12);
    }
}
