//! Fincke–Pohst enumeration of lattice vectors in an ellipsoid
//! {x ∈ Z^d : xᵀ G x ≤ B}, driven by the Cholesky factor of an LLL-reduced
//! Gram matrix. Coordinates handed to callers are in the original basis.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative slack on the bound so that points exactly on the sphere are
/// counted despite rounding in the Gram matrix.
pub const BOUNDARY_SLACK: f64 = 1e-9;

/// Lovász parameter of the basis reduction.
const LLL_DELTA: f64 = 0.99;

/// Quadratic form in the completed-square shape
/// q(y) = Σ_i q_ii (y_i + Σ_{j>i} μ_ij y_j)² in reduced coordinates y,
/// with original coordinates x = Uᵀ y.
#[derive(Debug, Clone)]
pub struct Enumerator {
    dim: usize,
    diag: Vec<f64>,
    /// mu[i][j] for j > i
    mu: Vec<Vec<f64>>,
    gram: DMatrix<f64>,
    /// Unimodular U with reduced Gram U G Uᵀ; None when U = I.
    transform: Option<Vec<Vec<i64>>>,
}

/// Gram–Schmidt data of a Gram matrix: squared lengths B_i and coefficients μ_ij (j < i).
fn gram_schmidt(g: &DMatrix<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = g.nrows();
    let mut b = vec![0.0; d];
    let mut mu = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..i {
            let mut v = g[(i, j)];
            for l in 0..j {
                v -= mu[j][l] * mu[i][l] * b[l];
            }
            mu[i][j] = v / b[j];
        }
        b[i] = g[(i, i)] - (0..i).map(|l| mu[i][l] * mu[i][l] * b[l]).sum::<f64>();
    }
    (b, mu)
}

/// LLL reduction acting on the Gram matrix; returns the reduced Gram and U.
pub fn lll_reduce_gram(gram: &DMatrix<f64>) -> (DMatrix<f64>, Vec<Vec<i64>>) {
    let d = gram.nrows();
    let mut g = gram.clone();
    let mut u: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    if d < 2 {
        return (g, u);
    }
    let mut k = 1;
    let mut guard = 0usize;
    while k < d && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(&g);
            let r = mu[k][j].round();
            if r != 0.0 {
                // b_k ← b_k − r b_j
                for c in 0..d {
                    g[(k, c)] -= r * g[(j, c)];
                }
                for c in 0..d {
                    g[(c, k)] -= r * g[(c, j)];
                }
                let ri = r as i64;
                let uj = u[j].clone();
                for (x, y) in u[k].iter_mut().zip(&uj) {
                    *x -= ri * y;
                }
            }
        }
        let (b, mu) = gram_schmidt(&g);
        if b[k] >= (LLL_DELTA - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            k += 1;
        } else {
            g.swap_rows(k, k - 1);
            g.swap_columns(k, k - 1);
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    (g, u)
}

impl Enumerator {
    pub fn new(gram: &DMatrix<f64>) -> Result<Self> {
        let dim = gram.nrows();
        if gram.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: gram.ncols() });
        }
        gram.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
        let (reduced, u) = lll_reduce_gram(gram);
        let identity = u.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)));
        let chol = reduced.cholesky().ok_or(Error::NotPositiveDefinite)?;
        // G = L Lᵀ, so q(x) = |Lᵀ x|² with Lᵀ upper triangular
        let upper = chol.l().transpose();
        let diag: Vec<f64> = (0..dim).map(|i| upper[(i, i)] * upper[(i, i)]).collect();
        if diag.iter().any(|&q| !(q > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        let mu = (0..dim)
            .map(|i| (0..dim).map(|j| if j > i { upper[(i, j)] / upper[(i, i)] } else { 0.0 }).collect())
            .collect();
        Ok(Self { dim, diag, mu, gram: gram.clone(), transform: (!identity).then_some(u) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Exact quadratic form xᵀ G x.
    pub fn q(&self, x: &[i64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            let mut row = 0.0;
            for j in 0..self.dim {
                row += self.gram[(i, j)] * x[j] as f64;
            }
            acc += row * x[i] as f64;
        }
        acc
    }

    /// Visit every nonzero x with q(x) ≤ bound. With `half`, only one of
    /// each pair ±x is visited (the one whose last nonzero reduced
    /// coordinate is positive).
    pub fn for_each(&self, bound: f64, half: bool, mut visit: impl FnMut(&[i64], f64)) {
        if self.dim == 0 || bound < 0.0 {
            return;
        }
        let mut y = vec![0i64; self.dim];
        match &self.transform {
            None => self.descend(self.dim - 1, bound, bound, true, half, &mut y, &mut visit),
            Some(u) => {
                let mut x = vec![0i64; self.dim];
                let mut mapped = |y: &[i64], q: f64| {
                    for (c, xc) in x.iter_mut().enumerate() {
                        *xc = y.iter().zip(u).map(|(yi, row)| yi * row[c]).sum();
                    }
                    visit(&x, q);
                };
                self.descend(self.dim - 1, bound, bound, true, half, &mut y, &mut mapped);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        i: usize,
        bound: f64,
        budget: f64,
        zero_above: bool,
        half: bool,
        x: &mut [i64],
        visit: &mut impl FnMut(&[i64], f64),
    ) {
        let center: f64 = -((i + 1)..self.dim).map(|j| self.mu[i][j] * x[j] as f64).sum::<f64>();
        let width = (budget.max(0.0) / self.diag[i]).sqrt();
        let mut lo = (center - width).ceil() as i64;
        let hi = (center + width).floor() as i64;
        if half && zero_above {
            lo = lo.max(0);
        }
        for v in lo..=hi {
            let dev = v as f64 - center;
            let rest = budget - self.diag[i] * dev * dev;
            if rest < 0.0 {
                continue;
            }
            x[i] = v;
            let still_zero = zero_above && v == 0;
            if i == 0 {
                if !still_zero {
                    visit(x, bound - rest);
                }
            } else {
                self.descend(i - 1, bound, rest, still_zero, half, x, visit);
            }
        }
        x[i] = 0;
    }

    /// Number of lattice vectors (including 0) in the closed ellipsoid q ≤ bound.
    pub fn count(&self, bound: f64) -> u64 {
        if bound < 0.0 {
            return 0;
        }
        let mut n = 0u64;
        self.for_each(bound * (1.0 + BOUNDARY_SLACK) + 1e-300, true, |_, _| n += 1);
        2 * n + 1
    }

    /// Minimum of q over nonzero vectors.
    pub fn min_norm(&self) -> f64 {
        // q_00 of the reduced form is the norm of the first reduced basis vector
        let mut bound = self.diag.first().copied().unwrap_or(f64::INFINITY) * (1.0 + BOUNDARY_SLACK);
        self.for_each(bound, true, |_, q| bound = bound.min(q));
        bound
    }
}
