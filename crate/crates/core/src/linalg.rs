//! Dense and iterative Laplacian linear algebra.

use crate::error::{Error, Result};
use crate::graph::StaticGraph;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};

/// Default cap on `n` for dense `O(n^3)` eigensolves and pseudoinverses.
pub const DEFAULT_EIG_BUDGET: usize = 2000;

/// Dense-solve size cap, overridable with `SUBSPAR_EIG_BUDGET`.
pub fn eig_budget() -> usize {
    std::env::var("SUBSPAR_EIG_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_EIG_BUDGET)
}

pub fn ensure_within_budget(n: usize, what: &str) -> Result<()> {
    let budget = eig_budget();
    if n > budget {
        return Err(Error::Budget(format!(
            "{what} needs a dense solve on n={n} > eigensolve budget {budget} (SUBSPAR_EIG_BUDGET)"
        )));
    }
    Ok(())
}

pub fn laplacian_dense(g: &StaticGraph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for e in g.edges() {
        l[(e.u, e.u)] += e.w;
        l[(e.v, e.v)] += e.w;
        l[(e.u, e.v)] -= e.w;
        l[(e.v, e.u)] -= e.w;
    }
    l
}

/// `y = L x` without forming `L`.
pub fn laplacian_apply(g: &StaticGraph, x: &[f64], y: &mut [f64]) {
    for (v, yv) in y.iter_mut().enumerate() {
        let mut acc = 0.0;
        for &(u, w) in g.neighbors(v) {
            acc += w * (x[v] - x[u]);
        }
        *yv = acc;
    }
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn min_eigenvalue(m: DMatrix<f64>) -> f64 {
    m.symmetric_eigenvalues().min()
}

/// Moore–Penrose pseudoinverse of the Laplacian, computed per connected
/// component as `(L_c + J/n_c)^{-1} - J/n_c`.
pub fn laplacian_pseudoinverse(g: &StaticGraph) -> Result<DMatrix<f64>> {
    let n = g.n();
    let (count, label) = g.components();
    let mut members = vec![Vec::new(); count];
    for v in 0..n {
        members[label[v]].push(v);
    }
    let mut local = vec![0usize; n];
    let mut pinv = DMatrix::zeros(n, n);
    for comp in &members {
        let k = comp.len();
        if k == 1 {
            continue;
        }
        for (i, &v) in comp.iter().enumerate() {
            local[v] = i;
        }
        let shift = 1.0 / k as f64;
        let mut m = DMatrix::from_element(k, k, shift);
        for &v in comp {
            for &(u, w) in g.neighbors(v) {
                m[(local[v], local[v])] += w;
                m[(local[v], local[u])] -= w;
            }
        }
        let chol = m
            .cholesky()
            .ok_or_else(|| Error::Numerical("shifted Laplacian not positive definite".into()))?;
        let inv = chol.inverse();
        for (i, &a) in comp.iter().enumerate() {
            for (j, &b) in comp.iter().enumerate() {
                pinv[(a, b)] = inv[(i, j)] - shift;
            }
        }
    }
    Ok(pinv)
}

/// Extreme eigenvalues `(min, max)` of a symmetric operator restricted to the
/// orthogonal complement of `deflate`, by Lanczos with full reorthogonalization.
pub fn lanczos_extremes<F>(
    n: usize,
    apply: F,
    deflate: &[Vec<f64>],
    steps: usize,
    seed: u64,
) -> (f64, f64)
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let basis: Vec<Vec<f64>> = orthonormalize(deflate);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    project_out(&mut q, &basis);
    if normalize(&mut q) == 0.0 {
        return (0.0, 0.0);
    }
    let steps = steps.min(n.saturating_sub(basis.len())).max(1);
    let mut qs: Vec<Vec<f64>> = vec![q];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    for k in 0..steps {
        apply(&qs[k], &mut w);
        let a = dot(&w, &qs[k]);
        alpha.push(a);
        project_out(&mut w, &basis);
        for _ in 0..2 {
            for qi in &qs {
                let c = dot(&w, qi);
                axpy(-c, qi, &mut w);
            }
        }
        let b = normalize(&mut w);
        if k + 1 == steps || b < 1e-10 {
            break;
        }
        beta.push(b);
        qs.push(w.clone());
    }
    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let ev = t.symmetric_eigenvalues();
    (ev.min(), ev.max())
}

fn orthonormalize(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut v = v.clone();
        project_out(&mut v, &out);
        if normalize(&mut v) > 1e-12 {
            out.push(v);
        }
    }
    out
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        axpy(-c, b, v);
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// Spectral norm of the Laplacian (largest eigenvalue).
pub fn laplacian_norm(g: &StaticGraph) -> f64 {
    let n = g.n();
    if n == 0 || g.num_edges() == 0 {
        return 0.0;
    }
    if n <= 64 {
        return symmetric_eigenvalues(laplacian_dense(g))
            .last()
            .copied()
            .unwrap_or(0.0);
    }
    let (_, max) = lanczos_extremes(n, |x, y| laplacian_apply(g, x, y), &[], 80, 0x6e6f726d);
    max
}

/// Jacobi-preconditioned conjugate gradient for `L x = b` on a connected
/// graph; `b` is projected onto the complement of the all-ones vector.
pub fn laplacian_solve_cg(
    g: &StaticGraph,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>> {
    let n = g.n();
    let mean = b.iter().sum::<f64>() / n as f64;
    let rhs: Vec<f64> = b.iter().map(|x| x - mean).collect();
    let diag: Vec<f64> = (0..n).map(|v| g.weighted_degree(v).max(1e-300)).collect();
    let mut x = vec![0.0; n];
    let mut r = rhs.clone();
    let bnorm = dot(&rhs, &rhs).sqrt();
    if bnorm == 0.0 {
        return Ok(x);
    }
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    for _ in 0..max_iter {
        laplacian_apply(g, &p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let a = rz / pap;
        axpy(a, &p, &mut x);
        axpy(-a, &ap, &mut r);
        if dot(&r, &r).sqrt() <= tol * bnorm {
            let mx = x.iter().sum::<f64>() / n as f64;
            return Ok(x.into_iter().map(|v| v - mx).collect());
        }
        z.iter_mut()
            .zip(&r)
            .zip(&diag)
            .for_each(|((zi, ri), d)| *zi = ri / d);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        p.iter_mut()
            .zip(&z)
            .for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    Err(Error::Numerical(format!(
        "conjugate gradient did not reach tolerance {tol} in {max_iter} iterations"
    )))
}

/// Quadratic form `x^T M x` for a dense symmetric matrix.
pub fn quadratic_form(m: &DMatrix<f64>, x: &[f64]) -> f64 {
    let v = DVector::from_column_slice(x);
    (v.transpose() * m * &v)[(0, 0)]
}
