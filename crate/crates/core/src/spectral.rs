//! Dense Hermitian kernels: eigendecomposition, definite and semidefinite
//! pencils, matrix square roots and the Moore-Penrose pseudo-inverse.
//!
//! Sizes here are desk sized (a fiber rarely exceeds a few dozen rows), so
//! everything is dense and direct.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{FrameError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Default relative rank tolerance for pseudo-inverses and range splits.
pub const DEFAULT_RTOL: f64 = 1e-12;
/// Relative tolerance for Hermitian / semidefinite membership tests.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Extremal eigenpairs of a Hermitian-definite pencil `P v = λ G v`.
#[derive(Debug, Clone)]
pub struct PencilResult {
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// Unit in the `G` inner product.
    pub vec_min: CVector,
    pub vec_max: CVector,
}

pub fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&v| c64(v))))
}

pub fn fro_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `‖M - Mᴴ‖_F / ‖M‖_F`, zero for the zero matrix.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let scale = fro_norm(m);
    if scale == 0.0 {
        return 0.0;
    }
    fro_norm(&(m - m.adjoint())) / scale
}

/// Eigenvalues in ascending order with matching unit eigenvectors (columns).
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigh(m).0.first().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(m: &CMatrix) -> f64 {
    eigh(m).0.last().copied().unwrap_or(0.0)
}

/// `V f(Λ) Vᴴ` for a Hermitian matrix.
pub fn hermitian_fn(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = eigh(m);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &lam) in values.iter().enumerate() {
        let s = c64(f(lam));
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    &scaled * vectors.adjoint()
}

/// Principal square root of a PSD matrix; slightly negative noise is clamped.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_fn(m, |l| l.max(0.0).sqrt())
}

pub fn hpd_inv_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_fn(m, |l| 1.0 / l.sqrt())
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(m.clone(), false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn sigma_max(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest of the `min(rows, cols)` singular values.
pub fn sigma_min(m: &CMatrix) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let r = hermitian_residual(m);
    if r > HERMITIAN_TOL {
        return Err(FrameError::NotHermitian(r));
    }
    Ok(())
}

/// Extremal eigenvalues of `P v = λ G v` with `G` Hermitian positive definite.
///
/// Reduced through the Cholesky factor `G = L Lᴴ` to the standard problem for
/// `L⁻¹ P L⁻ᴴ`.
pub fn pencil_extremes(p: &CMatrix, g: &CMatrix) -> Result<PencilResult> {
    if p.shape() != g.shape() || p.nrows() != p.ncols() {
        return Err(FrameError::SpaceMismatch(format!("pencil shapes {:?} and {:?}", p.shape(), g.shape())));
    }
    check_hermitian(p)?;
    check_hermitian(g)?;
    let n = p.nrows();
    let g_min = min_eigenvalue(g);
    if g_min.is_nan() || g_min <= 0.0 {
        return Err(FrameError::NotDefinite(g_min));
    }
    let chol = Cholesky::new(hermitian_part(g)).ok_or(FrameError::NotDefinite(g_min))?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse().ok_or(FrameError::NotDefinite(g_min))?;
    let reduced = &l_inv * hermitian_part(p) * l_inv.adjoint();
    let (values, vectors) = eigh(&reduced);
    let back = l_inv.adjoint();
    let lift = |k: usize| -> CVector {
        let y: CVector = vectors.column(k).into_owned();
        &back * y
    };
    Ok(PencilResult { lambda_min: values[0], lambda_max: values[n - 1], vec_min: lift(0), vec_max: lift(n - 1) })
}

/// `inf { xᴴPx / xᴴGx : xᴴGx > 0 }` for PSD `P` and `G`.
///
/// Directions in the kernel of `G` are free, so they are eliminated by a Schur
/// complement of `P` before the pencil is solved on the range of `G`. Returns
/// `+∞` when `G` vanishes.
pub fn restricted_pencil_min(p: &CMatrix, g: &CMatrix) -> Result<f64> {
    restricted_pencil_min_with(p, g, DEFAULT_RTOL)
}

pub fn restricted_pencil_min_with(p: &CMatrix, g: &CMatrix, rtol: f64) -> Result<f64> {
    restricted_pencil_argmin_with(p, g, rtol).map(|(l, _)| l)
}

/// Restricted minimum together with a minimising vector `x` (`xᴴ G x = 1`),
/// `None` when `G = 0`.
pub fn restricted_pencil_argmin(p: &CMatrix, g: &CMatrix) -> Result<(f64, Option<CVector>)> {
    restricted_pencil_argmin_with(p, g, DEFAULT_RTOL)
}

pub fn restricted_pencil_argmin_with(p: &CMatrix, g: &CMatrix, rtol: f64) -> Result<(f64, Option<CVector>)> {
    if p.shape() != g.shape() || p.nrows() != p.ncols() {
        return Err(FrameError::SpaceMismatch(format!("pencil shapes {:?} and {:?}", p.shape(), g.shape())));
    }
    check_hermitian(p)?;
    check_hermitian(g)?;
    let (p_eigs, _) = eigh(p);
    let p_scale = p_eigs.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    if let Some(&lo) = p_eigs.first() {
        if lo < -HERMITIAN_TOL * p_scale.max(f64::MIN_POSITIVE) {
            return Err(FrameError::NotPsd(lo));
        }
    }
    let (g_eigs, g_vecs) = eigh(g);
    let g_scale = g_eigs.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    if let Some(&lo) = g_eigs.first() {
        if lo < -HERMITIAN_TOL * g_scale.max(f64::MIN_POSITIVE) {
            return Err(FrameError::NotPsd(lo));
        }
    }
    if g_scale == 0.0 {
        return Ok((f64::INFINITY, None));
    }
    let cutoff = rtol * g_scale;
    let range: Vec<usize> = (0..g_eigs.len()).filter(|&i| g_eigs[i] > cutoff).collect();
    let kernel: Vec<usize> = (0..g_eigs.len()).filter(|&i| g_eigs[i] <= cutoff).collect();

    let rotated = g_vecs.adjoint() * hermitian_part(p) * &g_vecs;
    let block =
        |rows: &[usize], cols: &[usize]| CMatrix::from_fn(rows.len(), cols.len(), |i, j| rotated[(rows[i], cols[j])]);
    let mut schur = block(&range, &range);
    // maps the range coordinates u to the kernel coordinates minimising the form
    let mut elim = CMatrix::zeros(kernel.len(), range.len());
    if !kernel.is_empty() {
        let p_rk = block(&range, &kernel);
        let p_kk = block(&kernel, &kernel);
        elim = -(pinv_cutoff(&p_kk, rtol * p_scale) * p_rk.adjoint());
        schur += &p_rk * &elim;
    }
    let inv_sqrt: Vec<f64> = range.iter().map(|&i| 1.0 / g_eigs[i].sqrt()).collect();
    let scaled =
        hermitian_part(&CMatrix::from_fn(range.len(), range.len(), |i, j| schur[(i, j)] * inv_sqrt[i] * inv_sqrt[j]));
    let (vals, vecs) = eigh(&scaled);
    let y = vecs.column(0);
    let u = CVector::from_fn(range.len(), |i, _| y[i] * inv_sqrt[i]);
    let w = &elim * &u;
    let mut z = CVector::zeros(g_eigs.len());
    for (i, &r) in range.iter().enumerate() {
        z[r] = u[i];
    }
    for (i, &k) in kernel.iter().enumerate() {
        z[k] = w[i];
    }
    Ok((vals[0], Some(&g_vecs * z)))
}

/// Moore-Penrose pseudo-inverse; singular values below `rtol · σ_max` count as zero.
pub fn pinv(m: &CMatrix, rtol: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(cols, rows);
    }
    pinv_cutoff(m, rtol * sigma_max(m))
}

/// Pseudo-inverse with an absolute singular-value cutoff.
pub fn pinv_cutoff(m: &CMatrix, cutoff: f64) -> CMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return CMatrix::zeros(cols, rows);
    }
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut out = CMatrix::zeros(cols, rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            let vk = v_t.row(k).adjoint();
            let uk = u.column(k).adjoint();
            out += (vk * uk).scale(1.0 / s);
        }
    }
    out
}

/// Solve `M x = b` for square nonsingular `M`.
pub fn solve(m: &CMatrix, b: &CVector) -> Option<CVector> {
    m.clone().lu().solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cm(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_fn(rows.len(), rows[0].len(), |i, j| c64(rows[i][j]))
    }

    fn rand_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
        CMatrix::from_fn(r, c, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn quad(m: &CMatrix, x: &CVector) -> f64 {
        (x.adjoint() * m * x)[(0, 0)].re
    }

    #[test]
    fn pencil_examples() {
        let r = pencil_extremes(&identity(2), &identity(2)).unwrap();
        assert!((r.lambda_min - 1.0).abs() < 1e-14 && (r.lambda_max - 1.0).abs() < 1e-14);
        let r = pencil_extremes(&real_diag(&[1.0, 4.0]), &identity(2)).unwrap();
        assert!((r.lambda_min - 1.0).abs() < 1e-14 && (r.lambda_max - 4.0).abs() < 1e-14);
    }

    #[test]
    fn pencil_diag_against_ratio_scan() {
        // oracle: scan xᴴPx / xᴴGx over random vectors
        let p = real_diag(&[1.0, 4.0]);
        let g = real_diag(&[1.0, 2.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..20_000 {
            let x = rand_matrix(&mut rng, 2, 1).column(0).into_owned();
            let r = quad(&p, &x) / quad(&g, &x);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(lo >= 1.0 - 1e-12 && hi <= 2.0 + 1e-12);
        assert!((lo - 1.0).abs() < 1e-2 && (hi - 2.0).abs() < 1e-2);
        let r = pencil_extremes(&p, &g).unwrap();
        assert!((r.lambda_min - 1.0).abs() < 1e-13);
        assert!((r.lambda_max - 2.0).abs() < 1e-13);
    }

    #[test]
    fn pencil_vectors_reproduce_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..6 {
            let a = rand_matrix(&mut rng, n, n);
            let b = rand_matrix(&mut rng, n, n);
            let p = hermitian_part(&a);
            let g = &b * b.adjoint() + identity(n).scale(0.1);
            let r = pencil_extremes(&p, &g).unwrap();
            assert!(r.lambda_min <= r.lambda_max);
            for (v, lam) in [(&r.vec_min, r.lambda_min), (&r.vec_max, r.lambda_max)] {
                assert!((quad(&g, v) - 1.0).abs() < 1e-10);
                assert!((quad(&p, v) - lam).abs() < 1e-10 * (1.0 + lam.abs()));
            }
            let scaled = pencil_extremes(&p.scale(3.5), &g.scale(3.5)).unwrap();
            assert!((scaled.lambda_min - r.lambda_min).abs() < 1e-10 * (1.0 + r.lambda_min.abs()));
            assert!((scaled.lambda_max - r.lambda_max).abs() < 1e-10 * (1.0 + r.lambda_max.abs()));
        }
    }

    #[test]
    fn pencil_errors() {
        let p = cm(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(pencil_extremes(&p, &identity(2)), Err(FrameError::NotHermitian(_))));
        assert!(matches!(pencil_extremes(&identity(2), &real_diag(&[1.0, -1.0])), Err(FrameError::NotDefinite(_))));
    }

    #[test]
    fn restricted_min_examples() {
        assert!((restricted_pencil_min(&identity(2), &identity(2)).unwrap() - 1.0).abs() < 1e-14);
        let v = restricted_pencil_min(&real_diag(&[3.0, 7.0]), &real_diag(&[1.0, 0.0])).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
        assert_eq!(restricted_pencil_min(&identity(2), &CMatrix::zeros(2, 2)).unwrap(), f64::INFINITY);
        assert!(matches!(restricted_pencil_min(&real_diag(&[1.0, -1.0]), &identity(2)), Err(FrameError::NotPsd(_))));
    }

    #[test]
    fn restricted_min_uses_kernel_directions() {
        // x = (1, -1) has xᴴGx = 1 and xᴴPx = 0, so the infimum is 0 even
        // though P restricted to range(G) is 1.
        let p = cm(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let g = real_diag(&[1.0, 0.0]);
        assert!(restricted_pencil_min(&p, &g).unwrap().abs() < 1e-14);
    }

    #[test]
    fn restricted_min_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..4 {
            let m = rand_matrix(&mut rng, 3, 3);
            // full-rank and rank-2 G
            let nrows = if trial % 2 == 0 { 3 } else { 2 };
            let nmat = rand_matrix(&mut rng, nrows, 3);
            let p = m.adjoint() * &m;
            let g = nmat.adjoint() * &nmat;
            let computed = restricted_pencil_min(&p, &g).unwrap();
            let mut brute = f64::INFINITY;
            for _ in 0..100_000 {
                let x = rand_matrix(&mut rng, 3, 1).column(0).into_owned();
                let den = quad(&g, &x);
                if den > 1e-12 {
                    brute = brute.min(quad(&p, &x) / den);
                }
            }
            // the sampled minimum can only overshoot the true infimum
            assert!(brute >= computed - 1e-10, "trial {trial}: brute {brute} < {computed}");
            if nrows == 3 {
                let definite = pencil_extremes(&p, &g).unwrap().lambda_min;
                assert!((definite - computed).abs() < 1e-9 * (1.0 + definite.abs()));
                // the sampled minimiser converges slowly; refine with the eigenvector
                let r = pencil_extremes(&p, &g).unwrap();
                assert!((quad(&p, &r.vec_min) / quad(&g, &r.vec_min) - computed).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn restricted_argmin_attains_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..20 {
            let n = 2 + trial % 4;
            let m = rand_matrix(&mut rng, n, n);
            let nmat = rand_matrix(&mut rng, 1 + trial % n, n);
            let p = m.adjoint() * &m;
            let g = nmat.adjoint() * &nmat;
            let (lam, x) = restricted_pencil_argmin(&p, &g).unwrap();
            let x = x.unwrap();
            assert!((quad(&g, &x) - 1.0).abs() < 1e-8);
            assert!((quad(&p, &x) - lam).abs() < 1e-8 * (1.0 + lam.abs()));
        }
        let (lam, x) = restricted_pencil_argmin(&identity(2), &CMatrix::zeros(2, 2)).unwrap();
        assert!(lam.is_infinite() && x.is_none());
    }

    #[test]
    fn pinv_examples() {
        assert!(fro_norm(&(pinv(&identity(3), DEFAULT_RTOL) - identity(3))) < 1e-14);
        assert_eq!(pinv(&CMatrix::zeros(2, 3), DEFAULT_RTOL), CMatrix::zeros(3, 2));
        let proj = real_diag(&[1.0, 0.0]);
        assert!(fro_norm(&(pinv(&proj, DEFAULT_RTOL) - &proj)) < 1e-14);
    }

    #[test]
    fn pinv_penrose_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(r, c, rank) in &[(3, 3, 2), (4, 2, 2), (2, 5, 1), (5, 5, 5)] {
            let m = rand_matrix(&mut rng, r, rank) * rand_matrix(&mut rng, rank, c);
            let x = pinv(&m, DEFAULT_RTOL);
            let tol = 1e-10 * fro_norm(&m).max(1.0);
            assert!(fro_norm(&(&m * &x * &m - &m)) < tol);
            assert!(fro_norm(&(&x * &m * &x - &x)) < tol * fro_norm(&x).max(1.0));
            assert!(fro_norm(&((&m * &x).adjoint() - &m * &x)) < tol);
            assert!(fro_norm(&((&x * &m).adjoint() - &x * &m)) < tol);
        }
    }

    #[test]
    fn sqrt_and_eigh() {
        let r = psd_sqrt(&real_diag(&[4.0, 9.0]));
        assert!(fro_norm(&(r - real_diag(&[2.0, 3.0]))) < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = rand_matrix(&mut rng, 3, 3);
        let h = &a * a.adjoint() + identity(3);
        let r = psd_sqrt(&h);
        assert!(fro_norm(&(&r * &r - &h)) < 1e-12 * fro_norm(&h));
        let w = hpd_inv_sqrt(&h);
        assert!(fro_norm(&(&w * &h * &w - identity(3))) < 1e-12);
    }
}
