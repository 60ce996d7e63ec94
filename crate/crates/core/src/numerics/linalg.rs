//! Kronecker products, Hermitian positive-definite factorizations, and a
//! Jacobi eigensolver for Hermitian matrices.

use std::f64::consts::LN_2;

use super::cmatrix::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

/// Largest number of entries a Kronecker product may allocate (4 GiB of `C64`).
pub const MAX_KRONECKER_ENTRIES: usize = 1 << 28;

/// Relative tolerance used when checking that a matrix is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// `A ⊗ B`: block `(i, j)` of the result is `a_ij · B`.
pub fn kronecker(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) if r.checked_mul(c).is_some_and(|n| n <= MAX_KRONECKER_ENTRIES) => {
            (r, c)
        }
        _ => {
            return Err(Error::Size(format!(
                "kronecker product of {:?} and {:?} is too large",
                a.shape(),
                b.shape()
            )))
        }
    };
    let (br, bc) = b.shape();
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    }))
}

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
pub fn cholesky(a: &CMatrix) -> Result<CMatrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Input(format!(
            "cholesky of non-square {:?}",
            a.shape()
        )));
    }
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::Internal(format!(
                "matrix is not positive definite (pivot {j} = {d:e})"
            )));
        }
        let ljj = d.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Natural log-determinant of a Hermitian positive-definite matrix, accumulated
/// from the Cholesky diagonal so it never forms the determinant itself.
pub fn ln_det_hpd(a: &CMatrix) -> Result<f64> {
    let l = cholesky(a)?;
    Ok(2.0 * (0..l.rows()).map(|i| l[(i, i)].re.ln()).sum::<f64>())
}

/// Solves `A x = b` for Hermitian positive-definite `A`.
pub fn solve_hpd(a: &CMatrix, b: &CVector) -> Result<CVector> {
    let l = cholesky(a)?;
    let n = l.rows();
    if b.len() != n {
        return Err(Error::Input("right-hand side length mismatch".into()));
    }
    // L y = b
    let mut y = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)].re;
    }
    // L† x = y
    let mut x = vec![C64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)].conj() * x[k];
        }
        x[i] = s / l[(i, i)].re;
    }
    Ok(CVector::from_vec(x))
}

fn check_gain(c: f64) -> Result<()> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::Input(format!(
            "gain must be finite and >= 0, got {c}"
        )));
    }
    Ok(())
}

/// `I + c·M`, where `M` is already Hermitian.
fn shifted(m: &CMatrix, c: f64) -> CMatrix {
    let mut out = m.scale_real(c);
    for i in 0..out.rows() {
        out[(i, i)] += C64::new(1.0, 0.0);
    }
    out
}

/// `log2 det(I + c·A·A†)` in bits, computed on whichever Gram side is smaller.
pub fn gram_logdet_rate(a: &CMatrix, c: f64) -> Result<f64> {
    check_gain(c)?;
    if !a.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let gram = if a.rows() <= a.cols() {
        a.gram_outer()
    } else {
        a.gram_inner()
    };
    hpd_rate_bits(&gram, c)
}

/// `log2 det(I + c·M)` for a Hermitian positive-semidefinite `M`.
pub fn hpd_rate_bits(m: &CMatrix, c: f64) -> Result<f64> {
    check_gain(c)?;
    Ok((ln_det_hpd(&shifted(m, c))? / LN_2).max(0.0))
}

/// `([(I + c·H†H)⁻¹]₁₁)⁻¹ − 1`: the post-MMSE SINR of the stream in column 0
/// with every other column of `H` treated as interference.
pub fn mmse_residual_sinr(h: &CMatrix, c: f64) -> Result<f64> {
    check_gain(c)?;
    if !h.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    let m = shifted(&h.gram_inner(), c);
    let mut e1 = CVector::zeros(m.rows());
    e1[0] = C64::new(1.0, 0.0);
    let v = solve_hpd(&m, &e1)?;
    let d = v[0].re;
    if !(d > 0.0) {
        return Err(Error::Internal(format!("non-positive MMSE diagonal {d:e}")));
    }
    Ok((1.0 / d - 1.0).max(0.0))
}

/// Eigenvalues (descending) and unitary eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    /// `Q Λ Q†`.
    pub fn reconstruct(&self) -> CMatrix {
        let q = &self.vectors;
        let scaled = CMatrix::from_fn(q.rows(), q.cols(), |i, j| q[(i, j)] * self.values[j]);
        &scaled * &q.adjoint()
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi eigensolver.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    if !a.is_finite() {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    if !a.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::Input("matrix is not Hermitian".into()));
    }
    let n = a.rows();
    // Symmetrize so rounding asymmetry does not leak into the rotations.
    let mut m = CMatrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm_sqr();
    let target = scale * (f64::EPSILON * f64::EPSILON);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if off <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 || r * r <= target / (n * n) as f64 {
                    continue;
                }
                let phase = (apq / r).conj();
                let theta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane.
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = phase * -s;
                let jqq = phase * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = akp * jpp + akq * jqp;
                    m[(k, q)] = akp * jpq + akq * jqq;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    m[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    Ok(HermitianEigen {
        values: order.iter().map(|&i| m[(i, i)].re).collect(),
        vectors: v.select_columns(&order),
    })
}

pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(a)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kronecker_with_unit_scalar_is_identity_map() {
        let b = CMatrix::from_fn(2, 3, |i, j| c(i as f64, j as f64));
        let one = CMatrix::identity(1);
        assert_eq!(kronecker(&one, &b).unwrap(), b);
    }

    #[test]
    fn kronecker_stacks_symbol_vector() {
        // [1, x]ᵀ ⊗ x0 = [x0; x·x0]
        let x = c(0.0, 1.0);
        let x0 = CMatrix::from_row_major(2, 1, vec![c(1.0, 2.0), c(-0.5, 0.25)]).unwrap();
        let sel = CMatrix::from_row_major(2, 1, vec![c(1.0, 0.0), x]).unwrap();
        let psi = kronecker(&sel, &x0).unwrap();
        assert_eq!(psi.shape(), (4, 1));
        assert_eq!(psi[(0, 0)], x0[(0, 0)]);
        assert_eq!(psi[(1, 0)], x0[(1, 0)]);
        assert_eq!(psi[(2, 0)], x * x0[(0, 0)]);
        assert_eq!(psi[(3, 0)], x * x0[(1, 0)]);
    }

    #[test]
    fn kronecker_size_guard() {
        let big = CMatrix::zeros(1 << 14, 1);
        let wide = CMatrix::zeros(1, 1 << 15);
        assert!(matches!(kronecker(&big, &wide), Err(Error::Size(_))));
    }

    #[test]
    fn logdet_rate_trivial_values() {
        assert_eq!(gram_logdet_rate(&CMatrix::zeros(3, 2), 5.0).unwrap(), 0.0);
        let one = CMatrix::identity(1);
        assert!((gram_logdet_rate(&one, 3.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(gram_logdet_rate(&one, -1.0).is_err());
        let bad = CMatrix::from_fn(1, 1, |_, _| c(f64::INFINITY, 0.0));
        assert!(gram_logdet_rate(&bad, 1.0).is_err());
    }

    #[test]
    fn mmse_sinr_rank_one_and_zero() {
        let h =
            CMatrix::from_row_major(3, 1, vec![c(1.0, 1.0), c(0.5, 0.0), c(0.0, -2.0)]).unwrap();
        let norm = h.frobenius_norm_sqr();
        assert!((mmse_residual_sinr(&h, 2.5).unwrap() - 2.5 * norm).abs() < 1e-12);
        assert_eq!(mmse_residual_sinr(&CMatrix::zeros(4, 3), 7.0).unwrap(), 0.0);
    }

    #[test]
    fn eigen_identity_and_rank_one() {
        let vals = hermitian_eigenvalues(&CMatrix::identity(4)).unwrap();
        assert!(vals.iter().all(|&v| (v - 1.0).abs() < 1e-15));

        let g = CVector::from_vec(vec![c(1.0, -1.0), c(0.5, 2.0), c(-1.0, 0.0)]);
        let alpha = 0.7;
        let m = g.outer(&g).scale_real(alpha);
        let vals = hermitian_eigenvalues(&m).unwrap();
        assert!((vals[0] - alpha * g.norm_sqr()).abs() < 1e-12);
        assert!(vals[1].abs() < 1e-12 && vals[2].abs() < 1e-12);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = CMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(hermitian_eigen(&m).is_err());
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = CMatrix::from_real(2, 2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(matches!(cholesky(&m), Err(Error::Internal(_))));
    }
}
