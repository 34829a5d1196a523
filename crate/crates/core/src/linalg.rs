//! Fixed-size dense helpers: complex 3×3 products and a cyclic Jacobi
//! eigensolver for small real symmetric matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat3 = [[Complex64; 3]; 3];
pub type CVec3 = [Complex64; 3];

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn zeros() -> CMat3 {
    [[C_ZERO; 3]; 3]
}

pub fn matmul(a: &CMat3, b: &CMat3) -> CMat3 {
    let mut out = zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    out
}

pub fn matvec(a: &CMat3, v: &CVec3) -> CVec3 {
    [
        a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
        a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
        a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2],
    ]
}

/// `[a, b] = ab - ba`
pub fn commutator(a: &CMat3, b: &CMat3) -> CMat3 {
    let ab = matmul(a, b);
    let ba = matmul(b, a);
    let mut out = zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = ab[i][j] - ba[i][j];
        }
    }
    out
}

pub fn dagger(a: &CMat3) -> CMat3 {
    let mut out = zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn trace(a: &CMat3) -> Complex64 {
    a[0][0] + a[1][1] + a[2][2]
}

/// Largest elementwise modulus.
pub fn max_abs(a: &CMat3) -> f64 {
    a.iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &CMat3, b: &CMat3) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// `|v><v|`
pub fn outer(v: &CVec3) -> CMat3 {
    let mut out = zeros();
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = v[i] * v[j].conj();
        }
    }
    out
}

pub const JACOBI_MAX_SWEEPS: usize = 100;
pub const JACOBI_REL_TOL: f64 = 1e-14;

/// Unsorted eigen-decomposition of a real symmetric `N×N` matrix by cyclic
/// Jacobi rotations.
///
/// Returns `(eigenvalues, V)` where column `k` of `V` is the eigenvector of
/// `eigenvalues[k]`. Iterates until the off-diagonal Frobenius norm is at
/// most `1e-14 * ||A||_F`, failing after [`JACOBI_MAX_SWEEPS`] sweeps. Only
/// the upper triangle of `a` is read.
pub fn jacobi_eigen<const N: usize>(a: &[[f64; N]; N]) -> Result<([f64; N], [[f64; N]; N])> {
    let mut m = [[0.0; N]; N];
    for i in 0..N {
        for j in i..N {
            if !a[i][j].is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite matrix entry ({i}, {j})"
                )));
            }
            m[i][j] = a[i][j];
            m[j][i] = a[i][j];
        }
    }
    let mut v = [[0.0; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let frob = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_REL_TOL * frob;
    let off_norm = |m: &[[f64; N]; N]| {
        let mut s = 0.0;
        for i in 0..N {
            for j in 0..N {
                if i != j {
                    s += m[i][j] * m[i][j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&m);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                // rotation angle that zeroes m[p][q]
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..N {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..N {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
        sweeps += 1;
    }

    let mut values = [0.0; N];
    for (i, value) in values.iter_mut().enumerate() {
        *value = m[i][i];
    }
    Ok((values, v))
}

/// Eigenvalues of a complex Hermitian 3×3 matrix, ascending.
///
/// Uses the real 6×6 embedding `[[Re, -Im], [Im, Re]]`, whose spectrum is
/// that of the input with every eigenvalue doubled.
pub fn hermitian_eigenvalues(a: &CMat3) -> Result<[f64; 3]> {
    let mut big = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            big[i][j] = a[i][j].re;
            big[i + 3][j + 3] = a[i][j].re;
            big[i][j + 3] = -a[i][j].im;
            big[i + 3][j] = a[i][j].im;
        }
    }
    let (mut values, _) = jacobi_eigen(&big)?;
    values.sort_by(f64::total_cmp);
    Ok([values[0], values[2], values[4]])
}
