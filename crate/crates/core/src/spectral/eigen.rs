//! Dense complex eigen-decomposition.
//!
//! Householder reduction to upper Hessenberg form, implicit single-shift QR
//! sweeps with Wilkinson shifts to reach a complex Schur form `A = Z T Z^H`,
//! then back-substitution on `T` for the eigenvectors. Every eigenpair comes back
//! with its residual `||A v - lambda v||_inf` measured against the input matrix.

use thiserror::Error;

use crate::linalg::{max_abs, vec_norm, DenseMatrix};
use crate::scalar::{Cx, Real};

#[derive(Debug, Error)]
pub enum EigenError {
    #[error(
        "QR iteration did not converge after {iterations} sweeps (dimension {dimension})\n{matrix}"
    )]
    ConvergenceFailure {
        iterations: usize,
        dimension: usize,
        /// The offending input, one row per line.
        matrix: String,
    },
    #[error("matrix contains non-finite entries")]
    NonFinite,
}

#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub values: Vec<Cx<T>>,
    /// Unit 2-norm eigenvectors, `vectors[j]` belongs to `values[j]`.
    pub vectors: Vec<Vec<Cx<T>>>,
    pub residuals: Vec<T>,
}

/// Sweeps allowed per matrix dimension before giving up.
const SWEEPS_PER_DIM: usize = 60;

pub fn eigen_decompose<T: Real>(a: &DenseMatrix<T>) -> Result<EigenDecomposition<T>, EigenError> {
    let n = a.dim();
    for i in 0..n {
        if a.row(i)
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(EigenError::NonFinite);
        }
    }
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: vec![],
            residuals: vec![],
        });
    }

    let (mut h, mut z) = hessenberg(a);
    schur_qr(&mut h, &mut z).map_err(|iterations| EigenError::ConvergenceFailure {
        iterations,
        dimension: n,
        matrix: dump(a),
    })?;

    let values: Vec<Cx<T>> = (0..n).map(|i| h[(i, i)]).collect();
    let vectors = triangular_eigenvectors(&h, &z);
    let residuals = vectors
        .iter()
        .zip(&values)
        .map(|(v, &lam)| {
            let av = a.mul_vec(v);
            let diff: Vec<Cx<T>> = av.iter().zip(v).map(|(x, y)| *x - lam * *y).collect();
            max_abs(&diff)
        })
        .collect();

    Ok(EigenDecomposition {
        values,
        vectors,
        residuals,
    })
}

fn dump<T: Real>(a: &DenseMatrix<T>) -> String {
    let mut out = String::new();
    for i in 0..a.dim() {
        let row: Vec<String> = a
            .row(i)
            .iter()
            .map(|z| format!("{:e}{:+e}i", z.re, z.im))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Returns `(H, Q)` with `A = Q H Q^H`, `H` upper Hessenberg.
fn hessenberg<T: Real>(a: &DenseMatrix<T>) -> (DenseMatrix<T>, DenseMatrix<T>) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = DenseMatrix::identity(n);
    let zero = Cx::new(T::zero(), T::zero());
    let two = T::lit(2.0);

    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<Cx<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&v);
        if xnorm == T::zero() {
            continue;
        }
        let x0 = v[0];
        let ph = if x0.norm() == T::zero() {
            Cx::new(T::one(), T::zero())
        } else {
            x0 / x0.norm()
        };
        let alpha = -ph * xnorm;
        v[0] -= alpha;
        let vn = vec_norm(&v);
        if vn == T::zero() {
            continue;
        }
        for e in v.iter_mut() {
            *e /= vn;
        }

        // H <- (I - 2 v v^H) H on rows k+1..n
        for j in k..n {
            let mut s = zero;
            for (i, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + i, j)];
            }
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= *vi * s * two;
            }
        }
        // H <- H (I - 2 v v^H) and Q <- Q (I - 2 v v^H) on columns k+1..n
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = zero;
                for (j, vj) in v.iter().enumerate() {
                    s += m[(i, k + 1 + j)] * *vj;
                }
                for (j, vj) in v.iter().enumerate() {
                    m[(i, k + 1 + j)] -= s * vj.conj() * two;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = zero;
        }
    }
    (h, q)
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [x; y] = [r; 0]`.
fn givens<T: Real>(x: Cx<T>, y: Cx<T>) -> (T, Cx<T>) {
    let (ax, ay) = (x.norm(), y.norm());
    if ay == T::zero() {
        return (T::one(), Cx::new(T::zero(), T::zero()));
    }
    if ax == T::zero() {
        return (T::zero(), y.conj() / ay);
    }
    let nrm = ax.hypot(ay);
    let alpha = x / ax;
    (ax / nrm, alpha * y.conj() / nrm)
}

fn rotate_rows<T: Real>(
    h: &mut DenseMatrix<T>,
    k: usize,
    c: T,
    s: Cx<T>,
    cols: std::ops::Range<usize>,
) {
    for j in cols {
        let (a, b) = (h[(k, j)], h[(k + 1, j)]);
        h[(k, j)] = a * c + s * b;
        h[(k + 1, j)] = -s.conj() * a + b * c;
    }
}

fn rotate_cols<T: Real>(
    m: &mut DenseMatrix<T>,
    k: usize,
    c: T,
    s: Cx<T>,
    rows: std::ops::Range<usize>,
) {
    for i in rows {
        let (a, b) = (m[(i, k)], m[(i, k + 1)]);
        m[(i, k)] = a * c + b * s.conj();
        m[(i, k + 1)] = -a * s + b * c;
    }
}

/// Reduces Hessenberg `h` to upper triangular in place, accumulating into `z`.
/// On failure returns the number of sweeps spent.
fn schur_qr<T: Real>(h: &mut DenseMatrix<T>, z: &mut DenseMatrix<T>) -> Result<(), usize> {
    let n = h.dim();
    let eps = T::epsilon();
    let hnorm = h.frobenius_norm().max(T::min_positive_value());
    let max_sweeps = SWEEPS_PER_DIM * n.max(10);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut since_deflation = 0usize;

    while hi > 0 {
        // find the start of the unreduced active block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut tst = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if tst == T::zero() {
                tst = hnorm;
            }
            if sub <= eps * tst || sub <= T::min_positive_value() * T::lit(1e4) {
                h[(lo, lo - 1)] = Cx::new(T::zero(), T::zero());
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > max_sweeps {
            return Err(total);
        }

        let mu = if since_deflation.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Cx::new(h[(hi, hi - 1)].norm() * T::lit(0.75), T::zero())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..hi {
            let (x, y) = if k == lo {
                (h[(lo, lo)] - mu, h[(lo + 1, lo)])
            } else {
                (h[(k, k - 1)], h[(k + 1, k - 1)])
            };
            let (c, s) = givens(x, y);
            let start = if k == lo { lo } else { k - 1 };
            rotate_rows(h, k, c, s, start..n);
            if k > lo {
                h[(k + 1, k - 1)] = Cx::new(T::zero(), T::zero());
            }
            let last = (k + 2).min(hi);
            rotate_cols(h, k, c, s, 0..last + 1);
            rotate_cols(z, k, c, s, 0..n);
        }
    }
    Ok(())
}

fn wilkinson_shift<T: Real>(a: Cx<T>, b: Cx<T>, c: Cx<T>, d: Cx<T>) -> Cx<T> {
    let half = T::lit(0.5);
    let tr_half = (a + d) * half;
    let diff_half = (a - d) * half;
    let disc = (diff_half * diff_half + b * c).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn triangular_eigenvectors<T: Real>(t: &DenseMatrix<T>, z: &DenseMatrix<T>) -> Vec<Vec<Cx<T>>> {
    let n = t.dim();
    let eps = T::epsilon();
    let tnorm = t.frobenius_norm();
    let smin = (eps * tnorm).max(T::min_positive_value() * T::lit(1e4));
    let zero = Cx::new(T::zero(), T::zero());

    (0..n)
        .map(|k| {
            let lam = t[(k, k)];
            let mut y = vec![zero; k + 1];
            y[k] = Cx::new(T::one(), T::zero());
            for j in (0..k).rev() {
                let mut s = zero;
                for m in j + 1..=k {
                    s += t[(j, m)] * y[m];
                }
                let mut d = t[(j, j)] - lam;
                if d.norm() < smin {
                    d = Cx::new(smin, T::zero());
                }
                y[j] = -s / d;
            }
            let mut v = vec![zero; n];
            for (i, vi) in v.iter_mut().enumerate() {
                let mut s = zero;
                for (m, ym) in y.iter().enumerate() {
                    s += z[(i, m)] * *ym;
                }
                *vi = s;
            }
            let nv = vec_norm(&v);
            for e in v.iter_mut() {
                *e /= nv;
            }
            v
        })
        .collect()
}
