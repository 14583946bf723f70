//! Dense complex helpers on top of nalgebra.
//!
//! Matrices here are small (spin-j irreps, 2j+1 <= a few dozen) except for the
//! full 2^N qubit space used by the depolarizing checks, which reaches 1024.
//! For that size complex products are routed through real GEMM.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dimension from which complex products go through four real products.
const SPLIT_GEMM_MIN_DIM: usize = 48;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `eigenvalues`.
    pub eigenvectors: CMatrix,
}

/// Hermitian eigendecomposition. Real-symmetric input takes the cheaper real path.
pub fn hermitian_eigen(m: &CMatrix) -> HermitianEigen {
    let n = m.nrows();
    let is_real = m.iter().all(|z| z.im == 0.0);

    let (values, vectors): (Vec<f64>, CMatrix) = if is_real {
        let re = DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)].re + m[(j, i)].re));
        let eig = re.symmetric_eigen();
        (
            eig.eigenvalues.iter().copied().collect(),
            eig.eigenvectors.map(c),
        )
    } else {
        let sym = (m + m.adjoint()) * c(0.5);
        let eig = sym.symmetric_eigen();
        (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// `exp(-i t H)` for Hermitian `H`, through its eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = hermitian_eigen(h);
    let v = &eig.eigenvectors;
    let phases = CVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -t * l)),
    );
    let scaled = CMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * phases[j]);
    mul(&scaled, &v.adjoint())
}

/// Complex product, split into real GEMMs once the matrices are large.
pub fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    if a.nrows().min(a.ncols()).min(b.ncols()) < SPLIT_GEMM_MIN_DIM {
        return a * b;
    }
    let (ar, ai) = split(a);
    let (br, bi) = split(b);
    let mut re = DMatrix::<f64>::zeros(a.nrows(), b.ncols());
    let mut im = DMatrix::<f64>::zeros(a.nrows(), b.ncols());
    re.gemm(1.0, &ar, &br, 0.0);
    if let (Some(ai), Some(bi)) = (&ai, &bi) {
        re.gemm(-1.0, ai, bi, 1.0);
    }
    if let Some(bi) = &bi {
        im.gemm(1.0, &ar, bi, 0.0);
    }
    if let Some(ai) = &ai {
        im.gemm(1.0, ai, &br, 1.0);
    }
    CMatrix::from_fn(a.nrows(), b.ncols(), |i, j| {
        Complex64::new(re[(i, j)], im[(i, j)])
    })
}

fn split(m: &CMatrix) -> (DMatrix<f64>, Option<DMatrix<f64>>) {
    let re = m.map(|z| z.re);
    let im = if m.iter().any(|z| z.im != 0.0) {
        Some(m.map(|z| z.im))
    } else {
        None
    };
    (re, im)
}

/// `V^dagger A V`.
pub fn sandwich(v: &CMatrix, a: &CMatrix) -> CMatrix {
    mul(&v.adjoint(), &mul(a, v))
}

/// `<psi|A|psi>`.
pub fn expectation(a: &CMatrix, psi: &CVector) -> Complex64 {
    psi.dotc(&(a * psi))
}

/// `|<a|b>|^2`, the global-phase-blind overlap.
pub fn fidelity(a: &CVector, b: &CVector) -> f64 {
    a.dotc(b).norm_sqr()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    mul(a, b) - mul(b, a)
}

/// Eigenvalues of a general complex square matrix.
///
/// Hessenberg reduction followed by single-shift complex QR with Wilkinson
/// shifts and periodic exceptional shifts. The exceptional shifts matter for
/// cyclic matrices such as the companion of `z^N - 1`, on which plain
/// Wilkinson-shifted QR can stall.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<Complex64>> {
    assert!(m.is_square());
    let n = m.nrows();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut h = m.clone().hessenberg().h();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            break;
        }
        // find the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= eps * diag.max(f64::MIN_POSITIVE) {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > 100 * n {
            return None;
        }
        let shift = if iter % 11 == 0 {
            let t = h[(hi, hi - 1)].norm()
                + if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + Complex64::from_polar(0.75 * t, 0.3 * iter as f64)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    Some(out)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c_: Complex64, d: Complex64) -> Complex64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c_;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One shifted QR step `H - mu = QR, H <- RQ + mu` on the window `lo..=hi`.
fn qr_sweep(h: &mut CMatrix, lo: usize, hi: usize, mu: Complex64) {
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (cs, sn) = if r == 0.0 {
            (c(1.0), Complex64::new(0.0, 0.0))
        } else {
            (a / r, b / r)
        };
        for col in k..=hi {
            let x = h[(k, col)];
            let y = h[(k + 1, col)];
            h[(k, col)] = cs.conj() * x + sn.conj() * y;
            h[(k + 1, col)] = -sn * x + cs * y;
        }
        rots.push((cs, sn));
    }
    for (i, &(cs, sn)) in rots.iter().enumerate() {
        let k = lo + i;
        for row in lo..=(k + 1).min(hi) {
            let x = h[(row, k)];
            let y = h[(row, k + 1)];
            h[(row, k)] = x * cs + y * sn;
            h[(row, k + 1)] = -x * sn.conj() + y * cs.conj();
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

/// Binomial coefficient as a float; exact for the sizes used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}
