//! Majorana (stellar) representation of spin-j pure states.
//!
//! Convention: the Majorana polynomial of `|psi> = sum_k a_{j, j-k} |j, j-k>` is
//!
//! ```text
//! p(z) = sum_{k=0}^{N} (-1)^k sqrt(C(N,k)) a_{j, j-k} z^{N-k},   N = 2j,
//! ```
//!
//! with leading coefficient `a_{j,j}`. A root `z` maps to the sphere point
//! `theta = 2 atan|z|`, `phi = arg z`, so the spin-coherent state pointing along
//! `(theta, phi)` has all `N` roots at that same point. `|j, j>` therefore sits
//! at the north pole and `|j, -j>` at the south pole. Each vanishing leading
//! coefficient is a root at infinity, i.e. a south-pole point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::angles::{mat3_apply, EulerAngles};
use super::operators::Spin;
use super::state::SpinState;
use crate::error::{Error, Result};
use crate::linalg::{binomial, c, eigenvalues, CMatrix, CVector};

/// A point on the unit sphere in polar/azimuthal angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub theta: f64,
    pub phi: f64,
}

impl SpherePoint {
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    pub fn from_vector(v: [f64; 3]) -> Self {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let theta = (v[2] / r).clamp(-1.0, 1.0).acos();
        let phi = v[1].atan2(v[0]).rem_euclid(std::f64::consts::TAU);
        Self { theta, phi }
    }

    /// Inverse stereographic image of a root; `None` is the root at infinity.
    pub fn from_root(z: Option<Complex64>) -> Self {
        match z {
            None => Self::south_pole(),
            Some(z) => Self {
                theta: 2.0 * z.norm().atan(),
                phi: if z.norm() == 0.0 {
                    0.0
                } else {
                    z.arg().rem_euclid(std::f64::consts::TAU)
                },
            },
        }
    }

    pub fn north_pole() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn south_pole() -> Self {
        Self {
            theta: std::f64::consts::PI,
            phi: 0.0,
        }
    }

    /// The image under the SO(3) rotation `Rz(alpha) Ry(beta) Rz(gamma)`.
    pub fn rotated(&self, angles: &EulerAngles) -> Self {
        Self::from_vector(mat3_apply(&angles.so3(), self.unit_vector()))
    }

    /// Great-circle distance.
    pub fn angle_to(&self, other: &SpherePoint) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let sin = (cross[0].powi(2) + cross[1].powi(2) + cross[2].powi(2)).sqrt();
        let cos = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        sin.atan2(cos)
    }
}

/// The `N = 2j` Majorana points of a state, counted with multiplicity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajoranaPoints {
    pub points: Vec<SpherePoint>,
}

impl MajoranaPoints {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Coefficients `c_k` multiplying `z^{N-k}`, `k = 0..=N`.
pub fn majorana_polynomial(amplitudes: &CVector) -> Vec<Complex64> {
    let n = (amplitudes.len() - 1) as u32;
    amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            a * c(sign * binomial(n, k as u32).sqrt())
        })
        .collect()
}

pub fn majorana_roots(state: &SpinState) -> Result<MajoranaPoints> {
    majorana_roots_of_amplitudes(state.amplitudes())
}

/// Majorana points of an unnormalized amplitude vector. Rejects the zero vector.
pub fn majorana_roots_of_amplitudes(amplitudes: &CVector) -> Result<MajoranaPoints> {
    if amplitudes.is_empty() {
        return Err(Error::InvalidArgument("empty amplitude vector".into()));
    }
    let coeffs = majorana_polynomial(amplitudes);
    let scale = coeffs.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::ZeroState);
    }
    let tiny = 1e-14 * scale;
    let n = coeffs.len() - 1;

    let leading_zeros = coeffs.iter().take_while(|z| z.norm() <= tiny).count();
    let trailing_zeros = coeffs.iter().rev().take_while(|z| z.norm() <= tiny).count();

    let mut points = Vec::with_capacity(n);
    points.extend(std::iter::repeat_n(SpherePoint::south_pole(), leading_zeros));
    if leading_zeros + trailing_zeros < n + 1 {
        points.extend(std::iter::repeat_n(SpherePoint::north_pole(), trailing_zeros));
        let core = &coeffs[leading_zeros..=n - trailing_zeros];
        for z in polynomial_roots(core)? {
            points.push(SpherePoint::from_root(Some(z)));
        }
    }
    debug_assert_eq!(points.len(), n);
    Ok(MajoranaPoints { points })
}

/// Roots of `sum_k coeffs[k] z^{deg-k}` with nonzero leading and trailing coefficients.
fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    match deg {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-coeffs[1] / coeffs[0]]),
        _ => {}
    }
    let lead = coeffs[0];
    // Companion matrix of the monic polynomial z^d + b_1 z^{d-1} + ... + b_d.
    let mut comp = CMatrix::zeros(deg, deg);
    for k in 0..deg {
        comp[(0, k)] = -coeffs[k + 1] / lead;
    }
    for k in 1..deg {
        comp[(k, k - 1)] = c(1.0);
    }
    let eig = eigenvalues(&comp).ok_or_else(|| {
        Error::InvalidArgument("companion eigenvalue iteration did not converge".into())
    })?;
    Ok(eig.iter().map(|&z| polish_root(coeffs, z)).collect())
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in coeffs {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// A few Newton steps, kept only while they reduce |p|.
fn polish_root(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    if z.norm() > 1e3 {
        return z;
    }
    let (mut p, mut dp) = horner(coeffs, z);
    for _ in 0..4 {
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (np, ndp) = horner(coeffs, next);
        if np.norm() >= p.norm() {
            break;
        }
        z = next;
        p = np;
        dp = ndp;
    }
    z
}

/// Builds the normalized state whose Majorana points are `points`
/// (inverse of [`majorana_roots`], up to global phase).
pub fn state_from_majorana(points: &[SpherePoint]) -> Result<SpinState> {
    let n = points.len();
    let spin = Spin::from_qubits(n as u32);
    // poly[k] multiplies z^{n-k}; start from the constant 1 placed at k = n.
    let mut poly = vec![Complex64::new(0.0, 0.0); n + 1];
    poly[n] = c(1.0);
    let mut degree = 0usize;
    for p in points {
        if p.theta > std::f64::consts::PI - 1e-12 {
            continue;
        }
        let root = Complex64::from_polar((p.theta / 2.0).tan(), p.phi);
        // multiply by (z - root): shift toward higher powers
        let mut next = vec![Complex64::new(0.0, 0.0); n + 1];
        for k in (n - degree)..=n {
            next[k - 1] += poly[k];
            next[k] -= poly[k] * root;
        }
        poly = next;
        degree += 1;
    }
    let amps = CVector::from_iterator(
        n + 1,
        poly.iter().enumerate().map(|(k, &ck)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            ck * c(sign / binomial(n as u32, k as u32).sqrt())
        }),
    );
    SpinState::normalized(spin, amps)
}
