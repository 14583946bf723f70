use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, I};

/// A spin quantum number `j`, stored as the integer `2j`. Serialized as `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "f64", try_from = "f64")]
pub struct Spin {
    twice_j: u32,
}

impl From<Spin> for f64 {
    fn from(s: Spin) -> f64 {
        s.j()
    }
}

impl TryFrom<f64> for Spin {
    type Error = Error;
    fn try_from(j: f64) -> Result<Self> {
        Spin::from_j(j)
    }
}

impl Spin {
    pub const fn from_twice(twice_j: u32) -> Self {
        Self { twice_j }
    }

    /// `j = N/2` for `N` qubits.
    pub const fn from_qubits(n: u32) -> Self {
        Self { twice_j: n }
    }

    pub fn from_j(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !j.is_finite() || j < 0.0 || (twice - twice.round()).abs() > 1e-9 || twice > 1e6 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self {
            twice_j: twice.round() as u32,
        })
    }

    pub fn j(&self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    /// Number of spin-1/2 constituents, `N = 2j`.
    pub fn n_qubits(&self) -> u32 {
        self.twice_j
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// `m` for Dicke index `k`, with the basis ordered `m = j, j-1, ..., -j`.
    pub fn m(&self, k: usize) -> f64 {
        self.j() - k as f64
    }

    pub fn casimir(&self) -> f64 {
        let j = self.j();
        j * (j + 1.0)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j % 2 == 0 {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// Collective spin components on some representation space.
///
/// For an irrep these come from [`spin_operators`]; the full `2^N`-dimensional
/// qubit representation is built in [`crate::qubits`].
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
}

impl SpinOperators {
    pub fn dim(&self) -> usize {
        self.jz.nrows()
    }

    pub fn components(&self) -> [&CMatrix; 3] {
        [&self.jx, &self.jy, &self.jz]
    }

    /// `c_x Jx + c_y Jy + c_z Jz`.
    pub fn combine(&self, coeffs: [f64; 3]) -> CMatrix {
        &self.jx * c(coeffs[0]) + &self.jy * c(coeffs[1]) + &self.jz * c(coeffs[2])
    }
}

/// Standard ladder-operator construction in the `|j, m>` basis, `m = j .. -j`.
pub fn spin_operators(spin: Spin) -> SpinOperators {
    let d = spin.dim();
    let j = spin.j();
    let mut jp = CMatrix::zeros(d, d);
    // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; row k-1 holds m+1.
    for k in 1..d {
        let m = spin.m(k);
        jp[(k - 1, k)] = c((j * (j + 1.0) - m * (m + 1.0)).sqrt());
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5);
    let jy = (&jp - &jm) * (-0.5 * I);
    let jz = CMatrix::from_fn(d, d, |r, col| {
        if r == col {
            c(spin.m(r))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    SpinOperators { jx, jy, jz }
}

/// [`spin_operators`] for a possibly non-half-integer `j`.
pub fn spin_operators_for_j(j: f64) -> Result<SpinOperators> {
    Ok(spin_operators(Spin::from_j(j)?))
}
