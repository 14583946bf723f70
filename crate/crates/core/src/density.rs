use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, is_hermitian, CMatrix, CVector, HermitianEigen};
use crate::qubits;
use crate::spin_algebra::{spin_operators, Spin, SpinOperators, SpinState};

/// Hermiticity tolerance (entrywise).
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace tolerance.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

/// The space a density matrix lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HilbertSpace {
    /// A spin-j irrep (the symmetric subspace of `2j` qubits).
    Spin(Spin),
    /// All `2^N` states of `N` qubits.
    Qubits(u32),
}

impl HilbertSpace {
    pub fn dim(&self) -> usize {
        match self {
            HilbertSpace::Spin(s) => s.dim(),
            HilbertSpace::Qubits(n) => 1usize << n,
        }
    }

    pub fn collective_operators(&self) -> Result<SpinOperators> {
        match self {
            HilbertSpace::Spin(s) => Ok(spin_operators(*s)),
            HilbertSpace::Qubits(n) => qubits::collective_operators(*n),
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace operator.
///
/// Construction checks Hermiticity and trace; positivity needs a spectral
/// decomposition and is checked by [`DensityMatrix::spectrum`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let d = space.dim();
        if matrix.shape() != (d, d) {
            return Err(Error::InvalidDensityMatrix(format!(
                "shape {:?} does not match dimension {d}",
                matrix.shape()
            )));
        }
        if !is_hermitian(&matrix, HERMITIAN_TOL) {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} is not 1")));
        }
        let matrix = (&matrix + matrix.adjoint()) * c(0.5);
        Ok(Self { space, matrix })
    }

    pub fn pure(state: &SpinState) -> Self {
        let psi = state.amplitudes();
        Self {
            space: HilbertSpace::Spin(state.spin()),
            matrix: psi * psi.adjoint(),
        }
    }

    pub fn from_pure_vector(space: HilbertSpace, psi: &CVector) -> Result<Self> {
        Self::new(space, psi * psi.adjoint())
    }

    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            matrix: CMatrix::identity(d, d) * c(1.0 / d as f64),
        }
    }

    /// Convex combination; weights must be non-negative and sum to 1.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        let space = first.1.space;
        let d = space.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (w, rho) in parts {
            if *w < 0.0 || rho.space != space {
                return Err(Error::InvalidArgument(
                    "mixture needs non-negative weights over one space".into(),
                ));
            }
            acc += &rho.matrix * c(*w);
        }
        Self::new(space, acc)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigendecomposition, failing if any eigenvalue is below `-1e-10`.
    pub fn spectrum(&self) -> Result<HermitianEigen> {
        let eig = hermitian_eigen(&self.matrix);
        let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(eig)
    }

    pub fn conjugate_by(&self, unitary: &CMatrix) -> Self {
        let m = unitary * &self.matrix * unitary.adjoint();
        Self {
            space: self.space,
            matrix: (&m + m.adjoint()) * c(0.5),
        }
    }
}
