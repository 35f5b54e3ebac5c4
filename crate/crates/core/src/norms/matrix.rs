use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tolerance::PSD_SQRT_CLAMP;

/// A dense complex square matrix, an element of `L_p(M_d)` with the
/// unnormalized trace.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixOperand {
    entries: DMatrix<Complex64>,
}

impl MatrixOperand {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidParameter(format!(
                "matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Numerical("non-finite matrix entry".into()));
        }
        Ok(MatrixOperand { entries })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidParameter("ragged matrix rows".into()));
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        MatrixOperand { entries: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)) }
    }

    pub fn identity(d: usize) -> Self {
        MatrixOperand { entries: DMatrix::identity(d, d) }
    }

    /// The matrix unit `e_{ij}` (0-based).
    pub fn unit(d: usize, i: usize, j: usize) -> Self {
        let mut entries = DMatrix::zeros(d, d);
        entries[(i, j)] = Complex64::new(1.0, 0.0);
        MatrixOperand { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        MatrixOperand { entries: self.entries.adjoint() }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.entries.clone().singular_values().iter().copied().collect()
    }

    /// `sum_j c_j x_j` over operands of a common dimension.
    pub fn combination(xs: &[MatrixOperand], coeffs: &[f64]) -> Result<Self> {
        let d = common_dim(xs)?;
        let mut acc = DMatrix::zeros(d, d);
        for (x, &c) in xs.iter().zip(coeffs) {
            acc += &x.entries * Complex64::new(c, 0.0);
        }
        Ok(MatrixOperand { entries: acc })
    }
}

pub(crate) fn common_dim(xs: &[MatrixOperand]) -> Result<usize> {
    let d = xs.first().ok_or_else(|| Error::Precondition("no matrices".into()))?.dim();
    if let Some(x) = xs.iter().find(|x| x.dim() != d) {
        return Err(Error::InvalidParameter(format!("dimension mismatch: {d} vs {}", x.dim())));
    }
    Ok(d)
}

fn clamp(eigenvalues: impl Iterator<Item = f64>, scale: f64) -> Result<Vec<f64>> {
    eigenvalues
        .map(|l| {
            if l >= 0.0 {
                Ok(l)
            } else if l >= PSD_SQRT_CLAMP * scale {
                Ok(0.0)
            } else {
                Err(Error::Numerical(format!("matrix is not positive semidefinite (eigenvalue {l})")))
            }
        })
        .collect()
}

fn entry_scale(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

/// Eigenvalues of a Hermitian PSD matrix; small negative values from
/// rounding are clamped to zero.
pub(crate) fn psd_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    clamp(SymmetricEigen::new(a.clone()).eigenvalues.iter().copied(), entry_scale(a))
}

/// `a^{1/2}` for Hermitian PSD `a`.
pub fn psd_sqrt(a: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let eig = SymmetricEigen::new(a.clone());
    let roots = clamp(eig.eigenvalues.iter().copied(), entry_scale(a))?;
    let d = nalgebra::DVector::from_iterator(roots.len(), roots.iter().map(|l| Complex64::new(l.sqrt(), 0.0)));
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.adjoint())
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
}

impl Serialize for MatrixOperand {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let rows = |part: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..d).map(|i| (0..d).map(|j| part(&self.entries[(i, j)])).collect()).collect()
        };
        let im = rows(|z| z.im);
        let repr = MatrixRepr {
            re: rows(|z| z.re),
            im: if im.iter().flatten().all(|&x| x == 0.0) { None } else { Some(im) },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatrixOperand {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = MatrixRepr::deserialize(deserializer)?;
        let d = repr.re.len();
        let im = repr.im.unwrap_or_else(|| vec![vec![0.0; d]; d]);
        if repr.re.iter().chain(&im).any(|r| r.len() != d) || im.len() != d {
            return Err(D::Error::custom("matrix must be square with matching re/im parts"));
        }
        MatrixOperand::new(DMatrix::from_fn(d, d, |i, j| Complex64::new(repr.re[i][j], im[i][j])))
            .map_err(D::Error::custom)
    }
}
