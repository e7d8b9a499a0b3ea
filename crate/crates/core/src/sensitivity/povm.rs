use nalgebra::DVector;
use num_complex::Complex64;

use crate::qcore::{ComplexMatrix, HermitianObservable, ONE, ZERO};
use crate::{Error, Result, Tolerances};

/// Generalized readout `{E(m)}` on the meter space.
///
/// Each element is held in factored form `E(m) = Σ_k |w_k⟩⟨w_k|` (weighted
/// eigenvectors), so probabilities are sums of squared moduli and stay
/// accurate next to zero. Full matrices are rebuilt on request only, which
/// keeps large rank-1 readouts cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutPOVM {
    dim: usize,
    labels: Vec<String>,
    factors: Vec<Vec<DVector<Complex64>>>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|m| m.to_string()).collect()
}

impl ReadoutPOVM {
    /// Validates Hermiticity, positivity and completeness of explicit elements.
    pub fn from_elements(elements: &[ComplexMatrix], labels: Option<Vec<String>>, tol: &Tolerances) -> Result<Self> {
        let dim = elements.first().map_or(0, ComplexMatrix::rows);
        if elements.is_empty() || dim == 0 {
            return Err(Error::InvalidPovm {
                reason: "no outcomes".into(),
                max_deviation: 1.0,
            });
        }
        let labels = check_labels(labels, elements.len())?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        let mut factors = Vec::with_capacity(elements.len());
        for (m, e) in elements.iter().enumerate() {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.rows().max(e.cols()),
                });
            }
            let obs = HermitianObservable::with_tolerance(e.clone(), tol.herm).map_err(|err| match err {
                Error::NotHermitian { row, col, deviation } => Error::InvalidPovm {
                    reason: format!("element {m} is not Hermitian at ({row},{col})"),
                    max_deviation: deviation,
                },
                other => other,
            })?;
            let lowest = obs.eigenvalues()[0];
            if lowest < -tol.psd {
                return Err(Error::InvalidPovm {
                    reason: format!("element {m} has negative eigenvalue"),
                    max_deviation: -lowest,
                });
            }
            let weighted = obs
                .eigenvalues()
                .iter()
                .enumerate()
                .filter(|(_, &lambda)| lambda > 0.0)
                .map(|(k, &lambda)| obs.eigenvectors().column(k) * Complex64::new(lambda.sqrt(), 0.0))
                .collect();
            factors.push(weighted);
            sum = &sum + e;
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > tol.povm {
            return Err(Error::InvalidPovm {
                reason: "elements do not sum to the identity".into(),
                max_deviation: deviation,
            });
        }
        Ok(ReadoutPOVM { dim, labels, factors })
    }

    /// Rank-1 projective readout onto an orthonormal basis `{|m⟩}`.
    pub fn projective(basis: Vec<DVector<Complex64>>, labels: Option<Vec<String>>, tol: &Tolerances) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::InvalidPovm {
                reason: "no outcomes".into(),
                max_deviation: 1.0,
            });
        }
        if let Some(v) = basis.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let labels = check_labels(labels, dim)?;
        let mut deviation: f64 = 0.0;
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate().skip(i) {
                let target = if i == j { ONE } else { ZERO };
                deviation = deviation.max((u.dotc(v) - target).norm());
            }
        }
        if deviation > tol.povm {
            return Err(Error::InvalidPovm {
                reason: "projective basis is not orthonormal".into(),
                max_deviation: deviation,
            });
        }
        Ok(ReadoutPOVM {
            dim,
            labels,
            factors: basis.into_iter().map(|v| vec![v]).collect(),
        })
    }

    /// Projective readout whose basis vectors are the rows of `basis`.
    pub fn projective_rows(basis: &ComplexMatrix, labels: Option<Vec<String>>, tol: &Tolerances) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch {
                expected: basis.rows(),
                found: basis.cols(),
            });
        }
        let vectors = basis
            .to_rows()
            .into_iter()
            .map(DVector::from_vec)
            .collect();
        Self::projective(vectors, labels, tol)
    }

    /// Single-outcome readout `{I}`.
    pub fn trivial(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| DVector::from_fn(dim, |r, _| if r == i { ONE } else { ZERO }))
            .collect();
        ReadoutPOVM {
            dim,
            labels: default_labels(1),
            factors: vec![basis],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Dense matrix of element `m`.
    pub fn element(&self, m: usize) -> Result<ComplexMatrix> {
        let factors = self.factors.get(m).ok_or(Error::IndexOutOfRange {
            index: m,
            len: self.len(),
        })?;
        let mut e = ComplexMatrix::zeros(self.dim, self.dim);
        for w in factors {
            e = &e + &ComplexMatrix::outer(w, w);
        }
        Ok(e)
    }

    pub fn elements(&self) -> Vec<ComplexMatrix> {
        (0..self.len()).map(|m| self.element(m).unwrap()).collect()
    }

    pub(crate) fn factors(&self) -> &[Vec<DVector<Complex64>>] {
        &self.factors
    }
}

fn check_labels(labels: Option<Vec<String>>, n: usize) -> Result<Vec<String>> {
    match labels {
        None => Ok(default_labels(n)),
        Some(l) if l.len() == n => Ok(l),
        Some(l) => Err(Error::DimensionMismatch {
            expected: n,
            found: l.len(),
        }),
    }
}
