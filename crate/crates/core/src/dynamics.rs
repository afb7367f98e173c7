//! Linearized fluctuation dynamics: drift matrix, stability and the
//! frequency-domain system `J(ω) Â(ω) = B̂(ω)`.
//!
//! Operators are ordered `(b, b†, a_A, a_A†, a_B, a_B†)` throughout.

use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::SystemModel;

pub type Mat6 = Matrix6<Complex64>;
pub type Vec6 = Vector6<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Above this 1-norm condition estimate `J(ω)` is treated as singular.
pub const CONDITION_LIMIT: f64 = 1e13;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Generator `A` of `ḟ = A f + D(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix(pub Mat6);

pub fn drift_matrix(sys: &SystemModel) -> DriftMatrix {
    let mut a = Mat6::zeros();
    let half_gamma = 0.5 * sys.gamma_m;
    a[(0, 0)] = c(-half_gamma, -sys.omega_m);
    a[(1, 1)] = c(-half_gamma, sys.omega_m);
    for (k, ch) in [(2, &sys.mode_a), (4, &sys.mode_b)] {
        let half_kappa = 0.5 * ch.kappa;
        a[(k, k)] = c(-half_kappa, -ch.detuning);
        a[(k + 1, k + 1)] = c(-half_kappa, ch.detuning);
        let ig = I * ch.coupling;
        for col in [k, k + 1] {
            a[(0, col)] = ig;
            a[(1, col)] = -ig;
        }
        for col in [0, 1] {
            a[(k, col)] = ig;
            a[(k + 1, col)] = -ig;
        }
    }
    DriftMatrix(a)
}

impl DriftMatrix {
    /// Eigenvalues sorted by real part, then imaginary part.
    pub fn eigenvalues(&self) -> Result<[Complex64; 6]> {
        let schur = nalgebra::linalg::Schur::try_new(self.0, 1e-15, 10_000).ok_or(Error::EigenSolver)?;
        let ev = schur.eigenvalues().ok_or(Error::EigenSolver)?;
        let mut out = [Complex64::default(); 6];
        for (o, v) in out.iter_mut().zip(ev.iter()) {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::EigenSolver);
            }
            *o = *v;
        }
        out.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub max_real_eig: f64,
    /// Strict: a zero maximum real part counts as unstable.
    pub stable: bool,
    pub eigenvalues: [Complex64; 6],
}

pub fn stability(sys: &SystemModel) -> Result<StabilityReport> {
    let eigenvalues = drift_matrix(sys).eigenvalues()?;
    let max_real_eig = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityReport {
        max_real_eig,
        stable: max_real_eig < 0.0,
        eigenvalues,
    })
}

/// A [`SystemModel`] known to relax to a steady state.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    system: SystemModel,
    report: StabilityReport,
}

impl SteadyState {
    pub fn new(system: SystemModel) -> Result<Self> {
        system.validate()?;
        let report = stability(&system)?;
        if !report.stable {
            return Err(Error::Unstable {
                max_real_eig: report.max_real_eig,
            });
        }
        Ok(SteadyState { system, report })
    }

    pub fn system(&self) -> &SystemModel {
        &self.system
    }

    pub fn report(&self) -> &StabilityReport {
        &self.report
    }
}

impl std::ops::Deref for SteadyState {
    type Target = SystemModel;
    fn deref(&self) -> &SystemModel {
        &self.system
    }
}

/// Susceptibility denominators at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UvwCoefficients {
    pub u1: Complex64,
    pub u2: Complex64,
    pub v1: Complex64,
    pub v2: Complex64,
    pub w1: Complex64,
    pub w2: Complex64,
}

pub fn uvw(sys: &SystemModel, omega: f64) -> UvwCoefficients {
    let pair = |rate: f64, freq: f64| (c(0.5 * rate, freq - omega), c(0.5 * rate, -(freq + omega)));
    let (u1, u2) = pair(sys.gamma_m, sys.omega_m);
    let (v1, v2) = pair(sys.mode_a.kappa, sys.mode_a.detuning);
    let (w1, w2) = pair(sys.mode_b.kappa, sys.mode_b.detuning);
    UvwCoefficients { u1, u2, v1, v2, w1, w2 }
}

/// `J(ω)`, assembled from the susceptibility denominators.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub omega: f64,
    pub matrix: Mat6,
}

pub fn transfer_matrix(sys: &SystemModel, omega: f64) -> TransferMatrix {
    let d = uvw(sys, omega);
    let mut j = Mat6::zeros();
    for (k, v) in [d.u1, d.u2, d.v1, d.v2, d.w1, d.w2].into_iter().enumerate() {
        j[(k, k)] = v;
    }
    for (k, g) in [(2, sys.mode_a.coupling), (4, sys.mode_b.coupling)] {
        let ig = I * g;
        for col in [k, k + 1] {
            j[(0, col)] = -ig;
            j[(1, col)] = ig;
        }
        for col in [0, 1] {
            j[(k, col)] = -ig;
            j[(k + 1, col)] = ig;
        }
    }
    TransferMatrix { omega, matrix: j }
}

fn norm1(m: &Mat6) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl TransferMatrix {
    /// `J⁻¹(ω)`, or an error when `J` is numerically singular.
    pub fn inverse(&self) -> Result<Mat6> {
        let singular = Error::Singular {
            what: "transfer matrix J",
            omega: self.omega,
        };
        let inv = self.matrix.lu().try_inverse().ok_or(singular)?;
        let cond = norm1(&self.matrix) * norm1(&inv);
        if !cond.is_finite() || cond > CONDITION_LIMIT {
            return Err(Error::Singular {
                what: "transfer matrix J",
                omega: self.omega,
            });
        }
        Ok(inv)
    }

    pub fn condition_estimate(&self) -> f64 {
        match self.matrix.lu().try_inverse() {
            Some(inv) => norm1(&self.matrix) * norm1(&inv),
            None => f64::INFINITY,
        }
    }

    pub fn solve(&self, rhs: &Vec6) -> Result<Vec6> {
        Ok(self.inverse()? * rhs)
    }

    pub fn determinant(&self) -> Complex64 {
        self.matrix.determinant()
    }
}
