//! Independent verification routes.
//!
//! Nothing here touches the closed-form coefficients in [`crate::spectra`].
//! Transfer coefficients come from a dense solve of `J(ω)`, occupations from
//! the steady-state Lyapunov equation, the trap frequency from the numeric
//! curvature of the rotated-dipole potential, and the optimal homodyne angle
//! from a brute-force scan.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3, Rotation3, Vector3};
use num_complex::Complex64;

use crate::dynamics::{drift_matrix, transfer_matrix, Mat6, SteadyState};
use crate::error::{Error, Result};
use crate::model::{depolarization_factors, polarizability, tweezer_amplitude, Ellipsoid, SystemModel, Tweezer};
use crate::spectra::TransferCoefficients;

/// Second moments `⟨in_i(ω) in_j(ω')⟩ / δ(ω + ω')` of the rate-normalized
/// input operators: thermal mechanical bath, optical vacuum.
fn input_correlations(n_bar: f64) -> [[f64; 6]; 6] {
    let mut n = [[0.0; 6]; 6];
    n[0][1] = n_bar + 1.0;
    n[1][0] = n_bar;
    n[2][3] = 1.0;
    n[4][5] = 1.0;
    n
}

/// Output weights of `a_A^out(ω)` and `a_B^out(ω)` from a dense inverse of `J(ω)`.
pub fn formal_output_generic(sys: &SystemModel, omega: f64) -> Result<(TransferCoefficients, TransferCoefficients)> {
    let inv = transfer_matrix(sys, omega).inverse()?;
    let rates = [
        sys.gamma_m,
        sys.gamma_m,
        sys.mode_a.kappa,
        sys.mode_a.kappa,
        sys.mode_b.kappa,
        sys.mode_b.kappa,
    ];
    let row = |k: usize, kappa: f64| {
        let mut w = [Complex64::default(); 6];
        for (j, wj) in w.iter_mut().enumerate() {
            *wj = kappa.sqrt() * inv[(k, j)] * rates[j].sqrt();
        }
        w[k] -= 1.0;
        TransferCoefficients { weights: w }
    };
    Ok((row(2, sys.mode_a.kappa), row(4, sys.mode_b.kappa)))
}

pub fn solve_output_generic(ss: &SteadyState, omega: f64) -> Result<(TransferCoefficients, TransferCoefficients)> {
    formal_output_generic(ss, omega)
}

/// Weights of `[O(-ω)]†` at ω given those of `O(-ω)`.
fn adjoint_at(w: &[Complex64; 6]) -> [Complex64; 6] {
    let mut out = [Complex64::default(); 6];
    for k in 0..6 {
        out[k ^ 1] = w[k].conj();
    }
    out
}

fn bilinear(p: &[Complex64; 6], q: &[Complex64; 6], n: &[[f64; 6]; 6]) -> Complex64 {
    let mut acc = Complex64::default();
    for i in 0..6 {
        for j in 0..6 {
            if n[i][j] != 0.0 {
                acc += p[i] * q[j] * n[i][j];
            }
        }
    }
    acc
}

/// Homodyne spectrum of channel A at angle `theta`, from generic weights.
pub fn homodyne_spectrum(sys: &SystemModel, omega: f64, theta: f64) -> Result<f64> {
    let plus = formal_output_generic(sys, omega)?.0.weights;
    let minus = formal_output_generic(sys, -omega)?.0.weights;
    Ok(homodyne_from_weights(&plus, &minus, sys.n_bar, theta))
}

fn homodyne_from_weights(plus: &[Complex64; 6], minus: &[Complex64; 6], n_bar: f64, theta: f64) -> f64 {
    let rot = Complex64::from_polar(1.0, -theta);
    let quad = |a: &[Complex64; 6], other: &[Complex64; 6]| {
        let ad = adjoint_at(other);
        let mut x = [Complex64::default(); 6];
        for k in 0..6 {
            x[k] = rot * a[k] + rot.conj() * ad[k];
        }
        x
    };
    let x_plus = quad(plus, minus);
    let x_minus = quad(minus, plus);
    bilinear(&x_plus, &x_minus, &input_correlations(n_bar)).re
}

/// Minimum of `S_ϑ(ω)` over `n_angles` equally spaced angles in `[0, π)`,
/// and the angle where it occurs.
pub fn angle_scan(ss: &SteadyState, omega: f64, n_angles: usize) -> Result<(f64, f64)> {
    let n_angles = n_angles.max(1);
    let plus = formal_output_generic(ss, omega)?.0.weights;
    let minus = formal_output_generic(ss, -omega)?.0.weights;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..n_angles {
        let theta = PI * k as f64 / n_angles as f64;
        let s = homodyne_from_weights(&plus, &minus, ss.n_bar, theta);
        if s < best.0 {
            best = (s, theta);
        }
    }
    Ok(best)
}

/// Steady-state second moments `V_ij = ⟨f_i f_j†⟩` over
/// `(b, b†, a_A, a_A†, a_B, a_B†)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub matrix: Mat6,
    /// `‖A V + V A† + D‖ / ‖D‖` of the accepted solution.
    pub residual: f64,
}

impl CovarianceMatrix {
    /// `⟨b† b⟩`.
    pub fn mechanical_occupation(&self) -> f64 {
        self.matrix[(1, 1)].re
    }

    /// `⟨a_j† a_j⟩` for channel 0 (A) or 1 (B).
    pub fn cavity_occupation(&self, channel: usize) -> f64 {
        let k = if channel == 0 { 3 } else { 5 };
        self.matrix[(k, k)].re
    }

    /// Largest entry of `V - V†` relative to the largest entry of `V`.
    pub fn hermiticity_error(&self) -> f64 {
        let scale = self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let diff = (self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

/// Accepted Lyapunov residual relative to the diffusion norm.
pub const LYAPUNOV_TOLERANCE: f64 = 1e-10;

/// Solves `A V + V A† + D = 0` for a stable system.
pub fn lyapunov_covariance(ss: &SteadyState) -> Result<CovarianceMatrix> {
    // work in units of ω_m to keep the 36×36 system well scaled
    let scale = ss.omega_m;
    let a = drift_matrix(ss).0 / Complex64::from(scale);
    let mut d = Mat6::zeros();
    let n = input_correlations(ss.n_bar);
    let rates = [
        ss.gamma_m,
        ss.gamma_m,
        ss.mode_a.kappa,
        ss.mode_a.kappa,
        ss.mode_b.kappa,
        ss.mode_b.kappa,
    ];
    // ⟨f_k f_k†⟩ noise: b gets (n̄+1)γ, b† gets n̄γ, each a gets κ
    for k in 0..6 {
        d[(k, k)] = Complex64::from(rates[k] * n[k][k ^ 1] / scale);
    }

    let a_dyn = DMatrix::from_fn(6, 6, |i, j| a[(i, j)]);
    let eye = DMatrix::<Complex64>::identity(6, 6);
    let system = eye.kronecker(&a_dyn) + a_dyn.map(|z| z.conj()).kronecker(&eye);
    let rhs = DVector::from_iterator(36, d.iter().map(|z| -z));
    let singular = Error::Singular {
        what: "Lyapunov operator",
        omega: 0.0,
    };
    let vec_v = system.lu().solve(&rhs).ok_or(singular)?;
    let v = Mat6::from_iterator(vec_v.iter().copied());

    let d_norm = d.norm();
    let residual = (a * v + v * a.adjoint() + d).norm() / d_norm;
    if !(residual < LYAPUNOV_TOLERANCE) {
        return Err(Error::Verification(format!(
            "Lyapunov residual {residual:e} exceeds {LYAPUNOV_TOLERANCE:e}"
        )));
    }
    Ok(CovarianceMatrix { matrix: v, residual })
}

/// Torsional frequency from the numeric curvature of the dipole potential
/// `U(φ) = -¼ Σ_j E0_j² ê·R(φ) α Rᵀ(φ)·ê`, with every tweezer polarized along
/// the equilibrium long axis and the particle rotated about the beam axis.
pub fn potential_curvature_frequency(ellipsoid: &Ellipsoid, tweezers: &[Tweezer]) -> Result<f64> {
    let pol = polarizability(ellipsoid, &depolarization_factors(ellipsoid)?);
    let body = Matrix3::from_diagonal(&Vector3::new(pol.alpha_a, pol.alpha_b, pol.alpha_c));
    let field_sq: f64 = tweezers.iter().map(|t| tweezer_amplitude(t).powi(2)).sum();
    let e = Vector3::x();
    let potential = |phi: f64| {
        let r = Rotation3::from_axis_angle(&Vector3::z_axis(), phi);
        let lab = r.matrix() * body * r.matrix().transpose();
        -0.25 * field_sq * e.dot(&(lab * e))
    };
    let h = 1e-3;
    let curvature = (potential(h) - 2.0 * potential(0.0) + potential(-h)) / (h * h);
    let scale = 0.25 * field_sq * pol.alpha_a.abs();
    if !(curvature > 1e-9 * scale) {
        return Err(Error::NoTrap(format!("potential curvature {curvature:e} J/rad² is not positive")));
    }
    Ok((curvature / ellipsoid.inertia()).sqrt())
}
