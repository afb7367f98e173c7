//! Closed-form transfer coefficients and spectra.
//!
//! These evaluate the algebra for any [`SystemModel`] and do not check for a
//! steady state; a result for an unstable system is a formal continuation, not
//! a physical spectrum. The public entry points in [`crate::spectra`] take a
//! [`crate::dynamics::SteadyState`] instead.

use num_complex::Complex64;

use crate::dynamics::uvw;
use crate::error::{Error, Result};
use crate::model::SystemModel;
use crate::spectra::{correlate, dagger, Pairing, RawSpectra, TransferCoefficients, TwoModeSpectrum};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative floor on the determinant `z` below which the solve is singular.
const Z_FLOOR: f64 = 1e-14;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn check_z(z: Complex64, scale: f64, omega: f64) -> Result<()> {
    if !(z.norm() > Z_FLOOR * scale) || !z.norm().is_finite() {
        return Err(Error::Singular {
            what: "susceptibility determinant z",
            omega,
        });
    }
    Ok(())
}

/// Intracavity weights `m1..m4` of `a_A(ω)` for a single coupled channel,
/// before the input-output relation.
pub fn single_mode_intracavity(sys: &SystemModel, omega: f64) -> Result<[Complex64; 4]> {
    if !sys.is_single_mode() {
        return Err(Error::invalid(
            "mode_b.coupling",
            "single-mode coefficients need an uncoupled B channel",
        ));
    }
    let d = uvw(sys, omega);
    let g = sys.mode_a.coupling;
    let g2 = g * g;
    let du = d.u1 - d.u2;
    let z = g2 * du * (d.v1 - d.v2) + d.u1 * d.u2 * d.v1 * d.v2;
    check_z(
        z,
        (d.u1 * d.u2 * d.v1 * d.v2).norm() + g2 * (du * (d.v1 - d.v2)).norm(),
        omega,
    )?;
    let sg = sys.gamma_m.sqrt();
    let sk = sys.mode_a.kappa.sqrt();
    Ok([
        I * sg * g * d.u2 * d.v2 / z,
        I * sg * g * d.u1 * d.v2 / z,
        sk * (g2 * du + d.u1 * d.u2 * d.v2) / z,
        sk * g2 * du / z,
    ])
}

/// Output-normalized weights of `a_A^out(ω)` for a single coupled channel.
pub fn single_mode_coeffs(sys: &SystemModel, omega: f64) -> Result<TransferCoefficients> {
    let m = single_mode_intracavity(sys, omega)?;
    let sk = sys.mode_a.kappa.sqrt();
    let zero = Complex64::default();
    Ok(TransferCoefficients {
        weights: [sk * m[0], sk * m[1], sk * m[2] - 1.0, sk * m[3], zero, zero],
    })
}

/// Output-normalized weights of `a_A^out(ω)` and `a_B^out(ω)` with both
/// channels coupled.
pub fn two_mode_coeffs(sys: &SystemModel, omega: f64) -> Result<(TransferCoefficients, TransferCoefficients)> {
    let d = uvw(sys, omega);
    let (u1, u2, v1, v2, w1, w2) = (d.u1, d.u2, d.v1, d.v2, d.w1, d.w2);
    let (ga, gb) = (sys.mode_a.coupling, sys.mode_b.coupling);
    let (ka, kb) = (sys.mode_a.kappa, sys.mode_b.kappa);
    let (ga2, gb2) = (ga * ga, gb * gb);
    let du = u1 - u2;
    let dv = v1 - v2;
    let dw = w1 - w2;
    let full = u1 * u2 * v1 * v2 * w1 * w2;
    let z = du * (gb2 * v1 * v2 * dw + ga2 * dv * w1 * w2) + full;
    check_z(
        z,
        full.norm() + (du * gb2 * v1 * v2 * dw).norm() + (du * ga2 * dv * w1 * w2).norm(),
        omega,
    )?;

    let sga = real((ka * sys.gamma_m).sqrt());
    let sgb = real((kb * sys.gamma_m).sqrt());
    let sab = (ka * kb).sqrt();
    let cross = sab * ga * gb * du / z;

    let a = [
        I * sga * ga * u2 * v2 * w1 * w2 / z,
        I * sga * ga * u1 * v2 * w1 * w2 / z,
        ka * (du * (gb2 * v2 * dw + ga2 * w1 * w2) + u1 * u2 * v2 * w1 * w2) / z - 1.0,
        ka * ga2 * du * w1 * w2 / z,
        cross * v2 * w2,
        cross * v2 * w1,
    ];
    let b = [
        I * sgb * gb * u2 * v1 * v2 * w2 / z,
        I * sgb * gb * u1 * v1 * v2 * w2 / z,
        cross * v2 * w2,
        cross * v1 * w2,
        kb * (du * (gb2 * v1 * v2 + ga2 * dv * w2) + u1 * u2 * v1 * v2 * w2) / z - 1.0,
        kb * gb2 * du * v1 * v2 / z,
    ];
    Ok((TransferCoefficients { weights: a }, TransferCoefficients { weights: b }))
}

/// Intracavity weights of `a_j(ω)` (channel 0 = A, 1 = B), recovered from the
/// output weights through `a_out = √κ a - a_in`.
pub fn intracavity_coeffs(sys: &SystemModel, omega: f64, channel: usize) -> Result<[Complex64; 6]> {
    let (a, b) = two_mode_coeffs(sys, omega)?;
    let (out, kappa, own) = match channel {
        0 => (a, sys.mode_a.kappa, 2),
        _ => (b, sys.mode_b.kappa, 4),
    };
    let mut w = out.weights;
    w[own] += 1.0;
    let s = kappa.sqrt();
    Ok(w.map(|x| x / s))
}

/// Spectral density of the intracavity photon number `⟨a_j† a_j⟩` at ω.
/// Its integral over ω divided by 2π is the steady-state occupation.
pub fn intracavity_number_density(sys: &SystemModel, omega: f64, channel: usize) -> Result<f64> {
    let m = intracavity_coeffs(sys, omega, channel)?;
    let n = sys.n_bar;
    Ok(n * m[0].norm_sqr() + (n + 1.0) * m[1].norm_sqr() + m[3].norm_sqr() + m[5].norm_sqr())
}

/// Normal, antinormal and anomalous output correlators of one mode.
pub fn raw_spectra(at_omega: &TransferCoefficients, at_minus: &TransferCoefficients, n_bar: f64) -> RawSpectra {
    let c = &at_omega.weights;
    let cm = &at_minus.weights;
    RawSpectra {
        s_aad: correlate(c, &dagger(c), n_bar).re,
        s_ada: correlate(&dagger(cm), cm, n_bar).re,
        s_aa: correlate(c, cm, n_bar),
    }
}

pub fn single_mode_raw_spectra(sys: &SystemModel, omega: f64) -> Result<RawSpectra> {
    let c = single_mode_coeffs(sys, omega)?;
    let cm = single_mode_coeffs(sys, -omega)?;
    Ok(raw_spectra(&c, &cm, sys.n_bar))
}

/// Complex `(S_XX, S_YY)`; both are real up to rounding.
pub fn quadrature_correlations(sys: &SystemModel, omega: f64, pairing: Pairing) -> Result<(Complex64, Complex64)> {
    let (a_p, b_p) = two_mode_coeffs(sys, omega)?;
    let (a_m, b_m) = two_mode_coeffs(sys, -omega)?;
    let sign_b = match pairing {
        Pairing::Epr => -1.0,
        Pairing::Symmetric => 1.0,
    };
    // X(±ω) and Y(±ω) as weights on the input operators at ±ω
    let quad = |a: &TransferCoefficients, b: &TransferCoefficients, a_o: &TransferCoefficients, b_o: &TransferCoefficients| {
        let (da, db) = (dagger(&a_o.weights), dagger(&b_o.weights));
        let mut x = [Complex64::default(); 6];
        let mut y = [Complex64::default(); 6];
        for k in 0..6 {
            x[k] = 0.5 * (a.weights[k] + da[k] + b.weights[k] + db[k]);
            y[k] = (a.weights[k] - da[k] + sign_b * (b.weights[k] - db[k])) / (2.0 * I);
        }
        (x, y)
    };
    let (x_p, y_p) = quad(&a_p, &b_p, &a_m, &b_m);
    let (x_m, y_m) = quad(&a_m, &b_m, &a_p, &b_p);
    Ok((correlate(&x_p, &x_m, sys.n_bar), correlate(&y_p, &y_m, sys.n_bar)))
}

pub fn two_mode_spectrum(sys: &SystemModel, omega: f64, pairing: Pairing) -> Result<TwoModeSpectrum> {
    let (xx, yy) = quadrature_correlations(sys, omega, pairing)?;
    Ok(TwoModeSpectrum {
        s_xx: xx.re,
        s_yy: yy.re,
        s2: xx.re + yy.re,
    })
}
