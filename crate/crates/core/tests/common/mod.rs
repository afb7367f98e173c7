#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torsqueeze::{Channel, SteadyState, SystemModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn channel(rng: &mut ChaCha8Rng) -> Channel {
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    Channel {
        coupling: rng.random_range(0.0..0.45),
        kappa: rng.random_range(0.1..4.0),
        detuning: sign * rng.random_range(0.2..2.0),
    }
}

/// Stable system in units of ω_m. `two_mode = false` leaves channel B idle.
/// `margin` rejects draws whose slowest eigenvalue decays slower than that.
pub fn random_system(rng: &mut ChaCha8Rng, two_mode: bool, gamma: (f64, f64), margin: f64) -> SteadyState {
    loop {
        let sys = SystemModel {
            omega_m: 1.0,
            gamma_m: rng.random_range(gamma.0..gamma.1),
            n_bar: rng.random_range(0.0..20.0),
            xi0: 1.0,
            mode_a: channel(rng),
            mode_b: if two_mode {
                channel(rng)
            } else {
                SystemModel::idle_channel(1.0)
            },
        };
        if let Ok(ss) = SteadyState::new(sys) {
            if ss.report().max_real_eig < -margin {
                return ss;
            }
        }
    }
}

pub fn reference_config(two_mode: bool) -> torsqueeze::Config {
    torsqueeze::cli::presets::reference_config(two_mode)
}
