//! Physical constants, CODATA 2018 exact/recommended values (SI).
//!
//! All golden numbers in the test fixtures were generated with this exact
//! set; changing any value here invalidates them.

/// Identifier echoed into output metadata so result tables are traceable
/// to the constants set they were computed with.
pub const CONSTANTS_SET: &str = "CODATA-2018";

/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;

/// Reduced Planck constant, J·s (exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Speed of light in vacuum, m/s (exact).
pub const C: f64 = 299_792_458.0;

/// Elementary charge, C (exact).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Vacuum permittivity, F/m.
pub const EPS_VAC: f64 = 8.854_187_812_8e-12;

/// Electron mass, kg.
pub const M_E: f64 = 9.109_383_701_5e-31;

/// Converts an energy in eV to an angular frequency in rad/s (E/ħ).
pub fn ev_to_rad_per_s(ev: f64) -> f64 {
    ev * E_CHARGE / HBAR
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ev_conversion_round_numbers() {
        // 1 eV / ħ ≈ 1.519e15 rad/s
        let w = ev_to_rad_per_s(1.0);
        assert!((w / 1.519_267_448_8e15 - 1.0).abs() < 1e-9);
    }
}
