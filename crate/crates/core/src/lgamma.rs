//! Complex log-gamma by Stirling's series after an upward argument shift.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_2k / (2k (2k - 1))` for `k = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// Distance to a pole of Gamma below which arguments are rejected.
pub const POLE_TOL: f64 = 1e-8;

/// A logarithm of `Gamma(z)`.
///
/// For `Re z > 0` this is the principal branch, continuous in `z`. For
/// other arguments it is some logarithm of `Gamma(z)`; only exponentials
/// and differences along continuous paths are meaningful there.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if z.re <= 0.5 && (z.re - z.re.round()).abs() < POLE_TOL && z.im.abs() < POLE_TOL {
        return Err(Error::Pole(format!("Gamma has a pole near {z}")));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 15.0 || w.re < 1.0 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(z: Complex64) -> Complex64 {
    let half_ln_two_pi = 0.5 * std::f64::consts::TAU.ln();
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        corr += c * p;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + half_ln_two_pi + corr
}
