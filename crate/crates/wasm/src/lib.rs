//! Browser bindings: main-term curves, the optimizer, and critical-line samples.

use levinson::optimizer::{optimize_alternating, OptimizeSpec};
use levinson::zeta::{v_eval, zeta_em, Mollifier, MollifierSpec, ZetaContext};
use levinson::{kappa_bound, main_term_closed, MainTermParams, Polynomial};
use num_complex::Complex64;
use wasm_bindgen::prelude::*;

fn js_err(e: levinson::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn poly(s: &str) -> Result<Polynomial, JsError> {
    s.parse().map_err(js_err)
}

/// Samples `(R, c, kappa)` at `n` evenly spaced `R` in `[r_min, r_max]`,
/// flattened row by row. `kappa` is NaN where `R = 0`.
#[wasm_bindgen]
pub fn kappa_curve(p: &str, q: &str, theta: f64, r_min: f64, r_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let (p, q) = (poly(p)?, poly(q)?);
    if n < 2 || !(r_min < r_max) {
        return Err(JsError::new("need n >= 2 and r_min < r_max"));
    }
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let r = r_min + (r_max - r_min) * i as f64 / (n - 1) as f64;
        let res = main_term_closed(&MainTermParams::new(p.clone(), q.clone(), r, theta).map_err(js_err)?)
            .map_err(js_err)?;
        out.extend([r, res.c_value, res.kappa_bound.unwrap_or(f64::NAN)]);
    }
    Ok(out)
}

#[wasm_bindgen(getter_with_clone)]
pub struct Optimum {
    pub r: f64,
    pub c: f64,
    pub kappa: f64,
    pub p: String,
    pub q: String,
    pub iterations: usize,
}

#[wasm_bindgen]
pub fn optimize(deg_p: usize, deg_q: usize, theta: f64, r_min: f64, r_max: f64) -> Result<Optimum, JsError> {
    let res = optimize_alternating(&OptimizeSpec {
        deg_p,
        deg_q,
        theta,
        r_range: (r_min, r_max),
        ..OptimizeSpec::default()
    })
    .map_err(js_err)?;
    Ok(Optimum {
        r: res.r_opt,
        c: res.c_opt,
        kappa: kappa_bound(res.r_opt, res.c_opt).map_err(js_err)?,
        p: res.p_opt.to_string(),
        q: res.q_opt.to_string(),
        iterations: res.iterations,
    })
}

/// `(t, |zeta(1/2 + it)|, |V psi(sigma0 + it)|)` at `n` points of
/// `[t_lo, t_hi]`, flattened. The mollifier uses `T = t_hi`.
#[wasm_bindgen]
pub fn critical_line(p: &str, q: &str, r: f64, theta: f64, t_lo: f64, t_hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let (p, q) = (poly(p)?, poly(q)?);
    if n < 2 || !(t_lo < t_hi) || t_hi < 10.0 || t_hi > 5e3 {
        return Err(JsError::new("need n >= 2 and t_lo < t_hi with 10 <= t_hi <= 5000"));
    }
    let log_t = t_hi.ln();
    let m = t_hi.powf(theta).round() as usize;
    let psi = Mollifier::new(MollifierSpec {
        p,
        m,
        sigma0_offset: r,
        log_t,
    })
    .map_err(js_err)?;
    let sigma0 = psi.spec().sigma0();
    let ctx = ZetaContext::for_height(t_hi);
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        let t = t_lo + (t_hi - t_lo) * i as f64 / (n - 1) as f64;
        let z = zeta_em(Complex64::new(0.5, t), &ctx).map_err(js_err)?;
        let s = Complex64::new(sigma0, t);
        let v = v_eval(s, &q, log_t, &ctx).map_err(js_err)?;
        out.extend([t, z.norm(), (v * psi.eval(s)).norm()]);
    }
    Ok(out)
}
