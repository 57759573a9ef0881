//! wasm-bindgen surface for the browser demo: three interactive operations
//! over JSON strings (quartic -> D_C form, a chi18 scan along the q1
//! direction, and the table of the 36 even theta nulls).
//!
//! Build with `wasm-pack build --target web` (or cargo +
//! `wasm-bindgen-cli`); see www/index.html for the page that drives it.

use wasm_bindgen::prelude::*;

use ceresa_core::quartic::{dc_matrix, parse_quartic, quartic_from_form, DegreeTwoElement};
use ceresa_core::theta::{
    chi18, enumerate_even, fit_line, min_theta_null, theta_constant, PeriodMatrix, TauJson,
};

fn err_json(e: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": e.to_string() }).to_string()
}

/// Quartic JSON {"monomials": {...}} -> D_C (with h = 0) as matrix, rank,
/// determinant, and the round-trip verdict.
#[wasm_bindgen]
pub fn quartic_form_report(quartic_json: &str) -> String {
    let parsed: ceresa_core::quartic::QuarticJson = match serde_json::from_str(quartic_json) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let f = match parse_quartic(&parsed.monomials) {
        Ok(f) => f,
        Err(e) => return err_json(e),
    };
    let form = dc_matrix(&f, &DegreeTwoElement::zero());
    let roundtrip = quartic_from_form(&form).map(|g| g == f).unwrap_or(false);
    serde_json::json!({
        "form": form,
        "roundtrip_exact": roundtrip,
    })
    .to_string()
}

/// Sampled -log|chi18(tau + i t E11)| for t on a grid, with the fitted slope
/// against 2 pi t over the upper half (the vanishing order at the cusp).
#[wasm_bindgen]
pub fn chi18_scan(tau_json: &str, t_min: f64, t_max: f64, steps: usize) -> String {
    let tau = match parse_tau(tau_json) {
        Ok(t) => t,
        Err(e) => return err_json(e),
    };
    if !(steps >= 4 && t_max > t_min && t_min >= 0.0) {
        return err_json("need steps >= 4 and 0 <= t_min < t_max");
    }
    let mut samples = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = t_min + (t_max - t_min) * k as f64 / (steps - 1) as f64;
        let v = match chi18(&tau.push_imag_diag(0, t), 1e-9) {
            Ok(v) => v,
            Err(e) => return err_json(e),
        };
        let m = v.value.norm();
        if m <= 0.0 {
            return err_json("chi18 vanished on the scan; move the base point");
        }
        samples.push((t, -m.ln()));
    }
    let half = samples.len() / 2;
    let xs: Vec<f64> = samples[half..]
        .iter()
        .map(|(t, _)| 2.0 * std::f64::consts::PI * t)
        .collect();
    let ys: Vec<f64> = samples[half..].iter().map(|(_, l)| *l).collect();
    let (slope, intercept, residual) = fit_line(&xs, &ys);
    serde_json::json!({
        "samples": samples,
        "slope": slope,
        "intercept": intercept,
        "residual": residual,
    })
    .to_string()
}

/// The 36 even theta nulls at tau: labels, moduli, the minimum, and the
/// hyperelliptic-candidate flag.
#[wasm_bindgen]
pub fn theta_table(tau_json: &str, threshold: f64) -> String {
    let tau = match parse_tau(tau_json) {
        Ok(t) => t,
        Err(e) => return err_json(e),
    };
    let mut rows = Vec::with_capacity(36);
    for alpha in enumerate_even() {
        match theta_constant(&alpha, &tau, 1e-12) {
            Ok(v) => rows.push(serde_json::json!({
                "char": alpha.label(),
                "abs": v.value.norm(),
                "re": v.value.re,
                "im": v.value.im,
            })),
            Err(e) => return err_json(e),
        }
    }
    let min = match min_theta_null(&tau, 1e-12, threshold) {
        Ok(m) => m,
        Err(e) => return err_json(e),
    };
    let chi = match chi18(&tau, 1e-9) {
        Ok(c) => c.value.norm(),
        Err(e) => return err_json(e),
    };
    serde_json::json!({
        "rows": rows,
        "min_char": min.characteristic.label(),
        "min_modulus": min.modulus,
        "hyperelliptic_candidate": min.hyperelliptic_candidate,
        "chi18_abs": chi,
    })
    .to_string()
}

fn parse_tau(tau_json: &str) -> ceresa_core::Result<PeriodMatrix> {
    let parsed: TauJson = serde_json::from_str(tau_json)?;
    PeriodMatrix::from_json(&parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GENERIC: &str = r#"{"re": [[0.0,0.1,0.05],[0.1,0.0,0.1],[0.05,0.1,0.0]],
                              "im": [[0.7,0,0],[0,0.7,0],[0,0,0.7]]}"#;

    #[test]
    fn quartic_report_roundtrips_klein() {
        let out = quartic_form_report(r#"{"monomials": {"3,1,0":"1","0,3,1":"1","1,0,3":"1"}}"#);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["form"]["rank"], 6);
        assert_eq!(v["form"]["det"], "-1/4096");
        assert_eq!(v["roundtrip_exact"], true);
    }

    #[test]
    fn scan_reports_slope_two() {
        let out = chi18_scan(GENERIC, 1.0, 4.0, 7);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let slope = v["slope"].as_f64().unwrap();
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn table_has_36_rows() {
        let out = theta_table(GENERIC, 1e-8);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 36);
        assert_eq!(v["hyperelliptic_candidate"], false);
    }

    #[test]
    fn bad_input_reports_error() {
        let out = quartic_form_report("not json");
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(v["error"].is_string());
    }
}
