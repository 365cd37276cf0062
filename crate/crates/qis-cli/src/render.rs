//! Numeric rendering: 12-significant-digit formatting plus recognition of
//! the exact values the protocols produce (0, ±1, ±1/2, ±1/√2, small
//! dyadic probabilities).

use num_complex::Complex64;

const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Formats with 12 significant digits, fixed-point for moderate magnitudes
/// and scientific otherwise.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..12).contains(&magnitude) {
        let decimals = (11 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

/// Exact form of a real amplitude component, when it is one the protocols
/// actually produce.
pub fn exact_real(x: f64, tol: f64) -> Option<String> {
    let table = [
        (0.0, "0"),
        (1.0, "1"),
        (-1.0, "-1"),
        (0.5, "1/2"),
        (-0.5, "-1/2"),
        (INV_SQRT2, "1/√2"),
        (-INV_SQRT2, "-1/√2"),
    ];
    table
        .iter()
        .find(|(v, _)| (x - v).abs() <= tol)
        .map(|(_, s)| s.to_string())
}

/// Exact form of a branch probability.
pub fn exact_probability(p: f64, tol: f64) -> Option<String> {
    let table =
        [(1.0, "1"), (0.5, "1/2"), (0.25, "1/4"), (0.125, "1/8"), (0.0625, "1/16"), (0.0, "0")];
    table
        .iter()
        .find(|(v, _)| (p - v).abs() <= tol)
        .map(|(_, s)| s.to_string())
}

/// Probability with its exact form appended when recognized.
pub fn probability(p: f64, tol: f64) -> String {
    match exact_probability(p, tol) {
        Some(exact) => format!("{} (= {exact})", sig12(p)),
        None => sig12(p),
    }
}

/// One complex amplitude, preferring exact forms for both components.
pub fn complex(c: Complex64, tol: f64) -> String {
    let re = exact_real(c.re, tol);
    let im = exact_real(c.im, tol);
    match (re, im) {
        (Some(re), Some(im)) => match (re.as_str(), im.as_str()) {
            (r, "0") => r.to_string(),
            ("0", "1") => "i".to_string(),
            ("0", "-1") => "-i".to_string(),
            ("0", i) => format!("{i}·i"),
            (r, "1") => format!("{r}+i"),
            (r, "-1") => format!("{r}-i"),
            (r, i) if i.starts_with('-') => format!("{r}{i}·i"),
            (r, i) => format!("{r}+{i}·i"),
        },
        _ => {
            if c.im == 0.0 {
                sig12(c.re)
            } else if c.re == 0.0 {
                format!("{}i", sig12(c.im))
            } else if c.im < 0.0 {
                format!("{}{}i", sig12(c.re), sig12(c.im))
            } else {
                format!("{}+{}i", sig12(c.re), sig12(c.im))
            }
        }
    }
}

/// Renders an amplitude list as a ket expansion, skipping zeros.
pub fn state(amplitudes: &[[f64; 2]], tol: f64) -> String {
    let n = amplitudes.len().trailing_zeros() as usize;
    let terms: Vec<String> = amplitudes
        .iter()
        .enumerate()
        .filter(|(_, a)| (a[0].powi(2) + a[1].powi(2)).sqrt() > tol)
        .map(|(k, a)| {
            let c = Complex64::new(a[0], a[1]);
            format!("({})|{:0n$b}⟩", complex(c, tol), k)
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
