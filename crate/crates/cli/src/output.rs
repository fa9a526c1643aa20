use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Fixed-point decimal with 17 significant digits.
pub fn real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn ratio_real(r: &BigRational) -> String {
    real(r.to_f64().unwrap_or(f64::NAN))
}
