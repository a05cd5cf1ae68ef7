//! Value-to-area legend: a grey square of known value drawn below the map.

use alloc::format;
use alloc::string::String;

use crate::color::LEGEND_GRAY;
use crate::format::format_value;

/// Side of the reference square the key is anchored to, in pixels.
pub const ANCHOR_SIDE_PX: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum LegendError {
    #[error("expected a positive finite number, got {0}")]
    NotPositive(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LegendSpec {
    /// A number of the form {1, 2, 5} x 10^k.
    pub value: f64,
    pub unit: String,
    pub side_px: f64,
    pub label: String,
    pub color: String,
}

fn pow10(k: i32) -> f64 {
    if k >= 0 {
        libm::pow(10.0, k as f64)
    } else {
        1.0 / libm::pow(10.0, -k as f64)
    }
}

/// Closest member of {1, 2, 5} x 10^k to `x` in log scale; ties go to the
/// smaller candidate.
pub fn nice_number(x: f64) -> Result<f64, LegendError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(LegendError::NotPositive(x));
    }
    let lx = libm::log10(x);
    let k = libm::floor(lx) as i32;
    let mut best = (f64::INFINITY, f64::INFINITY);
    // walk candidates in ascending order so ties keep the smaller one
    for (mantissa, exp) in [
        (5.0, k - 1),
        (1.0, k),
        (2.0, k),
        (5.0, k),
        (1.0, k + 1),
        (2.0, k + 1),
    ] {
        let c = mantissa * pow10(exp);
        let d = libm::fabs(libm::log10(c) - lx);
        if d < best.0 {
            best = (d, c);
        }
    }
    Ok(best.1)
}

/// Legend for a dataset total `total` drawn on a map whose regions cover
/// `area_px` square pixels.
///
/// The key value is the nice number closest to what a 30 x 30 px square would
/// represent; the square is then resized so its area carries exactly that
/// value at the map's value density.
pub fn compute_legend(total: f64, unit: &str, area_px: f64) -> Result<LegendSpec, LegendError> {
    if !(total > 0.0 && total.is_finite()) {
        return Err(LegendError::NotPositive(total));
    }
    if !(area_px > 0.0 && area_px.is_finite()) {
        return Err(LegendError::NotPositive(area_px));
    }
    let anchor_value = ANCHOR_SIDE_PX * ANCHOR_SIDE_PX * total / area_px;
    let value = nice_number(anchor_value)?;
    let side_px = libm::sqrt(value * area_px / total);
    Ok(LegendSpec {
        value,
        unit: unit.into(),
        side_px,
        label: format!("represents {}", format_value(value, unit)),
        color: LEGEND_GRAY.hex(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nice_number_examples() {
        assert_eq!(nice_number(1.0).unwrap(), 1.0);
        assert_eq!(nice_number(30.0).unwrap(), 20.0);
        assert_eq!(nice_number(53_400.0).unwrap(), 50_000.0);
        assert_eq!(nice_number(0.0), Err(LegendError::NotPositive(0.0)));
        assert!(nice_number(-3.0).is_err());
        assert!(nice_number(f64::NAN).is_err());
    }

    #[test]
    fn legend_examples() {
        let l = compute_legend(8.9e6, "persons", 1.5e5).unwrap();
        assert_eq!(l.value, 50_000.0);
        assert!((l.side_px - 29.0).abs() < 0.05);
        let share = l.value / 8.9e6;
        assert!(share > 0.005 && share < 0.009);
        assert_eq!(l.label, "represents 50,000 persons");
        assert_eq!(l.color, "#707070");

        let l = compute_legend(900.0, "", 900.0).unwrap();
        assert_eq!(l.value, 1000.0);
        assert!((l.side_px - 31.622_776_601_683_79).abs() < 1e-9);
        assert_eq!(l.label, "represents 1,000");
    }
}
