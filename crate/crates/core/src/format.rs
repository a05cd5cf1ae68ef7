//! Human-readable numbers for totals, legends and infotips.

use alloc::format;
use alloc::string::{String, ToString};

const SCALES: [(f64, &str); 3] = [(1e6, "million"), (1e9, "billion"), (1e12, "trillion")];

/// Formats `v` with an optional unit.
///
/// Below one million the number is written out with comma thousands
/// separators (`384,300 €`). From one million on it is scaled to
/// million/billion/trillion and rounded to four significant digits with
/// trailing zeros dropped (`375.4 billion €`). Non-integers below one million
/// keep at most two decimals, or four significant digits below one.
pub fn format_value(v: f64, unit: &str) -> String {
    let number = if v.is_finite() && v.abs() >= 1e6 {
        scaled(v)
    } else {
        plain(v)
    };
    if unit.is_empty() {
        number
    } else {
        format!("{number} {unit}")
    }
}

fn scaled(v: f64) -> String {
    let mut k = SCALES.iter().rposition(|&(s, _)| v.abs() >= s).unwrap_or(0);
    loop {
        let (scale, word) = SCALES[k];
        let m = v / scale;
        let int_digits = (libm::floor(libm::log10(m.abs())) as i32 + 1).max(1);
        let decimals = (4 - int_digits).max(0) as usize;
        let s = format!("{:.*}", decimals, m);
        // 999.96 million rounds to 1000.0 million: promote to the next word
        if k + 1 < SCALES.len() && s.parse::<f64>().is_ok_and(|x| x.abs() >= 1000.0) {
            k += 1;
            continue;
        }
        return format!("{} {}", trim_zeros(s), word);
    }
}

fn plain(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = if v == libm::trunc(v) {
        format!("{:.0}", v)
    } else if v.abs() >= 1.0 {
        trim_zeros(format!("{:.2}", v))
    } else {
        let lead = -(libm::floor(libm::log10(v.abs())) as i32);
        trim_zeros(format!("{:.*}", (lead + 3) as usize, v))
    };
    group_thousands(&s)
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn group_thousands(s: &str) -> String {
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => ("-", r),
        None => ("", s),
    };
    let (int, frac) = match rest.find('.') {
        Some(i) => rest.split_at(i),
        None => (rest, ""),
    };
    let mut out = String::with_capacity(s.len() + int.len() / 3);
    out.push_str(sign);
    for (i, c) in int.chars().enumerate() {
        if i > 0 && (int.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    out.push_str(frac);
    out
}
