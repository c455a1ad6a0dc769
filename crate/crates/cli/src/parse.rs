//! Flag value parsers. Radii and counts accept scientific notation (`1e5`).

const MAX_COUNT: f64 = 9_223_372_036_854_775_808.0; // 2^63

pub fn resolution(s: &str) -> Result<usize, String> {
    let m: usize = s
        .trim()
        .parse()
        .map_err(|_| format!("invalid resolution {s:?}: M must be an integer >= 2"))?;
    if m < 2 {
        return Err(format!("M must be >= 2 (at least two logarithmic bins), got {m}"));
    }
    Ok(m)
}

pub fn positive_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("expected a positive finite value, got {s}"));
    }
    Ok(v)
}

pub fn non_negative_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(format!("expected a non-negative finite value, got {s}"));
    }
    Ok(v)
}

/// Non-negative integer, written either plainly or as an integral float
/// such as `1e7`.
pub fn count(s: &str) -> Result<u64, String> {
    let t = s.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = t.parse().map_err(|_| format!("not an integer: {s:?}"))?;
    if !(v >= 0.0 && v < MAX_COUNT && v.fract() == 0.0) {
        return Err(format!("expected a non-negative integer below 2^63, got {s}"));
    }
    Ok(v as u64)
}

pub fn positive_count(s: &str) -> Result<u64, String> {
    match count(s)? {
        0 => Err("expected a value >= 1".into()),
        v => Ok(v),
    }
}

pub fn replicates(s: &str) -> Result<usize, String> {
    let n = count(s)?;
    if n < 2 {
        return Err(format!("need at least 2 replicates for a standard error, got {n}"));
    }
    Ok(n as usize)
}

/// `lo:hi`, both integers, `lo <= hi`.
pub fn range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let (lo, hi) = (count(lo)?, count(hi)?);
    if lo > hi {
        return Err(format!("empty range {lo}:{hi}"));
    }
    Ok((lo, hi))
}


/// Formats `x` with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.11}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
