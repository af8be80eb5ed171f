//! Inclusive `start:stop:step` grid syntax for scan flags.

/// Hard cap on grid size; guards against a typo'd step allocating gigabytes.
const MAX_POINTS: f64 = 1e7;

/// Parses `start:stop:step` into the inclusive grid
/// `start, start+step, …` with `round((stop−start)/step) + 1` points.
///
/// `step` must be positive; a degenerate `x:x:step` spec yields the single
/// point `x`. The last point is `start + n·step`, which lands on `stop` up
/// to float rounding of the step.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(format!(
            "expected START:STOP:STEP, got {spec:?}"
        ));
    };
    let start = parse_finite("start", start)?;
    let stop = parse_finite("stop", stop)?;
    let step = parse_finite("step", step)?;
    if step <= 0.0 {
        return Err(format!("step must be positive, got {step}"));
    }
    if stop < start {
        return Err(format!("stop {stop} is below start {start}"));
    }
    let n = ((stop - start) / step).round();
    if n > MAX_POINTS {
        return Err(format!(
            "grid {spec:?} has {n} points; the cap is {MAX_POINTS:e}"
        ));
    }
    Ok((0..=n as u64).map(|k| start + k as f64 * step).collect())
}

/// Parses `lo:hi` into a strictly ordered pair of finite bounds.
pub fn parse_range(spec: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi] = parts[..] else {
        return Err(format!("expected LO:HI, got {spec:?}"));
    };
    let lo = parse_finite("lower bound", lo)?;
    let hi = parse_finite("upper bound", hi)?;
    if lo >= hi {
        return Err(format!("range {spec:?} is not strictly ordered"));
    }
    Ok((lo, hi))
}

fn parse_finite(name: &str, text: &str) -> Result<f64, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("{name}: not a number: {text:?}"))?;
    if !v.is_finite() {
        return Err(format!("{name}: must be finite, got {text:?}"));
    }
    Ok(v)
}
