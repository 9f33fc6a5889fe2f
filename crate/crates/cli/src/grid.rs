//! k-grid and score arguments.

use crate::Failure;

/// `start:stop:step` (stop included up to rounding) or a comma list.
/// Values come back sorted ascending; all must be strictly positive.
pub fn parse_k_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| Failure::Input(format!("k grid `{spec}`: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let mut ks = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(bad("too many points"));
        }
        (0..count).map(|j| start + j as f64 * step).collect::<Vec<_>>()
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if ks.is_empty() || ks.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
        return Err(bad("values must be finite and strictly positive"));
    }
    ks.sort_by(f64::total_cmp);
    Ok(ks)
}

pub fn parse_score(spec: &str, len: usize) -> Result<Vec<u32>, Failure> {
    let n = spec
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::Input(format!("score `{spec}` must be comma-separated non-negative integers")))?;
    if n.len() != len {
        return Err(Failure::Input(format!("score has {} entries but the graph has {len} internal edges", n.len())));
    }
    Ok(n)
}
