//! Bounded scalar maximization and finite differences.

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::game::Interval;

/// Result of a bounded 1-D maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    /// Every refined maximizer within `tie_tol` of the best value, ascending.
    pub argmax: Vec<f64>,
    pub value: f64,
}

impl Maximum {
    /// Smallest maximizer.
    pub fn first(&self) -> f64 {
        self.argmax[0]
    }
}

fn probe<F: FnMut(f64) -> Result<f64>>(f: &mut F, v: f64) -> Result<f64> {
    let y = f(v)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Numeric(format!("objective is {y} at {v}")))
    }
}

/// Grid scan of `f` over `domain`, golden-section refinement of each local winner,
/// then a derivative-root polish of interior maxima.
pub fn maximize_1d<F>(mut f: F, domain: Interval, cfg: &SolverConfig) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let grid = domain.grid(cfg.grid_points_per_axis.max(3));
    let mut values = Vec::with_capacity(grid.len());
    for &v in &grid {
        values.push(probe(&mut f, v)?);
    }
    refine_scan(f, domain, &grid, &values, cfg)
}

/// Refinement stage of [`maximize_1d`] for a grid that was already evaluated.
pub(crate) fn refine_scan<F>(
    mut f: F,
    domain: Interval,
    grid: &[f64],
    values: &[f64],
    cfg: &SolverConfig,
) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = grid.len();
    let mut cands: Vec<(f64, f64)> = Vec::new();
    for k in 0..n {
        let v = values[k];
        let left = if k > 0 { Some(values[k - 1]) } else { None };
        let right = if k + 1 < n { Some(values[k + 1]) } else { None };
        if left.is_some_and(|l| l > v) || right.is_some_and(|r| r > v) {
            continue;
        }
        let flat_l = left.map_or(true, |l| v - l <= cfg.tie_tol);
        let flat_r = right.map_or(true, |r| v - r <= cfg.tie_tol);
        if flat_l && flat_r {
            cands.push((grid[k], v));
            continue;
        }
        let a = if k > 0 { grid[k - 1] } else { grid[k] };
        let b = if k + 1 < n { grid[k + 1] } else { grid[k] };
        let (t, fv) = golden(&mut f, a, b, (grid[k], v), cfg.refine_iterations)?;
        let (t, fv) = snap_to_boundary(&mut f, t, fv, domain, cfg)?;
        let (t, fv) = polish(&mut f, t, fv, a, b, domain, cfg)?;
        cands.push((t, fv));
    }

    let best = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let mut kept: Vec<(f64, f64)> =
        cands.into_iter().filter(|c| c.1 >= best - cfg.tie_tol).collect();
    kept.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut argmax: Vec<f64> = Vec::with_capacity(kept.len());
    let mut vals: Vec<f64> = Vec::with_capacity(kept.len());
    for (t, fv) in kept {
        match argmax.last() {
            Some(&last) if t - last <= cfg.arg_tol => {
                let i = argmax.len() - 1;
                if fv > vals[i] {
                    argmax[i] = t;
                    vals[i] = fv;
                }
            }
            _ => {
                argmax.push(t);
                vals.push(fv);
            }
        }
    }
    Ok(Maximum { argmax, value: best })
}

fn golden<F>(f: &mut F, a: f64, b: f64, start: (f64, f64), iters: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = start;
    let take = |t: f64, v: f64, best: &mut (f64, f64)| {
        if v > best.1 || (v == best.1 && t < best.0) {
            *best = (t, v);
        }
    };
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = probe(f, c)?;
    let mut fd = probe(f, d)?;
    take(c, fc, &mut best);
    take(d, fd, &mut best);
    for _ in 0..iters {
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = probe(f, c)?;
            take(c, fc, &mut best);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = probe(f, d)?;
            take(d, fd, &mut best);
        }
    }
    Ok(best)
}

fn snap_to_boundary<F>(
    f: &mut F,
    t: f64,
    fv: f64,
    domain: Interval,
    cfg: &SolverConfig,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    for edge in [domain.lo(), domain.hi()] {
        if t != edge && (t - edge).abs() <= cfg.arg_tol {
            let fe = probe(f, edge)?;
            if fe >= fv - cfg.value_tol {
                return Ok((edge, fe));
            }
        }
    }
    Ok((t, fv))
}

/// Golden-section alone cannot locate a smooth maximum better than about
/// sqrt(machine eps). Find the root of a 5-point derivative near the golden
/// point instead; keep the golden point when no sign change brackets it.
fn polish<F>(
    f: &mut F,
    t0: f64,
    f0: f64,
    a: f64,
    b: f64,
    domain: Interval,
    cfg: &SolverConfig,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let w = b - a;
    if !domain.interior(t0) || w <= 0.0 {
        return Ok((t0, f0));
    }
    let h = (0.02 * w).min((t0 - domain.lo()) / 2.5).min((domain.hi() - t0) / 2.5);
    if h < 1e-6 * w {
        return Ok((t0, f0));
    }
    let mut slope = |t: f64| -> Result<f64> {
        let (p1, m1) = (probe(f, t + h)?, probe(f, t - h)?);
        let (p2, m2) = (probe(f, t + 2.0 * h)?, probe(f, t - 2.0 * h)?);
        Ok((8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h))
    };
    let half = 1e-3 * w;
    let mut lo = (t0 - half).max(a).max(domain.lo() + 2.0 * h);
    let mut hi = (t0 + half).min(b).min(domain.hi() - 2.0 * h);
    if lo >= hi {
        return Ok((t0, f0));
    }
    let (mut dl, mut dh) = (slope(lo)?, slope(hi)?);
    if !(dl > 0.0 && dh < 0.0) {
        return Ok((t0, f0));
    }
    // Illinois variant of regula falsi
    let mut side = 0i8;
    let mut root = 0.5 * (lo + hi);
    for _ in 0..60 {
        root = (lo * dh - hi * dl) / (dh - dl);
        if !(root > lo && root < hi) {
            root = 0.5 * (lo + hi);
        }
        if hi - lo <= 4.0 * f64::EPSILON * root.abs().max(1.0) {
            break;
        }
        let dm = slope(root)?;
        if dm == 0.0 {
            break;
        }
        if dm > 0.0 {
            lo = root;
            dl = dm;
            if side == 1 {
                dh *= 0.5;
            }
            side = 1;
        } else {
            hi = root;
            dh = dm;
            if side == -1 {
                dl *= 0.5;
            }
            side = -1;
        }
    }
    let fr = probe(f, root)?;
    if fr >= f0 - cfg.value_tol {
        Ok((root, fr))
    } else {
        Ok((t0, f0))
    }
}

/// Central difference with `h = step·max(1, |v|)`; second-order one-sided near the ends.
pub fn finite_diff<F>(mut f: F, v: f64, domain: Interval, step: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !domain.contains(v) {
        return Err(Error::Domain(format!("{v} outside {domain}")));
    }
    let h = step * v.abs().max(1.0);
    if v - h >= domain.lo() && v + h <= domain.hi() {
        let (p, m) = (probe(&mut f, v + h)?, probe(&mut f, v - h)?);
        return Ok((p - m) / (2.0 * h));
    }
    if v + 2.0 * h <= domain.hi() {
        let f0 = probe(&mut f, v)?;
        let f1 = probe(&mut f, v + h)?;
        let f2 = probe(&mut f, v + 2.0 * h)?;
        return Ok((4.0 * (f1 - f0) - (f2 - f0)) / (2.0 * h));
    }
    if v - 2.0 * h >= domain.lo() {
        let f0 = probe(&mut f, v)?;
        let f1 = probe(&mut f, v - h)?;
        let f2 = probe(&mut f, v - 2.0 * h)?;
        return Ok(-(4.0 * (f1 - f0) - (f2 - f0)) / (2.0 * h));
    }
    Err(Error::Domain(format!("domain {domain} too narrow for step {h}")))
}

/// Fourth-order derivative used where `finite_diff` is not accurate enough.
pub(crate) fn derivative4<F>(mut f: F, v: f64, domain: Interval, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if v - 2.0 * h >= domain.lo() && v + 2.0 * h <= domain.hi() {
        let (p1, m1) = (probe(&mut f, v + h)?, probe(&mut f, v - h)?);
        let (p2, m2) = (probe(&mut f, v + 2.0 * h)?, probe(&mut f, v - 2.0 * h)?);
        return Ok((8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h));
    }
    let dir = if v + 4.0 * h <= domain.hi() {
        1.0
    } else if v - 4.0 * h >= domain.lo() {
        -1.0
    } else {
        return finite_diff(f, v, domain, h / v.abs().max(1.0));
    };
    let f0 = probe(&mut f, v)?;
    let mut d = [0.0; 4];
    for (k, dk) in d.iter_mut().enumerate() {
        *dk = probe(&mut f, v + dir * h * (k + 1) as f64)? - f0;
    }
    Ok(dir * (48.0 * d[0] - 36.0 * d[1] + 16.0 * d[2] - 3.0 * d[3]) / (12.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn quadratic_interior_maximum() {
        let cfg = SolverConfig::default();
        let m = maximize_1d(|v| Ok(-(v - 0.3) * (v - 0.3)), unit(), &cfg).unwrap();
        assert_eq!(m.argmax.len(), 1);
        assert!((m.first() - 0.3).abs() <= cfg.arg_tol);
        assert!(m.value.abs() < 1e-15);
    }

    #[test]
    fn off_grid_maximum_is_polished() {
        let cfg = SolverConfig::default();
        let c = 0.123_456_789_012;
        let m = maximize_1d(|v| Ok(v.sin() - (v - c).powi(2) - v.sin()), unit(), &cfg).unwrap();
        assert!((m.first() - c).abs() < 1e-10, "{}", m.first() - c);
    }

    #[test]
    fn constant_keeps_whole_grid() {
        let cfg = SolverConfig::default().with_grid(11);
        let m = maximize_1d(|_| Ok(2.5), unit(), &cfg).unwrap();
        assert_eq!(m.argmax.len(), 11);
        assert_eq!(m.value, 2.5);
        assert_eq!(m.first(), 0.0);
    }

    #[test]
    fn boundary_maximum() {
        let cfg = SolverConfig::default();
        let m = maximize_1d(|v| Ok(v * (1.0 - v)), Interval::new(0.0, 0.4).unwrap(), &cfg).unwrap();
        assert_eq!(m.argmax, vec![0.4]);
        assert!((m.value - 0.24).abs() < 1e-15);
    }

    #[test]
    fn two_equal_peaks_are_both_kept() {
        let cfg = SolverConfig::default();
        let m = maximize_1d(|v| Ok(-((v - 0.25) * (v - 0.75)).powi(2)), unit(), &cfg).unwrap();
        assert_eq!(m.argmax.len(), 2);
        assert!((m.argmax[0] - 0.25).abs() < 1e-7 && (m.argmax[1] - 0.75).abs() < 1e-7);
    }

    #[test]
    fn non_finite_is_error() {
        let cfg = SolverConfig::default();
        let r = maximize_1d(|v| Ok(1.0 / (v - 0.5)), unit(), &cfg);
        assert!(matches!(r, Err(Error::Numeric(_))));
    }

    #[test]
    fn finite_diff_cases() {
        let d = Interval::new(0.0, 10.0).unwrap();
        let sq = |v: f64| Ok(v * v);
        assert!((finite_diff(sq, 3.0, d, 1e-6).unwrap() - 6.0).abs() < 1e-4);
        assert!(finite_diff(sq, 0.0, d, 1e-6).unwrap().abs() <= 2e-6);
        assert!(finite_diff(sq, 10.0, d, 1e-6).unwrap() - 20.0 < 1e-4);
        assert_eq!(finite_diff(|_| Ok(0.1), 0.0, d, 1e-6).unwrap(), 0.0);
        assert_eq!(finite_diff(|_| Ok(0.1), 5.0, d, 1e-6).unwrap(), 0.0);
        assert_eq!(finite_diff(|_| Ok(0.1), 10.0, d, 1e-6).unwrap(), 0.0);
        assert!(finite_diff(sq, 11.0, d, 1e-6).is_err());
    }

    #[test]
    fn fourth_order_derivative() {
        let d = unit();
        for v in [0.0, 0.3, 1.0] {
            let g = derivative4(|t| Ok(t.exp()), v, d, 1e-3).unwrap();
            assert!((g - v.exp()).abs() < 1e-10, "{v}: {g}");
        }
    }

    #[test]
    fn golden_matches_dense_grid_oracle() {
        let cfg = SolverConfig::default().with_grid(21);
        let f = |v: f64| (3.0 * v).sin() * (-v).exp();
        let m = maximize_1d(|v| Ok(f(v)), Interval::new(0.0, 3.0).unwrap(), &cfg).unwrap();
        let oracle = (0..=300_000)
            .map(|k| 3.0 * k as f64 / 300_000.0)
            .fold((0.0, f64::NEG_INFINITY), |acc, v| if f(v) > acc.1 { (v, f(v)) } else { acc });
        assert!((m.first() - oracle.0).abs() < 2e-5);
        assert!(m.value >= oracle.1);
    }
}
