//! One-dimensional search primitives: golden-section minimization, bisection
//! for monotone predicates, and grid builders.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes `f` on `[a, b]` by golden-section search until the bracket is
/// narrower than `rtol * max(|a|, |b|, tiny)`. Returns `(x, f(x))`.
///
/// The objective is assumed unimodal on the bracket; callers that cannot
/// guarantee this should pre-scan with a grid and refine the best cell.
pub fn golden_section_min<F>(f: F, a: f64, b: f64, rtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        let scale = a.abs().max(b.abs()).max(1e-300);
        if (b - a) <= rtol * scale {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    // Endpoints of the final bracket are cheap and occasionally better when
    // the minimum sits on a kink at the bracket edge.
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [a, b] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Grid-then-refine minimization: evaluates `f` at `points`, then runs a
/// golden-section search on the cell pair around the best point.
pub fn grid_refine_min<F>(f: F, points: &[f64], rtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    assert!(!points.is_empty());
    let values: Vec<f64> = points.iter().map(|&x| f(x)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] || values[best].is_nan() {
            best = i;
        }
    }
    let lo = points[best.saturating_sub(1)];
    let hi = points[(best + 1).min(points.len() - 1)];
    let grid_best = (points[best], values[best]);
    if hi <= lo {
        return grid_best;
    }
    let refined = golden_section_min(&f, lo, hi, rtol);
    if refined.1 < grid_best.1 {
        refined
    } else {
        grid_best
    }
}

/// Finds the boundary of a monotone predicate on `[lo, hi]`: assuming
/// `pred(lo) == false` and `pred(hi) == true`, returns the smallest `x` (up to
/// relative tolerance `rtol`) with `pred(x) == true`. Bisects geometrically
/// when the bracket is strictly positive and spans more than a factor of 4.
pub fn bisect_threshold<P>(mut pred: P, mut lo: f64, mut hi: f64, rtol: f64) -> f64
where
    P: FnMut(f64) -> bool,
{
    for _ in 0..2000 {
        if hi - lo <= rtol * hi.abs().max(lo.abs()) {
            break;
        }
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `n` log-spaced points from `min` to `max` inclusive.
pub fn log_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(min > 0.0 && max >= min && n >= 1);
    if n == 1 {
        return vec![min];
    }
    let (lmin, lmax) = (min.ln(), max.ln());
    let mut out: Vec<f64> = (0..n)
        .map(|i| (lmin + (lmax - lmin) * i as f64 / (n - 1) as f64).exp())
        .collect();
    out[0] = min;
    out[n - 1] = max;
    out
}

/// `n` evenly spaced points from `min` to `max` inclusive.
pub fn lin_grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(max >= min && n >= 1);
    if n == 1 {
        return vec![min];
    }
    let mut out: Vec<f64> = (0..n)
        .map(|i| min + (max - min) * i as f64 / (n - 1) as f64)
        .collect();
    out[n - 1] = max;
    out
}

/// `a <= b` up to a relative slack of `rtol`.
pub(crate) fn le_rel(a: f64, b: f64, rtol: f64) -> bool {
    a <= b || a - b <= rtol * b.abs().max(a.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_section_min(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_refine_handles_kinks() {
        let pts = lin_grid(0.0, 1.0, 256);
        let (x, fx) = grid_refine_min(|x| (x - 0.71).abs(), &pts, 1e-12);
        assert!((x - 0.71).abs() < 1e-9, "{x}");
        assert!(fx < 1e-9);
    }

    #[test]
    fn bisect_threshold_cube_root() {
        let x = bisect_threshold(|x| x * x * x >= 1000.0, 1e-9, 1e12, 1e-14);
        assert!((x - 10.0).abs() < 1e-11);
    }

    #[test]
    fn grids_are_inclusive() {
        let g = log_grid(2.0, 1e6, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 2.0);
        assert_eq!(g[199], 1e6);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let l = lin_grid(0.0, 1.0, 5);
        assert_eq!(l, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
