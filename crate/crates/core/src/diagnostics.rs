//! Grid-based evidence for regularity, associate-space identities, the
//! universal `C/t` bound and direct-sum sandwich bounds.
//!
//! Every report is assembled in grid order. Per-point work runs on the rayon
//! pool but never affects the output.

use rayon::prelude::*;

use crate::catalog::{characteristic, fundamental, Family, SpaceDescriptor, YoungFunction};
use crate::error::{Error, Result};
use crate::optimize::{bisect_threshold, le_rel};
use crate::report::{Constants, DiagnosticsReport, GridKind, PointRecord, Verdict};
use crate::tail::{equivalence_check, left_inverse, vee, TailFunction};

/// Tolerance for the `exact` verdict.
pub const EXACT_TOL: f64 = 1e-6;
/// Minimal total growth of a monotone ratio for the `unbounded` verdict.
pub const UNBOUNDED_GROWTH: f64 = 5.0;
/// Upper end of the bracket expansion for functional inversion.
pub const INVERSION_CAP: f64 = 1e300;

const IDENTITY_TOL: f64 = 1e-9;

fn check_grid(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Usage(format!("empty {what}")));
    }
    if grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage(format!(
            "{what} must be positive, finite and strictly increasing"
        )));
    }
    Ok(())
}

fn require_probabilistic(space: &SpaceDescriptor) -> Result<()> {
    if space.is_probabilistic() {
        Ok(())
    } else {
        Err(Error::Usage(format!(
            "{space} uses an infinite measure; this diagnostic needs a probability measure"
        )))
    }
}

/// Smallest `s >= lo` with `g(s) >= target` for increasing `g`. The upper
/// bracket is doubled until it encloses the root.
fn invert_increasing<G: Fn(f64) -> f64>(g: G, target: f64, lo: f64) -> Result<f64> {
    if g(lo) >= target {
        return Ok(lo);
    }
    let mut hi = (2.0 * lo).max(target);
    while g(hi) < target {
        hi *= 2.0;
        if !(hi <= INVERSION_CAP) {
            return Err(Error::Numerical(format!(
                "inversion of g at {target}: bracket [{lo}, {INVERSION_CAP:e}] holds no root \
                 (g(hi) = {})",
                g(INVERSION_CAP)
            )));
        }
    }
    Ok(bisect_threshold(|s| g(s) >= target, lo, hi, 1e-13))
}

fn is_monotone(xs: &[f64]) -> bool {
    let up = xs.windows(2).all(|w| le_rel(w[0], w[1], 1e-9));
    let down = xs.windows(2).all(|w| le_rel(w[1], w[0], 1e-9));
    up || down
}

fn classify(ratios: &[f64]) -> (Verdict, Constants) {
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| (a.min(r), b.max(r)));
    let consts = Constants { c: None, c1: Some(lo), c2: Some(hi) };
    if ratios.iter().all(|r| (r - 1.0).abs() <= EXACT_TOL) {
        (Verdict::Exact, consts)
    } else if is_monotone(ratios) && hi >= UNBOUNDED_GROWTH * lo {
        (Verdict::Unbounded, consts)
    } else {
        (Verdict::BoundedRatio, consts)
    }
}

/// Ratio `ρ(t) = g^{-1}(t)·T(t)` with `g(s) = 1/φ(1/s)`, at every grid
/// `t >= t0`.
///
/// Rows carry `lhs = g^{-1}(t)`, `rhs = 1/T(t)` and `ratio = ρ(t)`. Verdict:
/// `exact` if `|ρ - 1| <= 1e-6` throughout, `unbounded` if `ρ` is monotone
/// with `max/min >= 5`, `boundedRatio` otherwise (extremes in `c1`, `c2`).
pub fn regularity_report(space: &SpaceDescriptor, grid: &[f64]) -> Result<DiagnosticsReport> {
    require_probabilistic(space)?;
    check_grid(grid, "t-grid")?;
    let tail = characteristic(space)?;
    let phi = fundamental(space)?;
    let start = phi.increasing_from().max(1.0);
    let g = |s: f64| 1.0 / phi.eval(1.0 / s).unwrap_or(f64::NAN);

    let pts: Vec<f64> = grid.iter().copied().filter(|&t| t >= tail.t0()).collect();
    if pts.is_empty() {
        return Err(Error::Usage(format!(
            "no t-grid point at or beyond t0 = {}",
            tail.t0()
        )));
    }
    let values = pts
        .par_iter()
        .map(|&t| {
            let inv = invert_increasing(g, t, start)?;
            let tt = tail.eval(t);
            Ok(PointRecord { t, lhs: inv, rhs: 1.0 / tt, ratio: inv * tt })
        })
        .collect::<Result<Vec<_>>>()?;

    let ratios: Vec<f64> = values.iter().map(|r| r.ratio).collect();
    let (verdict, constants) = classify(&ratios);
    let mut notes = vec![format!("grid points below t0 = {} skipped", tail.t0())];
    if phi.is_asymptotic() {
        notes.push(
            "fundamental function taken in its asymptotic form with unit constants; \
             the verdict reflects that form"
                .into(),
        );
        notes.push(format!("g inverted on its increasing branch s >= {start:.6e}"));
    }
    if let Family::Gls { .. } = space.family {
        notes.push("characteristic is the optimization upper bound".into());
    }
    Ok(DiagnosticsReport {
        subject: format!("regularity {space}"),
        grid_kind: GridKind::T,
        values,
        delta_values: vec![],
        verdict,
        constants: Some(constants),
        notes,
    })
}

enum PairKind {
    Lebesgue,
    Orlicz,
}

fn is_conjugate_of(a: &YoungFunction, b: &YoungFunction) -> bool {
    matches!(a, YoungFunction::Conjugate { of } if **of == *b)
}

fn pair_kind(f: &SpaceDescriptor, g: &SpaceDescriptor) -> Option<PairKind> {
    if f.measure != g.measure {
        return None;
    }
    match (&f.family, &g.family) {
        (Family::Lp { p }, Family::Lp { p: q }) => {
            let dual = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
            ((dual(*p) + dual(*q) - 1.0).abs() <= 1e-12).then_some(PairKind::Lebesgue)
        }
        (Family::Orlicz { n }, Family::Orlicz { n: m })
            if f.is_probabilistic() && (is_conjugate_of(m, n) || is_conjugate_of(n, m)) =>
        {
            Some(PairKind::Orlicz)
        }
        _ => None,
    }
}

/// Both sides of `[1/T_F]^{-1}(t)·[1/T_F']^{-1}(t) = t` on the t-grid and
/// of `φ_F(δ)·φ_F'(δ) = δ` on the δ-grid, for a cataloged associate pair.
///
/// Lebesgue pairs must match to 1e-9 (`exact`). Orlicz pairs with Luxemburg
/// norms only satisfy the identity up to a factor in `[1, 2]` on the t-grid
/// (`[1/2, 1]` on the δ-grid); their verdict is `boundedRatio` with the
/// measured extremes. Any t-grid product below `t·(1 - 1e-9)` is `violated`.
pub fn associate_product(
    space_f: &SpaceDescriptor,
    space_g: &SpaceDescriptor,
    t_grid: &[f64],
    delta_grid: &[f64],
) -> Result<DiagnosticsReport> {
    let kind = pair_kind(space_f, space_g).ok_or_else(|| {
        Error::Usage(format!(
            "{space_f} and {space_g} are not a cataloged associate pair \
             (Lp/Lq with 1/p + 1/q = 1, or Orlicz N with its conjugate)"
        ))
    })?;
    check_grid(t_grid, "t-grid")?;
    check_grid(delta_grid, "δ-grid")?;
    let (tf, tg) = (characteristic(space_f)?, characteristic(space_g)?);
    let (pf, pg) = (fundamental(space_f)?, fundamental(space_g)?);

    let values = t_grid
        .par_iter()
        .map(|&t| {
            let a = left_inverse(&tf, 1.0 / t)?;
            let b = left_inverse(&tg, 1.0 / t)?;
            Ok(PointRecord::new(t, a * b, t))
        })
        .collect::<Result<Vec<_>>>()?;
    let delta_values = delta_grid
        .par_iter()
        .map(|&d| Ok(PointRecord::new(d, pf.eval(d)? * pg.eval(d)?, d)))
        .collect::<Result<Vec<_>>>()?;

    let (tlo, thi) = range(&values);
    let (dlo, dhi) = range(&delta_values);
    let mut notes = Vec::new();
    let direction_ok = tlo >= 1.0 - IDENTITY_TOL;
    if !direction_ok {
        notes.push(format!("product fell below t: min ratio {tlo:.6e}"));
    }
    let verdict = match kind {
        PairKind::Lebesgue => {
            let close = |r: f64| (r - 1.0).abs() <= IDENTITY_TOL;
            if values.iter().chain(&delta_values).all(|r| close(r.ratio)) {
                Verdict::Exact
            } else {
                Verdict::Violated
            }
        }
        PairKind::Orlicz => {
            notes.push(
                "Luxemburg norms: the identities hold up to a factor in [1, 2]; \
                 measured extremes recorded"
                    .into(),
            );
            let t_ok = thi <= 2.0 + EXACT_TOL;
            let d_ok = dlo >= 0.5 - EXACT_TOL && dhi <= 1.0 + IDENTITY_TOL;
            if direction_ok && t_ok && d_ok {
                Verdict::BoundedRatio
            } else {
                Verdict::Violated
            }
        }
    };
    let verdict = if direction_ok { verdict } else { Verdict::Violated };
    notes.push(format!("δ-grid ratio range [{dlo:.6e}, {dhi:.6e}]"));
    Ok(DiagnosticsReport {
        subject: format!("associate {space_f} / {space_g}"),
        grid_kind: GridKind::T,
        values,
        delta_values,
        verdict,
        constants: Some(Constants { c: None, c1: Some(tlo), c2: Some(thi) }),
        notes,
    })
}

fn range(rows: &[PointRecord]) -> (f64, f64) {
    rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
        (a.min(r.ratio), b.max(r.ratio))
    })
}

/// `C3 = max_t t·T(t)` over the grid. Stable when the top decade of the grid
/// does not exceed the maximum over the rest by more than 1e-6 relative.
pub fn resonant_bound(space: &SpaceDescriptor, grid: &[f64]) -> Result<DiagnosticsReport> {
    require_probabilistic(space)?;
    check_grid(grid, "t-grid")?;
    let tail = characteristic(space)?;
    let prods: Vec<(f64, f64)> = grid.par_iter().map(|&t| (t, t * tail.eval(t))).collect();
    let c3 = prods.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let top_from = grid[grid.len() - 1] / 10.0;
    let max_over = |top: bool| {
        prods
            .iter()
            .filter(|p| (p.0 >= top_from) == top)
            .map(|p| p.1)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (top, rest) = (max_over(true), max_over(false));
    let mut notes = Vec::new();
    let stable = if rest == f64::NEG_INFINITY {
        notes.push("grid spans less than a decade; stability not assessed".into());
        true
    } else {
        top <= rest * (1.0 + EXACT_TOL)
    };
    notes.push(format!("max over top decade {top:.6e}, over the rest {rest:.6e}"));
    let verdict = if c3.is_finite() && stable {
        Verdict::BoundedRatio
    } else {
        Verdict::Unbounded
    };
    let values = prods.iter().map(|&(t, v)| PointRecord::new(t, v, c3)).collect();
    Ok(DiagnosticsReport {
        subject: format!("resonant {space}"),
        grid_kind: GridKind::T,
        values,
        delta_values: vec![],
        verdict,
        constants: Some(Constants { c: Some(c3), c1: None, c2: None }),
        notes,
    })
}

/// Pointwise `max(T_F, T_G) <= T_F ∨ T_G`. Rows carry `lhs = max`,
/// `rhs = vee` and `ratio = rhs/lhs`. The equivalence `vee ∼ max` is also
/// searched; a witness gives `boundedRatio` with its constants, none gives
/// `unbounded`. A sandwich failure is `violated`.
pub fn sum_characteristic_bounds(
    tf: &TailFunction,
    tg: &TailFunction,
    grid: &[f64],
) -> Result<DiagnosticsReport> {
    check_grid(grid, "t-grid")?;
    let upper = vee(tf, tg)?;
    let values: Vec<PointRecord> = grid
        .par_iter()
        .map(|&t| {
            let lo = tf.eval(t).max(tg.eval(t));
            let hi = upper.eval(t);
            let ratio = if lo == 0.0 && hi == 0.0 { 1.0 } else { hi / lo };
            PointRecord { t, lhs: lo, rhs: hi, ratio }
        })
        .collect();
    let failures = values.iter().filter(|r| !le_rel(r.lhs, r.rhs, IDENTITY_TOL)).count();

    let lower = TailFunction::new(
        {
            let (a, b) = (tf.clone(), tg.clone());
            move |t| a.eval(t).max(b.eval(t))
        },
        tf.total_mass(),
        tf.t0().max(tg.t0()),
        crate::tail::Provenance::Composed,
    )?;
    let witness = equivalence_check(&upper, &lower, grid)?;
    let mut notes = Vec::new();
    if failures > 0 {
        notes.push(format!("max exceeds vee at {failures} grid points"));
    }
    let (verdict, constants) = match witness {
        _ if failures > 0 => (Verdict::Violated, None),
        Some(w) => {
            notes.push(format!("vee ∼ max from t0 = {:.6e}", w.t0));
            (Verdict::BoundedRatio, Some(Constants { c: None, c1: Some(w.c1), c2: Some(w.c2) }))
        }
        None => {
            notes.push("no equivalence witness for vee ∼ max on this grid".into());
            (Verdict::Unbounded, None)
        }
    };
    Ok(DiagnosticsReport {
        subject: "sum max vs vee".into(),
        grid_kind: GridKind::T,
        values,
        delta_values: vec![],
        verdict,
        constants,
        notes,
    })
}
