use num_complex::Complex64;

use super::modes::{FieldMode, ModeValue, Support, LOG_APEX_CUTOFF};
use crate::error::Result;
use crate::specfun::{try_integrate_finite, IntegralResult, QuadratureSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Elementary interval of the common support with apex flags on its ends.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Piece {
    lo: f64,
    hi: f64,
    lo_apex: bool,
    hi_apex: bool,
    lo_floor: f64,
    hi_floor: f64,
}

fn covered(supports: &[Support], lo: f64, hi: f64) -> bool {
    supports.iter().any(|s| s.contains_interval(lo, hi))
}

/// Splits the intersection of the two support unions at every support
/// endpoint. An end is an apex if some covering support has its apex there;
/// its floor is the largest floor among those, since the integrand is a
/// product of the two modes.
fn common_pieces(a: &[Support], b: &[Support]) -> Vec<Piece> {
    let mut cuts: Vec<f64> = a.iter().chain(b).flat_map(|s| [s.lo, s.hi]).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let all: Vec<&Support> = a.iter().chain(b).collect();
    cuts.windows(2)
        .filter(|w| w[1] > w[0] && covered(a, w[0], w[1]) && covered(b, w[0], w[1]))
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let cov = |s: &&&Support| s.contains_interval(lo, hi);
            let at_lo: Vec<&&Support> = all.iter().filter(cov).filter(|s| s.lo_apex && s.lo == lo).collect();
            let at_hi: Vec<&&Support> = all.iter().filter(cov).filter(|s| s.hi_apex && s.hi == hi).collect();
            let floor = |v: &[&&Support]| v.iter().map(|s| s.log_floor).fold(LOG_APEX_CUTOFF, f64::max);
            Piece {
                lo,
                hi,
                lo_apex: !at_lo.is_empty(),
                hi_apex: !at_hi.is_empty(),
                lo_floor: floor(&at_lo),
                hi_floor: floor(&at_hi),
            }
        })
        .collect()
}

#[inline]
fn density(a: ModeValue, b: ModeValue) -> Complex64 {
    I * (a.value.conj() * b.dt - b.value * a.dt.conj())
}

fn accumulate(total: &mut IntegralResult<Complex64>, r: IntegralResult<Complex64>) {
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.converged &= r.converged;
    total.evaluations += r.evaluations;
}

/// Integral over `(apex, apex + dir·len]` in u = ln(m|x − apex|), from
/// u = `floor` up.
#[allow(clippy::too_many_arguments)]
fn integrate_from_apex(
    a: &dyn FieldMode,
    b: &dyn FieldMode,
    apex: f64,
    dir: f64,
    len: f64,
    floor: f64,
    m: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<Complex64>> {
    let u_hi = (m * len).ln();
    if u_hi <= floor {
        return Ok(IntegralResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            converged: true,
            evaluations: 0,
        });
    }
    let u_lo = floor;
    let bp: Vec<f64> = (u_lo.ceil() as i64..=u_hi.floor() as i64)
        .map(|u| u as f64)
        .filter(|&u| u > u_lo && u < u_hi)
        .collect();
    try_integrate_finite(
        |u| {
            let chi = u.exp() / m;
            Ok(density(a.eval_from(apex, dir, chi)?, b.eval_from(apex, dir, chi)?) * chi)
        },
        u_lo,
        u_hi,
        &bp,
        spec,
    )
}

/// Klein–Gordon inner product on the t = 0 slice,
///
/// ```text
/// (A|B) = i ∫dx (A* ∂_t B − B ∂_t A*),
/// ```
///
/// antilinear in A, normalized so that (u_k|u_l) = δ(k − l). Near wedge
/// apexes the integral runs in ln χ, where Rindler modes oscillate.
pub fn kg_inner_product(
    a: &dyn FieldMode,
    b: &dyn FieldMode,
    spec: &QuadratureSpec,
) -> Result<IntegralResult<Complex64>> {
    spec.validate()?;
    let m = a.mass().min(b.mass());
    let mut total = IntegralResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        converged: true,
        evaluations: 0,
    };
    for p in common_pieces(&a.supports(), &b.supports()) {
        let len = p.hi - p.lo;
        match (p.lo_apex, p.hi_apex) {
            (true, true) => {
                let half = 0.5 * len;
                accumulate(
                    &mut total,
                    integrate_from_apex(a, b, p.lo, 1.0, half, p.lo_floor, m, spec)?,
                );
                accumulate(
                    &mut total,
                    integrate_from_apex(a, b, p.hi, -1.0, half, p.hi_floor, m, spec)?,
                );
            }
            (true, false) => accumulate(
                &mut total,
                integrate_from_apex(a, b, p.lo, 1.0, len, p.lo_floor, m, spec)?,
            ),
            (false, true) => accumulate(
                &mut total,
                integrate_from_apex(a, b, p.hi, -1.0, len, p.hi_floor, m, spec)?,
            ),
            (false, false) => {
                let n = 32;
                let bp: Vec<f64> = (1..n).map(|i| p.lo + len * i as f64 / n as f64).collect();
                let r = try_integrate_finite(|x| Ok(density(a.eval(x)?, b.eval(x)?)), p.lo, p.hi, &bp, spec)?;
                accumulate(&mut total, r);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pieces_of_overlapping_wedges() {
        // D < 0: wedge I is (−0.5, 10], wedge II is [−10, 0.5); the overlap
        // (−0.5, 0.5) has apexes at both ends.
        let wi = Support {
            lo: -0.5,
            hi: 10.0,
            lo_apex: true,
            hi_apex: false,
            log_floor: -300.0,
        };
        let wii = Support {
            lo: -10.0,
            hi: 0.5,
            lo_apex: false,
            hi_apex: true,
            log_floor: -200.0,
        };
        let p = common_pieces(&[wi], &[wii]);
        assert_eq!(
            p,
            vec![Piece {
                lo: -0.5,
                hi: 0.5,
                lo_apex: true,
                hi_apex: true,
                lo_floor: -300.0,
                hi_floor: -200.0,
            }]
        );
        let mink = Support::interval(-3.0, 3.0);
        let p = common_pieces(&[wi, wii], &[mink]);
        assert_eq!(p.len(), 3);
        // Only the overlap touches an apex of a support that covers it.
        assert!(!p[0].lo_apex && !p[0].hi_apex);
        assert!(p[1].lo_apex && p[1].hi_apex);
        assert!(!p[2].lo_apex && !p[2].hi_apex);
    }

    #[test]
    fn disjoint_supports_give_no_pieces() {
        let a = Support::interval(0.0, 1.0);
        let b = Support::interval(2.0, 3.0);
        assert!(common_pieces(&[a], &[b]).is_empty());
    }
}
