//! The boundary system behind the sector-density guarantees.
//!
//! Given moment constants (q₄, q₆, q₈) and a density cap, the system
//! couples three conditions in the unknowns (d, β, α):
//!
//! - E1: (q₄−d)² (1 − β(1−cap))² = q₈·cap   (fourth/eighth moment route)
//! - E2: d^{5/2} (q₈−(q₄−d)²)^{−1/2} (1−α)² = q₆·cap   (third/sixth route)
//! - E3: ((q₄−d)β)^{3/4} = α d^{5/4} (q₈−(q₄−d)²)^{−1/4}   (threshold coupling)
//!
//! Here d is the adversarial share of the fourth moment carried by the
//! half-plane opposite the target direction. E1 determines β(d), E3
//! determines α(d), and the root of the E2 residual in d is the boundary
//! case; the guaranteed real-part threshold is ((q₄−d)β)^{1/4}. With
//! cap = 0 the system degenerates smoothly to β = α = 1, which is the
//! route used for the low-order central characters where only positivity
//! of the density is claimed.
//!
//! The solver restricts to the branch α ≤ 1: the E2 residual also vanishes
//! on a spurious branch with α > 1 where the underlying inequality loses
//! its direction.
//!
//! All routines are deterministic f64; grids and bisection only.

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::moment_constants::{self, MomentError};
use crate::rays;

/// Default density cap 1/234; a configuration default, not a constant of
/// the method. Callers may re-optimize the cap/Q trade-off.
pub const DEFAULT_CAP: f64 = 1.0 / 234.0;
/// Default residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default scan grid size.
pub const DEFAULT_GRID: usize = 10_000;
/// Branch split for order-two central characters: the generic branch has
/// cos 4φ ≥ −0.785, the near-diagonal branch lies below it.
pub const ORDER_TWO_BRANCH_SPLIT: f64 = -0.785;

#[derive(Debug, Error)]
pub enum OptimizerError {
    #[error("the magnitude density bound requires Q ≥ 2, got {0}")]
    QBelowRange(f64),
    #[error("weights must be nonnegative and not all zero")]
    InvalidWeights,
    #[error("cap {0} is outside the invertible range (0, 1/35]")]
    CapOutOfRange(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("boundary system infeasible: {0}")]
    Infeasible(String),
    #[error("boundary solution violates a constraint: {0}")]
    ConstraintViolation(String),
    #[error("threshold must satisfy 0 < threshold < Q")]
    ThresholdOutOfRange,
    #[error(transparent)]
    Moment(#[from] MomentError),
}

/// Density bound for eigenvalue magnitudes above Q ≥ 2:
/// 1 / (1 + (Q²−1)² + (Q⁴−3Q²+1)²), strictly decreasing on [2, ∞).
pub fn magnitude_density_bound(q: f64) -> Result<f64, OptimizerError> {
    if !q.is_finite() || q < 2.0 {
        return Err(OptimizerError::QBelowRange(q));
    }
    let x = q * q - 1.0;
    let y = q * q * q * q - 3.0 * q * q + 1.0;
    Ok(1.0 / (1.0 + x * x + y * y))
}

/// The same bound with free nonnegative weights (a, b, c) on the three
/// isobaric summands: (a² + b² + c²) / (a + b(Q²−1) + c(Q⁴−3Q²+1))².
/// By Cauchy–Schwarz it is minimized at (1, Q²−1, Q⁴−3Q²+1), where it
/// equals [`magnitude_density_bound`].
pub fn magnitude_density_bound_weighted(
    q: f64,
    a: f64,
    b: f64,
    c: f64,
) -> Result<f64, OptimizerError> {
    if !q.is_finite() || q < 2.0 {
        return Err(OptimizerError::QBelowRange(q));
    }
    if a < 0.0 || b < 0.0 || c < 0.0 || (a == 0.0 && b == 0.0 && c == 0.0) {
        return Err(OptimizerError::InvalidWeights);
    }
    // for Q ≥ 2 both weight factors are positive, so the denominator is too
    let denom = a + b * (q * q - 1.0) + c * (q * q * q * q - 3.0 * q * q + 1.0);
    Ok((a * a + b * b + c * c) / (denom * denom))
}

/// Inverts the magnitude density bound: the unique Q ≥ 2 with
/// bound(Q) = cap, for cap ∈ (0, 1/35].
pub fn min_q_for_cap(cap: f64) -> Result<f64, OptimizerError> {
    let at_two = magnitude_density_bound(2.0).expect("2 is in range");
    if !cap.is_finite() || cap <= 0.0 || cap > at_two {
        return Err(OptimizerError::CapOutOfRange(cap));
    }
    let mut lo = 2.0_f64;
    let mut hi = 4.0_f64;
    while magnitude_density_bound(hi)? >= cap {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(OptimizerError::CapOutOfRange(cap));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if magnitude_density_bound(mid)? >= cap {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solution of the boundary system at a given cap.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundarySolution {
    pub q4: f64,
    pub q6: f64,
    pub q8: f64,
    pub cap: f64,
    /// Worst-case opposite-half-plane share of the fourth moment.
    pub d: f64,
    pub beta: f64,
    pub alpha: f64,
    /// Guaranteed real-part threshold ((q₄−d)β)^{1/4}.
    pub threshold: f64,
    /// E1 residual at the solution.
    pub residual_s: f64,
    /// E2 residual at the solution.
    pub residual_t: f64,
}

impl BoundarySolution {
    /// Threshold recomputed through the S-side identity threshold⁴ = (q₄−d)β.
    pub fn threshold_from_s(&self) -> f64 {
        ((self.q4 - self.d) * self.beta).powf(0.25)
    }

    /// Threshold recomputed through the T-side identity
    /// threshold³ = α d^{5/4} (q₈−(q₄−d)²)^{−1/4}.
    pub fn threshold_from_t(&self) -> f64 {
        let tail = self.q8 - (self.q4 - self.d) * (self.q4 - self.d);
        (self.alpha * self.d.powf(1.25) / tail.powf(0.25)).cbrt()
    }
}

struct System {
    q4: f64,
    q6: f64,
    q8: f64,
    cap: f64,
    sqrt_q8cap: f64,
}

impl System {
    fn new(q4: f64, q6: f64, q8: f64, cap: f64) -> Result<Self, OptimizerError> {
        for (name, v) in [("q4", q4), ("q6", q6), ("q8", q8)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(OptimizerError::InvalidInput(format!("{name} must be positive")));
            }
        }
        if !cap.is_finite() || !(0.0..1.0).contains(&cap) {
            return Err(OptimizerError::InvalidInput("cap must lie in [0, 1)".into()));
        }
        Ok(System { q4, q6, q8, cap, sqrt_q8cap: (q8 * cap).sqrt() })
    }

    /// β is only positive while q₄ − d exceeds sqrt(q₈·cap).
    fn d_max(&self) -> f64 {
        self.q4 - self.sqrt_q8cap
    }

    fn beta(&self, d: f64) -> f64 {
        (1.0 - self.sqrt_q8cap / (self.q4 - d)) / (1.0 - self.cap)
    }

    fn tail(&self, d: f64) -> f64 {
        self.q8 - (self.q4 - d) * (self.q4 - d)
    }

    fn alpha(&self, d: f64) -> f64 {
        ((self.q4 - d) * self.beta(d)).powf(0.75) * self.tail(d).powf(0.25) / d.powf(1.25)
    }

    fn e2_residual(&self, d: f64) -> f64 {
        let a = self.alpha(d);
        d.powf(2.5) / self.tail(d).sqrt() * (1.0 - a) * (1.0 - a) - self.q6 * self.cap
    }

    fn e1_residual(&self, d: f64, beta: f64) -> f64 {
        let lhs = (self.q4 - d) * (1.0 - beta * (1.0 - self.cap));
        lhs * lhs - self.q8 * self.cap
    }
}

fn bisect<F: Fn(f64) -> f64>(mut lo: f64, mut hi: f64, f: F) -> f64 {
    // invariant: f < 0 on the lo side, f ≥ 0 on the hi side
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Solves the boundary system by one-dimensional root finding in d:
/// E1 gives β(d), E3 gives α(d), and the E2 residual selects d. cap = 0 is
/// accepted and yields the positivity limit β = α = 1.
pub fn solve_boundary(
    q4: f64,
    q6: f64,
    q8: f64,
    cap: f64,
) -> Result<BoundarySolution, OptimizerError> {
    let sys = System::new(q4, q6, q8, cap)?;
    let d_max = sys.d_max();
    if d_max <= 0.0 {
        return Err(OptimizerError::Infeasible(format!(
            "q4 = {q4} does not exceed sqrt(q8·cap) = {:.6}",
            sys.sqrt_q8cap
        )));
    }

    // locate the α = 1 crossing; α falls from +∞ near d = 0
    const SCAN: usize = 4096;
    let mut bracket = None;
    let mut prev = d_max * 1e-12;
    for i in 0..SCAN {
        let d = d_max * (i as f64 + 0.5) / SCAN as f64;
        if sys.alpha(d) <= 1.0 {
            bracket = Some((prev, d));
            break;
        }
        prev = d;
    }
    let (lo, hi) =
        bracket.ok_or_else(|| OptimizerError::Infeasible("no α ≤ 1 region in (0, q4)".into()))?;
    let d_alpha1 = bisect(lo, hi, |d| 1.0 - sys.alpha(d));

    let d = if cap == 0.0 {
        // the E2 residual is (nonneg)·(1−α)², so the boundary case is
        // exactly the α = 1 crossing
        d_alpha1
    } else {
        let mut bracket = None;
        let mut prev = d_alpha1;
        for i in 0..SCAN {
            let d = d_alpha1 + (d_max - d_alpha1) * (i as f64 + 0.5) / SCAN as f64;
            if sys.e2_residual(d) > 0.0 {
                bracket = Some((prev, d));
                break;
            }
            prev = d;
        }
        let (lo, hi) = bracket.ok_or_else(|| {
            OptimizerError::Infeasible("E2 residual has no root with α ≤ 1".into())
        })?;
        bisect(lo, hi, |d| sys.e2_residual(d))
    };

    // at cap = 0 the limit values are exact
    let beta = if cap == 0.0 { 1.0 } else { sys.beta(d) };
    let alpha = if cap == 0.0 { 1.0 } else { sys.alpha(d).min(1.0) };
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(OptimizerError::ConstraintViolation(format!("β = {beta} outside (0, 1]")));
    }
    if alpha <= 0.0 {
        return Err(OptimizerError::ConstraintViolation(format!("α = {alpha} outside (0, 1]")));
    }
    if sys.tail(d) <= 0.0 {
        return Err(OptimizerError::ConstraintViolation(
            "q8 must exceed (q4 − d)² at the solution".into(),
        ));
    }
    Ok(BoundarySolution {
        q4,
        q6,
        q8,
        cap,
        d,
        beta,
        alpha,
        threshold: ((q4 - d) * beta).powf(0.25),
        residual_s: sys.e1_residual(d, beta),
        residual_t: sys.e2_residual(d),
    })
}

/// Grid validation of the boundary case.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub grid: usize,
    /// d minimizing the best available threshold.
    pub binding_d: f64,
    /// The minimized threshold.
    pub threshold: f64,
    /// True when the sixth-moment constraint never contributes (large q₆).
    pub s_constraint_only: bool,
    pub solver_d: Option<f64>,
    /// Whether `binding_d` matches the solver within one grid step.
    pub agrees_with_solver: Option<bool>,
}

/// Evaluates, over a d-grid, the largest threshold consistent with either
/// density constraint at the given cap, and reports the minimizing d. The
/// boundary case from [`solve_boundary`] must be the binding worst case;
/// the report records whether the two agree within grid resolution.
pub fn threshold_scan(
    q4: f64,
    q6: f64,
    q8: f64,
    cap: f64,
    grid: usize,
) -> Result<ScanReport, OptimizerError> {
    if grid < 10 {
        return Err(OptimizerError::InvalidInput("grid must be at least 10".into()));
    }
    let sys = System::new(q4, q6, q8, cap)?;
    let mut best: Option<(f64, f64)> = None;
    let mut t_route_seen = false;
    for i in 1..grid {
        let d = q4 * i as f64 / grid as f64;
        let mut combined: Option<f64> = None;
        if d < sys.d_max() {
            let beta = sys.beta(d);
            if beta > 0.0 && beta <= 1.0 {
                combined = Some(((q4 - d) * beta).powf(0.25));
            }
        }
        let tail = sys.tail(d);
        if tail > 0.0 {
            // largest α that still forces density ≥ cap through E2
            let alpha_max = 1.0 - (q6 * cap * tail.sqrt() / d.powf(2.5)).sqrt();
            if alpha_max > 0.0 {
                t_route_seen = true;
                let t = (alpha_max * d.powf(1.25) / tail.powf(0.25)).cbrt();
                combined = Some(combined.map_or(t, |s| s.max(t)));
            }
        }
        if let Some(t) = combined {
            if best.map_or(true, |(_, bt)| t < bt) {
                best = Some((d, t));
            }
        }
    }
    let (binding_d, threshold) =
        best.ok_or_else(|| OptimizerError::Infeasible("no feasible d on the grid".into()))?;
    let solver_d = solve_boundary(q4, q6, q8, cap).ok().map(|s| s.d);
    let step = q4 / grid as f64;
    Ok(ScanReport {
        grid,
        binding_d,
        threshold,
        s_constraint_only: !t_route_seen,
        solver_d,
        agrees_with_solver: solver_d.map(|sd| (sd - binding_d).abs() <= step + 1e-12),
    })
}

/// arccos(threshold / Q), the half-angle of the sector cut out of the
/// disc of radius Q by the real-part threshold.
pub fn sector_half_angle(threshold: f64, q: f64) -> Result<f64, OptimizerError> {
    if !(threshold > 0.0 && threshold < q) {
        return Err(OptimizerError::ThresholdOutOfRange);
    }
    Ok((threshold / q).acos())
}

/// One φ-branch of a sector guarantee.
#[derive(Debug, Clone, Serialize)]
pub struct SectorBranch {
    pub label: String,
    /// The q₄ value in force on this branch.
    pub q4: f64,
    /// Real-part threshold: Re(a_v e^{−iφ}) > threshold with positive
    /// upper density.
    pub threshold: f64,
    /// Guaranteed eigenvalue magnitude on the branch.
    pub min_abs: f64,
}

/// The end-to-end sector guarantee for central-character order r.
#[derive(Debug, Clone, Serialize)]
pub struct SectorResult {
    pub r: u32,
    /// Density guarantee: the cap for r ≥ 6, zero (positivity only) below.
    pub cap: f64,
    /// Real-part threshold of the generic branch.
    pub threshold: f64,
    /// Magnitude guarantee uniform over branches.
    pub size_guarantee: f64,
    /// Disc radius from the magnitude bound; present only for r ≥ 6 where
    /// the disc route sets the sector angle.
    pub q: Option<f64>,
    pub half_angle: f64,
    pub full_angle: f64,
    pub branches: Vec<SectorBranch>,
}

fn rational_f64(v: &num_rational::BigRational) -> f64 {
    v.to_f64().expect("moment constants fit in f64")
}

/// Worst-case q₄ on the branch containing φ for r = 2, with a label.
pub fn order_two_branch(phi: f64) -> (f64, &'static str) {
    if (4.0 * phi).cos() >= ORDER_TWO_BRANCH_SPLIT {
        ((3.0 + ORDER_TWO_BRANCH_SPLIT) / 4.0, "cos4φ ≥ -0.785")
    } else {
        (0.5, "cos4φ < -0.785")
    }
}

/// Real-part threshold of the density statement in force at angle φ for a
/// low-order central character (2 ≤ r ≤ 5).
pub fn low_order_threshold(r: u32, phi: f64) -> Result<f64, OptimizerError> {
    match r {
        2 => {
            let (q4, _) = order_two_branch(phi);
            let mb = moment_constants::moment_bounds(2)?;
            Ok(
                solve_boundary(q4, rational_f64(&mb.q6_upper), rational_f64(&mb.q8_upper), 0.0)?
                    .threshold,
            )
        }
        3..=5 => {
            let mb = moment_constants::moment_bounds(r)?;
            Ok(solve_boundary(
                0.75,
                rational_f64(&mb.q6_upper),
                rational_f64(&mb.q8_upper),
                0.0,
            )?
            .threshold)
        }
        _ =>

            Err(OptimizerError::InvalidInput(format!("low-order route needs 2 ≤ r ≤ 5, got {r}"))),
    }
}

/// Composes the moment constants, boundary solver, magnitude bound, and
/// sector geometry into the guaranteed sector at order r.
///
/// For r ≥ 6 the sector comes from intersecting the threshold half-plane
/// with the disc |z| ≤ Q where Q inverts the cap. For r ≤ 5 the argument
/// rays replace the disc: the density statement is positivity (cap 0) at
/// the stronger low-order thresholds, and the guaranteed sector angle is
/// the ray-covering minimum; for r = 2 both φ-branches are reported, the
/// near-diagonal branch carrying the extra magnitude bound from the ray
/// geometry.
pub fn sector_guarantee(r: u32, cap: f64) -> Result<SectorResult, OptimizerError> {
    if r < 2 {
        return Err(OptimizerError::InvalidInput(format!("order must be at least 2, got {r}")));
    }
    let mb = moment_constants::moment_bounds(r)?;
    if r >= 6 {
        let q4 = rational_f64(&mb.q4_constant().expect("q4 is constant for r ≥ 3"));
        let sol =
            solve_boundary(q4, rational_f64(&mb.q6_upper), rational_f64(&mb.q8_for_solver()), cap)?;
        let q = min_q_for_cap(cap)?;
        let half_angle = sector_half_angle(sol.threshold, q)?;
        return Ok(SectorResult {
            r,
            cap,
            threshold: sol.threshold,
            size_guarantee: sol.threshold,
            q: Some(q),
            half_angle,
            full_angle: 2.0 * half_angle,
            branches: vec![SectorBranch {
                label: "all φ".into(),
                q4,
                threshold: sol.threshold,
                min_abs: sol.threshold,
            }],
        });
    }

    let q6 = rational_f64(&mb.q6_upper);
    let q8 = rational_f64(&mb.q8_upper);
    let full_angle = rays::min_covering_sector(r)?;
    let branches = if r == 2 {
        let (q4_a, label_a) = ((3.0 + ORDER_TWO_BRANCH_SPLIT) / 4.0, "cos4φ ≥ -0.785");
        let t_a = solve_boundary(q4_a, q6, q8, 0.0)?.threshold;
        let (q4_b, label_b) = (0.5, "cos4φ < -0.785");
        let t_b = solve_boundary(q4_b, q6, q8, 0.0)?.threshold;
        // on the near-diagonal branch φ stays at least arccos(−0.785)/4
        // away from every ray, so a real part above t_b forces the
        // magnitude above t_b / cos of that gap
        let ray_gap = ORDER_TWO_BRANCH_SPLIT.acos() / 4.0;
        vec![
            SectorBranch { label: label_a.into(), q4: q4_a, threshold: t_a, min_abs: t_a },
            SectorBranch {
                label: label_b.into(),
                q4: q4_b,
                threshold: t_b,
                min_abs: t_b / ray_gap.cos(),
            },
        ]
    } else {
        let t = solve_boundary(0.75, q6, q8, 0.0)?.threshold;
        vec![SectorBranch { label: "all φ".into(), q4: 0.75, threshold: t, min_abs: t }]
    };
    let threshold = branches[0].threshold;
    let size_guarantee = branches.iter().map(|b| b.min_abs).fold(f64::INFINITY, f64::min);
    Ok(SectorResult {
        r,
        cap: 0.0,
        threshold,
        size_guarantee,
        q: None,
        half_angle: full_angle / 2.0,
        full_angle,
        branches,
    })
}

/// Smallest sector angle guaranteed to contain a positive upper density of
/// large eigenvalues: the ray-covering minimum for r ≤ 5, twice the disc
/// half-angle for r ≥ 6.
pub fn min_guaranteed_sector(r: u32, cap: f64) -> Result<f64, OptimizerError> {
    if r < 2 {
        return Err(OptimizerError::InvalidInput(format!("order must be at least 2, got {r}")));
    }
    if r <= 5 {
        rays::min_covering_sector(r)
    } else {
        Ok(sector_guarantee(r, cap)?.full_angle)
    }
}
