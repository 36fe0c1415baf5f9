//! Argument-ray geometry for low-order central characters.
//!
//! When the central character has exact order r, unitarity pins every
//! Hecke eigenvalue argument to one of the 2r rays {kπ/r}. A real-part
//! density statement at angle φ therefore lands on the rays lying in the
//! open half-plane around φ; a sector is guaranteed as soon as it contains
//! all rays of such a half-plane for some witness φ.

use serde::Serialize;

use crate::optimizer::{self, OptimizerError};

/// Angular slack when deciding whether a ray lies strictly inside an open
/// half-plane; rays exactly perpendicular to the witness carry no mass.
const HALF_PLANE_EPS: f64 = 1e-9;

/// The 2r admissible eigenvalue arguments {kπ/r}, sorted, spacing π/r.
#[derive(Debug, Clone, Serialize)]
pub struct RayArrangement {
    pub r: u32,
    pub rays: Vec<f64>,
}

pub fn argument_rays(r: u32) -> Result<RayArrangement, OptimizerError> {
    if r < 2 {
        return Err(OptimizerError::InvalidInput(format!("order must be at least 2, got {r}")));
    }
    let rays = (0..2 * r).map(|k| k as f64 * std::f64::consts::PI / r as f64).collect();
    Ok(RayArrangement { r, rays })
}

/// Result of a witness search for one sector.
#[derive(Debug, Clone, Serialize)]
pub struct SectorCheck {
    pub ok: bool,
    pub phi_witness: Option<f64>,
    /// Branch threshold in force at the witness angle.
    pub threshold_used: Option<f64>,
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
    d.min(2.0 * std::f64::consts::PI - d)
}

/// Every ray in the open half-plane around φ must fall inside the open
/// sector (center − angle/2, center + angle/2).
fn witness_ok(r: u32, phi: f64, center: f64, angle: f64) -> bool {
    let pi = std::f64::consts::PI;
    for k in 0..2 * r {
        let ray = k as f64 * pi / r as f64;
        if angular_distance(ray, phi) < std::f64::consts::FRAC_PI_2 - HALF_PLANE_EPS
            && angular_distance(ray, center) >= angle / 2.0
        {
            return false;
        }
    }
    true
}

/// Witness angles that realize every possible half-plane ray window: the
/// window map φ ↦ {rays strictly within π/2} is piecewise constant with
/// breakpoints on {kπ/(2r)}, so those points and the interval midpoints
/// {kπ/(4r)} between them exhaust all windows.
fn exact_candidates(r: u32) -> impl Iterator<Item = f64> {
    let step = std::f64::consts::PI / (4.0 * r as f64);
    (0..8 * r).map(move |j| j as f64 * step)
}

/// Searches for a witness φ such that the rays seen by the half-plane at φ
/// all lie inside the given open sector. The exact window representatives
/// are tried first (ordered by closeness to the sector center), then a φ
/// grid of the given step.
pub fn sector_covering_check(
    r: u32,
    center: f64,
    angle: f64,
    step: f64,
) -> Result<SectorCheck, OptimizerError> {
    if !(2..=5).contains(&r) {
        return Err(OptimizerError::InvalidInput(format!(
            "ray coverage applies to 2 ≤ r ≤ 5, got {r}"
        )));
    }
    if !(angle > 0.0 && angle <= 2.0 * std::f64::consts::PI + 1e-12) {
        return Err(OptimizerError::InvalidInput(format!("sector angle {angle} outside (0, 2π]")));
    }
    if !(step > 0.0) {
        return Err(OptimizerError::InvalidInput("grid step must be positive".into()));
    }
    let mut candidates: Vec<f64> = exact_candidates(r).collect();
    candidates.sort_by(|a, b| {
        angular_distance(*a, center).partial_cmp(&angular_distance(*b, center)).unwrap()
    });
    let grid_len = (2.0 * std::f64::consts::PI / step).ceil() as usize;
    let grid = (0..grid_len).map(|i| i as f64 * step);
    for phi in candidates.into_iter().chain(grid) {
        if witness_ok(r, phi, center, angle) {
            return Ok(SectorCheck {
                ok: true,
                phi_witness: Some(phi),
                threshold_used: Some(optimizer::low_order_threshold(r, phi)?),
            });
        }
    }
    Ok(SectorCheck { ok: false, phi_witness: None, threshold_used: None })
}

/// Smallest sector angle (up to bisection resolution) such that every
/// sector of that angle, wherever centered, admits a witness. Centers run
/// over a 720-point grid, which contains all rays and midpoints for r ≤ 5.
pub fn min_covering_sector(r: u32) -> Result<f64, OptimizerError> {
    if !(2..=5).contains(&r) {
        return Err(OptimizerError::InvalidInput(format!(
            "ray coverage applies to 2 ≤ r ≤ 5, got {r}"
        )));
    }
    const CENTERS: usize = 720;
    let covered = |angle: f64| -> bool {
        (0..CENTERS).all(|i| {
            let center = i as f64 * 2.0 * std::f64::consts::PI / CENTERS as f64;
            exact_candidates(r).any(|phi| witness_ok(r, phi, center, angle))
        })
    };
    let mut lo = 0.0_f64;
    let mut hi = 2.0 * std::f64::consts::PI;
    debug_assert!(covered(hi));
    for _ in 0..26 {
        let mid = 0.5 * (lo + hi);
        if covered(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rays_are_evenly_spaced() {
        for r in 2..=8u32 {
            let arr = argument_rays(r).unwrap();
            assert_eq!(arr.rays.len(), 2 * r as usize);
            for w in arr.rays.windows(2) {
                assert!((w[1] - w[0] - PI / r as f64).abs() < 1e-12);
            }
        }
        // r = 2: {0, π/2, π, 3π/2}
        let arr = argument_rays(2).unwrap();
        for (got, expect) in arr.rays.iter().zip([0.0, PI / 2.0, PI, 3.0 * PI / 2.0]) {
            assert!((got - expect).abs() < 1e-15);
        }
        // r = 5: ten rays spaced 36°
        let arr = argument_rays(5).unwrap();
        assert_eq!(arr.rays.len(), 10);
        assert!((arr.rays[1].to_degrees() - 36.0).abs() < 1e-10);
        assert!(argument_rays(1).is_err());
    }

    #[test]
    fn wide_sectors_are_always_covered() {
        // 2.52 rad clears the r = 5 minimum of 4π/5 ≈ 2.5133
        for i in 0..90 {
            let center = i as f64 * 2.0 * PI / 90.0;
            let check = sector_covering_check(5, center, 2.52, 1e-3).unwrap();
            assert!(check.ok, "center={center}");
            assert!(check.threshold_used.unwrap() > 0.6);
        }
        for r in 2..=5 {
            let check = sector_covering_check(r, 1.0, 2.52, 1e-3).unwrap();
            assert!(check.ok, "r={r}");
        }
    }

    #[test]
    fn narrow_sectors_fail_at_ray_centers() {
        // at a ray center the r = 5 requirement is the full 144°
        let check = sector_covering_check(5, 0.0, 2.40, 1e-3).unwrap();
        assert!(!check.ok);
        assert!(check.phi_witness.is_none());
        // between rays the requirement drops; 2.40 rad suffices there
        let check = sector_covering_check(5, PI / 10.0, 2.40, 1e-3).unwrap();
        assert!(check.ok);
    }

    #[test]
    fn covering_minima_match_ray_counting() {
        // worst-case center analysis gives (r−1)π/r for r = 2..5
        for r in 2..=5u32 {
            let expect = (r - 1) as f64 * PI / r as f64;
            let got = min_covering_sector(r).unwrap();
            assert!(got >= expect - 1e-6, "r={r} got={got}");
            assert!(got <= expect + 2e-3, "r={r} got={got}");
        }
    }

    #[test]
    fn r2_threshold_depends_on_witness_branch() {
        // sector around a ray: witness lies on the generic branch
        let check = sector_covering_check(2, 0.0, 2.0, 1e-3).unwrap();
        assert!(check.ok);
        let t = check.threshold_used.unwrap();
        assert!((t - 0.59661213).abs() < 1e-6, "t={t}");
    }
}
