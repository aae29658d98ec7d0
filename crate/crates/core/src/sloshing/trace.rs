//! Free-surface amplitude traces and high-spot location.

use crate::assembly::AzimuthalIndex;
use crate::error::{Result, SloshError};
use crate::geometry::EdgeTag;
use crate::scalar::Real;

use super::SloshingMode;

pub const DEFAULT_SAMPLES: usize = 401;

/// Elevation amplitude `ν φ` sampled along F, by `x` (planar) or `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceTrace<T> {
    pub points: Vec<T>,
    pub amplitude: Vec<T>,
    pub m: AzimuthalIndex,
    /// Coordinates where F meets the wetted wall.
    pub contacts: Vec<T>,
}

impl<T: Real> SurfaceTrace<T> {
    pub fn spacing(&self) -> T {
        if self.points.len() < 2 {
            return T::zero();
        }
        (self.points[self.points.len() - 1] - self.points[0]) / T::from_count(self.points.len() - 1)
    }

    /// Piecewise-linear value at `x`, clamped to the sampled range.
    pub fn value_at(&self, x: T) -> T {
        let p = &self.points;
        if x <= p[0] {
            return self.amplitude[0];
        }
        if x >= p[p.len() - 1] {
            return self.amplitude[p.len() - 1];
        }
        let i = p.partition_point(|&v| v <= x).max(1);
        let t = (x - p[i - 1]) / (p[i] - p[i - 1]);
        self.amplitude[i - 1] + t * (self.amplitude[i] - self.amplitude[i - 1])
    }
}

/// Samples `ν φ` at `samples` equispaced points spanning F.
pub fn trace_surface<T: Real>(mode: &SloshingMode<T>, samples: usize) -> Result<SurfaceTrace<T>> {
    if samples < 2 {
        return Err(SloshError::Argument(format!("need at least 2 trace samples, got {samples}")));
    }
    let mesh = &mode.mesh;
    let mut surface: Vec<(T, T)> = mesh.tagged_nodes(EdgeTag::F).into_iter().map(|i| (mesh.nodes[i].x, mode.phi[i])).collect();
    if surface.len() < 2 {
        return Err(SloshError::NoFreeSurface);
    }
    surface.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let on_b = mesh.tag_mask(EdgeTag::B);
    let mut contacts: Vec<T> =
        mesh.tagged_nodes(EdgeTag::F).into_iter().filter(|&i| on_b[i]).map(|i| mesh.nodes[i].x).collect();
    contacts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let (lo, hi) = (surface[0].0, surface[surface.len() - 1].0);
    let xs: Vec<T> = surface.iter().map(|s| s.0).collect();
    let points: Vec<T> = (0..samples)
        .map(|k| {
            if k + 1 == samples {
                hi
            } else {
                lo + (hi - lo) * T::from_count(k) / T::from_count(samples - 1)
            }
        })
        .collect();
    let amplitude = points
        .iter()
        .map(|&x| {
            let i = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
            let (x0, x1) = (surface[i - 1].0, surface[i].0);
            let t = if x1 > x0 { ((x - x0) / (x1 - x0)).max(T::zero()).min(T::one()) } else { T::zero() };
            mode.nu * (surface[i - 1].1 + t * (surface[i].1 - surface[i - 1].1))
        })
        .collect();
    Ok(SurfaceTrace { points, amplitude, m: mode.m, contacts })
}

/// Location and character of the largest `|amplitude|` on a trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HighSpotReport<T> {
    pub location: T,
    pub value: T,
    pub on_boundary: bool,
    /// `|amplitude|` at the contact point nearest the high spot.
    pub boundary_value: T,
    pub peak_ratio: T,
    /// Distance from the high spot to that contact point.
    pub contact_distance: T,
    pub boundary_tol: T,
}

/// Finds the high spot, refining the discrete argmax with a parabola
/// through its neighbours. `boundary_tol` defaults to two sample spacings.
pub fn locate_high_spot<T: Real>(trace: &SurfaceTrace<T>, boundary_tol: Option<T>) -> Result<HighSpotReport<T>> {
    let n = trace.points.len();
    if n == 0 || trace.amplitude.len() != n {
        return Err(SloshError::Argument("empty or inconsistent trace".into()));
    }
    if trace.contacts.is_empty() {
        return Err(SloshError::Argument("trace has no free-surface contact point".into()));
    }
    let tol = boundary_tol.unwrap_or_else(|| trace.spacing() * T::lit(2.0));
    if !(tol > T::zero()) {
        return Err(SloshError::Argument(format!("boundary tolerance must be positive, got {tol}")));
    }
    let abs: Vec<T> = trace.amplitude.iter().map(|v| v.abs()).collect();
    let mut i = 0;
    for (k, &v) in abs.iter().enumerate() {
        if v > abs[i] {
            i = k;
        }
    }
    if !(abs[i] > T::zero()) {
        return Err(SloshError::DegenerateMode);
    }
    let (mut location, mut value) = (trace.points[i], abs[i]);
    if i > 0 && i + 1 < n {
        let (a, b, c) = (abs[i - 1], abs[i], abs[i + 1]);
        let curv = a - b - b + c;
        if curv < T::zero() {
            let half = T::lit(0.5);
            let delta = (half * (a - c) / curv).max(-half).min(half);
            location = trace.points[i] + delta * (trace.points[i + 1] - trace.points[i - 1]) * half;
            value = b - T::lit(0.25) * (a - c) * delta;
        }
    }
    let contact = trace
        .contacts
        .iter()
        .copied()
        .min_by(|a, b| (*a - location).abs().partial_cmp(&(*b - location).abs()).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap();
    let contact_distance = (contact - location).abs();
    let boundary_value = trace.value_at(contact).abs();
    let peak_ratio = if boundary_value > T::zero() { value / boundary_value } else { T::infinity() };
    Ok(HighSpotReport {
        location,
        value,
        on_boundary: contact_distance <= tol,
        boundary_value,
        peak_ratio,
        contact_distance,
        boundary_tol: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(points: Vec<f64>, amplitude: Vec<f64>, contacts: Vec<f64>) -> SurfaceTrace<f64> {
        SurfaceTrace { points, amplitude, m: AzimuthalIndex(1), contacts }
    }

    #[test]
    fn parabola_peak_is_recovered() {
        let xs: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
        let amp: Vec<f64> = xs.iter().map(|x| 2.0 - 9.0 * (x - 0.6123).powi(2)).collect();
        let r = locate_high_spot(&trace(xs, amp, vec![1.0]), None).unwrap();
        assert!((r.location - 0.6123).abs() < 1e-12);
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(!r.on_boundary);
        assert!((r.contact_distance - 0.3877).abs() < 1e-12);
        assert!((r.boundary_value - (2.0 - 9.0 * 0.3877f64.powi(2))).abs() < 1e-12);
        assert!(r.peak_ratio > 1.0);
    }

    #[test]
    fn monotone_trace_peaks_at_contact() {
        let xs: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let amp: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let r = locate_high_spot(&trace(xs, amp, vec![1.0]), None).unwrap();
        assert_eq!(r.location, 1.0);
        assert!(r.on_boundary);
        assert_eq!(r.peak_ratio, 1.0);
    }

    #[test]
    fn zero_trace_is_degenerate() {
        let t = trace(vec![0.0, 1.0], vec![0.0, 0.0], vec![1.0]);
        assert!(matches!(locate_high_spot(&t, None), Err(SloshError::DegenerateMode)));
        let t = trace(vec![0.0, 1.0], vec![0.0, 1.0], vec![1.0]);
        assert!(locate_high_spot(&t, Some(-1.0)).is_err());
    }

    #[test]
    fn odd_trace_uses_first_maximum() {
        let xs: Vec<f64> = (0..=40).map(|k| -1.0 + k as f64 / 20.0).collect();
        let amp: Vec<f64> = xs.iter().map(|&x: &f64| (1.3 * x).sin() + 0.2 * x.powi(3)).collect();
        let r = locate_high_spot(&trace(xs.clone(), amp.clone(), vec![-1.0, 1.0]), None).unwrap();
        let scaled: Vec<f64> = amp.iter().map(|v| -7.3 * v).collect();
        let s = locate_high_spot(&trace(xs, scaled, vec![-1.0, 1.0]), None).unwrap();
        assert!((r.location - s.location).abs() < 1e-12);
        assert_eq!(r.on_boundary, s.on_boundary);
    }
}
