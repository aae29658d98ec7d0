//! Physical fields reconstructed from a mode: velocity and elevation.

use crate::error::{Result, SloshError};
use crate::geometry::{DomainKind, Point2};
use crate::scalar::Real;

use super::trace::SurfaceTrace;
use super::SloshingMode;

pub const DEFAULT_GRAVITY: f64 = 9.81;

/// Velocity `cos(ωt + α) ∇Φ` at a 3D point `(x, y, z)`, `ω = √(ν g)`.
///
/// Axisymmetric modes carry `Φ = φ(r, z) cos(mθ)`; planar modes are
/// uniform along `y`.
pub fn velocity<T: Real>(mode: &SloshingMode<T>, point: [T; 3], t: T, alpha: T, g: T) -> Result<[T; 3]> {
    if !(g > T::zero()) {
        return Err(SloshError::Argument(format!("gravity must be positive, got {g}")));
    }
    let [x, y, z] = point;
    let mesh = &mode.mesh;
    let r = match mesh.kind {
        DomainKind::Planar => x,
        DomainKind::Axisymmetric => x.hypot(y),
    };
    let (cell, bary) = mesh
        .locate(Point2::new(r, z))
        .ok_or_else(|| SloshError::Argument(format!("point ({x}, {y}, {z}) is outside the liquid")))?;
    let ids = mesh.cells[cell];
    let p = ids.map(|i| mesh.nodes[i]);
    let two_area = (p[1].x - p[0].x) * (p[2].z - p[0].z) - (p[1].z - p[0].z) * (p[2].x - p[0].x);
    let (mut dr, mut dz, mut phi) = (T::zero(), T::zero(), T::zero());
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let v = mode.phi[ids[i]];
        dr += v * (p[j].z - p[k].z) / two_area;
        dz += v * (p[k].x - p[j].x) / two_area;
        phi += v * bary[i];
    }
    let phase = (mode.omega(g) * t + alpha).cos();
    let grad = match mesh.kind {
        DomainKind::Planar => [dr, T::zero(), dz],
        DomainKind::Axisymmetric => {
            let m = T::from_u32(mode.m.m()).unwrap();
            let tiny = T::tol(1e-12);
            let (theta, phi_over_r) = if r > tiny {
                (y.atan2(x), phi / r)
            } else if mode.m.m() == 1 {
                // φ vanishes on the axis like r, so φ/r → ∂φ/∂r.
                (T::zero(), dr)
            } else {
                (T::zero(), T::zero())
            };
            let (mt_cos, mt_sin) = ((m * theta).cos(), (m * theta).sin());
            let g_r = dr * mt_cos;
            let g_t = -m * phi_over_r * mt_sin;
            let (c, s) = (theta.cos(), theta.sin());
            [g_r * c - g_t * s, g_r * s + g_t * c, dz * mt_cos]
        }
    };
    Ok(grad.map(|v| v * phase))
}

/// Elevation amplitude `η(coord, θ) = ν φ(coord, 0) cos(mθ)` on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ElevationField<T> {
    pub coords: Vec<T>,
    /// Angles `2πj / n`; a single zero angle for planar modes.
    pub thetas: Vec<T>,
    /// `values[j][i]` is `η(coords[i], thetas[j])`.
    pub values: Vec<Vec<T>>,
}

impl<T: Real> ElevationField<T> {
    pub fn max(&self) -> T {
        self.values.iter().flatten().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.values.iter().flatten().copied().fold(T::infinity(), T::min)
    }
}

pub fn elevation_field<T: Real>(trace: &SurfaceTrace<T>, kind: DomainKind, theta_samples: usize) -> Result<ElevationField<T>> {
    if theta_samples == 0 {
        return Err(SloshError::Argument("need at least one angle".into()));
    }
    let thetas: Vec<T> = match kind {
        DomainKind::Planar => vec![T::zero()],
        DomainKind::Axisymmetric => {
            (0..theta_samples).map(|j| T::TAU() * T::from_count(j) / T::from_count(theta_samples)).collect()
        }
    };
    let m = T::from_u32(trace.m.m()).unwrap();
    let values = thetas
        .iter()
        .map(|&th| {
            let c = if trace.m.m() == 0 { T::one() } else { (m * th).cos() };
            trace.amplitude.iter().map(|&a| a * c).collect()
        })
        .collect();
    Ok(ElevationField { coords: trace.points.clone(), thetas, values })
}
