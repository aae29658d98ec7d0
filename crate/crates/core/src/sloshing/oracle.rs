//! Closed-form reference solutions.

use crate::error::{Result, SloshError};
use crate::scalar::Real;

use super::bessel::{bessel_j1, find_j1prime_zero};

/// Fundamental sloshing pair of the upright unit cylinder of depth `h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CylinderOracle<T> {
    pub nu1: T,
    /// `J₁(j r) cosh(j (z + h)) sin θ`.
    pub phi1: T,
    /// `J₁(j r) cosh(j (z + h)) cos θ`.
    pub phi2: T,
}

/// Evaluates the analytic cylinder modes at `(r, θ, z)`, `j = j'₁,₁`.
pub fn cylinder_oracle<T: Real>(h: T, r: T, theta: T, z: T) -> Result<CylinderOracle<T>> {
    if !(h > T::zero()) {
        return Err(SloshError::Argument(format!("depth must be positive, got {h}")));
    }
    if !(r >= T::zero() && r <= T::one() && z >= -h && z <= T::zero()) {
        return Err(SloshError::Argument(format!("point (r={r}, z={z}) outside the cylinder")));
    }
    let j = T::lit(find_j1prime_zero());
    let radial = bessel_j1(j * r)? * (j * (z + h)).cosh();
    Ok(CylinderOracle { nu1: j * (j * h).tanh(), phi1: radial * theta.sin(), phi2: radial * theta.cos() })
}

/// `√μ tanh(√μ h)`: the sloshing eigenvalue of a vertical-walled tank of
/// depth `h` whose cross-section has Neumann eigenvalue `μ`.
pub fn neumann_to_sloshing<T: Real>(mu: T, h: T) -> Result<T> {
    if !(mu >= T::zero()) {
        return Err(SloshError::Argument(format!("Neumann eigenvalue must be non-negative, got {mu}")));
    }
    if !(h > T::zero()) {
        return Err(SloshError::Argument(format!("depth must be positive, got {h}")));
    }
    let s = mu.sqrt();
    Ok(s * (s * h).tanh())
}

/// Extends a cross-section Neumann mode to depth `z`:
/// `ψ cosh(√μ (z + h))`.
pub fn extend_neumann_mode<T: Real>(psi: &[T], mu: T, h: T, z: T) -> Result<Vec<T>> {
    if !(mu >= T::zero() && h > T::zero()) {
        return Err(SloshError::Argument(format!("need mu >= 0 and h > 0, got mu={mu}, h={h}")));
    }
    if !(z >= -h && z <= T::zero()) {
        return Err(SloshError::Argument(format!("z = {z} outside [-{h}, 0]")));
    }
    let c = (mu.sqrt() * (z + h)).cosh();
    Ok(psi.iter().map(|&v| v * c).collect())
}

/// `(μ₁, ν₁)` of a vertical-walled tank with the given cross-section mesh.
pub fn neumann_fundamental<T: Real>(section: &crate::mesh::TriMesh<T>, h: T) -> Result<(T, T)> {
    let s = crate::assembly::assemble_stiffness_planar(section)?;
    let m = crate::assembly::assemble_mass_planar(section)?;
    let pairs = crate::eigen::neumann_solve(&s, &m, 1)?;
    let mu = pairs[0].value;
    Ok((mu, neumann_to_sloshing(mu, h)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const J11: f64 = 1.841_183_781_340_659;

    #[test]
    fn cylinder_eigenvalue() {
        let o = cylinder_oracle(1.0f64, 0.5, 0.3, -0.2).unwrap();
        assert!((o.nu1 - 1.750_797_574_526_513).abs() < 1e-12);
        assert!((o.nu1 - 1.7508).abs() < 5e-5);
        let deep = cylinder_oracle(20.0f64, 0.5, 0.3, -0.2).unwrap();
        assert!((deep.nu1 - 1.8412).abs() < 5e-5);
        for r in [0.0, 0.3, 1.0] {
            for z in [-1.0, -0.5, 0.0] {
                assert_eq!(cylinder_oracle(1.0f64, r, 0.0, z).unwrap().phi1, 0.0);
            }
        }
        assert!(cylinder_oracle(1.0f64, 1.1, 0.0, 0.0).is_err());
        assert!(cylinder_oracle(1.0f64, 0.5, 0.0, -1.5).is_err());
    }

    #[test]
    fn oracle_satisfies_surface_condition() {
        // ∂φ/∂z = ν φ at z = 0, by central differences.
        let step = 1e-6;
        let o = cylinder_oracle(1.0f64, 0.7, 0.4, 0.0).unwrap();
        let lo = cylinder_oracle(1.0f64, 0.7, 0.4, -step).unwrap();
        let lo2 = cylinder_oracle(1.0f64, 0.7, 0.4, -2.0 * step).unwrap();
        let dz = (3.0 * o.phi1 - 4.0 * lo.phi1 + lo2.phi1) / (2.0 * step);
        assert!((dz - o.nu1 * o.phi1).abs() < 1e-6);
    }

    #[test]
    fn embedding() {
        assert_eq!(neumann_to_sloshing(0.0, 1.0).unwrap(), 0.0);
        let cyl = cylinder_oracle(1.0f64, 0.0, 0.0, 0.0).unwrap().nu1;
        assert!((neumann_to_sloshing(J11 * J11, 1.0).unwrap() - cyl).abs() < 1e-14);
        let rect = neumann_to_sloshing(std::f64::consts::FRAC_PI_2.powi(2), 1.0).unwrap();
        assert!((rect - 1.440_659_519_977_514_5).abs() < 1e-14);
        assert!((neumann_to_sloshing(2.4674f64, 1.0).unwrap() - 1.4406).abs() < 1e-4);
        assert!(neumann_to_sloshing(-1.0, 1.0).is_err());
    }

    #[test]
    fn extension() {
        let psi = [1.0f64, -0.5, 2.0];
        let (mu, h) = (2.5f64, 0.8f64);
        assert_eq!(extend_neumann_mode(&psi, mu, h, -h).unwrap(), psi.to_vec());
        let top = extend_neumann_mode(&psi, mu, h, 0.0).unwrap();
        let c = (mu.sqrt() * h).cosh();
        for (a, b) in top.iter().zip(&psi) {
            assert!((a - b * c).abs() < 1e-15);
        }
        let nu = neumann_to_sloshing(mu, h).unwrap();
        let step = 1e-6;
        let below = extend_neumann_mode(&psi, mu, h, -step).unwrap();
        for (t, b) in top.iter().zip(&below) {
            let dz = (t - b) / step;
            assert!((dz - nu * t).abs() < 1e-5 * t.abs().max(1.0));
        }
        assert!(extend_neumann_mode(&psi, mu, h, 0.1).is_err());
    }
}
