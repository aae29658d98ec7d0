//! Observed convergence of ν₁ under uniform mesh refinement.

use std::sync::Arc;

use crate::assembly::AzimuthalIndex;
use crate::eigen::EigenOptions;
use crate::error::{Result, SloshError};
use crate::geometry::PlanarDomain;
use crate::mesh::{triangulate, Sizing};
use crate::scalar::Real;

use super::solve_modes_on;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow<T> {
    pub h: T,
    pub nodes: usize,
    pub nu1: T,
    /// `|ν₁ - reference|` when a reference is known.
    pub error: Option<T>,
    /// Order from this level and the previous one (against the reference)
    /// or the previous two (self-convergence).
    pub order: Option<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceTable<T> {
    pub rows: Vec<ConvergenceRow<T>>,
}

impl<T: Real> ConvergenceTable<T> {
    pub fn final_order(&self) -> Option<T> {
        self.rows.last().and_then(|r| r.order)
    }
}

/// Solves the lowest `m` mode on `levels` nested meshes, each a uniform
/// 4:1 refinement of the previous one.
pub fn convergence_study<T: Real>(
    d: &PlanarDomain<T>,
    base: impl Into<Sizing<T>>,
    levels: usize,
    m: AzimuthalIndex,
    reference: Option<T>,
) -> Result<ConvergenceTable<T>> {
    if levels < 3 {
        return Err(SloshError::Argument(format!("convergence study needs at least 3 levels, got {levels}")));
    }
    let mut mesh = Arc::new(triangulate(d, base)?);
    let mut rows: Vec<ConvergenceRow<T>> = Vec::with_capacity(levels);
    let opts = EigenOptions::default();
    for level in 0..levels {
        if level > 0 {
            mesh = Arc::new(mesh.refine_uniform());
        }
        let nu1 = solve_modes_on(Arc::clone(&mesh), &[m], 1, &opts)?.fundamental_mode().nu;
        let h = mesh.h_max;
        let error = reference.map(|r| (nu1 - r).abs());
        let order = match reference {
            Some(_) => rows.last().and_then(|prev| log_ratio(prev.error?, error?, prev.h / h)),
            None if rows.len() >= 2 => {
                let (a, b) = (&rows[rows.len() - 2], &rows[rows.len() - 1]);
                log_ratio((b.nu1 - a.nu1).abs(), (nu1 - b.nu1).abs(), b.h / h)
            }
            None => None,
        };
        log::info!("level {level}: h = {h}, nodes = {}, nu1 = {nu1}", mesh.node_count());
        rows.push(ConvergenceRow { h, nodes: mesh.node_count(), nu1, error, order });
    }
    Ok(ConvergenceTable { rows })
}

fn log_ratio<T: Real>(coarse: T, fine: T, h_ratio: T) -> Option<T> {
    if coarse > T::zero() && fine > T::zero() && h_ratio > T::one() {
        Some((coarse / fine).ln() / h_ratio.ln())
    } else {
        None
    }
}
