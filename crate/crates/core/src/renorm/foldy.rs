//! Foldy multiple scattering among identical point scatterers in free space.
//!
//! Solves `psi_i = phi_i + s sum_{j != i} G_0(r_i, r_j) psi_j`; the diagonal
//! of G is dropped (no self-interaction).

use crate::error::{domain, Error, Result};
use crate::greens::free_unchecked;
use crate::par::map_indices;
use crate::waveguide::{image_sign, image_y, Point};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq)]
pub struct FoldyProblem {
    pub k: f64,
    pub positions: Vec<Point>,
    pub s: Complex64,
    /// Incident field at each scatterer.
    pub incident: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FoldyMethod {
    Direct,
    /// Neumann series `(1 + sG + (sG)^2 + ...) phi`, stopped when the last
    /// term falls below `tol` relative to the sum.
    Born { max_order: usize, tol: f64 },
}

impl FoldyProblem {
    /// Source at `(0, y0)` plus its images `-m..=m`, with the antisymmetric
    /// incident field `phi_n = (-1)^n`. Index `m` of the result is the source.
    pub fn image_array(k: f64, y0: f64, images: usize, s: Complex64) -> Self {
        let m = images as i64;
        let positions = (-m..=m).map(|n| Point::new(0.0, image_y(n, y0))).collect();
        let incident = (-m..=m).map(|n| Complex64::new(image_sign(n), 0.0)).collect();
        Self {
            k,
            positions,
            s,
            incident,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(domain("foldy_solve", "wavenumber must be positive"));
        }
        if self.positions.len() != self.incident.len() {
            return Err(domain("foldy_solve", "one incident value per scatterer is required"));
        }
        for (i, a) in self.positions.iter().enumerate() {
            for b in &self.positions[i + 1..] {
                if a.distance(*b) == 0.0 {
                    return Err(Error::CoincidentPoints);
                }
            }
        }
        Ok(())
    }

    /// Dense `s G` with zero diagonal. The kernel depends on distance only,
    /// so each distinct separation is evaluated once.
    fn coupling(&self) -> DMatrix<Complex64> {
        let n = self.positions.len();
        let mut keys: HashMap<u64, usize> = HashMap::new();
        let mut krho = Vec::new();
        let mut slot = vec![0usize; n * (n - 1) / 2];
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                let x = self.k * self.positions[i].distance(self.positions[j]);
                slot[p] = *keys.entry(x.to_bits()).or_insert_with(|| {
                    krho.push(x);
                    krho.len() - 1
                });
                p += 1;
            }
        }
        let values = map_indices(krho.len(), |u| self.s * free_unchecked(krho[u]));
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = values[slot[p]];
                m[(i, j)] = v;
                m[(j, i)] = v;
                p += 1;
            }
        }
        m
    }
}

/// Power-iteration estimate of the spectral radius of `s G`.
pub fn spectral_radius(problem: &FoldyProblem) -> Result<f64> {
    problem.validate()?;
    Ok(radius_of(&problem.coupling()))
}

fn radius_of(sg: &DMatrix<Complex64>) -> f64 {
    let n = sg.nrows();
    if n < 2 {
        return 0.0;
    }
    // Deterministic, non-symmetric start vector.
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * i as f64, 0.3));
    v /= Complex64::new(v.norm(), 0.0);
    let mut estimate = 0.0;
    for _ in 0..500 {
        let w = sg * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm;
        v = w / Complex64::new(norm, 0.0);
        if (next - estimate).abs() <= 1e-10 * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Effective field `psi_i` at each scatterer.
pub fn foldy_solve(problem: &FoldyProblem, method: FoldyMethod) -> Result<Vec<Complex64>> {
    problem.validate()?;
    let n = problem.positions.len();
    let phi = DVector::from_column_slice(&problem.incident);
    if n == 1 {
        return Ok(problem.incident.clone());
    }
    let sg = problem.coupling();
    match method {
        FoldyMethod::Direct => {
            let a = DMatrix::<Complex64>::identity(n, n) - sg;
            let psi = a.lu().solve(&phi).ok_or(Error::SingularSystem)?;
            if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::SingularSystem);
            }
            Ok(psi.iter().copied().collect())
        }
        FoldyMethod::Born { max_order, tol } => {
            let rho = radius_of(&sg);
            if rho >= 1.0 {
                return Err(Error::BornDiverged(rho));
            }
            let mut term = phi.clone();
            let mut psi = phi;
            for _ in 0..max_order {
                term = &sg * term;
                psi += &term;
                if term.norm() <= tol * psi.norm() {
                    return Ok(psi.iter().copied().collect());
                }
            }
            Err(Error::NotConverged {
                terms: max_order,
                tail: term.norm() / psi.norm(),
                tol,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_scatterer() {
        let p = FoldyProblem {
            k: 3.0,
            positions: vec![Point::new(0.0, 0.0)],
            s: Complex64::new(-0.5, -0.5),
            incident: vec![Complex64::new(0.7, 0.1)],
        };
        assert_eq!(foldy_solve(&p, FoldyMethod::Direct).unwrap(), p.incident);
    }

    #[test]
    fn born_matches_direct_for_weak_coupling() {
        let p = FoldyProblem {
            k: 3.0,
            positions: vec![Point::new(0.0, 0.0), Point::new(1.0, 0.2), Point::new(-0.4, 2.0)],
            s: Complex64::new(-0.02, -0.0002),
            incident: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-0.5, 0.5)],
        };
        let d = foldy_solve(&p, FoldyMethod::Direct).unwrap();
        let b = foldy_solve(&p, FoldyMethod::Born { max_order: 100, tol: 1e-15 }).unwrap();
        for (x, y) in d.iter().zip(&b) {
            assert!((x - y).norm() < 1e-13);
        }
        // First order in s.
        for (x, phi) in d.iter().zip(&p.incident) {
            assert!((x - phi).norm() < 0.05);
        }
    }

    #[test]
    fn rejects_duplicates_and_divergent_born() {
        let mut p = FoldyProblem {
            k: 3.0,
            positions: vec![Point::new(0.0, 0.0), Point::new(0.0, 0.0)],
            s: Complex64::new(-1.0, -1.0),
            incident: vec![Complex64::new(1.0, 0.0); 2],
        };
        assert_eq!(foldy_solve(&p, FoldyMethod::Direct), Err(Error::CoincidentPoints));
        p.positions[1] = Point::new(0.001, 0.0);
        assert!(matches!(
            foldy_solve(&p, FoldyMethod::Born { max_order: 10, tol: 1e-12 }),
            Err(Error::BornDiverged(_))
        ));
    }
}
