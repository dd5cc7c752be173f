//! Derivative-free minimisation over a disc in the complex plane.

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy)]
pub(crate) struct CompassSearch {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_evals: usize,
    /// Candidates with `|z| > radius` are rejected.
    pub radius: f64,
    /// Stop as soon as the objective drops to this value.
    pub target: f64,
}

pub(crate) struct SearchResult {
    pub point: C64,
    pub value: f64,
}

impl CompassSearch {
    /// Compass (pattern) search from `start`, halving the step whenever no
    /// axis move improves the objective.
    pub fn minimize(&self, start: C64, mut f: impl FnMut(C64) -> f64) -> SearchResult {
        let mut point = start;
        let mut value = f(start);
        let mut evals = 1;
        let mut step = self.initial_step;
        let dirs = [
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, -1.0),
        ];
        while step >= self.min_step && evals < self.max_evals && value > self.target {
            let mut moved = false;
            for d in dirs {
                let cand = point + d * step;
                if cand.norm() > self.radius {
                    continue;
                }
                let v = f(cand);
                evals += 1;
                if v < value {
                    point = cand;
                    value = v;
                    moved = true;
                    break;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        SearchResult { point, value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_quadratic_minimum() {
        let target = C64::new(0.3, -0.7);
        let s = CompassSearch {
            initial_step: 0.5,
            min_step: 1e-10,
            max_evals: 10_000,
            radius: 2.0,
            target: 0.0,
        };
        let res = s.minimize(C64::new(0.0, 0.0), |z| (z - target).norm_sqr());
        assert!((res.point - target).norm() < 1e-9);
    }

    #[test]
    fn respects_radius() {
        let s = CompassSearch {
            initial_step: 0.5,
            min_step: 1e-8,
            max_evals: 10_000,
            radius: 1.0,
            target: 0.0,
        };
        let res = s.minimize(C64::new(0.0, 0.0), |z| (z - C64::new(3.0, 0.0)).norm_sqr());
        assert!(res.point.norm() <= 1.0);
        assert!((res.point.re - 1.0).abs() < 1e-6);
    }
}
