//! Distance from a data point to the curve `a -> G(DeltaT, a)` restricted to `a >= a_min`.

use crate::specimen::{MachineCoupling, SpecimenModel};

/// Nodes of the coarse scan that brackets the projection before refinement.
pub const COARSE_NODES: usize = 1024;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Energy-release-rate curve at one machine displacement, tabulated once so
/// that many points can be projected against it.
#[derive(Debug, Clone)]
pub struct ProjectionCurve<'a> {
    specimen: &'a SpecimenModel,
    coupling: &'a MachineCoupling,
    delta_t: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
    lipschitz: f64,
}

impl<'a> ProjectionCurve<'a> {
    pub fn new(specimen: &'a SpecimenModel, coupling: &'a MachineCoupling, delta_t: f64, a_min: f64) -> Self {
        let a_max = specimen.a_max;
        let nodes: Vec<f64> = if a_min >= a_max {
            vec![a_min]
        } else {
            let step = (a_max - a_min) / (COARSE_NODES - 1) as f64;
            (0..COARSE_NODES)
                .map(|i| if i + 1 == COARSE_NODES { a_max } else { a_min + step * i as f64 })
                .collect()
        };
        let values: Vec<f64> = nodes
            .iter()
            .map(|&a| specimen.energy_release_rate_raw(coupling, delta_t, a))
            .collect();
        let slope = nodes
            .windows(2)
            .zip(values.windows(2))
            .map(|(x, g)| ((g[1] - g[0]) / (x[1] - x[0])).abs())
            .fold(0.0, f64::max);
        Self {
            specimen,
            coupling,
            delta_t,
            nodes,
            values,
            // Secant slopes under-estimate the peak derivative slightly.
            lipschitz: 2.0 * slope,
        }
    }

    pub fn a_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn g(&self, a: f64) -> f64 {
        self.specimen.energy_release_rate_raw(self.coupling, self.delta_t, a)
    }

    /// Lower bound on the projection distance of a point whose vertical offset
    /// from the curve (at an admissible abscissa) is `vertical`.
    pub fn lower_bound(&self, vertical: f64) -> f64 {
        vertical / (1.0 + self.lipschitz * self.lipschitz).sqrt()
    }

    fn dist2(&self, pa: f64, pg: f64, a: f64) -> f64 {
        let dg = pg - self.g(a);
        (pa - a) * (pa - a) + dg * dg
    }

    /// Returns `(distance, minimizer)` for the point `(pa, pg)`.
    pub fn project(&self, pa: f64, pg: f64, accuracy: f64) -> (f64, f64) {
        let n = self.nodes.len();
        let (j, best_node) = self
            .nodes
            .iter()
            .zip(&self.values)
            .enumerate()
            .map(|(j, (&a, &g))| (j, (pa - a) * (pa - a) + (pg - g) * (pg - g)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        if n == 1 {
            return (best_node.sqrt(), self.nodes[0]);
        }
        let mut lo = self.nodes[j.saturating_sub(1)];
        let mut hi = self.nodes[(j + 1).min(n - 1)];
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let mut f1 = self.dist2(pa, pg, x1);
        let mut f2 = self.dist2(pa, pg, x2);
        while hi - lo > accuracy * (1.0 + lo.abs()) {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - INV_PHI * (hi - lo);
                f1 = self.dist2(pa, pg, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + INV_PHI * (hi - lo);
                f2 = self.dist2(pa, pg, x2);
            }
        }
        let (a_ref, f_ref) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
        if f_ref <= best_node {
            (f_ref.sqrt(), a_ref)
        } else {
            (best_node.sqrt(), self.nodes[j])
        }
    }
}

/// Constrained distance from `(a_hat, g_hat)` to the curve `G(DeltaT, a)`, `a >= a_min`.
pub fn project_distance(
    point: (f64, f64),
    delta_t: f64,
    a_min: f64,
    specimen: &SpecimenModel,
    coupling: &MachineCoupling,
    accuracy: f64,
) -> (f64, f64) {
    ProjectionCurve::new(specimen, coupling, delta_t, a_min).project(point.0, point.1, accuracy)
}
