use rand::Rng;

use idealpoly_core::rivin::{check_feasible, ConstraintSystem};

/// Random strictly interior point of the angle polytope: a random convex
/// combination of the centered witness and a few vertices that minimize
/// random linear costs. `None` when the polytope is empty.
pub fn random_interior_point<R: Rng + ?Sized>(system: &ConstraintSystem, rng: &mut R) -> Option<Vec<f64>> {
    let center = check_feasible(system).ok()?.witness?;
    let mut points = vec![center];
    for _ in 0..4 {
        let cost: Vec<f64> = (0..system.num_vars).map(|_| rng.random::<f64>() - 0.5).collect();
        points.push(system.minimize(&cost).ok()??);
    }
    let mut weights: Vec<f64> = points.iter().map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut x = vec![0.0; system.num_vars];
    for (p, w) in points.iter().zip(&weights) {
        x.iter_mut().zip(p).for_each(|(xi, pi)| *xi += w * pi);
    }
    Some(x)
}
