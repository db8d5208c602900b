use num_complex::Complex64;

use idealpoly_core::geom::PlanarTriangulation;

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Area of the convex hull, by Andrew's monotone chain.
pub fn hull_area(points: &[Complex64]) -> f64 {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut hull: Vec<Complex64> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    let m = hull.len();
    0.5 * (0..m).map(|i| hull[i].re * hull[(i + 1) % m].im - hull[(i + 1) % m].re * hull[i].im).sum::<f64>()
}

/// `true` when `d` lies strictly inside the circle through the
/// counterclockwise triangle `a, b, c`, beyond a relative tolerance.
pub fn strictly_inside_circumcircle(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let rows = [a - d, b - d, c - d];
    let m: Vec<[f64; 3]> = rows.iter().map(|p| [p.re, p.im, p.norm_sqr()]).collect();
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let scale: f64 = m.iter().map(|r| r[0].abs().max(r[1].abs()) * r[2]).fold(0.0, f64::max) * 6.0;
    det > 1e-10 * scale.max(f64::MIN_POSITIVE)
}

/// Brute-force check that `pt` is a Delaunay triangulation of its finite
/// points: positively oriented triangles whose areas sum to the hull area,
/// every point used, and no point strictly inside any circumcircle.
pub fn verify_delaunay(pt: &PlanarTriangulation) -> Result<(), String> {
    let pos = pt.positions();
    let finite: Vec<usize> = (0..pos.len()).filter(|&v| pos[v].is_some()).collect();
    let pts: Vec<Complex64> = finite.iter().map(|&v| pos[v].unwrap()).collect();
    let mut used = vec![false; pos.len()];
    let mut area = 0.0;
    for (i, t) in pt.triangles().iter().enumerate() {
        let mut corner = [Complex64::new(0.0, 0.0); 3];
        for s in 0..3 {
            corner[s] = pos.get(t[s]).copied().flatten().ok_or_else(|| format!("triangle {i} uses vertex without position"))?;
            used[t[s]] = true;
        }
        let a2 = cross(corner[0], corner[1], corner[2]);
        if !(a2 > 0.0) {
            return Err(format!("triangle {i} is not counterclockwise"));
        }
        area += 0.5 * a2;
        for &v in &finite {
            if t.contains(&v) {
                continue;
            }
            if strictly_inside_circumcircle(corner[0], corner[1], corner[2], pos[v].unwrap()) {
                return Err(format!("vertex {v} inside circumcircle of triangle {i}"));
            }
        }
    }
    if let Some(&v) = finite.iter().find(|&&v| !used[v]) {
        return Err(format!("vertex {v} not in any triangle"));
    }
    let hull = hull_area(&pts);
    if (area - hull).abs() > 1e-9 * hull.max(1.0) {
        return Err(format!("triangles cover area {area}, hull area {hull}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_area() {
        let p: Vec<Complex64> =
            [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)].iter().map(|&(x, y)| Complex64::new(x, y)).collect();
        assert!((hull_area(&p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circumcircle_predicate() {
        let (a, b, c) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        assert!(strictly_inside_circumcircle(a, b, c, Complex64::new(0.5, 0.5)));
        assert!(!strictly_inside_circumcircle(a, b, c, Complex64::new(1.0, 1.0)));
        assert!(!strictly_inside_circumcircle(a, b, c, Complex64::new(2.0, 2.0)));
    }
}
