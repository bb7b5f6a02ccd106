//! Polyline helpers shared by the boundary and verification code.

use num_complex::Complex64;

/// Shoelace area, positive for counterclockwise polygons.
pub fn signed_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        p.re * q.im - q.re * p.im
    })
    .sum::<f64>()
        * 0.5
}

pub fn centroid(poly: &[Complex64]) -> Complex64 {
    let n = poly.len();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut area = 0.0;
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let cross = p.re * q.im - q.re * p.im;
        area += cross;
        acc += (p + q) * cross;
    }
    acc / (3.0 * area)
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b - a).re * (c - a).im - (b - a).im * (c - a).re
}

/// Proper crossing of segments `pq` and `rs` (shared endpoints excluded).
fn segments_cross(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> bool {
    let d1 = orient(r, s, p);
    let d2 = orient(r, s, q);
    let d3 = orient(p, q, r);
    let d4 = orient(p, q, s);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
}

/// O(n²) test over non-adjacent edge pairs of a closed polyline.
pub fn is_simple(poly: &[Complex64]) -> bool {
    let n = poly.len();
    if n < 4 {
        return true;
    }
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(p, q, poly[j], poly[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// Even-odd rule.
pub fn contains(poly: &[Complex64], z: Complex64) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if z.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn distance_to_segment(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

pub fn distance_to_polyline(poly: &[Complex64], z: Complex64) -> f64 {
    let n = poly.len();
    (0..n).map(|i| distance_to_segment(z, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

/// Andrew's monotone chain; counterclockwise, no repeated endpoint.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn square_basics() {
        let sq = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        assert_eq!(signed_area(&sq), 1.0);
        assert!((centroid(&sq) - c(0.5, 0.5)).norm() < 1e-15);
        assert!(is_simple(&sq));
        assert!(contains(&sq, c(0.3, 0.7)));
        assert!(!contains(&sq, c(1.3, 0.7)));
        assert!((distance_to_polyline(&sq, c(2.0, 0.5)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bowtie_is_not_simple() {
        let bow = [c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)];
        assert!(!is_simple(&bow));
    }

    #[test]
    fn hull_drops_interior_points() {
        let pts = [c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.5), c(2.0, 2.0), c(0.0, 2.0), c(1.0, 1.0)];
        let h = convex_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!((signed_area(&h) - 4.0).abs() < 1e-15);
    }
}
