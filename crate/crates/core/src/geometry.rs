//! Planar primitives: points, circles, annuli, sweep crossing angles,
//! smallest enclosing circle, convex hull and largest empty circle.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Comparison slack for geometric predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance { eps: 1e-9 };

    pub fn new(eps: f64) -> Result<Self, GeometryError> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Tolerance { eps })
        } else {
            Err(GeometryError::InvalidTolerance(eps))
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// A position in the plane, in units of the communication range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Rejects NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64) -> Result<Self, GeometryError> {
        let p = Point { x, y };
        if p.is_finite() {
            Ok(p)
        } else {
            Err(GeometryError::NonFinite { x, y })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Point at `radius` from `self` in direction `theta`.
    pub fn polar_offset(self, radius: f64, theta: f64) -> Point {
        Point::new(self.x + radius * theta.cos(), self.y + radius * theta.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Euclidean distance.
pub fn dist(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Angle canonicalized to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// A circle. The radius may be zero only for degenerate enclosing circles of
/// a single point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeometryError> {
        if !center.is_finite() {
            return Err(GeometryError::NonFinite { x: center.x, y: center.y });
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(GeometryError::InvalidRadius(radius));
        }
        Ok(Circle { center, radius })
    }

    /// Closed containment with slack.
    pub fn contains(&self, p: Point, tol: Tolerance) -> bool {
        dist(self.center, p) <= self.radius + tol.eps
    }
}

/// The open `(inner, outer)` annulus around `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub center: Point,
    pub inner: f64,
    pub outer: f64,
}

impl Annulus {
    pub fn new(center: Point, inner: f64, outer: f64) -> Result<Self, GeometryError> {
        if !(inner > 0.0 && inner < outer && outer.is_finite()) {
            return Err(GeometryError::InvalidAnnulus { inner, outer });
        }
        Ok(Annulus { center, inner, outer })
    }

    pub fn contains(&self, p: Point) -> bool {
        let d = dist(self.center, p);
        d > self.inner && d < self.outer
    }

    /// Strictly inside the inner circle.
    pub fn in_hole(&self, p: Point) -> bool {
        dist(self.center, p) < self.inner
    }
}

/// How a point relates to a circle of radius `r` whose center orbits a pivot
/// at distance `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Crossing {
    /// Inside the circle for every rotation angle.
    AlwaysInside,
    /// Never inside.
    NeverInside,
    /// Inside exactly on the counterclockwise arc from `enter` to `exit`.
    Arc { enter: f64, exit: f64 },
}

impl Crossing {
    /// Membership at rotation angle `theta`, derived from the arc endpoints.
    pub fn inside_at(&self, theta: f64) -> bool {
        match *self {
            Crossing::AlwaysInside => true,
            Crossing::NeverInside => false,
            Crossing::Arc { enter, exit } => {
                let t = normalize_angle(theta);
                if enter < exit {
                    t > enter && t < exit
                } else {
                    t > enter || t < exit
                }
            }
        }
    }
}

/// Angles at which `w` enters and exits a radius-`r` circle whose center
/// sits at `pivot + rho·(cos θ, sin θ)` as θ sweeps counterclockwise.
///
/// `w` is inside iff `cos(θ − φ) > (d² + rho² − r²) / (2·rho·d)` where `d`
/// and `φ` are the distance and bearing of `w` from the pivot.
pub fn crossing_angles(pivot: Point, w: Point, rho: f64, r: f64) -> Result<Crossing, GeometryError> {
    if !(rho > 0.0 && r > 0.0) {
        return Err(GeometryError::InvalidRadius(if rho > 0.0 { r } else { rho }));
    }
    let d = dist(pivot, w);
    if d == 0.0 {
        return Err(GeometryError::Coincident(pivot));
    }
    let threshold = (d * d + rho * rho - r * r) / (2.0 * rho * d);
    if threshold <= -1.0 {
        return Ok(Crossing::AlwaysInside);
    }
    if threshold >= 1.0 {
        return Ok(Crossing::NeverInside);
    }
    let phi = (w.y - pivot.y).atan2(w.x - pivot.x);
    let half = threshold.acos();
    Ok(Crossing::Arc {
        enter: normalize_angle(phi - half),
        exit: normalize_angle(phi + half),
    })
}

/// Minimal circle containing every point (randomized incremental, expected
/// linear time). The shuffle is seeded so results are reproducible.
pub fn smallest_enclosing_circle(points: &[Point]) -> Result<Circle, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::Empty);
    }
    let mut shuffled = points.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5ec));

    let tol = Tolerance::new(1e-12).expect("constant tolerance");
    let mut c = Circle { center: shuffled[0], radius: 0.0 };
    for i in 1..shuffled.len() {
        if !c.contains(shuffled[i], tol) {
            c = sec_with_one(&shuffled[..i], shuffled[i], tol);
        }
    }
    Ok(c)
}

fn sec_with_one(points: &[Point], p: Point, tol: Tolerance) -> Circle {
    let mut c = Circle { center: p, radius: 0.0 };
    for (j, &q) in points.iter().enumerate() {
        if !c.contains(q, tol) {
            c = sec_with_two(&points[..j], p, q, tol);
        }
    }
    c
}

fn sec_with_two(points: &[Point], p: Point, q: Point, tol: Tolerance) -> Circle {
    let mut c = diameter_circle(p, q);
    for &r in points {
        if !c.contains(r, tol) {
            // collinear triples cannot occur here: r outside the diameter
            // circle of p, q with p, q, r collinear means r extends the span,
            // which the randomized order already handled via sec_with_one
            c = circumcircle(p, q, r).unwrap_or_else(|| widest_diameter(p, q, r));
        }
    }
    c
}

fn widest_diameter(a: Point, b: Point, c: Point) -> Circle {
    [diameter_circle(a, b), diameter_circle(a, c), diameter_circle(b, c)]
        .into_iter()
        .max_by(|x, y| x.radius.total_cmp(&y.radius))
        .expect("three candidates")
}

pub(crate) fn diameter_circle(p: Point, q: Point) -> Circle {
    let center = Point::new((p.x + q.x) / 2.0, (p.y + q.y) / 2.0);
    Circle { center, radius: dist(center, p).max(dist(center, q)) }
}

/// Circle through three points; `None` when they are (nearly) collinear.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Option<Circle> {
    let ab = b - a;
    let ac = c - a;
    let det = 2.0 * ab.cross(ac);
    let scale = ab.dot(ab).max(ac.dot(ac));
    if det.abs() <= 1e-14 * scale {
        return None;
    }
    let ab2 = ab.dot(ab);
    let ac2 = ac.dot(ac);
    let ux = (ac.y * ab2 - ab.y * ac2) / det;
    let uy = (ab.x * ac2 - ac.x * ab2) / det;
    let center = Point::new(a.x + ux, a.y + uy);
    let radius = dist(center, a).max(dist(center, b)).max(dist(center, c));
    Some(Circle { center, radius })
}

/// Counterclockwise convex hull (Andrew's monotone chain). Collinear boundary
/// points are dropped; duplicates collapse.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| (a - o).cross(b - o);
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Closed point-in-convex-polygon test for a counterclockwise polygon.
pub fn in_convex_polygon(poly: &[Point], p: Point, tol: Tolerance) -> bool {
    match poly.len() {
        0 => false,
        1 => dist(poly[0], p) <= tol.eps,
        _ => (0..poly.len()).all(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % poly.len()];
            let edge = b - a;
            let len = edge.norm();
            len == 0.0 || edge.cross(p - a) / len >= -tol.eps
        }),
    }
}

fn nearest_distance(points: &[Point], c: Point) -> f64 {
    points.iter().map(|&p| dist(p, c)).fold(f64::INFINITY, f64::min)
}

/// Largest circle containing no input point whose center lies in `hull`.
///
/// The optimum sits at a Voronoi vertex inside the hull, at a crossing of a
/// Voronoi edge with the hull boundary, or at a hull vertex. All three
/// candidate families are enumerated directly, which is polynomial and fine
/// for formations of a few hundred points.
pub fn largest_empty_circle(points: &[Point], hull: &[Point]) -> Result<Circle, GeometryError> {
    if hull.len() < 3 {
        return Err(GeometryError::Degenerate);
    }
    let tol = Tolerance::DEFAULT;
    let n = points.len();
    let mut best = Circle { center: hull[0], radius: nearest_distance(points, hull[0]) };
    let mut consider = |c: Point| {
        let r = nearest_distance(points, c);
        if r > best.radius {
            best = Circle { center: c, radius: r };
        }
    };

    for &h in hull {
        consider(h);
    }

    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let Some(cc) = circumcircle(points[i], points[j], points[k]) else {
                    continue;
                };
                if in_convex_polygon(hull, cc.center, tol) {
                    consider(cc.center);
                }
            }
        }
    }

    // bisector of (i, j) against each hull edge
    for i in 0..n {
        for j in (i + 1)..n {
            let (pi, pj) = (points[i], points[j]);
            let mid = Point::new((pi.x + pj.x) / 2.0, (pi.y + pj.y) / 2.0);
            let normal = pj - pi;
            for e in 0..hull.len() {
                let a = hull[e];
                let b = hull[(e + 1) % hull.len()];
                let dir = b - a;
                let denom = normal.dot(dir);
                if denom.abs() < 1e-15 {
                    continue;
                }
                let s = normal.dot(mid - a) / denom;
                if (-1e-12..=1.0 + 1e-12).contains(&s) {
                    let c = a + dir * s.clamp(0.0, 1.0);
                    consider(c);
                }
            }
        }
    }

    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn distances() {
        assert_eq!(dist(Point::ORIGIN, Point::ORIGIN), 0.0);
        assert_eq!(dist(Point::ORIGIN, Point::new(3.0, 4.0)), 5.0);
        assert_eq!(dist(Point::ORIGIN, Point::new(1.0, 0.0)), 1.0);
    }

    #[test]
    fn point_rejects_nan() {
        assert!(Point::try_new(f64::NAN, 0.0).is_err());
        assert!(Point::try_new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn annulus_requires_ordered_radii() {
        assert!(Annulus::new(Point::ORIGIN, 0.5, 0.4).is_err());
        assert!(Annulus::new(Point::ORIGIN, 0.0, 1.0).is_err());
        let a = Annulus::new(Point::ORIGIN, 0.65, 1.0).unwrap();
        assert!(a.contains(Point::new(0.8, 0.0)));
        assert!(a.in_hole(Point::new(0.3, 0.0)));
    }

    #[test]
    fn unit_point_on_unit_orbit() {
        let c = crossing_angles(Point::ORIGIN, Point::new(1.0, 0.0), 1.0, 1.0).unwrap();
        let Crossing::Arc { enter, exit } = c else { panic!("{c:?}") };
        assert!((enter - 5.0 * PI / 3.0).abs() < 1e-12);
        assert!((exit - PI / 3.0).abs() < 1e-12);
        assert!(c.inside_at(0.0));
    }

    #[test]
    fn far_point_never_inside() {
        let c = crossing_angles(Point::ORIGIN, Point::new(2.5, 0.0), 1.0, 1.0).unwrap();
        assert_eq!(c, Crossing::NeverInside);
    }

    #[test]
    fn near_point_threshold() {
        let c = crossing_angles(Point::ORIGIN, Point::new(0.1, 0.0), 1.0, 1.0).unwrap();
        let Crossing::Arc { enter, exit } = c else { panic!("{c:?}") };
        assert!((exit - 0.05f64.acos()).abs() < 1e-12);
        assert!((enter - (TAU - 0.05f64.acos())).abs() < 1e-12);
    }

    #[test]
    fn small_circle_close_point_is_always_inside() {
        // pivot orbit radius 0.2, circle radius 1: w at 0.5 is always inside
        let c = crossing_angles(Point::ORIGIN, Point::new(0.5, 0.0), 0.2, 1.0).unwrap();
        assert_eq!(c, Crossing::AlwaysInside);
    }

    #[test]
    fn coincident_points_rejected() {
        assert!(matches!(
            crossing_angles(Point::ORIGIN, Point::ORIGIN, 1.0, 1.0),
            Err(GeometryError::Coincident(_))
        ));
    }

    #[test]
    fn sec_small_cases() {
        let c = smallest_enclosing_circle(&[Point::ORIGIN]).unwrap();
        assert_eq!(c.radius, 0.0);
        let c = smallest_enclosing_circle(&[Point::ORIGIN, Point::new(2.0, 0.0)]).unwrap();
        assert!((c.center.x - 1.0).abs() < 1e-12 && c.center.y.abs() < 1e-12);
        assert!((c.radius - 1.0).abs() < 1e-12);
        assert!(matches!(smallest_enclosing_circle(&[]), Err(GeometryError::Empty)));
    }

    #[test]
    fn sec_obtuse_triangle_uses_diameter() {
        // (0.5, 0.5) lies on the circle with diameter (0,0)-(1,0)
        let pts = [Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.5, 0.5)];
        let c = smallest_enclosing_circle(&pts).unwrap();
        assert!((c.radius - 0.5).abs() < 1e-12);
        assert!((c.center.x - 0.5).abs() < 1e-12 && c.center.y.abs() < 1e-12);
    }

    #[test]
    fn sec_collinear() {
        let pts = [Point::ORIGIN, Point::new(1.0, 0.0), Point::new(3.0, 0.0), Point::new(2.0, 0.0)];
        let c = smallest_enclosing_circle(&pts).unwrap();
        assert!((c.radius - 1.5).abs() < 1e-12);
    }

    #[test]
    fn hull_drops_interior() {
        let pts = [Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.0, 1.0), Point::new(0.2, 0.2)];
        assert_eq!(convex_hull(&pts), vec![Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.0, 1.0)]);
    }

    #[test]
    fn hull_segment_and_collinear() {
        let pts = [Point::ORIGIN, Point::new(1.0, 0.0)];
        assert_eq!(convex_hull(&pts), pts.to_vec());
        let pts = [Point::ORIGIN, Point::new(0.5, 0.0), Point::new(1.0, 0.0), Point::new(0.5, 1.0)];
        assert_eq!(convex_hull(&pts).len(), 3);
    }

    #[test]
    fn lec_square_and_triangle() {
        let sq = [Point::ORIGIN, Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let c = largest_empty_circle(&sq, &convex_hull(&sq)).unwrap();
        assert!((c.radius - 2f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((c.center.x - 0.5).abs() < 1e-12 && (c.center.y - 0.5).abs() < 1e-12);

        let tri = [Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.5, 3f64.sqrt() / 2.0)];
        let c = largest_empty_circle(&tri, &convex_hull(&tri)).unwrap();
        assert!((c.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lec_rejects_collinear() {
        let pts = [Point::ORIGIN, Point::new(1.0, 0.0), Point::new(2.0, 0.0)];
        assert!(matches!(largest_empty_circle(&pts, &convex_hull(&pts)), Err(GeometryError::Degenerate)));
    }

    #[test]
    fn lec_center_on_hull_edge() {
        // obtuse triangle: circumcenter lies outside, optimum is on the long edge
        let pts = [Point::ORIGIN, Point::new(4.0, 0.0), Point::new(2.0, 0.5)];
        let c = largest_empty_circle(&pts, &convex_hull(&pts)).unwrap();
        assert!(c.center.y.abs() < 1e-9);
        // equidistant from (0,0) and (2,0.5) on the x-axis: x² = (x-2)² + 0.25
        let x = 4.25 / 4.0;
        assert!((c.radius - x).abs() < 1e-9, "{c:?}");
    }
}
