//! Planar primitives: points, ring moments and segment predicates.

use core::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
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

/// Axis-aligned bounding box `(xmin, ymin, xmax, ymax)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl BBox {
    /// Tight box around `points`; `None` when the iterator is empty.
    pub fn enclosing<I: IntoIterator<Item = Point>>(points: I) -> Option<BBox> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut b = BBox {
            xmin: first.x,
            ymin: first.y,
            xmax: first.x,
            ymax: first.y,
        };
        for p in it {
            b.xmin = b.xmin.min(p.x);
            b.ymin = b.ymin.min(p.y);
            b.xmax = b.xmax.max(p.x);
            b.ymax = b.ymax.max(p.y);
        }
        Some(b)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diagonal(&self) -> f64 {
        libm::hypot(self.width(), self.height())
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))
    }
}

/// First moments of a closed ring about `origin`.
///
/// `twice_area` is the signed shoelace sum (positive for counterclockwise),
/// `mx`/`my` are the sums `(x_i + x_j) * cross_ij` used by the polygon
/// centroid formula. Working relative to `origin` keeps the sums accurate when
/// the ring sits far from the coordinate origin.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RingMoments {
    pub twice_area: f64,
    pub mx: f64,
    pub my: f64,
}

impl RingMoments {
    pub fn of(points: &[Point], ring: &[usize], origin: Point) -> RingMoments {
        let mut m = RingMoments::default();
        let n = ring.len();
        for k in 0..n {
            let a = points[ring[k]] - origin;
            let b = points[ring[(k + 1) % n]] - origin;
            let c = a.cross(b);
            m.twice_area += c;
            m.mx += (a.x + b.x) * c;
            m.my += (a.y + b.y) * c;
        }
        m
    }

    pub fn accumulate(&mut self, other: RingMoments) {
        self.twice_area += other.twice_area;
        self.mx += other.mx;
        self.my += other.my;
    }

    pub fn signed_area(&self) -> f64 {
        0.5 * self.twice_area
    }

    /// Centroid in absolute coordinates; `None` for zero area.
    pub fn centroid(&self, origin: Point) -> Option<Point> {
        if self.twice_area == 0.0 {
            return None;
        }
        let k = 1.0 / (3.0 * self.twice_area);
        Some(Point::new(origin.x + self.mx * k, origin.y + self.my * k))
    }
}

/// Signed shoelace area of an index ring, positive when counterclockwise.
pub fn signed_ring_area(points: &[Point], ring: &[usize]) -> f64 {
    match ring.first() {
        Some(&first) => RingMoments::of(points, ring, points[first]).signed_area(),
        None => 0.0,
    }
}

/// Signed shoelace area of an explicit coordinate ring (no closing repeat needed).
pub fn signed_area_of(coords: &[Point]) -> f64 {
    let Some(&origin) = coords.first() else {
        return 0.0;
    };
    let n = coords.len();
    let mut twice = 0.0;
    for k in 0..n {
        twice += (coords[k] - origin).cross(coords[(k + 1) % n] - origin);
    }
    0.5 * twice
}

/// Orientation of `c` relative to the directed line `a -> b`.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segment intersection: touching endpoints and collinear overlap count.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Strict crossing: the open interiors cross transversally.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
}

/// Two segments sharing the endpoint `shared` fold back onto each other.
///
/// `a` and `b` are the far endpoints. True when they are collinear with the
/// shared point and point the same way, i.e. the segments overlap.
pub fn folds_back(shared: Point, a: Point, b: Point) -> bool {
    let u = a - shared;
    let v = b - shared;
    u.cross(v) == 0.0 && u.dot(v) > 0.0
}
