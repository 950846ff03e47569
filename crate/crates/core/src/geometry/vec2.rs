//! Minimal 2-vector arithmetic on `[f64; 2]`.

pub type Point = [f64; 2];

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale(s: f64, a: Point) -> Point {
    [s * a[0], s * a[1]]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn norm2(a: Point) -> f64 {
    dot(a, a)
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

#[inline]
pub fn normalize(a: Point) -> Point {
    scale(1.0 / norm(a), a)
}

/// Counterclockwise rotation by a quarter turn.
#[inline]
pub fn perp(a: Point) -> Point {
    [-a[1], a[0]]
}
