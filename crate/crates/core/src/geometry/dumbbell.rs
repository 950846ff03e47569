use super::vec2::Point;
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Two axis-aligned squares joined by a thin horizontal corridor, centred at
/// the origin and symmetric about both axes. Not convex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonconvexDumbbell {
    pub square_side: f64,
    pub corridor_width: f64,
    pub corridor_length: f64,
}

impl NonconvexDumbbell {
    pub fn new(square_side: f64, corridor_width: f64, corridor_length: f64) -> Result<Self> {
        if !(square_side > 0.0 && corridor_width > 0.0 && corridor_length > 0.0) {
            return Err(invalid("dumbbell dimensions must be positive"));
        }
        if corridor_width >= square_side {
            return Err(invalid("corridor must be narrower than the squares"));
        }
        Ok(Self { square_side, corridor_width, corridor_length })
    }

    /// Abscissae where the outline changes, left to right.
    pub fn x_breaks(&self) -> [f64; 4] {
        let c = 0.5 * self.corridor_length;
        [-c - self.square_side, -c, c, c + self.square_side]
    }

    /// Ordinates where the outline changes, bottom to top.
    pub fn y_breaks(&self) -> [f64; 4] {
        let (h, e) = (0.5 * self.square_side, 0.5 * self.corridor_width);
        [-h, -e, e, h]
    }

    pub fn contains(&self, x: Point) -> bool {
        let [x0, x1, x2, x3] = self.x_breaks();
        let [y0, y1, y2, y3] = self.y_breaks();
        let in_squares = ((x0..=x1).contains(&x[0]) || (x2..=x3).contains(&x[0])) && (y0..=y3).contains(&x[1]);
        let in_corridor = (x1..=x2).contains(&x[0]) && (y1..=y2).contains(&x[1]);
        in_squares || in_corridor
    }

    pub fn area(&self) -> f64 {
        2.0 * self.square_side * self.square_side + self.corridor_width * self.corridor_length
    }

    /// Counterclockwise outline; the four corridor junction corners are reflex.
    pub fn outline(&self) -> Vec<Point> {
        let [x0, x1, x2, x3] = self.x_breaks();
        let [y0, y1, y2, y3] = self.y_breaks();
        vec![
            [x0, y0],
            [x1, y0],
            [x1, y1],
            [x2, y1],
            [x2, y0],
            [x3, y0],
            [x3, y3],
            [x2, y3],
            [x2, y2],
            [x1, y2],
            [x1, y3],
            [x0, y3],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexDomain;

    #[test]
    fn shape() {
        let d = NonconvexDumbbell::new(2.0, 0.1, 2.0).unwrap();
        assert!(d.contains([0.0, 0.0]) && d.contains([2.0, 0.9]) && !d.contains([0.0, 0.2]));
        assert!((d.area() - 8.2).abs() < 1e-14);
        // the outline is rejected as a convex polygon
        assert!(ConvexDomain::polygon(d.outline()).validate().is_err());
        assert!(NonconvexDumbbell::new(1.0, 1.5, 1.0).is_err());
    }
}
