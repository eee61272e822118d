//! Robot footprints as unions of oriented rectangles, rasterized conservatively
//! against the occupancy grid.

use super::Workspace;

const OVERLAP_EPS: f64 = 1e-12;
const BOUNDS_EPS: f64 = 1e-9;

/// A rectangle with center, unit long axis and half extents along (long, short).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedRect {
    pub center: [f64; 2],
    pub axis: [f64; 2],
    pub half: [f64; 2],
}

impl OrientedRect {
    pub fn new(center: [f64; 2], heading: f64, half_length: f64, half_width: f64) -> Self {
        OrientedRect {
            center,
            axis: [heading.cos(), heading.sin()],
            half: [half_length, half_width],
        }
    }

    fn normal(&self) -> [f64; 2] {
        [-self.axis[1], self.axis[0]]
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> [[f64; 2]; 4] {
        let u = self.axis;
        let v = self.normal();
        let [a, b] = self.half;
        let c = self.center;
        let p = |su: f64, sv: f64| {
            [
                c[0] + su * a * u[0] + sv * b * v[0],
                c[1] + su * a * u[1] + sv * b * v[1],
            ]
        };
        [p(1.0, 1.0), p(-1.0, 1.0), p(-1.0, -1.0), p(1.0, -1.0)]
    }

    fn project(&self, dir: [f64; 2]) -> (f64, f64) {
        let c = self.center[0] * dir[0] + self.center[1] * dir[1];
        let u = self.axis;
        let v = self.normal();
        let r = self.half[0] * (u[0] * dir[0] + u[1] * dir[1]).abs()
            + self.half[1] * (v[0] * dir[0] + v[1] * dir[1]).abs();
        (c - r, c + r)
    }

    /// Separating-axis test against an axis-aligned box. Touching boundaries
    /// do not count as overlap; any positive-area intersection does.
    pub fn overlaps_aabb(&self, min: [f64; 2], max: [f64; 2]) -> bool {
        let box_center = [(min[0] + max[0]) * 0.5, (min[1] + max[1]) * 0.5];
        let box_half = [(max[0] - min[0]) * 0.5, (max[1] - min[1]) * 0.5];
        let axes = [[1.0, 0.0], [0.0, 1.0], self.axis, self.normal()];
        for dir in axes {
            let (lo, hi) = self.project(dir);
            let c = box_center[0] * dir[0] + box_center[1] * dir[1];
            let r = box_half[0] * dir[0].abs() + box_half[1] * dir[1].abs();
            if hi <= c - r + OVERLAP_EPS || lo >= c + r - OVERLAP_EPS {
                return false;
            }
        }
        true
    }

    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let (x0, x1) = self.project([1.0, 0.0]);
        let (y0, y1) = self.project([0.0, 1.0]);
        ([x0, y0], [x1, y1])
    }
}

/// True if the rectangle leaves the workspace or touches an occupied cell.
pub(crate) fn rect_collides(ws: &Workspace, rect: &OrientedRect) -> bool {
    let (min, max) = rect.bounds();
    let (w, h) = (ws.width_m(), ws.height_m());
    if min[0] < -BOUNDS_EPS || min[1] < -BOUNDS_EPS || max[0] > w + BOUNDS_EPS || max[1] > h + BOUNDS_EPS
    {
        return true;
    }
    let res = ws.resolution();
    let c0 = ((min[0] / res).floor().max(0.0)) as usize;
    let r0 = ((min[1] / res).floor().max(0.0)) as usize;
    let c1 = (((max[0] / res).ceil() as usize).min(ws.width_cells())).max(c0 + 1);
    let r1 = (((max[1] / res).ceil() as usize).min(ws.height_cells())).max(r0 + 1);
    for row in r0..r1.min(ws.height_cells()) {
        for col in c0..c1.min(ws.width_cells()) {
            if !ws.is_occupied(col, row) {
                continue;
            }
            let cmin = [col as f64 * res, row as f64 * res];
            let cmax = [cmin[0] + res, cmin[1] + res];
            if rect.overlaps_aabb(cmin, cmax) {
                return true;
            }
        }
    }
    false
}
