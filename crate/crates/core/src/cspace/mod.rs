//! Configuration spaces over 2D occupancy grids.
//!
//! A [`CSpace`] pairs a [`Workspace`] with a [`RobotModel`] and provides the
//! primitives every planner in this crate is built on: collision checking,
//! the configuration metric, straight-line local paths, uniform sampling and
//! car-like forward simulation.

mod footprint;
pub mod io;
mod trajectory;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{HarpError, Result};

pub use footprint::OrientedRect;
pub use trajectory::Trajectory;

pub const CAR_MAX_SPEED: f64 = 0.2;
pub const CAR_MAX_STEER: f64 = FRAC_PI_4;
pub const HINGE_LIMIT: f64 = FRAC_PI_2;
/// Integration substeps used by [`CSpace::steer_car`].
pub const CAR_SUBSTEPS: usize = 10;

/// Wraps an angle into `[-pi, pi)`.
pub fn normalize_angle(a: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = a - two_pi * ((a + PI) / two_pi).floor();
    if r >= PI {
        r - two_pi
    } else {
        r
    }
}

/// Signed shortest-arc difference `b - a`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    normalize_angle(b - a)
}

/// Occupancy grid. Cell `(col, row)` covers
/// `[col*res, (col+1)*res) x [row*res, (row+1)*res)`; row 0 is at y = 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Workspace {
    width: usize,
    height: usize,
    resolution: f64,
    occupancy: Vec<bool>,
}

impl Workspace {
    pub fn new(width: usize, height: usize, resolution: f64, occupancy: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(HarpError::InvalidWorkspace("grid must be non-empty".into()));
        }
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(HarpError::InvalidWorkspace(format!(
                "resolution must be positive, got {resolution}"
            )));
        }
        if occupancy.len() != width * height {
            return Err(HarpError::InvalidWorkspace(format!(
                "occupancy has {} entries, expected {}",
                occupancy.len(),
                width * height
            )));
        }
        Ok(Workspace {
            width,
            height,
            resolution,
            occupancy,
        })
    }

    pub fn free(width: usize, height: usize, resolution: f64) -> Result<Self> {
        Self::new(width, height, resolution, vec![false; width * height])
    }

    pub fn width_cells(&self) -> usize {
        self.width
    }

    pub fn height_cells(&self) -> usize {
        self.height
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn width_m(&self) -> f64 {
        self.width as f64 * self.resolution
    }

    pub fn height_m(&self) -> f64 {
        self.height as f64 * self.resolution
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }

    #[inline]
    pub fn is_occupied(&self, col: usize, row: usize) -> bool {
        self.occupancy[row * self.width + col]
    }

    pub fn set_occupied(&mut self, col: usize, row: usize, occupied: bool) {
        self.occupancy[row * self.width + col] = occupied;
    }

    /// Sets every cell in the half-open cell rectangle `[c0, c1) x [r0, r1)`.
    pub fn fill_cells(&mut self, c0: usize, r0: usize, c1: usize, r1: usize, occupied: bool) {
        for row in r0..r1.min(self.height) {
            for col in c0..c1.min(self.width) {
                self.set_occupied(col, row, occupied);
            }
        }
    }

    pub fn cell_at(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !(x >= 0.0 && y >= 0.0) {
            return None;
        }
        let col = (x / self.resolution).floor() as usize;
        let row = (y / self.resolution).floor() as usize;
        (col < self.width && row < self.height).then_some((col, row))
    }

    pub fn cell_center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            (col as f64 + 0.5) * self.resolution,
            (row as f64 + 0.5) * self.resolution,
        )
    }

    pub fn free_cell_count(&self) -> usize {
        self.occupancy.iter().filter(|o| !**o).count()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RobotKind {
    Point2,
    Rect3 {
        half_length: f64,
        half_width: f64,
    },
    /// Base link plus a second link hinged at the base's front edge.
    Hinged4 {
        base_half_length: f64,
        base_half_width: f64,
        link_half_length: f64,
        link_half_width: f64,
    },
    Car3 {
        half_length: f64,
        half_width: f64,
        wheelbase: f64,
    },
}

/// Serialized robot description; unset fields take model defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_extents: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_half_extents: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wheelbase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angular_weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobotModel {
    kind: RobotKind,
    angular_weight: f64,
}

impl RobotModel {
    pub fn point() -> Self {
        RobotModel {
            kind: RobotKind::Point2,
            angular_weight: 0.0,
        }
    }

    pub fn rect(half_length: f64, half_width: f64) -> Result<Self> {
        Self::from_kind(RobotKind::Rect3 {
            half_length,
            half_width,
        })
    }

    pub fn hinged(base: [f64; 2], link: [f64; 2]) -> Result<Self> {
        Self::from_kind(RobotKind::Hinged4 {
            base_half_length: base[0],
            base_half_width: base[1],
            link_half_length: link[0],
            link_half_width: link[1],
        })
    }

    /// Car with the default wheelbase of 0.8 x body length.
    pub fn car(half_length: f64, half_width: f64) -> Result<Self> {
        Self::from_kind(RobotKind::Car3 {
            half_length,
            half_width,
            wheelbase: 0.8 * 2.0 * half_length,
        })
    }

    pub fn from_kind(kind: RobotKind) -> Result<Self> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(HarpError::InvalidRobot(format!("{what} must be positive, got {v}")))
            }
        };
        match &kind {
            RobotKind::Point2 => {}
            RobotKind::Rect3 {
                half_length,
                half_width,
            } => {
                positive(*half_length, "half_length")?;
                positive(*half_width, "half_width")?;
            }
            RobotKind::Hinged4 {
                base_half_length,
                base_half_width,
                link_half_length,
                link_half_width,
            } => {
                positive(*base_half_length, "base_half_length")?;
                positive(*base_half_width, "base_half_width")?;
                positive(*link_half_length, "link_half_length")?;
                positive(*link_half_width, "link_half_width")?;
            }
            RobotKind::Car3 {
                half_length,
                half_width,
                wheelbase,
            } => {
                positive(*half_length, "half_length")?;
                positive(*half_width, "half_width")?;
                positive(*wheelbase, "wheelbase")?;
            }
        }
        let mut model = RobotModel {
            kind,
            angular_weight: 0.0,
        };
        model.angular_weight = 0.5 * model.bounding_radius();
        Ok(model)
    }

    pub fn from_spec(spec: &RobotSpec) -> Result<Self> {
        let need = |v: Option<[f64; 2]>, what: &str| {
            v.ok_or_else(|| HarpError::InvalidRobot(format!("{} requires {what}", spec.kind)))
        };
        let mut model = match spec.kind.as_str() {
            "Point2" | "point" => Self::point(),
            "Rect3" | "rect" => {
                let h = need(spec.half_extents, "half_extents")?;
                Self::rect(h[0], h[1])?
            }
            "Hinged4" | "hinged" => {
                let b = need(spec.half_extents, "half_extents")?;
                let l = need(spec.link_half_extents, "link_half_extents")?;
                Self::hinged(b, l)?
            }
            "Car3" | "car" => {
                let h = need(spec.half_extents, "half_extents")?;
                match spec.wheelbase {
                    Some(wb) => Self::from_kind(RobotKind::Car3 {
                        half_length: h[0],
                        half_width: h[1],
                        wheelbase: wb,
                    })?,
                    None => Self::car(h[0], h[1])?,
                }
            }
            other => return Err(HarpError::InvalidRobot(format!("unknown robot kind {other:?}"))),
        };
        if let Some(w) = spec.angular_weight {
            model = model.with_angular_weight(w)?;
        }
        Ok(model)
    }

    pub fn to_spec(&self) -> RobotSpec {
        let (kind, half, link, wheelbase) = match &self.kind {
            RobotKind::Point2 => ("Point2", None, None, None),
            RobotKind::Rect3 {
                half_length,
                half_width,
            } => ("Rect3", Some([*half_length, *half_width]), None, None),
            RobotKind::Hinged4 {
                base_half_length,
                base_half_width,
                link_half_length,
                link_half_width,
            } => (
                "Hinged4",
                Some([*base_half_length, *base_half_width]),
                Some([*link_half_length, *link_half_width]),
                None,
            ),
            RobotKind::Car3 {
                half_length,
                half_width,
                wheelbase,
            } => ("Car3", Some([*half_length, *half_width]), None, Some(*wheelbase)),
        };
        RobotSpec {
            kind: kind.to_string(),
            half_extents: half,
            link_half_extents: link,
            wheelbase,
            angular_weight: (self.angular_dofs().next().is_some()).then_some(self.angular_weight),
        }
    }

    pub fn with_angular_weight(mut self, weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(HarpError::InvalidRobot(format!(
                "angular weight must be positive, got {weight}"
            )));
        }
        self.angular_weight = weight;
        Ok(self)
    }

    pub fn kind(&self) -> &RobotKind {
        &self.kind
    }

    pub fn angular_weight(&self) -> f64 {
        self.angular_weight
    }

    pub fn dof(&self) -> usize {
        match self.kind {
            RobotKind::Point2 => 2,
            RobotKind::Rect3 { .. } | RobotKind::Car3 { .. } => 3,
            RobotKind::Hinged4 { .. } => 4,
        }
    }

    /// DOFs that live on the circle and interpolate along the shortest arc.
    pub fn wraps(&self, dof: usize) -> bool {
        dof == 2
    }

    pub fn is_angular(&self, dof: usize) -> bool {
        dof >= 2 && dof < self.dof()
    }

    pub fn angular_dofs(&self) -> impl Iterator<Item = usize> {
        2..self.dof()
    }

    pub fn angular_mask(&self) -> Vec<bool> {
        (0..self.dof()).map(|i| self.wraps(i)).collect()
    }

    pub fn is_holonomic(&self) -> bool {
        !matches!(self.kind, RobotKind::Car3 { .. })
    }

    pub fn bounding_radius(&self) -> f64 {
        match self.kind {
            RobotKind::Point2 => 0.0,
            RobotKind::Rect3 {
                half_length,
                half_width,
            }
            | RobotKind::Car3 {
                half_length,
                half_width,
                ..
            } => half_length.hypot(half_width),
            RobotKind::Hinged4 {
                base_half_length,
                base_half_width,
                link_half_length,
                link_half_width,
            } => (base_half_length + 2.0 * link_half_length)
                .hypot(base_half_width.max(link_half_width))
                .max(base_half_length.hypot(base_half_width)),
        }
    }

    /// Upper bound on how far any footprint point moves per radian of the DOF.
    fn lever_arm(&self, dof: usize) -> f64 {
        match (&self.kind, dof) {
            (
                RobotKind::Hinged4 {
                    link_half_length,
                    link_half_width,
                    ..
                },
                3,
            ) => (2.0 * link_half_length).hypot(*link_half_width),
            _ => self.bounding_radius(),
        }
    }

    /// Rectangles making up the footprint at configuration `x`.
    pub fn footprint(&self, x: &[f64]) -> Vec<OrientedRect> {
        match self.kind {
            RobotKind::Point2 => Vec::new(),
            RobotKind::Rect3 {
                half_length,
                half_width,
            }
            | RobotKind::Car3 {
                half_length,
                half_width,
                ..
            } => vec![OrientedRect::new([x[0], x[1]], x[2], half_length, half_width)],
            RobotKind::Hinged4 {
                base_half_length,
                base_half_width,
                link_half_length,
                link_half_width,
            } => {
                let (s, c) = x[2].sin_cos();
                let hinge = [x[0] + base_half_length * c, x[1] + base_half_length * s];
                let link_heading = x[2] + x[3];
                let (ls, lc) = link_heading.sin_cos();
                let link_center = [
                    hinge[0] + link_half_length * lc,
                    hinge[1] + link_half_length * ls,
                ];
                vec![
                    OrientedRect::new([x[0], x[1]], x[2], base_half_length, base_half_width),
                    OrientedRect::new(link_center, link_heading, link_half_length, link_half_width),
                ]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(pub Vec<f64>);

impl Configuration {
    pub fn new(values: Vec<f64>) -> Self {
        Configuration(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl AsRef<[f64]> for Configuration {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for Configuration {
    fn from(v: Vec<f64>) -> Self {
        Configuration(v)
    }
}

impl std::ops::Index<usize> for Configuration {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Car control input: linear velocity and steering angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CarControl {
    pub v: f64,
    pub steer: f64,
}

/// A workspace together with a robot: the space planners search.
#[derive(Clone, Debug)]
pub struct CSpace {
    workspace: Workspace,
    robot: RobotModel,
    lower: Vec<f64>,
    upper: Vec<f64>,
    weights: Vec<f64>,
    levers: Vec<f64>,
}

impl CSpace {
    pub fn new(workspace: Workspace, robot: RobotModel) -> Self {
        let n = robot.dof();
        let mut lower = vec![0.0, 0.0];
        let mut upper = vec![workspace.width_m(), workspace.height_m()];
        let mut weights = vec![1.0, 1.0];
        let mut levers = vec![0.0, 0.0];
        for dof in 2..n {
            if robot.wraps(dof) {
                lower.push(-PI);
                upper.push(PI);
            } else {
                lower.push(-HINGE_LIMIT);
                upper.push(HINGE_LIMIT);
            }
            weights.push(robot.angular_weight());
            levers.push(robot.lever_arm(dof));
        }
        CSpace {
            workspace,
            robot,
            lower,
            upper,
            weights,
            levers,
        }
    }

    pub fn workspace(&self) -> &Workspace {
        &self.workspace
    }

    pub fn robot(&self) -> &RobotModel {
        &self.robot
    }

    pub fn dof(&self) -> usize {
        self.robot.dof()
    }

    pub fn lower_bounds(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper_bounds(&self) -> &[f64] {
        &self.upper
    }

    /// Metric weight of one DOF.
    pub fn weight(&self, dof: usize) -> f64 {
        self.weights[dof]
    }

    pub fn resolution(&self) -> f64 {
        self.workspace.resolution()
    }

    /// Local-path checking step: half a grid cell.
    pub fn default_step(&self) -> f64 {
        0.5 * self.workspace.resolution()
    }

    pub fn check_dims(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dof() {
            return Err(HarpError::DimensionMismatch {
                expected: self.dof(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Whether the robot at `x` touches an occupied cell or leaves the grid.
    pub fn collision_check(&self, x: &Configuration) -> Result<bool> {
        self.check_dims(&x.0)?;
        Ok(self.collides(&x.0))
    }

    /// Unchecked-dimension variant of [`collision_check`](Self::collision_check).
    pub fn collides(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.dof());
        if x.iter().any(|v| !v.is_finite()) {
            return true;
        }
        if let RobotKind::Hinged4 { .. } = self.robot.kind {
            if x[3].abs() > HINGE_LIMIT + 1e-12 {
                return true;
            }
        }
        match self.robot.kind {
            RobotKind::Point2 => match self.workspace.cell_at(x[0], x[1]) {
                Some((c, r)) => self.workspace.is_occupied(c, r),
                None => true,
            },
            _ => self
                .robot
                .footprint(x)
                .iter()
                .any(|rect| footprint::rect_collides(&self.workspace, rect)),
        }
    }

    pub fn is_free(&self, x: &Configuration) -> bool {
        x.len() == self.dof() && !self.collides(&x.0)
    }

    pub fn distance(&self, a: &Configuration, b: &Configuration) -> Result<f64> {
        self.check_dims(&a.0)?;
        self.check_dims(&b.0)?;
        Ok(self.dist(&a.0, &b.0))
    }

    /// Weighted Euclidean metric with shortest-arc angular differences.
    #[inline]
    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        self.dist_sq(a, b).sqrt()
    }

    #[inline]
    pub fn dist_sq(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..a.len() {
            let d = self.delta(i, a[i], b[i]) * self.weights[i];
            acc += d * d;
        }
        acc
    }

    #[inline]
    fn delta(&self, dof: usize, a: f64, b: f64) -> f64 {
        if self.robot.wraps(dof) {
            angle_diff(a, b)
        } else {
            b - a
        }
    }

    /// Point at fraction `t` along the straight segment from `a` to `b`.
    pub fn interpolate(&self, a: &[f64], b: &[f64], t: f64) -> Configuration {
        Configuration(
            (0..a.len())
                .map(|i| {
                    let v = a[i] + t * self.delta(i, a[i], b[i]);
                    if self.robot.wraps(i) {
                        normalize_angle(v)
                    } else {
                        v
                    }
                })
                .collect(),
        )
    }

    /// Bound on the displacement of any footprint point along the segment.
    pub fn motion_bound(&self, a: &[f64], b: &[f64]) -> f64 {
        let trans = (b[0] - a[0]).hypot(b[1] - a[1]);
        let rot: f64 = (2..a.len())
            .map(|i| self.levers[i] * self.delta(i, a[i], b[i]).abs())
            .sum();
        (trans + rot).max(self.dist(a, b))
    }

    fn segment_count(&self, a: &[f64], b: &[f64], step: f64) -> usize {
        let len = self.motion_bound(a, b);
        ((len / step).ceil() as usize).max(1)
    }

    /// Interpolated configurations from `a` to `b` (both included) at spacing <= `step`.
    pub fn interpolants(&self, a: &[f64], b: &[f64], step: f64) -> Vec<Configuration> {
        let n = self.segment_count(a, b, step);
        (0..=n)
            .map(|k| {
                if k == 0 {
                    Configuration(a.to_vec())
                } else if k == n {
                    Configuration(b.to_vec())
                } else {
                    self.interpolate(a, b, k as f64 / n as f64)
                }
            })
            .collect()
    }

    pub fn local_path_free(&self, a: &Configuration, b: &Configuration, step: f64) -> Result<bool> {
        self.check_dims(&a.0)?;
        self.check_dims(&b.0)?;
        if !(step > 0.0) {
            return Err(HarpError::InvalidParameter(format!("step must be positive, got {step}")));
        }
        Ok(self.segment_free(&a.0, &b.0, step))
    }

    pub fn segment_free(&self, a: &[f64], b: &[f64], step: f64) -> bool {
        self.segment_free_with(a, b, step, |_| true)
    }

    /// Like [`segment_free`](Self::segment_free) but every interpolant must
    /// also satisfy `accept`.
    pub fn segment_free_with(
        &self,
        a: &[f64],
        b: &[f64],
        step: f64,
        mut accept: impl FnMut(&[f64]) -> bool,
    ) -> bool {
        let n = self.segment_count(a, b, step);
        for k in 0..=n {
            let x = if k == 0 {
                a.to_vec()
            } else if k == n {
                b.to_vec()
            } else {
                self.interpolate(a, b, k as f64 / n as f64).0
            };
            if self.collides(&x) || !accept(&x) {
                return false;
            }
        }
        true
    }

    pub fn sample_uniform<R: RngCore + ?Sized>(&self, rng: &mut R) -> Configuration {
        Configuration(
            (0..self.dof())
                .map(|i| rng.gen_range(self.lower[i]..self.upper[i]))
                .collect(),
        )
    }

    /// Uniform samples until one is collision-free, at most `tries` draws.
    pub fn sample_free<R: RngCore + ?Sized>(&self, rng: &mut R, tries: usize) -> Option<Configuration> {
        (0..tries)
            .map(|_| self.sample_uniform(rng))
            .find(|x| !self.collides(&x.0))
    }

    /// Moves from `from` toward `to` by at most `step` in the metric.
    pub fn steer_toward(&self, from: &[f64], to: &[f64], step: f64) -> Configuration {
        let d = self.dist(from, to);
        if d <= step {
            Configuration(to.to_vec())
        } else {
            self.interpolate(from, to, step / d)
        }
    }

    fn car_params(&self) -> Result<f64> {
        match self.robot.kind {
            RobotKind::Car3 { wheelbase, .. } => Ok(wheelbase),
            _ => Err(HarpError::Unsupported("car steering requires a Car3 robot".into())),
        }
    }

    /// Kinematic bicycle forward simulation over `dt`; collisions are not checked.
    pub fn steer_car(&self, x: &Configuration, control: CarControl, dt: f64) -> Result<Configuration> {
        Ok(self
            .car_rollout(x, control, dt, CAR_SUBSTEPS)?
            .pop()
            .unwrap_or_else(|| x.clone()))
    }

    /// Intermediate states of the bicycle model at `substeps` equal time slices.
    pub fn car_rollout(
        &self,
        x: &Configuration,
        control: CarControl,
        dt: f64,
        substeps: usize,
    ) -> Result<Vec<Configuration>> {
        let wheelbase = self.car_params()?;
        self.check_dims(&x.0)?;
        const TOL: f64 = 1e-12;
        if control.v.abs() > CAR_MAX_SPEED + TOL || control.steer.abs() > CAR_MAX_STEER + TOL {
            return Err(HarpError::ControlOutOfBounds {
                v: control.v,
                steer: control.steer,
            });
        }
        let substeps = substeps.max(1);
        let h = dt / substeps as f64;
        let yaw_rate = control.v / wheelbase * control.steer.tan();
        let (mut px, mut py, mut th) = (x[0], x[1], x[2]);
        let mut out = Vec::with_capacity(substeps);
        for _ in 0..substeps {
            // exact arc for piecewise-constant controls
            if yaw_rate.abs() < 1e-12 {
                px += control.v * th.cos() * h;
                py += control.v * th.sin() * h;
            } else {
                let r = control.v / yaw_rate;
                let th1 = th + yaw_rate * h;
                px += r * (th1.sin() - th.sin());
                py += r * (th.cos() - th1.cos());
                th = th1;
            }
            th = normalize_angle(th);
            out.push(Configuration(vec![px, py, th]));
        }
        Ok(out)
    }
}

/// Start and goal of a motion planning query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub start: Configuration,
    pub goal: Configuration,
}

impl Query {
    pub fn new(start: Configuration, goal: Configuration) -> Self {
        Query { start, goal }
    }

    /// Checks dimensions and that both endpoints are collision-free.
    pub fn validate(&self, space: &CSpace) -> Result<()> {
        for (what, x) in [("start", &self.start), ("goal", &self.goal)] {
            space.check_dims(&x.0)?;
            if space.collides(&x.0) {
                return Err(HarpError::InvalidConfiguration(format!("{what} is in collision")));
            }
        }
        Ok(())
    }
}

/// A validated motion planning problem: space, start and goal.
#[derive(Clone, Debug)]
pub struct MotionPlanningProblem {
    pub space: CSpace,
    pub query: Query,
}

impl MotionPlanningProblem {
    pub fn new(space: CSpace, start: Configuration, goal: Configuration) -> Result<Self> {
        let query = Query::new(start, goal);
        query.validate(&space)?;
        Ok(MotionPlanningProblem { space, query })
    }
}
