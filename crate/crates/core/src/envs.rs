//! Procedural environment generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cspace::Workspace;
use crate::error::{HarpError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvKind {
    Open,
    /// Grid of `rows x cols` rooms; every pair of adjacent rooms shares one doorway.
    Rooms {
        rows: usize,
        cols: usize,
        door_width: f64,
        wall_thickness: f64,
    },
    /// Horizontal walls, each pierced by a single narrow doorway.
    Doorway {
        walls: usize,
        door_width: f64,
        wall_thickness: f64,
    },
    /// Walls alternately attached to the left and right borders.
    Zigzag {
        walls: usize,
        gap: f64,
        wall_thickness: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvSpec {
    #[serde(flatten)]
    pub kind: EnvKind,
    pub size: f64,
    pub resolution: f64,
    #[serde(default)]
    pub seed: u64,
}

impl EnvSpec {
    pub fn build(&self) -> Result<Workspace> {
        let n = (self.size / self.resolution).round() as usize;
        if n < 4 {
            return Err(HarpError::InvalidParameter(format!(
                "environment of {} m at {} m/cell is too small",
                self.size, self.resolution
            )));
        }
        let mut ws = Workspace::free(n, n, self.resolution)?;
        let cells = |m: f64| ((m / self.resolution).round() as usize).max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        match self.kind {
            EnvKind::Open => {}
            EnvKind::Rooms {
                rows,
                cols,
                door_width,
                wall_thickness,
            } => {
                if rows == 0 || cols == 0 {
                    return Err(HarpError::InvalidParameter("rooms needs rows, cols >= 1".into()));
                }
                let t = cells(wall_thickness);
                let door = cells(door_width);
                let row_edges: Vec<usize> = (0..=rows).map(|i| i * n / rows).collect();
                let col_edges: Vec<usize> = (0..=cols).map(|j| j * n / cols).collect();
                // vertical walls between columns, one doorway per room row
                for &x in &col_edges[1..cols] {
                    let x0 = x.saturating_sub(t / 2);
                    ws.fill_cells(x0, 0, x0 + t, n, true);
                    for i in 0..rows {
                        let (lo, hi) = (row_edges[i] + t, row_edges[i + 1].saturating_sub(t + door));
                        let y = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                        ws.fill_cells(x0, y, x0 + t, y + door, false);
                    }
                }
                for &y in &row_edges[1..rows] {
                    let y0 = y.saturating_sub(t / 2);
                    ws.fill_cells(0, y0, n, y0 + t, true);
                    for j in 0..cols {
                        let (lo, hi) = (col_edges[j] + t, col_edges[j + 1].saturating_sub(t + door));
                        let x = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                        ws.fill_cells(x, y0, x + door, y0 + t, false);
                    }
                }
            }
            EnvKind::Doorway {
                walls,
                door_width,
                wall_thickness,
            } => {
                let t = cells(wall_thickness);
                let door = cells(door_width);
                for k in 1..=walls {
                    let y = k * n / (walls + 1);
                    let y0 = y.saturating_sub(t / 2);
                    ws.fill_cells(0, y0, n, y0 + t, true);
                    let margin = n / 5;
                    let x = if k % 2 == 1 { margin } else { n - margin - door };
                    let jitter = rng.gen_range(0..=margin.max(1) / 2);
                    let x = (x + jitter).min(n - door - 1);
                    ws.fill_cells(x, y0, x + door, y0 + t, false);
                }
            }
            EnvKind::Zigzag {
                walls,
                gap,
                wall_thickness,
            } => {
                let t = cells(wall_thickness);
                let g = cells(gap);
                for k in 1..=walls {
                    let y = k * n / (walls + 1);
                    let y0 = y.saturating_sub(t / 2);
                    if k % 2 == 1 {
                        ws.fill_cells(0, y0, n - g, y0 + t, true);
                    } else {
                        ws.fill_cells(g, y0, n, y0 + t, true);
                    }
                }
            }
        }
        Ok(ws)
    }
}

/// Open `size x size` meter room.
pub fn open_room(size: f64, resolution: f64) -> Result<Workspace> {
    EnvSpec {
        kind: EnvKind::Open,
        size,
        resolution,
        seed: 0,
    }
    .build()
}
