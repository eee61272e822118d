//! Empirical critical regions.
//!
//! A corpus of solved plans is rasterized onto a coarse grid over the
//! workspace DOFs; a cell's criticality is the fraction of plans that pass
//! through it divided by the cell's reference measure. Connected groups of
//! hot cells become [`CriticalRegion`]s, each carrying collision-free
//! representative samples. Non-workspace DOFs (headings, hinge angles) are
//! tracked as per-cell channels holding the dominant bin.

mod corpus;
mod raster;

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cspace::{io, normalize_angle, CSpace, Configuration, HINGE_LIMIT};
use crate::error::{HarpError, Result};

pub use corpus::{generate_corpus, generate_corpus_for_goals, DemoPlan, PlanCorpus};
pub use raster::{
    decode_bin, encode_bin, export_region_rasters, import_regions_raster, load_channel_rasters, map_from_rasters,
    save_channel_rasters, ImportParams,
};

/// Tries per sample before a cell is given up on.
pub const MAX_SAMPLE_TRIES: usize = 50;

/// Discretization of one non-workspace DOF.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub dof: usize,
    pub bins: usize,
    /// Wrapping channels center bin 0 on `-pi`; bounded ones split `[lo, hi)` evenly.
    pub wraps: bool,
}

impl ChannelSpec {
    fn range(&self) -> (f64, f64) {
        if self.wraps {
            (-PI, PI)
        } else {
            (-HINGE_LIMIT, HINGE_LIMIT)
        }
    }

    fn width(&self) -> f64 {
        let (lo, hi) = self.range();
        (hi - lo) / self.bins as f64
    }

    pub fn bin_of(&self, v: f64) -> usize {
        let w = self.width();
        if self.wraps {
            let k = ((normalize_angle(v) + PI + 0.5 * w) / w).floor() as usize;
            k % self.bins
        } else {
            let (lo, _) = self.range();
            (((v - lo) / w).floor().max(0.0) as usize).min(self.bins - 1)
        }
    }

    pub fn bin_center(&self, bin: usize) -> f64 {
        let w = self.width();
        if self.wraps {
            normalize_angle(-PI + bin as f64 * w)
        } else {
            self.range().0 + (bin as f64 + 0.5) * w
        }
    }

    /// Uniform value within `bin`.
    pub fn sample_in_bin<R: RngCore + ?Sized>(&self, bin: usize, rng: &mut R) -> f64 {
        let w = self.width();
        let offset = rng.gen_range(-0.5 * w..0.5 * w);
        let v = self.bin_center(bin) + offset;
        if self.wraps {
            normalize_angle(v)
        } else {
            let (lo, hi) = self.range();
            v.clamp(lo, hi)
        }
    }

    pub fn sample_any<R: RngCore + ?Sized>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.range();
        rng.gen_range(lo..hi)
    }
}

/// Field resolution: workspace cells per field cell side, and bins per
/// non-workspace DOF.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldBins {
    pub cell_factor: usize,
    pub channels: Vec<ChannelSpec>,
}

impl FieldBins {
    /// Field cells of two grid cells; 4 heading bins, 5 bins per DOF for the hinged robot.
    pub fn default_for(space: &CSpace) -> Self {
        Self::with_factor(space, 2)
    }

    pub fn with_factor(space: &CSpace, cell_factor: usize) -> Self {
        let robot = space.robot();
        let bins = if robot.dof() == 4 { 5 } else { 4 };
        FieldBins {
            cell_factor,
            channels: robot
                .angular_dofs()
                .map(|dof| ChannelSpec {
                    dof,
                    bins,
                    wraps: robot.wraps(dof),
                })
                .collect(),
        }
    }
}

/// Coarse grid over the workspace DOFs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub cols: usize,
    pub rows: usize,
    pub cell_factor: usize,
    pub cell_size: f64,
}

impl FieldGrid {
    pub fn new(space: &CSpace, cell_factor: usize) -> Result<Self> {
        if cell_factor == 0 {
            return Err(HarpError::InvalidParameter("cell factor must be >= 1".into()));
        }
        let ws = space.workspace();
        Ok(FieldGrid {
            cols: ws.width_cells().div_ceil(cell_factor),
            rows: ws.height_cells().div_ceil(cell_factor),
            cell_factor,
            cell_size: cell_factor as f64 * ws.resolution(),
        })
    }

    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_of(&self, x: f64, y: f64) -> Option<usize> {
        if !(x >= 0.0 && y >= 0.0) {
            return None;
        }
        let c = (x / self.cell_size).floor() as usize;
        let r = (y / self.cell_size).floor() as usize;
        (c < self.cols && r < self.rows).then_some(r * self.cols + c)
    }

    pub fn col_row(&self, cell: usize) -> (usize, usize) {
        (cell % self.cols, cell / self.cols)
    }
}

/// Plan-passage counts per field cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalityField {
    pub grid: FieldGrid,
    pub counts: Vec<u32>,
    pub total_plans: u32,
    /// Reference measure of one cell (uniform).
    pub cell_measure: f64,
    pub channels: Vec<ChannelSpec>,
    /// Per channel, `cell * bins + bin` plan counts.
    pub channel_counts: Vec<Vec<u32>>,
}

impl CriticalityField {
    pub fn criticality(&self, cell: usize) -> f64 {
        if self.total_plans == 0 {
            return 0.0;
        }
        (self.counts[cell] as f64 / self.total_plans as f64) / self.cell_measure
    }

    pub fn criticality_at(&self, col: usize, row: usize) -> f64 {
        self.criticality(row * self.grid.cols + col)
    }

    pub fn dominant_bin(&self, channel: usize, cell: usize) -> Option<usize> {
        let bins = self.channels[channel].bins;
        let hist = &self.channel_counts[channel][cell * bins..(cell + 1) * bins];
        let (bin, count) = hist
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc });
        (count > 0).then_some(bin)
    }

    pub fn to_map(&self) -> CriticalityMap {
        CriticalityMap {
            grid: self.grid,
            values: (0..self.grid.len()).map(|c| self.criticality(c)).collect(),
            channels: self.channels.clone(),
            dominant: (0..self.channels.len())
                .map(|k| (0..self.grid.len()).map(|c| self.dominant_bin(k, c)).collect())
                .collect(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        io::write_bytes(path, serde_json::to_string(self)?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&io::read_bytes(path)?)?)
    }
}

/// Criticality values plus dominant channel bins, whatever their source.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalityMap {
    pub grid: FieldGrid,
    pub values: Vec<f64>,
    pub channels: Vec<ChannelSpec>,
    pub dominant: Vec<Vec<Option<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalRegion {
    pub id: usize,
    /// Field cells `(col, row)`.
    pub cells: Vec<(usize, usize)>,
    pub samples: Vec<Configuration>,
    /// Mean criticality of member cells.
    pub score: f64,
    /// Dominant bin per non-workspace DOF, if annotated.
    #[serde(default)]
    pub channels: Vec<Option<usize>>,
}

/// Region set file contents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSet {
    pub grid: Option<FieldGrid>,
    pub regions: Vec<CriticalRegion>,
}

impl RegionSet {
    pub fn save(&self, path: &Path) -> Result<()> {
        io::write_bytes(path, serde_json::to_string_pretty(self)?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let set: RegionSet = serde_json::from_slice(&io::read_bytes(path)?)?;
        for (i, r) in set.regions.iter().enumerate() {
            if r.id != i {
                return Err(HarpError::parse(
                    path.display().to_string(),
                    format!("region at position {i} has id {}", r.id),
                ));
            }
        }
        Ok(set)
    }
}

/// Counts, for every field cell, the plans whose interpolants enter it.
pub fn estimate_criticality(corpus: &PlanCorpus, space: &CSpace, bins: &FieldBins, step: f64) -> Result<CriticalityField> {
    if corpus.plans.is_empty() {
        return Err(HarpError::EmptyCorpus {
            attempted: corpus.attempted,
        });
    }
    if !(step > 0.0) {
        return Err(HarpError::InvalidParameter(format!("step must be positive, got {step}")));
    }
    let grid = FieldGrid::new(space, bins.cell_factor)?;
    for ch in &bins.channels {
        if ch.bins == 0 || ch.dof >= space.dof() {
            return Err(HarpError::InvalidParameter(format!("bad channel {ch:?}")));
        }
    }
    // per plan: distinct cells and distinct (channel, cell, bin) triples
    let visits: Vec<(Vec<usize>, Vec<Vec<usize>>)> = corpus
        .plans
        .par_iter()
        .map(|plan| {
            let mut cells = Vec::new();
            let mut chan: Vec<Vec<usize>> = vec![Vec::new(); bins.channels.len()];
            for x in plan.trajectory.interpolants(space, step) {
                if let Some(cell) = grid.cell_of(x[0], x[1]) {
                    cells.push(cell);
                    for (k, ch) in bins.channels.iter().enumerate() {
                        chan[k].push(cell * ch.bins + ch.bin_of(x[ch.dof]));
                    }
                }
            }
            cells.sort_unstable();
            cells.dedup();
            for c in &mut chan {
                c.sort_unstable();
                c.dedup();
            }
            (cells, chan)
        })
        .collect();
    let mut counts = vec![0u32; grid.len()];
    let mut channel_counts: Vec<Vec<u32>> = bins
        .channels
        .iter()
        .map(|ch| vec![0u32; grid.len() * ch.bins])
        .collect();
    for (cells, chan) in &visits {
        for &c in cells {
            counts[c] += 1;
        }
        for (k, entries) in chan.iter().enumerate() {
            for &e in entries {
                channel_counts[k][e] += 1;
            }
        }
    }
    Ok(CriticalityField {
        grid,
        counts,
        total_plans: corpus.plans.len() as u32,
        cell_measure: 1.0,
        channels: bins.channels.clone(),
        channel_counts,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractParams {
    pub threshold: f64,
    pub min_cells: usize,
    pub samples_per_region: usize,
}

impl Default for ExtractParams {
    fn default() -> Self {
        ExtractParams {
            threshold: 0.2,
            min_cells: 1,
            samples_per_region: 30,
        }
    }
}

pub fn extract_regions(
    field: &CriticalityField,
    space: &CSpace,
    params: &ExtractParams,
    rng: &mut dyn RngCore,
) -> Result<Vec<CriticalRegion>> {
    extract_from_map(&field.to_map(), space, params, rng)
}

/// Face-connected components of cells at or above the threshold, each
/// turned into a sampled region. Regions are numbered in row-major order of
/// their first cell.
pub fn extract_from_map(
    map: &CriticalityMap,
    space: &CSpace,
    params: &ExtractParams,
    rng: &mut dyn RngCore,
) -> Result<Vec<CriticalRegion>> {
    if !(params.threshold > 0.0) {
        return Err(HarpError::InvalidParameter(format!(
            "threshold must be positive, got {}",
            params.threshold
        )));
    }
    let grid = map.grid;
    let hot: Vec<bool> = map.values.iter().map(|v| *v >= params.threshold).collect();
    let mut seen = vec![false; grid.len()];
    let mut regions = Vec::new();
    for start in 0..grid.len() {
        if !hot[start] || seen[start] {
            continue;
        }
        let component = flood(&grid, &hot, &mut seen, start);
        if component.len() < params.min_cells {
            continue;
        }
        let samples = sample_cells(map, space, &component, params.samples_per_region, rng);
        if samples.is_empty() {
            continue;
        }
        let score = component.iter().map(|&c| map.values[c]).sum::<f64>() / component.len() as f64;
        let channels = (0..map.channels.len())
            .map(|k| mode(component.iter().filter_map(|&c| map.dominant[k][c]), map.channels[k].bins))
            .collect();
        regions.push(CriticalRegion {
            id: regions.len(),
            cells: component.iter().map(|&c| grid.col_row(c)).collect(),
            samples,
            score,
            channels,
        });
    }
    Ok(regions)
}

fn flood(grid: &FieldGrid, hot: &[bool], seen: &mut [bool], start: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(c) = queue.pop_front() {
        out.push(c);
        let (col, row) = grid.col_row(c);
        let mut push = |n: usize| {
            if hot[n] && !seen[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        };
        if col > 0 {
            push(c - 1);
        }
        if col + 1 < grid.cols {
            push(c + 1);
        }
        if row > 0 {
            push(c - grid.cols);
        }
        if row + 1 < grid.rows {
            push(c + grid.cols);
        }
    }
    out.sort_unstable();
    out
}

fn mode(values: impl Iterator<Item = usize>, bins: usize) -> Option<usize> {
    let mut hist = vec![0usize; bins];
    let mut any = false;
    for v in values {
        hist[v] += 1;
        any = true;
    }
    any.then(|| {
        hist.iter()
            .enumerate()
            .fold((0, 0), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc })
            .0
    })
}

/// Draws collision-free configurations from random member cells, jittering
/// workspace DOFs within the cell and the remaining DOFs within the cell's
/// dominant bin.
fn sample_cells(
    map: &CriticalityMap,
    space: &CSpace,
    cells: &[usize],
    count: usize,
    rng: &mut dyn RngCore,
) -> Vec<Configuration> {
    let grid = map.grid;
    let ws = space.workspace();
    let mut live: Vec<usize> = cells.to_vec();
    let mut out = Vec::with_capacity(count);
    while out.len() < count && !live.is_empty() {
        let pick = rng.gen_range(0..live.len());
        let cell = live[pick];
        let (col, row) = grid.col_row(cell);
        let x0 = col as f64 * grid.cell_size;
        let y0 = row as f64 * grid.cell_size;
        let x1 = (x0 + grid.cell_size).min(ws.width_m());
        let y1 = (y0 + grid.cell_size).min(ws.height_m());
        let mut found = None;
        for _ in 0..MAX_SAMPLE_TRIES {
            let mut x = vec![0.0; space.dof()];
            x[0] = rng.gen_range(x0..x1);
            x[1] = rng.gen_range(y0..y1);
            for dof in 2..space.dof() {
                let spec = map.channels.iter().position(|c| c.dof == dof);
                x[dof] = match spec {
                    Some(k) => match map.dominant[k][cell] {
                        Some(bin) => map.channels[k].sample_in_bin(bin, rng),
                        None => map.channels[k].sample_any(rng),
                    },
                    None => rng.gen_range(space.lower_bounds()[dof]..space.upper_bounds()[dof]),
                };
            }
            if !space.collides(&x) {
                found = Some(Configuration(x));
                break;
            }
        }
        match found {
            Some(x) => out.push(x),
            None => {
                live.swap_remove(pick);
            }
        }
    }
    out
}
