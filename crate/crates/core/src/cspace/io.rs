//! Environment and scenario files.
//!
//! ASCII grids start with a `width height resolution` header followed by
//! `height` rows of `.` (free) / `#` (occupied). PGM rasters use 0 for
//! occupied and 255 for free, thresholded at 128. In both formats the first
//! row in the file is the top of the map (highest row index).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{CSpace, Configuration, Query, RobotModel, RobotSpec, Workspace};
use crate::error::{HarpError, Result};

/// Resolution assumed for PGM environments when the scenario does not set one.
pub const DEFAULT_PGM_RESOLUTION: f64 = 0.05;

/// 8-bit grayscale image; row 0 is the top row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayRaster {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl GrayRaster {
    pub fn new(width: usize, height: usize) -> Self {
        GrayRaster {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    /// Pixel addressed in grid coordinates (row 0 at the bottom).
    pub fn get_grid(&self, col: usize, row: usize) -> u8 {
        self.data[(self.height - 1 - row) * self.width + col]
    }

    pub fn set_grid(&mut self, col: usize, row: usize, v: u8) {
        let h = self.height;
        self.data[(h - 1 - row) * self.width + col] = v;
    }
}

pub fn parse_ascii(text: &str) -> Result<Workspace> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| HarpError::parse("ascii grid", "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(HarpError::parse("ascii grid", format!("bad header {header:?}")));
    }
    let width: usize = fields[0]
        .parse()
        .map_err(|_| HarpError::parse("ascii grid", "bad width"))?;
    let height: usize = fields[1]
        .parse()
        .map_err(|_| HarpError::parse("ascii grid", "bad height"))?;
    let resolution: f64 = fields[2]
        .parse()
        .map_err(|_| HarpError::parse("ascii grid", "bad resolution"))?;
    let rows: Vec<&str> = lines.map(str::trim_end).collect();
    if rows.len() != height {
        return Err(HarpError::parse(
            "ascii grid",
            format!("expected {height} rows, found {}", rows.len()),
        ));
    }
    let mut occupancy = vec![false; width * height];
    for (i, line) in rows.iter().enumerate() {
        let row = height - 1 - i;
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != width {
            return Err(HarpError::parse(
                "ascii grid",
                format!("row {i} has {} cells, expected {width}", chars.len()),
            ));
        }
        for (col, ch) in chars.into_iter().enumerate() {
            occupancy[row * width + col] = match ch {
                '.' => false,
                '#' => true,
                other => {
                    return Err(HarpError::parse(
                        "ascii grid",
                        format!("unexpected character {other:?} in row {i}"),
                    ))
                }
            };
        }
    }
    Workspace::new(width, height, resolution, occupancy)
}

pub fn to_ascii(ws: &Workspace) -> String {
    let mut out = format!("{} {} {}\n", ws.width_cells(), ws.height_cells(), ws.resolution());
    for row in (0..ws.height_cells()).rev() {
        for col in 0..ws.width_cells() {
            out.push(if ws.is_occupied(col, row) { '#' } else { '.' });
        }
        out.push('\n');
    }
    out
}

fn pgm_tokens(bytes: &[u8], count: usize) -> Result<(Vec<usize>, usize)> {
    let mut pos = 2;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let begin = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if begin == pos {
            return Err(HarpError::parse("pgm", "truncated header"));
        }
        let s = std::str::from_utf8(&bytes[begin..pos]).expect("ascii digits");
        out.push(s.parse().map_err(|_| HarpError::parse("pgm", "bad number"))?);
    }
    Ok((out, pos))
}

/// Parses binary (P5) or plain (P2) 8-bit PGM.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayRaster> {
    if bytes.len() < 2 || bytes[0] != b'P' || !(bytes[1] == b'5' || bytes[1] == b'2') {
        return Err(HarpError::parse("pgm", "missing P5/P2 magic"));
    }
    let (hdr, mut pos) = pgm_tokens(bytes, 3)?;
    let (width, height, maxval) = (hdr[0], hdr[1], hdr[2]);
    if maxval == 0 || maxval > 255 {
        return Err(HarpError::parse("pgm", format!("unsupported maxval {maxval}")));
    }
    let scale = |v: usize| ((v * 255 + maxval / 2) / maxval) as u8;
    let n = width * height;
    let data = if bytes[1] == b'5' {
        pos += 1;
        if bytes.len() < pos + n {
            return Err(HarpError::parse("pgm", "truncated pixel data"));
        }
        bytes[pos..pos + n].iter().map(|v| scale(*v as usize)).collect()
    } else {
        let rest = std::str::from_utf8(&bytes[pos..])
            .map_err(|_| HarpError::parse("pgm", "non-ascii plain data"))?;
        let vals: Vec<u8> = rest
            .split_whitespace()
            .take(n)
            .map(|t| t.parse::<usize>().map(scale))
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| HarpError::parse("pgm", "bad pixel value"))?;
        if vals.len() != n {
            return Err(HarpError::parse("pgm", "truncated pixel data"));
        }
        vals
    };
    Ok(GrayRaster {
        width,
        height,
        data,
    })
}

pub fn write_pgm(raster: &GrayRaster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", raster.width, raster.height).into_bytes();
    out.extend_from_slice(&raster.data);
    out
}

pub fn workspace_from_raster(raster: &GrayRaster, resolution: f64) -> Result<Workspace> {
    let mut occupancy = vec![false; raster.width * raster.height];
    for row in 0..raster.height {
        for col in 0..raster.width {
            occupancy[row * raster.width + col] = raster.get_grid(col, row) < 128;
        }
    }
    Workspace::new(raster.width, raster.height, resolution, occupancy)
}

pub fn workspace_to_raster(ws: &Workspace) -> GrayRaster {
    let mut r = GrayRaster::new(ws.width_cells(), ws.height_cells());
    for row in 0..ws.height_cells() {
        for col in 0..ws.width_cells() {
            r.set_grid(col, row, if ws.is_occupied(col, row) { 0 } else { 255 });
        }
    }
    r
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| HarpError::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| HarpError::io(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| HarpError::io(path, e))
}

pub fn read_raster(path: &Path) -> Result<GrayRaster> {
    parse_pgm(&read_bytes(path)?)
}

pub fn write_raster(path: &Path, raster: &GrayRaster) -> Result<()> {
    write_bytes(path, &write_pgm(raster))
}

/// Loads an ASCII or PGM environment; `pgm_resolution` applies to PGM only.
pub fn load_workspace(path: &Path, pgm_resolution: Option<f64>) -> Result<Workspace> {
    let bytes = read_bytes(path)?;
    if bytes.starts_with(b"P5") || bytes.starts_with(b"P2") {
        let raster = parse_pgm(&bytes)?;
        workspace_from_raster(&raster, pgm_resolution.unwrap_or(DEFAULT_PGM_RESOLUTION))
    } else {
        let text = String::from_utf8(bytes)
            .map_err(|_| HarpError::parse(path.display().to_string(), "not utf-8"))?;
        parse_ascii(&text)
    }
}

pub fn save_workspace(path: &Path, ws: &Workspace) -> Result<()> {
    let is_pgm = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("pgm"))
        .unwrap_or(false);
    if is_pgm {
        write_raster(path, &workspace_to_raster(ws))
    } else {
        write_bytes(path, to_ascii(ws).as_bytes())
    }
}

/// Scenario file contents. `environment` is resolved relative to the
/// scenario file's directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub environment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    pub robot: RobotSpec,
    pub start: Vec<f64>,
    pub goal: Vec<f64>,
}

/// A scenario with its environment loaded.
#[derive(Clone, Debug)]
pub struct LoadedScenario {
    pub environment_path: PathBuf,
    pub space: CSpace,
    pub query: Query,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<LoadedScenario> {
        let text = String::from_utf8(read_bytes(path)?)
            .map_err(|_| HarpError::parse(path.display().to_string(), "not utf-8"))?;
        let scenario = Self::from_json(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        scenario.resolve(base)
    }

    pub fn resolve(&self, base_dir: &Path) -> Result<LoadedScenario> {
        let env_path = base_dir.join(&self.environment);
        let ws = load_workspace(&env_path, self.resolution)?;
        let robot = RobotModel::from_spec(&self.robot)?;
        let space = CSpace::new(ws, robot);
        let query = Query::new(
            Configuration(self.start.clone()),
            Configuration(self.goal.clone()),
        );
        space.check_dims(&query.start.0)?;
        space.check_dims(&query.goal.0)?;
        Ok(LoadedScenario {
            environment_path: env_path,
            space,
            query,
        })
    }
}
