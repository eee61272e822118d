use std::path::{Path, PathBuf};

use rand::RngCore;

use super::{extract_from_map, ChannelSpec, CriticalRegion, CriticalityMap, ExtractParams, FieldBins, FieldGrid};
use crate::cspace::{io, io::GrayRaster, CSpace};
use crate::error::{HarpError, Result};

/// Region import settings. Channel 0 is criticality scaled to `[0, 255]`;
/// channel `k` annotates the dominant bin of `channels[k - 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImportParams {
    pub extract: ExtractParams,
    pub channels: Vec<ChannelSpec>,
}

impl ImportParams {
    pub fn default_for(space: &CSpace) -> Self {
        ImportParams {
            extract: ExtractParams {
                threshold: 0.5,
                ..ExtractParams::default()
            },
            channels: FieldBins::default_for(space).channels,
        }
    }
}

/// Pixel value for `bin`; 0 is reserved for "no annotation".
pub fn encode_bin(bin: Option<usize>, bins: usize) -> u8 {
    match bin {
        None => 0,
        Some(k) => ((k + 1) * 255 / bins) as u8,
    }
}

pub fn decode_bin(v: u8, bins: usize) -> Option<usize> {
    if v == 0 {
        return None;
    }
    Some(((v as usize * bins).div_ceil(255)).clamp(1, bins) - 1)
}

fn channel_path(prefix: &Path, k: usize) -> PathBuf {
    let mut name = prefix.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(format!("_ch{k}.pgm"));
    prefix.with_file_name(name)
}

/// Reads `<prefix>_ch0.pgm`, `<prefix>_ch1.pgm`, ... until one is missing.
pub fn load_channel_rasters(prefix: &Path) -> Result<Vec<GrayRaster>> {
    let mut out = Vec::new();
    loop {
        let p = channel_path(prefix, out.len());
        if !p.exists() {
            break;
        }
        out.push(io::read_raster(&p)?);
    }
    if out.is_empty() {
        return Err(HarpError::RasterMismatch(format!(
            "no channel rasters at {}",
            channel_path(prefix, 0).display()
        )));
    }
    Ok(out)
}

pub fn save_channel_rasters(prefix: &Path, rasters: &[GrayRaster]) -> Result<Vec<PathBuf>> {
    rasters
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let p = channel_path(prefix, k);
            io::write_raster(&p, r).map(|_| p)
        })
        .collect()
}

/// Builds regions from externally produced rasters. Raster dimensions must
/// divide the workspace grid evenly.
pub fn import_regions_raster(
    space: &CSpace,
    rasters: &[GrayRaster],
    params: &ImportParams,
    rng: &mut dyn RngCore,
) -> Result<Vec<CriticalRegion>> {
    let map = map_from_rasters(space, rasters, &params.channels)?;
    extract_from_map(&map, space, &params.extract, rng)
}

pub fn map_from_rasters(space: &CSpace, rasters: &[GrayRaster], channels: &[ChannelSpec]) -> Result<CriticalityMap> {
    let Some(first) = rasters.first() else {
        return Err(HarpError::RasterMismatch("no rasters given".into()));
    };
    if rasters.len() != channels.len() + 1 {
        return Err(HarpError::RasterMismatch(format!(
            "expected {} channels for this robot, got {}",
            channels.len() + 1,
            rasters.len()
        )));
    }
    let ws = space.workspace();
    let (w, h) = (first.width, first.height);
    if rasters.iter().any(|r| r.width != w || r.height != h) {
        return Err(HarpError::RasterMismatch("channel rasters differ in size".into()));
    }
    let factor = if w == 0 { 0 } else { ws.width_cells() / w };
    if factor == 0 || factor * w != ws.width_cells() || factor * h != ws.height_cells() {
        return Err(HarpError::RasterMismatch(format!(
            "{w}x{h} raster does not tile the {}x{} workspace grid",
            ws.width_cells(),
            ws.height_cells()
        )));
    }
    let grid = FieldGrid::new(space, factor)?;
    let cells = |r: &GrayRaster| -> Vec<u8> {
        (0..grid.len())
            .map(|c| {
                let (col, row) = grid.col_row(c);
                r.get_grid(col, row)
            })
            .collect()
    };
    Ok(CriticalityMap {
        grid,
        values: cells(first).into_iter().map(|v| v as f64 / 255.0).collect(),
        channels: channels.to_vec(),
        dominant: channels
            .iter()
            .zip(&rasters[1..])
            .map(|(ch, r)| cells(r).into_iter().map(|v| decode_bin(v, ch.bins)).collect())
            .collect(),
    })
}

/// Rasters marking region cells (channel 0) and their dominant bins.
pub fn export_region_rasters(map: &CriticalityMap, regions: &[CriticalRegion]) -> Vec<GrayRaster> {
    let grid = map.grid;
    let mut out = vec![GrayRaster::new(grid.cols, grid.rows); map.channels.len() + 1];
    for region in regions {
        for &(col, row) in &region.cells {
            out[0].set_grid(col, row, 255);
            let cell = row * grid.cols + col;
            for (k, ch) in map.channels.iter().enumerate() {
                out[k + 1].set_grid(col, row, encode_bin(map.dominant[k][cell], ch.bins));
            }
        }
    }
    out
}
