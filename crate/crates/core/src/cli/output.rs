//! CSV grids and PGM/PPM heatmaps.
//!
//! Heatmaps are plain netpbm files; `convert map.pgm map.png` (ImageMagick)
//! or any image viewer opens them directly.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::density::{DensityGrid, FluxGrid, GridSpec};

fn header(spec: &GridSpec) -> String {
    format!(
        "# {} {} {} {} {} {}\n",
        spec.x_min, spec.x_max, spec.y_min, spec.y_max, spec.nx, spec.ny
    )
}

/// Header line, then one row of `nx` values per grid row (`y` ascending).
pub fn write_grid_csv(grid: &DensityGrid, path: &Path) -> io::Result<()> {
    let mut out = header(&grid.spec);
    for row in grid.values.chunks(grid.spec.nx) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

/// Header line, then `jx,jy` per cell in row-major order.
pub fn write_flux_csv(flux: &FluxGrid, path: &Path) -> io::Result<()> {
    let mut out = header(&flux.spec);
    for v in &flux.values {
        out.push_str(&format!("{:.12e},{:.12e}\n", v[0], v[1]));
    }
    fs::write(path, out)
}

/// 8-bit graymap scaled to the grid's own range; top row is the largest `y`.
pub fn write_pgm(grid: &DensityGrid, path: &Path) -> io::Result<()> {
    let (lo, hi) = (grid.min(), grid.max());
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (nx, ny) = (grid.spec.nx, grid.spec.ny);
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    write!(file, "P5\n{nx} {ny}\n255\n")?;
    for j in (0..ny).rev() {
        let row: Vec<u8> = (0..nx)
            .map(|i| (255.0 * (grid.get(i, j) - lo) / span).round() as u8)
            .collect();
        file.write_all(&row)?;
    }
    file.flush()
}

/// Flux as colour: hue from direction, brightness from magnitude.
pub fn write_ppm(flux: &FluxGrid, path: &Path) -> io::Result<()> {
    let peak = flux.max_norm().max(f64::MIN_POSITIVE);
    let (nx, ny) = (flux.spec.nx, flux.spec.ny);
    let mut file = io::BufWriter::new(fs::File::create(path)?);
    write!(file, "P6\n{nx} {ny}\n255\n")?;
    for j in (0..ny).rev() {
        for i in 0..nx {
            let [jx, jy] = flux.get(i, j);
            let value = jx.hypot(jy) / peak;
            let hue = (jy.atan2(jx) / std::f64::consts::TAU).rem_euclid(1.0);
            file.write_all(&hsv_to_rgb(hue, value))?;
        }
    }
    file.flush()
}

fn hsv_to_rgb(h: f64, v: f64) -> [u8; 3] {
    let sector = h * 6.0;
    let f = sector - sector.floor();
    let (p, q, t) = (0.0, v * (1.0 - f), v * f);
    let (r, g, b) = match sector.floor() as i32 % 6 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [r, g, b].map(|c| (255.0 * c).round() as u8)
}
