//! Grayscale spacetime heatmaps.

use std::io::{self, Write};

use crate::dynamics::Trajectory;
use crate::scalar::Real;

/// Pixel value for probability `p` under clip level `clip`:
/// `round(255 * min(p, clip) / clip)`.
pub fn pixel<T: Real>(p: T, clip: T) -> u8 {
    let v = (p.max(T::zero()).min(clip) / clip * T::lit(255.0)).round();
    v.to_f64_lossy() as u8
}

/// Binary PGM (P5): one row per recorded frame, time increasing downward, one
/// column per site, intensity from `p_total` via [`pixel`].
pub fn write_pgm<T: Real, W: Write>(traj: &Trajectory<T>, clip: T, mut w: W) -> io::Result<()> {
    let width = traj.frames.first().map_or(0, |f| f.probabilities.len());
    write!(w, "P5\n{} {}\n255\n", width, traj.frames.len())?;
    let mut buf = Vec::with_capacity(width);
    for f in &traj.frames {
        buf.clear();
        buf.extend(f.probabilities.iter().map(|p| pixel(p[0] + p[1], clip)));
        w.write_all(&buf)?;
    }
    Ok(())
}

/// Sidecar text recording the intensity scale of a heatmap.
pub fn heatmap_scale_text<T: Real>(clip: T, rows: usize, cols: usize) -> String {
    format!(
        "format: P5 {cols}x{rows}\nrows: recorded time steps, t increasing downward\ncols: sites x = 0..{}\nclip: {clip:.16e}\npixel: round(255 * min(p_total, clip) / clip)\n",
        cols.saturating_sub(1)
    )
}
