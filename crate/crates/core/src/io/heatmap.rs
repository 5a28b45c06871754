//! PGM and PNG rendering of a [`PatternGrid`].
//!
//! Pixels run along `ε₀` horizontally; the largest amplitude is the top row.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sweep::PatternGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ImageFormat {
    #[default]
    Pgm,
    Png,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Colormap {
    #[default]
    Gray,
    Viridis,
}

/// Values outside the clamp range and NaN cells seen while rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct RenderStats {
    pub clamped: usize,
    pub nan: usize,
}

/// Linear map of `[lo, hi]` onto `0..=255`; NaN renders as 0.
pub fn pixel_level(value: f64, clamp: (f64, f64)) -> u8 {
    if value.is_nan() {
        return 0;
    }
    let x = ((value - clamp.0) / (clamp.1 - clamp.0)).clamp(0.0, 1.0);
    (255.0 * x).round() as u8
}

/// Levels in image order: amplitude descending, `ε₀` ascending.
pub fn pixel_levels(grid: &PatternGrid, clamp: (f64, f64)) -> Result<(Vec<u8>, RenderStats)> {
    if grid.n_eps() == 0 || grid.n_amp() == 0 {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    if !(clamp.0.is_finite() && clamp.1.is_finite() && clamp.0 < clamp.1) {
        return Err(Error::InvalidParameter(format!(
            "clamp range [{}, {}] must be finite and increasing",
            clamp.0, clamp.1
        )));
    }
    let mut stats = RenderStats::default();
    let mut out = Vec::with_capacity(grid.values.len());
    for j in (0..grid.n_amp()).rev() {
        for i in 0..grid.n_eps() {
            let v = grid.get(i, j);
            if v.is_nan() {
                stats.nan += 1;
            } else if v < clamp.0 || v > clamp.1 {
                stats.clamped += 1;
            }
            out.push(pixel_level(v, clamp));
        }
    }
    Ok((out, stats))
}

/// Binary 8-bit P5 image.
pub fn encode_pgm(grid: &PatternGrid, clamp: (f64, f64)) -> Result<(Vec<u8>, RenderStats)> {
    let (levels, stats) = pixel_levels(grid, clamp)?;
    let mut bytes = format!("P5\n{} {}\n255\n", grid.n_eps(), grid.n_amp()).into_bytes();
    bytes.extend_from_slice(&levels);
    Ok((bytes, stats))
}

/// 8-bit RGB PNG through the colormap table.
pub fn encode_png(grid: &PatternGrid, clamp: (f64, f64), cmap: Colormap) -> Result<(Vec<u8>, RenderStats)> {
    let (levels, stats) = pixel_levels(grid, clamp)?;
    let rgb: Vec<u8> = levels.iter().flat_map(|&l| colormap_rgb(cmap, l)).collect();
    let mut bytes = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut bytes, grid.n_eps() as u32, grid.n_amp() as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().map_err(|e| Error::Io(std::io::Error::other(e)))?;
        w.write_image_data(&rgb)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    Ok((bytes, stats))
}

/// Writes a heatmap; PGM is always gray.
pub fn write_heatmap(
    grid: &PatternGrid,
    path: &Path,
    format: ImageFormat,
    cmap: Colormap,
    clamp: (f64, f64),
) -> Result<RenderStats> {
    let (bytes, stats) = match format {
        ImageFormat::Pgm => encode_pgm(grid, clamp)?,
        ImageFormat::Png => encode_png(grid, clamp, cmap)?,
    };
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(&bytes)?;
    f.flush()?;
    Ok(stats)
}

pub fn colormap_rgb(cmap: Colormap, level: u8) -> [u8; 3] {
    match cmap {
        Colormap::Gray => [level; 3],
        Colormap::Viridis => VIRIDIS[level as usize],
    }
}

const VIRIDIS: [[u8; 3]; 256] = [
    [68, 1, 84],
    [68, 2, 86],
    [69, 4, 87],
    [69, 5, 89],
    [70, 7, 90],
    [70, 8, 92],
    [70, 10, 93],
    [70, 11, 94],
    [71, 13, 96],
    [71, 14, 97],
    [71, 16, 99],
    [71, 17, 100],
    [71, 19, 101],
    [72, 20, 103],
    [72, 22, 104],
    [72, 23, 105],
    [72, 24, 106],
    [72, 26, 108],
    [72, 27, 109],
    [72, 28, 110],
    [72, 29, 111],
    [72, 31, 112],
    [72, 32, 113],
    [72, 33, 115],
    [72, 35, 116],
    [72, 36, 117],
    [72, 37, 118],
    [72, 38, 119],
    [72, 40, 120],
    [72, 41, 121],
    [71, 42, 122],
    [71, 44, 122],
    [71, 45, 123],
    [71, 46, 124],
    [71, 47, 125],
    [70, 48, 126],
    [70, 50, 126],
    [70, 51, 127],
    [70, 52, 128],
    [69, 53, 129],
    [69, 55, 129],
    [69, 56, 130],
    [68, 57, 131],
    [68, 58, 131],
    [68, 59, 132],
    [67, 61, 132],
    [67, 62, 133],
    [66, 63, 133],
    [66, 64, 134],
    [66, 65, 134],
    [65, 66, 135],
    [65, 68, 135],
    [64, 69, 136],
    [64, 70, 136],
    [63, 71, 136],
    [63, 72, 137],
    [62, 73, 137],
    [62, 74, 137],
    [62, 76, 138],
    [61, 77, 138],
    [61, 78, 138],
    [60, 79, 138],
    [60, 80, 139],
    [59, 81, 139],
    [59, 82, 139],
    [58, 83, 139],
    [58, 84, 140],
    [57, 85, 140],
    [57, 86, 140],
    [56, 88, 140],
    [56, 89, 140],
    [55, 90, 140],
    [55, 91, 141],
    [54, 92, 141],
    [54, 93, 141],
    [53, 94, 141],
    [53, 95, 141],
    [52, 96, 141],
    [52, 97, 141],
    [51, 98, 141],
    [51, 99, 141],
    [50, 100, 142],
    [50, 101, 142],
    [49, 102, 142],
    [49, 103, 142],
    [49, 104, 142],
    [48, 105, 142],
    [48, 106, 142],
    [47, 107, 142],
    [47, 108, 142],
    [46, 109, 142],
    [46, 110, 142],
    [46, 111, 142],
    [45, 112, 142],
    [45, 113, 142],
    [44, 113, 142],
    [44, 114, 142],
    [44, 115, 142],
    [43, 116, 142],
    [43, 117, 142],
    [42, 118, 142],
    [42, 119, 142],
    [42, 120, 142],
    [41, 121, 142],
    [41, 122, 142],
    [41, 123, 142],
    [40, 124, 142],
    [40, 125, 142],
    [39, 126, 142],
    [39, 127, 142],
    [39, 128, 142],
    [38, 129, 142],
    [38, 130, 142],
    [38, 130, 142],
    [37, 131, 142],
    [37, 132, 142],
    [37, 133, 142],
    [36, 134, 142],
    [36, 135, 142],
    [35, 136, 142],
    [35, 137, 142],
    [35, 138, 141],
    [34, 139, 141],
    [34, 140, 141],
    [34, 141, 141],
    [33, 142, 141],
    [33, 143, 141],
    [33, 144, 141],
    [33, 145, 140],
    [32, 146, 140],
    [32, 146, 140],
    [32, 147, 140],
    [31, 148, 140],
    [31, 149, 139],
    [31, 150, 139],
    [31, 151, 139],
    [31, 152, 139],
    [31, 153, 138],
    [31, 154, 138],
    [30, 155, 138],
    [30, 156, 137],
    [30, 157, 137],
    [31, 158, 137],
    [31, 159, 136],
    [31, 160, 136],
    [31, 161, 136],
    [31, 161, 135],
    [31, 162, 135],
    [32, 163, 134],
    [32, 164, 134],
    [33, 165, 133],
    [33, 166, 133],
    [34, 167, 133],
    [34, 168, 132],
    [35, 169, 131],
    [36, 170, 131],
    [37, 171, 130],
    [37, 172, 130],
    [38, 173, 129],
    [39, 173, 129],
    [40, 174, 128],
    [41, 175, 127],
    [42, 176, 127],
    [44, 177, 126],
    [45, 178, 125],
    [46, 179, 124],
    [47, 180, 124],
    [49, 181, 123],
    [50, 182, 122],
    [52, 182, 121],
    [53, 183, 121],
    [55, 184, 120],
    [56, 185, 119],
    [58, 186, 118],
    [59, 187, 117],
    [61, 188, 116],
    [63, 188, 115],
    [64, 189, 114],
    [66, 190, 113],
    [68, 191, 112],
    [70, 192, 111],
    [72, 193, 110],
    [74, 193, 109],
    [76, 194, 108],
    [78, 195, 107],
    [80, 196, 106],
    [82, 197, 105],
    [84, 197, 104],
    [86, 198, 103],
    [88, 199, 101],
    [90, 200, 100],
    [92, 200, 99],
    [94, 201, 98],
    [96, 202, 96],
    [99, 203, 95],
    [101, 203, 94],
    [103, 204, 92],
    [105, 205, 91],
    [108, 205, 90],
    [110, 206, 88],
    [112, 207, 87],
    [115, 208, 86],
    [117, 208, 84],
    [119, 209, 83],
    [122, 209, 81],
    [124, 210, 80],
    [127, 211, 78],
    [129, 211, 77],
    [132, 212, 75],
    [134, 213, 73],
    [137, 213, 72],
    [139, 214, 70],
    [142, 214, 69],
    [144, 215, 67],
    [147, 215, 65],
    [149, 216, 64],
    [152, 216, 62],
    [155, 217, 60],
    [157, 217, 59],
    [160, 218, 57],
    [162, 218, 55],
    [165, 219, 54],
    [168, 219, 52],
    [170, 220, 50],
    [173, 220, 48],
    [176, 221, 47],
    [178, 221, 45],
    [181, 222, 43],
    [184, 222, 41],
    [186, 222, 40],
    [189, 223, 38],
    [192, 223, 37],
    [194, 223, 35],
    [197, 224, 33],
    [200, 224, 32],
    [202, 225, 31],
    [205, 225, 29],
    [208, 225, 28],
    [210, 226, 27],
    [213, 226, 26],
    [216, 226, 25],
    [218, 227, 25],
    [221, 227, 24],
    [223, 227, 24],
    [226, 228, 24],
    [229, 228, 25],
    [231, 228, 25],
    [234, 229, 26],
    [236, 229, 27],
    [239, 229, 28],
    [241, 229, 29],
    [244, 230, 30],
    [246, 230, 32],
    [248, 230, 33],
    [251, 231, 35],
    [253, 231, 37],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::Axis;
    use proptest::prelude::*;

    fn grid(n_eps: usize, n_amp: usize, values: Vec<f64>) -> PatternGrid {
        PatternGrid::from_values(Axis::new(0.0, 1.0, n_eps), Axis::new(0.0, 1.0, n_amp), values).unwrap()
    }

    #[test]
    fn golden_two_by_two() {
        // p00[eps][amp] = [[0, 1], [0.5, 0.5]]
        let g = grid(2, 2, vec![0.0, 1.0, 0.5, 0.5]);
        let (bytes, stats) = encode_pgm(&g, (0.0, 1.0)).unwrap();
        assert_eq!(bytes, b"P5\n2 2\n255\n\xff\x80\x00\x80".to_vec());
        assert_eq!(stats, RenderStats::default());
    }

    #[test]
    fn constant_grids() {
        let (b, _) = encode_pgm(&grid(3, 4, vec![0.0; 12]), (0.0, 1.0)).unwrap();
        assert!(b[b.len() - 12..].iter().all(|&p| p == 0));
        let (b, _) = encode_pgm(&grid(3, 4, vec![1.0; 12]), (0.0, 1.0)).unwrap();
        assert!(b[b.len() - 12..].iter().all(|&p| p == 255));
    }

    #[test]
    fn clamp_and_nan_counted() {
        let g = grid(2, 2, vec![-0.1, f64::NAN, 1.2, 0.4]);
        let (levels, stats) = pixel_levels(&g, (0.0, 1.0)).unwrap();
        assert_eq!(stats, RenderStats { clamped: 2, nan: 1 });
        assert_eq!(levels, vec![0, 102, 0, 255]);
        assert!(pixel_levels(&g, (1.0, 1.0)).is_err());
    }

    #[test]
    fn viridis_ends() {
        assert_eq!(colormap_rgb(Colormap::Viridis, 0), [68, 1, 84]);
        assert_eq!(colormap_rgb(Colormap::Viridis, 255), [253, 231, 37]);
    }

    #[test]
    fn png_decodes_back() {
        let g = grid(3, 2, vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
        let (bytes, _) = encode_png(&g, (0.0, 1.0), Colormap::Viridis).unwrap();
        let (again, _) = encode_png(&g, (0.0, 1.0), Colormap::Viridis).unwrap();
        assert_eq!(bytes, again);
        let dec = png::Decoder::new(std::io::Cursor::new(bytes));
        let mut reader = dec.read_info().unwrap();
        let mut buf = vec![0; reader.output_buffer_size().unwrap()];
        let info = reader.next_frame(&mut buf).unwrap();
        assert_eq!((info.width, info.height), (3, 2));
        // top-left pixel: largest amplitude, smallest eps0
        assert_eq!(&buf[..3], &VIRIDIS[pixel_level(0.2, (0.0, 1.0)) as usize]);
    }

    proptest! {
        #[test]
        fn mapping_is_monotone(a in -0.5f64..1.5, b in -0.5f64..1.5) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(pixel_level(lo, (0.0, 1.0)) <= pixel_level(hi, (0.0, 1.0)));
        }
    }
}
