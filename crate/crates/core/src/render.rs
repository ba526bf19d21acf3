//! Text and PPM pictures of tilings and assemblies.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::Patch;
use crate::hierarchy::Assembly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Ppm,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ascii" | "txt" | "text" => Ok(Format::Ascii),
            "ppm" => Ok(Format::Ppm),
            _ => Err(Error::UnknownFormat(s.into())),
        }
    }
}

const GLYPHS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

fn glyph(v: u32) -> u8 {
    GLYPHS.get(v as usize).copied().unwrap_or(b'#')
}

/// Colors indexed by `2 * level_parity + bit`.
const PALETTE: [[u8; 3]; 4] = [[238, 238, 228], [40, 40, 48], [200, 220, 240], [30, 70, 140]];

/// Twelve-color cycle for raw tile indices.
const TILE_PALETTE: [[u8; 3]; 12] = [
    [230, 25, 75],
    [60, 180, 75],
    [255, 225, 25],
    [0, 130, 200],
    [245, 130, 48],
    [145, 30, 180],
    [70, 240, 240],
    [240, 50, 230],
    [210, 245, 60],
    [250, 190, 212],
    [0, 128, 128],
    [170, 110, 40],
];

fn ppm(w: usize, h: usize, pixel: impl Fn(usize, usize) -> [u8; 3]) -> Vec<u8> {
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    for row in (0..h).rev() {
        for x in 0..w {
            out.extend_from_slice(&pixel(x, row));
        }
    }
    out
}

/// A tiling: one glyph or pixel per cell, north row first.
pub fn render_patch(p: &Patch, f: Format) -> Vec<u8> {
    match f {
        Format::Ascii => {
            let mut out = Vec::with_capacity((p.width() + 1) * p.height());
            for y in (0..p.height()).rev() {
                out.extend((0..p.width()).map(|x| glyph(p.get(x, y))));
                out.push(b'\n');
            }
            out
        }
        Format::Ppm => ppm(p.width(), p.height(), |x, y| {
            TILE_PALETTE[p.get(x, y) as usize % TILE_PALETTE.len()]
        }),
    }
}

/// Highest level whose tile over level-0 cell `(col, row)` delegates that
/// cell's column.
fn delegating_level(a: &Assembly, col: i64, row: u64) -> usize {
    let g = &a.geometry;
    (0..=g.top)
        .rev()
        .find(|&k| {
            let l = g.l(k);
            let b = (col - g.align[k]).div_euclid(l);
            a.state(k, b, row / l as u64)
                .and_then(|s| s.delegated_bit)
                .is_some_and(|d| d.column == col)
        })
        .unwrap_or(0)
}

/// Highest level with a tile boundary just before `pos` along an axis.
fn boundary_level(a: &Assembly, pos: i64, horizontal: bool) -> Option<usize> {
    let g = &a.geometry;
    (1..=g.top).rev().find(|&k| {
        let l = g.l(k);
        if horizontal {
            (pos - g.align[k]).rem_euclid(l) == 0
        } else {
            pos.rem_euclid(l) == 0
        }
    })
}

/// An assembly over its kept columns and all level-0 rows. ASCII shows the
/// ground bit (`.` for padding) with `|` and `-` rules at level-1 and
/// higher tile boundaries; PPM colors by the parity of the delegating
/// level and the bit.
pub fn render_assembly(a: &Assembly, f: Format) -> Vec<u8> {
    let g = &a.geometry;
    let (x0, x1) = g.span;
    let w = (x1 - x0) as usize;
    let h = g.rows(0) as usize;
    match f {
        Format::Ascii => {
            let mut out = Vec::new();
            for row in (0..h).rev() {
                for x in 0..w {
                    let col = x0 + x as i64;
                    if x > 0 && boundary_level(a, col, true).is_some() {
                        out.push(b'|');
                    }
                    out.push(if g.in_region(col) {
                        b'0' + a.ground_bit(col)
                    } else {
                        b'.'
                    });
                }
                out.push(b'\n');
                if row > 0 && boundary_level(a, row as i64, false).is_some() {
                    let rule_len = w + (1..w).filter(|&x| boundary_level(a, x0 + x as i64, true).is_some()).count();
                    out.extend(std::iter::repeat_n(b'-', rule_len));
                    out.push(b'\n');
                }
            }
            out
        }
        Format::Ppm => ppm(w, h, |x, row| {
            let col = x0 + x as i64;
            let parity = delegating_level(a, col, row as u64) % 2;
            PALETTE[2 * parity + a.ground_bit(col) as usize]
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy::{build_assembly, Alignment, ZoomSchedule};

    #[test]
    fn smallest_ascii() {
        assert_eq!(render_patch(&Patch::filled(1, 1, 0), Format::Ascii), b"0\n");
    }

    #[test]
    fn ascii_lists_north_row_first() {
        let p = Patch::from_rows(&[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(render_patch(&p, Format::Ascii), b"23\n01\n");
    }

    #[test]
    fn ppm_of_small_assembly() {
        let s = ZoomSchedule::custom(vec![2, 2], None).unwrap();
        let a = build_assembly(&"0110".parse().unwrap(), 1, &s, &Alignment::zero(1)).unwrap();
        let bytes = render_assembly(&a, Format::Ppm);
        let header = b"P6\n4 4\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 48);
        assert_eq!(bytes, render_assembly(&a, Format::Ppm));
    }

    #[test]
    fn ascii_assembly_has_rules() {
        let s = ZoomSchedule::custom(vec![2, 2], None).unwrap();
        let a = build_assembly(&"0110".parse().unwrap(), 1, &s, &Alignment::zero(1)).unwrap();
        let text = String::from_utf8(render_assembly(&a, Format::Ascii)).unwrap();
        assert_eq!(text, "01|10\n01|10\n-----\n01|10\n01|10\n");
    }

    #[test]
    fn unknown_format() {
        assert!(matches!("gif".parse::<Format>(), Err(Error::UnknownFormat(_))));
    }
}
