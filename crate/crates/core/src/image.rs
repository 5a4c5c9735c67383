//! Binary images, Netpbm ingestion, and the cubical complex of the black
//! pixels.
//!
//! Each black pixel at row `r`, column `c` contributes the closed unit
//! square with corners `(r, c)`, `(r, c+1)`, `(r+1, c)`, `(r+1, c+1)`.
//! Shared faces are stored once. Two pixels touching only at a corner share
//! a vertex, so the components of the complex are the 8-connected
//! components of the foreground.

use petgraph::unionfind::UnionFind;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::complex::TruncatedComplex;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

pub const DEFAULT_PGM_THRESHOLD: u8 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    /// Row-major, `true` = black = foreground.
    pixels: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![false; width * height],
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<bool>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Parse(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Parses rows of `#` (black) and `.` (white) characters.
    pub fn from_ascii_art(art: &str) -> Result<Self> {
        let rows: Vec<&str> = art
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut pixels = Vec::with_capacity(width * rows.len());
        for row in &rows {
            if row.chars().count() != width {
                return Err(Error::Parse("ragged ascii image".into()));
            }
            for ch in row.chars() {
                pixels.push(match ch {
                    '#' | '1' => true,
                    '.' | '0' => false,
                    _ => return Err(Error::Parse(format!("unexpected character {ch:?}"))),
                });
            }
        }
        Self::from_pixels(width, rows.len(), pixels)
    }

    /// Bit `r * width + c` of `mask` is pixel `(r, c)`.
    pub fn from_mask(width: usize, height: usize, mask: u64) -> Self {
        assert!(width * height <= 64);
        let pixels = (0..width * height).map(|i| (mask >> i) & 1 == 1).collect();
        Self {
            width,
            height,
            pixels,
        }
    }

    /// Reproducible synthetic image. A SplitMix64 generator seeded with
    /// `seed` is drawn once per pixel in row-major order; the pixel is black
    /// iff `(x >> 11) * 2^-53 < density` for the drawn 64-bit value `x`.
    pub fn random(width: usize, height: usize, density: f64, seed: u64) -> Self {
        let mut rng = SplitMix64::from_seed(seed.to_le_bytes());
        let scale = 1.0 / (1u64 << 53) as f64;
        let pixels = (0..width * height)
            .map(|_| ((rng.next_u64() >> 11) as f64) * scale < density)
            .collect();
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.pixels[r * self.width + c]
    }

    pub fn set(&mut self, r: usize, c: usize, black: bool) {
        self.pixels[r * self.width + c] = black;
    }

    pub fn black_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    /// Writes the image as plain (P1) PBM.
    pub fn to_pbm(&self) -> String {
        let mut s = format!("P1\n{} {}\n", self.width, self.height);
        for r in 0..self.height {
            let row: Vec<&str> = (0..self.width)
                .map(|c| if self.get(r, c) { "1" } else { "0" })
                .collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len()
                        && self.bytes[self.pos] != b'\n'
                        && self.bytes[self.pos] != b'\r'
                    {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse(format!("{what} out of range")))
    }

    /// Consumes the single whitespace byte that separates a binary header
    /// from the raster.
    fn raster_start(&mut self) -> Result<usize> {
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => Ok(self.pos + 1),
            _ => Err(Error::Parse("missing whitespace before raster".into())),
        }
    }
}

fn magic(bytes: &[u8]) -> Result<u8> {
    match bytes {
        [b'P', d @ b'1'..=b'6', ..] => Ok(*d - b'0'),
        _ => Err(Error::Parse("bad magic number".into())),
    }
}

fn checked_area(width: usize, height: usize) -> Result<usize> {
    width
        .checked_mul(height)
        .filter(|&n| n <= isize::MAX as usize / 8)
        .ok_or_else(|| Error::Parse(format!("dimensions {width}x{height} overflow")))
}

/// Reads a P1 (plain) or P4 (raw) bitmap. Bit 1 is black.
pub fn parse_pbm(bytes: &[u8]) -> Result<BinaryImage> {
    let kind = magic(bytes)?;
    if kind != 1 && kind != 4 {
        return Err(Error::Parse(format!("P{kind} is not a PBM format")));
    }
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let area = checked_area(width, height)?;
    let mut pixels = Vec::with_capacity(area.min(bytes.len() * 8));

    if kind == 1 {
        while pixels.len() < area {
            h.skip_space_and_comments();
            match bytes.get(h.pos) {
                Some(b'0') => pixels.push(false),
                Some(b'1') => pixels.push(true),
                Some(&b) => {
                    return Err(Error::Parse(format!("unexpected byte {b:#04x} in raster")))
                }
                None => return Err(Error::Parse("truncated raster".into())),
            }
            h.pos += 1;
        }
    } else {
        let start = h.raster_start()?;
        let row_bytes = width.div_ceil(8);
        let raster = bytes
            .get(start..start.saturating_add(row_bytes.saturating_mul(height)))
            .ok_or_else(|| Error::Parse("truncated raster".into()))?;
        for row in raster.chunks(row_bytes.max(1)).take(height) {
            for c in 0..width {
                pixels.push((row[c / 8] >> (7 - c % 8)) & 1 == 1);
            }
        }
    }
    BinaryImage::from_pixels(width, height, pixels)
}

/// Reads a P2 (plain) or P5 (raw) graymap. Samples are rescaled to
/// `0..=255` when `maxval != 255`; a pixel is foreground iff its scaled
/// value is strictly below `threshold`.
pub fn parse_pgm(bytes: &[u8], threshold: u8) -> Result<BinaryImage> {
    let kind = magic(bytes)?;
    if kind != 2 && kind != 5 {
        return Err(Error::Parse(format!("P{kind} is not a PGM format")));
    }
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Parse(format!("maxval {maxval} out of range")));
    }
    let area = checked_area(width, height)?;
    let mut samples = Vec::with_capacity(area.min(bytes.len()));

    if kind == 2 {
        for _ in 0..area {
            let v = h
                .number("sample")
                .map_err(|_| Error::Parse("truncated raster".into()))?;
            samples.push(v);
        }
    } else {
        let start = h.raster_start()?;
        let wide = maxval > 255;
        let len = area.saturating_mul(if wide { 2 } else { 1 });
        let raster = bytes
            .get(start..start.saturating_add(len))
            .ok_or_else(|| Error::Parse("truncated raster".into()))?;
        if wide {
            samples.extend(
                raster
                    .chunks(2)
                    .map(|p| u16::from_be_bytes([p[0], p[1]]) as usize),
            );
        } else {
            samples.extend(raster.iter().map(|&b| b as usize));
        }
    }

    let mut pixels = Vec::with_capacity(samples.len());
    for v in samples {
        if v > maxval {
            return Err(Error::Parse(format!("sample {v} exceeds maxval {maxval}")));
        }
        let scaled = if maxval == 255 {
            v
        } else {
            (v * 255 + maxval / 2) / maxval
        };
        pixels.push(scaled < threshold as usize);
    }
    BinaryImage::from_pixels(width, height, pixels)
}

/// Dispatches on the magic number.
pub fn parse_netpbm(bytes: &[u8], threshold: u8) -> Result<BinaryImage> {
    match magic(bytes)? {
        1 | 4 => parse_pbm(bytes),
        2 | 5 => parse_pgm(bytes, threshold),
        k => Err(Error::Parse(format!("unsupported format P{k}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

/// The cubical complex of a binary image.
///
/// Vertices are ordered lexicographically by lattice point, edges by
/// (lower endpoint, horizontal before vertical), squares by pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalComplex {
    width: usize,
    height: usize,
    pub vertices: Vec<(usize, usize)>,
    /// Vertex indices of each edge's endpoints, lower endpoint first.
    pub edges: Vec<[usize; 2]>,
    pub edge_kinds: Vec<EdgeKind>,
    /// Edge indices of each square: top, left, right, bottom.
    pub squares: Vec<[usize; 4]>,
    pub square_pixels: Vec<(usize, usize)>,
    vertex_index: Vec<Option<usize>>,
    hedge_index: Vec<Option<usize>>,
    vedge_index: Vec<Option<usize>>,
}

impl CubicalComplex {
    pub fn vertex_at(&self, r: usize, c: usize) -> Option<usize> {
        if r > self.height || c > self.width {
            return None;
        }
        self.vertex_index[r * (self.width + 1) + c]
    }

    /// The edge whose lower endpoint is `(r, c)`.
    pub fn edge_at(&self, r: usize, c: usize, kind: EdgeKind) -> Option<usize> {
        match kind {
            EdgeKind::Horizontal if r <= self.height && c < self.width => {
                self.hedge_index[r * self.width + c]
            }
            EdgeKind::Vertical if r < self.height && c <= self.width => {
                self.vedge_index[r * (self.width + 1) + c]
            }
            _ => None,
        }
    }

    pub fn square_at(&self, r: usize, c: usize) -> Option<usize> {
        self.square_pixels.binary_search(&(r, c)).ok()
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.vertices.len(), self.edges.len(), self.squares.len()]
    }

    /// Re-derives the structural invariants from scratch.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedComplex(msg));
        if !self.vertices.windows(2).all(|w| w[0] < w[1]) {
            return bad("vertices not strictly increasing".into());
        }
        let mut edge_keys = Vec::with_capacity(self.edges.len());
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            if a >= self.vertices.len() || b >= self.vertices.len() {
                return bad(format!("edge {e} references a missing vertex"));
            }
            let (p, q) = (self.vertices[a], self.vertices[b]);
            let kind = self.edge_kinds[e];
            let ok = match kind {
                EdgeKind::Horizontal => q == (p.0, p.1 + 1),
                EdgeKind::Vertical => q == (p.0 + 1, p.1),
            };
            if !ok {
                return bad(format!("edge {e} is not a unit lattice segment"));
            }
            edge_keys.push((p, kind));
        }
        if !edge_keys.windows(2).all(|w| w[0] < w[1]) {
            return bad("edges not strictly increasing".into());
        }
        if !self.square_pixels.windows(2).all(|w| w[0] < w[1]) {
            return bad("squares not strictly increasing".into());
        }
        for (s, (&sides, &(r, c))) in self.squares.iter().zip(&self.square_pixels).enumerate() {
            let want = [
                ((r, c), EdgeKind::Horizontal),
                ((r, c), EdgeKind::Vertical),
                ((r, c + 1), EdgeKind::Vertical),
                ((r + 1, c), EdgeKind::Horizontal),
            ];
            for (e, w) in sides.iter().zip(want) {
                if *e >= self.edges.len() || edge_keys[*e] != w {
                    return bad(format!("square {s} has a wrong side"));
                }
            }
        }
        Ok(())
    }
}

pub fn build_cubical(img: &BinaryImage) -> CubicalComplex {
    let (w, h) = (img.width, img.height);
    let mut has_vertex = vec![false; (h + 1) * (w + 1)];
    let mut has_hedge = vec![false; (h + 1) * w];
    let mut has_vedge = vec![false; h * (w + 1)];
    let mut square_pixels = Vec::new();
    for r in 0..h {
        for c in 0..w {
            if !img.get(r, c) {
                continue;
            }
            square_pixels.push((r, c));
            for (dr, dc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                has_vertex[(r + dr) * (w + 1) + c + dc] = true;
            }
            has_hedge[r * w + c] = true;
            has_hedge[(r + 1) * w + c] = true;
            has_vedge[r * (w + 1) + c] = true;
            has_vedge[r * (w + 1) + c + 1] = true;
        }
    }

    let mut vertices = Vec::new();
    let mut vertex_index = vec![None; has_vertex.len()];
    for r in 0..=h {
        for c in 0..=w {
            if has_vertex[r * (w + 1) + c] {
                vertex_index[r * (w + 1) + c] = Some(vertices.len());
                vertices.push((r, c));
            }
        }
    }

    let mut edges = Vec::new();
    let mut edge_kinds = Vec::new();
    let mut hedge_index = vec![None; has_hedge.len()];
    let mut vedge_index = vec![None; has_vedge.len()];
    let vid = |r: usize, c: usize| vertex_index[r * (w + 1) + c].expect("edge endpoint exists");
    for &(r, c) in &vertices {
        if c < w && has_hedge[r * w + c] {
            hedge_index[r * w + c] = Some(edges.len());
            edges.push([vid(r, c), vid(r, c + 1)]);
            edge_kinds.push(EdgeKind::Horizontal);
        }
        if r < h && has_vedge[r * (w + 1) + c] {
            vedge_index[r * (w + 1) + c] = Some(edges.len());
            edges.push([vid(r, c), vid(r + 1, c)]);
            edge_kinds.push(EdgeKind::Vertical);
        }
    }

    let squares = square_pixels
        .iter()
        .map(|&(r, c)| {
            [
                hedge_index[r * w + c],
                vedge_index[r * (w + 1) + c],
                vedge_index[r * (w + 1) + c + 1],
                hedge_index[(r + 1) * w + c],
            ]
            .map(|e| e.expect("square side exists"))
        })
        .collect();

    CubicalComplex {
        width: w,
        height: h,
        vertices,
        edges,
        edge_kinds,
        squares,
        square_pixels,
        vertex_index,
        hedge_index,
        vedge_index,
    }
}

/// Incidence matrices `D1` (vertices x edges) and `D2` (edges x squares).
pub fn boundary_matrices(k: &CubicalComplex) -> Result<TruncatedComplex> {
    let mut d1 = Gf2Matrix::zeros(k.vertices.len(), k.edges.len());
    for (e, &[a, b]) in k.edges.iter().enumerate() {
        d1.set(a, e, true);
        d1.set(b, e, true);
    }
    let mut d2 = Gf2Matrix::zeros(k.edges.len(), k.squares.len());
    for (s, sides) in k.squares.iter().enumerate() {
        for &e in sides {
            d2.set(e, s, true);
        }
    }
    let t = TruncatedComplex::new(d1, d2)?;
    t.check_boundary()?;
    Ok(t)
}

/// Number of 8-connected foreground components.
pub fn count_components(img: &BinaryImage) -> usize {
    let (w, h) = (img.width, img.height);
    let mut uf = UnionFind::<usize>::new(w * h);
    for r in 0..h {
        for c in 0..w {
            if !img.get(r, c) {
                continue;
            }
            let here = r * w + c;
            // right, down-left, down, down-right
            if c + 1 < w && img.get(r, c + 1) {
                uf.union(here, here + 1);
            }
            if r + 1 < h {
                for cc in c.saturating_sub(1)..=(c + 1).min(w - 1) {
                    if img.get(r + 1, cc) {
                        uf.union(here, (r + 1) * w + cc);
                    }
                }
            }
        }
    }
    (0..w * h)
        .filter(|&i| img.pixels[i] && uf.find(i) == i)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pbm_plain() {
        let img = parse_pbm(b"P1\n1 1\n1").unwrap();
        assert_eq!((img.width(), img.height()), (1, 1));
        assert!(img.get(0, 0));

        let img = parse_pbm(b"P1\n2 1\n0 0").unwrap();
        assert_eq!(img.black_count(), 0);
    }

    #[test]
    fn pbm_plain_comments_and_packed_digits() {
        let img = parse_pbm(b"P1 # a comment\n# another\n3 # w\n2\n101\n0 1\n0").unwrap();
        assert_eq!(img.to_pbm(), "P1\n3 2\n1 0 1\n0 1 0\n");
    }

    #[test]
    fn pbm_raw() {
        // 10 pixels per row -> 2 bytes per row, MSB first
        let mut bytes = b"P4\n10 2\n".to_vec();
        bytes.extend_from_slice(&[0b1000_0001, 0b0100_0000, 0b0000_0000, 0b1100_0000]);
        let img = parse_pbm(&bytes).unwrap();
        let expect = BinaryImage::from_ascii_art(
            "#......#.#
             ........##",
        )
        .unwrap();
        assert_eq!(img, expect);
    }

    #[test]
    fn pbm_errors() {
        assert!(parse_pbm(b"P7\n1 1\n1").is_err());
        assert!(parse_pbm(b"Q1\n1 1\n1").is_err());
        assert!(parse_pbm(b"P1\n2 2\n1 0 1").is_err());
        assert!(parse_pbm(b"P1\n1 1\n2").is_err());
        assert!(parse_pbm(b"P4\n9 1\n\xff").is_err());
        assert!(parse_pbm(b"P1\n").is_err());
        assert!(parse_pbm(b"P1\n99999999999999999999 1\n").is_err());
        assert!(parse_pbm(b"P1\n4294967296 4294967296\n").is_err());
        assert!(parse_pbm(b"P2\n1 1\n255\n0").is_err());
    }

    #[test]
    fn pgm_threshold_is_strict() {
        let img = parse_pgm(b"P2\n3 1\n255\n127 128 0", 128).unwrap();
        assert_eq!(img, BinaryImage::from_ascii_art("#.#").unwrap());
    }

    #[test]
    fn pgm_raw_and_rescaled() {
        let mut bytes = b"P5 2 1 255\n".to_vec();
        bytes.extend_from_slice(&[10, 200]);
        assert_eq!(
            parse_pgm(&bytes, 128).unwrap(),
            BinaryImage::from_ascii_art("#.").unwrap()
        );

        // maxval 15: 7 -> 119 (fg), 8 -> 136 (bg)
        let img = parse_pgm(b"P2\n2 1\n15\n7 8", 128).unwrap();
        assert_eq!(img, BinaryImage::from_ascii_art("#.").unwrap());

        let mut wide = b"P5\n2 1\n65535\n".to_vec();
        wide.extend_from_slice(&[0x00, 0x10, 0xff, 0x00]);
        assert_eq!(
            parse_pgm(&wide, 128).unwrap(),
            BinaryImage::from_ascii_art("#.").unwrap()
        );
    }

    #[test]
    fn pgm_errors() {
        assert!(parse_pgm(b"P2\n2 1\n255\n1", 128).is_err());
        assert!(parse_pgm(b"P2\n1 1\n10\n11", 128).is_err());
        assert!(parse_pgm(b"P2\n1 1\n0\n0", 128).is_err());
        assert!(parse_pgm(b"P5\n2 1\n255\n\x00", 128).is_err());
    }

    #[test]
    fn netpbm_dispatch() {
        assert_eq!(parse_netpbm(b"P1 1 1 1", 128).unwrap().black_count(), 1);
        assert_eq!(parse_netpbm(b"P2 1 1 255 0", 128).unwrap().black_count(), 1);
        assert!(parse_netpbm(b"P3 1 1 255 0 0 0", 128).is_err());
    }

    #[test]
    fn empty_image_gives_empty_complex() {
        let k = build_cubical(&BinaryImage::new(3, 3));
        assert_eq!(k.counts(), [0, 0, 0]);
        let t = boundary_matrices(&k).unwrap();
        assert_eq!(t.dims(), [0, 0, 0]);
        assert_eq!(count_components(&BinaryImage::new(3, 3)), 0);
        assert_eq!(count_components(&BinaryImage::new(0, 0)), 0);
    }

    #[test]
    fn single_pixel_complex() {
        let img = BinaryImage::from_ascii_art("#").unwrap();
        let k = build_cubical(&img);
        k.validate().unwrap();
        assert_eq!(k.vertices, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        // (0,0)-h, (0,0)-v, (0,1)-v, (1,0)-h
        assert_eq!(k.edges, vec![[0, 1], [0, 2], [1, 3], [2, 3]]);
        assert_eq!(k.squares, vec![[0, 1, 2, 3]]);

        let t = boundary_matrices(&k).unwrap();
        assert_eq!(t.d1.shape(), (4, 4));
        assert_eq!(t.d1.rank(), 3);
        assert_eq!(t.d2.shape(), (4, 1));
        assert_eq!(t.d2.rank(), 1);
    }

    #[test]
    fn adjacent_pixels_share_an_edge() {
        let img = BinaryImage::from_ascii_art("##").unwrap();
        let k = build_cubical(&img);
        k.validate().unwrap();
        assert_eq!(k.counts(), [6, 7, 2]);
        let shared = k.edge_at(0, 1, EdgeKind::Vertical).unwrap();
        assert!(k.squares[0].contains(&shared) && k.squares[1].contains(&shared));
    }

    #[test]
    fn ring_image() {
        let img = BinaryImage::from_ascii_art(
            "###
             #.#
             ###",
        )
        .unwrap();
        let k = build_cubical(&img);
        k.validate().unwrap();
        let t = boundary_matrices(&k).unwrap();
        assert!(t.d1.mul(&t.d2).unwrap().is_zero());
        assert_eq!(t.betti(), [1, 1, 0]);
        assert_eq!(count_components(&img), 1);
    }

    #[test]
    fn component_examples() {
        let diag = BinaryImage::from_ascii_art("#.\n.#").unwrap();
        assert_eq!(count_components(&diag), 1);
        let anti = BinaryImage::from_ascii_art(".#\n#.").unwrap();
        assert_eq!(count_components(&anti), 1);
        let split = BinaryImage::from_ascii_art("#.#").unwrap();
        assert_eq!(count_components(&split), 2);

        let t = boundary_matrices(&build_cubical(&diag)).unwrap();
        assert_eq!(t.betti()[0], 1);
    }

    #[test]
    fn lookups() {
        let img = BinaryImage::from_ascii_art(".#\n##").unwrap();
        let k = build_cubical(&img);
        assert_eq!(k.vertex_at(0, 0), None);
        assert_eq!(k.vertex_at(0, 1), Some(0));
        assert_eq!(k.vertex_at(9, 9), None);
        assert_eq!(k.square_at(0, 0), None);
        assert_eq!(k.square_at(1, 1), Some(2));
        assert_eq!(k.edge_at(0, 1, EdgeKind::Horizontal), Some(0));
        assert_eq!(k.edge_at(2, 2, EdgeKind::Vertical), None);
    }

    #[test]
    fn random_image_is_reproducible() {
        let a = BinaryImage::random(17, 9, 0.4, 99);
        let b = BinaryImage::random(17, 9, 0.4, 99);
        assert_eq!(a, b);
        assert_ne!(a, BinaryImage::random(17, 9, 0.4, 100));
        assert_eq!(BinaryImage::random(8, 8, 0.0, 1).black_count(), 0);
        assert_eq!(BinaryImage::random(8, 8, 1.0, 1).black_count(), 64);
    }

    #[test]
    fn splitmix_stream_is_the_reference_one() {
        // Reference SplitMix64 output for seed 0.
        let mut rng = SplitMix64::from_seed(0u64.to_le_bytes());
        assert_eq!(rng.next_u64(), 0xe220_a839_7b1d_cdaf);
    }
}
