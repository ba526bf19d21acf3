//! Finite grids, local rules, Wang tiles and the projection to words.
//!
//! Coordinates are `(x, y)` with `x` growing east and `y` growing north.
//! Cells are stored row-major with row `y = 0` first, so the first row of a
//! serialized patch is its southern edge.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered set of letter names. Letters are referred to by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlphabetRepr", into = "AlphabetRepr")]
pub struct Alphabet {
    letters: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct AlphabetRepr {
    letters: Vec<String>,
}

impl TryFrom<AlphabetRepr> for Alphabet {
    type Error = Error;
    fn try_from(r: AlphabetRepr) -> Result<Self> {
        Alphabet::new(r.letters)
    }
}

impl From<Alphabet> for AlphabetRepr {
    fn from(a: Alphabet) -> Self {
        AlphabetRepr { letters: a.letters }
    }
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::Invalid {
                what: "alphabet",
                reason: "no letters".into(),
            });
        }
        let mut seen = HashSet::new();
        for l in &letters {
            if !seen.insert(l.as_str()) {
                return Err(Error::Invalid {
                    what: "alphabet",
                    reason: format!("duplicate letter `{l}`"),
                });
            }
        }
        Ok(Alphabet { letters })
    }

    /// The alphabet `{0, 1}`.
    pub fn bits() -> Self {
        Alphabet {
            letters: vec!["0".into(), "1".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, index: u32) -> Option<&str> {
        self.letters.get(index as usize).map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.letters.iter().position(|l| l == name).map(|i| i as u32)
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }
}

/// A finite rectangle of letter (or tile) indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PatchRepr", into = "PatchRepr")]
pub struct Patch {
    width: usize,
    height: usize,
    cells: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct PatchRepr {
    w: usize,
    h: usize,
    cells: Vec<u32>,
}

impl TryFrom<PatchRepr> for Patch {
    type Error = Error;
    fn try_from(r: PatchRepr) -> Result<Self> {
        Patch::new(r.w, r.h, r.cells)
    }
}

impl From<Patch> for PatchRepr {
    fn from(p: Patch) -> Self {
        PatchRepr {
            w: p.width,
            h: p.height,
            cells: p.cells,
        }
    }
}

impl Patch {
    pub fn new(width: usize, height: usize, cells: Vec<u32>) -> Result<Self> {
        if cells.len() != width * height {
            return Err(Error::Invalid {
                what: "patch",
                reason: format!(
                    "{} cells for a {width}x{height} patch",
                    cells.len()
                ),
            });
        }
        Ok(Patch {
            width,
            height,
            cells,
        })
    }

    pub fn filled(width: usize, height: usize, value: u32) -> Self {
        Patch {
            width,
            height,
            cells: vec![value; width * height],
        }
    }

    /// Build a patch from rows listed south to north.
    pub fn from_rows(rows: &[&[u32]]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Invalid {
                what: "patch",
                reason: "ragged rows".into(),
            });
        }
        Patch::new(width, height, rows.concat())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.cells[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u32) {
        self.cells[y * self.width + x] = v;
    }

    fn max_index(&self) -> Option<u32> {
        self.cells.iter().copied().max()
    }

    /// The `m`x`m` block whose south-west corner is `(x, y)`, row-major.
    fn block(&self, x: usize, y: usize, m: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(m * m);
        for dy in 0..m {
            let row = (y + dy) * self.width + x;
            out.extend_from_slice(&self.cells[row..row + m]);
        }
        out
    }
}

/// An occurrence of a forbidden pattern, reported by its south-west corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RuleViolation {
    pub x: usize,
    pub y: usize,
    pub pattern: usize,
}

/// A list of prohibited `M`x`M` patterns over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RuleRepr", into = "RuleRepr")]
pub struct LocalRule {
    m: usize,
    alphabet: Alphabet,
    forbidden: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RuleRepr {
    #[serde(rename = "M")]
    m: usize,
    alphabet: Alphabet,
    forbidden: Vec<Vec<u32>>,
}

impl TryFrom<RuleRepr> for LocalRule {
    type Error = Error;
    fn try_from(r: RuleRepr) -> Result<Self> {
        LocalRule::new(r.m, r.alphabet, r.forbidden)
    }
}

impl From<LocalRule> for RuleRepr {
    fn from(r: LocalRule) -> Self {
        RuleRepr {
            m: r.m,
            alphabet: r.alphabet,
            forbidden: r.forbidden,
        }
    }
}

impl LocalRule {
    pub fn new(m: usize, alphabet: Alphabet, forbidden: Vec<Vec<u32>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid {
                what: "local rule",
                reason: "window side must be at least 1".into(),
            });
        }
        for (i, p) in forbidden.iter().enumerate() {
            if p.len() != m * m {
                return Err(Error::Invalid {
                    what: "local rule",
                    reason: format!("pattern {i} has {} cells, expected {}", p.len(), m * m),
                });
            }
            if let Some(&bad) = p.iter().find(|&&c| c as usize >= alphabet.len()) {
                return Err(Error::IndexOutOfRange {
                    what: "forbidden pattern",
                    index: bad as usize,
                    limit: alphabet.len(),
                });
            }
        }
        Ok(LocalRule {
            m,
            alphabet,
            forbidden,
        })
    }

    pub fn window(&self) -> usize {
        self.m
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn forbidden(&self) -> &[Vec<u32>] {
        &self.forbidden
    }

    fn forbidden_index(&self) -> HashMap<&[u32], usize> {
        let mut map = HashMap::new();
        for (i, p) in self.forbidden.iter().enumerate() {
            map.entry(p.as_slice()).or_insert(i);
        }
        map
    }

    pub fn is_forbidden(&self, block: &[u32]) -> bool {
        self.forbidden.iter().any(|p| p == block)
    }
}

/// Every fully contained window of `patch` that matches a forbidden pattern.
/// Windows overhanging the patch are not checked.
pub fn check_local_rule(rule: &LocalRule, patch: &Patch) -> Result<Vec<RuleViolation>> {
    if let Some(max) = patch.max_index() {
        if max as usize >= rule.alphabet.len() {
            return Err(Error::AlphabetMismatch {
                rule: rule.alphabet.len(),
                patch: max as usize + 1,
            });
        }
    }
    let m = rule.m;
    let mut out = Vec::new();
    if patch.width < m || patch.height < m {
        return Ok(out);
    }
    let index = rule.forbidden_index();
    for y in 0..=patch.height - m {
        for x in 0..=patch.width - m {
            if let Some(&pattern) = index.get(patch.block(x, y, m).as_slice()) {
                out.push(RuleViolation { x, y, pattern });
            }
        }
    }
    Ok(out)
}

/// A square tile with a color on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WangTile {
    pub n: u32,
    pub e: u32,
    pub s: u32,
    pub w: u32,
}

impl WangTile {
    pub const fn new(n: u32, e: u32, s: u32, w: u32) -> Self {
        WangTile { n, e, s, w }
    }

    pub const fn uniform(c: u32) -> Self {
        WangTile::new(c, c, c, c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TileSetRepr", into = "TileSetRepr")]
pub struct WangTileSet {
    colors: u32,
    tiles: Vec<WangTile>,
}

#[derive(Serialize, Deserialize)]
struct TileSetRepr {
    colors: u32,
    tiles: Vec<WangTile>,
}

impl TryFrom<TileSetRepr> for WangTileSet {
    type Error = Error;
    fn try_from(r: TileSetRepr) -> Result<Self> {
        WangTileSet::new(r.colors, r.tiles)
    }
}

impl From<WangTileSet> for TileSetRepr {
    fn from(t: WangTileSet) -> Self {
        TileSetRepr {
            colors: t.colors,
            tiles: t.tiles,
        }
    }
}

impl WangTileSet {
    pub fn new(colors: u32, tiles: Vec<WangTile>) -> Result<Self> {
        if tiles.is_empty() {
            return Err(Error::Invalid {
                what: "tile set",
                reason: "no tiles".into(),
            });
        }
        Self::new_allow_empty(colors, tiles)
    }

    /// Like [`WangTileSet::new`] but accepts an empty tile list, which is
    /// the honest result of reducing a rule that forbids every block.
    pub fn new_allow_empty(colors: u32, tiles: Vec<WangTile>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(t) = tiles.iter().find(|t| !seen.insert(**t)) {
            return Err(Error::Invalid {
                what: "tile set",
                reason: format!("duplicate tile {t:?}"),
            });
        }
        Self::indexed(colors, tiles)
    }

    /// Tiles told apart by index only, so equal color tuples are allowed.
    /// Block encodings with `M = 1` need this: every strip is empty.
    pub fn indexed(colors: u32, tiles: Vec<WangTile>) -> Result<Self> {
        for t in &tiles {
            let max = t.n.max(t.e).max(t.s).max(t.w);
            if max >= colors {
                return Err(Error::IndexOutOfRange {
                    what: "tile color",
                    index: max as usize,
                    limit: colors as usize,
                });
            }
        }
        Ok(WangTileSet { colors, tiles })
    }

    /// Builds a set from tiles with arbitrary colors; the color count is
    /// the largest color plus one. Duplicates are dropped, order kept.
    pub fn from_tiles(tiles: impl IntoIterator<Item = WangTile>) -> Result<Self> {
        let mut seen = HashSet::new();
        let tiles: Vec<WangTile> = tiles.into_iter().filter(|t| seen.insert(*t)).collect();
        let colors = tiles
            .iter()
            .map(|t| t.n.max(t.e).max(t.s).max(t.w) + 1)
            .max()
            .unwrap_or(1);
        WangTileSet::new(colors, tiles)
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn tiles(&self) -> &[WangTile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tile(&self, i: usize) -> WangTile {
        self.tiles[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeAxis {
    /// Between `(x, y)` and `(x + 1, y)`.
    Horizontal,
    /// Between `(x, y)` and `(x, y + 1)`.
    Vertical,
}

/// A mismatched edge, identified by its west or south cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeViolation {
    pub x: usize,
    pub y: usize,
    pub axis: EdgeAxis,
}

fn validate_tiling(tiles: &WangTileSet, tiling: &Patch) -> Result<()> {
    if let Some(max) = tiling.max_index() {
        if max as usize >= tiles.len() {
            return Err(Error::IndexOutOfRange {
                what: "tiling",
                index: max as usize,
                limit: tiles.len(),
            });
        }
    }
    Ok(())
}

/// Every adjacent pair of cells whose shared edge colors differ.
pub fn check_wang(tiles: &WangTileSet, tiling: &Patch) -> Result<Vec<EdgeViolation>> {
    check_wang_impl(tiles, tiling, false)
}

/// As [`check_wang`], with the east edge of the last column meeting the
/// west edge of the first, and likewise north/south.
pub fn check_wang_torus(tiles: &WangTileSet, tiling: &Patch) -> Result<Vec<EdgeViolation>> {
    check_wang_impl(tiles, tiling, true)
}

fn check_wang_impl(tiles: &WangTileSet, tiling: &Patch, wrap: bool) -> Result<Vec<EdgeViolation>> {
    validate_tiling(tiles, tiling)?;
    let (w, h) = (tiling.width, tiling.height);
    let at = |x: usize, y: usize| tiles.tile(tiling.get(x, y) as usize);
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let here = at(x, y);
            if x + 1 < w || (wrap && w > 0) {
                let east = at((x + 1) % w, y);
                if here.e != east.w {
                    out.push(EdgeViolation {
                        x,
                        y,
                        axis: EdgeAxis::Horizontal,
                    });
                }
            }
            if y + 1 < h || (wrap && h > 0) {
                let north = at(x, (y + 1) % h);
                if here.n != north.s {
                    out.push(EdgeViolation {
                        x,
                        y,
                        axis: EdgeAxis::Vertical,
                    });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Result of reducing a local rule to Wang tiles: one tile per allowed
/// `M`x`M` block, with overlap strips as edge colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEncoding {
    pub tiles: WangTileSet,
    /// South-west (first listed) letter of each tile's block.
    pub letters: Vec<u32>,
    pub blocks: Vec<Vec<u32>>,
    pub window: usize,
}

/// Largest number of candidate blocks `rule_to_wang` will enumerate.
pub const MAX_BLOCKS: u128 = 1 << 24;

/// Reduce a local rule to a Wang tile set.
///
/// A `w`x`h` patch with `w, h >= M` satisfies the rule iff some valid
/// tiling of the `(w-M+1)`x`(h-M+1)` grid decodes to it via
/// [`BlockEncoding::decode`].
pub fn rule_to_wang(rule: &LocalRule) -> Result<BlockEncoding> {
    let m = rule.m;
    let a = rule.alphabet.len() as u128;
    let cells = (m * m) as u32;
    let total = a.checked_pow(cells).filter(|&t| t <= MAX_BLOCKS).ok_or_else(|| {
        Error::ResourceLimit(format!("{a}^{cells} candidate blocks"))
    })?;

    let forbidden: HashSet<&[u32]> = rule.forbidden.iter().map(Vec::as_slice).collect();
    // Horizontal and vertical edges never meet, so they number their
    // strips independently.
    let mut colors: [HashMap<Vec<u32>, u32>; 2] = [HashMap::new(), HashMap::new()];
    let mut intern = |axis: usize, key: Vec<u32>| -> u32 {
        let next = colors[axis].len() as u32;
        *colors[axis].entry(key).or_insert(next)
    };

    let mut tiles = Vec::new();
    let mut letters = Vec::new();
    let mut blocks = Vec::new();
    for code in 0..total {
        // Row-major digits, first cell most significant, so blocks come out
        // in lexicographic order.
        let mut block = vec![0u32; m * m];
        let mut c = code;
        for slot in block.iter_mut().rev() {
            *slot = (c % a) as u32;
            c /= a;
        }
        if forbidden.contains(block.as_slice()) {
            continue;
        }
        let strip = |cols: std::ops::Range<usize>, rows: std::ops::Range<usize>| -> Vec<u32> {
            let mut v = Vec::new();
            for y in rows {
                for x in cols.clone() {
                    v.push(block[y * m + x]);
                }
            }
            v
        };
        let e = intern(0, strip(1..m, 0..m));
        let w = intern(0, strip(0..m - 1, 0..m));
        let n = intern(1, strip(0..m, 1..m));
        let s = intern(1, strip(0..m, 0..m - 1));
        tiles.push(WangTile { n, e, s, w });
        letters.push(block[0]);
        blocks.push(block);
    }
    let ncolors = (colors[0].len().max(colors[1].len()) as u32).max(1);
    Ok(BlockEncoding {
        tiles: WangTileSet::indexed(ncolors, tiles)?,
        letters,
        blocks,
        window: m,
    })
}

impl BlockEncoding {
    /// Reassemble the letter patch covered by a tiling of block tiles.
    /// Returns `None` when the tiling's overlapping blocks disagree.
    pub fn decode(&self, tiling: &Patch) -> Option<Patch> {
        let m = self.window;
        let (tw, th) = (tiling.width, tiling.height);
        if tw == 0 || th == 0 {
            return None;
        }
        let (w, h) = (tw + m - 1, th + m - 1);
        let mut out: Vec<Option<u32>> = vec![None; w * h];
        for ty in 0..th {
            for tx in 0..tw {
                let block = self.blocks.get(tiling.get(tx, ty) as usize)?;
                for dy in 0..m {
                    for dx in 0..m {
                        let slot = &mut out[(ty + dy) * w + tx + dx];
                        let v = block[dy * m + dx];
                        match slot {
                            Some(prev) if *prev != v => return None,
                            _ => *slot = Some(v),
                        }
                    }
                }
            }
        }
        Patch::new(w, h, out.into_iter().collect::<Option<Vec<_>>>()?).ok()
    }

    /// The tiling that encodes `patch`, if every window is an allowed block.
    pub fn encode(&self, patch: &Patch) -> Option<Patch> {
        let m = self.window;
        if patch.width < m || patch.height < m {
            return None;
        }
        let index: HashMap<&[u32], u32> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| (b.as_slice(), i as u32))
            .collect();
        let (tw, th) = (patch.width - m + 1, patch.height - m + 1);
        let mut cells = Vec::with_capacity(tw * th);
        for y in 0..th {
            for x in 0..tw {
                cells.push(*index.get(patch.block(x, y, m).as_slice())?);
            }
        }
        Patch::new(tw, th, cells).ok()
    }
}

/// A total letter map from a source alphabet onto a target alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionMap {
    pi: Vec<u32>,
    target: usize,
}

impl ProjectionMap {
    pub fn new(pi: Vec<u32>, target: usize) -> Result<Self> {
        if target == 0 {
            return Err(Error::Invalid {
                what: "projection",
                reason: "empty target alphabet".into(),
            });
        }
        if let Some(&bad) = pi.iter().find(|&&b| b as usize >= target) {
            return Err(Error::IndexOutOfRange {
                what: "projection image",
                index: bad as usize,
                limit: target,
            });
        }
        Ok(ProjectionMap { pi, target })
    }

    pub fn identity(n: usize) -> Self {
        ProjectionMap {
            pi: (0..n as u32).collect(),
            target: n.max(1),
        }
    }

    pub fn apply(&self, a: u32) -> Option<u32> {
        self.pi.get(a as usize).copied()
    }

    pub fn source_len(&self) -> usize {
        self.pi.len()
    }

    pub fn target_len(&self) -> usize {
        self.target
    }

    /// Source letters grouped by image.
    pub fn fibers(&self) -> BTreeMap<u32, Vec<u32>> {
        let mut out: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for (a, &b) in self.pi.iter().enumerate() {
            out.entry(b).or_default().push(a as u32);
        }
        out
    }
}

/// Read a vertically constant patch as a word, one letter per column.
pub fn project(patch: &Patch, pi: &ProjectionMap) -> Result<Vec<u32>> {
    let mut word = Vec::with_capacity(patch.width);
    for x in 0..patch.width {
        let mut column = (0..patch.height).map(|y| {
            let a = patch.get(x, y);
            pi.apply(a).ok_or(Error::IndexOutOfRange {
                what: "patch letter",
                index: a as usize,
                limit: pi.source_len(),
            })
        });
        let first = match column.next() {
            Some(b) => b?,
            None => {
                return Err(Error::Invalid {
                    what: "patch",
                    reason: "zero height".into(),
                })
            }
        };
        for b in column {
            if b? != first {
                return Err(Error::NonConstantColumn(x));
            }
        }
        word.push(first);
    }
    Ok(word)
}

/// The patch of the given height whose every column repeats one letter.
pub fn embed_word(word: &[u32], height: usize) -> Patch {
    let mut cells = Vec::with_capacity(word.len() * height);
    for _ in 0..height {
        cells.extend_from_slice(word);
    }
    Patch {
        width: word.len(),
        height,
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn single_letter_rule_on_clean_patch() {
        let rule = LocalRule::new(1, ab(), vec![vec![1]]).unwrap();
        assert!(check_local_rule(&rule, &Patch::filled(2, 2, 0)).unwrap().is_empty());
    }

    #[test]
    fn single_letter_rule_finds_b() {
        let rule = LocalRule::new(1, ab(), vec![vec![1]]).unwrap();
        let patch = Patch::from_rows(&[&[0, 1], &[0, 0]]).unwrap();
        let v = check_local_rule(&rule, &patch).unwrap();
        assert_eq!(v, vec![RuleViolation { x: 1, y: 0, pattern: 0 }]);
    }

    /// Forbid every 2x2 block with `a` directly south of `b` in its left
    /// column; compare against a hand scan of each window.
    #[test]
    fn vertical_pair_rule_matches_window_scan() {
        let forbidden: Vec<Vec<u32>> = (0..4u32)
            .map(|r| vec![0, r >> 1, 1, r & 1])
            .collect();
        let rule = LocalRule::new(2, ab(), forbidden).unwrap();
        // A single column has no full 2x2 window.
        let column = Patch::from_rows(&[&[0], &[1], &[0]]).unwrap();
        assert!(check_local_rule(&rule, &column).unwrap().is_empty());

        let patch = Patch::from_rows(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let got: Vec<(usize, usize)> = check_local_rule(&rule, &patch)
            .unwrap()
            .into_iter()
            .map(|v| (v.x, v.y))
            .collect();
        let mut expect = Vec::new();
        for y in 0..2 {
            if patch.get(0, y) == 0 && patch.get(0, y + 1) == 1 {
                expect.push((0, y));
            }
        }
        assert_eq!(got, expect);
        assert_eq!(got, vec![(0, 0)]);
    }

    #[test]
    fn local_rule_alphabet_mismatch() {
        let rule = LocalRule::new(1, ab(), vec![]).unwrap();
        let patch = Patch::filled(1, 1, 2);
        assert!(matches!(
            check_local_rule(&rule, &patch),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn uniform_tile_never_violates() {
        let ts = WangTileSet::new(1, vec![WangTile::uniform(0)]).unwrap();
        for (w, h) in [(1, 1), (3, 2), (5, 5)] {
            assert!(check_wang(&ts, &Patch::filled(w, h, 0)).unwrap().is_empty());
        }
    }

    #[test]
    fn forced_mismatch_is_reported() {
        let ts = WangTileSet::new(2, vec![WangTile::new(0, 0, 0, 0), WangTile::new(0, 0, 0, 1)])
            .unwrap();
        let tiling = Patch::from_rows(&[&[0, 1]]).unwrap();
        assert_eq!(
            check_wang(&ts, &tiling).unwrap(),
            vec![EdgeViolation {
                x: 0,
                y: 0,
                axis: EdgeAxis::Horizontal
            }]
        );
    }

    #[test]
    fn wang_rejects_bad_index() {
        let ts = WangTileSet::new(1, vec![WangTile::uniform(0)]).unwrap();
        assert!(check_wang(&ts, &Patch::filled(1, 1, 3)).is_err());
    }

    #[test]
    fn tile_set_invariants() {
        assert!(WangTileSet::new(1, vec![]).is_err());
        assert!(WangTileSet::new(1, vec![WangTile::uniform(1)]).is_err());
        assert!(WangTileSet::new(1, vec![WangTile::uniform(0); 2]).is_err());
    }

    #[test]
    fn reduce_trivial_rule() {
        let rule = LocalRule::new(1, Alphabet::new(["a"]).unwrap(), vec![]).unwrap();
        let enc = rule_to_wang(&rule).unwrap();
        assert_eq!(enc.tiles.len(), 1);
        assert_eq!(enc.tiles.tile(0), WangTile::uniform(0));
    }

    #[test]
    fn single_cell_blocks_share_colors() {
        let rule = LocalRule::new(1, ab(), vec![]).unwrap();
        let enc = rule_to_wang(&rule).unwrap();
        assert_eq!(enc.tiles.len(), 2);
        assert_eq!(enc.tiles.tile(0), enc.tiles.tile(1));
        let p = Patch::from_rows(&[&[0, 1], &[1, 1]]).unwrap();
        assert_eq!(enc.decode(&enc.encode(&p).unwrap()), Some(p));
    }

    #[test]
    fn reduce_counts_allowed_blocks() {
        // Forbid every block whose first cell is b.
        let forbidden: Vec<Vec<u32>> = (0..8u32)
            .map(|r| vec![1, (r >> 2) & 1, (r >> 1) & 1, r & 1])
            .collect();
        let rule = LocalRule::new(2, ab(), forbidden).unwrap();
        let enc = rule_to_wang(&rule).unwrap();
        let expected = (0..16u32).filter(|c| c >> 3 == 0).count();
        assert_eq!(enc.tiles.len(), expected);
        assert_eq!(enc.tiles.len(), 8);
        assert!(enc.letters.iter().all(|&l| l == 0));
    }

    #[test]
    fn reduce_everything_forbidden_gives_empty_set() {
        let rule = LocalRule::new(1, ab(), vec![vec![0], vec![1]]).unwrap();
        assert!(rule_to_wang(&rule).unwrap().tiles.is_empty());
    }

    #[test]
    fn project_examples() {
        let id = ProjectionMap::identity(2);
        let row = Patch::from_rows(&[&[1, 0, 1]]).unwrap();
        assert_eq!(project(&row, &id).unwrap(), vec![1, 0, 1]);
        let tall = Patch::from_rows(&[&[0, 1, 1], &[0, 1, 1]]).unwrap();
        assert_eq!(project(&tall, &id).unwrap(), vec![0, 1, 1]);
        let bad = Patch::from_rows(&[&[0, 1], &[1, 1]]).unwrap();
        assert_eq!(project(&bad, &id), Err(Error::NonConstantColumn(0)));
    }

    #[test]
    fn project_through_non_injective_map() {
        let pi = ProjectionMap::new(vec![0, 0, 1], 2).unwrap();
        let patch = Patch::from_rows(&[&[0, 2], &[1, 2]]).unwrap();
        assert_eq!(project(&patch, &pi).unwrap(), vec![0, 1]);
        assert_eq!(pi.fibers()[&0], vec![0, 1]);
    }

    #[test]
    fn json_field_names() {
        let patch = Patch::from_rows(&[&[0, 1]]).unwrap();
        assert_eq!(
            serde_json::to_string(&patch).unwrap(),
            r#"{"w":2,"h":1,"cells":[0,1]}"#
        );
        let ts = WangTileSet::new(2, vec![WangTile::new(0, 1, 0, 1)]).unwrap();
        assert_eq!(
            serde_json::to_string(&ts).unwrap(),
            r#"{"colors":2,"tiles":[{"n":0,"e":1,"s":0,"w":1}]}"#
        );
        let rule = LocalRule::new(1, ab(), vec![vec![1]]).unwrap();
        assert_eq!(
            serde_json::to_string(&rule).unwrap(),
            r#"{"M":1,"alphabet":{"letters":["a","b"]},"forbidden":[[1]]}"#
        );
        let bad: std::result::Result<Patch, _> = serde_json::from_str(r#"{"w":2,"h":2,"cells":[0]}"#);
        assert!(bad.is_err());
    }
}
