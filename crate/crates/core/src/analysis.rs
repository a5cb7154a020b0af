//! Measurements on coloured windows: vertex stars, tile frequencies,
//! translation periods and the block structure of layer lines.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{layer_of, line_of, LineId, Orientation, SegmentId, Vertex};
use crate::patch::{Color, PatternPatch};
use crate::substitution::{TriangleColoring, TypeClass};
use crate::tiling::{to_tiling, DecoratedTile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("window too small: need {needed}, have {have}")]
    WindowTooSmall { needed: String, have: String },
}

/// The six colours around a vertex, counter-clockwise from `+u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexStar(pub [Color; 6]);

impl VertexStar {
    pub fn of(patch: &PatternPatch, v: Vertex) -> Option<Self> {
        let star = v.star();
        let mut c = [Color::Red; 6];
        for (slot, seg) in c.iter_mut().zip(star) {
            *slot = patch.color(seg)?;
        }
        Some(Self(c))
    }

    /// Lexicographically least rotation, as a string of `R`/`B`.
    pub fn class(&self) -> String {
        (0..6)
            .map(|r| {
                (0..6)
                    .map(|i| if self.0[(r + i) % 6].is_red() { 'R' } else { 'B' })
                    .collect::<String>()
            })
            .min()
            .expect("six rotations")
    }

    /// Two adjacent segments of one colour, the other four of the other.
    pub fn is_allowed(&self) -> bool {
        let reds = self.0.iter().filter(|c| c.is_red()).count();
        if reds != 2 && reds != 4 {
            return false;
        }
        let minority = if reds == 2 { Color::Red } else { Color::Blue };
        (0..6).any(|i| self.0[i] == minority && self.0[(i + 1) % 6] == minority)
    }
}

impl fmt::Display for VertexStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.0 {
            f.write_str(if c.is_red() { "R" } else { "B" })?;
        }
        Ok(())
    }
}

/// Vertices whose six incident segments are all interior, sorted.
pub fn interior_vertices(patch: &PatternPatch) -> Vec<Vertex> {
    let mut vs: BTreeSet<Vertex> = BTreeSet::new();
    for seg in patch.interior().keys() {
        let (a, b) = seg.endpoints();
        vs.insert(a);
        vs.insert(b);
    }
    vs.into_iter()
        .filter(|v| v.star().iter().all(|s| patch.color(*s).is_some()))
        .collect()
}

pub fn vertex_star_histogram(patch: &PatternPatch) -> BTreeMap<String, usize> {
    let mut h = BTreeMap::new();
    for v in interior_vertices(patch) {
        let star = VertexStar::of(patch, v).expect("interior vertex");
        *h.entry(star.class()).or_insert(0) += 1;
    }
    h
}

pub fn star_violations(patch: &PatternPatch) -> Vec<(Vertex, VertexStar)> {
    interior_vertices(patch)
        .into_iter()
        .filter_map(|v| {
            let s = VertexStar::of(patch, v)?;
            (!s.is_allowed()).then_some((v, s))
        })
        .collect()
}

/// Tile counts per class over the tiles whose three sides are coloured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileCounts {
    pub counts: [u64; 8],
}

impl TileCounts {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn densities(&self) -> Vec<BigRational> {
        let total = BigInt::from(self.total().max(1));
        self.counts.iter().map(|&c| BigRational::new(BigInt::from(c), total.clone())).collect()
    }
}

pub fn tile_counts(patch: &PatternPatch) -> TileCounts {
    let tiles = patch.region().unit_triangles();
    let classes: Vec<Option<TypeClass>> = tiles
        .par_iter()
        .map(|t| patch.tile_colors(t).map(|c| TriangleColoring::new(*t, c).class()))
        .collect();
    let mut counts = [0u64; 8];
    for c in classes.into_iter().flatten() {
        counts[c.index() - 1] += 1;
    }
    TileCounts { counts }
}

/// Frequency of each class, in matrix order.
pub fn empirical_densities(patch: &PatternPatch) -> Vec<BigRational> {
    tile_counts(patch).densities()
}

/// Frequency of each of the 16 translation types of decorated tiles.
pub fn decorated_densities(patch: &PatternPatch) -> BTreeMap<(Orientation, u8, Option<u8>), BigRational> {
    let tiles: Vec<DecoratedTile> = to_tiling(patch);
    let total = BigInt::from(tiles.len().max(1));
    let mut counts: BTreeMap<(Orientation, u8, Option<u8>), u64> = BTreeMap::new();
    for t in &tiles {
        *counts.entry(t.translation_type()).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|(k, c)| (k, BigRational::new(BigInt::from(c), total.clone())))
        .collect()
}

/// Nonzero lattice translations `p·u + q·w` of length at most `max_norm`.
pub fn candidate_translations(max_norm: i64) -> Vec<(i64, i64)> {
    let m2 = max_norm * max_norm;
    let mut out = Vec::new();
    for p in -2 * max_norm..=2 * max_norm {
        for q in -2 * max_norm..=2 * max_norm {
            if (p, q) != (0, 0) && p * p + p * q + q * q <= m2 {
                out.push((p, q));
            }
        }
    }
    out
}

fn check_window(patch: &PatternPatch, max_norm: i64) -> Result<(), AnalysisError> {
    let r = patch.region().inradius();
    if r < 2.0 * max_norm as f64 {
        return Err(AnalysisError::WindowTooSmall {
            needed: format!("inradius {}", 2 * max_norm),
            have: format!("inradius {r:.3}"),
        });
    }
    Ok(())
}

fn preserves(patch: &PatternPatch, layer: Option<u32>, (dp, dq): (i64, i64)) -> bool {
    patch
        .interior()
        .iter()
        .filter(|(s, _)| layer.is_none_or(|k| layer_of(**s) == k))
        .all(|(s, c)| {
            let moved = s.translate(dp, dq);
            match patch.color(moved) {
                None => true,
                Some(mc) => layer.is_none_or(|k| layer_of(moved) == k) && mc == *c,
            }
        })
}

/// Translations of length at most `max_norm` under which the colouring agrees
/// with itself wherever both copies are defined.
pub fn period_check(patch: &PatternPatch, max_norm: i64) -> Result<Vec<(i64, i64)>, AnalysisError> {
    check_window(patch, max_norm)?;
    Ok(candidate_translations(max_norm)
        .into_par_iter()
        .filter(|t| preserves(patch, None, *t))
        .collect())
}

/// As [`period_check`], looking only at the segments of layer `k`; a
/// translation must also carry layer `k` onto itself.
pub fn layer_period_check(
    patch: &PatternPatch,
    k: u32,
    max_norm: i64,
) -> Result<Vec<(i64, i64)>, AnalysisError> {
    check_window(patch, max_norm)?;
    Ok(candidate_translations(max_norm)
        .into_par_iter()
        .filter(|t| preserves(patch, Some(k), *t))
        .collect())
}

/// Whether every layer-`k` line alternates in blocks of exactly `2^(k-1)`
/// segments. Blocks cut off by the window edge may be shorter.
pub fn layer_block_check(patch: &PatternPatch, k: u32) -> Result<bool, AnalysisError> {
    let needed = 4 * (1i64 << k);
    if patch.region().span() < needed {
        return Err(AnalysisError::WindowTooSmall {
            needed: format!("span {needed}"),
            have: format!("span {}", patch.region().span()),
        });
    }
    let block = 1usize << (k - 1);
    let mut lines: BTreeMap<LineId, Vec<(i64, Color)>> = BTreeMap::new();
    for (s, c) in patch.interior() {
        if layer_of(*s) == k {
            lines.entry(line_of(*s)).or_default().push((s.position_on_line(), *c));
        }
    }
    Ok(lines.into_values().all(|mut segs| {
        segs.sort();
        segs.chunk_by(|a, b| b.0 == a.0 + 1).all(|run| blocks_ok(run, block))
    }))
}

fn blocks_ok(run: &[(i64, Color)], block: usize) -> bool {
    let blocks: Vec<usize> = run.chunk_by(|a, b| a.1 == b.1).map(<[_]>::len).collect();
    let n = blocks.len();
    blocks.iter().enumerate().all(|(i, &len)| {
        if i == 0 || i + 1 == n {
            len <= block
        } else {
            len == block
        }
    })
}

/// Flips one interior segment, for negative tests.
pub fn corrupt(patch: &PatternPatch, seg: SegmentId) -> PatternPatch {
    let mut out = patch.clone();
    if let Some(c) = patch.color(seg) {
        out.set_interior_color(seg, c.swap());
    }
    out
}
