//! Folding tilings: unit triangles labelled by their number of red sides,
//! optionally decorated at the minority side, and the local rule that
//! recovers the segment colouring from the undecorated labels.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{adjacent_unit_triangles, Orientation, SegmentId, TriangleId, Vertex};
use crate::patch::{Color, PatternPatch};

/// Default erosion margin for [`reconstruct`].
pub const DEFAULT_MARGIN: i64 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("labels contradict each other near {0:?}")]
    Inconsistent(SegmentId),
    #[error("window too small: no segment survives erosion by {margin}")]
    Undecidable { margin: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedTile {
    pub tri: TriangleId,
    pub red_count: u8,
    /// Slot of the side whose colour occurs once, for mixed tiles.
    pub decoration: Option<u8>,
}

impl DecoratedTile {
    pub fn from_colors(tri: TriangleId, colors: [Color; 3]) -> Self {
        let red_count = colors.iter().filter(|c| c.is_red()).count() as u8;
        let decoration = match red_count {
            1 => colors.iter().position(|c| c.is_red()),
            2 => colors.iter().position(|c| !c.is_red()),
            _ => None,
        }
        .map(|i| i as u8 + 1);
        Self { tri, red_count, decoration }
    }

    /// Orientation, red count and decoration: equal up to translation.
    pub fn translation_type(&self) -> (Orientation, u8, Option<u8>) {
        (self.tri.orientation(), self.red_count, self.decoration)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UndecoratedTile {
    pub tri: TriangleId,
    pub red_count: u8,
}

impl UndecoratedTile {
    pub fn translation_type(&self) -> (Orientation, u8) {
        (self.tri.orientation(), self.red_count)
    }
}

/// Every unit triangle of the patch whose three sides are known, sorted.
pub fn to_tiling(patch: &PatternPatch) -> Vec<DecoratedTile> {
    patch
        .region()
        .unit_triangles()
        .into_iter()
        .filter_map(|t| patch.tile_colors(&t).map(|c| DecoratedTile::from_colors(t, c)))
        .collect()
}

pub fn strip_decoration(tiles: &[DecoratedTile]) -> Vec<UndecoratedTile> {
    tiles.iter().map(|t| UndecoratedTile { tri: t.tri, red_count: t.red_count }).collect()
}

/// Segment colours recovered on the eroded window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub margin: i64,
    pub colors: BTreeMap<SegmentId, Color>,
}

impl Reconstruction {
    /// Segments where `patch` knows a different colour, or none at all.
    pub fn mismatches(&self, patch: &PatternPatch) -> Vec<SegmentId> {
        self.colors
            .iter()
            .filter(|(s, c)| patch.known_color(**s) != Some(**c))
            .map(|(s, _)| *s)
            .collect()
    }

    pub fn agrees_with(&self, patch: &PatternPatch) -> bool {
        self.mismatches(patch).is_empty()
    }
}

struct Known {
    colors: HashMap<SegmentId, Color>,
}

impl Known {
    fn set(&mut self, seg: SegmentId, c: Color) -> Result<(), TilingError> {
        match self.colors.insert(seg, c) {
            Some(prev) if prev != c => Err(TilingError::Inconsistent(seg)),
            _ => Ok(()),
        }
    }

    fn get(&self, seg: SegmentId) -> Option<Color> {
        self.colors.get(&seg).copied()
    }
}

/// The star tile between spokes `a` and `b`, and its outer side.
fn wedge(a: SegmentId, b: SegmentId) -> (TriangleId, SegmentId) {
    let (pos, neg) = adjacent_unit_triangles(a);
    let t = if pos.side_segments().contains(&b) { pos } else { neg };
    let outer = t.side_segments().into_iter().find(|s| *s != a && *s != b).expect("three sides");
    (t, outer)
}

/// Whether `seg` lies in the eroded window: every unit triangle whose centroid
/// is within `margin` of its midpoint is present.
fn survives_erosion(seg: SegmentId, margin: i64, present: &HashSet<TriangleId>) -> bool {
    let m = seg.midpoint2();
    let limit = 72 * margin * margin;
    let (pos, _) = adjacent_unit_triangles(seg);
    let (p0, q0, _) = pos.anchor();
    let r = margin + 2;
    for p in p0 - r..=p0 + r {
        for q in q0 - r..=q0 + r {
            for o in [Orientation::Positive, Orientation::Negative] {
                let t = TriangleId::unit(p, q, o);
                let c = t.centroid();
                let d2: i64 = (0..3).map(|i| (2 * c[i] - m[i]).pow(2)).sum();
                if d2 <= limit && !present.contains(&t) {
                    return false;
                }
            }
        }
    }
    true
}

/// Spoke colours around one hexagon centre, or `None` if the labels leave
/// them undetermined.
fn solve_hexagon(
    centre: Vertex,
    labels: &HashMap<TriangleId, u8>,
    known: &Known,
) -> Result<Option<[(SegmentId, Color); 6]>, TilingError> {
    let star = centre.star();
    // r[i] = number of red spokes among star[i], star[i+1]
    let mut r = [0u8; 6];
    for i in 0..6 {
        let (t, outer) = wedge(star[i], star[(i + 1) % 6]);
        let (Some(&count), Some(oc)) = (labels.get(&t), known.get(outer)) else {
            return Ok(None);
        };
        let outer_red = u8::from(oc.is_red());
        r[i] = count.checked_sub(outer_red).filter(|x| *x <= 2).ok_or(TilingError::Inconsistent(outer))?;
    }
    let Some(start) = (0..6).find(|&i| r[i] != 1) else {
        // all wedges mixed: two alternating solutions, never the case in a folding tiling
        return Err(TilingError::Inconsistent(star[0]));
    };
    let mut red = [false; 6];
    red[start] = r[start] == 2;
    for step in 0..6 {
        let i = (start + step) % 6;
        let next = (i + 1) % 6;
        let want = r[i] as i32 - i32::from(red[i]);
        if !(0..=1).contains(&want) {
            return Err(TilingError::Inconsistent(star[i]));
        }
        if step == 5 {
            if red[next] != (want == 1) {
                return Err(TilingError::Inconsistent(star[next]));
            }
        } else {
            red[next] = want == 1;
        }
    }
    let mut out = [(star[0], Color::Red); 6];
    for i in 0..6 {
        out[i] = (star[i], if red[i] { Color::Red } else { Color::Blue });
    }
    Ok(Some(out))
}

/// Recovers segment colours from red-side counts alone.
///
/// Monochrome tiles give their sides outright. Layer-1 segments are then the
/// known segments sitting in an alternating run of three along their line.
/// Around every vertex ringed by six layer-1 segments the six spokes follow
/// from the six red counts. The result is checked against every label and
/// returned on the segments that survive erosion by `margin`.
pub fn reconstruct(tiles: &[UndecoratedTile], margin: i64) -> Result<Reconstruction, TilingError> {
    let labels: HashMap<TriangleId, u8> = tiles.iter().map(|t| (t.tri, t.red_count)).collect();
    let present: HashSet<TriangleId> = labels.keys().copied().collect();
    let mut known = Known { colors: HashMap::new() };

    let mut sorted: Vec<&UndecoratedTile> = tiles.iter().collect();
    sorted.sort();
    for t in &sorted {
        match t.red_count {
            0 | 3 => {
                let c = if t.red_count == 3 { Color::Red } else { Color::Blue };
                for s in t.tri.side_segments() {
                    known.set(s, c)?;
                }
            }
            1 | 2 => {}
            _ => return Err(TilingError::Inconsistent(t.tri.side_segment(1))),
        }
    }

    let layer_one: HashSet<SegmentId> = known
        .colors
        .iter()
        .filter(|(s, c)| {
            let before = known.get(s.step_along(-1));
            let after = known.get(s.step_along(1));
            before == Some(c.swap()) && after == Some(c.swap())
        })
        .map(|(s, _)| *s)
        .collect();

    let mut centres: Vec<Vertex> = Vec::new();
    let mut seen = HashSet::new();
    for t in &sorted {
        for v in t.tri.vertices() {
            if !seen.insert(v) {
                continue;
            }
            let star = v.star();
            let ringed = (0..6).all(|i| {
                let (t, outer) = wedge(star[i], star[(i + 1) % 6]);
                present.contains(&t) && layer_one.contains(&outer)
            });
            if ringed {
                centres.push(v);
            }
        }
    }
    centres.sort();

    let solved: Vec<Option<[(SegmentId, Color); 6]>> = centres
        .par_iter()
        .map(|c| solve_hexagon(*c, &labels, &known))
        .collect::<Result<_, _>>()?;
    for spokes in solved.into_iter().flatten() {
        for (s, c) in spokes {
            known.set(s, c)?;
        }
    }

    for t in &sorted {
        let sides = t.tri.side_segments();
        if let (Some(a), Some(b), Some(c)) = (known.get(sides[0]), known.get(sides[1]), known.get(sides[2])) {
            let reds = [a, b, c].iter().filter(|x| x.is_red()).count() as u8;
            if reds != t.red_count {
                return Err(TilingError::Inconsistent(sides[0]));
            }
        }
    }

    let mut eroded: Vec<SegmentId> = sorted
        .iter()
        .flat_map(|t| t.tri.side_segments())
        .filter(|s| {
            let (pos, neg) = adjacent_unit_triangles(*s);
            present.contains(&pos) && present.contains(&neg)
        })
        .collect();
    eroded.sort();
    eroded.dedup();
    eroded.retain(|s| survives_erosion(*s, margin, &present));
    if eroded.is_empty() {
        return Err(TilingError::Undecidable { margin });
    }
    let mut colors = BTreeMap::new();
    for s in eroded {
        // a valid folding tiling determines every segment this far inside
        let c = known.get(s).ok_or(TilingError::Inconsistent(s))?;
        colors.insert(s, c);
    }
    Ok(Reconstruction { margin, colors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::{parse_word, patch, patch_ball, FoldingSequence};
    use crate::patch::Region;

    #[test]
    fn decoration_marks_the_minority_side() {
        let t = TriangleId::origin();
        use Color::*;
        assert_eq!(DecoratedTile::from_colors(t, [Red, Red, Red]).decoration, None);
        assert_eq!(DecoratedTile::from_colors(t, [Blue, Blue, Blue]).decoration, None);
        let d = DecoratedTile::from_colors(t, [Red, Blue, Red]);
        assert_eq!((d.red_count, d.decoration), (2, Some(2)));
        let e = DecoratedTile::from_colors(t, [Blue, Blue, Red]);
        assert_eq!((e.red_count, e.decoration), (1, Some(3)));
        let s = strip_decoration(&[d, e]);
        assert_eq!(s[0].red_count, 2);
        assert_eq!(s[1].tri, t);
    }

    #[test]
    fn round_trip_all_up_triangle() {
        let seq = FoldingSequence::Periodic(parse_word("+").unwrap());
        let p = patch(&seq, 5).unwrap();
        let rec = reconstruct(&strip_decoration(&to_tiling(&p)), DEFAULT_MARGIN).unwrap();
        assert!(!rec.colors.is_empty());
        assert!(rec.agrees_with(&p));
    }

    #[test]
    fn round_trip_alternating_ball() {
        let seq = FoldingSequence::Periodic(parse_word("+-").unwrap());
        let p = patch_ball(&seq, 24).unwrap();
        let rec = reconstruct(&strip_decoration(&to_tiling(&p)), DEFAULT_MARGIN).unwrap();
        assert!(rec.agrees_with(&p));
        let (int, _) = Region::Ball { radius: 24 - DEFAULT_MARGIN - 1 }.segments();
        assert!(int.iter().all(|s| rec.colors.contains_key(s)));
    }

    #[test]
    fn corrupted_label_is_inconsistent() {
        let seq = FoldingSequence::Periodic(parse_word("+").unwrap());
        let p = patch_ball(&seq, 16).unwrap();
        let mut tiles = strip_decoration(&to_tiling(&p));
        let i = tiles.iter().position(|t| t.tri == TriangleId::origin()).unwrap();
        tiles[i].red_count = (tiles[i].red_count + 1) % 4;
        assert!(matches!(reconstruct(&tiles, DEFAULT_MARGIN), Err(TilingError::Inconsistent(_))));
    }

    #[test]
    fn tiny_window_is_undecidable() {
        let seq = FoldingSequence::Periodic(parse_word("+").unwrap());
        let p = patch(&seq, 1).unwrap();
        assert_eq!(
            reconstruct(&strip_decoration(&to_tiling(&p)), DEFAULT_MARGIN),
            Err(TilingError::Undecidable { margin: DEFAULT_MARGIN })
        );
    }
}
