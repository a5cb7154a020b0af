//! Finite windows of segment colourings.

use std::collections::BTreeMap;
use std::fmt;

use crate::lattice::{
    adjacent_unit_triangles, layer_of, unit_triangles_in_ball, Orientation, SegmentId, TriangleId,
};

/// Crease colour: red marks a valley, blue a peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn swap(self) -> Self {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn is_red(self) -> bool {
        self == Color::Red
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// Where a segment sits relative to a region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// A union of unit triangles: either a grid triangle or the unit triangles
/// whose centroids lie in a ball about `O`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Triangle(TriangleId),
    Ball { radius: i64 },
}

impl Region {
    pub fn contains_unit(&self, t: &TriangleId) -> bool {
        match self {
            Region::Triangle(big) => big.contains_unit(t),
            Region::Ball { radius } => {
                let c = t.centroid();
                c.iter().map(|x| x * x).sum::<i64>() <= 18 * radius * radius
            }
        }
    }

    pub fn unit_triangles(&self) -> Vec<TriangleId> {
        match self {
            Region::Triangle(big) => big.unit_triangles(),
            Region::Ball { radius } => unit_triangles_in_ball(*radius),
        }
    }

    pub fn classify(&self, seg: SegmentId) -> Membership {
        let (pos, neg) = adjacent_unit_triangles(seg);
        match (self.contains_unit(&pos), self.contains_unit(&neg)) {
            (true, true) => Membership::Interior,
            (false, false) => Membership::Outside,
            _ => Membership::Boundary,
        }
    }

    /// Interior and boundary segments, each sorted.
    pub fn segments(&self) -> (Vec<SegmentId>, Vec<SegmentId>) {
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        for t in self.unit_triangles() {
            for seg in t.side_segments() {
                let (pos, neg) = adjacent_unit_triangles(seg);
                let other = if pos == t { neg } else { pos };
                if self.contains_unit(&other) {
                    if t.orientation() == Orientation::Positive {
                        interior.push(seg);
                    }
                } else {
                    boundary.push(seg);
                }
            }
        }
        interior.sort_unstable();
        boundary.sort_unstable();
        (interior, boundary)
    }

    /// Radius of the largest ball about the region's centre that it contains.
    pub fn inradius(&self) -> f64 {
        match self {
            Region::Triangle(t) => t.side() as f64 / (2.0 * 3f64.sqrt()),
            Region::Ball { radius } => *radius as f64,
        }
    }

    /// Extent along a grid line through the centre.
    pub fn span(&self) -> i64 {
        match self {
            Region::Triangle(t) => t.side(),
            Region::Ball { radius } => 2 * radius,
        }
    }

    pub fn translate(&self, dp: i64, dq: i64) -> Option<Self> {
        match self {
            Region::Triangle(t) => Some(Region::Triangle(t.translate(dp, dq))),
            Region::Ball { .. } if dp == 0 && dq == 0 => Some(*self),
            Region::Ball { .. } => None,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Triangle(t) => {
                let [a, b, c] = t.values();
                write!(f, "triangle {a} {b} {c}")
            }
            Region::Ball { radius } => write!(f, "ball {radius}"),
        }
    }
}

/// A coloured window. Interior segments always carry a colour; boundary
/// segments may or may not, and never take part in equality checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPatch {
    region: Region,
    interior: BTreeMap<SegmentId, Color>,
    boundary: BTreeMap<SegmentId, Option<Color>>,
}

impl PatternPatch {
    /// Builds a patch from explicit maps. Fails if the maps do not cover the
    /// region's interior and boundary exactly.
    pub fn from_parts(
        region: Region,
        interior: BTreeMap<SegmentId, Color>,
        boundary: BTreeMap<SegmentId, Option<Color>>,
    ) -> Result<Self, String> {
        let (int, bnd) = region.segments();
        if int.len() != interior.len() || int.iter().any(|s| !interior.contains_key(s)) {
            return Err("interior segments do not match the region".into());
        }
        if bnd.len() != boundary.len() || bnd.iter().any(|s| !boundary.contains_key(s)) {
            return Err("boundary segments do not match the region".into());
        }
        Ok(Self { region, interior, boundary })
    }

    pub(crate) fn from_parts_unchecked(
        region: Region,
        interior: BTreeMap<SegmentId, Color>,
        boundary: BTreeMap<SegmentId, Option<Color>>,
    ) -> Self {
        Self { region, interior, boundary }
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn interior(&self) -> &BTreeMap<SegmentId, Color> {
        &self.interior
    }

    pub fn boundary(&self) -> &BTreeMap<SegmentId, Option<Color>> {
        &self.boundary
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    /// Colour of an interior segment.
    pub fn color(&self, seg: SegmentId) -> Option<Color> {
        self.interior.get(&seg).copied()
    }

    /// Colour of an interior segment or a coloured boundary segment.
    pub fn known_color(&self, seg: SegmentId) -> Option<Color> {
        self.interior
            .get(&seg)
            .copied()
            .or_else(|| self.boundary.get(&seg).copied().flatten())
    }

    pub fn set_interior_color(&mut self, seg: SegmentId, color: Color) -> bool {
        match self.interior.get_mut(&seg) {
            Some(c) => {
                *c = color;
                true
            }
            None => false,
        }
    }

    /// Side colours of a unit triangle in slot order, if all are known.
    pub fn tile_colors(&self, t: &TriangleId) -> Option<[Color; 3]> {
        let [a, b, c] = t.side_segments();
        Some([self.known_color(a)?, self.known_color(b)?, self.known_color(c)?])
    }

    /// Interior segments shared with `other` whose colours differ.
    pub fn interior_mismatches(&self, other: &PatternPatch) -> Vec<SegmentId> {
        self.interior
            .iter()
            .filter(|(s, c)| other.interior.get(s).is_some_and(|o| o != *c))
            .map(|(s, _)| *s)
            .collect()
    }

    /// Same region and identical interior colouring.
    pub fn interior_eq(&self, other: &PatternPatch) -> bool {
        self.region == other.region && self.interior == other.interior
    }

    /// Interior colours restricted to the interior segments of `region`.
    pub fn restrict(&self, region: Region) -> Option<PatternPatch> {
        let (int, bnd) = region.segments();
        let mut interior = BTreeMap::new();
        for s in int {
            interior.insert(s, self.known_color(s)?);
        }
        let boundary = bnd.into_iter().map(|s| (s, self.known_color(s))).collect();
        Some(Self { region, interior, boundary })
    }

    /// The sub-patch made of the segments of one layer only. The region is
    /// kept, so the result is not a full colouring of it.
    pub fn layer_only(&self, k: u32) -> PatternPatch {
        let interior = self
            .interior
            .iter()
            .filter(|(s, _)| layer_of(**s) == k)
            .map(|(s, c)| (*s, *c))
            .collect();
        let boundary = self
            .boundary
            .iter()
            .filter(|(s, _)| layer_of(**s) == k)
            .map(|(s, c)| (*s, *c))
            .collect();
        Self { region: self.region, interior, boundary }
    }

    /// Lattice translation by `p·u + q·w`. Balls can only be translated by zero.
    pub fn translate(&self, dp: i64, dq: i64) -> Option<PatternPatch> {
        let region = self.region.translate(dp, dq)?;
        Some(Self {
            region,
            interior: self.interior.iter().map(|(s, c)| (s.translate(dp, dq), *c)).collect(),
            boundary: self.boundary.iter().map(|(s, c)| (s.translate(dp, dq), *c)).collect(),
        })
    }
}
