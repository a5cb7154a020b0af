//! Folding sequences and the closed-form colouring of the grid.
//!
//! Every grid line belongs to exactly one layer `k`, and the whole layer is
//! coloured by the `k`-th fold alone: its positive triangles are red when
//! `k` is odd and the fold is up, or `k` is even and the fold is down, and
//! blue otherwise; negative triangles get the opposite colour.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{
    adjacent_unit_triangles, layer_of, layer_triangle_orientation, LatticeError, Orientation,
    SegmentId, TriangleId,
};
pub use crate::patch::{Color, Membership, PatternPatch, Region};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoldingError {
    #[error("segment {0} lies outside the pattern of the finite sequence")]
    OutOfRegion(SegmentId),
    #[error("pattern of size 2^{needed} requested from a sequence of length {have}")]
    TooShort { needed: usize, have: usize },
    #[error("sequences differ in infinitely many positions")]
    IncompatibleSequences,
    #[error("cannot parse folding sequence {0:?}")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// One elementary folding: all three flaps through the upper (`+`) or the
/// lower (`-`) half-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoldDirection {
    Up,
    Down,
}

impl FoldDirection {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(Self::Up),
            '-' | '−' => Some(Self::Down),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Self::Up => '+',
            Self::Down => '-',
        }
    }

    /// Colour of a fresh crease made by this fold.
    pub fn crease_color(self) -> Color {
        match self {
            Self::Up => Color::Red,
            Self::Down => Color::Blue,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Self::Up => Self::Down,
            Self::Down => Self::Up,
        }
    }
}

/// Parses a bare word such as `"+-+"`.
pub fn parse_word(s: &str) -> Result<Vec<FoldDirection>, FoldingError> {
    let word: Option<Vec<_>> = s.trim().chars().map(FoldDirection::from_char).collect();
    match word {
        Some(w) if !w.is_empty() => Ok(w),
        _ => Err(FoldingError::Parse(s.to_string())),
    }
}

pub fn word_to_string(word: &[FoldDirection]) -> String {
    word.iter().map(|f| f.as_char()).collect()
}

/// Anything that can answer "what is the `k`-th fold" (1-based).
pub trait FoldSource {
    fn fold_at(&self, k: usize) -> Option<FoldDirection>;

    /// Number of folds, `None` for infinite sources.
    fn depth(&self) -> Option<usize>;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FoldingSequence {
    Finite(Vec<FoldDirection>),
    Periodic(Vec<FoldDirection>),
}

impl FoldingSequence {
    pub fn finite(word: Vec<FoldDirection>) -> Self {
        Self::Finite(word)
    }

    pub fn periodic(word: Vec<FoldDirection>) -> Self {
        assert!(!word.is_empty(), "periodic word must be nonempty");
        Self::Periodic(word)
    }

    pub fn word(&self) -> &[FoldDirection] {
        match self {
            Self::Finite(w) | Self::Periodic(w) => w,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Self::Periodic(_))
    }

    /// First `n` folds, if the sequence is that long.
    pub fn prefix(&self, n: usize) -> Option<Vec<FoldDirection>> {
        (1..=n).map(|k| self.fold_at(k)).collect()
    }
}

impl FoldSource for FoldingSequence {
    fn fold_at(&self, k: usize) -> Option<FoldDirection> {
        if k == 0 {
            return None;
        }
        match self {
            Self::Finite(w) => w.get(k - 1).copied(),
            Self::Periodic(w) => Some(w[(k - 1) % w.len()]),
        }
    }

    fn depth(&self) -> Option<usize> {
        match self {
            Self::Finite(w) => Some(w.len()),
            Self::Periodic(_) => None,
        }
    }
}

impl FromStr for FoldingSequence {
    type Err = FoldingError;

    /// `"+-+"` is finite, `"(+-)*"` is periodic.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(")*")) {
            return parse_word(inner)
                .map(Self::Periodic)
                .map_err(|_| FoldingError::Parse(s.to_string()));
        }
        parse_word(t).map(Self::Finite).map_err(|_| FoldingError::Parse(s.to_string()))
    }
}

impl fmt::Display for FoldingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(w) => f.write_str(&word_to_string(w)),
            Self::Periodic(w) => write!(f, "({})*", word_to_string(w)),
        }
    }
}

/// Adapter for sequences given programmatically, e.g. `FnSequence(|k| ...)`.
pub struct FnSequence<F>(pub F);

impl<F: Fn(usize) -> FoldDirection> FoldSource for FnSequence<F> {
    fn fold_at(&self, k: usize) -> Option<FoldDirection> {
        (k > 0).then(|| (self.0)(k))
    }

    fn depth(&self) -> Option<usize> {
        None
    }
}

/// The colour of layer `k` triangles of the given orientation when the
/// `k`-th fold is `fold`.
pub fn layer_color(k: u32, orientation: Orientation, fold: FoldDirection) -> Color {
    let positive_red = (k % 2 == 1) == (fold == FoldDirection::Up);
    if (orientation == Orientation::Positive) == positive_red {
        Color::Red
    } else {
        Color::Blue
    }
}

fn inside_finite_pattern(depth: usize, seg: SegmentId) -> bool {
    let big = TriangleId::centered(depth as u32);
    let (pos, neg) = adjacent_unit_triangles(seg);
    big.contains_unit(&pos) && big.contains_unit(&neg)
}

pub fn color_of_segment<S: FoldSource + ?Sized>(
    seq: &S,
    seg: SegmentId,
) -> Result<Color, FoldingError> {
    if let Some(n) = seq.depth() {
        if !inside_finite_pattern(n, seg) {
            return Err(FoldingError::OutOfRegion(seg));
        }
    }
    let k = layer_of(seg);
    let fold = seq.fold_at(k as usize).ok_or(FoldingError::OutOfRegion(seg))?;
    let orientation = layer_triangle_orientation(seg)?;
    Ok(layer_color(k, orientation, fold))
}

fn boundary_color<S: FoldSource + Sync + ?Sized>(
    seq: &S,
    seg: SegmentId,
) -> Result<Option<Color>, FoldingError> {
    match color_of_segment(seq, seg) {
        Ok(c) => Ok(Some(c)),
        Err(FoldingError::OutOfRegion(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Colours every segment of `region`. Interior segments must be colourable;
/// boundary segments are coloured when the sequence determines them.
pub fn patch_region<S: FoldSource + Sync + ?Sized>(
    seq: &S,
    region: Region,
) -> Result<PatternPatch, FoldingError> {
    let (int, bnd) = region.segments();
    let interior: Vec<(SegmentId, Color)> = int
        .par_iter()
        .map(|&s| color_of_segment(seq, s).map(|c| (s, c)))
        .collect::<Result<_, _>>()?;
    let boundary: Vec<(SegmentId, Option<Color>)> = bnd
        .par_iter()
        .map(|&s| boundary_color(seq, s).map(|c| (s, c)))
        .collect::<Result<_, _>>()?;
    Ok(PatternPatch::from_parts_unchecked(
        region,
        interior.into_iter().collect::<BTreeMap<_, _>>(),
        boundary.into_iter().collect::<BTreeMap<_, _>>(),
    ))
}

/// Pattern inside the side-`2^k` triangle centred at `O`.
pub fn patch<S: FoldSource + Sync + ?Sized>(seq: &S, k: u32) -> Result<PatternPatch, FoldingError> {
    if let Some(n) = seq.depth() {
        if k as usize > n {
            return Err(FoldingError::TooShort { needed: k as usize, have: n });
        }
    }
    patch_region(seq, Region::Triangle(TriangleId::centered(k)))
}

/// Pattern on the unit triangles within `radius` of `O`.
pub fn patch_ball<S: FoldSource + Sync + ?Sized>(
    seq: &S,
    radius: i64,
) -> Result<PatternPatch, FoldingError> {
    patch_region(seq, Region::Ball { radius })
}

/// Whether two sequences can only differ in finitely many positions.
pub fn compatible(s: &FoldingSequence, r: &FoldingSequence) -> bool {
    match (s, r) {
        (FoldingSequence::Periodic(a), FoldingSequence::Periodic(b)) => {
            let n = num_integer::lcm(a.len(), b.len());
            (1..=n).all(|k| s.fold_at(k) == r.fold_at(k))
        }
        _ => true,
    }
}

/// Turns a pattern generated by `from` into the pattern of `to` on the same
/// region by flipping every layer whose fold differs.
pub fn recolor(
    patch: &PatternPatch,
    from: &FoldingSequence,
    to: &FoldingSequence,
) -> Result<PatternPatch, FoldingError> {
    if !compatible(from, to) {
        return Err(FoldingError::IncompatibleSequences);
    }
    let flip = |seg: SegmentId, c: Color| -> Option<Color> {
        let k = layer_of(seg) as usize;
        match (from.fold_at(k), to.fold_at(k)) {
            (Some(a), Some(b)) if a == b => Some(c),
            (Some(_), Some(_)) => Some(c.swap()),
            _ => None,
        }
    };
    let mut interior = BTreeMap::new();
    for (&seg, &c) in patch.interior() {
        if let Some(n) = to.depth() {
            if !inside_finite_pattern(n, seg) {
                return Err(FoldingError::OutOfRegion(seg));
            }
        }
        interior.insert(seg, flip(seg, c).ok_or(FoldingError::OutOfRegion(seg))?);
    }
    let boundary = patch
        .boundary()
        .iter()
        .map(|(&seg, &c)| {
            let inside = to.depth().is_none_or(|n| inside_finite_pattern(n, seg));
            (seg, c.and_then(|c| flip(seg, c)).filter(|_| inside))
        })
        .collect();
    Ok(PatternPatch::from_parts_unchecked(patch.region(), interior, boundary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{line_of, SegmentId};

    fn seq(s: &str) -> FoldingSequence {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(seq("+-+"), FoldingSequence::Finite(parse_word("+-+").unwrap()));
        assert_eq!(seq("(+-)*").to_string(), "(+-)*");
        assert!(seq("(+-)*").is_periodic());
        assert!("".parse::<FoldingSequence>().is_err());
        assert!("(+x)*".parse::<FoldingSequence>().is_err());
        assert!("()*".parse::<FoldingSequence>().is_err());
    }

    #[test]
    fn t0_sides_follow_first_fold() {
        let t0 = TriangleId::origin();
        for side in t0.side_segments() {
            assert_eq!(color_of_segment(&seq("(+)*"), side).unwrap(), Color::Red);
            assert_eq!(color_of_segment(&seq("(-+)*"), side).unwrap(), Color::Blue);
        }
    }

    #[test]
    fn negative_layer_two_triangles_red_when_second_fold_up() {
        let s = seq("(+)*");
        let mut seen = 0;
        for p in -8..8 {
            for q in -8..8 {
                for d in 1..=3 {
                    let seg = SegmentId::new(d, p, q).unwrap();
                    if layer_of(seg) == 2
                        && layer_triangle_orientation(seg).unwrap() == Orientation::Negative
                    {
                        assert_eq!(color_of_segment(&s, seg).unwrap(), Color::Red);
                        seen += 1;
                    }
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn finite_sequences_reject_outside_segments() {
        let s = seq("+");
        let far = SegmentId::new(1, 10, 10).unwrap();
        assert!(matches!(color_of_segment(&s, far), Err(FoldingError::OutOfRegion(_))));
        assert!(patch(&s, 2).is_err());
    }

    #[test]
    fn patch_k1_has_three_red_creases() {
        let p = patch(&seq("+"), 1).unwrap();
        assert_eq!(p.interior().len(), 3);
        assert!(p.interior().values().all(|c| *c == Color::Red));
        assert!(p.boundary().values().all(|c| c.is_none()));
    }

    #[test]
    fn patch_k0_is_empty() {
        let p = patch(&seq("(+)*"), 0).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.boundary().len(), 3);
        assert!(p.boundary().values().all(|c| *c == Some(Color::Red)));
    }

    #[test]
    fn central_patterns_are_stable() {
        let long = seq("+-++-+");
        for n in 0..6u32 {
            let small = patch(&FoldingSequence::Finite(long.prefix(n as usize).unwrap()), n).unwrap();
            let big = patch(&long, 6).unwrap();
            let restricted = big.restrict(small.region()).unwrap();
            assert_eq!(restricted.interior(), small.interior());
        }
    }

    #[test]
    fn lines_alternate_in_blocks() {
        // blocks of length b alternate, so shifting by b flips and by 2b keeps
        let p = patch_ball(&seq("(+--)*"), 40).unwrap();
        let mut checked = 0;
        for (&seg, &c) in p.interior() {
            let block = 1i64 << (layer_of(seg) - 1);
            if let Some(c1) = p.color(seg.step_along(block)) {
                assert_eq!(line_of(seg.step_along(block)), line_of(seg));
                assert_eq!(c1, c.swap());
                checked += 1;
            }
            if let Some(c2) = p.color(seg.step_along(2 * block)) {
                assert_eq!(c2, c);
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn recolor_flips_exactly_the_changed_layer() {
        let s = seq("(+)*");
        let r = seq("-+++++++");
        let p = patch(&s, 4).unwrap();
        let q = recolor(&p, &s, &r).unwrap();
        for (seg, c) in p.interior() {
            let flipped = q.color(*seg).unwrap() != *c;
            assert_eq!(flipped, layer_of(*seg) == 1);
        }
        assert_eq!(q.interior(), patch(&r, 4).unwrap().interior());
        assert_eq!(recolor(&p, &s, &s).unwrap(), p);
    }

    #[test]
    fn recolor_rejects_different_tails() {
        let p = patch(&seq("(+)*"), 2).unwrap();
        assert_eq!(
            recolor(&p, &seq("(+)*"), &seq("(+-)*")),
            Err(FoldingError::IncompatibleSequences)
        );
        assert!(recolor(&p, &seq("(+-)*"), &seq("(+-+-)*")).is_ok());
    }

    #[test]
    fn closure_sequences_match_periodic() {
        let s = seq("(+--)*");
        let f = FnSequence(|k: usize| if k % 3 == 1 { FoldDirection::Up } else { FoldDirection::Down });
        assert_eq!(patch(&s, 5).unwrap(), patch(&f, 5).unwrap());
    }
}
