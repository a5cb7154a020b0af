//! Folding patterns built by literally unfolding the paper triangle.
//!
//! Unfolding a side-`2^m` pattern into the side-`2^(m+1)` triangle keeps the
//! central part, mirrors it across each midsegment into the three side parts
//! with every crease colour swapped, and colours the midsegments themselves
//! as fresh creases. Each midsegment may use its own fold direction.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::folding::{FoldDirection, FoldingError};
use crate::lattice::{line_of, reflect_segment, LineId, SegmentId, TriangleId};
use crate::patch::{Color, PatternPatch, Region};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnfoldError {
    #[error("expected the centred triangle of side 2^{expected_k}, found region {found}")]
    OrientationMismatch { expected_k: u32, found: Region },
    #[error("cannot parse mixed fold {0:?}")]
    Parse(String),
}

/// Per-flap fold directions, indexed by the direction of the midsegment's
/// line (equivalently, the side opposite vertex 1, 2, 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MixedFold(pub [FoldDirection; 3]);

impl MixedFold {
    pub fn uniform(dir: FoldDirection) -> Self {
        Self([dir; 3])
    }

    pub fn is_uniform(&self) -> bool {
        self.0[0] == self.0[1] && self.0[1] == self.0[2]
    }

    pub fn flap(&self, d: u8) -> FoldDirection {
        self.0[usize::from(d - 1)]
    }

    /// All eight mixed folds.
    pub fn all() -> Vec<MixedFold> {
        let dirs = [FoldDirection::Up, FoldDirection::Down];
        let mut out = Vec::with_capacity(8);
        for a in dirs {
            for b in dirs {
                for c in dirs {
                    out.push(MixedFold([a, b, c]));
                }
            }
        }
        out
    }
}

impl FromStr for MixedFold {
    type Err = UnfoldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let dirs: Option<Vec<_>> = s.trim().chars().map(FoldDirection::from_char).collect();
        match dirs.as_deref() {
            Some(&[a, b, c]) => Ok(MixedFold([a, b, c])),
            Some(&[a]) => Ok(MixedFold([a; 3])),
            _ => Err(UnfoldError::Parse(s.to_string())),
        }
    }
}

impl fmt::Display for MixedFold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.0 {
            write!(f, "{}", d.as_char())?;
        }
        Ok(())
    }
}

/// Parses `"++-,+++"`; a bare `"+-"` word is read as uniform folds.
pub fn parse_mixed_word(s: &str) -> Result<Vec<MixedFold>, UnfoldError> {
    let s = s.trim();
    if s.contains(',') {
        s.split(',').map(str::parse).collect()
    } else {
        crate::folding::parse_word(s)
            .map(|w| w.into_iter().map(MixedFold::uniform).collect())
            .map_err(|_: FoldingError| UnfoldError::Parse(s.to_string()))
    }
}

/// Pattern of the empty fold sequence: `T0` with nothing creased yet.
pub fn seed_patch() -> PatternPatch {
    let t0 = TriangleId::origin();
    let boundary = t0.side_segments().into_iter().map(|s| (s, None)).collect();
    PatternPatch::from_parts_unchecked(Region::Triangle(t0), BTreeMap::new(), boundary)
}

/// One unfolding step: side `2^(index-1)` to side `2^index`.
pub fn unfold_once(
    patch: &PatternPatch,
    fold: MixedFold,
    index: u32,
) -> Result<PatternPatch, UnfoldError> {
    let m = index.checked_sub(1).ok_or(UnfoldError::OrientationMismatch {
        expected_k: 0,
        found: patch.region(),
    })?;
    let central = TriangleId::centered(m);
    if patch.region() != Region::Triangle(central) {
        return Err(UnfoldError::OrientationMismatch { expected_k: m, found: patch.region() });
    }
    let mirrors: Vec<LineId> = (1..=3)
        .map(|d| LineId::new(d, central.value(d)).expect("centred triangle sides are grid lines"))
        .collect();

    let mut interior: BTreeMap<SegmentId, Color> = patch.interior().clone();
    for mirror in &mirrors {
        for (&seg, &c) in patch.interior() {
            interior.insert(reflect_segment(seg, *mirror), c.swap());
        }
    }
    for &seg in patch.boundary().keys() {
        let d = line_of(seg).direction();
        interior.insert(seg, fold.flap(d).crease_color());
    }

    let region = Region::Triangle(TriangleId::centered(index));
    let (_, bnd) = region.segments();
    let boundary = bnd.into_iter().map(|s| (s, None)).collect();
    Ok(PatternPatch::from_parts_unchecked(region, interior, boundary))
}

/// Unfolds `folds[0]` first, then `folds[1]`, and so on.
pub fn unfold_pattern(folds: &[MixedFold]) -> PatternPatch {
    let mut patch = seed_patch();
    for (i, fold) in folds.iter().enumerate() {
        patch = unfold_once(&patch, *fold, i as u32 + 1).expect("patch stays centred");
    }
    patch
}

pub fn unfold_uniform(word: &[FoldDirection]) -> PatternPatch {
    let folds: Vec<MixedFold> = word.iter().map(|d| MixedFold::uniform(*d)).collect();
    unfold_pattern(&folds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::{color_of_segment, parse_word, patch, FoldingSequence};
    use crate::lattice::Orientation;

    #[test]
    fn first_unfold_creases_t0() {
        let up = unfold_once(&seed_patch(), MixedFold::uniform(FoldDirection::Up), 1).unwrap();
        assert_eq!(up.interior().len(), 3);
        assert!(up.interior().values().all(|c| *c == Color::Red));
        assert_eq!(up.region(), Region::Triangle(TriangleId::centered(1)));
        let down = unfold_once(&seed_patch(), MixedFold::uniform(FoldDirection::Down), 1).unwrap();
        assert!(down.interior().values().all(|c| *c == Color::Blue));
    }

    #[test]
    fn wrong_region_is_rejected() {
        let p = seed_patch();
        assert!(matches!(
            unfold_once(&p, MixedFold::uniform(FoldDirection::Up), 2),
            Err(UnfoldError::OrientationMismatch { .. })
        ));
    }

    #[test]
    fn orientation_alternates_and_centre_is_kept() {
        let word = parse_word("+-++-").unwrap();
        let mut p = seed_patch();
        for (i, d) in word.iter().enumerate() {
            let next = unfold_once(&p, MixedFold::uniform(*d), i as u32 + 1).unwrap();
            let Region::Triangle(t) = next.region() else { panic!() };
            let expect = if (i + 1) % 2 == 0 { Orientation::Positive } else { Orientation::Negative };
            assert_eq!(t.orientation(), expect);
            for (s, c) in p.interior() {
                assert_eq!(next.color(*s), Some(*c));
            }
            p = next;
        }
    }

    #[test]
    fn second_unfold_swaps_side_copies() {
        let s = FoldingSequence::Finite(parse_word("++").unwrap());
        let p = unfold_uniform(s.word());
        for (seg, c) in p.interior() {
            assert_eq!(color_of_segment(&s, *seg).unwrap(), *c);
        }
    }

    #[test]
    fn single_fold_equals_closed_form() {
        let s = FoldingSequence::Finite(parse_word("+").unwrap());
        assert!(unfold_uniform(s.word()).interior_eq(&patch(&s, 1).unwrap()));
    }

    #[test]
    fn mixed_parsing() {
        let w = parse_mixed_word("++-,+++").unwrap();
        assert_eq!(w.len(), 2);
        assert!(!w[0].is_uniform() && w[1].is_uniform());
        assert_eq!(w[0].to_string(), "++-");
        assert_eq!(parse_mixed_word("+-").unwrap().len(), 2);
        assert!(parse_mixed_word("++").unwrap().iter().all(|f| f.is_uniform()));
        assert!(parse_mixed_word("+x-").is_err());
        assert_eq!(MixedFold::all().len(), 8);
    }
}
