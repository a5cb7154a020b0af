//! The tile substitutions `F+` and `F-`, their action on whole patches, and
//! the 8×8 count matrices.
//!
//! A rule replaces a coloured unit triangle by the four unit triangles of its
//! 2-inflation. The three corner tiles keep the parent's orientation and carry
//! its side colours swapped; the medial tile has the opposite orientation and
//! is monochrome. Inflation is `x ↦ 2x` about the vertex `v(0,0)`, which keeps
//! every image on the grid; `compose` translates the final result back so it
//! is centred at `O`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use rayon::prelude::*;
use thiserror::Error;

use crate::folding::{layer_color, FoldDirection};
use crate::lattice::{Orientation, SegmentId, TriangleId};
use crate::patch::{Color, PatternPatch, Region};

/// Functional values of `v(0,0)`, the inflation centre.
const INFLATION_CENTRE: [i64; 3] = [1, -2, 1];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("adjacent tiles disagree on segment {0:?}")]
    SeamConflict(SegmentId),
    #[error("tile {0} has a side without a colour")]
    MissingColor(TriangleId),
    #[error("only triangular patches can be substituted")]
    NotATriangle,
    #[error("a {seed:?} seed cannot produce the centred triangle of side 2^{length}")]
    OrientationMismatch { seed: Orientation, length: usize },
}

/// A unit triangle with its side colours indexed by side-value slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleColoring {
    pub tri: TriangleId,
    pub colors: [Color; 3],
}

impl TriangleColoring {
    pub fn new(tri: TriangleId, colors: [Color; 3]) -> Self {
        Self { tri, colors }
    }

    /// A tile of the given orientation anchored at `v(0,0)`.
    pub fn at_origin(orientation: Orientation, colors: [Color; 3]) -> Self {
        Self { tri: TriangleId::unit(0, 0, orientation), colors }
    }

    pub fn monochrome(orientation: Orientation, color: Color) -> Self {
        Self::at_origin(orientation, [color; 3])
    }

    pub fn orientation(&self) -> Orientation {
        self.tri.orientation()
    }

    pub fn red_count(&self) -> u8 {
        self.colors.iter().filter(|c| c.is_red()).count() as u8
    }

    pub fn class(&self) -> TypeClass {
        TypeClass::of(self.orientation(), self.red_count())
    }
}

/// Tile types up to rotation, in the column order of the count matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeClass {
    PosRRR = 1,
    PosRRB,
    PosRBB,
    PosBBB,
    NegBBB,
    NegRBB,
    NegRRB,
    NegRRR,
}

impl TypeClass {
    pub const ALL: [TypeClass; 8] = [
        TypeClass::PosRRR,
        TypeClass::PosRRB,
        TypeClass::PosRBB,
        TypeClass::PosBBB,
        TypeClass::NegBBB,
        TypeClass::NegRBB,
        TypeClass::NegRRB,
        TypeClass::NegRRR,
    ];

    pub fn of(orientation: Orientation, red_count: u8) -> Self {
        assert!(red_count <= 3);
        let i = match orientation {
            Orientation::Positive => 3 - red_count,
            Orientation::Negative => 4 + red_count,
        };
        Self::ALL[usize::from(i)]
    }

    /// 1-based position in the matrix order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        i.checked_sub(1).and_then(|j| Self::ALL.get(j).copied())
    }

    pub fn orientation(self) -> Orientation {
        if self.index() <= 4 {
            Orientation::Positive
        } else {
            Orientation::Negative
        }
    }

    pub fn red_count(self) -> u8 {
        match self.index() {
            i @ 1..=4 => 4 - i as u8,
            i => i as u8 - 5,
        }
    }

    /// A tile of this class with its red sides in the lowest slots.
    pub fn representative(self) -> TriangleColoring {
        let r = usize::from(self.red_count());
        let colors = [0, 1, 2].map(|i| if i < r { Color::Red } else { Color::Blue });
        TriangleColoring::at_origin(self.orientation(), colors)
    }

    pub fn name(self) -> &'static str {
        ["P-RRR", "P-RRB", "P-RBB", "P-BBB", "N-BBB", "N-RBB", "N-RRB", "N-RRR"][self.index() - 1]
    }
}

impl fmt::Display for TypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubRule {
    Plus,
    Minus,
}

impl SubRule {
    pub fn medial_color(self, medial: Orientation) -> Color {
        match (self, medial) {
            (SubRule::Plus, Orientation::Negative) | (SubRule::Minus, Orientation::Positive) => {
                Color::Blue
            }
            _ => Color::Red,
        }
    }
}

impl From<FoldDirection> for SubRule {
    fn from(d: FoldDirection) -> Self {
        match d {
            FoldDirection::Up => SubRule::Plus,
            FoldDirection::Down => SubRule::Minus,
        }
    }
}

impl fmt::Display for SubRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubRule::Plus => "F+",
            SubRule::Minus => "F-",
        })
    }
}

/// `M[i][j]`: number of class-`i` tiles in the image of a class-`j` tile
/// (0-based storage, classes in matrix order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountMatrix(pub [[u64; 8]; 8]);

impl CountMatrix {
    pub fn identity() -> Self {
        let mut m = [[0; 8]; 8];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        Self(m)
    }

    pub fn get(&self, row: TypeClass, col: TypeClass) -> u64 {
        self.0[row.index() - 1][col.index() - 1]
    }

    pub fn column(&self, col: TypeClass) -> [u64; 8] {
        let j = col.index() - 1;
        self.0.map(|row| row[j])
    }

    pub fn column_sums(&self) -> [u64; 8] {
        let mut s = [0; 8];
        for row in &self.0 {
            for (j, x) in row.iter().enumerate() {
                s[j] += x;
            }
        }
        s
    }

    pub fn checked_mul(&self, rhs: &CountMatrix) -> Option<CountMatrix> {
        let mut out = [[0u64; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                let mut acc = 0u64;
                for k in 0..8 {
                    acc = acc.checked_add(self.0[i][k].checked_mul(rhs.0[k][j])?)?;
                }
                out[i][j] = acc;
            }
        }
        Some(CountMatrix(out))
    }

    pub fn checked_pow(&self, e: u32) -> Option<CountMatrix> {
        (0..e).try_fold(CountMatrix::identity(), |acc, _| acc.checked_mul(self))
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().flatten().all(|&x| x > 0)
    }
}

impl Mul for CountMatrix {
    type Output = CountMatrix;

    fn mul(self, rhs: CountMatrix) -> CountMatrix {
        self.checked_mul(&rhs).expect("count matrix overflow")
    }
}

impl fmt::Display for CountMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.0.iter().flatten().map(|x| x.to_string().len()).max().unwrap_or(1);
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Image of `t` under `x ↦ 2x` about `v(0,0)`.
pub fn inflate(t: &TriangleId) -> TriangleId {
    let v = t.values();
    TriangleId::new([0, 1, 2].map(|i| 2 * v[i] - INFLATION_CENTRE[i]))
        .expect("inflation maps grid triangles to grid triangles")
}

/// The four tiles replacing `t`: corners opposite slots 1, 2, 3, then the medial.
pub fn apply_rule_tile(rule: SubRule, t: &TriangleColoring) -> [TriangleColoring; 4] {
    let big = inflate(&t.tri);
    let w = big.values();
    let shift = 3 * t.orientation().sign();
    let medial_tri = TriangleId::new(w.map(|x| x - shift)).expect("medial is a unit triangle");
    let medial = rule.medial_color(medial_tri.orientation());
    let corner = |c: usize| {
        let mut values = w;
        values[c] -= shift;
        let mut colors = t.colors.map(Color::swap);
        colors[c] = medial;
        TriangleColoring::new(TriangleId::new(values).expect("corner is a unit triangle"), colors)
    };
    [corner(0), corner(1), corner(2), TriangleColoring::new(medial_tri, [medial; 3])]
}

pub fn substitution_matrix(rule: SubRule) -> CountMatrix {
    let mut m = [[0u64; 8]; 8];
    for class in TypeClass::ALL {
        for tile in apply_rule_tile(rule, &class.representative()) {
            m[tile.class().index() - 1][class.index() - 1] += 1;
        }
    }
    CountMatrix(m)
}

/// `M_{a1} M_{a2} ... M_{ak}`.
pub fn word_count_matrix(word: &[FoldDirection]) -> CountMatrix {
    word.iter()
        .map(|d| substitution_matrix(SubRule::from(*d)))
        .fold(CountMatrix::identity(), |acc, m| acc * m)
}

/// Tiles of a patch with all side colours, boundary included.
pub fn patch_tiles(patch: &PatternPatch) -> Result<Vec<TriangleColoring>, SubstitutionError> {
    patch
        .region()
        .unit_triangles()
        .into_iter()
        .map(|t| {
            patch
                .tile_colors(&t)
                .map(|c| TriangleColoring::new(t, c))
                .ok_or(SubstitutionError::MissingColor(t))
        })
        .collect()
}

fn assemble(region: Region, tiles: &[TriangleColoring]) -> Result<PatternPatch, SubstitutionError> {
    let mut colors: BTreeMap<SegmentId, Color> = BTreeMap::new();
    for t in tiles {
        for (seg, c) in t.tri.side_segments().into_iter().zip(t.colors) {
            if let Some(prev) = colors.insert(seg, c) {
                if prev != c {
                    return Err(SubstitutionError::SeamConflict(seg));
                }
            }
        }
    }
    let (int, bnd) = region.segments();
    let interior = int.into_iter().map(|s| (s, colors[&s])).collect();
    let boundary = bnd.into_iter().map(|s| (s, Some(colors[&s]))).collect();
    Ok(PatternPatch::from_parts_unchecked(region, interior, boundary))
}

/// Applies `rule` to every tile of a fully coloured triangular patch.
pub fn apply_rule_patch(rule: SubRule, patch: &PatternPatch) -> Result<PatternPatch, SubstitutionError> {
    let Region::Triangle(big) = patch.region() else {
        return Err(SubstitutionError::NotATriangle);
    };
    let tiles = patch_tiles(patch)?;
    let images: Vec<TriangleColoring> =
        tiles.par_iter().flat_map_iter(|t| apply_rule_tile(rule, t)).collect();
    assemble(Region::Triangle(inflate(&big)), &images)
}

fn tile_patch(t: &TriangleColoring) -> PatternPatch {
    assemble(Region::Triangle(t.tri), std::slice::from_ref(t)).expect("a single tile has no seams")
}

/// Translation `(dp, dq)` carrying `from` onto `to`, if one exists.
fn translation_between(from: &TriangleId, to: &TriangleId) -> Option<(i64, i64)> {
    let (a, b) = (from.values(), to.values());
    if from.orientation() != to.orientation() || from.side() != to.side() {
        return None;
    }
    let dq = (a[0] - b[0]) / 3;
    let dp = (a[2] - b[2]) / 3;
    (from.translate(dp, dq) == *to).then_some((dp, dq))
}

/// `(F_{a1} ∘ ... ∘ F_{ak})^n (seed)`, moved to the centred triangle of side
/// `2^(kn)`. The last rule of the word is applied first.
pub fn compose(
    word: &[SubRule],
    n: usize,
    seed: TriangleColoring,
) -> Result<PatternPatch, SubstitutionError> {
    let length = word.len() * n;
    let target = TriangleId::centered(length as u32);
    if seed.orientation() != target.orientation() {
        return Err(SubstitutionError::OrientationMismatch { seed: seed.orientation(), length });
    }
    let mut patch = tile_patch(&seed);
    for _ in 0..n {
        for rule in word.iter().rev() {
            patch = apply_rule_patch(*rule, &patch)?;
        }
    }
    let Region::Triangle(placed) = patch.region() else { unreachable!() };
    let (dp, dq) = translation_between(&placed, &target).expect("same orientation and side");
    Ok(patch.translate(dp, dq).expect("triangles translate"))
}

/// Seed whose outer sides end up with the colour the folding pattern gives
/// them when fold `length + 1` is `next`.
pub fn natural_seed(length: usize, next: FoldDirection) -> TriangleColoring {
    let orientation = TriangleId::centered(length as u32).orientation();
    let outer = layer_color(length as u32 + 1, orientation, next);
    let color = if length.is_multiple_of(2) { outer } else { outer.swap() };
    TriangleColoring::monochrome(orientation, color)
}

/// Pattern of the side-`2^(|word|·n)` centred triangle for the periodic
/// sequence `word*`, built by substitution.
pub fn periodic_by_substitution(
    word: &[FoldDirection],
    n: usize,
) -> Result<PatternPatch, SubstitutionError> {
    let rules: Vec<SubRule> = word.iter().map(|d| SubRule::from(*d)).collect();
    let next = word.first().copied().unwrap_or(FoldDirection::Up);
    compose(&rules, n, natural_seed(word.len() * n, next))
}

/// Pattern of a finite word by substitution; the boundary colour assumes an
/// upward fold follows the word.
pub fn finite_by_substitution(word: &[FoldDirection]) -> PatternPatch {
    let rules: Vec<SubRule> = word.iter().map(|d| SubRule::from(*d)).collect();
    compose(&rules, 1, natural_seed(word.len(), FoldDirection::Up)).expect("seed orientation matches")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_order_round_trips() {
        for (i, c) in TypeClass::ALL.iter().enumerate() {
            assert_eq!(c.index(), i + 1);
            assert_eq!(TypeClass::from_index(i + 1), Some(*c));
            assert_eq!(TypeClass::of(c.orientation(), c.red_count()), *c);
            assert_eq!(c.representative().class(), *c);
        }
        assert_eq!(TypeClass::from_index(0), None);
        assert_eq!(TypeClass::from_index(9), None);
    }

    #[test]
    fn tile_images_tile_the_inflation() {
        for class in TypeClass::ALL {
            let t = class.representative();
            let big = inflate(&t.tri);
            let mut units = big.unit_triangles();
            let mut got: Vec<TriangleId> =
                apply_rule_tile(SubRule::Plus, &t).iter().map(|x| x.tri).collect();
            units.sort();
            got.sort();
            assert_eq!(units, got);
            assert_eq!(big.orientation(), t.orientation());
        }
    }

    #[test]
    fn single_rule_swaps_outer_colours() {
        let seed = TriangleColoring::at_origin(Orientation::Positive, [Color::Red, Color::Blue, Color::Red]);
        let p = compose(&[SubRule::Plus, SubRule::Minus], 1, seed).unwrap();
        let once = apply_rule_patch(SubRule::Plus, &tile_patch(&seed)).unwrap();
        let Region::Triangle(big) = once.region() else { panic!() };
        for t in big.unit_triangles() {
            let cols = once.tile_colors(&t).unwrap();
            for slot in 0..3 {
                let seg = t.side_segments()[slot];
                if once.boundary().contains_key(&seg) {
                    assert_eq!(cols[slot], seed.colors[slot].swap());
                }
            }
        }
        assert_eq!(p.boundary().len(), 12);
    }

    #[test]
    fn compose_zero_is_seed() {
        let seed = TriangleColoring::monochrome(Orientation::Positive, Color::Red);
        let p = compose(&[SubRule::Plus], 0, seed).unwrap();
        assert_eq!(p.region(), Region::Triangle(TriangleId::origin()));
        assert!(p.is_empty());
        assert!(p.boundary().values().all(|c| *c == Some(Color::Red)));
        let bad = TriangleColoring::monochrome(Orientation::Negative, Color::Red);
        assert!(matches!(
            compose(&[SubRule::Plus], 2, bad),
            Err(SubstitutionError::OrientationMismatch { .. })
        ));
    }

    #[test]
    fn count_matrix_helpers() {
        let m = substitution_matrix(SubRule::Plus);
        assert_eq!(m.column_sums(), [4; 8]);
        assert_eq!(m.checked_pow(0), Some(CountMatrix::identity()));
        assert_eq!(m.checked_pow(2), Some(m * m));
        assert!(m.checked_pow(40).is_none());
        assert_eq!(m.get(TypeClass::PosBBB, TypeClass::PosRRR), 3);
    }
}
