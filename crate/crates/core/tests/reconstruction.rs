mod common;

use proptest::prelude::*;
use trifold::folding::{parse_word, patch, patch_ball, FoldingSequence};
use trifold::tiling::*;

use common::word_strategy;

fn round_trip(p: &trifold::patch::PatternPatch) -> Result<Reconstruction, TilingError> {
    reconstruct(&strip_decoration(&to_tiling(p)), DEFAULT_MARGIN)
}

#[test]
fn all_up_side_32() {
    let p = patch(&FoldingSequence::Periodic(parse_word("+").unwrap()), 5).unwrap();
    let rec = round_trip(&p).unwrap();
    assert!(rec.agrees_with(&p));
    assert!(rec.colors.len() > 300);
}

#[test]
fn translation_type_counts() {
    let p = patch_ball(&FoldingSequence::Periodic(parse_word("+").unwrap()), 24).unwrap();
    let tiles = to_tiling(&p);
    let decorated: std::collections::BTreeSet<_> = tiles.iter().map(|t| t.translation_type()).collect();
    let plain: std::collections::BTreeSet<_> =
        strip_decoration(&tiles).iter().map(|t| t.translation_type()).collect();
    assert_eq!(decorated.len(), 16);
    assert_eq!(plain.len(), 8);
}

#[test]
fn every_label_corruption_near_the_centre_is_caught() {
    let p = patch_ball(&FoldingSequence::Periodic(parse_word("+-").unwrap()), 16).unwrap();
    let tiles = strip_decoration(&to_tiling(&p));
    let near: Vec<usize> = (0..tiles.len())
        .filter(|&i| tiles[i].tri.centroid().iter().map(|x| x * x).sum::<i64>() <= 18 * 16)
        .collect();
    assert!(near.len() > 20);
    for i in near {
        for delta in 1..4u8 {
            let mut bad = tiles.clone();
            bad[i].red_count = (bad[i].red_count + delta) % 4;
            assert!(
                matches!(reconstruct(&bad, DEFAULT_MARGIN), Err(TilingError::Inconsistent(_))),
                "tile {:?} +{delta}",
                bad[i].tri
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn round_trip_for_short_words(word in word_strategy(1, 5), radius in 12i64..=32) {
        let seq = FoldingSequence::Periodic(word);
        let p = patch_ball(&seq, radius).unwrap();
        let rec = round_trip(&p).unwrap();
        prop_assert!(rec.agrees_with(&p));
    }
}
