#![allow(dead_code)]

use proptest::prelude::*;
use trifold::folding::FoldDirection;

/// All `2^len` words over `{+, -}`.
pub fn all_words(len: usize) -> Vec<Vec<FoldDirection>> {
    (0..1u32 << len)
        .map(|bits| {
            (0..len)
                .map(|i| if bits >> i & 1 == 0 { FoldDirection::Up } else { FoldDirection::Down })
                .collect()
        })
        .collect()
}

pub fn word_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<FoldDirection>> {
    prop::collection::vec(prop::bool::ANY, min..=max).prop_map(|b| {
        b.into_iter().map(|x| if x { FoldDirection::Up } else { FoldDirection::Down }).collect()
    })
}
