mod common;

use proptest::prelude::*;
use trifold::analysis::star_violations;
use trifold::folding::{color_of_segment, parse_word, patch, patch_ball, recolor, FoldDirection, FoldingSequence, FnSequence};
use trifold::patch::Region;
use trifold::substitution::finite_by_substitution;
use trifold::unfold_sim::{parse_mixed_word, unfold_pattern, unfold_uniform, MixedFold};

use common::{all_words, word_strategy};

#[test]
fn three_generators_agree_up_to_length_six() {
    for len in 0..=6 {
        for word in all_words(len) {
            let closed = patch(&FoldingSequence::Finite(word.clone()), len as u32).unwrap();
            let unfolded = unfold_uniform(&word);
            let substituted = finite_by_substitution(&word);
            assert!(closed.interior_eq(&unfolded), "closed vs unfold {word:?}");
            assert!(closed.interior_eq(&substituted), "closed vs subst {word:?}");
        }
    }
}

#[test]
fn three_up_folds_side_eight() {
    let s = FoldingSequence::Finite(parse_word("+++").unwrap());
    let p = patch(&s, 3).unwrap();
    let (int, bnd) = Region::Triangle(trifold::lattice::TriangleId::centered(3)).segments();
    assert_eq!(p.interior().len(), int.len());
    assert_eq!(p.boundary().len(), bnd.len());
    assert!(p.interior_eq(&unfold_uniform(s.word())));
}

#[test]
fn mixed_folds_break_the_star_rule() {
    let mut witnesses = 0;
    for a in MixedFold::all() {
        for b in MixedFold::all() {
            let p = unfold_pattern(&[a, b]);
            if !star_violations(&p).is_empty() {
                witnesses += 1;
                assert!(!(a.is_uniform() && b.is_uniform()));
            }
        }
    }
    assert!(witnesses > 0);
    let p = unfold_pattern(&parse_mixed_word("++-,+++").unwrap());
    assert!(!star_violations(&p).is_empty());
}

#[test]
fn uniform_words_keep_the_star_rule() {
    for len in 1..=5 {
        for word in all_words(len) {
            let p = patch(&FoldingSequence::Finite(word.clone()), len as u32).unwrap();
            assert!(star_violations(&p).is_empty(), "{word:?}");
        }
    }
}

#[test]
fn callback_sequences_work_in_balls() {
    // Thue-Morse folds: a_k = parity of the bits of k
    let tm = FnSequence(|k: usize| if k.count_ones().is_multiple_of(2) { FoldDirection::Up } else { FoldDirection::Down });
    let p = patch_ball(&tm, 12).unwrap();
    assert!(star_violations(&p).is_empty());
}

fn agreeing_after_three() -> impl Strategy<Value = (FoldingSequence, FoldingSequence)> {
    (word_strategy(3, 3), word_strategy(3, 3), word_strategy(1, 4)).prop_map(|(a, b, tail)| {
        // two periodic sequences with prefixes a, b and a common tail, both
        // written as finite words long enough for radius-16 windows
        let mut s = a;
        let mut r = b;
        for i in 0..8 {
            s.push(tail[i % tail.len()]);
            r.push(tail[i % tail.len()]);
        }
        (FoldingSequence::Finite(s), FoldingSequence::Finite(r))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn central_patterns_are_prefixes(word in word_strategy(2, 6), n in 0usize..6) {
        let n = n.min(word.len());
        let long = patch(&FoldingSequence::Finite(word.clone()), word.len() as u32).unwrap();
        let short = patch(&FoldingSequence::Finite(word[..n].to_vec()), n as u32).unwrap();
        for (s, c) in short.interior() {
            prop_assert_eq!(long.color(*s), Some(*c));
        }
    }

    #[test]
    fn recolor_matches_direct_generation((s, r) in agreeing_after_three()) {
        let p = patch_ball(&s, 16).unwrap();
        let q = recolor(&p, &s, &r).unwrap();
        let direct = patch_ball(&r, 16).unwrap();
        prop_assert!(q.interior_eq(&direct));
        for (seg, c) in q.interior() {
            prop_assert_eq!(color_of_segment(&r, *seg).unwrap(), *c);
        }
    }
}
