mod common;

use trifold::folding::{parse_word, patch, FoldingSequence};
use trifold::lattice::Orientation;
use trifold::patch::Color;
use trifold::substitution::*;
use trifold::unfold_sim::unfold_uniform;

use common::all_words;

const M_PLUS: [[u64; 8]; 8] = [
    [0, 0, 0, 0, 1, 1, 1, 1],
    [0, 0, 1, 3, 0, 0, 0, 0],
    [0, 2, 2, 0, 0, 0, 0, 0],
    [3, 1, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 3],
    [0, 0, 0, 0, 0, 2, 2, 0],
    [0, 0, 0, 0, 3, 1, 0, 0],
];

const M_MINUS: [[u64; 8]; 8] = [
    [0, 0, 1, 3, 0, 0, 0, 0],
    [0, 2, 2, 0, 0, 0, 0, 0],
    [3, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 1, 1],
    [0, 0, 0, 0, 0, 0, 1, 3],
    [0, 0, 0, 0, 0, 2, 2, 0],
    [0, 0, 0, 0, 3, 1, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0],
];

const M_P: [[u64; 8]; 8] = [
    [1, 1, 1, 1, 3, 3, 3, 3],
    [9, 5, 2, 0, 0, 0, 0, 0],
    [0, 4, 6, 6, 0, 0, 0, 0],
    [0, 0, 1, 3, 3, 3, 3, 3],
    [3, 3, 3, 3, 1, 1, 1, 1],
    [0, 0, 0, 0, 9, 5, 2, 0],
    [0, 0, 0, 0, 0, 4, 6, 6],
    [3, 3, 3, 3, 0, 0, 1, 3],
];

const M_P2: [[u64; 8]; 8] = [
    [28, 28, 28, 28, 36, 36, 36, 36],
    [54, 42, 31, 21, 27, 27, 27, 27],
    [36, 44, 50, 54, 18, 18, 18, 18],
    [18, 22, 27, 33, 39, 39, 39, 39],
    [36, 36, 36, 36, 28, 28, 28, 28],
    [27, 27, 27, 27, 54, 42, 31, 21],
    [18, 18, 18, 18, 36, 44, 50, 54],
    [39, 39, 39, 39, 18, 22, 27, 33],
];

#[test]
fn printed_matrices_are_reproduced() {
    let plus = substitution_matrix(SubRule::Plus);
    let minus = substitution_matrix(SubRule::Minus);
    assert_eq!(plus.0, M_PLUS);
    assert_eq!(minus.0, M_MINUS);
    assert_eq!((plus * plus).0, M_P);
    assert_eq!(word_count_matrix(&parse_word("++").unwrap()).0, M_P);
    let sq = plus * plus * plus * plus;
    assert_eq!(sq.0, M_P2);
    assert!(sq.is_positive());
    assert!(!(plus * plus).is_positive());
}

#[test]
fn every_rotation_and_placement_matches_the_columns() {
    for rule in [SubRule::Plus, SubRule::Minus] {
        let m = substitution_matrix(rule);
        for o in [Orientation::Positive, Orientation::Negative] {
            for bits in 0..8u8 {
                let colors = [0, 1, 2].map(|i| if bits >> i & 1 == 1 { Color::Red } else { Color::Blue });
                for (p, q) in [(0, 0), (3, -2), (-5, 7)] {
                    let t = TriangleColoring::new(trifold::lattice::TriangleId::unit(p, q, o), colors);
                    let mut counts = [0u64; 8];
                    for img in apply_rule_tile(rule, &t) {
                        assert_eq!(img.tri.orientation() == o, img.tri != apply_rule_tile(rule, &t)[3].tri);
                        counts[img.class().index() - 1] += 1;
                    }
                    assert_eq!(counts, m.column(t.class()), "{rule} on {colors:?} {o:?}");
                }
            }
        }
    }
}

#[test]
fn single_rule_examples() {
    let image = |rule, class: TypeClass| {
        let mut v: Vec<TypeClass> = apply_rule_tile(rule, &class.representative()).iter().map(|t| t.class()).collect();
        v.sort();
        v
    };
    use TypeClass::*;
    assert_eq!(image(SubRule::Plus, PosRRR), vec![PosBBB, PosBBB, PosBBB, NegBBB]);
    assert_eq!(image(SubRule::Minus, PosRRR), vec![PosRBB, PosRBB, PosRBB, NegRRR]);
    assert_eq!(image(SubRule::Plus, NegBBB), vec![PosRRR, NegRRR, NegRRR, NegRRR]);
    assert_eq!(image(SubRule::Plus, PosRRB), vec![PosRBB, PosRBB, PosBBB, NegBBB]);
}

#[test]
fn double_rule_preserves_outer_colours() {
    let seed = TriangleColoring::monochrome(Orientation::Positive, Color::Red);
    let p = compose(&[SubRule::Plus, SubRule::Plus], 1, seed).unwrap();
    assert!(p.boundary().values().all(|c| *c == Some(Color::Red)));
    let direct = patch(&FoldingSequence::Finite(parse_word("++").unwrap()), 2).unwrap();
    assert!(p.interior_eq(&direct));
}

#[test]
fn composition_matches_unfolding_for_short_words() {
    for len in 0..=5 {
        for word in all_words(len) {
            let sub = finite_by_substitution(&word);
            let unf = unfold_uniform(&word);
            assert!(sub.interior_eq(&unf), "word {:?}", word);
        }
    }
}

#[test]
fn periodic_composition_examples() {
    let all_up = FoldingSequence::Periodic(parse_word("+").unwrap());
    let p = periodic_by_substitution(&parse_word("+").unwrap(), 4).unwrap();
    assert!(p.interior_eq(&patch(&all_up, 4).unwrap()));
    // boundary colours are the genuine ones of the infinite pattern
    let wide = patch(&all_up, 5).unwrap();
    for (s, c) in p.boundary() {
        assert_eq!(Some(wide.color(*s).unwrap()), *c);
    }

    let pm = FoldingSequence::Periodic(parse_word("+-").unwrap());
    let seed = TriangleColoring::monochrome(Orientation::Positive, Color::Red);
    let q = compose(&[SubRule::Plus, SubRule::Minus], 2, seed).unwrap();
    assert!(q.interior_eq(&patch(&pm, 4).unwrap()));
    let q3 = periodic_by_substitution(&parse_word("+-").unwrap(), 3).unwrap();
    let wide = patch(&pm, 7).unwrap();
    assert!(q3.interior_eq(&patch(&pm, 6).unwrap()));
    for (s, c) in q3.boundary() {
        assert_eq!(Some(wide.color(*s).unwrap()), *c);
    }
}

#[test]
fn odd_length_uses_negative_seed() {
    let seq = FoldingSequence::Periodic(parse_word("+--").unwrap());
    let p = periodic_by_substitution(&parse_word("+--").unwrap(), 1).unwrap();
    assert!(p.interior_eq(&patch(&seq, 3).unwrap()));
    let wide = patch(&seq, 4).unwrap();
    for (s, c) in p.boundary() {
        assert_eq!(Some(wide.color(*s).unwrap()), *c);
    }
}
