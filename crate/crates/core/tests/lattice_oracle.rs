use trifold::lattice::*;
use trifold::patch::Region;

/// Layer-`k` triangles having `seg` on their boundary, found by enumerating
/// every placement of a side-`2^(k-1)` triangle along the segment's line.
fn brute_force_layer_triangles(seg: SegmentId) -> Vec<TriangleId> {
    let line = line_of(seg);
    let k = line.layer();
    let h = 1i64 << (k - 1);
    let d = usize::from(line.direction() - 1);
    let (j, l) = ((d + 1) % 3, (d + 2) % 3);
    let (pos, neg) = adjacent_unit_triangles(seg);
    let in_layer = |v: i64| v.rem_euclid(3) == 1 && nu2(v) + 1 == k;
    let mut found = Vec::new();
    // positive: {f <= w}, the positive unit neighbour inside
    let pv = pos.values();
    for wj in (pv[j]..=pv[j] + 3 * h).step_by(3) {
        let mut w = [0; 3];
        w[d] = line.v;
        w[j] = wj;
        w[l] = 3 * h - line.v - wj;
        if w[l] >= pv[l] && w.iter().all(|x| in_layer(*x)) {
            found.push(TriangleId::new(w).unwrap());
        }
    }
    let nv = neg.values();
    for wj in (nv[j] - 3 * h..=nv[j]).step_by(3) {
        let mut w = [0; 3];
        w[d] = line.v;
        w[j] = wj;
        w[l] = -3 * h - line.v - wj;
        if w[l] <= nv[l] && w.iter().all(|x| in_layer(*x)) {
            found.push(TriangleId::new(w).unwrap());
        }
    }
    found
}

#[test]
fn layer_triangles_match_brute_force() {
    let (int, bnd) = Region::Ball { radius: 64 }.segments();
    for seg in int.into_iter().chain(bnd) {
        let expect = brute_force_layer_triangles(seg);
        assert_eq!(expect.len(), 1, "{seg:?}");
        assert_eq!(layer_triangle(seg).unwrap(), expect[0], "{seg:?}");
    }
}

#[test]
fn layer_orientation_total_on_large_window() {
    let (int, bnd) = Region::Ball { radius: 128 }.segments();
    for seg in int.into_iter().chain(bnd) {
        assert!(layer_triangle_orientation(seg).is_ok(), "{seg:?}");
    }
}

#[test]
fn layer_examples_by_line() {
    let on = |v: i64| {
        // a direction-1 segment on f1 = v
        let q = (1 - v) / 3;
        SegmentId::new(1, 0, q).unwrap()
    };
    assert_eq!(layer_of(on(1)), 1);
    assert_eq!(layer_of(on(-2)), 2);
    assert_eq!(layer_of(on(4)), 3);
    assert_eq!(layer_triangle_orientation(on(1)).unwrap(), Orientation::Positive);
}

#[test]
fn dilation_raises_layer_by_one() {
    for d in 1..=3 {
        for n in -300..=300 {
            let line = LineId::new(d, 3 * n + 1).unwrap();
            assert_eq!(line.dilate().layer(), line.layer() + 1);
            assert_eq!(line.dilate().direction(), d);
        }
    }
}

#[test]
fn reflection_keeps_lower_layers() {
    for md in 1..=3 {
        for mirror_n in -40..=40 {
            let mirror = LineId::new(md, 3 * mirror_n + 1).unwrap();
            for d in 1..=3 {
                for n in -60..=60 {
                    let line = LineId::new(d, 3 * n + 1).unwrap();
                    if mirror.layer() > line.layer() {
                        assert_eq!(line.reflect(mirror).layer(), line.layer());
                    }
                }
            }
        }
    }
}

#[test]
fn reflected_line_value_formula() {
    // a direction-2 line of value 3m+1 reflected in f1 = V lands on f3 = -(3m+1) - V
    for v in [1i64, -2, 4, -8, 16] {
        let mirror = LineId::new(1, v).unwrap();
        for m in -5..=5 {
            let img = LineId::new(2, 3 * m + 1).unwrap().reflect(mirror);
            assert_eq!(img.direction(), 3);
            assert_eq!(img.v, -(3 * m + 1) - v);
            let same = LineId::new(1, 3 * m + 1).unwrap().reflect(mirror);
            assert_eq!(same.v, 2 * v - (3 * m + 1));
        }
    }
    let v00 = Vertex::new(0, 0);
    assert_eq!(reflect_vertex(v00, LineId::new(1, 1).unwrap()), v00);
}
