//! Exact integer model of the triangular grid.
//!
//! Points are described through three line functionals `f1, f2, f3` that sum
//! to zero. Grid vertices `v(p, q) = p·u + q·w + v0` have
//!
//! ```text
//! f1 = 1 - 3q,   f2 = 3p + 3q - 2,   f3 = 1 - 3p
//! ```
//!
//! so every grid line is `{f_d = v}` for an integer `v ≡ 1 (mod 3)`. The
//! reference unit triangle `T0` has vertices `v(0,0), v(1,0), v(0,1)`, its
//! three sides lie on `f_d = 1` and its centroid is the origin `O`.
//!
//! Segment midpoints are stored doubled so that everything stays integral.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("segment {0} does not border a triangle of its own layer")]
    MalformedLayer(SegmentId),
    #[error("invalid direction {0}, expected 1, 2 or 3")]
    InvalidDirection(u8),
    #[error("{0} is not a grid line value (must be 1 mod 3)")]
    NotAGridLine(i64),
}

/// 2-adic valuation; `nu2(0)` is reported as 63 so that zero sorts above
/// every real layer.
pub fn nu2(v: i64) -> u32 {
    if v == 0 {
        63
    } else {
        v.unsigned_abs().trailing_zeros()
    }
}

/// Grid line functionals of the vertex `v(p, q)`.
pub fn vertex_functionals(p: i64, q: i64) -> [i64; 3] {
    [1 - 3 * q, 3 * p + 3 * q - 2, 1 - 3 * p]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub p: i64,
    pub q: i64,
}

impl Vertex {
    pub const fn new(p: i64, q: i64) -> Self {
        Self { p, q }
    }

    pub fn functionals(self) -> [i64; 3] {
        vertex_functionals(self.p, self.q)
    }

    /// Inverse of [`Vertex::functionals`]. Returns `None` unless the triple
    /// is a grid vertex.
    pub fn from_functionals(f: [i64; 3]) -> Option<Self> {
        if f.iter().sum::<i64>() != 0 || f.iter().any(|x| x.rem_euclid(3) != 1) {
            return None;
        }
        Some(Self::new((1 - f[2]) / 3, (1 - f[0]) / 3))
    }

    /// Cartesian coordinates, for rendering only.
    pub fn to_cartesian(self) -> (f64, f64) {
        let s3 = 3f64.sqrt();
        (
            self.p as f64 + self.q as f64 / 2.0 - 0.5,
            s3 / 2.0 * self.q as f64 - s3 / 6.0,
        )
    }

    /// The six incident segments in counter-clockwise order, starting with
    /// the one pointing along `+u`.
    pub fn star(self) -> [SegmentId; 6] {
        let Vertex { p, q } = self;
        [
            SegmentId::new_unchecked(1, p, q),
            SegmentId::new_unchecked(3, p, q),
            SegmentId::new_unchecked(2, p - 1, q + 1),
            SegmentId::new_unchecked(1, p - 1, q),
            SegmentId::new_unchecked(3, p, q - 1),
            SegmentId::new_unchecked(2, p, q),
        ]
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v({}, {})", self.p, self.q)
    }
}

/// A unit edge of the grid.
///
/// `d = 1` joins `v(p,q), v(p+1,q)`; `d = 2` joins `v(p,q), v(p+1,q-1)`;
/// `d = 3` joins `v(p,q), v(p,q+1)`. The derived ordering is the `(d, p, q)`
/// lexicographic order used by the file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentId {
    d: u8,
    pub p: i64,
    pub q: i64,
}

impl SegmentId {
    pub fn new(d: u8, p: i64, q: i64) -> Result<Self, LatticeError> {
        if !(1..=3).contains(&d) {
            return Err(LatticeError::InvalidDirection(d));
        }
        Ok(Self { d, p, q })
    }

    pub(crate) const fn new_unchecked(d: u8, p: i64, q: i64) -> Self {
        Self { d, p, q }
    }

    pub fn direction(self) -> u8 {
        self.d
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        let a = Vertex::new(self.p, self.q);
        let b = match self.d {
            1 => Vertex::new(self.p + 1, self.q),
            2 => Vertex::new(self.p + 1, self.q - 1),
            _ => Vertex::new(self.p, self.q + 1),
        };
        (a, b)
    }

    /// Doubled functionals of the midpoint. The entry for the segment's own
    /// direction is `2v` (even), the other two are odd.
    pub fn midpoint2(self) -> [i64; 3] {
        let (a, b) = self.endpoints();
        let (fa, fb) = (a.functionals(), b.functionals());
        [fa[0] + fb[0], fa[1] + fb[1], fa[2] + fb[2]]
    }

    /// Recovers the segment from its doubled midpoint functionals.
    pub fn from_midpoint2(m: [i64; 3]) -> Option<Self> {
        if m.iter().sum::<i64>() != 0 {
            return None;
        }
        let evens: Vec<usize> = (0..3).filter(|&i| m[i].rem_euclid(2) == 0).collect();
        if evens.len() != 1 {
            return None;
        }
        let d = evens[0];
        if m[d].rem_euclid(6) != 2 {
            return None;
        }
        let seg = match d {
            0 => Self::new_unchecked(1, (-m[2] - 1).div_euclid(6), (2 - m[0]) / 6),
            1 => Self::new_unchecked(2, (-1 - m[2]).div_euclid(6), (5 - m[0]).div_euclid(6)),
            _ => Self::new_unchecked(3, (2 - m[2]) / 6, (-1 - m[0]).div_euclid(6)),
        };
        (seg.midpoint2() == m).then_some(seg)
    }

    pub fn translate(self, dp: i64, dq: i64) -> Self {
        Self::new_unchecked(self.d, self.p + dp, self.q + dq)
    }

    /// Position of the segment along its line; consecutive segments on a
    /// line differ by one.
    pub fn position_on_line(self) -> i64 {
        match self.d {
            3 => self.q,
            _ => self.p,
        }
    }

    /// The segment `steps` positions further along the same line.
    pub fn step_along(self, steps: i64) -> Self {
        match self.d {
            1 => self.translate(steps, 0),
            2 => self.translate(steps, -steps),
            _ => self.translate(0, steps),
        }
    }

    /// Squared distance of the midpoint from `O`, times 72.
    pub fn norm2_scaled(self) -> i64 {
        self.midpoint2().iter().map(|x| x * x).sum()
    }
}

impl fmt::Display for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {} {}]", self.d, self.p, self.q)
    }
}

/// A grid line `{f_d = v}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineId {
    d: u8,
    pub v: i64,
}

impl LineId {
    pub fn new(d: u8, v: i64) -> Result<Self, LatticeError> {
        if !(1..=3).contains(&d) {
            return Err(LatticeError::InvalidDirection(d));
        }
        if v.rem_euclid(3) != 1 {
            return Err(LatticeError::NotAGridLine(v));
        }
        Ok(Self { d, v })
    }

    pub fn direction(self) -> u8 {
        self.d
    }

    /// Layer index `k = ν₂(v) + 1`.
    pub fn layer(self) -> u32 {
        nu2(self.v) + 1
    }

    /// Image under the `(-2)`-dilation about `O`.
    pub fn dilate(self) -> Self {
        Self { d: self.d, v: -2 * self.v }
    }

    /// Mirror image of this line in `mirror`.
    pub fn reflect(self, mirror: LineId) -> Self {
        if self.d == mirror.d {
            Self { d: self.d, v: 2 * mirror.v - self.v }
        } else {
            Self { d: 6 - self.d - mirror.d, v: -self.v - mirror.v }
        }
    }
}

impl fmt::Display for LineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{} = {}", self.d, self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Self::Positive => Self::Negative,
            Self::Negative => Self::Positive,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Self::Positive => 1,
            Self::Negative => -1,
        }
    }
}

/// A grid triangle given by the values of its three side lines.
///
/// Positive triangles are `{f_i <= v_i}` with `Σv = 3s`, negative ones are
/// `{f_i >= v_i}` with `Σv = -3s`, where `s` is the side length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleId {
    values: [i64; 3],
}

impl TriangleId {
    pub fn new(values: [i64; 3]) -> Option<Self> {
        let sum: i64 = values.iter().sum();
        if sum == 0 || sum % 3 != 0 || values.iter().any(|v| v.rem_euclid(3) != 1) {
            return None;
        }
        Some(Self { values })
    }

    pub(crate) const fn new_unchecked(values: [i64; 3]) -> Self {
        Self { values }
    }

    /// The reference triangle `T0`.
    pub const fn origin() -> Self {
        Self { values: [1, 1, 1] }
    }

    /// Side-`2^k` triangle centred at `O`, i.e. the `(-2)^k`-dilation of `T0`.
    pub fn centered(k: u32) -> Self {
        let v = (-2i64).pow(k);
        Self { values: [v, v, v] }
    }

    /// Unit triangle anchored at `v(p,q)`: the positive one has vertices
    /// `v(p,q), v(p+1,q), v(p,q+1)`, the negative one `v(p+1,q), v(p,q+1),
    /// v(p+1,q+1)`.
    pub fn unit(p: i64, q: i64, orientation: Orientation) -> Self {
        match orientation {
            Orientation::Positive => Self { values: [1 - 3 * q, 3 * p + 3 * q + 1, 1 - 3 * p] },
            Orientation::Negative => Self { values: [-2 - 3 * q, 3 * p + 3 * q + 1, -2 - 3 * p] },
        }
    }

    pub fn values(&self) -> [i64; 3] {
        self.values
    }

    pub fn value(&self, slot: u8) -> i64 {
        self.values[usize::from(slot - 1)]
    }

    pub fn side(&self) -> i64 {
        self.values.iter().sum::<i64>().abs() / 3
    }

    pub fn orientation(&self) -> Orientation {
        if self.values.iter().sum::<i64>() > 0 {
            Orientation::Positive
        } else {
            Orientation::Negative
        }
    }

    pub fn is_unit(&self) -> bool {
        self.side() == 1
    }

    /// `(p, q, orientation)` for a unit triangle.
    pub fn anchor(&self) -> (i64, i64, Orientation) {
        let q = match self.orientation() {
            Orientation::Positive => (1 - self.values[0]) / 3,
            Orientation::Negative => (-2 - self.values[0]) / 3,
        };
        let p = match self.orientation() {
            Orientation::Positive => (1 - self.values[2]) / 3,
            Orientation::Negative => (-2 - self.values[2]) / 3,
        };
        (p, q, self.orientation())
    }

    /// Centroid functionals (always integral).
    pub fn centroid(&self) -> [i64; 3] {
        let shift = self.orientation().sign() * self.side();
        self.values.map(|v| v - shift)
    }

    /// Unit side segment lying on side `slot` (unit triangles only).
    pub fn side_segment(&self, slot: u8) -> SegmentId {
        debug_assert!(self.is_unit());
        let d = usize::from(slot - 1);
        let off = -3 * self.orientation().sign();
        let mut m = [0; 3];
        for (i, mi) in m.iter_mut().enumerate() {
            *mi = if i == d { 2 * self.values[i] } else { 2 * self.values[i] + off };
        }
        SegmentId::from_midpoint2(m).expect("unit triangle side is a grid segment")
    }

    pub fn side_segments(&self) -> [SegmentId; 3] {
        [self.side_segment(1), self.side_segment(2), self.side_segment(3)]
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        // vertex opposite side i has f_j = v_j for j != i
        let sign = self.orientation().sign();
        let s = self.side();
        let v = self.values;
        [0usize, 1, 2].map(|i| {
            let mut f = v;
            f[i] = v[i] - 3 * s * sign;
            Vertex::from_functionals(f).expect("triangle corner is a grid vertex")
        })
    }

    pub fn translate(&self, dp: i64, dq: i64) -> Self {
        let [a, b, c] = self.values;
        Self { values: [a - 3 * dq, b + 3 * dp + 3 * dq, c - 3 * dp] }
    }

    /// Mirror image in the line `mirror`; orientation flips.
    pub fn reflect(&self, mirror: LineId) -> Self {
        let mut out = [0; 3];
        for (i, &v) in self.values.iter().enumerate() {
            let line = LineId { d: i as u8 + 1, v };
            let img = line.reflect(mirror);
            out[usize::from(img.d - 1)] = img.v;
        }
        Self { values: out }
    }

    /// Whether the unit triangle `unit` lies inside this triangle.
    pub fn contains_unit(&self, unit: &TriangleId) -> bool {
        let (own, theirs) = (self.orientation(), unit.orientation());
        let uv = unit.values;
        (0..3).all(|i| match (own, theirs) {
            (Orientation::Positive, Orientation::Positive) => uv[i] <= self.values[i],
            (Orientation::Positive, Orientation::Negative) => uv[i] + 3 <= self.values[i],
            (Orientation::Negative, Orientation::Negative) => uv[i] >= self.values[i],
            (Orientation::Negative, Orientation::Positive) => uv[i] - 3 >= self.values[i],
        })
    }

    /// All unit triangles inside, in sorted order.
    pub fn unit_triangles(&self) -> Vec<TriangleId> {
        let verts = self.vertices();
        let (pmin, pmax) = (verts.iter().map(|v| v.p).min().unwrap(), verts.iter().map(|v| v.p).max().unwrap());
        let (qmin, qmax) = (verts.iter().map(|v| v.q).min().unwrap(), verts.iter().map(|v| v.q).max().unwrap());
        let mut out = Vec::new();
        for p in pmin - 1..=pmax {
            for q in qmin - 1..=qmax {
                for o in [Orientation::Positive, Orientation::Negative] {
                    let t = TriangleId::unit(p, q, o);
                    if self.contains_unit(&t) {
                        out.push(t);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for TriangleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.values;
        write!(f, "({a}, {b}, {c})")
    }
}

pub fn line_of(seg: SegmentId) -> LineId {
    let v = seg.endpoints().0.functionals()[usize::from(seg.d - 1)];
    LineId { d: seg.d, v }
}

pub fn layer_of(seg: SegmentId) -> u32 {
    line_of(seg).layer()
}

/// The positive and the negative unit triangle sharing `seg`.
pub fn adjacent_unit_triangles(seg: SegmentId) -> (TriangleId, TriangleId) {
    let m = seg.midpoint2();
    let d = usize::from(seg.d - 1);
    let mut pos = [0; 3];
    let mut neg = [0; 3];
    for i in 0..3 {
        if i == d {
            pos[i] = m[i] / 2;
            neg[i] = m[i] / 2;
        } else {
            pos[i] = (m[i] + 3) / 2;
            neg[i] = (m[i] - 3) / 2;
        }
    }
    (TriangleId::new_unchecked(pos), TriangleId::new_unchecked(neg))
}

/// The triangle of layer `k = layer_of(seg)` that has `seg` on its boundary.
pub fn layer_triangle(seg: SegmentId) -> Result<TriangleId, LatticeError> {
    let line = line_of(seg);
    let k = line.layer();
    let half = 1i64 << (k - 1);
    let step = 3 * (1i64 << k);
    let base = (-2i64).pow(k - 1);
    let m = seg.midpoint2();
    let d = usize::from(seg.d - 1);

    let mut lower = [0; 3];
    for j in 0..3 {
        lower[j] = if j == d {
            line.v
        } else {
            base + step * (m[j] - 2 * base).div_euclid(2 * step)
        };
    }
    let sigma: i64 = lower.iter().sum();
    if sigma == -3 * half {
        Ok(TriangleId::new_unchecked(lower))
    } else if sigma == -9 * half {
        let mut upper = lower;
        for (j, u) in upper.iter_mut().enumerate() {
            if j != d {
                *u += step;
            }
        }
        Ok(TriangleId::new_unchecked(upper))
    } else {
        Err(LatticeError::MalformedLayer(seg))
    }
}

pub fn layer_triangle_orientation(seg: SegmentId) -> Result<Orientation, LatticeError> {
    layer_triangle(seg).map(|t| t.orientation())
}

/// Mirror image of a segment in a grid line.
pub fn reflect_segment(seg: SegmentId, mirror: LineId) -> SegmentId {
    let m = seg.midpoint2();
    let md = usize::from(mirror.d - 1);
    let (j, k) = match md {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut out = [0; 3];
    out[md] = 4 * mirror.v - m[md];
    out[j] = -m[k] - 2 * mirror.v;
    out[k] = -m[j] - 2 * mirror.v;
    SegmentId::from_midpoint2(out).expect("reflection maps the grid onto itself")
}

pub fn reflect_vertex(v: Vertex, mirror: LineId) -> Vertex {
    let f = v.functionals();
    let md = usize::from(mirror.d - 1);
    let (j, k) = match md {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let mut out = [0; 3];
    out[md] = 2 * mirror.v - f[md];
    out[j] = -f[k] - mirror.v;
    out[k] = -f[j] - mirror.v;
    Vertex::from_functionals(out).expect("reflection maps the grid onto itself")
}

/// Unit triangles whose centroid lies within `radius` of `O`, sorted.
pub fn unit_triangles_in_ball(radius: i64) -> Vec<TriangleId> {
    let bound = 2 * radius + 2;
    let limit = 18 * radius * radius;
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            for o in [Orientation::Positive, Orientation::Negative] {
                let t = TriangleId::unit(p, q, o);
                let c = t.centroid();
                if c.iter().map(|x| x * x).sum::<i64>() <= limit {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}
