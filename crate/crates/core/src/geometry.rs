//! Points of `F_q^m`, the standard bilinear form, and integral distances.
//!
//! Squared distance is `d²(u, v) = ⟨u - v, u - v⟩` with `⟨u, v⟩ = Σ u_i v_i`.
//! A pair is *integral* when `d²` is a square in `F_q` (zero included): the
//! predicate `Δ`. Points also carry a canonical index `Σ c_i q^(i-1)` (first
//! coordinate least significant), the vertex numbering used by the graph and
//! search modules.
//!
//! The circle `H_γ = {(a, b) : a² + b² = γ}` is produced both by the explicit
//! parametrization `(a, b) = ((τ²-1)/(τ²+1)·γ̂, 2τ/(τ²+1)·γ̂)` and by brute
//! enumeration; the two routes are tested against each other exhaustively.

use crate::ffield::{FieldElement, FieldError, FieldSpec, QuadClass};
use std::fmt;

/// Errors from geometric operations and point parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    /// Operands live in different fields.
    FieldMismatch,
    /// Operands have different dimensions.
    DimensionMismatch { left: usize, right: usize },
    /// Cross products are defined here only for dimension 3.
    CrossRequiresDim3(usize),
    /// A point or point-set string could not be parsed.
    Parse(String),
    /// An underlying field error (bad element encoding, bad descriptor, …).
    Field(FieldError),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::FieldMismatch => write!(f, "points belong to different fields"),
            GeometryError::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            GeometryError::CrossRequiresDim3(m) => {
                write!(f, "cross product needs dimension 3, got {m}")
            }
            GeometryError::Parse(s) => write!(f, "cannot parse point data: {s}"),
            GeometryError::Field(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for GeometryError {}

impl From<FieldError> for GeometryError {
    fn from(e: FieldError) -> Self {
        GeometryError::Field(e)
    }
}

/// Norm class of a point: which of the zero-orbit pieces `P⁺`, `P₀`, `P⁻`
/// it belongs to, with the origin kept apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormClass {
    Origin,
    /// `⟨u, u⟩` a nonzero square.
    Plus,
    /// `⟨u, u⟩ = 0`, `u ≠ 0` (isotropic).
    Zero,
    /// `⟨u, u⟩` a non-square.
    Minus,
}

impl fmt::Display for NormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormClass::Origin => write!(f, "origin"),
            NormClass::Plus => write!(f, "P+"),
            NormClass::Zero => write!(f, "P0"),
            NormClass::Minus => write!(f, "P-"),
        }
    }
}

/// A point of `F_q^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    field: FieldSpec,
    coords: Vec<FieldElement>,
}

impl Point {
    pub fn new(field: FieldSpec, coords: Vec<FieldElement>) -> Self {
        assert!(!coords.is_empty(), "points need at least one coordinate");
        Point { field, coords }
    }

    /// Build from raw encodings, validating each against the field.
    pub fn from_vals(field: &FieldSpec, vals: &[u64]) -> Result<Self, GeometryError> {
        let coords = vals
            .iter()
            .map(|&v| field.el(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Point::new(field.clone(), coords))
    }

    pub fn zero(field: &FieldSpec, m: usize) -> Self {
        Point::new(field.clone(), vec![field.zero(); m])
    }

    /// The `i`-th standard unit vector (0-based).
    pub fn unit(field: &FieldSpec, m: usize, i: usize) -> Self {
        let mut coords = vec![field.zero(); m];
        coords[i] = field.one();
        Point::new(field.clone(), coords)
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    /// Canonical index `Σ c_i q^(i-1)`, first coordinate least significant.
    pub fn index(&self) -> u64 {
        let q = self.field.q();
        self.coords.iter().rev().fold(0, |acc, c| acc * q + c.val())
    }

    /// Inverse of [`Point::index`].
    pub fn from_index(field: &FieldSpec, m: usize, mut idx: u64) -> Self {
        let q = field.q();
        let mut coords = Vec::with_capacity(m);
        for _ in 0..m {
            coords.push(FieldElement::new_unchecked(idx % q));
            idx /= q;
        }
        Point::new(field.clone(), coords)
    }

    fn check_compatible(&self, other: &Point) -> Result<(), GeometryError> {
        if self.field != other.field {
            return Err(GeometryError::FieldMismatch);
        }
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// The standard bilinear form `⟨u, v⟩ = Σ u_i v_i`.
    pub fn inner(&self, other: &Point) -> Result<FieldElement, GeometryError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut acc = f.zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            acc = f.add(acc, f.mul(*a, *b));
        }
        Ok(acc)
    }

    /// Squared distance `⟨u - v, u - v⟩`.
    pub fn sq_dist(&self, other: &Point) -> Result<FieldElement, GeometryError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut acc = f.zero();
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let d = f.sub(*a, *b);
            acc = f.add(acc, f.mul(d, d));
        }
        Ok(acc)
    }

    /// The integrality predicate `Δ`: true iff `d²(u, v)` is a square
    /// (zero counts as integral).
    pub fn is_integral(&self, other: &Point) -> Result<bool, GeometryError> {
        Ok(self.field.quad_class(self.sq_dist(other)?) != QuadClass::NonSquare)
    }

    pub fn add(&self, other: &Point) -> Result<Point, GeometryError> {
        self.check_compatible(other)?;
        let f = &self.field;
        Ok(Point::new(
            f.clone(),
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f.add(*a, *b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Point) -> Result<Point, GeometryError> {
        self.check_compatible(other)?;
        let f = &self.field;
        Ok(Point::new(
            f.clone(),
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f.sub(*a, *b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: FieldElement) -> Point {
        let f = &self.field;
        Point::new(
            f.clone(),
            self.coords.iter().map(|a| f.mul(*a, c)).collect(),
        )
    }

    /// Cross product in dimension 3; satisfies `⟨u×v, u⟩ = ⟨u×v, v⟩ = 0` and
    /// `⟨u×v, u×v⟩ = ⟨u,u⟩⟨v,v⟩ - ⟨u,v⟩²`.
    pub fn cross(&self, other: &Point) -> Result<Point, GeometryError> {
        self.check_compatible(other)?;
        if self.dim() != 3 {
            return Err(GeometryError::CrossRequiresDim3(self.dim()));
        }
        let f = &self.field;
        let u = &self.coords;
        let v = &other.coords;
        let comp = |i: usize, j: usize| f.sub(f.mul(u[i], v[j]), f.mul(u[j], v[i]));
        Ok(Point::new(
            f.clone(),
            vec![comp(1, 2), comp(2, 0), comp(0, 1)],
        ))
    }

    /// Norm class of the point (origin kept separate from `P₀`).
    pub fn norm_class(&self) -> NormClass {
        let norm = self.inner(self).expect("self-compatible");
        match self.field.quad_class(norm) {
            QuadClass::Square => NormClass::Plus,
            QuadClass::NonSquare => NormClass::Minus,
            QuadClass::Zero => {
                if self.coords.iter().all(|c| c.val() == 0) {
                    NormClass::Origin
                } else {
                    NormClass::Zero
                }
            }
        }
    }
}

impl fmt::Display for Point {
    /// Renders as `(c_1,…,c_m)` using canonical encodings.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c.val())?;
        }
        write!(f, ")")
    }
}

/// Parse `(c_1,…,c_m)` (parentheses optional) into a point of the given field.
pub fn parse_point(field: &FieldSpec, s: &str) -> Result<Point, GeometryError> {
    let t = s.trim();
    let t = t.strip_prefix('(').unwrap_or(t);
    let t = t.strip_suffix(')').unwrap_or(t);
    if t.trim().is_empty() {
        return Err(GeometryError::Parse(format!("empty point {s:?}")));
    }
    let vals = t
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| GeometryError::Parse(format!("bad coordinate {x:?} in {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Point::from_vals(field, &vals)
}

/// Serialize a point set with its field/dimension header:
///
/// ```text
/// q=3^3:2,1,1,1 m=3
/// (26,11,9)
/// …
/// ```
pub fn format_point_set(field: &FieldSpec, m: usize, points: &[Point]) -> String {
    let mut out = format!("q={field} m={m}\n");
    for p in points {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

/// Parse the point-set format produced by [`format_point_set`]. Blank lines
/// and `#` comments are skipped; every point is validated against the header.
pub fn parse_point_set(s: &str) -> Result<(FieldSpec, usize, Vec<Point>), GeometryError> {
    let mut lines = s
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| GeometryError::Parse("missing header line".into()))?;
    let mut field = None;
    let mut m = None;
    for tok in header.split_whitespace() {
        if let Some(desc) = tok.strip_prefix("q=") {
            field = Some(crate::ffield::parse_field_descriptor(desc)?);
        } else if let Some(d) = tok.strip_prefix("m=") {
            m = Some(
                d.parse::<usize>()
                    .map_err(|_| GeometryError::Parse(format!("bad dimension {d:?}")))?,
            );
        } else {
            return Err(GeometryError::Parse(format!(
                "unexpected header token {tok:?}"
            )));
        }
    }
    let field = field.ok_or_else(|| GeometryError::Parse("header lacks q=".into()))?;
    let m = m.ok_or_else(|| GeometryError::Parse("header lacks m=".into()))?;
    if m == 0 {
        return Err(GeometryError::Parse("dimension must be positive".into()));
    }
    let mut points = Vec::new();
    for line in lines {
        let p = parse_point(&field, line)?;
        if p.dim() != m {
            return Err(GeometryError::DimensionMismatch {
                left: m,
                right: p.dim(),
            });
        }
        points.push(p);
    }
    Ok((field, m, points))
}

/// All points of `F_q^m` in canonical index order.
pub fn all_points(field: &FieldSpec, m: usize) -> impl Iterator<Item = Point> {
    let field = field.clone();
    let n = field.q().pow(m as u32);
    (0..n).map(move |i| Point::from_index(&field, m, i))
}

/// Number of solutions of `a² + b² = γ` (closed form): for `γ = 0` it is
/// `2q - 1` when `q ≡ 1 (mod 4)` and `1` otherwise; for `γ ≠ 0` it is `q - 1`
/// when `q ≡ 1 (mod 4)` and `q + 1` otherwise — independent of which nonzero
/// `γ` (square or not).
pub fn count_circle(field: &FieldSpec, gamma: FieldElement) -> u64 {
    let q = field.q();
    if gamma.val() == 0 {
        if q % 4 == 1 {
            2 * q - 1
        } else {
            1
        }
    } else if q % 4 == 1 {
        q - 1
    } else {
        q + 1
    }
}

/// Brute-force count of `a² + b² = γ`, the oracle for [`count_circle`].
pub fn count_circle_brute(field: &FieldSpec, gamma: FieldElement) -> u64 {
    let mut n = 0;
    for a in field.elements() {
        for b in field.elements() {
            if field.add(field.mul(a, a), field.mul(b, b)) == gamma {
                n += 1;
            }
        }
    }
    n
}

/// Pythagorean triples with fixed hypotenuse: the pairs `(a, b)` with
/// `a² + b² = γ²` (the triples are `(a, b, γ)`).
///
/// Emission order is canonical: for `γ = 0` the trivial solution first, then
/// `(τ, ±τω_q)` by increasing `τ` (only when `q ≡ 1 (mod 4)`; otherwise the
/// zero solution is alone). For `γ ≠ 0` the axis solutions
/// `(±γ, 0), (0, ±γ)` first, then one pair per parameter `τ` with
/// `τ² ∉ {-1, 1}`, in increasing canonical encoding of `τ`:
/// `a = (τ²-1)/(τ²+1)·γ`, `b = 2τ/(τ²+1)·γ`.
///
/// The family sizes are `2q - 1` / `1` for `γ = 0` and `q - 1` / `q + 1` for
/// `γ ≠ 0` (`q ≡ 1` / `q ≡ 3 (mod 4)` respectively), summing to `q²` over
/// all `γ`.
pub fn pyth_triples(field: &FieldSpec, gamma: FieldElement) -> Vec<(FieldElement, FieldElement)> {
    let q = field.q();
    let mut out = Vec::new();
    if gamma.val() == 0 {
        out.push((field.zero(), field.zero()));
        if q % 4 == 1 {
            let om = field.omega().expect("q ≡ 1 mod 4");
            for tau in field.elements().skip(1) {
                let b1 = field.mul(tau, om);
                let b2 = field.neg(b1);
                let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
                out.push((tau, lo));
                out.push((tau, hi));
            }
        }
        return out;
    }

    let neg_gamma = field.neg(gamma);
    out.push((gamma, field.zero()));
    out.push((neg_gamma, field.zero()));
    out.push((field.zero(), gamma));
    out.push((field.zero(), neg_gamma));

    let one = field.one();
    let minus_one = field.neg(one);
    for tau in field.elements().skip(1) {
        let t2 = field.mul(tau, tau);
        if t2 == one || t2 == minus_one {
            continue;
        }
        let denom_inv = field.inv(field.add(t2, one)).expect("τ² ≠ -1");
        let a = field.mul(field.mul(field.sub(t2, one), denom_inv), gamma);
        let b = field.mul(
            field.mul(field.add(tau, tau), denom_inv),
            gamma,
        );
        out.push((a, b));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::parse_field_descriptor;
    use std::collections::HashSet;

    fn f(d: &str) -> FieldSpec {
        parse_field_descriptor(d).unwrap()
    }

    fn pt(field: &FieldSpec, vals: &[u64]) -> Point {
        Point::from_vals(field, vals).unwrap()
    }

    #[test]
    fn inner_and_distance_examples() {
        let f5 = f("5");
        let u = pt(&f5, &[1, 2]);
        let v = pt(&f5, &[3, 4]);
        assert_eq!(u.inner(&v).unwrap().val(), 1); // 3 + 8 = 11 ≡ 1
        assert_eq!(u.sq_dist(&v).unwrap().val(), 3); // 4 + 4 = 8 ≡ 3
        assert!(!u.is_integral(&v).unwrap()); // 3 is a non-square mod 5

        let o = Point::zero(&f5, 2);
        assert_eq!(o.sq_dist(&u).unwrap().val(), 0); // 1 + 4 = 5 ≡ 0
        assert!(o.is_integral(&u).unwrap()); // zero distance is integral

        let f7 = f("7");
        let w = pt(&f7, &[1, 1, 1]);
        assert!(!Point::zero(&f7, 3).is_integral(&w).unwrap()); // norm 3 ∉ □_7
    }

    #[test]
    fn compatibility_errors() {
        let f5 = f("5");
        let f7 = f("7");
        let u = pt(&f5, &[1, 2]);
        assert_eq!(
            u.inner(&pt(&f7, &[1, 2])).unwrap_err(),
            GeometryError::FieldMismatch
        );
        assert!(matches!(
            u.sq_dist(&pt(&f5, &[1, 2, 3])).unwrap_err(),
            GeometryError::DimensionMismatch { .. }
        ));
        assert!(matches!(
            u.cross(&pt(&f5, &[0, 1])).unwrap_err(),
            GeometryError::CrossRequiresDim3(2)
        ));
    }

    #[test]
    fn cross_product_identities_exhaustive_f3() {
        let f3 = f("3");
        for u in all_points(&f3, 3) {
            for v in all_points(&f3, 3) {
                let c = u.cross(&v).unwrap();
                assert_eq!(c.inner(&u).unwrap().val(), 0);
                assert_eq!(c.inner(&v).unwrap().val(), 0);
                let lhs = c.inner(&c).unwrap();
                let uu = u.inner(&u).unwrap();
                let vv = v.inner(&v).unwrap();
                let uv = u.inner(&v).unwrap();
                let rhs = f3.sub(f3.mul(uu, vv), f3.mul(uv, uv));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn cross_product_identities_f9() {
        let f9 = f("3^2");
        // sample: all u with a few fixed v
        let vs: Vec<Point> = [[1u64, 0, 0], [3, 7, 2], [8, 8, 8], [0, 5, 1]]
            .iter()
            .map(|v| pt(&f9, v))
            .collect();
        for u in all_points(&f9, 3) {
            for v in &vs {
                let c = u.cross(v).unwrap();
                assert_eq!(c.inner(&u).unwrap().val(), 0);
                assert_eq!(c.inner(v).unwrap().val(), 0);
                let lhs = c.inner(&c).unwrap();
                let uu = u.inner(&u).unwrap();
                let vv = v.inner(v).unwrap();
                let uv = u.inner(v).unwrap();
                assert_eq!(lhs, f9.sub(f9.mul(uu, vv), f9.mul(uv, uv)));
            }
        }
    }

    #[test]
    fn index_roundtrip_and_order() {
        let f5 = f("5");
        assert_eq!(pt(&f5, &[1, 2]).index(), 11); // 1 + 2·5
        assert_eq!(pt(&f5, &[0, 0, 1]).index(), 25);
        for i in 0..125 {
            assert_eq!(Point::from_index(&f5, 3, i).index(), i);
        }
        let f27 = f("3^3:2,1,1,1");
        for i in [0u64, 1, 26, 100, 19682] {
            assert_eq!(Point::from_index(&f27, 3, i).index(), i);
        }
    }

    #[test]
    fn point_parse_and_display() {
        let f7 = f("7");
        let p = parse_point(&f7, "(2,1,1)").unwrap();
        assert_eq!(p.coords()[0].val(), 2);
        assert_eq!(p.to_string(), "(2,1,1)");
        assert_eq!(parse_point(&f7, " 3, 4 ").unwrap().to_string(), "(3,4)");
        assert!(parse_point(&f7, "(7,0)").is_err()); // 7 not a residue
        assert!(parse_point(&f7, "()").is_err());
        assert!(parse_point(&f7, "(1,x)").is_err());
    }

    #[test]
    fn point_set_roundtrip() {
        let f27 = f("3^3:2,1,1,1");
        let pts = vec![pt(&f27, &[26, 11, 9]), pt(&f27, &[0, 24, 7])];
        let text = format_point_set(&f27, 3, &pts);
        let (field2, m2, pts2) = parse_point_set(&text).unwrap();
        assert_eq!(field2, f27);
        assert_eq!(m2, 3);
        assert_eq!(pts2, pts);

        let with_comments = "# a comment\nq=5 m=2\n\n(1,2)\n# another\n(3,4)\n";
        let (_, m, pts) = parse_point_set(with_comments).unwrap();
        assert_eq!((m, pts.len()), (2, 2));

        assert!(parse_point_set("").is_err());
        assert!(parse_point_set("q=5\n(1,2)").is_err()); // no m=
        assert!(parse_point_set("q=5 m=2\n(1,2,3)").is_err()); // wrong dim
    }

    #[test]
    fn norm_class_examples() {
        let f5 = f("5");
        assert_eq!(pt(&f5, &[1, 2]).norm_class(), NormClass::Zero); // 1+4=0
        assert_eq!(pt(&f5, &[1, 0]).norm_class(), NormClass::Plus);
        assert_eq!(pt(&f5, &[0, 0]).norm_class(), NormClass::Origin);
        let f7 = f("7");
        assert_eq!(pt(&f7, &[1, 1, 1]).norm_class(), NormClass::Minus);
    }

    #[test]
    fn pyth_triples_zero_hypotenuse() {
        let f5 = f("5");
        let h0 = pyth_triples(&f5, f5.zero());
        assert_eq!(h0.len(), 9); // 2q - 1
        let set: HashSet<_> = h0.iter().collect();
        assert_eq!(set.len(), 9, "no duplicates");
        for &(a, b) in &h0 {
            assert_eq!(f5.add(f5.mul(a, a), f5.mul(b, b)).val(), 0);
        }
        assert_eq!(h0[0], (f5.zero(), f5.zero()));

        let f7 = f("7");
        assert_eq!(pyth_triples(&f7, f7.zero()).len(), 1);
    }

    #[test]
    fn pyth_triples_match_brute_force() {
        for d in ["5", "7", "3^2", "13", "3^3:2,1,1,1", "5^2"] {
            let spec = f(d);
            let q = spec.q();
            let mut total = 0;
            for gamma in spec.elements() {
                let fam = pyth_triples(&spec, gamma);
                let expect_len = if gamma.val() == 0 {
                    if q % 4 == 1 { 2 * q - 1 } else { 1 }
                } else if q % 4 == 1 {
                    q - 1
                } else {
                    q + 1
                };
                assert_eq!(fam.len() as u64, expect_len, "size of H_γ, {d} γ={gamma}");
                let gamma_sq = spec.mul(gamma, gamma);
                let brute: HashSet<(u64, u64)> = {
                    let mut s = HashSet::new();
                    for a in spec.elements() {
                        for b in spec.elements() {
                            if spec.add(spec.mul(a, a), spec.mul(b, b)) == gamma_sq {
                                s.insert((a.val(), b.val()));
                            }
                        }
                    }
                    s
                };
                let fam_set: HashSet<(u64, u64)> =
                    fam.iter().map(|&(a, b)| (a.val(), b.val())).collect();
                assert_eq!(fam_set.len(), fam.len(), "parametrization repeats a pair");
                // For γ ≠ 0, solutions of a²+b²=γ² with hypotenuse γ and -γ
                // coincide as pairs; the family for fixed γ must equal the
                // full solution set of a²+b²=γ².
                assert_eq!(fam_set, brute, "{d} γ={gamma}");
                total += fam.len() as u64;
            }
            assert_eq!(total, q * q);
        }
    }

    #[test]
    fn triple_count_sums_to_q_squared() {
        // Triples (a, b, c) with a² + b² = c²: summing |H_γ| over the
        // *hypotenuse* γ gives q² in total.
        for d in ["3", "5", "7", "3^2", "11", "13"] {
            let spec = f(d);
            let q = spec.q();
            let total: u64 = spec
                .elements()
                .map(|g| pyth_triples(&spec, g).len() as u64)
                .sum();
            assert_eq!(total, q * q, "{d}");
        }
    }

    #[test]
    fn count_circle_matches_brute() {
        for d in ["3", "5", "7", "3^2", "11", "13", "3^3:2,1,1,1"] {
            let spec = f(d);
            for gamma in spec.elements() {
                assert_eq!(
                    count_circle(&spec, gamma),
                    count_circle_brute(&spec, gamma),
                    "{d} γ={gamma}"
                );
            }
        }
    }

    #[test]
    fn integrality_symmetric_and_translation_invariant() {
        let f7 = f("7");
        let pts: Vec<Point> = all_points(&f7, 2).collect();
        for u in &pts {
            for v in &pts {
                assert_eq!(u.is_integral(v).unwrap(), v.is_integral(u).unwrap());
            }
        }
        let w = pt(&f7, &[3, 5]);
        for u in pts.iter().take(20) {
            for v in pts.iter().take(20) {
                assert_eq!(
                    u.is_integral(v).unwrap(),
                    u.add(&w).unwrap().is_integral(&v.add(&w).unwrap()).unwrap()
                );
            }
        }
    }
}
