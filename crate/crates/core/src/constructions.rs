//! Explicit integral point sets: lines, the q ≡ 1 (mod 4) hyperplane, the
//! circle-plus-line set for q ≡ 3 (mod 4), isotropic planes, products, and
//! the resulting general lower bounds for maximum integral point sets.
//!
//! Every constructor verifies its own output before returning it — pairwise
//! integrality (or the advertised distance pattern) and the claimed
//! cardinality. A construction that fails its own verification is reported
//! as a defect, never silently returned; the circle construction additionally
//! carries an exhaustive fallback, since the choice of integral sub-circle
//! is verified per instance rather than proven once.

use crate::ffield::{FieldElement, FieldError, FieldSpec, QuadClass};
use crate::geometry::{GeometryError, Point};
use std::fmt;

/// Cap on materialized points per construction.
pub const MATERIALIZE_BUDGET: u64 = 1_000_000;
/// Cap on point pairs checked by a verification pass.
pub const VERIFY_BUDGET: u64 = 10_000_000;

#[derive(Debug)]
pub enum ConstructionError {
    /// The construction requires q in a different residue class mod 4.
    WrongResidue { q: u64, need: u64 },
    BudgetExceeded { needed: u64, budget: u64 },
    /// Product right factor has a nonzero squared distance at this pair.
    NotAllZero { i: usize, j: usize },
    /// A set that must be integral is not, at this pair.
    NotIntegral { i: usize, j: usize },
    /// Points passed together do not share one field and dimension.
    MixedPoints,
    /// Emitted set failed its own verification or cardinality claim —
    /// indicates a defect, not a user error.
    Defect(String),
    Field(FieldError),
    Geometry(GeometryError),
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::WrongResidue { q, need } => {
                write!(f, "construction requires q ≡ {need} (mod 4), got q = {q}")
            }
            ConstructionError::BudgetExceeded { needed, budget } => {
                write!(f, "construction size {needed} exceeds budget {budget}")
            }
            ConstructionError::NotAllZero { i, j } => write!(
                f,
                "right factor pair ({i},{j}) has nonzero squared distance"
            ),
            ConstructionError::NotIntegral { i, j } => {
                write!(f, "pair ({i},{j}) is not at integral distance")
            }
            ConstructionError::MixedPoints => {
                write!(f, "points do not share one field and dimension")
            }
            ConstructionError::Defect(s) => write!(f, "construction defect: {s}"),
            ConstructionError::Field(e) => write!(f, "{e}"),
            ConstructionError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ConstructionError {}

impl From<FieldError> for ConstructionError {
    fn from(e: FieldError) -> Self {
        ConstructionError::Field(e)
    }
}
impl From<GeometryError> for ConstructionError {
    fn from(e: GeometryError) -> Self {
        ConstructionError::Geometry(e)
    }
}

/// A named, parameterized, verified point set with its claimed cardinality.
#[derive(Debug, Clone)]
pub struct Construction {
    pub name: &'static str,
    pub params: String,
    pub points: Vec<Point>,
    pub claimed: u64,
    pub warnings: Vec<String>,
}

/// Pairwise distance classes a construction promises.
enum Promise {
    /// Every pairwise squared distance is a square or zero.
    Integral,
    /// Every pairwise squared distance is exactly zero.
    AllZero,
    /// Every pairwise squared distance is zero or a non-square —
    /// no nonzero square distance occurs.
    NeverIntegral,
}

fn check_promise(points: &[Point], promise: &Promise) -> Result<(), ConstructionError> {
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d2 = points[i].sq_dist(&points[j])?;
            let class = points[i].field().quad_class(d2);
            let ok = match promise {
                Promise::Integral => class != QuadClass::NonSquare,
                Promise::AllZero => class == QuadClass::Zero,
                Promise::NeverIntegral => class != QuadClass::Square,
            };
            if !ok {
                return Err(ConstructionError::NotIntegral { i, j });
            }
        }
    }
    Ok(())
}

/// Final gate for every constructor: cardinality, distinctness, and the
/// promised distance pattern (within the verification budget).
fn finish(
    name: &'static str,
    params: String,
    points: Vec<Point>,
    claimed: u64,
    promise: Promise,
    mut warnings: Vec<String>,
) -> Result<Construction, ConstructionError> {
    if points.len() as u64 != claimed {
        return Err(ConstructionError::Defect(format!(
            "{name}: emitted {} points, claimed {claimed}",
            points.len()
        )));
    }
    let mut indices: Vec<u64> = points.iter().map(|p| p.index()).collect();
    indices.sort_unstable();
    indices.dedup();
    if indices.len() != points.len() {
        return Err(ConstructionError::Defect(format!(
            "{name}: emitted points are not distinct"
        )));
    }
    let pairs = (points.len() as u64).saturating_mul(points.len() as u64);
    if pairs <= VERIFY_BUDGET {
        check_promise(&points, &promise)
            .map_err(|e| ConstructionError::Defect(format!("{name}: {e}")))?;
    } else {
        warnings.push(format!(
            "verification skipped: {pairs} pairs exceed budget {VERIFY_BUDGET}"
        ));
    }
    Ok(Construction {
        name,
        params,
        points,
        claimed,
        warnings,
    })
}

fn budget_points(n: u64) -> Result<(), ConstructionError> {
    if n > MATERIALIZE_BUDGET {
        return Err(ConstructionError::BudgetExceeded {
            needed: n,
            budget: MATERIALIZE_BUDGET,
        });
    }
    Ok(())
}

/// The line `{(α, 0, …, 0)}`: q collinear points, distances α², always
/// integral — the universal lower bound `I(m, q) ≥ q`.
pub fn line(field: &FieldSpec, m: usize) -> Result<Construction, ConstructionError> {
    assert!(m >= 1);
    let q = field.q();
    budget_points(q)?;
    let points = field
        .elements()
        .map(|alpha| {
            let mut coords = vec![field.zero(); m];
            coords[0] = alpha;
            Point::new(field.clone(), coords)
        })
        .collect();
    finish(
        "line",
        format!("m={m} q={q}"),
        points,
        q,
        Promise::Integral,
        Vec::new(),
    )
}

/// The hyperplane set `{(α, ω·α, β)}` for q ≡ 1 (mod 4), where ω² = −1:
/// q² points in dimension 3 whose squared distances reduce to (β₁−β₂)².
pub fn hyperplane_q1mod4(field: &FieldSpec) -> Result<Construction, ConstructionError> {
    let q = field.q();
    if q % 4 != 1 {
        return Err(ConstructionError::WrongResidue { q, need: 1 });
    }
    budget_points(q * q)?;
    let omega = field.omega()?;
    let mut points = Vec::with_capacity((q * q) as usize);
    for alpha in field.elements() {
        for beta in field.elements() {
            points.push(Point::new(
                field.clone(),
                vec![alpha, field.mul(omega, alpha), beta],
            ));
        }
    }
    finish(
        "hyperplane_q1mod4",
        format!("q={q}"),
        points,
        q * q,
        Promise::Integral,
        Vec::new(),
    )
}

/// Multiplication in `F_q[x]/(x² + 1)` represented on coordinate pairs.
/// For prime q the arithmetic is delegated to an explicitly constructed
/// degree-2 extension field (which also re-checks that x² + 1 is
/// irreducible); for prime powers the pair formula
/// `(a,b)·(c,d) = (ac − bd, ad + bc)` is applied directly.
enum QuadArith {
    Tower { p: u64, ext: FieldSpec },
    Pairs(FieldSpec),
}

impl QuadArith {
    fn new(base: &FieldSpec) -> Result<Self, ConstructionError> {
        if base.r() == 1 {
            let p = base.p();
            let ext = crate::ffield::make_field(p, 2, Some(&[1, 0, 1]))?;
            Ok(QuadArith::Tower { p, ext })
        } else {
            Ok(QuadArith::Pairs(base.clone()))
        }
    }

    fn mul(
        &self,
        a: (FieldElement, FieldElement),
        b: (FieldElement, FieldElement),
    ) -> (FieldElement, FieldElement) {
        match self {
            QuadArith::Tower { p, ext } => {
                let x = ext.el(a.0.val() + a.1.val() * p).expect("pair encodes");
                let y = ext.el(b.0.val() + b.1.val() * p).expect("pair encodes");
                let z = ext.mul(x, y).val();
                let base_el = |v: u64| FieldElement::new_unchecked(v);
                (base_el(z % p), base_el(z / p))
            }
            QuadArith::Pairs(f) => (
                f.sub(f.mul(a.0, b.0), f.mul(a.1, b.1)),
                f.add(f.mul(a.0, b.1), f.mul(a.1, b.0)),
            ),
        }
    }

    fn pow(
        &self,
        base: (FieldElement, FieldElement),
        mut e: u64,
        one: (FieldElement, FieldElement),
    ) -> (FieldElement, FieldElement) {
        let mut acc = one;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The circle-plus-line set for q ≡ 3 (mod 4): the squares subgroup of the
/// norm-1 circle of `F_q[x]/(x²+1)` — cardinality (q+1)/2, embedded in the
/// z = 0 plane — together with the line points `(0,0,τ)` with τ² + 1 a
/// square — cardinality (q−1)/2. Total q points in dimension 3.
///
/// The sub-circle's integrality is verified, not assumed; if verification
/// fails the constructor falls back to an exhaustive maximum mutually
/// integral subset of the full circle and reports a warning.
pub fn circle_plus_line(field: &FieldSpec) -> Result<Construction, ConstructionError> {
    let q = field.q();
    if q % 4 != 3 {
        return Err(ConstructionError::WrongResidue { q, need: 3 });
    }
    budget_points(q)?;
    let arith = QuadArith::new(field)?;
    let one = (field.one(), field.zero());

    // The norm-1 circle a² + b² = 1 is cyclic of order q + 1; find a
    // generator by order testing against the prime factors of q + 1.
    let circle: Vec<(FieldElement, FieldElement)> =
        crate::geometry::pyth_triples(field, field.one());
    debug_assert_eq!(circle.len() as u64, q + 1);
    let factors = prime_factors(q + 1);
    let generator = circle
        .iter()
        .copied()
        .find(|&z| {
            factors
                .iter()
                .all(|&ell| arith.pow(z, (q + 1) / ell, one) != one)
        })
        .ok_or_else(|| ConstructionError::Defect("norm-1 circle has no generator".into()))?;

    // Squares inside the circle: the index-2 subgroup generated by gen².
    let h = arith.mul(generator, generator);
    let mut sub = Vec::with_capacity(((q + 1) / 2) as usize);
    let mut cur = one;
    for _ in 0..(q + 1) / 2 {
        sub.push(cur);
        cur = arith.mul(cur, h);
    }
    if cur != one {
        return Err(ConstructionError::Defect(
            "squares subgroup did not close after (q+1)/2 steps".into(),
        ));
    }

    let embed = |(a, b): (FieldElement, FieldElement)| {
        Point::new(field.clone(), vec![a, b, field.zero()])
    };
    let line_part: Vec<Point> = field
        .elements()
        .filter(|&tau| {
            field.quad_class(field.add(field.mul(tau, tau), field.one())) == QuadClass::Square
        })
        .map(|tau| Point::new(field.clone(), vec![field.zero(), field.zero(), tau]))
        .collect();
    if line_part.len() as u64 != (q - 1) / 2 {
        return Err(ConstructionError::Defect(format!(
            "line part has {} points, expected (q-1)/2 = {}",
            line_part.len(),
            (q - 1) / 2
        )));
    }

    let mut points: Vec<Point> = sub.iter().copied().map(embed).collect();
    points.extend(line_part.iter().cloned());
    let mut warnings = Vec::new();

    if check_promise(&points, &Promise::Integral).is_err() {
        // Fallback: exhaustive maximum mutually-integral subset of the full
        // circle, combined with the line part. Surfaced, never silent.
        let circle_points: Vec<Point> = circle.iter().copied().map(embed).collect();
        let best = max_integral_subset(&circle_points)?;
        warnings.push(format!(
            "squares subgroup not integral for q={q}; fell back to exhaustive subset of the circle ({} of {} points)",
            best.len(),
            circle_points.len()
        ));
        let mut fallback = best;
        fallback.extend(line_part);
        let claimed = fallback.len() as u64;
        return finish(
            "circle_plus_line",
            format!("q={q}"),
            fallback,
            claimed,
            Promise::Integral,
            warnings,
        );
    }

    finish(
        "circle_plus_line",
        format!("q={q}"),
        points,
        q,
        Promise::Integral,
        warnings,
    )
}

/// Exhaustive maximum clique under pairwise integrality, for point lists of
/// at most 64 elements (bitmask branch and bound).
fn max_integral_subset(points: &[Point]) -> Result<Vec<Point>, ConstructionError> {
    let n = points.len();
    if n > 64 {
        return Err(ConstructionError::BudgetExceeded {
            needed: n as u64,
            budget: 64,
        });
    }
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && points[i].is_integral(&points[j])? {
                adj[i] |= 1 << j;
            }
        }
    }
    fn grow(adj: &[u64], cand: u64, cur: u64, best: &mut u64) {
        if cand == 0 {
            if cur.count_ones() > best.count_ones() {
                *best = cur;
            }
            return;
        }
        if cur.count_ones() + cand.count_ones() <= best.count_ones() {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        grow(adj, (cand & adj[v]) & !(1 << v), cur | 1 << v, best);
        grow(adj, cand & !(1 << v), cur, best);
    }
    let mut best = 0u64;
    grow(&adj, if n == 64 { u64::MAX } else { (1 << n) - 1 }, 0, &mut best);
    Ok((0..n).filter(|&i| best >> i & 1 == 1).map(|i| points[i].clone()).collect())
}

/// An isotropic plane in dimension 4: with α² + β² = −2, the span of
/// u = (α,β,1,1) and v = (−β,α,−1,1) has all q² pairwise squared distances
/// equal to zero.
pub fn isotropic_plane_4d(field: &FieldSpec) -> Result<Construction, ConstructionError> {
    let q = field.q();
    budget_points(q * q)?;
    let minus_two = field.neg(field.add(field.one(), field.one()));
    let (alpha, beta) = two_squares(field, minus_two).ok_or_else(|| {
        ConstructionError::Defect("no representation α²+β² = −2 found".into())
    })?;
    let u = Point::new(
        field.clone(),
        vec![alpha, beta, field.one(), field.one()],
    );
    let v = Point::new(
        field.clone(),
        vec![field.neg(beta), alpha, field.neg(field.one()), field.one()],
    );
    let points = span_points(field, &u, &v)?;
    finish(
        "isotropic_plane_4d",
        format!("q={q}"),
        points,
        q * q,
        Promise::AllZero,
        Vec::new(),
    )
}

/// The non-integral plane for q ≡ 3 (mod 4): with α² + β² = −1, the span of
/// u = (α,β,1) and v = (−β,α,0) has every pairwise squared distance equal
/// to 0 or a non-square — no two distinct points are at a nonzero integral
/// distance.
pub fn nonintegral_plane(field: &FieldSpec) -> Result<Construction, ConstructionError> {
    let q = field.q();
    if q % 4 != 3 {
        return Err(ConstructionError::WrongResidue { q, need: 3 });
    }
    budget_points(q * q)?;
    let minus_one = field.neg(field.one());
    let (alpha, beta) = two_squares(field, minus_one).ok_or_else(|| {
        ConstructionError::Defect("no representation α²+β² = −1 found".into())
    })?;
    let u = Point::new(field.clone(), vec![alpha, beta, field.one()]);
    let v = Point::new(field.clone(), vec![field.neg(beta), alpha, field.zero()]);
    let points = span_points(field, &u, &v)?;
    finish(
        "nonintegral_plane",
        format!("q={q}"),
        points,
        q * q,
        Promise::NeverIntegral,
        Vec::new(),
    )
}

/// First `(α, β)` with `α² + β² = s` in canonical scan order.
fn two_squares(f: &FieldSpec, s: FieldElement) -> Option<(FieldElement, FieldElement)> {
    for alpha in f.elements() {
        let rest = f.sub(s, f.mul(alpha, alpha));
        if let Some(beta) = f.sqrt(rest) {
            return Some((alpha, beta));
        }
    }
    None
}

/// All q² combinations `τ·u + ν·v`.
fn span_points(
    field: &FieldSpec,
    u: &Point,
    v: &Point,
) -> Result<Vec<Point>, ConstructionError> {
    let mut points = Vec::with_capacity((field.q() * field.q()) as usize);
    for tau in field.elements() {
        for nu in field.elements() {
            points.push(u.scale(tau).add(&v.scale(nu))?);
        }
    }
    Ok(points)
}

/// Coordinate-concatenation product: `P1` must be integral, `P2` must have
/// all pairwise squared distances zero (both checked); squared distances add
/// across blocks, so the product is integral of size |P1|·|P2|.
pub fn product(p1: &[Point], p2: &[Point]) -> Result<Vec<Point>, ConstructionError> {
    if p1.is_empty() || p2.is_empty() {
        return Err(ConstructionError::Defect("product of empty set".into()));
    }
    let field = p1[0].field().clone();
    if p1.iter().any(|p| *p.field() != field || p.dim() != p1[0].dim())
        || p2.iter().any(|p| *p.field() != field || p.dim() != p2[0].dim())
    {
        return Err(ConstructionError::MixedPoints);
    }
    check_promise(p1, &Promise::Integral)?;
    check_promise(p2, &Promise::AllZero).map_err(|e| match e {
        ConstructionError::NotIntegral { i, j } => ConstructionError::NotAllZero { i, j },
        other => other,
    })?;
    budget_points((p1.len() as u64).saturating_mul(p2.len() as u64))?;
    let mut out = Vec::with_capacity(p1.len() * p2.len());
    for a in p1 {
        for b in p2 {
            let mut coords = a.coords().to_vec();
            coords.extend_from_slice(b.coords());
            out.push(Point::new(field.clone(), coords));
        }
    }
    Ok(out)
}

/// The isotropic pair set `{(α, ω·α)}` in dimension 2 (q ≡ 1 mod 4 only):
/// q points with all squared distances zero.
fn isotropic_pairs(field: &FieldSpec) -> Result<Vec<Point>, ConstructionError> {
    let omega = field.omega()?;
    Ok(field
        .elements()
        .map(|alpha| Point::new(field.clone(), vec![alpha, field.mul(omega, alpha)]))
        .collect())
}

/// General product lower bound on `I(m, q)`, with witness.
///
/// q ≡ 1 (mod 4): ⌊m/2⌋ isotropic pair blocks and a residual line give
/// `q^⌈m/2⌉`. q ≡ 3 (mod 4): ⌊m/4⌋ isotropic 4-dimensional planes and a
/// residual line give `q^(2⌊m/4⌋ + min(m mod 4, 1))`.
pub fn lower_bound(field: &FieldSpec, m: usize) -> Result<Construction, ConstructionError> {
    assert!(m >= 1);
    let q = field.q();
    let (blocks, block_dim, residual) = if q % 4 == 1 {
        (m / 2, 2usize, m % 2)
    } else {
        (m / 4, 4usize, m % 4)
    };
    let exponent = (blocks * (block_dim / 2) + residual.min(1)) as u32;
    let claimed = q
        .checked_pow(exponent)
        .ok_or(ConstructionError::BudgetExceeded {
            needed: u64::MAX,
            budget: MATERIALIZE_BUDGET,
        })?;
    budget_points(claimed)?;

    let block_points = |()| -> Result<Vec<Point>, ConstructionError> {
        if block_dim == 2 {
            isotropic_pairs(field)
        } else {
            Ok(isotropic_plane_4d(field)?.points)
        }
    };
    let mut points: Vec<Point> = if residual >= 1 {
        line(field, residual)?.points
    } else {
        block_points(())?
    };
    let start_blocks = if residual >= 1 { 0 } else { 1 };
    for _ in start_blocks..blocks {
        points = product(&points, &block_points(())?)?;
    }
    debug_assert_eq!(points[0].dim(), m);
    finish(
        "lower_bound",
        format!("m={m} q={q}"),
        points,
        claimed,
        Promise::Integral,
        Vec::new(),
    )
}
