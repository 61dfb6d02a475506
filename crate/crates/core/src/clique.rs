//! The integral-distance graph over `F_q^m` and maximum-clique search.
//!
//! Vertices are the points of `F_q^m`; two points are adjacent when their
//! squared distance is a square (possibly zero). The graph is a Cayley graph
//! of the additive group: adjacency depends only on the difference vector,
//! so the whole structure is a symmetric connection set `C` of `D(m, q)`
//! difference indices held in one bitset — the graph is never materialized
//! as a matrix.
//!
//! Maximum integral point sets are maximum cliques. [`max_clique`] runs a
//! branch-and-bound with greedy-coloring bounds over a reduced instance:
//! vertex 0 is fixed by translation invariance, or a prescribed point set is
//! fixed and the search runs inside its common neighborhood. [`compute_i`]
//! dispatches per (m, q) shape: closed formulas with construction witnesses
//! where maxima are known exactly, the prescribed-pair reduction for m = 3
//! with q ≡ 3 (mod 4), and seeded generic search otherwise.
//!
//! Deterministic mode fixes the vertex order by canonical index and commits
//! incumbent updates in canonical branch order at fixed-width waves, so the
//! reported size and witness are identical at any worker count.

use crate::constructions::ConstructionError;
use crate::counting::{self, CountError};
use crate::ffield::{FieldError, FieldSpec};
use crate::geometry::{GeometryError, Point};
use crate::parallel;
use num_bigint::BigUint;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Cap on DIMACS export size, in edges.
pub const DIMACS_EDGE_BUDGET: u64 = 20_000_000;

/// Branch width between incumbent commits in deterministic parallel search.
/// Must not depend on the worker count, or determinism across worker counts
/// would be lost.
const DET_WAVE_WIDTH: usize = 8;

/// How many search-tree nodes pass between deadline checks.
const DEADLINE_STRIDE: u64 = 512;

#[derive(Debug)]
pub enum CliqueError {
    Field(FieldError),
    Count(CountError),
    Geometry(GeometryError),
    /// Graph or export size exceeds the enumeration budget.
    BudgetExceeded { needed: u64, budget: u64 },
    /// Points passed together do not share one field and dimension.
    MixedPoints,
    /// A prescribed point pair is not at integral distance — no clique can
    /// contain the prescribed set.
    InfeasiblePrescribed { i: usize, j: usize },
    /// A seed passed to the search is not usable as an incumbent clique.
    BadSeed(String),
    /// `compute_i_even` requires a power of two.
    NotPowerOfTwo(u64),
    BadDimension,
    Construction(ConstructionError),
    Parse(String),
    Io(io::Error),
}

impl fmt::Display for CliqueError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliqueError::Field(e) => write!(f, "{e}"),
            CliqueError::Count(e) => write!(f, "{e}"),
            CliqueError::Geometry(e) => write!(f, "{e}"),
            CliqueError::BudgetExceeded { needed, budget } => {
                write!(f, "instance size {needed} exceeds budget {budget}")
            }
            CliqueError::MixedPoints => {
                write!(f, "points do not share one field and dimension")
            }
            CliqueError::InfeasiblePrescribed { i, j } => write!(
                f,
                "prescribed points {i} and {j} are not at integral distance"
            ),
            CliqueError::BadSeed(s) => write!(f, "unusable seed clique: {s}"),
            CliqueError::NotPowerOfTwo(q) => {
                write!(f, "{q} is not a power of two")
            }
            CliqueError::BadDimension => write!(f, "dimension must be positive"),
            CliqueError::Construction(e) => write!(f, "{e}"),
            CliqueError::Parse(s) => write!(f, "cannot parse DIMACS input: {s}"),
            CliqueError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliqueError {}

impl From<FieldError> for CliqueError {
    fn from(e: FieldError) -> Self {
        CliqueError::Field(e)
    }
}
impl From<CountError> for CliqueError {
    fn from(e: CountError) -> Self {
        CliqueError::Count(e)
    }
}
impl From<GeometryError> for CliqueError {
    fn from(e: GeometryError) -> Self {
        CliqueError::Geometry(e)
    }
}
impl From<io::Error> for CliqueError {
    fn from(e: io::Error) -> Self {
        CliqueError::Io(e)
    }
}
impl From<ConstructionError> for CliqueError {
    fn from(e: ConstructionError) -> Self {
        CliqueError::Construction(e)
    }
}

// ---------------------------------------------------------------------------
// Bitset
// ---------------------------------------------------------------------------

/// Fixed-length bitset over `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub(crate) fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    #[inline]
    pub(crate) fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub(crate) fn is_empty_set(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `self ∩ other` as a new set.
    pub(crate) fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    /// Does `self ∩ other` contain anything?
    pub(crate) fn intersects(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Indices of set bits, ascending.
    pub(crate) fn iter_ones(&self) -> BitsOnes<'_> {
        BitsOnes {
            bits: self,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }
}

pub(crate) struct BitsOnes<'a> {
    bits: &'a Bits,
    word_idx: usize,
    current: u64,
}

impl Iterator for BitsOnes<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.bits.words.len() {
                return None;
            }
            self.current = self.bits.words[self.word_idx];
        }
    }
}

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

/// The integral-distance graph, stored as its connection set.
#[derive(Debug, Clone)]
pub struct IntegralityGraph {
    field: FieldSpec,
    m: u32,
    n: u64,
    conn: Bits,
}

impl IntegralityGraph {
    /// One pass over the nonzero points computes the connection set; its
    /// cardinality is asserted against the closed-form degree `D(m, q)`.
    pub fn build(field: &FieldSpec, m: u32) -> Result<Self, CliqueError> {
        if m == 0 {
            return Err(CliqueError::BadDimension);
        }
        let n = counting::checked_size(field.q(), m)?;
        let mut conn = Bits::new(n as usize);
        for idx in 1..n {
            if counting::norm_class_of_index(field, m, idx) != crate::ffield::QuadClass::NonSquare
            {
                conn.set(idx as usize);
            }
        }
        let record = counting::counts_closed(m, field.q())?;
        assert_eq!(
            BigUint::from(conn.count_ones()),
            record.d(),
            "connection set size must equal the closed-form degree D({m},{})",
            field.q()
        );
        Ok(IntegralityGraph {
            field: field.clone(),
            m,
            n,
            conn,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of vertices, `q^m`.
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Vertex degree `|C| = D(m, q)` (the graph is regular).
    pub fn degree(&self) -> u64 {
        self.conn.count_ones()
    }

    /// Adjacency by difference index; vertices are canonical point indices.
    pub fn adjacent(&self, a: u64, b: u64) -> bool {
        if a == b {
            return false;
        }
        let d = counting::diff_index(&self.field, self.m, a, b);
        self.conn.get(d as usize)
    }

    /// The neighbors of vertex 0 — by translation invariance, the candidate
    /// set of the reduced instance. These are exactly the connection-set
    /// indices.
    pub fn neighbors_of_zero(&self) -> Vec<u64> {
        self.conn.iter_ones().map(|i| i as u64).collect()
    }

    /// Common neighbors of all given vertices (vertices themselves excluded).
    pub fn common_neighbors(&self, verts: &[u64]) -> Vec<u64> {
        (0..self.n)
            .filter(|&v| !verts.contains(&v) && verts.iter().all(|&u| self.adjacent(u, v)))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliqueStatus {
    /// Search completed: the size is the exact maximum.
    Optimal,
    /// Search was cut short (time limit); the size is only a lower bound.
    LowerBound,
    /// Size certified by a matching construction and upper-bound formula;
    /// no search was run.
    FormulaCertified,
}

impl fmt::Display for CliqueStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CliqueStatus::Optimal => "optimal",
            CliqueStatus::LowerBound => "lower_bound",
            CliqueStatus::FormulaCertified => "formula_certified",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// Plain translation-reduced search (vertex 0 fixed).
    None,
    /// Search inside the common neighborhood of a prescribed point set.
    PrescribedPair,
    /// Answer realized by an explicit construction, no reduction searched.
    Construction,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduction::None => "none",
            Reduction::PrescribedPair => "prescribed_pair",
            Reduction::Construction => "construction",
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchConfig {
    /// Points every clique must contain (pairwise integral, checked).
    pub prescribed: Vec<Point>,
    /// Wall-clock limit; exceeding it degrades status to `LowerBound`.
    pub time_limit: Option<Duration>,
    /// Reproducible order, wave-committed incumbents, and worker-independent
    /// results. Completed searches are identical at any worker count.
    pub deterministic: bool,
    /// Worker threads for first-level branch parallelism (0 or 1 = serial).
    pub workers: usize,
}

#[derive(Debug, Clone)]
pub struct CliqueResult {
    pub m: u32,
    pub q: u64,
    pub size: u64,
    /// The clique itself, sorted by canonical point index. Empty when a
    /// formula-certified size has no materialized witness within budget.
    pub witness: Vec<Point>,
    pub status: CliqueStatus,
    pub reduction: Reduction,
    pub elapsed: Duration,
    /// Search-tree nodes expanded (0 for formula-certified results).
    pub nodes: u64,
}

impl CliqueResult {
    /// The machine-readable record: `m q size status elapsed witness...`.
    /// Deterministic mode replaces elapsed time with `-` so records are
    /// byte-identical across runs and worker counts.
    pub fn record_line(&self, deterministic: bool) -> String {
        let elapsed = if deterministic {
            "-".to_string()
        } else {
            format!("{:.3}s", self.elapsed.as_secs_f64())
        };
        let witness = if self.witness.is_empty() {
            "-".to_string()
        } else {
            self.witness
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        format!(
            "{} {} {} {} {} {}",
            self.m, self.q, self.size, self.status, elapsed, witness
        )
    }
}

/// Dense induced subgraph with vertices relabeled into search order.
struct DenseGraph {
    n: usize,
    rows: Vec<Bits>,
    /// label → global vertex index
    ids: Vec<u64>,
}

impl DenseGraph {
    /// Induce on `verts`, ordering labels by canonical index (deterministic
    /// mode) or by descending degree with canonical ties.
    fn induce(g: &IntegralityGraph, verts: &[u64], canonical_order: bool) -> DenseGraph {
        let n = verts.len();
        let mut sorted: Vec<u64> = verts.to_vec();
        sorted.sort_unstable();
        let order: Vec<u64> = if canonical_order {
            sorted
        } else {
            let mut degrees: Vec<(usize, u64)> = sorted
                .iter()
                .map(|&u| {
                    let d = sorted.iter().filter(|&&v| g.adjacent(u, v)).count();
                    (d, u)
                })
                .collect();
            degrees.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            degrees.into_iter().map(|(_, u)| u).collect()
        };
        let mut rows = vec![Bits::new(n); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if g.adjacent(order[i], order[j]) {
                    rows[i].set(j);
                    rows[j].set(i);
                }
            }
        }
        DenseGraph { n, rows, ids: order }
    }

    fn full(&self) -> Bits {
        let mut b = Bits::new(self.n);
        for i in 0..self.n {
            b.set(i);
        }
        b
    }
}

/// Greedy sequential coloring in label order; returns candidates sorted by
/// color ascending (processing happens from the back) with their color
/// numbers as clique-size bounds.
fn color_sort(g: &DenseGraph, p: &Bits) -> (Vec<usize>, Vec<usize>) {
    let mut classes: Vec<(Bits, Vec<usize>)> = Vec::new();
    for v in p.iter_ones() {
        let mut placed = false;
        for (members, list) in classes.iter_mut() {
            if !members.intersects(&g.rows[v]) {
                members.set(v);
                list.push(v);
                placed = true;
                break;
            }
        }
        if !placed {
            let mut members = Bits::new(g.n);
            members.set(v);
            classes.push((members, vec![v]));
        }
    }
    let mut verts = Vec::new();
    let mut colors = Vec::new();
    for (c, (_, list)) in classes.iter().enumerate() {
        for &v in list {
            verts.push(v);
            colors.push(c + 1);
        }
    }
    (verts, colors)
}

struct Searcher<'a> {
    g: &'a DenseGraph,
    best_size: usize,
    best: Vec<usize>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
    /// Live incumbent size shared across workers (non-deterministic mode).
    shared: Option<&'a AtomicU64>,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a DenseGraph, seed_size: usize, deadline: Option<Instant>) -> Self {
        Searcher {
            g,
            best_size: seed_size,
            best: Vec::new(),
            nodes: 0,
            deadline,
            timed_out: false,
            shared: None,
        }
    }

    #[inline]
    fn bound(&self) -> usize {
        match self.shared {
            Some(a) => (a.load(Ordering::Relaxed) as usize).max(self.best_size),
            None => self.best_size,
        }
    }

    fn found(&mut self, r: &[usize]) {
        if r.len() > self.best_size {
            self.best_size = r.len();
            self.best = r.to_vec();
            if let Some(a) = self.shared {
                a.fetch_max(r.len() as u64, Ordering::Relaxed);
            }
        }
    }

    fn expand(&mut self, r: &mut Vec<usize>, p: &Bits) {
        self.nodes += 1;
        if self.nodes % DEADLINE_STRIDE == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        let (verts, colors) = color_sort(self.g, p);
        let mut cur = p.clone();
        for i in (0..verts.len()).rev() {
            if r.len() + colors[i] <= self.bound() {
                return;
            }
            let v = verts[i];
            r.push(v);
            let p2 = cur.and(&self.g.rows[v]);
            if p2.is_empty_set() {
                self.found(r);
            } else {
                self.expand(r, &p2);
            }
            r.pop();
            cur.clear(v);
            if self.timed_out {
                return;
            }
        }
    }
}

/// Outcome of a reduced-instance search: clique in graph labels, node count,
/// timeout flag.
struct SearchOutcome {
    best: Vec<usize>,
    best_size: usize,
    nodes: u64,
    timed_out: bool,
}

/// Run branch-and-bound on a dense graph. `seed` is a known clique (graph
/// labels) used as the initial incumbent. First-level branches run across
/// workers; in deterministic mode incumbent updates commit in canonical
/// branch order at fixed-width waves, independent of worker count.
fn solve(
    g: &DenseGraph,
    seed: &[usize],
    deadline: Option<Instant>,
    deterministic: bool,
    workers: usize,
) -> SearchOutcome {
    let mut best: Vec<usize> = seed.to_vec();
    let mut best_size = seed.len();
    let mut nodes = 0u64;
    let mut timed_out = false;

    let p0 = g.full();
    let (verts, colors) = color_sort(g, &p0);
    let workers = workers.max(1);

    if workers == 1 {
        let mut s = Searcher::new(g, best_size, deadline);
        s.nodes += 1;
        let mut cur = p0;
        for i in (0..verts.len()).rev() {
            if colors[i] <= s.best_size || s.timed_out {
                break;
            }
            let v = verts[i];
            let mut r = vec![v];
            let p2 = cur.and(&g.rows[v]);
            if p2.is_empty_set() {
                s.found(&r);
            } else {
                s.expand(&mut r, &p2);
            }
            cur.clear(v);
        }
        if s.best_size > best_size {
            best_size = s.best_size;
            best = s.best;
        }
        return SearchOutcome {
            best,
            best_size,
            nodes: s.nodes,
            timed_out: s.timed_out,
        };
    }

    // Parallel: branches processed back-to-front in waves. Deterministic
    // mode uses a fixed wave width and commits results in branch order, so
    // the incumbent seen by any branch is a pure function of the branch
    // sequence; the live atomic is shared only in non-deterministic mode.
    let wave_width = if deterministic {
        DET_WAVE_WIDTH
    } else {
        workers * 2
    };
    let live = AtomicU64::new(best_size as u64);
    let mut cur = p0;
    let mut i = verts.len();
    while i > 0 {
        if colors[i - 1] <= best_size {
            break;
        }
        if let Some(d) = deadline {
            if Instant::now() >= d {
                timed_out = true;
                break;
            }
        }
        let lo = i.saturating_sub(wave_width);
        // Snapshot branch inputs for this wave (candidate sets shrink as
        // earlier branches are peeled off `cur`).
        let mut branch_inputs = Vec::with_capacity(i - lo);
        for bi in (lo..i).rev() {
            let v = verts[bi];
            branch_inputs.push((v, cur.and(&g.rows[v])));
            cur.clear(v);
        }
        let snapshot = best_size;
        let results = parallel::ordered_map(workers, branch_inputs.len(), |k| {
            let (v, ref p2) = branch_inputs[k];
            let mut s = Searcher::new(g, snapshot, deadline);
            if !deterministic {
                s.shared = Some(&live);
            }
            let mut r = vec![v];
            if p2.is_empty_set() {
                s.found(&r);
            } else {
                s.expand(&mut r, p2);
            }
            (s.best, s.best_size, s.nodes, s.timed_out)
        });
        for (b, bs, n, to) in results {
            nodes += n;
            timed_out |= to;
            if bs > best_size {
                best_size = bs;
                best = b;
                live.fetch_max(bs as u64, Ordering::Relaxed);
            }
        }
        if timed_out {
            break;
        }
        i = lo;
    }
    SearchOutcome {
        best,
        best_size,
        nodes,
        timed_out,
    }
}

/// Check that points share one field/dimension and are pairwise integral;
/// returns the first violating index pair, if any.
pub fn verify_point_set(points: &[Point]) -> Result<Option<(usize, usize)>, CliqueError> {
    if points.len() < 2 {
        return Ok(None);
    }
    let f0 = points[0].field();
    let m0 = points[0].dim();
    if points.iter().any(|p| p.field() != f0 || p.dim() != m0) {
        return Err(CliqueError::MixedPoints);
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if !points[i].is_integral(&points[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Maximum clique of the integral-distance graph.
///
/// Without prescribed points the instance is translation-reduced (vertex 0
/// fixed, search over its neighborhood). With prescribed points the search
/// runs inside their common neighborhood and the result contains them.
pub fn max_clique(g: &IntegralityGraph, config: &SearchConfig) -> Result<CliqueResult, CliqueError> {
    max_clique_seeded(g, config, &[])
}

/// [`max_clique`] with a known clique as the initial incumbent. Seed points
/// must themselves form an integral set; when prescribed points are present
/// the seed must contain them.
pub fn max_clique_seeded(
    g: &IntegralityGraph,
    config: &SearchConfig,
    seed: &[Point],
) -> Result<CliqueResult, CliqueError> {
    let start = Instant::now();
    let deadline = config.time_limit.map(|l| start + l);
    let field = g.field().clone();
    let m = g.m() as usize;

    if !seed.is_empty() {
        if seed.iter().any(|p| *p.field() != field || p.dim() != m) {
            return Err(CliqueError::MixedPoints);
        }
        let mut idx: Vec<u64> = seed.iter().map(|p| p.index()).collect();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() != seed.len() {
            return Err(CliqueError::BadSeed("seed points are not distinct".into()));
        }
        if let Some((i, j)) = verify_point_set(seed)? {
            return Err(CliqueError::BadSeed(format!(
                "seed points {i} and {j} are not at integral distance"
            )));
        }
    }

    // Base vertices fixed in every clique, and the candidate vertex set.
    let (base, reduction): (Vec<u64>, Reduction) = if config.prescribed.is_empty() {
        (vec![0], Reduction::None)
    } else {
        for p in &config.prescribed {
            if *p.field() != field || p.dim() != m {
                return Err(CliqueError::MixedPoints);
            }
        }
        for i in 0..config.prescribed.len() {
            for j in (i + 1)..config.prescribed.len() {
                if !config.prescribed[i].is_integral(&config.prescribed[j])? {
                    return Err(CliqueError::InfeasiblePrescribed { i, j });
                }
            }
        }
        (
            config.prescribed.iter().map(|p| p.index()).collect(),
            Reduction::PrescribedPair,
        )
    };
    let candidates = if reduction == Reduction::None {
        g.neighbors_of_zero()
    } else {
        g.common_neighbors(&base)
    };

    // Translate the seed so it contains the fixed vertex, then map the rest
    // into candidate labels.
    let seed_verts: Vec<u64> = if seed.is_empty() {
        Vec::new()
    } else if reduction == Reduction::None {
        let shift = &seed[0];
        let mut verts = Vec::new();
        for p in seed.iter().skip(1) {
            verts.push(p.sub(shift)?.index());
        }
        verts
    } else {
        // The seed must contain the prescribed base; the remainder lies in
        // the base's common neighborhood because the seed is a clique.
        let seed_idx: Vec<u64> = seed.iter().map(|p| p.index()).collect();
        if let Some(missing) = base.iter().find(|b| !seed_idx.contains(b)) {
            return Err(CliqueError::BadSeed(format!(
                "seed does not contain prescribed point with index {missing}"
            )));
        }
        seed_idx.into_iter().filter(|v| !base.contains(v)).collect()
    };

    let dense = DenseGraph::induce(g, &candidates, config.deterministic);
    let label_of = |global: u64| dense.ids.iter().position(|&id| id == global);
    let seed_labels: Vec<usize> = seed_verts
        .iter()
        .map(|&v| label_of(v).expect("seed vertex inside candidate set"))
        .collect();

    let outcome = solve(
        &dense,
        &seed_labels,
        deadline,
        config.deterministic,
        config.workers,
    );

    let mut witness: Vec<Point> = base
        .iter()
        .map(|&v| Point::from_index(&field, m, v))
        .collect();
    for &label in &outcome.best {
        witness.push(Point::from_index(&field, m, dense.ids[label]));
    }
    witness.sort_by_key(|p| p.index());
    debug_assert_eq!(verify_point_set(&witness)?, None);

    Ok(CliqueResult {
        m: g.m(),
        q: field.q(),
        size: (base.len() + outcome.best_size) as u64,
        witness,
        status: if outcome.timed_out {
            CliqueStatus::LowerBound
        } else {
            CliqueStatus::Optimal
        },
        reduction,
        elapsed: start.elapsed(),
        nodes: outcome.nodes,
    })
}

/// Exact maximum integral point set size `I(m, q)` for odd q.
///
/// Dispatch: m = 1 and m = 2 are `q` by formula; m = 3 with q ≡ 1 (mod 4)
/// is `q²` by formula (hyperplane witness, upper bound `q·I(2,q)`); m = 3
/// with q ≡ 3 (mod 4) runs the prescribed-pair reduction and returns
/// `max(q, s)`; anything higher runs the generic translation-reduced search
/// seeded with the best product construction. `config.prescribed` is ignored
/// here — the reduction is chosen by the dispatch, not by the caller.
pub fn compute_i(
    field: &FieldSpec,
    m: u32,
    config: &SearchConfig,
) -> Result<CliqueResult, CliqueError> {
    let q = field.q();
    let start = Instant::now();
    match m {
        0 => Err(CliqueError::BadDimension),
        1 | 2 => {
            let witness = crate::constructions::line(field, m as usize)?.points;
            Ok(CliqueResult {
                m,
                q,
                size: q,
                witness,
                status: CliqueStatus::FormulaCertified,
                reduction: Reduction::Construction,
                elapsed: start.elapsed(),
                nodes: 0,
            })
        }
        3 if q % 4 == 1 => {
            // I(3, q) = q² exactly: hyperplane construction from below,
            // q·I(2, q) from above.
            let witness = match crate::constructions::hyperplane_q1mod4(field) {
                Ok(c) => c.points,
                Err(ConstructionError::BudgetExceeded { .. }) => Vec::new(),
                Err(e) => return Err(e.into()),
            };
            Ok(CliqueResult {
                m,
                q,
                size: q * q,
                witness,
                status: CliqueStatus::FormulaCertified,
                reduction: Reduction::Construction,
                elapsed: start.elapsed(),
                nodes: 0,
            })
        }
        3 => {
            // q ≡ 3 (mod 4): any integral set larger than the line contains
            // a pair at nonzero square distance, which normalizes to
            // {0, e1}; so I = max(q, s) with s the largest clique through
            // that pair. The line realizes q; its points seed the search.
            let g = IntegralityGraph::build(field, 3)?;
            let zero = Point::zero(field, 3);
            let e1 = Point::unit(field, 3, 0);
            let mut sub = config.clone();
            sub.prescribed = vec![zero, e1];
            let line_pts = crate::constructions::line(field, 3)?.points;
            let pair_result = max_clique_seeded(&g, &sub, &line_pts)?;
            let s = pair_result.size;
            if s > q {
                return Ok(CliqueResult {
                    elapsed: start.elapsed(),
                    ..pair_result
                });
            }
            // s ≤ q: the line is maximum. Optimal only if the search ran to
            // completion; a timeout leaves the upper bound unproven.
            Ok(CliqueResult {
                m,
                q,
                size: q,
                witness: line_pts,
                status: pair_result.status,
                reduction: Reduction::PrescribedPair,
                elapsed: start.elapsed(),
                nodes: pair_result.nodes,
            })
        }
        _ => {
            let g = IntegralityGraph::build(field, m)?;
            let seed = match crate::constructions::lower_bound(field, m as usize) {
                Ok(c) => c.points,
                Err(ConstructionError::BudgetExceeded { .. }) => Vec::new(),
                Err(e) => return Err(e.into()),
            };
            let mut sub = config.clone();
            sub.prescribed.clear();
            let result = max_clique_seeded(&g, &sub, &seed)?;
            Ok(CliqueResult {
                elapsed: start.elapsed(),
                ..result
            })
        }
    }
}

/// `I(m, q)` for even q: every element of a characteristic-2 field is a
/// square, so all distances are integral and the whole space is the maximum
/// set. No field construction is involved; `q` must be a power of two.
pub fn compute_i_even(m: u32, q: u64) -> Result<BigUint, CliqueError> {
    if m == 0 {
        return Err(CliqueError::BadDimension);
    }
    if q < 2 || !q.is_power_of_two() {
        return Err(CliqueError::NotPowerOfTwo(q));
    }
    Ok(BigUint::from(q).pow(m))
}

// ---------------------------------------------------------------------------
// DIMACS
// ---------------------------------------------------------------------------

/// Standard DIMACS graph format: `p edge <n> <edges>` header, one
/// `e <i> <j>` line per edge with `i < j`, vertex ids = canonical point
/// index + 1.
pub fn export_dimacs<W: Write>(g: &IntegralityGraph, out: &mut W) -> Result<(), CliqueError> {
    let n = g.n();
    let edges_big = BigUint::from(n) * BigUint::from(g.degree()) / BigUint::from(2u32);
    let edges = u64::try_from(&edges_big).map_err(|_| CliqueError::BudgetExceeded {
        needed: u64::MAX,
        budget: DIMACS_EDGE_BUDGET,
    })?;
    if edges > DIMACS_EDGE_BUDGET || n.saturating_mul(n) > counting::BRUTE_BUDGET {
        return Err(CliqueError::BudgetExceeded {
            needed: edges,
            budget: DIMACS_EDGE_BUDGET,
        });
    }
    writeln!(out, "p edge {n} {edges}")?;
    let mut written = 0u64;
    for u in 0..n {
        for v in (u + 1)..n {
            if g.adjacent(u, v) {
                writeln!(out, "e {} {}", u + 1, v + 1)?;
                written += 1;
            }
        }
    }
    debug_assert_eq!(written, edges, "edge census must match n·D/2");
    Ok(())
}

/// Read a DIMACS file back: vertex count and 0-indexed normalized edges.
pub fn parse_dimacs<R: BufRead>(input: R) -> Result<(u64, Vec<(u64, u64)>), CliqueError> {
    let mut n: Option<u64> = None;
    let mut declared = 0u64;
    let mut edges = Vec::new();
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("p") => {
                if n.is_some() {
                    return Err(CliqueError::Parse("duplicate p line".into()));
                }
                if parts.next() != Some("edge") {
                    return Err(CliqueError::Parse("expected `p edge`".into()));
                }
                let nv = parts
                    .next()
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| CliqueError::Parse("bad vertex count".into()))?;
                declared = parts
                    .next()
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| CliqueError::Parse("bad edge count".into()))?;
                n = Some(nv);
            }
            Some("e") => {
                let n = n.ok_or_else(|| CliqueError::Parse("e line before p line".into()))?;
                let a = parts
                    .next()
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| CliqueError::Parse("bad edge endpoint".into()))?;
                let b = parts
                    .next()
                    .and_then(|t| t.parse::<u64>().ok())
                    .ok_or_else(|| CliqueError::Parse("bad edge endpoint".into()))?;
                if a == 0 || b == 0 || a > n || b > n || a == b {
                    return Err(CliqueError::Parse(format!("edge ({a},{b}) out of range")));
                }
                edges.push(((a - 1).min(b - 1), (a - 1).max(b - 1)));
            }
            Some(other) => {
                return Err(CliqueError::Parse(format!("unknown line type {other:?}")));
            }
            None => {}
        }
    }
    let n = n.ok_or_else(|| CliqueError::Parse("missing p line".into()))?;
    if edges.len() as u64 != declared {
        return Err(CliqueError::Parse(format!(
            "header declares {declared} edges, found {}",
            edges.len()
        )));
    }
    Ok((n, edges))
}
