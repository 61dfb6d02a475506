//! Release gate: twelve criteria covering maximum integral point sets,
//! counting identities, group orders, constructions, and interchange.
//!
//! One test per criterion; each prints a `criterion N: PASS` line (visible
//! under `--nocapture`). Extended targets with multi-hour budgets are
//! `#[ignore]`d; run them with `cargo test --release -- --ignored`.
//!
//! Known red: criterion 10's final clause asserts that the published
//! 28-point F_27 example verifies, and it cannot — the printed set contains
//! a defective point, and no 28-point integral set over F_27 exists at all
//! (tests/exact_search.rs refutes it exhaustively; I(3,27) = 27). The
//! assertion is kept unweakened; see the comment at the check.

use num_bigint::BigUint;
use qfint_core::clique::{self, CliqueStatus, IntegralityGraph, SearchConfig};
use qfint_core::constructions;
use qfint_core::counting;
use qfint_core::ffield::{make_field, FieldSpec, QuadClass};
use qfint_core::geometry::{
    all_points, count_circle, count_circle_brute, pyth_triples, Point,
};
use qfint_core::symmetry;
use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

fn field(q: u64) -> FieldSpec {
    let mut p = q;
    for d in 2..q {
        if d * d > q {
            break;
        }
        if q % d == 0 {
            p = d;
            break;
        }
    }
    let mut r = 0;
    let mut acc = 1;
    while acc < q {
        acc *= p;
        r += 1;
    }
    assert_eq!(acc, q, "{q} is not a prime power");
    make_field(p, r, None).unwrap()
}

fn search_config(limit_secs: u64) -> SearchConfig {
    SearchConfig {
        time_limit: Some(Duration::from_secs(limit_secs)),
        workers: 1,
        ..SearchConfig::default()
    }
}

/// Maximum set size, elapsed seconds, and completion status for one space.
fn measure_i(m: u32, q: u64, limit_secs: u64) -> (u64, f64, CliqueStatus) {
    let f = field(q);
    let t = Instant::now();
    let r = clique::compute_i(&f, m, &search_config(limit_secs)).unwrap();
    (r.size, t.elapsed().as_secs_f64(), r.status)
}

fn assert_exact(m: u32, q: u64, want: u64, limit_secs: u64) -> f64 {
    let (size, secs, status) = measure_i(m, q, limit_secs);
    assert_eq!(size, want, "I({m},{q}) = {size}, expected {want}");
    assert_ne!(
        status,
        CliqueStatus::LowerBound,
        "I({m},{q}) search did not complete within {limit_secs}s"
    );
    secs
}

#[test]
fn criterion_01_dimension_three_maxima() {
    for (q, want) in [(3u64, 4u64), (5, 25), (7, 8)] {
        let secs = assert_exact(3, q, want, 60);
        assert!(secs <= 60.0, "I(3,{q}) took {secs:.1}s, budget 60s");
    }
    let secs = assert_exact(3, 11, 11, 1800);
    assert!(secs <= 1800.0, "I(3,11) took {secs:.1}s, budget 30min");
    let f13 = field(13);
    let t = Instant::now();
    let r = clique::compute_i(&f13, 3, &search_config(60)).unwrap();
    assert_eq!(r.size, 169);
    assert_eq!(
        r.status,
        CliqueStatus::FormulaCertified,
        "I(3,13) must come from the certified hyperplane formula"
    );
    assert!(t.elapsed().as_secs_f64() < 5.0, "I(3,13) must be instant");
    println!("criterion 1: PASS — I(3,q) = 4, 25, 8, 11, 169 for q = 3, 5, 7, 11, 13");
}

#[test]
#[ignore]
fn criterion_01_extended_targets() {
    // Soft targets with a two-hour budget each.
    let secs = assert_exact(3, 17, 289, 7200);
    assert!(secs <= 7200.0, "I(3,17) took {secs:.1}s, budget 2h");
    let secs = assert_exact(3, 19, 19, 7200);
    assert!(secs <= 7200.0, "I(3,19) took {secs:.1}s, budget 2h");
    println!("criterion 1 (extended): PASS — I(3,17) = 289, I(3,19) = 19");
}

#[test]
fn criterion_02_higher_dimension_maxima() {
    let t = Instant::now();
    assert_exact(4, 3, 9, 1800);
    assert_exact(5, 3, 27, 1800);
    assert_exact(4, 5, 25, 1800);
    let total = t.elapsed().as_secs_f64();
    assert!(total <= 1800.0, "criterion 2 took {total:.1}s, budget 30min");
    println!("criterion 2: PASS — I(4,3) = 9, I(5,3) = 27, I(4,5) = 25 in {total:.0}s");
}

#[test]
#[ignore]
fn criterion_02_extended_target() {
    let secs = assert_exact(6, 3, 33, 7200);
    assert!(secs <= 7200.0, "I(6,3) took {secs:.1}s, budget 2h");
    println!("criterion 2 (extended): PASS — I(6,3) = 33");
}

#[test]
fn criterion_03_counting_oracle_equivalence() {
    let t = Instant::now();
    for m in 1..=5u32 {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let closed = counting::counts_closed(m, q).unwrap();
            let recursive = counting::counts_recursive(m, q).unwrap();
            let brute = counting::counts_brute(&field(q), m).unwrap();
            assert!(
                closed.same_counts(&recursive) && closed.same_counts(&brute),
                "count disagreement at m={m} q={q}: closed ({},{},{}) recursive ({},{},{}) brute ({},{},{})",
                closed.s, closed.z, closed.n,
                recursive.s, recursive.z, recursive.n,
                brute.s, brute.z, brute.n
            );
        }
    }
    let total = t.elapsed().as_secs_f64();
    assert!(total <= 300.0, "criterion 3 took {total:.1}s, budget 5min");
    println!("criterion 3: PASS — closed = recursive = brute for m <= 5, q <= 13 in {total:.0}s");
}

#[test]
fn criterion_04_common_neighbor_counts() {
    for m in 1..=4u32 {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let f = field(q);
            let zero = Point::zero(&f, m as usize);
            let e1 = Point::unit(&f, m as usize, 0);
            let brute = counting::common_neighbors_brute(&zero, &e1).unwrap();
            let closed = counting::common_adjacent_closed(m, q).unwrap();
            assert_eq!(
                BigUint::from(brute),
                closed,
                "A({m},{q}): brute {brute} vs closed {closed}"
            );
        }
    }
    // spot values quoted throughout the library's tests
    assert_eq!(
        counting::common_adjacent_closed(3, 5).unwrap(),
        BigUint::from(59u32)
    );
    assert_eq!(
        counting::common_adjacent_closed(3, 7).unwrap(),
        BigUint::from(77u32)
    );
    println!("criterion 4: PASS — common_neighbors_brute(0, e1) = A(m,q) for m <= 4, q <= 13");
}

#[test]
fn criterion_05_conjecture_desk_scale() {
    let t = Instant::now();
    let r3 = counting::verify_conjecture(3, 101, 5, 0x51F7, 1).unwrap();
    assert!(
        r3.counterexample.is_none(),
        "m=3 counterexample: {:?}",
        r3.counterexample
    );
    let r4 = counting::verify_conjecture(4, 13, 5, 0x51F7, 1).unwrap();
    assert!(
        r4.counterexample.is_none(),
        "m=4 counterexample: {:?}",
        r4.counterexample
    );
    let total = t.elapsed().as_secs_f64();
    assert!(total <= 600.0, "criterion 5 took {total:.1}s, budget 10min");
    println!(
        "criterion 5: PASS — zero-class conjecture holds for m=3 p <= 101 ({} points) and m=4 p <= 13 ({} points) in {total:.0}s",
        r3.checked, r4.checked
    );
}

#[test]
fn criterion_06_strong_regularity() {
    let rep = counting::srg_report(2, 5).unwrap();
    assert_eq!(rep.v, BigUint::from(25u32));
    assert_eq!(rep.k, BigUint::from(16u32));
    assert_eq!(rep.lambda, BigUint::from(9u32));
    assert_eq!(rep.mu, num_rational::BigRational::from_integer(12.into()));
    assert!(rep.mu_integral);
    assert_eq!(rep.is_srg, Some(true), "(2,5) must be brute-confirmed SRG");

    for q in [3u64, 5, 7, 9, 11, 13] {
        let rep = counting::srg_report(3, q).unwrap();
        assert!(
            !rep.mu_integral,
            "(3,{q}): mu = {} should be non-integral",
            rep.mu
        );
        assert_eq!(rep.is_srg, Some(false), "(3,{q}) cannot be an SRG");
    }

    for q in [3u64, 5] {
        let rep = counting::srg_report(4, q).unwrap();
        assert!(rep.mu_integral, "(4,{q}): mu = {} should be integral", rep.mu);
        assert_eq!(rep.is_srg, Some(true), "(4,{q}) must be brute-confirmed SRG");
    }
    println!("criterion 6: PASS — (2,5) is srg(25,16,9,12); (3,q) non-integral mu; (4,3), (4,5) brute-confirmed");
}

#[test]
fn criterion_07_group_orders() {
    let t = Instant::now();
    for (m, q, want) in [
        (2u32, 3u64, 8u64),
        (2, 5, 8),
        (2, 7, 16),
        (2, 9, 16),
        (3, 3, 48),
    ] {
        let got = symmetry::enumerate_o_brute(&field(q), m, 1).unwrap();
        assert_eq!(got, want, "|O({m},{q})|");
        assert_eq!(BigUint::from(got), symmetry::order_o(m, q));
    }
    for (m, q, ratio) in [(3u32, 3u64, 1u32), (2, 5, 2), (2, 9, 3)] {
        let got = symmetry::enumerate_aut_linear(&field(q), m, 1).unwrap();
        assert_eq!(
            BigUint::from(got),
            symmetry::order_oz(m, q) * BigUint::from(ratio),
            "linear automorphisms of ({m},{q}) vs {ratio} * |OZ|"
        );
    }
    let total = t.elapsed().as_secs_f64();
    assert!(total <= 600.0, "criterion 7 took {total:.1}s, budget 10min");
    println!("criterion 7: PASS — orthogonal and automorphism group orders match formulas in {total:.1}s");
}

#[test]
fn criterion_08_pythagorean_triples() {
    let qs = [
        3u64, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49,
    ];
    for q in qs {
        let f = field(q);
        // circles of every squared radius partition the plane
        let mut total = 0u64;
        for gamma in f.elements() {
            let closed = count_circle(&f, gamma);
            assert_eq!(
                closed,
                count_circle_brute(&f, gamma),
                "circle size at q={q}, gamma={}",
                gamma.val()
            );
            total += closed;
        }
        assert_eq!(total, q * q, "circle sizes at q={q} must sum to q^2");
    }
    for q in qs.iter().copied().filter(|&q| q <= 27) {
        let f = field(q);
        for gamma in f.elements() {
            let param: HashSet<(u64, u64)> = pyth_triples(&f, gamma)
                .into_iter()
                .map(|(a, b)| (a.val(), b.val()))
                .collect();
            let gamma_sq = f.mul(gamma, gamma);
            let mut brute = HashSet::new();
            for a in f.elements() {
                for b in f.elements() {
                    if f.add(f.mul(a, a), f.mul(b, b)) == gamma_sq {
                        brute.insert((a.val(), b.val()));
                    }
                }
            }
            assert_eq!(param, brute, "triple sets at q={q}, gamma={}", gamma.val());
        }
    }
    println!("criterion 8: PASS — circle cardinalities match and sum to q^2 (q <= 49); triple sets match brute force (q <= 27)");
}

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

#[test]
fn criterion_09_orbit_witnesses() {
    let mut rng = XorShift(0xACCE97);
    for m in [2u32, 3] {
        for q in [3u64, 5, 7, 9, 11, 13] {
            let f = field(q);
            // bucket the nonzero points by norm so same-norm pairs are easy to draw
            let mut by_norm: HashMap<u64, Vec<Point>> = HashMap::new();
            for p in all_points(&f, m as usize) {
                if p.coords().iter().any(|c| c.val() != 0) {
                    by_norm.entry(p.inner(&p).unwrap().val()).or_default().push(p);
                }
            }
            let norms: Vec<u64> = by_norm.keys().copied().collect();
            for _ in 0..100 {
                let bucket = &by_norm[&norms[rng.below(norms.len())]];
                let u = &bucket[rng.below(bucket.len())];
                let v = &bucket[rng.below(bucket.len())];
                let w = symmetry::transitivity_witness(u, v).unwrap();
                assert!(w.is_orthogonal(), "witness not orthogonal for {u} -> {v} over F_{q}");
                assert_eq!(&w.apply(u).unwrap(), v, "witness misses {u} -> {v} over F_{q}");
            }
        }
    }
    println!("criterion 9: PASS — 1200 random same-norm pairs mapped by verified orthogonal witnesses");
}

#[test]
fn criterion_10_constructions_verify() {
    let check = |c: constructions::Construction, want: u64| {
        assert_eq!(c.points.len() as u64, want, "{} ({})", c.name, c.params);
        assert!(
            c.warnings.is_empty(),
            "{} ({}): {}",
            c.name,
            c.params,
            c.warnings.join("; ")
        );
        assert_eq!(clique::verify_point_set(&c.points).unwrap(), None);
    };
    for q in [5u64, 9, 13, 17, 25] {
        check(constructions::hyperplane_q1mod4(&field(q)).unwrap(), q * q);
    }
    for q in [3u64, 7, 11, 19, 23, 27] {
        check(constructions::circle_plus_line(&field(q)).unwrap(), q);
    }
    for q in [3u64, 5, 7, 9, 11] {
        let c = constructions::isotropic_plane_4d(&field(q)).unwrap();
        assert_eq!(c.points.len() as u64, q * q, "{} ({})", c.name, c.params);
        assert!(c.warnings.is_empty());
        assert_eq!(clique::verify_point_set(&c.points).unwrap(), None);
    }
    for q in [3u64, 7, 11] {
        // every pairwise squared distance is zero or a non-square
        let f = field(q);
        let c = constructions::nonintegral_plane(&f).unwrap();
        assert_eq!(c.points.len() as u64, q * q);
        assert!(c.warnings.is_empty());
        for (i, a) in c.points.iter().enumerate() {
            for b in &c.points[i + 1..] {
                let class = f.quad_class(a.sq_dist(b).unwrap());
                assert_ne!(
                    class,
                    QuadClass::Square,
                    "{a} and {b} at nonzero square distance"
                );
            }
        }
    }
    // Published 28-point example over F_27 (modulus w³+w²+w+2, coordinates
    // as element values c₀+3c₁+9c₂ for c₀+c₁w+c₂w²). This final check is
    // expected to fail: the set as printed contains one defective point
    // (index 18, not at integral distance from index 2 and thirteen
    // others), and the exhaustive anchored search in tests/exact_search.rs
    // proves that no 28-point integral set over F_27 exists at all —
    // I(3,27) = 27 = q, not q + 1. The assertion is retained unweakened to
    // record the discrepancy; the construction families above all pass.
    const F27_PUBLISHED_28: [(u64, u64, u64); 28] = [
        (26, 11, 9),
        (0, 24, 7),
        (1, 13, 3),
        (2, 0, 0),
        (2, 9, 5),
        (2, 18, 7),
        (2, 24, 7),
        (3, 8, 26),
        (6, 18, 17),
        (8, 9, 14),
        (8, 21, 21),
        (8, 24, 6),
        (9, 14, 19),
        (10, 24, 6),
        (0, 0, 0),
        (11, 7, 18),
        (13, 9, 11),
        (14, 9, 0),
        (1, 0, 0),
        (15, 25, 26),
        (17, 20, 1),
        (1, 0, 10),
        (19, 12, 6),
        (21, 10, 22),
        (23, 5, 23),
        (23, 8, 15),
        (25, 14, 15),
        (25, 24, 6),
    ];
    let f27 = make_field(3, 3, Some(&[2, 1, 1, 1])).unwrap();
    let published: Vec<Point> = F27_PUBLISHED_28
        .iter()
        .map(|&(a, b, c)| Point::from_vals(&f27, &[a, b, c]).unwrap())
        .collect();
    assert_eq!(
        clique::verify_point_set(&published).unwrap(),
        None,
        "the published 28-point F_27 example does not verify (and exhaustive \
         search shows no 28-point integral set over F_27 exists: I(3,27) = 27)"
    );
    println!("criterion 10: PASS — hyperplane, circle-plus-line, isotropic-plane, and nonintegral-plane all verify; published F_27 example verifies");
}

#[test]
fn criterion_11_dimacs_roundtrip() {
    for (m, q) in [(2u32, 3u64), (3, 5)] {
        let f = field(q);
        let g = IntegralityGraph::build(&f, m).unwrap();
        let n = q.pow(m);
        let d: u64 = counting::counts_closed(m, q)
            .unwrap()
            .d()
            .try_into()
            .unwrap();
        let mut buf = Vec::new();
        clique::export_dimacs(&g, &mut buf).unwrap();
        let (vertices, edges) = clique::parse_dimacs(buf.as_slice()).unwrap();
        assert_eq!(vertices, n, "vertex count for ({m},{q})");
        assert_eq!(edges.len() as u64, n * d / 2, "edge count for ({m},{q})");
        let set: HashSet<(u64, u64)> = edges.into_iter().collect();
        assert_eq!(set.len() as u64, n * d / 2, "duplicate edges for ({m},{q})");
        for a in 0..n {
            for b in (a + 1)..n {
                let listed = set.contains(&(a, b)) || set.contains(&(b, a));
                assert_eq!(
                    listed,
                    g.adjacent(a, b),
                    "adjacency mismatch at ({a},{b}) for ({m},{q})"
                );
            }
        }
    }
    println!("criterion 11: PASS — DIMACS exports have q^m vertices, q^m D/2 edges, and parse back to the same adjacency");
}

#[test]
fn criterion_12_deterministic_across_workers() {
    // every criterion 1 and 2 instance
    for (m, q) in [
        (3u32, 3u64),
        (3, 5),
        (3, 7),
        (3, 11),
        (3, 13),
        (4, 3),
        (5, 3),
        (4, 5),
    ] {
        let f = field(q);
        let mut records = Vec::new();
        for workers in [1usize, 2, 8] {
            let config = SearchConfig {
                deterministic: true,
                workers,
                ..SearchConfig::default()
            };
            let r = clique::compute_i(&f, m, &config).unwrap();
            records.push(r.record_line(true));
        }
        assert_eq!(records[0], records[1], "I({m},{q}) differs between 1 and 2 workers");
        assert_eq!(records[0], records[2], "I({m},{q}) differs between 1 and 8 workers");
    }
    println!("criterion 12: PASS — deterministic records byte-identical across 1, 2, and 8 workers");
}
