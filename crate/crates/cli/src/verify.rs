//! Invariant suites behind `qfint verify`.
//!
//! Each suite is a list of named checks printing `PASS name (time)` or
//! `FAIL name: detail`. Any failure makes the command exit 1. The suites
//! re-derive known group orders, census identities, and construction
//! properties from scratch, so they double as an installation self-test.

use crate::{field_for_q, Ctx, Failure, EXIT_OK, EXIT_VERIFY};
use num_bigint::BigUint;
use qfint_core::constructions;
use qfint_core::counting;
use qfint_core::symmetry;
use serde_json::json;
use std::time::Instant;

struct Runner<'a> {
    ctx: &'a Ctx,
    checks: Vec<serde_json::Value>,
    failures: u32,
}

impl Runner<'_> {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<(), String>) {
        let t = Instant::now();
        let outcome = f();
        let elapsed = t.elapsed();
        match outcome {
            Ok(()) => {
                if !self.ctx.json {
                    println!("PASS {name} ({})", self.ctx.secs_str(elapsed));
                }
                self.checks.push(json!({
                    "name": name,
                    "status": "pass",
                    "detail": null,
                    "seconds": self.ctx.secs(elapsed),
                }));
            }
            Err(detail) => {
                self.failures += 1;
                if !self.ctx.json {
                    println!("FAIL {name}: {detail}");
                }
                self.checks.push(json!({
                    "name": name,
                    "status": "fail",
                    "detail": detail,
                    "seconds": self.ctx.secs(elapsed),
                }));
            }
        }
    }
}

pub fn cmd_verify(
    ctx: &Ctx,
    suite: &str,
    pmax: u64,
    qmax: u64,
    m: Option<u32>,
    samples: u32,
    seed: u64,
) -> Result<i32, Failure> {
    let mut r = Runner {
        ctx,
        checks: Vec::new(),
        failures: 0,
    };
    match suite {
        "conjecture" => suite_conjecture(&mut r, pmax, m, samples, seed),
        "groups" => suite_groups(&mut r),
        "constructions" => suite_constructions(&mut r, qmax),
        "all" => {
            suite_counts(&mut r);
            suite_conjecture(&mut r, pmax, m, samples, seed);
            suite_groups(&mut r);
            suite_constructions(&mut r, qmax);
        }
        other => {
            return Err(Failure::usage(format!(
                "unknown suite {other:?} (all | conjecture | groups | constructions)"
            )))
        }
    }
    if ctx.json {
        println!(
            "{}",
            json!({
                "suite": suite,
                "checks": r.checks,
                "failures": r.failures,
            })
        );
    } else {
        println!(
            "{} checks, {} failed",
            r.checks.len(),
            r.failures
        );
    }
    Ok(if r.failures > 0 { EXIT_VERIFY } else { EXIT_OK })
}

/// Closed, recursive, and brute-force censuses agree on small spaces.
fn suite_counts(r: &mut Runner) {
    r.run("norm-class counts three ways (m <= 4, q <= 9)", || {
        for m in 1..=4 {
            for q in [3u64, 5, 7, 9] {
                let closed = counting::counts_closed(m, q).map_err(|e| e.to_string())?;
                let rec = counting::counts_recursive(m, q).map_err(|e| e.to_string())?;
                let field = field_for_q(q).map_err(|e| e.message)?;
                let brute = counting::counts_brute(&field, m).map_err(|e| e.to_string())?;
                if !closed.same_counts(&rec) || !closed.same_counts(&brute) {
                    return Err(format!(
                        "disagreement at m={m} q={q}: closed S={},Z={},N={} recursive S={},Z={},N={} brute S={},Z={},N={}",
                        closed.s, closed.z, closed.n, rec.s, rec.z, rec.n, brute.s, brute.z, brute.n
                    ));
                }
            }
        }
        Ok(())
    });
}

/// Sampled common-neighbor counts match the closed form on square classes
/// and the conjectured closed form on the zero class.
fn suite_conjecture(r: &mut Runner, pmax: u64, m: Option<u32>, samples: u32, seed: u64) {
    let workers = r.ctx.workers;
    let targets: Vec<(u32, u64)> = match m {
        Some(m) => vec![(m, pmax)],
        None => vec![(3, pmax), (4, pmax.min(13))],
    };
    for (m, pmax) in targets {
        let name = format!("common-neighbor conjecture m={m} (p <= {pmax}, {samples} samples/class)");
        r.run(&name, || {
            let report = counting::verify_conjecture(m, pmax, samples, seed, workers)
                .map_err(|e| e.to_string())?;
            match report.counterexample {
                None => Ok(()),
                Some(c) => Err(format!(
                    "counterexample at p={} point {} class {}: expected {}, brute {}",
                    c.p, c.point, c.class, c.expected, c.actual
                )),
            }
        });
    }
}

/// Brute-force group enumerations match the order formulas.
fn suite_groups(r: &mut Runner) {
    let workers = r.ctx.workers;
    r.run("orthogonal group orders, enumeration vs formula", || {
        for (m, q) in [(2u32, 3u64), (2, 5), (2, 7), (2, 9), (3, 3)] {
            let field = field_for_q(q).map_err(|e| e.message)?;
            let got = symmetry::enumerate_o_brute(&field, m, workers).map_err(|e| e.to_string())?;
            let want = symmetry::order_o(m, q);
            if BigUint::from(got) != want {
                return Err(format!("O({m},{q}): enumerated {got}, formula {want}"));
            }
        }
        Ok(())
    });
    r.run("linear automorphism orders vs scaled O_Z", || {
        // |Aut ∩ GL| = |O_Z| except q=5 (twice) and q=9 (three times).
        for (m, q) in [(2u32, 3u64), (2, 5), (2, 7), (2, 9), (3, 3)] {
            let ratio: u32 = match q {
                5 => 2,
                9 => 3,
                _ => 1,
            };
            let field = field_for_q(q).map_err(|e| e.message)?;
            let got = symmetry::enumerate_aut_linear(&field, m, workers).map_err(|e| e.to_string())?;
            let want = symmetry::order_oz(m, q) * BigUint::from(ratio);
            if BigUint::from(got) != want {
                return Err(format!("Aut({m},{q}) ∩ GL: enumerated {got}, expected {want}"));
            }
        }
        Ok(())
    });
}

/// Every construction materializes, verifies, and has the advertised size.
fn suite_constructions(r: &mut Runner, qmax: u64) {
    let check = |c: Result<constructions::Construction, constructions::ConstructionError>,
                 want: u64|
     -> Result<(), String> {
        let c = c.map_err(|e| e.to_string())?;
        if c.points.len() as u64 != want {
            return Err(format!(
                "{} ({}): {} points, expected {want}",
                c.name,
                c.params,
                c.points.len()
            ));
        }
        if !c.warnings.is_empty() {
            return Err(format!("{} ({}): {}", c.name, c.params, c.warnings.join("; ")));
        }
        Ok(())
    };

    r.run("hyperplane sets of size q^2 (q = 1 mod 4)", || {
        for q in [5u64, 9, 13, 17, 25].into_iter().filter(|&q| q <= qmax) {
            let field = field_for_q(q).map_err(|e| e.message)?;
            check(constructions::hyperplane_q1mod4(&field), q * q)?;
        }
        Ok(())
    });
    r.run("circle-plus-line sets of size q (q = 3 mod 4)", || {
        for q in [3u64, 7, 11, 19, 23, 27].into_iter().filter(|&q| q <= qmax) {
            let field = field_for_q(q).map_err(|e| e.message)?;
            check(constructions::circle_plus_line(&field), q)?;
        }
        Ok(())
    });
    r.run("isotropic planes of size q^2 in dimension 4", || {
        for q in [3u64, 5, 7, 9, 11].into_iter().filter(|&q| q <= qmax) {
            let field = field_for_q(q).map_err(|e| e.message)?;
            check(constructions::isotropic_plane_4d(&field), q * q)?;
        }
        Ok(())
    });
    r.run("plane sets with no square distances (q = 3 mod 4)", || {
        for q in [3u64, 7, 11].into_iter().filter(|&q| q <= qmax) {
            let field = field_for_q(q).map_err(|e| e.message)?;
            check(constructions::nonintegral_plane(&field), q * q)?;
        }
        Ok(())
    });
    r.run("product lower bounds attain q^ceil(m/2) for q = 1 mod 4", || {
        for (m, q, want) in [(3usize, 5u64, 25u64), (4, 5, 25), (5, 5, 125), (4, 13, 169)] {
            if q > qmax {
                continue;
            }
            let field = field_for_q(q).map_err(|e| e.message)?;
            check(constructions::lower_bound(&field, m), want)?;
        }
        Ok(())
    });
    r.run("product lower bounds in dimension >= 4 for q = 3 mod 4", || {
        for (m, q, want) in [(4usize, 7u64, 49u64), (4, 11, 121), (5, 7, 343), (6, 3, 27)] {
            if q > qmax {
                continue;
            }
            let field = field_for_q(q).map_err(|e| e.message)?;
            check(constructions::lower_bound(&field, m), want)?;
        }
        Ok(())
    });
}
