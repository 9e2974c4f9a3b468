//! Acceptance suite. Prints one `[PASS]` or `[FAIL]` line per criterion.
//!
//! Run with `cargo test -p expers --test acceptance -- --nocapture`.
//!
//! Criteria listed in `KNOWN_RED` are expected to fail for a documented
//! reason. The test still computes them faithfully, prints the red line and
//! then checks that the failure has exactly the documented shape. An
//! unexpected pass or a different failure fails the test.

use std::time::{Duration, Instant};

use expers::barcode::BarKind;
use expers::datasets::{erdos_renyi_with, gen_erdos_renyi, gen_pinwheels, gen_two_cycles, stream_rng, DEFAULT_PINWHEEL_SIZES};
use expers::expressivity::{build_cc_size_filtration, build_cycle_length_filtration, clique, cycle, estimate_max_bar_statistics, named_graph, MonteCarloReport};
use expers::oracle::oracle_barcode;
use expers::vectorize::{init_params, rational_hat, rational_hat_grad, vectorize_barcode, RationalHatParams};
use expers::verify::cycle_basis_rank;
use expers::{compute_batch, compute_extended_persistence, Graph, TieBreakPolicy};
use rand::seq::SliceRandom;
use rand::Rng;

/// The max-bar probability is stated as `2m / (n (n - 1))`, the chance that
/// the extremes are adjacent. On a single cycle the bar `[max, min]` is
/// present in every trial, so C5 and C8 sit far above that bound.
const KNOWN_RED: &[&str] = &["max_bar_probability"];

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn policy() -> TieBreakPolicy {
    TieBreakPolicy::default()
}

fn counts_identities() -> Outcome {
    let start = Instant::now();
    let mut rng = stream_rng(2024, 0);
    let mut bad = Vec::new();
    for i in 0..1000 {
        let n = rng.random_range(1..=200);
        let p = rng.random_range(0.0..=0.5);
        let g = erdos_renyi_with(n, p, &mut rng).unwrap();
        let bc = compute_extended_persistence(&g, &policy(), true).unwrap();
        let c = g.num_components();
        let want = [n - c, n - c, c, g.num_edges() + c - n];
        if bc.counts() != want {
            bad.push(format!("graph {i}: {:?} != {want:?}", bc.counts()));
        }
    }
    let t = start.elapsed();
    Outcome {
        name: "count_identities",
        passed: bad.is_empty() && t < Duration::from_secs(60),
        detail: format!("1000 graphs in {:.2}s, {} mismatches {}", t.as_secs_f64(), bad.len(), bad.first().cloned().unwrap_or_default()),
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = stream_rng(2025, 0);
    let mut bad = Vec::new();
    for i in 0..500 {
        let n = rng.random_range(1..=12);
        let p = rng.random_range(0.0..=1.0);
        let g = erdos_renyi_with(n, p, &mut rng).unwrap();
        let fast = compute_extended_persistence(&g, &policy(), false).unwrap();
        let slow = oracle_barcode(&g, &policy()).unwrap();
        if fast.signature() != slow.signature() {
            bad.push(i);
        }
    }
    let t = start.elapsed();
    Outcome {
        name: "oracle_equivalence",
        passed: bad.is_empty() && t < Duration::from_secs(30),
        detail: format!("500 graphs in {:.2}s, mismatching graphs {bad:?}", t.as_secs_f64()),
    }
}

fn cycle_basis() -> Outcome {
    let mut rng = stream_rng(2026, 0);
    let mut bad = Vec::new();
    for i in 0..200 {
        let n = rng.random_range(1..=40);
        let p = rng.random_range(0.0..=0.6);
        let g = erdos_renyi_with(n, p, &mut rng).unwrap();
        let bc = compute_extended_persistence(&g, &policy(), true).unwrap();
        let want = g.num_edges() + g.num_components() - n;
        match cycle_basis_rank(&g, &bc) {
            Ok(r) if r == want && bc.cycles.len() == want => {}
            other => bad.push(format!("graph {i}: {other:?} != {want}")),
        }
    }
    Outcome { name: "cycle_basis_rank", passed: bad.is_empty(), detail: format!("200 graphs, failures {bad:?}") }
}

fn permutation_invariance() -> Outcome {
    let mut rng = stream_rng(2027, 0);
    let base: Vec<Graph> = (0..20)
        .map(|_| {
            let n = rng.random_range(1..=60);
            let p = rng.random_range(0.0..=0.3);
            erdos_renyi_with(n, p, &mut rng).unwrap()
        })
        .collect();
    let reference: Vec<_> = base.iter().map(|g| compute_extended_persistence(g, &policy(), false).unwrap()).collect();
    let params = init_params(&reference, 16, 7).unwrap();
    let mut bad = 0;
    for t in 0..200 {
        let g = &base[t % base.len()];
        let mut perm: Vec<usize> = (0..g.num_vertices).collect();
        perm.shuffle(&mut rng);
        let h = g.relabel(&perm);
        let a = &reference[t % base.len()];
        let b = compute_extended_persistence(&h, &policy(), false).unwrap();
        if a.signature() != b.signature() || vectorize_barcode(a, &params) != vectorize_barcode(&b, &params) {
            bad += 1;
        }
    }
    Outcome { name: "permutation_invariance", passed: bad == 0, detail: format!("200 relabelings, {bad} differ") }
}

fn cycle_length() -> Outcome {
    let mut bad = Vec::new();
    for k in 3..=20 {
        let g = cycle(k);
        let order: Vec<usize> = (0..k).collect();
        let f = build_cycle_length_filtration(&g, &order).unwrap();
        let h = g.with_values(f.vertex_values.clone());
        let bc = compute_extended_persistence(&h, &policy(), false).unwrap();
        let ok = bc.b1_ext.len() == 1 && {
            let (b, d) = bc.b1_ext[0].unperturbed(&h);
            b - d == (k - 1) as f64
        };
        if !ok {
            bad.push(k);
        }
    }
    Outcome { name: "cycle_length_filtration", passed: bad.is_empty(), detail: format!("k in 3..=20, failing k {bad:?}") }
}

fn component_size() -> Outcome {
    let sizes = [1usize, 2, 3, 5, 8, 13];
    let mut edges = Vec::new();
    let mut start = 0;
    for &s in &sizes {
        // a path plus one chord, so components are not trees only
        for v in start + 1..start + s {
            edges.push((v - 1, v));
        }
        if s >= 3 {
            edges.push((start, start + s - 1));
        }
        start += s;
    }
    let g = Graph::new(start, edges, vec![0.0; start]);
    let h = g.with_values(build_cc_size_filtration(&g));
    let bc = compute_extended_persistence(&h, &policy(), false).unwrap();
    let mut got: Vec<f64> = bc.b0_ext.iter().map(|b| b.death - b.birth).collect();
    got.sort_by(f64::total_cmp);
    let want: Vec<f64> = sizes.iter().map(|&s| (s - 1) as f64).collect();
    Outcome {
        name: "component_size_filtration",
        passed: got == want,
        detail: format!("persistences {got:?}, expected {want:?}"),
    }
}

fn max_bar() -> (Outcome, Vec<(String, MonteCarloReport)>) {
    let mut reports = Vec::new();
    let mut parts = Vec::new();
    let mut passed = true;
    for name in ["K4", "C5", "K5", "C8"] {
        let g = named_graph(name).unwrap();
        let r = estimate_max_bar_statistics(&g, 10_000, 31, 4).unwrap();
        let p = r.theoretical_probability;
        let z = (r.empirical_probability - p).abs();
        let ok = z <= 3.0 * r.sigma(p) || (p == 1.0 && r.empirical_probability == 1.0);
        passed &= ok;
        parts.push(format!("{name}: {:.4} vs {:.4} {}", r.empirical_probability, p, if ok { "ok" } else { "out" }));
        reports.push((name.to_string(), r));
    }
    (Outcome { name: "max_bar_probability", passed, detail: parts.join(", ") }, reports)
}

/// The documented failure: cliques agree with the bound, cycles always
/// carry the bar while their extremes are adjacent at the stated rate.
fn max_bar_fails_as_documented(reports: &[(String, MonteCarloReport)]) -> Result<(), String> {
    for (name, r) in reports {
        let p = r.theoretical_probability;
        let adjacency_ok = (r.adjacency_rate() - p).abs() <= 3.0 * r.sigma(p).max(f64::EPSILON);
        if !adjacency_ok {
            return Err(format!("{name}: adjacency rate {} departs from {p}", r.adjacency_rate()));
        }
        if name.starts_with('C') && r.hit_count != r.trials {
            return Err(format!("{name}: expected a hit in every trial, got {}", r.hit_count));
        }
        if name.starts_with('K') && r.empirical_probability != 1.0 {
            return Err(format!("{name}: expected probability 1"));
        }
    }
    Ok(())
}

fn clique_mean() -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for n in [3, 5, 10] {
        let r = estimate_max_bar_statistics(&clique(n), 10_000, 37, 4).unwrap();
        let ok = (r.empirical_mean_persistence - r.theoretical_mean).abs() <= 0.02;
        passed &= ok;
        parts.push(format!("K{n}: {:.4} vs {:.4}", r.empirical_mean_persistence, r.theoretical_mean));
    }
    Outcome { name: "clique_mean_persistence", passed, detail: parts.join(", ") }
}

fn gradient_check() -> Outcome {
    let h = 1e-5;
    let mut rng = stream_rng(2028, 0);
    let mut worst = 0.0f64;
    let mut configs = 0;
    let mut rel = |a: f64, fd: f64| {
        let scale = a.abs().max(fd.abs());
        if scale > 0.0 {
            worst = worst.max((a - fd).abs() / scale);
        }
    };
    while configs < 100 {
        let np = rng.random_range(1..=6);
        let k = rng.random_range(1..=4);
        let mut u = || rng.random_range(-1.0..2.0);
        let pts: Vec<[f64; 2]> = (0..np).map(|_| [u(), u()]).collect();
        let centers: Vec<[f64; 2]> = (0..k).map(|_| [u(), u()]).collect();
        let radii: Vec<f64> = (0..k).map(|_| rng.random_range(-1.5..1.5)).collect();
        // central differences straddling a kink of |.| measure nothing useful
        let near_kink = centers.iter().zip(&radii).any(|(c, r)| {
            r.abs() < 1e-3
                || pts.iter().any(|p| {
                    let d = (p[0] - c[0]).abs() + (p[1] - c[1]).abs();
                    (p[0] - c[0]).abs() < 1e-3 || (p[1] - c[1]).abs() < 1e-3 || (r.abs() - d).abs() < 1e-3
                })
        });
        if near_kink {
            continue;
        }
        configs += 1;
        let params = RationalHatParams::new(centers.clone(), radii.clone()).unwrap();
        let jac = rational_hat_grad(&pts, &params);
        for b in 0..np {
            for a in 0..2 {
                let (mut up, mut dn) = (pts.clone(), pts.clone());
                up[b][a] += h;
                dn[b][a] -= h;
                let (fu, fd) = (rational_hat(&up, &params), rational_hat(&dn, &params));
                for i in 0..k {
                    rel(jac.wrt_points[i][b][a], (fu[i] - fd[i]) / (2.0 * h));
                }
            }
        }
        for i in 0..k {
            for a in 0..2 {
                let (mut cu, mut cd) = (centers.clone(), centers.clone());
                cu[i][a] += h;
                cd[i][a] -= h;
                let fu = rational_hat(&pts, &RationalHatParams::new(cu, radii.clone()).unwrap());
                let fd = rational_hat(&pts, &RationalHatParams::new(cd, radii.clone()).unwrap());
                rel(jac.wrt_centers[i][a], (fu[i] - fd[i]) / (2.0 * h));
            }
            let (mut ru, mut rd) = (radii.clone(), radii.clone());
            ru[i] += h;
            rd[i] -= h;
            let fu = rational_hat(&pts, &RationalHatParams::new(centers.clone(), ru).unwrap());
            let fd = rational_hat(&pts, &RationalHatParams::new(centers.clone(), rd).unwrap());
            rel(jac.wrt_radii[i], (fu[i] - fd[i]) / (2.0 * h));
        }
    }
    Outcome { name: "gradient_check", passed: worst < 1e-5, detail: format!("100 configurations, max relative error {worst:.2e}") }
}

fn pinwheels() -> Outcome {
    let data = gen_pinwheels(1000, 2029, DEFAULT_PINWHEEL_SIZES).unwrap();
    let correct = data
        .iter()
        .filter(|lg| {
            let bc = compute_extended_persistence(&lg.graph, &policy(), false).unwrap();
            let predicted = if bc.bars(BarKind::B1Ext).len() >= 2 { 0 } else { 1 };
            predicted == lg.label
        })
        .count();
    Outcome { name: "pinwheels_count_rule", passed: correct == 1000, detail: format!("{correct}/1000 correct") }
}

fn two_cycles() -> Outcome {
    let data = gen_two_cycles(400, 2030, Default::default()).unwrap();
    let mut mismatched = 0;
    let mut gaps = [Vec::new(), Vec::new()];
    for lg in &data {
        let bc = compute_extended_persistence(&lg.graph, &policy(), true).unwrap();
        let mut got: Vec<usize> = bc.cycles.iter().map(|c| c.len()).collect();
        got.sort_unstable();
        let mut want = lg.core_cycles.clone();
        want.sort_unstable();
        if got != want {
            mismatched += 1;
        }
        if got.len() == 2 {
            gaps[lg.label].push(got[1] - got[0]);
        }
    }
    let min_short = gaps[0].iter().min().copied().unwrap_or(0);
    let max_balanced = gaps[1].iter().max().copied().unwrap_or(usize::MAX);
    let separated = gaps[0].len() + gaps[1].len() == 400 && max_balanced < min_short;
    Outcome {
        name: "two_cycles_lengths",
        passed: mismatched == 0 && separated,
        detail: format!(
            "{mismatched}/400 length mismatches, class gaps >= {min_short} vs <= {max_balanced}, threshold {}",
            (min_short + max_balanced) / 2
        ),
    }
}

fn time_best<F: FnMut()>(reps: usize, mut f: F) -> f64 {
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

fn performance() -> Outcome {
    let g = gen_erdos_renyi(2000, 0.01, 1).unwrap();
    let big = time_best(1, || {
        compute_extended_persistence(&g, &policy(), true).unwrap();
    });

    let g = gen_erdos_renyi(500, 0.1, 1).unwrap();
    let fast = time_best(3, || {
        compute_extended_persistence(&g, &policy(), true).unwrap();
    });
    let slow = time_best(1, || {
        oracle_barcode(&g, &policy()).unwrap();
    });
    let speedup = slow / fast;

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in [2000usize, 4000, 8000, 16000, 32000, 64000] {
        let g = gen_erdos_renyi(n, 8.0 / (n - 1) as f64, 3).unwrap();
        let t = time_best(3, || {
            compute_extended_persistence(&g, &policy(), false).unwrap();
        });
        xs.push((g.num_edges() as f64).ln());
        ys.push(t.ln());
    }
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();

    Outcome {
        name: "performance",
        passed: big < 10.0 && speedup > 20.0 && (0.9..=1.4).contains(&slope),
        detail: format!("n=2000 in {big:.3}s, oracle speedup {speedup:.1}x, log-log slope {slope:.3}"),
    }
}

fn batch_determinism() -> Outcome {
    let mut rng = stream_rng(2031, 0);
    let gs: Vec<Graph> = (0..64)
        .map(|_| {
            let n = rng.random_range(1..=150);
            let p = rng.random_range(0.0..=0.2);
            erdos_renyi_with(n, p, &mut rng).unwrap()
        })
        .collect();
    let one = compute_batch(&gs, &policy(), true, 1).unwrap();
    let eight = compute_batch(&gs, &policy(), true, 8).unwrap();
    let same = one == eight && one.iter().zip(&eight).all(|(a, b)| a.to_json() == b.to_json());
    Outcome { name: "batch_determinism", passed: same, detail: "64 graphs, workers 1 vs 8".into() }
}

#[test]
fn acceptance() {
    println!();
    let mut outcomes = vec![
        counts_identities(),
        oracle_equivalence(),
        cycle_basis(),
        permutation_invariance(),
        cycle_length(),
        component_size(),
    ];
    let (max_bar, max_bar_reports) = max_bar();
    outcomes.push(max_bar);
    outcomes.extend([clique_mean(), gradient_check(), pinwheels(), two_cycles(), performance(), batch_determinism()]);

    for o in &outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        let note = if KNOWN_RED.contains(&o.name) { " (known red)" } else { "" };
        println!("[{tag}] {}{note}: {}", o.name, o.detail);
    }

    let unexpected: Vec<&str> = outcomes.iter().filter(|o| !o.passed && !KNOWN_RED.contains(&o.name)).map(|o| o.name).collect();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
    for o in outcomes.iter().filter(|o| KNOWN_RED.contains(&o.name)) {
        assert!(!o.passed, "{} now passes; drop it from KNOWN_RED", o.name);
    }
    max_bar_fails_as_documented(&max_bar_reports).unwrap();
}
