//! Acceptance gate, part 2 of 2: the timing criterion.  It lives in its
//! own test binary so the measurements never share a process with the
//! other suites.

use reynolds_cli::bench;
use reynolds_core::solver1d::solve_fast_1d;
use std::hint::black_box;
use std::time::Instant;

/// Median-of-5 wall time per solve, batching repetitions so every sample
/// is long enough for the clock to be trustworthy at small N.
fn time_fast_solver(n: usize) -> f64 {
    let tri = bench::well_family(n);
    let once = Instant::now();
    black_box(solve_fast_1d(&tri).unwrap());
    let estimate = once.elapsed().as_secs_f64().max(1e-7);
    let batch = ((0.008 / estimate).ceil() as usize).clamp(1, 200);
    bench::median_secs(5, || {
        for _ in 0..batch {
            black_box(solve_fast_1d(&tri).unwrap());
        }
    }) / batch as f64
}

/// Criterion 7: doubling N at most scales the segment solver's wall time
/// by 2.6 across 25k..200k, and at N = 100k it beats projected SOR at
/// matched residual.
#[test]
fn criterion_7_linear_scaling_and_matched_accuracy_speedup() {
    let start = Instant::now();
    let sizes = [25_000usize, 50_000, 100_000, 200_000];
    let times: Vec<f64> = sizes.iter().map(|&n| time_fast_solver(n)).collect();

    let mut ratios = Vec::new();
    for pair in times.windows(2) {
        let ratio = pair[1] / pair[0];
        assert!(
            ratio <= 2.6,
            "doubling N scaled time by {ratio:.2} (times: {times:?}); linear scaling \
             allows at most 2.6"
        );
        ratios.push(ratio);
    }

    let row = bench::bench_one(100_000, 5, 1.9).unwrap();
    assert!(
        row.speedup > 1.0,
        "segment solver must beat matched-residual SOR at N = 100k, got {:.2}x",
        row.speedup
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget is 1 min");
    let ratio_text: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    println!(
        "criterion 7: PASS — doubling ratios [{}], speedup {:.1}x at N = 100k \
         (residuals: segment {:.1e}, SOR {:.1e}), in {elapsed:?}",
        ratio_text.join(", "),
        row.speedup,
        row.residual_fast,
        row.residual_sor
    );
}
