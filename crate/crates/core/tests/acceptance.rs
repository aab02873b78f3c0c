//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! A failing check marked `known` is reported as a failure but does not fail the
//! process; every other failing check does.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dirichlet_arg::arith::{primes_up_to, sieve};
use dirichlet_arg::characters::{build_family, twisted_prime_moment};
use dirichlet_arg::constants::{
    a6_constant, big_d, c0_pipeline, f_x_integral_constant, h_of_k, leading_density_coefficient,
    mean_square_bound, mollifier_mean_constant, optimize_d_parameters, prime_zeta_tail_constant,
    proportion_lower_bound, window_ratio, DParams, C0,
};
use dirichlet_arg::experiments::{
    average_s_experiment, density_empirics, mean_square_experiment, mollifier_convergence, DensityWindow,
    ExperimentRow, CONVERGENCE_BOUND,
};
use dirichlet_arg::lfunc::arg::n_formula_from;
use dirichlet_arg::lfunc::{critical_zeros_window, family_s, littlewood_identity_check, FamilyEvaluator};
use dirichlet_arg::mollifier::{
    build_mollifier, gcd_double_sums_with, lambda_upper_weight, lambda_x_weight, phi_prime, phi_prime_definitional,
    GcdMethod,
};

const SEED: u64 = 0x5eed_2024;

struct Check {
    label: String,
    ok: bool,
    detail: String,
    known: Option<&'static str>,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.0.push(Check { label: label.into(), ok, detail: detail.into(), known: None });
    }

    fn known(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>, why: &'static str) {
        self.0.push(Check { label: label.into(), ok, detail: detail.into(), known: Some(why) });
    }

    fn inside(&mut self, label: &str, v: f64, lo: f64, hi: f64) {
        self.check(label, v > lo && v < hi, format!("{v} vs ({lo}, {hi})"));
    }
}

fn constant_reproduction(c: &mut Checks) {
    let one = 1.0f64;
    c.inside("mollifier_mean_constant", mollifier_mean_constant(&one), 6.198, 6.200);
    let fx = f_x_integral_constant(&one);
    c.check("f_x_integral = 29136/3360", fx == 29136.0 / 3360.0, format!("{fx}"));
    c.check("f_x_integral < 8.68", fx < 8.68, format!("{fx}"));
    let tail = prime_zeta_tail_constant().total;
    c.check("prime_zeta_tail < 0.53", tail < 0.53, format!("{tail}"));
    let a6 = a6_constant(&one);
    c.check("a6 < 0.58", a6 < 0.58, format!("{a6}"));
    match h_of_k(1, &one) {
        Ok((h, ds)) => {
            c.inside("h(1)", h, 6.38, 6.40);
            c.inside("Δ*", ds, 0.64, 0.65);
        }
        Err(e) => c.check("h(1)", false, e.to_string()),
    }
    let ratio = window_ratio().x;
    c.inside("window ratio", ratio, 0.8257, 0.8259);
    c.inside("leading density coefficient", leading_density_coefficient(ratio), 4.77, 4.79);
    let p = DParams::headline();
    match big_d(&p) {
        Ok(d) => c.known(
            "√D(1.156, 0.16, 0.1249, 1, 1/4) ∈ (981.3, 981.6)",
            d.sqrt() > 981.3 && d.sqrt() < 981.6,
            format!("{}", d.sqrt()),
            "981.4 is the κ → 1/8 limit; κ = 0.1249 itself gives 981.80",
        ),
        Err(e) => c.check("√D", false, e.to_string()),
    }
    match c0_pipeline(&p.kappa, &1e9) {
        Ok(v) => c.check("c0_pipeline < 982", v < C0, format!("{v}")),
        Err(e) => c.check("c0_pipeline", false, e.to_string()),
    }
}

fn optimizer_recovery(c: &mut Checks) {
    let reference = big_d(&DParams::headline()).unwrap().sqrt();
    match optimize_d_parameters(1, 0.25) {
        Ok(o) => {
            c.check("value ≤ reference + 1e-3", o.value <= reference + 1e-3, format!("{} vs {reference}", o.value));
            c.check("|η* − 1.156| < 0.05", (o.eta - 1.156).abs() < 0.05, format!("{}", o.eta));
            c.check("|δ* − 0.16| < 0.01", (o.delta - 0.16).abs() < 0.01, format!("{}", o.delta));
        }
        Err(e) => c.check("optimizer", false, e.to_string()),
    }
}

fn oracle_equivalence(c: &mut Checks) {
    let mut worst = (0.0f64, 0.0f64);
    for xi in [2.0, 3.7, 10.0, 31.6, 77.7, 150.0, 300.0] {
        let table = build_mollifier(xi).unwrap();
        let a = gcd_double_sums_with(&table, GcdMethod::Direct);
        let b = gcd_double_sums_with(&table, GcdMethod::Rearranged);
        for d in [a.s_gcd - b.s_gcd, a.s_log_n - b.s_log_n, a.s_log_gcd - b.s_log_gcd] {
            if d.abs() > worst.0 {
                worst = (d.abs(), xi);
            }
        }
    }
    c.check("direct = rearranged gcd sums, ξ ≤ 300", worst.0 < 1e-9, format!("max diff {:e} at ξ = {}", worst.0, worst.1));

    let n_max = 10_000;
    let t = sieve(n_max).unwrap();
    let mut phi_err = 0.0f64;
    for r in (1..=n_max).filter(|&r| t.mobius(r) != 0) {
        let a = phi_prime(&t, r).unwrap();
        let b = phi_prime_definitional(&t, r).unwrap();
        phi_err = phi_err.max((a - b).abs() / a.abs().max(1.0));
    }
    c.check("φ′ closed form = definition, squarefree r ≤ 10^4", phi_err < 1e-9, format!("max rel {phi_err:e}"));
    let mut nlogn_err = 0.0f64;
    for n in 1..=n_max {
        let s: f64 = t.divisors(n).into_iter().map(|r| phi_prime(&t, r).unwrap()).sum();
        let e = n as f64 * (n as f64).ln();
        nlogn_err = nlogn_err.max((s - e).abs() / e.max(1.0));
    }
    c.check("n log n = Σ_{r|n} φ′(r), n ≤ 10^4", nlogn_err < 1e-9, format!("max rel {nlogn_err:e}"));

    let mut jump = 0.0f64;
    for x in [2.0, 3.3, 10.0, 57.0] {
        for y in [x, x * x] {
            let below = lambda_x_weight(y * (1.0 - 1e-15), x);
            let above = lambda_x_weight(y * (1.0 + 1e-15), x);
            jump = jump.max((below - above).abs());
        }
        jump = jump.max(lambda_x_weight(x * x * x * (1.0 - 1e-15), x).abs());
    }
    for xi in [2.0, 7.5, 100.0] {
        jump = jump.max((lambda_upper_weight(xi, xi) - 1.0).abs());
        jump = jump.max(lambda_upper_weight(xi * xi, xi).abs());
    }
    c.check("Λ_x and λ_n continuous at breakpoints", jump < 1e-12, format!("max jump {jump:e}"));
}

fn l_function_validity(c: &mut Checks, rng: &mut ChaCha8Rng) {
    const T: f64 = 30.0;
    for q in [3u64, 5, 7, 11, 101] {
        let f = build_family(q).unwrap();
        let lists: Vec<_> = f.non_principal().map(|ch| critical_zeros_window(&ch, -T, T).unwrap()).collect();
        let by_index = |j: usize| lists.iter().find(|l| l.character == j).unwrap();
        let imag = lists.iter().map(|l| l.max_imaginary).fold(0.0, f64::max);
        c.check(format!("q={q} reality residual < 1e-9"), imag < 1e-9, format!("{imag:e}"));
        let bad: Vec<_> = lists.iter().filter(|l| l.discrepancy != 0 || !l.validated).map(|l| l.character).collect();
        c.check(format!("q={q} contour count = sign changes"), bad.is_empty(), format!("mismatched {bad:?}"));

        let n = f.len();
        let mut reflect = 0.0f64;
        let mut unpaired = Vec::new();
        for l in &lists {
            let conj = by_index((n - l.character) % n);
            let mut mine: Vec<f64> = l.ordinates.iter().filter(|&&g| g < 0.0).map(|g| -g).collect();
            let mut theirs: Vec<f64> = conj.ordinates.iter().copied().filter(|&g| g > 0.0).collect();
            mine.sort_by(f64::total_cmp);
            theirs.sort_by(f64::total_cmp);
            if mine.len() != theirs.len() {
                unpaired.push(l.character);
            }
            for (a, b) in mine.iter().zip(&theirs) {
                reflect = reflect.max((a - b).abs());
            }
        }
        c.check(
            format!("q={q} reflected spectra pair"),
            reflect < 1e-8 && unpaired.is_empty(),
            format!("max gap {reflect:e}, unpaired {unpaired:?}"),
        );

        let ev = FamilyEvaluator::new(&f);
        let mut count_err = 0.0f64;
        let mut odd = 0.0f64;
        let mut drawn = 0;
        while drawn < 20 {
            let t: f64 = rng.gen_range(0.5..T - 0.5);
            if lists.iter().flat_map(|l| &l.ordinates).any(|g| (g.abs() - t).abs() < 1e-6) {
                continue;
            }
            drawn += 1;
            let plus = family_s(&ev, t).unwrap();
            let minus = family_s(&ev, -t).unwrap();
            for l in &lists {
                let j = l.character;
                let cj = (n - j) % n;
                let parity = f.character(j).unwrap().parity();
                let predicted = n_formula_from(t, q, parity, plus[j].unwrap() + plus[cj].unwrap());
                let counted = l.ordinates.iter().filter(|g| g.abs() <= t).count() as f64;
                count_err = count_err.max((predicted - counted).abs());
                odd = odd.max((minus[cj].unwrap() + plus[j].unwrap()).abs());
            }
        }
        c.check(format!("q={q} N(t, χ) = pair count at 20 t"), count_err < 1e-6, format!("max |N − count| {count_err:e}"));
        c.check(format!("q={q} S(−t, χ̄) = −S(t, χ)"), odd < 1e-8, format!("max {odd:e}"));
    }
}

fn littlewood(c: &mut Checks) {
    for (label, a, sigma_p, t1, t2) in
        [("zero-free", 2.0, 1.5, 0.5, 8.5), ("one zero", 2.0, 0.5, 1.0, 2.0 * PI / LN_2 + 3.0)]
    {
        match littlewood_identity_check(a, sigma_p, t1, t2) {
            Ok(r) => {
                let want = if label == "zero-free" { 0 } else { 1 };
                c.check(
                    format!("{label}: lhs = rhs, {want} zero(s)"),
                    (r.lhs - r.rhs).abs() < 1e-6 && r.zeros == want,
                    format!("lhs {} rhs {} zeros {}", r.lhs, r.rhs, r.zeros),
                );
            }
            Err(e) => c.check(label, false, e.to_string()),
        }
    }
}

fn twisted_moment(c: &mut Checks, rng: &mut ChaCha8Rng) {
    for q in [101u64, 499] {
        let f = build_family(q).unwrap();
        for k in [1u32, 2] {
            let y = (q as f64).powf(1.0 / k as f64).floor();
            let primes = primes_up_to(y as usize).len();
            let mut failed = 0;
            let mut relaxed_failed = 0;
            for _ in 0..50 {
                let coeffs: Vec<Complex64> =
                    (0..primes).map(|_| Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0 * PI))).collect();
                let m = twisted_prime_moment(&f, y, &coeffs, 0.5, k, 1).unwrap();
                failed += usize::from(!m.holds);
                relaxed_failed += usize::from(m.lhs > m.relaxed_rhs);
            }
            c.known(
                format!("q={q} k={k}: lhs ≤ rhs on 50 draws"),
                failed == 0,
                format!("{failed}/50 draws exceed"),
                if k == 1 {
                    "orthogonality gives lhs = ((q−1)R − |T|²)/(q−2), which exceeds rhs = R whenever R > |T|²"
                } else {
                    "the diagonal of the 2k-th moment carries multinomial weights up to k!"
                },
            );
            c.check(
                format!("q={q} k={k}: lhs ≤ (q−1)/(q−2)·k!·rhs"),
                relaxed_failed == 0,
                format!("{relaxed_failed}/50 draws exceed"),
            );
        }
    }
    let f = build_family(5).unwrap();
    let m = twisted_prime_moment(&f, 2.0, &[Complex64::new(1.0, 0.0)], 0.5, 1, 1).unwrap();
    let ulp = 4.0 * f64::EPSILON;
    c.check(
        "q=5 y=2: lhs = rhs = 1/2",
        (m.lhs - 0.5).abs() <= ulp && (m.rhs - 0.5).abs() <= ulp,
        format!("lhs {} rhs {}", m.lhs, m.rhs),
    );
}

fn asymptotic_desk_checks(c: &mut Checks, rng: &mut ChaCha8Rng) {
    for q in [101u64, 499, 997] {
        let ts: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let avg = average_s_experiment(q, &ts).unwrap();
        let worst = avg.rows.iter().filter_map(|r| r.statistic).fold(0.0, f64::max);
        c.check(format!("q={q} |𝔼 S| < 982"), avg.flagged() == 0 && worst < C0, format!("max {worst}"));

        let betas: Vec<f64> = std::iter::once(0.0).chain((0..4).map(|_| rng.gen_range(0.0..30.0))).collect();
        let ms = mean_square_experiment(q, &betas).unwrap();
        let beta = |r: &ExperimentRow| r.keys[0].as_f64().unwrap();
        let all_below = ms.rows.iter().all(|r| r.statistic.is_some_and(|s| s < mean_square_bound(beta(r)).unwrap()));
        let worst = ms.rows.iter().filter_map(|r| r.statistic).fold(0.0, f64::max);
        c.check(format!("q={q} 𝔼 S̃² < mean_square_bound(β)"), all_below && ms.flagged() == 0, format!("max {worst}"));

        let kappa = 0.1249;
        let eps = 0.1;
        let lq = (q as f64).ln();
        let edge = 0.95 * (q as f64).powf(0.25 - eps);
        let sigma_min = 0.5 + 5.0 / (8.0 * kappa * lq);
        let mut nonzero = Vec::new();
        for sigma in [sigma_min + 0.01, sigma_min + 0.5, sigma_min + 1.5] {
            let w = DensityWindow { kappa, sigma, t1: -edge, t2: edge, eps };
            match density_empirics(q, w) {
                Ok(rep) => {
                    let r = &rep.rows[0];
                    if r.statistic != Some(0.0) || !(r.bound > 0.0) {
                        nonzero.push(format!("σ={sigma:.3}: {:?} vs {}", r.statistic, r.bound));
                    }
                }
                Err(e) => nonzero.push(format!("σ={sigma:.3}: {e}")),
            }
        }
        c.check(format!("q={q} density count 0 with positive bound"), nonzero.is_empty(), nonzero.join("; "));
    }
    let moll = mollifier_convergence(&[10.0, 31.6, 100.0, 316.2, 1000.0]).unwrap();
    let worst = moll.rows.iter().filter_map(|r| r.statistic).fold(0.0, f64::max);
    c.check("gcd deviations below the calibrated bound", worst < CONVERGENCE_BOUND, format!("max {worst}"));
}

fn formula_behavior(c: &mut Checks) {
    let at_zero = mean_square_bound(0.0).unwrap();
    c.check("mean_square_bound(0) = 3857296", at_zero == 3_857_296.0, format!("{at_zero}"));
    let near: Vec<f64> = [1.0, 1e-2, 1e-4, 1e-6].iter().map(|h| proportion_lower_bound(C0 + h).unwrap()).collect();
    let decreasing = near.windows(2).all(|w| w[1] < w[0]);
    c.check("proportion → 0 as β → C₀⁺", decreasing && near[3] < 1e-12, format!("{near:?}"));
    let far = proportion_lower_bound(1e6).unwrap();
    c.check("proportion(10^6) > 0.99", far > 0.99, format!("{far}"));
}

fn main() -> ExitCode {
    type Run<'a> = Box<dyn FnOnce(&mut Checks) + 'a>;
    let mut r1 = ChaCha8Rng::seed_from_u64(SEED);
    let mut r2 = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut r3 = ChaCha8Rng::seed_from_u64(SEED + 2);
    let criteria: Vec<(u8, &str, u64, Run)> = vec![
        (1, "constant reproduction", 10, Box::new(constant_reproduction)),
        (2, "optimizer recovery", 300, Box::new(optimizer_recovery)),
        (3, "oracle equivalence", 120, Box::new(oracle_equivalence)),
        (4, "L-function validity", 600, Box::new(|c| l_function_validity(c, &mut r1))),
        (5, "Littlewood identity", 10, Box::new(littlewood)),
        (6, "twisted prime moment", 60, Box::new(|c| twisted_moment(c, &mut r2))),
        (7, "asymptotic desk checks", 1200, Box::new(|c| asymptotic_desk_checks(c, &mut r3))),
        (8, "mean-square and proportion formulas", 1, Box::new(formula_behavior)),
    ];
    let mut hard_failures = 0;
    for (id, name, limit, run) in criteria {
        let mut checks = Checks::default();
        let start = Instant::now();
        run(&mut checks);
        let elapsed = start.elapsed();
        checks.check(
            format!("runtime < {limit} s"),
            elapsed < Duration::from_secs(limit),
            format!("{:.2} s", elapsed.as_secs_f64()),
        );
        let failed: Vec<&Check> = checks.0.iter().filter(|c| !c.ok).collect();
        let verdict = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} {name}: {verdict} ({}/{} checks, {:.2} s)",
            checks.0.len() - failed.len(),
            checks.0.len(),
            elapsed.as_secs_f64()
        );
        for f in failed {
            match f.known {
                Some(why) => println!("    known: {}: {} [{why}]", f.label, f.detail),
                None => {
                    hard_failures += 1;
                    println!("    {}: {}", f.label, f.detail);
                }
            }
        }
    }
    if let Ok(d) = big_d(&DParams { kappa: 0.125 - 1e-10, ..DParams::headline() }) {
        println!("note: √D as κ → 1/8 is {:.4}", d.sqrt());
    }
    if hard_failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
