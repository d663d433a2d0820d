//! Acceptance criteria 1 to 13. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use ancomb::numerics::{catalan, rat_int, rat_to_f64, BigRat, TruncSeries};
use ancomb::sim::binomial_z_score;
use ancomb::{counter, digits, dst, fm, register, slices, sums};
use num_traits::{One, Zero};

const REGISTER_MEAN_TOL: f64 = 0.05;
const DOUBLING_TOL: f64 = 0.02;
const SIGMA_LIMIT: f64 = 5.0;
const MORRIS_TRIALS: u64 = 100_000;
const FM_TRIALS: u64 = 1_000_000;
const FM_CONSTANT_TOL: f64 = 1e-3;
const DST_PER_KEY: f64 = 0.372048;
const DST_PER_KEY_TOL: f64 = 1e-3;
const EULER_IDENTITY_TOL: f64 = 1e-12;
const POLE: f64 = 0.557_367_871_9;
const POLE_TOL: f64 = 1e-8;
const AMPLITUDE: f64 = 0.25450;
const AMPLITUDE_TOL: f64 = 1e-3;
const RATE: f64 = 1.794147;
const RATE_TOL: f64 = 1e-4;
const EULER_SUM_TOL: f64 = 1e-6;
const QR_REL_TOL: f64 = 1e-10;
const MASTER_TOL: f64 = 1e-6;
const PERRON_TOL: f64 = 1e-4;
const SEED: u64 = 42;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1() -> Outcome {
    let mut trees = 0u64;
    for n in 1..=12 {
        let exact = register::RegisterCensus::exact(n).map_err(err)?;
        let enumerated = register::RegisterCensus::enumerated(n).map_err(err)?;
        ensure(exact == enumerated, format!("census differs at n={n}"))?;
        ensure(exact.total() == catalan(n), format!("total is not Catalan at n={n}"))?;
        trees += u64::try_from(enumerated.total()).unwrap_or(0);
    }
    Ok(format!("{trees} trees enumerated, census equal for n <= 12"))
}

fn c2() -> Outcome {
    let d0 = register::register_d0(1e-12).map_err(err)?;
    let mut worst = 0.0f64;
    for n in [1024u64, 2048, 4096] {
        let mean = rat_to_f64(&register::register_mean(n).map_err(err)?);
        let dev = (mean - (n as f64).ln() / 4f64.ln() - d0).abs();
        worst = worst.max(dev);
        ensure(dev <= REGISTER_MEAN_TOL, format!("n={n}: deviation {dev:.4}"))?;
    }
    Ok(format!("d0={d0:.6}, worst deviation {worst:.4} <= {REGISTER_MEAN_TOL}"))
}

fn c3() -> Outcome {
    let order = 64usize;
    let biv = counter::bivariate_iteration(order, order + 1).map_err(err)?;
    let gfs: Vec<TruncSeries> = (1..=order as u32 + 1)
        .map(|l| counter::state_gf_half(l, order))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    for n in 0..=order as u64 {
        let p = counter::pmf_dp(n);
        ensure(p.iter().fold(BigRat::zero(), |a, b| a + b) == BigRat::one(), format!("mass at n={n}"))?;
        ensure(counter::pmf_mean(&p) == counter::mean_rice(n), format!("mean at n={n}"))?;
        for l in 1..=(n as u32 + 1) {
            let v = &p[l as usize];
            ensure(&counter::pmf_closed(n, l).map_err(err)? == v, format!("closed n={n} l={l}"))?;
            ensure(gfs[l as usize - 1].coeff(n as usize) == Some(v), format!("gf n={n} l={l}"))?;
            ensure(biv.coeff(n as usize, l as usize) == Some(v), format!("bivariate n={n} l={l}"))?;
        }
    }
    let mut worst = 0.0f64;
    for n in [2u64, 100, 1000] {
        let h = counter::simulate(n, MORRIS_TRIALS, SEED).map_err(err)?;
        let p = counter::pmf_f64(n);
        let mean: f64 = p.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
        let sd = (counter::pmf_variance_f64(&p) / MORRIS_TRIALS as f64).sqrt();
        let z = (h.mean() - mean).abs() / sd;
        worst = worst.max(z);
        ensure(z <= SIGMA_LIMIT, format!("simulation at n={n}: z={z:.2}"))?;
    }
    Ok(format!("four routes equal for n <= 64; simulated means within {worst:.2} sigma"))
}

fn c4() -> Outcome {
    let mut steps = Vec::new();
    for n in [256u64, 512, 1024] {
        let d = (counter::mean_rice_dyadic(2 * n) - counter::mean_rice_dyadic(n)).to_f64();
        ensure((d - 1.0).abs() <= DOUBLING_TOL, format!("n={n}: step {d:.5}"))?;
        steps.push(format!("{d:.4}"));
    }
    Ok(format!("doubling steps {}", steps.join(", ")))
}

fn c5() -> Outcome {
    for n in 0..=8u64 {
        for k in 0..=4u32 {
            ensure(fm::q_exact(n, k) == fm::q_oracle(n, k).map_err(err)?, format!("q({n},{k})"))?;
        }
    }
    let h = fm::simulate_fm(8, FM_TRIALS, SEED).map_err(err)?;
    let mut worst = 0.0f64;
    for k in 1..=8u32 {
        let z = binomial_z_score(h.tail(k as u64), rat_to_f64(&fm::q_exact(8, k)), FM_TRIALS);
        worst = worst.max(z);
    }
    ensure(worst <= SIGMA_LIMIT, format!("simulation z={worst:.2}"))?;
    Ok(format!("q exact for n <= 8, k <= 4; simulation within {worst:.2} sigma"))
}

fn c6() -> Outcome {
    let tol = 1e-9;
    let mut steps = Vec::new();
    for n in [512u64, 1024] {
        let d = fm::mean_r(2 * n, tol).map_err(err)? - fm::mean_r(n, tol).map_err(err)?;
        ensure((d - 1.0).abs() <= DOUBLING_TOL, format!("n={n}: step {d:.5}"))?;
        steps.push(format!("{d:.4}"));
    }
    let a = fm::fm_constant_empirical(2048, tol).map_err(err)?;
    let b = fm::fm_constant_empirical(4096, tol).map_err(err)?;
    ensure((a - b).abs() <= FM_CONSTANT_TOL, format!("phi {a:.6} vs {b:.6}"))?;
    Ok(format!("doubling steps {}; phi(2048)={a:.6}, phi(4096)={b:.6}", steps.join(", ")))
}

fn c7() -> Outcome {
    let ell = dst::ell_table(64);
    for n in 0..=64u64 {
        if n >= 2 {
            ensure(dst::ell_closed(n) == ell[n as usize], format!("closed n={n}"))?;
        }
        ensure(dst::ell_from_hat(n) == ell[n as usize], format!("reconstruction n={n}"))?;
    }
    for n in 0..=20u64 {
        let f = dst::endnode_poly(n).map_err(err)?.poly;
        ensure(f.derivative_at_one() == ell[n as usize], format!("F'(1) n={n}"))?;
    }
    let per_key = dst::ell_closed_dyadic(4096).to_f64() / 4096.0;
    ensure((per_key - DST_PER_KEY).abs() <= DST_PER_KEY_TOL, format!("ell/n = {per_key:.6}"))?;
    let checks = dst::euler_identity_checks(EULER_IDENTITY_TOL).map_err(err)?;
    let mut worst = 0.0f64;
    for chk in checks.iter().take(2) {
        let d = (chk.lhs - chk.rhs).abs();
        worst = worst.max(d);
        ensure(d <= EULER_IDENTITY_TOL, format!("{}: diff {d:e}", chk.name))?;
    }
    Ok(format!("routes equal for n <= 64; ell(4096)/4096 = {per_key:.6}; identities within {worst:.1e}"))
}

fn c8() -> Outcome {
    let order = 40;
    let dp = slices::count_dp_table(order as u64).map_err(err)?;
    let closed = slices::gf_closed(order);
    for n in 1..=order {
        ensure(closed.coeff(n) == Some(&rat_int(dp[n].clone())), format!("n={n}"))?;
    }
    let start = [1i64, 1, 2, 3, 5, 9, 16, 28];
    for (i, v) in start.iter().enumerate() {
        ensure(dp[i + 1] == (*v).into(), format!("first terms at n={}", i + 1))?;
    }
    let g = slices::growth_fit(60).map_err(err)?;
    ensure((g.pole - POLE).abs() <= POLE_TOL, format!("pole {:.10}", g.pole))?;
    ensure((g.amplitude - AMPLITUDE).abs() <= AMPLITUDE_TOL, format!("amplitude {:.6}", g.amplitude))?;
    ensure((g.rate - RATE).abs() <= RATE_TOL, format!("rate {:.7}", g.rate))?;
    Ok(format!("pole {:.10}, H60 rho^60 = {:.5}, H60/H59 = {:.6}", g.pole, g.amplitude, g.rate))
}

fn c9() -> Outcome {
    for n in 1..=30u64 {
        for m in 1..=5u32 {
            let a = sums::alt_binom_sum(n, m).map_err(err)?;
            ensure(a == sums::harmonic_exp_extract(n, m).map_err(err)?, format!("n={n} m={m}"))?;
            if m <= 3 {
                ensure(a == sums::harmonic_polynomial(n, m).map_err(err)?, format!("polynomial n={n} m={m}"))?;
            }
        }
    }
    Ok("exact for n <= 30, m <= 5; harmonic polynomials m = 1, 2, 3".into())
}

fn c10() -> Outcome {
    let mut worst = 0.0f64;
    for (p, q) in [(1u32, 2u32), (1, 3), (2, 4)] {
        let b = sums::euler_sum_bracketed(p, q, EULER_SUM_TOL / 10.0).map_err(err)?;
        let target = sums::euler_sum_target(p, q, 1e-13).map_err(err)?.ok_or("no target")?;
        let d = (b.value - target).abs();
        worst = worst.max(d);
        ensure(b.error <= EULER_SUM_TOL / 10.0, format!("S_{p},{q} tail bound {:e}", b.error))?;
        ensure(d <= EULER_SUM_TOL, format!("S_{p},{q}: diff {d:e}"))?;
    }
    Ok(format!("worst difference {worst:.1e}"))
}

fn c11() -> Outcome {
    for n in 1..=50u64 {
        let lhs = rat_to_f64(&sums::ramanujan_q(n).map_err(err)?) + sums::ramanujan_r(n, 1e-16).map_err(err)?;
        let target = sums::qr_sum_target(n);
        ensure(((lhs - target) / target).abs() <= QR_REL_TOL, format!("Q+R at n={n}"))?;
    }
    let (lo, hi) = (2.0 / 21.0, 8.0 / 45.0);
    let mut kmin = f64::INFINITY;
    for n in 1..=200u64 {
        let k = sums::theta_k(n).map_err(err)?.k;
        kmin = kmin.min(k);
        ensure(k > lo && k < hi, format!("k({n}) = {k}"))?;
    }
    for n in [25u64, 100, 400] {
        let c = sums::q_asymptotic_check(n, (n as f64).powf(-0.5)).map_err(err)?;
        ensure(c.pass, format!("Q({n}) asymptotic: {} vs {}", c.q, c.approx))?;
    }
    for s in [0.25, 0.5] {
        let m = sums::master_theorem_check(s, 1e-8).map_err(err)?;
        ensure((m.integral - m.rhs).abs() <= MASTER_TOL, format!("master theorem at s={s}"))?;
    }
    Ok(format!("min k(n) = {kmin:.6} > 2/21; Q asymptotics and master theorem hold"))
}

fn c12() -> Outcome {
    let n_max = 100_000;
    let t = digits::DigitFn::new(n_max);
    ensure(t.first_inconsistency().is_none(), format!("digit table at {:?}", t.first_inconsistency()))?;
    let g = digits::gray_telescope_check(n_max).map_err(err)?;
    ensure(g.first_failure.is_none(), format!("gray at {:?}", g.first_failure))?;
    let battery = digits::perron_battery();
    let mut worst = 0.0f64;
    let mut orders = std::collections::BTreeSet::new();
    for case in &battery {
        orders.insert(case.m);
        let r = digits::perron_check(case, 1.0, PERRON_TOL).map_err(err)?;
        worst = worst.max(r.err);
        ensure(r.pass, format!("{}: err {:e}", r.case, r.err))?;
    }
    ensure(battery.len() == 12 && orders.len() == 2, "battery shape".into())?;
    Ok(format!("identities hold for n <= {n_max}; Perron worst error {worst:.1e}"))
}

fn c13() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ancomb"))
            .args(["verify", "--suite", "all", "--seed", "42"])
            .output()
            .map_err(err)
    };
    let start = Instant::now();
    let a = run()?;
    let b = run()?;
    let secs = start.elapsed().as_secs_f64();
    ensure(a.status.code() == Some(0), format!("first run exit {:?}", a.status.code()))?;
    ensure(b.status.code() == Some(0), format!("second run exit {:?}", b.status.code()))?;
    ensure(a.stdout == b.stdout, "outputs differ".into())?;
    ensure(secs / 2.0 < 600.0, format!("suite took {:.0} s", secs / 2.0))?;
    let reports = a.stdout.iter().filter(|&&c| c == b'\n').count();
    Ok(format!("{reports} reports, byte-identical, {:.1} s per run", secs / 2.0))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 13] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
        (12, c12),
        (13, c13),
    ];
    let mut failed = 0;
    for (i, f) in criteria {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {i:>2}: PASS ({secs:.1} s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {i:>2}: FAIL ({secs:.1} s) {msg}");
            }
        }
    }
    println!("acceptance: {} of 13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
