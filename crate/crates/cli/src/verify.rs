//! Closed form against oracle, suite by suite.

use ancomb::numerics::{
    binomial, catalan, harmonic, qpoch, rat, rat_int, rat_to_f64, TruncSeries,
};
use ancomb::sim::binomial_z_score;
use ancomb::{counter, digits, dst, fm, register, slices, sums, BigRat, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::format::{decimal, Row};
use crate::row;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    Numerics,
    Register,
    Counter,
    Fm,
    Dst,
    Slices,
    Sums,
    Digits,
    All,
}

impl Suite {
    fn parts(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Numerics, Register, Counter, Fm, Dst, Slices, Sums, Digits],
            s => vec![s],
        }
    }
}

/// One comparison of a computed quantity against an independent oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub params: Vec<(String, String)>,
    pub exact: String,
    pub oracle: String,
    pub tolerance: String,
    pub pass: bool,
}

impl OracleReport {
    pub fn to_row(&self) -> Row {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        row!(
            "quantity" => self.quantity.as_str(),
            "params" => params.join(";"),
            "exact" => self.exact.as_str(),
            "oracle" => self.oracle.as_str(),
            "tolerance" => self.tolerance.as_str(),
            "pass" => self.pass,
        )
    }
}

fn params(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn fmt_f(v: f64) -> String {
    format!("{v:.12e}")
}

fn rational(quantity: &str, p: &[(&str, String)], exact: &BigRat, oracle: &BigRat) -> OracleReport {
    OracleReport {
        quantity: quantity.into(),
        params: params(p),
        exact: format!("{}/{}", exact.numer(), exact.denom()),
        oracle: format!("{}/{}", oracle.numer(), oracle.denom()),
        tolerance: "exact".into(),
        pass: exact == oracle,
    }
}

fn numeric(quantity: &str, p: &[(&str, String)], exact: f64, oracle: f64, tol: f64) -> OracleReport {
    OracleReport {
        quantity: quantity.into(),
        params: params(p),
        exact: fmt_f(exact),
        oracle: fmt_f(oracle),
        tolerance: fmt_f(tol),
        pass: (exact - oracle).abs() <= tol,
    }
}

/// An exhaustive scan: `exact` is the number of cases, `oracle` the number
/// that agreed; the first disagreement, if any, goes into the parameters.
fn scan(quantity: &str, p: &[(&str, String)], cases: u64, failures: &[String]) -> OracleReport {
    let mut ps = params(p);
    if let Some(f) = failures.first() {
        ps.push(("first_failure".into(), f.clone()));
    }
    OracleReport {
        quantity: quantity.into(),
        params: ps,
        exact: cases.to_string(),
        oracle: (cases - failures.len() as u64).to_string(),
        tolerance: "exact".into(),
        pass: failures.is_empty(),
    }
}

/// `|observed - expected| / σ` against `limit` standard deviations.
fn z_report(quantity: &str, p: &[(&str, String)], z: f64, limit: f64) -> OracleReport {
    OracleReport {
        quantity: quantity.into(),
        params: params(p),
        exact: format!("{z:.6}"),
        oracle: "0".into(),
        tolerance: format!("{limit} sigma"),
        pass: z.is_finite() && z <= limit,
    }
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

/// Settings shared by the suites.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub seed: u64,
    /// Overrides the per-check Monte Carlo trial counts.
    pub trials: Option<u64>,
}

pub fn run_suite(suite: Suite, cfg: &Settings) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for part in suite.parts() {
        let reports = match part {
            Suite::Numerics => numerics_suite()?,
            Suite::Register => register_suite()?,
            Suite::Counter => counter_suite(cfg)?,
            Suite::Fm => fm_suite(cfg)?,
            Suite::Dst => dst_suite(cfg)?,
            Suite::Slices => slices_suite()?,
            Suite::Sums => sums_suite()?,
            Suite::Digits => digits_suite()?,
            Suite::All => unreachable!("expanded above"),
        };
        out.extend(reports);
    }
    Ok(out)
}

fn numerics_suite() -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();

    let mut fails = Vec::new();
    for n in 1..=64u64 {
        let rhs = qpoch(n - 1) * (BigRat::one() - BigRat::new(BigInt::one(), BigInt::one() << n));
        if qpoch(n) != rhs {
            fails.push(format!("n={n}"));
        }
    }
    out.push(scan("qpoch recurrence", &[("n_max", s(64))], 64, &fails));

    let mut fails = Vec::new();
    let mut cases = 0;
    for n in 1..=100i64 {
        for k in 0..=n {
            cases += 1;
            if binomial(n, k)? != binomial(n - 1, k - 1)? + binomial(n - 1, k)? {
                fails.push(format!("n={n},k={k}"));
            }
        }
    }
    out.push(scan("pascal rule", &[("n_max", s(100))], cases, &fails));

    let mut fails = Vec::new();
    let mut cases = 0;
    for j in 1..=4u32 {
        let mut prev = BigRat::zero();
        for n in 1..=200u64 {
            cases += 1;
            let h = harmonic(n, j)?;
            if &h - &prev != BigRat::new(BigInt::one(), num_traits::pow(BigInt::from(n), j as usize)) {
                fails.push(format!("n={n},j={j}"));
            }
            prev = h;
        }
    }
    out.push(scan("harmonic telescoping", &[("n_max", s(200)), ("j_max", s(4))], cases, &fails));

    let order = 12;
    let samples = [
        TruncSeries::from_ints(&[1, 2, -3, 5, 0, 7], order),
        TruncSeries::from_ints(&[1, -1], order),
        TruncSeries::from_coeffs(vec![rat(1, 1), rat(1, 2), rat(-2, 3), rat(5, 7)], order),
    ];
    let b = TruncSeries::from_ints(&[3, 1, 4, 1, 5], order).scale(&rat(1, 3));
    let mut fails = Vec::new();
    for (i, a) in samples.iter().enumerate() {
        if &a.log()?.exp()? != a {
            fails.push(format!("exp(log a{i})"));
        }
        let c = &a.shift(1) * &b;
        if c.exp()?.log()? != c {
            fails.push(format!("log(exp c{i})"));
        }
        if &(a * &b).div(&b)? != a {
            fails.push(format!("(a{i} b)/b"));
        }
    }
    out.push(scan("series round trips", &[("order", s(order))], 3 * samples.len() as u64, &fails));
    Ok(out)
}

fn register_suite() -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for n in 1..=12u64 {
        let exact = register::RegisterCensus::exact(n)?;
        let enumerated = register::RegisterCensus::enumerated(n)?;
        let fails: Vec<String> = exact
            .counts
            .keys()
            .chain(enumerated.counts.keys())
            .filter(|&&p| exact.get(p) != enumerated.get(p))
            .map(|p| format!("p={p}"))
            .collect();
        out.push(scan(
            "register census vs enumeration",
            &[("n", s(n))],
            exact.counts.len().max(enumerated.counts.len()) as u64,
            &fails,
        ));
        out.push(rational(
            "register census total vs catalan",
            &[("n", s(n))],
            &rat_int(exact.total()),
            &rat_int(catalan(n)),
        ));
    }

    let order = 30;
    let mut fails = Vec::new();
    let mut cases = 0;
    for p in 1..=4u32 {
        let series = register::register_series(p, order);
        for n in 1..=order as u64 {
            cases += 1;
            if series.coeff(n as usize) != Some(&rat_int(register::count_register(n, p)?)) {
                fails.push(format!("n={n},p={p}"));
            }
        }
    }
    out.push(scan("register series coefficients", &[("n_max", s(order)), ("p_max", s(4))], cases, &fails));

    let z = register::catalan_substitution(order);
    let mut fails = Vec::new();
    for p in 1..=3u32 {
        if register::register_series(p, order).compose(&z)? != register::register_u_closed(p, order) {
            fails.push(format!("p={p}"));
        }
    }
    out.push(scan("register substitution closed form", &[("order", s(order))], 3, &fails));

    let d0 = register::register_d0(1e-12)?;
    for n in [1024u64, 2048, 4096] {
        let mean = rat_to_f64(&register::register_mean(n)?);
        let log4 = (n as f64).ln() / 4f64.ln();
        out.push(numeric("register mean - log4 n vs d0", &[("n", s(n))], mean - log4, d0, 0.05));
    }
    Ok(out)
}

fn counter_suite(cfg: &Settings) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let order = 64usize;
    let biv = counter::bivariate_iteration(order, order + 1)?;
    let gfs: Vec<TruncSeries> = (1..=order as u32 + 1)
        .map(|l| counter::state_gf_half(l, order))
        .collect::<Result<_>>()?;
    let mut fails = Vec::new();
    let mut sum_fails = Vec::new();
    let mut mean_fails = Vec::new();
    let mut cases = 0;
    for n in 0..=order as u64 {
        let p = counter::pmf_dp(n);
        if p.iter().fold(BigRat::zero(), |a, b| a + b) != BigRat::one() {
            sum_fails.push(format!("n={n}"));
        }
        if counter::pmf_mean(&p) != counter::mean_rice(n) {
            mean_fails.push(format!("n={n}"));
        }
        for l in 1..=(n as u32 + 1) {
            cases += 1;
            let v = &p[l as usize];
            let ok = &counter::pmf_closed(n, l)? == v
                && gfs[l as usize - 1].coeff(n as usize) == Some(v)
                && biv.coeff(n as usize, l as usize) == Some(v);
            if !ok {
                fails.push(format!("n={n},l={l}"));
            }
        }
    }
    out.push(scan("morris pmf four routes", &[("n_max", s(order))], cases, &fails));
    out.push(scan("morris pmf sums to one", &[("n_max", s(order))], order as u64 + 1, &sum_fails));
    out.push(scan("morris rice mean vs pmf mean", &[("n_max", s(order))], order as u64 + 1, &mean_fails));

    for n in [256u64, 512, 1024] {
        let d = (counter::mean_rice_dyadic(2 * n) - counter::mean_rice_dyadic(n)).to_f64();
        out.push(numeric("morris mean doubling step", &[("n", s(n))], d, 1.0, 0.02));
    }

    let trials = cfg.trials.unwrap_or(100_000);
    for n in [2u64, 100, 1000] {
        let h = counter::simulate(n, trials, cfg.seed)?;
        let p = counter::pmf_f64(n);
        let mean: f64 = p.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
        let var = counter::pmf_variance_f64(&p);
        let z = (h.mean() - mean).abs() / (var / trials as f64).sqrt();
        out.push(z_report(
            "morris simulated mean",
            &[("n", s(n)), ("trials", s(trials)), ("seed", s(cfg.seed))],
            z,
            5.0,
        ));
    }
    Ok(out)
}

fn fm_suite(cfg: &Settings) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let mut fails = Vec::new();
    let mut cases = 0;
    for n in 0..=8u64 {
        for k in 0..=4u32 {
            cases += 1;
            if fm::q_exact(n, k) != fm::q_oracle(n, k)? {
                fails.push(format!("n={n},k={k}"));
            }
        }
    }
    out.push(scan("fm q formula vs brute force", &[("n_max", s(8)), ("k_max", s(4))], cases, &fails));

    let qm = fm::QMoments::new(64, 20);
    let q = |n: usize, k: usize| if k > n { BigRat::zero() } else { qm.q(n, k) };
    let mut fails = Vec::new();
    let mut cases = 0;
    for n in 0..=64usize {
        for k in 0..=20usize {
            cases += 1;
            let k_ok = k == 20 || q(n, k + 1) <= q(n, k);
            let n_ok = n == 64 || q(n + 1, k) >= q(n, k);
            if !(k_ok && n_ok) {
                fails.push(format!("n={n},k={k}"));
            }
        }
    }
    out.push(scan("fm q monotone in n and k", &[("n_max", s(64)), ("k_max", s(20))], cases, &fails));

    let dp = fm::q_table_dp(24, 12);
    let mut fails = Vec::new();
    for (n, row) in dp.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            if &fm::q_exact(n as u64, k as u32) != v {
                fails.push(format!("n={n},k={k}"));
            }
        }
    }
    out.push(scan("fm q formula vs conditioning recursion", &[("n_max", s(24)), ("k_max", s(12))], 25 * 13, &fails));

    let mut fails = Vec::new();
    for j in 1..=100_000u64 {
        if fm::nu(2 * j) != fm::nu(j) || fm::nu(2 * j + 1) != fm::nu(j) + 1 {
            fails.push(format!("j={j}"));
        }
    }
    out.push(scan("nu doubling recursion", &[("j_max", s(100_000))], 100_000, &fails));

    let tol = 1e-12;
    for x in [0.5, 1.0, 2.0, 5.0] {
        out.push(numeric(
            "psi product vs series",
            &[("x", s(x))],
            fm::psi_product(x, tol)?,
            fm::psi_series(x, tol)?,
            2.0 * tol,
        ));
    }

    let trials = cfg.trials.unwrap_or(1_000_000);
    let h = fm::simulate_fm(8, trials, cfg.seed)?;
    let mut worst = 0.0f64;
    for k in 1..=8u32 {
        let p = rat_to_f64(&fm::q_exact(8, k));
        worst = worst.max(binomial_z_score(h.tail(k as u64), p, trials));
    }
    out.push(z_report(
        "fm simulated P(R >= k), worst k",
        &[("n", s(8)), ("trials", s(trials)), ("seed", s(cfg.seed))],
        worst,
        5.0,
    ));

    let tol = 1e-9;
    for n in [512u64, 1024] {
        let d = fm::mean_r(2 * n, tol)? - fm::mean_r(n, tol)?;
        out.push(numeric("fm mean doubling step", &[("n", s(n))], d, 1.0, 0.02));
    }
    out.push(numeric(
        "fm constant stabilization",
        &[("n", s(2048)), ("m", s(4096))],
        fm::fm_constant_empirical(2048, tol)?,
        fm::fm_constant_empirical(4096, tol)?,
        1e-3,
    ));
    out.push(rational("fm mean exact", &[("n", s(1))], &fm::mean_r_exact(1), &rat(1, 2)));
    Ok(out)
}

fn dst_suite(cfg: &Settings) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let ell = dst::ell_table(64);
    let mut fails = Vec::new();
    for n in 0..=20u64 {
        let f = dst::endnode_poly(n)?.poly;
        if f.derivative_at_one() != ell[n as usize] || f.sum_coeffs() != BigRat::one() {
            fails.push(format!("n={n}"));
        }
    }
    out.push(scan("dst F_n'(1) vs recurrence, F_n(1) = 1", &[("n_max", s(20))], 21, &fails));

    let mut fails = Vec::new();
    for n in 2..=64u64 {
        if dst::ell_closed(n) != ell[n as usize] {
            fails.push(format!("n={n}"));
        }
    }
    out.push(scan("dst closed form vs recurrence", &[("n_max", s(64))], 63, &fails));

    let mut fails = Vec::new();
    for n in 0..=64u64 {
        if dst::ell_from_hat(n) != ell[n as usize] {
            fails.push(format!("n={n}"));
        }
    }
    out.push(scan("dst Poisson reconstruction vs recurrence", &[("n_max", s(64))], 65, &fails));

    let mut fails = Vec::new();
    for n in 0..=64u64 {
        if dst::ell_hat(n) != dst::ell_hat_closed(n) {
            fails.push(format!("n={n}"));
        }
    }
    out.push(scan("dst Poisson iteration vs closed form", &[("n_max", s(64))], 65, &fails));

    let n = 4096u64;
    out.push(numeric(
        "dst endnodes per key",
        &[("n", s(n))],
        dst::ell_closed_dyadic(n).to_f64() / n as f64,
        0.372048,
        1e-3,
    ));
    let c = dst::dst_constant(1e-12)?;
    out.push(numeric("dst linear constant", &[], c.value, 0.372048, 1e-6));

    let tol = 1e-10;
    for z in [-1.0, -0.5, 0.0, 1.0, 5.0] {
        out.push(numeric(
            "dst R* series vs partial fractions",
            &[("z", s(z))],
            dst::r_star_series(z, tol)?,
            dst::r_star_partial_fractions(z, tol)?,
            2.0 * tol,
        ));
    }
    for chk in dst::euler_identity_checks(1e-12)? {
        out.push(numeric(chk.name, &[], chk.lhs, chk.rhs, 1e-12));
    }

    let trials = cfg.trials.unwrap_or(100_000);
    let n = 16u64;
    let f = dst::endnode_poly(n)?.poly;
    let mean = rat_to_f64(&f.derivative_at_one());
    let second: f64 = f.coeffs().iter().enumerate().map(|(k, c)| (k * k) as f64 * rat_to_f64(c)).sum();
    let var = second - mean * mean;
    let h = dst::simulate_dst(n, trials, cfg.seed)?;
    let z = (h.mean() - mean).abs() / (var / trials as f64).sqrt();
    out.push(z_report(
        "dst simulated endnode mean",
        &[("n", s(n)), ("trials", s(trials)), ("seed", s(cfg.seed))],
        z,
        5.0,
    ));
    Ok(out)
}

fn slices_suite() -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let order = 40;
    let dp = slices::count_dp_table(order as u64)?;
    let closed = slices::gf_closed(order);
    let sliced = slices::slice_total(order);
    let mut fails = Vec::new();
    for n in 1..=order {
        let h = rat_int(dp[n].clone());
        if closed.coeff(n) != Some(&h) || sliced.coeff(n) != Some(&h) {
            fails.push(format!("n={n}"));
        }
    }
    out.push(scan("level sequences: dp vs closed form vs slices", &[("n_max", s(order))], order as u64, &fails));

    let start = [1i64, 1, 2, 3, 5, 9, 16, 28];
    let mut fails = Vec::new();
    for (i, v) in start.iter().enumerate() {
        if closed.coeff(i + 1) != Some(&rat(*v, 1)) {
            fails.push(format!("n={}", i + 1));
        }
    }
    out.push(scan("level sequences: first terms", &[], start.len() as u64, &fails));

    let is_nonneg_int = |c: &BigRat| c.is_integer() && !c.is_negative();
    let mut fails = Vec::new();
    let mut st = slices::SliceState::first(16);
    for _ in 0..16 {
        let ok = (0..=16).all(|i| (0..=16).all(|j| st.f.coeff(i, j).is_none_or(is_nonneg_int)));
        if !ok {
            fails.push(format!("k={}", st.k));
        }
        st = slices::slice_iterate(&st);
    }
    if !closed.coeffs().iter().all(is_nonneg_int) {
        fails.push("F(q,1)".into());
    }
    out.push(scan("level sequences: nonnegative integer coefficients", &[("order", s(16))], 17, &fails));

    let g = slices::growth_fit(60)?;
    out.push(numeric("level sequences: dominant pole", &[], g.pole, 0.557_367_871_9, 1e-8));
    out.push(numeric("level sequences: 1/pole vs ratio", &[("n", s(60))], 1.0 / g.pole, g.rate, 1e-4));
    out.push(numeric("level sequences: growth ratio", &[("n", s(60))], g.rate, 1.794147, 1e-4));
    out.push(numeric("level sequences: amplitude", &[("n", s(60))], g.amplitude, 0.25450, 1e-3));
    Ok(out)
}

fn sums_suite() -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let mut fails = Vec::new();
    let mut cases = 0;
    for n in 1..=30u64 {
        for m in 1..=5u32 {
            cases += 1;
            if sums::alt_binom_sum(n, m)? != sums::harmonic_exp_extract(n, m)? {
                fails.push(format!("n={n},m={m}"));
            }
        }
    }
    out.push(scan("alternating binomial sum vs exponential extraction", &[("n_max", s(30)), ("m_max", s(5))], cases, &fails));

    let mut fails = Vec::new();
    let mut cases = 0;
    for n in 1..=30u64 {
        for m in 1..=3u32 {
            cases += 1;
            if sums::alt_binom_sum(n, m)? != sums::harmonic_polynomial(n, m)? {
                fails.push(format!("n={n},m={m}"));
            }
        }
    }
    out.push(scan("alternating binomial sum vs harmonic polynomials", &[("n_max", s(30)), ("m_max", s(3))], cases, &fails));

    for (p, q) in [(1u32, 2u32), (1, 3), (2, 4)] {
        let b = sums::euler_sum_bracketed(p, q, 1e-8)?;
        let target = sums::euler_sum_target(p, q, 1e-13)?.expect("tabulated pair");
        out.push(numeric("euler sum", &[("p", s(p)), ("q", s(q))], b.value, target, 1e-6));
    }

    let mut worst = 0.0f64;
    for n in 1..=50u64 {
        let lhs = rat_to_f64(&sums::ramanujan_q(n)?) + sums::ramanujan_r(n, 1e-16)?;
        let target = sums::qr_sum_target(n);
        worst = worst.max(((lhs - target) / target).abs());
    }
    out.push(numeric("ramanujan Q + R vs n! e^n / n^n, worst relative", &[("n_max", s(50))], worst, 0.0, 1e-10));

    let (lo, hi) = (2.0 / 21.0, 8.0 / 45.0);
    let mut fails = Vec::new();
    for n in 1..=200u64 {
        let k = sums::theta_k(n)?.k;
        if !(k > lo && k < hi) {
            fails.push(format!("n={n},k={k}"));
        }
    }
    out.push(scan("ramanujan k(n) inside (2/21, 8/45)", &[("n_max", s(200))], 200, &fails));

    for n in [25u64, 100, 400] {
        let c = sums::q_asymptotic_check(n, (n as f64).powf(-0.5))?;
        out.push(numeric("ramanujan Q(n) vs sqrt(pi n/2) - 1/3", &[("n", s(n))], c.q, c.approx, c.bound));
    }

    let y = sums::tree_function(20)?;
    let mut fails = Vec::new();
    for n in 1..=20u64 {
        let mut fact = BigInt::one();
        for i in 2..=n {
            fact *= i;
        }
        let want = BigRat::new(num_traits::pow(BigInt::from(n), n as usize - 1), fact);
        if y.coeff(n as usize) != Some(&want) {
            fails.push(format!("n={n}"));
        }
    }
    out.push(scan("tree function coefficients", &[("n_max", s(20))], 20, &fails));

    for s_val in [0.25, 0.5] {
        let m = sums::master_theorem_check(s_val, 1e-8)?;
        out.push(numeric("master theorem integral", &[("s", s(s_val))], m.integral, m.rhs, 1e-6));
    }
    Ok(out)
}

fn digits_suite() -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let n_max = 100_000u64;
    let table = digits::DigitFn::new(n_max);
    let fails: Vec<String> = table.first_inconsistency().map(|n| format!("n={n}")).into_iter().collect();
    out.push(scan("digit table: S2/v2, nu = S2, S_GR/theta", &[("n_max", s(n_max))], n_max, &fails));

    let g = digits::gray_telescope_check(n_max)?;
    let fails: Vec<String> = g.first_failure.map(|n| format!("n={n}")).into_iter().collect();
    out.push(scan("gray adjacency and telescoping", &[("n_max", s(n_max))], n_max, &fails));

    let mut fails = Vec::new();
    for n in 1..=100u64 {
        if digits::merge_sum(n)? != digits::merge_sum_by_parts(n)? {
            fails.push(format!("n={n}"));
        }
    }
    out.push(scan("merge sum vs summation by parts", &[("n_max", s(100))], 100, &fails));

    let mut fails = Vec::new();
    for j in 0..40 {
        if digits::delange_f(1 << j)? != 0.0 {
            fails.push(format!("n=2^{j}"));
        }
    }
    out.push(scan("delange F vanishes at powers of two", &[("j_max", s(39))], 40, &fails));

    for case in digits::perron_battery() {
        let r = digits::perron_check(&case, 1.0, 1e-4)?;
        out.push(OracleReport {
            quantity: "mellin-perron".into(),
            params: params(&[("case", r.case.clone()), ("n", s(case.n)), ("m", s(case.m)), ("T", format!("{:.0}", r.height))]),
            exact: decimal(&r.lhs, 12),
            oracle: format!("{:.12}", r.rhs),
            tolerance: fmt_f(1e-4),
            pass: r.pass,
        });
    }
    Ok(out)
}
