//! Subcommand bodies. Each returns rows for the chosen output format.

use ancomb::numerics::{rat_to_f64, BigRat};
use ancomb::{counter, digits, dst, fm, register, slices, sums, Error, Result};


use crate::format::Row;
use crate::verify::{run_suite, Settings};
use crate::{
    row, DigitsArgs, DstArgs, FmArgs, MorrisArgs, Outcome, RamanujanArgs, RegisterArgs, SlicesArgs, SumsArgs,
    VerifyArgs,
};

/// Caps on table sizes so a typo cannot start an hours-long run.
const TABLE_CAP: u64 = 100_000;

fn at_least(what: &str, v: u64, min: u64) -> Result<()> {
    if v < min {
        return Err(Error::InvalidArgument(format!("--{what} must be >= {min}, got {v}")));
    }
    Ok(())
}

fn at_most(what: &str, v: u64, max: u64) -> Result<()> {
    if v > max {
        let e = Error::LimitExceeded { requested: v, limit: max };
        return Err(Error::InvalidArgument(format!("--{what}: {e}")));
    }
    Ok(())
}

fn histogram_rows(n: u64, column: &str, h: &ancomb::sim::Histogram) -> Vec<Row> {
    h.counts()
        .iter()
        .map(|(v, c)| row!("n" => n, column => *v, "count" => *c, "frequency" => h.frequency(*v)))
        .collect()
}

pub(crate) fn register(a: &RegisterArgs) -> Result<Outcome> {
    at_least("n", a.n, 1)?;
    if a.mean {
        at_most("n", a.n, 1 << 20)?;
        let mean = register::register_mean(a.n)?;
        let approx = (a.n as f64).ln() / 4f64.ln() + register::register_d0(1e-12)?;
        return Ok(Outcome::ok(vec![row!(
            "n" => a.n,
            "mean" => mean.clone(),
            "mean_decimal" => rat_to_f64(&mean),
            "log4_n_plus_d0" => approx,
        )]));
    }
    let census = if a.enumerate {
        register::RegisterCensus::enumerated(a.n)?
    } else {
        at_most("n", a.n, 1 << 20)?;
        register::RegisterCensus::exact(a.n)?
    };
    let rows = census
        .counts
        .iter()
        .filter(|(p, _)| a.p.is_none_or(|q| q == **p))
        .map(|(p, c)| row!("n" => a.n, "p" => *p, "count" => c.clone()))
        .collect();
    Ok(Outcome::ok(rows))
}

pub(crate) fn morris(a: &MorrisArgs) -> Result<Outcome> {
    at_most("n", a.n, TABLE_CAP)?;
    if let Some(trials) = a.trials {
        let h = counter::simulate(a.n, trials, a.seed)?;
        return Ok(Outcome::ok(histogram_rows(a.n, "level", &h)));
    }
    if a.mean {
        let m = counter::mean_rice_dyadic(a.n);
        return Ok(Outcome::ok(vec![row!("n" => a.n, "mean" => BigRat::from(m.clone()), "mean_decimal" => m.to_f64())]));
    }
    at_most("n", a.n, 4096)?;
    let p = counter::pmf_dp(a.n);
    let rows = p
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(level, pr)| row!("n" => a.n, "level" => level as u64, "probability" => pr))
        .collect();
    Ok(Outcome::ok(rows))
}

pub(crate) fn fm(a: &FmArgs) -> Result<Outcome> {
    if let Some(trials) = a.trials {
        at_most("n", a.n, 1 << 24)?;
        let h = fm::simulate_fm(a.n, trials, a.seed)?;
        return Ok(Outcome::ok(histogram_rows(a.n, "r", &h)));
    }
    if a.sketch {
        at_most("n", a.n, 1 << 24)?;
        let mut bits = ancomb::sim::RandomBits::new(a.seed);
        let mut sketch = fm::UrnSketch::default();
        for _ in 0..a.n {
            sketch.insert(fm::geometric_draw(&mut bits));
        }
        let hex: String = sketch.to_bytes().iter().map(|b| format!("{b:02x}")).collect();
        return Ok(Outcome::ok(vec![row!(
            "n" => a.n,
            "width" => sketch.width() as u64,
            "bitmap_le_hex" => hex,
            "r" => sketch.observe_r() as u64,
            "overflowed" => sketch.overflowed(),
        )]));
    }
    if a.mean {
        at_most("n", a.n, 1 << 20)?;
        let mut r = row!("n" => a.n, "mean" => fm::mean_r(a.n, a.tol)?);
        if a.n <= fm::MEAN_R_EXACT_LIMIT {
            r.push(("mean_exact".into(), fm::mean_r_exact(a.n).into()));
        }
        return Ok(Outcome::ok(vec![r]));
    }
    at_most("n", a.n, 256)?;
    let k_max = a.k.unwrap_or(a.n as u32).min(a.n as u32);
    let qm = fm::QMoments::new(a.n as usize, k_max as usize);
    let rows = (0..=k_max)
        .map(|k| {
            let q = if k == 0 { fm::q_exact(a.n, 0) } else { qm.q(a.n as usize, k as usize) };
            row!("n" => a.n, "k" => k, "probability" => q)
        })
        .collect();
    Ok(Outcome::ok(rows))
}

pub(crate) fn dst(a: &DstArgs) -> Result<Outcome> {
    if a.constant {
        let c = dst::dst_constant(a.tol)?;
        return Ok(Outcome::ok(vec![row!(
            "q_infinity" => c.q_infinity,
            "alpha" => c.alpha,
            "r_star_minus_one" => c.r_star_minus_one,
            "value" => c.value,
        )]));
    }
    let n = a.n.ok_or_else(|| Error::InvalidArgument("--n is required unless --constant is given".into()))?;
    if let Some(trials) = a.trials {
        at_most("n", n, TABLE_CAP)?;
        let h = dst::simulate_dst(n, trials, a.seed)?;
        return Ok(Outcome::ok(histogram_rows(n, "endnodes", &h)));
    }
    if a.mean {
        at_most("n", n, 1 << 14)?;
        let ell = dst::ell_closed_dyadic(n);
        let per_key = if n == 0 { 0.0 } else { ell.to_f64() / n as f64 };
        return Ok(Outcome::ok(vec![row!("n" => n, "ell" => BigRat::from(ell), "per_key" => per_key)]));
    }
    let f = dst::endnode_poly(n)?;
    let rows = f
        .poly
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(k, c)| row!("n" => n, "k" => k as u64, "probability" => c.clone()))
        .collect();
    Ok(Outcome::ok(rows))
}

pub(crate) fn slices(a: &SlicesArgs) -> Result<Outcome> {
    at_least("n", a.n, 1)?;
    at_most("n", a.n, 2000)?;
    if a.report {
        at_least("n", a.n, 2)?;
        let g = slices::growth_fit(a.n)?;
        return Ok(Outcome::ok(vec![row!(
            "n" => a.n,
            "pole" => g.pole,
            "amplitude" => g.amplitude,
            "rate" => g.rate,
            "inverse_pole" => 1.0 / g.pole,
        )]));
    }
    let h = slices::count_dp_table(a.n)?;
    let closed = a.order.map(|o| slices::gf_closed(o.min(a.n as usize)));
    let rows = h
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(n, v)| {
            let mut r = row!("n" => n as u64, "H_n" => v);
            if let Some(c) = &closed {
                if let Some(x) = c.coeff(n) {
                    r.push(("closed_form".into(), x.clone().into()));
                }
            }
            r
        })
        .collect();
    Ok(Outcome::ok(rows))
}

pub(crate) fn sums(a: &SumsArgs) -> Result<Outcome> {
    if a.euler {
        let pairs = match (a.p, a.q) {
            (Some(p), Some(q)) => vec![(p, q)],
            (None, None) => vec![(1, 2), (1, 3), (2, 4)],
            _ => return Err(Error::InvalidArgument("give both --p and --q, or neither".into())),
        };
        let mut rows = Vec::new();
        let mut failed = false;
        for (p, q) in pairs {
            let b = sums::euler_sum_bracketed(p, q, a.tol)?;
            let target = sums::euler_sum_target(p, q, 1e-13)?;
            let mut r = row!("identity" => format!("S_{{{p},{q}}}"), "lhs" => b.value, "tail_bound" => b.error);
            match target {
                Some(t) => {
                    let diff = (b.value - t).abs();
                    let pass = diff <= a.tol + b.error;
                    failed |= !pass;
                    r.extend(row!("rhs" => t, "diff" => diff, "tol" => a.tol, "pass" => pass));
                }
                None => r.extend(row!("rhs" => "", "diff" => "", "tol" => a.tol, "pass" => "")),
            }
            rows.push(r);
        }
        return Ok(Outcome { rows, failed });
    }
    let n = a.n.ok_or_else(|| Error::InvalidArgument("--n is required unless --euler is given".into()))?;
    at_least("n", n, 1)?;
    at_most("n", n, 2000)?;
    let mut rows = Vec::new();
    for m in 1..=a.m {
        let s = sums::alt_binom_sum(n, m)?;
        let e = sums::harmonic_exp_extract(n, m)?;
        rows.push(row!("n" => n, "m" => m, "alt_binom_sum" => s.clone(), "harmonic_exp" => e.clone(), "equal" => s == e));
    }
    Ok(Outcome::ok(rows))
}

pub(crate) fn ramanujan(a: &RamanujanArgs) -> Result<Outcome> {
    at_least("n", a.n, 1)?;
    at_most("n", a.n, 600)?;
    let mut rows = Vec::new();
    for n in 1..=a.n {
        let q = rat_to_f64(&sums::ramanujan_q(n)?);
        let r = sums::ramanujan_r(n, 1e-16)?;
        let tk = sums::theta_k(n)?;
        rows.push(row!(
            "n" => n,
            "Q" => q,
            "R" => r,
            "Q_plus_R" => q + r,
            "n_fact_e_n_over_n_n" => sums::qr_sum_target(n),
            "theta" => tk.theta,
            "k" => tk.k,
        ));
    }
    Ok(Outcome::ok(rows))
}

pub(crate) fn digits(a: &DigitsArgs) -> Result<Outcome> {
    if a.perron {
        let mut rows = Vec::new();
        let mut failed = false;
        for case in digits::perron_battery() {
            let r = digits::perron_check(&case, 1.0, a.tol)?;
            failed |= !r.pass;
            rows.push(row!("case" => r.case, "lhs" => r.lhs, "rhs" => r.rhs, "T" => r.height, "err" => r.err));
        }
        return Ok(Outcome { rows, failed });
    }
    let n = a.n.ok_or_else(|| Error::InvalidArgument("--n is required unless --perron is given".into()))?;
    at_least("n", n, 1)?;
    at_most("n", n, 1 << 20)?;
    if a.merge {
        at_most("n", n, 5000)?;
        let rows = (1..=n)
            .map(|m| digits::merge_sum(m).map(|v| row!("n" => m, "merge_sum" => v)))
            .collect::<Result<_>>()?;
        return Ok(Outcome::ok(rows));
    }
    if a.delange {
        let rows = (1..=n)
            .map(|m| {
                Ok(row!("n" => m, "delange_sum" => digits::delange_sum(m), "F" => digits::delange_f(m)?))
            })
            .collect::<Result<_>>()?;
        return Ok(Outcome::ok(rows));
    }
    let t = digits::DigitFn::new(n);
    let rows = (1..=n as usize)
        .map(|i| {
            row!(
                "n" => i as u64,
                "v2" => t.v2[i],
                "s2" => t.s2[i],
                "theta" => t.theta[i],
                "sgray" => t.s_gray[i],
            )
        })
        .collect();
    Ok(Outcome::ok(rows))
}

pub(crate) fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let reports = run_suite(a.suite, &Settings { seed: a.seed, trials: a.trials })?;
    let failed = reports.iter().any(|r| !r.pass);
    Ok(Outcome {
        rows: reports.iter().map(|r| r.to_row()).collect(),
        failed,
    })
}

