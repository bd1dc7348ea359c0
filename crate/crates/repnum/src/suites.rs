//! Verification suites and calibration of fitted constants.

use num_bigint::BigUint;
use repnum_core::arith::{prime_recip_sum, Residue};
use repnum_core::asymp::{
    fit_secondary_constant, gamma2_at, inductive_claim_sum, r1_gap_sum, shape_ratio_from,
    smooth_squarefull_rstar_sum, tau_growth_max,
};
use repnum_core::moments::{
    cauchy_schwarz_sandwich, histogram, moment_identity_residual, stirling, Engine, OmegaFilter, OmegaKind, Scanner,
};
use repnum_core::repr::{d2_by_sum, Family, RepFamily, Strategy};
use repnum_core::selberg::SieveProblem;
use repnum_core::Result;

use crate::constants::{keys, Constants, ConstantsError, FORMAT_VERSION};
use crate::golden::{format_problem, GoldenCase};
use crate::num_fmt::real;

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { suite, name: name.into(), passed, detail: detail.into() }
    }
}

pub const SUITES: [&str; 6] = ["identities", "sandwich", "sieve", "mertens", "determinism", "fitted"];

/// Decades `10^3, ..., 10^7`.
pub const DECADES: [u64; 5] = [1_000, 10_000, 100_000, 1_000_000, 10_000_000];
/// Grid for shape ratios and the smooth sum.
pub const SHAPE_GRID: [u64; 4] = [10_000, 100_000, 1_000_000, 10_000_000];
pub const SHAPE_FAMILIES: [Family; 3] = [Family::R1, Family::RBigStar, Family::RPrimeStar];
pub const MAX_K: u32 = 8;
/// `x` at which `gamma_1` is fitted.
pub const GAMMA1_X: u64 = 10_000;
/// `x` at which the gap slope is fitted.
pub const GAP_FIT_X: u64 = 100_000;
/// Range of the divisor-growth maximum.
pub const TAU_RANGE: (u64, u64) = (1_000, 1_000_000);

pub fn secondary_grid() -> Vec<u64> {
    (1..=10).map(|i| i * 100_000).collect()
}

fn lnln(x: u64) -> f64 {
    (x as f64).ln().ln()
}

/// Exact moment identities at `x`, the Stirling identity, and the `r2^2` identity for every `x' <= x`.
pub fn identities<S: Scanner>(s: &S, x: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for family in [Family::R0, Family::R1, Family::R2] {
        let mut bad = Vec::new();
        for k in 1..=6 {
            let r = moment_identity_residual(s, family, x, k)?;
            if r != 0 {
                bad.push(format!("k={k}:{r}"));
            }
        }
        let detail = if bad.is_empty() { "residual 0 for k<=6".to_string() } else { bad.join(" ") };
        out.push(Check::new("identities", format!("power_binomial_{family}"), bad.is_empty(), detail));
    }
    out.push(stirling_identity(20, 10)?);
    out.push(r2_square_identity_upto(x)?);
    Ok(out)
}

/// `sum_l S(k, l) x (x-1) ... (x-l+1) = x^k` for `x <= max_x`, `k <= max_k`.
pub fn stirling_identity(max_x: u64, max_k: u32) -> Result<Check> {
    let mut failures = 0;
    for k in 0..=max_k {
        for x in 0..=max_x {
            let mut total = BigUint::from(0u32);
            let mut falling = BigUint::from(1u32);
            for l in 0..=k {
                total += stirling(k, l)? * &falling;
                falling *= BigUint::from(x.saturating_sub(l as u64));
            }
            if total != BigUint::from(x).pow(k) {
                failures += 1;
            }
        }
    }
    Ok(Check::new(
        "identities",
        "stirling_falling_factorial",
        failures == 0,
        format!("x<={max_x} k<={max_k} failures={failures}"),
    ))
}

/// `sum r2^2 = 2 sum r2 + D2(x') - #{p : 2p^2 <= x'}` at every `x' <= x`.
pub fn r2_square_identity_upto(x: u64) -> Result<Check> {
    let engine = Engine::new(x.max(4))?;
    let r2 = engine.counts(RepFamily { family: Family::R2, strategy: Strategy::Bucket }, 1, x + 1)?.counts;
    let d2 = d2_by_sum(x);
    let mut d2_iter = d2.iter().peekable();
    let (mut sq, mut first, mut d, mut diag) = (0u128, 0u128, 0u128, 0u128);
    let mut first_bad = None;
    for n in 1..=x {
        let v = r2[(n - 1) as usize] as u128;
        sq += v * v;
        first += v;
        while let Some(&&(s, c)) = d2_iter.peek() {
            if s > n {
                break;
            }
            d += c as u128;
            d2_iter.next();
        }
        if n % 2 == 0 {
            let h = n / 2;
            let p = h.isqrt();
            if p * p == h && engine.table().is_prime(p) == Some(true) {
                diag += 1;
            }
        }
        if sq + diag != 2 * first + d && first_bad.is_none() {
            first_bad = Some(n);
        }
    }
    let detail = match first_bad {
        None => format!("holds for all x<={x}; sum r2^2={sq}"),
        Some(n) => format!("first failure at x={n}"),
    };
    Ok(Check::new("identities", "r2_square_exact", first_bad.is_none(), detail))
}

/// `m1^2 / m2 <= M <= m1` for `r0, r1, r2` at each `x`.
pub fn sandwich<S: Scanner>(s: &S, xs: &[u64]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for family in [Family::R0, Family::R1, Family::R2] {
        for &x in xs {
            let w = cauchy_schwarz_sandwich(s, family, x)?;
            out.push(Check::new(
                "sandwich",
                format!("{family}_x{x}"),
                w.holds,
                format!("m1={} m2={} M={}", w.first, w.second, w.zeroth),
            ));
        }
    }
    Ok(out)
}

/// Dominance and `mu+` admissibility on each problem, plus the recorded count for golden cases.
pub fn sieve_cases(cases: &[(SieveProblem, Option<u64>)]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (i, (p, expected)) in cases.iter().enumerate() {
        let exact = p.sifted_count_exact()?;
        let bound = p.sieve_upper_bound()?;
        let dominates = bound.total >= num_rational::BigRational::from_integer(exact.into());
        let admissible = p.mu_plus_admissible()?;
        let recorded = expected.is_none_or(|e| e == exact);
        out.push(Check::new(
            "sieve",
            format!("problem_{i}"),
            dominates && admissible && recorded,
            format!(
                "{} exact={exact} bound={} admissible={admissible}{}",
                format_problem(p),
                real(bound.value()),
                expected.map_or(String::new(), |e| format!(" recorded={e}"))
            ),
        ));
    }
    Ok(out)
}

pub fn golden_inputs(cases: &[GoldenCase]) -> Vec<(SieveProblem, Option<u64>)> {
    cases.iter().map(|c| (c.problem.clone(), Some(c.expected))).collect()
}

/// Boundedness of the residue-class difference and stability of both constants between `x/10` and `x`.
pub fn mertens(x: u64) -> Result<Vec<Check>> {
    let x = x.max(100);
    let one = prime_recip_sum(x, Some(Residue::One));
    let three = prime_recip_sum(x, Some(Residue::Three));
    let mut out = vec![Check::new(
        "mertens",
        format!("difference_x{x}"),
        (one - three).abs() <= 0.5,
        format!("sum1={} sum3={} diff={}", real(one), real(three), real(one - three)),
    )];
    let lnln_x = |y: u64| 0.5 * lnln(y);
    for (a, here) in [(1u64, one), (3, three)] {
        let lo = prime_recip_sum(x / 10, Residue::from_value(a)) - lnln_x(x / 10);
        let hi = here - lnln_x(x);
        out.push(Check::new(
            "mertens",
            format!("stability_a{a}"),
            (hi - lo).abs() < 0.01,
            format!("M(x/10)={} M(x)={} change={}", real(lo), real(hi), real((hi - lo).abs())),
        ));
    }
    Ok(out)
}

/// Maximum shape ratio over the grid, keyed by family, `x`, `l`, `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSurvey {
    pub ratios: Vec<(Family, u64, u32, u32, f64)>,
}

impl ShapeSurvey {
    pub fn max(&self) -> f64 {
        self.ratios.iter().map(|r| r.4).fold(0.0, f64::max)
    }
}

pub fn shape_survey<S: Scanner>(s: &S, xs: &[u64]) -> Result<ShapeSurvey> {
    let mut ratios = Vec::new();
    for family in SHAPE_FAMILIES {
        for &x in xs {
            let h = histogram(s, RepFamily { family, strategy: Strategy::Bucket }, x, Some(OmegaKind::OmegaStar))?;
            for l in 1..=2 {
                for k in 0..=MAX_K {
                    ratios.push((family, x, l, k, shape_ratio_from(&h, x, l, k, family)?));
                }
            }
        }
    }
    Ok(ShapeSurvey { ratios })
}

/// `rho_{k,N}(x)` for `k = 0..=MAX_K`.
pub fn rho_row<S: Scanner>(s: &S, x: u64) -> Result<Vec<u128>> {
    let h = histogram(s, RepFamily { family: Family::R0Star, strategy: Strategy::Formula }, x, Some(OmegaKind::OmegaStar))?;
    (0..=MAX_K).map(|k| h.zeroth(Some(OmegaFilter { kind: OmegaKind::OmegaStar, value: k }))).collect()
}

/// `x / log x * (L/2 + gamma2)^{k-1} / (k-1)!`.
pub fn rho_shape(x: u64, k: u32, gamma2: f64) -> f64 {
    let base = 0.5 * lnln(x) + gamma2;
    let mut v = x as f64 / (x as f64).ln();
    for i in 1..k {
        v *= base / i as f64;
    }
    v
}

fn gap_slope(x: u64, gap: u128) -> f64 {
    gap as f64 / ((x as f64).sqrt() * lnln(x))
}

/// Fits every constant the `fitted` suite replays.
pub fn calibrate<S: Scanner>(s: &S) -> Result<Constants> {
    let mut c = Constants::default();
    c.set(keys::VERSION, FORMAT_VERSION as f64, "constants file layout");

    let gap = r1_gap_sum(s, GAP_FIT_X)?;
    let beta = gap as f64 / (GAP_FIT_X as f64).sqrt() - lnln(GAP_FIT_X);
    let gap_c = (1.0 + beta / lnln(DECADES[0])).max(1.0);
    c.set(
        keys::GAP_C,
        gap_c,
        format!("sum(r1-r1*) at x={GAP_FIT_X} is {gap}; model sqrt(x)(L+beta), beta={beta}; C=max(1,1+beta/L(1e3))"),
    );

    let gamma2 = DECADES.iter().map(|&x| gamma2_at(x)).collect::<Result<Vec<_>>>()?.into_iter().fold(f64::MIN, f64::max);
    c.set(keys::GAMMA2, gamma2, "max over x=1e3..1e7 of claim_sum*log x/x - L/2");

    let rho = rho_row(s, GAMMA1_X)?;
    let gamma1 = (1..=MAX_K)
        .map(|k| rho[k as usize] as f64 / rho_shape(GAMMA1_X, k, gamma2))
        .fold(0.0, f64::max);
    c.set(keys::GAMMA1, gamma1, format!("max over k=1..{MAX_K} of rho_k/shape at x={GAMMA1_X} with fitted gamma2"));

    let xs = secondary_grid();
    let (est, spread) = fit_secondary_constant(s, &xs)?;
    let tail = &est[est.len() / 2..];
    let h = tail.iter().sum::<f64>() / tail.len() as f64;
    c.set(keys::SECONDARY_H, h, "mean of (sum r0^2 - x log x/4)/x over x=6e5..1e6");
    c.set(keys::SECONDARY_H_SPREAD, spread, "max-min of those estimates");

    let survey = shape_survey(s, &SHAPE_GRID)?;
    c.set(keys::SHAPE_MAX, survey.max(), "max shape ratio over x=1e4..1e7, l<=2, k<=8, r1/rRstar/rRprimestar");

    let (tau, arg) = tau_growth_max(s, TAU_RANGE.0, TAU_RANGE.1)?;
    c.set(keys::TAU_GROWTH_MAX, tau, format!("max log tau(n) log log n/(log n log 2) over 1e3<=n<=1e6, at n={arg}"));
    c.set(keys::TAU_GROWTH_ARG, arg as f64, "argument of that maximum");
    Ok(c)
}

/// Fitted-constant replays. Fails with [`ConstantsError`] when a key is missing.
pub fn fitted<S: Scanner>(s: &S, c: &Constants, x_max: u64) -> Result<std::result::Result<Vec<Check>, ConstantsError>> {
    let need = |k: &str| c.require(k);
    let (gap_c, gamma1, gamma2, shape_max, tau_max) = match (
        need(keys::GAP_C),
        need(keys::GAMMA1),
        need(keys::GAMMA2),
        need(keys::SHAPE_MAX),
        need(keys::TAU_GROWTH_MAX),
    ) {
        (Ok(a), Ok(b), Ok(g), Ok(d), Ok(e)) => (a, b, g, d, e),
        (a, b, g, d, e) => {
            let err = [a.err(), b.err(), g.err(), d.err(), e.err()].into_iter().flatten().next();
            return Ok(Err(err.expect("some key missing")));
        }
    };
    let shape_grid: Vec<u64> = SHAPE_GRID.iter().copied().filter(|&x| x <= x_max).collect();
    let decades: Vec<u64> = DECADES.iter().copied().filter(|&x| x <= x_max).collect();
    let mut out = Vec::new();

    let survey = shape_survey(s, &shape_grid)?;
    let worst = survey.max();
    let bounded = survey.ratios.iter().all(|r| r.4 <= shape_max * 1.01);
    let replay = shape_grid.len() < SHAPE_GRID.len() || (worst / shape_max - 1.0).abs() <= 0.01;
    out.push(Check::new(
        "fitted",
        "shape_ratio_bounded",
        bounded && replay,
        format!("max={} stored={} points={}", real(worst), real(shape_max), survey.ratios.len()),
    ));

    let mut vals = Vec::new();
    for &x in &shape_grid {
        vals.push((x, smooth_squarefull_rstar_sum(s, x, 1)? as f64 / x as f64));
    }
    let decreasing = vals.windows(2).all(|w| w[1].1 < w[0].1);
    out.push(Check::new(
        "fitted",
        "smooth_squarefull_decreasing",
        decreasing,
        vals.iter().map(|(x, v)| format!("{x}:{}", real(*v))).collect::<Vec<_>>().join(" "),
    ));

    let mut rho_fail = Vec::new();
    for &x in &decades {
        let rho = rho_row(s, x)?;
        for k in 1..=MAX_K {
            let bound = gamma1 * rho_shape(x, k, gamma2);
            if rho[k as usize] as f64 > bound {
                rho_fail.push(format!("x={x},k={k}:{}>{}", rho[k as usize], real(bound)));
            }
        }
    }
    out.push(Check::new(
        "fitted",
        "rho_kN_bound",
        rho_fail.is_empty(),
        if rho_fail.is_empty() {
            format!("gamma1={} gamma2={} x<={}", real(gamma1), real(gamma2), decades.last().unwrap_or(&0))
        } else {
            rho_fail.join(" ")
        },
    ));

    let mut claim_fail = Vec::new();
    for &x in &decades {
        let lhs = inductive_claim_sum(x)?;
        let rhs = x as f64 / (x as f64).ln() * (0.5 * lnln(x) + gamma2);
        if lhs > rhs * (1.0 + 1e-12) {
            claim_fail.push(format!("x={x}"));
        }
    }
    out.push(Check::new("fitted", "claim_sum_bound", claim_fail.is_empty(), claim_fail.join(" ")));

    let mut gap_rows = Vec::new();
    let mut gap_ok = true;
    for &x in &decades {
        let gap = r1_gap_sum(s, x)?;
        let slope = gap_slope(x, gap);
        gap_ok &= slope <= gap_c;
        gap_rows.push(format!("{x}:{}", real(slope)));
    }
    out.push(Check::new(
        "fitted",
        "r1_gap_bound",
        gap_ok,
        format!("C={} gap/(sqrt(x)L): {}", real(gap_c), gap_rows.join(" ")),
    ));

    if x_max >= TAU_RANGE.1 {
        let (tau, arg) = tau_growth_max(s, TAU_RANGE.0, TAU_RANGE.1)?;
        out.push(Check::new(
            "fitted",
            "tau_growth_replay",
            tau <= tau_max,
            format!("max={} at n={arg} stored={}", real(tau), real(tau_max)),
        ));
    }
    Ok(Ok(out))
}
