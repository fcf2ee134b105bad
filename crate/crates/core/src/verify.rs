//! The verification suites run by `periodic-susy verify`.
//!
//! Every check is run and recorded; a failing or erroring check never stops
//! the ones after it.

use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::exactnum::{int, rat, to_f64, Rational};
use crate::hierarchy::{
    apply_ladder, build_eigenstate, eigenstate_closed_form, energy_level, potential, riccati_symbolic_residual,
    HierarchySpec, LadderOp, Parity, QuasiState,
};
use crate::numverify::{
    count_nodes, fd_spectrum, intertwine_residual, intertwine_residual_with_gap_shift, overlap, relative_error,
    richardson_order, Grid, QuadratureScheme,
};
use crate::polyfactory::{
    hermite, hermite_from_laguerre, laguerre_generalized_rodrigues, laguerre_series, recursion_residuals, recursion_residuals_cleared, D2Sign,
    HermiteRoute,
};

/// Eight asymmetry values spread over `(-1/2, 1/2)`, including `0` and `±1/4`, `±1/3`.
pub fn alpha_samples() -> Vec<Rational> {
    vec![rat(-2, 5), rat(-1, 3), rat(-1, 4), rat(-1, 10), int(0), rat(1, 7), rat(1, 4), rat(1, 3)]
}

/// The four Laguerre parameters `∓½ ± α` for each sampled `α`, followed by
/// ten unconstrained values.
pub fn gamma_samples() -> Vec<Rational> {
    let h = rat(1, 2);
    let mut out: Vec<Rational> = alpha_samples()
        .iter()
        .flat_map(|a| [-&h + a, &h - a, -&h - a, &h + a])
        .collect();
    out.extend([int(0), int(1), int(3), rat(1, 3), rat(-1, 3), rat(5, 2), rat(-3, 4), rat(7, 5), rat(11, 3), rat(-9, 10)]);
    out.sort();
    out.dedup();
    out
}

/// Gaps `(1 - 2α, 1 + 2α)`, which sum to 2 and realize the asymmetry `α`.
pub fn gaps_for_alpha(alpha: &Rational) -> Vec<Rational> {
    vec![int(1) - int(2) * alpha, int(1) + int(2) * alpha]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn from_result(name: impl Into<String>, r: Result<(bool, String)>) -> Self {
        let name = name.into();
        match r {
            Ok((passed, detail)) => CheckResult { name, passed, detail },
            Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaRow {
    #[serde(with = "crate::exactnum::serde_rational")]
    pub alpha: Rational,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_sweep: Option<Vec<AlphaRow>>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
            && self.alpha_sweep.iter().flatten().all(|row| row.checks.iter().all(|c| c.passed))
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out += &format!("[{}] {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        if let Some(rows) = &self.alpha_sweep {
            for row in rows {
                let marks: Vec<String> = row
                    .checks
                    .iter()
                    .map(|c| format!("{}={}", c.name, if c.passed { "ok" } else { "FAIL" }))
                    .collect();
                out += &format!("alpha {}: {}\n", row.alpha, marks.join(" "));
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out += &format!("{} checks, {} failed\n", self.checks.len(), failed);
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub alpha_sweep: Option<usize>,
    /// Shift of `Δ₁` inside the ladder operators of the intertwining check.
    pub perturb_gap: Option<f64>,
    pub pmax: usize,
    pub quadrature_tol: f64,
    pub fd_tol: f64,
    pub fd_points: usize,
    pub intertwine_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            alpha_sweep: None,
            perturb_gap: None,
            pmax: 12,
            quadrature_tol: 1e-8,
            fd_tol: 1e-3,
            fd_points: 4001,
            intertwine_tol: 1e-6,
        }
    }
}

pub fn check_riccati_symbolic(spec: &HierarchySpec) -> Result<(bool, String)> {
    let res = riccati_symbolic_residual(spec)?;
    let bad: Vec<usize> = res.iter().filter(|r| !r.is_zero()).map(|r| r.level).collect();
    Ok((bad.is_empty(), if bad.is_empty() { "all levels close".into() } else { format!("levels {bad:?} leave a residual") }))
}

/// `A_λ A†_λ ψ_{λ+1,n} = (E_{λ,n+1} - E_{λ,0}) ψ_{λ+1,n}` for `n < count`.
pub fn check_ladder_round_trip(spec: &HierarchySpec, count: usize) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for level in 1..=spec.period() {
        let raise = LadderOp::raise(spec, level)?;
        let lower = LadderOp::lower(spec, level)?;
        for n in 0..count {
            let psi = build_eigenstate(spec, level + 1, n)?;
            let back = apply_ladder(&lower, &apply_ladder(&raise, &psi)?)?;
            let e = energy_level(spec, level, n + 1) - energy_level(spec, level, 0);
            if !back.same_function(&psi.scaled_sqrt(&(&e * &e))) {
                failures.push((level, n));
            }
        }
    }
    Ok((failures.is_empty(), format!("{} failures {failures:?}", failures.len())))
}

pub fn check_closed_forms(spec: &HierarchySpec, nmax: usize) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for level in 1..=2 {
        for n in 0..=nmax {
            let built = build_eigenstate(spec, level, n)?;
            let closed = eigenstate_closed_form(spec, level, n)?.to_state();
            if built != closed {
                failures.push((level, n));
            }
        }
    }
    Ok((failures.is_empty(), format!("n <= {nmax}, failures {failures:?}")))
}

pub fn check_rodrigues(gammas: &[Rational], pmax: usize) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for g in gammas {
        for p in 0..=pmax {
            let series = laguerre_series(g, p);
            for sign in D2Sign::BOTH {
                if laguerre_generalized_rodrigues(g, p, sign) != series {
                    failures.push((g.to_string(), p, sign));
                }
            }
        }
    }
    Ok((failures.is_empty(), format!("{} gammas, p <= {pmax}, failures {failures:?}", gammas.len())))
}

pub fn check_recursions(gammas: &[Rational], pmax: usize) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut cleared = 0;
    for g in gammas {
        for p in 0..=pmax {
            let pole = (int(p as i64) + g).is_zero();
            if pole {
                cleared += 1;
            }
            let set = if pole { recursion_residuals_cleared(g, p) } else { recursion_residuals(g, p)? };
            for r in set {
                count += 1;
                if !r.residual.is_zero() {
                    failures.push((g.to_string(), p, r.name));
                }
            }
        }
    }
    for n in 0..=pmax {
        count += 1;
        if hermite(n, HermiteRoute::Ladder) != hermite(n, HermiteRoute::ThreeTerm) {
            failures.push(("hermite".into(), n, "three_term"));
        }
    }
    Ok((
        failures.is_empty(),
        format!("{count} residuals, cleared-form points (p + gamma = 0): {cleared}, failures {failures:?}"),
    ))
}

pub fn check_hermite_laguerre(nmax: usize) -> Result<(bool, String)> {
    let bad: Vec<usize> = (0..=nmax)
        .filter(|&n| hermite_from_laguerre(n) != hermite(n, HermiteRoute::ThreeTerm))
        .collect();
    Ok((bad.is_empty(), format!("n <= {nmax}, failures {bad:?}")))
}

/// Exact comparison of the `α = 0` two-gap states with the one-gap Hermite
/// states: `r₂ P(v²)² v^{4σ} = r₁ H_n(v)²`, where `r` are the stored squared
/// amplitudes and both carry the same `Γ(½)` and `N₀` bookkeeping.
pub fn check_harmonic_limit_exact(nmax: usize) -> Result<(bool, String)> {
    let two = HierarchySpec::with_gaps(vec![int(2), int(2)])?;
    let one = HierarchySpec::with_gaps(vec![int(2)])?;
    let mut bad = Vec::new();
    for n in 0..=nmax {
        let a = build_eigenstate(&two, 1, n)?;
        let b = build_eigenstate(&one, 1, n)?;
        let shift: usize = (&a.sigma * int(2)).to_integer().try_into().unwrap_or(usize::MAX);
        let pa = a.poly.compose_square().shift_up(shift);
        let same_sign = pa.leading().map(|c| c > &int(0)) == b.poly.leading().map(|c| c > &int(0));
        let lhs = (&pa * &pa).scale(&a.norm2.ratio);
        let rhs = (&b.poly * &b.poly).scale(&b.norm2.ratio);
        if !(same_sign && lhs == rhs && a.parity == b.parity && a.norm2.gamma_base == Some(rat(1, 2))) {
            bad.push(n);
        }
    }
    Ok((bad.is_empty(), format!("n <= {nmax}, failures {bad:?}")))
}

fn eigenstates(spec: &HierarchySpec, level: usize, count: usize) -> Result<Vec<QuasiState>> {
    (0..count).map(|n| build_eigenstate(spec, level, n)).collect()
}

/// Largest entry of `|G - I|` for the Gram matrix of the first `count`
/// states of `H_λ`.
pub fn gram_deviation(spec: &HierarchySpec, level: usize, count: usize) -> Result<f64> {
    let states = eigenstates(spec, level, count)?;
    let mut worst: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let g = overlap(a, b, spec, &QuadratureScheme::matching(a, b))?;
            worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok(worst)
}

pub fn check_gram(spec: &HierarchySpec, count: usize, tol: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for level in 1..=spec.period() {
        worst = worst.max(gram_deviation(spec, level, count)?);
    }
    Ok((worst <= tol, format!("max |G - I| = {worst:.3e} (tol {tol:.0e})")))
}

/// FD spectrum errors for the first `count` levels of `V_λ`.
pub fn fd_errors(spec: &HierarchySpec, level: usize, grid: &Grid, count: usize) -> Result<Vec<f64>> {
    let ev = fd_spectrum(&potential(spec, level)?, spec, grid, count)?;
    Ok(ev
        .iter()
        .enumerate()
        .map(|(n, e)| relative_error(*e, to_f64(&energy_level(spec, level, n))))
        .collect())
}

/// Observed order from the largest absolute error on two grids differing by
/// a factor two in spacing.
pub fn fd_order(spec: &HierarchySpec, level: usize, extent: f64, fine_points: usize, count: usize) -> Result<f64> {
    let coarse_points = (fine_points - 1) / 2 + 1;
    let max_abs = |points: usize| -> Result<f64> {
        let grid = Grid::new(-extent, extent, points)?;
        let ev = fd_spectrum(&potential(spec, level)?, spec, &grid, count)?;
        Ok(ev
            .iter()
            .enumerate()
            .map(|(n, e)| (e - to_f64(&energy_level(spec, level, n))).abs())
            .fold(0.0, f64::max))
    };
    Ok(richardson_order(max_abs(coarse_points)?, max_abs(fine_points)?, 2.0))
}

pub fn check_fd(spec: &HierarchySpec, tol: f64, points: usize) -> Result<(bool, String)> {
    let u0 = spec.u0_f64();
    let grid = Grid::new(u0 - 8.0, u0 + 8.0, points)?;
    let mut worst: f64 = 0.0;
    let mut order_ok = true;
    let mut orders = Vec::new();
    for level in 1..=spec.period() {
        worst = worst.max(fd_errors(spec, level, &grid, 6)?.into_iter().fold(0.0, f64::max));
        let order = fd_order(spec, level, 8.0, points, 6)?;
        order_ok &= (order - 2.0).abs() <= 0.25;
        orders.push(format!("{order:.3}"));
    }
    Ok((worst <= tol && order_ok, format!("max rel err {worst:.3e} (tol {tol:.0e}), orders [{}]", orders.join(", "))))
}

/// Zero counts against the node law: `n`, except `n + 1` for even states
/// whose exponent is positive.
pub fn check_nodes(spec: &HierarchySpec, nmax: usize) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for level in 1..=spec.period() {
        for n in 0..=nmax {
            let st = build_eigenstate(spec, level, n)?;
            let report = count_nodes(&st, spec, (spec.u0_f64() - 50.0, spec.u0_f64() + 50.0))?;
            let anomalous = st.parity == Parity::Even && st.sigma > int(0);
            let expected = if anomalous { n + 1 } else { n };
            if report.zeros != expected {
                bad.push((level, n, report.zeros));
            }
        }
    }
    Ok((bad.is_empty(), format!("n <= {nmax}, failures {bad:?}")))
}

pub fn check_intertwining(spec: &HierarchySpec, eps: Option<f64>, tol: f64) -> Result<(bool, String)> {
    let u0 = spec.u0_f64();
    let grid = Grid::new(u0 - 6.0, u0 + 6.0, 6001)?.with_excluded_halfwidth(0.25);
    let mut worst: f64 = 0.0;
    for level in 1..=spec.period() {
        let probes = eigenstates(spec, level + 1, 4)?;
        let r = match eps {
            Some(e) => intertwine_residual_with_gap_shift(spec, level, &probes, &grid, e)?,
            None => intertwine_residual(spec, level, &probes, &grid)?,
        };
        worst = worst.max(r);
    }
    Ok((worst <= tol, format!("max residual {worst:.3e} (tol {tol:.0e})")))
}

fn spec_of(gaps: &[i64]) -> Result<HierarchySpec> {
    HierarchySpec::with_gaps(gaps.iter().map(|&g| int(g)).collect())
}

pub fn run_verification(opts: &VerifyOptions) -> VerifyReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, r: Result<(bool, String)>| checks.push(CheckResult::from_result(name, r));
    let gammas = gamma_samples();

    for gaps in [&[2][..], &[1, 2], &[1, 3], &[2, 2]] {
        push(&format!("riccati_symbolic {gaps:?}"), spec_of(gaps).and_then(|s| check_riccati_symbolic(&s)));
    }
    for gaps in [&[2][..], &[1, 2], &[1, 3]] {
        push(&format!("ladder_round_trip {gaps:?}"), spec_of(gaps).and_then(|s| check_ladder_round_trip(&s, 8)));
    }
    for gaps in [&[1, 2][..], &[1, 3], &[2, 2]] {
        push(&format!("closed_forms {gaps:?}"), spec_of(gaps).and_then(|s| check_closed_forms(&s, 2 * opts.pmax)));
    }
    push("rodrigues", check_rodrigues(&gammas, opts.pmax));
    push("recursions", check_recursions(&gammas, opts.pmax));
    push("hermite_laguerre", check_hermite_laguerre(2 * opts.pmax));
    push("harmonic_limit", check_harmonic_limit_exact(2 * opts.pmax));

    for gaps in [&[2][..], &[1, 2], &[1, 3], &[2, 2]] {
        push(&format!("gram {gaps:?}"), spec_of(gaps).and_then(|s| check_gram(&s, 8, opts.quadrature_tol)));
    }
    for gaps in [&[2][..], &[1, 2]] {
        push(&format!("fd_spectrum {gaps:?}"), spec_of(gaps).and_then(|s| check_fd(&s, opts.fd_tol, opts.fd_points)));
    }
    for gaps in [&[1, 3][..], &[3, 1], &[2, 2]] {
        push(&format!("nodes {gaps:?}"), spec_of(gaps).and_then(|s| check_nodes(&s, 9)));
    }
    for gaps in [&[2][..], &[1, 2]] {
        push(
            &format!("intertwining {gaps:?}"),
            spec_of(gaps).and_then(|s| check_intertwining(&s, opts.perturb_gap, opts.intertwine_tol)),
        );
    }

    let alpha_sweep = opts.alpha_sweep.map(|k| {
        (0..k)
            .map(|i| {
                let alpha = rat(i as i64 + 1, k as i64 + 1) - rat(1, 2);
                let spec = HierarchySpec::with_gaps(gaps_for_alpha(&alpha));
                let run = |name: &str, f: &dyn Fn(&HierarchySpec) -> Result<(bool, String)>| {
                    CheckResult::from_result(name, spec.clone().and_then(|s| f(&s)))
                };
                AlphaRow {
                    checks: vec![
                        run("riccati", &check_riccati_symbolic),
                        run("closed_forms", &|s| check_closed_forms(s, 12)),
                        run("gram", &|s| check_gram(s, 8, opts.quadrature_tol)),
                        run("nodes", &|s| check_nodes(s, 9)),
                    ],
                    alpha,
                }
            })
            .collect()
    });
    VerifyReport { checks, alpha_sweep }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_sets() {
        assert_eq!(alpha_samples().len(), 8);
        assert!(gamma_samples().len() >= 18);
        for a in alpha_samples() {
            let s = HierarchySpec::with_gaps(gaps_for_alpha(&a)).unwrap();
            assert_eq!(s.alpha(), a);
        }
    }

    #[test]
    fn exact_checks_pass() {
        let s = spec_of(&[1, 3]).unwrap();
        assert!(check_riccati_symbolic(&s).unwrap().0);
        assert!(check_ladder_round_trip(&s, 6).unwrap().0);
        assert!(check_closed_forms(&s, 8).unwrap().0);
        assert!(check_harmonic_limit_exact(10).unwrap().0);
        assert!(check_nodes(&s, 9).unwrap().0);
    }

    #[test]
    fn report_summary_counts_failures() {
        let r = VerifyReport {
            checks: vec![
                CheckResult { name: "a".into(), passed: true, detail: "fine".into() },
                CheckResult::from_result("b", Err(crate::Error::Parse("bad".into()))),
            ],
            alpha_sweep: None,
        };
        assert!(!r.all_passed());
        assert!(r.summary().contains("2 checks, 1 failed"));
    }
}
