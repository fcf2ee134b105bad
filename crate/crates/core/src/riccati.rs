//! Numerical solution of the closed Riccati chain
//! `W²_{λ+1} - W'_{λ+1} + Δ_λ = W²_λ + W'_λ`, `W_{N+1} = W₁`, for any period.
//!
//! Two representations are available. The pole-plus-polynomial ansatz
//! `W = c x + a/x + Σ_{odd k ≥ 3} b_k x^k` (with `x = u - u₀`) contains the
//! closed forms for periods 1 and 2. The grid ansatz tabulates `x W_λ` on
//! the half-line starting at the center and relies on odd symmetry of `W_λ`
//! for `x < 0`.
//!
//! Results are judged only by [`riccati_residual`] on a grid finer than the
//! one used for solving.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::to_f64;
use crate::hierarchy::Superpotential;
use crate::numverify::Grid;

/// Anything that can supply `(W(u), W'(u))`.
pub trait SuperpotentialRepr {
    fn center(&self) -> f64;
    /// `None` outside the represented region.
    fn value_and_derivative(&self, u: f64) -> Option<(f64, f64)>;
}

impl SuperpotentialRepr for Superpotential {
    fn center(&self) -> f64 {
        to_f64(&self.center)
    }

    fn value_and_derivative(&self, u: f64) -> Option<(f64, f64)> {
        Some(self.eval_f64(u))
    }
}

/// `c x + a/x + Σ b_k x^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolePolyW {
    pub center: f64,
    pub linear: f64,
    pub pole: f64,
    /// `(k, b_k)` for odd `k ≥ 3`.
    pub odd_terms: Vec<(usize, f64)>,
}

impl SuperpotentialRepr for PolePolyW {
    fn center(&self) -> f64 {
        self.center
    }

    fn value_and_derivative(&self, u: f64) -> Option<(f64, f64)> {
        let x = u - self.center;
        let mut w = self.linear * x + self.pole / x;
        let mut dw = self.linear - self.pole / (x * x);
        for &(k, b) in &self.odd_terms {
            w += b * x.powi(k as i32);
            dw += b * k as f64 * x.powi(k as i32 - 1);
        }
        Some((w, dw))
    }
}

/// Tabulated `y = x W` and `y'` on `x = u - u₀ ≥ 0`, evaluated by cubic
/// Hermite interpolation of `y` and extended oddly in `W`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridW {
    pub center: f64,
    pub x: Vec<f64>,
    pub xw: Vec<f64>,
    pub dxw: Vec<f64>,
}

impl SuperpotentialRepr for GridW {
    fn center(&self) -> f64 {
        self.center
    }

    fn value_and_derivative(&self, u: f64) -> Option<(f64, f64)> {
        let x = u - self.center;
        let (ax, sign) = if x < 0.0 { (-x, -1.0) } else { (x, 1.0) };
        let (first, last) = (self.x[0], *self.x.last()?);
        if ax <= 0.0 || ax < first || ax > last {
            return None;
        }
        let j = self.x.partition_point(|&t| t <= ax).clamp(1, self.x.len() - 1) - 1;
        let h = self.x[j + 1] - self.x[j];
        let t = (ax - self.x[j]) / h;
        let (p0, p1, m0, m1) = (self.xw[j], self.xw[j + 1], self.dxw[j] * h, self.dxw[j + 1] * h);
        let (t2, t3) = (t * t, t * t * t);
        let y = (2.0 * t3 - 3.0 * t2 + 1.0) * p0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * p1 + (t3 - t2) * m1;
        let dy = ((6.0 * t2 - 6.0 * t) * p0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 + (-6.0 * t2 + 6.0 * t) * p1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        Some((sign * y / ax, dy / ax - y / (ax * ax)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WRepr {
    PolePoly(PolePolyW),
    Grid(GridW),
}

impl WRepr {
    fn inner(&self) -> &dyn SuperpotentialRepr {
        match self {
            WRepr::PolePoly(w) => w,
            WRepr::Grid(w) => w,
        }
    }
}

impl SuperpotentialRepr for WRepr {
    fn center(&self) -> f64 {
        self.inner().center()
    }

    fn value_and_derivative(&self, u: f64) -> Option<(f64, f64)> {
        self.inner().value_and_derivative(u)
    }
}

/// Max over levels and grid points (outside the center band) of
/// `|W²_{λ+1} - W'_{λ+1} + Δ_λ - W²_λ - W'_λ|`. Points where some `W` is not
/// represented are skipped.
pub fn riccati_residual(ws: &[&dyn SuperpotentialRepr], gaps: &[f64], grid: &Grid) -> f64 {
    assert_eq!(ws.len(), gaps.len(), "one superpotential per gap");
    let n = ws.len();
    let u0 = ws[0].center();
    let mut worst: f64 = 0.0;
    for u in grid.nodes() {
        if (u - u0).abs() <= grid.excluded_center_halfwidth {
            continue;
        }
        let values: Option<Vec<(f64, f64)>> = ws.iter().map(|w| w.value_and_derivative(u)).collect();
        let Some(values) = values else { continue };
        for l in 0..n {
            let (w, dw) = values[l];
            let (wn, dwn) = values[(l + 1) % n];
            worst = worst.max((wn * wn - dwn + gaps[l] - w * w - dw).abs());
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ansatz {
    /// Odd powers up to `order` on top of `c x + a/x`.
    PolePoly { order: usize },
    /// Values of `x W` at `points` nodes on `[0, extent]`.
    Grid { points: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    /// Gauss–Newton steps with backtracking.
    Newton,
    /// Levenberg–Marquardt.
    LeastSquares,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { kind: SolverKind::LeastSquares, max_iter: 200, tol: 1e-10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiccatiProblem {
    pub gaps: Vec<f64>,
    pub center: f64,
    pub ansatz: Ansatz,
    pub solver: SolverConfig,
}

impl RiccatiProblem {
    pub fn new(gaps: Vec<f64>, center: f64, ansatz: Ansatz, solver: SolverConfig) -> Result<Self> {
        if gaps.is_empty() || gaps.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::InvalidSpec(format!("gaps must be positive and finite, got {gaps:?}")));
        }
        if !(solver.tol > 0.0) || solver.max_iter == 0 {
            return Err(Error::InvalidSpec("tolerance and iteration budget must be positive".into()));
        }
        if let Ansatz::Grid { points } = ansatz {
            if points < 8 {
                return Err(Error::InvalidGrid(format!("grid ansatz needs at least 8 points, got {points}")));
            }
        }
        Ok(RiccatiProblem { gaps, center, ansatz, solver })
    }

    pub fn period(&self) -> usize {
        self.gaps.len()
    }

    /// `(ΣΔ)/(2N)`, the equal-gap value of every linear coefficient.
    pub fn initial_linear(&self) -> f64 {
        self.gaps.iter().sum::<f64>() / (2.0 * self.period() as f64)
    }

    /// Half-width `6/√c` of the region where the chain is imposed.
    pub fn extent(&self) -> f64 {
        6.0 / self.initial_linear().sqrt()
    }

    /// The grid used to certify a solution: both sides of the center, closer
    /// to it and denser than any collocation set.
    pub fn certification_grid(&self) -> Grid {
        let l = self.extent();
        Grid::new(self.center - l, self.center + l, 2001)
            .expect("extent is positive")
            .with_excluded_halfwidth(0.025 * l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RiccatiStatus {
    Converged,
    /// Iteration budget exhausted before the iterate settled.
    NoConvergence,
    /// The iterate settled at a least-squares minimum whose residual is
    /// above tolerance at every ansatz order tried.
    AnsatzInsufficient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiccatiSolution {
    pub superpotentials: Vec<WRepr>,
    pub residual_norm: f64,
    pub converged: bool,
    pub status: RiccatiStatus,
    pub exploratory: bool,
    pub iterations: usize,
    /// Certified residual after each ansatz order (pole-plus-polynomial) or
    /// the single grid solve.
    pub residual_history: Vec<(usize, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stop {
    Tolerance,
    Stationary,
    Budget,
}

/// A nonlinear least-squares model: residual vector and its Jacobian.
trait Model {
    fn residual(&self, theta: &DVector<f64>) -> DVector<f64>;
    fn jacobian(&self, theta: &DVector<f64>) -> DMatrix<f64>;
}

fn minimize(model: &dyn Model, theta: &mut DVector<f64>, cfg: &SolverConfig, target: f64) -> (Stop, usize) {
    let mut r = model.residual(theta);
    let mut cost = r.norm_squared();
    let mut mu = match cfg.kind {
        SolverKind::LeastSquares => 1e-3,
        SolverKind::Newton => 0.0,
    };
    for iter in 0..cfg.max_iter {
        if r.amax() <= target {
            return (Stop::Tolerance, iter);
        }
        let j = model.jacobian(theta);
        let a = j.transpose() * &j;
        let g = j.transpose() * &r;
        let diag = DVector::from_iterator(a.nrows(), (0..a.nrows()).map(|i| a[(i, i)].max(1e-300)));
        let solve = |mu: f64| -> Option<DVector<f64>> {
            let mut m = a.clone();
            for i in 0..m.nrows() {
                m[(i, i)] += mu * diag[i] + 1e-14 * diag[i];
            }
            m.cholesky().map(|c| -c.solve(&g))
        };
        let mut accepted = false;
        match cfg.kind {
            SolverKind::LeastSquares => {
                while mu < 1e16 {
                    if let Some(step) = solve(mu) {
                        let trial = &*theta + &step;
                        let rt = model.residual(&trial);
                        let ct = rt.norm_squared();
                        if ct.is_finite() && ct < cost {
                            let small = step.norm() <= 1e-15 * (theta.norm() + 1e-15);
                            let gain = (cost - ct) / cost;
                            *theta = trial;
                            r = rt;
                            cost = ct;
                            mu = (mu / 3.0).max(1e-12);
                            accepted = true;
                            if small || gain < 1e-14 {
                                return (Stop::Stationary, iter + 1);
                            }
                            break;
                        }
                    }
                    mu = if mu == 0.0 { 1e-6 } else { mu * 4.0 };
                }
            }
            SolverKind::Newton => {
                if let Some(step) = solve(0.0) {
                    let mut scale = 1.0;
                    while scale > 1e-10 {
                        let trial = &*theta + &step * scale;
                        let rt = model.residual(&trial);
                        let ct = rt.norm_squared();
                        if ct.is_finite() && ct < cost {
                            let gain = (cost - ct) / cost;
                            *theta = trial;
                            r = rt;
                            cost = ct;
                            accepted = true;
                            if gain < 1e-14 {
                                return (Stop::Stationary, iter + 1);
                            }
                            break;
                        }
                        scale *= 0.5;
                    }
                }
            }
        }
        if !accepted {
            return (Stop::Stationary, iter + 1);
        }
    }
    let stop = if r.amax() <= target { Stop::Tolerance } else { Stop::Budget };
    (stop, cfg.max_iter)
}

/// Collocation of the chain in the pole-plus-polynomial family.
struct PolePolyModel<'a> {
    gaps: &'a [f64],
    xs: Vec<f64>,
    powers: Vec<usize>,
}

impl PolePolyModel<'_> {
    fn per_level(&self) -> usize {
        2 + self.powers.len()
    }

    /// Basis `(φ, φ')` at `x`: `x`, `1/x`, then the odd powers.
    fn basis(&self, x: f64) -> Vec<(f64, f64)> {
        let mut out = vec![(x, 1.0), (1.0 / x, -1.0 / (x * x))];
        out.extend(self.powers.iter().map(|&k| (x.powi(k as i32), k as f64 * x.powi(k as i32 - 1))));
        out
    }

    fn eval(theta: &DVector<f64>, offset: usize, basis: &[(f64, f64)]) -> (f64, f64) {
        basis.iter().enumerate().fold((0.0, 0.0), |(w, dw), (k, (f, df))| {
            (w + theta[offset + k] * f, dw + theta[offset + k] * df)
        })
    }
}

impl Model for PolePolyModel<'_> {
    fn residual(&self, theta: &DVector<f64>) -> DVector<f64> {
        let (n, p) = (self.gaps.len(), self.per_level());
        let mut out = DVector::zeros(n * self.xs.len());
        for (j, &x) in self.xs.iter().enumerate() {
            let basis = self.basis(x);
            let wv: Vec<(f64, f64)> = (0..n).map(|l| Self::eval(theta, l * p, &basis)).collect();
            for l in 0..n {
                let ((w, dw), (wn, dwn)) = (wv[l], wv[(l + 1) % n]);
                out[l * self.xs.len() + j] = wn * wn - dwn + self.gaps[l] - w * w - dw;
            }
        }
        out
    }

    fn jacobian(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let (n, p, m) = (self.gaps.len(), self.per_level(), self.xs.len());
        let mut jac = DMatrix::zeros(n * m, n * p);
        for (j, &x) in self.xs.iter().enumerate() {
            let basis = self.basis(x);
            let wv: Vec<(f64, f64)> = (0..n).map(|l| Self::eval(theta, l * p, &basis)).collect();
            for l in 0..n {
                let next = (l + 1) % n;
                let row = l * m + j;
                for (k, (f, df)) in basis.iter().enumerate() {
                    jac[(row, next * p + k)] += 2.0 * wv[next].0 * f - df;
                    jac[(row, l * p + k)] += -2.0 * wv[l].0 * f - df;
                }
            }
        }
        jac
    }
}

/// Collocation of `x²` times the chain on tabulated `y_λ = x W_λ`:
/// `y²_{λ+1} - x y'_{λ+1} + y_{λ+1} + Δ_λ x² - y²_λ - x y'_λ + y_λ = 0`.
/// The grid starts at `x = 0`, where the equation is regular, and `y` is
/// taken even so that `W` is odd.
struct GridModel<'a> {
    gaps: &'a [f64],
    xs: Vec<f64>,
    /// Fourth-order derivative stencils, `(column, weight)` per row.
    stencils: Vec<Vec<(usize, f64)>>,
}

impl<'a> GridModel<'a> {
    fn new(gaps: &'a [f64], xs: Vec<f64>) -> Self {
        let m = xs.len();
        let h = xs[1] - xs[0];
        // mirror y_{-k} = y_k below the origin
        let at = |k: isize| k.unsigned_abs();
        let stencils = (0..m as isize)
            .map(|j| {
                let w: Vec<(usize, f64)> = if j + 2 < m as isize {
                    vec![(at(j - 2), 1.0), (at(j - 1), -8.0), (at(j + 1), 8.0), (at(j + 2), -1.0)]
                } else if j + 2 == m as isize {
                    vec![(at(j + 1), 3.0), (at(j), 10.0), (at(j - 1), -18.0), (at(j - 2), 6.0), (at(j - 3), -1.0)]
                } else {
                    vec![(at(j), 25.0), (at(j - 1), -48.0), (at(j - 2), 36.0), (at(j - 3), -16.0), (at(j - 4), 3.0)]
                };
                w.into_iter().map(|(c, v)| (c, v / (12.0 * h))).collect()
            })
            .collect();
        GridModel { gaps, xs, stencils }
    }

    fn derivative(&self, y: &[f64]) -> Vec<f64> {
        self.stencils.iter().map(|row| row.iter().map(|&(c, w)| w * y[c]).sum()).collect()
    }

    fn split(&self, theta: &DVector<f64>) -> Vec<Vec<f64>> {
        let m = self.xs.len();
        (0..self.gaps.len()).map(|l| theta.rows(l * m, m).iter().copied().collect()).collect()
    }
}

impl Model for GridModel<'_> {
    fn residual(&self, theta: &DVector<f64>) -> DVector<f64> {
        let (n, m) = (self.gaps.len(), self.xs.len());
        let ys = self.split(theta);
        let ds: Vec<Vec<f64>> = ys.iter().map(|y| self.derivative(y)).collect();
        let mut out = DVector::zeros(n * m);
        for l in 0..n {
            let next = (l + 1) % n;
            for (j, &x) in self.xs.iter().enumerate() {
                let (y, yn) = (ys[l][j], ys[next][j]);
                out[l * m + j] = yn * yn - x * ds[next][j] + yn + self.gaps[l] * x * x - y * y - x * ds[l][j] + y;
            }
        }
        out
    }

    fn jacobian(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let (n, m) = (self.gaps.len(), self.xs.len());
        let ys = self.split(theta);
        let mut jac = DMatrix::zeros(n * m, n * m);
        for l in 0..n {
            let next = (l + 1) % n;
            for (j, &x) in self.xs.iter().enumerate() {
                let row = l * m + j;
                jac[(row, next * m + j)] += 2.0 * ys[next][j] + 1.0;
                jac[(row, l * m + j)] += 1.0 - 2.0 * ys[l][j];
                for &(c, w) in &self.stencils[j] {
                    jac[(row, next * m + c)] -= x * w;
                    jac[(row, l * m + c)] -= x * w;
                }
            }
        }
        jac
    }
}

fn odd_orders(order: usize) -> Vec<usize> {
    (3..=order).step_by(2).collect()
}

fn certify(ws: &[WRepr], problem: &RiccatiProblem) -> f64 {
    let refs: Vec<&dyn SuperpotentialRepr> = ws.iter().map(|w| w as &dyn SuperpotentialRepr).collect();
    riccati_residual(&refs, &problem.gaps, &problem.certification_grid())
}

pub fn solve_periodic(problem: &RiccatiProblem) -> Result<RiccatiSolution> {
    let n = problem.period();
    let c0 = problem.initial_linear();
    let l = problem.extent();
    let cfg = &problem.solver;
    let target = 0.01 * cfg.tol;
    let (ws, stop, iterations, history) = match problem.ansatz {
        Ansatz::PolePoly { order } => {
            let all = odd_orders(order);
            let mut orders = vec![1];
            orders.extend(all.iter().copied());
            let mut theta_prev: Option<(Vec<usize>, DVector<f64>)> = None;
            let mut history = Vec::new();
            let mut total = 0;
            let mut result = None;
            for &k in &orders {
                let powers = odd_orders(k);
                let per = 2 + powers.len();
                let mut theta = DVector::zeros(n * per);
                match &theta_prev {
                    None => (0..n).for_each(|lv| theta[lv * per] = c0),
                    Some((prev_powers, prev)) => {
                        let prev_per = 2 + prev_powers.len();
                        for lv in 0..n {
                            for i in 0..prev_per {
                                theta[lv * per + i] = prev[lv * prev_per + i];
                            }
                        }
                    }
                }
                // Chebyshev–Lobatto points on [0.05 l, l]
                let count = (4 * per).max(40);
                let (a, b) = (0.05 * l, l);
                let xs = (0..count)
                    .map(|i| {
                        let t = (std::f64::consts::PI * i as f64 / (count - 1) as f64).cos();
                        0.5 * (a + b) + 0.5 * (b - a) * t
                    })
                    .collect();
                let model = PolePolyModel { gaps: &problem.gaps, xs, powers: powers.clone() };
                let (stop, iters) = minimize(&model, &mut theta, cfg, target);
                total += iters;
                let ws: Vec<WRepr> = (0..n)
                    .map(|lv| {
                        WRepr::PolePoly(PolePolyW {
                            center: problem.center,
                            linear: theta[lv * per],
                            pole: theta[lv * per + 1],
                            odd_terms: powers.iter().enumerate().map(|(i, &k)| (k, theta[lv * per + 2 + i])).collect(),
                        })
                    })
                    .collect();
                let res = certify(&ws, problem);
                history.push((k, res));
                let done = res <= cfg.tol;
                result = Some((ws, stop));
                theta_prev = Some((powers, theta));
                if done {
                    break;
                }
            }
            let (ws, stop) = result.expect("at least one order is tried");
            (ws, stop, total, history)
        }
        Ansatz::Grid { points } => {
            let h = l / (points - 1) as f64;
            let xs: Vec<f64> = (0..points).map(|j| j as f64 * h).collect();
            let model = GridModel::new(&problem.gaps, xs.clone());
            let mut theta = DVector::from_iterator(n * points, (0..n).flat_map(|_| xs.iter().map(|x| c0 * x * x)));
            let (stop, iters) = minimize(&model, &mut theta, cfg, target);
            let ws: Vec<WRepr> = (0..n)
                .map(|lv| {
                    let xw: Vec<f64> = theta.rows(lv * points, points).iter().copied().collect();
                    let dxw = model.derivative(&xw);
                    WRepr::Grid(GridW { center: problem.center, x: xs.clone(), xw, dxw })
                })
                .collect();
            let res = certify(&ws, problem);
            (ws, stop, iters, vec![(points, res)])
        }
    };
    let residual_norm = certify(&ws, problem);
    let converged = residual_norm <= cfg.tol;
    let status = if converged {
        RiccatiStatus::Converged
    } else if stop == Stop::Budget {
        RiccatiStatus::NoConvergence
    } else {
        RiccatiStatus::AnsatzInsufficient
    };
    Ok(RiccatiSolution {
        superpotentials: ws,
        residual_norm,
        converged,
        status,
        exploratory: n >= 3,
        iterations,
        residual_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::hierarchy::{build_hierarchy, HierarchySpec};

    fn pole_poly(gaps: &[f64], order: usize) -> RiccatiSolution {
        let p = RiccatiProblem::new(gaps.to_vec(), 0.0, Ansatz::PolePoly { order }, SolverConfig::default()).unwrap();
        solve_periodic(&p).unwrap()
    }

    fn coeffs(s: &RiccatiSolution) -> Vec<(f64, f64)> {
        s.superpotentials
            .iter()
            .map(|w| match w {
                WRepr::PolePoly(w) => (w.linear, w.pole),
                WRepr::Grid(_) => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn residual_examples() {
        let grid = Grid::new(-6.0, 6.0, 1201).unwrap();
        let s2 = HierarchySpec::with_gaps(vec![int(1), int(3)]).unwrap();
        let h = build_hierarchy(&s2).unwrap();
        let refs: Vec<&dyn SuperpotentialRepr> = h.superpotentials.iter().map(|w| w as _).collect();
        assert!(riccati_residual(&refs, &[1.0, 3.0], &grid) <= 1e-12);

        let s1 = HierarchySpec::with_gaps(vec![int(2)]).unwrap();
        let h1 = build_hierarchy(&s1).unwrap();
        assert!(riccati_residual(&[&h1.superpotentials[0]], &[2.0], &grid) <= 1e-14);

        let mut bad = h.superpotentials.clone();
        bad[0].pole_coeff += rat(1, 100);
        let refs: Vec<&dyn SuperpotentialRepr> = bad.iter().map(|w| w as _).collect();
        assert!(riccati_residual(&refs, &[1.0, 3.0], &grid) >= 1e-3);
    }

    #[test]
    fn recovers_closed_forms() {
        let s = pole_poly(&[2.0], 5);
        assert!(s.converged);
        let c = coeffs(&s);
        assert!((c[0].0 - 1.0).abs() < 1e-6 && c[0].1.abs() < 1e-6);

        let s = pole_poly(&[1.0, 3.0], 5);
        assert!(s.converged, "{s:?}");
        let c = coeffs(&s);
        assert!((c[0].0 - 1.0).abs() < 1e-6 && (c[1].0 - 1.0).abs() < 1e-6);
        assert!((c[0].1 + 0.25).abs() < 1e-6 && (c[1].1 - 0.25).abs() < 1e-6);
        assert!(s.residual_norm <= 1e-10);
    }

    #[test]
    fn equal_gaps_reduce_to_harmonic() {
        let s = pole_poly(&[1.0, 1.0, 1.0], 5);
        assert!(s.converged && s.exploratory);
        for (c, a) in coeffs(&s) {
            assert!((c - 0.5).abs() < 1e-9 && a.abs() <= 1e-10);
        }
    }

    #[test]
    fn generic_three_gaps_is_reported() {
        let s = pole_poly(&[1.0, 2.0, 3.0], 7);
        assert!(s.exploratory);
        assert!(s.residual_norm.is_finite());
        assert!(matches!(s.status, RiccatiStatus::Converged | RiccatiStatus::AnsatzInsufficient), "{:?}", s.status);
    }

    #[test]
    fn newton_solver() {
        let cfg = SolverConfig { kind: SolverKind::Newton, ..SolverConfig::default() };
        let p = RiccatiProblem::new(vec![1.0, 3.0], 0.5, Ansatz::PolePoly { order: 1 }, cfg).unwrap();
        let s = solve_periodic(&p).unwrap();
        assert!(s.converged);
        let c = coeffs(&s);
        assert!((c[0].1 + 0.25).abs() < 1e-6);
    }

    #[test]
    fn grid_ansatz_harmonic() {
        let cfg = SolverConfig { tol: 1e-6, ..SolverConfig::default() };
        let p = RiccatiProblem::new(vec![2.0], 0.0, Ansatz::Grid { points: 81 }, cfg).unwrap();
        let s = solve_periodic(&p).unwrap();
        let (w, _) = s.superpotentials[0].value_and_derivative(1.3).unwrap();
        assert!((w - 1.3).abs() < 1e-6, "{w}");
    }

    #[test]
    fn rejects_bad_problems() {
        assert!(RiccatiProblem::new(vec![], 0.0, Ansatz::PolePoly { order: 1 }, SolverConfig::default()).is_err());
        assert!(RiccatiProblem::new(vec![1.0, -1.0], 0.0, Ansatz::PolePoly { order: 1 }, SolverConfig::default()).is_err());
        let cfg = SolverConfig { tol: 0.0, ..SolverConfig::default() };
        assert!(RiccatiProblem::new(vec![1.0], 0.0, Ansatz::PolePoly { order: 1 }, cfg).is_err());
    }
}
