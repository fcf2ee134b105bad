use super::Grid;
use crate::error::{Error, Result};
use crate::exactnum::to_f64;
use crate::hierarchy::{HierarchySpec, PotentialForm};

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`
/// (Sturm sequence of LDLᵀ pivots).
fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        if q == 0.0 {
            q = f64::EPSILON * (off[i - 1].abs() + f64::MIN_POSITIVE);
        }
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `count` eigenvalues of a symmetric tridiagonal matrix by
/// bisection on the Sturm count.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if off.len() + 1 != n || count > n {
        return Err(Error::InvalidGrid(format!("tridiagonal size {n}, {} off-diagonals, {count} wanted", off.len())));
    }
    let radius = |i: usize| {
        let l = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let r = if i + 1 < n { off[i].abs() } else { 0.0 };
        l + r
    };
    let lo0 = (0..n).map(|i| diag[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let hi0 = (0..n).map(|i| diag[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (mut lo, mut hi) = (out.last().copied().unwrap_or(lo0).max(lo0), hi0);
        let mut iterations = 0;
        while hi - lo > 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(diag, off, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
            if iterations > 400 {
                return Err(Error::Convergence(format!("bisection for eigenvalue {k} did not settle")));
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Lowest `count` eigenvalues of `-d²/du² + V(u)`.
///
/// A regular potential is discretized with the three-point Laplacian and
/// Dirichlet ends. A potential with an inverse-square term `c/x²` splits
/// into two sectors on the half-line `x = |u - u₀| > 0`: writing
/// `ψ = x^s φ` with `s(s-1) = c` turns the equation into
/// `-(x^{2s} φ')' + (q x² + K) x^{2s} φ = E x^{2s} φ`, solved by a
/// finite-volume scheme with zero flux at the center. The smaller root
/// gives the even states, the larger root the odd ones.
pub fn fd_spectrum(potential: &PotentialForm, spec: &HierarchySpec, grid: &Grid, count: usize) -> Result<Vec<f64>> {
    if count > grid.points / 4 {
        return Err(Error::InvalidGrid(format!("{count} levels requested from {} points", grid.points)));
    }
    let u0 = spec.u0_f64();
    grid.require_center(u0)?;
    if !potential.is_singular() {
        return regular_spectrum(potential, grid, count);
    }
    let c = to_f64(&potential.invsq_coeff);
    let disc = 1.0 + 4.0 * c;
    if disc <= 0.0 {
        return Err(Error::InvalidSpec(format!("inverse-square coefficient {c} is below -1/4")));
    }
    let h = grid.spacing();
    let cells = (((u0 - grid.u_min).min(grid.u_max - u0)) / h).round() as usize;
    let (q, k) = (to_f64(&potential.quad_coeff), to_f64(&potential.const_term));
    let mut all = Vec::with_capacity(2 * count);
    for s in [(1.0 - disc.sqrt()) / 2.0, (1.0 + disc.sqrt()) / 2.0] {
        let (diag, off) = sector_operator(q, k, s, h, cells);
        all.extend(tridiagonal_eigenvalues(&diag, &off, count.min(cells))?);
    }
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    Ok(all)
}

fn regular_spectrum(potential: &PotentialForm, grid: &Grid, count: usize) -> Result<Vec<f64>> {
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = (1..grid.points - 1).map(|i| 2.0 * inv_h2 + potential.eval_f64(grid.node(i))).collect();
    let off = vec![-inv_h2; diag.len() - 1];
    tridiagonal_eigenvalues(&diag, &off, count)
}

/// `∫_a^b x^e dx`.
fn power_integral(a: f64, b: f64, e: f64) -> f64 {
    (b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0)
}

/// Symmetrized finite-volume matrix on cells `[ih, (i+1)h]`, nodes at cell
/// midpoints, weight `x^{2s}`, Dirichlet at `x = cells·h`.
fn sector_operator(q: f64, k: f64, s: f64, h: f64, cells: usize) -> (Vec<f64>, Vec<f64>) {
    let x = |i: usize| (i as f64 + 0.5) * h;
    let mass: Vec<f64> = (0..cells).map(|i| power_integral(i as f64 * h, (i + 1) as f64 * h, 2.0 * s)).collect();
    let pot: Vec<f64> = (0..cells)
        .map(|i| q * power_integral(i as f64 * h, (i + 1) as f64 * h, 2.0 * s + 2.0) + k * mass[i])
        .collect();
    // flux conductance: harmonic average of x^{2s} between neighbouring nodes
    let cond: Vec<f64> = (0..cells - 1).map(|i| 1.0 / power_integral(x(i), x(i + 1), -2.0 * s)).collect();
    let edge = 1.0 / power_integral(x(cells - 1), cells as f64 * h, -2.0 * s);
    let diag = (0..cells)
        .map(|i| {
            let left = if i > 0 { cond[i - 1] } else { 0.0 };
            let right = if i + 1 < cells { cond[i] } else { edge };
            (left + right + pot[i]) / mass[i]
        })
        .collect();
    let off = (0..cells - 1).map(|i| -cond[i] / (mass[i] * mass[i + 1]).sqrt()).collect();
    (diag, off)
}

/// Observed convergence order from errors on grids refined by `refinement`.
pub fn richardson_order(coarse_error: f64, fine_error: f64, refinement: f64) -> f64 {
    (coarse_error / fine_error).ln() / refinement.ln()
}

/// `|E_fd - E| / max(|E|, 1)`, so a zero ground energy is measured
/// absolutely.
pub fn relative_error(computed: f64, exact: f64) -> f64 {
    (computed - exact).abs() / exact.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::hierarchy::potential;

    #[test]
    fn sturm_bisection_small() {
        // tridiag(-1, 2, -1) of size n: 2 - 2cos(kπ/(n+1))
        let n = 9;
        let ev = tridiagonal_eigenvalues(&vec![2.0; n], &vec![-1.0; n - 1], n).unwrap();
        for (k, e) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((e - want).abs() < 1e-13);
        }
    }

    #[test]
    fn harmonic_spectrum() {
        let s = HierarchySpec::with_gaps(vec![int(2)]).unwrap();
        let v = potential(&s, 1).unwrap();
        let ev = fd_spectrum(&v, &s, &Grid::new(-8.0, 8.0, 4001).unwrap(), 6).unwrap();
        for (n, e) in ev.iter().enumerate() {
            assert!(relative_error(*e, 2.0 * n as f64) < 1e-4, "level {n}: {e}");
        }
    }

    #[test]
    fn singular_spectrum() {
        let s = HierarchySpec::with_gaps(vec![int(1), int(2)]).unwrap();
        let grid = Grid::new(-8.0, 8.0, 4001).unwrap();
        let e1 = fd_spectrum(&potential(&s, 1).unwrap(), &s, &grid, 6).unwrap();
        let e2 = fd_spectrum(&potential(&s, 2).unwrap(), &s, &grid, 6).unwrap();
        for (got, want) in e1.iter().zip([0.0, 1.0, 3.0, 4.0, 6.0, 7.0]) {
            assert!(relative_error(*got, want) < 1e-3, "{got} vs {want}");
        }
        for (got, want) in e2.iter().zip([1.0, 3.0, 4.0, 6.0, 7.0, 9.0]) {
            assert!(relative_error(*got, want) < 1e-3, "{got} vs {want}");
        }
    }

    #[test]
    fn too_many_levels() {
        let s = HierarchySpec::with_gaps(vec![int(2)]).unwrap();
        let v = potential(&s, 1).unwrap();
        assert!(fd_spectrum(&v, &s, &Grid::new(-8.0, 8.0, 20).unwrap(), 6).is_err());
    }
}
