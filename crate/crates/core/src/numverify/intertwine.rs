use super::Grid;
use crate::error::Result;
use crate::exactnum::{from_f64, to_f64};
use crate::hierarchy::{potential, superpotential, HierarchySpec, QuasiState, StateEvaluator};

// sixth-order central stencils
const D1: [f64; 7] = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0];
const D1_SCALE: f64 = 60.0;
const D2: [f64; 7] = [2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0];
const D2_SCALE: f64 = 180.0;
const REACH: usize = 3;

fn stencil(values: &[Option<f64>], i: usize, weights: &[f64; 7], scale: f64) -> Option<f64> {
    if i < REACH || i + REACH >= values.len() {
        return None;
    }
    let mut acc = 0.0;
    for (j, w) in weights.iter().enumerate() {
        acc += w * values[i + j - REACH]?;
    }
    Some(acc / scale)
}

/// `max |(H_{λ+1} - A_λ A†_λ - E_{λ,0}) f| / max |f|` over probes and grid
/// points, with every derivative taken by finite differences of state
/// evaluations. Points whose stencils touch the excluded center band are
/// skipped.
pub fn intertwine_residual(spec: &HierarchySpec, level: usize, probes: &[QuasiState], grid: &Grid) -> Result<f64> {
    intertwine_residual_with_gap_shift(spec, level, probes, grid, 0.0)
}

/// As [`intertwine_residual`], but the ladder operators use `W_λ` built
/// from `Δ₁ + eps` while `H_{λ+1}` and `E_{λ,0}` keep the true gaps.
pub fn intertwine_residual_with_gap_shift(
    spec: &HierarchySpec,
    level: usize,
    probes: &[QuasiState],
    grid: &Grid,
    eps: f64,
) -> Result<f64> {
    spec.require_closed_form()?;
    grid.require_center(spec.u0_f64())?;
    let v_next = potential(spec, level + 1)?;
    let e_level = to_f64(&spec.ground_energy(level));
    let w = if eps == 0.0 {
        superpotential(spec, level)?
    } else {
        let mut gaps = spec.gaps().to_vec();
        gaps[0] += from_f64(eps).expect("finite perturbation");
        let shifted = HierarchySpec::new(gaps, spec.e0().clone(), spec.u0().clone())?;
        superpotential(&shifted, level)?
    };
    let h = grid.spacing();
    let u0 = spec.u0_f64();
    let band = grid.excluded_center_halfwidth;
    let us: Vec<f64> = grid.nodes().collect();
    let mut worst: f64 = 0.0;
    for probe in probes {
        let eval = StateEvaluator::new(probe, spec);
        let f: Vec<Option<f64>> = us
            .iter()
            .map(|&u| if (u - u0).abs() <= band { None } else { eval.eval(u).ok() })
            .collect();
        let scale = f.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            continue;
        }
        // g = A†f = -f' + W f
        let g: Vec<Option<f64>> = (0..us.len())
            .map(|i| Some(-stencil(&f, i, &D1, D1_SCALE)? / h + w.eval_f64(us[i]).0 * f[i]?))
            .collect();
        for i in 0..us.len() {
            let (Some(fi), Some(d2f), Some(dg), Some(gi)) =
                (f[i], stencil(&f, i, &D2, D2_SCALE), stencil(&g, i, &D1, D1_SCALE), g[i])
            else {
                continue;
            };
            let h_next = -d2f / (h * h) + v_next.eval_f64(us[i]) * fi;
            let a_adag = dg / h + w.eval_f64(us[i]).0 * gi;
            worst = worst.max((h_next - a_adag - e_level * fi).abs() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;
    use crate::hierarchy::build_eigenstate;

    #[test]
    fn harmonic_probes() {
        let s = HierarchySpec::with_gaps(vec![int(2)]).unwrap();
        let probes: Vec<_> = (0..4).map(|n| build_eigenstate(&s, 1, n).unwrap()).collect();
        let r = intertwine_residual(&s, 1, &probes, &Grid::new(-6.0, 6.0, 2001).unwrap()).unwrap();
        assert!(r <= 1e-8, "{r}");
    }

    #[test]
    fn two_gap_probes() {
        let s = HierarchySpec::with_gaps(vec![int(1), int(2)]).unwrap();
        let probes: Vec<_> = (0..4).map(|n| build_eigenstate(&s, 2, n).unwrap()).collect();
        let grid = Grid::new(-6.0, 6.0, 6001).unwrap().with_excluded_halfwidth(0.25);
        let r = intertwine_residual(&s, 1, &probes, &grid).unwrap();
        assert!(r <= 1e-6, "{r}");
    }

    #[test]
    fn perturbation_is_linear() {
        let s = HierarchySpec::with_gaps(vec![int(1), int(2)]).unwrap();
        let probes: Vec<_> = (0..4).map(|n| build_eigenstate(&s, 2, n).unwrap()).collect();
        let grid = Grid::new(-6.0, 6.0, 6001).unwrap().with_excluded_halfwidth(0.25);
        let small = intertwine_residual_with_gap_shift(&s, 1, &probes, &grid, 1e-3).unwrap();
        let large = intertwine_residual_with_gap_shift(&s, 1, &probes, &grid, 1e-2).unwrap();
        let ratio = large / small;
        assert!((ratio - 10.0).abs() < 0.5, "{small} {large} {ratio}");
    }
}
