use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, format_rational, gamma_f64, int, rat, rising_factorial, to_f64, Rational};
use crate::hierarchy::{global_norm, HierarchySpec, QuasiState, StateEvaluator, StateForm};

#[derive(Clone, Debug, PartialEq)]
pub enum QuadratureKind {
    /// Weight `v^exponent e^{-v}` on `(0, ∞)`.
    GaussLaguerre { exponent: Rational },
    /// Weight `e^{-v²}` on the real line.
    GaussHermite,
    /// Composite trapezoid rule directly in `u`.
    TrapezoidU { u_min: f64, u_max: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureScheme {
    pub kind: QuadratureKind,
    pub nodes: usize,
}

impl QuadratureScheme {
    pub fn gauss_laguerre(exponent: Rational, nodes: usize) -> Self {
        QuadratureScheme { kind: QuadratureKind::GaussLaguerre { exponent }, nodes }
    }

    pub fn gauss_hermite(nodes: usize) -> Self {
        QuadratureScheme { kind: QuadratureKind::GaussHermite, nodes }
    }

    pub fn trapezoid_u(u_min: f64, u_max: f64, nodes: usize) -> Self {
        QuadratureScheme { kind: QuadratureKind::TrapezoidU { u_min, u_max }, nodes }
    }

    /// The Gauss rule whose weight absorbs both states' exponents, with
    /// `p_max + 10` nodes.
    pub fn matching(a: &QuasiState, b: &QuasiState) -> Self {
        let p_max = a.poly.degree().max(b.poly.degree()).max(0) as usize;
        match a.form {
            StateForm::GaussianU => Self::gauss_hermite(p_max + 10),
            StateForm::LaguerreV => Self::gauss_laguerre(&a.sigma + &b.sigma - rat(1, 2), p_max + 10),
        }
    }
}

/// Nodes and weights from the Jacobi matrix (Golub–Welsch).
fn golub_welsch(diag: Vec<f64>, off: Vec<f64>, mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Gauss–Laguerre rule for `∫₀^∞ v^g e^{-v} f(v) dv`, `g > -1`.
pub fn gauss_laguerre_rule(g: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(g > -1.0 && n >= 1);
    let diag = (0..n).map(|k| 2.0 * k as f64 + g + 1.0).collect();
    let off = (1..n).map(|k| (k as f64 * (k as f64 + g)).sqrt()).collect();
    golub_welsch(diag, off, gamma_f64(g + 1.0))
}

/// Gauss–Hermite rule for `∫ e^{-v²} f(v) dv`.
pub fn gauss_hermite_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let off = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(vec![0.0; n], off, std::f64::consts::PI.sqrt())
}

fn horner(coeffs: &[f64], v: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c)
}

fn amplitude(s: &QuasiState, spec: &HierarchySpec) -> f64 {
    global_norm(spec) * s.norm2.to_f64().sqrt()
}

/// `∫ du ψ_a(u) ψ_b(u)` over the whole line.
///
/// The Gauss kinds split the integral into the two half-lines `u ≷ u₀`,
/// which map to the same `v` range and differ only by the product of the
/// parity signs. Opposite parities therefore give exactly zero.
pub fn overlap(a: &QuasiState, b: &QuasiState, spec: &HierarchySpec, scheme: &QuadratureScheme) -> Result<f64> {
    if a.form != b.form {
        return Err(Error::FormMismatch(format!("{:?} vs {:?}", a.form, b.form)));
    }
    if let QuadratureKind::TrapezoidU { u_min, u_max } = scheme.kind {
        return trapezoid(a, b, spec, u_min, u_max, scheme.nodes);
    }
    if a.is_zero() || b.is_zero() || a.parity != b.parity {
        return Ok(0.0);
    }
    let product = &a.poly * &b.poly;
    // n Gauss nodes integrate degree 2n - 1 exactly
    if scheme.nodes == 0 || product.degree() as usize > 2 * scheme.nodes - 1 {
        return Err(Error::SchemeMismatch(format!(
            "{} nodes cannot integrate a degree {} polynomial exactly",
            scheme.nodes,
            product.degree()
        )));
    }
    let coeffs: Vec<f64> = product.coeffs().iter().map(to_f64).collect();
    let amp = amplitude(a, spec) * amplitude(b, spec);
    match (&scheme.kind, a.form) {
        (QuadratureKind::GaussLaguerre { exponent }, StateForm::LaguerreV) => {
            let wanted = &a.sigma + &b.sigma - rat(1, 2);
            if *exponent != wanted {
                return Err(Error::SchemeMismatch(format!(
                    "weight exponent {} but the integrand carries v^{}",
                    format_rational(exponent),
                    format_rational(&wanted)
                )));
            }
            let (v, w) = gauss_laguerre_rule(to_f64(exponent), scheme.nodes);
            let sum: f64 = v.iter().zip(&w).map(|(v, w)| w * horner(&coeffs, *v)).sum();
            // du = dv / √(S v) on each half-line
            Ok(2.0 * amp * sum / to_f64(&spec.gap_sum()).sqrt())
        }
        (QuadratureKind::GaussHermite, StateForm::GaussianU) => {
            let (v, w) = gauss_hermite_rule(scheme.nodes);
            let sum: f64 = v.iter().zip(&w).map(|(v, w)| w * horner(&coeffs, *v)).sum();
            let dv_du = (to_f64(&spec.gaps()[0]) / 2.0).sqrt();
            Ok(amp * sum / dv_du)
        }
        (kind, form) => Err(Error::SchemeMismatch(format!("{kind:?} cannot integrate {form:?} states"))),
    }
}

fn trapezoid(a: &QuasiState, b: &QuasiState, spec: &HierarchySpec, u_min: f64, u_max: f64, n: usize) -> Result<f64> {
    if n < 2 || !(u_min < u_max) {
        return Err(Error::InvalidGrid(format!("trapezoid rule needs n >= 2 and u_min < u_max, got {n}")));
    }
    let (ea, eb) = (StateEvaluator::new(a, spec), StateEvaluator::new(b, spec));
    let h = (u_max - u_min) / (n - 1) as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let u = u_min + i as f64 * h;
        let f = ea.eval(u)? * eb.eval(u)?;
        sum += if i == 0 || i == n - 1 { 0.5 * f } else { f };
    }
    Ok(sum * h)
}

/// Exact `Γ(γ+p+1)/p!`, the squared norm of `L^{(γ)}_p` under `v^γ e^{-v}`,
/// with the `Γ(γ+1)` factor returned separately as its argument.
pub fn laguerre_norm_exact(gamma: &Rational, p: usize) -> (Rational, Rational) {
    let base = gamma + int(1);
    let ratio = rising_factorial(&base, p) / factorial(p);
    (ratio, base)
}
