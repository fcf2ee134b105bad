//! Exact eigenstates: ground states, ladder operators and their products.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{energy_level, global_norm, half, HierarchySpec};
use crate::error::{Error, Result};
use crate::exactnum::{factorial, from_f64, gamma_f64, gamma_shift_ratio, int, to_f64, PolyQ, Rational};
use crate::polyfactory::{apply_factor, laguerre_series, Derivative, QuasiOperand};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateForm {
    /// `e^{-v²/2} P(v)` with `v = √(Δ/2)(u - u₀)`.
    GaussianU,
    /// `v^σ e^{-v/2} P(v)` with `v = (Δ₁+Δ₂)(u - u₀)²/4`.
    LaguerreV,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Squared amplitude `ratio / Γ(base)`, relative to `N₀²`. A missing base
/// means no Gamma factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Norm2 {
    pub ratio: Rational,
    pub gamma_base: Option<Rational>,
}

impl Norm2 {
    pub fn to_f64(&self) -> f64 {
        let r = to_f64(&self.ratio);
        match &self.gamma_base {
            Some(b) => r / gamma_f64(to_f64(b)),
            None => r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiState {
    pub sigma: Rational,
    pub poly: PolyQ,
    pub parity: Parity,
    pub norm2: Norm2,
    pub form: StateForm,
}

impl QuasiState {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Multiplies the state by `√factor`.
    pub fn scaled_sqrt(&self, factor: &Rational) -> QuasiState {
        assert!(factor.is_positive(), "amplitude factor must be positive");
        QuasiState { norm2: Norm2 { ratio: &self.norm2.ratio * factor, ..self.norm2.clone() }, ..self.clone() }
    }

    /// Same function, written with `|leading coefficient| = 1/deg!`.
    pub fn canonical(&self) -> QuasiState {
        let reduced = QuasiOperand::new(self.sigma.clone(), self.poly.clone()).reduced();
        let Some(lead) = reduced.poly.leading().cloned() else {
            return self.clone();
        };
        if self.form == StateForm::GaussianU {
            return self.clone();
        }
        let deg = reduced.poly.degree() as usize;
        let t = Rational::one() / (factorial(deg) * lead.abs());
        QuasiState {
            sigma: reduced.sigma,
            poly: reduced.poly.scale(&t),
            norm2: Norm2 { ratio: &self.norm2.ratio / (&t * &t), gamma_base: self.norm2.gamma_base.clone() },
            ..self.clone()
        }
    }

    /// Exact equality of the represented functions.
    pub fn same_function(&self, other: &QuasiState) -> bool {
        if self.form != other.form {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (a, b) = (self.canonical(), other.canonical());
        if a.parity != b.parity || a.sigma != b.sigma || a.norm2.gamma_base != b.norm2.gamma_base {
            return false;
        }
        // √ra·Pa = √rb·Pb  ⇔  ra·Pa² = rb·Pb² with matching signs
        let sa = a.poly.leading().map(|c| c.is_positive());
        let sb = b.poly.leading().map(|c| c.is_positive());
        sa == sb && (&a.poly * &a.poly).scale(&a.norm2.ratio) == (&b.poly * &b.poly).scale(&b.norm2.ratio)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Raise,
    Lower,
}

/// `A†_λ` or `A_λ` written in the variable `v`.
///
/// For the Laguerre form, `A† = √scale (half_v·v^{1/2} + pole·v^{-1/2} - v^{1/2} d_v)`
/// and `A` flips the derivative sign. For the Gaussian form,
/// `A† = √scale (v - d_v)` with `half_v = 1` and no pole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderOp {
    pub direction: Direction,
    pub level: usize,
    pub form: StateForm,
    pub half_v: Rational,
    pub pole: Rational,
    pub scale: Rational,
}

impl LadderOp {
    pub fn new(spec: &HierarchySpec, level: usize, direction: Direction) -> Result<Self> {
        spec.require_closed_form()?;
        let level = spec.reduce_level(level)?;
        Ok(match spec.period() {
            1 => LadderOp {
                direction,
                level,
                form: StateForm::GaussianU,
                half_v: Rational::one(),
                pole: Rational::zero(),
                scale: spec.gaps()[0].clone() / int(2),
            },
            _ => {
                let pole = spec.alpha() / int(2);
                LadderOp {
                    direction,
                    level,
                    form: StateForm::LaguerreV,
                    half_v: half(),
                    pole: if level % 2 == 0 { pole } else { -pole },
                    scale: spec.gap_sum(),
                }
            }
        })
    }

    pub fn raise(spec: &HierarchySpec, level: usize) -> Result<Self> {
        Self::new(spec, level, Direction::Raise)
    }

    pub fn lower(spec: &HierarchySpec, level: usize) -> Result<Self> {
        Self::new(spec, level, Direction::Lower)
    }
}

pub fn apply_ladder(op: &LadderOp, state: &QuasiState) -> Result<QuasiState> {
    if op.form != state.form {
        return Err(Error::FormMismatch(format!(
            "operator acts on {:?} states, got a {:?} state",
            op.form, state.form
        )));
    }
    let (sigma, poly) = match op.form {
        StateForm::GaussianU => {
            let p = &state.poly;
            let poly = match op.direction {
                Direction::Raise => &(&PolyQ::from_ints(&[0, 2]) * p) - &p.diff(),
                Direction::Lower => p.diff(),
            };
            (Rational::zero(), poly)
        }
        StateForm::LaguerreV => {
            let x = QuasiOperand::new(state.sigma.clone(), state.poly.clone());
            let (derivative, cancels) = match op.direction {
                Direction::Raise => (Derivative::Minus, op.pole == state.sigma),
                Direction::Lower => (Derivative::Plus, (&op.pole + &state.sigma).is_zero()),
            };
            let raw = apply_factor(&x, &op.pole, derivative);
            if cancels {
                // the v^{σ-½} term drops out, leaving an overall factor of v
                let poly = raw.poly.div_by_var().expect("cancelling ladder leaves a factor of v");
                (&raw.sigma + int(1), poly)
            } else {
                (raw.sigma, raw.poly)
            }
        }
    };
    Ok(QuasiState {
        sigma,
        poly,
        parity: state.parity.flip(),
        norm2: Norm2 { ratio: &state.norm2.ratio * &op.scale, gamma_base: state.norm2.gamma_base.clone() },
        form: state.form,
    })
}

/// `ψ_{λ,0}`, normalized against `N₀`.
pub fn ground_state(spec: &HierarchySpec, level: usize) -> Result<QuasiState> {
    spec.require_closed_form()?;
    let level = spec.reduce_level(level)?;
    Ok(match spec.period() {
        1 => QuasiState {
            sigma: Rational::zero(),
            poly: PolyQ::one(),
            parity: Parity::Even,
            norm2: Norm2 { ratio: Rational::one(), gamma_base: None },
            form: StateForm::GaussianU,
        },
        _ => {
            let a = spec.alpha();
            let signed = if level == 1 { a } else { -a };
            QuasiState {
                sigma: &signed / int(2),
                poly: PolyQ::one(),
                parity: Parity::Even,
                norm2: Norm2 { ratio: Rational::one(), gamma_base: Some(half() + signed) },
                form: StateForm::LaguerreV,
            }
        }
    })
}

/// `ψ_{λ,n} = A†_λ ⋯ A†_{λ+n-1} ψ_{λ+n,0} / √∏_{j=1}^{n}(E_{λ,n} - E_{λ,j-1})`.
///
/// Laguerre-form results are returned in canonical form. Panics if the
/// exponent leaves its four-element class or the degree is not `⌊n/2⌋`,
/// since either would mean a negative power of `v` survived.
pub fn build_eigenstate(spec: &HierarchySpec, level: usize, n: usize) -> Result<QuasiState> {
    spec.require_closed_form()?;
    let level = spec.reduce_level(level)?;
    let mut state = ground_state(spec, level + n)?;
    for j in (level..level + n).rev() {
        state = apply_ladder(&LadderOp::raise(spec, j)?, &state)?;
    }
    let e_n = energy_level(spec, level, n);
    let denom = (1..=n).fold(Rational::one(), |acc, j| acc * (&e_n - energy_level(spec, level, j - 1)));
    state = state.scaled_sqrt(&(Rational::one() / denom));
    if state.form == StateForm::GaussianU {
        return Ok(state);
    }
    let state = state.canonical();
    let a = spec.alpha();
    let classes = [&a / int(2), -&a / int(2), (int(1) - &a) / int(2), (int(1) + &a) / int(2)];
    assert!(
        classes.contains(&state.sigma),
        "psi({level},{n}) ended with exponent {} outside the expected classes",
        state.sigma
    );
    assert_eq!(state.poly.degree(), (n / 2) as isize, "psi({level},{n}) has the wrong degree");
    Ok(state)
}

/// The decomposition `ψ_{λ,n} = sign·N₀·√(p!/Γ(base+shift))·v^σ e^{-v/2} L^{(γ)}_p(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub level: usize,
    pub n: usize,
    pub sign: i8,
    pub p: usize,
    pub gamma: Rational,
    pub sigma: Rational,
    pub norm2: Norm2,
}

impl ClosedForm {
    pub fn to_state(&self) -> QuasiState {
        QuasiState {
            sigma: self.sigma.clone(),
            poly: laguerre_series(&self.gamma, self.p).scale(&int(self.sign as i64)),
            parity: Parity::of(self.n),
            norm2: self.norm2.clone(),
            form: StateForm::LaguerreV,
        }
    }
}

pub fn eigenstate_closed_form(spec: &HierarchySpec, level: usize, n: usize) -> Result<ClosedForm> {
    if spec.period() != 2 {
        return Err(Error::UnsupportedPeriod(spec.period()));
    }
    let level = spec.reduce_level(level)?;
    let a = spec.alpha();
    let h = half();
    let (p, odd) = (n / 2, n % 2 == 1);
    let (gamma, sigma, base, shift) = match (level, odd) {
        (1, false) => (&a - &h, &a / int(2), &h + &a, p),
        (1, true) => (&h - &a, (int(1) - &a) / int(2), &h - &a, p + 1),
        (_, false) => (-&h - &a, -&a / int(2), &h - &a, p),
        (_, true) => (&h + &a, (int(1) + &a) / int(2), &h + &a, p + 1),
    };
    let ratio = factorial(p) / gamma_shift_ratio(&base, shift)?;
    Ok(ClosedForm {
        level,
        n,
        sign: if p % 2 == 0 { 1 } else { -1 },
        p,
        gamma,
        sigma,
        norm2: Norm2 { ratio, gamma_base: Some(base) },
    })
}

/// Floating-point evaluator for repeated use on grids.
#[derive(Clone, Debug)]
pub struct StateEvaluator {
    form: StateForm,
    sigma: f64,
    sigma_sign: i8,
    odd: bool,
    coeffs: Vec<f64>,
    amplitude: f64,
    center: f64,
    v_scale: f64,
}

impl StateEvaluator {
    pub fn new(state: &QuasiState, spec: &HierarchySpec) -> Self {
        let v_scale = match state.form {
            StateForm::GaussianU => (to_f64(&spec.gaps()[0]) / 2.0).sqrt(),
            StateForm::LaguerreV => to_f64(&spec.gap_sum()) / 4.0,
        };
        StateEvaluator {
            form: state.form,
            sigma: to_f64(&state.sigma),
            sigma_sign: if state.sigma.is_positive() {
                1
            } else if state.sigma.is_negative() {
                -1
            } else {
                0
            },
            odd: state.parity == Parity::Odd,
            coeffs: state.poly.coeffs().iter().map(to_f64).collect(),
            amplitude: global_norm(spec) * state.norm2.to_f64().sqrt(),
            center: spec.u0_f64(),
            v_scale,
        }
    }

    fn poly(&self, v: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c)
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        let x = u - self.center;
        match self.form {
            StateForm::GaussianU => {
                let v = self.v_scale * x;
                Ok(self.amplitude * (-0.5 * v * v).exp() * self.poly(v))
            }
            StateForm::LaguerreV => {
                if x == 0.0 {
                    return center_value(self.sigma_sign, self.amplitude * self.poly(0.0), u);
                }
                let v = self.v_scale * x * x;
                let value = self.amplitude * v.powf(self.sigma) * (-0.5 * v).exp() * self.poly(v);
                Ok(if self.odd && x < 0.0 { -value } else { value })
            }
        }
    }
}

fn center_value(sigma_sign: i8, finite: f64, u: f64) -> Result<f64> {
    match sigma_sign {
        1 => Ok(0.0),
        -1 => Err(Error::SingularPoint(u)),
        _ => Ok(finite),
    }
}

/// Evaluates `ψ(u)`. The polynomial factor is evaluated exactly at the
/// rational value of `v` (for the Gaussian form, at `v` rounded to `f64`),
/// which avoids the cancellation of high-degree Horner sums.
pub fn wavefunction_eval(state: &QuasiState, spec: &HierarchySpec, u: f64) -> Result<f64> {
    match state.form {
        StateForm::GaussianU => {
            let eval = StateEvaluator::new(state, spec);
            let vf = eval.v_scale * (u - eval.center);
            let v = from_f64(vf).ok_or_else(|| Error::InvalidSpec(format!("non-finite u = {u}")))?;
            Ok(eval.amplitude * (-0.5 * vf * vf).exp() * to_f64(&state.poly.eval(&v)))
        }
        StateForm::LaguerreV => {
            let eval = StateEvaluator::new(state, spec);
            let x = from_f64(u).ok_or_else(|| Error::InvalidSpec(format!("non-finite u = {u}")))? - spec.u0();
            if x.is_zero() {
                return center_value(eval.sigma_sign, eval.amplitude * to_f64(&state.poly.coeff(0)), u);
            }
            let v = spec.gap_sum() * &x * &x / int(4);
            let vf = to_f64(&v);
            let value = eval.amplitude * vf.powf(eval.sigma) * (-0.5 * vf).exp() * to_f64(&state.poly.eval(&v));
            Ok(if eval.odd && x.is_negative() { -value } else { value })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::polyfactory::{hermite, HermiteRoute};

    fn spec2(d1: Rational, d2: Rational) -> HierarchySpec {
        HierarchySpec::with_gaps(vec![d1, d2]).unwrap()
    }

    #[test]
    fn ground_state_examples() {
        let s = spec2(int(1), int(3));
        let g1 = ground_state(&s, 1).unwrap();
        assert_eq!((g1.sigma.clone(), g1.poly.clone()), (rat(1, 8), PolyQ::one()));
        assert_eq!(g1.norm2.gamma_base, Some(rat(3, 4)));
        let g2 = ground_state(&s, 2).unwrap();
        assert_eq!(g2.sigma, rat(-1, 8));
        let g = ground_state(&HierarchySpec::with_gaps(vec![int(2)]).unwrap(), 1).unwrap();
        assert_eq!((g.form, g.poly), (StateForm::GaussianU, PolyQ::one()));
    }

    #[test]
    fn ladder_examples() {
        let s = spec2(int(1), int(3));
        let alpha = s.alpha();
        let psi20 = ground_state(&s, 2).unwrap();
        let psi11 = apply_ladder(&LadderOp::raise(&s, 1).unwrap(), &psi20).unwrap().scaled_sqrt(&rat(1, 1));
        assert_eq!(psi11.sigma, (int(1) - &alpha) / int(2));
        assert_eq!(psi11.poly, PolyQ::one());
        assert_eq!(psi11.parity, Parity::Odd);

        let psi10 = ground_state(&s, 1).unwrap();
        assert!(apply_ladder(&LadderOp::lower(&s, 1).unwrap(), &psi10).unwrap().is_zero());

        let two = apply_ladder(&LadderOp::raise(&s, 2).unwrap(), &psi10).unwrap();
        let two = apply_ladder(&LadderOp::raise(&s, 1).unwrap(), &two).unwrap();
        let psi12 = two.scaled_sqrt(&(Rational::one() / (int(3) * int(4)))).canonical();
        assert_eq!(psi12.poly, PolyQ::new(vec![-rat(1, 2) - &alpha, int(1)]));
        assert_eq!(psi12.sigma, &alpha / int(2));
    }

    #[test]
    fn form_mismatch() {
        let s1 = HierarchySpec::with_gaps(vec![int(2)]).unwrap();
        let s2 = spec2(int(1), int(3));
        let op = LadderOp::raise(&s1, 1).unwrap();
        assert!(matches!(apply_ladder(&op, &ground_state(&s2, 1).unwrap()), Err(Error::FormMismatch(_))));
    }

    #[test]
    fn eigenstate_examples() {
        let s = spec2(rat(2, 3), rat(7, 5));
        let alpha = s.alpha();
        let psi13 = build_eigenstate(&s, 1, 3).unwrap();
        assert_eq!(psi13.sigma, (int(1) - &alpha) / int(2));
        assert_eq!(psi13.poly, PolyQ::new(vec![-rat(3, 2) + &alpha, int(1)]));
        let psi22 = build_eigenstate(&s, 2, 2).unwrap();
        assert_eq!(psi22.sigma, -&alpha / int(2));
        assert_eq!(psi22.poly, PolyQ::new(vec![-rat(1, 2) + &alpha, int(1)]));

        let s1 = HierarchySpec::with_gaps(vec![int(3)]).unwrap();
        let psi2 = build_eigenstate(&s1, 1, 2).unwrap();
        assert_eq!(psi2.poly, hermite(2, HermiteRoute::ThreeTerm));
        assert_eq!(psi2.norm2.ratio, rat(1, 8));
    }

    #[test]
    fn closed_form_examples() {
        let s = spec2(int(1), int(3));
        let a = s.alpha();
        let c = eigenstate_closed_form(&s, 1, 4).unwrap();
        assert_eq!((c.gamma.clone(), c.sigma.clone()), (&a - rat(1, 2), &a / int(2)));
        let c = eigenstate_closed_form(&s, 2, 5).unwrap();
        assert_eq!((c.gamma.clone(), c.sigma.clone()), (&a + rat(1, 2), (int(1) + &a) / int(2)));
        let c = eigenstate_closed_form(&s, 1, 3).unwrap();
        assert_eq!((c.gamma.clone(), c.sigma.clone()), (rat(1, 2) - &a, (int(1) - &a) / int(2)));
        assert_eq!(c.sign, -1);
        let s1 = HierarchySpec::with_gaps(vec![int(3)]).unwrap();
        assert_eq!(eigenstate_closed_form(&s1, 1, 0), Err(Error::UnsupportedPeriod(1)));
    }

    #[test]
    fn closed_form_matches_ladder() {
        for (d1, d2) in [(1, 3), (2, 2), (5, 1), (3, 7)] {
            let s = spec2(int(d1), int(d2));
            for level in 1..=2 {
                for n in 0..=12 {
                    let built = build_eigenstate(&s, level, n).unwrap();
                    let closed = eigenstate_closed_form(&s, level, n).unwrap().to_state();
                    assert_eq!(built, closed, "gaps ({d1},{d2}) level {level} n {n}");
                }
            }
        }
    }

    #[test]
    fn eval_examples() {
        let s = spec2(int(1), int(3));
        let psi10 = build_eigenstate(&s, 1, 0).unwrap();
        assert_eq!(wavefunction_eval(&psi10, &s, 0.0).unwrap(), 0.0);
        let psi20 = build_eigenstate(&s, 2, 0).unwrap();
        assert!(matches!(wavefunction_eval(&psi20, &s, 0.0), Err(Error::SingularPoint(_))));
        let psi11 = build_eigenstate(&s, 1, 1).unwrap();
        let (l, r) = (wavefunction_eval(&psi11, &s, -0.7).unwrap(), wavefunction_eval(&psi11, &s, 0.7).unwrap());
        assert_eq!(l, -r);
        assert!(r != 0.0);
    }

    #[test]
    fn harmonic_limit_pointwise() {
        let s2 = spec2(int(2), int(2));
        let s1 = HierarchySpec::with_gaps(vec![int(2)]).unwrap();
        let g1 = build_eigenstate(&s1, 1, 0).unwrap();
        let g2 = build_eigenstate(&s2, 1, 0).unwrap();
        for k in 0..50 {
            let u = -3.0 + 6.0 * k as f64 / 49.0;
            let a = wavefunction_eval(&g1, &s1, u).unwrap();
            let b = wavefunction_eval(&g2, &s2, u).unwrap();
            assert!((a - b).abs() <= 1e-12, "u={u}: {a} vs {b}");
            let exact = (1.0 / std::f64::consts::PI).powf(0.25) * (-u * u / 2.0).exp();
            assert!((a - exact).abs() <= 1e-14);
        }
    }

    #[test]
    fn evaluator_agrees_with_exact_path() {
        let s = spec2(rat(2, 3), rat(7, 5));
        let st = build_eigenstate(&s, 2, 5).unwrap();
        let ev = StateEvaluator::new(&st, &s);
        for u in [-2.1, -0.3, 0.4, 1.7] {
            let (a, b) = (ev.eval(u).unwrap(), wavefunction_eval(&st, &s, u).unwrap());
            assert!((a - b).abs() <= 1e-13 * (1.0 + b.abs()));
        }
    }
}
