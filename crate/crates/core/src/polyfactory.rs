//! Hermite and generalized Laguerre polynomials from independent routes,
//! plus the differential equations and recursion relations they satisfy,
//! all as exact polynomial identities.
//!
//! The quasi-polynomial machinery works on operands `v^σ e^{-v/2} P(v)`.
//! A first-order factor `½v^{1/2} + k v^{-1/2} ∓ v^{1/2} d_v` maps such an
//! operand to another one with exponent `σ - ½`; see [`apply_factor`].

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, int, rat, rising_factorial, PolyQ, Rational};

/// Which of the two second-order operators `D₂(+γ)` / `D₂(-γ)` to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum D2Sign {
    Plus,
    Minus,
}

impl D2Sign {
    pub const BOTH: [D2Sign; 2] = [D2Sign::Plus, D2Sign::Minus];
}

/// Sign of the derivative term in a first-order factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivative {
    /// `- v^{1/2} d_v`, the creation-type factor.
    Minus,
    /// `+ v^{1/2} d_v`, the annihilation-type factor.
    Plus,
}

/// `v^σ e^{-v/2} P(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiOperand {
    pub sigma: Rational,
    pub poly: PolyQ,
}

impl QuasiOperand {
    pub fn new(sigma: Rational, poly: PolyQ) -> Self {
        QuasiOperand { sigma, poly }
    }

    /// Rewrites the operand with exponent `sigma`, multiplying the
    /// polynomial by `v^m` where `m = self.sigma - sigma`. Returns `None`
    /// when that would need a negative or fractional power of `v`.
    pub fn relative_to(&self, sigma: &Rational) -> Option<QuasiOperand> {
        if self.poly.is_zero() {
            return Some(QuasiOperand::new(sigma.clone(), PolyQ::zero()));
        }
        let diff = &self.sigma - sigma;
        if !diff.is_integer() || diff < Rational::zero() {
            return None;
        }
        let m: usize = diff.to_integer().try_into().ok()?;
        Some(QuasiOperand::new(sigma.clone(), self.poly.shift_up(m)))
    }

    /// Moves factors of `v` out of the polynomial into the exponent.
    pub fn reduced(&self) -> QuasiOperand {
        let m = self.poly.low_order();
        if m == 0 || self.poly.is_zero() {
            return self.clone();
        }
        let poly = PolyQ::new(self.poly.coeffs()[m..].to_vec());
        QuasiOperand::new(&self.sigma + int(m as i64), poly)
    }
}

/// Applies `½v^{1/2} + k v^{-1/2} ∓ v^{1/2} d_v` to `v^σ e^{-v/2} P`.
///
/// The result is returned with exponent `σ - ½` and is not reduced:
/// * creation type: `vP + (k - σ)P - vP'`
/// * annihilation type: `(k + σ)P + vP'`
pub fn apply_factor(x: &QuasiOperand, k: &Rational, derivative: Derivative) -> QuasiOperand {
    let p = &x.poly;
    let vdp = p.diff().shift_up(1);
    let poly = match derivative {
        Derivative::Minus => &(&p.shift_up(1) + &p.scale(&(k - &x.sigma))) - &vdp,
        Derivative::Plus => &p.scale(&(k + &x.sigma)) + &vdp,
    };
    QuasiOperand::new(&x.sigma - rat(1, 2), poly)
}

/// `D₂(±γ) = (½v^{1/2} - b v^{-1/2} - v^{1/2}d_v)(½v^{1/2} + b v^{-1/2} - v^{1/2}d_v)`
/// with `b = ½(½ ± γ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Operator {
    pub gamma: Rational,
    pub sign: D2Sign,
}

impl D2Operator {
    pub fn new(gamma: Rational, sign: D2Sign) -> Self {
        D2Operator { gamma, sign }
    }

    /// The `D(α)` operator of the two-gap hierarchy, i.e. `D₂(+γ)` with
    /// `γ = α - ½` (equivalently `D₂(-γ)` with `γ = ½ - α`).
    pub fn for_alpha(alpha: &Rational) -> Self {
        D2Operator::new(alpha - rat(1, 2), D2Sign::Plus)
    }

    pub fn half_pole(&self) -> Rational {
        let signed = match self.sign {
            D2Sign::Plus => self.gamma.clone(),
            D2Sign::Minus => -&self.gamma,
        };
        (rat(1, 2) + signed) / int(2)
    }

    /// Exponent `¼ + γ/2` of the Rodrigues operand.
    pub fn rodrigues_sigma(&self) -> Rational {
        rodrigues_sigma(&self.gamma)
    }
}

pub fn rodrigues_sigma(gamma: &Rational) -> Rational {
    rat(1, 4) + gamma / int(2)
}

/// One application of `D₂(±γ)`.
///
/// The raw result carries exponent `σ - 1`; when its polynomial vanishes at
/// the origin the factor `v` is absorbed and the operand keeps exponent `σ`.
/// Otherwise the returned operand has exponent `σ - 1`, i.e. a genuine
/// negative power relative to the input.
pub fn d2_apply(op: &D2Operator, x: &QuasiOperand) -> QuasiOperand {
    let b = op.half_pole();
    let inner = apply_factor(x, &b, Derivative::Minus);
    let outer = apply_factor(&inner, &-b, Derivative::Minus);
    match outer.poly.div_by_var() {
        Some(poly) => QuasiOperand::new(&outer.sigma + int(1), poly),
        None => outer,
    }
}

/// `L^{(γ)}_p(v) = Σ_k (-1)^k C(p+γ, p-k) v^k / k!`.
pub fn laguerre_series(gamma: &Rational, p: usize) -> PolyQ {
    PolyQ::new(
        (0..=p)
            .map(|k| {
                // C(p+γ, p-k) = (γ+k+1)_{p-k} / (p-k)!
                let binom = rising_factorial(&(gamma + int(k as i64 + 1)), p - k) / factorial(p - k);
                let sign = if k % 2 == 0 { int(1) } else { int(-1) };
                binom * sign / factorial(k)
            })
            .collect(),
    )
}

/// `L^{(γ)}_p = ((-1)^p/p!) v^{-¼-γ/2} e^{v/2} D₂^p(±γ) v^{¼+γ/2} e^{-v/2}`.
///
/// Panics if any intermediate application leaves a negative power of `v`
/// or a degree other than the step count: both would contradict the
/// cancellation structure of the operator.
pub fn laguerre_generalized_rodrigues(gamma: &Rational, p: usize, sign: D2Sign) -> PolyQ {
    let op = D2Operator::new(gamma.clone(), sign);
    let sigma0 = op.rodrigues_sigma();
    let mut x = QuasiOperand::new(sigma0.clone(), PolyQ::one());
    for step in 1..=p {
        x = d2_apply(&op, &x);
        assert!(
            x.sigma == sigma0,
            "D2({sign:?}) step {step} for gamma = {gamma} left a negative power of v"
        );
        assert_eq!(
            x.poly.degree(),
            step as isize,
            "D2({sign:?}) step {step} for gamma = {gamma} did not raise the degree by one"
        );
    }
    let sign_p = if p % 2 == 0 { int(1) } else { int(-1) };
    x.poly.scale(&(sign_p / factorial(p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermiteRoute {
    /// `P_{n+1} = 2v P_n - P_n'`, from `(v - d_v)` acting on `e^{-v²/2} P_n`.
    Ladder,
    /// `P_{n+1} = 2v P_n - 2n P_{n-1}`.
    ThreeTerm,
}

pub fn hermite(n: usize, route: HermiteRoute) -> PolyQ {
    let two_v = PolyQ::from_ints(&[0, 2]);
    match route {
        HermiteRoute::Ladder => (0..n).fold(PolyQ::one(), |p, _| &(&two_v * &p) - &p.diff()),
        HermiteRoute::ThreeTerm => {
            let (mut prev, mut cur) = (PolyQ::zero(), PolyQ::one());
            for k in 0..n {
                let next = &(&two_v * &cur) - &prev.scale(&int(2 * k as i64));
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
    }
}

/// `H_{2p}(v) = (-1)^p 2^{2p} p! L^{(-½)}_p(v²)` and
/// `H_{2p+1}(v) = (-1)^p 2^{2p+1} p! v L^{(½)}_p(v²)`.
pub fn hermite_from_laguerre(n: usize) -> PolyQ {
    let p = n / 2;
    let sign = if p % 2 == 0 { int(1) } else { int(-1) };
    let prefactor = sign * num_traits::pow(int(2), n) * factorial(p);
    if n % 2 == 0 {
        laguerre_series(&rat(-1, 2), p).compose_square().scale(&prefactor)
    } else {
        laguerre_series(&rat(1, 2), p).compose_square().shift_up(1).scale(&prefactor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OdeKind {
    /// `v P'' + (γ + 1 - v) P' + p P = 0`
    Laguerre { gamma: Rational, p: usize },
    /// `P'' - 2v P' + 2n P = 0`
    Hermite { n: usize },
}

pub fn ode_residual(kind: &OdeKind, poly: &PolyQ) -> PolyQ {
    let d1 = poly.diff();
    let d2 = d1.diff();
    match kind {
        OdeKind::Laguerre { gamma, p } => {
            let drift = PolyQ::new(vec![gamma + int(1), int(-1)]);
            &(&d2.shift_up(1) + &(&drift * &d1)) + &poly.scale(&int(*p as i64))
        }
        OdeKind::Hermite { n } => {
            &(&d2 - &d1.shift_up(1).scale(&int(2))) + &poly.scale(&int(2 * *n as i64))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedResidual {
    pub name: &'static str,
    pub residual: PolyQ,
}

/// Residuals `lhs - rhs` of the ladder-derived recursion relations at
/// `(γ, p)`. Every entry is the zero polynomial when the relations hold.
///
/// Relations that reference `p - 1` are skipped for `p = 0`. Three lowering
/// relations divide by `p + γ`; this fails with [`Error::Pole`] when that
/// vanishes. See [`recursion_residuals_cleared`] for a pole-free variant.
pub fn recursion_residuals(gamma: &Rational, p: usize) -> Result<Vec<NamedResidual>> {
    let pg = int(p as i64) + gamma;
    if pg.is_zero() {
        return Err(Error::Pole(format!("p + gamma = 0 at p = {p}, gamma = {gamma}")));
    }
    Ok(residuals(gamma, p))
}

/// As [`recursion_residuals`], but relations carrying `1/(p + γ)` are
/// multiplied through by `p + γ` when it vanishes, so every `(γ, p)` is
/// accepted.
pub fn recursion_residuals_cleared(gamma: &Rational, p: usize) -> Vec<NamedResidual> {
    residuals(gamma, p)
}

fn residuals(gamma: &Rational, p: usize) -> Vec<NamedResidual> {
    let pg = int(p as i64) + gamma;
    // lhs - numer/(p+γ), or (p+γ) lhs - numer at the pole
    let over_pg = |lhs: PolyQ, numer: PolyQ| -> PolyQ {
        if pg.is_zero() {
            -numer
        } else {
            &lhs - &numer.scale(&(Rational::one() / &pg))
        }
    };
    let g_lo = gamma - int(1);
    let g_hi = gamma + int(1);
    let l = |g: &Rational, k: usize| laguerre_series(g, k);
    let lp = l(gamma, p);
    let lp1 = l(gamma, p + 1);
    let dlp = lp.diff();
    let v = PolyQ::var();
    let inv_p1 = Rational::one() / int(p as i64 + 1);
    let sigma0 = rodrigues_sigma(gamma);
    let operand = QuasiOperand::new(sigma0.clone(), lp.clone());
    let operand_next = QuasiOperand::new(sigma0.clone(), lp1.clone());

    // v^{-target} e^{v/2} F (v^{σ0} e^{-v/2} L) as a polynomial, where the
    // prefactor exponent of each relation is -target.
    let strip = |x: QuasiOperand, target: Rational| -> PolyQ {
        x.relative_to(&target)
            .or_else(|| x.reduced().relative_to(&target))
            .unwrap_or_else(|| {
                panic!("factor output {:?} is not a polynomial multiple of v^{target}", x)
            })
            .poly
    };
    let quarter = rat(1, 4);

    let mut out = Vec::new();
    let mut push = |name, residual: PolyQ| out.push(NamedResidual { name, residual });

    // Operator forms of the four ladder relations.
    let f1 = apply_factor(&operand, &(-(&quarter - gamma / int(2))), Derivative::Plus);
    push("ladder_lower_gamma_operator", over_pg(l(&g_lo, p), strip(f1, gamma / int(2) - &quarter)));

    let f2 = apply_factor(&operand_next, &(-(&quarter + gamma / int(2))), Derivative::Plus);
    let rhs2 = -strip(f2, &quarter * int(3) + gamma / int(2));
    push("ladder_raise_gamma_lower_p_operator", &l(&g_hi, p) - &rhs2);

    let f3 = apply_factor(&operand, &(&quarter + gamma / int(2)), Derivative::Minus);
    let rhs3 = strip(f3, &quarter * int(3) + gamma / int(2));
    push("ladder_raise_gamma_operator", &l(&g_hi, p) - &rhs3);

    let f4 = apply_factor(&operand, &(&quarter - gamma / int(2)), Derivative::Minus);
    let rhs4 = strip(f4, gamma / int(2) - &quarter).scale(&-&inv_p1);
    push("ladder_lower_gamma_raise_p_operator", &l(&g_lo, p + 1) - &rhs4);

    // Simplified forms.
    let vd = dlp.shift_up(1);
    push("lower_gamma", over_pg(l(&g_lo, p), &lp.scale(gamma) + &vd));
    push("raise_gamma_lower_p", &l(&g_hi, p) + &lp1.diff());
    push("raise_gamma", &l(&g_hi, p) - &(&lp - &dlp));
    let v_minus_g = PolyQ::new(vec![-gamma.clone(), int(1)]);
    push(
        "lower_gamma_raise_p",
        &l(&g_lo, p + 1) + &(&(&v_minus_g * &lp) - &vd).scale(&inv_p1),
    );

    // One D2 step of the generalized Rodrigues formula, before and after
    // using the Laguerre equation to remove v L''.
    for sign in D2Sign::BOTH {
        let stepped = d2_apply(&D2Operator::new(gamma.clone(), sign), &operand);
        let rhs = strip(stepped, sigma0.clone()).scale(&-&inv_p1);
        push(
            match sign {
                D2Sign::Plus => "rodrigues_step_plus",
                D2Sign::Minus => "rodrigues_step_minus",
            },
            &lp1 - &rhs,
        );
    }
    let unsimplified = &(&(&PolyQ::new(vec![gamma + int(1), int(-1)]) * &lp)
        - &(&PolyQ::new(vec![gamma + int(1), int(-2)]) * &dlp))
        - &dlp.diff().shift_up(1);
    push("rodrigues_step_expanded", &lp1 - &unsimplified.scale(&inv_p1));

    let drift = PolyQ::new(vec![int(p as i64 + 1) + gamma, int(-1)]);
    push("recur0", &lp1 - &(&(&drift * &lp) + &vd).scale(&inv_p1));

    if p >= 1 {
        let lhm = l(&g_hi, p - 1);
        let v_lhm = &v * &lhm;
        push("lower_gamma_substituted", over_pg(l(&g_lo, p), &lp.scale(gamma) - &v_lhm));
        push("raise_gamma_substituted", &l(&g_hi, p) - &(&lp + &lhm));
        push(
            "lower_gamma_raise_p_substituted",
            &l(&g_lo, p + 1) + &(&(&v_minus_g * &lp) + &v_lhm).scale(&inv_p1),
        );
        push("mixed_three_term", &lp1 - &(&(&drift * &lp) - &v_lhm).scale(&inv_p1));

        // Standard contiguous relations obtained as combinations of the above.
        let lpm = l(gamma, p - 1);
        let three_term = &(&PolyQ::new(vec![int(2 * p as i64 + 1) + gamma, int(-1)]) * &lp)
            - &lpm.scale(&pg);
        push("standard_three_term", &lp1.scale(&int(p as i64 + 1)) - &three_term);
        push(
            "standard_v_raise_gamma",
            &(&v * &l(&g_hi, p)) - &(&lp.scale(&(&pg + int(1))) - &lp1.scale(&int(p as i64 + 1))),
        );
        push("standard_derivative", &(&vd - &lp.scale(&int(p as i64))) + &lpm.scale(&pg));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Vec<Rational> {
        vec![rat(1, 2), rat(-1, 3), rat(7, 5), int(0), int(3), rat(-11, 4)]
    }

    #[test]
    fn recursion_pole() {
        assert!(matches!(recursion_residuals(&int(0), 0), Err(Error::Pole(_))));
        assert!(matches!(recursion_residuals(&int(-2), 2), Err(Error::Pole(_))));
        for (g, p) in [(int(0), 0), (int(-2), 2)] {
            assert!(recursion_residuals_cleared(&g, p).iter().all(|r| r.residual.is_zero()));
        }
    }

    #[test]
    fn series_low_orders() {
        for gamma in g() {
            assert_eq!(laguerre_series(&gamma, 0), PolyQ::one());
            assert_eq!(laguerre_series(&gamma, 1), PolyQ::new(vec![&gamma + int(1), int(-1)]));
            let l2 = PolyQ::new(vec![
                (&gamma + int(2)) * (&gamma + int(1)) / int(2),
                -(&gamma + int(2)),
                rat(1, 2),
            ]);
            assert_eq!(laguerre_series(&gamma, 2), l2);
        }
    }

    #[test]
    fn series_leading_coefficient() {
        for p in 0..12 {
            let l = laguerre_series(&rat(2, 7), p);
            assert_eq!(l.degree(), p as isize);
            let sign = if p % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(l.leading().unwrap(), &(sign / factorial(p)));
        }
    }

    #[test]
    fn d2_single_step_by_hand() {
        // Hand expansion: D2(+γ) v^{σ0} e^{-v/2} = v^{σ0} e^{-v/2} (v - γ - 1).
        for gamma in g() {
            for sign in D2Sign::BOTH {
                let op = D2Operator::new(gamma.clone(), sign);
                let x = QuasiOperand::new(op.rodrigues_sigma(), PolyQ::one());
                let y = d2_apply(&op, &x);
                assert_eq!(y.sigma, op.rodrigues_sigma());
                assert_eq!(y.poly, PolyQ::new(vec![-(&gamma + int(1)), int(1)]));
            }
        }
    }

    #[test]
    fn d_alpha_on_ground_operand() {
        let alpha = rat(1, 5);
        let op = D2Operator::for_alpha(&alpha);
        let x = QuasiOperand::new(&alpha / int(2), PolyQ::one());
        assert_eq!(op.rodrigues_sigma(), x.sigma);
        let y = d2_apply(&op, &x);
        // P^even_{1,1}(v) = v - 1/2 - α = -L^{(α-1/2)}_1(v)
        assert_eq!(y.poly, PolyQ::new(vec![-(rat(1, 2) + &alpha), int(1)]));
        assert_eq!(y.poly, -laguerre_series(&(&alpha - rat(1, 2)), 1));
        // D(α) is also D2(-γ) with γ = 1/2 - α.
        let alt = D2Operator::new(rat(1, 2) - &alpha, D2Sign::Minus);
        assert_eq!(alt.half_pole(), op.half_pole());
    }

    #[test]
    fn rodrigues_examples() {
        let gamma = rat(3, 7);
        assert_eq!(laguerre_generalized_rodrigues(&gamma, 2, D2Sign::Plus), laguerre_series(&gamma, 2));
        for p in 0..=8 {
            assert_eq!(
                laguerre_generalized_rodrigues(&gamma, p, D2Sign::Plus),
                laguerre_generalized_rodrigues(&gamma, p, D2Sign::Minus)
            );
        }
        assert_eq!(laguerre_generalized_rodrigues(&gamma, 0, D2Sign::Minus), PolyQ::one());
    }

    #[test]
    fn general_operand_can_leave_negative_power() {
        // An operand off the Rodrigues exponent is not closed under D2.
        let op = D2Operator::new(rat(1, 3), D2Sign::Plus);
        let x = QuasiOperand::new(int(0), PolyQ::one());
        let y = d2_apply(&op, &x);
        assert_eq!(y.sigma, int(-1));
    }

    #[test]
    fn hermite_examples() {
        for route in [HermiteRoute::Ladder, HermiteRoute::ThreeTerm] {
            assert_eq!(hermite(0, route), PolyQ::one());
            assert_eq!(hermite(1, route), PolyQ::from_ints(&[0, 2]));
            assert_eq!(hermite(2, route), PolyQ::from_ints(&[-2, 0, 4]));
            assert_eq!(hermite(3, route), PolyQ::from_ints(&[0, -12, 0, 8]));
        }
        assert_eq!(hermite_from_laguerre(1), PolyQ::from_ints(&[0, 2]));
        assert_eq!(hermite_from_laguerre(2), PolyQ::from_ints(&[-2, 0, 4]));
        assert_eq!(hermite_from_laguerre(3), PolyQ::from_ints(&[0, -12, 0, 8]));
    }

    #[test]
    fn ode_examples() {
        let gamma = rat(5, 3);
        let l1 = PolyQ::new(vec![&gamma + int(1), int(-1)]);
        assert!(ode_residual(&OdeKind::Laguerre { gamma: gamma.clone(), p: 1 }, &l1).is_zero());
        assert!(ode_residual(&OdeKind::Hermite { n: 2 }, &PolyQ::from_ints(&[-2, 0, 4])).is_zero());
        // negative control: P = v gives residual (γ+1-v) + v = γ+1
        let wrong = ode_residual(&OdeKind::Laguerre { gamma: gamma.clone(), p: 1 }, &PolyQ::var());
        assert_eq!(wrong, PolyQ::constant(&gamma + int(1)));
    }

    #[test]
    fn recursion_examples() {
        // (1 - d_v) L^(γ)_1 = (γ+2) - v = L^(γ+1)_1
        let gamma = rat(2, 9);
        let l1 = laguerre_series(&gamma, 1);
        assert_eq!(&l1 - &l1.diff(), PolyQ::new(vec![&gamma + int(2), int(-1)]));
        for (gamma, p) in [(gamma.clone(), 1), (gamma.clone(), 2), (rat(-1, 2) + rat(1, 3), 3)] {
            let res = recursion_residuals(&gamma, p).unwrap();
            assert!(res.len() >= 6);
            for r in res {
                assert!(r.residual.is_zero(), "{} at gamma={gamma}, p={p}: {}", r.name, r.residual);
            }
        }
    }

    #[test]
    fn recursion_negative_control() {
        // Replacing the series by a wrong polynomial must make residuals nonzero.
        let gamma = rat(1, 3);
        let lp = laguerre_series(&gamma, 2);
        let bad = &lp + &PolyQ::var();
        assert!(!ode_residual(&OdeKind::Laguerre { gamma, p: 2 }, &bad).is_zero());
    }
}
