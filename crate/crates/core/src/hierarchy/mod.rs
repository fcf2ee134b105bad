//! Closed-form periodic hierarchies for periods 1 and 2.
//!
//! Units are those where `ħ²/(2m₀) = 1`, so the configuration variable `u`
//! is measured in inverse square roots of the energy unit.

mod states;

pub use states::*;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{format_rational, int, rat, serde_rational, to_f64, Rational};

/// The engineered problem: `N` prescribed gaps repeated periodically, the
/// ground energy `E₀` of the first Hamiltonian and the center `u₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchySpec {
    gaps: Vec<Rational>,
    e0: Rational,
    u0: Rational,
}

impl HierarchySpec {
    pub fn new(gaps: Vec<Rational>, e0: Rational, u0: Rational) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidSpec("at least one gap is required".into()));
        }
        if let Some((k, g)) = gaps.iter().enumerate().find(|(_, g)| !g.is_positive()) {
            return Err(Error::InvalidSpec(format!(
                "gap {} must be strictly positive, got {}",
                k + 1,
                format_rational(g)
            )));
        }
        let spec = HierarchySpec { gaps, e0, u0 };
        if spec.period() == 2 {
            let a = spec.alpha();
            let half = rat(1, 2);
            if a <= -&half || a >= half {
                return Err(Error::InvalidSpec(format!("alpha = {a} outside (-1/2, 1/2)")));
            }
        }
        Ok(spec)
    }

    /// Gaps only, with `E₀ = 0` and `u₀ = 0`.
    pub fn with_gaps(gaps: Vec<Rational>) -> Result<Self> {
        Self::new(gaps, Rational::zero(), Rational::zero())
    }

    pub fn period(&self) -> usize {
        self.gaps.len()
    }

    pub fn gaps(&self) -> &[Rational] {
        &self.gaps
    }

    pub fn e0(&self) -> &Rational {
        &self.e0
    }

    pub fn u0(&self) -> &Rational {
        &self.u0
    }

    pub fn u0_f64(&self) -> f64 {
        to_f64(&self.u0)
    }

    /// `Δ_k` for `k ≥ 1`, repeated with period `N`.
    pub fn gap(&self, k: usize) -> &Rational {
        assert!(k >= 1, "gaps are numbered from 1");
        &self.gaps[(k - 1) % self.period()]
    }

    pub fn gap_sum(&self) -> Rational {
        self.gaps.iter().sum()
    }

    /// `(Δ₂ - Δ₁) / (2(Δ₂ + Δ₁))` for period 2, zero for period 1.
    ///
    /// Panics for `N ≥ 3`, where no such parameter is defined.
    pub fn alpha(&self) -> Rational {
        match self.period() {
            1 => Rational::zero(),
            2 => (&self.gaps[1] - &self.gaps[0]) / (int(2) * self.gap_sum()),
            n => panic!("alpha is only defined for period 1 or 2, not {n}"),
        }
    }

    /// `E_{λ,0} = E₀ + Δ₁ + … + Δ_{λ-1}`.
    pub fn ground_energy(&self, level: usize) -> Rational {
        energy_level(self, level, 0)
    }

    /// Maps any level `λ ≥ 1` to its representative in `1..=N`.
    pub fn reduce_level(&self, level: usize) -> Result<usize> {
        if level == 0 {
            return Err(Error::InvalidSpec("levels are numbered from 1".into()));
        }
        Ok((level - 1) % self.period() + 1)
    }

    pub(crate) fn require_closed_form(&self) -> Result<()> {
        match self.period() {
            1 | 2 => Ok(()),
            n => Err(Error::UnsupportedPeriod(n)),
        }
    }
}

/// `W(u) = c (u - u₀) + a / (u - u₀)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Superpotential {
    #[serde(with = "serde_rational")]
    pub linear_coeff: Rational,
    #[serde(with = "serde_rational")]
    pub pole_coeff: Rational,
    #[serde(with = "serde_rational")]
    pub center: Rational,
}

impl Superpotential {
    /// `(W(u), W'(u))`.
    pub fn eval_f64(&self, u: f64) -> (f64, f64) {
        let x = u - to_f64(&self.center);
        let (c, a) = (to_f64(&self.linear_coeff), to_f64(&self.pole_coeff));
        (c * x + a / x, c - a / (x * x))
    }
}

/// `V(u) = q (u - u₀)² + s / (u - u₀)² + K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialForm {
    #[serde(with = "serde_rational")]
    pub quad_coeff: Rational,
    #[serde(with = "serde_rational")]
    pub invsq_coeff: Rational,
    #[serde(with = "serde_rational")]
    pub const_term: Rational,
    #[serde(with = "serde_rational")]
    pub center: Rational,
}

impl PotentialForm {
    /// Expands `W² - W' + E_{λ,0}`; the `2ac - c` cross term folds into the
    /// constant.
    pub fn from_superpotential(w: &Superpotential, ground_energy: &Rational) -> Self {
        let (c, a) = (&w.linear_coeff, &w.pole_coeff);
        PotentialForm {
            quad_coeff: c * c,
            invsq_coeff: a * a + a,
            const_term: int(2) * a * c - c + ground_energy,
            center: w.center.clone(),
        }
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        let x = u - to_f64(&self.center);
        let x2 = x * x;
        let mut v = to_f64(&self.quad_coeff) * x2 + to_f64(&self.const_term);
        if !self.invsq_coeff.is_zero() {
            v += to_f64(&self.invsq_coeff) / x2;
        }
        v
    }

    pub fn is_singular(&self) -> bool {
        !self.invsq_coeff.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hierarchy {
    pub superpotentials: Vec<Superpotential>,
    pub potentials: Vec<PotentialForm>,
}

/// Closed-form superpotential of level `λ ≥ 1` (periodic in `λ`).
pub fn superpotential(spec: &HierarchySpec, level: usize) -> Result<Superpotential> {
    spec.require_closed_form()?;
    let level = spec.reduce_level(level)?;
    let center = spec.u0.clone();
    Ok(match spec.period() {
        1 => Superpotential { linear_coeff: spec.gaps[0].clone() / int(2), pole_coeff: Rational::zero(), center },
        _ => {
            let alpha = spec.alpha();
            Superpotential {
                linear_coeff: spec.gap_sum() / int(4),
                pole_coeff: if level == 1 { -alpha } else { alpha },
                center,
            }
        }
    })
}

/// `V_λ = W_λ² - W_λ' + E_{λ,0}` for any `λ ≥ 1`; levels past `N` carry the
/// accumulated energy shift.
pub fn potential(spec: &HierarchySpec, level: usize) -> Result<PotentialForm> {
    let w = superpotential(spec, level)?;
    Ok(PotentialForm::from_superpotential(&w, &spec.ground_energy(level)))
}

pub fn build_hierarchy(spec: &HierarchySpec) -> Result<Hierarchy> {
    spec.require_closed_form()?;
    let levels = 1..=spec.period();
    Ok(Hierarchy {
        superpotentials: levels.clone().map(|l| superpotential(spec, l)).collect::<Result<_>>()?,
        potentials: levels.map(|l| potential(spec, l)).collect::<Result<_>>()?,
    })
}

/// Coefficients of `W²_{λ+1} - W'_{λ+1} + Δ_λ - W²_λ - W'_λ` in powers of
/// `(u - u₀)`, for superpotentials of the pole-plus-linear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainResidual {
    pub level: usize,
    pub quadratic: Rational,
    pub constant: Rational,
    pub inverse_square: Rational,
}

impl ChainResidual {
    pub fn is_zero(&self) -> bool {
        self.quadratic.is_zero() && self.constant.is_zero() && self.inverse_square.is_zero()
    }
}

/// Exact residual of the closed periodic Riccati chain, with `W_{N+1} = W₁`.
pub fn chain_residual(ws: &[Superpotential], gaps: &[Rational]) -> Vec<ChainResidual> {
    assert_eq!(ws.len(), gaps.len(), "one superpotential per gap");
    let n = ws.len();
    (0..n)
        .map(|i| {
            let (cur, next) = (&ws[i], &ws[(i + 1) % n]);
            let (c, a) = (&cur.linear_coeff, &cur.pole_coeff);
            let (cn, an) = (&next.linear_coeff, &next.pole_coeff);
            ChainResidual {
                level: i + 1,
                quadratic: cn * cn - c * c,
                constant: (int(2) * an * cn - cn) + &gaps[i] - (int(2) * a * c + c),
                inverse_square: (an * an + an) - (a * a - a),
            }
        })
        .collect()
}

pub fn riccati_symbolic_residual(spec: &HierarchySpec) -> Result<Vec<ChainResidual>> {
    let h = build_hierarchy(spec)?;
    Ok(chain_residual(&h.superpotentials, spec.gaps()))
}

/// `E_{λ,n} = E₀ + Δ₁ + … + Δ_{λ-1+n}`, valid for every period since the
/// gaps repeat.
pub fn energy_level(spec: &HierarchySpec, level: usize, n: usize) -> Rational {
    assert!(level >= 1, "levels are numbered from 1");
    (1..level + n).fold(spec.e0.clone(), |acc, k| acc + spec.gap(k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub energy: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub level: usize,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumTable {
    pub fn energies(&self) -> Vec<Rational> {
        self.entries.iter().map(|e| e.energy.clone()).collect()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].energy < w[1].energy)
    }

    /// Checks `E_{n+N} - E_n = Δ₁ + … + Δ_N` wherever both entries exist.
    pub fn is_periodic(&self, spec: &HierarchySpec) -> bool {
        let n = spec.period();
        let total = spec.gap_sum();
        self.entries.windows(n + 1).all(|w| w[n].energy.clone() - &w[0].energy == total)
    }
}

pub fn spectrum_table(spec: &HierarchySpec, level: usize, count: usize) -> SpectrumTable {
    SpectrumTable {
        level,
        entries: (0..count).map(|n| SpectrumEntry { n, energy: energy_level(spec, level, n) }).collect(),
    }
}

/// Global normalization `N₀` in the chosen units.
///
/// Period 1 uses `(Δ/(2π))^{1/4}`, period 2 uses `((Δ₁+Δ₂)/4)^{1/4}`; both
/// make `∫ du |ψ_{λ,0}|² = 1`.
pub fn global_norm(spec: &HierarchySpec) -> f64 {
    match spec.period() {
        1 => (to_f64(&spec.gaps[0]) / (2.0 * std::f64::consts::PI)).powf(0.25),
        _ => (to_f64(&spec.gap_sum()) / 4.0).powf(0.25),
    }
}

pub(crate) fn half() -> Rational {
    Rational::one() / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(g: &[i64]) -> HierarchySpec {
        HierarchySpec::with_gaps(g.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn rejects_bad_gaps() {
        assert!(HierarchySpec::with_gaps(vec![]).is_err());
        assert!(HierarchySpec::with_gaps(vec![int(1), int(0)]).is_err());
        assert!(HierarchySpec::with_gaps(vec![int(-1)]).is_err());
    }

    #[test]
    fn build_examples() {
        let h = build_hierarchy(&spec(&[2])).unwrap();
        assert_eq!(h.superpotentials[0].linear_coeff, int(1));
        assert!(h.superpotentials[0].pole_coeff.is_zero());

        let s = spec(&[1, 3]);
        assert_eq!(s.alpha(), rat(1, 4));
        let h = build_hierarchy(&s).unwrap();
        assert_eq!(h.superpotentials[0].linear_coeff, int(1));
        assert_eq!(h.superpotentials[0].pole_coeff, rat(-1, 4));
        assert_eq!(h.superpotentials[1].pole_coeff, rat(1, 4));

        let h = build_hierarchy(&spec(&[2, 2])).unwrap();
        assert_eq!(h.superpotentials[0], h.superpotentials[1]);
        assert!(h.superpotentials[0].pole_coeff.is_zero());
        assert_eq!(h.superpotentials[0], build_hierarchy(&spec(&[2])).unwrap().superpotentials[0]);

        assert_eq!(build_hierarchy(&spec(&[1, 2, 3])), Err(Error::UnsupportedPeriod(3)));
    }

    #[test]
    fn potentials_match_expansions() {
        // V1 = S²/16 x² - (Δ2-Δ1)(Δ2+3Δ1)/(4S²) x⁻² - Δ2/2 + E0
        // V2 = S²/16 x² + (Δ2-Δ1)(3Δ2+Δ1)/(4S²) x⁻² + Δ1/2 + E0
        let (d1, d2, e0) = (rat(2, 3), rat(5, 2), rat(-7, 4));
        let s = HierarchySpec::new(vec![d1.clone(), d2.clone()], e0.clone(), rat(1, 3)).unwrap();
        let sum = &d1 + &d2;
        let h = build_hierarchy(&s).unwrap();
        let (v1, v2) = (&h.potentials[0], &h.potentials[1]);
        assert_eq!(v1.quad_coeff, &sum * &sum / int(16));
        assert_eq!(v1.invsq_coeff, -(&d2 - &d1) * (&d2 + int(3) * &d1) / (int(4) * &sum * &sum));
        assert_eq!(v1.const_term, -&d2 / int(2) + &e0);
        assert_eq!(v2.quad_coeff, v1.quad_coeff);
        assert_eq!(v2.invsq_coeff, (&d2 - &d1) * (int(3) * &d2 + &d1) / (int(4) * &sum * &sum));
        assert_eq!(v2.const_term, &d1 / int(2) + &e0);

        // N=1: V1 = Δ²/4 x² - Δ/2 + E0
        let s = HierarchySpec::new(vec![int(2)], int(3), int(0)).unwrap();
        let v = potential(&s, 1).unwrap();
        assert_eq!((v.quad_coeff, v.invsq_coeff, v.const_term), (int(1), int(0), int(2)));
    }

    #[test]
    fn symbolic_riccati_closure() {
        for g in [[1, 3], [2, 2], [5, 1], [7, 4]] {
            for r in riccati_symbolic_residual(&spec(&g)).unwrap() {
                assert!(r.is_zero(), "{g:?}: {r:?}");
            }
        }
        for r in riccati_symbolic_residual(&spec(&[3])).unwrap() {
            assert!(r.is_zero());
        }
        // a perturbed pole breaks it
        let mut ws = build_hierarchy(&spec(&[1, 3])).unwrap().superpotentials;
        ws[0].pole_coeff += rat(1, 100);
        assert!(chain_residual(&ws, &[int(1), int(3)]).iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn energy_examples() {
        let s = spec(&[1, 2]);
        let e1: Vec<_> = (0..5).map(|n| energy_level(&s, 1, n)).collect();
        assert_eq!(e1, [0, 1, 3, 4, 6].map(int));
        let e2: Vec<_> = (0..4).map(|n| energy_level(&s, 2, n)).collect();
        assert_eq!(e2, [1, 3, 4, 6].map(int));
        let s = HierarchySpec::new(vec![int(2)], int(1), int(0)).unwrap();
        assert_eq!(energy_level(&s, 1, 3), int(7));
    }

    #[test]
    fn spectrum_invariants() {
        let s = HierarchySpec::new(vec![rat(1, 3), rat(5, 2), int(2)], rat(-1, 2), int(0)).unwrap();
        for level in 1..=4 {
            let t = spectrum_table(&s, level, 12);
            assert!(t.is_strictly_increasing());
            assert!(t.is_periodic(&s));
            for n in 0..10 {
                assert_eq!(energy_level(&s, level + 1, n), energy_level(&s, level, n + 1));
            }
        }
    }

    #[test]
    fn spectrum_json_round_trip() {
        let s = HierarchySpec::new(vec![rat(1, 3), rat(5, 7)], rat(-2, 9), int(0)).unwrap();
        let t = spectrum_table(&s, 2, 6);
        let text = serde_json::to_string(&t).unwrap();
        assert!(text.contains("\"-2/9\"") || text.contains("/"));
        let back: SpectrumTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }
}
