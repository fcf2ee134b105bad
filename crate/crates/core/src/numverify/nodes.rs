use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{from_f64, int, to_f64, Rational};
use crate::hierarchy::{HierarchySpec, QuasiState, StateForm};
use crate::polyfactory::QuasiOperand;

/// Behaviour of `ψ` at `u₀`, with `ψ ~ |u - u₀|^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterBehavior {
    VanishesPower(#[serde(with = "crate::exactnum::serde_rational")] Rational),
    FiniteNonzero,
    DivergesPower(#[serde(with = "crate::exactnum::serde_rational")] Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeReport {
    pub zeros: usize,
    pub center: CenterBehavior,
}

fn rational(x: f64) -> Result<Rational> {
    from_f64(x).ok_or_else(|| Error::InvalidGrid(format!("non-finite domain bound {x}")))
}

/// Counts the zeros of `ψ` on `domain` from exact Sturm sequences of the
/// polynomial factor, adding the center when `ψ` vanishes there.
pub fn count_nodes(state: &QuasiState, spec: &HierarchySpec, domain: (f64, f64)) -> Result<NodeReport> {
    let (lo, hi) = domain;
    if !(lo < hi) {
        return Err(Error::InvalidGrid(format!("empty domain ({lo}, {hi})")));
    }
    let x_lo = rational(lo)? - spec.u0();
    let x_hi = rational(hi)? - spec.u0();
    match state.form {
        StateForm::GaussianU => {
            // the scale √(Δ/2) is rounded to a rational; that only matters
            // for a root sitting on the domain edge
            let scale = rational((to_f64(&spec.gaps()[0]) / 2.0).sqrt())?;
            let zeros = state.poly.count_roots_in(&(&x_lo * &scale), &(&x_hi * &scale));
            let low = state.poly.low_order();
            let center = if state.poly.is_zero() || low == 0 {
                CenterBehavior::FiniteNonzero
            } else {
                CenterBehavior::VanishesPower(int(low as i64))
            };
            Ok(NodeReport { zeros, center })
        }
        StateForm::LaguerreV => {
            let reduced = QuasiOperand::new(state.sigma.clone(), state.poly.clone()).reduced();
            let s4 = spec.gap_sum() / int(4);
            let mut zeros = 0;
            for x in [&x_lo, &x_hi] {
                if !x.is_zero() {
                    zeros += reduced.poly.count_roots_in(&Rational::zero(), &(&s4 * x * x));
                }
            }
            let contains_center = x_lo.is_negative() && x_hi.is_positive();
            let exponent = &reduced.sigma * int(2);
            let center = if exponent.is_positive() {
                zeros += usize::from(contains_center);
                CenterBehavior::VanishesPower(exponent)
            } else if exponent.is_negative() {
                CenterBehavior::DivergesPower(exponent)
            } else {
                CenterBehavior::FiniteNonzero
            };
            Ok(NodeReport { zeros, center })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::hierarchy::build_eigenstate;

    #[test]
    fn node_examples() {
        let s = HierarchySpec::with_gaps(vec![int(1), int(3)]).unwrap();
        let dom = (-20.0, 20.0);
        for p in 0..4 {
            let odd = count_nodes(&build_eigenstate(&s, 1, 2 * p + 1).unwrap(), &s, dom).unwrap();
            assert_eq!(odd.zeros, 2 * p + 1);
            assert!(matches!(odd.center, CenterBehavior::VanishesPower(_)));
            let div = count_nodes(&build_eigenstate(&s, 2, 2 * p).unwrap(), &s, dom).unwrap();
            assert_eq!(div.zeros, 2 * p);
            assert_eq!(div.center, CenterBehavior::DivergesPower(rat(-1, 4)));
            let van = count_nodes(&build_eigenstate(&s, 1, 2 * p).unwrap(), &s, dom).unwrap();
            assert_eq!(van.zeros, 2 * p + 1);
            assert_eq!(van.center, CenterBehavior::VanishesPower(rat(1, 4)));
        }
    }

    #[test]
    fn hermite_nodes() {
        let s = HierarchySpec::with_gaps(vec![int(2)]).unwrap();
        for n in 0..8 {
            let r = count_nodes(&build_eigenstate(&s, 1, n).unwrap(), &s, (-10.0, 10.0)).unwrap();
            assert_eq!(r.zeros, n);
        }
    }
}
