//! Rank-one model: the Jacobian `Q[theta]/(theta^{g+1})` with
//! `∫ theta^g / g! = 1`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::chern::{ch_to_chern, segre};
use super::ring::{FormalClass, Generator, GradedRing};
use crate::arith::Rational;

pub fn jacobian_ring(g: u32) -> Arc<GradedRing> {
    GradedRing::new(
        g,
        vec![Generator {
            name: "theta".into(),
            degree: 1,
            nilpotency: Some(g + 1),
        }],
    )
    .expect("single generator")
}

/// Chern character of `Rπ_*(P ⊗ ρ^*α)` on `Jac^d(C)`, for `α` of rank `a`
/// and degree `e` and the Poincaré bundle `P` normalized along a point.
pub fn jacobian_pushforward_character(g: u32, d: i64, a: i64, e: i64) -> FormalClass {
    let ring = jacobian_ring(g);
    let rank = a * d + e + a * (1 - g as i64);
    let theta = FormalClass::generator(&ring, "theta");
    &FormalClass::constant(&ring, Rational::from_integer(rank.into()))
        - &theta.scale(&Rational::from_integer(a.into()))
}

/// `∫_{Jac} c_g(class)` with `∫ theta^g = g!`.
pub fn integrate_top(class: &FormalClass, g: u32) -> Rational {
    let fact: BigInt = (1..=g).fold(BigInt::one(), |acc, i| acc * i);
    class.coefficient_of(&[("theta", g)]) * Rational::from_integer(fact)
}

/// `∫_{Jac} s(α_M)` for `α` of rank `a` and degree `e` on a curve of genus `g`.
pub fn jacobian_segre_number(g: u32, d: i64, a: i64, e: i64) -> BigInt {
    let ch = jacobian_pushforward_character(g, d, a, e);
    let s = segre(&ch_to_chern(&ch));
    let value = integrate_top(&s, g);
    assert!(
        value.is_integer(),
        "top Segre number {value} is not integral"
    );
    value.to_integer()
}

/// `∫_{Jac} s(α_M)` where `ch(α_M) = -(g-1) - a theta`; equals `a^g`.
pub fn jacobian_segre(g: u32, a: i64) -> BigInt {
    jacobian_segre_number(g, 0, a, (a - 1) * (g as i64 - 1))
}

/// `χ(C, E · α)` for `E` of rank `r`, degree `d` and the class `α` attached
/// to `(r, d, ℓ)`: rank `(ℓ+h) r_0`, degree `-(ℓ+h) d_0 + ℓ r_0 (g-1)`.
pub fn rank_alpha_m(g: u32, r: u32, d: i64, level: u32) -> i64 {
    let r = r as i64;
    let g = g as i64;
    let level = level as i64;
    let h = if d == 0 { r } else { r.gcd(&d) };
    let (r0, d0) = (r / h, d / h);
    let alpha_rank = (level + h) * r0;
    let alpha_degree = -(level + h) * d0 + level * r0 * (g - 1);
    r * alpha_degree + alpha_rank * d + r * alpha_rank * (1 - g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobian_examples() {
        assert_eq!(jacobian_segre(2, 2), BigInt::from(4));
        assert_eq!(jacobian_segre(3, 3), BigInt::from(27));
        assert_eq!(jacobian_segre(2, 1), BigInt::from(1));
    }

    #[test]
    fn pushforward_rank_matches_curve_riemann_roch() {
        for g in 2..6u32 {
            for level in 1..5i64 {
                for d in -3..8i64 {
                    // α from the rank-one data: rank ℓ+1, degree -(ℓ+1)d + ℓ(g-1)
                    let a = level + 1;
                    let e = -(level + 1) * d + level * (g as i64 - 1);
                    let ch = jacobian_pushforward_character(g, d, a, e);
                    assert_eq!(
                        ch.constant_term(),
                        Rational::from_integer((1 - g as i64).into())
                    );
                    assert_eq!(jacobian_segre_number(g, d, a, e), BigInt::from(a).pow(g));
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        for d in -4..9 {
            for level in 1..5 {
                assert_eq!(rank_alpha_m(2, 2, d, level), -4);
                assert_eq!(rank_alpha_m(3, 1, d, level), -2);
                assert_eq!(rank_alpha_m(5, 3, d, level), -36);
            }
        }
    }

    #[test]
    fn closed_form_grid() {
        for g in 2..=4u32 {
            for a in 1..=6i64 {
                assert_eq!(jacobian_segre(g, a), BigInt::from(a).pow(g));
            }
        }
    }
}
