//! Truncated graded-commutative calculus for characteristic classes.
//!
//! Classes live in a [`GradedRing`]: a polynomial ring over Q on even
//! generators, with every term above the ring's top degree dropped.

mod chern;
mod jacobian;
mod pushforward;
mod ring;

pub use chern::{ch_to_chern, chern_to_ch, segre, twist, ChernData};
pub use jacobian::{
    integrate_top, jacobian_pushforward_character, jacobian_ring, jacobian_segre,
    jacobian_segre_number, rank_alpha_m,
};
pub use pushforward::{proj_pushforward, pushforward_chain, verify_eq7_chain, ChainLegs};
pub use ring::{FormalClass, Generator, GradedRing, Monomial};
