//! Pushforward along a projective bundle `P(E) -> B` and the formal
//! verification of the Segre pushforward chain used for stable pairs.

use super::chern::{ch_to_chern, twist, ChernData};
use super::ring::{FormalClass, GradedRing};

/// Pushforward of a polynomial in the hyperplane class `zeta` along a
/// projective bundle of fiber dimension `bundle_rank - 1`:
/// `zeta^{R-1+k} -> s_k`, lower powers of `zeta` vanish. The result is linear
/// over the base classes.
pub fn proj_pushforward(
    expr: &FormalClass,
    zeta: &str,
    bundle_rank: u32,
    segre: &FormalClass,
) -> FormalClass {
    assert!(bundle_rank >= 1, "projective bundle needs positive rank");
    let ring = expr.ring();
    let zi = ring
        .index_of(zeta)
        .unwrap_or_else(|| panic!("no generator named {zeta}"));
    let mut out = FormalClass::zero(ring);
    for (mono, coeff) in expr.terms() {
        let j = mono[zi];
        if j + 1 < bundle_rank {
            continue;
        }
        let k = j + 1 - bundle_rank;
        let mut base = mono.clone();
        base[zi] = 0;
        let term = FormalClass::monomial(ring, base, coeff.clone());
        out = &out + &(&term * &segre.part(k));
    }
    out
}

/// The individual legs of the chain, all as classes on the base.
#[derive(Debug, Clone)]
pub struct ChainLegs {
    /// `pi_* c_top(O(1) ⊗ F)`.
    pub twisted_top: FormalClass,
    /// `pi_* [(1 - zeta)^{-1} c(F)]_top`.
    pub series: FormalClass,
    /// `[s(E) c(F)]` in the matching base degree, free Segre generators.
    pub segre_product: FormalClass,
    /// `c(F - E)` via Chern characters, in the matching base degree.
    pub kclass: FormalClass,
}

/// Expands every leg for `F = V_p^{⊕m}` with `V_p` of rank `r` (free Chern
/// generators `v1..vr`) and a bundle `E` of rank `bundle_rank` with free
/// Segre generators `s1..`; base classes above degree `top` are dropped.
pub fn pushforward_chain(r: u32, m: u32, bundle_rank: u32, top: u32) -> ChainLegs {
    let f = r * m;
    let ring_top = f.max(top);
    let mut gens: Vec<(String, u32)> = vec![("zeta".to_string(), 1)];
    gens.extend((1..=r).map(|i| (format!("v{i}"), i)));
    gens.extend((1..=ring_top).map(|i| (format!("s{i}"), i)));
    let gen_refs: Vec<(&str, u32)> = gens.iter().map(|(n, d)| (n.as_str(), *d)).collect();
    let ring = GradedRing::free(ring_top, &gen_refs).expect("generator names are distinct");

    let one = FormalClass::one(&ring);
    let chern_v = (1..=r).fold(one.clone(), |acc, i| {
        &acc + &FormalClass::generator(&ring, &format!("v{i}"))
    });
    let segre_e = (1..=ring_top).fold(one.clone(), |acc, i| {
        &acc + &FormalClass::generator(&ring, &format!("s{i}"))
    });
    let v = ChernData::from_chern(r as i64, chern_v).expect("constant term is one");
    let big_f = (0..m).fold(ChernData::trivial(&ring, 0), |acc, _| acc.direct_sum(&v));
    let zeta = FormalClass::generator(&ring, "zeta");

    let base_degree = (f + 1).checked_sub(bundle_rank);
    let in_base = |x: FormalClass| match base_degree {
        Some(k) if k <= top => x.part(k),
        _ => FormalClass::zero(&ring),
    };

    let top_class = twist(&big_f, &zeta).c(f);
    let twisted_top = in_base(proj_pushforward(&top_class, "zeta", bundle_rank, &segre_e));

    let series_top = (&zeta.geometric_series() * big_f.chern()).part(f);
    let series = in_base(proj_pushforward(&series_top, "zeta", bundle_rank, &segre_e));

    let segre_product = in_base(&segre_e * big_f.chern());

    // E recorded by its Chern class 1/s(E); F - E through characters
    let e = ChernData::from_chern(bundle_rank as i64, super::chern::segre(&segre_e))
        .expect("constant term is one");
    let difference = &big_f.character() - &e.character();
    let kclass = in_base(ch_to_chern(&difference));

    ChainLegs {
        twisted_top,
        series,
        segre_product,
        kclass,
    }
}

/// `true` iff every leg of the pushforward chain agrees exactly.
pub fn verify_eq7_chain(r: u32, m: u32, bundle_rank: u32, top: u32) -> bool {
    let legs = pushforward_chain(r, m, bundle_rank, top);
    legs.twisted_top == legs.series
        && legs.series == legs.segre_product
        && legs.segre_product == legs.kclass
}
