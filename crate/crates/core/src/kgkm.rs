//! Equivariant K-theory `K_T(G/P)`.

use std::sync::Arc;

use crate::algebra::{LaurentPoly, Rational};
use crate::cartan::FlagVariety;
use crate::error::Result;
use crate::gkm::{GkmClass, KTheory, SchubertExpansion};

pub type KClass = GkmClass<KTheory>;
pub type KExpansion = SchubertExpansion<KTheory>;

/// `O^w = [O_{X^w}]` for `w ∈ W^P` (a group element id).
pub fn schubert_class_k(space: &Arc<FlagVariety>, w: usize) -> Result<KClass> {
    KClass::schubert(space, w)
}

pub fn k_multiply(f: &KClass, g: &KClass) -> Result<KClass> {
    f.multiply(g)
}

/// `χ_T(f)` by fixed-point localization.
pub fn euler_char_k(f: &KClass) -> Result<LaurentPoly> {
    f.integrate()
}

pub fn pullback_k(f: &KClass, target: &Arc<FlagVariety>) -> Result<KClass> {
    f.pullback(target)
}

pub fn pushforward_k(f: &KClass, target: &Arc<FlagVariety>) -> Result<KClass> {
    f.pushforward(target)
}

pub fn expand_schubert_k(f: &KClass) -> Result<KExpansion> {
    f.expand()
}

/// Every character `e^λ ↦ 1`.
pub fn specialize_nonequivariant(x: &LaurentPoly) -> Rational {
    x.specialize_characters()
}

/// Checks `f(v) ≡ f(v s_β) mod (1 − e^{vβ})` for every fixed point `v` and
/// positive root `β` of a class on `G/B`.
pub fn is_gkm_compatible(f: &KClass) -> Result<bool> {
    let space = f.space();
    let group = space.group();
    let rs = space.root_system();
    let reflections: Vec<usize> = rs
        .positive_roots
        .iter()
        .map(|b| {
            group
                .reflection(&b.weight)
                .expect("positive root has a reflection")
        })
        .collect();
    for (k, &v) in space.coset_reps().iter().enumerate() {
        for (beta, &sb) in rs.positive_roots.iter().zip(&reflections) {
            let vb = group.act(v, &beta.weight);
            let j = space.coset_position(group.multiply(v, sb));
            if j <= k {
                continue;
            }
            let diff = f.value(k) - f.value(j);
            if diff
                .exact_div(&LaurentPoly::one_minus_character(&vb))
                .is_err()
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::integer;

    fn space(t: &str, dp: &str) -> Arc<FlagVariety> {
        FlagVariety::parse(t, dp).unwrap()
    }

    fn all_schubert(x: &Arc<FlagVariety>) -> Vec<KClass> {
        (0..x.num_points())
            .map(|k| KClass::schubert_at(x, k).unwrap())
            .collect()
    }

    #[test]
    fn p1_classes() {
        let p1 = space("A1", "");
        let g = p1.group();
        let one = schubert_class_k(&p1, g.identity()).unwrap();
        assert_eq!(one, KClass::one(&p1));
        let o1 = schubert_class_k(&p1, g.longest()).unwrap();
        assert!(o1.value(0).is_zero());
        let a = &LaurentPoly::one(1) - o1.value(1);
        assert!(a.as_monomial().is_some(), "a = {a}");
        // (O^1)^2 = (1 − a) O^1
        let sq = k_multiply(&o1, &o1).unwrap();
        assert_eq!(sq, o1.scale(&(&LaurentPoly::one(1) - &a)));
        let e = expand_schubert_k(&sq).unwrap();
        assert_eq!(e.coeff(1), &(&LaurentPoly::one(1) - &a));
        assert_eq!(e.specialize(), vec![integer(0), integer(0)]);
        assert_eq!(
            specialize_nonequivariant(&euler_char_k(&sq).unwrap()),
            integer(0)
        );
    }

    #[test]
    fn euler_characteristic_of_schubert_classes_is_one() {
        for (t, dp) in [
            ("A1", ""),
            ("A2", "2"),
            ("A3", "1,3"),
            ("A2", ""),
            ("B2", ""),
            ("G2", "1"),
            ("C3", "1,2"),
        ] {
            let x = space(t, dp);
            for (k, o) in all_schubert(&x).iter().enumerate() {
                assert!(
                    euler_char_k(o).unwrap().is_one(),
                    "{t} {dp} {}",
                    x.rep_word(k)
                );
            }
        }
    }

    #[test]
    fn support_and_diagonal() {
        for (t, dp) in [("A3", ""), ("B2", ""), ("A3", "2")] {
            let x = space(t, dp);
            let g = x.group();
            for (k, o) in all_schubert(&x).iter().enumerate() {
                for j in 0..x.num_points() {
                    let leq = g.bruhat_leq(x.rep(k), x.rep(j));
                    assert_eq!(!o.value(j).is_zero(), leq, "{t} {k} {j}");
                }
            }
        }
    }

    #[test]
    fn gkm_compatibility_on_complete_flags() {
        for t in ["A2", "A3", "B2", "G2"] {
            let x = space(t, "");
            for o in all_schubert(&x) {
                assert!(is_gkm_compatible(&o).unwrap());
            }
        }
        let x = space("A2", "");
        let mut vals = KClass::one(&x).values().to_vec();
        vals[0] = LaurentPoly::from_int(2, 2);
        assert!(!is_gkm_compatible(&KClass::from_values(x, vals).unwrap()).unwrap());
    }

    #[test]
    fn perfect_pairing() {
        for (t, dp) in [("A1", ""), ("A2", "2"), ("A3", "1,3"), ("A2", "")] {
            let x = space(t, dp);
            let cls = all_schubert(&x);
            let m: Vec<Vec<LaurentPoly>> = cls
                .iter()
                .map(|u| {
                    cls.iter()
                        .map(|v| {
                            LaurentPoly::constant(
                                1,
                                specialize_nonequivariant(&euler_char_k(&(u * v)).unwrap()),
                            )
                        })
                        .collect()
                })
                .collect();
            let d = crate::algebra::determinant(&m).unwrap().constant_term();
            assert!(d == integer(1) || d == integer(-1), "{t} {dp}: det {d}");
        }
    }

    #[test]
    fn chi_of_one_on_p2() {
        assert!(euler_char_k(&KClass::one(&space("A2", "2")))
            .unwrap()
            .is_one());
    }

    #[test]
    fn pullback_of_schubert_is_schubert() {
        let p2 = space("A2", "2");
        let fl = space("A2", "");
        let g = fl.group();
        let s1 = g.from_word(&[0]).unwrap();
        let o = schubert_class_k(&p2, s1).unwrap();
        assert_eq!(
            pullback_k(&o, &fl).unwrap(),
            schubert_class_k(&fl, s1).unwrap()
        );
        assert_eq!(
            pullback_k(&KClass::one(&p2), &fl).unwrap(),
            KClass::one(&fl)
        );
        assert_eq!(pullback_k(&o, &p2).unwrap(), o);
        assert!(pullback_k(&KClass::one(&fl), &p2).is_err());
    }

    #[test]
    fn pushforward_to_dual_plane() {
        let fl = space("A2", "");
        let dual = space("A2", "1");
        let g = fl.group();
        let push = |w: &[usize]| {
            pushforward_k(
                &schubert_class_k(&fl, g.from_word(w).unwrap()).unwrap(),
                &dual,
            )
            .unwrap()
        };
        assert_eq!(push(&[0]), KClass::one(&dual));
        assert_eq!(
            push(&[1, 0]),
            schubert_class_k(&dual, g.from_word(&[1]).unwrap()).unwrap()
        );
        let o = schubert_class_k(&dual, g.from_word(&[1]).unwrap()).unwrap();
        assert_eq!(pushforward_k(&o, &dual).unwrap(), o);
    }

    #[test]
    fn pushforward_agrees_with_fiber_localization() {
        for (t, small, big) in [
            ("A2", "", "1"),
            ("A3", "", "1,3"),
            ("A3", "2", "1,2"),
            ("B2", "", "2"),
            ("C3", "3", "2,3"),
        ] {
            let q = space(t, small);
            let p = space(t, big);
            let cls = all_schubert(&q);
            for f in &cls {
                assert_eq!(
                    f.pushforward(&p).unwrap(),
                    f.pushforward_by_localization(&p).unwrap()
                );
            }
            let prod = &cls[1] * cls.last().unwrap();
            assert_eq!(
                prod.pushforward(&p).unwrap(),
                prod.pushforward_by_localization(&p).unwrap()
            );
        }
    }

    #[test]
    fn projection_formula_and_push_pull() {
        let q = space("A3", "");
        let p = space("A3", "1,3");
        let fs = all_schubert(&q);
        let gs = all_schubert(&p);
        for (i, f) in fs.iter().enumerate().step_by(5) {
            for g in gs.iter().skip(i % 3).step_by(2) {
                let lhs = euler_char_k(&(f * &pullback_k(g, &q).unwrap())).unwrap();
                let rhs = euler_char_k(&(&pushforward_k(f, &p).unwrap() * g)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        for g in &gs {
            assert_eq!(&pushforward_k(&pullback_k(g, &q).unwrap(), &p).unwrap(), g);
        }
    }

    #[test]
    fn expansion_round_trip_and_support() {
        for (t, dp) in [("A2", "2"), ("A3", "1,3")] {
            let x = space(t, dp);
            let g = x.group();
            let cls = all_schubert(&x);
            assert_eq!(
                expand_schubert_k(&KClass::one(&x)).unwrap().support(),
                vec![0]
            );
            for (u, fu) in cls.iter().enumerate() {
                for (v, fv) in cls.iter().enumerate() {
                    let p = fu * fv;
                    let e = expand_schubert_k(&p).unwrap();
                    assert_eq!(e.assemble().unwrap(), p);
                    for w in e.support() {
                        assert!(
                            g.bruhat_leq(x.rep(u), x.rep(w)) && g.bruhat_leq(x.rep(v), x.rep(w))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn non_minimal_representative_is_rejected() {
        let p2 = space("A2", "2");
        let s2 = p2.group().from_word(&[1]).unwrap();
        assert!(matches!(
            schubert_class_k(&p2, s2),
            Err(crate::Error::NotMinimalRepresentative(_))
        ));
    }
}
