//! Gromov–Witten invariants of degree 0 and of line degrees.
//!
//! For a line degree `d = [X_{s_α}]` the lines of degree `d` are
//! parametrized by `M₀ = G/P′`, where `Δ_{P′}` is `Δ_P ∪ {α}` minus the
//! neighbours of `α`, with universal line `M₁ = G/(P ∩ P′)` and maps
//! `p: M₁ → X`, `q: M₁ → M₀`. Then
//! `⟨F₁, …, F_n⟩_d = χ_{M₀}(q_*p^*F₁ ⋯ q_*p^*F_n)`.

use std::sync::Arc;

use num::{Signed, ToPrimitive};

use crate::algebra::LaurentPoly;
use crate::cartan::{dynkin_component, FlagVariety, ParabolicSubset};
use crate::error::{Error, Result};
use crate::gkm::{Cohomology, GkmClass, Theory};
use crate::hgkm::HClass;
use crate::kgkm::KClass;

/// The moduli data of one line degree.
#[derive(Debug, Clone)]
pub struct LineDegreeData {
    pub space: Arc<FlagVariety>,
    pub alpha: usize,
    pub delta_p_prime: ParabolicSubset,
    pub m0: Arc<FlagVariety>,
    pub m1: Arc<FlagVariety>,
}

fn check_degree(space: &FlagVariety, alpha: usize) -> Result<()> {
    if alpha >= space.rank() {
        return Err(Error::InvalidArgument(format!(
            "simple root index {} out of range 1..={}",
            alpha + 1,
            space.rank()
        )));
    }
    if space.delta_p().contains(alpha) {
        return Err(Error::InvalidArgument(format!(
            "α{} lies in Δ_P = {} and is not a degree of X",
            alpha + 1,
            space.delta_p()
        )));
    }
    Ok(())
}

/// Whether `α` is long in its connected component of `Δ_P ∪ {α}`.
pub fn is_line_degree(space: &FlagVariety, alpha: usize) -> Result<bool> {
    check_degree(space, alpha)?;
    let rs = space.root_system();
    let mut nodes = space.delta_p().indices().to_vec();
    nodes.push(alpha);
    let comp = dynkin_component(rs, &nodes, alpha);
    let longest = comp.iter().map(|&i| rs.form[i][i]).max().unwrap();
    Ok(rs.form[alpha][alpha] == longest)
}

/// Line degrees among the simple degrees of `X`.
pub fn line_degrees(space: &FlagVariety) -> Vec<usize> {
    space
        .simple_degrees()
        .into_iter()
        .filter(|&a| is_line_degree(space, a).unwrap_or(false))
        .collect()
}

pub fn line_parabolic(space: &Arc<FlagVariety>, alpha: usize) -> Result<LineDegreeData> {
    if !is_line_degree(space, alpha)? {
        return Err(Error::NotLineDegree(format!(
            "α{} is short in its component of Δ_P ∪ {{α}} for {}; the line-degree method does not apply",
            alpha + 1,
            space.label()
        )));
    }
    let rs = space.root_system();
    let neighbors = rs.neighbors(alpha);
    let mut prime: Vec<usize> = space
        .delta_p()
        .indices()
        .iter()
        .copied()
        .filter(|i| !neighbors.contains(i))
        .collect();
    prime.push(alpha);
    let delta_p_prime = ParabolicSubset::new(prime, space.rank())?;
    let m0 = space.sibling(delta_p_prime.clone())?;
    let m1 = space.sibling(space.delta_p().intersection(&delta_p_prime))?;
    Ok(LineDegreeData {
        space: space.clone(),
        alpha,
        delta_p_prime,
        m0,
        m1,
    })
}

impl LineDegreeData {
    /// `q_* p^* f`.
    pub fn transfer<T: Theory>(&self, f: &GkmClass<T>) -> Result<GkmClass<T>> {
        if !f.space().same_space(&self.space) {
            return Err(Error::SpaceMismatch);
        }
        f.pullback(&self.m1)?.pushforward(&self.m0)
    }

    /// Position in the basis of `M₀` of the transfer of the K-theoretic
    /// Schubert class at basis position `k` of `X`.
    pub fn transfer_schubert_k(&self, k: usize) -> usize {
        self.m0.coset_position(self.space.rep(k))
    }
}

pub fn qp_transfer<T: Theory>(line: &LineDegreeData, f: &GkmClass<T>) -> Result<GkmClass<T>> {
    line.transfer(f)
}

/// `χ_{M₀}(∏ q_*p^*F_i)`; the empty product gives `χ(O_{M₀}) = 1`.
pub fn kgw_line(line: &LineDegreeData, insertions: &[KClass]) -> Result<LaurentPoly> {
    let mut acc = KClass::one(&line.m0);
    for f in insertions {
        acc = &acc * &line.transfer(f)?;
    }
    acc.integrate()
}

/// Degree-0 invariant `χ_X(∏ F_i)`: degree-0 stable maps are constant.
pub fn kgw_zero(space: &Arc<FlagVariety>, insertions: &[KClass]) -> Result<LaurentPoly> {
    let mut acc = KClass::one(space);
    for f in insertions {
        acc = acc.multiply(f)?;
    }
    acc.integrate()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PetersonCheck {
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
    pub equal: bool,
}

/// Compares the invariant on `X` with the invariant on `G/B` in the lifted
/// degree `[X_{s_α}]`, with pulled-back insertions.
pub fn peterson_check(line: &LineDegreeData, insertions: &[KClass]) -> Result<PetersonCheck> {
    let lhs = kgw_line(line, insertions)?;
    let gb = line.space.complete_flags()?;
    let lifted = line_parabolic(&gb, line.alpha)?;
    let pulled = insertions
        .iter()
        .map(|f| f.pullback(&gb))
        .collect::<Result<Vec<_>>>()?;
    let rhs = kgw_line(&lifted, &pulled)?;
    let equal = lhs == rhs;
    Ok(PetersonCheck { lhs, rhs, equal })
}

/// Number of lines of degree `[X_{s_α}]` meeting general translates of the
/// Schubert varieties `X^{w_i}`.
pub fn count_lines(line: &LineDegreeData, conditions: &[usize]) -> Result<u64> {
    let group = line.space.group();
    let codim: usize = conditions.iter().map(|&w| group.length(w)).sum();
    let expected = line.m0.dimension() + conditions.len();
    if codim != expected {
        return Err(Error::NotEnumerative(format!(
            "codimensions sum to {codim}, but dim M₀ + n = {expected}"
        )));
    }
    let mut acc = HClass::one(&line.m0);
    for &w in conditions {
        let c = GkmClass::<Cohomology>::schubert(&line.space, w)?;
        acc = &acc * &line.transfer(&c)?;
    }
    let value = acc.integrate()?.constant_term();
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Internal(format!(
            "line count {value} is not a non-negative integer"
        )));
    }
    value
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::Internal("line count overflow".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanType, Family, Limits};

    fn space(t: &str, dp: &str) -> Arc<FlagVariety> {
        FlagVariety::parse(t, dp).unwrap()
    }

    fn k(x: &Arc<FlagVariety>, pos: usize) -> KClass {
        KClass::schubert_at(x, pos).unwrap()
    }

    #[test]
    fn classification() {
        assert!(is_line_degree(&space("B3", ""), 2).unwrap());
        assert!(!is_line_degree(&space("C3", "2,3"), 0).unwrap());
        assert!(!is_line_degree(&space("C2", "2"), 0).unwrap());
        assert!(is_line_degree(&space("A3", "1,3"), 1).unwrap());
        // a short root of Φ, long in its simply-laced component
        assert!(is_line_degree(&space("B3", "1"), 2).unwrap());
        assert!(!is_line_degree(&space("B3", "2"), 2).unwrap());
        assert!(is_line_degree(&space("C3", "1"), 1).unwrap());
        assert!(is_line_degree(&space("A3", "1,3"), 0).is_err());
        assert!(matches!(
            line_parabolic(&space("C2", "2"), 0),
            Err(Error::NotLineDegree(_))
        ));
    }

    #[test]
    fn moduli_parabolics() {
        let l = line_parabolic(&space("A2", "2"), 0).unwrap();
        assert_eq!(l.delta_p_prime.to_string(), "{1}");
        assert!(l.m1.delta_p().is_empty());
        let l = line_parabolic(&space("A3", "1,3"), 1).unwrap();
        assert_eq!(l.delta_p_prime.to_string(), "{2}");
        let l = line_parabolic(&space("A1", ""), 0).unwrap();
        assert_eq!(l.m0.num_points(), 1);
    }

    #[test]
    fn moduli_dimensions_over_all_types() {
        for family in Family::all() {
            for rank in 1..=5 {
                let Ok(ct) = CartanType::new(family, rank) else {
                    continue;
                };
                let gb = FlagVariety::of_type(ct, "", Limits::default()).unwrap();
                for mask in 0u32..(1 << rank) {
                    let dp: Vec<usize> = (0..rank).filter(|i| mask >> i & 1 == 1).collect();
                    let x = gb.sibling(ParabolicSubset::new(dp, rank).unwrap()).unwrap();
                    for a in x.simple_degrees() {
                        if let Ok(l) = line_parabolic(&x, a) {
                            assert_eq!(
                                l.m1.dimension(),
                                l.m0.dimension() + 1,
                                "{ct} {} α{}",
                                x.delta_p(),
                                a + 1
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn transfers_on_p2() {
        let p2 = space("A2", "2");
        let l = line_parabolic(&p2, 0).unwrap();
        assert_eq!(l.transfer(&KClass::one(&p2)).unwrap(), KClass::one(&l.m0));
        assert_eq!(l.transfer(&k(&p2, 1)).unwrap(), KClass::one(&l.m0));
        let g = p2.group();
        let s2 = KClass::schubert(&l.m0, g.from_word(&[1]).unwrap()).unwrap();
        assert_eq!(l.transfer(&k(&p2, 2)).unwrap(), s2);
        for pos in 0..3 {
            let t = l.transfer(&k(&p2, pos)).unwrap();
            assert_eq!(t, k(&l.m0, l.transfer_schubert_k(pos)));
        }
    }

    #[test]
    fn invariants_on_small_spaces() {
        let p2 = space("A2", "2");
        let l = line_parabolic(&p2, 0).unwrap();
        let one = KClass::one(&p2);
        let ins = [
            one.clone(),
            one.clone(),
            one.clone(),
            k(&p2, 1),
            k(&p2, 1),
            k(&p2, 2),
        ];
        assert!(kgw_line(&l, &ins).unwrap().is_one());
        assert!(kgw_line(&l, &[]).unwrap().is_one());
        let p1 = space("A1", "");
        let l1 = line_parabolic(&p1, 0).unwrap();
        assert!(kgw_line(&l1, &[k(&p1, 1), k(&p1, 1)]).unwrap().is_one());
        assert!(
            kgw_zero(&p2, &[k(&p2, 1), k(&p2, 1), k(&p2, 2)])
                .unwrap()
                .specialize_characters()
                == crate::algebra::integer(0)
        );
        assert!(kgw_zero(&p2, &[one.clone(), one.clone(), one.clone()])
            .unwrap()
            .is_one());
        assert!(kgw_zero(&p2, &[k(&p2, 1), k(&p2, 1), one])
            .unwrap()
            .is_one());
    }

    #[test]
    fn symmetric_in_insertions() {
        let gr = space("A3", "1,3");
        let l = line_parabolic(&gr, 1).unwrap();
        let (a, b, c) = (k(&gr, 1), k(&gr, 2), k(&gr, 4));
        let x = kgw_line(&l, &[a.clone(), b.clone(), c.clone()]).unwrap();
        assert_eq!(x, kgw_line(&l, &[c.clone(), a.clone(), b.clone()]).unwrap());
        assert_eq!(x, kgw_line(&l, &[b, c, a]).unwrap());
    }

    #[test]
    fn peterson_examples() {
        let p2 = space("A2", "2");
        let l = line_parabolic(&p2, 0).unwrap();
        assert!(
            peterson_check(&l, &[k(&p2, 1), k(&p2, 1), k(&p2, 1)])
                .unwrap()
                .equal
        );
        let ins: Vec<KClass> = [1, 2, 2, 0, 1].iter().map(|&i| k(&p2, i)).collect();
        assert!(peterson_check(&l, &ins).unwrap().equal);
        let gr = space("A3", "1,3");
        let l = line_parabolic(&gr, 1).unwrap();
        assert!(
            peterson_check(&l, &[k(&gr, 5), k(&gr, 2), KClass::one(&gr)])
                .unwrap()
                .equal
        );
    }

    #[test]
    fn line_counts() {
        let p3 = space("A3", "2,3");
        let l = line_parabolic(&p3, 0).unwrap();
        let g = p3.group();
        let line = g.from_word(&[1, 0]).unwrap();
        assert_eq!(count_lines(&l, &[line; 4]).unwrap(), 2);
        assert!(matches!(
            count_lines(&l, &[line; 3]),
            Err(Error::NotEnumerative(_))
        ));
        let p2 = space("A2", "2");
        let l = line_parabolic(&p2, 0).unwrap();
        let g = p2.group();
        let pt = g.from_word(&[1, 0]).unwrap();
        let ln = g.from_word(&[0]).unwrap();
        assert_eq!(count_lines(&l, &[pt, pt, ln]).unwrap(), 1);
        let p1 = space("A1", "");
        let l = line_parabolic(&p1, 0).unwrap();
        assert_eq!(count_lines(&l, &[p1.group().longest()]).unwrap(), 1);
    }
}
