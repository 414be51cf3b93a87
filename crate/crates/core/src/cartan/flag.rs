use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::{weyl_group, CartanType, Limits, RootSystem, WeylGroup};
use crate::error::{Error, Result};

/// Simple roots of a parabolic subgroup, as sorted 0-based node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParabolicSubset(Vec<usize>);

impl ParabolicSubset {
    pub fn new(mut indices: Vec<usize>, rank: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= rank) {
            return Err(Error::InvalidParabolic(format!(
                "index {} out of range 1..={rank}",
                bad + 1
            )));
        }
        Ok(ParabolicSubset(indices))
    }

    pub fn empty() -> Self {
        ParabolicSubset(Vec::new())
    }

    pub fn full(rank: usize) -> Self {
        ParabolicSubset((0..rank).collect())
    }

    /// Parses comma-separated 1-based indices; the empty string is `∅`.
    pub fn parse(s: &str, rank: usize) -> Result<Self> {
        let s = s
            .trim()
            .trim_start_matches('{')
            .trim_end_matches('}')
            .trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let mut v = Vec::new();
        for part in s.split(',') {
            let k: usize = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad parabolic index {part:?}")))?;
            if k == 0 {
                return Err(Error::InvalidParabolic("indices are 1-based".into()));
            }
            v.push(k - 1);
        }
        Self::new(v, rank)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &ParabolicSubset) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn intersection(&self, other: &ParabolicSubset) -> ParabolicSubset {
        ParabolicSubset(
            self.0
                .iter()
                .copied()
                .filter(|&i| other.contains(i))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for ParabolicSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The flag variety `G/P` together with its fixed-point data: the minimal
/// coset representatives `W^P`, sorted by `(length, reduced word)`.
#[derive(Debug)]
pub struct FlagVariety {
    group: Arc<WeylGroup>,
    delta_p: ParabolicSubset,
    reps: Vec<usize>,
    position: HashMap<usize, usize>,
    dimension: usize,
}

impl FlagVariety {
    pub fn new(group: Arc<WeylGroup>, delta_p: ParabolicSubset) -> Result<Arc<Self>> {
        if let Some(&i) = delta_p.indices().iter().find(|&&i| i >= group.rank()) {
            return Err(Error::InvalidParabolic(format!(
                "index {} out of range",
                i + 1
            )));
        }
        let reps: Vec<usize> = (0..group.len())
            .filter(|&w| {
                delta_p
                    .indices()
                    .iter()
                    .all(|&i| !group.is_right_descent(w, i))
            })
            .collect();
        let position = reps.iter().enumerate().map(|(k, &w)| (w, k)).collect();
        let rs = group.root_system();
        let dimension = rs.positive_roots.len() - rs.count_positive_roots_in(delta_p.indices());
        Ok(Arc::new(FlagVariety {
            group,
            delta_p,
            reps,
            position,
            dimension,
        }))
    }

    /// Convenience constructor from a type string and 1-based parabolic list,
    /// e.g. `FlagVariety::parse("A3", "1,3")` for `Gr(2,4)`.
    pub fn parse(cartan: &str, delta_p: &str) -> Result<Arc<Self>> {
        let ct: CartanType = cartan.parse()?;
        Self::of_type(ct, delta_p, Limits::default())
    }

    pub fn of_type(ct: CartanType, delta_p: &str, limits: Limits) -> Result<Arc<Self>> {
        let group = weyl_group(ct, limits)?;
        let dp = ParabolicSubset::parse(delta_p, ct.rank)?;
        Self::new(group, dp)
    }

    /// `G/P'` for another parabolic of the same group.
    pub fn sibling(&self, delta: ParabolicSubset) -> Result<Arc<Self>> {
        FlagVariety::new(self.group.clone(), delta)
    }

    pub fn complete_flags(&self) -> Result<Arc<Self>> {
        self.sibling(ParabolicSubset::empty())
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        self.group.root_system()
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn delta_p(&self) -> &ParabolicSubset {
        &self.delta_p
    }

    /// Group ids of the minimal coset representatives, in basis order.
    pub fn coset_reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn num_points(&self) -> usize {
        self.reps.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Position of a group element in the basis order, if it lies in `W^P`.
    pub fn position(&self, w: usize) -> Option<usize> {
        self.position.get(&w).copied()
    }

    /// Position of the coset `w W_P`.
    pub fn coset_position(&self, w: usize) -> usize {
        let rep = self.group.min_coset_rep(w, self.delta_p.indices());
        self.position[&rep]
    }

    pub fn rep(&self, k: usize) -> usize {
        self.reps[k]
    }

    pub fn rep_length(&self, k: usize) -> usize {
        self.group.length(self.reps[k])
    }

    pub fn rep_word(&self, k: usize) -> String {
        self.group.element(self.reps[k]).word_string()
    }

    /// Whether two varieties are quotients of the same group.
    pub fn same_group(&self, other: &FlagVariety) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            || self.group.cartan_type() == other.group.cartan_type()
    }

    pub fn same_space(&self, other: &FlagVariety) -> bool {
        self.same_group(other) && self.delta_p == other.delta_p
    }

    /// Simple roots not in `Δ_P`; the Schubert basis of `H_2(X)`.
    pub fn simple_degrees(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| !self.delta_p.contains(i))
            .collect()
    }

    /// Partition labels are available for type A Grassmannians.
    /// Returns `(k, n)` for `Gr(k, n)`.
    pub fn grassmannian(&self) -> Option<(usize, usize)> {
        let degrees = self.simple_degrees();
        if self.group.cartan_type().family == super::Family::A && degrees.len() == 1 {
            Some((degrees[0] + 1, self.rank() + 1))
        } else {
            None
        }
    }

    /// Basis position of the Schubert class `O^λ` of a Grassmannian
    /// `Gr(k, n)`, via the Grassmannian permutation of `λ`.
    pub fn partition_position(&self, lambda: &[usize]) -> Result<usize> {
        let (k, n) = self.grassmannian().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{} is not a type A Grassmannian; use a reduced word",
                self.label()
            ))
        })?;
        let mut parts: Vec<usize> = lambda.iter().copied().filter(|&p| p > 0).collect();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "partition {lambda:?} is not weakly decreasing"
            )));
        }
        if parts.len() > k || parts.first().is_some_and(|&p| p > n - k) {
            return Err(Error::InvalidArgument(format!(
                "partition {lambda:?} does not fit in a {k}×{} box",
                n - k
            )));
        }
        parts.resize(k, 0);
        // w(i) = λ_{k+1-i} + i on the first k positions, the rest increasing
        let mut perm: Vec<usize> = (1..=k).map(|i| parts[k - i] + i).collect();
        let rest: Vec<usize> = (1..=n).filter(|v| !perm.contains(v)).collect();
        perm.extend(rest);
        let mut recorded = Vec::new();
        while let Some(j) = (0..n - 1).find(|&j| perm[j] > perm[j + 1]) {
            perm.swap(j, j + 1);
            recorded.push(j);
        }
        recorded.reverse();
        let w = self.group.from_word(&recorded)?;
        self.position(w).ok_or_else(|| {
            Error::Internal(format!(
                "Grassmannian permutation of {lambda:?} is not in W^P"
            ))
        })
    }

    /// Partition labelling basis position `pos`, for Grassmannians.
    pub fn partition_label(&self, pos: usize) -> Option<Vec<usize>> {
        let (k, n) = self.grassmannian()?;
        let mut lambda = vec![0usize; k];
        loop {
            if self.partition_position(&lambda).ok() == Some(pos) {
                lambda.retain(|&p| p > 0);
                return Some(lambda);
            }
            // next partition in the k × (n−k) box
            let i = (0..k)
                .rev()
                .find(|&i| lambda[i] < n - k && (i == 0 || lambda[i] < lambda[i - 1]))?;
            lambda[i] += 1;
            for p in lambda.iter_mut().skip(i + 1) {
                *p = 0;
            }
        }
    }

    pub fn label(&self) -> String {
        format!("{}/P{}", self.group.cartan_type(), self.delta_p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coset_rep_counts() {
        let gr24 = FlagVariety::parse("A3", "1,3").unwrap();
        assert_eq!(gr24.num_points(), 6);
        assert_eq!(gr24.dimension(), 4);
        let p2 = FlagVariety::parse("A2", "2").unwrap();
        assert_eq!(p2.num_points(), 3);
        assert_eq!(p2.rep_word(2), "s2.s1");
        let fl3 = FlagVariety::parse("A2", "").unwrap();
        assert_eq!(fl3.num_points(), 6);
        assert_eq!(fl3.dimension(), 3);
        assert_eq!(gr24.grassmannian(), Some((2, 4)));
        assert_eq!(fl3.grassmannian(), None);
    }

    #[test]
    fn reps_are_minimal_and_count_matches_index() {
        for (t, dp) in [
            ("A3", "2"),
            ("B3", "1,3"),
            ("C3", "2,3"),
            ("G2", "1"),
            ("D4", "1,3,4"),
        ] {
            let x = FlagVariety::parse(t, dp).unwrap();
            let g = x.group();
            let wp = g.len() / x.num_points();
            let wp_count = (0..g.len())
                .filter(|&w| g.min_coset_rep(w, x.delta_p().indices()) == g.identity())
                .count();
            assert_eq!(wp_count, wp, "{t} {dp}");
            for &w in x.coset_reps() {
                assert_eq!(g.min_coset_rep(w, x.delta_p().indices()), w);
                assert!(g.bruhat_leq(w, w));
                for &i in x.delta_p().indices() {
                    let image = g.act(w, &g.root_system().simple_roots[i]);
                    assert!(matches!(g.root_system().find_root(&image), Some((_, true))));
                }
            }
            for w in 0..g.len() {
                let m = g.min_coset_rep(w, x.delta_p().indices());
                assert!(g.bruhat_leq(m, w));
                for &i in x.delta_p().indices() {
                    assert_eq!(g.min_coset_rep(g.right_mul(w, i), x.delta_p().indices()), m);
                }
            }
        }
    }

    #[test]
    fn partitions() {
        let p2 = FlagVariety::parse("A2", "2").unwrap();
        assert_eq!(p2.rep_word(p2.partition_position(&[1]).unwrap()), "s1");
        assert_eq!(p2.rep_word(p2.partition_position(&[2]).unwrap()), "s2.s1");
        assert!(p2.partition_position(&[1, 1]).is_err());
        let gr = FlagVariety::parse("A3", "1,3").unwrap();
        for pos in 0..gr.num_points() {
            let lambda = gr.partition_label(pos).unwrap();
            assert_eq!(lambda.iter().sum::<usize>(), gr.rep_length(pos));
            assert_eq!(gr.partition_position(&lambda).unwrap(), pos);
        }
        assert_eq!(
            gr.rep_word(gr.partition_position(&[2, 2]).unwrap()),
            "s2.s1.s3.s2"
        );
        assert!(gr.partition_position(&[1, 2]).is_err());
        assert!(FlagVariety::parse("A2", "")
            .unwrap()
            .partition_position(&[1])
            .is_err());
    }

    #[test]
    fn parabolic_parsing() {
        assert_eq!(ParabolicSubset::parse("3,1", 3).unwrap().indices(), &[0, 2]);
        assert!(ParabolicSubset::parse("4", 3).is_err());
        assert!(ParabolicSubset::parse("0", 3).is_err());
        assert!(ParabolicSubset::parse("x", 3).is_err());
        assert_eq!(ParabolicSubset::parse("", 3).unwrap().to_string(), "{}");
    }
}
