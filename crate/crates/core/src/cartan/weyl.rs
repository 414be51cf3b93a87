use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::{build_root_system, CartanType, RootSystem, Weight};
use crate::error::{Error, Result};

/// Size limits for explicit Weyl group enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_rank: usize,
    pub max_weyl_order: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rank: 8,
            // Covers E6 and every classical group of rank ≤ 5.
            max_weyl_order: 60_000,
        }
    }
}

/// A Weyl group element, canonically identified by its integer action on the
/// weight lattice. The reduced word is the lexicographically smallest one.
#[derive(Debug, Clone)]
pub struct WeylElement {
    matrix: Vec<i64>,
    word: Vec<usize>,
    length: usize,
}

impl WeylElement {
    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    /// Reduced word as 0-based simple-root indices, applied left to right.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Renders the word as `s2.s1`, or `e` for the identity.
    pub fn word_string(&self) -> String {
        format_word(&self.word)
    }
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for WeylElement {}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_string())
    }
}

pub fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter()
            .map(|i| format!("s{}", i + 1))
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// The full Weyl group, enumerated breadth-first and sorted by
/// `(length, reduced word)`. Elements are addressed by their position.
#[derive(Debug)]
pub struct WeylGroup {
    root_system: Arc<RootSystem>,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    longest: usize,
}

/// Returns the (memoized) Weyl group of the given type.
pub fn weyl_group(cartan_type: CartanType, limits: Limits) -> Result<Arc<WeylGroup>> {
    static CACHE: OnceLock<Mutex<HashMap<CartanType, Arc<WeylGroup>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().expect("weyl cache poisoned").get(&cartan_type) {
        return Ok(g.clone());
    }
    let rs = build_root_system(cartan_type.family, cartan_type.rank)?;
    let group = Arc::new(WeylGroup::enumerate(Arc::new(rs), limits)?);
    let mut guard = cache.lock().expect("weyl cache poisoned");
    Ok(guard.entry(cartan_type).or_insert(group).clone())
}

pub fn weyl_order(cartan_type: CartanType) -> u64 {
    let n = cartan_type.rank as u64;
    let fact = |k: u64| (1..=k).product::<u64>();
    use super::Family::*;
    match cartan_type.family {
        A => fact(n + 1),
        B | C => (1u64 << n) * fact(n),
        D => (1u64 << (n - 1)) * fact(n),
        E => match n {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        F => 1152,
        G => 12,
    }
}

impl WeylGroup {
    /// Enumerates the group by breadth-first closure under right
    /// multiplication by simple reflections.
    pub fn enumerate(root_system: Arc<RootSystem>, limits: Limits) -> Result<Self> {
        let ct = root_system.cartan_type;
        if ct.rank > limits.max_rank {
            return Err(Error::TooLarge(format!(
                "rank {} exceeds the configured maximum {}",
                ct.rank, limits.max_rank
            )));
        }
        let order = weyl_order(ct);
        if order > limits.max_weyl_order {
            return Err(Error::TooLarge(format!(
                "Weyl group of {ct} has {order} elements (limit {})",
                limits.max_weyl_order
            )));
        }
        let n = ct.rank;
        let reflections: Vec<Vec<i64>> =
            (0..n).map(|i| reflection_matrix(&root_system, i)).collect();

        let mut identity = vec![0i64; n * n];
        for i in 0..n {
            identity[i * n + i] = 1;
        }
        let mut elements = vec![WeylElement {
            matrix: identity,
            word: vec![],
            length: 0,
        }];
        let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
        index.insert(elements[0].matrix.clone(), 0);
        let mut level = vec![0usize];
        while !level.is_empty() {
            let mut next = Vec::new();
            for &p in &level {
                for (i, refl) in reflections.iter().enumerate() {
                    let image = apply(&elements[p].matrix, &root_system.simple_roots[i], n);
                    let ascent = matches!(root_system.find_root(&image), Some((_, true)));
                    if !ascent {
                        continue;
                    }
                    let m = mat_mul(&elements[p].matrix, refl, n);
                    if index.contains_key(&m) {
                        continue;
                    }
                    let mut word = elements[p].word.clone();
                    word.push(i);
                    let id = elements.len();
                    index.insert(m.clone(), id);
                    elements.push(WeylElement {
                        matrix: m,
                        length: word.len(),
                        word,
                    });
                    next.push(id);
                }
            }
            level = next;
        }
        if elements.len() as u64 != order {
            return Err(Error::Internal(format!(
                "enumerated {} elements of {ct}, expected {order}",
                elements.len()
            )));
        }

        let mut right = vec![vec![0usize; n]; elements.len()];
        let mut left = vec![vec![0usize; n]; elements.len()];
        for (id, e) in elements.iter().enumerate() {
            for (i, refl) in reflections.iter().enumerate() {
                right[id][i] = index[&mat_mul(&e.matrix, refl, n)];
                left[id][i] = index[&mat_mul(refl, &e.matrix, n)];
            }
        }
        let longest = elements.len() - 1;
        Ok(WeylGroup {
            root_system,
            elements,
            index,
            right,
            left,
            longest,
        })
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.root_system
    }

    pub fn cartan_type(&self) -> CartanType {
        self.root_system.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.root_system.rank()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &WeylElement {
        &self.elements[id]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest(&self) -> usize {
        self.longest
    }

    pub fn length(&self, id: usize) -> usize {
        self.elements[id].length
    }

    pub fn id_of(&self, w: &WeylElement) -> Option<usize> {
        self.index.get(&w.matrix).copied()
    }

    /// `w · s_i`.
    pub fn right_mul(&self, id: usize, i: usize) -> usize {
        self.right[id][i]
    }

    /// `s_i · w`.
    pub fn left_mul(&self, id: usize, i: usize) -> usize {
        self.left[id][i]
    }

    pub fn from_word(&self, word: &[usize]) -> Result<usize> {
        let mut id = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::Parse(format!(
                    "simple reflection s{} out of range for {}",
                    i + 1,
                    self.cartan_type()
                )));
            }
            id = self.right_mul(id, i);
        }
        Ok(id)
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.elements[b]
            .word
            .iter()
            .fold(a, |acc, &i| self.right_mul(acc, i))
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.elements[a]
            .word
            .iter()
            .rev()
            .fold(self.identity(), |acc, &i| self.right_mul(acc, i))
    }

    pub fn act(&self, id: usize, weight: &[i64]) -> Weight {
        apply(&self.elements[id].matrix, weight, self.rank())
    }

    /// The reflection `s_β` of a root given in weight coordinates.
    pub fn reflection(&self, beta: &[i64]) -> Option<usize> {
        let rs = &self.root_system;
        let neg: Weight = beta.iter().map(|x| -x).collect();
        (0..self.len()).find_map(|w| {
            (0..self.rank()).find_map(|i| {
                let image = self.act(w, &rs.simple_roots[i]);
                (image == beta || image == neg)
                    .then(|| self.multiply(self.right_mul(w, i), self.inverse(w)))
            })
        })
    }

    /// `ℓ(w s_i) < ℓ(w)`, i.e. `w(α_i)` is a negative root.
    pub fn is_right_descent(&self, id: usize, i: usize) -> bool {
        self.length(self.right_mul(id, i)) < self.length(id)
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self, id: usize) -> usize {
        self.root_system
            .positive_roots
            .iter()
            .filter(|r| {
                let image = self.act(id, &r.weight);
                matches!(self.root_system.find_root(&image), Some((_, false)))
            })
            .count()
    }

    /// Bruhat order test, using the lifting property along right descents.
    pub fn bruhat_leq(&self, u: usize, v: usize) -> bool {
        let (mut u, mut v) = (u, v);
        loop {
            if self.length(u) > self.length(v) {
                return false;
            }
            if self.length(v) == 0 {
                return u == v;
            }
            if self.length(u) == 0 {
                return true;
            }
            let i = *self.elements[v].word.last().expect("non-identity");
            if self.is_right_descent(u, i) {
                u = self.right_mul(u, i);
            }
            v = self.right_mul(v, i);
        }
    }

    /// Unique shortest element of the coset `w W_P`.
    pub fn min_coset_rep(&self, id: usize, subset: &[usize]) -> usize {
        let mut w = id;
        'outer: loop {
            for &i in subset {
                if self.is_right_descent(w, i) {
                    w = self.right_mul(w, i);
                    continue 'outer;
                }
            }
            return w;
        }
    }

    /// Longest element of the parabolic subgroup generated by `subset`.
    pub fn parabolic_longest(&self, subset: &[usize]) -> usize {
        let mut w = self.identity();
        'outer: loop {
            for &i in subset {
                if !self.is_right_descent(w, i) {
                    w = self.right_mul(w, i);
                    continue 'outer;
                }
            }
            return w;
        }
    }
}

fn reflection_matrix(rs: &RootSystem, i: usize) -> Vec<i64> {
    // s_i(λ) = λ − λ_i α_i
    let n = rs.rank();
    let mut m = vec![0i64; n * n];
    for r in 0..n {
        m[r * n + r] = 1;
        m[r * n + i] -= rs.simple_roots[i][r];
    }
    m
}

fn mat_mul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut c = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn apply(m: &[i64], v: &[i64], n: usize) -> Vec<i64> {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Family;

    fn group(f: Family, r: usize) -> Arc<WeylGroup> {
        weyl_group(CartanType::new(f, r).unwrap(), Limits::default()).unwrap()
    }

    /// Subword oracle: u ≤ v iff some subword of a reduced word of v is a
    /// reduced word for u.
    fn subword_leq(g: &WeylGroup, u: usize, v: usize) -> bool {
        let word = g.element(v).word();
        let k = word.len();
        (0u32..(1 << k)).any(|mask| {
            let sub: Vec<usize> = (0..k)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| word[b])
                .collect();
            sub.len() == g.length(u) && g.from_word(&sub).unwrap() == u
        })
    }

    #[test]
    fn group_orders() {
        assert_eq!(group(Family::A, 3).len(), 24);
        assert_eq!(group(Family::C, 2).len(), 8);
        assert_eq!(group(Family::A, 1).len(), 2);
        assert_eq!(group(Family::G, 2).len(), 12);
        assert_eq!(group(Family::F, 4).len(), 1152);
    }

    #[test]
    fn e8_fails_fast() {
        let err =
            weyl_group(CartanType::new(Family::E, 8).unwrap(), Limits::default()).unwrap_err();
        assert!(matches!(err, Error::TooLarge(_)));
    }

    #[test]
    fn lengths_match_inversions_and_longest_is_involution() {
        for (f, r) in [
            (Family::A, 3),
            (Family::B, 3),
            (Family::G, 2),
            (Family::D, 4),
        ] {
            let g = group(f, r);
            for id in 0..g.len() {
                assert_eq!(g.length(id), g.inversion_count(id));
            }
            let w0 = g.longest();
            assert_eq!(g.multiply(w0, w0), g.identity());
            assert_eq!(g.length(w0), g.root_system().positive_roots.len());
        }
    }

    #[test]
    fn bruhat_examples() {
        let g = group(Family::A, 2);
        let s1 = g.from_word(&[0]).unwrap();
        let s2 = g.from_word(&[1]).unwrap();
        let s1s2 = g.from_word(&[0, 1]).unwrap();
        assert!(g.bruhat_leq(s1, s1s2));
        assert!(!g.bruhat_leq(s1, s2));
        for v in 0..g.len() {
            assert!(g.bruhat_leq(g.identity(), v));
        }
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        for (f, r) in [(Family::A, 3), (Family::C, 2), (Family::B, 3)] {
            let g = group(f, r);
            for u in 0..g.len() {
                for v in 0..g.len() {
                    assert_eq!(g.bruhat_leq(u, v), subword_leq(&g, u, v), "{f}{r} {u} {v}");
                }
            }
        }
    }

    #[test]
    fn min_coset_rep_by_exhaustive_scan() {
        let g = group(Family::A, 2);
        let dp = [0usize];
        let s1 = g.from_word(&[0]).unwrap();
        assert_eq!(g.min_coset_rep(g.identity(), &dp), g.identity());
        assert_eq!(g.min_coset_rep(s1, &dp), g.identity());
        let s2s1 = g.from_word(&[1, 0]).unwrap();
        // brute force: shortest of {w, w s1}
        let coset = [s2s1, g.right_mul(s2s1, 0)];
        let shortest = *coset.iter().min_by_key(|&&x| g.length(x)).unwrap();
        assert_eq!(g.min_coset_rep(s2s1, &dp), shortest);
        assert_eq!(shortest, g.from_word(&[1]).unwrap());
    }

    fn all_reduced_words(g: &WeylGroup, id: usize) -> Vec<Vec<usize>> {
        if g.length(id) == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..g.rank() {
            if g.is_right_descent(id, i) {
                for mut w in all_reduced_words(g, g.right_mul(id, i)) {
                    w.push(i);
                    out.push(w);
                }
            }
        }
        out
    }

    #[test]
    fn words_are_lexicographically_minimal() {
        let g = group(Family::A, 3);
        for (id, e) in g.elements().iter().enumerate() {
            let words = all_reduced_words(&g, id);
            assert_eq!(e.word(), words.iter().min().unwrap().as_slice());
            assert_eq!(g.from_word(e.word()).unwrap(), id);
        }
        let w = g.from_word(&[1, 0, 2, 1]).unwrap();
        assert_eq!(g.element(w).word(), &[1, 0, 2, 1]);
    }
}
