//! Root systems, Weyl groups, parabolic subsets and flag varieties.
//!
//! Weights are written in fundamental-weight coordinates, so the simple root
//! `α_i` is column `i` of the Cartan matrix and the pairing `(λ, α_i^∨)` is the
//! `i`-th coordinate of `λ`. Simple roots are numbered as in Bourbaki; node
//! indices are 0-based in the API and 1-based in every text format.

mod flag;
mod weyl;

pub use flag::{FlagVariety, ParabolicSubset};
pub use weyl::{weyl_group, Limits, WeylElement, WeylGroup};

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Integer vector in fundamental-weight coordinates.
pub type Weight = Vec<i64>;

/// Cartan–Killing family letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }

    pub fn all() -> [Family; 7] {
        [
            Family::A,
            Family::B,
            Family::C,
            Family::D,
            Family::E,
            Family::F,
            Family::G,
        ]
    }

    /// Whether `(self, rank)` names a finite irreducible type.
    pub fn is_valid_rank(self, rank: usize) -> bool {
        match self {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Cartan type such as `A3` or `C2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        if !family.is_valid_rank(rank) {
            return Err(Error::InvalidRootSystem {
                family: family.to_string(),
                rank,
                reason: "no finite root system of this type and rank".into(),
            });
        }
        Ok(CartanType { family, rank })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| Error::Parse("empty root system name".into()))?;
        let family = Family::from_letter(letter)
            .ok_or_else(|| Error::Parse(format!("unknown family letter in {s:?}")))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in {s:?}")))?;
        CartanType::new(family, rank)
    }
}

/// A positive root, stored in both simple-root and weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Coefficients on the simple roots (all non-negative).
    pub simple_coords: Vec<i64>,
    /// Fundamental-weight coordinates; entry `i` is `(β, α_i^∨)`.
    pub weight: Weight,
    /// `(β, β)` in the normalization where the shortest root has length 2.
    pub norm: i64,
    pub long: bool,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    /// `cartan[i][j] = (α_i^∨, α_j)`.
    pub cartan: Vec<Vec<i64>>,
    /// Gram matrix `(α_i, α_j)`, shortest simple root of length 2.
    pub form: Vec<Vec<i64>>,
    /// `simple_roots[i]` is column `i` of the Cartan matrix.
    pub simple_roots: Vec<Weight>,
    pub positive_roots: Vec<Root>,
    root_index: HashMap<Weight, (usize, bool)>,
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn family(&self) -> Family {
        self.cartan_type.family
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.cartan[i][j] != 0
    }

    /// Simple roots adjacent to `i` in the Dynkin diagram.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&j| self.adjacent(i, j)).collect()
    }

    /// Locates a root given in weight coordinates: `(index, is_positive)`.
    pub fn find_root(&self, weight: &[i64]) -> Option<(usize, bool)> {
        self.root_index.get(weight).copied()
    }

    /// Number of positive roots that are combinations of the given simple roots.
    pub fn count_positive_roots_in(&self, subset: &[usize]) -> usize {
        self.positive_roots
            .iter()
            .filter(|r| is_supported_on(&r.simple_coords, subset))
            .count()
    }

    pub fn is_simply_laced(&self) -> bool {
        let n0 = self.form[0][0];
        (0..self.rank()).all(|i| self.form[i][i] == n0)
    }
}

pub(crate) fn is_supported_on(simple_coords: &[i64], subset: &[usize]) -> bool {
    simple_coords
        .iter()
        .enumerate()
        .all(|(i, &c)| c == 0 || subset.contains(&i))
}

/// Builds the root system of the given finite type.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    let cartan_type = CartanType::new(family, rank)?;
    let form = gram_matrix(family, rank);
    let n = rank;
    let cartan: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| 2 * form[i][j] / form[i][i]).collect())
        .collect();
    let simple_roots: Vec<Weight> = (0..n)
        .map(|j| (0..n).map(|i| cartan[i][j]).collect())
        .collect();

    // Close the simple roots under simple reflections, in simple-root
    // coordinates: s_i(β) = β − (β, α_i^∨) α_i.
    let pairing = |c: &[i64], i: usize| -> i64 { (0..n).map(|j| c[j] * cartan[i][j]).sum() };
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut found: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone(), ());
        queue.push_back(e);
    }
    while let Some(c) = queue.pop_front() {
        found.push(c.clone());
        for i in 0..n {
            let p = pairing(&c, i);
            if p == 0 {
                continue;
            }
            let mut r = c.clone();
            r[i] -= p;
            if r.iter().all(|&x| x >= 0) && !seen.contains_key(&r) {
                seen.insert(r.clone(), ());
                queue.push_back(r);
            }
        }
    }
    found.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });

    let norm_of = |c: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += c[i] * c[j] * form[i][j];
            }
        }
        s
    };
    let max_norm = found.iter().map(|c| norm_of(c)).max().unwrap_or(2);
    let positive_roots: Vec<Root> = found
        .into_iter()
        .map(|c| {
            let weight = (0..n).map(|i| pairing(&c, i)).collect();
            let norm = norm_of(&c);
            Root {
                simple_coords: c,
                weight,
                norm,
                long: norm == max_norm,
            }
        })
        .collect();

    let mut root_index = HashMap::new();
    for (k, r) in positive_roots.iter().enumerate() {
        root_index.insert(r.weight.clone(), (k, true));
        root_index.insert(r.weight.iter().map(|x| -x).collect(), (k, false));
    }

    Ok(RootSystem {
        cartan_type,
        cartan,
        form,
        simple_roots,
        positive_roots,
        root_index,
    })
}

/// Classical count of positive roots.
pub fn positive_root_count(family: Family, rank: usize) -> usize {
    let n = rank;
    match family {
        Family::A => n * (n + 1) / 2,
        Family::B | Family::C => n * n,
        Family::D => n * (n - 1),
        Family::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        Family::F => 24,
        Family::G => 6,
    }
}

/// Gram matrix of the simple roots in Bourbaki numbering, scaled so the
/// shortest root has squared length 2.
fn gram_matrix(family: Family, n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match family {
        Family::A => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 1..n {
                link(&mut g, i - 1, i, -1);
            }
        }
        Family::B => {
            for i in 0..n - 1 {
                g[i][i] = 4;
            }
            g[n - 1][n - 1] = 2;
            for i in 1..n {
                link(&mut g, i - 1, i, -2);
            }
        }
        Family::C => {
            for i in 0..n - 1 {
                g[i][i] = 2;
            }
            g[n - 1][n - 1] = 4;
            for i in 1..n - 1 {
                link(&mut g, i - 1, i, -1);
            }
            link(&mut g, n - 2, n - 1, -2);
        }
        Family::D => {
            for i in 0..n {
                g[i][i] = 2;
            }
            for i in 1..n - 1 {
                link(&mut g, i - 1, i, -1);
            }
            link(&mut g, n - 3, n - 1, -1);
        }
        Family::E => {
            for i in 0..n {
                g[i][i] = 2;
            }
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 3..n {
                link(&mut g, i - 1, i, -1);
            }
        }
        Family::F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        Family::G => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    g
}

/// Connected component of `start` in the Dynkin subdiagram induced on `nodes`.
pub fn dynkin_component(rs: &RootSystem, nodes: &[usize], start: usize) -> Vec<usize> {
    let mut comp = vec![start];
    let mut stack = vec![start];
    while let Some(i) = stack.pop() {
        for &j in nodes {
            if rs.adjacent(i, j) && !comp.contains(&j) {
                comp.push(j);
                stack.push(j);
            }
        }
    }
    comp.sort_unstable();
    comp
}
