//! Fixed-point (GKM) model shared by equivariant K-theory and cohomology.
//!
//! A class on `X = G/P` is the tuple of its restrictions to the torus-fixed
//! points `wP`, `w ∈ W^P`, each an element of `K_T(pt)` (Laurent polynomials
//! in the characters `y_i = e^{ω_i}`) or `H_T(pt)` (polynomials in the
//! weights `x_i = ω_i`). The tangent space at `wP` has weights `−wβ` for
//! `β ∈ Φ^+ ∖ Φ_P^+`.
//!
//! Schubert classes of the opposite Schubert varieties `X^w` are built on
//! `G/B` from the point class at `w₀` by the push-pull operators of the
//! `P^1`-fibrations `G/B → G/P_i`, which send the class of `X^w` to that of
//! `X^{w s_i}` when `w s_i < w`. Classes on `G/P` are the `G/B` classes
//! constant on `W_P`-cosets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{LaurentPoly, Rational};
use crate::cartan::{CartanType, FlagVariety, ParabolicSubset, WeylGroup};
use crate::error::{Error, Result};

/// Convention version of the Schubert restriction tables. Bump whenever the
/// operator or sign conventions change, so persisted tables are invalidated.
pub const CONVENTION_VERSION: u32 = 1;

/// The coefficient theory of a GKM model.
pub trait Theory: Copy + Send + Sync + fmt::Debug + 'static {
    const NAME: &'static str;

    /// Euler class of a tangent line of weight `λ`.
    fn euler_factor(weight: &[i64]) -> LaurentPoly;

    /// `euler_factor(−γ) / euler_factor(γ)`, a unit.
    fn flip_unit(gamma: &[i64]) -> LaurentPoly;

    /// Push-pull along the `P^1`-fiber through `v` and `v s_i`, evaluated at
    /// `v`; `f_v`, `f_vs` are the restrictions at the two fixed points and
    /// `v_alpha = v(α_i)`.
    fn push_pull(f_v: &LaurentPoly, f_vs: &LaurentPoly, v_alpha: &[i64]) -> Result<LaurentPoly>;

    /// Value after forgetting the torus action.
    fn specialize(x: &LaurentPoly) -> Rational;

    /// Whether the pushforward of the Schubert class of `w ∈ W^Q` along
    /// `G/Q → G/P` is the Schubert class of its coset representative
    /// (rather than zero), given the length drop and the fiber dimension.
    fn pushforward_survives(length_drop: usize, fiber_dim: usize) -> bool;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KTheory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cohomology;

impl Theory for KTheory {
    const NAME: &'static str = "K";

    fn euler_factor(weight: &[i64]) -> LaurentPoly {
        let neg: Vec<i64> = weight.iter().map(|x| -x).collect();
        LaurentPoly::one_minus_character(&neg)
    }

    fn flip_unit(gamma: &[i64]) -> LaurentPoly {
        // 1 − e^{γ} = −e^{γ} (1 − e^{−γ})
        -LaurentPoly::character(gamma)
    }

    fn push_pull(f_v: &LaurentPoly, f_vs: &LaurentPoly, v_alpha: &[i64]) -> Result<LaurentPoly> {
        // f(v)/(1 − e^{vα}) + f(vs)/(1 − e^{−vα})
        let e = LaurentPoly::character(v_alpha);
        let num = f_v - &(&e * f_vs);
        num.exact_div(&LaurentPoly::one_minus_character(v_alpha))
    }

    fn specialize(x: &LaurentPoly) -> Rational {
        x.specialize_characters()
    }

    fn pushforward_survives(_length_drop: usize, _fiber_dim: usize) -> bool {
        true
    }
}

impl Theory for Cohomology {
    const NAME: &'static str = "H";

    fn euler_factor(weight: &[i64]) -> LaurentPoly {
        LaurentPoly::linear_form(weight)
    }

    fn flip_unit(gamma: &[i64]) -> LaurentPoly {
        LaurentPoly::from_int(gamma.len(), -1)
    }

    fn push_pull(f_v: &LaurentPoly, f_vs: &LaurentPoly, v_alpha: &[i64]) -> Result<LaurentPoly> {
        // f(v)/(−vα) + f(vs)/(vα)
        (f_vs - f_v).exact_div(&LaurentPoly::linear_form(v_alpha))
    }

    fn specialize(x: &LaurentPoly) -> Rational {
        x.constant_term()
    }

    fn pushforward_survives(length_drop: usize, fiber_dim: usize) -> bool {
        length_drop == fiber_dim
    }
}

/// Restriction table: `table[k][j]` is the restriction of the Schubert class
/// of basis element `k` to fixed point `j`.
pub type Table = Vec<Vec<LaurentPoly>>;

type TableKey = (&'static str, CartanType, ParabolicSubset);
type TableCell = Arc<OnceLock<Result<Arc<Table>>>>;

fn table_cell(key: TableKey) -> TableCell {
    static TABLES: OnceLock<Mutex<HashMap<TableKey, TableCell>>> = OnceLock::new();
    let map = TABLES.get_or_init(Default::default);
    map.lock()
        .expect("schubert table registry poisoned")
        .entry(key)
        .or_default()
        .clone()
}

/// Memoized Schubert restriction table of a space.
pub fn schubert_table<T: Theory>(space: &FlagVariety) -> Result<Arc<Table>> {
    let key = (
        T::NAME,
        space.group().cartan_type(),
        space.delta_p().clone(),
    );
    let cell = table_cell(key);
    cell.get_or_init(|| compute_table::<T>(space).map(Arc::new))
        .clone()
}

/// Seeds the memo with a precomputed table (e.g. loaded from disk). Returns
/// `false` when a table was already present.
pub fn install_table<T: Theory>(space: &FlagVariety, table: Table) -> Result<bool> {
    let n = space.num_points();
    if table.len() != n || table.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(format!(
            "table shape does not match {} ({n} points)",
            space.label()
        )));
    }
    let key = (
        T::NAME,
        space.group().cartan_type(),
        space.delta_p().clone(),
    );
    let cell = table_cell(key);
    Ok(cell.set(Ok(Arc::new(table))).is_ok())
}

fn compute_table<T: Theory>(space: &FlagVariety) -> Result<Table> {
    let group = space.group();
    let full = if space.delta_p().is_empty() {
        None
    } else {
        let gb = FlagVariety::new(group.clone(), ParabolicSubset::empty())?;
        Some(schubert_table::<T>(&gb)?)
    };
    match full {
        None => complete_flag_table::<T>(group),
        Some(gb) => Ok(space
            .coset_reps()
            .iter()
            .map(|&w| {
                space
                    .coset_reps()
                    .iter()
                    .map(|&v| gb[w][v].clone())
                    .collect()
            })
            .collect()),
    }
}

fn complete_flag_table<T: Theory>(group: &WeylGroup) -> Result<Table> {
    let rs = group.root_system();
    let n = group.len();
    let rank = group.rank();
    let w0 = group.longest();
    let mut table: Vec<Option<Vec<LaurentPoly>>> = vec![None; n];

    let mut point = vec![LaurentPoly::zero(rank); n];
    let mut top = LaurentPoly::one(rank);
    for beta in &rs.positive_roots {
        let lambda: Vec<i64> = group.act(w0, &beta.weight).iter().map(|x| -x).collect();
        top = &top * &T::euler_factor(&lambda);
    }
    point[w0] = top;
    table[w0] = Some(point);

    // Elements are sorted by length, so walking backwards visits every
    // `u s_i > u` before `u`.
    for u in (0..n).rev() {
        if table[u].is_some() {
            continue;
        }
        let i = (0..rank)
            .find(|&i| !group.is_right_descent(u, i))
            .expect("non-longest element has an ascent");
        let w = group.right_mul(u, i);
        let f = table[w].as_ref().expect("longer class computed first");
        let mut values = Vec::with_capacity(n);
        for v in 0..n {
            let vs = group.right_mul(v, i);
            let v_alpha = group.act(v, &rs.simple_roots[i]);
            values.push(T::push_pull(&f[v], &f[vs], &v_alpha)?);
        }
        table[u] = Some(values);
    }
    Ok(table.into_iter().map(|r| r.unwrap()).collect())
}

/// An equivariant class on a flag variety, given by its fixed-point
/// restrictions in basis order of `W^P`.
#[derive(Clone)]
pub struct GkmClass<T: Theory> {
    space: Arc<FlagVariety>,
    values: Vec<LaurentPoly>,
    _theory: PhantomData<T>,
}

impl<T: Theory> GkmClass<T> {
    pub fn from_values(space: Arc<FlagVariety>, values: Vec<LaurentPoly>) -> Result<Self> {
        if values.len() != space.num_points() {
            return Err(Error::InvalidArgument(format!(
                "{} restrictions given for {} fixed points",
                values.len(),
                space.num_points()
            )));
        }
        Ok(GkmClass {
            space,
            values,
            _theory: PhantomData,
        })
    }

    pub fn constant(space: &Arc<FlagVariety>, c: LaurentPoly) -> Self {
        GkmClass {
            values: vec![c; space.num_points()],
            space: space.clone(),
            _theory: PhantomData,
        }
    }

    pub fn one(space: &Arc<FlagVariety>) -> Self {
        Self::constant(space, LaurentPoly::one(space.rank()))
    }

    pub fn zero(space: &Arc<FlagVariety>) -> Self {
        Self::constant(space, LaurentPoly::zero(space.rank()))
    }

    /// Schubert class of the basis element at position `k` of `W^P`.
    pub fn schubert_at(space: &Arc<FlagVariety>, k: usize) -> Result<Self> {
        let table = schubert_table::<T>(space)?;
        Self::from_values(space.clone(), table[k].clone())
    }

    /// Schubert class of a group element, which must lie in `W^P`.
    pub fn schubert(space: &Arc<FlagVariety>, w: usize) -> Result<Self> {
        let k = space.position(w).ok_or_else(|| {
            Error::NotMinimalRepresentative(format!(
                "{} (for Δ_P = {})",
                space.group().element(w),
                space.delta_p()
            ))
        })?;
        Self::schubert_at(space, k)
    }

    pub fn space(&self) -> &Arc<FlagVariety> {
        &self.space
    }

    pub fn values(&self) -> &[LaurentPoly] {
        &self.values
    }

    pub fn value(&self, k: usize) -> &LaurentPoly {
        &self.values[k]
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space.same_space(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly,
    ) -> Result<Self> {
        self.check_same(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(a, b))
            .collect();
        Self::from_values(self.space.clone(), values)
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        GkmClass {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            _theory: PhantomData,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.space);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Pushforward to a point by fixed-point localization.
    pub fn integrate(&self) -> Result<LaurentPoly> {
        let values: Vec<&LaurentPoly> = self.values.iter().collect();
        space_localizer::<T>(&self.space)?.apply(&values)
    }

    /// Pullback along `G/Q → G/P`, where `self` lives on `G/P` and `target`
    /// is `G/Q` with `Δ_Q ⊆ Δ_P`.
    pub fn pullback(&self, target: &Arc<FlagVariety>) -> Result<Self> {
        check_nested(target, &self.space)?;
        let values = target
            .coset_reps()
            .iter()
            .map(|&v| self.values[self.space.coset_position(v)].clone())
            .collect();
        Self::from_values(target.clone(), values)
    }

    /// Pushforward along `G/Q → G/P`, where `self` lives on `G/Q` and
    /// `target` is `G/P` with `Δ_Q ⊆ Δ_P`. Computed on the Schubert basis.
    pub fn pushforward(&self, target: &Arc<FlagVariety>) -> Result<Self> {
        check_nested(&self.space, target)?;
        let exp = self.expand()?;
        let fiber_dim = self.space.dimension() - target.dimension();
        let group = self.space.group();
        let mut coeffs = vec![LaurentPoly::zero(self.space.rank()); target.num_points()];
        for (k, c) in exp.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = self.space.rep(k);
            let j = target.coset_position(w);
            let drop = group.length(w) - target.rep_length(j);
            if T::pushforward_survives(drop, fiber_dim) {
                coeffs[j] += c;
            }
        }
        SchubertExpansion::<T>::new(target.clone(), coeffs)?.assemble()
    }

    /// Pushforward computed by summing over the fibers with localization.
    /// Independent of the Schubert basis; used to cross-check
    /// [`GkmClass::pushforward`].
    pub fn pushforward_by_localization(&self, target: &Arc<FlagVariety>) -> Result<Self> {
        check_nested(&self.space, target)?;
        let rs = self.space.root_system();
        let roots: Vec<usize> = (0..rs.positive_roots.len())
            .filter(|&k| {
                let c = &rs.positive_roots[k].simple_coords;
                crate::cartan::is_supported_on(c, target.delta_p().indices())
                    && !crate::cartan::is_supported_on(c, self.space.delta_p().indices())
            })
            .collect();
        let mut fibers: Vec<Vec<(usize, &LaurentPoly)>> = vec![Vec::new(); target.num_points()];
        for (k, &v) in self.space.coset_reps().iter().enumerate() {
            fibers[target.coset_position(v)].push((v, &self.values[k]));
        }
        let values = fibers
            .iter()
            .map(|pts| localize::<T>(self.space.group(), &roots, pts))
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(target.clone(), values)
    }

    /// Expansion in the Schubert basis by triangular solve in increasing
    /// length.
    pub fn expand(&self) -> Result<SchubertExpansion<T>> {
        let table = schubert_table::<T>(&self.space)?;
        let n = self.space.num_points();
        let mut residual = self.values.clone();
        let mut coeffs = vec![LaurentPoly::zero(self.space.rank()); n];
        for k in 0..n {
            if residual[k].is_zero() {
                continue;
            }
            let c = residual[k].exact_div(&table[k][k])?;
            for j in 0..n {
                if !table[k][j].is_zero() {
                    residual[j] -= &(&c * &table[k][j]);
                }
            }
            coeffs[k] = c;
        }
        if let Some(j) = residual.iter().position(|r| !r.is_zero()) {
            return Err(Error::Internal(format!(
                "Schubert expansion left a residual at point {}",
                self.space.rep_word(j)
            )));
        }
        SchubertExpansion::new(self.space.clone(), coeffs)
    }
}

impl<T: Theory> PartialEq for GkmClass<T> {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_space(&other.space) && self.values == other.values
    }
}

impl<T: Theory> fmt::Debug for GkmClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (k, v) in self.values.iter().enumerate() {
            m.entry(&self.space.rep_word(k), &v.to_string());
        }
        m.finish()
    }
}

impl<T: Theory> Mul for &GkmClass<T> {
    type Output = GkmClass<T>;
    fn mul(self, rhs: &GkmClass<T>) -> GkmClass<T> {
        self.multiply(rhs).expect("classes on different spaces")
    }
}

impl<T: Theory> Add for &GkmClass<T> {
    type Output = GkmClass<T>;
    fn add(self, rhs: &GkmClass<T>) -> GkmClass<T> {
        self.try_add(rhs).expect("classes on different spaces")
    }
}

impl<T: Theory> Sub for &GkmClass<T> {
    type Output = GkmClass<T>;
    fn sub(self, rhs: &GkmClass<T>) -> GkmClass<T> {
        self.try_sub(rhs).expect("classes on different spaces")
    }
}

/// `Σ_w c_w [X^w]` over `W^P`, coefficients in basis order.
#[derive(Clone)]
pub struct SchubertExpansion<T: Theory> {
    space: Arc<FlagVariety>,
    coeffs: Vec<LaurentPoly>,
    _theory: PhantomData<T>,
}

impl<T: Theory> SchubertExpansion<T> {
    pub fn new(space: Arc<FlagVariety>, coeffs: Vec<LaurentPoly>) -> Result<Self> {
        if coeffs.len() != space.num_points() {
            return Err(Error::InvalidArgument(
                "coefficient count does not match W^P".into(),
            ));
        }
        Ok(SchubertExpansion {
            space,
            coeffs,
            _theory: PhantomData,
        })
    }

    /// The basis element at position `k`.
    pub fn basis(space: &Arc<FlagVariety>, k: usize) -> Self {
        let mut coeffs = vec![LaurentPoly::zero(space.rank()); space.num_points()];
        coeffs[k] = LaurentPoly::one(space.rank());
        SchubertExpansion {
            space: space.clone(),
            coeffs,
            _theory: PhantomData,
        }
    }

    pub fn space(&self) -> &Arc<FlagVariety> {
        &self.space
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &LaurentPoly {
        &self.coeffs[k]
    }

    /// Positions with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&k| !self.coeffs[k].is_zero())
            .collect()
    }

    pub fn assemble(&self) -> Result<GkmClass<T>> {
        let table = schubert_table::<T>(&self.space)?;
        let n = self.space.num_points();
        let mut values = vec![LaurentPoly::zero(self.space.rank()); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                if !table[k][j].is_zero() {
                    values[j] += &(c * &table[k][j]);
                }
            }
        }
        GkmClass::from_values(self.space.clone(), values)
    }

    /// Coefficients after forgetting the torus action.
    pub fn specialize(&self) -> Vec<Rational> {
        self.coeffs.iter().map(T::specialize).collect()
    }
}

impl<T: Theory> PartialEq for SchubertExpansion<T> {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_space(&other.space) && self.coeffs == other.coeffs
    }
}

impl<T: Theory> fmt::Debug for SchubertExpansion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for k in self.support() {
            m.entry(&self.space.rep_word(k), &self.coeffs[k].to_string());
        }
        m.finish()
    }
}

fn check_nested(small: &FlagVariety, big: &FlagVariety) -> Result<()> {
    if !small.same_group(big) {
        return Err(Error::NotNested("different groups".into()));
    }
    if !small.delta_p().is_subset_of(big.delta_p()) {
        return Err(Error::NotNested(format!(
            "Δ = {} is not contained in {}",
            small.delta_p(),
            big.delta_p()
        )));
    }
    Ok(())
}

/// Fixed-point localization `Σ_v f(v) / Π_{β ∈ roots} e(−vβ)` over a fixed
/// set of points, reduced to a polynomial by exact division.
///
/// Every tangent weight `−vβ` is `±γ` for a positive root `γ`; the sum is
/// brought to the common denominator `Π_γ e(γ)` over the roots that occur,
/// then divided out factor by factor.
pub(crate) struct Localizer {
    /// `f(v)` is multiplied by `cofactors[v]` before summing.
    cofactors: Vec<LaurentPoly>,
    factors: Vec<LaurentPoly>,
    rank: usize,
}

impl Localizer {
    pub(crate) fn new<T: Theory>(
        group: &WeylGroup,
        roots: &[usize],
        points: &[usize],
    ) -> Result<Self> {
        let rs = group.root_system();
        let rank = group.rank();
        let mut per_point: Vec<(LaurentPoly, BTreeSet<usize>)> = Vec::with_capacity(points.len());
        let mut all: BTreeSet<usize> = BTreeSet::new();
        for &v in points {
            let mut unit = LaurentPoly::one(rank);
            let mut used = BTreeSet::new();
            for &b in roots {
                let lambda: Vec<i64> = group
                    .act(v, &rs.positive_roots[b].weight)
                    .iter()
                    .map(|x| -x)
                    .collect();
                let (g, positive) = rs
                    .find_root(&lambda)
                    .ok_or_else(|| Error::Internal("tangent weight is not a root".into()))?;
                if !positive {
                    unit = &unit * &T::flip_unit(&rs.positive_roots[g].weight);
                }
                used.insert(g);
            }
            all.extend(used.iter().copied());
            per_point.push((LaurentPoly::one(rank).exact_div(&unit)?, used));
        }
        let factor: HashMap<usize, LaurentPoly> = all
            .iter()
            .map(|&g| (g, T::euler_factor(&rs.positive_roots[g].weight)))
            .collect();
        let cofactors = per_point
            .into_iter()
            .map(|(inv, used)| all.difference(&used).fold(inv, |acc, g| &acc * &factor[g]))
            .collect();
        Ok(Localizer {
            cofactors,
            factors: all.iter().map(|g| factor[g].clone()).collect(),
            rank,
        })
    }

    pub(crate) fn apply(&self, values: &[&LaurentPoly]) -> Result<LaurentPoly> {
        let mut numerator = LaurentPoly::zero(self.rank);
        for (value, cof) in values.iter().zip(&self.cofactors) {
            if !value.is_zero() {
                numerator += &(*value * cof);
            }
        }
        for f in &self.factors {
            numerator = numerator.exact_div(f)?;
        }
        Ok(numerator)
    }
}

type LocalizerKey = (&'static str, CartanType, ParabolicSubset);

/// Memoized localizer for pushing forward from a whole space to a point.
fn space_localizer<T: Theory>(space: &FlagVariety) -> Result<Arc<Localizer>> {
    type Cell = Arc<OnceLock<Result<Arc<Localizer>>>>;
    static CELLS: OnceLock<Mutex<HashMap<LocalizerKey, Cell>>> = OnceLock::new();
    let key = (
        T::NAME,
        space.group().cartan_type(),
        space.delta_p().clone(),
    );
    let cell = CELLS
        .get_or_init(Default::default)
        .lock()
        .expect("localizer registry poisoned")
        .entry(key)
        .or_default()
        .clone();
    cell.get_or_init(|| {
        let rs = space.root_system();
        let roots: Vec<usize> = (0..rs.positive_roots.len())
            .filter(|&k| {
                !crate::cartan::is_supported_on(
                    &rs.positive_roots[k].simple_coords,
                    space.delta_p().indices(),
                )
            })
            .collect();
        Localizer::new::<T>(space.group(), &roots, space.coset_reps()).map(Arc::new)
    })
    .clone()
}

fn localize<T: Theory>(
    group: &WeylGroup,
    roots: &[usize],
    points: &[(usize, &LaurentPoly)],
) -> Result<LaurentPoly> {
    let ids: Vec<usize> = points.iter().map(|p| p.0).collect();
    let values: Vec<&LaurentPoly> = points.iter().map(|p| p.1).collect();
    Localizer::new::<T>(group, roots, &ids)?.apply(&values)
}
