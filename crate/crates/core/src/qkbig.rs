//! Big quantum K-theory modulo degrees larger than line degrees.
//!
//! With `t_w` dual to `O^w` for `w ∈ W^P ∖ {id}` (the variable `t₀` dual to
//! `1` is set to zero throughout), the 3-form is
//!
//! ```text
//! ⟪F₁,F₂,F₃⟫ = Σ_{d ∈ {0} ∪ lines} Σ_h ⟨F₁,F₂,F₃,O^h⟩_d t^h/h! Q^d
//! ```
//!
//! and `F₁ ⋆ F₂` is the unique class with `⟪F₁⋆F₂, F₃⟫ = ⟪F₁,F₂,F₃⟫`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::algebra::tseries::inverse_factorial;
use crate::algebra::{solve_linear, LaurentPoly, Novikov, TSeries, TermKey};
use crate::cartan::FlagVariety;
use crate::error::{Error, Result};
use crate::kgkm::KClass;
use crate::lines::{is_line_degree, line_parabolic, LineDegreeData};

/// An element `Σ_w c_w O^w` with series coefficients, in basis order.
#[derive(Clone)]
pub struct QKElement {
    space: Arc<FlagVariety>,
    coeffs: Vec<TSeries>,
}

impl QKElement {
    pub fn new(space: Arc<FlagVariety>, coeffs: Vec<TSeries>) -> Result<Self> {
        if coeffs.len() != space.num_points() {
            return Err(Error::InvalidArgument(
                "coefficient count does not match W^P".into(),
            ));
        }
        Ok(QKElement { space, coeffs })
    }

    pub fn space(&self) -> &Arc<FlagVariety> {
        &self.space
    }

    pub fn coeffs(&self) -> &[TSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &TSeries {
        &self.coeffs[k]
    }

    pub fn with_order(&self, order: u32) -> Self {
        self.map(|c| c.with_order(order))
    }

    /// Small quantum specialization `t = 0`.
    pub fn at_t_zero(&self) -> Self {
        self.map(TSeries::at_t_zero)
    }

    /// Forgets the torus action: every character `e^λ ↦ 1`.
    pub fn specialize(&self) -> Self {
        self.map(|c| c.map_coeffs(|x| LaurentPoly::constant(x.nvars(), x.specialize_characters())))
    }

    pub fn map(&self, f: impl Fn(&TSeries) -> TSeries) -> Self {
        QKElement {
            space: self.space.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl PartialEq for QKElement {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_space(&other.space) && self.coeffs == other.coeffs
    }
}

impl std::fmt::Debug for QKElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = t_names(&self.space);
        let mut m = f.debug_map();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m.entry(&basis_name(&self.space, k), &c.render(&names));
            }
        }
        m.finish()
    }
}

/// Human-readable label of a basis element: a partition on Grassmannians,
/// a reduced word otherwise.
pub fn basis_name(space: &FlagVariety, k: usize) -> String {
    match space.partition_label(k) {
        Some(l) if l.is_empty() => "1".into(),
        Some(l) => format!(
            "O^{}",
            l.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        None if k == 0 => "1".into(),
        None => format!("O^{}", space.rep_word(k)),
    }
}

/// Names of the deformation variables `t_w`, `w ≠ id`, in basis order.
pub fn t_names(space: &FlagVariety) -> Vec<String> {
    (1..space.num_points())
        .map(|k| match space.partition_label(k) {
            Some(l) => format!(
                "t{}",
                l.iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            None => format!("t[{}]", space.rep_word(k)),
        })
        .collect()
}

/// Exponent vectors `h` with `|h| ≤ order`, sorted by degree then reverse
/// lexicographically so that `h − e_j` precedes `h`.
fn monomials(nvars: usize, order: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; nvars]];
    let mut layer = out.clone();
    for _ in 0..order {
        let mut next = Vec::new();
        for h in &layer {
            // extend only at or after the last nonzero slot: each monomial once
            let start = h.iter().rposition(|&e| e > 0).unwrap_or(0);
            for j in start..nvars {
                let mut g = h.clone();
                g[j] += 1;
                next.push(g);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Pointwise `∏_w (O^w)^{h_w}` for every monomial.
fn monomial_values(basis: &[KClass], monos: &[Vec<u32>]) -> Vec<KClass> {
    let index: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let mut out: Vec<KClass> = Vec::with_capacity(monos.len());
    for h in monos {
        match h.iter().position(|&e| e > 0) {
            None => out.push(KClass::one(basis[0].space())),
            Some(j) => {
                let mut g = h.clone();
                g[j] -= 1;
                out.push(&out[index[&g]] * &basis[j + 1]);
            }
        }
    }
    out
}

struct DegreeData {
    novikov: Novikov,
    /// Space carrying the invariants: `X` for degree 0, `M₀` for a line.
    space: Arc<FlagVariety>,
    line: Option<LineDegreeData>,
    /// Monomial classes `∏ (q_*p^*O^w)^{h_w}` on `space`.
    monomials: Vec<KClass>,
    /// `χ(O^v · monomial_h)` for `v ∈ W^{P'}` of `space`, built on first use.
    table: OnceLock<Result<Vec<Vec<LaurentPoly>>>>,
}

impl DegreeData {
    fn lift(&self, f: &KClass) -> Result<KClass> {
        match &self.line {
            None => Ok(f.clone()),
            Some(l) => l.transfer(f),
        }
    }

    fn table(&self, equivariant: bool) -> Result<&Vec<Vec<LaurentPoly>>> {
        self.table
            .get_or_init(|| {
                (0..self.space.num_points())
                    .into_par_iter()
                    .map(|v| {
                        let ov = KClass::schubert_at(&self.space, v)?;
                        self.monomials
                            .iter()
                            .map(|m| Ok(forget(ov.multiply(m)?.integrate()?, equivariant)))
                            .collect()
                    })
                    .collect()
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn forget(x: LaurentPoly, equivariant: bool) -> LaurentPoly {
    if equivariant {
        x
    } else {
        LaurentPoly::constant(x.nvars(), x.specialize_characters())
    }
}

/// Big quantum K-theory of `X` truncated at total `t`-degree `order`.
pub struct QuantumK {
    space: Arc<FlagVariety>,
    order: u32,
    equivariant: bool,
    monos: Vec<Vec<u32>>,
    basis: Vec<KClass>,
    degrees: Vec<DegreeData>,
    metric: OnceLock<Result<Vec<Vec<TSeries>>>>,
    products: Mutex<HashMap<(usize, usize), QKElement>>,
}

impl QuantumK {
    /// Fails when some simple degree of `X` is not a line degree: the
    /// truncation "modulo degrees larger than line degrees" is then not
    /// covered by the line-degree method.
    pub fn new(space: &Arc<FlagVariety>, order: u32) -> Result<Self> {
        Self::build(space, order, true)
    }

    /// The same ring with every character specialized to 1. Specialization is
    /// a ring map and the classical pairing stays unimodular, so this equals
    /// [`QKElement::specialize`] of the equivariant answer.
    pub fn nonequivariant(space: &Arc<FlagVariety>, order: u32) -> Result<Self> {
        Self::build(space, order, false)
    }

    fn build(space: &Arc<FlagVariety>, order: u32, equivariant: bool) -> Result<Self> {
        for a in space.simple_degrees() {
            if !is_line_degree(space, a)? {
                return Err(Error::NotLineDegree(format!(
                    "simple degree α{} of {} is not a line degree; big quantum K-theory modulo line degrees is not defined here",
                    a + 1,
                    space.label()
                )));
            }
        }
        let basis: Vec<KClass> = (0..space.num_points())
            .map(|k| KClass::schubert_at(space, k))
            .collect::<Result<_>>()?;
        let monos = monomials(space.num_points() - 1, order);
        let mut degrees = vec![DegreeData {
            novikov: Novikov::One,
            space: space.clone(),
            line: None,
            monomials: monomial_values(&basis, &monos),
            table: OnceLock::new(),
        }];
        for a in space.simple_degrees() {
            let line = line_parabolic(space, a)?;
            let lifted: Vec<KClass> = basis
                .iter()
                .map(|b| line.transfer(b))
                .collect::<Result<_>>()?;
            degrees.push(DegreeData {
                novikov: Novikov::Q(a),
                space: line.m0.clone(),
                monomials: monomial_values(&lifted, &monos),
                line: Some(line),
                table: OnceLock::new(),
            });
        }
        Ok(QuantumK {
            space: space.clone(),
            order,
            equivariant,
            monos,
            basis,
            degrees,
            metric: OnceLock::new(),
            products: Mutex::new(HashMap::new()),
        })
    }

    pub fn space(&self) -> &Arc<FlagVariety> {
        &self.space
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_equivariant(&self) -> bool {
        self.equivariant
    }

    pub fn num_t_vars(&self) -> usize {
        self.space.num_points() - 1
    }

    pub fn basis(&self, k: usize) -> &KClass {
        &self.basis[k]
    }

    fn zero_series(&self) -> TSeries {
        TSeries::zero(self.num_t_vars(), self.space.rank(), self.order)
    }

    /// `⟪F₁, …, F_m⟫` with `m` fixed insertions (3 for the 3-form).
    ///
    /// The product of the lifted insertions is expanded in the Schubert basis
    /// of the degree space and paired against the cached table of
    /// `χ(O^v · monomial)`.
    pub fn form(&self, insertions: &[&KClass]) -> Result<TSeries> {
        let mut out = self.zero_series();
        for deg in &self.degrees {
            let mut prod = KClass::one(&deg.space);
            for f in insertions {
                prod = prod.multiply(&deg.lift(f)?)?;
            }
            let table = deg.table(self.equivariant)?;
            let g: Vec<LaurentPoly> = prod
                .expand()?
                .coeffs()
                .iter()
                .map(|c| forget(c.clone(), self.equivariant))
                .collect();
            for (i, h) in self.monos.iter().enumerate() {
                let mut c = LaurentPoly::zero(self.space.rank());
                for (gv, row) in g.iter().zip(table) {
                    if !gv.is_zero() && !row[i].is_zero() {
                        c += &(gv * &row[i]);
                    }
                }
                out.add_term(
                    TermKey::new(deg.novikov, h.clone()),
                    c.scale(&inverse_factorial(h)),
                );
            }
        }
        Ok(out)
    }

    pub fn three_point_form(&self, f1: &KClass, f2: &KClass, f3: &KClass) -> Result<TSeries> {
        self.form(&[f1, f2, f3])
    }

    /// `𝒢₀ = ⟪1, 1, 1⟫` at `t₀ = 0`.
    pub fn potential(&self) -> Result<TSeries> {
        self.form(&[])
    }

    /// `⟪O^u, O^v⟫ = ⟪O^u, O^v, 1⟫`.
    pub fn metric(&self) -> Result<&Vec<Vec<TSeries>>> {
        self.metric
            .get_or_init(|| {
                let n = self.space.num_points();
                let mut g = vec![vec![self.zero_series(); n]; n];
                for u in 0..n {
                    for v in u..n {
                        let s = self.form(&[&self.basis[u], &self.basis[v]])?;
                        g[v][u] = s.clone();
                        g[u][v] = s;
                    }
                }
                Ok(g)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn product(&self, f1: &KClass, f2: &KClass) -> Result<QKElement> {
        let metric = self.metric()?;
        let rhs: Vec<TSeries> = self
            .basis
            .par_iter()
            .map(|ov| self.form(&[f1, f2, ov]))
            .collect::<Result<_>>()?;
        let coeffs = solve_linear(metric, &rhs)?;
        QKElement::new(self.space.clone(), coeffs)
    }

    /// `O^u ⋆ O^v`, memoized.
    pub fn basis_product(&self, u: usize, v: usize) -> Result<QKElement> {
        let key = (u.min(v), u.max(v));
        if let Some(p) = self
            .products
            .lock()
            .expect("product cache poisoned")
            .get(&key)
        {
            return Ok(p.clone());
        }
        let p = self.product(&self.basis[u], &self.basis[v])?;
        self.products
            .lock()
            .expect("product cache poisoned")
            .insert(key, p.clone());
        Ok(p)
    }

    /// `⋆` extended bilinearly over the series ring.
    pub fn multiply(&self, x: &QKElement, y: &QKElement) -> Result<QKElement> {
        let n = self.space.num_points();
        let mut out = vec![self.zero_series(); n];
        for (a, ca) in x.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in y.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let c = ca * cb;
                if c.is_zero() {
                    continue;
                }
                let p = self.basis_product(a, b)?;
                for (o, pc) in out.iter_mut().zip(&p.coeffs) {
                    *o = &*o + &(&c * pc);
                }
            }
        }
        QKElement::new(self.space.clone(), out)
    }

    /// The Schubert class at position `k` as a constant element.
    pub fn element(&self, k: usize) -> QKElement {
        let mut coeffs = vec![self.zero_series(); self.space.num_points()];
        coeffs[k] = TSeries::one(self.num_t_vars(), self.space.rank(), self.order);
        QKElement {
            space: self.space.clone(),
            coeffs,
        }
    }

    /// `⟪Σ c_w O^w, F⟫`, pairing a series element against a class.
    pub fn pair(&self, x: &QKElement, v: usize) -> Result<TSeries> {
        let metric = self.metric()?;
        let mut acc = self.zero_series();
        for (w, c) in x.coeffs.iter().enumerate() {
            acc = &acc + &(c * &metric[w][v]);
        }
        Ok(acc)
    }
}

pub fn three_point_form(space: &Arc<FlagVariety>, f: [&KClass; 3], order: u32) -> Result<TSeries> {
    QuantumK::new(space, order)?.three_point_form(f[0], f[1], f[2])
}

pub fn potential_g0(space: &Arc<FlagVariety>, order: u32) -> Result<TSeries> {
    QuantumK::new(space, order)?.potential()
}

pub fn quantum_metric(space: &Arc<FlagVariety>, order: u32) -> Result<Vec<Vec<TSeries>>> {
    QuantumK::new(space, order)?.metric().cloned()
}

pub fn quantum_product(
    space: &Arc<FlagVariety>,
    f1: &KClass,
    f2: &KClass,
    order: u32,
) -> Result<QKElement> {
    QuantumK::new(space, order)?.product(f1, f2)
}

/// The product at `t = 0`, computed directly at order 0.
pub fn small_qk_product(space: &Arc<FlagVariety>, f1: &KClass, f2: &KClass) -> Result<QKElement> {
    QuantumK::new(space, 0)?.product(f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::integer;

    fn space(t: &str, dp: &str) -> Arc<FlagVariety> {
        FlagVariety::parse(t, dp).unwrap()
    }

    #[test]
    fn monomial_enumeration() {
        let m = monomials(2, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![0, 0]);
        let mut sorted = m.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
        assert_eq!(monomials(5, 4).len(), 126);
    }

    #[test]
    fn non_line_degrees_are_rejected() {
        assert!(matches!(
            QuantumK::new(&space("C2", "2"), 2),
            Err(Error::NotLineDegree(_))
        ));
        assert!(QuantumK::new(&space("C2", "1"), 1).is_ok());
    }

    #[test]
    fn p2_potential_low_order() {
        let p2 = space("A2", "2");
        let qk = QuantumK::new(&p2, 2).unwrap();
        let g0 = qk.potential().unwrap();
        let c = |nov, e: [u32; 2]| g0.coeff(nov, &e).specialize_characters();
        let q = Novikov::Q(0);
        assert_eq!(c(Novikov::One, [0, 0]), integer(1));
        assert_eq!(c(Novikov::One, [1, 0]), integer(1));
        assert_eq!(c(Novikov::One, [0, 1]), integer(1));
        assert_eq!(c(Novikov::One, [2, 0]), crate::algebra::rational(1, 2));
        assert_eq!(c(Novikov::One, [1, 1]), integer(0));
        assert_eq!(c(q, [0, 0]), integer(1));
        assert_eq!(c(q, [1, 1]), integer(1));
        assert_eq!(c(q, [0, 2]), crate::algebra::rational(1, 2));
    }

    #[test]
    fn small_products_on_p2() {
        let p2 = space("A2", "2");
        let o = |k| KClass::schubert_at(&p2, k).unwrap();
        let p = small_qk_product(&p2, &o(1), &o(1)).unwrap().specialize();
        assert!(p.coeff(2).coeff(Novikov::One, &[0, 0]).is_one());
        assert!(p.coeff(0).is_zero() && p.coeff(1).is_zero());
        let p = small_qk_product(&p2, &o(2), &o(2)).unwrap().specialize();
        assert!(p.coeff(1).coeff(Novikov::Q(0), &[0, 0]).is_one());
        assert_eq!(p.coeff(1).num_terms(), 1);
        assert!(p.coeff(0).is_zero() && p.coeff(2).is_zero());
        let one = small_qk_product(&p2, &o(2), &o(0)).unwrap();
        assert_eq!(one, QuantumK::new(&p2, 0).unwrap().element(2));
    }

    #[test]
    fn unit_and_symmetry() {
        let p2 = space("A2", "2");
        let qk = QuantumK::new(&p2, 2).unwrap();
        let o: Vec<KClass> = (0..3).map(|k| qk.basis(k).clone()).collect();
        for k in 0..3 {
            assert_eq!(qk.product(&o[0], &o[k]).unwrap(), qk.element(k));
        }
        let f = qk.three_point_form(&o[1], &o[2], &o[2]).unwrap();
        assert_eq!(f, qk.three_point_form(&o[2], &o[1], &o[2]).unwrap());
        assert_eq!(f, qk.three_point_form(&o[2], &o[2], &o[1]).unwrap());
    }

    #[test]
    fn metric_constant_term_is_classical_pairing() {
        let p1 = space("A1", "");
        let m = quantum_metric(&p1, 1).unwrap();
        let c: Vec<Vec<_>> = m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| s.coeff(Novikov::One, &[0]).specialize_characters())
                    .collect()
            })
            .collect();
        assert_eq!(
            c,
            vec![vec![integer(1), integer(1)], vec![integer(1), integer(0)]]
        );
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
    }

    #[test]
    fn nonequivariant_mode_is_the_specialization() {
        for (t, dp, order) in [("A2", "2", 2), ("A3", "1,3", 1)] {
            let x = space(t, dp);
            let eq = QuantumK::new(&x, order).unwrap();
            let ne = QuantumK::nonequivariant(&x, order).unwrap();
            assert!(!ne.is_equivariant());
            let n = x.num_points();
            for (u, v) in [(1, 1), (1, n - 1), (n - 1, n - 1)] {
                let a = eq.product(eq.basis(u), eq.basis(v)).unwrap().specialize();
                assert_eq!(
                    a,
                    ne.product(ne.basis(u), ne.basis(v)).unwrap(),
                    "{t} {u} {v}"
                );
            }
        }
    }
}
