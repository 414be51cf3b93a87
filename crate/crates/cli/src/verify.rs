//! Self-check suites run by `flagqk verify`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use clap::ValueEnum;

use flagqk::algebra::{determinant, integer, LaurentPoly, TSeries};
use flagqk::cartan::weyl_group;
use flagqk::hgkm::HClass;
use flagqk::kgkm::{is_gkm_compatible, KClass};
use flagqk::lines::{count_lines, is_line_degree, line_parabolic, peterson_check};
use flagqk::qkbig::QuantumK;
use flagqk::{CartanType, Error, Family, FlagVariety, Limits, ParabolicSubset};

use crate::report::Check;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cartan,
    Algebra,
    Ktheory,
    Cohomology,
    Lines,
    Qk,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Cartan => "cartan",
            Suite::Algebra => "algebra",
            Suite::Ktheory => "ktheory",
            Suite::Cohomology => "cohomology",
            Suite::Lines => "lines",
            Suite::Qk => "qk",
            Suite::All => "all",
        }
    }
}

type Outcome = std::result::Result<String, String>;
type Named = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn e(err: Error) -> String {
    err.to_string()
}

fn space(t: &str, dp: &str) -> std::result::Result<Arc<FlagVariety>, String> {
    FlagVariety::parse(t, dp).map_err(e)
}

fn schubert(x: &Arc<FlagVariety>) -> std::result::Result<Vec<KClass>, String> {
    (0..x.num_points())
        .map(|k| KClass::schubert_at(x, k).map_err(e))
        .collect()
}

fn run_check(suite: Suite, name: &str, f: impl FnOnce() -> Outcome) -> Check {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, format!("counterexample: {d}")),
    };
    Check {
        suite: suite.name().into(),
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run(suite: Suite) -> Vec<Check> {
    let suites = match suite {
        Suite::All => vec![
            Suite::Cartan,
            Suite::Algebra,
            Suite::Ktheory,
            Suite::Cohomology,
            Suite::Lines,
            Suite::Qk,
        ],
        s => vec![s],
    };
    let mut out = Vec::new();
    for s in suites {
        let checks: Vec<Named> = match s {
            Suite::Cartan => vec![
                ("weyl-orders", weyl_orders),
                ("longest-element", longest_element),
                ("coset-representatives", coset_representatives),
                ("size-limit", size_limit),
            ],
            Suite::Algebra => vec![
                ("ring-axioms", ring_axioms),
                ("exact-division", exact_division),
                ("series", series),
            ],
            Suite::Ktheory => vec![
                ("euler-characteristic", euler_characteristic),
                ("bruhat-support", bruhat_support),
                ("gkm-compatibility", gkm_compatibility),
                ("pairing", pairing),
                ("push-pull", push_pull),
            ],
            Suite::Cohomology => vec![
                ("integrals", integrals),
                ("poincare-duality", poincare_duality),
            ],
            Suite::Lines => vec![
                ("classification", classification),
                ("moduli-dimensions", moduli_dimensions),
                ("comparison-with-g/b", comparison),
                ("line-counts", line_counts),
            ],
            Suite::Qk => vec![
                ("unit", qk_unit),
                ("symmetry", qk_symmetry),
                ("re-substitution", qk_resubstitution),
                ("associativity", qk_associativity),
                ("potential-derivatives", qk_potential),
            ],
            Suite::All => unreachable!(),
        };
        for (name, f) in checks {
            out.push(run_check(s, name, f));
        }
    }
    out
}

// ---- cartan

fn weyl_orders() -> Outcome {
    let known = [
        ("A1", 2),
        ("A2", 6),
        ("A3", 24),
        ("A4", 120),
        ("B2", 8),
        ("B3", 48),
        ("C3", 48),
        ("D4", 192),
        ("G2", 12),
        ("F4", 1152),
    ];
    for (t, n) in known {
        let ct: CartanType = t.parse().map_err(e)?;
        let g = weyl_group(ct, Limits::default()).map_err(e)?;
        ensure!(g.len() == n, "|W({t})| = {} ≠ {n}", g.len());
    }
    Ok(format!("{} groups", known.len()))
}

fn longest_element() -> Outcome {
    for t in ["A3", "B3", "C3", "D4", "G2", "F4"] {
        let ct: CartanType = t.parse().map_err(e)?;
        let g = weyl_group(ct, Limits::default()).map_err(e)?;
        let w0 = g.longest();
        let roots = g.root_system().positive_roots.len();
        ensure!(
            g.length(w0) == roots,
            "{t}: ℓ(w₀) = {} ≠ |Φ⁺| = {roots}",
            g.length(w0)
        );
        ensure!(
            g.multiply(w0, w0) == g.identity(),
            "{t}: w₀ is not an involution"
        );
        for w in 0..g.len() {
            ensure!(
                g.bruhat_leq(g.identity(), w) && g.bruhat_leq(w, w0),
                "{t}: element {w} outside [id, w₀]"
            );
        }
    }
    Ok("ℓ(w₀) = |Φ⁺| and id ≤ w ≤ w₀".into())
}

fn coset_representatives() -> Outcome {
    for (t, dp, n) in [
        ("A1", "", 2),
        ("A2", "2", 3),
        ("A3", "1,3", 6),
        ("A4", "1,3,4", 10),
        ("B2", "1", 4),
        ("C3", "2,3", 6),
    ] {
        let x = space(t, dp)?;
        ensure!(
            x.num_points() == n,
            "{t}/{dp}: |W^P| = {} ≠ {n}",
            x.num_points()
        );
        let g = x.group();
        for k in 0..x.num_points() {
            let w = x.rep(k);
            ensure!(
                g.min_coset_rep(w, x.delta_p().indices()) == w,
                "{t}/{dp}: {} not minimal",
                x.rep_word(k)
            );
            ensure!(
                x.rep_length(k) == g.length(w),
                "{t}/{dp}: length mismatch at {k}"
            );
        }
        let top = (0..n).map(|k| x.rep_length(k)).max().unwrap_or(0);
        ensure!(
            top == x.dimension(),
            "{t}/{dp}: longest rep has length {top} ≠ dim {}",
            x.dimension()
        );
    }
    Ok("6 spaces".into())
}

fn size_limit() -> Outcome {
    let e8 = CartanType::new(Family::E, 8).map_err(e)?;
    ensure!(
        matches!(weyl_group(e8, Limits::default()), Err(Error::TooLarge(_))),
        "E8 was enumerated"
    );
    Ok("E8 rejected".into())
}

// ---- algebra

fn samples() -> std::result::Result<Vec<LaurentPoly>, String> {
    [
        "1",
        "y1 - 1",
        "2*y1^-1*y2 + 1/3",
        "y1*y2^2 - 3*y2 + y1^-2",
        "-1/2*y2^-1 + 5",
    ]
    .iter()
    .map(|s| LaurentPoly::parse(s, 2, "y").map_err(e))
    .collect()
}

fn ring_axioms() -> Outcome {
    let p = samples()?;
    for a in &p {
        for b in &p {
            ensure!(a * b == b * a, "{a} · {b} not commutative");
            for c in &p {
                ensure!(
                    &(a * b) * c == a * &(b * c),
                    "({a})({b})({c}) not associative"
                );
                ensure!(
                    a * &(b + c) == &(a * b) + &(a * c),
                    "({a})({b}+{c}) not distributive"
                );
            }
        }
        ensure!(
            LaurentPoly::parse(&a.render("y"), 2, "y").map_err(e)? == *a,
            "{a} does not round-trip"
        );
    }
    Ok(format!("{} samples", p.len()))
}

fn exact_division() -> Outcome {
    let p = samples()?;
    for a in &p {
        for b in &p {
            ensure!(
                (a * b).exact_div(b).map_err(e)? == *a,
                "({a})·({b}) / ({b}) ≠ {a}"
            );
        }
    }
    let m = vec![
        vec![
            LaurentPoly::parse("y1", 2, "y").map_err(e)?,
            LaurentPoly::parse("y2 + 1", 2, "y").map_err(e)?,
        ],
        vec![
            LaurentPoly::from_int(2, 0),
            LaurentPoly::parse("y1^-1", 2, "y").map_err(e)?,
        ],
    ];
    ensure!(
        determinant(&m).map_err(e)?.is_one(),
        "unimodular determinant ≠ 1"
    );
    Ok("quotients and determinants exact".into())
}

fn series() -> Outcome {
    let t = |k| TSeries::var(2, 1, 4, k);
    let q = TSeries::novikov(2, 1, 4, 0);
    let s = &(&t(0) + &(&t(1) * &t(1))) + &q;
    let one = TSeries::one(2, 1, 4);
    let neg = &TSeries::zero(2, 1, 4) - &s;
    ensure!(
        &s.exp().map_err(e)? * &neg.exp().map_err(e)? == one,
        "exp(s)·exp(−s) ≠ 1"
    );
    ensure!((&q * &q).is_zero(), "Q² ≠ 0");
    ensure!(t(0).pow(5).is_zero(), "t⁵ survives truncation at order 4");
    Ok("exp, Q² = 0, truncation".into())
}

// ---- ktheory

const K_SPACES: [(&str, &str); 7] = [
    ("A1", ""),
    ("A2", "2"),
    ("A3", "1,3"),
    ("A2", ""),
    ("A3", "2"),
    ("B2", ""),
    ("G2", "1"),
];

fn euler_characteristic() -> Outcome {
    let mut n = 0;
    for (t, dp) in K_SPACES {
        let x = space(t, dp)?;
        for (k, o) in schubert(&x)?.iter().enumerate() {
            let chi = o.integrate().map_err(e)?;
            ensure!(chi.is_one(), "{t}/{dp}: χ(O^{}) = {chi}", x.rep_word(k));
            n += 1;
        }
    }
    Ok(format!("χ_T(O^w) = 1 for {n} classes"))
}

fn bruhat_support() -> Outcome {
    for (t, dp) in K_SPACES {
        let x = space(t, dp)?;
        let g = x.group();
        for (k, o) in schubert(&x)?.iter().enumerate() {
            for j in 0..x.num_points() {
                let leq = g.bruhat_leq(x.rep(k), x.rep(j));
                ensure!(
                    !o.value(j).is_zero() == leq,
                    "{t}/{dp}: O^{} at {}",
                    x.rep_word(k),
                    x.rep_word(j)
                );
            }
        }
    }
    Ok("support is the Bruhat interval".into())
}

fn gkm_compatibility() -> Outcome {
    for t in ["A2", "A3", "B2", "G2"] {
        let x = space(t, "")?;
        for (k, o) in schubert(&x)?.iter().enumerate() {
            ensure!(
                is_gkm_compatible(o).map_err(e)?,
                "{t}: O^{} fails divisibility",
                x.rep_word(k)
            );
        }
    }
    Ok("4 complete flag varieties".into())
}

fn pairing() -> Outcome {
    for (t, dp) in K_SPACES {
        let x = space(t, dp)?;
        let cls = schubert(&x)?;
        let mut m = Vec::new();
        for u in &cls {
            let mut row = Vec::new();
            for v in &cls {
                let chi = (u * v).integrate().map_err(e)?.specialize_characters();
                row.push(LaurentPoly::constant(1, chi));
            }
            m.push(row);
        }
        let d = determinant(&m).map_err(e)?.constant_term();
        ensure!(d == integer(1) || d == integer(-1), "{t}/{dp}: det = {d}");
    }
    Ok("non-equivariant pairing unimodular".into())
}

fn push_pull() -> Outcome {
    for (t, small, big) in [
        ("A2", "", "1"),
        ("A3", "", "1,3"),
        ("A3", "2", "1,2"),
        ("B2", "", "2"),
    ] {
        let q = space(t, small)?;
        let p = space(t, big)?;
        let fs = schubert(&q)?;
        let gs = schubert(&p)?;
        for (i, f) in fs.iter().enumerate() {
            let pushed = f.pushforward(&p).map_err(e)?;
            ensure!(
                pushed == f.pushforward_by_localization(&p).map_err(e)?,
                "{t} {small}→{big}: pushforward of O^{} disagrees with localization",
                q.rep_word(i)
            );
            for (j, g) in gs.iter().enumerate() {
                let lhs = (f * &g.pullback(&q).map_err(e)?).integrate().map_err(e)?;
                let rhs = (&pushed * g).integrate().map_err(e)?;
                ensure!(
                    lhs == rhs,
                    "{t}: projection formula fails for ({}, {})",
                    q.rep_word(i),
                    p.rep_word(j)
                );
            }
        }
        for (j, g) in gs.iter().enumerate() {
            ensure!(
                g.pullback(&q).map_err(e)?.pushforward(&p).map_err(e)? == *g,
                "{t}: q_*q^* O^{} ≠ O^{}",
                p.rep_word(j),
                p.rep_word(j)
            );
        }
    }
    Ok("oracle, projection formula, q_*q^* = id".into())
}

// ---- cohomology

fn integrals() -> Outcome {
    let p2 = space("A2", "2")?;
    let pt = HClass::schubert_at(&p2, 2).map_err(e)?;
    ensure!(pt.integrate().map_err(e)?.is_one(), "∫[pt] ≠ 1 on P²");
    let gr = space("A3", "1,3")?;
    let s1 = HClass::schubert_at(&gr, gr.partition_position(&[1]).map_err(e)?).map_err(e)?;
    let v = s1.pow(4).integrate().map_err(e)?;
    ensure!(v == LaurentPoly::from_int(3, 2), "∫σ₁⁴ on Gr(2,4) = {v}");
    Ok("∫[pt] = 1, ∫σ₁⁴ = 2".into())
}

fn poincare_duality() -> Outcome {
    for (t, dp) in [("A2", "2"), ("A3", "1,3"), ("A2", ""), ("B2", "")] {
        let x = space(t, dp)?;
        let g = x.group();
        let cls: Vec<HClass> = (0..x.num_points())
            .map(|k| HClass::schubert_at(&x, k).map_err(e))
            .collect::<std::result::Result<_, _>>()?;
        for (u, cu) in cls.iter().enumerate() {
            for v in 0..cls.len() {
                let dual = x.coset_position(g.multiply(g.longest(), x.rep(v)));
                let c = (cu * &cls[dual]).integrate().map_err(e)?.constant_term();
                ensure!(
                    c == integer((u == v) as i64),
                    "{t}/{dp}: pairing ({u},{v}) = {c}"
                );
            }
        }
    }
    Ok("Schubert bases are dual".into())
}

// ---- lines

fn classification() -> Outcome {
    for rank in [2, 3] {
        let ct = CartanType::new(Family::C, rank).map_err(e)?;
        let dp = (2..=rank)
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let x = FlagVariety::of_type(ct, &dp, Limits::default()).map_err(e)?;
        ensure!(!is_line_degree(&x, 0).map_err(e)?, "C{rank}: α1 accepted");
    }
    let mut n = 0;
    for family in Family::all() {
        for rank in 1..=4 {
            let Ok(ct) = CartanType::new(family, rank) else {
                continue;
            };
            let gb = FlagVariety::of_type(ct, "", Limits::default()).map_err(e)?;
            let laced = gb.root_system().is_simply_laced();
            for mask in 0u32..(1 << rank) {
                if mask != 0 && !laced {
                    continue;
                }
                let dp: Vec<usize> = (0..rank).filter(|i| mask >> i & 1 == 1).collect();
                let x = gb
                    .sibling(ParabolicSubset::new(dp, rank).map_err(e)?)
                    .map_err(e)?;
                for a in x.simple_degrees() {
                    ensure!(
                        is_line_degree(&x, a).map_err(e)?,
                        "{} rejects α{}",
                        x.label(),
                        a + 1
                    );
                    n += 1;
                }
            }
        }
    }
    Ok(format!("C2, C3 reject α1; {n} degrees accepted"))
}

fn moduli_dimensions() -> Outcome {
    for (t, dp) in [
        ("A3", "1,3"),
        ("A2", "2"),
        ("B3", "1"),
        ("C3", ""),
        ("D4", "1,3,4"),
        ("G2", ""),
    ] {
        let x = space(t, dp)?;
        for a in x.simple_degrees() {
            if !is_line_degree(&x, a).map_err(e)? {
                continue;
            }
            let l = line_parabolic(&x, a).map_err(e)?;
            ensure!(
                l.m1.dimension() == l.m0.dimension() + 1,
                "{t}/{dp} α{}: dim M1 = {}, dim M0 = {}",
                a + 1,
                l.m1.dimension(),
                l.m0.dimension()
            );
        }
    }
    Ok("dim M1 = dim M0 + 1".into())
}

fn multisets(m: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for s in multisets(m, n - 1) {
        for k in s.last().copied().unwrap_or(0)..m {
            let mut t = s.clone();
            t.push(k);
            out.push(t);
        }
    }
    out
}

fn comparison() -> Outcome {
    let mut n = 0;
    for (t, dp, max_n) in [("A2", "2", 3), ("A3", "1,3", 2), ("B2", "", 2)] {
        let x = space(t, dp)?;
        let basis = schubert(&x)?;
        for a in x.simple_degrees() {
            let line = line_parabolic(&x, a).map_err(e)?;
            for k in 0..=max_n {
                for tuple in multisets(basis.len(), k) {
                    let ins: Vec<KClass> = tuple.iter().map(|&i| basis[i].clone()).collect();
                    let c = peterson_check(&line, &ins).map_err(e)?;
                    ensure!(
                        c.equal,
                        "{t}/{dp} α{} {:?}: {} ≠ {}",
                        a + 1,
                        tuple,
                        c.lhs,
                        c.rhs
                    );
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} insertion tuples agree with G/B"))
}

fn line_counts() -> Outcome {
    let p3 = space("A3", "2,3")?;
    let line = line_parabolic(&p3, 0).map_err(e)?;
    let l = p3.group().from_word(&[1, 0]).map_err(e)?;
    let lines = count_lines(&line, &[l; 4]).map_err(e)?;
    let gr = space("A3", "1,3")?;
    let s1 = HClass::schubert_at(&gr, gr.partition_position(&[1]).map_err(e)?).map_err(e)?;
    let oracle = s1.pow(4).integrate().map_err(e)?.constant_term();
    ensure!(
        integer(lines as i64) == oracle,
        "P³: {lines} lines, ∫σ₁⁴ = {oracle}"
    );
    let p2 = space("A2", "2")?;
    let line2 = line_parabolic(&p2, 0).map_err(e)?;
    let g = p2.group();
    let (pt, ln) = (
        g.from_word(&[1, 0]).map_err(e)?,
        g.from_word(&[0]).map_err(e)?,
    );
    let through = count_lines(&line2, &[pt, pt, ln]).map_err(e)?;
    ensure!(through == 1, "P²: {through} lines through 2 points");
    Ok(format!("P³: {lines}, P²: {through}"))
}

// ---- qk

fn qk_unit() -> Outcome {
    for (t, dp) in [("A1", ""), ("A2", "2")] {
        let x = space(t, dp)?;
        let qk = QuantumK::new(&x, 2).map_err(e)?;
        for w in 0..x.num_points() {
            ensure!(
                qk.basis_product(0, w).map_err(e)? == qk.element(w),
                "{t}/{dp}: 1 ⋆ O^{w} ≠ O^{w}"
            );
        }
    }
    Ok("1 is the unit".into())
}

fn qk_symmetry() -> Outcome {
    let p2 = space("A2", "2")?;
    let qk = QuantumK::new(&p2, 2).map_err(e)?;
    let o = |k| qk.basis(k);
    for (a, b, c) in [(1, 2, 2), (0, 1, 2), (1, 1, 2)] {
        let base = qk.three_point_form(o(a), o(b), o(c)).map_err(e)?;
        for (x, y, z) in [(a, c, b), (b, a, c), (c, b, a)] {
            ensure!(
                qk.three_point_form(o(x), o(y), o(z)).map_err(e)? == base,
                "P²: 3-form not symmetric at ({a},{b},{c})"
            );
        }
    }
    Ok("P², N = 2".into())
}

fn qk_resubstitution() -> Outcome {
    for (t, dp, order) in [("A1", "", 3), ("A2", "2", 2)] {
        let x = space(t, dp)?;
        let qk = QuantumK::new(&x, order).map_err(e)?;
        let n = x.num_points();
        for (u, v) in [(1, n - 1), (1, 1)] {
            let prod = qk.product(qk.basis(u), qk.basis(v)).map_err(e)?;
            for w in 0..n {
                let lhs = qk.pair(&prod, w).map_err(e)?;
                let rhs = qk
                    .three_point_form(qk.basis(u), qk.basis(v), qk.basis(w))
                    .map_err(e)?;
                ensure!(
                    lhs == rhs,
                    "{t}/{dp}: ⟪O^{u}⋆O^{v}, O^{w}⟫ ≠ ⟪O^{u},O^{v},O^{w}⟫"
                );
            }
        }
    }
    Ok("P¹ and P²".into())
}

fn qk_associativity() -> Outcome {
    for (t, dp, order) in [("A1", "", 3u32), ("A2", "2", 2)] {
        let x = space(t, dp)?;
        let qk = QuantumK::new(&x, order).map_err(e)?;
        let n = x.num_points();
        for u in 1..n {
            for v in 1..n {
                for w in 1..n {
                    let left = qk
                        .multiply(&qk.basis_product(u, v).map_err(e)?, &qk.element(w))
                        .map_err(e)?;
                    let right = qk
                        .multiply(&qk.element(u), &qk.basis_product(v, w).map_err(e)?)
                        .map_err(e)?;
                    ensure!(
                        left.with_order(order - 1) == right.with_order(order - 1),
                        "{t}/{dp}: (O^{u}⋆O^{v})⋆O^{w} ≠ O^{u}⋆(O^{v}⋆O^{w})"
                    );
                }
            }
        }
    }
    Ok("mod Q² at order N − 1 on P¹, P²".into())
}

fn qk_potential() -> Outcome {
    let p1 = space("A1", "")?;
    let qk = QuantumK::new(&p1, 5).map_err(e)?;
    let g0 = qk.potential().map_err(e)?;
    let d = g0.derivative(0).derivative(0).derivative(0);
    let o = qk.basis(1);
    let f = qk.three_point_form(o, o, o).map_err(e)?;
    ensure!(d == f.with_order(2), "P¹: ∂³G0 ≠ ⟪O¹,O¹,O¹⟫");
    Ok("∂³G0 = 3-form on P¹".into())
}
