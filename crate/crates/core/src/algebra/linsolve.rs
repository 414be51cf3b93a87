//! Fraction-free linear algebra over Laurent polynomials and the truncated
//! Gram-system solver over `TSeries`.

use std::collections::BTreeMap;

use super::laurent::LaurentPoly;
use super::tseries::{Novikov, TSeries, TermKey};
use crate::error::{Error, Result};

/// Determinant by Bareiss elimination; every intermediate division is exact.
pub fn determinant(m: &[Vec<LaurentPoly>]) -> Result<LaurentPoly> {
    let n = m.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let nv = m[0][0].nvars();
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = LaurentPoly::one(nv);
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Ok(LaurentPoly::zero(nv)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

fn minor(m: &[Vec<LaurentPoly>], row: usize, col: usize) -> Vec<Vec<LaurentPoly>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Inverse via adjugate and determinant. Only matrices whose determinant
/// divides the adjugate (in practice: unit determinant) are invertible here.
pub fn inverse(m: &[Vec<LaurentPoly>]) -> Result<Vec<Vec<LaurentPoly>>> {
    let n = m.len();
    let det = determinant(m)?;
    if det.is_zero() {
        return Err(Error::Singular("zero determinant".into()));
    }
    let nv = det.nvars();
    if n == 1 {
        return Ok(vec![vec![LaurentPoly::one(nv).exact_div(&det).map_err(
            |_| Error::Singular(format!("determinant {det} is not a unit")),
        )?]]);
    }
    let mut inv = vec![vec![LaurentPoly::zero(nv); n]; n];
    for i in 0..n {
        for j in 0..n {
            let cof = determinant(&minor(m, i, j))?;
            let cof = if (i + j) % 2 == 1 { -cof } else { cof };
            inv[j][i] = cof.exact_div(&det).map_err(|_| {
                Error::Singular(format!("determinant {det} does not divide the adjugate"))
            })?;
        }
    }
    Ok(inv)
}

type Terms = BTreeMap<TermKey, LaurentPoly>;

/// Splits a series into its homogeneous parts by [`TermKey::weight`].
fn by_weight(s: &TSeries, max: u32) -> Vec<Vec<(TermKey, LaurentPoly)>> {
    let mut out = vec![Vec::new(); max as usize + 1];
    for (k, c) in s.terms() {
        if k.weight() <= max {
            out[k.weight() as usize].push((k.clone(), c.clone()));
        }
    }
    out
}

/// Solves `M c = b` over the truncated series ring. Writing `M = M₀ + R`
/// with `M₀` the constant term (at `Q = 0`, `t = 0`), the part of `c` of
/// weight `w` (`t`-degree plus Novikov degree) is
/// `M₀⁻¹ (b_w − Σ_{r ≥ 1} R_r c_{w−r})`, so `c` is built one weight at a time.
pub fn solve_linear(m: &[Vec<TSeries>], b: &[TSeries]) -> Result<Vec<TSeries>> {
    let n = m.len();
    if n == 0 || b.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("Gram system must be square".into()));
    }
    let nvars = b[0].nvars();
    let rank = b[0].rank();
    let order = b
        .iter()
        .chain(m.iter().flatten())
        .map(|s| s.order())
        .min()
        .unwrap();
    let max_weight = order + 1;
    let zero_exps = vec![0u32; nvars];

    let m0: Vec<Vec<LaurentPoly>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| s.coeff(Novikov::One, &zero_exps))
                .collect()
        })
        .collect();
    let m0_inv = inverse(&m0)?;
    let rest: Vec<Vec<_>> = m
        .iter()
        .map(|r| r.iter().map(|s| by_weight(s, max_weight)).collect())
        .collect();
    let rhs: Vec<_> = b.iter().map(|s| by_weight(s, max_weight)).collect();

    // c[j][w]: terms of weight w of the j-th unknown
    let mut c: Vec<Vec<Vec<(TermKey, LaurentPoly)>>> = vec![Vec::new(); n];
    for w in 0..=max_weight as usize {
        let mut residual: Vec<Terms> = vec![Terms::new(); n];
        for i in 0..n {
            for (k, v) in &rhs[i][w] {
                residual[i].insert(k.clone(), v.clone());
            }
            for j in 0..n {
                for r in 1..=w {
                    for (kr, cr) in &rest[i][j][r] {
                        for (kc, cc) in &c[j][w - r] {
                            let Some(nov) = kr.novikov.mul(kc.novikov) else {
                                continue;
                            };
                            if kr.degree + kc.degree > order {
                                continue;
                            }
                            let exps = kr.exps.iter().zip(&kc.exps).map(|(a, b)| a + b).collect();
                            let e = residual[i]
                                .entry(TermKey::new(nov, exps))
                                .or_insert_with(|| LaurentPoly::zero(rank));
                            *e -= &(cr * cc);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            let mut part = Terms::new();
            for (j, res) in residual.iter().enumerate() {
                if m0_inv[i][j].is_zero() {
                    continue;
                }
                for (k, v) in res {
                    if v.is_zero() {
                        continue;
                    }
                    let e = part
                        .entry(k.clone())
                        .or_insert_with(|| LaurentPoly::zero(rank));
                    *e += &(&m0_inv[i][j] * v);
                }
            }
            c[i].push(part.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
    }
    Ok(c.into_iter()
        .map(|parts| {
            let mut s = TSeries::zero(nvars, rank, order);
            for (k, v) in parts.into_iter().flatten() {
                s.add_term(k, v);
            }
            s
        })
        .collect())
}
