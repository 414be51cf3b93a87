//! Class expressions: integer combinations of `O[...]`.
//!
//! Inside the brackets is either a partition (`O[2,1]`, type-A Grassmannians
//! only) or a reduced word of a minimal coset representative (`O[s2.s1]`).
//! `O[]` and a bare integer denote multiples of the identity class.

use std::sync::Arc;

use flagqk::algebra::LaurentPoly;
use flagqk::gkm::SchubertExpansion;
use flagqk::kgkm::KClass;
use flagqk::{Error, FlagVariety, Result};

/// Label of basis element `k`: `[2,1]` on Grassmannians, `s2.s1` otherwise.
pub fn basis_label(space: &FlagVariety, k: usize) -> String {
    match space.partition_label(k) {
        Some(l) => format!("[{}]", join(&l)),
        None if k == 0 => "id".into(),
        None => space.rep_word(k),
    }
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses an expression into integer coefficients over `W^P`.
pub fn parse_coeffs(expr: &str, space: &FlagVariety) -> Result<Vec<i64>> {
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty class expression".into()));
    }
    let mut coeffs = vec![0i64; space.num_points()];
    let mut rest = s.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let sign = match rest.as_bytes()[0] {
            b'+' if !first => 1,
            b'-' => -1,
            _ if first => 0,
            _ => return Err(Error::Parse(format!("expected + or - in {expr:?}"))),
        };
        if sign != 0 {
            rest = &rest[1..];
        }
        let sign = if sign == 0 { 1 } else { sign };
        first = false;

        let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
        let mut c: i64 = if digits > 0 {
            rest[..digits]
                .parse()
                .map_err(|_| Error::Parse(format!("coefficient too large in {expr:?}")))?
        } else {
            1
        };
        rest = &rest[digits..];
        if digits > 0 {
            rest = rest.strip_prefix('*').unwrap_or(rest);
        }
        let k = if let Some(body) = rest.strip_prefix("O[") {
            let close = body
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unclosed bracket in {expr:?}")))?;
            rest = &body[close + 1..];
            parse_label(&body[..close], space)?
        } else if digits > 0 {
            0
        } else {
            return Err(Error::Parse(format!(
                "expected O[...] or an integer in {expr:?}"
            )));
        };
        c *= sign;
        coeffs[k] = coeffs[k]
            .checked_add(c)
            .ok_or_else(|| Error::Parse("coefficient overflow".into()))?;
    }
    Ok(coeffs)
}

/// Basis position named by the inside of `O[...]`.
pub fn parse_label(label: &str, space: &FlagVariety) -> Result<usize> {
    if label.is_empty() || label == "id" {
        return Ok(0);
    }
    if label.starts_with('s') {
        let mut word = Vec::new();
        for part in label.split('.') {
            let i: usize = part
                .strip_prefix('s')
                .and_then(|x| x.parse().ok())
                .filter(|&i| i >= 1 && i <= space.rank())
                .ok_or_else(|| {
                    Error::Parse(format!("bad reflection {part:?} in word {label:?}"))
                })?;
            word.push(i - 1);
        }
        let group = space.group();
        let w = group.from_word(&word)?;
        if group.length(w) != word.len() {
            return Err(Error::Parse(format!("{label} is not a reduced word")));
        }
        return space
            .position(w)
            .ok_or_else(|| Error::NotMinimalRepresentative(label.to_string()));
    }
    if space.grassmannian().is_none() {
        return Err(Error::Parse(format!(
            "partition labels need a type-A Grassmannian; use a word such as O[s1] on {}",
            space.label()
        )));
    }
    let lambda = label
        .split(',')
        .map(|p| p.parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Parse(format!("bad partition {label:?}")))?;
    space.partition_position(&lambda)
}

pub fn parse_expansion(
    expr: &str,
    space: &Arc<FlagVariety>,
) -> Result<SchubertExpansion<flagqk::gkm::KTheory>> {
    let coeffs = parse_coeffs(expr, space)?;
    let rank = space.rank();
    SchubertExpansion::new(
        space.clone(),
        coeffs
            .iter()
            .map(|&c| LaurentPoly::from_int(rank, c))
            .collect(),
    )
}

pub fn parse_class(expr: &str, space: &Arc<FlagVariety>) -> Result<KClass> {
    parse_expansion(expr, space)?.assemble()
}

/// The basis position of an expression that must be a single Schubert class.
pub fn parse_single(expr: &str, space: &FlagVariety) -> Result<usize> {
    let coeffs = parse_coeffs(expr, space)?;
    let support: Vec<usize> = (0..coeffs.len()).filter(|&k| coeffs[k] != 0).collect();
    match support.as_slice() {
        [k] if coeffs[*k] == 1 => Ok(*k),
        _ => Err(Error::InvalidArgument(format!(
            "{expr:?} is not a single Schubert class"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grassmannian_labels() {
        let gr = FlagVariety::parse("A3", "1,3").unwrap();
        let k = parse_single("O[2,1]", &gr).unwrap();
        assert_eq!(gr.rep_length(k), 3);
        assert_eq!(parse_single("O[]", &gr).unwrap(), 0);
        assert_eq!(
            parse_single("O[2,0]", &gr).unwrap(),
            parse_single("O[2]", &gr).unwrap()
        );
        assert!(parse_coeffs("O[3,3]", &gr).is_err());
        assert!(parse_coeffs("O[1,2]", &gr).is_err());
        for k in 0..gr.num_points() {
            let label = basis_label(&gr, k);
            assert_eq!(parse_single(&format!("O{label}"), &gr).unwrap(), k);
            let word = gr.rep_word(k);
            if k > 0 {
                assert_eq!(parse_single(&format!("O[{word}]"), &gr).unwrap(), k);
            }
        }
        assert_eq!(
            parse_single("O[s2.s1.s3.s2]", &gr).unwrap(),
            parse_single("O[2,2]", &gr).unwrap()
        );
    }

    #[test]
    fn combinations() {
        let p2 = FlagVariety::parse("A2", "2").unwrap();
        assert_eq!(
            parse_coeffs("2*O[1] - O[2] + 3", &p2).unwrap(),
            vec![3, 2, -1]
        );
        assert_eq!(parse_coeffs("-O[s1] + O[s1]", &p2).unwrap(), vec![0, 0, 0]);
        assert_eq!(parse_coeffs("O[s2.s1]", &p2).unwrap(), vec![0, 0, 1]);
        assert!(parse_coeffs("O[s1.s2]", &p2).is_err());
        assert!(parse_coeffs("O[s1.s1]", &p2).is_err());
        assert!(parse_coeffs("O[1", &p2).is_err());
        assert!(parse_coeffs("2 O[1]x", &p2).is_err());
        assert!(parse_coeffs("", &p2).is_err());
        assert!(parse_single("2*O[1]", &p2).is_err());
    }

    #[test]
    fn partitions_rejected_off_grassmannians() {
        let fl = FlagVariety::parse("A2", "").unwrap();
        assert!(parse_coeffs("O[1]", &fl).is_err());
        assert_eq!(
            parse_single("O[s1.s2]", &fl).unwrap(),
            fl.position(fl.group().from_word(&[0, 1]).unwrap()).unwrap()
        );
        let c2 = FlagVariety::parse("C2", "2").unwrap();
        assert!(parse_coeffs("O[1]", &c2).is_err());
    }
}
