//! Reconstruction of a two-variable q-expansion from its one-variable
//! restrictions along (z, pz) for several primes p.
//!
//! If a(m, n) is supported on m, n >= 0 then the restriction along slope p
//! has integer-grid coefficients C_p(s) = sum_{m + p n = s} a(m, n). For
//! p > m the diagonal through (m, n) meets no cell in a row above n, so
//!
//!   a(m, n) = C_p(m + p n) - sum_{j >= 1} a(m + p j, n - j)
//!
//! recovers the array row by row. The strict inequality matters: at p = m
//! the diagonal also meets (0, n + 1) and the formula would silently
//! produce a spurious solution. Every cell reachable by two primes is
//! computed from both and compared, so inconsistent input data is reported
//! rather than absorbed.

use crate::exactmath::Cyc;
use crate::{Error, Result};

/// One-variable restriction data along (z, pz), on the integer grid:
/// `coeffs[s]` is the coefficient of the diagonal m + p n = s.
#[derive(Clone, Debug)]
pub struct RestrictionData {
    pub p: u64,
    pub coeffs: Vec<Cyc>,
}

/// Reconstructs a(m, n) for 0 <= m <= m_max, 0 <= n <= n_max from the
/// given restrictions. Returns rows indexed by n. Fails with a
/// configuration error naming the first unreachable column when the data
/// contains no prime large enough, and with a consistency error naming
/// the offending (p, s) when two primes disagree about a cell.
pub fn reconstruct_opt(
    data: &[RestrictionData],
    m_max: usize,
    n_max: usize,
) -> Result<Vec<Vec<Cyc>>> {
    let rows = reconstruct_full(data, m_max, n_max)?;
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, row) in rows.iter().enumerate().take(n_max + 1) {
        if row.len() <= m_max {
            return Err(Error::config(format!(
                "need prime > {} with matching coverage to reconstruct row {}",
                row.len(),
                n
            )));
        }
        out.push(row[..=m_max].to_vec());
    }
    Ok(out)
}

/// Reconstructs every cell the data determines, row by row, each row as
/// wide as the primes allow (capped at m_max + p_max * n_max so lower rows
/// are wide enough for the requested window). Rows may have unequal
/// lengths; a row of length 0 ends the output.
fn reconstruct_full(
    data: &[RestrictionData],
    m_max: usize,
    n_max: usize,
) -> Result<Vec<Vec<Cyc>>> {
    if data.is_empty() {
        return Err(Error::config("no restriction data supplied"));
    }
    let cond = data
        .iter()
        .flat_map(|d| d.coeffs.first())
        .map(|c| c.conductor())
        .next()
        .ok_or_else(|| Error::config("empty restriction data"))?;
    for d in data {
        if !crate::exactmath::ff::is_prime_u64(d.p) {
            return Err(Error::config(format!("slope {} is not prime", d.p)));
        }
        if d.coeffs.iter().any(|c| c.conductor() != cond) {
            return Err(Error::config("mixed cyclotomic conductors in restriction data"));
        }
    }
    let p_max = data.iter().map(|d| d.p as usize).max().unwrap();
    let cap = m_max + p_max * n_max;
    let mut rows: Vec<Vec<Cyc>> = Vec::new();
    for n in 0..=n_max {
        let mut row: Vec<Cyc> = Vec::new();
        'cols: for m in 0..=cap {
            let mut value: Option<(u64, Cyc)> = None;
            for d in data {
                if d.p as usize <= m {
                    continue;
                }
                let s = m + (d.p as usize) * n;
                if s >= d.coeffs.len() {
                    continue;
                }
                let mut acc = d.coeffs[s].clone();
                let mut deps_ok = true;
                for j in 1..=n {
                    let col = m + (d.p as usize) * j;
                    let prev = &rows[n - j];
                    if col >= prev.len() {
                        deps_ok = false;
                        break;
                    }
                    acc = acc.sub(&prev[col]);
                }
                if !deps_ok {
                    continue;
                }
                match &value {
                    None => value = Some((d.p, acc)),
                    Some((_, v)) => {
                        if *v != acc {
                            return Err(Error::failed(format!(
                                "inconsistent restriction data at p = {}, s = {}",
                                d.p, s
                            )));
                        }
                    }
                }
            }
            match value {
                Some((_, v)) => row.push(v),
                None => break 'cols,
            }
        }
        if row.is_empty() {
            break;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::config(
            "need prime > 0 with matching coverage to reconstruct row 0",
        ));
    }
    Ok(rows)
}

/// Widths of the reconstructible rows: entry n is the number of leading
/// columns of row n the data determines.
pub fn reconstructible_window(data: &[RestrictionData], n_max: usize) -> Result<Vec<usize>> {
    let rows = reconstruct_full(data, 0, n_max)?;
    Ok(rows.iter().take(n_max + 1).map(|r| r.len()).collect())
}

/// Predicts the restriction coefficient C_p(s) of a reconstructed array
/// for a new slope p, when the whole diagonal m + p n = s lies inside the
/// computed window; None when the window does not cover it.
pub fn predicted_restriction(rows: &[Vec<Cyc>], cond: u32, p: u64, s: u64) -> Option<Cyc> {
    let mut acc = Cyc::zero(cond);
    let mut n = 0u64;
    loop {
        let rest = s.checked_sub(p * n);
        match rest {
            None => break,
            Some(m) => {
                let (m, n) = (m as usize, n as usize);
                if n >= rows.len() {
                    // Diagonal exits above the window: only admissible if
                    // the remaining cells are out of support, which cannot
                    // be certified here.
                    return None;
                }
                if m >= rows[n].len() {
                    return None;
                }
                acc = acc.add(&rows[n][m]);
            }
        }
        n += 1;
    }
    Some(acc)
}

/// Integer-grid restriction data of an optimal form, for feeding back into
/// the reconstruction.
pub fn lift_restrictions(
    f: &super::optform::OptForm,
    primes: &[u64],
    s_max: u64,
) -> Vec<RestrictionData> {
    primes
        .iter()
        .map(|&p| RestrictionData {
            p,
            coeffs: (0..=s_max).map(|s| f.diagonal_sum(p, s)).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::chars::characters_of_order;
    use crate::quadratic::forms::ClassGroup;
    use crate::quadratic::optform::{OptForm, OptKnobs};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn zeros(p: u64, len: usize) -> RestrictionData {
        RestrictionData {
            p,
            coeffs: vec![Cyc::zero(1); len],
        }
    }

    #[test]
    fn zero_data_reconstructs_zero() {
        let data = vec![zeros(7, 30), zeros(11, 30)];
        let rows = reconstruct_opt(&data, 3, 1).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert_eq!(row.len(), 4);
            assert!(row.iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn delta_at_zero_gives_constant_cell() {
        let mut d7 = zeros(7, 30);
        let mut d11 = zeros(11, 30);
        d7.coeffs[0] = Cyc::one(1);
        d11.coeffs[0] = Cyc::one(1);
        let rows = reconstruct_opt(&data_vec(d7, d11), 3, 1).unwrap();
        assert_eq!(rows[0][0], Cyc::one(1));
        for (n, row) in rows.iter().enumerate() {
            for (m, c) in row.iter().enumerate() {
                if (m, n) != (0, 0) {
                    assert!(c.is_zero(), "m={} n={}", m, n);
                }
            }
        }
    }

    fn data_vec(a: RestrictionData, b: RestrictionData) -> Vec<RestrictionData> {
        vec![a, b]
    }

    #[test]
    fn window_matches_prime_sizes() {
        let data = vec![zeros(7, 60), zeros(11, 60)];
        let w = reconstructible_window(&data, 3).unwrap();
        // Row 0 needs p > m: columns 0..=10. Row 1 peels through p = 7 and
        // needs row 0 at m + 7 <= 10: columns 0..=3. Row 2 is out of reach.
        assert_eq!(w, vec![11, 4]);
    }

    #[test]
    fn needs_large_prime() {
        let data = vec![zeros(7, 60)];
        assert!(reconstruct_opt(&data, 6, 0).is_ok());
        let err = reconstruct_opt(&data, 7, 0).unwrap_err();
        assert!(err.to_string().contains("need prime"), "{}", err);
    }

    #[test]
    fn inconsistent_data_reported() {
        let mut d7 = zeros(7, 30);
        d7.coeffs[1] = Cyc::one(1);
        let d11 = zeros(11, 30);
        let err = reconstruct_opt(&data_vec(d7, d11), 3, 0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("inconsistent") && msg.contains("s = 1"), "{}", msg);
    }

    #[test]
    fn composite_slope_rejected() {
        let data = vec![zeros(6, 30)];
        assert!(reconstruct_opt(&data, 1, 0).is_err());
    }

    #[test]
    fn roundtrip_with_optimal_form() {
        let g = ClassGroup::new(-23).unwrap();
        let chi = characters_of_order(&g, 3)[0].clone();
        let f = OptForm::new(&g, &chi, OptKnobs::default()).unwrap();
        let data = lift_restrictions(&f, &[7, 11], 25);
        let rows = reconstruct_opt(&data, 3, 1).unwrap();
        for n in 0..=1u64 {
            for m in 0..=3u64 {
                assert_eq!(
                    rows[n as usize][m as usize].coords(),
                    f.coeff(m, n).coords(),
                    "m={} n={}",
                    m,
                    n
                );
            }
        }
        // Row 1 contains a genuinely nonzero cell, so the roundtrip is not
        // vacuous.
        assert_eq!(
            rows[1][1].coords()[0],
            BigRational::from(BigInt::from(4))
        );
    }

    #[test]
    fn predicts_other_slopes() {
        let g = ClassGroup::new(-23).unwrap();
        let chi = characters_of_order(&g, 3)[0].clone();
        let f = OptForm::new(&g, &chi, OptKnobs::default()).unwrap();
        let data = lift_restrictions(&f, &[7, 11], 25);
        let rows = reconstruct_full(&data, 10, 1).unwrap();
        for p in [13u64, 17, 19] {
            for s in 0..=10u64 {
                let predicted = predicted_restriction(&rows, chi.order, p, s)
                    .expect("window covers diagonal");
                assert_eq!(
                    predicted.coords(),
                    f.diagonal_sum(p, s).coords(),
                    "p={} s={}",
                    p,
                    s
                );
            }
        }
    }
}
