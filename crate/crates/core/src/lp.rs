//! Exact rational feasibility for `A x = b, x ≥ 0`.
//!
//! Dense phase-one simplex over `BigRational` with Bland's smallest-index
//! rule, which cannot cycle. Sizes here are a few hundred rows at most.

use num::{BigRational, One, Signed, Zero};

/// Returns a nonnegative solution of `A x = b`, or `None` if there is none.
///
/// Panics if the rows of `a` do not all have the same length as the number of
/// variables `cols`, or if `b` and `a` disagree on the number of rows.
pub fn feasible_point(a: &[Vec<BigRational>], b: &[BigRational], cols: usize) -> Option<Vec<BigRational>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let rows = a.len();
    if rows == 0 {
        return Some(vec![BigRational::zero(); cols]);
    }
    // Columns: originals, then one artificial per row, then the right-hand side.
    let width = cols + rows + 1;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for (r, (row, rhs)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), cols, "row {r} has the wrong length");
        let flip = rhs.is_negative();
        let mut line = Vec::with_capacity(width);
        line.extend(row.iter().map(|x| if flip { -x } else { x.clone() }));
        line.extend((0..rows).map(|k| if k == r { BigRational::one() } else { BigRational::zero() }));
        line.push(if flip { -rhs } else { rhs.clone() });
        tab.push(line);
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Reduced costs of the phase-one objective (sum of artificials), negated
    // so that a negative entry marks an improving column.
    let mut cost = vec![BigRational::zero(); width];
    for line in &tab {
        for (c, x) in line.iter().enumerate().take(cols) {
            cost[c] -= x;
        }
        cost[width - 1] -= &line[width - 1];
    }

    // Bland: entering column is the smallest index with negative reduced cost.
    while let Some(enter) = (0..cols + rows).find(|&c| cost[c].is_negative()) {
        // Ratio test; ties broken by smallest basic variable index.
        let mut leave: Option<(usize, BigRational)> = None;
        for (r, line) in tab.iter().enumerate() {
            if !line[enter].is_positive() {
                continue;
            }
            let ratio = &line[width - 1] / &line[enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            // Unbounded below cannot happen for a sum of nonnegative artificials.
            unreachable!("phase-one objective is bounded below by zero");
        };
        pivot(&mut tab, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &var) in basis.iter().enumerate() {
        if var < cols {
            x[var] = tab[r][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(tab: &mut [Vec<BigRational>], cost: &mut [BigRational], pr: usize, pc: usize) {
    let inv = tab[pr][pc].recip();
    for x in tab[pr].iter_mut() {
        if !x.is_zero() {
            *x *= &inv;
        }
    }
    let pivot_line = tab[pr].clone();
    let nonzero: Vec<usize> = (0..pivot_line.len()).filter(|&c| !pivot_line[c].is_zero()).collect();
    let eliminate = |line: &mut Vec<BigRational>| {
        let factor = line[pc].clone();
        if factor.is_zero() {
            return;
        }
        for &c in &nonzero {
            let delta = &factor * &pivot_line[c];
            line[c] -= delta;
        }
    };
    for (r, line) in tab.iter_mut().enumerate() {
        if r != pr {
            eliminate(line);
        }
    }
    let mut cost_line = cost.to_vec();
    eliminate(&mut cost_line);
    cost.clone_from_slice(&cost_line);
}
