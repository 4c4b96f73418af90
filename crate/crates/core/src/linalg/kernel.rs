//! Integer row echelon forms, Hermite normal form and integer kernels.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::intvec::IntVecFin;
use super::rational::{lcm_of_denominators, Int, Rational};

fn sub_multiple(target: &mut [Int], source: &[Int], q: &Int) {
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Brings `rows` to row echelon form with positive pivots using only
/// unimodular row operations, replaying each operation on `companion`.
/// Returns the pivot column of each nonzero row, in order.
pub fn echelonize(rows: &mut [Vec<Int>], companion: &mut [Vec<Int>]) -> Vec<usize> {
    debug_assert_eq!(rows.len(), companion.len());
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r >= rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(r, best);
            companion.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[r], &q);
                let (chead, ctail) = companion.split_at_mut(i);
                sub_multiple(&mut ctail[0], &chead[r], &q);
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                rows[r].iter_mut().for_each(|x| *x = -&*x);
                companion[r].iter_mut().for_each(|x| *x = -&*x);
            }
            pivots.push(col);
            r += 1;
        }
    }
    pivots
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut work = rows.to_vec();
    let mut scratch = vec![Vec::new(); work.len()];
    let pivots = echelonize(&mut work, &mut scratch);
    work.truncate(pivots.len());
    for (k, &c) in pivots.iter().enumerate() {
        for i in 0..k {
            let q = work[i][c].div_floor(&work[k][c]);
            if !q.is_zero() {
                let (head, tail) = work.split_at_mut(k);
                sub_multiple(&mut head[i], &tail[0], &q);
            }
        }
    }
    work
}

/// ℤ-basis of `{ν ∈ ℤⁿ : Mν = 0}` for a rational `m × n` matrix, in Hermite
/// normal form. Empty when the kernel is trivial.
pub fn integer_kernel(m: &[Vec<Rational>], n: usize) -> Vec<IntVecFin> {
    assert!(n >= 1, "integer_kernel needs at least one column");
    // Clear denominators row by row; the kernel is unchanged.
    let int_rows: Vec<Vec<Int>> = m
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n, "ragged matrix");
            let l = lcm_of_denominators(row);
            row.iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    // Column reduction: echelonize Mᵀ while tracking the unimodular U with
    // U·Mᵀ = [H; 0]. Rows of U past the rank are sent to zero, and since U
    // is unimodular they form a ℤ-basis of ker M.
    let mut transposed: Vec<Vec<Int>> = (0..n)
        .map(|j| int_rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let mut u: Vec<Vec<Int>> = (0..n)
        .map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect())
        .collect();
    let rank = if int_rows.is_empty() {
        0
    } else {
        echelonize(&mut transposed, &mut u).len()
    };
    let kernel_rows: Vec<Vec<Int>> = u[rank..].to_vec();
    hermite_normal_form(&kernel_rows)
        .iter()
        .map(|r| IntVecFin::from_dense(r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::{int, rat};

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    fn is_kernel_vector(m: &[Vec<Rational>], v: &IntVecFin) -> bool {
        m.iter().all(|r| v.dot_rational(r).is_zero())
    }

    #[test]
    fn kernel_of_six_three_two() {
        let m = vec![row(&[6, 3, 2])];
        let k = integer_kernel(&m, 3);
        assert_eq!(k.len(), 2);
        assert!(k.iter().all(|v| is_kernel_vector(&m, v)));
        // Hermite form of the lattice spanned by (1,-2,0) and (0,2,-3).
        assert_eq!(k[0], IntVecFin::from_dense(&[1, 0, -3]));
        assert_eq!(k[1], IntVecFin::from_dense(&[0, 2, -3]));
    }

    #[test]
    fn trivial_kernel() {
        let m = vec![row(&[1, 0]), row(&[0, 1])];
        assert!(integer_kernel(&m, 2).is_empty());
    }

    #[test]
    fn zero_map() {
        let m = vec![row(&[0, 0])];
        let k = integer_kernel(&m, 2);
        assert_eq!(k, vec![IntVecFin::unit(1), IntVecFin::unit(2)]);
        assert_eq!(integer_kernel(&[], 2), k);
    }

    #[test]
    fn rational_entries() {
        let m = vec![vec![rat(1, 1), rat(1, 2), rat(1, 4)]];
        let k = integer_kernel(&m, 3);
        assert_eq!(k.len(), 2);
        assert!(k.iter().all(|v| is_kernel_vector(&m, v)));
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let h = hermite_normal_form(&[vec![int(1), int(-2), int(0)], vec![int(0), int(2), int(-3)]]);
        assert_eq!(h, vec![vec![int(1), int(0), int(-3)], vec![int(0), int(2), int(-3)]]);
    }
}
