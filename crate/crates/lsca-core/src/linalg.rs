//! Exact linear algebra over the rationals for the bounded-degree solvers.
//!
//! Systems are assembled by coefficient matching and solved by fraction-free
//! (Bareiss) elimination on the integer matrix obtained after clearing
//! denominators, followed by exact rational back-substitution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Row-echelon form via fraction-free elimination. Returns, per pivot row,
/// the pivot column index. The matrix is modified in place.
fn bareiss_echelon(mat: &mut [Vec<BigInt>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        // Pick the first nonzero entry in this column at or below `row`.
        let Some(pr) = (row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, pr);
        for r in row + 1..rows {
            for c in col + 1..cols {
                let num = &mat[row][col] * &mat[r][c] - &mat[r][col] * &mat[row][c];
                debug_assert!((&num % &prev).is_zero(), "fraction-free division not exact");
                mat[r][c] = num / &prev;
            }
            mat[r][col] = BigInt::zero();
        }
        prev = mat[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for q in row {
        let den = q.denom();
        let g = num_integer::gcd(lcm.clone(), den.clone());
        lcm = lcm / g * den;
    }
    row.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

/// Result of an exact affine solve `A u = b`.
pub struct AffineSolution {
    /// A particular solution with every free coordinate set to zero.
    pub particular: Vec<BigRational>,
    /// A basis of the homogeneous solution space, one vector per free
    /// column, in column order.
    pub nullspace: Vec<Vec<BigRational>>,
}

/// Solves `A u = b` exactly. Returns `None` when the system is
/// inconsistent. With `b = 0` the particular solution is the zero vector and
/// `nullspace` is a basis of the kernel.
pub fn solve_affine(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    cols: usize,
) -> Option<AffineSolution> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row/rhs length mismatch");
    debug_assert!(a.iter().all(|r| r.len() == cols));
    if rows == 0 {
        return Some(AffineSolution {
            particular: vec![BigRational::zero(); cols],
            nullspace: (0..cols)
                .map(|j| {
                    let mut v = vec![BigRational::zero(); cols];
                    v[j] = BigRational::one();
                    v
                })
                .collect(),
        });
    }
    // Augmented integer matrix.
    let mut mat: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            clear_denominators(&row)
        })
        .collect();
    let pivots = bareiss_echelon(&mut mat);
    // A pivot in the augmented column means the system is inconsistent.
    if pivots.last() == Some(&cols) {
        return None;
    }
    let rank = pivots.len();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &pivots {
            v[c] = true;
        }
        v
    };
    let free_cols: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();

    // Back-substitution for a given assignment of the free coordinates.
    let back_solve = |free_vals: &dyn Fn(usize) -> BigRational, with_rhs: bool| {
        let mut sol = vec![BigRational::zero(); cols];
        for &c in &free_cols {
            sol[c] = free_vals(c);
        }
        for i in (0..rank).rev() {
            let pc = pivots[i];
            let mut acc = if with_rhs {
                BigRational::from_integer(mat[i][cols].clone())
            } else {
                BigRational::zero()
            };
            for c in pc + 1..cols {
                if !mat[i][c].is_zero() {
                    acc -= BigRational::from_integer(mat[i][c].clone()) * &sol[c];
                }
            }
            sol[pc] = acc / BigRational::from_integer(mat[i][pc].clone());
        }
        sol
    };

    let particular = back_solve(&|_| BigRational::zero(), true);
    let nullspace = free_cols
        .iter()
        .map(|&fc| {
            back_solve(
                &move |c| {
                    if c == fc {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                },
                false,
            )
        })
        .collect();
    Some(AffineSolution {
        particular,
        nullspace,
    })
}

/// Kernel basis of a homogeneous system.
pub fn nullspace(a: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let rhs = vec![BigRational::zero(); a.len()];
    solve_affine(a, &rhs, cols)
        .expect("homogeneous systems are always consistent")
        .nullspace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn solves_unique_system() {
        // x + y = 3, x - y = 1 -> x = 2, y = 1.
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let b = vec![int(3), int(1)];
        let sol = solve_affine(&a, &b, 2).unwrap();
        assert_eq!(sol.particular, vec![int(2), int(1)]);
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        let b = vec![int(1), int(3)];
        assert!(solve_affine(&a, &b, 2).is_none());
    }

    #[test]
    fn nullspace_dimension_and_membership() {
        // x + y + z = 0 has a 2-dimensional kernel.
        let a = vec![vec![int(1), int(1), int(1)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: BigRational = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn rational_coefficients_are_exact() {
        // (1/2)x + (1/3)y = 5/6 with y free.
        let a = vec![vec![rat(1, 2), rat(1, 3)]];
        let b = vec![rat(5, 6)];
        let sol = solve_affine(&a, &b, 2).unwrap();
        assert_eq!(sol.particular, vec![rat(5, 3), int(0)]);
        assert_eq!(sol.nullspace.len(), 1);
        let v = &sol.nullspace[0];
        assert!((rat(1, 2) * &v[0] + rat(1, 3) * &v[1]).is_zero());
    }
}
