//! Dense Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::arith::BigRational;

/// Row-reduces `rows` in place and returns the rank.
fn reduce(rows: &mut [Vec<BigRational>], cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let (pivot_row, row) = if r < rank {
                    let (a, b) = rows.split_at_mut(rank);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = rows.split_at_mut(r);
                    (&a[rank], &mut b[0])
                };
                for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= &factor * p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut work = rows.to_vec();
    reduce(&mut work, cols)
}

/// Solves the square or overdetermined system `a x = b`. Returns `None` if
/// the system is rank deficient or inconsistent.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let rank = reduce(&mut aug, cols);
    if rank < cols {
        return None;
    }
    if aug[rank..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some(aug[..cols].iter().map(|r| r[cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn solves_small_system() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        let b = vec![rat(3), rat(5)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![ratio(4, 5), ratio(7, 5)]);
    }

    #[test]
    fn detects_rank_deficiency_and_inconsistency() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(rank(&a), 1);
        assert!(solve(&a, &[rat(1), rat(2)]).is_none());
        let over = vec![vec![rat(1)], vec![rat(1)]];
        assert!(solve(&over, &[rat(1), rat(2)]).is_none());
        assert_eq!(solve(&over, &[rat(2), rat(2)]).unwrap(), vec![rat(2)]);
    }
}
