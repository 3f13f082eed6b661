//! Smith normal form against determinantal divisors: for an integer matrix
//! the product of the first k invariant factors is the gcd of all k×k minors.

use proptest::prelude::*;
use templex::matrix::{smith_normal_form, IntMatrix};

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of minors.
fn oracle_factors(rows: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut divisors = vec![1i128];
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| (w[1] / w[0]) as i64).collect()
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| {
        let entry = prop_oneof![2 => Just(0i64), 3 => -4i64..=4, 1 => -20i64..=20];
        prop::collection::vec(prop::collection::vec(entry, c), r)
    })
}

fn is_diagonal_chain(d: &IntMatrix, rank: usize) -> bool {
    for i in 0..d.nrows() {
        for j in 0..d.ncols() {
            let v = d.get(i, j);
            if i != j && v != 0 || i == j && (i < rank) != (v > 0) {
                return false;
            }
        }
    }
    (1..rank).all(|i| d.get(i, i) % d.get(i - 1, i - 1) == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_identities(rows in matrix()) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.checked_mul(&m).unwrap().checked_mul(&s.v).unwrap(), s.d.clone());
        prop_assert_eq!(s.u.checked_mul(&s.u_inv).unwrap(), IntMatrix::identity(m.nrows()));
        prop_assert_eq!(s.v.checked_mul(&s.v_inv).unwrap(), IntMatrix::identity(m.ncols()));
        prop_assert!(is_diagonal_chain(&s.d, s.rank));
    }

    #[test]
    fn factors_match_determinantal_divisors(rows in matrix()) {
        let s = smith_normal_form(&IntMatrix::from_rows(&rows)).unwrap();
        let want = oracle_factors(&rows);
        prop_assert_eq!(s.rank, want.len());
        prop_assert_eq!(s.invariant_factors(), want);
    }

    #[test]
    fn transpose_has_same_factors(rows in matrix()) {
        let m = IntMatrix::from_rows(&rows);
        let a = smith_normal_form(&m).unwrap();
        let b = smith_normal_form(&m.transpose()).unwrap();
        prop_assert_eq!(a.invariant_factors(), b.invariant_factors());
    }
}

#[test]
fn oracle_on_known_matrices() {
    assert_eq!(oracle_factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
    assert_eq!(oracle_factors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
    assert_eq!(oracle_factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
}

#[test]
fn overflow_is_reported() {
    let big = i64::MAX / 2;
    let m = IntMatrix::from_rows(&[[big, big - 1], [big - 1, big - 3]]);
    // either an exact answer or an overflow error, never a wrong one
    if let Ok(s) = smith_normal_form(&m) {
        let wide = |a: &IntMatrix| a.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect::<Vec<Vec<i128>>>();
        let mul = |a: &[Vec<i128>], b: &[Vec<i128>]| -> Vec<Vec<i128>> {
            a.iter().map(|r| (0..b[0].len()).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect()).collect()
        };
        assert_eq!(mul(&mul(&wide(&s.u), &wide(&m)), &wide(&s.v)), wide(&s.d));
    }
}
