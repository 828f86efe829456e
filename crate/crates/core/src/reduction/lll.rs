use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlin::{round_div, GramMatrix, Matrix, Rational, UnimodularTransform};

/// LLL-reduced form in integer Gram-Schmidt representation.
pub(crate) struct LllOutput {
    pub gram: GramMatrix,
    pub transform: UnimodularTransform,
    pub swaps: usize,
}

/// Integral LLL on the scaled Gram matrix (Cohen, Algorithm 2.6.7).
///
/// `d[i]` is the Gram determinant of the first `i` vectors and
/// `lambda[k][j] = d[j+1] * mu[k][j]`; both stay integral throughout.
pub(crate) fn lll_integral(g: &GramMatrix, delta: &Rational) -> Result<LllOutput> {
    check_delta(delta)?;
    let n = g.dim();
    let (p, q) = (delta.numer().clone(), delta.denom().clone());
    let mut b: Matrix<BigInt> = g.scaled().clone();
    let mut h: Matrix<BigInt> = Matrix::identity(n);
    let mut lambda: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    let mut d: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut swaps = 0usize;
    if n == 0 {
        return Ok(LllOutput {
            gram: g.clone(),
            transform: UnimodularTransform::identity(0),
            swaps,
        });
    }
    d[0] = BigInt::one();
    d[1] = b[(0, 0)].clone();
    let mut k = 1usize;
    let mut k_max = 0usize;
    while k < n {
        if k > k_max {
            k_max = k;
            for j in 0..=k {
                let mut u = b[(k, j)].clone();
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lambda[k][i] * &lambda[j][i]) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    debug_assert!(u.is_positive(), "positive definite input");
                    d[k + 1] = u;
                }
            }
        }
        loop {
            size_reduce(k, k - 1, &mut b, &mut h, &mut lambda, &d);
            let lhs = &q * &d[k + 1] * &d[k - 1];
            let rhs = &p * &d[k] * &d[k] - &q * &lambda[k][k - 1] * &lambda[k][k - 1];
            if lhs < rhs {
                swap(k, k_max, &mut b, &mut h, &mut lambda, &mut d);
                swaps += 1;
                if k > 1 {
                    k -= 1;
                }
            } else {
                break;
            }
        }
        for l in (0..k.saturating_sub(1)).rev() {
            size_reduce(k, l, &mut b, &mut h, &mut lambda, &d);
        }
        k += 1;
    }
    Ok(LllOutput {
        gram: GramMatrix::from_scaled(b, g.denom().clone()),
        transform: UnimodularTransform::new_unchecked(h),
        swaps,
    })
}

pub(crate) fn check_delta(delta: &Rational) -> Result<()> {
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    if *delta <= quarter || *delta > Rational::one() {
        return Err(Error::InvalidDelta(delta.clone()));
    }
    Ok(())
}

fn size_reduce(
    k: usize,
    l: usize,
    b: &mut Matrix<BigInt>,
    h: &mut Matrix<BigInt>,
    lambda: &mut [Vec<BigInt>],
    d: &[BigInt],
) {
    let two_abs = lambda[k][l].abs() * 2;
    if two_abs <= d[l + 1] {
        return;
    }
    let r = round_div(&lambda[k][l], &d[l + 1]);
    let n = b.rows();
    for i in 0..n {
        let t = &h[(i, l)] * &r;
        h[(i, k)] -= t;
    }
    for j in 0..n {
        let t = &b[(l, j)] * &r;
        b[(k, j)] -= t;
    }
    for j in 0..n {
        let t = &b[(j, l)] * &r;
        b[(j, k)] -= t;
    }
    let t = &r * &d[l + 1];
    lambda[k][l] -= t;
    for i in 0..l {
        let t = &r * &lambda[l][i];
        lambda[k][i] -= t;
    }
}

fn swap(
    k: usize,
    k_max: usize,
    b: &mut Matrix<BigInt>,
    h: &mut Matrix<BigInt>,
    lambda: &mut [Vec<BigInt>],
    d: &mut [BigInt],
) {
    h.swap_cols(k, k - 1);
    b.swap_rows(k, k - 1);
    b.swap_cols(k, k - 1);
    for j in 0..k - 1 {
        let t = std::mem::take(&mut lambda[k][j]);
        lambda[k][j] = std::mem::replace(&mut lambda[k - 1][j], t);
    }
    let lam = lambda[k][k - 1].clone();
    let big = (&d[k - 1] * &d[k + 1] + &lam * &lam) / &d[k];
    for i in k + 1..=k_max {
        let t = lambda[i][k].clone();
        let new_ik = (&d[k + 1] * &lambda[i][k - 1] - &lam * &t) / &d[k];
        let new_ik1 = (&big * &t + &lam * &new_ik) / &d[k + 1];
        lambda[i][k] = new_ik;
        lambda[i][k - 1] = new_ik1;
    }
    debug_assert!((&d[k - 1] * &d[k + 1] + &lam * &lam).is_multiple_of(&d[k]));
    d[k] = big;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{apply_transform, rat};

    fn g(rows: &[&[i64]]) -> GramMatrix {
        GramMatrix::from_integer_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// Textbook rational LLL on the Gram matrix, recomputing Gram-Schmidt data
    /// from scratch after every change.
    fn naive_lll(form: &GramMatrix, delta: &Rational) -> Matrix<Rational> {
        let n = form.dim();
        let mut gm = form.entries().clone();
        let gs = |gm: &Matrix<Rational>| -> (Vec<Vec<Rational>>, Vec<Rational>) {
            let mut mu = vec![vec![Rational::zero(); n]; n];
            let mut bstar = vec![Rational::zero(); n];
            for i in 0..n {
                for j in 0..i {
                    let mut s = gm[(i, j)].clone();
                    for k in 0..j {
                        s -= &mu[i][k] * &mu[j][k] * &bstar[k];
                    }
                    mu[i][j] = s / &bstar[j];
                }
                let mut s = gm[(i, i)].clone();
                for k in 0..i {
                    s -= &mu[i][k] * &mu[i][k] * &bstar[k];
                }
                bstar[i] = s;
            }
            (mu, bstar)
        };
        let mut k = 1;
        while k < n {
            for j in (0..k).rev() {
                let (mu, _) = gs(&gm);
                if mu[k][j].abs() <= rat(1, 2) {
                    continue;
                }
                let r = (&mu[k][j] + rat(1, 2)).floor();
                for c in 0..n {
                    let t = &gm[(j, c)] * &r;
                    gm[(k, c)] -= t;
                }
                for c in 0..n {
                    let t = &gm[(c, j)] * &r;
                    gm[(c, k)] -= t;
                }
            }
            let (mu, bstar) = gs(&gm);
            let lhs = &bstar[k];
            let rhs = (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bstar[k - 1];
            if *lhs < rhs {
                gm.swap_rows(k, k - 1);
                gm.swap_cols(k, k - 1);
                k = k.saturating_sub(1).max(1);
            } else {
                k += 1;
            }
        }
        gm
    }

    fn is_lll_reduced(form: &GramMatrix, delta: &Rational) -> bool {
        let ldl = form.ldl();
        let n = form.dim();
        let half = rat(1, 2);
        for i in 0..n {
            for j in 0..i {
                if ldl.l[(i, j)].abs() > half {
                    return false;
                }
            }
        }
        (1..n).all(|k| ldl.d[k] >= (delta - &ldl.l[(k, k - 1)] * &ldl.l[(k, k - 1)]) * &ldl.d[k - 1])
    }

    #[test]
    fn identity_unchanged() {
        let out = lll_integral(&GramMatrix::identity(4), &rat(3, 4)).unwrap();
        assert!(out.transform.is_identity());
        assert_eq!(out.swaps, 0);
    }

    #[test]
    fn small_example() {
        let form = g(&[&[4, 3], &[3, 5]]);
        let out = lll_integral(&form, &rat(3, 4)).unwrap();
        assert!(*out.gram.diag(0) <= rat(4, 1));
        // the Lovász condition holds with equality, so no swap happens
        assert_eq!(out.gram, g(&[&[4, -1], &[-1, 3]]));
        assert_eq!(apply_transform(&form, &out.transform).unwrap(), out.gram);
    }

    #[test]
    fn agrees_with_naive_rational_lll() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let n = 2 + trial % 4;
            let b = Matrix::from_fn(n, n, |_, _| Rational::from_integer(rng.gen_range(-9i64..=9).into()));
            let Ok(form) = GramMatrix::new(b.transpose().mul(&b)) else {
                continue;
            };
            let delta = if trial % 2 == 0 { rat(3, 4) } else { rat(99, 100) };
            let out = lll_integral(&form, &delta).unwrap();
            assert_eq!(&naive_lll(&form, &delta), out.gram.entries(), "trial {trial}");
            assert!(is_lll_reduced(&out.gram, &delta));
            assert_eq!(apply_transform(&form, &out.transform).unwrap(), out.gram);
        }
    }

    #[test]
    fn rejects_bad_delta() {
        let form = GramMatrix::identity(2);
        assert!(lll_integral(&form, &rat(1, 4)).is_err());
        assert!(lll_integral(&form, &rat(11, 10)).is_err());
        assert!(lll_integral(&form, &rat(1, 1)).is_ok());
    }
}
