//! Seeded random lattices.
//!
//! Every trial draws from its own ChaCha stream, keyed by the suite, the
//! dimension and the trial number, so results do not depend on scheduling.

use minkowski::centering::sub_basis_for_rows;
use minkowski::exactlin::{apply_transform, determinant_int, inverse, Matrix};
use minkowski::tables::centering_classes;
use minkowski::{CoordVector, GramMatrix, Rational, UnimodularTransform};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream tags keep the suites independent of each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Theorem = 1,
    Tammela = 2,
    Dim2 = 3,
    Voronoi = 4,
    Centering = 5,
    Invariance = 6,
}

pub fn trial_rng(seed: u64, stream: Stream, dim: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << 56) | ((dim as u64) << 40) | trial as u64);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// `TᵀDT`: integer diagonal `D` in `[1, 10]`, `T` a product of `3n`
    /// elementary column operations with coefficients in `[-3, 3]`.
    Conjugated,
    /// `BᵀB` for a random integer matrix `B` with entries in `[-r, r]`.
    Dense(i64),
    /// A random table centering of a nearly cubic lattice, conjugated as in
    /// `Conjugated`. These have many minimum vectors.
    Centered,
    /// One of `Conjugated`, `Dense(20)` and `Centered`, chosen uniformly.
    Mixed,
}

impl Model {
    pub fn sample(self, rng: &mut ChaCha8Rng, n: usize) -> GramMatrix {
        match self {
            Model::Conjugated => conjugated_form(rng, n),
            Model::Dense(r) => dense_form(rng, n, r),
            Model::Centered => centered_form(rng, n),
            Model::Mixed => match rng.gen_range(0..3) {
                0 => conjugated_form(rng, n),
                1 => dense_form(rng, n, 20),
                _ => centered_form(rng, n),
            },
        }
    }

    pub fn name(self) -> String {
        match self {
            Model::Conjugated => "conjugated".into(),
            Model::Dense(r) => format!("dense:{r}"),
            Model::Centered => "centered".into(),
            Model::Mixed => "mixed".into(),
        }
    }

    pub fn parse(s: &str) -> Option<Model> {
        match s {
            "conjugated" => Some(Model::Conjugated),
            "centered" => Some(Model::Centered),
            "mixed" => Some(Model::Mixed),
            _ => s
                .strip_prefix("dense:")
                .and_then(|r| r.parse::<i64>().ok())
                .filter(|r| *r > 0)
                .map(Model::Dense),
        }
    }
}

/// Product of `steps` operations `col_j += c · col_i`, `c` in `[-max, max]`.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize, max: i64) -> UnimodularTransform {
    let mut t: Matrix<BigInt> = Matrix::identity(n);
    if n < 2 {
        return UnimodularTransform::new(t).expect("identity");
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-max..=max));
        for r in 0..n {
            let v = &t[(r, i)] * &c;
            t[(r, j)] += v;
        }
    }
    UnimodularTransform::new(t).expect("product of elementary operations")
}

pub fn conjugated_form(rng: &mut ChaCha8Rng, n: usize) -> GramMatrix {
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rng.gen_range(1..=10) } else { 0 }).collect())
        .collect();
    let d = GramMatrix::from_integer_rows(&rows).expect("positive diagonal");
    let t = random_unimodular(rng, n, 3 * n, 3);
    apply_transform(&d, &t).expect("square")
}

/// `k·I` plus sparse `±1` noise with `k` in `[n, n + 3]`, so diagonally
/// dominant; often exactly cubic.
fn nearly_cubic(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
    let k = rng.gen_range(n as i64..=n as i64 + 3);
    let mut m: Matrix<Rational> = Matrix::zeros(n, n);
    let noisy = rng.gen_bool(0.5);
    for i in 0..n {
        m[(i, i)] = Rational::from_integer(k.into());
        for j in 0..i {
            if noisy && rng.gen_bool(0.3) {
                let v = Rational::from_integer(if rng.gen_bool(0.5) { 1 } else { -1 }.into());
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
    }
    m
}

pub fn centered_form(rng: &mut ChaCha8Rng, n: usize) -> GramMatrix {
    let classes = centering_classes(n).expect("dimension 2..=6");
    let class = &classes[rng.gen_range(0..classes.len())];
    let rows: Vec<Vec<Rational>> = class
        .relevant_rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    // S has the sublattice basis as columns; the superlattice Gram is S⁻ᵀ G₀ S⁻¹
    let s = sub_basis_for_rows(n, &rows).expect("table rows");
    let s = Matrix::from_cols(
        &s.iter()
            .map(|c| c.as_slice().iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect::<Vec<_>>(),
    );
    let s_inv = inverse(&s).expect("nonsingular");
    let g0 = nearly_cubic(rng, n);
    let g = GramMatrix::new(s_inv.transpose().mul(&g0).mul(&s_inv)).expect("positive definite");
    let t = random_unimodular(rng, n, 3 * n, 3);
    apply_transform(&g, &t).expect("square")
}

pub fn dense_form(rng: &mut ChaCha8Rng, n: usize, r: i64) -> GramMatrix {
    loop {
        let b: Matrix<Rational> = Matrix::from_fn(n, n, |_, _| Rational::from_integer(rng.gen_range(-r..=r).into()));
        if let Ok(g) = GramMatrix::new(b.transpose().mul(&b)) {
            return g;
        }
    }
}

/// Nonsingular sublattice basis of `Z^n` with entries in `[-r, r]` and index
/// at most `max_index`.
pub fn random_sublattice(rng: &mut ChaCha8Rng, n: usize, r: i64, max_index: u64) -> Vec<CoordVector> {
    loop {
        let cols: Vec<CoordVector> = (0..n)
            .map(|_| CoordVector::new((0..n).map(|_| rng.gen_range(-r..=r)).collect()))
            .collect();
        let m = Matrix::from_cols(&cols.iter().map(CoordVector::to_bigints).collect::<Vec<_>>());
        let det = determinant_int(&m);
        if det != BigInt::from(0) && det.magnitude() <= &max_index.into() {
            return cols;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a = Model::Conjugated.sample(&mut trial_rng(5, Stream::Theorem, 4, 17), 4);
        let b = Model::Conjugated.sample(&mut trial_rng(5, Stream::Theorem, 4, 17), 4);
        let c = Model::Conjugated.sample(&mut trial_rng(5, Stream::Theorem, 4, 18), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn conjugation_keeps_the_determinant_of_d() {
        let mut rng = trial_rng(1, Stream::Theorem, 3, 0);
        let g = conjugated_form(&mut rng, 3);
        let det = g.determinant();
        assert!(det >= Rational::from_integer(1.into()) && det <= Rational::from_integer(1000.into()));
    }

    #[test]
    fn centered_forms_have_many_minima() {
        use minkowski::enumeration::lattice_minimum;
        let mut most = 0;
        for t in 0..20 {
            let g = centered_form(&mut trial_rng(3, Stream::Theorem, 6, t), 6);
            most = most.max(lattice_minimum(&g).unwrap().1.len());
        }
        assert!(most > 6);
    }

    #[test]
    fn model_names_round_trip() {
        for m in [Model::Conjugated, Model::Dense(7), Model::Centered, Model::Mixed] {
            assert_eq!(Model::parse(&m.name()), Some(m));
        }
        assert_eq!(Model::parse("dense:0"), None);
    }

    #[test]
    fn sublattices_respect_the_index_cap() {
        let mut rng = trial_rng(2, Stream::Centering, 5, 0);
        for _ in 0..20 {
            let s = random_sublattice(&mut rng, 5, 2, 500);
            let m = Matrix::from_cols(&s.iter().map(CoordVector::to_bigints).collect::<Vec<_>>());
            let det = determinant_int(&m);
            assert!(det != BigInt::from(0) && det.magnitude() <= &500u32.into());
        }
    }
}
