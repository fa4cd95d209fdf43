//! Seeded random group elements for property checks and sampled suites.

use rand::Rng;

use super::pgl2::ProjectiveMatrix;

/// A random word of the given length in S, T, T⁻¹.
pub fn random_gamma<R: Rng + ?Sized>(rng: &mut R, word_len: usize) -> ProjectiveMatrix {
    let gens = ProjectiveMatrix::gamma_generators();
    (0..word_len).fold(ProjectiveMatrix::identity(), |acc, _| {
        acc.multiply(&gens[rng.gen_range(0..gens.len())])
    })
}

/// A random nonsingular integer matrix with entries in [−bound, bound].
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> ProjectiveMatrix {
    loop {
        let e: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        if e[0] * e[3] - e[1] * e[2] != 0 {
            return ProjectiveMatrix::from_i64(e);
        }
    }
}

/// A random positive-determinant element γ₁·h·γ₂ where h is an upper
/// triangular matrix of the given determinant.
pub fn random_of_determinant<R: Rng + ?Sized>(rng: &mut R, det: i64, word_len: usize) -> ProjectiveMatrix {
    let divisors: Vec<i64> = (1..=det).filter(|a| det % a == 0).collect();
    let a = divisors[rng.gen_range(0..divisors.len())];
    let d = det / a;
    let b = rng.gen_range(0..d.max(1));
    let h = ProjectiveMatrix::from_i64([a, b, 0, d]);
    random_gamma(rng, word_len).multiply(&h).multiply(&random_gamma(rng, word_len))
}
