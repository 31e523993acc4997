//! Dirichlet characters modulo an odd prime, Gauss sums and the
//! cosine-twisted character sum.
//!
//! Characters are indexed by `j ∈ [0, p-2]` through the smallest primitive
//! root `g`: `χ_j(g^k) = e(jk/(p-1))`. Values are tabulated once from exact
//! integer phases, so `χ(a)χ(b) = χ(ab)` holds to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{ComplexSum, NeumaierSum};

/// Deterministic trial-division primality test; the moduli here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Rejects anything that is not an odd prime.
pub fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 0 {
        return Err(Error::EvenModulus(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest positive primitive root modulo the odd prime `p`.
pub fn primitive_root(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .ok_or(Error::NotPrime(p))
}

/// Inverse of `a` modulo `m` in `[1, m-1]`, by the extended Euclidean
/// algorithm.
pub fn modular_inverse(a: i64, m: i64) -> Result<i64> {
    if m <= 1 {
        return Err(Error::NotCoprime { a, m });
    }
    let (mut r0, mut r1) = (a.rem_euclid(m) as i128, m as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let quotient = r0 / r1;
        (r0, r1) = (r1, r0 - quotient * r1);
        (s0, s1) = (s1, s0 - quotient * s1);
    }
    if r0 != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    Ok(s0.rem_euclid(m as i128) as i64)
}

/// `e(k/n) = exp(2πi k/n)` with `k` reduced exactly before the angle is
/// formed; quarter turns are exact.
pub fn unit_root(k: i128, n: i128) -> Complex64 {
    let k = k.rem_euclid(n);
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    // symmetric representative keeps the angle in [-π, π]
    let centred = if 2 * k > n { k - n } else { k };
    let (s, c) = (2.0 * PI * centred as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

/// A Dirichlet character modulo an odd prime.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    values: Vec<Complex64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// `χ(-1)`: `+1` for even characters, `-1` for odd ones.
    pub fn parity(&self) -> i8 {
        if self.index % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    /// Every non-principal character modulo a prime is primitive.
    pub fn is_primitive(&self) -> bool {
        !self.is_principal()
    }

    /// Index of the conjugate character, `p - 1 - j` (mod `p - 1`).
    pub fn conjugate_index(&self) -> u64 {
        (self.modulus - 1 - self.index) % (self.modulus - 1)
    }

    pub fn conj(&self) -> DirichletCharacter {
        DirichletCharacter {
            modulus: self.modulus,
            index: self.conjugate_index(),
            values: self.values.iter().map(Complex64::conj).collect(),
        }
    }

    /// Whether `χ` takes only real values (principal or quadratic).
    pub fn is_real(&self) -> bool {
        self.conjugate_index() == self.index
    }

    pub fn eval(&self, a: i64) -> Complex64 {
        self.values[a.rem_euclid(self.modulus as i64) as usize]
    }

    /// Values indexed by residue `0..p`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// All `p - 1` characters modulo `p`, ordered by index.
#[derive(Debug, Clone)]
pub struct CharacterFamily {
    modulus: u64,
    primitive_root: u64,
    characters: Vec<DirichletCharacter>,
}

impl CharacterFamily {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn primitive_root(&self) -> u64 {
        self.primitive_root
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn principal(&self) -> &DirichletCharacter {
        &self.characters[0]
    }

    pub fn get(&self, index: u64) -> Option<&DirichletCharacter> {
        self.characters.get(index as usize)
    }

    /// Even non-principal (hence primitive) characters, by index.
    pub fn even_primitive(&self) -> impl Iterator<Item = &DirichletCharacter> {
        self.characters
            .iter()
            .filter(|c| c.is_even() && !c.is_principal())
    }
}

/// Enumerates the character group modulo the odd prime `p`.
pub fn enumerate_characters(p: u64) -> Result<CharacterFamily> {
    check_odd_prime(p)?;
    let g = primitive_root(p)?;
    let order = p - 1;
    let mut discrete_log = vec![0u64; p as usize];
    let mut power = 1u64;
    for k in 0..order {
        discrete_log[power as usize] = k;
        power = power * g % p;
    }
    let characters = (0..order)
        .map(|j| {
            let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
            for a in 1..p {
                let phase = (j * discrete_log[a as usize]) % order;
                values[a as usize] = unit_root(phase as i128, order as i128);
            }
            DirichletCharacter {
                modulus: p,
                index: j,
                values,
            }
        })
        .collect();
    Ok(CharacterFamily {
        modulus: p,
        primitive_root: g,
        characters,
    })
}

/// `τ(χ) = Σ_{a mod p} e(a/p) χ(a)`.
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let p = chi.modulus as i128;
    let mut acc = ComplexSum::new();
    for a in 1..p {
        acc.add(unit_root(a, p) * chi.values[a as usize]);
    }
    acc.value()
}

/// `Σ*_{r mod p} cos(2πr/p) χ̄(r)`: zero for odd `χ`, `τ(χ̄)` for even
/// non-principal `χ`, and `-1` for the principal character.
pub fn cosine_twisted_sum(chi: &DirichletCharacter) -> Complex64 {
    let p = chi.modulus as i128;
    let mut acc = ComplexSum::new();
    for r in 1..p {
        acc.add(chi.values[r as usize].conj() * unit_root(r, p).re);
    }
    acc.value()
}

/// `max_{a,b ≠ 0} |Σ_χ χ(a) χ̄(b) - (p-1)[a ≡ b]|`.
pub fn orthogonality_residual(p: u64) -> Result<f64> {
    let family = enumerate_characters(p)?;
    let mut worst = 0.0f64;
    for a in 1..p as usize {
        for b in 1..p as usize {
            let mut re = NeumaierSum::new();
            let mut im = NeumaierSum::new();
            for chi in family.characters() {
                let z = chi.values[a] * chi.values[b].conj();
                re.add(z.re);
                im.add(z.im);
            }
            let expect = if a == b { (p - 1) as f64 } else { 0.0 };
            worst = worst.max(Complex64::new(re.value() - expect, im.value()).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes_and_roots() {
        assert!(is_prime(101));
        assert!(!is_prime(91));
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(41).unwrap(), 6);
        assert_eq!(primitive_root(9), Err(Error::NotPrime(9)));
    }

    #[test]
    fn enumerate_small_families() {
        let f3 = enumerate_characters(3).unwrap();
        assert_eq!(f3.len(), 2);
        assert_eq!(f3.characters()[1].parity(), -1);
        assert_eq!(f3.characters()[1].eval(2), Complex64::new(-1.0, 0.0));

        let f5 = enumerate_characters(5).unwrap();
        assert_eq!(f5.primitive_root(), 2);
        assert_eq!(f5.len(), 4);
        let even: Vec<u64> = f5.characters().iter().filter(|c| c.is_even()).map(|c| c.index()).collect();
        assert_eq!(even, vec![0, 2]);
        // χ_2 is the Legendre symbol mod 5
        let legendre = [0.0, 1.0, -1.0, -1.0, 1.0];
        for a in 0..5 {
            assert_eq!(f5.characters()[2].eval(a), Complex64::new(legendre[a as usize], 0.0));
        }
    }

    #[test]
    fn enumerate_rejects_bad_moduli() {
        assert_eq!(enumerate_characters(9).unwrap_err(), Error::NotPrime(9));
        assert_eq!(enumerate_characters(2).unwrap_err(), Error::EvenModulus(2));
        assert_eq!(enumerate_characters(1).unwrap_err(), Error::NotPrime(1));
    }

    #[test]
    fn zero_exactly_on_multiples() {
        let f = enumerate_characters(11).unwrap();
        for chi in f.characters() {
            assert_eq!(chi.eval(0), Complex64::new(0.0, 0.0));
            assert_eq!(chi.eval(-22), Complex64::new(0.0, 0.0));
            for a in 1..11 {
                assert!((chi.eval(a).norm() - 1.0).abs() < 1e-15);
            }
            assert_eq!(chi.eval(-1), Complex64::new(chi.parity() as f64, 0.0));
        }
    }

    #[test]
    fn conjugation_maps_index() {
        let f = enumerate_characters(13).unwrap();
        for chi in f.characters() {
            let bar = chi.conj();
            assert_eq!(&bar, f.get(bar.index()).unwrap());
        }
        assert_eq!(f.principal().conj().index(), 0);
    }

    #[test]
    fn parity_counts() {
        for p in [3u64, 5, 7, 11, 13, 31, 101] {
            let f = enumerate_characters(p).unwrap();
            let even = f.characters().iter().filter(|c| c.is_even()).count();
            let odd = f.characters().iter().filter(|c| !c.is_even()).count();
            assert_eq!(even as u64, (p - 1) / 2);
            assert_eq!(odd as u64, (p - 1) / 2);
            assert_eq!(f.even_primitive().count() as u64, (p - 1) / 2 - 1);
        }
    }

    #[test]
    fn gauss_sums() {
        let f = enumerate_characters(5).unwrap();
        assert!((gauss_sum(f.principal()) + 1.0).norm() < 1e-15);
        // direct five-term oracle for the Legendre symbol mod 5
        let oracle: Complex64 = [(1, 1.0), (2, -1.0), (3, -1.0), (4, 1.0)]
            .iter()
            .map(|&(a, s)| Complex64::from_polar(s, 2.0 * PI * a as f64 / 5.0))
            .sum();
        let tau = gauss_sum(&f.characters()[2]);
        assert!((tau - oracle).norm() < 1e-15);
        assert!((tau - 5f64.sqrt()).norm() < 1e-12);
    }

    #[test]
    fn gauss_sum_modulus_for_primitive() {
        for p in [3u64, 7, 29, 101] {
            for chi in enumerate_characters(p).unwrap().characters().iter().skip(1) {
                assert!((gauss_sum(chi).norm_sqr() - p as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cosine_twisted_three_cases() {
        for p in [3u64, 5, 7, 11, 13, 47, 101] {
            for chi in enumerate_characters(p).unwrap().characters() {
                let s = cosine_twisted_sum(chi);
                let expect = if chi.is_principal() {
                    Complex64::new(-1.0, 0.0)
                } else if chi.is_even() {
                    gauss_sum(&chi.conj())
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((s - expect).norm() < 1e-12, "p = {p}, j = {}", chi.index());
            }
        }
        let f7 = enumerate_characters(7).unwrap();
        assert!(cosine_twisted_sum(&f7.characters()[1]).norm() < 1e-13);
        let f11 = enumerate_characters(11).unwrap();
        assert!((cosine_twisted_sum(f11.principal()) + 1.0).norm() < 1e-13);
    }

    #[test]
    fn orthogonality() {
        assert!(orthogonality_residual(3).unwrap() <= 1e-13);
        assert!(orthogonality_residual(13).unwrap() <= 1e-12);
        assert!(orthogonality_residual(101).unwrap() <= 1e-11);
    }

    #[test]
    fn inverses() {
        assert_eq!(modular_inverse(3, 5).unwrap(), 2);
        assert_eq!(modular_inverse(5, 3).unwrap(), 2);
        let brute = (1..31).find(|x| 7 * x % 31 == 1).unwrap();
        assert_eq!(modular_inverse(7, 31).unwrap(), brute);
        assert_eq!(brute, 9);
        assert_eq!(modular_inverse(-2, 7).unwrap(), 3);
        assert_eq!(modular_inverse(6, 9), Err(Error::NotCoprime { a: 6, m: 9 }));
    }

    proptest! {
        #[test]
        fn multiplicativity(p_idx in 0usize..6, a in 1i64..1000, b in 1i64..1000) {
            let p = [3u64, 5, 7, 11, 13, 101][p_idx];
            prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
            let f = enumerate_characters(p).unwrap();
            for chi in f.characters() {
                let d = (chi.eval(a) * chi.eval(b) - chi.eval(a * b)).norm();
                prop_assert!(d <= 1e-14);
            }
        }

        #[test]
        fn inverse_is_inverse(a in -10_000i64..10_000, m_idx in 0usize..5) {
            let m = [7i64, 31, 97, 1009, 65537][m_idx];
            prop_assume!(a % m != 0);
            let x = modular_inverse(a, m).unwrap();
            prop_assert!((1..m).contains(&x));
            prop_assert_eq!((a as i128 * x as i128).rem_euclid(m as i128), 1);
        }
    }
}
