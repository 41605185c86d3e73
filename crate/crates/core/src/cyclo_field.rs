//! Exact arithmetic in Q(ζ_n) and its Minkowski embedding under the trace
//! form q(x) = Tr(x x̄).
//!
//! Elements are stored as rational coefficient vectors on the power basis
//! 1, ζ, …, ζ^{d−1} modulo the cyclotomic polynomial Φ_n. Only one complex
//! embedding per conjugate pair is kept; each contributes `2|σ_j(x)|²` to
//! the trace form, so `K ⊗ R` is realified with a factor √2 per coordinate.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{euler_phi, factorize, mobius, ramanujan_sum};
use crate::error::{Error, Result};

/// Immutable descriptor of K = Q(ζ_n), n ≥ 3, n ≢ 2 (mod 4).
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    n: u64,
    degree: usize,
    r2: usize,
    phi_coeffs: Vec<BigInt>,
    embeddings: Vec<u64>,
    abs_disc: BigUint,
    /// x^k mod Φ_n for k = 0..n, as integer coefficient vectors of length d.
    power_table: Vec<Vec<i64>>,
    /// e^{2πik/n} for k = 0..n.
    roots: Vec<Complex64>,
}

impl CyclotomicField {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooSmall(n));
        }
        if n % 4 == 2 {
            return Err(Error::NotNormalized { n, half: n / 2 });
        }
        let degree = euler_phi(n) as usize;
        let phi_coeffs = cyclotomic_polynomial(n);
        let embeddings: Vec<u64> = (1..n)
            .filter(|a| 2 * a < n && a.gcd(&n) == 1)
            .collect();
        debug_assert_eq!(embeddings.len() * 2, degree);

        let power_table = build_power_table(n, &phi_coeffs);
        let roots = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * (k as f64) / (n as f64)))
            .collect();

        Ok(Self {
            n,
            degree,
            r2: degree / 2,
            phi_coeffs,
            embeddings,
            abs_disc: discriminant_closed_form(n),
            power_table,
            roots,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn r2(&self) -> usize {
        self.r2
    }

    /// Coefficients of Φ_n, constant term first.
    pub fn phi_coeffs(&self) -> &[BigInt] {
        &self.phi_coeffs
    }

    /// Exponents a_j, one per conjugate pair, ascending with 0 < a_j < n/2.
    pub fn embeddings(&self) -> &[u64] {
        &self.embeddings
    }

    pub fn abs_disc(&self) -> &BigUint {
        &self.abs_disc
    }

    pub fn abs_disc_f64(&self) -> f64 {
        self.abs_disc.to_f64().unwrap_or(f64::INFINITY)
    }

    /// ln |Δ_K| computed from the factorization, exact up to rounding.
    pub fn log_abs_disc(&self) -> f64 {
        let d = self.degree as f64;
        let mut l = d * (self.n as f64).ln();
        for (p, _) in factorize(self.n) {
            l -= d / (p as f64 - 1.0) * (p as f64).ln();
        }
        l
    }

    /// Number of roots of unity in K: n for even n, 2n for odd n.
    pub fn torsion_order(&self) -> u64 {
        if self.n % 2 == 0 {
            self.n
        } else {
            2 * self.n
        }
    }

    /// e^{2πik/n}.
    pub fn root_of_unity(&self, k: i64) -> Complex64 {
        self.roots[k.rem_euclid(self.n as i64) as usize]
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![BigRational::zero(); self.degree] }
    }

    pub fn one(&self) -> FieldElement {
        self.zeta_power(0)
    }

    /// ζ^k reduced to the power basis.
    pub fn zeta_power(&self, k: i64) -> FieldElement {
        let row = &self.power_table[k.rem_euclid(self.n as i64) as usize];
        FieldElement::from_ints(row)
    }

    pub fn element(&self, coeffs: &[i64]) -> Result<FieldElement> {
        self.check_len(coeffs.len())?;
        Ok(FieldElement::from_ints(coeffs))
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got });
        }
        Ok(())
    }

    /// Reduce an arbitrary-length coefficient vector modulo Φ_n using x^n = 1.
    fn reduce(&self, long: &[BigRational]) -> FieldElement {
        let n = self.n as usize;
        let mut folded = vec![BigRational::zero(); n];
        for (k, c) in long.iter().enumerate() {
            if !c.is_zero() {
                folded[k % n] += c;
            }
        }
        let mut out = vec![BigRational::zero(); self.degree];
        for (k, c) in folded.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &t) in self.power_table[k].iter().enumerate() {
                if t != 0 {
                    out[j] += c * BigRational::from_integer(BigInt::from(t));
                }
            }
        }
        FieldElement { coeffs: out }
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree;
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        self.reduce(&prod)
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self, x: &FieldElement) -> FieldElement {
        let n = self.n as usize;
        let mut long = vec![BigRational::zero(); n];
        for (k, c) in x.coeffs.iter().enumerate() {
            long[(n - k) % n] += c;
        }
        self.reduce(&long)
    }

    /// Exact trace Tr_{K/Q}(x) via Ramanujan sums.
    pub fn trace(&self, x: &FieldElement) -> BigRational {
        x.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(ramanujan_sum(self.n, k as i64))))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Exact trace form Tr(x x̄).
    pub fn trace_form(&self, x: &FieldElement) -> BigRational {
        self.trace(&self.mul(x, &self.conj(x)))
    }

    /// Exact norm N_{K/Q}(x) as the resultant Res(Φ_n, x).
    pub fn norm(&self, x: &FieldElement) -> BigRational {
        let phi: Vec<BigRational> = self
            .phi_coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        resultant(&phi, &x.coeffs)
    }

    /// σ_j(x) = Σ_k c_k e^{2πi a_j k/n} for each embedding exponent a_j.
    pub fn embed(&self, x: &FieldElement) -> EmbeddedVector {
        let coeffs: Vec<f64> = x.coeffs.iter().map(rational_to_f64).collect();
        self.embed_f64(&coeffs)
    }

    pub fn embed_f64(&self, coeffs: &[f64]) -> EmbeddedVector {
        let components = self
            .embeddings
            .iter()
            .map(|&a| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| self.root_of_unity((a as i64) * (k as i64)) * c)
                    .sum()
            })
            .collect();
        EmbeddedVector { components }
    }

    /// Gram matrix of the trace form on `basis`, evaluated through the
    /// embeddings.
    pub fn gram_matrix(&self, basis: &[FieldElement]) -> Result<DMatrix<f64>> {
        if basis.len() != self.degree {
            return Err(Error::DimensionMismatch { expected: self.degree, got: basis.len() });
        }
        for b in basis {
            self.check_len(b.coeffs.len())?;
        }
        let emb: Vec<EmbeddedVector> = basis.iter().map(|b| self.embed(b)).collect();
        let d = self.degree;
        Ok(DMatrix::from_fn(d, d, |i, j| emb[i].inner(&emb[j])))
    }

    /// The power basis 1, ζ, …, ζ^{d−1} of O_K.
    pub fn power_basis(&self) -> Vec<FieldElement> {
        (0..self.degree as i64).map(|k| self.zeta_power(k)).collect()
    }
}

/// Shorthand for [`CyclotomicField::new`].
pub fn create_field(n: u64) -> Result<CyclotomicField> {
    CyclotomicField::new(n)
}

/// Exact rational coefficients on the power basis of Q(ζ_n).
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    coeffs: Vec<BigRational>,
}

impl FieldElement {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self {
            coeffs: coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn from_rationals(coeffs: Vec<BigRational>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

/// Images σ_j(x) under one embedding per conjugate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedVector {
    pub components: Vec<Complex64>,
}

impl EmbeddedVector {
    /// q(x) = 2 Σ_j |σ_j(x)|².
    pub fn q(&self) -> f64 {
        2.0 * self.components.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Trace-form inner product Tr(x ȳ) = 2 Re Σ_j σ_j(x) conj(σ_j(y)).
    pub fn inner(&self, other: &EmbeddedVector) -> f64 {
        2.0 * self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a * b.conj()).re)
            .sum::<f64>()
    }

    /// ∏_j |σ_j(x)|², the absolute norm.
    pub fn norm_product(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).product()
    }

    /// Real coordinates (√2 Re z_j, √2 Im z_j) so that the Euclidean inner
    /// product equals the trace form.
    pub fn realify(&self) -> Vec<f64> {
        let s = std::f64::consts::SQRT_2;
        self.components
            .iter()
            .flat_map(|z| [s * z.re, s * z.im])
            .collect()
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Φ_n with integer coefficients, constant term first, via
/// Φ_n = (x^n − 1) / ∏_{d | n, d < n} Φ_d.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    // Möbius product ∏_{d|n} (x^d − 1)^{μ(n/d)}: multiply the positive
    // factors, then divide by the negative ones (exact over Z).
    let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for &d in &divisors {
        let mu = mobius(n / d);
        if mu == 0 {
            continue;
        }
        let mut factor = vec![BigInt::zero(); d as usize + 1];
        factor[0] = -BigInt::one();
        factor[d as usize] = BigInt::one();
        if mu > 0 {
            num = poly_mul_int(&num, &factor);
        } else {
            den = poly_mul_int(&den, &factor);
        }
    }
    poly_div_exact_int(&num, &den)
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division of integer polynomials where the divisor has leading
/// coefficient ±1.
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = den[dl - 1].clone();
    let mut quot = vec![BigInt::zero(); num.len() - dl + 1];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dl - 1] / &lead;
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn build_power_table(n: u64, phi: &[BigInt]) -> Vec<Vec<i64>> {
    let d = phi.len() - 1;
    let phi: Vec<i64> = phi.iter().map(|c| c.to_i64().expect("small Φ_n coefficient")).collect();
    let mut table = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; d];
    cur[0] = 1;
    for _ in 0..n {
        table.push(cur.clone());
        // multiply by x, then reduce x^d = −Σ φ_k x^k (Φ_n is monic)
        let top = cur[d - 1];
        for k in (1..d).rev() {
            cur[k] = cur[k - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for k in 0..d {
                cur[k] -= top * phi[k];
            }
        }
    }
    table
}

/// |Δ| = n^{φ(n)} / ∏_{p | n} p^{φ(n)/(p−1)}.
pub fn discriminant_closed_form(n: u64) -> BigUint {
    let phi = euler_phi(n);
    let mut num = BigUint::from(n).pow(phi as u32);
    for (p, _) in factorize(n) {
        let den = BigUint::from(p).pow((phi / (p - 1)) as u32);
        debug_assert!((&num % &den).is_zero());
        num /= den;
    }
    num
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().map_or(false, Zero::is_zero) {
        p.pop();
    }
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1].clone() / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        r.pop();
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    r
}

/// Resultant of two polynomials over Q by the Euclidean algorithm.
pub fn resultant(f: &[BigRational], g: &[BigRational]) -> BigRational {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    let mut acc = BigRational::one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if b.len() == 1 {
            if b[0].is_zero() {
                return BigRational::zero();
            }
            // Res(a, c) = c^{deg a}
            return acc * num_traits::pow(b[0].clone(), da);
        }
        if a.len() == 1 {
            if a[0].is_zero() {
                return BigRational::zero();
            }
            return acc * num_traits::pow(a[0].clone(), db);
        }
        let r = poly_rem(&a, &b);
        if r.len() == 1 && r[0].is_zero() {
            return BigRational::zero();
        }
        let dr = r.len() - 1;
        // Res(a, b) = (−1)^{da·db} lc(b)^{da − dr} Res(b, r)
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b[db].clone(), da - dr);
        a = b;
        b = r;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;
    use proptest::prelude::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn create_field_examples() {
        let k4 = create_field(4).unwrap();
        assert_eq!((k4.degree(), k4.r2()), (2, 1));
        assert_eq!(k4.abs_disc(), &big(4));

        let k15 = create_field(15).unwrap();
        assert_eq!((k15.degree(), k15.r2()), (8, 4));
        assert_eq!(k15.abs_disc(), &big(1_265_625));

        assert_eq!(create_field(6).unwrap_err(), Error::NotNormalized { n: 6, half: 3 });
        assert_eq!(create_field(2).unwrap_err(), Error::TooSmall(2));
        assert!(create_field(6).unwrap_err().to_string().contains("n = 3"));
    }

    #[test]
    fn discriminant_two_ways() {
        for n in (3..=90u64).filter(|n| n % 4 != 2) {
            let k = create_field(n).unwrap();
            let prod = enumerate_characters(n)
                .unwrap()
                .iter()
                .fold(big(1), |acc, chi| acc * big(chi.conductor()));
            assert_eq!(&prod, k.abs_disc(), "n = {n}");
        }
    }

    #[test]
    fn phi_divides_x_n_minus_one() {
        for n in [3u64, 5, 8, 12, 15, 16, 21, 36, 84] {
            let k = create_field(n).unwrap();
            let mut xn = vec![BigInt::zero(); n as usize + 1];
            xn[0] = -BigInt::one();
            xn[n as usize] = BigInt::one();
            let q = poly_div_exact_int(&xn, k.phi_coeffs());
            assert_eq!(poly_mul_int(&q, k.phi_coeffs()), xn);
        }
    }

    #[test]
    fn mul_examples() {
        let k = create_field(4).unwrap();
        let i = k.zeta_power(1);
        assert_eq!(k.mul(&i, &i), k.element(&[-1, 0]).unwrap());
        let x = k.element(&[3, -7]).unwrap();
        assert_eq!(k.mul(&x, &k.one()), x);
    }

    #[test]
    fn norm_examples() {
        let k5 = create_field(5).unwrap();
        let one_minus_zeta = k5.element(&[1, -1, 0, 0]).unwrap();
        assert_eq!(k5.norm(&one_minus_zeta), BigRational::from_integer(5.into()));
        assert_eq!(k5.norm(&k5.one()), BigRational::one());
        for n in [5u64, 12, 16] {
            let k = create_field(n).unwrap();
            assert_eq!(k.norm(&k.zeta_power(1)), BigRational::one());
        }
    }

    #[test]
    fn embed_examples() {
        for n in [5u64, 8, 15] {
            let k = create_field(n).unwrap();
            let e1 = k.embed(&k.one());
            assert!(e1.components.iter().all(|z| (z - 1.0).norm() < 1e-15));
            assert!((e1.q() - k.degree() as f64).abs() < 1e-12);
            let ez = k.embed(&k.zeta_power(1));
            assert!(ez.components.iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
            assert!((ez.q() - k.degree() as f64).abs() < 1e-12);
        }
        let k4 = create_field(4).unwrap();
        let g = k4.gram_matrix(&k4.power_basis()).unwrap();
        assert!((g[(0, 0)] - 2.0).abs() < 1e-14 && (g[(1, 1)] - 2.0).abs() < 1e-14);
        assert!(g[(0, 1)].abs() < 1e-14);
        assert!((g.determinant() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gram_examples() {
        let k5 = create_field(5).unwrap();
        let g = k5.gram_matrix(&k5.power_basis()).unwrap();
        let covol = g.determinant().sqrt();
        assert!((covol / 125f64.sqrt() - 1.0).abs() < 1e-6);

        let c = 3i64;
        let scaled: Vec<FieldElement> = k5
            .power_basis()
            .iter()
            .map(|b| b.scale(&BigRational::from_integer(c.into())))
            .collect();
        let gs = k5.gram_matrix(&scaled).unwrap();
        let ratio = gs.determinant() / g.determinant();
        assert!((ratio / (c as f64).powi(8) - 1.0).abs() < 1e-10);

        assert_eq!(
            k5.gram_matrix(&k5.power_basis()[..3]).unwrap_err(),
            Error::DimensionMismatch { expected: 4, got: 3 }
        );
    }

    #[test]
    fn covolume_of_ring_of_integers() {
        for n in crate::arakelov::DEFAULT_ALLOWLIST.iter().copied().filter(|&n| n <= 40) {
            let k = create_field(n).unwrap();
            let g = k.gram_matrix(&k.power_basis()).unwrap();
            let chol = g.clone().cholesky().expect("positive definite");
            let log_det: f64 = chol.l().diagonal().iter().map(|x| 2.0 * x.ln()).sum();
            let log_covol = 0.5 * log_det;
            assert!((log_covol - 0.5 * k.log_abs_disc()).abs() < 1e-8, "n = {n}");
        }
    }

    fn small_element(d: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-10i64..=10, d)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn associativity(x in small_element(8), y in small_element(8), z in small_element(8)) {
            let k = create_field(15).unwrap();
            let (x, y, z) = (k.element(&x).unwrap(), k.element(&y).unwrap(), k.element(&z).unwrap());
            prop_assert_eq!(k.mul(&k.mul(&x, &y), &z), k.mul(&x, &k.mul(&y, &z)));
        }

        #[test]
        fn norm_matches_embedding_product(x in small_element(8), n in prop::sample::select(vec![15u64, 16, 20, 24])) {
            let k = create_field(n).unwrap();
            let x = k.element(&x).unwrap();
            let exact = rational_to_f64(&k.norm(&x));
            let float = k.embed(&x).norm_product();
            if exact == 0.0 {
                prop_assert!(float < 1e-9);
            } else {
                prop_assert!((float / exact - 1.0).abs() < 1e-9, "exact {} float {}", exact, float);
            }
        }

        #[test]
        fn trace_form_matches_embedding(x in small_element(8)) {
            let k = create_field(16).unwrap();
            let x = k.element(&x).unwrap();
            let exact = rational_to_f64(&k.trace_form(&x));
            let q = k.embed(&x).q();
            prop_assert!(q >= 0.0);
            if x.is_zero() {
                prop_assert!(q < 1e-12);
            } else {
                prop_assert!(q > 1e-12);
                prop_assert!((q / exact - 1.0).abs() < 1e-9);
            }
        }

        #[test]
        fn bilinearity(x in small_element(4), y in small_element(4), z in small_element(4)) {
            let k = create_field(5).unwrap();
            let (x, y, z) = (k.element(&x).unwrap(), k.element(&y).unwrap(), k.element(&z).unwrap());
            let (ex, ey, ez) = (k.embed(&x), k.embed(&y), k.embed(&z));
            let exy = k.embed(&(&x + &y));
            prop_assert!((exy.inner(&ez) - ex.inner(&ez) - ey.inner(&ez)).abs() < 1e-10);
        }
    }
}
