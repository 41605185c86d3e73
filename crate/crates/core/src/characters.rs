//! Dirichlet characters of (Z/nZ)^×, stored as exact exponent tables.
//!
//! The unit group is decomposed via CRT into cyclic factors: one per odd
//! prime power, plus ⟨−1⟩ × ⟨5⟩ for 2^e with e ≥ 3 (⟨−1⟩ for e = 2). A
//! character is a choice of exponent per generator; its value at `a` is
//! `e^{2πi k/L}` where `L` is the exponent of the group and `k` is kept as an
//! integer, so multiplicativity and orthogonality are exact identities.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::{factorize, mod_pow, primitive_root};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct CyclicFactor {
    /// Generator lifted to a residue mod n (≡ 1 on the other CRT components).
    generator: u64,
    order: u64,
}

/// A character of (Z/nZ)^× together with the primitive character inducing it.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    /// Values are e^{2πi k / exponent_base}.
    exponent_base: u64,
    /// Index by residue mod n; `None` where gcd(a, n) > 1.
    values: Vec<Option<u64>>,
    conductor: u64,
    /// Primitive character mod `conductor`, indexed by residue mod q.
    primitive: Vec<Option<u64>>,
    is_principal: bool,
    /// Exponent choices on the generators, in the order of the decomposition.
    label: Vec<u64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_principal(&self) -> bool {
        self.is_principal
    }

    pub fn label(&self) -> &[u64] {
        &self.label
    }

    pub fn exponent_base(&self) -> u64 {
        self.exponent_base
    }

    /// Exact value as an exponent k with χ(a) = e^{2πik/L}; `None` if
    /// gcd(a, n) > 1.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        self.values[a.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn value(&self, a: i64) -> Complex64 {
        match self.exponent(a) {
            Some(k) => unit_root(k, self.exponent_base),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Value of the inducing primitive character mod q.
    pub fn primitive_value(&self, b: i64) -> Complex64 {
        match self.primitive[b.rem_euclid(self.conductor as i64) as usize] {
            Some(k) => unit_root(k, self.exponent_base),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn primitive_exponent(&self, b: i64) -> Option<u64> {
        self.primitive[b.rem_euclid(self.conductor as i64) as usize]
    }

    /// True when χ(−1) = 1.
    pub fn is_even(&self) -> bool {
        self.exponent(-1) == Some(0)
    }
}

fn unit_root(k: u64, base: u64) -> Complex64 {
    // reduce to the smallest angle for accuracy
    let k = k % base;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == base {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == base {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * base {
        return Complex64::new(0.0, -1.0);
    }
    Complex64::from_polar(1.0, 2.0 * PI * (k as f64) / (base as f64))
}

fn check_modulus(n: u64) -> Result<()> {
    if n < 3 {
        return Err(Error::TooSmall(n));
    }
    if n % 4 == 2 {
        return Err(Error::NotNormalized { n, half: n / 2 });
    }
    Ok(())
}

/// Lift `x mod m` (with `m` one CRT component of `n`) to a residue mod `n`
/// that is 1 on every other component.
fn crt_lift(x: u64, m: u64, n: u64) -> u64 {
    let rest = n / m;
    (0..n)
        .find(|&r| r % m == x % m && r % rest == 1 % rest)
        .expect("CRT lift exists")
}

fn decomposition(n: u64) -> Vec<CyclicFactor> {
    let mut gens = Vec::new();
    for (p, e) in factorize(n) {
        let m = p.pow(e);
        if p == 2 {
            if e >= 2 {
                gens.push(CyclicFactor { generator: crt_lift(m - 1, m, n), order: 2 });
            }
            if e >= 3 {
                gens.push(CyclicFactor { generator: crt_lift(5, m, n), order: m / 4 });
            }
        } else {
            let g = primitive_root(m).expect("odd prime powers have primitive roots");
            gens.push(CyclicFactor { generator: crt_lift(g, m, n), order: m / p * (p - 1) });
        }
    }
    gens
}

/// Discrete logarithms of every unit mod n on the generator decomposition.
fn discrete_logs(n: u64, gens: &[CyclicFactor]) -> Vec<Option<Vec<u64>>> {
    let mut table = vec![None; n as usize];
    let mut exps = vec![0u64; gens.len()];
    loop {
        let r = gens
            .iter()
            .zip(&exps)
            .fold(1u64 % n, |acc, (g, &e)| acc * mod_pow(g.generator, e, n) % n);
        debug_assert!(table[r as usize].is_none());
        table[r as usize] = Some(exps.clone());
        // odometer increment
        let mut i = 0;
        loop {
            if i == gens.len() {
                return table;
            }
            exps[i] += 1;
            if exps[i] < gens[i].order {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// All φ(n) characters mod n, principal first, in lexicographic order of
/// their generator exponents.
pub fn enumerate_characters(n: u64) -> Result<Vec<DirichletCharacter>> {
    check_modulus(n)?;
    let gens = decomposition(n);
    let logs = discrete_logs(n, &gens);
    let base = gens.iter().fold(1u64, |acc, g| acc.lcm(&g.order));

    let mut out = Vec::new();
    let mut label = vec![0u64; gens.len()];
    loop {
        let values: Vec<Option<u64>> = logs
            .iter()
            .map(|l| {
                l.as_ref().map(|l| {
                    l.iter()
                        .zip(&label)
                        .zip(&gens)
                        .map(|((&x, &c), g)| x * c % g.order * (base / g.order))
                        .sum::<u64>()
                        % base
                })
            })
            .collect();
        out.push(finish_character(n, base, values, label.clone()));

        let mut i = 0;
        loop {
            if i == gens.len() {
                return Ok(out);
            }
            label[i] += 1;
            if label[i] < gens[i].order {
                break;
            }
            label[i] = 0;
            i += 1;
        }
    }
}

fn finish_character(n: u64, base: u64, values: Vec<Option<u64>>, label: Vec<u64>) -> DirichletCharacter {
    let is_principal = values.iter().all(|v| v.map_or(true, |k| k == 0));
    let divisors: Vec<u64> = (1..=n).filter(|q| n % q == 0).collect();
    let conductor = divisors
        .into_iter()
        .find(|&q| {
            (1..n).all(|a| a % q != 1 % q || values[a as usize].map_or(true, |k| k == 0))
        })
        .unwrap_or(n);
    let primitive = (0..conductor)
        .map(|b| {
            if b.gcd(&conductor) != 1 {
                return None;
            }
            // any unit mod n reducing to b mod q gives the same value
            (0..n / conductor)
                .map(|j| b + j * conductor)
                .find(|&a| a.gcd(&n) == 1)
                .and_then(|a| values[a as usize])
        })
        .collect();
    DirichletCharacter {
        modulus: n,
        exponent_base: base,
        values,
        conductor,
        primitive,
        is_principal,
        label,
    }
}
