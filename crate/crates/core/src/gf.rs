//! Arithmetic in odd-characteristic finite fields `GF(p^k)`.
//!
//! Elements are polynomials over `GF(p)` of degree `< k`, reduced modulo a
//! monic irreducible `modulus`. Only the small fields needed by the MUB
//! construction are exercised, so nothing here is tuned for speed; the
//! [`FieldTables`] cache turns a field into lookup tables once.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Parameters of `GF(p^k)`. Coefficient vectors are stored lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: usize,
    modulus: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn eval_poly(coeffs: &[u32], x: u32, p: u32) -> u32 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) as u32
}

impl FieldSpec {
    /// `GF(p^k)` with the given monic modulus of degree `k`.
    ///
    /// Irreducibility is checked exhaustively, which for degree ≤ 3 reduces to
    /// the absence of roots in `GF(p)`. Higher degrees are rejected.
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) || p < 3 {
            return Err(Error::Field(format!("characteristic {p} is not an odd prime")));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 {
            return Err(Error::Field("modulus must have degree ≥ 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::Field("modulus coefficients must lie in [0, p)".into()));
        }
        if modulus[k] != 1 {
            return Err(Error::Field("modulus must be monic".into()));
        }
        if k > 3 {
            return Err(Error::Field(format!(
                "irreducibility check only implemented for degree ≤ 3, got {k}"
            )));
        }
        if k > 1 {
            if let Some(root) = (0..p).find(|&x| eval_poly(&modulus, x, p) == 0) {
                return Err(Error::Field(format!(
                    "modulus {modulus:?} has root {root} in GF({p})"
                )));
            }
        }
        Ok(Self { p, k, modulus })
    }

    /// The prime field `GF(p)` (modulus `x`).
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    /// Field of order `q` with the default modulus: `x²+1` for 9, `x²+2` for 25.
    pub fn for_order(q: usize) -> Result<Self> {
        match q {
            9 => Self::new(3, vec![1, 0, 1]),
            25 => Self::new(5, vec![2, 0, 1]),
            q if q <= u32::MAX as usize && is_prime(q as u32) => Self::prime(q as u32),
            _ => Err(Error::Field(format!("no default field of order {q}"))),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.k as u32)
    }
}

/// A field element tied to its [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    coeffs: Vec<u32>,
}

impl FieldElement {
    /// Builds an element from coefficients (lowest degree first); missing
    /// high coefficients are zero, everything is reduced mod `p`.
    pub fn new(spec: &Arc<FieldSpec>, coeffs: &[u32]) -> Result<Self> {
        if coeffs.len() > spec.k {
            return Err(Error::Field(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                spec.k
            )));
        }
        let mut c: Vec<u32> = coeffs.iter().map(|&x| x % spec.p).collect();
        c.resize(spec.k, 0);
        Ok(Self {
            spec: Arc::clone(spec),
            coeffs: c,
        })
    }

    pub fn constant(spec: &Arc<FieldSpec>, value: u32) -> Self {
        Self::new(spec, &[value]).expect("k ≥ 1")
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Self {
        Self::constant(spec, 0)
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Self {
        Self::constant(spec, 1)
    }

    /// Element whose coefficients are the base-`p` digits of `index`.
    pub fn from_index(spec: &Arc<FieldSpec>, mut index: usize) -> Self {
        let p = spec.p as usize;
        let coeffs: Vec<u32> = (0..spec.k)
            .map(|_| {
                let d = index % p;
                index /= p;
                d as u32
            })
            .collect();
        Self {
            spec: Arc::clone(spec),
            coeffs,
        }
    }

    pub fn index(&self) -> usize {
        let p = self.spec.p as usize;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c as usize)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::Field(format!(
                "mismatched fields GF({}^{}) and GF({}^{})",
                self.spec.p, self.spec.k, other.spec.p, other.spec.k
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.spec.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Ok(Self {
            spec: Arc::clone(&self.spec),
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        let p = self.spec.p;
        Self {
            spec: Arc::clone(&self.spec),
            coeffs: self.coeffs.iter().map(|&a| (p - a) % p).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.spec.p as u64;
        let k = self.spec.k;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
            }
        }
        // reduce by the monic modulus, highest degree first
        let m = &self.spec.modulus;
        for deg in (k..prod.len()).rev() {
            let lead = prod[deg];
            if lead == 0 {
                continue;
            }
            for (t, &mc) in m.iter().enumerate().take(k) {
                let idx = deg - k + t;
                prod[idx] = (prod[idx] + (p - lead) * mc as u64) % p;
            }
            prod[deg] = 0;
        }
        Ok(Self {
            spec: Arc::clone(&self.spec),
            coeffs: prod[..k].iter().map(|&c| c as u32).collect(),
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^{q−2}`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Field("zero has no inverse".into()));
        }
        Ok(self.pow(self.spec.order() as u64 - 2))
    }

    /// Frobenius automorphism `a ↦ a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.spec.p as u64)
    }

    /// Absolute trace `Σ_{m<k} a^{p^m}` as an element of `GF(p)`.
    pub fn trace(&self) -> u32 {
        let mut term = self.clone();
        let mut acc = Self::zero(&self.spec);
        for _ in 0..self.spec.k {
            acc = acc.add(&term).expect("same field");
            term = term.frobenius();
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        acc.coeffs[0]
    }
}

pub fn gf_add(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.add(b)
}

pub fn gf_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.mul(b)
}

pub fn gf_trace(a: &FieldElement) -> u32 {
    a.trace()
}

/// Addition, multiplication and trace tables indexed by [`FieldElement::index`].
#[derive(Debug, Clone)]
pub struct FieldTables {
    pub order: usize,
    pub characteristic: u32,
    add: Vec<usize>,
    mul: Vec<usize>,
    trace: Vec<u32>,
}

impl FieldTables {
    pub fn new(spec: &Arc<FieldSpec>) -> Self {
        let q = spec.order();
        let elems: Vec<FieldElement> = (0..q).map(|i| FieldElement::from_index(spec, i)).collect();
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add[i * q + j] = a.add(b).expect("same field").index();
                mul[i * q + j] = a.mul(b).expect("same field").index();
            }
        }
        let trace = elems.iter().map(FieldElement::trace).collect();
        Self {
            order: q,
            characteristic: spec.p,
            add,
            mul,
            trace,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn trace(&self, a: usize) -> u32 {
        self.trace[a]
    }
}
