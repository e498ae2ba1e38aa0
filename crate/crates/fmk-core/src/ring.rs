//! Exact arithmetic in O_K = Z[theta] for K the maximal real subfield of the
//! p-th cyclotomic field, theta = zeta_p + zeta_p^{-1}.
//!
//! Elements are coordinate vectors in the power basis 1, theta, ...,
//! theta^{n-1} (n = (p-1)/2) with exact rational coordinates; integral
//! elements are exactly those with all-integer coordinates, because the power
//! basis is an integral basis for these fields.
//!
//! The module provides:
//! * construction of the minimal polynomial of theta by the Chebyshev-style
//!   recursion theta_0 = 2, theta_1 = x, theta_{j+1} = x theta_j - theta_{j-1}
//!   (no floating point anywhere);
//! * ring arithmetic, norms via resultants, exact division through inversion
//!   modulo the minimal polynomial;
//! * prime-ideal factorisation of rational primes with residue-field
//!   arithmetic, deterministic ideal ordering, and exact valuations computed
//!   by cofactor-strip division;
//! * the Galois action, the unit/ideal norm checks, and the 2-adic binomial
//!   congruence verifier used by the reduction analysis at primes above 2.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fq::{self, ResidueField};
use crate::polys;
use crate::{Int, Rat};

/// The field K = Q(zeta_p + zeta_p^{-1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicField {
    p: u64,
    degree: usize,
    /// Monic integer minimal polynomial of theta, little-endian, length n+1.
    minpoly: Vec<Int>,
}

/// Element of K in the power basis of theta; length always equals the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    pub coeffs: Vec<Rat>,
}

/// A prime ideal of O_K above the rational prime q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeIdealData {
    pub q: u64,
    /// Monic irreducible factor of the minimal polynomial mod q.
    pub gen_poly: Vec<u64>,
    /// Residue degree.
    pub f: usize,
    /// Ramification index (1 unless q = p).
    pub e: usize,
    /// Position among the primes above q, in lexicographic gen_poly order.
    pub index: usize,
    /// Lift of (minpoly mod q)/gen_poly evaluated at theta; multiplying by
    /// this and dividing by q strips exactly one power of the ideal.
    #[serde(skip)]
    strip_coeffs: Vec<Int>,
}

/// Element of the residue field O_K / ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueElement {
    pub field: ResidueField,
    pub rep: Vec<u64>,
}

impl PrimeIdealData {
    /// Coefficients of the cofactor element used by the valuation strip loop.
    pub fn strip_coeffs(&self) -> &[Int] {
        &self.strip_coeffs
    }
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// All coordinates integral, i.e. the element lies in O_K.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Non-theta coordinates all zero.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Integer coordinates, if integral.
    pub fn integer_coeffs(&self) -> Option<Vec<Int>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    /// Least common multiple of coordinate denominators (positive).
    pub fn denominator(&self) -> Int {
        let mut d = Int::one();
        for c in &self.coeffs {
            d = d.lcm(c.denom());
        }
        d
    }
}

impl CyclotomicField {
    /// Build the field for an odd prime p >= 5.
    ///
    /// The minimal polynomial is assembled as 1 + sum_{j=1..n} theta_j(x)
    /// with the theta recursion, which expands prod_j (x - theta_j) exactly;
    /// irreducibility is certified by factor-degree analysis modulo small
    /// primes.
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || !is_prime_u64(p) {
            return Err(Error::InvalidArgument(format!(
                "p must be an odd prime >= 5, got {p}"
            )));
        }
        let n = ((p - 1) / 2) as usize;
        let mut acc = vec![Int::one()];
        let mut prev = vec![Int::from(2)];
        let mut cur = vec![Int::zero(), Int::one()];
        for _j in 1..=n {
            acc = polys::add_int(&acc, &cur);
            let next = polys::sub_int(&polys::shift_int(&cur), &prev);
            prev = std::mem::replace(&mut cur, next);
        }
        let mut minpoly = acc;
        minpoly.resize(n + 1, Int::zero());
        debug_assert!(minpoly[n].is_one());
        let field = CyclotomicField {
            p,
            degree: n,
            minpoly,
        };
        field.certify_irreducible()?;
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minpoly(&self) -> &[Int] {
        &self.minpoly
    }

    /// Rule out proper factors of every degree 1..n/2 by intersecting the
    /// possible factor-degree sums modulo several small primes.
    fn certify_irreducible(&self) -> Result<()> {
        let n = self.degree;
        if n == 1 {
            return Ok(());
        }
        let mut feasible: Vec<bool> = vec![true; n / 2 + 1];
        let mut certified = false;
        for q in small_primes(200) {
            if q == self.p {
                continue;
            }
            let fm: Vec<u64> = self
                .minpoly
                .iter()
                .map(|c| c.mod_floor(&Int::from(q)).to_u64().unwrap())
                .collect();
            let fm = fq::ptrim(fm);
            if fm.len() != n + 1 {
                continue;
            }
            // need squarefree reduction for degree analysis
            if fq::pgcd(&fm, &fq::pderiv(&fm, q), q).len() > 1 {
                continue;
            }
            let degs: Vec<usize> = fq::factor_squarefree_monic(&fm, q)?
                .iter()
                .map(|g| g.len() - 1)
                .collect();
            // subset sums of factor degrees
            let mut sums = vec![false; n + 1];
            sums[0] = true;
            for d in degs {
                for s in (0..=n - d).rev() {
                    if sums[s] {
                        sums[s + d] = true;
                    }
                }
            }
            for (d, slot) in feasible.iter_mut().enumerate() {
                if d >= 1 && !sums[d] {
                    *slot = false;
                }
            }
            if feasible.iter().skip(1).all(|&b| !b) {
                certified = true;
                break;
            }
        }
        if certified {
            Ok(())
        } else {
            Err(Error::Internal(format!(
                "could not certify irreducibility of the degree-{n} minimal polynomial"
            )))
        }
    }

    // -- element constructors -------------------------------------------------

    pub fn zero(&self) -> RingElement {
        RingElement {
            coeffs: vec![Rat::zero(); self.degree],
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_int(Int::one())
    }

    pub fn from_int(&self, c: Int) -> RingElement {
        let mut e = self.zero();
        e.coeffs[0] = Rat::from(c);
        e
    }

    pub fn from_i64(&self, c: i64) -> RingElement {
        self.from_int(Int::from(c))
    }

    pub fn from_rat(&self, c: Rat) -> RingElement {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    pub fn from_int_coeffs(&self, coeffs: &[Int]) -> RingElement {
        assert!(coeffs.len() <= self.degree);
        let mut e = self.zero();
        for (i, c) in coeffs.iter().enumerate() {
            e.coeffs[i] = Rat::from(c.clone());
        }
        e
    }

    /// theta_j = zeta^j + zeta^{-j} for 1 <= j <= n, by the recursion
    /// theta_0 = 2, theta_1 = theta, theta_{j+1} = theta * theta_j - theta_{j-1}.
    pub fn theta(&self, j: usize) -> Result<RingElement> {
        if j < 1 || j > self.degree {
            return Err(Error::InvalidArgument(format!(
                "theta index {j} out of range 1..={}",
                self.degree
            )));
        }
        let mut prev = self.from_i64(2);
        let mut cur = self.generator();
        for _ in 1..j {
            let next = self.sub(&self.mul(&cur, &self.generator()), &prev);
            prev = std::mem::replace(&mut cur, next);
        }
        Ok(cur)
    }

    /// theta itself.
    pub fn generator(&self) -> RingElement {
        let mut e = self.zero();
        if self.degree > 1 {
            e.coeffs[1] = Rat::one();
        } else {
            unreachable!("degree >= 2 for p >= 5");
        }
        e
    }

    // -- arithmetic -----------------------------------------------------------

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        RingElement {
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, a: &RingElement, c: &Rat) -> RingElement {
        RingElement {
            coeffs: a.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let prod = polys::mul_rat(&a.coeffs, &b.coeffs);
        self.reduce_poly(prod)
    }

    pub fn pow(&self, a: &RingElement, mut e: u64) -> RingElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Fold a polynomial of arbitrary degree into the power basis.
    fn reduce_poly(&self, mut poly: Vec<Rat>) -> RingElement {
        let n = self.degree;
        while poly.len() > n {
            let top = poly.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            // top is the coefficient of x^L with L = poly.len() >= n;
            // x^L = -x^(L-n) * (minpoly - x^n)
            let d = poly.len() - n;
            for i in 0..n {
                let m = &top * Rat::from(self.minpoly[i].clone());
                poly[d + i] -= m;
            }
        }
        poly.resize(n, Rat::zero());
        RingElement { coeffs: poly }
    }

    /// Field norm N_{K/Q} as the resultant of the minimal polynomial with the
    /// element polynomial; multiplicative, integer-valued on O_K.
    pub fn norm(&self, a: &RingElement) -> Rat {
        if a.is_zero() {
            return Rat::zero();
        }
        let f = polys::int_to_rat(&self.minpoly);
        let g = polys::trim_rat(a.coeffs.clone());
        polys::resultant_rat(&f, &g)
    }

    /// Norm of an integral element as an exact integer.
    pub fn norm_int(&self, a: &RingElement) -> Result<Int> {
        let n = self.norm(a);
        if !n.is_integer() {
            return Err(Error::Internal("norm of integral element not integral".into()));
        }
        Ok(n.to_integer())
    }

    /// a / b in K. The result carries whatever denominators the quotient has;
    /// integrality can be queried on the result.
    pub fn exact_div(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = polys::int_to_rat(&self.minpoly);
        let g = polys::trim_rat(b.coeffs.clone());
        let (gcd, _s, t) = polys::ext_gcd_rat(&f, &g);
        if gcd.len() != 1 {
            return Err(Error::Internal(
                "minimal polynomial shares a factor with a non-zero element".into(),
            ));
        }
        // t*g = 1 mod f, so t(theta) = b^{-1}
        let inv = self.reduce_poly(t);
        Ok(self.mul(a, &inv))
    }

    /// Apply the automorphism zeta |-> zeta^t, i.e. theta_j |-> theta_{fold(jt)}.
    pub fn galois_apply(&self, a: &RingElement, t: u64) -> Result<RingElement> {
        if t % self.p == 0 {
            return Err(Error::InvalidArgument(format!(
                "galois index {t} not coprime to p={}",
                self.p
            )));
        }
        let image = self.theta(self.fold(t))?;
        // evaluate the element polynomial at the image of theta
        let mut acc = self.zero();
        for c in a.coeffs.iter().rev() {
            acc = self.mul(&acc, &image);
            acc = self.add(&acc, &self.from_rat(c.clone()));
        }
        Ok(acc)
    }

    /// Fold an exponent into the canonical range 1..=n for theta indices.
    pub fn fold(&self, t: u64) -> usize {
        let r = (t % self.p) as usize;
        let n = self.degree;
        if r == 0 {
            panic!("folding a multiple of p");
        }
        if r <= n {
            r
        } else {
            self.p as usize - r
        }
    }

    /// Embeddings of an element into R, one per conjugate, for test oracles.
    pub fn embeddings_f64(&self, a: &RingElement) -> Vec<f64> {
        (1..=self.degree)
            .map(|j| {
                let theta = 2.0 * (2.0 * std::f64::consts::PI * j as f64 / self.p as f64).cos();
                let mut acc = 0.0;
                for c in a.coeffs.iter().rev() {
                    acc = acc * theta + rat_to_f64(c);
                }
                acc
            })
            .collect()
    }

    // -- prime ideals ----------------------------------------------------------

    /// Factor the rational prime q in O_K.
    ///
    /// For q = p the unique totally ramified prime (theta - 2) is returned.
    /// Otherwise the minimal polynomial is squarefree mod q and its monic
    /// irreducible factors, ordered lexicographically by coefficient vector,
    /// give the primes above q.
    pub fn factor_rational_prime(&self, q: u64) -> Result<Vec<PrimeIdealData>> {
        if !is_prime_u64(q) {
            return Err(Error::InvalidArgument(format!("{q} is not prime")));
        }
        let n = self.degree;
        if q == self.p {
            // p O_K = (theta - 2)^n
            let x_minus_2 = vec![q - 2, 1];
            let theta = self.generator();
            let pi = self.sub(&theta, &self.from_i64(2));
            let strip = self.pow(&pi, (n - 1) as u64);
            let strip_coeffs = strip
                .integer_coeffs()
                .expect("(theta-2)^k is integral");
            return Ok(vec![PrimeIdealData {
                q,
                gen_poly: x_minus_2,
                f: 1,
                e: n,
                index: 0,
                strip_coeffs,
            }]);
        }
        let fm: Vec<u64> = self
            .minpoly
            .iter()
            .map(|c| c.mod_floor(&Int::from(q)).to_u64().unwrap())
            .collect();
        let fm = fq::ptrim(fm);
        debug_assert_eq!(fm.len(), n + 1, "unramified reduction stays monic");
        let mut factors = fq::factor_squarefree_monic(&fm, q)?;
        factors.sort();
        let mut out = Vec::new();
        for (index, g) in factors.iter().enumerate() {
            // cofactor h = (minpoly mod q) / g, lifted to integer coefficients
            let (h, rem) = fq::pdiv(&fm, g, q);
            debug_assert!(rem.is_empty());
            let h_lift: Vec<Int> = h.iter().map(|&c| Int::from(c)).collect();
            let strip = self.from_int_coeffs(&pad(&h_lift, n));
            out.push(PrimeIdealData {
                q,
                gen_poly: g.clone(),
                f: g.len() - 1,
                e: 1,
                index,
                strip_coeffs: strip.integer_coeffs().unwrap(),
            });
        }
        Ok(out)
    }

    /// The residue field attached to an ideal.
    pub fn residue_field(&self, ideal: &PrimeIdealData) -> ResidueField {
        ResidueField::new(ideal.q, ideal.gen_poly.clone())
    }

    /// Image of an element in O_K / ideal (or of a field element whose
    /// denominator is coprime to q).
    pub fn reduce_mod(&self, a: &RingElement, ideal: &PrimeIdealData) -> Result<ResidueElement> {
        let q = Int::from(ideal.q);
        let den = a.denominator();
        if den.gcd(&q) != Int::one() {
            return Err(Error::NotReducible(format!(
                "denominator {den} shares a factor with q={}",
                ideal.q
            )));
        }
        let field = self.residue_field(ideal);
        let num = self.scale(a, &Rat::from(den.clone()));
        let den_mod = den.mod_floor(&q).to_u64().unwrap();
        let den_inv = fq::invm(den_mod, ideal.q);
        let coeffs: Vec<u64> = num
            .coeffs
            .iter()
            .map(|c| {
                let v = c.to_integer().mod_floor(&q).to_u64().unwrap();
                fq::mulm(v, den_inv, ideal.q)
            })
            .collect();
        let rep = field.from_poly(&coeffs);
        Ok(ResidueElement { field, rep })
    }

    /// Exact valuation of a non-zero field element at the ideal. May be
    /// negative for non-integral elements.
    ///
    /// Integral part: repeatedly multiply by the stored cofactor and divide
    /// by q, which strips exactly one power of the ideal per step.
    pub fn valuation(&self, a: &RingElement, ideal: &PrimeIdealData) -> Result<i64> {
        if a.is_zero() {
            return Err(Error::InvalidArgument(
                "valuation of zero requested".into(),
            ));
        }
        let den = a.denominator();
        let num = self.scale(a, &Rat::from(den.clone()));
        let mut coords = num.integer_coeffs().expect("cleared denominator");
        let q = Int::from(ideal.q);
        // v_q of the rational denominator, times e
        let mut den_v: i64 = 0;
        let mut d = den;
        while (&d % &q).is_zero() {
            d /= &q;
            den_v += 1;
        }
        let strip = &ideal.strip_coeffs;
        let mut v: i64 = 0;
        loop {
            if !self.reduces_to_zero(&coords, ideal) {
                break;
            }
            // coords := coords * strip / q, exact by construction
            let elem = self.from_int_coeffs(&coords);
            let mult = self.mul(&elem, &self.from_int_coeffs(&pad(strip, self.degree)));
            let mut next = mult.integer_coeffs().expect("integral product");
            for c in next.iter_mut() {
                let (quo, rem) = c.div_rem(&q);
                if !rem.is_zero() {
                    return Err(Error::Internal(
                        "valuation strip step produced a non-divisible coordinate".into(),
                    ));
                }
                *c = quo;
            }
            coords = next;
            v += 1;
            if coords.iter().all(Zero::is_zero) {
                return Err(Error::Internal("valuation of zero element".into()));
            }
        }
        Ok(v - den_v * ideal.e as i64)
    }

    fn reduces_to_zero(&self, coords: &[Int], ideal: &PrimeIdealData) -> bool {
        let q = ideal.q;
        let reduced: Vec<u64> = coords
            .iter()
            .map(|c| c.mod_floor(&Int::from(q)).to_u64().unwrap())
            .collect();
        fq::prem(&reduced, &ideal.gen_poly, q).is_empty()
    }

    // -- verification reports ---------------------------------------------------

    /// Check |N(theta_j)| = |N(theta_j + 2)| = 1, |N(theta_j - 2)| = p, and
    /// |N(theta_j - theta_k)| = p for all 1 <= j < k <= n.
    pub fn verify_unit_lemma(&self) -> Result<UnitLemmaReport> {
        let mut checks = Vec::new();
        let p = Int::from(self.p);
        for j in 1..=self.degree {
            let th = self.theta(j)?;
            let n1 = self.norm_int(&th)?.abs();
            checks.push(UnitCheck {
                what: format!("|N(theta_{j})| = 1"),
                pass: n1.is_one(),
            });
            let n2 = self
                .norm_int(&self.add(&th, &self.from_i64(2)))?
                .abs();
            checks.push(UnitCheck {
                what: format!("|N(theta_{j} + 2)| = 1"),
                pass: n2.is_one(),
            });
            let n3 = self
                .norm_int(&self.sub(&th, &self.from_i64(2)))?
                .abs();
            checks.push(UnitCheck {
                what: format!("|N(theta_{j} - 2)| = p"),
                pass: n3 == p,
            });
        }
        for j in 1..self.degree {
            for k in (j + 1)..=self.degree {
                let d = self.sub(&self.theta(j)?, &self.theta(k)?);
                let nd = self.norm_int(&d)?.abs();
                checks.push(UnitCheck {
                    what: format!("|N(theta_{j} - theta_{k})| = p"),
                    pass: nd == p,
                });
            }
        }
        let all_pass = checks.iter().all(|c| c.pass);
        Ok(UnitLemmaReport { checks, all_pass })
    }

    /// Whether theta_j^(2^((p-1)m)) = theta_j + 2 holds modulo 4 O_K,
    /// computed by (p-1)m successive squarings with coordinates reduced mod 4.
    pub fn verify_binom_congruence(&self, j: usize, m: u32) -> Result<bool> {
        if m < 1 {
            return Err(Error::InvalidArgument("m must be >= 1".into()));
        }
        let n = self.degree;
        let minpoly4: Vec<Int> = self.minpoly.iter().map(|c| c.mod_floor(&Int::from(4))).collect();
        let theta_j = self.theta(j)?;
        let mut cur: Vec<Int> = theta_j
            .integer_coeffs()
            .unwrap()
            .iter()
            .map(|c| c.mod_floor(&Int::from(4)))
            .collect();
        let steps = (self.p - 1) as u32 * m;
        for _ in 0..steps {
            // square and fold modulo (minpoly, 4)
            let mut prod = vec![Int::zero(); 2 * n - 1];
            for (i, a) in cur.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, b) in cur.iter().enumerate() {
                    prod[i + k] += a * b;
                }
            }
            while prod.len() > n {
                let top = prod.pop().unwrap().mod_floor(&Int::from(4));
                if top.is_zero() {
                    continue;
                }
                let d = prod.len() - n;
                for i in 0..n {
                    let t = &top * &minpoly4[i];
                    prod[d + i] -= t;
                }
            }
            prod.resize(n, Int::zero());
            cur = prod
                .iter()
                .map(|c| c.mod_floor(&Int::from(4)))
                .collect();
        }
        let mut expect: Vec<Int> = theta_j
            .integer_coeffs()
            .unwrap()
            .iter()
            .map(|c| c.mod_floor(&Int::from(4)))
            .collect();
        expect[0] = (&expect[0] + Int::from(2)).mod_floor(&Int::from(4));
        Ok(cur == expect)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitCheck {
    pub what: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitLemmaReport {
    pub checks: Vec<UnitCheck>,
    pub all_pass: bool,
}

/// 2-adic valuation of binomial(2^r, i) by Kummer's carry count
/// (equivalently Legendre's digit-sum formula), never forming the binomial:
/// v_2 = s_2(i) + s_2(2^r - i) - s_2(2^r).
pub fn v2_binomial(r: u32, i: u64) -> Result<u32> {
    if r < 1 {
        return Err(Error::InvalidArgument("r must be >= 1".into()));
    }
    let top: u64 = 1u64
        .checked_shl(r)
        .ok_or_else(|| Error::InvalidArgument("r too large".into()))?;
    if i > top {
        return Err(Error::InvalidArgument(format!(
            "i={i} out of range 0..=2^{r}"
        )));
    }
    let s = i.count_ones() + (top - i).count_ones();
    Ok(s - 1)
}

fn pad(v: &[Int], n: usize) -> Vec<Int> {
    let mut out = v.to_vec();
    out.resize(n, Int::zero());
    out
}

fn rat_to_f64(c: &Rat) -> f64 {
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7] {
        if n % d == 0 {
            return n == d;
        }
    }
    let mut d = 11u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn small_primes(limit: u64) -> Vec<u64> {
    (2..limit).filter(|&n| is_prime_u64(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(p: u64) -> CyclotomicField {
        CyclotomicField::new(p).unwrap()
    }

    fn int_poly(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&c| Int::from(c)).collect()
    }

    #[test]
    fn minpoly_p7() {
        assert_eq!(field(7).minpoly(), &int_poly(&[-1, -2, 1, 1])[..]);
    }

    #[test]
    fn minpoly_p5() {
        assert_eq!(field(5).minpoly(), &int_poly(&[-1, 1, 1])[..]);
    }

    #[test]
    fn rejects_bad_p() {
        assert!(CyclotomicField::new(4).is_err());
        assert!(CyclotomicField::new(9).is_err());
        assert!(CyclotomicField::new(3).is_err());
    }

    #[test]
    fn minpoly_matches_embedding_product() {
        // compare against the floating product prod_j (x - 2cos(2 pi j / p))
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            let k = field(p);
            let n = k.degree();
            let mut coef = vec![0.0f64; n + 1];
            coef[0] = 1.0;
            let mut deg = 0usize;
            for j in 1..=n {
                let r = 2.0 * (2.0 * std::f64::consts::PI * j as f64 / p as f64).cos();
                let mut next = vec![0.0; deg + 2];
                for (i, &c) in coef[..=deg].iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= r * c;
                }
                deg += 1;
                coef[..=deg].copy_from_slice(&next);
            }
            for (i, c) in k.minpoly().iter().enumerate() {
                let exact = c.to_f64().unwrap();
                assert!(
                    (exact - coef[i]).abs() < 1e-9 * (1.0 + exact.abs()),
                    "p={p} coeff {i}: {exact} vs {}",
                    coef[i]
                );
            }
        }
    }

    #[test]
    fn minpoly_relates_to_cyclotomic() {
        // t^n * psi(t + 1/t) = 1 + t + ... + t^{p-1}
        for p in [5u64, 7, 11] {
            let k = field(p);
            let n = k.degree();
            // compute t^n * psi(t + 1/t) as an integer polynomial in t
            // psi(x) = sum c_i x^i; x = t + 1/t; t^n x^i = t^(n-i) (t^2+1)^i
            let mut acc = vec![Int::zero(); 2 * n + 1];
            for (i, c) in k.minpoly().iter().enumerate() {
                // (t^2 + 1)^i * t^(n - i)
                let mut term = vec![Int::one()];
                for _ in 0..i {
                    term = polys::add_int(&polys::shift_int(&polys::shift_int(&term)), &term);
                }
                for _ in 0..(n - i) {
                    term = polys::shift_int(&term);
                }
                for (d, t) in term.iter().enumerate() {
                    acc[d] += c * t;
                }
            }
            let expect: Vec<Int> = vec![Int::one(); p as usize];
            assert_eq!(polys::trim_int(acc), expect, "p={p}");
        }
    }

    #[test]
    fn theta_examples() {
        let k = field(7);
        let t1 = k.theta(1).unwrap();
        assert_eq!(t1.coeffs, k.generator().coeffs);
        let t2 = k.theta(2).unwrap();
        assert_eq!(t2.integer_coeffs().unwrap(), int_poly(&[-2, 0, 1]));
        let t3 = k.theta(3).unwrap();
        // theta_3 = theta^3 - 3 theta reduced: (1, -1, -1)
        assert_eq!(t3.integer_coeffs().unwrap(), int_poly(&[1, -1, -1]));
        // embeddings of theta_j hit 2cos(2 pi j / 7) in some order; check value
        let em = k.embeddings_f64(&t3);
        let target = 2.0 * (6.0 * std::f64::consts::PI / 7.0).cos();
        assert!(em.iter().any(|v| (v - target).abs() < 1e-9));
        assert!(k.theta(4).is_err());
        assert!(k.theta(0).is_err());
    }

    #[test]
    fn theta_embedding_identity() {
        // the j-th embedding of theta_i is 2cos(2 pi (i*j) / p)
        for p in [7u64, 17] {
            let k = field(p);
            for i in 1..=k.degree() {
                let em = k.embeddings_f64(&k.theta(i).unwrap());
                for (jm1, v) in em.iter().enumerate() {
                    let j = jm1 + 1;
                    let target =
                        2.0 * (2.0 * std::f64::consts::PI * (i * j) as f64 / p as f64).cos();
                    assert!((v - target).abs() < 1e-9, "p={p} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        let k = field(7);
        let theta = k.generator();
        let tm2 = k.sub(&theta, &k.from_i64(2));
        assert_eq!(k.norm_int(&tm2).unwrap(), Int::from(-7));
        assert_eq!(k.norm_int(&theta).unwrap(), Int::from(1));
        assert!(k.norm(&k.zero()).is_zero());
        assert_eq!(k.norm_int(&k.one()).unwrap(), Int::one());
    }

    #[test]
    fn norm_multiplicative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for p in [5u64, 7, 13] {
            let k = field(p);
            for _ in 0..30 {
                let a = k.from_int_coeffs(
                    &(0..k.degree())
                        .map(|_| Int::from(rng.gen_range(-9i64..=9)))
                        .collect::<Vec<_>>(),
                );
                let b = k.from_int_coeffs(
                    &(0..k.degree())
                        .map(|_| Int::from(rng.gen_range(-9i64..=9)))
                        .collect::<Vec<_>>(),
                );
                assert_eq!(k.norm(&k.mul(&a, &b)), k.norm(&a) * k.norm(&b));
            }
        }
    }

    #[test]
    fn exact_div_examples() {
        let k = field(7);
        let theta = k.generator();
        let t1m2 = k.sub(&theta, &k.from_i64(2));
        let one = k.exact_div(&t1m2, &t1m2).unwrap();
        assert_eq!(one, k.one());
        let t2m2 = k.sub(&k.theta(2).unwrap(), &k.from_i64(2));
        let ratio = k.exact_div(&t1m2, &t2m2).unwrap();
        assert!(ratio.is_integral());
        assert_eq!(k.norm_int(&ratio).unwrap().abs(), Int::one());
        let half = k
            .exact_div(&k.one(), &k.from_i64(2))
            .unwrap();
        assert!(!half.is_integral());
        assert_eq!(half.as_rational().unwrap(), Rat::new(Int::one(), Int::from(2)));
        assert!(matches!(
            k.exact_div(&k.one(), &k.zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn factor_examples() {
        let k7 = field(7);
        let above3 = k7.factor_rational_prime(3).unwrap();
        assert_eq!(above3.len(), 1);
        assert_eq!(above3[0].f, 3);
        assert_eq!(above3[0].e, 1);
        // norm 27
        assert_eq!(3u64.pow(above3[0].f as u32), 27);

        let k17 = field(17);
        let above2 = k17.factor_rational_prime(2).unwrap();
        assert_eq!(above2.len(), 2);
        assert!(above2.iter().all(|i| i.f == 4));
        assert!(above2[0].gen_poly < above2[1].gen_poly);

        let above7 = k7.factor_rational_prime(7).unwrap();
        assert_eq!(above7.len(), 1);
        assert_eq!((above7[0].e, above7[0].f), (3, 1));
    }

    #[test]
    fn p13_three_splits_into_two_cubics() {
        // ord_13(3) = 3, so 3 splits into two degree-3 primes; the inertness
        // claim sometimes quoted for this field fails at p = 13.
        let k = field(13);
        let above3 = k.factor_rational_prime(3).unwrap();
        assert_eq!(above3.len(), 2);
        assert!(above3.iter().all(|i| i.f == 3));
    }

    #[test]
    fn sum_ef_equals_degree() {
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            let k = field(p);
            for q in [2u64, 3, 5, 7, 11, 13, 17, 67, 101, 137, 157] {
                let primes = k.factor_rational_prime(q).unwrap();
                let sum: usize = primes.iter().map(|i| i.e * i.f).sum();
                assert_eq!(sum, k.degree(), "p={p} q={q}");
            }
        }
    }

    #[test]
    fn reduce_mod_examples() {
        let k = field(7);
        let pideal = &k.factor_rational_prime(7).unwrap()[0];
        let tm2 = k.sub(&k.generator(), &k.from_i64(2));
        let r = k.reduce_mod(&tm2, pideal).unwrap();
        assert!(r.field.is_zero(&r.rep));
        let one = k.reduce_mod(&k.one(), pideal).unwrap();
        assert_eq!(one.rep, one.field.one());
        // theta generates the full degree-3 residue field at 2
        let q2 = &k.factor_rational_prime(2).unwrap()[0];
        let th = k.reduce_mod(&k.generator(), q2).unwrap();
        assert!(!th.field.in_prime_subfield(&th.rep));
        // denominator divisible by q is rejected
        let half = k.from_rat(Rat::new(Int::one(), Int::from(2)));
        assert!(matches!(
            k.reduce_mod(&half, q2),
            Err(Error::NotReducible(_))
        ));
    }

    #[test]
    fn valuation_examples() {
        let k = field(7);
        let pideal = &k.factor_rational_prime(7).unwrap()[0];
        let tm2 = k.sub(&k.generator(), &k.from_i64(2));
        assert_eq!(k.valuation(&tm2, pideal).unwrap(), 1);
        let q2 = &k.factor_rational_prime(2).unwrap()[0];
        assert_eq!(k.valuation(&k.from_i64(4), q2).unwrap(), 2);
        // negative valuation of 1/2
        let half = k.from_rat(Rat::new(Int::one(), Int::from(2)));
        assert_eq!(k.valuation(&half, q2).unwrap(), -1);
        // at the ramified prime, v(p) = e = n
        assert_eq!(k.valuation(&k.from_i64(7), pideal).unwrap(), 3);
        assert!(k.valuation(&k.zero(), q2).is_err());
    }

    #[test]
    fn valuation_additive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let k = field(7);
        for ideal in [
            &k.factor_rational_prime(2).unwrap()[0],
            &k.factor_rational_prime(3).unwrap()[0],
            &k.factor_rational_prime(7).unwrap()[0],
        ] {
            for _ in 0..20 {
                let a = k.from_int_coeffs(
                    &(0..3)
                        .map(|_| Int::from(rng.gen_range(-20i64..=20)))
                        .collect::<Vec<_>>(),
                );
                let b = k.from_int_coeffs(
                    &(0..3)
                        .map(|_| Int::from(rng.gen_range(-20i64..=20)))
                        .collect::<Vec<_>>(),
                );
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let va = k.valuation(&a, ideal).unwrap();
                let vb = k.valuation(&b, ideal).unwrap();
                let vab = k.valuation(&k.mul(&a, &b), ideal).unwrap();
                assert_eq!(vab, va + vb);
            }
        }
    }

    #[test]
    fn galois_examples() {
        let k = field(17);
        let t1 = k.theta(1).unwrap();
        let t4 = k.theta(4).unwrap();
        assert_eq!(k.galois_apply(&t1, 4).unwrap(), t4);
        assert_eq!(k.galois_apply(&t4, 4).unwrap(), t1);
        // t = 1 is the identity
        let k7 = field(7);
        let a = k7.from_int_coeffs(&int_poly(&[3, -1, 2]));
        assert_eq!(k7.galois_apply(&a, 1).unwrap(), a);
        assert!(k7.galois_apply(&a, 14).is_err());
    }

    #[test]
    fn galois_preserves_norm_and_is_homomorphism() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let k = field(11);
        for t in [2u64, 3, 7] {
            for _ in 0..10 {
                let a = k.from_int_coeffs(
                    &(0..5)
                        .map(|_| Int::from(rng.gen_range(-5i64..=5)))
                        .collect::<Vec<_>>(),
                );
                let b = k.from_int_coeffs(
                    &(0..5)
                        .map(|_| Int::from(rng.gen_range(-5i64..=5)))
                        .collect::<Vec<_>>(),
                );
                let sa = k.galois_apply(&a, t).unwrap();
                let sb = k.galois_apply(&b, t).unwrap();
                assert_eq!(k.norm(&a), k.norm(&sa));
                assert_eq!(
                    k.galois_apply(&k.mul(&a, &b), t).unwrap(),
                    k.mul(&sa, &sb)
                );
            }
        }
    }

    #[test]
    fn unit_lemma_all_small_p() {
        for p in [5u64, 7, 17] {
            let rep = field(p).verify_unit_lemma().unwrap();
            assert!(rep.all_pass, "p={p}");
        }
    }

    #[test]
    fn binom_congruence() {
        let k7 = field(7);
        assert!(k7.verify_binom_congruence(1, 1).unwrap());
        let k17 = field(17);
        assert!(k17.verify_binom_congruence(3, 2).unwrap());
        // the congruence without the +2 shift is false
        let k = field(7);
        let theta = k.theta(1).unwrap();
        // theta^64 mod 4 == theta + 2, hence != theta
        let pow = k.pow(&theta, 64);
        let diff = k.sub(&pow, &theta);
        let all_div4 = diff
            .integer_coeffs()
            .unwrap()
            .iter()
            .all(|c| c.mod_floor(&Int::from(4)).is_zero());
        assert!(!all_div4);
    }

    #[test]
    fn v2_binomial_examples() {
        assert_eq!(v2_binomial(3, 4).unwrap(), 1);
        assert_eq!(v2_binomial(3, 0).unwrap(), 0);
        assert_eq!(v2_binomial(4, 3).unwrap(), 4);
        assert!(v2_binomial(3, 9).is_err());
        assert!(v2_binomial(0, 0).is_err());
    }

    #[test]
    fn v2_binomial_matches_bigint_oracle() {
        for r in 1..=8u32 {
            let top = 1u64 << r;
            let mut binom = Int::one();
            for i in 0..=top {
                if i > 0 {
                    binom = binom * Int::from(top - i + 1) / Int::from(i);
                }
                let mut v = 0u32;
                let mut b = binom.clone();
                while b.is_even() {
                    b /= 2;
                    v += 1;
                }
                assert_eq!(v2_binomial(r, i).unwrap(), v, "r={r} i={i}");
            }
        }
    }

    #[test]
    fn ring_axioms_and_float_agreement() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let k = field(13);
        for _ in 0..20 {
            let rnd = |rng: &mut rand::rngs::StdRng| {
                k.from_int_coeffs(
                    &(0..6)
                        .map(|_| Int::from(rng.gen_range(-8i64..=8)))
                        .collect::<Vec<_>>(),
                )
            };
            let a = rnd(&mut rng);
            let b = rnd(&mut rng);
            let c = rnd(&mut rng);
            let ab_c = k.mul(&k.mul(&a, &b), &c);
            let a_bc = k.mul(&a, &k.mul(&b, &c));
            assert_eq!(ab_c, a_bc);
            let dist = k.mul(&a, &k.add(&b, &c));
            let dist2 = k.add(&k.mul(&a, &b), &k.mul(&a, &c));
            assert_eq!(dist, dist2);
            // float embedding agreement
            let em_prod = k.embeddings_f64(&k.mul(&a, &b));
            let ea = k.embeddings_f64(&a);
            let eb = k.embeddings_f64(&b);
            for i in 0..6 {
                let expect = ea[i] * eb[i];
                let got = em_prod[i];
                assert!(
                    (got - expect).abs() <= 1e-6 * (1.0 + expect.abs()),
                    "{got} vs {expect}"
                );
            }
        }
    }
}
