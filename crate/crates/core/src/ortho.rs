//! Minus-type orthogonal groups over GF(2^r).
//!
//! The form lives on 2n coordinates: n-1 hyperbolic pairs followed by one
//! anisotropic plane x^2 + xy + a y^2 with tr(a) = 1. Only the n = 1 groups
//! and SO^-(4, 2) are ever enumerated; everything else is closed-form.

use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::char_sums::{kgl_from_k, KloostermanTable};
use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};

/// Dense square matrix over GF(2^r), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    dim: usize,
    data: Vec<Felt>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}", self.to_hex())
    }
}

impl Matrix {
    pub fn from_rows(dim: usize, data: Vec<Felt>) -> Self {
        assert_eq!(data.len(), dim * dim, "matrix data length");
        Matrix { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Felt::ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Felt::ONE;
        }
        Matrix { dim, data }
    }

    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![Felt::ZERO; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Felt {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Felt) {
        self.data[i * self.dim + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Felt> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn trace(&self) -> Felt {
        (0..self.dim).fold(Felt::ZERO, |s, i| s + self.get(i, i))
    }

    pub fn mul(&self, ctx: &FieldCtx, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Felt::ZERO;
                for k in 0..n {
                    acc += ctx.mul(self.get(i, k), rhs.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn apply(&self, ctx: &FieldCtx, x: &[Felt]) -> Vec<Felt> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(Felt::ZERO, |s, k| s + ctx.mul(self.get(i, k), x[k])))
            .collect()
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self, ctx: &FieldCtx) -> Option<Matrix> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let s = ctx.inv_nonzero(a.get(col, col));
            for j in 0..n {
                a.set(col, j, ctx.mul(a.get(col, j), s));
                inv.set(col, j, ctx.mul(inv.get(col, j), s));
            }
            for r in 0..n {
                let factor = a.get(r, col);
                if r != col && !factor.is_zero() {
                    for j in 0..n {
                        let av = a.get(r, j) + ctx.mul(factor, a.get(col, j));
                        a.set(r, j, av);
                        let iv = inv.get(r, j) + ctx.mul(factor, inv.get(col, j));
                        inv.set(r, j, iv);
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self, ctx: &FieldCtx) -> bool {
        self.inverse(ctx).is_some()
    }

    /// Row-major hex, e.g. `[[0x1,0x1],[0x0,0x1]]`.
    pub fn to_hex(&self) -> String {
        let mut out = String::from("[");
        for i in 0..self.dim {
            if i > 0 {
                out.push(',');
            }
            out.push('[');
            for j in 0..self.dim {
                if j > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{:#x}", self.get(i, j));
            }
            out.push(']');
        }
        out.push(']');
        out
    }
}

/// The elliptic quadratic form on 2n coordinates.
#[derive(Debug, Clone, Copy)]
pub struct QuadFormMinus<'a> {
    ctx: &'a FieldCtx,
    n: usize,
    a: Felt,
}

impl<'a> QuadFormMinus<'a> {
    /// `a` must have trace one so that z^2 + z + a is irreducible.
    pub fn new(ctx: &'a FieldCtx, n: usize, a: Felt) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range {
                what: "n",
                value: 0,
                allowed: "n >= 1",
            });
        }
        if ctx.in_artin_schreier_image(a) {
            return Err(Error::NotIrreducible(a.0));
        }
        Ok(QuadFormMinus { ctx, n, a })
    }

    /// Uses the smallest trace-one element as the parameter.
    pub fn with_default_param(ctx: &'a FieldCtx, n: usize) -> Result<Self> {
        Self::new(ctx, n, ctx.smallest_trace_one())
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn param(&self) -> Felt {
        self.a
    }

    pub fn theta(&self, x: &[Felt]) -> Result<Felt> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let ctx = self.ctx;
        let k = self.n - 1;
        let mut acc = Felt::ZERO;
        for i in 0..k {
            acc += ctx.mul(x[i], x[k + i]);
        }
        let (u, v) = (x[2 * k], x[2 * k + 1]);
        acc += ctx.square(u) + ctx.mul(u, v) + ctx.mul(self.a, ctx.square(v));
        Ok(acc)
    }

    /// Polar form theta(x + y) + theta(x) + theta(y).
    pub fn polar(&self, x: &[Felt], y: &[Felt]) -> Result<Felt> {
        let sum: Vec<Felt> = x.iter().zip(y).map(|(&s, &t)| s + t).collect();
        Ok(self.theta(&sum)? + self.theta(x)? + self.theta(y)?)
    }

    fn basis(&self, i: usize) -> Vec<Felt> {
        let mut e = vec![Felt::ZERO; self.dim()];
        e[i] = Felt::ONE;
        e
    }

    fn check_dim(&self, m: &Matrix) -> Result<()> {
        if m.dim() != self.dim() {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: m.dim(),
            })
        } else {
            Ok(())
        }
    }

    /// Invertible and preserves the form: checked on basis vectors and
    /// on the polar form of basis pairs.
    pub fn is_isometry(&self, m: &Matrix) -> Result<bool> {
        self.check_dim(m)?;
        let d = self.dim();
        let images: Vec<Vec<Felt>> = (0..d).map(|j| m.column(j)).collect();
        for i in 0..d {
            if self.theta(&images[i])? != self.theta(&self.basis(i))? {
                return Ok(false);
            }
        }
        for i in 0..d {
            for j in i + 1..d {
                if self.polar(&images[i], &images[j])?
                    != self.polar(&self.basis(i), &self.basis(j))?
                {
                    return Ok(false);
                }
            }
        }
        Ok(m.is_invertible(self.ctx))
    }

    /// Checks theta(Mx) = theta(x) on every vector; only for 2n r <= 16.
    pub fn is_isometry_exhaustive(&self, m: &Matrix) -> Result<bool> {
        self.check_dim(m)?;
        let d = self.dim();
        let bits = d as u32 * self.ctx.r();
        if bits > 16 {
            return Err(Error::BudgetExceeded {
                needed: 1u128 << bits,
                budget: 1 << 16,
            });
        }
        if !m.is_invertible(self.ctx) {
            return Ok(false);
        }
        let q = self.ctx.q() as u64;
        let mut x = vec![Felt::ZERO; d];
        for code in 0..1u64 << bits {
            let mut c = code;
            for slot in x.iter_mut() {
                *slot = Felt((c % q) as u32);
                c /= q;
            }
            if self.theta(&m.apply(self.ctx, &x))? != self.theta(&x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The spinor (Dickson) invariant of an isometry, read off its block form.
    pub fn spinor_map(&self, m: &Matrix) -> Result<u8> {
        if !self.is_isometry(m)? {
            return Err(Error::NotIsometry);
        }
        let ctx = self.ctx;
        let k = self.n - 1;
        let (b0, b1) = (k, 2 * k); // column offsets of the B/D and e/f blocks
        let delta = [[Felt::ONE, Felt::ONE], [Felt::ZERO, self.a]];
        let mut acc = Felt::ZERO;
        // Tr(h^t delta g)
        for p in 0..k {
            for s in 0..2 {
                for u in 0..2 {
                    let h = m.get(b1 + s, b0 + p);
                    let g = m.get(b1 + u, p);
                    acc += ctx.mul(ctx.mul(h, delta[s][u]), g);
                }
            }
        }
        // Tr(e [[0,0],[1,0]] f^t) and Tr(B C^t)
        for p in 0..k {
            acc += ctx.mul(m.get(p, b1 + 1), m.get(b0 + p, b1));
            for s in 0..k {
                acc += ctx.mul(m.get(p, b0 + s), m.get(b0 + p, s));
            }
        }
        // (i^2)^t delta i^1
        for s in 0..2 {
            for u in 0..2 {
                let i2 = m.get(b1 + s, b1 + 1);
                let i1 = m.get(b1 + u, b1);
                acc += ctx.mul(ctx.mul(i2, delta[s][u]), i1);
            }
        }
        match acc.0 {
            0 | 1 => Ok(acc.0 as u8),
            _ => Err(Error::NotIsometry),
        }
    }

    fn require_plane(&self) -> Result<()> {
        if self.n != 1 {
            Err(Error::DimensionMismatch {
                expected: 2,
                got: self.dim(),
            })
        } else {
            Ok(())
        }
    }

    /// SO^-(2, q): the q + 1 matrices [[d1, a d2], [d2, d1 + d2]] of norm one.
    pub fn so2_elements(&self) -> Result<Vec<Matrix>> {
        self.require_plane()?;
        let ctx = self.ctx;
        let mut out = Vec::with_capacity(ctx.q() as usize + 1);
        for d1 in ctx.elements() {
            for d2 in ctx.elements() {
                let norm = ctx.square(d1) + ctx.mul(d1, d2) + ctx.mul(self.a, ctx.square(d2));
                if norm == Felt::ONE {
                    out.push(Matrix::from_rows(
                        2,
                        vec![d1, ctx.mul(self.a, d2), d2, d1 + d2],
                    ));
                }
            }
        }
        Ok(out)
    }

    /// O^-(2, q) = SO^-(2, q) followed by the coset [[1,1],[0,1]] SO^-(2, q).
    pub fn o2_elements(&self) -> Result<Vec<Matrix>> {
        let so = self.so2_elements()?;
        let reflection = Matrix::from_rows(2, vec![Felt::ONE, Felt::ONE, Felt::ZERO, Felt::ONE]);
        let coset: Vec<Matrix> = so.iter().map(|m| reflection.mul(self.ctx, m)).collect();
        Ok(so.into_iter().chain(coset).collect())
    }

    /// Every isometry, by scanning all q^(4n^2) matrices. Budget-gated.
    pub fn isometries_bruteforce(&self) -> Result<Vec<Matrix>> {
        let d = self.dim();
        let ctx = self.ctx;
        let cells = (d * d) as u32;
        let total = (ctx.q() as u128).checked_pow(cells).unwrap_or(u128::MAX);
        ctx.check_budget(total)?;
        let q = ctx.q() as u128;
        let mut out = Vec::new();
        let mut data = vec![Felt::ZERO; d * d];
        for code in 0..total {
            let mut c = code;
            for slot in data.iter_mut() {
                *slot = Felt((c % q) as u32);
                c /= q;
            }
            let m = Matrix::from_rows(d, data.clone());
            if self.is_isometry(&m)? {
                out.push(m);
            }
        }
        Ok(out)
    }
}

/// The three groups that carry codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    So2Minus,
    O2Minus,
    So4Minus,
}

impl Group {
    pub const ALL: [Group; 3] = [Group::So2Minus, Group::O2Minus, Group::So4Minus];

    pub fn order(self, q: u32) -> BigUint {
        let q = BigUint::from(q);
        match self {
            Group::So2Minus => &q + 1u32,
            Group::O2Minus => (&q + 1u32) * 2u32,
            Group::So4Minus => {
                let q2 = &q * &q;
                &q2 * (&q2 * &q2 - 1u32)
            }
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Group::So2Minus => "so2m",
            Group::O2Minus => "o2m",
            Group::So4Minus => "so4m",
        }
    }

    pub fn parse(s: &str) -> Option<Group> {
        Group::ALL.into_iter().find(|g| g.short_name() == s)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::So2Minus => "SO-(2,q)",
            Group::O2Minus => "O-(2,q)",
            Group::So4Minus => "SO-(4,q)",
        })
    }
}

/// Full orthogonal group or its spinor kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Ominus,
    SOminus,
}

fn qpow(q: u32, e: u64) -> BigUint {
    Pow::pow(BigUint::from(q), e)
}

/// |O^-(2n, q)| or |SO^-(2n, q)|.
pub fn group_order(variant: Variant, n: u32, q: u32) -> BigUint {
    let n64 = n as u64;
    let mut o = qpow(q, n64 * n64 - n64) * (qpow(q, n64) + 1u32);
    for j in 1..n64 {
        o *= qpow(q, 2 * j) - 1u32;
    }
    match variant {
        Variant::Ominus => o * 2u32,
        Variant::SOminus => o,
    }
}

/// |GL(n, q)|.
pub fn gl_order(n: u32, q: u32) -> BigUint {
    let n64 = n as u64;
    let mut g = qpow(q, n64 * n64.saturating_sub(1) / 2);
    for j in 1..=n64 {
        g *= qpow(q, j) - 1u32;
    }
    g
}

/// Gaussian binomial [n k]_q; zero when k > n.
pub fn q_binomial(n: u32, k: u32, q: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..k as u64 {
        num *= qpow(q, n as u64 - j) - 1u32;
        den *= qpow(q, k as u64 - j) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// b_r: the character sum over nonsingular symmetric r x r matrices and h in F_q^(r x 2).
pub fn b_r(r: u32, q: u32) -> BigInt {
    let r64 = r as u64;
    let mut prod = BigUint::one();
    if r % 2 == 0 {
        for j in 1..=r64 / 2 {
            prod *= qpow(q, 2 * j - 1) - 1u32;
        }
        BigInt::from(qpow(q, r64 * (r64 + 6) / 4) * prod)
    } else {
        for j in 1..=(r64 + 1) / 2 {
            prod *= qpow(q, 2 * j - 1) - 1u32;
        }
        -BigInt::from(qpow(q, (r64 * r64 + 4 * r64 - 1) / 4) * prod)
    }
}

/// Orders attached to the r-th double coset of the maximal parabolic P^-(2n, q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicData {
    pub n: u32,
    pub r: u32,
    pub gl_r: BigUint,
    pub gl_rest: BigUint,
    pub q_binomial: BigUint,
    pub b_r: BigInt,
    pub a_r_order: BigUint,
    pub p_order: BigUint,
    pub coset_count: BigUint,
    /// |P|^2 / |A_r|, divided exactly.
    pub cell_mass: BigUint,
    /// The same mass from its closed product form.
    pub cell_mass_closed: BigUint,
}

fn half_exponent(twice: i64) -> Result<u64> {
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::NonIntegralResult("parabolic exponent"));
    }
    Ok((twice / 2) as u64)
}

pub fn parabolic_machinery(n: u32, r: u32, q: u32) -> Result<ParabolicData> {
    if n == 0 || r >= n {
        return Err(Error::Range {
            what: "r_cell",
            value: r as i128,
            allowed: "0 <= r_cell <= n - 1",
        });
    }
    let (ni, ri) = (n as i64, r as i64);
    let two_q1 = (BigUint::from(q) + 1u32) * 2u32;
    let gl_r = gl_order(r, q);
    let gl_rest = gl_order(n - 1 - r, q);
    let base = half_exponent((ni - 1) * (ni + 2))?;
    let a_exp = half_exponent((ni - 1) * (ni + 2) + ri * (2 * ni - 3 * ri - 5))?;
    let a_r_order = &two_q1 * &gl_r * &gl_rest * qpow(q, a_exp);
    let p_order = &two_q1 * gl_order(n - 1, q) * qpow(q, base);
    let qb = q_binomial(n - 1, r, q);
    let coset_count = &qb * qpow(q, half_exponent(ri * (ri + 3))?);
    let (cell_mass, rem) = (&p_order * &p_order).div_rem(&a_r_order);
    if !rem.is_zero() {
        return Err(Error::NonIntegralResult("|P|^2 / |A_r|"));
    }
    let mut closed = &two_q1 * qpow(q, (n as u64) * (n as u64) - n as u64);
    for j in 1..n as u64 {
        closed *= qpow(q, j) - 1u32;
    }
    let r64 = r as u64;
    closed *= &qb * qpow(q, r64 * r64.saturating_sub(1) / 2 + 2 * r64);
    Ok(ParabolicData {
        n,
        r,
        gl_r,
        gl_rest,
        q_binomial: qb,
        b_r: b_r(r, q),
        a_r_order,
        p_order,
        coset_count,
        cell_mass,
        cell_mass_closed: closed,
    })
}

/// Both sides of sum_r [n r]_q (-1)^r q^C(r,2) x^r = (1 - x)(1 - qx)...(1 - q^(n-1) x).
pub fn q_binomial_theorem_sides(n: u32, q: u32, x: &BigInt) -> (BigInt, BigInt) {
    let mut lhs = BigInt::zero();
    for r in 0..=n {
        let term = BigInt::from(q_binomial(n, r, q))
            * BigInt::from(qpow(q, (r as u64) * (r as u64).saturating_sub(1) / 2))
            * Pow::pow(x, r);
        if r % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let mut rhs = BigInt::one();
    for k in 0..n as u64 {
        rhs *= BigInt::one() - BigInt::from(qpow(q, k)) * x;
    }
    (lhs, rhs)
}

/// n_G(beta): number of group elements with matrix trace beta, for every beta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceProfile {
    pub counts: Vec<BigUint>,
}

impl TraceProfile {
    pub fn get(&self, beta: Felt) -> &BigUint {
        &self.counts[beta.index()]
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// sum_beta n(beta) * beta, computed in the field.
    pub fn field_moment(&self) -> Felt {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| c.bit(0))
            .fold(Felt::ZERO, |s, (b, _)| s + Felt(b as u32))
    }

    /// (beta, count) pairs with nonzero count.
    pub fn support(&self) -> impl Iterator<Item = (Felt, &BigUint)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(b, c)| (Felt(b as u32), c))
    }

    /// CSV with columns `beta_hex,count`, every beta listed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta_hex,count\n");
        for (b, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{b:#x},{c}");
        }
        out
    }

    fn tally<'m>(q: u32, elements: impl IntoIterator<Item = &'m Matrix>) -> Self {
        let mut counts = vec![BigUint::zero(); q as usize];
        for m in elements {
            counts[m.trace().index()] += 1u32;
        }
        TraceProfile { counts }
    }
}

/// Trace counts from their closed forms.
pub fn trace_profile(ctx: &FieldCtx, group: Group) -> Result<TraceProfile> {
    let q = ctx.q();
    let qb = BigUint::from(q);
    let mut counts = vec![BigUint::zero(); q as usize];
    match group {
        Group::So2Minus | Group::O2Minus => {
            counts[0] = if group == Group::So2Minus {
                BigUint::one()
            } else {
                &qb + 2u32
            };
            for beta in ctx.nonzero() {
                if ctx.trace(ctx.inv_nonzero(beta)) == 1 {
                    counts[beta.index()] = BigUint::from(2u32);
                }
            }
        }
        Group::So4Minus => {
            let table = KloostermanTable::build(ctx)?;
            let q2 = &qb * &qb;
            counts[0] = &q2 * &q2;
            let base = BigInt::from(&q2 * &qb + &q2);
            for beta in ctx.nonzero() {
                let k = table.get(ctx.inv_nonzero(beta));
                let n = BigInt::from(q2.clone()) * (&base - k);
                counts[beta.index()] = n.to_biguint().expect("Weil bound keeps counts positive");
            }
        }
    }
    Ok(TraceProfile { counts })
}

/// Trace counts by enumerating the group under the default form.
pub fn trace_profile_bruteforce(ctx: &FieldCtx, group: Group) -> Result<TraceProfile> {
    let n = if group == Group::So4Minus { 2 } else { 1 };
    trace_profile_bruteforce_with(&QuadFormMinus::with_default_param(ctx, n)?, group)
}

/// Trace counts by enumerating the group under `form`.
pub fn trace_profile_bruteforce_with(
    form: &QuadFormMinus<'_>,
    group: Group,
) -> Result<TraceProfile> {
    let ctx = form.ctx();
    let q = ctx.q();
    let elements = group_elements_bruteforce(form, group)?;
    Ok(TraceProfile::tally(q, &elements))
}

/// The elements of `group` for the enumerable cases: n = 1 with q <= 64, or SO^-(4, 2).
pub fn group_elements_bruteforce(form: &QuadFormMinus<'_>, group: Group) -> Result<Vec<Matrix>> {
    let q = form.ctx().q();
    match group {
        Group::So2Minus | Group::O2Minus => {
            if q > 64 {
                return Err(Error::BudgetExceeded {
                    needed: (q as u128) * (q as u128),
                    budget: 64 * 64,
                });
            }
            if group == Group::So2Minus {
                form.so2_elements()
            } else {
                form.o2_elements()
            }
        }
        Group::So4Minus => {
            if q != 2 || form.n() != 2 {
                return Err(Error::BudgetExceeded {
                    needed: (q as u128).saturating_pow(16),
                    budget: 1 << 16,
                });
            }
            let all = form.isometries_bruteforce()?;
            let mut so = Vec::with_capacity(all.len() / 2);
            for m in all {
                if form.spinor_map(&m)? == 0 {
                    so.push(m);
                }
            }
            Ok(so)
        }
    }
}

fn nonzero(a: Felt) -> Result<()> {
    if a.is_zero() {
        Err(Error::ZeroParameter)
    } else {
        Ok(())
    }
}

/// Gauss sum of `group` at the character x -> lambda(a x), in closed form.
pub fn gauss_sum(ctx: &FieldCtx, group: Group, a: Felt) -> Result<BigInt> {
    nonzero(a)?;
    let k = BigInt::from(crate::char_sums::kloosterman(ctx, a)?);
    let q = BigInt::from(ctx.q());
    Ok(match group {
        Group::So2Minus => -k,
        Group::O2Minus => -k + &q + 1,
        Group::So4Minus => -(&q * &q) * (&k * &k + &q * &q * &q - &q),
    })
}

/// sum over `elements` of lambda(a Tr w).
pub fn gauss_sum_enumerated(ctx: &FieldCtx, elements: &[Matrix], a: Felt) -> BigInt {
    BigInt::from(
        elements
            .iter()
            .map(|w| ctx.lambda(ctx.mul(a, w.trace())))
            .sum::<i64>(),
    )
}

/// Gauss sum of O^-(2n, q) or SO^-(2n, q) from the double-coset expansion.
pub fn gauss_sum_general(variant: Variant, n: u32, ctx: &FieldCtx, a: Felt) -> Result<BigInt> {
    nonzero(a)?;
    if !(1..=6).contains(&n) {
        return Err(Error::Range {
            what: "n",
            value: n as i128,
            allowed: "1..=6",
        });
    }
    let q = ctx.q();
    let k = crate::char_sums::kloosterman(ctx, a)?;
    let kb = BigInt::from(k);
    let qb = BigInt::from(q);
    let n64 = n as i64;
    let pref = BigInt::from(qpow(q, half_exponent((n64 - 1) * (n64 + 2))?));
    let mut even = BigInt::zero();
    let mut odd = BigInt::zero();
    for r in 0..n {
        let r64 = r as i64;
        let term = BigInt::from(q_binomial(n - 1, r, q))
            * BigInt::from(qpow(q, half_exponent(r64 * (2 * n64 - r64 - 3))?))
            * b_r(r, q)
            * kgl_from_k(q, n - 1 - r, k);
        if r % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
    }
    Ok(match variant {
        Variant::Ominus => pref * (-&kb + &qb + 1) * (even + odd),
        Variant::SOminus => pref * (-&kb * even + (&qb + 1) * odd),
    })
}
