//! Kloosterman-type character sums over GF(2^r).
//!
//! Everything here is exact: single sums are machine integers (|K| is at
//! most 2 sqrt(q)), moments and the GL(t, q) sums are big integers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};

/// Largest t accepted by [`kgl`] and [`kgl_closed`].
pub const MAX_KGL_T: u32 = 16;

fn nonzero(a: Felt) -> Result<()> {
    if a.is_zero() {
        Err(Error::ZeroParameter)
    } else {
        Ok(())
    }
}

#[inline]
fn kloosterman_unchecked(ctx: &FieldCtx, a: Felt) -> i64 {
    let inv = ctx.inverse_table();
    (1..ctx.q())
        .map(|x| ctx.lambda(Felt(x) + ctx.mul(a, Felt(inv[x as usize]))))
        .sum()
}

/// K(lambda; a), the sum of lambda(x + a/x) over nonzero x.
pub fn kloosterman(ctx: &FieldCtx, a: Felt) -> Result<i64> {
    nonzero(a)?;
    Ok(kloosterman_unchecked(ctx, a))
}

/// Memoized values K(lambda; a) for every nonzero a.
#[derive(Debug, Clone, Copy)]
pub struct KloostermanTable<'a> {
    ctx: &'a FieldCtx,
    values: &'a [i64],
}

impl<'a> KloostermanTable<'a> {
    /// Full table, computed sequentially on first request.
    pub fn build(ctx: &'a FieldCtx) -> Result<Self> {
        Self::build_with_jobs(ctx, 1)
    }

    /// Full table with the a-range split over `jobs` threads. The memo is
    /// shared with [`KloostermanTable::build`]; the contents do not depend on `jobs`.
    pub fn build_with_jobs(ctx: &'a FieldCtx, jobs: usize) -> Result<Self> {
        let q = ctx.q() as u128;
        ctx.check_budget(q * q)?;
        let values = ctx
            .kloosterman_memo
            .get_or_init(|| compute_table(ctx, jobs.max(1)));
        Ok(KloostermanTable { ctx, values })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// K(lambda; a); panics on a = 0.
    pub fn get(&self, a: Felt) -> i64 {
        assert!(!a.is_zero(), "Kloosterman sum at a = 0");
        self.values[a.index()]
    }

    /// (a, K(lambda; a)) for all nonzero a in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (Felt, i64)> + '_ {
        self.ctx.nonzero().map(move |a| (a, self.values[a.index()]))
    }

    pub fn value_profile(&self) -> ValueProfile {
        let mut counts = BTreeMap::new();
        for (_, k) in self.iter() {
            *counts.entry(k).or_insert(0u64) += 1;
        }
        ValueProfile {
            q: self.ctx.q() as u64,
            counts,
        }
    }

    /// CSV with columns `a_hex,K`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a_hex,K\n");
        for (a, k) in self.iter() {
            let _ = writeln!(out, "{a:#x},{k}");
        }
        out
    }
}

fn compute_table(ctx: &FieldCtx, jobs: usize) -> Vec<i64> {
    let q = ctx.q() as usize;
    ctx.inverse_table();
    let mut values = vec![0i64; q];
    if jobs == 1 || q < 64 {
        for a in 1..q {
            values[a] = kloosterman_unchecked(ctx, Felt(a as u32));
        }
        return values;
    }
    let chunk = (q - 1).div_ceil(jobs);
    std::thread::scope(|s| {
        for (i, slot) in values[1..].chunks_mut(chunk).enumerate() {
            let start = 1 + i * chunk;
            s.spawn(move || {
                for (off, v) in slot.iter_mut().enumerate() {
                    *v = kloosterman_unchecked(ctx, Felt((start + off) as u32));
                }
            });
        }
    });
    values
}

/// Multiplicities of each Kloosterman value over a in F_q*.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueProfile {
    pub q: u64,
    pub counts: BTreeMap<i64, u64>,
}

impl ValueProfile {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Integers t with t^2 < 4q and t = -1 mod 4, ascending.
    pub fn admissible_values(q: u64) -> Vec<i64> {
        let bound = 4 * q as i64;
        let mut t = -1i64;
        while (t - 4) * (t - 4) < bound {
            t -= 4;
        }
        let mut out = Vec::new();
        while t * t < bound {
            out.push(t);
            t += 4;
        }
        out
    }

    /// The observed values are exactly the admissible ones (meaningful for r >= 2).
    pub fn matches_admissible_range(&self) -> bool {
        self.counts
            .keys()
            .copied()
            .eq(Self::admissible_values(self.q))
    }

    /// CSV with columns `t,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,count\n");
        for (t, c) in &self.counts {
            let _ = writeln!(out, "{t},{c}");
        }
        out
    }
}

pub fn value_profile(ctx: &FieldCtx) -> Result<ValueProfile> {
    Ok(KloostermanTable::build(ctx)?.value_profile())
}

/// The m-dimensional Kloosterman sum by direct enumeration of (F_q*)^m.
pub fn kloosterman_m(ctx: &FieldCtx, m: u32, a: Felt) -> Result<i64> {
    nonzero(a)?;
    if m == 0 {
        return Err(Error::Range {
            what: "m",
            value: 0,
            allowed: "m >= 1",
        });
    }
    let terms = (ctx.q() as u128 - 1).checked_pow(m).unwrap_or(u128::MAX);
    ctx.check_budget(terms)?;
    ctx.inverse_table();
    Ok(km_rec(ctx, m, a, Felt::ZERO, Felt::ONE))
}

fn km_rec(ctx: &FieldCtx, left: u32, a: Felt, sum: Felt, prod_inv: Felt) -> i64 {
    if left == 0 {
        return ctx.lambda(sum + ctx.mul(a, prod_inv));
    }
    ctx.nonzero()
        .map(|x| {
            km_rec(
                ctx,
                left - 1,
                a,
                sum + x,
                ctx.mul(prod_inv, ctx.inv_nonzero(x)),
            )
        })
        .sum()
}

/// K_2(lambda; a) through the Carlitz identity K^2 - q.
pub fn carlitz_k2(ctx: &FieldCtx, a: Felt) -> Result<i64> {
    let k = kloosterman(ctx, a)?;
    Ok(k * k - ctx.q() as i64)
}

fn check_t(t: u32) -> Result<()> {
    if t > MAX_KGL_T {
        Err(Error::Range {
            what: "t",
            value: t as i128,
            allowed: "t <= 16",
        })
    } else {
        Ok(())
    }
}

/// K_GL(t,q) by the three-term recursion, given K = K(psi; a).
pub fn kgl_from_k(q: u32, t: u32, k: i64) -> BigInt {
    let q = BigInt::from(q);
    let k = BigInt::from(k);
    let mut prev = BigInt::one();
    if t == 0 {
        return prev;
    }
    let mut cur = k.clone();
    for s in 2..=t {
        let qs1: BigInt = Pow::pow(&q, s - 1);
        let next = &qs1 * &cur * &k + Pow::pow(&q, 2 * s - 2) * (&qs1 - 1u32) * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Kloosterman sum for GL(t, q) at the canonical character.
pub fn kgl(ctx: &FieldCtx, t: u32, a: Felt) -> Result<BigInt> {
    check_t(t)?;
    let k = kloosterman(ctx, a)?;
    Ok(kgl_from_k(ctx.q(), t, k))
}

/// Closed double-sum form of K_GL(t,q), given K = K(psi; a).
pub fn kgl_closed_from_k(q: u32, t: u32, k: i64) -> BigInt {
    assert!(t >= 1);
    let qb = BigInt::from(q);
    let kb = BigInt::from(k);
    let base = (t as i64 - 2) * (t as i64 + 1) / 2;
    let mut total = BigInt::zero();
    for l in 1..=(t + 2) / 2 {
        let exp = base + l as i64;
        debug_assert!(exp >= 0);
        let inner = if l == 1 {
            BigInt::one()
        } else {
            chain_sum(&qb, l, 1, t + 1)
        };
        total += Pow::pow(&qb, exp as u64) * Pow::pow(&kb, t + 2 - 2 * l) * inner;
    }
    total
}

/// Sum over 2l-1 <= j_{l-1} <= ... <= j_nu <= upper of prod (q^(j - 2 nu) - 1).
fn chain_sum(q: &BigInt, l: u32, nu: u32, upper: u32) -> BigInt {
    if nu == l {
        return BigInt::one();
    }
    let mut acc = BigInt::zero();
    for j in (2 * l - 1)..=upper {
        let factor: BigInt = Pow::pow(q, j - 2 * nu) - 1u32;
        acc += factor * chain_sum(q, l, nu + 1, j);
    }
    acc
}

pub fn kgl_closed(ctx: &FieldCtx, t: u32, a: Felt) -> Result<BigInt> {
    check_t(t)?;
    if t == 0 {
        return Err(Error::Range {
            what: "t",
            value: 0,
            allowed: "t >= 1",
        });
    }
    let k = kloosterman(ctx, a)?;
    Ok(kgl_closed_from_k(ctx.q(), t, k))
}

/// Sum of v^h over the values, exact; i128 fast path with a big-integer fallback.
pub(crate) fn power_sum<I>(values: I, h: u32) -> BigInt
where
    I: IntoIterator<Item = (i64, u64)> + Clone,
{
    let fast = values
        .clone()
        .into_iter()
        .try_fold(0i128, |acc, (v, count)| {
            (v as i128)
                .checked_pow(h)
                .and_then(|p| p.checked_mul(count as i128))
                .and_then(|p| acc.checked_add(p))
        });
    match fast {
        Some(s) => BigInt::from(s),
        None => values
            .into_iter()
            .map(|(v, c)| Pow::pow(BigInt::from(v), h) * c)
            .sum(),
    }
}

/// MK_m^h, the h-th power moment of K_m over a in F_q*, for m in {1, 2}.
pub fn moment_direct(ctx: &FieldCtx, m: u32, h: u32) -> Result<BigInt> {
    moment_direct_with_jobs(ctx, m, h, 1)
}

pub fn moment_direct_with_jobs(ctx: &FieldCtx, m: u32, h: u32, jobs: usize) -> Result<BigInt> {
    let q = ctx.q() as i64;
    let profile = KloostermanTable::build_with_jobs(ctx, jobs)?.value_profile();
    let values = profile.counts.iter().map(|(&t, &c)| (t, c));
    match m {
        1 => Ok(power_sum(values, h)),
        2 => Ok(power_sum(values.map(|(t, c)| (t * t - q, c)), h)),
        _ => Err(Error::Range {
            what: "m",
            value: m as i128,
            allowed: "1 or 2",
        }),
    }
}

/// Both sides of the twisted-sum identity for K_m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentitySides {
    pub lhs: i64,
    pub rhs: i64,
}

impl IdentitySides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Sum over a != 0 of lambda(a beta) K_m(lambda; a), against
/// q K_{m-1}(lambda; 1/beta) + (-1)^(m+1) (just the sign term when beta = 0),
/// with K_0(lambda; x) = lambda(x).
pub fn convolution_identity_sides(ctx: &FieldCtx, m: u32, beta: Felt) -> Result<IdentitySides> {
    if !(1..=3).contains(&m) {
        return Err(Error::Range {
            what: "m",
            value: m as i128,
            allowed: "1..=3",
        });
    }
    let q = ctx.q() as u128;
    ctx.check_budget(q.pow(m + 1))?;
    let mut lhs = 0i64;
    for a in ctx.nonzero() {
        lhs += ctx.lambda(ctx.mul(a, beta)) * kloosterman_m(ctx, m, a)?;
    }
    let sign = if m % 2 == 1 { 1 } else { -1 };
    let rhs = if beta.is_zero() {
        sign
    } else {
        let binv = ctx.inv_nonzero(beta);
        let lower = if m == 1 {
            ctx.lambda(binv)
        } else {
            kloosterman_m(ctx, m - 1, binv)?
        };
        ctx.q() as i64 * lower + sign
    };
    Ok(IdentitySides { lhs, rhs })
}

pub fn convolution_identity_check(ctx: &FieldCtx, m: u32, beta: Felt) -> Result<bool> {
    Ok(convolution_identity_sides(ctx, m, beta)?.holds())
}

/// Checks, for beta != 0 and tr(b) = 1,
/// sum_{x not in {0,1}} lambda(beta / (x^2 + x)) = K(beta) - 1 and
/// sum_{x} lambda(beta / (x^2 + x + b)) = -K(beta) - 1.
pub fn artin_schreier_sums_check(ctx: &FieldCtx, beta: Felt, b: Felt) -> Result<bool> {
    nonzero(beta)?;
    if ctx.in_artin_schreier_image(b) {
        return Err(Error::NotIrreducible(b.0));
    }
    let k = kloosterman(ctx, beta)?;
    let mut first = 0i64;
    let mut second = 0i64;
    for x in ctx.elements() {
        let as_x = ctx.square(x) + x;
        if !as_x.is_zero() {
            first += ctx.lambda(ctx.mul(beta, ctx.inv_nonzero(as_x)));
        }
        let shifted = as_x + b;
        // z^2 + z + b has no roots, so this never vanishes
        second += ctx.lambda(ctx.mul(beta, ctx.inv(shifted)?));
    }
    Ok(first == k - 1 && second == -k - 1)
}
