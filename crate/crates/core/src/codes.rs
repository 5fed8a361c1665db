//! The binary codes C(G) = { u in F_2^N : sum u_i Tr(g_i) = 0 } and their
//! weight distributions.
//!
//! A code is carried only by its trace profile: the weight distribution
//! depends on how many coordinates carry each trace value, not on which
//! group element sits where. That keeps C(SO^-(4,q)) workable even though
//! its length is q^2 (q^4 - 1).

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::char_sums::KloostermanTable;
use crate::error::{Error, Result};
use crate::field::{Felt, FieldCtx};
use crate::layout;
use crate::ortho::{trace_profile, Group, TraceProfile};

/// Longest code the DP will produce in full.
pub const MAX_FULL_LENGTH: usize = 8192;
/// Deepest prefix the DP will produce for longer codes.
pub const MAX_PREFIX: usize = 64;
/// Longest code accepted by the MacWilliams transform.
pub const MAX_MACWILLIAMS_LENGTH: usize = 1 << 20;
/// Longest code accepted by exhaustive enumeration.
pub const MAX_BRUTEFORCE_LENGTH: usize = 24;

#[derive(Debug, Clone)]
pub struct CodeSpec<'a> {
    pub group: Group,
    pub ctx: &'a FieldCtx,
    pub length: BigUint,
    pub profile: TraceProfile,
    pub dimension: BigUint,
}

impl CodeSpec<'_> {
    /// The length when it fits in a usize.
    pub fn length_usize(&self) -> Option<usize> {
        self.length.to_usize()
    }

    /// Coordinate traces in the canonical order: ascending beta, repeated n(beta) times.
    pub fn coordinates(&self) -> Result<Vec<Felt>> {
        let n = self.length_usize().ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: usize::MAX as u128,
        })?;
        let mut out = Vec::with_capacity(n);
        for (beta, count) in self.profile.support() {
            let c = count.to_usize().expect("count bounded by length");
            out.extend(std::iter::repeat_n(beta, c));
        }
        Ok(out)
    }
}

pub fn build_code(ctx: &FieldCtx, group: Group) -> Result<CodeSpec<'_>> {
    let profile = trace_profile(ctx, group)?;
    let length = profile.total();
    debug_assert_eq!(length, group.order(ctx.q()));
    let dimension = &length - BigUint::from(ctx.r());
    Ok(CodeSpec {
        group,
        ctx,
        length,
        profile,
        dimension,
    })
}

/// Weight of c(a) = (tr(a Tr g_1), ..., tr(a Tr g_N)) from the Gauss-sum formulas.
pub fn dual_codeword_weight(code: &CodeSpec<'_>, a: Felt) -> Result<BigUint> {
    if a.is_zero() {
        return Ok(BigUint::zero());
    }
    let ctx = code.ctx;
    let k = crate::char_sums::kloosterman(ctx, a)?;
    weight_from_k(code, k)
}

fn weight_from_k(code: &CodeSpec<'_>, k: i64) -> Result<BigUint> {
    let q = BigInt::from(code.ctx.q());
    let twice: BigInt = match code.group {
        Group::So2Minus | Group::O2Minus => &q + 1 + k,
        Group::So4Minus => {
            let k2 = k * k - code.ctx.q() as i64;
            let q2 = &q * &q;
            &q2 * (&q2 * &q2 + &q2 * &q - 1 + k2)
        }
    };
    let (w, rem) = twice.div_rem(&BigInt::from(2));
    if !rem.is_zero() || w.sign() == Sign::Minus {
        return Err(Error::NonIntegralResult("dual codeword weight"));
    }
    Ok(w.to_biguint().expect("nonnegative"))
}

/// Weight of c(a) counted coordinate by coordinate from the trace profile.
pub fn dual_codeword_weight_direct(code: &CodeSpec<'_>, a: Felt) -> BigUint {
    let ctx = code.ctx;
    code.profile
        .support()
        .filter(|(beta, _)| ctx.trace(ctx.mul(a, *beta)) == 1)
        .map(|(_, c)| c)
        .sum()
}

/// Weight -> number of dual codewords c(a), a in F_q.
pub fn dual_weight_distribution(code: &CodeSpec<'_>) -> Result<BTreeMap<BigUint, u64>> {
    let table = KloostermanTable::build(code.ctx)?;
    let mut out = BTreeMap::new();
    out.insert(BigUint::zero(), 1u64);
    for (t, count) in table.value_profile().counts {
        *out.entry(weight_from_k(code, t)?).or_insert(0) += count;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Full,
    Prefix(usize),
}

/// Exact frequencies C_j of each weight j, complete or up to a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub length: BigUint,
    pub mode: Mode,
    pub counts: Vec<BigUint>,
}

impl WeightDistribution {
    pub fn get(&self, j: usize) -> Option<&BigUint> {
        self.counts.get(j)
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn is_full(&self) -> bool {
        self.mode == Mode::Full
    }

    /// CSV with columns `w,frequency`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("w,frequency\n");
        for (w, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{w},{c}");
        }
        out
    }

    /// Four (w, frequency) column pairs, filled column by column.
    pub fn to_paper(&self) -> String {
        let cells: Vec<(String, String)> = self
            .counts
            .iter()
            .enumerate()
            .map(|(w, c)| (w.to_string(), c.to_string()))
            .collect();
        layout::paired_columns(("w", "frequency"), &cells, 4)
    }
}

fn mode_for(n: usize, max_j: Option<usize>) -> (Mode, usize) {
    match max_j {
        Some(j) if j < n => (Mode::Prefix(j), j),
        _ => (Mode::Full, n),
    }
}

/// C(C_j = C_{N-j}) on a full distribution.
pub fn symmetry_check(wd: &WeightDistribution) -> Result<bool> {
    if !wd.is_full() {
        return Err(Error::Range {
            what: "mode",
            value: 0,
            allowed: "full distribution",
        });
    }
    let c = &wd.counts;
    Ok(c.iter().eq(c.iter().rev()))
}

/// binom(n, k) for small k and arbitrary n.
pub(crate) fn binomial(n: &BigUint, k: usize) -> BigUint {
    let kb = BigUint::from(k);
    if &kb > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

fn binomial_row(n: &BigUint, upto: usize) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(upto + 1);
    let mut acc = BigUint::one();
    row.push(acc.clone());
    for i in 0..upto {
        if BigUint::from(i) >= *n {
            row.push(BigUint::zero());
            acc = BigUint::zero();
            continue;
        }
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
        row.push(acc.clone());
    }
    row
}

fn prefix_limit(code: &CodeSpec<'_>, max_j: Option<usize>) -> Result<(Mode, usize)> {
    match (code.length_usize(), max_j) {
        (Some(n), None) if n <= MAX_FULL_LENGTH => Ok((Mode::Full, n)),
        (_, None) => Err(Error::BudgetExceeded {
            needed: code.length.to_u128().unwrap_or(u128::MAX),
            budget: MAX_FULL_LENGTH as u128,
        }),
        (n, Some(j)) => {
            let n = n.unwrap_or(usize::MAX);
            if j >= n && n <= MAX_FULL_LENGTH {
                return Ok((Mode::Full, n));
            }
            if j > MAX_PREFIX {
                return Err(Error::BudgetExceeded {
                    needed: j as u128,
                    budget: MAX_PREFIX as u128,
                });
            }
            Ok(mode_for(n, Some(j)))
        }
    }
}

/// Counts codewords of each weight by a DP over trace values: the state is
/// (weight so far, partial field sum), and trace value beta with n(beta)
/// coordinates contributes binom(n(beta), nu) ways to pick nu of them.
pub fn weight_distribution_dp(
    code: &CodeSpec<'_>,
    max_j: Option<usize>,
) -> Result<WeightDistribution> {
    let (mode, limit) = prefix_limit(code, max_j)?;
    let ctx = code.ctx;
    let q = ctx.q() as usize;
    let support: Vec<(Felt, &BigUint)> = code.profile.support().collect();
    let cost: u128 = support
        .iter()
        .map(|(_, n)| {
            let nu = n.to_usize().unwrap_or(usize::MAX).min(limit) as u128 + 1;
            nu * (limit as u128 + 1) * q as u128
        })
        .sum();
    ctx.check_budget(cost)?;

    let mut rows: HashMap<&BigUint, Vec<BigUint>> = HashMap::new();
    let mut dp = vec![BigUint::zero(); (limit + 1) * q];
    dp[0] = BigUint::one();
    let mut reach = 0usize;
    for (beta, n) in support {
        let row = rows
            .entry(n)
            .or_insert_with(|| binomial_row(n, n.to_usize().unwrap_or(usize::MAX).min(limit)));
        let top = row.len() - 1;
        let mut next = vec![BigUint::zero(); (limit + 1) * q];
        for w in 0..=reach {
            for s in 0..q {
                let cur = &dp[w * q + s];
                if cur.is_zero() {
                    continue;
                }
                for nu in 0..=top.min(limit - w) {
                    let target = if nu % 2 == 1 { s ^ beta.index() } else { s };
                    next[(w + nu) * q + target] += cur * &row[nu];
                }
            }
        }
        reach = (reach + top).min(limit);
        dp = next;
    }
    let counts = (0..=limit)
        .map(|w| std::mem::take(&mut dp[w * q]))
        .collect();
    Ok(WeightDistribution {
        length: code.length.clone(),
        mode,
        counts,
    })
}

/// Krawtchouk values K_0(i), ..., K_limit(i) for length n, by the
/// three-term recurrence with exact division.
fn krawtchouk_column(n: usize, i: usize, limit: usize) -> Result<Vec<BigInt>> {
    let nb = BigInt::from(n);
    let slope = BigInt::from(n as i64 - 2 * i as i64);
    let mut col = Vec::with_capacity(limit + 1);
    col.push(BigInt::one());
    if limit >= 1 {
        col.push(slope.clone());
    }
    for k in 1..limit {
        let num: BigInt = &slope * &col[k] - (&nb - k + 1) * &col[k - 1];
        let (quot, rem) = num.div_rem(&BigInt::from(k + 1));
        if !rem.is_zero() {
            return Err(Error::NonIntegralResult("Krawtchouk recurrence"));
        }
        col.push(quot);
    }
    Ok(col)
}

/// C_j = (1/q) sum_i B_i K_j(i) with B the dual weight distribution.
pub fn weight_distribution_macwilliams(
    code: &CodeSpec<'_>,
    max_j: Option<usize>,
) -> Result<WeightDistribution> {
    let n = match code.length_usize() {
        Some(n) if n <= MAX_MACWILLIAMS_LENGTH => n,
        _ => {
            return Err(Error::BudgetExceeded {
                needed: code.length.to_u128().unwrap_or(u128::MAX),
                budget: MAX_MACWILLIAMS_LENGTH as u128,
            })
        }
    };
    let (mode, limit) = mode_for(n, max_j);
    let dual = dual_weight_distribution(code)?;
    let mut acc = vec![BigInt::zero(); limit + 1];
    for (w, mult) in dual {
        let w = w.to_usize().expect("dual weight bounded by length");
        let col = krawtchouk_column(n, w, limit)?;
        for (slot, k) in acc.iter_mut().zip(col) {
            *slot += k * mult;
        }
    }
    let q = BigInt::from(code.ctx.q());
    let counts = acc
        .into_iter()
        .map(|v| {
            let (c, rem) = v.div_rem(&q);
            if !rem.is_zero() {
                return Err(Error::NonIntegralResult("MacWilliams transform"));
            }
            c.to_biguint()
                .ok_or(Error::NonIntegralResult("negative MacWilliams count"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightDistribution {
        length: code.length.clone(),
        mode,
        counts,
    })
}

/// Exhaustive scan of F_2^N over the canonical coordinate order.
pub fn weight_distribution_bruteforce(code: &CodeSpec<'_>) -> Result<WeightDistribution> {
    match code.length_usize() {
        Some(n) if n <= MAX_BRUTEFORCE_LENGTH => {}
        _ => {
            return Err(Error::BudgetExceeded {
                needed: code.length.to_u128().unwrap_or(u128::MAX),
                budget: MAX_BRUTEFORCE_LENGTH as u128,
            })
        }
    }
    weight_distribution_of_coordinates(code.ctx, &code.coordinates()?)
}

/// Exhaustive weight distribution of { u : sum u_i x_i = 0 } for the given coordinates.
pub fn weight_distribution_of_coordinates(
    ctx: &FieldCtx,
    coords: &[Felt],
) -> Result<WeightDistribution> {
    let n = coords.len();
    if n > MAX_BRUTEFORCE_LENGTH {
        return Err(Error::BudgetExceeded {
            needed: n as u128,
            budget: MAX_BRUTEFORCE_LENGTH as u128,
        });
    }
    ctx.check_budget(1u128 << n)?;
    let mut counts = vec![0u64; n + 1];
    counts[0] = 1;
    let mut sum = Felt::ZERO;
    let mut weight = 0usize;
    let mut u = 0u32;
    // Gray code walk: step i flips the lowest set bit of i
    for i in 1u32..(1u32 << n) {
        let bit = i.trailing_zeros() as usize;
        u ^= 1 << bit;
        sum += coords[bit];
        if u & (1 << bit) != 0 {
            weight += 1;
        } else {
            weight -= 1;
        }
        if sum.is_zero() {
            counts[weight] += 1;
        }
    }
    Ok(WeightDistribution {
        length: BigUint::from(n),
        mode: Mode::Full,
        counts: counts.into_iter().map(BigUint::from).collect(),
    })
}
