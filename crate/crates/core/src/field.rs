//! Arithmetic in GF(2^r) with a polynomial basis.
//!
//! Elements are stored as the integer whose binary digits are the
//! coefficients of the representing polynomial, so addition is XOR and
//! every enumeration of the field runs in ascending integer order.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;

/// Default number of terms a brute-force enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// Ceiling for [`FieldCtx::with_budget`]; requests above it are rejected.
pub const HARD_BUDGET_CAP: u128 = 1 << 36;

/// Lexicographically smallest irreducible mask for each degree 1..=24.
const DEFAULT_POLYS: [u64; MAX_DEGREE as usize] = [
    0x2, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b, 0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x100001b,
];

/// An element of GF(2^r) in polynomial-basis encoding.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Add for Felt {
    type Output = Felt;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Felt) -> Felt {
        Felt(self.0 ^ rhs.0)
    }
}

impl AddAssign for Felt {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Felt) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Felt({:#x})", self.0)
    }
}

impl fmt::LowerHex for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

/// Degree of a nonzero GF(2)[z] polynomial.
fn poly_degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

/// Carry-less product of two polynomials whose degrees sum to at most 63.
#[inline]
fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 && poly_degree(a) >= dm {
        a ^= m << (poly_degree(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = poly_rem(a, b);
        a = b;
        b = t;
    }
    a
}

/// Ben-Or irreducibility test over GF(2).
pub fn is_irreducible(poly: u64) -> bool {
    if poly < 2 {
        return false;
    }
    let d = poly_degree(poly);
    if d == 1 {
        return true;
    }
    if poly & 1 == 0 {
        return false;
    }
    // x^(2^i) mod poly, compared against x
    let mut power = 0b10u64;
    for _ in 1..=d / 2 {
        power = poly_rem(clmul(power, power), poly);
        if poly_gcd(poly, power ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

/// All irreducible masks of exact degree `r`, ascending.
pub fn irreducible_polys(r: u32) -> impl Iterator<Item = u64> {
    let lo = 1u64 << r;
    (lo..lo << 1).filter(|&p| is_irreducible(p))
}

/// The default reduction polynomial for degree `r`.
pub fn default_poly(r: u32) -> Result<u64> {
    check_degree(r)?;
    Ok(DEFAULT_POLYS[(r - 1) as usize])
}

fn check_degree(r: u32) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&r) {
        Ok(())
    } else {
        Err(Error::Range {
            what: "r",
            value: r as i128,
            allowed: "1..=24",
        })
    }
}

/// Immutable context for GF(2^r).
#[derive(Clone)]
pub struct FieldCtx {
    r: u32,
    q: u32,
    poly: u64,
    trace_mask: u32,
    trace_table: Vec<u8>,
    budget: u128,
    inverses: OnceLock<Vec<u32>>,
    pub(crate) kloosterman_memo: OnceLock<Vec<i64>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("r", &self.r)
            .field("q", &self.q)
            .field("poly", &format_args!("{:#x}", self.poly))
            .field("budget", &self.budget)
            .finish()
    }
}

impl FieldCtx {
    /// Builds GF(2^r) over the default reduction polynomial.
    pub fn new(r: u32) -> Result<Self> {
        Self::with_poly(r, default_poly(r)?)
    }

    /// Builds GF(2^r) over `poly`, which must be irreducible of degree `r`.
    pub fn with_poly(r: u32, poly: u64) -> Result<Self> {
        check_degree(r)?;
        if poly == 0 || poly_degree(poly) != r || !is_irreducible(poly) {
            return Err(Error::Reducible { poly, degree: r });
        }
        let q = 1u32 << r;
        let mut ctx = FieldCtx {
            r,
            q,
            poly,
            trace_mask: 0,
            trace_table: Vec::new(),
            budget: DEFAULT_BUDGET,
            inverses: OnceLock::new(),
            kloosterman_memo: OnceLock::new(),
        };
        // trace is linear, so it is fixed by its values on the basis z^i
        let mut mask = 0u32;
        for i in 0..r {
            if ctx.trace_by_frobenius(Felt(1 << i)) == 1 {
                mask |= 1 << i;
            }
        }
        ctx.trace_mask = mask;
        ctx.trace_table = (0..q)
            .map(|x| ((x & mask).count_ones() & 1) as u8)
            .collect();
        Ok(ctx)
    }

    /// Replaces the enumeration budget. Values above [`HARD_BUDGET_CAP`] are refused.
    pub fn with_budget(mut self, budget: u128) -> Result<Self> {
        if budget > HARD_BUDGET_CAP {
            return Err(Error::Range {
                what: "budget",
                value: budget as i128,
                allowed: "at most 2^36",
            });
        }
        self.budget = budget;
        Ok(self)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    /// Bit i is tr(z^i); tr(x) is the parity of `x & trace_mask`.
    pub fn trace_mask(&self) -> u32 {
        self.trace_mask
    }

    pub fn trace_table(&self) -> &[u8] {
        &self.trace_table
    }

    /// Errors with `BudgetExceeded` if an enumeration of `needed` terms is too large.
    pub fn check_budget(&self, needed: u128) -> Result<()> {
        if needed > self.budget {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// All field elements in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.q).map(Felt)
    }

    /// The nonzero elements in ascending order.
    pub fn nonzero(&self) -> impl Iterator<Item = Felt> + Clone {
        (1..self.q).map(Felt)
    }

    /// Reads an element from its integer encoding.
    pub fn elem(&self, bits: u32) -> Result<Felt> {
        if bits < self.q {
            Ok(Felt(bits))
        } else {
            Err(Error::Range {
                what: "element",
                value: bits as i128,
                allowed: "below q",
            })
        }
    }

    #[inline]
    pub fn add(&self, x: Felt, y: Felt) -> Felt {
        x + y
    }

    #[inline]
    pub fn mul(&self, x: Felt, y: Felt) -> Felt {
        Felt(poly_rem(clmul(x.0 as u64, y.0 as u64), self.poly) as u32)
    }

    #[inline]
    pub fn square(&self, x: Felt) -> Felt {
        self.mul(x, x)
    }

    pub fn pow(&self, x: Felt, mut e: u64) -> Felt {
        let mut base = x;
        let mut acc = Felt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Felt) -> Result<Felt> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(table) = self.inverses.get() {
            return Ok(Felt(table[x.index()]));
        }
        Ok(self.pow(x, self.q as u64 - 2))
    }

    /// Inverse of a nonzero element via the memoized table (index 0 maps to 0).
    #[inline]
    pub fn inv_nonzero(&self, x: Felt) -> Felt {
        debug_assert!(!x.is_zero());
        Felt(self.inverse_table()[x.index()])
    }

    /// Table of inverses, built once by batch inversion.
    pub fn inverse_table(&self) -> &[u32] {
        self.inverses.get_or_init(|| {
            let q = self.q as usize;
            let mut prefix = vec![Felt::ONE; q];
            let mut acc = Felt::ONE;
            for x in 1..q {
                prefix[x] = acc;
                acc = self.mul(acc, Felt(x as u32));
            }
            let mut inv_acc = self.pow(acc, self.q as u64 - 2);
            let mut table = vec![0u32; q];
            for x in (1..q).rev() {
                table[x] = self.mul(inv_acc, prefix[x]).0;
                inv_acc = self.mul(inv_acc, Felt(x as u32));
            }
            table
        })
    }

    pub fn div(&self, x: Felt, y: Felt) -> Result<Felt> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Absolute trace to GF(2), read from the precomputed table.
    #[inline]
    pub fn trace(&self, x: Felt) -> u8 {
        self.trace_table[x.index()]
    }

    /// x + x^2 + ... + x^(2^(r-1)), evaluated with field multiplications.
    pub fn trace_by_frobenius(&self, x: Felt) -> u8 {
        let mut acc = Felt::ZERO;
        let mut y = x;
        for _ in 0..self.r {
            acc += y;
            y = self.square(y);
        }
        debug_assert!(acc.0 <= 1, "trace left the prime field");
        acc.0 as u8
    }

    /// The canonical additive character (-1)^tr(x).
    #[inline]
    pub fn lambda(&self, x: Felt) -> i64 {
        1 - 2 * self.trace(x) as i64
    }

    /// Whether `b` lies in {a^2 + a}; equivalent to tr(b) = 0.
    pub fn in_artin_schreier_image(&self, b: Felt) -> bool {
        self.trace(b) == 0
    }

    /// Smallest element of trace one, the default form parameter.
    pub fn smallest_trace_one(&self) -> Felt {
        self.elements()
            .find(|&x| self.trace(x) == 1)
            .expect("trace is onto GF(2)")
    }

    pub fn trace_one_count(&self) -> usize {
        self.trace_table.iter().filter(|&&t| t == 1).count()
    }
}
