//! Acceptance suite: one PASS/FAIL line per criterion, exact integer comparisons only.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kloomo::char_sums::{
    artin_schreier_sums_check, carlitz_k2, convolution_identity_sides, kgl, kgl_closed,
    kloosterman, kloosterman_m, moment_direct, moment_direct_with_jobs, KloostermanTable,
    ValueProfile,
};
use kloomo::codes::{
    build_code, symmetry_check, weight_distribution_bruteforce, weight_distribution_dp,
    weight_distribution_macwilliams, WeightDistribution,
};
use kloomo::field::irreducible_polys;
use kloomo::moments::{mk2_recursive, mk_even_recursive, mk_recursive, salie_mk, Source};
use kloomo::ortho::{
    gauss_sum, gauss_sum_enumerated, gauss_sum_general, group_elements_bruteforce, group_order,
    parabolic_machinery, q_binomial_theorem_sides, trace_profile, trace_profile_bruteforce,
    QuadFormMinus, Variant,
};
use kloomo::{FieldCtx, Group};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

type Outcome = Result<(), String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Outcome {
    ensure(got == want, || {
        format!("{what}: got {got:?}, expected {want:?}")
    })
}

fn field(r: u32) -> Result<FieldCtx, String> {
    FieldCtx::new(r).map_err(|e| e.to_string())
}

fn big(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

fn parse(s: &str) -> BigInt {
    s.parse().expect("decimal literal")
}

macro_rules! tri {
    ($e:expr) => {
        $e.map_err(|e| e.to_string())?
    };
}

const WDIST_SO2_16: [u64; 18] = [
    1, 1, 8, 40, 140, 396, 792, 1208, 1510, 1510, 1208, 792, 396, 140, 40, 8, 1, 1,
];

const WDIST_SO2_32: [u64; 34] = [
    1, 1, 16, 176, 1240, 7352, 34800, 133840, 433532, 1204220, 2892592, 6049808, 11088968,
    17909672, 25586000, 32411632, 36463878, 36463878, 32411632, 25586000, 17909672, 11088968,
    6049808, 2892592, 1204220, 433532, 133840, 34800, 7352, 1240, 176, 16, 1, 1,
];

const MK_16: [&str; 30] = [
    "15",
    "1",
    "239",
    "289",
    "7631",
    "22081",
    "300719",
    "1343329",
    "13118351",
    "72973441",
    "604249199",
    "3760049569",
    "28661262671",
    "188901585601",
    "1380879340079",
    "9373110103009",
    "67076384888591",
    "462209786722561",
    "3272087534565359",
    "22721501074479649",
    "159966016268924111",
    "1115184421375168321",
    "7829178965854277039",
    "54689811340914235489",
    "383400882469952537231",
    "2680945149821576426881",
    "18780921149940510987119",
    "131394922435183254906529",
    "920122084792925568335951",
    "6439066453841188580322241",
];

const MK_32: [&str; 30] = [
    "31",
    "1",
    "991",
    "-959",
    "63391",
    "-63359",
    "5102431",
    "-678719",
    "460435231",
    "613044481",
    "44833141471",
    "138050637121",
    "4621008512671",
    "22291740481921",
    "497555476630111",
    "3171377872090561",
    "55381758830599711",
    "423220459165032961",
    "6318551635327312351",
    "54461730980167425601",
    "733937760431358760351",
    "6855945343839827241601",
    "86346164924243497892191",
    "851252336789971927746241",
    "10249523095374924648418591",
    "104764273348415132423811841",
    "1224170008071148563308433631",
    "12819574031043721011365916481",
    "146828974390583504114568758431",
    "1562774752282717527826758007681",
];

fn wdist_so2_16() -> Outcome {
    let ctx = field(4)?;
    let code = tri!(build_code(&ctx, Group::So2Minus));
    let want = big(&WDIST_SO2_16);
    let dp = tri!(weight_distribution_dp(&code, None));
    let mw = tri!(weight_distribution_macwilliams(&code, None));
    let bf = tri!(weight_distribution_bruteforce(&code));
    eq("DP", &dp.counts, &want)?;
    eq("MacWilliams", &mw.counts, &want)?;
    eq("brute force", &bf.counts, &want)?;
    eq("C_2", dp.counts[2].clone(), BigUint::from(8u32))?;
    eq("C_8", dp.counts[8].clone(), BigUint::from(1510u32))
}

fn wdist_so2_32() -> Outcome {
    let ctx = field(5)?;
    let code = tri!(build_code(&ctx, Group::So2Minus));
    let want = big(&WDIST_SO2_32);
    let dp = tri!(weight_distribution_dp(&code, None));
    let mw = tri!(weight_distribution_macwilliams(&code, None));
    eq("DP", &dp.counts, &want)?;
    eq("MacWilliams", &mw.counts, &want)?;
    eq("C_16", dp.counts[16].clone(), BigUint::from(36463878u32))
}

fn moment_table(r: u32, table: &[&str; 30]) -> Outcome {
    let ctx = field(r)?;
    let want: Vec<BigInt> = table.iter().map(|s| parse(s)).collect();
    let g1 = tri!(mk_recursive(&ctx, 29, Source::G1));
    let g2 = tri!(mk_recursive(&ctx, 29, Source::G2));
    let direct: Vec<BigInt> = (0..=29)
        .map(|h| moment_direct(&ctx, 1, h))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let salie = tri!(salie_mk(&ctx, 4));
    eq("G1 recursion", &g1.values, &want)?;
    eq("G2 recursion", &g2.values, &want)?;
    eq("direct", &direct, &want)?;
    eq("Salie h<=4", &salie.values[..], &want[..5])
}

fn so4_recursions() -> Outcome {
    let ctx = field(4)?;
    let mk2 = tri!(mk2_recursive(&ctx, 5));
    let even = tri!(mk_even_recursive(&ctx, 5));
    for h in 1..=5u32 {
        eq(
            &format!("MK_2^{h}"),
            mk2.values[h as usize].clone(),
            tri!(moment_direct(&ctx, 2, h)),
        )?;
        eq(
            &format!("MK^{}", 2 * h),
            even.values[h as usize].clone(),
            tri!(moment_direct(&ctx, 1, 2 * h)),
        )?;
    }
    eq("MK_2^1", mk2.values[1].clone(), BigInt::from(-1))?;
    eq("MK^2", even.values[1].clone(), BigInt::from(239))
}

fn gauss_oracles() -> Outcome {
    for r in 1..=5 {
        let ctx = field(r)?;
        let form = tri!(QuadFormMinus::with_default_param(&ctx, 1));
        for g in [Group::So2Minus, Group::O2Minus] {
            let elems = tri!(group_elements_bruteforce(&form, g));
            eq("group size", BigUint::from(elems.len()), g.order(ctx.q()))?;
            for a in ctx.nonzero() {
                eq(
                    &format!("q={} {g} a={a:?}", ctx.q()),
                    tri!(gauss_sum(&ctx, g, a)),
                    gauss_sum_enumerated(&ctx, &elems, a),
                )?;
            }
        }
    }
    let c2 = field(1)?;
    let form4 = tri!(QuadFormMinus::with_default_param(&c2, 2));
    let so4 = tri!(group_elements_bruteforce(&form4, Group::So4Minus));
    eq("|SO^-(4,2)|", so4.len(), 60)?;
    let one = kloomo::Felt::ONE;
    eq(
        "G3 q=2 closed",
        tri!(gauss_sum(&c2, Group::So4Minus, one)),
        BigInt::from(-28),
    )?;
    eq(
        "G3 q=2 brute",
        gauss_sum_enumerated(&c2, &so4, one),
        BigInt::from(-28),
    )?;
    for r in 1..=4 {
        let ctx = field(r)?;
        for a in ctx.nonzero() {
            eq(
                "n=1 SO",
                tri!(gauss_sum_general(Variant::SOminus, 1, &ctx, a)),
                tri!(gauss_sum(&ctx, Group::So2Minus, a)),
            )?;
            eq(
                "n=1 O",
                tri!(gauss_sum_general(Variant::Ominus, 1, &ctx, a)),
                tri!(gauss_sum(&ctx, Group::O2Minus, a)),
            )?;
            eq(
                "n=2 SO",
                tri!(gauss_sum_general(Variant::SOminus, 2, &ctx, a)),
                tri!(gauss_sum(&ctx, Group::So4Minus, a)),
            )?;
        }
    }
    Ok(())
}

fn trace_profiles() -> Outcome {
    for r in 1..=6 {
        let ctx = field(r)?;
        for g in [Group::So2Minus, Group::O2Minus] {
            eq(
                &format!("q={} {g}", ctx.q()),
                tri!(trace_profile(&ctx, g)),
                tri!(trace_profile_bruteforce(&ctx, g)),
            )?;
        }
    }
    let c2 = field(1)?;
    let n3 = tri!(trace_profile(&c2, Group::So4Minus));
    eq("G3 q=2", &n3.counts, &big(&[16, 44]))?;
    eq(
        "G3 q=2 brute",
        tri!(trace_profile_bruteforce(&c2, Group::So4Minus)),
        n3,
    )?;
    for r in 2..=4 {
        let ctx = field(r)?;
        let q = BigInt::from(ctx.q());
        for g in Group::ALL {
            let prof = tri!(trace_profile(&ctx, g));
            let order = BigInt::from(g.order(ctx.q()));
            let sums: Vec<BigInt> = ctx
                .nonzero()
                .map(|a| gauss_sum(&ctx, g, a))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for beta in ctx.elements() {
                let mut rhs = order.clone();
                for (a, s) in ctx.nonzero().zip(&sums) {
                    rhs += ctx.lambda(ctx.mul(a, beta)) * s;
                }
                eq(
                    &format!("q={} {g} beta={beta:?}", ctx.q()),
                    &q * BigInt::from(prof.get(beta).clone()),
                    rhs,
                )?;
            }
        }
    }
    Ok(())
}

fn full_distribution_checks(wd: &WeightDistribution, n: usize, r: u32) -> Outcome {
    ensure(tri!(symmetry_check(wd)), || {
        format!("N={n}: C_j != C_(N-j)")
    })?;
    eq(
        &format!("N={n}: sum C_j"),
        wd.total(),
        BigUint::one() << (n - r as usize),
    )
}

fn structural() -> Outcome {
    for r in 2..=6 {
        let ctx = field(r)?;
        let q = ctx.q() as i64;
        let table = tri!(KloostermanTable::build(&ctx));
        for (a, k) in table.iter() {
            ensure(k * k <= 4 * q, || {
                format!("Weil bound fails at q={q} a={a:?}: K={k}")
            })?;
        }
        let profile = table.value_profile();
        eq(
            &format!("value set q={q}"),
            profile.counts.keys().copied().collect::<Vec<_>>(),
            ValueProfile::admissible_values(q as u64),
        )?;
    }
    for r in 1..=4 {
        let ctx = field(r)?;
        for a in ctx.nonzero() {
            eq(
                "Carlitz",
                tri!(kloosterman_m(&ctx, 2, a)),
                tri!(carlitz_k2(&ctx, a)),
            )?;
            for t in 1..=4 {
                eq("K_GL", tri!(kgl(&ctx, t, a)), tri!(kgl_closed(&ctx, t, a)))?;
            }
        }
        for beta in ctx.elements() {
            for m in 1..=2 {
                let sides = tri!(convolution_identity_sides(&ctx, m, beta));
                ensure(sides.holds(), || {
                    format!("convolution m={m} q={} beta={beta:?}: {sides:?}", ctx.q())
                })?;
            }
        }
        let b = ctx.smallest_trace_one();
        for beta in ctx.nonzero() {
            ensure(tri!(artin_schreier_sums_check(&ctx, beta, b)), || {
                format!("Artin-Schreier sums q={} beta={beta:?}", ctx.q())
            })?;
        }
    }
    for r in 1..=6 {
        let ctx = field(r)?;
        for g in [Group::So2Minus, Group::O2Minus] {
            let code = tri!(build_code(&ctx, g));
            let n = code.length_usize().ok_or("length")?;
            full_distribution_checks(&tri!(weight_distribution_dp(&code, None)), n, r)?;
            full_distribution_checks(&tri!(weight_distribution_macwilliams(&code, None)), n, r)?;
        }
    }
    let c2 = field(1)?;
    let g3 = tri!(build_code(&c2, Group::So4Minus));
    full_distribution_checks(&tri!(weight_distribution_dp(&g3, None)), 60, 1)?;
    for q in [2u32, 4] {
        for n in 1..=4 {
            let mut total = BigUint::zero();
            for cell in 0..n {
                total += tri!(parabolic_machinery(n, cell, q)).cell_mass;
            }
            eq(
                &format!("|O^-({},{q})|", 2 * n),
                total,
                group_order(Variant::Ominus, n, q),
            )?;
        }
    }
    for q in [2u32, 4, 8] {
        let x = -BigInt::from(q) * BigInt::from(q);
        for n in 0..=6 {
            let (lhs, rhs) = q_binomial_theorem_sides(n, q, &x);
            eq(&format!("q-binomial theorem n={n} q={q}"), lhs, rhs)?;
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    for r in 3..=5 {
        let mut polys = irreducible_polys(r);
        let (p1, p2) = (polys.next().ok_or("poly")?, polys.next().ok_or("poly")?);
        let c1 = tri!(FieldCtx::with_poly(r, p1));
        let c2 = tri!(FieldCtx::with_poly(r, p2));
        eq(
            "MK series",
            tri!(mk_recursive(&c1, 20, Source::G1)),
            tri!(mk_recursive(&c2, 20, Source::G1)),
        )?;
        eq(
            "MK_2 series",
            tri!(mk2_recursive(&c1, 6)),
            tri!(mk2_recursive(&c2, 6)),
        )?;
        eq(
            "Salie series",
            tri!(salie_mk(&c1, 4)),
            tri!(salie_mk(&c2, 4)),
        )?;
        for g in [Group::So2Minus, Group::O2Minus] {
            let a = tri!(build_code(&c1, g));
            let b = tri!(build_code(&c2, g));
            eq(
                "weight distribution",
                tri!(weight_distribution_dp(&a, None)),
                tri!(weight_distribution_dp(&b, None)),
            )?;
        }
    }
    for r in [4u32, 6] {
        let reference = field(r)?;
        let table: Vec<i64> = tri!(KloostermanTable::build(&reference))
            .iter()
            .map(|(_, k)| k)
            .collect();
        let moments: Vec<BigInt> = (0..=8)
            .map(|h| moment_direct(&reference, 1, h))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for jobs in [2usize, 3, 4, 8] {
            let fresh = field(r)?;
            let t: Vec<i64> = tri!(KloostermanTable::build_with_jobs(&fresh, jobs))
                .iter()
                .map(|(_, k)| k)
                .collect();
            eq(&format!("table jobs={jobs}"), &t, &table)?;
            let again = field(r)?;
            let m: Vec<BigInt> = (0..=8)
                .map(|h| moment_direct_with_jobs(&again, 1, h, jobs))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            eq(&format!("moments jobs={jobs}"), &m, &moments)?;
        }
        for a in reference.nonzero() {
            eq(
                "table entry",
                table[a.index() - 1],
                tri!(kloosterman(&reference, a)),
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "1 C(SO^-(2,16)) weight distribution, DP = MacWilliams = brute force",
            Some(Duration::from_secs(1)),
            wdist_so2_16,
        ),
        (
            "2 C(SO^-(2,32)) weight distribution, DP = MacWilliams",
            Some(Duration::from_secs(1)),
            wdist_so2_32,
        ),
        (
            "3 MK^h over F_16, h <= 29, four-way agreement",
            Some(Duration::from_secs(5)),
            || moment_table(4, &MK_16),
        ),
        (
            "4 MK^h over F_32, h <= 29, four-way agreement",
            Some(Duration::from_secs(5)),
            || moment_table(5, &MK_32),
        ),
        (
            "5 SO^-(4,16) recursions for MK_2^h and MK^(2h), h <= 5",
            Some(Duration::from_secs(10)),
            so4_recursions,
        ),
        (
            "6 Gauss sums: closed forms = enumeration = general formula",
            None,
            gauss_oracles,
        ),
        (
            "7 Trace profiles: closed forms = enumeration, Gauss-sum consistency",
            None,
            trace_profiles,
        ),
        ("8 Structural properties", None, structural),
        (
            "9 Determinism: polynomial and worker-count invariance",
            None,
            determinism,
        ),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:.0?}"));
            }
        }
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
