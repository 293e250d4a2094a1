//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Every comparison is exact; the only tolerance is
//! the wall-clock budget of criterion 1.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use levelscope::{
    cartier_manin_direct, extract_operator, family, hasse_invariant, level_chain, level_direct,
    random_curve, relevant_ideal, CartierData, Classification, CurveModel, Family, FpMatrix,
    HomIdeal, LevelResult, Monomial, MultiPoly, Prediction, PrimeField, UniPoly,
};
use levelscope_cli::record::RunRecord;
use levelscope_cli::report::{TRANSFORM_QUINTIC, TRANSFORM_SEXTIC};
use levelscope_cli::sweep::{curve_record, odd_primes_in, sweep_records, SweepFamily, SweepPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const XYZ: [&str; 3] = ["x", "y", "z"];
const RUNTIME_BUDGET: Duration = Duration::from_secs(600);
const MAX_E: u32 = 8;

type Check = Result<String, String>;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn quintic(p: u64) -> CurveModel {
    CurveModel::from_unipoly(UniPoly::from_i64(fp(p), &[2, 0, 0, 0, 0, 1]), Some(2)).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn level_of(f: &MultiPoly) -> Result<LevelResult, String> {
    level_chain(f, MAX_E).map_err(|e| e.to_string())
}

fn c1_quintic_table() -> Check {
    let start = Instant::now();
    for (p, level, p_rank) in [(11u64, 2u32, 2usize), (13, 4, 0), (17, 3, 0)] {
        let curve = quintic(p);
        let data = CartierData::from_curve(&curve).map_err(|e| e.to_string())?;
        let res = level_of(&curve.homogenize())?;
        ensure(res.level == Some(level), || {
            format!("p={p}: level {:?}, expected {level}", res.level)
        })?;
        ensure(data.p_rank() == p_rank, || {
            format!("p={p}: p-rank {}, expected {p_rank}", data.p_rank())
        })?;
        if p == 11 {
            let m = relevant_ideal(2, fp(11)).unwrap();
            let chain = res.distinct_chain();
            ensure(chain == [HomIdeal::unit(fp(11), 3), m.clone()], || {
                format!("p=11: chain {chain:?}, expected R > {m}")
            })?;
        }
    }
    let took = start.elapsed();
    ensure(took <= RUNTIME_BUDGET, || format!("took {took:?}"))?;
    Ok(format!(
        "levels 2/4/3, p-ranks 2/0/0, chain R > (z^2, x*z, x^3); {:.2?} of 600 s",
        took
    ))
}

fn c2_transform_examples() -> Check {
    for (poly, level) in [(TRANSFORM_QUINTIC, 3), (TRANSFORM_SEXTIC, 2)] {
        let f = MultiPoly::parse(poly, fp(13), &XYZ).map_err(|e| e.to_string())?;
        let res = level_of(&f)?;
        ensure(res.level == Some(level), || {
            format!("{poly}: level {:?}, expected {level}", res.level)
        })?;
    }
    Ok("quintic level 3, sextic level 2 over F_13".into())
}

fn random_sweep(p: u64) -> Result<Vec<RunRecord>, String> {
    let plan = SweepPlan {
        family: SweepFamily::Random,
        genus: 2,
        primes: (p, p),
        count: 50,
        seed: 2024,
        max_e: MAX_E,
        ..SweepPlan::default()
    };
    sweep_records(&plan, 0).map_err(|e| e.to_string())
}

fn family_sweep(
    family: SweepFamily,
    genus: u32,
    lo: u64,
    hi: u64,
) -> Result<Vec<RunRecord>, String> {
    let plan = SweepPlan {
        family,
        genus,
        primes: (lo, hi),
        max_e: MAX_E,
        ..SweepPlan::default()
    };
    sweep_records(&plan, 0).map_err(|e| e.to_string())
}

fn c3_ordinary_level_two(sweeps: &[(u64, Vec<RunRecord>)]) -> Check {
    let m: Vec<String> = relevant_ideal(2, fp(11))
        .unwrap()
        .generators()
        .iter()
        .map(|g| g.to_string_with(&XYZ))
        .collect();
    let mut ordinary = 0;
    for (p, records) in sweeps {
        ensure(records.len() == 50, || {
            format!("p={p}: {} records", records.len())
        })?;
        let mut here = 0;
        for r in records.iter().filter(|r| r.rank_c == Some(2)) {
            here += 1;
            ensure(r.level == Some(2), || {
                format!("p={p} h={:?}: level {:?}", r.h, r.level)
            })?;
            ensure(
                r.chain.len() == 2 && r.chain.iter().all(|j| *j == m),
                || format!("p={p} h={:?}: chain {:?}", r.h, r.chain),
            )?;
        }
        ensure(here > 0, || format!("p={p}: no ordinary curve sampled"))?;
        ordinary += here;
    }
    Ok(format!(
        "{ordinary}/200 curves ordinary, all level 2 with J_1 = J_2 = M"
    ))
}

fn is_supersingular_not_superspecial(r: &RunRecord) -> bool {
    r.genus == Some(2) && r.rank_c.is_some_and(|k| k > 0) && r.nilpotency == Some(1)
}

fn c4_supersingular(records: &[RunRecord]) -> Check {
    let hits: Vec<&RunRecord> = records
        .iter()
        .filter(|r| is_supersingular_not_superspecial(r))
        .collect();
    ensure(!hits.is_empty(), || {
        "no supersingular, non-superspecial record".into()
    })?;
    for r in &hits {
        ensure(!r.capped && r.level.is_some_and(|l| l >= 3), || {
            format!("p={} h={:?}: level {:?}", r.prime, r.h, r.level)
        })?;
    }
    ensure(
        hits.iter()
            .any(|r| r.prime == 13 && r.h.as_deref() == Some("x^5 + 2")),
        || "x^5 + 2 at p = 13 missing".into(),
    )?;
    Ok(format!("{} records, all level >= 3", hits.len()))
}

fn c5_no_level_one(records: &[RunRecord]) -> Check {
    let mut n = 0;
    for r in records {
        let g = r.genus.unwrap_or(0) as u64;
        if g >= 2 && r.prime + 1 >= 2 * g {
            n += 1;
            ensure(r.level != Some(1), || {
                format!("p={} h={:?} has level 1", r.prime, r.h)
            })?;
        }
    }
    ensure(n > 0, || "no qualifying records".into())?;
    Ok(format!("{n} records of genus 2 and 3, none of level 1"))
}

fn random_invertible(field: PrimeField, rng: &mut ChaCha8Rng) -> FpMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| rng.random_range(0..field.modulus()) as i64)
                    .collect()
            })
            .collect();
        let a = FpMatrix::from_rows(field, &rows).unwrap();
        if a.rank() == 3 {
            return a;
        }
    }
}

fn c6_gl_invariance() -> Check {
    let field = fp(11);
    let f = quintic(11).homogenize();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..20 {
        let a = random_invertible(field, &mut rng);
        let g = f.linear_change(&a).map_err(|e| e.to_string())?;
        let res = level_of(&g)?;
        ensure(res.level == Some(2), || {
            format!("matrix {i} {a}: level {:?}", res.level)
        })?;
    }
    Ok("20/20 transformed quintics have level 2".into())
}

fn random_form(field: PrimeField, rng: &mut ChaCha8Rng) -> MultiPoly {
    let d = rng.random_range(1..=4);
    loop {
        let mut terms = Vec::new();
        for m in Monomial::all_of_degree(3, d) {
            if rng.random_bool(0.5) {
                terms.push((m, rng.random_range(1..field.modulus())));
            }
        }
        let f = MultiPoly::from_terms(field, 3, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn c7_oracle_equivalence() -> Check {
    let mut checks = 0;
    for p in [3u64, 5, 7] {
        let field = fp(p);
        let mut rng = ChaCha8Rng::seed_from_u64(700 + p);
        for i in 0..20 {
            let f = random_form(field, &mut rng);
            let res = level_chain(&f, 2).map_err(|e| e.to_string())?;
            for e in 1..=2usize {
                let chained = match res.step(e) {
                    Some(j) => j.clone(),
                    None if res.level.is_some() => res.chain.last().unwrap().clone(),
                    None => return Err(format!("p={p} f#{i}: chain ended early")),
                };
                let direct = level_direct(&f, e as u32).map_err(|e| e.to_string())?;
                ensure(chained == direct, || {
                    format!("p={p} f={f} e={e}: chain {chained}, direct {direct}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks}/120 (f, p, e) agree"))
}

fn c8_cartier_powers() -> Check {
    for coeffs in [[2i64, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 1]] {
        for p in [11u64, 13] {
            let h = UniPoly::from_i64(fp(p), &coeffs);
            let c = CartierData::compute(&h, 2).map_err(|e| e.to_string())?.c;
            let direct = cartier_manin_direct(&h, 2, 2).map_err(|e| e.to_string())?;
            let square = c.pow(2).unwrap();
            ensure(direct == square, || {
                format!("p={p} h={coeffs:?}: C_2 {direct}, C^2 {square}")
            })?;
        }
    }
    Ok("C_2 = C^2 for 4 (h, p) pairs".into())
}

fn c9_superspecial_family() -> Check {
    let mut qualifying = 0;
    for p in odd_primes_in(7, 100) {
        let (curve, prediction) = family(Family::MuX, 2, 1, fp(p)).map_err(|e| e.to_string())?;
        let data = CartierData::from_curve(&curve).map_err(|e| e.to_string())?;
        let superspecial = data.classification == Classification::Superspecial;
        ensure(
            (prediction == Prediction::Superspecial) == superspecial,
            || {
                format!(
                    "p={p}: prediction {prediction:?}, class {}",
                    data.classification
                )
            },
        )?;
        if p % 8 == 5 || p % 8 == 7 {
            qualifying += 1;
            ensure(data.c.is_zero() && !data.c_ext.is_zero(), || {
                format!("p={p}: C = {}, C_ext = {}", data.c, data.c_ext)
            })?;
            let r = curve_record(&curve, MAX_E, false).map_err(|e| e.to_string())?;
            ensure(r.capped || r.level.is_some_and(|l| l >= 3), || {
                format!("p={p}: level {:?}", r.level)
            })?;
        }
    }
    Ok(format!(
        "{qualifying} qualifying primes: C = 0, C_ext != 0, level >= 3; predictions match"
    ))
}

fn c10_elliptic() -> Check {
    let mut ordinary = 0;
    let mut total = 0;
    for p in [5u64, 7, 11] {
        for seed in 0..10 {
            let c = random_curve(1, fp(p), 1000 + seed).map_err(|e| e.to_string())?;
            let f = c.homogenize();
            let hasse = hasse_invariant(&f).map_err(|e| e.to_string())?;
            let res = level_of(&f)?;
            let expected = if hasse.is_zero() { 2 } else { 1 };
            ensure(res.level == Some(expected), || {
                format!("p={p} {c}: Hasse {hasse}, level {:?}", res.level)
            })?;
            ordinary += usize::from(!hasse.is_zero());
            total += 1;
        }
    }
    Ok(format!(
        "{total} cubics ({ordinary} ordinary), Hasse != 0 iff level 1"
    ))
}

fn c11_operator_certificates() -> Check {
    let field = fp(5);
    let mut certified = 0;
    for seed in 0..20 {
        let c = random_curve(2, field, 500 + seed).map_err(|e| e.to_string())?;
        let f = c.homogenize();
        let res = level_of(&f)?;
        let Some(e) = res.level.filter(|&e| e <= 2) else {
            continue;
        };
        let op = extract_operator(&f, &res).map_err(|e| e.to_string())?;
        // recombine independently of the library's own check
        let mut sum = MultiPoly::zero(field, 3);
        for (u, g) in &op.pairs {
            sum = sum
                .add(&u.mul(&g.frobenius_power(e).unwrap()).unwrap())
                .unwrap();
        }
        let q = 5u64.pow(e);
        let target = f.pow(q - 5).unwrap();
        ensure(sum == target, || {
            format!("{c}: recombination differs from f^(q-p)")
        })?;
        certified += 1;
    }
    ensure(certified > 0, || "no curve of level <= 2 sampled".into())?;
    Ok(format!("{certified} curves certified exactly"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: u32, name: &str, tolerance: &str, check: Check| {
        let (status, detail) = match check {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status} criterion {n:>2} {name} [{tolerance}]: {detail}");
    };

    report(
        1,
        "quintic table",
        "exact; runtime <= 600 s",
        c1_quintic_table(),
    );
    report(
        2,
        "transform example levels",
        "exact",
        c2_transform_examples(),
    );

    let sweeps: Result<Vec<(u64, Vec<RunRecord>)>, String> = [11u64, 13, 17, 19]
        .into_iter()
        .map(|p| random_sweep(p).map(|r| (p, r)))
        .collect();
    let extra: Result<Vec<RunRecord>, String> = (|| {
        let mut v = family_sweep(SweepFamily::MuConst, 2, 3, 100)?;
        v.extend(family_sweep(SweepFamily::MuX, 2, 3, 100)?);
        v.extend(family_sweep(SweepFamily::MuConst, 3, 5, 13)?);
        v.extend(family_sweep(SweepFamily::MuX, 3, 5, 13)?);
        v.push(curve_record(&quintic(13), MAX_E, false).map_err(|e| e.to_string())?);
        Ok(v)
    })();
    match (sweeps, extra) {
        (Ok(sweeps), Ok(extra)) => {
            let mut all: Vec<RunRecord> = sweeps.iter().flat_map(|(_, r)| r.clone()).collect();
            all.extend(extra);
            report(
                3,
                "ordinary implies level 2",
                "exact, zero failures",
                c3_ordinary_level_two(&sweeps),
            );
            report(
                4,
                "supersingular implies level > 2",
                "exact, zero failures",
                c4_supersingular(&all),
            );
            report(
                5,
                "level exceeds 1",
                "exact, zero failures",
                c5_no_level_one(&all),
            );
        }
        (Err(e), _) | (_, Err(e)) => {
            for (n, name) in [
                (3, "ordinary implies level 2"),
                (4, "supersingular implies level > 2"),
                (5, "level exceeds 1"),
            ] {
                report(
                    n,
                    name,
                    "exact, zero failures",
                    Err(format!("sweep failed: {e}")),
                );
            }
        }
    }
    report(
        6,
        "coordinate invariance",
        "exact, zero failures",
        c6_gl_invariance(),
    );
    report(
        7,
        "chain vs direct oracle",
        "exact, zero failures",
        c7_oracle_equivalence(),
    );
    report(8, "Cartier-Manin powers", "exact", c8_cartier_powers());
    report(
        9,
        "superspecial family",
        "exact, zero failures",
        c9_superspecial_family(),
    );
    report(
        10,
        "elliptic level vs Hasse",
        "exact, zero failures",
        c10_elliptic(),
    );
    report(
        11,
        "operator certificates",
        "exact, zero failures",
        c11_operator_certificates(),
    );

    if failed == 0 {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
