//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use design_forge::assemble::{admissible, construct_design, AdmissibleOrder};
use design_forge::blocks::{
    catalog, develop, difference_transversal_check, k4444_decomposition, published_base_block,
    Design, LabeledBlock,
};
use design_forge::certify::{certify, Certificate, Mode};
use design_forge::cli::{develops_to_design, random_mutation};
use design_forge::gdd::{
    exact_cover_search, mols_for_order, td_from_mols, verify_gdd, GddType, IngredientStore,
    SearchLimits,
};
use design_forge::targets::{is_isomorphic, srg_parameters, SrgParameters, TargetId};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn certified(design: &Design) -> Result<(), String> {
    let report = certify(&Certificate::complete(design));
    check(
        report.pass,
        format!("order {} {}: {report}", design.order, design.target),
    )
}

fn criterion_1() -> Outcome {
    let mut counts = Vec::new();
    for target in TargetId::ALL {
        for n in [97u64, 193, 289] {
            let d = develop(&published_base_block(target, n).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            check(
                d.blocks.len() as u64 == n * (n - 1) / 96,
                format!("{target} {n}: count"),
            )?;
            certified(&d)?;
            counts.push(d.blocks.len());
        }
    }
    check(
        counts == [97, 386, 867, 97, 386, 867],
        format!("counts {counts:?}"),
    )?;
    Ok("six developed designs certify with 97/386/867 blocks".into())
}

fn criterion_2() -> Outcome {
    for target in TargetId::ALL {
        let cert = Certificate::four_partite(target, k4444_decomposition(target).to_vec());
        let report = certify(&cert);
        check(
            report.pass && cert.mode == Mode::FourPartite,
            format!("{target}: {report}"),
        )?;
        // Independent count: the two blocks' edges are exactly the 96 cross pairs.
        let mut seen = HashSet::new();
        for edges in cert.to_raw_edges() {
            for (u, v) in edges {
                check(
                    u % 4 != v % 4,
                    format!("{target}: pair {{{u},{v}}} inside a part"),
                )?;
                check(
                    seen.insert((u.min(v), u.max(v))),
                    format!("{target}: repeated pair"),
                )?;
            }
        }
        check(seen.len() == 96, format!("{target}: {} pairs", seen.len()))?;
    }
    Ok("both K4,4,4,4 decompositions cover the 96 cross pairs once".into())
}

fn criterion_3() -> Outcome {
    let store = IngredientStore::builtin().map_err(|e| e.to_string())?;
    let n = AdmissibleOrder::new(385).map_err(|e| e.to_string())?;
    for target in TargetId::ALL {
        let d = construct_design(target, n, &store).map_err(|e| e.to_string())?;
        check(
            d.blocks.len() == 1540,
            format!("{target}: {} blocks", d.blocks.len()),
        )?;
        certified(&d)?;
    }
    Ok("order 385 certifies for both targets with 1540 = 576*2 + 4*97 blocks".into())
}

fn criterion_4() -> Outcome {
    let n = AdmissibleOrder::new(481).map_err(|e| e.to_string())?;
    let builtin = IngredientStore::builtin().map_err(|e| e.to_string())?;
    for target in TargetId::ALL {
        let d = construct_design(target, n, &builtin).map_err(|e| e.to_string())?;
        check(
            d.blocks.len() == 2405,
            format!("{target}: {} blocks", d.blocks.len()),
        )?;
        certified(&d)?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut store = IngredientStore::from_dir(dir.path()).map_err(|e| e.to_string())?;
    check(store.is_empty(), "fresh store not empty")?;
    let ty = GddType::uniform(3, 5);
    let start = Instant::now();
    let found = exact_cover_search(&ty, 4, SearchLimits::default())
        .map_err(|e| e.to_string())?
        .ok_or("exact cover search found no 3^5")?;
    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(60),
        format!("3^5 search took {elapsed:.2?}"),
    )?;
    check(
        found.blocks().len() == 15,
        format!("3^5 has {} blocks", found.blocks().len()),
    )?;
    check(verify_gdd(&found).pass, "regenerated 3^5 fails verify_gdd")?;
    store.save(dir.path(), found).map_err(|e| e.to_string())?;
    let reloaded = IngredientStore::from_dir(dir.path()).map_err(|e| e.to_string())?;
    for target in TargetId::ALL {
        let d = construct_design(target, n, &reloaded).map_err(|e| e.to_string())?;
        check(
            d.blocks.len() == 2405,
            format!("{target} via 3^5: {} blocks", d.blocks.len()),
        )?;
        certified(&d)?;
    }
    Ok(format!(
        "order 481 certifies (2405 blocks) from shipped 6^5 and from 3^5 regenerated in {elapsed:.2?}"
    ))
}

fn criterion_5() -> Outcome {
    let mols = mols_for_order(24).map_err(|e| e.to_string())?;
    let td = td_from_mols(4, 24, &mols).map_err(|e| e.to_string())?;
    check(
        td.blocks().len() == 576,
        format!("{} blocks", td.blocks().len()),
    )?;
    let report = verify_gdd(&td);
    check(report.pass, report.summary())?;
    // Recount cross pairs without the library.
    let group = |p: u32| p / 24;
    let mut seen = HashSet::new();
    for b in td.blocks() {
        for i in 0..4 {
            for j in i + 1..4 {
                let (u, v) = (b[i].min(b[j]), b[i].max(b[j]));
                check(
                    group(u) != group(v),
                    format!("pair {{{u},{v}}} inside a group"),
                )?;
                check(
                    seen.insert((u, v)),
                    format!("pair {{{u},{v}}} covered twice"),
                )?;
            }
        }
    }
    check(
        seen.len() == 288 * 4 * 3 && seen.len() == 3456,
        format!("{} pairs", seen.len()),
    )?;
    Ok("TD(4,24) has 576 blocks covering all 3456 cross pairs once".into())
}

fn criterion_6() -> Outcome {
    let expected = SrgParameters {
        v: 16,
        k: 6,
        lambda: 2,
        mu: 2,
    };
    for target in TargetId::ALL {
        let g = &target.graph().graph;
        check(
            srg_parameters(g) == Some(expected),
            format!("{target}: srg parameters"),
        )?;
        let a = g.adjacency_matrix();
        for i in 0..16 {
            for j in 0..16 {
                let sq: i64 = (0..16).map(|k| a[i][k] * a[k][j]).sum();
                let want = 2 + if i == j { 4 } else { 0 };
                check(sq == want, format!("{target}: (A^2)[{i}][{j}] = {sq}"))?;
            }
        }
    }
    let iso = is_isomorphic(
        &TargetId::Shrikhande.graph().graph,
        &TargetId::LineK44.graph().graph,
    );
    check(iso.is_none(), "shrikhande and lk44 reported isomorphic")?;
    Ok("both targets are srg(16,6,2,2) with A^2 = 2J + 4I, and not isomorphic".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut total = 0;
    let mut valid_mutants = 0;
    for entry in catalog() {
        let base = entry.base_block().map_err(|e| e.to_string())?;
        let fast = difference_transversal_check(&base).map_err(|e| e.to_string())?;
        check(
            fast && develops_to_design(&base),
            format!("{} {}: base", entry.target, entry.order),
        )?;
        for i in 0..150 {
            let b = random_mutation(&base, &mut rng).map_err(|e| e.to_string())?;
            let fast = difference_transversal_check(&b).map_err(|e| e.to_string())?;
            let slow = develops_to_design(&b);
            check(
                fast == slow,
                format!(
                    "{} {} mutation {i}: check {fast}, develop+certify {slow}",
                    entry.target, entry.order
                ),
            )?;
            valid_mutants += usize::from(slow);
            total += 1;
        }
    }
    Ok(format!(
        "difference check agrees with develop+certify on 6 blocks and {total} mutations ({valid_mutants} valid)"
    ))
}

fn mutate_design(d: &Design, rng: &mut impl Rng) -> Design {
    let mut out = d.clone();
    let block = rng.gen_range(0..out.blocks.len());
    let position = rng.gen_range(0..16);
    let n = d.order as u32;
    let LabeledBlock(labels) = &mut out.blocks[block];
    labels[position] = (labels[position] + rng.gen_range(1..n)) % n;
    out
}

fn criterion_8() -> Outcome {
    let store = IngredientStore::builtin().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut rejected = 0;
    for target in TargetId::ALL {
        for n in [97, 385] {
            let n = AdmissibleOrder::new(n).map_err(|e| e.to_string())?;
            let d = construct_design(target, n, &store).map_err(|e| e.to_string())?;
            certified(&d)?;
            for i in 0..100 {
                let m = mutate_design(&d, &mut rng);
                check(
                    !certify(&Certificate::complete(&m)).pass,
                    format!("{target} {n}: mutation {i} accepted"),
                )?;
                rejected += 1;
            }
        }
    }
    Ok(format!(
        "{rejected}/{rejected} single-label mutations of orders 97 and 385 rejected"
    ))
}

fn criterion_9() -> Outcome {
    for n in 1u64..=10_000 {
        let clauses = (n >= 16 || n == 1) && (n * (n - 1)) % 96 == 0 && (n - 1) % 6 == 0;
        check(admissible(n) == clauses, format!("n = {n}"))?;
        check(
            admissible(n) == (n == 1 || (n - 1) % 96 == 0),
            format!("n = {n} closed form"),
        )?;
    }
    Ok("admissible(n) matches the three necessary conditions for n <= 10000".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 published designs", criterion_1),
        ("2 K4,4,4,4 decompositions", criterion_2),
        ("3 order 385", criterion_3),
        ("4 order 481", criterion_4),
        ("5 TD(4,24)", criterion_5),
        ("6 structure", criterion_6),
        ("7 oracle equivalence", criterion_7),
        ("8 certifier soundness", criterion_8),
        ("9 admissibility", criterion_9),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        match run() {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{:.2?}]", start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{:.2?}]", start.elapsed());
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
