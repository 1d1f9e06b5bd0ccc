//! Command implementations: orchestration, the build worker pool, and the
//! post-classification oracles.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::thread;

use gorenstein_core::classify::{build_record, classify_capped, enumerate_data, verify_bijection};
use gorenstein_core::divisor_lattice::{chain_census, count_classes, factorial, strict_chains};
use gorenstein_core::error::Error;
use gorenstein_core::group_core::HeightedGroup;
use gorenstein_core::simplex_bridge::{
    ehrhart_count_capped, ehrhart_from_hstar, group_to_simplex, is_lattice_pyramid,
    simplex_to_group,
};
use gorenstein_core::tower::extract_data;
use gorenstein_core::{ClassData, ClassRecord, HStarVector, TypeProfile};
use num_bigint::BigInt;

use crate::report;
use crate::{ClassifyArgs, CmdResult, DecomposeArgs, Failure, Format, Oracle, VerifyArgs};

/// Maps a core error to an exit class: parameter and cap problems are usage
/// errors, everything else is a failed structural check.
fn core_failure(e: Error) -> Failure {
    match e {
        Error::BadParameter(_)
        | Error::OrderCapExceeded { .. }
        | Error::ClosureCapExceeded { .. }
        | Error::DimensionCapExceeded { .. } => Failure::Usage(e.to_string()),
        other => Failure::Check(other.to_string()),
    }
}

pub fn classify(args: &ClassifyArgs) -> CmdResult {
    if args.v > args.max_order {
        return Err(Failure::Usage(format!(
            "v = {} exceeds the group order cap {} (raise --max-order)",
            args.v, args.max_order
        )));
    }
    let data = enumerate_data(args.v, args.k).map_err(core_failure)?;
    let census = chain_census(args.v).map_err(core_failure)?;
    let records = build_all(&data, args.workers)?;

    let expected = count_classes(args.v).map_err(core_failure)?;
    if records.len() as u64 != expected {
        return Err(Failure::Check(format!(
            "built {} classes for v = {}, k = {}, but the census law gives {expected}",
            records.len(),
            args.v,
            args.k
        )));
    }
    let mut keys = BTreeSet::new();
    for rec in &records {
        if !keys.insert(rec.key().clone()) {
            return Err(Failure::Check(format!(
                "canonical key collision at [{}]",
                rec.data()
            )));
        }
    }

    for oracle in distinct_oracles(&args.oracle) {
        run_oracle(oracle, &records, args)?;
    }

    let artifact = match args.format {
        Format::Json => report::render_json(args.v, args.k, &census, &records)?,
        Format::Csv => report::render_csv(&records),
        Format::Text => report::render_text(args.v, args.k, &records),
    };
    emit(&artifact, args.out.as_deref())
}

pub fn count(v: u64) -> CmdResult {
    let census = chain_census(v).map_err(core_failure)?;
    let total = count_classes(v).map_err(core_failure)?;
    println!("v = {v}");
    for (&s, &c) in census.counts() {
        let f = factorial(s as u64).map_err(core_failure)?;
        println!("s={s}: chains={c} factorial={f} classes={}", c * f);
    }
    println!("N({v}) = {total}");
    Ok(())
}

pub fn chains(v: u64) -> CmdResult {
    let all = strict_chains(v).map_err(core_failure)?;
    for chain in &all {
        let line: Vec<String> = chain.iter().map(u64::to_string).collect();
        println!("{}", line.join(" < "));
    }
    println!("total: {}", all.len());
    Ok(())
}

pub fn decompose(args: &DecomposeArgs) -> CmdResult {
    if args.k < 1 {
        return Err(Failure::Usage("k must be at least 1".to_string()));
    }
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.input.display())))?;
    let (width, generators, declared) = report::parse_group(&text)?;
    let cap = usize::try_from(args.max_order).unwrap_or(usize::MAX);
    let group =
        HeightedGroup::close_generators_capped(&generators, width, cap).map_err(core_failure)?;
    if group.order() != declared {
        return Err(Failure::Check(format!(
            "declared order {declared}, but the generators close to {} elements",
            group.order()
        )));
    }
    if let Some(&i) = group.zero_coordinates().first() {
        return Err(Failure::Check(format!(
            "coordinate {i} is identically zero, so the simplex is a lattice pyramid; \
             lattice pyramids are excluded from the classification"
        )));
    }
    let profile = TypeProfile::new(group.order(), args.k).map_err(core_failure)?;
    if !group.is_type(&profile) {
        return Err(Failure::Check(format!(
            "input group of order {} is not of type ({}, {})",
            group.order(),
            group.order(),
            args.k
        )));
    }
    let data = extract_data(&group, args.k).map_err(core_failure)?;
    println!("{}", report::render_data(&data)?);
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    let result = classify_capped(args.v, args.k, args.max_order).map_err(core_failure)?;
    let expected = count_classes(args.v).map_err(core_failure)?;
    if result.total() as u64 != expected {
        return Err(Failure::Check(format!(
            "classifier found {} classes, census law gives {expected}",
            result.total()
        )));
    }
    let keys: BTreeSet<_> = result.classes().iter().map(|c| c.key()).collect();
    if keys.len() != result.total() {
        return Err(Failure::Check(
            "canonical keys are not pairwise distinct".to_string(),
        ));
    }
    let report = verify_bijection(&result);
    if !report.passed() {
        return Err(Failure::Check(format!(
            "bijection check failed: {}",
            report.failures().join("; ")
        )));
    }
    println!(
        "verify v={} k={}: {} classes; count law ok; canonical keys distinct; bijection ok",
        args.v,
        args.k,
        result.total()
    );
    Ok(())
}

/// Builds one record per datum, splitting the work across `workers`
/// scoped threads.  Records are merged back in enumeration order, so the
/// output is identical for every worker count.
fn build_all(data: &[ClassData], workers: usize) -> Result<Vec<ClassRecord>, Failure> {
    if data.is_empty() {
        return Ok(Vec::new());
    }
    let workers = workers.clamp(1, data.len());
    if workers == 1 {
        return data
            .iter()
            .map(|d| build_record(d).map_err(core_failure))
            .collect();
    }
    let chunk = data.len().div_ceil(workers);
    let parts: Vec<Result<Vec<ClassRecord>, Error>> = thread::scope(|scope| {
        let handles: Vec<_> = data
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(build_record).collect()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("build worker panicked"))
            .collect()
    });
    let mut records = Vec::with_capacity(data.len());
    for part in parts {
        records.extend(part.map_err(core_failure)?);
    }
    Ok(records)
}

fn distinct_oracles(oracles: &[Oracle]) -> Vec<Oracle> {
    let mut seen = Vec::new();
    for &o in oracles {
        if !seen.contains(&o) {
            seen.push(o);
        }
    }
    seen
}

fn run_oracle(oracle: Oracle, records: &[ClassRecord], args: &ClassifyArgs) -> CmdResult {
    match oracle {
        Oracle::SimplexRoundtrip => {
            for rec in records {
                let s = group_to_simplex(rec.group()).map_err(core_failure)?;
                let volume = s.normalized_volume().map_err(core_failure)?;
                if volume != BigInt::from(args.v) {
                    return Err(Failure::Check(format!(
                        "normalized volume {volume} differs from the order {} at [{}]",
                        args.v,
                        rec.data()
                    )));
                }
                if is_lattice_pyramid(&s).map_err(core_failure)? {
                    return Err(Failure::Check(format!(
                        "class [{}] produced a lattice pyramid",
                        rec.data()
                    )));
                }
                let back = simplex_to_group(&s).map_err(core_failure)?;
                if !back.equivalent(rec.group()).map_err(core_failure)? {
                    return Err(Failure::Check(format!(
                        "simplex round trip left the class of [{}]",
                        rec.data()
                    )));
                }
            }
            eprintln!("oracle simplex-roundtrip: {} classes ok", records.len());
        }
        Oracle::Ehrhart => {
            let mut checked = 0usize;
            for rec in records {
                if rec.dimension() > args.max_ehrhart_dim {
                    continue;
                }
                let s = group_to_simplex(rec.group()).map_err(core_failure)?;
                let h = HStarVector::new(rec.hstar().to_vec());
                for m in 1..=2u64 {
                    let direct =
                        ehrhart_count_capped(&s, m, args.max_ehrhart_dim).map_err(core_failure)?;
                    let predicted = ehrhart_from_hstar(&h, m).map_err(core_failure)?;
                    if direct != predicted {
                        return Err(Failure::Check(format!(
                            "dilation {m} of [{}] holds {direct} lattice points, h* predicts {predicted}",
                            rec.data()
                        )));
                    }
                }
                checked += 1;
            }
            eprintln!(
                "oracle ehrhart: {checked} of {} classes within the dimension cap ok",
                records.len()
            );
        }
        Oracle::Bijection => {
            for rec in records {
                let back = extract_data(rec.group(), rec.data().k()).map_err(core_failure)?;
                if back != *rec.data() {
                    return Err(Failure::Check(format!(
                        "extraction produced [{back}] from a group built for [{}]",
                        rec.data()
                    )));
                }
            }
            eprintln!("oracle bijection: {} classes ok", records.len());
        }
    }
    Ok(())
}

fn emit(artifact: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => {
            fs::write(path, artifact)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{artifact}");
            Ok(())
        }
    }
}
