//! Acceptance suite: one PASS/FAIL line per criterion, all exact.
//!
//! Runs without the libtest harness so that the report is always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qminor::labels::{zeta_l_in, zeta_r_in};
use qminor::minors::{check_minor_images, check_row_col_agreement, check_specialization, matrix_system};
use qminor::ncalg::word;
use qminor::tensor::{
    check_exterior_rescaling, check_injectivity, check_iota_homomorphism, check_iota_homomorphism_for, CheckReport,
};
use qminor::translate::{corpus, corrupted_system, random_consequences, run_entries_with, verify, CorpusEntry};
use qminor::{Generator, Label, Mode, Multilabel, NCPoly, ParamSpec, Preset, RelationSystem, Scalar, Tag};

const RANDOM_SEED: u64 = 0x5eed;
const RANDOM_CONSEQUENCES: usize = 50;
const ZETA_SAMPLES: usize = 500;

type Criterion = (&'static str, u64, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[CheckReport]) -> Self {
        let total: usize = reports.iter().map(|r| r.len()).sum();
        let failures: Vec<String> = reports
            .iter()
            .flat_map(|r| r.failures().into_iter().map(move |f| format!("{}: {}", r.check, f.instance)))
            .collect();
        Outcome {
            ok: failures.is_empty() && total > 0,
            detail: match failures.first() {
                None => format!("{total} instances, 0 failures"),
                Some(f) => format!("{total} instances, {} failures, first: {f}", failures.len()),
            },
        }
    }
}

fn iota_homomorphism() -> Outcome {
    Outcome::from_reports(&[2, 3, 4].map(check_iota_homomorphism))
}

fn iota_injectivity() -> Outcome {
    Outcome::from_reports(&[check_injectivity(2, 3), check_injectivity(3, 2)])
}

fn minor_images() -> Outcome {
    let mut reports: Vec<CheckReport> = (1..=3).map(|n| check_minor_images(n, |_| true)).collect();
    reports.push(check_minor_images(4, |m| m == 2 || m == 3));
    Outcome::from_reports(&reports)
}

fn minor_conventions() -> Outcome {
    let mut reports = Vec::new();
    for n in 1..=4 {
        reports.push(check_row_col_agreement(n, Mode::MultiParam));
        reports.push(check_row_col_agreement(n, Mode::OneParam));
        reports.push(check_specialization(n));
    }
    let mut out = Outcome::from_reports(&reports);
    let central: Vec<CorpusEntry> = corpus().into_iter().filter(|e| e.name.starts_with("det2-central")).collect();
    let commuting = central.iter().filter(|e| verify(&e.identity).holds).count();
    out.ok &= central.len() == 4 && commuting == 4;
    out.detail.push_str(&format!("; 2x2 determinant commutes with {commuting}/4 generators"));
    out
}

fn confluence() -> Outcome {
    let (mut checked, mut bad) = (0, Vec::new());
    for preset in Preset::ALL {
        for n in 1..=3 {
            for mode in [Mode::OneParam, Mode::MultiParam] {
                let rs = RelationSystem::new(preset, ParamSpec::new(n, mode).expect("valid size"));
                checked += rs.overlap_words().len();
                bad.extend(rs.confluence_failures().into_iter().map(|(w, _)| format!("{preset:?} n={n}: {w:?}")));
            }
        }
    }
    Outcome {
        ok: bad.is_empty() && checked > 0,
        detail: format!(
            "{checked} overlaps, {} discrepancies{}",
            bad.len(),
            bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()
        ),
    }
}

fn translation_pipeline(
    systems: &(dyn Fn(usize, Mode) -> RelationSystem + Sync),
) -> (usize, usize, usize, Option<String>) {
    let entries = corpus();
    let random = random_consequences(RANDOM_SEED, RANDOM_CONSEQUENCES);
    let a = run_entries_with(&entries, systems);
    let b = run_entries_with(&random, systems);
    let first = a.failures().chain(b.failures()).next().map(|f| f.to_string());
    (entries.len(), random.len(), a.failed + b.failed, first)
}

fn translation() -> Outcome {
    let (corpus_len, random_len, failed, first) = translation_pipeline(&matrix_system);
    let random_homogeneous =
        random_consequences(RANDOM_SEED, RANDOM_CONSEQUENCES).iter().all(|e| e.identity.is_homogeneous());
    Outcome {
        ok: failed == 0 && corpus_len == 49 && random_len == RANDOM_CONSEQUENCES && random_homogeneous,
        detail: format!(
            "{corpus_len} corpus entries + {random_len} random consequences, {failed} failures{}",
            first.map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    }
}

fn exterior_rescaling() -> Outcome {
    Outcome::from_reports(&[1, 2, 3, 4].map(check_exterior_rescaling))
}

fn zeta_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let mut mismatches = Vec::new();
    for _ in 0..ZETA_SAMPLES {
        let n: Label = rng.gen_range(1..=5);
        let len = rng.gen_range(0..=6);
        let j = Multilabel::from((0..len).map(|_| rng.gen_range(1..=n)).collect::<Vec<Label>>());
        let spec = ParamSpec::multi(n as usize);
        for (preset, tag, zeta) in
            [(Preset::SRight, Tag::Right, zeta_r_in(&j, &spec)), (Preset::SLeft, Tag::Left, zeta_l_in(&j, &spec))]
        {
            let rs = RelationSystem::new(preset, spec);
            let gens = |m: &Multilabel| word(&m.iter().map(|&i| Generator::vector(tag, i)).collect::<Vec<_>>());
            let nf = rs.normal_form(&NCPoly::term(tag, Scalar::one(), gens(&j)));
            if nf.len() != 1 || nf.coeff(&gens(&j.sorted())) != zeta {
                mismatches.push(format!("{preset:?} ({j})"));
            }
        }
    }
    Outcome {
        ok: mismatches.is_empty(),
        detail: format!(
            "{ZETA_SAMPLES} multilabels, {} mismatches{}",
            mismatches.len(),
            mismatches.first().map(|m| format!(", first: {m}")).unwrap_or_default()
        ),
    }
}

fn negative_controls() -> Outcome {
    let iota_failing: Vec<usize> = [2, 3, 4]
        .map(|n| check_iota_homomorphism_for(&corrupted_system(n, Mode::MultiParam)).failures().len())
        .to_vec();
    let (_, _, failed, _) = translation_pipeline(&corrupted_system);
    Outcome {
        ok: iota_failing.iter().all(|&k| k > 0) && failed > 0,
        detail: format!(
            "corrupted relation 4: iota failures per n=2,3,4 {iota_failing:?}; {failed} translation pipeline failures"
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("iota homomorphism, n = 2, 3, 4", 10, iota_homomorphism),
        ("iota injectivity sample", 5, iota_injectivity),
        ("minor images are pure tensors", 60, minor_images),
        ("minor conventions", 30, minor_conventions),
        ("confluence of all presets, n <= 3", 30, confluence),
        ("translation of corpus and random consequences", 120, translation),
        ("exterior rescaling, n <= 4", 5, exterior_rescaling),
        ("zeta oracle equivalence", 10, zeta_oracle),
        ("negative controls", 130, negative_controls),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let ok = outcome.ok && in_time;
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} - {name} ({:.2}s, limit {limit}s{}) {}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", too slow" },
            outcome.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
