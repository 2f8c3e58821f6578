//! The aggregated property suite behind `prop-suite`.
//!
//! Runs every verifier in the crate at one of two scales:
//!
//! * `tiny`: universe depth 2, sets up to 3 elements, exhaustive.
//! * `small`: universe depth 3, sets up to 4 elements.
//!
//! Results are deterministic for a fixed seed; the budgeted sweeps (union
//! pairs, shifted-union lists, test merges) draw their samples from a seeded
//! generator and everything else is exhaustive at the given scale.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::duality::{
    check_msqrtsqrt, check_prop7, check_prop8, check_rsqrtsqrt, dual_ratio, DEFAULT_CAP,
};
use crate::dyadic::Dyadic;
use crate::error::Error;
use crate::fixtures;
use crate::levin_schnorr::{
    merge_universal, tests_from_witness, verify_test, verify_witness, witness_from_tests,
    TestFamily,
};
use crate::modes::{hat_rule_member, mode_k, Mode, ModeRuleSpec};
use crate::premeasure::{check_premeasure_axioms, HSpec, PreMeasureSpec};
use crate::report::{CheckReport, ReportLine};
use crate::rules::{
    check_rule_axioms, check_rule_axioms_exhaustive, FiniteComplexity, RuleCheckConfig, RuleSpec,
    SampleSpace,
};
use crate::strings::{covers, universe, BinaryString, StringSet};
use crate::witness::{generate_witness, WitnessStrategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Tiny,
    Small,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tiny" => Ok(Scale::Tiny),
            "small" => Ok(Scale::Small),
            other => Err(format!("unknown scale {other:?} (expected tiny or small)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Adds the deliberately broken fixtures to the batteries; the suite
    /// must then fail with their witnesses printed.
    pub inject_broken: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 7,
            inject_broken: false,
        }
    }
}

struct Params {
    universe_depth: u32,
    k_max: usize,
    rule_universe_depth: u32,
    rule_max_size: usize,
    d_min: i64,
    d_max: i64,
    cap: u32,
    union_pair_budget: usize,
    lemma1_budget: usize,
    merge_pair_budget: usize,
    rsqrtsqrt_stride: usize,
}

impl Params {
    fn for_scale(scale: Scale) -> Self {
        match scale {
            Scale::Tiny => Params {
                universe_depth: 2,
                k_max: 3,
                rule_universe_depth: 2,
                rule_max_size: 3,
                d_min: -2,
                d_max: 4,
                cap: DEFAULT_CAP,
                union_pair_budget: 120_000,
                lemma1_budget: 8_000,
                merge_pair_budget: 60_000,
                rsqrtsqrt_stride: 4,
            },
            Scale::Small => Params {
                universe_depth: 3,
                k_max: 4,
                rule_universe_depth: 3,
                rule_max_size: 3,
                d_min: -2,
                d_max: 4,
                cap: DEFAULT_CAP,
                union_pair_budget: 250_000,
                lemma1_budget: 16_000,
                merge_pair_budget: 150_000,
                rsqrtsqrt_stride: 16,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass())
    }

    pub fn lines(&self) -> Vec<ReportLine> {
        self.checks.iter().flat_map(|c| c.lines()).collect()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// The measure battery: the four families over three h shapes, plus the
/// combinators, one mixture, one star, and one rule square root.
pub fn measure_battery(cap: u32) -> Vec<PreMeasureSpec> {
    let hs = [HSpec::Length, HSpec::scaled(1, 2), fixtures::h_table_fixture()];
    let mut out = Vec::new();
    for h in &hs {
        out.push(PreMeasureSpec::Dwt(h.clone()));
        out.push(PreMeasureSpec::Pwt(h.clone()));
        out.push(PreMeasureSpec::Dct(h.clone()));
        out.push(PreMeasureSpec::Pct(h.clone()));
    }
    out.push(PreMeasureSpec::Sum(
        Box::new(PreMeasureSpec::Dwt(HSpec::Length)),
        Box::new(PreMeasureSpec::Dwt(HSpec::scaled(1, 2))),
    ));
    out.push(PreMeasureSpec::Min(
        Box::new(PreMeasureSpec::Dwt(HSpec::Length)),
        Box::new(PreMeasureSpec::Dct(HSpec::Length)),
    ));
    out.push(PreMeasureSpec::TreeMixture(fixtures::tree_family_fixture()));
    out.push(PreMeasureSpec::Dwt(HSpec::scaled(1, 2)).star());
    out.push(PreMeasureSpec::rule_sqrt(RuleSpec::Kp(HSpec::Length), cap));
    out
}

/// An evaluation closure for battery sweeps: square-root measures get a
/// block-exponent memo that survives across sets, everything else evaluates
/// directly.
pub fn battery_eval(
    m: &PreMeasureSpec,
) -> Box<dyn FnMut(&StringSet) -> Result<Dyadic, Error> + '_> {
    if let PreMeasureSpec::RuleSqrt { rule, cap } = m {
        let mut evaluator = crate::duality::SqrtEvaluator::new(rule, *cap);
        Box::new(move |f| evaluator.eval(f))
    } else {
        Box::new(move |f| m.eval(f))
    }
}

/// The rule battery: the four families over two h shapes plus one measure
/// square root.
pub fn rule_battery() -> Vec<RuleSpec> {
    let hs = [HSpec::Length, HSpec::scaled(1, 2)];
    let mut out = Vec::new();
    for h in &hs {
        out.push(RuleSpec::Kp(h.clone()));
        out.push(RuleSpec::Ka(h.clone()));
        out.push(RuleSpec::Ks(h.clone()));
        out.push(RuleSpec::Kd(h.clone()));
    }
    out.push(RuleSpec::measure_sqrt(PreMeasureSpec::Dwt(HSpec::Length)));
    out
}

/// The five measures whose double square root is sandwich-checked.
pub fn sandwich_battery() -> Vec<PreMeasureSpec> {
    vec![
        PreMeasureSpec::Dwt(HSpec::Length),
        PreMeasureSpec::Dwt(HSpec::scaled(1, 2)),
        PreMeasureSpec::Pwt(HSpec::Length),
        PreMeasureSpec::Dct(HSpec::Length),
        PreMeasureSpec::Dwt(HSpec::scaled(1, 2)).star(),
    ]
}

/// The four dual pairs under an h shape.
pub fn dual_pairs(h: &HSpec) -> Vec<(PreMeasureSpec, RuleSpec)> {
    vec![
        (PreMeasureSpec::Dwt(h.clone()), RuleSpec::Kp(h.clone())),
        (PreMeasureSpec::Pwt(h.clone()), RuleSpec::Ka(h.clone())),
        (PreMeasureSpec::Dct(h.clone()), RuleSpec::Ks(h.clone())),
        (PreMeasureSpec::Pct(h.clone()), RuleSpec::Kd(h.clone())),
    ]
}

/// Enumerates every valid test family for `dwt(len)` with levels inside
/// `universe(depth)` and the given `i_max`, every level included (diagonal
/// merges read the odd levels even though the witness conversion does not).
pub fn valid_weight_test_pool(depth: u32, i_max: usize) -> Result<Vec<TestFamily>, Error> {
    let m = PreMeasureSpec::Dwt(HSpec::Length);
    let u = universe(depth)?;
    let all = u.subsets_up_to(u.len());
    let mut per_level: Vec<Vec<StringSet>> = Vec::new();
    for i in 0..=i_max {
        let mut ok = Vec::new();
        for f in &all {
            if m.eval(f)?.cmp_pow2(-(i as i64)) != std::cmp::Ordering::Greater {
                ok.push(f.clone());
            }
        }
        per_level.push(ok);
    }
    let mut pool = Vec::new();
    let mut current: Vec<StringSet> = Vec::new();
    fn build(
        per_level: &[Vec<StringSet>],
        current: &mut Vec<StringSet>,
        pool: &mut Vec<TestFamily>,
    ) {
        if current.len() == per_level.len() {
            pool.push(TestFamily::new(current.clone()));
            return;
        }
        for choice in &per_level[current.len()] {
            current.push(choice.clone());
            build(per_level, current, pool);
            current.pop();
        }
    }
    build(&per_level, &mut current, &mut pool);
    Ok(pool)
}

pub fn run_suite(scale: Scale, opts: &SuiteOptions) -> Result<SuiteReport, Error> {
    let p = Params::for_scale(scale);
    let mut checks: Vec<CheckReport> = Vec::new();
    let u = universe(p.universe_depth)?;
    let rule_space = SampleSpace::new(
        &universe(p.rule_universe_depth)?,
        p.d_min,
        p.d_max,
        p.rule_max_size,
    );
    let rule_cfg = RuleCheckConfig {
        union_pair_budget: p.union_pair_budget,
        lemma1_budget: p.lemma1_budget,
        seed: opts.seed,
    };

    // Pre-measure axioms.
    for m in measure_battery(p.cap) {
        checks.push(check_premeasure_axioms(
            &format!("premeasure-axioms {m}"),
            &mut battery_eval(&m),
            &u,
            p.k_max,
        )?);
    }
    if opts.inject_broken {
        checks.push(check_premeasure_axioms(
            "premeasure-axioms broken-fixture",
            &mut |f| Ok(fixtures::broken_premeasure(f)),
            &u,
            p.k_max.min(2),
        )?);
    }

    // Rule axioms.
    for rule in rule_battery() {
        checks.push(check_rule_axioms_exhaustive(
            &format!("rule-axioms {rule}"),
            &|r| rule.member(r),
            &rule_space,
            &rule_cfg,
        )?);
    }
    if opts.inject_broken {
        let tiny_space = SampleSpace::new(&universe(1)?, 0, 1, 2);
        checks.push(check_rule_axioms(
            "rule-axioms broken-fixture",
            &|r| Ok(fixtures::broken_rule(r)),
            &tiny_space.collect_samples(),
            &RuleCheckConfig {
                union_pair_budget: 10_000,
                lemma1_budget: 500,
                seed: opts.seed,
            },
        )?);
    }

    // Square roots are again pre-measures / rules.
    for (m, rule) in [
        (
            PreMeasureSpec::Pwt(HSpec::scaled(1, 2)),
            RuleSpec::Ka(HSpec::scaled(1, 2)),
        ),
        (PreMeasureSpec::Dct(HSpec::Length), RuleSpec::Ks(HSpec::Length)),
    ] {
        checks.extend(check_prop7(
            &m, &rule, &u, p.k_max, &rule_space, p.cap, &rule_cfg,
        )?);
    }

    // Measure-side monotonicity of the square root.
    let sets = u.subsets_up_to(p.k_max);
    let prop8_samples = stride_samples(&rule_space, p.rsqrtsqrt_stride);
    let dwt_len = PreMeasureSpec::Dwt(HSpec::Length);
    checks.push(check_prop8(
        &dwt_len, &dwt_len, 0, &sets, &prop8_samples,
    )?);
    checks.push(check_prop8(
        &PreMeasureSpec::Sum(Box::new(dwt_len.clone()), Box::new(dwt_len.clone())),
        &dwt_len,
        1,
        &sets,
        &prop8_samples,
    )?);

    // The round-trip sandwich on the measure side.
    for m in sandwich_battery() {
        checks.push(check_msqrtsqrt(&m, &u, p.k_max.min(3), p.cap)?);
    }

    // The round-trip inclusion on the rule side.
    for rule in [RuleSpec::Kp(HSpec::Length), RuleSpec::Ks(HSpec::Length)] {
        let samples = stride_samples(&rule_space, p.rsqrtsqrt_stride);
        checks.push(check_rsqrtsqrt(&rule, &samples, p.cap, 4)?);
    }

    // Dual pairs stay within a factor of 4 in both directions.
    for h in [HSpec::Length, HSpec::scaled(1, 2)] {
        for (m, rule) in dual_pairs(&h) {
            let ratios = dual_ratio(&m, &rule, &u, p.k_max.min(3), p.cap)?;
            checks.push(ratios.to_check_report(&format!("dual-ratio {m}|{rule}"), Some(4)));
        }
    }

    // Star transform: covering monotonicity and the strict gap.
    checks.push(star_monotonicity_check(p.universe_depth)?);

    // Witness -> tests and tests -> witness conversions.
    checks.push(witness_to_tests_check(&rule_space, p.cap, p.rsqrtsqrt_stride)?);
    let pool = valid_weight_test_pool(2, 4)?;
    checks.push(tests_to_witness_check(&pool)?);
    checks.push(merge_check(&pool, p.merge_pair_budget, opts.seed)?);

    // Mode/hat coherence.
    checks.push(mode_coherence_check()?);

    // Witness generators keep their budget.
    checks.push(generator_check()?);

    Ok(SuiteReport { checks })
}

fn stride_samples(space: &SampleSpace, stride: usize) -> Vec<FiniteComplexity> {
    space
        .collect_samples()
        .into_iter()
        .step_by(stride.max(1))
        .collect()
}

/// Covering monotonicity of the star transform plus its witnessed strict
/// gap below the plain measure.
pub fn star_monotonicity_check(depth: u32) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("star-monotone dwt(scaled:1/2)");
    let base = PreMeasureSpec::Dwt(HSpec::scaled(1, 2));
    let star = base.clone().star();
    let subsets = universe(depth)?.subsets_up_to(3);
    let values: Vec<Dyadic> = subsets
        .iter()
        .map(|f| star.eval(f))
        .collect::<Result<_, _>>()?;
    for (i, a) in subsets.iter().enumerate() {
        for (j, b) in subsets.iter().enumerate() {
            if !covers(a, b) {
                continue;
            }
            if values[i] > values[j] {
                report.fail(vec![
                    ("a".into(), a.to_string()),
                    ("b".into(), b.to_string()),
                    ("star_a".into(), values[i].to_string()),
                    ("star_b".into(), values[j].to_string()),
                ]);
            } else {
                report.ok(1);
            }
        }
    }

    let gap_set: StringSet = ["00", "01"].iter().map(|s| s.parse().unwrap()).collect();
    let starred = star.eval(&gap_set)?;
    let plain = base.eval(&gap_set)?;
    if starred == Dyadic::pow2(-1) && plain == Dyadic::one() {
        report.ok(1);
        report.note("gap", format!("{starred}<{plain}"));
    } else {
        report.fail(vec![
            ("kind".into(), "strict-gap".into()),
            ("star".into(), starred.to_string()),
            ("plain".into(), plain.to_string()),
        ]);
    }
    Ok(report)
}

/// Every member of kp(len) converts to a family that passes verification
/// against the square root of the rule.
pub fn witness_to_tests_check(
    space: &SampleSpace,
    cap: u32,
    stride: usize,
) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("theorem-conversion witness-to-tests kp(len)");
    let rule = RuleSpec::Kp(HSpec::Length);
    let rsqrt = PreMeasureSpec::rule_sqrt(rule.clone(), cap);
    for r in stride_samples(space, stride) {
        if !rule.member(&r)? {
            continue;
        }
        let family = tests_from_witness(&r, 3);
        let sub = verify_test(&rsqrt, &family)?;
        if sub.pass() {
            report.ok(1);
        } else {
            report.fail(vec![
                ("r".into(), r.to_string()),
                ("family".into(), family.to_string()),
            ]);
        }
    }
    Ok(report)
}

/// Every valid family in the pool converts to a witness inside the square
/// root of the measure.
pub fn tests_to_witness_check(pool: &[TestFamily]) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("theorem-conversion tests-to-witness dwt(len)");
    let m = PreMeasureSpec::Dwt(HSpec::Length);
    for t in pool {
        let witness = witness_from_tests(t);
        let sub = verify_witness(&m, &witness)?;
        if sub.pass() {
            report.ok(1);
        } else {
            report.fail(vec![
                ("family".into(), t.to_string()),
                ("witness".into(), witness.to_string()),
            ]);
        }
    }
    report.note("pool", pool.len());
    Ok(report)
}

/// Diagonal merges of valid tests verify as tests.
pub fn merge_check(pool: &[TestFamily], budget: usize, seed: u64) -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("universal-merge dwt(len)");
    let m = PreMeasureSpec::Dwt(HSpec::Length);
    let total = pool.len() * pool.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exhaustive = total <= budget;
    let picks: Vec<(usize, usize)> = if exhaustive {
        (0..pool.len())
            .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
            .collect()
    } else {
        (0..budget)
            .map(|_| (rng.random_range(0..pool.len()), rng.random_range(0..pool.len())))
            .collect()
    };
    report.note(
        "pairs",
        format!("{}{}", picks.len(), if exhaustive { "(exhaustive)" } else { "(sampled)" }),
    );
    for (i, j) in picks {
        let merged = merge_universal(&[pool[i].clone(), pool[j].clone()], 4);
        let sub = verify_test(&m, &merged)?;
        if sub.pass() {
            report.ok(1);
        } else {
            report.fail(vec![
                ("left".into(), pool[i].to_string()),
                ("right".into(), pool[j].to_string()),
            ]);
        }
    }
    Ok(report)
}

/// Exhaustive mode/hat coherence at desk scale: every prefix-free mode with
/// at most 3 pairs over strings of length at most 2 has every subset of its
/// complexity graph inside the hat rule, and its Kraft sum stays below 1.
pub fn mode_coherence_check() -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("mode-hat-coherence prefix_free");
    let u2: Vec<BinaryString> = universe(2)?.iter().cloned().collect();
    let mut pairs = Vec::new();
    for t in &u2 {
        for s in &u2 {
            pairs.push((t.clone(), s.clone()));
        }
    }
    // All modes with <= 3 pairs.
    let idx = pairs.len();
    let mut modes: Vec<Mode> = vec![Mode::new()];
    for i in 0..idx {
        modes.push(Mode::from_pairs([pairs[i].clone()]));
        for j in (i + 1)..idx {
            modes.push(Mode::from_pairs([pairs[i].clone(), pairs[j].clone()]));
            for k in (j + 1)..idx {
                modes.push(Mode::from_pairs([
                    pairs[i].clone(),
                    pairs[j].clone(),
                    pairs[k].clone(),
                ]));
            }
        }
    }
    let mut prefix_free_count = 0u64;
    for mode in &modes {
        if !ModeRuleSpec::PrefixFree.member(mode) {
            continue;
        }
        prefix_free_count += 1;
        let outputs = mode.outputs();
        let graph: Vec<(BinaryString, i64)> = outputs
            .iter()
            .map(|s| (s.clone(), mode_k(mode, s).unwrap() as i64))
            .collect();
        let mut kraft = Dyadic::zero();
        for (_, k) in &graph {
            kraft = &kraft + &Dyadic::pow2(-k);
        }
        if kraft.cmp_pow2(0) == std::cmp::Ordering::Greater {
            report.fail(vec![
                ("kind".into(), "kraft".into()),
                ("mode".into(), mode.to_string()),
                ("sum".into(), kraft.to_string()),
            ]);
            continue;
        }
        let bound = mode.max_desc_len();
        let mut all_ok = true;
        for mask in 0u32..(1 << graph.len()) {
            let sub = FiniteComplexity::from_pairs(
                graph
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, p)| p.clone()),
            );
            if !hat_rule_member(ModeRuleSpec::PrefixFree, &sub, bound)? {
                report.fail(vec![
                    ("kind".into(), "hat-membership".into()),
                    ("mode".into(), mode.to_string()),
                    ("subset".into(), sub.to_string()),
                ]);
                all_ok = false;
                break;
            }
        }
        if all_ok {
            report.ok(1);
        }
    }
    report.note("prefix_free_modes", prefix_free_count);
    Ok(report)
}

/// The generators' emitted witnesses satisfy the kp budget exactly.
pub fn generator_check() -> Result<CheckReport, Error> {
    let mut report = CheckReport::new("witness-generator kp-budget");
    let kp = RuleSpec::Kp(HSpec::Length);
    let inputs: Vec<BinaryString> = vec![
        BinaryString::repeated(false, 64),
        "0110100110010110".parse().unwrap(),
        "1".parse().unwrap(),
    ];
    for x in &inputs {
        for strategy in [
            WitnessStrategy::RunLength,
            WitnessStrategy::BlockCode { block: 2 },
        ] {
            let r = generate_witness(x, &strategy)?;
            if kp.member(&r)? {
                report.ok(1);
            } else {
                report.fail(vec![
                    ("strategy".into(), strategy.to_string()),
                    ("input_len".into(), x.len().to_string()),
                ]);
            }
        }
    }
    // The documented landmark: a 1024-run compresses to 23 bits of code.
    let run = BinaryString::repeated(false, 1024);
    let r = generate_witness(&run, &WitnessStrategy::RunLength)?;
    if r.k_of(&run) == Some(23) {
        report.ok(1);
        report.note("run_1024_code", 23);
    } else {
        report.fail(vec![(
            "run_1024_code".into(),
            format!("{:?}", r.k_of(&run)),
        )]);
    }
    Ok(report)
}
