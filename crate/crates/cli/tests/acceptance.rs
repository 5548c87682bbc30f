//! Acceptance gate. Each criterion prints one `PASS` or `FAIL` line; the
//! binary exits nonzero if any criterion fails.

mod oracles;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use deepthought_core::commitment::ballot_digest;
use deepthought_core::economy::{certifier_reward, voter_reward};
use deepthought_core::scoring::{combine_outcomes, information_score, prediction_score, vote_weight, BallotView};
use deepthought_core::{Engine, Phase, Prediction, PropositionId, ProtocolParams, RandomSource, Role, UserId, Verdict};
use deepthought_sim::records::{replay, to_ndjson};
use deepthought_sim::{run_experiment, ExperimentConfig, ExperimentResult, Protocol, RunMetrics};
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/experiments")
}

fn row(n: usize, protocol: Protocol) -> ExperimentConfig {
    let path = config_dir().join(format!("row{n:02}.toml"));
    ExperimentConfig::load(&path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .with_protocol(protocol)
}

fn metrics(n: usize, protocol: Protocol) -> RunMetrics {
    run_experiment(&row(n, protocol), None).expect("experiment runs").metrics
}

fn verdict(checks: &[(bool, String)]) -> Outcome {
    let detail = checks.iter().map(|(_, d)| d.as_str()).collect::<Vec<_>>().join("; ");
    if checks.iter().all(|(ok, _)| *ok) {
        Ok(detail)
    } else {
        let failed = checks.iter().filter(|(ok, _)| !ok).map(|(_, d)| d.as_str()).collect::<Vec<_>>().join("; ");
        Err(format!("{detail} | failing: {failed}"))
    }
}

fn zero_adversary_sanity() -> Outcome {
    let mut checks = Vec::new();
    for n in [6, 7] {
        let start = Instant::now();
        let r = run_experiment(&row(n, Protocol::Deepthought), None).expect("experiment runs");
        let secs = start.elapsed().as_secs_f64();
        let clean = r.repetitions.iter().filter(|rep| rep.corrupted == 0 && !rep.target_corrupted).count();
        checks.push((clean >= 19, format!("row {n}: {clean}/20 clean repetitions")));
        checks.push((secs < 60.0, format!("row {n}: {secs:.2}s")));
    }
    verdict(&checks)
}

fn adv25_gap() -> Outcome {
    let dt = metrics(3, Protocol::Deepthought);
    let ast80 = metrics(3, Protocol::Astraea);
    let ast95 = metrics(8, Protocol::Astraea);
    verdict(&[
        (dt.c_spec == 0.0, format!("A80 deepthought C-SPEC {:.2} == 0", dt.c_spec)),
        (dt.c_any <= 5.0, format!("A80 deepthought C-ANY {:.2} <= 5", dt.c_any)),
        (ast80.c_any >= 9.0, format!("A80 astraea C-ANY {:.2} >= 9", ast80.c_any)),
        (ast95.c_any >= 1.0, format!("A95 astraea C-ANY {:.2} >= 1", ast95.c_any)),
        (
            dt.c_any < ast80.c_any && ast80.c_any >= 4.0 * dt.c_any,
            format!("A80 gap {:.2} vs {:.2} >= 4x", ast80.c_any, dt.c_any),
        ),
    ])
}

fn high_adversary_gap() -> Outcome {
    let dt35 = metrics(9, Protocol::Deepthought);
    let ast35 = metrics(9, Protocol::Astraea);
    let dt45 = metrics(10, Protocol::Deepthought);
    let ast45 = metrics(10, Protocol::Astraea);
    verdict(&[
        (dt35.c_any <= 1.0, format!("ADV35 deepthought C-ANY {:.2} <= 1", dt35.c_any)),
        (ast35.c_any >= 9.0, format!("ADV35 astraea C-ANY {:.2} >= 9", ast35.c_any)),
        (dt45.c_any <= 4.0, format!("ADV45 deepthought C-ANY {:.2} <= 4", dt45.c_any)),
        (ast45.c_any >= 30.0, format!("ADV45 astraea C-ANY {:.2} >= 30", ast45.c_any)),
    ])
}

fn breakdown_regime() -> Outcome {
    let dt = metrics(5, Protocol::Deepthought);
    let ast = metrics(5, Protocol::Astraea);
    verdict(&[
        (dt.max >= 50, format!("deepthought MAX {} >= 50", dt.max)),
        (dt.min <= 20, format!("deepthought MIN {} <= 20", dt.min)),
        (dt.std >= 5.0 * ast.std, format!("STD {:.2} >= 5 x astraea {:.2}", dt.std, ast.std)),
    ])
}

fn close(got: f64, want: f64) -> bool {
    let scale = want.abs().max(1e-300);
    (got - want).abs() <= 1e-9 * scale || (want == 0.0 && got.abs() <= 1e-12)
}

fn formula_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut check = |name: &str, i: usize, got: f64, want: f64| {
        if !close(got, want) {
            failures.push(format!("{name}[{i}] got {got} want {want}"));
        }
    };
    for (i, &(s, r, a, want)) in oracles::VOTE_WEIGHT.iter().enumerate() {
        check("vote_weight", i, vote_weight(s, r, a).unwrap(), want);
    }
    for (i, &(s, r, b, want)) in oracles::VOTER_REWARD.iter().enumerate() {
        check("voter_reward", i, voter_reward(s, r, b).unwrap(), want);
    }
    for (i, &(s, pool, p, w, want)) in oracles::CERTIFIER_REWARD.iter().enumerate() {
        check("certifier_reward", i, certifier_reward(s, pool, p, w).unwrap(), want);
    }
    for (i, &(q, t, want)) in oracles::PREDICTION_SCORE.iter().enumerate() {
        check("prediction_score", i, prediction_score(q, t).unwrap(), want);
    }
    for (i, &(ballots, index, want)) in oracles::INFORMATION_SCORE.iter().enumerate() {
        let views: Vec<BallotView> = ballots
            .iter()
            .map(|&(v, vote, prediction)| BallotView {
                voter: UserId(v),
                vote,
                prediction,
                stake: 1,
                reputation: 1,
            })
            .collect();
        check("information_score", i, information_score(&views, index).unwrap(), want);
    }
    let counts = [
        oracles::VOTE_WEIGHT.len(),
        oracles::VOTER_REWARD.len(),
        oracles::CERTIFIER_REWARD.len(),
        oracles::PREDICTION_SCORE.len(),
        oracles::INFORMATION_SCORE.len(),
    ];
    if counts.iter().any(|&c| c < 20) {
        failures.push(format!("oracle table sizes {counts:?}"));
    }

    let mut rng = RandomSource::new(0x5eed);
    for _ in 0..100_000 {
        let q: f64 = rng.gen_range(0.0..=1.0);
        for t in [true, false] {
            let v = prediction_score(q, t).unwrap();
            if !(0.0..=1.0).contains(&v) {
                failures.push(format!("R_q({q}, {t}) = {v}"));
            }
        }
        let n = rng.gen_range(1..=8);
        let views: Vec<BallotView> = (0..n)
            .map(|_| BallotView {
                voter: UserId(rng.gen_range(0..4)),
                vote: rng.gen_bool(0.5),
                prediction: rng.gen_range(0.0..=1.0),
                stake: 1,
                reputation: 1,
            })
            .collect();
        let v = information_score(&views, rng.gen_range(0..n)).unwrap();
        if !(0.0..=1.0).contains(&v) {
            failures.push(format!("information score {v} out of range"));
        }

        let s: f64 = rng.gen_range(0.01..100.0);
        let r: u32 = rng.gen_range(1..=100);
        let k: f64 = rng.gen_range(1.0..10.0);
        let a: f64 = rng.gen_range(0.0..=1.0);
        let b: f64 = rng.gen_range(0.0..=1.0);
        let f = |s, r| vote_weight(s, r, a).unwrap();
        if f(k * s, r) > k * f(s, r) * (1.0 + 1e-12) {
            failures.push(format!("f not sub-linear in stake at s={s} r={r} k={k} alpha={a}"));
        }
        let kr = rng.gen_range(1..=10u32);
        if f(s, kr * r) > f64::from(kr) * f(s, r) * (1.0 + 1e-12) {
            failures.push(format!("f not sub-linear in reputation at s={s} r={r} k={kr}"));
        }
        let g = |s, r| voter_reward(s, r, b).unwrap();
        if g(k * s, r) < k * g(s, r) * (1.0 - 1e-12) {
            failures.push(format!("g_v not super-linear at s={s} r={r} k={k} beta={b}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("oracle cases {counts:?}; 1e5 range and linearity draws"))
    } else {
        failures.truncate(5);
        Err(failures.join("; "))
    }
}

fn outcome_matrix() -> Outcome {
    use Verdict::*;
    let table = [
        (True, True, True),
        (True, False, Unknown),
        (True, Unknown, True),
        (False, True, Unknown),
        (False, False, False),
        (False, Unknown, False),
        (Unknown, True, Unknown),
        (Unknown, False, Unknown),
        (Unknown, Unknown, Unknown),
    ];
    let wrong: Vec<String> = table
        .iter()
        .filter(|(v, c, want)| combine_outcomes(*v, *c) != *want)
        .map(|(v, c, want)| format!("({v}, {c}) -> {} want {want}", combine_outcomes(*v, *c)))
        .collect();
    if wrong.is_empty() {
        Ok("9/9 cases".into())
    } else {
        Err(wrong.join("; "))
    }
}

struct Ballot {
    actor: UserId,
    vote: bool,
    prediction: Option<Prediction>,
    salt: Vec<u8>,
}

fn random_ballot(rng: &mut RandomSource, actor: UserId, voter: bool) -> Ballot {
    let mut salt = vec![0u8; rng.gen_range(0..=32)];
    rng.fill(&mut salt[..]);
    Ballot {
        actor,
        vote: rng.gen_bool(0.5),
        prediction: voter.then(|| Prediction::from_basis_points(rng.gen_range(0..=10_000)).unwrap()),
        salt,
    }
}

fn conservation_fuzz() -> Outcome {
    let params = ProtocolParams {
        voter_slots: 6,
        required_votes: 4,
        certification_window: 3,
        reveal_window: 3,
        starting_balance: 500,
        ..ProtocolParams::default()
    };
    let mut rng = RandomSource::new(77);
    let mut engine = Engine::new(params.clone(), 78).unwrap();
    let submitters: Vec<UserId> = (0..2).map(|_| engine.subscribe(Role::Submitter).id).collect();
    let voters: Vec<UserId> = (0..5).map(|_| engine.subscribe(Role::Voter).id).collect();
    let certifiers: Vec<UserId> = (0..3).map(|_| engine.subscribe(Role::Certifier).id).collect();
    let initial = engine.total_tokens();
    let mut pending: Vec<(PropositionId, Ballot)> = Vec::new();
    let (mut ok_ops, mut closed, mut left_unrevealed) = (0, 0, 0);

    for step in 0..1_000 {
        let available = engine.available().to_vec();
        let pick = |rng: &mut RandomSource| available[rng.gen_range(0..available.len())];
        let result = match rng.gen_range(0..20) {
            _ if available.is_empty() => {
                let who = submitters[rng.gen_range(0..2)];
                engine.submit_proposition(who, "fuzz", rng.gen_range(0..40)).map(|_| ())
            }
            0 | 1 => {
                let who = submitters[rng.gen_range(0..2)];
                engine.submit_proposition(who, "fuzz", rng.gen_range(0..40)).map(|_| ())
            }
            2..=8 => {
                let id = pick(&mut rng);
                let slots = engine.proposition(id).unwrap().selected_slots.clone();
                let actor = if rng.gen_bool(0.9) { slots[rng.gen_range(0..slots.len())] } else { voters[rng.gen_range(0..5)] };
                let b = random_ballot(&mut rng, actor, true);
                let stake = rng.gen_range(0..=11);
                let r = engine.commit_vote(actor, id, stake, ballot_digest(b.vote, b.prediction, &b.salt));
                if r.is_ok() {
                    pending.push((id, b));
                }
                r
            }
            9 | 10 => {
                let id = pick(&mut rng);
                let actor = certifiers[rng.gen_range(0..3)];
                let b = random_ballot(&mut rng, actor, false);
                let stake = rng.gen_range(9..=22);
                let r = engine.commit_certification(actor, id, stake, ballot_digest(b.vote, None, &b.salt));
                if r.is_ok() {
                    pending.push((id, b));
                }
                r
            }
            11..=15 if !pending.is_empty() => {
                let i = rng.gen_range(0..pending.len());
                let (id, b) = &pending[i];
                let r = engine.reveal(b.actor, *id, b.vote, b.prediction, &b.salt);
                if r.is_ok() || rng.gen_bool(0.3) {
                    pending.swap_remove(i);
                }
                r
            }
            16 | 17 => {
                engine.advance_block(rng.gen_range(1..=3));
                Ok(())
            }
            _ => {
                let id = pick(&mut rng);
                let r = engine.close_proposition(id).map(|_| ());
                if r.is_ok() {
                    closed += 1;
                    let before = pending.len();
                    pending.retain(|(p, _)| *p != id);
                    left_unrevealed += before - pending.len();
                }
                r
            }
        };
        ok_ops += usize::from(result.is_ok());
        if engine.total_tokens() != initial || engine.audit().is_err() {
            return Err(format!("step {step}: {} tokens, {initial} at start", engine.total_tokens()));
        }
    }
    if closed == 0 || left_unrevealed == 0 {
        return Err(format!("fuzz too shallow: {closed} closes, {left_unrevealed} unrevealed ballots"));
    }
    Ok(format!(
        "1000 operations ({ok_ops} accepted, {closed} closes, {left_unrevealed} ballots never revealed); total {initial} unchanged"
    ))
}

fn mutate(rng: &mut RandomSource, b: &Ballot, users: u64) -> Ballot {
    let mut m = Ballot {
        actor: b.actor,
        vote: b.vote,
        prediction: b.prediction,
        salt: b.salt.clone(),
    };
    match rng.gen_range(0..4) {
        0 => m.vote = !m.vote,
        1 => {
            m.prediction = match b.prediction {
                Some(p) if rng.gen_bool(0.8) => {
                    let bp = p.basis_points();
                    let delta = rng.gen_range(1..=500u16);
                    let moved = if bp >= delta && (bp + delta > 10_000 || rng.gen_bool(0.5)) { bp - delta } else { bp + delta };
                    Some(Prediction::from_basis_points(moved).unwrap())
                }
                Some(_) => None,
                None => Some(Prediction::from_basis_points(rng.gen_range(0..=10_000)).unwrap()),
            }
        }
        2 => match rng.gen_range(0..3) {
            0 if !m.salt.is_empty() => {
                let i = rng.gen_range(0..m.salt.len());
                m.salt[i] ^= 1 << rng.gen_range(0..8);
            }
            1 if !m.salt.is_empty() => {
                m.salt.pop();
            }
            _ => m.salt.push(rng.gen()),
        },
        _ => {
            let other = (b.actor.0 + rng.gen_range(1..users)) % users;
            m.actor = UserId(other);
        }
    }
    m
}

fn commit_reveal_soundness() -> Outcome {
    let params = ProtocolParams::default();
    let mut rng = RandomSource::new(4242);
    let mut engine = Engine::new(params.clone(), 4243).unwrap();
    let submitter = engine.subscribe(Role::Submitter).id;
    for _ in 0..10 {
        engine.subscribe(Role::Voter);
    }
    let certifiers: Vec<UserId> = (0..3).map(|_| engine.subscribe(Role::Certifier).id).collect();
    let users = engine.users().len() as u64;
    let (mut attempts, mut honest) = (0usize, 0usize);

    while attempts < 10_000 {
        let id = engine.submit_proposition(submitter, "soundness", 5).map_err(|e| e.to_string())?;
        let mut ballots = Vec::new();
        for &c in &certifiers {
            let b = random_ballot(&mut rng, c, false);
            engine.commit_certification(c, id, 11, ballot_digest(b.vote, None, &b.salt)).map_err(|e| e.to_string())?;
            ballots.push(b);
        }
        for actor in engine.proposition(id).unwrap().selected_slots.clone() {
            let b = random_ballot(&mut rng, actor, true);
            engine.commit_vote(actor, id, 1, ballot_digest(b.vote, b.prediction, &b.salt)).map_err(|e| e.to_string())?;
            ballots.push(b);
        }
        engine.advance_block(params.certification_window + 1);
        if engine.proposition(id).unwrap().phase != Phase::Reveal {
            return Err("reveal phase did not open".into());
        }
        for b in &ballots {
            let m = mutate(&mut rng, b, users);
            let revealed_before = engine.proposition(id).unwrap().revealed.len();
            if engine.reveal(m.actor, id, m.vote, m.prediction, &m.salt).is_ok() {
                return Err(format!("mutated reveal accepted after {attempts} attempts"));
            }
            if engine.proposition(id).unwrap().revealed.len() != revealed_before {
                return Err("rejected reveal changed state".into());
            }
            attempts += 1;
            engine
                .reveal(b.actor, id, b.vote, b.prediction, &b.salt)
                .map_err(|e| format!("honest reveal rejected: {e}"))?;
            honest += 1;
        }
        engine.close_proposition(id).map_err(|e| e.to_string())?;
    }
    Ok(format!("{attempts} mutated reveals rejected, {honest} honest reveals accepted"))
}

fn deterministic_run(config: &ExperimentConfig) -> ExperimentResult {
    run_experiment(config, None).expect("experiment runs")
}

fn determinism() -> Outcome {
    let mut checks = Vec::new();
    for protocol in [Protocol::Deepthought, Protocol::Astraea] {
        let c = row(3, protocol);
        let a = to_ndjson(&deterministic_run(&c));
        let b = to_ndjson(&run_experiment(&c, Some(1)).expect("experiment runs"));
        checks.push((a == b, format!("{protocol}: parallel and sequential logs identical")));
        let replayed = replay(&a, Some(3));
        checks.push((replayed.is_ok(), format!("{protocol}: in-process replay {:?}", replayed.map_err(|e| e.to_string()))));
    }

    let bin = env!("CARGO_BIN_EXE_deepthought");
    let tmp = tempfile::tempdir().expect("temp dir");
    let cfg = config_dir().join("row03.toml");
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let status = Command::new(bin)
            .args(["run", "--seed", "42", "--format", "csv", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .expect("binary runs");
        checks.push((status.status.success(), format!("run {name}: {}", status.status)));
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out)
            .map(|d| {
                d.map(|e| {
                    let e = e.unwrap();
                    (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
                })
                .collect()
            })
            .unwrap_or_default();
        files.sort();
        outputs.push(files);
    }
    checks.push((
        !outputs[0].is_empty() && outputs[0] == outputs[1],
        format!("{} output files byte-identical across runs", outputs[0].len()),
    ));
    let log = tmp.path().join("a").join("3-deepthought.ndjson");
    let status = Command::new(bin).arg("replay").arg("--log").arg(&log).output().expect("binary runs");
    checks.push((status.status.success(), format!("cli replay: {}", status.status)));
    verdict(&checks)
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("zero-adversary sanity", zero_adversary_sanity),
        ("robustness gap at ADV=25", adv25_gap),
        ("high-adversary gap", high_adversary_gap),
        ("breakdown regime", breakdown_regime),
        ("formula unit suite", formula_suite),
        ("outcome matrix", outcome_matrix),
        ("conservation fuzz", conservation_fuzz),
        ("commit-reveal soundness", commit_reveal_soundness),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
