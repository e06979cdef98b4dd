use std::path::Path;

use serde::{Deserialize, Serialize};
use thinlab::capture::{capture_alter, capture_ego, verify_theta_relation, TraceEvent};
use thinlab::game::{
    evaluate, play, random_corpus, CodeCylinders, Cylinder, NoConsecutiveOnes, Side, Strategy,
    StrategySpec, TargetSet, Verdict,
};
use thinlab::kthin::{q_table, Budget};
use thinlab::xorset::{parity_partition, verify_partition_implies_xor};
use thinlab::{Error, FiniteCode, Word};

use crate::report::{write_json, CliError, Outcome, Status};
use crate::{
    CaptureCommand, CodeCommand, Command, CorpusArgs, CorpusSource, GameCommand, QtableArgs,
    SideArg, XorCommand,
};

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Code(c) => code(c),
        Command::Game(g) => game(g),
        Command::Capture(c) => capture(c),
        Command::Xor(x) => xor(x),
        Command::Qtable(q) => qtable(q),
        Command::Corpus(c) => corpus(c),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::file(path, e))
}

fn load_code(path: &Path) -> Result<FiniteCode, CliError> {
    FiniteCode::parse(&read(path)?).map_err(|e| match e {
        Error::InvalidWord(_) | Error::LengthMismatch { .. } => {
            CliError::Parse(format!("{}: {e}", path.display()))
        }
        other => other.into(),
    })
}

fn parse_word(text: &str) -> Result<Word, CliError> {
    text.parse::<Word>().map_err(CliError::from)
}

/// A corpus file is either a bare list of strategies or an object with a
/// `strategies` list, such as the output of `thinlab corpus`.
#[derive(Deserialize)]
#[serde(untagged)]
enum CorpusFile {
    List(Vec<StrategySpec>),
    Wrapped { strategies: Vec<StrategySpec> },
}

fn load_corpus(path: &Path) -> Result<Vec<StrategySpec>, CliError> {
    let corpus: CorpusFile = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(match corpus {
        CorpusFile::List(specs) | CorpusFile::Wrapped { strategies: specs } => specs,
    })
}

fn code(command: &CodeCommand) -> Result<Outcome, CliError> {
    match command {
        CodeCommand::Analyze { file } => {
            let code = load_code(file)?;
            #[derive(Serialize)]
            struct Report<'a> {
                code: &'a [Word],
                analysis: thinlab::CodeAnalysis,
            }
            let analysis = code.analyze()?;
            Outcome::new(
                "code analyze",
                Report {
                    code: code.members(),
                    analysis,
                },
                Status::Ok,
            )
        }
        CodeCommand::Decode {
            file,
            received,
            radius,
            sent,
            errors,
        } => {
            let code = load_code(file)?;
            if let Some(received) = received {
                let received = parse_word(received)?;
                let result = match radius {
                    Some(r) => code.decode_within(&received, *r)?,
                    None => code.decode_nearest(&received)?,
                };
                #[derive(Serialize)]
                struct Report {
                    received: Word,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    radius: Option<usize>,
                    result: thinlab::DecodeResult,
                }
                Outcome::new(
                    "code decode",
                    Report {
                        received,
                        radius: *radius,
                        result,
                    },
                    Status::Ok,
                )
            } else {
                let sent = parse_word(sent.as_deref().expect("clap requires --sent"))?;
                let errors = errors.clone().unwrap_or_default();
                let transmission = code.simulate_transmission(&sent, &errors)?;
                #[derive(Serialize)]
                struct Report {
                    errors: Vec<usize>,
                    transmission: thinlab::Transmission,
                    recovered: bool,
                }
                let recovered = transmission.recovered();
                Outcome::new(
                    "code decode",
                    Report {
                        errors,
                        transmission,
                        recovered,
                    },
                    Status::Ok,
                )
            }
        }
        CodeCommand::Maximalize { file, k } => {
            let code = load_code(file)?;
            let maximal = code.extend_to_maximal_thin(*k)?;
            let added: Vec<&Word> = maximal
                .members()
                .iter()
                .filter(|w| !code.contains(w))
                .collect();
            let verified = maximal.is_maximal_k_thin(*k)?;
            #[derive(Serialize)]
            struct Report<'a> {
                k: u64,
                input: &'a [Word],
                added: Vec<&'a Word>,
                output: &'a [Word],
                maximal: bool,
            }
            Outcome::new(
                "code maximalize",
                Report {
                    k: *k,
                    input: code.members(),
                    added,
                    output: maximal.members(),
                    maximal: verified,
                },
                Status::from_pass(verified),
            )
        }
    }
}

fn resolve_strategy(
    reference: &str,
    side: Side,
    corpus: &[StrategySpec],
) -> Result<Strategy, CliError> {
    let strategy = if let Some(spec) = corpus.iter().find(|s| s.name == reference) {
        Strategy::from_spec(spec.clone())
    } else if let Some(word) = reference.strip_prefix("constant:") {
        Strategy::constant(side, parse_word(word)?)
    } else if reference == "copycat" {
        Strategy::copycat()
    } else {
        return Err(CliError::Parse(format!("unknown strategy {reference:?}")));
    };
    if strategy.side() != side {
        return Err(CliError::Parse(format!(
            "strategy {reference:?} plays {}, expected {}",
            strategy.side().label(),
            side.label()
        )));
    }
    Ok(strategy)
}

fn resolve_target(spec: &str) -> Result<Box<dyn TargetSet>, CliError> {
    if spec == "no-consecutive-ones" {
        Ok(Box::new(NoConsecutiveOnes))
    } else if let Some(word) = spec.strip_prefix("cylinder:") {
        Ok(Box::new(Cylinder(parse_word(word)?)))
    } else if let Some(path) = spec.strip_prefix("code:") {
        Ok(Box::new(CodeCylinders(load_code(Path::new(path))?)))
    } else {
        Err(CliError::Parse(format!("unknown target {spec:?}")))
    }
}

fn game(command: &GameCommand) -> Result<Outcome, CliError> {
    let GameCommand::Play {
        ego,
        alter,
        strategy,
        rounds,
        target,
    } = command;
    let corpus = match strategy {
        Some(path) => load_corpus(path)?,
        None => Vec::new(),
    };
    let ego = resolve_strategy(ego, Side::Ego, &corpus)?;
    let alter = resolve_strategy(alter, Side::Alter, &corpus)?;
    let target = target.as_deref().map(resolve_target).transpose()?;
    let transcript = play(&ego, &alter, *rounds)?;
    let verdict = target
        .as_deref()
        .map(|t| evaluate(t, &transcript))
        .transpose()?;

    #[derive(Serialize)]
    struct Report {
        ego: String,
        alter: String,
        rounds: usize,
        transcript: thinlab::game::PlayTranscript,
        outcome_prefix: Word,
        #[serde(skip_serializing_if = "Option::is_none")]
        target: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        verdict: Option<Verdict>,
    }
    Outcome::new(
        "game play",
        Report {
            ego: ego.name().into(),
            alter: alter.name().into(),
            rounds: *rounds,
            outcome_prefix: transcript.outcome_prefix(),
            transcript,
            target: target.map(|t| t.name()),
            verdict,
        },
        Status::Ok,
    )
}

#[derive(Serialize)]
struct CorpusInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    size: usize,
}

fn load_strategies(
    source: &CorpusSource,
    side: Side,
    default_size: usize,
) -> Result<(CorpusInfo, Vec<Strategy>), CliError> {
    let (info, specs) = match &source.strategy {
        Some(path) => {
            let specs: Vec<StrategySpec> = load_corpus(path)?
                .into_iter()
                .filter(|s| s.side == side)
                .collect();
            let info = CorpusInfo {
                file: Some(path.display().to_string()),
                seed: None,
                size: specs.len(),
            };
            (info, specs)
        }
        None => {
            let size = source.size.unwrap_or(default_size);
            let info = CorpusInfo {
                file: None,
                seed: Some(source.seed),
                size,
            };
            (info, random_corpus(side, source.seed, size))
        }
    };
    if specs.is_empty() {
        return Err(CliError::Parse(format!(
            "corpus has no {} strategies",
            side.label()
        )));
    }
    Ok((info, specs.into_iter().map(Strategy::from_spec).collect()))
}

#[derive(Serialize)]
struct TraceRecord {
    name: String,
    trace: Vec<TraceEvent>,
}

fn capture(command: &CaptureCommand) -> Result<Outcome, CliError> {
    match command {
        CaptureCommand::Ego { source, rounds } => {
            let (corpus, strategies) = load_strategies(source, Side::Ego, 100)?;
            #[derive(Serialize)]
            struct Entry {
                name: String,
                pass: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                divergence_index: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                check: Option<thinlab::capture::MirrorCheck>,
                #[serde(skip_serializing_if = "Option::is_none")]
                error: Option<String>,
            }
            let mut entries = Vec::new();
            let mut traces = Vec::new();
            for ego in &strategies {
                let name = ego.name().to_string();
                match capture_ego(ego, *rounds).and_then(|r| Ok((r.check(ego)?, r))) {
                    Ok((check, result)) => {
                        entries.push(Entry {
                            name: name.clone(),
                            pass: check.passed(result.divergence_index),
                            divergence_index: Some(result.divergence_index),
                            check: Some(check),
                            error: None,
                        });
                        traces.push(TraceRecord {
                            name,
                            trace: result.trace,
                        });
                    }
                    Err(e) => entries.push(Entry {
                        name,
                        pass: false,
                        divergence_index: None,
                        check: None,
                        error: Some(e.to_string()),
                    }),
                }
            }
            if let Some(path) = &source.trace {
                write_json(path, &traces)?;
            }
            let passed = entries.iter().filter(|e| e.pass).count();
            #[derive(Serialize)]
            struct Report {
                rounds: usize,
                corpus: CorpusInfo,
                passed: usize,
                total: usize,
                strategies: Vec<Entry>,
            }
            let total = entries.len();
            Outcome::new(
                "capture ego",
                Report {
                    rounds: *rounds,
                    corpus,
                    passed,
                    total,
                    strategies: entries,
                },
                Status::from_pass(passed == total),
            )
        }
        CaptureCommand::Alter {
            source,
            plays,
            sweeps,
            check_theta,
        } => {
            let (corpus, strategies) = load_strategies(source, Side::Alter, 50)?;
            #[derive(Serialize)]
            struct Entry {
                name: String,
                pass: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                replies: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                invariant_checks: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                common_len: Option<usize>,
                #[serde(skip_serializing_if = "Option::is_none")]
                theta: Option<thinlab::capture::ThetaCheck>,
                #[serde(skip_serializing_if = "Option::is_none")]
                error: Option<String>,
            }
            let mut entries = Vec::new();
            let mut traces = Vec::new();
            for alter in &strategies {
                let name = alter.name().to_string();
                let run = capture_alter(alter, *plays, *sweeps).and_then(|r| {
                    let legal = r.first_illegal_play(alter)?.is_none();
                    let theta = check_theta
                        .map(|l| verify_theta_relation(&r, l))
                        .transpose()?;
                    Ok((r, legal, theta))
                });
                match run {
                    Ok((result, legal, theta)) => {
                        let pass = legal && theta.as_ref().is_none_or(|t| t.holds);
                        entries.push(Entry {
                            name: name.clone(),
                            pass,
                            replies: Some(result.reply_log.len()),
                            invariant_checks: Some(result.invariant_checks),
                            common_len: Some(result.common_len()),
                            theta,
                            error: (!legal).then(|| "a play deviates from the strategy".into()),
                        });
                        traces.push(TraceRecord {
                            name,
                            trace: result.trace,
                        });
                    }
                    Err(e) => entries.push(Entry {
                        name,
                        pass: false,
                        replies: None,
                        invariant_checks: None,
                        common_len: None,
                        theta: None,
                        error: Some(e.to_string()),
                    }),
                }
            }
            if let Some(path) = &source.trace {
                write_json(path, &traces)?;
            }
            let passed = entries.iter().filter(|e| e.pass).count();
            #[derive(Serialize)]
            struct Report {
                plays: usize,
                sweeps: usize,
                #[serde(skip_serializing_if = "Option::is_none")]
                check_theta: Option<usize>,
                corpus: CorpusInfo,
                passed: usize,
                total: usize,
                strategies: Vec<Entry>,
            }
            let total = entries.len();
            Outcome::new(
                "capture alter",
                Report {
                    plays: *plays,
                    sweeps: *sweeps,
                    check_theta: *check_theta,
                    corpus,
                    passed,
                    total,
                    strategies: entries,
                },
                Status::from_pass(passed == total),
            )
        }
    }
}

fn xor(command: &XorCommand) -> Result<Outcome, CliError> {
    match command {
        XorCommand::Partition { n } => {
            let (t0, t1) = parity_partition(*n)?;
            let report = verify_partition_implies_xor(&t0, &t1)?;
            #[derive(Serialize)]
            struct Report<'a> {
                n: usize,
                t0: &'a [Word],
                t1: &'a [Word],
                check: thinlab::xorset::CoverReport,
            }
            let pass = report.applicable && report.holds;
            Outcome::new(
                "xor partition",
                Report {
                    n: *n,
                    t0: t0.members(),
                    t1: t1.members(),
                    check: report,
                },
                Status::from_pass(pass),
            )
        }
        XorCommand::Verify { t0, t1 } => {
            let (a, b) = (load_code(t0)?, load_code(t1)?);
            let report = verify_partition_implies_xor(&a, &b)?;
            let status = Status::from_pass(report.holds);
            Outcome::new("xor verify", report, status)
        }
    }
}

fn qtable(args: &QtableArgs) -> Result<Outcome, CliError> {
    let budget = Budget {
        max_n: args.max_n,
        max_n_k2: args.max_n_k2,
        node_limit: args.node_limit,
    };
    if args.n_max < 2 || args.k_max < 2 {
        return Err(CliError::Parse(
            "--n-max and --k-max must be at least 2".into(),
        ));
    }
    let rows = q_table(args.n_max, args.k_max, &budget, args.witness)?;
    let all_exact = rows.iter().all(|r| r.value.exact().is_some());
    #[derive(Serialize)]
    struct Report {
        budget: Budget,
        rows: Vec<thinlab::kthin::QRow>,
    }
    let status = if all_exact {
        Status::Ok
    } else {
        Status::BudgetExceeded
    };
    Outcome::new("qtable", Report { budget, rows }, status)
}

fn corpus(args: &CorpusArgs) -> Result<Outcome, CliError> {
    let side = match args.side {
        SideArg::Ego => Side::Ego,
        SideArg::Alter => Side::Alter,
    };
    #[derive(Serialize)]
    struct Report {
        seed: u64,
        size: usize,
        strategies: Vec<StrategySpec>,
    }
    Outcome::new(
        "corpus",
        Report {
            seed: args.seed,
            size: args.size,
            strategies: random_corpus(side, args.seed, args.size),
        },
        Status::Ok,
    )
}
