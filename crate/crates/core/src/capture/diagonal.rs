use serde::Serialize;

use super::TraceEvent;
use crate::bitstream::{bit_k, Word};
use crate::error::{Error, Result};
use crate::game::{PlayTranscript, Side, Strategy};

/// The plays produced by the diagonal capture of an Alter strategy.
#[derive(Debug, Clone, Serialize)]
pub struct DiagonalCaptureResult {
    /// Transcripts of plays `0..=m`.
    pub plays: Vec<PlayTranscript>,
    /// Alter's replies `v_1, v_2, …` in scheduling order (`reply_log[0]` is
    /// `v_1`).
    pub reply_log: Vec<Word>,
    pub sweeps: usize,
    /// Number of scheduling steps at which the reply-enumeration invariant
    /// was checked.
    pub invariant_checks: usize,
    pub trace: Vec<TraceEvent>,
}

impl DiagonalCaptureResult {
    /// Alter reply `v_id`, 1-based.
    pub fn v(&self, id: usize) -> &Word {
        &self.reply_log[id - 1]
    }

    /// Shortest outcome prefix among the returned plays.
    pub fn common_len(&self) -> usize {
        self.plays
            .iter()
            .map(PlayTranscript::outcome_len)
            .min()
            .unwrap_or(0)
    }

    /// First play whose Alter moves are not `alter`'s replies.
    pub fn first_illegal_play(&self, alter: &Strategy) -> Result<Option<usize>> {
        for (i, p) in self.plays.iter().enumerate() {
            if !p.follows(alter)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// `T(i) = i(i+1)/2`.
fn tri(i: usize) -> usize {
    i * (i + 1) / 2
}

/// Run the diagonal schedule against `alter` for `sweeps` outer iterations
/// and return plays `0..=m`.
///
/// ```text
/// Start_0(0)                                   Alter replies v_1
/// for i = 1, 2, …:
///     Start_i(Θ(0 v_1 … v_{i(i+3)/2 - 1}, i))  Alter replies v_{i(i+3)/2}
///     for j = 0 ..= i:
///         Move_j(v_{T+1+j} … v_{T+i+j})        Alter replies v_{i(i+3)/2+j+1}
/// ```
/// with `T = i(i+1)/2`. Every reply is drawn from `alter` on the history of
/// the play it belongs to, and appended to the global log; before each
/// step the log length must equal the last subscript the step consumes.
pub fn capture_alter(alter: &Strategy, m: usize, sweeps: usize) -> Result<DiagonalCaptureResult> {
    if alter.side() != Side::Alter {
        return Err(Error::InvalidArgument(format!(
            "{:?} is not an Alter strategy",
            alter.name()
        )));
    }
    if sweeps < m {
        return Err(Error::InvalidArgument(format!(
            "sweeps ({sweeps}) must be at least the number of returned plays minus one ({m})"
        )));
    }

    let mut run = Schedule {
        alter,
        plays: Vec::with_capacity(sweeps + 1),
        log: Vec::new(),
        trace: Vec::new(),
        checks: 0,
    };

    run.ego_move(0, Word::zeros(1))?;
    run.alter_reply(0, 1)?;

    for i in 1..=sweeps {
        let last = i * (i + 3) / 2 - 1;
        run.check_consumable(last, format!("Start_{i}"))?;
        let mut head = Word::zeros(1);
        for v in &run.log[..last] {
            head.extend_from(v);
        }
        run.ego_move(i, head.theta(i as u64)?)?;
        run.alter_reply(i, last + 1)?;

        let t = tri(i);
        for j in 0..=i {
            let (lo, hi) = (t + 1 + j, t + i + j);
            run.check_consumable(hi, format!("Move_{j} in sweep {i}"))?;
            let block = Word::concat(&run.log[lo - 1..hi]);
            run.ego_move(j, block)?;
            run.alter_reply(j, i * (i + 3) / 2 + j + 1)?;
        }
    }

    let Schedule {
        plays,
        log,
        trace,
        checks,
        ..
    } = run;
    Ok(DiagonalCaptureResult {
        plays: plays.into_iter().take(m + 1).collect(),
        reply_log: log,
        sweeps,
        invariant_checks: checks,
        trace,
    })
}

struct Schedule<'a> {
    alter: &'a Strategy,
    plays: Vec<PlayTranscript>,
    log: Vec<Word>,
    trace: Vec<TraceEvent>,
    checks: usize,
}

impl Schedule<'_> {
    fn check_consumable(&mut self, last_subscript: usize, step: String) -> Result<()> {
        self.checks += 1;
        if self.log.len() != last_subscript {
            return Err(Error::CaptureInvariant(format!(
                "{step} consumes up to v_{last_subscript} but {} replies were issued",
                self.log.len()
            )));
        }
        Ok(())
    }

    fn ego_move(&mut self, play: usize, word: Word) -> Result<()> {
        if play == self.plays.len() {
            self.plays.push(PlayTranscript::new());
        }
        let transcript = &mut self.plays[play];
        if Side::to_move(transcript.len()) != Side::Ego {
            return Err(Error::CaptureInvariant(format!(
                "Ego moved out of turn in play {play}"
            )));
        }
        self.trace.push(TraceEvent {
            play,
            side: Side::Ego,
            word: word.clone(),
            reply_id: None,
        });
        transcript.push(word);
        Ok(())
    }

    fn alter_reply(&mut self, play: usize, expected_id: usize) -> Result<()> {
        let transcript = &mut self.plays[play];
        let reply = self.alter.reply(&transcript.words())?;
        self.log.push(reply.clone());
        let id = self.log.len();
        if id != expected_id {
            return Err(Error::CaptureInvariant(format!(
                "reply in play {play} is v_{id}, schedule expects v_{expected_id}"
            )));
        }
        self.trace.push(TraceEvent {
            play,
            side: Side::Alter,
            word: reply.clone(),
            reply_id: Some(id),
        });
        transcript.push(reply);
        Ok(())
    }
}

/// Result of comparing every play with the Θ-shifted outcome of play 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaCheck {
    pub holds: bool,
    pub horizon: usize,
    /// First `(play, bit index)` where `r_i` and `Θ(r_0, i)` differ.
    pub witness: Option<(usize, usize)>,
}

/// Check `prefix_L(r_i) = prefix_L(Θ(r_0, i))` for every returned play.
pub fn verify_theta_relation(result: &DiagonalCaptureResult, horizon: usize) -> Result<ThetaCheck> {
    let available = result.common_len();
    if horizon > available {
        return Err(Error::IndexOutOfRange {
            index: horizon,
            len: available,
        });
    }
    let Some(first) = result.plays.first() else {
        return Ok(ThetaCheck {
            holds: true,
            horizon,
            witness: None,
        });
    };
    let r0 = first.outcome_prefix();
    for (i, play) in result.plays.iter().enumerate() {
        let ri = play.outcome_prefix();
        for k in 0..horizon {
            let shifted = r0.bits()[k] ^ bit_k(k as u32, i as u64);
            if ri.bits()[k] != shifted {
                return Ok(ThetaCheck {
                    holds: false,
                    horizon,
                    witness: Some((i, k)),
                });
            }
        }
    }
    Ok(ThetaCheck {
        holds: true,
        horizon,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstream::w;
    use crate::game::random_corpus;

    /// Alter strategy whose replies are distinct and recognizable: the reply
    /// to a history is the binary form of the total number of bits so far.
    fn counting_alter() -> Strategy {
        Strategy::new(Side::Alter, "count", |h: &[Word]| {
            let bits: usize = h.iter().map(Word::len).sum();
            Word::from_rank(bits as u64, 8)
        })
    }

    #[test]
    fn schedule_reproduces_simulation_table() {
        let r = capture_alter(&counting_alter(), 3, 3).unwrap();
        let v = |id: usize| r.v(id).clone();
        let cat = |ids: &[usize]| Word::concat(ids.iter().map(|&i| r.v(i)));

        let p0 = r.plays[0].words();
        assert_eq!(
            p0[..8],
            [
                w("0"),
                v(1),
                v(2),
                v(3),
                cat(&[4, 5]),
                v(6),
                cat(&[7, 8, 9]),
                v(10)
            ]
        );

        let p1 = r.plays[1].words();
        let mut one_v1 = w("1");
        one_v1.extend_from(r.v(1));
        assert_eq!(p1[0], one_v1);
        assert_eq!(p1[0], Word::concat([&w("0"), r.v(1)]).theta(1).unwrap());
        assert_eq!(
            p1[1..7],
            [v(2), v(3), v(4), cat(&[5, 6]), v(7), cat(&[8, 9, 10])]
        );

        let p2 = r.plays[2].words();
        let head2 = Word::concat([&w("0"), r.v(1), r.v(2), r.v(3), r.v(4)]);
        assert_eq!(p2[..4], [head2.theta(2).unwrap(), v(5), cat(&[6, 7]), v(8)]);

        let p3 = r.plays[3].words();
        let head3 = Word::concat(std::iter::once(&w("0")).chain(r.reply_log[..8].iter()));
        assert_eq!(p3[..2], [head3.theta(3).unwrap(), v(9)]);
    }

    #[test]
    fn constant_zero_alter() {
        let a = Strategy::constant(Side::Alter, w("0"));
        let r = capture_alter(&a, 1, 4).unwrap();
        let r0 = r.plays[0].outcome_prefix();
        let r1 = r.plays[1].outcome_prefix();
        assert!(r0.bits().iter().all(|&b| !b));
        let len = r0.len().min(r1.len());
        assert_eq!(
            r1.prefix(len).unwrap(),
            r0.prefix(len).unwrap().flip(0).unwrap()
        );
    }

    #[test]
    fn reply_ids_and_invariants_through_twelve_sweeps() {
        let r = capture_alter(&counting_alter(), 12, 12).unwrap();
        // One reply for Start_0, then i + 2 replies per sweep i.
        let expected: usize = 1 + (1..=12).map(|i| i + 2).sum::<usize>();
        assert_eq!(r.reply_log.len(), expected);
        // Start_i plus i + 1 moves, per sweep.
        assert_eq!(r.invariant_checks, (1..=12).map(|i| i + 2).sum::<usize>());
        let ids: Vec<usize> = r.trace.iter().filter_map(|e| e.reply_id).collect();
        assert_eq!(ids, (1..=expected).collect::<Vec<_>>());
        assert_eq!(r.first_illegal_play(&counting_alter()).unwrap(), None);
    }

    #[test]
    fn opening_length_matches_start_formula() {
        let a = Strategy::from_spec(random_corpus(Side::Alter, 8, 1).remove(0));
        let r = capture_alter(&a, 6, 6).unwrap();
        for (i, play) in r.plays.iter().enumerate().skip(1) {
            let consumed: usize = r.reply_log[..i * (i + 3) / 2 - 1]
                .iter()
                .map(Word::len)
                .sum();
            assert_eq!(play.moves()[0].word.len(), 1 + consumed);
        }
    }

    #[test]
    fn theta_relation_holds_and_mutation_is_located() {
        let r = capture_alter(&counting_alter(), 3, 8).unwrap();
        assert!(verify_theta_relation(&r, 16).unwrap().holds);
        assert!(verify_theta_relation(&r, r.common_len()).unwrap().holds);
        assert!(verify_theta_relation(&r, r.common_len() + 1).is_err());

        let mut bad = r.clone();
        let idx = 2;
        let old = bad.plays[2].moves()[idx].word.clone();
        let start = bad.plays[2].moves()[..idx]
            .iter()
            .map(|m| m.word.len())
            .sum::<usize>();
        bad.plays[2].set_word(idx, old.flip(0).unwrap());
        let check = verify_theta_relation(&bad, r.common_len()).unwrap();
        assert!(!check.holds);
        assert_eq!(check.witness, Some((2, start)));
    }

    #[test]
    fn single_play() {
        let r = capture_alter(&counting_alter(), 0, 0).unwrap();
        assert_eq!(r.plays.len(), 1);
        assert_eq!(r.plays[0].len(), 2);
        assert!(verify_theta_relation(&r, r.common_len()).unwrap().holds);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(capture_alter(&counting_alter(), 5, 4).is_err());
        let e = Strategy::constant(Side::Ego, w("1"));
        assert!(capture_alter(&e, 0, 1).is_err());
    }
}
