#[path = "support/oracles.rs"]
mod oracles;

use bothunt_core::oracle::{replay, ChallengeState, Ledger, LedgerEntry};
use bothunt_core::{Error, Scoreboard};
use oracles::{exact_score, ratio_to_f64, LEADERBOARD};
use proptest::prelude::*;

#[test]
fn leaderboard_rows_reproduce_exactly() {
    for (team, misses, hits, acc, speed, fin) in LEADERBOARD {
        let board: Scoreboard = Scoreboard::from_counts(hits, misses, speed);
        let (ra, rf) = exact_score(hits, misses, speed);
        assert_eq!(board.accuracy, acc, "{team} accuracy");
        assert_eq!(board.final_score, fin, "{team} final");
        assert_eq!(ratio_to_f64(ra), acc, "{team} oracle accuracy");
        assert_eq!(ratio_to_f64(rf), fin, "{team} oracle final");
        assert_eq!(board.guesses, hits + misses);
    }
}

#[test]
fn finishing_on_day_sixteen_of_twenty_eight_earns_twelve() {
    let mut c = ChallengeState::new(1..=3, 28).unwrap();
    for _ in 0..16 {
        c.advance_day().unwrap();
    }
    c.submit_guess(1).unwrap();
    c.submit_guess(500).unwrap();
    c.submit_guess(2).unwrap();
    c.submit_guess(3).unwrap();
    let b: Scoreboard = c.scoreboard();
    assert_eq!(b.speed, 12);
    assert_eq!(b.all_found_day, Some(16));
    assert_eq!(b.accuracy, 2.75);
    assert_eq!(b.final_score, 14.75);
}

#[test]
fn leaderboard_rows_replay_from_ledgers() {
    for (team, misses, hits, _, speed, fin) in LEADERBOARD {
        // all 39 bots exist; the team finding every one finishes on day 28 - speed
        let finish_day = 28 - speed;
        let mut entries: Vec<LedgerEntry> = (0..misses).map(|i| LedgerEntry { user_id: 10_000 + i as u64, day: 0, correct: false }).collect();
        entries.extend((0..hits).map(|i| LedgerEntry { user_id: i as u64, day: if hits == 39 { finish_day } else { 0 }, correct: true }));
        let ledger = Ledger { duration_days: 28, bot_count: 39, entries };
        let b: Scoreboard = replay(&ledger);
        assert_eq!((b.hits, b.misses, b.speed, b.final_score), (hits, misses, speed, fin), "{team}");
    }
}

#[test]
fn challenge_rejects_bad_guesses() {
    let mut c = ChallengeState::new([1, 2], 2).unwrap();
    c.submit_guess(1).unwrap();
    assert!(matches!(c.submit_guess(1), Err(Error::RepeatGuess(1))));
    assert_eq!(c.entries().len(), 1);
    c.advance_day().unwrap();
    c.advance_day().unwrap();
    assert!(matches!(c.submit_guess(2), Err(Error::ChallengeOver(_))));
    assert!(matches!(ChallengeState::new(Vec::<u64>::new(), 2), Err(Error::EmptyGroundTruth)));
    assert!(matches!(ChallengeState::new([1], 0), Err(Error::ZeroDuration)));
}

#[test]
fn ledger_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = ChallengeState::new([3, 4, 5], 10).unwrap();
    c.submit_guess(3).unwrap();
    c.advance_day().unwrap();
    c.submit_guess(7).unwrap();
    let path = dir.path().join("ledger.json");
    c.ledger().save(&path).unwrap();
    let back = Ledger::load(&path).unwrap();
    assert_eq!(back, c.ledger());
    assert!(matches!(Ledger::load(dir.path().join("absent.json")), Err(Error::MissingFile(_))));
}

#[derive(Debug, Clone)]
enum Action {
    Guess(u64),
    Advance,
}

fn action() -> impl Strategy<Value = Action> {
    prop_oneof![3 => (0u64..30).prop_map(Action::Guess), 1 => Just(Action::Advance)]
}

proptest! {
    #[test]
    fn replay_matches_incremental_state(bots in proptest::collection::btree_set(0u64..30, 1..10),
                                        duration in 1u32..15,
                                        actions in proptest::collection::vec(action(), 0..80)) {
        let mut c = ChallengeState::new(bots.iter().copied(), duration).unwrap();
        for a in actions {
            match a {
                Action::Guess(u) => { let _ = c.submit_guess(u); }
                Action::Advance => { let _ = c.advance_day(); }
            }
        }
        let live: Scoreboard = c.scoreboard();
        let replayed: Scoreboard = replay(&c.ledger());
        prop_assert_eq!(live, replayed);
        prop_assert_eq!(live.guesses, live.hits + live.misses);
        prop_assert_eq!(live.accuracy, live.hits as f64 - live.misses as f64 / 4.0);
        prop_assert_eq!(live.final_score, live.accuracy + f64::from(live.speed));
        if live.speed > 0 {
            prop_assert_eq!(live.hits, bots.len());
        }
        prop_assert!(live.speed <= duration);
    }

    #[test]
    fn no_guess_is_ever_scored_twice(bots in proptest::collection::btree_set(0u64..20, 1..8),
                                     guesses in proptest::collection::vec(0u64..20, 0..60)) {
        let mut c = ChallengeState::new(bots.iter().copied(), 5).unwrap();
        for g in guesses {
            let _ = c.submit_guess(g);
        }
        let ids: std::collections::BTreeSet<u64> = c.entries().iter().map(|e| e.user_id).collect();
        prop_assert_eq!(ids.len(), c.entries().len());
        for e in c.entries() {
            prop_assert_eq!(e.correct, bots.contains(&e.user_id));
        }
    }
}
