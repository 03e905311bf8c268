mod support;

use bothunt_core::features::FEATURE_COUNT;
use bothunt_workbench::session::MAX_EXPLANATION;
use bothunt_workbench::{Label, Provenance, Session, Stage, WorkbenchConfig, WorkbenchError};
use support::{small_challenge, small_session};

#[test]
fn stages_refuse_to_run_without_their_inputs() {
    let (mut s, _) = small_session();
    for stage in [Stage::Graphs, Stage::Cluster, Stage::Train, Stage::Outliers, Stage::Hedge] {
        assert!(matches!(s.run_stage(stage), Err(WorkbenchError::Dependency { .. })), "{stage}");
    }
    assert!(s.initial_suspects(5).is_err());
    assert!("bogus".parse::<Stage>().is_err());
}

#[test]
fn feature_stage_is_content_addressed() {
    let (mut s, _) = small_session();
    let first = s.run_stage(Stage::Features).unwrap();
    let m = s.matrix().unwrap();
    assert_eq!(m.n_rows(), 250);
    assert_eq!(m.names.len(), FEATURE_COUNT);
    let again = s.run_stage(Stage::Features).unwrap();
    assert_eq!(first.artifact, again.artifact);
    assert_eq!(first.artifact.len(), 64);
}

#[test]
fn ensure_stage_runs_the_whole_chain() {
    let (mut s, gt) = small_session();
    s.ensure_stage(Stage::Outliers).unwrap();
    assert!(s.is_done(Stage::Features) && s.is_done(Stage::Cluster) && s.is_done(Stage::Outliers));
    assert!(!s.is_done(Stage::Train));
    for &b in gt.bot_ids.iter().take(4) {
        s.set_label(b, Label::Bot, vec![], Provenance::Analyst).unwrap();
    }
    let humans: Vec<u64> = s.dataset().accounts.iter().map(|a| a.user_id).filter(|u| !gt.bot_ids.contains(u)).take(20).collect();
    for &h in &humans {
        s.set_label(h, Label::Human, vec![], Provenance::Analyst).unwrap();
    }
    s.ensure_stage(Stage::Hedge).unwrap();
    assert!(s.model().is_some() && s.hedge().is_some());
}

#[test]
fn relabelling_marks_training_stale_and_changes_the_model() {
    let (mut s, gt) = small_session();
    s.ensure_stage(Stage::Outliers).unwrap();
    let bots: Vec<u64> = gt.bot_ids.iter().copied().collect();
    for &b in &bots[..3] {
        s.set_label(b, Label::Bot, vec![], Provenance::Analyst).unwrap();
    }
    let humans: Vec<u64> = s.dataset().accounts.iter().map(|a| a.user_id).filter(|u| !gt.bot_ids.contains(u)).take(15).collect();
    for &h in &humans {
        s.set_label(h, Label::Human, vec![], Provenance::Analyst).unwrap();
    }
    let before = s.run_stage(Stage::Train).unwrap().artifact;
    assert!(!s.status().iter().find(|st| st.stage == Stage::Train).unwrap().stale);
    s.set_label(bots[3], Label::Bot, vec!["ring".into()], Provenance::Analyst).unwrap();
    assert!(s.status().iter().find(|st| st.stage == Stage::Train).unwrap().stale);
    let after = s.run_stage(Stage::Train).unwrap().artifact;
    assert_ne!(before, after);
}

#[test]
fn labels_keep_history() {
    let (mut s, _) = small_session();
    let u = s.dataset().accounts[3].user_id;
    s.set_label(u, Label::Bot, vec!["x".into()], Provenance::Analyst).unwrap();
    s.set_label(u, Label::Human, vec![], Provenance::Analyst).unwrap();
    assert_eq!(s.labels().label_of(u), Label::Human);
    assert_eq!(s.labels().history().len(), 2);
    assert!(matches!(
        s.set_label(9_999_999, Label::Bot, vec![], Provenance::Analyst),
        Err(WorkbenchError::Core(bothunt_core::Error::UnknownUser(9_999_999)))
    ));
}

#[test]
fn initial_suspects_carry_reasons() {
    let (mut s, gt) = small_session();
    s.run_stage(Stage::Features).unwrap();
    let all = s.initial_suspects(usize::MAX).unwrap();
    assert_eq!(all.len(), 250);
    let top = &all[..10];
    let known = ["auto-generated name", "cloned profile image", "cloned profile url", "repetitive tweet openings", "unbroken tweeting sessions"];
    assert!(top.iter().flat_map(|t| &t.reasons).all(|r| known.contains(&r.as_str())));
    assert!(top.iter().all(|t| !t.reasons.is_empty()));
    assert!(top.iter().filter(|t| gt.bot_ids.contains(&t.user_id)).count() >= 5);
    let mut human_scores: Vec<f64> = all.iter().filter(|t| !gt.bot_ids.contains(&t.user_id)).map(|t| t.score).collect();
    human_scores.sort_by(f64::total_cmp);
    assert!(human_scores[human_scores.len() / 2] < top[9].score);
    assert!(s.initial_suspects(0).unwrap().is_empty());
}

#[test]
fn explanations_are_bounded_and_ordered() {
    let (mut s, _) = small_session();
    s.run_stage(Stage::Features).unwrap();
    let u = s.dataset().accounts[0].user_id;
    assert!(s.explain_user(u, 0).unwrap().entries.is_empty());
    let e = s.explain_user(u, 100).unwrap();
    assert_eq!(e.entries.len(), MAX_EXPLANATION);
    assert!(e.entries.windows(2).all(|w| w[0].contribution.abs() >= w[1].contribution.abs()));
    assert!(s.explain_user(424_242_424, 3).is_err());
}

#[test]
fn guesses_need_an_oracle_and_become_labels() {
    let (ds, gt) = small_challenge();
    let mut bare = Session::new(ds.clone(), WorkbenchConfig::default());
    assert!(matches!(bare.guess(1), Err(WorkbenchError::NoOracle)));

    let (mut s, _) = small_session();
    let bot = *gt.bot_ids.iter().next().unwrap();
    let (outcome, board) = s.guess(bot).unwrap();
    assert!(outcome.correct);
    assert_eq!(board.hits, 1);
    assert_eq!(s.labels().label_of(bot), Label::Bot);
    assert_eq!(s.labels().get(bot).unwrap().provenance, Provenance::Oracle);
    assert!(matches!(s.guess(bot), Err(WorkbenchError::Core(bothunt_core::Error::RepeatGuess(_)))));
    assert_eq!(s.advance_day().unwrap(), 1);
}

#[test]
fn session_directory_receives_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (ds, _) = small_challenge();
    let mut s = Session::new(ds, WorkbenchConfig::default()).with_dir(dir.path()).unwrap();
    let r = s.run_stage(Stage::Features).unwrap();
    assert!(dir.path().join(&r.artifact).exists());
    assert!(dir.path().join("stages.json").exists());
}
