//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines appear in `cargo test`
//! output; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use cfgame::cli::{run, words_up_to};
use cfgame::{parse_game, render_game};
use cfgame_core::automaton::{build_from_table, build_safelr_automaton};
use cfgame_core::effects::{call_guarantees, compute_effect_table, extract_strategy, EffectTable};
use cfgame_core::semantics::{replay_all, Outcome};
use cfgame_core::{
    compose_effects, decide_lr, random_game, solve_any_order_bounded, solve_lr_bounded,
    solve_multipass_bounded, Game, GenParams, Symbol, Word,
};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const CORPUS_SIZE: usize = 200;
const MAX_WORD_LEN: usize = 4;
const ORACLE_BUDGET: usize = 12;
const ROMEO_LEN: usize = 6;
const STATE_LIMIT: usize = 10_000;
const MOVE_CAP: usize = 10_000;

struct Entry {
    seed: u64,
    game: Game,
    table: EffectTable,
}

/// Finite games with |Σ| ≤ 4, |Γ| ≤ 2, at most 3 rule words of length at
/// most 2 and a target automaton of at most 5 states.
fn corpus() -> Vec<Entry> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < CORPUS_SIZE {
        let n_symbols = 2 + (seed % 3) as usize;
        let params = GenParams {
            n_symbols,
            n_functions: 1 + ((seed / 3) % 2) as usize % (n_symbols - 1).min(2),
            rule_words: 1 + ((seed / 6) % 3) as usize,
            max_rule_len: 2,
            regular: false,
            target_depth: 1 + ((seed / 18) % 3) as usize,
        };
        let game = random_game(seed, &params).expect("valid parameters");
        if game.target_dfa().num_states() <= 5 && game.is_finite() {
            let table = compute_effect_table(&game);
            out.push(Entry { seed, game, table });
        }
        seed += 1;
    }
    out
}

struct Line {
    ok: bool,
    text: String,
}

fn line(ok: bool, text: impl Into<String>) -> Line {
    Line {
        ok,
        text: text.into(),
    }
}

fn show(game: &Game, w: &[Symbol]) -> String {
    game.display_word(w).to_string()
}

/// Oracle equivalence, automaton agreement, certificate soundness and the
/// L2R-to-any-order inclusion, all over the corpus pairs.
fn corpus_criteria(corpus: &[Entry]) -> [Line; 4] {
    let mut pairs = 0;
    let mut sound = 0;
    let mut disagreements = Vec::new();
    let mut aut_states = 0;
    let mut aut_mismatch = Vec::new();
    let mut aut_failures = 0;
    let mut safe = 0;
    let mut with_calls = 0;
    let mut plays = 0;
    let mut cert_failures = Vec::new();
    let mut inclusion_failures = Vec::new();
    for e in corpus {
        let aut = match build_from_table(&e.game, &e.table, STATE_LIMIT) {
            Ok(a) => Some(a),
            Err(_) => {
                aut_failures += 1;
                None
            }
        };
        if let Some(a) = &aut {
            aut_states = aut_states.max(a.num_states());
        }
        for w in words_up_to(&e.game, MAX_WORD_LEN) {
            pairs += 1;
            let decided = e.table.is_safe(&w).unwrap();
            let oracle = solve_lr_bounded(&e.game, &w, ORACLE_BUDGET, ROMEO_LEN).unwrap();
            if oracle.outcome.is_sound() {
                sound += 1;
                if decided != oracle.is_win() {
                    disagreements.push(format!("seed {} word {}", e.seed, show(&e.game, &w)));
                }
            }
            if let Some(a) = &aut {
                if a.accepts(&w).unwrap() != decided {
                    aut_mismatch.push(format!("seed {} word {}", e.seed, show(&e.game, &w)));
                }
            }
            if !decided {
                continue;
            }
            safe += 1;
            let cert = extract_strategy(&e.game, &e.table, &w, ROMEO_LEN).unwrap();
            let report = replay_all(&e.game, &w, || cert.player(), ROMEO_LEN, MOVE_CAP).unwrap();
            plays += report.plays.len();
            if cert.call_bound > 0 {
                with_calls += 1;
            }
            if !report.all_won() || !report.exhaustive || !cert.exhaustive {
                cert_failures.push(format!("seed {} word {}", e.seed, show(&e.game, &w)));
            }
            let any = solve_any_order_bounded(&e.game, &w, cert.call_bound, ROMEO_LEN).unwrap();
            if any.outcome != Outcome::Win {
                inclusion_failures.push(format!(
                    "seed {} word {} budget {}",
                    e.seed,
                    show(&e.game, &w),
                    cert.call_bound
                ));
            }
        }
    }
    let first = |v: &Vec<String>| {
        v.first()
            .cloned()
            .map(|s| format!(", first: {}", s))
            .unwrap_or_default()
    };
    [
        line(
            disagreements.is_empty(),
            format!(
                "oracle equivalence: {} games, {} pairs, {} with a sound oracle verdict, {} disagreements{}",
                corpus.len(),
                pairs,
                sound,
                disagreements.len(),
                first(&disagreements)
            ),
        ),
        line(
            aut_mismatch.is_empty() && aut_failures == 0,
            format!(
                "automaton agreement: {} pairs, {} mismatches, {} automata over the {} state limit, largest {} states{}",
                pairs,
                aut_mismatch.len(),
                aut_failures,
                STATE_LIMIT,
                aut_states,
                first(&aut_mismatch)
            ),
        ),
        line(
            cert_failures.is_empty(),
            format!(
                "certificate soundness: {} safe words ({} needing a call), {} exhaustive replays, {} failures{}",
                safe,
                with_calls,
                plays,
                cert_failures.len(),
                first(&cert_failures)
            ),
        ),
        line(
            inclusion_failures.is_empty(),
            format!(
                "inclusion (a): {} safe words won by the any-order oracle at the certificate's call bound, {} violations{}",
                safe - inclusion_failures.len(),
                inclusion_failures.len(),
                first(&inclusion_failures)
            ),
        ),
    ]
}

fn random_word(rng: &mut ChaCha8Rng, game: &Game, max_len: usize) -> Word {
    let syms: Vec<Symbol> = game.alphabet().symbols().collect();
    let len = (rng.next_u64() % (max_len as u64 + 1)) as usize;
    (0..len)
        .map(|_| syms[(rng.next_u64() % syms.len() as u64) as usize])
        .collect()
}

fn composition_law() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    let triples = 1000;
    for i in 0..triples {
        let params = GenParams {
            n_symbols: 2 + (rng.next_u64() % 3) as usize,
            n_functions: 1,
            rule_words: 1 + (rng.next_u64() % 3) as usize,
            max_rule_len: 2,
            regular: i % 4 == 0,
            target_depth: 1 + (rng.next_u64() % 3) as usize,
        };
        let game = random_game(rng.next_u64(), &params).unwrap();
        let table = compute_effect_table(&game);
        let u = random_word(&mut rng, &game, 4);
        let v = random_word(&mut rng, &game, 4);
        let uv: Word = u.iter().chain(&v).copied().collect();
        let lhs = table.string_effect(&uv).unwrap();
        let rhs = compose_effects(
            &table.string_effect(&u).unwrap(),
            &table.string_effect(&v).unwrap(),
        )
        .unwrap();
        if lhs != rhs {
            violations += 1;
        }
    }
    line(
        violations == 0,
        format!(
            "composition law: {} random (game, u, v) triples, {} violations",
            triples, violations
        ),
    )
}

fn multipass_criterion(corpus: &[Entry]) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = 100;
    let mut k0_mismatch = 0;
    let mut non_monotone = 0;
    let mut wins = [0; 3];
    for _ in 0..samples {
        let e = &corpus[(rng.next_u64() % corpus.len() as u64) as usize];
        let w = random_word(&mut rng, &e.game, MAX_WORD_LEN);
        let lr = solve_lr_bounded(&e.game, &w, ORACLE_BUDGET, ROMEO_LEN)
            .unwrap()
            .outcome;
        let by_k: Vec<Outcome> = (0..3)
            .map(|k| {
                solve_multipass_bounded(&e.game, &w, k, ORACLE_BUDGET, ROMEO_LEN)
                    .unwrap()
                    .outcome
            })
            .collect();
        if by_k[0] != lr {
            k0_mismatch += 1;
        }
        for k in 0..3 {
            if by_k[k] == Outcome::Win {
                wins[k] += 1;
            }
        }
        for k in 0..2 {
            let win_drops = by_k[k] == Outcome::Win && by_k[k + 1] != Outcome::Win;
            let lose_rises = by_k[k + 1] == Outcome::Lose && by_k[k] != Outcome::Lose;
            if win_drops || lose_rises {
                non_monotone += 1;
            }
        }
    }
    line(
        k0_mismatch == 0 && non_monotone == 0,
        format!(
            "inclusion (b): {} sampled pairs, {} k=0 mismatches with the L2R oracle, {} monotonicity violations, wins at k=0,1,2: {:?}",
            samples, k0_mismatch, non_monotone, wins
        ),
    )
}

fn enlargement_criterion(corpus: &[Entry]) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut flips = Vec::new();
    let mut pairs = 0;
    let mut checked = 0;
    for e in corpus.iter().take(100) {
        let g = &e.game;
        let f = g.functions()[(rng.next_u64() % g.functions().len() as u64) as usize];
        let mut words = g.rule(f).unwrap().finite_words().unwrap().to_vec();
        let extra = loop {
            let w = random_word(&mut rng, g, 2);
            if !words.contains(&w) {
                break w;
            }
        };
        words.push(extra);
        let bigger = g.with_finite_rule(f, words).unwrap();
        let bigger_table = compute_effect_table(&bigger);
        pairs += 1;
        for w in words_up_to(g, MAX_WORD_LEN) {
            checked += 1;
            if bigger_table.is_safe(&w).unwrap() && !e.table.is_safe(&w).unwrap() {
                flips.push(format!("seed {} word {}", e.seed, show(g, &w)));
            }
        }
    }
    line(
        flips.is_empty(),
        format!(
            "inclusion (c): {} enlarged game pairs, {} words, {} false-to-true flips{}",
            pairs,
            checked,
            flips.len(),
            flips
                .first()
                .map(|s| format!(", first: {}", s))
                .unwrap_or_default()
        ),
    )
}

const G1: &str = "alphabet: a b f\nfunctions: f\ntarget: regex a | b\nrule f: finite a , b\n";
const G2: &str = "alphabet: a f\nfunctions: f\ntarget: regex a a\nrule f: regex a *\n";
const G3: &str = "alphabet: a f\nfunctions: f\ntarget: regex a\nrule f: finite f , a\n";
const G4: &str = "alphabet: a f\nfunctions: f\ntarget: regex a *\nrule f: regex a *\n";

fn canonical_values() -> Line {
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0;
    let mut check = |ok: bool, what: &str| {
        checks += 1;
        if !ok {
            failures.push(what.to_string());
        }
    };
    let games: Vec<Game> = [G1, G2, G3, G4]
        .iter()
        .map(|t| parse_game(t).unwrap())
        .collect();
    let sym = |g: &Game, n: &str| g.alphabet().lookup(n).unwrap();
    let word = |g: &Game, t: &str| g.parse_word(t).unwrap();
    let named = |t: &EffectTable, a: &cfgame_core::Antichain| a.named(t.sink()).to_string();

    let g1 = &games[0];
    let t1 = compute_effect_table(g1);
    let a1 = cfgame_core::effects::read_effect(g1, sym(g1, "a")).unwrap();
    check(
        named(&t1, a1.at(0)) == "{q1}"
            && named(&t1, a1.at(1)) == "{qs}"
            && named(&t1, a1.at(2)) == "{qs}",
        "G1 read effect of a",
    );
    let f1 = t1.effect(sym(g1, "f"));
    check(named(&t1, f1.at(0)) == "{q1},{qs}", "G1 eff(f)(q0)");
    check(named(&t1, f1.at(1)) == "{qs}", "G1 eff(f)(q1)");
    check(
        named(&t1, &call_guarantees(g1, &t1, sym(g1, "f"), 0).unwrap()) == "{q1}",
        "G1 call guarantees of f at q0",
    );
    let ab = compose_effects(
        &a1,
        &cfgame_core::effects::read_effect(g1, sym(g1, "b")).unwrap(),
    )
    .unwrap();
    check(named(&t1, ab.at(0)) == "{qs}", "G1 compose(a, b)(q0)");
    check(
        t1.string_effect(&[]).unwrap() == cfgame_core::Effect::identity(3),
        "G1 effect of the empty word",
    );
    check(
        &t1.string_effect(&word(g1, "f")).unwrap() == f1,
        "G1 effect of f",
    );
    check(
        named(&t1, t1.string_effect(&word(g1, "f f")).unwrap().at(0)) == "{qs}",
        "G1 effect of f f at q0",
    );
    check(decide_lr(g1, &word(g1, "f")).unwrap(), "G1 f is safe");
    check(
        !decide_lr(g1, &word(g1, "f f")).unwrap(),
        "G1 f f is unsafe",
    );
    check(decide_lr(g1, &word(g1, "a")).unwrap(), "G1 a is safe");
    let aut1 = build_safelr_automaton(g1, STATE_LIMIT).unwrap();
    let label = |w: &str| named(&t1, &aut1.states()[aut1.run(&word(g1, w)).unwrap()]);
    check(label("%e") == "{q0}", "G1 automaton initial state");
    check(
        label("f") == "{q1},{qs}" && aut1.accepts(&word(g1, "f")).unwrap(),
        "G1 automaton on f",
    );
    check(
        label("f f") == "{qs}" && !aut1.accepts(&word(g1, "f f")).unwrap(),
        "G1 automaton on f f",
    );
    check(
        label("a") == "{q1}" && aut1.accepts(&word(g1, "a")).unwrap(),
        "G1 automaton on a",
    );
    check(
        !aut1.accepts(&[]).unwrap(),
        "G1 automaton rejects the empty word",
    );
    check(aut1.num_states() <= 6, "G1 automaton has at most 6 states");
    check(
        aut1.export_dot()
            .contains("[label=\"{q1},{qs}\", shape=doublecircle]"),
        "G1 DOT labels",
    );
    // the bounded oracle recomputes the verdicts independently
    check(
        solve_lr_bounded(g1, &word(g1, "f"), 4, ROMEO_LEN)
            .unwrap()
            .outcome
            == Outcome::Win,
        "G1 oracle on f",
    );
    check(
        solve_lr_bounded(g1, &word(g1, "f f"), 6, ROMEO_LEN)
            .unwrap()
            .outcome
            == Outcome::Lose,
        "G1 oracle on f f",
    );
    check(
        solve_any_order_bounded(g1, &word(g1, "a"), 0, ROMEO_LEN)
            .unwrap()
            .outcome
            == Outcome::Win,
        "G1 any-order oracle on a",
    );
    check(
        solve_multipass_bounded(g1, &word(g1, "f"), 3, 6, ROMEO_LEN)
            .unwrap()
            .outcome
            == Outcome::Win,
        "G1 multipass oracle on f",
    );

    let g2 = &games[1];
    let t2 = compute_effect_table(g2);
    check(
        named(&t2, &call_guarantees(g2, &t2, sym(g2, "f"), 0).unwrap()) == "{q0,q1,q2,qs}"
            && t2.sink() == Some(3),
        "G2 call guarantees of f at q0",
    );
    check(!decide_lr(g2, &word(g2, "f")).unwrap(), "G2 f is unsafe");
    check(
        solve_lr_bounded(g2, &word(g2, "f"), 4, ROMEO_LEN)
            .unwrap()
            .outcome
            == Outcome::Lose,
        "G2 oracle on f",
    );

    let g3 = &games[2];
    let t3 = compute_effect_table(g3);
    check(
        named(&t3, t3.effect(sym(g3, "f")).at(0)) == "{qs}",
        "G3 eff(f)(q0)",
    );
    check(!decide_lr(g3, &word(g3, "f")).unwrap(), "G3 f is unsafe");
    check(
        solve_lr_bounded(g3, &word(g3, "f"), 8, ROMEO_LEN)
            .unwrap()
            .outcome
            == Outcome::Unknown,
        "G3 oracle on f",
    );

    let g4 = &games[3];
    let t4 = compute_effect_table(g4);
    let c4 = call_guarantees(g4, &t4, sym(g4, "f"), t4.initial_state()).unwrap();
    check(
        named(&t4, &c4) == "{q0}" && c4.guarantees(t4.finals()),
        "G4 call guarantees of f",
    );
    check(decide_lr(g4, &word(g4, "f f")).unwrap(), "G4 f f is safe");
    let aut4 = build_safelr_automaton(g4, STATE_LIMIT).unwrap();
    check(
        aut4.accepts(&word(g4, "f")).unwrap(),
        "G4 automaton accepts f",
    );
    // with regular rules the oracle cannot confirm a win, but must not refute it
    check(
        solve_lr_bounded(g4, &word(g4, "f f"), 4, ROMEO_LEN)
            .unwrap()
            .outcome
            != Outcome::Lose,
        "G4 oracle on f f",
    );

    // command-line verdicts and exit codes
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    };
    let p1 = path("g1.game", G1);
    let p3 = path("g3.game", G3);
    let cli = |args: &[&str]| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["cfgame"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut std::io::empty(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    };
    check(
        cli(&["decide", &p1, "--word", "f"]) == (0, "SAFE\n".to_string()),
        "decide G1 f",
    );
    check(
        cli(&["decide", &p1, "--word", "f f"]) == (1, "UNSAFE\n".to_string()),
        "decide G1 f f",
    );
    check(
        cli(&[
            "decide",
            &p3,
            "--word",
            "f",
            "--mode",
            "lr-oracle",
            "--budget",
            "4",
        ]) == (3, "UNKNOWN\n".to_string()),
        "decide G3 f with the L2R oracle",
    );

    line(
        failures.is_empty(),
        format!(
            "canonical values: {} checks on G1-G4, {} failed{}",
            checks,
            failures.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!(": {}", failures.join("; "))
            }
        ),
    )
}

fn determinism(corpus: &[Entry]) -> Line {
    let mut differences = Vec::new();
    for seed in 0..50u64 {
        let args = [
            "cfgame",
            "gen",
            "--seed",
            &seed.to_string(),
            "--symbols",
            "4",
            "--functions",
            "2",
        ];
        let gen = || {
            let mut out = Vec::new();
            run(args, &mut std::io::empty(), &mut out, &mut Vec::new());
            out
        };
        if gen() != gen() {
            differences.push(format!("gen seed {}", seed));
        }
        let params = GenParams {
            regular: seed % 2 == 0,
            ..GenParams::default()
        };
        let a = render_game(&random_game(seed, &params).unwrap()).unwrap();
        let b = render_game(&random_game(seed, &params).unwrap()).unwrap();
        if a != b {
            differences.push(format!("random_game seed {}", seed));
        }
    }
    for e in corpus {
        let t = compute_effect_table(&e.game);
        if t != e.table || t.iteration_count() != e.table.iteration_count() {
            differences.push(format!("effect table seed {}", e.seed));
        }
        let a = build_safelr_automaton(&e.game, STATE_LIMIT).unwrap();
        let b = build_safelr_automaton(&e.game, STATE_LIMIT).unwrap();
        if a != b || a.export_dot() != b.export_dot() {
            differences.push(format!("automaton seed {}", e.seed));
        }
    }
    line(
        differences.is_empty(),
        format!(
            "determinism: 50 gen outputs, {} effect tables and automata rebuilt, {} differences{}",
            corpus.len(),
            differences.len(),
            differences
                .first()
                .map(|s| format!(", first: {}", s))
                .unwrap_or_default()
        ),
    )
}

fn fixpoint_sanity(corpus: &[Entry]) -> Line {
    let mut over_bound = 0;
    let mut not_refining = 0;
    let mut max_iterations = 0;
    for e in corpus {
        let sigma = e.game.alphabet().len();
        let q = e.table.num_states();
        let bound = sigma * q * (1usize << q);
        max_iterations = max_iterations.max(e.table.iteration_count());
        if e.table.iteration_count() > bound {
            over_bound += 1;
        }
        if !e.table.levels_refine() {
            not_refining += 1;
        }
    }
    line(
        over_bound == 0 && not_refining == 0,
        format!(
            "fixpoint sanity: {} games, {} over the |Σ|·|Q|·2^|Q| bound, {} non-refining rounds, at most {} iterations",
            corpus.len(),
            over_bound,
            not_refining,
            max_iterations
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = corpus();
    let [c1, c2, c4, c5a] = corpus_criteria(&corpus);
    let c5b = multipass_criterion(&corpus);
    let c5c = enlargement_criterion(&corpus);
    let c5 = line(
        c5a.ok && c5b.ok && c5c.ok,
        format!("{}; {}; {}", c5a.text, c5b.text, c5c.text),
    );
    let results = [
        (1, c1),
        (2, c2),
        (3, composition_law()),
        (4, c4),
        (5, c5),
        (6, canonical_values()),
        (7, determinism(&corpus)),
        (8, fixpoint_sanity(&corpus)),
    ];
    let mut all = true;
    for (n, l) in &results {
        println!(
            "{} criterion {}: {}",
            if l.ok { "PASS" } else { "FAIL" },
            n,
            l.text
        );
        all &= l.ok;
    }
    println!(
        "acceptance finished in {:.1}s",
        start.elapsed().as_secs_f64()
    );
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
