//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use chrono::{DateTime, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use consent_audit::clarity::{scan_vague_terms, VagueLexicon};
use consent_audit::corpus::{Corpus, CorpusConfig, CorpusManifest, MediaKind, SnapshotEntry};
use consent_audit::interface::{
    aggregate_interface, validate_against_document, validate_assessment, AssessmentStore,
    EvidenceRecord, InterfaceAssessment, InterfaceMetric,
};
use consent_audit::num::percent;
use consent_audit::pipeline::{PipelineOutput, ASSESSMENTS_DIR};
use consent_audit::readability::{
    classify_band, compute_readability_profile, default_reader_groups, estimate_reading_time, Band,
    FluencyEstimate, Metric, ReadabilityProfile,
};
use consent_audit::specificity::{
    apply_review, detect_document, export_review, map_scores, read_review, write_review,
    ExportOptions, SpecificityCounts, SpecificityLexicons, Stage,
};
use consent_audit::textprep::{DocStats, Document, SyllableCounter};

type Check = Result<String, String>;
/// Number, name, time budget and check.
type Criterion = (u8, &'static str, Duration, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn lexicon_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/lexicons")
}

// ---------------------------------------------------------------------------
// 1. Rubric reproduction

/// Post-review raw counts (DT, EN, RE explicit, SG, SS) and the published
/// sub-scores and composite.
const SPECIFICITY_ROWS: [(&str, [usize; 5], [u8; 4], f64); 13] = [
    ("Bluesky", [10, 4, 0, 0, 2], [2, 2, 0, 1], 1.25),
    ("Instagram", [11, 4, 0, 2, 3], [2, 2, 0, 2], 1.5),
    ("LinkedIn", [14, 5, 0, 0, 1], [2, 2, 0, 1], 1.25),
    ("Mastodon", [6, 2, 0, 0, 1], [2, 1, 0, 1], 1.0),
    ("Meta", [15, 5, 0, 3, 4], [2, 2, 0, 2], 1.5),
    ("Pinterest", [13, 3, 0, 1, 1], [2, 2, 0, 1], 1.25),
    ("Reddit", [13, 3, 0, 0, 0], [2, 2, 0, 0], 1.0),
    ("Spotify", [8, 4, 0, 0, 2], [2, 2, 0, 1], 1.25),
    ("TikTok", [15, 11, 0, 0, 1], [2, 2, 0, 1], 1.25),
    ("Tumblr", [13, 6, 0, 0, 1], [2, 2, 0, 1], 1.25),
    ("WhatsApp", [13, 5, 2, 1, 4], [2, 2, 2, 2], 2.0),
    ("X", [16, 1, 0, 1, 0], [2, 1, 0, 1], 1.0),
    ("YouTube", [9, 5, 0, 0, 0], [2, 2, 0, 0], 1.0),
];

fn criterion_1() -> Check {
    let mut matched = 0;
    for (platform, c, subs, composite) in SPECIFICITY_ROWS {
        let counts = SpecificityCounts {
            dt: c[0],
            en: c[1],
            re_explicit: c[2],
            re_vague: 0,
            sg: c[3],
            ss: c[4],
        };
        let s = map_scores(&counts, Stage::PostReview);
        let got = [s.dt_s, s.en_s, s.r_s, s.s_s];
        ensure!(
            got == subs,
            "{platform}: sub-scores {got:?}, published {subs:?}"
        );
        ensure!(
            s.composite == composite,
            "{platform}: composite {} vs {composite}",
            s.composite
        );
        matched += 1;
    }
    Ok(format!(
        "{matched}/13 rows reproduce sub-scores and composite exactly"
    ))
}

// ---------------------------------------------------------------------------
// 2. Density arithmetic

const CLARITY_ROWS: [(&str, usize, usize, &str); 13] = [
    ("BlueSky", 3779, 121, "3.20"),
    ("Instagram", 3296, 138, "4.19"),
    ("LinkedIn", 5073, 364, "7.18"),
    ("Mastodon", 2088, 103, "4.93"),
    ("Meta", 5443, 231, "4.24"),
    ("Pinterest", 4819, 138, "2.86"),
    ("Reddit", 7503, 396, "5.28"),
    ("Spotify", 6110, 218, "3.57"),
    ("TikTok", 7497, 299, "3.99"),
    ("Tumblr", 5934, 257, "4.33"),
    ("WhatsApp", 5320, 271, "5.09"),
    ("X", 4348, 246, "5.66"),
    ("YouTube", 3923, 134, "3.42"),
];

fn criterion_2() -> Check {
    for (platform, words, count, published) in CLARITY_ROWS {
        let density: f64 = percent(count, words);
        let expected: f64 = published.parse().unwrap();
        ensure!(
            (density - expected).abs() <= 0.01 + 1e-9,
            "{platform}: {density:.4} vs published {published}"
        );
        ensure!(
            format!("{density:.2}") == published,
            "{platform}: renders {density:.2}, published {published}"
        );
    }
    Ok("13/13 densities within 0.01 and render identically at 2 decimals".into())
}

// ---------------------------------------------------------------------------
// 3. Reading time

fn criterion_3() -> Check {
    let groups = default_reader_groups();
    let group = |name: &str| {
        groups
            .iter()
            .find(|g| g.name == name)
            .cloned()
            .ok_or(format!("no group {name}"))
    };
    let adult_oral = group("adult_oral")?;
    let child = group("child_oral")?;

    let reddit: FluencyEstimate<f64> = estimate_reading_time(7395, &adult_oral);
    ensure!(
        (reddit.minutes_low - 40.41).abs() <= 0.1,
        "Reddit {:.3} min",
        reddit.minutes_low
    );
    let tiktok: FluencyEstimate<f64> = estimate_reading_time(7398, &adult_oral);
    ensure!(
        reddit.minutes_low > 40.0 && tiktok.minutes_low > 40.0,
        "Reddit/TikTok not above 40 minutes"
    );

    let mastodon: FluencyEstimate<f64> = estimate_reading_time(2055, &child);
    ensure!(
        (mastodon.minutes_low - 16.05).abs() <= 0.1,
        "low bound {:.3}",
        mastodon.minutes_low
    );
    ensure!(
        (mastodon.minutes_high - 17.13).abs() <= 0.1,
        "high bound {:.3}",
        mastodon.minutes_high
    );
    ensure!(
        mastodon.minutes_low >= 15.0 && mastodon.minutes_high <= 20.0,
        "shortest document outside 15-20 minutes"
    );
    Ok(format!(
        "Reddit {:.2} min, TikTok {:.2} min at 183 WPM; Mastodon {:.2}-{:.2} min at 128-120 WPM",
        reddit.minutes_low, tiktok.minutes_low, mastodon.minutes_low, mastodon.minutes_high
    ))
}

// ---------------------------------------------------------------------------
// 4. Readability oracle fixtures

struct Oracle {
    text: &'static str,
    /// words, sentences, syllables, letters, alphanumerics, words of 3+ syllables
    counts: [usize; 6],
    /// Flesch-RE, Fog, F-K, CLI, SMOG, Lensear, ARI evaluated by hand.
    expected: [f64; 7],
}

// Hand counts per text:
//   cat:    The(1) cat(1) sat(1) on(1) the(1) mat(1)
//   apples: I(1) like(1) green(1) apples(2) | They(1) taste(1) fresh(1)
//   tech:   Information(4) technology(4) is(1) important(3) | Computers(3) help(1) people(2) daily(2)
//   logs:   We(1) keep(1) 30(0) logs(1) for(1) 2(0) years(1); digits count as characters, not letters
//   safe:   Is it safe | Yes | Read the terms now, all one syllable
//   third:  Third-party(1+2) vendors(2) may(1) process(2) personal(3) information(4)
const ORACLES: [Oracle; 6] = [
    Oracle {
        text: "The cat sat on the mat.",
        counts: [6, 1, 6, 17, 17, 0],
        expected: [116.145, 2.4, -1.45, -4.0733333333, 3.1291, 6.0, -5.085],
    },
    Oracle {
        text: "I like green apples. They taste fresh.",
        counts: [7, 2, 8, 30, 30, 0],
        expected: [
            106.5967857143,
            1.4,
            -0.7392857143,
            0.9428571429,
            3.1291,
            3.5,
            0.5057142857,
        ],
    },
    Oracle {
        text: "Information technology is important. Computers help people daily.",
        counts: [8, 2, 20, 56, 56, 4],
        expected: [-8.725, 21.6, 15.47, 17.96, 11.2081432602, 8.0, 13.54],
    },
    Oracle {
        text: "We keep 30 logs for 2 years.",
        counts: [7, 1, 5, 18, 21, 0],
        expected: [
            139.3014285714,
            2.8,
            -4.4314285714,
            -4.9085714286,
            3.1291,
            7.0,
            -3.8,
        ],
    },
    Oracle {
        text: "Is it safe? Yes! Read the terms now.",
        counts: [8, 3, 8, 26, 26, 0],
        expected: [
            119.5283333333,
            1.0666666667,
            -2.75,
            -7.79,
            3.1291,
            2.6666666667,
            -4.7891666667,
        ],
    },
    Oracle {
        text: "Third-party vendors may process personal information.",
        counts: [6, 1, 15, 46, 46, 3],
        expected: [
            -10.755,
            22.4,
            16.25,
            24.3466666667,
            13.0238667987,
            12.0,
            17.68,
        ],
    },
];

fn criterion_4() -> Check {
    let syl = SyllableCounter::new();
    for o in &ORACLES {
        let s = Document::from_text("Oracle", o.text, &syl).stats;
        let got = [
            s.word_count,
            s.sentence_count,
            s.syllable_count,
            s.letter_count,
            s.character_count,
            s.hard_word_count,
        ];
        ensure!(
            got == o.counts,
            "{:?}: counts {got:?}, hand counts {:?}",
            o.text,
            o.counts
        );
        let p: ReadabilityProfile<f64> =
            compute_readability_profile(&s).map_err(|e| e.to_string())?;
        for (m, want) in Metric::ALL.iter().zip(o.expected) {
            let v = p.get(*m);
            ensure!(
                (v - want).abs() < 1e-6,
                "{:?}: {m} = {v}, hand value {want}",
                o.text
            );
        }
    }
    Ok(format!(
        "{} micro-texts x 7 formulas within 1e-6 of hand evaluation",
        ORACLES.len()
    ))
}

// ---------------------------------------------------------------------------
// 5. Monotonicity and band shading

const ONE: [&str; 8] = ["cat", "dog", "sun", "map", "red", "box", "pen", "cup"];
const TWO: [&str; 5] = ["apple", "paper", "window", "basket", "pencil"];
const THREE: [&str; 4] = ["computer", "banana", "important", "tomato"];

fn stats_of(words: &[Vec<&str>]) -> DocStats {
    let text: Vec<String> = words.iter().map(|s| format!("{}.", s.join(" "))).collect();
    Document::from_text("T", text.join(" "), &SyllableCounter::new()).stats
}

fn profile(s: &DocStats) -> ReadabilityProfile<f64> {
    compute_readability_profile(s).expect("non-degenerate")
}

fn criterion_5a() -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let groups = default_reader_groups();
    for trial in 0..100 {
        let n_sent = rng.gen_range(1..=8);
        let mut sents: Vec<Vec<&str>> = (0..n_sent)
            .map(|_| {
                let len = rng.gen_range(3..=12);
                (0..len)
                    .map(|_| {
                        let bank: &[&str] = match rng.gen_range(0..10) {
                            0..=5 => &ONE,
                            6..=8 => &TWO,
                            _ => &THREE,
                        };
                        *bank.choose(&mut rng).unwrap()
                    })
                    .collect()
            })
            .collect();
        // Guarantee one 1-syllable and one 2-syllable word to swap.
        sents[0][0] = ONE[0];
        sents[0][1] = TWO[0];
        let base = stats_of(&sents);
        let p0 = profile(&base);

        let mut more_syllables = sents.clone();
        more_syllables[0][0] = TWO[1];
        let s1 = stats_of(&more_syllables);
        ensure!(
            s1.word_count == base.word_count && s1.syllable_count == base.syllable_count + 1,
            "trial {trial}: swap"
        );
        let p1 = profile(&s1);
        ensure!(
            p1.flesch_reading_ease < p0.flesch_reading_ease,
            "trial {trial}: FRE not decreasing"
        );
        ensure!(
            p1.flesch_kincaid_grade > p0.flesch_kincaid_grade,
            "trial {trial}: F-K not increasing"
        );

        let mut more_complex = sents.clone();
        more_complex[0][1] = THREE[0];
        let s2 = stats_of(&more_complex);
        ensure!(
            s2.complex_word_count == base.complex_word_count + 1,
            "trial {trial}: complex swap"
        );
        let p2 = profile(&s2);
        ensure!(
            p2.gunning_fog > p0.gunning_fog,
            "trial {trial}: Fog not increasing"
        );
        ensure!(p2.smog > p0.smog, "trial {trial}: SMOG not increasing");

        let again = profile(&base);
        for m in Metric::ALL {
            ensure!(
                again.get(m).to_bits() == p0.get(m).to_bits(),
                "trial {trial}: {m} not bitwise stable"
            );
        }

        let g = &groups[trial % groups.len()];
        let single: FluencyEstimate<f64> = estimate_reading_time(base.word_count, g);
        let double: FluencyEstimate<f64> = estimate_reading_time(2 * base.word_count, g);
        ensure!(
            (double.minutes_high - 2.0 * single.minutes_high).abs() < 1e-9,
            "trial {trial}: not linear"
        );
        ensure!(
            single.minutes_low <= single.minutes_high,
            "trial {trial}: minutes bounds"
        );

        let mut scores: Vec<f64> = (0..20).map(|_| rng.gen_range(-20.0..120.0)).collect();
        scores.sort_by(f64::total_cmp);
        for m in Metric::ALL {
            let bands: Vec<Band> = scores.iter().map(|&v| classify_band(m, v).band).collect();
            let ok = if m.higher_is_easier() {
                bands.windows(2).all(|w| w[1] <= w[0])
            } else {
                bands.windows(2).all(|w| w[1] >= w[0])
            };
            ensure!(ok, "trial {trial}: {m} banding not monotone");
        }
    }
    Ok(100)
}

/// Published scores (Flesch-RE, Fog, F-K, CLI, SMOG, Lensear, ARI) and the
/// shading of each cell: E easy, M moderate, H hard.
const READABILITY_ROWS: [(&str, [f64; 7], &str); 13] = [
    (
        "BlueSky",
        [40.2, 16.2, 13.4, 12.4, 14.9, 11.3, 14.9],
        "MHHMHMH",
    ),
    (
        "Instagram",
        [43.4, 15.2, 12.5, 11.3, 14.2, 10.2, 13.2],
        "MHMMHMH",
    ),
    (
        "LinkedIn",
        [36.4, 17.4, 14.6, 11.8, 15.6, 13.8, 15.8],
        "MHHMHHH",
    ),
    (
        "Mastodon",
        [46.5, 13.4, 11.8, 10.9, 13.7, 10.7, 12.2],
        "MHMMHMM",
    ),
    (
        "Meta",
        [37.7, 17.3, 14.9, 11.6, 15.3, 13.8, 16.2],
        "MHHMHHH",
    ),
    (
        "Pinterest",
        [43.9, 15.1, 12.9, 11.1, 13.9, 11.8, 13.7],
        "MHMMHMH",
    ),
    (
        "Reddit",
        [31.8, 19.2, 16.0, 11.9, 16.9, 10.3, 17.3],
        "MHHMHMH",
    ),
    (
        "Spotify",
        [23.6, 22.1, 18.5, 13.0, 18.7, 24.7, 20.6],
        "HHHHHHH",
    ),
    (
        "TikTok",
        [28.9, 20.3, 17.3, 12.0, 17.4, 16.8, 18.9],
        "HHHMHHH",
    ),
    (
        "Tumblr",
        [29.7, 19.3, 16.3, 12.7, 17.0, 6.9, 17.9],
        "HHHMHEH",
    ),
    (
        "WhatsApp",
        [28.1, 19.6, 16.6, 12.5, 17.3, 42.5, 17.8],
        "HHHMHHH",
    ),
    ("X", [29.0, 19.7, 16.6, 12.5, 17.3, 22.3, 18.3], "HHHMHHH"),
    (
        "YouTube",
        [36.3, 17.9, 15.4, 12.0, 15.6, 5.3, 17.2],
        "MHHMHEH",
    ),
];

fn criterion_5b() -> Result<usize, String> {
    let mut cells = 0;
    for (platform, scores, shading) in READABILITY_ROWS {
        for ((m, v), code) in Metric::ALL.iter().zip(scores).zip(shading.chars()) {
            let want = match code {
                'E' => Band::Easy,
                'M' => Band::Moderate,
                _ => Band::Hard,
            };
            let got = classify_band(*m, v).band;
            ensure!(got == want, "{platform} {m} {v}: {got} vs shaded {want}");
            cells += 1;
        }
    }
    Ok(cells)
}

fn criterion_5() -> Check {
    let texts = criterion_5a()?;
    let cells = criterion_5b()?;
    ensure!(cells == 91, "only {cells} cells checked");
    Ok(format!(
        "monotonicity holds on {texts} randomized texts; {cells}/91 cells banded as shaded"
    ))
}

// ---------------------------------------------------------------------------
// 6. Clarity scanner

const FILLER: [&str; 16] = [
    "user", "account", "page", "button", "screen", "photo", "music", "video", "profile", "feed",
    "post", "reply", "message", "friend", "song", "link",
];
const PLANTS: [&str; 16] = [
    "may",
    "might",
    "some",
    "certain",
    "generally",
    "typically",
    "sometimes",
    "reasonable",
    "appropriate",
    "necessary",
    "many",
    "various",
    "third parties",
    "others",
    "affiliates",
    "personal data",
];

/// `n` filler words with `k` planted terms, never two plants side by side.
fn planted_text(rng: &mut ChaCha8Rng, n: usize, k: usize) -> String {
    let mut slots: Vec<usize> = (0..n).collect();
    slots.shuffle(rng);
    let mut chosen: Vec<usize> = Vec::new();
    for s in slots {
        if chosen.len() == k {
            break;
        }
        if chosen.iter().all(|&c| c.abs_diff(s) > 1) {
            chosen.push(s);
        }
    }
    assert_eq!(chosen.len(), k, "not enough room to plant");
    let words: Vec<&str> = (0..n)
        .map(|i| {
            if chosen.contains(&i) {
                *PLANTS.choose(rng).unwrap()
            } else {
                *FILLER.choose(rng).unwrap()
            }
        })
        .collect();
    format!("{}.", words.join(" "))
}

fn vague_count(text: &str, lex: &VagueLexicon) -> usize {
    scan_vague_terms(
        &Document::from_text("T", text, &SyllableCounter::new()),
        lex,
    )
    .vague_count
}

fn criterion_6() -> Check {
    let lex = VagueLexicon::shipped_default();
    let nesting = Document::from_text(
        "T",
        "We may share certain information with third parties.",
        &SyllableCounter::new(),
    );
    let report = scan_vague_terms(&nesting, &lex);
    let found: Vec<&str> = report
        .matches
        .iter()
        .map(|m| m.canonical.as_str())
        .collect();
    ensure!(report.vague_count == 3, "nesting fixture gave {found:?}");
    ensure!(
        found == ["may", "certain information", "third parties"],
        "nesting fixture gave {found:?}"
    );
    ensure!(
        (report.density_pct - 37.5).abs() < 1e-9,
        "nesting density {}",
        report.density_pct
    );

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let fixed = planted_text(&mut rng, 120, 9);
    ensure!(
        vague_count(&fixed, &lex) == 9,
        "fixed fixture: {} != 9",
        vague_count(&fixed, &lex)
    );

    for trial in 0..100 {
        let n = rng.gen_range(20..200);
        let k = rng.gen_range(0..=n / 8);
        let text = planted_text(&mut rng, n, k);
        let before = vague_count(&text, &lex);
        ensure!(before == k, "trial {trial}: counted {before}, planted {k}");
        let extra = format!(
            "{text} {} {}.",
            PLANTS.choose(&mut rng).unwrap(),
            FILLER.choose(&mut rng).unwrap()
        );
        let after = vague_count(&extra, &lex);
        ensure!(
            after == before + 1,
            "trial {trial}: one more plant gave {before} -> {after}"
        );
    }
    Ok("nesting fixture yields 3 matches, density 37.5% of 8 words; K planted = K counted and +1 per extra plant over 100 trials".into())
}

// ---------------------------------------------------------------------------
// 7. Review round-trip

const BLUESKY_TEXT: &str = "\
We collect your email address, phone number, IP address and device ID. \
We also collect location, browsing history, payment information and contact list entries. \
Some features need biometric data or an advertising identifier. \
Our partners include Google, Apple, Stripe and Microsoft. \
We share reports with law enforcement. \
We use signals for fraud detection. \
We share your replies with other users. \
We process flags for content moderation. \
We analyze activity for spam.";

const REDDIT_TEXT: &str = "\
We collect your email address, phone number, IP address and device ID. \
We also collect location, browsing history, payment information and contact list entries. \
Some features need biometric data or an advertising identifier. \
Your username, operating system and search history are recorded too. \
Our partners include Google, Apple and Stripe. \
We share your replies with other users. \
We analyze activity for spam.";

/// Exports sharing findings, rejects `reject` specific ones on disk and
/// re-imports the file.
fn round_trip(
    platform: &str,
    text: &str,
    reject: usize,
) -> Result<consent_audit::specificity::ReviewOutcome, String> {
    let doc = Document::from_text(platform, text, &SyllableCounter::new());
    let findings = detect_document(&doc, &SpecificityLexicons::shipped_default());
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("review.jsonl");
    export_review(&doc, &findings, &path, ExportOptions::default()).map_err(|e| e.to_string())?;
    let (_, mut records) = read_review(&path).map_err(|e| e.to_string())?;
    for r in records
        .iter_mut()
        .filter(|r| r.auto_label == "specific")
        .take(reject)
    {
        r.human_label = Some("rejected".into());
    }
    write_review(&path, &records).map_err(|e| e.to_string())?;
    apply_review(&findings, &path).map_err(|e| e.to_string())
}

fn criterion_7() -> Check {
    let b = round_trip("Bluesky", BLUESKY_TEXT, 3)?;
    let (a, p) = (&b.auto_counts, &b.post_review_counts);
    ensure!(
        (a.dt, a.en, a.re_explicit, a.sg) == (10, 4, 0, 0),
        "Bluesky auto counts {a:?}"
    );
    ensure!((a.ss, p.ss) == (5, 2), "Bluesky SS {}->{}", a.ss, p.ss);
    let post = &b.post_review;
    ensure!(
        [post.dt_s, post.en_s, post.r_s, post.s_s] == [2, 2, 0, 1] && post.composite == 1.25,
        "Bluesky post-review {post:?}"
    );

    let r = round_trip("Reddit", REDDIT_TEXT, 2)?;
    let (a, p) = (&r.auto_counts, &r.post_review_counts);
    ensure!((a.dt, a.en) == (13, 3), "Reddit auto counts {a:?}");
    ensure!((a.ss, p.ss) == (2, 0), "Reddit SS {}->{}", a.ss, p.ss);
    ensure!(
        (r.auto.s_s, r.post_review.s_s) == (1, 0),
        "Reddit s_s {}->{}",
        r.auto.s_s,
        r.post_review.s_s
    );
    ensure!(
        r.post_review.composite == 1.0,
        "Reddit composite {}",
        r.post_review.composite
    );
    Ok(format!(
        "Bluesky SS 5->2, post-review s_s 1 and composite 1.25 (auto stage scores {} under the rubric); \
         Reddit SS 2->0, s_s 1->0, composite {}->{}",
        b.auto.composite, r.auto.composite, r.post_review.composite
    ))
}

// ---------------------------------------------------------------------------
// 8. Interface schema

const PLATFORMS: [&str; 13] = [
    "BlueSky",
    "Instagram",
    "LinkedIn",
    "Mastodon",
    "Meta",
    "Pinterest",
    "Reddit",
    "Spotify",
    "TikTok",
    "Tumblr",
    "WhatsApp",
    "X",
    "YouTube",
];

fn assessed_at() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2025, 6, 1, 9, 0, 0).unwrap()
}

fn fixture_payload(platform: &str) -> Vec<u8> {
    fs::read(fixtures().join("corpus").join(format!("{platform}.html"))).expect("fixture document")
}

fn fixture_document(platform: &str) -> Document {
    Document::from_payload(
        platform,
        &fixture_payload(platform),
        MediaKind::Html,
        &[],
        &SyllableCounter::new(),
    )
    .expect("fixture extracts")
}

/// A published-style row (0,0,0,1,1) with verbatim evidence from `doc`.
fn table10_assessment(doc: &Document) -> InterfaceAssessment {
    let cite = |metric, excerpt: &str| {
        let sentence_index = doc
            .sentences
            .iter()
            .position(|s| s.text.contains(excerpt))
            .unwrap_or_else(|| panic!("{}: no sentence with {excerpt:?}", doc.platform));
        EvidenceRecord {
            metric,
            excerpt: excerpt.into(),
            sentence_index,
        }
    };
    InterfaceAssessment {
        platform: doc.platform.clone(),
        unticked_checkbox: 0,
        review_before_consent: 0,
        separate_consent_steps: 0,
        explicit_denial: 1,
        reversibility_cue: 1,
        evidence: vec![
            cite(
                InterfaceMetric::ExplicitDenial,
                "you must stop using the Services",
            ),
            cite(
                InterfaceMetric::ReversibilityCue,
                "delete your account at any time",
            ),
        ],
        assessor: "acceptance".into(),
        assessed_at: assessed_at(),
    }
}

fn criterion_8() -> Check {
    let mut assessments = Vec::new();
    for p in PLATFORMS {
        let doc = fixture_document(p);
        let a = table10_assessment(&doc);
        validate_against_document(&a, &doc).map_err(|e| e.to_string())?;
        assessments.push(a);
    }

    let mut out_of_range = assessments[0].clone();
    out_of_range.separate_consent_steps = 3;
    let err = validate_assessment(&out_of_range)
        .err()
        .ok_or("out-of-range score accepted")?;
    ensure!(
        err.to_string().contains("out of range"),
        "unexpected error {err}"
    );
    let mut no_evidence = assessments[1].clone();
    no_evidence
        .evidence
        .retain(|e| e.metric != InterfaceMetric::ReversibilityCue);
    let err = validate_assessment(&no_evidence)
        .err()
        .ok_or("evidence-free score accepted")?;
    ensure!(
        err.to_string().contains("missing evidence"),
        "unexpected error {err}"
    );

    // Shuffled input must still aggregate to table order.
    let mut shuffled = assessments.clone();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(8));
    let csv = aggregate_interface(&shuffled)
        .map_err(|e| e.to_string())?
        .to_csv()
        .map_err(|e| e.to_string())?;
    let golden = fs::read_to_string(fixtures().join("table10.csv")).map_err(|e| e.to_string())?;
    ensure!(
        csv.as_bytes() == golden.as_bytes(),
        "aggregate differs from golden:\n{csv}"
    );
    Ok(
        "13/13 rows valid with verbatim evidence; bad rows rejected; CSV byte-identical to golden"
            .into(),
    )
}

// ---------------------------------------------------------------------------
// 9. End-to-end determinism

fn build_fixture_corpus(root: &Path) -> Result<(), String> {
    let config = CorpusConfig::shipped_default();
    let mut corpus = Corpus::with_manifest(root, CorpusManifest::new(assessed_at()));
    for (i, p) in PLATFORMS.iter().enumerate() {
        let url = config
            .platforms
            .iter()
            .find(|s| s.platform == *p)
            .map(|s| s.url.clone())
            .ok_or(format!("{p} missing from shipped config"))?;
        let payload = fixture_payload(p);
        let retrieved = Utc.with_ymd_and_hms(2025, 5, 1, 8, i as u32, 0).unwrap();
        let entry = SnapshotEntry::new(*p, url, retrieved, &payload, MediaKind::Html);
        corpus.store(entry, &payload).map_err(|e| e.to_string())?;
    }
    corpus.save().map_err(|e| e.to_string())?;
    let store = AssessmentStore::new(root.join(ASSESSMENTS_DIR));
    for p in PLATFORMS {
        store
            .save(&table10_assessment(&fixture_document(p)), false)
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn analyze(corpus: &Path, out: &Path, workers: &str) -> Result<Duration, String> {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_consent-audit"))
        .arg("analyze")
        .arg("--corpus")
        .arg(corpus)
        .arg("--lexicons")
        .arg(lexicon_dir())
        .arg("--out")
        .arg(out)
        .args(["--workers", workers])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(
        status.status.success(),
        "analyze exited {:?}: {}",
        status.status.code(),
        String::from_utf8_lossy(&status.stderr)
    );
    Ok(start.elapsed())
}

fn criterion_9() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("corpus");
    build_fixture_corpus(&corpus)?;
    let first = dir.path().join("run1.json");
    let second = dir.path().join("run2.json");
    let t1 = analyze(&corpus, &first, "1")?;
    let t2 = analyze(&corpus, &second, "4")?;
    let a = fs::read(&first).map_err(|e| e.to_string())?;
    let b = fs::read(&second).map_err(|e| e.to_string())?;
    ensure!(a == b, "results.json differs between runs");
    let output = PipelineOutput::load(&first).map_err(|e| e.to_string())?;
    ensure!(
        output.results.len() == 13 && output.failures.is_empty(),
        "{} results, {} failures",
        output.results.len(),
        output.failures.len()
    );
    ensure!(
        output.results.iter().all(|r| r.interface.is_some()),
        "assessments not attached"
    );
    let slowest = t1.max(t2);
    ensure!(
        slowest < Duration::from_secs(10),
        "full pipeline took {slowest:?}"
    );
    Ok(format!(
        "two runs (1 and 4 workers) byte-identical, {} bytes, 13 results; slowest run {:.2} s",
        a.len(),
        slowest.as_secs_f64()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            1,
            "rubric reproduction",
            Duration::from_secs(1),
            criterion_1,
        ),
        (2, "density arithmetic", Duration::from_secs(1), criterion_2),
        (
            3,
            "reading-time checks",
            Duration::from_secs(1),
            criterion_3,
        ),
        (
            4,
            "readability oracle fixtures",
            Duration::from_secs(1),
            criterion_4,
        ),
        (
            5,
            "monotonicity and band shading",
            Duration::from_secs(5),
            criterion_5,
        ),
        (6, "clarity scanner", Duration::from_secs(1), criterion_6),
        (7, "review round-trip", Duration::from_secs(1), criterion_7),
        (8, "interface schema", Duration::from_secs(1), criterion_8),
        (
            9,
            "end-to-end determinism",
            Duration::from_secs(10),
            criterion_9,
        ),
    ];
    let mut failed = 0;
    for (n, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > budget => Err(format!("took {elapsed:?}, budget {budget:?}")),
            other => other,
        };
        match result {
            Ok(detail) => println!(
                "PASS criterion {n} ({name}): {detail} [{} ms]",
                elapsed.as_millis()
            ),
            Err(reason) => {
                failed += 1;
                println!(
                    "FAIL criterion {n} ({name}): {reason} [{} ms]",
                    elapsed.as_millis()
                );
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
