//! Property catalogue shared by the `properties` test target and the acceptance runner.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use melodic_core::ingest::smf_writer::{encode_sequence, SequenceEncoding};
use melodic_core::ingest::{extract_sequence, parse_midi, ExtractionConfig};
use melodic_core::originality::{originality_all_notes, originality_simonton, score_corpus, ScoringOptions};
use melodic_core::popularity::{read_cache, write_cache, write_static_csv, PopularityRecord, StaticTable};
use melodic_core::report::{
    box_plot_svg, box_stats, heatmap_svg, read_datasheet, whiskers, write_datasheet, Fit, PieceRecord, ScatterMode,
    ScatterOptions, ScatterPlot,
};
use melodic_core::stats::{
    linear_regression, ols_no_intercept, pairwise_composer_tests, student_t_sf, two_sample_t_test, StatsError,
    TTestKind,
};
use melodic_core::transitions::{count_ngrams, count_transitions, merge_counts, normalize};
use melodic_core::{CountMatrix, Method, PitchClass, PitchClassSequence, StochasticMatrix};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::midi::{encode_polyphonic, midly_pitch_classes};

pub type Check = fn(&mut TestRunner, &AtomicUsize) -> Result<(), String>;

pub struct Property {
    pub name: &'static str,
    pub check: Check,
}

/// Deterministic runner with `cases` cases per property and no failure files.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn run(name: &str, cases: u32) -> usize {
    let p = catalogue().into_iter().find(|p| p.name == name).unwrap_or_else(|| panic!("no property {name}"));
    let counter = AtomicUsize::new(0);
    if let Err(e) = (p.check)(&mut runner(cases), &counter) {
        panic!("{name}: {e}");
    }
    counter.load(Ordering::Relaxed)
}

macro_rules! property {
    ($strategy:expr, |$counter:ident, $pat:pat_param| $body:block) => {
        |runner: &mut TestRunner, $counter: &AtomicUsize| {
            runner
                .run(&$strategy, |$pat| {
                    $counter.fetch_add(1, Ordering::Relaxed);
                    $body
                })
                .map_err(|e| e.to_string())
        }
    };
}

pub fn catalogue() -> Vec<Property> {
    vec![
        Property { name: "pitch_class_period", check: pitch_class_period },
        Property { name: "smf_round_trip", check: smf_round_trip },
        Property { name: "row_sums", check: row_sums },
        Property { name: "bigram_totals", check: bigram_totals },
        Property { name: "ngram_order_two_collapses", check: ngram_order_two_collapses },
        Property { name: "score_bounds", check: score_bounds },
        Property { name: "six_note_methods_agree", check: six_note_methods_agree },
        Property { name: "lower_probability_raises_score", check: lower_probability_raises_score },
        Property { name: "leave_one_out_moves_scores", check: leave_one_out_moves_scores },
        Property { name: "t_test_antisymmetry", check: t_test_antisymmetry },
        Property { name: "t_tail_symmetry", check: t_tail_symmetry },
        Property { name: "r_squared_is_r_times_r", check: r_squared_is_r_times_r },
        Property { name: "ols_residual_orthogonality", check: ols_residual_orthogonality },
        Property { name: "positive_scaling_invariance", check: positive_scaling_invariance },
        Property { name: "pairwise_count", check: pairwise_count },
        Property { name: "datasheet_round_trip", check: datasheet_round_trip },
        Property { name: "cache_round_trip", check: cache_round_trip },
        Property { name: "static_provider_deterministic", check: static_provider_deterministic },
        Property { name: "svg_well_formed", check: svg_well_formed },
        Property { name: "box_summary_order", check: box_summary_order },
    ]
}

fn pcs(min: usize, max: usize) -> impl Strategy<Value = Vec<u8>> {
    vec(0u8..12, min..=max)
}

fn seq(values: &[u8], id: &str) -> PitchClassSequence {
    PitchClassSequence::from_values(id, values)
}

fn corpus(values: &[Vec<u8>]) -> Vec<PitchClassSequence> {
    values.iter().enumerate().map(|(i, v)| seq(v, &format!("p{i:03}"))).collect()
}

fn full_counts() -> impl Strategy<Value = [[u64; 12]; 12]> {
    prop::array::uniform12(prop::array::uniform12(1u64..1000))
}

fn pc(v: u8) -> PitchClass {
    PitchClass::new(v).unwrap()
}

fn finite(lo: f64, hi: f64, min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    vec(lo..hi, min..=max)
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

fn pitch_class_period(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(0u8..=127, |counter, n| {
        let p = PitchClass::from_midi(n);
        prop_assert_eq!(p.value(), n % 12);
        if n <= 115 {
            prop_assert_eq!(PitchClass::from_midi(n + 12), p);
        }
        Ok(())
    })(runner, counter)
}

fn smf_round_trip(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!((pcs(2, 500), 0u16..=1, any::<u64>()), |counter, (values, format, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bytes = encode_polyphonic(&values, format, &mut rng);
        let doc = parse_midi(&bytes).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let got = extract_sequence(&doc, &ExtractionConfig::default(), "x").unwrap();
        let expected = seq(&values, "x");
        prop_assert_eq!(got.notes(), expected.notes());
        prop_assert_eq!(midly_pitch_classes(&bytes), values.clone());
        let again = extract_sequence(&parse_midi(&bytes).unwrap(), &ExtractionConfig::default(), "x").unwrap();
        prop_assert_eq!(&again, &got);

        let mono: Vec<PitchClass> = values.iter().map(|&v| pc(v)).collect();
        let enc = SequenceEncoding { format, ticks_per_quarter: 480, octave: (seed % 9) as u8 };
        let plain = encode_sequence(&mono, enc);
        let back = extract_sequence(&parse_midi(&plain).unwrap(), &ExtractionConfig::default(), "y").unwrap();
        prop_assert_eq!(back.notes(), &mono[..]);
        Ok(())
    })(runner, counter)
}

fn row_sums(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    let rows = prop::array::uniform12(prop::option::weighted(0.8, prop::array::uniform12(0u64..1_000_000)));
    property!(rows, |counter, rows| {
        let counts = rows.map(|r| r.unwrap_or([0; 12]));
        let c = CountMatrix::from_counts(counts);
        let m = normalize::<f64>(&c);
        for (i, row) in m.rows().iter().enumerate() {
            let total: u64 = counts[i].iter().sum();
            prop_assert_eq!(row.is_some(), total > 0);
            if let Some(r) = row {
                let s: f64 = r.iter().sum();
                prop_assert!((s - 1.0).abs() <= 1e-12, "row {} sums to {}", i, s);
                prop_assert!(r.iter().all(|p| (0.0..=1.0).contains(p)));
            }
        }
        Ok(())
    })(runner, counter)
}

fn bigram_totals(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(vec(pcs(0, 120), 1..10), |counter, pieces| {
        let seqs = corpus(&pieces);
        let per: Vec<CountMatrix> = seqs.iter().map(count_transitions).collect();
        let merged = per.iter().fold(CountMatrix::zero(), |a, b| merge_counts(&a, b));
        let sum: u64 = per.iter().map(|c| c.total_bigrams()).sum();
        prop_assert_eq!(sum, merged.total_bigrams());
        let expected: usize = pieces.iter().map(|p| p.len().saturating_sub(1)).sum();
        prop_assert_eq!(sum, expected as u64);
        Ok(())
    })(runner, counter)
}

fn ngram_order_two_collapses(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(pcs(0, 200), |counter, values| {
        let s = seq(&values, "n");
        let collapsed = count_ngrams(&s, 2).unwrap().to_count_matrix().unwrap();
        prop_assert_eq!(collapsed, count_transitions(&s));
        Ok(())
    })(runner, counter)
}

fn score_bounds(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!((vec(pcs(6, 80), 1..6), any::<bool>()), |counter, (pieces, loo)| {
        let seqs = corpus(&pieces);
        let options = ScoringOptions { leave_one_out: loo };
        for method in [Method::AllNotes, Method::Simonton, Method::Ngram(3)] {
            for (_, r) in score_corpus::<f64>(&seqs, method, options).unwrap() {
                if let Ok(s) = r {
                    prop_assert!((0.0..=1.0).contains(&s.value), "{} gave {}", method, s.value);
                }
            }
        }
        Ok(())
    })(runner, counter)
}

fn six_note_methods_agree(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!((pcs(6, 6), full_counts()), |counter, (values, counts)| {
        let m = normalize::<f64>(&CountMatrix::from_counts(counts));
        let s = seq(&values, "six");
        let a = originality_all_notes(&s, &m).unwrap();
        let b = originality_simonton(&s, &m).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        let m32 = normalize::<f32>(&CountMatrix::from_counts(counts));
        let a32 = originality_all_notes(&s, &m32).unwrap();
        let b32 = originality_simonton(&s, &m32).unwrap();
        prop_assert_eq!(a32.value.to_bits(), b32.value.to_bits());
        Ok(())
    })(runner, counter)
}

fn lower_probability_raises_score(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!((pcs(2, 10), full_counts(), any::<Index>(), 0.05f64..=1.0), |counter, (values, counts, pick, frac)| {
        let m = normalize::<f64>(&CountMatrix::from_counts(counts));
        let s = seq(&values, "m");
        let bigrams: Vec<(u8, u8)> = values.windows(2).map(|w| (w[0], w[1])).collect();
        let (a, b) = bigrams[pick.index(bigrams.len())];
        let spare = (0..12u8).find(|&c| !bigrams.contains(&(a, c))).expect("at most 9 bigrams");
        let mut rows = *m.rows();
        let row = rows[a as usize].as_mut().unwrap();
        let moved = row[b as usize] * frac;
        row[b as usize] -= moved;
        row[spare as usize] += moved;
        let lowered = StochasticMatrix::from_rows(rows).unwrap();
        let before = originality_all_notes(&s, &m).unwrap().value;
        let after = originality_all_notes(&s, &lowered).unwrap().value;
        prop_assert!(after > before, "{} -> {}", before, after);
        Ok(())
    })(runner, counter)
}

/// Background pieces move by semitones only and the scored piece never does, so
/// its transitions vanish from the model once it is left out.
fn leave_one_out_moves_scores(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    let walk = |steps: &'static [u8], min: usize, max: usize| {
        (0u8..12, vec(prop::sample::select(steps), min..=max)).prop_map(|(start, moves)| {
            let mut v = vec![start];
            for m in moves {
                v.push((v.last().unwrap() + m) % 12);
            }
            v
        })
    };
    property!((vec(walk(&[1, 11], 5, 60), 0..5), walk(&[2, 5, 7], 5, 40)), |counter, (background, scored)| {
        let mut pieces = vec![(0..12u8).chain([0]).collect::<Vec<_>>()];
        pieces.extend(background);
        pieces.push(scored);
        let seqs = corpus(&pieces);
        let id = seqs.last().unwrap().piece_id.clone();
        let pick = |loo: bool| {
            score_corpus::<f64>(&seqs, Method::AllNotes, ScoringOptions { leave_one_out: loo })
                .unwrap()
                .into_iter()
                .find(|(p, _)| *p == id)
                .unwrap()
                .1
                .unwrap()
                .value
        };
        let (full, loo) = (pick(false), pick(true));
        prop_assert_eq!(loo, 1.0);
        prop_assert!(full < loo);

        let total = seqs.iter().map(count_transitions).fold(CountMatrix::zero(), |a, b| merge_counts(&a, &b));
        let direct = originality_all_notes(seqs.last().unwrap(), &normalize::<f64>(&total)).unwrap().value;
        prop_assert_eq!(direct, full);
        Ok(())
    })(runner, counter)
}

fn t_test_antisymmetry(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!((finite(-1e3, 1e3, 2, 30), finite(-1e3, 1e3, 2, 30)), |counter, (a, b)| {
        for kind in [TTestKind::Welch, TTestKind::Pooled] {
            match (two_sample_t_test(&a, &b, kind), two_sample_t_test(&b, &a, kind)) {
                (Ok(ab), Ok(ba)) => {
                    prop_assert_eq!(ab.t_stat, -ba.t_stat);
                    prop_assert_eq!(ab.p_value, ba.p_value);
                    prop_assert_eq!(ab.df, ba.df);
                }
                (Err(StatsError::ZeroVariance), Err(StatsError::ZeroVariance)) => {}
                (x, y) => prop_assert!(false, "{:?} vs {:?}", x, y),
            }
        }
        Ok(())
    })(runner, counter)
}

fn t_tail_symmetry(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!((-60.0f64..60.0, 0.2f64..2e4), |counter, (t, df)| {
        let s = student_t_sf(t, df).unwrap() + student_t_sf(-t, df).unwrap();
        prop_assert!((s - 1.0).abs() <= 1e-12, "t={} df={} sum={}", t, df, s);
        Ok(())
    })(runner, counter)
}

fn xy(min: usize, max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    vec((-1e4f64..1e4, -1e4f64..1e4), min..=max).prop_map(|v| v.into_iter().unzip())
}

fn r_squared_is_r_times_r(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(xy(3, 60), |counter, (x, y)| {
        prop_assume!(!is_constant(&x));
        let r = linear_regression(&x, &y).unwrap();
        prop_assert!((r.r_squared - r.r * r.r).abs() <= 1e-12);
        Ok(())
    })(runner, counter)
}

fn ols_residual_orthogonality(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(xy(2, 60), |counter, (x, y)| {
        prop_assume!(x.iter().any(|&v| v != 0.0));
        let o = ols_no_intercept(&y, &x).unwrap();
        let e: Vec<f64> = x.iter().zip(&y).map(|(a, b)| b - o.coef * a).collect();
        let dot: f64 = x.iter().zip(&e).map(|(a, b)| a * b).sum();
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assert!(dot.abs() <= 1e-9 * norm(&x) * norm(&e) + f64::MIN_POSITIVE, "dot {}", dot);
        Ok(())
    })(runner, counter)
}

fn positive_scaling_invariance(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!((xy(4, 40), 1e-3f64..1e3), |counter, ((x, y), c)| {
        prop_assume!(!is_constant(&x) && !is_constant(&y));
        let ys: Vec<f64> = y.iter().map(|v| v * c).collect();
        let same = |a: f64, b: f64| (a - b).abs() <= 1e-10 * a.abs().max(1.0);
        let (r1, r2) = (linear_regression(&x, &y).unwrap(), linear_regression(&x, &ys).unwrap());
        prop_assert!(same(r1.r, r2.r) && same(r1.p_value, r2.p_value));
        prop_assert!(same(r1.slope * c, r2.slope));
        let (o1, o2) = (ols_no_intercept(&y, &x).unwrap(), ols_no_intercept(&ys, &x).unwrap());
        prop_assert!(same(o1.t_stat, o2.t_stat) && same(o1.p_value, o2.p_value));
        prop_assert!(same(o1.coef * c, o2.coef));
        let half = y.len() / 2;
        let (a1, b1) = y.split_at(half);
        let (a2, b2) = ys.split_at(half);
        if let (Ok(t1), Ok(t2)) =
            (two_sample_t_test(a1, b1, TTestKind::Welch), two_sample_t_test(a2, b2, TTestKind::Welch))
        {
            prop_assert!(same(t1.t_stat, t2.t_stat) && same(t1.p_value, t2.p_value));
        }
        Ok(())
    })(runner, counter)
}

fn pairwise_count(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(vec(finite(0.0, 1.0, 2, 6), 2..10), |counter, groups| {
        let k = groups.len();
        let map: BTreeMap<String, Vec<f64>> =
            groups.into_iter().enumerate().map(|(i, g)| (format!("c{i}"), g)).collect();
        let tests = pairwise_composer_tests(&map, TTestKind::Welch).unwrap();
        prop_assert_eq!(tests.len(), k * (k - 1) / 2);
        Ok(())
    })(runner, counter)
}

fn records(max: usize) -> impl Strategy<Value = Vec<PieceRecord>> {
    let row = (
        "[a-z0-9_]{1,12}",
        "[A-Za-z0-9 ,.'\"é-]{0,24}",
        prop::sample::select(vec!["Arndt", "Brenner", "Castell", "Dorn, J.", "Ehrling", "Falk"]),
        prop::option::of(0u32..=10_000),
        prop::option::of(any::<u64>()),
    );
    vec(row, 0..=max).prop_map(|rows| {
        let mut seen = std::collections::HashSet::new();
        rows.into_iter()
            .filter(|r| seen.insert(r.0.clone()))
            .map(|(file, title, composer, o, p)| PieceRecord {
                file_name: format!("{file}.mid"),
                title,
                composer: composer.to_string(),
                originality: o.map(|v| v as f64 / 10_000.0),
                popularity: p,
            })
            .collect()
    })
}

fn datasheet_round_trip(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(records(20), |counter, recs| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("datasheet.csv");
        write_datasheet(&recs, &path).unwrap();
        prop_assert_eq!(read_datasheet(&path).unwrap(), recs);
        Ok(())
    })(runner, counter)
}

fn popularity_records() -> impl Strategy<Value = Vec<(String, u64, i64)>> {
    vec(("[^\u{0}]{1,30}", any::<u64>(), 0i64..4_000_000_000), 0..20)
}

fn cache_round_trip(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(popularity_records(), |counter, entries| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        let recs: Vec<PopularityRecord> = entries
            .into_iter()
            .map(|(title, count, secs)| PopularityRecord {
                title,
                count,
                fetched_at: chrono::DateTime::from_timestamp(secs, 250_000).unwrap(),
                provider: "http".into(),
            })
            .collect();
        write_cache(&recs, &path).unwrap();
        let back = read_cache(&path).unwrap();
        prop_assert_eq!(back.len(), recs.len());
        for (a, b) in back.iter().zip(&recs) {
            prop_assert_eq!(a, b);
            prop_assert_eq!(a.fetched_at, b.fetched_at);
        }
        Ok(())
    })(runner, counter)
}

fn static_provider_deterministic(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(vec(("[A-Za-z0-9 ,.\"]{1,20}", any::<u64>()), 1..15), |counter, pairs| {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("popularity.csv");
        let mut uniq: BTreeMap<String, u64> = BTreeMap::new();
        for (t, c) in pairs {
            uniq.insert(t, c);
        }
        let table = StaticTable::from_pairs(uniq.clone());
        let recs: Vec<PopularityRecord> = uniq.keys().map(|t| table.lookup(t).unwrap()).collect();
        write_static_csv(&recs, &path).unwrap();
        let (t1, t2) = (StaticTable::load(&path).unwrap(), StaticTable::load(&path).unwrap());
        for (title, count) in &uniq {
            let (a, b) = (t1.lookup(title).unwrap(), t2.lookup(title).unwrap());
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.count, *count);
        }
        Ok(())
    })(runner, counter)
}

fn check_svg(text: &str, labels: &[&str]) -> Result<(), TestCaseError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let root = doc.root_element();
    prop_assert_eq!(root.tag_name().name(), "svg");
    for attr in ["width", "height"] {
        let v = root.attribute(attr).ok_or_else(|| TestCaseError::fail(format!("no {attr}")))?;
        prop_assert!(v.parse::<f64>().map(|w| w > 0.0).unwrap_or(false), "{} = {}", attr, v);
    }
    let texts: Vec<&str> = doc.descendants().filter(|n| n.has_tag_name("text")).filter_map(|n| n.text()).collect();
    for l in labels {
        prop_assert!(texts.contains(l), "missing label {}", l);
    }
    Ok(())
}

fn svg_well_formed(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    let scored = records(15).prop_filter("needs a point", |r| !r.is_empty()).prop_map(|rs| {
        rs.into_iter()
            .map(|mut r| {
                r.originality.get_or_insert(0.9);
                r.popularity = Some(r.popularity.unwrap_or(5) % 1_000_000);
                r
            })
            .collect::<Vec<_>>()
    });
    let fit = prop_oneof![
        Just(None),
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Some(Fit::Line { slope: a, intercept: b })),
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b, c)| Some(Fit::Quadratic { c0: a, c1: b, c2: c })),
    ];
    property!((scored, fit, any::<bool>(), any::<bool>()), |counter, (recs, fit, by_composer, swap)| {
        let mode = if by_composer { ScatterMode::ByComposer } else { ScatterMode::Regression };
        let mut options = ScatterOptions::new(mode);
        options.fit = fit;
        options.swap_axes = swap;
        let plot = ScatterPlot::build(&recs, options).unwrap();
        check_svg(&plot.to_svg(), &["Popularity (search results)", "Melodic originality"])?;

        let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for r in &recs {
            groups.entry(r.composer.clone()).or_default().push(r.originality.unwrap());
        }
        let boxes: Vec<_> = groups
            .iter()
            .map(|(c, v)| {
                let b = box_stats(c, v).unwrap();
                let w = whiskers(&b, v);
                (b, w)
            })
            .collect();
        check_svg(&box_plot_svg(&boxes), &["Composer", "Melodic originality"])?;
        let m = normalize::<f64>(&CountMatrix::from_counts(counts_from(&recs)));
        check_svg(&heatmap_svg(&m).unwrap(), &["First note", "Second note"])?;
        Ok(())
    })(runner, counter)
}

fn counts_from(recs: &[PieceRecord]) -> [[u64; 12]; 12] {
    let mut c = [[1u64; 12]; 12];
    for (i, r) in recs.iter().enumerate() {
        c[i % 12][(r.popularity.unwrap_or(0) % 12) as usize] += 7;
    }
    c
}

fn box_summary_order(runner: &mut TestRunner, counter: &AtomicUsize) -> Result<(), String> {
    property!(finite(-5.0, 5.0, 1, 60), |counter, values| {
        let b = box_stats("g", &values).unwrap();
        prop_assert!(b.min <= b.q1 && b.q1 <= b.median && b.median <= b.q3 && b.q3 <= b.max);
        let w = whiskers(&b, &values);
        prop_assert!(b.min <= w.low && w.low <= b.q1.max(w.low) && w.high <= b.max);
        let iqr = b.q3 - b.q1;
        for o in &w.outliers {
            prop_assert!(*o < b.q1 - 1.5 * iqr || *o > b.q3 + 1.5 * iqr);
        }
        prop_assert_eq!(b.n, values.len());
        Ok(())
    })(runner, counter)
}
