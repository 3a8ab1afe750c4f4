use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::automaton::{build_trie, minimize, Adfa, Dictionary};
use crate::error::Result;
use crate::index::{BuildOptions, Padfa};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub variant: &'static str,
    pub bits: u64,
    pub build_s: f64,
    pub query_s: f64,
    pub qps: f64,
    pub mismatches: usize,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub queries: usize,
}

impl BenchReport {
    pub fn row(&self, variant: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.variant == variant)
    }

    pub fn mismatches(&self) -> usize {
        self.rows.iter().map(|r| r.mismatches).sum()
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("variant,bits,build_s,query_s,qps,mismatches\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{:.6},{:.6},{:.1},{}",
                r.variant, r.bits, r.build_s, r.query_s, r.qps, r.mismatches
            );
        }
        s
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<12} {:>14} {:>10} {:>10} {:>14} {:>10}\n",
            "variant", "bits", "build_s", "query_s", "qps", "mismatches"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<12} {:>14} {:>10.4} {:>10.4} {:>14.0} {:>10}",
                r.variant, r.bits, r.build_s, r.query_s, r.qps, r.mismatches
            );
        }
        s
    }
}

/// Runs `query` over all patterns on up to `threads` threads and returns
/// the wall time and the number of patterns rejected.
fn batch(patterns: &[&[u8]], threads: usize, query: &(dyn Fn(&[u8]) -> bool + Sync)) -> (Duration, usize) {
    let start = Instant::now();
    let misses = if threads <= 1 || patterns.len() < 2 * threads {
        patterns.iter().filter(|p| !query(p)).count()
    } else {
        let chunk = patterns.len().div_ceil(threads);
        std::thread::scope(|s| {
            let handles: Vec<_> = patterns
                .chunks(chunk)
                .map(|c| s.spawn(move || c.iter().filter(|p| !query(p)).count()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    };
    (start.elapsed(), misses)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn time<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_secs_f64()))
}

/// Builds the four variants and queries every dictionary string `repeat`
/// times each; times are medians over the repeats.
pub fn bench(d: &Dictionary, repeat: usize, threads: usize) -> Result<BenchReport> {
    let patterns: Vec<&[u8]> = d.iter().collect();
    let (trie, trie_s) = time(|| build_trie(d))?;
    let (min, min_s) = time(|| minimize(&trie))?;
    let min_s = trie_s + min_s;
    let (path_packed, pp_s) = time(|| Padfa::build(&trie, BuildOptions::default()))?;
    let (min_packed, mp_s) = time(|| Padfa::build(&min, BuildOptions::default()))?;

    let plain = |a: &Adfa| {
        let a = a.clone();
        move |p: &[u8]| a.accepts_baseline(p)
    };
    type Query = Box<dyn Fn(&[u8]) -> bool + Sync>;
    let variants: Vec<(&'static str, u64, f64, Query)> = vec![
        ("trie-plain", trie.size_bits(), trie_s, Box::new(plain(&trie))),
        ("min-plain", min.size_bits(), min_s, Box::new(plain(&min))),
        (
            "path-packed",
            path_packed.space_report().total_bits,
            trie_s + pp_s,
            Box::new(move |p: &[u8]| path_packed.query(p)),
        ),
        (
            "min-packed",
            min_packed.space_report().total_bits,
            min_s + mp_s,
            Box::new(move |p: &[u8]| min_packed.query(p)),
        ),
    ];
    // rounds interleave the variants so load spikes spread across them
    let rounds = repeat.max(1);
    let mut times = vec![Vec::with_capacity(rounds); variants.len()];
    let mut mismatches = vec![0; variants.len()];
    for _ in 0..rounds {
        for (i, (_, _, _, query)) in variants.iter().enumerate() {
            let (t, miss) = batch(&patterns, threads, query.as_ref());
            times[i].push(t.as_secs_f64());
            mismatches[i] = mismatches[i].max(miss);
        }
    }
    let mut rows = Vec::new();
    for (((variant, bits, build_s, _), times), mismatches) in variants.iter().zip(times).zip(mismatches) {
        let query_s = median(times);
        rows.push(BenchRow {
            variant,
            bits: *bits,
            build_s: *build_s,
            query_s,
            qps: if query_s > 0.0 { patterns.len() as f64 / query_s } else { 0.0 },
            mismatches,
        });
    }
    Ok(BenchReport {
        rows,
        queries: patterns.len(),
    })
}
