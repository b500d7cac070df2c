//! Batch statistics over `G_1 ..= G_nmax`: part sizes, the per-number
//! membership grid, band counts around `n/3`, `n/2`, `2n/3`, prime openings,
//! even winning openings, and where vertex 1 settles into `A`.
//!
//! Interval tests use integer cross-multiplication, never floats.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{decompose, Class, Decomposition};
use crate::error::{Error, Result};
use crate::game::is_prime;
use crate::graph::{Graph, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub d_size: usize,
    pub a_size: usize,
    pub c_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipCell {
    pub n: u32,
    pub k: Label,
    pub class: Class,
}

/// Reference lines `n/3`, `n/2`, `2n/3` for one column of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub n: u32,
    pub third: f64,
    pub half: f64,
    pub two_thirds: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandRow {
    pub n: u32,
    /// `|A ∩ [1, n/3]|`
    pub a_lo_count: usize,
    /// `|A ∩ (n/3, n/2)|`
    pub a_mid_count: usize,
    /// `|D ∩ [n/2, 2n/3]|`
    pub d_mid_density_num: usize,
    /// number of integers in `[n/2, 2n/3]`
    pub d_mid_density_den: usize,
    /// class of each prime `p` with `n/2 < p <= n`
    pub primes_upper_half: Vec<(Label, Class)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LemoineRow {
    pub n: u32,
    pub even_witness: Option<Label>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeViolation {
    pub n: u32,
    pub prime: Label,
    pub class: Class,
}

/// Whether the band observations hold on the sweep range. Reported, never asserted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandSummary {
    pub n_max: u32,
    /// every `n` where some member of `A` lies strictly between `n/3` and `n/2`
    pub a_mid_nonempty_at: Vec<u32>,
    pub a_mid_always_empty: bool,
    pub n_with_nonempty_a: usize,
    /// how many of those have more than half of `A` at or below `n/3`
    pub a_majority_below_third: usize,
    /// how many `n` have `D`-density on `[n/2, 2n/3]` above `|D|/n`
    pub d_mid_denser_than_overall: usize,
}

/// Decompositions of `G_1 ..= G_nmax`, computed in parallel, indexed by `n - 1`.
#[derive(Clone, Debug)]
pub struct Sweep {
    decompositions: Vec<Decomposition>,
}

impl Sweep {
    pub fn compute(n_max: u32) -> Result<Sweep> {
        Sweep::compute_range(1, n_max)
            .map(|decompositions| Sweep { decompositions })
    }

    fn compute_range(from: u32, to: u32) -> Result<Vec<Decomposition>> {
        if from == 0 || to < from {
            return Err(Error::InvalidSize);
        }
        Ok((from..=to)
            .into_par_iter()
            .map(|n| decompose(&Graph::divisibility(n).expect("n >= 1")))
            .collect())
    }

    pub fn n_max(&self) -> u32 {
        self.decompositions.len() as u32
    }

    pub fn get(&self, n: u32) -> Option<&Decomposition> {
        self.decompositions.get((n as usize).checked_sub(1)?)
    }

    fn iter(&self) -> impl Iterator<Item = (u32, &Decomposition)> {
        self.decompositions
            .iter()
            .enumerate()
            .map(|(i, d)| (i as u32 + 1, d))
    }

    pub fn rows(&self) -> Vec<SweepRow> {
        self.iter()
            .map(|(n, d)| SweepRow {
                n,
                d_size: d.d.len(),
                a_size: d.a.len(),
                c_size: d.c.len(),
            })
            .collect()
    }

    pub fn membership(&self) -> Vec<MembershipCell> {
        self.iter()
            .flat_map(|(n, d)| {
                (1..=n).map(move |k| MembershipCell {
                    n,
                    k,
                    class: d.class_of(k).expect("partition covers 1..=n"),
                })
            })
            .collect()
    }

    pub fn thresholds(&self) -> Vec<Thresholds> {
        (1..=self.n_max())
            .map(|n| {
                let n_f = f64::from(n);
                Thresholds {
                    n,
                    third: n_f / 3.0,
                    half: n_f / 2.0,
                    two_thirds: 2.0 * n_f / 3.0,
                }
            })
            .collect()
    }

    pub fn bands(&self) -> Vec<BandRow> {
        self.iter().map(|(n, d)| band_row(n, d)).collect()
    }

    pub fn band_summary(&self) -> BandSummary {
        let bands = self.bands();
        let a_mid_nonempty_at: Vec<u32> = bands
            .iter()
            .filter(|b| b.a_mid_count > 0)
            .map(|b| b.n)
            .collect();
        let mut n_with_nonempty_a = 0;
        let mut a_majority_below_third = 0;
        let mut d_mid_denser_than_overall = 0;
        for (b, (n, d)) in bands.iter().zip(self.iter()) {
            if !d.a.is_empty() {
                n_with_nonempty_a += 1;
                if 2 * b.a_lo_count > d.a.len() {
                    a_majority_below_third += 1;
                }
            }
            // num/den > |D|/n  <=>  num * n > |D| * den
            if b.d_mid_density_den > 0
                && b.d_mid_density_num * n as usize > d.d.len() * b.d_mid_density_den
            {
                d_mid_denser_than_overall += 1;
            }
        }
        BandSummary {
            n_max: self.n_max(),
            a_mid_always_empty: a_mid_nonempty_at.is_empty(),
            a_mid_nonempty_at,
            n_with_nonempty_a,
            a_majority_below_third,
            d_mid_denser_than_overall,
        }
    }

    pub fn lemoine(&self) -> Vec<LemoineRow> {
        self.iter()
            .map(|(n, d)| LemoineRow {
                n,
                even_witness: d.d.iter().copied().find(|k| k % 2 == 0),
            })
            .collect()
    }

    pub fn large_prime_violations(&self) -> Vec<PrimeViolation> {
        self.iter()
            .flat_map(|(n, d)| {
                let primes = upper_half_primes(n);
                let checked = if primes.len() >= 2 { primes } else { Vec::new() };
                checked.into_iter().filter_map(move |p| {
                    let class = d.class_of(p).expect("prime <= n");
                    (class != Class::D).then_some(PrimeViolation { n, prime: p, class })
                })
            })
            .collect()
    }

    /// Smallest `n0` with `1 ∈ A(G_n)` for every `n0 <= n <= n_max`.
    pub fn one_in_a_threshold(&self) -> Option<u32> {
        let mut threshold = None;
        for (n, d) in self.iter().collect::<Vec<_>>().into_iter().rev() {
            if d.class_of(1) != Some(Class::A) {
                break;
            }
            threshold = Some(n);
        }
        threshold
    }

    /// Writes `sweep.csv`, `membership.csv`, `bands.csv`, `lemoine.csv` and a
    /// `summary.json` into `dir`, creating it if needed.
    pub fn write_all(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        let create = |name: &str| fs::File::create(dir.join(name)).map(io::BufWriter::new);

        let mut w = create("sweep.csv")?;
        writeln!(w, "n,d_size,a_size,c_size")?;
        for r in self.rows() {
            writeln!(w, "{},{},{},{}", r.n, r.d_size, r.a_size, r.c_size)?;
        }
        w.flush()?;

        let mut w = create("membership.csv")?;
        writeln!(w, "n,k,class")?;
        for c in self.membership() {
            writeln!(w, "{},{},{}", c.n, c.k, c.class)?;
        }
        w.flush()?;

        let mut w = create("bands.csv")?;
        writeln!(
            w,
            "n,a_lo_count,a_mid_count,d_mid_density_num,d_mid_density_den,primes_upper_half_class"
        )?;
        for b in self.bands() {
            let primes: Vec<String> = b
                .primes_upper_half
                .iter()
                .map(|(p, c)| format!("{p}:{c}"))
                .collect();
            writeln!(
                w,
                "{},{},{},{},{},{}",
                b.n,
                b.a_lo_count,
                b.a_mid_count,
                b.d_mid_density_num,
                b.d_mid_density_den,
                primes.join(";")
            )?;
        }
        w.flush()?;

        let mut w = create("lemoine.csv")?;
        writeln!(w, "n,even_witness")?;
        for r in self.lemoine() {
            match r.even_witness {
                Some(k) => writeln!(w, "{},{}", r.n, k)?,
                None => writeln!(w, "{},", r.n)?,
            }
        }
        w.flush()?;

        let summary = AnalysisSummary {
            bands: self.band_summary(),
            one_in_a_threshold: self.one_in_a_threshold(),
            large_prime_violations: self.large_prime_violations(),
            thresholds: self.thresholds(),
        };
        let mut w = create("summary.json")?;
        serde_json::to_writer_pretty(&mut w, &summary)?;
        writeln!(w)?;
        w.flush()
    }
}

#[derive(Serialize)]
struct AnalysisSummary {
    bands: BandSummary,
    one_in_a_threshold: Option<u32>,
    large_prime_violations: Vec<PrimeViolation>,
    thresholds: Vec<Thresholds>,
}

/// Primes `p` with `n/2 < p <= n`, ascending.
pub fn upper_half_primes(n: u32) -> Vec<Label> {
    (n / 2 + 1..=n).filter(|&p| 2 * p > n && is_prime(p)).collect()
}

fn band_row(n: u32, d: &Decomposition) -> BandRow {
    // k <= n/3  <=>  3k <= n;  n/3 < k < n/2  <=>  3k > n && 2k < n
    let a_lo_count = d.a.iter().filter(|&&k| 3 * k <= n).count();
    let a_mid_count = d.a.iter().filter(|&&k| 3 * k > n && 2 * k < n).count();
    // n/2 <= k <= 2n/3  <=>  2k >= n && 3k <= 2n
    let in_mid = |k: u32| 2 * k >= n && 3 * k <= 2 * n;
    BandRow {
        n,
        a_lo_count,
        a_mid_count,
        d_mid_density_num: d.d.iter().filter(|&&k| in_mid(k)).count(),
        d_mid_density_den: (1..=n).filter(|&k| in_mid(k)).count(),
        primes_upper_half: upper_half_primes(n)
            .into_iter()
            .map(|p| (p, d.class_of(p).expect("prime <= n")))
            .collect(),
    }
}

pub fn sweep_decompositions(n_max: u32) -> Result<Vec<SweepRow>> {
    Ok(Sweep::compute(n_max)?.rows())
}

pub fn membership_grid(n_max: u32) -> Result<Vec<MembershipCell>> {
    Ok(Sweep::compute(n_max)?.membership())
}

pub fn band_report(n_max: u32) -> Result<Vec<BandRow>> {
    Ok(Sweep::compute(n_max)?.bands())
}

/// Smallest even element of `D(G_n)` for each `n` in `n_from..=n_to`.
pub fn lemoine_check(n_from: u32, n_to: u32) -> Result<Vec<LemoineRow>> {
    let decs = Sweep::compute_range(n_from, n_to)?;
    Ok((n_from..=n_to)
        .zip(decs)
        .map(|(n, d)| LemoineRow {
            n,
            even_witness: d.d.iter().copied().find(|k| k % 2 == 0),
        })
        .collect())
}

pub fn large_prime_check(n_max: u32) -> Result<Vec<PrimeViolation>> {
    Ok(Sweep::compute(n_max)?.large_prime_violations())
}

pub fn one_in_a_threshold(n_max: u32) -> Result<Option<u32>> {
    Ok(Sweep::compute(n_max)?.one_in_a_threshold())
}
