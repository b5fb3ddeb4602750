//! One function per subcommand. Each returns a human-readable summary body,
//! a CSV table, and whether its built-in checks passed.

use crate::config::{RepKind, RunConfig};
use crate::report::{num, Csv};
use maxrep::entropy::{
    ahlfors_slope_experiment, ball_spectrum, entropy_experiment, manhattan_experiment, pair_spectrum,
    shadow_lemma_experiment, ExponentEstimate, DEFAULT_WINDOW_WIDTH,
};
use maxrep::exec::ExecMode;
use maxrep::flags::{gromov_closed_form, gromov_product, tangent_decorated_flag, Side};
use maxrep::hyperbolic::{free_ball_map, orbit_ball_with, wrap_angle, Word, WordAlgebra};
use maxrep::linalg::singular_values;
use maxrep::positivity::{hypertransversality_closed_form, hypertransversality_pairing, is_positive_tuple, Lagrangian};
use maxrep::random;
use maxrep::representations::{
    chart_increment_stats, limit_curve_chart, limit_map_samples, rank_estimate, rho_diagonal, rho_interleaved,
    FuchsianPreset, RelationMode, SymplecticRep,
};
use maxrep::sp::{cartan_projection, symplectic_residual, SymplecticMatrix};
use maxrep::wedge::{singular_gap_identities, wedge_power_matrix};
use maxrep::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;
use std::fmt::Write;

pub struct Outcome {
    pub body: String,
    pub csv: Csv,
    pub ok: bool,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.subcommand.as_str() {
        "identities" => identities(cfg),
        "positivity" => positivity(cfg),
        "gromov" => gromov(cfg),
        "entropy" => entropy(cfg),
        "manhattan" => manhattan(cfg),
        "shadow" => shadow(cfg),
        "ahlfors" => ahlfors(cfg),
        "limitcurve" => limitcurve(cfg),
        other => Err(Error::Config(format!("unknown subcommand '{other}'"))),
    }
}

fn mode() -> ExecMode {
    ExecMode::default()
}

fn rel_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax() / (1.0 + a.amax().max(b.amax()))
}

const IDENTITY_CHECKS: [&str; 7] = [
    "symplectic",
    "gap_identities",
    "reciprocal_pairs",
    "inverse_cartan",
    "wedge_functor",
    "gromov_closed_form",
    "hypertransversality",
];

/// Residual of a check, or `None` when the check does not apply at this rank.
fn applicable(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Err(Error::UnsupportedRank(_)) => Ok(None),
        other => other.map(Some),
    }
}

fn identity_residuals(rng: &mut impl Rng, n: usize) -> Result<[Option<f64>; 7]> {
    let g = random::symplectic(rng, n, 1.5);
    let h = random::symplectic(rng, n, 1.5);
    let s = singular_values(g.matrix());
    let reciprocal = (0..n).map(|i| (s[i] * s[2 * n - 1 - i] - 1.0).abs()).fold(0.0, f64::max);
    let k = cartan_projection(&g);
    let ki = cartan_projection(&g.inverse());
    let inverse = k.lambdas().iter().zip(ki.lambdas()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let gh = wedge_power_matrix(&(g.matrix() * h.matrix()))?;
    let functor = rel_diff(&gh, &(wedge_power_matrix(g.matrix())? * wedge_power_matrix(h.matrix())?));
    let m = random::positive_definite(rng, n, 0.1);
    let nm = random::positive_definite(rng, n, 0.1);
    let gromov = applicable((|| {
        let brute = gromov_product(&tangent_decorated_flag(Side::Lower, &nm)?, &tangent_decorated_flag(Side::Upper, &m)?)?;
        Ok((brute.get(2).expect("index 2 present").exp() - gromov_closed_form(&nm, &m)?).abs())
    })())?;
    let rank = rng.random_range(1..=n);
    let psd = random::psd_of_rank(rng, n, rank);
    let hyper = applicable((|| {
        let pairing = hypertransversality_pairing(&m, &psd)?;
        let expected = hypertransversality_closed_form(&m, &psd)?;
        Ok((pairing - expected).amax() / (1.0 + expected.amax()))
    })())?;
    Ok([
        Some(symplectic_residual(g.matrix())?),
        applicable(singular_gap_identities(&g).map(|r| r.max()))?,
        Some(reciprocal),
        Some(inverse),
        Some(functor),
        gromov,
        hyper,
    ])
}

fn identities(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = random::rng(cfg.seed);
    let mut csv = Csv::new(["trial", "check", "residual"]);
    let mut worst: [Option<f64>; 7] = [None; 7];
    for t in 0..cfg.trials {
        let res = identity_residuals(&mut rng, cfg.n)?;
        for (i, r) in res.iter().enumerate() {
            if let Some(r) = r {
                worst[i] = Some(worst[i].unwrap_or(0.0).max(*r));
                csv.push(vec![t.to_string(), IDENTITY_CHECKS[i].into(), num(*r)]);
            }
        }
    }
    let mut body = format!("identity battery: n={}, {} trials, tol {}\n", cfg.n, cfg.trials, num(cfg.tol));
    let mut ok = true;
    for (name, w) in IDENTITY_CHECKS.iter().zip(worst) {
        let line = match w {
            Some(w) => {
                let pass = w <= cfg.tol;
                ok &= pass;
                format!("max residual {:<20} {}", num(w), if pass { "PASS" } else { "FAIL" })
            }
            None => format!("not applicable at n={}", cfg.n),
        };
        let _ = writeln!(body, "{name:<20} {line}");
    }
    Ok(Outcome { body, csv, ok })
}

fn positive_chain(rng: &mut impl Rng, n: usize, size: usize, corrupt: bool) -> Vec<Lagrangian> {
    let mut incs: Vec<DMatrix<f64>> = (0..size - 2).map(|_| random::positive_definite(rng, n, 0.05)).collect();
    let g: SymplecticMatrix = random::symplectic(rng, n, 0.8);
    if corrupt {
        let k = rng.random_range(0..incs.len());
        incs[k] = -&incs[k];
    }
    let mut tuple = vec![Lagrangian::standard(n)];
    for k in 0..incs.len() {
        let s = incs[..incs.len() - k].iter().fold(DMatrix::zeros(n, n), |a, m| a + m);
        tuple.push(Lagrangian::from_chart(&s).expect("symmetric chart"));
    }
    tuple.push(Lagrangian::opposite(n));
    tuple.iter().map(|l| l.transform(&g)).collect()
}

fn positivity(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = random::rng(cfg.seed);
    let mut csv = Csv::new(["trial", "size", "positive", "witness_min_eig", "corrupted_positive"]);
    let (mut certified, mut rejected, mut corrupted) = (0, 0, 0);
    for t in 0..cfg.trials {
        let cert = is_positive_tuple(&positive_chain(&mut rng, cfg.n, cfg.size, false))?;
        certified += cert.is_positive as usize;
        let bad = if cfg.size >= 4 {
            let c = is_positive_tuple(&positive_chain(&mut rng, cfg.n, cfg.size, true))?.is_positive;
            corrupted += 1;
            rejected += (!c) as usize;
            c.to_string()
        } else {
            String::new()
        };
        csv.push(vec![t.to_string(), cfg.size.to_string(), cert.is_positive.to_string(), num(cert.witness_min_eig), bad]);
    }
    let ok = certified == cfg.trials && rejected == corrupted;
    let body = format!(
        "positivity: n={}, tuples of size {}\ncertified {certified}/{}\nsign-corrupted tuples rejected {rejected}/{corrupted}\n{}\n",
        cfg.n,
        cfg.size,
        cfg.trials,
        if ok { "PASS" } else { "FAIL" }
    );
    Ok(Outcome { body, csv, ok })
}

fn gromov(cfg: &RunConfig) -> Result<Outcome> {
    let mut rng = random::rng(cfg.seed);
    let n = cfg.n;
    let mut csv = Csv::new(["trial", "rank_m", "rank_n", "closed_form", "brute_force", "abs_diff"]);
    let (mut worst, mut agree, mut degenerate) = (0.0f64, 0, 0);
    for t in 0..cfg.trials {
        let (rm, rn) = (rng.random_range(1..=n), rng.random_range(1..=n));
        let m = random::psd_of_rank(&mut rng, n, rm);
        let nm = random::psd_of_rank(&mut rng, n, rn);
        let closed = gromov_closed_form(&nm, &m);
        let brute = tangent_decorated_flag(Side::Lower, &nm)
            .and_then(|f1| gromov_product(&f1, &tangent_decorated_flag(Side::Upper, &m)?))
            .map(|g| g.get(2).expect("index 2 present").exp());
        let row = match (&closed, &brute) {
            (Ok(c), Ok(b)) => {
                worst = worst.max((c - b).abs());
                agree += 1;
                [num(*c), num(*b), num((c - b).abs())]
            }
            (Err(Error::NotTransverse), Err(Error::NotTransverse)) => {
                agree += 1;
                degenerate += 1;
                ["not_transverse".into(), "not_transverse".into(), String::new()]
            }
            (c, b) => [format!("{c:?}"), format!("{b:?}"), String::new()],
        };
        let mut r = vec![t.to_string(), rm.to_string(), rn.to_string()];
        r.extend(row);
        csv.push(r);
    }
    let ok = worst <= cfg.tol && agree == cfg.trials;
    let body = format!(
        "gromov closed form: n={n}, {} pairs\nmax |closed - brute| {} (tol {})\nverdicts agree {agree}/{} ({degenerate} non-transverse)\n{}\n",
        cfg.trials,
        num(worst),
        num(cfg.tol),
        cfg.trials,
        if ok { "PASS" } else { "FAIL" }
    );
    Ok(Outcome { body, csv, ok })
}

struct Words;

impl WordAlgebra for Words {
    type Elem = Word;
    fn identity(&self) -> Word {
        Word::empty()
    }
    fn step(&self, e: &Word, letter: u8) -> Word {
        e.push(letter)
    }
}

fn ball_words(preset: &FuchsianPreset, l: usize) -> Result<Vec<Word>> {
    Ok(match preset.relation_mode() {
        RelationMode::HashDedup => orbit_ball_with(preset, l, mode())?.into_iter().map(|e| e.word).collect(),
        RelationMode::FreeReduction => free_ball_map(&Words, preset.letter_inverse(), l, mode(), |_, w| *w),
    })
}

fn representation(cfg: &RunConfig) -> Result<(FuchsianPreset, SymplecticRep)> {
    match cfg.rep {
        RepKind::Diagonal => Ok((cfg.preset.clone(), rho_diagonal(&cfg.preset, cfg.n)?)),
        RepKind::Interleaved => {
            let p1 = cfg.p1.clone().unwrap_or_else(|| cfg.preset.clone());
            let p2 = cfg.p2.as_ref().ok_or_else(|| Error::Config("rep rho_12 needs p2".into()))?;
            let rep = rho_interleaved(&p1, p2)?;
            Ok((p1, rep))
        }
    }
}

fn estimate_line(name: &str, e: &ExponentEstimate) -> String {
    format!(
        "{name:<10} {:<16} {:<16} {:<16} {:<16} {:<6} {:<16} {}\n",
        num(e.delta_hat),
        num(e.stderr),
        num(e.window.0),
        num(e.window.1),
        e.samples_in_window,
        e.scan_delta.map(num).unwrap_or_else(|| "-".into()),
        if e.warning { "WARN" } else { "ok" }
    )
}

const ESTIMATE_HEADER: &str = "functional delta_hat         stderr           t_min            t_max            count  scan_delta       check\n";

fn entropy(cfg: &RunConfig) -> Result<Outcome> {
    let (preset, rep) = representation(cfg)?;
    let report = entropy_experiment(&preset, &rep, cfg.l, &cfg.functionals, cfg.window, DEFAULT_WINDOW_WIDTH, mode())?;
    let samples = ball_spectrum(&preset, &rep, cfg.l, &cfg.functionals, mode())?;
    let words = ball_words(&preset, cfg.l)?;
    if words.len() != samples.len() {
        return Err(Error::DegenerateInput("word list and spectrum disagree in length".into()));
    }
    let mut header = vec!["word".to_string(), "wordlen".into(), "disp".into()];
    header.extend(cfg.functionals.iter().map(|f| f.name()));
    let mut csv = Csv::new(header);
    for (w, s) in words.iter().zip(&samples) {
        let mut row = vec![w.render(preset.symbols()), s.word_len.to_string(), num(s.displacement)];
        row.extend(s.values.iter().map(|v| num(*v)));
        csv.push(row);
    }
    let mut body = format!("entropy: preset {}, L={}, ball size {}\n{ESTIMATE_HEADER}", preset.name(), cfg.l, report.ball_size);
    for (f, e) in &report.rows {
        body.push_str(&estimate_line(&f.name(), e));
    }
    Ok(Outcome { body, csv, ok: true })
}

fn manhattan(cfg: &RunConfig) -> Result<Outcome> {
    let p1 = cfg.p1.clone().unwrap_or_else(|| cfg.preset.clone());
    let p2 = cfg.p2.as_ref().ok_or_else(|| Error::Config("manhattan needs p2".into()))?;
    let report = manhattan_experiment(&p1, p2, cfg.l, DEFAULT_WINDOW_WIDTH, mode())?;
    let mut csv = Csv::new(["wordlen", "l1", "l2", "omega_hat"]);
    for (len, a, b, c) in pair_spectrum(&p1, p2, cfg.l, mode())? {
        csv.push(vec![len.to_string(), num(a), num(b), num(c)]);
    }
    let mut body = format!("manhattan: p1 {}, p2 {}, L={}, ball size {}\n{ESTIMATE_HEADER}", p1.name(), p2.name(), cfg.l, report.ball_size);
    body.push_str(&estimate_line("l1", &report.est1));
    body.push_str(&estimate_line("l2", &report.est2));
    body.push_str(&estimate_line("average", &report.est_avg));
    let _ = writeln!(body, "gap {}\nverdict {:?}", num(report.gap), report.verdict);
    Ok(Outcome { body, csv, ok: true })
}

fn ratio_csv(pairs: &[(f64, f64)], second: &str) -> Csv {
    let mut csv = Csv::new(["arc", second, "ratio"]);
    for (a, b) in pairs {
        csv.push(vec![num(*a), num(*b), num(a / b)]);
    }
    csv
}

fn shadow(cfg: &RunConfig) -> Result<Outcome> {
    let r = shadow_lemma_experiment(&cfg.preset, cfg.n, cfg.r, cfg.l, mode())?;
    let body = format!(
        "shadow: preset {}, n={}, R={}, L={}\npairs {} (excluded {})\nslope {}\nratio range [{}, {}], spread {}\n",
        cfg.preset.name(),
        cfg.n,
        num(r.r),
        r.l,
        r.pairs.len(),
        r.excluded,
        num(r.slope),
        num(r.ratio_min),
        num(r.ratio_max),
        num(r.ratio_spread)
    );
    Ok(Outcome { body, csv: ratio_csv(&r.pairs, "exp_neg_alpha"), ok: true })
}

fn ahlfors(cfg: &RunConfig) -> Result<Outcome> {
    let r = ahlfors_slope_experiment(&cfg.preset, cfg.n, cfg.r, cfg.l, mode())?;
    let body = format!(
        "ahlfors: preset {}, n={}, R={}, L={}\npairs {}\nratio range [{}, {}], spread {}\nmax gromov value {}\n",
        cfg.preset.name(),
        cfg.n,
        num(r.r),
        r.l,
        r.pairs.len(),
        num(r.ratio_min),
        num(r.ratio_max),
        num(r.ratio_spread),
        num(r.max_gromov)
    );
    Ok(Outcome { body, csv: ratio_csv(&r.pairs, "exp_half_omega_hat"), ok: true })
}

fn limitcurve(cfg: &RunConfig) -> Result<Outcome> {
    let (preset, rep) = representation(cfg)?;
    let samples = limit_map_samples(&rep, &preset, cfg.count)?;
    let (x, y) = (&samples[0], &samples[samples.len() / 2]);
    let chart = limit_curve_chart(&samples, x, y)?;
    let n = rep.n();
    let mut header = vec!["angle".to_string()];
    for i in 0..n {
        for j in i..n {
            header.push(format!("f{}{}", i + 1, j + 1));
        }
    }
    let mut csv = Csv::new(header);
    for s in &chart {
        let mut row = vec![num(s.angle)];
        for i in 0..n {
            for j in i..n {
                row.push(num(s.f[(i, j)]));
            }
        }
        csv.push(row);
    }
    let stats = chart_increment_stats(&chart)?;
    let ratios: Vec<f64> = stats.iter().filter(|s| s.0 > 0.0).map(|s| s.1 / s.0).collect();
    let span = wrap_angle(y.angle - x.angle);
    let ranks = rank_estimate(&chart, span / 8.0)?;
    let mut hist = vec![0usize; n + 1];
    for r in &ranks {
        hist[(*r).min(n)] += 1;
    }
    let mut body = format!(
        "limit curve: preset {}, n={n}, {} boundary samples, {} on the chart arc\n",
        preset.name(),
        samples.len(),
        chart.len()
    );
    let _ = writeln!(
        body,
        "det^(1/n)/norm of increments in [{}, {}]",
        num(ratios.iter().copied().fold(f64::INFINITY, f64::min)),
        num(ratios.iter().copied().fold(0.0, f64::max))
    );
    for (r, c) in hist.iter().enumerate() {
        let _ = writeln!(body, "windows of rank {r}: {c}");
    }
    Ok(Outcome { body, csv, ok: true })
}
