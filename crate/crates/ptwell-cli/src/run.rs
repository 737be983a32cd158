//! Command implementations.

use crate::config::{resolve, Config};
use crate::output::{fmt_f64, fmt_opt_f64, parent_dir, Csv, Manifest};
use crate::{CliError, GammaGridArgs};
use ptwell::currents::{current_sweep, stationary_rows, CurrentRow, StationaryRow};
use ptwell::linalg;
use ptwell::model::{build_h0, build_hp, hamiltonian, parity, SystemParams};
use ptwell::nonlinear::{continue_branch, detect_folds, discover_states, CensusConfig, StepConfig};
use ptwell::perturbation::{
    degenerate_coupling_matrix, degenerate_coupling_matrix_unnormalized, first_order_splitting,
    kato_correction, PerturbationError, UnperturbedBasis,
};
use ptwell::spectrum::{find_ep2, sweep_gamma, Ep2Outcome, IM_TOL, PT_DEFECT_TOL};
use ptwell::stability::bdg_spectrum;
use ptwell::C64;
use std::path::{Path, PathBuf};

struct Grid {
    min: f64,
    max: f64,
    steps: usize,
    values: Vec<f64>,
}

fn resolve_grid(conf: &Config, args: &GammaGridArgs) -> Result<Grid, CliError> {
    let min = resolve(
        args.gamma_min,
        conf.get_f64("gamma-min"),
        Some(0.0),
        "gamma-min",
    )?;
    let max = resolve(
        args.gamma_max,
        conf.get_f64("gamma-max"),
        Some(1.5),
        "gamma-max",
    )?;
    let steps = resolve(
        args.gamma_steps,
        conf.get_usize("gamma-steps"),
        Some(301),
        "gamma-steps",
    )?;
    if !(min.is_finite() && max.is_finite()) || min < 0.0 || max <= min || steps < 2 {
        return Err(CliError::Usage(format!(
            "invalid gamma grid: min={min}, max={max}, steps={steps}"
        )));
    }
    let values = (0..steps)
        .map(|k| min + (max - min) * k as f64 / (steps - 1) as f64)
        .collect();
    Ok(Grid {
        min,
        max,
        steps,
        values,
    })
}

fn resolve_j(conf: &Config, j: Option<f64>) -> Result<f64, CliError> {
    let j = resolve(j, conf.get_f64("j"), None, "j")?;
    if !j.is_finite() {
        return Err(CliError::Usage("--j must be finite".into()));
    }
    if SystemParams::new(j, 0.0, 0.0).is_ok_and(|p| p.outside_standard_regime()) {
        eprintln!(
            "ptwell: warning: J = {j} < 0 lies outside the standard regime; formulas remain valid"
        );
    }
    Ok(j)
}

fn resolve_out(conf: &Config, flag: Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
    resolve(flag, Ok(conf.get_string(key).map(PathBuf::from)), None, key)
}

// ---------------------------------------------------------------------------
// linear-sweep
// ---------------------------------------------------------------------------

pub fn linear_sweep(
    conf: &Config,
    j: Option<f64>,
    grid_args: &GammaGridArgs,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let j = resolve_j(conf, j)?;
    let grid = resolve_grid(conf, grid_args)?;
    let out = resolve_out(conf, out, "out")?;
    let branches =
        sweep_gamma(j, &grid.values).map_err(|e| CliError::Usage(format!("sweep failed: {e}")))?;
    let mut csv = Csv::new("gamma,branch,re_mu,im_mu,pt_defect");
    for b in &branches {
        for (k, st) in b.states.iter().enumerate() {
            csv.row(&[
                fmt_f64(st.params().gamma),
                b.labels.id.to_string(),
                fmt_f64(st.mu().re),
                fmt_f64(st.mu().im),
                fmt_f64(b.labels.pt_defects[k]),
            ]);
        }
    }
    csv.write_to(&out)?;
    let mut manifest = Manifest::new("linear-sweep");
    manifest
        .param_f64("j", j)
        .param_f64("gamma_min", grid.min)
        .param_f64("gamma_max", grid.max)
        .param_usize("gamma_steps", grid.steps)
        .output(&out, csv.rows());
    manifest.write_to(&parent_dir(&out))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// ep2
// ---------------------------------------------------------------------------

pub fn ep2(conf: &Config, j: Option<f64>, bracket: Option<String>) -> Result<(), CliError> {
    let j = resolve_j(conf, j)?;
    let raw = resolve(
        bracket,
        Ok(conf.get_string("bracket")),
        Some("0,1.5".into()),
        "bracket",
    )?;
    let parts: Vec<&str> = raw.split(',').collect();
    let (lo, hi) = match parts.as_slice() {
        [a, b] => (
            a.trim().parse::<f64>().map_err(|_| bad_bracket(&raw))?,
            b.trim().parse::<f64>().map_err(|_| bad_bracket(&raw))?,
        ),
        _ => return Err(bad_bracket(&raw)),
    };
    match find_ep2(j, (lo, hi)) {
        Ok(Ep2Outcome::Found(ep)) => {
            println!(
                "J={j} gamma_EP={:.8} pair={},{}",
                ep.gamma_ep, ep.pair.0, ep.pair.1
            );
            Ok(())
        }
        Ok(Ep2Outcome::DegenerateAtZero) => {
            println!("J={j} degenerate-at-zero");
            Ok(())
        }
        Err(e) => Err(CliError::NoEp(format!("no EP2 inside ({lo}, {hi}): {e}"))),
    }
}

fn bad_bracket(raw: &str) -> CliError {
    CliError::Usage(format!("--bracket expects `lo,hi`, got `{raw}`"))
}

// ---------------------------------------------------------------------------
// kato
// ---------------------------------------------------------------------------

const KATO_PROBE_GAMMAS: [f64; 3] = [0.01, 0.05, 0.1];

pub fn kato(
    conf: &Config,
    j: Option<f64>,
    level: Option<usize>,
    max_order: Option<usize>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let j = resolve_j(conf, j)?;
    let level = resolve(level, conf.get_usize("level"), None, "level")?;
    let max_order = resolve(max_order, conf.get_usize("max-order"), Some(6), "max-order")?;
    if level > 2 {
        return Err(CliError::Usage(format!(
            "--level must be 0, 1, or 2, got {level}"
        )));
    }
    if !(1..=8).contains(&max_order) {
        return Err(CliError::Usage(format!(
            "--max-order must be 1..=8, got {max_order}"
        )));
    }
    let basis = UnperturbedBasis::from_hermitian(&build_h0(j), &parity())
        .map_err(|e| CliError::Usage(format!("basis construction failed: {e}")))?;
    let hp = build_hp();
    let mu0 = basis.eigenvalues()[level];
    let mut corrections = Vec::with_capacity(max_order);
    for s in 1..=max_order {
        match kato_correction(&basis, &hp, level, s) {
            Ok(term) => corrections.push(term.value),
            Err(PerturbationError::DegenerateLevel { index, gap }) => {
                return Err(CliError::DegenerateLevel(format!(
                    "level {index} is degenerate at J={j} (gap {gap:.3e}); run `ptwell degenerate-check --j {j}`"
                )));
            }
            Err(e) => return Err(CliError::Usage(format!("kato correction failed: {e}"))),
        }
    }
    // exact eigenvalues for the partial-sum error columns
    let exact: Vec<C64> = KATO_PROBE_GAMMAS
        .iter()
        .map(|&g| {
            let spec = linalg::eig_general(&hamiltonian(j, g)).expect("3x3 diagonalizes");
            *spec
                .eigenvalues
                .iter()
                .min_by(|a, b| (*a - mu0).norm().total_cmp(&(*b - mu0).norm()))
                .unwrap()
        })
        .collect();
    let mut csv = Csv::new("s,re_mu_s,im_mu_s,cumerr_gamma0.01,cumerr_gamma0.05,cumerr_gamma0.1");
    for (k, value) in corrections.iter().enumerate() {
        let s = k + 1;
        let mut fields = vec![s.to_string(), fmt_f64(value.re), fmt_f64(value.im)];
        for (g_idx, &g) in KATO_PROBE_GAMMAS.iter().enumerate() {
            let mut partial = C64::new(mu0, 0.0);
            for (t, c) in corrections.iter().take(s).enumerate() {
                partial += g.powi(t as i32 + 1) * c;
            }
            fields.push(fmt_f64((exact[g_idx] - partial).norm()));
        }
        csv.row(&fields);
    }
    match out {
        Some(path) => {
            csv.write_to(&path)?;
            let mut manifest = Manifest::new("kato");
            manifest
                .param_f64("j", j)
                .param_usize("level", level)
                .param_usize("max_order", max_order)
                .param_list("probe_gammas", &KATO_PROBE_GAMMAS)
                .output(&path, csv.rows());
            manifest.write_to(&parent_dir(&path))?;
        }
        None => csv.print(),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// degenerate-check
// ---------------------------------------------------------------------------

pub fn degenerate_check(conf: &Config, j: Option<f64>, paper_basis: bool) -> Result<(), CliError> {
    let j = resolve_j(conf, j)?;
    let basis = UnperturbedBasis::from_hermitian(&build_h0(j), &parity())
        .map_err(|e| CliError::Usage(format!("basis construction failed: {e}")))?;
    let clusters: Vec<Vec<usize>> = basis
        .degenerate_clusters()
        .into_iter()
        .filter(|c| c.len() > 1)
        .collect();
    if clusters.is_empty() {
        println!("J={j} no degeneracies");
        return Ok(());
    }
    let hp = build_hp();
    for cluster in &clusters {
        let mu = basis.eigenvalues()[cluster[0]];
        let levels: Vec<String> = cluster.iter().map(|k| k.to_string()).collect();
        println!(
            "J={j} cluster: levels {} at mu={}",
            levels.join(","),
            fmt_f64(mu)
        );
        let matrix = if paper_basis {
            // the reference entries use the unnormalized vectors
            // (1,-2,1) and (1,0,-1) of the symmetric-coupling degeneracy
            let raw = vec![
                vec![C64::new(1.0, 0.0), C64::new(-2.0, 0.0), C64::new(1.0, 0.0)],
                vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
            ];
            degenerate_coupling_matrix_unnormalized(&raw, &hp)
        } else {
            let vs: Vec<Vec<C64>> = cluster
                .iter()
                .map(|&k| basis.eigenvector(k).to_vec())
                .collect();
            degenerate_coupling_matrix(&vs, &hp)
        }
        .map_err(|e| CliError::Usage(format!("coupling matrix failed: {e}")))?;
        println!(
            "coupling matrix{}:",
            if paper_basis { " (paper basis)" } else { "" }
        );
        for r in 0..matrix.dim() {
            let cols: Vec<String> = (0..matrix.dim())
                .map(|c| {
                    let z = matrix[(r, c)];
                    format!(
                        "{}{}{}i",
                        fmt_f64(z.re),
                        if z.im < 0.0 { "" } else { "+" },
                        fmt_f64(z.im)
                    )
                })
                .collect();
            println!("  [{}]", cols.join(", "));
        }
        let vs: Vec<Vec<C64>> = cluster
            .iter()
            .map(|&k| basis.eigenvector(k).to_vec())
            .collect();
        let verdict = first_order_splitting(&vs, &hp)
            .map_err(|e| CliError::Usage(format!("splitting failed: {e}")))?;
        let eigs: Vec<String> = verdict
            .splitting_eigenvalues
            .iter()
            .map(|l| {
                format!(
                    "{}{}{}i",
                    fmt_f64(l.re),
                    if l.im < 0.0 { "" } else { "+" },
                    fmt_f64(l.im)
                )
            })
            .collect();
        println!("splitting eigenvalues: {}", eigs.join(", "));
        println!("pt_survives={}", verdict.pt_survives);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// nonlinear
// ---------------------------------------------------------------------------

const STATES_HEADER: &str =
    "gamma,branch,re_mu,im_mu,re_psi1,im_psi1,re_psi2,im_psi2,re_psi3,im_psi3,stable,max_im_omega";

fn states_csv(rows: &[StationaryRow]) -> Result<Csv, CliError> {
    let mut csv = Csv::new(STATES_HEADER);
    for r in rows {
        let bdg = bdg_spectrum(&r.state)
            .map_err(|e| CliError::Usage(format!("BdG analysis failed: {e}")))?;
        let psi = r.state.psi();
        csv.row(&[
            fmt_f64(r.gamma),
            r.branch.to_string(),
            fmt_f64(r.state.mu().re),
            fmt_f64(r.state.mu().im),
            fmt_f64(psi[0].re),
            fmt_f64(psi[0].im),
            fmt_f64(psi[1].re),
            fmt_f64(psi[1].im),
            fmt_f64(psi[2].re),
            fmt_f64(psi[2].im),
            bdg.stable.to_string(),
            fmt_f64(bdg.max_im),
        ]);
    }
    Ok(csv)
}

/// Folds of the interacting branches: continue each PT-symmetric census
/// state upward in gamma and collect the turning points, deduplicated
/// (the two partner branches traverse the same fold).
fn collect_folds(
    j: f64,
    u: f64,
    grid: &[f64],
    notes: &mut Vec<String>,
) -> Result<Vec<(usize, f64)>, CliError> {
    if u == 0.0 {
        return Ok(Vec::new());
    }
    let anchor = grid
        .iter()
        .copied()
        .min_by(|a, b| (a - 0.05).abs().total_cmp(&(b - 0.05).abs()))
        .unwrap_or(0.05);
    let params = SystemParams::new(j, anchor, u)
        .map_err(|e| CliError::Usage(format!("invalid parameters: {e}")))?;
    let census = discover_states(&params, &CensusConfig::default());
    let config = StepConfig {
        gamma_range: (grid[0].max(0.02), *grid.last().unwrap()),
        ..StepConfig::default()
    };
    let mut folds: Vec<(usize, f64)> = Vec::new();
    for (branch, d) in census.iter().enumerate() {
        if d.pt_defect > PT_DEFECT_TOL || d.state.mu().im.abs() > IM_TOL {
            continue;
        }
        match continue_branch(&d.state, 1, &config) {
            Ok(run) => {
                for fold in detect_folds(&run.branch) {
                    let dup = folds
                        .iter()
                        .any(|(_, g)| (g - fold.gamma_fold).abs() <= 1e-3);
                    if !dup {
                        folds.push((branch, fold.gamma_fold));
                    }
                }
            }
            Err(e) => {
                notes.push(format!("continuation of branch {branch} failed: {e}"));
            }
        }
    }
    folds.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(folds)
}

pub fn nonlinear(
    conf: &Config,
    j: Option<f64>,
    u: Option<f64>,
    grid_args: &GammaGridArgs,
    out_states: Option<PathBuf>,
    out_folds: Option<PathBuf>,
) -> Result<(), CliError> {
    let j = resolve_j(conf, j)?;
    let u = resolve(u, conf.get_f64("u"), None, "u")?;
    let grid = resolve_grid(conf, grid_args)?;
    let out_states = resolve_out(conf, out_states, "out-states")?;
    let out_folds = resolve_out(conf, out_folds, "out-folds")?;
    let mut notes = Vec::new();
    let rows = stationary_rows(j, u, &grid.values)
        .map_err(|e| CliError::Usage(format!("state sweep failed: {e}")))?;
    let states = states_csv(&rows)?;
    states.write_to(&out_states)?;
    let folds = collect_folds(j, u, &grid.values, &mut notes)?;
    let mut folds_csv = Csv::new("branch,gamma_fold");
    for (branch, gamma_fold) in &folds {
        folds_csv.row(&[branch.to_string(), fmt_f64(*gamma_fold)]);
    }
    folds_csv.write_to(&out_folds)?;
    let mut manifest = Manifest::new("nonlinear");
    manifest
        .param_f64("j", j)
        .param_f64("u", u)
        .param_f64("gamma_min", grid.min)
        .param_f64("gamma_max", grid.max)
        .param_usize("gamma_steps", grid.steps)
        .output(&out_states, states.rows())
        .output(&out_folds, folds_csv.rows());
    let partial = !notes.is_empty();
    for n in notes {
        manifest.note(n);
    }
    manifest.write_to(&parent_dir(&out_states))?;
    if partial {
        return Err(CliError::Partial(
            "continuation failure; partial fold data written (see manifest notes)".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// currents
// ---------------------------------------------------------------------------

const CURRENTS_HEADER: &str = "gamma,branch,j_ext,j12,j13,ratio,any_broken,stable";

fn currents_csv(rows: &[CurrentRow]) -> Csv {
    let mut csv = Csv::new(CURRENTS_HEADER);
    for r in rows {
        csv.row(&[
            fmt_f64(r.gamma),
            r.branch.to_string(),
            fmt_f64(r.j_ext),
            fmt_f64(r.j12),
            fmt_f64(r.j13),
            fmt_opt_f64(r.ratio),
            r.any_broken.to_string(),
            r.stable.to_string(),
        ]);
    }
    csv
}

pub fn currents(
    conf: &Config,
    j: Option<f64>,
    u: Option<f64>,
    grid_args: &GammaGridArgs,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let j = resolve_j(conf, j)?;
    let u = resolve(u, conf.get_f64("u"), None, "u")?;
    let grid = resolve_grid(conf, grid_args)?;
    let out = resolve_out(conf, out, "out")?;
    let rows = current_sweep(j, u, &grid.values)
        .map_err(|e| CliError::Usage(format!("current sweep failed: {e}")))?;
    let csv = currents_csv(&rows);
    csv.write_to(&out)?;
    let mut manifest = Manifest::new("currents");
    manifest
        .param_f64("j", j)
        .param_f64("u", u)
        .param_f64("gamma_min", grid.min)
        .param_f64("gamma_max", grid.max)
        .param_usize("gamma_steps", grid.steps)
        .output(&out, csv.rows());
    manifest.write_to(&parent_dir(&out))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// fig
// ---------------------------------------------------------------------------

const FIG2_J: [f64; 5] = [0.0, 0.1, 0.4, 0.8, 1.0];
const FIG34_J: [f64; 4] = [0.0, 0.1, 0.4, 0.8];
const FIG5_U: [(char, f64); 3] = [('a', 1.0), ('c', 2.0), ('d', 4.0)];
const FIG6_U: [(char, f64); 4] = [('a', 1.0), ('b', 1.5), ('c', 2.0), ('d', 2.5)];
const FIG5_ZOOM: (f64, f64) = (1.2, 1.7);

fn grid_01(max: f64, step: f64) -> Vec<f64> {
    let steps = (max / step).round() as usize;
    (0..=steps).map(|k| k as f64 * step).collect()
}

pub fn fig(conf: &Config, n: Option<u32>, out_dir: Option<PathBuf>) -> Result<(), CliError> {
    let n = resolve(
        n,
        Ok(conf.get_string("n").and_then(|s| s.parse().ok())),
        None,
        "n",
    )?;
    let out_dir = resolve_out(conf, out_dir, "out-dir")?;
    if !(2..=6).contains(&n) {
        return Err(CliError::Usage(format!("--n must be 2..=6, got {n}")));
    }
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut manifest = Manifest::new("fig");
    manifest.param_usize("figure", n as usize);
    let mut notes = Vec::new();
    match n {
        2 => fig2(&out_dir, &mut manifest)?,
        3 => fig34(&out_dir, &mut manifest, 3)?,
        4 => fig34(&out_dir, &mut manifest, 4)?,
        5 => fig5(&out_dir, &mut manifest, &mut notes)?,
        6 => fig6(&out_dir, &mut manifest)?,
        _ => unreachable!(),
    }
    let partial = !notes.is_empty();
    for note in notes {
        manifest.note(note);
    }
    manifest.write_to(&out_dir)?;
    if partial {
        return Err(CliError::Partial(
            "figure data incomplete; see manifest notes".into(),
        ));
    }
    Ok(())
}

fn fig2(dir: &Path, manifest: &mut Manifest) -> Result<(), CliError> {
    let grid = grid_01(1.5, 0.005);
    let mut re_csv = Csv::new("gamma,j,branch,re_mu");
    let mut im_csv = Csv::new("gamma,j,branch,im_mu");
    for &j in &FIG2_J {
        let branches = sweep_gamma(j, &grid)
            .map_err(|e| CliError::Usage(format!("sweep at J={j} failed: {e}")))?;
        for b in &branches {
            for st in &b.states {
                let g = fmt_f64(st.params().gamma);
                re_csv.row(&[
                    g.clone(),
                    fmt_f64(j),
                    b.labels.id.to_string(),
                    fmt_f64(st.mu().re),
                ]);
                im_csv.row(&[g, fmt_f64(j), b.labels.id.to_string(), fmt_f64(st.mu().im)]);
            }
        }
    }
    manifest.param_list("j_values", &FIG2_J);
    for (name, csv) in [("fig2_a.csv", &re_csv), ("fig2_b.csv", &im_csv)] {
        let path = dir.join(name);
        csv.write_to(&path)?;
        manifest.output(&path, csv.rows());
    }
    Ok(())
}

fn fig34(dir: &Path, manifest: &mut Manifest, which: u32) -> Result<(), CliError> {
    let grid = grid_01(1.5, 0.005);
    manifest.param_list("j_values", &FIG34_J);
    for (panel, &j) in ['a', 'b', 'c', 'd'].iter().zip(&FIG34_J) {
        let rows = current_sweep(j, 0.0, &grid)
            .map_err(|e| CliError::Usage(format!("currents at J={j} failed: {e}")))?;
        // the figures plot stationary currents, so PT-broken eigenstates
        // (complex mu, no stationary current) drop out; the shaded broken
        // regions survive in the any_broken column
        let rows: Vec<&CurrentRow> = rows.iter().filter(|r| r.mu.im.abs() <= IM_TOL).collect();
        let csv = if which == 3 {
            let mut c = Csv::new("gamma,branch,j_ext,any_broken,stable");
            for r in &rows {
                c.row(&[
                    fmt_f64(r.gamma),
                    r.branch.to_string(),
                    fmt_f64(r.j_ext),
                    r.any_broken.to_string(),
                    r.stable.to_string(),
                ]);
            }
            c
        } else {
            let mut c = Csv::new("gamma,branch,ratio,any_broken");
            for r in &rows {
                c.row(&[
                    fmt_f64(r.gamma),
                    r.branch.to_string(),
                    fmt_opt_f64(r.ratio),
                    r.any_broken.to_string(),
                ]);
            }
            c
        };
        let path = dir.join(format!("fig{which}_{panel}.csv"));
        csv.write_to(&path)?;
        manifest.output(&path, csv.rows());
    }
    Ok(())
}

fn fig5(dir: &Path, manifest: &mut Manifest, notes: &mut Vec<String>) -> Result<(), CliError> {
    let grid = grid_01(1.2, 0.005);
    manifest.param_f64("j", 1.0);
    manifest.param_list(
        "u_values",
        &FIG5_U.iter().map(|&(_, u)| u).collect::<Vec<_>>(),
    );
    for &(panel, u) in &FIG5_U {
        let rows = stationary_rows(1.0, u, &grid)
            .map_err(|e| CliError::Usage(format!("states at U={u} failed: {e}")))?;
        let csv = states_csv(&rows)?;
        let path = dir.join(format!("fig5_{panel}.csv"));
        csv.write_to(&path)?;
        manifest.output(&path, csv.rows());
        if u == 1.0 {
            // panel (b): the enlarged region holding the four
            // interaction-induced PT-symmetric states
            let zoom: Vec<StationaryRow> = rows
                .iter()
                .filter(|r| {
                    r.state.mu().im.abs() <= IM_TOL
                        && r.state.mu().re >= FIG5_ZOOM.0
                        && r.state.mu().re <= FIG5_ZOOM.1
                })
                .cloned()
                .collect();
            let zoom_csv = states_csv(&zoom)?;
            let zoom_path = dir.join("fig5_b.csv");
            zoom_csv.write_to(&zoom_path)?;
            manifest.output(&zoom_path, zoom_csv.rows());
        }
        let folds = collect_folds(1.0, u, &grid, notes)?;
        let mut folds_csv = Csv::new("branch,gamma_fold");
        for (branch, gamma_fold) in &folds {
            folds_csv.row(&[branch.to_string(), fmt_f64(*gamma_fold)]);
        }
        let folds_path = dir.join(format!("fig5_{panel}_folds.csv"));
        folds_csv.write_to(&folds_path)?;
        manifest.output(&folds_path, folds_csv.rows());
    }
    Ok(())
}

fn fig6(dir: &Path, manifest: &mut Manifest) -> Result<(), CliError> {
    let grid = grid_01(1.2, 0.005);
    manifest.param_f64("j", 1.0);
    manifest.param_list(
        "u_values",
        &FIG6_U.iter().map(|&(_, u)| u).collect::<Vec<_>>(),
    );
    for &(panel, u) in &FIG6_U {
        let rows = current_sweep(1.0, u, &grid)
            .map_err(|e| CliError::Usage(format!("currents at U={u} failed: {e}")))?;
        let mut csv = Csv::new("gamma,branch,j_ext");
        for r in rows
            .iter()
            .filter(|r| r.stable && r.pt_defect <= PT_DEFECT_TOL && r.mu.im.abs() <= IM_TOL)
        {
            csv.row(&[fmt_f64(r.gamma), r.branch.to_string(), fmt_f64(r.j_ext)]);
        }
        let path = dir.join(format!("fig6_{panel}.csv"));
        csv.write_to(&path)?;
        manifest.output(&path, csv.rows());
    }
    Ok(())
}
