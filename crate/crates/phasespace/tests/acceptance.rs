//! Acceptance suite: every exit criterion as one test, each printing a
//! pass/fail line with its runtime.
//!
//! Shared regime: hbar = 0.1, coupling c = 1 (so t0 = 1/(2 c^2) = 0.5),
//! displacement Y = (0, 1), default 256^2 grids sized by the domain rule.

use std::f64::consts::PI;
use std::time::Instant;

use phasespace::decoherence::{
    heat_propagate, negativity_volume, positivity_threshold, DiffusionParams,
};
use phasespace::fock;
use phasespace::grid::{default_half_width, evolved_half_width, GridSpec};
use phasespace::measurement::{
    estimate_wigner_point, parity_probabilities, project_parity, project_parity_at,
    simulate_measurements,
};
use phasespace::states::{
    cat_wigner, coherent_wigner, evolved_cat_wigner, positivity_time, rasterize, CatParameters,
    Displacement, Parity,
};
use phasespace::transform::{chord_to_wigner, wigner_to_chord};
use phasespace::{negativity_epsilon, Error, PhasePoint, WignerField};

const HBAR: f64 = 0.1;
const COUPLING: f64 = 1.0;
const Y: Displacement = Displacement { p: 0.0, q: 1.0 };

fn spike() -> f64 {
    1.0 / (PI * HBAR)
}

fn t0() -> f64 {
    positivity_time(COUPLING)
}

fn diffusion() -> DiffusionParams {
    DiffusionParams::new(COUPLING, HBAR).unwrap()
}

fn grid_for_time(t: f64, n: usize) -> GridSpec {
    GridSpec::centered_square(evolved_half_width(Y.norm(), HBAR, COUPLING, t), n).unwrap()
}

fn coherent_field(n: usize) -> WignerField {
    let grid = GridSpec::centered_square(default_half_width(Y.norm(), HBAR), n).unwrap();
    rasterize(&grid, HBAR, |x| coherent_wigner(Y, HBAR, x)).unwrap()
}

fn cat_field(parity: Parity, t_margin: f64, n: usize) -> WignerField {
    let params = CatParameters::new(Y, parity, HBAR).unwrap();
    rasterize(&grid_for_time(t_margin, n), HBAR, |x| cat_wigner(&params, x)).unwrap()
}

fn report(criterion: &str, start: Instant, budget: Option<f64>) {
    let elapsed = start.elapsed().as_secs_f64();
    eprintln!("criterion {criterion}: PASS ({elapsed:.2} s)");
    if let Some(limit) = budget {
        assert!(
            elapsed < limit,
            "criterion {criterion} exceeded its runtime budget: {elapsed:.2} s >= {limit} s"
        );
    }
}

/// Criterion 1: the projected field takes the value sign/(pi hbar) at the
/// reflection center, for every suite state and both centers, within
/// 1e-5/(pi hbar). Runtime < 10 s total at 256^2.
#[test]
fn criterion_01_spike_identity() {
    let start = Instant::now();
    let p = diffusion();
    let suite: Vec<(&str, WignerField)> = vec![
        ("coherent", coherent_field(256)),
        ("cat+", cat_field(Parity::Even, 0.0, 256)),
        ("cat-", cat_field(Parity::Odd, 0.0, 256)),
        (
            "decohered t0",
            heat_propagate(&cat_field(Parity::Odd, t0(), 256), t0(), &p).unwrap(),
        ),
        (
            "decohered 3t0",
            heat_propagate(&cat_field(Parity::Odd, 3.0 * t0(), 256), 3.0 * t0(), &p).unwrap(),
        ),
    ];
    let tolerance = 1e-5 * spike();
    for (name, field) in &suite {
        for x_center in [PhasePoint::ORIGIN, PhasePoint::new(0.3, -0.2)] {
            for parity in [Parity::Even, Parity::Odd] {
                match project_parity_at(field, x_center, parity, x_center) {
                    Ok(at_center) => {
                        let expect = parity.sign() * spike();
                        assert!(
                            (at_center - expect).abs() < tolerance,
                            "{name} {parity:?} at ({}, {}): {at_center} vs {expect}",
                            x_center.p,
                            x_center.q
                        );
                        // the full field inherits the spike when the center
                        // is a grid node
                        let projected = project_parity(field, x_center, parity).unwrap();
                        if x_center == PhasePoint::ORIGIN {
                            let g = projected.grid();
                            let node = projected.values()[(g.n_p() / 2, g.n_q() / 2)];
                            assert!(
                                (node - expect).abs() < tolerance,
                                "{name} {parity:?} node spike {node} vs {expect}"
                            );
                        }
                    }
                    Err(Error::ImpossibleOutcome { .. }) => {
                        // e.g. even projection of the pure odd cat at the
                        // origin: probability 0
                    }
                    Err(other) => panic!("{name} {parity:?}: unexpected error {other}"),
                }
            }
        }
    }
    report("1 (spike identity)", start, Some(10.0));
}

/// Criterion 2: projecting the coherent state at the origin reproduces the
/// closed-form cat node-wise to 1e-5. Runtime < 5 s.
#[test]
fn criterion_02_cat_reproduction() {
    let start = Instant::now();
    let field = coherent_field(256);
    for parity in [Parity::Even, Parity::Odd] {
        let projected = project_parity(&field, PhasePoint::ORIGIN, parity).unwrap();
        let params = CatParameters::new(Y, parity, HBAR).unwrap();
        let mut worst = 0.0f64;
        for ((i, j), &v) in projected.values().indexed_iter() {
            let expect = cat_wigner(&params, projected.grid().node(i, j));
            worst = worst.max((v - expect).abs());
        }
        assert!(worst < 1e-5, "{parity:?}: worst node deviation {worst}");
    }
    report("2 (cat reproduction)", start, Some(5.0));
}

/// Criterion 3: the spectral propagator matches the closed-form evolved cat
/// node-wise to 1e-4 at t in {t0/2, t0, 2 t0}. Runtime < 10 s.
#[test]
fn criterion_03_evolved_cat_equivalence() {
    let start = Instant::now();
    let p = diffusion();
    let w0 = cat_field(Parity::Odd, 2.0 * t0(), 256);
    for t in [0.5 * t0(), t0(), 2.0 * t0()] {
        let evolved = heat_propagate(&w0, t, &p).unwrap();
        let mut worst = 0.0f64;
        for ((i, j), &v) in evolved.values().indexed_iter() {
            let x = evolved.grid().node(i, j);
            worst = worst.max((v - evolved_cat_wigner(Y, t, COUPLING, HBAR, x)).abs());
        }
        assert!(worst < 1e-4, "t = {t}: worst node deviation {worst}");
    }
    report("3 (evolved-cat equivalence)", start, Some(10.0));
}

/// Criterion 4: the odd-cat positivity threshold is 0.5 within 1 percent.
/// Runtime < 30 s.
#[test]
fn criterion_04_positivity_threshold() {
    let start = Instant::now();
    let p = diffusion();
    let w0 = cat_field(Parity::Odd, 2.0 * t0(), 256);
    let found = positivity_threshold(&w0, &p, 4.0 * t0()).unwrap();
    assert!(
        (found.t_star - 0.5).abs() < 0.005,
        "threshold {} vs 0.5",
        found.t_star
    );
    report("4 (positivity threshold)", start, Some(30.0));
}

/// Criterion 5: odd projection of the t0-decohered cat needs a further t0
/// (within 5 percent) to turn positive again. Runtime < 60 s.
#[test]
fn criterion_05_re_decoherence() {
    let start = Instant::now();
    let p = diffusion();
    // margins sized for the pre-evolution plus the second threshold search
    let w0 = cat_field(Parity::Odd, 3.5 * t0(), 512);
    let at_t0 = heat_propagate(&w0, t0(), &p).unwrap();
    let projected = project_parity(&at_t0, PhasePoint::ORIGIN, Parity::Odd).unwrap();
    let ext = projected.min_max();
    assert!(
        (ext.min + spike()).abs() < 1e-4 * spike(),
        "projected minimum {} vs {}",
        ext.min,
        -spike()
    );
    let found = positivity_threshold(&projected, &p, 2.5 * t0()).unwrap();
    assert!(
        (found.t_star - t0()).abs() < 0.05 * t0(),
        "additional threshold {} vs {}",
        found.t_star,
        t0()
    );
    report("5 (re-decoherence)", start, Some(60.0));
}

/// Criterion 6: at the positivity threshold the even and odd outcomes are
/// equally likely to 1e-4.
#[test]
fn criterion_06_equal_probabilities_at_threshold() {
    let start = Instant::now();
    let p = diffusion();
    let at_t0 = heat_propagate(&cat_field(Parity::Odd, t0(), 256), t0(), &p).unwrap();
    let probs = parity_probabilities(&at_t0, PhasePoint::ORIGIN).unwrap();
    assert!((probs.even - 0.5).abs() < 1e-4, "p+ = {}", probs.even);
    assert!((probs.odd - 0.5).abs() < 1e-4, "p- = {}", probs.odd);
    report("6 (equal probabilities at threshold)", start, None);
}

/// Criterion 7: Fock-oracle equivalence (N = 60) on a 32-point probe set to
/// 1e-4, plus the four affine group relations to 1e-8 on the protected
/// subblock over 50 seeded draws. Runtime < 60 s.
#[test]
fn criterion_07_oracle_equivalence() {
    use rand::{Rng, SeedableRng};
    let start = Instant::now();
    let dim = 60;

    let field = cat_field(Parity::Odd, 0.0, 256);
    let rho = fock::cat_density(Y, Parity::Odd, dim, HBAR).unwrap();
    let grid = *field.grid();
    let (ci, cj) = (grid.n_p() / 2, grid.n_q() / 2);
    let step = (0.1 / grid.dq()).round() as isize;
    let mut checked = 0;
    'outer: for di in [-3isize, -2, -1, 0, 1, 2] {
        for dj in [-3isize, -1, 0, 1, 3, 5, 7, 9] {
            let (i, j) = ((ci as isize + di * step) as usize, (cj as isize + dj * step) as usize);
            let x = grid.node(i, j);
            if x.norm() > 1.0 {
                continue;
            }
            let oracle = fock::wigner_point(&rho, x).unwrap();
            assert!(
                (oracle - field.values()[(i, j)]).abs() < 1e-4,
                "wigner probe at ({}, {})",
                x.p,
                x.q
            );
            checked += 1;
            if checked >= 32 {
                break 'outer;
            }
        }
    }
    assert!(checked >= 32, "only {checked} probes inside the safe radius");

    // chord values compared on the chord lattice, where the transform is
    // quadrature-exact
    let chord = wigner_to_chord(&field, 1).unwrap();
    let cg = *chord.grid();
    let (xi_ci, xi_cj) = (cg.n_p() / 2, cg.n_q() / 2);
    for (di, dj) in [
        (0isize, 0isize),
        (1, 0),
        (0, 1),
        (2, 2),
        (-3, 1),
        (4, -2),
        (0, 5),
        (-6, 0),
        (7, 7),
        (0, -9),
        (11, 0),
        (-4, 12),
    ] {
        let (i, j) = ((xi_ci as isize + di) as usize, (xi_cj as isize + dj) as usize);
        let xi = cg.node(i, j);
        if xi.norm_sq() / (2.0 * HBAR) > dim as f64 / 4.0 {
            continue;
        }
        let oracle = fock::chord_point(&rho, xi).unwrap();
        assert!(
            (chord.values()[(i, j)] - oracle).norm() < 1e-4,
            "chord probe at ({}, {})",
            xi.p,
            xi.q
        );
    }

    // projection equivalence at an off-origin node center
    let x_center = grid.node(ci + 9, cj - 13);
    let ours = project_parity(&field, x_center, Parity::Even).unwrap();
    let (oracle_rho, _) = fock::project_density(&rho, x_center, Parity::Even).unwrap();
    for (di, dj) in [(0isize, 0isize), (2, 1), (-4, 3), (5, -2), (-1, -6), (0, 8)] {
        let (i, j) = ((ci as isize + di * step) as usize, (cj as isize + dj * step) as usize);
        let x = grid.node(i, j);
        if x.norm() > 1.0 {
            continue;
        }
        let oracle = fock::wigner_point(&oracle_rho, x).unwrap();
        assert!(
            (oracle - ours.values()[(i, j)]).abs() < 1e-4,
            "projection probe at ({}, {})",
            x.p,
            x.q
        );
    }

    // affine group relations on seeded draws
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let radius = 0.12 * (HBAR * dim as f64).sqrt();
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| loop {
        let p = rng.random_range(-1.0..1.0) * radius;
        let q = rng.random_range(-1.0..1.0) * radius;
        let pt = PhasePoint::new(p, q);
        if pt.norm() <= radius {
            return pt;
        }
    };
    for _ in 0..50 {
        let res = fock::affine_relation_residuals(
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            dim,
            HBAR,
        )
        .unwrap();
        for (k, r) in res.iter().enumerate() {
            assert!(*r < 1e-8, "relation {k} residual {r}");
        }
    }
    report("7 (oracle equivalence)", start, Some(60.0));
}

/// Criterion 8: Monte Carlo estimates converge as 1/sqrt(n) (log-log slope
/// -0.5 +- 0.1 of the RMS error over 20 seeded trials) and at least 95
/// percent of trials land within three standard errors of the truth.
#[test]
fn criterion_08_monte_carlo_estimator() {
    let start = Instant::now();
    let field = coherent_field(256);
    let truth = coherent_wigner(Y, HBAR, PhasePoint::ORIGIN);
    let sizes = [1_000u64, 10_000, 100_000];
    let seeds: Vec<u64> = (0..20).collect();

    let mut log_rms = Vec::new();
    let mut within = 0usize;
    let mut total = 0usize;
    for &n in &sizes {
        let mut sq_sum = 0.0;
        for &seed in &seeds {
            let record = simulate_measurements(&field, PhasePoint::ORIGIN, n, seed).unwrap();
            let (estimate, std_error) = estimate_wigner_point(&record, HBAR).unwrap();
            sq_sum += (estimate - truth) * (estimate - truth);
            total += 1;
            if (estimate - truth).abs() <= 3.0 * std_error {
                within += 1;
            }
        }
        log_rms.push(((n as f64).log10(), (sq_sum / seeds.len() as f64).sqrt().log10()));
    }

    // least-squares slope through the three (log n, log rms) points
    let mean_x: f64 = log_rms.iter().map(|p| p.0).sum::<f64>() / log_rms.len() as f64;
    let mean_y: f64 = log_rms.iter().map(|p| p.1).sum::<f64>() / log_rms.len() as f64;
    let slope: f64 = log_rms.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum::<f64>()
        / log_rms.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum::<f64>();
    assert!(
        (slope + 0.5).abs() < 0.1,
        "convergence slope {slope} vs -0.5"
    );
    let fraction = within as f64 / total as f64;
    assert!(
        fraction >= 0.95,
        "only {within}/{total} estimates within 3 standard errors"
    );
    report("8 (Monte Carlo estimator)", start, None);
}

/// Criterion 9: even projection of the decohered cat keeps strictly negative
/// minima at t in {t0, 2 t0, 4 t0}; the exact minima are pinned regression
/// values from the first verified run.
#[test]
fn criterion_09_conjecture_probe() {
    let start = Instant::now();
    let p = diffusion();
    let eps = negativity_epsilon(HBAR);
    // minima recorded on the first verified run (512^2 grids sized per t)
    let pinned = [
        (1.0 * t0(), -2.022872008664),
        (2.0 * t0(), -1.609684779034),
        (4.0 * t0(), -1.047965628148),
    ];
    for (t, pin) in pinned {
        let w0 = cat_field(Parity::Odd, t, 512);
        let evolved = heat_propagate(&w0, t, &p).unwrap();
        let projected = project_parity(&evolved, PhasePoint::ORIGIN, Parity::Even).unwrap();
        let min = projected.min_max().min;
        let volume = negativity_volume(&projected);
        eprintln!("conjecture probe t = {t}: min W+ = {min:.12e}, negativity volume = {volume:.12e}");
        assert!(
            min < -eps,
            "t = {t}: min W+ = {min} fails to undercut -{eps}"
        );
        assert!(volume > 0.0);
        assert!(
            (min - pin).abs() < 1e-9,
            "t = {t}: pinned minimum drifted: {min} vs {pin}"
        );
    }
    report("9 (conjecture probe)", start, None);
}

/// Criterion 10: structural invariants — transform roundtrip, normalization
/// drift, projector idempotence, decomposition identity — plus the four
/// figure pipelines with their quantitative anchors.
#[test]
fn criterion_10_structural_invariants() {
    let start = Instant::now();
    let p = diffusion();

    // transform roundtrip <= 1e-10 relative to the spike scale
    let w = cat_field(Parity::Odd, 0.0, 256);
    let back = chord_to_wigner(&wigner_to_chord(&w, 2).unwrap()).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in w.values().iter().zip(back.values().iter()) {
        worst = worst.max((a - b).abs());
    }
    assert!(worst < 1e-10 * spike(), "roundtrip deviation {worst}");

    // normalization drift <= 1e-8 through projection and propagation
    let evolved = heat_propagate(&cat_field(Parity::Odd, t0(), 256), t0(), &p).unwrap();
    assert!((evolved.integrate() - 1.0).abs() < 1e-8);
    let projected = project_parity(&evolved, PhasePoint::ORIGIN, Parity::Odd).unwrap();
    assert!((projected.integrate() - 1.0).abs() < 1e-8);

    // projector idempotence <= 1e-6 node-wise
    let again = project_parity(&projected, PhasePoint::ORIGIN, Parity::Odd).unwrap();
    let mut drift = 0.0f64;
    for (a, b) in projected.values().iter().zip(again.values().iter()) {
        drift = drift.max((a - b).abs());
    }
    assert!(drift < 1e-6, "idempotence drift {drift}");

    // decomposition identity <= 1e-8 node-wise
    let field = coherent_field(256);
    let x_center = PhasePoint::new(0.3, -0.2);
    let probs = parity_probabilities(&field, x_center).unwrap();
    let plus = project_parity(&field, x_center, Parity::Even).unwrap();
    let minus = project_parity(&field, x_center, Parity::Odd).unwrap();
    let grid = *field.grid();
    let mut worst_mix = 0.0f64;
    for ((i, j), &v) in field.values().indexed_iter() {
        let x = grid.node(i, j);
        let sym = 0.5 * (v + field.value_at_or_zero(x_center * 2.0 - x));
        let mix = probs.even * plus.values()[(i, j)] + probs.odd * minus.values()[(i, j)];
        worst_mix = worst_mix.max((mix - sym).abs());
    }
    assert!(worst_mix < 1e-8, "decomposition deviation {worst_mix}");

    // figure pipelines with their quantitative anchors:
    // odd cat (minimum -1/pi hbar at the origin)
    let fig1 = cat_field(Parity::Odd, 0.0, 256);
    let e1 = fig1.min_max();
    assert!((e1.min + spike()).abs() < 1e-6 * spike());
    assert!(e1.argmin.norm() < 1e-12);

    // threshold mixture (positive everywhere, zero at the origin)
    let fig2 = heat_propagate(&cat_field(Parity::Odd, t0(), 256), t0(), &p).unwrap();
    assert!(fig2.min_max().min >= -negativity_epsilon(HBAR));
    let g2 = fig2.grid();
    assert!(fig2.values()[(g2.n_p() / 2, g2.n_q() / 2)].abs() < 1e-8);

    // odd measurement on the mixture (spike restored, fringes only partly
    // regenerated: shallower first negative ring than the pure cat's)
    let fig3 = project_parity(&fig2, PhasePoint::ORIGIN, Parity::Odd).unwrap();
    let g3 = *fig3.grid();
    assert!((fig3.values()[(g3.n_p() / 2, g3.n_q() / 2)] + spike()).abs() < 1e-4 * spike());
    let fringe_offset = (PI * HBAR / Y.norm() / g3.dp()).round() as usize; // one fringe wavelength out
    let pure_fringe = fig1.values()[(g3.n_p() / 2, g3.n_q() / 2)].min(
        fig1.values()[(g3.n_p() / 2 + fringe_offset, g3.n_q() / 2)],
    );
    let regen_fringe = fig3.values()[(g3.n_p() / 2 + fringe_offset, g3.n_q() / 2)];
    assert!(
        regen_fringe > pure_fringe,
        "regenerated fringe {regen_fringe} not shallower than pure {pure_fringe}"
    );

    // even measurement far beyond the threshold (diagonal profile: central
    // spike +1/pi hbar with small negative ripples)
    let far = heat_propagate(&cat_field(Parity::Odd, 3.0 * t0(), 512), 3.0 * t0(), &p).unwrap();
    let fig4 = project_parity(&far, PhasePoint::ORIGIN, Parity::Even).unwrap();
    let g4 = *fig4.grid();
    let center = fig4.values()[(g4.n_p() / 2, g4.n_q() / 2)];
    assert!((center - spike()).abs() < 1e-4 * spike());
    let mut ripple_min = f64::INFINITY;
    for k in 0..g4.n_p() / 2 {
        ripple_min = ripple_min.min(fig4.values()[(g4.n_p() / 2 + k, g4.n_q() / 2 + k)]);
    }
    assert!(
        ripple_min < -negativity_epsilon(HBAR),
        "diagonal profile carries no negative ripples: {ripple_min}"
    );

    report("10 (structural invariants + figure anchors)", start, None);
}
