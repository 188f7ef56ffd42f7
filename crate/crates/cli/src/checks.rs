//! `oracle-check` suites. Each check prints one line and the suite reports
//! whether all of them passed.

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use annulus_core::geometry::{convex_hull, crossing_angles, largest_empty_circle, smallest_enclosing_circle, Crossing};
use annulus_core::oracle::{brute_force_sec, compare_family, grid_family, lec_grid, membership_scan, rel_a_bruteforce};
use annulus_core::reliability::{rel_a_exact, rel_a_mc, FailureModel};
use annulus_core::{buffer_neighborhoods, unbuffered_neighborhoods, DiskGraph, Point};

const GRID: usize = 800;

fn report(name: &str, ok: bool, detail: String) -> bool {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, side: f64) -> Vec<Point> {
    (0..n).map(|_| Point::new(rng.random_range(0.0..side), rng.random_range(0.0..side))).collect()
}

pub fn sweeps(instances: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    for i in 0..instances {
        let n = rng.random_range(4..=10);
        let pts = random_points(&mut rng, n, 3.0);
        let b = [0.3, 0.5, 0.65][i % 3];

        let fam = buffer_neighborhoods(&pts, b)?;
        let grid = grid_family(&pts, Some(b), GRID, 1.0 + b);
        let cmp = compare_family(&fam, &grid, &pts, Some(b), 2.0);
        all &= report(
            &format!("buffered #{i} n={n} b={b}"),
            cmp.agrees(),
            format!("{} sets, missing {:?}, unsound {:?}, thin {}", fam.len(), cmp.missing, cmp.unsound, cmp.thin),
        );

        let fam = unbuffered_neighborhoods(&pts)?;
        let grid = grid_family(&pts, None, GRID, 1.5);
        let cmp = compare_family(&fam, &grid, &pts, None, 2.0);
        let bound = 4 * n * n;
        all &= report(
            &format!("unbuffered #{i} n={n}"),
            cmp.agrees() && fam.len() <= bound,
            format!("{} sets (bound {bound}), missing {:?}, unsound {:?}", fam.len(), cmp.missing, cmp.unsound),
        );
    }
    Ok(all)
}

fn random_graph(rng: &mut ChaCha8Rng, max_edges: usize) -> DiskGraph {
    loop {
        let n = rng.random_range(3..=9);
        let side = rng.random_range(1.0..2.5);
        if let Ok(g) = DiskGraph::build(random_points(rng, n, side)) {
            if g.edge_count() <= max_edges {
                return g;
            }
        }
    }
}

pub fn reliability(instances: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = FailureModel::uniform(0.9)?;
    let mut all = true;
    let mut covered = 0;
    for i in 0..instances {
        let g = random_graph(&mut rng, 16);
        let exact = rel_a_exact(&g, &model)?;
        let brute = rel_a_bruteforce(&g, 0.9);
        all &= report(
            &format!("exact #{i} m={}", g.edge_count()),
            (exact - brute).abs() < 1e-12,
            format!("recursive {exact:.12}, exhaustive {brute:.12}"),
        );
        let est = rel_a_mc(&g, &model, 100_000, rng.random())?;
        covered += usize::from(est.covers(exact));
    }
    let rate = covered as f64 / instances.max(1) as f64;
    all &= report("monte carlo coverage", rate >= 0.9, format!("{covered}/{instances} intervals cover the exact value"));
    Ok(all)
}

pub fn geometry(instances: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    for i in 0..instances {
        let pivot = random_points(&mut rng, 1, 2.0)[0];
        let w = random_points(&mut rng, 1, 2.0)[0];
        let rho = rng.random_range(0.2..1.0);
        let r = rng.random_range(0.2..1.0);
        let scan = membership_scan(pivot, w, rho, r, 200_000);
        let ok = match crossing_angles(pivot, w, rho, r)? {
            Crossing::Arc { enter, exit } => {
                scan.len() == 2
                    && scan.iter().all(|&(t, inside)| {
                        let expected = if inside { enter } else { exit };
                        let diff = (t - expected).rem_euclid(std::f64::consts::TAU);
                        diff.min(std::f64::consts::TAU - diff) < 1e-3
                    })
            }
            _ => scan.is_empty(),
        };
        all &= report(&format!("crossing #{i}"), ok, format!("{} transitions in scan", scan.len()));

        let n = rng.random_range(3..=12);
        let pts = random_points(&mut rng, n, 3.0);
        let sec = smallest_enclosing_circle(&pts)?;
        let brute = brute_force_sec(&pts).expect("nonempty");
        all &= report(
            &format!("enclosing circle #{i} n={n}"),
            (sec.radius - brute.radius).abs() < 1e-9,
            format!("incremental {:.9}, brute force {:.9}", sec.radius, brute.radius),
        );

        let hull = convex_hull(&pts);
        if hull.len() >= 3 {
            let lec = largest_empty_circle(&pts, &hull)?;
            let grid = lec_grid(&pts, &hull, 400);
            all &= report(
                &format!("empty circle #{i} n={n}"),
                lec.radius + 1e-9 >= grid && lec.radius - grid < 0.02,
                format!("exact {:.6}, grid {:.6}", lec.radius, grid),
            );
        }
    }
    Ok(all)
}
