use std::f64::consts::PI;

use gabic::bic::{find_bics, BicCriteria, BicProfile};
use gabic::lattice::{assemble_hamiltonian, diagonalize, LatticeHamiltonian};
use gabic::markov::{build_effective_matrix, count_bics, eigen2, DEFAULT_BIC_TOL};
use gabic::{Geometry, ModelParams};

const GEOMETRIES: [(usize, usize); 3] = [(12, 4), (14, 4), (17, 5)];
const PHASES: [f64; 5] = [0.0, PI / 3.0, PI / 2.0, PI, 4.0 * PI / 3.0];

fn lattice_bics(size: usize, delta: usize, phi: f64, nc: usize) -> (LatticeHamiltonian, Vec<BicProfile>) {
    let g = Geometry::centered(size, delta, nc).unwrap();
    let h = assemble_hamiltonian(&ModelParams::default().with_phi(phi), &g).unwrap();
    let found = find_bics(&diagonalize(&h).unwrap(), &BicCriteria::default()).unwrap();
    (h, found)
}

#[test]
fn lattice_count_matches_markov_count() {
    let mut mismatches = Vec::new();
    for (size, delta) in GEOMETRIES {
        for phi in PHASES {
            let p = ModelParams::default().with_phi(phi);
            let g = Geometry::centered(size, delta, 1200).unwrap();
            let markov = count_bics(eigen2(&build_effective_matrix(&p, &g)).values(), DEFAULT_BIC_TOL);
            let (_, found) = lattice_bics(size, delta, phi, 1200);
            if markov != found.len() {
                mismatches.push((size, phi, markov, found.len()));
            }
        }
    }
    assert!(mismatches.is_empty(), "(N, phi, markov, lattice): {mismatches:?}");
}

#[test]
fn profiles_are_eigenstates_with_consistent_concurrence() {
    for (size, delta) in GEOMETRIES {
        let (h, found) = lattice_bics(size, delta, PI, 400);
        for b in &found {
            assert!(b.residual(&h) < 1e-9);
            assert!((b.concurrence - 2.0 * (b.alpha1 * b.alpha2).norm()).abs() < 1e-10);
            assert!(b.rho_atoms.validate().is_ok());
            assert!((b.rho_atoms.ground_population() - b.photon_weight()).abs() < 1e-12);
        }
    }
}

#[test]
fn stable_under_doubling_the_lattice() {
    let mut unstable = Vec::new();
    for (size, delta) in GEOMETRIES {
        for phi in [0.0, PI] {
            let (_, small) = lattice_bics(size, delta, phi, 600);
            let (_, large) = lattice_bics(size, delta, phi, 1200);
            if small.len() != large.len() {
                unstable.push(format!("N={size} phi={phi:.3}: count {} vs {}", small.len(), large.len()));
                continue;
            }
            for (a, b) in small.iter().zip(&large) {
                if (a.concurrence - b.concurrence).abs() > 1e-3 {
                    unstable.push(format!("N={size} phi={phi:.3}: C {:.4} vs {:.4}", a.concurrence, b.concurrence));
                }
            }
        }
    }
    assert!(unstable.is_empty(), "{unstable:?}");
}

#[test]
fn strict_localization_keeps_only_exact_bics() {
    // With the window holding nearly all weight only the exact N = 14 state
    // survives; quasi-bound states leak into the far field.
    let strict = BicCriteria { min_localized_fraction: 0.99, ..BicCriteria::default() };
    let spectrum = |size, delta, phi| {
        let g = Geometry::centered(size, delta, 1200).unwrap();
        diagonalize(&assemble_hamiltonian(&ModelParams::default().with_phi(phi), &g).unwrap()).unwrap()
    };
    let exact = find_bics(&spectrum(14, 4, PI), &strict).unwrap();
    assert_eq!(exact.len(), 1);
    assert!(exact[0].localized_fraction > 0.9999);
    assert!(find_bics(&spectrum(17, 5, 0.0), &strict).unwrap().is_empty());
}
