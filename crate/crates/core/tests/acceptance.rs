//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Criterion 10 of the verification plan is the set of compactness and
//! surjectivity statements that have no desk-scale reproduction; they are
//! represented by the classifier and arithmetic suites of criteria 7 and 8
//! and carry no test of their own beyond the note below.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use vortex_core::grid::PolarGrid;
use vortex_core::kw::{
    self, initial_guess_flat, initial_guess_smooth, solve_kw, solve_kw_from, SolverConfig,
};
use vortex_core::moduli::{
    bubble_criterion, classify_limit_d1, classify_stratum, dim_moduli, embed_stratum,
    index_formula, BubbleSample, BubbleSequence, BubbleVerdict, BubbleZero, D1Class,
    D1LimitInput, D1Sample, IndexConvention,
};
use vortex_core::poly::{CPoly, ModuliPoint, NPair};
use vortex_core::qh::{
    kirwan_classical, kirwan_q, kirwan_q_lambda, specialize_q_zero, EquivariantElement,
    QHElement,
};
use vortex_core::radial::radial_oracle;
use vortex_core::vortex::{bogomolny_defect, total_energy, VortexSolution};
use vortex_core::Complex64;

// Small deterministic generator for the randomized criteria.
struct Lcg(u64);

impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn unit_disk(&mut self) -> Complex64 {
        let r = self.next_f64().sqrt();
        let t = 2.0 * PI * self.next_f64();
        Complex64::from_polar(r, t)
    }

    fn complex_box(&mut self, scale: f64) -> Complex64 {
        Complex64::new(
            scale * (2.0 * self.next_f64() - 1.0),
            scale * (2.0 * self.next_f64() - 1.0),
        )
    }
}

fn monomial_pair(n: usize, d: usize) -> NPair {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); d + 1];
    coeffs[d] = Complex64::new(1.0, 0.0);
    let mut polys = vec![CPoly::new(coeffs)];
    for _ in 1..n {
        polys.push(CPoly::constant(Complex64::new(1.0, 0.0)));
    }
    NPair::new(polys).unwrap()
}

/// Random stable pair with all roots inside the unit disk: a monic degree-d
/// component plus a monic degree-(d-1) component.
fn random_pair(rng: &mut Lcg, d: usize) -> NPair {
    let roots_a: Vec<Complex64> = (0..d).map(|_| rng.unit_disk()).collect();
    let roots_b: Vec<Complex64> = (0..d.saturating_sub(1)).map(|_| rng.unit_disk()).collect();
    NPair::new(vec![CPoly::from_roots(&roots_a), CPoly::from_roots(&roots_b)]).unwrap()
}

fn grid(r: f64, n_r: usize, n_t: usize) -> Arc<PolarGrid> {
    Arc::new(PolarGrid::new(r, n_r, n_t, 1.5).unwrap())
}

#[test]
fn criterion_01_oracle_equivalence() {
    let cfg = SolverConfig::default();
    let g = grid(8.0, 256, 128);
    for d in [1usize, 2, 3] {
        let pair = monomial_pair(1, d);
        let started = Instant::now();
        let h = solve_kw(&pair, &g, &cfg).unwrap();
        let elapsed = started.elapsed();
        assert!(
            elapsed.as_secs_f64() <= 60.0,
            "d = {d}: solve took {elapsed:?}"
        );
        let oracle = radial_oracle(d, 8.0, 4096).unwrap();
        let mut sup: f64 = 0.0;
        for i in 0..=g.n_r() {
            let r = g.radius(i);
            if r > 4.0 {
                break;
            }
            let expect = oracle.sample(r);
            let sectors = if i == 0 { 1 } else { g.n_theta() };
            for j in 0..sectors {
                sup = sup.max((h.get(i, j) - expect).abs());
            }
        }
        assert!(sup <= 1e-4, "d = {d}: 2-D vs oracle sup {sup:e}");
        eprintln!(
            "  d = {d}: sup|h - oracle| = {sup:.2e} on [0, R/2], solve {:.2}s",
            elapsed.as_secs_f64()
        );
    }
    eprintln!("[PASS] criterion 1: oracle equivalence at defaults (256x128, R=8), d = 1..3");
}

#[test]
fn criterion_02_energy_quantization() {
    let cfg = SolverConfig::default();
    let mut per_n_energy = Vec::new();
    for n in [1usize, 2] {
        let mut energies = Vec::new();
        for d in 0..=3usize {
            let pair = monomial_pair(n, d);
            let g = grid(8.0, 256, 128);
            let sol = VortexSolution::solve(&pair, &g, &cfg).unwrap();
            let report = total_energy(&sol).unwrap();
            let expected = 2.0 * PI * d as f64;
            let tol = 0.01 * 2.0 * PI * (d as f64).max(1.0);
            assert!(
                (report.total() - expected).abs() <= tol,
                "N = {n}, d = {d}: E = {} vs {expected}",
                report.total()
            );
            eprintln!(
                "  N = {n}, d = {d}: E = {:.5} (tail {:.2e}), target {expected:.5}",
                report.total(),
                report.tail
            );
            energies.push(report.total());
        }
        per_n_energy.push(energies);
    }
    for (n, energies) in per_n_energy.iter().enumerate() {
        for d in 2..=3usize {
            let ratio = energies[d] / energies[1];
            assert!(
                (ratio - d as f64).abs() <= 0.005 * d as f64,
                "N = {}: E({d})/E(1) = {ratio}",
                n + 1
            );
        }
    }
    eprintln!("[PASS] criterion 2: E = 2πd within 1% and E(d)/E(1) = d within 0.5%, N = 1, 2");
}

#[test]
fn criterion_03_uniqueness() {
    let mut rng = Lcg(20260808);
    let cfg = SolverConfig::default();
    for trial in 0..5 {
        let d = 1 + (trial % 2);
        let pair = random_pair(&mut rng, d);
        let g = grid(12.0, 96, 64);
        let w = kw::weight_field(&pair, &g);
        let h1 = solve_kw_from(&pair, &g, &cfg, initial_guess_smooth(&w)).unwrap();
        let h2 = solve_kw_from(&pair, &g, &cfg, initial_guess_flat(&w).unwrap()).unwrap();
        let diff = h1.max_diff(&h2);
        assert!(diff <= 1e-8, "trial {trial}: guess dependence {diff:e}");
        eprintln!("  trial {trial} (d = {d}): |h_smooth - h_flat| = {diff:.2e}");
    }
    eprintln!("[PASS] criterion 3: two initial guesses agree to 1e-8 on 5 randomized pairs");
}

#[test]
fn criterion_04_energy_decay() {
    let mut rng = Lcg(4138);
    let cfg = SolverConfig::default();
    for trial in 0..5 {
        let d = 1 + (trial % 2);
        let pair = random_pair(&mut rng, d);
        let g = grid(16.0, 256, 128);
        let sol = VortexSolution::solve(&pair, &g, &cfg).unwrap();
        let report = total_energy(&sol).unwrap();
        assert!(
            report.decay_slope <= -3.5,
            "trial {trial}: slope {}",
            report.decay_slope
        );
        eprintln!("  trial {trial} (d = {d}): log-log slope {:.2}", report.decay_slope);
    }
    eprintln!("[PASS] criterion 4: energy density slope ≤ -3.5 on [R/4, R/2], 5 randomized pairs");
}

#[test]
fn criterion_05_symmetries() {
    let mut rng = Lcg(555_001);
    let cfg = SolverConfig::default();
    for trial in 0..5 {
        let pair = random_pair(&mut rng, 1 + (trial % 2));
        let g = grid(12.0, 96, 64);

        // C* shift: h(c · pair) = h(pair) + log|c|.
        let h = solve_kw(&pair, &g, &cfg).unwrap();
        let c = rng.complex_box(2.0) + Complex64::new(2.5, 0.0);
        let hs = solve_kw(&pair.scaled(c).unwrap(), &g, &cfg).unwrap();
        let shift = c.norm().ln();
        let cstar: f64 = h
            .values()
            .iter()
            .zip(hs.values())
            .map(|(a, b)| (a + shift - b).abs())
            .fold(0.0, f64::max);
        assert!(cstar <= 1e-8, "trial {trial}: C* violation {cstar:e}");

        // Translation: solve ψ(z - a) on the grid recentered at a and
        // compare on the overlap disk.
        let a = rng.complex_box(1.5);
        let translated = pair.translated(a);
        let g2 = Arc::new(g.recentered(a));
        let ht = solve_kw(&translated, &g2, &cfg).unwrap();
        let mut trans: f64 = 0.0;
        for i in 0..=g.n_r() {
            if g.radius(i) > g.r_max() - a.norm() {
                break;
            }
            let sectors = if i == 0 { 1 } else { g.n_theta() };
            for j in 0..sectors {
                trans = trans.max((h.get(i, j) - ht.get(i, j)).abs());
            }
        }
        assert!(trans <= 1e-4, "trial {trial}: translation violation {trans:e}");
        eprintln!("  trial {trial}: C* {cstar:.2e}, translation {trans:.2e}");
    }
    eprintln!("[PASS] criterion 5: C*-shift to 1e-8 and translation equivariance to 1e-4");
}

#[test]
fn criterion_06_bogomolny_order() {
    let cfg = SolverConfig::default();
    let pair = NPair::new(vec![
        CPoly::new(vec![Complex64::new(-0.5, 0.2), Complex64::new(1.0, 0.0)]),
        CPoly::new(vec![
            Complex64::new(0.3, -0.1),
            Complex64::new(0.0, 0.4),
            Complex64::new(1.0, 0.0),
        ]),
    ])
    .unwrap();
    let mut defects = Vec::new();
    for level in 0..3 {
        let g = grid(12.0, 64 << level, 32 << level);
        let sol = VortexSolution::solve(&pair, &g, &cfg).unwrap();
        defects.push(bogomolny_defect(&sol));
    }
    let order1 = (defects[0] / defects[1]).log2();
    let order2 = (defects[1] / defects[2]).log2();
    assert!(
        order1 >= 1.8 && order2 >= 1.8,
        "orders {order1:.2}, {order2:.2} (defects {defects:?})"
    );
    eprintln!(
        "[PASS] criterion 6: curvature identity dα = -(1/2)(e^(-2h)W - 1) converges at orders {order1:.2}, {order2:.2}"
    );
}

#[test]
fn criterion_07_moduli_arithmetic() {
    for n in 1..=8usize {
        for d in 0..=30usize {
            assert_eq!(
                dim_moduli(n, d),
                index_formula(n, d, IndexConvention::DetLoop),
                "N = {n}, d = {d}"
            );
        }
    }

    let mut rng = Lcg(777);
    let mut round_trips = 0;
    for n in 1..=4usize {
        for d in 0..=5usize {
            for k in 0..=d {
                for _ in 0..3 {
                    // Random N_k representative: top block forced nonzero.
                    let mut raw: Vec<Complex64> =
                        (0..n * (k + 1)).map(|_| rng.complex_box(1.0)).collect();
                    raw[0] += Complex64::new(2.0, 0.0);
                    let point = ModuliPoint::canonicalize(n, k, &raw).unwrap();
                    let embedded = embed_stratum(&point, d).unwrap();
                    let back = classify_stratum(n, d, &embedded).unwrap();
                    assert_eq!(back.stratum_k, k, "N = {n}, d = {d}, k = {k}");
                    let dist = back.primary.max_coord_distance(&point);
                    assert!(dist < 1e-12, "representative drift {dist:e}");
                    round_trips += 1;
                }
            }
        }
    }
    eprintln!(
        "[PASS] criterion 7: dim = index(DetLoop) for N ≤ 8, d ≤ 30; {round_trips} filtration round-trips"
    );
}

#[test]
fn criterion_08_degeneration_classifiers() {
    let mut rng = Lcg(88_000_001);

    let random_unit = |rng: &mut Lcg, n: usize| -> Vec<Complex64> {
        let v: Vec<Complex64> = (0..n).map(|_| rng.complex_box(1.0)).collect();
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|c| c / norm).collect()
    };

    // T1: distinct classes.
    for _ in 0..10 {
        let input = D1LimitInput {
            a: random_unit(&mut rng, 3),
            b: random_unit(&mut rng, 3),
            ratio_limit: None,
            samples: Vec::new(),
        };
        assert_eq!(classify_limit_d1(&input).unwrap().class, D1Class::T1);
    }

    // T2 and S: b_i = normalize(a + ε_i y) with y ⊥ a; w_i = ε_i gives a
    // finite ratio, w_i = ε_i² sends it to infinity.
    for case in 0..20 {
        let n = 2 + (case % 2);
        let a = random_unit(&mut rng, n);
        let raw = random_unit(&mut rng, n);
        let inner: Complex64 = a.iter().zip(&raw).map(|(x, y)| x.conj() * y).sum();
        let y: Vec<Complex64> = a.iter().zip(&raw).map(|(x, v)| v - inner * x).collect();
        let squared = case >= 10;
        let samples: Vec<D1Sample> = [2.0f64, 4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&k| {
                let eps = 1.0 / k;
                let b_raw: Vec<Complex64> =
                    a.iter().zip(&y).map(|(x, v)| x + eps * v).collect();
                let norm: f64 = b_raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                D1Sample {
                    a: a.clone(),
                    b: b_raw.into_iter().map(|c| c / norm).collect(),
                    w: Complex64::new(if squared { eps * eps } else { eps }, 0.0),
                }
            })
            .collect();
        let input = D1LimitInput {
            a: a.clone(),
            b: a.clone(),
            ratio_limit: None,
            samples,
        };
        let verdict = classify_limit_d1(&input).unwrap();
        if squared {
            assert_eq!(verdict.class, D1Class::S, "case {case}");
        } else {
            assert_eq!(verdict.class, D1Class::T2, "case {case}");
            let v = verdict.tangent.unwrap();
            let drift: f64 = v
                .iter()
                .zip(&y)
                .map(|(got, want)| (got - want).norm())
                .fold(0.0, f64::max);
            assert!(drift < 0.05, "case {case}: tangent drift {drift}");
        }
    }

    // Bubbling criterion on the construction family, all N ≤ 3, d ≤ 3.
    let ks = [8.0f64, 16.0, 32.0, 64.0];
    let mut families = 0;
    for n in 1..=3usize {
        for d in 1..=3usize {
            let degrees: Vec<usize> = (0..n).map(|j| if j == 0 { d } else { d.saturating_sub(j) }).collect();
            let roots: Vec<Vec<Complex64>> = degrees
                .iter()
                .map(|&dj| (0..dj).map(|_| rng.unit_disk()).collect())
                .collect();
            let amps: Vec<f64> = (0..n).map(|_| 0.5 + rng.next_f64()).collect();
            for concentrate in [true, false] {
                let samples: Vec<BubbleSample> = ks
                    .iter()
                    .map(|&k| {
                        let mut zeros = Vec::new();
                        let mut f_abs = Vec::new();
                        for j in 0..n {
                            let mut zj: Vec<BubbleZero> = roots[j]
                                .iter()
                                .map(|&r| BubbleZero {
                                    rho: if concentrate { r / k } else { r + Complex64::new(1.5, 0.0) },
                                    m: 1,
                                })
                                .collect();
                            for _ in degrees[j]..d {
                                zj.push(BubbleZero {
                                    rho: Complex64::new(1.0, 0.0),
                                    m: 1,
                                });
                            }
                            zeros.push(zj);
                            f_abs.push(k.powi(degrees[j] as i32 - d as i32) * amps[j]);
                        }
                        BubbleSample {
                            lambda: k,
                            z: Complex64::new(0.0, 0.0),
                            zeros,
                            f_abs,
                        }
                    })
                    .collect();
                let report = bubble_criterion(&BubbleSequence { samples }).unwrap();
                if concentrate {
                    assert_eq!(
                        report.verdict,
                        BubbleVerdict::Nontrivial,
                        "N = {n}, d = {d}"
                    );
                } else {
                    assert_eq!(report.verdict, BubbleVerdict::Trivial, "N = {n}, d = {d}");
                    assert!(report.trivial_by_convention);
                }
                families += 1;
            }
        }
    }
    eprintln!(
        "[PASS] criterion 8: T1/T2/S classified (30 families), bubble criterion on {families} construction families"
    );
}

#[test]
fn criterion_09_quantum_kirwan() {
    // Homomorphism, exhaustively for a + b ≤ 4N.
    for n in 2..=5usize {
        for a in 0..=4 * n {
            for b in 0..=(4 * n - a) {
                let lhs = kirwan_q(a + b, n);
                let rhs = kirwan_q(a, n).mul(&kirwan_q(b, n)).unwrap();
                assert_eq!(lhs, rhs, "N = {n}: κ(u^{a}) κ(u^{b}) ≠ κ(u^{})", a + b);
            }
        }
    }

    // Kernel: q - u^N and 50 random multiples map to zero exactly.
    let mut rng = Lcg(909);
    for n in 2..=5usize {
        let relation = EquivariantElement::monomial(
            num_rational::BigRational::from_integer(1.into()),
            0,
            1,
        )
        .sub(&EquivariantElement::u_power(n));
        assert!(kirwan_q_lambda(&relation, n).is_zero());
        for _ in 0..50 {
            let mut x = EquivariantElement::zero();
            for _ in 0..4 {
                let coeff = num_rational::BigRational::from_integer(
                    ((rng.next_f64() * 19.0) as i64 - 9).into(),
                );
                let m = (rng.next_f64() * (2 * n) as f64) as usize;
                let s = (rng.next_f64() * 4.0) as usize;
                x = x.add(&EquivariantElement::monomial(coeff, m, s));
            }
            assert!(
                kirwan_q_lambda(&x.mul(&relation), n).is_zero(),
                "N = {n}: x (q - u^N) not in kernel"
            );
        }
    }

    // q → 0 specialization equals the classical map for m ≤ 4N.
    for n in 2..=5usize {
        for m in 0..=4 * n {
            assert_eq!(specialize_q_zero(&kirwan_q(m, n)), kirwan_classical(m, n));
        }
    }

    // Ring axioms on all monomials with r ≤ N-1, s ≤ 3.
    for n in 2..=5usize {
        let one = num_rational::BigRational::from_integer(1.into());
        let monomials: Vec<QHElement> = (0..n)
            .flat_map(|r| (0..=3).map(move |s| (r, s)))
            .map(|(r, s)| QHElement::monomial(n, one.clone(), r, s))
            .collect();
        for x in &monomials {
            for y in &monomials {
                assert_eq!(x.mul(y).unwrap(), y.mul(x).unwrap());
                for z in &monomials {
                    let left = x.mul(y).unwrap().mul(z).unwrap();
                    let right = x.mul(&y.mul(z).unwrap()).unwrap();
                    assert_eq!(left, right);
                    let dist_l = x.mul(&y.add(z).unwrap()).unwrap();
                    let dist_r = x.mul(y).unwrap().add(&x.mul(z).unwrap()).unwrap();
                    assert_eq!(dist_l, dist_r);
                }
            }
        }
    }
    eprintln!("[PASS] criterion 9: κ_Q homomorphism, kernel ⟨q - u^N⟩, classical specialization — exact");
}

#[test]
fn criterion_10_substitution_note() {
    // Theorem-level compactness and surjectivity statements are not
    // reproducible at desk scale; per the verification plan they are
    // represented by the classifier arithmetic of criteria 7 and 8.
    eprintln!(
        "[INFO] criterion 10: compactness/surjectivity statements represented by criteria 7-8 (no direct test by design)"
    );
}
