use navol_core::cohomology::{asymptotic_hq, h0, hq, morse_check, perturbation_scan, RealDivisor, ToricFamily, ToricVariety};
use navol_core::fit::{fit_power_constant, polynomial_leading_coefficient};
use navol_core::rational::{factorial, int, rat};
use navol_core::{Execution, Rational};
use num_traits::{Signed, Zero};

fn surfaces() -> Vec<ToricVariety> {
    [
        ToricFamily::ProjectivePlane,
        ToricFamily::ProductOfLines,
        ToricFamily::Hirzebruch(1),
        ToricFamily::Hirzebruch(2),
        ToricFamily::Hirzebruch(3),
    ]
    .into_iter()
    .map(ToricVariety::new)
    .collect()
}

fn grid(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-radius..=radius).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn p1(q: usize, a: i64) -> u64 {
    match q {
        0 => (a + 1).max(0) as u64,
        _ => (-a - 1).max(0) as u64,
    }
}

#[test]
fn projective_line_closed_form() {
    let x = ToricVariety::new(ToricFamily::ProjectiveLine);
    for e in grid(2, 6) {
        let a = e[0] + e[1];
        assert_eq!(x.hq(&e, 0).unwrap(), p1(0, a));
        assert_eq!(x.hq(&e, 1).unwrap(), p1(1, a));
    }
}

#[test]
fn kunneth_on_product_of_lines() {
    let x = ToricVariety::new(ToricFamily::ProductOfLines);
    for a in -5..=5 {
        for b in -5..=5 {
            let e = [a, b, 0, 0];
            for q in 0..=2 {
                let expected: u64 = (0..=q).filter(|i| *i <= 1 && q - i <= 1).map(|i| p1(i, a) * p1(q - i, b)).sum();
                assert_eq!(x.hq(&e, q).unwrap(), expected, "O({a},{b}) q={q}");
            }
        }
    }
}

/// Lattice points with `⟨x, v_i⟩ > e_i` for every ray, by direct scanning.
fn interior_count(x: &ToricVariety, e: &[i64]) -> u64 {
    let r = 40;
    let mut count = 0;
    for a in -r..=r {
        for b in -r..=r {
            if x.rays().iter().zip(e).all(|(v, &c)| v[0] * a + v[1] * b > c) {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn serre_duality_matches_interior_points() {
    for x in surfaces() {
        for e in grid(x.rays().len(), 2) {
            // h²(E) = h⁰(K − E) counts interior points of P_{−E}
            assert_eq!(x.hq(&e, 2).unwrap(), interior_count(&x, &e), "{} {e:?}", x.family().name());
        }
    }
}

#[test]
fn riemann_roch_gives_nonnegative_h1() {
    for x in surfaces() {
        for e in grid(x.rays().len(), 3) {
            let h: Vec<i64> = (0..=2).map(|q| x.hq(&e, q).unwrap() as i64).collect();
            assert_eq!(h[0] - h[1] + h[2], x.euler_characteristic(&e).unwrap());
        }
    }
    let p2 = ToricVariety::new(ToricFamily::ProjectivePlane);
    for k in -8..=8 {
        assert_eq!(p2.hq(&[k, 0, 0], 1).unwrap(), 0);
    }
}

#[test]
fn nef_volume_is_self_intersection() {
    for x in surfaces() {
        for e in grid(x.rays().len(), 2) {
            let class: Vec<Rational> = e.iter().map(|&c| int(c)).collect();
            if !x.is_nef(&class) {
                continue;
            }
            let poly = x.divisor_polytope(&class).unwrap();
            let vol = poly.map(|p| p.normalized_volume()).unwrap_or_else(Rational::zero);
            assert_eq!(vol, x.intersect(&class, &class, 0), "{} {e:?}", x.family().name());
            let series = asymptotic_hq(&x, &RealDivisor::integral(e.clone()), 0, &[4, 8], Execution::Sequential).unwrap();
            assert_eq!(series.exact, Some(vol));
        }
    }
}

/// `n!·(leading coefficient)` of `k ↦ h^q(⌈k·step·D⌉)` rescaled to `m = k·step`.
fn hhat(x: &ToricVariety, d: &RealDivisor, q: usize, step: u64) -> Rational {
    let n = x.dim();
    let samples: Vec<(Rational, Rational)> = (1..=8u64)
        .map(|k| (int((k * step) as i64), int(hq(x, d, k * step, q).unwrap() as i64)))
        .collect();
    let lead = polynomial_leading_coefficient(&samples, n).expect("exact polynomial growth");
    lead * Rational::from_integer(factorial(n))
}

#[test]
fn homogeneity_of_asymptotic_functions() {
    let cases = [
        (ToricFamily::ProductOfLines, vec![1, -1, 0, 0], 1),
        (ToricFamily::ProjectivePlane, vec![2, 0, 0], 0),
        (ToricFamily::ProjectivePlane, vec![-1, 0, 0], 2),
        (ToricFamily::Hirzebruch(1), vec![1, 1, 0, 0], 0),
    ];
    for (family, e, q) in cases {
        let x = ToricVariety::new(family);
        let d = RealDivisor::integral(e);
        let base = hhat(&x, &d, q, 1);
        assert!(!base.is_zero());
        for (lambda, step) in [(int(2), 1), (int(3), 1), (rat(1, 2), 2)] {
            let scaled = hhat(&x, &d.scaled(&lambda), q, step);
            assert_eq!(scaled, &lambda * &lambda * &base, "{} λ={lambda}", family.name());
        }
    }
}

#[test]
fn product_of_lines_h1_series() {
    let x = ToricVariety::new(ToricFamily::ProductOfLines);
    let d = RealDivisor::integral(vec![1, -1, 0, 0]);
    let schedule: Vec<u64> = (1..=100).collect();
    let series = asymptotic_hq(&x, &d, 1, &schedule, Execution::default()).unwrap();
    for (m, h, _) in &series.rows {
        assert_eq!(*h, m * m - 1);
    }
    assert!((&series.estimate - int(2)).abs() <= rat(1, 100));
}

#[test]
fn round_up_depends_on_decomposition_only_to_lower_order() {
    let x = ToricVariety::new(ToricFamily::ProductOfLines);
    // Two representations of the class (1/2, 1/3) via linearly equivalent rays.
    let d = RealDivisor::new(4, vec![(rat(1, 2), vec![1, 0, 0, 0]), (rat(1, 3), vec![0, 1, 0, 0])]).unwrap();
    let e = RealDivisor::new(4, vec![(rat(1, 2), vec![0, 0, 1, 0]), (rat(-1, 3), vec![0, -1, 0, -1]), (rat(1, 3), vec![0, -1, 0, 0])]).unwrap();
    for q in 0..=2 {
        let rows: Vec<(Rational, Rational)> = (1..=40u64)
            .map(|m| (int(m as i64), int(h_abs_diff(&x, &d, &e, m, q))))
            .collect();
        let (fit, check) = rows.split_at(rows.len() / 2);
        let c = fit_power_constant(fit.iter().map(|(a, b)| (a, b)), -1);
        for (m, diff) in check {
            assert!(diff <= &(&c * m), "q={q} m={m}");
        }
    }
}

fn h_abs_diff(x: &ToricVariety, d: &RealDivisor, e: &RealDivisor, m: u64, q: usize) -> i64 {
    (hq(x, d, m, q).unwrap() as i64 - hq(x, e, m, q).unwrap() as i64).abs()
}

#[test]
fn morse_inequalities_on_surface_families() {
    let pairs = |x: &ToricVariety| -> Vec<(Vec<i64>, Vec<i64>)> {
        match x.family() {
            ToricFamily::ProjectivePlane => vec![
                (vec![2, 0, 0], vec![1, 0, 0]),
                (vec![1, 0, 0], vec![3, 0, 0]),
                (vec![2, 0, 0], vec![2, 0, 0]),
            ],
            ToricFamily::ProductOfLines => vec![
                (vec![2, 1, 0, 0], vec![1, 2, 0, 0]),
                (vec![1, 0, 0, 0], vec![0, 1, 0, 0]),
                (vec![3, 1, 0, 0], vec![1, 1, 0, 0]),
            ],
            // fiber D1 and positive section D4
            _ => vec![
                (vec![1, 0, 0, 1], vec![1, 0, 0, 0]),
                (vec![0, 0, 0, 1], vec![1, 0, 0, 1]),
                (vec![2, 0, 0, 1], vec![1, 0, 0, 2]),
            ],
        }
    };
    let schedule: Vec<u64> = (1..=30).collect();
    for family in [ToricFamily::ProjectivePlane, ToricFamily::ProductOfLines, ToricFamily::Hirzebruch(1)] {
        let x = ToricVariety::new(family);
        for (d, e) in pairs(&x) {
            let (d, e) = (RealDivisor::integral(d), RealDivisor::integral(e));
            assert!(x.is_nef(&d.class()) && x.is_nef(&e.class()));
            for q in 0..=2 {
                let report = morse_check(&x, &d, &e, q, &schedule, Execution::default()).unwrap();
                assert!(report.passed, "{} q={q}: {report:?}", family.name());
            }
        }
    }
}

#[test]
fn morse_headline_example() {
    let x = ToricVariety::new(ToricFamily::ProductOfLines);
    let d = RealDivisor::integral(vec![2, 1, 0, 0]);
    let e = RealDivisor::integral(vec![1, 2, 0, 0]);
    let schedule: Vec<u64> = (1..=100).collect();
    let report = morse_check(&x, &d, &e, 1, &schedule, Execution::default()).unwrap();
    assert_eq!(report.leading, int(5));
    for row in &report.rows {
        assert_eq!(row.h, row.m * row.m - 1);
        assert!(int(row.h as i64) <= int(5 * (row.m * row.m) as i64));
    }
    assert!(report.passed);
}

#[test]
fn perturbation_scan_on_product_of_lines() {
    let x = ToricVariety::new(ToricFamily::ProductOfLines);
    let twists = [RealDivisor::integral(vec![1, 0, 0, 0])];
    let bases = [RealDivisor::integral(vec![0, 1, 0, 0]), RealDivisor::integral(vec![1, 1, 0, 0])];
    for q in 0..=2 {
        let report = perturbation_scan(&x, &twists, &bases, q, 5, Execution::default()).unwrap();
        assert!(report.passed, "q={q}");
    }
}

#[test]
fn rounding_uses_each_coefficient() {
    let x = ToricVariety::new(ToricFamily::ProjectivePlane);
    let d = RealDivisor::new(3, vec![(rat(1, 3), vec![1, 0, 0]), (rat(1, 3), vec![0, 1, 0])]).unwrap();
    assert_eq!(d.round_up(1).unwrap(), vec![1, 1, 0]);
    assert_eq!(d.round_up(3).unwrap(), vec![1, 1, 0]);
    assert_eq!(h0(&x, &d, 3).unwrap(), 6);
}
