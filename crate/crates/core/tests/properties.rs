mod oracles;

use nplift::lift::{lift_factorization, SplitRequest};
use nplift::newton::NewtonPolyhedron;
use nplift::weier::{poly_divide, weierstrass_normalize};
use nplift::{orthogonal_basis, Exec, SparsePoly, WeightedBound};
use num_traits::Zero;
use oracles::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line_poly(rng: &mut ChaCha8Rng, c: &[i64], base: &[i64], len: i64) -> QPoly {
    let mut out = QPoly::new();
    for t in 0..=len {
        if t == 0 || t == len || rng.gen_bool(0.6) {
            let e: Pt = base.iter().zip(c).map(|(x, y)| x + t * y).collect();
            out.insert(e, rand_q(rng));
        }
    }
    out
}

fn line_coeffs(f: &QPoly, c: &[i64]) -> Vec<num_rational::BigRational> {
    let i = c.iter().position(|&x| x != 0).unwrap();
    let lo = f.keys().map(|e| e[i] / c[i]).min().unwrap();
    let hi = f.keys().map(|e| e[i] / c[i]).max().unwrap();
    let mut out = vec![num_rational::BigRational::zero(); (hi - lo + 1) as usize];
    for (e, v) in f {
        out[(e[i] / c[i] - lo) as usize] = v.clone();
    }
    out
}

fn add(a: &[i64], b: &[i64]) -> Pt {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Pt {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Instance {
    f: SparsePoly,
    edge: nplift::Edge,
    g: QPoly,
    h: QPoly,
    xi0: Vec<i64>,
    base: i64,
    c: Pt,
    a: Pt,
    d0: Pt,
}

/// `f = G H + (terms of larger weight)` with `G` free of monomial factors,
/// `G` and `H` coprime and the edge of `G H` loose in `f`.
fn lift_instance(seed: u64) -> Option<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=3);
    let c = random_direction(&mut rng, n, 3);
    let ws = orthogonal_basis(&c).ok()?;
    let xi0 = ws.xi0().to_vec();
    let r = rng.gen_range(1..=2);
    let (a, _) = coprime_pair(&c, r);
    let g = line_poly(&mut rng, &c, &a, r);
    let d: Pt = (0..n).map(|_| rng.gen_range(0..=2)).collect();
    let pts = line_points(&c, &d);
    let s = rng.gen_range(0..=1usize).min(pts.len() - 1);
    let d0 = pts[rng.gen_range(0..pts.len() - s)].clone();
    let h = line_poly(&mut rng, &c, &d0, s as i64);
    if ugcd(&line_coeffs(&g, &c), &line_coeffs(&h, &c)).len() != 1 {
        return None;
    }
    let mut f = qmul(&g, &h);
    let base_pt = add(&a, &d0);
    let base = dot(&xi0, &base_pt);
    for _ in 0..rng.gen_range(1..=4) {
        let e: Pt = (0..n).map(|_| rng.gen_range(-3..=4)).collect();
        let alpha = add(&base_pt, &e);
        if alpha.iter().all(|&x| x >= 0) && in_m(&c, &e) && dot(&xi0, &e) > 0 {
            f.insert(alpha, rand_q(&mut rng));
        }
    }
    let fp = from_q(n, &f);
    let gh: Vec<Pt> = qmul(&g, &h).keys().cloned().collect();
    let (lo, hi) = (gh.iter().min()?.clone(), gh.iter().max()?.clone());
    let poly = NewtonPolyhedron::build(&fp).ok()?;
    let edge = poly.find_edge(&lo, &hi)?.clone();
    if !edge.loose {
        return None;
    }
    Some(Instance {
        f: fp,
        edge,
        g,
        h,
        xi0,
        base,
        c,
        a,
        d0,
    })
}

fn initial(f: &QPoly, w: &[i64]) -> QPoly {
    let m = min_weight(f, w).unwrap();
    f.iter()
        .filter(|(e, _)| dot(e, w) == m)
        .map(|(e, v)| (e.clone(), v.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lift_is_prefix_stable_and_keeps_initial_forms(seed in any::<u64>()) {
        let inst = lift_instance(seed);
        prop_assume!(inst.is_some());
        let inst = inst.unwrap();
        let n = inst.c.len();
        let split = SplitRequest { g: from_q(n, &inst.g), h: from_q(n, &inst.h) };
        let (n1, n2) = (inst.base + 4, inst.base + 10);
        let lo = lift_factorization(&inst.f, &inst.edge, &split, n1).unwrap();
        let hi = lift_factorization(&inst.f, &inst.edge, &split, n2).unwrap();
        let w = &inst.xi0;
        let (g2, h2) = (to_q(&hi.g), to_q(&hi.h));

        let res = min_weight(&qsub(&to_q(&inst.f), &qmul(&g2, &h2)), w);
        prop_assert!(res.is_none_or(|m| m > n2), "{:?}", res);
        prop_assert_eq!(qtrunc(&g2, w, n1), to_q(&lo.g));
        prop_assert_eq!(qtrunc(&h2, w, n1), to_q(&lo.h));

        // g|E1 = G, h|E2 = H, E1 + E2 = E.
        let (e1, e2) = (initial(&g2, w), initial(&h2, w));
        prop_assert_eq!(&e1, &inst.g);
        prop_assert_eq!(&e2, &inst.h);
        let sum = minkowski_points(&e1.keys().cloned().collect::<Vec<_>>(), &e2.keys().cloned().collect::<Vec<_>>());
        prop_assert_eq!(sum.first().unwrap(), &inst.edge.a);
        prop_assert_eq!(sum.last().unwrap(), &inst.edge.b);

        // Every term of g (h) sits in weight w + M (z + M).
        for e in g2.keys() {
            prop_assert!(in_m(&inst.c, &sub(e, &inst.a)));
        }
        for e in h2.keys() {
            prop_assert!(in_m(&inst.c, &sub(e, &inst.d0)));
        }
    }

    #[test]
    fn support_lies_above_every_loose_edge(
        n in 2usize..=4,
        pts in prop::collection::vec(prop::collection::vec(0i64..=5, 4), 1..=7),
    ) {
        let support: Vec<Pt> = pts.iter().map(|p| p[..n].to_vec()).collect();
        let poly = NewtonPolyhedron::from_support(n, support.clone(), Exec::default()).unwrap();
        for e in poly.loose_edges() {
            for s in &support {
                prop_assert!(in_m(&e.direction, &sub(s, &e.a)), "edge {:?}-{:?}, point {:?}", e.a, e.b, s);
            }
            if e.a.iter().zip(&e.b).all(|(x, y)| *x.min(y) == 0) {
                prop_assert_eq!(poly.vertices().len(), 2);
            }
        }
    }

    #[test]
    fn slices_step_along_the_direction(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=5);
        let c = random_direction(&mut rng, n, 9);
        let ws = orthogonal_basis(&c).unwrap();
        let alpha: Pt = (0..n).map(|_| rng.gen_range(0..=12)).collect();
        let w = ws.weight(&alpha);
        let slice = ws.slice(&w, None).unwrap();
        prop_assert_eq!(&slice.points, &line_points(&c, &alpha));
        for p in &slice.points {
            prop_assert_eq!(ws.weight(p), w.clone());
        }
        for pair in slice.points.windows(2) {
            prop_assert_eq!(sub(&pair[1], &pair[0]), c.clone());
        }
    }

    #[test]
    fn division_identity(seed in any::<u64>(), bound in 4i64..=14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let d = rng.gen_range(1..=3);
        let mut g = QPoly::new();
        g.insert(vec![0, 0, d], q(1));
        for _ in 0..rng.gen_range(1..=4) {
            let e = vec![rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..d)];
            g.insert(e, rand_q(&mut rng));
        }
        let f: QPoly = (0..rng.gen_range(1..=6))
            .map(|_| (vec![rng.gen_range(0..=3), rng.gen_range(0..=3), rng.gen_range(0..=5)], rand_q(&mut rng)))
            .collect();
        let w = vec![rng.gen_range(1..=3), rng.gen_range(1..=3), 1];
        let wb = WeightedBound::new(w.clone(), bound).unwrap();
        let (quot, rem) = poly_divide(&from_q(n, &f), &from_q(n, &g), &wb).unwrap();
        let (quot, rem) = (to_q(&quot), to_q(&rem));
        prop_assert!(rem.keys().all(|e| e[2] < d));
        let diff = qsub(&f, &qadd(&qmul(&quot, &g), &rem));
        let m = min_weight(&diff, &w);
        prop_assert!(m.is_none_or(|m| m > bound), "{:?}", m);
    }

    #[test]
    fn normalization_gives_weierstrass_polynomial(seed in any::<u64>(), bound in 3i64..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let d = rng.gen_range(1..=2);
        let mut gbar = QPoly::new();
        gbar.insert(vec![0, 0, d], rand_q(&mut rng));
        gbar.insert(vec![0, 0, d + 1], rand_q(&mut rng));
        for _ in 0..rng.gen_range(1..=5) {
            let e = vec![rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=d + 1)];
            if e[0] + e[1] > 0 {
                gbar.insert(e, rand_q(&mut rng));
            }
        }
        let w = vec![d.max(1), d.max(1), 1];
        let wb = WeightedBound::new(w.clone(), bound).unwrap();
        let out = weierstrass_normalize(&from_q(n, &gbar), d, &wb).unwrap();
        let (u, g) = (to_q(&out.u), to_q(&out.g));
        prop_assert!(g.keys().all(|e| e[2] <= d));
        prop_assert_eq!(g.get(&vec![0, 0, d]), Some(&q(1)));
        prop_assert_eq!(g.keys().filter(|e| e[2] == d).count(), 1);
        prop_assert!(g.keys().all(|e| e[2] == d || e[0] + e[1] > 0));
        prop_assert!(u.get(&vec![0, 0, 0]).is_some_and(|v| !v.is_zero()));
        let m = min_weight(&qsub(&gbar, &qmul(&u, &g)), &w);
        prop_assert!(m.is_none_or(|m| m > bound), "{:?}", m);
    }
}

#[test]
fn oracle_sees_a_compact_triangle() {
    let s = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
    assert_eq!(vertices(3, &s).len(), 3);
    let edges = edges(3, &s);
    assert_eq!(edges.len(), 3);
    assert!(edges.iter().all(|e| !e.loose));
    let poly = NewtonPolyhedron::from_support(3, s, Exec::default()).unwrap();
    assert!(poly.loose_edges().is_empty());
    assert_eq!(poly.compact_edges().len(), 3);
}

#[test]
fn oracle_rejects_dominated_points() {
    let s = vec![vec![2, 2], vec![0, 3], vec![3, 0], vec![1, 1]];
    assert_eq!(vertices(2, &s), vec![vec![0, 3], vec![1, 1], vec![3, 0]]);
    let e = edges(2, &s);
    assert_eq!(e.len(), 2);
    assert!(e.iter().all(|e| e.loose));
    let sum = minkowski_points(&[vec![0, 1]], &[vec![1, 0], vec![0, 1]]);
    assert_eq!(sum, vec![vec![0, 2], vec![1, 1]]);
}

#[test]
fn sqrt_series_squares_back() {
    let mut s = QPoly::new();
    s.insert(vec![1, 0], q(1));
    s.insert(vec![0, 1], q(-2));
    let w = [1, 1];
    let r = sqrt_one_plus(&s, &w, 8);
    let mut one_plus = s.clone();
    one_plus.insert(vec![0, 0], q(1));
    let diff = qsub(&qtrunc(&qmul(&r, &r), &w, 8), &one_plus);
    assert!(diff.is_empty(), "{diff:?}");
}
