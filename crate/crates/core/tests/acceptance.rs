//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use edsh::algebra::NumberField;
use edsh::curve::{Curve, Point};
use edsh::eds::{psi_initial_block, psi_naive, psi_pow2, AbstractEds};
use edsh::height::{
    archimedean_height, archimedean_height_at, canonical_height, compute_e, extrapolate, local_decompose,
    tate_height, Method,
};
use edsh::lehmer::growth_estimate;
use edsh::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

struct Report {
    failed: Vec<usize>,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2} {name}: {detail}");
        if !ok {
            self.failed.push(id);
        }
    }
}

fn close(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let r = f();
    (r, t.elapsed())
}

fn height(c: &Curve, q: &Point, n: u64) -> f64 {
    canonical_height(c, q, n, Method::GcdConsecutive).unwrap().total
}

fn silver1_check(r: &mut Report) {
    let (c, q) = silver1();
    let ((h100, h200), t) = timed(|| (height(&c, &q, 100), height(&c, &q, 200)));
    let ok = close(h100, 0.45744, 1e-4) && close(h200, 0.45753, 1e-4) && close(h200, 0.45754, 2e-4) && t.as_secs() <= 60;
    r.line(1, "silver1", ok, format!("h100={h100:.7} h200={h200:.7} time={:.2}s", t.as_secs_f64()));
}

fn silver2_check(r: &mut Report) {
    let (c, q) = silver2();
    let h = canonical_height(&c, &q, 200, Method::GcdConsecutive).unwrap();
    let ok = close(h.total, 0.33688, 1e-4) && close(h.arch, 0.51016, 1e-3);
    r.line(2, "silver2", ok, format!("h200={:.7} arch={:.7}", h.total, h.arch));
}

fn notinmin_check(r: &mut Report) {
    let (ca, qa) = notinmin();
    let (cb, qb) = curve37();
    let a = canonical_height(&ca, &qa, 150, Method::GcdConsecutive).unwrap();
    let b = canonical_height(&cb, &qb, 150, Method::GcdConsecutive).unwrap();
    let ok = close(a.total, 0.02549, 1e-4)
        && close(b.total, 0.02555, 1e-4)
        && close(a.arch, 0.7186, 1e-3)
        && (a.total - b.total).abs() <= 1e-3;
    r.line(
        3,
        "notinmin",
        ok,
        format!("nonminimal={:.7} minimal={:.7} arch={:.7} diff={:.2e}", a.total, b.total, a.arch, (a.total - b.total).abs()),
    );
}

fn silnodo_check(r: &mut Report) {
    let (c, q) = silnodo();
    let ((h, (fa, used)), t) = timed(|| {
        let h = canonical_height(&c, &q, 50, Method::GcdConsecutive).unwrap();
        let fa = archimedean_height_at(&c, &q, 300, 256).unwrap();
        (h, fa)
    });
    let ok = close(h.total, 13.657, 1e-2) && close(h.arch, 53.936, 1e-2) && close(fa, 53.956, 1e-2) && t.as_secs() <= 300;
    let h49 = height(&c, &q, 49);
    r.line(
        4,
        "silnodo",
        ok,
        format!(
            "h50={:.5} arch50={:.5} float_arch(n={used})={fa:.5} time={:.2}s; diagnostic h49={h49:.5}",
            h.total,
            h.arch,
            t.as_secs_f64()
        ),
    );
}

fn stillnodo_check(r: &mut Report) {
    let (c, q) = stillnodo();
    let (h, t) = timed(|| canonical_height(&c, &q, 35, Method::GcdConsecutive).unwrap());
    let ok = close(h.total, 15.595, 1e-2) && close(h.arch, 50.732, 1e-2) && t.as_secs() <= 300;
    let h34 = canonical_height(&c, &q, 34, Method::GcdConsecutive).unwrap();
    let d = h.d as f64;
    r.line(
        5,
        "stillnodo",
        ok,
        format!(
            "h35={:.5} arch35={:.5} time={:.2}s; diagnostic d*h35={:.5} d*arch35={:.5} d*h34={:.5}",
            h.total,
            h.arch,
            t.as_secs_f64(),
            d * h.total,
            d * h.arch,
            d * h34.total
        ),
    );
}

fn elp_check(r: &mut Report) {
    let g3 = growth_estimate(&elp3_seed(), 512).unwrap();
    let g5 = growth_estimate(&elp5_seed(), 512).unwrap();
    let (d3, d5) = (2.0 * g3.total, 2.0 * g5.total);
    let bound = 2.0 * 0.01028;
    let ok = close(g3.total, 0.01032, 5e-5) && close(g5.total, 0.00971, 5e-5) && d3 > bound && d5 > bound;
    r.line(
        6,
        "elp-3/elp5",
        ok,
        format!(
            "elp-3={:.7} elp5={:.7} doubled=({d3:.6}, {d5:.6}) vs {bound:.5}; degree-normalized d*h=({:.6}, {:.6}) vs 0.01028",
            g3.total,
            g5.total,
            g3.normalized(),
            g5.normalized()
        ),
    );
}

fn rational_check(r: &mut Report) {
    let (c, q) = rational_benchmark();
    let e = height(&c, &q, 256);
    let t = tate_height(&c, &q, 10, 256).unwrap().total;
    let ok = close(e, 0.01028, 1e-4) && close(t, 0.01028, 1e-4);
    r.line(7, "rational benchmark", ok, format!("eds256={e:.7} tate(k=10)={t:.7}"));
}

fn oracle_check(r: &mut Report) {
    let cases = [curve37(), silver1(), rational_benchmark()];
    let mut ok = true;
    for (c, q) in &cases {
        for n in 2..=7u32 {
            ok &= psi_pow2(c, q, n).unwrap() == psi_naive(c, q, 1 << n).unwrap();
        }
        let (_, mut b) = psi_initial_block(c, q).unwrap();
        for _ in 0..5 {
            b = b.step().unwrap();
            for i in 0..7 {
                ok &= b.values[i] == psi_naive(c, q, b.index(i)).unwrap();
            }
        }
    }
    r.line(8, "oracle equivalence", ok, "psi_pow2 vs naive for N=2..7 and 5 block steps on 3 curves".into());
}

/// A random integral curve through a random integral point, not of order 2.
fn random_instance(rng: &mut ChaCha8Rng, k: &std::sync::Arc<NumberField>) -> (Curve, Point) {
    loop {
        let rand_el = |rng: &mut ChaCha8Rng| {
            let v: Vec<i64> = (0..k.degree()).map(|_| rng.gen_range(-5..=5)).collect();
            k.element_i64(&v).unwrap()
        };
        let (x, y) = (rand_el(rng), rand_el(rng));
        let (a1, a2, a3, a4) = (rand_el(rng), rand_el(rng), rand_el(rng), rand_el(rng));
        let a6 = &(&(&y.square() + &(&(&a1 * &x) * &y)) + &(&a3 * &y)) - &(&(&x.cube() + &(&a2 * &x.square())) + &(&a4 * &x));
        if let Ok(c) = Curve::new(a1, a2, a3, a4, a6) {
            if !c.psi2_at(&x, &y).is_zero() {
                return (c, Point::affine(x, y));
            }
        }
    }
}

fn recurrence_check(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let fields = [
        NumberField::rationals(),
        NumberField::from_i64(&[1, 0, 1]).unwrap(),
        NumberField::from_i64(&[2, 0, 1]).unwrap(),
    ];
    let mut ok = true;
    let mut checked = 0;
    for i in 0..10 {
        let k = &fields[i % 3];
        let (c, q) = random_instance(&mut rng, k);
        let psi: Vec<_> = (0..=41).map(|n| psi_naive(&c, &q, n).unwrap()).collect();
        for m in 1..40usize {
            for n in 1..=m.min(40 - m) {
                let lhs = &psi[m + n] * &psi[m - n];
                let rhs = &(&(&psi[m + 1] * &psi[m - 1]) * &psi[n].square()) - &(&(&psi[n + 1] * &psi[n - 1]) * &psi[m].square());
                ok &= lhs == rhs;
                checked += 1;
            }
        }
    }
    r.line(9, "recurrence identity", ok, format!("{checked} (m, n) pairs over Q, Q(i), Q(sqrt(-2))"));
}

fn error_model_check(r: &mut Report) {
    let (c, q) = silver1();
    let target = 0.45754;
    let (h1, h2) = (height(&c, &q, 100), height(&c, &q, 200));
    let (e1, e2) = ((h1 - target).abs(), (h2 - target).abs());
    let x = extrapolate(h1, 100, h2, 200).unwrap();
    let ratio = e1 / e2;
    let ok = (2.0..=8.0).contains(&ratio) && (x - target).abs() < e1.min(e2);
    r.line(
        10,
        "error model",
        ok,
        format!("e100={e1:.3e} e200={e2:.3e} ratio={ratio:.2} extrapolated={x:.7} (err {:.3e})", (x - target).abs()),
    );
}

fn decomposition_check(r: &mut Report) {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, (c, q), n) in [("silver1", silver1(), 100u64), ("notinmin", notinmin(), 150)] {
        let primes = small_prime_factors(&c.discriminant_norm());
        let h = canonical_height(&c, &q, n, Method::DPower).unwrap();
        let parts = local_decompose(&c, &q, n, &primes).unwrap();
        let sum: f64 = parts.values().sum::<f64>() + h.arch;
        let gap = (sum - h.total).abs();
        ok &= gap <= 1e-6;
        detail.push(format!("{name}: primes={primes:?} gap={gap:.2e}"));
    }
    r.line(11, "decomposition", ok, detail.join("; "));
}

fn torsion_check(r: &mut Report) {
    let (c, q) = two_torsion();
    let mut ok = true;
    let mut notes = Vec::new();
    for m in [Method::GcdConsecutive, Method::DPower] {
        for n in [1u64, 2, 3, 50, 64] {
            let h = canonical_height(&c, &q, n, m).unwrap();
            ok &= h.total == 0.0 && h.torsion;
        }
    }
    let t = tate_height(&c, &q, 5, 128).unwrap();
    ok &= t.total == 0.0 && t.torsion;
    ok &= archimedean_height(&c, &q, 6, 128).unwrap() == 0.0;
    let division_error = |e: &Error| matches!(e, Error::DivisionByZero | Error::InexactDivision);
    match compute_e(&c, &q, 2, false) {
        Err(e) if division_error(&e) => ok = false,
        other => notes.push(format!("compute_e(2)={:?}", other.map(|x| x.e))),
    }
    match local_decompose(&c, &q, 10, &[Integer::from(2)]) {
        Err(e) if division_error(&e) => ok = false,
        other => notes.push(format!("local_decompose={:?}", other.map(|m| m.len()))),
    }
    let k = c.field().clone();
    match AbstractEds::from_terms(k.zero(), k.one(), k.one()) {
        Err(e) if division_error(&e) => ok = false,
        other => notes.push(format!("seed with u2=0: {}", if other.is_ok() { "accepted" } else { "rejected" })),
    }
    r.line(12, "torsion", ok, notes.join("; "));
}

use rug::Integer;

fn main() {
    let mut r = Report { failed: Vec::new() };
    let start = Instant::now();
    silver1_check(&mut r);
    silver2_check(&mut r);
    notinmin_check(&mut r);
    silnodo_check(&mut r);
    stillnodo_check(&mut r);
    elp_check(&mut r);
    rational_check(&mut r);
    oracle_check(&mut r);
    recurrence_check(&mut r);
    error_model_check(&mut r);
    decomposition_check(&mut r);
    torsion_check(&mut r);
    println!("acceptance: {} of 12 passed in {:.1}s", 12 - r.failed.len(), start.elapsed().as_secs_f64());
    if !r.failed.is_empty() {
        println!("failed: {:?}", r.failed);
        std::process::exit(1);
    }
}
