//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! runtime; the process fails if any criterion fails or exceeds its limit.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cubicwa_core::fibration::{
    case_witness, fiber_identity_check, split, strong_equivalence_reduce, CaseOutcome, CaseWitness, SplitCubic,
    WitnessCase,
};
use cubicwa_core::hinv::{extract_plane, verify_decomposition, Decomposition};
use cubicwa_core::local::{
    hensel_lift, hilbert_symbol, isotropy_witness, lift_isotropic, primes_below, quadric_isotropic, IsotropyWitness,
    ModPSolution, Place,
};
use cubicwa_core::pencil::{diagonalize_congruent, find_full_rank_point, pencil_det, SymmetricPencil};
use cubicwa_core::rat::{frac, int, ints};
use cubicwa_core::wa::{count, search, ApproximationTask, AxisBox, CountQuery, LocalTarget, Region};
use cubicwa_core::{CubicForm, Matrix, Poly, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn(),
}

fn main() {
    std::panic::set_hook(Box::new(|info| {
        if let Some(loc) = info.location() {
            eprintln!("  panic at {}:{}", loc.file(), loc.line());
        }
    }));
    let criteria = [
        Criterion { id: 1, name: "decomposition corpus", limit: Duration::from_secs(1), run: swd_corpus },
        Criterion { id: 2, name: "fiber identity", limit: Duration::from_secs(30), run: fiber_identity },
        Criterion { id: 3, name: "full-rank pencil witness", limit: Duration::from_secs(60), run: pencil_witness },
        Criterion { id: 4, name: "congruent diagonalization", limit: Duration::from_secs(10), run: diagonalization },
        Criterion { id: 5, name: "strong equivalence", limit: Duration::from_secs(30), run: strong_equivalence },
        Criterion { id: 6, name: "case witnesses", limit: Duration::from_secs(60), run: case_witnesses },
        Criterion { id: 7, name: "local machinery", limit: Duration::from_secs(120), run: local_machinery },
        Criterion { id: 8, name: "weak-approximation search", limit: Duration::from_secs(60), run: approximation },
        Criterion { id: 9, name: "counting oracle", limit: Duration::from_secs(60), run: counting },
        Criterion { id: 10, name: "determinism", limit: Duration::from_secs(300), run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run));
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= c.limit => Ok(()),
            Ok(()) => Err(format!("runtime over the {:?} limit", c.limit)),
            Err(e) => Err(panic_message(e.as_ref())),
        };
        match verdict {
            Ok(()) => println!("criterion {:>2} PASS  {} ({:.2?})", c.id, c.name, elapsed),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {} ({:.2?}): {why}", c.id, c.name, elapsed);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

/// First line of the panic payload, shortened for the summary.
fn panic_message(e: &(dyn std::any::Any + Send)) -> String {
    let full = if let Some(s) = e.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = e.downcast_ref::<String>() {
        s.clone()
    } else {
        "panicked".into()
    };
    let line = full.lines().next().unwrap_or_default();
    line.chars().take(200).collect()
}

// Oracles shared by several criteria.

fn det_oracle(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut a = rows.to_vec();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= &a[k][k];
        for i in k + 1..n {
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Rank of an integer matrix by Bareiss elimination.
fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut a = rows.to_vec();
    let (n, m) = (a.len(), a.first().map_or(0, Vec::len));
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..n {
            for j in c + 1..m {
                a[i][j] = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

fn rows(m: &Matrix) -> Vec<Vec<Rat>> {
    m.to_rows()
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(Rat::zero(), |acc, l| acc + &a[i][l] * &b[l][j]))
                .collect()
        })
        .collect()
}

fn transpose(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn combine(mats: &[Matrix], y: &[Rat]) -> Vec<Vec<Rat>> {
    let n = mats[0].rows();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for (m, c) in mats.iter().zip(y) {
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v += c * &m[(i, j)];
            }
        }
    }
    out
}

fn rand_sym(rng: &mut StdRng, n: usize, lo: i64, hi: i64, density: f64) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(density) {
                let v = int(rng.gen_range(lo..=hi));
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
    }
    m
}

fn monomial(n: usize, vars: &[usize], c: i64) -> Poly {
    let mut e = vec![0; n];
    for &v in vars {
        e[v] += 1;
    }
    Poly::monomial(e, int(c))
}

fn var(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

// 1. A form with h = 2 and a rational plane.

fn swd_eval(x: &[Rat]) -> Rat {
    let (x1, x2, x3, x4) = (&x[0], &x[1], &x[2], &x[3]);
    x1 * x2 * x2 + x1 * x3 * x3 - int(4) * x4 * x4 * x4 + int(8) * x1 * x1 * x4 + int(7) * x1 * x4 * x4
        - int(14) * x1 * x1 * x1
}

fn swd_form() -> CubicForm {
    let n = 4;
    let p = [
        monomial(n, &[0, 1, 1], 1),
        monomial(n, &[0, 2, 2], 1),
        monomial(n, &[3, 3, 3], -4),
        monomial(n, &[0, 0, 3], 8),
        monomial(n, &[0, 3, 3], 7),
        monomial(n, &[0, 0, 0], -14),
    ]
    .iter()
    .fold(Poly::zero(n), |a, b| &a + b);
    CubicForm::from_poly(&p).unwrap()
}

fn swd_corpus() {
    let c = swd_form();
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..20 {
        let x: Vec<Rat> = (0..4).map(|_| frac(rng.gen_range(-30..=30), rng.gen_range(1..=9))).collect();
        assert_eq!(c.eval(&x).unwrap(), swd_eval(&x), "form parsed incorrectly");
    }
    // C = x1·(−14x1² + 8x1x4 + x2² + x3² + 7x4²) + x4·(−4x4²)
    let q1 = Matrix::from_i64(&[&[-14, 0, 0, 4], &[0, 1, 0, 0], &[0, 0, 1, 0], &[4, 0, 0, 7]]);
    let q2 = Matrix::from_i64(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -4]]);
    let d = Decomposition::new(4, vec![(ints(&[1, 0, 0, 0]), q1), (ints(&[0, 0, 0, 1]), q2)]).unwrap();
    assert_eq!(d.h(), 2);
    assert!(verify_decomposition(&c, &d).unwrap(), "decomposition does not certify h <= 2");
    assert!(c.cone_vertex().is_none(), "cone vertex reported");
    assert!(c.forced_singular_point().is_none(), "forced singular point reported");
    let plane = extract_plane(&c, &d).unwrap();
    assert_eq!(plane.dim(), 2);
    for _ in 0..50 {
        let coeffs: Vec<Rat> = (0..2).map(|_| frac(rng.gen_range(-50..=50), rng.gen_range(1..=12))).collect();
        let v = plane.combination(&coeffs);
        assert!(v[0].is_zero() && v[3].is_zero(), "plane leaves x1 = x4 = 0");
        assert!(swd_eval(&v).is_zero(), "plane point off the form");
    }
    // the plane is all of x1 = x4 = 0
    let spanned: Vec<Vec<BigInt>> = plane
        .basis
        .iter()
        .map(|b| vec![b[1].to_integer(), b[2].to_integer()])
        .collect();
    assert_eq!(bareiss_rank(&spanned), 2);
}

// 2. t·Q_y(x, t) = C(x, t·y) on random split cubics.

fn random_split_form(rng: &mut StdRng, m: usize, h: usize) -> Poly {
    let n = m + h;
    let mut c = Poly::zero(n);
    let coeff = |rng: &mut StdRng| rng.gen_range(-9..=9);
    for i in 0..h {
        for a in 0..m {
            for b in a..m {
                if rng.gen_bool(0.5) {
                    c = &c + &monomial(n, &[a, b, m + i], coeff(rng));
                }
            }
        }
    }
    for a in 0..m {
        for i in 0..h {
            for j in i..h {
                if rng.gen_bool(0.3) {
                    c = &c + &monomial(n, &[a, m + i, m + j], coeff(rng));
                }
            }
        }
    }
    for i in 0..h {
        for j in i..h {
            for k in j..h {
                if rng.gen_bool(0.3) {
                    c = &c + &monomial(n, &[m + i, m + j, m + k], coeff(rng));
                }
            }
        }
    }
    c
}

fn fiber_identity() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..200 {
        let m = rng.gen_range(4..=5);
        let h = rng.gen_range(1..=6);
        let n = m + h;
        let c = random_split_form(&mut rng, m, h);
        let s = split(&CubicForm::from_poly(&c).unwrap(), m).unwrap();
        assert!(fiber_identity_check(&s));
        // ring x_1..x_m, y_1..y_h, t
        let t = var(n + 1, n);
        let z: Vec<Poly> = (0..m).map(|i| var(n + 1, i)).chain([t.clone()]).collect();
        let ymap: Vec<usize> = (m..n).collect();
        let a = s.fiber_matrix();
        let mut q = Poly::zero(n + 1);
        for i in 0..=m {
            for j in 0..=m {
                let e = a.get(i, j).embed(n + 1, &ymap).unwrap();
                q = &q + &(&(&e * &z[i]) * &z[j]);
            }
        }
        let lhs = &t * &q;
        let images: Vec<Poly> = (0..n).map(|i| if i < m { var(n + 1, i) } else { &t * &var(n + 1, i) }).collect();
        let rhs = c.substitute(&images).unwrap();
        assert_eq!(lhs, rhs, "fiber identity fails for m = {m}, h = {h}");
    }
}

// 3. Full-rank points of symmetric pencils.

fn pencil_witness() {
    let mut rng = StdRng::seed_from_u64(3);
    let mut found = 0;
    let mut tries = 0;
    while found < 100 {
        tries += 1;
        assert!(tries < 1000, "generator produced too few nondegenerate pencils");
        let rho = rng.gen_range(1..=6);
        let mu = rng.gen_range(1..=8);
        let density = [0.3, 0.6, 1.0][rng.gen_range(0..3)];
        let mut mats: Vec<Matrix> = (0..mu).map(|_| rand_sym(&mut rng, rho, -3, 3, density)).collect();
        if rng.gen_bool(0.3) {
            for mt in mats.iter_mut() {
                for i in 0..rho {
                    mt[(i, i)] = Rat::zero();
                }
            }
        }
        let p = SymmetricPencil::new(rho, mats.clone()).unwrap();
        if pencil_det(&p).unwrap().is_zero() {
            continue;
        }
        found += 1;
        let w = find_full_rank_point(&p).unwrap().expect("nondegenerate pencil without witness");
        let d = det_oracle(&combine(&mats, &w.y));
        assert!(!d.is_zero(), "witness determinant vanishes");
        assert_eq!(d, w.det_value);
    }
    for k in 0..30 {
        let rho = rng.gen_range(2..=6);
        let mu = rng.gen_range(1..=8);
        let mats: Vec<Matrix> = if k % 2 == 0 {
            // common kernel: M_j = Gᵀ·D_j·G with the last entry of D_j zero
            let g = rand_sym(&mut rng, rho, -2, 2, 1.0).add(&Matrix::identity(rho).scale(&int(7))).unwrap();
            (0..mu)
                .map(|_| {
                    let mut d: Vec<Rat> = (0..rho).map(|_| int(rng.gen_range(-4..=4))).collect();
                    d[rho - 1] = Rat::zero();
                    let gr = rows(&g);
                    let prod = mat_mul(&mat_mul(&transpose(&gr), &rows(&Matrix::diagonal(&d))), &gr);
                    Matrix::from_rows(prod).unwrap()
                })
                .collect()
        } else {
            // zero lower-right block of size rho - k with k < rho/2: rank <= 2k
            let small = (rho - 1) / 2;
            (0..mu)
                .map(|_| {
                    let mut mt = rand_sym(&mut rng, rho, -4, 4, 0.8);
                    for i in small..rho {
                        for j in small..rho {
                            mt[(i, j)] = Rat::zero();
                        }
                    }
                    mt
                })
                .collect()
        };
        let p = SymmetricPencil::new(rho, mats.clone()).unwrap();
        assert!(find_full_rank_point(&p).unwrap().is_none(), "witness for a rank-deficient pencil");
        assert!(pencil_det(&p).unwrap().is_zero(), "determinant of a rank-deficient pencil is nonzero");
        let y: Vec<Rat> = (0..mu).map(|_| int(rng.gen_range(-9..=9))).collect();
        assert!(det_oracle(&combine(&mats, &y)).is_zero());
    }
}

// 4. Bᵀ·M·B = D with rank checked by fraction-free elimination.

fn diagonalization() {
    let mut rng = StdRng::seed_from_u64(4);
    for k in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = match k % 3 {
            0 => rand_sym(&mut rng, n, -6, 6, 0.7),
            1 => {
                let mut m = rand_sym(&mut rng, n, -6, 6, 0.8);
                for i in 0..n {
                    m[(i, i)] = Rat::zero();
                }
                m
            }
            _ => {
                let r = rng.gen_range(0..=n);
                let g: Vec<Vec<Rat>> =
                    (0..r).map(|_| (0..n).map(|_| int(rng.gen_range(-3..=3))).collect()).collect();
                let d: Vec<Rat> = (0..r).map(|_| int(rng.gen_range(-3..=3))).collect();
                if r == 0 {
                    Matrix::zeros(n, n)
                } else {
                    let prod = mat_mul(&mat_mul(&transpose(&g), &rows(&Matrix::diagonal(&d))), &g);
                    Matrix::from_rows(prod).unwrap()
                }
            }
        };
        let cert = diagonalize_congruent(&m).unwrap();
        let b = rows(&cert.b);
        let d = mat_mul(&mat_mul(&transpose(&b), &rows(&m)), &b);
        assert_eq!(d, rows(&cert.d), "Bᵀ·M·B differs from D");
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!(i == j || v.is_zero(), "D is not diagonal");
            }
        }
        assert!(!det_oracle(&b).is_zero(), "B is singular");
        let ints: Vec<Vec<BigInt>> = rows(&m).iter().map(|r| r.iter().map(Rat::to_integer).collect()).collect();
        let rank_d = (0..n).filter(|&i| !d[i][i].is_zero()).count();
        assert_eq!(rank_d, bareiss_rank(&ints), "rank changed");
        assert_eq!(cert.rank(), rank_d);
    }
}

// 5. Strong equivalence on planted dependencies.

fn planted_split(rng: &mut StdRng, h: usize, deps: usize) -> SplitCubic {
    let mut mats: Vec<Matrix> = (0..h - deps).map(|_| rand_sym(rng, 4, -3, 3, 1.0)).collect();
    for _ in 0..deps {
        let mut acc = Matrix::zeros(4, 4);
        for _ in 0..rng.gen_range(1..=3) {
            let j = rng.gen_range(0..mats.len());
            acc = acc.add(&mats[j].scale(&int(rng.gen_range(-2..=2)))).unwrap();
        }
        let at = rng.gen_range(0..=mats.len());
        mats.insert(at, acc);
    }
    let border: Vec<Poly> = (0..4)
        .map(|_| {
            let mut q = Poly::zero(h);
            for _ in 0..3 {
                q = &q + &monomial(h, &[rng.gen_range(0..h), rng.gen_range(0..h)], rng.gen_range(-3..=3));
            }
            q
        })
        .collect();
    let mut corner = CubicForm::zero(h);
    for _ in 0..4 {
        corner.add_monomial(rng.gen_range(0..h), rng.gen_range(0..h), rng.gen_range(0..h), &int(rng.gen_range(-3..=3)));
    }
    SplitCubic::assemble(mats, border, corner).unwrap()
}

fn strong_equivalence() {
    let mut rng = StdRng::seed_from_u64(5);
    for k in 0..50 {
        let h = 11 + k % 3;
        let deps = rng.gen_range(h - 10..=h - 8);
        let s = planted_split(&mut rng, h, deps);
        let r = strong_equivalence_reduce(&s).unwrap();
        let zeros = r.reduced.matrices().iter().filter(|m| m.is_zero()).count();
        assert!(zeros >= h - 10, "{zeros} zero matrices for h = {h}");
        let n = 4 + h;
        let l = r.change.matrix();
        assert!(!det_oracle(&rows(l)).is_zero(), "L is singular");
        let mut images: Vec<Poly> = (0..4).map(|i| var(n, i)).collect();
        for i in 0..h {
            let lin: Vec<Rat> = (0..n).map(|c| if c < 4 { Rat::zero() } else { l[(i, c - 4)].clone() }).collect();
            images.push(Poly::linear(&lin));
        }
        let lhs = r.reduced.source().to_poly().substitute(&images).unwrap();
        assert_eq!(lhs, s.source().to_poly(), "C′(x, L(y)) differs from C(x, y)");
    }
}

// 6. Case witnesses and their leading terms in P.

/// Degree and leading coefficient of the polynomial taking `values[k]` at
/// `k = 0, 1, …`, from its forward differences.
fn leading_by_differences(values: &[Rat]) -> Option<(u32, Rat)> {
    let mut diffs = values.to_vec();
    let mut top = None;
    for k in 0..values.len() {
        if !diffs[0].is_zero() {
            top = Some((k as u32, diffs[0].clone()));
        }
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        if diffs.is_empty() {
            break;
        }
    }
    top.map(|(d, c)| {
        let fact: BigInt = (1..=d).map(BigInt::from).product();
        (d, c / Rat::from_integer(fact))
    })
}

fn case_split(rng: &mut StdRng, m: usize, h: usize, zs: &[usize], border: Vec<Poly>, corner: CubicForm) -> SplitCubic {
    let mats = (0..h)
        .map(|i| {
            if zs.contains(&i) {
                Matrix::zeros(m, m)
            } else {
                let mut mt = rand_sym(rng, m, -2, 2, 0.3);
                for a in 0..m {
                    mt[(a, a)] = int(rng.gen_range(-4..=4));
                }
                mt
            }
        })
        .collect();
    SplitCubic::assemble(mats, border, corner).unwrap()
}

fn check_case(s: &SplitCubic, expect: WitnessCase) {
    let CaseOutcome::Witness(w) = case_witness(s).unwrap() else {
        panic!("no case witness");
    };
    let CaseWitness { case, y, det, frame, x_change, y_change, direction, base, leading, .. } = &w;
    assert_eq!(*case, expect);
    let d = det_oracle(&rows(&s.fiber_quadric(y).unwrap()));
    assert!(!d.is_zero(), "det A(y) vanishes at the witness");
    assert_eq!(&d, det);
    // the frame is the input after x ↦ B_x·x, y ↦ B_y·y
    let (m, h) = (s.m(), s.h());
    let n = m + h;
    let images: Vec<Poly> = (0..n)
        .map(|i| {
            let row: Vec<Rat> = (0..n)
                .map(|k| match (i < m, k < m) {
                    (true, true) => x_change[(i, k)].clone(),
                    (false, false) => y_change[(i - m, k - m)].clone(),
                    _ => Rat::zero(),
                })
                .collect();
            Poly::linear(&row)
        })
        .collect();
    assert_eq!(s.source().to_poly().substitute(&images).unwrap(), frame.source().to_poly());
    let values: Vec<Rat> = (0..=3 * (m + 1) + 1)
        .map(|p| {
            let yp: Vec<Rat> = direction.iter().zip(base).map(|(a, b)| int(p as i64) * a + b).collect();
            det_oracle(&rows(&frame.fiber_quadric(&yp).unwrap()))
        })
        .collect();
    let observed = leading_by_differences(&values).expect("det A(P) vanishes identically");
    let mw = combine(frame.matrices(), base);
    let expected = match expect {
        WitnessCase::Corner => {
            // P³·c⋆(b)·det M
            let c = frame.corner().eval(direction).unwrap();
            (3, c * det_oracle(&mw))
        }
        _ => {
            // −a²·P⁴·det M′ with a the y_z² coefficient of q⋆_m
            let z = direction.iter().position(|v| !v.is_zero()).unwrap();
            let mut e = vec![0; h];
            e[z] = 2;
            let a = frame.border()[m - 1].coeff(&e);
            let lead: Vec<Vec<Rat>> = mw[..m - 1].iter().map(|r| r[..m - 1].to_vec()).collect();
            (4, -(&a * &a) * det_oracle(&lead))
        }
    };
    assert_eq!(observed, expected, "leading term of det A(P) in P");
    assert_eq!(leading.as_ref(), Some(&expected));
}

fn case_witnesses() {
    let mut rng = StdRng::seed_from_u64(6);
    // Case 1: q⋆ ≡ 0, c⋆ ≢ 0
    for k in 0..10 {
        let m = 4 + k % 2;
        let h = 5;
        let zs = [0];
        let border: Vec<Poly> = (0..m)
            .map(|_| {
                let mut q = Poly::zero(h);
                for _ in 0..2 {
                    q = &q + &monomial(h, &[rng.gen_range(0..h), rng.gen_range(1..h)], rng.gen_range(-3..=3));
                }
                q
            })
            .collect();
        let mut corner = CubicForm::zero(h);
        corner.add_monomial(0, 0, 0, &int(rng.gen_range(1..=5)));
        for _ in 0..3 {
            corner.add_monomial(rng.gen_range(0..h), rng.gen_range(0..h), rng.gen_range(1..h), &int(rng.gen_range(-3..=3)));
        }
        check_case(&case_split(&mut rng, m, h, &zs, border, corner), WitnessCase::Corner);
    }
    // Case 2: some q⋆_j ≢ 0
    for k in 0..10 {
        let m = 4;
        let h = 6;
        let zs = [0, 1];
        let mut border = vec![Poly::zero(h); m];
        match k % 3 {
            0 => border[m - 1] = var(h, 0).pow(2),
            1 => border[1] = &var(h, 0) * &var(h, 1),
            _ => {
                for q in border.iter_mut() {
                    *q = var(h, 0).pow(2).scale(&int(rng.gen_range(1..=3)));
                }
            }
        }
        for q in border.iter_mut() {
            *q = &*q + &monomial(h, &[rng.gen_range(2..h), rng.gen_range(0..h)], rng.gen_range(-2..=2));
        }
        let mut corner = CubicForm::zero(h);
        for _ in 0..3 {
            corner.add_monomial(rng.gen_range(0..h), rng.gen_range(0..h), rng.gen_range(0..h), &int(rng.gen_range(-3..=3)));
        }
        check_case(&case_split(&mut rng, m, h, &zs, border, corner), WitnessCase::Border);
    }
}

// 7. Hensel lifting, Hilbert symbols and quadric isotropy.

fn ord_p(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut v = n.clone();
    let mut k = 0;
    while !v.is_zero() && (&v % &p).is_zero() {
        v /= &p;
        k += 1;
    }
    k
}

/// Whether `vᵀMv ≡ 0 (mod p^depth)` has a primitive solution, lifting one
/// digit at a time.
fn brute_isotropic(m: &[Vec<i64>], p: i128, depth: u32) -> bool {
    let n = m.len();
    let q = |v: &[i128]| -> i128 {
        let mut acc = 0;
        for i in 0..n {
            for j in 0..n {
                acc += m[i][j] as i128 * v[i] * v[j];
            }
        }
        acc
    };
    let mut digits: Vec<Vec<i128>> = vec![vec![]];
    for _ in 0..n {
        digits = digits.into_iter().flat_map(|v| (0..p).map(move |d| [v.clone(), vec![d]].concat())).collect();
    }
    fn lift(v: &[i128], k: u32, depth: u32, p: i128, digits: &[Vec<i128>], q: &dyn Fn(&[i128]) -> i128) -> bool {
        if k == depth {
            return true;
        }
        let pk = p.pow(k);
        digits.iter().any(|t| {
            let w: Vec<i128> = v.iter().zip(t).map(|(a, b)| a + pk * b).collect();
            q(&w).rem_euclid(pk * p) == 0 && lift(&w, k + 1, depth, p, digits, q)
        })
    }
    digits
        .iter()
        .filter(|v| v.iter().any(|&x| x != 0))
        .any(|v| q(v).rem_euclid(p) == 0 && lift(v, 1, depth, p, &digits, &q))
}

fn random_int_sym(rng: &mut StdRng, n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-bound..=bound);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn int_matrix(m: &[Vec<i64>]) -> Matrix {
    let r: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    Matrix::from_i64(&r)
}

fn random_rat(rng: &mut StdRng) -> Rat {
    let n = rng.gen_range(1..=120) * if rng.gen_bool(0.5) { 1 } else { -1 };
    frac(n, rng.gen_range(1..=40))
}

fn local_machinery() {
    // Hensel: x1³ − 2x2³ from (3, 1) mod 5 up to 5⁶
    let mut f = Poly::zero(2);
    f.add_term(vec![3, 0], int(1));
    f.add_term(vec![0, 3], int(-2));
    let start = ModPSolution { p: 5, k: 1, point: vec![BigInt::from(3), BigInt::from(1)], nonsingular: true };
    let lifted = hensel_lift(&f, &start, 6).unwrap();
    assert_eq!(lifted.k, 6);
    let (x, y) = (&lifted.point[0], &lifted.point[1]);
    let value = x * x * x - BigInt::from(2) * y * y * y;
    assert!(ord_p(&value, 5) >= 6 || value.is_zero(), "lift is not a root mod 5^6");
    assert_eq!((x % 5u32 + 5u32) % 5u32, BigInt::from(3));
    assert_eq!((y % 5u32 + 5u32) % 5u32, BigInt::from(1));

    let mut rng = StdRng::seed_from_u64(7);
    let places = [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(5), Place::Prime(7), Place::Prime(11)];
    for _ in 0..200 {
        let (a, b1, b2) = (random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng));
        for &v in &places {
            let lhs = hilbert_symbol(&a, &(&b1 * &b2), v).unwrap();
            let rhs = hilbert_symbol(&a, &b1, v).unwrap() * hilbert_symbol(&a, &b2, v).unwrap();
            assert_eq!(lhs, rhs, "bimultiplicativity at {v:?}");
        }
    }
    for _ in 0..50 {
        let (a, b) = (random_rat(&mut rng), random_rat(&mut rng));
        let mut rest: BigInt = BigInt::from(2) * (a.numer() * a.denom() * b.numer() * b.denom()).abs();
        let mut prod = hilbert_symbol(&a, &b, Place::Real).unwrap();
        let mut p = 2u64;
        while rest > BigInt::one() {
            if ord_p(&rest, p) > 0 {
                prod *= hilbert_symbol(&a, &b, Place::Prime(p)).unwrap();
                while (&rest % p).is_zero() {
                    rest /= p;
                }
            }
            p += 1;
        }
        assert_eq!(prod, 1, "product formula for ({a}, {b})");
    }

    for k in 0..100 {
        let n = 1 + k % 4;
        let m = random_int_sym(&mut rng, n, 4);
        let mm = int_matrix(&m);
        let det = mm.scale(&int(2)).det().unwrap();
        for p in [2u64, 3, 5] {
            let depth = if det.is_zero() { 1 } else { 2 * ord_p(&det.to_integer(), p) + 3 };
            let expect = brute_isotropic(&m, p as i128, depth);
            assert_eq!(quadric_isotropic(&mm, Place::Prime(p)).unwrap(), expect, "{m:?} at {p}");
        }
    }

    let primes = primes_below(50);
    let mut done = 0;
    while done < 100 {
        let m = random_int_sym(&mut rng, 5, 5);
        let mm = int_matrix(&m);
        if mm.det().unwrap().is_zero() {
            continue;
        }
        done += 1;
        for &p in &primes {
            assert!(quadric_isotropic(&mm, Place::Prime(p)).unwrap(), "rank-5 form anisotropic at {p}");
            let q = |v: &[BigInt]| -> BigInt {
                let mut acc = BigInt::zero();
                for i in 0..5 {
                    for j in 0..5 {
                        acc += BigInt::from(m[i][j]) * &v[i] * &v[j];
                    }
                }
                acc
            };
            match isotropy_witness(&mm, Place::Prime(p), 32).unwrap() {
                Some(IsotropyWitness::Zero(z)) => assert!(mm.quadratic_form(&z).unwrap().is_zero()),
                Some(IsotropyWitness::Hensel(h)) => {
                    let v = lift_isotropic(&mm, &h, 12);
                    let val = q(&v);
                    assert!(val.is_zero() || ord_p(&val, p) >= 12, "witness does not lift at {p}");
                    assert!(v.iter().any(|c| ord_p(c, p) == 0 && !c.is_zero()), "witness is not primitive");
                }
                other => panic!("no witness at {p}: {other:?}"),
            }
        }
    }
}

// 8. The search on x1³ + x2³ − x3³ − x4³.

fn ord5(x: &Rat) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(ord_p(x.numer(), 5) as i64 - ord_p(x.denom(), 5) as i64)
}

fn approximation() {
    let n = 4;
    let c = [
        monomial(n, &[0, 0, 0], 1),
        monomial(n, &[1, 1, 1], 1),
        monomial(n, &[2, 2, 2], -1),
        monomial(n, &[3, 3, 3], -1),
    ]
    .iter()
    .fold(Poly::zero(n), |a, b| &a + b);
    let form = CubicForm::from_poly(&c).unwrap();
    let target = ints(&[1, 2, 1, 2]);
    let eps = frac(1, 100);
    let task = ApproximationTask::new(
        form,
        vec![LocalTarget::prime(5, target.clone(), 3).unwrap(), LocalTarget::real(target.clone(), eps.clone()).unwrap()],
    );
    let out = search(&task).unwrap();
    let x = out.point.clone().expect("no point found at default budgets");
    let cube = |v: &Rat| v * v * v;
    let value = cube(&x.point[0]) + cube(&x.point[1]) - cube(&x.point[2]) - cube(&x.point[3]);
    assert!(value.is_zero(), "C(x) = {value}");
    for (xi, ti) in x.point.iter().zip(&target) {
        let gap = xi - ti;
        assert!(ord5(&gap).is_none_or(|o| o >= 3), "ord_5 gap {:?}", ord5(&gap));
        assert!(gap.abs() < eps, "real gap {gap}");
    }
    assert!(out.transcript.checks.iter().filter(|c| c.required).all(|c| c.holds));
    assert_eq!(cubicwa::par::search(&task).unwrap(), out, "parallel search differs");
}

// 9. Counts against nested loops.

fn ceil_int(x: &Rat) -> i64 {
    x.ceil().to_integer().to_i64().unwrap()
}

fn floor_int(x: &Rat) -> i64 {
    x.floor().to_integer().to_i64().unwrap()
}

/// Candidate integer ranges of each coordinate of `P·region`.
fn hull(region: &Region, p: i64) -> Vec<(i64, i64)> {
    let pr = int(p);
    match region {
        Region::Intervals(iv) => iv.iter().map(|(lo, hi)| (ceil_int(&(&pr * lo)), floor_int(&(&pr * hi)))).collect(),
        Region::Box(b) => b
            .center
            .iter()
            .map(|c| {
                let half = &pr * &b.side / int(2);
                (floor_int(&(&pr * c - &half)), ceil_int(&(&pr * c + &half)))
            })
            .collect(),
    }
}

fn oracle_count(terms: &[(Vec<u32>, i64)], region: &Region, m: i64, p: i64) -> u64 {
    let ranges = hull(region, p);
    let inside = |x: &[i64]| match region {
        Region::Intervals(_) => true,
        Region::Box(b) => x.iter().zip(&b.center).all(|(&xi, ci)| {
            let d = int(xi) - int(p) * ci;
            d.abs() * int(2) < &b.side * int(p)
        }),
    };
    let eval = |x: &[i64]| -> i128 {
        terms
            .iter()
            .map(|(e, c)| *c as i128 * e.iter().zip(x).map(|(&k, &v)| (v as i128).pow(k)).product::<i128>())
            .sum()
    };
    let mut total = 0;
    let mut x: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    if ranges.iter().any(|r| r.0 > r.1) {
        return 0;
    }
    loop {
        if x.iter().all(|v| v % m == 0) && inside(&x) && eval(&x) == 0 {
            total += 1;
        }
        let mut i = x.len();
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            if x[i] < ranges[i].1 {
                x[i] += 1;
                break;
            }
            x[i] = ranges[i].0;
        }
    }
}

fn counting() {
    let psi = &var(2, 0) + &var(2, 1);
    let unit = Region::Intervals(vec![(int(-1), int(1)), (int(-1), int(1))]);
    for (m, expect) in [(1, 21), (2, 11)] {
        let q = CountQuery::new(psi.clone(), unit.clone(), BigInt::from(m), BigInt::from(10));
        assert_eq!(count(&q).unwrap(), BigInt::from(expect));
        assert_eq!(cubicwa::par::count_parallel(&q).unwrap(), BigInt::from(expect));
        assert_eq!(oracle_count(&[(vec![1, 0], 1), (vec![0, 1], 1)], &unit, m, 10), expect as u64);
    }
    let one = CountQuery::new(Poly::one(2), unit.clone(), BigInt::one(), BigInt::from(10));
    assert!(count(&one).unwrap().is_zero());

    let mut rng = StdRng::seed_from_u64(9);
    let mut done = 0;
    while done < 50 {
        let n = rng.gen_range(1..=3);
        let p = rng.gen_range(1..=40);
        let m = rng.gen_range(1..=3);
        let region = if rng.gen_bool(0.5) {
            Region::Intervals(
                (0..n)
                    .map(|_| {
                        let lo = rng.gen_range(-8..=8);
                        (frac(lo, 4), frac(lo + rng.gen_range(0..=8), 4))
                    })
                    .collect(),
            )
        } else {
            let center = (0..n).map(|_| frac(rng.gen_range(-8..=8), 4)).collect();
            Region::Box(AxisBox::new(center, frac(rng.gen_range(1..=7), 8)).unwrap())
        };
        let points: i64 = hull(&region, p).iter().map(|(a, b)| (b - a + 1).max(0)).product();
        if points > 1_000_000 {
            continue;
        }
        done += 1;
        let mut psi = Poly::zero(n);
        for _ in 0..rng.gen_range(0..=4) {
            let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            psi.add_term(e, int(rng.gen_range(-3..=3)));
        }
        let terms: Vec<(Vec<u32>, i64)> =
            psi.terms().map(|(e, c)| (e.clone(), c.to_integer().to_i64().unwrap())).collect();
        let q = CountQuery::new(psi, region.clone(), BigInt::from(m), BigInt::from(p));
        let got = count(&q).unwrap();
        assert_eq!(got, BigInt::from(oracle_count(&terms, &region, m, p)), "query {q:?}");
        if n >= 2 {
            assert_eq!(cubicwa::par::count_parallel(&q).unwrap(), got);
        }
    }
}

// 10. Repeated CLI runs and thread counts.

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_cubicwa"))
        .args(args)
        .env_remove("CUBICWA_BUDGET")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

/// A split cubic with m = 4 and h = 11 y-variables; `y11` repeats `y10`.
fn reduce_fixture() -> String {
    let pairs: Vec<(usize, usize)> = (1..=4).flat_map(|a| (a..=4).map(move |b| (a, b))).collect();
    let mut terms: Vec<String> = pairs.iter().enumerate().map(|(i, (a, b))| format!("x{a}*x{b}*x{}", 5 + i)).collect();
    terms.push("x3*x4*x15".into());
    terms.push("x1*x5^2 - x15^3".into());
    format!("{{\"form\": \"{}\", \"nvars\": 15, \"m\": 4}}", terms.join(" + "))
}

fn determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let swd = write(d, "swd.txt", "x1*x2^2 + x1*x3^2 - 4*x4^3 + 8*x1^2*x4 + 7*x1*x4^2 - 14*x1^3\n");
    let fermat = write(d, "fermat.txt", &(1..=10).map(|i| format!("x{i}^3")).collect::<Vec<_>>().join(" + "));
    let pencil = write(d, "pencil.json", r#"{"rho": 3, "matrices": [[["0", "1", "0"], ["0", "1"], ["0"]], [["1", "0", "0"], ["0", "0"], ["2"]]]}"#);
    let split = write(
        d,
        "split.json",
        r#"{"form": "x1*x2*x5 + x3^2*x6 + x4^2*x7 + x1^2*x7 + x2^2*x6 + x4*x5^2 + x5^3 - x6*x7^2", "nvars": 7, "m": 4}"#,
    );
    let reduce = write(d, "reduce.json", &reduce_fixture());
    let case = write(
        d,
        "case.json",
        r#"{"form": "x1*x2*x5 + x3^2*x6 + x4^2*x5 + x1^2*x6 + x2^2*x6 + x8^3 + x1*x5*x8", "nvars": 8, "m": 4}"#,
    );
    let binary = write(d, "binary.txt", "x1^3 - 2*x2^3");
    let quadric = write(d, "quadric.txt", "x1^2 + x2^2 + x3^2 + x4^2 + x5^2");
    let task = write(
        d,
        "task.json",
        r#"{"form": "x1^3 + x2^3 - x3^3 - x4^3", "targets": [
            {"place": "5", "point": ["1", "2", "1", "2"], "precision": 3},
            {"place": "real", "point": ["1", "2", "1", "2"], "epsilon": "1/100"}]}"#,
    );
    let query = write(
        d,
        "query.json",
        r#"{"poly": "x1^3 + x2^3 - x3^3", "region": {"box": {"center": ["0", "0", "0"], "side": "1/2"}}, "modulus": 1, "scales": [4, 8, 16]}"#,
    );
    let commands: Vec<Vec<&str>> = vec![
        vec!["analyze", "--form", &swd, "--at", "0,0,0,1"],
        vec!["hinv", "--form", &swd, "--height", "2"],
        vec!["pencil", "rank", "--pencil", &pencil],
        vec!["pencil", "witness", "--pencil", &pencil],
        vec!["fibration", "build", "--split", &split],
        vec!["fibration", "rank", "--split", &split],
        vec!["fibration", "reduce", "--split", &reduce],
        vec!["fibration", "case", "--split", &case],
        vec!["local", "report", "--form", &fermat, "--primes", "2,3,5,7,101", "--budget", "20000"],
        vec!["local", "hensel", "--form", &binary, "--prime", "5", "--point", "3,1", "--target", "6"],
        vec!["local", "hilbert", "--a", "-1", "--b", "-1", "--place", "2"],
        vec!["local", "isotropy", "--quadric", &quadric, "--place", "2"],
        vec!["approx", "--task", &task],
        vec!["count", "--query", &query],
    ];
    for cmd in &commands {
        for json in [false, true] {
            let mut base = vec!["--seed", "7"];
            if json {
                base.push("--json");
            }
            let with = |threads: &'static str| {
                let mut a = base.clone();
                a.extend(["--threads", threads]);
                a.extend(cmd.iter().copied());
                a
            };
            let first = run_cli(&with("4"));
            assert!(first.0 != 2, "{cmd:?} rejected its input");
            assert!(!first.1.is_empty(), "{cmd:?} printed nothing");
            assert_eq!(run_cli(&with("4")), first, "{cmd:?} repeated run differs");
            assert_eq!(run_cli(&with("1")), first, "{cmd:?} serial run differs");
        }
    }
}
