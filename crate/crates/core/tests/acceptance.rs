//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kronecker::benjamin_ono::{bo_frequencies, bo_orbit_closure, bo_tail_module, BoActionSpec, BoSequence};
use kronecker::classification::{
    baer_isomorphic, baer_to_qa, build_frequency_from_groups, closures_homeomorphic, decompose_module, is_free,
    orbit_closure, qa_to_baer, BaerType, ClosureFactor, Exponent, SubgroupOfQ, SupernaturalNumber,
};
use kronecker::dynamics::{flow, haar_average, sampled_time_average, time_average, Time, TrigPolynomial};
use kronecker::frequency::{Coordinates, FrequencyRule, FrequencyVector, Generator, SigmaSequence, SigmaTail};
use kronecker::linalg::rational::{frac_mod1, rat};
use kronecker::linalg::{Int, IntVecFin, Rational};
use kronecker::precision::Precision;
use kronecker::resonance::{apply_automorphism, reduce_flow, reduce_vector, resonance_basis};
use kronecker::solenoid::{
    approximating_times, from_coordinates, is_member, orbit_point, product_metric, to_coordinates, SolenoidCoords,
    Weights,
};
use kronecker::torus::TorusPoint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn euclid(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn small_primes(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

fn nth_prime_oracle(n: usize) -> u64 {
    let mut count = 0;
    (2u64..)
        .find(|&m| {
            if (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0) {
                count += 1;
            }
            count == n
        })
        .unwrap()
}

fn valuation(mut n: u64, p: u64) -> u64 {
    let mut e = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

fn big_valuation(n: &Int, p: u64) -> u64 {
    let p = Int::from(p);
    let mut n = n.clone();
    let mut e = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    e
}

fn one_generator(values: &[(Generator, Rational)]) -> Coordinates {
    values.iter().cloned().collect()
}

fn lambda_two_infinite(l: &SupernaturalNumber) -> bool {
    l.exponent(2) == Exponent::Infinite && small_primes(200).iter().skip(1).all(|&p| l.exponent(p).is_zero())
}

// Reduction certificates for random vectors.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for case in 0..500 {
        let len = r.gen_range(1..=8);
        let dense: Vec<i64> = loop {
            let v: Vec<i64> = (0..len).map(|_| r.gen_range(-50..=50)).collect();
            if v.iter().any(|x| *x != 0) {
                break v;
            }
        };
        let nu = IntVecFin::from_dense(&dense);
        let cert = reduce_vector(&nu).map_err(|e| format!("case {case}: {e}"))?;
        let g = dense.iter().fold(0, |acc, &x| euclid(acc, x));
        let target = IntVecFin::unit(1).scale(&Int::from(g));
        ensure!(cert.result == target, "case {case}: result {} for gcd {g}", cert.result);
        ensure!(cert.transform.apply(&nu) == target, "case {case}: Bν ≠ (g,0,…)");
        let inv = cert.transform.inverse();
        ensure!(cert.transform.compose(&inv).is_identity(), "case {case}: B·B⁻¹ ≠ I");
        for j in 1..=len {
            let e = IntVecFin::unit(j);
            ensure!(cert.transform.apply(&inv.apply(&e)) == e, "case {case}: B·B⁻¹ e_{j} ≠ e_{j}");
        }
        ensure!(
            cert.pass_sums.windows(2).all(|w| w[0] > w[1]),
            "case {case}: pass sums {:?} not strictly decreasing",
            cert.pass_sums
        );
        let l1: i64 = dense.iter().map(|x| x.abs()).sum();
        ensure!(cert.pass_sums.first() == Some(&Int::from(l1)), "case {case}: first pass sum");
        ensure!(cert.pass_sums.last() == Some(&Int::from(g)), "case {case}: last pass sum");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("500 vectors in {elapsed:.2?}"))
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    // Bareiss elimination.
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn rank_over_q(rows: &[Vec<i128>], n: usize) -> usize {
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Rational::from_integer(Int::from(x))).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[rank][col];
                for j in 0..n {
                    let d = &f * &a[rank][j];
                    a[i][j] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if n < r {
        return Vec::new();
    }
    let mut out = subsets(n - 1, r);
    for mut s in subsets(n - 1, r - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

// Integer kernels of random rational frequency vectors against brute force.
fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut brute_total = 0usize;
    for case in 0..200 {
        let n = r.gen_range(1..=5);
        let (nums, dens): (Vec<i64>, Vec<i64>) = loop {
            let nums: Vec<i64> = (0..n).map(|_| r.gen_range(-9..=9)).collect();
            if nums.iter().any(|x| *x != 0) {
                break (nums, (0..n).map(|_| r.gen_range(1..=9)).collect());
            }
        };
        let omega: Vec<Rational> = nums.iter().zip(&dens).map(|(&p, &q)| rat(p, q)).collect();
        let l = dens.iter().fold(1, |acc, &q| acc / euclid(acc, q) * q);
        let w: Vec<i128> = nums.iter().zip(&dens).map(|(&p, &q)| (p * (l / q)) as i128).collect();
        let basis = resonance_basis(&FrequencyVector::from_rationals(&omega), n);
        let b: Vec<Vec<i128>> = basis
            .vectors
            .iter()
            .map(|v| v.to_dense(n).iter().map(|x| x.to_i128().expect("small entries")).collect())
            .collect();
        let rank = b.len();
        ensure!(rank == n - 1, "case {case}: rank {rank}, expected {}", n - 1);
        ensure!(rank_over_q(&b, n) == rank, "case {case}: basis is dependent");
        for v in &b {
            ensure!(v.iter().zip(&w).map(|(x, y)| x * y).sum::<i128>() == 0, "case {case}: {v:?} is not a resonance");
        }
        let minors: Vec<(Vec<usize>, i128)> = subsets(n, rank)
            .into_iter()
            .map(|cols| {
                let m: Vec<Vec<i128>> = b.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
                let d = det_i128(&m);
                (cols, d)
            })
            .collect();
        let content = minors.iter().fold(0i64, |acc, (_, d)| euclid(acc, *d as i64));
        ensure!(rank == 0 || content == 1, "case {case}: basis spans a sublattice of index {content}");
        // Coordinates in the basis by Cramer's rule on a nonsingular minor.
        let (cols, det) = minors.iter().find(|(_, d)| *d != 0).cloned().unwrap_or((Vec::new(), 1));
        let solve = |nu: &[i128]| -> Option<Vec<i128>> {
            let coords: Vec<i128> = (0..rank)
                .map(|i| {
                    let m: Vec<Vec<i128>> = (0..rank)
                        .map(|k| if k == i { cols.iter().map(|&c| nu[c]).collect() } else { cols.iter().map(|&c| b[k][c]).collect() })
                        .collect();
                    det_i128(&m)
                })
                .collect();
            if coords.iter().any(|c| c % det != 0) {
                return None;
            }
            let coords: Vec<i128> = coords.iter().map(|c| c / det).collect();
            let back: Vec<i128> = (0..n).map(|j| (0..rank).map(|i| coords[i] * b[i][j]).sum()).collect();
            (back == nu).then_some(coords)
        };
        let pivot = w.iter().position(|x| *x != 0).expect("nonzero ω");
        let others: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
        let mut nu = vec![0i128; n];
        let mut idx = vec![-10i128; others.len()];
        loop {
            for (k, &j) in others.iter().enumerate() {
                nu[j] = idx[k];
            }
            let s: i128 = others.iter().map(|&j| w[j] * nu[j]).sum();
            if s % w[pivot] == 0 && (s / w[pivot]).abs() <= 10 {
                nu[pivot] = -s / w[pivot];
                if nu.iter().any(|x| *x != 0) {
                    brute_total += 1;
                    ensure!(solve(&nu).is_some(), "case {case}: resonance {nu:?} outside the basis span");
                }
            }
            let Some(k) = idx.iter().position(|x| *x < 10) else { break };
            idx[k] += 1;
            for x in &mut idx[..k] {
                *x = -10;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("200 vectors, {brute_total} box resonances, {elapsed:.2?}"))
}

fn recursive_point(a: &SigmaSequence, c: &SolenoidCoords) -> Vec<Rational> {
    let mut out = vec![c.tau.clone()];
    for (k, &n) in c.digits.iter().enumerate() {
        let j = k + 2;
        let prev = out.last().unwrap().clone();
        out.push((prev + rat(n as i64, 1)) / rat(a.term(j) as i64, 1));
    }
    out
}

// Solenoid coordinates, membership of orbit points, approximating times.
fn criterion_3() -> Outcome {
    let sequences = [
        SigmaSequence::constant(2),
        SigmaSequence::increment(),
        SigmaSequence::new(vec![1, 3], SigmaTail::Constant(5)).unwrap(),
    ];
    let mut r = rng(3);
    let weights = Weights::Geometric(0.5);
    for a in &sequences {
        for case in 0..1000 {
            let q = r.gen_range(1..=60);
            let tau = rat(r.gen_range(0..q), q);
            let depth = r.gen_range(2..=8);
            let digits: Vec<u64> = (2..=depth).map(|j| r.gen_range(0..a.term(j))).collect();
            let c = SolenoidCoords { tau, digits };
            let theta = from_coordinates(a, &c).map_err(|e| format!("{case}: {e}"))?;
            let expected = recursive_point(a, &c);
            ensure!(theta.exact_values() == Some(&expected[..]), "{case}: point differs from recursion");
            ensure!(is_member(a, &theta) == Ok(true), "{case}: point not in the solenoid");
            ensure!(to_coordinates(a, &theta).as_ref() == Ok(&c), "{case}: coordinates do not roundtrip");

            let times = approximating_times(a, &c).map_err(|e| e.to_string())?;
            ensure!(times.len() == depth, "{case}: {} times for depth {depth}", times.len());
            for (k, t) in times.iter().enumerate() {
                let k = k + 1;
                let p = orbit_point(a, t, depth);
                let pv = p.exact_values().unwrap();
                ensure!(pv[..k] == expected[..k], "{case}: t_{k} misses the first {k} coordinates");
                let d = product_metric(&weights, &p, &theta).map_err(|e| e.to_string())?.value;
                let tail = 0.5f64.powi(k as i32);
                ensure!(d <= tail, "{case}: residual {d} above {tail} at k = {k}");
            }

            let den = r.gen_range(1..=100);
            let t = rat(r.gen_range(-10_000..=10_000), den);
            let p = orbit_point(a, &t, depth);
            ensure!(is_member(a, &p) == Ok(true), "{case}: orbit point at t = {t} fails membership");
            let products = a.partial_products(depth);
            let direct: Vec<Rational> = products.iter().map(|pj| frac_mod1(&(&t / Rational::from_integer(pj.clone())))).collect();
            ensure!(p.exact_values() == Some(&direct[..]), "{case}: orbit point differs from t/P_j");
        }
    }
    Ok("3 sequences × 1000 coordinates, 1000 orbit points each".into())
}

// Decay of time averages for non-resonant characters; resonant control.
fn criterion_4() -> Outcome {
    let precision = Precision::default();
    let fv = FrequencyVector::Finite(vec![
        one_generator(&[(Generator::one(), rat(1, 1))]),
        one_generator(&[(Generator::sqrt_prime(2), rat(1, 1))]),
        one_generator(&[(Generator::sqrt_prime(3), rat(1, 1))]),
    ]);
    let origin = TorusPoint::origin(3);
    let mut worst: f64 = 0.0;
    for dense in [[1, -1, 0], [2, 0, -1], [1, 1, 1]] {
        let nu = IntVecFin::from_dense(&dense);
        let lambda = dense[0] as f64 + dense[1] as f64 * 2f64.sqrt() + dense[2] as f64 * 3f64.sqrt();
        for p in [TrigPolynomial::cosine(&nu, Rational::one()), TrigPolynomial::sine(&nu, Rational::one())] {
            ensure!(haar_average(&p).is_zero(), "Haar average of a character is not 0");
            for t in [1e2, 1e3, 1e4] {
                let avg = time_average(&fv, &p, &origin, t, precision).map_err(|e| e.to_string())?;
                let bound = 2.0 / (t * lambda.abs());
                ensure!(avg.value.abs() <= bound + 1e-12, "ν = {dense:?}, T = {t}: |{}| > {bound}", avg.value);
                worst = worst.max(avg.value.abs() / bound);
                if t == 1e4 {
                    ensure!(avg.value.abs() <= 1e-3, "ν = {dense:?}: T = 1e4 average {} not near 0", avg.value);
                }
            }
            let closed = time_average(&fv, &p, &origin, 100.0, precision).unwrap().value;
            let sampled = sampled_time_average(&fv, |x| p.evaluate(x), &origin, 3, 100.0, 40_000, precision)
                .map_err(|e| e.to_string())?;
            ensure!((closed - sampled).abs() < 1e-6, "ν = {dense:?}: closed form {closed} vs quadrature {sampled}");
        }
    }
    let diag = FrequencyVector::from_rationals(&[rat(1, 1), rat(1, 1)]);
    let p = TrigPolynomial::cosine(&IntVecFin::from_dense(&[1, -1]), Rational::one());
    for t in [1e-3, 1.0, 1e2, 1e3, 1e4, 1e6] {
        let avg = time_average(&diag, &p, &TorusPoint::origin(2), t, precision).map_err(|e| e.to_string())?;
        ensure!(avg.value == 1.0 && avg.imaginary == 0.0, "resonant control at T = {t}: {}", avg.value);
    }
    Ok(format!("largest |average|/bound = {worst:.3}"))
}

fn random_sequence(r: &mut ChaCha8Rng) -> SigmaSequence {
    let mut prefix = vec![1];
    for _ in 0..r.gen_range(0..4) {
        prefix.push(r.gen_range(2..=30));
    }
    let tail = match r.gen_range(0..4) {
        0 => SigmaTail::Constant(r.gen_range(2..=12)),
        1 => SigmaTail::Periodic((0..r.gen_range(1..=3)).map(|_| r.gen_range(2..=12)).collect()),
        2 => SigmaTail::Increment,
        _ => SigmaTail::OddIndexedPrimes,
    };
    SigmaSequence::new(prefix, tail).unwrap()
}

/// `Λ_p` of `Q(a)` from the definition of the sequence.
fn lambda_oracle(a: &SigmaSequence, p: u64) -> Exponent {
    let head: u64 = a.prefix().iter().map(|&x| valuation(x, p)).sum();
    let infinite = match a.tail() {
        SigmaTail::Constant(c) => c % p == 0,
        SigmaTail::Periodic(period) => period.iter().any(|x| x % p == 0),
        SigmaTail::Increment => true,
        SigmaTail::OddIndexedPrimes => false,
        SigmaTail::PrimePowers(_) => unreachable!(),
    };
    if infinite {
        return Exponent::Infinite;
    }
    let odd_indexed = matches!(a.tail(), SigmaTail::OddIndexedPrimes)
        && (1..).step_by(2).map(nth_prime_oracle).take_while(|&q| q <= p).any(|q| q == p);
    Exponent::Finite(head + u64::from(odd_indexed))
}

fn random_lambda(r: &mut ChaCha8Rng) -> SupernaturalNumber {
    let defaults = [Exponent::ZERO, Exponent::Finite(1), Exponent::Finite(2), Exponent::Infinite];
    let mut l = SupernaturalNumber::with_defaults(defaults[r.gen_range(0..4)], defaults[r.gen_range(0..4)]);
    for &p in &small_primes(40) {
        if r.gen_bool(0.3) {
            l.set(p, defaults[r.gen_range(0..4)]);
        }
    }
    if l.is_finite_product() {
        l.set(small_primes(40)[r.gen_range(0..12)], Exponent::Infinite);
    }
    l
}

// Baer types: roundtrips, the factorial/prime-ratio pair, reciprocals.
fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let primes = small_primes(60);
    for case in 0..50 {
        let a = random_sequence(&mut r);
        let t = qa_to_baer(&a).map_err(|e| e.to_string())?;
        for &p in &primes {
            ensure!(t.lambda().exponent(p) == lambda_oracle(&a, p), "sequence {case}: Λ_{p} differs");
        }
        let back = qa_to_baer(&baer_to_qa(&t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(baer_isomorphic(&t, &back), "sequence {case}: qa → baer → qa changes the type");
    }
    for case in 0..50 {
        let t = BaerType::with_lambda(random_lambda(&mut r));
        let a = baer_to_qa(&t).map_err(|e| e.to_string())?;
        let back = qa_to_baer(&a).map_err(|e| e.to_string())?;
        ensure!(baer_isomorphic(&t, &back), "type {case}: baer → qa → baer changes the type");
    }

    let factorial = FrequencyVector::Solenoid { generator: Generator::one(), a: SigmaSequence::increment() };
    let ratio = FrequencyVector::Rule { generator: Generator::one(), rule: FrequencyRule::PrimeRatio };
    let reciprocal = FrequencyVector::Rule { generator: Generator::one(), rule: FrequencyRule::Reciprocal };
    let lambda_of = |fv: &FrequencyVector| -> Result<SupernaturalNumber, String> {
        let md = decompose_module(fv, 64).map_err(|e| e.to_string())?;
        ensure!(md.components.len() == 1, "expected one component");
        Ok(md.components[0].baer.lambda().clone())
    };
    let all_infinite = SupernaturalNumber::uniform(Exponent::Infinite);
    let lf = lambda_of(&factorial)?;
    let lr = lambda_of(&ratio)?;
    let lq = lambda_of(&reciprocal)?;
    ensure!(lf == all_infinite, "factorial frequencies: Λ = {lf}");
    ensure!(lq == all_infinite, "reciprocal frequencies: Λ = {lq}");
    for (k, &p) in primes.iter().enumerate() {
        let expected = if k % 2 == 0 { Exponent::Finite(1) } else { Exponent::ZERO };
        ensure!(lr.exponent(p) == expected, "prime-ratio frequencies: Λ_{p} = {:?}", lr.exponent(p));
    }
    ensure!(
        !closures_homeomorphic(&factorial, &ratio, 64).map_err(|e| e.to_string())?,
        "factorial and prime-ratio frequencies classified as isomorphic"
    );
    ensure!(
        closures_homeomorphic(&factorial, &reciprocal, 64).map_err(|e| e.to_string())?,
        "factorial and reciprocal frequencies should both give ℚ"
    );
    ensure!(
        baer_isomorphic(&BaerType::with_lambda(lq), &BaerType::with_lambda(all_infinite)),
        "reciprocal module is not ℚ"
    );

    // Finite truncations, classified as explicit cyclic groups, against direct valuations.
    let mut previous = 0;
    for n in [4usize, 8, 16, 24] {
        let mut fact = Int::one();
        let mut lcm = Int::one();
        let mut values_f = Vec::new();
        let mut values_q = Vec::new();
        let mut values_r = Vec::new();
        for j in 1..=n {
            fact *= Int::from(j);
            lcm = num_integer::Integer::lcm(&lcm, &Int::from(j));
            values_f.push(Rational::new(Int::one(), fact.clone()));
            values_q.push(rat(1, j as i64));
            values_r.push(rat(nth_prime_oracle(2 * j) as i64, nth_prime_oracle(2 * j - 1) as i64));
        }
        let types: Vec<SupernaturalNumber> = [values_f, values_q, values_r]
            .iter()
            .map(|v| lambda_of(&FrequencyVector::from_rationals(v)))
            .collect::<Result<_, _>>()?;
        let odd_primes: Vec<u64> = (1..=n).map(|j| nth_prime_oracle(2 * j - 1)).collect();
        for &p in &primes {
            ensure!(types[0].exponent(p) == Exponent::Finite(big_valuation(&fact, p)), "1/j!, N = {n}, p = {p}");
            ensure!(types[1].exponent(p) == Exponent::Finite(big_valuation(&lcm, p)), "1/j, N = {n}, p = {p}");
            let e = u64::from(odd_primes.contains(&p));
            ensure!(types[2].exponent(p) == Exponent::Finite(e), "prime ratios, N = {n}, p = {p}");
        }
        let Exponent::Finite(e2) = types[0].exponent(2) else { unreachable!() };
        ensure!(e2 > previous, "2-adic exponent of 1/N! does not grow");
        previous = e2;
    }
    Ok("100 roundtrips; ℚ vs odd-indexed primes; truncations agree".into())
}

// Product construction from groups and recovery of the groups.
fn criterion_6() -> Outcome {
    let groups = [SubgroupOfQ::integers(), SubgroupOfQ::Sequence(SigmaSequence::constant(2))];
    let fv = build_frequency_from_groups(&groups).map_err(|e| e.to_string())?;
    let md = decompose_module(&fv, 64).map_err(|e| e.to_string())?;
    ensure!(md.components.len() == 2, "{} components", md.components.len());
    let closure = orbit_closure(&fv, 64).map_err(|e| e.to_string())?;
    match closure.factors() {
        [ClosureFactor::Circle, ClosureFactor::Solenoid(l)] if lambda_two_infinite(l) => {}
        other => return Err(format!("closure {other:?}")),
    }

    let mut r = rng(6);
    for case in 0..20 {
        let len = r.gen_range(1..=4);
        let groups: Vec<SubgroupOfQ> = (0..len)
            .map(|_| {
                if r.gen_bool(0.4) {
                    SubgroupOfQ::Cyclic(rat(r.gen_range(1..=40), r.gen_range(1..=40)))
                } else {
                    SubgroupOfQ::Sequence(random_sequence(&mut r))
                }
            })
            .collect();
        let fv = build_frequency_from_groups(&groups).map_err(|e| e.to_string())?;
        let md = decompose_module(&fv, 64).map_err(|e| e.to_string())?;
        ensure!(md.components.len() == len, "case {case}: {} components for {len} groups", md.components.len());
        let (gens, rows) = fv.coordinate_matrix(48);
        for (g, c) in groups.iter().zip(&md.components) {
            let expected = g.baer_type().map_err(|e| e.to_string())?;
            ensure!(baer_isomorphic(&c.baer, &expected), "case {case}: component type differs");
            let recovered = SubgroupOfQ::from_baer(&c.baer).and_then(|s| s.baer_type()).map_err(|e| e.to_string())?;
            ensure!(baer_isomorphic(&recovered, &expected), "case {case}: recovered group differs");
            ensure!(is_free(&c.baer) == matches!(g, SubgroupOfQ::Cyclic(_)), "case {case}: freeness");
            if let Some(k) = gens.iter().position(|h| *h == c.generator) {
                for x in rows[k].iter().filter(|x| !x.is_zero()) {
                    ensure!(g.contains(x, 64), "case {case}: coordinate {x} outside its group");
                }
            }
        }
    }
    Ok("ℤ ⊕ ℤ[1/2] gives circle × 2-adic solenoid; 20 group lists recovered".into())
}

// Benjamin–Ono frequencies with geometric actions and the zero control.
fn criterion_7() -> Outcome {
    let beta = Generator::opaque("beta", "0.5772156649015329").map_err(|e| e.to_string())?;
    let s = BoSequence::geometric(Rational::one(), rat(1, 2)).map_err(|e| e.to_string())?;
    let spec = BoActionSpec::new(beta.clone(), s.clone()).map_err(|e| e.to_string())?;
    let closure = bo_orbit_closure(&spec, 40).map_err(|e| e.to_string())?;
    match closure.factors() {
        [ClosureFactor::Circle, ClosureFactor::Solenoid(l)] if lambda_two_infinite(l) => {}
        other => return Err(format!("closure {other:?}")),
    }
    let generic = orbit_closure(&FrequencyVector::Bo(spec.clone()), 40).map_err(|e| e.to_string())?;
    ensure!(generic == closure, "generic classification disagrees: {generic:?}");

    let half = rat(1, 2);
    let power = |k: usize| num_traits::pow(half.clone(), k);
    for n in 0..=40 {
        let g = s.tail_sum(n);
        ensure!(g == power(n), "g_{n} = {g}, expected 2^-{n}");
        let sigma_next = s.sigma(n + 1);
        let sigma_n = if n == 0 { Rational::zero() } else { s.sigma(n) };
        ensure!(g == sigma_next - sigma_n, "g_{n} ≠ σ_{} − σ_{n}", n + 1);
    }
    for j in 1..=40 {
        let head: Rational = (1..=60).map(|k| rat(j.min(k) as i64, 1) * power(k)).sum();
        let oracle = head + rat(j as i64, 1) * power(60);
        ensure!(s.sigma(j) == oracle, "σ_{j} differs from the 60-term sum");
    }
    let fv = bo_frequencies(&spec, 12);
    for j in 1..=12usize {
        let expected: Coordinates = [
            (Generator::one(), rat((j * j) as i64, 1)),
            (beta.clone(), rat(-2, 1) * s.sigma(j)),
        ]
        .into_iter()
        .collect();
        ensure!(fv.coordinates(j) == expected, "ω_{j} is not j² − 2βσ_{j}");
    }

    let zero = BoActionSpec::new(beta, BoSequence::zero()).map_err(|e| e.to_string())?;
    let report = bo_tail_module(&zero, 40).map_err(|e| e.to_string())?;
    ensure!(report.r_type.is_none(), "zero actions give a nonzero β-component");
    ensure!(report.closure.factors() == [ClosureFactor::Circle], "zero actions: closure {:?}", report.closure);
    let md = decompose_module(&FrequencyVector::Bo(zero), 40).map_err(|e| e.to_string())?;
    ensure!(md.components.len() == 1 && md.is_free(), "zero actions: module is not ℤ");
    ensure!(
        baer_isomorphic(&md.components[0].baer, &BaerType::cyclic(&Rational::one()).unwrap()),
        "zero actions: module is not ℤ"
    );
    Ok("circle × 2-adic solenoid; σ and g exact to n = 40; zero control ℤ".into())
}

// Conjugacy of the flow with its reduced form.
fn criterion_8() -> Outcome {
    let omega = [rat(1, 1), rat(1, 2), rat(1, 3)];
    let fv = FrequencyVector::from_rationals(&omega);
    let rf = reduce_flow(&fv, 3);
    ensure!(rf.zero_block == 2, "zero block {}", rf.zero_block);
    ensure!(rf.transform.verify_inverse(), "A is not invertible over ℤ");
    let a_omega = rf.transform.apply_rational(&omega).map_err(|e| e.to_string())?;
    for (j, x) in a_omega.iter().enumerate() {
        let c = rf.reduced.coordinates(j + 1);
        ensure!(c.get(&Generator::one()).cloned().unwrap_or_default() == *x, "reduced ω_{} ≠ (Aω)_{}", j + 1, j + 1);
    }
    ensure!(a_omega[0].is_zero() && a_omega[1].is_zero() && !a_omega[2].is_zero(), "Aω = {a_omega:?}");
    let reduced_kernel = resonance_basis(&rf.reduced, 3);
    ensure!(reduced_kernel.rank() == 2, "reduced resonance rank {}", reduced_kernel.rank());

    let mut r = rng(8);
    let precision = Precision::default();
    for case in 0..100 {
        let t = rat(r.gen_range(-5000..=5000), r.gen_range(1..=97));
        let theta0 = TorusPoint::exact((0..3).map(|_| rat(r.gen_range(0..60), r.gen_range(1..=60))).collect());
        let moved = flow(&fv, &theta0, &Time::Turns(t.clone()), 3, precision).map_err(|e| e.to_string())?;
        let lhs = apply_automorphism(&rf.transform, &moved).map_err(|e| e.to_string())?;
        let start = apply_automorphism(&rf.transform, &theta0).map_err(|e| e.to_string())?;
        let rhs = flow(&rf.reduced, &start, &Time::Turns(t.clone()), 3, precision).map_err(|e| e.to_string())?;
        ensure!(lhs.is_exact() && rhs.is_exact(), "case {case}: inexact evaluation");
        ensure!(lhs == rhs, "case {case}: A∘Φ^t ≠ Φ̃^t∘A at t = {t}");
        let direct: Vec<Rational> =
            theta0.exact_values().unwrap().iter().zip(&omega).map(|(x, w)| frac_mod1(&(x + &t * w))).collect();
        ensure!(moved.exact_values() == Some(&direct[..]), "case {case}: flow differs from θ0 + tω");
    }
    Ok("100 rational times; zero block 2".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("reduction certificates", criterion_1),
        ("resonance kernels", criterion_2),
        ("solenoid geometry", criterion_3),
        ("equidistribution", criterion_4),
        ("baer classification", criterion_5),
        ("groups to closures", criterion_6),
        ("benjamin-ono", criterion_7),
        ("conjugacy", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{detail}] {elapsed:.2?}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{detail}] {elapsed:.2?}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
