//! Oracle-equivalence and invariant suites, runnable from the CLI.
//!
//! Every suite is deterministic (fixed RNG seeds) and checks an
//! implementation path against an independent oracle or an algebraic law:
//! brute-force powering against the eigenvalue-order algorithm, the
//! coefficient-grid enumeration against cyclotomic products, tuple-span
//! subspace counting against the echelon neighbor enumeration, and the
//! textbook identities for valuations and characteristic polynomials.

use crate::building::{self, LatticeVertex};
use crate::exactnum::{relevant_valuations, ExtInt, Field, FpPoly, RationalFunction, Scalar, Valuation};
use crate::grouporder::{self, BruteForceOutcome, OrderValue};
use crate::kronecker;
use crate::linalg::SquareMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl SuiteResult {
    fn pass(name: &'static str, detail: String) -> Self {
        SuiteResult {
            name,
            pass: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        SuiteResult {
            name,
            pass: false,
            detail,
        }
    }
}

/// Run every suite in order, invoking the callback as each one finishes.
pub fn run_all(mut progress: impl FnMut(&SuiteResult)) -> Vec<SuiteResult> {
    let mut results = Vec::new();
    for suite in [
        valuation_suite,
        scalar_canonical_suite,
        char_poly_suite,
        cayley_hamilton_suite,
        kronecker_suite,
        order_oracle_suite,
        unipotent_bound_suite,
        closure_suite,
        building_suite,
        action_suite,
    ] {
        let r = suite();
        progress(&r);
        results.push(r);
    }
    results
}

fn rand_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-60i64..=60);
    let den = rng.gen_range(1i64..=60);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn rand_nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let r = rand_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn rand_fp_poly(rng: &mut ChaCha8Rng, p: u64, max_deg: usize) -> FpPoly {
    let deg = rng.gen_range(0..=max_deg);
    let coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
    FpPoly::from_coeffs(p, coeffs)
}

fn rand_nonzero_ratfunc(rng: &mut ChaCha8Rng, p: u64) -> RationalFunction {
    loop {
        let num = rand_fp_poly(rng, p, 3);
        let den = loop {
            let d = rand_fp_poly(rng, p, 3);
            if !d.is_zero() {
                break d;
            }
        };
        if num.is_zero() {
            continue;
        }
        return RationalFunction::new(num, den).expect("nonzero denominator");
    }
}

/// nu(xy) = nu(x) + nu(y) and the ultrametric inequality with its equality
/// case, 500 random pairs per valuation kind.
pub fn valuation_suite() -> SuiteResult {
    const NAME: &str = "valuation multiplicativity + ultrametric";
    type Sampler = Box<dyn Fn(&mut ChaCha8Rng) -> Scalar>;
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let kinds: Vec<(Valuation, Sampler)> = vec![
        (
            Valuation::p_adic(2u32).expect("prime"),
            Box::new(|rng: &mut ChaCha8Rng| Scalar::Rational(rand_nonzero_rational(rng))),
        ),
        (
            Valuation::pi_adic(FpPoly::t(3)).expect("irreducible"),
            Box::new(|rng: &mut ChaCha8Rng| Scalar::Function(rand_nonzero_ratfunc(rng, 3))),
        ),
        (
            Valuation::degree(2).expect("prime"),
            Box::new(|rng: &mut ChaCha8Rng| Scalar::Function(rand_nonzero_ratfunc(rng, 2))),
        ),
    ];
    let mut checked = 0usize;
    for (valuation, sample) in &kinds {
        for _ in 0..500 {
            let x = sample(&mut rng);
            let y = sample(&mut rng);
            let vx = valuation.valuate(&x).expect("carrier");
            let vy = valuation.valuate(&y).expect("carrier");
            let product = x.mul(&y).expect("same field");
            let vxy = valuation.valuate(&product).expect("carrier");
            let (fx, fy) = (vx.finite().unwrap(), vy.finite().unwrap());
            if vxy != ExtInt::Finite(fx + fy) {
                return SuiteResult::fail(
                    NAME,
                    format!("nu(xy) != nu(x)+nu(y) for x={x}, y={y} at {valuation}"),
                );
            }
            let sum = x.add(&y).expect("same field");
            let vsum = valuation.valuate(&sum).expect("carrier");
            let min = fx.min(fy);
            let ok = match vsum {
                ExtInt::Finite(v) => v >= min,
                ExtInt::Infinity => true,
            };
            if !ok {
                return SuiteResult::fail(
                    NAME,
                    format!("ultrametric violated for x={x}, y={y} at {valuation}"),
                );
            }
            if fx != fy && vsum != ExtInt::Finite(min) {
                return SuiteResult::fail(
                    NAME,
                    format!("ultrametric equality case violated for x={x}, y={y}"),
                );
            }
            checked += 1;
        }
    }
    SuiteResult::pass(NAME, format!("{checked} pairs across 3 valuation kinds"))
}

/// Canonical form idempotence, and over Q the three-way equivalence of
/// integrality notions, 200 samples each.
pub fn scalar_canonical_suite() -> SuiteResult {
    const NAME: &str = "canonical form idempotence + integrality equivalence";
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..200 {
        let r = rand_rational(&mut rng);
        let rebuilt = BigRational::new(r.numer().clone(), r.denom().clone());
        if rebuilt != r {
            return SuiteResult::fail(NAME, format!("re-reducing {r} changed it"));
        }
        let f = rand_nonzero_ratfunc(&mut rng, 5);
        let rebuilt = RationalFunction::new(f.numerator().clone(), f.denominator().clone())
            .expect("nonzero denominator");
        if rebuilt != f {
            return SuiteResult::fail(NAME, format!("re-reducing {f} changed it"));
        }
    }
    for _ in 0..200 {
        let x = Scalar::Rational(rand_rational(&mut rng));
        let integral_everywhere = relevant_valuations(std::slice::from_ref(&x))
            .expect("one field")
            .iter()
            .all(|v| v.in_valuation_ring(&x).expect("carrier"));
        if x.is_integer() != integral_everywhere {
            return SuiteResult::fail(
                NAME,
                format!("integer test and valuation test disagree on {x}"),
            );
        }
    }
    SuiteResult::pass(NAME, "200 rationals, 200 rational functions".into())
}

fn rand_fp_matrix(rng: &mut ChaCha8Rng, p: u64, d: usize) -> SquareMatrix {
    let field = Field::Fp(p);
    loop {
        let entries: Vec<Scalar> = (0..d * d)
            .map(|_| Scalar::from_integer(&field, rng.gen_range(0..p) as i64))
            .collect();
        let m = SquareMatrix::new(field, d, entries).expect("shape");
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

fn rand_matrix_over(rng: &mut ChaCha8Rng, field: &Field, d: usize) -> SquareMatrix {
    let entries: Vec<Scalar> = (0..d * d)
        .map(|_| match field {
            Field::Q => Scalar::Rational(rand_rational(rng)),
            Field::Fp(p) => Scalar::from_integer(field, rng.gen_range(0..*p) as i64),
            Field::FpT(p) => {
                // mostly small polynomials, occasionally a fraction
                if rng.gen_bool(0.3) {
                    Scalar::Function(rand_nonzero_ratfunc(rng, *p))
                } else {
                    Scalar::Function(RationalFunction::from_poly(rand_fp_poly(rng, *p, 2)))
                }
            }
        })
        .collect();
    SquareMatrix::new(*field, d, entries).expect("shape")
}

fn poly_mul_scalars(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let field = a[0].field();
    let mut out = vec![Scalar::zero(&field); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let term = ai.mul(bj).expect("same field");
            out[i + j] = out[i + j].add(&term).expect("same field");
        }
    }
    out
}

/// Trace and constant-term identities for 500 random matrices per field
/// (d <= 5), determinant multiplicativity, and the block-triangular product
/// law.
pub fn char_poly_suite() -> SuiteResult {
    const NAME: &str = "char poly identities + det multiplicativity";
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let fields = [Field::Q, Field::Fp(5), Field::FpT(3)];
    for field in &fields {
        for i in 0..500 {
            let d = rng.gen_range(1..=5);
            // keep function-field matrices small; their arithmetic is heavy
            let d = if *field == Field::FpT(3) { d.min(3) } else { d };
            let m = rand_matrix_over(&mut rng, field, d);
            let cp = m.char_poly();
            if cp.len() != d + 1 || !cp[d].is_one() {
                return SuiteResult::fail(NAME, format!("char poly not monic, case {i}"));
            }
            let det = m.determinant();
            let expected_const = if d % 2 == 0 { det.clone() } else { det.neg() };
            if cp[0] != expected_const {
                return SuiteResult::fail(
                    NAME,
                    format!("constant term != (-1)^d det over {field}, case {i}"),
                );
            }
            if cp[d - 1] != m.trace().neg() {
                return SuiteResult::fail(
                    NAME,
                    format!("X^(d-1) coefficient != -trace over {field}, case {i}"),
                );
            }
        }
    }
    // det(AB) = det(A) det(B)
    for i in 0..100 {
        let d = rng.gen_range(1..=4);
        let a = rand_matrix_over(&mut rng, &Field::Q, d);
        let b = rand_matrix_over(&mut rng, &Field::Q, d);
        let lhs = a.mul(&b).expect("shape").determinant();
        let rhs = a.determinant().mul(&b.determinant()).expect("field");
        if lhs != rhs {
            return SuiteResult::fail(NAME, format!("det not multiplicative, case {i}"));
        }
    }
    // char poly of a block-triangular matrix = product of block char polys
    for i in 0..50 {
        let a = rand_matrix_over(&mut rng, &Field::Q, 2);
        let c = rand_matrix_over(&mut rng, &Field::Q, 2);
        let field = Field::Q;
        let mut entries = vec![Scalar::zero(&field); 16];
        for r in 0..2 {
            for s in 0..2 {
                entries[r * 4 + s] = a.entry(r, s).clone();
                entries[r * 4 + (s + 2)] = Scalar::Rational(rand_rational(&mut rng));
                entries[(r + 2) * 4 + (s + 2)] = c.entry(r, s).clone();
            }
        }
        let block = SquareMatrix::new(field, 4, entries).expect("shape");
        let product = poly_mul_scalars(&a.char_poly(), &c.char_poly());
        if block.char_poly() != product {
            return SuiteResult::fail(NAME, format!("block-triangular law failed, case {i}"));
        }
    }
    SuiteResult::pass(NAME, "500 per field + 100 products + 50 block cases".into())
}

/// Substituting a matrix into its own characteristic polynomial gives zero,
/// d <= 4, all three fields.
pub fn cayley_hamilton_suite() -> SuiteResult {
    const NAME: &str = "Cayley-Hamilton";
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let fields = [Field::Q, Field::Fp(3), Field::FpT(2)];
    let mut checked = 0usize;
    for field in &fields {
        for d in 1..=4usize {
            let samples = if *field == Field::FpT(2) { 5 } else { 15 };
            for _ in 0..samples {
                let m = rand_matrix_over(&mut rng, field, d);
                let cp = m.char_poly();
                if !m.eval_poly(&cp).expect("same field").is_zero_matrix() {
                    return SuiteResult::fail(
                        NAME,
                        format!("chi(A) != 0 for a {d}x{d} matrix over {field}"),
                    );
                }
                checked += 1;
            }
        }
    }
    SuiteResult::pass(NAME, format!("{checked} matrices across 3 fields"))
}

/// The two Kronecker enumerations agree for d <= 5, and the set sizes for
/// d <= 3 are the frozen counts 2, 6, 10.
pub fn kronecker_suite() -> SuiteResult {
    const NAME: &str = "kronecker products == bounds";
    let expected_counts = [2usize, 6, 10];
    for d in 1..=5usize {
        let products = match kronecker::enumerate_by_products(d) {
            Ok(s) => s,
            Err(e) => return SuiteResult::fail(NAME, format!("products({d}): {e}")),
        };
        let bounds = match kronecker::enumerate_by_bounds(d) {
            Ok(s) => s,
            Err(e) => return SuiteResult::fail(NAME, format!("bounds({d}): {e}")),
        };
        if !products.same_set(&bounds) {
            return SuiteResult::fail(
                NAME,
                format!(
                    "degree {d}: products found {} polys, bounds found {}",
                    products.count, bounds.count
                ),
            );
        }
        if d <= 3 && products.count != expected_counts[d - 1] {
            return SuiteResult::fail(
                NAME,
                format!("degree {d}: count {} != {}", products.count, expected_counts[d - 1]),
            );
        }
    }
    // factorization round trip on random products
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let table = kronecker::CyclotomicTable::with_default_bound();
    let indices: Vec<u64> = table.indices().filter(|&m| kronecker::euler_phi(m) <= 8).collect();
    for _ in 0..100 {
        let mut poly = crate::linalg::MonicIntPoly::one();
        let mut chosen: Vec<(u64, u32)> = Vec::new();
        while poly.degree() < 8 {
            let m = indices[rng.gen_range(0..indices.len())];
            let phi = table.get(m).expect("table");
            if poly.degree() + phi.degree() > 8 {
                break;
            }
            poly = poly.mul(phi);
            match chosen.iter_mut().find(|(i, _)| *i == m) {
                Some((_, e)) => *e += 1,
                None => chosen.push((m, 1)),
            }
            if rng.gen_bool(0.3) {
                break;
            }
        }
        if poly.degree() == 0 {
            continue;
        }
        chosen.sort_unstable();
        let recovered =
            kronecker::cyclotomic_factorization(&poly, &table).expect("product of cyclotomics");
        if recovered != chosen {
            return SuiteResult::fail(
                NAME,
                format!("factorization of {poly} returned {recovered:?}, expected {chosen:?}"),
            );
        }
    }
    SuiteResult::pass(NAME, "degrees 1..=5 identical + 100 factorization round trips".into())
}

fn lcm_list(values: &[BigUint]) -> BigUint {
    values
        .iter()
        .fold(BigUint::one(), |acc, v| &acc / acc.gcd(v) * v)
}

/// The eigenvalue-order algorithm equals brute-force powering on 200 random
/// invertible matrices for each (d, p) in {2,3,4} x {2,3,5}, and the order
/// always divides k * p^l.
pub fn order_oracle_suite() -> SuiteResult {
    const NAME: &str = "order algorithm vs brute force";
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut checked = 0usize;
    for d in [2usize, 3, 4] {
        for p in [2u64, 3, 5] {
            for _ in 0..200 {
                let m = rand_fp_matrix(&mut rng, p, d);
                let result = grouporder::order_char_p(&m).expect("invertible over F_p");
                let order = match &result.order {
                    OrderValue::Finite(n) => n.clone(),
                    OrderValue::Infinite => {
                        return SuiteResult::fail(NAME, "finite-field matrix not torsion".into())
                    }
                };
                let k = lcm_list(result.eigenvalue_orders.as_ref().expect("char p"));
                let bound = &k * result.unipotent_exponent.as_ref().expect("char p");
                if !(&bound % &order).is_zero() {
                    return SuiteResult::fail(
                        NAME,
                        format!("order {order} does not divide k*p^l = {bound}"),
                    );
                }
                let cap = (&bound * BigUint::from(10u32))
                    .to_u64()
                    .expect("desk scale");
                match grouporder::brute_force_order(&m, cap).expect("invertible") {
                    BruteForceOutcome::Order(b) => {
                        if BigUint::from(b) != order {
                            return SuiteResult::fail(
                                NAME,
                                format!("brute force found {b}, algorithm found {order} (d={d}, p={p})"),
                            );
                        }
                    }
                    BruteForceOutcome::CapExceeded(_) => {
                        return SuiteResult::fail(
                            NAME,
                            format!("brute force exceeded cap {cap} but order is {order}"),
                        )
                    }
                }
                checked += 1;
            }
        }
    }
    SuiteResult::pass(NAME, format!("{checked} matrices, zero mismatches"))
}

/// The d x d Jordan block with eigenvalue 1 over F_p has order exactly the
/// least p-power >= d, for d <= 6, p in {2, 3, 5}.
pub fn unipotent_bound_suite() -> SuiteResult {
    const NAME: &str = "unipotent Jordan block bound";
    for p in [2u64, 3, 5] {
        for d in 1..=6usize {
            let field = Field::Fp(p);
            let mut entries = vec![Scalar::zero(&field); d * d];
            for i in 0..d {
                entries[i * d + i] = Scalar::one(&field);
                if i + 1 < d {
                    entries[i * d + i + 1] = Scalar::one(&field);
                }
            }
            let jordan = SquareMatrix::new(field, d, entries).expect("shape");
            let expected = grouporder::unipotent_exponent(p, d);
            let result = grouporder::order_char_p(&jordan).expect("invertible");
            if result.order != OrderValue::Finite(expected.clone()) {
                return SuiteResult::fail(
                    NAME,
                    format!("Jordan block d={d}, p={p}: order {} != {expected}", result.order),
                );
            }
        }
    }
    SuiteResult::pass(NAME, "d <= 6, p in {2,3,5}, exact".into())
}

/// Frozen closure orders: SL_2(F_3) at 24 and the signed 3x3 permutations
/// at 48; every element satisfies element^(group order) = I.
pub fn closure_suite() -> SuiteResult {
    const NAME: &str = "group closure frozen orders";
    let f3 = Field::Fp(3);
    let s = SquareMatrix::from_int_rows(f3, &[&[0, -1], &[1, 0]]).expect("shape");
    let t = SquareMatrix::from_int_rows(f3, &[&[1, 1], &[0, 1]]).expect("shape");
    let sl2 = grouporder::group_closure(&[s, t], 200, false).expect("invertible");
    if sl2.order() != Some(24) {
        return SuiteResult::fail(NAME, format!("SL_2(F_3) closure gave {:?}", sl2.order()));
    }

    let q = Field::Q;
    let swap = SquareMatrix::from_int_rows(q, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]).expect("shape");
    let cycle = SquareMatrix::from_int_rows(q, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]).expect("shape");
    let flip = SquareMatrix::from_int_rows(q, &[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).expect("shape");
    let signed = grouporder::group_closure(&[swap, cycle, flip], 100, false).expect("invertible");
    if signed.order() != Some(48) {
        return SuiteResult::fail(
            NAME,
            format!("signed permutation closure gave {:?}", signed.order()),
        );
    }
    if let grouporder::ClosureStatus::Finite { elements, order } = &signed.status {
        let order_big = BigUint::from(*order as u64);
        for e in elements {
            if !e.pow(&order_big).is_identity() {
                return SuiteResult::fail(NAME, "element^(group order) != identity".into());
            }
        }
    }
    SuiteResult::pass(NAME, "SL_2(F_3) = 24, signed perms (d=3) = 48".into())
}

/// Independent subspace count: distinct spans of all tuples of up to d-1
/// vectors of F_p^d, deduplicated as element sets.
fn brute_subspace_count(p: u64, d: usize) -> usize {
    let total = p.pow(d as u32) as usize;
    let decode = |idx: usize| -> Vec<u64> {
        let mut v = Vec::with_capacity(d);
        let mut rest = idx as u64;
        for _ in 0..d {
            v.push(rest % p);
            rest /= p;
        }
        v
    };
    let mut spans: BTreeSet<Vec<usize>> = BTreeSet::new();
    let max_tuple = d - 1;
    // iterate over tuples of vector indices of each length 1..=d-1
    fn tuples(
        total: usize,
        len: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for i in 0..total {
            current.push(i);
            tuples(total, len, current, out);
            current.pop();
        }
    }
    let mut all_tuples = Vec::new();
    for len in 1..=max_tuple {
        tuples(total, len, &mut Vec::new(), &mut all_tuples);
    }
    for tuple in all_tuples {
        let vectors: Vec<Vec<u64>> = tuple.iter().map(|&i| decode(i)).collect();
        // span = all linear combinations, enumerated by coefficient tuples
        let combos = (p as usize).pow(vectors.len() as u32);
        let mut span = BTreeSet::new();
        for c in 0..combos {
            let mut rest = c as u64;
            let mut acc = vec![0u64; d];
            for v in &vectors {
                let coef = rest % p;
                rest /= p;
                for (a, b) in acc.iter_mut().zip(v) {
                    *a = (*a + coef * b) % p;
                }
            }
            let mut enc = 0usize;
            for i in (0..d).rev() {
                enc = enc * p as usize + acc[i] as usize;
            }
            span.insert(enc);
        }
        if span.len() > 1 && span.len() < total {
            spans.insert(span.into_iter().collect());
        }
    }
    spans.len()
}

/// Neighbor counts against the tuple-span subspace oracle, ball sizes
/// against the tree formula, adjacency symmetry, type alternation, and
/// homothety soundness.
pub fn building_suite() -> SuiteResult {
    const NAME: &str = "building local structure";
    // neighbor counts vs brute-force subspace counts
    for (p, d, expected) in [(2u64, 2usize, 3usize), (5, 2, 6), (2, 3, 14)] {
        let oracle = brute_subspace_count(p, d);
        if oracle != expected {
            return SuiteResult::fail(
                NAME,
                format!("subspace oracle({p},{d}) = {oracle}, expected {expected}"),
            );
        }
        let v = LatticeVertex::standard(p, d).expect("prime");
        let count = building::neighbors(&v).len();
        if count != oracle {
            return SuiteResult::fail(
                NAME,
                format!("neighbors({p},{d}) = {count}, oracle says {oracle}"),
            );
        }
    }
    // tree ball sizes: 1 + (p+1)(p^r - 1)/(p - 1), and acyclic edges
    for (p, r, expected) in [(2u64, 2usize, 10usize), (3, 2, 17)] {
        let v = LatticeVertex::standard(p, 2).expect("prime");
        let b = building::ball(&v, r);
        if b.vertices.len() != expected {
            return SuiteResult::fail(
                NAME,
                format!("ball(p={p}, r={r}) has {} vertices, expected {expected}", b.vertices.len()),
            );
        }
        if b.edges.len() != b.vertices.len() - 1 {
            return SuiteResult::fail(NAME, format!("ball(p={p}, r={r}) has a cycle"));
        }
    }
    // adjacency symmetry and type alternation within radius-2 balls; the
    // neighbor list of each ball vertex is computed once and symmetry is
    // checked pairwise inside the ball
    for p in [2u64, 3] {
        for d in [2usize, 3] {
            let v = LatticeVertex::standard(p, d).expect("prime");
            let b = building::ball(&v, 2);
            let lists: Vec<Vec<LatticeVertex>> =
                b.vertices.iter().map(building::neighbors).collect();
            for (i, u) in b.vertices.iter().enumerate() {
                for nb in &lists[i] {
                    if nb.vertex_type() == u.vertex_type() {
                        return SuiteResult::fail(
                            NAME,
                            format!(
                                "adjacent vertices share type {} (p={p}, d={d})",
                                nb.vertex_type()
                            ),
                        );
                    }
                    if let Some(j) = b.vertices.iter().position(|w| w == nb) {
                        if !lists[j].contains(u) {
                            return SuiteResult::fail(
                                NAME,
                                format!("adjacency not symmetric (p={p}, d={d})"),
                            );
                        }
                    }
                }
            }
        }
    }
    // homothety soundness on random matrices
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let q = Field::Q;
    for _ in 0..40 {
        let d = rng.gen_range(1..=3);
        let m = loop {
            let candidate = rand_matrix_over(&mut rng, &q, d);
            if !candidate.determinant().is_zero() {
                break candidate;
            }
        };
        let p = 2u64;
        let base = building::canonicalize(p, &m).expect("invertible");
        let k = rng.gen_range(-3i64..=3);
        let factor = if k >= 0 {
            Scalar::from_integer(&q, 2i64.pow(k as u32))
        } else {
            Scalar::from_rational(1, 2i64.pow((-k) as u32))
        };
        let scaled = m.scale(&factor).expect("field");
        if building::canonicalize(p, &scaled).expect("invertible") != base {
            return SuiteResult::fail(NAME, format!("homothety by p^{k} changed the vertex"));
        }
    }
    SuiteResult::pass(NAME, "counts, balls, symmetry, types, homothety".into())
}

fn rand_unimodular(rng: &mut ChaCha8Rng, d: usize) -> SquareMatrix {
    let q = Field::Q;
    let mut m = SquareMatrix::identity(q, d);
    for _ in 0..rng.gen_range(3..=8) {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d);
        while d > 1 && j == i {
            j = rng.gen_range(0..d);
        }
        let op = rng.gen_range(0..3);
        let elem = match op {
            0 if d > 1 => {
                // row_i += c * row_j
                let c = rng.gen_range(-2i64..=2);
                let mut e = SquareMatrix::identity(q, d);
                let mut entries: Vec<Scalar> = e.entries().to_vec();
                entries[i * d + j] = Scalar::from_integer(&q, c);
                e = SquareMatrix::new(q, d, entries).expect("shape");
                e
            }
            1 if d > 1 => {
                // swap rows i and j
                let mut entries = vec![Scalar::zero(&q); d * d];
                for r in 0..d {
                    let target = if r == i { j } else if r == j { i } else { r };
                    entries[r * d + target] = Scalar::one(&q);
                }
                SquareMatrix::new(q, d, entries).expect("shape")
            }
            _ => {
                // negate row i
                let mut entries: Vec<Scalar> = SquareMatrix::identity(q, d).entries().to_vec();
                entries[i * d + i] = Scalar::from_integer(&q, -1);
                SquareMatrix::new(q, d, entries).expect("shape")
            }
        };
        m = elem.mul(&m).expect("shape");
    }
    m
}

/// Action laws on 100 random (g, h, v) triples: compatibility with
/// products, the type-shift law, neighbor equivariance, and the stabilizer
/// of the standard vertex.
pub fn action_suite() -> SuiteResult {
    const NAME: &str = "building action laws";
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let p = 3u64;
    let d = 2usize;
    let valuation = Valuation::p_adic(p).expect("prime");
    let standard = LatticeVertex::standard(p, d).expect("prime");
    let b = building::ball(&standard, 2);
    for i in 0..100 {
        let g = rand_scaled_invertible(&mut rng, p, d);
        let h = rand_scaled_invertible(&mut rng, p, d);
        let v = b.vertices[rng.gen_range(0..b.vertices.len())].clone();
        let gh = g.mul(&h).expect("shape");
        let lhs = building::act(&gh, &v).expect("invertible");
        let rhs = building::act(&g, &building::act(&h, &v).expect("invertible"))
            .expect("invertible");
        if lhs != rhs {
            return SuiteResult::fail(NAME, format!("act(gh, v) != act(g, act(h, v)), case {i}"));
        }
        // type shift = nu_det mod d
        let shift = building::nu_det(&g, &valuation).expect("invertible");
        let image = building::act(&g, &v).expect("invertible");
        let expected = ((v.vertex_type() as i64 + shift).rem_euclid(d as i64)) as u32;
        if image.vertex_type() != expected {
            return SuiteResult::fail(NAME, format!("type shift law failed, case {i}"));
        }
    }
    // neighbors(act(g, v)) = act(g, neighbors(v)) as sets
    for i in 0..10 {
        let g = rand_scaled_invertible(&mut rng, p, d);
        let v = b.vertices[rng.gen_range(0..b.vertices.len())].clone();
        let image = building::act(&g, &v).expect("invertible");
        let lhs: BTreeSet<String> = building::neighbors(&image)
            .into_iter()
            .map(|u| u.to_string())
            .collect();
        let rhs: BTreeSet<String> = building::neighbors(&v)
            .into_iter()
            .map(|u| building::act(&g, &u).expect("invertible").to_string())
            .collect();
        if lhs != rhs {
            return SuiteResult::fail(NAME, format!("neighbor equivariance failed, case {i}"));
        }
    }
    // integer unimodular matrices fix the standard vertex
    for _ in 0..50 {
        let g = rand_unimodular(&mut rng, d);
        if building::act(&g, &standard).expect("invertible") != standard {
            return SuiteResult::fail(NAME, "unimodular matrix moved the standard vertex".into());
        }
    }
    SuiteResult::pass(NAME, "100 triples + 10 equivariance + 50 stabilizer cases".into())
}

fn rand_scaled_invertible(rng: &mut ChaCha8Rng, p: u64, d: usize) -> SquareMatrix {
    let q = Field::Q;
    let base = loop {
        let entries: Vec<Scalar> = (0..d * d)
            .map(|_| Scalar::from_integer(&q, rng.gen_range(-3i64..=3)))
            .collect();
        let m = SquareMatrix::new(q, d, entries).expect("shape");
        if !m.determinant().is_zero() {
            break m;
        }
    };
    let e = rng.gen_range(-1i64..=1);
    let factor = if e >= 0 {
        Scalar::from_integer(&q, (p as i64).pow(e as u32))
    } else {
        Scalar::from_rational(1, p as i64)
    };
    base.scale(&factor).expect("field")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_oracle_small() {
        assert_eq!(brute_subspace_count(2, 2), 3);
        assert_eq!(brute_subspace_count(3, 2), 4);
        assert_eq!(brute_subspace_count(2, 3), 14);
    }

    #[test]
    fn quick_suites_pass() {
        assert!(valuation_suite().pass);
        assert!(scalar_canonical_suite().pass);
        assert!(unipotent_bound_suite().pass);
        assert!(closure_suite().pass);
    }
}
