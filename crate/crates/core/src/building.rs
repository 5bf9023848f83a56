//! Lattice-class model of the affine building attached to GL_d(Q) with one
//! p-adic valuation: vertices are homothety classes of full-rank lattices
//! over the localization Z_(p), edges come from intermediate lattices
//! pL < L' < L, and the vertex type is nu_p(det) mod d.
//!
//! Only the 1-skeleton is materialized; fixed-vertex search and type
//! bookkeeping need nothing more. For d = 2 the graph is the (p+1)-regular
//! tree; for d = 1 it degenerates to a single point and every group fixes
//! it.
//!
//! # Canonical form
//!
//! Each class is represented by the unique upper-triangular basis with
//! diagonal p^{a_1}, ..., p^{a_d}, a_i >= 0, min a_i = 0, and the entry in
//! row i of each later column reduced modulo p^{a_i} (representatives
//! u / p^e with 0 <= u < p^{a_i + e}, p not dividing u when e > 0). Two
//! lattices are homothetic exactly when their canonical bases are
//! identical, so equality and hashing are structural.

use crate::error::{Error, Result};
use crate::exactnum::{self, Field, Scalar, Valuation};
use crate::linalg::SquareMatrix;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

/// Homothety class of full-rank lattices: a vertex of the building, held in
/// canonical homothety-normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeVertex {
    p: u64,
    dim: usize,
    /// Row-major canonical upper-triangular basis.
    basis: Vec<BigRational>,
    diag_exp: Vec<u32>,
}

fn nu_p(r: &BigRational, p: u64) -> Option<i64> {
    exactnum::rational_nu_p(r, p)
}

fn p_pow_int(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

fn p_pow_rat(p: u64, e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from(p_pow_int(p, e as u32))
    } else {
        BigRational::new(BigInt::one(), p_pow_int(p, (-e) as u32))
    }
}

impl LatticeVertex {
    /// The class of the standard lattice Z_(p)^d (the identity basis).
    pub fn standard(p: u64, dim: usize) -> Result<Self> {
        if !exactnum::primes::is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if dim == 0 {
            return Err(Error::DimensionMismatch(0, 1));
        }
        canonicalize_columns(
            p,
            dim,
            (0..dim)
                .map(|j| {
                    (0..dim)
                        .map(|i| {
                            if i == j {
                                BigRational::one()
                            } else {
                                BigRational::zero()
                            }
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Diagonal exponents a_1..a_d of the canonical basis.
    pub fn diag_exponents(&self) -> &[u32] {
        &self.diag_exp
    }

    /// Vertex type: nu_p(det basis) mod d = (sum of diagonal exponents) mod d.
    pub fn vertex_type(&self) -> u32 {
        (self.diag_exp.iter().map(|&a| a as u64).sum::<u64>() % self.dim as u64) as u32
    }

    pub fn basis_entry(&self, row: usize, col: usize) -> &BigRational {
        &self.basis[row * self.dim + col]
    }

    /// Canonical basis as a matrix over Q.
    pub fn basis_matrix(&self) -> SquareMatrix {
        let entries = self.basis.iter().cloned().map(Scalar::Rational).collect();
        SquareMatrix::new(Field::Q, self.dim, entries).expect("canonical basis is well formed")
    }

    fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.basis_entry(i, j).clone()).collect())
            .collect()
    }
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim)
            .map(|i| {
                let row: Vec<String> = (0..self.dim)
                    .map(|j| self.basis_entry(i, j).to_string())
                    .collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        write!(f, "L({}; {})", self.p, rows.join(" "))
    }
}

/// Canonical homothety representative of the lattice spanned by the columns
/// of an invertible rational matrix. Scaling the input by any power of p
/// (or any prime-to-p unit) yields the identical vertex.
pub fn canonicalize(p: u64, generating: &SquareMatrix) -> Result<LatticeVertex> {
    if generating.field() != Field::Q {
        return Err(Error::FieldMismatch {
            expected: "Q".into(),
            found: generating.field().to_string(),
        });
    }
    if !exactnum::primes::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let d = generating.dim();
    let cols = (0..d)
        .map(|j| {
            (0..d)
                .map(|i| {
                    generating
                        .entry(i, j)
                        .as_rational()
                        .expect("field checked")
                        .clone()
                })
                .collect()
        })
        .collect();
    canonicalize_columns(p, d, cols)
}

/// Column-style Hermite reduction over Z_(p): bottom-up pivot selection by
/// minimal valuation, elimination by Z_(p)-multiples, unit normalization of
/// the diagonal to pure p-powers, homothety shift to min exponent 0, then
/// off-diagonal reduction. Accepts n >= d generating columns.
fn canonicalize_columns(
    p: u64,
    d: usize,
    mut cols: Vec<Vec<BigRational>>,
) -> Result<LatticeVertex> {
    let n = cols.len();
    debug_assert!(n >= d);
    let mut active = n;
    for row in (0..d).rev() {
        // pivot: minimal nu_p in this row among still-active columns
        let mut best: Option<(i64, usize)> = None;
        for (c, col) in cols.iter().enumerate().take(active) {
            if let Some(v) = nu_p(&col[row], p) {
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, c));
                }
            }
        }
        let (_, pivot_col) = best.ok_or(Error::SingularMatrix)?;
        cols.swap(pivot_col, active - 1);
        let pivot = cols[active - 1][row].clone();
        for c in 0..active - 1 {
            if cols[c][row].is_zero() {
                continue;
            }
            let lambda = &cols[c][row] / &pivot;
            #[allow(clippy::needless_range_loop)] // two columns of `cols` in play
            for i in 0..=row {
                let delta = &lambda * &cols[active - 1][i];
                cols[c][i] -= delta;
            }
            debug_assert!(cols[c][row].is_zero());
        }
        active -= 1;
    }
    // surplus generator columns must now be zero
    for col in cols.iter().take(active) {
        if col.iter().any(|e| !e.is_zero()) {
            return Err(Error::SingularMatrix);
        }
    }
    let mut basis: Vec<Vec<BigRational>> = cols.split_off(active);

    // normalize diagonal entries to exact p-powers
    let mut diag_exp = vec![0i64; d];
    for (j, col) in basis.iter_mut().enumerate() {
        let a = nu_p(&col[j], p).ok_or(Error::SingularMatrix)?;
        let unit = &col[j] / p_pow_rat(p, a);
        let unit_inv = unit.recip();
        for e in col.iter_mut() {
            *e *= &unit_inv;
        }
        diag_exp[j] = a;
    }
    // homothety normalization: min diagonal exponent becomes 0
    let shift = *diag_exp.iter().min().expect("d >= 1");
    if shift != 0 {
        let factor = p_pow_rat(p, -shift);
        for col in basis.iter_mut() {
            for e in col.iter_mut() {
                *e *= &factor;
            }
        }
        for a in diag_exp.iter_mut() {
            *a -= shift;
        }
    }
    let diag_exp: Vec<u32> = diag_exp.iter().map(|&a| a as u32).collect();

    // off-diagonal reduction: entry (i, j), i < j, becomes its canonical
    // representative modulo p^{a_i} Z_(p)
    for j in 1..d {
        for i in (0..j).rev() {
            let c = basis[j][i].clone();
            if c.is_zero() {
                continue;
            }
            let rep = reduce_mod_p_power(&c, p, diag_exp[i]);
            let lambda = (&c - &rep) / p_pow_rat(p, diag_exp[i] as i64);
            if lambda.is_zero() {
                continue;
            }
            #[allow(clippy::needless_range_loop)] // two columns of `basis` in play
            for k in 0..=i {
                let delta = &lambda * &basis[i][k];
                basis[j][k] -= delta;
            }
            debug_assert_eq!(basis[j][i], rep);
        }
    }

    let mut flat = vec![BigRational::zero(); d * d];
    for (j, col) in basis.iter().enumerate() {
        for (i, e) in col.iter().enumerate() {
            flat[i * d + j] = e.clone();
        }
    }
    Ok(LatticeVertex {
        p,
        dim: d,
        basis: flat,
        diag_exp,
    })
}

/// Canonical representative of c modulo p^a Z_(p): written u/p^e with
/// e = max(0, -nu_p(c)), the unique 0 <= u < p^(a+e) congruent to c p^e.
fn reduce_mod_p_power(c: &BigRational, p: u64, a: u32) -> BigRational {
    let e = nu_p(c, p).map_or(0, |v| (-v).max(0)) as u32;
    let scaled = c * p_pow_rat(p, e as i64); // now nu_p >= 0
    let modulus = p_pow_int(p, a + e);
    // scaled = num/den with den prime to p: residue = num * den^{-1} mod p^{a+e}
    let num = scaled.numer().mod_floor(&modulus);
    let den = scaled.denom().clone();
    let egcd = den.extended_gcd(&modulus);
    debug_assert!(egcd.gcd.is_one());
    let den_inv = egcd.x.mod_floor(&modulus);
    let u = (num * den_inv).mod_floor(&modulus);
    BigRational::new(u, p_pow_int(p, e))
}

/// All vertices [L'] with pL < L' < L: one per proper nonzero subspace of
/// L/pL. Subspaces are enumerated as row-reduced echelon forms over F_p, so
/// the order is deterministic. For d = 2 the count is p + 1.
pub fn neighbors(v: &LatticeVertex) -> Vec<LatticeVertex> {
    let d = v.dim;
    let p = v.p;
    let base_cols = v.columns();
    let mut out = Vec::new();
    for k in 1..d {
        for rref in echelon_forms(d, k, p) {
            // columns: p * basis, plus lifts of the subspace rows
            let mut cols: Vec<Vec<BigRational>> = base_cols
                .iter()
                .map(|col| col.iter().map(|e| e * BigRational::from(BigInt::from(p))).collect())
                .collect();
            for row in &rref {
                let mut lift = vec![BigRational::zero(); d];
                for (j, &coef) in row.iter().enumerate() {
                    if coef == 0 {
                        continue;
                    }
                    let c = BigRational::from(BigInt::from(coef));
                    for i in 0..d {
                        let delta = &c * &base_cols[j][i];
                        lift[i] += delta;
                    }
                }
                cols.push(lift);
            }
            out.push(
                canonicalize_columns(p, d, cols)
                    .expect("intermediate lattices have full rank"),
            );
        }
    }
    out
}

/// All k x d row-reduced echelon forms over F_p, in deterministic order
/// (pivot columns lexicographic, free entries in counting order). One per
/// k-dimensional subspace of F_p^d.
fn echelon_forms(d: usize, k: usize, p: u64) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut pivots = (0..k).collect::<Vec<usize>>();
    loop {
        // free positions: (row, col) with col > pivot[row], col not a pivot
        let mut free = Vec::new();
        for (row, &pc) in pivots.iter().enumerate() {
            for col in pc + 1..d {
                if !pivots.contains(&col) {
                    free.push((row, col));
                }
            }
        }
        let total = (p as u128).pow(free.len() as u32);
        let mut idx = 0u128;
        while idx < total {
            let mut m = vec![vec![0u64; d]; k];
            for (row, &pc) in pivots.iter().enumerate() {
                m[row][pc] = 1;
            }
            let mut rest = idx;
            for &(row, col) in &free {
                m[row][col] = (rest % p as u128) as u64;
                rest /= p as u128;
            }
            out.push(m);
            idx += 1;
        }
        // next pivot combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < d - (k - i) {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[i] + (j - i);
                }
                break;
            }
        }
    }
}

/// Finite window onto the building: all vertices within graph distance
/// `radius` of the center, with every edge among them.
#[derive(Debug, Clone)]
pub struct BuildingBall {
    pub p: u64,
    pub dim: usize,
    pub radius: usize,
    /// Vertices in BFS discovery order; index 0 is the center.
    pub vertices: Vec<LatticeVertex>,
    pub types: Vec<u32>,
    /// Symmetric edge set as (i, j) pairs with i < j, sorted.
    pub edges: Vec<(usize, usize)>,
}

pub fn ball(center: &LatticeVertex, radius: usize) -> BuildingBall {
    let mut vertices = vec![center.clone()];
    let mut index: HashMap<LatticeVertex, usize> = HashMap::new();
    index.insert(center.clone(), 0);
    let mut dist = vec![0usize];
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);
    let mut neighbor_lists: Vec<Option<Vec<LatticeVertex>>> = vec![None];
    while let Some(i) = queue.pop_front() {
        if dist[i] == radius {
            continue;
        }
        let nbs = neighbors(&vertices[i]);
        for nb in &nbs {
            if !index.contains_key(nb) {
                let j = vertices.len();
                vertices.push(nb.clone());
                index.insert(nb.clone(), j);
                dist.push(dist[i] + 1);
                neighbor_lists.push(None);
                queue.push_back(j);
            }
        }
        neighbor_lists[i] = Some(nbs);
    }
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..vertices.len() {
        let nbs = match &neighbor_lists[i] {
            Some(nbs) => nbs.clone(),
            None => neighbors(&vertices[i]),
        };
        for nb in nbs {
            if let Some(&j) = index.get(&nb) {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    BuildingBall {
        p: center.p,
        dim: center.dim,
        radius,
        types: vertices.iter().map(LatticeVertex::vertex_type).collect(),
        edges: edges.into_iter().collect(),
        vertices,
    }
}

impl BuildingBall {
    pub fn contains(&self, v: &LatticeVertex) -> bool {
        self.vertices.contains(v)
    }

    pub fn vertex_index(&self, v: &LatticeVertex) -> Option<usize> {
        self.vertices.iter().position(|u| u == v)
    }

    /// Export JSON: `{"p", "d", "radius", "vertices": [{id, diag, type}], "edges": [[i,j]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "d": self.dim,
            "radius": self.radius,
            "vertices": self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| {
                    serde_json::json!({
                        "id": id,
                        "diag": v.diag_exponents(),
                        "type": v.vertex_type(),
                    })
                })
                .collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|(i, j)| vec![i, j]).collect::<Vec<_>>(),
        })
    }

    /// DOT export, vertices labeled and colored by type.
    pub fn to_dot(&self) -> String {
        const FILL: [&str; 8] = [
            "#aed6f1", "#f5b7b1", "#a9dfbf", "#f9e79f", "#d7bde2", "#f5cba7", "#a3e4d7",
            "#d5dbdb",
        ];
        let mut out = String::from("graph ball {\n  node [style=filled, fontsize=10];\n");
        for (i, t) in self.types.iter().enumerate() {
            let fill = FILL[*t as usize % FILL.len()];
            out.push_str(&format!(
                "  v{i} [label=\"v{i}\\ntype {t}\", fillcolor=\"{fill}\"];\n"
            ));
        }
        for (i, j) in &self.edges {
            out.push_str(&format!("  v{i} -- v{j};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Total number of proper nonzero subspaces of F_p^d (the vertex degree),
/// as a sum of Gaussian binomials.
pub fn vertex_degree(p: u64, d: usize) -> BigUint {
    let mut acc = BigUint::zero();
    for k in 1..d {
        acc += gaussian_binomial(p, d, k);
    }
    acc
}

/// Number of k-dimensional subspaces of F_p^d.
pub fn gaussian_binomial(p: u64, d: usize, k: usize) -> BigUint {
    if k > d {
        return BigUint::zero();
    }
    let p = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= p.pow((d - i) as u32) - BigUint::one();
        den *= p.pow((k - i) as u32) - BigUint::one();
    }
    num / den
}

/// Upper estimate of the vertex count of a radius-r ball, used for the CLI
/// size warning.
pub fn projected_ball_size(p: u64, d: usize, radius: usize) -> BigUint {
    let deg = vertex_degree(p, d);
    let mut acc = BigUint::one();
    let mut layer = BigUint::one();
    for _ in 0..radius {
        layer *= &deg;
        acc += &layer;
    }
    acc
}

/// nu(det g): the composite homomorphism GL_d(Q) -> Z for one valuation;
/// additive under matrix products.
pub fn nu_det(g: &SquareMatrix, v: &Valuation) -> Result<i64> {
    let det = g.determinant();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(v.valuate(&det)?.finite().expect("nonzero determinant"))
}

/// Act by an invertible rational matrix: the class of g * (basis of v).
/// Preserves adjacency; shifts the type by nu_det(g) mod d.
pub fn act(g: &SquareMatrix, v: &LatticeVertex) -> Result<LatticeVertex> {
    if g.field() != Field::Q {
        return Err(Error::FieldMismatch {
            expected: "Q".into(),
            found: g.field().to_string(),
        });
    }
    if g.dim() != v.dim {
        return Err(Error::DimensionMismatch(g.dim(), v.dim));
    }
    let product = g.mul(&v.basis_matrix())?;
    if product.determinant().is_zero() {
        return Err(Error::SingularMatrix);
    }
    canonicalize(v.p, &product)
}

/// Outcome of the fixed-vertex search in one ball.
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    pub p: u64,
    pub dim: usize,
    pub radius: usize,
    /// nu_det of each generator at the ball's p-adic valuation.
    pub generator_nu_det: Vec<i64>,
    /// Indices into the ball's vertex list.
    pub fixed: Vec<usize>,
    /// Some generator moved some ball vertex outside the window.
    pub boundary_escape: bool,
}

impl FixedPointReport {
    /// Absence of fixed points in a window proves nothing globally; the
    /// report says so rather than claiming absence.
    pub fn conclusion(&self) -> String {
        if self.fixed.is_empty() {
            format!(
                "no fixed vertex in this window; inconclusive at radius {}",
                self.radius
            )
        } else {
            format!("{} fixed vertex(es) found", self.fixed.len())
        }
    }

    pub fn to_json(&self, ball: &BuildingBall) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "d": self.dim,
            "radius": self.radius,
            "generator_nu_det": self.generator_nu_det,
            "fixed_count": self.fixed.len(),
            "fixed": self
                .fixed
                .iter()
                .map(|&id| {
                    let v = &ball.vertices[id];
                    serde_json::json!({
                        "id": id,
                        "diag": v.diag_exponents(),
                        "type": v.vertex_type(),
                    })
                })
                .collect::<Vec<_>>(),
            "boundary_escape": self.boundary_escape,
            "conclusion": self.conclusion(),
        })
    }
}

/// All vertices of the ball fixed by every generator.
///
/// Every generator must satisfy nu_det = 0 mod d (type-preserving);
/// otherwise the generated group maps onto a nontrivial subgroup of Z and
/// no fixed point can exist — reported as `TypeRotating`, which doubles as
/// that obstruction witness.
pub fn fixed_vertices(gens: &[SquareMatrix], ball: &BuildingBall) -> Result<FixedPointReport> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let valuation = Valuation::p_adic(ball.p)?;
    let mut generator_nu_det = Vec::with_capacity(gens.len());
    for (index, g) in gens.iter().enumerate() {
        let nd = nu_det(g, &valuation)?;
        if nd.rem_euclid(ball.dim as i64) != 0 {
            return Err(Error::TypeRotating {
                index,
                nu_det: nd,
                dim: ball.dim,
            });
        }
        generator_nu_det.push(nd);
    }
    let mut fixed = Vec::new();
    let mut boundary_escape = false;
    for (id, v) in ball.vertices.iter().enumerate() {
        let mut all_fixed = true;
        for g in gens {
            let image = act(g, v)?;
            if &image != v {
                all_fixed = false;
                if !ball.contains(&image) {
                    boundary_escape = true;
                }
            }
        }
        if all_fixed {
            fixed.push(id);
        }
    }
    Ok(FixedPointReport {
        p: ball.p,
        dim: ball.dim,
        radius: ball.radius,
        generator_nu_det,
        fixed,
        boundary_escape,
    })
}
