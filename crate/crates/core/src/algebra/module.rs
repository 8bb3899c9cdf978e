//! Finite-dimensional representations of the bound quiver and exact homological
//! computations: Hom spaces, projective presentations, the translate, Ext¹ and
//! extension modules.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::basis::Algebra;
use super::linalg::{add, complement_std, rank_mod, std_vec, sub, to_mod, Matrix, Q, PRIME};
use crate::error::{Error, Result};
use crate::quiver::{Path, Relation};

/// Dimension per vertex id and a `(dim target) × (dim source)` matrix per arrow id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub dims: Vec<usize>,
    pub maps: Vec<Matrix>,
}

/// A module homomorphism: one matrix per vertex.
pub type ModuleMap = Vec<Matrix>;

impl Rep {
    pub fn zero(alg: &Algebra) -> Rep {
        Rep {
            dims: vec![0; alg.vertex_count()],
            maps: (0..alg.arrow_count()).map(|_| Matrix::zeros(0, 0)).collect(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Matrix of the path `w` (traversal order) starting at vertex `source`.
    pub fn word_matrix(&self, source: usize, w: &[u32]) -> Matrix {
        let mut m = Matrix::identity(self.dims[source]);
        for &a in w {
            m = self.maps[a as usize].mul(&m);
        }
        m
    }

    pub fn path_matrix(&self, alg: &Algebra, p: &Path) -> Matrix {
        let s = alg.vertex_id(p.source).expect("vertex");
        self.word_matrix(s, &alg.word(p))
    }

    /// The first relation that does not vanish, if any.
    pub fn violated_relation<'a>(&self, alg: &'a Algebra) -> Option<&'a Relation> {
        alg.quiver().relations().iter().find(|rel| match rel {
            Relation::ZeroPath(_, p) => !self.path_matrix(alg, p).is_zero(),
            Relation::Commutativity(a, b) => self.path_matrix(alg, a) != self.path_matrix(alg, b),
        })
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| block_diag(a, b)).collect();
        Rep { dims, maps }
    }
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            m[(r, c)] = a[(r, c)];
        }
    }
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            m[(a.rows() + r, a.cols() + c)] = b[(r, c)];
        }
    }
    m
}

/// Thin module along `p`: one-dimensional on its vertices, identity on its arrows.
pub fn string_module(alg: &Algebra, p: &Path) -> Result<Rep> {
    let n = alg.vertex_count();
    let mut dims = vec![0; n];
    dims[alg.vertex_id(p.source).expect("vertex")] = 1;
    let word = alg.word(p);
    for &a in &word {
        dims[alg.arrow_target(a as usize)] = 1;
    }
    let mut maps: Vec<Matrix> =
        (0..alg.arrow_count()).map(|a| Matrix::zeros(dims[alg.arrow_target(a)], dims[alg.arrow_source(a)])).collect();
    for &a in &word {
        maps[a as usize] = Matrix::identity(1);
    }
    let rep = Rep { dims, maps };
    if let Some(rel) = rep.violated_relation(alg) {
        return Err(Error::RelationViolated { relation: rel.to_string() });
    }
    Ok(rep)
}

/// Layout of the unknowns of a Hom system: offset per vertex.
fn hom_layout(m: &Rep, n: &Rep) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(m.dims.len());
    let mut total = 0;
    for v in 0..m.dims.len() {
        offsets.push(total);
        total += m.dims[v] * n.dims[v];
    }
    (offsets, total)
}

fn flatten(m: &Rep, n: &Rep, f: &ModuleMap) -> Vec<Q> {
    let (offsets, total) = hom_layout(m, n);
    let mut v = vec![Q::zero(); total];
    for w in 0..m.dims.len() {
        for r in 0..n.dims[w] {
            for c in 0..m.dims[w] {
                v[offsets[w] + r * m.dims[w] + c] = f[w][(r, c)];
            }
        }
    }
    v
}

fn unflatten(m: &Rep, n: &Rep, v: &[Q]) -> ModuleMap {
    let (offsets, _) = hom_layout(m, n);
    (0..m.dims.len())
        .map(|w| {
            let mut f = Matrix::zeros(n.dims[w], m.dims[w]);
            for r in 0..n.dims[w] {
                for c in 0..m.dims[w] {
                    f[(r, c)] = v[offsets[w] + r * m.dims[w] + c];
                }
            }
            f
        })
        .collect()
}

/// Basis of `Hom(M, N)`.
pub fn hom_basis(alg: &Algebra, m: &Rep, n: &Rep) -> Vec<ModuleMap> {
    let (offsets, total) = hom_layout(m, n);
    if total == 0 {
        return Vec::new();
    }
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for a in 0..alg.arrow_count() {
        let (s, t) = (alg.arrow_source(a), alg.arrow_target(a));
        let (ms, mt, ns, nt) = (m.dims[s], m.dims[t], n.dims[s], n.dims[t]);
        if ms == 0 || nt == 0 {
            continue;
        }
        // (N_a f_s - f_t M_a)[r, c] = 0 for r < nt, c < ms
        for r in 0..nt {
            for c in 0..ms {
                let mut row = vec![Q::zero(); total];
                for k in 0..ns {
                    let coef = n.maps[a][(r, k)];
                    if !coef.is_zero() {
                        let idx = offsets[s] + k * ms + c;
                        row[idx] = add(&row[idx], &coef);
                    }
                }
                for k in 0..mt {
                    let coef = m.maps[a][(k, c)];
                    if !coef.is_zero() {
                        let idx = offsets[t] + r * mt + k;
                        row[idx] = sub(&row[idx], &coef);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..total).map(|i| std_vec(total, i)).collect()
    } else {
        Matrix::from_rows(&rows, total).kernel()
    };
    kernel.iter().map(|v| unflatten(m, n, v)).collect()
}

pub fn hom_dim(alg: &Algebra, m: &Rep, n: &Rep) -> usize {
    hom_basis(alg, m, n).len()
}

pub fn compose(g: &ModuleMap, f: &ModuleMap) -> ModuleMap {
    g.iter().zip(f).map(|(a, b)| a.mul(b)).collect()
}

pub fn is_homomorphism(alg: &Algebra, m: &Rep, n: &Rep, f: &ModuleMap) -> bool {
    (0..alg.arrow_count()).all(|a| {
        let (s, t) = (alg.arrow_source(a), alg.arrow_target(a));
        n.maps[a].mul(&f[s]) == f[t].mul(&m.maps[a])
    })
}

fn is_iso_map(f: &ModuleMap) -> bool {
    f.iter().all(Matrix::is_invertible)
}

/// Outcome of the isomorphism test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Iso {
    Yes,
    No,
    /// No invertible map found among random combinations (probability of a
    /// missed isomorphism is below 2^-50).
    NotFound,
}

/// Decides `M ≅ N` by exhibiting an invertible homomorphism.
pub fn is_isomorphic(alg: &Algebra, m: &Rep, n: &Rep) -> Iso {
    if m.dims != n.dims {
        return Iso::No;
    }
    if m.is_zero() {
        return Iso::Yes;
    }
    let basis = hom_basis(alg, m, n);
    if basis.is_empty() {
        return Iso::No;
    }
    if basis.iter().any(is_iso_map) {
        return Iso::Yes;
    }
    if basis.len() == 1 {
        return Iso::No;
    }
    // An invertible combination exists iff the product of the vertex determinants is a
    // nonzero polynomial in the coefficients; evaluate it at random points mod a large prime.
    // Full rank mod p certifies full rank over Q.
    let modded: Vec<Vec<Vec<u64>>> =
        basis.iter().map(|f| f.iter().map(|mat| mat.entries().iter().map(to_mod).collect()).collect()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11_5eed);
    let p = PRIME as u128;
    for _ in 0..8 {
        let coeffs: Vec<u64> = (0..basis.len()).map(|_| rng.gen_range(1..PRIME)).collect();
        let ok = (0..m.dims.len()).all(|w| {
            let d = m.dims[w];
            if d == 0 {
                return true;
            }
            let mut acc = vec![0u64; d * d];
            for (c, f) in coeffs.iter().zip(&modded) {
                for (x, y) in acc.iter_mut().zip(&f[w]) {
                    *x = ((*x as u128 + *c as u128 * *y as u128) % p) as u64;
                }
            }
            rank_mod(d, d, acc) == d
        });
        if ok {
            return Iso::Yes;
        }
    }
    Iso::NotFound
}

/// The indecomposable projective at vertex `v`, on normal-form paths starting at `v`.
pub fn projective(alg: &Algebra, v: usize) -> Rep {
    let n = alg.vertex_count();
    let dims: Vec<usize> = (0..n).map(|w| alg.between(v, w).len()).collect();
    let paths = alg.paths_from(v);
    let maps = (0..alg.arrow_count())
        .map(|a| {
            let (s, t) = (alg.arrow_source(a), alg.arrow_target(a));
            let (src_block, tgt_block) = (alg.between(v, s), alg.between(v, t));
            let mut m = Matrix::zeros(dims[t], dims[s]);
            for (i, k) in src_block.enumerate() {
                if let Some(w) = alg.product(&paths[k].word, &[a as u32]) {
                    let j = alg.index_of(v, &w).expect("normal form is indexed");
                    m[(j - tgt_block.start, i)] = Q::one();
                }
            }
            m
        })
        .collect();
    Rep { dims, maps }
}

/// `P_0 = ⊕ P(v_h)` with the surjection onto `M` fixed by generators `g_h ∈ M_{v_h}`.
#[derive(Clone, Debug)]
pub struct Cover {
    /// `(vertex, element of M at that vertex)` per generator.
    pub gens: Vec<(usize, Vec<Q>)>,
    pub p0: Rep,
    /// Per vertex `w`: offset of generator `h`'s block inside `P_0` at `w`.
    pub offsets: Vec<Vec<usize>>,
    /// Per vertex: `P_0 → M`.
    pub pi: ModuleMap,
}

impl Cover {
    pub fn top_vertices(&self) -> Vec<usize> {
        self.gens.iter().map(|(v, _)| *v).collect()
    }
}

/// Minimal generators: complements of the radical at each vertex.
fn top_generators(alg: &Algebra, m: &Rep) -> Vec<(usize, Vec<Q>)> {
    let mut gens = Vec::new();
    for v in 0..alg.vertex_count() {
        let d = m.dims[v];
        if d == 0 {
            continue;
        }
        let mut rad: Vec<Vec<Q>> = Vec::new();
        for a in 0..alg.arrow_count() {
            if alg.arrow_target(a) == v {
                let img = &m.maps[a];
                for c in 0..img.cols() {
                    rad.push(img.col(c));
                }
            }
        }
        let rad_basis = if rad.is_empty() { Vec::new() } else { Matrix::from_cols(&rad, d).col_space() };
        for e in complement_std(&rad_basis, d) {
            gens.push((v, std_vec(d, e)));
        }
    }
    gens
}

pub fn projective_cover(alg: &Algebra, m: &Rep) -> Cover {
    let gens = top_generators(alg, m);
    let n = alg.vertex_count();
    let mut p0 = Rep::zero(alg);
    let mut offsets = vec![Vec::new(); n];
    for (v, _) in &gens {
        let pv = projective(alg, *v);
        for w in 0..n {
            offsets[w].push(p0.dims[w]);
        }
        p0 = p0.direct_sum(&pv);
    }
    let pi = (0..n)
        .map(|w| {
            let mut cols = Vec::with_capacity(p0.dims[w]);
            for (v, g) in &gens {
                let paths = alg.paths_from(*v);
                for k in alg.between(*v, w) {
                    cols.push(m.word_matrix(*v, &paths[k].word).mul_vec(g));
                }
            }
            Matrix::from_cols(&cols, m.dims[w])
        })
        .collect();
    Cover { gens, p0, offsets, pi }
}

/// Left inverse of a matrix with independent columns.
fn left_inverse(k: &Matrix) -> Matrix {
    let rows = k.transpose().independent_cols();
    let square = k.select_rows(&rows);
    let inv = square.inverse().expect("independent columns");
    let mut l = Matrix::zeros(k.cols(), k.rows());
    for (j, &r) in rows.iter().enumerate() {
        for i in 0..k.cols() {
            l[(i, r)] = inv[(i, j)];
        }
    }
    l
}

/// Submodule spanned per vertex by the columns of `basis[w]` (assumed closed under the arrows).
pub fn submodule(alg: &Algebra, v: &Rep, basis: &[Matrix]) -> Rep {
    let dims: Vec<usize> = basis.iter().map(Matrix::cols).collect();
    let lefts: Vec<Matrix> = basis.iter().map(left_inverse).collect();
    let maps = (0..alg.arrow_count())
        .map(|a| {
            let (s, t) = (alg.arrow_source(a), alg.arrow_target(a));
            lefts[t].mul(&v.maps[a]).mul(&basis[s])
        })
        .collect();
    Rep { dims, maps }
}

fn kernel_matrix(f: &Matrix, domain_dim: usize) -> Matrix {
    if f.rows() == 0 {
        return Matrix::identity(domain_dim);
    }
    Matrix::from_cols(&f.kernel(), domain_dim)
}

/// `P_1 → P_0 → M → 0` together with the syzygy.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub cover: Cover,
    /// Per vertex: columns spanning `ΩM ⊆ P_0`.
    pub kernel: Vec<Matrix>,
    pub syzygy: Rep,
    pub syzygy_cover: Cover,
    /// Image in `P_0` of each generator of `P_1`.
    pub relations: Vec<(usize, Vec<Q>)>,
}

impl Presentation {
    pub fn p0_tops(&self) -> Vec<usize> {
        self.cover.top_vertices()
    }

    pub fn p1_tops(&self) -> Vec<usize> {
        self.syzygy_cover.top_vertices()
    }
}

pub fn min_proj_presentation(alg: &Algebra, m: &Rep) -> Presentation {
    let cover = projective_cover(alg, m);
    let kernel: Vec<Matrix> =
        (0..alg.vertex_count()).map(|w| kernel_matrix(&cover.pi[w], cover.p0.dims[w])).collect();
    let syzygy = submodule(alg, &cover.p0, &kernel);
    let syzygy_cover = projective_cover(alg, &syzygy);
    let relations = syzygy_cover.gens.iter().map(|(u, g)| (*u, kernel[*u].mul_vec(g))).collect();
    Presentation { cover, kernel, syzygy, syzygy_cover, relations }
}

/// `D Coker Hom(f, A)` for the minimal presentation `f: P_1 → P_0`.
/// The flag is set when `M` is projective (the result is then zero).
pub fn tau(alg: &Algebra, m: &Rep) -> (Rep, bool) {
    let pres = min_proj_presentation(alg, m);
    let tops0 = pres.p0_tops();
    let n = alg.vertex_count();
    if pres.relations.is_empty() {
        return (Rep::zero(alg), true);
    }
    // Hom(P_1, A) at w: ⊕_g paths w → u_g; Hom(P_0, A) at w: ⊕_h paths w → v_h.
    let w_layout: Vec<Vec<(usize, std::ops::Range<usize>)>> = (0..n)
        .map(|w| {
            let mut off = 0;
            pres.relations
                .iter()
                .map(|(u, _)| {
                    let r = alg.between(w, *u);
                    let block = (off, r);
                    off += block.1.len();
                    block
                })
                .collect()
        })
        .collect();
    let w_dim = |w: usize| w_layout[w].iter().map(|(_, r)| r.len()).sum::<usize>();

    let mut ann: Vec<Matrix> = Vec::with_capacity(n);
    for w in 0..n {
        let rows = w_dim(w);
        let from_w = alg.paths_from(w);
        let mut cols: Vec<Vec<Q>> = Vec::new();
        for (h, &vh) in tops0.iter().enumerate() {
            for k in alg.between(w, vh) {
                // ξ = path q: w → v_h, mapped to Σ_g q·f_g
                let q = &from_w[k].word;
                let mut col = vec![Q::zero(); rows];
                for (g, (ug, img)) in pres.relations.iter().enumerate() {
                    let block = alg.between(vh, *ug);
                    let start = pres.cover.offsets[*ug][h];
                    let paths_h = alg.paths_from(vh);
                    for (i, kk) in block.enumerate() {
                        let c = img[start + i];
                        if c.is_zero() {
                            continue;
                        }
                        if let Some(prod) = alg.product(q, &paths_h[kk].word) {
                            let idx = alg.index_of(w, &prod).expect("indexed");
                            let (off, range) = &w_layout[w][g];
                            let pos = off + idx - range.start;
                            col[pos] = add(&col[pos], &c);
                        }
                    }
                }
                cols.push(col);
            }
        }
        // annihilator of the image, as rows
        let basis: Vec<Vec<Q>> = if cols.is_empty() {
            (0..rows).map(|i| std_vec(rows, i)).collect()
        } else {
            Matrix::from_cols(&cols, rows).transpose().kernel()
        };
        ann.push(Matrix::from_rows(&basis, rows));
    }
    let dims: Vec<usize> = ann.iter().map(Matrix::rows).collect();
    let maps = (0..alg.arrow_count())
        .map(|a| {
            let (s, t) = (alg.arrow_source(a), alg.arrow_target(a));
            // R_a: W_t → W_s, p ↦ a·p
            let mut r = Matrix::zeros(w_dim(s), w_dim(t));
            let from_t = alg.paths_from(t);
            for (g, (off_t, range_t)) in w_layout[t].iter().enumerate() {
                let (off_s, range_s) = &w_layout[s][g];
                for (i, k) in range_t.clone().enumerate() {
                    if let Some(prod) = alg.product(&[a as u32], &from_t[k].word) {
                        let idx = alg.index_of(s, &prod).expect("indexed");
                        r[(off_s + idx - range_s.start, off_t + i)] = Q::one();
                    }
                }
            }
            // φ ↦ φ ∘ R_a, expressed in the annihilator basis at t
            let images = ann[s].mul(&r);
            let basis_t = ann[t].transpose();
            let mut m = Matrix::zeros(dims[t], dims[s]);
            for j in 0..dims[s] {
                let x = basis_t.solve(images.row(j)).expect("annihilators map to annihilators");
                for (i, v) in x.iter().enumerate() {
                    m[(i, j)] = *v;
                }
            }
            m
        })
        .collect();
    (Rep { dims, maps }, false)
}

/// Hom(P_0, N) restricted to ΩM, as flattened maps ΩM → N.
fn restricted_from_p0(alg: &Algebra, pres: &Presentation, n: &Rep) -> Vec<Vec<Q>> {
    let omega = &pres.syzygy;
    let mut out = Vec::new();
    for (h, (vh, _)) in pres.cover.gens.iter().enumerate() {
        for e in 0..n.dims[*vh] {
            let elt = std_vec(n.dims[*vh], e);
            let paths = alg.paths_from(*vh);
            let g: ModuleMap = (0..alg.vertex_count())
                .map(|w| {
                    let mut gw = Matrix::zeros(n.dims[w], pres.cover.p0.dims[w]);
                    let start = pres.cover.offsets[w][h];
                    for (i, k) in alg.between(*vh, w).enumerate() {
                        let col = n.word_matrix(*vh, &paths[k].word).mul_vec(&elt);
                        for (r, v) in col.iter().enumerate() {
                            gw[(r, start + i)] = *v;
                        }
                    }
                    gw.mul(&pres.kernel[w])
                })
                .collect();
            out.push(flatten(omega, n, &g));
        }
    }
    out
}

fn span_rank(vectors: &[Vec<Q>], len: usize) -> usize {
    if vectors.is_empty() || len == 0 {
        0
    } else {
        Matrix::from_cols(vectors, len).rank()
    }
}

/// `dim Ext¹(M, N)` as the cokernel of `Hom(P_0, N) → Hom(ΩM, N)`.
pub fn ext1_dim(alg: &Algebra, m: &Rep, n: &Rep) -> usize {
    let pres = min_proj_presentation(alg, m);
    ext1_with(alg, &pres, n).0
}

fn ext1_with(alg: &Algebra, pres: &Presentation, n: &Rep) -> (usize, Vec<ModuleMap>, Vec<Vec<Q>>) {
    let homs = hom_basis(alg, &pres.syzygy, n);
    let restricted = restricted_from_p0(alg, pres, n);
    let len = hom_layout(&pres.syzygy, n).1;
    let r = span_rank(&restricted, len);
    (homs.len() - r, homs, restricted)
}

/// A short exact sequence `0 → N → E → M → 0`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub middle: Rep,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

/// Quotient of `v` by the subspaces spanned by the columns of `sub[w]`.
/// Returns the quotient and, per vertex, the projection and a section of it.
fn quotient(alg: &Algebra, v: &Rep, sub: &[Matrix]) -> (Rep, Vec<Matrix>, Vec<Matrix>) {
    let n = alg.vertex_count();
    let mut proj = Vec::with_capacity(n);
    let mut sect = Vec::with_capacity(n);
    for w in 0..n {
        let d = v.dims[w];
        let l: Vec<Vec<Q>> = (0..sub[w].cols()).map(|c| sub[w].col(c)).collect();
        let l = if l.is_empty() { l } else { Matrix::from_cols(&l, d).col_space() };
        let comp = complement_std(&l, d);
        let mut cols = l.clone();
        cols.extend(comp.iter().map(|&e| std_vec(d, e)));
        let b = Matrix::from_cols(&cols, d);
        let inv = if d == 0 { Matrix::zeros(0, 0) } else { b.inverse().expect("basis") };
        let keep: Vec<usize> = (l.len()..d).collect();
        proj.push(inv.select_rows(&keep));
        sect.push(Matrix::from_cols(&comp.iter().map(|&e| std_vec(d, e)).collect::<Vec<_>>(), d));
    }
    let dims: Vec<usize> = proj.iter().map(Matrix::rows).collect();
    let maps = (0..alg.arrow_count())
        .map(|a| {
            let (s, t) = (alg.arrow_source(a), alg.arrow_target(a));
            proj[t].mul(&v.maps[a]).mul(&sect[s])
        })
        .collect();
    (Rep { dims, maps }, proj, sect)
}

/// A nonsplit extension of `M` by `N` (pushout of the syzygy along a cocycle
/// outside the image of `Hom(P_0, N)`), or `None` when `Ext¹(M, N) = 0`.
pub fn nonsplit_extension(alg: &Algebra, m: &Rep, n: &Rep) -> Option<Extension> {
    let pres = min_proj_presentation(alg, m);
    let (ext, homs, restricted) = ext1_with(alg, &pres, n);
    if ext == 0 {
        return None;
    }
    let omega = &pres.syzygy;
    let len = hom_layout(omega, n).1;
    let base = span_rank(&restricted, len);
    let cocycle = homs
        .iter()
        .find(|h| {
            let mut vs = restricted.clone();
            vs.push(flatten(omega, n, h));
            span_rank(&vs, len) > base
        })
        .expect("Ext¹ ≠ 0 gives a cocycle outside the image");
    let sum = n.direct_sum(&pres.cover.p0);
    let vcount = alg.vertex_count();
    let sub: Vec<Matrix> = (0..vcount)
        .map(|w| {
            // columns (ζ k, -ι k) for k in the syzygy basis
            let top = &cocycle[w];
            let bottom = pres.kernel[w].scale(&-Q::one());
            let mut s = Matrix::zeros(n.dims[w] + pres.cover.p0.dims[w], omega.dims[w]);
            for c in 0..omega.dims[w] {
                for r in 0..n.dims[w] {
                    s[(r, c)] = top[(r, c)];
                }
                for r in 0..pres.cover.p0.dims[w] {
                    s[(n.dims[w] + r, c)] = bottom[(r, c)];
                }
            }
            s
        })
        .collect();
    let (middle, proj, sect) = quotient(alg, &sum, &sub);
    let inclusion: ModuleMap = (0..vcount)
        .map(|w| {
            let mut emb = Matrix::zeros(sum.dims[w], n.dims[w]);
            for i in 0..n.dims[w] {
                emb[(i, i)] = Q::one();
            }
            proj[w].mul(&emb)
        })
        .collect();
    let projection: ModuleMap = (0..vcount)
        .map(|w| {
            let mut onto = Matrix::zeros(m.dims[w], sum.dims[w]);
            for r in 0..m.dims[w] {
                for c in 0..pres.cover.p0.dims[w] {
                    onto[(r, n.dims[w] + c)] = pres.cover.pi[w][(r, c)];
                }
            }
            onto.mul(&sect[w])
        })
        .collect();
    Some(Extension { middle, inclusion, projection })
}

/// Whether `E → M` has a section.
pub fn splits(alg: &Algebra, m: &Rep, ext: &Extension) -> bool {
    let homs = hom_basis(alg, m, &ext.middle);
    let id: ModuleMap = m.dims.iter().map(|&d| Matrix::identity(d)).collect();
    let target = flatten(m, m, &id);
    if homs.is_empty() {
        return target.is_empty();
    }
    let cols: Vec<Vec<Q>> = homs.iter().map(|h| flatten(m, m, &compose(&ext.projection, h))).collect();
    Matrix::from_cols(&cols, target.len()).solve(&target).is_some()
}

/// Restriction of a representation over `from` to the full subquiver `to`, matching
/// vertices and arrows by name.
pub fn restrict(from: &Algebra, rep: &Rep, to: &Algebra) -> Result<Rep> {
    let missing = |what: String| Error::Precondition(format!("{what} is not in the larger quiver"));
    let mut dims = Vec::with_capacity(to.vertex_count());
    for v in to.quiver().vertices() {
        let id = from.vertex_id(*v).ok_or_else(|| missing(v.to_string()))?;
        dims.push(rep.dims[id]);
    }
    let mut maps = Vec::with_capacity(to.arrow_count());
    for a in to.quiver().arrows() {
        let id = from.quiver().arrow_id(a.arrow).ok_or_else(|| missing(a.arrow.to_string()))?;
        maps.push(rep.maps[id].clone());
    }
    Ok(Rep { dims, maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{Arrow, Vertex};
    use crate::system::{example_e1, DefiningSystem};

    fn e1() -> Algebra {
        Algebra::new(&example_e1()).unwrap()
    }

    fn arrow_module(alg: &Algebra, a: Arrow) -> Rep {
        string_module(alg, &alg.quiver().arrow_path(a).unwrap()).unwrap()
    }

    #[test]
    fn simple_and_arrow_modules() {
        let alg = e1();
        let s = string_module(&alg, &Path::trivial(Vertex::X(1, 0))).unwrap();
        assert_eq!(s.total_dim(), 1);
        let a11 = arrow_module(&alg, Arrow::Alpha(1, 1));
        let a12 = arrow_module(&alg, Arrow::Alpha(1, 2));
        assert_eq!(hom_dim(&alg, &a11, &a12), 1);
        assert_eq!(hom_dim(&alg, &a12, &a11), 0);
        assert_eq!(hom_dim(&alg, &a11, &a11), 1);
    }

    #[test]
    fn relation_violation_is_reported() {
        let alg = e1();
        // α_{1,1} α_{1,2} γ_{1,2} is a zero relation
        let p = alg.quiver().path(Vertex::Z(1, 2), &[Arrow::Gamma(1, 2), Arrow::Alpha(1, 2), Arrow::Alpha(1, 1)]).unwrap();
        assert!(matches!(string_module(&alg, &p), Err(Error::RelationViolated { .. })));
    }

    #[test]
    fn projective_dims_match_basis() {
        let alg = e1();
        for v in 0..alg.vertex_count() {
            let p = projective(&alg, v);
            assert_eq!(p.total_dim(), alg.paths_from(v).len());
            assert!(p.violated_relation(&alg).is_none());
            let pres = min_proj_presentation(&alg, &p);
            assert!(pres.relations.is_empty());
            assert_eq!(pres.p0_tops(), vec![v]);
            let (t, projective_flag) = tau(&alg, &p);
            assert!(projective_flag && t.is_zero());
        }
    }

    #[test]
    fn isomorphism_and_ext_additivity() {
        let ds = DefiningSystem::fundamental(vec![2, 1], vec![1, 1]).unwrap();
        let alg = Algebra::new(&ds).unwrap();
        let m = arrow_module(&alg, Arrow::Alpha(1, 1));
        assert_eq!(is_isomorphic(&alg, &m, &m), Iso::Yes);
        let mm = m.direct_sum(&m);
        assert_eq!(is_isomorphic(&alg, &mm, &mm), Iso::Yes);
        let s = string_module(&alg, &Path::trivial(Vertex::X(1, 0))).unwrap();
        assert_eq!(is_isomorphic(&alg, &m, &s), Iso::No);
        for a in [Arrow::Alpha(1, 1), Arrow::Alpha(1, 2), Arrow::Beta(1, 1)] {
            let x = arrow_module(&alg, a);
            for b in [Arrow::Alpha(1, 1), Arrow::Alpha(2, 1), Arrow::Beta(2, 1)] {
                let y = arrow_module(&alg, b);
                let e = ext1_dim(&alg, &x, &y);
                assert_eq!(ext1_dim(&alg, &x, &y.direct_sum(&y)), 2 * e);
            }
        }
    }

    #[test]
    fn nonsplit_extension_of_simples() {
        // x_{1,1} → x_{1,0}: Ext¹(S(x_{1,1}), S(x_{1,0})) = 1, middle term M(α_{1,1})
        let ds = DefiningSystem::fundamental(vec![2, 1], vec![1, 1]).unwrap();
        let alg = Algebra::new(&ds).unwrap();
        let top = string_module(&alg, &Path::trivial(Vertex::X(1, 1))).unwrap();
        let bottom = string_module(&alg, &Path::trivial(Vertex::X(1, 0))).unwrap();
        assert_eq!(ext1_dim(&alg, &top, &bottom), 1);
        assert_eq!(ext1_dim(&alg, &bottom, &top), 0);
        let ext = nonsplit_extension(&alg, &top, &bottom).unwrap();
        assert!(!splits(&alg, &top, &ext));
        assert!(is_homomorphism(&alg, &bottom, &ext.middle, &ext.inclusion));
        assert!(is_homomorphism(&alg, &ext.middle, &top, &ext.projection));
        let arrow = arrow_module(&alg, Arrow::Alpha(1, 1));
        assert_eq!(is_isomorphic(&alg, &ext.middle, &arrow), Iso::Yes);
        // the trivial extension splits
        let sum = bottom.direct_sum(&top);
        let mut inc: ModuleMap = Vec::new();
        let mut proj: ModuleMap = Vec::new();
        for w in 0..alg.vertex_count() {
            let mut i = Matrix::zeros(sum.dims[w], bottom.dims[w]);
            for k in 0..bottom.dims[w] {
                i[(k, k)] = Q::one();
            }
            let mut p = Matrix::zeros(top.dims[w], sum.dims[w]);
            for k in 0..top.dims[w] {
                p[(k, bottom.dims[w] + k)] = Q::one();
            }
            inc.push(i);
            proj.push(p);
        }
        assert!(splits(&alg, &top, &Extension { middle: sum, inclusion: inc, projection: proj }));
    }

    #[test]
    fn tau_on_hereditary_example() {
        // no relations, so the algebra is hereditary
        let ds = DefiningSystem::fundamental(vec![2, 1], vec![1, 1]).unwrap();
        let alg = Algebra::new(&ds).unwrap();
        let s = string_module(&alg, &Path::trivial(Vertex::X(1, 1))).unwrap();
        let (t, proj) = tau(&alg, &s);
        assert!(!proj);
        assert!(t.violated_relation(&alg).is_none());
        // Auslander–Reiten formula: Ext¹(M, N) ≅ D Hom(N, τM) over a hereditary algebra
        for v in 0..alg.vertex_count() {
            let simple = string_module(&alg, &Path::trivial(alg.quiver().vertices()[v])).unwrap();
            assert_eq!(ext1_dim(&alg, &s, &simple), hom_dim(&alg, &simple, &t));
        }
    }
}
