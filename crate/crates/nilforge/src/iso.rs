//! Isomorphism invariants and a budgeted isomorphism search.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::Result;
use crate::forms::{signature_of_pana, Pointing};
use crate::linalg::{is_zero_vec, unit_vec, vec_add, vec_scale, zero_vec, Matrix, Subspace, Vector};
use crate::scalar::{FieldTag, Scalar};

/// Isomorphism invariants of a nilpotent algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub nil_index: usize,
    /// `dim N^k` for `k = 1..=ν+1`.
    pub power_dims: Vec<usize>,
    pub ann_dim: usize,
    /// `dim ⟨N^k N^k⟩` for `k = 1..=ν`.
    pub square_ranks: Vec<usize>,
    /// Form type as an unordered pair `(max, min)`, when defined.
    pub signature: Option<(usize, usize)>,
}

pub fn fingerprint(a: &Algebra) -> Result<Fingerprint> {
    let nu = a.nil_index()?;
    let chain = a.power_chain();
    let power_dims = chain.iter().map(Subspace::dim).collect();
    let square_ranks = chain[..nu].iter().map(|s| a.product_space(s, s).dim()).collect();
    let ann_dim = a.annihilator().dim();
    let signature = if a.field == FieldTag::Rational && ann_dim == 1 {
        let s = signature_of_pana(&Pointing::canonical(a.clone())?)?;
        Some((s.p.max(s.q), s.p.min(s.q)))
    } else {
        None
    };
    Ok(Fingerprint { dim: a.dim, nil_index: nu, power_dims, ann_dim, square_ranks, signature })
}

/// First differing fingerprint entry, by name.
pub fn fingerprint_difference(f: &Fingerprint, g: &Fingerprint) -> Option<&'static str> {
    if f.dim != g.dim {
        Some("dim")
    } else if f.nil_index != g.nil_index {
        Some("nil-index")
    } else if f.power_dims != g.power_dims {
        Some("power dims")
    } else if f.ann_dim != g.ann_dim {
        Some("annihilator dim")
    } else if f.square_ranks != g.square_ranks {
        Some("square ranks")
    } else if f.signature != g.signature {
        Some("signature")
    } else {
        None
    }
}

/// Three-valued answer of the isomorphism search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// Verified isomorphism, columns are images of the source basis.
    Iso(Matrix),
    /// Named invariant that differs.
    Distinct(String),
    /// Budget exhausted.
    Unknown,
}

impl IsoOutcome {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Iso(_))
    }
}

pub fn find_isomorphism(a: &Algebra, b: &Algebra, budget: usize) -> IsoOutcome {
    find_isomorphism_filtered(a, b, budget, &|_| true)
}

/// Search restricted to isomorphisms accepted by `accept`.
pub fn find_isomorphism_filtered(a: &Algebra, b: &Algebra, budget: usize, accept: &dyn Fn(&Matrix) -> bool) -> IsoOutcome {
    if a.field != b.field {
        return IsoOutcome::Distinct("field".into());
    }
    let (fa, fb) = match (fingerprint(a), fingerprint(b)) {
        (Ok(fa), Ok(fb)) => (fa, fb),
        _ => return IsoOutcome::Unknown,
    };
    if let Some(d) = fingerprint_difference(&fa, &fb) {
        return IsoOutcome::Distinct(d.into());
    }
    if a.dim == 0 {
        return IsoOutcome::Iso(Matrix::zeros(0, 0));
    }
    let mut spent = 0;
    let first = budget / 2 + budget % 2;
    if let Some(phi) = Search::new(a, b, first).run(&mut spent, accept) {
        return IsoOutcome::Iso(phi);
    }
    let mut spent2 = 0;
    let reverse_accept = |psi: &Matrix| psi.inverse().map(|phi| accept(&phi)).unwrap_or(false);
    if let Some(psi) = Search::new(b, a, budget - first).run(&mut spent2, &reverse_accept) {
        let phi = psi.inverse().expect("verified isomorphism is invertible");
        debug_assert!(a.is_isomorphism_to(b, &phi));
        return IsoOutcome::Iso(phi);
    }
    IsoOutcome::Unknown
}

struct Search<'a> {
    src: &'a Algebra,
    dst: &'a Algebra,
    budget: usize,
    gens: Vec<usize>,
    /// Words of the chosen monomial basis, and coordinates of `e_i` in it.
    basis_words: Vec<Vec<usize>>,
    express: Matrix,
    dst_sq: Subspace,
    /// Order of each generator: least `k` with `g^k = 0`.
    orders: Vec<usize>,
    /// For each prefix length, the words over those generators with the relations among them.
    prefix_words: Vec<Vec<Vec<usize>>>,
    prefix_relations: Vec<Vec<Vector>>,
    prefix_ranks: Vec<usize>,
}

fn words_over(ngens: usize, max_len: usize, must_use_last: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = (0..ngens).map(|g| vec![g]).collect();
    for _ in 0..max_len {
        out.extend(level.iter().cloned());
        let mut next = Vec::new();
        for w in &level {
            let last = *w.last().unwrap();
            for g in last..ngens {
                let mut nw = w.clone();
                nw.push(g);
                next.push(nw);
            }
        }
        level = next;
    }
    if must_use_last && ngens > 0 {
        out.retain(|w| w.contains(&(ngens - 1)));
    }
    out
}

fn power_order(a: &Algebra, v: &[Scalar]) -> usize {
    let mut p = v.to_vec();
    let mut k = 1;
    while !is_zero_vec(&p) {
        p = a.mul(&p, v);
        k += 1;
        if k > a.dim + 2 {
            break;
        }
    }
    k
}

impl<'a> Search<'a> {
    fn new(src: &'a Algebra, dst: &'a Algebra, budget: usize) -> Self {
        let n = src.dim;
        let nu = src.nil_index().unwrap_or(n);
        let sq = src.power_subspace(2);
        let gens: Vec<usize> = (0..n).filter(|c| !sq.pivots().contains(c)).collect();
        let all_words = words_over(gens.len(), nu, false);
        let word_vec = |w: &Vec<usize>| -> Vector {
            let mut v = unit_vec(n, gens[w[0]]);
            for &g in &w[1..] {
                v = src.mul(&v, &unit_vec(n, gens[g]));
            }
            v
        };
        let mut basis_words = Vec::new();
        let mut basis_vecs: Vec<Vector> = Vec::new();
        for w in &all_words {
            let v = word_vec(w);
            if is_zero_vec(&v) {
                continue;
            }
            let mut trial = basis_vecs.clone();
            trial.push(v.clone());
            if Matrix::from_rows(&trial).rank() == trial.len() {
                basis_vecs = trial;
                basis_words.push(w.clone());
            }
            if basis_vecs.len() == n {
                break;
            }
        }
        let express = Matrix::from_cols(&basis_vecs, n).inverse().expect("generators span the algebra");
        let orders = gens.iter().map(|&g| power_order(src, &unit_vec(n, g))).collect();
        let mut prefix_words = Vec::new();
        let mut prefix_relations = Vec::new();
        let mut prefix_ranks = Vec::new();
        for r in 1..=gens.len() {
            let ws = words_over(r, nu + 1, false);
            let vecs: Vec<Vector> = ws.iter().map(word_vec).collect();
            let m = Matrix::from_cols(&vecs, n);
            prefix_ranks.push(m.rank());
            prefix_relations.push(m.nullspace());
            prefix_words.push(ws);
        }
        Search {
            src,
            dst,
            budget,
            gens,
            basis_words,
            express,
            dst_sq: dst.power_subspace(2),
            orders,
            prefix_words,
            prefix_relations,
            prefix_ranks,
        }
    }

    /// Integer vectors of height exactly `h` outside `N²`, or `None` when the tier is too large.
    fn tier(&self, h: i64) -> Option<Vec<Vector>> {
        let n = self.dst.dim;
        let size = (2 * h + 1).checked_pow(n as u32).unwrap_or(i64::MAX);
        if h > 1 && size > 400_000 {
            return None;
        }
        let mut all: Vec<Vec<i64>> = Vec::new();
        let mut cur = vec![-h; n];
        loop {
            if cur.iter().any(|&x| x.abs() == h) {
                all.push(cur.clone());
            }
            let mut i = 0;
            while i < n {
                if cur[i] < h {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -h;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        all.sort_by_key(|v| {
            let nz = v.iter().filter(|&&x| x != 0).count();
            let l1: i64 = v.iter().map(|x| x.abs()).sum();
            let neg = v.iter().filter(|&&x| x < 0).count();
            let lead = v.iter().position(|&x| x != 0).unwrap_or(n);
            (nz, l1, neg, lead, v.iter().map(|&x| -x).collect::<Vec<_>>())
        });
        Some(
            all.into_iter()
                .map(|v| v.into_iter().map(Scalar::from_int).collect::<Vector>())
                .filter(|v| !self.dst_sq.contains(v))
                .collect(),
        )
    }

    fn word_image(&self, imgs: &[Vector], w: &[usize]) -> Vector {
        let mut v = imgs[w[0]].clone();
        for &g in &w[1..] {
            v = self.dst.mul(&v, &imgs[g]);
        }
        v
    }

    fn prefix_ok(&self, imgs: &[Vector]) -> bool {
        let r = imgs.len();
        let g = r - 1;
        if power_order(self.dst, &imgs[g]) != self.orders[g] {
            return false;
        }
        let mut mod_sq = self.dst_sq.basis().to_vec();
        mod_sq.extend(imgs.iter().cloned());
        if Matrix::from_rows(&mod_sq).rank() != self.dst_sq.dim() + r {
            return false;
        }
        let words = &self.prefix_words[r - 1];
        let vecs: Vec<Vector> = words.iter().map(|w| self.word_image(imgs, w)).collect();
        let m = Matrix::from_cols(&vecs, self.dst.dim);
        if m.rank() != self.prefix_ranks[r - 1] {
            return false;
        }
        self.prefix_relations[r - 1].iter().all(|rel| is_zero_vec(&m.mul_vec(rel)))
    }

    fn assemble(&self, imgs: &[Vector]) -> Matrix {
        let n = self.src.dim;
        let mono: Vec<Vector> = self.basis_words.iter().map(|w| self.word_image(imgs, w)).collect();
        let cols: Vec<Vector> = (0..n)
            .map(|i| {
                let mut v = zero_vec(self.dst.dim);
                for (m, img) in mono.iter().enumerate() {
                    let c = &self.express[(m, i)];
                    if !c.is_zero() {
                        v = vec_add(&v, &vec_scale(c, img));
                    }
                }
                v
            })
            .collect();
        Matrix::from_cols(&cols, self.dst.dim)
    }

    fn run(&self, spent: &mut usize, accept: &dyn Fn(&Matrix) -> bool) -> Option<Matrix> {
        let mut tiers: Vec<Vector> = Vec::new();
        for h in 1..=3i64 {
            match self.tier(h) {
                Some(t) => tiers.extend(t),
                None => return None,
            }
            let pool: Vec<&Vector> = tiers.iter().collect();
            let mut imgs = Vec::new();
            if let Some(m) = self.dfs(&pool, &mut imgs, spent, accept) {
                return Some(m);
            }
            if *spent >= self.budget {
                return None;
            }
        }
        None
    }

    fn dfs(&self, pool: &[&Vector], imgs: &mut Vec<Vector>, spent: &mut usize, accept: &dyn Fn(&Matrix) -> bool) -> Option<Matrix> {
        let g = imgs.len();
        if g == self.gens.len() {
            let phi = self.assemble(imgs);
            if self.src.is_isomorphism_to(self.dst, &phi) && accept(&phi) {
                return Some(phi);
            }
            return None;
        }
        for v in pool {
            if *spent >= self.budget {
                return None;
            }
            *spent += 1;
            imgs.push((*v).clone());
            if self.prefix_ok(imgs) {
                if let Some(m) = self.dfs(pool, imgs, spent, accept) {
                    return Some(m);
                }
            }
            imgs.pop();
        }
        None
    }
}
