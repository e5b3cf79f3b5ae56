//! Orthogonal representations together with their generator systems.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::linalg::{self, Matrix};
use crate::poly::MultiPoly;
use crate::rat::{self, Rational};
use crate::rewrite::{GeneratorExpression, Rewriter, SymmetricScheme, TableScheme};

/// Row and column indices of a principal or mixed minor.
pub(crate) type MinorIndex = (Vec<usize>, Vec<usize>);
use crate::roots;

#[derive(Clone, Debug)]
pub enum Group {
    Finite { elements: Vec<Matrix> },
    /// A compact connected family described through its Lie algebra.
    Continuous {
        family: String,
        /// Orbit-tangent generators: the tangent space at `v` is spanned by `ξ v`.
        tangents: Vec<Matrix>,
        /// Finitely many group elements used for invariance spot checks.
        samples: Vec<Matrix>,
        /// Basis of the fixed subspace, declared rather than computed.
        fixed_basis: Vec<Vec<Rational>>,
    },
}

/// How to find a point `v` with `σ(v) = y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preimage {
    None,
    /// Real roots of the characteristic polynomial, non-increasing.
    Symmetric,
    /// `σ = (norm)`; the preimage sits on the given coordinate axis.
    NormAxis { axis: usize },
    /// Solve in the section and embed.
    ViaSection,
}

#[derive(Clone, Debug)]
pub enum Section {
    /// The representation is already a finite-group problem.
    Whole,
    Subspace(SectionData),
}

#[derive(Clone, Debug)]
pub struct SectionData {
    pub basis: Vec<Vec<Rational>>,
    /// The Weyl group acting on section coordinates with `σ` restricted.
    pub rep: Arc<Representation>,
}

/// One factor of an isotropy representation acting on consecutive normal coordinates.
#[derive(Clone, Debug)]
pub struct SliceBlock {
    pub rep: Arc<Representation>,
    pub offset: usize,
}

/// Local model at a singular point: `σ(v + N z) = l(τ(z))`.
#[derive(Clone, Debug)]
pub struct SliceData {
    pub base_point: Vec<Rational>,
    pub normal_basis: Vec<Vec<Rational>>,
    pub blocks: Vec<SliceBlock>,
    /// `n` polynomials over the concatenated block generators.
    pub embed_l: Vec<MultiPoly>,
}

impl SliceData {
    pub fn tau_len(&self) -> usize {
        self.blocks.iter().map(|b| b.rep.n()).sum()
    }

    pub fn normal_dim(&self) -> usize {
        self.normal_basis.len()
    }
}

/// Plain constructor input for [`Representation`].
pub struct RepSpec {
    pub name: String,
    pub dim: usize,
    pub metric: Vec<Rational>,
    pub group: Group,
    pub sigma: Vec<MultiPoly>,
    pub degrees: Vec<u32>,
    pub relations: Vec<MultiPoly>,
    pub rewriter: Rewriter,
    pub preimage: Preimage,
    pub section: Option<Section>,
    pub slices: Vec<SliceData>,
    pub max_depth: usize,
    pub notes: String,
}

pub struct Representation {
    pub name: String,
    pub dim: usize,
    /// Diagonal of the invariant inner product.
    pub metric: Vec<Rational>,
    pub group: Group,
    pub sigma: Vec<MultiPoly>,
    pub degrees: Vec<u32>,
    pub relations: Vec<MultiPoly>,
    pub rewriter: Rewriter,
    pub preimage: Preimage,
    pub section: Option<Section>,
    pub slices: Vec<SliceData>,
    pub max_depth: usize,
    pub notes: String,
    codim_regular: usize,
    split: OnceLock<Result<Arc<Split>>>,
    pub(crate) delta_cache: Mutex<HashMap<MinorIndex, MultiPoly>>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("degrees", &self.degrees)
            .finish_non_exhaustive()
    }
}

/// Decomposition `V = V^G ⊕ V'` with `σ = σ⁰ × σ¹`.
#[derive(Debug)]
pub struct Split {
    pub fixed_basis: Vec<Vec<Rational>>,
    pub perp_basis: Vec<Vec<Rational>>,
    /// Indices of the degree-one generators; they coordinatise `V^G`.
    pub linear: Vec<usize>,
    /// `α = l_inv · y_lin` for `v = Σ α_a f_a + …`.
    pub l_inv: Matrix,
    /// `u = p_perp · v`.
    pub p_perp: Matrix,
    /// `None` when `V^G = 0` and the representation is its own reduction.
    pub reduced: Option<Arc<Representation>>,
    /// Reduced generators as polynomials in the original generators.
    pub to_reduced: Vec<MultiPoly>,
    /// Original generators over `(y_lin, ỹ)`.
    pub from_reduced: Vec<MultiPoly>,
}

impl Split {
    pub fn is_identity(&self) -> bool {
        self.reduced.is_none()
    }

    pub fn fixed_dim(&self) -> usize {
        self.fixed_basis.len()
    }

    pub fn reduced_or<'a>(&'a self, rep: &'a Arc<Representation>) -> &'a Arc<Representation> {
        self.reduced.as_ref().unwrap_or(rep)
    }

    /// `v = F α + U u` as a point of `V`.
    pub fn assemble(&self, alpha: &[Jet], u: &[Jet], dim: usize, order: usize) -> Vec<Jet> {
        let mut out = vec![Jet::zero(order); dim];
        for (a, f) in alpha.iter().zip(&self.fixed_basis) {
            for k in 0..dim {
                if !f[k].is_zero() {
                    out[k] = &out[k] + &a.scale(&f[k]);
                }
            }
        }
        for (b, e) in u.iter().zip(&self.perp_basis) {
            for k in 0..dim {
                if !e[k].is_zero() {
                    out[k] = &out[k] + &b.scale(&e[k]);
                }
            }
        }
        out
    }
}

fn validation(msg: impl Into<String>) -> Error {
    Error::ValidationFailed(msg.into())
}

impl Representation {
    pub fn new(spec: RepSpec) -> Self {
        let codim = generic_rank(&spec.sigma, spec.dim);
        Representation {
            name: spec.name,
            dim: spec.dim,
            metric: spec.metric,
            group: spec.group,
            sigma: spec.sigma,
            degrees: spec.degrees,
            relations: spec.relations,
            rewriter: spec.rewriter,
            preimage: spec.preimage,
            section: spec.section,
            slices: spec.slices,
            max_depth: spec.max_depth,
            notes: spec.notes,
            codim_regular: codim,
            split: OnceLock::new(),
            delta_cache: Mutex::new(HashMap::new()),
        }
    }

    /// Number of generators.
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.group, Group::Finite { .. })
    }

    /// Rank of `dσ` on regular orbits.
    pub fn codim_regular(&self) -> usize {
        self.codim_regular
    }

    pub fn symmetric_scheme(&self) -> Option<&SymmetricScheme> {
        match &self.rewriter {
            Rewriter::Symmetric(s) => Some(s),
            _ => None,
        }
    }

    pub fn norm_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::zero(self.dim);
        for (k, w) in self.metric.iter().enumerate() {
            let mut e = vec![0; self.dim];
            e[k] = 2;
            p = &p + &MultiPoly::monomial(self.dim, e, w.clone());
        }
        p
    }

    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        linalg::dot_weighted(a, b, &self.metric)
    }

    pub fn eval_sigma(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.sigma.iter().map(|s| s.eval(v)).collect()
    }

    pub fn sigma_at_jets(&self, v: &[Jet]) -> Result<Vec<Jet>> {
        self.sigma.iter().map(|s| s.eval_at_jets(v)).collect()
    }

    /// `n × dim` matrix of partial derivatives at `v`.
    pub fn jacobian_at(&self, v: &[Rational]) -> Result<Matrix> {
        let mut j = Matrix::zeros(self.n(), self.dim);
        for (i, s) in self.sigma.iter().enumerate() {
            for k in 0..self.dim {
                j[(i, k)] = s.partial(k)?.eval(v)?;
            }
        }
        Ok(j)
    }

    /// Vectors `ξ v` spanning the orbit tangent at `v`.
    pub fn tangent_vectors(&self, v: &[Rational]) -> Vec<Vec<Rational>> {
        match &self.group {
            Group::Finite { .. } => Vec::new(),
            Group::Continuous { tangents, .. } => tangents.iter().map(|x| x.mul_vec(v)).collect(),
        }
    }

    /// Group elements checked exactly for invariance.
    pub fn check_elements(&self) -> &[Matrix] {
        match &self.group {
            Group::Finite { elements } => elements,
            Group::Continuous { samples, .. } => samples,
        }
    }

    /// `p∘g` for a linear map `g`.
    fn act(p: &MultiPoly, g: &Matrix) -> Result<MultiPoly> {
        // signed permutations and other monomial matrices just move exponents
        let mut image = Vec::with_capacity(g.rows());
        for i in 0..g.rows() {
            let nz: Vec<usize> = (0..g.cols()).filter(|&j| !g[(i, j)].is_zero()).collect();
            if nz.len() != 1 {
                return p.linear_substitute(&g.to_rows());
            }
            image.push(nz[0]);
        }
        if p.nvars() != g.rows() {
            return Err(Error::DimensionMismatch { expected: g.rows(), got: p.nvars() });
        }
        let terms = p.terms().map(|(e, c)| {
            let mut f = vec![0; g.cols()];
            let mut coef = c.clone();
            for (i, &k) in e.iter().enumerate() {
                f[image[i]] += k;
                if k > 0 {
                    coef *= num::pow(g[(i, image[i])].clone(), k as usize);
                }
            }
            (f, coef)
        });
        Ok(MultiPoly::from_terms(g.cols(), terms))
    }

    pub fn invariance_check(&self, p: &MultiPoly) -> Result<()> {
        if p.nvars() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: p.nvars() });
        }
        for (idx, g) in self.check_elements().iter().enumerate() {
            if Self::act(p, g)? != *p {
                return Err(Error::NotInvariant(format!("changed by group element {idx} of {}", self.name)));
            }
        }
        if let Group::Continuous { tangents, .. } = &self.group {
            let x: Vec<MultiPoly> = (0..self.dim).map(|k| MultiPoly::var(self.dim, k)).collect();
            for (idx, xi) in tangents.iter().enumerate() {
                let mut d = MultiPoly::zero(self.dim);
                for k in 0..self.dim {
                    let comp = (0..self.dim)
                        .filter(|&j| !xi[(k, j)].is_zero())
                        .fold(MultiPoly::zero(self.dim), |acc, j| &acc + &x[j].scale(&xi[(k, j)]));
                    d = &d + &(&p.partial(k)? * &comp);
                }
                if !d.is_zero() {
                    return Err(Error::NotInvariant(format!("not annihilated by tangent generator {idx}")));
                }
            }
        }
        Ok(())
    }

    /// `q` over the generators with `q∘σ = p`, verified by expansion.
    pub fn rewrite_in_generators(&self, p: &MultiPoly) -> Result<GeneratorExpression> {
        self.invariance_check(p)?;
        let q = self.rewriter.rewrite(p, &self.sigma, &self.degrees)?;
        if q.compose(&self.sigma)? == *p {
            Ok(GeneratorExpression { poly: q })
        } else {
            Err(Error::RewriterUnavailable(format!("expansion check failed for {p}")))
        }
    }

    pub fn fixed_subspace(&self) -> Vec<Vec<Rational>> {
        match &self.group {
            Group::Finite { elements } => {
                let rows: Vec<Vec<Rational>> = elements
                    .iter()
                    .flat_map(|g| g.sub(&Matrix::identity(self.dim)).to_rows())
                    .collect();
                if rows.is_empty() {
                    return Matrix::identity(self.dim).to_rows();
                }
                Matrix::from_rows(rows).expect("square elements").nullspace()
            }
            Group::Continuous { fixed_basis, .. } => fixed_basis.clone(),
        }
    }

    pub fn split(self: &Arc<Self>) -> Result<Arc<Split>> {
        self.split.get_or_init(|| compute_split(self).map(Arc::new)).clone()
    }

    /// Some `v` with `σ(v) = y`, and whether it is exact.
    pub fn preimage(&self, y: &[Rational], tol: &Rational) -> Result<(Vec<Rational>, bool)> {
        if y.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: y.len() });
        }
        match &self.preimage {
            Preimage::None => Err(Error::PreimageUnavailable(self.name.clone())),
            Preimage::Symmetric => {
                let s = self.symmetric_scheme().ok_or_else(|| Error::PreimageUnavailable(self.name.clone()))?;
                let e: Vec<Rational> = s.elementary.iter().map(|q| q.eval(y)).collect::<Result<_>>()?;
                let (x, exact) = symmetric_roots(&e, tol)?;
                Ok((s.project.mul_vec(&x), exact))
            }
            Preimage::NormAxis { axis } => {
                let w = &self.metric[*axis];
                let r = &y[0] / w;
                if r.is_negative() {
                    return Err(Error::OutsideOrbitSpace(format!("negative norm {}", rat::display(&y[0]))));
                }
                let (s, exact) = match rat::sqrt_exact(&r) {
                    Some(s) => (s, true),
                    None => (rat::sqrt_approx(&r, tol), false),
                };
                let mut v = vec![Rational::zero(); self.dim];
                v[*axis] = s;
                Ok((v, exact))
            }
            Preimage::ViaSection => match &self.section {
                Some(Section::Subspace(sd)) => {
                    let (s, exact) = sd.rep.preimage(y, tol)?;
                    let mut v = vec![Rational::zero(); self.dim];
                    for (si, b) in s.iter().zip(&sd.basis) {
                        for k in 0..self.dim {
                            v[k] += si * &b[k];
                        }
                    }
                    Ok((v, exact))
                }
                _ => Err(Error::NoSection(self.name.clone())),
            },
        }
    }

    /// Full load-time validation; the message names the first failed check.
    pub fn validate(self: &Arc<Self>) -> Result<()> {
        let d = self.dim;
        if self.metric.len() != d || self.metric.iter().any(|w| !w.is_positive()) {
            return Err(validation("metric must have dim positive weights"));
        }
        if self.degrees.len() != self.n() {
            return Err(validation("one degree per generator"));
        }
        for (i, (s, &deg)) in self.sigma.iter().zip(&self.degrees).enumerate() {
            if s.nvars() != d {
                return Err(validation(format!("generator {} has the wrong variable count", i + 1)));
            }
            if s.homogeneous_degree() != Some(deg) {
                return Err(validation(format!("generator {} is not homogeneous of degree {deg}", i + 1)));
            }
        }
        if self.degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(validation("degrees must be non-decreasing"));
        }
        let m = Matrix::diagonal(&self.metric);
        let orthogonal = |g: &Matrix| -> bool {
            g.rows() == d && g.cols() == d && g.transpose().mul(&m).and_then(|x| x.mul(g)).is_ok_and(|x| x == m)
        };
        match &self.group {
            Group::Finite { elements } => {
                if let Some(i) = elements.iter().position(|g| !orthogonal(g)) {
                    return Err(validation(format!("group element {i} is not orthogonal")));
                }
            }
            Group::Continuous { tangents, samples, fixed_basis, .. } => {
                for (i, x) in tangents.iter().enumerate() {
                    let skew = x.rows() == d
                        && x.cols() == d
                        && x.transpose().mul(&m).and_then(|a| Ok(a.add(&m.mul(x)?))).is_ok_and(|s| s.is_zero());
                    if !skew {
                        return Err(validation(format!("tangent generator {i} is not skew")));
                    }
                }
                if let Some(i) = samples.iter().position(|g| !orthogonal(g)) {
                    return Err(validation(format!("sample element {i} is not orthogonal")));
                }
                for f in fixed_basis {
                    let moved = tangents.iter().any(|x| x.mul_vec(f).iter().any(|c| !c.is_zero()))
                        || samples.iter().any(|g| g.mul_vec(f) != *f);
                    if moved || f.len() != d {
                        return Err(validation("declared fixed vector is moved by the group"));
                    }
                }
            }
        }
        for (i, s) in self.sigma.iter().enumerate() {
            self.invariance_check(s).map_err(|e| validation(format!("generator {}: {e}", i + 1)))?;
        }
        for (i, r) in self.relations.iter().enumerate() {
            let ok = r.nvars() == self.n() && r.compose(&self.sigma).is_ok_and(|p| p.is_zero());
            if !ok {
                return Err(validation(format!("relation {} does not vanish on σ", i + 1)));
            }
        }
        if let Rewriter::Tables(TableScheme { entries }) = &self.rewriter {
            for (i, (p, q)) in entries.iter().enumerate() {
                if q.compose(&self.sigma).ok().as_ref() != Some(p) {
                    return Err(validation(format!("table entry {} fails expansion", i + 1)));
                }
            }
        }
        if let Rewriter::Symmetric(s) = &self.rewriter {
            let k = s.ambient;
            let e = crate::rewrite::elementary_symmetric(k);
            let shapes = s.project.rows() == d && s.project.cols() == k && s.embed.rows() == k && s.embed.cols() == d;
            if !shapes || s.project.mul(&s.embed).ok() != Some(Matrix::identity(d)) {
                return Err(validation("symmetric scheme has inconsistent embedding"));
            }
            for (i, q) in s.elementary.iter().enumerate() {
                let lhs = q.compose(&self.sigma).ok();
                let rhs = e[i].linear_substitute(&s.embed.to_rows()).ok();
                if lhs.is_none() || lhs != rhs {
                    return Err(validation(format!("elementary table entry {} fails expansion", i + 1)));
                }
            }
        }
        self.split().map_err(|e| validation(format!("fixed-point split: {e}")))?;
        match &self.section {
            None => {}
            Some(Section::Whole) => {
                if !self.is_finite() {
                    return Err(validation("only finite groups can be their own section"));
                }
            }
            Some(Section::Subspace(sd)) => self.validate_section(sd)?,
        }
        for (i, sl) in self.slices.iter().enumerate() {
            self.validate_slice(sl).map_err(|e| validation(format!("slice {}: {e}", i + 1)))?;
        }
        match &self.preimage {
            Preimage::Symmetric if self.symmetric_scheme().is_none() => {
                return Err(validation("symmetric preimage needs a symmetric scheme"));
            }
            Preimage::NormAxis { axis } if *axis >= d || self.n() != 1 || self.sigma[0] != self.norm_poly() => {
                return Err(validation("norm-axis preimage needs σ = (norm)"));
            }
            Preimage::ViaSection if !matches!(self.section, Some(Section::Subspace(_))) => {
                return Err(validation("section preimage needs section data"));
            }
            _ => {}
        }
        Ok(())
    }

    fn validate_section(&self, sd: &SectionData) -> Result<()> {
        let d = self.dim;
        if sd.basis.iter().any(|b| b.len() != d) || sd.rep.dim != sd.basis.len() {
            return Err(validation("section basis has the wrong shape"));
        }
        let rows: Vec<Vec<Rational>> = (0..d).map(|k| sd.basis.iter().map(|b| b[k].clone()).collect()).collect();
        for (i, s) in self.sigma.iter().enumerate() {
            if sd.rep.sigma.get(i) != Some(&s.linear_substitute(&rows)?) {
                return Err(validation(format!("section generator {} is not σ restricted", i + 1)));
            }
        }
        if sd.rep.n() != self.n() || !sd.rep.is_finite() {
            return Err(validation("section needs a finite Weyl group with the same generators"));
        }
        for (i, b1) in sd.basis.iter().enumerate() {
            for b2 in &sd.basis {
                if self.tangent_vectors(b1).iter().any(|t| !self.inner(t, b2).is_zero()) {
                    return Err(validation(format!("section is not orthogonal to the orbit through basis vector {i}")));
                }
            }
        }
        let restricted: Vec<Rational> = sd.basis.iter().map(|b| self.inner(b, b)).collect();
        let cross_ok = sd.basis.iter().enumerate().all(|(i, a)| {
            sd.basis.iter().enumerate().all(|(j, b)| i == j || self.inner(a, b).is_zero())
        });
        if !cross_ok || restricted != sd.rep.metric {
            return Err(validation("section metric is not the restriction"));
        }
        sd.rep.validate().map_err(|e| validation(format!("Weyl system: {e}")))
    }

    fn validate_slice(&self, sl: &SliceData) -> Result<()> {
        let d = self.dim;
        let nd = sl.normal_dim();
        if sl.base_point.len() != d || sl.normal_basis.iter().any(|b| b.len() != d) {
            return Err(validation("slice vectors have the wrong length"));
        }
        let mut off = 0;
        let mut tau = Vec::new();
        for b in &sl.blocks {
            if b.offset != off {
                return Err(validation("slice blocks must be consecutive"));
            }
            for s in &b.rep.sigma {
                let map: Vec<usize> = (b.offset..b.offset + b.rep.dim).collect();
                tau.push(s.remap(nd, &map));
            }
            off += b.rep.dim;
        }
        if off != nd || sl.embed_l.len() != self.n() {
            return Err(validation("slice blocks do not cover the normal space"));
        }
        let rows: Vec<MultiPoly> = (0..d)
            .map(|k| {
                let lin: Vec<Rational> = sl.normal_basis.iter().map(|b| b[k].clone()).collect();
                &MultiPoly::constant(nd, sl.base_point[k].clone()) + &MultiPoly::linear(&lin)
            })
            .collect();
        for (i, (s, l)) in self.sigma.iter().zip(&sl.embed_l).enumerate() {
            if s.compose(&rows)? != l.compose(&tau)? {
                return Err(validation(format!("l∘τ differs from σ{} on the slice", i + 1)));
            }
        }
        Ok(())
    }
}

/// Max rank of `dσ` over a few fixed points.
fn generic_rank(sigma: &[MultiPoly], dim: usize) -> usize {
    if sigma.is_empty() || dim == 0 {
        return 0;
    }
    let grads: Vec<Vec<MultiPoly>> = sigma.iter().map(MultiPoly::gradient).collect();
    (0..3)
        .map(|s| {
            let v: Vec<Rational> = (0..dim)
                .map(|k| rat::frac(((k as i64 + 2) * (k as i64 + 3 + s)) % 37 + 1 + k as i64 * 41, s + 2))
                .collect();
            let rows: Vec<Vec<Rational>> = grads
                .iter()
                .map(|g| g.iter().map(|p| p.eval(&v).expect("dimension")).collect())
                .collect();
            Matrix::from_rows(rows).expect("rectangular").rank()
        })
        .max()
        .unwrap_or(0)
}

/// Roots of `x^k - e_1 x^{k-1} + e_2 x^{k-2} - …`, non-increasing.
pub fn symmetric_roots(e: &[Rational], tol: &Rational) -> Result<(Vec<Rational>, bool)> {
    let k = e.len();
    let mut p = vec![Rational::zero(); k + 1];
    p[k] = Rational::one();
    for (i, ei) in e.iter().enumerate() {
        p[k - 1 - i] = crate::rewrite::alternating_sign(i + 1) * ei;
    }
    if k == 0 {
        return Ok((Vec::new(), true));
    }
    let rs = roots::real_roots(&p, tol);
    let count: usize = rs.iter().map(|r| r.multiplicity).sum();
    if count != k {
        return Err(Error::OutsideOrbitSpace(format!("only {count} of {k} roots are real")));
    }
    let exact = rs.iter().all(|r| r.exact);
    let x = rs.iter().flat_map(|r| std::iter::repeat_n(r.value.clone(), r.multiplicity)).collect();
    Ok((x, exact))
}

/// Scale to a primitive integer vector whose first nonzero entry is positive.
fn primitive(v: &[Rational]) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v.to_vec();
    }
    if ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect()
}

fn orthogonal_basis(vs: &[Vec<Rational>], metric: &[Rational]) -> Vec<Vec<Rational>> {
    linalg::orthogonalize(vs, metric).iter().map(|v| primitive(v)).collect()
}

/// Matrix with rows `⟨b, ·⟩ / ⟨b, b⟩`, the coordinate functionals of an orthogonal basis.
fn coordinate_rows(basis: &[Vec<Rational>], metric: &[Rational]) -> Matrix {
    let rows: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| {
            let nb = linalg::dot_weighted(b, b, metric);
            b.iter().zip(metric).map(|(x, w)| x * w / &nb).collect()
        })
        .collect();
    if rows.is_empty() {
        return Matrix::zeros(0, metric.len());
    }
    Matrix::from_rows(rows).expect("rectangular")
}

enum Restricted {
    Norm(Rational),
    Gen(usize),
    Zero,
}

fn compute_split(rep: &Arc<Representation>) -> Result<Split> {
    let d = rep.dim;
    let n = rep.n();
    let fixed = orthogonal_basis(&rep.fixed_subspace(), &rep.metric);
    let m = fixed.len();
    let linear: Vec<usize> = (0..n).filter(|&i| rep.degrees[i] == 1).collect();
    if linear.len() != m {
        return Err(Error::ConventionViolation(format!(
            "{} linear generators for a {m}-dimensional fixed subspace",
            linear.len()
        )));
    }
    let mut l = Matrix::zeros(m, m);
    for (r, &i) in linear.iter().enumerate() {
        for (c, f) in fixed.iter().enumerate() {
            l[(r, c)] = rep.sigma[i].eval(f)?;
        }
    }
    let l_inv = l
        .inverse()
        .ok_or_else(|| Error::ConventionViolation("linear generators do not coordinatise V^G".into()))?;

    if m == 0 {
        if n > 0 && (rep.degrees[0] != 2 || rep.sigma[0] != rep.norm_poly()) {
            return Err(Error::ConventionViolation("first generator must be the norm".into()));
        }
        if n == 0 && d > 0 {
            return Err(Error::ConventionViolation("no norm generator".into()));
        }
        let ys: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(n, i)).collect();
        return Ok(Split {
            fixed_basis: Vec::new(),
            perp_basis: Matrix::identity(d).to_rows(),
            linear,
            l_inv,
            p_perp: Matrix::identity(d),
            reduced: None,
            to_reduced: ys.clone(),
            from_reduced: ys,
        });
    }

    let constraints: Vec<Vec<Rational>> =
        fixed.iter().map(|f| f.iter().zip(&rep.metric).map(|(a, w)| a * w).collect()).collect();
    let perp = orthogonal_basis(&Matrix::from_rows(constraints).expect("rectangular").nullspace(), &rep.metric);
    let dp = perp.len();
    let weights: Vec<Rational> = perp.iter().map(|u| rep.inner(u, u)).collect();
    let p_perp = coordinate_rows(&perp, &rep.metric);
    let u_rows: Vec<Vec<Rational>> = (0..d).map(|k| perp.iter().map(|u| u[k].clone()).collect()).collect();

    // restrict the nonlinear generators and put the norm first
    let norm = {
        let mut p = MultiPoly::zero(dp);
        for (j, w) in weights.iter().enumerate() {
            let mut e = vec![0; dp];
            e[j] = 2;
            p = &p + &MultiPoly::monomial(dp, e, w.clone());
        }
        p
    };
    let nonlinear: Vec<usize> = (0..n).filter(|&i| rep.degrees[i] != 1).collect();
    let restricted: Vec<MultiPoly> = nonlinear
        .iter()
        .map(|&i| if dp == 0 { Ok(MultiPoly::zero(0)) } else { rep.sigma[i].linear_substitute(&u_rows) })
        .collect::<Result<_>>()?;
    let norm_at = nonlinear.iter().zip(&restricted).position(|(&i, r)| {
        rep.degrees[i] == 2 && !r.is_zero() && proportional(r, &norm).is_some()
    });
    if dp > 0 && norm_at.is_none() {
        return Err(Error::ConventionViolation("no degree-2 generator restricts to the norm".into()));
    }
    let mut red_sigma = Vec::new();
    let mut red_degrees = Vec::new();
    let mut role = Vec::new();
    if norm_at.is_some() {
        red_sigma.push(norm.clone());
        red_degrees.push(2);
    }
    for (pos, (&i, r)) in nonlinear.iter().zip(&restricted).enumerate() {
        if Some(pos) == norm_at {
            role.push(Restricted::Norm(proportional(r, &norm).expect("checked")));
        } else if r.is_zero() {
            role.push(Restricted::Zero);
        } else {
            role.push(Restricted::Gen(red_sigma.len()));
            red_sigma.push(r.clone());
            red_degrees.push(rep.degrees[i]);
        }
    }
    let n_red = red_sigma.len();

    let conj = |g: &Matrix| -> Matrix {
        let u = Matrix::from_columns(d, &perp);
        p_perp.mul(g).and_then(|x| x.mul(&u)).expect("shapes agree")
    };
    let group = match &rep.group {
        Group::Finite { elements } => Group::Finite { elements: elements.iter().map(conj).collect() },
        Group::Continuous { family, tangents, samples, .. } => Group::Continuous {
            family: family.clone(),
            tangents: tangents.iter().map(conj).collect(),
            samples: samples.iter().map(conj).collect(),
            fixed_basis: Vec::new(),
        },
    };
    // substitution of original generators when v ∈ V'
    let ys_red: Vec<MultiPoly> = {
        let mut out = vec![MultiPoly::zero(n_red); n];
        for (pos, &i) in nonlinear.iter().enumerate() {
            out[i] = match role[pos] {
                Restricted::Norm(ref lam) => MultiPoly::var(n_red, 0).scale(lam),
                Restricted::Gen(j) => MultiPoly::var(n_red, j),
                Restricted::Zero => MultiPoly::zero(n_red),
            };
        }
        out
    };
    let (rewriter, preimage) = match &rep.rewriter {
        Rewriter::Symmetric(s) => {
            let u = Matrix::from_columns(d, &perp);
            let scheme = SymmetricScheme {
                ambient: s.ambient,
                project: p_perp.mul(&s.project)?,
                embed: s.embed.mul(&u)?,
                elementary: s.elementary.iter().map(|q| q.compose(&ys_red)).collect::<Result<_>>()?,
            };
            (Rewriter::Symmetric(scheme), Preimage::Symmetric)
        }
        _ => (Rewriter::Tables(TableScheme::default()), Preimage::None),
    };
    let reduced = Arc::new(Representation::new(RepSpec {
        name: format!("{}/fixed", rep.name),
        dim: dp,
        metric: weights,
        group,
        sigma: red_sigma,
        degrees: red_degrees,
        relations: Vec::new(),
        rewriter,
        preimage,
        section: None,
        slices: Vec::new(),
        max_depth: rep.max_depth,
        notes: String::new(),
    }));

    // reduced generators pulled back along v ↦ P_perp v, in original generators
    let to_reduced: Vec<MultiPoly> = reduced
        .sigma
        .iter()
        .map(|s| {
            let pulled = if dp == 0 { MultiPoly::zero(d) } else { s.linear_substitute(&p_perp.to_rows())? };
            Ok(rep.rewrite_in_generators(&pulled)?.poly)
        })
        .collect::<Result<_>>()?;

    // original generators over (α, u), then over (y_lin, ỹ)
    let rows: Vec<Vec<Rational>> = (0..d)
        .map(|k| fixed.iter().map(|f| f[k].clone()).chain(perp.iter().map(|u| u[k].clone())).collect())
        .collect();
    let alpha_of_y: Vec<MultiPoly> = (0..m)
        .map(|a| MultiPoly::linear(l_inv.row(a)).remap(m + n_red, &(0..m).collect::<Vec<_>>()))
        .chain((0..n_red).map(|j| MultiPoly::var(m + n_red, m + j)))
        .collect();
    let mut from_reduced = Vec::with_capacity(n);
    for s in &rep.sigma {
        let full = s.linear_substitute(&rows)?;
        let mut groups: std::collections::BTreeMap<Vec<u32>, MultiPoly> = std::collections::BTreeMap::new();
        for (e, c) in full.terms() {
            let slot = groups.entry(e[..m].to_vec()).or_insert_with(|| MultiPoly::zero(dp));
            *slot = &*slot + &MultiPoly::monomial(dp, e[m..].to_vec(), c.clone());
        }
        let mut acc = MultiPoly::zero(m + n_red);
        for (ae, coef) in groups {
            let q = reduced.rewrite_in_generators(&coef)?.poly;
            let mut mono = vec![0; m + n_red];
            mono[..m].copy_from_slice(&ae);
            let lifted = q.remap(m + n_red, &(m..m + n_red).collect::<Vec<_>>());
            acc = &acc + &(&MultiPoly::monomial(m + n_red, mono, Rational::one()) * &lifted);
        }
        from_reduced.push(acc.compose(&alpha_of_y)?);
    }

    Ok(Split {
        fixed_basis: fixed,
        perp_basis: perp,
        linear,
        l_inv,
        p_perp,
        reduced: Some(reduced),
        to_reduced,
        from_reduced,
    })
}

fn proportional(p: &MultiPoly, q: &MultiPoly) -> Option<Rational> {
    let (e, c) = q.leading_term()?;
    let l = p.coeff(e) / c;
    (!l.is_zero() && q.scale(&l) == *p).then_some(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[rat::frac(-1, 2), rat::frac(-1, 2), int(1)]), vec![int(1), int(1), int(-2)]);
    }

    #[test]
    fn roots_of_characteristic_polynomial() {
        let (x, exact) = symmetric_roots(&[int(3), int(2)], &rat::frac(1, 1000)).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(exact);
        assert!(matches!(symmetric_roots(&[int(0), int(1)], &rat::frac(1, 1000)), Err(Error::OutsideOrbitSpace(_))));
    }
}
