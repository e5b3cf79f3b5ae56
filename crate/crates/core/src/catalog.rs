//! Built-in representations, validated when first loaded.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::lift::OrbitCurve;
use crate::linalg::Matrix;
use crate::poly::MultiPoly;
use crate::rat::{frac, int, Rational};
use crate::rep::{Group, Preimage, RepSpec, Representation, Section, SectionData};
use crate::rewrite::{elementary_symmetric, symmetric_full, Rewriter, SymmetricScheme, TableScheme};

const NAMES: &[&str] = &[
    "sym_2",
    "sym_3",
    "sym_4",
    "sym_2_reduced",
    "sym_3_reduced",
    "sym_4_reduced",
    "z2_line",
    "circle_scalar",
    "o2_sym2",
];

pub fn list() -> &'static [&'static str] {
    NAMES
}

fn cache() -> &'static Mutex<HashMap<String, Arc<Representation>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<Representation>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Load and validate a catalog entry. `sym_k_full` is accepted for `sym_k`.
pub fn load(name: &str) -> Result<Arc<Representation>> {
    let key = name.strip_suffix("_full").unwrap_or(name);
    if let Some(rep) = cache().lock().expect("catalog lock").get(key) {
        return Ok(rep.clone());
    }
    let rep = match key {
        "sym_2" | "sym_3" | "sym_4" => sym_full(sym_index(key)),
        "sym_2_reduced" | "sym_3_reduced" | "sym_4_reduced" => sym_reduced(sym_index(key))?,
        "z2_line" => z2_line(),
        "circle_scalar" => circle_scalar(),
        "o2_sym2" => o2_sym2(),
        _ => return Err(Error::UnknownEntry(name.to_string())),
    };
    rep.validate()?;
    cache().lock().expect("catalog lock").insert(key.to_string(), rep.clone());
    Ok(rep)
}

fn sym_index(name: &str) -> usize {
    name.as_bytes()[4] as usize - b'0' as usize
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Permutation representation of `S_k` on `R^k` with the elementary
/// symmetric generators. Cached; not validated (use [`load`] for that).
pub fn sym_full(k: usize) -> Arc<Representation> {
    static FULL: OnceLock<Mutex<HashMap<usize, Arc<Representation>>>> = OnceLock::new();
    let map = FULL.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rep) = map.lock().expect("sym lock").get(&k) {
        return rep.clone();
    }
    let elements = permutations(k)
        .into_iter()
        .map(|p| {
            let mut m = Matrix::zeros(k, k);
            for (i, &j) in p.iter().enumerate() {
                m[(i, j)] = int(1);
            }
            m
        })
        .collect();
    let rep = Arc::new(Representation::new(RepSpec {
        name: format!("sym_{k}"),
        dim: k,
        metric: vec![int(1); k],
        group: Group::Finite { elements },
        sigma: elementary_symmetric(k),
        degrees: (1..=k as u32).collect(),
        relations: Vec::new(),
        rewriter: Rewriter::Symmetric(symmetric_full(k)),
        preimage: Preimage::Symmetric,
        section: Some(Section::Whole),
        slices: Vec::new(),
        max_depth: k,
        notes: format!("S_{k} permuting coordinates; generators e_1..e_{k}"),
    }));
    map.lock().expect("sym lock").insert(k, rep.clone());
    rep
}

fn respec(rep: &Representation, name: String, notes: String) -> RepSpec {
    RepSpec {
        name,
        dim: rep.dim,
        metric: rep.metric.clone(),
        group: rep.group.clone(),
        sigma: rep.sigma.clone(),
        degrees: rep.degrees.clone(),
        relations: rep.relations.clone(),
        rewriter: rep.rewriter.clone(),
        preimage: rep.preimage.clone(),
        section: rep.section.clone(),
        slices: rep.slices.clone(),
        max_depth: rep.max_depth,
        notes,
    }
}

/// `S_k` on the trace-zero hyperplane, norm first.
fn sym_reduced(k: usize) -> Result<Arc<Representation>> {
    let full = sym_full(k);
    let split = full.split()?;
    let red = split.reduced.as_ref().expect("S_k fixes the diagonal");
    let mut spec = respec(
        red,
        format!("sym_{k}_reduced"),
        format!("S_{k} on the sum-zero hyperplane in Helmert coordinates; norm first"),
    );
    spec.section = Some(Section::Whole);
    spec.max_depth = k;
    Ok(Arc::new(Representation::new(spec)))
}

fn xs(src: &str, vars: &[&str]) -> MultiPoly {
    MultiPoly::parse(src, vars).expect("catalog polynomial")
}

fn z2_line() -> Arc<Representation> {
    Arc::new(Representation::new(RepSpec {
        name: "z2_line".into(),
        dim: 1,
        metric: vec![int(1)],
        group: Group::Finite { elements: vec![Matrix::from_int_rows(&[&[1]]), Matrix::from_int_rows(&[&[-1]])] },
        sigma: vec![xs("x^2", &["x"])],
        degrees: vec![2],
        relations: Vec::new(),
        rewriter: Rewriter::Tables(TableScheme { entries: vec![(xs("4*x^2", &["x"]), xs("4*y", &["y"]))] }),
        preimage: Preimage::NormAxis { axis: 0 },
        section: Some(Section::Whole),
        slices: Vec::new(),
        max_depth: 1,
        notes: "x ↦ −x on the line; generator x²".into(),
    }))
}

/// `[[c, −s], [s, c]]`.
fn rotation(c: Rational, s: Rational) -> Matrix {
    Matrix::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c]]).expect("square")
}

fn circle_scalar() -> Arc<Representation> {
    let v = ["x1", "x2"];
    let section_rep = load("z2_line").expect("z2_line validates");
    Arc::new(Representation::new(RepSpec {
        name: "circle_scalar".into(),
        dim: 2,
        metric: vec![int(1), int(1)],
        group: Group::Continuous {
            family: "circle".into(),
            tangents: vec![Matrix::from_int_rows(&[&[0, -1], &[1, 0]])],
            samples: vec![rotation(frac(3, 5), frac(4, 5)), rotation(frac(5, 13), frac(-12, 13)), rotation(int(0), int(1))],
            fixed_basis: Vec::new(),
        },
        sigma: vec![xs("x1^2 + x2^2", &v)],
        degrees: vec![2],
        relations: Vec::new(),
        rewriter: Rewriter::Tables(TableScheme { entries: vec![(xs("4*x1^2 + 4*x2^2", &v), xs("4*y", &["y"]))] }),
        preimage: Preimage::NormAxis { axis: 0 },
        section: Some(Section::Subspace(SectionData { basis: vec![vec![int(1), int(0)]], rep: section_rep })),
        slices: Vec::new(),
        max_depth: 1,
        notes: "rotations of the plane; generator |z|²; section the first axis with Weyl group ±1".into(),
    }))
}

/// Conjugation `A ↦ R A Rᵀ` in coordinates `(a, b, c)` of `[[a, b], [b, c]]`.
fn conjugation(c: Rational, s: Rational) -> Matrix {
    let two = int(2);
    Matrix::from_rows(vec![
        vec![&c * &c, -(&two * &c * &s), &s * &s],
        vec![&c * &s, &c * &c - &s * &s, -(&c * &s)],
        vec![&s * &s, &two * &c * &s, &c * &c],
    ])
    .expect("square")
}

fn o2_sym2() -> Arc<Representation> {
    let v = ["a", "b", "c"];
    let y = ["y1", "y2"];
    let weyl = {
        let w = ["x1", "x2"];
        Arc::new(Representation::new(RepSpec {
            name: "o2_sym2/diagonal".into(),
            dim: 2,
            metric: vec![int(1), int(1)],
            group: Group::Finite { elements: vec![Matrix::identity(2), Matrix::from_int_rows(&[&[0, 1], &[1, 0]])] },
            sigma: vec![xs("x1 + x2", &w), xs("x1^2 + x2^2", &w)],
            degrees: vec![1, 2],
            relations: Vec::new(),
            rewriter: Rewriter::Symmetric(SymmetricScheme {
                ambient: 2,
                project: Matrix::identity(2),
                embed: Matrix::identity(2),
                elementary: vec![xs("y1", &y), xs("y1^2/2 - y2/2", &y)],
            }),
            preimage: Preimage::Symmetric,
            section: Some(Section::Whole),
            slices: Vec::new(),
            max_depth: 2,
            notes: "diagonal matrices with the swap of the entries".into(),
        }))
    };
    Arc::new(Representation::new(RepSpec {
        name: "o2_sym2".into(),
        dim: 3,
        metric: vec![int(1), int(2), int(1)],
        group: Group::Continuous {
            family: "conjugation".into(),
            tangents: vec![Matrix::from_int_rows(&[&[0, -2, 0], &[1, 0, -1], &[0, 2, 0]])],
            samples: vec![
                conjugation(frac(3, 5), frac(4, 5)),
                conjugation(frac(5, 13), frac(-12, 13)),
                Matrix::diagonal(&[int(1), int(-1), int(1)]),
            ],
            fixed_basis: vec![vec![int(1), int(0), int(1)]],
        },
        sigma: vec![xs("a + c", &v), xs("a^2 + 2*b^2 + c^2", &v)],
        degrees: vec![1, 2],
        relations: Vec::new(),
        rewriter: Rewriter::Tables(TableScheme {
            entries: vec![(xs("16*b^2 + 4*a^2 - 8*a*c + 4*c^2", &v), xs("8*y2 - 4*y1^2", &y))],
        }),
        preimage: Preimage::ViaSection,
        section: Some(Section::Subspace(SectionData {
            basis: vec![vec![int(1), int(0), int(0)], vec![int(0), int(0), int(1)]],
            rep: weyl,
        })),
        slices: Vec::new(),
        max_depth: 2,
        notes: "O(2) conjugating symmetric 2x2 matrices [[a, b], [b, c]]; generators tr A, tr A²; section the diagonal".into(),
    }))
}

/// The curve read against the Weyl system of the section.
pub fn section_lift_route(c: &OrbitCurve) -> Result<OrbitCurve> {
    match &c.rep.section {
        Some(Section::Whole) => Ok(c.clone()),
        Some(Section::Subspace(sd)) => c.reinterpret(sd.rep.clone()),
        None => Err(Error::NoSection(c.rep.name.clone())),
    }
}
