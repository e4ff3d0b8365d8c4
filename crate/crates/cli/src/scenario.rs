//! Scenario file format: JSON with matrices as row-major `[re, im]` arrays.
//!
//! A scenario pins everything a run needs — the polynomial context, one
//! site, named functionals, named fully matricial sets/functions, the suite
//! selection, the sampler and tolerance scaling — so that reports are
//! reproducible byte for byte under a fixed seed.

use std::collections::BTreeMap;

use serde::Deserialize;

use fdq_core::duality::Functional;
use fdq_core::fm::{fm_add, fm_mul, fm_scale, fm_star, FMFunc, FMSet, ScalarRegion};
use fdq_core::linalg::{c, CMat, C64};
use fdq_core::ncalg::{Context, NCPoly};
use fdq_core::resolvent::Site;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub format_version: u32,
    pub seed: u64,
    pub context: ContextDecl,
    #[serde(default)]
    pub site: Option<SiteDecl>,
    #[serde(default)]
    pub functionals: Vec<FunctionalDecl>,
    #[serde(default)]
    pub fm_sets: Vec<FMSetDecl>,
    #[serde(default)]
    pub fm_funcs: Vec<FMFuncDecl>,
    pub suites: Vec<String>,
    pub sampler: SamplerDecl,
    #[serde(default)]
    pub lift: Option<LiftDecl>,
    #[serde(default)]
    pub tolerances: Option<TolerancesDecl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextDecl {
    pub q: usize,
    pub n_vars: usize,
    pub truncation: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDecl {
    pub d: usize,
    pub b_basis: Vec<MatrixDecl>,
    pub y: MatrixDecl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalDecl {
    pub name: String,
    pub weight: MatrixDecl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDecl {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixDecl {
    pub fn build(&self) -> Result<CMat, String> {
        if self.entries.len() != self.rows * self.cols {
            return Err(format!(
                "matrix declares {}x{} but has {} entries",
                self.rows,
                self.cols,
                self.entries.len()
            ));
        }
        let data: Vec<C64> = self.entries.iter().map(|&[re, im]| c(re, im)).collect();
        Ok(CMat::from_row_slice(self.rows, self.cols, &data))
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionDecl {
    Disk { center: [f64; 2], radius: f64 },
    DiskComplement { center: [f64; 2], radius: f64 },
    HalfPlane { a: [f64; 2], c: f64 },
    Union { parts: Vec<RegionDecl> },
}

impl RegionDecl {
    fn build(&self) -> ScalarRegion {
        match self {
            RegionDecl::Disk { center, radius } => ScalarRegion::Disk {
                center: c(center[0], center[1]),
                radius: *radius,
            },
            RegionDecl::DiskComplement { center, radius } => ScalarRegion::DiskComplement {
                center: c(center[0], center[1]),
                radius: *radius,
            },
            RegionDecl::HalfPlane { a, c: offset } => ScalarRegion::HalfPlane {
                a: c(a[0], a[1]),
                c: *offset,
            },
            RegionDecl::Union { parts } => {
                ScalarRegion::Union(parts.iter().map(RegionDecl::build).collect())
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FMSetDeclKind {
    Spectrum { region: RegionDecl },
    Resolvent,
    Intersection { parts: Vec<String> },
}

#[derive(Debug, Deserialize)]
pub struct FMSetDecl {
    pub name: String,
    #[serde(flatten)]
    pub kind: FMSetDeclKind,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FMFuncDeclKind {
    FuncCalc {
        num: Vec<[f64; 2]>,
        #[serde(default)]
        den: Option<Vec<[f64; 2]>>,
        domain: RegionDecl,
    },
    PolyEval {
        poly: PolyDecl,
    },
    Resolvent,
    UTransform {
        functional: String,
    },
    Add {
        left: String,
        right: String,
    },
    Mul {
        left: String,
        right: String,
    },
    Star {
        operand: String,
    },
    Scale {
        factor: [f64; 2],
        operand: String,
    },
}

#[derive(Debug, Deserialize)]
pub struct FMFuncDecl {
    pub name: String,
    #[serde(flatten)]
    pub kind: FMFuncDeclKind,
}

/// Word-list serialization of a polynomial: one term per entry, with
/// 0-based matrix-unit index pairs and variable indices.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyDecl {
    pub terms: Vec<TermDecl>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDecl {
    pub coeff: [f64; 2],
    pub units: Vec<[u8; 2]>,
    pub vars: Vec<u8>,
}

impl PolyDecl {
    pub fn build(&self, ctx: Context) -> Result<NCPoly, String> {
        let mut p = NCPoly::zero(ctx);
        for t in &self.terms {
            if t.units.len() != t.vars.len() + 1 {
                return Err("term must have one more unit than variables".into());
            }
            if t.units
                .iter()
                .any(|&[r, s]| r as usize >= ctx.q || s as usize >= ctx.q)
                || t.vars.iter().any(|&v| v as usize >= ctx.n_vars)
            {
                return Err("term indices out of range for the context".into());
            }
            let units: Vec<(u8, u8)> = t.units.iter().map(|&[r, s]| (r, s)).collect();
            p = p.add(&NCPoly::monomial(
                ctx,
                c(t.coeff[0], t.coeff[1]),
                &units,
                &t.vars,
            ));
        }
        Ok(p)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerDecl {
    pub samples: usize,
    pub max_degree: usize,
    pub max_terms: usize,
    pub max_size: usize,
    #[serde(default = "default_true")]
    pub integer_coeffs: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftDecl {
    pub p: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesDecl {
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_scale() -> f64 {
    1.0
}

/// Everything a run needs, resolved from the declarations.
pub struct Built {
    pub context: Context,
    pub truncation: usize,
    pub site: Option<Site>,
    pub functionals: Vec<(String, Functional)>,
    pub fm_sets: Vec<(String, FMSet)>,
    pub fm_funcs: Vec<(String, FMFunc)>,
    pub lift_p: usize,
}

impl Scenario {
    /// Structural validation: format version and the documented caps.
    pub fn validate(&self) -> Result<(), String> {
        if self.format_version != FORMAT_VERSION {
            return Err(format!(
                "unsupported format_version {} (expected {})",
                self.format_version, FORMAT_VERSION
            ));
        }
        if self.context.q == 0 || self.context.q > 3 {
            return Err("context.q must be in 1..=3".into());
        }
        if self.context.n_vars == 0 || self.context.n_vars > 6 {
            return Err("context.n_vars must be in 1..=6".into());
        }
        if self.context.truncation < 2 || self.context.truncation > 8 {
            return Err("context.truncation must be in 2..=8".into());
        }
        if self
            .context
            .q
            .checked_pow(self.context.truncation as u32 + 1)
            .is_none_or(|v| v > 4096)
        {
            return Err("q^(truncation+1) exceeds the dense series cap of 4096".into());
        }
        if let Some(site) = &self.site {
            if site.d == 0 || site.d > 6 {
                return Err("site.d must be in 1..=6".into());
            }
        }
        if self.sampler.max_size == 0 || self.sampler.max_size > 6 {
            return Err("sampler.max_size must be in 1..=6".into());
        }
        if self.sampler.samples == 0 || self.sampler.samples > 2000 {
            return Err("sampler.samples must be in 1..=2000".into());
        }
        if self.sampler.max_degree > 8 {
            return Err("sampler.max_degree must be at most 8".into());
        }
        let known = [
            "all",
            "gdq",
            "corep",
            "lift",
            "resolvent",
            "fm",
            "dq",
            "dualpos",
            "utransform",
        ];
        for s in &self.suites {
            if !known.contains(&s.as_str()) {
                return Err(format!("unknown suite {:?}", s));
            }
        }
        if let Some(tol) = &self.tolerances {
            if !(tol.scale.is_finite() && tol.scale > 0.0) {
                return Err("tolerances.scale must be positive".into());
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Built, String> {
        self.validate()?;
        let context = Context::new(self.context.q, self.context.n_vars);

        let site = match &self.site {
            Some(decl) => {
                let basis = decl
                    .b_basis
                    .iter()
                    .map(MatrixDecl::build)
                    .collect::<Result<Vec<_>, _>>()?;
                let y = decl.y.build()?;
                Some(Site::new(decl.d, basis, y).map_err(|e| format!("site: {}", e))?)
            }
            None => None,
        };

        let mut functionals = Vec::new();
        for f in &self.functionals {
            let w = f.weight.build()?;
            if let Some(site) = &site {
                if w.nrows() != site.dim() {
                    return Err(format!("functional {:?} has the wrong size", f.name));
                }
            }
            functionals.push((
                f.name.clone(),
                Functional::new(w).map_err(|e| e.to_string())?,
            ));
        }

        let mut sets: BTreeMap<String, FMSet> = BTreeMap::new();
        let mut set_order = Vec::new();
        for decl in &self.fm_sets {
            let set = match &decl.kind {
                FMSetDeclKind::Spectrum { region } => FMSet::Spectrum(region.build()),
                FMSetDeclKind::Resolvent => FMSet::Resolvent(
                    site.clone()
                        .ok_or_else(|| "resolvent set needs a site".to_string())?,
                ),
                FMSetDeclKind::Intersection { parts } => {
                    let mut built = Vec::new();
                    for p in parts {
                        built.push(
                            sets.get(p)
                                .cloned()
                                .ok_or_else(|| format!("unknown set {:?}", p))?,
                        );
                    }
                    FMSet::intersection(built).map_err(|e| e.to_string())?
                }
            };
            if sets.insert(decl.name.clone(), set.clone()).is_some() {
                return Err(format!("duplicate set name {:?}", decl.name));
            }
            set_order.push((decl.name.clone(), set));
        }

        let mut funcs: BTreeMap<String, FMFunc> = BTreeMap::new();
        let mut func_order = Vec::new();
        let lookup_func = |funcs: &BTreeMap<String, FMFunc>, name: &str| {
            funcs
                .get(name)
                .cloned()
                .ok_or_else(|| format!("unknown function {:?}", name))
        };
        for decl in &self.fm_funcs {
            let f = match &decl.kind {
                FMFuncDeclKind::FuncCalc { num, den, domain } => {
                    let num: Vec<C64> = num.iter().map(|&[re, im]| c(re, im)).collect();
                    let den: Vec<C64> = den
                        .as_ref()
                        .map(|d| d.iter().map(|&[re, im]| c(re, im)).collect())
                        .unwrap_or_else(|| vec![c(1.0, 0.0)]);
                    FMFunc::func_rational(num, den, domain.build())
                }
                FMFuncDeclKind::PolyEval { poly } => {
                    let poly_ctx = Context::new(self.context.q, 1);
                    FMFunc::poly_eval(poly.build(poly_ctx)?).map_err(|e| e.to_string())?
                }
                FMFuncDeclKind::Resolvent => FMFunc::Resolvent {
                    site: site
                        .clone()
                        .ok_or_else(|| "resolvent function needs a site".to_string())?,
                },
                FMFuncDeclKind::UTransform { functional } => {
                    let phi = functionals
                        .iter()
                        .find(|(n, _)| n == functional)
                        .map(|(_, f)| f.clone())
                        .ok_or_else(|| format!("unknown functional {:?}", functional))?;
                    fdq_core::duality::u_transform(
                        site.as_ref()
                            .ok_or_else(|| "u_transform needs a site".to_string())?,
                        &phi,
                    )
                    .map_err(|e| e.to_string())?
                }
                FMFuncDeclKind::Add { left, right } => {
                    fm_add(lookup_func(&funcs, left)?, lookup_func(&funcs, right)?)
                        .map_err(|e| e.to_string())?
                }
                FMFuncDeclKind::Mul { left, right } => {
                    fm_mul(lookup_func(&funcs, left)?, lookup_func(&funcs, right)?)
                        .map_err(|e| e.to_string())?
                }
                FMFuncDeclKind::Star { operand } => fm_star(lookup_func(&funcs, operand)?),
                FMFuncDeclKind::Scale { factor, operand } => {
                    fm_scale(c(factor[0], factor[1]), lookup_func(&funcs, operand)?)
                }
            };
            if funcs.insert(decl.name.clone(), f.clone()).is_some() {
                return Err(format!("duplicate function name {:?}", decl.name));
            }
            func_order.push((decl.name.clone(), f));
        }

        Ok(Built {
            context,
            truncation: self.context.truncation,
            site,
            functionals,
            fm_sets: set_order,
            fm_funcs: func_order,
            lift_p: self.lift.as_ref().map(|l| l.p).unwrap_or(2).clamp(1, 3),
        })
    }
}
