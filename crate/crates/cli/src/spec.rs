//! Algebra spec files: JSON description of a base algebra, a derivation,
//! and named elements, validated into a [`ConformalAlgebra`].

use crate::error::CliError;
use confalg::algebra::rational::int;
use confalg::algebra::{DerivationKind, SubalgebraSpan, DEFAULT_CHECK_DEGREE};
use confalg::*;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    Scalar,
    Poly,
    Matrix(u16),
    MatrixPoly(u16),
    DirectSum(Vec<BaseSpec>),
    Subalgebra(Box<SubalgebraSpec>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubalgebraSpec {
    pub parent: BaseSpec,
    #[serde(default)]
    pub span: Vec<String>,
    pub monomials_from_degree: Option<u32>,
    #[serde(default)]
    pub unital: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DerivationSpec {
    #[default]
    Zero,
    Ddx,
    Inner(String),
    /// Images of basis elements; on polynomial blocks the images of `x·e_jj`
    /// extend by the Leibniz rule.
    Table(BTreeMap<String, String>),
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionSpec {
    Current,
    Differential,
    Cend,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub base: BaseSpec,
    #[serde(default)]
    pub derivation: DerivationSpec,
    pub construction: Option<ConstructionSpec>,
    pub check_degree: Option<u32>,
    #[serde(default)]
    pub elements: BTreeMap<String, String>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub ideals: BTreeMap<String, Vec<String>>,
}

/// A validated spec.
#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    pub algebra: ConformalAlgebra,
    pub scope: Scope,
    pub generators: Vec<String>,
    pub ideals: BTreeMap<String, Vec<String>>,
}

impl AlgebraSpec {
    pub fn element(&self, src: &str) -> Result<ConformalElement, CliError> {
        parse_conformal_element(&self.algebra, src, &self.scope).map_err(|e| CliError::element(src, e))
    }

    pub fn base_element(&self, src: &str) -> Result<AlgebraElement, CliError> {
        parse_algebra_element(self.algebra.shape(), src, &self.scope).map_err(|e| CliError::element(src, e))
    }

    /// Generators given on the command line, else those of the spec.
    pub fn generator_set(&self, names: &[String]) -> Result<GeneratorSet, CliError> {
        let names = if names.is_empty() { &self.generators } else { names };
        if names.is_empty() {
            return Err(CliError::Usage("no generators: pass --gens or list them in the spec".into()));
        }
        let pairs = names
            .iter()
            .map(|n| Ok((n.clone(), self.element(n)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        GeneratorSet::new(pairs).map_err(CliError::Lib)
    }
}

pub fn load_spec(path: &Path) -> Result<AlgebraSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let raw: RawSpec = serde_json::from_str(&text).map_err(|e| CliError::SpecParse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build(raw).map_err(|e| CliError::SpecInvalid {
        path: path.display().to_string(),
        message: match e {
            CliError::Lib(err) => err.to_string(),
            other => other.to_string(),
        },
    })
}

fn build_base(spec: &BaseSpec, check_degree: u32) -> Result<BaseAlgebra, CliError> {
    Ok(match spec {
        BaseSpec::Scalar => BaseAlgebra::scalar(),
        BaseSpec::Poly => BaseAlgebra::poly(),
        BaseSpec::Matrix(n) => BaseAlgebra::matrix(*n)?,
        BaseSpec::MatrixPoly(n) => BaseAlgebra::matrix_poly(*n)?,
        BaseSpec::DirectSum(parts) => {
            let parts = parts
                .iter()
                .map(|p| build_base(p, check_degree))
                .collect::<Result<Vec<_>, _>>()?;
            BaseAlgebra::direct_sum(parts)?
        }
        BaseSpec::Subalgebra(sub) => {
            let parent = build_base(&sub.parent, check_degree)?;
            let scope = Scope::new();
            let elements = sub
                .span
                .iter()
                .map(|s| parse_algebra_element(parent.shape(), s, &scope).map_err(|e| CliError::element(s, e)))
                .collect::<Result<Vec<_>, _>>()?;
            let span = SubalgebraSpan {
                elements,
                monomials_from_degree: sub.monomials_from_degree,
            };
            BaseAlgebra::subalgebra(parent, span, sub.unital, check_degree)?
        }
    })
}

fn build_derivation(spec: &DerivationSpec, base: &BaseAlgebra) -> Result<Derivation, CliError> {
    let shape = base.shape();
    let scope = Scope::new();
    let parse = |s: &str| parse_algebra_element(shape, s, &scope).map_err(|e| CliError::element(s, e));
    Ok(match spec {
        DerivationSpec::Zero => Derivation::zero(shape),
        DerivationSpec::Ddx => Derivation::ddx(shape),
        DerivationSpec::Inner(r) => Derivation::inner(parse(r)?),
        DerivationSpec::Table(entries) => {
            let mut images = BTreeMap::new();
            for (key, img) in entries {
                let k = parse(key)?;
                let mut terms = k.terms().iter();
                let (Some((b, c)), None) = (terms.next(), terms.next()) else {
                    return Err(CliError::Usage(format!("derivation table key {key:?} is not a basis element")));
                };
                if *c != int(1) {
                    return Err(CliError::Usage(format!("derivation table key {key:?} is not a basis element")));
                }
                images.insert(*b, parse(img)?);
            }
            Derivation::table(shape, images)?
        }
    })
}

fn cend_size(base: &BaseAlgebra) -> Option<u16> {
    use confalg::algebra::AlgebraKind;
    match base.kind() {
        AlgebraKind::Poly => Some(1),
        AlgebraKind::MatrixPoly(n) => Some(*n),
        _ => None,
    }
}

fn build(raw: RawSpec) -> Result<AlgebraSpec, CliError> {
    let check_degree = raw.check_degree.unwrap_or(DEFAULT_CHECK_DEGREE);
    let base = build_base(&raw.base, check_degree)?;
    let d = build_derivation(&raw.derivation, &base)?;
    let is_ddx = matches!(d.kind(), DerivationKind::Ddx);
    let construction = raw.construction.unwrap_or(match (&raw.derivation, cend_size(&base)) {
        (DerivationSpec::Zero, _) => ConstructionSpec::Current,
        (_, Some(_)) if is_ddx => ConstructionSpec::Cend,
        _ => ConstructionSpec::Differential,
    });
    let algebra = match construction {
        ConstructionSpec::Current => {
            if !d.is_zero() {
                return Err(CliError::Lib(Error::Validation(
                    "construction \"current\" needs the zero derivation".into(),
                )));
            }
            make_current(&base)
        }
        ConstructionSpec::Differential => make_differential(&base, &d, check_degree)?,
        ConstructionSpec::Cend => match cend_size(&base) {
            Some(n) if is_ddx => make_cend(n)?,
            _ => {
                return Err(CliError::Lib(Error::Validation(
                    "construction \"cend\" needs base poly or matrix_poly with derivation ddx".into(),
                )))
            }
        },
    };
    let mut scope = Scope::for_algebra(&algebra);
    for (name, expr) in &raw.elements {
        scope.define(name, expr)?;
    }
    // Every definition, generator and ideal element must resolve now.
    let resolve = |src: &str| parse_conformal_element(&algebra, src, &scope).map_err(|e| CliError::element(src, e));
    // Named elements may lie outside a subalgebra base (e.g. the `a` of
    // is-current), so only syntax and name resolution are enforced.
    for name in raw.elements.keys() {
        match resolve(name) {
            Err(CliError::Element { source: Error::Domain(_), .. }) | Ok(_) => {}
            Err(e) => return Err(e),
        }
    }
    for g in &raw.generators {
        resolve(g)?;
    }
    for (name, gens) in &raw.ideals {
        if gens.is_empty() {
            return Err(CliError::Lib(Error::Validation(format!("ideal {name:?} has no generators"))));
        }
        for g in gens {
            parse_algebra_element(algebra.shape(), g, &scope).map_err(|e| CliError::element(g, e))?;
        }
    }
    Ok(AlgebraSpec {
        algebra,
        scope,
        generators: raw.generators,
        ideals: raw.ideals,
    })
}
