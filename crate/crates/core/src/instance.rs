//! Instance files: a TOML description of an algebra, a bimodule over it, and run settings.
//!
//! ```toml
//! [algebra]
//! blocks = [1, 1]
//! weights = [1.0, 1.0]          # optional
//!
//! [bimodule]
//! kind = "explicit"             # builtin | automorphism | explicit | dual | tensor
//! dim = 1
//! left = [{ in = 0, alg = 0, out = 0, value = "1" }]
//! right = [{ in = 0, alg = 1, out = 0, value = "1" }]
//! ip_left = [{ in = 0, alg = 0, out = 0, value = "1" }]
//! ip_right = [{ in = 0, alg = 1, out = 0, value = "1+0i" }]
//!
//! [run]
//! window = 3
//! suites = ["axioms", "sigma"]
//! ```
//!
//! For the actions, `left` entry `(in, alg, out)` is the `e_out` coordinate of
//! `b_alg · e_in`. For the inner products, `in` and `out` are the first and second
//! slot: the entry is the `b_alg` coordinate of `<e_in, e_out>`. `alg` indexes the
//! algebra's orthonormal basis of scaled matrix units, block by block, row-major.

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::algebra::{Algebra, Automorphism};
use crate::bimodule::{tensor, Bimodule, Builtin, DEFAULT_KERNEL_TOL};
use crate::error::Error;
use crate::linalg::{c, CMat, C64};

/// Why an instance file could not be turned into a bimodule.
#[derive(Debug, Clone, PartialEq)]
pub enum SpecError {
    Io(String),
    /// TOML syntax or schema error, with the parser's line and column.
    Syntax(String),
    /// A well-formed file whose field at `path` is unusable.
    Field { path: String, message: String },
    /// Construction hit numerical trouble (ill-conditioning) rather than bad input.
    Numerical { path: String, source: Error },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Io(m) => write!(f, "cannot read instance file: {m}"),
            SpecError::Syntax(m) => write!(f, "{m}"),
            SpecError::Field { path, message } => write!(f, "{path}: {message}"),
            SpecError::Numerical { path, source } => write!(f, "{path}: {source}"),
        }
    }
}

impl std::error::Error for SpecError {}

fn field(path: impl Into<String>, message: impl fmt::Display) -> SpecError {
    SpecError::Field { path: path.into(), message: message.to_string() }
}

fn wrap(path: &str, e: Error) -> SpecError {
    match e {
        Error::IllConditioned { .. } => SpecError::Numerical { path: path.into(), source: e },
        other => field(path, other),
    }
}

/// A complex number written either as a TOML number or as a `"re+imi"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Num {
    Real(f64),
    Text(String),
}

impl Num {
    fn value(&self, path: &str) -> Result<C64, SpecError> {
        match self {
            Num::Real(x) => Ok(c(*x, 0.0)),
            Num::Text(s) => parse_complex(s).ok_or_else(|| field(path, format!("cannot read {s:?} as a complex number (expected re+imi)"))),
        }
    }
}

/// Parses `"1"`, `"-2.5"`, `"3i"`, `"-i"`, `"1+2i"`, `"1e-3-4.5i"`.
pub fn parse_complex(text: &str) -> Option<C64> {
    let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| c(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().ok()? };
    Some(c(re, im))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraSpec {
    blocks: Vec<usize>,
    weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    #[serde(rename = "in")]
    input: usize,
    alg: usize,
    out: usize,
    value: Num,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ModuleSpec {
    Builtin {
        name: String,
    },
    Automorphism {
        permutation: Vec<usize>,
        /// One square matrix per block, as rows; identity when omitted.
        unitaries: Option<Vec<Vec<Vec<Num>>>>,
    },
    Explicit {
        dim: usize,
        #[serde(default)]
        left: Vec<Entry>,
        #[serde(default)]
        right: Vec<Entry>,
        #[serde(default)]
        ip_left: Vec<Entry>,
        #[serde(default)]
        ip_right: Vec<Entry>,
    },
    Dual {
        of: Box<ModuleSpec>,
    },
    Tensor {
        factors: Vec<ModuleSpec>,
    },
}

/// Run settings; every field may be overridden on the command line.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub window: Option<usize>,
    pub tol: Option<f64>,
    pub quadrature: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub suites: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpec {
    algebra: Option<AlgebraSpec>,
    bimodule: ModuleSpec,
    #[serde(default)]
    run: RunSpec,
}

/// A parsed instance, ready for the verification suites.
#[derive(Debug, Clone)]
pub struct Instance {
    pub algebra: Algebra,
    pub module: Bimodule,
    /// Present when the module is `A_α` in its standard basis.
    pub automorphism: Option<Automorphism>,
    pub run: RunSpec,
}

impl Instance {
    pub fn from_builtin(b: &Builtin) -> Self {
        Self { algebra: b.algebra.clone(), module: b.module.clone(), automorphism: b.automorphism.clone(), run: RunSpec::default() }
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let spec: FileSpec = toml::from_str(text).map_err(|e| SpecError::Syntax(e.to_string()))?;
        let algebra = match &spec.algebra {
            Some(a) => Some(build_algebra(a)?),
            None => None,
        };
        let (module, automorphism) = build_module(&spec.bimodule, algebra.as_ref(), "bimodule")?;
        if let Some(w) = spec.run.window {
            if w == 0 {
                return Err(field("run.window", "the window radius must be at least 1"));
            }
        }
        if let Some(t) = spec.run.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(field("run.tol", "the tolerance must be positive"));
            }
        }
        Ok(Self { algebra: module.algebra().clone(), module, automorphism, run: spec.run })
    }
}

fn build_algebra(a: &AlgebraSpec) -> Result<Algebra, SpecError> {
    let weights = a.weights.clone().unwrap_or_else(|| vec![1.0; a.blocks.len()]);
    Algebra::with_weights(a.blocks.clone(), weights).map_err(|e| field("algebra", e))
}

fn require_algebra<'a>(alg: Option<&'a Algebra>, path: &str) -> Result<&'a Algebra, SpecError> {
    alg.ok_or_else(|| field(path, "this kind of bimodule needs an [algebra] section"))
}

fn build_module(spec: &ModuleSpec, alg: Option<&Algebra>, path: &str) -> Result<(Bimodule, Option<Automorphism>), SpecError> {
    match spec {
        ModuleSpec::Builtin { name } => {
            let b = Builtin::by_name(name).ok_or_else(|| {
                field(format!("{path}.name"), format!("unknown builtin {name:?} (expected one of {})", Builtin::NAMES.join(", ")))
            })?;
            if let Some(a) = alg {
                if a != &b.algebra {
                    return Err(field("algebra", format!("builtin {name:?} lives over blocks {:?}", b.algebra.block_dims())));
                }
            }
            Ok((b.module, b.automorphism))
        }
        ModuleSpec::Automorphism { permutation, unitaries } => {
            let alg = require_algebra(alg, path)?;
            let us = match unitaries {
                None => alg.block_dims().iter().map(|&d| CMat::identity(d, d)).collect(),
                Some(list) => list
                    .iter()
                    .enumerate()
                    .map(|(i, rows)| matrix(rows, &format!("{path}.unitaries[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            let alpha = Automorphism::new(alg, permutation.clone(), us).map_err(|e| field(path, e))?;
            Ok((Bimodule::from_automorphism(alg, &alpha), Some(alpha)))
        }
        ModuleSpec::Explicit { dim, left, right, ip_left, ip_right } => {
            let alg = require_algebra(alg, path)?;
            let fill = |entries: &[Entry], name: &str, transpose: bool| -> Result<Vec<CMat>, SpecError> {
                let mut mats = vec![CMat::zeros(*dim, *dim); alg.dim()];
                for (k, e) in entries.iter().enumerate() {
                    let here = format!("{path}.{name}[{k}]");
                    if e.alg >= alg.dim() {
                        return Err(field(format!("{here}.alg"), format!("index {} but the algebra has dimension {}", e.alg, alg.dim())));
                    }
                    for (v, label) in [(e.input, "in"), (e.out, "out")] {
                        if v >= *dim {
                            return Err(field(format!("{here}.{label}"), format!("index {v} but the bimodule has dimension {dim}")));
                        }
                    }
                    let value = e.value.value(&format!("{here}.value"))?;
                    let (r, col) = if transpose { (e.out, e.input) } else { (e.input, e.out) };
                    mats[e.alg][(r, col)] += value;
                }
                Ok(mats)
            };
            let module = Bimodule::from_parts(
                alg.clone(),
                *dim,
                fill(left, "left", true)?,
                fill(right, "right", true)?,
                fill(ip_left, "ip_left", false)?,
                fill(ip_right, "ip_right", false)?,
            )
            .map_err(|e| field(path, e))?;
            Ok((module, None))
        }
        ModuleSpec::Dual { of } => {
            let inner = format!("{path}.of");
            let (m, _) = build_module(of, alg, &inner)?;
            Ok((m.dual().map_err(|e| wrap(&inner, e))?, None))
        }
        ModuleSpec::Tensor { factors } => {
            if factors.len() < 2 {
                return Err(field(format!("{path}.factors"), "a tensor product needs at least two factors"));
            }
            let built = factors
                .iter()
                .enumerate()
                .map(|(i, f)| build_module(f, alg, &format!("{path}.factors[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut acc = built[0].0.clone();
            for (i, (m, _)) in built.iter().enumerate().skip(1) {
                acc = tensor(&acc, m, DEFAULT_KERNEL_TOL).map_err(|e| wrap(&format!("{path}.factors[{i}]"), e))?.module;
            }
            Ok((acc, None))
        }
    }
}

fn matrix(rows: &[Vec<Num>], path: &str) -> Result<CMat, SpecError> {
    let n = rows.len();
    let mut m = CMat::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(field(format!("{path}[{r}]"), format!("expected {n} entries, got {}", row.len())));
        }
        for (col, v) in row.iter().enumerate() {
            m[(r, col)] = v.value(&format!("{path}[{r}][{col}]"))?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimodule::{half, swap};

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1+2i"), Some(c(1.0, 2.0)));
        assert_eq!(parse_complex("-i"), Some(c(0.0, -1.0)));
        assert_eq!(parse_complex("3i"), Some(c(0.0, 3.0)));
        assert_eq!(parse_complex(" -2.5 "), Some(c(-2.5, 0.0)));
        assert_eq!(parse_complex("1e-3-4.5e+1i"), Some(c(1e-3, -45.0)));
        assert_eq!(parse_complex("0.5+i"), Some(c(0.5, 1.0)));
        assert_eq!(parse_complex("1+2j"), None);
        assert_eq!(parse_complex(""), None);
    }

    #[test]
    fn builtin_instance() {
        let inst = Instance::parse("[bimodule]\nkind = \"builtin\"\nname = \"swap\"\n[run]\nwindow = 2\n").unwrap();
        assert!(inst.module.structure_distance(&swap().module) == 0.0);
        assert!(inst.automorphism.is_some());
        assert_eq!(inst.run.window, Some(2));
    }

    #[test]
    fn explicit_half_matches_builtin() {
        let text = r#"
            [algebra]
            blocks = [1, 1]
            [bimodule]
            kind = "explicit"
            dim = 1
            left = [{ in = 0, alg = 0, out = 0, value = "1" }]
            right = [{ in = 0, alg = 1, out = 0, value = 1.0 }]
            ip_left = [{ in = 0, alg = 0, out = 0, value = "1+0i" }]
            ip_right = [{ in = 0, alg = 1, out = 0, value = "1" }]
        "#;
        let inst = Instance::parse(text).unwrap();
        assert!(inst.module.structure_distance(&half().module) < 1e-15);
        assert!(inst.automorphism.is_none());
    }

    #[test]
    fn automorphism_instance() {
        let text = r#"
            [algebra]
            blocks = [2]
            [bimodule]
            kind = "automorphism"
            permutation = [0]
            unitaries = [[["1", "0"], ["0", "i"]]]
        "#;
        let inst = Instance::parse(text).unwrap();
        assert!(inst.module.structure_distance(&crate::bimodule::matrix().module) < 1e-15);
    }

    #[test]
    fn nested_dual_and_tensor() {
        let text = r#"
            [bimodule]
            kind = "tensor"
            factors = [
                { kind = "builtin", name = "half" },
                { kind = "dual", of = { kind = "builtin", name = "half" } },
            ]
        "#;
        let inst = Instance::parse(text).unwrap();
        assert_eq!(inst.module.dim(), 1);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad_value = r#"
            [algebra]
            blocks = [1]
            [bimodule]
            kind = "explicit"
            dim = 1
            left = [{ in = 0, alg = 0, out = 0, value = "one" }]
        "#;
        let e = Instance::parse(bad_value).unwrap_err();
        assert!(e.to_string().starts_with("bimodule.left[0].value:"), "{e}");

        let bad_index = bad_value.replace("value = \"one\"", "value = \"1\"").replace("out = 0", "out = 3");
        let e = Instance::parse(&bad_index).unwrap_err();
        assert!(e.to_string().starts_with("bimodule.left[0].out:"), "{e}");

        let e = Instance::parse("[bimodule]\nkind = \"builtin\"\nname = \"nope\"\n").unwrap_err();
        assert!(e.to_string().starts_with("bimodule.name:"), "{e}");

        let e = Instance::parse("[bimodule]\nkind = \"builtin\"\nname = 3\n").unwrap_err();
        assert!(matches!(e, SpecError::Syntax(_)));
        assert!(e.to_string().contains("line"), "{e}");
    }

    #[test]
    fn dual_of_broken_module_is_a_field_error() {
        let text = r#"
            [algebra]
            blocks = [1]
            [bimodule]
            kind = "dual"
            of = { kind = "explicit", dim = 1, left = [{ in = 0, alg = 0, out = 0, value = "2" }] }
        "#;
        let e = Instance::parse(text).unwrap_err();
        assert!(matches!(&e, SpecError::Field { path, .. } if path == "bimodule.of"), "{e}");
    }
}
