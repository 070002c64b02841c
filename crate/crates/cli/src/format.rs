//! The JSON input format and its canonical form.

use std::fmt;

use etd_core::error::EtdError;
use etd_core::etd::{resolve_facet, Etd, EtdConfig, FacetSpec};
use etd_core::monoid::ToricMonoid;
use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

/// An integer written as a JSON number or a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(n) => s.serialize_i64(n),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct IntVisitor;
        impl Visitor<'_> for IntVisitor {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                v.trim().parse().map(Int).map_err(|_| E::custom(format!("{v:?} is not a decimal integer")))
            }
        }
        d.deserialize_any(IntVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FacetsField {
    Named(String),
    /// Each facet by indices of `p_generators` spanning it.
    Listed(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtdFile {
    pub name: String,
    pub ambient_rank: usize,
    pub p_generators: Vec<Vec<Int>>,
    #[serde(default)]
    pub q_generators: Vec<Vec<Int>>,
    pub facets: FacetsField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<Int>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_t: Option<usize>,
}

/// A diagnostic for input that cannot be turned into monoid data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
}

impl ParseError {
    fn field(field: String, message: String) -> Self {
        ParseError {
            message,
            line: None,
            column: None,
            field: Some(field),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, "line {l}, column {c}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "field {field}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

/// Validated inputs for the core, before the ETD checks.
pub struct Parsed {
    pub p: ToricMonoid,
    pub q_generators: Vec<Vec<BigInt>>,
    pub facets: FacetSpec,
    pub config: EtdConfig,
}

/// Why a file does not describe an ETD.
#[derive(Debug)]
pub enum LoadError {
    Parse(ParseError),
    Invalid(EtdError),
}

impl From<EtdError> for LoadError {
    fn from(e: EtdError) -> Self {
        LoadError::Invalid(e)
    }
}

fn to_vec(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

impl EtdFile {
    pub fn parse(text: &str) -> Result<EtdFile, ParseError> {
        let file: EtdFile = serde_json::from_str(text).map_err(|e| ParseError {
            message: e.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
            field: None,
        })?;
        file.check_shape()?;
        Ok(file)
    }

    fn check_shape(&self) -> Result<(), ParseError> {
        let n = self.ambient_rank;
        let lists = [("p_generators", &self.p_generators), ("q_generators", &self.q_generators)];
        for (name, list) in lists {
            for (i, v) in list.iter().enumerate() {
                if v.len() != n {
                    return Err(ParseError::field(
                        format!("{name}[{i}]"),
                        format!("expected {n} entries, found {}", v.len()),
                    ));
                }
            }
        }
        if self.p_generators.is_empty() {
            return Err(ParseError::field("p_generators".into(), "must not be empty".into()));
        }
        if let Some(g) = &self.grading {
            if g.len() != n {
                return Err(ParseError::field("grading".into(), format!("expected {n} entries, found {}", g.len())));
            }
        }
        match &self.facets {
            FacetsField::Named(s) if s != "min" && s != "max" => {
                return Err(ParseError::field("facets".into(), format!("expected \"min\", \"max\" or a list, found {s:?}")));
            }
            FacetsField::Listed(list) => {
                let k = self.p_generators.len();
                for (i, f) in list.iter().enumerate() {
                    if let Some(j) = f.iter().position(|&g| g >= k) {
                        return Err(ParseError::field(format!("facets[{i}][{j}]"), format!("index {} out of range; {k} generators", f[j])));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Builds the monoid and resolves facets; `facets` overrides the file.
    pub fn prepare(&self, facets: Option<FacetSpec>) -> Result<Parsed, LoadError> {
        let gens: Vec<Vec<BigInt>> = self.p_generators.iter().map(|v| to_vec(v)).collect();
        let p = ToricMonoid::from_generators(self.ambient_rank, &gens).map_err(EtdError::from)?;
        let facet_choice = match facets {
            Some(s) => s,
            None => match &self.facets {
                FacetsField::Named(s) if s == "min" => FacetSpec::Min,
                FacetsField::Named(_) => FacetSpec::Max,
                FacetsField::Listed(list) => FacetSpec::Explicit(
                    list.iter()
                        .enumerate()
                        .map(|(i, f)| resolve_facet(&p, f, i))
                        .collect::<Result<_, _>>()?,
                ),
            },
        };
        let mut config = EtdConfig::default();
        if let Some(w) = self.window {
            config.window = w;
        }
        config.grading = self.grading.as_ref().map(|g| to_vec(g));
        Ok(Parsed {
            p,
            q_generators: self.q_generators.iter().map(|v| to_vec(v)).collect(),
            facets: facet_choice,
            config,
        })
    }

    pub fn load(&self, facets: Option<FacetSpec>) -> Result<Etd, LoadError> {
        let parsed = self.prepare(facets)?;
        Ok(Etd::validate(parsed.p, &parsed.q_generators, parsed.facets, &parsed.config)?)
    }

    pub fn window(&self) -> u64 {
        self.window.unwrap_or(8)
    }

    /// The file with facets written as full generator-index sets.
    pub fn canonicalize(&self, etd: &Etd) -> EtdFile {
        let mut out = self.clone();
        out.facets = FacetsField::Listed(facet_supports(etd));
        out
    }
}

fn facet_supports(etd: &Etd) -> Vec<Vec<usize>> {
    let mut list: Vec<Vec<usize>> = etd
        .facet_set()
        .iter()
        .map(|&j| {
            let mut g = etd.p().facets()[j].generators.clone();
            g.sort_unstable();
            g
        })
        .collect();
    list.sort();
    list
}

#[derive(Serialize)]
struct FingerprintData<'a> {
    ambient_rank: usize,
    p_generators: Vec<Vec<String>>,
    q_generators: Vec<Vec<String>>,
    facets: serde_json::Value,
    grading: Option<Vec<String>>,
    name: &'a str,
}

/// SHA-256 of the canonical data; numbers are hashed as decimal strings.
/// Without a validated ETD the facets are hashed as written.
pub fn fingerprint(file: &EtdFile, etd: Option<&Etd>) -> String {
    let show = |v: &Vec<Int>| v.iter().map(|x| x.0.to_string()).collect::<Vec<_>>();
    let data = FingerprintData {
        ambient_rank: file.ambient_rank,
        p_generators: file.p_generators.iter().map(show).collect(),
        q_generators: file.q_generators.iter().map(show).collect(),
        facets: match etd {
            Some(etd) => serde_json::to_value(facet_supports(etd)),
            None => serde_json::to_value(&file.facets),
        }
        .expect("serializable"),
        grading: file.grading.as_ref().map(show),
        name: &file.name,
    };
    let bytes = serde_json::to_vec(&data).expect("serializable");
    hex::encode(Sha256::digest(bytes))
}
