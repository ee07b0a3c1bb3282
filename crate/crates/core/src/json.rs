//! JSON encodings of categories and functors.
//!
//! Terms are encoded per monad: a bare string for the identity monad, an
//! array of strings for the list monad. Nested terms are never serialized.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cat::{CatError, CompEntry, PointedTGraph, TCategory, TFunctor, TGraph};
use crate::finset::{FinMap, FinSet};
use crate::monad::{Monad, TTerm};

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("json error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Invalid(String),
    #[error(transparent)]
    Cat(#[from] CatError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub monad: Monad,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<CompDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub id: String,
    pub dom: Value,
    pub cod: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompDoc {
    pub args: Value,
    pub op: String,
    pub result: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub source: CategoryDoc,
    pub target: CategoryDoc,
    pub object_map: BTreeMap<String, String>,
    pub morphism_map: BTreeMap<String, String>,
}

/// Object-level map input, used by the lifting command.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectMapDoc {
    pub objects: Vec<String>,
    pub map: BTreeMap<String, String>,
}

pub fn term_to_value(monad: Monad, t: &TTerm) -> Value {
    match (monad, t) {
        (Monad::Identity, TTerm::El(x)) => Value::String(x.clone()),
        (Monad::List, TTerm::List(items)) => Value::Array(
            items
                .iter()
                .map(|i| match i {
                    TTerm::El(x) => Value::String(x.clone()),
                    TTerm::List(_) => unreachable!("nested terms are never serialized"),
                })
                .collect(),
        ),
        _ => unreachable!("terms are validated against their monad"),
    }
}

pub fn term_from_value(monad: Monad, v: &Value) -> Result<TTerm, SchemaError> {
    match (monad, v) {
        (Monad::Identity, Value::String(x)) => Ok(TTerm::el(x.clone())),
        (Monad::List, Value::Array(items)) => {
            let entries = items
                .iter()
                .map(|i| match i {
                    Value::String(x) => Ok(TTerm::el(x.clone())),
                    other => Err(SchemaError::Invalid(format!(
                        "list-term entries must be strings, got {other}"
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TTerm::List(entries))
        }
        (Monad::Identity, other) => Err(SchemaError::Invalid(format!(
            "identity-monad terms are bare strings, got {other}"
        ))),
        (Monad::List, other) => Err(SchemaError::Invalid(format!(
            "list-monad terms are string arrays, got {other}"
        ))),
    }
}

pub fn category_to_doc(cat: &TCategory) -> CategoryDoc {
    let monad = cat.monad();
    let morphisms = (0..cat.morphisms().len())
        .map(|i| MorphismDoc {
            id: cat.morphisms().elem(i).to_string(),
            dom: term_to_value(monad, cat.dom().get_idx(i)),
            cod: cat.objects().elem(cat.cod().apply_idx(i)).to_string(),
        })
        .collect();
    let identities = cat
        .objects()
        .iter()
        .enumerate()
        .map(|(x, name)| {
            (
                name.to_string(),
                cat.morphisms().elem(cat.ins().apply_idx(x)).to_string(),
            )
        })
        .collect();
    let composition = (0..cat.pairs().len())
        .map(|p| CompDoc {
            args: term_to_value(monad, cat.pairs().args(p)),
            op: cat.morphisms().elem(cat.pairs().op_idx(p)).to_string(),
            result: cat.comp_name(p).to_string(),
        })
        .collect();
    CategoryDoc {
        monad,
        objects: cat.objects().elements().to_vec(),
        morphisms,
        identities,
        composition,
    }
}

pub fn doc_to_category(doc: &CategoryDoc) -> Result<TCategory, SchemaError> {
    let monad = doc.monad;
    let objects = FinSet::new("objects", doc.objects.iter().cloned())
        .map_err(|e| SchemaError::Invalid(e.to_string()))?;
    let morphisms = FinSet::new("morphisms", doc.morphisms.iter().map(|m| m.id.clone()))
        .map_err(|e| SchemaError::Invalid(e.to_string()))?;
    let doms = doc
        .morphisms
        .iter()
        .map(|m| term_from_value(monad, &m.dom))
        .collect::<Result<Vec<_>, _>>()?;
    let cod = FinMap::from_pairs(
        morphisms.clone(),
        objects.clone(),
        doc.morphisms.iter().map(|m| (m.id.as_str(), m.cod.as_str())),
    )
    .map_err(|e| SchemaError::Invalid(e.to_string()))?;
    let graph = TGraph::new(monad, objects.clone(), morphisms.clone(), doms, cod)?;
    let ins = FinMap::from_pairs(
        objects,
        morphisms,
        doc.identities.iter().map(|(k, v)| (k.as_str(), v.as_str())),
    )
    .map_err(|e| SchemaError::Invalid(e.to_string()))?;
    let pointed = PointedTGraph::new(graph, ins)?;
    let entries = doc
        .composition
        .iter()
        .map(|c| {
            Ok(CompEntry {
                args: term_from_value(monad, &c.args)?,
                op: c.op.clone(),
                result: c.result.clone(),
            })
        })
        .collect::<Result<Vec<_>, SchemaError>>()?;
    TCategory::from_entries(pointed, &entries).map_err(SchemaError::from)
}

pub fn functor_to_doc(f: &TFunctor) -> FunctorDoc {
    let object_map = f
        .source()
        .objects()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            (
                name.to_string(),
                f.target().objects().elem(f.f0().apply_idx(i)).to_string(),
            )
        })
        .collect();
    let morphism_map = f
        .source()
        .morphisms()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            (
                name.to_string(),
                f.target().morphisms().elem(f.f1().apply_idx(i)).to_string(),
            )
        })
        .collect();
    FunctorDoc {
        source: category_to_doc(f.source()),
        target: category_to_doc(f.target()),
        object_map,
        morphism_map,
    }
}

pub fn doc_to_functor(doc: &FunctorDoc) -> Result<TFunctor, SchemaError> {
    if doc.source.monad != doc.target.monad {
        return Err(SchemaError::Invalid(
            "source and target must use the same monad".into(),
        ));
    }
    let source = std::sync::Arc::new(doc_to_category(&doc.source)?);
    let target = std::sync::Arc::new(doc_to_category(&doc.target)?);
    let f0 = FinMap::from_pairs(
        source.objects().clone(),
        target.objects().clone(),
        doc.object_map.iter().map(|(k, v)| (k.as_str(), v.as_str())),
    )
    .map_err(|e| SchemaError::Invalid(e.to_string()))?;
    let f1 = FinMap::from_pairs(
        source.morphisms().clone(),
        target.morphisms().clone(),
        doc.morphism_map.iter().map(|(k, v)| (k.as_str(), v.as_str())),
    )
    .map_err(|e| SchemaError::Invalid(e.to_string()))?;
    TFunctor::new(source, target, f0, f1).map_err(SchemaError::from)
}

pub fn category_to_string(cat: &TCategory) -> String {
    serde_json::to_string_pretty(&category_to_doc(cat)).expect("docs serialize")
}

pub fn category_from_str(s: &str) -> Result<TCategory, SchemaError> {
    let doc: CategoryDoc = serde_json::from_str(s)?;
    doc_to_category(&doc)
}

pub fn functor_to_string(f: &TFunctor) -> String {
    serde_json::to_string_pretty(&functor_to_doc(f)).expect("docs serialize")
}

pub fn functor_from_str(s: &str) -> Result<TFunctor, SchemaError> {
    let doc: FunctorDoc = serde_json::from_str(s)?;
    doc_to_functor(&doc)
}
